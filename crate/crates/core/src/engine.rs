//! Stateless transformers, pipeline/union composition and chunked
//! parallel batch execution.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{CompositionError, ConfigError, Error, Result};
use crate::fingerprints::{Features, FingerprintConfig, FingerprintVector, Variant};
use crate::matrix::{from_real_rows, from_rows, hstack, Matrix, OutputForm};
use crate::mol::Molecule;
use crate::smiles::mol_from_smiles;

/// What a transformer consumes or produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Text,
    Molecule,
    Vector,
}

/// One record flowing through a transformer.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Text(String),
    Molecule(Molecule),
    Row(Row),
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Text(_) => Kind::Text,
            Value::Molecule(_) => Kind::Molecule,
            Value::Row(_) => Kind::Vector,
        }
    }
}

/// Per-record vector output; unions concatenate their branch rows.
#[derive(Clone, Debug, PartialEq)]
pub enum Row {
    Vector(FingerprintVector),
    Real(Vec<f64>),
    Concat(Vec<Row>),
}

impl Row {
    pub fn width(&self) -> usize {
        match self {
            Row::Vector(v) => v.len(),
            Row::Real(r) => r.len(),
            Row::Concat(parts) => parts.iter().map(Row::width).sum(),
        }
    }

    /// Flattened dense values.
    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            Row::Vector(v) => v.to_dense().into_iter().map(f64::from).collect(),
            Row::Real(r) => r.clone(),
            Row::Concat(parts) => parts.iter().flat_map(Row::to_dense).collect(),
        }
    }
}

/// Inputs accepted by batch operations.
pub trait BatchInput {
    fn to_value(&self) -> Value;
}

impl BatchInput for str {
    fn to_value(&self) -> Value {
        Value::Text(self.to_string())
    }
}

impl BatchInput for String {
    fn to_value(&self) -> Value {
        Value::Text(self.clone())
    }
}

impl<T: BatchInput + ?Sized> BatchInput for &T {
    fn to_value(&self) -> Value {
        (**self).to_value()
    }
}

impl BatchInput for Molecule {
    fn to_value(&self) -> Value {
        Value::Molecule(self.clone())
    }
}

impl BatchInput for Value {
    fn to_value(&self) -> Value {
        self.clone()
    }
}

/// Column layout of a transformer's vector output.
#[derive(Clone, Debug, PartialEq)]
enum Schema {
    Vector { width: usize, variant: Variant },
    Real { width: usize },
    Concat(Vec<Schema>),
}

impl Schema {
    fn width(&self) -> usize {
        match self {
            Schema::Vector { width, .. } | Schema::Real { width } => *width,
            Schema::Concat(parts) => parts.iter().map(Schema::width).sum(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Transformer {
    /// SMILES text → sanitized molecule.
    Parser,
    /// Molecule → fingerprint row.
    Fingerprint(FingerprintConfig),
    Pipeline(Vec<Transformer>),
    Union(Vec<Transformer>),
}

impl Transformer {
    pub fn parser() -> Self {
        Transformer::Parser
    }

    pub fn fingerprint(cfg: FingerprintConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        Ok(Transformer::Fingerprint(cfg))
    }

    /// Sequential composition; each stage must accept its predecessor's output.
    pub fn pipeline(stages: Vec<Transformer>) -> Result<Self, CompositionError> {
        if stages.is_empty() {
            return Err(CompositionError("pipeline needs at least one stage".into()));
        }
        for (i, w) in stages.windows(2).enumerate() {
            if w[0].output_kind() != w[1].input_kind() {
                return Err(CompositionError(format!(
                    "stage {} outputs {:?} but stage {} expects {:?}",
                    i,
                    w[0].output_kind(),
                    i + 1,
                    w[1].input_kind()
                )));
            }
        }
        Ok(Transformer::Pipeline(stages))
    }

    /// Column-wise concatenation of branch outputs, in declaration order.
    pub fn union(branches: Vec<Transformer>) -> Result<Self, CompositionError> {
        let first = branches
            .first()
            .ok_or_else(|| CompositionError("union needs at least one branch".into()))?;
        let input = first.input_kind();
        for (i, b) in branches.iter().enumerate() {
            if b.input_kind() != input {
                return Err(CompositionError(format!(
                    "branch {i} consumes {:?} but branch 0 consumes {input:?}",
                    b.input_kind()
                )));
            }
            if b.output_kind() != Kind::Vector {
                return Err(CompositionError(format!(
                    "branch {i} does not produce vectors"
                )));
            }
        }
        Ok(Transformer::Union(branches))
    }

    /// Parser followed by a fingerprint.
    pub fn smiles_fingerprint(cfg: FingerprintConfig) -> Result<Self> {
        Ok(Self::pipeline(vec![
            Self::parser(),
            Self::fingerprint(cfg)?,
        ])?)
    }

    pub fn input_kind(&self) -> Kind {
        match self {
            Transformer::Parser => Kind::Text,
            Transformer::Fingerprint(_) => Kind::Molecule,
            Transformer::Pipeline(s) => s[0].input_kind(),
            Transformer::Union(b) => b[0].input_kind(),
        }
    }

    pub fn output_kind(&self) -> Kind {
        match self {
            Transformer::Parser => Kind::Molecule,
            Transformer::Fingerprint(_) | Transformer::Union(_) => Kind::Vector,
            Transformer::Pipeline(s) => s[s.len() - 1].output_kind(),
        }
    }

    fn schema(&self) -> Option<Schema> {
        match self {
            Transformer::Parser => None,
            Transformer::Fingerprint(cfg) => Some(match cfg.family {
                crate::fingerprints::Family::Descriptors => Schema::Real { width: cfg.width() },
                _ => Schema::Vector {
                    width: cfg.width(),
                    variant: cfg.variant,
                },
            }),
            Transformer::Pipeline(s) => s[s.len() - 1].schema(),
            Transformer::Union(b) => b
                .iter()
                .map(Transformer::schema)
                .collect::<Option<_>>()
                .map(Schema::Concat),
        }
    }

    /// Output columns, or `None` when the output is not a vector.
    pub fn width(&self) -> Option<usize> {
        self.schema().map(|s| s.width())
    }

    /// Applies the transformer to one record.
    pub fn apply(&self, value: &Value) -> Result<Value> {
        let mismatch = || {
            Error::from(CompositionError(format!(
                "expected {:?} input, got {:?}",
                self.input_kind(),
                value.kind()
            )))
        };
        match self {
            Transformer::Parser => match value {
                Value::Text(s) => Ok(Value::Molecule(mol_from_smiles(s)?)),
                _ => Err(mismatch()),
            },
            Transformer::Fingerprint(cfg) => match value {
                Value::Molecule(m) => Ok(Value::Row(match cfg.compute(m) {
                    Features::Vector(v) => Row::Vector(v),
                    Features::Real(r) => Row::Real(r),
                })),
                _ => Err(mismatch()),
            },
            Transformer::Pipeline(stages) => {
                let mut cur = stages[0].apply(value)?;
                for s in &stages[1..] {
                    cur = s.apply(&cur)?;
                }
                Ok(cur)
            }
            Transformer::Union(branches) => {
                let mut parts = Vec::with_capacity(branches.len());
                for b in branches {
                    match b.apply(value)? {
                        Value::Row(r) => parts.push(r),
                        _ => unreachable!("union branches produce vectors"),
                    }
                }
                Ok(Value::Row(Row::Concat(parts)))
            }
        }
    }

    /// Runs the transformer over `inputs` and assembles the rows into a matrix.
    pub fn transform_batch<I: BatchInput + Sync>(
        &self,
        inputs: &[I],
        opts: &BatchOptions,
        form: OutputForm,
    ) -> Result<(Matrix, BatchReport)> {
        let schema = self.schema().ok_or_else(|| {
            CompositionError(format!(
                "transform_batch needs vector output, got {:?}",
                self.output_kind()
            ))
        })?;
        let (rows, report) = map_batch(inputs, opts, |x| match self.apply(&x.to_value())? {
            Value::Row(r) => Ok(r),
            _ => unreachable!("schema guarantees vector output"),
        })?;
        Ok((assemble(&schema, rows, form)?, report))
    }
}

fn assemble(schema: &Schema, rows: Vec<Row>, form: OutputForm) -> Result<Matrix> {
    Ok(match schema {
        Schema::Vector { width, variant } => {
            let vs: Vec<FingerprintVector> = rows
                .into_iter()
                .map(|r| match r {
                    Row::Vector(v) => v,
                    _ => unreachable!("row matches schema"),
                })
                .collect();
            from_rows(&vs, *width, *variant, form)?
        }
        Schema::Real { width } => {
            let rs: Vec<Vec<f64>> = rows
                .into_iter()
                .map(|r| match r {
                    Row::Real(v) => v,
                    _ => unreachable!("row matches schema"),
                })
                .collect();
            from_real_rows(&rs, *width, form)?
        }
        Schema::Concat(parts) => {
            let mut columns: Vec<Vec<Row>> = parts
                .iter()
                .map(|_| Vec::with_capacity(rows.len()))
                .collect();
            for r in rows {
                let Row::Concat(cells) = r else {
                    unreachable!("row matches schema")
                };
                for (col, cell) in columns.iter_mut().zip(cells) {
                    col.push(cell);
                }
            }
            let blocks = parts
                .iter()
                .zip(columns)
                .map(|(s, c)| assemble(s, c, form))
                .collect::<Result<Vec<_>>>()?;
            hstack(&blocks)?.into_form(form)
        }
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Jobs {
    /// One worker per available core.
    #[default]
    Auto,
    Fixed(usize),
}

impl Jobs {
    pub fn resolve(self) -> usize {
        match self {
            Jobs::Auto => std::thread::available_parallelism().map_or(1, |n| n.get()),
            Jobs::Fixed(n) => n.max(1),
        }
    }
}

impl std::str::FromStr for Jobs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Jobs::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Jobs::Fixed(n)),
            _ => Err(format!(
                "jobs must be a positive integer or 'auto', got '{s}'"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ErrorMode {
    /// Abort on the first (lowest-index) failing record.
    #[default]
    Raise,
    /// Drop failing records and list them in the report.
    Skip,
}

impl std::str::FromStr for ErrorMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raise" => Ok(ErrorMode::Raise),
            "skip" => Ok(ErrorMode::Skip),
            _ => Err(format!("error mode must be 'raise' or 'skip', got '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BatchOptions {
    pub jobs: Jobs,
    pub chunk_size: Option<usize>,
    pub error_mode: ErrorMode,
}

impl BatchOptions {
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = Jobs::Fixed(jobs);
        self
    }

    pub fn with_chunk_size(mut self, size: usize) -> Self {
        self.chunk_size = Some(size);
        self
    }

    pub fn with_error_mode(mut self, mode: ErrorMode) -> Self {
        self.error_mode = mode;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub index: usize,
    pub kind: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BatchReport {
    pub n_input: usize,
    pub n_ok: usize,
    pub failures: Vec<Failure>,
}

/// Contiguous chunk ranges: `chunk_size` records each when given, otherwise
/// `min(jobs, n)` chunks whose sizes differ by at most one.
pub fn chunk_ranges(n: usize, jobs: usize, chunk_size: Option<usize>) -> Vec<Range<usize>> {
    match chunk_size {
        Some(c) => {
            let c = c.max(1);
            (0..n).step_by(c).map(|s| s..(s + c).min(n)).collect()
        }
        None => {
            let k = jobs.max(1).min(n);
            let mut out = Vec::with_capacity(k);
            let mut start = 0;
            for i in 0..k {
                let len = n / k + usize::from(i < n % k);
                out.push(start..start + len);
                start += len;
            }
            out
        }
    }
}

fn thread_pool(jobs: usize) -> Arc<ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().unwrap();
    pools
        .entry(jobs)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .thread_name(|i| format!("molfp-worker-{i}"))
                    .build()
                    .expect("thread pool"),
            )
        })
        .clone()
}

/// Applies `f` to every input in parallel chunks and gathers results in
/// input order, handling failures according to `opts.error_mode`.
pub fn map_batch<I, T, F>(inputs: &[I], opts: &BatchOptions, f: F) -> Result<(Vec<T>, BatchReport)>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync,
{
    let jobs = opts.jobs.resolve();
    let chunks = chunk_ranges(inputs.len(), jobs, opts.chunk_size);
    let run = |r: &Range<usize>| -> Vec<Result<T>> { inputs[r.clone()].iter().map(&f).collect() };
    let blocks: Vec<Vec<Result<T>>> = if jobs == 1 {
        chunks.iter().map(run).collect()
    } else {
        thread_pool(jobs).install(|| chunks.par_iter().map(run).collect())
    };

    let mut out = Vec::with_capacity(inputs.len());
    let mut report = BatchReport {
        n_input: inputs.len(),
        ..Default::default()
    };
    for (index, res) in blocks.into_iter().flatten().enumerate() {
        match res {
            Ok(v) => out.push(v),
            Err(e) => match opts.error_mode {
                ErrorMode::Raise => {
                    return Err(Error::Record {
                        index,
                        source: Box::new(e),
                    })
                }
                ErrorMode::Skip => report.failures.push(Failure {
                    index,
                    kind: e.kind(),
                    message: e.to_string(),
                }),
            },
        }
    }
    report.n_ok = out.len();
    Ok((out, report))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchmarkRow {
    pub jobs: usize,
    pub mean_seconds: f64,
    pub speedup: f64,
}

/// Times `transform_batch` for each worker count: one warm-up run, then the
/// mean of `repeats` runs. Speedup is relative to the sequential time.
pub fn benchmark<I: BatchInput + Sync>(
    inputs: &[I],
    t: &Transformer,
    jobs_list: &[usize],
    repeats: usize,
    base: &BatchOptions,
) -> Result<Vec<BenchmarkRow>> {
    if repeats < 3 {
        return Err(
            ConfigError(format!("benchmark needs at least 3 repeats, got {repeats}")).into(),
        );
    }
    if let Some(&j) = jobs_list.iter().find(|&&j| j == 0 || j > inputs.len()) {
        return Err(ConfigError(format!("jobs {j} must be in 1..={}", inputs.len())).into());
    }
    let time = |jobs: usize| -> Result<f64> {
        let opts = BatchOptions {
            jobs: Jobs::Fixed(jobs),
            ..*base
        };
        t.transform_batch(inputs, &opts, OutputForm::Sparse)?;
        let mut total = 0.0;
        for _ in 0..repeats {
            let start = Instant::now();
            t.transform_batch(inputs, &opts, OutputForm::Sparse)?;
            total += start.elapsed().as_secs_f64();
        }
        Ok(total / repeats as f64)
    };
    let sequential = time(1)?;
    jobs_list
        .iter()
        .map(|&jobs| {
            let mean = if jobs == 1 { sequential } else { time(jobs)? };
            Ok(BenchmarkRow {
                jobs,
                mean_seconds: mean,
                speedup: if jobs == 1 { 1.0 } else { sequential / mean },
            })
        })
        .collect()
}
