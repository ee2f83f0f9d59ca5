//! `molfp`: compute fingerprints, canonicalize, search and benchmark.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error.

mod smi;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use molfp::corpus::synthetic_corpus;
use molfp::engine::{
    benchmark, map_batch, BatchOptions, BatchReport, ErrorMode, Jobs, Transformer,
};
use molfp::fingerprints::{Family, FingerprintConfig, Variant};
use molfp::matrix::OutputForm;
use molfp::similarity::{bulk_top_k, Metric};
use molfp::smarts::KeySet;
use molfp::smiles::{canonicalize, mol_from_smiles};
use molfp::Error;

use smi::{read_smi, SmiRecord};

#[derive(Parser)]
#[command(name = "molfp", version, about = "Molecular fingerprints from SMILES")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a fingerprint matrix (DENSEv1 or CSRv1) for a .smi file.
    Compute {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        fp: FingerprintArgs,
        /// dense (DENSEv1) or sparse (CSRv1)
        #[arg(long = "output", id = "form", default_value = "dense")]
        form: OutputForm,
        #[command(flatten)]
        batch: BatchArgs,
    },
    /// Write one canonical SMILES per record.
    Canonical {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        batch: BatchArgs,
    },
    /// Rank database records by similarity to a query SMILES.
    Search {
        query: String,
        database: PathBuf,
        #[command(flatten)]
        fp: FingerprintArgs,
        #[arg(long, default_value = "tanimoto")]
        metric: Metric,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        top_k: u64,
        #[command(flatten)]
        batch: BatchArgs,
    },
    /// Time batch computation for several worker counts.
    Benchmark {
        /// .smi input; omit to use a synthetic corpus.
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        synthetic: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        fp: FingerprintArgs,
        #[arg(long, default_value = "1,2,4", value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..))]
        jobs_list: Vec<u64>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(3..))]
        repeats: u64,
    },
    /// Write a deterministic synthetic .smi corpus.
    Generate {
        output: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
struct FingerprintArgs {
    /// ecfp, fcfp, atom_pair, topological_torsion, path, substructure or descriptors
    #[arg(long, default_value = "ecfp")]
    fingerprint: Family,
    #[arg(long, default_value_t = molfp::fingerprints::DEFAULT_LENGTH)]
    length: usize,
    #[arg(long, default_value_t = molfp::fingerprints::DEFAULT_RADIUS)]
    radius: u32,
    #[arg(long, default_value_t = molfp::fingerprints::DEFAULT_MIN_PATH)]
    min_path: u32,
    #[arg(long, default_value_t = molfp::fingerprints::DEFAULT_MAX_PATH)]
    max_path: u32,
    #[arg(long, default_value_t = molfp::fingerprints::DEFAULT_DISTANCE_CAP)]
    distance_cap: u32,
    /// Tab-separated SMARTS key file for the substructure family.
    #[arg(long)]
    keys: Option<PathBuf>,
    #[arg(long, default_value = "binary")]
    variant: Variant,
}

#[derive(Args)]
struct BatchArgs {
    /// Worker count or "auto".
    #[arg(long, env = "MOLFP_JOBS", default_value = "auto")]
    jobs: Jobs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    chunk_size: Option<u64>,
    #[arg(long, default_value = "raise")]
    on_error: ErrorMode,
}

impl BatchArgs {
    fn options(&self) -> BatchOptions {
        BatchOptions {
            jobs: self.jobs,
            chunk_size: self.chunk_size.map(|c| c as usize),
            error_mode: self.on_error,
        }
    }
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

type CmdResult = Result<(), Failure>;

impl FingerprintArgs {
    fn config(&self) -> Result<FingerprintConfig, Failure> {
        let mut cfg = FingerprintConfig::new(self.fingerprint)
            .with_length(self.length)
            .with_radius(self.radius)
            .with_paths(self.min_path, self.max_path)
            .with_distance_cap(self.distance_cap)
            .with_variant(self.variant);
        if let Some(path) = &self.keys {
            if self.fingerprint != Family::Substructure {
                return Err(Failure::Usage(
                    "--keys only applies to --fingerprint substructure".into(),
                ));
            }
            let keys = KeySet::load(path).with_context(|| format!("{}", path.display()))?;
            cfg = cfg.with_key_set(keys);
        }
        cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(cfg)
    }

    fn transformer(&self) -> Result<Transformer, Failure> {
        Transformer::smiles_fingerprint(self.config()?).map_err(|e| Failure::Usage(e.to_string()))
    }
}

/// Rewrites a record-indexed batch error as `file:line: message`.
fn locate(err: Error, path: &Path, records: &[SmiRecord]) -> anyhow::Error {
    match err {
        Error::Record { index, source } => {
            anyhow::anyhow!(
                "{}:{}: {}",
                path.display(),
                records[index].line_number,
                source
            )
        }
        other => anyhow::Error::new(other),
    }
}

fn write_failures(
    output: &Path,
    report: &BatchReport,
    records: &[SmiRecord],
) -> anyhow::Result<()> {
    let mut tsv = String::from("index\tline\terror\n");
    for f in &report.failures {
        writeln!(
            tsv,
            "{}\t{}\t{}: {}",
            f.index, records[f.index].line_number, f.kind, f.message
        )
        .unwrap();
        eprintln!(
            "skipped line {}: {}",
            records[f.index].line_number, f.message
        );
    }
    let mut path = output.as_os_str().to_owned();
    path.push(".errors.tsv");
    fs::write(&path, tsv)
        .with_context(|| format!("cannot write {}", PathBuf::from(&path).display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn compute(
    input: &Path,
    output: &Path,
    fp: &FingerprintArgs,
    form: OutputForm,
    batch: &BatchArgs,
) -> CmdResult {
    let t = fp.transformer()?;
    let records = read_smi(input)?;
    let smiles: Vec<&str> = records.iter().map(|r| r.smiles.as_str()).collect();
    let opts = batch.options();
    let (matrix, report) = t
        .transform_batch(&smiles, &opts, form)
        .map_err(|e| locate(e, input, &records))?;
    write(output, &matrix.to_text())?;
    if opts.error_mode == ErrorMode::Skip {
        write_failures(output, &report, &records)?;
    }
    Ok(())
}

fn canonical(input: &Path, output: &Path, batch: &BatchArgs) -> CmdResult {
    let records = read_smi(input)?;
    let opts = batch.options();
    let (lines, report) = map_batch(&records, &opts, |r| {
        let smiles = canonicalize(&r.smiles)?;
        Ok(match &r.name {
            Some(n) => format!("{smiles}\t{n}\n"),
            None => format!("{smiles}\n"),
        })
    })
    .map_err(|e| locate(e, input, &records))?;
    write(output, &lines.concat())?;
    if opts.error_mode == ErrorMode::Skip {
        write_failures(output, &report, &records)?;
    }
    Ok(())
}

fn search(
    query: &str,
    database: &Path,
    fp: &FingerprintArgs,
    metric: Metric,
    top_k: usize,
    batch: &BatchArgs,
) -> CmdResult {
    if fp.fingerprint == Family::Descriptors {
        return Err(Failure::Usage(
            "search needs a bit-vector fingerprint, not descriptors".into(),
        ));
    }
    let cfg = fp.config()?;
    let t = fp.transformer()?;
    let q = mol_from_smiles(query).map_err(|e| anyhow::anyhow!("query: {e}"))?;
    let qv = cfg.vector(&q).expect("vector family");
    let records = read_smi(database)?;
    let opts = batch.options();
    let (matrix, report) = t
        .transform_batch(
            &records
                .iter()
                .map(|r| r.smiles.as_str())
                .collect::<Vec<_>>(),
            &opts,
            OutputForm::Sparse,
        )
        .map_err(|e| locate(e, database, &records))?;
    for f in &report.failures {
        eprintln!(
            "skipped line {}: {}",
            records[f.index].line_number, f.message
        );
    }
    // surviving rows, in order, map back to records
    let failed: std::collections::HashSet<usize> =
        report.failures.iter().map(|f| f.index).collect();
    let kept: Vec<&SmiRecord> = records
        .iter()
        .enumerate()
        .filter(|(i, _)| !failed.contains(i))
        .map(|(_, r)| r)
        .collect();
    let hits = bulk_top_k(&qv, &matrix.to_csr(), top_k, metric).map_err(anyhow::Error::new)?;
    let mut out = String::from("rank\tline\tname\tscore\n");
    for (rank, h) in hits.iter().enumerate() {
        let r = kept[h.row];
        writeln!(
            out,
            "{}\t{}\t{}\t{:.6}",
            rank + 1,
            r.line_number,
            r.name.as_deref().unwrap_or(""),
            h.score
        )
        .unwrap();
    }
    print!("{out}");
    Ok(())
}

fn run_benchmark(
    input: Option<&Path>,
    synthetic: usize,
    seed: u64,
    fp: &FingerprintArgs,
    jobs_list: &[usize],
    repeats: usize,
) -> CmdResult {
    let t = fp.transformer()?;
    let smiles: Vec<String> = match input {
        Some(p) => read_smi(p)?.into_iter().map(|r| r.smiles).collect(),
        None => synthetic_corpus(synthetic, seed),
    };
    if let Some(&j) = jobs_list.iter().find(|&&j| j > smiles.len()) {
        return Err(Failure::Usage(format!(
            "jobs {j} exceeds the {} input records",
            smiles.len()
        )));
    }
    let rows = benchmark(&smiles, &t, jobs_list, repeats, &BatchOptions::default())
        .map_err(anyhow::Error::new)?;
    let mut out = String::from("jobs\tmean_seconds\tspeedup\n");
    for r in rows {
        writeln!(out, "{}\t{:.6}\t{:.3}", r.jobs, r.mean_seconds, r.speedup).unwrap();
    }
    print!("{out}");
    Ok(())
}

fn generate(output: &Path, count: usize, seed: u64) -> CmdResult {
    let mut out = String::new();
    for (i, s) in synthetic_corpus(count, seed).iter().enumerate() {
        writeln!(out, "{s}\tsyn{}", i + 1).unwrap();
    }
    Ok(write(output, &out)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute {
            input,
            output,
            fp,
            form,
            batch,
        } => compute(input, output, fp, *form, batch),
        Command::Canonical {
            input,
            output,
            batch,
        } => canonical(input, output, batch),
        Command::Search {
            query,
            database,
            fp,
            metric,
            top_k,
            batch,
        } => search(query, database, fp, *metric, *top_k as usize, batch),
        Command::Benchmark {
            input,
            synthetic,
            seed,
            fp,
            jobs_list,
            repeats,
        } => {
            let jobs: Vec<usize> = jobs_list.iter().map(|&j| j as usize).collect();
            run_benchmark(
                input.as_deref(),
                *synthetic,
                *seed,
                fp,
                &jobs,
                *repeats as usize,
            )
        }
        Command::Generate {
            output,
            count,
            seed,
        } => generate(output, *count, *seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
