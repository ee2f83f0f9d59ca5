//! Dense and CSR batch containers with text serialization.
//!
//! Formats (one record per line, space-separated):
//!
//! ```text
//! CSRv1 <rows> <cols> <nnz> <dtype>     DENSEv1 <rows> <cols> <dtype>
//! <indptr>                              <row 0>
//! <indices>                             ...
//! <data>                                <row rows-1>
//! ```

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{FormatError, ShapeError};
use crate::fingerprints::{FingerprintVector, Variant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dtype {
    U8,
    U32,
    F64,
}

impl Dtype {
    pub fn name(self) -> &'static str {
        match self {
            Dtype::U8 => "u8",
            Dtype::U32 => "u32",
            Dtype::F64 => "f64",
        }
    }

    pub fn size(self) -> usize {
        match self {
            Dtype::U8 => 1,
            Dtype::U32 => 4,
            Dtype::F64 => 8,
        }
    }

    /// Binary fingerprints are stored as u8, counts as u32.
    pub fn for_variant(variant: Variant) -> Dtype {
        match variant {
            Variant::Binary => Dtype::U8,
            Variant::Count => Dtype::U32,
        }
    }
}

impl fmt::Display for Dtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dtype {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "u8" => Ok(Dtype::U8),
            "u32" => Ok(Dtype::U32),
            "f64" => Ok(Dtype::F64),
            _ => Err(format!("unknown dtype '{s}'")),
        }
    }
}

/// Typed element buffer.
#[derive(Clone, Debug, PartialEq)]
pub enum Values {
    U8(Vec<u8>),
    U32(Vec<u32>),
    F64(Vec<f64>),
}

impl Values {
    pub fn empty(dtype: Dtype) -> Values {
        match dtype {
            Dtype::U8 => Values::U8(Vec::new()),
            Dtype::U32 => Values::U32(Vec::new()),
            Dtype::F64 => Values::F64(Vec::new()),
        }
    }

    pub fn zeros(dtype: Dtype, len: usize) -> Values {
        match dtype {
            Dtype::U8 => Values::U8(vec![0; len]),
            Dtype::U32 => Values::U32(vec![0; len]),
            Dtype::F64 => Values::F64(vec![0.0; len]),
        }
    }

    pub fn dtype(&self) -> Dtype {
        match self {
            Values::U8(_) => Dtype::U8,
            Values::U32(_) => Dtype::U32,
            Values::F64(_) => Dtype::F64,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Values::U8(v) => v.len(),
            Values::U32(v) => v.len(),
            Values::F64(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> f64 {
        match self {
            Values::U8(v) => v[i] as f64,
            Values::U32(v) => v[i] as f64,
            Values::F64(v) => v[i],
        }
    }

    pub fn is_zero(&self, i: usize) -> bool {
        match self {
            Values::U8(v) => v[i] == 0,
            Values::U32(v) => v[i] == 0,
            Values::F64(v) => v[i] == 0.0,
        }
    }

    /// Appends element `i` of `other`, widening to `self`'s dtype.
    fn push_from(&mut self, other: &Values, i: usize) {
        match (self, other) {
            (Values::U8(d), Values::U8(s)) => d.push(s[i]),
            (Values::U32(d), Values::U8(s)) => d.push(s[i] as u32),
            (Values::U32(d), Values::U32(s)) => d.push(s[i]),
            (Values::F64(d), s) => d.push(s.get(i)),
            (d, s) => panic!("cannot narrow {} into {}", s.dtype(), d.dtype()),
        }
    }

    fn set_from(&mut self, at: usize, other: &Values, i: usize) {
        match (self, other) {
            (Values::U8(d), Values::U8(s)) => d[at] = s[i],
            (Values::U32(d), Values::U8(s)) => d[at] = s[i] as u32,
            (Values::U32(d), Values::U32(s)) => d[at] = s[i],
            (Values::F64(d), s) => d[at] = s.get(i),
            (d, s) => panic!("cannot narrow {} into {}", s.dtype(), d.dtype()),
        }
    }

    fn write_range(&self, out: &mut String, range: std::ops::Range<usize>) {
        for (k, i) in range.enumerate() {
            if k > 0 {
                out.push(' ');
            }
            match self {
                Values::U8(v) => write!(out, "{}", v[i]),
                Values::U32(v) => write!(out, "{}", v[i]),
                Values::F64(v) => write!(out, "{}", v[i]),
            }
            .expect("writing to String");
        }
    }

    fn parse(dtype: Dtype, fields: &[&str], line: usize) -> Result<Values, FormatError> {
        fn all<T: FromStr>(
            fields: &[&str],
            line: usize,
            dtype: Dtype,
        ) -> Result<Vec<T>, FormatError> {
            fields
                .iter()
                .map(|f| {
                    f.parse().map_err(|_| FormatError {
                        line,
                        message: format!("invalid {dtype} value '{f}'"),
                    })
                })
                .collect()
        }
        Ok(match dtype {
            Dtype::U8 => Values::U8(all(fields, line, dtype)?),
            Dtype::U32 => Values::U32(all(fields, line, dtype)?),
            Dtype::F64 => Values::F64(all(fields, line, dtype)?),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Values,
}

impl DenseMatrix {
    /// Row-major matrix; `values.len()` must equal `rows * cols`.
    pub fn new(rows: usize, cols: usize, values: Values) -> Result<Self, ShapeError> {
        if values.len() != rows * cols {
            return Err(ShapeError(format!(
                "dense payload has {} elements, expected {rows}x{cols}",
                values.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, values })
    }

    pub fn zeros(rows: usize, cols: usize, dtype: Dtype) -> Self {
        DenseMatrix {
            rows,
            cols,
            values: Values::zeros(dtype, rows * cols),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dtype(&self) -> Dtype {
        self.values.dtype()
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.values.get(row * self.cols + col)
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let mut indptr = Vec::with_capacity(self.rows + 1);
        let mut indices = Vec::new();
        let mut data = Values::empty(self.dtype());
        indptr.push(0u32);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let i = r * self.cols + c;
                if !self.values.is_zero(i) {
                    indices.push(c as u32);
                    data.push_from(&self.values, i);
                }
            }
            indptr.push(indices.len() as u32);
        }
        CsrMatrix {
            rows: self.rows,
            cols: self.cols,
            indptr,
            indices,
            data,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<u32>,
    indices: Vec<u32>,
    data: Values,
}

impl CsrMatrix {
    /// Builds a CSR matrix after checking every structural invariant.
    pub fn new(
        rows: usize,
        cols: usize,
        indptr: Vec<u32>,
        indices: Vec<u32>,
        data: Values,
    ) -> Result<Self, ShapeError> {
        let err = |m: String| Err(ShapeError(m));
        if indptr.len() != rows + 1 {
            return err(format!(
                "indptr has {} entries, expected {}",
                indptr.len(),
                rows + 1
            ));
        }
        if indptr[0] != 0 {
            return err("indptr[0] must be 0".into());
        }
        if indptr.windows(2).any(|w| w[0] > w[1]) {
            return err("indptr must be non-decreasing".into());
        }
        let nnz = indptr[rows] as usize;
        if indices.len() != nnz || data.len() != nnz {
            return err(format!(
                "indptr declares {nnz} entries but indices has {} and data {}",
                indices.len(),
                data.len()
            ));
        }
        for r in 0..rows {
            let row = &indices[indptr[r] as usize..indptr[r + 1] as usize];
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return err(format!("row {r}: column indices not strictly increasing"));
            }
            if row.last().is_some_and(|&c| c as usize >= cols) {
                return err(format!("row {r}: column index out of range"));
            }
        }
        if (0..nnz).any(|i| data.is_zero(i)) {
            return err("stored zero in data".into());
        }
        Ok(CsrMatrix {
            rows,
            cols,
            indptr,
            indices,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn dtype(&self) -> Dtype {
        self.data.dtype()
    }

    pub fn indptr(&self) -> &[u32] {
        &self.indptr
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn data(&self) -> &Values {
        &self.data
    }

    /// Column indices stored in `row`.
    pub fn row_indices(&self, row: usize) -> &[u32] {
        &self.indices[self.indptr[row] as usize..self.indptr[row + 1] as usize]
    }

    pub fn density(&self) -> f64 {
        let cells = self.rows * self.cols;
        if cells == 0 {
            0.0
        } else {
            self.nnz() as f64 / cells as f64
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols, self.dtype());
        for r in 0..self.rows {
            for i in self.indptr[r] as usize..self.indptr[r + 1] as usize {
                out.values
                    .set_from(r * self.cols + self.indices[i] as usize, &self.data, i);
            }
        }
        out
    }
}

/// Output form requested from batch transforms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputForm {
    #[default]
    Dense,
    Sparse,
}

impl FromStr for OutputForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dense" => Ok(OutputForm::Dense),
            "sparse" | "csr" => Ok(OutputForm::Sparse),
            _ => Err(format!("unknown output form '{s}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Matrix {
    Dense(DenseMatrix),
    Csr(CsrMatrix),
}

impl Matrix {
    pub fn rows(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.rows,
            Matrix::Csr(m) => m.rows,
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.cols,
            Matrix::Csr(m) => m.cols,
        }
    }

    pub fn dtype(&self) -> Dtype {
        match self {
            Matrix::Dense(m) => m.dtype(),
            Matrix::Csr(m) => m.dtype(),
        }
    }

    pub fn form(&self) -> OutputForm {
        match self {
            Matrix::Dense(_) => OutputForm::Dense,
            Matrix::Csr(_) => OutputForm::Sparse,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Matrix::Dense(m) => m.clone(),
            Matrix::Csr(m) => m.to_dense(),
        }
    }

    pub fn to_csr(&self) -> CsrMatrix {
        match self {
            Matrix::Dense(m) => m.to_csr(),
            Matrix::Csr(m) => m.clone(),
        }
    }

    pub fn into_form(self, form: OutputForm) -> Matrix {
        match (self, form) {
            (Matrix::Csr(m), OutputForm::Dense) => Matrix::Dense(m.to_dense()),
            (Matrix::Dense(m), OutputForm::Sparse) => Matrix::Csr(m.to_csr()),
            (m, _) => m,
        }
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        match self {
            Matrix::Dense(m) => m.get(row, col),
            Matrix::Csr(m) => {
                assert!(row < m.rows && col < m.cols, "index out of range");
                let start = m.indptr[row] as usize;
                match m.row_indices(row).binary_search(&(col as u32)) {
                    Ok(k) => m.data.get(start + k),
                    Err(_) => 0.0,
                }
            }
        }
    }

    /// Bytes needed for the payload: dense `rows*cols*size`; CSR
    /// `nnz*size + nnz*4 + (rows+1)*4`.
    pub fn memory_footprint(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.rows * m.cols * m.dtype().size(),
            Matrix::Csr(m) => m.nnz() * m.dtype().size() + m.nnz() * 4 + (m.rows + 1) * 4,
        }
    }

    /// Text serialization in CSRv1 / DENSEv1 form, newline-terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Matrix::Dense(m) => {
                writeln!(out, "DENSEv1 {} {} {}", m.rows, m.cols, m.dtype()).unwrap();
                for r in 0..m.rows {
                    m.values.write_range(&mut out, r * m.cols..(r + 1) * m.cols);
                    out.push('\n');
                }
            }
            Matrix::Csr(m) => {
                writeln!(out, "CSRv1 {} {} {} {}", m.rows, m.cols, m.nnz(), m.dtype()).unwrap();
                let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                writeln!(out, "{}", join(&m.indptr)).unwrap();
                writeln!(out, "{}", join(&m.indices)).unwrap();
                m.data.write_range(&mut out, 0..m.nnz());
                out.push('\n');
            }
        }
        out
    }

    pub fn serialize(&self, sink: &mut impl std::io::Write) -> std::io::Result<()> {
        sink.write_all(self.to_text().as_bytes())
    }

    pub fn deserialize(source: &mut impl std::io::Read) -> Result<Matrix, FormatError> {
        let mut text = String::new();
        source.read_to_string(&mut text).map_err(|e| FormatError {
            line: 0,
            message: e.to_string(),
        })?;
        Matrix::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Matrix, FormatError> {
        let lines: Vec<&str> = text.lines().collect();
        let fail = |line: usize, message: String| FormatError { line, message };
        let header: Vec<&str> = lines
            .first()
            .ok_or_else(|| fail(1, "missing header".into()))?
            .split_whitespace()
            .collect();
        let num = |i: usize| -> Result<usize, FormatError> {
            header.get(i).and_then(|f| f.parse().ok()).ok_or_else(|| {
                fail(
                    1,
                    format!("header field {} must be a non-negative integer", i + 1),
                )
            })
        };
        let dtype_at = |i: usize| -> Result<Dtype, FormatError> {
            header
                .get(i)
                .ok_or_else(|| fail(1, "missing dtype".into()))?
                .parse()
                .map_err(|e| fail(1, e))
        };
        let line_fields = |n: usize| -> Result<Vec<&str>, FormatError> {
            lines
                .get(n - 1)
                .map(|l| l.split_whitespace().collect())
                .ok_or_else(|| fail(n, "unexpected end of input".into()))
        };
        let shape = |line: usize, e: ShapeError| fail(line, e.0);

        let (matrix, used) = match header.first().copied() {
            Some("DENSEv1") => {
                if header.len() != 4 {
                    return Err(fail(1, "DENSEv1 header needs rows, cols and dtype".into()));
                }
                let (rows, cols, dtype) = (num(1)?, num(2)?, dtype_at(3)?);
                let mut values = Values::zeros(dtype, 0);
                for r in 0..rows {
                    let n = r + 2;
                    let fields = line_fields(n)?;
                    if fields.len() != cols {
                        return Err(fail(
                            n,
                            format!("expected {cols} values, found {}", fields.len()),
                        ));
                    }
                    let row = Values::parse(dtype, &fields, n)?;
                    for i in 0..cols {
                        values.push_from(&row, i);
                    }
                }
                let m = DenseMatrix::new(rows, cols, values).map_err(|e| shape(1, e))?;
                (Matrix::Dense(m), rows + 1)
            }
            Some("CSRv1") => {
                if header.len() != 5 {
                    return Err(fail(
                        1,
                        "CSRv1 header needs rows, cols, nnz and dtype".into(),
                    ));
                }
                let (rows, cols, nnz, dtype) = (num(1)?, num(2)?, num(3)?, dtype_at(4)?);
                let ints = |n: usize| -> Result<Vec<u32>, FormatError> {
                    line_fields(n)?
                        .iter()
                        .map(|f| {
                            f.parse()
                                .map_err(|_| fail(n, format!("invalid index '{f}'")))
                        })
                        .collect()
                };
                let indptr = ints(2)?;
                if indptr.len() != rows + 1 {
                    return Err(fail(
                        2,
                        format!(
                            "expected {} indptr entries, found {}",
                            rows + 1,
                            indptr.len()
                        ),
                    ));
                }
                let indices = ints(3)?;
                if indices.len() != nnz {
                    return Err(fail(
                        3,
                        format!("expected {nnz} indices, found {}", indices.len()),
                    ));
                }
                let data_fields = line_fields(4)?;
                if data_fields.len() != nnz {
                    return Err(fail(
                        4,
                        format!("expected {nnz} values, found {}", data_fields.len()),
                    ));
                }
                let data = Values::parse(dtype, &data_fields, 4)?;
                let m =
                    CsrMatrix::new(rows, cols, indptr, indices, data).map_err(|e| shape(2, e))?;
                (Matrix::Csr(m), 4)
            }
            _ => return Err(fail(1, "header must start with CSRv1 or DENSEv1".into())),
        };
        if let Some(extra) = lines[used..].iter().position(|l| !l.trim().is_empty()) {
            return Err(fail(
                used + extra + 1,
                "trailing content after matrix".into(),
            ));
        }
        Ok(matrix)
    }
}

/// Stacks fingerprint vectors as rows. Every vector must have length `cols`
/// and variant `variant`; binary rows are stored as u8, count rows as u32.
pub fn from_rows(
    vectors: &[FingerprintVector],
    cols: usize,
    variant: Variant,
    form: OutputForm,
) -> Result<Matrix, ShapeError> {
    let dtype = Dtype::for_variant(variant);
    let mut indptr = vec![0u32];
    let mut indices = Vec::new();
    let mut data = Values::empty(dtype);
    for (r, v) in vectors.iter().enumerate() {
        if v.len() != cols {
            return Err(ShapeError(format!(
                "row {r} has length {}, expected {cols}",
                v.len()
            )));
        }
        if v.variant() != variant {
            return Err(ShapeError(format!("row {r} has a different variant")));
        }
        for (i, c) in v.iter() {
            indices.push(i);
            match &mut data {
                Values::U8(d) => d.push(c.min(u8::MAX as u32) as u8),
                Values::U32(d) => d.push(c),
                Values::F64(_) => unreachable!(),
            }
        }
        indptr.push(indices.len() as u32);
    }
    let csr = CsrMatrix::new(vectors.len(), cols, indptr, indices, data)?;
    Ok(Matrix::Csr(csr).into_form(form))
}

/// Stacks real-valued rows (f64) of width `cols`.
pub fn from_real_rows(
    rows: &[Vec<f64>],
    cols: usize,
    form: OutputForm,
) -> Result<Matrix, ShapeError> {
    let mut values = Vec::with_capacity(rows.len() * cols);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(ShapeError(format!(
                "row {r} has length {}, expected {cols}",
                row.len()
            )));
        }
        values.extend_from_slice(row);
    }
    let dense = DenseMatrix::new(rows.len(), cols, Values::F64(values))?;
    Ok(Matrix::Dense(dense).into_form(form))
}

/// Horizontal concatenation. All blocks need the same row count; the
/// result uses the widest dtype and the form of the first block.
pub fn hstack(blocks: &[Matrix]) -> Result<Matrix, ShapeError> {
    let first = blocks
        .first()
        .ok_or_else(|| ShapeError("hstack of zero blocks".into()))?;
    let rows = first.rows();
    if let Some(b) = blocks.iter().find(|b| b.rows() != rows) {
        return Err(ShapeError(format!(
            "hstack row mismatch: {} vs {rows}",
            b.rows()
        )));
    }
    let dtype = blocks.iter().map(Matrix::dtype).max().unwrap();
    let cols: usize = blocks.iter().map(Matrix::cols).sum();
    let csrs: Vec<CsrMatrix> = blocks.iter().map(Matrix::to_csr).collect();
    let mut indptr = vec![0u32];
    let mut indices = Vec::new();
    let mut data = Values::empty(dtype);
    for r in 0..rows {
        let mut offset = 0u32;
        for m in &csrs {
            for i in m.indptr[r] as usize..m.indptr[r + 1] as usize {
                indices.push(offset + m.indices[i]);
                data.push_from(&m.data, i);
            }
            offset += m.cols as u32;
        }
        indptr.push(indices.len() as u32);
    }
    let csr = CsrMatrix::new(rows, cols, indptr, indices, data)?;
    Ok(Matrix::Csr(csr).into_form(first.form()))
}
