//! Binary similarity coefficients and exact top-k search.
//!
//! Count vectors are binarized first. Two empty vectors score 0.

use std::cmp::Ordering;
use std::str::FromStr;

use crate::error::ShapeError;
use crate::fingerprints::FingerprintVector;
use crate::matrix::CsrMatrix;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Metric {
    #[default]
    Tanimoto,
    Dice,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tanimoto" => Ok(Metric::Tanimoto),
            "dice" => Ok(Metric::Dice),
            _ => Err(format!("unknown metric '{s}'")),
        }
    }
}

impl Metric {
    /// Score from |a|, |b| and |a ∧ b|.
    pub fn score(self, a: usize, b: usize, common: usize) -> f64 {
        if a + b == 0 {
            return 0.0;
        }
        match self {
            Metric::Tanimoto => common as f64 / (a + b - common) as f64,
            Metric::Dice => 2.0 * common as f64 / (a + b) as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityHit {
    pub row: usize,
    pub score: f64,
}

fn intersection(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn support(v: &FingerprintVector) -> Vec<u32> {
    v.iter().map(|(i, _)| i).collect()
}

pub fn similarity(
    a: &FingerprintVector,
    b: &FingerprintVector,
    metric: Metric,
) -> Result<f64, ShapeError> {
    if a.len() != b.len() {
        return Err(ShapeError(format!(
            "vector lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let (sa, sb) = (support(a), support(b));
    Ok(metric.score(sa.len(), sb.len(), intersection(&sa, &sb)))
}

pub fn tanimoto(a: &FingerprintVector, b: &FingerprintVector) -> Result<f64, ShapeError> {
    similarity(a, b, Metric::Tanimoto)
}

pub fn dice(a: &FingerprintVector, b: &FingerprintVector) -> Result<f64, ShapeError> {
    similarity(a, b, Metric::Dice)
}

/// Exact top-`k` rows of `db` by similarity to `query`, best first; ties
/// go to the lower row index.
pub fn bulk_top_k(
    query: &FingerprintVector,
    db: &CsrMatrix,
    k: usize,
    metric: Metric,
) -> Result<Vec<SimilarityHit>, ShapeError> {
    if query.len() != db.cols() {
        return Err(ShapeError(format!(
            "query length {} does not match database width {}",
            query.len(),
            db.cols()
        )));
    }
    if k == 0 {
        return Err(ShapeError("k must be at least 1".into()));
    }
    let q = support(query);
    let mut hits: Vec<SimilarityHit> = (0..db.rows())
        .map(|row| {
            let r = db.row_indices(row);
            SimilarityHit {
                row,
                score: metric.score(q.len(), r.len(), intersection(&q, r)),
            }
        })
        .collect();
    hits.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.row.cmp(&b.row)));
    hits.truncate(k);
    Ok(hits)
}
