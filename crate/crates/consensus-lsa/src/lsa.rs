//! Singular value decomposition, spectrum truncation, and document fold-in.
//!
//! The decomposition is a one-sided Jacobi (Hestenes) iteration: column pairs
//! of the working matrix are rotated until all pairs are mutually orthogonal,
//! at which point the column norms are the singular values. For the small,
//! strongly rectangular matrices this crate sees (a handful of documents
//! against a few thousand terms) the method is accurate to near machine
//! precision and completely deterministic — there is no randomized pivoting
//! and no dependence on thread count.
//!
//! Singular vector signs are canonicalized after the fact (the largest-
//! magnitude entry of each right-singular vector is made positive, ties
//! resolved toward the lowest term index), so byte-identical inputs always
//! produce byte-identical factors.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::dtm::{Vocabulary, WeightModel, WeightedVector};
use crate::matrix::Mat;

const MAX_SWEEPS: usize = 64;
/// Column pairs with |⟨p,q⟩| / (‖p‖·‖q‖) at or below this count as orthogonal.
const ORTHO_TOL: f64 = 1e-12;
/// The tolerance truncation policy keeps components with σ > RANK_RTOL · σ₀.
const RANK_RTOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum LsaError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFiniteInput { row: usize, col: usize },
    #[error("SVD of a {rows}x{cols} matrix did not converge after {sweeps} sweeps (residual {residual:.3e})")]
    ConvergenceFailure { rows: usize, cols: usize, sweeps: usize, residual: f64 },
    #[error("requested rank {requested} is outside 1..={available}")]
    RankOutOfRange { requested: usize, available: usize },
    #[error("energy fraction {0} is outside (0, 1]")]
    EnergyOutOfRange(f64),
    #[error("{what} has length {got}, expected {expected}")]
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    #[error("cannot fold in an all-zero vector")]
    ZeroVector,
    #[error("retained singular value {index} is zero; truncate the factors before folding in")]
    ZeroSingularValue { index: usize },
}

/// A (possibly truncated) factorization A ≈ U·diag(σ)·Vᵀ with orthonormal
/// columns in both `u` (documents × k) and `v` (terms × k) and `sigma`
/// descending and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors {
    pub u: Mat,
    pub sigma: Vec<f64>,
    pub v: Mat,
}

impl SvdFactors {
    /// Number of retained components.
    pub fn k(&self) -> usize {
        self.sigma.len()
    }

    /// U·diag(σ)·Vᵀ, the matrix the factors represent.
    pub fn reconstruct(&self) -> Mat {
        let mut out = Mat::zeros(self.u.rows(), self.v.rows());
        for i in 0..self.u.rows() {
            for j in 0..self.k() {
                let scaled = self.u[(i, j)] * self.sigma[j];
                if scaled == 0.0 {
                    continue;
                }
                for l in 0..self.v.rows() {
                    out[(i, l)] += scaled * self.v[(l, j)];
                }
            }
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Applies the plane rotation (p, q) → (c·p − s·q, s·p + c·q) to a column pair.
fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    debug_assert!(p < q);
    let (head, tail) = cols.split_at_mut(q);
    let col_p = &mut head[p];
    let col_q = &mut tail[0];
    for (x, y) in col_p.iter_mut().zip(col_q.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// (orthonormal left columns, descending singular values, orthonormal right
/// columns) as produced by the rotation sweep, before assembly into matrices.
type RawFactors = (Vec<Vec<f64>>, Vec<f64>, Vec<Vec<f64>>);

/// One-sided Jacobi SVD of a tall-or-square matrix (rows ≥ cols).
///
/// Left columns belonging to zero singular values are completed
/// deterministically from canonical basis vectors.
fn one_sided_jacobi(a: &Mat) -> Result<RawFactors, LsaError> {
    let (m, n) = (a.rows(), a.cols());
    debug_assert!(m >= n);
    let mut work: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();

    let mut sweeps = 0;
    loop {
        if n < 2 {
            break;
        }
        let mut rotated = false;
        let mut residual = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for (&x, &y) in work[p].iter().zip(&work[q]) {
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                let scale = (alpha * beta).sqrt();
                if scale == 0.0 || gamma == 0.0 {
                    continue;
                }
                let off = gamma.abs() / scale;
                residual = residual.max(off);
                if off <= ORTHO_TOL {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                // t = sign(ζ) / (|ζ| + sqrt(1 + ζ²)), with sign(0) = 1
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut work, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps >= MAX_SWEEPS {
            return Err(LsaError::ConvergenceFailure { rows: m, cols: n, sweeps, residual });
        }
    }

    let mut sigma: Vec<f64> = work.iter().map(|col| norm(col)).collect();
    for (j, col) in work.iter_mut().enumerate() {
        if sigma[j] > 0.0 {
            for x in col.iter_mut() {
                *x /= sigma[j];
            }
        }
    }
    complete_null_columns(&mut work, &sigma);

    // stable descending sort on σ
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap().then(i.cmp(&j)));
    let u_cols: Vec<Vec<f64>> = order.iter().map(|&j| work[j].clone()).collect();
    let v_cols: Vec<Vec<f64>> = order.iter().map(|&j| v[j].clone()).collect();
    sigma = order.iter().map(|&j| sigma[j]).collect();
    Ok((u_cols, sigma, v_cols))
}

/// Replaces each all-zero column (σ = 0) with the canonical basis vector
/// keeping the largest residual after projecting out the other columns, so
/// the returned set is a full orthonormal system. Deterministic: ties pick
/// the lowest basis index.
fn complete_null_columns(cols: &mut [Vec<f64>], sigma: &[f64]) {
    let Some(m) = cols.first().map(Vec::len) else { return };
    for j in 0..cols.len() {
        if sigma[j] > 0.0 {
            continue;
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        for cand in 0..m {
            let mut w = vec![0.0; m];
            w[cand] = 1.0;
            project_out_others(&mut w, cols, j);
            let res = norm(&w);
            if best.as_ref().is_none_or(|(b, _)| res > *b) {
                best = Some((res, w));
            }
        }
        let (res, mut w) = best.expect("matrix has at least one row");
        for x in w.iter_mut() {
            *x /= res;
        }
        // second pass tightens orthogonality against the earlier columns
        project_out_others(&mut w, cols, j);
        let res = norm(&w);
        for x in w.iter_mut() {
            *x /= res;
        }
        cols[j] = w;
    }
}

fn project_out_others(w: &mut [f64], cols: &[Vec<f64>], skip: usize) {
    for (l, col) in cols.iter().enumerate() {
        if l == skip {
            continue;
        }
        let d = dot(w, col);
        if d == 0.0 {
            continue;
        }
        for (wi, ci) in w.iter_mut().zip(col) {
            *wi -= d * ci;
        }
    }
}

/// Flips factor signs so the largest-magnitude entry of every right-singular
/// vector is positive (ties resolved toward the lowest row index).
fn canonicalize_signs(f: &mut SvdFactors) {
    for j in 0..f.k() {
        let mut best_row = 0;
        let mut best_abs = f.v[(0, j)].abs();
        for i in 1..f.v.rows() {
            let a = f.v[(i, j)].abs();
            if a > best_abs {
                best_abs = a;
                best_row = i;
            }
        }
        if f.v[(best_row, j)] < 0.0 {
            for i in 0..f.v.rows() {
                f.v[(i, j)] = -f.v[(i, j)];
            }
            for i in 0..f.u.rows() {
                f.u[(i, j)] = -f.u[(i, j)];
            }
        }
    }
}

/// Full thin SVD. `a` is documents × terms; the returned factors satisfy
/// A = U·diag(σ)·Vᵀ with k = min(rows, cols) components.
pub fn svd(a: &Mat) -> Result<SvdFactors, LsaError> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(LsaError::EmptyMatrix { rows: a.rows(), cols: a.cols() });
    }
    if let Some((row, col)) = a.first_non_finite() {
        return Err(LsaError::NonFiniteInput { row, col });
    }
    let mut factors = if a.rows() >= a.cols() {
        let (u, sigma, v) = one_sided_jacobi(a)?;
        SvdFactors {
            u: Mat::from_cols(a.rows(), &u),
            sigma,
            v: Mat::from_cols(a.cols(), &v),
        }
    } else {
        // wide matrix: decompose the transpose, then swap the roles of U and V
        let (u, sigma, v) = one_sided_jacobi(&a.transposed())?;
        SvdFactors {
            u: Mat::from_cols(a.rows(), &v),
            sigma,
            v: Mat::from_cols(a.cols(), &u),
        }
    };
    canonicalize_signs(&mut factors);
    Ok(factors)
}

/// How many components of the spectrum to keep.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TruncationPolicy {
    /// Keep exactly this many leading components.
    Rank(usize),
    /// Keep the smallest leading set whose squared singular values reach
    /// this fraction of the total squared spectrum.
    Energy(f64),
    /// Keep every component with σ above 1e-12 · σ₀ (i.e. drop only the
    /// numerically-zero tail).
    #[default]
    Tolerance,
}

impl fmt::Display for TruncationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncationPolicy::Rank(k) => write!(f, "rank({k})"),
            TruncationPolicy::Energy(e) => write!(f, "energy({e})"),
            TruncationPolicy::Tolerance => write!(f, "tolerance"),
        }
    }
}

pub fn truncate(factors: &SvdFactors, policy: TruncationPolicy) -> Result<SvdFactors, LsaError> {
    let available = factors.k();
    let keep = match policy {
        TruncationPolicy::Rank(k) => {
            if k == 0 || k > available {
                return Err(LsaError::RankOutOfRange { requested: k, available });
            }
            k
        }
        TruncationPolicy::Energy(e) => {
            if !(e > 0.0 && e <= 1.0) {
                return Err(LsaError::EnergyOutOfRange(e));
            }
            let total: f64 = factors.sigma.iter().map(|s| s * s).sum();
            if total == 0.0 {
                0
            } else {
                let mut acc = 0.0;
                let mut keep = available;
                for (i, s) in factors.sigma.iter().enumerate() {
                    acc += s * s;
                    if acc / total >= e {
                        keep = i + 1;
                        break;
                    }
                }
                keep
            }
        }
        TruncationPolicy::Tolerance => {
            let cutoff = RANK_RTOL * factors.sigma.first().copied().unwrap_or(0.0);
            factors.sigma.iter().take_while(|&&s| s > cutoff).count()
        }
    };
    Ok(SvdFactors {
        u: factors.u.leading_cols(keep),
        sigma: factors.sigma[..keep].to_vec(),
        v: factors.v.leading_cols(keep),
    })
}

/// A fitted semantic space: truncated factors plus everything needed to map
/// new documents into it with the same vocabulary and weighting.
#[derive(Debug, Clone)]
pub struct LsaModel {
    pub factors: SvdFactors,
    pub doc_ids: Vec<String>,
    pub vocab: Arc<Vocabulary>,
    pub weights: Arc<WeightModel>,
}

impl LsaModel {
    pub fn new(
        factors: SvdFactors,
        doc_ids: Vec<String>,
        vocab: Arc<Vocabulary>,
        weights: Arc<WeightModel>,
    ) -> Result<LsaModel, LsaError> {
        if factors.u.rows() != doc_ids.len() {
            return Err(LsaError::DimensionMismatch {
                what: "document id list",
                expected: factors.u.rows(),
                got: doc_ids.len(),
            });
        }
        if factors.v.rows() != vocab.len() {
            return Err(LsaError::DimensionMismatch {
                what: "vocabulary",
                expected: factors.v.rows(),
                got: vocab.len(),
            });
        }
        if weights.idf().len() != vocab.len() {
            return Err(LsaError::DimensionMismatch {
                what: "weight model",
                expected: vocab.len(),
                got: weights.idf().len(),
            });
        }
        Ok(LsaModel { factors, doc_ids, vocab, weights })
    }

    /// Retained dimensionality of the concept space.
    pub fn rank(&self) -> usize {
        self.factors.k()
    }

    /// Document `i` expressed in concept coordinates: u_i · diag(σ).
    pub fn doc_concept_row(&self, i: usize) -> Vec<f64> {
        (0..self.rank()).map(|j| self.factors.u[(i, j)] * self.factors.sigma[j]).collect()
    }
}

/// A document mapped into a fitted space without refitting it.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldedDocument {
    /// Concept-space coordinates: d̂ = vᵀ·V·Σ⁻¹.
    pub d_hat: Vec<f64>,
    /// Term-space image m̂ = V·Σ·d̂ᵀ = V·Vᵀ·v, the orthogonal projection of
    /// the input onto the retained right-singular subspace.
    pub m_hat: Vec<f64>,
}

/// Folds an externally-weighted document vector into the model space.
pub fn fold_in(model: &LsaModel, v: &WeightedVector) -> Result<FoldedDocument, LsaError> {
    let terms = model.vocab.len();
    if v.values.len() != terms {
        return Err(LsaError::DimensionMismatch {
            what: "weighted vector",
            expected: terms,
            got: v.values.len(),
        });
    }
    if v.is_zero() {
        return Err(LsaError::ZeroVector);
    }
    let f = &model.factors;
    if let Some(index) = f.sigma.iter().position(|&s| s <= 0.0) {
        return Err(LsaError::ZeroSingularValue { index });
    }
    let k = f.k();
    let mut d_hat = vec![0.0; k];
    for (j, coord) in d_hat.iter_mut().enumerate() {
        let mut acc = 0.0;
        for i in 0..terms {
            acc += v.values[i] * f.v[(i, j)];
        }
        *coord = acc / f.sigma[j];
    }
    let mut m_hat = vec![0.0; terms];
    for (j, &coord) in d_hat.iter().enumerate() {
        let scale = f.sigma[j] * coord;
        for (i, out) in m_hat.iter_mut().enumerate() {
            *out += f.v[(i, j)] * scale;
        }
    }
    Ok(FoldedDocument { d_hat, m_hat })
}
