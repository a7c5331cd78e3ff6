//! Gram-Schmidt orthogonalization and exact δ-LLL reduction.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::certificate::Certificate;
use crate::error::{LatticeError, Result};
use crate::lattice::Basis;
use crate::scalar::{big, dot, int, pow2, ratio, CoeffVector, LatticeVector, Scalar};

/// Gram-Schmidt data of a basis. `mu[i][j]` is only meaningful for `j < i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsoData {
    pub basis: Basis,
    pub gs_vectors: Vec<LatticeVector>,
    pub mu: Vec<Vec<Scalar>>,
    pub gs_norms_sq: Vec<Scalar>,
}

pub fn gso(b: &Basis) -> GsoData {
    let n = b.rank();
    let mut gs: Vec<LatticeVector> = Vec::with_capacity(n);
    let mut mu = vec![vec![Scalar::zero(); n]; n];
    let mut norms: Vec<Scalar> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = b.column(i).clone();
        for j in 0..i {
            let m = dot(b.column(i), &gs[j]) / &norms[j];
            for (x, y) in v.iter_mut().zip(&gs[j]) {
                *x -= &m * y;
            }
            mu[i][j] = m;
        }
        norms.push(dot(&v, &v));
        gs.push(v);
    }
    GsoData {
        basis: b.clone(),
        gs_vectors: gs,
        mu,
        gs_norms_sq: norms,
    }
}

/// `mu` and `|b*_i|^2` only, computed from the Gram matrix.
pub(crate) fn gram_gso(b: &Basis) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let g = b.gram();
    let n = g.len();
    let mut mu = vec![vec![Scalar::zero(); n]; n];
    let mut bsq: Vec<Scalar> = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..i {
            let mut r = g[i][j].clone();
            for k in 0..j {
                r -= &mu[j][k] * &mu[i][k] * &bsq[k];
            }
            mu[i][j] = r / &bsq[j];
        }
        let mut r = g[i][i].clone();
        for k in 0..i {
            r -= &mu[i][k] * &mu[i][k] * &bsq[k];
        }
        bsq.push(r);
    }
    (mu, bsq)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LllParams {
    delta: Scalar,
}

impl LllParams {
    pub fn new(delta: Scalar) -> Result<Self> {
        if delta <= ratio(1, 4) || delta >= int(1) {
            return Err(LatticeError::Parameter(format!(
                "delta must lie in (1/4, 1), got {delta}"
            )));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> &Scalar {
        &self.delta
    }
}

impl Default for LllParams {
    fn default() -> Self {
        Self { delta: ratio(3, 4) }
    }
}

/// Result of LLL reduction: `reduced = input * transform` with `transform` unimodular.
#[derive(Clone, Debug)]
pub struct LllOutput {
    pub reduced: Basis,
    /// Column `j` holds the coefficients of reduced vector `j` in the input basis.
    pub transform: Vec<CoeffVector>,
}

impl LllOutput {
    /// Coefficients w.r.t. the input basis of a point given in reduced coordinates.
    pub fn to_input_coeffs(&self, coeffs: &[BigInt]) -> CoeffVector {
        let n = coeffs.len();
        let mut out = vec![BigInt::zero(); n];
        for (c, col) in coeffs.iter().zip(&self.transform) {
            if c.is_zero() {
                continue;
            }
            for (o, u) in out.iter_mut().zip(col) {
                *o += c * u;
            }
        }
        out
    }
}

pub fn lll_reduce(b: &Basis, p: &LllParams) -> Basis {
    lll_reduce_with_transform(b, p).reduced
}

pub fn lll_reduce_with_transform(b: &Basis, p: &LllParams) -> LllOutput {
    let n = b.rank();
    let mut cols: Vec<LatticeVector> = b.columns().to_vec();
    let mut u: Vec<CoeffVector> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let (mut mu, mut bsq) = gram_gso(b);
    let half = ratio(1, 2);

    let size_reduce = |k: usize,
                       l: usize,
                       cols: &mut Vec<LatticeVector>,
                       u: &mut Vec<CoeffVector>,
                       mu: &mut Vec<Vec<Scalar>>| {
        if mu[k][l].abs() <= half {
            return;
        }
        let q = mu[k][l].round().to_integer();
        let qs = big(q.clone());
        let (bl, ul) = (cols[l].clone(), u[l].clone());
        for (x, y) in cols[k].iter_mut().zip(&bl) {
            *x -= &qs * y;
        }
        for (x, y) in u[k].iter_mut().zip(&ul) {
            *x -= &q * y;
        }
        mu[k][l] -= &qs;
        for j in 0..l {
            let t = &qs * &mu[l][j];
            mu[k][j] -= t;
        }
    };

    let mut k = 1;
    while k < n {
        size_reduce(k, k - 1, &mut cols, &mut u, &mut mu);
        let lovasz_rhs = &mu[k][k - 1] * &mu[k][k - 1] * &bsq[k - 1] + &bsq[k];
        if p.delta() * &bsq[k - 1] > lovasz_rhs {
            cols.swap(k, k - 1);
            u.swap(k, k - 1);
            let m = mu[k][k - 1].clone();
            let bnew = &bsq[k] + &m * &m * &bsq[k - 1];
            mu[k][k - 1] = &m * &bsq[k - 1] / &bnew;
            bsq[k] = &bsq[k - 1] * &bsq[k] / &bnew;
            bsq[k - 1] = bnew;
            for j in 0..k - 1 {
                let t = mu[k - 1][j].clone();
                mu[k - 1][j] = mu[k][j].clone();
                mu[k][j] = t;
            }
            for i in k + 1..n {
                let t = mu[i][k].clone();
                mu[i][k] = &mu[i][k - 1] - &m * &t;
                mu[i][k - 1] = t + &mu[k][k - 1] * &mu[i][k];
            }
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                size_reduce(k, l, &mut cols, &mut u, &mut mu);
            }
            k += 1;
        }
    }
    LllOutput {
        reduced: b.with_columns(cols),
        transform: u,
    }
}

/// Checks both the size condition and the Lovász condition exactly.
pub fn is_lll_reduced(b: &Basis, p: &LllParams) -> bool {
    let (mu, bsq) = gram_gso(b);
    let half = ratio(1, 2);
    let n = b.rank();
    for i in 0..n {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
    }
    (0..n.saturating_sub(1))
        .all(|i| p.delta() * &bsq[i] <= &mu[i + 1][i] * &mu[i + 1][i] * &bsq[i] + &bsq[i + 1])
}

/// The exponent `ceil(3n/2)` of the shortest-vector coefficient bound for LLL bases.
pub fn l2_coeff_exponent(n: usize) -> u32 {
    (3 * n).div_ceil(2) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientBound {
    /// `|alpha_i| < 2^ceil(3n/2)` for a Euclidean shortest vector.
    L2,
    /// `|alpha_i| < 2^eta` for a max-norm shortest vector.
    Linf { eta: u32 },
}

/// Certifies that a shortest vector's coefficients w.r.t. an LLL basis obey the bound.
pub fn coeff_bound_check(
    b: &Basis,
    u_coeffs: &[BigInt],
    bound: CoefficientBound,
) -> Result<Certificate> {
    if u_coeffs.len() != b.rank() {
        return Err(LatticeError::Dimension(
            "coefficient vector has wrong length".into(),
        ));
    }
    let (name, exponent) = match bound {
        CoefficientBound::L2 => ("lll.coefficient_bound.l2", l2_coeff_exponent(b.rank())),
        CoefficientBound::Linf { eta } => ("lll.coefficient_bound.linf", eta),
    };
    let limit = pow2(exponent as i64);
    let max = u_coeffs
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    let max = big(max);
    let ok = max < limit;
    Ok(Certificate::new(name)
        .count("rank", b.rank())
        .count("exponent", exponent as usize)
        .witness("bound", limit)
        .witness("max_abs_coeff", max)
        .flag(
            "basis_lll_reduced",
            is_lll_reduced(b, &LllParams::default()),
        )
        .passed_if(ok))
}
