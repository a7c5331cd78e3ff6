//! Exact lattice primitives: bases, norms, determinants, Hermite normal form,
//! membership, primitivity, dual bases and rank-one dimension reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{LatticeError, Result};
use crate::scalar::{
    big, common_denominator, dot, gcd_all, int, is_zero_vec, linf, norm_sq, scale_vec, sub_vec,
    CoeffVector, LatticeVector, Scalar,
};

/// A lattice basis stored column-wise: `n` linearly independent vectors in `Q^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    columns: Vec<LatticeVector>,
    ambient_dim: usize,
}

impl Basis {
    /// Builds a basis from its columns, checking shape and linear independence.
    pub fn new(columns: Vec<LatticeVector>) -> Result<Self> {
        let basis = Self::from_columns_unchecked(columns)?;
        if basis.rank() > basis.ambient_dim {
            return Err(LatticeError::Singular);
        }
        if determinant(basis.gram()).is_zero() {
            return Err(LatticeError::Singular);
        }
        Ok(basis)
    }

    pub(crate) fn from_columns_unchecked(columns: Vec<LatticeVector>) -> Result<Self> {
        let ambient_dim = columns
            .first()
            .map(Vec::len)
            .ok_or_else(|| LatticeError::Dimension("basis has no columns".into()))?;
        if ambient_dim == 0 {
            return Err(LatticeError::Dimension("ambient dimension is zero".into()));
        }
        if columns.iter().any(|c| c.len() != ambient_dim) {
            return Err(LatticeError::Dimension("columns differ in length".into()));
        }
        Ok(Self {
            columns,
            ambient_dim,
        })
    }

    /// Builds a basis from an `m x n` matrix given row by row.
    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        let n = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Dimension("rows differ in length".into()));
        }
        let columns = (0..n)
            .map(|j| rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self::new(columns)
    }

    pub fn from_integer_columns(columns: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            columns
                .iter()
                .map(|c| c.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let ones = vec![1; n];
        Self::diagonal(&ones)
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let columns = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { int(entries[j]) } else { int(0) })
                    .collect()
            })
            .collect();
        Self::new(columns).expect("diagonal entries must be nonzero")
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn columns(&self) -> &[LatticeVector] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &LatticeVector {
        &self.columns[i]
    }

    pub fn into_columns(self) -> Vec<LatticeVector> {
        self.columns
    }

    /// Row-major copy of the matrix.
    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.ambient_dim)
            .map(|i| self.columns.iter().map(|c| c[i].clone()).collect())
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.columns.iter().flatten().all(|x| x.is_integer())
    }

    /// The lattice point `B * coeffs`.
    pub fn combine(&self, coeffs: &[BigInt]) -> LatticeVector {
        assert_eq!(coeffs.len(), self.rank());
        let mut out = vec![Scalar::zero(); self.ambient_dim];
        for (c, col) in coeffs.iter().zip(&self.columns) {
            if c.is_zero() {
                continue;
            }
            let c = big(c.clone());
            for (o, x) in out.iter_mut().zip(col) {
                *o += &c * x;
            }
        }
        out
    }

    /// The Gram matrix `B^T B`.
    pub fn gram(&self) -> Vec<Vec<Scalar>> {
        let n = self.rank();
        let mut g = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = dot(&self.columns[i], &self.columns[j]);
                g[j][i] = v.clone();
                g[i][j] = v;
            }
        }
        g
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        assert!(!s.is_zero());
        Self {
            columns: self.columns.iter().map(|c| scale_vec(c, s)).collect(),
            ambient_dim: self.ambient_dim,
        }
    }

    /// Replaces column `i`, keeping the basis valid only if the caller guarantees independence.
    pub(crate) fn with_columns(&self, columns: Vec<LatticeVector>) -> Self {
        Self {
            columns,
            ambient_dim: self.ambient_dim,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.ambient_dim, self.rank())?;
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Squared Euclidean norm and max norm of a vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Norms {
    pub l2_squared: Scalar,
    pub linf: Scalar,
}

pub fn norms(v: &[Scalar]) -> Result<Norms> {
    if v.is_empty() {
        return Err(LatticeError::Dimension("empty vector".into()));
    }
    Ok(Norms {
        l2_squared: norm_sq(v),
        linf: linf(v),
    })
}

/// `det(B^T B)`; the square of the lattice determinant.
pub fn det_squared(b: &Basis) -> Result<Scalar> {
    let d = determinant(b.gram());
    if d.is_zero() {
        Err(LatticeError::Singular)
    } else {
        Ok(d)
    }
}

/// Determinant by fraction-exact Gaussian elimination.
pub(crate) fn determinant(mut a: Vec<Vec<Scalar>>) -> Scalar {
    let n = a.len();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Inverse of a square rational matrix, `None` when singular.
pub(crate) fn inverse(a: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot, col);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Why a vector failed the membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonMembership {
    /// The vector is not in the linear span of the basis.
    OutsideSpan,
    /// The vector is in the span but its coordinates are not all integers.
    NonIntegral,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(CoeffVector),
    NotMember(NonMembership),
}

impl Membership {
    pub fn coeffs(&self) -> Option<&CoeffVector> {
        match self {
            Membership::Member(c) => Some(c),
            Membership::NotMember(_) => None,
        }
    }

    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Exact coordinates with respect to a fixed basis, reusing `(B^T B)^{-1} B^T`.
#[derive(Clone, Debug)]
pub struct CoordinateSolver {
    basis: Basis,
    pseudo_inverse: Vec<Vec<Scalar>>,
}

impl CoordinateSolver {
    pub fn new(basis: &Basis) -> Result<Self> {
        let gi = inverse(&basis.gram()).ok_or(LatticeError::Singular)?;
        let n = basis.rank();
        let m = basis.ambient_dim();
        let mut p = vec![vec![Scalar::zero(); m]; n];
        for (i, row) in p.iter_mut().enumerate() {
            for (j, g) in gi[i].iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                for (k, x) in basis.column(j).iter().enumerate() {
                    row[k] += g * x;
                }
            }
        }
        Ok(Self {
            basis: basis.clone(),
            pseudo_inverse: p,
        })
    }

    /// Rational coordinates of the orthogonal projection of `x` onto the span.
    pub fn rational_coords(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.basis.ambient_dim() {
            return Err(LatticeError::Dimension(format!(
                "vector has {} coordinates, basis lives in dimension {}",
                x.len(),
                self.basis.ambient_dim()
            )));
        }
        Ok(self.pseudo_inverse.iter().map(|row| dot(row, x)).collect())
    }

    pub fn solve(&self, x: &[Scalar]) -> Result<Membership> {
        let coords = self.rational_coords(x)?;
        let mut recon = vec![Scalar::zero(); x.len()];
        for (c, col) in coords.iter().zip(self.basis.columns()) {
            for (r, v) in recon.iter_mut().zip(col) {
                *r += c * v;
            }
        }
        if recon != x {
            return Ok(Membership::NotMember(NonMembership::OutsideSpan));
        }
        if coords.iter().any(|c| !c.is_integer()) {
            return Ok(Membership::NotMember(NonMembership::NonIntegral));
        }
        Ok(Membership::Member(
            coords.into_iter().map(|c| c.to_integer()).collect(),
        ))
    }
}

/// Integer coefficients `c` with `B c = x`, or the reason no such `c` exists.
pub fn membership_coeffs(b: &Basis, x: &[Scalar]) -> Result<Membership> {
    CoordinateSolver::new(b)?.solve(x)
}

/// Whether a nonzero lattice vector is not a proper integer multiple of another lattice vector.
pub fn is_primitive(b: &Basis, v: &[Scalar]) -> Result<bool> {
    if is_zero_vec(v) {
        return Err(LatticeError::Domain(
            "the zero vector is never primitive".into(),
        ));
    }
    match membership_coeffs(b, v)? {
        Membership::Member(c) => Ok(gcd_all(&c).is_one()),
        Membership::NotMember(reason) => Err(LatticeError::Domain(format!(
            "vector is not a lattice member ({reason:?})"
        ))),
    }
}

/// Column-style Hermite normal form of the lattice generated by `generators`.
///
/// Each output column `j` has a pivot row `r_j` (its last nonzero entry, positive),
/// pivot rows increase with `j`, and the entry of a later column in row `r_j` lies
/// in `[0, pivot_j)`. Rational generators are handled by clearing a common denominator.
pub fn hnf_canonical(generators: &[LatticeVector]) -> Result<Basis> {
    let m = generators
        .first()
        .map(Vec::len)
        .ok_or(LatticeError::EmptyLattice)?;
    if generators.iter().any(|g| g.len() != m) {
        return Err(LatticeError::Dimension(
            "generators differ in length".into(),
        ));
    }
    let denom = common_denominator(generators.iter().flatten());
    let scale = big(denom.clone());
    let cols: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|g| g.iter().map(|x| (x * &scale).to_integer()).collect())
        .collect();
    let reduced = integer_hnf(cols, m);
    if reduced.is_empty() {
        return Err(LatticeError::EmptyLattice);
    }
    let columns = reduced
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|x| Scalar::new(x, denom.clone()))
                .collect()
        })
        .collect();
    Basis::from_columns_unchecked(columns)
}

fn integer_hnf(cols: Vec<Vec<BigInt>>, m: usize) -> Vec<Vec<BigInt>> {
    let mut active: Vec<Vec<BigInt>> = cols
        .into_iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    let mut pivots: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for r in (0..m).rev() {
        loop {
            let nonzero: Vec<usize> = (0..active.len())
                .filter(|&k| !active[k][r].is_zero())
                .collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero
                .iter()
                .min_by_key(|&&k| active[k][r].abs())
                .expect("nonempty");
            let pivot_col = active[p].clone();
            for &k in &nonzero {
                if k == p {
                    continue;
                }
                let q = active[k][r].div_floor(&pivot_col[r]);
                for (x, y) in active[k].iter_mut().zip(&pivot_col) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(k) = (0..active.len()).find(|&k| !active[k][r].is_zero()) {
            let mut col = active.swap_remove(k);
            if col[r].is_negative() {
                col.iter_mut().for_each(|x| *x = -&*x);
            }
            pivots.push((r, col));
        }
        active.retain(|c| c.iter().any(|x| !x.is_zero()));
    }
    pivots.reverse();
    for k in 0..pivots.len() {
        for j in (0..k).rev() {
            let (rj, pj) = (pivots[j].0, pivots[j].1.clone());
            let q = pivots[k].1[rj].div_floor(&pj[rj]);
            if q.is_zero() {
                continue;
            }
            for (x, y) in pivots[k].1.iter_mut().zip(&pj) {
                *x -= &q * y;
            }
        }
    }
    pivots.into_iter().map(|(_, c)| c).collect()
}

/// A basis of the dual lattice together with the primal it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBasis {
    pub basis: Basis,
    pub primal: Basis,
}

/// `D = B (B^T B)^{-1}`, so that `<d_i, b_j> = [i == j]` and `span D = span B`.
pub fn dual_basis(b: &Basis) -> Result<DualBasis> {
    let gi = inverse(&b.gram()).ok_or(LatticeError::Singular)?;
    let n = b.rank();
    let columns = (0..n)
        .map(|i| {
            let mut d = vec![Scalar::zero(); b.ambient_dim()];
            for (j, col) in b.columns().iter().enumerate() {
                let g = &gi[j][i];
                if g.is_zero() {
                    continue;
                }
                for (x, y) in d.iter_mut().zip(col) {
                    *x += g * y;
                }
            }
            d
        })
        .collect();
    Ok(DualBasis {
        basis: Basis::new(columns)?,
        primal: b.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceMode {
    /// Project the lattice orthogonally to a primitive member `v`.
    ProjectMember,
    /// Keep the lattice points having zero inner product with `v`.
    IntersectKernel,
}

/// Rank `n - 1` lattice derived from `B` and a direction `v`; see [`ReduceMode`].
pub fn reduce_dimension(b: &Basis, v: &[Scalar], mode: ReduceMode) -> Result<Basis> {
    if b.rank() < 2 {
        return Err(LatticeError::Domain(
            "cannot reduce a rank-1 lattice".into(),
        ));
    }
    if v.len() != b.ambient_dim() {
        return Err(LatticeError::Dimension("direction has wrong length".into()));
    }
    if is_zero_vec(v) {
        return Err(LatticeError::Domain("direction must be nonzero".into()));
    }
    match mode {
        ReduceMode::ProjectMember => project_member(b, v),
        ReduceMode::IntersectKernel => intersect_kernel(b, v),
    }
}

fn project_member(b: &Basis, v: &[Scalar]) -> Result<Basis> {
    if !is_primitive(b, v)? {
        return Err(LatticeError::Domain("direction is not primitive".into()));
    }
    let vv = norm_sq(v);
    let projected: Vec<LatticeVector> = b
        .columns()
        .iter()
        .map(|c| sub_vec(c, &scale_vec(v, &(dot(c, v) / &vv))))
        .collect();
    let out = hnf_canonical(&projected)?;
    debug_assert_eq!(out.rank(), b.rank() - 1);
    Ok(out)
}

fn intersect_kernel(b: &Basis, v: &[Scalar]) -> Result<Basis> {
    let solver = CoordinateSolver::new(b)?;
    if let Membership::NotMember(NonMembership::OutsideSpan) = solver.solve(v)? {
        return Err(LatticeError::Domain("direction is outside the span".into()));
    }
    // Coefficient form a_j = <b_j, v>; the kernel is {c in Z^n : a . c = 0}.
    let a: Vec<Scalar> = b.columns().iter().map(|c| dot(c, v)).collect();
    let denom = big(common_denominator(&a));
    let mut a: Vec<BigInt> = a.iter().map(|x| (x * &denom).to_integer()).collect();
    let n = a.len();
    let mut u: Vec<Vec<BigInt>> = (0..n)
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
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&k| !a[k].is_zero()).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let p = *nonzero
            .iter()
            .min_by_key(|&&k| a[k].abs())
            .expect("nonempty");
        for &k in &nonzero {
            if k == p {
                continue;
            }
            let q = a[k].div_floor(&a[p]);
            a[k] = &a[k] - &q * &a[p];
            let up = u[p].clone();
            for (x, y) in u[k].iter_mut().zip(&up) {
                *x -= &q * y;
            }
        }
    }
    let pivot = (0..n)
        .find(|&k| !a[k].is_zero())
        .ok_or_else(|| LatticeError::Domain("direction is orthogonal to the span".into()))?;
    let columns = (0..n)
        .filter(|&k| k != pivot)
        .map(|k| b.combine(&u[k]))
        .collect();
    Basis::new(columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, vector};

    fn basis(cols: &[&[i64]]) -> Basis {
        Basis::from_integer_columns(&cols.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn norms_examples() {
        assert_eq!(
            norms(&vector(&[3, 4])).unwrap(),
            Norms {
                l2_squared: int(25),
                linf: int(4)
            }
        );
        assert_eq!(
            norms(&vector(&[0, 0])).unwrap(),
            Norms {
                l2_squared: int(0),
                linf: int(0)
            }
        );
        assert_eq!(
            norms(&[ratio(1, 2), ratio(-1, 3)]).unwrap(),
            Norms {
                l2_squared: ratio(13, 36),
                linf: ratio(1, 2)
            }
        );
        assert!(matches!(norms(&[]), Err(LatticeError::Dimension(_))));
    }

    #[test]
    fn det_squared_examples() {
        assert_eq!(det_squared(&Basis::identity(2)).unwrap(), int(1));
        assert_eq!(det_squared(&basis(&[&[2, 0], &[1, 2]])).unwrap(), int(16));
        // Gram [[2,1],[1,2]]
        assert_eq!(
            det_squared(&basis(&[&[1, 0, 1], &[0, 1, 1]])).unwrap(),
            int(3)
        );
    }

    #[test]
    fn dependent_columns_rejected() {
        assert_eq!(
            Basis::from_integer_columns(&[vec![1, 2], vec![2, 4]]),
            Err(LatticeError::Singular)
        );
        assert!(Basis::from_integer_columns(&[vec![1, 0], vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn hnf_examples() {
        let h = hnf_canonical(&[vector(&[1, 0]), vector(&[2, 0]), vector(&[0, 1])]).unwrap();
        assert_eq!(h, Basis::identity(2));
        assert_eq!(
            hnf_canonical(Basis::identity(3).columns()).unwrap(),
            Basis::identity(3)
        );
        let h = hnf_canonical(&[vector(&[2, 0]), vector(&[1, 1])]).unwrap();
        assert_eq!(h.rows(), vec![vector(&[2, 1]), vector(&[0, 1])]);
        // Same lattice from a different generating set.
        let h2 = hnf_canonical(&[vector(&[3, 1]), vector(&[1, 1]), vector(&[4, 0])]).unwrap();
        assert_eq!(h, h2);
        assert_eq!(
            hnf_canonical(&[vector(&[0, 0])]),
            Err(LatticeError::EmptyLattice)
        );
    }

    #[test]
    fn hnf_of_rational_generators() {
        let h = hnf_canonical(&[vec![ratio(1, 2), int(0)], vec![int(0), ratio(1, 3)]]).unwrap();
        assert_eq!(
            h.rows(),
            vec![vec![ratio(1, 2), int(0)], vec![int(0), ratio(1, 3)]]
        );
    }

    #[test]
    fn membership_examples() {
        let id = Basis::identity(2);
        assert_eq!(
            membership_coeffs(&id, &vector(&[3, -2])).unwrap(),
            Membership::Member(vec![3.into(), (-2).into()])
        );
        let b = basis(&[&[2, 0], &[1, 1]]);
        assert_eq!(
            membership_coeffs(&b, &vector(&[1, 1])).unwrap(),
            Membership::Member(vec![0.into(), 1.into()])
        );
        assert_eq!(
            membership_coeffs(&b, &vector(&[1, 0])).unwrap(),
            Membership::NotMember(NonMembership::NonIntegral)
        );
        let thin = basis(&[&[1, 0, 0]]);
        assert_eq!(
            membership_coeffs(&thin, &vector(&[0, 1, 0])).unwrap(),
            Membership::NotMember(NonMembership::OutsideSpan)
        );
        assert!(membership_coeffs(&id, &vector(&[1])).is_err());
    }

    #[test]
    fn primitivity() {
        let id = Basis::identity(2);
        assert!(!is_primitive(&id, &vector(&[2, 0])).unwrap());
        assert!(is_primitive(&id, &vector(&[2, 1])).unwrap());
        assert!(matches!(
            is_primitive(&id, &vector(&[0, 0])),
            Err(LatticeError::Domain(_))
        ));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(
            dual_basis(&Basis::identity(2)).unwrap().basis,
            Basis::identity(2)
        );
        let d = dual_basis(&Basis::diagonal(&[2, 3])).unwrap().basis;
        assert_eq!(
            d.rows(),
            vec![vec![ratio(1, 2), int(0)], vec![int(0), ratio(1, 3)]]
        );
        let b = basis(&[&[2, 0], &[1, 1]]);
        let d = dual_basis(&b).unwrap().basis;
        assert_eq!(d.column(0), &vec![ratio(1, 2), ratio(-1, 2)]);
        assert_eq!(d.column(1), &vector(&[0, 1]));
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { int(1) } else { int(0) };
                assert_eq!(dot(d.column(i), b.column(j)), expect);
            }
        }
        assert_eq!(det_squared(&d).unwrap(), int(1) / det_squared(&b).unwrap());
    }

    #[test]
    fn reduce_dimension_examples() {
        let id = Basis::identity(2);
        let p = reduce_dimension(&id, &vector(&[0, 1]), ReduceMode::ProjectMember).unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(norm_sq(p.column(0)), int(1));

        let k = reduce_dimension(&id, &vector(&[1, 1]), ReduceMode::IntersectKernel).unwrap();
        assert_eq!(
            hnf_canonical(k.columns()).unwrap(),
            hnf_canonical(&[vector(&[1, -1])]).unwrap()
        );

        let p = reduce_dimension(&id, &vector(&[1, 1]), ReduceMode::ProjectMember).unwrap();
        assert_eq!(norm_sq(p.column(0)), ratio(1, 2));
        assert_eq!(dot(p.column(0), &vector(&[1, 1])), int(0));

        assert!(reduce_dimension(&id, &vector(&[2, 0]), ReduceMode::ProjectMember).is_err());
        assert!(reduce_dimension(
            &basis(&[&[1, 0]]),
            &vector(&[1, 0]),
            ReduceMode::IntersectKernel
        )
        .is_err());
    }
}
