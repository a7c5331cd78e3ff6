//! Property tests for the exact lattice primitives.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use usvp_core::amplify::{amplify, l2_tail_energy, AmplifyParams};
use usvp_core::gso::{gso, is_lll_reduced, lll_reduce_with_transform, LllParams};
use usvp_core::lattice::{
    det_squared, dual_basis, hnf_canonical, is_primitive, membership_coeffs, reduce_dimension,
    Membership, ReduceMode,
};
use usvp_core::scalar::{dot, floor_sqrt, int, norm_sq, ratio};
use usvp_core::svp::{Enumerator, Norm};
use usvp_core::{Basis, Scalar};

fn basis(max_rank: usize, bound: i64) -> impl Strategy<Value = Basis> {
    (2..=max_rank)
        .prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(-bound..=bound, n), n))
        .prop_filter_map("singular", |cols| Basis::from_integer_columns(&cols).ok())
}

fn coeffs(n: usize, bound: i64) -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec((-bound..=bound).prop_map(BigInt::from), n)
}

fn with_coeffs(max_rank: usize) -> impl Strategy<Value = (Basis, Vec<BigInt>)> {
    basis(max_rank, 8).prop_flat_map(|b| {
        let n = b.rank();
        (Just(b), coeffs(n, 20))
    })
}

/// A unimodular transform built from elementary column operations.
fn unimodular_image(b: &Basis, ops: &[(usize, usize, i64)]) -> Basis {
    let mut cols = b.columns().to_vec();
    let n = cols.len();
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            cols.swap(0, i);
            continue;
        }
        let src = cols[j].clone();
        for (x, y) in cols[i].iter_mut().zip(src) {
            *x += int(c) * y;
        }
    }
    Basis::new(cols).unwrap()
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_round_trip((b, c) in with_coeffs(4)) {
        let x = b.combine(&c);
        prop_assert_eq!(membership_coeffs(&b, &x).unwrap(), Membership::Member(c));
    }

    #[test]
    fn half_shift_leaves_the_lattice((b, c) in with_coeffs(4)) {
        let mut x = b.combine(&c);
        for (xi, bi) in x.iter_mut().zip(b.column(0)) {
            *xi += bi * ratio(1, 2);
        }
        prop_assert!(!membership_coeffs(&b, &x).unwrap().is_member());
    }

    #[test]
    fn hnf_is_basis_invariant(b in basis(4, 8), ops in ops()) {
        let h = hnf_canonical(b.columns()).unwrap();
        prop_assert_eq!(&hnf_canonical(unimodular_image(&b, &ops).columns()).unwrap(), &h);
        prop_assert_eq!(hnf_canonical(h.columns()).unwrap(), h);
    }

    #[test]
    fn dual_of_dual_is_primal(b in basis(4, 8)) {
        let d = dual_basis(&b).unwrap().basis;
        for (i, di) in d.columns().iter().enumerate() {
            for (j, bj) in b.columns().iter().enumerate() {
                prop_assert_eq!(dot(di, bj), if i == j { int(1) } else { int(0) });
            }
        }
        prop_assert_eq!(dual_basis(&d).unwrap().basis, b.clone());
        prop_assert_eq!(det_squared(&d).unwrap() * det_squared(&b).unwrap(), int(1));
    }

    #[test]
    fn gso_product_is_determinant(b in basis(5, 10)) {
        let g = gso(&b);
        let prod = g.gs_norms_sq.iter().fold(Scalar::one(), |acc, x| acc * x);
        prop_assert_eq!(prod, det_squared(&b).unwrap());
        for i in 0..g.gs_vectors.len() {
            for j in 0..i {
                prop_assert!(dot(&g.gs_vectors[i], &g.gs_vectors[j]).is_zero());
            }
        }
    }

    #[test]
    fn lll_contract(b in basis(5, 12)) {
        let p = LllParams::default();
        let out = lll_reduce_with_transform(&b, &p);
        prop_assert!(is_lll_reduced(&out.reduced, &p));
        prop_assert_eq!(det_squared(&out.reduced).unwrap(), det_squared(&b).unwrap());
        prop_assert_eq!(hnf_canonical(out.reduced.columns()).unwrap(), hnf_canonical(b.columns()).unwrap());
        for (j, t) in out.transform.iter().enumerate() {
            prop_assert_eq!(&b.combine(t), out.reduced.column(j));
        }
    }

    #[test]
    fn svp_matches_brute_force(b in basis(3, 6)) {
        // |c_i| = |<v, d_i>| <= |v| |d_i|, and the shortest column bounds |v|.
        let r = lll_reduce_with_transform(&b, &LllParams::default()).reduced;
        let n = r.rank();
        let d = dual_basis(&r).unwrap().basis;
        let radius = r.columns().iter().map(|c| norm_sq(c)).min().unwrap();
        let k: Vec<i64> = d
            .columns()
            .iter()
            .map(|di| i64::try_from(floor_sqrt(&(&radius * norm_sq(di)))).unwrap())
            .collect();
        let s = Enumerator::default().shortest(&r, Norm::L2).unwrap();
        let mut best: Option<Scalar> = None;
        let mut count = 0usize;
        let mut c: Vec<i64> = k.iter().map(|x| -x).collect();
        loop {
            if c.iter().any(|x| *x != 0) {
                let v = r.combine(&c.iter().map(|x| BigInt::from(*x)).collect::<Vec<_>>());
                let q = norm_sq(&v);
                if q == s.lambda1 {
                    count += 1;
                }
                if best.as_ref().is_none_or(|b| q < *b) {
                    best = Some(q);
                }
            }
            let mut i = 0;
            while i < n && c[i] == k[i] {
                c[i] = -k[i];
                i += 1;
            }
            if i == n {
                break;
            }
            c[i] += 1;
        }
        prop_assert_eq!(best, Some(s.lambda1.clone()));
        prop_assert_eq!(count, s.vector_count());
    }

    #[test]
    fn svp_scales_quadratically(b in basis(4, 8), num in 1i64..=7, den in 1i64..=5) {
        let e = Enumerator::default();
        let s = ratio(num, den);
        let base = e.shortest(&b, Norm::L2).unwrap();
        let scaled = e.shortest(&b.scaled(&s), Norm::L2).unwrap();
        prop_assert_eq!(scaled.pair_count(), base.pair_count());
        prop_assert_eq!(scaled.lambda1, &base.lambda1 * &s * &s);
        let base_inf = e.shortest(&b, Norm::Linf).unwrap();
        let scaled_inf = e.shortest(&b.scaled(&s), Norm::Linf).unwrap();
        prop_assert_eq!(scaled_inf.lambda1, &base_inf.lambda1 * &s);
    }

    #[test]
    fn l2_tail_identity((b, c) in with_coeffs(4)) {
        let a = amplify(&b, AmplifyParams::l2()).unwrap();
        let lhs = norm_sq(&a.lift(&c)) - norm_sq(&a.original.combine(&c));
        prop_assert_eq!(lhs, l2_tail_energy(&c));
    }

    #[test]
    fn projection_drops_rank_and_stays_orthogonal(b in basis(4, 8), i in 0usize..4) {
        let v = b.column(i % b.rank()).clone();
        prop_assert!(is_primitive(&b, &v).unwrap());
        let p = reduce_dimension(&b, &v, ReduceMode::ProjectMember).unwrap();
        prop_assert_eq!(p.rank(), b.rank() - 1);
        for col in p.columns() {
            prop_assert!(dot(col, &v).is_zero());
        }
        let k = reduce_dimension(&b, &v, ReduceMode::IntersectKernel).unwrap();
        prop_assert_eq!(k.rank(), b.rank() - 1);
        for col in k.columns() {
            prop_assert!(dot(col, &v).is_zero());
            prop_assert!(membership_coeffs(&b, col).unwrap().is_member());
        }
    }
}
