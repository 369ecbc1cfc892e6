use monogamy_core::linalg::{
    eigh, kron, kron_vec, partial_trace, CMatrix, CVector, Complex, DensityMatrix,
};
use monogamy_core::measures::{
    ckw_residual, concurrence_pure_bipartition, eof_from_concurrence, hyperdeterminant_tangle,
    pure_two_qubit, tangle, wootters_concurrence,
};
use monogamy_core::monogamy::{evaluate, Verdict};
use monogamy_core::operational::{locc_convertible, operational_pair};
use monogamy_core::states::{sample_at, FamilyTag, GhzParams, PureState3Q};
use monogamy_core::table::format_float;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex::new(re, im))
}

fn matrix(dim: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex(), dim * dim)
        .prop_map(move |d| CMatrix::from_row_major(dim, d).unwrap())
}

fn hermitian(dim: usize) -> impl Strategy<Value = CMatrix> {
    matrix(dim).prop_map(|b| {
        let sum = &b + &b.adjoint();
        sum.scale(Complex::new(0.5, 0.0))
    })
}

fn unitary(dim: usize) -> impl Strategy<Value = CMatrix> {
    hermitian(dim).prop_map(|h| eigh(&h).unwrap().vectors)
}

fn pure_state() -> impl Strategy<Value = PureState3Q> {
    prop::collection::vec(complex(), 8)
        .prop_filter("non-negligible norm", |v| {
            v.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-3
        })
        .prop_map(|v| {
            let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let amps: [Complex; 8] = std::array::from_fn(|i| v[i] / n);
            PureState3Q::new(amps).unwrap()
        })
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn nalgebra_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.dim();
    let na = nalgebra::DMatrix::from_row_slice(n, n, m.as_slice());
    let mut ev: Vec<f64> = na.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kron_is_associative(a in matrix(2), b in matrix(2), c in matrix(2)) {
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert!(max_abs_diff(&left, &right) < 1e-14);
    }

    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(2), c in matrix(2), d in matrix(2)) {
        let left = &kron(&a, &b).unwrap() * &kron(&c, &d).unwrap();
        let right = kron(&(&a * &c), &(&b * &d)).unwrap();
        prop_assert!(max_abs_diff(&left, &right) < 1e-13);
    }

    #[test]
    fn eigh_matches_nalgebra(h2 in hermitian(2), h4 in hermitian(4), h8 in hermitian(8)) {
        for h in [h2, h4, h8] {
            let ours = eigh(&h).unwrap().values;
            let theirs = nalgebra_eigenvalues(&h);
            for (x, y) in ours.iter().zip(&theirs) {
                prop_assert!((x - y).abs() < 1e-12, "{ours:?} vs {theirs:?}");
            }
        }
    }

    #[test]
    fn eigh_reconstructs_and_preserves_trace(h in hermitian(4)) {
        let e = eigh(&h).unwrap();
        let sum: f64 = e.values.iter().sum();
        prop_assert!((sum - h.trace().re).abs() < 1e-12);
        let lambda = CMatrix::diag(
            &e.values.iter().map(|&v| Complex::new(v, 0.0)).collect::<Vec<_>>(),
        ).unwrap();
        let back = &(&e.vectors * &lambda) * &e.vectors.adjoint();
        prop_assert!(max_abs_diff(&back, &h) < 1e-12);
        let gram = &e.vectors.adjoint() * &e.vectors;
        prop_assert!(max_abs_diff(&gram, &CMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn spectrum_is_unitarily_invariant(h in hermitian(4), u in unitary(4)) {
        let rotated = &(&u * &h) * &u.adjoint();
        let a = eigh(&h).unwrap().values;
        let b = eigh(&rotated).unwrap().values;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_spectra_agree_across_cuts(s in pure_state(), q in 1usize..=3) {
        let rest: Vec<usize> = (1..=3).filter(|&k| k != q).collect();
        let one = eigh(partial_trace(s.vector(), &[q]).unwrap().matrix()).unwrap().values;
        let two = eigh(partial_trace(s.vector(), &rest).unwrap().matrix()).unwrap().values;
        prop_assert!((one[0] - two[0]).abs() < 1e-12);
        prop_assert!((one[1] - two[1]).abs() < 1e-12);
        prop_assert!(two[2].abs() < 1e-12 && two[3].abs() < 1e-12);
        let det = one[0] * one[1];
        let c = concurrence_pure_bipartition(&s, q).unwrap();
        prop_assert!((c - 2.0 * det.max(0.0).sqrt()).abs() < 1e-7);
    }

    #[test]
    fn ckw_holds_for_every_focus(s in pure_state()) {
        for focus in 1..=3 {
            prop_assert!(ckw_residual(&s, focus).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn tangle_does_not_depend_on_the_focus(s in pure_state()) {
        let t: Vec<f64> = (1..=3).map(|f| ckw_residual(&s, f).unwrap()).collect();
        prop_assert!((t[0] - t[1]).abs() < 1e-9 && (t[0] - t[2]).abs() < 1e-9);
        prop_assert!((tangle(&s).unwrap() - hyperdeterminant_tangle(&s)).abs() < 1e-12);
    }

    #[test]
    fn tangle_is_invariant_under_relabelling(s in pure_state(), k in 0usize..6) {
        let perms = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];
        let moved = s.permute_qubits(perms[k]).unwrap();
        prop_assert!((tangle(&moved).unwrap() - tangle(&s).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn pure_two_qubit_concurrence(a in complex(), b in complex(), c in complex(), d in complex()) {
        let n = (a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr()).sqrt();
        prop_assume!(n > 1e-3);
        let rho = pure_two_qubit([a, b, c, d]).unwrap();
        let want = 2.0 * (a * d - b * c).norm() / (n * n);
        prop_assert!((wootters_concurrence(&rho).unwrap() - want).abs() < 1e-7);
    }

    #[test]
    fn wootters_is_local_unitary_invariant(s in pure_state(), u in unitary(2), v in unitary(2)) {
        let rho = partial_trace(s.vector(), &[1, 2]).unwrap();
        let uv = kron(&u, &v).unwrap();
        let rotated = &(&uv * rho.matrix()) * &uv.adjoint();
        let herm = &rotated + &rotated.adjoint();
        let rotated = DensityMatrix::new(herm.scale(Complex::new(0.5, 0.0))).unwrap();
        let a = wootters_concurrence(&rho).unwrap();
        let b = wootters_concurrence(&rotated).unwrap();
        prop_assert!((a - b).abs() < 1e-7, "{a} vs {b}");
    }

    #[test]
    fn kron_vec_norms_multiply(a in prop::collection::vec(complex(), 2), b in prop::collection::vec(complex(), 4)) {
        let a = CVector::new(a).unwrap();
        let b = CVector::new(b).unwrap();
        let ab = kron_vec(&a, &b).unwrap();
        prop_assert!((ab.norm_sqr() - a.norm_sqr() * b.norm_sqr()).abs() < 1e-13);
    }

    #[test]
    fn eof_is_monotone(c1 in 0.0f64..=1.0, c2 in 0.0f64..=1.0) {
        let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
        let (e_lo, e_hi) = (eof_from_concurrence(lo).unwrap(), eof_from_concurrence(hi).unwrap());
        prop_assert!(e_lo <= e_hi);
        prop_assert!((0.0..=1.0).contains(&e_lo) && (0.0..=1.0).contains(&e_hi));
    }

    #[test]
    fn operational_measures_stay_in_unit_interval(family in 0usize..8, seed in any::<u64>(), index in 0u64..1000) {
        let p = sample_at(FamilyTag::ALL[family], seed, index);
        let op = operational_pair(&p).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&op.e_s), "{p:?} {op:?}");
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&op.e_a), "{p:?} {op:?}");
    }

    #[test]
    fn scores_match_their_definition(family in 0usize..8, seed in any::<u64>(), index in 0u64..1000) {
        let r = evaluate(&sample_at(FamilyTag::ALL[family], seed, index)).unwrap();
        let sum = r.e12 * r.e12 + r.e13 * r.e13 + r.e23 * r.e23;
        prop_assert!((r.m1 - (r.e_s * r.e_s - sum)).abs() < 1e-12);
        prop_assert!((r.m2 - (r.e_a * r.e_a - sum)).abs() < 1e-12);
        prop_assert_eq!(r.verdict1, Verdict::of(r.m1));
        prop_assert_eq!(r.verdict2, Verdict::of(r.m2));
    }

    #[test]
    fn verdict_flips_with_score_sign(s in 1e-11f64..10.0) {
        prop_assert_eq!(Verdict::of(s), Verdict::Satisfied);
        prop_assert_eq!(Verdict::of(-s), Verdict::Violated);
    }

    #[test]
    fn convertibility_is_reflexive_on_all_nonzero(
        g in prop::array::uniform3(1e-6f64..0.4999),
        r in 1e-3f64..1.0,
        theta in -std::f64::consts::PI..std::f64::consts::PI,
    ) {
        let p = GhzParams::new(g, Complex::from_polar(r, theta)).unwrap();
        prop_assert!(locc_convertible(&p, &p));
    }

    #[test]
    fn float_cells_keep_twelve_digits(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let back: f64 = format_float(x).parse().unwrap();
        if x == 0.0 {
            prop_assert_eq!(back, 0.0);
        } else {
            prop_assert!(((back - x) / x).abs() <= 5e-12, "{x:e} -> {back:e}");
        }
    }
}
