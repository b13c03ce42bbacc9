use gwc_core::operator::{Conjugation, OperatorMatrix};
use gwc_core::spaces::{WeightKind, WeightSequence};
use gwc_core::symbols::{
    automorphism_symbols, normal_constant_condition, obstruction_terms, pq_series, symmetric_symbols, SymbolParams,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::TAU;

type C = Complex64;

const ONE: C = C::new(1.0, 0.0);

fn kind() -> impl Strategy<Value = WeightKind> {
    prop::sample::select(WeightKind::NAMED.to_vec())
}

fn cx(lo: f64, hi: f64) -> impl Strategy<Value = C> {
    (lo..hi, 0.0..TAU).prop_map(|(r, t)| C::from_polar(r, t))
}

fn unimodular() -> impl Strategy<Value = C> {
    (0.0..TAU).prop_map(|t| C::from_polar(1.0, t))
}

fn beta(kind: WeightKind, n: usize) -> f64 {
    match kind {
        WeightKind::Hardy => 1.0,
        WeightKind::Bergman => 1.0 / ((n + 1) as f64).sqrt(),
        WeightKind::Dirichlet if n == 0 => 1.0,
        WeightKind::Dirichlet => (n as f64).sqrt(),
        WeightKind::DerivHardy if n == 0 => 1.0,
        WeightKind::DerivHardy => n as f64,
        WeightKind::Custom => unreachable!(),
    }
}

fn ff(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (n - i) as f64).product()
}

fn mul(a: &[C], b: &[C], len: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `beta(i)/beta(j) * j!/(j-m)! * [z^i] psi phi^(j-m)` by naive convolution.
fn entry_oracle(kind: WeightKind, phi: &[C], psi: &[C], m: usize, i: usize, j: usize) -> C {
    if j < m {
        return C::new(0.0, 0.0);
    }
    let len = i + 1;
    let mut acc = psi.iter().copied().take(len).collect::<Vec<_>>();
    acc.resize(len, C::new(0.0, 0.0));
    for _ in 0..(j - m) {
        acc = mul(&acc, phi, len);
    }
    acc[i] * (beta(kind, i) / beta(kind, j) * ff(j, m))
}

fn pair(kind: WeightKind, m: usize, w: C, a0: C, a1: C, order: usize) -> (WeightSequence, SymbolParams, OperatorMatrix) {
    let s = WeightSequence::named(kind, order).unwrap();
    let p = SymbolParams::new(m, w, a0, a1, ONE).unwrap();
    let sym = symmetric_symbols(&p, &s).unwrap();
    let t = OperatorMatrix::build(&sym.phi, &sym.psi, m, &s).unwrap();
    (s, p, t)
}

fn residual(t: &OperatorMatrix, w: C, i: usize, j: usize) -> f64 {
    let e = t.entries();
    (w.powu(i as u32) * e[[i, j]] - w.powu(j as u32) * e[[j, i]]).norm()
}

#[test]
fn symbols_map_the_disc_into_itself() {
    let grid: Vec<C> = [0.0, 0.25, 0.5]
        .iter()
        .flat_map(|&r| (0..4).map(move |k| C::from_polar(r, TAU * k as f64 / 4.0)))
        .collect();
    let mut escapes = Vec::new();
    for kind in WeightKind::NAMED {
        let s = WeightSequence::named(kind, 48).unwrap();
        for m in 1..=3 {
            for &a0 in &grid {
                for &a1 in &grid {
                    let p = SymbolParams::new(m, C::from_polar(1.0, 0.7), a0, a1, ONE).unwrap();
                    let phi = symmetric_symbols(&p, &s).unwrap().phi;
                    let sup = (0..64)
                        .map(|k| phi.evaluate(C::from_polar(0.9, TAU * k as f64 / 64.0)).norm())
                        .fold(0.0, f64::max);
                    if sup >= 1.0 {
                        escapes.push(format!("{} m={m} a0={a0:.2} a1={a1:.2}: {sup:.4}", kind.as_str()));
                    }
                }
            }
        }
    }
    assert!(escapes.is_empty(), "{} grid points leave the disc:\n{}", escapes.len(), escapes.join("\n"));
}

#[test]
fn first_obstructed_entry_is_symmetric_in_every_space() {
    // The (m+2, m+1) entry is where the coefficient identity lives. It is
    // symmetric for every named space, and the identity vanishes with it.
    let grid = [C::new(0.2, 0.0), C::new(0.0, 0.3), C::new(0.4, 0.0)];
    for kind in WeightKind::NAMED {
        for m in 1..=3 {
            for &a0 in &grid {
                for &a1 in &grid {
                    let w = C::from_polar(1.0, 1.1);
                    let (s, p, t) = pair(kind, m, w, a0, a1, 24);
                    let phi = symmetric_symbols(&p, &s).unwrap();
                    let (f, g) = (phi.phi.coeffs(), phi.psi.coeffs());
                    let oracle = w.powu((m + 2) as u32) * entry_oracle(kind, f, g, m, m + 2, m + 1)
                        - w.powu((m + 1) as u32) * entry_oracle(kind, f, g, m, m + 1, m + 2);
                    assert!(oracle.norm() < 1e-12, "{} m={m}: {oracle}", kind.as_str());
                    assert!(residual(&t, w, m + 2, m + 1) < 1e-12);
                    assert!(obstruction_terms(&p, &s).unwrap().vanishes());
                }
            }
        }
    }
}

#[test]
fn deriv_hardy_pairs_break_symmetry_one_entry_later() {
    let w = C::from_polar(1.0, 1.1);
    for m in 1..=3 {
        let (_, _, t) = pair(WeightKind::DerivHardy, m, w, C::new(0.3, 0.0), C::new(0.3, 0.0), 24);
        assert!(residual(&t, w, m + 2, m + 1) < 1e-12);
        assert!(residual(&t, w, m + 3, m + 2) > 1e-3, "m={m}");
        let d = t.symmetry_defect(&Conjugation::new(w).unwrap());
        assert!(d > 1e-4, "m={m}: defect {d}");
    }
}

#[test]
fn symmetric_pairs_agree_with_obstruction() {
    // Where the computed operator is symmetric, the identity must vanish.
    let grid = [C::new(0.2, 0.0), C::new(0.0, 0.3), C::new(0.4, 0.0)];
    for kind in WeightKind::NAMED {
        for &a0 in &grid {
            for &a1 in &grid {
                let w = C::from_polar(1.0, -0.4);
                let (s, p, t) = pair(kind, 2, w, a0, a1, 32);
                if t.symmetry_defect(&Conjugation::new(w).unwrap()) < 1e-10 {
                    assert!(obstruction_terms(&p, &s).unwrap().vanishes(), "{}", kind.as_str());
                }
            }
        }
    }
}

#[test]
fn deriv_hardy_rotation_modulus() {
    // |lambda| = beta(m+1)^2 beta(m+2)^2 / ((m+2) beta(m+1)^4 - (m+1) beta(m)^2 beta(m+2)^2)
    // with beta(n) = n: 36/30, 144/132, 400/380.
    let expected = [6.0 / 5.0, 12.0 / 11.0, 20.0 / 19.0];
    let s = WeightSequence::named(WeightKind::DerivHardy, 16).unwrap();
    for (m, want) in (1..=3).zip(expected) {
        let a = automorphism_symbols(C::from_polar(0.4, 0.5), C::from_polar(1.0, 1.0), m, &s, ONE).unwrap();
        assert!((a.lambda.norm() - want).abs() < 1e-14, "m={m}: {}", a.lambda.norm());
        assert!(a.warning.is_some());
    }
}

#[test]
fn normal_constant_line() {
    for k in 0..16 {
        let theta = TAU * k as f64 / 16.0;
        let w = C::from_polar(1.0, theta);
        for r in [-0.7, -0.1, 0.0, 0.35, 0.9] {
            assert!(normal_constant_condition(C::from_polar(r, theta / 2.0), w));
            if r != 0.0 {
                assert!(!normal_constant_condition(C::from_polar(r, theta / 2.0 + 0.5), w));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operator_entries_match_convolution(
        k in kind(),
        m in 0usize..=3,
        phi in prop::collection::vec(cx(0.0, 0.3), 4),
        psi in prop::collection::vec(cx(0.0, 1.0), 4),
    ) {
        let order = 12;
        let s = WeightSequence::named(k, order).unwrap();
        let f = gwc_core::series::TruncatedSeries::from_slice(&phi, order).unwrap();
        let g = gwc_core::series::TruncatedSeries::from_slice(&psi, order).unwrap();
        let t = OperatorMatrix::build(&f, &g, m, &s).unwrap();
        for i in 0..=order {
            for j in 0..=order {
                let want = entry_oracle(k, f.coeffs(), g.coeffs(), m, i, j);
                let got = t.entries()[[i, j]];
                prop_assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()), "({}, {}): {} vs {}", i, j, got, want);
            }
        }
    }

    #[test]
    fn rotation_is_unimodular_outside_deriv_hardy(
        k in prop::sample::select(vec![WeightKind::Hardy, WeightKind::Bergman, WeightKind::Dirichlet]),
        m in 1usize..=3,
        a in cx(0.05, 0.9),
        w in unimodular(),
    ) {
        let s = WeightSequence::named(k, 24).unwrap();
        let au = automorphism_symbols(a, w, m, &s, ONE).unwrap();
        prop_assert!(au.lambda_deviation < 1e-12);
        prop_assert!((au.phi.coeff(0) - au.lambda * a).norm() < 1e-14);
        // The forced a1 is the derivative of the Moebius map at 0.
        prop_assert!((au.a1 - au.phi.coeff(1)).norm() < 1e-12);
        prop_assert!((au.a1 - au.lambda * (a.norm_sqr() - 1.0)).norm() < 1e-12);
    }

    #[test]
    fn degenerate_families_are_symmetric(
        k in kind(),
        m in 1usize..=3,
        w in unimodular(),
        a in cx(0.0, 0.6),
        which in any::<bool>(),
    ) {
        let (a0, a1) = if which { (C::new(0.0, 0.0), a) } else { (a, C::new(0.0, 0.0)) };
        let (_, _, t) = pair(k, m, w, a0, a1, 24);
        prop_assert!(t.symmetry_defect(&Conjugation::new(w).unwrap()) < 1e-12);
    }

    #[test]
    fn hermitian_pq_flip_identities(
        k in kind(),
        m in 1usize..=3,
        theta in 0.0..TAU,
        r in prop::sample::select(vec![-0.6, -0.3, 0.15, 0.45]),
        a1 in -0.8f64..0.8,
    ) {
        let w = C::from_polar(1.0, theta);
        let a0 = C::from_polar(r, theta / 2.0);
        let s = WeightSequence::named(k, 24).unwrap();
        let params = SymbolParams::new(m, w, a0, C::new(a1, 0.0), ONE).unwrap();
        let (p, q) = pq_series(&params, &s).unwrap();
        let wq = w.powu((2 * m + 1) as u32);
        for n in 0..=24 {
            let flip = |b: C| b.conj() * w.conj().powu(n as u32);
            prop_assert!((flip(p.coeff(n)) - p.coeff(n)).norm() <= 1e-13 * p.coeff(n).norm().max(1.0));
            prop_assert!((flip(q.coeff(n)) - wq * q.coeff(n)).norm() <= 1e-13 * q.coeff(n).norm().max(1.0));
        }
    }
}
