use gwc_core::operator::{Conjugation, OperatorMatrix};
use gwc_core::series::TruncatedSeries;
use gwc_core::spaces::{WeightKind, WeightSequence};
use gwc_core::symbols::{symmetric_symbols, theorem_norm_formula, SymbolParams};
use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;

type C = Complex64;

fn kind() -> impl Strategy<Value = WeightKind> {
    prop::sample::select(WeightKind::NAMED.to_vec())
}

fn cx(radius: f64) -> impl Strategy<Value = C> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C::from_polar(r, t))
}

fn unimodular() -> impl Strategy<Value = C> {
    (0.0..std::f64::consts::TAU).prop_map(|t| C::from_polar(1.0, t))
}

fn matrix(n: usize) -> impl Strategy<Value = Array2<C>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), (n + 1) * (n + 1))
        .prop_map(move |v| Array2::from_shape_vec((n + 1, n + 1), v.into_iter().map(|(a, b)| C::new(a, b)).collect()).unwrap())
}

fn brute_symmetric(t: &Array2<C>, w: C, tol: f64) -> bool {
    let n = t.nrows();
    (0..n).all(|i| (0..n).all(|j| (w.powu(i as u32) * t[[i, j]] - w.powu(j as u32) * t[[j, i]]).norm() <= tol))
}

fn element(kind: WeightKind, coeffs: &[C]) -> gwc_core::spaces::SpaceElement {
    let s = WeightSequence::named(kind, coeffs.len() - 1).unwrap();
    s.element(TruncatedSeries::new(coeffs.to_vec()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_is_antilinear_isometric_involutive(
        k in kind(),
        w in unimodular(),
        x in prop::collection::vec(cx(1.0), 13),
        y in prop::collection::vec(cx(1.0), 13),
        a in cx(2.0),
        b in cx(2.0),
    ) {
        let cj = Conjugation::new(w).unwrap();
        let (fx, fy) = (element(k, &x), element(k, &y));
        let combo: Vec<C> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let lhs = cj.apply(&element(k, &combo));
        let (cx_, cy_) = (cj.apply(&fx), cj.apply(&fy));
        for n in 0..13 {
            let rhs = a.conj() * cx_.series().coeff(n) + b.conj() * cy_.series().coeff(n);
            prop_assert!((lhs.series().coeff(n) - rhs).norm() <= 1e-13 * (1.0 + rhs.norm()));
        }
        prop_assert!((cx_.norm() - fx.norm()).abs() <= 1e-13 * fx.norm().max(1.0));
        let back = cj.apply(&cx_);
        for n in 0..13 {
            prop_assert!((back.series().coeff(n) - x[n]).norm() <= 1e-13);
        }
    }

    #[test]
    fn symmetry_defect_zero_iff_entrywise_symmetric(t in matrix(10), w in unimodular(), symmetrize in any::<bool>()) {
        let n = t.nrows();
        let mut t = t;
        if symmetrize {
            for i in 0..n {
                for j in (i + 1)..n {
                    t[[j, i]] = w.powu((j - i) as u32).conj() * t[[i, j]];
                }
            }
        }
        let s = WeightSequence::named(WeightKind::Hardy, n - 1).unwrap();
        let brute = brute_symmetric(&t, w, 1e-12);
        let d = OperatorMatrix::from_entries(t, &s, 0).unwrap().symmetry_defect(&Conjugation::new(w).unwrap());
        prop_assert_eq!(brute, symmetrize);
        if brute {
            prop_assert!(d < 1e-13, "defect {}", d);
        } else {
            prop_assert!(d > 1e-6, "defect {}", d);
        }
    }

    #[test]
    fn compression_is_independent_of_truncation(
        k in kind(),
        phi in prop::collection::vec(cx(0.3), 3),
        psi in prop::collection::vec(cx(1.0), 4),
        m in 0usize..=3,
        n in 8usize..24,
    ) {
        let build = |order: usize| {
            let s = WeightSequence::named(k, order).unwrap();
            let f = TruncatedSeries::from_slice(&phi, order).unwrap();
            let g = TruncatedSeries::from_slice(&psi, order).unwrap();
            OperatorMatrix::build(&f, &g, m, &s).unwrap()
        };
        let (small, large) = (build(n), build(n + 8));
        for i in 0..=n {
            for j in 0..=n {
                prop_assert_eq!(small.entries()[[i, j]], large.entries()[[i, j]]);
            }
        }
    }

    #[test]
    fn adjoint_is_an_involution(t in matrix(8)) {
        let s = WeightSequence::named(WeightKind::Bergman, 8).unwrap();
        let op = OperatorMatrix::from_entries(t, &s, 1).unwrap();
        let twice = op.adjoint().adjoint();
        prop_assert_eq!(twice.entries(), op.entries());
    }

    #[test]
    fn case_one_column_norms(
        k in kind(),
        m in 1usize..=3,
        w in unimodular(),
        a1 in cx(0.9),
        a2 in cx(3.0).prop_filter("nonzero", |z| z.norm() > 1e-3),
    ) {
        let s = WeightSequence::named(k, 32).unwrap();
        let params = SymbolParams::new(m, w, C::new(0.0, 0.0), a1, a2).unwrap();
        let pair = symmetric_symbols(&params, &s).unwrap();
        let t = OperatorMatrix::build(&pair.phi, &pair.psi, m, &s).unwrap();
        let e = t.entries();
        for j in 0..=32 {
            let norm = e.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let expected = theorem_norm_formula(j, &params);
            prop_assert!((norm - expected).abs() <= 1e-12 * expected.max(f64::MIN_POSITIVE), "j = {}", j);
        }
    }
}
