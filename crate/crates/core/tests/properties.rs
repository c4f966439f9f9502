use kreisslab_core::decomp::{self, Side};
use kreisslab_core::fourier::{self, Interval, IntervalPartition, TrigPolynomial};
use kreisslab_core::norms::{self, AscentConfig};
use kreisslab_core::power::{self, GrowthModel};
use kreisslab_core::resolvent::{self, SearchConfig};
use kreisslab_core::verify::DoubleDouble;
use kreisslab_core::{ComplexMatrix, Complex64};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|d| {
        prop::collection::vec(complex(), d * d).prop_map(move |e| ComplexMatrix::from_rows(d, &e).unwrap())
    })
}

/// Nonzero polynomial of dimension `dim` on frequencies in `[-6, 6]`.
fn polynomial(dim: usize) -> impl Strategy<Value = TrigPolynomial> {
    prop::collection::btree_map(-6i64..=6, prop::collection::vec(complex(), dim), 1..6)
        .prop_map(move |m| TrigPolynomial::from_terms(dim, m).unwrap())
        .prop_filter("nonzero", |f| f.coefficient_energy() > 1e-6)
}

/// Contiguous partition of `[-6, 6]` from a set of cut points.
fn partition() -> impl Strategy<Value = IntervalPartition> {
    prop::collection::btree_set(-5i64..=6, 0..5)
        .prop_map(|cuts| IntervalPartition::contiguous(-6, 6, &cuts.into_iter().collect::<Vec<_>>()).unwrap())
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), Just(f64::INFINITY), 1.0..8.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn block_projections_sum_to_f(f in polynomial(2), part in partition()) {
        let mut sum = TrigPolynomial::zero(2);
        for iv in part.intervals() {
            let g = fourier::project_interval(&f, iv);
            prop_assert_eq!(fourier::project_interval(&g, iv), g.clone());
            sum = sum.add(&g).unwrap();
        }
        prop_assert!(sum.max_abs_diff(&f) < 1e-14);
    }

    #[test]
    fn pairing_matches_quadrature_and_hoelder(f in polynomial(2), g in polynomial(2), p in 1.1..6.0f64) {
        let s = decomp::pairing(&f, &g);
        let q = decomp::pairing_quadrature(&f, &g, 32).unwrap();
        prop_assert!((s - q).norm() < 1e-10 * (1.0 + s.norm()));
        let pp = norms::conjugate_exponent(p);
        let nf = fourier::lp_torus_norm(&f, p, 2.0).unwrap().value;
        let ng = fourier::lp_torus_norm(&g, pp, 2.0).unwrap().value;
        prop_assert!(s.norm() <= nf * ng * (1.0 + 1e-9));
    }

    #[test]
    fn pairing_duality_margin_at_least_one(
        f in polynomial(1), g in polynomial(1), part in partition(), p in 1.2..5.0f64, q in 1.0..4.0f64,
    ) {
        if let Some(m) = decomp::pairing_duality_check(&f, &g, &part, p, q, 2.0).unwrap() {
            prop_assert!(m.margin >= 1.0 - 1e-9, "{}", m.margin);
        }
    }

    #[test]
    fn decomposition_sides_are_reciprocal(f in polynomial(1), part in partition(), p in 1.0..6.0f64, q in 1.0..6.0f64) {
        let up = decomp::decomposition_ratio(&f, &part, p, q, 2.0, Side::Upper).unwrap();
        let lo = decomp::decomposition_ratio(&f, &part, p, q, 2.0, Side::Lower).unwrap();
        prop_assert!((up * lo - 1.0).abs() < 1e-12);
        // q = 1 upper side is the triangle inequality.
        let tri = decomp::decomposition_ratio(&f, &part, p, 1.0, 2.0, Side::Upper).unwrap();
        prop_assert!(tri <= 1.0 + 1e-12);
    }

    #[test]
    fn riesz_projection_is_contractive_at_p2(f in polynomial(3)) {
        let g = fourier::project_interval(&f, &Interval::from(0));
        let nf = fourier::lp_torus_norm(&f, 2.0, 2.0).unwrap().value;
        let ng = fourier::lp_torus_norm(&g, 2.0, 2.0).unwrap().value;
        prop_assert!(ng <= nf * (1.0 + 1e-12));
    }

    #[test]
    fn vector_norms_decrease_in_p(v in prop::collection::vec(complex(), 1..6), p in 1.0..8.0f64, dp in 0.0..4.0f64) {
        let a = norms::vector_p_norm(&v, p).unwrap();
        let b = norms::vector_p_norm(&v, p + dp).unwrap();
        let inf = norms::vector_p_norm(&v, f64::INFINITY).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12));
        prop_assert!(inf <= b * (1.0 + 1e-12));
    }

    #[test]
    fn operator_norm_brackets_every_sample(t in matrix(3), p in exponent(), x in prop::collection::vec(complex(), 3)) {
        let cfg = AscentConfig { restarts: 4, ..AscentConfig::default() };
        let nb = norms::operator_p_norm(&t, p, &cfg).unwrap();
        prop_assert!(nb.lower <= nb.upper * (1.0 + 1e-12));
        let x = &x[..t.dim()];
        let nx = norms::vector_p_norm(x, p).unwrap();
        if nx > 1e-6 {
            let tx: Vec<Complex64> = (0..t.dim()).map(|i| (0..t.dim()).map(|j| t.get(i, j) * x[j]).sum()).collect();
            prop_assert!(norms::vector_p_norm(&tx, p).unwrap() / nx <= nb.upper * (1.0 + 1e-9));
        }
    }

    #[test]
    fn matrix_text_round_trip(t in matrix(4)) {
        let back = ComplexMatrix::from_text(&t.to_text()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn polynomial_text_round_trip(f in polynomial(3)) {
        let back = TrigPolynomial::from_text(&f.to_text()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn growth_fit_recovers_exponents(log_c in -3.0..3.0f64, alpha in 0.0..2.0f64, beta in -1.0..1.0f64) {
        let samples: Vec<(u64, f64)> = (1..=512u64)
            .map(|n| (n, (log_c + alpha * (n as f64).ln() + beta * (n as f64 + 2.0).ln().ln()).exp()))
            .collect();
        let fit = power::growth_fit(&samples, GrowthModel::PolyLog).unwrap();
        prop_assert!((fit.alpha - alpha).abs() < 1e-6);
        prop_assert!((fit.beta - beta).abs() < 1e-5);
        let poly: Vec<(u64, f64)> = samples.iter().map(|&(n, _)| (n, (log_c + alpha * (n as f64).ln()).exp())).collect();
        let fit = power::growth_fit(&poly, GrowthModel::Poly).unwrap();
        prop_assert!((fit.alpha - alpha).abs() < 1e-9);
    }

    #[test]
    fn double_double_arithmetic(a in -1e3..1e3f64, b in -1e3..1e3f64) {
        let (x, y) = (DoubleDouble::from_f64(a), DoubleDouble::from_f64(b));
        // Sums and products of two doubles are exact in double-double.
        let s = x + y - x - y;
        prop_assert!(s.to_f64().abs() <= 1e-28 * (a.abs() + b.abs()));
        let p = x * y;
        prop_assert_eq!(p.hi + p.lo, a * b);
        if a.abs() > 1e-3 {
            let q = (x * y) / x;
            prop_assert!((q - y).abs().to_f64() <= 1e-28 * b.abs().max(1.0));
        }
    }

    #[test]
    fn double_double_exp_ln_inverse(a in -50.0..50.0f64) {
        let x = DoubleDouble::from_f64(a);
        prop_assert!((x.exp().ln() - x).abs().to_f64() < 1e-28 * a.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn kreiss_below_strong_kreiss(t in matrix(3)) {
        let rho = t.spectral_radius();
        let t = if rho > 0.9 {
            let s = Complex64::new(0.9 / rho, 0.0);
            ComplexMatrix::new(t.as_dense() * s).unwrap()
        } else {
            t
        };
        let cfg = SearchConfig { radial_count: 16, angular_count: 16, ..SearchConfig::default() };
        let k = resolvent::kreiss_constant(&t, &cfg).unwrap();
        let ks = resolvent::strong_kreiss_constant(&t, &cfg, 4).unwrap();
        prop_assert!(k.value >= 1.0 - 1e-9);
        prop_assert!(k.value <= ks.value * (1.0 + 1e-12));
    }
}
