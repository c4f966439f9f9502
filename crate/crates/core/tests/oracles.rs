//! Closed-form values and frozen regression floors.

use kreisslab_core::decomp::{self, DecompConfig, Side};
use kreisslab_core::fourier::{self, Interval, MarcinkiewiczConfig, RieszConfig, TrigPolynomial};
use kreisslab_core::norms::{self, AscentConfig};
use kreisslab_core::operators::{make_gallery_operator, OperatorKind, OperatorSpec};
use kreisslab_core::power::{self, GrowthModel};
use kreisslab_core::resolvent::{self, SearchConfig};
use kreisslab_core::verify;
use kreisslab_core::{ComplexMatrix, Complex64};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn gallery(kind: OperatorKind, dim: usize) -> ComplexMatrix {
    make_gallery_operator(&OperatorSpec::new(kind, dim)).unwrap()
}

#[test]
fn operator_norms_of_a_fixed_matrix() {
    let t = ComplexMatrix::from_real_rows(2, &[1., 2., 3., 4.]).unwrap();
    let cfg = AscentConfig::default();
    let n1 = norms::operator_p_norm(&t, 1.0, &cfg).unwrap();
    let n2 = norms::operator_p_norm(&t, 2.0, &cfg).unwrap();
    let ninf = norms::operator_p_norm(&t, f64::INFINITY, &cfg).unwrap();
    assert_eq!((n1.lower, n1.upper), (6.0, 6.0));
    assert_eq!((ninf.lower, ninf.upper), (7.0, 7.0));
    assert!((n2.lower - 5.464985704219043).abs() < 1e-12);
    assert!(n2.is_exact());
}

#[test]
fn kreiss_constant_of_two_by_two_nilpotent() {
    // ||R(z)|| for [[0, 4], [0, 0]] peaks at (|z| - 1) ||R|| = 5/4, |z| = 8/3.
    let t = gallery(OperatorKind::Nilpotent { a: 4.0 }, 2);
    let k = resolvent::kreiss_constant(&t, &SearchConfig::default()).unwrap();
    assert!(k.value <= 1.25 + 1e-7, "{}", k.value);
    assert!(k.value >= 1.25 - 1e-3, "{}", k.value);
    let r = k.argmax.unwrap().norm();
    assert!((r - 8.0 / 3.0).abs() < 0.2, "{r}");
}

#[test]
fn normal_contractions_have_kreiss_constant_one() {
    for t in [
        gallery(OperatorKind::Identity, 3),
        gallery(OperatorKind::Rotation { theta: 0.3 }, 4),
    ] {
        let k = resolvent::kreiss_constant(&t, &SearchConfig::default()).unwrap();
        // Resolvent solves within 1e-8 of the spectrum lose about 8 digits.
        assert!((k.value - 1.0).abs() < 1e-7, "{}", k.value);
    }
}

#[test]
fn jordan_block_powers() {
    // ||J^n||_inf for J = [[1, 1], [0, 1]] is n + 1.
    let t = gallery(OperatorKind::Jordan { re: 1.0, im: 0.0, eps: 1.0 }, 2);
    let seq = norms::power_norm_sequence(&t, f64::INFINITY, 64, &AscentConfig::default()).unwrap();
    for (i, p) in seq.iter().enumerate() {
        assert_eq!(p.upper(), (i + 1) as f64 + 1.0);
    }
    let fit = power::growth_fit(&power::fit_samples(&seq), GrowthModel::Poly).unwrap();
    assert!((fit.alpha - 1.0).abs() < 0.05, "{}", fit.alpha);
}

#[test]
fn torus_norms_of_one_plus_e1() {
    let f = TrigPolynomial::scalar(&[(0, c(1.)), (1, c(1.))]);
    let l2 = fourier::lp_torus_norm(&f, 2.0, 2.0).unwrap().value;
    let l4 = fourier::lp_torus_norm(&f, 4.0, 2.0).unwrap().value;
    let linf = fourier::lp_torus_norm(&f, f64::INFINITY, 2.0).unwrap().value;
    assert!((l2 - 2f64.sqrt()).abs() < 1e-14);
    assert!((l4 - 6f64.powf(0.25)).abs() < 1e-14);
    assert!((linf - 2.0).abs() < 1e-12);
}

#[test]
fn riesz_projection_at_p_2_is_contractive() {
    let f = TrigPolynomial::scalar(&[(-2, c(1.)), (0, c(-2.)), (3, Complex64::new(0.5, 1.0))]);
    let g = fourier::project_interval(&f, &Interval::from(0));
    let nf = fourier::lp_torus_norm(&f, 2.0, 2.0).unwrap().value;
    let ng = fourier::lp_torus_norm(&g, 2.0, 2.0).unwrap().value;
    assert!(ng <= nf);
    assert!((ng * ng - 5.25).abs() < 1e-12);
}

#[test]
fn riesz_floor_p4() {
    // Default search, seed 0. The search stays well below the sharp value
    // 1/sin(pi/4) ~ 1.414; this floor guards against regressions only.
    let r = fourier::riesz_norm_lower_bound(4.0, 1, 2.0, &RieszConfig::default()).unwrap();
    assert!(r.value >= 1.0890747606, "{}", r.value);
    assert!(r.exact_quadrature);
}

#[test]
fn marcinkiewicz_floor_p4() {
    let m = fourier::marcinkiewicz_corpus(&MarcinkiewiczConfig::default()).unwrap();
    assert!(m.m_hat >= 0.1972501538, "{}", m.m_hat);
    assert!(m.m_hat <= 1.0 / 3.0, "{}", m.m_hat);
}

#[test]
fn decomposition_exhaustive_scan_p4_q4() {
    let cfg = DecompConfig {
        max_support: 8,
        trials: 0,
        refine: 0,
        ..Default::default()
    };
    let d = decomp::estimate_constant(4.0, 4.0, 2.0, Side::Lower, 0.0, &cfg).unwrap();
    assert!((d.constant_lower - 1.0922123778851107).abs() < 1e-12, "{}", d.constant_lower);
    let (f, part) = d.witness().unwrap();
    let again = decomp::decomposition_ratio(&f, &part, 4.0, 4.0, 2.0, Side::Lower).unwrap();
    assert!((again - d.constant_lower).abs() < 1e-12);
}

#[test]
fn appendix_values() {
    let r = verify::appendix_b(100, 95).unwrap();
    assert_eq!((r.k_lo, r.k_hi), (85, 94));
    assert!((r.a - 4.208149015235094).abs() < 1e-12);
    let a2 = verify::verify_lemma_a2(100).unwrap();
    assert!((a2.sup_a - 7.758261738680208).abs() < 1e-12);
    assert!((a2.v1_a - 2.0 * a2.sup_a).abs() < 1e-12);
    let a1 = verify::verify_lemma_a1(100).unwrap();
    assert!(a1.pass && !a1.review);
    assert!((a1.min_slack - 0.11240510621273979).abs() < 1e-12);
}

#[test]
fn poisson_terms_match_f64_for_small_n() {
    for n in 1..30u64 {
        for k in 0..40u64 {
            let direct = k as f64 * (n as f64).ln() - (1..=k).map(|j| (j as f64).ln()).sum::<f64>();
            let dd = verify::log_poisson_term(n, k).to_f64();
            assert!((dd - direct).abs() < 1e-12 * direct.abs().max(1.0), "n={n} k={k}");
        }
    }
}
