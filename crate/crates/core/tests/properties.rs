use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use occert_core::certifier::{
    certify_p_sufficient, check_bhl, check_lemma_ll, perturbation_budget_check, refute_p, PStatus,
    PerturbationBudget, RefuteConfig,
};
use occert_core::curvature::{
    curvature_operator, kulkarni_nomizu_square, phi, psi, psi_expressions, random_curvature_tensor,
    random_nabla_j, ricci, ricci_star, ricci_star_half_trace, sup_norm_bounds_with,
    validate_symmetries, CurvatureTensor, NablaJKind, SupNormConfig,
};
use occert_core::hermitian::{
    inner_lambda2, is_positive_form, norm_e, norm_lambda2, random_orthogonal_complex_structure,
    ComplexStructure, EuclideanSpace, TwoForm,
};
use occert_core::sphere::{riemann, ChartPoint, FdConfig, FdScheme, MetricField};
use occert_core::{linalg, rng};

fn id6() -> DMatrix<f64> {
    DMatrix::identity(6, 6)
}

fn space_from(seed: u64) -> EuclideanSpace {
    let mut s = rng::stream(seed, 0x5bace);
    let a = rng::gaussian_matrix(&mut s, 6, 6);
    EuclideanSpace::new(&a * a.transpose() * 0.5 + id6()).unwrap()
}

fn tensor(seed: u64) -> CurvatureTensor {
    random_curvature_tensor(&mut rng::stream(seed, 0x7e5), 6)
}

fn j_conjugated(j: &ComplexStructure, q: &DMatrix<f64>) -> ComplexStructure {
    ComplexStructure::new(&EuclideanSpace::standard(6), q.transpose() * j.matrix() * q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_structures_are_orthogonal(seed in any::<u64>(), metric_seed in 0u64..1000, orient in any::<bool>()) {
        let space = space_from(metric_seed);
        let j = random_orthogonal_complex_structure(&space, seed, orient);
        let jm = j.matrix();
        let g = space.metric();
        prop_assert!(linalg::max_abs(&(jm * jm + id6())) < 1e-12);
        let scale = linalg::max_abs(g);
        prop_assert!(linalg::max_abs(&(jm.transpose() * g * jm - g)) < 1e-12 * scale.max(1.0));
        prop_assert_eq!(j.compatible_orientation(), orient);
    }

    #[test]
    fn norm_scaling_between_endomorphism_and_lambda2(seed in any::<u64>()) {
        let space = space_from(seed % 1000);
        let mut s = rng::stream(seed, 1);
        let zeta = TwoForm::antisymmetrized(&rng::gaussian_matrix(&mut s, 6, 6));
        let e2 = norm_e(&space, &zeta).powi(2);
        let l2 = norm_lambda2(&space, &zeta).powi(2);
        prop_assert!((e2 - 2.0 * l2).abs() <= 1e-14 * e2 * 8.0);
        prop_assert!((inner_lambda2(&space, &zeta, &zeta) - l2).abs() <= 1e-12 * l2);
    }

    #[test]
    fn random_tensors_satisfy_curvature_symmetries(seed in any::<u64>()) {
        let r = tensor(seed);
        prop_assert!(validate_symmetries(&r).max() < 1e-12);
    }

    #[test]
    fn ricci_forms_have_the_right_symmetry(seed in any::<u64>()) {
        let r = tensor(seed);
        let j = random_orthogonal_complex_structure(&EuclideanSpace::standard(6), seed, true);
        let ric = ricci(&r);
        prop_assert!(linalg::max_abs(&(&ric - ric.transpose())) < 1e-12);
        let p = psi(&r, &j).unwrap();
        prop_assert!(linalg::max_abs(&(p.matrix() + p.matrix().transpose())) < 1e-12);
        let star = ricci_star(&r, &j);
        prop_assert!(linalg::max_abs(&(star - ricci_star_half_trace(&r, &j))) < 1e-12);
        let (a, b) = psi_expressions(&r, &j);
        prop_assert!(linalg::max_abs(&(a - b)) < 1e-9);
    }

    #[test]
    fn contractions_are_frame_independent(seed in any::<u64>()) {
        let r = tensor(seed);
        let std = EuclideanSpace::standard(6);
        let j = random_orthogonal_complex_structure(&std, seed, true);
        let q = rng::haar_orthogonal(&mut rng::stream(seed, 2), 6);
        let r_q = r.in_frame(&q);
        let j_q = j_conjugated(&j, &q);
        let moved = |m: &DMatrix<f64>| q.transpose() * m * &q;
        prop_assert!(linalg::max_abs(&(ricci(&r_q) - moved(&ricci(&r)))) < 1e-12);
        prop_assert!(linalg::max_abs(&(ricci_star(&r_q, &j_q) - moved(&ricci_star(&r, &j)))) < 1e-12);
        let psi_q = psi(&r_q, &j_q).unwrap();
        prop_assert!(linalg::max_abs(&(psi_q.matrix() - moved(psi(&r, &j).unwrap().matrix()))) < 1e-12);
    }

    #[test]
    fn phi_is_the_squared_norm_on_j_rotated_vectors(seed in any::<u64>(), hermitian in any::<bool>()) {
        let j = random_orthogonal_complex_structure(&EuclideanSpace::standard(6), seed, true);
        let kind = if hermitian { NablaJKind::Hermitian } else { NablaJKind::QuasiKahler };
        let mut s = rng::stream(seed, 3);
        let nabla = random_nabla_j(&mut s, &j, kind);
        let form = phi(&j, &nabla).unwrap();
        let x = rng::gaussian_vector(&mut s, 6);
        let lhs = form.eval(&x, &(j.matrix() * &x));
        let rhs = nabla.along(&x).norm_squared();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
    }

    #[test]
    fn sup_norm_bounds_are_ordered(seed in any::<u64>()) {
        let r = tensor(seed);
        let cfg = SupNormConfig { multistarts: 4, iterations: 50, seed, ..Default::default() };
        let b = sup_norm_bounds_with(&r, &cfg);
        prop_assert!(b.lower <= b.upper);
        let round = sup_norm_bounds_with(&kulkarni_nomizu_square(&id6()), &cfg);
        prop_assert!(round.lower <= 1.0 + 1e-12 && 1.0 <= round.upper + 1e-12);
    }

    #[test]
    fn pinching_test_is_scale_invariant(values in prop::collection::vec(0.1f64..2.0, 15), c in 1e-3f64..1e3) {
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let scaled: Vec<f64> = sorted.iter().map(|v| v * c).collect();
        prop_assert_eq!(check_bhl(&sorted).unwrap().pass, check_bhl(&scaled).unwrap().pass);
    }

    #[test]
    fn linear_budget_implies_quadratic_budget(e1 in 0.0f64..0.2, e2 in 0.0f64..0.2) {
        let c = perturbation_budget_check(&PerturbationBudget::new(e1, e2).unwrap());
        prop_assert!(!c.linear_ok || c.quadratic_ok);
    }

    #[test]
    fn hypotheses_force_nondegeneracy(seed in any::<u64>(), t in 0.0f64..1.0) {
        let space = EuclideanSpace::standard(6);
        let j = random_orthogonal_complex_structure(&space, seed, true);
        let mut s = rng::stream(seed, 4);
        let b = rng::gaussian_matrix(&mut s, 6, 6);
        let h = &b * b.transpose();
        let h = (&h - j.matrix() * &h * j.matrix()) * 0.5;
        let zeta0 = j.omega(&space).add(&TwoForm::antisymmetrized(&(h * j.matrix().transpose())));
        let raw = TwoForm::antisymmetrized(&rng::gaussian_matrix(&mut s, 6, 6)).type_11_part(&j);
        let eta = raw.scaled(t / (2.0 * 3f64.sqrt()) / norm_lambda2(&space, &raw));
        let res = check_lemma_ll(&zeta0, &zeta0.add(&eta), &j, &space);
        prop_assert!(res.hypotheses_met);
        prop_assert!(res.nondegenerate);
        prop_assert!(is_positive_form(&space, &zeta0, &j).is_nonnegative());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn certified_tensors_have_no_witness(seed in any::<u64>(), size in 0.0f64..0.16) {
        let space = EuclideanSpace::standard(6);
        let dev = tensor(seed);
        let r = kulkarni_nomizu_square(&id6()).add(&dev.scaled(size / dev.frobenius_norm()));
        prop_assert_eq!(certify_p_sufficient(&r, &space).unwrap().status, PStatus::Certified);
        let cfg = RefuteConfig { multistarts: 8, seed, ..Default::default() };
        let out = refute_p(&r, &space, &cfg).unwrap();
        prop_assert!(out.witness.is_none());
        prop_assert!(out.best_value >= -1e-6);
    }

    #[test]
    fn witnesses_reevaluate(seed in any::<u64>(), metric_seed in 0u64..1000) {
        let space = space_from(metric_seed);
        let r = kulkarni_nomizu_square(space.metric()).scaled(-1.0).add(&tensor(seed).scaled(0.1));
        let cfg = RefuteConfig { multistarts: 8, seed, ..Default::default() };
        let out = refute_p(&r, &space, &cfg).unwrap();
        let w = out.witness.expect("negative curvature is refuted");
        prop_assert!(w.value < 0.0);
        prop_assert!((space.inner(&w.x, &w.x) - 1.0).abs() < 1e-10);
        prop_assert!((w.reevaluate(&r, &space).unwrap() - w.value).abs() < 1e-10);
    }

    #[test]
    fn constant_curvature_operator(k in prop::sample::select(vec![-1.0, 0.0, 0.5, 1.0, 2.0])) {
        let op = curvature_operator(&kulkarni_nomizu_square(&id6()).scaled(k)).unwrap();
        prop_assert!(linalg::max_abs(&(op.matrix() - DMatrix::identity(15, 15) * k)) < 1e-12);
    }

    #[test]
    fn spectra_agree_across_charts(v in prop::collection::vec(-1.0f64..1.0, 7)) {
        let mut p: [f64; 7] = std::array::from_fn(|i| v[i]);
        // keep the point well inside both charts
        p[6] *= 0.1;
        let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(n > 0.1);
        let p = p.map(|x| x / n);
        let a = ChartPoint::from_ambient(&p).unwrap();
        let b = a.in_other_chart().unwrap();
        let fd = FdConfig::new(1e-3, FdScheme::Richardson4th).unwrap();
        let metric = MetricField::conformal_linear([0.1, 0.0, 0.2, 0.0, 0.0, -0.1, 0.05]);
        let sa = curvature_operator(&riemann(&metric, &a, &fd).unwrap()).unwrap();
        let sb = curvature_operator(&riemann(&metric, &b, &fd).unwrap()).unwrap();
        for (x, y) in sa.spectrum().iter().zip(sb.spectrum()) {
            prop_assert!((x - y).abs() < 1e-6, "{} vs {}", x, y);
        }
    }
}

#[test]
fn g_wedge_g_value_is_one_on_orthonormal_planes() {
    let r = kulkarni_nomizu_square(&id6());
    let e = |i: usize| DVector::from_fn(6, |k, _| if k == i { 1.0 } else { 0.0 });
    for i in 0..6 {
        for j in 0..6 {
            if i != j {
                assert!((r.eval(&e(i), &e(j), &e(i), &e(j)) - 1.0).abs() < 1e-15);
            }
        }
    }
}
