//! Property tests for the structural invariants of each module.

use nalgebra::DMatrix;
use proptest::prelude::*;

use kahler_core::bochner::{
    c_pq, c_pq_k, hodge_report, quadratic_lower_bound_check, ring_condition, weighted_sum, weitzenboeck_quadratic,
    BoundForm, HodgeStatus,
};
use kahler_core::characters::{dim_pqk, chi_pq, chi_pq_disjoint_expansion, chi_pq_k, TorusPoint};
use kahler_core::curvature::{decompose, isotropic_curvatures_n2, model_cpn, random_kahler};
use kahler_core::exterior::{component_projector, kahler_form, kahler_power, lefschetz, lefschetz_dual, ring_reduce, wedge};
use kahler_core::lie::{act_on_curvature, act_on_form, hat_norm_sq_form, hat_norm_sq_form_in, u_basis, u_dim};
use kahler_core::{rng, KahlerCurvature, LieElement, PQForm, Spectrum, C64};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn random_form(n: usize, p: usize, q: usize, g: &mut rng::Rng) -> PQForm {
    let len = PQForm::zeros(n, p, q).unwrap().dim();
    PQForm::from_coeffs(n, p, q, rng::complex_normal_vec(g, len)).unwrap()
}

fn random_u(n: usize, g: &mut rng::Rng) -> LieElement {
    LieElement::from_u_coeffs(n, &rng::normal_vec(g, u_dim(n))).unwrap()
}

/// (n, p, q) with p, q ≤ n
fn bidegree(max_n: usize) -> impl Strategy<Value = (usize, usize, usize)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), 0..=n, 0..=n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lefschetz_adjoint((n, p, q) in bidegree(5), seed in any::<u64>()) {
        prop_assume!(p >= 1 && q >= 1);
        let mut g = rng::from_seed(seed);
        let phi = random_form(n, p - 1, q - 1, &mut g);
        let psi = random_form(n, p, q, &mut g);
        let lhs = lefschetz(&phi).unwrap().inner(&psi).unwrap();
        let rhs = phi.inner(&lefschetz_dual(&psi).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
    }

    #[test]
    fn projectors_split_forms((n, p, q) in bidegree(4), seed in any::<u64>()) {
        let mut g = rng::from_seed(seed);
        let phi = random_form(n, p, q, &mut g);
        let mut total = PQForm::zeros(n, p, q).unwrap();
        for k in 0..=p.min(q) {
            let pk = component_projector(n, p, q, k).unwrap();
            let once = pk.apply(&phi).unwrap();
            let twice = pk.apply(&once).unwrap();
            prop_assert!(twice.sub(&once).unwrap().max_abs() < 1e-9 * phi.max_abs().max(1.0));
            for k2 in 0..=p.min(q) {
                if k2 != k {
                    let other = component_projector(n, p, q, k2).unwrap().apply(&once).unwrap();
                    prop_assert!(other.max_abs() < 1e-9 * phi.max_abs().max(1.0));
                }
            }
            total = total.add(&once).unwrap();
        }
        prop_assert!(total.sub(&phi).unwrap().max_abs() < 1e-9 * phi.max_abs().max(1.0));
    }

    #[test]
    fn ring_reduce_idempotent((n, p, _q) in bidegree(5), seed in any::<u64>()) {
        let mut g = rng::from_seed(seed);
        let phi = random_form(n, p, p, &mut g);
        let once = ring_reduce(&phi).unwrap();
        let twice = ring_reduce(&once).unwrap();
        prop_assert!(twice.sub(&once).unwrap().max_abs() < 1e-12 * phi.max_abs().max(1.0));
    }

    #[test]
    fn action_preserves_bidegree_and_leibniz((n, p, q) in bidegree(4), seed in any::<u64>()) {
        let mut g = rng::from_seed(seed);
        let l = random_u(n, &mut g);
        let phi = random_form(n, p, q, &mut g);
        prop_assert_eq!(act_on_form(&l, &phi).unwrap().bidegree(), (p, q));
        // Leibniz against a 1-form or a (1,1)-form, when the product fits
        let (a, b) = if seed % 2 == 0 { (1, 0) } else { (1, 1) };
        prop_assume!(p + a <= n && q + b <= n);
        let psi = random_form(n, a, b, &mut g);
        let lhs = act_on_form(&l, &wedge(&phi, &psi).unwrap()).unwrap();
        let rhs = wedge(&act_on_form(&l, &phi).unwrap(), &psi).unwrap()
            .add(&wedge(&phi, &act_on_form(&l, &psi).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-10 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn hat_norm_basis_invariant((n, p, q) in bidegree(4), seed in any::<u64>()) {
        let mut g = rng::from_seed(seed);
        let phi = random_form(n, p, q, &mut g);
        let d = u_dim(n);
        let qr = DMatrix::from_fn(d, d, |_, _| rng::normal(&mut g)).qr();
        let qm = qr.q();
        let basis: Vec<LieElement> = (0..d)
            .map(|c| LieElement::from_u_coeffs(n, qm.column(c).as_slice()).unwrap())
            .collect();
        prop_assert_eq!(u_basis(n).unwrap().len(), d);
        let a = hat_norm_sq_form(&phi).unwrap();
        let b = hat_norm_sq_form_in(&basis, &phi).unwrap();
        prop_assert!(rel(a, b) < 1e-10);
    }

    #[test]
    fn hat_norm_vanishes_exactly_on_kahler_powers((n, p, q) in bidegree(4), seed in any::<u64>()) {
        let mut g = rng::from_seed(seed);
        for k in 0..=p.min(q) {
            let proj = component_projector(n, p, q, k).unwrap();
            if proj.rank() == 0 {
                continue;
            }
            let phi = proj.combine(&rng::complex_normal_vec(&mut g, proj.rank())).unwrap();
            let hat = hat_norm_sq_form(&phi).unwrap();
            let ring = ring_reduce(&phi).unwrap().norm_sq();
            if p == q && q == k {
                prop_assert!(hat < 1e-20 * phi.norm_sq().max(1.0) && ring < 1e-20 * phi.norm_sq().max(1.0));
            } else {
                prop_assert!(hat > 1e-6 * phi.norm_sq() && ring > 1e-6 * phi.norm_sq());
            }
        }
    }

    #[test]
    fn curvature_norm_conventions(n in 1usize..=5, seed in any::<u64>()) {
        let r = random_kahler(n, seed).unwrap();
        let sq: f64 = r.spectrum().values().iter().map(|l| l * l).sum();
        prop_assert!(rel(r.norm_sq(), sq) < 1e-10);
        if n >= 2 {
            let dec = decompose(&r).unwrap();
            let alt = 4.0 * n as f64 / (n + 2) as f64 * dec.ric0_norm_sq + 4.0 * (n + 1) as f64 * dec.bochner_norm_sq;
            prop_assert!(rel(r.hat_norm_sq(), alt) < 1e-9);
        }
    }

    #[test]
    fn hat_norm_vanishes_iff_constant_holomorphic(n in 1usize..=4, scale in -5.0f64..5.0, seed in any::<u64>()) {
        let cp = model_cpn(n).unwrap().scale(scale);
        prop_assert!(cp.hat_norm_sq() < 1e-10 * scale.abs().max(1.0).powi(2));
        prop_assert!(decompose(&cp).unwrap().r_ring_norm_sq < 1e-10 * scale.abs().max(1.0).powi(2));
        // at n = 1 every tensor is a multiple of ℂP¹, so both sides vanish
        let r = random_kahler(n, seed).unwrap();
        let ring = decompose(&r).unwrap().r_ring_norm_sq;
        if n == 1 {
            prop_assert!(ring < 1e-20 && r.hat_norm_sq() < 1e-20);
        } else {
            prop_assert!(ring > 1e-8);
            prop_assert!(r.hat_norm_sq() > 1e-8);
        }
    }

    #[test]
    fn action_on_curvature_bound(n in 1usize..=4, seed in any::<u64>()) {
        let mut g = rng::from_seed(seed);
        let r = random_kahler(n, rng::derive(seed, 1)).unwrap();
        let l = random_u(n, &mut g);
        let lr = act_on_curvature(&l, &r).unwrap().norm_sq();
        let bound = 8.0 * l.norm_sq() * decompose(&r).unwrap().r_ring_norm_sq;
        prop_assert!(lr <= bound * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn ricci_bounded_by_partial_sum(n in 1usize..=4, seed in any::<u64>()) {
        let mut g = rng::from_seed(seed);
        let r = random_kahler(n, rng::derive(seed, 2)).unwrap();
        let v = nalgebra::DVector::from_vec(rng::normal_vec(&mut g, 2 * n)).normalize();
        let ric = (v.transpose() * r.ricci() * &v)[(0, 0)];
        prop_assert!(ric >= r.spectrum().partial_sum(n) - 1e-9);
    }

    #[test]
    fn weighted_lemma_end_to_end(n in 2usize..=3, s in 0.0f64..0.6, seed in any::<u64>(), pick in any::<u64>()) {
        // R = s·(random) + ℂPⁿ is usually, but not always, inside the condition
        let r = random_kahler(n, seed).unwrap().scale(s).axpy(1.0, &model_cpn(n).unwrap()).unwrap();
        let configs: Vec<(usize, usize, usize)> = (0..=n)
            .flat_map(|p| (0..=n).flat_map(move |q| (0..=p.min(q)).map(move |k| (p, q, k))))
            .filter(|&(p, q, k)| p + q > 2 * k && dim_pqk(n, p, q, k) > 0)
            .collect();
        let (p, q, k) = configs[(pick % configs.len() as u64) as usize];
        let out = quadratic_lower_bound_check(&r, p, q, k, 0.0, BoundForm::Component, 20, seed).unwrap();
        prop_assert!(out.holds, "({p},{q},{k}) slack {}", out.min_slack);
        let c = c_pq_k(n, p, q, k).unwrap();
        if weighted_sum(&r.spectrum(), c, 0.0, true).unwrap().satisfied {
            let proj = component_projector(n, p, q, k).unwrap();
            let mut g = rng::from_seed(seed ^ 1);
            for _ in 0..10 {
                let phi = proj.combine(&rng::complex_normal_vec(&mut g, proj.rank())).unwrap();
                prop_assert!(weitzenboeck_quadratic(&r, &phi).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn c_pq_k_monotone(n in 1usize..=8, p in 0usize..=8, q in 0usize..=8) {
        prop_assume!(p <= n && q <= n && p + q >= 1);
        let mut prev = c_pq(n, p, q).unwrap();
        for k in 0..=p.min(q) {
            if let Some(c) = c_pq_k(n, p, q, k) {
                prop_assert!(c >= prev - 1e-12);
                prev = c;
            }
        }
        let top = (n + 1 - p.abs_diff(q)) as f64;
        let m = p.min(q);
        if p != q {
            prop_assert!((c_pq_k(n, p, q, m).unwrap() - top).abs() < 1e-12);
        }
        prop_assert!(prev <= top + 1e-12);
    }

    #[test]
    fn hodge_table_symmetries(n in 1usize..=4, seed in any::<u64>(), shift in -3.0f64..3.0) {
        let mut g = rng::from_seed(seed);
        let sp = Spectrum::new(rng::normal_vec(&mut g, n * n).into_iter().map(|x| x + shift).collect());
        let rep = hodge_report(&sp, n, None, None).unwrap();
        prop_assert_eq!(rep.status(0, 0), HodgeStatus::EqualsOne);
        for p in 0..=n {
            for q in 0..=n {
                prop_assert_eq!(rep.status(p, q), rep.status(q, p));
                prop_assert_eq!(rep.status(p, q), rep.status(n - p, n - q));
            }
        }
    }

    #[test]
    fn characters_telescope_and_expand(n in 1usize..=5, p in 0usize..=5, q in 0usize..=5, seed in any::<u64>()) {
        prop_assume!(p <= n && q <= n);
        let eps = TorusPoint::random(n, seed).unwrap();
        let total: C64 = (0..=p.min(q)).map(|k| chi_pq_k(&eps, p as i64, q as i64, k as i64)).sum();
        let chi = chi_pq(&eps, p as i64, q as i64);
        prop_assert!((total - chi).norm() <= 1e-12 * chi.norm().max(1.0));
        let expanded = chi_pq_disjoint_expansion(&eps, p, q);
        prop_assert!((expanded - chi).norm() <= 1e-8 * chi.norm().max(1.0));
    }

    #[test]
    fn kahler_power_is_repeated_wedge(n in 1usize..=5) {
        let w = kahler_form(n).unwrap();
        let mut acc = PQForm::one(n).unwrap();
        for k in 0..=n {
            prop_assert!(kahler_power(n, k).unwrap().sub(&acc).unwrap().max_abs() < 1e-12);
            if k < n {
                acc = wedge(&acc, &w).unwrap();
            }
        }
    }
}

/// λ₁ + λ₂ > 0 forces all four isotropic combinations at n = 2 to be positive.
#[test]
fn two_positive_implies_positive_isotropic() {
    let cp = model_cpn(2).unwrap();
    let mut g = rng::from_seed(77);
    let mut tested = 0;
    for i in 0..10_000u64 {
        let s = 0.05 + 1.5 * (i as f64 / 10_000.0);
        let r: KahlerCurvature = random_kahler(2, i).unwrap().scale(s * rng::normal(&mut g).abs()).axpy(1.0, &cp).unwrap();
        if r.spectrum().partial_sum(2) <= 0.0 {
            continue;
        }
        tested += 1;
        let iso = isotropic_curvatures_n2(&r).unwrap();
        for c in iso.combinations {
            assert!(c > 0.0, "sample {i}: {:?} with spectrum {:?}", iso.combinations, r.spectrum().values());
        }
    }
    assert!(tested > 1000, "only {tested} samples met the condition");
}

/// Spectra satisfying λ₁ + λ₂ + (1 − 2/n)λ₃ > 0 produce the ℂPⁿ diamond.
#[test]
fn ring_condition_closure() {
    let mut g = rng::from_seed(5);
    for i in 0..10_000 {
        let n = 2 + i % 3;
        let raw = Spectrum::new(rng::normal_vec(&mut g, n * n));
        let margin = ring_condition(&raw, n).unwrap().margin;
        let weight = 3.0 - 2.0 / n as f64;
        let push = 1e-6 + rng::normal(&mut g).abs();
        let sp = raw.shifted((push - margin).max(0.0) / weight);
        assert!(ring_condition(&sp, n).unwrap().satisfied);
        let rep = hodge_report(&sp, n, None, None).unwrap();
        assert!(rep.is_projective_space_diamond(), "n={n} spectrum {:?}", sp.values());
    }
}
