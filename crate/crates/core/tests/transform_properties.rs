use confluent_core::confluent::{
    build_w, classify, scan_nu, Case, ConfluentTransform, SpectralEffect, TransformConfig, Verdict,
};
use confluent_core::numgrid::{inner_product, norm_squared, second_derivative, Grid, SampledFunction, Stencil};
use confluent_core::potentials::{Potential, SeedSolution, Side};
use confluent_core::spectral::{compare_spectra, residual, TridiagonalOperator};
use proptest::prelude::*;

fn osc_grid() -> Grid {
    Grid::new(-10.0, 10.0, 2001).unwrap()
}

fn fig1() -> ConfluentTransform {
    let seed = Potential::HarmonicOscillator.bound_state(3, osc_grid()).unwrap();
    let cfg = TransformConfig::from_nu(&seed, -1.25, 1000).unwrap();
    ConfluentTransform::new(seed, cfg).unwrap()
}

fn fig2() -> ConfluentTransform {
    let seed = Potential::HarmonicOscillator.seed_solution(8.0, Side::Left, osc_grid()).unwrap();
    ConfluentTransform::new(seed, TransformConfig::new(-5.0, 1000)).unwrap()
}

fn pt_ground(g: Grid) -> SeedSolution {
    Potential::poschl_teller(1.0).unwrap().bound_state(0, g).unwrap()
}

fn regular_examples() -> Vec<ConfluentTransform> {
    let g = Grid::new(-12.0, 12.0, 4801).unwrap();
    let free = Potential::FreeParticle.seed_solution(-1.0, Side::Right, g).unwrap();
    let pt = pt_ground(Grid::new(-15.0, 15.0, 3001).unwrap());
    let bargmann = Potential::poschl_teller(1.0)
        .unwrap()
        .seed_solution(-4.0, Side::Left, Grid::new(-15.0, 15.0, 6001).unwrap())
        .unwrap();
    let psi1 = Potential::HarmonicOscillator.bound_state(1, osc_grid()).unwrap();
    vec![
        ConfluentTransform::new(free.clone(), TransformConfig::from_nu(&free, 1.0, 2400).unwrap()).unwrap(),
        ConfluentTransform::new(pt.clone(), TransformConfig::from_nu(&pt, 0.5, 1500).unwrap()).unwrap(),
        ConfluentTransform::new(bargmann.clone(), TransformConfig::from_nu(&bargmann, 2.0, 3000).unwrap()).unwrap(),
        ConfluentTransform::new(psi1.clone(), TransformConfig::from_nu(&psi1, 0.3, 1000).unwrap()).unwrap(),
        fig1(),
        fig2(),
    ]
}

#[test]
fn w_is_monotone_decreasing() {
    for t in regular_examples() {
        let w = t.w().values();
        let u = t.seed().u().values();
        for i in 0..w.len() - 1 {
            assert!(w[i + 1] <= w[i], "x = {}", t.grid().x(i));
            // strict wherever the step h·u² is resolvable against |w|
            let step = 0.5 * t.grid().h() * (u[i] * u[i] + u[i + 1] * u[i + 1]);
            if step > 8.0 * f64::EPSILON * w[i].abs() {
                assert!(w[i + 1] < w[i], "strict at x = {}", t.grid().x(i));
            }
        }
    }
}

#[test]
fn case_one_limits() {
    let t = fig1();
    let w = t.w().values();
    assert!((w[0] - (t.nu() + 1.0)).abs() < 1e-9);
    assert!((w[w.len() - 1] - t.nu()).abs() < 1e-9);
}

#[test]
fn partner_is_invariant_under_seed_scaling() {
    for t in regular_examples() {
        let seed = t.seed().scaled(2.0).unwrap();
        let cfg = TransformConfig::new(4.0 * t.config().w0, t.config().x0_index);
        let scaled = ConfluentTransform::new(seed, cfg).unwrap();
        let worst = t
            .partner()
            .values()
            .iter()
            .zip(scaled.partner().values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "{worst:e}");
    }
}

#[test]
fn partner_agrees_with_twice_eta_derivative() {
    for t in regular_examples() {
        let analytic = t
            .partner()
            .values()
            .iter()
            .zip(t.seed().potential().values())
            .zip(t.intertwiner().eta_prime.values())
            .map(|((p, v), e)| (p - v - 2.0 * e).abs())
            .fold(0.0, f64::max);
        assert!(analytic < 1e-10, "{analytic:e}");

        // independent route: differentiate η numerically (sixth order)
        let eta = t.eta().values();
        let h = t.grid().h();
        let n = eta.len();
        let deviation = |i: usize| {
            let d = (-eta[i - 3] + 9.0 * eta[i - 2] - 45.0 * eta[i - 1] + 45.0 * eta[i + 1] - 9.0 * eta[i + 2]
                + eta[i + 3])
                / (60.0 * h);
            (t.partner().values()[i] - t.seed().potential().values()[i] - 2.0 * d).abs()
        };
        let worst = (3..n - 3).map(deviation).fold(0.0, f64::max);
        assert!(worst < 1e-6, "eps = {}: {worst:e}", t.epsilon());
    }
}

#[test]
fn gamma_is_finite_for_ground_state_seed() {
    let seed = Potential::HarmonicOscillator.bound_state(0, osc_grid()).unwrap();
    let t = ConfluentTransform::new(seed.clone(), TransformConfig::from_nu(&seed, 0.7, 1000).unwrap()).unwrap();
    assert!(t.gamma_fn().values().iter().all(|g| g.is_finite()));
}

fn hamiltonian(v: &SampledFunction, psi: &SampledFunction) -> SampledFunction {
    let d2 = second_derivative(psi, Stencil::Second);
    let vals = d2
        .values()
        .iter()
        .zip(v.values())
        .zip(psi.values())
        .map(|((d, vi), p)| -d + vi * p)
        .collect();
    SampledFunction::from_values(*psi.grid(), vals).unwrap()
}

fn intertwining_defect(n: usize) -> f64 {
    let g = Grid::new(-10.0, 10.0, n).unwrap();
    let seed = Potential::HarmonicOscillator.bound_state(3, g).unwrap();
    let t = ConfluentTransform::new(seed.clone(), TransformConfig::from_nu(&seed, -1.25, n / 2).unwrap()).unwrap();
    let psi = SampledFunction::from_fn(g, |x| (-(x - 0.5) * (x - 0.5)).exp() * (1.0 + 0.3 * x)).unwrap();
    let apply = |f: &SampledFunction| t.intertwiner().apply(f, Stencil::Second).unwrap();
    let lhs = hamiltonian(t.partner(), &apply(&psi));
    let rhs = apply(&hamiltonian(seed.potential(), &psi));
    let interior = |f: &SampledFunction| {
        SampledFunction::from_fn(g, |_| 0.0)
            .unwrap()
            .map(|x, _| if x.abs() < 7.0 { f.value_at(x).unwrap() } else { 0.0 })
            .unwrap()
    };
    let diff = lhs.map(|x, y| y - rhs.value_at(x).unwrap()).unwrap();
    norm_squared(&interior(&diff)).sqrt()
}

#[test]
fn intertwining_defect_is_second_order() {
    let coarse = intertwining_defect(1001);
    let fine = intertwining_defect(2001);
    let finer = intertwining_defect(4001);
    let order = (coarse / fine).log2();
    assert!(order > 1.8, "observed order {order}");
    assert!(finer < fine && fine < coarse);
}

#[test]
fn seed_is_annihilated() {
    let t = fig1();
    let a_u = t.apply_a(t.seed().u()).unwrap();
    let ratio = (norm_squared(&a_u) / norm_squared(t.seed().u())).sqrt();
    assert!(ratio < 1e-5, "{ratio:e}");
}

#[test]
fn created_state_is_normalized_eigenstate() {
    let t = fig2();
    let extra = t.created_or_missing_state().unwrap();
    assert_eq!(extra.effect, SpectralEffect::Created(8.0));
    assert!((extra.n0.unwrap() - t.nu().sqrt()).abs() < 1e-15);
    let state = extra.state.unwrap();
    assert!((norm_squared(&state) - 1.0).abs() < 1e-6);
    assert!(residual(t.partner(), &state, 8.0).unwrap() < 1e-4);
}

#[test]
fn missing_state_of_case_one() {
    let t = fig1();
    let extra = t.created_or_missing_state().unwrap();
    assert_eq!(extra.effect, SpectralEffect::Isospectral);
    assert!((extra.n0.unwrap() - (5.0f64 / 16.0).sqrt()).abs() < 1e-9);
    let state = extra.state.unwrap();
    assert!((norm_squared(&state) - 1.0).abs() < 1e-6);
    assert!(residual(t.partner(), &state, 7.0).unwrap() < 1e-4);
}

#[test]
fn transformed_states_are_orthonormal() {
    let t = fig1();
    let g = *t.grid();
    let mut states = Vec::new();
    for n in [0usize, 1, 2, 4, 5] {
        let psi = Potential::HarmonicOscillator.bound_state(n, g).unwrap();
        let e = 2.0 * n as f64 + 1.0;
        let s = t.partner_eigenstate(psi.u(), e).unwrap();
        assert!(residual(t.partner(), &s, e).unwrap() < 1e-4, "n = {n}");
        states.push(s);
    }
    states.push(t.created_or_missing_state().unwrap().state.unwrap());
    for i in 0..states.len() {
        assert!((norm_squared(&states[i]) - 1.0).abs() < 1e-6);
        for j in 0..i {
            let overlap = inner_product(&states[i], &states[j]).unwrap().abs();
            assert!(overlap < 1e-5, "<{i}|{j}> = {overlap:e}");
        }
    }
}

#[test]
fn boundary_state_is_not_normalizable() {
    let mass = |half_width: f64| {
        let n = (2.0 * half_width / 0.01) as usize + 1;
        let g = Grid::new(-half_width, half_width, n | 1).unwrap();
        let seed = pt_ground(g);
        let cfg = TransformConfig::from_nu(&seed, 0.0, n / 2).unwrap();
        let t = ConfluentTransform::new(seed, cfg).unwrap();
        let extra = t.created_or_missing_state().unwrap();
        assert_eq!(extra.effect, SpectralEffect::Deleted(-1.0));
        assert!(extra.state.is_none());
        norm_squared(&t.u_over_w().unwrap())
    };
    let narrow = mass(10.0);
    let wide = mass(12.0);
    assert!(wide > 1.1 * narrow, "{narrow} -> {wide}");
}

#[test]
fn spectra_follow_predicted_effect() {
    let g = Grid::new(-12.0, 12.0, 2401).unwrap();
    let osc = Potential::HarmonicOscillator;
    let base = osc.known_spectrum(8).unwrap();
    let mut transforms = Vec::new();
    for (m, nu) in [(0usize, 0.5), (2, -2.0), (3, -1.25), (4, 3.0)] {
        let seed = osc.bound_state(m, g).unwrap();
        transforms.push(ConfluentTransform::new(seed.clone(), TransformConfig::from_nu(&seed, nu, 1200).unwrap()).unwrap());
    }
    for (eps, side, nu) in [(8.0, Side::Left, 0.7), (-2.0, Side::Right, 1.0), (4.0, Side::Right, 0.0)] {
        let seed = osc.seed_solution(eps, side, g).unwrap();
        transforms.push(ConfluentTransform::new(seed.clone(), TransformConfig::from_nu(&seed, nu, 1200).unwrap()).unwrap());
    }
    for t in transforms {
        let expected: Vec<f64> = t.spectral_effect().apply(&base[..6]);
        let computed = TridiagonalOperator::discretize(t.partner())
            .unwrap()
            .lowest_eigenvalues(expected.len() + 2)
            .unwrap();
        let report = compare_spectra(&expected, &computed, 5e-3, None).unwrap();
        assert!(report.pass, "eps={} nu={} {:?}", t.epsilon(), t.nu(), report);
    }
}

#[test]
fn scan_patterns() {
    let g = Grid::new(-10.0, 10.0, 2001).unwrap();
    let pt = pt_ground(Grid::new(-15.0, 15.0, 3001).unwrap());
    let osc = Potential::HarmonicOscillator.bound_state(2, g).unwrap();
    use Verdict::*;
    for (seed, i0) in [(pt, 1500), (osc, 1000)] {
        let rows = scan_nu(&seed, i0, &[-2.0, -1.0, -0.5, 0.0, 0.5]).unwrap();
        let got: Vec<Verdict> = rows.iter().map(|r| r.verdict).collect();
        assert_eq!(got, vec![Regular, Boundary, Singular, Boundary, Regular]);
        assert!(rows.iter().all(|r| r.case == Case::I));
    }
    for (pot, eps, side) in [
        (Potential::HarmonicOscillator, 8.0, Side::Left),
        (Potential::HarmonicOscillator, 8.0, Side::Right),
        (Potential::poschl_teller(1.0).unwrap(), -0.25, Side::Right),
    ] {
        let g = Grid::new(-15.0, 15.0, 3001).unwrap();
        let seed = pot.seed_solution(eps, side, g).unwrap();
        let rows = scan_nu(&seed, 1500, &[-0.5, 0.0, 1.0]).unwrap();
        let got: Vec<Verdict> = rows.iter().map(|r| r.verdict).collect();
        assert_eq!(got, vec![Singular, Boundary, Regular]);
    }
}

#[test]
fn frontier_tolerance_is_sharp() {
    let seed = pt_ground(Grid::new(-15.0, 15.0, 3001).unwrap());
    let verdict = |nu: f64| {
        let cfg = TransformConfig::from_nu(&seed, nu, 1500).unwrap();
        classify(&seed, &cfg).unwrap().verdict
    };
    assert_eq!(verdict(5e-10), Verdict::Boundary);
    assert_eq!(verdict(-5e-10), Verdict::Boundary);
    assert_eq!(verdict(1e-8), Verdict::Regular);
    assert_eq!(verdict(-1e-8), Verdict::Singular);
    assert_eq!(verdict(-1.0 - 1e-8), Verdict::Regular);
    assert_eq!(verdict(-1.0 + 1e-8), Verdict::Singular);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn case_one_verdict_matches_domain(nu in -3.0f64..2.0) {
        let seed = pt_ground(Grid::new(-15.0, 15.0, 601).unwrap());
        let cfg = TransformConfig::from_nu(&seed, nu, 300).unwrap();
        let cls = classify(&seed, &cfg).unwrap();
        let n = seed.total_norm().unwrap();
        prop_assume!((nu.abs() > 1e-6) && ((nu + n).abs() > 1e-6));
        let inside = nu < 0.0 && nu > -n;
        prop_assert_eq!(cls.verdict == Verdict::Singular, inside);
        if !inside {
            let w = build_w(&seed, &cfg).unwrap();
            let first = w.values()[0].signum();
            prop_assert!(w.values().iter().all(|v| v.signum() == first));
        }
    }

    #[test]
    fn from_nu_roundtrip(nu in 0.01f64..10.0, left in any::<bool>()) {
        let g = Grid::new(-12.0, 12.0, 1201).unwrap();
        let side = if left { Side::Left } else { Side::Right };
        let seed = Potential::FreeParticle.seed_solution(-1.0, side, g).unwrap();
        let cfg = TransformConfig::from_nu(&seed, nu, 700).unwrap();
        let cls = classify(&seed, &cfg).unwrap();
        prop_assert!((cls.nu - nu).abs() < 1e-12 * nu.max(1.0));
        prop_assert_eq!(cls.verdict, Verdict::Regular);
    }
}
