//! Partner potentials and key functions checked against closed forms.

use confluent_core::confluent::{build_w, ConfluentTransform, TransformConfig};
use confluent_core::numgrid::Grid;
use confluent_core::potentials::{Potential, Side};
use confluent_core::specfun::{gamma, hyper_2f2, SeriesControl};

fn max_deviation(values: &[f64], grid: &Grid, exact: impl Fn(f64) -> f64) -> f64 {
    grid.points()
        .zip(values)
        .map(|(x, v)| (v - exact(x)).abs())
        .fold(0.0, f64::max)
}

fn pt_well(k: f64, shift: f64) -> impl Fn(f64) -> f64 {
    move |x| -2.0 * k * k / (k * (x - shift)).cosh().powi(2)
}

#[test]
fn free_particle_gives_shifted_well() {
    for k in [0.5, 1.0, 2.0] {
        let g = Grid::new(-12.0 / k, 12.0 / k, 4801).unwrap();
        for nu in [0.25, 1.0, 4.0] {
            for (side, s) in [(Side::Right, -1.0), (Side::Left, 1.0)] {
                let seed = Potential::FreeParticle.seed_solution(-k * k, side, g).unwrap();
                let cfg = TransformConfig::from_nu(&seed, nu, 2400).unwrap();
                let t = ConfluentTransform::new(seed, cfg).unwrap();
                let x1 = nu.ln() / (2.0 * s * k);
                let dev = max_deviation(t.partner().values(), &g, pt_well(k, x1));
                assert!(dev < 1e-8, "k={k} nu={nu} {side:?}: {dev:e}");
            }
        }
    }
}

#[test]
fn poschl_teller_ground_state_shift() {
    for k0 in [1.0, 1.5] {
        let g = Grid::new(-15.0 / k0, 15.0 / k0, 3001).unwrap();
        let seed = Potential::poschl_teller(k0).unwrap().bound_state(0, g).unwrap();
        for nu in [0.5, 2.0, -3.0] {
            let cfg = TransformConfig::from_nu(&seed, nu, 1500).unwrap();
            let w = build_w(&seed, &cfg).unwrap();
            let w_dev = max_deviation(w.values(), &g, |x| nu + 0.5 - 0.5 * (k0 * x).tanh());
            assert!(w_dev < 1e-9, "w, nu={nu}: {w_dev:e}");

            let t = ConfluentTransform::new(seed.clone(), cfg).unwrap();
            let x1 = (1.0 / (1.0 + 2.0 * nu)).atanh() / k0;
            let dev = max_deviation(t.partner().values(), &g, pt_well(k0, x1));
            assert!(dev < 1e-8, "k0={k0} nu={nu}: {dev:e}");
        }
    }
}

/// Two-soliton form written with `csch²/coth²` cleared, so it stays finite
/// at `x = x₂`.
fn bargmann(k1: f64, k2: f64, x1: f64, x2: f64) -> impl Fn(f64) -> f64 {
    move |x| {
        let (a, b) = (k1 * (x - x1), k2 * (x - x2));
        let num = k1 * k1 * b.sinh().powi(2) / a.cosh().powi(2) + k2 * k2;
        let den = k1 * a.tanh() * b.sinh() - k2 * b.cosh();
        -2.0 * (k2 * k2 - k1 * k1) * num / (den * den)
    }
}

fn bargmann_parameters(k0: f64, k: f64, nu: f64, s: f64) -> (f64, f64, f64, f64) {
    if k > k0 {
        let x2 = (nu / (k * k - k0 * k0)).ln() / (2.0 * s * k);
        let x1 = ((k + k0) / (k - k0)).ln() / (2.0 * s * k0);
        (k0, k, x1, x2)
    } else {
        let x1 = (nu / (k0 * k0 - k * k)).ln() / (2.0 * s * k);
        let x2 = ((k + k0) / (k0 - k)).ln() / (2.0 * s * k0);
        (k, k0, x1, x2)
    }
}

#[test]
fn poschl_teller_non_eigen_seed_gives_two_soliton() {
    let g = Grid::new(-20.0, 20.0, 8001).unwrap();
    for (k0, k) in [(1.0, 2.0), (2.0, 1.0)] {
        let pt = Potential::poschl_teller(k0).unwrap();
        for nu in [0.5, 3.0] {
            for (side, s) in [(Side::Left, 1.0), (Side::Right, -1.0)] {
                let seed = pt.seed_solution(-k * k, side, g).unwrap();
                let cfg = TransformConfig::from_nu(&seed, nu, 4000).unwrap();
                let t = ConfluentTransform::new(seed, cfg).unwrap();
                let (k1, k2, x1, x2) = bargmann_parameters(k0, k, nu, s);
                let dev = max_deviation(t.partner().values(), &g, bargmann(k1, k2, x1, x2));
                assert!(dev < 1e-7, "k0={k0} k={k} nu={nu} {side:?}: {dev:e}");
            }
        }
    }
}

/// `w` for the normalized oscillator eigenstate `m` with `x₀ = 0`, as a
/// finite sum of ₂F₂ terms.
pub fn oscillator_w(m: usize, nu: f64, x: f64) -> f64 {
    let delta = (m % 2) as f64;
    let m0 = (m - m % 2) / 2;
    let m1 = (m as f64 + delta + 1.0) / 2.0;
    let ctl = SeriesControl::default();
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    let mut sum = 0.0;
    for s in 0..=m0 {
        let sf = s as f64;
        let sign = if (m0 + s) % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign * gamma(m1).unwrap() * (2.0 * x).powf(2.0 * m1 - 2.0 * sf - 1.0)
            / (2f64.powf(delta + 1.0)
                * std::f64::consts::PI.sqrt()
                * (m1 - sf)
                * gamma(delta + 0.5).unwrap()
                * fact(m - 2 * s)
                * fact(s));
        let f = hyper_2f2(m1, m1 - sf, delta + 0.5, m1 + 1.0 - sf, -x * x, ctl).unwrap();
        sum += coeff * f;
    }
    nu + 0.5 - x * sum
}

#[test]
fn oscillator_w_matches_hypergeometric_sum() {
    let g = Grid::new(-10.0, 10.0, 2001).unwrap();
    for m in 0..4 {
        let seed = Potential::HarmonicOscillator.bound_state(m, g).unwrap();
        for nu in [0.4, -1.25] {
            let cfg = TransformConfig::from_nu(&seed, nu, 1000).unwrap();
            let w = build_w(&seed, &cfg).unwrap();
            let dev = g
                .points()
                .zip(w.values())
                .filter(|(x, _)| x.abs() <= 6.0 + 1e-9)
                .map(|(x, v)| (v - oscillator_w(m, nu, x)).abs())
                .fold(0.0, f64::max);
            assert!(dev < 1e-7, "m={m} nu={nu}: {dev:e}");
        }
    }
}

#[test]
fn hypergeometric_sum_reduces_to_error_function() {
    // m = 0: w = ν + (1 − erf x)/2; compare the derivative against −ψ₀²
    let h = 1e-4;
    for x in [-2.0, -0.3, 0.7, 3.1] {
        let d = (oscillator_w(0, 0.0, x + h) - oscillator_w(0, 0.0, x - h)) / (2.0 * h);
        let exact = -(-x * x).exp() / std::f64::consts::PI.sqrt();
        assert!((d - exact).abs() < 1e-7, "x={x}: {d} vs {exact}");
    }
}
