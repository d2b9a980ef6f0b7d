//! Special functions on real arguments: Gamma, physicists' Hermite
//! polynomials, Kummer's ₁F₁, Tricomi's U (large argument) and ₂F₂.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Truncation policy for hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 500,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || max_terms == 0 {
            return Err(Error::InvalidInput(format!(
                "series control needs rel_tol > 0 and max_terms >= 1 (got {rel_tol}, {max_terms})"
            )));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x`, with reflection below ½.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole(x));
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        return Ok(PI / (s * gamma(1.0 - x)?));
    }
    if x == x.round() && x <= 21.0 {
        // exact factorials
        return Ok((1..x as u64).fold(1.0, |acc, k| acc * k as f64));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // split the power to stay finite up to x ≈ 171
    let p = t.powf(0.5 * (x + 0.5));
    Ok((2.0 * PI).sqrt() * p * (-t).exp() * p * acc)
}

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence.
pub fn hermite(n: i64, x: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::NegativeDegree(n));
    }
    Ok(hermite_poly(n as usize, x))
}

pub(crate) fn hermite_poly(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z).
///
/// Negative arguments go through `₁F₁(a;b;z) = e^z ₁F₁(b−a;b;−z)` so the
/// summed series never alternates on account of `z`.
pub fn kummer_1f1(a: f64, b: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(Error::HypergeometricPole(b));
    }
    if z < 0.0 {
        return Ok(z.exp() * kummer_series(b - a, b, -z, ctl)?);
    }
    kummer_series(a, b, z, ctl)
}

/// Plain Maclaurin series of ₁F₁ without any transformation.
pub fn kummer_series(a: f64, b: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(Error::HypergeometricPole(b));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) / ((b + nf) * (nf + 1.0)) * z;
        term *= ratio;
        sum += term;
        if term == 0.0 || (ratio.abs() < 1.0 && term.abs() <= ctl.rel_tol * sum.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence(ctl.max_terms))
}

/// Asymptotic expansion of Tricomi's `U(a, b, z)` for large positive `z`,
///
/// ```text
/// U(a,b,z) ~ z^{-a} Σ (a)_n (a−b+1)_n / n! · (−z)^{−n}
/// ```
///
/// summed up to the smallest term. Returns the value together with the
/// relative size of the first omitted term.
pub fn tricomi_u_asymptotic(a: f64, b: f64, z: f64) -> (f64, f64) {
    let c = a - b + 1.0;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut omitted = f64::INFINITY;
    for n in 0..200 {
        let nf = n as f64;
        let next = term * (a + nf) * (c + nf) / ((nf + 1.0) * -z);
        if next == 0.0 {
            omitted = 0.0;
            break;
        }
        if next.abs() >= term.abs() && n > 0 {
            omitted = next.abs();
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            omitted = term.abs();
            break;
        }
    }
    (z.powf(-a) * sum, omitted / sum.abs())
}

/// Generalized hypergeometric ₂F₂(a₁, a₂; b₁, b₂; z).
///
/// Summed with double-double arithmetic; the function is entire, but for
/// large negative `z` the terms grow like `e^{|z|}` before they cancel, so
/// plain doubles lose every digit by `z ≈ −36`.
pub fn hyper_2f2(a1: f64, a2: f64, b1: f64, b2: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    for b in [b1, b2] {
        if is_nonpositive_integer(b) {
            return Err(Error::HypergeometricPole(b));
        }
    }
    let zd = Dd::from(z);
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        let num = Dd::sum(a1, nf) * Dd::sum(a2, nf) * zd;
        let den = Dd::sum(b1, nf) * Dd::sum(b2, nf) * Dd::from(nf + 1.0);
        let ratio = num / den;
        term = term * ratio;
        sum = sum + term;
        if term.hi == 0.0 || (ratio.hi.abs() < 1.0 && term.hi.abs() <= ctl.rel_tol * sum.hi.abs()) {
            return Ok(sum.hi + sum.lo);
        }
    }
    Err(Error::NoConvergence(ctl.max_terms))
}

/// Unevaluated sum `hi + lo` carrying roughly 32 significant digits.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Self { hi, lo: 0.0 }
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

impl Dd {
    /// Exact sum of two doubles.
    fn sum(a: f64, b: f64) -> Self {
        let (s, e) = two_sum(a, b);
        Self { hi: s, lo: e }
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_two_sum(s, e + self.lo + o.lo)
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + Dd {
            hi: -o.hi,
            lo: -o.lo,
        }
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2) + Dd::from(q3)
    }
}
