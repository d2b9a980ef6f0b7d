//! Base potentials, their analytic bound states and the asymptotically
//! vanishing seed solutions that drive a confluent transformation.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use crate::numgrid::{cumulative_integral_hermite, derivative, norm_squared, Grid, SampledFunction, Stencil};
use crate::specfun::{gamma, hermite_poly, kummer_1f1, tricomi_u_asymptotic, SeriesControl};
use crate::{Error, Result};

/// Two energies closer than this are the same level.
pub const ENERGY_COLLISION_TOL: f64 = 1e-9;

/// A decaying edge must satisfy `|u(edge)| <= BOUNDARY_TOL · max|u|`.
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Maximum tolerated deviation of `∫ψ²` from one on the working grid.
pub const NORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub enum Potential {
    /// `V = 0`.
    FreeParticle,
    /// One-soliton well `V = −2k₀² sech²(k₀x)`, single level at `−k₀²`.
    PoschlTeller { k0: f64 },
    /// `V = x²`, levels `2n + 1`.
    HarmonicOscillator,
    /// Samples on a uniform grid; transforms must run on that grid.
    Custom(SampledFunction),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedTag {
    /// Normalized eigenfunction `ψ_m`.
    BoundState(usize),
    /// Non-normalizable, vanishing as `x → +∞`.
    RightVanishing,
    /// Non-normalizable, vanishing as `x → −∞`.
    LeftVanishing,
}

impl SeedTag {
    fn decays_left(self) -> bool {
        matches!(self, SeedTag::BoundState(_) | SeedTag::LeftVanishing)
    }

    fn decays_right(self) -> bool {
        matches!(self, SeedTag::BoundState(_) | SeedTag::RightVanishing)
    }
}

/// Which branch of a `±` seed formula produced the samples. `Upper` is the
/// `e^{+kx}` (or `+2x` for the oscillator) branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedSign {
    Upper,
    Lower,
}

impl Potential {
    pub fn poschl_teller(k0: f64) -> Result<Self> {
        if !(k0 > 0.0 && k0.is_finite()) {
            return Err(Error::InvalidInput(format!("Pöschl-Teller k0 = {k0} must be positive")));
        }
        Ok(Potential::PoschlTeller { k0 })
    }

    pub fn custom(samples: SampledFunction) -> Self {
        Potential::Custom(samples)
    }

    /// Reads `x V(x)` pairs, whitespace or comma separated, `#` comments
    /// allowed. The abscissae must be strictly increasing and uniform, and
    /// the row count odd.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_two_column(&text)
    }

    pub fn parse_two_column(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let parse_err = |reason: String| Error::Parse {
                line: lineno + 1,
                reason,
            };
            if cols.len() != 2 {
                return Err(parse_err(format!("expected 2 columns, found {}", cols.len())));
            }
            let x: f64 = cols[0].parse().map_err(|e| parse_err(format!("{e}: {:?}", cols[0])))?;
            let v: f64 = cols[1].parse().map_err(|e| parse_err(format!("{e}: {:?}", cols[1])))?;
            if !(x.is_finite() && v.is_finite()) {
                return Err(parse_err("non-finite value".into()));
            }
            if let Some(&prev) = xs.last() {
                if x <= prev {
                    return Err(parse_err(format!("x = {x} not increasing")));
                }
            }
            xs.push(x);
            vs.push(v);
        }
        let n = xs.len();
        if n < 3 {
            return Err(Error::Parse {
                line: 0,
                reason: format!("need at least 3 samples, found {n}"),
            });
        }
        let grid = Grid::new(xs[0], xs[n - 1], n)?;
        for (i, &x) in xs.iter().enumerate() {
            if (x - grid.x(i)).abs() > 1e-6 * grid.h() {
                return Err(Error::Parse {
                    line: 0,
                    reason: format!("non-uniform spacing at sample {i} (x = {x})"),
                });
            }
        }
        Ok(Potential::Custom(SampledFunction::from_values(grid, vs)?))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Potential::FreeParticle => "free",
            Potential::PoschlTeller { .. } => "poschl-teller",
            Potential::HarmonicOscillator => "oscillator",
            Potential::Custom(_) => "custom",
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Potential::FreeParticle => 0.0,
            Potential::PoschlTeller { k0 } => -2.0 * k0 * k0 / (k0 * x).cosh().powi(2),
            Potential::HarmonicOscillator => x * x,
            Potential::Custom(s) => s.value_at(x)?,
        })
    }

    /// `V` on `grid`. Custom potentials only sample onto their own grid.
    pub fn sample(&self, grid: Grid) -> Result<SampledFunction> {
        match self {
            Potential::FreeParticle => SampledFunction::constant(grid, 0.0),
            &Potential::PoschlTeller { k0 } => {
                SampledFunction::from_fn(grid, move |x| -2.0 * k0 * k0 / (k0 * x).cosh().powi(2))
            }
            Potential::HarmonicOscillator => SampledFunction::from_fn(grid, |x| x * x),
            Potential::Custom(s) => {
                if *s.grid() != grid {
                    return Err(Error::GridMismatch);
                }
                Ok(s.clone())
            }
        }
    }

    /// Lowest `count` discrete eigenvalues, ascending.
    pub fn known_spectrum(&self, count: usize) -> Result<Vec<f64>> {
        match self {
            Potential::FreeParticle => Ok(Vec::new()),
            Potential::PoschlTeller { k0 } => Ok(std::iter::once(-k0 * k0).take(count).collect()),
            Potential::HarmonicOscillator => Ok((0..count).map(|n| 2.0 * n as f64 + 1.0).collect()),
            Potential::Custom(_) => Err(Error::NoAnalyticSpectrum),
        }
    }

    /// Energy above which the spectrum is continuous, if any.
    pub fn continuum_threshold(&self) -> Option<f64> {
        match self {
            Potential::FreeParticle | Potential::PoschlTeller { .. } => Some(0.0),
            Potential::HarmonicOscillator => None,
            Potential::Custom(s) => {
                let v = s.values();
                Some(v[0].min(v[v.len() - 1]))
            }
        }
    }

    fn level_count(&self) -> Option<usize> {
        match self {
            Potential::FreeParticle => Some(0),
            Potential::PoschlTeller { .. } => Some(1),
            Potential::HarmonicOscillator => None,
            Potential::Custom(_) => Some(0),
        }
    }

    /// Normalized eigenfunction `ψ_m` sampled on `grid`.
    pub fn bound_state(&self, m: usize, grid: Grid) -> Result<SeedSolution> {
        if let Potential::Custom(_) = self {
            return Err(Error::NoAnalyticSpectrum);
        }
        if let Some(available) = self.level_count() {
            if m >= available {
                return Err(Error::LevelOutOfRange { m, available });
            }
        }
        let (energy, u, du) = match *self {
            Potential::PoschlTeller { k0 } => {
                let c = (0.5 * k0).sqrt();
                let u = SampledFunction::from_fn(grid, move |x| c / (k0 * x).cosh())?;
                let du = SampledFunction::from_fn(grid, move |x| -k0 * (k0 * x).tanh() * c / (k0 * x).cosh())?;
                (-k0 * k0, u, du)
            }
            Potential::HarmonicOscillator => {
                let norm = oscillator_norm(m);
                let u = SampledFunction::from_fn(grid, move |x| norm * (-0.5 * x * x).exp() * hermite_poly(m, x))?;
                let du = SampledFunction::from_fn(grid, move |x| {
                    let g = norm * (-0.5 * x * x).exp();
                    let dh = if m == 0 { 0.0 } else { 2.0 * m as f64 * hermite_poly(m - 1, x) };
                    g * (dh - x * hermite_poly(m, x))
                })?;
                (2.0 * m as f64 + 1.0, u, du)
            }
            Potential::FreeParticle | Potential::Custom(_) => unreachable!("no levels"),
        };
        let deviation = norm_squared(&u) - 1.0;
        if deviation.abs() > NORM_TOL {
            return Err(Error::GridTooNarrow { deviation });
        }
        SeedSolution::new(energy, u, Some(du), self.sample(grid)?, SeedTag::BoundState(m), None)
    }

    /// The solution at `epsilon` that vanishes on `side`.
    pub fn seed_solution(&self, epsilon: f64, side: Side, grid: Grid) -> Result<SeedSolution> {
        self.check_collision(epsilon)?;
        let tag = match side {
            Side::Left => SeedTag::LeftVanishing,
            Side::Right => SeedTag::RightVanishing,
        };
        // upper-sign formulas decay on the left
        let s = match side {
            Side::Left => 1.0,
            Side::Right => -1.0,
        };
        let sign = if s > 0.0 { SeedSign::Upper } else { SeedSign::Lower };
        let v = self.sample(grid)?;
        let seed = match *self {
            Potential::FreeParticle => {
                let k = decay_constant(epsilon, side)?;
                let c = (2.0 * k).sqrt();
                let u = SampledFunction::from_fn(grid, move |x| c * (s * k * x).exp())?;
                let du = SampledFunction::from_fn(grid, move |x| s * k * c * (s * k * x).exp())?;
                SeedSolution::new(epsilon, u, Some(du), v, tag, Some(sign))?
            }
            Potential::PoschlTeller { k0 } => {
                let k = decay_constant(epsilon, side)?;
                let c = (2.0 * k).sqrt();
                let u = SampledFunction::from_fn(grid, move |x| {
                    c * (s * k * x).exp() * (k0 * (k0 * x).tanh() - s * k)
                })?;
                let du = SampledFunction::from_fn(grid, move |x| {
                    let t = (k0 * x).tanh();
                    c * (s * k * x).exp() * (s * k * (k0 * t - s * k) + k0 * k0 * (1.0 - t * t))
                })?;
                SeedSolution::new(epsilon, u, Some(du), v, tag, Some(sign))?
            }
            Potential::HarmonicOscillator => oscillator_seed(epsilon, side, grid, v)?,
            Potential::Custom(_) => numerov_seed(epsilon, side, v)?,
        };
        seed.check_decay(side)?;
        Ok(seed)
    }

    fn check_collision(&self, epsilon: f64) -> Result<()> {
        let levels = match self {
            Potential::HarmonicOscillator => {
                let count = if epsilon < 0.0 { 0 } else { (epsilon / 2.0).ceil() as usize + 1 };
                self.known_spectrum(count)?
            }
            Potential::Custom(_) => Vec::new(),
            _ => self.known_spectrum(1)?,
        };
        match levels.iter().find(|&&e| (e - epsilon).abs() < ENERGY_COLLISION_TOL) {
            Some(&level) => Err(Error::EnergyCollision { epsilon, level }),
            None => Ok(()),
        }
    }
}

fn decay_constant(epsilon: f64, side: Side) -> Result<f64> {
    if !(epsilon < 0.0) {
        return Err(Error::NotVanishing {
            side: side.name(),
            reason: format!("epsilon = {epsilon} is not below the continuum threshold 0"),
        });
    }
    Ok((-epsilon).sqrt())
}

fn oscillator_norm(m: usize) -> f64 {
    let mut d = PI.sqrt();
    for k in 1..=m {
        d *= 2.0 * k as f64;
    }
    1.0 / d.sqrt()
}

/// Oscillator solution
///
/// ```text
/// u(x) = e^{−x²/2} [ M(a, ½, x²) ± 2x Γ(a+½)/Γ(a) · M(a+½, 3/2, x²) ],  a = (1−ε)/4
/// ```
///
/// On the side where the chosen branch decays it equals
/// `e^{−x²/2} Γ(a+½)/√π · U(a, ½, x²)`, and there the large-argument
/// expansion of `U` replaces the cancelling Kummer combination whenever it
/// is the more accurate of the two.
#[derive(Debug, Clone, Copy)]
struct OscillatorBranch {
    a: f64,
    ratio: f64,
    u_scale: f64,
    s: f64,
}

const SEED_CTL: SeriesControl = SeriesControl {
    rel_tol: 1e-16,
    max_terms: 2000,
};

impl OscillatorBranch {
    fn new(epsilon: f64, sign: SeedSign) -> Result<Self> {
        let a = 0.25 * (1.0 - epsilon);
        let g_half = gamma(a + 0.5)?;
        Ok(Self {
            a,
            ratio: g_half / gamma(a)?,
            u_scale: g_half / PI.sqrt(),
            s: match sign {
                SeedSign::Upper => 1.0,
                SeedSign::Lower => -1.0,
            },
        })
    }

    /// `(u, u', condition number of the bracket)`.
    fn series(&self, x: f64) -> Result<(f64, f64, f64)> {
        let (a, z) = (self.a, x * x);
        let m1 = kummer_1f1(a, 0.5, z, SEED_CTL)?;
        let m2 = kummer_1f1(a + 0.5, 1.5, z, SEED_CTL)?;
        let dm1 = 2.0 * a * kummer_1f1(a + 1.0, 1.5, z, SEED_CTL)?;
        let dm2 = (a + 0.5) / 1.5 * kummer_1f1(a + 1.5, 2.5, z, SEED_CTL)?;
        let g = (-0.5 * z).exp();
        let odd = self.s * 2.0 * x * self.ratio;
        let bracket = m1 + odd * m2;
        let dbracket = 2.0 * x * dm1 + self.s * 2.0 * self.ratio * m2 + odd * 2.0 * x * dm2;
        let u = g * bracket;
        let du = -x * u + g * dbracket;
        let cond = (m1.abs() + (odd * m2).abs()) / bracket.abs();
        Ok((u, du, cond))
    }

    fn asymptotic(&self, x: f64) -> (f64, f64, f64) {
        let (a, z) = (self.a, x * x);
        let (u0, e0) = tricomi_u_asymptotic(a, 0.5, z);
        let (u1, e1) = tricomi_u_asymptotic(a + 1.0, 1.5, z);
        let g = (-0.5 * z).exp() * self.u_scale;
        (g * u0, 2.0 * x * g * (-0.5 * u0 - a * u1), e0.max(e1))
    }

    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let (u, du, cond) = self.series(x)?;
        let decaying_side = self.s * x < 0.0;
        if decaying_side && x.abs() > 1.0 {
            let (ua, dua, err) = self.asymptotic(x);
            if err < 8.0 * f64::EPSILON * cond {
                return Ok((ua, dua));
            }
        }
        Ok((u, du))
    }
}

fn oscillator_seed(epsilon: f64, side: Side, grid: Grid, v: SampledFunction) -> Result<SeedSolution> {
    let edge = match side {
        Side::Left => grid.xmin(),
        Side::Right => grid.xmax(),
    };
    // Pick whichever branch is smaller at the requested edge.
    let upper = OscillatorBranch::new(epsilon, SeedSign::Upper)?.series(edge)?.0;
    let lower = OscillatorBranch::new(epsilon, SeedSign::Lower)?.series(edge)?.0;
    let sign = if upper.abs() <= lower.abs() { SeedSign::Upper } else { SeedSign::Lower };
    let branch = OscillatorBranch::new(epsilon, sign)?;

    let mut u = Vec::with_capacity(grid.len());
    let mut du = Vec::with_capacity(grid.len());
    for x in grid.points() {
        let (a, b) = branch.eval(x)?;
        u.push(a);
        du.push(b);
    }
    let tag = match side {
        Side::Left => SeedTag::LeftVanishing,
        Side::Right => SeedTag::RightVanishing,
    };
    SeedSolution::new(
        epsilon,
        SampledFunction::from_values(grid, u)?,
        Some(SampledFunction::from_values(grid, du)?),
        v,
        tag,
        Some(sign),
    )
}

const NUMEROV_DELTA: f64 = 1e-10;

/// Numerov integration of `u'' = (V − ε) u` from the vanishing edge inward,
/// started from `u = δ`, `u' = κδ` with the local decay rate `κ = √(V − ε)`.
fn numerov_seed(epsilon: f64, side: Side, v: SampledFunction) -> Result<SeedSolution> {
    let grid = *v.grid();
    let n = grid.len();
    let h = grid.h();
    let edge_v = match side {
        Side::Left => v.values()[0],
        Side::Right => v.values()[n - 1],
    };
    if edge_v <= epsilon {
        return Err(Error::NotVanishing {
            side: side.name(),
            reason: format!("V(edge) = {edge_v} is not above epsilon = {epsilon}"),
        });
    }
    let kappa = (edge_v - epsilon).sqrt();
    // integrate in the "forward" direction of a reversed array for the right side
    let f: Vec<f64> = match side {
        Side::Left => v.values().iter().map(|vi| vi - epsilon).collect(),
        Side::Right => v.values().iter().rev().map(|vi| vi - epsilon).collect(),
    };
    let mut y = vec![0.0; n];
    y[0] = NUMEROV_DELTA;
    y[1] = NUMEROV_DELTA * (kappa * h).exp();
    let c = h * h / 12.0;
    for i in 1..n - 1 {
        y[i + 1] = (2.0 * (1.0 + 5.0 * c * f[i]) * y[i] - (1.0 - c * f[i - 1]) * y[i - 1]) / (1.0 - c * f[i + 1]);
        if y[i + 1].abs() > 1e150 {
            y[..=i + 1].iter_mut().for_each(|t| *t *= 1e-150);
        }
    }
    if side == Side::Right {
        y.reverse();
    }
    let scale = y.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    y.iter_mut().for_each(|t| *t /= scale);
    let u = SampledFunction::from_values(grid, y)?;
    let tag = match side {
        Side::Left => SeedTag::LeftVanishing,
        Side::Right => SeedTag::RightVanishing,
    };
    SeedSolution::new(epsilon, u, None, v, tag, None)
}

/// Transformation function `u` at factorization energy `ε`.
///
/// Besides the samples it keeps `V`, `u'` and the partial norms
/// `∫_{−∞}^{x} u²` and `∫_{x}^{∞} u²` at every grid point; the infinite
/// tails beyond a decaying edge are estimated as `u²/(2κ)` with
/// `κ = |u'/u|` at that edge.
#[derive(Debug, Clone)]
pub struct SeedSolution {
    epsilon: f64,
    u: SampledFunction,
    du: SampledFunction,
    v: SampledFunction,
    tag: SeedTag,
    sign: Option<SeedSign>,
    du_analytic: bool,
    left_mass: Vec<f64>,
    right_mass: Vec<f64>,
}

/// `∫_{x_{i0}}^{x} u²`, with `(u²)'' = 2u'² + 2(V − ε)u²` taken from the
/// Schrödinger equation rather than from differences.
fn cumulative_density(
    epsilon: f64,
    u: &SampledFunction,
    du: &SampledFunction,
    v: &SampledFunction,
    i0: usize,
) -> Result<SampledFunction> {
    let grid = *u.grid();
    let (uv, dv, vv) = (u.values(), du.values(), v.values());
    let f = u.map(|_, y| y * y)?;
    let df = SampledFunction::from_values(grid, uv.iter().zip(dv).map(|(a, b)| 2.0 * a * b).collect())?;
    let d2f = SampledFunction::from_values(
        grid,
        (0..uv.len())
            .map(|i| 2.0 * dv[i] * dv[i] + 2.0 * (vv[i] - epsilon) * uv[i] * uv[i])
            .collect(),
    )?;
    cumulative_integral_hermite(&f, &df, &d2f, i0)
}

impl SeedSolution {
    /// Builds a seed from samples. Without `du` the derivative is taken by
    /// fourth-order finite differences.
    pub fn new(
        epsilon: f64,
        u: SampledFunction,
        du: Option<SampledFunction>,
        v: SampledFunction,
        tag: SeedTag,
        sign: Option<SeedSign>,
    ) -> Result<Self> {
        u.same_grid(&v)?;
        let du_analytic = du.is_some();
        let du = match du {
            Some(d) => {
                u.same_grid(&d)?;
                d
            }
            None => derivative(&u, Stencil::Fourth),
        };
        let grid = *u.grid();
        let n = grid.len();
        let from_left = cumulative_density(epsilon, &u, &du, &v, 0)?;
        let to_right = cumulative_density(epsilon, &u, &du, &v, n - 1)?;

        let tail = |ui: f64, dui: f64, outward: f64| {
            let kappa = -outward * dui / ui;
            if ui != 0.0 && kappa > 0.0 {
                ui * ui / (2.0 * kappa)
            } else {
                0.0
            }
        };
        let (uv, dv) = (u.values(), du.values());
        let tail_left = if tag.decays_left() { tail(uv[0], dv[0], -1.0) } else { 0.0 };
        let tail_right = if tag.decays_right() { tail(uv[n - 1], dv[n - 1], 1.0) } else { 0.0 };

        let left_mass = from_left.values().iter().map(|l| l + tail_left).collect();
        let right_mass = to_right.values().iter().map(|r| tail_right - r).collect();
        Ok(Self {
            epsilon,
            u,
            du,
            v,
            tag,
            sign,
            du_analytic,
            left_mass,
            right_mass,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `∫_{x_{i0}}^{x} u²` at every grid point.
    pub fn cumulative_density(&self, i0: usize) -> Result<SampledFunction> {
        cumulative_density(self.epsilon, &self.u, &self.du, &self.v, i0)
    }

    pub fn u(&self) -> &SampledFunction {
        &self.u
    }

    pub fn du(&self) -> &SampledFunction {
        &self.du
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.du_analytic
    }

    pub fn potential(&self) -> &SampledFunction {
        &self.v
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn tag(&self) -> SeedTag {
        self.tag
    }

    pub fn sign(&self) -> Option<SeedSign> {
        self.sign
    }

    /// `∫_{−∞}^{x_i} u²`, or from the left grid edge when `u` does not
    /// decay there.
    pub fn left_mass(&self) -> &[f64] {
        &self.left_mass
    }

    /// `∫_{x_i}^{∞} u²`, or up to the right grid edge when `u` does not
    /// decay there.
    pub fn right_mass(&self) -> &[f64] {
        &self.right_mass
    }

    /// `ν₊ = ∫_{x₀}^{∞} u²`; `None` unless `u` vanishes on the right.
    pub fn nu_plus(&self, i0: usize) -> Option<f64> {
        if self.tag.decays_right() {
            self.right_mass.get(i0).copied()
        } else {
            None
        }
    }

    /// `ν₋ = ∫_{−∞}^{x₀} u²`; `None` unless `u` vanishes on the left.
    pub fn nu_minus(&self, i0: usize) -> Option<f64> {
        if self.tag.decays_left() {
            self.left_mass.get(i0).copied()
        } else {
            None
        }
    }

    /// `∫ u²` over the whole line (bound states only).
    pub fn total_norm(&self) -> Option<f64> {
        match self.tag {
            SeedTag::BoundState(_) => Some(self.left_mass[0] + self.right_mass[0]),
            _ => None,
        }
    }

    /// The same seed multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let u = self.u.map(|_, y| c * y)?;
        let du = self.du.map(|_, y| c * y)?;
        let mut s = Self::new(self.epsilon, u, Some(du), self.v.clone(), self.tag, self.sign)?;
        s.du_analytic = self.du_analytic;
        Ok(s)
    }

    fn check_decay(&self, side: Side) -> Result<()> {
        let v = self.u.values();
        let edge = match side {
            Side::Left => v[0],
            Side::Right => v[v.len() - 1],
        };
        let max = self.u.max_abs();
        if !(edge.abs() <= BOUNDARY_TOL * max) {
            return Err(Error::NotVanishing {
                side: side.name(),
                reason: format!("|u(edge)| = {:e} against max |u| = {max:e}; widen the grid", edge.abs()),
            });
        }
        Ok(())
    }
}
