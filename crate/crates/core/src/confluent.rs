//! The confluent transformation: key function `w`, regularity of the
//! partner, the partner potential `Ṽ = V − 2 (w'/w)'`, the intertwiner
//! `A = d²/dx² + η d/dx + γ` and the partner eigenstates.
//!
//! With `w' = −u²` the partner is evaluated through
//!
//! ```text
//! Ṽ = V + 4 u u' / w + 2 u⁴ / w²
//! ```
//!
//! so no finite differences of `w` enter.

use std::fmt;

use crate::numgrid::{norm_squared, Grid, SampledFunction, Stencil};
use crate::potentials::{SeedSolution, SeedTag, ENERGY_COLLISION_TOL};
use crate::{numgrid, Error, Result};

/// `ν` within this fraction of the seed's mass scale of a domain boundary
/// counts as on the boundary.
pub const NU_BOUNDARY_TOL: f64 = 1e-9;

pub const DEFAULT_SINGULAR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConfig {
    /// Integration constant `w₀ = w(x₀)`.
    pub w0: f64,
    /// Grid index of the reference point `x₀`.
    pub x0_index: usize,
    /// A grid point where `|w| <= singular_tol · u²` is treated as a zero of `w`.
    pub singular_tol: f64,
}

impl TransformConfig {
    pub fn new(w0: f64, x0_index: usize) -> Self {
        Self {
            w0,
            x0_index,
            singular_tol: DEFAULT_SINGULAR_TOL,
        }
    }

    /// Chooses `w₀` so that the transformation has the requested `ν`.
    pub fn from_nu(seed: &SeedSolution, nu: f64, x0_index: usize) -> Result<Self> {
        check_index(seed.grid(), x0_index)?;
        let w0 = match case_of(seed) {
            Case::I | Case::IIRight => nu + nu_plus(seed, x0_index)?,
            Case::IILeft => -nu - nu_minus(seed, x0_index)?,
        };
        Ok(Self::new(w0, x0_index))
    }

    pub fn with_singular_tol(mut self, tol: f64) -> Self {
        self.singular_tol = tol;
        self
    }

    fn validate(&self, grid: &Grid) -> Result<()> {
        check_index(grid, self.x0_index)?;
        if !(self.singular_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "singular_tol = {} must be positive",
                self.singular_tol
            )));
        }
        if !self.w0.is_finite() {
            return Err(Error::InvalidInput("w0 must be finite".into()));
        }
        Ok(())
    }
}

fn check_index(grid: &Grid, i: usize) -> Result<()> {
    if i >= grid.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: grid.len(),
        });
    }
    Ok(())
}

/// Which regularity analysis applies to the seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// Normalized bound state, `ε = E_m`.
    I,
    /// `ε` outside the spectrum, `u → 0` as `x → +∞`.
    IIRight,
    /// `ε` outside the spectrum, `u → 0` as `x → −∞`.
    IILeft,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::I => "I",
            Case::IIRight => "II-right",
            Case::IILeft => "II-left",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Regular,
    Boundary,
    Singular,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Regular => "regular",
            Verdict::Boundary => "boundary",
            Verdict::Singular => "singular",
        }
    }

    pub fn is_usable(self) -> bool {
        !matches!(self, Verdict::Singular)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuClassification {
    pub case: Case,
    pub nu: f64,
    pub verdict: Verdict,
    /// `∫u²` over the line for case I seeds (one for a normalized state).
    pub norm: Option<f64>,
    /// Mass `∫u²` that `ν` is measured against: the total norm in case I,
    /// the mass on the decaying side of `x₀` in case II.
    pub scale: f64,
}

impl NuClassification {
    /// `ν` moved onto the domain boundary it is within tolerance of.
    fn snapped_nu(&self) -> f64 {
        if self.verdict != Verdict::Boundary {
            return self.nu;
        }
        match (self.case, self.norm) {
            (Case::I, Some(n)) if (self.nu + n).abs() <= NU_BOUNDARY_TOL * self.scale => -n,
            _ => 0.0,
        }
    }
}

fn case_of(seed: &SeedSolution) -> Case {
    match seed.tag() {
        SeedTag::BoundState(_) => Case::I,
        SeedTag::RightVanishing => Case::IIRight,
        SeedTag::LeftVanishing => Case::IILeft,
    }
}

fn nu_plus(seed: &SeedSolution, i0: usize) -> Result<f64> {
    seed.nu_plus(i0)
        .ok_or_else(|| Error::InvalidInput("seed does not vanish on the right; nu_plus undefined".into()))
}

fn nu_minus(seed: &SeedSolution, i0: usize) -> Result<f64> {
    seed.nu_minus(i0)
        .ok_or_else(|| Error::InvalidInput("seed does not vanish on the left; nu_minus undefined".into()))
}

/// Computes `ν` and decides on which side of the regularity frontier it
/// falls. Case I is regular for `ν ∉ [−1, 0]`, case II for `ν > 0`; the
/// frontier itself is `Boundary`.
pub fn classify(seed: &SeedSolution, cfg: &TransformConfig) -> Result<NuClassification> {
    cfg.validate(seed.grid())?;
    let i0 = cfg.x0_index;
    let case = case_of(seed);
    let (nu, mass) = match case {
        Case::I | Case::IIRight => {
            let m = nu_plus(seed, i0)?;
            (cfg.w0 - m, m)
        }
        Case::IILeft => {
            let m = nu_minus(seed, i0)?;
            (-(cfg.w0 + m), m)
        }
    };
    let norm = seed.total_norm();
    let scale = match case {
        Case::I => norm.unwrap_or(mass),
        _ => mass,
    };
    let near = |b: f64| (nu - b).abs() <= NU_BOUNDARY_TOL * scale;
    let verdict = match case {
        Case::I => {
            let n = norm.unwrap_or(1.0);
            if near(0.0) || near(-n) {
                Verdict::Boundary
            } else if nu > 0.0 || nu < -n {
                Verdict::Regular
            } else {
                Verdict::Singular
            }
        }
        Case::IIRight | Case::IILeft => {
            if near(0.0) {
                Verdict::Boundary
            } else if nu > 0.0 {
                Verdict::Regular
            } else {
                Verdict::Singular
            }
        }
    };
    Ok(NuClassification {
        case,
        nu,
        verdict,
        norm,
        scale,
    })
}

/// `w(x) = w₀ − ∫_{x₀}^{x} u²`.
///
/// Each side of `x₀` is accumulated from its own grid edge,
/// `w = w(−∞) − ∫_{−∞}^{x} u²` and `w = w(+∞) + ∫_{x}^{∞} u²`, so that
/// `w` keeps its relative accuracy where it decays towards zero.
pub fn build_w(seed: &SeedSolution, cfg: &TransformConfig) -> Result<SampledFunction> {
    let cls = classify(seed, cfg)?;
    build_w_classified(seed, cfg, &cls)
}

fn build_w_classified(seed: &SeedSolution, cfg: &TransformConfig, cls: &NuClassification) -> Result<SampledFunction> {
    let i0 = cfg.x0_index;
    let lm = seed.left_mass();
    let rm = seed.right_mass();
    let nu = cls.snapped_nu();
    let (w0, left_lim, right_lim) = match cls.case {
        Case::I => {
            let n = cls.norm.unwrap_or(lm[i0] + rm[i0]);
            (nu + rm[i0], nu + n, nu)
        }
        Case::IIRight => {
            let w0 = nu + rm[i0];
            (w0, w0 + lm[i0], nu)
        }
        Case::IILeft => {
            let w0 = -nu - lm[i0];
            (w0, -nu, w0 - rm[i0])
        }
    };
    // keep w(x₀) = w₀ exactly unless ν was moved onto the boundary
    let w0 = if cls.verdict == Verdict::Boundary { w0 } else { cfg.w0 };
    // a side where u grows is integrated outward from x₀ instead
    let from_x0 = match cls.case {
        Case::I => None,
        _ => {
            Some(seed.cumulative_density(i0)?)
        }
    };
    let outward = |i: usize| w0 - from_x0.as_ref().map_or(0.0, |c| c.values()[i]);
    let values = (0..seed.grid().len())
        .map(|i| match i.cmp(&i0) {
            std::cmp::Ordering::Less if cls.case == Case::IIRight => outward(i),
            std::cmp::Ordering::Less => left_lim - lm[i],
            std::cmp::Ordering::Equal => w0,
            std::cmp::Ordering::Greater if cls.case == Case::IILeft => outward(i),
            std::cmp::Ordering::Greater => right_lim + rm[i],
        })
        .collect();
    SampledFunction::from_values(*seed.grid(), values)
}

/// First grid point where `w` vanishes, changes sign, or is so small that
/// `η = u²/w` exceeds `1/singular_tol`.
fn find_zero(seed: &SeedSolution, w: &SampledFunction, singular_tol: f64) -> Option<usize> {
    let u = seed.u().values();
    let wv = w.values();
    let sign = wv.iter().find(|v| **v != 0.0).map(|v| v.signum())?;
    wv.iter().zip(u).position(|(&wi, &ui)| {
        if ui == 0.0 && wi == 0.0 {
            return false;
        }
        wi == 0.0 || wi.signum() != sign || wi.abs() <= singular_tol * ui * ui
    })
}

fn near_zero_location(w: &SampledFunction) -> usize {
    let wv = w.values();
    if let Some(i) = wv.windows(2).position(|p| p[0].signum() != p[1].signum()) {
        return i;
    }
    wv.iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// `Ṽ = V + 4uu'/w + 2u⁴/w²`. Refuses when `w` has a zero on the grid.
pub fn partner_potential(seed: &SeedSolution, w: &SampledFunction, singular_tol: f64) -> Result<SampledFunction> {
    seed.u().same_grid(w)?;
    if let Some(i) = find_zero(seed, w, singular_tol) {
        return Err(Error::Singular {
            x: w.grid().x(i),
            nu: f64::NAN,
        });
    }
    let (u, du, v) = (seed.u().values(), seed.du().values(), seed.potential().values());
    let values = w
        .values()
        .iter()
        .enumerate()
        .map(|(i, &wi)| {
            if u[i] == 0.0 {
                return v[i];
            }
            let q = u[i] / wi;
            let eta = u[i] * q;
            v[i] + 4.0 * du[i] * q + 2.0 * eta * eta
        })
        .collect();
    SampledFunction::from_values(*w.grid(), values)
}

/// Coefficients of `A = d²/dx² + η d/dx + γ`.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    /// `η = −w'/w = u²/w`.
    pub eta: SampledFunction,
    /// `η' = (2uu'w + u⁴)/w²`, finite at nodes of `u`.
    pub eta_prime: SampledFunction,
    /// `γ = ε − V + η²/2 − η'/2`.
    pub gamma_fn: SampledFunction,
}

impl Intertwiner {
    /// `Aψ = ψ'' + ηψ' + γψ` with finite-difference derivatives of `ψ`.
    pub fn apply(&self, psi: &SampledFunction, stencil: Stencil) -> Result<SampledFunction> {
        self.eta.same_grid(psi)?;
        let d1 = numgrid::derivative(psi, stencil);
        let d2 = numgrid::second_derivative(psi, stencil);
        let (eta, gam) = (self.eta.values(), self.gamma_fn.values());
        let values = (0..psi.values().len())
            .map(|i| d2.values()[i] + eta[i] * d1.values()[i] + gam[i] * psi.values()[i])
            .collect();
        SampledFunction::from_values(*psi.grid(), values)
    }
}

pub fn intertwiner(seed: &SeedSolution, w: &SampledFunction, singular_tol: f64) -> Result<Intertwiner> {
    seed.u().same_grid(w)?;
    if let Some(i) = find_zero(seed, w, singular_tol) {
        return Err(Error::Singular {
            x: w.grid().x(i),
            nu: f64::NAN,
        });
    }
    let grid = *w.grid();
    let eps = seed.epsilon();
    let (u, du, v) = (seed.u().values(), seed.du().values(), seed.potential().values());
    let n = grid.len();
    let mut eta = Vec::with_capacity(n);
    let mut eta_prime = Vec::with_capacity(n);
    let mut gam = Vec::with_capacity(n);
    for (i, &wi) in w.values().iter().enumerate() {
        let (e, ep) = if u[i] == 0.0 {
            (0.0, 0.0)
        } else {
            let q = u[i] / wi;
            let e = u[i] * q;
            (e, 2.0 * du[i] * q + e * e)
        };
        eta.push(e);
        eta_prime.push(ep);
        gam.push(eps - v[i] + 0.5 * e * e - 0.5 * ep);
    }
    Ok(Intertwiner {
        eta: SampledFunction::from_values(grid, eta)?,
        eta_prime: SampledFunction::from_values(grid, eta_prime)?,
        gamma_fn: SampledFunction::from_values(grid, gam)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralEffect {
    /// `Sp(H̃) = Sp(H)`.
    Isospectral,
    /// `Sp(H̃) = {ε} ∪ Sp(H)`.
    Created(f64),
    /// `Sp(H̃) = Sp(H) ∖ {E_m}`.
    Deleted(f64),
}

impl SpectralEffect {
    pub fn name(&self) -> &'static str {
        match self {
            SpectralEffect::Isospectral => "isospectral",
            SpectralEffect::Created(_) => "created",
            SpectralEffect::Deleted(_) => "deleted",
        }
    }

    pub fn level(&self) -> Option<f64> {
        match *self {
            SpectralEffect::Isospectral => None,
            SpectralEffect::Created(e) | SpectralEffect::Deleted(e) => Some(e),
        }
    }

    /// The partner's discrete levels given the original ones (ascending).
    pub fn apply(&self, base: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = base.to_vec();
        match *self {
            SpectralEffect::Isospectral => {}
            SpectralEffect::Created(e) => {
                let at = out.partition_point(|&x| x < e);
                out.insert(at, e);
            }
            SpectralEffect::Deleted(e) => out.retain(|&x| (x - e).abs() > ENERGY_COLLISION_TOL),
        }
        out
    }
}

/// The eigenfunction `ψ̃ = n₀ u / w` of the partner at `ε`, when it is
/// normalizable.
#[derive(Debug, Clone)]
pub struct ExtraState {
    pub effect: SpectralEffect,
    pub n0: Option<f64>,
    pub state: Option<SampledFunction>,
}

/// A completed, non-singular confluent transformation.
#[derive(Debug, Clone)]
pub struct ConfluentTransform {
    seed: SeedSolution,
    config: TransformConfig,
    classification: NuClassification,
    w: SampledFunction,
    partner: SampledFunction,
    intertwiner: Intertwiner,
}

impl ConfluentTransform {
    pub fn new(seed: SeedSolution, config: TransformConfig) -> Result<Self> {
        let classification = classify(&seed, &config)?;
        let w = build_w_classified(&seed, &config, &classification)?;
        if classification.verdict == Verdict::Singular {
            return Err(Error::Singular {
                x: w.grid().x(near_zero_location(&w)),
                nu: classification.nu,
            });
        }
        let with_nu = |e: Error| match e {
            Error::Singular { x, .. } => Error::Singular {
                x,
                nu: classification.nu,
            },
            other => other,
        };
        let partner = partner_potential(&seed, &w, config.singular_tol).map_err(with_nu)?;
        let intertwiner = intertwiner(&seed, &w, config.singular_tol).map_err(with_nu)?;
        Ok(Self {
            seed,
            config,
            classification,
            w,
            partner,
            intertwiner,
        })
    }

    pub fn seed(&self) -> &SeedSolution {
        &self.seed
    }

    pub fn config(&self) -> &TransformConfig {
        &self.config
    }

    pub fn classification(&self) -> &NuClassification {
        &self.classification
    }

    pub fn nu(&self) -> f64 {
        self.classification.nu
    }

    pub fn epsilon(&self) -> f64 {
        self.seed.epsilon()
    }

    pub fn grid(&self) -> &Grid {
        self.seed.grid()
    }

    pub fn w(&self) -> &SampledFunction {
        &self.w
    }

    /// `Ṽ`.
    pub fn partner(&self) -> &SampledFunction {
        &self.partner
    }

    pub fn intertwiner(&self) -> &Intertwiner {
        &self.intertwiner
    }

    pub fn eta(&self) -> &SampledFunction {
        &self.intertwiner.eta
    }

    pub fn gamma_fn(&self) -> &SampledFunction {
        &self.intertwiner.gamma_fn
    }

    pub fn apply_a(&self, psi: &SampledFunction) -> Result<SampledFunction> {
        self.intertwiner.apply(psi, Stencil::Fourth)
    }

    /// `ψ̃_n = (E_n − ε)⁻¹ A ψ_n`, renormalized on the grid.
    pub fn partner_eigenstate(&self, psi_n: &SampledFunction, e_n: f64) -> Result<SampledFunction> {
        if (e_n - self.epsilon()).abs() < ENERGY_COLLISION_TOL {
            return Err(Error::SeedLevel { energy: e_n });
        }
        let a_psi = self.apply_a(psi_n)?;
        let scale = 1.0 / (e_n - self.epsilon());
        let raw = a_psi.map(|_, y| y * scale)?;
        let norm = norm_squared(&raw).sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput("A annihilates the state".into()));
        }
        raw.map(|_, y| y / norm)
    }

    pub fn spectral_effect(&self) -> SpectralEffect {
        let eps = self.epsilon();
        match (self.classification.case, self.classification.verdict) {
            (Case::I, Verdict::Boundary) => SpectralEffect::Deleted(eps),
            (Case::I, _) => SpectralEffect::Isospectral,
            (_, Verdict::Boundary) => SpectralEffect::Isospectral,
            _ => SpectralEffect::Created(eps),
        }
    }

    /// `ψ̃ = n₀u/w` with `n₀ = √(ν(ν+1))` (case I) or `√ν` (case II), or
    /// nothing on the frontier where `ψ̃` is not normalizable.
    pub fn created_or_missing_state(&self) -> Result<ExtraState> {
        let effect = self.spectral_effect();
        let cls = &self.classification;
        if cls.verdict != Verdict::Regular {
            return Ok(ExtraState {
                effect,
                n0: None,
                state: None,
            });
        }
        let nu = cls.nu;
        let n0 = match cls.case {
            Case::I => (nu * (nu + cls.norm.unwrap_or(1.0))).sqrt(),
            Case::IIRight | Case::IILeft => nu.sqrt(),
        };
        let state = self.u_over_w()?.map(|_, y| n0 * y)?;
        Ok(ExtraState {
            effect,
            n0: Some(n0),
            state: Some(state),
        })
    }

    /// `u/w` on the grid.
    pub fn u_over_w(&self) -> Result<SampledFunction> {
        let u = self.seed.u().values();
        let values = self.w.values().iter().zip(u).map(|(w, u)| if *u == 0.0 { 0.0 } else { u / w }).collect();
        SampledFunction::from_values(*self.grid(), values)
    }
}

/// One row of a `ν` sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub nu: f64,
    pub case: Case,
    pub verdict: Verdict,
    pub min_abs_w: f64,
    pub effect: Option<SpectralEffect>,
}

/// Classifies the transformation for every `ν` in `nus`. Singular entries
/// are reported, not treated as errors.
pub fn scan_nu(seed: &SeedSolution, x0_index: usize, nus: &[f64]) -> Result<Vec<ScanRow>> {
    nus.iter()
        .map(|&nu| {
            let cfg = TransformConfig::from_nu(seed, nu, x0_index)?;
            let cls = classify(seed, &cfg)?;
            let w = build_w_classified(seed, &cfg, &cls)?;
            let min_abs_w = w.values().iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
            let effect = match cls.verdict {
                Verdict::Singular => None,
                _ => Some(match (cls.case, cls.verdict) {
                    (Case::I, Verdict::Boundary) => SpectralEffect::Deleted(seed.epsilon()),
                    (Case::I, _) | (_, Verdict::Boundary) => SpectralEffect::Isospectral,
                    _ => SpectralEffect::Created(seed.epsilon()),
                }),
            };
            Ok(ScanRow {
                nu: cls.nu,
                case: cls.case,
                verdict: cls.verdict,
                min_abs_w,
                effect,
            })
        })
        .collect()
}
