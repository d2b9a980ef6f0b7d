//! Finite-difference spectra of `H = −d²/dx² + V` with Dirichlet walls at
//! the grid edges.
//!
//! The operator on the interior points is the symmetric tridiagonal matrix
//! with diagonal `2/h² + V_i` and off-diagonal `−1/h²`; eigenvalues are
//! located by Sturm-sequence bisection.

use crate::numgrid::{Grid, SampledFunction};
use crate::{Error, Result};

/// Bisection stops once the bracket is narrower than this.
pub const EIGEN_TOL: f64 = 1e-10;

pub const MIN_POINTS: usize = 10;

#[derive(Debug, Clone)]
pub struct TridiagonalOperator {
    grid: Grid,
    diag: Vec<f64>,
    off: f64,
}

impl TridiagonalOperator {
    pub fn discretize(v: &SampledFunction) -> Result<Self> {
        let grid = *v.grid();
        if grid.len() < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points, got {}",
                grid.len()
            )));
        }
        if let Some(x) = v.values().iter().find(|y| !y.is_finite()) {
            return Err(Error::NonFinite { x: *x });
        }
        let h2 = grid.h() * grid.h();
        let n = grid.len();
        let diag = v.values()[1..n - 1].iter().map(|vi| 2.0 / h2 + vi).collect();
        Ok(Self {
            grid,
            diag,
            off: -1.0 / h2,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Number of interior unknowns.
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> f64 {
        self.off
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn count_below(&self, lambda: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut q = 1.0;
        for (i, d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - lambda } else { d - lambda - off2 / q };
            if q == 0.0 {
                q = f64::EPSILON * (d.abs() + lambda.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin bounds on the spectrum.
    fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |m, d| m.min(d - r));
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |m, d| m.max(d + r));
        (lo, hi)
    }

    /// The `k`-th eigenvalue (zero-based, ascending).
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.dim() {
            return Err(Error::LevelOutOfRange {
                m: k,
                available: self.dim(),
            });
        }
        let (mut lo, mut hi) = self.bounds();
        while hi - lo > EIGEN_TOL {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `count` lowest eigenvalues, ascending.
    pub fn lowest_eigenvalues(&self, count: usize) -> Result<Vec<f64>> {
        if count > self.dim() {
            return Err(Error::LevelOutOfRange {
                m: count,
                available: self.dim(),
            });
        }
        (0..count).map(|k| self.eigenvalue(k)).collect()
    }

    /// At most `max_count` eigenvalues lying strictly below `threshold`.
    pub fn eigenvalues_below(&self, threshold: f64, max_count: usize) -> Result<Vec<f64>> {
        let take = self.count_below(threshold).min(max_count);
        (0..take).map(|k| self.eigenvalue(k)).collect()
    }
}

/// `max_i |−ψ″ + Vψ − Eψ| / max|ψ|` over points `2..n−3`, with `ψ″` from
/// the five-point fourth-order central stencil.
pub fn residual(v: &SampledFunction, psi: &SampledFunction, e: f64) -> Result<f64> {
    v.same_grid(psi)?;
    let n = v.grid().len();
    if n < 5 {
        return Err(Error::InvalidGrid("residual needs at least 5 points".into()));
    }
    let scale = psi.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let h2 = v.grid().h() * v.grid().h();
    let p = psi.values();
    let vv = v.values();
    let worst = (2..n - 2)
        .map(|i| {
            let d2 = (-p[i - 2] + 16.0 * p[i - 1] - 30.0 * p[i] + 16.0 * p[i + 1] - p[i + 2]) / (12.0 * h2);
            (-d2 + vv[i] * p[i] - e * p[i]).abs()
        })
        .fold(0.0, f64::max);
    Ok(worst / scale)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelMatch {
    pub expected: usize,
    pub computed: usize,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub expected: Vec<f64>,
    pub computed: Vec<f64>,
    pub matches: Vec<LevelMatch>,
    /// Expected levels with no computed level within `tol`.
    pub missing: Vec<f64>,
    /// Unmatched computed levels inside the compared window.
    pub extra: Vec<f64>,
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Greedy nearest matching of each expected level to a distinct computed
/// level.
///
/// An unmatched computed level is a failure when it lies below
/// `max(expected) + tol`, or below `threshold` when `expected` is empty.
/// With a threshold, computed levels at or above it are ignored entirely.
pub fn compare_spectra(expected: &[f64], computed: &[f64], tol: f64, threshold: Option<f64>) -> Result<SpectrumReport> {
    if computed.is_empty() && (!expected.is_empty() || threshold.is_none()) {
        return Err(Error::InvalidInput("no computed levels to compare".into()));
    }
    let mut exp = expected.to_vec();
    exp.sort_by(f64::total_cmp);
    let mut com: Vec<f64> = computed
        .iter()
        .copied()
        .filter(|e| threshold.is_none_or(|t| *e < t))
        .collect();
    com.sort_by(f64::total_cmp);

    let mut used = vec![false; com.len()];
    let mut matches = Vec::new();
    let mut missing = Vec::new();
    for (i, e) in exp.iter().enumerate() {
        let best = com
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .min_by(|a, b| (a.1 - e).abs().total_cmp(&(b.1 - e).abs()));
        match best {
            Some((j, c)) if (c - e).abs() <= tol => {
                used[j] = true;
                matches.push(LevelMatch {
                    expected: i,
                    computed: j,
                    abs_error: (c - e).abs(),
                });
            }
            _ => missing.push(*e),
        }
    }
    let window = match exp.last() {
        Some(top) => Some(top + tol),
        None => threshold,
    };
    let extra: Vec<f64> = com
        .iter()
        .enumerate()
        .filter(|(j, c)| !used[*j] && window.is_some_and(|w| **c < w))
        .map(|(_, c)| *c)
        .collect();
    let max_deviation = matches.iter().map(|m| m.abs_error).fold(0.0, f64::max);
    Ok(SpectrumReport {
        pass: missing.is_empty() && extra.is_empty(),
        expected: exp,
        computed: com,
        matches,
        missing,
        extra,
        max_deviation,
        tol,
    })
}
