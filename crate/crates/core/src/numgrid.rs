//! Uniform-grid numerics: Simpson quadrature, cumulative integrals and
//! finite-difference derivatives.
//!
//! Every function taking part in a transformation is sampled on one shared
//! [`Grid`]; nothing is ever resampled between grids.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Uniform grid `x_i = xmin + i·h`, `i = 0..n`, with `n` odd.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    xmin: f64,
    xmax: f64,
    n: usize,
    h: f64,
}

impl Grid {
    pub fn new(xmin: f64, xmax: f64, n: usize) -> Result<Self> {
        if !(xmin.is_finite() && xmax.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if xmin >= xmax {
            return Err(Error::InvalidGrid(format!(
                "xmin = {xmin} must be below xmax = {xmax}"
            )));
        }
        if n < 3 || n % 2 == 0 {
            return Err(Error::InvalidGrid(format!(
                "point count {n} must be odd and at least 3"
            )));
        }
        let h = (xmax - xmin) / (n - 1) as f64;
        Ok(Self { xmin, xmax, n, h })
    }

    /// Grid with spacing `h` covering `[xmin, xmax]`; the point count is
    /// rounded to the nearest odd value.
    pub fn with_spacing(xmin: f64, xmax: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing {h} must be positive")));
        }
        let intervals = ((xmax - xmin) / h).round() as usize;
        let intervals = intervals + intervals % 2;
        Self::new(xmin, xmax, intervals.max(2) + 1)
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.xmin + i as f64 * self.h
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Index of the grid point at `x`, if `x` lies on the grid (to within a
    /// millionth of the spacing).
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let t = (x - self.xmin) / self.h;
        let i = t.round();
        if i < 0.0 || i > (self.n - 1) as f64 || (t - i).abs() > 1e-6 {
            return None;
        }
        Some(i as usize)
    }

    /// Index of the grid point closest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let t = ((x - self.xmin) / self.h).round();
        t.clamp(0.0, (self.n - 1) as f64) as usize
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.n,
            });
        }
        Ok(())
    }
}

/// Scalar evaluator attached to a sampled function.
pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Real samples on a [`Grid`], optionally backed by an exact evaluator.
#[derive(Clone)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<f64>,
    analytic: Option<Evaluator>,
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction")
            .field("grid", &self.grid)
            .field("len", &self.values.len())
            .field("analytic", &self.analytic.is_some())
            .finish()
    }
}

impl SampledFunction {
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { x: grid.x(i) });
        }
        Ok(Self {
            grid,
            values,
            analytic: None,
        })
    }

    /// Samples `f` on the grid and keeps `f` as the exact evaluator.
    pub fn from_fn<F>(grid: Grid, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let values = grid.points().map(&f).collect();
        let mut s = Self::from_values(grid, values)?;
        s.analytic = Some(Arc::new(f));
        Ok(s)
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Self::from_fn(grid, move |_| c)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn analytic(&self) -> Option<&Evaluator> {
        self.analytic.as_ref()
    }

    pub fn has_analytic(&self) -> bool {
        self.analytic.is_some()
    }

    /// Value at an arbitrary `x` in range: the evaluator when present,
    /// otherwise linear interpolation between samples.
    pub fn value_at(&self, x: f64) -> Result<f64> {
        let g = &self.grid;
        if let Some(f) = &self.analytic {
            return Ok(f(x));
        }
        if x < g.xmin() - 1e-12 * g.h() || x > g.xmax() + 1e-12 * g.h() {
            return Err(Error::OutOfDomain {
                x,
                xmin: g.xmin(),
                xmax: g.xmax(),
            });
        }
        let t = ((x - g.xmin()) / g.h()).clamp(0.0, (g.len() - 1) as f64);
        let i = (t.floor() as usize).min(g.len() - 2);
        let frac = t - i as f64;
        Ok(self.values[i] * (1.0 - frac) + self.values[i + 1] * frac)
    }

    /// Pointwise map producing a plain sampled function.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.grid.x(i), v))
            .collect();
        Self::from_values(self.grid, values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

/// Composite Simpson value of `∫ f` over `[x_i, x_j]`.
///
/// Odd-length ranges close with a three-point half-panel rule on the last
/// interval, which keeps the result exact for quadratics.
pub fn integrate(f: &SampledFunction, i: usize, j: usize) -> Result<f64> {
    let g = f.grid();
    g.check_index(i)?;
    g.check_index(j)?;
    if i > j {
        return Err(Error::InvalidInput(format!(
            "integration bounds reversed: {i} > {j}"
        )));
    }
    Ok(forward_sum(&f.values, g.h(), i, j))
}

/// `F(x) = ∫_{x_{i0}}^{x} f` at every grid point, so `F(x_{i0}) = 0` and
/// `F < 0` left of `x_{i0}` for positive `f`.
///
/// Even offsets from `i0` are Simpson panels; odd offsets add one half-panel
/// to the preceding even point.
pub fn cumulative_integral_from(f: &SampledFunction, i0: usize) -> Result<SampledFunction> {
    let g = *f.grid();
    g.check_index(i0)?;
    let y = &f.values;
    let n = y.len();
    let h = g.h();
    let mut out = vec![0.0; n];

    for j in i0 + 1..n {
        let off = j - i0;
        out[j] = if off % 2 == 0 {
            out[j - 2] + simpson_panel(y[j - 2], y[j - 1], y[j], h)
        } else {
            out[j - 1] + half_panel_right(y, j - 1, h)
        };
    }
    for j in (0..i0).rev() {
        let off = i0 - j;
        out[j] = if off % 2 == 0 {
            out[j + 2] - simpson_panel(y[j], y[j + 1], y[j + 2], h)
        } else {
            out[j + 1] - half_panel_left(y, j + 1, h)
        };
    }
    SampledFunction::from_values(g, out)
}

/// Like [`cumulative_integral_from`], from samples of `f`, `f'` and `f''`,
/// with the two-point Hermite rule
/// `h/2 (f_k + f_{k+1}) + h²/10 (f'_k − f'_{k+1}) + h³/120 (f''_k + f''_{k+1})`
/// on every interval (exact for quintics). Using the same rule everywhere
/// keeps the quadrature error smooth from point to point, which matters when
/// the result is differentiated later.
pub fn cumulative_integral_hermite(
    f: &SampledFunction,
    df: &SampledFunction,
    d2f: &SampledFunction,
    i0: usize,
) -> Result<SampledFunction> {
    f.same_grid(df)?;
    f.same_grid(d2f)?;
    let g = *f.grid();
    g.check_index(i0)?;
    let (y, d, dd) = (&f.values, &df.values, &d2f.values);
    let h = g.h();
    let interval = |k: usize| {
        0.5 * h * (y[k] + y[k + 1]) + h * h / 10.0 * (d[k] - d[k + 1]) + h * h * h / 120.0 * (dd[k] + dd[k + 1])
    };
    let mut out = vec![0.0; y.len()];
    for j in i0 + 1..y.len() {
        out[j] = out[j - 1] + interval(j - 1);
    }
    for j in (0..i0).rev() {
        out[j] = out[j + 1] - interval(j);
    }
    SampledFunction::from_values(g, out)
}

#[inline]
fn simpson_panel(a: f64, b: f64, c: f64, h: f64) -> f64 {
    h / 3.0 * (a + 4.0 * b + c)
}

/// `∫_{x_k}^{x_{k+1}}` from a quadratic through three neighbouring points.
fn half_panel_right(y: &[f64], k: usize, h: f64) -> f64 {
    if k + 2 < y.len() {
        h / 12.0 * (5.0 * y[k] + 8.0 * y[k + 1] - y[k + 2])
    } else {
        h / 12.0 * (-y[k - 1] + 8.0 * y[k] + 5.0 * y[k + 1])
    }
}

/// `∫_{x_{k-1}}^{x_k}` from a quadratic through three neighbouring points.
fn half_panel_left(y: &[f64], k: usize, h: f64) -> f64 {
    if k >= 2 {
        h / 12.0 * (-y[k - 2] + 8.0 * y[k - 1] + 5.0 * y[k])
    } else {
        h / 12.0 * (5.0 * y[k - 1] + 8.0 * y[k] - y[k + 1])
    }
}

fn forward_sum(y: &[f64], h: f64, i: usize, j: usize) -> f64 {
    let mut acc = 0.0;
    let mut k = i;
    while k + 2 <= j {
        acc += simpson_panel(y[k], y[k + 1], y[k + 2], h);
        k += 2;
    }
    if k < j {
        acc += half_panel_right(y, k, h);
    }
    acc
}

/// Finite-difference stencil order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// Three-point central differences, second-order one-sided at the ends.
    Second,
    /// Five-point central differences, fourth-order one-sided at the ends.
    #[default]
    Fourth,
}

/// First derivative with second-order central differences (one-sided at
/// the boundaries).
pub fn differentiate(f: &SampledFunction) -> SampledFunction {
    derivative(f, Stencil::Second)
}

pub fn derivative(f: &SampledFunction, stencil: Stencil) -> SampledFunction {
    let y = &f.values;
    let h = f.grid.h();
    let n = y.len();
    let mut d = vec![0.0; n];
    match stencil {
        Stencil::Second => {
            d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
            d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
            for i in 1..n - 1 {
                d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
            }
        }
        Stencil::Fourth if n >= 5 => {
            let c = 12.0 * h;
            d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / c;
            d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / c;
            let (a, b, e, f_, g_) = (y[n - 1], y[n - 2], y[n - 3], y[n - 4], y[n - 5]);
            d[n - 1] = (25.0 * a - 48.0 * b + 36.0 * e - 16.0 * f_ + 3.0 * g_) / c;
            d[n - 2] = (3.0 * a + 10.0 * b - 18.0 * e + 6.0 * f_ - g_) / c;
            for i in 2..n - 2 {
                d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / c;
            }
        }
        Stencil::Fourth => return derivative(f, Stencil::Second),
    }
    SampledFunction {
        grid: f.grid,
        values: d,
        analytic: None,
    }
}

pub fn second_derivative(f: &SampledFunction, stencil: Stencil) -> SampledFunction {
    let y = &f.values;
    let h2 = f.grid.h() * f.grid.h();
    let n = y.len();
    let mut d = vec![0.0; n];
    match stencil {
        Stencil::Second if n >= 4 => {
            d[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / h2;
            d[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) / h2;
            for i in 1..n - 1 {
                d[i] = (y[i - 1] - 2.0 * y[i] + y[i + 1]) / h2;
            }
        }
        Stencil::Second => {
            let c = (y[0] - 2.0 * y[1] + y[2]) / h2;
            d.fill(c);
        }
        Stencil::Fourth if n >= 7 => {
            let c = 12.0 * h2;
            let edge = |a: f64, b: f64, e: f64, f_: f64, g_: f64, k: f64| {
                (45.0 * a - 154.0 * b + 214.0 * e - 156.0 * f_ + 61.0 * g_ - 10.0 * k) / c
            };
            let next = |a: f64, b: f64, e: f64, f_: f64, g_: f64, k: f64| {
                (10.0 * a - 15.0 * b - 4.0 * e + 14.0 * f_ - 6.0 * g_ + k) / c
            };
            d[0] = edge(y[0], y[1], y[2], y[3], y[4], y[5]);
            d[1] = next(y[0], y[1], y[2], y[3], y[4], y[5]);
            d[n - 1] = edge(y[n - 1], y[n - 2], y[n - 3], y[n - 4], y[n - 5], y[n - 6]);
            d[n - 2] = next(y[n - 1], y[n - 2], y[n - 3], y[n - 4], y[n - 5], y[n - 6]);
            for i in 2..n - 2 {
                d[i] = (-y[i - 2] + 16.0 * y[i - 1] - 30.0 * y[i] + 16.0 * y[i + 1] - y[i + 2]) / c;
            }
        }
        Stencil::Fourth => return second_derivative(f, Stencil::Second),
    }
    SampledFunction {
        grid: f.grid,
        values: d,
        analytic: None,
    }
}

/// Simpson value of `∫ f g` over the whole grid.
pub fn inner_product(f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    f.same_grid(g)?;
    let prod: Vec<f64> = f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect();
    Ok(forward_sum(&prod, f.grid.h(), 0, prod.len() - 1))
}

pub fn norm_squared(f: &SampledFunction) -> f64 {
    let sq: Vec<f64> = f.values.iter().map(|v| v * v).collect();
    forward_sum(&sq, f.grid.h(), 0, sq.len() - 1)
}
