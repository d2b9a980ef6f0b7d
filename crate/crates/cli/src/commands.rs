use std::path::Path;

use anyhow::{bail, Result};
use confluent_core::confluent::{
    classify, scan_nu, ConfluentTransform, NuClassification, ScanRow, SpectralEffect, TransformConfig, Verdict,
};
use confluent_core::numgrid::Grid;
use confluent_core::potentials::{Potential, SeedSolution, Side};
use confluent_core::spectral::{compare_spectra, SpectrumReport, TridiagonalOperator};
use confluent_core::Error;
use serde::Serialize;

use crate::config::{x0_index, BaseConfig, Offset, RunConfig, SeedMode};
use crate::output::{csv_string, write_json, write_text};
use crate::{EXIT_FAILED, EXIT_OK, EXIT_SINGULAR};

/// Largest number of 20% widenings tried while the top level still moves.
pub const MAX_WIDENINGS: usize = 6;
/// The grid counts as wide enough once the top compared level moves less than this.
pub const WIDEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSummary {
    pub xmin: f64,
    pub xmax: f64,
    pub n: usize,
}

impl From<&Grid> for GridSummary {
    fn from(g: &Grid) -> Self {
        Self {
            xmin: g.xmin(),
            xmax: g.xmax(),
            n: g.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformSummary {
    pub potential: String,
    pub epsilon: f64,
    pub nu: f64,
    pub case: String,
    pub verdict: String,
    pub effect: Option<String>,
    pub level: Option<f64>,
    pub n0: Option<f64>,
    pub w0: f64,
    pub x0: f64,
    pub grid: GridSummary,
    /// Where `w` comes closest to zero, for a refused transformation.
    pub near_zero_x: Option<f64>,
}

/// Either a usable transformation or the reason it was refused.
pub enum Built {
    Ok(Box<ConfluentTransform>, TransformSummary),
    Singular(TransformSummary),
}

impl Built {
    pub fn summary(&self) -> &TransformSummary {
        match self {
            Built::Ok(_, s) | Built::Singular(s) => s,
        }
    }
}

fn transform_config(cfg: &RunConfig, seed: &SeedSolution, grid: &Grid) -> Result<TransformConfig> {
    let i0 = x0_index(grid, cfg.x0)?;
    let tc = match cfg.offset {
        Offset::W0(w0) => TransformConfig::new(w0, i0),
        Offset::Nu(nu) => TransformConfig::from_nu(seed, nu, i0)?,
    };
    Ok(tc.with_singular_tol(cfg.singular_tol))
}

fn summary_of(cfg: &RunConfig, seed: &SeedSolution, tc: &TransformConfig, cls: &NuClassification) -> TransformSummary {
    TransformSummary {
        potential: cfg.potential.name().to_string(),
        epsilon: seed.epsilon(),
        nu: cls.nu,
        case: cls.case.name().to_string(),
        verdict: cls.verdict.name().to_string(),
        effect: None,
        level: None,
        n0: None,
        w0: tc.w0,
        x0: cfg.x0,
        grid: GridSummary::from(seed.grid()),
        near_zero_x: None,
    }
}

/// Builds the transformation of `cfg` on `grid`.
pub fn build(cfg: &RunConfig, grid: Grid) -> Result<Built> {
    let seed = cfg.seed_on(grid)?;
    let tc = transform_config(cfg, &seed, &grid)?;
    let cls = classify(&seed, &tc)?;
    let mut summary = summary_of(cfg, &seed, &tc, &cls);
    match ConfluentTransform::new(seed, tc) {
        Ok(t) => {
            let extra = t.created_or_missing_state()?;
            summary.effect = Some(extra.effect.name().to_string());
            summary.level = extra.effect.level();
            summary.n0 = extra.n0;
            Ok(Built::Ok(Box::new(t), summary))
        }
        Err(Error::Singular { x, .. }) => {
            summary.verdict = Verdict::Singular.name().to_string();
            summary.near_zero_x = Some(x);
            Ok(Built::Singular(summary))
        }
        Err(e) => Err(e.into()),
    }
}

fn report_singular(s: &TransformSummary) {
    eprintln!(
        "singular transformation: w vanishes near x = {} (nu = {}, case {})",
        s.near_zero_x.unwrap_or(f64::NAN),
        s.nu,
        s.case
    );
}

/// Columns `x, V, u, w, V_partner` and `psi_tilde` when the partner has a
/// normalizable state at `ε`.
pub fn transform_csv(t: &ConfluentTransform) -> Result<String> {
    let xs: Vec<f64> = t.grid().points().collect();
    let extra = t.created_or_missing_state()?;
    let mut header = vec!["x", "V", "u", "w", "V_partner"];
    let mut columns: Vec<&[f64]> = vec![
        &xs,
        t.seed().potential().values(),
        t.seed().u().values(),
        t.w().values(),
        t.partner().values(),
    ];
    if let Some(state) = extra.state.as_ref() {
        header.push("psi_tilde");
        columns.push(state.values());
        return Ok(csv_string(&header, &columns));
    }
    Ok(csv_string(&header, &columns))
}

pub fn cmd_transform(cfg: &RunConfig) -> Result<i32> {
    let built = build(cfg, cfg.grid)?;
    write_json(&cfg.out_dir, "transform.json", built.summary())?;
    match built {
        Built::Ok(t, summary) => {
            let path = write_text(&cfg.out_dir, "transform.csv", &transform_csv(&t)?)?;
            println!(
                "{} (nu = {}, verdict {}, effect {})",
                path.display(),
                summary.nu,
                summary.verdict,
                summary.effect.as_deref().unwrap_or("-")
            );
            Ok(EXIT_OK)
        }
        Built::Singular(summary) => {
            report_singular(&summary);
            Ok(EXIT_SINGULAR)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelMatchJson {
    pub expected: f64,
    pub computed: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub verdict: String,
    pub reason: Option<String>,
    pub transform: TransformSummary,
    pub expected: Vec<f64>,
    pub computed: Vec<f64>,
    pub matches: Vec<LevelMatchJson>,
    pub missing: Vec<f64>,
    pub extra: Vec<f64>,
    pub max_deviation: Option<f64>,
    pub tol: f64,
    pub threshold: Option<f64>,
    pub widenings: usize,
    pub grid_converged: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    fn refused(summary: TransformSummary, tol: f64) -> Self {
        Self {
            verdict: "fail".into(),
            reason: Some(format!(
                "singular transformation: w vanishes near x = {}",
                summary.near_zero_x.unwrap_or(f64::NAN)
            )),
            transform: summary,
            expected: Vec::new(),
            computed: Vec::new(),
            matches: Vec::new(),
            missing: Vec::new(),
            extra: Vec::new(),
            max_deviation: None,
            tol,
            threshold: None,
            widenings: 0,
            grid_converged: false,
        }
    }
}

fn threshold_of(potential: &Potential) -> Option<f64> {
    potential.continuum_threshold()
}

/// Discrete levels of the original Hamiltonian: closed form where known,
/// otherwise from the eigensolver on the working grid.
fn base_levels(potential: &Potential, v: &confluent_core::numgrid::SampledFunction, count: usize) -> Result<Vec<f64>> {
    match potential.known_spectrum(count) {
        Ok(levels) => Ok(levels),
        Err(Error::NoAnalyticSpectrum) => {
            let op = TridiagonalOperator::discretize(v)?;
            Ok(match threshold_of(potential) {
                Some(t) => op.eigenvalues_below(t, count)?,
                None => op.lowest_eigenvalues(count)?,
            })
        }
        Err(e) => Err(e.into()),
    }
}

/// The partner's predicted levels and the eigensolver's levels for them.
pub fn check_spectrum(
    potential: &Potential,
    t: &ConfluentTransform,
    levels: usize,
    tol: f64,
) -> Result<SpectrumReport> {
    let effect = t.spectral_effect();
    let deleted_index = match t.seed().tag() {
        confluent_core::potentials::SeedTag::BoundState(m) => m,
        _ => 0,
    };
    let base = base_levels(potential, t.seed().potential(), levels + deleted_index + 2)?;
    let threshold = threshold_of(potential);
    let mut expected: Vec<f64> = effect
        .apply(&base)
        .into_iter()
        .filter(|e| threshold.is_none_or(|th| *e < th))
        .collect();
    expected.truncate(levels);
    let op = TridiagonalOperator::discretize(t.partner())?;
    let computed = match threshold {
        Some(th) => op.eigenvalues_below(th, expected.len() + 2)?,
        None => op.lowest_eigenvalues((expected.len() + 1).min(op.dim()))?,
    };
    Ok(compare_spectra(&expected, &computed, tol, threshold)?)
}

fn top_level(report: &SpectrumReport) -> Option<f64> {
    report.matches.iter().map(|m| report.computed[m.computed]).reduce(f64::max)
}

/// Grid enlarged by 20% with the same spacing, keeping `x₀` on a grid point.
pub fn widen(grid: &Grid) -> Result<Grid> {
    let h = grid.h();
    let extra = (0.1 * (grid.xmax() - grid.xmin()) / h).ceil() as usize;
    let pad = extra as f64 * h;
    Ok(Grid::new(grid.xmin() - pad, grid.xmax() + pad, grid.len() + 2 * extra)?)
}

pub fn verify(cfg: &RunConfig, levels: usize, allow_widen: bool) -> Result<VerifyReport> {
    let can_widen = allow_widen && !matches!(cfg.potential, Potential::Custom(_));
    let mut grid = cfg.grid;
    let mut widenings = 0;
    let mut previous: Option<f64> = None;
    loop {
        let (t, summary) = match build(cfg, grid)? {
            Built::Ok(t, s) => (t, s),
            Built::Singular(s) => return Ok(VerifyReport::refused(s, cfg.spectrum_tol)),
        };
        let report = check_spectrum(&cfg.potential, &t, levels, cfg.spectrum_tol)?;
        let top = top_level(&report);
        let converged = match (previous, top) {
            (_, None) => true,
            (Some(p), Some(q)) => (p - q).abs() < WIDEN_TOL,
            (None, Some(_)) => false,
        };
        if !can_widen || converged || widenings == MAX_WIDENINGS {
            return Ok(VerifyReport {
                verdict: if report.pass { "pass" } else { "fail" }.into(),
                reason: (!report.pass).then(|| "computed spectrum differs from the predicted one".to_string()),
                transform: summary,
                matches: report
                    .matches
                    .iter()
                    .map(|m| LevelMatchJson {
                        expected: report.expected[m.expected],
                        computed: report.computed[m.computed],
                        abs_error: m.abs_error,
                    })
                    .collect(),
                expected: report.expected,
                computed: report.computed,
                missing: report.missing,
                extra: report.extra,
                max_deviation: Some(report.max_deviation),
                tol: report.tol,
                threshold: threshold_of(&cfg.potential),
                widenings,
                grid_converged: converged,
            });
        }
        previous = top;
        grid = widen(&grid)?;
        widenings += 1;
    }
}

pub fn cmd_verify(cfg: &RunConfig, levels: usize, allow_widen: bool) -> Result<i32> {
    if levels == 0 {
        bail!("--levels must be at least 1");
    }
    let report = verify(cfg, levels, allow_widen)?;
    let path = write_json(&cfg.out_dir, "verify.json", &report)?;
    println!("{}: {}", path.display(), report.verdict);
    if report.transform.verdict == Verdict::Singular.name() {
        report_singular(&report.transform);
        return Ok(EXIT_SINGULAR);
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
}

pub fn scan_rows(base: &BaseConfig, nus: &[f64]) -> Result<Vec<ScanRow>> {
    let seed = crate::config::make_seed(&base.potential, base.seed, base.grid)?;
    let i0 = x0_index(&base.grid, base.x0)?;
    Ok(scan_nu(&seed, i0, nus)?)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("nu,case,verdict,min_abs_w,effect\n");
    for r in rows {
        let effect = r.effect.as_ref().map_or("none", SpectralEffect::name);
        out.push_str(&format!(
            "{:.16e},{},{},{:.16e},{}\n",
            r.nu,
            r.case.name(),
            r.verdict.name(),
            r.min_abs_w,
            effect
        ));
    }
    out
}

pub fn cmd_scan_nu(base: &BaseConfig, nus: &[f64], out_dir: &Path) -> Result<i32> {
    let rows = scan_rows(base, nus)?;
    let text = scan_csv(&rows);
    write_text(out_dir, "scan.csv", &text)?;
    print!("{text}");
    Ok(EXIT_OK)
}

/// Fixed parameters of the two reference figures.
pub fn figure_config(name: &str, out_dir: &Path, singular_tol: f64, spectrum_tol: f64) -> Result<RunConfig> {
    let grid = Grid::new(-10.0, 10.0, 2001)?;
    let (seed, offset) = match name {
        "fig1" => (SeedMode::BoundState(3), Offset::Nu(-1.25)),
        "fig2" => (
            SeedMode::Vanishing {
                epsilon: 8.0,
                side: Side::Left,
            },
            Offset::W0(-5.0),
        ),
        other => bail!("unknown figure '{other}' (expected fig1 or fig2)"),
    };
    Ok(RunConfig {
        potential: Potential::HarmonicOscillator,
        seed,
        offset,
        grid,
        x0: 0.0,
        out_dir: out_dir.to_path_buf(),
        singular_tol,
        spectrum_tol,
    })
}

pub fn cmd_figure(name: &str, out_dir: &Path, singular_tol: f64, spectrum_tol: f64) -> Result<i32> {
    let cfg = figure_config(name, out_dir, singular_tol, spectrum_tol)?;
    let t = match build(&cfg, cfg.grid)? {
        Built::Ok(t, _) => t,
        Built::Singular(s) => {
            report_singular(&s);
            return Ok(EXIT_SINGULAR);
        }
    };
    let xs: Vec<f64> = t.grid().points().collect();
    let csv = csv_string(&["x", "V", "V_partner"], &[&xs, t.seed().potential().values(), t.partner().values()]);
    let csv_path = write_text(out_dir, &format!("{name}.csv"), &csv)?;
    let report = verify(&cfg, 6, false)?;
    let json_path = write_json(out_dir, &format!("{name}.json"), &report)?;
    println!("{} {}: {}", csv_path.display(), json_path.display(), report.verdict);
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
}
