use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use confluent_core::numgrid::Grid;
use confluent_core::potentials::{Potential, SeedSolution, Side};

use crate::args::{GridArgs, PotentialArgs, PotentialKind, SeedArgs, ToleranceArgs, TransformArgs, VanishSide};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedMode {
    BoundState(usize),
    Vanishing { epsilon: f64, side: Side },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Offset {
    W0(f64),
    Nu(f64),
}

/// Everything a single run needs, with defaults filled in.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: Potential,
    pub seed: SeedMode,
    pub offset: Offset,
    pub grid: Grid,
    pub x0: f64,
    pub out_dir: PathBuf,
    pub singular_tol: f64,
    pub spectrum_tol: f64,
}

impl RunConfig {
    pub fn from_args(args: &TransformArgs) -> Result<Self> {
        let offset = match (args.offset.w0, args.offset.nu) {
            (Some(w0), None) => Offset::W0(w0),
            (None, Some(nu)) => Offset::Nu(nu),
            _ => bail!("exactly one of --w0 and --nu is required"),
        };
        let base = BaseConfig::from_parts(&args.potential, &args.seed, &args.grid, &args.tolerances)?;
        Ok(base.with_offset(offset, args.out_dir.clone()))
    }

    pub fn x0_index(&self) -> Result<usize> {
        x0_index(&self.grid, self.x0)
    }

    pub fn seed_on(&self, grid: Grid) -> Result<SeedSolution> {
        make_seed(&self.potential, self.seed, grid)
    }

    /// The same run on a different grid.
    pub fn with_grid(&self, grid: Grid) -> Self {
        Self { grid, ..self.clone() }
    }
}

/// A run configuration without `w₀`/`ν`, as used by the ν scan.
#[derive(Debug, Clone)]
pub struct BaseConfig {
    pub potential: Potential,
    pub seed: SeedMode,
    pub grid: Grid,
    pub x0: f64,
    pub singular_tol: f64,
    pub spectrum_tol: f64,
}

impl BaseConfig {
    pub fn from_parts(p: &PotentialArgs, s: &SeedArgs, g: &GridArgs, tol: &ToleranceArgs) -> Result<Self> {
        let potential = match p.potential {
            PotentialKind::Free => Potential::FreeParticle,
            PotentialKind::PoschlTeller => Potential::poschl_teller(p.k0)?,
            PotentialKind::Oscillator => Potential::HarmonicOscillator,
            PotentialKind::Custom => {
                let path = p
                    .potential_file
                    .as_ref()
                    .ok_or_else(|| anyhow!("--potential custom needs --potential-file"))?;
                Potential::from_file(path).with_context(|| format!("reading {}", path.display()))?
            }
        };
        let seed = match (s.bound_state, s.epsilon, s.vanish) {
            (Some(m), None, None) => SeedMode::BoundState(m),
            (None, Some(epsilon), Some(side)) => SeedMode::Vanishing {
                epsilon,
                side: match side {
                    VanishSide::Left => Side::Left,
                    VanishSide::Right => Side::Right,
                },
            },
            _ => bail!("give either --bound-state or both --epsilon and --vanish"),
        };
        let grid = match (&potential, g.grid) {
            (Potential::Custom(table), Some(spec)) => {
                let requested = Grid::new(spec.xmin, spec.xmax, spec.n)?;
                if requested != *table.grid() {
                    bail!("--grid does not match the grid of the potential file");
                }
                requested
            }
            (Potential::Custom(table), None) => *table.grid(),
            (_, Some(spec)) => Grid::new(spec.xmin, spec.xmax, spec.n)?,
            (_, None) => default_grid(&potential, seed)?,
        };
        if !(tol.singular_tol > 0.0) || !(tol.spectrum_tol > 0.0) {
            bail!("tolerances must be positive");
        }
        x0_index(&grid, g.x0)?;
        Ok(Self {
            potential,
            seed,
            grid,
            x0: g.x0,
            singular_tol: tol.singular_tol,
            spectrum_tol: tol.spectrum_tol,
        })
    }

    pub fn with_offset(self, offset: Offset, out_dir: PathBuf) -> RunConfig {
        RunConfig {
            potential: self.potential,
            seed: self.seed,
            offset,
            grid: self.grid,
            x0: self.x0,
            out_dir,
            singular_tol: self.singular_tol,
            spectrum_tol: self.spectrum_tol,
        }
    }
}

/// Oscillator `[−8, 8]`, Pöschl-Teller `[−15/k₀, 15/k₀]`, free particle
/// `[−12/k, 12/k]` with `ε = −k²`.
pub fn default_grid(potential: &Potential, seed: SeedMode) -> Result<Grid> {
    Ok(match potential {
        Potential::HarmonicOscillator => Grid::new(-8.0, 8.0, 1601)?,
        Potential::PoschlTeller { k0 } => Grid::new(-15.0 / k0, 15.0 / k0, 3001)?,
        Potential::FreeParticle => {
            let epsilon = match seed {
                SeedMode::Vanishing { epsilon, .. } if epsilon < 0.0 => epsilon,
                SeedMode::Vanishing { .. } => bail!("the free particle needs a negative --epsilon"),
                SeedMode::BoundState(_) => bail!("the free particle has no bound states"),
            };
            let k = (-epsilon).sqrt();
            Grid::new(-12.0 / k, 12.0 / k, 2401)?
        }
        Potential::Custom(table) => *table.grid(),
    })
}

pub fn x0_index(grid: &Grid, x0: f64) -> Result<usize> {
    grid.index_of(x0)
        .ok_or_else(|| anyhow!("x0 = {x0} is not a grid point of [{}, {}] with h = {}", grid.xmin(), grid.xmax(), grid.h()))
}

pub fn make_seed(potential: &Potential, seed: SeedMode, grid: Grid) -> Result<SeedSolution> {
    Ok(match seed {
        SeedMode::BoundState(m) => potential.bound_state(m, grid)?,
        SeedMode::Vanishing { epsilon, side } => potential.seed_solution(epsilon, side, grid)?,
    })
}
