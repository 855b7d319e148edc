use std::path::Path;

use anyhow::{bail, Context};
use serde::Deserialize;

use annulus_bvp::certify::{EigenWindowInput, RatioWindowInput, Window};
use annulus_bvp::reduction::{reduce, AnnularProblem, ReducedBvp};
use annulus_bvp::solver::{PicardConfig, ShootingConfig, SolveMethod};

use crate::InputError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Annulus,
    Interval,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub m: Option<f64>,
    #[serde(rename = "M")]
    pub big_m: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub method: Option<String>,
    pub grid_n: Option<usize>,
    pub damping: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub steps: Option<usize>,
    pub slope_range: Option<(f64, f64)>,
    pub n_scan: Option<usize>,
}

/// One JSON problem file. Which fields are required depends on `mode` and
/// on the command reading it.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub description: Option<String>,
    pub mode: Mode,
    #[serde(rename = "N")]
    pub dim: Option<u32>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub h: Option<String>,
    pub q: Option<String>,
    pub f: Option<String>,
    pub lambda: Option<f64>,
    pub lambdas: Option<Vec<f64>>,
    pub window: Option<String>,
    #[serde(rename = "R")]
    pub big_r: Option<f64>,
    pub r: Option<f64>,
    pub u_min: Option<f64>,
    #[serde(default)]
    pub overrides: Overrides,
    pub b: Option<String>,
    pub c: Option<f64>,
    pub delta: Option<f64>,
    #[serde(default)]
    pub solver: SolverSection,
}

fn input(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

impl Problem {
    pub fn load(path: &Path) -> anyhow::Result<Problem> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
        let problem: Problem =
            serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
        problem.validate()?;
        Ok(problem)
    }

    fn validate(&self) -> anyhow::Result<()> {
        match self.mode {
            Mode::Annulus => {
                for (name, present) in [("N", self.dim.is_some()), ("r1", self.r1.is_some()), ("r2", self.r2.is_some()), ("h", self.h.is_some())] {
                    if !present {
                        return Err(input(format!("annulus mode requires `{name}`")));
                    }
                }
                for (name, present) in [("q", self.q.is_some()), ("f", self.f.is_some())] {
                    if present {
                        return Err(input(format!("`{name}` is derived in annulus mode; give `h` instead")));
                    }
                }
            }
            Mode::Interval => {
                if self.f.is_none() {
                    return Err(input("interval mode requires `f`"));
                }
                for (name, present) in [("N", self.dim.is_some()), ("r1", self.r1.is_some()), ("r2", self.r2.is_some()), ("h", self.h.is_some())] {
                    if present {
                        return Err(input(format!("`{name}` only applies in annulus mode")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn annulus(&self) -> anyhow::Result<Option<AnnularProblem>> {
        match self.mode {
            Mode::Interval => Ok(None),
            Mode::Annulus => {
                let p = AnnularProblem::parse(
                    self.dim.expect("validated"),
                    self.r1.expect("validated"),
                    self.r2.expect("validated"),
                    self.h.as_deref().expect("validated"),
                )
                .map_err(|e| input(e.to_string()))?;
                Ok(Some(p))
            }
        }
    }

    pub fn bvp(&self) -> anyhow::Result<ReducedBvp> {
        let bvp = match self.annulus()? {
            Some(p) => reduce(&p),
            None => ReducedBvp::parse(self.q.as_deref().unwrap_or("1"), self.f.as_deref().expect("validated")),
        };
        bvp.map_err(|e| input(e.to_string()))
    }

    pub fn lambda(&self, flag: Option<f64>) -> anyhow::Result<f64> {
        flag.or(self.lambda).ok_or_else(|| input("no lambda: pass --lambda or set `lambda` in the file"))
    }

    pub fn window(&self, flag: Option<&str>) -> anyhow::Result<Window> {
        let name = flag.or(self.window.as_deref()).ok_or_else(|| {
            let names: Vec<_> = Window::ALL.iter().map(|w| w.name()).collect();
            input(format!("no window: pass --window or set `window` (one of {})", names.join(", ")))
        })?;
        name.parse().map_err(|e: annulus_bvp::Error| input(e.to_string()))
    }

    pub fn method(&self, flag: Option<&str>) -> anyhow::Result<SolveMethod> {
        match flag.or(self.solver.method.as_deref()).unwrap_or("picard") {
            "picard" => Ok(SolveMethod::Picard),
            "shoot" => Ok(SolveMethod::Shooting),
            other => Err(input(format!("unknown method `{other}` (expected picard or shoot)"))),
        }
    }

    pub fn picard(&self) -> PicardConfig {
        let d = PicardConfig::default();
        let s = &self.solver;
        PicardConfig {
            grid_n: s.grid_n.unwrap_or(d.grid_n),
            damping: s.damping.unwrap_or(d.damping),
            tol: s.tol.unwrap_or(d.tol),
            max_iter: s.max_iter.unwrap_or(d.max_iter),
        }
    }

    pub fn shooting(&self) -> ShootingConfig {
        let d = ShootingConfig::default();
        let s = &self.solver;
        ShootingConfig {
            steps: s.steps.unwrap_or(d.steps),
            slope_range: s.slope_range.unwrap_or(d.slope_range),
            n_scan: s.n_scan.unwrap_or(d.n_scan),
            tol: s.tol.unwrap_or(d.tol),
            ..d
        }
    }

    /// Radius for a ratio window: `R` for small-norm, `r` for large-norm.
    pub fn ratio_input(&self, window: Window) -> anyhow::Result<RatioWindowInput> {
        let (name, radius, over_name, over) = match window {
            Window::SmallNormLargeLambda => ("R", self.big_r, "m", self.overrides.m),
            Window::SmallNormSmallLambda => ("R", self.big_r, "M", self.overrides.big_m),
            Window::LargeNormLargeLambda => ("r", self.r, "m", self.overrides.m),
            Window::LargeNormSmallLambda => ("r", self.r, "M", self.overrides.big_m),
            _ => bail!("{window} is not a ratio window"),
        };
        let radius = radius.ok_or_else(|| input(format!("window {window} requires `{name}`")))?;
        let wrong = if over_name == "m" { self.overrides.big_m.is_some() } else { self.overrides.m.is_some() };
        if wrong {
            return Err(input(format!("window {window} takes an override for `{over_name}` only")));
        }
        Ok(RatioWindowInput { ratio_override: over, u_min: self.u_min, ..RatioWindowInput::new(radius) })
    }

    pub fn eigen_input(&self) -> anyhow::Result<EigenWindowInput> {
        let need = |name: &str, v: Option<f64>| v.ok_or_else(|| input(format!("eigen windows require `{name}`")));
        EigenWindowInput::new(self.b.as_deref().unwrap_or("1"), need("c", self.c)?, need("delta", self.delta)?, need("R", self.big_r)?)
            .map_err(|e| input(e.to_string()))
    }
}

pub fn load(path: &Path) -> anyhow::Result<Problem> {
    Problem::load(path).with_context(|| format!("loading problem {}", path.display()))
}
