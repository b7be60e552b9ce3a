//! Maximum-likelihood estimation for every family.
//!
//! One-parameter families are fitted by a coarse scan of the search box
//! followed by Brent refinement inside the best scan cell. The power law
//! with cutoff gets a `(β, γ)` grid with `γ` log-spaced, then Nelder-Mead
//! from the three best cells in `(β, ln γ)` coordinates. There is no
//! closed-form shortcut for any family, so truncated supports go through
//! the same code as full ones.

mod optimize;

use alloc::format;
use alloc::vec::Vec;

use crate::dataset::CountSample;
use crate::distributions::{Density, Family, ModelSpec, Params};
use crate::error::{Error, Result};
use crate::special::{self, CompensatedSum};

/// Search box for `α` and `β`.
pub const EXPONENT_BOX: (f64, f64) = (1.001, 10.0);
/// Lower bound for `β` once `γ` exceeds [`RELAXED_BETA_GAMMA`].
pub const RELAXED_BETA_MIN: f64 = 0.5;
pub const RELAXED_BETA_GAMMA: f64 = 0.01;
/// `γ` range of the coarse grid.
pub const GAMMA_GRID_BOX: (f64, f64) = (1e-6, 10.0);
/// Smallest `γ` the simplex refinement may reach; lets the cutoff model
/// approach its power-law boundary closely enough that the nested model
/// never fits better.
pub const GAMMA_FLOOR: f64 = 1e-12;
pub const RHO_BOX: (f64, f64) = (1.001, 20.0);
pub const LAMBDA_BOX: (f64, f64) = (1e-6, 10.0);
/// Parameter tolerance of every search.
pub const PARAM_TOL: f64 = 1e-6;

const SCAN_POINTS: usize = 48;
const BETA_GRID: usize = 20;
const GAMMA_GRID: usize = 29;
const RESTARTS: usize = 3;
const BRENT_MAX_ITER: usize = 200;
const SIMPLEX_MAX_ITER: usize = 3000;

/// A fitted model and how the search went.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub spec: ModelSpec,
    pub log_likelihood: f64,
    /// Objective evaluations spent.
    pub iterations: usize,
    /// False when an iteration cap was hit before the tolerance was met.
    pub converged: bool,
    /// Scalar fits: final Brent bracket `[lo, hi]`. Cutoff fits: final
    /// simplex spread in `β` and `γ`.
    pub diagnostics: Vec<f64>,
}

/// One evaluated point of a search.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub params: Vec<f64>,
    pub log_likelihood: f64,
}

/// `Σ_i ln pmf(n_i)`, one pmf evaluation per distinct count.
pub fn loglik(spec: &ModelSpec, data: &CountSample) -> Result<f64> {
    if data.min_value() < spec.n_min() {
        return Err(Error::domain(format!(
            "data value {} lies below the support start {}",
            data.min_value(),
            spec.n_min()
        )));
    }
    let density = Density::new(spec)?;
    let mut acc = CompensatedSum::default();
    for (value, mult) in data.iter() {
        acc.add(mult as f64 * density.log_pmf(value)?);
    }
    Ok(acc.value())
}

/// Maximum-likelihood fit of `family` on the support `n >= n_min`.
pub fn fit(family: Family, data: &CountSample, n_min: u64) -> Result<FitResult> {
    fit_inner(family, data, n_min, None)
}

/// [`fit`] that also returns every point evaluated during the search.
pub fn fit_traced(family: Family, data: &CountSample, n_min: u64) -> Result<(FitResult, Vec<Probe>)> {
    let mut probes = Vec::new();
    let result = fit_inner(family, data, n_min, Some(&mut probes))?;
    Ok((result, probes))
}

fn fit_inner(family: Family, data: &CountSample, n_min: u64, trace: Option<&mut Vec<Probe>>) -> Result<FitResult> {
    if n_min < 1 {
        return Err(Error::domain("n_min must be at least 1"));
    }
    if data.min_value() < n_min {
        return Err(Error::domain(format!(
            "'{}' has counts below n_min = {n_min}; truncate first",
            data.label()
        )));
    }
    let objective = Objective::new(family, data, n_min);
    let mut search = Search { objective: &objective, trace, evaluations: 0 };
    let (params, converged, diagnostics) = match family {
        Family::PowerLaw => search.scalar(EXPONENT_BOX, Scale::AboveOne)?,
        Family::YuleSimon => search.scalar(RHO_BOX, Scale::AboveOne)?,
        Family::Exponential => search.scalar(LAMBDA_BOX, Scale::Log)?,
        Family::PowerLawCutoff => {
            if data.distinct() == 1 && data.min_value() == n_min {
                return Err(Error::DegenerateData(format!(
                    "every count in '{}' equals n_min = {n_min}; the cutoff likelihood increases without bound in gamma",
                    data.label()
                )));
            }
            search.cutoff()?
        }
    };
    let iterations = search.evaluations;
    let spec = ModelSpec::from_slice(family, &params, n_min)?;
    let log_likelihood = loglik(&spec, data)?;
    Ok(FitResult { spec, log_likelihood, iterations, converged, diagnostics })
}

/// Log-likelihood as a function of the parameters, via sufficient statistics.
struct Objective {
    family: Family,
    n_min: u64,
    total: f64,
    sum_log: f64,
    sum_value: f64,
    distinct: Vec<(f64, f64)>,
}

impl Objective {
    fn new(family: Family, data: &CountSample, n_min: u64) -> Self {
        let mut sum_log = CompensatedSum::default();
        let mut sum_value = CompensatedSum::default();
        let mut distinct = Vec::with_capacity(data.distinct());
        for (v, m) in data.iter() {
            let (v, m) = (v as f64, m as f64);
            sum_log.add(m * libm::log(v));
            sum_value.add(m * v);
            distinct.push((v, m));
        }
        Objective {
            family,
            n_min,
            total: data.total() as f64,
            sum_log: sum_log.value(),
            sum_value: sum_value.value(),
            distinct,
        }
    }

    /// Log-likelihood; `-∞` for parameters outside the family's domain.
    fn eval(&self, params: &[f64]) -> Result<f64> {
        let Ok(spec) = ModelSpec::from_slice(self.family, params, self.n_min) else {
            return Ok(f64::NEG_INFINITY);
        };
        let log_z = crate::distributions::log_normalizer(&spec)?;
        let n = self.total;
        Ok(match spec.params() {
            Params::PowerLaw { alpha } => -alpha * self.sum_log - n * log_z,
            Params::PowerLawCutoff { beta, gamma } => -beta * self.sum_log - gamma * self.sum_value - n * log_z,
            Params::YuleSimon { rho } => {
                let mut acc = CompensatedSum::default();
                for &(v, m) in &self.distinct {
                    acc.add(m * special::log_beta_unchecked(v, rho));
                }
                n * libm::log(rho - 1.0) + acc.value() - n * log_z
            }
            Params::Exponential { lambda } => -lambda * self.sum_value - n * log_z,
        })
    }
}

#[derive(Clone, Copy)]
enum Scale {
    /// Log-spaced in `x - 1`.
    AboveOne,
    /// Log-spaced in `x`.
    Log,
}

impl Scale {
    fn to_grid(self, x: f64) -> f64 {
        match self {
            Scale::AboveOne => libm::log(x - 1.0),
            Scale::Log => libm::log(x),
        }
    }

    fn from_grid(self, t: f64) -> f64 {
        match self {
            Scale::AboveOne => 1.0 + libm::exp(t),
            Scale::Log => libm::exp(t),
        }
    }
}

struct Search<'a> {
    objective: &'a Objective,
    trace: Option<&'a mut Vec<Probe>>,
    evaluations: usize,
}

impl Search<'_> {
    fn eval(&mut self, params: &[f64]) -> Result<f64> {
        let value = self.objective.eval(params)?;
        self.evaluations += 1;
        if let Some(trace) = self.trace.as_deref_mut() {
            trace.push(Probe { params: params.to_vec(), log_likelihood: value });
        }
        Ok(value)
    }

    fn scalar(&mut self, (lo, hi): (f64, f64), scale: Scale) -> Result<(Vec<f64>, bool, Vec<f64>)> {
        let (t_lo, t_hi) = (scale.to_grid(lo), scale.to_grid(hi));
        let grid: Vec<f64> = (0..SCAN_POINTS)
            .map(|i| match i {
                0 => lo,
                i if i == SCAN_POINTS - 1 => hi,
                i => scale.from_grid(t_lo + (t_hi - t_lo) * i as f64 / (SCAN_POINTS - 1) as f64),
            })
            .collect();
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (i, &x) in grid.iter().enumerate() {
            let v = self.eval(&[x])?;
            // Strict: the smallest parameter wins ties.
            if v > best_val {
                best = i;
                best_val = v;
            }
        }
        let a = grid[best.saturating_sub(1)];
        let b = grid[(best + 1).min(SCAN_POINTS - 1)];
        let r = optimize::brent(a, b, grid[best], PARAM_TOL, BRENT_MAX_ITER, |x| Ok(-self.eval(&[x])?))?;
        let (x, _) = if -r.fx > best_val { (r.x, -r.fx) } else { (grid[best], best_val) };
        Ok((alloc::vec![x], r.converged, alloc::vec![a.max(r.x - r.width), b.min(r.x + r.width)]))
    }

    fn cutoff(&mut self) -> Result<(Vec<f64>, bool, Vec<f64>)> {
        let (b_lo, b_hi) = (RELAXED_BETA_MIN, EXPONENT_BOX.1);
        let (g_lo, g_hi) = (libm::log(GAMMA_GRID_BOX.0), libm::log(GAMMA_GRID_BOX.1));
        let mut cells: Vec<([f64; 2], f64)> = Vec::with_capacity(BETA_GRID * GAMMA_GRID);
        for i in 0..BETA_GRID {
            let beta = b_lo + (b_hi - b_lo) * i as f64 / (BETA_GRID - 1) as f64;
            for j in 0..GAMMA_GRID {
                let log_gamma = g_lo + (g_hi - g_lo) * j as f64 / (GAMMA_GRID - 1) as f64;
                if !cutoff_feasible(beta, libm::exp(log_gamma)) {
                    continue;
                }
                let v = self.eval(&[beta, libm::exp(log_gamma)])?;
                cells.push(([beta, log_gamma], v));
            }
        }
        // Stable sort keeps grid order (smaller β, then smaller γ) among ties.
        cells.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(core::cmp::Ordering::Equal));

        let steps = [
            (b_hi - b_lo) / (BETA_GRID - 1) as f64,
            (g_hi - g_lo) / (GAMMA_GRID - 1) as f64,
        ];
        let mut best: Option<([f64; 2], f64, bool, [f64; 2])> = None;
        for &(start, start_val) in cells.iter().take(RESTARTS) {
            let (x, fx, converged, spread) = self.refine(start, steps)?;
            let (x, fx) = if fx >= start_val { (x, fx) } else { (start, start_val) };
            let better = match &best {
                None => true,
                Some((bx, bf, _, _)) => fx > *bf || (fx == *bf && (x[0], x[1]) < (bx[0], bx[1])),
            };
            if better {
                best = Some((x, fx, converged, spread));
            }
        }
        let (x, _, converged, spread) = best.ok_or_else(|| Error::domain("empty cutoff search grid"))?;
        Ok((alloc::vec![x[0], libm::exp(x[1])], converged, alloc::vec![spread[0], spread[1]]))
    }

    /// Simplex refinement in `(β, ln γ)` with one restart from the optimum.
    fn refine(&mut self, start: [f64; 2], steps: [f64; 2]) -> Result<([f64; 2], f64, bool, [f64; 2])> {
        let done = |best: [f64; 2], spread: [f64; 2]| {
            let gamma = libm::exp(best[1]);
            spread[0] <= PARAM_TOL && gamma * libm::expm1(spread[1]) <= PARAM_TOL
        };
        let mut objective = |p: [f64; 2]| -> Result<f64> {
            let gamma = libm::exp(p[1]);
            if !cutoff_feasible(p[0], gamma) {
                return Ok(f64::INFINITY);
            }
            Ok(-self.eval(&[p[0], gamma])?)
        };
        let first = optimize::nelder_mead(start, steps, SIMPLEX_MAX_ITER, &mut objective, done)?;
        let polish = optimize::nelder_mead(
            first.x,
            [steps[0] * 0.05, steps[1] * 0.05],
            SIMPLEX_MAX_ITER,
            &mut objective,
            done,
        )?;
        let pick = if polish.fx <= first.fx { polish } else { first };
        Ok((pick.x, -pick.fx, first.converged && polish.converged, pick.spread))
    }
}

fn cutoff_feasible(beta: f64, gamma: f64) -> bool {
    let beta_min = if gamma > RELAXED_BETA_GAMMA { RELAXED_BETA_MIN } else { EXPONENT_BOX.0 };
    beta >= beta_min && beta <= EXPONENT_BOX.1 && (GAMMA_FLOOR..=GAMMA_GRID_BOX.1).contains(&gamma)
}
