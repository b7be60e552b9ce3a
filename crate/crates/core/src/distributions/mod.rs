//! Discrete count distributions on `{n_min, n_min + 1, ...}`.
//!
//! | family | unnormalized term | parameters |
//! |--------|-------------------|------------|
//! | power law | `n^{-α}` | `α > 1` |
//! | power law with cutoff | `n^{-β} e^{-γn}` | `γ > 0` |
//! | Yule-Simon | `(ρ-1) B(n, ρ)` | `ρ > 1` |
//! | exponential | `e^{-λn}` | `λ > 0` |
//!
//! Every model is renormalized over its own support, so a truncated corpus
//! (authors below some count discarded) is described by the same family
//! with a larger `n_min`. All arithmetic is done on logs.

mod series;

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::special;

pub use crate::special::log_beta;

/// The four model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    PowerLaw,
    PowerLawCutoff,
    YuleSimon,
    Exponential,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::PowerLaw,
        Family::PowerLawCutoff,
        Family::YuleSimon,
        Family::Exponential,
    ];

    /// The heavy-tailed families that are goodness-of-fit tested.
    pub const GOF: [Family; 3] = [Family::PowerLaw, Family::PowerLawCutoff, Family::YuleSimon];

    /// Short identifier used in file formats and on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            Family::PowerLaw => "pl",
            Family::PowerLawCutoff => "plwc",
            Family::YuleSimon => "ys",
            Family::Exponential => "exp",
        }
    }

    /// Names of the parameters, in the order of [`ModelSpec::params`].
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::PowerLaw => &["alpha"],
            Family::PowerLawCutoff => &["beta", "gamma"],
            Family::YuleSimon => &["rho"],
            Family::Exponential => &["lambda"],
        }
    }

    pub fn num_params(self) -> usize {
        self.param_names().len()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::PowerLaw => "power law",
            Family::PowerLawCutoff => "power law with cutoff",
            Family::YuleSimon => "Yule-Simon",
            Family::Exponential => "exponential",
        };
        f.write_str(name)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pl" | "power-law" | "powerlaw" => Ok(Family::PowerLaw),
            "plwc" | "power-law-cutoff" | "cutoff" => Ok(Family::PowerLawCutoff),
            "ys" | "yule-simon" | "yule" => Ok(Family::YuleSimon),
            "exp" | "exponential" | "geometric" => Ok(Family::Exponential),
            _ => Err(Error::domain(format!("unknown family '{s}'"))),
        }
    }
}

/// Family-specific parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    PowerLaw { alpha: f64 },
    PowerLawCutoff { beta: f64, gamma: f64 },
    YuleSimon { rho: f64 },
    Exponential { lambda: f64 },
}

/// A validated model: family, parameters and support lower bound.
///
/// Immutable once built; every constructor checks the family's parameter
/// constraints so downstream code never sees an unnormalizable model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    params: Params,
    n_min: u64,
}

impl ModelSpec {
    pub fn new(params: Params, n_min: u64) -> Result<Self> {
        if n_min < 1 {
            return Err(Error::domain("support lower bound n_min must be at least 1"));
        }
        let ok = match params {
            Params::PowerLaw { alpha } => alpha.is_finite() && alpha > 1.0,
            Params::PowerLawCutoff { beta, gamma } => beta.is_finite() && gamma.is_finite() && gamma > 0.0,
            Params::YuleSimon { rho } => rho.is_finite() && rho > 1.0,
            Params::Exponential { lambda } => lambda.is_finite() && lambda > 0.0,
        };
        if !ok {
            return Err(Error::domain(format!("invalid parameters {params:?}")));
        }
        Ok(ModelSpec { params, n_min })
    }

    pub fn power_law(alpha: f64, n_min: u64) -> Result<Self> {
        Self::new(Params::PowerLaw { alpha }, n_min)
    }

    pub fn power_law_cutoff(beta: f64, gamma: f64, n_min: u64) -> Result<Self> {
        Self::new(Params::PowerLawCutoff { beta, gamma }, n_min)
    }

    pub fn yule_simon(rho: f64, n_min: u64) -> Result<Self> {
        Self::new(Params::YuleSimon { rho }, n_min)
    }

    pub fn exponential(lambda: f64, n_min: u64) -> Result<Self> {
        Self::new(Params::Exponential { lambda }, n_min)
    }

    /// Builds a spec from a parameter slice ordered as [`Family::param_names`].
    pub fn from_slice(family: Family, values: &[f64], n_min: u64) -> Result<Self> {
        if values.len() != family.num_params() {
            return Err(Error::domain(format!(
                "{family} takes {} parameter(s), got {}",
                family.num_params(),
                values.len()
            )));
        }
        let params = match family {
            Family::PowerLaw => Params::PowerLaw { alpha: values[0] },
            Family::PowerLawCutoff => Params::PowerLawCutoff { beta: values[0], gamma: values[1] },
            Family::YuleSimon => Params::YuleSimon { rho: values[0] },
            Family::Exponential => Params::Exponential { lambda: values[0] },
        };
        Self::new(params, n_min)
    }

    pub fn family(&self) -> Family {
        match self.params {
            Params::PowerLaw { .. } => Family::PowerLaw,
            Params::PowerLawCutoff { .. } => Family::PowerLawCutoff,
            Params::YuleSimon { .. } => Family::YuleSimon,
            Params::Exponential { .. } => Family::Exponential,
        }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn param_vec(&self) -> Vec<f64> {
        match self.params {
            Params::PowerLaw { alpha } => alloc::vec![alpha],
            Params::PowerLawCutoff { beta, gamma } => alloc::vec![beta, gamma],
            Params::YuleSimon { rho } => alloc::vec![rho],
            Params::Exponential { lambda } => alloc::vec![lambda],
        }
    }

    pub fn n_min(&self) -> u64 {
        self.n_min
    }

    /// Same parameters on a different support.
    pub fn with_n_min(&self, n_min: u64) -> Result<Self> {
        Self::new(self.params, n_min)
    }

    /// Log of the unnormalized term at `n >= 1`.
    pub(crate) fn log_term(&self, n: u64) -> f64 {
        let x = n as f64;
        match self.params {
            Params::PowerLaw { alpha } => -alpha * libm::log(x),
            Params::PowerLawCutoff { beta, gamma } => -beta * libm::log(x) - gamma * x,
            Params::YuleSimon { rho } => libm::log(rho - 1.0) + special::log_beta_unchecked(x, rho),
            Params::Exponential { lambda } => -lambda * x,
        }
    }

    /// `ln Σ_{n >= m} term(n)` for any `m >= 1`, independent of `n_min`.
    pub(crate) fn log_tail(&self, m: u64) -> Result<f64> {
        let m = m.max(1);
        match self.params {
            Params::PowerLaw { alpha } => series::ln_tail(Family::PowerLaw, alpha, 0.0, m),
            Params::PowerLawCutoff { beta, gamma } => series::ln_tail(Family::PowerLawCutoff, beta, gamma, m),
            // Σ_{n >= m} (ρ-1) B(n, ρ) = (m-1) B(m-1, ρ), and 1 at m = 1.
            Params::YuleSimon { rho } => Ok(if m == 1 {
                0.0
            } else {
                let k = (m - 1) as f64;
                libm::log(k) + special::log_beta_unchecked(k, rho)
            }),
            Params::Exponential { lambda } => Ok(-lambda * m as f64 - libm::log(-libm::expm1(-lambda))),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.params {
            Params::PowerLaw { alpha } => write!(f, "PL(alpha={alpha})"),
            Params::PowerLawCutoff { beta, gamma } => write!(f, "PLwC(beta={beta}, gamma={gamma})"),
            Params::YuleSimon { rho } => write!(f, "YS(rho={rho})"),
            Params::Exponential { lambda } => write!(f, "EXP(lambda={lambda})"),
        }?;
        write!(f, " on n >= {}", self.n_min)
    }
}

/// `ln Z`, the log of the sum of unnormalized terms over the support.
pub fn log_normalizer(spec: &ModelSpec) -> Result<f64> {
    spec.log_tail(spec.n_min)
}

/// `ln pmf(n)`; querying below the support is an error.
pub fn log_pmf(spec: &ModelSpec, n: u64) -> Result<f64> {
    Density::new(spec)?.log_pmf(n)
}

/// `P(X <= n)`; zero below the support.
pub fn cdf(spec: &ModelSpec, n: u64) -> Result<f64> {
    Density::new(spec)?.cdf(n)
}

/// A model with its normalizer evaluated once, for repeated queries.
#[derive(Debug, Clone, Copy)]
pub struct Density {
    spec: ModelSpec,
    log_z: f64,
}

impl Density {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        Ok(Density { spec: *spec, log_z: log_normalizer(spec)? })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn log_normalizer(&self) -> f64 {
        self.log_z
    }

    pub fn log_pmf(&self, n: u64) -> Result<f64> {
        if n < self.spec.n_min {
            return Err(Error::domain(format!(
                "pmf queried at n = {n} below the support start {}",
                self.spec.n_min
            )));
        }
        Ok(self.log_pmf_unchecked(n))
    }

    #[inline]
    pub(crate) fn log_pmf_unchecked(&self, n: u64) -> f64 {
        self.spec.log_term(n) - self.log_z
    }

    pub fn pmf(&self, n: u64) -> f64 {
        if n < self.spec.n_min {
            0.0
        } else {
            libm::exp(self.log_pmf_unchecked(n))
        }
    }

    /// `ln P(X > n)`.
    pub fn log_sf(&self, n: u64) -> Result<f64> {
        if n < self.spec.n_min {
            return Ok(0.0);
        }
        Ok((self.spec.log_tail(n + 1)? - self.log_z).min(0.0))
    }

    pub fn cdf(&self, n: u64) -> Result<f64> {
        if n < self.spec.n_min {
            return Ok(0.0);
        }
        Ok(-libm::expm1(self.log_sf(n)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(ModelSpec::power_law(1.0, 1).is_err());
        assert!(ModelSpec::power_law(2.0, 0).is_err());
        assert!(ModelSpec::power_law_cutoff(2.0, 0.0, 1).is_err());
        assert!(ModelSpec::power_law_cutoff(-3.0, 0.1, 1).is_ok());
        assert!(ModelSpec::yule_simon(1.0, 1).is_err());
        assert!(ModelSpec::exponential(0.0, 1).is_err());
        assert!(ModelSpec::exponential(f64::INFINITY, 1).is_err());
        assert!(ModelSpec::from_slice(Family::PowerLawCutoff, &[2.0], 1).is_err());
    }

    #[test]
    fn zeta_two_normalizer() {
        let spec = ModelSpec::power_law(2.0, 1).unwrap();
        assert!(close(libm::exp(log_normalizer(&spec).unwrap()), PI * PI / 6.0, 1e-13));
    }

    #[test]
    fn yule_simon_is_normalized_on_full_support() {
        let spec = ModelSpec::yule_simon(3.0, 1).unwrap();
        assert_eq!(log_normalizer(&spec).unwrap(), 0.0);
        assert!(close(libm::exp(log_pmf(&spec, 1).unwrap()), 2.0 / 3.0, 1e-14));
    }

    #[test]
    fn power_law_pmf_at_two() {
        let spec = ModelSpec::power_law(2.0, 1).unwrap();
        let want = 0.25 / (PI * PI / 6.0);
        assert!(close(libm::exp(log_pmf(&spec, 2).unwrap()), want, 1e-14));
        assert!(close(want, 0.151_982, 1e-6));
    }

    #[test]
    fn pmf_below_support_is_an_error() {
        let spec = ModelSpec::power_law(2.0, 3).unwrap();
        assert!(matches!(log_pmf(&spec, 2), Err(Error::Domain(_))));
        assert_eq!(cdf(&spec, 2).unwrap(), 0.0);
        assert_eq!(cdf(&spec, 0).unwrap(), 0.0);
    }

    #[test]
    fn geometric_cdf_closed_form() {
        let spec = ModelSpec::exponential(1.0, 1).unwrap();
        assert!(close(cdf(&spec, 1).unwrap(), 1.0 - libm::exp(-1.0), 1e-15));
        let spec = ModelSpec::exponential(0.3, 4).unwrap();
        for n in 4..40u64 {
            let want = 1.0 - libm::exp(-0.3 * (n - 3) as f64);
            assert!(close(cdf(&spec, n).unwrap(), want, 1e-14));
        }
    }

    #[test]
    fn yule_simon_tail_matches_summed_pmf() {
        for &rho in &[1.55, 3.43, 7.0] {
            for &n_min in &[1u64, 2, 5] {
                let d = Density::new(&ModelSpec::yule_simon(rho, n_min).unwrap()).unwrap();
                let mut acc = special::CompensatedSum::default();
                for n in n_min..n_min + 300 {
                    acc.add(d.pmf(n));
                    assert!(close(d.cdf(n).unwrap(), acc.value(), 1e-13), "rho={rho} n_min={n_min} n={n}");
                }
            }
        }
    }

    #[test]
    fn point_mass_limit() {
        let d = Density::new(&ModelSpec::power_law_cutoff(2.0, 50.0, 1).unwrap()).unwrap();
        assert!(1.0 - d.pmf(1) < 1e-20);
        assert_eq!(d.cdf(1).unwrap(), 1.0);
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.short_name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("yule-simon".parse::<Family>().unwrap(), Family::YuleSimon);
        assert!("lognormal".parse::<Family>().is_err());
    }
}
