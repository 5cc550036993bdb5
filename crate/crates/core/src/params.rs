//! Problem parameters, regime detection and derived exponents.
//!
//! Exponents may carry an exact rational value next to their `f64` value. When
//! both the primary exponent and the target exponent are exact, the test
//! `q = p*` is decided in rational arithmetic; otherwise a relative tolerance of
//! `1e-12` is used and a [`Warning::NearCritical`] is attached to the result.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{domain, ParamError, Result};

/// Relative tolerance used when `q = p*` (or any exponent boundary) has to be
/// decided in floating point.
pub const CRITICAL_RTOL: f64 = 1e-12;

/// A real exponent with an optional exact rational representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    value: f64,
    exact: Option<Ratio<i64>>,
}

impl Exponent {
    pub fn from_f64(value: f64) -> Self {
        Exponent { value, exact: None }
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        let r = Ratio::new(numer, denom);
        Exponent {
            value: *r.numer() as f64 / *r.denom() as f64,
            exact: Some(r),
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<Ratio<i64>> {
        self.exact
    }
}

impl From<f64> for Exponent {
    fn from(value: f64) -> Self {
        Exponent::from_f64(value)
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Some(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            None => write!(f, "{}", self.value),
        }
    }
}

/// Parse error for [`Exponent`] literals.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("cannot parse exponent {0:?}: expected an integer, a decimal, or a/b")]
pub struct ParseExponentError(pub String);

impl FromStr for Exponent {
    type Err = ParseExponentError;

    /// Accepts `7`, `2.5`, `10/3`, and falls back to float syntax (`1e-3`) without an
    /// exact value.
    fn from_str(src: &str) -> std::result::Result<Self, Self::Err> {
        let text = src.trim();
        let err = || ParseExponentError(src.to_string());
        if let Some((num, den)) = text.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| err())?;
            let den: i64 = den.trim().parse().map_err(|_| err())?;
            if den == 0 {
                return Err(err());
            }
            return Ok(Exponent::from_ratio(num, den));
        }
        if let Some(r) = parse_decimal(text) {
            return Ok(Exponent {
                value: text.parse().map_err(|_| err())?,
                exact: Some(r),
            });
        }
        let value: f64 = text.parse().map_err(|_| err())?;
        Ok(Exponent::from_f64(value))
    }
}

fn parse_decimal(text: &str) -> Option<Ratio<i64>> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: i64 = digits.parse().ok()?;
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let r = Ratio::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// The differential operator in the constraint norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Operator {
    /// Gradient with primary exponent `p`.
    Local { p: Exponent },
    /// Fractional Laplacian of order `s`; the primary exponent is fixed to 2.
    Fractional { s: Exponent },
}

/// How the target exponent `q` was requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// `q` equal to the critical exponent, requested symbolically.
    Critical,
    Value(Exponent),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub n: u32,
    pub operator: Operator,
    pub q: Target,
    pub gamma: f64,
    /// Weight on `||u||_q^q` (called beta for the fractional problem).
    pub alpha: f64,
}

impl ProblemParams {
    pub fn local(n: u32, p: impl Into<Exponent>, q: Target, gamma: f64, alpha: f64) -> Self {
        ProblemParams {
            n,
            operator: Operator::Local { p: p.into() },
            q,
            gamma,
            alpha,
        }
    }

    pub fn fractional(n: u32, s: impl Into<Exponent>, q: Target, gamma: f64, beta: f64) -> Self {
        ProblemParams {
            n,
            operator: Operator::Fractional { s: s.into() },
            q,
            gamma,
            alpha: beta,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    SubcriticalLocal,
    CriticalLocal,
    SubcriticalFractional,
    CriticalFractional,
}

impl Regime {
    pub fn is_critical(self) -> bool {
        matches!(self, Regime::CriticalLocal | Regime::CriticalFractional)
    }

    pub fn is_fractional(self) -> bool {
        matches!(
            self,
            Regime::SubcriticalFractional | Regime::CriticalFractional
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// A numeric `q` matched the critical exponent only up to [`CRITICAL_RTOL`].
    NearCritical { q: f64, critical: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NearCritical { q, critical } => write!(
                f,
                "q = {q} treated as the critical exponent {critical} (relative tolerance {CRITICAL_RTOL:e})"
            ),
        }
    }
}

/// Exponents derived from a validated parameter tuple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponents {
    /// `p` for the local problem, 2 for the fractional one.
    pub base: f64,
    pub q: f64,
    /// Critical exponent (`p*` or `2_s*`); infinite when `p = N`.
    pub critical: f64,
    /// Scale-invariant interpolation exponent (`gamma_c` or `gamma_{s,q}`).
    pub gamma_c: f64,
}

/// A validated problem: parameters plus regime, derived exponents and warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub params: ProblemParams,
    pub regime: Regime,
    pub exponents: Exponents,
    pub warnings: Vec<Warning>,
}

impl Problem {
    pub fn new(params: ProblemParams) -> std::result::Result<Self, ParamError> {
        check(params)
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    /// Whether the extremal of the critical inequality lies in the energy space:
    /// `p^2 < N` locally, `s < N/4` for the fractional operator. Always true in
    /// subcritical regimes, where the question does not arise.
    pub fn extremal_in_energy_space(&self) -> bool {
        if !self.regime.is_critical() {
            return true;
        }
        let n = self.params.n as i64;
        match self.params.operator {
            Operator::Local { p } => match p.exact {
                Some(r) => r * r < Ratio::from_integer(n),
                None => p.value * p.value < n as f64,
            },
            Operator::Fractional { s } => match s.exact {
                Some(r) => r * 4 < Ratio::from_integer(n),
                None => 4.0 * s.value < n as f64,
            },
        }
    }

    /// Same problem with another gamma. Gamma does not enter regime detection.
    pub fn with_gamma(&self, gamma: f64) -> std::result::Result<Self, ParamError> {
        Problem::new(self.params.with_gamma(gamma))
    }

    pub fn with_alpha(&self, alpha: f64) -> std::result::Result<Self, ParamError> {
        Problem::new(self.params.with_alpha(alpha))
    }
}

/// `p* = Np/(N-p)` for `1 < p < N`.
pub fn critical_exponent(n: u32, p: f64) -> Result<f64> {
    let nf = n as f64;
    if !(p > 1.0 && p < nf) {
        return Err(domain("p", p, "1 < p < N"));
    }
    Ok(nf * p / (nf - p))
}

/// `gamma_c = N(q-p)/p`.
pub fn gamma_c(n: u32, p: f64, q: f64) -> f64 {
    n as f64 * (q - p) / p
}

/// `2_s* = 2N/(N-2s)`.
pub fn fractional_critical_exponent(n: u32, s: f64) -> Result<f64> {
    let nf = n as f64;
    if !(s > 0.0 && 2.0 * s < nf) {
        return Err(domain("s", s, "0 < s < N/2"));
    }
    Ok(2.0 * nf / (nf - 2.0 * s))
}

/// `gamma_{s,q} = N(q-2)/(2s)`.
pub fn fractional_gamma_c(n: u32, s: f64, q: f64) -> f64 {
    n as f64 * (q - 2.0) / (2.0 * s)
}

/// Returns the regime of a parameter tuple, or the first violated hypothesis.
pub fn validate(params: &ProblemParams) -> std::result::Result<Regime, ParamError> {
    check(*params).map(|p| p.regime)
}

fn check(params: ProblemParams) -> std::result::Result<Problem, ParamError> {
    let n = params.n;
    let nf = n as f64;
    let mut warnings = Vec::new();

    let (base, critical, critical_exact, fractional) = match params.operator {
        Operator::Local { p } => {
            if n < 2 {
                return Err(ParamError::Dimension { n, min: 2 });
            }
            if !p.value.is_finite() {
                return Err(ParamError::NonFinite("p"));
            }
            let above_one = match p.exact {
                Some(r) => r > Ratio::from_integer(1) && r <= Ratio::from_integer(n as i64),
                None => p.value > 1.0 && p.value <= nf,
            };
            if !above_one {
                return Err(ParamError::POutOfRange { p: p.value, n });
            }
            let is_limit = match p.exact {
                Some(r) => r == Ratio::from_integer(n as i64),
                None => p.value == nf,
            };
            if is_limit {
                (p.value, f64::INFINITY, None, None)
            } else {
                let exact = p.exact.map(|r| {
                    let nn = Ratio::from_integer(n as i64);
                    nn * r / (nn - r)
                });
                (p.value, nf * p.value / (nf - p.value), exact, None)
            }
        }
        Operator::Fractional { s } => {
            if n < 1 {
                return Err(ParamError::Dimension { n, min: 1 });
            }
            if !s.value.is_finite() {
                return Err(ParamError::NonFinite("s"));
            }
            let ok = match s.exact {
                Some(r) => {
                    r > Ratio::from_integer(0) && r * 2 < Ratio::from_integer(n as i64)
                }
                None => s.value > 0.0 && 2.0 * s.value < nf,
            };
            if !ok {
                return Err(ParamError::SOutOfRange { s: s.value, n });
            }
            let exact = s.exact.map(|r| {
                let nn = Ratio::from_integer(n as i64);
                nn * 2 / (nn - r * 2)
            });
            (2.0, 2.0 * nf / (nf - 2.0 * s.value), exact, Some(s.value))
        }
    };

    let is_critical;
    let q = match params.q {
        Target::Critical => {
            if critical.is_infinite() {
                return Err(ParamError::CriticalUndefined { n });
            }
            is_critical = true;
            critical
        }
        Target::Value(q) => {
            if !q.value.is_finite() {
                return Err(ParamError::NonFinite("q"));
            }
            let range_err = || ParamError::QOutOfRange {
                q: q.value,
                lower: format!("({base}"),
                upper: if critical.is_infinite() {
                    "inf)".to_string()
                } else {
                    format!("{critical}]")
                },
            };
            if critical.is_infinite() {
                // p = N: N < q < inf.
                if !(q.value > nf) {
                    return Err(ParamError::QOutOfRange {
                        q: q.value,
                        lower: format!("({nf}"),
                        upper: "inf)".to_string(),
                    });
                }
                is_critical = false;
                q.value
            } else {
                let exactly_equal = match (q.exact, critical_exact) {
                    (Some(a), Some(b)) => Some(a == b),
                    _ => None,
                };
                let near = (q.value - critical).abs() <= CRITICAL_RTOL * critical;
                match exactly_equal {
                    Some(true) => {
                        is_critical = true;
                        critical
                    }
                    Some(false) => {
                        let (qe, ce) = (q.exact.unwrap(), critical_exact.unwrap());
                        if !(q.value > base && qe < ce) {
                            return Err(range_err());
                        }
                        is_critical = false;
                        q.value
                    }
                    None if near => {
                        if q.value != critical {
                            warnings.push(Warning::NearCritical {
                                q: q.value,
                                critical,
                            });
                        }
                        is_critical = true;
                        critical
                    }
                    None => {
                        if !(q.value > base && q.value < critical) {
                            return Err(range_err());
                        }
                        is_critical = false;
                        q.value
                    }
                }
            }
        }
    };

    if !(params.gamma.is_finite()) {
        return Err(ParamError::NonFinite("gamma"));
    }
    if params.gamma <= 0.0 {
        return Err(ParamError::GammaNonPositive(params.gamma));
    }
    if !params.alpha.is_finite() {
        return Err(ParamError::NonFinite("alpha"));
    }
    if params.alpha < 0.0 {
        return Err(ParamError::AlphaNegative(params.alpha));
    }

    let (regime, gamma_c) = match fractional {
        None if is_critical => (Regime::CriticalLocal, critical),
        None => (Regime::SubcriticalLocal, gamma_c(n, base, q)),
        Some(_) if is_critical => (Regime::CriticalFractional, critical),
        Some(s) => (Regime::SubcriticalFractional, fractional_gamma_c(n, s, q)),
    };

    Ok(Problem {
        params,
        regime,
        exponents: Exponents {
            base,
            q,
            critical,
            gamma_c,
        },
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn local(n: u32, p: f64, q: f64) -> ProblemParams {
        ProblemParams::local(n, p, Target::Value(q.into()), 1.0, 1.0)
    }

    #[test]
    fn critical_exponent_values() {
        assert_eq!(critical_exponent(4, 2.0).unwrap(), 4.0);
        assert!((critical_exponent(5, 2.0).unwrap() - 10.0 / 3.0).abs() < 1e-15);
        assert!(critical_exponent(3, 3.0).is_err());
        assert!(critical_exponent(3, 1.0).is_err());
    }

    #[test]
    fn gamma_c_values() {
        assert_eq!(gamma_c(2, 2.0, 4.0), 2.0);
        assert_eq!(gamma_c(3, 2.0, 4.0), 3.0);
        let pstar = critical_exponent(5, 2.0).unwrap();
        assert!((gamma_c(5, 2.0, pstar) - pstar).abs() < 1e-14);
    }

    #[test]
    fn validate_examples() {
        let p = ProblemParams::local(3, 2.0, Target::Value(6.0.into()), 1.0, 1.0);
        assert_eq!(validate(&p), Ok(Regime::CriticalLocal));
        let p = ProblemParams::local(2, 2.0, Target::Value(4.0.into()), 2.0, 1.0);
        assert_eq!(validate(&p), Ok(Regime::SubcriticalLocal));
        let err = validate(&local(3, 2.0, 7.0)).unwrap_err();
        assert_eq!(err.code(), "q_out_of_range");
    }

    #[test]
    fn distinct_error_codes() {
        assert_eq!(validate(&local(3, 0.5, 2.0)).unwrap_err().code(), "p_out_of_range");
        assert_eq!(validate(&local(3, 4.0, 5.0)).unwrap_err().code(), "p_out_of_range");
        assert_eq!(validate(&local(3, 2.0, 1.5)).unwrap_err().code(), "q_out_of_range");
        assert_eq!(validate(&local(1, 2.0, 3.0)).unwrap_err().code(), "dimension");
        let g = local(3, 2.0, 4.0).with_gamma(0.0);
        assert_eq!(validate(&g).unwrap_err().code(), "gamma_non_positive");
        let a = local(3, 2.0, 4.0).with_alpha(-1.0);
        assert_eq!(validate(&a).unwrap_err().code(), "alpha_negative");
        let f = ProblemParams::fractional(2, 1.0, Target::Critical, 1.0, 1.0);
        assert_eq!(validate(&f).unwrap_err().code(), "s_out_of_range");
        let c = ProblemParams::local(3, 3.0, Target::Critical, 1.0, 1.0);
        assert_eq!(validate(&c).unwrap_err().code(), "critical_undefined");
    }

    #[test]
    fn limit_case_p_equals_n() {
        assert_eq!(validate(&local(2, 2.0, 5.0)), Ok(Regime::SubcriticalLocal));
        assert_eq!(validate(&local(2, 2.0, 2.0)).unwrap_err().code(), "q_out_of_range");
        let pr = Problem::new(local(3, 3.0, 10.0)).unwrap();
        assert!(pr.exponents.critical.is_infinite());
        assert_eq!(pr.exponents.gamma_c, 3.0 * 7.0 / 3.0);
    }

    #[test]
    fn exact_critical_comparison() {
        let p: Exponent = "2".parse().unwrap();
        let q: Exponent = "10/3".parse().unwrap();
        let pr = Problem::new(ProblemParams::local(5, p, Target::Value(q), 1.0, 1.0)).unwrap();
        assert_eq!(pr.regime, Regime::CriticalLocal);
        assert!(pr.warnings.is_empty());

        // A decimal just below p* is exact and stays subcritical.
        let q: Exponent = "3.333333333333".parse().unwrap();
        let pr = Problem::new(ProblemParams::local(5, p, Target::Value(q), 1.0, 1.0)).unwrap();
        assert_eq!(pr.regime, Regime::SubcriticalLocal);
    }

    #[test]
    fn float_near_critical_warns() {
        let q = 10.0 / 3.0 * (1.0 + 1e-13);
        let pr = Problem::new(local(5, 2.0, q)).unwrap();
        assert_eq!(pr.regime, Regime::CriticalLocal);
        assert_eq!(pr.warnings.len(), 1);
        let pr = Problem::new(local(5, 2.0, 10.0 / 3.0)).unwrap();
        assert!(pr.warnings.is_empty());
    }

    #[test]
    fn fractional_regimes() {
        let f = ProblemParams::fractional(3, 0.5, Target::Critical, 1.0, 1.0);
        let pr = Problem::new(f).unwrap();
        assert_eq!(pr.regime, Regime::CriticalFractional);
        assert!((pr.exponents.critical - 3.0).abs() < 1e-15);
        assert_eq!(pr.exponents.gamma_c, pr.exponents.critical);
        let f = ProblemParams::fractional(1, 0.25, Target::Value(3.0.into()), 1.0, 1.0);
        let pr = Problem::new(f).unwrap();
        assert_eq!(pr.regime, Regime::SubcriticalFractional);
        assert!((pr.exponents.gamma_c - 2.0).abs() < 1e-15);
        let f = ProblemParams::fractional(1, 0.25, Target::Value(4.5.into()), 1.0, 1.0);
        assert_eq!(validate(&f).unwrap_err().code(), "q_out_of_range");
    }

    #[test]
    fn energy_space_boundary() {
        let crit = |n, p: f64| Problem::new(ProblemParams::local(n, p, Target::Critical, 1.0, 1.0));
        assert!(crit(5, 2.0).unwrap().extremal_in_energy_space());
        assert!(!crit(4, 2.0).unwrap().extremal_in_energy_space());
        assert!(!crit(3, 2.0).unwrap().extremal_in_energy_space());
        let frac = |n, s: f64| {
            Problem::new(ProblemParams::fractional(n, s, Target::Critical, 1.0, 1.0)).unwrap()
        };
        assert!(frac(3, 0.5).extremal_in_energy_space());
        assert!(!frac(4, 1.0).extremal_in_energy_space());
    }

    #[test]
    fn exponent_parsing() {
        let e: Exponent = "10/3".parse().unwrap();
        assert_eq!(e.exact(), Some(Ratio::new(10, 3)));
        let e: Exponent = "2.5".parse().unwrap();
        assert_eq!(e.exact(), Some(Ratio::new(5, 2)));
        let e: Exponent = "1e-3".parse().unwrap();
        assert_eq!(e.exact(), None);
        assert_eq!(e.value(), 1e-3);
        assert!("a/b".parse::<Exponent>().is_err());
        assert!("1/0".parse::<Exponent>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn critical_exponent_exceeds_p(n in 2u32..12, frac in 0.01f64..0.99) {
                let p = 1.0 + frac * (n as f64 - 1.0);
                let pstar = critical_exponent(n, p).unwrap();
                prop_assert!(pstar > p);
            }

            #[test]
            fn gamma_c_below_pstar_iff_q_below_pstar(n in 2u32..12, frac in 0.01f64..0.99, qf in 0.0f64..2.0) {
                let p = 1.0 + frac * (n as f64 - 1.0);
                let pstar = critical_exponent(n, p).unwrap();
                let q = p + qf * (pstar - p);
                prop_assume!((q - pstar).abs() > 1e-9 * pstar);
                prop_assert_eq!(gamma_c(n, p, q) < pstar, q < pstar);
            }

            #[test]
            fn validate_is_total(n in 0u32..8, p in -1.0f64..9.0, q in -1.0f64..20.0, g in -1.0f64..5.0, a in -1.0f64..5.0) {
                let params = ProblemParams::local(n, p, Target::Value(q.into()), g, a);
                let first = validate(&params);
                let second = validate(&params);
                prop_assert_eq!(first, second);
            }
        }
    }
}
