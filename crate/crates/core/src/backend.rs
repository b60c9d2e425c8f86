//! Textual angle specifications and the registry of scalar backends that
//! turn them into exact [`AngleSet`]s.
//!
//! A backend owns one exact number system. The cyclotomic backend handles
//! rational multiples of pi; the parametric backend handles powers of a
//! formal unit-circle symbol `t`. Backends are looked up by name, or the
//! first registered backend that accepts every spec is chosen.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{AngleSet, GeometryError, UnitAngle};
use crate::scalar::interval::parse_decimal;
use crate::scalar::{BackendKind, CyclotomicElement, CyclotomicField, ExactScalar, ParamRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("invalid angle spec {0:?}: expected 0, pi*<p>/<q>, deg:<rational> or param:<k>")]
    InvalidSpec(String),
    #[error("unknown backend {0:?}")]
    UnknownBackend(String),
    #[error("backend {backend} cannot represent angle {spec}")]
    Unsupported { backend: String, spec: String },
    #[error("no registered backend accepts all of the given angles")]
    NoBackend,
    #[error("cyclotomic order {0} is too large")]
    OrderTooLarge(BigInt),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One line direction as written by a user.
///
/// `PiFraction(r)` is `e^{i pi r}` with `r` reduced into `[0, 1)`;
/// `Param(k)` is `t^k` for the formal symbol `t`, `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AngleSpec {
    PiFraction(BigRational),
    Param(u32),
}

impl AngleSpec {
    pub fn zero() -> Self {
        AngleSpec::PiFraction(BigRational::zero())
    }

    pub fn pi_fraction(r: BigRational) -> Self {
        let mut f = &r - r.floor();
        if f.is_negative() {
            f += BigRational::one();
        }
        AngleSpec::PiFraction(f)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, AngleSpec::PiFraction(r) if r.is_zero())
    }
}

impl FromStr for AngleSpec {
    type Err = BackendError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || BackendError::InvalidSpec(s.to_string());
        if s == "0" {
            return Ok(AngleSpec::zero());
        }
        if let Some(rest) = s.strip_prefix("pi*") {
            let (p, q) = rest.split_once('/').unwrap_or((rest, "1"));
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(AngleSpec::pi_fraction(BigRational::new(p, q)));
        }
        if let Some(rest) = s.strip_prefix("deg:") {
            let d = parse_decimal(rest).ok_or_else(bad)?;
            return Ok(AngleSpec::pi_fraction(d / BigRational::from_integer(180.into())));
        }
        if let Some(rest) = s.strip_prefix("param:") {
            let k: u32 = rest.trim().parse().map_err(|_| bad())?;
            return Ok(if k == 0 {
                AngleSpec::zero()
            } else {
                AngleSpec::Param(k)
            });
        }
        Err(bad())
    }
}

impl TryFrom<String> for AngleSpec {
    type Error = BackendError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<AngleSpec> for String {
    fn from(a: AngleSpec) -> String {
        a.to_string()
    }
}

impl fmt::Display for AngleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleSpec::PiFraction(r) if r.is_zero() => write!(f, "0"),
            AngleSpec::PiFraction(r) => write!(f, "pi*{}/{}", r.numer(), r.denom()),
            AngleSpec::Param(k) => write!(f, "param:{k}"),
        }
    }
}

/// Parses a comma separated list of angle specs.
pub fn parse_angle_list(s: &str) -> Result<Vec<AngleSpec>, BackendError> {
    s.split(',').map(str::parse).collect()
}

/// An exact number system able to host a family of angles.
pub trait Backend: Send + Sync {
    fn name(&self) -> &'static str;

    fn kind(&self) -> BackendKind;

    fn accepts(&self, spec: &AngleSpec) -> bool;

    /// Builds the angle set, sorted by argument, all in one common field.
    fn build(&self, specs: &[AngleSpec]) -> Result<AngleSet, BackendError>;

    /// Whether values have a concrete position in the plane (needed for
    /// metric statements such as density).
    fn is_numeric(&self) -> bool;
}

/// Angles that are rational multiples of pi, in `Q(zeta_N)` with
/// `N = 2 * lcm(denominators)`.
pub struct CyclotomicBackend;

impl CyclotomicBackend {
    pub fn field_order(specs: &[AngleSpec]) -> Result<u32, BackendError> {
        let mut l = BigInt::one();
        for s in specs {
            if let AngleSpec::PiFraction(r) = s {
                l = l.lcm(r.denom());
            }
        }
        let n: BigInt = l * BigInt::from(2);
        n.to_u32()
            .filter(|&v| v <= 100_000)
            .ok_or(BackendError::OrderTooLarge(n))
    }
}

impl Backend for CyclotomicBackend {
    fn name(&self) -> &'static str {
        "cyclotomic"
    }

    fn kind(&self) -> BackendKind {
        BackendKind::Cyclotomic
    }

    fn accepts(&self, spec: &AngleSpec) -> bool {
        matches!(spec, AngleSpec::PiFraction(_))
    }

    fn build(&self, specs: &[AngleSpec]) -> Result<AngleSet, BackendError> {
        let order = Self::field_order(specs)?;
        let field = CyclotomicField::get(order);
        let mut sorted = specs.to_vec();
        sorted.sort();
        let mut angles = Vec::with_capacity(sorted.len());
        for spec in &sorted {
            let AngleSpec::PiFraction(r) = spec else {
                return Err(BackendError::Unsupported {
                    backend: self.name().into(),
                    spec: spec.to_string(),
                });
            };
            // e^{i pi p/q} = zeta_N^{p N / (2q)}
            let k: BigInt = r.numer() * BigInt::from(order) / (r.denom() * BigInt::from(2));
            let k = k.to_i64().expect("exponent below the field order");
            let value = ExactScalar::from(CyclotomicElement::root_of_unity(&field, k));
            angles.push(UnitAngle::with_label(value, spec.to_string())?);
        }
        Ok(AngleSet::new(angles)?)
    }

    fn is_numeric(&self) -> bool {
        true
    }
}

/// Powers of a formal unit-circle symbol `t`, in `Q(t)`.
pub struct ParamBackend;

impl Backend for ParamBackend {
    fn name(&self) -> &'static str {
        "param"
    }

    fn kind(&self) -> BackendKind {
        BackendKind::Param
    }

    fn accepts(&self, spec: &AngleSpec) -> bool {
        matches!(spec, AngleSpec::Param(_)) || spec.is_zero()
    }

    fn build(&self, specs: &[AngleSpec]) -> Result<AngleSet, BackendError> {
        let mut sorted = specs.to_vec();
        sorted.sort();
        let mut angles = Vec::with_capacity(sorted.len());
        for spec in &sorted {
            let k = match spec {
                AngleSpec::Param(k) => *k as usize,
                s if s.is_zero() => 0,
                _ => {
                    return Err(BackendError::Unsupported {
                        backend: self.name().into(),
                        spec: spec.to_string(),
                    })
                }
            };
            let value = ExactScalar::from(ParamRational::power_of_t(k));
            angles.push(UnitAngle::with_label(value, spec.to_string())?);
        }
        Ok(AngleSet::new(angles)?)
    }

    fn is_numeric(&self) -> bool {
        false
    }
}

/// Named backends, in registration order.
#[derive(Clone)]
pub struct BackendRegistry {
    order: Vec<&'static str>,
    backends: BTreeMap<&'static str, Arc<dyn Backend>>,
}

impl Default for BackendRegistry {
    fn default() -> Self {
        let mut r = BackendRegistry::empty();
        r.register(Arc::new(CyclotomicBackend));
        r.register(Arc::new(ParamBackend));
        r
    }
}

impl BackendRegistry {
    pub fn empty() -> Self {
        BackendRegistry {
            order: Vec::new(),
            backends: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, backend: Arc<dyn Backend>) {
        let name = backend.name();
        if self.backends.insert(name, backend).is_none() {
            self.order.push(name);
        }
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Backend>, BackendError> {
        self.backends
            .get(name)
            .cloned()
            .ok_or_else(|| BackendError::UnknownBackend(name.to_string()))
    }

    pub fn names(&self) -> &[&'static str] {
        &self.order
    }

    /// First backend (in registration order) that accepts every spec.
    pub fn select(&self, specs: &[AngleSpec]) -> Result<Arc<dyn Backend>, BackendError> {
        self.order
            .iter()
            .map(|n| &self.backends[n])
            .find(|b| specs.iter().all(|s| b.accepts(s)))
            .cloned()
            .ok_or(BackendError::NoBackend)
    }

    /// Builds an angle set with the named backend, or `"auto"`.
    pub fn build(&self, name: &str, specs: &[AngleSpec]) -> Result<AngleSet, BackendError> {
        let backend = if name == "auto" {
            self.select(specs)?
        } else {
            self.get(name)?
        };
        if let Some(bad) = specs.iter().find(|s| !backend.accepts(s)) {
            return Err(BackendError::Unsupported {
                backend: backend.name().into(),
                spec: bad.to_string(),
            });
        }
        backend.build(specs)
    }
}

/// Builds an angle set from specs with the default registry.
pub fn angle_set(specs: &[AngleSpec]) -> Result<AngleSet, BackendError> {
    BackendRegistry::default().build("auto", specs)
}

/// Shorthand for tests and examples: `angles("0,pi*1/6,pi*1/3")`.
pub fn angles(list: &str) -> Result<AngleSet, BackendError> {
    angle_set(&parse_angle_list(list)?)
}
