//! The ordered group Γ of Δ-valued functions on a discrete P that are
//! constant off a finite set and have mean-zero deviation, with its Riesz
//! interpolation, brute-force search oracle and order ideals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::Q;
use crate::topology::action::ActionError;
use crate::topology::xi::{DiscreteSpaceModel, Exhaustion, LabelScheme, ModelError, Weights};
use crate::topology::Point;

pub mod element;
pub mod ideal;
pub mod interpolate;
pub mod random;
pub mod search;

pub use element::{ElementData, Gamma, GammaElement};
pub use ideal::{ideal_from_compact, ideal_to_xi_open, separating_witness, zero_set_of_family, OrderIdeal, ZeroSet};
pub use interpolate::{riesz_interpolate, InterpolationProblem, Interpolation};
pub use search::{search_interpolant, SearchBound, SearchOutcome, Transcript};

/// A subgroup Δ ⊆ ℚ containing 1. Every kind offered here is a subring, so
/// "μ(L)·r ∈ Δ for all r ∈ Δ" reduces to `μ(L) ∈ Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CoefficientGroup {
    Rationals,
    /// ℤ[1/2].
    Dyadic,
    Integers,
    /// ℤ[1/p].
    InvertPrime { p: u64 },
    /// ℤ_(p): denominators prime to `p`.
    PLocal { p: u64 },
}

impl CoefficientGroup {
    pub fn contains(&self, v: &Q) -> bool {
        let d = v.denom();
        match self {
            CoefficientGroup::Rationals => true,
            CoefficientGroup::Integers => d.is_one(),
            CoefficientGroup::Dyadic => strip_prime(d, 2).is_one(),
            CoefficientGroup::InvertPrime { p } => strip_prime(d, *p).is_one(),
            CoefficientGroup::PLocal { p } => !(d % BigInt::from(*p)).is_zero(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            CoefficientGroup::Rationals => "Q".into(),
            CoefficientGroup::Dyadic => "Z[1/2]".into(),
            CoefficientGroup::Integers => "Z".into(),
            CoefficientGroup::InvertPrime { p } => format!("Z[1/{p}]"),
            CoefficientGroup::PLocal { p } => format!("Z_({p})"),
        }
    }

    /// Parses `Q`, `Z`, `Z[1/2]`, `Z[1/p]`, `Z_(p)` (also lower case).
    pub fn parse(s: &str) -> Option<Self> {
        let t = s.trim().to_ascii_uppercase().replace(' ', "");
        match t.as_str() {
            "Q" | "RATIONALS" => Some(CoefficientGroup::Rationals),
            "Z" | "INTEGERS" => Some(CoefficientGroup::Integers),
            "Z[1/2]" | "DYADIC" => Some(CoefficientGroup::Dyadic),
            _ => {
                if let Some(p) = t.strip_prefix("Z[1/").and_then(|r| r.strip_suffix(']')) {
                    p.parse().ok().filter(|&p| is_prime(p)).map(|p| CoefficientGroup::InvertPrime { p })
                } else if let Some(p) = t.strip_prefix("Z_(").and_then(|r| r.strip_suffix(')')) {
                    p.parse().ok().filter(|&p| is_prime(p)).map(|p| CoefficientGroup::PLocal { p })
                } else {
                    None
                }
            }
        }
    }

    /// Whether `1/denominator` lies in Δ.
    pub fn admits_denominator(&self, denominator: u64) -> bool {
        self.contains(&Q::new(BigInt::one(), BigInt::from(denominator)))
    }

    /// Checks the two closure requirements against a concrete model: every
    /// point mass lies in Δ, and `μ(L_n)^{-1} ∈ Δ` for the first `max_n`
    /// exhaustion sets.
    pub fn closure_report(&self, model: &DiscreteSpaceModel, max_n: usize) -> ClosureReport {
        let mut weight_failures = Vec::new();
        match &model.weights {
            Weights::Counting => {}
            Weights::Table { default, overrides } => {
                if !self.contains(default) {
                    weight_failures.push(format!("default weight {default}"));
                }
                for o in overrides {
                    if !self.contains(&o.weight) {
                        weight_failures.push(format!("weight {} at {}", o.weight, o.point));
                    }
                }
            }
        }
        let bound = match (&model.exhaustion, &model.scheme) {
            (Exhaustion::Explicit { sets }, _) => sets.len().min(max_n),
            (_, LabelScheme::Finite { .. }) => 1,
            _ => max_n,
        };
        let mut inverse_measure_failures = Vec::new();
        let mut checked = 0;
        for n in 1..=bound {
            let Some(m) = model.exhaustion_measure(n) else { break };
            checked += 1;
            if m.is_zero() || !self.contains(&m.recip()) {
                inverse_measure_failures.push(MeasureFailure { n, measure: m });
            }
        }
        ClosureReport {
            delta: *self,
            weight_failures,
            inverse_measure_failures,
            exhaustion_sets_checked: checked,
        }
    }
}

fn strip_prime(d: &BigInt, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let mut d = d.clone();
    while d.is_multiple_of(&p) {
        d /= &p;
    }
    d
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureFailure {
    pub n: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub measure: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub delta: CoefficientGroup,
    pub weight_failures: Vec<String>,
    pub inverse_measure_failures: Vec<MeasureFailure>,
    pub exhaustion_sets_checked: usize,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.weight_failures.is_empty() && self.inverse_measure_failures.is_empty()
    }
}

/// Where a pointwise comparison fails: at a point of P or on the constant
/// tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Point(Point),
    AtInfinity,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Location::Point(p) => write!(f, "{p}"),
            Location::AtInfinity => write!(f, "infinity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RieszError {
    #[error("deviations are not balanced: weighted sum is {sum}")]
    BalanceViolation { sum: Q },
    #[error("value {value} at {at} is not in {delta}")]
    CoefficientNotInDelta { value: Q, at: Location, delta: String },
    #[error("point {0} is not a point of the base space")]
    InvalidPoint(Point),
    #[error("elements come from different models of Γ")]
    MixedModels,
    #[error("map is not measure preserving at {point}: it goes to {image}")]
    NotMeasurePreserving { point: Point, image: Point },
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("rho_{j} <= sigma_{k} fails at {at}")]
    PreconditionViolated { j: usize, k: usize, at: Location },
    #[error("mean t = {t} over L_{n} (measure {measure}) is not in {delta}")]
    DeltaNotClosed { t: Q, n: usize, measure: String, delta: String },
    #[error("no exhaustion set covers the supports")]
    NoCoveringSet,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("zero set point {0} lies outside the window")]
    EscapesWindow(Point),
}

/// Smallest integer `n` with `v ≤ n`.
pub(crate) fn ceil_int(v: &Q) -> BigInt {
    v.ceil().to_integer()
}
