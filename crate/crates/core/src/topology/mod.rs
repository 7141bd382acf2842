//! Finite T₀ topology engine and window models of the compactification
//! Ξ(P) = P ∪ {∞} of a discrete space P.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub mod action;
pub mod enumerate;
pub mod maps;
pub mod space;
pub mod xi;

pub use action::{ActionSpec, LabelMap, Presentation, Verdict, Witness};
pub use maps::{PseudoWitness, SpaceMap};
pub use space::{FiniteT0Space, PointSet, TopologyCertificate};
pub use xi::{DiscreteSpaceModel, Exhaustion, LabelScheme, Weights, XiWindow};

/// A point of the discrete space P: an integer or an integer tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Int(i64),
    Tuple(Vec<i64>),
}

impl Point {
    pub fn coords(&self) -> Vec<i64> {
        match self {
            Point::Int(v) => vec![*v],
            Point::Tuple(t) => t.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Point::Int(_) => 1,
            Point::Tuple(t) => t.len(),
        }
    }

    /// Rebuilds a point of the same shape from coordinates.
    pub fn with_coords(&self, coords: Vec<i64>) -> Point {
        match self {
            Point::Int(_) => Point::Int(coords[0]),
            Point::Tuple(_) => Point::Tuple(coords),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Int(v) => write!(f, "{v}"),
            Point::Tuple(t) => {
                write!(f, "(")?;
                for (i, v) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl std::str::FromStr for Point {
    type Err = String;

    /// Parses `3`, `-2` or `(1,-2)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("cannot parse point {s:?}");
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            if inner.trim().is_empty() {
                return Ok(Point::Tuple(vec![]));
            }
            return inner
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()
                .map(Point::Tuple);
        }
        s.parse::<i64>().map(Point::Int).map_err(|_| bad())
    }
}

/// A point of a finite space: either ∞ or a point of P.
///
/// Serialized as `"inf"` for ∞ and as the bare point otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Infinity,
    Point(Point),
}

impl Label {
    pub fn int(v: i64) -> Self {
        Label::Point(Point::Int(v))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Infinity => write!(f, "inf"),
            Label::Point(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Infinity => s.serialize_str("inf"),
            Label::Point(p) => p.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Point(Point),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) if t == "inf" => Ok(Label::Infinity),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("unknown label {t:?}"))),
            Raw::Point(p) => Ok(Label::Point(p)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("finite spaces are limited to 64 points, got {0}")]
    TooManyPoints(usize),
    #[error("open set {0:#b} has points outside the ground set")]
    OpenOutsideGround(PointSet),
    #[error("axiom {0:?} fails")]
    AxiomFailed(space::Axiom),
    #[error("unknown point {0}")]
    UnknownPoint(Label),
    #[error("space is not T0")]
    NotT0,
    #[error("map is not continuous: preimage of open {0:?} is not open")]
    NotContinuous(Vec<Label>),
    #[error("assignment has {got} entries for a domain of {expected} points")]
    AssignmentLength { expected: usize, got: usize },
    #[error("assignment sends a point to index {0}, outside the codomain")]
    AssignmentRange(usize),
    #[error("label scheme has no points")]
    EmptyScheme,
    #[error("label {0} is not valid in the base model")]
    InvalidLabel(Point),
    #[error("map is not injective on the window: {0} and {1} collide")]
    NotInjective(Point, Point),
    #[error("map sends {0} outside the target window")]
    OutsideTarget(Point),
    #[error("maps cannot be composed: codomain and domain differ")]
    CompositionMismatch,
    #[error("window {0} is too large for a finite model")]
    WindowTooLarge(usize),
}
