//! The dyadic tree Y⁰ over `S = {−1, 1}^N`, the map `f` into `[−1, 1]^N`,
//! affine transversality, the piecewise-affine injection `h`, and finite
//! truncations of the resulting pseudocovering.
//!
//! Sign vectors are stored as `u32` masks: coordinate `i` is `+1` when bit
//! `N − 1 − i` is set, so integer order on masks is lexicographic order on
//! sign vectors with `−1 < +1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{format_q, parse_q, Q};

pub mod build;
pub mod crosscheck;
pub mod restrict;
pub mod shrink;
pub mod transversal;
pub mod tree;
pub mod verify;

pub use build::{build_h, BuildBundle, BuildConfig, PieceRecord};
pub use restrict::{pi_projection, restrict_pseudocovering, LabelPredicate, PcTruncation};
pub use shrink::{epsilon_profile, lipschitz_constant, EpsilonProfile};
pub use transversal::{transversal_eta, AffineSubspace, BaseMap, TransversalConfig, TransversalOutcome};
pub use tree::{f_eval, level_set, verify_f_properties};

/// Largest ambient dimension representable by `u32` sign masks.
pub const MAX_AMBIENT: usize = 32;

pub fn ambient_dim(n: usize) -> usize {
    2 * n + 3
}

/// Coordinate `i` of a sign mask in dimension `dim`.
pub fn sign_at(mask: u32, i: usize, dim: usize) -> i64 {
    if mask >> (dim - 1 - i) & 1 == 1 {
        1
    } else {
        -1
    }
}

pub fn sign_vector(mask: u32, dim: usize) -> Vec<i64> {
    (0..dim).map(|i| sign_at(mask, i, dim)).collect()
}

pub fn format_signs(mask: u32, dim: usize) -> String {
    (0..dim).map(|i| if sign_at(mask, i, dim) > 0 { '+' } else { '-' }).collect()
}

pub fn parse_signs(s: &str) -> Option<(u32, usize)> {
    let dim = s.chars().count();
    if dim == 0 || dim > MAX_AMBIENT {
        return None;
    }
    s.chars().try_fold((0u32, dim), |(m, d), c| match c {
        '+' => Some((m << 1 | 1, d)),
        '-' => Some((m << 1, d)),
        _ => None,
    })
}

/// A point of Y⁰: the root, or `[m − 1 + λ, x]` on the edge `T_{m,x}`
/// with `m = word.len() ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeAddress {
    Root,
    Edge { word: Vec<u32>, lambda: Q },
}

impl TreeAddress {
    pub fn vertex(word: Vec<u32>) -> Self {
        if word.is_empty() {
            TreeAddress::Root
        } else {
            TreeAddress::Edge {
                word,
                lambda: Q::from_integer(1.into()),
            }
        }
    }

    /// Rewrites `λ = 0` to the parent vertex, so identified endpoints share
    /// one address.
    pub fn canonical(self) -> Self {
        match self {
            TreeAddress::Edge { mut word, lambda } if lambda == Q::from_integer(0.into()) => {
                word.pop();
                TreeAddress::vertex(word)
            }
            other => other,
        }
    }

    /// `q₀`, the distance from the root.
    pub fn height(&self) -> Q {
        match self {
            TreeAddress::Root => Q::from_integer(0.into()),
            TreeAddress::Edge { word, lambda } => Q::from_integer((word.len() as i64 - 1).into()) + lambda,
        }
    }

    pub fn to_text(&self, dim: usize) -> String {
        match self {
            TreeAddress::Root => "root".into(),
            TreeAddress::Edge { word, lambda } => {
                let w: Vec<String> = word.iter().map(|&s| format_signs(s, dim)).collect();
                format!("{}@{}", w.join("."), format_q(lambda))
            }
        }
    }

    /// Parses `root` or `+-+.+++@1/2`; returns the address and the ambient
    /// dimension implied by the word (if any).
    pub fn parse(s: &str) -> Option<(Self, Option<usize>)> {
        let s = s.trim();
        if s == "root" {
            return Some((TreeAddress::Root, None));
        }
        let (w, l) = s.split_once('@').unwrap_or((s, "1"));
        let lambda = parse_q(l).ok()?;
        let mut dim = None;
        let mut word = Vec::new();
        for part in w.split('.') {
            let (m, d) = parse_signs(part)?;
            if dim.is_some_and(|x| x != d) {
                return None;
            }
            dim = Some(d);
            word.push(m);
        }
        Some((TreeAddress::Edge { word, lambda }, dim))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    NormBound,
    GridIdentity,
    Density,
    Transversality,
    FaceConsistency,
    EndpointEstimate,
    EstimateA,
    EpsilonProfile,
    Lipschitz,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        write!(f, "{}", s.as_ref().and_then(|v| v.as_str()).unwrap_or("?"))
    }
}

/// A pass/fail claim with the exact data needed to re-check it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub subject: String,
    pub pass: bool,
    pub witness: serde_json::Value,
}

impl Certificate {
    pub fn new(kind: CertificateKind, subject: impl Into<String>, pass: bool, witness: serde_json::Value) -> Self {
        Self {
            kind,
            subject: subject.into(),
            pass,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PcError {
    #[error("malformed tree address: {0}")]
    MalformedAddress(String),
    #[error("enumeration of {0} words exceeds the size guard")]
    TooLarge(u128),
    #[error("dimension condition fails: {0}")]
    DimensionViolation(String),
    #[error("no certified sample after {attempts} attempts")]
    RetryBudgetExhausted { attempts: usize },
    #[error("restriction leaves no fibers")]
    EmptyRestriction,
    #[error("inconsistent fiber data: {0}")]
    InconsistentFibers(String),
    #[error("ambient dimension {0} exceeds {MAX_AMBIENT}")]
    DimensionTooLarge(usize),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn sign_masks_order_lexicographically() {
        let dim = 3;
        let all: Vec<String> = (0..8u32).map(|m| format_signs(m, dim)).collect();
        assert_eq!(all[0], "---");
        assert_eq!(all[1], "--+");
        assert_eq!(all[7], "+++");
        assert_eq!(sign_vector(0b100, 3), vec![1, -1, -1]);
        assert_eq!(parse_signs("+-+"), Some((0b101, 3)));
    }

    #[test]
    fn canonical_addresses() {
        let a = TreeAddress::Edge {
            word: vec![7, 3],
            lambda: frac(0, 1),
        };
        assert_eq!(a.canonical(), TreeAddress::vertex(vec![7]));
        let b = TreeAddress::Edge {
            word: vec![7],
            lambda: frac(0, 1),
        };
        assert_eq!(b.canonical(), TreeAddress::Root);
        let c = TreeAddress::Edge {
            word: vec![7, 3],
            lambda: frac(1, 2),
        };
        assert_eq!(c.height(), frac(3, 2));
        let text = c.to_text(3);
        assert_eq!(text, "+++.-++@1/2");
        assert_eq!(TreeAddress::parse(&text), Some((c, Some(3))));
    }
}
