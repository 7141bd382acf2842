//! Order ideals `N_F = {η : η = 0 on F}` for finite `F ⊆ P`, and their
//! images as open sets of a Ξ(P) window.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::element::{Gamma, GammaElement};
use super::RieszError;
use crate::topology::space::PointSet;
use crate::topology::xi::XiWindow;
use crate::topology::Point;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderIdeal {
    pub zero_set: BTreeSet<Point>,
}

impl OrderIdeal {
    pub fn contains(&self, a: &GammaElement) -> bool {
        self.zero_set.iter().all(|x| a.value(x).is_zero())
    }

    /// `N_F ∩ N_G = N_{F ∪ G}`.
    pub fn meet(&self, other: &OrderIdeal) -> OrderIdeal {
        OrderIdeal {
            zero_set: self.zero_set.union(&other.zero_set).cloned().collect(),
        }
    }

    /// `N_F ⊆ N_G` exactly when `G ⊆ F`.
    pub fn is_subideal_of(&self, other: &OrderIdeal) -> bool {
        other.zero_set.is_subset(&self.zero_set)
    }
}

pub fn ideal_from_compact(gamma: &Gamma, f: impl IntoIterator<Item = Point>) -> Result<OrderIdeal, RieszError> {
    let zero_set: BTreeSet<Point> = f.into_iter().collect();
    if let Some(x) = zero_set.iter().find(|x| !gamma.model().contains(x)) {
        return Err(RieszError::InvalidPoint(x.clone()));
    }
    Ok(OrderIdeal { zero_set })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSet {
    /// Common zeros inside the window.
    pub points: Vec<Point>,
    /// True when every point outside the window is a common zero as well
    /// (all constants vanish, or there are no generators).
    pub includes_outside: bool,
}

/// `{x ∈ window : η(x) = 0 for every generator}`; off the supports each
/// generator equals its constant.
pub fn zero_set_of_family(gens: &[GammaElement], window: &[Point]) -> Result<ZeroSet, RieszError> {
    let inside: BTreeSet<&Point> = window.iter().collect();
    if let Some(x) = gens.iter().flat_map(|g| g.deviations().keys()).find(|x| !inside.contains(x)) {
        return Err(RieszError::EscapesWindow(x.clone()));
    }
    let points = inside
        .into_iter()
        .filter(|x| gens.iter().all(|g| g.value(x).is_zero()))
        .cloned()
        .collect();
    Ok(ZeroSet {
        points,
        includes_outside: gens.iter().all(|g| g.constant().is_zero()),
    })
}

/// The open set `Ξ ∖ F` of the window model.
pub fn ideal_to_xi_open(ideal: &OrderIdeal, w: &XiWindow) -> Result<PointSet, RieszError> {
    w.complement_open(&ideal.zero_set).map_err(RieszError::EscapesWindow)
}

/// An element of exactly one of `N_{f1}`, `N_{f2}` when `f1 ≠ f2`:
/// `w_y δ_x − w_x δ_y` with `x` in one set only and `y` outside `{x}` and
/// the other set. The flag says whether the element lies in `N_{f1}`.
pub fn separating_witness(
    gamma: &Gamma,
    f1: &BTreeSet<Point>,
    f2: &BTreeSet<Point>,
    pool: &[Point],
) -> Result<Option<(GammaElement, bool)>, RieszError> {
    let (x, other, in_first) = match f2.difference(f1).next() {
        Some(x) => (x, f1, true),
        None => match f1.difference(f2).next() {
            Some(x) => (x, f2, false),
            None => return Ok(None),
        },
    };
    let Some(y) = pool.iter().find(|y| *y != x && !other.contains(*y)) else {
        return Ok(None);
    };
    let eta = gamma.element(
        num_traits::Zero::zero(),
        [(x.clone(), gamma.weight(y)), (y.clone(), -gamma.weight(x))],
    )?;
    Ok(Some((eta, in_first)))
}
