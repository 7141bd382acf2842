//! Discrete weighted models of P and finite windows of Ξ(P).
//!
//! On a discrete P the compact subsets are exactly the finite ones, so the
//! window model of Ξ(P) on a finite `W ⊆ P` has ground set `W ∪ {∞}` and
//! opens `∅` together with `(W ∪ {∞}) ∖ K` for every `K ⊆ W`.

use std::collections::BTreeSet;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::action::LabelMap;
use super::maps::SpaceMap;
use super::space::{singleton, FiniteT0Space, PointSet};
use super::{Label, Point, TopologyError};
use crate::rational::{serde_q, Q};

/// Largest window for which all `2^|W| + 1` opens are materialised.
pub const MAX_WINDOW: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LabelScheme {
    Integers,
    Tuples { arity: usize },
    Finite { points: Vec<Point> },
}

impl LabelScheme {
    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (LabelScheme::Integers, Point::Int(_)) => true,
            (LabelScheme::Tuples { arity }, Point::Tuple(t)) => t.len() == *arity,
            (LabelScheme::Finite { points }, p) => points.contains(p),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightOverride {
    pub point: Point,
    #[serde(with = "serde_q")]
    pub weight: Q,
}

/// Point masses `w_x = μ({x})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Weights {
    Counting,
    Table {
        #[serde(with = "serde_q")]
        default: Q,
        overrides: Vec<WeightOverride>,
    },
}

/// Rule producing the nested finite sets `L_1 ⊆ L_2 ⊆ …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Exhaustion {
    /// `[-n, n]` on integers, `[-n, n]^d` on tuples, everything on a finite scheme.
    Symmetric,
    /// `[-2^(n-1), 2^(n-1) - 1]` on integers: `|L_n| = 2^n`.
    PowerOfTwo,
    Explicit { sets: Vec<Vec<Point>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteSpaceModel {
    pub scheme: LabelScheme,
    pub weights: Weights,
    pub exhaustion: Exhaustion,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("label scheme has no points")]
    EmptyScheme,
    #[error("weight at {0} is not strictly positive")]
    NonPositiveWeight(String),
    #[error("exhaustion set {0} is empty")]
    EmptyExhaustion(usize),
    #[error("exhaustion set {0} is not contained in set {1}")]
    NotNested(usize, usize),
    #[error("exhaustion rule is not available for this label scheme")]
    UnsupportedExhaustion,
    #[error("point {0} is not a valid label")]
    InvalidLabel(Point),
}

impl DiscreteSpaceModel {
    pub fn new(
        scheme: LabelScheme,
        weights: Weights,
        exhaustion: Exhaustion,
    ) -> Result<Self, ModelError> {
        let model = Self {
            scheme,
            weights,
            exhaustion,
        };
        model.validate()?;
        Ok(model)
    }

    /// ℤ with counting measure and `L_n = [-n, n]`.
    pub fn integers() -> Self {
        Self {
            scheme: LabelScheme::Integers,
            weights: Weights::Counting,
            exhaustion: Exhaustion::Symmetric,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if let LabelScheme::Finite { points } = &self.scheme {
            if points.is_empty() {
                return Err(ModelError::EmptyScheme);
            }
        }
        if let Weights::Table { default, overrides } = &self.weights {
            if !default.is_positive() {
                return Err(ModelError::NonPositiveWeight("default".into()));
            }
            for o in overrides {
                if !self.scheme.contains(&o.point) {
                    return Err(ModelError::InvalidLabel(o.point.clone()));
                }
                if !o.weight.is_positive() {
                    return Err(ModelError::NonPositiveWeight(o.point.to_string()));
                }
            }
        }
        match (&self.exhaustion, &self.scheme) {
            (Exhaustion::PowerOfTwo, LabelScheme::Integers) => {}
            (Exhaustion::PowerOfTwo, _) => return Err(ModelError::UnsupportedExhaustion),
            (Exhaustion::Explicit { sets }, _) => {
                for (i, s) in sets.iter().enumerate() {
                    if s.is_empty() {
                        return Err(ModelError::EmptyExhaustion(i + 1));
                    }
                    if let Some(p) = s.iter().find(|p| !self.scheme.contains(p)) {
                        return Err(ModelError::InvalidLabel(p.clone()));
                    }
                    if i > 0 && !sets[i - 1].iter().all(|p| s.contains(p)) {
                        return Err(ModelError::NotNested(i, i + 1));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn weight(&self, p: &Point) -> Q {
        match &self.weights {
            Weights::Counting => Q::one(),
            Weights::Table { default, overrides } => overrides
                .iter()
                .find(|o| &o.point == p)
                .map_or_else(|| default.clone(), |o| o.weight.clone()),
        }
    }

    pub fn measure<'a>(&self, pts: impl IntoIterator<Item = &'a Point>) -> Q {
        pts.into_iter().map(|p| self.weight(p)).sum()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.scheme.contains(p)
    }

    /// `L_n` for `n ≥ 1`, sorted; `None` past the end of an explicit list.
    pub fn exhaustion_set(&self, n: usize) -> Option<Vec<Point>> {
        if n == 0 {
            return None;
        }
        let n_i = n as i64;
        let set = match (&self.exhaustion, &self.scheme) {
            (Exhaustion::Explicit { sets }, _) => sets.get(n - 1)?.clone(),
            (_, LabelScheme::Finite { points }) => points.clone(),
            (Exhaustion::Symmetric, LabelScheme::Integers) => (-n_i..=n_i).map(Point::Int).collect(),
            (Exhaustion::Symmetric, LabelScheme::Tuples { arity }) => box_points(*arity, n_i),
            (Exhaustion::PowerOfTwo, LabelScheme::Integers) => {
                let half = 1i64 << (n - 1).min(62);
                (-half..half).map(Point::Int).collect()
            }
            (Exhaustion::PowerOfTwo, _) => return None,
        };
        let mut set = set;
        set.sort();
        set.dedup();
        Some(set)
    }

    /// `μ(L_n)`, in closed form for counting measure on the built-in rules.
    pub fn exhaustion_measure(&self, n: usize) -> Option<Q> {
        if n == 0 {
            return None;
        }
        if self.weights == Weights::Counting {
            let count = |v: u64| Some(Q::from_integer(v.into()));
            match (&self.exhaustion, &self.scheme) {
                (Exhaustion::Symmetric, LabelScheme::Integers) => return count(2 * n as u64 + 1),
                (Exhaustion::Symmetric, LabelScheme::Tuples { arity }) => {
                    return Some(Q::from_integer(num_bigint::BigInt::from(2 * n as u64 + 1).pow(*arity as u32)))
                }
                (Exhaustion::PowerOfTwo, LabelScheme::Integers) => return Some(crate::rational::pow2(n.min(63) as i64)),
                _ => {}
            }
        }
        self.exhaustion_set(n).map(|set| self.measure(&set))
    }

    /// Smallest `n` (and `L_n`) with `support ⊆ L_n`, searching up to `max_n`.
    pub fn first_covering(
        &self,
        support: &BTreeSet<Point>,
        max_n: usize,
    ) -> Option<(usize, Vec<Point>)> {
        let start = match (&self.exhaustion, &self.scheme) {
            (Exhaustion::Symmetric, LabelScheme::Integers | LabelScheme::Tuples { .. }) => {
                let r = support
                    .iter()
                    .flat_map(|p| p.coords())
                    .map(|c| c.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(1);
                r.max(1)
            }
            _ => 1,
        };
        (start..=max_n.max(start)).find_map(|n| {
            let set = self.exhaustion_set(n)?;
            support.iter().all(|p| set.binary_search(p).is_ok()).then_some((n, set))
        })
    }
}

fn box_points(arity: usize, r: i64) -> Vec<Point> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|pre| {
                (-r..=r).map(move |v| {
                    let mut p = pre.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(Point::Tuple).collect()
}

/// Finite model of Ξ(P) on `window ∪ {∞}`; index 0 is ∞ and window point
/// `i` (in sorted order) sits at index `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiWindow {
    pub base: DiscreteSpaceModel,
    window: Vec<Point>,
    space: FiniteT0Space,
}

pub const INFINITY_INDEX: usize = 0;

impl XiWindow {
    pub fn new(
        base: &DiscreteSpaceModel,
        window: impl IntoIterator<Item = Point>,
    ) -> Result<Self, TopologyError> {
        if matches!(&base.scheme, LabelScheme::Finite { points } if points.is_empty()) {
            return Err(TopologyError::EmptyScheme);
        }
        let mut window: Vec<Point> = window.into_iter().collect();
        window.sort();
        window.dedup();
        if let Some(p) = window.iter().find(|p| !base.contains(p)) {
            return Err(TopologyError::InvalidLabel(p.clone()));
        }
        let k = window.len();
        if k > MAX_WINDOW {
            return Err(TopologyError::WindowTooLarge(k));
        }
        let labels: Vec<Label> = std::iter::once(Label::Infinity)
            .chain(window.iter().cloned().map(Label::Point))
            .collect();
        let full: PointSet = (1u64 << (k + 1)) - 1;
        // K ranges over subsets of the window, encoded on bits 1..=k.
        let opens = std::iter::once(0).chain((0..1u64 << k).map(|kset| full & !(kset << 1)));
        let space = FiniteT0Space::new_unchecked(labels, opens)?;
        Ok(Self {
            base: base.clone(),
            window,
            space,
        })
    }

    /// Integer window `lo..=hi` over ℤ with counting measure.
    pub fn integer_range(lo: i64, hi: i64) -> Result<Self, TopologyError> {
        Self::new(&DiscreteSpaceModel::integers(), (lo..=hi).map(Point::Int))
    }

    pub fn window(&self) -> &[Point] {
        &self.window
    }

    pub fn space(&self) -> &FiniteT0Space {
        &self.space
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.window.binary_search(p).ok().map(|i| i + 1)
    }

    /// Bitset of a set of window points.
    pub fn mask_of<'a>(&self, pts: impl IntoIterator<Item = &'a Point>) -> Result<PointSet, Point> {
        pts.into_iter().try_fold(0, |acc, p| {
            self.index_of(p).map(|i| acc | singleton(i)).ok_or_else(|| p.clone())
        })
    }

    /// The open set `(W ∪ {∞}) ∖ K`.
    pub fn complement_open<'a>(
        &self,
        k: impl IntoIterator<Item = &'a Point>,
    ) -> Result<PointSet, Point> {
        Ok(self.space.full() & !self.mask_of(k)?)
    }
}

/// Ξ(h) on a window, with codomain the window model on `h(W)`.
pub fn xi_map(h: &LabelMap, w: &XiWindow) -> Result<SpaceMap, TopologyError> {
    let images = window_images(h, w)?;
    let target = XiWindow::new(&w.base, images.iter().cloned())?;
    xi_map_into(h, w, &target)
}

/// Ξ(h) on a window, landing in a prescribed target window.
pub fn xi_map_into(h: &LabelMap, w: &XiWindow, target: &XiWindow) -> Result<SpaceMap, TopologyError> {
    let images = window_images(h, w)?;
    let mut assignment = vec![INFINITY_INDEX];
    for img in &images {
        let j = target
            .index_of(img)
            .ok_or_else(|| TopologyError::OutsideTarget(img.clone()))?;
        assignment.push(j);
    }
    SpaceMap::new(w.space().clone(), target.space().clone(), assignment)
}

fn window_images(h: &LabelMap, w: &XiWindow) -> Result<Vec<Point>, TopologyError> {
    let mut images = Vec::with_capacity(w.window().len());
    for p in w.window() {
        let img = h
            .apply(p)
            .map_err(|_| TopologyError::InvalidLabel(p.clone()))?;
        if !w.base.contains(&img) {
            return Err(TopologyError::InvalidLabel(img));
        }
        images.push(img);
    }
    for (i, a) in images.iter().enumerate() {
        if let Some(j) = images[..i].iter().position(|b| b == a) {
            return Err(TopologyError::NotInjective(
                w.window()[j].clone(),
                w.window()[i].clone(),
            ));
        }
    }
    Ok(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn window_of_one_point_has_three_opens() {
        let w = XiWindow::integer_range(0, 0).unwrap();
        let s = w.space();
        // ∞ = bit 0, 0 = bit 1: ∅, {∞}, {0, ∞}
        assert_eq!(s.opens(), &[0b00, 0b01, 0b11]);
        assert!(s.verify_topology().all_pass());
    }

    #[test]
    fn empty_window_is_one_point_space() {
        let w = XiWindow::new(&DiscreteSpaceModel::integers(), []).unwrap();
        assert_eq!(w.space().opens(), &[0, 1]);
        assert!(w.space().verify_topology().all_pass());
    }

    #[test]
    fn three_point_window_has_nine_opens_all_containing_infinity() {
        let w = XiWindow::integer_range(-1, 1).unwrap();
        let s = w.space();
        assert_eq!(s.opens().len(), 9);
        assert!(s.verify_topology().all_pass());
        assert!(s.opens().iter().filter(|&&u| u != 0).all(|&u| u & 1 == 1));
    }

    #[test]
    fn closures_in_window() {
        let w = XiWindow::integer_range(-2, 2).unwrap();
        let s = w.space();
        assert_eq!(s.point_closure(&Label::Infinity).unwrap(), s.full());
        for p in w.window() {
            let idx = w.index_of(p).unwrap();
            assert_eq!(s.point_closure(&Label::Point(p.clone())).unwrap(), singleton(idx));
        }
    }

    #[test]
    fn window_rejects_foreign_labels_and_empty_scheme() {
        let base = DiscreteSpaceModel::integers();
        assert!(matches!(
            XiWindow::new(&base, [Point::Tuple(vec![1, 2])]),
            Err(TopologyError::InvalidLabel(_))
        ));
        let empty = DiscreteSpaceModel {
            scheme: LabelScheme::Finite { points: vec![] },
            weights: Weights::Counting,
            exhaustion: Exhaustion::Symmetric,
        };
        assert_eq!(XiWindow::new(&empty, []), Err(TopologyError::EmptyScheme));
        assert_eq!(
            DiscreteSpaceModel::new(empty.scheme.clone(), Weights::Counting, Exhaustion::Symmetric),
            Err(ModelError::EmptyScheme)
        );
    }

    #[test]
    fn exhaustion_rules() {
        let z = DiscreteSpaceModel::integers();
        assert_eq!(z.exhaustion_set(1).unwrap(), vec![Point::Int(-1), Point::Int(0), Point::Int(1)]);
        let dy = DiscreteSpaceModel::new(LabelScheme::Integers, Weights::Counting, Exhaustion::PowerOfTwo)
            .unwrap();
        assert_eq!(dy.exhaustion_set(3).unwrap().len(), 8);
        let support: BTreeSet<Point> = [Point::Int(0), Point::Int(1)].into();
        assert_eq!(z.first_covering(&support, 10).unwrap().0, 1);
        assert_eq!(dy.first_covering(&support, 10).unwrap().0, 2);
        let t = DiscreteSpaceModel::new(LabelScheme::Tuples { arity: 2 }, Weights::Counting, Exhaustion::Symmetric)
            .unwrap();
        assert_eq!(t.exhaustion_set(1).unwrap().len(), 9);
    }

    #[test]
    fn nonpositive_weights_rejected() {
        let r = DiscreteSpaceModel::new(
            LabelScheme::Integers,
            Weights::Table {
                default: q(1),
                overrides: vec![WeightOverride {
                    point: Point::Int(3),
                    weight: q(0),
                }],
            },
            Exhaustion::Symmetric,
        );
        assert_eq!(r, Err(ModelError::NonPositiveWeight("3".into())));
    }

    #[test]
    fn explicit_exhaustion_must_nest() {
        let r = DiscreteSpaceModel::new(
            LabelScheme::Integers,
            Weights::Counting,
            Exhaustion::Explicit {
                sets: vec![vec![Point::Int(0)], vec![Point::Int(1)]],
            },
        );
        assert_eq!(r, Err(ModelError::NotNested(1, 2)));
    }
}
