//! Finite topological spaces with opens stored as `u64` bitsets over point
//! indices. Families are kept sorted and deduplicated so every scan (and so
//! every reported witness) follows one canonical order.

use serde::{Deserialize, Serialize};

use super::{Label, TopologyError};

pub type PointSet = u64;

pub const MAX_POINTS: usize = 64;

pub fn members(set: PointSet) -> impl Iterator<Item = usize> {
    (0..MAX_POINTS).filter(move |i| set >> i & 1 == 1)
}

pub fn singleton(i: usize) -> PointSet {
    1u64 << i
}

fn full_mask(n: usize) -> PointSet {
    if n == MAX_POINTS {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteT0Space {
    labels: Vec<Label>,
    opens: Vec<PointSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    EmptyPresent,
    FullPresent,
    UnionClosed,
    IntersectionClosed,
    T0,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AxiomWitness {
    Missing { set: Vec<Label> },
    Pair { left: Vec<Label>, right: Vec<Label> },
    Indistinguishable { a: Label, b: Label },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AxiomWitness>,
}

/// Outcome of [`FiniteT0Space::verify_topology`]: one line per axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyCertificate {
    pub points: usize,
    pub opens: usize,
    pub checks: Vec<AxiomCheck>,
}

impl TopologyCertificate {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks.iter().find(|c| c.axiom == axiom).expect("all axioms are reported")
    }
}

impl FiniteT0Space {
    /// Stores the family without checking the axioms. Only the ground-set
    /// bound is enforced; use [`verify_topology`](Self::verify_topology) to
    /// audit the rest.
    pub fn new_unchecked(
        labels: Vec<Label>,
        opens: impl IntoIterator<Item = PointSet>,
    ) -> Result<Self, TopologyError> {
        if labels.len() > MAX_POINTS {
            return Err(TopologyError::TooManyPoints(labels.len()));
        }
        let full = full_mask(labels.len());
        let mut opens: Vec<PointSet> = opens.into_iter().collect();
        if let Some(&bad) = opens.iter().find(|&&u| u & !full != 0) {
            return Err(TopologyError::OpenOutsideGround(bad));
        }
        opens.sort_unstable();
        opens.dedup();
        Ok(Self { labels, opens })
    }

    /// Builds a space and rejects families failing any axiom.
    pub fn new(
        labels: Vec<Label>,
        opens: impl IntoIterator<Item = PointSet>,
    ) -> Result<Self, TopologyError> {
        let space = Self::new_unchecked(labels, opens)?;
        let cert = space.verify_topology();
        match cert.checks.iter().find(|c| !c.pass) {
            None => Ok(space),
            Some(c) => Err(TopologyError::AxiomFailed(c.axiom)),
        }
    }

    /// Discrete space on `n` points labelled `0..n`.
    pub fn discrete(n: usize) -> Self {
        let labels = (0..n).map(|i| Label::int(i as i64)).collect();
        Self::new_unchecked(labels, 0..=full_mask(n)).expect("n <= 64")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn full(&self) -> PointSet {
        full_mask(self.labels.len())
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    pub fn is_closed(&self, set: PointSet) -> bool {
        self.is_open(self.full() & !set)
    }

    /// Closed sets, sorted.
    pub fn closed_sets(&self) -> Vec<PointSet> {
        let full = self.full();
        let mut c: Vec<PointSet> = self.opens.iter().map(|u| full & !u).collect();
        c.sort_unstable();
        c
    }

    pub fn index_of(&self, label: &Label) -> Result<usize, TopologyError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| TopologyError::UnknownPoint(label.clone()))
    }

    pub fn labels_of(&self, set: PointSet) -> Vec<Label> {
        members(set).map(|i| self.labels[i].clone()).collect()
    }

    /// Smallest closed set containing `set`.
    pub fn closure(&self, set: PointSet) -> PointSet {
        let missed = self
            .opens
            .iter()
            .filter(|&&u| u & set == 0)
            .fold(0, |acc, &u| acc | u);
        self.full() & !missed
    }

    /// Smallest open set containing `set`; in a finite space this is the
    /// intersection of all open supersets.
    pub fn open_hull(&self, set: PointSet) -> PointSet {
        self.opens
            .iter()
            .filter(|&&u| u & set == set)
            .fold(self.full(), |acc, &u| acc & u)
    }

    pub fn point_closure(&self, x: &Label) -> Result<PointSet, TopologyError> {
        Ok(self.closure(singleton(self.index_of(x)?)))
    }

    pub fn verify_topology(&self) -> TopologyCertificate {
        let full = self.full();
        let present = |s: PointSet| self.is_open(s);
        let mut checks = Vec::with_capacity(5);

        let missing = |s: PointSet| AxiomWitness::Missing { set: self.labels_of(s) };
        checks.push(AxiomCheck {
            axiom: Axiom::EmptyPresent,
            pass: present(0),
            witness: (!present(0)).then(|| missing(0)),
        });
        checks.push(AxiomCheck {
            axiom: Axiom::FullPresent,
            pass: present(full),
            witness: (!present(full)).then(|| missing(full)),
        });

        for (axiom, op) in [
            (Axiom::UnionClosed, (|a, b| a | b) as fn(PointSet, PointSet) -> PointSet),
            (Axiom::IntersectionClosed, |a, b| a & b),
        ] {
            let bad = self.opens.iter().enumerate().find_map(|(i, &a)| {
                self.opens[i + 1..]
                    .iter()
                    .find(|&&b| !present(op(a, b)))
                    .map(|&b| (a, b))
            });
            checks.push(AxiomCheck {
                axiom,
                pass: bad.is_none(),
                witness: bad.map(|(a, b)| AxiomWitness::Pair {
                    left: self.labels_of(a),
                    right: self.labels_of(b),
                }),
            });
        }

        let n = self.len();
        let bad = (0..n).find_map(|a| {
            (a + 1..n)
                .find(|&b| {
                    !self
                        .opens
                        .iter()
                        .any(|&u| (u >> a & 1) != (u >> b & 1))
                })
                .map(|b| (a, b))
        });
        checks.push(AxiomCheck {
            axiom: Axiom::T0,
            pass: bad.is_none(),
            witness: bad.map(|(a, b)| AxiomWitness::Indistinguishable {
                a: self.labels[a].clone(),
                b: self.labels[b].clone(),
            }),
        });

        TopologyCertificate {
            points: n,
            opens: self.opens.len(),
            checks,
        }
    }

    fn require_t0(&self) -> Result<(), TopologyError> {
        let cert = self.verify_topology();
        if cert.check(Axiom::T0).pass {
            Ok(())
        } else {
            Err(TopologyError::NotT0)
        }
    }

    /// Some pair of proper closed sets covering the space, if any.
    pub fn closed_cover_witness(&self) -> Option<(PointSet, PointSet)> {
        let full = self.full();
        let proper: Vec<PointSet> = self.closed_sets().into_iter().filter(|&c| c != full).collect();
        proper.iter().enumerate().find_map(|(i, &a)| {
            proper[i..].iter().find(|&&b| a | b == full).map(|&b| (a, b))
        })
    }

    /// Some pair of disjoint nonempty opens, if any.
    pub fn disjoint_opens_witness(&self) -> Option<(PointSet, PointSet)> {
        let nonempty: Vec<PointSet> = self.opens.iter().copied().filter(|&u| u != 0).collect();
        nonempty.iter().enumerate().find_map(|(i, &a)| {
            nonempty[i + 1..].iter().find(|&&b| a & b == 0).map(|&b| (a, b))
        })
    }

    /// Prime: nonempty and not the union of two proper closed subsets.
    ///
    /// Both that formulation and "no two disjoint nonempty opens" are
    /// evaluated; disagreement would mean a broken open family.
    pub fn is_prime_space(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        let by_cover = self.closed_cover_witness().is_none();
        let by_opens = self.disjoint_opens_witness().is_none();
        assert_eq!(by_cover, by_opens, "primeness routes disagree on a non-topology");
        by_cover
    }

    /// Minimal open neighbourhood of each point.
    pub fn minimal_neighbourhoods(&self) -> Vec<PointSet> {
        (0..self.len()).map(|i| self.open_hull(singleton(i))).collect()
    }

    /// Whether the closed set `c` is prime in its relative topology.
    ///
    /// Every nonempty relatively open subset of `c` contains `U_x ∩ c` for some
    /// `x ∈ c`, so it is enough to intersect those basic pieces pairwise.
    pub fn is_relatively_prime(&self, c: PointSet, nbhd: &[PointSet]) -> bool {
        if c == 0 {
            return false;
        }
        let pts: Vec<usize> = members(c).collect();
        pts.iter().all(|&x| pts.iter().all(|&y| nbhd[x] & nbhd[y] & c != 0))
    }

    /// Nonempty closed prime subsets that are not the closure of a point.
    pub fn point_completeness_failures(&self) -> Result<Vec<PointSet>, TopologyError> {
        self.require_t0()?;
        let nbhd = self.minimal_neighbourhoods();
        let closures: Vec<PointSet> = (0..self.len()).map(|i| self.closure(singleton(i))).collect();
        Ok(self
            .closed_sets()
            .into_iter()
            .filter(|&c| self.is_relatively_prime(c, &nbhd))
            .filter(|&c| !members(c).any(|x| closures[x] == c))
            .collect())
    }

    pub fn is_point_complete(&self) -> Result<bool, TopologyError> {
        Ok(self.point_completeness_failures()?.is_empty())
    }

    /// Whether a permutation of point indices maps opens onto opens.
    pub fn is_homeomorphism(&self, perm: &[usize]) -> bool {
        self.opens.iter().all(|&u| self.is_open(apply_perm(perm, u)))
    }

    /// Opens invariant under every permutation in `perms`.
    pub fn invariant_opens(&self, perms: &[Vec<usize>]) -> Vec<PointSet> {
        self.opens
            .iter()
            .copied()
            .filter(|&u| perms.iter().all(|p| apply_perm(p, u) == u))
            .collect()
    }
}

pub fn apply_perm(perm: &[usize], set: PointSet) -> PointSet {
    members(set).fold(0, |acc, i| acc | singleton(perm[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<Label> {
        (0..n).map(|i| Label::int(i as i64)).collect()
    }

    /// {∅, {a}, {a, b}} with a = 0, b = 1.
    fn sierpinski() -> FiniteT0Space {
        FiniteT0Space::new(labels(2), [0b00, 0b01, 0b11]).unwrap()
    }

    #[test]
    fn sierpinski_passes_every_axiom() {
        let cert = sierpinski().verify_topology();
        assert!(cert.all_pass());
        assert_eq!(cert.checks.len(), 5);
        assert_eq!(cert.opens, 3);
    }

    #[test]
    fn missing_union_is_reported_with_pair() {
        let s = FiniteT0Space::new_unchecked(labels(2), [0b00, 0b01, 0b10]).unwrap();
        let cert = s.verify_topology();
        let c = cert.check(Axiom::UnionClosed);
        assert!(!c.pass);
        assert_eq!(
            c.witness,
            Some(AxiomWitness::Pair {
                left: vec![Label::int(0)],
                right: vec![Label::int(1)]
            })
        );
        assert!(!cert.check(Axiom::FullPresent).pass);
        assert!(FiniteT0Space::new(labels(2), [0b00, 0b01, 0b10]).is_err());
    }

    #[test]
    fn indiscrete_two_points_fail_t0() {
        let s = FiniteT0Space::new_unchecked(labels(2), [0b00, 0b11]).unwrap();
        let cert = s.verify_topology();
        assert!(!cert.check(Axiom::T0).pass);
        assert_eq!(s.is_point_complete(), Err(TopologyError::NotT0));
    }

    #[test]
    fn closures_in_sierpinski() {
        let s = sierpinski();
        assert_eq!(s.point_closure(&Label::int(0)).unwrap(), 0b11);
        assert_eq!(s.point_closure(&Label::int(1)).unwrap(), 0b10);
        assert!(s.point_closure(&Label::int(7)).is_err());
    }

    #[test]
    fn discrete_closures_are_singletons() {
        let d = FiniteT0Space::discrete(4);
        for i in 0..4 {
            assert_eq!(d.closure(singleton(i)), singleton(i));
        }
    }

    #[test]
    fn primeness_examples() {
        assert!(sierpinski().is_prime_space());
        let d = FiniteT0Space::discrete(2);
        assert!(!d.is_prime_space());
        assert_eq!(d.disjoint_opens_witness(), Some((0b01, 0b10)));
        assert!(d.closed_cover_witness().is_some());
        assert!(FiniteT0Space::discrete(1).is_prime_space());
    }

    #[test]
    fn point_complete_examples() {
        assert!(sierpinski().is_point_complete().unwrap());
        assert!(FiniteT0Space::discrete(3).is_point_complete().unwrap());
    }

    #[test]
    fn open_outside_ground_rejected() {
        assert_eq!(
            FiniteT0Space::new_unchecked(labels(1), [0b10]),
            Err(TopologyError::OpenOutsideGround(0b10))
        );
    }
}
