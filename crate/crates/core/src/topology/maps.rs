//! Continuous maps between finite spaces and the pseudo-open /
//! pseudo-epimorphic conditions, evaluated by brute force over all opens
//! and closed sets.

use serde::{Deserialize, Serialize};

use super::space::{members, singleton, FiniteT0Space, PointSet};
use super::{Label, TopologyError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceMap {
    domain: FiniteT0Space,
    codomain: FiniteT0Space,
    assignment: Vec<usize>,
}

/// Why a map fails to be pseudo-open or pseudo-epimorphic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "condition")]
pub enum PseudoWitness {
    /// `(x, y) ↦ x` sends `R_π ∩ (U × V)` to a non-open set.
    ProjectionNotOpen { u: Vec<Label>, v: Vec<Label>, image: Vec<Label> },
    /// An `R_π`-invariant open whose image is not open in `π(X)`.
    InvariantImageNotOpen { u: Vec<Label>, image: Vec<Label> },
    /// A closed `F` in which `π(X) ∩ F` is not dense.
    NotDense { f: Vec<Label>, closure_of_trace: Vec<Label> },
}

impl SpaceMap {
    pub fn new(
        domain: FiniteT0Space,
        codomain: FiniteT0Space,
        assignment: Vec<usize>,
    ) -> Result<Self, TopologyError> {
        if assignment.len() != domain.len() {
            return Err(TopologyError::AssignmentLength {
                expected: domain.len(),
                got: assignment.len(),
            });
        }
        if let Some(&bad) = assignment.iter().find(|&&j| j >= codomain.len()) {
            return Err(TopologyError::AssignmentRange(bad));
        }
        let map = Self {
            domain,
            codomain,
            assignment,
        };
        if let Some(&v) = map
            .codomain
            .opens()
            .iter()
            .find(|&&v| !map.domain.is_open(map.preimage(v)))
        {
            return Err(TopologyError::NotContinuous(map.codomain.labels_of(v)));
        }
        Ok(map)
    }

    pub fn identity(space: &FiniteT0Space) -> Self {
        Self {
            domain: space.clone(),
            codomain: space.clone(),
            assignment: (0..space.len()).collect(),
        }
    }

    pub fn domain(&self) -> &FiniteT0Space {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteT0Space {
        &self.codomain
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn image_of(&self, set: PointSet) -> PointSet {
        members(set).fold(0, |acc, i| acc | singleton(self.assignment[i]))
    }

    pub fn preimage(&self, set: PointSet) -> PointSet {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &j)| set >> j & 1 == 1)
            .fold(0, |acc, (i, _)| acc | singleton(i))
    }

    /// `self` after `first`: `x ↦ self(first(x))`.
    pub fn after(&self, first: &SpaceMap) -> Result<SpaceMap, TopologyError> {
        if first.codomain != self.domain {
            return Err(TopologyError::CompositionMismatch);
        }
        Ok(SpaceMap {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            assignment: first.assignment.iter().map(|&j| self.assignment[j]).collect(),
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.image_of(self.domain.full()) == self.codomain.full()
    }

    pub fn is_open_map(&self) -> bool {
        self.domain
            .opens()
            .iter()
            .all(|&u| self.codomain.is_open(self.image_of(u)))
    }

    /// Rows of `R_π = {(x, y) : π(y) ∈ cl{π(x)}}`: bit `y` of row `x`.
    pub fn pseudo_graph(&self) -> Vec<PointSet> {
        let closures: Vec<PointSet> = (0..self.codomain.len())
            .map(|j| self.codomain.closure(singleton(j)))
            .collect();
        (0..self.domain.len())
            .map(|x| self.preimage(closures[self.assignment[x]]))
            .collect()
    }

    pub fn pseudo_graph_pairs(&self) -> Vec<(Label, Label)> {
        let rows = self.pseudo_graph();
        let l = self.domain.labels();
        rows.iter()
            .enumerate()
            .flat_map(|(x, &row)| members(row).map(move |y| (l[x].clone(), l[y].clone())))
            .collect()
    }

    pub fn pseudo_open_witness(&self) -> Option<PseudoWitness> {
        let rows = self.pseudo_graph();
        let opens = self.domain.opens();
        let lab = |s| self.domain.labels_of(s);
        for &u in opens {
            for &v in opens {
                let image = members(u)
                    .filter(|&x| rows[x] & v != 0)
                    .fold(0, |acc, x| acc | singleton(x));
                if !self.domain.is_open(image) {
                    return Some(PseudoWitness::ProjectionNotOpen {
                        u: lab(u),
                        v: lab(v),
                        image: lab(image),
                    });
                }
            }
        }
        let range = self.image_of(self.domain.full());
        for &u in opens {
            // invariant: y ∈ U and (x, y) ∈ R_π imply x ∈ U
            let invariant = (0..self.domain.len()).all(|x| rows[x] & u == 0 || u >> x & 1 == 1);
            if !invariant {
                continue;
            }
            let image = self.image_of(u);
            if self.codomain.open_hull(image) & range != image {
                return Some(PseudoWitness::InvariantImageNotOpen {
                    u: lab(u),
                    image: self.codomain.labels_of(image),
                });
            }
        }
        None
    }

    pub fn is_pseudo_open(&self) -> bool {
        self.pseudo_open_witness().is_none()
    }

    pub fn pseudo_epimorphic_witness(&self) -> Option<PseudoWitness> {
        let range = self.image_of(self.domain.full());
        self.codomain.closed_sets().into_iter().find_map(|f| {
            let cl = self.codomain.closure(range & f);
            (cl != f).then(|| PseudoWitness::NotDense {
                f: self.codomain.labels_of(f),
                closure_of_trace: self.codomain.labels_of(cl),
            })
        })
    }

    pub fn is_pseudo_epimorphic(&self) -> bool {
        self.pseudo_epimorphic_witness().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sierpinski() -> FiniteT0Space {
        let labels = vec![Label::int(0), Label::int(1)];
        FiniteT0Space::new(labels, [0b00, 0b01, 0b11]).unwrap()
    }

    #[test]
    fn identity_on_sierpinski_pseudo_graph() {
        let s = sierpinski();
        let id = SpaceMap::identity(&s);
        // cl{a} = {a, b}, cl{b} = {b}
        let pairs = id.pseudo_graph_pairs();
        assert_eq!(
            pairs,
            vec![
                (Label::int(0), Label::int(0)),
                (Label::int(0), Label::int(1)),
                (Label::int(1), Label::int(1)),
            ]
        );
        assert!(id.is_pseudo_open());
        assert!(id.is_pseudo_epimorphic());
    }

    #[test]
    fn constant_map_gives_full_relation() {
        let s = FiniteT0Space::discrete(3);
        let point = FiniteT0Space::discrete(1);
        let m = SpaceMap::new(s, point, vec![0, 0, 0]).unwrap();
        assert!(m.pseudo_graph().iter().all(|&r| r == 0b111));
    }

    #[test]
    fn discrete_codomain_gives_equal_image_relation() {
        let s = sierpinski();
        let d = FiniteT0Space::discrete(2);
        // constant map into a discrete space is continuous
        let m = SpaceMap::new(s, d, vec![1, 1]).unwrap();
        assert_eq!(m.pseudo_graph(), vec![0b11, 0b11]);
        let d3 = FiniteT0Space::discrete(3);
        let m = SpaceMap::new(d3.clone(), d3, vec![2, 0, 2]).unwrap();
        assert_eq!(m.pseudo_graph(), vec![0b101, 0b010, 0b101]);
    }

    #[test]
    fn non_dense_image_is_caught() {
        // one point mapped onto b in Sierpinski {a, b}; F = whole space is
        // closed and cl({b}) = {b} ≠ F
        let m = SpaceMap::new(FiniteT0Space::discrete(1), sierpinski(), vec![1]).unwrap();
        match m.pseudo_epimorphic_witness() {
            Some(PseudoWitness::NotDense { f, closure_of_trace }) => {
                assert_eq!(f, vec![Label::int(0), Label::int(1)]);
                assert_eq!(closure_of_trace, vec![Label::int(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn discontinuous_assignment_rejected() {
        // discrete -> Sierpinski is always continuous; the reverse swap is not
        let err = SpaceMap::new(sierpinski(), FiniteT0Space::discrete(2), vec![0, 1]);
        assert!(matches!(err, Err(TopologyError::NotContinuous(_))));
    }

    #[test]
    fn composition_checks_spaces() {
        let s = sierpinski();
        let id = SpaceMap::identity(&s);
        assert_eq!(id.after(&id).unwrap(), id);
        let d = SpaceMap::identity(&FiniteT0Space::discrete(2));
        assert_eq!(id.after(&d), Err(TopologyError::CompositionMismatch));
    }
}
