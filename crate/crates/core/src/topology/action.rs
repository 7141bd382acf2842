//! Group actions on P given by computable label maps, and window-level
//! semi-decisions for minimality and effectiveness of the induced action on
//! Ξ(P).
//!
//! P is infinite in general, so statements quantified over all of P come
//! back as a [`Verdict`]: `Verified` only ever means "verified on this
//! window".

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::Point;

/// A bijection of P described by a rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum LabelMap {
    Identity,
    /// `x ↦ x + offset`, coordinatewise.
    Shift { offset: Vec<i64> },
    /// `x ↦ offset − x`, coordinatewise.
    Reflect { offset: Vec<i64> },
    /// Finite permutation table; unlisted points are fixed.
    Permutation { table: Vec<(Point, Point)> },
    /// Acts on tuples `(tag, rest…)` by applying `map` to `rest`; tuples
    /// with another tag are fixed.
    OnComponent { tag: i64, map: Box<LabelMap> },
    /// Left multiplication by `letter` on the coset space `F_k / ⟨subgroup⟩`,
    /// cosets written as tuples of letters (canonical representatives).
    FreeCoset { subgroup: Vec<i64>, letter: i64 },
    /// `outer ∘ inner`.
    Compose { outer: Box<LabelMap>, inner: Box<LabelMap> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("map {map} is undefined at {point}")]
    Undefined { map: String, point: Point },
    #[error("permutation table is not a bijection")]
    BadPermutation,
    #[error("generator {0} is not a bijection near the window: {1} and {2} collide")]
    NotBijective(usize, Point, Point),
    #[error("presentation expects {expected} generators, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("word letter {0} names no generator")]
    BadLetter(i64),
}

impl LabelMap {
    pub fn shift(by: i64) -> Self {
        LabelMap::Shift { offset: vec![by] }
    }

    pub fn then(self, outer: LabelMap) -> Self {
        LabelMap::Compose {
            outer: Box::new(outer),
            inner: Box::new(self),
        }
    }

    fn name(&self) -> String {
        match self {
            LabelMap::Identity => "identity".into(),
            LabelMap::Shift { .. } => "shift".into(),
            LabelMap::Reflect { .. } => "reflect".into(),
            LabelMap::Permutation { .. } => "permutation".into(),
            LabelMap::OnComponent { tag, .. } => format!("component {tag}"),
            LabelMap::FreeCoset { .. } => "free coset".into(),
            LabelMap::Compose { .. } => "composition".into(),
        }
    }

    pub fn apply(&self, p: &Point) -> Result<Point, ActionError> {
        let undefined = || ActionError::Undefined {
            map: self.name(),
            point: p.clone(),
        };
        match self {
            LabelMap::Identity => Ok(p.clone()),
            LabelMap::Shift { offset } | LabelMap::Reflect { offset } => {
                let c = p.coords();
                if c.len() != offset.len() {
                    return Err(undefined());
                }
                let reflect = matches!(self, LabelMap::Reflect { .. });
                let out = c
                    .iter()
                    .zip(offset)
                    .map(|(x, o)| if reflect { o.checked_sub(*x) } else { x.checked_add(*o) })
                    .collect::<Option<Vec<i64>>>()
                    .ok_or_else(undefined)?;
                Ok(p.with_coords(out))
            }
            LabelMap::Permutation { table } => {
                let sources: BTreeSet<&Point> = table.iter().map(|(a, _)| a).collect();
                let targets: BTreeSet<&Point> = table.iter().map(|(_, b)| b).collect();
                if sources.len() != table.len() || sources != targets {
                    return Err(ActionError::BadPermutation);
                }
                // compare by coordinates so that `3` and `(3)` name the same point
                let c = p.coords();
                Ok(table
                    .iter()
                    .find(|(a, _)| a.coords() == c)
                    .map_or_else(|| p.clone(), |(_, b)| p.with_coords(b.coords())))
            }
            LabelMap::OnComponent { tag, map } => match p {
                Point::Tuple(t) if t.first() == Some(tag) => {
                    let img = map.apply(&Point::Tuple(t[1..].to_vec()))?;
                    let mut out = vec![*tag];
                    out.extend(img.coords());
                    Ok(Point::Tuple(out))
                }
                _ => Ok(p.clone()),
            },
            LabelMap::FreeCoset { subgroup, letter } => {
                let word = p.coords();
                if word.contains(&0) {
                    return Err(undefined());
                }
                let mut w = vec![*letter];
                w.extend(word);
                Ok(Point::Tuple(free::canonical_coset(&w, subgroup)))
            }
            LabelMap::Compose { outer, inner } => outer.apply(&inner.apply(p)?),
        }
    }

    pub fn inverse(&self) -> LabelMap {
        match self {
            LabelMap::Identity => LabelMap::Identity,
            LabelMap::Shift { offset } => LabelMap::Shift {
                offset: offset.iter().map(|o| -o).collect(),
            },
            LabelMap::Reflect { offset } => LabelMap::Reflect {
                offset: offset.clone(),
            },
            LabelMap::Permutation { table } => LabelMap::Permutation {
                table: table.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            },
            LabelMap::OnComponent { tag, map } => LabelMap::OnComponent {
                tag: *tag,
                map: Box::new(map.inverse()),
            },
            LabelMap::FreeCoset { subgroup, letter } => LabelMap::FreeCoset {
                subgroup: subgroup.clone(),
                letter: -letter,
            },
            LabelMap::Compose { outer, inner } => LabelMap::Compose {
                outer: Box::new(inner.inverse()),
                inner: Box::new(outer.inverse()),
            },
        }
    }
}

/// Reduced words in free groups; letters are `±1, ±2, …` with `-g` the
/// inverse of generator `g`.
pub mod free {
    pub fn reduce(word: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = Vec::with_capacity(word.len());
        for &l in word {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    pub fn inverse(word: &[i64]) -> Vec<i64> {
        word.iter().rev().map(|l| -l).collect()
    }

    pub fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut w = a.to_vec();
        w.extend_from_slice(b);
        reduce(&w)
    }

    pub fn power(u: &[i64], k: i64) -> Vec<i64> {
        let base = if k >= 0 { u.to_vec() } else { inverse(u) };
        (0..k.unsigned_abs()).fold(Vec::new(), |acc, _| mul(&acc, &base))
    }

    fn shortlex(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
        a.len().cmp(&b.len()).then_with(|| a.cmp(b))
    }

    /// Shortlex-least representative of the left coset `g⟨u⟩`.
    ///
    /// For nontrivial reduced `u` we have `|u^k| ≥ |k|`, so
    /// `|g u^k| > |g|` once `|k| > 2|g|`; the search window is exact.
    pub fn canonical_coset(g: &[i64], u: &[i64]) -> Vec<i64> {
        let g = reduce(g);
        let u = reduce(u);
        if u.is_empty() {
            return g;
        }
        let bound = 2 * g.len() as i64 + 1;
        (-bound..=bound)
            .map(|k| mul(&g, &power(&u, k)))
            .min_by(|a, b| shortlex(a, b))
            .expect("nonempty range")
    }

    /// All reduced words of length at most `len` over `rank` generators.
    pub fn words_up_to(rank: i64, len: usize) -> Vec<Vec<i64>> {
        let letters: Vec<i64> = (1..=rank).flat_map(|g| [g, -g]).collect();
        let mut out = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    if w.last() == Some(&-l) {
                        continue;
                    }
                    let mut x: Vec<i64> = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Presentation {
    /// ℤ, one generator.
    Integers,
    /// Free group on `rank` generators.
    Free { rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub presentation: Presentation,
    pub generators: Vec<LabelMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Witness {
    /// A nonempty finite invariant set.
    InvariantSet { points: Vec<Point> },
    /// A point moved by a group element.
    Moved { point: Point, image: Point },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Verdict {
    Verified { window: Vec<Point> },
    Refuted { witness: Witness },
    Inconclusive { window: Vec<Point>, reason: String },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

impl ActionSpec {
    pub fn new(presentation: Presentation, generators: Vec<LabelMap>) -> Result<Self, ActionError> {
        let expected = match presentation {
            Presentation::Integers => 1,
            Presentation::Free { rank } => rank,
        };
        if generators.len() != expected {
            return Err(ActionError::GeneratorCount {
                expected,
                got: generators.len(),
            });
        }
        Ok(Self {
            presentation,
            generators,
        })
    }

    pub fn translation_on_integers(by: i64) -> Self {
        Self::new(Presentation::Integers, vec![LabelMap::shift(by)]).expect("one generator")
    }

    /// Generators followed by their inverses.
    pub fn symmetric_generators(&self) -> Vec<LabelMap> {
        self.generators
            .iter()
            .cloned()
            .chain(self.generators.iter().map(LabelMap::inverse))
            .collect()
    }

    /// Applies a word (letters `±(i + 1)` for generator `i`), rightmost
    /// letter first.
    pub fn apply_word(&self, word: &[i64], p: &Point) -> Result<Point, ActionError> {
        word.iter().rev().try_fold(p.clone(), |acc, &l| {
            let g = self
                .generators
                .get(l.unsigned_abs() as usize - 1)
                .filter(|_| l != 0)
                .ok_or(ActionError::BadLetter(l))?;
            if l > 0 {
                g.apply(&acc)
            } else {
                g.inverse().apply(&acc)
            }
        })
    }

    /// Checks each generator is injective on the window plus its one-step
    /// images and is undone by its inverse there.
    pub fn check_bijective_near(&self, window: &[Point]) -> Result<(), ActionError> {
        let mut closure: BTreeSet<Point> = window.iter().cloned().collect();
        for g in self.symmetric_generators() {
            for p in window {
                closure.insert(g.apply(p)?);
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            let inv = g.inverse();
            let mut seen: Vec<(Point, Point)> = Vec::new();
            for p in &closure {
                let img = g.apply(p)?;
                if inv.apply(&img)? != *p {
                    return Err(ActionError::NotBijective(i, p.clone(), img));
                }
                if let Some((q, _)) = seen.iter().find(|(_, b)| *b == img) {
                    return Err(ActionError::NotBijective(i, q.clone(), p.clone()));
                }
                seen.push((p.clone(), img));
            }
        }
        Ok(())
    }
}

pub fn default_budget(window: &[Point]) -> usize {
    10 * window.len().max(1)
}

enum OrbitOutcome {
    Closed(BTreeSet<Point>),
    Escaped,
    Stalled,
}

fn explore_orbit(
    gens: &[LabelMap],
    seed: &Point,
    window: &BTreeSet<Point>,
    budget: usize,
) -> Result<OrbitOutcome, ActionError> {
    let mut seen: BTreeSet<Point> = [seed.clone()].into();
    let mut queue: VecDeque<Point> = [seed.clone()].into();
    let mut left_window = false;
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let img = g.apply(&p)?;
            if seen.contains(&img) {
                continue;
            }
            if !window.contains(&img) {
                left_window = true;
            }
            seen.insert(img.clone());
            if seen.len() > budget {
                return Ok(if left_window {
                    OrbitOutcome::Escaped
                } else {
                    OrbitOutcome::Stalled
                });
            }
            queue.push_back(img);
        }
    }
    Ok(OrbitOutcome::Closed(seen))
}

/// Searches orbits seeded in the window.
///
/// * `Refuted(S)`: an orbit closed within the budget, so `S` is a nonempty
///   finite (hence compact) invariant set.
/// * `Verified(w)`: every orbit seeded in `w` grew past the budget after
///   leaving `w`. This is evidence on the window only.
/// * `Inconclusive`: some orbit exhausted the budget without leaving `w`.
pub fn minimality_probe(
    action: &ActionSpec,
    window: &[Point],
    budget: Option<usize>,
) -> Result<Verdict, ActionError> {
    let budget = budget.unwrap_or_else(|| default_budget(window));
    let gens = action.symmetric_generators();
    let wset: BTreeSet<Point> = window.iter().cloned().collect();
    let mut stalled = None;
    for seed in &wset {
        match explore_orbit(&gens, seed, &wset, budget)? {
            OrbitOutcome::Closed(s) => {
                return Ok(Verdict::Refuted {
                    witness: Witness::InvariantSet {
                        points: s.into_iter().collect(),
                    },
                })
            }
            OrbitOutcome::Escaped => {}
            OrbitOutcome::Stalled => {
                stalled.get_or_insert_with(|| seed.clone());
            }
        }
    }
    let window: Vec<Point> = wset.into_iter().collect();
    Ok(match stalled {
        Some(seed) => Verdict::Inconclusive {
            window,
            reason: format!("orbit of {seed} exceeded budget {budget} inside the window"),
        },
        None => Verdict::Verified { window },
    })
}

/// Largest subset of the window invariant under all generators and their
/// inverses, by repeatedly discarding points with an image outside the
/// current set. Nonempty exactly when some orbit lies inside the window.
pub fn invariant_core(action: &ActionSpec, window: &[Point]) -> Result<Vec<Point>, ActionError> {
    let gens = action.symmetric_generators();
    let mut core: BTreeSet<Point> = window.iter().cloned().collect();
    loop {
        let mut drop = Vec::new();
        for p in &core {
            for g in &gens {
                if !core.contains(&g.apply(p)?) {
                    drop.push(p.clone());
                    break;
                }
            }
        }
        if drop.is_empty() {
            return Ok(core.into_iter().collect());
        }
        for p in drop {
            core.remove(&p);
        }
    }
}

/// Looks for a window point moved by `word`.
pub fn is_effective(action: &ActionSpec, window: &[Point], word: &[i64]) -> Result<Verdict, ActionError> {
    let mut sorted = window.to_vec();
    sorted.sort();
    sorted.dedup();
    for p in &sorted {
        let img = action.apply_word(word, p)?;
        if img != *p {
            return Ok(Verdict::Refuted {
                witness: Witness::Moved {
                    point: p.clone(),
                    image: img,
                },
            });
        }
    }
    Ok(Verdict::Inconclusive {
        window: sorted,
        reason: "word acts trivially on the whole window".into(),
    })
}

/// Left translation of `F_rank` on `⊔_j F_rank / ⟨subgroups[j]⟩`, component
/// `j` tagged by its index.
pub fn free_coset_action(rank: usize, subgroups: &[Vec<i64>]) -> ActionSpec {
    let generators = (1..=rank as i64)
        .map(|g| {
            subgroups
                .iter()
                .enumerate()
                .map(|(j, u)| LabelMap::OnComponent {
                    tag: j as i64,
                    map: Box::new(LabelMap::FreeCoset {
                        subgroup: u.clone(),
                        letter: g,
                    }),
                })
                .reduce(|acc, m| acc.then(m))
                .unwrap_or(LabelMap::Identity)
        })
        .collect();
    ActionSpec::new(Presentation::Free { rank }, generators).expect("rank generators")
}

/// Coset representatives of length at most `len` in every component.
pub fn free_coset_window(rank: usize, subgroups: &[Vec<i64>], len: usize) -> Vec<Point> {
    let words = free::words_up_to(rank as i64, len);
    let mut out = BTreeSet::new();
    for (j, u) in subgroups.iter().enumerate() {
        for w in &words {
            let mut t = vec![j as i64];
            t.extend(free::canonical_coset(w, u));
            out.insert(Point::Tuple(t));
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(lo: i64, hi: i64) -> Vec<Point> {
        (lo..=hi).map(Point::Int).collect()
    }

    #[test]
    fn translation_is_verified_on_window() {
        let a = ActionSpec::translation_on_integers(1);
        assert!(minimality_probe(&a, &ints(-10, 10), None).unwrap().is_verified());
        assert!(invariant_core(&a, &ints(-10, 10)).unwrap().is_empty());
    }

    #[test]
    fn trivial_action_refuted_by_fixed_point() {
        let a = ActionSpec::new(Presentation::Integers, vec![LabelMap::Identity]).unwrap();
        let v = minimality_probe(&a, &ints(0, 0), None).unwrap();
        assert_eq!(
            v,
            Verdict::Refuted {
                witness: Witness::InvariantSet {
                    points: vec![Point::Int(0)]
                }
            }
        );
    }

    /// ℤ ⊔ C₃: tuples (0, n) translate, tuples (1, i) cycle mod 3.
    fn z_plus_cycle() -> (ActionSpec, Vec<Point>) {
        let cycle = LabelMap::Permutation {
            table: (0..3).map(|i| (Point::Int(i), Point::Int((i + 1) % 3))).collect(),
        };
        let gen = LabelMap::OnComponent {
            tag: 0,
            map: Box::new(LabelMap::shift(1)),
        }
        .then(LabelMap::OnComponent {
            tag: 1,
            map: Box::new(cycle),
        });
        let a = ActionSpec::new(Presentation::Integers, vec![gen]).unwrap();
        let mut w: Vec<Point> = (-4..=4).map(|n| Point::Tuple(vec![0, n])).collect();
        w.extend((0..3).map(|i| Point::Tuple(vec![1, i])));
        (a, w)
    }

    #[test]
    fn finite_cycle_component_is_refuted() {
        let (a, w) = z_plus_cycle();
        let cyc: Vec<Point> = (0..3).map(|i| Point::Tuple(vec![1, i])).collect();
        assert_eq!(
            minimality_probe(&a, &w, None).unwrap(),
            Verdict::Refuted {
                witness: Witness::InvariantSet { points: cyc.clone() }
            }
        );
        assert_eq!(invariant_core(&a, &w).unwrap(), cyc);
    }

    #[test]
    fn small_budget_is_inconclusive() {
        let a = ActionSpec::new(
            Presentation::Integers,
            vec![LabelMap::Permutation {
                table: (0..5).map(|i| (Point::Int(i), Point::Int((i + 1) % 5))).collect(),
            }],
        )
        .unwrap();
        let v = minimality_probe(&a, &ints(0, 4), Some(3)).unwrap();
        assert!(matches!(v, Verdict::Inconclusive { .. }));
        assert!(minimality_probe(&a, &ints(0, 4), None).unwrap().is_refuted());
    }

    #[test]
    fn effectiveness_of_translation_and_identity() {
        let a = ActionSpec::translation_on_integers(1);
        let w = ints(-3, 3);
        assert_eq!(
            is_effective(&a, &w, &[1]).unwrap(),
            Verdict::Refuted {
                witness: Witness::Moved {
                    point: Point::Int(-3),
                    image: Point::Int(-2)
                }
            }
        );
        assert!(matches!(is_effective(&a, &w, &[]).unwrap(), Verdict::Inconclusive { .. }));
        assert!(matches!(is_effective(&a, &w, &[1, -1]).unwrap(), Verdict::Inconclusive { .. }));
    }

    #[test]
    fn free_words_and_cosets() {
        assert_eq!(free::reduce(&[1, 2, -2, -1, 1]), vec![1]);
        assert_eq!(free::power(&[1, 2], -2), vec![-2, -1, -2, -1]);
        assert_eq!(free::canonical_coset(&[1], &[1, 2]), vec![1]);
        assert_eq!(free::canonical_coset(&[-2, -1], &[1, 2]), Vec::<i64>::new());
        // b a b · (ab)^{-2} = a^{-1}, which beats b in shortlex
        assert_eq!(free::canonical_coset(&[2, 1, 2], &[1, 2]), vec![-1]);
        assert_eq!(free::canonical_coset(&[1, 2, 1, 2], &[1, 2]), Vec::<i64>::new());
        assert_eq!(free::words_up_to(2, 2).len(), 1 + 4 + 12);
    }

    #[test]
    fn word_fixes_its_own_coset_but_moves_another() {
        let u = vec![1, 2];
        let a = free_coset_action(2, std::slice::from_ref(&u));
        let base = Point::Tuple(vec![0]);
        assert_eq!(a.apply_word(&u, &base).unwrap(), base);
        let w = free_coset_window(2, std::slice::from_ref(&u), 2);
        a.check_bijective_near(&w).unwrap();
        match is_effective(&a, &w, &u).unwrap() {
            Verdict::Refuted {
                witness: Witness::Moved { point, image },
            } => assert_ne!(point, image),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inverse_undoes_generators() {
        let maps = [
            LabelMap::shift(3),
            LabelMap::Reflect { offset: vec![2] },
            LabelMap::shift(1).then(LabelMap::Reflect { offset: vec![5] }),
        ];
        for m in &maps {
            for x in -5..5 {
                let p = Point::Int(x);
                assert_eq!(m.inverse().apply(&m.apply(&p).unwrap()).unwrap(), p);
            }
        }
    }

    #[test]
    fn generator_count_is_enforced() {
        assert_eq!(
            ActionSpec::new(Presentation::Free { rank: 2 }, vec![LabelMap::Identity]),
            Err(ActionError::GeneratorCount { expected: 2, got: 1 })
        );
    }

    #[test]
    fn bad_permutation_rejected() {
        let m = LabelMap::Permutation {
            table: vec![(Point::Int(0), Point::Int(1))],
        };
        assert_eq!(m.apply(&Point::Int(0)), Err(ActionError::BadPermutation));
    }
}
