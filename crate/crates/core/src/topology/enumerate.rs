//! Exhaustive and randomized generators of small finite T₀ spaces.
//!
//! A finite T₀ topology is the same thing as a partial order (the
//! specialization order `x ≤ y ⇔ x ∈ cl{y}`); its opens are the up-sets.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::maps::SpaceMap;
use super::space::{apply_perm, members, singleton, FiniteT0Space, PointSet};
use super::Label;

/// `up[x]` is the set of `y ≥ x` (including `x`).
pub type Order = Vec<PointSet>;

fn labels(n: usize) -> Vec<Label> {
    (0..n).map(|i| Label::int(i as i64)).collect()
}

pub fn opens_of_order(up: &Order) -> Vec<PointSet> {
    let n = up.len();
    (0..1u64 << n)
        .filter(|&m| members(m).all(|x| up[x] & !m == 0))
        .collect()
}

pub fn space_of_order(up: &Order) -> FiniteT0Space {
    FiniteT0Space::new_unchecked(labels(up.len()), opens_of_order(up)).expect("n <= 64")
}

fn is_transitive(up: &Order) -> bool {
    up.iter().all(|&u| members(u).all(|y| up[y] & !u == 0))
}

/// Every labelled partial order on `n` points.
pub fn all_orders(n: usize) -> Vec<Order> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut up: Order = (0..n).map(singleton).collect();
        let mut c = code;
        for &(a, b) in &pairs {
            match c % 3 {
                1 => up[a] |= singleton(b),
                2 => up[b] |= singleton(a),
                _ => {}
            }
            c /= 3;
        }
        if is_transitive(&up) {
            out.push(up);
        }
    }
    out
}

/// Every T₀ topology on `n` labelled points.
pub fn all_t0_spaces(n: usize) -> Vec<FiniteT0Space> {
    all_orders(n).iter().map(space_of_order).collect()
}

pub fn random_order<R: Rng>(rng: &mut R, n: usize, density: f64) -> Order {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut up: Order = (0..n).map(singleton).collect();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                up[perm[i]] |= singleton(perm[j]);
            }
        }
    }
    // transitive closure
    loop {
        let mut changed = false;
        for x in 0..n {
            let closed = members(up[x]).fold(up[x], |acc, y| acc | up[y]);
            if closed != up[x] {
                up[x] = closed;
                changed = true;
            }
        }
        if !changed {
            return up;
        }
    }
}

pub fn random_t0_space<R: Rng>(rng: &mut R, n: usize) -> FiniteT0Space {
    let density = rng.random_range(0.0..0.8);
    space_of_order(&random_order(rng, n, density))
}

/// Quotient of `x` by `assignment` (onto `0..k`), if the quotient is T₀ and
/// the quotient map is open.
pub fn open_quotient(x: &FiniteT0Space, assignment: &[usize], k: usize) -> Option<SpaceMap> {
    let preimage = |v: PointSet| {
        assignment
            .iter()
            .enumerate()
            .filter(|(_, &j)| v >> j & 1 == 1)
            .fold(0, |acc, (i, _)| acc | singleton(i))
    };
    let opens: Vec<PointSet> = (0..1u64 << k).filter(|&v| x.is_open(preimage(v))).collect();
    let z = FiniteT0Space::new(labels(k), opens).ok()?;
    let map = SpaceMap::new(x.clone(), z, assignment.to_vec()).ok()?;
    (map.is_surjective() && map.is_open_map()).then_some(map)
}

/// Product space with point `(a, b)` at index `a * |B| + b`.
pub fn product(a: &FiniteT0Space, b: &FiniteT0Space) -> FiniteT0Space {
    let nb = b.len();
    let lift = |u: PointSet, v: PointSet| {
        members(u).fold(0, |acc, i| members(v).fold(acc, |acc, j| acc | singleton(i * nb + j)))
    };
    // unions of basic boxes, generated by closing under union
    let mut opens: Vec<PointSet> = vec![0];
    for &u in a.opens() {
        for &v in b.opens() {
            let bx = lift(u, v);
            let extra: Vec<PointSet> = opens.iter().map(|&o| o | bx).collect();
            opens.extend(extra);
            opens.sort_unstable();
            opens.dedup();
        }
    }
    FiniteT0Space::new_unchecked(labels(a.len() * nb), opens).expect("small product")
}

/// Random continuous open surjection between T₀ spaces of at most
/// `max_points` points: an open quotient when one is found by rejection,
/// otherwise a product projection.
pub fn random_open_surjection<R: Rng>(rng: &mut R, max_points: usize) -> SpaceMap {
    for _ in 0..64 {
        let n = rng.random_range(1..=max_points);
        let x = random_t0_space(rng, n);
        let k = rng.random_range(1..=n);
        let mut assignment: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.random_range(0..k) }).collect();
        assignment.shuffle(rng);
        if let Some(m) = open_quotient(&x, &assignment, k) {
            if m.domain().len() > 1 || rng.random_bool(0.1) {
                return m;
            }
        }
    }
    let na = rng.random_range(1..=max_points.max(2) / 2);
    let nb = rng.random_range(1..=(max_points / na).max(1));
    let a = random_t0_space(rng, na);
    let b = random_t0_space(rng, nb);
    let p = product(&a, &b);
    let assignment = (0..na * nb).map(|i| i / nb).collect();
    SpaceMap::new(p, a, assignment).expect("projections are continuous")
}

/// A small finite group given by generators and relations on its images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmallGroup {
    Trivial,
    Cyclic(usize),
    Klein,
    Symmetric3,
}

impl SmallGroup {
    /// Every group of order at most 6, up to isomorphism.
    pub fn up_to_order_six() -> Vec<SmallGroup> {
        vec![
            SmallGroup::Trivial,
            SmallGroup::Cyclic(2),
            SmallGroup::Cyclic(3),
            SmallGroup::Cyclic(4),
            SmallGroup::Klein,
            SmallGroup::Cyclic(5),
            SmallGroup::Cyclic(6),
            SmallGroup::Symmetric3,
        ]
    }

    pub fn order(self) -> usize {
        match self {
            SmallGroup::Trivial => 1,
            SmallGroup::Cyclic(k) => k,
            SmallGroup::Klein => 4,
            SmallGroup::Symmetric3 => 6,
        }
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn power(a: &[usize], k: usize) -> Vec<usize> {
    (0..k).fold((0..a.len()).collect(), |acc: Vec<usize>, _| compose(a, &acc))
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

pub fn homeomorphisms(space: &FiniteT0Space) -> Vec<Vec<usize>> {
    permutations(space.len())
        .into_iter()
        .filter(|p| space.is_homeomorphism(p))
        .collect()
}

/// Generator images of every action of `group` by homeomorphisms.
pub fn actions(group: SmallGroup, homeos: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let n = homeos.first().map_or(0, |h| h.len());
    let id: Vec<usize> = (0..n).collect();
    match group {
        SmallGroup::Trivial => vec![vec![]],
        SmallGroup::Cyclic(k) => homeos
            .iter()
            .filter(|a| power(a, k) == id)
            .map(|a| vec![a.clone()])
            .collect(),
        SmallGroup::Klein => {
            let inv: Vec<&Vec<usize>> = homeos.iter().filter(|a| power(a, 2) == id).collect();
            inv.iter()
                .flat_map(|a| inv.iter().map(move |b| (a, b)))
                .filter(|(a, b)| compose(a, b) == compose(b, a))
                .map(|(a, b)| vec![(*a).clone(), (*b).clone()])
                .collect()
        }
        SmallGroup::Symmetric3 => {
            let threes: Vec<&Vec<usize>> = homeos.iter().filter(|a| power(a, 3) == id).collect();
            let twos: Vec<&Vec<usize>> = homeos.iter().filter(|b| power(b, 2) == id).collect();
            threes
                .iter()
                .flat_map(|a| twos.iter().map(move |b| (a, b)))
                .filter(|(a, b)| compose(b, &compose(a, b)) == inverse(a))
                .map(|(a, b)| vec![(*a).clone(), (*b).clone()])
                .collect()
        }
    }
}

pub fn is_minimal_action(space: &FiniteT0Space, gens: &[Vec<usize>]) -> bool {
    space
        .invariant_opens(gens)
        .iter()
        .all(|&u| u == 0 || u == space.full())
}

pub fn generic_points(space: &FiniteT0Space) -> Vec<usize> {
    (0..space.len())
        .filter(|&i| space.closure(singleton(i)) == space.full())
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigiditySummary {
    pub spaces: usize,
    pub actions: usize,
    pub minimal_with_generic_point: usize,
    pub counterexamples: Vec<String>,
}

/// Every action of every group of order ≤ 6 on every T₀ space with at most
/// `max_points` points: a minimal action on a space with a generic point
/// must live on a single point.
pub fn compact_group_rigidity(max_points: usize) -> RigiditySummary {
    let mut s = RigiditySummary::default();
    for n in 1..=max_points {
        for space in all_t0_spaces(n) {
            s.spaces += 1;
            let homeos = homeomorphisms(&space);
            let has_generic = !generic_points(&space).is_empty();
            for g in SmallGroup::up_to_order_six() {
                for gens in actions(g, &homeos) {
                    s.actions += 1;
                    if has_generic && is_minimal_action(&space, &gens) {
                        s.minimal_with_generic_point += 1;
                        if space.len() != 1 {
                            s.counterexamples
                                .push(format!("{g:?} on opens {:?} via {gens:?}", space.opens()));
                        }
                    }
                }
            }
        }
    }
    s
}

/// Permuted copy of a set under each generator, used by tests.
pub fn orbit_of_set(set: PointSet, gens: &[Vec<usize>]) -> Vec<PointSet> {
    gens.iter().map(|g| apply_perm(g, set)).collect()
}
