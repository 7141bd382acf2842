//! Checks on a built `h` beyond its certificates: exact hull intersections
//! between pieces, shared-face agreement at random points, and random
//! point pairs mapping to distinct images.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::build::{BuildBundle, PieceRecord};
use crate::linalg::{solve, Solution};
use crate::rational::{format_q, Q, QVec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HullReport {
    pub pairs: usize,
    /// The affine hulls do not meet.
    pub disjoint: usize,
    /// They meet, but only where the later piece has `λ = 0`.
    pub base_face_only: usize,
    /// Pairs where the later piece meets the earlier hull at `λ > 0`.
    pub violations: Vec<(usize, usize)>,
}

/// For every pair `i < j`, solves `h_j(ξ, λ) = h_i(ξ', λ')` over the affine
/// hulls and checks that every solution has `λ = 0`.
pub fn hull_intersections(bundle: &BuildBundle) -> HullReport {
    let n = bundle.n;
    let p = &bundle.pieces;
    let pairs: Vec<(usize, usize)> = (0..p.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let verdicts: Vec<(usize, usize, Option<bool>)> = pairs
        .par_iter()
        .map(|&(i, j)| (i, j, lambda_forced_zero(&p[i], &p[j], n)))
        .collect();
    let mut rep = HullReport {
        pairs: pairs.len(),
        disjoint: 0,
        base_face_only: 0,
        violations: Vec::new(),
    };
    for (i, j, v) in verdicts {
        match v {
            None => rep.disjoint += 1,
            Some(true) => rep.base_face_only += 1,
            Some(false) => rep.violations.push((i, j)),
        }
    }
    rep
}

/// `None` when the hulls are disjoint, otherwise whether the later piece's
/// `λ` vanishes on the whole intersection.
fn lambda_forced_zero(earlier: &PieceRecord, later: &PieceRecord, n: usize) -> Option<bool> {
    // unknowns (ξ, λ, ξ', λ'): M_j u − M_i u' = a_i − a_j
    let rows: Vec<QVec> = later
        .matrix
        .iter()
        .zip(&earlier.matrix)
        .map(|(rj, ri)| rj.iter().cloned().chain(ri.iter().map(|x| -x)).collect())
        .collect();
    let rhs: QVec = earlier.offset.iter().zip(&later.offset).map(|(a, b)| a - b).collect();
    match solve(&rows, &rhs) {
        Solution::Inconsistent => None,
        Solution::Affine { particular, kernel } => {
            Some(particular[n].is_zero() && kernel.iter().all(|k| k[n].is_zero()))
        }
    }
}

fn random_unit<R: Rng>(rng: &mut R, den: u64, open: bool) -> Q {
    let k = if open { rng.random_range(1..den) } else { rng.random_range(0..=den) };
    Q::new(BigInt::from(k), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub pairs: usize,
    pub collisions: Vec<String>,
}

/// Random points `(ξ, λ)` with `λ ∈ (0, 1)` on two distinct pieces must
/// have distinct images.
pub fn random_pair_check(bundle: &BuildBundle, pairs: usize, seed: u64) -> PairReport {
    let p = &bundle.pieces;
    if p.len() < 2 {
        return PairReport {
            pairs: 0,
            collisions: Vec::new(),
        };
    }
    let chunks = 16usize;
    let per = pairs.div_ceil(chunks);
    let found: Vec<Vec<String>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut out = Vec::new();
            for _ in 0..per.min(pairs.saturating_sub(c * per)) {
                let i = rng.random_range(0..p.len());
                let mut j = rng.random_range(0..p.len() - 1);
                if j >= i {
                    j += 1;
                }
                let xi_a: QVec = (0..bundle.n).map(|_| random_unit(&mut rng, 1 << 12, false)).collect();
                let xi_b: QVec = (0..bundle.n).map(|_| random_unit(&mut rng, 1 << 12, false)).collect();
                let la = random_unit(&mut rng, 1 << 12, true);
                let lb = random_unit(&mut rng, 1 << 12, true);
                if p[i].eval(&xi_a, &la) == p[j].eval(&xi_b, &lb) {
                    out.push(format!(
                        "pieces {i}@{} and {j}@{} collide",
                        format_q(&la),
                        format_q(&lb)
                    ));
                }
            }
            out
        })
        .collect();
    PairReport {
        pairs,
        collisions: found.into_iter().flatten().collect(),
    }
}

/// Evaluates each child on its base face and its parent on the matching
/// top face at `samples` random `ξ`; returns the number of mismatches.
pub fn face_samples(bundle: &BuildBundle, samples: usize, seed: u64) -> usize {
    let zero = Q::zero();
    let one = Q::from_integer(1.into());
    let g0 = bundle.g0_columns();
    bundle
        .pieces
        .par_iter()
        .map(|child| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(child.index as u64);
            (0..samples)
                .filter(|_| {
                    let xi: QVec = (0..bundle.n).map(|_| random_unit(&mut rng, 1 << 12, false)).collect();
                    let below = child.eval(&xi, &zero);
                    let above = match child.parent {
                        Some(p) => bundle.pieces[p].eval(&xi, &one),
                        None => (0..bundle.dim)
                            .map(|r| g0.iter().zip(&xi).map(|(c, x)| &c[r] * x).sum())
                            .collect(),
                    };
                    below != above
                })
                .count()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudocover::build::{build_h, BuildConfig};

    #[test]
    fn depth_one_hulls_meet_only_at_the_root() {
        let b = build_h(&BuildConfig { depth: 1, ..Default::default() }).unwrap();
        let rep = hull_intersections(&b);
        assert_eq!(rep.pairs, 28);
        assert!(rep.violations.is_empty());
        // all eight segments start at the origin
        assert_eq!(rep.base_face_only, 28);
    }

    #[test]
    fn pairs_and_faces_n1() {
        let b = build_h(&BuildConfig { n: 1, depth: 1, ..Default::default() }).unwrap();
        assert!(random_pair_check(&b, 500, 1).collisions.is_empty());
        assert_eq!(face_samples(&b, 20, 2), 0);
        assert!(hull_intersections(&b).violations.is_empty());
    }

    #[test]
    fn tampered_piece_is_caught() {
        let mut b = build_h(&BuildConfig { depth: 1, ..Default::default() }).unwrap();
        // make piece 1 run along piece 0
        let lam0: QVec = b.pieces[0].matrix.iter().map(|r| r[0].clone() * Q::new(2.into(), 1.into())).collect();
        for (row, v) in b.pieces[1].matrix.iter_mut().zip(lam0) {
            row[0] = v;
        }
        assert_eq!(hull_intersections(&b).violations, vec![(0, 1)]);
    }
}
