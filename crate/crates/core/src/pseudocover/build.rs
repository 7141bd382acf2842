//! Inductive construction of the piecewise-affine injection
//! `h : [0,1]^n × Y⁰ → ℝ^N`.
//!
//! Every edge `T_{d,x}` gets an affine piece
//! `(ξ, λ) ↦ b + Σ ξ_i c_i + λ (η − b)` where `c_i` are the columns of `g₀`,
//! `b` is the endpoint of the parent piece (0 at depth 1) and `η` is drawn
//! near `f([d, x])` until it is transversal to everything placed before.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::transversal::{dimension_check, sample_point, transversal_ranks, AffineSubspace, BaseMap};
use super::tree::f_eval;
use super::{ambient_dim, format_signs, Certificate, CertificateKind, PcError, TreeAddress, MAX_AMBIENT};
use crate::linalg::rank;
use crate::rational::{add, dist_inf, format_q, pow2, scale, serde_qmat, serde_qvec, sub, Q, QVec};

/// Largest number of pieces a build may place.
pub const MAX_PIECES: u128 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub n: usize,
    pub depth: usize,
    pub seed: u64,
    pub denominator: u64,
    pub budget: usize,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            n: 0,
            depth: 2,
            seed: 0,
            denominator: 1 << 10,
            budget: 64,
        }
    }
}

impl BuildConfig {
    /// Grid denominator at depth `d`: fine enough that the target ball of
    /// radius `2^{−d−2}` holds many grid points.
    pub fn effective_denominator(&self, d: usize) -> u64 {
        self.denominator.max(1u64 << (d + 6).min(62))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceRecord {
    pub index: usize,
    /// Sign words, one string per letter.
    pub word: Vec<String>,
    /// `None` for depth-1 pieces, whose base face is `g₀`.
    pub parent: Option<usize>,
    /// `N × (n + 1)`: the `ξ`-columns then the `λ`-column.
    #[serde(with = "serde_qmat")]
    pub matrix: Vec<QVec>,
    #[serde(with = "serde_qvec")]
    pub offset: QVec,
    /// `h(0, [d, x])`.
    #[serde(with = "serde_qvec")]
    pub endpoint: QVec,
    /// `f([d, x])`.
    #[serde(with = "serde_qvec")]
    pub target: QVec,
    pub denominator: u64,
    pub attempts: usize,
    #[serde(skip)]
    pub masks: Vec<u32>,
}

impl PieceRecord {
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn columns(&self) -> Vec<QVec> {
        let cols = self.matrix.first().map_or(0, Vec::len);
        (0..cols).map(|j| self.matrix.iter().map(|row| row[j].clone()).collect()).collect()
    }

    pub fn xi_columns(&self) -> Vec<QVec> {
        let mut c = self.columns();
        c.pop();
        c
    }

    /// `h(ξ, λ)` on this piece.
    pub fn eval(&self, xi: &[Q], lambda: &Q) -> QVec {
        let n = xi.len();
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, o)| {
                let mut v = o.clone() + &row[n] * lambda;
                for (a, x) in row[..n].iter().zip(xi) {
                    v += a * x;
                }
                v
            })
            .collect()
    }

    pub fn as_subspace(&self) -> AffineSubspace {
        AffineSubspace {
            point: self.offset.clone(),
            directions: self.columns(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildBundle {
    pub n: usize,
    pub dim: usize,
    pub depth: usize,
    pub seed: u64,
    pub denominator: u64,
    pub budget: usize,
    /// `N × n` columns `e_i / 2`.
    #[serde(with = "serde_qmat")]
    pub g0: Vec<QVec>,
    pub pieces: Vec<PieceRecord>,
    pub certificates: Vec<Certificate>,
}

impl BuildBundle {
    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }

    pub fn g0_columns(&self) -> Vec<QVec> {
        (0..self.n).map(|j| self.g0.iter().map(|row| row[j].clone()).collect()).collect()
    }

    /// Restores the sign masks dropped by serialization.
    pub fn restore_masks(&mut self) -> Result<(), PcError> {
        for p in &mut self.pieces {
            p.masks = p
                .word
                .iter()
                .map(|s| super::parse_signs(s).map(|(m, _)| m))
                .collect::<Option<_>>()
                .ok_or_else(|| PcError::MalformedAddress(p.word.join(".")))?;
        }
        Ok(())
    }

    pub fn address(&self, i: usize, lambda: Q) -> TreeAddress {
        TreeAddress::Edge {
            word: self.pieces[i].masks.clone(),
            lambda,
        }
    }
}

/// `g₀`: `ξ ↦ (ξ_1/2, …, ξ_n/2, 0, …, 0)`.
pub fn canonical_g0(n: usize) -> Vec<QVec> {
    let dim = ambient_dim(n);
    let half = pow2(-1);
    (0..dim)
        .map(|r| (0..n).map(|c| if r == c { half.clone() } else { Q::from_integer(0.into()) }).collect())
        .collect()
}

fn piece_count(dim: usize, depth: usize) -> u128 {
    let s = 1u128 << dim.min(64);
    let mut total = 0u128;
    let mut level = 1u128;
    for _ in 0..depth {
        level = level.saturating_mul(s);
        total = total.saturating_add(level);
    }
    total
}

fn show(v: &[Q]) -> Vec<String> {
    v.iter().map(format_q).collect()
}

pub fn build_h(config: &BuildConfig) -> Result<BuildBundle, PcError> {
    let n = config.n;
    let dim = ambient_dim(n);
    if dim > MAX_AMBIENT {
        return Err(PcError::DimensionTooLarge(dim));
    }
    let total = piece_count(dim, config.depth);
    if total > MAX_PIECES {
        return Err(PcError::TooLarge(total));
    }
    let g0 = canonical_g0(n);
    let g0_cols: Vec<QVec> = (0..n).map(|j| g0.iter().map(|row| row[j].clone()).collect()).collect();
    let zero = vec![Q::from_integer(0.into()); dim];
    let mut certificates = vec![Certificate::new(
        CertificateKind::Transversality,
        "g0",
        rank(&g0_cols) == n,
        json!({"injectivity_rank": rank(&g0_cols), "required_rank": n}),
    )];
    let mut ks = vec![AffineSubspace {
        point: zero.clone(),
        directions: g0_cols.clone(),
    }];
    let mut pieces: Vec<PieceRecord> = Vec::new();
    // (index, masks) of the previous level, in placement order
    let mut frontier: Vec<Option<usize>> = vec![None];
    for d in 1..=config.depth {
        let radius = pow2(-(d as i64) - 2);
        let den = config.effective_denominator(d);
        let mut next = Vec::new();
        for parent in frontier {
            let (base_point, parent_masks, parent_vertex) = match parent {
                None => (zero.clone(), Vec::new(), TreeAddress::Root),
                Some(p) => (
                    pieces[p].endpoint.clone(),
                    pieces[p].masks.clone(),
                    TreeAddress::vertex(pieces[p].masks.clone()),
                ),
            };
            for s in 0..(1u64 << dim) as u32 {
                let index = pieces.len();
                let mut masks = parent_masks.clone();
                masks.push(s);
                let target = f_eval(n, &TreeAddress::vertex(masks.clone()))?;
                let base = BaseMap {
                    origin: base_point.clone(),
                    images: g0_cols.iter().map(|c| add(&base_point, c)).collect(),
                    n: n + 1,
                };
                dimension_check(&base, &ks)?;
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(index as u64);
                let mut found = None;
                for attempt in 1..=config.budget.max(1) {
                    let eta = sample_point(&mut rng, &target, &radius, den)
                        .ok_or(PcError::RetryBudgetExhausted { attempts: 0 })?;
                    let ranks = transversal_ranks(&base, &ks, std::slice::from_ref(&eta));
                    if ranks.pass {
                        found = Some((eta, ranks, attempt));
                        break;
                    }
                }
                let Some((eta, ranks, attempts)) = found else {
                    return Err(PcError::RetryBudgetExhausted {
                        attempts: config.budget.max(1),
                    });
                };
                let lambda_col = sub(&eta, &base_point);
                let matrix: Vec<QVec> = (0..dim)
                    .map(|r| {
                        let mut row: QVec = g0_cols.iter().map(|c| c[r].clone()).collect();
                        row.push(lambda_col[r].clone());
                        row
                    })
                    .collect();
                let record = PieceRecord {
                    index,
                    word: masks.iter().map(|&m| format_signs(m, dim)).collect(),
                    parent,
                    matrix,
                    offset: base_point.clone(),
                    endpoint: eta.clone(),
                    target: target.clone(),
                    denominator: den,
                    attempts,
                    masks: masks.clone(),
                };
                let subject = record.word.join(".");

                certificates.push(Certificate::new(
                    CertificateKind::Transversality,
                    subject.clone(),
                    ranks.pass,
                    json!({
                        "injectivity_rank": ranks.injectivity_rank,
                        "required_rank": n + 1,
                        "against": std::iter::once(json!("g0"))
                            .chain((0..index).map(|j| json!(j)))
                            .collect::<Vec<_>>(),
                        "mod_v": ranks.mod_v.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
                    }),
                ));

                let parent_cols = match parent {
                    None => g0_cols.clone(),
                    Some(p) => pieces[p].xi_columns(),
                };
                certificates.push(Certificate::new(
                    CertificateKind::FaceConsistency,
                    subject.clone(),
                    record.offset == base_point && record.xi_columns() == parent_cols,
                    json!({
                        "parent": parent.map_or(json!("g0"), |p| json!(p)),
                        "offset": show(&record.offset),
                        "parent_endpoint": show(&base_point),
                    }),
                ));

                let dist = dist_inf(&eta, &target);
                certificates.push(Certificate::new(
                    CertificateKind::EndpointEstimate,
                    subject.clone(),
                    dist < radius,
                    json!({
                        "depth": d,
                        "endpoint": show(&eta),
                        "target": show(&target),
                        "distance": format_q(&dist),
                        "bound": format_q(&radius),
                    }),
                ));

                let l = d - 1;
                let bound_a = pow2(-(l as i64) - 2);
                let d0 = dist_inf(&record.eval(&vec![Q::from_integer(0.into()); n], &Q::from_integer(0.into())), &f_eval(n, &parent_vertex)?);
                let d1 = dist_inf(&record.eval(&vec![Q::from_integer(0.into()); n], &Q::from_integer(1.into())), &target);
                certificates.push(Certificate::new(
                    CertificateKind::EstimateA,
                    subject,
                    d0 < bound_a && d1 < bound_a,
                    json!({
                        "level": l,
                        "distances": [format_q(&d0), format_q(&d1)],
                        "bound": format_q(&bound_a),
                    }),
                ));

                ks.push(record.as_subspace());
                pieces.push(record);
                next.push(Some(index));
            }
        }
        frontier = next;
    }
    Ok(BuildBundle {
        n,
        dim,
        depth: config.depth,
        seed: config.seed,
        denominator: config.denominator,
        budget: config.budget,
        g0,
        pieces,
        certificates,
    })
}

/// `h(ξ, [l + λ, x])` on an arbitrary piece; the midpoint of the segment
/// between the two endpoint images when `λ = 1/2`.
pub fn segment_point(p: &PieceRecord, xi: &[Q], lambda: &Q) -> QVec {
    let a = p.eval(xi, &Q::from_integer(0.into()));
    let b = p.eval(xi, &Q::from_integer(1.into()));
    add(&a, &scale(lambda, &sub(&b, &a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn depth_zero_is_g0() {
        let b = build_h(&BuildConfig { n: 1, depth: 0, ..Default::default() }).unwrap();
        assert!(b.pieces.is_empty());
        assert_eq!(b.g0_columns(), vec![vec![frac(1, 2), q(0), q(0), q(0), q(0)]]);
        assert!(b.all_pass());
    }

    #[test]
    fn depth_one_n0() {
        let b = build_h(&BuildConfig { depth: 1, ..Default::default() }).unwrap();
        assert_eq!(b.pieces.len(), 8);
        assert!(b.all_pass(), "{:#?}", b.certificates.iter().find(|c| !c.pass));
        for p in &b.pieces {
            assert!(dist_inf(&p.endpoint, &p.target) < frac(1, 8));
            assert_eq!(p.offset, vec![q(0); 3]);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let cfg = BuildConfig { depth: 1, seed: 9, ..Default::default() };
        assert_eq!(build_h(&cfg).unwrap(), build_h(&cfg).unwrap());
        let other = BuildConfig { seed: 10, ..cfg };
        assert_ne!(build_h(&other).unwrap().pieces, build_h(&BuildConfig { seed: 9, ..other }).unwrap().pieces);
    }

    #[test]
    fn evaluation_is_affine_in_lambda() {
        let b = build_h(&BuildConfig { n: 1, depth: 1, ..Default::default() }).unwrap();
        let p = &b.pieces[5];
        let xi = [frac(1, 3)];
        assert_eq!(p.eval(&xi, &frac(1, 4)), segment_point(p, &xi, &frac(1, 4)));
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            build_h(&BuildConfig { n: 1, depth: 3, ..Default::default() }),
            Err(PcError::TooLarge(_))
        ));
    }
}
