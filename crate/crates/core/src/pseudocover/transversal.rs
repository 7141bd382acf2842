//! Randomized affine transversality with exact rank certificates.
//!
//! Given an affine `h : ℝ^n → ℝ^d` fixed on `ξ_1, …, ξ_k`, new images
//! `η_{k+1}, …, η_n` are drawn from a rational grid until `h_η` is
//! injective and the new directions are independent modulo
//! `V = span(K, h(0), h(ξ_1), …, h(ξ_k))` for every `K`. Independence mod
//! `V` forces every meeting point of `h_η([0,1]^n)` with `K` to have zero
//! `η`-coordinates.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Certificate, CertificateKind, PcError};
use crate::linalg::rank;
use crate::rational::{format_q, serde_q, serde_qmat, serde_qvec, sub, Q, QVec};

/// The fixed part of `h`: `h(0)` and the images `h(ξ_1), …, h(ξ_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseMap {
    #[serde(with = "serde_qvec")]
    pub origin: QVec,
    #[serde(with = "serde_qmat")]
    pub images: Vec<QVec>,
    /// Total number of basis vectors `n`.
    pub n: usize,
}

impl BaseMap {
    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn k(&self) -> usize {
        self.images.len()
    }
}

/// `point + span(directions)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSubspace {
    #[serde(with = "serde_qvec")]
    pub point: QVec,
    #[serde(with = "serde_qmat")]
    pub directions: Vec<QVec>,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        rank(&self.directions)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalConfig {
    /// Samples lie on `(1/denominator)ℤ^d`.
    pub denominator: u64,
    pub budget: usize,
    /// Samples lie strictly within `radius` of `center` (default `h(0)`).
    #[serde(with = "crate::rational::serde_qvec_opt", default)]
    pub center: Option<QVec>,
    #[serde(with = "serde_q")]
    pub radius: Q,
}

impl Default for TransversalConfig {
    fn default() -> Self {
        Self {
            denominator: 1 << 10,
            budget: 64,
            center: None,
            radius: Q::from_integer(1.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransversalOutcome {
    #[serde(with = "serde_qmat")]
    pub eta: Vec<QVec>,
    pub certificate: Certificate,
    pub attempts: usize,
}

/// `m + n + 1 ≤ d` with `m` the largest dimension in `ks`.
pub fn dimension_check(base: &BaseMap, ks: &[AffineSubspace]) -> Result<(), PcError> {
    let d = base.dim();
    if base.k() > base.n {
        return Err(PcError::DimensionViolation(format!("k = {} exceeds n = {}", base.k(), base.n)));
    }
    if let Some(bad) = ks.iter().find(|k| k.point.len() != d || k.directions.iter().any(|v| v.len() != d)) {
        return Err(PcError::DimensionViolation(format!(
            "subspace in ℝ^{} does not live in ℝ^{d}",
            bad.point.len()
        )));
    }
    let m = ks.iter().map(AffineSubspace::dim).max().unwrap_or(0);
    if m + base.n + 1 > d {
        return Err(PcError::DimensionViolation(format!("m + n + 1 = {} > d = {d}", m + base.n + 1)));
    }
    Ok(())
}

/// Ranks behind a transversality verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankData {
    pub injectivity_rank: usize,
    /// `(rank V, rank (V ∪ new directions))` per subspace.
    pub mod_v: Vec<(usize, usize)>,
    pub pass: bool,
}

pub fn transversal_ranks(base: &BaseMap, ks: &[AffineSubspace], eta: &[QVec]) -> RankData {
    let fixed = base.images.iter().map(|p| sub(p, &base.origin));
    let fresh: Vec<QVec> = eta.iter().map(|p| sub(p, &base.origin)).collect();
    let all: Vec<QVec> = fixed.chain(fresh.iter().cloned()).collect();
    let injectivity_rank = rank(&all);
    let shape_ok = eta.len() + base.k() == base.n && eta.iter().all(|v| v.len() == base.dim());
    let mut pass = shape_ok && injectivity_rank == base.n;
    let mut mod_v = Vec::with_capacity(ks.len());
    for k in ks {
        let mut v: Vec<QVec> = k.directions.clone();
        v.push(sub(&base.origin, &k.point));
        v.extend(base.images.iter().map(|p| sub(p, &k.point)));
        let rank_v = rank(&v);
        v.extend(fresh.iter().cloned());
        let rank_with = rank(&v);
        pass &= rank_with == rank_v + fresh.len();
        mod_v.push((rank_v, rank_with));
    }
    RankData {
        injectivity_rank,
        mod_v,
        pass,
    }
}

/// The rank checks for a given choice of `η`, as a self-contained
/// certificate.
pub fn check_transversal(base: &BaseMap, ks: &[AffineSubspace], eta: &[QVec]) -> Certificate {
    let r = transversal_ranks(base, ks, eta);
    let show = |vs: &[QVec]| -> Vec<Vec<String>> { vs.iter().map(|v| v.iter().map(format_q).collect()).collect() };
    Certificate::new(
        CertificateKind::Transversality,
        format!("k={} n={} d={}", base.k(), base.n, base.dim()),
        r.pass,
        json!({
            "n": base.n,
            "origin": base.origin.iter().map(format_q).collect::<Vec<_>>(),
            "images": show(&base.images),
            "eta": show(eta),
            "subspaces": ks.iter().map(|k| json!({
                "point": k.point.iter().map(format_q).collect::<Vec<_>>(),
                "directions": show(&k.directions),
            })).collect::<Vec<_>>(),
            "injectivity_rank": r.injectivity_rank,
            "required_rank": base.n,
            "mod_v": r.mod_v.iter().map(|&(a, b)| json!({"rank_v": a, "rank_with_eta": b})).collect::<Vec<_>>(),
        }),
    )
}

/// A grid point `k / denominator` strictly within `radius` of `c`.
pub(crate) fn sample_near<R: Rng>(rng: &mut R, c: &Q, radius: &Q, denominator: u64) -> Option<Q> {
    let d = Q::from_integer(BigInt::from(denominator));
    let lo = ((c - radius) * &d).floor().to_integer() + 1;
    let hi = ((c + radius) * &d).ceil().to_integer() - 1;
    if lo > hi {
        return None;
    }
    let span: BigInt = &hi - &lo;
    // spans here are far below 2^63
    let off: i64 = span.try_into().ok()?;
    let k = lo + BigInt::from(rng.random_range(0..=off));
    Some(Q::new(k, BigInt::from(denominator)))
}

pub(crate) fn sample_point<R: Rng>(rng: &mut R, center: &[Q], radius: &Q, denominator: u64) -> Option<QVec> {
    center.iter().map(|c| sample_near(rng, c, radius, denominator)).collect()
}

/// Draws `η` until [`check_transversal`] passes.
pub fn transversal_eta(
    base: &BaseMap,
    ks: &[AffineSubspace],
    config: &TransversalConfig,
    seed: u64,
) -> Result<TransversalOutcome, PcError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    transversal_eta_with(base, ks, config, &mut rng)
}

pub fn transversal_eta_with<R: Rng>(
    base: &BaseMap,
    ks: &[AffineSubspace],
    config: &TransversalConfig,
    rng: &mut R,
) -> Result<TransversalOutcome, PcError> {
    dimension_check(base, ks)?;
    if !config.radius.is_positive() || config.denominator == 0 {
        return Err(PcError::DimensionViolation("sampling radius and denominator must be positive".into()));
    }
    let center = config.center.clone().unwrap_or_else(|| base.origin.clone());
    if center.len() != base.dim() {
        return Err(PcError::DimensionViolation("sampling center has the wrong dimension".into()));
    }
    let fresh = base.n - base.k();
    for attempt in 1..=config.budget.max(1) {
        let eta: Option<Vec<QVec>> = (0..fresh)
            .map(|_| sample_point(rng, &center, &config.radius, config.denominator))
            .collect();
        let Some(eta) = eta else {
            return Err(PcError::RetryBudgetExhausted { attempts: 0 });
        };
        let certificate = check_transversal(base, ks, &eta);
        if certificate.pass {
            return Ok(TransversalOutcome {
                eta,
                certificate,
                attempts: attempt,
            });
        }
    }
    Err(PcError::RetryBudgetExhausted {
        attempts: config.budget.max(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v(xs: &[i64]) -> QVec {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn origin_only() -> (BaseMap, Vec<AffineSubspace>) {
        let base = BaseMap {
            origin: v(&[0, 0]),
            images: vec![],
            n: 1,
        };
        let k = AffineSubspace {
            point: v(&[0, 0]),
            directions: vec![],
        };
        (base, vec![k])
    }

    #[test]
    fn accepts_generic_point() {
        let (base, ks) = origin_only();
        let c = check_transversal(&base, &ks, &[v(&[1, 1])]);
        assert!(c.pass);
        assert_eq!(c.witness["mod_v"][0]["rank_v"], 0);
        assert_eq!(c.witness["mod_v"][0]["rank_with_eta"], 1);
    }

    #[test]
    fn rejects_degenerate_point() {
        let (base, ks) = origin_only();
        let c = check_transversal(&base, &ks, &[v(&[0, 0])]);
        assert!(!c.pass);
        assert_eq!(c.witness["injectivity_rank"], 0);
    }

    #[test]
    fn full_k_is_vacuous() {
        let base = BaseMap {
            origin: v(&[0, 0, 0]),
            images: vec![v(&[1, 0, 0])],
            n: 1,
        };
        let out = transversal_eta(&base, &[], &TransversalConfig::default(), 0).unwrap();
        assert!(out.eta.is_empty());
        assert!(out.certificate.pass);
        assert_eq!(out.attempts, 1);
    }

    #[test]
    fn dimension_condition() {
        let base = BaseMap {
            origin: v(&[0, 0]),
            images: vec![],
            n: 1,
        };
        let line = AffineSubspace {
            point: v(&[0, 0]),
            directions: vec![v(&[1, 0])],
        };
        assert!(matches!(
            transversal_eta(&base, &[line], &TransversalConfig::default(), 0),
            Err(PcError::DimensionViolation(_))
        ));
    }

    #[test]
    fn sampled_eta_avoids_subspace() {
        // a line in ℝ^3 and a 1-parameter map: the sampled segment can only
        // meet the line at its base point
        let base = BaseMap {
            origin: v(&[0, 0, 0]),
            images: vec![],
            n: 1,
        };
        let line = AffineSubspace {
            point: v(&[0, 0, 0]),
            directions: vec![v(&[1, 2, 3])],
        };
        for seed in 0..20 {
            let out = transversal_eta(&base, std::slice::from_ref(&line), &TransversalConfig::default(), seed).unwrap();
            let eta = &out.eta[0];
            assert_eq!(rank(&[eta.clone(), v(&[1, 2, 3])]), 2);
        }
    }

    #[test]
    fn budget_exhaustion() {
        // radius below one grid step around 0 leaves only the zero sample
        let (base, ks) = origin_only();
        let cfg = TransversalConfig {
            denominator: 1,
            budget: 5,
            center: None,
            radius: q(1),
        };
        assert_eq!(
            transversal_eta(&base, &ks, &cfg, 0),
            Err(PcError::RetryBudgetExhausted { attempts: 5 })
        );
    }
}
