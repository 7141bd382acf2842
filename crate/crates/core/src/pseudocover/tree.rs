//! The map `f : Y⁰ → ℝ^N` and its three quantitative claims: the norm
//! bound, the odd-dyadic level sets, and density of every height slice.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde_json::json;

use super::{ambient_dim, format_signs, sign_at, Certificate, CertificateKind, PcError, TreeAddress, MAX_AMBIENT};
use crate::rational::{format_q, frac, norm_inf, pow2, QVec, ShowVec, Q};

/// Largest number of words a level enumeration may visit.
pub const LEVEL_GUARD: u128 = 1 << 16;

/// Heights `m + λ` sampled when checking density between integer levels.
pub fn sampled_lambdas() -> Vec<Q> {
    vec![frac(1, 4), frac(1, 3), frac(1, 2), frac(2, 3), frac(3, 4)]
}

fn check_dim(n: usize) -> Result<usize, PcError> {
    let dim = ambient_dim(n);
    if dim > MAX_AMBIENT {
        return Err(PcError::DimensionTooLarge(dim));
    }
    Ok(dim)
}

fn add_scaled_signs(v: &mut [Q], scale: &Q, mask: u32, dim: usize) {
    for (i, x) in v.iter_mut().enumerate() {
        if sign_at(mask, i, dim) > 0 {
            *x += scale;
        } else {
            *x -= scale;
        }
    }
}

/// `f` at a tree address: `f(root) = 0` and
/// `f([m + λ, (x, s)]) = f([m, x]) + 2^{−m−1} λ s`.
pub fn f_eval(n: usize, addr: &TreeAddress) -> Result<QVec, PcError> {
    let dim = check_dim(n)?;
    let mut v = vec![Q::zero(); dim];
    let TreeAddress::Edge { word, lambda } = addr else {
        return Ok(v);
    };
    if word.is_empty() || lambda.is_negative() || *lambda > Q::one() {
        return Err(PcError::MalformedAddress(format!("{addr:?}")));
    }
    if let Some(&bad) = word.iter().find(|&&m| dim < 32 && m >> dim != 0) {
        return Err(PcError::MalformedAddress(format!("sign mask {bad:#b} too wide for N = {dim}")));
    }
    let last = word.len() - 1;
    for (k, &s) in word[..last].iter().enumerate() {
        add_scaled_signs(&mut v, &pow2(-(k as i64) - 1), s, dim);
    }
    add_scaled_signs(&mut v, &(pow2(-(word.len() as i64)) * lambda), word[last], dim);
    Ok(v)
}

fn guard(dim: usize, len: usize) -> Result<(), PcError> {
    let bits = dim as u128 * len as u128;
    if bits >= 127 || (1u128 << bits) > LEVEL_GUARD {
        return Err(PcError::TooLarge(if bits >= 127 { u128::MAX } else { 1u128 << bits }));
    }
    Ok(())
}

/// `f` at every point of height `m + λ` (words of length `m + 1`),
/// visiting words depth-first in lexicographic order.
pub fn height_slice(n: usize, m: usize, lambda: &Q) -> Result<Vec<(Vec<u32>, QVec)>, PcError> {
    let dim = check_dim(n)?;
    guard(dim, m + 1)?;
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(m + 1);
    let mut stack = vec![Q::zero(); dim];
    fn rec(
        dim: usize,
        m: usize,
        lambda: &Q,
        word: &mut Vec<u32>,
        v: &mut Vec<Q>,
        out: &mut Vec<(Vec<u32>, QVec)>,
    ) {
        let k = word.len();
        let scale = pow2(-(k as i64) - 1);
        for s in 0..1u32 << dim {
            word.push(s);
            if k == m {
                let mut leaf = v.clone();
                add_scaled_signs(&mut leaf, &(&scale * lambda), s, dim);
                out.push((word.clone(), leaf));
            } else {
                add_scaled_signs(v, &scale, s, dim);
                rec(dim, m, lambda, word, v, out);
                add_scaled_signs(v, &-&scale, s, dim);
            }
            word.pop();
        }
    }
    rec(dim, m, lambda, &mut word, &mut stack, &mut out);
    Ok(out)
}

/// `{f(y) : q₀(y) = m}` for `m ≥ 1` (the root alone for `m = 0`).
pub fn level_set(n: usize, m: usize) -> Result<BTreeSet<QVec>, PcError> {
    let dim = check_dim(n)?;
    if m == 0 {
        return Ok([vec![Q::zero(); dim]].into_iter().collect());
    }
    Ok(height_slice(n, m - 1, &Q::one())?.into_iter().map(|(_, v)| v).collect())
}

/// `{l / 2^m : l odd, |l| < 2^m}^dim`, built directly as a product.
pub fn odd_grid(dim: usize, m: usize) -> BTreeSet<QVec> {
    let d = 1i64 << m;
    let coords: Vec<Q> = (-d + 1..d).step_by(2).map(|l| frac(l, d)).collect();
    let mut out: Vec<QVec> = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|pre| {
                coords.iter().map(move |c| {
                    let mut p = pre.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    out.into_iter().collect()
}

/// `sup_{z ∈ [−1, 1]} min_a |z − a|` for a nonempty finite `A ⊆ [−1, 1]`.
pub fn covering_radius_1d(vals: &BTreeSet<Q>) -> Option<Q> {
    let first = vals.first()?;
    let last = vals.last()?;
    let mut r = (first + Q::one()).max(Q::one() - last);
    let v: Vec<&Q> = vals.iter().collect();
    for w in v.windows(2) {
        r = r.max((w[1] - w[0]) / Q::from_integer(2.into()));
    }
    Some(r)
}

/// Exact ∞-norm covering radius of `A` in `[−1, 1]^dim` when `A` is the
/// product of its coordinate projections (checked by counting), else `None`.
pub fn product_covering_radius(set: &BTreeSet<QVec>, dim: usize) -> Option<Q> {
    let projections: Vec<BTreeSet<Q>> = (0..dim).map(|i| set.iter().map(|p| p[i].clone()).collect()).collect();
    let product: u128 = projections.iter().map(|p| p.len() as u128).product();
    if product != set.len() as u128 {
        return None;
    }
    projections
        .iter()
        .map(covering_radius_1d)
        .try_fold(Q::zero(), |acc, r| r.map(|r| acc.max(r)))
}

/// Norm bound, grid identity and density for levels `0..=m_max`.
pub fn verify_f_properties(n: usize, m_max: usize) -> Result<Vec<Certificate>, PcError> {
    let dim = check_dim(n)?;
    let mut certs = Vec::new();
    certs.push(Certificate::new(
        CertificateKind::NormBound,
        "level 0",
        true,
        json!({"level": 0, "max_norm": "0", "bound": "0", "attained": true}),
    ));
    let all_plus = (1u32 << dim) - 1;
    for l in 1..=m_max {
        let slice = height_slice(n, l - 1, &Q::one())?;
        let bound = Q::one() - pow2(-(l as i64));
        // norm bound: f is affine on edges, so vertices bound every point of
        // height ≤ l; earlier levels have smaller bounds already checked
        let (arg, max) = slice
            .iter()
            .map(|(w, v)| (w, norm_inf(v)))
            .fold((None, Q::zero()), |(a, m), (w, v)| if a.is_none() || v > m { (Some(w), v) } else { (a, m) });
        let attained_at_plus = slice
            .iter()
            .find(|(w, _)| w.iter().all(|&s| s == all_plus))
            .map(|(_, v)| norm_inf(v) == bound)
            .unwrap_or(false);
        let word: Vec<String> = arg.map(|w| w.iter().map(|&s| format_signs(s, dim)).collect()).unwrap_or_default();
        certs.push(Certificate::new(
            CertificateKind::NormBound,
            format!("level {l}"),
            max <= bound && max == bound && attained_at_plus,
            json!({"level": l, "max_norm": format_q(&max), "bound": format_q(&bound), "argmax": word, "attained": attained_at_plus}),
        ));

        // grid identity
        let level: BTreeSet<QVec> = slice.into_iter().map(|(_, v)| v).collect();
        let grid = odd_grid(dim, l);
        certs.push(Certificate::new(
            CertificateKind::GridIdentity,
            format!("level {l}"),
            level == grid,
            json!({"level": l, "level_size": level.len(), "grid_size": grid.len(),
                   "missing": grid.difference(&level).take(4).map(|p| ShowVec(p).to_string()).collect::<Vec<_>>(),
                   "extra": level.difference(&grid).take(4).map(|p| ShowVec(p).to_string()).collect::<Vec<_>>()}),
        ));

        // density at the integer height l
        let density_bound = pow2(1 - l as i64);
        let radius = product_covering_radius(&level, dim);
        certs.push(Certificate::new(
            CertificateKind::Density,
            format!("height {l}"),
            radius.as_ref().is_some_and(|r| *r <= density_bound),
            json!({"height": format_q(&Q::from_integer((l as i64).into())),
                   "covering_radius": radius.as_ref().map(format_q),
                   "bound": format_q(&density_bound)}),
        ));

        // density at sampled heights (l − 1) + λ
        let m = l - 1;
        for lambda in sampled_lambdas() {
            let pts: BTreeSet<QVec> = height_slice(n, m, &lambda)?.into_iter().map(|(_, v)| v).collect();
            let radius = product_covering_radius(&pts, dim);
            let proof_bound = pow2(-(m as i64) - 1) * (Q::from_integer(2.into()) - &lambda);
            let claim_bound = pow2(1 - m as i64);
            certs.push(Certificate::new(
                CertificateKind::Density,
                format!("height {m}+{}", format_q(&lambda)),
                radius.as_ref().is_some_and(|r| *r <= proof_bound && *r < claim_bound),
                json!({"height": format_q(&(Q::from_integer((m as i64).into()) + &lambda)),
                       "covering_radius": radius.as_ref().map(format_q),
                       "proof_bound": format_q(&proof_bound),
                       "bound": format_q(&claim_bound)}),
            ));
        }
    }
    Ok(certs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    /// Closed form `f([m, x]) = Σ_{i ≤ m} 2^{−i} s_i`, independent of the
    /// recursion.
    fn vertex_closed_form(word: &[u32], dim: usize) -> QVec {
        (0..dim)
            .map(|c| {
                word.iter()
                    .enumerate()
                    .map(|(i, &s)| Q::from_integer(sign_at(s, c, dim).into()) * pow2(-(i as i64) - 1))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn root_and_first_level() {
        assert_eq!(f_eval(0, &TreeAddress::Root).unwrap(), vec![q(0); 3]);
        let l1 = level_set(0, 1).unwrap();
        assert_eq!(l1.len(), 8);
        assert!(l1.iter().all(|p| p.iter().all(|c| c.abs() == frac(1, 2))));
    }

    #[test]
    fn one_recursion_step() {
        let addr = TreeAddress::Edge {
            word: vec![0b111, 0b111],
            lambda: frac(1, 2),
        };
        assert_eq!(f_eval(0, &addr).unwrap(), vec![frac(5, 8); 3]);
    }

    #[test]
    fn identified_endpoints_agree() {
        let dim = 3;
        for x in 0..8u32 {
            for s in 0..8u32 {
                let top = TreeAddress::vertex(vec![x]);
                let bottom = TreeAddress::Edge { word: vec![x, s], lambda: q(0) };
                assert_eq!(f_eval(0, &top).unwrap(), f_eval(0, &bottom).unwrap());
                assert_eq!(f_eval(0, &bottom).unwrap(), vertex_closed_form(&[x], dim));
            }
        }
    }

    #[test]
    fn recursion_matches_closed_form() {
        for (w, _) in height_slice(0, 2, &Q::one()).unwrap().iter().step_by(37) {
            assert_eq!(f_eval(0, &TreeAddress::vertex(w.clone())).unwrap(), vertex_closed_form(w, 3));
        }
        for (w, _) in height_slice(1, 1, &Q::one()).unwrap().iter().step_by(11) {
            assert_eq!(f_eval(1, &TreeAddress::vertex(w.clone())).unwrap(), vertex_closed_form(w, 5));
        }
    }

    #[test]
    fn level_sizes() {
        let sizes: Vec<usize> = (1..=4).map(|m| level_set(0, m).unwrap().len()).collect();
        assert_eq!(sizes, vec![8, 64, 512, 4096]);
        assert!(level_set(0, 3).unwrap().iter().flatten().all(|c| c.denom() == &8.into() && c.numer() % 2 != 0.into()));
        assert!(matches!(level_set(0, 6), Err(PcError::TooLarge(_))));
    }

    #[test]
    fn brute_force_covering_radius_matches_product_formula() {
        // probe every point of a fine grid and take the worst distance; for
        // a product of grids the sup is attained on the 1/2^(m+1) lattice
        let dim = 3;
        let level = level_set(0, 2).unwrap();
        let probes = odd_grid(dim, 3).into_iter().chain(odd_grid(dim, 0));
        let mut worst = Q::zero();
        for z in probes.chain([vec![q(1); 3], vec![q(-1); 3]]) {
            let d = level.iter().map(|a| crate::rational::dist_inf(a, &z)).min().unwrap();
            worst = worst.max(d);
        }
        assert_eq!(worst, frac(1, 4));
        assert_eq!(product_covering_radius(&level, dim), Some(frac(1, 4)));
    }

    #[test]
    fn claims_hold_for_small_levels() {
        let certs = verify_f_properties(0, 3).unwrap();
        assert!(certs.iter().all(|c| c.pass), "{certs:#?}");
        let norm3 = certs.iter().find(|c| c.kind == CertificateKind::NormBound && c.subject == "level 3").unwrap();
        assert_eq!(norm3.witness["max_norm"], "7/8");
        let certs = verify_f_properties(1, 2).unwrap();
        assert!(certs.iter().all(|c| c.pass));
    }
}
