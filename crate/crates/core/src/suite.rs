//! Check batteries shared by the command-line sweeps and the acceptance
//! tests. Every battery is deterministic given its seed.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::linalg::rank;
use crate::pseudocover::crosscheck::{face_samples, hull_intersections, random_pair_check};
use crate::pseudocover::transversal::{check_transversal, transversal_eta};
use crate::pseudocover::verify::{verify_bundle, verify_transversal_certificate};
use crate::pseudocover::{
    build_h, epsilon_profile, lipschitz_constant, verify_f_properties, AffineSubspace, BaseMap, BuildBundle,
    BuildConfig, CertificateKind, PcError, TransversalConfig,
};
use crate::rational::{format_q, pow2, Q, QVec};
use crate::report::Check;
use crate::riesz::random::{random_feasible_problem, ElementShape};
use crate::riesz::{
    ideal_from_compact, ideal_to_xi_open, riesz_interpolate, search_interpolant, separating_witness,
    CoefficientGroup, Gamma, GammaElement, InterpolationProblem, RieszError, SearchBound,
};
use crate::topology::enumerate::{all_orders, compact_group_rigidity, random_open_surjection, space_of_order};
use crate::topology::space::{singleton, Axiom};
use crate::topology::xi::{XiWindow, INFINITY_INDEX};
use crate::topology::{Point, TopologyError};

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Axioms, open count, "every nonempty open contains ∞", primeness and
/// point-completeness of one window model.
pub fn xi_window_checks(w: &XiWindow) -> Result<Vec<Check>, TopologyError> {
    let space = w.space();
    let k = w.window().len();
    let cert = space.verify_topology();
    let mut out: Vec<Check> = [
        Axiom::EmptyPresent,
        Axiom::FullPresent,
        Axiom::UnionClosed,
        Axiom::IntersectionClosed,
        Axiom::T0,
    ]
    .into_iter()
    .map(|a| {
        let c = cert.check(a);
        Check::new(format!("axiom {}", json!(a).as_str().unwrap_or("?")), c.pass, json!(c.witness))
    })
    .collect();
    let expected = (1u64 << k) + 1;
    out.push(Check::new(
        "open count",
        space.opens().len() as u64 == expected,
        json!({"opens": space.opens().len(), "expected": expected}),
    ));
    let bad = space.opens().iter().find(|&&u| u != 0 && u & singleton(INFINITY_INDEX) == 0);
    out.push(Check::new(
        "nonempty opens contain inf",
        bad.is_none(),
        json!({"counterexample": bad.map(|&u| space.labels_of(u))}),
    ));
    out.push(Check::new("prime", space.is_prime_space(), json!({"points": space.len()})));
    let failures = space.point_completeness_failures()?;
    out.push(Check::new(
        "point-complete",
        failures.is_empty(),
        json!({"failures": failures.iter().map(|&c| space.labels_of(c)).collect::<Vec<_>>()}),
    ));
    Ok(out)
}

/// Window sizes `1..=max` over ℤ.
pub fn xi_sizes(max: usize) -> Result<Vec<Check>, TopologyError> {
    let mut out = Vec::new();
    for k in 1..=max {
        let w = XiWindow::integer_range(0, k as i64 - 1)?;
        let checks = xi_window_checks(&w)?;
        let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        out.push(Check::new(
            format!("xi window of size {k}"),
            failed.is_empty(),
            json!({"opens": w.space().opens().len(), "failed": failed}),
        ));
    }
    Ok(out)
}

/// Exhaustive axiom and point-completeness checks on all T₀ spaces up to
/// `max_points`, with the known poset counts.
pub fn topology_small(max_points: usize) -> Vec<Check> {
    const KNOWN: [usize; 7] = [1, 1, 3, 19, 219, 4231, 130023];
    let mut out = Vec::new();
    for n in 0..=max_points {
        let orders = all_orders(n);
        let bad: Vec<usize> = orders
            .par_iter()
            .enumerate()
            .filter(|(_, o)| {
                let s = space_of_order(o);
                !s.verify_topology().all_pass() || !s.is_point_complete().unwrap_or(false)
            })
            .map(|(i, _)| i)
            .collect();
        let count_ok = KNOWN.get(n).is_none_or(|&k| k == orders.len());
        out.push(Check::new(
            format!("T0 spaces on {n} points"),
            count_ok && bad.is_empty(),
            json!({"spaces": orders.len(), "expected": KNOWN.get(n), "failing": bad.len()}),
        ));
    }
    out
}

/// Random open continuous surjections are pseudo-open and pseudo-epimorphic.
pub fn pseudo_maps(seed: u64, count: usize, max_points: usize) -> Check {
    let results: Vec<(bool, bool, usize, usize)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let m = random_open_surjection(&mut rng, max_points);
            debug_assert!(m.is_open_map() && m.is_surjective());
            (m.is_pseudo_open(), m.is_pseudo_epimorphic(), m.domain().len(), m.codomain().len())
        })
        .collect();
    let not_open = results.iter().filter(|r| !r.0).count();
    let not_epi = results.iter().filter(|r| !r.1).count();
    let mut sizes: BTreeMap<String, usize> = BTreeMap::new();
    for r in &results {
        *sizes.entry(format!("{}->{}", r.2, r.3)).or_default() += 1;
    }
    Check::new(
        "open surjections are pseudo-open and pseudo-epimorphic",
        not_open == 0 && not_epi == 0,
        json!({"maps": count, "not_pseudo_open": not_open, "not_pseudo_epimorphic": not_epi, "shapes": sizes}),
    )
}

pub fn rigidity(max_points: usize) -> Check {
    let s = compact_group_rigidity(max_points);
    Check::new(
        "minimal actions with a generic point live on one point",
        s.counterexamples.is_empty(),
        json!(s),
    )
}

fn balance(eta: &GammaElement) -> Q {
    let g = eta.gamma();
    eta.deviations().iter().map(|(x, d)| d * g.weight(x)).sum()
}

fn bounds_hold(p: &InterpolationProblem, eta: &GammaElement) -> bool {
    let pts: BTreeSet<Point> = p.support().into_iter().chain(eta.support()).collect();
    let at = |x: &Point| eta.value(x);
    let pointwise = pts
        .iter()
        .all(|x| p.rho.iter().all(|r| r.value(x) <= at(x)) && p.sigma.iter().all(|s| at(x) <= s.value(x)));
    let at_inf = p.rho.iter().all(|r| r.constant() <= eta.constant())
        && p.sigma.iter().all(|s| eta.constant() <= s.constant());
    pointwise && at_inf
}

/// Random feasible quadruples over ℚ, plus agreement with the exhaustive
/// search on small instances.
pub fn riesz_battery(seed: u64, cases: usize, oracle_cases: usize) -> Result<Vec<Check>, RieszError> {
    let gamma = Gamma::rationals_on_integers();
    let outcomes: Vec<Result<(bool, bool, String), RieszError>> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let p = random_feasible_problem(&mut rng, &gamma, &ElementShape::default())?;
            let r = riesz_interpolate(&p)?;
            Ok((bounds_hold(&p, &r.eta), balance(&r.eta).is_zero(), format_q(&r.t)))
        })
        .collect();
    let outcomes: Vec<(bool, bool, String)> = outcomes.into_iter().collect::<Result<_, _>>()?;
    let bad_bounds = outcomes.iter().filter(|o| !o.0).count();
    let bad_balance = outcomes.iter().filter(|o| !o.1).count();
    let constants: Vec<&String> = outcomes.iter().map(|o| &o.2).collect();
    let mut out = vec![Check::new(
        "interpolants satisfy all four bounds and the balance",
        bad_bounds == 0 && bad_balance == 0,
        json!({"cases": cases, "bound_failures": bad_bounds, "balance_failures": bad_balance,
               "first_constants": constants.iter().take(8).collect::<Vec<_>>()}),
    )];

    let oracle: Vec<Result<(bool, String, String), RieszError>> = (0..oracle_cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed ^ 0x5eed, i as u64);
            let p = random_feasible_problem(&mut rng, &gamma, &ElementShape::small())?;
            let r = riesz_interpolate(&p)?;
            let den = std::iter::once(r.eta.constant())
                .chain(r.eta.deviations().values())
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let den: u64 = den.try_into().unwrap_or(u64::MAX);
            let bound = SearchBound {
                window: r.l_n.clone(),
                denominator: den,
            };
            let s = search_interpolant(&p, &bound)?;
            let agree = match &s.result {
                Some(e) => p.is_interpolant(e)? && bounds_hold(&p, e) && e.constant() <= &r.t,
                None => false,
            };
            Ok((agree, format_q(&r.t), s.transcript.chosen_constant.unwrap_or_default()))
        })
        .collect();
    let oracle: Vec<(bool, String, String)> = oracle.into_iter().collect::<Result<_, _>>()?;
    let disagreements: Vec<usize> = oracle.iter().enumerate().filter(|(_, o)| !o.0).map(|(i, _)| i).collect();
    out.push(Check::new(
        "exhaustive search agrees with the construction",
        disagreements.is_empty(),
        json!({"cases": oracle_cases, "disagreements": disagreements,
               "sample": oracle.iter().take(4).map(|o| json!({"constructed": o.1, "least_found": o.2})).collect::<Vec<_>>()}),
    ));
    Ok(out)
}

/// The quadruple `ρ₁ = 1, ρ₂ = 1 − δ₀ + δ₁, σ₁ = 2, σ₂ = 2 − δ₀ + δ₁`: no
/// ℤ-valued interpolant on `[−r, r]` for `r ≤ max_r`, constant 4/3 over ℚ.
pub fn riesz_counterexample(delta: CoefficientGroup, max_r: i64) -> Result<Vec<Check>, RieszError> {
    let gamma = Gamma::on_integers(delta);
    let p = InterpolationProblem::integer_gap_quadruple(&gamma)?;
    let mut out = Vec::new();
    let den = match delta {
        CoefficientGroup::Integers => 1,
        _ => 3,
    };
    for r in 1..=max_r {
        let s = search_interpolant(&p, &SearchBound::integer_window(-r, r, den))?;
        let t = &s.transcript;
        let complete = t.cases.len() == t.constants_examined
            && t.cases.iter().all(|c| c.excluded_by.is_some() || c.reachable.is_some());
        let expect_none = delta == CoefficientGroup::Integers;
        let found = s.result.as_ref().map(|e| format_q(e.constant()));
        let pass = complete && (s.result.is_none() == expect_none) && (expect_none || found.as_deref() == Some("4/3"));
        out.push(Check::new(
            format!("search on [-{r}, {r}] over {}", delta.name()),
            pass,
            json!({"result": s.result, "transcript": t}),
        ));
    }
    let constructed = riesz_interpolate(&p);
    let (pass, detail) = match (&constructed, delta) {
        (Ok(r), _) => (r.t == Q::new(4.into(), 3.into()), json!(r)),
        (Err(RieszError::DeltaNotClosed { t, .. }), CoefficientGroup::Integers) => {
            (t == &Q::new(4.into(), 3.into()), json!({"error": constructed.as_ref().unwrap_err().to_string()}))
        }
        (Err(e), _) => (false, json!({"error": e.to_string()})),
    };
    out.push(Check::new("construction on the same quadruple", pass, detail));
    Ok(out)
}

/// `F ↦ N_F` over all subsets of an integer window: injective with explicit
/// separating witnesses, meets are unions, and the Ξ opens reverse nothing.
pub fn ideal_lattice(lo: i64, hi: i64) -> Result<Vec<Check>, RieszError> {
    let gamma = Gamma::rationals_on_integers();
    let window: Vec<Point> = (lo..=hi).map(Point::Int).collect();
    let k = window.len();
    if k > 12 {
        return Err(RieszError::Parse(format!("window of {k} points is too large for an exhaustive sweep")));
    }
    let w = XiWindow::integer_range(lo, hi).map_err(|e| RieszError::Parse(e.to_string()))?;
    let pool: Vec<Point> = (lo - 1..=hi + 1).map(Point::Int).collect();
    let subsets: Vec<BTreeSet<Point>> = (0u32..1 << k)
        .map(|m| window.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, p)| p.clone()).collect())
        .collect();
    // probes: every w_y δ_x − w_x δ_y on the pool, and the unit
    let mut probes = vec![gamma.unit()];
    for (i, x) in pool.iter().enumerate() {
        for y in &pool[i + 1..] {
            probes.push(gamma.element(Q::zero(), [(x.clone(), gamma.weight(y)), (y.clone(), -gamma.weight(x))])?);
        }
    }
    let ideals: Vec<_> = subsets.iter().map(|f| ideal_from_compact(&gamma, f.iter().cloned())).collect::<Result<_, _>>()?;
    let opens: Vec<u64> = ideals.iter().map(|i| ideal_to_xi_open(i, &w)).collect::<Result<_, _>>()?;
    let member: Vec<Vec<bool>> = ideals.iter().map(|i| probes.iter().map(|p| i.contains(p)).collect()).collect();

    let n = subsets.len();
    let rows: Vec<Result<(usize, usize, usize), RieszError>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let (mut no_witness, mut bad_meet, mut bad_order) = (0, 0, 0);
            for b in 0..n {
                if a != b {
                    match separating_witness(&gamma, &subsets[a], &subsets[b], &pool)? {
                        Some((eta, in_first)) => {
                            if ideals[a].contains(&eta) != in_first || ideals[b].contains(&eta) == in_first {
                                no_witness += 1;
                            }
                        }
                        None => no_witness += 1,
                    }
                }
                let u = a | b;
                if (0..probes.len()).any(|j| (member[a][j] && member[b][j]) != member[u][j]) {
                    bad_meet += 1;
                }
                let ideal_le = ideals[a].is_subideal_of(&ideals[b]);
                let probes_le = (0..probes.len()).all(|j| !member[a][j] || member[b][j]);
                let open_le = opens[a] & !opens[b] == 0;
                if ideal_le != open_le || ideal_le != probes_le {
                    bad_order += 1;
                }
            }
            Ok((no_witness, bad_meet, bad_order))
        })
        .collect();
    let rows: Vec<(usize, usize, usize)> = rows.into_iter().collect::<Result<_, _>>()?;
    let sum = |f: fn(&(usize, usize, usize)) -> usize| rows.iter().map(f).sum::<usize>();
    let distinct_opens: BTreeSet<u64> = opens.iter().copied().collect();
    let nontrivial: BTreeSet<u64> = w.space().opens().iter().copied().filter(|&u| u != 0).collect();
    Ok(vec![
        Check::new(
            "F -> N_F is injective with separating witnesses",
            sum(|r| r.0) == 0,
            json!({"subsets": n, "pairs": n * (n - 1), "unseparated": sum(|r| r.0)}),
        ),
        Check::new(
            "N_F1 meet N_F2 = N_(F1 union F2)",
            sum(|r| r.1) == 0,
            json!({"pairs": n * n, "probes": probes.len(), "failures": sum(|r| r.1)}),
        ),
        Check::new(
            "ideal_to_xi_open is an order isomorphism onto the nonempty opens",
            sum(|r| r.2) == 0 && distinct_opens == nontrivial,
            json!({"opens_hit": distinct_opens.len(), "nonempty_opens": nontrivial.len(), "order_failures": sum(|r| r.2)}),
        ),
    ])
}

/// Claims on `f` up to `m_max`, grouped by kind.
pub fn f_claims(n: usize, m_max: usize) -> Result<Vec<Check>, PcError> {
    let certs = verify_f_properties(n, m_max)?;
    let mut out = Vec::new();
    for kind in [CertificateKind::NormBound, CertificateKind::GridIdentity, CertificateKind::Density] {
        let of_kind: Vec<_> = certs.iter().filter(|c| c.kind == kind).collect();
        out.push(Check::new(
            format!("f {kind} (n = {n}, levels up to {m_max})"),
            of_kind.iter().all(|c| c.pass),
            json!(of_kind),
        ));
    }
    // exact values, not just the inequalities
    let mut exact = true;
    let mut sizes = Vec::new();
    for m in 1..=m_max {
        let subject = format!("level {m}");
        let norm = certs.iter().find(|c| c.kind == CertificateKind::NormBound && c.subject == subject);
        let grid = certs.iter().find(|c| c.kind == CertificateKind::GridIdentity && c.subject == subject);
        let dens = certs
            .iter()
            .find(|c| c.kind == CertificateKind::Density && c.subject == format!("height {m}"));
        let target = format_q(&(Q::one() - pow2(-(m as i64))));
        exact &= norm.is_some_and(|c| c.witness["max_norm"] == json!(target));
        exact &= dens.is_some_and(|c| c.witness["covering_radius"] == json!(format_q(&pow2(-(m as i64)))));
        let size = grid.map(|c| c.witness["level_size"].clone()).unwrap_or_default();
        exact &= size == json!(1u64 << (crate::pseudocover::ambient_dim(n) * m));
        sizes.push(size);
    }
    out.push(Check::new(
        "f exact extremes: max norm 1 - 2^-m, covering radius 2^-m, level sizes",
        exact,
        json!({"level_sizes": sizes}),
    ));
    Ok(out)
}

fn random_vec<R: Rng>(rng: &mut R, d: usize, r: i64) -> QVec {
    (0..d).map(|_| Q::from_integer(rng.random_range(-r..=r).into())).collect()
}

/// A random admissible instance: `m + n + 1 ≤ d`, `h` injective on the
/// first `k` basis vectors.
fn random_instance<R: Rng>(rng: &mut R) -> (BaseMap, Vec<AffineSubspace>) {
    let n = rng.random_range(1..=3usize);
    let k = rng.random_range(0..=n);
    let m = rng.random_range(0..=2usize);
    let d = n + 1 + m + rng.random_range(0..=1usize);
    let origin = random_vec(rng, d, 3);
    let images = loop {
        let imgs: Vec<QVec> = (0..k).map(|_| random_vec(rng, d, 3)).collect();
        let dirs: Vec<QVec> = imgs.iter().map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect()).collect();
        if rank(&dirs) == k {
            break imgs;
        }
    };
    let ks = (0..rng.random_range(1..=3usize))
        .map(|_| {
            let dim = rng.random_range(0..=m);
            AffineSubspace {
                point: random_vec(rng, d, 3),
                directions: (0..dim).map(|_| random_vec(rng, d, 2)).collect(),
            }
        })
        .collect();
    (BaseMap { origin, images, n }, ks)
}

/// Random admissible instances: a certified `η` within the budget, each
/// certificate re-verified independently, forced degenerate samples
/// rejected.
pub fn transversal_battery(seed: u64, count: usize) -> Vec<Check> {
    let cfg = TransversalConfig::default();
    let rows: Vec<(bool, bool, bool, usize, String)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            let (base, ks) = random_instance(&mut rng);
            let shape = format!("n={} k={} d={} |K|={}", base.n, base.k(), base.dim(), ks.len());
            let out = transversal_eta(&base, &ks, &cfg, seed.wrapping_add(i as u64));
            let (found, reverified, attempts) = match &out {
                Ok(o) => {
                    let v = serde_json::to_value(&o.certificate).map(|c| verify_transversal_certificate(&c));
                    (o.certificate.pass, matches!(v, Ok(Ok(true))), o.attempts)
                }
                Err(_) => (false, false, cfg.budget),
            };
            // degenerate choices: η = h(0), and η inside the first K
            let mut rejected = true;
            if base.k() < base.n {
                let fresh = base.n - base.k();
                for bad in [base.origin.clone(), ks[0].point.clone()] {
                    let mut eta = vec![bad];
                    eta.extend((1..fresh).map(|_| random_vec(&mut rng, base.dim(), 3)));
                    let c = check_transversal(&base, &ks, &eta);
                    let v = serde_json::to_value(&c).map(|c| verify_transversal_certificate(&c));
                    rejected &= !c.pass && matches!(v, Ok(Ok(false)));
                }
            }
            (found, reverified, rejected, attempts, shape)
        })
        .collect();
    let not_found: Vec<&String> = rows.iter().filter(|r| !r.0).map(|r| &r.4).collect();
    let not_reverified = rows.iter().filter(|r| r.0 && !r.1).count();
    let accepted_degenerate = rows.iter().filter(|r| !r.2).count();
    let max_attempts = rows.iter().map(|r| r.3).max().unwrap_or(0);
    let mut shapes: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &rows {
        *shapes.entry(r.4.as_str()).or_default() += 1;
    }
    vec![
        Check::new(
            "certified eta found within the retry budget",
            not_found.is_empty(),
            json!({"instances": count, "failed": not_found, "max_attempts": max_attempts, "shapes": shapes}),
        ),
        Check::new(
            "certificates re-verify independently",
            not_reverified == 0,
            json!({"mismatches": not_reverified}),
        ),
        Check::new(
            "forced degenerate samples are rejected",
            accepted_degenerate == 0,
            json!({"accepted": accepted_degenerate}),
        ),
    ]
}

/// Builds `h`, then checks it every way available: its own certificates by
/// kind, exact hull intersections, random pairs, shared faces, the
/// independent verifier, and the Lipschitz / ε data.
pub fn pc_certify(config: &BuildConfig, pairs: usize) -> Result<(BuildBundle, Vec<Check>), PcError> {
    let bundle = build_h(config)?;
    let mut out = Vec::new();
    let mut kinds: BTreeMap<CertificateKind, (usize, usize)> = BTreeMap::new();
    for c in &bundle.certificates {
        let e = kinds.entry(c.kind).or_default();
        e.0 += 1;
        e.1 += usize::from(!c.pass);
    }
    for (kind, (total, failed)) in &kinds {
        out.push(Check::new(
            format!("{kind} certificates"),
            *failed == 0,
            json!({"certificates": total, "failed": failed}),
        ));
    }
    out.push(Check::new(
        "piece count",
        bundle.pieces.len() as u128 == (1..=config.depth as u32).map(|d| 1u128 << (bundle.dim as u32 * d)).sum::<u128>(),
        json!({"pieces": bundle.pieces.len()}),
    ));
    let hulls = hull_intersections(&bundle);
    out.push(Check::new(
        "hull intersections only on base faces",
        hulls.violations.is_empty(),
        json!(hulls),
    ));
    let pr = random_pair_check(&bundle, pairs, config.seed ^ 0xface);
    out.push(Check::new(
        "random cross-piece pairs have distinct images",
        pr.collisions.is_empty() && (bundle.pieces.len() < 2 || pr.pairs == pairs),
        json!(pr),
    ));
    let mismatches = face_samples(&bundle, 100, config.seed ^ 0xfeed);
    out.push(Check::new(
        "shared faces agree at random points",
        mismatches == 0,
        json!({"faces": bundle.pieces.len(), "samples_per_face": 100, "mismatches": mismatches}),
    ));
    let value = serde_json::to_value(&bundle).map_err(|e| PcError::InconsistentFibers(e.to_string()))?;
    let rep = verify_bundle(&value);
    out.push(Check::new(
        "independent verifier accepts the bundle",
        rep.pass(),
        json!({"pieces": rep.pieces, "checks": rep.checks, "failures": rep.failures.iter().take(10).collect::<Vec<_>>()}),
    ));
    let (l, lcert) = lipschitz_constant(&bundle);
    out.push(Check::new("Lipschitz constant", lcert.pass, json!(lcert)));
    let ecert = epsilon_profile(&l).certify(config.depth);
    out.push(Check::new("epsilon profile", ecert.pass, json!(ecert)));
    Ok((bundle, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batteries_pass() {
        assert!(xi_sizes(4).unwrap().iter().all(|c| c.pass));
        assert!(topology_small(3).iter().all(|c| c.pass));
        assert!(pseudo_maps(1, 20, 4).pass);
        let r = riesz_battery(1, 20, 5).unwrap();
        assert!(r.iter().all(|c| c.pass), "{r:#?}");
        assert!(riesz_counterexample(CoefficientGroup::Integers, 2).unwrap().iter().all(|c| c.pass));
        assert!(riesz_counterexample(CoefficientGroup::Rationals, 2).unwrap().iter().all(|c| c.pass));
        assert!(ideal_lattice(0, 3).unwrap().iter().all(|c| c.pass));
        assert!(f_claims(0, 2).unwrap().iter().all(|c| c.pass));
        assert!(transversal_battery(1, 20).iter().all(|c| c.pass));
        let (_, checks) = pc_certify(&BuildConfig { depth: 1, ..Default::default() }, 200).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:#?}");
    }
}
