//! Finite truncations of a pseudocovering: labelled fibers of sample points
//! in `Z = [−1, 1]^N`, restriction to a set of labels with re-verified
//! density, and the projection onto a Ξ window.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::build::BuildBundle;
use super::tree::odd_grid;
use super::{Certificate, CertificateKind, PcError};
use crate::linalg::{solve, Solution};
use crate::rational::{dist_inf, format_q, pow2, serde_q, serde_qmat, QVec, ShowVec, Q};
use crate::topology::space::{singleton, PointSet};
use crate::topology::xi::{XiWindow, INFINITY_INDEX};
use crate::topology::{FiniteT0Space, Point, SpaceMap};

/// Probe count times fiber size allowed in one density check.
const PROBE_WORK: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    #[serde(with = "serde_qmat")]
    pub points: Vec<QVec>,
    /// Required density: every point of `Z` lies within this distance.
    #[serde(with = "serde_q")]
    pub epsilon: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcTruncation {
    pub dim: usize,
    pub fibers: BTreeMap<Point, Fiber>,
    /// Samples of `Z ∖ h(Y)`.
    #[serde(with = "serde_qmat")]
    pub extra: Vec<QVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "points")]
pub enum LabelPredicate {
    All,
    Even,
    Odd,
    Set(Vec<Point>),
}

impl LabelPredicate {
    pub fn holds(&self, p: &Point) -> bool {
        let first = p.coords().first().copied().unwrap_or(0);
        match self {
            LabelPredicate::All => true,
            LabelPredicate::Even => first.is_even(),
            LabelPredicate::Odd => first.is_odd(),
            LabelPredicate::Set(s) => s.contains(p),
        }
    }
}

/// Whether `z` lies in `offset + M [0,1]^k` for a full-column-rank `M`.
fn in_parallelotope(rows: &[QVec], offset: &[Q], z: &[Q]) -> bool {
    let rhs: QVec = z.iter().zip(offset).map(|(a, b)| a - b).collect();
    if rows.first().is_none_or(|r| r.is_empty()) {
        return rhs.iter().all(Zero::is_zero);
    }
    match solve(rows, &rhs) {
        Solution::Inconsistent => false,
        Solution::Affine { particular, kernel } => {
            kernel.is_empty() && particular.iter().all(|u| !u.is_negative() && *u <= Q::one())
        }
    }
}

/// Whether `z` lies in the truncated image `h([0,1]^n × Y⁰_{≤ depth})`.
pub fn in_image(bundle: &BuildBundle, z: &[Q]) -> bool {
    let zero = vec![Q::zero(); bundle.dim];
    in_parallelotope(&bundle.g0, &zero, z) || bundle.pieces.iter().any(|p| in_parallelotope(&p.matrix, &p.offset, z))
}

/// `sup_{probe} min_{a} ‖probe − a‖∞`, on integers when the common
/// denominator allows it.
fn probe_radius(points: &[QVec], probes: &[QVec]) -> Q {
    let den = points
        .iter()
        .chain(probes)
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled = |v: &QVec| -> Option<Vec<i64>> {
        v.iter().map(|x| (x.numer() * (&den / x.denom())).to_i64().filter(|k| k.abs() < 1 << 61)).collect()
    };
    let pts: Option<Vec<Vec<i64>>> = points.iter().map(scaled).collect();
    let prs: Option<Vec<Vec<i64>>> = probes.iter().map(scaled).collect();
    match pts.zip(prs) {
        Some((pts, prs)) => {
            let worst = prs
                .iter()
                .map(|z| {
                    pts.iter()
                        .map(|a| a.iter().zip(z).map(|(x, y)| (x - y).abs()).max().unwrap_or(0))
                        .min()
                        .unwrap_or(i64::MAX)
                })
                .max()
                .unwrap_or(0);
            Q::new(BigInt::from(worst), den)
        }
        None => probes
            .iter()
            .map(|z| points.iter().map(|a| dist_inf(a, z)).min().unwrap_or_else(|| Q::from_integer(4.into())))
            .max()
            .unwrap_or_else(Q::zero),
    }
}

/// Density certificate: with probes on the odd grid of level `p` (covering
/// radius `2^{−p}`), every point of `Z` is within `r + 2^{−p}` of the fiber,
/// where `r` is the worst probe distance.
pub fn density_certificate(label: &Point, fiber: &Fiber, dim: usize, finest: usize) -> Result<Certificate, PcError> {
    if fiber.points.is_empty() {
        return Err(PcError::InconsistentFibers(format!("fiber over {label} is empty")));
    }
    let mut level = finest;
    while level > 1 && (1usize << (dim * level).min(63)).saturating_mul(fiber.points.len()) > PROBE_WORK {
        level -= 1;
    }
    if (1usize << (dim * level).min(63)).saturating_mul(fiber.points.len()) > PROBE_WORK {
        return Err(PcError::TooLarge(1u128 << (dim * level).min(127)));
    }
    let probes: Vec<QVec> = odd_grid(dim, level).into_iter().collect();
    let r = probe_radius(&fiber.points, &probes);
    let delta = pow2(-(level as i64));
    let bound = &r + &delta;
    Ok(Certificate::new(
        CertificateKind::Density,
        format!("fiber {label}"),
        bound <= fiber.epsilon,
        json!({
            "label": label,
            "fiber_size": fiber.points.len(),
            "probe_level": level,
            "probe_radius": format_q(&r),
            "probe_covering_radius": format_q(&delta),
            "density_bound": format_q(&bound),
            "required": format_q(&fiber.epsilon),
        }),
    ))
}

impl PcTruncation {
    /// Fibers over `0..=depth`: the images `h(0, [l, x])` of the level-`l`
    /// vertices, which must be `(2^{−l+1} + 2^{−l−2})`-dense; plus `extra`
    /// grid samples of `Z` outside the truncated image of `h`.
    pub fn from_bundle(bundle: &BuildBundle, extra: usize, seed: u64) -> Result<Self, PcError> {
        let mut fibers = BTreeMap::new();
        for l in 0..=bundle.depth {
            let points: Vec<QVec> = if l == 0 {
                vec![vec![Q::zero(); bundle.dim]]
            } else {
                bundle.pieces.iter().filter(|p| p.depth() == l).map(|p| p.endpoint.clone()).collect()
            };
            let epsilon = pow2(1 - l as i64) + pow2(-(l as i64) - 2);
            fibers.insert(Point::Int(l as i64), Fiber { points, epsilon });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples = Vec::new();
        let den = 1i64 << 8;
        let mut attempts = 0;
        while samples.len() < extra {
            attempts += 1;
            if attempts > 100 * extra.max(1) {
                return Err(PcError::RetryBudgetExhausted { attempts });
            }
            let z: QVec = (0..bundle.dim)
                .map(|_| Q::new(BigInt::from(rng.random_range(-den..=den)), BigInt::from(den)))
                .collect();
            if !in_image(bundle, &z) {
                samples.push(z);
            }
        }
        Ok(Self {
            dim: bundle.dim,
            fibers,
            extra: samples,
        })
    }

    pub fn len(&self) -> usize {
        self.fibers.values().map(|f| f.points.len()).sum::<usize>() + self.extra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Keeps at most `per_fiber` points of each fiber and `extra` of the
    /// extra samples, spread evenly through each list.
    pub fn thin(&self, per_fiber: usize, extra: usize) -> Self {
        fn pick(v: &[QVec], k: usize) -> Vec<QVec> {
            if v.len() <= k {
                return v.to_vec();
            }
            (0..k).map(|i| v[i * v.len() / k].clone()).collect()
        }
        Self {
            dim: self.dim,
            fibers: self
                .fibers
                .iter()
                .map(|(l, f)| {
                    (
                        l.clone(),
                        Fiber {
                            points: pick(&f.points, per_fiber.max(1)),
                            epsilon: f.epsilon.clone(),
                        },
                    )
                })
                .collect(),
            extra: pick(&self.extra, extra),
        }
    }

    pub fn density_certificates(&self, finest: usize) -> Result<Vec<Certificate>, PcError> {
        self.fibers
            .iter()
            .map(|(l, f)| density_certificate(l, f, self.dim, finest))
            .collect()
    }
}

/// Restricts to fibers whose label is in `window` and satisfies `pred`, and
/// re-checks density on what is left.
pub fn restrict_pseudocovering(
    pc: &PcTruncation,
    pred: &LabelPredicate,
    window: &[Point],
    finest: usize,
) -> Result<(PcTruncation, Vec<Certificate>), PcError> {
    let fibers: BTreeMap<Point, Fiber> = pc
        .fibers
        .iter()
        .filter(|(l, _)| window.contains(l) && pred.holds(l))
        .map(|(l, f)| (l.clone(), f.clone()))
        .collect();
    if fibers.is_empty() {
        return Err(PcError::EmptyRestriction);
    }
    let out = PcTruncation {
        dim: pc.dim,
        fibers,
        extra: pc.extra.clone(),
    };
    let certs = out.density_certificates(finest)?;
    Ok((out, certs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiProjection {
    pub map: SpaceMap,
    #[serde(with = "serde_qmat")]
    pub samples: Vec<QVec>,
    /// The fiber label of each sample; `None` for samples off `h(Y)`.
    pub labels: Vec<Option<Point>>,
    pub certificate: Certificate,
}

impl PiProjection {
    /// `π(U ∩ sample)` for the ball `U = B(center, radius)`.
    pub fn image_of_ball(&self, center: &[Q], radius: &Q) -> PointSet {
        self.samples
            .iter()
            .enumerate()
            .filter(|(_, z)| dist_inf(z, center) < *radius)
            .fold(0, |acc, (i, _)| acc | singleton(self.map.assignment()[i]))
    }
}

/// `π(z) = q(y)` on fiber samples with a window label, `∞` on every other
/// sample (fibers over `P ∖ W` collapse to `∞` in the window model).
pub fn pi_projection(pc: &PcTruncation, w: &XiWindow) -> Result<PiProjection, PcError> {
    let mut samples = Vec::new();
    let mut labels = Vec::new();
    for (l, f) in &pc.fibers {
        if f.points.iter().any(|p| p.len() != pc.dim) {
            return Err(PcError::InconsistentFibers(format!("fiber over {l} has points outside ℝ^{}", pc.dim)));
        }
        for p in &f.points {
            samples.push(p.clone());
            labels.push(Some(l.clone()));
        }
    }
    for z in &pc.extra {
        samples.push(z.clone());
        labels.push(None);
    }
    for (i, z) in samples.iter().enumerate() {
        if let Some(j) = samples[..i].iter().position(|y| y == z) {
            if labels[i] != labels[j] {
                return Err(PcError::InconsistentFibers(format!("{} lies in two fibers", ShowVec(z))));
            }
        }
    }
    if samples.len() > crate::topology::space::MAX_POINTS {
        return Err(PcError::TooLarge(samples.len() as u128));
    }
    let assignment: Vec<usize> = labels
        .iter()
        .map(|l| l.as_ref().and_then(|p| w.index_of(p)).unwrap_or(INFINITY_INDEX))
        .collect();
    let domain = FiniteT0Space::discrete(samples.len());
    let map = SpaceMap::new(domain, w.space().clone(), assignment.clone())
        .map_err(|e| PcError::InconsistentFibers(e.to_string()))?;

    let surjective = map.is_surjective();
    // continuity proxy: the preimage of a closed K ⊆ W is exactly the
    // samples of the fibers over K
    let window = w.window();
    let ks: Vec<Vec<Point>> = if window.len() <= 10 {
        (0u32..1 << window.len())
            .map(|m| window.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, p)| p.clone()).collect())
            .collect()
    } else {
        window.iter().map(|p| vec![p.clone()]).collect()
    };
    let mut continuity = true;
    for k in &ks {
        let mask = w.mask_of(k).expect("subsets of the window");
        let pre = map.preimage(mask);
        let expected = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.as_ref().is_some_and(|p| k.contains(p)))
            .fold(0u64, |acc, (i, _)| acc | singleton(i));
        continuity &= pre == expected;
    }
    // openness proxy: balls around samples off h(Y) have open images that
    // contain ∞ and miss only window points
    let mut balls = Vec::new();
    let mut openness = true;
    for (i, z) in samples.iter().enumerate().filter(|(i, _)| labels[*i].is_none()) {
        for radius in [pow2(-2), pow2(-1), Q::one()] {
            let img = samples
                .iter()
                .enumerate()
                .filter(|(_, y)| dist_inf(y, z) < radius)
                .fold(0, |acc, (j, _)| acc | singleton(map.assignment()[j]));
            let ok = img & singleton(INFINITY_INDEX) != 0 && w.space().is_open(img);
            openness &= ok;
            let missed: Vec<String> = w.space().labels_of(w.space().full() & !img).iter().map(|l| l.to_string()).collect();
            balls.push(json!({"sample": i, "radius": format_q(&radius), "missed": missed, "open": ok}));
        }
    }
    let certificate = Certificate::new(
        CertificateKind::Density,
        "pi projection",
        surjective && continuity && openness,
        json!({
            "samples": samples.len(),
            "surjective": surjective,
            "closed_sets_checked": ks.len(),
            "continuity": continuity,
            "balls": balls,
            "openness": openness,
        }),
    );
    Ok(PiProjection {
        map,
        samples,
        labels,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudocover::build::{build_h, BuildConfig};
    use crate::rational::{frac, q};

    fn toy() -> (BuildBundle, PcTruncation) {
        let b = build_h(&BuildConfig { depth: 2, seed: 4, ..Default::default() }).unwrap();
        let pc = PcTruncation::from_bundle(&b, 8, 5).unwrap();
        (b, pc)
    }

    #[test]
    fn containment() {
        let b = build_h(&BuildConfig { depth: 1, ..Default::default() }).unwrap();
        let p = &b.pieces[3];
        assert!(in_image(&b, &p.eval(&[], &frac(1, 3))));
        assert!(in_image(&b, &vec![q(0); 3]));
        assert!(!in_image(&b, &vec![q(1); 3]));
    }

    #[test]
    fn fibers_are_dense() {
        let (b, pc) = toy();
        assert_eq!(pc.fibers.len(), 3);
        assert!(pc.extra.iter().all(|z| !in_image(&b, z)));
        let certs = pc.density_certificates(4).unwrap();
        assert!(certs.iter().all(|c| c.pass), "{certs:#?}");
    }

    #[test]
    fn restriction() {
        let (_, pc) = toy();
        let window: Vec<Point> = (0..=2).map(Point::Int).collect();
        let (all, _) = restrict_pseudocovering(&pc, &LabelPredicate::All, &window, 4).unwrap();
        assert_eq!(all, pc);
        let (even, certs) = restrict_pseudocovering(&pc, &LabelPredicate::Even, &window, 4).unwrap();
        assert_eq!(even.fibers.keys().cloned().collect::<Vec<_>>(), vec![Point::Int(0), Point::Int(2)]);
        assert!(certs.iter().all(|c| c.pass));
        let (one, certs) =
            restrict_pseudocovering(&pc, &LabelPredicate::Set(vec![Point::Int(1)]), &window, 4).unwrap();
        assert_eq!(one.fibers.len(), 1);
        assert_eq!(certs[0].witness["fiber_size"], 8);
        assert_eq!(
            restrict_pseudocovering(&pc, &LabelPredicate::Set(vec![Point::Int(7)]), &window, 4),
            Err(PcError::EmptyRestriction)
        );
    }

    #[test]
    fn projection_onto_window() {
        let (_, pc) = toy();
        let small = pc.thin(6, 6);
        let w = XiWindow::integer_range(0, 1).unwrap();
        let pi = pi_projection(&small, &w).unwrap();
        assert!(pi.certificate.pass, "{:#?}", pi.certificate);
        assert!(pi.map.is_surjective());
        // level 2 lies outside the window and collapses to ∞
        let i = pi.labels.iter().position(|l| *l == Some(Point::Int(2))).unwrap();
        assert_eq!(pi.map.assignment()[i], INFINITY_INDEX);
        let z = &small.extra[0];
        assert!(pi.image_of_ball(z, &frac(1, 8)) & singleton(INFINITY_INDEX) != 0);
        assert_eq!(pi.image_of_ball(z, &q(0)), 0);
    }
}
