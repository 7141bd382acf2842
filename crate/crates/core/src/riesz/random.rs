//! Random elements and interpolation problems for sweeps and property
//! tests.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use super::element::{Gamma, GammaElement};
use super::interpolate::InterpolationProblem;
use super::search::{search_interpolant, SearchBound};
use super::{ceil_int, CoefficientGroup, RieszError};
use crate::rational::Q;
use crate::topology::Point;

/// Shape of random elements: integer points in `[-radius, radius]`, values
/// `k / d` with `|k / d| ≤ max_abs` and `d` drawn from `denominators`
/// (those outside Δ are skipped).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementShape {
    pub radius: i64,
    pub max_pairs: usize,
    pub max_abs: i64,
    pub denominators: Vec<u64>,
}

impl Default for ElementShape {
    fn default() -> Self {
        Self {
            radius: 3,
            max_pairs: 3,
            max_abs: 2,
            denominators: vec![1, 2, 3],
        }
    }
}

impl ElementShape {
    pub fn small() -> Self {
        Self {
            radius: 1,
            max_pairs: 2,
            max_abs: 1,
            denominators: vec![1, 2],
        }
    }
}

fn random_value<R: Rng>(rng: &mut R, delta: CoefficientGroup, shape: &ElementShape) -> Q {
    let dens: Vec<u64> = shape
        .denominators
        .iter()
        .copied()
        .filter(|&d| d > 0 && delta.admits_denominator(d))
        .collect();
    let d = if dens.is_empty() { 1 } else { dens[rng.random_range(0..dens.len())] };
    let span = shape.max_abs * d as i64;
    Q::new(BigInt::from(rng.random_range(-span..=span)), BigInt::from(d))
}

fn random_point<R: Rng>(rng: &mut R, radius: i64) -> Point {
    Point::Int(rng.random_range(-radius..=radius))
}

/// A random element of Γ over ℤ: a constant plus a sum of balanced pairs
/// `a (w_y δ_x − w_x δ_y)`.
pub fn random_element<R: Rng>(rng: &mut R, gamma: &Gamma, shape: &ElementShape) -> Result<GammaElement, RieszError> {
    let delta = gamma.delta();
    let constant = random_value(rng, delta, shape);
    let mut devs = Vec::new();
    for _ in 0..rng.random_range(0..=shape.max_pairs) {
        let x = random_point(rng, shape.radius);
        let y = random_point(rng, shape.radius);
        if x == y {
            continue;
        }
        let a = random_value(rng, delta, shape);
        devs.push((x.clone(), &a * gamma.weight(&y)));
        devs.push((y, -a * gamma.weight(&x)));
    }
    gamma.element(constant, devs)
}

/// A random element of Γ₊.
pub fn random_positive<R: Rng>(rng: &mut R, gamma: &Gamma, shape: &ElementShape) -> Result<GammaElement, RieszError> {
    let e = random_element(rng, gamma, shape)?;
    let lift = ceil_int(&(-e.min_value()).max(Q::zero()));
    let extra = random_value(rng, gamma.delta(), shape).abs();
    let c = gamma.constant(Q::from_integer(lift) + extra)?;
    e.add(&c)
}

/// `ρ₁, ρ₂` random, `σ_k = ρ₁ + M + P_k` with `M ≥ max |ρ₂ − ρ₁|` an integer
/// and `P_k ∈ Γ₊` (sometimes zero, to make bounds touch).
pub fn random_feasible_problem<R: Rng>(
    rng: &mut R,
    gamma: &Gamma,
    shape: &ElementShape,
) -> Result<InterpolationProblem, RieszError> {
    let rho1 = random_element(rng, gamma, shape)?;
    let rho2 = random_element(rng, gamma, shape)?;
    let diff = rho2.sub(&rho1)?;
    let m = ceil_int(&diff.max_value().max(Q::zero()));
    let base = rho1.add(&gamma.constant(Q::from_integer(m))?)?;
    let mut sigma = Vec::new();
    for _ in 0..2 {
        let extra = if rng.random_bool(0.25) {
            gamma.zero()
        } else {
            random_positive(rng, gamma, shape)?
        };
        sigma.push(base.add(&extra)?);
    }
    let s2 = sigma.pop().expect("two bounds");
    let s1 = sigma.pop().expect("two bounds");
    InterpolationProblem::new(rho1, rho2, s1, s2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureProbe {
    pub delta: String,
    pub cases: usize,
    pub found: usize,
    /// Cases with no interpolant inside the search bound; not a disproof,
    /// since a wider bound may succeed.
    pub not_found_in_bound: usize,
}

/// Searches random feasible problems over ℤ with coefficients in `delta`,
/// inside the hull of the supports padded by one and on the grid
/// `(1/denominator)ℤ`.
pub fn dense_subgroup_probe<R: Rng>(
    rng: &mut R,
    delta: CoefficientGroup,
    cases: usize,
    denominator: u64,
) -> Result<ConjectureProbe, RieszError> {
    let gamma = Gamma::on_integers(delta);
    let shape = ElementShape {
        radius: 1,
        max_pairs: 1,
        max_abs: 1,
        denominators: vec![1, denominator],
    };
    let mut found = 0;
    for _ in 0..cases {
        let prob = random_feasible_problem(rng, &gamma, &shape)?;
        let r = prob
            .support()
            .iter()
            .map(|p| p.coords()[0].abs())
            .max()
            .unwrap_or(0)
            + 1;
        let out = search_interpolant(&prob, &SearchBound::integer_window(-r, r, denominator))?;
        if let Some(eta) = &out.result {
            debug_assert!(prob.is_interpolant(eta)?);
            found += 1;
        }
    }
    Ok(ConjectureProbe {
        delta: delta.name(),
        cases,
        found,
        not_found_in_bound: cases - found,
    })
}
