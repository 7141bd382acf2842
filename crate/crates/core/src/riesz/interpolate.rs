use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::element::{ElementData, Gamma, GammaElement};
use super::{Location, RieszError};
use crate::rational::{format_q, Q};
use crate::topology::Point;

/// Exhaustion sets searched past the first candidate before giving up.
const MAX_EXHAUSTION_INDEX: usize = 64;

/// `ρ₁, ρ₂ ≤ σ₁, σ₂`, all in the same Γ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterpolationProblem {
    pub rho: [GammaElement; 2],
    pub sigma: [GammaElement; 2],
}

impl InterpolationProblem {
    pub fn new(
        rho1: GammaElement,
        rho2: GammaElement,
        sigma1: GammaElement,
        sigma2: GammaElement,
    ) -> Result<Self, RieszError> {
        let g = rho1.gamma();
        if [&rho2, &sigma1, &sigma2].iter().any(|e| e.gamma() != g) {
            return Err(RieszError::MixedModels);
        }
        Ok(Self {
            rho: [rho1, rho2],
            sigma: [sigma1, sigma2],
        })
    }

    pub fn from_data(gamma: &Gamma, data: &[ElementData; 4]) -> Result<Self, RieszError> {
        Self::new(
            gamma.from_data(&data[0])?,
            gamma.from_data(&data[1])?,
            gamma.from_data(&data[2])?,
            gamma.from_data(&data[3])?,
        )
    }

    /// `ρ₁ = 1, ρ₂ = 1 − δ₀ + δ₁, σ₁ = 2, σ₂ = 2 − δ₀ + δ₁` on ℤ.
    pub fn integer_gap_quadruple(gamma: &Gamma) -> Result<Self, RieszError> {
        let bump = |c: i64| {
            gamma.element(
                Q::from_integer(c.into()),
                [(Point::Int(0), Q::from_integer((-1).into())), (Point::Int(1), Q::from_integer(1.into()))],
            )
        };
        Self::new(
            gamma.constant(Q::from_integer(1.into()))?,
            bump(1)?,
            gamma.constant(Q::from_integer(2.into()))?,
            bump(2)?,
        )
    }

    pub fn gamma(&self) -> &Gamma {
        self.rho[0].gamma()
    }

    pub fn elements(&self) -> [&GammaElement; 4] {
        [&self.rho[0], &self.rho[1], &self.sigma[0], &self.sigma[1]]
    }

    /// Union of the four deviation supports.
    pub fn support(&self) -> BTreeSet<Point> {
        self.elements().iter().flat_map(|e| e.support()).collect()
    }

    pub fn lower(&self, p: &Point) -> Q {
        self.rho[0].value(p).max(self.rho[1].value(p))
    }

    pub fn upper(&self, p: &Point) -> Q {
        self.sigma[0].value(p).min(self.sigma[1].value(p))
    }

    pub fn lower_constant(&self) -> Q {
        self.rho[0].constant().clone().max(self.rho[1].constant().clone())
    }

    pub fn upper_constant(&self) -> Q {
        self.sigma[0].constant().clone().min(self.sigma[1].constant().clone())
    }

    /// First failing `ρ_j ≤ σ_k`, reported 1-based.
    pub fn precondition_failure(&self) -> Result<Option<(usize, usize, Location)>, RieszError> {
        for (j, r) in self.rho.iter().enumerate() {
            for (k, s) in self.sigma.iter().enumerate() {
                if let Some(at) = r.leq_witness(s)? {
                    return Ok(Some((j + 1, k + 1, at)));
                }
            }
        }
        Ok(None)
    }

    /// Whether `ρ_j ≤ eta ≤ σ_k` for all four bounds.
    pub fn is_interpolant(&self, eta: &GammaElement) -> Result<bool, RieszError> {
        for r in &self.rho {
            if !r.leq(eta)? {
                return Ok(false);
            }
        }
        for s in &self.sigma {
            if !eta.leq(s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Result of the max-then-average construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpolation {
    pub eta: GammaElement,
    /// Index `n` of the exhaustion set used.
    pub n: usize,
    pub l_n: Vec<Point>,
    pub t: Q,
}

impl Serialize for Interpolation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            eta: &'a GammaElement,
            n: usize,
            l_n: &'a [Point],
            t: String,
        }
        Wire {
            eta: &self.eta,
            n: self.n,
            l_n: &self.l_n,
            t: format_q(&self.t),
        }
        .serialize(s)
    }
}

/// Picks the first `L_n` holding every support, sets `η₀ = max(ρ₁, ρ₂)` on
/// it, `t = μ(L_n)⁻¹ ∫_{L_n} η₀ dμ`, and returns `η = η₀` on `L_n`, `t`
/// elsewhere.
pub fn riesz_interpolate(p: &InterpolationProblem) -> Result<Interpolation, RieszError> {
    if let Some((j, k, at)) = p.precondition_failure()? {
        return Err(RieszError::PreconditionViolated { j, k, at });
    }
    let gamma = p.gamma();
    let model = gamma.model();
    let (n, l_n) = model
        .first_covering(&p.support(), MAX_EXHAUSTION_INDEX)
        .ok_or(RieszError::NoCoveringSet)?;
    let eta0: Vec<(Point, Q)> = l_n.iter().map(|x| (x.clone(), p.lower(x))).collect();
    let measure = model.measure(&l_n);
    let integral: Q = eta0.iter().map(|(x, v)| v * model.weight(x)).sum();
    if measure.is_zero() {
        return Err(RieszError::NoCoveringSet);
    }
    let t = integral / &measure;
    if !gamma.delta().contains(&t) {
        return Err(RieszError::DeltaNotClosed {
            t,
            n,
            measure: format_q(&measure),
            delta: gamma.delta().name(),
        });
    }
    let eta = gamma.from_values(t.clone(), eta0)?;
    Ok(Interpolation { eta, n, l_n, t })
}
