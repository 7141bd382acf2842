//! The common Lipschitz constant of the `ξ`-direction and the shrink
//! profile `ε` with `L ε(m + λ) < 2^{−m−2}`.

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use super::build::BuildBundle;
use super::{Certificate, CertificateKind};
use crate::rational::{format_q, pow2, Q};

/// Induced ∞-norm (max absolute row sum) of an `N × n` block.
fn block_norm(rows: &[Vec<Q>], cols: usize) -> Q {
    rows.iter()
        .map(|r| r[..cols].iter().map(|x| if x < &Q::zero() { -x } else { x.clone() }).sum::<Q>())
        .max()
        .unwrap_or_else(Q::zero)
}

/// `L` = max over `g₀` and every piece of the `ξ`-block norm, with a
/// certificate that every root-to-leaf chain stays at or below it and
/// reaches it somewhere.
pub fn lipschitz_constant(bundle: &BuildBundle) -> (Q, Certificate) {
    let n = bundle.n;
    let g0_norm = block_norm(&bundle.g0, n);
    let norms: Vec<Q> = bundle.pieces.iter().map(|p| block_norm(&p.matrix, n)).collect();
    let l = norms.iter().cloned().fold(g0_norm.clone(), |a, b| a.max(b));
    let mut chains = 0usize;
    let mut ok = true;
    let mut reached = g0_norm == l;
    let is_leaf = |i: usize| bundle.pieces[i].depth() == bundle.depth;
    for leaf in (0..bundle.pieces.len()).filter(|&i| is_leaf(i)) {
        chains += 1;
        let mut cur = Some(leaf);
        while let Some(i) = cur {
            ok &= norms[i] <= l;
            reached |= norms[i] == l;
            cur = bundle.pieces[i].parent;
        }
    }
    let cert = Certificate::new(
        CertificateKind::Lipschitz,
        format!("n={} depth={}", n, bundle.depth),
        ok && reached,
        json!({"constant": format_q(&l), "g0_norm": format_q(&g0_norm), "chains": chains}),
    );
    (l, cert)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsilonProfile {
    #[serde(with = "crate::rational::serde_q")]
    pub lipschitz: Q,
}

impl EpsilonProfile {
    /// `ε(t) = min(1/2, 2^{−⌈t⌉−3} / max(L, 1))`.
    pub fn eval(&self, t: &Q) -> Q {
        let k = t.ceil().to_integer();
        let k: i64 = k.try_into().unwrap_or(i64::MAX / 2);
        let denom = self.lipschitz.clone().max(Q::one());
        pow2(-k - 3).min(pow2(-1) * &denom) / denom
    }

    /// `L ε(m + λ) < 2^{−m−2}` for integer `m ≤ depth` and `λ ∈ {0, 1}`,
    /// plus monotonicity on the integers `0..=depth + 1`.
    pub fn certify(&self, depth: usize) -> Certificate {
        let mut rows = Vec::new();
        let mut ok = true;
        for m in 0..=depth as i64 {
            for lambda in [0i64, 1] {
                let t = Q::from_integer((m + lambda).into());
                let lhs = &self.lipschitz * self.eval(&t);
                let rhs = pow2(-m - 2);
                ok &= lhs < rhs;
                rows.push(json!({"m": m, "lambda": lambda, "epsilon": format_q(&self.eval(&t)),
                                  "l_epsilon": format_q(&lhs), "bound": format_q(&rhs)}));
            }
        }
        let vals: Vec<Q> = (0..=depth as i64 + 1).map(|k| self.eval(&Q::from_integer(k.into()))).collect();
        let monotone = vals.windows(2).all(|w| w[1] <= w[0]);
        Certificate::new(
            CertificateKind::EpsilonProfile,
            format!("L={}", format_q(&self.lipschitz)),
            ok && monotone,
            json!({"inequalities": rows, "nonincreasing": monotone}),
        )
    }
}

pub fn epsilon_profile(lipschitz: &Q) -> EpsilonProfile {
    EpsilonProfile {
        lipschitz: lipschitz.clone().max(Q::zero()),
    }
}
