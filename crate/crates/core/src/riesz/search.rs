//! Exhaustive search for an interpolant on a finite grid.
//!
//! For each candidate constant `c` the unknowns are the values `v_x` on the
//! window; the only coupling between points is the balance
//! `Σ (v_x − c) w_x = 0`, so the search runs a subset-sum style dynamic
//! programme over reachable partial sums instead of enumerating tables.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::element::GammaElement;
use super::interpolate::InterpolationProblem;
use super::RieszError;
use crate::rational::{format_q, Q};
use crate::topology::Point;

/// Candidate lists at or below this length are written out in transcripts.
const LIST_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchBound {
    /// Points where η may deviate from its constant.
    pub window: Vec<Point>,
    /// Values range over `(1/denominator)ℤ ∩ Δ`.
    pub denominator: u64,
}

impl SearchBound {
    pub fn integer_window(lo: i64, hi: i64, denominator: u64) -> Self {
        Self {
            window: (lo..=hi).map(Point::Int).collect(),
            denominator,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointCase {
    pub point: Point,
    pub lower: String,
    pub upper: String,
    pub candidate_count: usize,
    /// Written out when short.
    pub candidates: Vec<String>,
    pub forced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reachable {
    pub count: usize,
    pub min: Option<String>,
    pub max: Option<String>,
    pub contains_zero: bool,
    pub sums: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstantCase {
    pub constant: String,
    /// A support point outside the window whose bounds exclude `c`.
    pub excluded_by: Option<Point>,
    pub points: Vec<PointCase>,
    /// Reachable values of `Σ (v_x − c) w_x`.
    pub reachable: Option<Reachable>,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub delta: String,
    pub window: Vec<Point>,
    pub denominator: u64,
    pub constant_lower: String,
    pub constant_upper: String,
    pub constants_examined: usize,
    pub cases: Vec<ConstantCase>,
    pub chosen_constant: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub result: Option<GammaElement>,
    pub transcript: Transcript,
}

/// Values `k / d` in `[lo, hi]` that lie in Δ, ascending.
pub fn grid_values(lo: &Q, hi: &Q, d: u64, keep: impl Fn(&Q) -> bool) -> Vec<Q> {
    let dq = Q::from_integer(BigInt::from(d));
    let first = (lo * &dq).ceil().to_integer();
    let last = (hi * &dq).floor().to_integer();
    let mut out = Vec::new();
    let mut k = first;
    while k <= last {
        let v = Q::new(k.clone(), BigInt::from(d));
        if keep(&v) {
            out.push(v);
        }
        k += 1;
    }
    out
}

fn show(vals: &[Q]) -> Vec<String> {
    if vals.len() <= LIST_LIMIT {
        vals.iter().map(format_q).collect()
    } else {
        Vec::new()
    }
}

struct CaseWork {
    case: ConstantCase,
    values: Option<Vec<Q>>,
}

fn examine_constant(p: &InterpolationProblem, bound: &SearchBound, window: &[Point], c: &Q) -> CaseWork {
    let gamma = p.gamma();
    let delta = gamma.delta();
    let window_set: BTreeSet<&Point> = window.iter().collect();
    let excluded_by = p
        .support()
        .into_iter()
        .filter(|x| !window_set.contains(x))
        .find(|x| !(p.lower(x) <= *c && *c <= p.upper(x)));
    let mut case = ConstantCase {
        constant: format_q(c),
        excluded_by: excluded_by.clone(),
        points: Vec::new(),
        reachable: None,
        feasible: false,
    };
    if excluded_by.is_some() {
        return CaseWork { case, values: None };
    }
    let mut cands: Vec<Vec<Q>> = Vec::with_capacity(window.len());
    for x in window {
        let (lo, hi) = (p.lower(x), p.upper(x));
        let vals = grid_values(&lo, &hi, bound.denominator, |v| delta.contains(v));
        case.points.push(PointCase {
            point: x.clone(),
            lower: format_q(&lo),
            upper: format_q(&hi),
            candidate_count: vals.len(),
            candidates: show(&vals),
            forced: vals.len() == 1,
        });
        cands.push(vals);
    }
    // suffix[i]: reachable Σ_{j ≥ i} (v_j − c) w_j
    let weights: Vec<Q> = window.iter().map(|x| gamma.weight(x)).collect();
    let mut suffix: Vec<BTreeSet<Q>> = vec![BTreeSet::new(); window.len() + 1];
    suffix[window.len()].insert(Q::from_integer(0.into()));
    for i in (0..window.len()).rev() {
        let mut next = BTreeSet::new();
        for v in &cands[i] {
            let step = (v - c) * &weights[i];
            for s in &suffix[i + 1] {
                next.insert(&step + s);
            }
        }
        suffix[i] = next;
    }
    let zero = Q::from_integer(0.into());
    let all = &suffix[0];
    let sums: Vec<Q> = all.iter().cloned().collect();
    case.reachable = Some(Reachable {
        count: all.len(),
        min: all.first().map(format_q),
        max: all.last().map(format_q),
        contains_zero: all.contains(&zero),
        sums: show(&sums),
    });
    if !all.contains(&zero) {
        return CaseWork { case, values: None };
    }
    case.feasible = true;
    // least candidate at each point that keeps the remaining target reachable
    let mut target = zero;
    let mut values = Vec::with_capacity(window.len());
    for i in 0..window.len() {
        let v = cands[i]
            .iter()
            .find(|v| suffix[i + 1].contains(&(&target - (*v - c) * &weights[i])))
            .expect("zero reachable implies a consistent choice")
            .clone();
        target -= (&v - c) * &weights[i];
        values.push(v);
    }
    CaseWork {
        case,
        values: Some(values),
    }
}

/// Searches every constant and every table of window values on the grid;
/// the least feasible constant wins, then the least value point by point.
pub fn search_interpolant(p: &InterpolationProblem, bound: &SearchBound) -> Result<SearchOutcome, RieszError> {
    let gamma = p.gamma();
    let mut window = bound.window.clone();
    window.sort();
    window.dedup();
    if let Some(x) = window.iter().find(|x| !gamma.model().contains(x)) {
        return Err(RieszError::InvalidPoint(x.clone()));
    }
    let delta = gamma.delta();
    let (clo, chi) = (p.lower_constant(), p.upper_constant());
    let constants = grid_values(&clo, &chi, bound.denominator.max(1), |v| delta.contains(v));
    let bound = SearchBound {
        window: window.clone(),
        denominator: bound.denominator.max(1),
    };
    let work: Vec<CaseWork> = constants
        .par_iter()
        .map(|c| examine_constant(p, &bound, &window, c))
        .collect();
    let mut result = None;
    let mut chosen = None;
    for (c, w) in constants.iter().zip(&work) {
        if let Some(values) = &w.values {
            let eta = gamma.from_values(c.clone(), window.iter().cloned().zip(values.iter().cloned()))?;
            debug_assert!(p.is_interpolant(&eta)?);
            chosen = Some(format_q(c));
            result = Some(eta);
            break;
        }
    }
    Ok(SearchOutcome {
        result,
        transcript: Transcript {
            delta: delta.name(),
            window,
            denominator: bound.denominator,
            constant_lower: format_q(&clo),
            constant_upper: format_q(&chi),
            constants_examined: constants.len(),
            cases: work.into_iter().map(|w| w.case).collect(),
            chosen_constant: chosen,
        },
    })
}
