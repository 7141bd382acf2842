use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::{ceil_int, CoefficientGroup, Location, RieszError};
use crate::rational::{format_q, parse_q, Q};
use crate::topology::action::LabelMap;
use crate::topology::xi::DiscreteSpaceModel;
use crate::topology::Point;

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaModel {
    pub delta: CoefficientGroup,
    pub model: DiscreteSpaceModel,
}

/// Shared handle on the data (Δ, P, μ, L_n) that every element refers to.
#[derive(Debug, Clone)]
pub struct Gamma(Arc<GammaModel>);

impl PartialEq for Gamma {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Gamma {}

/// Wire form of an element: `{"constant": "p/q", "dev": {"x": "p/q", …}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementData {
    pub constant: String,
    #[serde(default)]
    pub dev: BTreeMap<String, String>,
}

/// `η = r + Σ d_x δ_x` with `Σ d_x w_x = 0` and every `d_x ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaElement {
    gamma: Gamma,
    constant: Q,
    dev: BTreeMap<Point, Q>,
}

impl Gamma {
    pub fn new(delta: CoefficientGroup, model: DiscreteSpaceModel) -> Result<Self, RieszError> {
        model.validate()?;
        Ok(Gamma(Arc::new(GammaModel { delta, model })))
    }

    /// Δ = ℚ over ℤ with counting measure and `L_n = [-n, n]`.
    pub fn rationals_on_integers() -> Self {
        Gamma(Arc::new(GammaModel {
            delta: CoefficientGroup::Rationals,
            model: DiscreteSpaceModel::integers(),
        }))
    }

    pub fn on_integers(delta: CoefficientGroup) -> Self {
        Gamma(Arc::new(GammaModel {
            delta,
            model: DiscreteSpaceModel::integers(),
        }))
    }

    pub fn delta(&self) -> CoefficientGroup {
        self.0.delta
    }

    pub fn model(&self) -> &DiscreteSpaceModel {
        &self.0.model
    }

    pub fn weight(&self, p: &Point) -> Q {
        self.0.model.weight(p)
    }

    fn check_delta(&self, value: &Q, at: Location) -> Result<(), RieszError> {
        if self.0.delta.contains(value) {
            Ok(())
        } else {
            Err(RieszError::CoefficientNotInDelta {
                value: value.clone(),
                at,
                delta: self.0.delta.name(),
            })
        }
    }

    /// Builds `r + Σ d_x δ_x`; repeated points are summed and zero
    /// deviations dropped.
    pub fn element(
        &self,
        constant: Q,
        deviations: impl IntoIterator<Item = (Point, Q)>,
    ) -> Result<GammaElement, RieszError> {
        self.check_delta(&constant, Location::AtInfinity)?;
        let mut dev: BTreeMap<Point, Q> = BTreeMap::new();
        for (p, d) in deviations {
            if !self.0.model.contains(&p) {
                return Err(RieszError::InvalidPoint(p));
            }
            *dev.entry(p).or_insert_with(Q::zero) += d;
        }
        dev.retain(|_, d| !d.is_zero());
        for (p, d) in &dev {
            self.check_delta(&(&constant + d), Location::Point(p.clone()))?;
        }
        let sum: Q = dev.iter().map(|(p, d)| d * self.weight(p)).sum();
        if !sum.is_zero() {
            return Err(RieszError::BalanceViolation { sum });
        }
        Ok(GammaElement {
            gamma: self.clone(),
            constant,
            dev,
        })
    }

    /// The element with the given constant tail and the given values at
    /// finitely many points.
    pub fn from_values(
        &self,
        constant: Q,
        values: impl IntoIterator<Item = (Point, Q)>,
    ) -> Result<GammaElement, RieszError> {
        let devs: Vec<(Point, Q)> = values.into_iter().map(|(p, v)| (p, v - &constant)).collect();
        self.element(constant, devs)
    }

    pub fn constant(&self, r: Q) -> Result<GammaElement, RieszError> {
        self.element(r, [])
    }

    pub fn unit(&self) -> GammaElement {
        self.constant(Q::one()).expect("1 lies in every coefficient group")
    }

    pub fn zero(&self) -> GammaElement {
        self.constant(Q::zero()).expect("0 lies in every coefficient group")
    }

    pub fn from_data(&self, data: &ElementData) -> Result<GammaElement, RieszError> {
        let bad = |s: &str| RieszError::Parse(s.to_string());
        let constant = parse_q(&data.constant).map_err(|_| bad(&data.constant))?;
        let mut devs = Vec::new();
        for (k, v) in &data.dev {
            let p: Point = k.parse().map_err(|_| bad(k))?;
            devs.push((p, parse_q(v).map_err(|_| bad(v))?));
        }
        self.element(constant, devs)
    }
}

impl GammaElement {
    pub fn gamma(&self) -> &Gamma {
        &self.gamma
    }

    pub fn constant(&self) -> &Q {
        &self.constant
    }

    pub fn deviations(&self) -> &BTreeMap<Point, Q> {
        &self.dev
    }

    pub fn support(&self) -> BTreeSet<Point> {
        self.dev.keys().cloned().collect()
    }

    pub fn value(&self, p: &Point) -> Q {
        self.dev.get(p).map_or_else(|| self.constant.clone(), |d| &self.constant + d)
    }

    /// The state ω: the constant value off a finite set.
    pub fn state_omega(&self) -> Q {
        self.constant.clone()
    }

    fn same_model(&self, other: &Self) -> Result<(), RieszError> {
        if self.gamma == other.gamma {
            Ok(())
        } else {
            Err(RieszError::MixedModels)
        }
    }

    fn raw(&self, constant: Q, mut dev: BTreeMap<Point, Q>) -> GammaElement {
        dev.retain(|_, d| !d.is_zero());
        GammaElement {
            gamma: self.gamma.clone(),
            constant,
            dev,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, RieszError> {
        self.same_model(other)?;
        let mut dev = self.dev.clone();
        for (p, d) in &other.dev {
            *dev.entry(p.clone()).or_insert_with(Q::zero) += d;
        }
        Ok(self.raw(&self.constant + &other.constant, dev))
    }

    pub fn negate(&self) -> Self {
        self.raw(-&self.constant, self.dev.iter().map(|(p, d)| (p.clone(), -d)).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RieszError> {
        self.add(&other.negate())
    }

    /// `n · self`.
    pub fn times(&self, n: i64) -> Self {
        let k = Q::from_integer(BigInt::from(n));
        self.raw(&self.constant * &k, self.dev.iter().map(|(p, d)| (p.clone(), d * &k)).collect())
    }

    pub fn is_positive(&self) -> bool {
        !self.constant.is_negative() && self.dev.values().all(|d| !(&self.constant + d).is_negative())
    }

    pub fn leq(&self, other: &Self) -> Result<bool, RieszError> {
        Ok(other.sub(self)?.is_positive())
    }

    /// First place where `self ≤ other` fails, scanning the joint support in
    /// order and then the constant tail.
    pub fn leq_witness(&self, other: &Self) -> Result<Option<Location>, RieszError> {
        self.same_model(other)?;
        let support: BTreeSet<&Point> = self.dev.keys().chain(other.dev.keys()).collect();
        if let Some(p) = support.into_iter().find(|p| self.value(p) > other.value(p)) {
            return Ok(Some(Location::Point(p.clone())));
        }
        Ok((self.constant > other.constant).then_some(Location::AtInfinity))
    }

    pub fn max_value(&self) -> Q {
        self.dev
            .values()
            .map(|d| &self.constant + d)
            .fold(self.constant.clone(), |a, b| a.max(b))
    }

    pub fn min_value(&self) -> Q {
        self.dev
            .values()
            .map(|d| &self.constant + d)
            .fold(self.constant.clone(), |a, b| a.min(b))
    }

    /// Least integer `n` with `self ≤ n · 1`.
    pub fn order_unit_bound(&self) -> BigInt {
        ceil_int(&self.max_value())
    }

    /// `β_h(η)(x) = η(h⁻¹x)`: the deviation at `x` moves to `h(x)`.
    pub fn act(&self, h: &LabelMap) -> Result<Self, RieszError> {
        let mut dev = BTreeMap::new();
        for (p, d) in &self.dev {
            let image = h.apply(p)?;
            if !self.gamma.model().contains(&image) {
                return Err(RieszError::InvalidPoint(image));
            }
            if self.gamma.weight(&image) != self.gamma.weight(p) {
                return Err(RieszError::NotMeasurePreserving {
                    point: p.clone(),
                    image,
                });
            }
            dev.insert(image, d.clone());
        }
        if dev.len() != self.dev.len() {
            return Err(RieszError::Action(crate::topology::action::ActionError::BadPermutation));
        }
        Ok(self.raw(self.constant.clone(), dev))
    }

    pub fn to_data(&self) -> ElementData {
        ElementData {
            constant: format_q(&self.constant),
            dev: self.dev.iter().map(|(p, d)| (p.to_string(), format_q(d))).collect(),
        }
    }
}

impl Serialize for GammaElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_data().serialize(s)
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_q(&self.constant))?;
        for (p, d) in &self.dev {
            let sign = if d.is_negative() { '-' } else { '+' };
            let a = d.abs();
            if a.is_one() {
                write!(f, " {sign} δ{p}")?;
            } else {
                write!(f, " {sign} {}·δ{p}", format_q(&a))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn p(x: i64) -> Point {
        Point::Int(x)
    }

    fn gap_rho2(g: &Gamma) -> GammaElement {
        g.element(q(1), [(p(0), q(-1)), (p(1), q(1))]).unwrap()
    }

    #[test]
    fn make_element_examples() {
        let g = Gamma::rationals_on_integers();
        let one = g.element(q(1), []).unwrap();
        assert_eq!(one, g.unit());
        let a = gap_rho2(&g);
        assert_eq!(a.value(&p(0)), q(0));
        assert_eq!(a.value(&p(1)), q(2));
        assert_eq!(a.value(&p(7)), q(1));
        assert_eq!(
            g.element(q(0), [(p(0), q(1))]),
            Err(RieszError::BalanceViolation { sum: q(1) })
        );
        assert_eq!(a.to_string(), "1 - δ0 + δ1");
    }

    #[test]
    fn delta_membership_is_enforced() {
        let g = Gamma::on_integers(CoefficientGroup::Integers);
        assert!(matches!(
            g.element(frac(1, 2), []),
            Err(RieszError::CoefficientNotInDelta { at: Location::AtInfinity, .. })
        ));
        assert!(matches!(
            g.element(q(0), [(p(0), frac(1, 2)), (p(1), frac(-1, 2))]),
            Err(RieszError::CoefficientNotInDelta { .. })
        ));
    }

    #[test]
    fn group_operations() {
        let g = Gamma::rationals_on_integers();
        let a = gap_rho2(&g);
        let b = g.element(q(0), [(p(0), q(1)), (p(1), q(-1))]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s, g.unit());
        assert!(s.deviations().is_empty());
        assert!(!g.constant(q(-1)).unwrap().is_positive());
        assert!(!b.is_positive());
        assert!(g.zero().leq(&a).unwrap());
        assert_eq!(a.state_omega(), q(1));
        assert_eq!(a.order_unit_bound(), BigInt::from(2));
        assert_eq!(a.negate().order_unit_bound(), BigInt::from(0));
        assert_eq!(a.times(3).value(&p(1)), q(6));
    }

    #[test]
    fn mixed_models_rejected() {
        let g1 = Gamma::rationals_on_integers();
        let g2 = Gamma::on_integers(CoefficientGroup::Dyadic);
        assert_eq!(g1.unit().add(&g2.unit()), Err(RieszError::MixedModels));
        // structurally equal contexts are the same model
        assert!(g1.unit().add(&Gamma::rationals_on_integers().unit()).is_ok());
    }

    #[test]
    fn translation_relocates_deviation() {
        let g = Gamma::rationals_on_integers();
        let a = gap_rho2(&g);
        let moved = a.act(&LabelMap::shift(1)).unwrap();
        assert_eq!(moved, g.element(q(1), [(p(1), q(-1)), (p(2), q(1))]).unwrap());
        assert_eq!(a.act(&LabelMap::Identity).unwrap(), a);
    }

    #[test]
    fn weighted_model_checks_measure_preservation() {
        use crate::topology::xi::{Exhaustion, LabelScheme, WeightOverride, Weights};
        let model = DiscreteSpaceModel::new(
            LabelScheme::Integers,
            Weights::Table {
                default: q(1),
                overrides: vec![WeightOverride { point: p(0), weight: q(2) }],
            },
            Exhaustion::Symmetric,
        )
        .unwrap();
        let g = Gamma::new(CoefficientGroup::Rationals, model).unwrap();
        // 2·d_0 + d_1 = 0
        let a = g.element(q(0), [(p(0), q(1)), (p(1), q(-2))]).unwrap();
        assert_eq!(
            a.act(&LabelMap::shift(1)),
            Err(RieszError::NotMeasurePreserving { point: p(0), image: p(1) })
        );
    }

    #[test]
    fn json_round_trip() {
        let g = Gamma::rationals_on_integers();
        let a = g.element(frac(4, 3), [(p(-1), frac(-1, 3)), (p(0), frac(-1, 3)), (p(1), frac(2, 3))]).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"constant":"4/3","dev":{"-1":"-1/3","0":"-1/3","1":"2/3"}}"#);
        let back: ElementData = serde_json::from_str(&text).unwrap();
        assert_eq!(g.from_data(&back).unwrap(), a);
    }
}
