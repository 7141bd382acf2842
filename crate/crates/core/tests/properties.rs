use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use xi_core::pseudocover::{f_eval, TreeAddress};
use xi_core::rational::{frac, q, Q};
use xi_core::riesz::random::{random_feasible_problem, ElementShape};
use xi_core::riesz::{riesz_interpolate, Gamma, GammaElement};
use xi_core::topology::enumerate::{random_open_surjection, random_t0_space};
use xi_core::topology::xi::xi_map_into;
use xi_core::topology::{LabelMap, Point, XiWindow};

fn gamma() -> Gamma {
    Gamma::rationals_on_integers()
}

/// `r + Σ c (δ_x − δ_y)`, which is balanced for counting measure.
fn element() -> impl Strategy<Value = GammaElement> {
    let ratio = (-6i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d));
    let bump = (-4i64..=4, -4i64..=4, (-4i64..=4, 1i64..=3).prop_map(|(n, d)| frac(n, d)));
    (ratio, prop::collection::vec(bump, 0..4)).prop_map(|(r, bumps)| {
        let dev: Vec<(Point, Q)> = bumps
            .into_iter()
            .flat_map(|(x, y, c)| [(Point::Int(x), c.clone()), (Point::Int(y), -c)])
            .collect();
        gamma().element(r, dev).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_axioms(a in element(), b in element(), c in element()) {
        let ab_c = a.add(&b).unwrap().add(&c).unwrap();
        let a_bc = a.add(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&gamma().zero()).unwrap(), a.clone());
        prop_assert_eq!(a.add(&a.negate()).unwrap(), gamma().zero());
        prop_assert_eq!(a.times(3), a.add(&a).unwrap().add(&a).unwrap());
    }

    #[test]
    fn partial_order(a in element(), b in element(), c in element()) {
        prop_assert!(a.leq(&a).unwrap());
        if a.leq(&b).unwrap() && b.leq(&a).unwrap() {
            prop_assert_eq!(&a, &b);
        }
        if a.leq(&b).unwrap() && b.leq(&c).unwrap() {
            prop_assert!(a.leq(&c).unwrap());
        }
        if a.leq(&b).unwrap() {
            prop_assert!(a.add(&c).unwrap().leq(&b.add(&c).unwrap()).unwrap());
        }
        prop_assert_eq!(a.leq(&b).unwrap(), b.sub(&a).unwrap().is_positive());
    }

    #[test]
    fn cone_and_order_unit(a in element()) {
        if a.is_positive() && a.negate().is_positive() {
            prop_assert_eq!(&a, &gamma().zero());
        }
        let n: i64 = a.order_unit_bound().try_into().unwrap();
        prop_assert!(a.leq(&gamma().unit().times(n)).unwrap());
        prop_assert!(!a.leq(&gamma().unit().times(n - 1)).unwrap());
    }

    #[test]
    fn state(a in element(), b in element(), shift in -5i64..=5) {
        prop_assert_eq!(a.add(&b).unwrap().state_omega(), a.state_omega() + b.state_omega());
        prop_assert_eq!(gamma().unit().state_omega(), q(1));
        if a.is_positive() {
            prop_assert!(a.state_omega() >= q(0));
        }
        let moved = a.act(&LabelMap::shift(shift)).unwrap();
        prop_assert_eq!(moved.state_omega(), a.state_omega());
        prop_assert_eq!(moved.is_positive(), a.is_positive());
        prop_assert_eq!(moved.value(&Point::Int(shift)), a.value(&Point::Int(0)));
        let sum_moved = a.add(&b).unwrap().act(&LabelMap::shift(shift)).unwrap();
        prop_assert_eq!(sum_moved, moved.add(&b.act(&LabelMap::shift(shift)).unwrap()).unwrap());
    }

    #[test]
    fn interpolation_contract(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_feasible_problem(&mut rng, &gamma(), &ElementShape::default()).unwrap();
        let r = riesz_interpolate(&p).unwrap();
        prop_assert!(p.is_interpolant(&r.eta).unwrap());
        prop_assert_eq!(r.eta.constant(), &r.t);
    }

    #[test]
    fn random_spaces_are_topologies(seed in any::<u64>(), n in 0usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_t0_space(&mut rng, n);
        prop_assert!(s.verify_topology().all_pass());
        prop_assert!(s.is_point_complete().unwrap());
    }

    #[test]
    fn open_surjections_are_pseudo(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_open_surjection(&mut rng, 6);
        prop_assert!(m.is_open_map() && m.is_surjective());
        prop_assert_eq!(m.pseudo_open_witness(), None);
        prop_assert_eq!(m.pseudo_epimorphic_witness(), None);
    }

    #[test]
    fn xi_functor_laws(lo in -6i64..=6, len in 0i64..6, a in -4i64..=4, b in -4i64..=4) {
        let w = XiWindow::integer_range(lo, lo + len).unwrap();
        let wa = XiWindow::integer_range(lo + a, lo + a + len).unwrap();
        let wab = XiWindow::integer_range(lo + a + b, lo + a + b + len).unwrap();
        let id = xi_map_into(&LabelMap::Identity, &w, &w).unwrap();
        let ident: Vec<usize> = (0..=len as usize + 1).collect();
        prop_assert_eq!(id.assignment(), ident.as_slice());
        let g = xi_map_into(&LabelMap::shift(a), &w, &wa).unwrap();
        let h = xi_map_into(&LabelMap::shift(b), &wa, &wab).unwrap();
        let hg = xi_map_into(&LabelMap::shift(a).then(LabelMap::shift(b)), &w, &wab).unwrap();
        let composed = h.after(&g).unwrap();
        prop_assert_eq!(composed.assignment(), hg.assignment());
        prop_assert!(hg.is_open_map() && hg.is_surjective());
    }

    #[test]
    fn f_values_are_dyadic(n in 0usize..=2, signs in prop::collection::vec(any::<u32>(), 1..=4)) {
        let dim = 2 * n + 3;
        let mask = (1u32 << dim) - 1;
        let m = signs.len();
        let v = f_eval(n, &TreeAddress::vertex(signs.iter().map(|s| s & mask).collect())).unwrap();
        prop_assert_eq!(v.len(), dim);
        let scale = Q::from_integer(BigInt::one() << m);
        let bound = q(1) - Q::new(BigInt::one(), BigInt::one() << m);
        for x in &v {
            // odd multiples of 2^-m
            let k = x * &scale;
            prop_assert!(k.is_integer() && k.to_integer().is_odd());
            prop_assert!(x.abs() <= bound);
        }
    }
}
