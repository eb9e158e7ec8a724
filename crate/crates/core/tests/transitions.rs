use std::collections::BTreeSet;

use laxdyn::{
    compose, compose_family, identity_transition, is_deterministic, is_quasi_deterministic, leq_constraint, leq_family,
    subseteq, FiniteSet, Transition, TransitionFamily,
};
use proptest::prelude::*;

fn set(prefix: &str, n: usize) -> FiniteSet {
    FiniteSet::new(prefix, (0..n).map(|i| format!("{prefix}{i}"))).unwrap()
}

fn from_bits(dom: &FiniteSet, cod: &FiniteSet, bits: &[bool]) -> Transition {
    let m = cod.len();
    let entries: Vec<(&str, Vec<&str>)> = dom
        .iter()
        .enumerate()
        .map(|(i, u)| {
            (
                u,
                cod.iter()
                    .enumerate()
                    .filter(|(j, _)| bits[i * m + j])
                    .map(|(_, v)| v)
                    .collect(),
            )
        })
        .collect();
    Transition::new(dom.clone(), cod.clone(), entries).unwrap()
}

/// Three composable transitions `u -φ-> v -ψ-> w -χ-> x` over sets of size at most 5.
fn chain3() -> impl Strategy<Value = (Transition, Transition, Transition)> {
    (0..=5usize, 0..=5usize, 0..=5usize, 0..=5usize).prop_flat_map(|(a, b, c, d)| {
        (
            prop::collection::vec(any::<bool>(), a * b),
            prop::collection::vec(any::<bool>(), b * c),
            prop::collection::vec(any::<bool>(), c * d),
        )
            .prop_map(move |(p, q, r)| {
                let (u, v, w, x) = (set("u", a), set("v", b), set("w", c), set("x", d));
                (from_bits(&u, &v, &p), from_bits(&v, &w, &q), from_bits(&w, &x, &r))
            })
    })
}

/// Three transitions of one shape.
fn same_shape3() -> impl Strategy<Value = (Transition, Transition, Transition)> {
    (0..=5usize, 0..=5usize).prop_flat_map(|(a, b)| {
        let bits = || prop::collection::vec(any::<bool>(), a * b);
        (bits(), bits(), bits()).prop_map(move |(p, q, r)| {
            let (u, v) = (set("u", a), set("v", b));
            (from_bits(&u, &v, &p), from_bits(&u, &v, &q), from_bits(&u, &v, &r))
        })
    })
}

/// Two chains `u -> v -> w` of identical shape.
fn paired_chains() -> impl Strategy<Value = ((Transition, Transition), (Transition, Transition))> {
    (0..=5usize, 0..=5usize, 0..=5usize).prop_flat_map(|(a, b, c)| {
        let bits = |n| prop::collection::vec(any::<bool>(), n);
        (bits(a * b), bits(b * c), bits(a * b), bits(b * c)).prop_map(move |(p1, q1, p2, q2)| {
            let (u, v, w) = (set("u", a), set("v", b), set("w", c));
            (
                (from_bits(&u, &v, &p1), from_bits(&v, &w, &q1)),
                (from_bits(&u, &v, &p2), from_bits(&v, &w, &q2)),
            )
        })
    })
}

/// A partial function as a transition; `None` leaves the image empty.
fn map_between(dom: &FiniteSet, cod: &FiniteSet, choice: &[Option<usize>]) -> Transition {
    let entries: Vec<(&str, Vec<&str>)> = dom
        .iter()
        .zip(choice)
        .map(|(u, c)| (u, c.map(|j| cod.element(j % cod.len())).into_iter().collect()))
        .collect();
    Transition::new(dom.clone(), cod.clone(), entries).unwrap()
}

fn union(a: &Transition, b: &Transition) -> Transition {
    a.union(b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_the_union_of_images((phi, psi, _) in chain3()) {
        let composite = compose(&psi, &phi).unwrap();
        for u in phi.domain().iter() {
            let expected: BTreeSet<String> = phi
                .image(u)
                .unwrap()
                .flat_map(|v| psi.image(v).unwrap().map(str::to_string).collect::<Vec<_>>())
                .collect();
            prop_assert_eq!(composite.image_of(u).unwrap(), expected);
        }
    }

    #[test]
    fn composition_is_associative((phi, psi, chi) in chain3()) {
        let left = compose(&chi, &compose(&psi, &phi).unwrap()).unwrap();
        let right = compose(&compose(&chi, &psi).unwrap(), &phi).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identities_are_neutral((phi, _, _) in chain3()) {
        prop_assert_eq!(&compose(&identity_transition(phi.codomain()), &phi).unwrap(), &phi);
        prop_assert_eq!(&compose(&phi, &identity_transition(phi.domain())).unwrap(), &phi);
    }

    #[test]
    fn composition_is_monotone(((phi, psi), (extra_phi, extra_psi)) in paired_chains()) {
        let (wide_phi, wide_psi) = (union(&phi, &extra_phi), union(&psi, &extra_psi));
        prop_assert!(subseteq(&phi, &wide_phi).unwrap());
        prop_assert!(subseteq(
            &compose(&psi, &phi).unwrap(),
            &compose(&wide_psi, &wide_phi).unwrap()
        ).unwrap());
    }

    #[test]
    fn determinism_is_closed_under_composition(
        (a, b, c) in (0..=5usize, 1..=5usize, 1..=5usize),
        f in prop::collection::vec(prop::option::weighted(0.7, 0..5usize), 5),
        g in prop::collection::vec(prop::option::weighted(0.7, 0..5usize), 5),
    ) {
        let (u, v, w) = (set("u", a), set("v", b), set("w", c));
        let total = |xs: &[Option<usize>]| xs.iter().map(|x| Some(x.unwrap_or(0))).collect::<Vec<_>>();
        let (tf, tg) = (map_between(&u, &v, &total(&f)), map_between(&v, &w, &total(&g)));
        prop_assert!(is_deterministic(&tf) && is_deterministic(&tg));
        prop_assert!(is_deterministic(&compose(&tg, &tf).unwrap()));
        let (pf, pg) = (map_between(&u, &v, &f), map_between(&v, &w, &g));
        prop_assert!(is_quasi_deterministic(&pf) && is_quasi_deterministic(&pg));
        prop_assert!(is_quasi_deterministic(&compose(&pg, &pf).unwrap()));
    }

    #[test]
    fn constraint_order_is_a_partial_order((p, q, r) in same_shape3()) {
        prop_assert!(leq_constraint(&p, &p).unwrap());
        if leq_constraint(&p, &q).unwrap() && leq_constraint(&q, &p).unwrap() {
            prop_assert_eq!(&p, &q);
        }
        // a guaranteed chain: p ∪ q ∪ r <= p ∪ q <= p
        let pq = union(&p, &q);
        let pqr = union(&pq, &r);
        prop_assert!(leq_constraint(&pqr, &pq).unwrap() && leq_constraint(&pq, &p).unwrap());
        prop_assert!(leq_constraint(&pqr, &p).unwrap());
        if leq_constraint(&p, &q).unwrap() && leq_constraint(&q, &r).unwrap() {
            prop_assert!(leq_constraint(&p, &r).unwrap());
        }
        prop_assert_eq!(leq_constraint(&p, &q).unwrap(), subseteq(&q, &p).unwrap());
    }

    #[test]
    fn families_compose_and_compare_componentwise(((p1, q1), (p2, q2)) in paired_chains()) {
        let params = FiniteSet::new("L", ["λ1", "λ2"]).unwrap();
        let fam = |a: &Transition, b: &Transition| {
            TransitionFamily::new(params.clone(), a.domain().clone(), a.codomain().clone(), [("λ1", a.clone()), ("λ2", b.clone())]).unwrap()
        };
        let (phi, psi) = (fam(&p1, &p2), fam(&q1, &q2));
        let composite = compose_family(&psi, &phi).unwrap();
        prop_assert_eq!(composite.component("λ1").unwrap(), &compose(&q1, &p1).unwrap());
        prop_assert_eq!(composite.component("λ2").unwrap(), &compose(&q2, &p2).unwrap());
        let ids = TransitionFamily::constant(params.clone(), identity_transition(p1.codomain())).unwrap();
        prop_assert_eq!(&compose_family(&ids, &phi).unwrap(), &phi);
        prop_assert_eq!(
            leq_family(&phi, &fam(&p2, &p1)).unwrap(),
            leq_constraint(&p1, &p2).unwrap() && leq_constraint(&p2, &p1).unwrap()
        );
    }
}

fn named(name: &str, xs: &[&str]) -> FiniteSet {
    FiniteSet::new(name, xs.iter().copied()).unwrap()
}

#[test]
fn union_formula_on_a_small_example() {
    let (u, v, w) = (
        named("U", &["u1", "u2"]),
        named("V", &["v1", "v2"]),
        named("W", &["w1", "w2"]),
    );
    let phi = Transition::new(u.clone(), v.clone(), [("u1", vec!["v1", "v2"]), ("u2", vec![])]).unwrap();
    let psi = Transition::new(v.clone(), w.clone(), [("v1", vec!["w1"]), ("v2", vec!["w1", "w2"])]).unwrap();
    let expected = Transition::new(u.clone(), w.clone(), [("u1", vec!["w1", "w2"]), ("u2", vec![])]).unwrap();
    assert_eq!(compose(&psi, &phi).unwrap(), expected);
    assert_eq!(
        compose(&psi, &Transition::empty(u.clone(), v.clone())).unwrap(),
        Transition::empty(u, w)
    );
    assert!(compose(&phi, &psi).is_err());
}

#[test]
fn identity_and_determinism_classes() {
    let ab = named("S", &["a", "b"]);
    let id = identity_transition(&ab);
    assert_eq!(id.image_of("a").unwrap(), BTreeSet::from(["a".to_string()]));
    assert!(is_deterministic(&id) && is_quasi_deterministic(&id));
    let empty_set = FiniteSet::empty("E");
    assert!(identity_transition(&empty_set).domain().is_empty());

    let (u, v) = (named("U", &["u1", "u2"]), named("V", &["v1", "v2"]));
    let wide = Transition::new(u.clone(), v.clone(), [("u1", vec!["v1", "v2"]), ("u2", vec!["v1"])]).unwrap();
    assert!(!is_deterministic(&wide) && !is_quasi_deterministic(&wide));
    let partial = Transition::new(u.clone(), v.clone(), [("u1", vec![]), ("u2", vec!["v1"])]).unwrap();
    assert!(!is_deterministic(&partial) && is_quasi_deterministic(&partial));
}

#[test]
fn order_extremes_and_mismatches() {
    let (u, v) = (named("U", &["u"]), named("V", &["v1", "v2"]));
    let both = Transition::new(u.clone(), v.clone(), [("u", ["v1", "v2"])]).unwrap();
    let one = Transition::new(u.clone(), v.clone(), [("u", ["v1"])]).unwrap();
    assert!(leq_constraint(&both, &one).unwrap());
    assert!(!leq_constraint(&one, &both).unwrap());
    assert!(subseteq(&one, &both).unwrap() && !subseteq(&both, &one).unwrap());
    let total = Transition::total(u.clone(), v.clone());
    let empty = Transition::empty(u.clone(), v.clone());
    for t in [&both, &one, &total, &empty] {
        assert!(leq_constraint(&total, t).unwrap());
        assert!(leq_constraint(t, &empty).unwrap());
        assert!(subseteq(&empty, t).unwrap());
    }
    let other = Transition::empty(v.clone(), u.clone());
    assert!(leq_constraint(&one, &other).is_err());
    assert!(subseteq(&one, &other).is_err());
}

#[test]
fn family_with_one_failing_component() {
    let (u, v) = (named("U", &["u"]), named("V", &["v1", "v2"]));
    let params = named("L", &["λ1", "λ2"]);
    let wide = Transition::total(u.clone(), v.clone());
    let narrow = Transition::empty(u.clone(), v.clone());
    let fam = |a: &Transition, b: &Transition| {
        TransitionFamily::new(
            params.clone(),
            u.clone(),
            v.clone(),
            [("λ1", a.clone()), ("λ2", b.clone())],
        )
        .unwrap()
    };
    assert!(leq_family(&fam(&wide, &wide), &fam(&wide, &wide)).unwrap());
    assert!(!leq_family(&fam(&wide, &narrow), &fam(&narrow, &wide)).unwrap());
    let single = named("L", &["λ"]);
    let f1 = TransitionFamily::constant(single.clone(), wide.clone()).unwrap();
    let f2 = TransitionFamily::constant(single, narrow.clone()).unwrap();
    assert_eq!(leq_family(&f1, &f2).unwrap(), leq_constraint(&wide, &narrow).unwrap());
    let other_params = TransitionFamily::constant(named("M", &["μ"]), wide).unwrap();
    assert!(leq_family(&f1, &other_params).is_err());
}
