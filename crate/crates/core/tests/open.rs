use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use laxdyn::open::candidate_count;
use laxdyn::testkit::{random_clock, random_open_dynamic, worked_instance, EngineKind, ALL_KINDS, CLOCK_KINDS};
use laxdyn::{
    brute_force_realizations, build_multi_dynamic, build_open_dynamic, chain_engine, check_lax_section,
    check_open_dynamorphism, clock_from_functor, discrete_engine, enumerate_realizations, sample_trajectory,
    total_state_set, verify_realization, Dynamorphism, EnumerateOptions, Error, FiniteSet, Law, OpenDynamic,
    OpenDynamorphism, Realization, Transition, TransitionFamily,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_open(seed: u64, k: usize) -> OpenDynamic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_open_dynamic(&mut rng, ALL_KINDS[k], 2, 4, 4)
}

fn all(a: &OpenDynamic) -> Vec<Realization> {
    enumerate_realizations(a, &EnumerateOptions::default()).realizations
}

/// Every partial map `st(h) ⇀ st(α)`, ignoring dating and typing.
fn every_partial_map(a: &OpenDynamic, lam: &str) -> Vec<Realization> {
    let times: Vec<String> = a.clock().total_state_set().iter().map(String::from).collect();
    let states: Vec<String> = total_state_set(a.alpha()).iter().map(String::from).collect();
    let mut out = vec![BTreeMap::new()];
    for t in &times {
        let mut next = Vec::with_capacity(out.len() * (states.len() + 1));
        for partial in &out {
            next.push(partial.clone());
            for u in &states {
                let mut extended = partial.clone();
                extended.insert(t.clone(), u.clone());
                next.push(extended);
            }
        }
        out = next;
    }
    out.into_iter().map(|sigma| Realization::new(lam, sigma)).collect()
}

/// The smallest superset of `seed` closed under `d^h(t) ∈ D ⇒ t ∈ D`.
fn past_closure(a: &OpenDynamic, seed: BTreeSet<String>) -> BTreeSet<String> {
    let clock = a.clock();
    let mut closed = seed;
    loop {
        let mut grew = false;
        for d in clock.engine().arrows() {
            for t in clock.states(&d.dom).unwrap().iter() {
                if closed.contains(clock.apply(&d.id, t).unwrap()) && closed.insert(t.to_string()) {
                    grew = true;
                }
            }
        }
        if !grew {
            return closed;
        }
    }
}

fn set(name: &str, xs: &[&str]) -> FiniteSet {
    FiniteSet::new(name, xs.iter().copied()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn enumerator_agrees_with_brute_force(seed in any::<u64>(), k in 0..ALL_KINDS.len()) {
        let a = small_open(seed, k);
        let fast: BTreeSet<Realization> = all(&a).into_iter().collect();
        let slow: BTreeSet<Realization> = brute_force_realizations(&a).unwrap().into_iter().collect();
        prop_assert_eq!(&fast, &slow);
        for r in &fast {
            prop_assert!(verify_realization(&a, r).unwrap().is_clean());
        }

        let total = enumerate_realizations(&a, &EnumerateOptions { total_only: true, ..Default::default() });
        let expected: BTreeSet<&Realization> = slow.iter().filter(|r| r.len() == a.clock().total_state_set().len()).collect();
        prop_assert_eq!(total.realizations.iter().collect::<BTreeSet<_>>(), expected);

        let maximal = enumerate_realizations(&a, &EnumerateOptions { maximal_only: true, ..Default::default() });
        let expected: BTreeSet<&Realization> = slow
            .iter()
            .filter(|r| !slow.iter().any(|s| s.len() > r.len() && r.is_restriction_of(s)))
            .collect();
        prop_assert_eq!(maximal.realizations.iter().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn limited_enumeration_is_a_sorted_subset(seed in any::<u64>(), k in 0..ALL_KINDS.len(), limit in 0..6usize) {
        let a = small_open(seed, k);
        let full = all(&a);
        let part = enumerate_realizations(&a, &EnumerateOptions { limit: Some(limit), ..Default::default() });
        prop_assert_eq!(part.truncated, full.len() > limit);
        prop_assert_eq!(part.realizations.len(), full.len().min(limit));
        prop_assert!(part.realizations.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(part.realizations.iter().all(|r| full.contains(r)));
        prop_assert_eq!(&part, &enumerate_realizations(&a, &EnumerateOptions { limit: Some(limit), ..Default::default() }));
    }

    #[test]
    fn pointwise_and_lax_section_formulations_agree(seed in any::<u64>(), k in 0..ALL_KINDS.len()) {
        let a = small_open(seed, k);
        for lam in a.alpha().params().iter() {
            for r in every_partial_map(&a, lam) {
                let pointwise = verify_realization(&a, &r).unwrap().is_clean();
                prop_assert_eq!(pointwise, check_lax_section(&a, &r), "{}", r);
            }
        }
    }

    #[test]
    fn past_closed_restrictions_stay_realizations(seed in any::<u64>(), k in 0..ALL_KINDS.len()) {
        let a = small_open(seed, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xd0);
        for r in all(&a) {
            let picked: BTreeSet<String> = r.domain().filter(|_| rng.gen_bool(0.5)).map(String::from).collect();
            let keep = past_closure(&a, picked);
            prop_assert!(keep.iter().all(|t| r.get(t).is_some()));
            let smaller = r.restrict(keep.iter().map(String::as_str));
            prop_assert!(verify_realization(&a, &smaller).unwrap().is_clean(), "{} from {}", smaller, r);
        }
    }

    #[test]
    fn empty_realizations_exist_and_total_ones_follow_the_clock(seed in any::<u64>(), k in 0..ALL_KINDS.len()) {
        let a = small_open(seed, k);
        let found = all(&a);
        for lam in a.alpha().params().iter() {
            let empty = Realization::new(lam, Vec::<(String, String)>::new());
            prop_assert!(found.contains(&empty));
        }
        let clock = a.clock();
        let total = enumerate_realizations(&a, &EnumerateOptions { total_only: true, ..Default::default() });
        for r in &total.realizations {
            for d in clock.engine().arrows() {
                for t in clock.states(&d.dom).unwrap().iter() {
                    let now = r.get(t).unwrap();
                    let later = r.get(clock.apply(&d.id, t).unwrap()).unwrap();
                    let step = a.alpha().transition(&d.id, r.lam()).unwrap();
                    prop_assert!(step.relates(now, later));
                }
            }
        }
    }

    #[test]
    fn identity_open_dynamorphism_synchronizes(seed in any::<u64>(), k in 0..ALL_KINDS.len()) {
        let a = Arc::new(small_open(seed, k));
        prop_assert!(check_open_dynamorphism(&OpenDynamorphism::identity(a)).is_clean());
    }

    #[test]
    fn trajectories_stay_dated(seed in any::<u64>(), k in 0..CLOCK_KINDS.len(), steps in 1..8usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_open_dynamic(&mut rng, CLOCK_KINDS[k], 2, 4, 4);
        let engine = a.alpha().engine().clone();
        let states = total_state_set(a.alpha());
        let start = states.element(rng.gen_range(0..states.len()));
        let mut at = a.alpha().owner(start).unwrap().to_string();
        let mut schedule = Vec::new();
        for _ in 0..steps {
            let out: Vec<_> = engine.arrows_from(&at).collect();
            let d = out[rng.gen_range(0..out.len())];
            schedule.push(d.id.clone());
            let next = d.cod.clone();
            at = next;
        }
        let lam = a.alpha().params().element(0);
        let schedule: Vec<&str> = schedule.iter().map(String::as_str).collect();
        let run = sample_trajectory(&a, lam, start, &schedule, seed).unwrap();
        prop_assert_eq!(&run, &sample_trajectory(&a, lam, start, &schedule, seed).unwrap());
        prop_assert_eq!(run.steps.len(), 1 + run.dead_end.unwrap_or(schedule.len()));
        for (time, state) in &run.steps {
            prop_assert_eq!(a.date(state), Some(time.as_str()));
        }
        for (i, pair) in run.steps.windows(2).enumerate() {
            let step = a.alpha().transition(schedule[i], lam).unwrap();
            prop_assert!(step.relates(&pair[0].1, &pair[1].1));
        }
    }
}

#[test]
fn worked_instance_realizations() {
    let a = worked_instance();
    let expected = vec![
        Realization::new("λ1", Vec::<(&str, &str)>::new()),
        Realization::new("λ1", [("t0", "a")]),
        Realization::new("λ1", [("t0", "a"), ("t1", "b")]),
    ];
    assert_eq!(all(&a), expected);
    assert_eq!(brute_force_realizations(&a).unwrap(), expected);
    assert_eq!(candidate_count(&a), 6);
    let total = enumerate_realizations(
        &a,
        &EnumerateOptions {
            total_only: true,
            ..Default::default()
        },
    );
    assert_eq!(total.realizations, expected[2..]);
    let maximal = enumerate_realizations(
        &a,
        &EnumerateOptions {
            maximal_only: true,
            ..Default::default()
        },
    );
    assert_eq!(maximal.realizations, expected[2..]);
}

#[test]
fn later_state_without_its_past_is_rejected() {
    let a = worked_instance();
    let r = Realization::new("λ1", [("t1", "b'")]);
    let report = verify_realization(&a, &r).unwrap();
    assert_eq!(report.len(), 1);
    assert!(report.contains(
        Law::PastClosure,
        &[("d", "d01"), ("t", "t0"), ("reason", "undefined_before")]
    ));
    assert!(!check_lax_section(&a, &r));

    let wrong_successor = Realization::new("λ1", [("t0", "a"), ("t1", "b'")]);
    let report = verify_realization(&a, &wrong_successor).unwrap();
    assert!(report.contains(Law::PastClosure, &[("reason", "not_a_successor"), ("next_state", "b'")]));

    assert!(verify_realization(&a, &Realization::new("μ", [("t0", "a")])).is_err());
}

/// The worked instance's dynamic and clock with datation entries overridden.
fn worked_with_rho(rho0: &[(&str, &[&str])], rho1: &[(&str, &[&str])]) -> laxdyn::Result<OpenDynamic> {
    let a = worked_instance();
    let clock = Arc::new(a.clock().as_multi().clone());
    let component = |obj: &str, entries: &[(&str, &[&str])]| {
        let t = a.rho().component(obj).unwrap();
        Transition::new(
            t.domain().clone(),
            clock.states(obj).unwrap().clone(),
            entries.iter().map(|(u, vs)| (*u, vs.iter().copied())),
        )
    };
    let rho = BTreeMap::from([
        ("0".to_string(), component("0", rho0)?),
        ("1".to_string(), component("1", rho1)?),
    ]);
    build_open_dynamic(a.alpha().clone(), clock, rho)
}

#[test]
fn datation_must_be_total_and_well_typed() {
    assert!(worked_with_rho(&[("a", &["t0"])], &[("b", &["t1"]), ("b'", &["t1"])]).is_ok());

    // t0 is not a time of object 1
    let err = worked_with_rho(&[("a", &["t0"])], &[("b", &["t0"]), ("b'", &["t1"])]).unwrap_err();
    assert!(
        matches!(err, Error::UnknownElement { ref element, ref set } if element == "t0" && set == "1"),
        "{err}"
    );

    let err = worked_with_rho(&[("a", &[])], &[("b", &["t1"]), ("b'", &["t1"])]).unwrap_err();
    let report = err.report().expect("law report");
    assert!(report.contains(Law::Determinism, &[("object", "0"), ("u", "a"), ("image_size", "0")]));
}

#[test]
fn emptied_clock_part_breaks_synchronization_everywhere() {
    let a = Arc::new(worked_instance());
    let identity = OpenDynamorphism::identity(a.clone());
    let emptied: BTreeMap<String, Transition> = identity
        .clock_part()
        .components()
        .iter()
        .map(|(o, t)| (o.clone(), Transition::empty(t.domain().clone(), t.codomain().clone())))
        .collect();
    let h = identity.clock_part().source().clone();
    let theta = identity.clock_part().theta().clone();
    let clock_part = Dynamorphism::same_engine(h.clone(), h, theta, emptied).unwrap();
    let m = OpenDynamorphism::new(a.clone(), a, identity.inner().clone(), clock_part).unwrap();
    let report = check_open_dynamorphism(&m);
    let synced: BTreeSet<&str> = report
        .of_law(Law::LaxSynchronization)
        .map(|v| v.witness("u").unwrap())
        .collect();
    assert_eq!(synced, BTreeSet::from(["a", "b", "b'"]));
}

#[test]
fn a_clock_dating_itself_has_the_identity_realization() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for kind in CLOCK_KINDS {
        let clock = random_clock(&mut rng, kind, 5);
        let h = Arc::new(clock.as_multi().clone());
        let rho = h
            .state_sets()
            .iter()
            .map(|(o, s)| (o.clone(), Transition::identity(s.clone())))
            .collect();
        let a = build_open_dynamic(h.clone(), h.clone(), rho).unwrap();
        let sigma = total_state_set(&h)
            .iter()
            .map(|t| (t.to_string(), t.to_string()))
            .collect::<Vec<_>>();
        let r = Realization::new("•", sigma);
        assert!(verify_realization(&a, &r).unwrap().is_clean(), "{kind:?}");
        let total = enumerate_realizations(
            &a,
            &EnumerateOptions {
                total_only: true,
                ..Default::default()
            },
        );
        assert_eq!(total.realizations, vec![r], "{kind:?}");
    }
}

#[test]
fn no_time_states_leaves_only_the_empty_realization() {
    let engine = Arc::new(discrete_engine(["0"]).unwrap());
    let states = BTreeMap::from([("0".to_string(), FiniteSet::empty("0"))]);
    let clock = clock_from_functor(engine.clone(), states.clone(), BTreeMap::new()).unwrap();
    let alpha = build_multi_dynamic(engine, set("L", &["λ1", "λ2"]), states.clone(), BTreeMap::new()).unwrap();
    let rho = BTreeMap::from([(
        "0".to_string(),
        Transition::empty(states["0"].clone(), states["0"].clone()),
    )]);
    let a = build_open_dynamic(Arc::new(alpha), Arc::new(clock.as_multi().clone()), rho).unwrap();
    let expected = vec![
        Realization::new("λ1", Vec::<(&str, &str)>::new()),
        Realization::new("λ2", Vec::<(&str, &str)>::new()),
    ];
    assert_eq!(brute_force_realizations(&a).unwrap(), expected);
    assert_eq!(all(&a), expected);
}

/// One object, one time `t`, and `k` states all dated `t`.
fn single_fiber(k: usize, engine: laxdyn::EngineCategory) -> OpenDynamic {
    let engine = Arc::new(engine);
    let obj = engine.objects().element(0).to_string();
    let times = BTreeMap::from([(obj.clone(), set(&obj, &["t"]))]);
    let fixed = BTreeMap::from([("t".to_string(), "t".to_string())]);
    let maps = engine.arrows().map(|a| (a.id.clone(), fixed.clone())).collect();
    let clock = clock_from_functor(engine.clone(), times.clone(), maps).unwrap();
    let names: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
    let states = BTreeMap::from([(obj.clone(), FiniteSet::new(&obj, names.iter()).unwrap())]);
    let params = set("L", &["λ"]);
    let still = TransitionFamily::constant(params.clone(), Transition::identity(states[&obj].clone())).unwrap();
    let transitions = engine.arrows().map(|a| (a.id.clone(), still.clone())).collect();
    let alpha = build_multi_dynamic(engine, params, states.clone(), transitions).unwrap();
    let rho = Transition::from_function(
        states[&obj].clone(),
        times[&obj].clone(),
        names.iter().map(|u| (u.as_str(), "t")),
    )
    .unwrap();
    build_open_dynamic(
        Arc::new(alpha),
        Arc::new(clock.as_multi().clone()),
        BTreeMap::from([(obj, rho)]),
    )
    .unwrap()
}

#[test]
fn discrete_fiber_gives_one_realization_per_choice() {
    for k in 0..5 {
        let a = single_fiber(k, discrete_engine(["0"]).unwrap());
        assert_eq!(candidate_count(&a), (k + 1) as u128);
        assert_eq!(brute_force_realizations(&a).unwrap().len(), k + 1);
        assert_eq!(all(&a).len(), k + 1);
    }
}

#[test]
fn sub_identity_loops_can_leave_states_out() {
    // on the idempotent monoid, p^α may drop states that p^h keeps fixed
    let a = single_fiber(3, laxdyn::testkit::engine_of(EngineKind::Idempotent));
    assert_eq!(all(&a).len(), 4);
    let alpha = a.alpha();
    let params = alpha.params().clone();
    let s = alpha.states("*").unwrap().clone();
    let p = Transition::new(
        s.clone(),
        s.clone(),
        [("x0", vec!["x0"]), ("x1", vec![]), ("x2", vec!["x2"])],
    )
    .unwrap();
    let transitions = BTreeMap::from([("p".to_string(), TransitionFamily::constant(params.clone(), p).unwrap())]);
    let narrowed =
        build_multi_dynamic(alpha.engine().clone(), params, alpha.state_sets().clone(), transitions).unwrap();
    let b = build_open_dynamic(
        Arc::new(narrowed),
        Arc::new(a.clock().as_multi().clone()),
        a.rho().components().clone(),
    )
    .unwrap();
    let got: Vec<String> = all(&b).iter().map(ToString::to_string).collect();
    assert_eq!(got, ["λ: {}", "λ: {t↦x0}", "λ: {t↦x2}"]);
    assert_eq!(brute_force_realizations(&b).unwrap(), all(&b));
}

#[test]
fn misdated_section_fails_both_formulations() {
    let engine = Arc::new(discrete_engine(["0"]).unwrap());
    let times = BTreeMap::from([("0".to_string(), set("0", &["t", "t'"]))]);
    let clock = clock_from_functor(engine.clone(), times.clone(), BTreeMap::new()).unwrap();
    let states = BTreeMap::from([("0".to_string(), set("0", &["x", "y"]))]);
    let alpha = build_multi_dynamic(engine, set("L", &["λ"]), states.clone(), BTreeMap::new()).unwrap();
    let rho = Transition::from_function(states["0"].clone(), times["0"].clone(), [("x", "t"), ("y", "t'")]).unwrap();
    let a = build_open_dynamic(
        Arc::new(alpha),
        Arc::new(clock.as_multi().clone()),
        BTreeMap::from([("0".to_string(), rho)]),
    )
    .unwrap();

    let misdated = Realization::new("λ", [("t", "y")]);
    let report = verify_realization(&a, &misdated).unwrap();
    assert!(report.contains(Law::Section, &[("t", "t"), ("state", "y"), ("rho", "t'")]));
    assert!(!check_lax_section(&a, &misdated));

    let empty = Realization::new("λ", Vec::<(&str, &str)>::new());
    assert!(verify_realization(&a, &empty).unwrap().is_clean());
    assert!(check_lax_section(&a, &empty));
}

#[test]
fn worked_trajectories() {
    let a = worked_instance();
    let run = sample_trajectory(&a, "λ1", "a", &["d01"], 0).unwrap();
    assert_eq!(
        run.steps,
        [("t0".to_string(), "a".to_string()), ("t1".to_string(), "b".to_string())]
    );
    assert_eq!(run.dead_end, None);

    let stuck = sample_trajectory(&a, "λ1", "b", &["id_1"], 0).unwrap();
    assert_eq!(stuck.dead_end, None);
    assert!(sample_trajectory(&a, "λ1", "a", &["d01", "d01"], 0).is_err());
    assert!(sample_trajectory(&a, "λ1", "zz", &[], 0).is_err());
    assert!(sample_trajectory(&a, "μ", "a", &[], 0).is_err());
}

#[test]
fn empty_successor_set_is_a_dead_end() {
    let engine = Arc::new(chain_engine(2).unwrap());
    let states = BTreeMap::from([("0".to_string(), set("0", &["a"])), ("1".to_string(), set("1", &["b"]))]);
    let params = set("L", &["λ"]);
    let d = Transition::empty(states["0"].clone(), states["1"].clone());
    let transitions = BTreeMap::from([(
        "d01".to_string(),
        TransitionFamily::constant(params.clone(), d).unwrap(),
    )]);
    let alpha = build_multi_dynamic(engine.clone(), params, states.clone(), transitions).unwrap();
    let times = BTreeMap::from([
        ("0".to_string(), set("0", &["t0"])),
        ("1".to_string(), set("1", &["t1"])),
    ]);
    let tick = BTreeMap::from([("t0".to_string(), "t1".to_string())]);
    let clock = clock_from_functor(engine, times.clone(), BTreeMap::from([("d01".to_string(), tick)])).unwrap();
    let rho = BTreeMap::from([
        (
            "0".to_string(),
            Transition::from_function(states["0"].clone(), times["0"].clone(), [("a", "t0")]).unwrap(),
        ),
        (
            "1".to_string(),
            Transition::from_function(states["1"].clone(), times["1"].clone(), [("b", "t1")]).unwrap(),
        ),
    ]);
    let a = build_open_dynamic(Arc::new(alpha), Arc::new(clock.as_multi().clone()), rho).unwrap();
    let run = sample_trajectory(&a, "λ", "a", &["d01"], 9).unwrap();
    assert_eq!(run.dead_end, Some(0));
    assert_eq!(run.steps, [("t0".to_string(), "a".to_string())]);
}
