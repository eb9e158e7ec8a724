//! Fixtures and seeded random generators of valid structures, shared by
//! tests, benchmarks and the acceptance suite.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cat::{
    chain_arrow_name, chain_engine, cyclic_engine, discrete_engine, free_engine_on_dag, monoid_engine, Arrow, DagEdge,
    EngineCategory, EngineFunctor,
};
use crate::dynamic::{build_multi_dynamic, clock_from_functor, qualify, Clock, DynamicData, MultiDynamic};
use crate::morph::Dynamorphism;
use crate::open::{build_open_dynamic, OpenDynamic};
use crate::rel::{compose, FiniteSet, Transition, TransitionFamily};

/// The two-object example: `0^α = {a}`, `1^α = {b, b'}`, `d(a) = {b}`,
/// clock `t0 -> t1`, dated `a ↦ t0`, `b, b' ↦ t1`. One parameter, `λ1`.
pub fn worked_instance() -> OpenDynamic {
    let engine = Arc::new(chain_engine(2).expect("chain"));
    let set = |name: &str, xs: &[&str]| FiniteSet::new(name, xs.iter().copied()).expect("distinct");
    let params = set("L", &["λ1"]);
    let states = BTreeMap::from([
        ("0".to_string(), set("0", &["a"])),
        ("1".to_string(), set("1", &["b", "b'"])),
    ]);
    let d = Transition::new(states["0"].clone(), states["1"].clone(), [("a", ["b"])]).expect("shape");
    let transitions = BTreeMap::from([(
        "d01".to_string(),
        TransitionFamily::constant(params.clone(), d).expect("params"),
    )]);
    let alpha = build_multi_dynamic(engine.clone(), params, states.clone(), transitions).expect("valid");

    let times = BTreeMap::from([
        ("0".to_string(), set("0", &["t0"])),
        ("1".to_string(), set("1", &["t1"])),
    ]);
    let tick = BTreeMap::from([("t0".to_string(), "t1".to_string())]);
    let clock = clock_from_functor(engine, times.clone(), BTreeMap::from([("d01".to_string(), tick)])).expect("clock");
    let rho = BTreeMap::from([
        (
            "0".to_string(),
            Transition::from_function(states["0"].clone(), times["0"].clone(), [("a", "t0")]).expect("shape"),
        ),
        (
            "1".to_string(),
            Transition::from_function(states["1"].clone(), times["1"].clone(), [("b", "t1"), ("b'", "t1")])
                .expect("shape"),
        ),
    ]);
    build_open_dynamic(Arc::new(alpha), Arc::new(clock.as_multi().clone()), rho).expect("valid")
}

/// Engines the generators draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Chain(usize),
    Diamond,
    Cyclic(usize),
    Idempotent,
    Discrete(usize),
}

pub const ALL_KINDS: [EngineKind; 9] = [
    EngineKind::Chain(1),
    EngineKind::Chain(2),
    EngineKind::Chain(3),
    EngineKind::Diamond,
    EngineKind::Cyclic(2),
    EngineKind::Cyclic(3),
    EngineKind::Idempotent,
    EngineKind::Discrete(1),
    EngineKind::Discrete(2),
];

pub const CLOCK_KINDS: [EngineKind; 7] = [
    EngineKind::Chain(2),
    EngineKind::Chain(3),
    EngineKind::Chain(4),
    EngineKind::Diamond,
    EngineKind::Cyclic(2),
    EngineKind::Cyclic(3),
    EngineKind::Idempotent,
];

/// `0 -> 1 -> 3` and `0 -> 2 -> 3` with the two long paths kept distinct.
pub fn diamond_engine() -> EngineCategory {
    free_engine_on_dag(
        ["0", "1", "2", "3"],
        &[
            DagEdge::new("f", "0", "1"),
            DagEdge::new("g", "0", "2"),
            DagEdge::new("h", "1", "3"),
            DagEdge::new("k", "2", "3"),
        ],
    )
    .expect("acyclic")
}

/// The monoid `{e, p}` with `p·p = p`.
pub fn idempotent_engine() -> EngineCategory {
    let table = [("e", "e", "e"), ("e", "p", "p"), ("p", "e", "p"), ("p", "p", "p")]
        .into_iter()
        .map(|(x, y, z)| ((x.to_string(), y.to_string()), z.to_string()))
        .collect();
    monoid_engine(["e", "p"], table, "e").expect("monoid")
}

pub fn engine_of(kind: EngineKind) -> EngineCategory {
    match kind {
        EngineKind::Chain(n) => chain_engine(n).expect("chain"),
        EngineKind::Diamond => diamond_engine(),
        EngineKind::Cyclic(n) => cyclic_engine(n).expect("cyclic"),
        EngineKind::Idempotent => idempotent_engine(),
        EngineKind::Discrete(n) => discrete_engine((0..n).map(|i| i.to_string())).expect("discrete"),
    }
}

/// Object-tagged state sets, at least one state per object and at most `total` overall
/// (`total` is raised to the number of objects if smaller).
pub fn random_states<R: Rng>(
    rng: &mut R,
    engine: &EngineCategory,
    prefix: &str,
    total: usize,
) -> BTreeMap<String, FiniteSet> {
    let objects: Vec<&str> = engine.objects().iter().collect();
    let mut counts = vec![1usize; objects.len()];
    let extra = rng.gen_range(0..=total.saturating_sub(objects.len()));
    for _ in 0..extra {
        counts[rng.gen_range(0..objects.len())] += 1;
    }
    objects
        .iter()
        .zip(counts)
        .map(|(obj, n)| {
            let names = (0..n).map(|i| qualify(obj, &format!("{prefix}{i}")));
            (obj.to_string(), FiniteSet::new(*obj, names).expect("distinct"))
        })
        .collect()
}

/// Each pair is related independently with probability `density`.
pub fn random_transition<R: Rng>(rng: &mut R, domain: &FiniteSet, codomain: &FiniteSet, density: f64) -> Transition {
    let entries: Vec<(&str, Vec<&str>)> = domain
        .iter()
        .map(|u| (u, codomain.iter().filter(|_| rng.gen_bool(density)).collect()))
        .collect();
    Transition::new(domain.clone(), codomain.clone(), entries).expect("shape")
}

/// A valid dynamic: random transitions restricted to pairs accepted by `keep`
/// (called as `keep(arrow, λ, u, v)`), sub-identities on identity arrows, then
/// each composite intersected with the composites of its factors until stable.
pub fn random_dynamic_with<R, F>(
    rng: &mut R,
    engine: Arc<EngineCategory>,
    params: &FiniteSet,
    states: BTreeMap<String, FiniteSet>,
    density: f64,
    keep: F,
) -> MultiDynamic
where
    R: Rng,
    F: Fn(&Arrow, &str, &str, &str) -> bool,
{
    let mut table: BTreeMap<(String, String), Transition> = BTreeMap::new();
    for arrow in engine.arrows() {
        let (dom, cod) = (&states[&arrow.dom], &states[&arrow.cod]);
        for lam in params.iter() {
            let raw = if engine.is_identity(&arrow.id) {
                let t = Transition::identity(dom.clone());
                let drop: Vec<&str> = dom.iter().filter(|_| rng.gen_bool(0.15)).collect();
                drop.iter().fold(t, |t, u| t.without_pair(u, u).expect("known"))
            } else {
                random_transition(rng, dom, cod, density)
            };
            let pairs: Vec<(&str, &str)> = raw.pairs().filter(|(u, v)| !keep(arrow, lam, u, v)).collect();
            let kept = pairs
                .iter()
                .fold(raw.clone(), |t, (u, v)| t.without_pair(u, v).expect("known"));
            table.insert((arrow.id.clone(), lam.to_string()), kept);
        }
    }
    loop {
        let mut changed = false;
        for (e, d, ed) in engine.composable_pairs() {
            for lam in params.iter() {
                let key = |a: &str| (a.to_string(), lam.to_string());
                let factored = compose(&table[&key(e)], &table[&key(d)]).expect("shapes");
                let current = &table[&key(ed)];
                let narrowed = current.intersect(&factored).expect("shapes");
                if &narrowed != current {
                    table.insert(key(ed), narrowed);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut transitions = BTreeMap::new();
    for arrow in engine.arrows() {
        let comps = params
            .iter()
            .map(|lam| (lam, table[&(arrow.id.clone(), lam.to_string())].clone()));
        let family = TransitionFamily::new(
            params.clone(),
            states[&arrow.dom].clone(),
            states[&arrow.cod].clone(),
            comps,
        )
        .expect("shape");
        transitions.insert(arrow.id.clone(), family);
    }
    build_multi_dynamic(engine, params.clone(), states, transitions).expect("generator produces valid dynamics")
}

pub fn random_params<R: Rng>(rng: &mut R, max: usize) -> FiniteSet {
    let n = rng.gen_range(1..=max.max(1));
    FiniteSet::new("L", (1..=n).map(|i| format!("λ{i}"))).expect("distinct")
}

/// An unconstrained valid dynamic on `engine`.
pub fn random_dynamic<R: Rng>(
    rng: &mut R,
    engine: Arc<EngineCategory>,
    max_params: usize,
    max_states: usize,
) -> MultiDynamic {
    let params = random_params(rng, max_params);
    let states = random_states(rng, &engine, "s", max_states);
    let density = rng.gen_range(0.2..0.8);
    random_dynamic_with(rng, engine, &params, states, density, |_, _, _, _| true)
}

fn random_function<R: Rng>(rng: &mut R, dom: &FiniteSet, cod: &FiniteSet) -> BTreeMap<String, String> {
    dom.iter()
        .map(|u| (u.to_string(), cod.element(rng.gen_range(0..cod.len())).to_string()))
        .collect()
}

fn follow(maps: &[&BTreeMap<String, String>], start: &BTreeMap<String, String>) -> BTreeMap<String, String> {
    start
        .iter()
        .map(|(u, v)| (u.clone(), maps.iter().fold(v.clone(), |x, m| m[&x].clone())))
        .collect()
}

/// A functor-built clock: random functions on generating arrows, extended to all arrows.
pub fn random_clock<R: Rng>(rng: &mut R, kind: EngineKind, max_states: usize) -> Clock {
    let engine = Arc::new(engine_of(kind));
    let states = random_states(rng, &engine, "t", max_states);
    let mut maps: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    match kind {
        EngineKind::Chain(n) => {
            let steps: Vec<BTreeMap<String, String>> = (0..n.saturating_sub(1))
                .map(|i| random_function(rng, &states[&i.to_string()], &states[&(i + 1).to_string()]))
                .collect();
            for i in 0..n {
                for j in i + 1..n {
                    let path: Vec<&BTreeMap<String, String>> = steps[i + 1..j].iter().collect();
                    maps.insert(chain_arrow_name(n, i, j), follow(&path, &steps[i]));
                }
            }
        }
        EngineKind::Diamond => {
            let edges: BTreeMap<&str, BTreeMap<String, String>> =
                [("f", "0", "1"), ("g", "0", "2"), ("h", "1", "3"), ("k", "2", "3")]
                    .into_iter()
                    .map(|(e, s, t)| (e, random_function(rng, &states[s], &states[t])))
                    .collect();
            for arrow in engine.arrows().filter(|a| !engine.is_identity(&a.id)) {
                let parts: Vec<&str> = arrow.id.split(';').collect();
                let rest: Vec<&BTreeMap<String, String>> = parts[1..].iter().map(|p| &edges[p]).collect();
                maps.insert(arrow.id.clone(), follow(&rest, &edges[parts[0]]));
            }
        }
        EngineKind::Cyclic(n) => {
            let set = &states[crate::cat::MONOID_OBJECT];
            let generator = random_permutation_of_order_dividing(rng, set, n);
            let mut power: BTreeMap<String, String> = set.iter().map(|u| (u.to_string(), u.to_string())).collect();
            for k in 1..n {
                power = follow(&[&generator], &power);
                maps.insert(format!("g{k}"), power.clone());
            }
        }
        EngineKind::Idempotent => {
            let set = &states[crate::cat::MONOID_OBJECT];
            let mut elems: Vec<&str> = set.iter().collect();
            elems.shuffle(rng);
            let fixed = rng.gen_range(1..=elems.len());
            let map = elems
                .iter()
                .enumerate()
                .map(|(i, u)| {
                    let v = if i < fixed { u } else { elems[rng.gen_range(0..fixed)] };
                    (u.to_string(), v.to_string())
                })
                .collect();
            maps.insert("p".to_string(), map);
        }
        EngineKind::Discrete(_) => {}
    }
    clock_from_functor(engine, states, maps).expect("functor-built clocks are valid")
}

fn random_permutation_of_order_dividing<R: Rng>(rng: &mut R, set: &FiniteSet, n: usize) -> BTreeMap<String, String> {
    let mut elems: Vec<&str> = set.iter().collect();
    elems.shuffle(rng);
    let lengths: Vec<usize> = (1..=n).filter(|k| n.is_multiple_of(*k)).collect();
    let mut map = BTreeMap::new();
    let mut at = 0;
    while at < elems.len() {
        let fits: Vec<usize> = lengths.iter().copied().filter(|k| at + k <= elems.len()).collect();
        let len = *fits.choose(rng).expect("1 always fits");
        for i in 0..len {
            map.insert(elems[at + i].to_string(), elems[at + (i + 1) % len].to_string());
        }
        at += len;
    }
    map
}

/// A valid open dynamic on an engine of `kind`; `ρ` is a random function and
/// the dynamic keeps only transitions compatible with it.
pub fn random_open_dynamic<R: Rng>(
    rng: &mut R,
    kind: EngineKind,
    max_params: usize,
    max_times: usize,
    max_states: usize,
) -> OpenDynamic {
    let clock = random_clock(rng, kind, max_times);
    let engine = clock.engine().clone();
    let params = random_params(rng, max_params);
    let states = random_states(rng, &engine, "x", max_states);
    let mut rho_maps = BTreeMap::new();
    let mut rho = BTreeMap::new();
    for (obj, set) in &states {
        let f = random_function(rng, set, clock.states(obj).expect("same engine"));
        rho.insert(
            obj.clone(),
            Transition::from_function(set.clone(), clock.states(obj).unwrap().clone(), &f).expect("shape"),
        );
        rho_maps.extend(f);
    }
    let density = rng.gen_range(0.3..0.9);
    let alpha = random_dynamic_with(rng, engine, &params, states, density, |arrow, _, u, v| {
        clock.apply(&arrow.id, &rho_maps[u]).ok() == Some(rho_maps[v].as_str())
    });
    build_open_dynamic(Arc::new(alpha), Arc::new(clock.as_multi().clone()), rho)
        .expect("generator produces valid open dynamics")
}

/// A random valid dynamic `α` on `functor.source()` with a dynamorphism
/// `α -> target` over `functor`.
pub fn random_dynamorphism_into<R: Rng>(
    rng: &mut R,
    target: Arc<MultiDynamic>,
    functor: EngineFunctor,
    max_params: usize,
    max_states: usize,
) -> Dynamorphism {
    let engine = functor.source().clone();
    let params = random_params(rng, max_params);
    let theta: BTreeMap<String, String> = params
        .iter()
        .map(|l| {
            (
                l.to_string(),
                target
                    .params()
                    .element(rng.gen_range(0..target.params().len()))
                    .to_string(),
            )
        })
        .collect();
    let states = random_states(rng, &engine, "y", max_states);
    let components: BTreeMap<String, Transition> = states
        .iter()
        .map(|(obj, set)| {
            let image = target
                .states(functor.map_object(obj).expect("total"))
                .expect("target object");
            let density = rng.gen_range(0.2..0.7);
            (obj.clone(), random_transition(rng, set, image, density))
        })
        .collect();
    let density = rng.gen_range(0.3..0.9);
    let alpha = random_dynamic_with(rng, engine, &params, states, density, |arrow, lam, u, v| {
        let later = components[&arrow.cod].image_of(v).expect("known");
        let step = target
            .transition(functor.map_arrow(&arrow.id).expect("total"), &theta[lam])
            .expect("target arrow");
        let reachable: BTreeSet<String> = components[&arrow.dom]
            .image_of(u)
            .expect("known")
            .iter()
            .flat_map(|w| step.image_of(w).expect("known"))
            .collect();
        later.is_subset(&reachable)
    });
    Dynamorphism::new(Arc::new(alpha), target, theta, functor, components).expect("shapes")
}

/// A monotone map between chains, as an engine functor `chain(m) -> chain(n)`.
pub fn random_chain_functor<R: Rng>(rng: &mut R, m: usize, target: Arc<EngineCategory>, n: usize) -> EngineFunctor {
    let source = Arc::new(chain_engine(m).expect("chain"));
    let mut points: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
    points.sort_unstable();
    let object_map = (0..m).map(|i| (i.to_string(), points[i].to_string())).collect();
    let mut arrow_map = BTreeMap::new();
    for i in 0..m {
        for j in i..m {
            arrow_map.insert(chain_arrow_name(m, i, j), chain_arrow_name(n, points[i], points[j]));
        }
    }
    EngineFunctor::new(source, target, object_map, arrow_map).expect("monotone maps are functors")
}

/// Composable `(f, g, h)` with `f: α -> β`, `g: β -> γ`, `h: γ -> ε`, built
/// backwards from a random `ε`. Engines are chains linked by monotone maps, or
/// one shared engine of any kind.
pub fn random_dynamorphism_triple<R: Rng>(rng: &mut R) -> [Dynamorphism; 3] {
    let same_engine = rng.gen_bool(0.4);
    if same_engine {
        let kind = *ALL_KINDS.choose(rng).expect("nonempty");
        let engine = Arc::new(engine_of(kind));
        let last = Arc::new(random_dynamic(rng, engine.clone(), 2, 4));
        let h = random_dynamorphism_into(rng, last, EngineFunctor::identity(engine.clone()), 2, 4);
        let g = random_dynamorphism_into(rng, h.source().clone(), EngineFunctor::identity(engine.clone()), 2, 4);
        let f = random_dynamorphism_into(rng, g.source().clone(), EngineFunctor::identity(engine), 2, 4);
        [f, g, h]
    } else {
        let n = rng.gen_range(1..=3);
        let engine = Arc::new(chain_engine(n).expect("chain"));
        let last = Arc::new(random_dynamic(rng, engine.clone(), 2, 4));
        let mut target = last;
        let mut size = n;
        let mut built = Vec::new();
        for _ in 0..3 {
            let m = rng.gen_range(1..=3);
            let functor = random_chain_functor(rng, m, target.engine().clone(), size);
            let morph = random_dynamorphism_into(rng, target, functor, 2, 4);
            target = morph.source().clone();
            size = m;
            built.push(morph);
        }
        let f = built.pop().expect("three");
        let g = built.pop().expect("three");
        let h = built.pop().expect("three");
        [f, g, h]
    }
}

/// Renames `old` to `new` in the states of `object` and in every transition touching it.
pub fn rename_state(data: &DynamicData, object: &str, old: &str, new: &str) -> DynamicData {
    let rename = |x: &str| if x == old { new.to_string() } else { x.to_string() };
    let mut states = data.states.clone();
    let set = &data.states[object];
    states.insert(
        object.to_string(),
        FiniteSet::new(set.name(), set.iter().map(rename)).expect("fresh name"),
    );
    let mut transitions = BTreeMap::new();
    for arrow in data.engine.arrows() {
        let family = &data.transitions[&arrow.id];
        let (dom, cod) = (&states[&arrow.dom], &states[&arrow.cod]);
        let comps = family.iter().map(|(lam, t)| {
            let entries: Vec<(String, Vec<String>)> = t
                .domain()
                .iter()
                .map(|u| {
                    let img =
                        t.image(u)
                            .expect("known")
                            .map(|v| if arrow.cod == object { rename(v) } else { v.to_string() });
                    (
                        if arrow.dom == object { rename(u) } else { u.to_string() },
                        img.collect(),
                    )
                })
                .collect();
            (
                lam,
                Transition::new(dom.clone(), cod.clone(), entries).expect("renamed shape"),
            )
        });
        transitions.insert(
            arrow.id.clone(),
            TransitionFamily::new(data.params.clone(), dom.clone(), cod.clone(), comps).expect("shape"),
        );
    }
    DynamicData {
        engine: data.engine.clone(),
        params: data.params.clone(),
        states,
        transitions,
    }
}
