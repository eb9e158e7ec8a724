//! Multi-dynamics: disjunctive lax functors from an engine into L-families of
//! transitions. Closed dynamics are the one-parameter case and clocks are the
//! deterministic closed dynamics.

use std::collections::BTreeMap;
use std::ops::Deref;
use std::sync::Arc;

use crate::cat::EngineCategory;
use crate::error::{Error, Result};
use crate::rel::{compose, FiniteSet, Transition, TransitionFamily};
use crate::report::{Law, Report, Violation};

/// The single parameter of a closed dynamic.
pub const CLOSED_PARAM: &str = "•";

pub fn closed_params() -> FiniteSet {
    FiniteSet::new("L", [CLOSED_PARAM]).expect("singleton")
}

/// Prefixes a state with its object, `"S::x"`, for authors who want
/// disjunctivity by construction.
pub fn qualify(object: &str, state: &str) -> String {
    format!("{object}::{state}")
}

pub fn qualify_states<I, S>(object: &str, states: I) -> Result<FiniteSet>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    FiniteSet::new(object, states.into_iter().map(|s| qualify(object, s.as_ref())))
}

/// The unvalidated parts of a multi-dynamic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicData {
    pub engine: Arc<EngineCategory>,
    pub params: FiniteSet,
    pub states: BTreeMap<String, FiniteSet>,
    pub transitions: BTreeMap<String, TransitionFamily>,
}

impl DynamicData {
    /// Shape problems if any, otherwise every law violation.
    pub fn check(&self) -> Report {
        let shape = self.check_shape();
        if shape.is_clean() {
            self.check_laws()
        } else {
            shape
        }
    }

    fn check_shape(&self) -> Report {
        let mut report = Report::new();
        for obj in self.engine.objects().iter() {
            if !self.states.contains_key(obj) {
                report.push(Violation::new(Law::DynamicShape, format!("states.{obj}")).with("object", obj));
            }
        }
        for obj in self.states.keys() {
            if !self.engine.objects().contains(obj) {
                report.push(Violation::new(Law::DynamicShape, format!("states.{obj}")).with("object", obj.as_str()));
            }
        }
        for arrow in self.engine.arrows() {
            let loc = format!("transitions.{}", arrow.id);
            let Some(family) = self.transitions.get(&arrow.id) else {
                report.push(Violation::new(Law::DynamicShape, loc).with("arrow", &arrow.id));
                continue;
            };
            let expected = (self.states.get(&arrow.dom), self.states.get(&arrow.cod));
            let shaped = family.params() == &self.params
                && expected.0.is_some_and(|s| s == family.domain())
                && expected.1.is_some_and(|s| s == family.codomain());
            if !shaped {
                report.push(Violation::new(Law::DynamicShape, loc).with("arrow", &arrow.id));
            }
        }
        for arrow in self.transitions.keys() {
            if !self.engine.has_arrow(arrow) {
                report.push(
                    Violation::new(Law::DynamicShape, format!("transitions.{arrow}")).with("arrow", arrow.as_str()),
                );
            }
        }
        report.canonicalize()
    }

    fn check_laws(&self) -> Report {
        let mut report = Report::new();
        let objects: Vec<&str> = self.engine.objects().iter().collect();
        for (i, s) in objects.iter().enumerate() {
            for t in &objects[i + 1..] {
                for x in self.states[*s].iter().filter(|x| self.states[*t].contains(x)) {
                    report.push(
                        Violation::new(Law::Disjunctivity, format!("states.{s}"))
                            .with("S", *s)
                            .with("T", *t)
                            .with("state", x),
                    );
                }
            }
        }
        for (e, d, ed) in self.engine.composable_pairs() {
            let (fe, fd, fed) = (&self.transitions[e], &self.transitions[d], &self.transitions[ed]);
            for (k, lam) in self.params.iter().enumerate() {
                let factored = compose(fe.component_at(k), fd.component_at(k)).expect("shapes checked");
                let composite = fed.component_at(k);
                for (u, v) in composite.excess(&factored).expect("shapes checked") {
                    report.push(
                        Violation::new(Law::LaxComposition, format!("transitions.{ed}.{lam}"))
                            .with("e", e)
                            .with("d", d)
                            .with("lambda", lam)
                            .with("u", composite.domain().element(u))
                            .with("v", composite.codomain().element(v)),
                    );
                }
            }
        }
        for (obj, id) in self.engine.identities() {
            let identity = Transition::identity(self.states[obj].clone());
            for (lam, t) in self.transitions[id].iter() {
                for (u, v) in t.excess(&identity).expect("shapes checked") {
                    report.push(
                        Violation::new(Law::LaxIdentity, format!("transitions.{id}.{lam}"))
                            .with("object", obj.as_str())
                            .with("lambda", lam)
                            .with("u", t.domain().element(u))
                            .with("v", t.codomain().element(v)),
                    );
                }
            }
        }
        report.canonicalize()
    }
}

/// A validated L-multi-dynamic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDynamic {
    data: DynamicData,
    owner: BTreeMap<String, String>,
}

/// Validates a multi-dynamic. Identity arrows missing from `transitions`
/// default to full identity transitions.
pub fn build_multi_dynamic(
    engine: Arc<EngineCategory>,
    params: FiniteSet,
    states: BTreeMap<String, FiniteSet>,
    mut transitions: BTreeMap<String, TransitionFamily>,
) -> Result<MultiDynamic> {
    if params.is_empty() {
        return Err(Error::EmptyParams);
    }
    let params = params.renamed("L");
    for (obj, id) in engine.identities() {
        if !transitions.contains_key(id) {
            if let Some(s) = states.get(obj) {
                let t = Transition::identity(s.clone());
                transitions.insert(id.clone(), TransitionFamily::constant(params.clone(), t)?);
            }
        }
    }
    MultiDynamic::new(DynamicData {
        engine,
        params,
        states,
        transitions,
    })
}

/// A closed dynamic from one transition per arrow (identities may be omitted).
pub fn build_closed_dynamic(
    engine: Arc<EngineCategory>,
    states: BTreeMap<String, FiniteSet>,
    transitions: BTreeMap<String, Transition>,
) -> Result<ClosedDynamic> {
    let params = closed_params();
    let families = transitions
        .into_iter()
        .map(|(a, t)| Ok((a, TransitionFamily::constant(params.clone(), t)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    build_multi_dynamic(engine, params, states, families).map(ClosedDynamic)
}

impl MultiDynamic {
    pub fn new(data: DynamicData) -> Result<Self> {
        if data.params.is_empty() {
            return Err(Error::EmptyParams);
        }
        let report = data.check();
        if !report.is_clean() {
            return Err(Error::invalid("dynamic", report));
        }
        let owner = data
            .states
            .iter()
            .flat_map(|(obj, set)| set.iter().map(move |x| (x.to_string(), obj.clone())))
            .collect();
        Ok(MultiDynamic { data, owner })
    }

    pub fn data(&self) -> &DynamicData {
        &self.data
    }

    pub fn into_data(self) -> DynamicData {
        self.data
    }

    pub fn engine(&self) -> &Arc<EngineCategory> {
        &self.data.engine
    }

    pub fn params(&self) -> &FiniteSet {
        &self.data.params
    }

    pub fn states(&self, object: &str) -> Result<&FiniteSet> {
        self.data
            .states
            .get(object)
            .ok_or_else(|| Error::UnknownObject(object.to_string()))
    }

    pub fn state_sets(&self) -> &BTreeMap<String, FiniteSet> {
        &self.data.states
    }

    pub fn family(&self, arrow: &str) -> Result<&TransitionFamily> {
        self.data
            .transitions
            .get(arrow)
            .ok_or_else(|| Error::UnknownArrow(arrow.to_string()))
    }

    /// `d^α_λ`.
    pub fn transition(&self, arrow: &str, lam: &str) -> Result<&Transition> {
        self.family(arrow)?.component(lam)
    }

    /// Re-runs every law; empty iff valid.
    pub fn check_laws(&self) -> Report {
        self.data.check()
    }

    pub fn component_at(&self, lam: &str) -> Result<ClosedDynamic> {
        let k = self
            .data
            .params
            .index_of(lam)
            .ok_or_else(|| Error::UnknownParameter(lam.to_string()))?;
        let params = closed_params();
        let transitions = self
            .data
            .transitions
            .iter()
            .map(|(a, f)| {
                Ok((
                    a.clone(),
                    TransitionFamily::constant(params.clone(), f.component_at(k).clone())?,
                ))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(ClosedDynamic(MultiDynamic {
            data: DynamicData {
                engine: self.data.engine.clone(),
                params,
                states: self.data.states.clone(),
                transitions,
            },
            owner: self.owner.clone(),
        }))
    }

    pub fn is_deterministic(&self) -> bool {
        self.data
            .transitions
            .values()
            .all(|f| f.iter().all(|(_, t)| t.is_deterministic()))
    }

    pub fn is_quasi_deterministic(&self) -> bool {
        self.data
            .transitions
            .values()
            .all(|f| f.iter().all(|(_, t)| t.is_quasi_deterministic()))
    }

    /// `st(α)`: the disjoint union of all state sets.
    pub fn total_state_set(&self) -> FiniteSet {
        FiniteSet::new("st", self.owner.keys().cloned()).expect("disjoint")
    }

    /// The object whose state set contains `state`.
    pub fn owner(&self, state: &str) -> Option<&str> {
        self.owner.get(state).map(String::as_str)
    }

    pub fn is_closed(&self) -> bool {
        self.data.params.len() == 1
    }
}

pub fn check_laws(alpha: &MultiDynamic) -> Report {
    alpha.check_laws()
}

pub fn component_at(alpha: &MultiDynamic, lam: &str) -> Result<ClosedDynamic> {
    alpha.component_at(lam)
}

pub fn is_deterministic_dynamic(alpha: &MultiDynamic) -> bool {
    alpha.is_deterministic()
}

pub fn is_quasi_deterministic_dynamic(alpha: &MultiDynamic) -> bool {
    alpha.is_quasi_deterministic()
}

pub fn total_state_set(alpha: &MultiDynamic) -> FiniteSet {
    alpha.total_state_set()
}

/// A multi-dynamic whose parameter set is `{•}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedDynamic(MultiDynamic);

impl ClosedDynamic {
    /// Accepts any one-parameter dynamic, renaming its parameter to `•`.
    pub fn new(alpha: MultiDynamic) -> Result<Self> {
        if alpha.params().len() != 1 {
            return Err(Error::Shape(format!(
                "a closed dynamic has one parameter, found {}",
                alpha.params()
            )));
        }
        let lam = alpha.params().element(0).to_string();
        alpha.component_at(&lam)
    }

    /// `d^α`.
    pub fn transition(&self, arrow: &str) -> Result<&Transition> {
        self.0.transition(arrow, CLOSED_PARAM)
    }

    pub fn as_multi(&self) -> &MultiDynamic {
        &self.0
    }

    pub fn into_multi(self) -> MultiDynamic {
        self.0
    }
}

impl Deref for ClosedDynamic {
    type Target = MultiDynamic;

    fn deref(&self) -> &MultiDynamic {
        &self.0
    }
}

/// A deterministic closed dynamic, i.e. a functor from the engine to finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clock(ClosedDynamic);

impl Clock {
    pub fn new(closed: ClosedDynamic) -> Result<Self> {
        let mut report = Report::new();
        for (arrow, family) in &closed.data.transitions {
            let t = family.component_at(0);
            for (i, u) in t.domain().iter().enumerate() {
                let n = t.image_at(i).count();
                if n != 1 {
                    report.push(
                        Violation::new(Law::Determinism, format!("transitions.{arrow}"))
                            .with("arrow", arrow.as_str())
                            .with("t", u)
                            .with("image_size", n.to_string()),
                    );
                }
            }
        }
        report.into_result("clock", Clock(closed))
    }

    /// `d^h(t)`.
    pub fn apply(&self, arrow: &str, t: &str) -> Result<&str> {
        let tr = self.transition(arrow)?;
        let i = tr
            .domain()
            .index_of(t)
            .ok_or_else(|| Error::UnknownState(t.to_string()))?;
        Ok(tr.codomain().element(tr.image_at(i).next().expect("deterministic")))
    }

    pub fn as_closed(&self) -> &ClosedDynamic {
        &self.0
    }
}

impl Deref for Clock {
    type Target = ClosedDynamic;

    fn deref(&self) -> &ClosedDynamic {
        &self.0
    }
}

/// Builds a clock from a strict functor to finite sets.
///
/// `state_maps[d]` is the function `states(dom d) -> states(cod d)`; maps for
/// identity arrows may be omitted.
pub fn clock_from_functor(
    engine: Arc<EngineCategory>,
    states: BTreeMap<String, FiniteSet>,
    state_maps: BTreeMap<String, BTreeMap<String, String>>,
) -> Result<Clock> {
    let mut transitions = BTreeMap::new();
    for arrow in engine.arrows() {
        let dom = states
            .get(&arrow.dom)
            .ok_or_else(|| Error::UnknownObject(arrow.dom.clone()))?;
        let cod = states
            .get(&arrow.cod)
            .ok_or_else(|| Error::UnknownObject(arrow.cod.clone()))?;
        let t = match state_maps.get(&arrow.id) {
            Some(map) => Transition::from_function(dom.clone(), cod.clone(), map)?,
            None if engine.is_identity(&arrow.id) => Transition::identity(dom.clone()),
            None => return Err(Error::PartialMap(format!("arrow '{}' has no state map", arrow.id))),
        };
        transitions.insert(arrow.id.clone(), t);
    }
    if let Some(extra) = state_maps.keys().find(|a| !engine.has_arrow(a)) {
        return Err(Error::UnknownArrow(extra.clone()));
    }

    let mut report = Report::new();
    for (obj, id) in engine.identities() {
        let identity = Transition::identity(states[obj].clone());
        for (t, image) in transitions[id].pairs() {
            if !identity.relates(t, image) {
                report.push(
                    Violation::new(Law::ClockFunctoriality, format!("maps.{id}"))
                        .with("object", obj.as_str())
                        .with("t", t)
                        .with("image", image),
                );
            }
        }
    }
    for (e, d, ed) in engine.composable_pairs() {
        let factored = compose(&transitions[e], &transitions[d])?;
        let direct = &transitions[ed];
        if &factored != direct {
            for t in direct.domain().iter() {
                if factored.image_of(t) != direct.image_of(t) {
                    report.push(
                        Violation::new(Law::ClockFunctoriality, format!("maps.{ed}"))
                            .with("e", e)
                            .with("d", d)
                            .with("t", t),
                    );
                }
            }
        }
    }
    if !report.is_clean() {
        return Err(Error::invalid("clock", report.canonicalize()));
    }
    Clock::new(build_closed_dynamic(engine, states, transitions)?)
}
