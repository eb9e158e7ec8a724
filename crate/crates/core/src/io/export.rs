//! Domain values back to documents. Engines are always written explicitly.

use std::collections::BTreeMap;

use super::schema::{
    Adjacency, ArrowSpec, Component, DynamicSpec, DynamorphismSpec, EngineSpec, FunctorMaps, OpenDynamicSpec,
    RealizationSpec, TransitionEntry, TransitionSpec,
};
use super::strict::{StrictMap, StrictSet};
use super::{Body, Document, Import};
use crate::cat::EngineCategory;
use crate::dynamic::{MultiDynamic, CLOSED_PARAM};
use crate::morph::Dynamorphism;
use crate::open::{OpenDynamic, OpenDynamorphism, Realization};
use crate::rel::{FiniteSet, Transition};

fn strict_set(s: &FiniteSet) -> StrictSet {
    s.iter().collect()
}

fn adjacency(t: &Transition) -> Adjacency {
    t.domain()
        .iter()
        .map(|u| (u, t.image(u).expect("domain element").collect::<StrictSet>()))
        .collect()
}

fn component_map(components: &BTreeMap<String, Transition>) -> StrictMap<Adjacency> {
    components.iter().map(|(o, t)| (o.as_str(), adjacency(t))).collect()
}

pub fn engine_spec(engine: &EngineCategory) -> EngineSpec {
    let mut compose: BTreeMap<String, StrictMap<String>> = BTreeMap::new();
    for (e, d, ed) in engine.composable_pairs() {
        compose
            .entry(e.to_string())
            .or_default()
            .0
            .insert(d.to_string(), ed.to_string());
    }
    EngineSpec::Explicit {
        objects: strict_set(engine.objects()),
        arrows: engine
            .arrows()
            .map(|a| {
                (
                    a.id.as_str(),
                    ArrowSpec {
                        dom: a.dom.clone(),
                        cod: a.cod.clone(),
                    },
                )
            })
            .collect(),
        identities: engine
            .identities()
            .iter()
            .map(|(o, i)| (o.as_str(), i.clone()))
            .collect(),
        compose: StrictMap(compose),
    }
}

fn component(t: &Transition) -> Component {
    if t.domain() == t.codomain() && *t == Transition::identity(t.domain().clone()) {
        Component::Identity
    } else {
        Component::Adjacency(adjacency(t))
    }
}

pub fn dynamic_spec(alpha: &MultiDynamic) -> DynamicSpec {
    let closed = alpha.params().elements() == [CLOSED_PARAM];
    let mut transitions = BTreeMap::new();
    for arrow in alpha.engine().arrows() {
        let family = alpha.family(&arrow.id).expect("validated");
        let comps: Vec<(&str, &Transition)> = family.iter().collect();
        let entry = if comps.iter().all(|(_, t)| *t == comps[0].1) {
            match component(comps[0].1) {
                Component::Identity => TransitionEntry::Identity,
                Component::Adjacency(adj) => TransitionEntry::Single(adj),
            }
        } else {
            TransitionEntry::Family(comps.iter().map(|(l, t)| (*l, component(t))).collect())
        };
        transitions.insert(arrow.id.clone(), entry);
    }
    DynamicSpec {
        engine: engine_spec(alpha.engine()),
        params: (!closed).then(|| strict_set(alpha.params())),
        states: alpha
            .state_sets()
            .iter()
            .map(|(o, s)| (o.as_str(), strict_set(s)))
            .collect(),
        transitions: Some(StrictMap(transitions)),
        maps: None,
    }
}

pub fn dynamic_document(alpha: &MultiDynamic) -> Document {
    Document::new(Body::Dynamic(dynamic_spec(alpha)))
}

pub fn transition_document(t: &Transition) -> Document {
    Document::new(Body::Transition(TransitionSpec {
        domain: strict_set(t.domain()),
        codomain: strict_set(t.codomain()),
        image: adjacency(t),
    }))
}

fn functor_maps(m: &Dynamorphism) -> Option<FunctorMaps> {
    let f = m.functor();
    (!f.is_identity()).then(|| FunctorMaps {
        objects: f.object_map().iter().map(|(a, b)| (a.as_str(), b.clone())).collect(),
        arrows: f.arrow_map().iter().map(|(a, b)| (a.as_str(), b.clone())).collect(),
    })
}

/// Source and target are embedded as the inline imports `source` and `target`.
pub fn dynamorphism_document(m: &Dynamorphism) -> Document {
    Document::new(Body::Dynamorphism(DynamorphismSpec {
        source: Some("source".into()),
        target: Some("target".into()),
        theta: Some(m.theta().iter().map(|(a, b)| (a.as_str(), b.clone())).collect()),
        functor: functor_maps(m),
        components: component_map(m.components()),
        clock_components: None,
    }))
    .with_import("source", Import::Inline(Box::new(dynamic_document(m.source()))))
    .with_import("target", Import::Inline(Box::new(dynamic_document(m.target()))))
}

pub fn open_dynamic_document(a: &OpenDynamic) -> Document {
    Document::new(Body::OpenDynamic(OpenDynamicSpec {
        dynamic: "dynamic".into(),
        clock: "clock".into(),
        datation: component_map(a.rho().components()),
    }))
    .with_import("dynamic", Import::Inline(Box::new(dynamic_document(a.alpha()))))
    .with_import(
        "clock",
        Import::Inline(Box::new(dynamic_document(a.clock().as_multi()))),
    )
}

pub fn open_dynamorphism_document(m: &OpenDynamorphism) -> Document {
    let Body::Dynamorphism(mut spec) = dynamorphism_document(m.inner()).body else {
        unreachable!("dynamorphism body")
    };
    spec.clock_components = Some(component_map(m.clock_part().components()));
    Document::new(Body::Dynamorphism(spec))
        .with_import("source", Import::Inline(Box::new(open_dynamic_document(m.source()))))
        .with_import("target", Import::Inline(Box::new(open_dynamic_document(m.target()))))
}

pub fn realization_document(a: &OpenDynamic, r: &Realization) -> Document {
    Document::new(Body::Realization(RealizationSpec {
        open_dynamic: "open_dynamic".into(),
        theta: [(CLOSED_PARAM, r.lam().to_string())].into_iter().collect(),
        sigma: r.sigma().iter().map(|(t, u)| (t.as_str(), u.clone())).collect(),
    }))
    .with_import("open_dynamic", Import::Inline(Box::new(open_dynamic_document(a))))
}
