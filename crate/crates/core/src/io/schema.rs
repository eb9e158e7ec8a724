//! Document bodies, one record per kind.

use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::strict::{StrictMap, StrictSet};

/// `{"u": ["v", ...], ...}`; every domain element must appear.
pub type Adjacency = StrictMap<StrictSet>;

/// The keyword standing for a full identity transition.
pub const IDENTITY_KEYWORD: &str = "identity";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EngineSpec {
    /// An engine taken from an imported document.
    Import {
        name: String,
    },
    Chain {
        length: usize,
    },
    Discrete {
        objects: StrictSet,
    },
    /// `table[e][d] = e·d`.
    Monoid {
        elements: StrictSet,
        unit: String,
        table: StrictMap<StrictMap<String>>,
    },
    /// The free category on an acyclic graph; edges keyed by name.
    Dag {
        vertices: StrictSet,
        edges: StrictMap<EdgeSpec>,
    },
    /// `compose[e][d] = e∘d` for every composable pair.
    Explicit {
        objects: StrictSet,
        arrows: StrictMap<ArrowSpec>,
        identities: StrictMap<String>,
        compose: StrictMap<StrictMap<String>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub dom: String,
    pub cod: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub source: EngineSpec,
    pub target: EngineSpec,
    pub objects: StrictMap<String>,
    pub arrows: StrictMap<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub domain: StrictSet,
    pub codomain: StrictSet,
    pub image: Adjacency,
}

/// One component of a parameter-indexed transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Identity,
    Adjacency(Adjacency),
}

/// The transitions of one arrow: the identity keyword, one adjacency shared
/// by every parameter, or one component per parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransitionEntry {
    Identity,
    Single(Adjacency),
    Family(StrictMap<Component>),
}

impl Serialize for Component {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Component::Identity => serializer.serialize_str(IDENTITY_KEYWORD),
            Component::Adjacency(adj) => adj.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Component {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ComponentVisitor;

        impl<'de> Visitor<'de> for ComponentVisitor {
            type Value = Component;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "\"{IDENTITY_KEYWORD}\" or an adjacency object")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Component, E> {
                identity_keyword(v).map(|_| Component::Identity)
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<Component, A::Error> {
                Adjacency::deserialize(de::value::MapAccessDeserializer::new(map)).map(Component::Adjacency)
            }
        }

        deserializer.deserialize_any(ComponentVisitor)
    }
}

fn identity_keyword<E: de::Error>(v: &str) -> Result<(), E> {
    if v == IDENTITY_KEYWORD {
        Ok(())
    } else {
        Err(E::custom(format!("expected \"{IDENTITY_KEYWORD}\", found \"{v}\"")))
    }
}

impl Serialize for TransitionEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            TransitionEntry::Identity => serializer.serialize_str(IDENTITY_KEYWORD),
            TransitionEntry::Single(adj) => adj.serialize(serializer),
            TransitionEntry::Family(f) => f.serialize(serializer),
        }
    }
}

/// Either the adjacency lists of a single transition, or a per-parameter component.
enum EntryValue {
    Image(StrictSet),
    Component(Component),
}

impl<'de> Deserialize<'de> for EntryValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ValueVisitor;

        impl<'de> Visitor<'de> for ValueVisitor {
            type Value = EntryValue;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an array of states, \"{IDENTITY_KEYWORD}\", or an adjacency object")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<EntryValue, E> {
                identity_keyword(v).map(|_| EntryValue::Component(Component::Identity))
            }

            fn visit_seq<A: de::SeqAccess<'de>>(self, seq: A) -> Result<EntryValue, A::Error> {
                StrictSet::deserialize(de::value::SeqAccessDeserializer::new(seq)).map(EntryValue::Image)
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<EntryValue, A::Error> {
                Adjacency::deserialize(de::value::MapAccessDeserializer::new(map))
                    .map(|a| EntryValue::Component(Component::Adjacency(a)))
            }
        }

        deserializer.deserialize_any(ValueVisitor)
    }
}

impl<'de> Deserialize<'de> for TransitionEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntryVisitor;

        impl<'de> Visitor<'de> for EntryVisitor {
            type Value = TransitionEntry;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(
                    f,
                    "\"{IDENTITY_KEYWORD}\", an adjacency object, or one component per parameter"
                )
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<TransitionEntry, E> {
                identity_keyword(v).map(|_| TransitionEntry::Identity)
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<TransitionEntry, A::Error> {
                let entries: StrictMap<EntryValue> =
                    StrictMap::deserialize(de::value::MapAccessDeserializer::new(&mut map))?;
                let images = entries.values().filter(|v| matches!(v, EntryValue::Image(_))).count();
                if images == entries.len() {
                    let adj = entries.0.into_iter().map(|(k, v)| match v {
                        EntryValue::Image(s) => (k, s),
                        EntryValue::Component(_) => unreachable!(),
                    });
                    Ok(TransitionEntry::Single(adj.collect()))
                } else if images == 0 {
                    let comps = entries.0.into_iter().map(|(k, v)| match v {
                        EntryValue::Component(c) => (k, c),
                        EntryValue::Image(_) => unreachable!(),
                    });
                    Ok(TransitionEntry::Family(comps.collect()))
                } else {
                    Err(de::Error::custom("mixes adjacency lists with per-parameter components"))
                }
            }
        }

        deserializer.deserialize_any(EntryVisitor)
    }
}

/// A multi-dynamic, or a clock presented by state maps.
///
/// Without `params` the dynamic is closed. `maps` (a function per arrow, identities
/// optional) replaces `transitions` for clocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicSpec {
    pub engine: EngineSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<StrictSet>,
    pub states: StrictMap<StrictSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitions: Option<StrictMap<TransitionEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<StrictMap<StrictMap<String>>>,
}

/// A dynamorphism between imported dynamics. With `clock_components` it is an
/// open dynamorphism between imported open dynamics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamorphismSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<StrictMap<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functor: Option<FunctorMaps>,
    pub components: StrictMap<Adjacency>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clock_components: Option<StrictMap<Adjacency>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorMaps {
    pub objects: StrictMap<String>,
    #[serde(default)]
    pub arrows: StrictMap<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenDynamicSpec {
    pub dynamic: String,
    pub clock: String,
    pub datation: StrictMap<Adjacency>,
}

/// `theta` picks the parameter: `{"•": λ}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationSpec {
    pub open_dynamic: String,
    pub theta: StrictMap<String>,
    pub sigma: StrictMap<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transition_entry_forms() {
        let e: TransitionEntry = serde_json::from_str(r#""identity""#).unwrap();
        assert_eq!(e, TransitionEntry::Identity);
        let e: TransitionEntry = serde_json::from_str(r#"{"a":["b"]}"#).unwrap();
        assert!(matches!(e, TransitionEntry::Single(_)));
        let e: TransitionEntry = serde_json::from_str(r#"{"l1":{"a":["b"]},"l2":"identity"}"#).unwrap();
        assert!(matches!(e, TransitionEntry::Family(_)));
        let e: TransitionEntry = serde_json::from_str(r#"{}"#).unwrap();
        assert!(matches!(e, TransitionEntry::Single(ref a) if a.is_empty()));
        assert!(serde_json::from_str::<TransitionEntry>(r#"{"a":["b"],"l":"identity"}"#).is_err());
        assert!(serde_json::from_str::<TransitionEntry>(r#""identities""#).is_err());
        assert!(serde_json::from_str::<TransitionEntry>(r#"{"a":["b","b"]}"#).is_err());
    }

    #[test]
    fn engine_spec_is_tagged() {
        let e: EngineSpec = serde_json::from_str(r#"{"type":"chain","length":2}"#).unwrap();
        assert_eq!(e, EngineSpec::Chain { length: 2 });
        assert!(serde_json::from_str::<EngineSpec>(r#"{"type":"chain","length":2,"x":1}"#).is_err());
        assert!(serde_json::from_str::<EngineSpec>(r#"{"type":"ring"}"#).is_err());
    }
}
