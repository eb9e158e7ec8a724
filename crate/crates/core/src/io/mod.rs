//! The `laxdyn/1` document format.
//!
//! A document is a JSON object `{"version", "kind", "imports"?, "body"}`.
//! `imports` maps local names to other documents, written inline or as a
//! path relative to the importing file; bodies refer to them by name.
//! [`parse_spec`] checks syntax, the schema of the body and duplicate
//! identifiers. [`Document::build`] resolves references and validates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::value::RawValue;
use serde_json::Value as Json;

use crate::error::{Error, Result};

mod build;
mod export;
pub mod schema;
pub mod strict;

pub use build::{load_file, BuildOptions, Value};
pub use export::{
    dynamic_document, dynamic_spec, dynamorphism_document, engine_spec, open_dynamic_document,
    open_dynamorphism_document, realization_document, transition_document,
};
pub use schema::{
    Adjacency, ArrowSpec, Component, DynamicSpec, DynamorphismSpec, EdgeSpec, EngineSpec, FunctorMaps, FunctorSpec,
    OpenDynamicSpec, RealizationSpec, TransitionEntry, TransitionSpec, IDENTITY_KEYWORD,
};
pub use strict::{StrictMap, StrictSet};

pub const FORMAT_VERSION: &str = "laxdyn/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Engine,
    Functor,
    Transition,
    Dynamic,
    Dynamorphism,
    OpenDynamic,
    Realization,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Engine,
        Kind::Functor,
        Kind::Transition,
        Kind::Dynamic,
        Kind::Dynamorphism,
        Kind::OpenDynamic,
        Kind::Realization,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Engine => "engine",
            Kind::Functor => "functor",
            Kind::Transition => "transition",
            Kind::Dynamic => "dynamic",
            Kind::Dynamorphism => "dynamorphism",
            Kind::OpenDynamic => "open_dynamic",
            Kind::Realization => "realization",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    Engine(EngineSpec),
    Functor(FunctorSpec),
    Transition(TransitionSpec),
    Dynamic(DynamicSpec),
    Dynamorphism(DynamorphismSpec),
    OpenDynamic(OpenDynamicSpec),
    Realization(RealizationSpec),
}

impl Body {
    pub fn kind(&self) -> Kind {
        match self {
            Body::Engine(_) => Kind::Engine,
            Body::Functor(_) => Kind::Functor,
            Body::Transition(_) => Kind::Transition,
            Body::Dynamic(_) => Kind::Dynamic,
            Body::Dynamorphism(_) => Kind::Dynamorphism,
            Body::OpenDynamic(_) => Kind::OpenDynamic,
            Body::Realization(_) => Kind::Realization,
        }
    }

    fn to_json(&self) -> Json {
        let value = match self {
            Body::Engine(b) => serde_json::to_value(b),
            Body::Functor(b) => serde_json::to_value(b),
            Body::Transition(b) => serde_json::to_value(b),
            Body::Dynamic(b) => serde_json::to_value(b),
            Body::Dynamorphism(b) => serde_json::to_value(b),
            Body::OpenDynamic(b) => serde_json::to_value(b),
            Body::Realization(b) => serde_json::to_value(b),
        };
        value.expect("bodies have string keys")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Import {
    Path(String),
    Inline(Box<Document>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub version: String,
    pub imports: BTreeMap<String, Import>,
    pub body: Body,
}

impl Document {
    pub fn new(body: Body) -> Self {
        Document {
            version: FORMAT_VERSION.to_string(),
            imports: BTreeMap::new(),
            body,
        }
    }

    pub fn with_import(mut self, name: impl Into<String>, import: Import) -> Self {
        self.imports.insert(name.into(), import);
        self
    }

    pub fn kind(&self) -> Kind {
        self.body.kind()
    }

    fn to_json(&self) -> Json {
        let mut out = serde_json::Map::new();
        out.insert("version".into(), Json::String(self.version.clone()));
        out.insert("kind".into(), Json::String(self.kind().as_str().into()));
        if !self.imports.is_empty() {
            let imports = self
                .imports
                .iter()
                .map(|(name, import)| {
                    let value = match import {
                        Import::Path(p) => Json::String(p.clone()),
                        Import::Inline(doc) => doc.to_json(),
                    };
                    (name.clone(), value)
                })
                .collect();
            out.insert("imports".into(), Json::Object(imports));
        }
        out.insert("body".into(), self.body.to_json());
        Json::Object(out)
    }
}

/// Canonical text: keys sorted, sets in lexicographic order, two-space
/// indentation, trailing newline.
pub fn serialize_spec(doc: &Document) -> String {
    let mut text = serde_json::to_string_pretty(&doc.to_json()).expect("json values serialize");
    text.push('\n');
    text
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument<'a> {
    version: String,
    kind: String,
    #[serde(default, borrow)]
    imports: Option<StrictMap<&'a RawValue>>,
    #[serde(borrow)]
    body: &'a RawValue,
}

/// A position in the original text, 1-based.
#[derive(Clone, Copy)]
struct Origin {
    line: usize,
    column: usize,
}

impl Origin {
    fn start() -> Self {
        Origin { line: 1, column: 1 }
    }

    /// Where `inner` (a slice of `outer`) begins, given where `outer` begins.
    fn of_slice(self, outer: &str, inner: &str) -> Self {
        let offset = (inner.as_ptr() as usize)
            .saturating_sub(outer.as_ptr() as usize)
            .min(outer.len());
        let before = &outer[..offset];
        let newlines = before.matches('\n').count();
        if newlines == 0 {
            Origin {
                line: self.line,
                column: self.column + before.chars().count(),
            }
        } else {
            let tail = before.rsplit('\n').next().unwrap_or("");
            Origin {
                line: self.line + newlines,
                column: tail.chars().count() + 1,
            }
        }
    }

    fn shift(self, line: usize, column: usize) -> (usize, usize) {
        if line <= 1 {
            (self.line, self.column + column.saturating_sub(1))
        } else {
            (self.line + line - 1, column)
        }
    }
}

fn join(prefix: &str, path: &str) -> String {
    match (prefix.is_empty(), path == "." || path.is_empty()) {
        (true, true) => ".".to_string(),
        (true, false) => path.to_string(),
        (false, true) => prefix.to_string(),
        (false, false) => format!("{prefix}.{path}"),
    }
}

fn json_error(err: serde_json::Error, origin: Origin, path: String) -> Error {
    let (line, column) = origin.shift(err.line(), err.column());
    let text = err.to_string();
    let message = match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    };
    Error::Parse {
        path,
        line,
        column,
        message,
    }
}

fn parse_part<T: DeserializeOwned>(text: &str, origin: Origin, prefix: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = join(prefix, &e.path().to_string());
        json_error(e.into_inner(), origin, path)
    })?;
    de.end().map_err(|e| json_error(e, origin, join(prefix, "")))?;
    Ok(value)
}

/// Parses one document: syntax, schema, duplicate identifiers, version and kind.
/// Errors carry the field path and the line/column in `text`.
pub fn parse_spec(text: &str) -> Result<Document> {
    parse_at(text, Origin::start(), "")
}

fn parse_at(text: &str, origin: Origin, prefix: &str) -> Result<Document> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawDocument = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = join(prefix, &e.path().to_string());
        json_error(e.into_inner(), origin, path)
    })?;
    de.end().map_err(|e| json_error(e, origin, join(prefix, "")))?;

    if raw.version != FORMAT_VERSION {
        return Err(Error::Shape(format!(
            "unsupported version '{}', expected '{FORMAT_VERSION}'",
            raw.version
        ))
        .at(join(prefix, "version")));
    }
    let kind = Kind::from_str(&raw.kind).map_err(|e| e.at(join(prefix, "kind")))?;

    let mut imports = BTreeMap::new();
    for (name, value) in raw.imports.unwrap_or_default().0 {
        let at = origin.of_slice(text, value.get());
        let path = join(prefix, &format!("imports.{name}"));
        let import = if value.get().trim_start().starts_with('"') {
            Import::Path(parse_part(value.get(), at, &path)?)
        } else {
            Import::Inline(Box::new(parse_at(value.get(), at, &path)?))
        };
        imports.insert(name, import);
    }

    let body_text = raw.body.get();
    let at = origin.of_slice(text, body_text);
    let path = join(prefix, "body");
    let body = match kind {
        Kind::Engine => Body::Engine(parse_part(body_text, at, &path)?),
        Kind::Functor => Body::Functor(parse_part(body_text, at, &path)?),
        Kind::Transition => Body::Transition(parse_part(body_text, at, &path)?),
        Kind::Dynamic => Body::Dynamic(parse_part(body_text, at, &path)?),
        Kind::Dynamorphism => Body::Dynamorphism(parse_part(body_text, at, &path)?),
        Kind::OpenDynamic => Body::OpenDynamic(parse_part(body_text, at, &path)?),
        Kind::Realization => Body::Realization(parse_part(body_text, at, &path)?),
    };
    Ok(Document {
        version: raw.version,
        imports,
        body,
    })
}
