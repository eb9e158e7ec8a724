//! Turning documents into validated domain values.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::schema::{Adjacency, Component, DynamicSpec, EngineSpec, TransitionEntry};
use super::{parse_spec, Body, Document, Import, Kind};
use crate::cat::{
    build_engine, chain_engine, check_functor, discrete_engine, free_engine_on_dag, monoid_engine, Arrow, DagEdge,
    EngineCategory, EngineFunctor,
};
use crate::dynamic::{build_multi_dynamic, clock_from_functor, closed_params, MultiDynamic, CLOSED_PARAM};
use crate::error::{Error, Result};
use crate::morph::Dynamorphism;
use crate::open::{build_open_dynamic, verify_realization, OpenDynamic, OpenDynamorphism, Realization};
use crate::rel::{FiniteSet, Transition, TransitionFamily};

/// A validated domain value, one variant per document kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Engine(Arc<EngineCategory>),
    Functor(EngineFunctor),
    Transition(Transition),
    Dynamic(Arc<MultiDynamic>),
    Dynamorphism(Dynamorphism),
    OpenDynamic(Arc<OpenDynamic>),
    OpenDynamorphism(OpenDynamorphism),
    Realization {
        open_dynamic: Arc<OpenDynamic>,
        realization: Realization,
    },
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Engine(_) => Kind::Engine,
            Value::Functor(_) => Kind::Functor,
            Value::Transition(_) => Kind::Transition,
            Value::Dynamic(_) => Kind::Dynamic,
            Value::Dynamorphism(_) | Value::OpenDynamorphism(_) => Kind::Dynamorphism,
            Value::OpenDynamic(_) => Kind::OpenDynamic,
            Value::Realization { .. } => Kind::Realization,
        }
    }

    fn engine(&self) -> Option<&Arc<EngineCategory>> {
        match self {
            Value::Engine(e) => Some(e),
            Value::Dynamic(d) => Some(d.engine()),
            Value::OpenDynamic(a) => Some(a.alpha().engine()),
            _ => None,
        }
    }
}

/// Values supplied from outside a dynamorphism document, taking the place
/// of its `source` and `target` imports.
#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    pub source: Option<Value>,
    pub target: Option<Value>,
}

struct Builder {
    base: Option<PathBuf>,
    stack: Vec<PathBuf>,
}

impl Document {
    /// Resolves and validates a document whose imports are all inline.
    pub fn build(&self) -> Result<Value> {
        self.build_with(None, BuildOptions::default())
    }

    /// As [`Document::build`]; path imports are read relative to `base`.
    pub fn build_with(&self, base: Option<&Path>, options: BuildOptions) -> Result<Value> {
        let mut builder = Builder {
            base: base.map(Path::to_path_buf),
            stack: Vec::new(),
        };
        builder.document(self, options)
    }
}

/// Reads, parses and builds a file, following path imports relative to it.
pub fn load_file(path: &Path, options: BuildOptions) -> Result<(Document, Value)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Import {
        name: path.display().to_string(),
        message: e.to_string(),
    })?;
    let doc = parse_spec(&text)?;
    let mut builder = Builder {
        base: path.parent().map(Path::to_path_buf),
        stack: vec![path.canonicalize().unwrap_or_else(|_| path.to_path_buf())],
    };
    let value = builder.document(&doc, options)?;
    Ok((doc, value))
}

fn set(name: &str, elements: impl IntoIterator<Item = impl Into<String>>) -> Result<FiniteSet> {
    FiniteSet::new(name, elements)
}

fn adjacency(domain: &FiniteSet, codomain: &FiniteSet, adj: &Adjacency) -> Result<Transition> {
    Transition::new(
        domain.clone(),
        codomain.clone(),
        adj.iter().map(|(u, vs)| (u.as_str(), vs.iter())),
    )
}

fn lookup<'a>(imports: &'a BTreeMap<String, Value>, name: &str) -> Result<&'a Value> {
    imports.get(name).ok_or_else(|| Error::Import {
        name: name.to_string(),
        message: "no such import".into(),
    })
}

fn wrong_kind(expected: &str, found: &Value) -> Error {
    Error::WrongKind {
        expected: expected.to_string(),
        found: found.kind().to_string(),
    }
}

fn as_dynamic(v: &Value) -> Result<Arc<MultiDynamic>> {
    match v {
        Value::Dynamic(d) => Ok(d.clone()),
        other => Err(wrong_kind("dynamic", other)),
    }
}

fn as_open(v: &Value) -> Result<Arc<OpenDynamic>> {
    match v {
        Value::OpenDynamic(a) => Ok(a.clone()),
        other => Err(wrong_kind("open_dynamic", other)),
    }
}

impl Builder {
    fn document(&mut self, doc: &Document, mut options: BuildOptions) -> Result<Value> {
        let mut imports = BTreeMap::new();
        for (name, import) in &doc.imports {
            let value = self.import(name, import).map_err(|e| e.at(format!("imports.{name}")))?;
            imports.insert(name.clone(), value);
        }
        let body = |e: Error| e.at("body");
        match &doc.body {
            Body::Engine(spec) => engine(spec, &imports).map(Value::Engine).map_err(body),
            Body::Functor(spec) => {
                let source = engine(&spec.source, &imports).map_err(|e| e.at("body.source"))?;
                let target = engine(&spec.target, &imports).map_err(|e| e.at("body.target"))?;
                let functor =
                    EngineFunctor::new(source, target, spec.objects.0.clone(), spec.arrows.0.clone()).map_err(body)?;
                let report = check_functor(&functor);
                if !report.is_clean() {
                    return Err(Error::invalid("functor", report));
                }
                Ok(Value::Functor(functor))
            }
            Body::Transition(spec) => {
                let domain = set("domain", spec.domain.iter()).map_err(|e| e.at("body.domain"))?;
                let codomain = set("codomain", spec.codomain.iter()).map_err(|e| e.at("body.codomain"))?;
                adjacency(&domain, &codomain, &spec.image)
                    .map(Value::Transition)
                    .map_err(|e| e.at("body.image"))
            }
            Body::Dynamic(spec) => dynamic(spec, &imports).map(|d| Value::Dynamic(Arc::new(d))),
            Body::Dynamorphism(spec) => {
                let side = |given: Option<Value>, name: &Option<String>, field: &str| -> Result<Value> {
                    match (given, name) {
                        (Some(v), _) => Ok(v),
                        (None, Some(n)) => lookup(&imports, n).cloned().map_err(|e| e.at(format!("body.{field}"))),
                        (None, None) => Err(Error::Import {
                            name: field.to_string(),
                            message: "not given in the document or on the command line".into(),
                        }
                        .at("body")),
                    }
                };
                let source = side(options.source.take(), &spec.source, "source")?;
                let target = side(options.target.take(), &spec.target, "target")?;
                dynamorphism(spec, source, target)
            }
            Body::OpenDynamic(spec) => {
                let alpha = lookup(&imports, &spec.dynamic)
                    .and_then(as_dynamic)
                    .map_err(|e| e.at("body.dynamic"))?;
                let clock = lookup(&imports, &spec.clock)
                    .and_then(as_dynamic)
                    .map_err(|e| e.at("body.clock"))?;
                let rho = components(&spec.datation, |obj| {
                    Ok((alpha.states(obj)?.clone(), clock.states(obj)?.clone()))
                })
                .map_err(|e| e.at("body.datation"))?;
                build_open_dynamic(alpha, clock, rho).map(|a| Value::OpenDynamic(Arc::new(a)))
            }
            Body::Realization(spec) => {
                let open = lookup(&imports, &spec.open_dynamic)
                    .and_then(as_open)
                    .map_err(|e| e.at("body.open_dynamic"))?;
                let lam = match spec.theta.iter().collect::<Vec<_>>()[..] {
                    [(point, lam)] if point == CLOSED_PARAM => lam.clone(),
                    _ => {
                        return Err(
                            Error::PartialMap(format!("theta must map exactly '{CLOSED_PARAM}'")).at("body.theta")
                        )
                    }
                };
                let realization = Realization::new(lam, spec.sigma.0.clone());
                verify_realization(&open, &realization).map_err(body)?;
                Ok(Value::Realization {
                    open_dynamic: open,
                    realization,
                })
            }
        }
    }

    fn import(&mut self, name: &str, import: &Import) -> Result<Value> {
        match import {
            Import::Inline(doc) => self.document(doc, BuildOptions::default()),
            Import::Path(rel) => {
                let Some(base) = self.base.clone() else {
                    return Err(Error::Import {
                        name: name.to_string(),
                        message: format!("path import '{rel}' needs a file location"),
                    });
                };
                let path = base.join(rel);
                let key = path.canonicalize().unwrap_or_else(|_| path.clone());
                if self.stack.contains(&key) {
                    return Err(Error::Import {
                        name: name.to_string(),
                        message: format!("import cycle through '{rel}'"),
                    });
                }
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Import {
                    name: name.to_string(),
                    message: format!("{}: {e}", path.display()),
                })?;
                let doc = parse_spec(&text)?;
                let saved = self
                    .base
                    .replace(path.parent().map(Path::to_path_buf).unwrap_or_default());
                self.stack.push(key);
                let value = self.document(&doc, BuildOptions::default());
                self.stack.pop();
                self.base = saved;
                value
            }
        }
    }
}

fn engine(spec: &EngineSpec, imports: &BTreeMap<String, Value>) -> Result<Arc<EngineCategory>> {
    let built = match spec {
        EngineSpec::Import { name } => {
            let v = lookup(imports, name)?;
            return v.engine().cloned().ok_or_else(|| wrong_kind("engine", v));
        }
        EngineSpec::Chain { length } => chain_engine(*length)?,
        EngineSpec::Discrete { objects } => discrete_engine(objects.iter())?,
        EngineSpec::Monoid { elements, unit, table } => {
            let table = table
                .iter()
                .flat_map(|(e, row)| row.iter().map(move |(d, ed)| ((e.clone(), d.clone()), ed.clone())))
                .collect();
            monoid_engine(elements.iter(), table, unit)?
        }
        EngineSpec::Dag { vertices, edges } => {
            let edges: Vec<DagEdge> = edges.iter().map(|(n, e)| DagEdge::new(n, &e.src, &e.dst)).collect();
            free_engine_on_dag(vertices.iter(), &edges)?
        }
        EngineSpec::Explicit {
            objects,
            arrows,
            identities,
            compose,
        } => {
            let arrows = arrows.iter().map(|(id, a)| Arrow::new(id, &a.dom, &a.cod));
            let table = compose
                .iter()
                .flat_map(|(e, row)| row.iter().map(move |(d, ed)| ((e.clone(), d.clone()), ed.clone())))
                .collect();
            build_engine(objects.iter(), arrows, identities.0.clone(), table)?
        }
    };
    Ok(Arc::new(built))
}

fn components(
    spec: &BTreeMap<String, Adjacency>,
    sets: impl Fn(&str) -> Result<(FiniteSet, FiniteSet)>,
) -> Result<BTreeMap<String, Transition>> {
    spec.iter()
        .map(|(obj, adj)| {
            let (dom, cod) = sets(obj).map_err(|e| e.at(obj.as_str()))?;
            let t = adjacency(&dom, &cod, adj).map_err(|e| e.at(obj.as_str()))?;
            Ok((obj.clone(), t))
        })
        .collect()
}

fn dynamic(spec: &DynamicSpec, imports: &BTreeMap<String, Value>) -> Result<MultiDynamic> {
    let engine = engine(&spec.engine, imports).map_err(|e| e.at("body.engine"))?;
    let mut states = BTreeMap::new();
    for (obj, elems) in spec.states.iter() {
        if !engine.objects().contains(obj) {
            return Err(Error::UnknownObject(obj.clone()).at(format!("body.states.{obj}")));
        }
        states.insert(
            obj.clone(),
            set(obj, elems.iter()).map_err(|e| e.at(format!("body.states.{obj}")))?,
        );
    }
    if let Some(missing) = engine.objects().iter().find(|o| !states.contains_key(*o)) {
        return Err(Error::Shape(format!("no states given for object '{missing}'")).at("body.states"));
    }

    if let Some(maps) = &spec.maps {
        if spec.params.is_some() || spec.transitions.is_some() {
            return Err(
                Error::Shape("a clock given by 'maps' takes neither 'params' nor 'transitions'".into()).at("body.maps"),
            );
        }
        let maps = maps.iter().map(|(a, m)| (a.clone(), m.0.clone())).collect();
        let clock = clock_from_functor(engine, states, maps).map_err(|e| match e {
            Error::Invalid { .. } => e,
            other => other.at("body.maps"),
        })?;
        return Ok(clock.as_multi().clone());
    }

    let params = match &spec.params {
        Some(p) => {
            if p.is_empty() {
                return Err(Error::EmptyParams.at("body.params"));
            }
            set("L", p.iter())?
        }
        None => closed_params(),
    };
    let mut families = BTreeMap::new();
    for (arrow_id, entry) in spec.transitions.as_ref().map(|t| &t.0).into_iter().flatten() {
        let at = format!("body.transitions.{arrow_id}");
        let arrow = engine.arrow(arrow_id).map_err(|e| e.at(at.clone()))?;
        let (dom, cod) = (&states[&arrow.dom], &states[&arrow.cod]);
        let single = |c: &Component| -> Result<Transition> {
            match c {
                Component::Identity if arrow.dom == arrow.cod => Ok(Transition::identity(dom.clone())),
                Component::Identity => Err(Error::Shape(format!(
                    "'identity' needs an endo-arrow, but '{arrow_id}' goes from '{}' to '{}'",
                    arrow.dom, arrow.cod
                ))),
                Component::Adjacency(adj) => adjacency(dom, cod, adj),
            }
        };
        let family = match entry {
            TransitionEntry::Identity => TransitionFamily::constant(params.clone(), single(&Component::Identity)?),
            TransitionEntry::Single(adj) => {
                TransitionFamily::constant(params.clone(), adjacency(dom, cod, adj).map_err(|e| e.at(at.clone()))?)
            }
            TransitionEntry::Family(by_lam) => {
                if let Some(lam) = by_lam.keys().find(|l| !params.contains(l)) {
                    return Err(Error::UnknownParameter(lam.clone()).at(at));
                }
                if let Some(lam) = params.iter().find(|l| !by_lam.contains_key(*l)) {
                    return Err(Error::PartialMap(format!("no component for parameter '{lam}'")).at(at));
                }
                let comps = by_lam
                    .iter()
                    .map(|(lam, c)| Ok((lam.as_str(), single(c).map_err(|e| e.at(format!("{at}.{lam}")))?)))
                    .collect::<Result<Vec<_>>>()?;
                TransitionFamily::new(params.clone(), dom.clone(), cod.clone(), comps)
            }
        }
        .map_err(|e| e.at(format!("body.transitions.{arrow_id}")))?;
        families.insert(arrow_id.clone(), family);
    }
    build_multi_dynamic(engine, params, states, families)
}

fn dynamorphism(spec: &super::schema::DynamorphismSpec, source: Value, target: Value) -> Result<Value> {
    let open = spec.clock_components.is_some();
    let (alpha, beta, open_pair) = if open {
        let a = as_open(&source).map_err(|e| e.at("body.source"))?;
        let b = as_open(&target).map_err(|e| e.at("body.target"))?;
        (a.alpha().clone(), b.alpha().clone(), Some((a, b)))
    } else {
        let a = as_dynamic(&source).map_err(|e| e.at("body.source"))?;
        let b = as_dynamic(&target).map_err(|e| e.at("body.target"))?;
        (a, b, None)
    };
    let functor = match &spec.functor {
        Some(maps) => EngineFunctor::new(
            alpha.engine().clone(),
            beta.engine().clone(),
            maps.objects.0.clone(),
            maps.arrows.0.clone(),
        )
        .map_err(|e| e.at("body.functor"))?,
        None => {
            if alpha.engine() != beta.engine() {
                return Err(Error::Mismatch("different engines and no functor given".into()).at("body.functor"));
            }
            EngineFunctor::identity(alpha.engine().clone())
        }
    };
    let theta = match &spec.theta {
        Some(t) => t.0.clone(),
        None if alpha.params() == beta.params() => {
            alpha.params().iter().map(|l| (l.to_string(), l.to_string())).collect()
        }
        None if beta.params().len() == 1 => Dynamorphism::constant_theta(&alpha, beta.params().element(0)),
        None => return Err(Error::PartialMap("theta is required here".into()).at("body.theta")),
    };
    let sets = |src: &MultiDynamic, tgt: &MultiDynamic, obj: &str| -> Result<(FiniteSet, FiniteSet)> {
        let image = functor.map_object(obj)?;
        Ok((src.states(obj)?.clone(), tgt.states(image)?.clone()))
    };
    let comps = components(&spec.components, |obj| sets(&alpha, &beta, obj)).map_err(|e| e.at("body.components"))?;
    let inner =
        Dynamorphism::new(alpha.clone(), beta.clone(), theta, functor.clone(), comps).map_err(|e| e.at("body"))?;
    let Some((a, b)) = open_pair else {
        return Ok(Value::Dynamorphism(inner));
    };
    let (ha, hb) = (
        Arc::new(a.clock().as_multi().clone()),
        Arc::new(b.clock().as_multi().clone()),
    );
    let clock_spec = spec.clock_components.as_ref().expect("open");
    let clock_comps = components(clock_spec, |obj| sets(&ha, &hb, obj)).map_err(|e| e.at("body.clock_components"))?;
    let point = BTreeMap::from([(CLOSED_PARAM.to_string(), CLOSED_PARAM.to_string())]);
    let clock_part =
        Dynamorphism::new(ha, hb, point, functor, clock_comps).map_err(|e| e.at("body.clock_components"))?;
    OpenDynamorphism::new(a, b, inner, clock_part).map(Value::OpenDynamorphism)
}
