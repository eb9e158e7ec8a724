//! Engines: finite small categories presented by an explicit composition table,
//! and functors between them.
//!
//! All law checks are exhaustive. Associativity costs `O(|arrows|^3)` in the
//! worst case, which is fine for engines with tens of arrows.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rel::FiniteSet;
use crate::report::{Law, Report, Violation};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

impl Arrow {
    pub fn new(id: impl Into<String>, dom: impl Into<String>, cod: impl Into<String>) -> Self {
        Arrow {
            id: id.into(),
            dom: dom.into(),
            cod: cod.into(),
        }
    }
}

/// A validated finite category. Arrows are called durations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineCategory {
    objects: FiniteSet,
    arrows: BTreeMap<String, Arrow>,
    identities: BTreeMap<String, String>,
    compose: BTreeMap<(String, String), String>,
}

/// Validates a presentation. `compose_table[(e, d)]` names `e ∘ d` (first `d`, then `e`).
pub fn build_engine<O, S>(
    objects: O,
    arrows: impl IntoIterator<Item = Arrow>,
    identities: BTreeMap<String, String>,
    compose_table: BTreeMap<(String, String), String>,
) -> Result<EngineCategory>
where
    O: IntoIterator<Item = S>,
    S: Into<String>,
{
    let objects = FiniteSet::new("objects", objects)?;
    let mut arrow_map = BTreeMap::new();
    for a in arrows {
        if arrow_map.contains_key(&a.id) {
            return Err(Error::Duplicate(a.id));
        }
        arrow_map.insert(a.id.clone(), a);
    }
    let engine = EngineCategory {
        objects,
        arrows: arrow_map,
        identities,
        compose: compose_table,
    };
    let report = engine.check_presentation();
    report.into_result("engine", engine)
}

impl EngineCategory {
    fn check_presentation(&self) -> Report {
        let mut report = Report::new();
        for a in self.arrows.values() {
            for (role, obj) in [("dom", &a.dom), ("cod", &a.cod)] {
                if !self.objects.contains(obj) {
                    report.push(
                        Violation::new(Law::ArrowShape, format!("arrows.{}", a.id))
                            .with("arrow", &a.id)
                            .with(role, obj.as_str()),
                    );
                }
            }
        }
        for obj in self.objects.iter() {
            match self.identities.get(obj).map(|id| (id, self.arrows.get(id))) {
                None => {
                    report.push(Violation::new(Law::IdentityShape, format!("identities.{obj}")).with("object", obj))
                }
                Some((id, None)) => report.push(
                    Violation::new(Law::IdentityShape, format!("identities.{obj}"))
                        .with("object", obj)
                        .with("arrow", id.as_str()),
                ),
                Some((id, Some(a))) if a.dom != obj || a.cod != obj => report.push(
                    Violation::new(Law::IdentityShape, format!("identities.{obj}"))
                        .with("object", obj)
                        .with("arrow", id.as_str()),
                ),
                Some(_) => {}
            }
        }
        for obj in self.identities.keys() {
            if !self.objects.contains(obj) {
                report
                    .push(Violation::new(Law::IdentityShape, format!("identities.{obj}")).with("object", obj.as_str()));
            }
        }
        if !report.is_clean() {
            return report.canonicalize();
        }

        for ((e, d), c) in &self.compose {
            let loc = format!("compose.{e}.{d}");
            let (Some(ea), Some(da)) = (self.arrows.get(e), self.arrows.get(d)) else {
                report.push(
                    Violation::new(Law::UnexpectedComposite, loc)
                        .with("e", e.as_str())
                        .with("d", d.as_str()),
                );
                continue;
            };
            if da.cod != ea.dom {
                report.push(
                    Violation::new(Law::UnexpectedComposite, loc)
                        .with("e", e.as_str())
                        .with("d", d.as_str()),
                );
                continue;
            }
            match self.arrows.get(c) {
                None => report.push(
                    Violation::new(Law::CompositeShape, loc)
                        .with("e", e.as_str())
                        .with("d", d.as_str())
                        .with("composite", c.as_str()),
                ),
                Some(ca) if ca.dom != da.dom || ca.cod != ea.cod => report.push(
                    Violation::new(Law::CompositeShape, loc)
                        .with("e", e.as_str())
                        .with("d", d.as_str())
                        .with("composite", c.as_str()),
                ),
                Some(_) => {}
            }
        }
        for d in self.arrows.values() {
            for e in self.arrows.values().filter(|e| e.dom == d.cod) {
                if !self.compose.contains_key(&(e.id.clone(), d.id.clone())) {
                    report.push(
                        Violation::new(Law::MissingComposite, format!("compose.{}.{}", e.id, d.id))
                            .with("e", &e.id)
                            .with("d", &d.id),
                    );
                }
            }
        }
        for a in self.arrows.values() {
            let id_dom = &self.identities[&a.dom];
            let id_cod = &self.identities[&a.cod];
            for (e, d) in [(a.id.as_str(), id_dom.as_str()), (id_cod.as_str(), a.id.as_str())] {
                if let Some(c) = self.compose(e, d) {
                    if c != a.id {
                        report.push(
                            Violation::new(Law::IdentityNeutral, format!("compose.{e}.{d}"))
                                .with("arrow", &a.id)
                                .with("e", e)
                                .with("d", d)
                                .with("composite", c),
                        );
                    }
                }
            }
        }
        for (e, d, ed) in self.composable_pairs() {
            let Some(e_cod) = self.arrows.get(e).map(|a| &a.cod) else {
                continue;
            };
            for f in self.arrows.values().filter(|f| &f.dom == e_cod) {
                let (Some(fe), Some(f_ed)) = (self.compose(&f.id, e), self.compose(&f.id, ed)) else {
                    continue;
                };
                let Some(fe_d) = self.compose(fe, d) else { continue };
                if fe_d != f_ed {
                    report.push(
                        Violation::new(Law::Associativity, format!("compose.{}.{}.{}", f.id, e, d))
                            .with("f", &f.id)
                            .with("e", e)
                            .with("d", d)
                            .with("left", fe_d)
                            .with("right", f_ed),
                    );
                }
            }
        }
        report.canonicalize()
    }

    pub fn objects(&self) -> &FiniteSet {
        &self.objects
    }

    /// Arrows in identifier order.
    pub fn arrows(&self) -> impl Iterator<Item = &Arrow> {
        self.arrows.values()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, id: &str) -> Result<&Arrow> {
        self.arrows.get(id).ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    pub fn has_arrow(&self, id: &str) -> bool {
        self.arrows.contains_key(id)
    }

    pub fn identity(&self, object: &str) -> Result<&str> {
        self.identities
            .get(object)
            .map(String::as_str)
            .ok_or_else(|| Error::UnknownObject(object.to_string()))
    }

    pub fn identities(&self) -> &BTreeMap<String, String> {
        &self.identities
    }

    pub fn is_identity(&self, arrow: &str) -> bool {
        self.arrows
            .get(arrow)
            .is_some_and(|a| self.identities.get(&a.dom).is_some_and(|id| id == arrow))
    }

    /// `e ∘ d`, when `d` and `e` are composable.
    pub fn compose(&self, e: &str, d: &str) -> Option<&str> {
        self.compose.get(&(e.to_string(), d.to_string())).map(String::as_str)
    }

    pub fn compose_table(&self) -> &BTreeMap<(String, String), String> {
        &self.compose
    }

    /// Every composable pair as `(e, d, e ∘ d)`, in table order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.compose
            .iter()
            .map(|((e, d), c)| (e.as_str(), d.as_str(), c.as_str()))
    }

    pub fn hom_set(&self, source: &str, target: &str) -> Result<Vec<&str>> {
        for obj in [source, target] {
            if !self.objects.contains(obj) {
                return Err(Error::UnknownObject(obj.to_string()));
            }
        }
        Ok(self
            .arrows
            .values()
            .filter(|a| a.dom == source && a.cod == target)
            .map(|a| a.id.as_str())
            .collect())
    }

    pub fn arrows_from<'a>(&'a self, source: &'a str) -> impl Iterator<Item = &'a Arrow> + 'a {
        self.arrows.values().filter(move |a| a.dom == source)
    }
}

pub fn hom_set<'a>(engine: &'a EngineCategory, source: &str, target: &str) -> Result<Vec<&'a str>> {
    engine.hom_set(source, target)
}

/// Name of the arrow `i -> j` in [`chain_engine`].
pub fn chain_arrow_name(n: usize, i: usize, j: usize) -> String {
    if i == j {
        format!("id_{i}")
    } else if n <= 10 {
        format!("d{i}{j}")
    } else {
        format!("d{i}_{j}")
    }
}

/// The poset `0 -> 1 -> ... -> n-1`, with one arrow `i -> j` whenever `i <= j`.
pub fn chain_engine(n: usize) -> Result<EngineCategory> {
    if n == 0 {
        return Err(Error::EmptyChain);
    }
    let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    let mut identities = BTreeMap::new();
    let mut table = BTreeMap::new();
    for i in 0..n {
        identities.insert(i.to_string(), chain_arrow_name(n, i, i));
        for j in i..n {
            arrows.push(Arrow::new(chain_arrow_name(n, i, j), i.to_string(), j.to_string()));
            for k in j..n {
                table.insert(
                    (chain_arrow_name(n, j, k), chain_arrow_name(n, i, j)),
                    chain_arrow_name(n, i, k),
                );
            }
        }
    }
    build_engine(objects, arrows, identities, table)
}

/// The object of every [`monoid_engine`].
pub const MONOID_OBJECT: &str = "*";

/// A one-object engine whose arrows are the monoid elements; `mult_table[(e, d)] = e·d`.
pub fn monoid_engine<I, S>(
    elements: I,
    mult_table: BTreeMap<(String, String), String>,
    unit: &str,
) -> Result<EngineCategory>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let arrows = elements
        .into_iter()
        .map(|e| Arrow::new(e, MONOID_OBJECT, MONOID_OBJECT));
    let identities = BTreeMap::from([(MONOID_OBJECT.to_string(), unit.to_string())]);
    build_engine([MONOID_OBJECT], arrows, identities, mult_table)
}

/// The cyclic group of order `n` as a one-object engine, elements `g0 .. g{n-1}`.
pub fn cyclic_engine(n: usize) -> Result<EngineCategory> {
    if n == 0 {
        return Err(Error::EmptyChain);
    }
    let name = |i: usize| format!("g{i}");
    let mut table = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            table.insert((name(a), name(b)), name((a + b) % n));
        }
    }
    monoid_engine((0..n).map(name), table, "g0")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DagEdge {
    pub name: String,
    pub src: String,
    pub dst: String,
}

impl DagEdge {
    pub fn new(name: impl Into<String>, src: impl Into<String>, dst: impl Into<String>) -> Self {
        DagEdge {
            name: name.into(),
            src: src.into(),
            dst: dst.into(),
        }
    }
}

/// Name of a path in [`free_engine_on_dag`]: edge names in traversal order joined by `;`.
pub fn path_name(edges: &[&str]) -> String {
    edges.join(";")
}

/// The free category on an acyclic graph: arrows are all directed paths,
/// identities are the empty paths (`id_<vertex>`), composition concatenates.
pub fn free_engine_on_dag<I, S>(vertices: I, edges: &[DagEdge]) -> Result<EngineCategory>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let vertices = FiniteSet::new("vertices", vertices)?;
    let mut out: BTreeMap<&str, Vec<&DagEdge>> = BTreeMap::new();
    let mut names = BTreeSet::new();
    for e in edges {
        for v in [&e.src, &e.dst] {
            if !vertices.contains(v) {
                return Err(Error::UnknownObject(v.clone()));
            }
        }
        if !names.insert(e.name.as_str()) {
            return Err(Error::Duplicate(e.name.clone()));
        }
        out.entry(e.src.as_str()).or_default().push(e);
    }
    if let Some(cycle) = find_cycle(&vertices, &out) {
        return Err(Error::Cycle(cycle));
    }

    // Every path as (edge names, src, dst); finite because the graph is acyclic.
    let mut paths: Vec<(Vec<&str>, &str, &str)> = Vec::new();
    for v in vertices.iter() {
        let mut stack: Vec<(Vec<&str>, &str)> = vec![(Vec::new(), v)];
        while let Some((path, at)) = stack.pop() {
            for e in out.get(at).into_iter().flatten() {
                let mut next = path.clone();
                next.push(e.name.as_str());
                paths.push((next.clone(), v, e.dst.as_str()));
                stack.push((next, e.dst.as_str()));
            }
        }
    }

    let mut arrows = Vec::new();
    let mut identities = BTreeMap::new();
    for v in vertices.iter() {
        let id = format!("id_{v}");
        identities.insert(v.to_string(), id.clone());
        arrows.push(Arrow::new(id, v, v));
    }
    for (p, s, t) in &paths {
        arrows.push(Arrow::new(path_name(p), *s, *t));
    }

    let mut table = BTreeMap::new();
    for v in vertices.iter() {
        let id = format!("id_{v}");
        table.insert((id.clone(), id.clone()), id.clone());
    }
    for (p, s, t) in &paths {
        let name = path_name(p);
        table.insert((name.clone(), format!("id_{s}")), name.clone());
        table.insert((format!("id_{t}"), name.clone()), name.clone());
        for (q, _, _) in paths.iter().filter(|(_, s2, _)| s2 == t) {
            let mut joined = p.clone();
            joined.extend(q.iter().copied());
            table.insert((path_name(q), name.clone()), path_name(&joined));
        }
    }
    build_engine(vertices.iter(), arrows, identities, table)
}

fn find_cycle(vertices: &FiniteSet, out: &BTreeMap<&str, Vec<&DagEdge>>) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    fn visit<'a>(
        v: &'a str,
        out: &BTreeMap<&'a str, Vec<&'a DagEdge>>,
        marks: &mut BTreeMap<&'a str, Mark>,
        stack: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        marks.insert(v, Mark::Active);
        stack.push(v);
        for e in out.get(v).into_iter().flatten() {
            let w = e.dst.as_str();
            match marks.get(w).copied().unwrap_or(Mark::New) {
                Mark::Active => {
                    let start = stack.iter().position(|&x| x == w).unwrap();
                    let mut cycle: Vec<String> = stack[start..].iter().map(|s| s.to_string()).collect();
                    cycle.push(w.to_string());
                    return Some(cycle);
                }
                Mark::New => {
                    if let Some(c) = visit(w, out, marks, stack) {
                        return Some(c);
                    }
                }
                Mark::Done => {}
            }
        }
        stack.pop();
        marks.insert(v, Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    for v in vertices.iter() {
        if marks.get(v).copied().unwrap_or(Mark::New) == Mark::New {
            if let Some(c) = visit(v, out, &mut marks, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

/// A discrete engine: the given objects and their identities only.
pub fn discrete_engine<I, S>(objects: I) -> Result<EngineCategory>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    free_engine_on_dag(objects, &[])
}

/// A map of engines. Identity arrows left out of `arrow_map` are sent to the
/// identity of the image object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineFunctor {
    source: Arc<EngineCategory>,
    target: Arc<EngineCategory>,
    object_map: BTreeMap<String, String>,
    arrow_map: BTreeMap<String, String>,
}

impl EngineFunctor {
    /// Checks totality and that every image exists; laws are left to [`check_functor`].
    pub fn new(
        source: Arc<EngineCategory>,
        target: Arc<EngineCategory>,
        object_map: BTreeMap<String, String>,
        mut arrow_map: BTreeMap<String, String>,
    ) -> Result<Self> {
        for (s, t) in &object_map {
            if !source.objects.contains(s) {
                return Err(Error::UnknownObject(s.clone()));
            }
            if !target.objects.contains(t) {
                return Err(Error::UnknownObject(t.clone()));
            }
        }
        if let Some(missing) = source.objects.iter().find(|o| !object_map.contains_key(*o)) {
            return Err(Error::PartialMap(format!("object '{missing}' has no image")));
        }
        for (obj, id) in &source.identities {
            if !arrow_map.contains_key(id) {
                let image = target.identity(&object_map[obj])?.to_string();
                arrow_map.insert(id.clone(), image);
            }
        }
        for (s, t) in &arrow_map {
            if !source.arrows.contains_key(s) {
                return Err(Error::UnknownArrow(s.clone()));
            }
            if !target.arrows.contains_key(t) {
                return Err(Error::UnknownArrow(t.clone()));
            }
        }
        if let Some(missing) = source.arrows.keys().find(|a| !arrow_map.contains_key(*a)) {
            return Err(Error::PartialMap(format!("arrow '{missing}' has no image")));
        }
        Ok(EngineFunctor {
            source,
            target,
            object_map,
            arrow_map,
        })
    }

    pub fn identity(engine: Arc<EngineCategory>) -> Self {
        let object_map = engine.objects.iter().map(|o| (o.to_string(), o.to_string())).collect();
        let arrow_map = engine.arrows.keys().map(|a| (a.clone(), a.clone())).collect();
        EngineFunctor {
            source: engine.clone(),
            target: engine,
            object_map,
            arrow_map,
        }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &EngineFunctor) -> Result<EngineFunctor> {
        if inner.target != self.source {
            return Err(Error::Mismatch(
                "functor target does not match the next functor's source".into(),
            ));
        }
        let object_map = inner
            .object_map
            .iter()
            .map(|(s, t)| (s.clone(), self.object_map[t].clone()))
            .collect();
        let arrow_map = inner
            .arrow_map
            .iter()
            .map(|(s, t)| (s.clone(), self.arrow_map[t].clone()))
            .collect();
        Ok(EngineFunctor {
            source: inner.source.clone(),
            target: self.target.clone(),
            object_map,
            arrow_map,
        })
    }

    pub fn source(&self) -> &Arc<EngineCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<EngineCategory> {
        &self.target
    }

    pub fn object_map(&self) -> &BTreeMap<String, String> {
        &self.object_map
    }

    pub fn arrow_map(&self) -> &BTreeMap<String, String> {
        &self.arrow_map
    }

    pub fn map_object(&self, object: &str) -> Result<&str> {
        self.object_map
            .get(object)
            .map(String::as_str)
            .ok_or_else(|| Error::UnknownObject(object.to_string()))
    }

    pub fn map_arrow(&self, arrow: &str) -> Result<&str> {
        self.arrow_map
            .get(arrow)
            .map(String::as_str)
            .ok_or_else(|| Error::UnknownArrow(arrow.to_string()))
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.object_map.iter().all(|(s, t)| s == t)
            && self.arrow_map.iter().all(|(s, t)| s == t)
    }
}

/// Exhaustively checks that `functor` preserves dom/cod, identities and composition.
pub fn check_functor(functor: &EngineFunctor) -> Report {
    let mut report = Report::new();
    let (src, tgt) = (&functor.source, &functor.target);
    for a in src.arrows() {
        let image = tgt.arrow(&functor.arrow_map[&a.id]).expect("validated image");
        let (fd, fc) = (&functor.object_map[&a.dom], &functor.object_map[&a.cod]);
        if &image.dom != fd || &image.cod != fc {
            report.push(
                Violation::new(Law::FunctorShape, format!("arrows.{}", a.id))
                    .with("arrow", &a.id)
                    .with("image", &image.id),
            );
        }
    }
    for (obj, id) in &src.identities {
        let expected = &tgt.identities[&functor.object_map[obj]];
        let actual = &functor.arrow_map[id];
        if actual != expected {
            report.push(
                Violation::new(Law::FunctorIdentity, format!("identities.{obj}"))
                    .with("object", obj.as_str())
                    .with("image", actual.as_str())
                    .with("expected", expected.as_str()),
            );
        }
    }
    for (e, d, ed) in src.composable_pairs() {
        let left = &functor.arrow_map[ed];
        let (fe, fd) = (&functor.arrow_map[e], &functor.arrow_map[d]);
        let right = tgt.compose(fe, fd);
        if right != Some(left.as_str()) {
            report.push(
                Violation::new(Law::FunctorComposition, format!("compose.{e}.{d}"))
                    .with("e", e)
                    .with("d", d)
                    .with("image_of_composite", left.as_str())
                    .with("composite_of_images", right.unwrap_or("undefined")),
            );
        }
    }
    report.canonicalize()
}
