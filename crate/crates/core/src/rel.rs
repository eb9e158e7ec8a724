//! Finite sets, transitions between them, and L-indexed families of transitions.
//!
//! A [`Transition`] from `U` to `V` assigns to every `u` in `U` a subset of `V`
//! (possibly empty). Transitions compose by taking unions of images, and are
//! ordered by the constraint order: `phi <= psi` when `phi` is pointwise a
//! superset of `psi`, i.e. `psi` is the more constraining of the two.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite set of symbolic elements kept in lexicographic order.
///
/// Equality, ordering and hashing only look at the elements; the name is a
/// label used in diagnostics.
#[derive(Debug, Clone)]
pub struct FiniteSet {
    name: String,
    elements: Vec<String>,
}

impl FiniteSet {
    pub fn new<I, S>(name: impl Into<String>, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Duplicate(w[0].clone()));
        }
        Ok(FiniteSet {
            name: name.into(),
            elements,
        })
    }

    pub fn empty(name: impl Into<String>) -> Self {
        FiniteSet {
            name: name.into(),
            elements: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        FiniteSet {
            name: name.into(),
            elements: self.elements.clone(),
        }
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &str> {
        self.elements.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, element: &str) -> bool {
        self.index_of(element).is_some()
    }

    pub fn index_of(&self, element: &str) -> Option<usize> {
        self.elements.binary_search_by(|e| e.as_str().cmp(element)).ok()
    }

    pub fn element(&self, index: usize) -> &str {
        &self.elements[index]
    }

    pub(crate) fn require(&self, element: &str) -> Result<usize> {
        self.index_of(element).ok_or_else(|| Error::UnknownElement {
            element: element.to_string(),
            set: self.name.clone(),
        })
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for FiniteSet {}

impl PartialOrd for FiniteSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.elements.cmp(&other.elements)
    }
}

impl std::hash::Hash for FiniteSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.name, self.elements.join(", "))
    }
}

/// A map `U -> P(V)`, stored positionally against the sorted elements of `U` and `V`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    domain: Arc<FiniteSet>,
    codomain: Arc<FiniteSet>,
    image: Vec<BTreeSet<usize>>,
}

impl Transition {
    /// Builds a transition from explicit `(u, image of u)` entries.
    ///
    /// Every element of the domain must appear exactly once; an empty image
    /// has to be written out.
    pub fn new<I, K, J, V>(
        domain: impl Into<Arc<FiniteSet>>,
        codomain: impl Into<Arc<FiniteSet>>,
        entries: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (K, J)>,
        K: AsRef<str>,
        J: IntoIterator<Item = V>,
        V: AsRef<str>,
    {
        let domain = domain.into();
        let codomain = codomain.into();
        let mut image: Vec<Option<BTreeSet<usize>>> = vec![None; domain.len()];
        for (u, targets) in entries {
            let i = domain.require(u.as_ref())?;
            if image[i].is_some() {
                return Err(Error::Duplicate(u.as_ref().to_string()));
            }
            let mut set = BTreeSet::new();
            for v in targets {
                set.insert(codomain.require(v.as_ref())?);
            }
            image[i] = Some(set);
        }
        let image = image
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| Error::MissingImage {
                    element: domain.element(i).to_string(),
                    set: domain.name().to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Transition {
            domain,
            codomain,
            image,
        })
    }

    /// Builds a deterministic transition from a total function given as pairs.
    pub fn from_function<I, K, V>(
        domain: impl Into<Arc<FiniteSet>>,
        codomain: impl Into<Arc<FiniteSet>>,
        map: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        Transition::new(domain, codomain, map.into_iter().map(|(k, v)| (k, std::iter::once(v))))
    }

    /// The everywhere-empty transition, the most constraining one of its shape.
    pub fn empty(domain: impl Into<Arc<FiniteSet>>, codomain: impl Into<Arc<FiniteSet>>) -> Self {
        let domain = domain.into();
        let image = vec![BTreeSet::new(); domain.len()];
        Transition {
            domain,
            codomain: codomain.into(),
            image,
        }
    }

    /// The transition sending every element to the whole codomain, the laxest one.
    pub fn total(domain: impl Into<Arc<FiniteSet>>, codomain: impl Into<Arc<FiniteSet>>) -> Self {
        let domain = domain.into();
        let codomain = codomain.into();
        let all: BTreeSet<usize> = (0..codomain.len()).collect();
        Transition {
            image: vec![all; domain.len()],
            domain,
            codomain,
        }
    }

    pub fn identity(set: impl Into<Arc<FiniteSet>>) -> Self {
        let set = set.into();
        let image = (0..set.len()).map(|i| BTreeSet::from([i])).collect();
        Transition {
            domain: set.clone(),
            codomain: set,
            image,
        }
    }

    pub fn domain(&self) -> &FiniteSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSet {
        &self.codomain
    }

    pub fn image(&self, u: &str) -> Result<impl Iterator<Item = &str> + '_> {
        let i = self.domain.require(u)?;
        Ok(self.image_at(i).map(|v| self.codomain.element(v)))
    }

    /// The image of `u` as owned strings, or `None` when `u` is outside the domain.
    pub fn image_of(&self, u: &str) -> Option<BTreeSet<String>> {
        let i = self.domain.index_of(u)?;
        Some(
            self.image[i]
                .iter()
                .map(|&v| self.codomain.element(v).to_string())
                .collect(),
        )
    }

    pub fn image_at(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        self.image[index].iter().copied()
    }

    pub fn relates(&self, u: &str, v: &str) -> bool {
        match (self.domain.index_of(u), self.codomain.index_of(v)) {
            (Some(i), Some(j)) => self.image[i].contains(&j),
            _ => false,
        }
    }

    /// All related pairs `(u, v)` in canonical order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.image.iter().enumerate().flat_map(move |(i, set)| {
            set.iter()
                .map(move |&j| (self.domain.element(i), self.codomain.element(j)))
        })
    }

    pub fn same_shape(&self, other: &Transition) -> bool {
        self.domain == other.domain && self.codomain == other.codomain
    }

    fn require_same_shape(&self, other: &Transition) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "transitions {} -> {} and {} -> {} do not share domain and codomain",
                self.domain, self.codomain, other.domain, other.codomain
            )))
        }
    }

    /// `psi.after(phi)` is `psi ⊙ phi`.
    pub fn after(&self, phi: &Transition) -> Result<Transition> {
        compose(self, phi)
    }

    pub fn is_deterministic(&self) -> bool {
        self.image.iter().all(|s| s.len() == 1)
    }

    pub fn is_quasi_deterministic(&self) -> bool {
        self.image.iter().all(|s| s.len() <= 1)
    }

    /// Total-function view of a deterministic transition.
    pub fn as_function(&self) -> Option<Vec<(&str, &str)>> {
        self.is_deterministic().then(|| self.pairs().collect())
    }

    /// Partial-function view of a quasi-deterministic transition.
    pub fn as_partial_function(&self) -> Option<Vec<(&str, &str)>> {
        self.is_quasi_deterministic().then(|| self.pairs().collect())
    }

    /// Pairs of `self` missing from `other`, as domain/codomain indices.
    pub fn excess(&self, other: &Transition) -> Result<Vec<(usize, usize)>> {
        self.require_same_shape(other)?;
        Ok(self
            .image
            .iter()
            .zip(&other.image)
            .enumerate()
            .flat_map(|(i, (mine, theirs))| mine.difference(theirs).map(move |&j| (i, j)))
            .collect())
    }

    pub fn intersect(&self, other: &Transition) -> Result<Transition> {
        self.require_same_shape(other)?;
        let image = self
            .image
            .iter()
            .zip(&other.image)
            .map(|(a, b)| a.intersection(b).copied().collect())
            .collect();
        Ok(Transition {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            image,
        })
    }

    pub fn union(&self, other: &Transition) -> Result<Transition> {
        self.require_same_shape(other)?;
        let image = self
            .image
            .iter()
            .zip(&other.image)
            .map(|(a, b)| a.union(b).copied().collect())
            .collect();
        Ok(Transition {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            image,
        })
    }

    /// A copy with `v` added to the image of `u`.
    pub fn with_pair(&self, u: &str, v: &str) -> Result<Transition> {
        let i = self.domain.require(u)?;
        let j = self.codomain.require(v)?;
        let mut out = self.clone();
        out.image[i].insert(j);
        Ok(out)
    }

    /// A copy with `v` removed from the image of `u`.
    pub fn without_pair(&self, u: &str, v: &str) -> Result<Transition> {
        let i = self.domain.require(u)?;
        let j = self.codomain.require(v)?;
        let mut out = self.clone();
        out.image[i].remove(&j);
        Ok(out)
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, set) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let targets: Vec<&str> = set.iter().map(|&j| self.codomain.element(j)).collect();
            write!(f, "{} -> [{}]", self.domain.element(i), targets.join(", "))?;
        }
        f.write_str("}")
    }
}

/// `psi ⊙ phi`: the image of `u` is the union of `psi(v)` over `v` in `phi(u)`.
pub fn compose(psi: &Transition, phi: &Transition) -> Result<Transition> {
    if phi.codomain != psi.domain {
        return Err(Error::CompositionShape {
            outer: psi.to_string(),
            inner: phi.to_string(),
            codomain: phi.codomain.elements().to_vec(),
            domain: psi.domain.elements().to_vec(),
        });
    }
    let image = phi
        .image
        .iter()
        .map(|mids| mids.iter().flat_map(|&v| psi.image[v].iter().copied()).collect())
        .collect();
    Ok(Transition {
        domain: phi.domain.clone(),
        codomain: psi.codomain.clone(),
        image,
    })
}

pub fn identity_transition(set: &FiniteSet) -> Transition {
    Transition::identity(set.clone())
}

pub fn is_deterministic(t: &Transition) -> bool {
    t.is_deterministic()
}

pub fn is_quasi_deterministic(t: &Transition) -> bool {
    t.is_quasi_deterministic()
}

/// The constraint order: `phi <= psi` iff `phi(u) ⊇ psi(u)` for every `u`.
pub fn leq_constraint(phi: &Transition, psi: &Transition) -> Result<bool> {
    subseteq(psi, phi)
}

/// Pointwise inclusion `phi(u) ⊆ psi(u)`.
pub fn subseteq(phi: &Transition, psi: &Transition) -> Result<bool> {
    phi.require_same_shape(psi)?;
    Ok(phi.image.iter().zip(&psi.image).all(|(a, b)| a.is_subset(b)))
}

/// An `L`-indexed family of transitions sharing one domain and codomain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransitionFamily {
    params: Arc<FiniteSet>,
    components: Vec<Transition>,
    domain: Arc<FiniteSet>,
    codomain: Arc<FiniteSet>,
}

impl TransitionFamily {
    pub fn new<I, K>(
        params: impl Into<Arc<FiniteSet>>,
        domain: impl Into<Arc<FiniteSet>>,
        codomain: impl Into<Arc<FiniteSet>>,
        components: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (K, Transition)>,
        K: AsRef<str>,
    {
        let params = params.into();
        let domain = domain.into();
        let codomain = codomain.into();
        if params.is_empty() {
            return Err(Error::EmptyParams);
        }
        let mut slots: Vec<Option<Transition>> = vec![None; params.len()];
        for (lam, t) in components {
            let i = params
                .index_of(lam.as_ref())
                .ok_or_else(|| Error::UnknownParameter(lam.as_ref().to_string()))?;
            if *t.domain != *domain || *t.codomain != *codomain {
                return Err(Error::Shape(format!(
                    "component {} goes {} -> {}, expected {} -> {}",
                    lam.as_ref(),
                    t.domain,
                    t.codomain,
                    domain,
                    codomain
                )));
            }
            if slots[i].is_some() {
                return Err(Error::Duplicate(lam.as_ref().to_string()));
            }
            slots[i] = Some(t);
        }
        let components = slots
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| Error::PartialMap(format!("no component for parameter '{}'", params.element(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TransitionFamily {
            params,
            components,
            domain,
            codomain,
        })
    }

    /// The family with the same transition at every parameter.
    pub fn constant(params: impl Into<Arc<FiniteSet>>, t: Transition) -> Result<Self> {
        let params = params.into();
        if params.is_empty() {
            return Err(Error::EmptyParams);
        }
        Ok(TransitionFamily {
            components: vec![t.clone(); params.len()],
            domain: t.domain.clone(),
            codomain: t.codomain.clone(),
            params,
        })
    }

    pub fn params(&self) -> &FiniteSet {
        &self.params
    }

    pub fn domain(&self) -> &FiniteSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSet {
        &self.codomain
    }

    pub fn component(&self, lam: &str) -> Result<&Transition> {
        let i = self
            .params
            .index_of(lam)
            .ok_or_else(|| Error::UnknownParameter(lam.to_string()))?;
        Ok(&self.components[i])
    }

    pub fn component_at(&self, index: usize) -> &Transition {
        &self.components[index]
    }

    /// Components paired with their parameter, in parameter order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Transition)> {
        self.params.iter().zip(&self.components)
    }

    fn require_same_shape(&self, other: &TransitionFamily) -> Result<()> {
        if self.params == other.params && self.domain == other.domain && self.codomain == other.codomain {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "families over {} ({} -> {}) and {} ({} -> {}) differ in shape",
                self.params, self.domain, self.codomain, other.params, other.domain, other.codomain
            )))
        }
    }
}

/// Componentwise `psi ⊙ phi`.
pub fn compose_family(psi: &TransitionFamily, phi: &TransitionFamily) -> Result<TransitionFamily> {
    if psi.params != phi.params {
        return Err(Error::Shape(format!(
            "parameter sets {} and {} differ",
            psi.params, phi.params
        )));
    }
    let components = psi
        .components
        .iter()
        .zip(&phi.components)
        .map(|(p, f)| compose(p, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransitionFamily {
        params: phi.params.clone(),
        components,
        domain: phi.domain.clone(),
        codomain: psi.codomain.clone(),
    })
}

pub fn leq_family(phi: &TransitionFamily, psi: &TransitionFamily) -> Result<bool> {
    phi.require_same_shape(psi)?;
    for (a, b) in phi.components.iter().zip(&psi.components) {
        if !leq_constraint(a, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(name: &str, xs: &[&str]) -> FiniteSet {
        FiniteSet::new(name, xs.iter().copied()).unwrap()
    }

    fn worked() -> (Transition, Transition) {
        let u = set("U", &["u1", "u2"]);
        let v = set("V", &["v1", "v2"]);
        let w = set("W", &["w1", "w2"]);
        let phi = Transition::new(u, v.clone(), [("u1", vec!["v1", "v2"]), ("u2", vec![])]).unwrap();
        let psi = Transition::new(v, w, [("v1", vec!["w1"]), ("v2", vec!["w1", "w2"])]).unwrap();
        (phi, psi)
    }

    #[test]
    fn compose_unions_images() {
        let (phi, psi) = worked();
        let c = compose(&psi, &phi).unwrap();
        assert_eq!(c.image_of("u1").unwrap(), BTreeSet::from(["w1".into(), "w2".into()]));
        assert!(c.image_of("u2").unwrap().is_empty());
        assert_eq!(c.domain(), phi.domain());
        assert_eq!(c.codomain(), psi.codomain());
    }

    #[test]
    fn compose_rejects_mismatched_shapes() {
        let (phi, psi) = worked();
        let err = compose(&phi, &psi).unwrap_err();
        assert!(matches!(err, Error::CompositionShape { .. }));
    }

    #[test]
    fn empty_inner_gives_empty_composite() {
        let (phi, psi) = worked();
        let e = Transition::empty(phi.domain().clone(), phi.codomain().clone());
        let c = compose(&psi, &e).unwrap();
        assert_eq!(c, Transition::empty(phi.domain().clone(), psi.codomain().clone()));
    }

    #[test]
    fn identity_transition_cases() {
        let ab = set("U", &["a", "b"]);
        let id = identity_transition(&ab);
        assert_eq!(id.image_of("a").unwrap(), BTreeSet::from(["a".into()]));
        assert_eq!(id.image_of("b").unwrap(), BTreeSet::from(["b".into()]));
        assert!(id.is_deterministic());
        let none = identity_transition(&FiniteSet::empty("E"));
        assert!(none.domain().is_empty());
        assert_eq!(none.pairs().count(), 0);
        let (phi, psi) = worked();
        assert_eq!(compose(&identity_transition(phi.codomain()), &phi).unwrap(), phi);
        assert_eq!(compose(&psi, &identity_transition(psi.domain())).unwrap(), psi);
    }

    #[test]
    fn determinism_predicates() {
        let (phi, _) = worked();
        assert!(!phi.is_deterministic());
        assert!(!phi.is_quasi_deterministic());
        let u = set("U", &["u1", "u2"]);
        let v = set("V", &["v1", "v2"]);
        let q = Transition::new(u.clone(), v.clone(), [("u1", vec![]), ("u2", vec!["v1"])]).unwrap();
        assert!(q.is_quasi_deterministic());
        assert!(!q.is_deterministic());
        assert_eq!(q.as_partial_function().unwrap(), vec![("u2", "v1")]);
        assert!(q.as_function().is_none());
        let d = Transition::from_function(u, v, [("u1", "v2"), ("u2", "v1")]).unwrap();
        assert!(d.is_deterministic() && d.is_quasi_deterministic());
    }

    #[test]
    fn constraint_order_examples() {
        let u = set("U", &["u"]);
        let v = set("V", &["v1", "v2"]);
        let phi = Transition::new(u.clone(), v.clone(), [("u", vec!["v1", "v2"])]).unwrap();
        let psi = Transition::new(u.clone(), v.clone(), [("u", vec!["v1"])]).unwrap();
        assert!(leq_constraint(&phi, &psi).unwrap());
        assert!(!leq_constraint(&psi, &phi).unwrap());
        assert!(subseteq(&psi, &phi).unwrap());
        assert!(!subseteq(&phi, &psi).unwrap());
        let total = Transition::total(u.clone(), v.clone());
        let empty = Transition::empty(u.clone(), v.clone());
        for t in [&phi, &psi, &total, &empty] {
            assert!(leq_constraint(&total, t).unwrap());
            assert!(leq_constraint(t, &empty).unwrap());
            assert!(subseteq(&empty, t).unwrap());
            assert!(subseteq(t, t).unwrap());
        }
        let other = Transition::empty(v.clone(), u.clone());
        assert!(leq_constraint(&phi, &other).is_err());
    }

    #[test]
    fn construction_errors() {
        let u = set("U", &["a", "b"]);
        let v = set("V", &["x"]);
        assert!(matches!(
            Transition::new(u.clone(), v.clone(), [("a", vec!["x"])]),
            Err(Error::MissingImage { .. })
        ));
        assert!(matches!(
            Transition::new(u.clone(), v.clone(), [("a", vec!["z"]), ("b", vec![])]),
            Err(Error::UnknownElement { .. })
        ));
        assert!(matches!(FiniteSet::new("D", ["a", "a"]), Err(Error::Duplicate(_))));
    }

    #[test]
    fn family_composition_is_componentwise() {
        let l = set("L", &["l1", "l2"]);
        let u = set("U", &["a", "b"]);
        let t1 = Transition::new(u.clone(), u.clone(), [("a", vec!["b"]), ("b", vec![])]).unwrap();
        let t2 = Transition::new(u.clone(), u.clone(), [("a", vec!["a", "b"]), ("b", vec!["a"])]).unwrap();
        let fam = TransitionFamily::new(
            l.clone(),
            u.clone(),
            u.clone(),
            [("l1", t1.clone()), ("l2", t2.clone())],
        )
        .unwrap();
        let sq = compose_family(&fam, &fam).unwrap();
        assert_eq!(sq.component("l1").unwrap(), &compose(&t1, &t1).unwrap());
        assert_eq!(sq.component("l2").unwrap(), &compose(&t2, &t2).unwrap());

        let ids = TransitionFamily::constant(l.clone(), Transition::identity(u.clone())).unwrap();
        assert_eq!(compose_family(&ids, &fam).unwrap(), fam);
        assert_eq!(compose_family(&fam, &ids).unwrap(), fam);

        let single = set("one", &["•"]);
        let f1 = TransitionFamily::constant(single.clone(), t1.clone()).unwrap();
        let f2 = TransitionFamily::constant(single, t2.clone()).unwrap();
        assert_eq!(
            compose_family(&f1, &f2).unwrap().component("•").unwrap(),
            &compose(&t1, &t2).unwrap()
        );
        assert_eq!(leq_family(&f2, &f1).unwrap(), leq_constraint(&t2, &t1).unwrap());
    }

    #[test]
    fn family_order_fails_on_one_component() {
        let l = set("L", &["l1", "l2"]);
        let u = set("U", &["a"]);
        let full = Transition::total(u.clone(), u.clone());
        let none = Transition::empty(u.clone(), u.clone());
        let a = TransitionFamily::new(
            l.clone(),
            u.clone(),
            u.clone(),
            [("l1", full.clone()), ("l2", full.clone())],
        )
        .unwrap();
        let b = TransitionFamily::new(
            l.clone(),
            u.clone(),
            u.clone(),
            [("l1", full.clone()), ("l2", none.clone())],
        )
        .unwrap();
        assert!(leq_family(&a, &a).unwrap());
        assert!(leq_family(&a, &b).unwrap());
        assert!(!leq_family(&b, &a).unwrap());
        let other = TransitionFamily::constant(set("M", &["m"]), full).unwrap();
        assert!(leq_family(&a, &other).is_err());
        assert!(compose_family(&a, &other).is_err());
    }

    #[test]
    fn family_rejects_empty_params_and_bad_components() {
        let u = set("U", &["a"]);
        assert!(matches!(
            TransitionFamily::constant(FiniteSet::empty("L"), Transition::identity(u.clone())),
            Err(Error::EmptyParams)
        ));
        let l = set("L", &["l1"]);
        let wrong = Transition::empty(u.clone(), set("V", &["v"]));
        assert!(matches!(
            TransitionFamily::new(l, u.clone(), u, [("l1", wrong)]),
            Err(Error::Shape(_))
        ));
    }
}
