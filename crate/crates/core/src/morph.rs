//! Dynamorphisms `(θ, Δ, δ)` between multi-dynamics.
//!
//! One record covers every variant: closed dynamics on a fixed engine
//! (`θ` the identity of `{•}`, `Δ = Id`), varying engines, and parameter maps.
//! The lax naturality condition checked everywhere is
//! `δ_T ⊙ d^α_λ ⊆ (Δd)^β_θ(λ) ⊙ δ_S` for every arrow `d: S -> T` and every `λ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cat::{check_functor, EngineFunctor};
use crate::dynamic::{ClosedDynamic, MultiDynamic, CLOSED_PARAM};
use crate::error::{Error, Result};
use crate::rel::{compose, Transition};
use crate::report::{Law, Report, Violation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dynamorphism {
    source: Arc<MultiDynamic>,
    target: Arc<MultiDynamic>,
    theta: BTreeMap<String, String>,
    functor: EngineFunctor,
    components: BTreeMap<String, Transition>,
}

impl Dynamorphism {
    /// Checks shapes only: the functor is lawful between the two engines, `θ`
    /// is total `L -> M`, and `δ_S` goes `S^α ⇝ (ΔS)^β`. Lax naturality is
    /// reported by [`Dynamorphism::check`].
    pub fn new(
        source: Arc<MultiDynamic>,
        target: Arc<MultiDynamic>,
        theta: BTreeMap<String, String>,
        functor: EngineFunctor,
        components: BTreeMap<String, Transition>,
    ) -> Result<Self> {
        if functor.source() != source.engine() || functor.target() != target.engine() {
            return Err(Error::Mismatch(
                "engine functor does not go from the source engine to the target engine".into(),
            ));
        }
        let functor_report = check_functor(&functor);
        if !functor_report.is_clean() {
            return Err(Error::invalid("engine functor", functor_report));
        }
        for (lam, mu) in &theta {
            if !source.params().contains(lam) {
                return Err(Error::UnknownParameter(lam.clone()));
            }
            if !target.params().contains(mu) {
                return Err(Error::UnknownParameter(mu.clone()));
            }
        }
        if let Some(lam) = source.params().iter().find(|l| !theta.contains_key(*l)) {
            return Err(Error::PartialMap(format!("theta has no image for parameter '{lam}'")));
        }
        for obj in source.engine().objects().iter() {
            let Some(delta) = components.get(obj) else {
                return Err(Error::PartialMap(format!("no component for object '{obj}'")));
            };
            let image = functor.map_object(obj)?;
            if delta.domain() != source.states(obj)? || delta.codomain() != target.states(image)? {
                return Err(Error::Shape(format!(
                    "component at '{obj}' must go from the states of '{obj}' to the states of '{image}'"
                )));
            }
        }
        if let Some(extra) = components.keys().find(|o| !source.engine().objects().contains(o)) {
            return Err(Error::UnknownObject(extra.clone()));
        }
        Ok(Dynamorphism {
            source,
            target,
            theta,
            functor,
            components,
        })
    }

    /// A dynamorphism over the identity engine functor.
    pub fn same_engine(
        source: Arc<MultiDynamic>,
        target: Arc<MultiDynamic>,
        theta: BTreeMap<String, String>,
        components: BTreeMap<String, Transition>,
    ) -> Result<Self> {
        if source.engine() != target.engine() {
            return Err(Error::Mismatch("source and target have different engines".into()));
        }
        let functor = EngineFunctor::identity(source.engine().clone());
        Dynamorphism::new(source, target, theta, functor, components)
    }

    /// Between closed dynamics on one engine: `θ(•) = •`, `Δ = Id`.
    pub fn closed(
        source: &ClosedDynamic,
        target: &ClosedDynamic,
        components: BTreeMap<String, Transition>,
    ) -> Result<Self> {
        let theta = BTreeMap::from([(CLOSED_PARAM.to_string(), CLOSED_PARAM.to_string())]);
        Dynamorphism::same_engine(
            Arc::new(source.as_multi().clone()),
            Arc::new(target.as_multi().clone()),
            theta,
            components,
        )
    }

    /// `θ` sending every parameter of `source` to `mu`.
    pub fn constant_theta(source: &MultiDynamic, mu: &str) -> BTreeMap<String, String> {
        source
            .params()
            .iter()
            .map(|l| (l.to_string(), mu.to_string()))
            .collect()
    }

    pub fn identity(alpha: Arc<MultiDynamic>) -> Self {
        let theta = alpha.params().iter().map(|l| (l.to_string(), l.to_string())).collect();
        let components = alpha
            .state_sets()
            .iter()
            .map(|(obj, set)| (obj.clone(), Transition::identity(set.clone())))
            .collect();
        Dynamorphism {
            functor: EngineFunctor::identity(alpha.engine().clone()),
            source: alpha.clone(),
            target: alpha,
            theta,
            components,
        }
    }

    pub fn source(&self) -> &Arc<MultiDynamic> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MultiDynamic> {
        &self.target
    }

    pub fn theta(&self) -> &BTreeMap<String, String> {
        &self.theta
    }

    pub fn functor(&self) -> &EngineFunctor {
        &self.functor
    }

    pub fn components(&self) -> &BTreeMap<String, Transition> {
        &self.components
    }

    pub fn component(&self, object: &str) -> Result<&Transition> {
        self.components
            .get(object)
            .ok_or_else(|| Error::UnknownObject(object.to_string()))
    }

    pub fn check(&self) -> Report {
        let mut report = Report::new();
        for lam in self.source.params().iter() {
            let mu = &self.theta[lam];
            naturality_into(
                &mut report,
                &self.components,
                &self.source,
                lam,
                &self.target,
                mu,
                &self.functor,
                None,
            );
        }
        report.canonicalize()
    }

    /// The same components seen as a dynamorphism from the closed dynamic `α_λ`.
    pub fn slice(&self, lam: &str) -> Result<Dynamorphism> {
        let mu = self
            .theta
            .get(lam)
            .ok_or_else(|| Error::UnknownParameter(lam.to_string()))?;
        let source = Arc::new(self.source.component_at(lam)?.into_multi());
        Ok(Dynamorphism {
            source,
            target: self.target.clone(),
            theta: BTreeMap::from([(CLOSED_PARAM.to_string(), mu.clone())]),
            functor: self.functor.clone(),
            components: self.components.clone(),
        })
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Dynamorphism) -> Result<Dynamorphism> {
        if !(Arc::ptr_eq(&inner.target, &self.source) || inner.target == self.source) {
            return Err(Error::Mismatch(
                "the inner dynamorphism's target is not the outer one's source".into(),
            ));
        }
        let functor = self.functor.after(&inner.functor)?;
        let theta = inner
            .theta
            .iter()
            .map(|(l, m)| (l.clone(), self.theta[m].clone()))
            .collect();
        let components = inner
            .components
            .iter()
            .map(|(obj, delta)| {
                let mid = inner.functor.map_object(obj)?;
                Ok((obj.clone(), compose(&self.components[mid], delta)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Dynamorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            theta,
            functor,
            components,
        })
    }

    pub fn is_deterministic(&self) -> bool {
        self.components.values().all(Transition::is_deterministic)
    }

    pub fn is_quasi_deterministic(&self) -> bool {
        self.components.values().all(Transition::is_quasi_deterministic)
    }
}

#[allow(clippy::too_many_arguments)]
fn naturality_into(
    report: &mut Report,
    components: &BTreeMap<String, Transition>,
    alpha: &MultiDynamic,
    lam: &str,
    beta: &MultiDynamic,
    mu: &str,
    functor: &EngineFunctor,
    pair: Option<usize>,
) {
    for d in alpha.engine().arrows() {
        let d_alpha = alpha.transition(&d.id, lam).expect("validated");
        let image = functor.map_arrow(&d.id).expect("validated");
        let d_beta = beta.transition(image, mu).expect("validated");
        let left = compose(&components[&d.cod], d_alpha).expect("validated shapes");
        let right = compose(d_beta, &components[&d.dom]).expect("validated shapes");
        for (u, v) in left.excess(&right).expect("validated shapes") {
            let mut violation = Violation::new(Law::LaxNaturality, format!("components.{}", d.id));
            if let Some(i) = pair {
                violation = violation.with("pair", i.to_string());
            }
            report.push(
                violation
                    .with("lambda", lam)
                    .with("d", &d.id)
                    .with("u", left.domain().element(u))
                    .with("v", left.codomain().element(v)),
            );
        }
    }
}

pub fn check_dynamorphism(m: &Dynamorphism) -> Report {
    m.check()
}

/// [`check_dynamorphism`] for dynamorphisms whose engine functor must be the identity.
pub fn check_same_engine_multi(m: &Dynamorphism) -> Result<Report> {
    if !m.functor.is_identity() {
        return Err(Error::NotIdentityFunctor);
    }
    Ok(m.check())
}

/// `g ∘ f`.
pub fn compose_dynamorphisms(g: &Dynamorphism, f: &Dynamorphism) -> Result<Dynamorphism> {
    g.after(f)
}

pub fn is_deterministic_morphism(m: &Dynamorphism) -> bool {
    m.is_deterministic()
}

pub fn is_quasi_deterministic_morphism(m: &Dynamorphism) -> bool {
    m.is_quasi_deterministic()
}

/// Checks one bare family of components against several `(α_i, β_i)` pairs at
/// once, without binding it to any of them. Witnesses carry the pair index.
pub fn naturality_intersection_check(
    components: &BTreeMap<String, Transition>,
    pairs: &[(&ClosedDynamic, &ClosedDynamic)],
) -> Result<Report> {
    let Some((alpha0, beta0)) = pairs.first() else {
        return Ok(Report::new());
    };
    for (alpha, beta) in pairs {
        if alpha.engine() != alpha0.engine()
            || beta.engine() != alpha0.engine()
            || alpha.state_sets() != alpha0.state_sets()
            || beta.state_sets() != beta0.state_sets()
        {
            return Err(Error::Mismatch(
                "all pairs must share one engine and their state sets".into(),
            ));
        }
    }
    for obj in alpha0.engine().objects().iter() {
        let delta = components
            .get(obj)
            .ok_or_else(|| Error::PartialMap(format!("no component for object '{obj}'")))?;
        if delta.domain() != alpha0.states(obj)? || delta.codomain() != beta0.states(obj)? {
            return Err(Error::Shape(format!("component at '{obj}' has the wrong shape")));
        }
    }
    let functor = EngineFunctor::identity(alpha0.engine().clone());
    let mut report = Report::new();
    for (i, (alpha, beta)) in pairs.iter().enumerate() {
        naturality_into(
            &mut report,
            components,
            alpha,
            CLOSED_PARAM,
            beta,
            CLOSED_PARAM,
            &functor,
            Some(i),
        );
    }
    Ok(report.canonicalize())
}
