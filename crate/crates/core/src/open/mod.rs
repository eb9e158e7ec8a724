//! Open dynamics `(α, h, ρ)`, their dynamorphisms, and realizations.
//!
//! A realization of an open dynamic is a pair `(λ, σ)` where `σ` is a partial
//! map from clock states to system states such that
//!
//! 1. `ρ(σ(t)) = t` wherever `σ` is defined,
//! 2. `σ(t)` lives over the same object as `t`,
//! 3. for every duration `d: S -> T` and `t ∈ S^h`, if `d^h(t)` is defined
//!    under `σ` then so is `t`, and `σ(d^h(t)) ∈ d^α_λ(σ(t))`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dynamic::{Clock, ClosedDynamic, MultiDynamic, CLOSED_PARAM};
use crate::error::{Error, Result};
use crate::morph::Dynamorphism;
use crate::rel::{compose, subseteq, Transition};
use crate::report::{Law, Report, Violation};

mod search;
mod trajectory;

pub use search::{
    brute_force_realizations, brute_force_realizations_bounded, candidate_count, enumerate_realizations,
    EnumerateOptions, Enumeration, DEFAULT_ORACLE_BOUND,
};
pub use trajectory::{sample_trajectory, Trajectory};

/// A multi-dynamic with a clock and a deterministic datation `ρ: α -> h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenDynamic {
    alpha: Arc<MultiDynamic>,
    clock: Arc<Clock>,
    rho: Dynamorphism,
    dating: BTreeMap<String, String>,
}

/// Validates an open dynamic. `clock` must be a deterministic one-parameter
/// dynamic on the same engine; `rho` gives `ρ_S: S^α ⇝ S^h` per object.
pub fn build_open_dynamic(
    alpha: Arc<MultiDynamic>,
    clock: Arc<MultiDynamic>,
    rho: BTreeMap<String, Transition>,
) -> Result<OpenDynamic> {
    if alpha.engine() != clock.engine() {
        return Err(Error::Mismatch(
            "the dynamic and the clock have different engines".into(),
        ));
    }
    let closed = ClosedDynamic::new((*clock).clone())?;
    let mut report = Report::new();
    let clock = match Clock::new(closed.clone()) {
        Ok(c) => Some(c),
        Err(Error::Invalid { report: r, .. }) => {
            for v in r {
                report.push(Violation {
                    location: format!("clock.{}", v.location),
                    ..v
                });
            }
            None
        }
        Err(e) => return Err(e),
    };
    let theta = Dynamorphism::constant_theta(&alpha, CLOSED_PARAM);
    let rho = Dynamorphism::same_engine(alpha.clone(), Arc::new(closed.into_multi()), theta, rho)?;
    for (obj, t) in rho.components() {
        for (i, u) in t.domain().iter().enumerate() {
            let n = t.image_at(i).count();
            if n != 1 {
                report.push(
                    Violation::new(Law::Determinism, format!("rho.{obj}"))
                        .with("object", obj.as_str())
                        .with("u", u)
                        .with("image_size", n.to_string()),
                );
            }
        }
    }
    report.extend(rho.check());
    let Some(clock) = clock else {
        return Err(Error::invalid("open dynamic", report.canonicalize()));
    };
    if !report.is_clean() {
        return Err(Error::invalid("open dynamic", report.canonicalize()));
    }
    let dating = rho
        .components()
        .values()
        .flat_map(|t| t.pairs().map(|(u, v)| (u.to_string(), v.to_string())))
        .collect();
    Ok(OpenDynamic {
        alpha,
        clock: Arc::new(clock),
        rho,
        dating,
    })
}

impl OpenDynamic {
    pub fn alpha(&self) -> &Arc<MultiDynamic> {
        &self.alpha
    }

    pub fn clock(&self) -> &Arc<Clock> {
        &self.clock
    }

    /// The datation.
    pub fn rho(&self) -> &Dynamorphism {
        &self.rho
    }

    /// `ρ(u)`, resolved through the object owning `u`.
    pub fn date(&self, state: &str) -> Option<&str> {
        self.dating.get(state).map(String::as_str)
    }

    /// The states dated `t`.
    pub fn fiber(&self, t: &str) -> Vec<&str> {
        self.dating
            .iter()
            .filter(|(_, time)| time.as_str() == t)
            .map(|(u, _)| u.as_str())
            .collect()
    }
}

/// A map between open dynamics: `(θ, Δ, δ)` on the dynamics and `(Δ, ε)` on the clocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenDynamorphism {
    source: Arc<OpenDynamic>,
    target: Arc<OpenDynamic>,
    inner: Dynamorphism,
    clock_part: Dynamorphism,
}

impl OpenDynamorphism {
    pub fn new(
        source: Arc<OpenDynamic>,
        target: Arc<OpenDynamic>,
        inner: Dynamorphism,
        clock_part: Dynamorphism,
    ) -> Result<Self> {
        if inner.functor() != clock_part.functor() {
            return Err(Error::Mismatch(
                "the dynamic part and the clock part use different engine functors".into(),
            ));
        }
        if **inner.source() != *source.alpha || **inner.target() != *target.alpha {
            return Err(Error::Mismatch(
                "inner dynamorphism does not connect the two dynamics".into(),
            ));
        }
        if **clock_part.source() != ***source.clock || **clock_part.target() != ***target.clock {
            return Err(Error::Mismatch("clock part does not connect the two clocks".into()));
        }
        Ok(OpenDynamorphism {
            source,
            target,
            inner,
            clock_part,
        })
    }

    pub fn identity(a: Arc<OpenDynamic>) -> Self {
        let inner = Dynamorphism::identity(a.alpha.clone());
        let clock_part = Dynamorphism::identity(Arc::new(a.clock.as_multi().clone()));
        OpenDynamorphism {
            source: a.clone(),
            target: a,
            inner,
            clock_part,
        }
    }

    pub fn source(&self) -> &Arc<OpenDynamic> {
        &self.source
    }

    pub fn target(&self) -> &Arc<OpenDynamic> {
        &self.target
    }

    pub fn inner(&self) -> &Dynamorphism {
        &self.inner
    }

    pub fn clock_part(&self) -> &Dynamorphism {
        &self.clock_part
    }

    /// Naturality of both parts, then `τ_ΔS ⊙ δ_S ⊆ ε_S ⊙ ρ_S` for every object `S`.
    pub fn check(&self) -> Report {
        let mut report = self.inner.check();
        for v in self.clock_part.check() {
            report.push(Violation {
                location: format!("clock.{}", v.location),
                ..v
            });
        }
        let functor = self.inner.functor();
        for obj in self.source.alpha.engine().objects().iter() {
            let image = functor.map_object(obj).expect("validated");
            let tau = self.target.rho.component(image).expect("validated");
            let left = compose(tau, self.inner.component(obj).expect("validated")).expect("shapes");
            let right = compose(
                self.clock_part.component(obj).expect("validated"),
                self.source.rho.component(obj).expect("validated"),
            )
            .expect("shapes");
            for (u, v) in left.excess(&right).expect("shapes") {
                report.push(
                    Violation::new(Law::LaxSynchronization, format!("objects.{obj}"))
                        .with("S", obj)
                        .with("u", left.domain().element(u))
                        .with("time", left.codomain().element(v)),
                );
            }
        }
        report.canonicalize()
    }
}

pub fn check_open_dynamorphism(m: &OpenDynamorphism) -> Report {
    m.check()
}

/// A candidate solution `(λ, σ)`; `σ` maps clock states to system states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Realization {
    lam: String,
    sigma: BTreeMap<String, String>,
}

impl Realization {
    pub fn new<I, K, V>(lam: impl Into<String>, sigma: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        Realization {
            lam: lam.into(),
            sigma: sigma.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }

    pub fn lam(&self) -> &str {
        &self.lam
    }

    pub fn sigma(&self) -> &BTreeMap<String, String> {
        &self.sigma
    }

    /// `D_σ`, in canonical order.
    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.sigma.keys().map(String::as_str)
    }

    pub fn get(&self, t: &str) -> Option<&str> {
        self.sigma.get(t).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// True when `other` has the same `λ` and agrees with `self` wherever `self` is defined.
    pub fn is_restriction_of(&self, other: &Realization) -> bool {
        self.lam == other.lam && self.sigma.iter().all(|(t, u)| other.sigma.get(t) == Some(u))
    }

    pub fn restrict<'a>(&self, domain: impl IntoIterator<Item = &'a str>) -> Realization {
        let keep: std::collections::BTreeSet<&str> = domain.into_iter().collect();
        Realization {
            lam: self.lam.clone(),
            sigma: self
                .sigma
                .iter()
                .filter(|(t, _)| keep.contains(t.as_str()))
                .map(|(t, u)| (t.clone(), u.clone()))
                .collect(),
        }
    }
}

impl Ord for Realization {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lam
            .cmp(&other.lam)
            .then_with(|| self.sigma.keys().cmp(other.sigma.keys()))
            .then_with(|| self.sigma.values().cmp(other.sigma.values()))
    }
}

impl PartialOrd for Realization {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Realization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.sigma.iter().map(|(t, u)| format!("{t}↦{u}")).collect();
        write!(f, "{}: {{{}}}", self.lam, parts.join(", "))
    }
}

/// Checks the three pointwise realization conditions over every clock state
/// and every arrow, identities included.
pub fn verify_realization(a: &OpenDynamic, r: &Realization) -> Result<Report> {
    let alpha = &a.alpha;
    let clock = &a.clock;
    if !alpha.params().contains(&r.lam) {
        return Err(Error::UnknownParameter(r.lam.clone()));
    }
    for (t, u) in &r.sigma {
        if clock.owner(t).is_none() {
            return Err(Error::UnknownState(t.clone()));
        }
        if alpha.owner(u).is_none() {
            return Err(Error::UnknownState(u.clone()));
        }
    }
    let mut report = Report::new();
    for (t, u) in &r.sigma {
        let dated = a.date(u).expect("ρ is total");
        if dated != t {
            report.push(
                Violation::new(Law::Section, format!("sigma.{t}"))
                    .with("t", t.as_str())
                    .with("state", u.as_str())
                    .with("rho", dated),
            );
        }
        let obj = clock.owner(t).expect("checked");
        if alpha.owner(u) != Some(obj) {
            report.push(
                Violation::new(Law::Typing, format!("sigma.{t}"))
                    .with("object", obj)
                    .with("t", t.as_str())
                    .with("state", u.as_str()),
            );
        }
    }
    for d in alpha.engine().arrows() {
        let d_alpha = alpha.transition(&d.id, &r.lam)?;
        for t in clock.states(&d.dom)?.iter() {
            let next = clock.apply(&d.id, t)?;
            let Some(later) = r.sigma.get(next) else { continue };
            let violation = Violation::new(Law::PastClosure, format!("sigma.{next}"))
                .with("d", &d.id)
                .with("t", t);
            match r.sigma.get(t) {
                None => report.push(violation.with("reason", "undefined_before")),
                Some(now) => {
                    let ok = d_alpha.image_of(now).is_some_and(|img| img.contains(later));
                    if !ok {
                        report.push(
                            violation
                                .with("reason", "not_a_successor")
                                .with("state", now.as_str())
                                .with("next_state", later.as_str()),
                        );
                    }
                }
            }
        }
    }
    Ok(report.canonicalize())
}

/// The dynamorphism formulation: `σ` as a quasi-deterministic dynamorphism
/// `h -> α_λ` with `ρ ⊙ σ ⊆ Id`. Independent of [`verify_realization`].
pub fn check_lax_section(a: &OpenDynamic, r: &Realization) -> bool {
    if !a.alpha.params().contains(&r.lam) {
        return false;
    }
    if r.sigma.keys().any(|t| a.clock.owner(t).is_none()) {
        return false;
    }
    let mut components = BTreeMap::new();
    for (obj, times) in a.clock.state_sets() {
        let Ok(states) = a.alpha.states(obj) else { return false };
        let entries = times.iter().map(|t| (t, r.sigma.get(t).into_iter()));
        match Transition::new(times.clone(), states.clone(), entries) {
            Ok(sigma_s) => components.insert(obj.clone(), sigma_s),
            Err(_) => return false,
        };
    }
    for (obj, sigma_s) in &components {
        debug_assert!(sigma_s.is_quasi_deterministic());
        let rho_s = a.rho.component(obj).expect("validated");
        let back = compose(rho_s, sigma_s).expect("shapes");
        if !subseteq(&back, &Transition::identity(sigma_s.domain().clone())).expect("shapes") {
            return false;
        }
    }
    let theta = BTreeMap::from([(CLOSED_PARAM.to_string(), r.lam.clone())]);
    let h = Arc::new(a.clock.as_multi().clone());
    match Dynamorphism::same_engine(h, a.alpha.clone(), theta, components) {
        Ok(s) => s.check().is_clean(),
        Err(_) => false,
    }
}
