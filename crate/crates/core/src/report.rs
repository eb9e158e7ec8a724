//! Validation reports: one record per violated law, with named witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    // engines
    ArrowShape,
    IdentityShape,
    MissingComposite,
    UnexpectedComposite,
    CompositeShape,
    IdentityNeutral,
    Associativity,
    // functors
    FunctorShape,
    FunctorIdentity,
    FunctorComposition,
    // dynamics
    DynamicShape,
    Disjunctivity,
    LaxComposition,
    LaxIdentity,
    Determinism,
    ClockFunctoriality,
    // dynamorphisms
    LaxNaturality,
    LaxSynchronization,
    // realizations
    Section,
    Typing,
    PastClosure,
}

impl Law {
    pub fn name(self) -> &'static str {
        match self {
            Law::ArrowShape => "arrow_shape",
            Law::IdentityShape => "identity_shape",
            Law::MissingComposite => "missing_composite",
            Law::UnexpectedComposite => "unexpected_composite",
            Law::CompositeShape => "composite_shape",
            Law::IdentityNeutral => "identity_neutral",
            Law::Associativity => "associativity",
            Law::FunctorShape => "functor_shape",
            Law::FunctorIdentity => "functor_identity",
            Law::FunctorComposition => "functor_composition",
            Law::DynamicShape => "dynamic_shape",
            Law::Disjunctivity => "disjunctivity",
            Law::LaxComposition => "lax_composition",
            Law::LaxIdentity => "lax_identity",
            Law::Determinism => "determinism",
            Law::ClockFunctoriality => "clock_functoriality",
            Law::LaxNaturality => "lax_naturality",
            Law::LaxSynchronization => "lax_synchronization",
            Law::Section => "section",
            Law::Typing => "typing",
            Law::PastClosure => "past_closure",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub law: Law,
    pub location: String,
    /// Ordered `(role, value)` pairs, e.g. `("u", "a")`.
    pub witnesses: Vec<(String, String)>,
}

impl Violation {
    pub fn new(law: Law, location: impl Into<String>) -> Self {
        Violation {
            law,
            location: location.into(),
            witnesses: Vec::new(),
        }
    }

    pub fn with(mut self, role: &str, value: impl Into<String>) -> Self {
        self.witnesses.push((role.to_string(), value.into()));
        self
    }

    pub fn witness(&self, role: &str) -> Option<&str> {
        self.witnesses.iter().find(|(r, _)| r == role).map(|(_, v)| v.as_str())
    }

    /// True when every `(role, value)` pair in `expected` is among the witnesses.
    pub fn matches(&self, law: Law, expected: &[(&str, &str)]) -> bool {
        self.law == law && expected.iter().all(|(role, value)| self.witness(role) == Some(*value))
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.law, self.location)?;
        if !self.witnesses.is_empty() {
            let parts: Vec<String> = self.witnesses.iter().map(|(r, v)| format!("{r}={v}")).collect();
            write!(f, " [{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

/// A canonically ordered set of violations; empty means the checked object is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, violation: Violation) {
        self.violations.push(violation);
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Violation> {
        self.violations.iter()
    }

    pub fn of_law(&self, law: Law) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.law == law)
    }

    pub fn contains(&self, law: Law, expected: &[(&str, &str)]) -> bool {
        self.violations.iter().any(|v| v.matches(law, expected))
    }

    /// Sorts and deduplicates so that equal inputs give byte-identical output.
    pub fn canonicalize(mut self) -> Self {
        self.violations.sort();
        self.violations.dedup();
        self
    }

    pub fn into_result<T>(self, what: &'static str, value: T) -> crate::Result<T> {
        if self.is_clean() {
            Ok(value)
        } else {
            Err(crate::Error::invalid(what, self.canonicalize()))
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.violations.len() {
            0 => f.write_str("0 violations"),
            1 => write!(f, "1 violation: {}", self.violations[0]),
            n => {
                write!(f, "{n} violations")?;
                for v in &self.violations {
                    write!(f, "\n  {v}")?;
                }
                Ok(())
            }
        }
    }
}

impl IntoIterator for Report {
    type Item = Violation;
    type IntoIter = std::vec::IntoIter<Violation>;

    fn into_iter(self) -> Self::IntoIter {
        self.violations.into_iter()
    }
}

impl<'a> IntoIterator for &'a Report {
    type Item = &'a Violation;
    type IntoIter = std::slice::Iter<'a, Violation>;

    fn into_iter(self) -> Self::IntoIter {
        self.violations.iter()
    }
}
