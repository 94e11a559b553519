//! Integrands: named pure functions over tags.

use std::sync::Arc;

use crate::interval::Interval;
use crate::tag::Tag;

/// Provenance of a declared reference value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Oracle,
    None,
}

/// A reference value for the integral over the integrand's domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub value: f64,
    pub provenance: Provenance,
}

type EvalFn = Arc<dyn Fn(&Tag) -> f64 + Send + Sync>;

/// A function to integrate.
///
/// Evaluation receives the full [`Tag`] so integrands may use the exact
/// rational identity when present (the Dirichlet function does). Evaluation
/// must be deterministic, side-effect free and reentrant; points listed in
/// `singularities` return a declared finite convention value.
#[derive(Clone)]
pub struct Integrand {
    name: String,
    eval: EvalFn,
    domain: Interval,
    reference: Option<Reference>,
    singularities: Vec<f64>,
}

impl std::fmt::Debug for Integrand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Integrand")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("reference", &self.reference)
            .field("singularities", &self.singularities)
            .finish_non_exhaustive()
    }
}

impl Integrand {
    pub fn new(
        name: impl Into<String>,
        domain: Interval,
        eval: impl Fn(&Tag) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            domain,
            reference: None,
            singularities: Vec::new(),
        }
    }

    /// Convenience for integrands that only look at the float value.
    pub fn from_fn(
        name: impl Into<String>,
        domain: Interval,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, domain, move |t: &Tag| f(t.value()))
    }

    pub fn with_reference(mut self, value: f64, provenance: Provenance) -> Self {
        self.reference = Some(Reference { value, provenance });
        self
    }

    pub fn with_singularities(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.singularities = points.into_iter().collect();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn reference(&self) -> Option<Reference> {
        self.reference
    }

    pub fn singularities(&self) -> &[f64] {
        &self.singularities
    }

    pub fn eval(&self, tag: &Tag) -> f64 {
        (self.eval)(tag)
    }

    pub fn eval_at(&self, x: f64) -> f64 {
        (self.eval)(&Tag::new(x))
    }

    /// `α·self + β·other` on the intersection requirement that both share
    /// a domain containing `domain`.
    pub fn linear_combination(
        name: impl Into<String>,
        domain: Interval,
        alpha: f64,
        f: &Integrand,
        beta: f64,
        g: &Integrand,
    ) -> Self {
        let f = f.clone();
        let g = g.clone();
        Integrand::new(name, domain, move |t| {
            alpha * f.eval(t) + beta * g.eval(t)
        })
    }

    /// The pointwise product `self · other`.
    pub fn product(name: impl Into<String>, domain: Interval, f: &Integrand, g: &Integrand) -> Self {
        let f = f.clone();
        let g = g.clone();
        Integrand::new(name, domain, move |t| f.eval(t) * g.eval(t))
    }

    /// `|self|`.
    pub fn abs(&self) -> Self {
        let f = self.clone();
        Integrand::new(format!("|{}|", self.name), self.domain, move |t| {
            f.eval(t).abs()
        })
    }

    /// Same rule restricted to (or viewed on) a different domain.
    pub fn on_domain(&self, domain: Interval) -> Self {
        let mut out = self.clone();
        out.domain = domain;
        out
    }
}
