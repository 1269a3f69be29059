use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::objective::Objective;
use crate::rational::Rational;
use crate::transform::WeightTransform;

/// Finite law of a window function over paths. Only positive masses are
/// stored; a well-formed distribution has total mass one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValueDistribution {
    masses: BTreeMap<Rational, Rational>,
}

impl ValueDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(value: Rational) -> Self {
        let mut d = Self::new();
        d.add(value, Rational::one());
        d
    }

    /// Adds `mass` at `value`; zero masses are ignored.
    pub fn add(&mut self, value: Rational, mass: Rational) {
        if mass.is_zero() {
            return;
        }
        let slot = self.masses.entry(value.clone()).or_insert_with(Rational::zero);
        *slot += mass;
        if slot.is_zero() {
            self.masses.remove(&value);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.masses.iter()
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total_mass(&self) -> Rational {
        self.masses.values().sum()
    }

    pub fn expectation(&self) -> Rational {
        self.masses.iter().map(|(v, p)| v * p).sum()
    }

    /// Mass of all values `>= threshold`.
    pub fn tail(&self, threshold: &Rational) -> Rational {
        self.masses.range(threshold.clone()..).map(|(_, p)| p).sum()
    }

    /// Pushes every value through `f`, merging collisions.
    pub fn map_values(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let mut out = Self::new();
        for (v, p) in &self.masses {
            out.add(f(v), p.clone());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Bscc,
    Mec,
}

impl ComponentKind {
    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::Bscc => "bscc",
            ComponentKind::Mec => "mec",
        }
    }
}

/// Value of one bottom component of the decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentValue {
    pub kind: ComponentKind,
    pub states: Vec<usize>,
    /// Probability of reaching the component (chains only).
    pub reach_probability: Option<Rational>,
    pub value: Rational,
}

/// Outcome of an analysis, in user weight units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisResult {
    pub objective: Objective,
    pub value: Rational,
    pub distribution: Option<ValueDistribution>,
    pub components: Vec<ComponentValue>,
    pub transform: WeightTransform,
    pub notes: Vec<String>,
}

impl AnalysisResult {
    /// Maps every reported value through `f` (used for cost negation).
    pub fn map_values(mut self, f: impl Fn(&Rational) -> Rational) -> Self {
        self.value = f(&self.value);
        self.distribution = self.distribution.map(|d| d.map_values(&f));
        for c in &mut self.components {
            c.value = f(&c.value);
        }
        self
    }
}
