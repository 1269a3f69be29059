use std::fmt;

use crate::error::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowKind {
    Fixed,
    DirectFixed,
    Bounded,
    DirectBounded,
}

impl WindowKind {
    pub fn needs_window(self) -> bool {
        matches!(self, WindowKind::Fixed | WindowKind::DirectFixed)
    }

    pub fn name(self) -> &'static str {
        match self {
            WindowKind::Fixed => "fixwmp",
            WindowKind::DirectFixed => "dirfixwmp",
            WindowKind::Bounded => "bwmp",
            WindowKind::DirectBounded => "dirbwmp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Payoff,
    Cost,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Payoff => "payoff",
            Flavor::Cost => "cost",
        }
    }
}

/// Which window function to analyze. `window` is present iff the kind is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Objective {
    kind: WindowKind,
    window: Option<u32>,
    flavor: Flavor,
}

impl Objective {
    pub fn new(kind: WindowKind, window: Option<u32>, flavor: Flavor) -> Result<Self, ModelError> {
        match (kind.needs_window(), window) {
            (true, None) => Err(ModelError::MissingWindow(kind.name())),
            (true, Some(0)) => Err(ModelError::ZeroWindow),
            (false, Some(_)) => Err(ModelError::UnexpectedWindow(kind.name())),
            _ => Ok(Objective { kind, window, flavor }),
        }
    }

    pub fn fixed(l_max: u32) -> Result<Self, ModelError> {
        Self::new(WindowKind::Fixed, Some(l_max), Flavor::Payoff)
    }

    pub fn direct_fixed(l_max: u32) -> Result<Self, ModelError> {
        Self::new(WindowKind::DirectFixed, Some(l_max), Flavor::Payoff)
    }

    pub fn bounded() -> Self {
        Objective { kind: WindowKind::Bounded, window: None, flavor: Flavor::Payoff }
    }

    pub fn direct_bounded() -> Self {
        Objective { kind: WindowKind::DirectBounded, window: None, flavor: Flavor::Payoff }
    }

    pub fn with_flavor(self, flavor: Flavor) -> Self {
        Objective { flavor, ..self }
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn window(&self) -> Option<u32> {
        self.window
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if let Some(l) = self.window {
            write!(f, "(l_max={l})")?;
        }
        write!(f, " {}", self.flavor.name())
    }
}
