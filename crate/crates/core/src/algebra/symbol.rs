use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A variable name.
///
/// Symbols are totally ordered: `k` first, then `n`, then every other name in
/// byte order. Monomial orders and canonical forms throughout the crate use
/// this order, so `k` is always the most significant variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn k() -> Self {
        Symbol::new("k")
    }

    pub fn n() -> Self {
        Symbol::new("n")
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_k(&self) -> bool {
        &*self.0 == "k"
    }

    pub fn is_n(&self) -> bool {
        &*self.0 == "n"
    }

    /// True for anything that is not one of the two term variables.
    pub fn is_parameter(&self) -> bool {
        !self.is_k() && !self.is_n()
    }

    fn rank(&self) -> u8 {
        match &*self.0 {
            "k" => 0,
            "n" => 1,
            _ => 2,
        }
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.0.as_bytes().cmp(other.0.as_bytes()))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}
