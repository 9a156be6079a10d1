use std::fmt;

use thiserror::Error;

use super::parse::{parse_rational, ParseError};
use super::ratfun::RationalFunction;
use super::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("duplicate parameter {0}")]
    Duplicate(String),
    #[error("{0} is reserved for the term variables")]
    Reserved(String),
    #[error("symbol {symbol} is not a parameter of this field")]
    UnknownSymbol { symbol: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// The rationals extended by a fixed, ordered list of transcendental
/// parameters. Elements are [`RationalFunction`]s in those symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamField {
    params: Vec<Symbol>,
}

impl ParamField {
    pub fn new<I, S>(names: I) -> Result<Self, FieldError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut params: Vec<Symbol> = Vec::new();
        for name in names {
            let s = Symbol::new(name.as_ref());
            if !s.is_parameter() {
                return Err(FieldError::Reserved(s.to_string()));
            }
            if params.contains(&s) {
                return Err(FieldError::Duplicate(s.to_string()));
            }
            params.push(s);
        }
        Ok(ParamField { params })
    }

    /// The smallest field containing every parameter that occurs in `xs`.
    pub fn spanned_by<'a>(xs: impl IntoIterator<Item = &'a RationalFunction>) -> Self {
        let mut set = std::collections::BTreeSet::new();
        for x in xs {
            set.extend(x.vars().into_iter().filter(Symbol::is_parameter));
        }
        ParamField { params: set.into_iter().collect() }
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.params.contains(s)
    }

    /// True if every symbol of `x` is a parameter of this field.
    pub fn owns(&self, x: &RationalFunction) -> bool {
        x.vars().iter().all(|s| self.contains(s))
    }

    /// Parses an element, rejecting symbols outside the field.
    pub fn parse(&self, src: &str) -> Result<RationalFunction, FieldError> {
        let x = parse_rational(src)?;
        if let Some(s) = x.vars().into_iter().find(|s| !self.contains(s)) {
            return Err(FieldError::UnknownSymbol { symbol: s.to_string() });
        }
        Ok(x)
    }
}

impl fmt::Debug for ParamField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(")?;
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_term_variables() {
        assert!(matches!(ParamField::new(["a", "a"]), Err(FieldError::Duplicate(_))));
        assert!(matches!(ParamField::new(["a", "k"]), Err(FieldError::Reserved(_))));
    }

    #[test]
    fn parse_checks_membership() {
        let f = ParamField::new(["a", "b"]).unwrap();
        assert!(f.parse("1+a-b").is_ok());
        assert!(matches!(f.parse("a+c"), Err(FieldError::UnknownSymbol { .. })));
        assert_eq!(format!("{f:?}"), "Q(a, b)");
    }
}
