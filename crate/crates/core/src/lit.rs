//! Variables and literals.
//!
//! Variables are 0-based internally. The DIMACS conversion functions map variable `v` to the
//! 1-based index `v + 1`.

use std::fmt;
use std::ops::Not;

/// A propositional variable.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn from_index(index: usize) -> Var {
        Var(index as u32)
    }

    /// Variable with the given 1-based DIMACS index.
    pub fn from_dimacs(number: u32) -> Var {
        debug_assert!(number > 0);
        Var(number - 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn to_dimacs(self) -> u32 {
        self.0 + 1
    }

    pub fn lit(self, polarity: bool) -> Lit {
        Lit::new(self, polarity)
    }
}

/// A literal: a variable together with a polarity.
///
/// Encoded as `2 * var + negated` so literals can index watch lists directly.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    /// `polarity == true` is the positive occurrence.
    pub fn new(var: Var, polarity: bool) -> Lit {
        Lit(var.0 << 1 | (!polarity) as u32)
    }

    pub fn positive(var: Var) -> Lit {
        Lit::new(var, true)
    }

    pub fn negative(var: Var) -> Lit {
        Lit::new(var, false)
    }

    /// Parses a non-zero signed DIMACS literal.
    pub fn from_dimacs(number: i32) -> Lit {
        debug_assert!(number != 0);
        Lit::new(Var::from_dimacs(number.unsigned_abs()), number > 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().to_dimacs() as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// The code used for indexing per-literal tables.
    pub fn code(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dimacs_mapping() {
        let l = Lit::from_dimacs(-3);
        assert_eq!(l.var(), Var::from_index(2));
        assert!(!l.is_positive());
        assert_eq!(l.to_dimacs(), -3);
        assert_eq!((!l).to_dimacs(), 3);
    }

    proptest! {
        #[test]
        fn negation_is_an_involution(n in 1i32..100_000, pos in any::<bool>()) {
            let l = Lit::from_dimacs(if pos { n } else { -n });
            prop_assert_eq!(!!l, l);
            prop_assert_ne!(!l, l);
            prop_assert_eq!((!l).var(), l.var());
        }
    }
}
