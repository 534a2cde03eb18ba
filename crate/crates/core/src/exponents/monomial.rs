//! Monomials l^a q^b M^c N^d C^e L^f with exact rational exponents.

use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

/// Exact rational from integers.
pub fn rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// Twist l.
    L,
    /// Level q.
    Q,
    M,
    N,
    C,
    /// Amplifier length.
    Amp,
}

impl Symbol {
    pub const ALL: [Symbol; 6] = [Symbol::L, Symbol::Q, Symbol::M, Symbol::N, Symbol::C, Symbol::Amp];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::L => "l",
            Symbol::Q => "q",
            Symbol::M => "M",
            Symbol::N => "N",
            Symbol::C => "C",
            Symbol::Amp => "L",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [Q; 6],
}

impl Default for Monomial {
    fn default() -> Self {
        Self::one()
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: std::array::from_fn(|_| Q::zero()) }
    }

    /// sym^e.
    pub fn var(sym: Symbol, e: Q) -> Self {
        let mut m = Self::one();
        m.exps[sym.index()] = e;
        m
    }

    pub fn from_pairs(pairs: &[(Symbol, Q)]) -> Self {
        let mut m = Self::one();
        for (s, e) in pairs {
            m.exps[s.index()] += e;
        }
        m
    }

    pub fn exponent(&self, sym: Symbol) -> &Q {
        &self.exps[sym.index()]
    }

    pub fn pow(&self, e: &Q) -> Self {
        Monomial { exps: std::array::from_fn(|i| &self.exps[i] * e) }
    }

    pub fn recip(&self) -> Self {
        self.pow(&-Q::one())
    }

    /// Replaces every occurrence of `sym` by `value`.
    pub fn substitute(&self, sym: Symbol, value: &Monomial) -> Self {
        let e = self.exps[sym.index()].clone();
        let mut rest = self.clone();
        rest.exps[sym.index()] = Q::zero();
        &rest * &value.pow(&e)
    }

    /// Solves self = other for `sym`; None when sym cancels.
    pub fn solve_for(&self, other: &Monomial, sym: Symbol) -> Option<Monomial> {
        let k = &self.exps[sym.index()] - &other.exps[sym.index()];
        if k.is_zero() {
            return None;
        }
        let mut ratio = other / self;
        ratio.exps[sym.index()] = Q::zero();
        Some(ratio.pow(&k.recip()))
    }

    /// ln of the value at the given positive symbol values.
    pub fn ln_at(&self, values: &[(Symbol, f64)]) -> f64 {
        use num_traits::ToPrimitive;
        values
            .iter()
            .map(|(s, v)| self.exps[s.index()].to_f64().unwrap_or(f64::NAN) * v.ln())
            .sum()
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, o: &Monomial) -> Monomial {
        Monomial { exps: std::array::from_fn(|i| &self.exps[i] + &o.exps[i]) }
    }
}

impl Div for &Monomial {
    type Output = Monomial;
    fn div(self, o: &Monomial) -> Monomial {
        Monomial { exps: std::array::from_fn(|i| &self.exps[i] - &o.exps[i]) }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in Symbol::ALL {
            let e = &self.exps[s.index()];
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{}", s.name())?;
            } else if e.is_integer() && e.is_positive() {
                write!(f, "{}^{}", s.name(), e)?;
            } else {
                write!(f, "{}^({})", s.name(), e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_substitute() {
        // C^2 = q M  →  C = q^{1/2} M^{1/2}
        let lhs = Monomial::var(Symbol::C, rat(2, 1));
        let rhs = Monomial::from_pairs(&[(Symbol::Q, rat(1, 1)), (Symbol::M, rat(1, 1))]);
        let c = lhs.solve_for(&rhs, Symbol::C).unwrap();
        assert_eq!(c, Monomial::from_pairs(&[(Symbol::Q, rat(1, 2)), (Symbol::M, rat(1, 2))]));
        let s = c.substitute(Symbol::M, &Monomial::var(Symbol::Q, rat(1, 1)));
        assert_eq!(s, Monomial::var(Symbol::Q, rat(1, 1)));
        assert_eq!(format!("{c}"), "q^(1/2) M^(1/2)");
    }
}
