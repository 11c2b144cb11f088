//! Truncated elements of the universal Novikov ring `Λ₀,nov`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::rational::format_rational;

/// `coefficient · T^λ e^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovTerm {
    pub coefficient: BigRational,
    pub lambda: Rational64,
    pub e: i64,
}

/// A finite sum of terms `c T^λ e^n` with `λ ≥ 0`.
///
/// Terms are sorted by `(λ, n)`, merged, and never zero. The arithmetic
/// operators are exact; [`NovikovScalar::truncate`] drops every term with `λ ≥ E0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NovikovScalar {
    terms: Vec<NovikovTerm>,
}

impl NovikovScalar {
    pub fn zero() -> Self {
        NovikovScalar::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, Rational64::zero(), 0)
    }

    /// `c T^λ e^n`. Panics if `λ < 0`.
    pub fn monomial(c: BigRational, lambda: Rational64, e: i64) -> Self {
        assert!(!lambda.is_negative(), "negative T-exponent");
        Self::from_terms(vec![NovikovTerm { coefficient: c, lambda, e }])
    }

    /// `T^λ`.
    pub fn t_power(lambda: Rational64) -> Self {
        Self::monomial(BigRational::one(), lambda, 0)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = NovikovTerm>) -> Self {
        let mut acc: BTreeMap<(Rational64, i64), BigRational> = BTreeMap::new();
        for t in terms {
            assert!(!t.lambda.is_negative(), "negative T-exponent");
            *acc.entry((t.lambda, t.e)).or_insert_with(BigRational::zero) += t.coefficient;
        }
        NovikovScalar {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((lambda, e), coefficient)| NovikovTerm { coefficient, lambda, e })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[NovikovTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The smallest `λ` with a nonzero term.
    pub fn valuation(&self) -> Option<Rational64> {
        self.terms.first().map(|t| t.lambda)
    }

    /// Keeps the terms with `λ < e0`.
    pub fn truncate(&self, e0: Rational64) -> Self {
        NovikovScalar { terms: self.terms.iter().filter(|t| t.lambda < e0).cloned().collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|t| NovikovTerm { coefficient: &t.coefficient * c, ..t.clone() }))
    }

    /// `a + b` modulo `T^{e0}`.
    pub fn add_mod(&self, other: &Self, e0: Rational64) -> Self {
        (self.clone() + other.clone()).truncate(e0)
    }

    /// `a · b` modulo `T^{e0}`.
    pub fn mul_mod(&self, other: &Self, e0: Rational64) -> Self {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let lambda = a.lambda + b.lambda;
                if lambda < e0 {
                    terms.push(NovikovTerm { coefficient: &a.coefficient * &b.coefficient, lambda, e: a.e + b.e });
                }
            }
        }
        Self::from_terms(terms)
    }
}

impl Add for NovikovScalar {
    type Output = NovikovScalar;

    fn add(self, rhs: NovikovScalar) -> NovikovScalar {
        NovikovScalar::from_terms(self.terms.into_iter().chain(rhs.terms))
    }
}

impl Neg for NovikovScalar {
    type Output = NovikovScalar;

    fn neg(self) -> NovikovScalar {
        self.scale(&-BigRational::one())
    }
}

impl Mul for NovikovScalar {
    type Output = NovikovScalar;

    fn mul(self, rhs: NovikovScalar) -> NovikovScalar {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(NovikovTerm {
                    coefficient: &a.coefficient * &b.coefficient,
                    lambda: a.lambda + b.lambda,
                    e: a.e + b.e,
                });
            }
        }
        NovikovScalar::from_terms(terms)
    }
}

pub(crate) fn format_big(r: &BigRational) -> String {
    if r.denom() == &BigInt::one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for NovikovScalar {
    /// Terms like `3/2 T^1 e^1`, joined by ` + `; `0` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut s = format_big(&t.coefficient);
                if !t.lambda.is_zero() {
                    s.push_str(&format!(" T^{}", format_rational(&t.lambda)));
                }
                if t.e != 0 {
                    s.push_str(&format!(" e^{}", t.e));
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
