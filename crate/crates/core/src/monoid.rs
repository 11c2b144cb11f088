//! The discrete monoid of disk classes.
//!
//! Classes live in a free commutative monoid on user-declared generators.
//! Each generator carries a strictly positive rational energy and an integer
//! Maslov index; both extend additively to the whole monoid.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::MonoidError;
use crate::rational::{format_rational, parse_rational};

/// A generator of the class monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub energy: Rational64,
    pub maslov: i64,
}

/// A class, stored as its exponent vector over the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassElement(Vec<u32>);

impl ClassElement {
    pub fn zero(rank: usize) -> Self {
        ClassElement(vec![0; rank])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        ClassElement(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &ClassElement) -> ClassElement {
        debug_assert_eq!(self.rank(), other.rank());
        ClassElement(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if `other` divides `self` componentwise.
    pub fn checked_sub(&self, other: &ClassElement) -> Option<ClassElement> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ClassElement)
    }

    pub fn le(&self, other: &ClassElement) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All `b` with `b <= self` componentwise, in lexicographic order.
    pub fn divisors(&self) -> Vec<ClassElement> {
        let mut out = vec![Vec::with_capacity(self.rank())];
        for &bound in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=bound).map(move |e| {
                        let mut v = prefix.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(ClassElement).collect()
    }

    /// Token used by tree encodings: exponents joined by `.`.
    pub fn token(&self) -> String {
        self.0
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Free commutative monoid with energy and Maslov homomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMonoid {
    generators: Vec<Generator>,
}

impl ClassMonoid {
    pub fn new(generators: Vec<Generator>) -> Result<Self, MonoidError> {
        let mut names = BTreeSet::new();
        for g in &generators {
            if g.name.is_empty() {
                return Err(MonoidError::EmptyName);
            }
            if !names.insert(g.name.clone()) {
                return Err(MonoidError::DuplicateGenerator(g.name.clone()));
            }
            if g.energy.is_negative() {
                return Err(MonoidError::NegativeEnergy(g.name.clone()));
            }
            if g.energy.is_zero() {
                return Err(MonoidError::ZeroEnergyGenerator(g.name.clone()));
            }
        }
        Ok(ClassMonoid { generators })
    }

    /// One generator `b` with the given energy and Maslov index.
    pub fn single(name: &str, energy: Rational64, maslov: i64) -> Self {
        ClassMonoid::new(vec![Generator {
            name: name.to_string(),
            energy,
            maslov,
        }])
        .expect("single generator with positive energy")
    }

    /// The unit-energy, Maslov-2 generator used throughout the toy models.
    pub fn unit() -> Self {
        ClassMonoid::single("b", Rational64::from_integer(1), 2)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn zero(&self) -> ClassElement {
        ClassElement::zero(self.rank())
    }

    pub fn generator(&self, index: usize) -> ClassElement {
        let mut v = vec![0; self.rank()];
        v[index] = 1;
        ClassElement(v)
    }

    /// `n` times generator `index`.
    pub fn multiple(&self, index: usize, n: u32) -> ClassElement {
        let mut v = vec![0; self.rank()];
        v[index] = n;
        ClassElement(v)
    }

    pub fn element(&self, exponents: Vec<u32>) -> Result<ClassElement, MonoidError> {
        if exponents.len() != self.rank() {
            return Err(MonoidError::RankMismatch {
                expected: self.rank(),
                found: exponents.len(),
            });
        }
        Ok(ClassElement(exponents))
    }

    pub fn energy(&self, beta: &ClassElement) -> Rational64 {
        self.generators
            .iter()
            .zip(beta.exponents())
            .map(|(g, &e)| g.energy * Rational64::from_integer(e as i64))
            .sum()
    }

    pub fn maslov(&self, beta: &ClassElement) -> i64 {
        self.generators
            .iter()
            .zip(beta.exponents())
            .map(|(g, &e)| g.maslov * e as i64)
            .sum()
    }

    /// Orders classes by energy, then by exponent vector.
    pub fn cmp_classes(&self, a: &ClassElement, b: &ClassElement) -> Ordering {
        self.energy(a)
            .cmp(&self.energy(b))
            .then_with(|| a.cmp(b))
    }

    /// Every class of energy at most `cutoff`, sorted by (energy, exponents).
    pub fn classes_up_to_energy(&self, cutoff: Rational64) -> Result<Vec<ClassElement>, MonoidError> {
        if cutoff.is_negative() {
            return Err(MonoidError::NegativeCutoff(format_rational(&cutoff)));
        }
        let mut out = Vec::new();
        let mut current = vec![0u32; self.rank()];
        self.collect_classes(0, Rational64::zero(), cutoff, &mut current, &mut out);
        out.sort_by(|a, b| self.cmp_classes(a, b));
        Ok(out)
    }

    fn collect_classes(
        &self,
        index: usize,
        used: Rational64,
        cutoff: Rational64,
        current: &mut Vec<u32>,
        out: &mut Vec<ClassElement>,
    ) {
        if index == self.rank() {
            out.push(ClassElement(current.clone()));
            return;
        }
        let energy = self.generators[index].energy;
        let mut n = 0u32;
        let mut total = used;
        while total <= cutoff {
            current[index] = n;
            self.collect_classes(index + 1, total, cutoff, current, out);
            n += 1;
            total += energy;
        }
        current[index] = 0;
    }

    /// Ordered pairs `(b1, b2)` with `b1 + b2 = beta`.
    pub fn decompositions(&self, beta: &ClassElement) -> Vec<(ClassElement, ClassElement)> {
        let mut parts = beta.divisors();
        parts.sort_by(|a, b| self.cmp_classes(a, b));
        parts
            .into_iter()
            .map(|b1| {
                let b2 = beta.checked_sub(&b1).expect("divisor");
                (b1, b2)
            })
            .collect()
    }

    /// Human-readable form such as `0`, `b`, `2a+b`.
    pub fn display(&self, beta: &ClassElement) -> String {
        if beta.is_zero() {
            return "0".to_string();
        }
        self.generators
            .iter()
            .zip(beta.exponents())
            .filter(|(_, &e)| e > 0)
            .map(|(g, &e)| {
                if e == 1 {
                    g.name.clone()
                } else {
                    format!("{e}{}", g.name)
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn to_file(&self) -> MonoidFile {
        MonoidFile {
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorRecord {
                    name: g.name.clone(),
                    energy: format_rational(&g.energy),
                    maslov: g.maslov,
                })
                .collect(),
        }
    }

    pub fn from_file(file: &MonoidFile) -> Result<Self, MonoidError> {
        let generators = file
            .generators
            .iter()
            .enumerate()
            .map(|(i, rec)| {
                let energy = parse_rational(&rec.energy).map_err(|reason| MonoidError::BadRecord {
                    index: i,
                    name: rec.name.clone(),
                    reason,
                })?;
                Ok(Generator {
                    name: rec.name.clone(),
                    energy,
                    maslov: rec.maslov,
                })
            })
            .collect::<Result<Vec<_>, MonoidError>>()?;
        ClassMonoid::new(generators)
    }

    pub fn from_json(text: &str) -> Result<Self, MonoidError> {
        let file: MonoidFile =
            serde_json::from_str(text).map_err(|e| MonoidError::Parse(e.to_string()))?;
        ClassMonoid::from_file(&file)
    }
}

/// On-disk monoid description: `{"generators": [{"name", "energy": "p/q", "maslov"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonoidFile {
    pub generators: Vec<GeneratorRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub name: String,
    pub energy: String,
    pub maslov: i64,
}

/// Moduli index `(k, ℓ, β)`: `k + 1` boundary and `ℓ` interior marked points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple {
    pub k: usize,
    pub ell: usize,
    pub beta: ClassElement,
}

impl Triple {
    pub fn new(k: usize, ell: usize, beta: ClassElement) -> Self {
        Triple { k, ell, beta }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k, self.ell, self.beta.token())
    }
}

/// The induction order: energy first, then `ℓ`, then `k`.
pub fn triple_lt(t1: &Triple, t2: &Triple, monoid: &ClassMonoid) -> bool {
    let (e1, e2) = (monoid.energy(&t1.beta), monoid.energy(&t2.beta));
    e1 < e2 || (e1 == e2 && (t1.ell < t2.ell || (t1.ell == t2.ell && t1.k < t2.k)))
}

/// A total refinement of [`triple_lt`], used to fix processing order.
pub fn triple_cmp(t1: &Triple, t2: &Triple, monoid: &ClassMonoid) -> Ordering {
    monoid
        .energy(&t1.beta)
        .cmp(&monoid.energy(&t2.beta))
        .then(t1.ell.cmp(&t2.ell))
        .then(t1.k.cmp(&t2.k))
        .then_with(|| t1.beta.cmp(&t2.beta))
}

/// Decides which moduli indices are treated as nonempty.
pub trait Activity: Send + Sync {
    fn is_active(&self, monoid: &ClassMonoid, triple: &Triple) -> bool;
}

/// Energy-zero indices need `k + 1 + 2ℓ >= 3`; everything else is active.
#[derive(Clone, Copy, Debug, Default)]
pub struct DefaultActivity;

impl Activity for DefaultActivity {
    fn is_active(&self, _monoid: &ClassMonoid, t: &Triple) -> bool {
        !t.beta.is_zero() || t.k + 1 + 2 * t.ell >= 3
    }
}

impl<F> Activity for F
where
    F: Fn(&Triple) -> bool + Send + Sync,
{
    fn is_active(&self, monoid: &ClassMonoid, t: &Triple) -> bool {
        DefaultActivity.is_active(monoid, t) && self(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn two_gen() -> ClassMonoid {
        ClassMonoid::new(vec![
            Generator { name: "a".into(), energy: r(1, 1), maslov: 2 },
            Generator { name: "b".into(), energy: r(3, 2), maslov: 0 },
        ])
        .unwrap()
    }

    #[test]
    fn single_generator_filter() {
        let m = ClassMonoid::unit();
        let got = m.classes_up_to_energy(r(5, 2)).unwrap();
        assert_eq!(got, vec![m.zero(), m.multiple(0, 1), m.multiple(0, 2)]);
    }

    #[test]
    fn zero_cutoff_is_unit_only() {
        assert_eq!(two_gen().classes_up_to_energy(r(0, 1)).unwrap(), vec![two_gen().zero()]);
    }

    #[test]
    fn two_generator_filter() {
        let m = two_gen();
        let got = m.classes_up_to_energy(r(5, 2)).unwrap();
        let names: Vec<_> = got.iter().map(|b| m.display(b)).collect();
        assert_eq!(names, vec!["0", "a", "b", "2a", "a+b"]);
    }

    #[test]
    fn rejects_zero_energy_generator() {
        let err = ClassMonoid::new(vec![Generator { name: "z".into(), energy: r(0, 1), maslov: 0 }]);
        assert!(matches!(err, Err(MonoidError::ZeroEnergyGenerator(_))));
    }

    #[test]
    fn rejects_negative_cutoff() {
        assert!(ClassMonoid::unit().classes_up_to_energy(r(-1, 2)).is_err());
    }

    #[test]
    fn order_examples() {
        let m = ClassMonoid::unit();
        let b = m.generator(0);
        let b2 = m.multiple(0, 2);
        assert!(triple_lt(&Triple::new(2, 0, b.clone()), &Triple::new(0, 0, b2), &m));
        assert!(triple_lt(&Triple::new(3, 0, b.clone()), &Triple::new(0, 1, b.clone()), &m));
        let t = Triple::new(1, 1, b);
        assert!(!triple_lt(&t, &t, &m));
    }

    #[test]
    fn decompositions_are_ordered_pairs() {
        let m = ClassMonoid::unit();
        let d = m.decompositions(&m.multiple(0, 2));
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|(x, y)| x.add(y) == m.multiple(0, 2)));
    }

    #[test]
    fn monoid_file_round_trip() {
        let m = two_gen();
        let text = serde_json::to_string(&m.to_file()).unwrap();
        assert_eq!(ClassMonoid::from_json(&text).unwrap(), m);
    }

    #[test]
    fn default_activity() {
        let m = ClassMonoid::unit();
        assert!(!DefaultActivity.is_active(&m, &Triple::new(1, 0, m.zero())));
        assert!(DefaultActivity.is_active(&m, &Triple::new(2, 0, m.zero())));
        assert!(DefaultActivity.is_active(&m, &Triple::new(0, 1, m.zero())));
        assert!(DefaultActivity.is_active(&m, &Triple::new(0, 0, m.generator(0))));
    }
}
