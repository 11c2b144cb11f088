//! Operation tables known to satisfy the relations.
//!
//! The starting point is a small associative DGA. Conjugating any solution by
//! a linear gauge transformation `G = id + s·T^{E(γ)} e^{μ(γ)/2} f` gives a
//! new solution with operations in positive energy.

use std::collections::BTreeMap;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use super::table::{tuples, EGrading, GradedBasis, OperationTable};
use crate::error::NovikovError;
use crate::monoid::{ClassElement, ClassMonoid};

/// A linear map on the basis as sparse columns.
pub type LinearMap = BTreeMap<usize, BTreeMap<usize, BigRational>>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// One generator `b` with `E = 1`, `μ = 2`.
pub fn disk_monoid() -> ClassMonoid {
    ClassMonoid::single("b", Rational64::from_integer(1), 2)
}

/// Basis `1, y, w` in degrees `0, 1, 2`, with `m₁ = d`, `dy = w`, and
/// `m₂(a, b) = (−1)^{deg a} ab` for the product in which `1` is the unit and
/// every other product vanishes.
pub fn dga_fixture(curvature: bool) -> OperationTable {
    let basis = GradedBasis::new(vec![("1".into(), 0), ("y".into(), 1), ("w".into(), 2)]).expect("basis");
    let m = disk_monoid();
    let zero = m.zero();
    let mut tab = OperationTable::new(m, basis, curvature, EGrading::Half);
    tab.set_labels(&zero, &["y"], "w", q(1)).expect("differential");
    for (x, deg) in [("1", 0), ("y", 1), ("w", 2)] {
        tab.set_labels(&zero, &["1", x], x, q(1)).expect("left unit");
        if x != "1" {
            tab.set_labels(&zero, &[x, "1"], x, q(if deg % 2 == 0 { 1 } else { -1 })).expect("right unit");
        }
    }
    tab
}

/// The DGA with curvature `m_{0,b} = 1`, which is central and closed.
pub fn curved_fixture() -> OperationTable {
    let mut tab = dga_fixture(true);
    let b = tab.monoid().generator(0);
    tab.set_labels(&b, &[], "1", q(1)).expect("curvature term");
    tab
}

/// The map `w ↦ 1` on the DGA basis.
pub fn unit_gauge() -> LinearMap {
    let mut f = LinearMap::new();
    f.entry(2).or_default().insert(0, q(1));
    f
}

fn apply(f: &LinearMap, v: &BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigRational> {
    let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (i, c) in v {
        if let Some(col) = f.get(i) {
            for (j, d) in col {
                *out.entry(*j).or_insert_with(BigRational::zero) += c * d;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `f⁰, f¹, …` up to the last nonzero power. Fails if `f` is not nilpotent.
fn powers(f: &LinearMap, n: usize) -> Result<Vec<LinearMap>, NovikovError> {
    let identity: LinearMap = (0..n).map(|i| (i, BTreeMap::from([(i, q(1))]))).collect();
    let mut out = vec![identity];
    loop {
        let last = out.last().expect("nonempty");
        let next: LinearMap = last
            .iter()
            .map(|(&i, col)| (i, apply(f, col)))
            .filter(|(_, col)| !col.is_empty())
            .collect();
        if next.is_empty() {
            return Ok(out);
        }
        if out.len() > n {
            return Err(NovikovError::Parse("gauge map is not nilpotent".into()));
        }
        out.push(next);
    }
}

fn times(beta: &ClassElement, gamma: &ClassElement, n: usize) -> ClassElement {
    (0..n).fold(beta.clone(), |acc, _| acc.add(gamma))
}

/// `m′_k = G ∘ m_k ∘ (G⁻¹)^{⊗k}` for `G = id + s·T^{E(γ)} e^{μ(γ)/2} f` with `f` nilpotent.
///
/// Every `m′_{k,β}` is finite, so the result is exact.
pub fn gauge_conjugate(
    tab: &OperationTable,
    f: &LinearMap,
    gamma: &ClassElement,
    s: &BigRational,
) -> Result<OperationTable, NovikovError> {
    let n = tab.basis().len();
    let pows = powers(f, n)?;
    let mut out = OperationTable::new(tab.monoid().clone(), tab.basis().clone(), tab.curvature(), tab.e_grading());
    for ((k, beta), cell) in tab.cells() {
        for inputs in tuples(n, *k) {
            // Choose a power of f for each input.
            for choice in tuples(pows.len(), *k) {
                let mut expanded: Vec<(Vec<usize>, BigRational)> = vec![(Vec::new(), q(1))];
                for (&a, &p) in inputs.iter().zip(&choice) {
                    let Some(col) = pows[p].get(&a) else {
                        expanded.clear();
                        break;
                    };
                    expanded = expanded
                        .into_iter()
                        .flat_map(|(prefix, c)| {
                            col.iter().map(move |(&b, d)| {
                                let mut p = prefix.clone();
                                p.push(b);
                                (p, &c * d)
                            })
                        })
                        .collect();
                }
                let used: usize = choice.iter().sum();
                let sign = if used % 2 == 0 { q(1) } else { q(-1) };
                let mut value: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (args, c) in &expanded {
                    if let Some(row) = cell.get(args) {
                        for (o, d) in row {
                            *value.entry(*o).or_insert_with(BigRational::zero) += c * d;
                        }
                    }
                }
                value.retain(|_, c| !c.is_zero());
                for (outer, image) in [(0usize, value.clone()), (1, apply(f, &value))] {
                    let total = used + outer;
                    let target = times(beta, gamma, total);
                    let factor = &sign * num_traits::pow(s.clone(), total);
                    for (o, c) in image {
                        out.add(*k, &target, &inputs, o, &factor * c)?;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The DGA conjugated by `id + T e f` with `f: w ↦ 1`.
pub fn gauge_fixture() -> OperationTable {
    let tab = dga_fixture(false);
    let b = tab.monoid().generator(0);
    gauge_conjugate(&tab, &unit_gauge(), &b, &BigRational::one()).expect("nilpotent gauge")
}

/// The curved DGA conjugated by `id + ½ T e f` with `f: w ↦ 1`.
pub fn curved_gauge_fixture() -> OperationTable {
    let tab = curved_fixture();
    let b = tab.monoid().generator(0);
    gauge_conjugate(&tab, &unit_gauge(), &b, &BigRational::new(1.into(), 2.into())).expect("nilpotent gauge")
}

/// Named fixtures that satisfy the relations.
pub fn consistent_fixtures() -> Vec<(&'static str, OperationTable)> {
    vec![
        ("dga", dga_fixture(false)),
        ("gauge", gauge_fixture()),
        ("curved", curved_fixture()),
        ("curved-gauge", curved_gauge_fixture()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_adds_positive_energy_terms() {
        let g = gauge_fixture();
        let b = g.monoid().generator(0);
        // m′₁(y) = G(d(y)) = w + T e·1.
        assert_eq!(g.coefficient(1, &b, &[1], 0), q(1));
        assert!(g.cells().keys().any(|(k, beta)| *k == 2 && beta == &b));
        assert!(g.cells().keys().all(|(_, beta)| beta.exponents()[0] <= 3));
    }

    #[test]
    fn zero_gauge_is_identity() {
        let tab = dga_fixture(false);
        let b = tab.monoid().generator(0);
        let same = gauge_conjugate(&tab, &unit_gauge(), &b, &BigRational::zero()).unwrap();
        assert_eq!(same, tab);
    }

    #[test]
    fn non_nilpotent_gauge_is_rejected() {
        let tab = dga_fixture(false);
        let mut f = LinearMap::new();
        f.entry(1).or_default().insert(1, q(1));
        assert!(gauge_conjugate(&tab, &f, &tab.monoid().zero(), &q(1)).is_err());
    }
}
