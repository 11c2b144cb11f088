//! The filtered A∞ relation, evaluated term by term from the boundary calculus.
//!
//! For each `(k, β)` the defect is `Σ ± m_{k₁,β₁}(x₁,…,m_{k₂,β₂}(x_i,…),…,x_k)`
//! over the raw boundary splits of `(k, 0, β)`, with the sign carried by the
//! split's boundary term.

use std::collections::BTreeMap;

use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scalar::{format_big, NovikovScalar};
use super::table::{tuples, OperationTable};
use crate::corner::{boundary_terms_raw, SignConvention};
use crate::error::NovikovError;
use crate::monoid::ClassElement;
use crate::rational::format_rational;

/// `(k, β, inputs, output)` to the rational coefficient of the `(k, β)` relation.
pub type DefectCells = BTreeMap<(usize, ClassElement, Vec<usize>, usize), BigRational>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectCell {
    pub k: usize,
    pub beta: Vec<u32>,
    pub inputs: Vec<String>,
    pub output: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectEntry {
    pub k: usize,
    pub inputs: Vec<String>,
    pub output: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectReport {
    pub e0: String,
    pub curvature: bool,
    pub arities: Vec<usize>,
    /// Nonzero Novikov coefficients of the assembled relation.
    pub entries: Vec<DefectEntry>,
    /// Nonzero coefficients per `(k, β)`.
    pub cells: Vec<DefectCell>,
    pub passed: bool,
}

/// Arities whose relation can involve entries of the table.
pub fn relation_arities(tab: &OperationTable) -> Vec<usize> {
    let top = (2 * tab.max_arity()).saturating_sub(1).max(1);
    ((if tab.curvature() { 0 } else { 1 })..=top).collect()
}

/// Nonzero coefficients of every relation `(k, β)` with `E(β) < e0`.
pub fn defect_cells(tab: &OperationTable, e0: Rational64, convention: SignConvention) -> DefectCells {
    let monoid = tab.monoid();
    let classes: Vec<ClassElement> = monoid
        .classes_up_to_energy(e0)
        .unwrap_or_default()
        .into_iter()
        .filter(|b| monoid.energy(b) < e0)
        .collect();
    let work: Vec<(usize, ClassElement)> =
        relation_arities(tab).into_iter().flat_map(|k| classes.iter().map(move |b| (k, b.clone()))).collect();
    work.par_iter().map(|(k, beta)| relation_cell(tab, *k, beta, convention)).reduce(BTreeMap::new, |mut a, b| {
        a.extend(b);
        a
    })
}

fn relation_cell(tab: &OperationTable, k: usize, beta: &ClassElement, convention: SignConvention) -> DefectCells {
    let basis = tab.basis();
    let terms = boundary_terms_raw(k, 0, beta, tab.monoid(), convention);
    let mut out = DefectCells::new();
    for inputs in tuples(basis.len(), k) {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for term in &terms {
            let s = term.split.as_ref().expect("split term");
            let (before, rest) = inputs.split_at(s.i - 1);
            let (inner, after) = rest.split_at(s.k2);
            let Some(child) = tab.apply(s.k2, &s.beta2, inner) else {
                continue;
            };
            for (&b, c) in child {
                let mut outer = before.to_vec();
                outer.push(b);
                outer.extend_from_slice(after);
                let Some(parent) = tab.apply(s.k1, &s.beta1, &outer) else {
                    continue;
                };
                let degrees: Vec<i64> = outer.iter().map(|&j| basis.shifted(j)).collect();
                let sign = BigRational::from_integer(term.koszul.sign(&degrees).into());
                for (&o, d) in parent {
                    *acc.entry(o).or_insert_with(BigRational::zero) += &sign * c * d;
                }
            }
        }
        for (o, c) in acc {
            if !c.is_zero() {
                out.insert((k, beta.clone(), inputs.clone(), o), c);
            }
        }
    }
    out
}

/// Evaluates the filtered A∞ relations modulo `T^{e0}` with the default sign convention.
pub fn ainf_defect(tab: &OperationTable, e0: Rational64) -> Result<DefectReport, NovikovError> {
    ainf_defect_with(tab, e0, SignConvention::default())
}

pub fn ainf_defect_with(
    tab: &OperationTable,
    e0: Rational64,
    convention: SignConvention,
) -> Result<DefectReport, NovikovError> {
    let cells = defect_cells(tab, e0, convention);
    let basis = tab.basis();
    let labels = |v: &[usize]| v.iter().map(|&i| basis.label(i).to_string()).collect::<Vec<_>>();
    let mut assembled: BTreeMap<(usize, Vec<usize>, usize), NovikovScalar> = BTreeMap::new();
    for ((k, beta, inputs, o), c) in &cells {
        let slot = assembled.entry((*k, inputs.clone(), *o)).or_default();
        *slot = slot.clone() + tab.weight(beta)?.scale(c);
    }
    let entries: Vec<DefectEntry> = assembled
        .into_iter()
        .map(|(key, v)| (key, v.truncate(e0)))
        .filter(|(_, v)| !v.is_zero())
        .map(|((k, inputs, o), v)| DefectEntry {
            k,
            inputs: labels(&inputs),
            output: basis.label(o).to_string(),
            value: v.to_string(),
        })
        .collect();
    let cells: Vec<DefectCell> = cells
        .iter()
        .map(|((k, beta, inputs, o), c)| DefectCell {
            k: *k,
            beta: beta.exponents().to_vec(),
            inputs: labels(inputs),
            output: basis.label(*o).to_string(),
            coefficient: format_big(c),
        })
        .collect();
    Ok(DefectReport {
        e0: format_rational(&e0),
        curvature: tab.curvature(),
        arities: relation_arities(tab),
        passed: entries.is_empty(),
        entries,
        cells,
    })
}
