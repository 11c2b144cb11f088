//! Graded bases and tables of structure constants `m_{k,β}`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::scalar::{format_big, NovikovScalar};
use crate::error::NovikovError;
use crate::monoid::{ClassElement, ClassMonoid, MonoidFile};
use crate::rational::parse_big_rational;

/// Labels with integer degrees; a finite model of `H(L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    labels: Vec<String>,
    degrees: Vec<i64>,
}

impl GradedBasis {
    pub fn new(elements: Vec<(String, i64)>) -> Result<Self, NovikovError> {
        if elements.is_empty() {
            return Err(NovikovError::Parse("empty basis".into()));
        }
        let unique: BTreeSet<&String> = elements.iter().map(|(l, _)| l).collect();
        if unique.len() != elements.len() {
            return Err(NovikovError::Parse("duplicate basis label".into()));
        }
        let (labels, degrees) = elements.into_iter().unzip();
        Ok(GradedBasis { labels, degrees })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    /// `deg′ = deg − 1`.
    pub fn shifted(&self, i: usize) -> i64 {
        self.degrees[i] - 1
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// How the Maslov index enters the Novikov weight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EGrading {
    /// Weight `T^{E(β)} e^{μ(β)/2}`; odd Maslov indices are rejected.
    #[default]
    Half,
    /// Weight `T^{E(β)}` only.
    Dropped,
}

/// Inputs to a `k`-ary operation, as basis indices, mapped to the output vector.
pub type Cell = BTreeMap<Vec<usize>, BTreeMap<usize, BigRational>>;

/// Structure constants of the operations `m_{k,β}` on a graded basis.
///
/// Each operation has shifted degree `1 − μ(β)`: an entry
/// `m_{k,β}(x_{a₁},…,x_{a_k}) ∋ c·x_b` needs `deg′ b = Σ deg′ a_j + 1 − μ(β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperationTable {
    monoid: ClassMonoid,
    basis: GradedBasis,
    curvature: bool,
    e_grading: EGrading,
    entries: BTreeMap<(usize, ClassElement), Cell>,
}

impl OperationTable {
    /// An empty table. With `curvature` off, operations with no inputs are rejected.
    pub fn new(monoid: ClassMonoid, basis: GradedBasis, curvature: bool, e_grading: EGrading) -> Self {
        OperationTable { monoid, basis, curvature, e_grading, entries: BTreeMap::new() }
    }

    pub fn monoid(&self) -> &ClassMonoid {
        &self.monoid
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn curvature(&self) -> bool {
        self.curvature
    }

    pub fn e_grading(&self) -> EGrading {
        self.e_grading
    }

    /// The exponent of `e` in the weight of `β`.
    pub fn e_exponent(&self, beta: &ClassElement) -> Result<i64, NovikovError> {
        let mu = self.monoid.maslov(beta);
        match self.e_grading {
            EGrading::Dropped => Ok(0),
            EGrading::Half if mu % 2 == 0 => Ok(mu / 2),
            EGrading::Half => Err(NovikovError::OddMaslov(self.monoid.display(beta), mu)),
        }
    }

    /// `T^{E(β)} e^{μ(β)/2}`.
    pub fn weight(&self, beta: &ClassElement) -> Result<NovikovScalar, NovikovError> {
        Ok(NovikovScalar::monomial(num_traits::One::one(), self.monoid.energy(beta), self.e_exponent(beta)?))
    }

    fn check(&self, k: usize, beta: &ClassElement, inputs: &[usize], output: usize) -> Result<(), NovikovError> {
        let n = self.basis.len();
        if let Some(&bad) = inputs.iter().chain([&output]).find(|&&i| i >= n) {
            return Err(NovikovError::BasisIndex(bad));
        }
        let beta_text = self.monoid.display(beta);
        if inputs.len() != k {
            return Err(NovikovError::Arity { k, beta: beta_text, found: inputs.len() });
        }
        if k == 0 && !self.curvature {
            return Err(NovikovError::Curvature(beta_text));
        }
        self.e_exponent(beta)?;
        let want = inputs.iter().map(|&i| self.basis.shifted(i)).sum::<i64>() + 1 - self.monoid.maslov(beta);
        if self.basis.shifted(output) != want {
            let labels: Vec<&str> = inputs.iter().map(|&i| self.basis.label(i)).collect();
            return Err(NovikovError::Degree {
                k,
                beta: beta_text,
                inputs: labels.join(","),
                output: self.basis.label(output).to_string(),
            });
        }
        Ok(())
    }

    /// Sets the coefficient of `x_output` in `m_{k,β}(x_inputs)`.
    pub fn set(
        &mut self,
        k: usize,
        beta: &ClassElement,
        inputs: &[usize],
        output: usize,
        c: BigRational,
    ) -> Result<(), NovikovError> {
        self.check(k, beta, inputs, output)?;
        let cell = self.entries.entry((k, beta.clone())).or_default();
        let row = cell.entry(inputs.to_vec()).or_default();
        if c.is_zero() {
            row.remove(&output);
        } else {
            row.insert(output, c);
        }
        if row.is_empty() {
            cell.remove(inputs);
        }
        if cell.is_empty() {
            self.entries.remove(&(k, beta.clone()));
        }
        Ok(())
    }

    /// Adds `c` to the coefficient of `x_output` in `m_{k,β}(x_inputs)`.
    pub fn add(
        &mut self,
        k: usize,
        beta: &ClassElement,
        inputs: &[usize],
        output: usize,
        c: BigRational,
    ) -> Result<(), NovikovError> {
        let old = self.coefficient(k, beta, inputs, output);
        self.set(k, beta, inputs, output, old + c)
    }

    /// Sets an entry by labels.
    pub fn set_labels(
        &mut self,
        beta: &ClassElement,
        inputs: &[&str],
        output: &str,
        c: BigRational,
    ) -> Result<(), NovikovError> {
        let find = |l: &str| self.basis.index_of(l).ok_or_else(|| NovikovError::Parse(format!("unknown label {l:?}")));
        let ins = inputs.iter().map(|l| find(l)).collect::<Result<Vec<_>, _>>()?;
        let out = find(output)?;
        self.set(inputs.len(), beta, &ins, out, c)
    }

    pub fn coefficient(&self, k: usize, beta: &ClassElement, inputs: &[usize], output: usize) -> BigRational {
        self.apply(k, beta, inputs).and_then(|row| row.get(&output).cloned()).unwrap_or_else(BigRational::zero)
    }

    /// `m_{k,β}(x_inputs)` as a sparse vector, or `None` when it vanishes.
    pub fn apply(&self, k: usize, beta: &ClassElement, inputs: &[usize]) -> Option<&BTreeMap<usize, BigRational>> {
        self.entries.get(&(k, beta.clone())).and_then(|cell| cell.get(inputs))
    }

    /// All nonzero operations, keyed by `(k, β)`.
    pub fn cells(&self) -> &BTreeMap<(usize, ClassElement), Cell> {
        &self.entries
    }

    pub fn max_arity(&self) -> usize {
        self.entries.keys().map(|(k, _)| *k).max().unwrap_or(0)
    }

    pub fn num_entries(&self) -> usize {
        self.entries.values().flat_map(|c| c.values()).map(BTreeMap::len).sum()
    }

    /// Every `(k, β, inputs, output)` slot allowed by the degree rule, for
    /// `k ≤ max_k` and `E(β) < e0`.
    pub fn allowed_slots(&self, max_k: usize, e0: Rational64) -> Vec<(usize, ClassElement, Vec<usize>, usize)> {
        let n = self.basis.len();
        let mut out = Vec::new();
        let classes = self.monoid.classes_up_to_energy(e0).unwrap_or_default();
        for beta in classes.into_iter().filter(|b| self.monoid.energy(b) < e0) {
            if self.e_exponent(&beta).is_err() {
                continue;
            }
            for k in (if self.curvature { 0 } else { 1 })..=max_k {
                for inputs in tuples(n, k) {
                    for output in 0..n {
                        if self.check(k, &beta, &inputs, output).is_ok() {
                            out.push((k, beta.clone(), inputs.clone(), output));
                        }
                    }
                }
            }
        }
        out
    }

    /// The same table on the basis reordered by `perm`: old element `i` becomes `perm[i]`.
    pub fn permute_basis(&self, perm: &[usize]) -> Result<OperationTable, NovikovError> {
        let n = self.basis.len();
        let mut elements = vec![(String::new(), 0); n];
        for i in 0..n {
            elements[perm[i]] = (self.basis.label(i).to_string(), self.basis.degree(i));
        }
        let mut out = OperationTable::new(self.monoid.clone(), GradedBasis::new(elements)?, self.curvature, self.e_grading);
        for ((k, beta), cell) in &self.entries {
            for (inputs, row) in cell {
                let ins: Vec<usize> = inputs.iter().map(|&i| perm[i]).collect();
                for (&o, c) in row {
                    out.set(*k, beta, &ins, perm[o], c.clone())?;
                }
            }
        }
        Ok(out)
    }

    pub fn to_file(&self) -> TableFile {
        let mut entries = Vec::new();
        for ((k, beta), cell) in &self.entries {
            for (inputs, row) in cell {
                for (&o, c) in row {
                    entries.push(EntryRecord {
                        k: *k,
                        beta: beta.exponents().to_vec(),
                        inputs: inputs.iter().map(|&i| self.basis.label(i).to_string()).collect(),
                        output: self.basis.label(o).to_string(),
                        coefficient: format_big(c),
                    });
                }
            }
        }
        TableFile {
            monoid: self.monoid.to_file(),
            basis: (0..self.basis.len())
                .map(|i| BasisRecord { label: self.basis.label(i).to_string(), degree: self.basis.degree(i) })
                .collect(),
            curvature: self.curvature,
            e_grading: self.e_grading,
            entries,
        }
    }

    pub fn from_file(file: &TableFile) -> Result<Self, NovikovError> {
        let monoid = ClassMonoid::from_file(&file.monoid).map_err(|e| NovikovError::Parse(e.to_string()))?;
        let basis = GradedBasis::new(file.basis.iter().map(|b| (b.label.clone(), b.degree)).collect())?;
        let mut tab = OperationTable::new(monoid, basis, file.curvature, file.e_grading);
        for (j, rec) in file.entries.iter().enumerate() {
            let beta = tab.monoid.element(rec.beta.clone()).map_err(|e| NovikovError::Parse(format!("entry {j}: {e}")))?;
            let c = parse_big_rational(&rec.coefficient).map_err(|e| NovikovError::Parse(format!("entry {j}: {e}")))?;
            if rec.k != rec.inputs.len() {
                return Err(NovikovError::Arity { k: rec.k, beta: tab.monoid.display(&beta), found: rec.inputs.len() });
            }
            let inputs: Vec<&str> = rec.inputs.iter().map(String::as_str).collect();
            tab.set_labels(&beta, &inputs, &rec.output, c)?;
        }
        Ok(tab)
    }

    pub fn from_json(text: &str) -> Result<Self, NovikovError> {
        let file: TableFile = serde_json::from_str(text).map_err(|e| NovikovError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("table serializes")
    }
}

/// All `k`-tuples of basis indices in lexicographic order.
pub(crate) fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// On-disk operation table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableFile {
    pub monoid: MonoidFile,
    pub basis: Vec<BasisRecord>,
    #[serde(default)]
    pub curvature: bool,
    #[serde(default)]
    pub e_grading: EGrading,
    pub entries: Vec<EntryRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisRecord {
    pub label: String,
    pub degree: i64,
}

/// `m_{k,β}(inputs) ∋ coefficient · output`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryRecord {
    pub k: usize,
    pub beta: Vec<u32>,
    pub inputs: Vec<String>,
    pub output: String,
    pub coefficient: String,
}

/// The Novikov-valued `k`-ary map `m_k = Σ_β T^{E(β)} e^{μ(β)/2} m_{k,β}`, over `E(β) < e0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovMap {
    pub k: usize,
    pub entries: BTreeMap<(Vec<usize>, usize), NovikovScalar>,
}

pub fn assemble_mk(tab: &OperationTable, k: usize, e0: Rational64) -> Result<NovikovMap, NovikovError> {
    let mut entries: BTreeMap<(Vec<usize>, usize), NovikovScalar> = BTreeMap::new();
    for ((kk, beta), cell) in tab.cells() {
        if *kk != k || tab.monoid().energy(beta) >= e0 {
            continue;
        }
        let w = tab.weight(beta)?;
        for (inputs, row) in cell {
            for (&o, c) in row {
                let slot = entries.entry((inputs.clone(), o)).or_default();
                *slot = slot.clone() + w.scale(c);
            }
        }
    }
    entries.retain(|_, v| !v.is_zero());
    Ok(NovikovMap { k, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn basis() -> GradedBasis {
        GradedBasis::new(vec![("1".into(), 0), ("y".into(), 1), ("w".into(), 2)]).unwrap()
    }

    fn monoid() -> ClassMonoid {
        ClassMonoid::single("b", Rational64::from_integer(1), 2)
    }

    #[test]
    fn degree_rule() {
        let m = monoid();
        let mut tab = OperationTable::new(m.clone(), basis(), false, EGrading::Half);
        assert!(tab.set_labels(&m.zero(), &["y"], "w", q(1)).is_ok());
        assert!(matches!(tab.set_labels(&m.zero(), &["y"], "y", q(1)), Err(NovikovError::Degree { .. })));
        // deg out = Σ deg in + 2 − k − μ.
        assert!(tab.set_labels(&m.generator(0), &["w"], "1", q(1)).is_err());
        assert!(tab.set_labels(&m.generator(0), &["w"], "y", q(1)).is_ok());
        assert!(tab.set_labels(&m.generator(0), &["w", "w"], "y", q(1)).is_err());
        assert!(tab.set_labels(&m.generator(0), &["w", "w"], "w", q(1)).is_ok());
        assert!(matches!(tab.set_labels(&m.generator(0), &[], "1", q(1)), Err(NovikovError::Curvature(_))));
    }

    #[test]
    fn odd_maslov_needs_dropped_grading() {
        let m = ClassMonoid::single("a", Rational64::from_integer(1), 1);
        let b = GradedBasis::new(vec![("x".into(), 1)]).unwrap();
        let mut tab = OperationTable::new(m.clone(), b.clone(), false, EGrading::Half);
        assert!(matches!(tab.set(1, &m.generator(0), &[0], 0, q(1)), Err(NovikovError::OddMaslov(..))));
        let mut tab = OperationTable::new(m.clone(), b, false, EGrading::Dropped);
        tab.set(1, &m.generator(0), &[0], 0, q(1)).unwrap();
        assert_eq!(tab.weight(&m.generator(0)).unwrap().terms()[0].e, 0);
    }

    #[test]
    fn assemble_truncates() {
        let m = monoid();
        let mut tab = OperationTable::new(m.clone(), basis(), false, EGrading::Half);
        tab.set_labels(&m.zero(), &["y"], "w", q(1)).unwrap();
        tab.set_labels(&m.generator(0), &["y"], "1", q(3)).unwrap();
        let two = assemble_mk(&tab, 1, Rational64::from_integer(2)).unwrap();
        assert_eq!(two.entries.len(), 2);
        assert_eq!(two.entries[&(vec![1], 0)].to_string(), "3 T^1 e^1");
        let one = assemble_mk(&tab, 1, Rational64::from_integer(1)).unwrap();
        assert_eq!(one.entries.len(), 1);
        assert_eq!(one.entries[&(vec![1], 2)], NovikovScalar::one());
    }

    #[test]
    fn file_round_trip() {
        let m = monoid();
        let mut tab = OperationTable::new(m.clone(), basis(), true, EGrading::Half);
        tab.set_labels(&m.generator(0), &[], "1", BigRational::new(1.into(), 3.into())).unwrap();
        tab.set_labels(&m.zero(), &["y", "1"], "y", q(-1)).unwrap();
        let back = OperationTable::from_json(&tab.to_json()).unwrap();
        assert_eq!(back, tab);
    }

    #[test]
    fn permuting_basis_moves_entries() {
        let m = monoid();
        let mut tab = OperationTable::new(m.clone(), basis(), false, EGrading::Half);
        tab.set_labels(&m.zero(), &["y"], "w", q(1)).unwrap();
        let p = tab.permute_basis(&[2, 0, 1]).unwrap();
        assert_eq!(p.basis().label(0), "y");
        assert_eq!(p.coefficient(1, &m.zero(), &[0], 1), q(1));
    }
}
