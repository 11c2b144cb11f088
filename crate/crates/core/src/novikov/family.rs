//! One-parameter families of operation tables over `P = [1, 2]`.
//!
//! A family is known at finitely many parameter values. It is collared when
//! it is constant on `[1, 1+ε]` and on `[2−ε, 2]`, and its faces are the
//! samples at `t = 1` and `t = 2`.

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::defect::ainf_defect;
use super::fixtures::{gauge_conjugate, LinearMap};
use super::table::OperationTable;
use crate::corner::{Calculus, KIndex, ParamFace, ParamSpace};
use crate::error::NovikovError;
use crate::monoid::ClassElement;
use crate::rational::format_rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyTable {
    pub start: OperationTable,
    pub end: OperationTable,
    pub collar: Rational64,
    /// Samples `(t, table)` with `t ∈ [1, 2]`, sorted by `t`.
    pub samples: Vec<(Rational64, OperationTable)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub e0: String,
    pub collar: String,
    /// The interval boundary has exactly the two face terms, with opposite signs.
    pub faces_in_boundary: bool,
    /// Samples in each collar, including the faces, equal the endpoint tables.
    pub collar_restriction: bool,
    pub collar_failures: Vec<String>,
    pub face_defects_zero: [bool; 2],
    pub endpoint_defects_zero: [bool; 2],
    /// The first violated clause, if any.
    pub violation: Option<String>,
    pub passed: bool,
}

fn one() -> Rational64 {
    Rational64::one()
}

fn two() -> Rational64 {
    Rational64::from_integer(2)
}

impl FamilyTable {
    /// The family equal to `tab` at every sampled parameter.
    pub fn constant(tab: &OperationTable, collar: Rational64) -> Self {
        let samples = [one(), Rational64::new(3, 2), two()].into_iter().map(|t| (t, tab.clone())).collect();
        FamilyTable { start: tab.clone(), end: tab.clone(), collar, samples }
    }

    /// Conjugation by `id + s(t)·T^{E(γ)} e^{μ(γ)/2} f`, where `s` is `0` on
    /// the first collar, `1` on the last, and linear in between.
    pub fn gauge_path(
        tab: &OperationTable,
        f: &LinearMap,
        gamma: &ClassElement,
        collar: Rational64,
        steps: usize,
    ) -> Result<Self, NovikovError> {
        if collar <= Rational64::zero() || collar >= Rational64::new(1, 2) {
            return Err(NovikovError::NotCollared);
        }
        let s_of = |t: Rational64| -> Rational64 {
            let lo = one() + collar;
            let hi = two() - collar;
            if t <= lo {
                Rational64::zero()
            } else if t >= hi {
                one()
            } else {
                (t - lo) / (hi - lo)
            }
        };
        let mut samples = Vec::new();
        for j in 0..=steps {
            let t = one() + Rational64::new(j as i64, steps.max(1) as i64);
            let s = s_of(t);
            let s = BigRational::new((*s.numer()).into(), (*s.denom()).into());
            samples.push((t, gauge_conjugate(tab, f, gamma, &s)?));
        }
        let start = samples.first().expect("samples").1.clone();
        let end = samples.last().expect("samples").1.clone();
        Ok(FamilyTable { start, end, collar, samples })
    }

    /// The family that runs through `self` on `[1, 3/2]` and `next` on `[3/2, 2]`.
    pub fn glue(&self, next: &FamilyTable) -> Result<FamilyTable, NovikovError> {
        if self.end != next.start {
            return Err(NovikovError::GlueMismatch);
        }
        let half = Rational64::new(1, 2);
        let mut samples: Vec<(Rational64, OperationTable)> =
            self.samples.iter().map(|(t, tab)| (one() + (t - one()) * half, tab.clone())).collect();
        for (t, tab) in &next.samples {
            let u = Rational64::new(3, 2) + (t - one()) * half;
            if samples.last().map(|(v, _)| *v) != Some(u) {
                samples.push((u, tab.clone()));
            }
        }
        Ok(FamilyTable {
            start: self.start.clone(),
            end: next.end.clone(),
            collar: self.collar.min(next.collar) * half,
            samples,
        })
    }
}

/// Checks a collared family modulo `T^{e0}`.
pub fn check_family(fam: &FamilyTable, e0: Rational64) -> Result<FamilyReport, NovikovError> {
    if fam.collar <= Rational64::zero() {
        return Err(NovikovError::NotCollared);
    }
    let monoid = fam.start.monoid();
    let calc = Calculus::new(monoid);

    // (i) Every operation of the family sees the two walls of P.
    let mut faces_in_boundary = true;
    let mut indices: Vec<(usize, ClassElement)> = Vec::new();
    for (_, tab) in &fam.samples {
        indices.extend(tab.cells().keys().cloned());
    }
    indices.sort();
    indices.dedup();
    for (k, beta) in &indices {
        let idx = KIndex::new(*k, 0, beta.clone()).with_param(ParamSpace::Interval);
        if !calc.is_active(&idx.triple()) {
            continue;
        }
        let terms = calc.normalized_boundary(&idx);
        let face_signs: Vec<(ParamFace, i8)> = terms
            .iter()
            .filter(|t| t.descriptor.face != ParamFace::Whole)
            .map(|t| (t.descriptor.face, t.sign_at(&[])))
            .collect();
        faces_in_boundary &= face_signs == [(ParamFace::Start, -1), (ParamFace::End, 1)];
    }

    // (ii) Collar restriction.
    let mut collar_failures = Vec::new();
    let mut seen = [false; 2];
    for (t, tab) in &fam.samples {
        if *t < one() || *t > two() {
            collar_failures.push(format!("sample at t={} lies outside [1, 2]", format_rational(t)));
        } else if *t <= one() + fam.collar {
            seen[0] |= *t == one();
            if tab != &fam.start {
                collar_failures.push(format!("t={} differs from the start table", format_rational(t)));
            }
        } else if *t >= two() - fam.collar {
            seen[1] |= *t == two();
            if tab != &fam.end {
                collar_failures.push(format!("t={} differs from the end table", format_rational(t)));
            }
        }
    }
    for (j, name) in ["t=1", "t=2"].iter().enumerate() {
        if !seen[j] {
            collar_failures.push(format!("no face sample at {name}"));
        }
    }
    let collar_restriction = collar_failures.is_empty();

    // (iii) Face data and endpoints.
    let face = |t: Rational64| fam.samples.iter().find(|(s, _)| *s == t).map(|(_, tab)| tab);
    let zero = |tab: Option<&OperationTable>| -> Result<bool, NovikovError> {
        Ok(match tab {
            Some(tab) => ainf_defect(tab, e0)?.passed,
            None => false,
        })
    };
    let face_defects_zero = [zero(face(one()))?, zero(face(two()))?];
    let endpoint_defects_zero = [zero(Some(&fam.start))?, zero(Some(&fam.end))?];
    let endpoints_ok = (0..2).all(|j| !face_defects_zero[j] || endpoint_defects_zero[j]);

    let violation = if !faces_in_boundary {
        Some("(i) boundary of the parametrized index lacks a face term".to_string())
    } else if !collar_restriction {
        Some(format!("(ii) {}", collar_failures[0]))
    } else if !endpoints_ok {
        Some("(iii) an endpoint fails the relations while its face data pass".to_string())
    } else {
        None
    };
    Ok(FamilyReport {
        e0: format_rational(&e0),
        collar: format_rational(&fam.collar),
        faces_in_boundary,
        collar_restriction,
        collar_failures,
        face_defects_zero,
        endpoint_defects_zero,
        passed: violation.is_none(),
        violation,
    })
}

/// On-disk family: endpoint tables are the face samples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyFile {
    pub collar: String,
    pub samples: Vec<SampleRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleRecord {
    pub t: String,
    pub table: super::table::TableFile,
}

impl FamilyTable {
    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            collar: format_rational(&self.collar),
            samples: self
                .samples
                .iter()
                .map(|(t, tab)| SampleRecord { t: format_rational(t), table: tab.to_file() })
                .collect(),
        }
    }

    pub fn from_file(file: &FamilyFile) -> Result<Self, NovikovError> {
        let parse = |s: &str| crate::rational::parse_rational(s).map_err(NovikovError::Parse);
        let collar = parse(&file.collar)?;
        let mut samples = file
            .samples
            .iter()
            .map(|r| Ok((parse(&r.t)?, OperationTable::from_file(&r.table)?)))
            .collect::<Result<Vec<_>, NovikovError>>()?;
        samples.sort_by_key(|(t, _)| *t);
        let (Some(first), Some(last)) = (samples.first(), samples.last()) else {
            return Err(NovikovError::Parse("family has no samples".into()));
        };
        let (start, end) = (first.1.clone(), last.1.clone());
        Ok(FamilyTable { start, end, collar, samples })
    }

    pub fn from_json(text: &str) -> Result<Self, NovikovError> {
        let file: FamilyFile = serde_json::from_str(text).map_err(|e| NovikovError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("family serializes")
    }
}
