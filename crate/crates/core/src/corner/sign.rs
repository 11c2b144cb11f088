//! Sign bookkeeping for boundary terms.
//!
//! Signs are tracked as affine forms over GF(2) in the shifted degrees of the
//! inputs, so one computation covers every degree assignment at once.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// `c + Σ_{j ∈ mask} x_j` over GF(2), where `x_j` is the shifted degree of input `j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub mask: u64,
    pub constant: bool,
}

impl AffineForm {
    pub const ZERO: AffineForm = AffineForm { mask: 0, constant: false };
    pub const ONE: AffineForm = AffineForm { mask: 0, constant: true };

    /// The variable `x_j`, for `j ≥ 1`.
    pub fn var(j: usize) -> Self {
        assert!((1..=64).contains(&j), "input index {j} out of range");
        AffineForm { mask: 1 << (j - 1), constant: false }
    }

    pub fn evaluate(&self, degrees: &[i64]) -> bool {
        let mut acc = self.constant;
        for (j, d) in degrees.iter().enumerate() {
            if self.mask & (1 << j) != 0 && d.rem_euclid(2) == 1 {
                acc = !acc;
            }
        }
        acc
    }
}

impl Add for AffineForm {
    type Output = AffineForm;

    fn add(self, rhs: AffineForm) -> AffineForm {
        AffineForm { mask: self.mask ^ rhs.mask, constant: self.constant ^ rhs.constant }
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = (0..64)
            .filter(|j| self.mask & (1 << j) != 0)
            .map(|j| format!("x{}", j + 1))
            .collect();
        if self.constant {
            parts.push("1".into());
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// The data fixing the sign of a boundary term: the parent input slots
/// preceding the child, and a constant offset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KoszulExponent {
    pub prefix: Vec<usize>,
    pub offset: u32,
}

impl KoszulExponent {
    pub fn constant(offset: u32) -> Self {
        KoszulExponent { prefix: Vec::new(), offset }
    }

    /// Parity of the exponent for the given shifted degrees of the parent's inputs.
    pub fn parity(&self, shifted_degrees: &[i64]) -> bool {
        let sum: i64 = self.prefix.iter().map(|&j| shifted_degrees[j - 1]).sum::<i64>() + self.offset as i64;
        sum.rem_euclid(2) == 1
    }

    pub fn sign(&self, shifted_degrees: &[i64]) -> i8 {
        if self.parity(shifted_degrees) {
            -1
        } else {
            1
        }
    }

    /// The exponent when the parent's inputs have the given degree forms.
    pub fn form(&self, inputs: &[AffineForm]) -> AffineForm {
        let base = if self.offset % 2 == 1 { AffineForm::ONE } else { AffineForm::ZERO };
        self.prefix.iter().fold(base, |acc, &j| acc + inputs[j - 1])
    }
}

/// How the sign of the boundary term with the child at slot `i` is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignConvention {
    /// `(−1)^{Σ_{j<i} deg′ x_j}` with `deg′ = deg − 1`.
    #[default]
    ShiftedKoszul,
    /// `(−1)^{Σ_{j<i} deg x_j}`: the unshifted sum. Kept as a negative control;
    /// it does not square to zero.
    Unshifted,
}

impl SignConvention {
    pub fn exponent(self, i: usize) -> KoszulExponent {
        let prefix: Vec<usize> = (1..i).collect();
        let offset = match self {
            SignConvention::ShiftedKoszul => 0,
            SignConvention::Unshifted => (i - 1) as u32,
        };
        KoszulExponent { prefix, offset }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_add_and_print() {
        let f = AffineForm::var(1) + AffineForm::var(3) + AffineForm::ONE;
        assert_eq!(f.to_string(), "x1+x3+1");
        assert_eq!((f + f).to_string(), "0");
        assert!(f.evaluate(&[0, 5, 0]));
        assert!(!f.evaluate(&[1, 0, 0]));
    }

    #[test]
    fn exponent_matches_form() {
        let e = SignConvention::ShiftedKoszul.exponent(3);
        let vars: Vec<_> = (1..=4).map(AffineForm::var).collect();
        for bits in 0..16i64 {
            let degs: Vec<i64> = (0..4).map(|j| (bits >> j) & 1).collect();
            assert_eq!(e.parity(&degs), e.form(&vars).evaluate(&degs));
        }
        assert_eq!(SignConvention::ShiftedKoszul.exponent(1).sign(&[]), 1);
        assert_eq!(SignConvention::Unshifted.exponent(2).sign(&[0]), -1);
    }
}
