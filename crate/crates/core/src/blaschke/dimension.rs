//! The dimension count for boundary-marked Blaschke disks.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::map::Mobius;
use crate::corner::{dimension, KIndex};
use crate::error::BlaschkeError;
use crate::novikov::fixtures::disk_monoid;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimReport {
    pub d: u32,
    pub k: u32,
    pub zeros_and_phase: i64,
    pub marked_points: i64,
    pub automorphisms: i64,
    /// `(2d + 1) + (k + 1) − 3`.
    pub parametrization: i64,
    /// `μ + dim L + k − 2` with `μ = 2d`, `dim L = 1`.
    pub formula: i64,
    /// The same index in the corner calculus.
    pub symbolic: i64,
    pub passed: bool,
}

/// `2d + k + 1 ≥ 3`, or `d ≥ 1`.
pub fn is_stable(d: u32, k: u32) -> bool {
    d >= 1 || k + 1 >= 3
}

/// Numerical rank of `(α, φ) ↦ (m(z_1), m(z_2), m(z_3), m(z_4))` at the identity.
pub fn automorphism_rank() -> usize {
    let zs: Vec<Complex64> = (0..4).map(|j| Complex64::from_polar(1.0, 0.3 + TAU * j as f64 / 4.0)).collect();
    let at = |p: [f64; 3]| -> Vec<f64> {
        let m = Mobius { alpha: Complex64::new(p[0], p[1]), phi: p[2] };
        zs.iter().flat_map(|&z| {
            let w = m.apply(z);
            [w.re, w.im]
        })
        .collect()
    };
    let h = 1e-6;
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for j in 0..3 {
        let (mut p, mut q) = ([0.0; 3], [0.0; 3]);
        p[j] = h;
        q[j] = -h;
        cols.push(at(p).iter().zip(at(q)).map(|(a, b)| (a - b) / (2.0 * h)).collect());
    }
    rank(cols, 1e-6)
}

/// Rank of a set of column vectors by Gram–Schmidt.
pub(crate) fn rank(cols: Vec<Vec<f64>>, tol: f64) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut c in cols {
        for b in &basis {
            let dot: f64 = c.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in c.iter_mut().zip(b) {
                *x -= dot * y;
            }
        }
        let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > tol {
            basis.push(c.into_iter().map(|x| x / n).collect());
        }
    }
    basis.len()
}

/// Compares the parameter count of the Blaschke model with the dimension formula.
pub fn moduli_dim_check(d: u32, k: u32) -> Result<DimReport, BlaschkeError> {
    if !is_stable(d, k) {
        return Err(BlaschkeError::Unstable { d, k });
    }
    let zeros_and_phase = 2 * d as i64 + 1;
    let marked_points = k as i64 + 1;
    let automorphisms = automorphism_rank() as i64;
    let parametrization = zeros_and_phase + marked_points - automorphisms;
    let formula = 2 * d as i64 + 1 + k as i64 - 2;
    let monoid = disk_monoid();
    let symbolic = dimension(&KIndex::new(k as usize, 0, monoid.multiple(0, d)), &monoid);
    Ok(DimReport {
        d,
        k,
        zeros_and_phase,
        marked_points,
        automorphisms,
        parametrization,
        formula,
        symbolic,
        passed: parametrization == formula && formula == symbolic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(moduli_dim_check(1, 1).unwrap().formula, 2);
        assert_eq!(moduli_dim_check(0, 2).unwrap().parametrization, 1);
        assert_eq!(moduli_dim_check(2, 0).unwrap().parametrization, 3);
        assert!(moduli_dim_check(0, 1).is_err());
        assert_eq!(automorphism_rank(), 3);
    }
}
