//! Finite Blaschke products `u(z) = e^{iθ} Π (z − a_j)/(1 − ā_j z)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::BlaschkeError;

/// Zeros must satisfy `|a| < 1 − ZERO_MARGIN`.
pub const ZERO_MARGIN: f64 = 1e-12;
/// Inputs to [`evaluate`] must satisfy `||z| − 1| ≤ CIRCLE_TOL`.
pub const CIRCLE_TOL: f64 = 1e-10;
/// Largest accepted distance from an integer for a closed-loop winding.
pub const WINDING_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeMap {
    zeros: Vec<Complex64>,
    theta: f64,
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

impl BlaschkeMap {
    pub fn new(zeros: Vec<Complex64>, theta: f64) -> Result<Self, BlaschkeError> {
        for &a in &zeros {
            if !(a.norm() < 1.0 - ZERO_MARGIN) {
                return Err(BlaschkeError::ZeroOutsideDisk(fmt_c(a)));
            }
        }
        Ok(BlaschkeMap { zeros, theta: theta.rem_euclid(TAU) })
    }

    /// `z ↦ e^{iθ}`.
    pub fn constant(theta: f64) -> Self {
        BlaschkeMap { zeros: Vec::new(), theta: theta.rem_euclid(TAU) }
    }

    pub fn degree(&self) -> u32 {
        self.zeros.len() as u32
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The same zeros with the phase turned by `s`.
    pub fn rotated(&self, s: f64) -> Self {
        BlaschkeMap { zeros: self.zeros.clone(), theta: (self.theta + s).rem_euclid(TAU) }
    }

    /// `u(z)` for any `|z| ≤ 1`, without the boundary check.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(Complex64::from_polar(1.0, self.theta), |acc, &a| acc * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z))
    }

    /// `u ∘ m` for the disk automorphism `m`, again a Blaschke product.
    pub fn compose(&self, m: &Mobius) -> BlaschkeMap {
        let inv = m.inverse();
        let zeros: Vec<Complex64> = self.zeros.iter().map(|&a| inv.apply(a)).collect();
        let one = Complex64::new(1.0, 0.0);
        let bare = BlaschkeMap { zeros: zeros.clone(), theta: 0.0 }.eval(one);
        let target = self.eval(m.apply(one));
        BlaschkeMap { zeros, theta: (target / bare).arg().rem_euclid(TAU) }
    }
}

/// `ev`: the value of `u` at a boundary point.
pub fn evaluate(u: &BlaschkeMap, z: Complex64) -> Result<Complex64, BlaschkeError> {
    if (z.norm() - 1.0).abs() > CIRCLE_TOL {
        return Err(BlaschkeError::OffCircle(fmt_c(z)));
    }
    Ok(u.eval(z))
}

/// `z ↦ e^{iφ} (z − α)/(1 − ᾱ z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub alpha: Complex64,
    pub phi: f64,
}

impl Mobius {
    pub fn apply(&self, z: Complex64) -> Complex64 {
        Complex64::from_polar(1.0, self.phi) * (z - self.alpha) / (Complex64::new(1.0, 0.0) - self.alpha.conj() * z)
    }

    pub fn inverse(&self) -> Mobius {
        // w = e^{iφ}(z − α)/(1 − ᾱz)  ⇔  z = (w' + α)/(1 + ᾱw') with w' = e^{−iφ}w.
        let alpha = -self.alpha * Complex64::from_polar(1.0, self.phi);
        Mobius { alpha, phi: -self.phi }
    }
}

/// Upper bound of `|d/dt arg u(e^{it})|` on `[t1, t2]`.
///
/// Each factor contributes the Poisson kernel `(1 − |a|²)/|e^{it} − a|²`,
/// largest where the arc comes closest to `a`.
fn speed_bound(u: &BlaschkeMap, t1: f64, t2: f64) -> f64 {
    u.zeros
        .iter()
        .map(|&a| {
            let r = a.norm();
            let phi = a.arg();
            let inside = {
                let s = (phi - t1).rem_euclid(TAU);
                s <= t2 - t1
            };
            let dist = if inside {
                1.0 - r
            } else {
                let e1 = (Complex64::from_polar(1.0, t1) - a).norm();
                let e2 = (Complex64::from_polar(1.0, t2) - a).norm();
                e1.min(e2)
            };
            (1.0 - r * r) / (dist * dist)
        })
        .sum()
}

/// `arg u(e^{it})` accumulated over `[t1, t2]`.
///
/// Intervals are bisected until the argument provably moves less than half a
/// radian, so each sampled increment is the true one.
pub fn arg_change(u: &BlaschkeMap, t1: f64, t2: f64) -> f64 {
    let mut total = 0.0;
    let mut stack = vec![(t1, t2)];
    while let Some((a, b)) = stack.pop() {
        let h = b - a;
        if h * speed_bound(u, a, b) > 0.5 && h > 1e-15 {
            let m = 0.5 * (a + b);
            stack.push((m, b));
            stack.push((a, m));
            continue;
        }
        let za = u.eval(Complex64::from_polar(1.0, a));
        let zb = u.eval(Complex64::from_polar(1.0, b));
        total += (zb * za.conj()).arg();
    }
    total
}

/// Winding number of `u` on the unit circle, from sampled arguments.
pub fn winding(u: &BlaschkeMap) -> f64 {
    (0..64).map(|j| arg_change(u, TAU * j as f64 / 64.0, TAU * (j + 1) as f64 / 64.0)).sum::<f64>() / TAU
}

/// `μ = 2 · winding`, rejecting a non-integral winding.
pub fn maslov_via_winding(u: &BlaschkeMap) -> Result<i64, BlaschkeError> {
    let w = winding(u);
    let n = w.round();
    if (w - n).abs() > WINDING_TOL {
        return Err(BlaschkeError::NonIntegralWinding(w));
    }
    Ok(2 * n as i64)
}

/// Largest `|u(m(z)) − (u∘m)(z)|` over `samples` equally spaced boundary points.
pub fn mobius_defect(u: &BlaschkeMap, m: &Mobius, samples: usize) -> f64 {
    let composed = u.compose(m);
    (0..samples)
        .map(|j| {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / samples as f64 + PI / 7.0);
            (composed.eval(z) - u.eval(m.apply(z))).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn small_examples() {
        let id = BlaschkeMap::new(vec![c(0.0, 0.0)], 0.0).unwrap();
        assert!(close(evaluate(&id, c(0.0, 1.0)).unwrap(), c(0.0, 1.0)));
        let minus = BlaschkeMap::constant(PI);
        assert!(close(evaluate(&minus, c(0.6, 0.8)).unwrap(), c(-1.0, 0.0)));
        let sq = BlaschkeMap::new(vec![c(0.0, 0.0); 2], 0.0).unwrap();
        assert!(close(evaluate(&sq, Complex64::from_polar(1.0, PI / 4.0)).unwrap(), c(0.0, 1.0)));
        assert!(evaluate(&sq, c(0.5, 0.0)).is_err());
        assert!(BlaschkeMap::new(vec![c(1.0, 0.0)], 0.0).is_err());
    }

    #[test]
    fn winding_of_simple_maps() {
        assert_eq!(maslov_via_winding(&BlaschkeMap::constant(1.0)).unwrap(), 0);
        assert_eq!(maslov_via_winding(&BlaschkeMap::new(vec![c(0.0, 0.0)], 0.0).unwrap()).unwrap(), 2);
        let near = BlaschkeMap::new(vec![c(1.0 - 1e-9, 0.0), c(0.0, -0.999_999)], 2.0).unwrap();
        assert_eq!(maslov_via_winding(&near).unwrap(), 4);
    }

    #[test]
    fn mobius_inverse() {
        let m = Mobius { alpha: c(0.3, -0.2), phi: 1.1 };
        let z = c(0.1, 0.4);
        assert!(close(m.inverse().apply(m.apply(z)), z));
        let u = BlaschkeMap::new(vec![c(0.5, 0.1), c(-0.2, 0.7)], 0.4).unwrap();
        assert!(mobius_defect(&u, &m, 32) < 1e-12);
    }
}
