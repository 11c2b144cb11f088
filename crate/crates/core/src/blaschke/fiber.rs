//! Fiber products `ev_i(p₁) = ev_0(p₂)` of parametrized families.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dimension::{is_stable, rank};
use super::map::BlaschkeMap;
use crate::corner::{descriptor_dimension, KIndex, ParamFace, StratumDescriptor};
use crate::error::BlaschkeError;
use crate::novikov::fixtures::disk_monoid;
use crate::tree::BoundarySplit;

/// Largest radius a chart zero may take.
pub const MAX_RADIUS: f64 = 0.95;
/// Residual below which a solution is accepted.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// A smooth family of marked Blaschke disks over a box of parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// All disks of degree `d` with `k + 1` marks, in a slice of the automorphisms:
    /// `z₀, z₁, z₂ = 1, i, −1` when `k ≥ 2`, otherwise `a₁ = 0` and `z₀ = 1`.
    FullChart { d: u32, k: usize },
    /// `e^{is} u` with fixed marks.
    PhasePencil { map: BlaschkeMap, marks: Vec<f64> },
    /// Constant disks; the value is a parameter unless `theta` is given.
    Constant { marks: Vec<f64>, theta: Option<f64> },
}

/// A map with its boundary marks as angles.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedConfig {
    pub map: BlaschkeMap,
    pub marks: Vec<f64>,
}

impl MarkedConfig {
    pub fn ev(&self, i: usize) -> Complex64 {
        self.map.eval(Complex64::from_polar(1.0, self.marks[i]))
    }
}

impl Family {
    pub fn full_chart(d: u32, k: usize) -> Result<Self, BlaschkeError> {
        if !is_stable(d, k as u32) || k > 3 {
            return Err(BlaschkeError::Unstable { d, k: k as u32 });
        }
        Ok(Family::FullChart { d, k })
    }

    /// Number of boundary marks minus one.
    pub fn k(&self) -> usize {
        match self {
            Family::FullChart { k, .. } => *k,
            Family::PhasePencil { marks, .. } | Family::Constant { marks, .. } => marks.len() - 1,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Family::FullChart { d, .. } => *d,
            Family::PhasePencil { map, .. } => map.degree(),
            Family::Constant { .. } => 0,
        }
    }

    /// Free zeros of a chart, after the slice.
    fn chart_zeros(d: u32, k: usize) -> usize {
        if k >= 2 {
            d as usize
        } else {
            d as usize - 1
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Family::FullChart { d, k } => 2 * Self::chart_zeros(*d, *k) + 1 + if *k >= 2 { k - 2 } else { *k },
            Family::PhasePencil { .. } => 1,
            Family::Constant { theta, .. } => usize::from(theta.is_none()),
        }
    }

    /// A random parameter in the family's box.
    pub fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        match self {
            Family::FullChart { d, k } => {
                let mut p = Vec::new();
                for _ in 0..Self::chart_zeros(*d, *k) {
                    p.push(rng.gen_range(0.0..0.8));
                    p.push(rng.gen_range(0.0..TAU));
                }
                p.push(rng.gen_range(0.0..TAU));
                match k {
                    1 => p.push(rng.gen_range(0.2..TAU - 0.2)),
                    3 => p.push(rng.gen_range(PI + 0.2..TAU - 0.2)),
                    _ => {}
                }
                p
            }
            Family::PhasePencil { .. } => vec![rng.gen_range(0.0..TAU)],
            Family::Constant { theta: None, .. } => vec![rng.gen_range(0.0..TAU)],
            Family::Constant { .. } => Vec::new(),
        }
    }

    /// Box constraint on parameter `j`, if any.
    fn bounds(&self, j: usize) -> Option<(f64, f64)> {
        let Family::FullChart { d, k } = self else { return None };
        let z = Self::chart_zeros(*d, *k);
        match (*k, j) {
            (_, j) if j < 2 * z && j % 2 == 0 => Some((0.0, MAX_RADIUS)),
            (1, j) if j == 2 * z + 1 => Some((1e-3, TAU - 1e-3)),
            (3, j) if j == 2 * z + 1 => Some((PI + 1e-3, TAU - 1e-3)),
            _ => None,
        }
    }

    /// Keeps radii and mark angles inside the box.
    fn project(&self, p: &mut [f64]) {
        for (j, x) in p.iter_mut().enumerate() {
            if let Some((lo, hi)) = self.bounds(j) {
                *x = x.clamp(lo, hi);
            }
        }
    }

    pub fn config(&self, p: &[f64]) -> MarkedConfig {
        match self {
            Family::FullChart { d, k } => {
                let z = Self::chart_zeros(*d, *k);
                let mut zeros: Vec<Complex64> = (0..z).map(|j| Complex64::from_polar(p[2 * j], p[2 * j + 1])).collect();
                if *k < 2 {
                    zeros.insert(0, Complex64::new(0.0, 0.0));
                }
                let map = BlaschkeMap::new(zeros, p[2 * z]).expect("radii are clamped");
                let marks = match k {
                    0 => vec![0.0],
                    1 => vec![0.0, p[2 * z + 1]],
                    2 => vec![0.0, FRAC_PI_2, PI],
                    _ => vec![0.0, FRAC_PI_2, PI, p[2 * z + 1]],
                };
                MarkedConfig { map, marks }
            }
            Family::PhasePencil { map, marks } => MarkedConfig { map: map.rotated(p[0]), marks: marks.clone() },
            Family::Constant { marks, theta } => {
                MarkedConfig { map: BlaschkeMap::constant(theta.unwrap_or_else(|| p[0])), marks: marks.clone() }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
    pub constraint_rank: usize,
    pub transverse: bool,
    pub estimated_dim: usize,
    pub expected_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberReport {
    pub slot: usize,
    pub dims: [usize; 2],
    pub expected_dim: usize,
    /// From the corner calculus, when both families are full charts.
    pub symbolic_dim: Option<i64>,
    pub seeds: Vec<SeedRecord>,
    pub converged: usize,
    pub transverse: usize,
    pub within_tolerance: usize,
    pub non_convergent: Vec<u64>,
    pub rank_deficient: Vec<u64>,
    pub passed: bool,
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Dimension of the fiber product from the boundary calculus.
pub fn symbolic_fiber_dim(d1: u32, k1: usize, d2: u32, k2: usize, slot: usize) -> i64 {
    let m = disk_monoid();
    let split = BoundarySplit {
        beta1: m.multiple(0, d1),
        beta2: m.multiple(0, d2),
        k1,
        k2,
        i: slot,
        l1: Default::default(),
        l2: Default::default(),
    };
    let idx = KIndex::new(k1 + k2 - 1, 0, m.multiple(0, d1 + d2));
    descriptor_dimension(&idx, &StratumDescriptor::new(split.tree(), ParamFace::Whole), &m)
}

/// Solves `ev_slot(p₁) = ev_0(p₂)` from random starts by damped Newton steps on
/// the phase difference.
pub fn solve_fiber_product(f1: &Family, f2: &Family, slot: usize, seeds: &[u64]) -> Result<FiberReport, BlaschkeError> {
    if slot == 0 || slot > f1.k() {
        return Err(BlaschkeError::BadSlot { slot, k: f1.k() + 1 });
    }
    let (n1, n2) = (f1.dim(), f2.dim());
    let expected_dim = (n1 + n2).saturating_sub(1);
    let symbolic_dim = match (f1, f2) {
        (Family::FullChart { d: d1, k: k1 }, Family::FullChart { d: d2, k: k2 }) => {
            Some(symbolic_fiber_dim(*d1, *k1, *d2, *k2, slot))
        }
        _ => None,
    };
    let split = |p: &[f64]| (f1.config(&p[..n1]), f2.config(&p[n1..]));
    let phase = |p: &[f64]| {
        let (c1, c2) = split(p);
        wrap((c1.ev(slot) * c2.ev(0).conj()).arg())
    };
    let residual = |p: &[f64]| {
        let (c1, c2) = split(p);
        (c1.ev(slot) - c2.ev(0)).norm()
    };
    let grad = |p: &[f64]| -> Vec<f64> {
        let h = 1e-7;
        (0..p.len())
            .map(|j| {
                let (mut a, mut b) = (p.to_vec(), p.to_vec());
                a[j] += h;
                b[j] -= h;
                wrap(phase(&a) - phase(&b)) / (2.0 * h)
            })
            .collect()
    };
    let mut records: Vec<SeedRecord> = seeds
        .par_iter()
        .map(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut p = f1.sample(&mut rng);
            p.extend(f2.sample(&mut rng));
            let mut iterations = 0;
            while iterations < 60 && residual(&p) >= 1e-14 {
                iterations += 1;
                let g = phase(&p);
                let mut dg = grad(&p);
                // Directions pressing on a bound are frozen.
                for (j, x) in dg.iter_mut().enumerate() {
                    let b = if j < n1 { f1.bounds(j) } else { f2.bounds(j - n1) };
                    if let Some((lo, hi)) = b {
                        let step = -g * *x;
                        if (p[j] <= lo && step < 0.0) || (p[j] >= hi && step > 0.0) {
                            *x = 0.0;
                        }
                    }
                }
                let nn: f64 = dg.iter().map(|x| x * x).sum();
                if nn < 1e-20 {
                    break;
                }
                let mut lambda = 1.0;
                let mut moved = false;
                while lambda > 1e-8 {
                    let mut q: Vec<f64> = p.iter().zip(&dg).map(|(x, d)| x - lambda * g * d / nn).collect();
                    let (q1, q2) = q.split_at_mut(n1);
                    f1.project(q1);
                    f2.project(q2);
                    if phase(&q).abs() < g.abs() {
                        p = q;
                        moved = true;
                        break;
                    }
                    lambda *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            let r = residual(&p);
            let constraint_rank = rank(vec![grad(&p)], 1e-6);
            SeedRecord {
                seed,
                converged: r < RESIDUAL_TOL,
                iterations,
                residual: r,
                constraint_rank,
                transverse: constraint_rank == 1,
                estimated_dim: (n1 + n2) - constraint_rank,
                expected_dim,
            }
        })
        .collect();
    records.sort_by_key(|r| r.seed);
    let converged = records.iter().filter(|r| r.converged).count();
    let transverse = records.iter().filter(|r| r.converged && r.transverse).count();
    let within_tolerance = records.iter().filter(|r| r.residual < RESIDUAL_TOL).count();
    let non_convergent = records.iter().filter(|r| !r.converged).map(|r| r.seed).collect();
    let rank_deficient = records.iter().filter(|r| r.converged && !r.transverse).map(|r| r.seed).collect();
    let dims_ok = records
        .iter()
        .filter(|r| r.converged && r.transverse)
        .all(|r| r.estimated_dim == expected_dim && symbolic_dim.map_or(true, |s| s == expected_dim as i64));
    Ok(FiberReport {
        slot,
        dims: [n1, n2],
        expected_dim,
        symbolic_dim,
        passed: dims_ok && transverse > 0,
        seeds: records,
        converged,
        transverse,
        within_tolerance,
        non_convergent,
        rank_deficient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pencils_meet_in_a_curve() {
        let u = BlaschkeMap::new(vec![Complex64::new(0.0, 0.0)], 0.0).unwrap();
        let f = Family::PhasePencil { map: u, marks: vec![0.0, 2.0] };
        let r = solve_fiber_product(&f, &f, 1, &(0..8).collect::<Vec<_>>()).unwrap();
        assert!(r.passed);
        assert_eq!(r.expected_dim, 1);
        for s in &r.seeds {
            assert!(s.converged && s.transverse && s.residual < RESIDUAL_TOL);
        }
    }

    #[test]
    fn pinned_constants_are_not_transverse() {
        let a = Family::Constant { marks: vec![0.0, 1.0, 2.0], theta: Some(0.5) };
        let b = Family::Constant { marks: vec![0.0, 1.0, 2.0], theta: Some(0.5) };
        let r = solve_fiber_product(&a, &b, 1, &[1, 2]).unwrap();
        assert_eq!(r.rank_deficient, vec![1, 2]);
        let c = Family::Constant { marks: vec![0.0, 1.0, 2.0], theta: Some(0.7) };
        let r = solve_fiber_product(&a, &c, 1, &[1]).unwrap();
        assert_eq!(r.non_convergent, vec![1]);
    }

    #[test]
    fn chart_dimensions_match_the_formula() {
        for d in 0..=3 {
            for k in 0..=3 {
                if let Ok(f) = Family::full_chart(d, k) {
                    assert_eq!(f.dim() as u32, 2 * d + k as u32 - 1, "({d},{k})");
                }
            }
        }
        assert_eq!(symbolic_fiber_dim(1, 1, 1, 1, 1), 3);
    }
}
