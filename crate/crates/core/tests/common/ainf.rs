#![allow(dead_code)]

use std::collections::BTreeMap;

use kuratree_core::novikov::fixtures::consistent_fixtures;
use kuratree_core::novikov::{DefectCells, OperationTable};
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn e0() -> Rational64 {
    Rational64::from_integer(4)
}

/// Σ ± m_{k₁,β₁}(x₁,…,x_{i−1}, m_{k₂,β₂}(x_i,…), …) built directly from pairs of table entries.
pub fn oracle(tab: &OperationTable, e0: Rational64) -> DefectCells {
    let m = tab.monoid();
    let basis = tab.basis();
    let mut out: DefectCells = BTreeMap::new();
    for ((k1, b1), outer_cell) in tab.cells().iter().filter(|((k1, _), _)| *k1 > 0) {
        for ((k2, b2), inner_cell) in tab.cells() {
            let beta = b1.add(b2);
            if m.energy(&beta) >= e0 {
                continue;
            }
            let k = k1 + k2 - 1;
            for (outer_in, outer_out) in outer_cell {
                for i in 0..*k1 {
                    let sign: i64 = outer_in[..i].iter().map(|&j| basis.degree(j) - 1).sum();
                    let sign = if sign.rem_euclid(2) == 0 { 1 } else { -1 };
                    for (inner_in, inner_out) in inner_cell {
                        let Some(c) = inner_out.get(&outer_in[i]) else { continue };
                        let mut inputs = outer_in[..i].to_vec();
                        inputs.extend_from_slice(inner_in);
                        inputs.extend_from_slice(&outer_in[i + 1..]);
                        for (&o, d) in outer_out {
                            let slot = out.entry((k, beta.clone(), inputs.clone(), o)).or_insert_with(BigRational::zero);
                            *slot += BigRational::from_integer(sign.into()) * c * d;
                        }
                    }
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn perturb(seed: u64) -> OperationTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixtures = consistent_fixtures();
    let mut tab = fixtures[rng.gen_range(0..fixtures.len())].1.clone();
    let slots = tab.allowed_slots(3, e0());
    let (k, beta, inputs, out) = slots[rng.gen_range(0..slots.len())].clone();
    let num = loop {
        let n: i64 = rng.gen_range(-5..=5);
        if n != 0 {
            break n;
        }
    };
    let c = BigRational::new(num.into(), rng.gen_range(1i64..=4).into());
    tab.add(k, &beta, &inputs, out, c).unwrap();
    tab
}
