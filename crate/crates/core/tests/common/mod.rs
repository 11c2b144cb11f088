#![allow(dead_code)]

pub mod ainf;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

/// Brute-force generator of `𝒢(k+1, ℓ, e·b)` for a single generator `b`.
///
/// Builds every decorated plane tree vertex by vertex in preorder and keeps
/// those that use up all legs, marks and energy with every vertex stable.
/// Each tree has exactly one preorder construction, so nothing is repeated.
/// Calls `f(canonical_form, interior_vertices)`.
pub fn brute_force_forms(k: usize, ell: usize, e: u32, mut f: impl FnMut(&str, usize)) {
    let mut g = Grower {
        legs: k,
        marks: (1u32 << ell) - 1,
        energy: e,
        stack: Vec::new(),
        buf: String::new(),
        vertices: 0,
    };
    g.open_top(&mut f);
}

struct Open {
    energy: u32,
    marks: u32,
    children: usize,
}

impl Open {
    fn stable(&self) -> bool {
        self.energy > 0 || self.children + 1 + 2 * self.marks.count_ones() as usize >= 3
    }

    /// Children still required before the vertex can be stable.
    fn deficit(&self) -> usize {
        if self.energy > 0 || self.marks != 0 {
            0
        } else {
            2usize.saturating_sub(self.children)
        }
    }
}

struct Grower {
    legs: usize,
    marks: u32,
    energy: u32,
    stack: Vec<Open>,
    buf: String,
    vertices: usize,
}

fn subsets(mask: u32) -> Vec<u32> {
    (0..=mask).filter(|s| s & !mask == 0).collect()
}

fn label(mask: u32) -> String {
    (0..32)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(".")
}

impl Grower {
    fn units(&self) -> usize {
        self.legs + self.marks.count_ones() as usize + self.energy as usize
    }

    /// Every child subtree uses at least one leg, mark or unit of energy.
    fn feasible(&self) -> bool {
        self.stack.iter().map(Open::deficit).sum::<usize>() <= self.units()
    }

    fn open_top(&mut self, f: &mut impl FnMut(&str, usize)) {
        for e in 0..=self.energy {
            for m in subsets(self.marks) {
                self.push_vertex(e, m, f);
            }
        }
    }

    fn push_vertex(&mut self, e: u32, m: u32, f: &mut impl FnMut(&str, usize)) {
        let mark = self.buf.len();
        if let Some(parent) = self.stack.last_mut() {
            if parent.children > 0 {
                self.buf.push(',');
            }
            parent.children += 1;
        }
        self.buf.push('[');
        self.buf.push_str(&e.to_string());
        self.buf.push('|');
        self.buf.push_str(&label(m));
        self.buf.push_str("](");
        self.energy -= e;
        self.marks &= !m;
        self.vertices += 1;
        self.stack.push(Open { energy: e, marks: m, children: 0 });
        if self.feasible() {
            self.step(f);
        }
        self.stack.pop();
        self.vertices -= 1;
        self.marks |= m;
        self.energy += e;
        if let Some(parent) = self.stack.last_mut() {
            parent.children -= 1;
        }
        self.buf.truncate(mark);
    }

    fn step(&mut self, f: &mut impl FnMut(&str, usize)) {
        // Close the current vertex.
        let top = self.stack.last().expect("open vertex");
        if top.stable() && (self.stack.len() > 1 || self.units() == 0) {
            let closed = self.stack.pop().expect("open vertex");
            self.buf.push(')');
            if self.stack.is_empty() {
                f(&self.buf, self.vertices);
            } else {
                self.step(f);
            }
            self.buf.pop();
            self.stack.push(closed);
        }
        // Attach a leg.
        if self.legs > 0 {
            let top = self.stack.last_mut().expect("open vertex");
            let sep = top.children > 0;
            top.children += 1;
            self.legs -= 1;
            self.buf.push_str(if sep { ",*" } else { "*" });
            if self.feasible() {
                self.step(f);
            }
            self.buf.truncate(self.buf.len() - if sep { 2 } else { 1 });
            self.legs += 1;
            self.stack.last_mut().expect("open vertex").children -= 1;
        }
        // Attach a new interior vertex.
        for e in 0..=self.energy {
            for m in subsets(self.marks) {
                self.push_vertex(e, m, f);
            }
        }
    }
}

/// Order-independent 128-bit fingerprint of a canonical form.
pub fn form_hash(s: &str) -> u128 {
    let mut a = DefaultHasher::new();
    (0u8, s).hash(&mut a);
    let mut b = DefaultHasher::new();
    (1u8, s).hash(&mut b);
    ((a.finish() as u128) << 64) | b.finish() as u128
}
