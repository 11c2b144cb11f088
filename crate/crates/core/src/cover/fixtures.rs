//! Shipped stratified models over the one-generator disk monoid.
//!
//! Triples: `Z = (2,0,0)`, `D = (0,0,b)`, `S = (1,0,b)` and `W = (0,0,2b)`.
//! The boundary of `S` is `Z × D` in two orders; the boundary of `W` is
//! `S × D` and `Z × D × D`.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::model::{Cloud, ModelPoint, StratifiedModel};
use crate::monoid::{ClassMonoid, Triple};
use crate::novikov::fixtures::disk_monoid;
use crate::tree::DecoratedTree;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

struct Builder {
    monoid: ClassMonoid,
    clouds: Vec<Cloud>,
}

impl Builder {
    fn new() -> Self {
        Builder { monoid: disk_monoid(), clouds: Vec::new() }
    }

    fn triple(&self, k: usize, e: u32) -> Triple {
        Triple::new(k, 0, self.monoid.multiple(0, e))
    }

    fn cloud(&mut self, t: Triple) -> usize {
        self.clouds.push(Cloud { triple: t, points: Vec::new() });
        self.clouds.len() - 1
    }

    fn find(&self, c: usize, name: &str) -> usize {
        self.clouds[c].points.iter().position(|p| p.name == name).unwrap_or_else(|| panic!("no point {name}"))
    }

    fn open(&mut self, c: usize, name: String, coords: Vec<BigRational>) {
        let t = &self.clouds[c].triple;
        let legs = "*,".repeat(t.k);
        let form = format!("[{}|]({})", t.beta.token(), legs.trim_end_matches(','));
        let tree = DecoratedTree::parse_canonical(&form).expect("trivial tree");
        self.clouds[c].points.push(ModelPoint { name, coords, tree, factors: Vec::new() });
    }

    fn product(&mut self, c: usize, name: String, coords: Vec<BigRational>, form: &str, factors: &[(usize, &str)]) {
        let tree = DecoratedTree::parse_canonical(form).expect("boundary tree");
        let factors = factors.iter().map(|&(fc, n)| self.find(fc, n)).collect();
        self.clouds[c].points.push(ModelPoint { name, coords, tree, factors });
    }

    fn finish(self) -> StratifiedModel {
        StratifiedModel::new(self.monoid, self.clouds).expect("fixture model is valid")
    }
}

/// `D` alone: a 6 × 5 grid with spacing 1/5.
pub fn disk_model() -> StratifiedModel {
    let mut b = Builder::new();
    let d = b.cloud(b.triple(0, 1));
    for i in 0..6 {
        for j in 0..5 {
            b.open(d, format!("d{i}{j}"), vec![q(i, 5), q(j, 5)]);
        }
    }
    b.finish()
}

fn lower_levels(b: &mut Builder) -> (usize, usize, usize) {
    let z = b.cloud(b.triple(2, 0));
    b.open(z, "o".into(), vec![q(0, 1)]);
    let d = b.cloud(b.triple(0, 1));
    for i in 0..5 {
        for j in 0..5 {
            b.open(d, format!("d{i}{j}"), vec![q(i, 4), q(j, 4)]);
        }
    }
    let s = b.cloud(b.triple(1, 1));
    for (tag, form, x0) in [("l", "[0|](*,[1|]())", 0), ("r", "[0|]([1|](),*)", 2)] {
        for j in 0..5 {
            let x = q(x0 * 4 + j, 4);
            b.product(s, format!("{tag}{j}"), vec![x.clone(), q(0, 1)], form, &[(z, "o"), (d, &format!("d{j}0"))]);
            b.open(s, format!("c{tag}{j}"), vec![x, q(1, 500)]);
        }
    }
    for i in 0..=15 {
        for j in 1..=10 {
            b.open(s, format!("g{i}.{j}"), vec![q(i, 5), q(j, 5)]);
        }
    }
    (z, d, s)
}

/// `Z`, `D` and `S`: boundary points of `S` are products, each with a collar
/// point at height 1/500 above it.
pub fn two_level_model() -> StratifiedModel {
    let mut b = Builder::new();
    lower_levels(&mut b);
    b.finish()
}

/// The two-level model plus `W`, whose boundary factors through `S`.
pub fn three_level_model() -> StratifiedModel {
    let mut b = Builder::new();
    let (z, d, s) = lower_levels(&mut b);
    let w = b.cloud(b.triple(0, 2));
    let mut xs = Vec::new();
    for j in 0..5 {
        let x = q(j, 4);
        b.product(w, format!("a{j}"), vec![x.clone(), q(0, 1)], "[1|]([1|]())", &[(s, &format!("cl{j}")), (d, "d22")]);
        xs.push(x);
    }
    b.product(w, "a5".into(), vec![q(10, 1), q(0, 1)], "[1|]([1|]())", &[(s, "g5.5"), (d, "d22")]);
    xs.push(q(10, 1));
    for j in 0..5 {
        let x = q(80 + j, 4);
        let (d1, d2) = (format!("d{j}0"), format!("d{j}4"));
        b.product(w, format!("e{j}"), vec![x.clone(), q(0, 1)], "[0|]([1|](),[1|]())", &[(z, "o"), (d, &d1), (d, &d2)]);
        xs.push(x);
    }
    for (j, x) in xs.iter().enumerate() {
        b.open(w, format!("c{j}"), vec![x.clone(), q(1, 500)]);
    }
    for (lo, hi) in [(0, 5), (48, 52), (100, 105)] {
        for i in lo..=hi {
            for j in 1..=5 {
                b.open(w, format!("g{i}.{j}"), vec![q(i, 5), q(j, 5)]);
            }
        }
    }
    b.finish()
}

/// The shipped fixtures by name.
pub fn cover_fixtures() -> Vec<(&'static str, StratifiedModel)> {
    vec![("disk", disk_model()), ("two-level", two_level_model()), ("three-level", three_level_model())]
}

/// A two-level model with `n` random interior points of `S` on a 1/100 lattice,
/// all at height at least 1/5.
pub fn random_two_level_model(seed: u64, n: usize) -> StratifiedModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::new();
    let z = b.cloud(b.triple(2, 0));
    b.open(z, "o".into(), vec![q(0, 1)]);
    let d = b.cloud(b.triple(0, 1));
    for i in 0..n.max(3) {
        b.open(d, format!("d{i}"), vec![q(rng.gen_range(0..=100), 100), q(rng.gen_range(0..=100), 100)]);
    }
    let s = b.cloud(b.triple(1, 1));
    // Boundary points spaced by the largest factor distance, so the product metric condition holds.
    let mut x = 0i64;
    for j in 0..3 {
        b.product(s, format!("l{j}"), vec![q(x, 100), q(0, 1)], "[0|](*,[1|]())", &[(z, "o"), (d, &format!("d{j}"))]);
        b.open(s, format!("cl{j}"), vec![q(x, 100), q(1, 500)]);
        x += 150;
    }
    for i in 0..n {
        let px = rng.gen_range(0..=(x + 50));
        let py = rng.gen_range(20..=200);
        b.open(s, format!("g{i}"), vec![q(px, 100), q(py, 100)]);
    }
    b.finish()
}
