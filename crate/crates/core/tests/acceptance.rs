mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::ainf::{e0, oracle, perturb};
use common::{brute_force_forms, form_hash};
use kuratree_core::blaschke::{
    degeneration_path, maslov_via_winding, moduli_dim_check, solve_fiber_product, BlaschkeMap, Family, RESIDUAL_TOL,
};
use kuratree_core::corner::{all_permutations, Calculus, KIndex};
use kuratree_core::cover::fixtures::cover_fixtures;
use kuratree_core::cover::{build_cover, compare_covers, verify_cover, BuildOrder, CoverConfig, CoverRelation};
use kuratree_core::monoid::{ClassMonoid, DefaultActivity};
use kuratree_core::novikov::ainf_defect;
use kuratree_core::novikov::fixtures::{consistent_fixtures, dga_fixture};
use kuratree_core::tree::{count_trees, enumerate_trees, for_each_tree_form};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const BUDGET: Duration = Duration::from_secs(60);

fn indices(m: &ClassMonoid, max_ell: usize) -> Vec<KIndex> {
    let mut out = Vec::new();
    for e in 0..=3 {
        for k in 0..=3 {
            for ell in 0..=max_ell {
                out.push(KIndex::new(k, ell, m.multiple(0, e)));
            }
        }
    }
    out
}

fn corner_count() -> Outcome {
    let m = ClassMonoid::unit();
    let calc = Calculus::new(&m);
    let start = Instant::now();
    let (mut checked, mut descriptors) = (0, 0);
    for idx in indices(&m, 1) {
        if !calc.is_active(&idx.triple()) {
            continue;
        }
        for total in 0..=4 {
            for m1 in 0..=total {
                let r = calc.check_corner_consistency(&idx, m1, total - m1);
                if !r.passed {
                    return Err(format!("{:?} m1={m1} m2={}: {:?}", r.index, total - m1, r.deviations.first()));
                }
                checked += 1;
                descriptors += r.descriptors.len();
            }
        }
    }
    let t = start.elapsed();
    if t > BUDGET {
        return Err(format!("took {t:.1?}"));
    }
    Ok(format!("{checked} (index, m1, m2) cases, {descriptors} descriptors, {t:.1?}"))
}

fn sign_coherence() -> Outcome {
    let m = ClassMonoid::unit();
    let calc = Calculus::new(&m);
    let start = Instant::now();
    let (mut indices_checked, mut pairs) = (0, 0);
    for idx in indices(&m, 1) {
        if !calc.is_active(&idx.triple()) {
            continue;
        }
        let r = calc.check_d_squared(&idx);
        if !r.passed || !r.unpaired.is_empty() {
            return Err(format!("{:?}: {} unpaired", r.index, r.unpaired.len()));
        }
        indices_checked += 1;
        pairs += r.pairs.len();
    }
    let t = start.elapsed();
    if t > BUDGET {
        return Err(format!("took {t:.1?}"));
    }
    Ok(format!("{indices_checked} indices, {pairs} cancelling pairs, {t:.1?}"))
}

fn enumeration_oracle() -> Outcome {
    let m = ClassMonoid::unit();
    let mut total = 0u128;
    for k in 0..=3 {
        for ell in 0..=2 {
            for e in 0..=3 {
                let beta = m.multiple(0, e);
                let counts = count_trees(k, ell, &beta, &m, &DefaultActivity);
                let mut by_size = vec![0u128; counts.len()];
                let size: u128 = counts.iter().sum();
                let here = format!("k={k} ell={ell} e={e}");
                if size <= 200_000 {
                    let ours: Vec<String> = enumerate_trees(k, ell, &beta, &m).iter().map(|t| t.canonical_form()).collect();
                    let mut theirs = BTreeSet::new();
                    brute_force_forms(k, ell, e, |s, n| {
                        theirs.insert(s.to_string());
                        if by_size.len() <= n {
                            by_size.resize(n + 1, 0);
                        }
                        by_size[n] += 1;
                    });
                    if ours.len() != theirs.len() || ours.into_iter().collect::<BTreeSet<_>>() != theirs {
                        return Err(format!("{here}: canonical forms differ"));
                    }
                } else {
                    let mut ours = Vec::with_capacity(size as usize);
                    for_each_tree_form(k, ell, &beta, &m, &DefaultActivity, None, |s, _| ours.push(form_hash(s)));
                    ours.sort_unstable();
                    let mut theirs = Vec::with_capacity(size as usize);
                    brute_force_forms(k, ell, e, |s, n| {
                        theirs.push(form_hash(s));
                        if by_size.len() <= n {
                            by_size.resize(n + 1, 0);
                        }
                        by_size[n] += 1;
                    });
                    theirs.sort_unstable();
                    if ours != theirs {
                        return Err(format!("{here}: form fingerprints differ"));
                    }
                }
                if by_size != counts {
                    return Err(format!("{here}: counts by size {counts:?} vs {by_size:?}"));
                }
                total += size;
            }
        }
    }
    Ok(format!("{total} trees over 48 indices"))
}

fn filtered_ainf() -> Outcome {
    let mut tables = consistent_fixtures();
    tables.push(("dga", dga_fixture(false)));
    for (name, tab) in &tables {
        let r = ainf_defect(tab, e0()).map_err(|e| format!("{name}: {e}"))?;
        if !r.passed {
            return Err(format!("{name}: defect {:?}", r.entries.first()));
        }
    }
    let (mut seed, mut detected, mut deformations) = (0, 0, 0);
    while detected < 100 {
        let tab = perturb(seed);
        seed += 1;
        if oracle(&tab, e0()).is_empty() {
            deformations += 1;
            continue;
        }
        if ainf_defect(&tab, e0()).map_err(|e| e.to_string())?.passed {
            return Err(format!("perturbation {} not detected", seed - 1));
        }
        detected += 1;
    }
    Ok(format!("{} fixtures exact, 100/100 perturbations detected ({deformations} deformations skipped)", tables.len()))
}

fn dimension_formula() -> Outcome {
    let mut n = 0;
    for d in 0..=3 {
        for k in 0..=3 {
            match moduli_dim_check(d, k) {
                Ok(r) if r.passed => n += 1,
                Ok(r) => return Err(format!("{r:?}")),
                Err(_) if d == 0 && k < 2 => {}
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(format!("{n} stable (d, k)"))
}

fn numerical_backend() -> Outcome {
    let seeds: Vec<u64> = (0..64).collect();
    let mut worst = 64;
    for (a, b, slot) in [((1, 1), (1, 1), 1), ((1, 2), (1, 0), 2), ((0, 2), (2, 1), 1), ((2, 3), (1, 2), 3)] {
        let f1 = Family::full_chart(a.0, a.1).map_err(|e| e.to_string())?;
        let f2 = Family::full_chart(b.0, b.1).map_err(|e| e.to_string())?;
        let r = solve_fiber_product(&f1, &f2, slot, &seeds).map_err(|e| e.to_string())?;
        let good = r.seeds.iter().filter(|s| s.transverse && s.residual < RESIDUAL_TOL).count();
        if good * 100 < 95 * 64 || !r.passed {
            return Err(format!("{a:?}x{b:?}: {good}/64 below 1e-9"));
        }
        worst = worst.min(good);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..500 {
        let d = rng.gen_range(0..=4);
        let zeros = (0..d)
            .map(|_| Complex64::from_polar(1.0 - 10f64.powf(rng.gen_range(-4.0..0.0)), rng.gen_range(0.0..6.3)))
            .collect();
        let u = BlaschkeMap::new(zeros, rng.gen_range(0.0..6.3)).map_err(|e| e.to_string())?;
        if maslov_via_winding(&u).map_err(|e| e.to_string())? != 2 * d as i64 {
            return Err(format!("winding trial {trial}"));
        }
    }
    let mut worst_split = 0.0f64;
    for (d1, d2) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
        let r = degeneration_path(d1 + d2, (d1, d2), 0.7).map_err(|e| e.to_string())?;
        let last = r.steps.last().expect("trajectory");
        worst_split = worst_split.max(last.main_error).max(last.bubble_error);
        if !r.passed {
            return Err(format!("split {d1}+{d2}: {last:?}"));
        }
    }
    Ok(format!("fiber ≥{worst}/64 seeds, 500 windings exact, split error ≤ {worst_split:.1e}"))
}

fn cover_engine() -> Outcome {
    let fixtures = cover_fixtures();
    for (name, m) in &fixtures {
        let a = build_cover(m, &CoverConfig::default()).map_err(|e| format!("{name}: {e}"))?;
        let r = verify_cover(m, &a);
        if !r.passed || r.clauses.len() != 4 {
            return Err(format!("{name}: {:?}", r.clauses.iter().find(|c| !c.passed)));
        }
        let config = CoverConfig { order: BuildOrder::Reverse, ..CoverConfig::default() };
        let b = build_cover(m, &config).map_err(|e| format!("{name}: {e}"))?;
        let c = compare_covers(m, &a, &b, &CoverConfig::default());
        if c.relation != CoverRelation::Equivalent || !c.first_valid || !c.second_valid {
            return Err(format!("{name}: {:?}", c.relation));
        }
    }
    Ok(format!("{} fixtures", fixtures.len()))
}

fn symmetry() -> Outcome {
    let m = ClassMonoid::unit();
    let calc = Calculus::new(&m);
    let (mut perms, mut strata) = (0, 0);
    for e in 0..=3 {
        for k in 0..=3 {
            for ell in 0..=3 {
                let idx = KIndex::new(k, ell, m.multiple(0, e));
                let g = calc.check_group_action(&idx, 2);
                if !g.passed {
                    return Err(format!("{:?}: group law", g.index));
                }
                strata += g.strata;
                for p in all_permutations(ell) {
                    let r = calc.perm_relabel(&idx, &p, 2).map_err(|e| e.to_string())?;
                    if !r.passed {
                        return Err(format!("{:?} under {p:?}", idx.triple()));
                    }
                    perms += 1;
                }
            }
        }
    }
    Ok(format!("{perms} (index, permutation) pairs, {strata} strata"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("corner-count identity", corner_count),
        ("sign coherence", sign_coherence),
        ("enumeration oracle", enumeration_oracle),
        ("filtered A-infinity relation", filtered_ainf),
        ("dimension formula", dimension_formula),
        ("numerical backend", numerical_backend),
        ("cover engine", cover_engine),
        ("symmetry", symmetry),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
