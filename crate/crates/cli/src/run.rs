use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use serde_json::{json, Value};

use kuratree_core::blaschke::{
    degeneration_path, maslov_via_winding, moduli_dim_check, solve_fiber_product, winding, BlaschkeMap, Family,
};
use kuratree_core::corner::{Calculus, KIndex, ParamSpace, SignConvention};
use kuratree_core::cover::{
    build_cover, compare_covers, verify_cover, BuildOrder, CoverConfig, CoverMaps, CoverRelation, StratifiedModel,
};
use kuratree_core::novikov::{ainf_defect_with, check_family, FamilyTable, OperationTable};
use kuratree_core::rational::{parse_big_rational, parse_rational};
use kuratree_core::tree::enumerate_trees;
use kuratree_core::{ClassElement, ClassMonoid};

use crate::report::Report;
use crate::{BlaschkeCommand, Command, Convention, CoverArgs, IndexArgs, Order, RunConfig};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn rational(s: &str, what: &str) -> Result<Rational64> {
    parse_rational(s).map_err(|e| anyhow!("{what}: {e}"))
}

fn big_rational(s: &str, what: &str) -> Result<BigRational> {
    parse_big_rational(s).map_err(|e| anyhow!("{what}: {e}"))
}

impl RunConfig {
    fn monoid(&self) -> Result<ClassMonoid> {
        match &self.monoid {
            None => Ok(ClassMonoid::unit()),
            Some(p) => ClassMonoid::from_json(&read(p)?).with_context(|| format!("monoid file {}", p.display())),
        }
    }

    fn e0(&self) -> Result<Rational64> {
        let e0 = rational(&self.e0, "--e0")?;
        if e0 <= Rational64::from_integer(0) {
            bail!("--e0 must be positive");
        }
        Ok(e0)
    }

    fn sign_convention(&self) -> SignConvention {
        match self.convention {
            Convention::Shifted => SignConvention::ShiftedKoszul,
            Convention::Unshifted => SignConvention::Unshifted,
        }
    }

    fn params(&self) -> Vec<ParamSpace> {
        if self.interval {
            vec![ParamSpace::Point, ParamSpace::Interval]
        } else {
            vec![ParamSpace::Point]
        }
    }

    /// Active indices with `k ≤ kmax`, `ℓ ≤ lmax`, `E(β) ≤ emax`.
    fn sweep(&self, calc: &Calculus, monoid: &ClassMonoid) -> Result<Vec<KIndex>> {
        let emax = rational(&self.emax, "--emax")?;
        let classes = monoid.classes_up_to_energy(emax)?;
        let mut out = Vec::new();
        for beta in &classes {
            for k in 0..=self.kmax {
                for ell in 0..=self.lmax {
                    for &param in &self.params() {
                        let idx = KIndex::new(k, ell, beta.clone()).with_param(param);
                        if calc.is_active(&idx.triple()) {
                            out.push(idx);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn beta(monoid: &ClassMonoid, spec: Option<&str>) -> Result<ClassElement> {
    match spec {
        None => Ok(monoid.zero()),
        Some(s) => {
            let exps = s
                .split(',')
                .map(|t| t.trim().parse::<u32>().with_context(|| format!("--beta: bad exponent {t:?}")))
                .collect::<Result<Vec<_>>>()?;
            Ok(monoid.element(exps)?)
        }
    }
}

fn index(config: &RunConfig, monoid: &ClassMonoid, a: &IndexArgs) -> Result<KIndex> {
    let param = if config.interval { ParamSpace::Interval } else { ParamSpace::Point };
    Ok(KIndex::new(a.k, a.ell, beta(monoid, a.beta.as_deref())?).with_param(param))
}

fn cover_config(a: &CoverArgs) -> Result<CoverConfig> {
    Ok(CoverConfig {
        r_max_sq: big_rational(&a.r_max_sq, "--r-max-sq")?,
        r_min_sq: big_rational(&a.r_min_sq, "--r-min-sq")?,
        rho_sq: a.rho_sq.as_deref().map(|s| big_rational(s, "--rho-sq")).transpose()?,
        order: match a.order {
            Order::Forward => BuildOrder::Forward,
            Order::Reverse => BuildOrder::Reverse,
        },
        ..CoverConfig::default()
    })
}

fn model(path: &Path) -> Result<StratifiedModel> {
    StratifiedModel::from_json(&read(path)?).with_context(|| format!("model file {}", path.display()))
}

/// Reads a cover file, or the `records` of a `build-cover` report.
fn cover(model: &StratifiedModel, path: &Path) -> Result<CoverMaps> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("cover file {}", path.display()))?;
    let text = match v.get("schema") {
        Some(_) => serde_json::to_string(&v["records"])?,
        None => text,
    };
    CoverMaps::from_json(model, &text).with_context(|| format!("cover file {}", path.display()))
}

fn pair(s: &str, what: &str) -> Result<(u32, usize)> {
    let (a, b) = s.split_once(',').ok_or_else(|| anyhow!("{what}: expected d,k"))?;
    Ok((a.trim().parse().context(what.to_string())?, b.trim().parse().context(what.to_string())?))
}

fn zeros(s: &str) -> Result<Vec<Complex64>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (re, im) = t.split_once(',').ok_or_else(|| anyhow!("--zeros: expected re,im in {t:?}"))?;
            Ok(Complex64::new(re.trim().parse().context("--zeros")?, im.trim().parse().context("--zeros")?))
        })
        .collect()
}

pub fn run(command: &Command, config: &RunConfig) -> Result<Report> {
    let monoid = config.monoid()?;
    let calc = Calculus::new(&monoid).with_convention(config.sign_convention());
    Ok(match command {
        Command::Trees(a) => {
            let idx = index(config, &monoid, a)?;
            let trees = enumerate_trees(idx.k, idx.ell, &idx.beta, &monoid);
            let records: Vec<_> = trees.iter().map(|t| t.record()).collect();
            Report::new("trees", true, json!({ "index": idx.record(&monoid), "trees": records.len() }), records)
        }
        Command::Boundary(a) => {
            let idx = index(config, &monoid, a)?;
            let terms: Vec<_> = calc.normalized_boundary(&idx).iter().map(|t| t.record()).collect();
            Report::new("boundary", true, json!({ "index": idx.record(&monoid), "terms": terms.len() }), terms)
        }
        Command::Corners { index: a, codim } => {
            let idx = index(config, &monoid, a)?;
            let strata: Vec<_> = calc.normalized_corner(&idx, *codim).iter().map(|d| d.record()).collect();
            let summary = json!({ "index": idx.record(&monoid), "codim": codim, "strata": strata.len() });
            Report::new("corners", true, summary, strata)
        }
        Command::CheckD2 => {
            let reports: Vec<_> = config.sweep(&calc, &monoid)?.iter().map(|i| calc.check_d_squared(i)).collect();
            let failed = reports.iter().filter(|r| !r.passed).count();
            let pairs: usize = reports.iter().map(|r| r.pairs.len()).sum();
            let unpaired: usize = reports.iter().map(|r| r.unpaired.len()).sum();
            let summary = json!({ "indices": reports.len(), "pairs": pairs, "unpaired": unpaired, "failed": failed });
            Report::new("check-d2", failed == 0, summary, reports)
        }
        Command::CheckCornerCount { m1, m2, max_total } => {
            let pairs: Vec<(usize, usize)> = match (m1, m2) {
                (Some(a), Some(b)) => vec![(*a, *b)],
                _ => (0..=*max_total).flat_map(|t| (0..=t).map(move |a| (a, t - a))).collect(),
            };
            let mut reports = Vec::new();
            for idx in config.sweep(&calc, &monoid)? {
                for &(a, b) in &pairs {
                    reports.push(calc.check_corner_consistency(&idx, a, b));
                }
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            let descriptors: usize = reports.iter().map(|r| r.descriptors.len()).sum();
            let summary = json!({ "cases": reports.len(), "descriptors": descriptors, "failed": failed });
            Report::new("check-corner-count", failed == 0, summary, reports)
        }
        Command::CheckAinf { table } => {
            let tab = OperationTable::from_json(&read(table)?).with_context(|| format!("table {}", table.display()))?;
            let r = ainf_defect_with(&tab, config.e0()?, config.sign_convention())?;
            let summary = json!({ "e0": r.e0, "entries": tab.num_entries(), "defects": r.entries.len() });
            Report::new("check-ainf", r.passed, summary, r.clone())
        }
        Command::CheckFamily { family } => {
            let fam = FamilyTable::from_json(&read(family)?).with_context(|| format!("family {}", family.display()))?;
            let r = check_family(&fam, config.e0()?)?;
            Report::new("check-family", r.passed, json!({ "violation": r.violation }), r.clone())
        }
        Command::BuildCover { model: path, cover: args } => {
            let m = model(path)?;
            let cm = build_cover(&m, &cover_config(args)?)?;
            let summary = json!({ "points": m.num_points(), "bases": cm.bases.len(), "labels": cm.num_labels() });
            let records: Value = serde_json::from_str(&cm.to_json(&m))?;
            Report::new("build-cover", true, summary, records)
        }
        Command::VerifyCover { model: path, cover: cpath } => {
            let m = model(path)?;
            let r = verify_cover(&m, &cover(&m, cpath)?);
            let failed: Vec<_> = r.clauses.iter().filter(|c| !c.passed).map(|c| c.clause.clone()).collect();
            let summary = json!({ "points": r.points, "bases": r.bases, "labels": r.labels, "failed_clauses": failed });
            Report::new("verify-cover", r.passed, summary, r.clone())
        }
        Command::CompareCovers { model: path, first, second, zigzag_depth } => {
            let m = model(path)?;
            let (a, b) = (cover(&m, first)?, cover(&m, second)?);
            let cfg = CoverConfig { zigzag_depth: *zigzag_depth, ..CoverConfig::default() };
            let r = compare_covers(&m, &a, &b, &cfg);
            let ok = r.relation != CoverRelation::Incomparable && r.first_valid && r.second_valid;
            Report::new("compare-covers", ok, json!({ "relation": r.relation }), r.clone())
        }
        Command::Blaschke(b) => blaschke(b, config)?,
    })
}

fn blaschke(command: &BlaschkeCommand, config: &RunConfig) -> Result<Report> {
    Ok(match command {
        BlaschkeCommand::Dim { d, k } => {
            let single = d.is_some();
            let pairs: Vec<(u32, u32)> = match (d, k) {
                (Some(d), Some(k)) => vec![(*d, *k)],
                _ => (0..=3).flat_map(|d| (0..=config.kmax as u32).map(move |k| (d, k))).collect(),
            };
            let mut reports = Vec::new();
            for (d, k) in pairs {
                match moduli_dim_check(d, k) {
                    Ok(r) => reports.push(r),
                    Err(e) if single => return Err(e.into()),
                    Err(_) => {}
                }
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            Report::new("blaschke-dim", failed == 0, json!({ "checked": reports.len(), "failed": failed }), reports)
        }
        BlaschkeCommand::Winding { zeros: z, theta } => {
            let u = BlaschkeMap::new(zeros(z)?, *theta)?;
            let w = winding(&u);
            let maslov = maslov_via_winding(&u);
            let passed = maslov.as_ref().map_or(false, |m| *m == 2 * u.degree() as i64);
            let summary = json!({ "degree": u.degree(), "maslov": maslov.as_ref().ok() });
            Report::new("blaschke-winding", passed, summary, json!({ "map": u, "winding": w }))
        }
        BlaschkeCommand::Fiber { first, second, slot, seeds } => {
            let (d1, k1) = pair(first, "--first")?;
            let (d2, k2) = pair(second, "--second")?;
            let f1 = Family::full_chart(d1, k1)?;
            let f2 = Family::full_chart(d2, k2)?;
            let seeds: Vec<u64> = (0..*seeds).collect();
            let r = solve_fiber_product(&f1, &f2, *slot, &seeds)?;
            let summary = json!({
                "expected_dim": r.expected_dim,
                "symbolic_dim": r.symbolic_dim,
                "within_tolerance": r.within_tolerance,
                "seeds": seeds.len(),
            });
            Report::new("blaschke-fiber", r.passed, summary, r.clone())
        }
        BlaschkeCommand::Degenerate { d1, d2, w } => {
            let r = degeneration_path(d1 + d2, (*d1, *d2), *w)?;
            let last = r.steps.last().expect("trajectory");
            let summary = json!({
                "tree": r.tree,
                "in_boundary": r.in_boundary,
                "main_error": last.main_error,
                "bubble_error": last.bubble_error,
            });
            Report::new("blaschke-degenerate", r.passed, summary, r.clone())
        }
    })
}
