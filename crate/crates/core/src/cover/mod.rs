//! Disk-component-wise covers on finite stratified models.
//!
//! Each moduli index carries a finite metric point cloud. Points with a
//! nontrivial tree are products of open-stratum points of smaller indices. A
//! cover assigns every point two label sets `ℱ°(p) ⊆ ℱ(p)`; a label records a
//! base point `𝔭` and the hops through which it reached `p`.

mod build;
pub mod fixtures;
mod maps;
mod model;
mod verify;

pub use build::{
    base_ids, base_radii, build_cover, collar_rho_sq, compare_covers, in_collar, BuildOrder, CompareReport,
    CoverConfig, CoverRelation,
};
pub use maps::{
    base_id, pushforward, BaseDatum, BaseRecord, CloudCoverRecord, CoverFile, CoverMaps, Hop, Label, PointCoverRecord,
    PointLabels, QuasiComponent,
};
pub use model::{dist_sq, Cloud, CloudRecord, ModelFile, ModelPoint, PointRecord, PointRef, StratifiedModel};
pub use verify::{verify_cover, ClauseReport, CoverReport};

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn failing(r: &CoverReport) -> Vec<&str> {
        r.clauses.iter().filter(|c| !c.passed).map(|c| c.clause.as_str()).collect()
    }

    #[test]
    fn interior_only_model_gets_direct_labels() {
        let m = disk_model();
        let cm = build_cover(&m, &CoverConfig::default()).unwrap();
        assert!(cm.labels.iter().flatten().flat_map(|l| &l.proper).all(|l| l.xi.is_empty()));
        assert!(verify_cover(&m, &cm).passed);
    }

    #[test]
    fn fixtures_build_and_verify() {
        for (name, m) in cover_fixtures() {
            let cm = build_cover(&m, &CoverConfig::default()).unwrap();
            let r = verify_cover(&m, &cm);
            assert!(r.passed, "{name}: {:?}", r.clauses);
        }
    }

    #[test]
    fn uncovered_point_fails_coverage() {
        let m = disk_model();
        let mut cm = build_cover(&m, &CoverConfig::default()).unwrap();
        cm.labels[0][7].open.clear();
        let r = verify_cover(&m, &cm);
        assert!(failing(&r).contains(&"D"));
    }

    #[test]
    fn deleting_a_pushforward_breaks_the_boundary_law() {
        let m = two_level_model();
        let mut cm = build_cover(&m, &CoverConfig::default()).unwrap();
        let s = m.clouds().len() - 1;
        let p = m.clouds()[s].points.iter().position(|p| p.is_boundary()).unwrap();
        let dropped = cm.labels[s][p].open.iter().position(|l| l.xi[0].vertex == 1).unwrap();
        cm.labels[s][p].open.remove(dropped);
        assert!(failing(&verify_cover(&m, &cm)).contains(&"B"));
    }

    #[test]
    fn duplicate_label_fails_direct_sum() {
        let m = disk_model();
        let mut cm = build_cover(&m, &CoverConfig::default()).unwrap();
        let l = cm.labels[0][0].proper[0].clone();
        cm.labels[0][0].proper.push(l);
        assert!(failing(&verify_cover(&m, &cm)).contains(&"C"));
    }

    #[test]
    fn pushforward_prepends_one_hop() {
        let m = two_level_model();
        let cm = build_cover(&m, &CoverConfig::default()).unwrap();
        let s = m.clouds().len() - 1;
        let p = m.clouds()[s].points.iter().position(|p| p.is_boundary()).unwrap();
        let f = m.factor_refs((s, p));
        let qc = QuasiComponent { point: f[0], label: cm.at(f[0]).open[0].clone() };
        let pushed = pushforward(&m, &qc, (s, p), 0).unwrap();
        assert_eq!(pushed.label.xi.len(), 1);
        assert_eq!(pushed.point, (s, p));
        assert!(pushforward(&m, &qc, (s, p), 1).is_err());
        assert!(pushforward(&m, &qc, (s, p), 2).is_err());
        let inner = QuasiComponent { point: f[1], label: cm.at(f[1]).open[0].clone() };
        assert_ne!(pushforward(&m, &inner, (s, p), 1).unwrap(), pushed);
    }

    #[test]
    fn independent_builds_are_equivalent() {
        for (name, m) in cover_fixtures() {
            let a = build_cover(&m, &CoverConfig::default()).unwrap();
            let b = build_cover(&m, &CoverConfig { order: BuildOrder::Reverse, ..CoverConfig::default() }).unwrap();
            assert_ne!(base_ids(&a), base_ids(&b), "{name}");
            let r = compare_covers(&m, &a, &b, &CoverConfig::default());
            assert_eq!(r.relation, CoverRelation::Equivalent, "{name}");
            assert_eq!(compare_covers(&m, &a, &a, &CoverConfig::default()).relation, CoverRelation::Equivalent);
        }
    }

    #[test]
    fn adding_a_base_gives_containment() {
        let m = disk_model();
        let a = build_cover(&m, &CoverConfig::default()).unwrap();
        let b = build_cover(&m, &CoverConfig { order: BuildOrder::Reverse, ..CoverConfig::default() }).unwrap();
        let extra = b.bases.iter().find(|x| a.base(&x.id).is_none()).unwrap().clone();
        let mut one = CoverMaps { bases: vec![extra.clone()], ..a.clone() };
        for (pi, l) in one.labels[0].iter_mut().enumerate() {
            let d = m.dist_sq((0, pi), extra.point);
            l.open = if d < extra.r_open_sq { vec![Label::direct(&extra.id)] } else { vec![] };
            l.proper = if d <= extra.r_open_sq { vec![Label::direct(&extra.id)] } else { vec![] };
        }
        let bigger = a.union(&one);
        assert!(verify_cover(&m, &bigger).passed);
        let r = compare_covers(&m, &a, &bigger, &CoverConfig::default());
        assert_eq!(r.relation, CoverRelation::Contained);
        assert!(r.first_in_second);
    }

    #[test]
    fn cover_file_round_trip() {
        let m = three_level_model();
        let cm = build_cover(&m, &CoverConfig::default()).unwrap();
        assert_eq!(CoverMaps::from_json(&m, &cm.to_json(&m)).unwrap(), cm);
        assert_eq!(StratifiedModel::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn coarse_resolution_is_reported() {
        let m = two_level_model();
        let cfg = CoverConfig { r_min_sq: BigRational::new(1.into(), 4.into()), ..CoverConfig::default() };
        assert!(matches!(build_cover(&m, &cfg), Err(crate::CoverError::ResolutionTooCoarse(..))));
    }

    use num_rational::BigRational;
}
