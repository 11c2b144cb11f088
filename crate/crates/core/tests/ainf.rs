mod common;

use common::ainf::{e0, oracle, perturb};
use kuratree_core::corner::SignConvention;
use kuratree_core::novikov::fixtures::{consistent_fixtures, dga_fixture};
use kuratree_core::novikov::{ainf_defect, check_family, defect_cells, FamilyTable, OperationTable};
use num_rational::BigRational;

#[test]
fn fixtures_have_zero_defect_and_agree_with_the_oracle() {
    for (name, tab) in consistent_fixtures() {
        assert!(oracle(&tab, e0()).is_empty(), "{name}");
        let r = ainf_defect(&tab, e0()).unwrap();
        assert!(r.passed, "{name}: {:?}", r.entries);
        assert!(r.cells.is_empty(), "{name}");
    }
}

#[test]
fn permuting_the_basis_keeps_the_defect() {
    for (name, tab) in consistent_fixtures() {
        let p = tab.permute_basis(&[1, 2, 0]).unwrap();
        assert!(ainf_defect(&p, e0()).unwrap().passed, "{name}");
    }
    let mut broken = dga_fixture(false);
    let z = broken.monoid().zero();
    broken.set_labels(&z, &["1"], "y", BigRational::from_integer(1.into())).unwrap();
    let a = ainf_defect(&broken, e0()).unwrap();
    let b = ainf_defect(&broken.permute_basis(&[2, 0, 1]).unwrap(), e0()).unwrap();
    assert!(!a.passed);
    assert_eq!(a.entries.len(), b.entries.len());
}

#[test]
fn checker_matches_the_oracle_on_raw_perturbations() {
    for seed in 0..200 {
        let tab = perturb(seed);
        let cells = defect_cells(&tab, e0(), SignConvention::default());
        let expected = oracle(&tab, e0());
        assert_eq!(cells, expected, "seed {seed}");
        assert_eq!(ainf_defect(&tab, e0()).unwrap().passed, expected.is_empty(), "seed {seed}");
    }
}

#[test]
fn hundred_broken_tables_are_detected() {
    // Some single-slot perturbations are genuine deformations (rescaling d,
    // a closed central curvature term, y·y = c·w); the oracle screens them out.
    let mut seed = 0;
    let mut deformations = 0;
    let mut detected = 0;
    while detected < 100 {
        let tab = perturb(seed);
        seed += 1;
        if oracle(&tab, e0()).is_empty() {
            deformations += 1;
            continue;
        }
        assert!(!ainf_defect(&tab, e0()).unwrap().passed, "seed {}", seed - 1);
        detected += 1;
    }
    assert!(deformations <= 10, "{deformations} deformations in {seed} draws");
}


#[test]
fn shipped_tables_match_the_fixtures() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/novikov");
    for (name, tab) in consistent_fixtures() {
        let text = std::fs::read_to_string(format!("{dir}/{name}.json")).unwrap();
        assert_eq!(OperationTable::from_json(&text).unwrap(), tab, "{name}");
    }
    let fam = FamilyTable::from_json(&std::fs::read_to_string(format!("{dir}/gauge-path.json")).unwrap()).unwrap();
    assert!(check_family(&fam, e0()).unwrap().passed);
}
