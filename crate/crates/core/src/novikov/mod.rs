//! Novikov-ring coefficients and filtered A∞ operation tables.

mod defect;
mod family;
pub mod fixtures;
mod scalar;
mod table;

pub use defect::{ainf_defect, ainf_defect_with, defect_cells, relation_arities, DefectCell, DefectCells, DefectEntry, DefectReport};
pub use family::{check_family, FamilyFile, FamilyReport, FamilyTable, SampleRecord};
pub use scalar::{NovikovScalar, NovikovTerm};
pub use table::{assemble_mk, BasisRecord, Cell, EGrading, EntryRecord, GradedBasis, NovikovMap, OperationTable, TableFile};

#[cfg(test)]
mod tests {
    use num_rational::{BigRational, Rational64};

    use super::fixtures::*;
    use super::*;
    use crate::corner::SignConvention;

    fn e0() -> Rational64 {
        Rational64::from_integer(4)
    }

    #[test]
    fn empty_table_has_no_defect() {
        let tab = OperationTable::new(disk_monoid(), dga_fixture(false).basis().clone(), false, EGrading::Half);
        assert!(ainf_defect(&tab, e0()).unwrap().passed);
    }

    #[test]
    fn fixtures_satisfy_the_relations() {
        for (name, tab) in consistent_fixtures() {
            let r = ainf_defect(&tab, e0()).unwrap();
            assert!(r.passed, "{name}: {:?}", r.entries);
        }
    }

    #[test]
    fn unshifted_signs_break_the_dga() {
        let r = ainf_defect_with(&dga_fixture(false), e0(), SignConvention::Unshifted).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn broken_unit_is_detected() {
        let mut tab = dga_fixture(false);
        let zero = tab.monoid().zero();
        tab.set_labels(&zero, &["1", "1"], "1", BigRational::from_integer(2.into())).unwrap();
        let r = ainf_defect(&tab, e0()).unwrap();
        assert!(!r.passed);
        // (1·1)·y − 1·(1·y) = 2y − y.
        assert!(r.entries.iter().any(|e| e.k == 3 && e.inputs == ["1", "1", "y"] && e.output == "y" && e.value == "1"));
    }

    #[test]
    fn constant_family_passes() {
        let fam = FamilyTable::constant(&gauge_fixture(), Rational64::new(1, 10));
        assert!(check_family(&fam, e0()).unwrap().passed);
        let zero = FamilyTable::constant(&gauge_fixture(), Rational64::from_integer(0));
        assert!(matches!(check_family(&zero, e0()), Err(crate::NovikovError::NotCollared)));
    }

    #[test]
    fn gauge_path_is_collared() {
        let tab = dga_fixture(false);
        let b = tab.monoid().generator(0);
        let fam = FamilyTable::gauge_path(&tab, &unit_gauge(), &b, Rational64::new(1, 5), 10).unwrap();
        assert_eq!(fam.end, gauge_fixture());
        let r = check_family(&fam, e0()).unwrap();
        assert!(r.passed, "{r:?}");
        for (_, sample) in &fam.samples {
            assert!(ainf_defect(sample, e0()).unwrap().passed);
        }
    }

    #[test]
    fn breaking_the_collar_is_reported() {
        let tab = dga_fixture(false);
        let b = tab.monoid().generator(0);
        let mut fam = FamilyTable::gauge_path(&tab, &unit_gauge(), &b, Rational64::new(1, 5), 10).unwrap();
        fam.samples[1].1 = gauge_fixture();
        let r = check_family(&fam, e0()).unwrap();
        assert!(!r.passed);
        assert!(r.violation.unwrap().starts_with("(ii)"));
    }

    #[test]
    fn family_file_round_trip() {
        let fam = FamilyTable::constant(&curved_fixture(), Rational64::new(1, 4));
        assert_eq!(FamilyTable::from_json(&fam.to_json()).unwrap(), fam);
    }
}
