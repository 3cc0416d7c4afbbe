//! Knot data that the front cannot supply: tau, genus, L-space status.
//!
//! Values for the bundled entries come from standard knot tables.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KnotRecord {
    pub name: String,
    pub tau: Rational,
    pub genus: u32,
    pub l_space_knot: bool,
    /// Maximal Thurston–Bennequin number, for sanity checks.
    pub tb_max: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("{0}: an L-space knot must have tau equal to its genus")]
    LSpaceTau(String),
    #[error("{0}: |tau| exceeds the genus")]
    TauBound(String),
    #[error("duplicate knot `{0}`")]
    Duplicate(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnotTable {
    records: BTreeMap<String, KnotRecord>,
}

impl KnotTable {
    pub fn new() -> Self {
        KnotTable::default()
    }

    /// Unknot, both trefoils, the figure-eight and the (2,5) torus knot.
    pub fn bundled() -> Self {
        let mut t = KnotTable::new();
        for (name, tau, genus, l_space, tb_max) in [
            ("unknot", 0, 0, true, -1),
            ("right-trefoil", 1, 1, true, 1),
            ("left-trefoil", -1, 1, false, -6),
            ("figure-eight", 0, 1, false, -3),
            ("torus-2-5", 2, 2, true, 3),
        ] {
            t.insert(KnotRecord {
                name: name.to_string(),
                tau: Rational::from(tau),
                genus,
                l_space_knot: l_space,
                tb_max: Some(tb_max),
            })
            .expect("bundled table is consistent");
        }
        t
    }

    pub fn insert(&mut self, rec: KnotRecord) -> Result<(), TableError> {
        if rec.l_space_knot && rec.tau != Rational::from(i64::from(rec.genus)) {
            return Err(TableError::LSpaceTau(rec.name));
        }
        if rec.tau.abs() > Rational::from(i64::from(rec.genus)) {
            return Err(TableError::TauBound(rec.name));
        }
        if self.records.contains_key(&rec.name) {
            return Err(TableError::Duplicate(rec.name));
        }
        self.records.insert(rec.name.clone(), rec);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&KnotRecord> {
        self.records.get(name)
    }

    pub fn records(&self) -> impl Iterator<Item = &KnotRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_entries() {
        let t = KnotTable::bundled();
        assert_eq!(t.len(), 5);
        let rt = t.get("right-trefoil").unwrap();
        assert_eq!((rt.tau.clone(), rt.genus, rt.l_space_knot), (Rational::from(1), 1, true));
        assert!(!t.get("figure-eight").unwrap().l_space_knot);
        assert_eq!(t.get("left-trefoil").unwrap().tau, Rational::from(-1));
    }

    #[test]
    fn l_space_records_need_tau_equal_genus() {
        let mut t = KnotTable::new();
        let bad = KnotRecord { name: "k".into(), tau: Rational::from(0), genus: 1, l_space_knot: true, tb_max: None };
        assert_eq!(t.insert(bad.clone()), Err(TableError::LSpaceTau("k".into())));
        let ok = KnotRecord { l_space_knot: false, ..bad };
        t.insert(ok.clone()).unwrap();
        assert_eq!(t.insert(ok), Err(TableError::Duplicate("k".into())));
    }
}
