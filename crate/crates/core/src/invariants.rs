//! Classical invariants of a traced front: writhe, cusps, Thurston–Bennequin
//! number, rotation number and linking numbers.

use alloc::string::String;
use alloc::vec::Vec;

use crate::front::{ComponentId, Diagram, DiagramError};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("linking number of component {0} with itself; use the writhe instead")]
    SelfLinking(usize),
}

fn check(d: &Diagram, c: usize) -> Result<(), InvariantError> {
    d.component(c)?;
    Ok(())
}

/// Signed count of the self-crossings of component `c`.
pub fn writhe(d: &Diagram, c: usize) -> Result<i64, InvariantError> {
    check(d, c)?;
    Ok(d.crossings()
        .iter()
        .filter(|x| x.over == c && x.under == c)
        .map(|x| i64::from(x.sign))
        .sum())
}

/// `(up, down)` cusp counts of component `c` in its current orientation.
pub fn cusp_counts(d: &Diagram, c: usize) -> Result<(usize, usize), InvariantError> {
    let comp = d.component(c)?;
    Ok((comp.up_cusps, comp.down_cusps))
}

/// `tb = w - (cusps)/2`.
pub fn thurston_bennequin(d: &Diagram, c: usize) -> Result<Rational, InvariantError> {
    let w = writhe(d, c)?;
    let (up, down) = cusp_counts(d, c)?;
    Ok(Rational::from(w) - Rational::new((up + down) as i64, 2))
}

/// `rot = (down - up)/2`.
pub fn rotation(d: &Diagram, c: usize) -> Result<Rational, InvariantError> {
    let (up, down) = cusp_counts(d, c)?;
    Ok(Rational::new(down as i64 - up as i64, 2))
}

/// Half the signed count of crossings between components `a` and `b`.
pub fn linking_number(d: &Diagram, a: usize, b: usize) -> Result<Rational, InvariantError> {
    check(d, a)?;
    check(d, b)?;
    if a == b {
        return Err(InvariantError::SelfLinking(a));
    }
    let total: i64 = d
        .crossings()
        .iter()
        .filter(|x| (x.over == a && x.under == b) || (x.over == b && x.under == a))
        .map(|x| i64::from(x.sign))
        .sum();
    Ok(Rational::new(total, 2))
}

/// Per-component and pairwise classical data of a link.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassicalData {
    pub ids: Vec<ComponentId>,
    pub tb: Vec<Rational>,
    pub rot: Vec<Rational>,
    /// Symmetric, zero on the diagonal.
    pub lk: Vec<Vec<Rational>>,
    /// Cusp totals, kept for framing computations.
    pub cusps: Vec<usize>,
}

impl ClassicalData {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn lk(&self, a: usize, b: usize) -> &Rational {
        &self.lk[a][b]
    }

    pub fn labels(&self) -> Vec<String> {
        self.ids.iter().map(ComponentId::label).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.ids.iter().position(|id| id.label() == label)
    }
}

pub fn classical_data(d: &Diagram) -> ClassicalData {
    let n = d.components().len();
    let mut data = ClassicalData {
        ids: d.components().iter().map(|c| c.id.clone()).collect(),
        tb: Vec::with_capacity(n),
        rot: Vec::with_capacity(n),
        lk: alloc::vec![alloc::vec![Rational::zero(); n]; n],
        cusps: d.components().iter().map(|c| c.up_cusps + c.down_cusps).collect(),
    };
    for c in 0..n {
        data.tb.push(thurston_bennequin(d, c).expect("component exists"));
        data.rot.push(rotation(d, c).expect("component exists"));
        for b in c + 1..n {
            let l = linking_number(d, c, b).expect("distinct components");
            data.lk[c][b] = l.clone();
            data.lk[b][c] = l;
        }
    }
    data
}
