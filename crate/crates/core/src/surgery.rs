//! Contact (±1)-surgery on a Legendrian link: linking matrices, the
//! transformation of (tb, rot) of a disjoint knot, homology of the result,
//! and the surrounding arithmetic for dual knots, stabilizations and sums.

pub mod linalg;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::invariants::ClassicalData;
use crate::rational::Rational;
use linalg::{cokernel_order, determinant, smith_normal_form, solve, Matrix};

/// Contact surgery coefficient, or the direction of a stabilization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Data about a component that cannot be read off the front.
///
/// `tb_q`, `rot_q`, `chi` and `order_q` describe the distinguished knot in
/// the manifold obtained from the background surgery.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Declared {
    /// Name of a knot-table entry supplying tau, genus and L-space status.
    pub knot: Option<String>,
    pub tau: Option<Rational>,
    pub tau_star: Option<Rational>,
    pub genus: Option<u32>,
    pub l_space_knot: Option<bool>,
    pub order_q: Option<u64>,
    pub tb_q: Option<Rational>,
    pub rot_q: Option<Rational>,
    pub chi: Option<Rational>,
}

impl Declared {
    pub fn is_empty(&self) -> bool {
        *self == Declared::default()
    }
}

/// Classical data of an isolated connected summand, given by hand.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SummandData {
    pub tb: Rational,
    pub rot: Rational,
    pub tau: Option<Rational>,
    pub knot: Option<String>,
}

/// Front configurations that are asserted rather than detected.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Annotation {
    /// `knot` is a meridian of `meridian_of` connect-summed with a knot,
    /// in a two-component link.
    MeridianSum { knot: usize, meridian_of: usize },
    /// The two components contain the clasp configuration whose
    /// thrice-punctured sphere caps off to an overtwisted disk.
    OtConfiguration { first: usize, second: usize },
    /// `component` has a connected summand that does not tangle with the
    /// (-1)-surgered components.
    IsolatedSummand { component: usize, summand: SummandData },
}

/// Declared facts about the manifold obtained from the background surgery.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ambient {
    pub l_space: Option<bool>,
}

/// A Legendrian link in the standard sphere with a surgery sign on every
/// background component and optionally one distinguished knot `L0`.
///
/// The distinguished knot is not part of the linking matrix: its invariants
/// are pushed through the background surgery, and the classified manifold
/// is then contact (+1)-surgery along it.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurgeryPresentation {
    pub data: ClassicalData,
    pub signs: Vec<Option<Sign>>,
    pub distinguished: Option<usize>,
    pub declared: Vec<Declared>,
    pub ambient: Ambient,
    pub annotations: Vec<Annotation>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("component {0} has no surgery sign")]
    MissingSign(String),
    #[error("distinguished component {0} must not carry a surgery sign")]
    SignedDistinguished(String),
    #[error("component index {0} out of range")]
    OutOfRange(usize),
    #[error("annotation refers to the same component twice")]
    DegenerateAnnotation,
    #[error("order_q of {0} must be at least 1")]
    ZeroOrder(String),
    #[error("per-component tables have length {found}, expected {expected}")]
    Shape { expected: usize, found: usize },
}

impl SurgeryPresentation {
    /// Every component surgered with `sign`, no distinguished knot.
    pub fn uniform(data: ClassicalData, sign: Sign) -> Self {
        let n = data.len();
        SurgeryPresentation {
            data,
            signs: alloc::vec![Some(sign); n],
            distinguished: None,
            declared: alloc::vec![Declared::default(); n],
            ambient: Ambient::default(),
            annotations: Vec::new(),
        }
    }

    /// Components `others` get their signs, `l0` becomes distinguished.
    pub fn with_distinguished(data: ClassicalData, l0: usize, signs: &[(usize, Sign)]) -> Self {
        let n = data.len();
        let mut p = SurgeryPresentation {
            data,
            signs: alloc::vec![None; n],
            distinguished: Some(l0),
            declared: alloc::vec![Declared::default(); n],
            ambient: Ambient::default(),
            annotations: Vec::new(),
        };
        for &(c, s) in signs {
            p.signs[c] = Some(s);
        }
        p
    }

    pub fn label(&self, c: usize) -> String {
        self.data.ids[c].label()
    }

    pub fn validate(&self) -> Result<(), PresentationError> {
        let n = self.data.len();
        for len in [self.signs.len(), self.declared.len()] {
            if len != n {
                return Err(PresentationError::Shape { expected: n, found: len });
            }
        }
        let in_range = |c: usize| if c < n { Ok(()) } else { Err(PresentationError::OutOfRange(c)) };
        if let Some(l0) = self.distinguished {
            in_range(l0)?;
        }
        for c in 0..n {
            let is_l0 = self.distinguished == Some(c);
            match (self.signs[c], is_l0) {
                (None, false) => return Err(PresentationError::MissingSign(self.label(c))),
                (Some(_), true) => return Err(PresentationError::SignedDistinguished(self.label(c))),
                _ => {}
            }
            if self.declared[c].order_q == Some(0) {
                return Err(PresentationError::ZeroOrder(self.label(c)));
            }
        }
        for a in &self.annotations {
            match *a {
                Annotation::MeridianSum { knot: x, meridian_of: y }
                | Annotation::OtConfiguration { first: x, second: y } => {
                    in_range(x)?;
                    in_range(y)?;
                    if x == y {
                        return Err(PresentationError::DegenerateAnnotation);
                    }
                }
                Annotation::IsolatedSummand { component, .. } => in_range(component)?,
            }
        }
        Ok(())
    }

    /// Background components in index order.
    pub fn surgered(&self) -> Vec<usize> {
        (0..self.data.len()).filter(|&c| self.distinguished != Some(c)).collect()
    }

    /// Sign of the surgery the classified manifold performs on `c`; the
    /// distinguished knot counts as +1.
    pub fn effective_sign(&self, c: usize) -> Option<Sign> {
        if self.distinguished == Some(c) {
            Some(Sign::Plus)
        } else {
            self.signs.get(c).copied().flatten()
        }
    }

    /// Linking matrix of the given components with diagonal `tb + sign`.
    pub fn linking_matrix_of(&self, comps: &[usize]) -> Matrix {
        comps
            .iter()
            .map(|&i| {
                comps
                    .iter()
                    .map(|&j| {
                        if i == j {
                            let s = self.effective_sign(i).map_or(0, Sign::value);
                            &self.data.tb[i] + s
                        } else {
                            self.data.lk(i, j).clone()
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkingMatrices {
    pub m: Matrix,
    pub m0: Matrix,
    pub l0: Vec<Rational>,
    pub rotv: Vec<Rational>,
    /// Component index of each row of `m`.
    pub surgered: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SurgeryError {
    #[error("no distinguished knot")]
    MissingDistinguished,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("det M = 0: the surgered manifold is not a rational homology sphere")]
    NotQhs3,
    #[error("tb = -1: the dual-knot formulas divide by tb + 1")]
    DegenerateSurgery,
    #[error("q*|tb+1| = {0} is not a positive integer")]
    InconsistentOrder(Rational),
    #[error("tb(L2) = 1 is excluded")]
    ExcludedCase,
    #[error("matrix entries are not integral after scaling by {0}")]
    NonIntegral(u64),
}

/// Assemble `M`, `M0`, the linking vector and the rotation vector.
pub fn build_matrices(p: &SurgeryPresentation) -> Result<LinkingMatrices, SurgeryError> {
    p.validate()?;
    let l0 = p.distinguished.ok_or(SurgeryError::MissingDistinguished)?;
    let surgered = p.surgered();
    let m = p.linking_matrix_of(&surgered);
    let lvec: Vec<Rational> = surgered.iter().map(|&j| p.data.lk(l0, j).clone()).collect();
    let mut m0 = Vec::with_capacity(m.len() + 1);
    let mut top = alloc::vec![Rational::zero()];
    top.extend(lvec.iter().cloned());
    m0.push(top);
    for (row, l) in m.iter().zip(&lvec) {
        let mut r = alloc::vec![l.clone()];
        r.extend(row.iter().cloned());
        m0.push(r);
    }
    let rotv = surgered.iter().map(|&j| p.data.rot[j].clone()).collect();
    Ok(LinkingMatrices { m, m0, l0: lvec, rotv, surgered })
}

/// `(tb0 + det M0 / det M, rot0 - <rotv, M^-1 l0>)`.
pub fn surgery_transform(
    m: &LinkingMatrices,
    tb0: &Rational,
    rot0: &Rational,
) -> Result<(Rational, Rational), SurgeryError> {
    let det_m = determinant(&m.m);
    if det_m.is_zero() {
        return Err(SurgeryError::NotQhs3);
    }
    let tb = tb0 + determinant(&m.m0) / &det_m;
    let x = solve(&m.m, &m.l0).ok_or(SurgeryError::NotQhs3)?;
    let pairing: Rational = m.rotv.iter().zip(&x).map(|(r, xi)| r * xi).sum();
    Ok((tb, rot0 - pairing))
}

/// Order of a homology class; infinite classes have no finite order.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ClassOrder {
    Finite(#[cfg_attr(feature = "serde", serde(with = "crate::rational::serde_bigint"))] BigInt),
    Infinite,
}

impl fmt::Display for ClassOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassOrder::Finite(n) => write!(f, "{n}"),
            ClassOrder::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HomologyData {
    pub det_m: Rational,
    pub is_qhs3: bool,
    /// Full Smith diagonal of the (scaled) linking matrix.
    #[cfg_attr(feature = "serde", serde(with = "crate::rational::serde_bigint::vec"))]
    pub divisors: Vec<BigInt>,
    /// Divisors greater than one.
    #[cfg_attr(feature = "serde", serde(with = "crate::rational::serde_bigint::vec"))]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
    /// Order of `[L0]` in the first homology of the surgered manifold.
    pub order_of_class: ClassOrder,
}

impl HomologyData {
    /// `|H_1|` for a rational homology sphere.
    pub fn order(&self) -> Option<BigInt> {
        self.is_qhs3.then(|| self.torsion.iter().product())
    }
}

fn scaled(values: &[Rational], q_scale: u64) -> Result<Vec<BigInt>, SurgeryError> {
    let s = BigInt::from(q_scale);
    values
        .iter()
        .map(|v| v.scaled_integer(&s).ok_or(SurgeryError::NonIntegral(q_scale)))
        .collect()
}

/// First homology of the background surgery from the Smith form of `M`.
///
/// Entries are multiplied by `q_scale` first. That leaves class orders
/// unchanged; the torsion reported is that of the scaled matrix.
pub fn homology(m: &LinkingMatrices, q_scale: u64) -> Result<HomologyData, SurgeryError> {
    assert!(q_scale >= 1, "q_scale must be positive");
    let a: Vec<Vec<BigInt>> = m.m.iter().map(|r| scaled(r, q_scale)).collect::<Result<_, _>>()?;
    let x = scaled(&m.l0, q_scale)?;
    let det_m = determinant(&m.m);
    let snf = smith_normal_form(&a);
    let torsion = snf.divisors.iter().filter(|d| **d > BigInt::one()).cloned().collect();
    let free_rank = snf.divisors.iter().filter(|d| d.is_zero()).count();
    let order_of_class = match cokernel_order(&a, &x) {
        Some(n) => ClassOrder::Finite(n),
        None => ClassOrder::Infinite,
    };
    Ok(HomologyData {
        is_qhs3: !det_m.is_zero(),
        det_m,
        divisors: snf.divisors,
        torsion,
        free_rank,
        order_of_class,
    })
}

/// Invariants of the surgery dual after contact (+1)-surgery:
/// `(tb/(tb+1), rot/(tb+1))`.
pub fn dual_invariants(tb: &Rational, rot: &Rational) -> Result<(Rational, Rational), SurgeryError> {
    let d = tb + 1;
    if d.is_zero() {
        return Err(SurgeryError::DegenerateSurgery);
    }
    Ok((tb / &d, rot / &d))
}

/// Order of the dual knot's class, `q |tb + 1|`.
pub fn dual_order(q: u64, tb: &Rational) -> Result<BigInt, SurgeryError> {
    let v = (tb + 1).abs() * Rational::from(BigInt::from(q));
    match v.to_integer() {
        Some(n) if n.is_positive() => Ok(n),
        _ => Err(SurgeryError::InconsistentOrder(v)),
    }
}

/// Peripheral data of a knot of order `q`: a rational Seifert surface meets
/// the boundary torus in `c` curves of slope `t λ + r μ`, and the contact
/// framing is `λ + (p-1) μ`. Returns `pq - cr`.
pub fn peripheral_pq_cr(p: &BigInt, q: &BigInt, c: &BigInt, r: &BigInt) -> BigInt {
    p * q - c * r
}

/// The rational tb recovered from peripheral data: `(pq - cr)/q - 1`.
pub fn tb_from_peripheral(p: &BigInt, q: &BigInt, c: &BigInt, r: &BigInt) -> Rational {
    Rational::new(peripheral_pq_cr(p, q, c, r), q.clone()) - 1
}

/// `k` stabilizations: `(tb - k, rot ± k)`.
pub fn stabilize(tb: &Rational, rot: &Rational, sign: Sign, k: u64) -> (Rational, Rational) {
    let k = Rational::from(BigInt::from(k));
    (tb - &k, rot + k * sign.value())
}

/// Legendrian connected sum: `(tb1 + tb2 + 1, rot1 + rot2)`.
pub fn connected_sum(tb1: &Rational, rot1: &Rational, tb2: &Rational, rot2: &Rational) -> (Rational, Rational) {
    (tb1 + tb2 + 1, rot1 + rot2)
}

/// tau* is additive under connected sum.
pub fn tau_star_sum(t1: &Rational, t2: &Rational) -> Rational {
    t1 + t2
}

/// Euler characteristic of the rational Seifert surface of `L1` after
/// (-1)-surgery on `L2` in the meridian-sum configuration:
/// `1 - 2 g2 - 2 g1 |1 - tb2|`.
pub fn rational_seifert_euler(g1: u32, g2: u32, tb2: &Rational) -> Result<Rational, SurgeryError> {
    let gap = (Rational::one() - tb2).abs();
    if gap.is_zero() {
        return Err(SurgeryError::ExcludedCase);
    }
    Ok(Rational::from(1 - 2 * i64::from(g2)) - gap * (2 * i64::from(g1)))
}

/// Framing bookkeeping for the knot `L'` bounding the thrice-punctured
/// sphere together with `L1` and `L2`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub tb_lprime: Rational,
    pub cusp_lprime: i64,
    pub writhe_lprime: Rational,
    /// Framing of `L'` from the surface, relative to its Seifert framing.
    pub surface_framing: Rational,
    /// Surface framings of `L1` and `L2`, which match contact (+1)-surgery.
    pub component_framings: (Rational, Rational),
    /// `surface_framing - tb_lprime`; zero means the capped surface is an
    /// overtwisted disk.
    pub framing_gap: Rational,
}

/// Builds the witness two ways: the contact framing from writhe and cusps,
/// and the surface framing from the crossings of `L'` with its push-off.
pub fn clasp_witness(tb1: &Rational, tb2: &Rational, l: &Rational, c1: i64, c2: i64) -> Witness {
    let half = |c: i64| Rational::new(c, 2);
    let w1 = tb1 + half(c1);
    let w2 = tb2 + half(c2);
    let linking_part = (l + 1) * 2;
    // Crossings outside the box, then the single negative crossing inside.
    let writhe = &w1 + &w2 + &linking_part - 1;
    let cusps = c1 + c2 - 2;
    let tb_lprime = &writhe - half(cusps);
    let surface_framing = tb1 + tb2 + 1 + &linking_part - 1;
    let framing_gap = &surface_framing - &tb_lprime;
    Witness {
        tb_lprime,
        cusp_lprime: cusps,
        writhe_lprime: writhe,
        surface_framing,
        component_framings: (tb1 + 1, tb2 + 1),
        framing_gap,
    }
}

/// Matrices keyed by label, for reports.
pub fn labelled_l0(p: &SurgeryPresentation, m: &LinkingMatrices) -> BTreeMap<String, Rational> {
    m.surgered.iter().zip(&m.l0).map(|(&c, l)| (p.label(c), l.clone())).collect()
}
