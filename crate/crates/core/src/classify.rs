//! Rule engine: checks every available vanishing/overtwistedness criterion
//! against computed and declared data and combines the outcomes.
//!
//! Each rule is a pure function returning a [`RuleEvaluation`] with the
//! values its hypotheses were evaluated on, fired or not. All inequalities
//! are strict and evaluated in exact arithmetic.

mod table;

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::rational::Rational;
use crate::surgery::{
    build_matrices, dual_invariants, dual_order, homology, clasp_witness, rational_seifert_euler, stabilize,
    surgery_transform, Annotation, ClassOrder, HomologyData, LinkingMatrices, PresentationError, Sign, SummandData,
    SurgeryError, SurgeryPresentation, Witness,
};
use crate::surgery::linalg::determinant;

pub use table::{KnotRecord, KnotTable, TableError};

/// Conclusion about the classified contact manifold.
///
/// The vanishing chain is `CPlusVanishes < CVanishes < Overtwisted`;
/// `NonvanishingC` is incompatible with all three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Level {
    Inconclusive,
    NonvanishingC,
    CPlusVanishes,
    CVanishes,
    Overtwisted,
}

impl Level {
    /// Position in the vanishing chain, `None` off the chain.
    pub fn vanishing_rank(self) -> Option<u8> {
        match self {
            Level::CPlusVanishes => Some(1),
            Level::CVanishes => Some(2),
            Level::Overtwisted => Some(3),
            Level::Inconclusive | Level::NonvanishingC => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Inconclusive => "Inconclusive",
            Level::NonvanishingC => "NonvanishingC",
            Level::CPlusVanishes => "CPlusVanishes",
            Level::CVanishes => "CVanishes",
            Level::Overtwisted => "Overtwisted",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        [
            Level::Inconclusive,
            Level::NonvanishingC,
            Level::CPlusVanishes,
            Level::CVanishes,
            Level::Overtwisted,
        ]
        .into_iter()
        .find(|l| l.name() == s)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rules in evaluation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum RuleId {
    /// No +1 surgery at all: Stein fillable.
    Stein,
    /// Clasp configuration of two +1 components.
    ClaspDisk,
    /// `tb < -1` and `tb - |rot| < chi/q`.
    DualLoose,
    /// `tb + |rot| < chi/q - 2`.
    PositiveSurgeryLoose,
    /// Meridian-sum configuration, Euler characteristic bound.
    MeridianSumEuler,
    /// `tb + |rot| < 2 tau* - 1`.
    TauStarBound,
    /// Isolated connected summand with `tb + |rot| < 2 tau - 1`.
    IsolatedSummand,
    /// Meridian-sum configuration, tau bound.
    MeridianSumTau,
    /// Two +1 components, one an L-space knot, `l^2 > 2g(tb1 + 1)`.
    LSpaceKnotLinking,
    /// `tb < -1` in a declared contact L-space.
    LSpaceTb,
}

impl RuleId {
    pub const ALL: [RuleId; 10] = [
        RuleId::Stein,
        RuleId::ClaspDisk,
        RuleId::DualLoose,
        RuleId::PositiveSurgeryLoose,
        RuleId::MeridianSumEuler,
        RuleId::TauStarBound,
        RuleId::IsolatedSummand,
        RuleId::MeridianSumTau,
        RuleId::LSpaceKnotLinking,
        RuleId::LSpaceTb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Stein => "stein",
            RuleId::ClaspDisk => "clasp-disk",
            RuleId::DualLoose => "dual-loose",
            RuleId::PositiveSurgeryLoose => "positive-surgery-loose",
            RuleId::MeridianSumEuler => "meridian-sum-euler",
            RuleId::TauStarBound => "tau-star-bound",
            RuleId::IsolatedSummand => "isolated-summand",
            RuleId::MeridianSumTau => "meridian-sum-tau",
            RuleId::LSpaceKnotLinking => "l-space-knot-linking",
            RuleId::LSpaceTb => "l-space-tb",
        }
    }

    pub fn parse(s: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.name() == s)
    }

    /// The level a firing of this rule establishes.
    pub fn level(self) -> Level {
        match self {
            RuleId::Stein => Level::NonvanishingC,
            RuleId::ClaspDisk | RuleId::DualLoose | RuleId::PositiveSurgeryLoose | RuleId::MeridianSumEuler => {
                Level::Overtwisted
            }
            RuleId::TauStarBound | RuleId::IsolatedSummand | RuleId::MeridianSumTau => Level::CVanishes,
            RuleId::LSpaceKnotLinking | RuleId::LSpaceTb => Level::CPlusVanishes,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which surgeries a verdict speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Scope {
    /// The presented (±1)-surgery.
    Presented,
    /// Every positive contact surgery along the distinguished knot.
    AnyPositiveSurgery,
}

/// A hypothesis value.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum Value {
    Bool(bool),
    Rational(Rational),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Rational(r) => write!(f, "{r}"),
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Rational(r)
    }
}

impl From<&Rational> for Value {
    fn from(r: &Rational) -> Self {
        Value::Rational(r.clone())
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Rational(Rational::from(n))
    }
}

impl From<BigInt> for Value {
    fn from(n: BigInt) -> Self {
        Value::Rational(Rational::from(n))
    }
}

pub type Hypotheses = BTreeMap<String, Value>;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", content = "reason", rename_all = "kebab-case"))]
pub enum Status {
    Fired,
    /// Data present, inequality or gate false.
    Silent,
    /// Some required input is missing.
    Unavailable(String),
    /// The input falls in a case the criterion excludes.
    Excluded(String),
    Disabled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RuleEvaluation {
    pub rule: RuleId,
    pub status: Status,
    pub hypotheses: Hypotheses,
    pub scope: Scope,
    pub notes: Vec<String>,
}

impl RuleEvaluation {
    fn new(rule: RuleId) -> Self {
        RuleEvaluation { rule, status: Status::Silent, hypotheses: Hypotheses::new(), scope: Scope::Presented, notes: Vec::new() }
    }

    fn unavailable(rule: RuleId, why: impl Into<String>) -> Self {
        let mut e = RuleEvaluation::new(rule);
        e.status = Status::Unavailable(why.into());
        e
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.hypotheses.insert(key.to_owned(), v.into());
        self
    }

    fn decide(mut self, fired: bool) -> Self {
        self.status = if fired { Status::Fired } else { Status::Silent };
        self
    }

    pub fn fired(&self) -> bool {
        self.status == Status::Fired
    }

    pub fn verdict(&self) -> Option<Verdict> {
        self.fired().then(|| Verdict {
            level: self.rule.level(),
            rule: Some(self.rule),
            scope: self.scope,
            hypotheses: self.hypotheses.clone(),
            notes: self.notes.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub level: Level,
    pub rule: Option<RuleId>,
    pub scope: Scope,
    pub hypotheses: Hypotheses,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn inconclusive() -> Self {
        Verdict { level: Level::Inconclusive, rule: None, scope: Scope::Presented, hypotheses: Hypotheses::new(), notes: Vec::new() }
    }
}

// ---------------------------------------------------------------------------
// Inequality rules on plain values.

/// Stein fillability: nothing is surgered with +1.
pub fn rule_stein(p: &SurgeryPresentation) -> RuleEvaluation {
    let plus: Vec<String> = (0..p.data.len())
        .filter(|&c| p.effective_sign(c) == Some(Sign::Plus))
        .map(|c| p.label(c))
        .collect();
    let mut e = RuleEvaluation::new(RuleId::Stein);
    e.set("plus_components", Rational::from(plus.len() as i64));
    if !plus.is_empty() {
        e.notes.push(format!("+1 surgery on {}", plus.join(", ")));
    }
    e.decide(plus.is_empty())
}

/// `tb + |rot| < 2 tau* - 1`.
pub fn rule_tau_star_bound(tb: &Rational, rot: &Rational, tau_star: &Rational) -> RuleEvaluation {
    let lhs = tb + rot.abs();
    let rhs = tau_star * 2 - 1;
    let mut e = RuleEvaluation::new(RuleId::TauStarBound);
    e.set("tb", tb).set("rot", rot).set("tau_star", tau_star).set("lhs", &lhs).set("rhs", &rhs);
    e.decide(lhs < rhs)
}

/// Summand bound `tb3 + |rot3| < 2 tau3 - 1`, gated on the (-1)-sublink
/// giving a rational homology sphere.
pub fn rule_isolated_summand(summand: &SummandData, tau: &Rational, det_minus: &Rational) -> RuleEvaluation {
    let lhs = &summand.tb + summand.rot.abs();
    let rhs = tau * 2 - 1;
    let mut e = RuleEvaluation::new(RuleId::IsolatedSummand);
    e.set("tb", &summand.tb)
        .set("rot", &summand.rot)
        .set("tau", tau)
        .set("lhs", &lhs)
        .set("rhs", &rhs)
        .set("det_minus_sublink", det_minus);
    if det_minus.is_zero() {
        e.notes.push("(-1)-sublink does not give a rational homology sphere".into());
        return e.decide(false);
    }
    e.decide(lhs < rhs)
}

/// Meridian-sum configuration with `tb2 != 1` and `tb1 + |rot1| < 2 tau1 - 1`.
pub fn rule_meridian_sum_tau(tb1: &Rational, rot1: &Rational, tau1: &Rational, tb2: &Rational) -> RuleEvaluation {
    let lhs = tb1 + rot1.abs();
    let rhs = tau1 * 2 - 1;
    let mut e = RuleEvaluation::new(RuleId::MeridianSumTau);
    e.set("tb", tb1).set("rot", rot1).set("tau", tau1).set("tb2", tb2).set("lhs", &lhs).set("rhs", &rhs);
    if *tb2 == 1i64 {
        e.notes.push("tb(L2) = 1 is excluded".into());
        return e.decide(false);
    }
    e.decide(lhs < rhs)
}

/// `tb_Q < -1` in a contact L-space.
pub fn rule_l_space_tb(tb_q: &Rational, ambient_l_space: bool) -> RuleEvaluation {
    let mut e = RuleEvaluation::new(RuleId::LSpaceTb);
    e.set("tb_q", tb_q).set("ambient_l_space", ambient_l_space);
    e.decide(ambient_l_space && *tb_q < -1i64)
}

/// `L2` an L-space knot and `l^2 > 2 g(L2) (tb1 + 1)`.
pub fn rule_l_space_knot_linking(tb1: &Rational, l: &Rational, rec2: &KnotRecord) -> RuleEvaluation {
    let lhs = l * l;
    let rhs = Rational::from(2 * i64::from(rec2.genus)) * (tb1 + 1);
    let mut e = RuleEvaluation::new(RuleId::LSpaceKnotLinking);
    e.set("tb1", tb1)
        .set("l", l)
        .set("g", i64::from(rec2.genus))
        .set("l_space_knot", rec2.l_space_knot)
        .set("lhs", &lhs)
        .set("rhs", &rhs);
    e.notes.push(format!("L2 = {}", rec2.name));
    e.decide(rec2.l_space_knot && lhs > rhs)
}

fn chi_over_q(chi: &Rational, q: &BigInt) -> Rational {
    chi / Rational::from(q.clone())
}

/// `tb < -1` and `tb - |rot| < chi/q`.
pub fn rule_dual_loose(tb: &Rational, rot: &Rational, chi: &Rational, q: &BigInt) -> RuleEvaluation {
    let bound = chi_over_q(chi, q);
    let lhs = tb - rot.abs();
    let mut e = RuleEvaluation::new(RuleId::DualLoose);
    e.set("tb", tb).set("rot", rot).set("chi", chi).set("q", q.clone()).set("lhs", &lhs).set("rhs", &bound);
    e.decide(*tb < -1i64 && lhs < bound)
}

/// `tb + |rot| < chi/q - 2`; the verdict covers every positive surgery.
pub fn rule_positive_surgery_loose(tb: &Rational, rot: &Rational, chi: &Rational, q: &BigInt) -> RuleEvaluation {
    let rhs = chi_over_q(chi, q) - 2;
    let lhs = tb + rot.abs();
    let mut e = RuleEvaluation::new(RuleId::PositiveSurgeryLoose);
    e.scope = Scope::AnyPositiveSurgery;
    e.set("tb", tb).set("rot", rot).set("chi", chi).set("q", q.clone()).set("lhs", &lhs).set("rhs", &rhs);
    e.decide(lhs < rhs)
}

/// Meridian-sum configuration, (+1) on `L1` and (-1) on `L2`, oriented so
/// that `lk(L1, L2) = 1`.
pub fn rule_meridian_sum_euler(
    tb1: &Rational,
    rot1: &Rational,
    tb2: &Rational,
    rot2: &Rational,
    g1: u32,
    g2: u32,
) -> Result<RuleEvaluation, SurgeryError> {
    let k = Rational::from(1) - tb2;
    if k.is_zero() {
        return Err(SurgeryError::ExcludedCase);
    }
    let tb_q = tb1 + Rational::from(1) / &k;
    let rot_q = rot1 + rot2 / &k;
    let rhs = Rational::from(2 * i64::from(g1)) + Rational::from(2 * i64::from(g2) - 1) / k.abs() + &tb_q;
    let mut e = RuleEvaluation::new(RuleId::MeridianSumEuler);
    e.set("tb1", tb1)
        .set("rot1", rot1)
        .set("tb2", tb2)
        .set("rot2", rot2)
        .set("g1", i64::from(g1))
        .set("g2", i64::from(g2))
        .set("tb_q", &tb_q)
        .set("rot_q", &rot_q)
        .set("lhs", rot_q.abs())
        .set("rhs", &rhs);
    Ok(e.decide(tb_q < -1i64 && rot_q.abs() > rhs))
}

/// Diagnostic: `-|tb| + |rot| > -chi/q` means the complement is overtwisted.
pub fn loose_complement(tb: &Rational, rot: &Rational, chi: &Rational, q: &BigInt) -> bool {
    -tb.abs() + rot.abs() > -chi_over_q(chi, q)
}

// ---------------------------------------------------------------------------
// Orchestration.

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub disabled: BTreeSet<RuleId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Report {
    pub presentation: SurgeryPresentation,
    /// Quantities computed once and shared by the rules.
    pub derived: Hypotheses,
    pub homology: Option<HomologyData>,
    pub evaluations: Vec<RuleEvaluation>,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl Report {
    pub fn evaluation(&self, rule: RuleId) -> Option<&RuleEvaluation> {
        self.evaluations.iter().find(|e| e.rule == rule)
    }

    pub fn fired(&self) -> impl Iterator<Item = &RuleEvaluation> {
        self.evaluations.iter().filter(|e| e.fired())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("knot `{0}` is not in the knot table")]
    UnknownKnot(String),
    #[error("declared {field} of {label} is {declared}, computed {computed}")]
    DeclaredMismatch { label: String, field: &'static str, declared: String, computed: String },
    #[error("internal inconsistency: {nonvanishing} contradicts {}", vanishing.iter().map(|r| r.name()).collect::<Vec<_>>().join(", "))]
    InternalInconsistency { nonvanishing: RuleId, vanishing: Vec<RuleId>, report: Box<Report> },
}

/// Tau, genus and L-space status of a component: explicit declarations
/// first, then the knot table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Knowledge {
    pub tau: Option<Rational>,
    pub genus: Option<u32>,
    pub l_space_knot: Option<bool>,
    pub name: Option<String>,
}

pub fn knowledge(p: &SurgeryPresentation, table: &KnotTable, c: usize) -> Result<Knowledge, ClassifyError> {
    let d = &p.declared[c];
    let rec = match &d.knot {
        Some(name) => Some(table.get(name).ok_or_else(|| ClassifyError::UnknownKnot(name.clone()))?),
        None => None,
    };
    if let Some(r) = rec {
        if let Some(t) = d.tau.as_ref().filter(|t| **t != r.tau) {
            return Err(mismatch(p, c, "tau", t, &r.tau));
        }
        if let Some(g) = d.genus.filter(|g| *g != r.genus) {
            return Err(mismatch(p, c, "genus", g, r.genus));
        }
        if let Some(l) = d.l_space_knot.filter(|l| *l != r.l_space_knot) {
            return Err(mismatch(p, c, "l_space_knot", l, r.l_space_knot));
        }
    }
    Ok(Knowledge {
        tau: d.tau.clone().or_else(|| rec.map(|r| r.tau.clone())),
        genus: d.genus.or(rec.map(|r| r.genus)),
        l_space_knot: d.l_space_knot.or(rec.map(|r| r.l_space_knot)),
        name: d.knot.clone(),
    })
}

/// Shared data for the rules that look at the distinguished knot.
#[derive(Clone, Debug, Default)]
struct Context {
    matrices: Option<LinkingMatrices>,
    homology: Option<HomologyData>,
    qhs3: Option<bool>,
    tb_q: Option<Rational>,
    rot_q: Option<Rational>,
    q: Option<BigInt>,
    chi: Option<Rational>,
    tau_star: Option<Rational>,
}

fn mismatch(p: &SurgeryPresentation, c: usize, field: &'static str, declared: impl ToString, computed: impl ToString) -> ClassifyError {
    ClassifyError::DeclaredMismatch {
        label: p.label(c),
        field,
        declared: declared.to_string(),
        computed: computed.to_string(),
    }
}

fn context(p: &SurgeryPresentation, table: &KnotTable, derived: &mut Hypotheses, notes: &mut Vec<String>) -> Result<Context, ClassifyError> {
    let mut cx = Context::default();
    let Some(l0) = p.distinguished else {
        return Ok(cx);
    };
    let m = build_matrices(p).map_err(|e| match e {
        SurgeryError::Presentation(pe) => ClassifyError::Presentation(pe),
        _ => unreachable!("distinguished knot present"),
    })?;
    let decl = &p.declared[l0];
    match surgery_transform(&m, &p.data.tb[l0], &p.data.rot[l0]) {
        Ok((tb, rot)) => {
            cx.qhs3 = Some(true);
            if let Some(d) = &decl.tb_q {
                if *d != tb {
                    return Err(mismatch(p, l0, "tb_q", d, &tb));
                }
            }
            if let Some(d) = &decl.rot_q {
                if d.abs() != rot.abs() {
                    return Err(mismatch(p, l0, "rot_q", d, &rot));
                }
            }
            cx.tb_q = Some(tb);
            cx.rot_q = Some(decl.rot_q.clone().unwrap_or(rot));
        }
        Err(_) => {
            cx.qhs3 = Some(false);
            notes.push("det M = 0: background surgery is not a rational homology sphere".into());
            cx.tb_q = decl.tb_q.clone();
            cx.rot_q = decl.rot_q.clone();
        }
    }
    if let Ok(h) = homology(&m, 1) {
        if let ClassOrder::Finite(n) = &h.order_of_class {
            cx.q = Some(n.clone());
        }
        cx.homology = Some(h);
    }
    if let Some(dq) = decl.order_q {
        let dq = BigInt::from(dq);
        if let Some(q) = &cx.q {
            if *q != dq {
                return Err(mismatch(p, l0, "order_q", &dq, q));
            }
        }
        cx.q = Some(dq);
    }
    let k0 = knowledge(p, table, l0)?;
    let unlinked = m.l0.iter().all(Rational::is_zero);
    // Any rational Seifert surface gives a valid bound, so keep the largest known chi.
    cx.chi = decl.chi.clone();
    if unlinked && cx.q == Some(BigInt::from(1)) {
        if let Some(g) = k0.genus {
            // A Seifert surface in the sphere missing the surgery link.
            let chi = Rational::from(1 - 2 * i64::from(g));
            if cx.chi.as_ref().map_or(true, |d| *d < chi) {
                notes.push(format!("chi = 1 - 2g = {chi} (L0 unlinked from the surgery link)"));
                cx.chi = Some(chi);
            }
        }
    }
    cx.tau_star = decl.tau_star.clone();
    if m.surgered.is_empty() {
        // With no background surgery tau* is tau.
        match (&cx.tau_star, &k0.tau) {
            (Some(ts), Some(t)) if ts != t => return Err(mismatch(p, l0, "tau_star", ts, t)),
            (None, Some(t)) => cx.tau_star = Some(t.clone()),
            _ => {}
        }
    }
    derived.insert("distinguished".into(), Value::Rational(Rational::from(l0 as i64 + 1)));
    derived.insert("det_m".into(), determinant(&m.m).into());
    derived.insert("det_m0".into(), determinant(&m.m0).into());
    for (key, v) in [("tb_q", &cx.tb_q), ("rot_q", &cx.rot_q), ("chi", &cx.chi), ("tau_star", &cx.tau_star)] {
        if let Some(v) = v {
            derived.insert(key.into(), v.into());
        }
    }
    if let Some(q) = &cx.q {
        derived.insert("q".into(), q.clone().into());
    }
    if let Some(tb) = &cx.tb_q {
        let rot = cx.rot_q.clone().unwrap_or_default();
        if let Ok((dt, dr)) = dual_invariants(tb, &rot) {
            derived.insert("dual.tb".into(), dt.into());
            derived.insert("dual.rot".into(), dr.into());
            if let Some(q) = cx.q.as_ref().and_then(|q| q.try_into().ok()) {
                if let Ok(order) = dual_order(q, tb) {
                    derived.insert("dual.order".into(), order.into());
                }
            }
        }
    }
    cx.matrices = Some(m);
    Ok(cx)
}

fn two_component_plus_pair(p: &SurgeryPresentation) -> Option<(usize, usize)> {
    if p.data.len() != 2 {
        return None;
    }
    let plus = |c| p.effective_sign(c) == Some(Sign::Plus);
    (plus(0) && plus(1)).then_some((0, 1))
}

fn meridian_sums(p: &SurgeryPresentation) -> impl Iterator<Item = (usize, usize)> + '_ {
    p.annotations.iter().filter_map(|a| match *a {
        Annotation::MeridianSum { knot, meridian_of } => Some((knot, meridian_of)),
        _ => None,
    })
}

/// Evaluate `each` on every candidate, stopping at the first firing; the
/// last evaluation is reported otherwise.
fn first_firing<T>(
    rule: RuleId,
    candidates: impl IntoIterator<Item = T>,
    none: &str,
    mut each: impl FnMut(T) -> Result<RuleEvaluation, ClassifyError>,
) -> Result<RuleEvaluation, ClassifyError> {
    let mut last = RuleEvaluation::unavailable(rule, none);
    for c in candidates {
        last = each(c)?;
        if last.fired() {
            break;
        }
    }
    Ok(last)
}

/// Gates common to both meridian-sum rules; returns `lk(L1, L2)`.
fn meridian_gate(p: &SurgeryPresentation, rule: RuleId, k1: usize, k2: usize) -> Result<Rational, RuleEvaluation> {
    if p.data.len() != 2 {
        return Err(RuleEvaluation::unavailable(rule, "meridian_sum needs a two-component link"));
    }
    if p.effective_sign(k1) != Some(Sign::Plus) || p.effective_sign(k2) != Some(Sign::Minus) {
        return Err(RuleEvaluation::unavailable(rule, "meridian_sum needs +1 on L1 and -1 on L2"));
    }
    let l = p.data.lk(k1, k2).clone();
    if l.abs() != 1i64 {
        return Err(RuleEvaluation::unavailable(rule, format!("meridian_sum needs |lk| = 1, found {l}")));
    }
    Ok(l)
}

fn eval_meridian_sum_tau(p: &SurgeryPresentation, table: &KnotTable) -> Result<RuleEvaluation, ClassifyError> {
    let rule = RuleId::MeridianSumTau;
    first_firing(rule, meridian_sums(p), "no meridian_sum annotation", |(k1, k2)| {
        if let Err(e) = meridian_gate(p, rule, k1, k2) {
            return Ok(e);
        }
        let Some(tau) = knowledge(p, table, k1)?.tau else {
            return Ok(RuleEvaluation::unavailable(rule, format!("tau of {} not declared", p.label(k1))));
        };
        Ok(rule_meridian_sum_tau(&p.data.tb[k1], &p.data.rot[k1], &tau, &p.data.tb[k2]))
    })
}

fn eval_meridian_sum_euler(p: &SurgeryPresentation, table: &KnotTable) -> Result<RuleEvaluation, ClassifyError> {
    let rule = RuleId::MeridianSumEuler;
    first_firing(rule, meridian_sums(p), "no meridian_sum annotation", |(k1, k2)| {
        let l = match meridian_gate(p, rule, k1, k2) {
            Ok(l) => l,
            Err(e) => return Ok(e),
        };
        let (Some(g1), Some(g2)) = (knowledge(p, table, k1)?.genus, knowledge(p, table, k2)?.genus) else {
            return Ok(RuleEvaluation::unavailable(rule, "genus of L1 or L2 not declared"));
        };
        // Reversing L2 makes lk = +1 and negates its rotation number.
        let rot2 = &p.data.rot[k2] * &l;
        Ok(match rule_meridian_sum_euler(&p.data.tb[k1], &p.data.rot[k1], &p.data.tb[k2], &rot2, g1, g2) {
            Ok(mut e) => {
                if let Ok(chi) = rational_seifert_euler(g1, g2, &p.data.tb[k2]) {
                    e.set("chi", chi);
                }
                e
            }
            Err(_) => {
                let mut e = RuleEvaluation::new(rule);
                e.status = Status::Excluded("tb(L2) = 1".into());
                e
            }
        })
    })
}

fn eval_isolated_summand(p: &SurgeryPresentation, table: &KnotTable) -> Result<RuleEvaluation, ClassifyError> {
    let rule = RuleId::IsolatedSummand;
    let minus: Vec<usize> = (0..p.data.len()).filter(|&c| p.effective_sign(c) == Some(Sign::Minus)).collect();
    let det_minus = determinant(&p.linking_matrix_of(&minus));
    let mut last = RuleEvaluation::unavailable(rule, "no isolated_summand annotation");
    for a in &p.annotations {
        let Annotation::IsolatedSummand { component, summand } = a else { continue };
        if p.effective_sign(*component) != Some(Sign::Plus) {
            last = RuleEvaluation::unavailable(rule, format!("{} is not surgered with +1", p.label(*component)));
            continue;
        }
        let tau = match (&summand.tau, &summand.knot) {
            (Some(t), _) => t.clone(),
            (None, Some(name)) => table.get(name).ok_or_else(|| ClassifyError::UnknownKnot(name.clone()))?.tau.clone(),
            (None, None) => {
                last = RuleEvaluation::unavailable(rule, "summand tau not declared");
                continue;
            }
        };
        last = rule_isolated_summand(summand, &tau, &det_minus);
        last.notes.push(format!("summand of {}", p.label(*component)));
        if last.fired() {
            break;
        }
    }
    Ok(last)
}

fn eval_l_space_knot_linking(p: &SurgeryPresentation, table: &KnotTable) -> Result<RuleEvaluation, ClassifyError> {
    let rule = RuleId::LSpaceKnotLinking;
    let Some((a, b)) = two_component_plus_pair(p) else {
        return Ok(RuleEvaluation::unavailable(rule, "needs a two-component link with +1 on both"));
    };
    // Try the distinguished knot as L1 first, then the other assignment.
    let mut orders = [(a, b), (b, a)];
    if p.distinguished == Some(b) {
        orders.swap(0, 1);
    }
    let mut last = RuleEvaluation::unavailable(rule, "no component with known genus and L-space status");
    for (k1, k2) in orders {
        let k = knowledge(p, table, k2)?;
        let (Some(genus), Some(ls)) = (k.genus, k.l_space_knot) else { continue };
        let rec = KnotRecord {
            name: k.name.unwrap_or_else(|| p.label(k2)),
            tau: k.tau.unwrap_or_else(|| Rational::from(i64::from(genus))),
            genus,
            l_space_knot: ls,
            tb_max: None,
        };
        last = rule_l_space_knot_linking(&p.data.tb[k1], p.data.lk(k1, k2), &rec);
        if last.fired() {
            break;
        }
    }
    Ok(last)
}

fn eval_clasp(p: &SurgeryPresentation) -> (RuleEvaluation, Option<Witness>) {
    let rule = RuleId::ClaspDisk;
    let pairs = p.annotations.iter().filter_map(|x| match *x {
        Annotation::OtConfiguration { first, second } => Some((first, second)),
        _ => None,
    });
    let mut witness = None;
    let e = first_firing(rule, pairs, "no ot_configuration annotation", |(a, b)| {
        let mut e = RuleEvaluation::new(rule);
        let both_plus =
            p.data.len() == 2 && p.effective_sign(a) == Some(Sign::Plus) && p.effective_sign(b) == Some(Sign::Plus);
        e.set("both_plus", both_plus);
        if !both_plus {
            e.notes.push("the configuration needs +1 surgery on exactly these two components".into());
            witness = None;
            return Ok(e.decide(false));
        }
        let w = clasp_witness(&p.data.tb[a], &p.data.tb[b], p.data.lk(a, b), p.data.cusps[a] as i64, p.data.cusps[b] as i64);
        e.set("tb_lprime", &w.tb_lprime).set("framing_gap", &w.framing_gap);
        let ok = w.framing_gap.is_zero();
        witness = Some(w);
        Ok(e.decide(ok))
    })
    .expect("clasp evaluation has no error path");
    (e, witness)
}

/// Dual-knot diagnostic: after enough stabilizations of the surgery dual,
/// check the loose bound.
fn loose_note(cx: &Context) -> Option<(bool, Hypotheses)> {
    let (tb, rot, chi, q) = (cx.tb_q.as_ref()?, cx.rot_q.as_ref()?, cx.chi.as_ref()?, cx.q.as_ref()?);
    if *tb >= -1i64 {
        return None;
    }
    let (dt, dr) = dual_invariants(tb, rot).ok()?;
    let order = dual_order(q.try_into().ok()?, tb).ok()?;
    let k: u64 = (dt.ceil() + 1u32).try_into().ok()?;
    let sign = if dr.is_negative() { Sign::Minus } else { Sign::Plus };
    let (st, sr) = stabilize(&dt, &dr, sign, k);
    let fires = loose_complement(&st, &sr, chi, &order);
    let mut h = Hypotheses::new();
    h.insert("stabilizations".into(), Rational::from(BigInt::from(k)).into());
    h.insert("tb".into(), st.into());
    h.insert("rot".into(), sr.into());
    h.insert("q".into(), order.into());
    Some((fires, h))
}

fn eval_rules(
    p: &SurgeryPresentation,
    table: &KnotTable,
    cx: &Context,
    opts: &ClassifyOptions,
) -> Result<(Vec<RuleEvaluation>, Option<Witness>), ClassifyError> {
    let mut out = Vec::new();
    let mut witness = None;
    let need_l0 = |rule| RuleEvaluation::unavailable(rule, "no distinguished knot");
    for rule in RuleId::ALL {
        if opts.disabled.contains(&rule) {
            let mut e = RuleEvaluation::new(rule);
            e.status = Status::Disabled;
            out.push(e);
            continue;
        }
        let e = match rule {
            RuleId::Stein => rule_stein(p),
            RuleId::ClaspDisk => {
                let (e, w) = eval_clasp(p);
                witness = w;
                e
            }
            RuleId::DualLoose | RuleId::PositiveSurgeryLoose => {
                if p.distinguished.is_none() {
                    need_l0(rule)
                } else if cx.qhs3 == Some(false) && cx.tb_q.is_none() {
                    RuleEvaluation::unavailable(rule, "background surgery is not a rational homology sphere")
                } else {
                    match (&cx.tb_q, &cx.rot_q, &cx.chi, &cx.q) {
                        (Some(tb), Some(rot), Some(chi), Some(q)) => {
                            if rule == RuleId::DualLoose {
                                rule_dual_loose(tb, rot, chi, q)
                            } else {
                                rule_positive_surgery_loose(tb, rot, chi, q)
                            }
                        }
                        (_, _, None, _) => RuleEvaluation::unavailable(rule, "chi not declared"),
                        (_, _, _, None) => RuleEvaluation::unavailable(rule, "order q unknown"),
                        _ => RuleEvaluation::unavailable(rule, "tb_q or rot_q unknown"),
                    }
                }
            }
            RuleId::MeridianSumEuler => eval_meridian_sum_euler(p, table)?,
            RuleId::TauStarBound => match (p.distinguished, &cx.tb_q, &cx.rot_q, &cx.tau_star) {
                (None, ..) => need_l0(rule),
                (_, _, _, _) if cx.qhs3 != Some(true) => {
                    RuleEvaluation::unavailable(rule, "background surgery is not a rational homology sphere")
                }
                (_, Some(tb), Some(rot), Some(ts)) => rule_tau_star_bound(tb, rot, ts),
                _ => RuleEvaluation::unavailable(rule, "tau_star not declared"),
            },
            RuleId::IsolatedSummand => eval_isolated_summand(p, table)?,
            RuleId::MeridianSumTau => eval_meridian_sum_tau(p, table)?,
            RuleId::LSpaceKnotLinking => eval_l_space_knot_linking(p, table)?,
            RuleId::LSpaceTb => match (p.distinguished, &cx.tb_q, p.ambient.l_space) {
                (None, ..) => need_l0(rule),
                (_, Some(tb), Some(ls)) => rule_l_space_tb(tb, ls),
                (_, None, _) => RuleEvaluation::unavailable(rule, "tb_q unknown"),
                (_, _, None) => RuleEvaluation::unavailable(rule, "ambient L-space status not declared"),
            },
        };
        out.push(e);
    }
    Ok((out, witness))
}

/// Combine rule outcomes: the highest level on the vanishing chain wins,
/// ties going to the earlier rule; a Stein firing alongside any vanishing
/// rule is an inconsistency.
pub fn combine(evaluations: &[RuleEvaluation]) -> Result<Verdict, (RuleId, Vec<RuleId>)> {
    let fired: Vec<&RuleEvaluation> = evaluations.iter().filter(|e| e.fired()).collect();
    let stein = fired.iter().find(|e| e.rule.level() == Level::NonvanishingC);
    let vanishing: Vec<&RuleEvaluation> = fired.iter().copied().filter(|e| e.rule.level().vanishing_rank().is_some()).collect();
    if let Some(s) = stein {
        if !vanishing.is_empty() {
            return Err((s.rule, vanishing.iter().map(|e| e.rule).collect()));
        }
        return Ok(s.verdict().expect("fired"));
    }
    let mut best: Option<&RuleEvaluation> = None;
    for e in vanishing {
        if best.map_or(true, |b| e.rule.level() > b.rule.level()) {
            best = Some(e);
        }
    }
    Ok(best.and_then(RuleEvaluation::verdict).unwrap_or_else(Verdict::inconclusive))
}

pub fn classify(p: &SurgeryPresentation, table: &KnotTable) -> Result<Report, ClassifyError> {
    classify_with(p, table, &ClassifyOptions::default())
}

pub fn classify_with(p: &SurgeryPresentation, table: &KnotTable, opts: &ClassifyOptions) -> Result<Report, ClassifyError> {
    p.validate()?;
    for c in 0..p.data.len() {
        knowledge(p, table, c)?;
    }
    let mut derived = Hypotheses::new();
    let mut notes = Vec::new();
    let cx = context(p, table, &mut derived, &mut notes)?;
    let (evaluations, witness) = eval_rules(p, table, &cx, opts)?;
    if let Some((fires, h)) = loose_note(&cx) {
        for (k, v) in h {
            derived.insert(format!("loose.{k}"), v);
        }
        derived.insert("loose.complement_overtwisted".into(), fires.into());
        if fires {
            notes.push("stabilized surgery dual violates the tight-complement bound: its complement is overtwisted".into());
        }
    }
    let mut report = Report {
        presentation: p.clone(),
        derived,
        homology: cx.homology.clone(),
        evaluations,
        witness,
        notes,
        verdict: Verdict::inconclusive(),
    };
    match combine(&report.evaluations) {
        Ok(v) => {
            report.verdict = v;
            Ok(report)
        }
        Err((nonvanishing, vanishing)) => Err(ClassifyError::InternalInconsistency { nonvanishing, vanishing, report: Box::new(report) }),
    }
}
