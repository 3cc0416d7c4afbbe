//! Text and JSON rendering. JSON keeps every rational as an exact `"p/q"`
//! string; the text form adds approximate decimals for reading.

use std::fmt::Write as _;

use legsurg_core::classify::{Report, Status, Value};
use legsurg_core::invariants::{cusp_counts, writhe};
use legsurg_core::surgery::linalg::{determinant, smith_normal_form};
use legsurg_core::{classical_data, Diagram, Rational};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInvariants {
    pub label: String,
    pub tb: Rational,
    pub rot: Rational,
    pub writhe: i64,
    pub up_cusps: usize,
    pub down_cusps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub components: Vec<ComponentInvariants>,
    /// Symmetric linking matrix, zero diagonal.
    pub linking: Vec<Vec<Rational>>,
}

pub fn invariants_report(d: &Diagram) -> InvariantsReport {
    let data = classical_data(d);
    let components = (0..data.len())
        .map(|c| {
            let (up, down) = cusp_counts(d, c).expect("component exists");
            ComponentInvariants {
                label: data.ids[c].label(),
                tb: data.tb[c].clone(),
                rot: data.rot[c].clone(),
                writhe: writhe(d, c).expect("component exists"),
                up_cusps: up,
                down_cusps: down,
            }
        })
        .collect();
    InvariantsReport { components, linking: data.lk }
}

/// `p/q` followed by an approximate decimal when not an integer.
pub fn show(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        format!("{r} (~{:.4})", r.to_f64_approx())
    }
}

fn show_value(v: &Value) -> String {
    match v {
        Value::Bool(b) => b.to_string(),
        Value::Rational(r) => show(r),
    }
}

pub fn invariants_text(r: &InvariantsReport) -> String {
    let mut out = String::new();
    let width = r.components.iter().map(|c| c.label.len()).max().unwrap_or(0).max(9);
    let _ = writeln!(out, "{:<width$}  {:>6}  {:>6}  {:>6}  {:>5}", "component", "tb", "rot", "writhe", "cusps");
    for c in &r.components {
        let _ = writeln!(
            out,
            "{:<width$}  {:>6}  {:>6}  {:>6}  {:>5}",
            c.label,
            c.tb.to_string(),
            c.rot.to_string(),
            c.writhe,
            c.up_cusps + c.down_cusps
        );
    }
    if r.components.len() > 1 {
        let _ = writeln!(out, "\nlinking numbers");
        for (i, a) in r.components.iter().enumerate() {
            for (j, b) in r.components.iter().enumerate().skip(i + 1) {
                let _ = writeln!(out, "  lk({}, {}) = {}", a.label, b.label, show(&r.linking[i][j]));
            }
        }
    }
    out
}

fn status_text(s: &Status) -> String {
    match s {
        Status::Fired => "FIRED".into(),
        Status::Silent => "silent".into(),
        Status::Unavailable(why) => format!("unavailable: {why}"),
        Status::Excluded(why) => format!("excluded: {why}"),
        Status::Disabled => "disabled".into(),
    }
}

pub fn classify_text(rep: &Report) -> String {
    let p = &rep.presentation;
    let mut out = String::new();
    let _ = writeln!(out, "presentation");
    for c in 0..p.data.len() {
        let role = if p.distinguished == Some(c) {
            "distinguished".to_string()
        } else {
            p.signs[c].map_or("-".to_string(), |s| format!("surgery {s}"))
        };
        let _ = writeln!(out, "  {:<6} tb {:>4}  rot {:>4}  {}", p.label(c), p.data.tb[c].to_string(), p.data.rot[c].to_string(), role);
    }
    for a in 0..p.data.len() {
        for b in a + 1..p.data.len() {
            let _ = writeln!(out, "  lk({}, {}) = {}", p.label(a), p.label(b), p.data.lk(a, b));
        }
    }
    if !rep.derived.is_empty() {
        let _ = writeln!(out, "\nderived");
        for (k, v) in &rep.derived {
            let _ = writeln!(out, "  {k} = {}", show_value(v));
        }
    }
    if let Some(h) = &rep.homology {
        let divisors: Vec<String> = h.divisors.iter().map(BigInt::to_string).collect();
        let _ = writeln!(out, "  smith diagonal = [{}]", divisors.join(", "));
        let _ = writeln!(out, "  order of [L0] = {}", h.order_of_class);
    }
    let _ = writeln!(out, "\nrules");
    for e in &rep.evaluations {
        let _ = writeln!(out, "  {:<22} {}", e.rule.name(), status_text(&e.status));
        if !e.hypotheses.is_empty() && !matches!(e.status, Status::Unavailable(_) | Status::Disabled) {
            let vals: Vec<String> = e.hypotheses.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "      {}", vals.join("  "));
        }
        for n in &e.notes {
            let _ = writeln!(out, "      note: {n}");
        }
    }
    if let Some(w) = &rep.witness {
        let _ = writeln!(out, "\nwitness: tb(L') = {}, framing gap = {}", w.tb_lprime, w.framing_gap);
    }
    for n in &rep.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let v = &rep.verdict;
    let _ = write!(out, "\nverdict: {}", v.level);
    if let Some(r) = v.rule {
        let _ = write!(out, " via {r}");
    }
    if v.scope == legsurg_core::classify::Scope::AnyPositiveSurgery {
        let _ = write!(out, " (every positive contact surgery on L0)");
    }
    out.push('\n');
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfReport {
    #[serde(with = "legsurg_core::rational::serde_bigint::vec")]
    pub divisors: Vec<BigInt>,
    pub det: Rational,
    pub is_qhs3: bool,
    pub free_rank: usize,
    #[serde(with = "legsurg_core::rational::serde_bigint::vec")]
    pub torsion: Vec<BigInt>,
    /// Order of the given class in the cokernel, `None` when infinite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_order: Option<String>,
}

/// Parse a square integer matrix: rows on lines or separated by `;`.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<BigInt>>, String> {
    let rows: Vec<Vec<BigInt>> = text
        .split(['\n', ';'])
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<BigInt>().map_err(|_| format!("`{t}` is not an integer")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(format!("matrix must be square, got {} rows", rows.len()));
    }
    Ok(rows)
}

pub fn snf_report(a: &[Vec<BigInt>], class: Option<&[BigInt]>) -> SnfReport {
    let snf = smith_normal_form(a);
    let rat: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().cloned().map(Rational::from).collect()).collect();
    let det = determinant(&rat);
    let one = BigInt::from(1);
    SnfReport {
        torsion: snf.divisors.iter().filter(|d| **d > one).cloned().collect(),
        free_rank: snf.divisors.iter().filter(|d| **d == BigInt::from(0)).count(),
        is_qhs3: !det.is_zero(),
        det,
        class_order: class.map(|x| {
            legsurg_core::surgery::linalg::cokernel_order(a, x).map_or("infinite".to_string(), |n| n.to_string())
        }),
        divisors: snf.divisors,
    }
}

pub fn snf_text(r: &SnfReport) -> String {
    let show_all = |v: &[BigInt]| v.iter().map(BigInt::to_string).collect::<Vec<_>>().join(", ");
    let mut out = format!("smith diagonal: [{}]\ndet: {}\n", show_all(&r.divisors), r.det);
    let mut parts: Vec<String> = r.torsion.iter().map(|d| format!("Z/{d}")).collect();
    if r.free_rank > 0 {
        parts.insert(0, if r.free_rank == 1 { "Z".into() } else { format!("Z^{}", r.free_rank) });
    }
    let group = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
    let _ = writeln!(out, "cokernel: {group}");
    let _ = writeln!(out, "rational homology sphere: {}", if r.is_qhs3 { "yes" } else { "no" });
    if let Some(o) = &r.class_order {
        let _ = writeln!(out, "class order: {o}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_parse_in_both_layouts() {
        let a = parse_matrix("2 1\n1 2\n").unwrap();
        assert_eq!(a, parse_matrix("2,1; 1,2").unwrap());
        assert!(parse_matrix("1 2\n3").is_err());
        assert!(parse_matrix("1 x").is_err());
    }

    #[test]
    fn snf_of_a_small_matrix() {
        let r = snf_report(&parse_matrix("2 1; 1 2").unwrap(), Some(&[BigInt::from(1), BigInt::from(0)]));
        assert_eq!(r.divisors, vec![BigInt::from(1), BigInt::from(3)]);
        assert_eq!(r.det, Rational::from(3));
        assert_eq!(r.class_order.as_deref(), Some("3"));
        assert!(snf_text(&r).contains("cokernel: Z/3"));
    }

    #[test]
    fn decimals_only_for_fractions() {
        assert_eq!(show(&Rational::from(-7)), "-7");
        assert_eq!(show(&Rational::new(-7, 2)), "-7/2 (~-3.5000)");
    }
}
