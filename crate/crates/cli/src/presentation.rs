//! Presentation files: a front word plus surgery signs, declared data and
//! annotations, in `[section]` blocks.
//!
//! ```text
//! [front]
//! @component 1 K
//! u1 u1 x2 x2 x2 a1 a1
//!
//! [surgery]
//! distinguished = K
//!
//! [declared]
//! K.knot = right-trefoil
//! ambient.l_space = true
//!
//! [annotations]
//! isolated_summand K tb=-3 rot=0 knot=figure-eight
//! ```
//!
//! The front may instead be read from a file with `path = trefoil.front`,
//! resolved against the presentation's directory.

use std::fs;
use std::path::{Path, PathBuf};

use legsurg_core::front::{DiagramError, FrontError};
use legsurg_core::surgery::{Annotation, Declared, PresentationError, Sign, SummandData, SurgeryPresentation};
use legsurg_core::{classical_data, parse_front_word, Diagram, FrontWord, Rational};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown component `{name}`")]
    UnknownComponent { line: usize, name: String },
    #[error("front word: {0}")]
    Front(#[from] FrontError),
    #[error("front word: {0}")]
    Diagram(#[from] DiagramError),
    #[error("{0}")]
    Presentation(#[from] PresentationError),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl ParseError {
    fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax { line, msg: msg.into() }
    }
}

/// A parsed presentation file.
#[derive(Clone, Debug)]
pub struct PresentationFile {
    pub word: FrontWord,
    pub diagram: Diagram,
    pub presentation: SurgeryPresentation,
}

pub fn read_file(path: &Path) -> Result<String, ParseError> {
    fs::read_to_string(path).map_err(|source| ParseError::Io { path: path.to_path_buf(), source })
}

/// True when `text` looks like a presentation rather than a bare front word.
pub fn is_presentation(text: &str) -> bool {
    text.lines().any(|l| l.trim().starts_with('['))
}

/// Parse a bare front word and trace it.
pub fn parse_front(text: &str) -> Result<(FrontWord, Diagram), ParseError> {
    let word = parse_front_word(text)?;
    let diagram = Diagram::from_word(&word)?;
    Ok((word, diagram))
}

pub fn load_presentation(path: &Path) -> Result<PresentationFile, ParseError> {
    let text = read_file(path)?;
    parse_presentation(&text, path.parent())
}

#[derive(Default)]
struct Sections {
    front: Vec<(usize, String)>,
    surgery: Vec<(usize, String)>,
    declared: Vec<(usize, String)>,
    annotations: Vec<(usize, String)>,
}

fn split_sections(text: &str) -> Result<Sections, ParseError> {
    let mut s = Sections::default();
    let mut current: Option<&str> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(name) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let name = name.trim();
            if !["front", "surgery", "declared", "annotations"].contains(&name) {
                return Err(ParseError::syntax(line, format!("unknown section [{name}]")));
            }
            current = Some(name);
            continue;
        }
        let body = raw.split('#').next().unwrap_or("").trim();
        let target = match current {
            // Front lines go through untouched: the word parser has its own comments.
            Some("front") => {
                s.front.push((line, raw.to_string()));
                continue;
            }
            Some("surgery") => &mut s.surgery,
            Some("declared") => &mut s.declared,
            Some(_) => &mut s.annotations,
            None if body.is_empty() => continue,
            None => return Err(ParseError::syntax(line, "text before the first section")),
        };
        if !body.is_empty() {
            target.push((line, body.to_string()));
        }
    }
    Ok(s)
}

fn key_value(line: usize, text: &str) -> Result<(&str, &str), ParseError> {
    let (k, v) = text.split_once('=').ok_or_else(|| ParseError::syntax(line, "expected `key = value`"))?;
    Ok((k.trim(), v.trim()))
}

fn rational(line: usize, v: &str) -> Result<Rational, ParseError> {
    v.parse().map_err(|_| ParseError::syntax(line, format!("`{v}` is not a rational number")))
}

fn boolean(line: usize, v: &str) -> Result<bool, ParseError> {
    match v {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        _ => Err(ParseError::syntax(line, format!("`{v}` is not a boolean"))),
    }
}

fn integer<T: std::str::FromStr>(line: usize, v: &str) -> Result<T, ParseError> {
    v.parse().map_err(|_| ParseError::syntax(line, format!("`{v}` is not a nonnegative integer")))
}

fn sign(line: usize, v: &str) -> Result<Sign, ParseError> {
    match v {
        "+1" | "1" | "+" => Ok(Sign::Plus),
        "-1" | "-" => Ok(Sign::Minus),
        _ => Err(ParseError::syntax(line, format!("surgery sign must be +1 or -1, found `{v}`"))),
    }
}

pub fn parse_presentation(text: &str, base: Option<&Path>) -> Result<PresentationFile, ParseError> {
    let sections = split_sections(text)?;
    let word = front_section(&sections.front, base)?;
    let diagram = Diagram::from_word(&word)?;
    let data = classical_data(&diagram);
    let n = data.len();
    let find = |line: usize, name: &str| {
        diagram.find(name).map_err(|_| ParseError::UnknownComponent { line, name: name.to_string() })
    };

    let mut p = SurgeryPresentation {
        data,
        signs: vec![None; n],
        distinguished: None,
        declared: vec![Declared::default(); n],
        ambient: Default::default(),
        annotations: Vec::new(),
    };

    for (line, text) in &sections.surgery {
        let (k, v) = key_value(*line, text)?;
        if k == "distinguished" {
            if p.distinguished.is_some() {
                return Err(ParseError::syntax(*line, "only one distinguished knot"));
            }
            p.distinguished = Some(find(*line, v)?);
        } else {
            let c = find(*line, k)?;
            if p.signs[c].is_some() {
                return Err(ParseError::syntax(*line, format!("sign of {k} given twice")));
            }
            p.signs[c] = Some(sign(*line, v)?);
        }
    }

    for (line, text) in &sections.declared {
        let line = *line;
        let (k, v) = key_value(line, text)?;
        let (who, field) = k.split_once('.').ok_or_else(|| ParseError::syntax(line, "expected `COMPONENT.field = value`"))?;
        if who == "ambient" {
            match field {
                "l_space" => p.ambient.l_space = Some(boolean(line, v)?),
                _ => return Err(ParseError::syntax(line, format!("unknown ambient field `{field}`"))),
            }
            continue;
        }
        let d = &mut p.declared[find(line, who)?];
        match field {
            "knot" => d.knot = Some(v.to_string()),
            "tau" => d.tau = Some(rational(line, v)?),
            "tau_star" => d.tau_star = Some(rational(line, v)?),
            "genus" => d.genus = Some(integer(line, v)?),
            "l_space_knot" => d.l_space_knot = Some(boolean(line, v)?),
            "order_q" => d.order_q = Some(integer(line, v)?),
            "tb_q" => d.tb_q = Some(rational(line, v)?),
            "rot_q" => d.rot_q = Some(rational(line, v)?),
            "chi" => d.chi = Some(rational(line, v)?),
            _ => return Err(ParseError::syntax(line, format!("unknown declared field `{field}`"))),
        }
    }

    for (line, text) in &sections.annotations {
        let line = *line;
        let mut words = text.split_whitespace();
        let kind = words.next().unwrap_or_default();
        let args: Vec<&str> = words.collect();
        let two = |args: &[&str]| -> Result<(usize, usize), ParseError> {
            match args {
                [a, b] => Ok((find(line, a)?, find(line, b)?)),
                _ => Err(ParseError::syntax(line, format!("{kind} takes two components"))),
            }
        };
        let a = match kind {
            "meridian_sum" => {
                let (knot, meridian_of) = two(&args)?;
                Annotation::MeridianSum { knot, meridian_of }
            }
            "ot_configuration" => {
                let (first, second) = two(&args)?;
                Annotation::OtConfiguration { first, second }
            }
            "isolated_summand" => {
                let (comp, rest) = args.split_first().ok_or_else(|| ParseError::syntax(line, "isolated_summand needs a component"))?;
                let component = find(line, comp)?;
                let (mut tb, mut rot, mut tau, mut knot) = (None, None, None, None);
                for kv in rest {
                    let (k, v) = kv.split_once('=').ok_or_else(|| ParseError::syntax(line, format!("expected key=value, found `{kv}`")))?;
                    match k {
                        "tb" => tb = Some(rational(line, v)?),
                        "rot" => rot = Some(rational(line, v)?),
                        "tau" => tau = Some(rational(line, v)?),
                        "knot" => knot = Some(v.to_string()),
                        _ => return Err(ParseError::syntax(line, format!("unknown summand field `{k}`"))),
                    }
                }
                let (Some(tb), Some(rot)) = (tb, rot) else {
                    return Err(ParseError::syntax(line, "isolated_summand needs tb= and rot="));
                };
                Annotation::IsolatedSummand { component, summand: SummandData { tb, rot, tau, knot } }
            }
            other => return Err(ParseError::syntax(line, format!("unknown annotation `{other}`"))),
        };
        p.annotations.push(a);
    }

    p.validate()?;
    Ok(PresentationFile { word, diagram, presentation: p })
}

fn front_section(lines: &[(usize, String)], base: Option<&Path>) -> Result<FrontWord, ParseError> {
    let first_line = lines.first().map_or(1, |l| l.0);
    let path_line = lines.iter().find(|(_, t)| {
        let t = t.split('#').next().unwrap_or("").trim();
        t.starts_with("path") && t.contains('=')
    });
    if let Some((line, t)) = path_line {
        let (_, v) = key_value(*line, t.split('#').next().unwrap_or(""))?;
        let path = base.map_or_else(|| PathBuf::from(v), |b| b.join(v));
        return Ok(parse_front_word(&read_file(&path)?)?);
    }
    let text: String = lines.iter().map(|(_, t)| format!("{t}\n")).collect();
    if text.trim().is_empty() {
        return Err(ParseError::syntax(first_line, "the [front] section is empty"));
    }
    Ok(parse_front_word(&text)?)
}
