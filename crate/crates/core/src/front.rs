//! Front words: a combinatorial encoding of Legendrian link fronts.
//!
//! A front is read left to right as a sequence of elementary events acting on
//! the strands currently present, numbered 1, 2, ... from the top:
//!
//! * `u<i>` : a left cusp opens two new strands at levels `i` and `i+1`;
//! * `a<i>` : a right cusp joins the strands at levels `i` and `i+1`;
//! * `x<i>` : the strands at levels `i` and `i+1` cross and swap places.
//!
//! The text format also accepts `#` line comments and directives
//! `@component <k> <name> <+|->` naming the `k`-th traced component and
//! choosing its orientation.
//!
//! At a crossing the strand moving down (more negative slope) passes over the
//! strand moving up. With that resolution the sign of a crossing is the
//! product of the horizontal directions of its two strands.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub mod construct;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Event {
    LeftCusp(usize),
    RightCusp(usize),
    Crossing(usize),
}

impl Event {
    pub fn level(self) -> usize {
        match self {
            Event::LeftCusp(i) | Event::RightCusp(i) | Event::Crossing(i) => i,
        }
    }

    /// Change in the number of strands caused by this event.
    fn strand_delta(self) -> isize {
        match self {
            Event::LeftCusp(_) => 2,
            Event::RightCusp(_) => -2,
            Event::Crossing(_) => 0,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::LeftCusp(i) => write!(f, "u{i}"),
            Event::RightCusp(i) => write!(f, "a{i}"),
            Event::Crossing(i) => write!(f, "x{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Orientation {
    /// Traverse from the component's first left cusp along its upper branch.
    #[default]
    Default,
    Reversed,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Default => Orientation::Reversed,
            Orientation::Reversed => Orientation::Default,
        }
    }

    fn factor(self) -> i8 {
        match self {
            Orientation::Default => 1,
            Orientation::Reversed => -1,
        }
    }

    fn symbol(self) -> char {
        match self {
            Orientation::Default => '+',
            Orientation::Reversed => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDirective {
    /// 1-based component number, in order of first left cusp.
    pub index: usize,
    pub name: String,
    pub orientation: Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FrontError {
    #[error("line {line}, event {event}: unknown token `{token}`")]
    UnknownToken { line: usize, event: usize, token: String },
    #[error("line {line}, event {event}: malformed level in `{token}`")]
    MalformedLevel { line: usize, event: usize, token: String },
    #[error("line {line}: malformed directive `{text}`")]
    MalformedDirective { line: usize, text: String },
    #[error("component {index} named twice")]
    DuplicateDirective { index: usize },
    #[error("component name `{name}` used twice")]
    DuplicateName { name: String },
    #[error("event {event}: `{token}` needs level {needed} but only {strands} strands are present")]
    LevelOutOfRange { event: usize, token: String, needed: usize, strands: usize },
    #[error("event {event}: {strands} strands still open at the end of the word")]
    Unclosed { event: usize, strands: usize },
}

impl FrontError {
    /// 1-based index of the offending event, when the error is tied to one.
    pub fn event(&self) -> Option<usize> {
        match self {
            FrontError::UnknownToken { event, .. }
            | FrontError::MalformedLevel { event, .. }
            | FrontError::LevelOutOfRange { event, .. }
            | FrontError::Unclosed { event, .. } => Some(*event),
            _ => None,
        }
    }
}

/// A validated front word.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FrontWord {
    events: Vec<Event>,
    directives: Vec<ComponentDirective>,
}

impl FrontWord {
    pub fn new(events: Vec<Event>) -> Result<Self, FrontError> {
        Self::with_directives(events, Vec::new())
    }

    pub fn with_directives(
        events: Vec<Event>,
        mut directives: Vec<ComponentDirective>,
    ) -> Result<Self, FrontError> {
        validate(&events)?;
        directives.sort_by_key(|d| d.index);
        for pair in directives.windows(2) {
            if pair[0].index == pair[1].index {
                return Err(FrontError::DuplicateDirective { index: pair[0].index });
            }
        }
        for (i, d) in directives.iter().enumerate() {
            if directives[..i].iter().any(|e| e.name == d.name) {
                return Err(FrontError::DuplicateName { name: d.name.clone() });
            }
        }
        Ok(FrontWord { events, directives })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn directives(&self) -> &[ComponentDirective] {
        &self.directives
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn left_cusps(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, Event::LeftCusp(_))).count()
    }

    pub fn crossings(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, Event::Crossing(_))).count()
    }

    /// Running strand count after each event.
    pub fn strand_counts(&self) -> Vec<usize> {
        let mut count = 0isize;
        self.events
            .iter()
            .map(|e| {
                count += e.strand_delta();
                count as usize
            })
            .collect()
    }

    /// The word with its directives replaced.
    pub fn set_directives(self, directives: Vec<ComponentDirective>) -> Result<Self, FrontError> {
        Self::with_directives(self.events, directives)
    }
}

fn validate(events: &[Event]) -> Result<(), FrontError> {
    let mut count = 0usize;
    for (k, &ev) in events.iter().enumerate() {
        let (needed, ok) = match ev {
            Event::LeftCusp(i) => (i, i >= 1 && i <= count + 1),
            Event::RightCusp(i) | Event::Crossing(i) => (i + 1, i >= 1 && i + 1 <= count),
        };
        if !ok {
            return Err(FrontError::LevelOutOfRange {
                event: k + 1,
                token: ev.to_string(),
                needed,
                strands: count,
            });
        }
        count = (count as isize + ev.strand_delta()) as usize;
    }
    if count != 0 {
        return Err(FrontError::Unclosed { event: events.len(), strands: count });
    }
    Ok(())
}

/// Parse the front-word text format.
pub fn parse_front_word(text: &str) -> Result<FrontWord, FrontError> {
    let mut events = Vec::new();
    let mut directives = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('@') {
            directives.push(parse_directive(rest, line_no, line)?);
            continue;
        }
        for token in line.split_whitespace() {
            let event_no = events.len() + 1;
            let mut chars = token.chars();
            let head = chars.next().unwrap_or(' ');
            let tail = chars.as_str();
            let ctor: fn(usize) -> Event = match head {
                'u' => Event::LeftCusp,
                'a' => Event::RightCusp,
                'x' => Event::Crossing,
                _ => {
                    return Err(FrontError::UnknownToken {
                        line: line_no,
                        event: event_no,
                        token: token.to_string(),
                    })
                }
            };
            let level = tail
                .parse::<usize>()
                .ok()
                .filter(|&l| l >= 1 && tail.bytes().all(|b| b.is_ascii_digit()))
                .ok_or_else(|| FrontError::MalformedLevel {
                    line: line_no,
                    event: event_no,
                    token: token.to_string(),
                })?;
            events.push(ctor(level));
        }
    }
    FrontWord::with_directives(events, directives)
}

fn parse_directive(rest: &str, line: usize, text: &str) -> Result<ComponentDirective, FrontError> {
    let bad = || FrontError::MalformedDirective { line, text: text.to_string() };
    let mut parts = rest.split_whitespace();
    if parts.next() != Some("component") {
        return Err(bad());
    }
    let index: usize = parts.next().and_then(|s| s.parse().ok()).filter(|&k| k >= 1).ok_or_else(bad)?;
    let name = parts.next().ok_or_else(bad)?.to_string();
    let orientation = match parts.next() {
        None | Some("+") => Orientation::Default,
        Some("-") => Orientation::Reversed,
        Some(_) => return Err(bad()),
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(ComponentDirective { index, name, orientation })
}

impl fmt::Display for FrontWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.directives {
            writeln!(f, "@component {} {} {}", d.index, d.name, d.orientation.symbol())?;
        }
        let tokens: Vec<String> = self.events.iter().map(|e| e.to_string()).collect();
        writeln!(f, "{}", tokens.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComponentId {
    /// 0-based position in the diagram.
    pub index: usize,
    pub name: Option<String>,
}

impl ComponentId {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("L{}", self.index + 1))
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// What a component does at an event it passes through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    LeftCusp,
    RightCusp,
    Over,
    Under,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Visit {
    /// 0-based event index.
    pub event: usize,
    pub role: Role,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: ComponentId,
    pub orientation: Orientation,
    /// Events in traversal order, starting at the first left cusp.
    pub route: Vec<Visit>,
    pub up_cusps: usize,
    pub down_cusps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingInfo {
    /// 0-based event index.
    pub event: usize,
    pub over: usize,
    pub under: usize,
    pub sign: i8,
}

impl CrossingInfo {
    pub fn involves(&self, c: usize) -> bool {
        self.over == c || self.under == c
    }

    pub fn is_self(&self) -> bool {
        self.over == self.under
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("{given} orientations given for {components} traced components")]
    OrientationCount { given: usize, components: usize },
    #[error("directive names component {index} but only {components} were traced")]
    DirectiveOutOfRange { index: usize, components: usize },
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
}

/// An x-monotone arc running from a left cusp to a right cusp.
#[derive(Clone, Debug)]
struct Strand {
    left: usize,
    left_upper: bool,
    right: usize,
    right_upper: bool,
    /// (event, passes over)
    crossings: Vec<(usize, bool)>,
}

/// A traced, oriented front.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    word: FrontWord,
    components: Vec<Component>,
    crossings: Vec<CrossingInfo>,
}

fn sweep(events: &[Event]) -> (Vec<Strand>, Vec<[usize; 2]>) {
    let mut strands: Vec<Strand> = Vec::new();
    // For each event, the two strands it involves (upper/lower or over/under).
    let mut touching = Vec::with_capacity(events.len());
    let mut levels: Vec<usize> = Vec::new();
    for (k, &ev) in events.iter().enumerate() {
        match ev {
            Event::LeftCusp(i) => {
                let a = strands.len();
                let b = a + 1;
                for upper in [true, false] {
                    strands.push(Strand {
                        left: k,
                        left_upper: upper,
                        right: usize::MAX,
                        right_upper: false,
                        crossings: Vec::new(),
                    });
                }
                levels.insert(i - 1, b);
                levels.insert(i - 1, a);
                touching.push([a, b]);
            }
            Event::Crossing(i) => {
                let (s, t) = (levels[i - 1], levels[i]);
                strands[s].crossings.push((k, true));
                strands[t].crossings.push((k, false));
                levels.swap(i - 1, i);
                touching.push([s, t]);
            }
            Event::RightCusp(i) => {
                let (s, t) = (levels[i - 1], levels[i]);
                strands[s].right = k;
                strands[s].right_upper = true;
                strands[t].right = k;
                strands[t].right_upper = false;
                levels.drain(i - 1..=i);
                touching.push([s, t]);
            }
        }
    }
    (strands, touching)
}

impl Diagram {
    /// Trace the word using the orientations named by its directives.
    pub fn from_word(word: &FrontWord) -> Result<Self, DiagramError> {
        let n = count_components(word.events());
        let mut orientations = vec![Orientation::Default; n];
        for d in word.directives() {
            if d.index > n {
                return Err(DiagramError::DirectiveOutOfRange { index: d.index, components: n });
            }
            orientations[d.index - 1] = d.orientation;
        }
        build_diagram(word, &orientations)
    }

    pub fn word(&self) -> &FrontWord {
        &self.word
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn crossings(&self) -> &[CrossingInfo] {
        &self.crossings
    }

    pub fn component(&self, c: usize) -> Result<&Component, DiagramError> {
        self.components
            .get(c)
            .ok_or_else(|| DiagramError::UnknownComponent(format!("#{}", c + 1)))
    }

    /// Resolve a component by label (`L1`, or a directive name).
    pub fn find(&self, label: &str) -> Result<usize, DiagramError> {
        self.components
            .iter()
            .position(|c| c.id.label() == label)
            .ok_or_else(|| DiagramError::UnknownComponent(label.to_string()))
    }

    pub fn orientations(&self) -> Vec<Orientation> {
        self.components.iter().map(|c| c.orientation).collect()
    }

    /// The same front with component `c` traversed the other way.
    pub fn reversed(&self, c: usize) -> Result<Self, DiagramError> {
        self.component(c)?;
        let mut o = self.orientations();
        o[c] = o[c].flipped();
        build_diagram(&self.word, &o)
    }
}

/// Number of components, by following strands through the cusps.
pub fn count_components(events: &[Event]) -> usize {
    let (strands, touching) = sweep(events);
    trace_cycles(events, &strands, &touching).len()
}

struct Cycle {
    /// (strand, traversed rightward) in order.
    legs: Vec<(usize, bool)>,
}

fn trace_cycles(events: &[Event], strands: &[Strand], touching: &[[usize; 2]]) -> Vec<Cycle> {
    let mut seen = vec![false; strands.len()];
    let mut cycles = Vec::new();
    for (k, ev) in events.iter().enumerate() {
        if !matches!(ev, Event::LeftCusp(_)) {
            continue;
        }
        let [upper, _] = touching[k];
        if seen[upper] {
            continue;
        }
        let mut legs = Vec::new();
        let mut cur = upper;
        let mut rightward = true;
        loop {
            seen[cur] = true;
            legs.push((cur, rightward));
            let s = &strands[cur];
            let cusp = if rightward { s.right } else { s.left };
            let [p, q] = touching[cusp];
            cur = if p == cur { q } else { p };
            rightward = !rightward;
            if cur == upper && rightward {
                break;
            }
        }
        cycles.push(Cycle { legs });
    }
    cycles
}

/// Trace the components of `word` and orient them.
pub fn build_diagram(word: &FrontWord, orientations: &[Orientation]) -> Result<Diagram, DiagramError> {
    let events = word.events();
    let (strands, touching) = sweep(events);
    let cycles = trace_cycles(events, &strands, &touching);
    if orientations.len() != cycles.len() {
        return Err(DiagramError::OrientationCount {
            given: orientations.len(),
            components: cycles.len(),
        });
    }
    for d in word.directives() {
        if d.index > cycles.len() {
            return Err(DiagramError::DirectiveOutOfRange { index: d.index, components: cycles.len() });
        }
    }

    // Per strand: owning component and horizontal direction (+1 rightward).
    let mut owner = vec![0usize; strands.len()];
    let mut direction = vec![0i8; strands.len()];
    let mut components = Vec::with_capacity(cycles.len());
    for (ci, (cycle, &orientation)) in cycles.iter().zip(orientations).enumerate() {
        let f = orientation.factor();
        let (mut up, mut down) = (0, 0);
        let mut route = Vec::new();
        for &(s, rightward) in &cycle.legs {
            owner[s] = ci;
            direction[s] = if rightward { f } else { -f };
            let strand = &strands[s];
            let crossing_visit = |&(event, over): &(usize, bool)| Visit {
                event,
                role: if over { Role::Over } else { Role::Under },
            };
            if rightward {
                route.extend(strand.crossings.iter().map(crossing_visit));
                route.push(Visit { event: strand.right, role: Role::RightCusp });
                // Arriving on the upper branch of a right cusp turns downward.
                if strand.right_upper { down += 1 } else { up += 1 }
            } else {
                route.extend(strand.crossings.iter().rev().map(crossing_visit));
                route.push(Visit { event: strand.left, role: Role::LeftCusp });
                // Arriving on the lower branch of a left cusp turns upward.
                if strand.left_upper { down += 1 } else { up += 1 }
            }
        }
        if orientation == Orientation::Reversed {
            // Walk backwards from the same starting cusp.
            let last = route.pop().expect("a component has at least one cusp");
            route.reverse();
            route.insert(0, last);
            core::mem::swap(&mut up, &mut down);
        } else {
            // Put the starting left cusp first.
            route.rotate_right(1);
        }
        let name = word
            .directives()
            .iter()
            .find(|d| d.index == ci + 1)
            .map(|d| d.name.clone());
        components.push(Component {
            id: ComponentId { index: ci, name },
            orientation,
            route,
            up_cusps: up,
            down_cusps: down,
        });
    }

    let crossings = events
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e, Event::Crossing(_)))
        .map(|(k, _)| {
            let [over, under] = touching[k];
            CrossingInfo {
                event: k,
                over: owner[over],
                under: owner[under],
                sign: direction[over] * direction[under],
            }
        })
        .collect();

    Ok(Diagram { word: word.clone(), components, crossings })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) const UNKNOT: &str = "u1 a1";
    pub(crate) const RIGHT_TREFOIL: &str = "u1 u1 x2 x2 x2 a1 a1";

    #[test]
    fn parses_unknot() {
        let w = parse_front_word(UNKNOT).unwrap();
        assert_eq!(w.events(), &[Event::LeftCusp(1), Event::RightCusp(1)]);
    }

    #[test]
    fn parses_trefoil_word() {
        let w = parse_front_word(RIGHT_TREFOIL).unwrap();
        assert_eq!(w.len(), 7);
        assert_eq!(w.crossings(), 3);
        assert_eq!(w.left_cusps(), 2);
        assert_eq!(w.strand_counts(), vec![2, 4, 4, 4, 4, 2, 0]);
    }

    #[test]
    fn right_cusp_out_of_range() {
        let err = parse_front_word("u1 a2").unwrap_err();
        assert_eq!(err.event(), Some(2));
        assert!(matches!(err, FrontError::LevelOutOfRange { needed: 3, strands: 2, .. }));
    }

    #[test]
    fn syntax_errors_carry_event_index() {
        let err = parse_front_word("u1 q1 a1").unwrap_err();
        assert!(matches!(err, FrontError::UnknownToken { event: 2, .. }));
        let err = parse_front_word("u1\nx a1").unwrap_err();
        assert!(matches!(err, FrontError::MalformedLevel { line: 2, event: 2, .. }));
        let err = parse_front_word("u0 a1").unwrap_err();
        assert!(matches!(err, FrontError::MalformedLevel { event: 1, .. }));
        let err = parse_front_word("u1 u1 a1").unwrap_err();
        assert!(matches!(err, FrontError::Unclosed { event: 3, strands: 2 }));
        let err = parse_front_word("x1").unwrap_err();
        assert!(matches!(err, FrontError::LevelOutOfRange { event: 1, .. }));
        let err = parse_front_word("u3").unwrap_err();
        assert!(matches!(err, FrontError::LevelOutOfRange { event: 1, needed: 3, strands: 0, .. }));
    }

    #[test]
    fn comments_and_directives() {
        let w = parse_front_word("# hopf\n@component 2 K -\n@component 1 U\nu1 u3 x2 # clasp\n x2 a1 a1\n").unwrap();
        assert_eq!(w.len(), 6);
        assert_eq!(w.directives()[0].name, "U");
        assert_eq!(w.directives()[1].orientation, Orientation::Reversed);
        assert!(parse_front_word("@component 1 A\n@component 1 B\nu1 a1").is_err());
        assert!(parse_front_word("@component 1 A\n@component 2 A\nu1 a1 u1 a1").is_err());
        assert!(parse_front_word("@comp 1 A\nu1 a1").is_err());
        assert!(parse_front_word("@component 1 A *\nu1 a1").is_err());
        let d = Diagram::from_word(&parse_front_word("@component 3 Z\nu1 a1").unwrap());
        assert!(matches!(d, Err(DiagramError::DirectiveOutOfRange { index: 3, components: 1 })));
    }

    #[test]
    fn unknot_diagram() {
        let d = Diagram::from_word(&parse_front_word(UNKNOT).unwrap()).unwrap();
        assert_eq!(d.components().len(), 1);
        let c = &d.components()[0];
        assert_eq!((c.up_cusps, c.down_cusps), (1, 1));
        assert!(d.crossings().is_empty());
        assert_eq!(c.route[0], Visit { event: 0, role: Role::LeftCusp });
    }

    #[test]
    fn trefoil_crossings_are_positive() {
        let d = Diagram::from_word(&parse_front_word(RIGHT_TREFOIL).unwrap()).unwrap();
        assert_eq!(d.components().len(), 1);
        assert!(d.crossings().iter().all(|c| c.sign == 1 && c.is_self()));
        let c = &d.components()[0];
        assert_eq!(c.up_cusps + c.down_cusps, 4);
        // Every crossing is visited twice, every cusp once.
        assert_eq!(c.route.len(), 3 * 2 + 4);
    }

    #[test]
    fn split_unknots() {
        let d = Diagram::from_word(&parse_front_word("u1 a1 u1 a1").unwrap()).unwrap();
        assert_eq!(d.components().len(), 2);
        assert!(d.crossings().is_empty());
        let nested = Diagram::from_word(&parse_front_word("u1 u2 a2 a1").unwrap()).unwrap();
        assert_eq!(nested.components().len(), 2);
    }

    #[test]
    fn orientation_count_mismatch() {
        let w = parse_front_word(UNKNOT).unwrap();
        let err = build_diagram(&w, &[]).unwrap_err();
        assert_eq!(err, DiagramError::OrientationCount { given: 0, components: 1 });
    }

    #[test]
    fn hopf_clasp_signs() {
        let w = parse_front_word("u1 u3 x2 x2 a1 a1").unwrap();
        let d = Diagram::from_word(&w).unwrap();
        assert_eq!(d.components().len(), 2);
        assert!(d.crossings().iter().all(|c| !c.is_self() && c.sign == -1));
        let r = d.reversed(1).unwrap();
        assert!(r.crossings().iter().all(|c| c.sign == 1));
    }

    /// Independent tracer: union-find over strand pieces between events.
    fn brute_force_components(events: &[Event]) -> usize {
        let mut parent: Vec<usize> = Vec::new();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut slots: Vec<usize> = Vec::new();
        for ev in events {
            match *ev {
                Event::LeftCusp(i) => {
                    let a = parent.len();
                    parent.push(a);
                    slots.insert(i - 1, a);
                    slots.insert(i - 1, a);
                }
                Event::Crossing(i) => slots.swap(i - 1, i),
                Event::RightCusp(i) => {
                    let (x, y) = (slots[i - 1], slots[i]);
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    parent[rx] = ry;
                    slots.drain(i - 1..=i);
                }
            }
        }
        (0..parent.len()).filter(|&x| find(&mut parent, x) == x).count()
    }

    pub(crate) fn arb_word(max_cusps: usize) -> impl Strategy<Value = FrontWord> {
        proptest::collection::vec((0u8..3, 0usize..64), 1..40).prop_map(move |choices| {
            let mut events = Vec::new();
            let mut count = 0usize;
            let mut opened = 0usize;
            for (kind, r) in choices {
                match kind {
                    0 if opened < max_cusps => {
                        events.push(Event::LeftCusp(1 + r % (count + 1)));
                        count += 2;
                        opened += 1;
                    }
                    1 if count >= 2 => events.push(Event::Crossing(1 + r % (count - 1))),
                    2 if count >= 2 => {
                        events.push(Event::RightCusp(1 + r % (count - 1)));
                        count -= 2;
                    }
                    _ => {}
                }
            }
            if events.is_empty() {
                events.push(Event::LeftCusp(1));
                count = 2;
            }
            while count > 0 {
                events.push(Event::RightCusp(1));
                count -= 2;
            }
            FrontWord::new(events).expect("generator keeps words valid")
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(w in arb_word(6)) {
            let printed = w.to_string();
            prop_assert_eq!(parse_front_word(&printed).unwrap(), w);
        }

        #[test]
        fn strand_count_balances(w in arb_word(6)) {
            let counts = w.strand_counts();
            prop_assert_eq!(*counts.last().unwrap(), 0);
            prop_assert!(counts.iter().all(|&c| c % 2 == 0));
        }

        #[test]
        fn tracers_agree(w in arb_word(6)) {
            let d = Diagram::from_word(&w).unwrap();
            prop_assert_eq!(d.components().len(), brute_force_components(w.events()));
            prop_assert_eq!(count_components(w.events()), d.components().len());
        }

        #[test]
        fn every_event_visited_correctly(w in arb_word(6)) {
            let d = Diagram::from_word(&w).unwrap();
            let mut visits = vec![0usize; w.len()];
            for c in d.components() {
                prop_assert!((c.up_cusps + c.down_cusps) % 2 == 0);
                prop_assert!(c.up_cusps + c.down_cusps >= 2);
                for v in &c.route {
                    visits[v.event] += 1;
                }
            }
            for (k, e) in w.events().iter().enumerate() {
                match e {
                    Event::Crossing(_) => prop_assert_eq!(visits[k], 2),
                    _ => prop_assert_eq!(visits[k], 1),
                }
            }
        }

        #[test]
        fn reversal_swaps_cusps_and_flips_mixed_signs(w in arb_word(6), pick in 0usize..8) {
            let d = Diagram::from_word(&w).unwrap();
            let c = pick % d.components().len();
            let r = d.reversed(c).unwrap();
            let (a, b) = (&d.components()[c], &r.components()[c]);
            prop_assert_eq!((a.up_cusps, a.down_cusps), (b.down_cusps, b.up_cusps));
            for (x, y) in d.crossings().iter().zip(r.crossings()) {
                let mixed = x.involves(c) && !x.is_self();
                prop_assert_eq!(x.sign == y.sign, !mixed);
            }
        }
    }
}
