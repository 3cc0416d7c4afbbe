//! Building front words from smaller pieces.

use alloc::vec::Vec;

use super::{Event, FrontError, FrontWord};

/// Legendrian closure of a positive braid on `strands` strands.
///
/// Generators are 1-based: `i` stands for the positive crossing of braid
/// strands `i` and `i + 1`. Nested left cusps open the strands, the braid is
/// drawn on the lower half and nested right cusps close it.
pub fn braid_closure(strands: usize, braid: &[usize]) -> Result<FrontWord, FrontError> {
    let mut events: Vec<Event> = (1..=strands).map(Event::LeftCusp).collect();
    events.extend(braid.iter().map(|&g| Event::Crossing(strands + g)));
    events.extend((1..=strands).rev().map(Event::RightCusp));
    FrontWord::new(events)
}

/// Two fronts side by side; the components of `b` come after those of `a`.
pub fn disjoint_union(a: &FrontWord, b: &FrontWord) -> FrontWord {
    let mut events = a.events().to_vec();
    events.extend_from_slice(b.events());
    FrontWord::new(events).expect("concatenation of closed words is closed")
}

/// Legendrian push-off: every strand gets a parallel copy slightly above it.
///
/// A component and its copy are traced consecutively, the copy second, and
/// both default orientations run parallel.
pub fn push_off(word: &FrontWord) -> FrontWord {
    let mut events = Vec::with_capacity(word.len() * 4);
    for &ev in word.events() {
        match ev {
            Event::LeftCusp(i) => {
                let j = 2 * i - 1;
                events.extend([Event::LeftCusp(j), Event::LeftCusp(j), Event::Crossing(j + 1)]);
            }
            Event::RightCusp(i) => {
                let j = 2 * i - 1;
                events.extend([Event::Crossing(j + 1), Event::RightCusp(j + 2), Event::RightCusp(j)]);
            }
            Event::Crossing(i) => {
                let j = 2 * i;
                events.extend([
                    Event::Crossing(j),
                    Event::Crossing(j - 1),
                    Event::Crossing(j + 1),
                    Event::Crossing(j),
                ]);
            }
        }
    }
    FrontWord::new(events).expect("doubling preserves validity")
}

/// Legendrian connected sum: the right cusp at 0-based event `at` of `a` is
/// opened up and the whole of `b`, minus its first left cusp, is spliced in.
pub fn connected_sum_at(a: &FrontWord, at: usize, b: &FrontWord) -> Option<FrontWord> {
    let Event::RightCusp(level) = *a.events().get(at)? else {
        return None;
    };
    let shift = level - 1;
    let mut events = a.events()[..at].to_vec();
    events.extend(b.events().iter().skip(1).map(|&e| match e {
        Event::LeftCusp(i) => Event::LeftCusp(i + shift),
        Event::RightCusp(i) => Event::RightCusp(i + shift),
        Event::Crossing(i) => Event::Crossing(i + shift),
    }));
    events.extend_from_slice(&a.events()[at + 1..]);
    FrontWord::new(events).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Zigzag {
    /// The new cusp pair opens below the strand.
    Below,
    /// The new cusp pair opens above the strand.
    Above,
}

/// Insert a zigzag (a stabilization) on the strand at `level`, just after
/// event `after` (0-based; the strand must exist at that point).
pub fn add_zigzag(word: &FrontWord, after: usize, level: usize, side: Zigzag) -> Option<FrontWord> {
    let mut events = word.events().to_vec();
    let pair = match side {
        Zigzag::Below => [Event::LeftCusp(level + 1), Event::RightCusp(level)],
        Zigzag::Above => [Event::LeftCusp(level), Event::RightCusp(level + 1)],
    };
    if after >= events.len() {
        return None;
    }
    events.splice(after + 1..after + 1, pair);
    FrontWord::new(events).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::{parse_front_word, Diagram};
    use alloc::string::ToString;

    #[test]
    fn closure_of_sigma_cubed() {
        let w = braid_closure(2, &[1, 1, 1]).unwrap();
        let d = Diagram::from_word(&w).unwrap();
        assert_eq!(d.components().len(), 1);
        assert!(d.crossings().iter().all(|c| c.sign == 1));
    }

    #[test]
    fn push_off_has_two_parallel_components() {
        let w = parse_front_word("u1 u1 x2 x2 x2 a1 a1").unwrap();
        let p = push_off(&w);
        let d = Diagram::from_word(&p).unwrap();
        assert_eq!(d.components().len(), 2);
        assert_eq!(p.crossings(), 3 * 4 + 4);
    }

    #[test]
    fn connected_sum_needs_a_right_cusp() {
        let a = parse_front_word("u1 a1").unwrap();
        assert!(connected_sum_at(&a, 0, &a).is_none());
        let s = connected_sum_at(&a, 1, &a).unwrap();
        assert_eq!(s, a);
    }

    #[test]
    fn zigzag_adds_two_cusps() {
        let a = parse_front_word("u1 a1").unwrap();
        let z = add_zigzag(&a, 0, 1, Zigzag::Below).unwrap();
        assert_eq!(z.to_string().trim(), "u1 u2 a1 a1");
        let z = add_zigzag(&a, 0, 2, Zigzag::Above).unwrap();
        assert_eq!(z.to_string().trim(), "u1 u2 a3 a1");
        assert!(add_zigzag(&a, 5, 1, Zigzag::Below).is_none());
    }
}
