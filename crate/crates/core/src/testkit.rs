//! Test-only oracles that do not share code paths with the library.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::front::{Event, FrontWord};

/// Laurent polynomial in `A`: exponent -> coefficient.
pub type Laurent = BTreeMap<i64, i64>;

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn add_into(acc: &mut Laurent, p: &Laurent) {
    for (e, c) in p {
        *acc.entry(*e).or_insert(0) += c;
    }
    acc.retain(|_, c| *c != 0);
}

pub fn laurent(terms: &[(i64, i64)]) -> Laurent {
    terms.iter().map(|&(e, c)| (e, c)).filter(|&(_, c)| c != 0).collect()
}

/// Normalized Kauffman bracket `(-A^3)^(-w) <D>` of the diagram obtained by
/// resolving each front crossing with the downward strand on top.
///
/// The writhe here is recomputed from strand directions found by walking the
/// diagram, independently of the library tracer.
pub fn normalized_bracket(word: &FrontWord) -> Laurent {
    let events = word.events();
    let crossings: Vec<usize> = events
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e, Event::Crossing(_)))
        .map(|(k, _)| k)
        .collect();
    let n = crossings.len();
    assert!(n <= 18, "state sum too large");
    let loop_value = laurent(&[(2, -1), (-2, -1)]);
    let mut bracket = Laurent::new();
    for state in 0u32..(1 << n) {
        let loops = count_loops(events, state);
        let a_count = state.count_ones() as i64;
        let b_count = n as i64 - a_count;
        let mut term = laurent(&[(a_count - b_count, 1)]);
        for _ in 1..loops {
            term = mul(&term, &loop_value);
        }
        add_into(&mut bracket, &term);
    }
    let w = writhe_by_walk(events);
    let sign = if w % 2 == 0 { 1 } else { -1 };
    mul(&bracket, &laurent(&[(-3 * w, sign)]))
}

/// Number of loops after smoothing every crossing; bit k of `state` set
/// means the k-th crossing gets the A-smoothing.
fn count_loops(events: &[Event], state: u32) -> usize {
    let mut parent: Vec<usize> = Vec::new();
    let mut slots: Vec<usize> = Vec::new();
    let fresh = |parent: &mut Vec<usize>| {
        let id = parent.len();
        parent.push(id);
        id
    };
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    fn union(p: &mut [usize], a: usize, b: usize) {
        let (ra, rb) = (find(p, a), find(p, b));
        p[ra] = rb;
    }
    let mut k = 0;
    for ev in events {
        match *ev {
            Event::LeftCusp(i) => {
                let s = fresh(&mut parent);
                slots.insert(i - 1, s);
                slots.insert(i - 1, s);
            }
            Event::RightCusp(i) => {
                union(&mut parent, slots[i - 1], slots[i]);
                slots.drain(i - 1..=i);
            }
            Event::Crossing(i) => {
                let (nw, sw) = (slots[i - 1], slots[i]);
                let (ne, se) = (fresh(&mut parent), fresh(&mut parent));
                if state >> k & 1 == 1 {
                    union(&mut parent, nw, ne);
                    union(&mut parent, sw, se);
                } else {
                    union(&mut parent, nw, sw);
                    union(&mut parent, ne, se);
                }
                slots[i - 1] = ne;
                slots[i] = se;
                k += 1;
            }
        }
    }
    (0..parent.len()).filter(|&x| find(&mut parent, x) == x).count()
}

/// Total writhe from an explicit walk over segment ports.
///
/// Ports: cusps use 0 (upper) and 1 (lower); crossings use 0 = NW, 1 = SW,
/// 2 = NE, 3 = SE. The over strand joins NW and SE.
fn writhe_by_walk(events: &[Event]) -> i64 {
    type Port = (usize, u8);
    // Each segment runs from a left port to a right port.
    let mut segs: Vec<(Port, Port)> = Vec::new();
    let mut open: Vec<Port> = Vec::new();
    let mut owner: BTreeMap<Port, usize> = BTreeMap::new();
    let close = |segs: &mut Vec<(Port, Port)>, owner: &mut BTreeMap<Port, usize>, from: Port, to: Port| {
        owner.insert(from, segs.len());
        owner.insert(to, segs.len());
        segs.push((from, to));
    };
    for (k, ev) in events.iter().enumerate() {
        match *ev {
            Event::LeftCusp(i) => {
                open.insert(i - 1, (k, 1));
                open.insert(i - 1, (k, 0));
            }
            Event::RightCusp(i) => {
                let (a, b) = (open[i - 1], open[i]);
                close(&mut segs, &mut owner, a, (k, 0));
                close(&mut segs, &mut owner, b, (k, 1));
                open.drain(i - 1..=i);
            }
            Event::Crossing(i) => {
                let (a, b) = (open[i - 1], open[i]);
                close(&mut segs, &mut owner, a, (k, 0));
                close(&mut segs, &mut owner, b, (k, 1));
                open[i - 1] = (k, 2);
                open[i] = (k, 3);
            }
        }
    }
    let is_crossing = |k: usize| matches!(events[k], Event::Crossing(_));
    let through = |(k, p): Port| -> Port {
        if is_crossing(k) {
            (k, 3 - p)
        } else {
            (k, 1 - p)
        }
    };
    // (crossing, over?) -> +1 when traversed rightward
    let mut dir: BTreeMap<(usize, bool), i64> = BTreeMap::new();
    let mut seen = alloc::vec![false; segs.len()];
    for s0 in 0..segs.len() {
        if seen[s0] {
            continue;
        }
        let (mut s, mut forward) = (s0, true);
        loop {
            seen[s] = true;
            let (l, r) = segs[s];
            let arrive = if forward { r } else { l };
            if is_crossing(arrive.0) {
                let over = arrive.1 == 0 || arrive.1 == 3;
                dir.insert((arrive.0, over), if forward { 1 } else { -1 });
            }
            let leave = through(arrive);
            s = owner[&leave];
            forward = segs[s].0 == leave;
            if s == s0 {
                break;
            }
        }
    }
    (0..events.len())
        .filter(|&k| is_crossing(k))
        .map(|k| dir[&(k, true)] * dir[&(k, false)])
        .sum()
}

/// Deterministic xorshift generator; keeps the oracle free of dependencies.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

/// A random valid word with at most `cusps` left cusps and `crossings` crossings.
pub fn random_word(rng: &mut XorShift, cusps: usize, crossings: usize) -> FrontWord {
    let mut events = Vec::new();
    let mut count = 0usize;
    let (mut opened, mut crossed) = (0, 0);
    loop {
        let choice = rng.below(3);
        if choice == 0 && opened < cusps {
            events.push(Event::LeftCusp(1 + rng.below(count + 1)));
            count += 2;
            opened += 1;
        } else if choice == 1 && count >= 2 && crossed < crossings {
            events.push(Event::Crossing(1 + rng.below(count - 1)));
            crossed += 1;
        } else if choice == 2 && count >= 2 && (opened == cusps || rng.below(3) == 0) {
            events.push(Event::RightCusp(1 + rng.below(count - 1)));
            count -= 2;
            if count == 0 {
                break;
            }
        } else if opened == cusps && crossed == crossings && count == 0 {
            break;
        }
    }
    FrontWord::new(events).expect("generated word is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::construct::{add_zigzag, Zigzag};
    use crate::front::{parse_front_word, Diagram};
    use crate::invariants::{rotation, thurston_bennequin};
    use crate::rational::Rational;

    pub const FIGURE_EIGHT: &str = "u1 u2 x1 x3 x3 x2 x2 a1 a1";
    pub const LEFT_TREFOIL: &str = "u1 u1 x2 u3 x2 x5 u2 x1 a5 x3 a2 x3 a2 a1";

    fn tb_rot(word: &str) -> (Rational, Rational) {
        let d = Diagram::from_word(&parse_front_word(word).unwrap()).unwrap();
        (thurston_bennequin(&d, 0).unwrap(), rotation(&d, 0).unwrap())
    }

    fn jones_right_trefoil() -> Laurent {
        // V = t + t^3 - t^4 with t = A^-4
        laurent(&[(-4, 1), (-12, 1), (-16, -1)])
    }

    #[test]
    fn stabilized_unknots_have_trivial_bracket() {
        let mut w = parse_front_word("u1 a1").unwrap();
        for (k, side) in [Zigzag::Below, Zigzag::Above, Zigzag::Below, Zigzag::Above].into_iter().enumerate() {
            w = add_zigzag(&w, 0, 1, side).unwrap();
            assert_eq!(normalized_bracket(&w), laurent(&[(0, 1)]), "after {} zigzags", k + 1);
        }
        let twisted = parse_front_word("u1 u1 x2 a1 a1").unwrap();
        assert_eq!(normalized_bracket(&twisted), laurent(&[(0, 1)]));
    }

    #[test]
    fn anchor_knot_types_and_invariants() {
        let right = "u1 u1 x2 x2 x2 a1 a1";
        assert_eq!(normalized_bracket(&parse_front_word(right).unwrap()), jones_right_trefoil());
        assert_eq!(tb_rot(right), (Rational::from(1), Rational::from(0)));

        let mirror: Laurent = jones_right_trefoil().iter().map(|(e, c)| (-e, *c)).collect();
        assert_eq!(normalized_bracket(&parse_front_word(LEFT_TREFOIL).unwrap()), mirror);
        let (tb, rot) = tb_rot(LEFT_TREFOIL);
        assert_eq!(tb, Rational::from(-6));
        assert_eq!(rot.abs(), Rational::from(1));

        let eight = laurent(&[(8, 1), (4, -1), (0, 1), (-4, -1), (-8, 1)]);
        assert_eq!(normalized_bracket(&parse_front_word(FIGURE_EIGHT).unwrap()), eight);
        assert_eq!(tb_rot(FIGURE_EIGHT), (Rational::from(-3), Rational::from(0)));

        assert_eq!(tb_rot("u1 a1"), (Rational::from(-1), Rational::from(0)));
    }

    #[test]
    fn walk_writhe_matches_library() {
        let mut rng = XorShift(7);
        for _ in 0..300 {
            let w = random_word(&mut rng, 4, 6);
            let d = Diagram::from_word(&w).unwrap();
            // Mixed crossings depend on the chosen orientations; knots do not.
            if d.components().len() != 1 {
                continue;
            }
            let total: i64 = d.crossings().iter().map(|c| c.sign as i64).sum();
            assert_eq!(writhe_by_walk(w.events()), total, "{}", w);
        }
    }
}
