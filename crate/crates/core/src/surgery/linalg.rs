//! Exact dense linear algebra: determinants, linear solves and the Smith
//! normal form of integer matrices.

use alloc::vec::Vec;
use core::mem;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Row-major dense matrix over the rationals.
pub type Matrix = Vec<Vec<Rational>>;

/// Row-major dense integer matrix.
pub type IntMatrix = Vec<Vec<BigInt>>;

fn is_square<T>(m: &[Vec<T>]) -> bool {
    m.iter().all(|row| row.len() == m.len())
}

/// Determinant by Bareiss fraction-free elimination.
///
/// Each row is first cleared of denominators, so the elimination itself
/// runs over the integers with exact divisions.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    assert!(is_square(m), "determinant of a non-square matrix");
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: IntMatrix = m
        .iter()
        .map(|row| {
            let d = Rational::common_denominator(row);
            scale *= &d;
            row.iter()
                .map(|x| x.scaled_integer(&d).expect("denominator cleared"))
                .collect()
        })
        .collect();
    let det = bareiss(&mut a);
    Rational::new(det, scale)
}

/// Determinant of an integer matrix; destroys the input.
pub fn bareiss(a: &mut IntMatrix) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Solve `m x = b`; `None` when `m` is singular.
pub fn solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert!(is_square(m) && b.len() == m.len(), "shape mismatch");
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        let pivot = a[k][k].clone();
        for x in a[k].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in k..=n {
                let v = &a[k][j] * &f;
                a[i][j] -= &v;
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

/// `U · A · V = D` with `D` diagonal, `d_1 | d_2 | ...`, all `d_i >= 0`,
/// and `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// The `min(rows, cols)` diagonal entries; zeros come last.
    pub divisors: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// `row_i -= f * row_k`, in place.
fn row_axpy(m: &mut IntMatrix, i: usize, k: usize, f: &BigInt) {
    let (src, dst) = if i < k {
        let (lo, hi) = m.split_at_mut(k);
        (&hi[0], &mut lo[i])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&lo[k], &mut hi[0])
    };
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= f * s;
    }
}

fn col_axpy(m: &mut IntMatrix, j: usize, k: usize, f: &BigInt) {
    for row in m.iter_mut() {
        let v = f * &row[k];
        row[j] -= v;
    }
}

fn col_swap(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(a: &[Vec<BigInt>]) -> SmithForm {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut m: IntMatrix = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let r = rows.min(cols);
    for t in 0..r {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = smallest_nonzero(&m, t..rows, t..cols) else {
            break;
        };
        m.swap(t, pi);
        u.swap(t, pi);
        col_swap(&mut m, t, pj);
        col_swap(&mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let f = m[i][t].div_floor(&m[t][t]);
                row_axpy(&mut m, i, t, &f);
                row_axpy(&mut u, i, t, &f);
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let f = m[t][j].div_floor(&m[t][t]);
                col_axpy(&mut m, j, t, &f);
                col_axpy(&mut v, j, t, &f);
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // A nonzero remainder is smaller than the pivot; promote it.
                let (pi, pj) = smallest_nonzero(&m, t..rows, t..=t)
                    .filter(|&(i, _)| i != t)
                    .or_else(|| smallest_nonzero(&m, t..=t, t..cols))
                    .expect("nonzero remainder exists");
                if pi != t {
                    m.swap(t, pi);
                    u.swap(t, pi);
                }
                if pj != t {
                    col_swap(&mut m, t, pj);
                    col_swap(&mut v, t, pj);
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[i][j].is_multiple_of(&m[t][t]));
            match bad {
                Some((i, _)) => {
                    let one = -BigInt::one();
                    row_axpy(&mut m, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -mem::take(x);
            }
        }
    }
    let divisors = (0..r).map(|i| m[i][i].clone()).collect();
    SmithForm { divisors, u, v }
}

fn smallest_nonzero(
    m: &IntMatrix,
    rows: impl Iterator<Item = usize> + Clone,
    cols: impl Iterator<Item = usize> + Clone,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if m[i][j].is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Order of the class of `x` in the cokernel `Z^n / A Z^n` of a square
/// integer matrix; `None` when the order is infinite.
pub fn cokernel_order(a: &[Vec<BigInt>], x: &[BigInt]) -> Option<BigInt> {
    let snf = smith_normal_form(a);
    let n = a.len();
    assert_eq!(x.len(), n, "shape mismatch");
    let mut order = BigInt::one();
    for i in 0..n {
        let yi: BigInt = snf.u[i].iter().zip(x).map(|(c, xj)| c * xj).sum();
        let d = snf.divisors.get(i).cloned().unwrap_or_default();
        if d.is_zero() {
            if !yi.is_zero() {
                return None;
            }
            continue;
        }
        order = order.lcm(&(&d / d.gcd(&yi)));
    }
    Some(order)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::q;
    use alloc::vec;
    use proptest::prelude::*;

    /// Cofactor expansion along the first row; the test oracle.
    pub(crate) fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        if n == 0 {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Matrix = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= &term;
            }
        }
        total
    }

    pub(crate) fn int_to_rat(a: &[Vec<BigInt>]) -> Matrix {
        a.iter().map(|r| r.iter().cloned().map(Rational::from).collect()).collect()
    }

    fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect())
            .collect()
    }

    fn ints(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    pub(crate) fn arb_int_matrix(max: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
        (1..=max).prop_flat_map(move |n| {
            proptest::collection::vec(proptest::collection::vec((-range..=range).prop_map(BigInt::from), n), n)
        })
    }

    fn arb_rat_matrix(max: usize) -> impl Strategy<Value = Matrix> {
        (1..=max).prop_flat_map(|n| {
            proptest::collection::vec(
                proptest::collection::vec((-9i64..=9, 1i64..=4).prop_map(|(a, b)| q(a, b)), n),
                n,
            )
        })
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&[]), Rational::one());
        assert_eq!(determinant(&[vec![q(-1, 1)]]), Rational::from(-1));
        let m0 = vec![vec![q(0, 1), q(4, 1)], vec![q(4, 1), q(2, 1)]];
        assert_eq!(determinant(&m0), Rational::from(-16));
        let half = vec![vec![q(1, 2), q(1, 3)], vec![q(1, 5), q(1, 7)]];
        assert_eq!(determinant(&half), q(1, 14) - q(1, 15));
    }

    #[test]
    fn solve_two_by_two() {
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        let x = solve(&m, &[q(3, 1), q(5, 1)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        let singular = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(solve(&singular, &[q(1, 1), q(1, 1)]).is_none());
    }

    #[test]
    fn snf_examples() {
        assert_eq!(smith_normal_form(&ints(&[&[-2]])).divisors, vec![BigInt::from(2)]);
        let s = smith_normal_form(&ints(&[&[0, 0], &[0, -1]]));
        assert_eq!(s.divisors, vec![BigInt::from(1), BigInt::from(0)]);
        let s = smith_normal_form(&ints(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.divisors, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let s = smith_normal_form(&ints(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn class_orders() {
        // 4 in Z/2 is trivial; 1 in Z/2 has order 2; anything nonzero in Z is free.
        assert_eq!(cokernel_order(&ints(&[&[2]]), &[BigInt::from(4)]), Some(BigInt::one()));
        assert_eq!(cokernel_order(&ints(&[&[-2]]), &[BigInt::from(1)]), Some(BigInt::from(2)));
        assert_eq!(cokernel_order(&ints(&[&[0]]), &[BigInt::from(1)]), None);
        assert_eq!(cokernel_order(&ints(&[&[0]]), &[BigInt::from(0)]), Some(BigInt::one()));
        assert_eq!(cokernel_order(&ints(&[&[2, 0], &[0, 3]]), &[BigInt::from(1), BigInt::from(1)]), Some(BigInt::from(6)));
    }

    proptest! {
        #[test]
        fn determinant_matches_cofactor(m in arb_rat_matrix(6)) {
            prop_assert_eq!(determinant(&m), cofactor_det(&m));
        }

        #[test]
        fn solve_solves(m in arb_rat_matrix(4), seed in proptest::collection::vec(-9i64..=9, 4)) {
            let n = m.len();
            let b: Vec<Rational> = seed[..n].iter().map(|&x| Rational::from(x)).collect();
            match solve(&m, &b) {
                None => prop_assert!(determinant(&m).is_zero()),
                Some(x) => {
                    for i in 0..n {
                        let lhs: Rational = (0..n).map(|j| &m[i][j] * &x[j]).sum();
                        prop_assert_eq!(&lhs, &b[i]);
                    }
                }
            }
        }

        #[test]
        fn snf_is_a_valid_factorization(a in arb_int_matrix(5, 12)) {
            let s = smith_normal_form(&a);
            let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
            for (i, row) in d.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if i == j {
                        prop_assert_eq!(x, &s.divisors[i]);
                    } else {
                        prop_assert!(x.is_zero());
                    }
                }
            }
            for w in s.divisors.windows(2) {
                prop_assert!(!w[0].is_negative());
                prop_assert!(w[0].is_zero() && w[1].is_zero() || w[1].is_multiple_of(&w[0]));
            }
            prop_assert_eq!(cofactor_det(&int_to_rat(&s.u)).abs(), Rational::one());
            prop_assert_eq!(cofactor_det(&int_to_rat(&s.v)).abs(), Rational::one());
            let product: BigInt = s.divisors.iter().product();
            prop_assert_eq!(Rational::from(product), cofactor_det(&int_to_rat(&a)).abs());
        }
    }
}
