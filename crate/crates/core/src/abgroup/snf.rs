use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntMatrix;

/// Smith normal form `U * M * V = D` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// The `min(rows, cols)` diagonal entries of `D`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        let k = self.d.rows().min(self.d.cols());
        (0..k).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }

    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().take_while(|x| !x.is_zero()).collect()
    }
}

/// Computes the Smith normal form with unimodular transforms.
///
/// Pivots are the entry of smallest absolute value; a remainder that does
/// not vanish becomes the next pivot, so the pivot strictly shrinks until its
/// row and column are clear. Divisibility of the trailing block is enforced
/// before moving on, which yields `d_i | d_{i+1}` directly.
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&d, t..rows, t..cols) else {
            break;
        };
        move_to_pivot(&mut d, &mut u, &mut v, t, pi, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                // a nonzero remainder is smaller than the pivot; promote it
                let (pi, pj) = smallest_in_cross(&d, t);
                move_to_pivot(&mut d, &mut u, &mut v, t, pi, pj);
                continue;
            }
            let offending = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&d[(i, j)] % &d[(t, t)]).is_zero())
            });
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SnfDecomposition { d, u, v }
}

fn smallest_nonzero(
    d: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.magnitude() < d[(bi, bj)].magnitude()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn smallest_in_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let col = smallest_nonzero(d, t..d.rows(), t..t + 1);
    let row = smallest_nonzero(d, t..t + 1, t..d.cols());
    match (col, row) {
        (Some(a), Some(b)) => {
            if d[b].magnitude() < d[a].magnitude() {
                b
            } else {
                a
            }
        }
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => unreachable!("pivot cross cannot be all zero"),
    }
}

fn move_to_pivot(
    d: &mut IntMatrix,
    u: &mut IntMatrix,
    v: &mut IntMatrix,
    t: usize,
    i: usize,
    j: usize,
) {
    d.swap_rows(t, i);
    u.swap_rows(t, i);
    d.swap_cols(t, j);
    v.swap_cols(t, j);
}

/// The nonzero diagonal entries of the Smith form, without transforms.
///
/// Diagonalizes on `i64` with checked arithmetic and restarts on `BigInt`
/// if an entry overflows; the diagonal is then brought into divisibility
/// order by gcd/lcm exchanges.
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let small: Option<Vec<Vec<i64>>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(ToPrimitive::to_i64).collect())
        .collect();
    let diagonal = small
        .and_then(|rows| diagonalize(rows, m.cols()))
        .map(|d| d.into_iter().map(BigInt::from).collect())
        .unwrap_or_else(|| {
            let rows = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
            diagonalize(rows, m.cols()).expect("BigInt arithmetic does not overflow")
        });
    divisibility_chain(diagonal)
}

/// Entries for [`diagonalize`]; the checked operations return `None` on
/// overflow.
trait Entry: Clone {
    fn vanishes(&self) -> bool;
    fn smaller(&self, other: &Self) -> bool;
    fn quotient(&self, divisor: &Self) -> Self;
    /// `self - q * other`
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self>;
}

impl Entry for i64 {
    fn vanishes(&self) -> bool {
        *self == 0
    }

    fn smaller(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }

    fn quotient(&self, divisor: &Self) -> Self {
        self.wrapping_div(*divisor)
    }

    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*other)?)
    }
}

impl Entry for BigInt {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn smaller(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }

    fn quotient(&self, divisor: &Self) -> Self {
        self / divisor
    }

    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        Some(self - q * other)
    }
}

/// Nonzero entries of some diagonal form of the matrix, unordered.
fn diagonalize<T: Entry>(mut a: Vec<Vec<T>>, cols: usize) -> Option<Vec<T>> {
    let rows = a.len();
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.vanishes() && pivot.is_none_or(|(pi, pj)| x.smaller(&a[pi][pj])) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            for i in t + 1..rows {
                if a[i][t].vanishes() {
                    continue;
                }
                let q = a[i][t].quotient(&a[t][t]);
                let (upper, lower) = a.split_at_mut(i);
                for (x, y) in lower[0][t..cols].iter_mut().zip(&upper[t][t..cols]) {
                    *x = x.sub_mul(&q, y)?;
                }
            }
            for j in t + 1..cols {
                if a[t][j].vanishes() {
                    continue;
                }
                let q = a[t][j].quotient(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    row[j] = row[j].sub_mul(&q, &row[t])?;
                }
            }
            // a nonzero remainder is smaller than the pivot; promote it
            let col = (t + 1..rows).find(|&i| !a[i][t].vanishes());
            let row = (t + 1..cols).find(|&j| !a[t][j].vanishes());
            match (col, row) {
                (Some(i), _) => a.swap(t, i),
                (None, Some(j)) => a.iter_mut().for_each(|r| r.swap(t, j)),
                (None, None) => break,
            }
        }
        out.push(a[t][t].clone());
    }
    Some(out)
}

fn divisibility_chain(diagonal: Vec<BigInt>) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = diagonal.into_iter().map(|x| x.abs()).collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

/// A Z-basis of `{x : M x = 0}`, returned as vectors of length `cols`.
pub fn right_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// A Z-basis of `{y : y M = 0}`, returned as vectors of length `rows`.
pub fn left_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.rows()).map(|i| snf.u.row(i).to_vec()).collect()
}
