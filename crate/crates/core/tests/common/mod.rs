//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's linear algebra.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use dualcx::{CellId, HomologyGroup, QuasiComplex};
use num_traits::ToPrimitive;
use rand::Rng;

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .filter(|&j| m[0][j] != 0)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Smith diagonal from determinantal divisors: `d_1 ... d_k` is the gcd of
/// all `k x k` minors. Returns the nonzero invariant factors.
pub fn smith_by_minors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| i128::from(m[r][c])).collect())
                    .collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

/// All elements of the span of `gens` in `(Z/m)^n`, by closure.
pub fn enumerate_span(gens: &[Vec<u64>], m: u64, n: usize) -> HashSet<Vec<u64>> {
    let mut seen = HashSet::new();
    let zero = vec![0u64; n];
    let mut stack = vec![zero.clone()];
    seen.insert(zero);
    while let Some(x) = stack.pop() {
        for g in gens {
            let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

fn primes_dividing(m: u64) -> Vec<u64> {
    (2..=m).filter(|p| m.is_multiple_of(*p) && (2..*p).all(|q| !p.is_multiple_of(q))).collect()
}

/// Invariant factors (ascending divisibility chain) of a finite abelian
/// group given as a set of elements, from the sizes of its `p^k`-torsion.
pub fn invariant_factors_by_counting(elements: &HashSet<Vec<u64>>, m: u64) -> Vec<u64> {
    let primes = primes_dividing(m);
    // exps[p][i]: exponent of p in the i-th largest cyclic factor
    let mut exps: Vec<Vec<u32>> = Vec::new();
    for &p in &primes {
        let torsion = |k: u32| {
            let q = p.pow(k);
            elements.iter().filter(|x| x.iter().all(|&c| (c * q) % m == 0)).count()
        };
        // at_least[k-1] = number of cyclic p-factors of order >= p^k
        let mut at_least = Vec::new();
        for k in 1.. {
            let mut ratio = torsion(k) / torsion(k - 1);
            let mut c = 0;
            while ratio > 1 {
                ratio /= p as usize;
                c += 1;
            }
            if c == 0 {
                break;
            }
            at_least.push(c);
        }
        let count = at_least.first().copied().unwrap_or(0);
        exps.push((0..count).map(|i| at_least.iter().filter(|&&c| c > i).count() as u32).collect());
    }
    let len = exps.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..len)
        .map(|i| primes.iter().zip(&exps).map(|(p, e)| p.pow(e.get(i).copied().unwrap_or(0))).product())
        .collect();
    factors.reverse();
    factors
}

/// Rank over GF(2) by elimination on bit rows.
pub fn rank_mod2(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Cells of each dimension, in id order.
fn cells_by_dim(k: &QuasiComplex) -> Vec<Vec<CellId>> {
    let top = k.dim();
    (0..=top.max(-1))
        .map(|d| k.cells_of_dim(d as usize).iter().map(|c| c.id).collect())
        .collect()
}

/// Signed boundary of `c` from its facet list.
fn boundary_of(k: &QuasiComplex, c: CellId) -> BTreeMap<CellId, i64> {
    let mut out = BTreeMap::new();
    for (i, f) in k.cell(c).unwrap().facets.iter().enumerate() {
        *out.entry(*f).or_insert(0) += if i % 2 == 0 { 1 } else { -1 };
    }
    out.retain(|_, v| *v != 0);
    out
}

/// `∂∂ = 0`, computed from the facet lists directly.
pub fn dd_is_zero(k: &QuasiComplex) -> bool {
    k.cells().filter(|c| c.dim >= 2).all(|c| {
        let mut total: BTreeMap<CellId, i64> = BTreeMap::new();
        for (f, a) in boundary_of(k, c.id) {
            for (g, b) in boundary_of(k, f) {
                *total.entry(g).or_insert(0) += a * b;
            }
        }
        total.values().all(|&v| v == 0)
    })
}

/// Asserts `∂∂ = 0` both from facets and on the library's boundary matrices.
pub fn assert_dd_zero(k: &QuasiComplex) {
    assert!(dd_is_zero(k), "∂∂ ≠ 0 from facet lists");
    let data = dualcx::boundary_matrices(k).expect("valid complex");
    assert!(data.is_chain_complex(), "∂∂ ≠ 0 on boundary matrices");
}

/// Betti numbers over GF(2).
pub fn mod2_betti(k: &QuasiComplex) -> Vec<usize> {
    let by_dim = cells_by_dim(k);
    let index: Vec<BTreeMap<CellId, usize>> =
        by_dim.iter().map(|cs| cs.iter().enumerate().map(|(i, c)| (*c, i)).collect()).collect();
    // rank of ∂_d : C_d -> C_{d-1}
    let rank = |d: usize| -> usize {
        if d == 0 || d >= by_dim.len() {
            return 0;
        }
        let rows: Vec<Vec<bool>> = by_dim[d]
            .iter()
            .map(|c| {
                let mut row = vec![false; by_dim[d - 1].len()];
                for (f, coeff) in boundary_of(k, *c) {
                    if coeff % 2 != 0 {
                        row[index[d - 1][&f]] ^= true;
                    }
                }
                row
            })
            .collect();
        rank_mod2(rows)
    };
    (0..by_dim.len()).map(|d| by_dim[d].len() - rank(d) - rank(d + 1)).collect()
}

/// Universal coefficients: `dim H_k(F_2) = b_k + #even torsion in H_k and H_{k-1}`.
pub fn mod2_from_integral(table: &[HomologyGroup]) -> Vec<usize> {
    let even = |h: &HomologyGroup| h.torsion.iter().filter(|t| (*t).to_i64().unwrap() % 2 == 0).count();
    (0..table.len())
        .map(|k| table[k].betti + even(&table[k]) + if k > 0 { even(&table[k - 1]) } else { 0 })
        .collect()
}

/// `f_j = C(v, j+1)` for `j <= k`, with no two `j`-cells on the same vertices.
pub fn is_full_skeleton(complex: &QuasiComplex, v: usize, k: usize) -> bool {
    let f = complex.f_vector();
    (0..=k).all(|j| {
        let cells = complex.cells_of_dim(j);
        let sets: BTreeSet<Vec<_>> = cells.iter().map(|c| c.vertices.clone()).collect();
        f.get(j).copied().unwrap_or(0) == binomial(v, j + 1) && sets.len() == cells.len()
    })
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A uniformly chosen cell of dimension `>= 1`, if any.
pub fn random_subdividable(k: &QuasiComplex, rng: &mut impl Rng) -> Option<CellId> {
    let cands: Vec<CellId> = k.cells().filter(|c| c.dim >= 1).map(|c| c.id).collect();
    (!cands.is_empty()).then(|| cands[rng.gen_range(0..cands.len())])
}
