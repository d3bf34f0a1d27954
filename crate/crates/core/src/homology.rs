//! Integral homology of quasicomplexes.
//!
//! `∂_k` has rows indexed by `(k-1)`-cells and columns by `k`-cells, both in
//! increasing id order; facet `i` contributes `(-1)^i`. Ranks and torsion come
//! from Smith normal form, so everything is exact.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::abgroup::{smith_invariants, IntMatrix};
use crate::error::{Error, Result};
use crate::par;
use crate::quasicomplex::{CellId, QuasiComplex};

/// `Z^betti ⊕ Z/t_1 ⊕ ... ⊕ Z/t_r` in a fixed degree, with `t_i | t_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(degree: usize, betti: usize) -> Self {
        HomologyGroup {
            degree,
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn zero(degree: usize) -> Self {
        Self::free(degree, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Isomorphic to `Z`.
    pub fn is_integers(&self) -> bool {
        self.betti == 1 && self.torsion.is_empty()
    }

    /// Same isomorphism type, ignoring the degree.
    pub fn isomorphic(&self, other: &Self) -> bool {
        self.betti == other.betti && self.torsion == other.torsion
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Boundary matrices of a validated complex with their Smith data.
#[derive(Clone, Debug)]
pub struct ChainComplexData {
    cells: Vec<Vec<CellId>>,
    /// `boundaries[k - 1]` is `∂_k`.
    boundaries: Vec<IntMatrix>,
    ranks: Vec<usize>,
    torsion: Vec<Vec<BigInt>>,
}

impl ChainComplexData {
    /// Cells of dimension `k` in column order of `∂_k`.
    pub fn cells(&self, k: usize) -> &[CellId] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    /// `∂_k` for `1 <= k <= dim`.
    pub fn boundary(&self, k: usize) -> Option<&IntMatrix> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.boundaries
    }

    pub fn rank(&self, k: usize) -> usize {
        k.checked_sub(1)
            .and_then(|i| self.ranks.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn homology(&self, k: usize) -> HomologyGroup {
        let n = self.cells(k).len();
        let betti = n - self.rank(k) - self.rank(k + 1);
        let torsion = self.torsion.get(k).cloned().unwrap_or_default();
        HomologyGroup {
            degree: k,
            betti,
            torsion,
        }
    }

    /// `∂_{k} ∘ ∂_{k+1} = 0` for every `k`.
    pub fn is_chain_complex(&self) -> bool {
        self.boundaries
            .windows(2)
            .all(|w| (&w[0] * &w[1]).is_zero())
    }
}

/// Assembles all boundary matrices. Fails with `InvalidComplex` when
/// [`QuasiComplex::validate`] reports anything.
pub fn boundary_matrices(k: &QuasiComplex) -> Result<ChainComplexData> {
    let violations = k.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidComplex(
            violations.iter().map(ToString::to_string).collect(),
        ));
    }
    let top = (k.dim() + 1) as usize;
    let cells: Vec<Vec<CellId>> = (0..top)
        .map(|d| k.cells_of_dim(d).iter().map(|c| c.id).collect())
        .collect();
    let boundaries: Vec<IntMatrix> = par::map_range(1..top, |d| {
        let rows = &cells[d - 1];
        let row_of = |id: &CellId| rows.binary_search(id).expect("facet of lower dimension");
        let mut m = IntMatrix::zeros(rows.len(), cells[d].len());
        for (j, id) in cells[d].iter().enumerate() {
            let cell = k.cell(*id).expect("listed cell");
            for (i, f) in cell.facets.iter().enumerate() {
                let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                m[(row_of(f), j)] += sign;
            }
        }
        m
    });
    let snf: Vec<(usize, Vec<BigInt>)> = par::map(&boundaries, |m| {
        let factors = smith_invariants(m);
        let torsion = factors.iter().filter(|x| !x.is_one()).cloned().collect();
        (factors.len(), torsion)
    });
    let (ranks, torsion) = snf.into_iter().unzip();
    Ok(ChainComplexData {
        cells,
        boundaries,
        ranks,
        torsion,
    })
}

/// Unreduced integral homology `H_k(K)`.
pub fn homology(k: &QuasiComplex, degree: usize) -> Result<HomologyGroup> {
    Ok(boundary_matrices(k)?.homology(degree))
}

/// `H_0 .. H_dim`; empty for the empty complex.
pub fn homology_table(k: &QuasiComplex) -> Result<Vec<HomologyGroup>> {
    let data = boundary_matrices(k)?;
    let top = (k.dim() + 1) as usize;
    Ok((0..top).map(|d| data.homology(d)).collect())
}

/// Reduced homology: differs from [`homology`] only in degree 0 of a
/// nonempty complex, where one free summand is dropped.
pub fn reduced_homology(k: &QuasiComplex, degree: usize) -> Result<HomologyGroup> {
    let mut h = homology(k, degree)?;
    if degree == 0 && !k.is_empty() {
        h.betti -= 1;
    }
    Ok(h)
}

/// `H_{n-1}` of a dual complex of an `n`-dimensional variety. The degree is
/// `n - 1` even if the complex has no cells that high.
pub fn top_invariant(k: &QuasiComplex, n: usize) -> Result<HomologyGroup> {
    if n == 0 {
        return Err(Error::InvalidInput("variety dimension must be positive".into()));
    }
    if k.dim() >= n as isize {
        return Err(Error::DimensionMismatch {
            max_dim: k.dim() as usize,
            n,
        });
    }
    homology(k, n - 1)
}
