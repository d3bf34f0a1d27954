use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{left_kernel, right_kernel, smith_normal_form, IntMatrix};
use crate::error::{Error, Result};

/// An element of `(Z/m)^N` with coordinates reduced into `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionVector {
    modulus: u64,
    coords: Vec<u64>,
}

impl TorsionVector {
    /// Reduces the given integers modulo `modulus`. Panics if `modulus == 0`.
    pub fn new<I>(modulus: u64, coords: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        assert!(modulus > 0, "modulus must be positive");
        let m = BigInt::from(modulus);
        let coords = coords
            .into_iter()
            .map(|c| c.into().mod_floor(&m).to_u64().unwrap())
            .collect();
        TorsionVector { modulus, coords }
    }

    pub fn zero(modulus: u64, len: usize) -> Self {
        Self::new(modulus, vec![0u64; len])
    }

    pub fn basis(modulus: u64, len: usize, i: usize) -> Self {
        Self::new(modulus, (0..len).map(|j| u64::from(i == j)))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Representative in `Z^N` with entries in `[0, m)`.
    pub fn lift(&self) -> Vec<BigInt> {
        self.coords.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        assert_eq!(self.len(), other.len());
        let m = u128::from(self.modulus);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| ((u128::from(a) + u128::from(b)) % m) as u64)
            .collect();
        TorsionVector { modulus: self.modulus, coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        TorsionVector {
            modulus: m,
            coords: self.coords.iter().map(|&c| (m - c) % m).collect(),
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        let m = u128::from(self.modulus);
        TorsionVector {
            modulus: self.modulus,
            coords: self
                .coords
                .iter()
                .map(|&c| ((u128::from(c) * u128::from(k)) % m) as u64)
                .collect(),
        }
    }

    /// Character pairing `sum_j self_j * g_j mod m`.
    pub fn pair(&self, g: &Self) -> u64 {
        assert_eq!(self.modulus, g.modulus);
        assert_eq!(self.len(), g.len());
        let m = u128::from(self.modulus);
        let s = self
            .coords
            .iter()
            .zip(&g.coords)
            .fold(0u128, |acc, (&a, &b)| (acc + u128::from(a) * u128::from(b)) % m);
        s as u64
    }

    /// The same element viewed inside `(Z/(k m))^N` via multiplication by `k`.
    pub fn rescale(&self, k: u64) -> Self {
        let modulus = self.modulus * k;
        TorsionVector {
            modulus,
            coords: self.coords.iter().map(|&c| c * k).collect(),
        }
    }
}

impl fmt::Display for TorsionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ") mod {}", self.modulus)
    }
}

/// A subgroup of `(Z/m)^N`, stored by generators.
///
/// The lattice `L = span(lifted generators) + m Z^N` is kept in Smith
/// coordinates: `x` lies in `L` iff `(x V)_j` is divisible by `d_j` for
/// every `j`. The group is `L / m Z^N`, isomorphic to `⊕ Z/(m/d_j)`.
#[derive(Clone, Debug)]
pub struct FiniteAbelianSubgroup {
    modulus: u64,
    ambient: usize,
    generators: Vec<TorsionVector>,
    invariant_factors: Vec<u64>,
    lattice_v: IntMatrix,
    lattice_diag: Vec<BigInt>,
}

impl FiniteAbelianSubgroup {
    /// Builds the subgroup generated by `generators` inside `(Z/modulus)^ambient`.
    pub fn generated_by(
        generators: Vec<TorsionVector>,
        modulus: u64,
        ambient: usize,
    ) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        if let Some(g) = generators
            .iter()
            .find(|g| g.modulus() != modulus || g.len() != ambient)
        {
            return Err(Error::InvalidInput(format!(
                "generator {g} does not live in (Z/{modulus})^{ambient}"
            )));
        }
        let k = generators.len();
        let m = BigInt::from(modulus);
        let lattice = IntMatrix::from_fn(k + ambient, ambient, |i, j| {
            if i < k {
                BigInt::from(generators[i].coords()[j])
            } else if i - k == j {
                m.clone()
            } else {
                BigInt::zero()
            }
        });
        let snf = smith_normal_form(&lattice);
        let lattice_diag = snf.diagonal();
        debug_assert_eq!(lattice_diag.len(), ambient);
        let mut invariant_factors: Vec<u64> = lattice_diag
            .iter()
            .map(|d| (&m / d).to_u64().expect("d_i divides m"))
            .filter(|&f| f > 1)
            .collect();
        invariant_factors.reverse();
        Ok(FiniteAbelianSubgroup {
            modulus,
            ambient,
            generators,
            invariant_factors,
            lattice_v: snf.v,
            lattice_diag,
        })
    }

    pub fn trivial(modulus: u64, ambient: usize) -> Self {
        Self::generated_by(Vec::new(), modulus, ambient).expect("trivial group")
    }

    pub fn full(modulus: u64, ambient: usize) -> Self {
        let gens = (0..ambient)
            .map(|i| TorsionVector::basis(modulus, ambient, i))
            .collect();
        Self::generated_by(gens, modulus, ambient).expect("full group")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[TorsionVector] {
        &self.generators
    }

    /// Invariant factors `d_1 | d_2 | ...`, all greater than one.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> BigUint {
        self.invariant_factors
            .iter()
            .map(|&f| BigUint::from(f))
            .product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() <= 1
    }

    /// Largest invariant factor (1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    /// Membership test. Panics if `v` lives in a different ambient group.
    pub fn contains(&self, v: &TorsionVector) -> bool {
        assert_eq!(v.modulus(), self.modulus, "modulus mismatch");
        assert_eq!(v.len(), self.ambient, "ambient rank mismatch");
        self.lattice_contains(&v.lift())
    }

    fn lattice_contains(&self, x: &[BigInt]) -> bool {
        let y = self.lattice_v.left_apply(x);
        y.iter()
            .zip(&self.lattice_diag)
            .all(|(a, d)| (a % d).is_zero())
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.modulus == other.modulus
            && self.ambient == other.ambient
            && self.generators.iter().all(|g| other.contains(g))
    }

    /// Same set of elements (generators may differ).
    pub fn same_elements(&self, other: &Self) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    /// Subgroup generated by the union of both generator sets.
    pub fn join(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        assert_eq!(self.ambient, other.ambient);
        let gens = self
            .generators
            .iter()
            .chain(&other.generators)
            .cloned()
            .collect();
        Self::generated_by(gens, self.modulus, self.ambient).expect("compatible groups")
    }

    /// Elements `g` whose lift is congruent mod `m` to an integer combination
    /// of the columns of `span`. For a cone's ray matrix this is the part of
    /// `G` lying in the subtorus that fixes the cone's orbit pointwise.
    pub fn intersect_with_span(&self, span: &IntMatrix) -> Self {
        assert_eq!(span.rows(), self.ambient, "span matrix must have N rows");
        let n = self.ambient;
        let m = BigInt::from(self.modulus);
        let own: Vec<Vec<BigInt>> = self
            .generators
            .iter()
            .map(TorsionVector::lift)
            .chain((0..n).map(|i| scaled_basis(&m, n, i)))
            .collect();
        let theirs: Vec<Vec<BigInt>> = (0..span.cols())
            .map(|j| span.column(j))
            .chain((0..n).map(|i| scaled_basis(&m, n, i)))
            .collect();
        // (a, b) with a * own = b * theirs
        let stacked = IntMatrix::from_fn(own.len() + theirs.len(), n, |i, j| {
            if i < own.len() {
                own[i][j].clone()
            } else {
                -&theirs[i - own.len()][j]
            }
        });
        let own_matrix = IntMatrix::from_fn(own.len(), n, |i, j| own[i][j].clone());
        let gens = left_kernel(&stacked)
            .into_iter()
            .map(|y| own_matrix.left_apply(&y[..own.len()]))
            .map(|x| TorsionVector::new(self.modulus, x))
            .filter(|g| !g.is_zero())
            .collect();
        Self::generated_by(gens, self.modulus, n).expect("same ambient group")
    }

    /// `{g in (Z/m)^r : chi_i(g) = chi_j(g) for all i, j in subset}`, where
    /// characters act through the pairing `chi(g) = sum chi_k g_k mod m`.
    pub fn equal_character_kernel(characters: &[TorsionVector], subset: &[usize]) -> Result<Self> {
        let first = characters
            .first()
            .ok_or_else(|| Error::InvalidInput("no characters given".into()))?;
        let (modulus, r) = (first.modulus(), first.len());
        if characters
            .iter()
            .any(|c| c.modulus() != modulus || c.len() != r)
        {
            return Err(Error::InvalidInput(
                "characters must share modulus and length".into(),
            ));
        }
        if let Some(&i) = subset.iter().find(|&&i| i >= characters.len()) {
            return Err(Error::InvalidInput(format!("coordinate {i} out of range")));
        }
        let Some((&base, rest)) = subset.split_first() else {
            return Ok(Self::full(modulus, r));
        };
        let diffs: Vec<TorsionVector> = rest
            .iter()
            .map(|&i| characters[i].sub(&characters[base]))
            .filter(|c| !c.is_zero())
            .collect();
        if diffs.is_empty() {
            return Ok(Self::full(modulus, r));
        }
        // solve C g + m t = 0 over the integers and keep g
        let s = diffs.len();
        let m = BigInt::from(modulus);
        let system = IntMatrix::from_fn(s, r + s, |i, j| {
            if j < r {
                BigInt::from(diffs[i].coords()[j])
            } else if j - r == i {
                m.clone()
            } else {
                BigInt::zero()
            }
        });
        let gens = right_kernel(&system)
            .into_iter()
            .map(|x| TorsionVector::new(modulus, x.into_iter().take(r)))
            .filter(|g| !g.is_zero())
            .collect();
        Self::generated_by(gens, modulus, r)
    }

    /// The same subgroup inside `(Z/(k m))^N`.
    pub fn rescale(&self, k: u64) -> Self {
        assert!(k > 0);
        let gens = self.generators.iter().map(|g| g.rescale(k)).collect();
        Self::generated_by(gens, self.modulus * k, self.ambient).expect("rescaled group")
    }

    /// The same subgroup expressed with the smallest modulus, the exponent.
    pub fn with_minimal_modulus(&self) -> Self {
        let e = self.exponent();
        let k = self.modulus / e;
        let gens = self
            .generators
            .iter()
            .map(|g| TorsionVector::new(e, g.coords().iter().map(|&c| c / k)))
            .collect();
        Self::generated_by(gens, e, self.ambient).expect("exponent divides modulus")
    }
}

fn scaled_basis(m: &BigInt, n: usize, i: usize) -> Vec<BigInt> {
    (0..n)
        .map(|j| if i == j { m.clone() } else { BigInt::zero() })
        .collect()
}

impl PartialEq for FiniteAbelianSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_elements(other)
    }
}

impl Eq for FiniteAbelianSubgroup {}

impl fmt::Display for FiniteAbelianSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// JSON form `{"modulus": m, "ambient": N, "generators": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub modulus: u64,
    pub ambient: usize,
    pub generators: Vec<Vec<i64>>,
}

impl TryFrom<GroupJson> for FiniteAbelianSubgroup {
    type Error = Error;

    fn try_from(j: GroupJson) -> Result<Self> {
        if j.modulus == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        if let Some(g) = j.generators.iter().find(|g| g.len() != j.ambient) {
            return Err(Error::InvalidInput(format!(
                "generator {g:?} has length {}, expected {}",
                g.len(),
                j.ambient
            )));
        }
        let gens = j
            .generators
            .into_iter()
            .map(|g| TorsionVector::new(j.modulus, g))
            .collect();
        Self::generated_by(gens, j.modulus, j.ambient)
    }
}

impl From<&FiniteAbelianSubgroup> for GroupJson {
    fn from(g: &FiniteAbelianSubgroup) -> Self {
        GroupJson {
            modulus: g.modulus,
            ambient: g.ambient,
            generators: g
                .generators
                .iter()
                .map(|v| v.coords().iter().map(|&c| c as i64).collect())
                .collect(),
        }
    }
}

impl Serialize for FiniteAbelianSubgroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteAbelianSubgroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GroupJson::deserialize(d)?;
        Self::try_from(j).map_err(serde::de::Error::custom)
    }
}
