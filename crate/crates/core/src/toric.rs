//! Smooth toric varieties with a finite subgroup of the torus.
//!
//! A finite `G` inside the torus `N ⊗ C*` is given as a subgroup of the
//! `m`-torsion `(1/m Z / Z)^n`, i.e. of `(Z/m)^n`. The stabilizer of the orbit
//! of a cone `σ` is `G ∩ T_σ`, where `T_σ` is the subtorus spanned by the rays
//! of `σ`; for a smooth cone this is the set of `g` whose lift is congruent
//! mod `m` to an integer combination of those rays.
//!
//! The dual complex has one vertex per ray with nontrivial stabilizer and one
//! `(k-1)`-simplex per `k`-cone whose stabilizer has rank `k`. Orbit closures
//! are irreducible, so each such cone contributes exactly one cell.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::abgroup::{smith_normal_form, FiniteAbelianSubgroup, IntMatrix};
use crate::error::{Error, Result};
use crate::par;
use crate::quasicomplex::{CellId, QuasiComplex};

/// A ray-index set, sorted increasingly.
pub type Cone = Vec<usize>;

/// A simplicial fan. Completeness and projectivity are recorded as given and
/// never verified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FanJson", into = "FanJson")]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Cone>,
    complete: bool,
    projective: bool,
}

/// `{"rank": n, "rays": [[...]], "max_cones": [[...]], "complete": bool,
/// "projective": bool}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub complete: bool,
    #[serde(default)]
    pub projective: bool,
}

impl TryFrom<FanJson> for Fan {
    type Error = Error;

    fn try_from(j: FanJson) -> Result<Self> {
        let mut fan = Fan::new(j.rank, j.rays, j.max_cones)?;
        fan.complete = j.complete;
        fan.projective = j.projective;
        Ok(fan)
    }
}

impl From<Fan> for FanJson {
    fn from(f: Fan) -> Self {
        FanJson {
            rank: f.rank,
            rays: f.rays,
            max_cones: f.max_cones,
            complete: f.complete,
            projective: f.projective,
        }
    }
}

impl Fan {
    /// Checks shapes and indices; cones are sorted. Smoothness is checked
    /// separately by [`check_smooth`].
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if let Some((i, r)) = rays.iter().enumerate().find(|(_, r)| r.len() != rank) {
            return Err(Error::InvalidInput(format!(
                "ray {i} {r:?} does not have length {rank}"
            )));
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for c in max_cones {
            let sorted: Cone = c.iter().copied().sorted().dedup().collect();
            if sorted.len() != c.len() {
                return Err(Error::InvalidInput(format!("cone {c:?} repeats a ray")));
            }
            if let Some(&i) = sorted.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidInput(format!(
                    "cone {c:?} refers to missing ray {i}"
                )));
            }
            if sorted.is_empty() {
                return Err(Error::InvalidInput("empty maximal cone".into()));
            }
            cones.push(sorted);
        }
        Ok(Fan {
            rank,
            rays,
            max_cones: cones,
            complete: false,
            projective: false,
        })
    }

    /// Records the completeness and projectivity assertions.
    pub fn asserting(mut self, complete: bool, projective: bool) -> Self {
        self.complete = complete;
        self.projective = projective;
        self
    }

    /// Fan of `P^n`: rays `e_1, ..., e_n, -(e_1 + ... + e_n)`.
    pub fn projective_space(n: usize) -> Self {
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n).combinations(n).collect();
        Fan::new(n, rays, cones)
            .expect("standard fan")
            .asserting(true, true)
    }

    /// Product fan; rays of `self` come first.
    pub fn product(&self, other: &Fan) -> Fan {
        let n = self.rank + other.rank;
        let rays = self
            .rays
            .iter()
            .map(|r| r.iter().copied().chain(std::iter::repeat_n(0, other.rank)).collect())
            .chain(
                other
                    .rays
                    .iter()
                    .map(|r| std::iter::repeat_n(0, self.rank).chain(r.iter().copied()).collect()),
            )
            .collect();
        let shift = self.rays.len();
        let cones = self
            .max_cones
            .iter()
            .cartesian_product(&other.max_cones)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|i| i + shift)).collect())
            .collect();
        Fan::new(n, rays, cones)
            .expect("product of valid fans")
            .asserting(
                self.complete && other.complete,
                self.projective && other.projective,
            )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn asserted_complete(&self) -> bool {
        self.complete
    }

    pub fn asserted_projective(&self) -> bool {
        self.projective
    }

    /// Every nonempty face of a maximal cone, ordered by dimension and then
    /// lexicographically.
    pub fn cones(&self) -> Vec<Cone> {
        let mut all: BTreeSet<(usize, Cone)> = BTreeSet::new();
        for c in &self.max_cones {
            for k in 1..=c.len() {
                for face in c.iter().copied().combinations(k) {
                    all.insert((k, face));
                }
            }
        }
        all.into_iter().map(|(_, c)| c).collect()
    }

    /// Whether the (sorted) ray set is a face of some maximal cone. The empty
    /// cone is always a face.
    pub fn is_cone(&self, cone: &[usize]) -> bool {
        self.max_cones
            .iter()
            .any(|c| cone.iter().all(|i| c.contains(i)))
    }

    /// Rays of a cone as the columns of an `n x k` matrix.
    pub fn ray_matrix(&self, cone: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.rank, cone.len(), |i, j| self.rays[cone[j]][i])
    }

    pub fn ray_label(&self, i: usize) -> String {
        vector_label(&self.rays[i])
    }

    fn normalize(&self, cone: &[usize]) -> Result<Cone> {
        let sorted: Cone = cone.iter().copied().sorted().dedup().collect();
        if sorted.len() != cone.len() || !self.is_cone(&sorted) {
            return Err(Error::UnknownCone(cone.to_vec()));
        }
        Ok(sorted)
    }
}

fn vector_label(v: &[i64]) -> String {
    format!("({})", v.iter().join(","))
}

/// Lists every smoothness violation: non-primitive rays, cones whose ray
/// matrix has maximal minors with gcd other than one, and, for pairs of
/// full-dimensional cones sharing a wall, rays that fail to lie on opposite
/// sides of it (or walls shared by more than two cones).
pub fn check_smooth(fan: &Fan) -> Vec<String> {
    let mut report = Vec::new();
    for (i, r) in fan.rays.iter().enumerate() {
        let g = r.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            report.push(format!("ray {i} {} is not primitive", vector_label(r)));
        }
    }
    for c in &fan.max_cones {
        let snf = smith_normal_form(&fan.ray_matrix(c));
        let diag = snf.diagonal();
        if diag.len() < c.len() || diag.iter().any(Zero::is_zero) {
            report.push(format!("cone {c:?} is not simplicial"));
            continue;
        }
        let index: BigInt = diag.iter().product();
        if !index.is_one() {
            report.push(format!(
                "cone {c:?} is not smooth (gcd of maximal minors {index})"
            ));
        }
    }
    for (a, b) in fan.max_cones.iter().tuple_combinations() {
        if a.iter().all(|i| b.contains(i)) || b.iter().all(|i| a.contains(i)) {
            report.push(format!("cone {a:?} and cone {b:?} are nested"));
        }
    }
    let n = fan.rank;
    let mut walls: BTreeMap<Cone, Vec<usize>> = BTreeMap::new();
    for c in fan.max_cones.iter().filter(|c| c.len() == n && n >= 1) {
        for wall in c.iter().copied().combinations(n - 1) {
            let opposite = *c.iter().find(|i| !wall.contains(i)).unwrap();
            walls.entry(wall).or_default().push(opposite);
        }
    }
    for (wall, opposite) in walls {
        match opposite.as_slice() {
            [_] => {}
            [a, b] => {
                let side = |r: usize| {
                    let mut m = fan.ray_matrix(&wall).transpose();
                    let rows = m.rows();
                    m = IntMatrix::from_fn(rows + 1, n, |i, j| {
                        if i < rows {
                            m[(i, j)].clone()
                        } else {
                            BigInt::from(fan.rays[r][j])
                        }
                    });
                    m.determinant().unwrap().signum()
                };
                if side(*a) * side(*b) != -BigInt::one() {
                    report.push(format!(
                        "cones through wall {wall:?} overlap (rays {a} and {b} on the same side)"
                    ));
                }
            }
            many => report.push(format!(
                "wall {wall:?} lies in {} maximal cones",
                many.len()
            )),
        }
    }
    report
}

fn require_torus_subgroup(fan: &Fan, g: &FiniteAbelianSubgroup) -> Result<()> {
    if g.ambient() != fan.rank {
        return Err(Error::InvalidInput(format!(
            "group lives in (Z/{})^{}, fan has rank {}",
            g.modulus(),
            g.ambient(),
            fan.rank
        )));
    }
    Ok(())
}

/// `G ∩ T_σ`: the subgroup fixing the orbit of `cone` pointwise.
pub fn cone_stabilizer(
    fan: &Fan,
    cone: &[usize],
    g: &FiniteAbelianSubgroup,
) -> Result<FiniteAbelianSubgroup> {
    require_torus_subgroup(fan, g)?;
    let cone = fan.normalize(cone)?;
    if cone.is_empty() {
        return Ok(FiniteAbelianSubgroup::trivial(g.modulus(), g.ambient()));
    }
    Ok(g.intersect_with_span(&fan.ray_matrix(&cone)))
}

/// Cones whose orbits are pointwise fixed by `h`, i.e. with `h ⊆ stab(τ)`.
/// Their orbits make up the fixed locus `X^h`.
pub fn fixed_orbit_cones(fan: &Fan, h: &FiniteAbelianSubgroup) -> Result<Vec<Cone>> {
    require_torus_subgroup(fan, h)?;
    let cones = fan.cones();
    let keep = par::map(&cones, |c| {
        h.is_subgroup_of(&h.intersect_with_span(&fan.ray_matrix(c)))
    });
    Ok(cones
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect())
}

/// Dual complex together with the cell of every included cone.
#[derive(Clone, Debug)]
pub struct ToricDualComplex {
    pub complex: QuasiComplex,
    pub cone_cells: BTreeMap<Cone, CellId>,
}

/// Builds `D_G(X)` for a smooth fan.
pub fn dual_complex_toric(fan: &Fan, g: &FiniteAbelianSubgroup) -> Result<QuasiComplex> {
    dual_complex_toric_indexed(fan, g).map(|d| d.complex)
}

pub fn dual_complex_toric_indexed(
    fan: &Fan,
    g: &FiniteAbelianSubgroup,
) -> Result<ToricDualComplex> {
    let violations = check_smooth(fan);
    if !violations.is_empty() {
        return Err(Error::NotSmooth(violations));
    }
    require_torus_subgroup(fan, g)?;
    let cones = fan.cones();
    let ranks = par::map(&cones, |c| g.intersect_with_span(&fan.ray_matrix(c)).rank());
    // cones() is ordered by dimension, so faces come first
    let selected: Vec<&Cone> = cones
        .iter()
        .zip(&ranks)
        .filter(|(c, &r)| r == c.len())
        .map(|(c, _)| c)
        .collect();

    let mut complex = QuasiComplex::new();
    let mut cone_cells: BTreeMap<Cone, CellId> = BTreeMap::new();
    let mut vertex_of = BTreeMap::new();
    for c in selected.iter().filter(|c| c.len() == 1) {
        let v = complex.add_vertex(fan.ray_label(c[0]));
        vertex_of.insert(c[0], v);
        cone_cells.insert((*c).clone(), complex.point(v).expect("fresh vertex"));
    }
    for c in selected.iter().filter(|c| c.len() >= 2) {
        let mut vertices = Vec::with_capacity(c.len());
        for r in c.iter() {
            let v = vertex_of.get(r).ok_or_else(|| {
                Error::InconsistentGeometry(format!(
                    "cone {c:?} has a rank-{} stabilizer but ray {r} has trivial stabilizer",
                    c.len()
                ))
            })?;
            vertices.push(*v);
        }
        let mut facets = Vec::with_capacity(c.len());
        for i in 0..c.len() {
            let face: Cone = c.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| *r).collect();
            let cell = cone_cells.get(&face).ok_or_else(|| {
                Error::InconsistentGeometry(format!(
                    "cone {c:?} is of maximal rank but its face {face:?} is not"
                ))
            })?;
            facets.push(*cell);
        }
        let id = complex.attach_simplex(&vertices, &facets, format!("V{c:?}"))?;
        cone_cells.insert((*c).clone(), id);
    }
    Ok(ToricDualComplex {
        complex,
        cone_cells,
    })
}

/// Star subdivision at the ray `sum of the cone's rays`, which is appended
/// as the last ray. This is the fan of the blowup of the orbit closure `V(σ)`.
pub fn star_subdivision(fan: &Fan, cone: &[usize]) -> Result<Fan> {
    let cone = fan.normalize(cone)?;
    if cone.len() < 2 {
        return Err(Error::InvalidTarget(format!(
            "cone {cone:?} has dimension {}; blowups need a cone of dimension >= 2",
            cone.len()
        )));
    }
    let new_ray: Vec<i64> = (0..fan.rank)
        .map(|i| cone.iter().map(|&r| fan.rays[r][i]).sum())
        .collect();
    let new_index = fan.rays.len();
    let mut rays = fan.rays.clone();
    rays.push(new_ray);
    let mut max_cones = Vec::new();
    for c in &fan.max_cones {
        if cone.iter().all(|r| c.contains(r)) {
            for r in &cone {
                let mut replaced: Cone = c.iter().copied().filter(|x| x != r).collect();
                replaced.push(new_index);
                max_cones.push(replaced);
            }
        } else {
            max_cones.push(c.clone());
        }
    }
    let out = Fan::new(fan.rank, rays, max_cones)?.asserting(fan.complete, fan.projective);
    let violations = check_smooth(&out);
    if !violations.is_empty() {
        return Err(Error::NotSmooth(violations));
    }
    Ok(out)
}
