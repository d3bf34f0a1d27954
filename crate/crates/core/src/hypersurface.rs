//! Diagonal abelian actions on Fermat-type hypersurfaces.
//!
//! `X = {Σ a_i x_i^d = 0} ⊂ P^{n+1}` with every `a_i ≠ 0`, and `G = (Z/m)^r`
//! acting on `x_i` through a character `χ_i`. Only coordinate strata can have
//! nontrivial stabilizers: the generic point of `X ∩ {x_j = 0 : j ∉ S}` has
//! support exactly `S`, and its stabilizer is the set of `g` on which all
//! `χ_i`, `i ∈ S`, agree. Such a stratum has dimension `|S| - 2`; it is
//! irreducible when that is positive and consists of `d` points when
//! `|S| = 2`. The coefficients never enter the combinatorics.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::abgroup::{FiniteAbelianSubgroup, TorsionVector};
use crate::error::{Error, Result};
use crate::homology::{reduced_homology, top_invariant, HomologyGroup};
use crate::par;
use crate::quasicomplex::{CellId, QuasiComplex, VertexId};

/// `{"n": .., "d": .., "modulus": m, "group_rank": r, "characters": [[..]; n+2]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceJson {
    pub n: usize,
    pub d: u64,
    pub modulus: u64,
    pub group_rank: usize,
    pub characters: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HypersurfaceJson", into = "HypersurfaceJson")]
pub struct DiagonalHypersurfaceAction {
    n: usize,
    d: u64,
    modulus: u64,
    group_rank: usize,
    characters: Vec<TorsionVector>,
}

impl TryFrom<HypersurfaceJson> for DiagonalHypersurfaceAction {
    type Error = Error;

    fn try_from(j: HypersurfaceJson) -> Result<Self> {
        Self::new(j.n, j.d, j.modulus, j.group_rank, j.characters)
    }
}

impl From<DiagonalHypersurfaceAction> for HypersurfaceJson {
    fn from(a: DiagonalHypersurfaceAction) -> Self {
        HypersurfaceJson {
            n: a.n,
            d: a.d,
            modulus: a.modulus,
            group_rank: a.group_rank,
            characters: a
                .characters
                .iter()
                .map(|c| c.coords().iter().map(|&x| x as i64).collect())
                .collect(),
        }
    }
}

impl DiagonalHypersurfaceAction {
    /// Checks shapes only; see [`validate_action`] for the invariance and
    /// faithfulness conditions.
    pub fn new(
        n: usize,
        d: u64,
        modulus: u64,
        group_rank: usize,
        characters: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("hypersurface dimension must be >= 1".into()));
        }
        if d == 0 {
            return Err(Error::InvalidInput("degree must be >= 1".into()));
        }
        if modulus == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        if characters.len() != n + 2 {
            return Err(Error::InvalidInput(format!(
                "{} characters given, a hypersurface in P^{} needs {}",
                characters.len(),
                n + 1,
                n + 2
            )));
        }
        if let Some(c) = characters.iter().find(|c| c.len() != group_rank) {
            return Err(Error::InvalidInput(format!(
                "character {c:?} does not have length {group_rank}"
            )));
        }
        let characters = characters
            .into_iter()
            .map(|c| TorsionVector::new(modulus, c))
            .collect();
        Ok(DiagonalHypersurfaceAction {
            n,
            d,
            modulus,
            group_rank,
            characters,
        })
    }

    /// `(Z/p)^n` acting on `x_2, ..., x_{n+1}` one summand each, trivially on
    /// `x_0, x_1`, where `p` is the smallest prime factor of `d >= 2`.
    pub fn canonical(n: usize, d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(
                "the canonical action needs degree >= 2".into(),
            ));
        }
        let p = (2..=d).find(|q| d.is_multiple_of(*q)).expect("d >= 2 has a prime factor");
        let characters = (0..n + 2)
            .map(|i| (0..n).map(|j| i64::from(i >= 2 && i - 2 == j)).collect())
            .collect();
        Self::new(n, d, p, n, characters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u64 {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn group_rank_parameter(&self) -> usize {
        self.group_rank
    }

    pub fn characters(&self) -> &[TorsionVector] {
        &self.characters
    }

    pub fn coords(&self) -> usize {
        self.n + 2
    }
}

/// Result of [`validate_action`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionReport {
    pub violations: Vec<String>,
    /// Rank of the group acting effectively on `P^{n+1}`.
    pub group_rank: usize,
    pub full_rank: bool,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `d χ_i = d χ_j` for all coordinates and that no nontrivial element
/// acts as a scalar. The group rank is the rank of the subgroup generated by
/// the differences `χ_i - χ_0`, which is the character group of the
/// effectively acting quotient.
pub fn validate_action(spec: &DiagonalHypersurfaceAction) -> ActionReport {
    let mut violations = Vec::new();
    let chars = &spec.characters;
    let base = chars[0].scale(spec.d);
    for (i, c) in chars.iter().enumerate().skip(1) {
        if c.scale(spec.d) != base {
            violations.push(format!(
                "x_{i}^d and x_0^d carry different characters ({} vs {}), so X is not invariant",
                c.scale(spec.d),
                base
            ));
        }
    }
    let all: Vec<usize> = (0..spec.coords()).collect();
    let scalar = FiniteAbelianSubgroup::equal_character_kernel(chars, &all)
        .expect("shapes checked at construction");
    if !scalar.is_trivial() {
        violations.push(format!(
            "action on P^{} is not faithful: {} acts by scalars",
            spec.n + 1,
            scalar
        ));
    }
    let diffs = chars.iter().map(|c| c.sub(&chars[0])).collect();
    let group_rank = FiniteAbelianSubgroup::generated_by(diffs, spec.modulus, spec.group_rank)
        .expect("shapes checked at construction")
        .rank();
    ActionReport {
        violations,
        group_rank,
        full_rank: group_rank == spec.n,
    }
}

/// Stabilizer of the generic point of the stratum with support `support`.
pub fn stratum_stabilizer(
    spec: &DiagonalHypersurfaceAction,
    support: &[usize],
) -> Result<FiniteAbelianSubgroup> {
    if support.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "support {support:?} is empty on X; strata need at least two coordinates"
        )));
    }
    FiniteAbelianSubgroup::equal_character_kernel(&spec.characters, support)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub support: Vec<usize>,
    pub dim: usize,
    pub codim: usize,
    pub stabilizer: FiniteAbelianSubgroup,
    pub component_count: u64,
}

impl Stratum {
    fn new(spec: &DiagonalHypersurfaceAction, support: Vec<usize>, stabilizer: FiniteAbelianSubgroup) -> Self {
        let dim = support.len() - 2;
        Stratum {
            codim: spec.n - dim,
            component_count: if dim == 0 { spec.d } else { 1 },
            dim,
            support,
            stabilizer,
        }
    }

    pub fn is_maximal_rank(&self) -> bool {
        self.codim >= 1 && self.stabilizer.rank() == self.codim
    }

    /// Zero locus description, e.g. `X∩{x2=0,x3=0}`.
    pub fn label(&self, coords: usize) -> String {
        let zeros = (0..coords)
            .filter(|i| !self.support.contains(i))
            .map(|i| format!("x{i}=0"))
            .join(",");
        format!("X∩{{{zeros}}}")
    }
}

fn supports(coords: usize, max_len: usize) -> Vec<Vec<usize>> {
    (2..=max_len.min(coords))
        .flat_map(|k| (0..coords).combinations(k))
        .sorted()
        .collect()
}

/// Inputs past these sizes are refused rather than left to exhaust memory.
const MAX_COORDS: usize = 22;
const MAX_CELLS: u128 = 1 << 20;

/// All strata with `rank(stabilizer) = codim >= 1`, supports in
/// lexicographic order.
///
/// Fails with `InconsistentGeometry` if some stabilizer has rank above its
/// codimension, if a maximal-rank stratum is not a whole component of the
/// fixed locus of its stabilizer, or if its containing coordinate divisors
/// do not each carry a nontrivial cyclic stabilizer inside it whose ranks
/// add up to the codimension. Refuses more than `MAX_COORDS` coordinates.
pub fn enumerate_maximal_rank_strata(spec: &DiagonalHypersurfaceAction) -> Result<Vec<Stratum>> {
    let coords = spec.coords();
    if coords > MAX_COORDS {
        return Err(Error::InvalidInput(format!(
            "{coords} coordinates: the support scan is exhaustive and capped at {MAX_COORDS}"
        )));
    }
    let candidates = supports(coords, spec.n + 1);
    let stabilizers = par::map(&candidates, |s| stratum_stabilizer(spec, s));
    let mut all = BTreeMap::new();
    for (s, h) in candidates.into_iter().zip(stabilizers) {
        let stratum = Stratum::new(spec, s, h?);
        if stratum.stabilizer.rank() > stratum.codim {
            return Err(Error::InconsistentGeometry(format!(
                "stratum {} has codimension {} but a rank-{} stabilizer",
                stratum.label(coords),
                stratum.codim,
                stratum.stabilizer.rank()
            )));
        }
        all.insert(stratum.support.clone(), stratum);
    }

    let maximal: Vec<&Stratum> = all.values().filter(|s| s.is_maximal_rank()).collect();
    for s in &maximal {
        check_fixed_component(spec, s)?;
        check_divisor_decomposition(spec, s, &all)?;
    }
    Ok(maximal.into_iter().cloned().collect())
}

fn check_fixed_component(spec: &DiagonalHypersurfaceAction, s: &Stratum) -> Result<()> {
    let base = &spec.characters[s.support[0]];
    let eigen: Vec<usize> = (0..spec.coords())
        .filter(|&j| {
            let diff = spec.characters[j].sub(base);
            s.stabilizer.generators().iter().all(|g| diff.pair(g) == 0)
        })
        .collect();
    if eigen != s.support {
        return Err(Error::InconsistentGeometry(format!(
            "stabilizer of {} fixes the larger coordinate plane with support {eigen:?}",
            s.label(spec.coords())
        )));
    }
    Ok(())
}

fn check_divisor_decomposition(
    spec: &DiagonalHypersurfaceAction,
    s: &Stratum,
    all: &BTreeMap<Vec<usize>, Stratum>,
) -> Result<()> {
    let coords = spec.coords();
    let mut joined = FiniteAbelianSubgroup::trivial(spec.modulus, spec.group_rank);
    for j in (0..coords).filter(|j| !s.support.contains(j)) {
        let divisor: Vec<usize> = (0..coords).filter(|&i| i != j).collect();
        let h = &all[&divisor].stabilizer;
        if h.rank() != 1 {
            return Err(Error::InconsistentGeometry(format!(
                "divisor {{x{j}=0}} through {} has stabilizer {h}, expected nontrivial cyclic",
                s.label(coords)
            )));
        }
        if !h.is_subgroup_of(&s.stabilizer) {
            return Err(Error::InconsistentGeometry(format!(
                "stabilizer of divisor {{x{j}=0}} is not inside that of {}",
                s.label(coords)
            )));
        }
        joined = joined.join(h);
    }
    if joined.rank() != s.codim {
        return Err(Error::InconsistentGeometry(format!(
            "divisor stabilizers through {} generate a rank-{} group, expected {}",
            s.label(coords),
            joined.rank(),
            s.codim
        )));
    }
    Ok(())
}

/// Builds `D_G(X)`: one vertex per component of a maximal-rank divisor, and
/// `component_count` parallel `(k-1)`-simplices per maximal-rank stratum of
/// codimension `k`, attached along the cells of the strata containing it.
pub fn dual_complex_hypersurface(spec: &DiagonalHypersurfaceAction) -> Result<QuasiComplex> {
    let coords = spec.coords();
    let mut strata = enumerate_maximal_rank_strata(spec)?;
    strata.sort_by(|a, b| a.codim.cmp(&b.codim).then_with(|| a.support.cmp(&b.support)));
    let total: u128 = strata.iter().map(|s| u128::from(s.component_count)).sum();
    if total > MAX_CELLS {
        return Err(Error::InvalidInput(format!(
            "the dual complex would have {total} cells, more than the limit of {MAX_CELLS}"
        )));
    }

    let mut complex = QuasiComplex::new();
    // support -> cells of its components
    let mut cells: BTreeMap<Vec<usize>, Vec<CellId>> = BTreeMap::new();
    let mut divisor_vertex: BTreeMap<usize, VertexId> = BTreeMap::new();
    for s in &strata {
        let label = s.label(coords);
        let suffix = |c: u64| {
            if s.component_count > 1 {
                format!("{label}[{c}]")
            } else {
                label.clone()
            }
        };
        if s.codim == 1 {
            let missing = (0..coords).find(|j| !s.support.contains(j)).unwrap();
            let mut ids = Vec::new();
            for c in 0..s.component_count {
                let v = complex.add_vertex(suffix(c));
                divisor_vertex.insert(missing, v);
                ids.push(complex.point(v).expect("fresh vertex"));
            }
            cells.insert(s.support.clone(), ids);
            continue;
        }
        let mut through: Vec<(usize, VertexId)> = (0..coords)
            .filter(|j| !s.support.contains(j))
            .map(|j| {
                divisor_vertex.get(&j).map(|v| (j, *v)).ok_or_else(|| {
                    Error::InconsistentGeometry(format!(
                        "divisor {{x{j}=0}} through {label} is missing"
                    ))
                })
            })
            .collect::<Result<_>>()?;
        through.sort_by_key(|(_, v)| complex.vertex_position(*v));
        let vertices: Vec<VertexId> = through.iter().map(|(_, v)| *v).collect();
        let mut facets = Vec::with_capacity(through.len());
        for (j, _) in &through {
            let face: Vec<usize> = s.support.iter().copied().chain([*j]).sorted().collect();
            match cells.get(&face).map(Vec::as_slice) {
                Some([one]) => facets.push(*one),
                _ => {
                    return Err(Error::InconsistentGeometry(format!(
                        "stratum {label} lies on a stratum with support {face:?} that is not a single maximal-rank component"
                    )))
                }
            }
        }
        let mut ids = Vec::new();
        for c in 0..s.component_count {
            ids.push(complex.attach_simplex(&vertices, &facets, suffix(c))?);
        }
        cells.insert(s.support.clone(), ids);
    }
    Ok(complex)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Not G-birational to a full-rank torus action on a smooth projective
    /// toric variety; in particular not linearizable.
    Obstructed,
    NoObstruction,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Obstructed => "OBSTRUCTED",
            Verdict::NoObstruction => "NO_OBSTRUCTION",
            Verdict::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearizabilityReport {
    pub verdict: Verdict,
    /// Unreduced `H_{n-1}` of the dual complex.
    pub invariant: HomologyGroup,
    /// Value every full-rank torus action on a smooth projective toric
    /// variety has.
    pub reference_value: String,
    pub n: usize,
    pub group_rank: usize,
    /// Reduced `H_0`, reported for curves where it is the comparable value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_invariant: Option<HomologyGroup>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Compares the top homology of the dual complex with that of a full-rank
/// toric action.
///
/// For rank `n` the toric value is `Z`; anything else is an obstruction.
/// For rank below `n` both sides vanish and nothing can be concluded. For
/// curves the toric complex is `S^0`, so the reduced `H_0` is compared.
pub fn linearizability_report(spec: &DiagonalHypersurfaceAction) -> Result<LinearizabilityReport> {
    let action = validate_action(spec);
    if !action.is_valid() {
        return Err(Error::InvalidInput(action.violations.join("; ")));
    }
    let complex = dual_complex_hypersurface(spec)?;
    let invariant = top_invariant(&complex, spec.n)?;
    let mut warnings = Vec::new();
    let reduced_invariant = if spec.n == 1 {
        warnings.push(
            "n = 1: the toric dual complex is S^0 with unreduced H_0 = Z^2; the verdict compares reduced H_0"
                .to_string(),
        );
        Some(reduced_homology(&complex, 0)?)
    } else {
        None
    };
    let compared = reduced_invariant.as_ref().unwrap_or(&invariant);
    let verdict = match action.group_rank.cmp(&spec.n) {
        std::cmp::Ordering::Less => Verdict::Inconclusive,
        std::cmp::Ordering::Equal if compared.is_integers() => Verdict::NoObstruction,
        std::cmp::Ordering::Equal => Verdict::Obstructed,
        std::cmp::Ordering::Greater => {
            warnings.push(format!(
                "group rank {} exceeds n = {}; the comparison applies to rank-n subgroups",
                action.group_rank, spec.n
            ));
            Verdict::Inconclusive
        }
    };
    Ok(LinearizabilityReport {
        verdict,
        invariant,
        reference_value: "Z".into(),
        n: spec.n,
        group_rank: action.group_rank,
        reduced_invariant,
        warnings,
    })
}
