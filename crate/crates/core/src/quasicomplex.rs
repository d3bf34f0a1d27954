//! Simplicial quasicomplexes.
//!
//! Cells are simplices glued along explicit facet links, so two distinct
//! cells may have the same vertex set (Δ-complex semantics). Vertices carry a
//! label and a position in a global order fixed at insertion; every cell lists
//! its vertices increasingly in that order, and facet `i` of a cell is the face
//! obtained by dropping vertex `i`. Each vertex owns exactly one 0-cell.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: CellId,
    pub dim: usize,
    pub vertices: Vec<VertexId>,
    /// Entry `i` is the face omitting `vertices[i]`; empty for 0-cells.
    pub facets: Vec<CellId>,
    pub component: String,
}

/// One problem found by [`QuasiComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub cell: Option<CellId>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cell {
            Some(c) => write!(f, "{c}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct QuasiComplex {
    vertices: Vec<Vertex>,
    position: HashMap<VertexId, usize>,
    cells: BTreeMap<CellId, Cell>,
    next_vertex: usize,
    next_cell: usize,
}

impl QuasiComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Boundary of the standard `n`-simplex on vertices `0..=n`.
    pub fn simplex_boundary(n: usize) -> Self {
        Self::simplex_skeleton(n, n.saturating_sub(1))
    }

    /// The full standard `n`-simplex.
    pub fn simplex(n: usize) -> Self {
        Self::simplex_skeleton(n, n)
    }

    /// The `k`-skeleton of the standard `n`-simplex.
    pub fn simplex_skeleton(n: usize, k: usize) -> Self {
        let mut cx = Self::new();
        let vs: Vec<VertexId> = (0..=n).map(|i| cx.add_vertex(i.to_string())).collect();
        for size in 2..=(k + 1).min(n + 1) {
            for subset in vs.iter().copied().combinations(size) {
                let label = subset.iter().map(|v| v.0).join(",");
                cx.attach_spanning(&subset, label)
                    .expect("faces of a simplex are unique");
            }
        }
        cx
    }

    /// Appends a vertex at the end of the global order together with its 0-cell.
    pub fn add_vertex(&mut self, label: impl Into<String>) -> VertexId {
        let label = label.into();
        let id = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.position.insert(id, self.vertices.len());
        self.vertices.push(Vertex {
            id,
            label: label.clone(),
        });
        let cid = self.fresh_cell_id();
        self.cells.insert(
            cid,
            Cell {
                id: cid,
                dim: 0,
                vertices: vec![id],
                facets: Vec::new(),
                component: label,
            },
        );
        id
    }

    /// Attaches a simplex of dimension `vertices.len() - 1 >= 1` along the
    /// given facets.
    pub fn attach_simplex(
        &mut self,
        vertices: &[VertexId],
        facets: &[CellId],
        component: impl Into<String>,
    ) -> Result<CellId> {
        if vertices.len() < 2 {
            return Err(Error::MalformedAttachment(
                "0-cells are created by add_vertex; attach needs at least two vertices".into(),
            ));
        }
        for v in vertices {
            if !self.position.contains_key(v) {
                return Err(Error::UnknownId(v.to_string()));
            }
        }
        if !self.strictly_increasing(vertices) {
            return Err(Error::MalformedAttachment(format!(
                "vertices {vertices:?} are not strictly increasing in the global order"
            )));
        }
        if facets.len() != vertices.len() {
            return Err(Error::MalformedAttachment(format!(
                "a {}-simplex needs {} facets, got {}",
                vertices.len() - 1,
                vertices.len(),
                facets.len()
            )));
        }
        for (i, f) in facets.iter().enumerate() {
            let facet = self
                .cells
                .get(f)
                .ok_or_else(|| Error::UnknownId(f.to_string()))?;
            if !is_face_omitting(vertices, i, &facet.vertices) {
                return Err(Error::MalformedAttachment(format!(
                    "facet {i} ({f}) has vertices {:?}, expected {:?} without entry {i}",
                    facet.vertices, vertices
                )));
            }
        }
        let id = self.fresh_cell_id();
        self.cells.insert(
            id,
            Cell {
                id,
                dim: vertices.len() - 1,
                vertices: vertices.to_vec(),
                facets: facets.to_vec(),
                component: component.into(),
            },
        );
        Ok(id)
    }

    /// Attaches a simplex whose facets are looked up by vertex set. Fails if
    /// some facet is missing or not unique.
    pub fn attach_spanning(
        &mut self,
        vertices: &[VertexId],
        component: impl Into<String>,
    ) -> Result<CellId> {
        let mut facets = Vec::with_capacity(vertices.len());
        for i in 0..vertices.len() {
            let face: Vec<VertexId> = omit(vertices, i);
            let found = self.cells_with_vertices(&face);
            match found.as_slice() {
                [one] => facets.push(*one),
                [] => {
                    return Err(Error::MalformedAttachment(format!(
                        "no cell on vertices {face:?}"
                    )))
                }
                _ => {
                    return Err(Error::MalformedAttachment(format!(
                        "several cells on vertices {face:?}"
                    )))
                }
            }
        }
        self.attach_simplex(vertices, &facets, component)
    }

    fn fresh_cell_id(&mut self) -> CellId {
        let id = CellId(self.next_cell);
        self.next_cell += 1;
        id
    }

    fn strictly_increasing(&self, vertices: &[VertexId]) -> bool {
        vertices
            .iter()
            .map(|v| self.position.get(v))
            .tuple_windows()
            .all(|(a, b)| matches!((a, b), (Some(a), Some(b)) if a < b))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_label(&self, v: VertexId) -> Option<&str> {
        self.position
            .get(&v)
            .map(|&p| self.vertices[p].label.as_str())
    }

    /// Position of `v` in the global vertex order.
    pub fn vertex_position(&self, v: VertexId) -> Option<usize> {
        self.position.get(&v).copied()
    }

    pub fn cell(&self, id: CellId) -> Option<&Cell> {
        self.cells.get(&id)
    }

    /// All cells in increasing id order.
    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.values()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cells_of_dim(&self, k: usize) -> Vec<&Cell> {
        self.cells.values().filter(|c| c.dim == k).collect()
    }

    pub fn cells_with_vertices(&self, vertices: &[VertexId]) -> Vec<CellId> {
        self.cells
            .values()
            .filter(|c| c.vertices == vertices)
            .map(|c| c.id)
            .collect()
    }

    /// The 0-cell of a vertex.
    pub fn point(&self, v: VertexId) -> Option<CellId> {
        self.cells
            .values()
            .find(|c| c.dim == 0 && c.vertices[0] == v)
            .map(|c| c.id)
    }

    /// Maximal cell dimension, `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.cells
            .values()
            .map(|c| c.dim as isize)
            .max()
            .unwrap_or(-1)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let len = (self.dim() + 1) as usize;
        let mut f = vec![0; len];
        for c in self.cells.values() {
            f[c.dim] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    fn cofacets(&self) -> HashMap<CellId, Vec<CellId>> {
        let mut up: HashMap<CellId, Vec<CellId>> = HashMap::new();
        for c in self.cells.values() {
            for f in &c.facets {
                up.entry(*f).or_default().push(c.id);
            }
        }
        up
    }

    fn require(&self, c: CellId) -> Result<&Cell> {
        self.cells
            .get(&c)
            .ok_or_else(|| Error::UnknownId(c.to_string()))
    }

    /// All cells having `c` as an iterated face, including `c` itself.
    pub fn star(&self, c: CellId) -> Result<BTreeSet<CellId>> {
        self.require(c)?;
        let up = self.cofacets();
        let mut seen = BTreeSet::from([c]);
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            for y in up.get(&x).into_iter().flatten() {
                if seen.insert(*y) {
                    stack.push(*y);
                }
            }
        }
        Ok(seen)
    }

    /// The given cells together with all their iterated facets.
    pub fn closure(&self, cells: &BTreeSet<CellId>) -> Result<BTreeSet<CellId>> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<CellId> = cells.iter().copied().collect();
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            stack.extend(self.require(x)?.facets.iter().copied());
        }
        Ok(seen)
    }

    /// `closure(star(c)) \ star(c)`.
    pub fn link(&self, c: CellId) -> Result<BTreeSet<CellId>> {
        let star = self.star(c)?;
        let closed = self.closure(&star)?;
        Ok(closed.difference(&star).copied().collect())
    }

    /// Stellar subdivision at `c` with a barycenter labelled `b(c)`.
    pub fn stellar_subdivide(&self, c: CellId) -> Result<QuasiComplex> {
        self.stellar_subdivide_labeled(c, format!("b({c})"))
    }

    /// Removes the open star of `c` and fills each removed cell `π` with the
    /// cones `b * ρ` over its faces `ρ` that avoid `c` but span `π` together
    /// with `c`. For simplicial complexes this is the cone over the link;
    /// parallel cells each get their own cones. The barycenter `b` is
    /// appended last in the global order. Surviving cells keep their ids;
    /// new cells get fresh ones.
    pub fn stellar_subdivide_labeled(
        &self,
        c: CellId,
        label: impl Into<String>,
    ) -> Result<QuasiComplex> {
        let target = self.require(c)?;
        if target.dim == 0 {
            return Err(Error::InvalidTarget(format!(
                "{c} is a 0-cell; only cells of dimension >= 1 can be subdivided"
            )));
        }
        let star = self.star(c)?;
        let inside: BTreeSet<VertexId> = target.vertices.iter().copied().collect();

        // (|W|, π, W): the cone b * (face of π on W) lies in π
        let mut pieces: Vec<(usize, CellId, Vec<VertexId>)> = Vec::new();
        for &pi in &star {
            let vertices = &self.cells[&pi].vertices;
            for kept in target.vertices.iter().copied().powerset() {
                if kept.len() == target.vertices.len() {
                    continue;
                }
                let w: Vec<VertexId> = vertices
                    .iter()
                    .copied()
                    .filter(|v| !inside.contains(v) || kept.contains(v))
                    .collect();
                if !w.is_empty() {
                    pieces.push((w.len(), pi, w));
                }
            }
        }
        pieces.sort_by_key(|(len, pi, w)| {
            (*len, *pi, w.iter().map(|v| self.position[v]).collect::<Vec<_>>())
        });

        let mut out = self.clone();
        for s in &star {
            out.cells.remove(s);
        }
        let label = label.into();
        let p = out.add_vertex(label.clone());
        let p_cell = out.point(p).expect("fresh vertex has a 0-cell");

        let mut cone: HashMap<(CellId, Vec<VertexId>), CellId> = HashMap::new();
        for (_, pi, w) in pieces {
            let rho = self.face_on(pi, &w);
            let mut facets = Vec::with_capacity(w.len() + 1);
            for i in 0..w.len() {
                let rest: Vec<VertexId> =
                    w.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| *v).collect();
                if rest.is_empty() {
                    facets.push(p_cell);
                    continue;
                }
                let span: Vec<VertexId> = self.cells[&pi]
                    .vertices
                    .iter()
                    .copied()
                    .filter(|v| inside.contains(v) || rest.contains(v))
                    .collect();
                facets.push(cone[&(self.face_on(pi, &span), rest)]);
            }
            facets.push(rho);
            let mut vertices = w.clone();
            vertices.push(p);
            let component = format!("{label}*{}", self.cells[&rho].component);
            let id = out.attach_simplex(&vertices, &facets, component)?;
            cone.insert((pi, w), id);
        }
        Ok(out)
    }

    /// The iterated face of `cell` on the vertex subset `w` (in cell order).
    fn face_on(&self, cell: CellId, w: &[VertexId]) -> CellId {
        let mut current = cell;
        loop {
            let cell = &self.cells[&current];
            match cell.vertices.iter().position(|v| !w.contains(v)) {
                Some(i) => current = cell.facets[i],
                None => return current,
            }
        }
    }

    /// Cells of dimension at most `k`, with ids preserved.
    pub fn skeleton(&self, k: usize) -> QuasiComplex {
        let mut out = self.clone();
        out.cells.retain(|_, c| c.dim <= k);
        out
    }

    /// Checks face closure, facet/vertex consistency, vertex ordering, the
    /// one-0-cell-per-vertex rule, and that iterated faces of each cell are
    /// well defined (two routes to a face with the same vertex set must reach
    /// the same cell, so pairwise intersections are unions of faces).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |cell: Option<CellId>, message: String| out.push(Violation { cell, message });

        let mut points: HashMap<VertexId, usize> = HashMap::new();
        for c in self.cells.values() {
            let id = Some(c.id);
            if c.vertices.len() != c.dim + 1 {
                push(id, format!("dimension {} but {} vertices", c.dim, c.vertices.len()));
                continue;
            }
            if let Some(v) = c.vertices.iter().find(|v| !self.position.contains_key(v)) {
                push(id, format!("dangling vertex reference {v}"));
                continue;
            }
            if !self.strictly_increasing(&c.vertices) {
                push(id, "vertices are not strictly increasing".into());
            }
            if c.dim == 0 {
                *points.entry(c.vertices[0]).or_default() += 1;
                if !c.facets.is_empty() {
                    push(id, "0-cell with facets".into());
                }
                continue;
            }
            if c.facets.len() != c.dim + 1 {
                push(id, format!("{} facets for a {}-cell", c.facets.len(), c.dim));
                continue;
            }
            for (i, f) in c.facets.iter().enumerate() {
                match self.cells.get(f) {
                    None => push(id, format!("facet {i} refers to missing cell {f}")),
                    Some(face) if !is_face_omitting(&c.vertices, i, &face.vertices) => push(
                        id,
                        format!(
                            "facet {i} ({f}) has vertices {:?}, expected {:?}",
                            face.vertices,
                            omit(&c.vertices, i)
                        ),
                    ),
                    Some(_) => {}
                }
            }
        }
        for v in &self.vertices {
            match points.get(&v.id).copied().unwrap_or(0) {
                1 => {}
                n => push(None, format!("vertex {} has {n} 0-cells", v.id)),
            }
        }
        if out.is_empty() {
            for c in self.cells.values().filter(|c| c.dim >= 2) {
                if let Some(msg) = self.face_conflict(c) {
                    out.push(Violation {
                        cell: Some(c.id),
                        message: msg,
                    });
                }
            }
        }
        out
    }

    fn face_conflict(&self, c: &Cell) -> Option<String> {
        let mut by_vertices: HashMap<&[VertexId], CellId> = HashMap::new();
        let mut stack = c.facets.clone();
        while let Some(x) = stack.pop() {
            let cell = &self.cells[&x];
            match by_vertices.get(cell.vertices.as_slice()) {
                Some(&y) if y != x => {
                    return Some(format!(
                        "faces {x} and {y} share vertices {:?}; iterated faces are not well defined",
                        cell.vertices
                    ))
                }
                Some(_) => continue,
                None => {
                    by_vertices.insert(&cell.vertices, x);
                    stack.extend(cell.facets.iter().copied());
                }
            }
        }
        None
    }

    /// Sorted multiset of `(cell vertex labels, facet vertex labels)`. Equal
    /// signatures mean the complexes agree as labelled complexes whenever cells
    /// are determined by their vertex sets; for multi-cells it compares
    /// attachment patterns up to relabelling of parallel cells.
    pub fn labeled_signature(&self) -> Vec<(Vec<String>, Vec<Vec<String>>)> {
        let labels = |vs: &[VertexId]| -> Vec<String> {
            vs.iter()
                .map(|v| self.vertex_label(*v).unwrap_or("?").to_string())
                .sorted()
                .collect()
        };
        self.cells
            .values()
            .map(|c| {
                let facets = c
                    .facets
                    .iter()
                    .map(|f| labels(&self.cells[f].vertices))
                    .sorted()
                    .collect();
                (labels(&c.vertices), facets)
            })
            .sorted()
            .collect()
    }

    /// Builds a complex from raw parts without checking face relations; use
    /// [`QuasiComplex::validate`] afterwards. Fails on duplicate ids or a
    /// cell whose dimension does not match its vertex count.
    pub fn from_parts(vertices: Vec<Vertex>, cells: Vec<Cell>) -> Result<Self> {
        let mut position = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if position.insert(v.id, i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate vertex id {}", v.id.0)));
            }
        }
        let mut map = BTreeMap::new();
        for c in cells {
            if c.vertices.len() != c.dim + 1 {
                return Err(Error::InvalidInput(format!(
                    "cell {} has dimension {} but {} vertices",
                    c.id.0,
                    c.dim,
                    c.vertices.len()
                )));
            }
            let id = c.id;
            if map.insert(id, c).is_some() {
                return Err(Error::InvalidInput(format!("duplicate cell id {}", id.0)));
            }
        }
        let next_vertex = vertices.iter().map(|v| v.id.0 + 1).max().unwrap_or(0);
        let next_cell = map.keys().map(|c| c.0 + 1).max().unwrap_or(0);
        Ok(QuasiComplex {
            vertices,
            position,
            cells: map,
            next_vertex,
            next_cell,
        })
    }
}

/// Equality of vertex lists and cells; id counters are ignored.
impl PartialEq for QuasiComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.cells == other.cells
    }
}

impl Eq for QuasiComplex {}

fn omit(vertices: &[VertexId], i: usize) -> Vec<VertexId> {
    vertices
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, v)| *v)
        .collect()
}

fn is_face_omitting(vertices: &[VertexId], i: usize, face: &[VertexId]) -> bool {
    face.len() + 1 == vertices.len()
        && vertices
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v)
            .eq(face.iter())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub id: usize,
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub facets: Vec<usize>,
    pub component: String,
}

/// JSON form `{"vertices": [{"id", "label"}], "cells": [{"id", "dim",
/// "vertices", "facets", "component"}]}`. Vertices appear in global order,
/// cells in increasing id order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<VertexJson>,
    pub cells: Vec<CellJson>,
}

impl From<&QuasiComplex> for ComplexJson {
    fn from(k: &QuasiComplex) -> Self {
        ComplexJson {
            vertices: k
                .vertices
                .iter()
                .map(|v| VertexJson {
                    id: v.id.0,
                    label: v.label.clone(),
                })
                .collect(),
            cells: k
                .cells
                .values()
                .map(|c| CellJson {
                    id: c.id.0,
                    dim: c.dim,
                    vertices: c.vertices.iter().map(|v| v.0).collect(),
                    facets: c.facets.iter().map(|f| f.0).collect(),
                    component: c.component.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ComplexJson> for QuasiComplex {
    type Error = Error;

    fn try_from(j: ComplexJson) -> Result<Self> {
        let vertices = j
            .vertices
            .into_iter()
            .map(|v| Vertex {
                id: VertexId(v.id),
                label: v.label,
            })
            .collect();
        let cells = j
            .cells
            .into_iter()
            .map(|c| Cell {
                id: CellId(c.id),
                dim: c.dim,
                vertices: c.vertices.into_iter().map(VertexId).collect(),
                facets: c.facets.into_iter().map(CellId).collect(),
                component: c.component,
            })
            .collect();
        QuasiComplex::from_parts(vertices, cells)
    }
}

impl Serialize for QuasiComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuasiComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ComplexJson::deserialize(d)?;
        QuasiComplex::try_from(j).map_err(serde::de::Error::custom)
    }
}
