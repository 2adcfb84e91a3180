//! Signed multigraphs with stable edge slots, bidirected orientations, and
//! edge/vertex valuations.
//!
//! Edges are addressed by stable indices. Removing an edge (contraction,
//! suppression) marks its slot dead instead of shifting later indices, so
//! orientations and valuations stay aligned across whole reduction cascades
//! and can be replayed exactly. Endpoint order is part of edge identity:
//! `ends[0]` and `ends[1]` carry independent direction marks, which keeps
//! loops and parallel edges unambiguous.

use std::collections::BTreeMap;

use thiserror::Error;

/// Vertex identifier. Ids are stable but need not be contiguous.
pub type VertexId = usize;
/// Edge identifier: the edge's slot index.
pub type EdgeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown or removed edge {0}")]
    UnknownEdge(EdgeId),
    #[error("shape mismatch: expected {expected} edge slots, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("orientation is not sign-consistent at edge {0}")]
    SignInconsistent(EdgeId),
    #[error("edge {0} is negative; only positive edges can be contracted")]
    ContractNegative(EdgeId),
    #[error("edge {0} is a loop; loops cannot be contracted")]
    ContractLoop(EdgeId),
}

/// Edge sign. The signature of a signed graph is its set of negative edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    /// Sign of a two-edge path: negative iff exactly one factor is negative.
    pub fn product(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

/// Direction mark of one edge end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Away,
    Toward,
}

impl Dir {
    pub fn flipped(self) -> Dir {
        match self {
            Dir::Away => Dir::Toward,
            Dir::Toward => Dir::Away,
        }
    }
}

/// An edge record: two endpoints (order significant) and a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub ends: [VertexId; 2],
    pub sign: Sign,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The end opposite to slot `end_idx`.
    pub fn other_end(&self, end_idx: usize) -> VertexId {
        self.ends[1 - end_idx]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Slot {
    edge: Edge,
    live: bool,
}

/// A signed multigraph. Loops and parallel edges are allowed.
///
/// Dead edge slots keep their endpoint and sign data so that removal steps
/// can be undone exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    vertices: Vec<VertexId>,
    slots: Vec<Slot>,
}

impl SignedGraph {
    /// Graph on vertices `0..n` with no edges.
    pub fn new(n: usize) -> Self {
        SignedGraph {
            vertices: (0..n).collect(),
            slots: Vec::new(),
        }
    }

    /// Graph on vertices `0..n` with the given edge list, in order.
    ///
    /// Panics if an endpoint is out of range; intended for fixtures and
    /// generators that control their inputs.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId, Sign)]) -> Self {
        let mut g = SignedGraph::new(n);
        for &(u, v, sign) in edges {
            g.add_edge(u, v, sign).expect("endpoint out of range");
        }
        g
    }

    /// Adds a fresh vertex with id `max + 1` (or 0 for the empty graph).
    pub fn add_vertex(&mut self) -> VertexId {
        let id = self.vertices.last().map_or(0, |&m| m + 1);
        self.vertices.push(id);
        id
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, sign: Sign) -> Result<EdgeId, CoreError> {
        if !self.contains_vertex(u) {
            return Err(CoreError::UnknownVertex(u));
        }
        if !self.contains_vertex(v) {
            return Err(CoreError::UnknownVertex(v));
        }
        let id = self.slots.len();
        self.slots.push(Slot {
            edge: Edge { ends: [u, v], sign },
            live: true,
        });
        Ok(id)
    }

    pub fn set_sign(&mut self, e: EdgeId, sign: Sign) -> Result<(), CoreError> {
        match self.slots.get_mut(e) {
            Some(slot) if slot.live => {
                slot.edge.sign = sign;
                Ok(())
            }
            _ => Err(CoreError::UnknownEdge(e)),
        }
    }

    /// Live vertex ids in ascending order.
    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of live edges.
    pub fn edge_count(&self) -> usize {
        self.slots.iter().filter(|s| s.live).count()
    }

    /// Total number of edge slots, live or dead. Slot-parallel companions
    /// (orientations, valuations) are sized to this.
    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    /// The edge in slot `e`, if live.
    pub fn edge(&self, e: EdgeId) -> Option<Edge> {
        self.slots.get(e).filter(|s| s.live).map(|s| s.edge)
    }

    /// The edge stored in slot `e` even if dead. Used when undoing removals.
    pub fn edge_record(&self, e: EdgeId) -> Option<Edge> {
        self.slots.get(e).map(|s| s.edge)
    }

    pub fn require_edge(&self, e: EdgeId) -> Result<Edge, CoreError> {
        self.edge(e).ok_or(CoreError::UnknownEdge(e))
    }

    /// Live edges in slot order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Edge)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.live)
            .map(|(i, s)| (i, s.edge))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().map(|(i, _)| i)
    }

    /// All edge ends at `v` as `(edge, end index)` pairs, sorted. A loop at
    /// `v` contributes both its ends.
    pub fn incidences(&self, v: VertexId) -> Vec<(EdgeId, usize)> {
        let mut out = Vec::new();
        for (e, edge) in self.edges() {
            for end in 0..2 {
                if edge.ends[end] == v {
                    out.push((e, end));
                }
            }
        }
        out
    }

    /// Degree of `v`; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges()
            .map(|(_, edge)| edge.ends.iter().filter(|&&x| x == v).count())
            .sum()
    }

    pub fn min_degree(&self) -> usize {
        self.vertices
            .iter()
            .map(|&v| self.degree(v))
            .min()
            .unwrap_or(0)
    }

    pub fn is_cubic(&self) -> bool {
        self.vertices.iter().all(|&v| self.degree(v) == 3)
    }

    pub fn has_loops(&self) -> bool {
        self.edges().any(|(_, edge)| edge.is_loop())
    }

    /// Negative edge ids in ascending order.
    pub fn signature(&self) -> Vec<EdgeId> {
        self.edges()
            .filter(|(_, edge)| edge.sign.is_negative())
            .map(|(e, _)| e)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut it = self.vertices.iter();
        let Some(&start) = it.next() else {
            return true;
        };
        let mut seen: BTreeMap<VertexId, bool> =
            self.vertices.iter().map(|&v| (v, false)).collect();
        let mut stack = vec![start];
        seen.insert(start, true);
        while let Some(v) = stack.pop() {
            for (e, _) in self.incidences(v) {
                let edge = self.edge(e).unwrap();
                for &w in &edge.ends {
                    if !seen[&w] {
                        seen.insert(w, true);
                        stack.push(w);
                    }
                }
            }
        }
        seen.values().all(|&b| b)
    }

    pub(crate) fn kill_edge(&mut self, e: EdgeId) {
        self.slots[e].live = false;
    }

    pub(crate) fn revive_edge(&mut self, e: EdgeId) {
        self.slots[e].live = true;
    }

    pub(crate) fn set_end(&mut self, e: EdgeId, end_idx: usize, v: VertexId) {
        self.slots[e].edge.ends[end_idx] = v;
    }

    /// Removes `v` from the vertex set. Caller ensures no live incidences.
    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        if let Ok(pos) = self.vertices.binary_search(&v) {
            self.vertices.remove(pos);
        }
    }

    /// Re-inserts a previously removed vertex id, keeping order.
    pub(crate) fn insert_vertex(&mut self, v: VertexId) {
        if let Err(pos) = self.vertices.binary_search(&v) {
            self.vertices.insert(pos, v);
        }
    }

    /// Drops trailing edge slots so that `slot_count == len`. Used when a
    /// replay has returned appended slots to dead state.
    pub(crate) fn truncate_slots(&mut self, len: usize) {
        self.slots.truncate(len);
    }
}

/// Direction marks for every edge slot: `dirs[e][i]` is the mark at
/// `edge.ends[i]`. Sign consistency requires a positive edge to have one
/// `Away` and one `Toward` end, and a negative edge two equal ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    dirs: Vec<[Dir; 2]>,
}

impl Orientation {
    /// The reference orientation: positive edges `Away`/`Toward` from end 0
    /// to end 1, negative edges `Away` at both ends.
    pub fn canonical(g: &SignedGraph) -> Orientation {
        let mut dirs = vec![[Dir::Away, Dir::Toward]; g.slot_count()];
        for (e, edge) in g.edges() {
            if edge.sign.is_negative() {
                dirs[e] = [Dir::Away, Dir::Away];
            }
        }
        Orientation { dirs }
    }

    pub fn from_dirs(dirs: Vec<[Dir; 2]>) -> Orientation {
        Orientation { dirs }
    }

    pub fn slot_count(&self) -> usize {
        self.dirs.len()
    }

    pub fn dirs(&self, e: EdgeId) -> [Dir; 2] {
        self.dirs[e]
    }

    pub(crate) fn set_dirs(&mut self, e: EdgeId, d: [Dir; 2]) {
        self.dirs[e] = d;
    }

    pub(crate) fn flip_end(&mut self, e: EdgeId, end_idx: usize) {
        self.dirs[e][end_idx] = self.dirs[e][end_idx].flipped();
    }

    pub(crate) fn truncate_slots(&mut self, len: usize) {
        self.dirs.truncate(len);
    }

    pub fn matches(&self, g: &SignedGraph) -> Result<(), CoreError> {
        if self.dirs.len() != g.slot_count() {
            return Err(CoreError::ShapeMismatch {
                expected: g.slot_count(),
                found: self.dirs.len(),
            });
        }
        Ok(())
    }

    pub fn is_sign_consistent(&self, g: &SignedGraph) -> bool {
        self.matches(g).is_ok()
            && g.edges().all(|(e, edge)| {
                let [d0, d1] = self.dirs[e];
                match edge.sign {
                    Sign::Positive => d0 != d1,
                    Sign::Negative => d0 == d1,
                }
            })
    }

    /// |δ⁻(v)|: the number of edge ends at `v` marked `Toward`. A negative
    /// loop oriented toward its vertex counts twice.
    pub fn in_degree(&self, g: &SignedGraph, v: VertexId) -> usize {
        g.incidences(v)
            .into_iter()
            .filter(|&(e, end)| self.dirs[e][end] == Dir::Toward)
            .count()
    }

    /// |δ⁺(v)|: the number of edge ends at `v` marked `Away`.
    pub fn out_degree(&self, g: &SignedGraph, v: VertexId) -> usize {
        g.incidences(v)
            .into_iter()
            .filter(|&(e, end)| self.dirs[e][end] == Dir::Away)
            .count()
    }
}

/// Integer value per edge slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeValuation {
    values: Vec<i64>,
}

impl EdgeValuation {
    pub fn zeros(slot_count: usize) -> EdgeValuation {
        EdgeValuation {
            values: vec![0; slot_count],
        }
    }

    pub fn from_values(values: Vec<i64>) -> EdgeValuation {
        EdgeValuation { values }
    }

    pub fn slot_count(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, e: EdgeId) -> i64 {
        self.values[e]
    }

    pub fn set(&mut self, e: EdgeId, value: i64) {
        self.values[e] = value;
    }

    pub(crate) fn truncate_slots(&mut self, len: usize) {
        self.values.truncate(len);
    }

    pub fn matches(&self, g: &SignedGraph) -> Result<(), CoreError> {
        if self.values.len() != g.slot_count() {
            return Err(CoreError::ShapeMismatch {
                expected: g.slot_count(),
                found: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Integer value per vertex; the home of boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexValuation(pub BTreeMap<VertexId, i64>);

impl VertexValuation {
    pub fn get(&self, v: VertexId) -> i64 {
        *self.0.get(&v).expect("vertex not present in valuation")
    }

    pub fn is_zero(&self) -> bool {
        self.0.values().all(|&x| x == 0)
    }

    pub fn sum(&self) -> i64 {
        self.0.values().sum()
    }
}

/// Replayable log of one positive-edge contraction: which edge was removed,
/// which endpoint absorbed the other, and which edge ends were redirected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionRecord {
    pub edge: EdgeId,
    /// Endpoint that survives; the merged vertex keeps this id.
    pub tail: VertexId,
    /// Endpoint removed by the contraction.
    pub head: VertexId,
    /// Edge ends moved from `head` to `tail`, excluding the contracted edge.
    pub moved_ends: Vec<(EdgeId, usize)>,
}
