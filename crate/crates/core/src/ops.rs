//! Core operations on oriented signed graphs: boundaries, edge reversal,
//! vertex switching, vertex roles, and positive-edge contraction.
//!
//! All operations are pure: inputs are borrowed, outputs are fresh values.

use std::collections::BTreeMap;

use crate::graph::{
    ContractionRecord, CoreError, Dir, EdgeId, EdgeValuation, Orientation, SignedGraph, VertexId,
    VertexValuation,
};

/// Classification of a vertex by its incoming edge ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// No edge end directed toward the vertex.
    Source,
    /// Exactly one edge end directed toward the vertex.
    NearSource,
    Other,
}

/// Signed contribution of one edge end: `+value` for an `Away` end,
/// `-value` for a `Toward` end.
fn end_contribution(dir: Dir, value: i64) -> i64 {
    match dir {
        Dir::Away => value,
        Dir::Toward => -value,
    }
}

/// The boundary of `f` under `tau`: at each vertex, outgoing values minus
/// incoming values. Each end of a loop contributes separately, so a positive
/// loop nets zero and a negative loop contributes twice its value.
///
/// `f` is a flow iff the result is identically zero.
pub fn boundary(
    g: &SignedGraph,
    tau: &Orientation,
    f: &EdgeValuation,
) -> Result<VertexValuation, CoreError> {
    tau.matches(g)?;
    f.matches(g)?;
    let mut acc: BTreeMap<VertexId, i64> = g.vertex_ids().iter().map(|&v| (v, 0)).collect();
    for (e, edge) in g.edges() {
        let dirs = tau.dirs(e);
        for end in 0..2 {
            *acc.get_mut(&edge.ends[end]).unwrap() += end_contribution(dirs[end], f.get(e));
        }
    }
    Ok(VertexValuation(acc))
}

/// Reverses edge `e` at both ends, negating its value when a valuation is
/// given; the boundary is unchanged. A positive loop is a fixed point: both
/// the orientation and the valuation are returned as-is.
pub fn reverse_edge(
    g: &SignedGraph,
    tau: &Orientation,
    e: EdgeId,
    f: Option<&EdgeValuation>,
) -> Result<(Orientation, Option<EdgeValuation>), CoreError> {
    tau.matches(g)?;
    let edge = g.require_edge(e)?;
    if let Some(f) = f {
        f.matches(g)?;
    }
    let mut tau2 = tau.clone();
    let mut f2 = f.cloned();
    if !(edge.is_loop() && !edge.sign.is_negative()) {
        tau2.flip_end(e, 0);
        tau2.flip_end(e, 1);
        if let Some(f2) = f2.as_mut() {
            f2.set(e, -f2.get(e));
        }
    }
    Ok((tau2, f2))
}

/// Switches at `v`: every edge end at `v` is reversed and every non-loop
/// edge incident to `v` flips sign. Loops keep their sign. Any flow remains
/// a flow on the switched graph; the boundary at `v` itself is negated.
pub fn switch_vertex(
    g: &SignedGraph,
    tau: &Orientation,
    v: VertexId,
) -> Result<(SignedGraph, Orientation), CoreError> {
    tau.matches(g)?;
    if !g.contains_vertex(v) {
        return Err(CoreError::UnknownVertex(v));
    }
    let mut g2 = g.clone();
    let mut tau2 = tau.clone();
    for (e, end) in g.incidences(v) {
        tau2.flip_end(e, end);
        let edge = g.edge(e).unwrap();
        // A non-loop edge has exactly one end at v, so its sign flips once.
        if !edge.is_loop() {
            g2.set_sign(e, edge.sign.flipped()).unwrap();
        }
    }
    Ok((g2, tau2))
}

/// Role of `v` under `tau`: source (no incoming end), near-source (exactly
/// one), or other. Loop ends count with multiplicity.
pub fn vertex_role(g: &SignedGraph, tau: &Orientation, v: VertexId) -> Result<Role, CoreError> {
    tau.matches(g)?;
    if !g.contains_vertex(v) {
        return Err(CoreError::UnknownVertex(v));
    }
    Ok(match tau.in_degree(g, v) {
        0 => Role::Source,
        1 => Role::NearSource,
        _ => Role::Other,
    })
}

/// Contracts the positive non-loop edge `e`, merging its head into its tail
/// (the end `e` is directed away from). All other edges keep their slots,
/// directions, and values; the merged vertex's boundary is the sum of the
/// originals'.
pub fn contract_positive_edge(
    g: &SignedGraph,
    tau: &Orientation,
    f: &EdgeValuation,
    e: EdgeId,
) -> Result<(SignedGraph, Orientation, EdgeValuation, ContractionRecord), CoreError> {
    tau.matches(g)?;
    f.matches(g)?;
    let edge = g.require_edge(e)?;
    if edge.sign.is_negative() {
        return Err(CoreError::ContractNegative(e));
    }
    if edge.is_loop() {
        return Err(CoreError::ContractLoop(e));
    }
    let dirs = tau.dirs(e);
    if dirs[0] == dirs[1] {
        return Err(CoreError::SignInconsistent(e));
    }
    let (tail, head) = if dirs[0] == Dir::Away {
        (edge.ends[0], edge.ends[1])
    } else {
        (edge.ends[1], edge.ends[0])
    };

    let mut g2 = g.clone();
    let moved_ends: Vec<(EdgeId, usize)> = g
        .incidences(head)
        .into_iter()
        .filter(|&(d, _)| d != e)
        .collect();
    for &(d, end) in &moved_ends {
        g2.set_end(d, end, tail);
    }
    g2.kill_edge(e);
    g2.remove_vertex(head);

    let record = ContractionRecord {
        edge: e,
        tail,
        head,
        moved_ends,
    };
    Ok((g2, tau.clone(), f.clone(), record))
}

/// Undoes a contraction structurally: restores the removed vertex, moves the
/// recorded ends back, and revives the contracted edge with its stored
/// endpoints and sign. Direction marks and values of the revived edge are
/// whatever they were before; callers re-valuing it do so afterwards.
pub fn undo_contraction(
    g: &SignedGraph,
    record: &ContractionRecord,
) -> Result<SignedGraph, CoreError> {
    if g.contains_vertex(record.head) {
        return Err(CoreError::UnknownVertex(record.head));
    }
    if g.edge(record.edge).is_some() {
        return Err(CoreError::UnknownEdge(record.edge));
    }
    let mut g2 = g.clone();
    g2.insert_vertex(record.head);
    for &(d, end) in &record.moved_ends {
        if g2.edge(d).map(|edge| edge.ends[end]) != Some(record.tail) {
            return Err(CoreError::UnknownEdge(d));
        }
        g2.set_end(d, end, record.head);
    }
    g2.revive_edge(record.edge);
    Ok(g2)
}
