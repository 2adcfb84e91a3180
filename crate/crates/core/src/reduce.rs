//! Reduction of flow-admissible signed graphs toward cubic form and lifting
//! of flows back across the recorded steps.
//!
//! Degree-2 vertices are suppressed (two edges merge; the merged edge is
//! negative iff exactly one original was). Vertices of degree at least 4 are
//! split by uncontraction: two edge ends move to a fresh vertex joined back
//! by a new positive edge, which is deleted again whenever the graph stays
//! flow-admissible without it. Every step lands in a [`LiftRecipe`] whose
//! reverse replay carries a flow on the reduced graph back to the original.

use thiserror::Error;

use crate::analysis::is_flow_admissible;
use crate::graph::{
    CoreError, Dir, EdgeId, EdgeValuation, Orientation, Sign, SignedGraph, VertexId,
};
use crate::ops::{boundary, switch_vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not flow-admissible")]
    NotFlowAdmissible,
    #[error("vertex {0} has degree one")]
    DegreeOne(VertexId),
    #[error("degree-2 vertex {0} carries a loop and cannot be suppressed")]
    Degree2Loop(VertexId),
    #[error("vertex {0} is isolated; the graph cannot be made cubic")]
    IsolatedVertex(VertexId),
    #[error("vertex {vertex} has degree {degree}, need at least 4 to uncontract")]
    DegreeTooLow { vertex: VertexId, degree: usize },
    #[error("edge {edge} is not incident to vertex {vertex}")]
    NotIncident { edge: EdgeId, vertex: VertexId },
    #[error("edges {0} and {1} do not give two distinct ends at the vertex")]
    BadEndPair(EdgeId, EdgeId),
    #[error("neither branch of the uncontraction at vertex {0} is flow-admissible")]
    AdmissibilityBranchFailed(VertexId),
    #[error("recipe does not match the graph: {0}")]
    RecipeMismatch(String),
    #[error("lifted valuation failed verification: {0}")]
    LiftVerificationFailed(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// One replayable reduction step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftStep {
    /// Degree-2 vertex removed; its two edges merged into a fresh one whose
    /// end 0 is the far end of `removed[0]` and end 1 the far end of
    /// `removed[1]`.
    Suppress {
        vertex: VertexId,
        removed: [EdgeId; 2],
        merged: EdgeId,
    },
    /// Two ends moved from `vertex` to the fresh `new_vertex`, joined by the
    /// positive `new_edge`; `kept` records the admissibility branch.
    Uncontract {
        vertex: VertexId,
        new_vertex: VertexId,
        moved_ends: Vec<(EdgeId, usize)>,
        new_edge: EdgeId,
        kept: bool,
    },
    /// Switching at a vertex (involutive).
    Switch { vertex: VertexId },
}

/// Ordered log of reduction steps; reverse replay lifts flows back.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LiftRecipe {
    pub steps: Vec<LiftStep>,
}

/// Suppresses one degree-2 vertex, appending the step to `recipe`.
fn suppress_vertex(
    g: &mut SignedGraph,
    v: VertexId,
    recipe: &mut LiftRecipe,
) -> Result<(), ReduceError> {
    let inc = g.incidences(v);
    debug_assert_eq!(inc.len(), 2);
    let (e0, end0) = inc[0];
    let (e1, end1) = inc[1];
    if e0 == e1 {
        return Err(ReduceError::Degree2Loop(v));
    }
    let a = g.edge(e0).unwrap().other_end(end0);
    let b = g.edge(e1).unwrap().other_end(end1);
    let sign = g.edge(e0).unwrap().sign.product(g.edge(e1).unwrap().sign);
    g.kill_edge(e0);
    g.kill_edge(e1);
    let merged = g.add_edge(a, b, sign)?;
    g.remove_vertex(v);
    recipe.steps.push(LiftStep::Suppress {
        vertex: v,
        removed: [e0, e1],
        merged,
    });
    Ok(())
}

/// Suppresses every degree-2 vertex, smallest id first. k-flow existence is
/// unchanged in both directions.
pub fn suppress_degree_two(g: &SignedGraph) -> Result<(SignedGraph, LiftRecipe), ReduceError> {
    let mut g = g.clone();
    let mut recipe = LiftRecipe::default();
    loop {
        let target = g.vertex_ids().iter().copied().find(|&v| g.degree(v) == 2);
        let Some(v) = target else {
            return Ok((g, recipe));
        };
        suppress_vertex(&mut g, v, &mut recipe)?;
    }
}

/// Uncontraction details used by [`reduce_to_cubic`].
struct Uncontracted {
    g: SignedGraph,
    new_vertex: VertexId,
    new_edge: EdgeId,
    moved_ends: Vec<(EdgeId, usize)>,
}

fn uncontract_ends(
    g: &SignedGraph,
    v: VertexId,
    ends: [(EdgeId, usize); 2],
) -> Result<Uncontracted, ReduceError> {
    let degree = g.degree(v);
    if degree < 4 {
        return Err(ReduceError::DegreeTooLow { vertex: v, degree });
    }
    for &(e, end) in &ends {
        let edge = g.edge(e).ok_or(CoreError::UnknownEdge(e))?;
        if edge.ends[end] != v {
            return Err(ReduceError::NotIncident { edge: e, vertex: v });
        }
    }
    if ends[0] == ends[1] {
        return Err(ReduceError::BadEndPair(ends[0].0, ends[1].0));
    }
    let mut g2 = g.clone();
    let new_vertex = g2.add_vertex();
    for &(e, end) in &ends {
        g2.set_end(e, end, new_vertex);
    }
    let new_edge = g2.add_edge(v, new_vertex, Sign::Positive)?;
    Ok(Uncontracted {
        g: g2,
        new_vertex,
        new_edge,
        moved_ends: ends.to_vec(),
    })
}

/// Splits `v` (degree >= 4): the ends of `e1` and `e2` at `v` move to a new
/// vertex, joined to `v` by a new positive edge. Passing the same loop twice
/// moves both of its ends; a loop passed once moves its end 0.
pub fn uncontract_vertex(
    g: &SignedGraph,
    v: VertexId,
    e1: EdgeId,
    e2: EdgeId,
) -> Result<SignedGraph, ReduceError> {
    let end_at =
        |e: EdgeId, skip: Option<(EdgeId, usize)>| -> Result<(EdgeId, usize), ReduceError> {
            let edge = g.edge(e).ok_or(CoreError::UnknownEdge(e))?;
            for end in 0..2 {
                if edge.ends[end] == v && skip != Some((e, end)) {
                    return Ok((e, end));
                }
            }
            Err(ReduceError::NotIncident { edge: e, vertex: v })
        };
    let first = end_at(e1, None)?;
    let second = end_at(e2, Some(first))?;
    Ok(uncontract_ends(g, v, [first, second])?.g)
}

/// Reduces a connected, flow-admissible graph to a cubic one.
///
/// Degree-2 vertices are suppressed; each vertex of degree at least 4 is
/// uncontracted at its two lowest edge ends, and the new positive edge is
/// deleted again whenever the graph minus that edge is still
/// flow-admissible. The recipe records every step.
pub fn reduce_to_cubic(g: &SignedGraph) -> Result<(SignedGraph, LiftRecipe), ReduceError> {
    if !g.is_connected() {
        return Err(ReduceError::NotConnected);
    }
    if let Some(&v) = g.vertex_ids().iter().find(|&&v| g.degree(v) == 1) {
        return Err(ReduceError::DegreeOne(v));
    }
    if !is_flow_admissible(g) {
        return Err(ReduceError::NotFlowAdmissible);
    }
    let mut g = g.clone();
    let mut recipe = LiftRecipe::default();
    loop {
        while let Some(v) = g.vertex_ids().iter().copied().find(|&v| g.degree(v) == 2) {
            suppress_vertex(&mut g, v, &mut recipe)?;
        }
        if let Some(&v) = g.vertex_ids().iter().find(|&&v| g.degree(v) == 0) {
            return Err(ReduceError::IsolatedVertex(v));
        }
        let Some(v) = g.vertex_ids().iter().copied().find(|&v| g.degree(v) >= 4) else {
            debug_assert!(g.is_cubic());
            return Ok((g, recipe));
        };
        let inc = g.incidences(v);
        let ends = [inc[0], inc[1]];
        let un = uncontract_ends(&g, v, ends)?;
        let mut g2 = un.g;
        let without: SignedGraph = {
            let mut t = g2.clone();
            t.kill_edge(un.new_edge);
            t
        };
        let kept = if is_flow_admissible(&without) {
            g2 = without;
            false
        } else if is_flow_admissible(&g2) {
            true
        } else {
            return Err(ReduceError::AdmissibilityBranchFailed(v));
        };
        recipe.steps.push(LiftStep::Uncontract {
            vertex: v,
            new_vertex: un.new_vertex,
            moved_ends: un.moved_ends,
            new_edge: un.new_edge,
            kept,
        });
        g = g2;
    }
}

/// Replays the recipe forward from `original`, returning the reduced graph.
/// Validates that recorded ids match what the replay produces.
fn replay_forward(original: &SignedGraph, recipe: &LiftRecipe) -> Result<SignedGraph, ReduceError> {
    let mut g = original.clone();
    for step in &recipe.steps {
        match step {
            LiftStep::Suppress {
                vertex,
                removed,
                merged,
            } => {
                let mut sub = LiftRecipe::default();
                if g.degree(*vertex) != 2 {
                    return Err(ReduceError::RecipeMismatch(format!(
                        "vertex {vertex} does not have degree 2"
                    )));
                }
                suppress_vertex(&mut g, *vertex, &mut sub)?;
                let ok = matches!(&sub.steps[0], LiftStep::Suppress { vertex: v2, removed: r2, merged: m2 }
                    if v2 == vertex && r2 == removed && m2 == merged);
                if !ok {
                    return Err(ReduceError::RecipeMismatch(format!(
                        "suppression at {vertex} replayed differently"
                    )));
                }
            }
            LiftStep::Uncontract {
                vertex,
                new_vertex,
                moved_ends,
                new_edge,
                kept,
            } => {
                if moved_ends.len() != 2 {
                    return Err(ReduceError::RecipeMismatch(
                        "uncontraction must move exactly two ends".into(),
                    ));
                }
                let un = uncontract_ends(&g, *vertex, [moved_ends[0], moved_ends[1]])?;
                if un.new_vertex != *new_vertex || un.new_edge != *new_edge {
                    return Err(ReduceError::RecipeMismatch(format!(
                        "uncontraction at {vertex} produced ids {}/{} instead of {new_vertex}/{new_edge}",
                        un.new_vertex, un.new_edge
                    )));
                }
                g = un.g;
                if !kept {
                    g.kill_edge(*new_edge);
                }
            }
            LiftStep::Switch { vertex } => {
                let tau = Orientation::canonical(&g);
                let (g2, _) = switch_vertex(&g, &tau, *vertex)?;
                g = g2;
            }
        }
    }
    Ok(g)
}

/// Lifts a nowhere-zero flow on the reduced graph back to `original` by
/// replaying the recipe in reverse. Suppressed edges are restored with the
/// merged edge's value; uncontracted vertices are merged back, dropping the
/// helper edge's value. The lifted flow is re-verified before it is
/// returned.
pub fn lift_flow(
    recipe: &LiftRecipe,
    original: &SignedGraph,
    tau: &Orientation,
    f: &EdgeValuation,
) -> Result<(Orientation, EdgeValuation), ReduceError> {
    let reduced = replay_forward(original, recipe)?;
    tau.matches(&reduced)
        .map_err(|e| ReduceError::RecipeMismatch(e.to_string()))?;
    f.matches(&reduced)
        .map_err(|e| ReduceError::RecipeMismatch(e.to_string()))?;
    if !tau.is_sign_consistent(&reduced) {
        return Err(ReduceError::RecipeMismatch(
            "orientation is not sign-consistent with the reduced graph".into(),
        ));
    }

    let mut g = reduced;
    let mut tau = tau.clone();
    let mut f = f.clone();
    for step in recipe.steps.iter().rev() {
        match step {
            LiftStep::Suppress {
                vertex,
                removed,
                merged,
            } => {
                let m_edge = g
                    .edge(*merged)
                    .ok_or_else(|| ReduceError::RecipeMismatch(format!("edge {merged} missing")))?;
                let m_dirs = tau.dirs(*merged);
                let value = f.get(*merged);
                g.kill_edge(*merged);
                g.insert_vertex(*vertex);
                // Each restored edge copies the merged edge's mark at its far
                // end; the mark at the suppressed vertex follows from the
                // sign, which makes the two contributions there cancel.
                for (i, &e) in removed.iter().enumerate() {
                    let edge = g.edge_record(e).unwrap();
                    let far = if edge.ends[0] == *vertex { 1 } else { 0 };
                    debug_assert_eq!(edge.other_end(far), *vertex);
                    debug_assert_eq!(edge.ends[far], m_edge.ends[i]);
                    let far_dir = m_dirs[i];
                    let near_dir = match edge.sign {
                        Sign::Positive => far_dir.flipped(),
                        Sign::Negative => far_dir,
                    };
                    let mut dirs = [Dir::Away; 2];
                    dirs[far] = far_dir;
                    dirs[1 - far] = near_dir;
                    g.revive_edge(e);
                    tau.set_dirs(e, dirs);
                    f.set(e, value);
                }
            }
            LiftStep::Uncontract {
                vertex,
                new_vertex,
                moved_ends,
                new_edge,
                kept,
            } => {
                if *kept {
                    g.kill_edge(*new_edge);
                    f.set(*new_edge, 0);
                }
                for &(e, end) in moved_ends {
                    if g.edge(e).map(|edge| edge.ends[end]) != Some(*new_vertex) {
                        return Err(ReduceError::RecipeMismatch(format!(
                            "end {end} of edge {e} is not at vertex {new_vertex}"
                        )));
                    }
                    g.set_end(e, end, *vertex);
                }
                g.remove_vertex(*new_vertex);
            }
            LiftStep::Switch { vertex } => {
                let (g2, tau2) = switch_vertex(&g, &tau, *vertex)?;
                g = g2;
                tau = tau2;
            }
        }
    }

    g.truncate_slots(original.slot_count());
    tau.truncate_slots(original.slot_count());
    f.truncate_slots(original.slot_count());
    if g != *original {
        return Err(ReduceError::RecipeMismatch(
            "reverse replay did not restore the original graph".into(),
        ));
    }
    if !tau.is_sign_consistent(&g) {
        return Err(ReduceError::LiftVerificationFailed(
            "orientation not sign-consistent".into(),
        ));
    }
    let b = boundary(&g, &tau, &f)?;
    if !b.is_zero() {
        return Err(ReduceError::LiftVerificationFailed(
            "boundary is not zero".into(),
        ));
    }
    if let Some(e) = g.edge_ids().find(|&e| f.get(e) == 0) {
        return Err(ReduceError::LiftVerificationFailed(format!(
            "value zero at edge {e}"
        )));
    }
    Ok((tau, f))
}
