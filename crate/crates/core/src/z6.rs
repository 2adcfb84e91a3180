//! Group-valued flows and normalization: exhaustive search for a nowhere-zero
//! Z₂×Z₃-flow whose Z₂ part covers an even number of negative edges, the
//! Z₂×Z₃ → Z₆ isomorphism, and the reversal/switching normalization that
//! brings a Z₆-style valuation into source/near-source form with an even
//! source count.

use thiserror::Error;

use crate::graph::{Dir, EdgeId, EdgeValuation, Orientation, SignedGraph, VertexId};
use crate::ops::{boundary, switch_vertex, vertex_role, Role};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Z6Error {
    #[error("Z2 cycle space dimension {dim} exceeds the search guard {limit}")]
    CycleSpaceGuardExceeded { dim: usize, limit: usize },
    #[error("graph has {edges} edges; the bitmask search is limited to {limit}")]
    EdgeMaskGuardExceeded { edges: usize, limit: usize },
    #[error("graph is not cubic")]
    NotCubic,
    #[error("graph has a loop")]
    HasLoop,
    #[error("valuation is zero at edge {0}")]
    ZeroValue(EdgeId),
    #[error("boundary at vertex {vertex} is {value}, not divisible by 6")]
    BoundaryNotZeroMod6 { vertex: VertexId, value: i64 },
    #[error("odd number of negative edges with odd value")]
    OddNegativeParity,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("source-count parity check failed: w = {w}")]
    ParityCheckFailed { w: usize },
    #[error(transparent)]
    Core(#[from] crate::graph::CoreError),
}

/// Guard on the Z₂ cycle-space dimension enumerated by [`find_z2z3_flow`].
pub const CYCLE_SPACE_GUARD: usize = 24;

/// Per-edge pair (a, b) with a in Z₂ and b in Z₃; nowhere-zero means
/// (a, b) != (0, 0) on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z2Z3Valuation {
    pairs: Vec<(u8, u8)>,
}

impl Z2Z3Valuation {
    pub fn get(&self, e: EdgeId) -> (u8, u8) {
        self.pairs[e]
    }

    pub fn slot_count(&self) -> usize {
        self.pairs.len()
    }
}

/// Per-edge value in 0..6 interpreted modulo 6 under an orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Z6Valuation {
    values: Vec<u8>,
}

impl Z6Valuation {
    pub fn from_values(values: Vec<u8>) -> Self {
        Z6Valuation { values }
    }

    pub fn get(&self, e: EdgeId) -> u8 {
        self.values[e]
    }

    pub fn slot_count(&self) -> usize {
        self.values.len()
    }
}

/// The isomorphism Z₂×Z₃ → Z₆, as a fixed table.
pub fn z2z3_to_z6(a: u8, b: u8) -> u8 {
    assert!(a < 2 && b < 3, "arguments must lie in Z2 x Z3");
    match (a, b) {
        (0, 0) => 0,
        (1, 1) => 1,
        (0, 2) => 2,
        (1, 0) => 3,
        (0, 1) => 4,
        (1, 2) => 5,
        _ => unreachable!(),
    }
}

/// Applies the isomorphism edgewise.
pub fn compose_z6(v: &Z2Z3Valuation) -> Z6Valuation {
    Z6Valuation {
        values: v.pairs.iter().map(|&(a, b)| z2z3_to_z6(a, b)).collect(),
    }
}

/// Searches for a nowhere-zero Z₂×Z₃-flow whose Z₂ support contains an even
/// number of negative edges, under the canonical orientation. Exhaustive:
/// `None` certifies that no such flow exists.
///
/// The Z₂ part ranges over the cycle space of the underlying graph (signs
/// and orientations are invisible modulo 2); candidates are enumerated in
/// ascending index order and filtered by the parity condition, then a Z₃
/// completion is sought by backtracking, nonzero exactly off the Z₂ support.
pub fn find_z2z3_flow(g: &SignedGraph) -> Result<Option<(Orientation, Z2Z3Valuation)>, Z6Error> {
    let live: Vec<EdgeId> = g.edge_ids().collect();
    if live.len() > 64 {
        return Err(Z6Error::EdgeMaskGuardExceeded {
            edges: live.len(),
            limit: 64,
        });
    }
    let tau = Orientation::canonical(g);

    // Spanning forest over non-loop edges; every non-tree edge (loops
    // included) contributes one cycle-space basis vector.
    let mut parent: std::collections::BTreeMap<VertexId, Option<(VertexId, EdgeId)>> =
        std::collections::BTreeMap::new();
    let mut tree = vec![false; g.slot_count()];
    for &root in g.vertex_ids() {
        if parent.contains_key(&root) {
            continue;
        }
        parent.insert(root, None);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for (e, end) in g.incidences(x) {
                let edge = g.edge(e).unwrap();
                if edge.is_loop() {
                    continue;
                }
                let y = edge.other_end(end);
                if !parent.contains_key(&y) {
                    parent.insert(y, Some((x, e)));
                    tree[e] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    // Bitmask of the tree path from v up to the root.
    let path_mask = |mut v: VertexId| -> u64 {
        let mut mask = 0u64;
        while let Some((p, e)) = parent[&v] {
            mask ^= 1u64 << e;
            v = p;
        }
        mask
    };

    let free: Vec<EdgeId> = live.iter().copied().filter(|&e| !tree[e]).collect();
    if free.len() > CYCLE_SPACE_GUARD {
        return Err(Z6Error::CycleSpaceGuardExceeded {
            dim: free.len(),
            limit: CYCLE_SPACE_GUARD,
        });
    }
    let basis: Vec<u64> = free
        .iter()
        .map(|&e| {
            let edge = g.edge(e).unwrap();
            if edge.is_loop() {
                1u64 << e
            } else {
                (1u64 << e) ^ path_mask(edge.ends[0]) ^ path_mask(edge.ends[1])
            }
        })
        .collect();
    let sigma_mask: u64 = g.signature().iter().map(|&e| 1u64 << e).sum();

    for idx in 0u64..(1u64 << free.len()) {
        let mut supp2 = 0u64;
        for (j, &b) in basis.iter().enumerate() {
            if idx >> j & 1 == 1 {
                supp2 ^= b;
            }
        }
        if (supp2 & sigma_mask).count_ones() % 2 != 0 {
            continue;
        }
        if let Some(phi3) = complete_z3(g, &tau, &live, supp2) {
            let mut pairs = vec![(0u8, 0u8); g.slot_count()];
            for (i, &e) in live.iter().enumerate() {
                pairs[e] = ((supp2 >> e & 1) as u8, phi3[i]);
            }
            return Ok(Some((tau, Z2Z3Valuation { pairs })));
        }
    }
    Ok(None)
}

/// Backtracking Z₃ completion: zero boundary mod 3 under `tau`, nonzero
/// exactly off `supp2`. Returns values aligned with `live`.
fn complete_z3(g: &SignedGraph, tau: &Orientation, live: &[EdgeId], supp2: u64) -> Option<Vec<u8>> {
    let verts = g.vertex_ids();
    let vidx = |v: VertexId| verts.binary_search(&v).unwrap();

    // Per edge: (vertex, coefficient mod 3). Positive loops vanish.
    let mut coeffs: Vec<Vec<(usize, u8)>> = Vec::with_capacity(live.len());
    for &e in live {
        let edge = g.edge(e).unwrap();
        let dirs = tau.dirs(e);
        let mut per: std::collections::BTreeMap<usize, i32> = std::collections::BTreeMap::new();
        for end in 0..2 {
            let c = if dirs[end] == Dir::Away { 1 } else { -1 };
            *per.entry(vidx(edge.ends[end])).or_insert(0) += c;
        }
        per.retain(|_, c| *c % 3 != 0);
        coeffs.push(
            per.into_iter()
                .map(|(v, c)| (v, (c.rem_euclid(3)) as u8))
                .collect(),
        );
    }

    let mut sums = vec![0u8; verts.len()];
    let mut remaining = vec![0usize; verts.len()];
    for per in &coeffs {
        for &(v, _) in per {
            remaining[v] += 1;
        }
    }
    let mut values = vec![0u8; live.len()];
    backtrack_z3(
        live,
        &coeffs,
        supp2,
        0,
        &mut sums,
        &mut remaining,
        &mut values,
    )
    .then_some(values)
}

fn backtrack_z3(
    live: &[EdgeId],
    coeffs: &[Vec<(usize, u8)>],
    supp2: u64,
    depth: usize,
    sums: &mut [u8],
    remaining: &mut [usize],
    values: &mut [u8],
) -> bool {
    if depth == live.len() {
        return sums.iter().all(|&s| s == 0);
    }
    let in_supp = supp2 >> live[depth] & 1 == 1;
    let domain: &[u8] = if in_supp { &[0, 1, 2] } else { &[1, 2] };

    // Forced value when this is the last open edge at some endpoint: solve
    // c*x = -sum (mod 3); c in {1, 2} is invertible with inverse c.
    let forced = coeffs[depth]
        .iter()
        .find(|&&(v, _)| remaining[v] == 1)
        .map(|&(v, c)| (c * ((3 - sums[v]) % 3)) % 3);

    for &x in domain {
        if forced.is_some_and(|fx| fx != x) {
            continue;
        }
        let mut ok = true;
        for &(v, c) in &coeffs[depth] {
            sums[v] = (sums[v] + c * x) % 3;
            remaining[v] -= 1;
            if remaining[v] == 0 && sums[v] != 0 {
                ok = false;
            }
        }
        if ok && backtrack_z3(live, coeffs, supp2, depth + 1, sums, remaining, values) {
            values[depth] = x;
            return true;
        }
        for &(v, c) in &coeffs[depth] {
            sums[v] = (sums[v] + 3 - (c * x) % 3) % 3;
            remaining[v] += 1;
        }
    }
    false
}

/// Result of [`normalize_cubic`]: an orientation and integer valuation in
/// {1,2,3} in which every vertex is a source with boundary 6 or a
/// near-source with boundary 0, together with the switched vertex set and
/// the (even) source count.
#[derive(Debug, Clone)]
pub struct NormalizedValuation {
    pub orientation: Orientation,
    pub values: EdgeValuation,
    pub switches: Vec<VertexId>,
    pub source_count: usize,
}

/// Normalizes a nowhere-zero Z₆-style valuation on a cubic, loopless graph:
/// edges valued 4 or 5 are reversed with the value replaced by its
/// complement, then every vertex with at least two incoming ends is
/// switched. The returned graph carries the switched signature.
pub fn normalize_cubic(
    g: &SignedGraph,
    tau: &Orientation,
    phi6: &Z6Valuation,
) -> Result<(SignedGraph, NormalizedValuation), Z6Error> {
    tau.matches(g)?;
    if phi6.slot_count() != g.slot_count() {
        return Err(Z6Error::Precondition("valuation shape mismatch".into()));
    }
    if !g.is_cubic() {
        return Err(Z6Error::NotCubic);
    }
    if g.has_loops() {
        return Err(Z6Error::HasLoop);
    }
    if !tau.is_sign_consistent(g) {
        return Err(Z6Error::Precondition(
            "orientation not sign-consistent".into(),
        ));
    }
    for e in g.edge_ids() {
        if phi6.get(e) == 0 {
            return Err(Z6Error::ZeroValue(e));
        }
    }
    let as_valuation =
        EdgeValuation::from_values((0..g.slot_count()).map(|e| phi6.get(e) as i64).collect());
    let b = boundary(g, tau, &as_valuation)?;
    for (&v, &x) in &b.0 {
        if x.rem_euclid(6) != 0 {
            return Err(Z6Error::BoundaryNotZeroMod6 {
                vertex: v,
                value: x,
            });
        }
    }
    let odd_negatives = g
        .edges()
        .filter(|&(e, edge)| edge.sign.is_negative() && phi6.get(e) % 2 == 1)
        .count();
    if odd_negatives % 2 != 0 {
        return Err(Z6Error::OddNegativeParity);
    }

    // Reversal step: values 4 and 5 become 2 and 1 on the reversed edge.
    let mut tau2 = tau.clone();
    let mut values = as_valuation;
    for e in g.edge_ids().collect::<Vec<_>>() {
        let old = values.get(e);
        if old >= 4 {
            let (t, _) = crate::ops::reverse_edge(g, &tau2, e, None)?;
            tau2 = t;
            values.set(e, 6 - old);
        }
    }
    debug_assert!(g.edge_ids().all(|e| (1..=3).contains(&values.get(e))));

    // Switching step: every vertex with two or more incoming ends. Switching
    // only touches the marks at the switched vertex, so one pass suffices.
    let mut g2 = g.clone();
    let switches: Vec<VertexId> = g
        .vertex_ids()
        .iter()
        .copied()
        .filter(|&v| tau2.in_degree(&g2, v) >= 2)
        .collect();
    for &v in &switches {
        let (ng, nt) = switch_vertex(&g2, &tau2, v)?;
        g2 = ng;
        tau2 = nt;
    }

    let parity = source_parity(&g2, &tau2, &values)?;
    if !parity.check {
        return Err(Z6Error::ParityCheckFailed {
            w: parity.source_count,
        });
    }
    Ok((
        g2,
        NormalizedValuation {
            orientation: tau2,
            values,
            switches,
            source_count: parity.source_count,
        },
    ))
}

/// Output of [`source_parity`]: the source count w, the signed counts x_i of
/// negative edges with value i (away-from-both-ends minus toward-both-ends),
/// and whether the parity law `6w = 2(x1+x3) + 4x2 + 4x3` holds with w even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceParity {
    pub source_count: usize,
    pub x1: i64,
    pub x2: i64,
    pub x3: i64,
    pub check: bool,
}

/// Counts sources and the negative-edge statistics of a normalized
/// valuation. Every vertex must be a source with boundary 6 or a near-source
/// with boundary 0, and values must lie in {1,2,3}.
pub fn source_parity(
    g: &SignedGraph,
    tau: &Orientation,
    phi: &EdgeValuation,
) -> Result<SourceParity, Z6Error> {
    tau.matches(g)?;
    phi.matches(g)?;
    for e in g.edge_ids() {
        if !(1..=3).contains(&phi.get(e)) {
            return Err(Z6Error::Precondition(format!(
                "value {} at edge {e} outside {{1,2,3}}",
                phi.get(e)
            )));
        }
    }
    let b = boundary(g, tau, phi)?;
    let mut w = 0usize;
    for &v in g.vertex_ids() {
        let role = vertex_role(g, tau, v)?;
        match (b.get(v), role) {
            (6, Role::Source) => w += 1,
            (0, Role::NearSource) => {}
            (x, r) => {
                return Err(Z6Error::Precondition(format!(
                    "vertex {v} has boundary {x} and role {r:?}; expected source/6 or near-source/0"
                )))
            }
        }
    }
    let mut xs = [0i64; 3];
    for (e, edge) in g.edges() {
        if !edge.sign.is_negative() {
            continue;
        }
        let i = (phi.get(e) - 1) as usize;
        match tau.dirs(e) {
            [Dir::Away, Dir::Away] => xs[i] += 1,
            [Dir::Toward, Dir::Toward] => xs[i] -= 1,
            _ => {
                return Err(Z6Error::Precondition(format!(
                    "edge {e} not sign-consistent"
                )))
            }
        }
    }
    let [x1, x2, x3] = xs;
    let check = 6 * w as i64 == 2 * (x1 + x3) + 4 * x2 + 4 * x3 && w % 2 == 0;
    Ok(SourceParity {
        source_count: w,
        x1,
        x2,
        x3,
        check,
    })
}
