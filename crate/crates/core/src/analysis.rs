//! Structural predicates and combinatorial subroutines: balance detection,
//! flow admissibility, cyclic edge-connectivity, general-graph maximum
//! matching, and an exhaustive k-flow oracle for small instances.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Dir, EdgeId, EdgeValuation, Orientation, SignedGraph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("graph has {edges} edges; exhaustive flow search is limited to {limit}")]
    EdgeGuardExceeded { edges: usize, limit: usize },
    #[error("flow bound k = {0} is out of range (k >= 2 required)")]
    InvalidFlowBound(i64),
}

/// Exhaustive search guard for [`brute_force_k_flow`].
pub const FLOW_SEARCH_EDGE_LIMIT: usize = 20;

// ---------------------------------------------------------------------------
// Components
// ---------------------------------------------------------------------------

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Compact vertex indices plus a component id per vertex, with an optional
/// edge filter (filtered edges are treated as deleted).
struct Components {
    index: BTreeMap<VertexId, usize>,
    comp: Vec<usize>,
    count: usize,
}

fn components(g: &SignedGraph, skip: &dyn Fn(EdgeId) -> bool) -> Components {
    let index: BTreeMap<VertexId, usize> = g
        .vertex_ids()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let mut uf = UnionFind::new(index.len());
    for (e, edge) in g.edges() {
        if skip(e) {
            continue;
        }
        uf.union(index[&edge.ends[0]], index[&edge.ends[1]]);
    }
    let mut roots = BTreeMap::new();
    let mut comp = vec![0; index.len()];
    for i in 0..index.len() {
        let r = uf.find(i);
        let next = roots.len();
        comp[i] = *roots.entry(r).or_insert(next);
    }
    Components {
        index,
        count: roots.len(),
        comp,
    }
}

// ---------------------------------------------------------------------------
// Balance and flow admissibility
// ---------------------------------------------------------------------------

/// Number of connected components whose signature is switching-equivalent to
/// the all-positive one, with `skip` treated as deleted edges.
///
/// Per component, a spanning tree fixes a ±1 vertex labeling that makes all
/// tree edges positive; the component is balanced iff every remaining edge is
/// positive under the labeling. Loops are balanced iff positive.
fn balanced_component_count_filtered(g: &SignedGraph, skip: &dyn Fn(EdgeId) -> bool) -> usize {
    let comps = components(g, skip);
    let mut balanced = vec![true; comps.count];

    // Spanning-tree labeling via BFS from the least vertex of each component.
    let mut label: BTreeMap<VertexId, i8> = BTreeMap::new();
    for &v in g.vertex_ids() {
        if label.contains_key(&v) {
            continue;
        }
        label.insert(v, 1);
        let mut queue = vec![v];
        while let Some(x) = queue.pop() {
            for (e, end) in g.incidences(x) {
                if skip(e) {
                    continue;
                }
                let edge = g.edge(e).unwrap();
                if edge.is_loop() {
                    continue;
                }
                let y = edge.other_end(end);
                if !label.contains_key(&y) {
                    let lx = label[&x];
                    label.insert(y, if edge.sign.is_negative() { -lx } else { lx });
                    queue.push(y);
                }
            }
        }
    }

    for (e, edge) in g.edges() {
        if skip(e) {
            continue;
        }
        let effective_negative = if edge.is_loop() {
            edge.sign.is_negative()
        } else {
            let s = label[&edge.ends[0]] * label[&edge.ends[1]];
            (s < 0) != edge.sign.is_negative()
        };
        if effective_negative {
            balanced[comps.comp[comps.index[&edge.ends[0]]]] = false;
        }
    }
    balanced.iter().filter(|&&b| b).count()
}

/// Number of balanced connected components of `g`.
pub fn balanced_component_count(g: &SignedGraph) -> usize {
    balanced_component_count_filtered(g, &|_| false)
}

/// Whether `g` admits a nowhere-zero integer flow: true iff deleting any
/// single edge leaves the number of balanced components unchanged.
pub fn is_flow_admissible(g: &SignedGraph) -> bool {
    let base = balanced_component_count(g);
    g.edge_ids()
        .all(|e| balanced_component_count_filtered(g, &|d| d == e) == base)
}

// ---------------------------------------------------------------------------
// Cyclic edge-connectivity
// ---------------------------------------------------------------------------

/// Result of [`cyclic_edge_connectivity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CyclicConnectivity {
    Finite(usize),
    Infinite,
}

impl CyclicConnectivity {
    pub fn at_least(self, k: usize) -> bool {
        match self {
            CyclicConnectivity::Finite(c) => c >= k,
            CyclicConnectivity::Infinite => true,
        }
    }
}

impl std::fmt::Display for CyclicConnectivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CyclicConnectivity::Finite(c) => write!(f, "{c}"),
            CyclicConnectivity::Infinite => write!(f, "infinite"),
        }
    }
}

/// True when at least two components (after deleting `skip` edges) contain a
/// cycle; a component contains a cycle iff its edge count reaches its vertex
/// count, loops included.
fn has_two_cyclic_components(g: &SignedGraph, skip: &dyn Fn(EdgeId) -> bool) -> bool {
    let comps = components(g, skip);
    let mut verts = vec![0usize; comps.count];
    let mut edges = vec![0usize; comps.count];
    for &i in comps.index.values() {
        verts[comps.comp[i]] += 1;
    }
    for (e, edge) in g.edges() {
        if !skip(e) {
            edges[comps.comp[comps.index[&edge.ends[0]]]] += 1;
        }
    }
    (0..comps.count).filter(|&c| edges[c] >= verts[c]).count() >= 2
}

/// Vertex set and edge count of a shortest cycle, if any. Loops and parallel
/// pairs are cycles of length 1 and 2; otherwise a shortest cycle through
/// each non-loop edge is found by BFS avoiding that edge.
fn shortest_cycle(g: &SignedGraph, banned: &[VertexId]) -> Option<(Vec<VertexId>, usize)> {
    let allowed = |v: VertexId| !banned.contains(&v);
    for (_, edge) in g.edges() {
        if edge.is_loop() && allowed(edge.ends[0]) {
            return Some((vec![edge.ends[0]], 1));
        }
    }
    let mut pairs: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for (_, edge) in g.edges() {
        if edge.is_loop() || !allowed(edge.ends[0]) || !allowed(edge.ends[1]) {
            continue;
        }
        let key = (
            edge.ends[0].min(edge.ends[1]),
            edge.ends[0].max(edge.ends[1]),
        );
        *pairs.entry(key).or_insert(0) += 1;
        if pairs[&key] >= 2 {
            return Some((vec![key.0, key.1], 2));
        }
    }

    let mut best: Option<(Vec<VertexId>, usize)> = None;
    for (e, edge) in g.edges() {
        if edge.is_loop() || !allowed(edge.ends[0]) || !allowed(edge.ends[1]) {
            continue;
        }
        // Shortest path from one end to the other avoiding e itself.
        let (src, dst) = (edge.ends[0], edge.ends[1]);
        let mut prev: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        prev.insert(src, src);
        let mut queue = std::collections::VecDeque::from([src]);
        'bfs: while let Some(x) = queue.pop_front() {
            for (d, end) in g.incidences(x) {
                if d == e {
                    continue;
                }
                let other = g.edge(d).unwrap().other_end(end);
                if allowed(other) && !prev.contains_key(&other) {
                    prev.insert(other, x);
                    if other == dst {
                        break 'bfs;
                    }
                    queue.push_back(other);
                }
            }
        }
        if prev.contains_key(&dst) {
            let mut path = vec![dst];
            let mut cur = dst;
            while prev[&cur] != cur {
                cur = prev[&cur];
                path.push(cur);
            }
            let len = path.len(); // edges on path + the closing edge e
            if best.as_ref().map_or(true, |(_, l)| len < *l) {
                best = Some((path, len));
            }
        }
    }
    best
}

/// Edges with exactly one end in `inside`.
fn bipartition_cut_size(g: &SignedGraph, inside: &[VertexId]) -> usize {
    g.edges()
        .filter(|(_, edge)| inside.contains(&edge.ends[0]) != inside.contains(&edge.ends[1]))
        .count()
}

/// Exact search over vertex bipartitions for the smallest cut separating two
/// cycles. Only used when the greedy disjoint-cycle probe fails; instances
/// are expected to be small.
fn bipartition_scan(g: &SignedGraph) -> Option<usize> {
    let verts = g.vertex_ids();
    let n = verts.len();
    assert!(
        n <= 24,
        "bipartition scan for cyclic connectivity is limited to 24 vertices"
    );
    if n < 2 {
        return None;
    }
    let has_cycle_in = |mask: u64| -> bool {
        let inside = |v: VertexId| {
            let i = verts.binary_search(&v).unwrap();
            mask >> i & 1 == 1
        };
        // Count per-component vertices/edges within the induced subgraph.
        let comps = components(g, &|e| {
            let edge = g.edge(e).unwrap();
            !(inside(edge.ends[0]) && inside(edge.ends[1]))
        });
        let mut verts_in = vec![0usize; comps.count];
        let mut edges_in = vec![0usize; comps.count];
        for (&v, &i) in &comps.index {
            if inside(v) {
                verts_in[comps.comp[i]] += 1;
            }
        }
        for (e, edge) in g.edges() {
            if inside(edge.ends[0]) && inside(edge.ends[1]) {
                let _ = e;
                edges_in[comps.comp[comps.index[&edge.ends[0]]]] += 1;
            }
        }
        (0..comps.count).any(|c| verts_in[c] > 0 && edges_in[c] >= verts_in[c])
    };
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best: Option<usize> = None;
    // Fix vertex 0 inside to halve the scan.
    for mask in 0..(1u64 << (n - 1)) {
        let mask = mask << 1 | 1;
        if !has_cycle_in(mask) || !has_cycle_in(full & !mask) {
            continue;
        }
        let inside: Vec<VertexId> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        let cut = bipartition_cut_size(g, &inside);
        if best.map_or(true, |b| cut < b) {
            best = Some(cut);
        }
    }
    best
}

/// First Betti number m - n + c.
fn cycle_rank(g: &SignedGraph) -> usize {
    let c = components(g, &|_| false).count;
    (g.edge_count() + c).saturating_sub(g.vertex_count())
}

/// The cyclic edge-connectivity of the underlying graph (signs ignored):
/// the minimum number of edges whose removal leaves at least two components
/// each containing a cycle.
///
/// When no such edge set exists the cycle rank is returned instead (the
/// usual convention, putting K4 at 3 and K3,3 at 4); forests, where even
/// that degenerates, report `Infinite`.
///
/// The search enumerates edge subsets by increasing size below an upper
/// bound obtained from a greedily found pair of vertex-disjoint cycles.
pub fn cyclic_edge_connectivity(g: &SignedGraph) -> CyclicConnectivity {
    if has_two_cyclic_components(g, &|_| false) {
        return CyclicConnectivity::Finite(0);
    }
    let fallback = || match cycle_rank(g) {
        0 => CyclicConnectivity::Infinite,
        r => CyclicConnectivity::Finite(r),
    };
    let Some((c1_verts, c1_len)) = shortest_cycle(g, &[]) else {
        return fallback();
    };
    let upper = match shortest_cycle(g, &c1_verts) {
        Some((_, c2_len)) => {
            let outside_both = g.edge_count() - c1_len - c2_len;
            outside_both.min(bipartition_cut_size(g, &c1_verts))
        }
        // The greedy probe found no disjoint partner; decide exactly.
        None => match bipartition_scan(g) {
            Some(best) => return CyclicConnectivity::Finite(best),
            None => return fallback(),
        },
    };

    let live: Vec<EdgeId> = g.edge_ids().collect();
    for k in 1..=upper {
        let mut chosen = vec![0usize; k];
        if search_cut(g, &live, &mut chosen, 0, 0, k) {
            return CyclicConnectivity::Finite(k);
        }
    }
    CyclicConnectivity::Finite(upper)
}

fn search_cut(
    g: &SignedGraph,
    live: &[EdgeId],
    chosen: &mut [usize],
    depth: usize,
    start: usize,
    k: usize,
) -> bool {
    if depth == k {
        let skip = |e: EdgeId| chosen.iter().any(|&i| live[i] == e);
        return has_two_cyclic_components(g, &skip);
    }
    for i in start..live.len() {
        chosen[depth] = i;
        if search_cut(g, live, chosen, depth + 1, i + 1, k) {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Maximum matching (blossom contraction)
// ---------------------------------------------------------------------------

/// A matching: pairwise vertex-disjoint non-loop edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    /// Edge ids of the matching; among parallel edges the lowest index.
    pub edges: Vec<EdgeId>,
    /// Whether every vertex is covered exactly once.
    pub perfect: bool,
}

/// Maximum matching on the loopless, deduplicated underlying graph, via
/// blossom contraction in O(V^3).
pub fn maximum_matching(g: &SignedGraph) -> MatchingResult {
    let verts = g.vertex_ids();
    let n = verts.len();
    let idx = |v: VertexId| verts.binary_search(&v).unwrap();

    // Simple underlying graph; remember the lowest-index representative.
    let mut rep: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
    for (e, edge) in g.edges() {
        if edge.is_loop() {
            continue;
        }
        let (a, b) = (idx(edge.ends[0]), idx(edge.ends[1]));
        rep.entry((a.min(b), a.max(b))).or_insert(e);
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in rep.keys() {
        adj[a].push(b);
        adj[b].push(a);
    }

    let mate = blossom_maximum_matching(&adj);

    let mut edges = Vec::new();
    for a in 0..n {
        if let Some(b) = mate[a] {
            if a < b {
                edges.push(rep[&(a, b)]);
            }
        }
    }
    edges.sort_unstable();
    let perfect = 2 * edges.len() == n;
    MatchingResult { edges, perfect }
}

/// A perfect matching of the underlying graph, if one exists.
pub fn perfect_matching(g: &SignedGraph) -> Option<MatchingResult> {
    let m = maximum_matching(g);
    m.perfect.then_some(m)
}

/// Classic blossom algorithm on a simple graph given by adjacency lists.
/// Returns the mate of each vertex.
fn blossom_maximum_matching(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n = adj.len();
    let none = usize::MAX;
    let mut mate = vec![none; n];
    let mut parent = vec![none; n];
    let mut base: Vec<usize> = (0..n).collect();

    fn lca(
        mut a: usize,
        mut b: usize,
        base: &[usize],
        parent: &[usize],
        mate: &[usize],
        none: usize,
    ) -> usize {
        let n = base.len();
        let mut used = vec![false; n];
        loop {
            a = base[a];
            used[a] = true;
            if mate[a] == none {
                break;
            }
            a = parent[mate[a]];
        }
        loop {
            b = base[b];
            if used[b] {
                return b;
            }
            b = parent[mate[b]];
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn mark_path(
        mut v: usize,
        b: usize,
        mut child: usize,
        blossom: &mut [bool],
        base: &mut [usize],
        parent: &mut [usize],
        mate: &[usize],
    ) {
        while base[v] != b {
            blossom[base[v]] = true;
            blossom[base[mate[v]]] = true;
            parent[v] = child;
            child = mate[v];
            v = parent[mate[v]];
        }
    }

    fn find_path(
        root: usize,
        adj: &[Vec<usize>],
        mate: &mut [usize],
        parent: &mut [usize],
        base: &mut [usize],
        none: usize,
    ) -> Option<usize> {
        let n = adj.len();
        for i in 0..n {
            parent[i] = none;
            base[i] = i;
        }
        let mut used = vec![false; n];
        used[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &to in &adj[v] {
                if base[v] == base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != none && parent[mate[to]] != none) {
                    // Odd cycle: contract the blossom.
                    let b = lca(v, to, base, parent, mate, none);
                    let mut blossom = vec![false; n];
                    mark_path(v, b, to, &mut blossom, base, parent, mate);
                    mark_path(to, b, v, &mut blossom, base, parent, mate);
                    for i in 0..n {
                        if blossom[base[i]] {
                            base[i] = b;
                            if !used[i] {
                                used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if parent[to] == none {
                    parent[to] = v;
                    if mate[to] == none {
                        return Some(to);
                    }
                    used[mate[to]] = true;
                    queue.push_back(mate[to]);
                }
            }
        }
        None
    }

    for v in 0..n {
        if mate[v] != none {
            continue;
        }
        if let Some(mut u) = find_path(v, adj, &mut mate, &mut parent, &mut base, none) {
            // Augment along the alternating path back to the root.
            while u != none {
                let pv = parent[u];
                let next = mate[pv];
                mate[u] = pv;
                mate[pv] = u;
                u = next;
            }
        }
    }

    mate.into_iter().map(|m| (m != none).then_some(m)).collect()
}

// ---------------------------------------------------------------------------
// Brute-force k-flow oracle
// ---------------------------------------------------------------------------

/// Exhaustive search for a nowhere-zero k-flow under the canonical
/// orientation; `None` certifies non-existence. Guarded to at most
/// [`FLOW_SEARCH_EDGE_LIMIT`] edges.
pub fn brute_force_k_flow(
    g: &SignedGraph,
    k: i64,
) -> Result<Option<(Orientation, EdgeValuation)>, AnalysisError> {
    if k < 2 {
        return Err(AnalysisError::InvalidFlowBound(k));
    }
    let m = g.edge_count();
    if m > FLOW_SEARCH_EDGE_LIMIT {
        return Err(AnalysisError::EdgeGuardExceeded {
            edges: m,
            limit: FLOW_SEARCH_EDGE_LIMIT,
        });
    }
    let tau = Orientation::canonical(g);
    let verts = g.vertex_ids();
    let vidx = |v: VertexId| verts.binary_search(&v).unwrap();

    // Per edge: list of (vertex index, coefficient). A positive loop has no
    // boundary effect and is assigned the value 1 outright.
    let live: Vec<EdgeId> = g.edge_ids().collect();
    let mut coeffs: Vec<Vec<(usize, i64)>> = Vec::with_capacity(live.len());
    for &e in &live {
        let edge = g.edge(e).unwrap();
        let dirs = tau.dirs(e);
        let mut per: BTreeMap<usize, i64> = BTreeMap::new();
        for end in 0..2 {
            let c = if dirs[end] == Dir::Away { 1 } else { -1 };
            *per.entry(vidx(edge.ends[end])).or_insert(0) += c;
        }
        per.retain(|_, c| *c != 0);
        coeffs.push(per.into_iter().collect());
    }

    let searchable: Vec<usize> = (0..live.len()).filter(|&i| !coeffs[i].is_empty()).collect();
    let mut sums = vec![0i64; verts.len()];
    // Residual capacity: how much |sum| the unassigned edges at a vertex can
    // still absorb.
    let mut slack = vec![0i64; verts.len()];
    for &i in &searchable {
        for &(v, c) in &coeffs[i] {
            slack[v] += c.abs() * (k - 1);
        }
    }
    let mut remaining = vec![0usize; verts.len()];
    for &i in &searchable {
        for &(v, _) in &coeffs[i] {
            remaining[v] += 1;
        }
    }

    let mut values = vec![0i64; live.len()];
    if search_flow(
        &coeffs,
        &searchable,
        0,
        k,
        &mut sums,
        &mut slack,
        &mut remaining,
        &mut values,
    ) {
        let mut f = EdgeValuation::zeros(g.slot_count());
        for (i, &e) in live.iter().enumerate() {
            let v = if coeffs[i].is_empty() { 1 } else { values[i] };
            f.set(e, v);
        }
        Ok(Some((tau, f)))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn search_flow(
    coeffs: &[Vec<(usize, i64)>],
    order: &[usize],
    depth: usize,
    k: i64,
    sums: &mut [i64],
    slack: &mut [i64],
    remaining: &mut [usize],
    values: &mut [i64],
) -> bool {
    if depth == order.len() {
        return sums.iter().all(|&s| s == 0);
    }
    let i = order[depth];

    // A value x is feasible if afterwards every endpoint can still reach 0.
    let feasible = |x: i64, sums: &[i64], slack: &[i64], remaining: &[usize]| {
        coeffs[i].iter().all(|&(v, c)| {
            let s = sums[v] + c * x;
            let cap = slack[v] - c.abs() * (k - 1);
            if remaining[v] == 1 {
                s == 0
            } else {
                s.abs() <= cap
            }
        })
    };

    // When this is the last unassigned edge at some endpoint, its value is
    // forced there.
    let forced = coeffs[i].iter().find_map(|&(v, c)| {
        (remaining[v] == 1).then(|| {
            let need = -sums[v];
            (need % c == 0)
                .then(|| need / c)
                .filter(|&x| x != 0 && x.abs() <= k - 1)
        })
    });

    let apply = |x: i64,
                 sums: &mut [i64],
                 slack: &mut [i64],
                 remaining: &mut [usize],
                 values: &mut [i64]| {
        for &(v, c) in &coeffs[i] {
            sums[v] += c * x;
            slack[v] -= c.abs() * (k - 1);
            remaining[v] -= 1;
        }
        values[i] = x;
    };
    let unapply = |x: i64, sums: &mut [i64], slack: &mut [i64], remaining: &mut [usize]| {
        for &(v, c) in &coeffs[i] {
            sums[v] -= c * x;
            slack[v] += c.abs() * (k - 1);
            remaining[v] += 1;
        }
    };

    match forced {
        Some(None) => false,
        Some(Some(x)) => {
            if !feasible(x, sums, slack, remaining) {
                return false;
            }
            apply(x, sums, slack, remaining, values);
            let ok = search_flow(coeffs, order, depth + 1, k, sums, slack, remaining, values);
            if !ok {
                unapply(x, sums, slack, remaining);
            }
            ok
        }
        None => {
            for mag in 1..k {
                for x in [mag, -mag] {
                    if !feasible(x, sums, slack, remaining) {
                        continue;
                    }
                    apply(x, sums, slack, remaining, values);
                    if search_flow(coeffs, order, depth + 1, k, sums, slack, remaining, values) {
                        return true;
                    }
                    unapply(x, sums, slack, remaining);
                }
            }
            false
        }
    }
}
