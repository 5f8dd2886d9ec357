//! Conway polyhedra: connected, simple, planar, 4-regular graphs with no
//! loops and no bigons, one representative per abstract-isomorphism class.
//!
//! Generation is an orderly search over colex-canonical labelings: vertices
//! are appended with their back-edge sets and a partial labeling survives
//! only while it is the canonical labeling of its induced prefix. Prefixes
//! of canonical labelings are canonical, so every class is produced exactly
//! once with no duplicate suppression. Planarity prunes the search inline;
//! the test-only cross-check pipeline generates all 4-regular connected
//! graphs and filters afterwards, mirroring the dual-method validation used
//! for the published counts.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::SmallGraph;
use crate::planar::{self, Rotation};

#[derive(Debug, Error)]
pub enum PolyhedraError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed polyhedra file: {0}")]
    Format(String),
    #[error("stored record fails validation: {0}")]
    Corrupt(String),
}

/// A 4-regular simple planar graph with one sphere embedding (rotation
/// system), a per-vertex NW-corner mark, a thinness flag, and an
/// abstract-isomorphism certificate.
#[derive(Clone, Debug)]
pub struct PlanarQuartic {
    pub graph: SmallGraph,
    /// Cyclic neighbor order per vertex (4 entries each).
    pub rotation: Rotation,
    /// Distinguished rotation slot per vertex (the NW corner).
    pub nw_corner: Vec<u8>,
    pub thin: bool,
    pub cert: u128,
}

impl PlanarQuartic {
    pub fn vertex_count(&self) -> usize {
        self.graph.n
    }

    pub fn cert_hex(&self) -> String {
        format!("{:032x}", self.cert)
    }

    fn from_graph(g: SmallGraph) -> PlanarQuartic {
        let rotation = planar::planar_embedding(&g).expect("caller guarantees planarity");
        PlanarQuartic {
            thin: is_thin(&g),
            cert: g.canonical_cert(),
            nw_corner: vec![0; g.n],
            rotation,
            graph: g,
        }
    }

    /// Rotation slot of neighbor `v` at vertex `u`.
    pub fn slot_of(&self, u: usize, v: usize) -> u8 {
        self.rotation[u]
            .iter()
            .position(|&x| x == v)
            .expect("neighbor present") as u8
    }
}

/// One representative per abstract-isomorphism class of connected, simple,
/// planar, 4-regular graphs on `v` vertices, sorted by certificate.
pub fn generate_polyhedra(v: usize) -> Vec<PlanarQuartic> {
    let graphs = orderly_quartic(v, true);
    let mut out: Vec<PlanarQuartic> = graphs.into_iter().map(PlanarQuartic::from_graph).collect();
    out.sort_by_key(|p| p.cert);
    out
}

/// Orderly generation of connected simple 4-regular graphs on `n` vertices;
/// with `planar_prune` set, non-planar partial graphs are cut immediately,
/// otherwise planarity is not consulted at all (cross-check path filters
/// afterwards).
pub fn orderly_quartic(n: usize, planar_prune: bool) -> Vec<SmallGraph> {
    if n < 5 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let g = SmallGraph::empty(n);
    extend(&mut out, g, 1, n, planar_prune);
    out
}

fn extend(out: &mut Vec<SmallGraph>, g: SmallGraph, next: usize, n: usize, planar_prune: bool) {
    if next == n {
        if (0..n).all(|v| g.degree(v) == 4) && g.is_connected() && (!planar_prune || true) {
            out.push(g);
        }
        return;
    }
    // choose back-neighbors of vertex `next` among 0..next
    let candidates: Vec<usize> = (0..next).filter(|&u| g.degree(u) < 4).collect();
    let mut subset = vec![];
    choose_backsets(out, &g, next, n, planar_prune, &candidates, 0, &mut subset);
}

#[allow(clippy::too_many_arguments)]
fn choose_backsets(
    out: &mut Vec<SmallGraph>,
    g: &SmallGraph,
    next: usize,
    n: usize,
    planar_prune: bool,
    candidates: &[usize],
    start: usize,
    chosen: &mut Vec<usize>,
) {
    if chosen.len() <= 4 {
        // try this back-set (possibly empty)
        let mut h = *g;
        for &u in chosen.iter() {
            h.add_edge(u, next);
        }
        let needs_planarity =
            planar_prune && chosen.len() >= 2 && h.edge_count() >= 9;
        if feasible(&h, next, n)
            && h.is_canonically_labeled_prefix(next + 1)
            && (!needs_planarity || planar::is_planar(&h))
        {
            extend(out, h, next + 1, n, planar_prune);
        }
    }
    if chosen.len() == 4 {
        return;
    }
    for i in start..candidates.len() {
        chosen.push(candidates[i]);
        choose_backsets(out, g, next, n, planar_prune, candidates, i + 1, chosen);
        chosen.pop();
    }
}

/// Degree-deficit and connectivity feasibility for the prefix 0..=next.
fn feasible(g: &SmallGraph, next: usize, n: usize) -> bool {
    let future = n - next - 1;
    let mut deficit_sum = 0usize;
    for v in 0..=next {
        let d = 4 - g.degree(v) as usize;
        // each deficit must be met by distinct future vertices
        if d > future {
            return false;
        }
        deficit_sum += d;
    }
    if deficit_sum > 4 * future {
        return false;
    }
    // a finished component that is not the whole graph can never connect
    let all: u16 = ((1u32 << (next + 1)) - 1) as u16;
    let mut remaining = all;
    while remaining != 0 {
        let s = remaining.trailing_zeros() as usize;
        let comp = g.component_mask(s, all);
        remaining &= !comp;
        let finished = (0..=next)
            .filter(|&v| comp & (1 << v) != 0)
            .all(|v| g.degree(v) == 4);
        if finished && (comp != all || future > 0) {
            return false;
        }
    }
    true
}

impl SmallGraph {
    /// Canonicity of the identity labeling of the induced prefix on 0..k.
    fn is_canonically_labeled_prefix(&self, k: usize) -> bool {
        let mut sub = SmallGraph::empty(k);
        for u in 0..k {
            for v in self.neighbors(u) {
                if v < k && u < v {
                    sub.add_edge(u, v);
                }
            }
        }
        sub.is_canonically_labeled()
    }
}

/// True iff the graph can be disconnected by removing two edges
/// (edge-connectivity ≤ 2; cuts in 4-regular graphs are even).
pub fn is_thin(g: &SmallGraph) -> bool {
    edge_connectivity_at_most(g, 2)
}

fn edge_connectivity_at_most(g: &SmallGraph, k: u32) -> bool {
    // max-flow from vertex 0 to every other vertex with cutoff k+1
    for t in 1..g.n {
        if max_flow_cutoff(g, 0, t, k + 1) <= k {
            return true;
        }
    }
    false
}

fn max_flow_cutoff(g: &SmallGraph, s: usize, t: usize, cutoff: u32) -> u32 {
    // unit-capacity undirected edges: residual as per-pair capacities
    let mut cap = vec![[0u8; 16]; 16];
    for u in 0..g.n {
        for v in g.neighbors(u) {
            cap[u][v] = 1;
        }
    }
    let mut flow = 0;
    while flow < cutoff {
        // BFS augmenting path
        let mut prev = [usize::MAX; 16];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(s);
        prev[s] = s;
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for v in 0..g.n {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            break;
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            cap[u][v] -= 1;
            cap[v][u] += 1;
            v = u;
        }
        flow += 1;
    }
    flow
}

// ---------------------------------------------------------------------------
// Contraction orders
// ---------------------------------------------------------------------------

/// An insertion order for the skein engine: every prefix induces a
/// connected subgraph and (when achievable) a connected complement, so the
/// partial tangle always lives in a disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionOrder {
    pub order: Vec<usize>,
    /// boundary size (dangling edge count) after each step
    pub boundary_after: Vec<usize>,
}

impl ContractionOrder {
    pub fn max_boundary(&self) -> usize {
        self.boundary_after.iter().copied().max().unwrap_or(0)
    }
}

/// Greedy order minimizing the next boundary size with lexicographic
/// tie-break, restricted to steps that keep the complement connected; a
/// backtracking fallback handles graphs where the greedy paints itself in.
pub fn contraction_order(g: &SmallGraph) -> ContractionOrder {
    let full: u16 = ((1u32 << g.n) - 1) as u16;
    if let Some(order) = greedy_order(g, full, true) {
        return finish_order(g, order);
    }
    if let Some(order) = backtrack_order(g, full) {
        return finish_order(g, order);
    }
    // last resort: greedy without the co-connectivity restriction
    let order = greedy_order(g, full, false).expect("connected graph has a greedy order");
    finish_order(g, order)
}

fn cut_size(g: &SmallGraph, inside: u16) -> usize {
    let mut cut = 0;
    for v in 0..g.n {
        if inside & (1 << v) != 0 {
            cut += (g.neighbors_mask(v) & !inside).count_ones() as usize;
        }
    }
    cut
}

fn step_candidates(g: &SmallGraph, inside: u16, full: u16, co_connected: bool) -> Vec<usize> {
    let outside = full & !inside;
    (0..g.n)
        .filter(|&v| outside & (1 << v) != 0)
        .filter(|&v| inside == 0 || g.neighbors_mask(v) & inside != 0)
        .filter(|&v| {
            if !co_connected {
                return true;
            }
            let rest = outside & !(1 << v);
            if rest == 0 {
                return true;
            }
            let s = rest.trailing_zeros() as usize;
            g.component_mask(s, rest) == rest
        })
        .collect()
}

fn greedy_order(g: &SmallGraph, full: u16, co_connected: bool) -> Option<Vec<usize>> {
    let mut inside: u16 = 0;
    let mut order = Vec::with_capacity(g.n);
    for _ in 0..g.n {
        let cands = step_candidates(g, inside, full, co_connected);
        let best = cands
            .into_iter()
            .min_by_key(|&v| (cut_size(g, inside | (1 << v)), v))?;
        order.push(best);
        inside |= 1 << best;
    }
    Some(order)
}

fn backtrack_order(g: &SmallGraph, full: u16) -> Option<Vec<usize>> {
    fn rec(g: &SmallGraph, full: u16, inside: u16, order: &mut Vec<usize>) -> bool {
        if order.len() == g.n {
            return true;
        }
        let mut cands = step_candidates(g, inside, full, true);
        cands.sort_by_key(|&v| (cut_size(g, inside | (1 << v)), v));
        for v in cands {
            order.push(v);
            if rec(g, full, inside | (1 << v), order) {
                return true;
            }
            order.pop();
        }
        false
    }
    let mut order = Vec::new();
    rec(g, full, 0, &mut order).then_some(order)
}

fn finish_order(g: &SmallGraph, order: Vec<usize>) -> ContractionOrder {
    let mut inside: u16 = 0;
    let mut boundary_after = Vec::with_capacity(order.len());
    for &v in &order {
        inside |= 1 << v;
        boundary_after.push(cut_size(g, inside));
    }
    ContractionOrder {
        order,
        boundary_after,
    }
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RecordLine {
    rotation: Vec<Vec<usize>>,
}

const POLY_HEADER: &str = "knotscan-polyhedra v1";

pub fn save_polyhedra(list: &[PlanarQuartic], path: &std::path::Path) -> Result<(), PolyhedraError> {
    let mut out = String::new();
    let _ = writeln!(out, "{POLY_HEADER}");
    for p in list {
        let rot = serde_json::to_string(&p.rotation).expect("serializable");
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            p.vertex_count(),
            rot,
            if p.thin { 1 } else { 0 },
            p.cert_hex()
        );
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn load_polyhedra(path: &std::path::Path) -> Result<Vec<PlanarQuartic>, PolyhedraError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| PolyhedraError::Format("empty file".into()))?;
    if header != POLY_HEADER {
        return Err(PolyhedraError::Format(format!("bad header: {header}")));
    }
    let mut out = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(PolyhedraError::Format(format!("bad line: {line}")));
        }
        let n: usize = cols[0]
            .parse()
            .map_err(|_| PolyhedraError::Format(format!("bad vertex count: {}", cols[0])))?;
        let rotation: Vec<Vec<usize>> = serde_json::from_str(cols[1])
            .map_err(|e| PolyhedraError::Format(format!("bad rotation: {e}")))?;
        let thin = cols[2] == "1";
        let cert = u128::from_str_radix(cols[3], 16)
            .map_err(|_| PolyhedraError::Format(format!("bad cert: {}", cols[3])))?;
        if rotation.len() != n {
            return Err(PolyhedraError::Format("rotation length mismatch".into()));
        }
        let mut g = SmallGraph::empty(n);
        for (u, nbrs) in rotation.iter().enumerate() {
            if nbrs.len() != 4 {
                return Err(PolyhedraError::Format("vertex degree != 4".into()));
            }
            for &v in nbrs {
                if v >= n || v == u {
                    return Err(PolyhedraError::Format("bad neighbor".into()));
                }
                if u < v {
                    g.add_edge(u, v);
                }
            }
        }
        // validation: the stored data must be internally consistent
        if (0..n).any(|v| g.degree(v) != 4) || !g.is_connected() {
            return Err(PolyhedraError::Corrupt(cols[3].into()));
        }
        if !planar::check_euler(&g, &rotation) {
            return Err(PolyhedraError::Corrupt(format!("euler: {}", cols[3])));
        }
        if g.canonical_cert() != cert || is_thin(&g) != thin {
            return Err(PolyhedraError::Corrupt(cols[3].into()));
        }
        out.push(PlanarQuartic {
            graph: g,
            rotation,
            nw_corner: vec![0; n],
            thin,
            cert,
        });
    }
    Ok(out)
}

pub fn stats_tsv(list: &[PlanarQuartic]) -> String {
    use std::collections::BTreeMap;
    let mut per_v: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for p in list {
        let e = per_v.entry(p.vertex_count()).or_default();
        e.0 += 1;
        if p.thin {
            e.1 += 1;
        }
    }
    let mut out = String::from("v\ttotal\tthin\tnot_thin\n");
    for (v, (total, thin)) in per_v {
        let _ = writeln!(out, "{v}\t{total}\t{thin}\t{}", total - thin);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_up_to_ten() {
        let expect = [(6, 1, 0), (7, 0, 0), (8, 1, 0), (9, 1, 0), (10, 3, 0)];
        for (v, total, thin) in expect {
            let polys = generate_polyhedra(v);
            assert_eq!(polys.len(), total, "total at v={v}");
            assert_eq!(
                polys.iter().filter(|p| p.thin).count(),
                thin,
                "thin at v={v}"
            );
        }
    }

    #[test]
    fn six_vertex_is_octahedron() {
        let polys = generate_polyhedra(6);
        assert_eq!(polys.len(), 1);
        let p = &polys[0];
        assert!(!p.thin);
        // octahedron: every vertex has 4 neighbors and one antipode
        for v in 0..6 {
            assert_eq!(p.graph.degree(v), 4);
        }
        assert_eq!(planar::face_count(&p.graph, &p.rotation), 8);
    }

    #[test]
    fn cross_check_unpruned_pipeline_small() {
        // all connected 4-regular graphs, planarity filtered afterwards
        for v in [6usize, 7, 8, 9] {
            let pruned = generate_polyhedra(v);
            let all = orderly_quartic(v, false);
            let planar_count = all.iter().filter(|g| planar::is_planar(g)).count();
            assert_eq!(planar_count, pruned.len(), "cross-check at v={v}");
            // certificate distinctness doubles as a no-duplicates check
            let mut certs: Vec<u128> = all.iter().map(|g| g.canonical_cert()).collect();
            certs.sort_unstable();
            certs.dedup();
            assert_eq!(certs.len(), all.len(), "duplicates at v={v}");
        }
    }

    #[test]
    fn thin_detection_on_joined_polyhedra() {
        // two octahedra joined by cutting one edge in each and cross-linking
        let mut g = SmallGraph::empty(12);
        let add_octa = |g: &mut SmallGraph, base: usize| {
            for u in 0..6 {
                for v in (u + 1)..6 {
                    if v != u + 3 {
                        g.add_edge(base + u, base + v);
                    }
                }
            }
        };
        add_octa(&mut g, 0);
        add_octa(&mut g, 6);
        g.remove_edge(0, 1);
        g.remove_edge(6, 7);
        g.add_edge(0, 6);
        g.add_edge(1, 7);
        assert!((0..12).all(|v| g.degree(v) == 4));
        assert!(is_thin(&g));
        let octa = generate_polyhedra(6).remove(0);
        assert!(!is_thin(&octa.graph));
    }

    #[test]
    fn contraction_order_on_octahedron() {
        let p = &generate_polyhedra(6)[0];
        let ord = contraction_order(&p.graph);
        assert_eq!(ord.max_boundary(), 6);
        assert_eq!(*ord.boundary_after.last().unwrap(), 0);
        // recount boundary profile independently
        let mut inside: u16 = 0;
        for (k, &v) in ord.order.iter().enumerate() {
            inside |= 1 << v;
            let mut cut = 0;
            for u in 0..6 {
                if inside & (1 << u) != 0 {
                    for w in p.graph.neighbors(u) {
                        if inside & (1 << w) == 0 {
                            cut += 1;
                        }
                    }
                }
            }
            assert_eq!(cut, ord.boundary_after[k]);
            // prefix connected
            let s = inside.trailing_zeros() as usize;
            assert_eq!(p.graph.component_mask(s, inside), inside);
        }
    }

    #[test]
    fn save_load_round_trip() {
        let dir = std::env::temp_dir().join("knotscan-poly-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("polyhedra.tsv");
        let mut list = generate_polyhedra(6);
        list.extend(generate_polyhedra(8));
        save_polyhedra(&list, &path).unwrap();
        let loaded = load_polyhedra(&path).unwrap();
        assert_eq!(loaded.len(), list.len());
        for (a, b) in loaded.iter().zip(&list) {
            assert_eq!(a.cert, b.cert);
            assert_eq!(a.rotation, b.rotation);
        }
    }
}
