//! Planarity testing and sphere embeddings by face-by-face path insertion
//! (Demoucron-Malgrange-Pertuiset), run per biconnected block and glued at
//! cut vertices. At the sizes used here (≤ 16 vertices, ≤ 32 edges) the
//! quadratic behavior is irrelevant and the embedding output doubles as the
//! planarity certificate (Euler count is asserted).

use crate::graph::SmallGraph;

/// Rotation system: per vertex, the cyclic order of neighbors.
pub type Rotation = Vec<Vec<usize>>;

pub fn is_planar(g: &SmallGraph) -> bool {
    planar_embedding(g).is_some()
}

/// An embedding as a rotation system, or None if non-planar. Disconnected
/// graphs embed component by component.
pub fn planar_embedding(g: &SmallGraph) -> Option<Rotation> {
    // Euler bound shortcut
    if g.n >= 3 && g.edge_count() > 3 * g.n - 6 {
        return None;
    }
    let mut rotation: Rotation = vec![Vec::new(); g.n];
    for block in blocks(g) {
        let rot = embed_block(g, &block)?;
        for v in block.vertices() {
            // splice the block's rotation at shared (cut) vertices
            rotation[v].extend(rot[v].iter().copied());
        }
    }
    // isolated vertices keep empty rotations
    debug_assert!(check_euler(g, &rotation));
    Some(rotation)
}

/// Count faces of a rotation system and verify Euler's formula per
/// connected component (v - e + f = 1 + c with the outer face shared...
/// here each component embeds in its own sphere: v - e + f = 2c when faces
/// are counted per component).
pub fn check_euler(g: &SmallGraph, rotation: &Rotation) -> bool {
    // per component with edges: v - e + f = 2 (isolated vertices ignored)
    let mut comps = 0usize;
    let mut verts = 0usize;
    let mut seen = vec![false; g.n];
    for s in 0..g.n {
        if !seen[s] && g.degree(s) > 0 {
            comps += 1;
            let mask = g.component_mask(s, (!0u16).checked_shr(16 - g.n as u32).unwrap_or(!0));
            for v in 0..g.n {
                if mask & (1 << v) != 0 {
                    seen[v] = true;
                    verts += 1;
                }
            }
        }
    }
    let f = face_count(g, rotation);
    verts as i64 - g.edge_count() as i64 + f as i64 == 2 * comps as i64
}

pub fn face_count(g: &SmallGraph, rotation: &Rotation) -> usize {
    faces_of_rotation(g, rotation).len()
}

/// Face walks of a rotation system: darts (u, v) with next dart = (v, w)
/// where w follows u in the rotation at v.
pub fn faces_of_rotation(g: &SmallGraph, rotation: &Rotation) -> Vec<Vec<(usize, usize)>> {
    let mut next_idx = vec![std::collections::HashMap::new(); g.n];
    for v in 0..g.n {
        let rot = &rotation[v];
        for (i, &u) in rot.iter().enumerate() {
            next_idx[v].insert(u, rot[(i + 1) % rot.len()]);
        }
    }
    let mut visited = std::collections::HashSet::new();
    let mut faces = Vec::new();
    for u in 0..g.n {
        for v in g.neighbors(u) {
            if visited.contains(&(u, v)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut b) = (u, v);
            loop {
                face.push((a, b));
                visited.insert((a, b));
                let w = next_idx[b][&a];
                a = b;
                b = w;
                if (a, b) == (u, v) {
                    break;
                }
            }
            faces.push(face);
        }
    }
    faces
}

// ---------------------------------------------------------------------------
// Biconnected components
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Block {
    pub edges: Vec<(usize, usize)>,
}

impl Block {
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

/// Biconnected components via the classic lowpoint edge-stack DFS.
pub fn blocks(g: &SmallGraph) -> Vec<Block> {
    struct Dfs<'a> {
        g: &'a SmallGraph,
        num: Vec<usize>,
        low: Vec<usize>,
        counter: usize,
        stack: Vec<(usize, usize)>,
        out: Vec<Block>,
    }
    impl Dfs<'_> {
        fn visit(&mut self, u: usize, parent: Option<usize>) {
            self.counter += 1;
            self.num[u] = self.counter;
            self.low[u] = self.counter;
            for v in self.g.neighbors(u) {
                if Some(v) == parent {
                    continue;
                }
                if self.num[v] == 0 {
                    self.stack.push((u, v));
                    self.visit(v, Some(u));
                    self.low[u] = self.low[u].min(self.low[v]);
                    if self.low[v] >= self.num[u] {
                        // u is a cut vertex (or root): pop one block
                        let mut edges = Vec::new();
                        while let Some(&top) = self.stack.last() {
                            self.stack.pop();
                            edges.push(top);
                            if top == (u, v) {
                                break;
                            }
                        }
                        self.out.push(Block { edges });
                    }
                } else if self.num[v] < self.num[u] {
                    self.stack.push((u, v));
                    self.low[u] = self.low[u].min(self.num[v]);
                }
            }
        }
    }
    let mut dfs = Dfs {
        g,
        num: vec![0; g.n],
        low: vec![0; g.n],
        counter: 0,
        stack: Vec::new(),
        out: Vec::new(),
    };
    for s in 0..g.n {
        if dfs.num[s] == 0 {
            dfs.visit(s, None);
        }
    }
    dfs.out
}

// ---------------------------------------------------------------------------
// DMP embedding of a biconnected block
// ---------------------------------------------------------------------------

fn embed_block(g: &SmallGraph, block: &Block) -> Option<Rotation> {
    let verts = block.vertices();
    if block.edges.len() == 1 {
        let (u, v) = block.edges[0];
        let mut rot: Rotation = vec![Vec::new(); g.n];
        rot[u].push(v);
        rot[v].push(u);
        return Some(rot);
    }
    // adjacency restricted to the block
    let mut sub = SmallGraph::empty(g.n);
    for &(u, v) in &block.edges {
        sub.add_edge(u, v);
    }

    // initial cycle by walking from any vertex
    let cycle = find_cycle(&sub, verts[0])?;
    let mut embedded = SmallGraph::empty(g.n);
    // faces as vertex cycles (valid in a biconnected simple graph)
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for w in cycle.windows(2) {
        embedded.add_edge(w[0], w[1]);
    }
    embedded.add_edge(cycle[0], *cycle.last().unwrap());
    faces.push(cycle.clone());
    faces.push(cycle.iter().rev().copied().collect());

    loop {
        let frags = fragments(&sub, &embedded, g.n);
        if frags.is_empty() {
            break;
        }
        // admissible faces per fragment; embed the most constrained one
        let mut chosen: Option<(usize, Vec<usize>)> = None;
        for (fi, frag) in frags.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attachments.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            if admissible.is_empty() {
                return None;
            }
            if chosen
                .as_ref()
                .is_none_or(|(_, adm)| admissible.len() < adm.len())
            {
                chosen = Some((fi, admissible));
            }
        }
        let (fi, admissible) = chosen.unwrap();
        let frag = &frags[fi];
        let path = frag.alpha_path();
        let face_idx = admissible[0];
        // embed path into the face, splitting it in two
        let face = faces.swap_remove(face_idx);
        let a = *path.first().unwrap();
        let b = *path.last().unwrap();
        let ia = face.iter().position(|&x| x == a).unwrap();
        let ib = face.iter().position(|&x| x == b).unwrap();
        // walk the cycle from a to b both ways
        let mut side1 = Vec::new();
        let mut i = ia;
        loop {
            side1.push(face[i]);
            if i == ib {
                break;
            }
            i = (i + 1) % face.len();
        }
        let mut side2 = Vec::new();
        let mut i = ib;
        loop {
            side2.push(face[i]);
            if i == ia {
                break;
            }
            i = (i + 1) % face.len();
        }
        // new faces: side1 + reversed interior, side2 + interior
        let interior: Vec<usize> = path[1..path.len() - 1].to_vec();
        let mut f1 = side1;
        f1.extend(interior.iter().rev());
        let mut f2 = side2;
        f2.extend(interior.iter());
        faces.push(f1);
        faces.push(f2);
        for w in path.windows(2) {
            embedded.add_edge(w[0], w[1]);
        }
    }

    // rotation from faces: in face (... u, v, w ...), w follows u clockwise at v
    let mut rot: Rotation = vec![Vec::new(); g.n];
    let mut succ = vec![std::collections::HashMap::new(); g.n];
    for face in &faces {
        let k = face.len();
        for i in 0..k {
            let u = face[i];
            let v = face[(i + 1) % k];
            let w = face[(i + 2) % k];
            succ[v].insert(u, w);
        }
    }
    for &v in &verts {
        let first = sub.neighbors(v).next().unwrap();
        let mut order = vec![first];
        let mut cur = first;
        loop {
            let nxt = *succ[v].get(&cur)?;
            if nxt == first {
                break;
            }
            order.push(nxt);
            // malformed rotation (should not happen on valid embeddings)
            if order.len() > sub.degree(v) as usize {
                return None;
            }
            cur = nxt;
        }
        if order.len() != sub.degree(v) as usize {
            return None;
        }
        rot[v] = order;
    }
    Some(rot)
}

fn find_cycle(g: &SmallGraph, start: usize) -> Option<Vec<usize>> {
    // recursive DFS; the first back edge closes a cycle
    fn dfs(
        g: &SmallGraph,
        u: usize,
        parent: usize,
        seen: &mut Vec<bool>,
        path: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        seen[u] = true;
        path.push(u);
        for v in g.neighbors(u) {
            if v == parent {
                continue;
            }
            if seen[v] {
                if let Some(pos) = path.iter().position(|&x| x == v) {
                    return Some(path[pos..].to_vec());
                }
            } else if let Some(c) = dfs(g, v, u, seen, path) {
                return Some(c);
            }
        }
        path.pop();
        None
    }
    let mut seen = vec![false; g.n];
    let mut path = Vec::new();
    dfs(g, start, usize::MAX, &mut seen, &mut path)
}

struct Fragment {
    attachments: Vec<usize>,
    /// inner vertices (possibly empty for a chord)
    inner: Vec<usize>,
    /// representative edges for path extraction
    edges: Vec<(usize, usize)>,
}

impl Fragment {
    /// A path through the fragment between two distinct attachment points.
    fn alpha_path(&self) -> Vec<usize> {
        if self.inner.is_empty() {
            let (a, b) = self.edges[0];
            return vec![a, b];
        }
        // BFS from one attachment to another through inner vertices
        let a = self.attachments[0];
        let goal = self.attachments[1];
        let mut adj: std::collections::HashMap<usize, Vec<usize>> = Default::default();
        for &(u, v) in &self.edges {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let inner_set: std::collections::HashSet<usize> = self.inner.iter().copied().collect();
        let mut prev: std::collections::HashMap<usize, usize> = Default::default();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(a);
        while let Some(u) = queue.pop_front() {
            if u == goal {
                break;
            }
            for &v in adj.get(&u).into_iter().flatten() {
                if v != a && !prev.contains_key(&v) && (inner_set.contains(&v) || v == goal) {
                    prev.insert(v, u);
                    queue.push_back(v);
                }
            }
        }
        let mut path = vec![goal];
        let mut x = goal;
        while x != a {
            x = prev[&x];
            path.push(x);
        }
        path.reverse();
        path
    }
}

/// Fragments (bridges) of `sub` relative to the embedded subgraph:
/// chords between embedded vertices, and components of the unembedded
/// vertices together with their attachment edges.
fn fragments(sub: &SmallGraph, embedded: &SmallGraph, n: usize) -> Vec<Fragment> {
    let mut out = Vec::new();
    let emb_verts: u16 = {
        let mut m = 0u16;
        for v in 0..n {
            if embedded.degree(v) > 0 {
                m |= 1 << v;
            }
        }
        m
    };
    // chords
    for u in 0..n {
        if emb_verts & (1 << u) == 0 {
            continue;
        }
        for v in sub.neighbors(u) {
            if u < v && emb_verts & (1 << v) != 0 && !embedded.has_edge(u, v) {
                out.push(Fragment {
                    attachments: vec![u, v],
                    inner: Vec::new(),
                    edges: vec![(u, v)],
                });
            }
        }
    }
    // components of unembedded vertices
    let unemb: u16 = {
        let mut m = 0u16;
        for v in 0..n {
            if sub.degree(v) > 0 && emb_verts & (1 << v) == 0 {
                m |= 1 << v;
            }
        }
        m
    };
    let mut remaining = unemb;
    while remaining != 0 {
        let s = remaining.trailing_zeros() as usize;
        let comp = sub.component_mask(s, unemb);
        remaining &= !comp;
        let mut attachments = Vec::new();
        let mut edges = Vec::new();
        let mut inner = Vec::new();
        for v in 0..n {
            if comp & (1 << v) == 0 {
                continue;
            }
            inner.push(v);
            for w in sub.neighbors(v) {
                if comp & (1 << w) != 0 {
                    if v < w {
                        edges.push((v, w));
                    }
                } else {
                    edges.push((v, w));
                    if !attachments.contains(&w) {
                        attachments.push(w);
                    }
                }
            }
        }
        attachments.sort_unstable();
        out.push(Fragment {
            attachments,
            inner,
            edges,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> SmallGraph {
        let mut g = SmallGraph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    fn k33() -> SmallGraph {
        let mut g = SmallGraph::empty(6);
        for u in 0..3 {
            for v in 3..6 {
                g.add_edge(u, v);
            }
        }
        g
    }

    fn octahedron() -> SmallGraph {
        let mut g = SmallGraph::empty(6);
        for u in 0..6 {
            for v in (u + 1)..6 {
                if v != u + 3 {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    #[test]
    fn classics() {
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
        assert!(!is_planar(&k33()));
        assert!(is_planar(&octahedron()));
        // K5 minus an edge is planar
        let mut k5m = complete(5);
        k5m.remove_edge(0, 1);
        assert!(is_planar(&k5m));
    }

    #[test]
    fn embedding_satisfies_euler() {
        let g = octahedron();
        let rot = planar_embedding(&g).unwrap();
        assert_eq!(face_count(&g, &rot), 8);
        for v in 0..6 {
            assert_eq!(rot[v].len(), 4);
        }
    }

    #[test]
    fn cut_vertex_graphs_embed() {
        // two triangles sharing a vertex
        let mut g = SmallGraph::empty(5);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        g.add_edge(0, 3);
        g.add_edge(3, 4);
        g.add_edge(4, 0);
        let rot = planar_embedding(&g).unwrap();
        assert!(check_euler(&g, &rot));
        assert_eq!(rot[0].len(), 4);
    }

    #[test]
    fn disconnected_graphs() {
        let mut g = SmallGraph::empty(8);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        g.add_edge(4, 5);
        g.add_edge(5, 6);
        g.add_edge(6, 4);
        assert!(is_planar(&g));
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut g = SmallGraph::empty(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(i + 5, (i + 2) % 5 + 5);
        }
        assert!(!is_planar(&g));
    }
}
