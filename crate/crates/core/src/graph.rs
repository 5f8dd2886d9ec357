//! Small simple graphs on up to 16 vertices with bitmask adjacency, plus a
//! canonical certificate under abstract isomorphism.
//!
//! The certificate is the lexicographically greatest upper-triangle bit
//! string in column-major order over all vertex relabelings, packed into a
//! u128 (high bit first). A labeled graph is "canonical" when the identity
//! labeling attains the maximum; prefixes of canonical labelings are
//! canonical for their induced subgraphs, which is what the orderly
//! generator in [`crate::polyhedra`] relies on.

pub const MAX_N: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SmallGraph {
    pub n: usize,
    adj: [u16; MAX_N],
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_N);
        SmallGraph { n, adj: [0; MAX_N] }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    pub fn degree(&self, u: usize) -> u32 {
        self.adj[u].count_ones()
    }

    pub fn neighbors_mask(&self, u: usize) -> u16 {
        self.adj[u]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter(self.adj[u])
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u) as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen: u16 = 1;
        let mut frontier: u16 = 1;
        while frontier != 0 {
            let mut next = 0u16;
            for v in BitIter(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize == self.n
    }

    /// Connected component containing `start`, as a bitmask, restricted to
    /// the vertex set `within`.
    pub fn component_mask(&self, start: usize, within: u16) -> u16 {
        let mut seen = (1u16 << start) & within;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u16;
            for v in BitIter(frontier) {
                next |= self.adj[v] & within;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    pub fn relabeled(&self, perm: &[usize]) -> SmallGraph {
        let mut g = SmallGraph::empty(self.n);
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if u < v {
                    g.add_edge(perm[u], perm[v]);
                }
            }
        }
        g
    }

    /// Upper-triangle bits in column-major order, packed high-bit-first.
    pub fn colex_string(&self) -> u128 {
        let mut bits: u128 = 0;
        let mut pos = 0u32;
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    bits |= 1u128 << (127 - pos);
                }
                pos += 1;
            }
        }
        bits
    }

    /// Greatest colex string over all relabelings.
    pub fn canonical_cert(&self) -> u128 {
        let mut search = MaxSearch::new(self, self.colex_string());
        search.run(false);
        search.best
    }

    /// True iff the identity labeling attains the canonical certificate.
    /// Exits as soon as any relabeling strictly exceeds the identity.
    pub fn is_canonically_labeled(&self) -> bool {
        let mut search = MaxSearch::new(self, self.colex_string());
        !search.run(true)
    }
}

struct BitIter(u16);

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

/// Branch-and-bound over vertex placements. Seeded with the identity
/// string as the incumbent, it serves both as a maximizer (certificates)
/// and, with `stop_on_exceed`, as a canonicity test that returns whether
/// any labeling strictly beats the identity.
struct MaxSearch<'a> {
    g: &'a SmallGraph,
    placed: [usize; MAX_N],
    best: u128,
    exceeded: bool,
    stop_on_exceed: bool,
}

impl<'a> MaxSearch<'a> {
    fn new(g: &'a SmallGraph, seed: u128) -> Self {
        MaxSearch {
            g,
            placed: [0; MAX_N],
            best: seed,
            exceeded: false,
            stop_on_exceed: false,
        }
    }

    /// Returns true iff some labeling strictly exceeded the seed.
    fn run(&mut self, stop_on_exceed: bool) -> bool {
        self.stop_on_exceed = stop_on_exceed;
        self.rec(0, 0, 0, 0);
        self.exceeded
    }

    fn rec(&mut self, depth: usize, used: u16, bits: u128, pos: u32) {
        if self.exceeded && self.stop_on_exceed {
            return;
        }
        if depth == self.g.n {
            if bits > self.best {
                self.best = bits;
                self.exceeded = true;
            }
            return;
        }
        for v in 0..self.g.n {
            if used & (1 << v) != 0 {
                continue;
            }
            let mut nb = bits;
            let mut np = pos;
            for i in 0..depth {
                if self.g.has_edge(self.placed[i], v) {
                    nb |= 1u128 << (127 - np);
                }
                np += 1;
            }
            if np > 0 {
                let mask = !0u128 << (128 - np);
                let cur = nb & mask;
                let best_prefix = self.best & mask;
                // a prefix below the incumbent can never catch up
                if cur < best_prefix {
                    continue;
                }
                if cur > best_prefix {
                    self.exceeded = true;
                    if self.stop_on_exceed {
                        return;
                    }
                    self.best = cur;
                }
            }
            self.placed[depth] = v;
            self.rec(depth + 1, used | (1 << v), nb, np);
            if self.exceeded && self.stop_on_exceed {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> SmallGraph {
        let mut g = SmallGraph::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    #[test]
    fn cert_is_isomorphism_invariant() {
        let g = cycle(6);
        let perm = [3usize, 5, 0, 2, 4, 1];
        let h = g.relabeled(&perm);
        assert_eq!(g.canonical_cert(), h.canonical_cert());
        // a different graph gets a different certificate
        let mut g2 = cycle(6);
        g2.add_edge(0, 3);
        assert_ne!(g.canonical_cert(), g2.canonical_cert());
    }

    #[test]
    fn canonical_labeling_detection() {
        let mut octa = SmallGraph::empty(6);
        // octahedron: everyone connected except 3 antipodal pairs
        for u in 0..6 {
            for v in (u + 1)..6 {
                if v != u + 3 {
                    octa.add_edge(u, v);
                }
            }
        }
        let cert = octa.canonical_cert();
        let canon_str = octa.colex_string();
        // relabel so the identity is no longer canonical unless it already is
        assert!(cert >= canon_str);
    }

    #[test]
    fn connectivity() {
        let mut g = SmallGraph::empty(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        assert!(!g.is_connected());
        g.add_edge(1, 2);
        assert!(g.is_connected());
        assert_eq!(g.component_mask(0, 0b1111), 0b1111);
        assert_eq!(g.component_mask(0, 0b0011), 0b0011);
    }
}
