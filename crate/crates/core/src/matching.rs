//! Crossingless matchings of 2m points on a circle: the basis of the
//! relative skein module of the disk. Bases are enumerated once per size
//! and cached; |basis(2m)| is the m-th Catalan number.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Non-crossing perfect pairing of points 0..2m-1; `pair[i]` is the partner
/// of point i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching(pub Vec<u8>);

impl Matching {
    pub fn empty() -> Self {
        Matching(Vec::new())
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn is_noncrossing(&self) -> bool {
        let n = self.0.len();
        for i in 0..n {
            let j = self.0[i] as usize;
            if j == i || self.0[j] as usize != i || j >= n {
                return false;
            }
            for k in (i + 1)..j.max(i) {
                if k < j && i < j {
                    let l = self.0[k] as usize;
                    if !(k > i && k < j) {
                        continue;
                    }
                    if !(l > i && l < j) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub struct MatchingBasis {
    pub points: usize,
    pub list: Vec<Matching>,
    index: HashMap<Matching, u32>,
}

impl MatchingBasis {
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index_of(&self, m: &Matching) -> u32 {
        *self
            .index
            .get(m)
            .unwrap_or_else(|| panic!("matching {m:?} not in basis of {} points", self.points))
    }
}

static BASES: OnceLock<Mutex<HashMap<usize, Arc<MatchingBasis>>>> = OnceLock::new();

/// The cached basis for `points` boundary points (`points` even).
pub fn basis(points: usize) -> Arc<MatchingBasis> {
    assert!(points % 2 == 0);
    let cell = BASES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cell.lock().unwrap();
    map.entry(points)
        .or_insert_with(|| {
            let list = enumerate(points);
            let index = list
                .iter()
                .enumerate()
                .map(|(i, m)| (m.clone(), i as u32))
                .collect();
            Arc::new(MatchingBasis {
                points,
                list,
                index,
            })
        })
        .clone()
}

fn enumerate(points: usize) -> Vec<Matching> {
    if points == 0 {
        return vec![Matching::empty()];
    }
    let free: Vec<u8> = (0..points as u8).collect();
    let mut pairsets = Vec::new();
    recurse_top(&free, &mut Vec::new(), &mut pairsets);
    let mut out = Vec::new();
    for pairs in pairsets {
        let mut m = vec![0u8; points];
        for (a, b) in pairs {
            m[a as usize] = b;
            m[b as usize] = a;
        }
        out.push(Matching(m));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn recurse_top(free: &[u8], current: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
    if free.is_empty() {
        out.push(current.clone());
        return;
    }
    let first = free[0];
    for k in (1..free.len()).step_by(2) {
        let partner = free[k];
        let inside: Vec<u8> = free[1..k].to_vec();
        let outside: Vec<u8> = free[k + 1..].to_vec();
        let mut inner = Vec::new();
        recurse_top(&inside, &mut Vec::new(), &mut inner);
        let mut outer = Vec::new();
        recurse_top(&outside, &mut Vec::new(), &mut outer);
        for ins in &inner {
            for outs in &outer {
                let mut all = current.clone();
                all.push((first, partner));
                all.extend(ins.iter().copied());
                all.extend(outs.iter().copied());
                out.push(all);
            }
        }
    }
}

pub fn catalan(n: usize) -> u64 {
    let mut c: u64 = 1;
    for i in 0..n {
        c = c * 2 * (2 * i as u64 + 1) / (i as u64 + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_numbers() {
        let expect = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (n, &c) in expect.iter().enumerate() {
            assert_eq!(catalan(n), c);
        }
    }

    #[test]
    fn basis_sizes_match_catalan() {
        for m in 0..=8usize {
            let b = basis(2 * m);
            assert_eq!(b.len() as u64, catalan(m), "basis size at m={m}");
            for mat in &b.list {
                assert!(mat.is_noncrossing(), "{mat:?}");
            }
        }
    }

    #[test]
    fn six_points_give_five() {
        let b = basis(6);
        assert_eq!(b.len(), 5);
        for (i, m) in b.list.iter().enumerate() {
            assert_eq!(b.index_of(m) as usize, i);
        }
    }
}
