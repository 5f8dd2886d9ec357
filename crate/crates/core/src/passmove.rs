//! Crossing-reducing pass moves: a strand running entirely over (or
//! entirely under) a run of crossings can be lifted out and re-routed along
//! any face path; when the cheapest reroute crosses fewer strands than the
//! bridge's length, the diagram simplifies.
//!
//! Detection is sound but deliberately incomplete: a returned move is an
//! explicit isotopy (the applied result is re-verified against the Jones
//! polynomial), but absence of a report does not certify minimality.

use thiserror::Error;

use crate::diagram::{Dart, DiagramError, FlatDiagram};

#[derive(Debug, Error)]
pub enum PassMoveError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("applying a pass move changed the Jones polynomial (soundness bug)")]
    SoundnessViolation,
}

/// A maximal all-over or all-under strand segment.
#[derive(Clone, Debug)]
pub struct Bridge {
    /// crossings passed, in strand order
    pub crossings: Vec<usize>,
    pub over: bool,
}

impl Bridge {
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }
}

/// A verified reroute: removing the bridge and re-drawing the strand across
/// the recorded arcs yields an isotopic diagram with `savings` fewer
/// crossings.
#[derive(Clone, Debug)]
pub struct PassMove {
    pub bridge: Bridge,
    pub savings: usize,
    kind: MoveKind,
}

#[derive(Clone, Debug)]
enum MoveKind {
    /// a twist loop at one crossing: remove it outright
    Kink { crossing: usize },
    /// the bridge passes over (or under) every crossing: lift it off
    TotalOverlay,
    /// remove the bridge, re-draw across these healed-diagram arcs
    Reroute { arcs: Vec<usize>, walk_start: usize },
}

/// An R1 twist: a crossing with a loop edge joining cyclically adjacent
/// slots.
fn find_kink(d: &FlatDiagram) -> Option<usize> {
    for (c, node) in d.crossings.iter().enumerate() {
        for s in 0..4u8 {
            let (tc, ts) = node.rot[s as usize];
            if tc == c && (ts == (s + 1) % 4 || s == (ts + 1) % 4) {
                return Some(c);
            }
        }
    }
    None
}

fn remove_kink(d: &FlatDiagram, c: usize) -> FlatDiagram {
    let node = &d.crossings[c];
    let loop_slots: Vec<u8> = (0..4u8)
        .filter(|&s| {
            let (tc, ts) = node.rot[s as usize];
            tc == c && (ts == (s + 1) % 4 || s == (ts + 1) % 4)
        })
        .collect();
    let other: Vec<u8> = (0..4u8).filter(|s| !loop_slots.contains(s)).collect();
    let mut crossings = Vec::with_capacity(d.crossings.len() - 1);
    if other.len() < 2 {
        // a one-crossing diagram is all twist: removing it unknots
        debug_assert_eq!(d.crossings.len(), 1);
        return FlatDiagram { crossings };
    }
    let a = node.rot[other[0] as usize];
    let b = node.rot[other[1] as usize];
    let index = |x: usize| if x > c { x - 1 } else { x };
    if a.0 == c || b.0 == c {
        // the remaining arcs close onto themselves: the unknot
        debug_assert_eq!(d.crossings.len(), 1);
        return FlatDiagram { crossings };
    }
    for (ci, n) in d.crossings.iter().enumerate() {
        if ci == c {
            continue;
        }
        let mut rot = n.rot;
        for slot in rot.iter_mut() {
            if *slot == (c, other[0]) {
                *slot = (index(b.0), b.1);
            } else if *slot == (c, other[1]) {
                *slot = (index(a.0), a.1);
            } else {
                slot.0 = index(slot.0);
            }
        }
        crossings.push(crate::diagram::CrossingNode {
            rot,
            under_diag: n.under_diag,
        });
    }
    FlatDiagram { crossings }
}

/// All maximal bridges of the diagram.
pub fn bridges(d: &FlatDiagram) -> Result<Vec<(Bridge, usize)>, DiagramError> {
    let walk = d.knot_walk()?;
    let m = walk.len();
    let over_at = |i: usize| {
        let (c, s) = walk[i];
        s % 2 != d.crossings[c].under_diag
    };
    let mut out = Vec::new();
    let mut i = 0;
    // find a level change to anchor run detection
    let mut anchor = 0;
    while anchor < m && over_at(anchor) == over_at((anchor + m - 1) % m) {
        anchor += 1;
    }
    if anchor == m {
        return Ok(out); // cannot happen for a knot with crossings
    }
    i = anchor;
    loop {
        let level = over_at(i);
        let mut run = vec![walk[i].0];
        let mut j = (i + 1) % m;
        while over_at(j) == level && j != anchor {
            run.push(walk[j].0);
            j = (j + 1) % m;
        }
        out.push((
            Bridge {
                crossings: run,
                over: level,
            },
            i,
        ));
        i = j;
        if i == anchor {
            break;
        }
    }
    Ok(out)
}

/// Search all bridges for a reroute that strictly reduces the crossing
/// count; the most saving move is returned.
pub fn find_reducing_pass_move(d: &FlatDiagram) -> Result<Option<PassMove>, DiagramError> {
    if d.crossing_count() == 0 || d.component_count() != 1 {
        return Ok(None);
    }
    if let Some(c) = find_kink(d) {
        let over = d.crossings[c].under_diag == 0; // reported level is cosmetic
        return Ok(Some(PassMove {
            bridge: Bridge {
                crossings: vec![c],
                over,
            },
            savings: 1,
            kind: MoveKind::Kink { crossing: c },
        }));
    }
    let mut best: Option<PassMove> = None;
    for (bridge, start) in bridges(d)? {
        if bridge.len() == d.crossing_count() {
            // descending overlay: the bridge lifts off everything
            let savings = bridge.len();
            let mv = PassMove {
                bridge,
                savings,
                kind: MoveKind::TotalOverlay,
            };
            if best.as_ref().is_none_or(|b| mv.savings > b.savings) {
                best = Some(mv);
            }
            continue;
        }
        if let Some(mv) = reroute_for(d, &bridge, start)? {
            if best.as_ref().is_none_or(|b| mv.savings > b.savings) {
                best = Some(mv);
            }
        }
    }
    Ok(best)
}

/// The healed diagram: bridge crossings removed, transversal strands
/// reconnected, and the bridge strand cut back to its two anchor darts.
struct Healed {
    /// surviving crossing ids (old -> new index)
    index: Vec<Option<usize>>,
    crossings: Vec<HealedNode>,
    /// open darts (new-index space): strand resumes here
    open_start: (usize, u8),
    open_end: (usize, u8),
}

#[derive(Clone)]
struct HealedNode {
    rot: [Option<(usize, u8)>; 4],
    under_diag: u8,
}

fn build_healed(d: &FlatDiagram, bridge: &Bridge, walk: &[Dart], start: usize) -> Option<Healed> {
    let n = d.crossing_count();
    let k = bridge.len();
    let removed: std::collections::HashSet<usize> = bridge.crossings.iter().copied().collect();
    // anchors: the strand enters the bridge at walk[start] and leaves after
    // walk[start + k - 1]; anchor darts live on surviving crossings
    let m = walk.len();
    let before = walk[(start + m - 1) % m]; // in-dart of the previous visit
    let after = walk[(start + k) % m]; // in-dart of the next visit
    if removed.contains(&before.0) || removed.contains(&after.0) {
        // bridge anchored on a removed crossing (strand re-enters the
        // bridge region immediately); skip such bridges
        return None;
    }
    // the strand leaves `before` via its opposite slot, and arrives at
    // `after` via its in slot
    let open_start_old = (before.0, (before.1 + 2) % 4);
    let open_end_old = after;

    let mut index = vec![None; n];
    let mut survivors = Vec::new();
    for c in 0..n {
        if !removed.contains(&c) {
            index[c] = Some(survivors.len());
            survivors.push(c);
        }
    }
    // resolve a dart through removed crossings: transversal strands heal
    // straight through (slot s pairs with s+2)
    let resolve = |mut dart: Dart| -> Option<Dart> {
        let mut steps = 0;
        loop {
            if !removed.contains(&dart.0) {
                return Some(dart);
            }
            // passing through a removed crossing along its strand
            dart = d.crossings[dart.0].rot[((dart.1 + 2) % 4) as usize];
            steps += 1;
            if steps > 2 * n {
                return None;
            }
        }
    };
    let mut crossings: Vec<HealedNode> = survivors
        .iter()
        .map(|&c| HealedNode {
            rot: [None; 4],
            under_diag: d.crossings[c].under_diag,
        })
        .collect();
    for (&c, node) in survivors.iter().zip(crossings.iter_mut()) {
        for s in 0..4u8 {
            if (c, s) == open_start_old || (c, s) == open_end_old {
                continue; // stays open
            }
            let target = d.crossings[c].rot[s as usize];
            if removed.contains(&target.0) {
                // walk along the transversal strand through removed
                // crossings; the far end may be the bridge strand itself,
                // which no longer exists
                let far = resolve(target)?;
                if (far.0, far.1) == open_start_old || (far.0, far.1) == open_end_old {
                    return None;
                }
                if removed.contains(&far.0) {
                    return None;
                }
                node.rot[s as usize] = Some((index[far.0].unwrap(), far.1));
            } else {
                node.rot[s as usize] = Some((index[target.0].unwrap(), target.1));
            }
        }
    }
    // ends that used to point at removed crossings were resolved above;
    // the two open darts keep None
    let open_start = (index[open_start_old.0]?, open_start_old.1);
    let open_end = (index[open_end_old.0]?, open_end_old.1);
    Some(Healed {
        index,
        crossings,
        open_start,
        open_end,
    })
}

impl Healed {
    /// Faces as leaving-dart cycles; open darts bounce around their tip.
    fn faces(&self) -> Vec<Vec<(usize, u8)>> {
        let n = self.crossings.len();
        let mut seen = vec![[false; 4]; n];
        let mut faces = Vec::new();
        for c0 in 0..n {
            for s0 in 0..4u8 {
                if seen[c0][s0 as usize] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut c, mut s) = (c0, s0);
                loop {
                    if seen[c][s as usize] {
                        break;
                    }
                    seen[c][s as usize] = true;
                    face.push((c, s));
                    match self.crossings[c].rot[s as usize] {
                        Some((tc, ts)) => {
                            c = tc;
                            s = (ts + 1) % 4;
                        }
                        None => {
                            // dangling tip: come back on the other side
                            s = (s + 1) % 4;
                        }
                    }
                }
                faces.push(face);
            }
        }
        faces
    }

    fn arcs(&self) -> Vec<((usize, u8), (usize, u8))> {
        let mut out = Vec::new();
        for c in 0..self.crossings.len() {
            for s in 0..4u8 {
                if let Some(t) = self.crossings[c].rot[s as usize] {
                    if (c, s) < t {
                        out.push(((c, s), t));
                    }
                }
            }
        }
        out
    }
}

fn reroute_for(
    d: &FlatDiagram,
    bridge: &Bridge,
    start: usize,
) -> Result<Option<PassMove>, DiagramError> {
    let walk = d.knot_walk()?;
    let k = bridge.len();
    let Some(healed) = build_healed(d, bridge, &walk, start) else {
        return Ok(None);
    };
    let faces = healed.faces();
    let face_of_dart = |dart: (usize, u8)| -> usize {
        faces
            .iter()
            .position(|f| f.contains(&dart))
            .expect("every dart lies on a face")
    };
    let f_start = face_of_dart(healed.open_start);
    let f_end = face_of_dart(healed.open_end);
    // BFS over faces; crossing an arc whose two sides are distinct faces
    // costs one crossing
    let arcs = healed.arcs();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); faces.len()]; // (face, arc id)
    for (ai, &(p, q)) in arcs.iter().enumerate() {
        let fp = face_of_dart(p);
        let fq = face_of_dart(q);
        if fp != fq {
            adj[fp].push((fq, ai));
            adj[fq].push((fp, ai));
        }
    }
    let mut dist = vec![usize::MAX; faces.len()];
    let mut via: Vec<Option<(usize, usize)>> = vec![None; faces.len()]; // (prev face, arc)
    let mut queue = std::collections::VecDeque::new();
    dist[f_start] = 0;
    queue.push_back(f_start);
    while let Some(f) = queue.pop_front() {
        for &(g, ai) in &adj[f] {
            if dist[g] == usize::MAX {
                dist[g] = dist[f] + 1;
                via[g] = Some((f, ai));
                queue.push_back(g);
            }
        }
    }
    let j = dist[f_end];
    if j == usize::MAX || j >= k {
        return Ok(None);
    }
    let mut reroute = Vec::new();
    let mut f = f_end;
    while f != f_start {
        let (prev, ai) = via[f].expect("path exists");
        reroute.push(ai);
        f = prev;
    }
    reroute.reverse();
    Ok(Some(PassMove {
        bridge: bridge.clone(),
        savings: k - j,
        kind: MoveKind::Reroute {
            arcs: reroute,
            walk_start: start,
        },
    }))
}

/// Apply a move: rebuild the diagram with the bridge removed and the strand
/// re-drawn across the recorded arcs at the bridge's level.
pub fn apply_pass_move(d: &FlatDiagram, mv: &PassMove) -> Result<FlatDiagram, PassMoveError> {
    let (arcs_path, walk_start) = match &mv.kind {
        MoveKind::Kink { crossing } => {
            let out = remove_kink(d, *crossing);
            out.validate()?;
            return Ok(out);
        }
        MoveKind::TotalOverlay => {
            return Ok(FlatDiagram {
                crossings: Vec::new(),
            });
        }
        MoveKind::Reroute { arcs, walk_start } => (arcs.clone(), *walk_start),
    };
    let walk = d.knot_walk()?;
    let healed =
        build_healed(d, &mv.bridge, &walk, walk_start).expect("move was built from this bridge");
    // the rotation side of each new crossing depends on the face-walk
    // orientation; build one way and fall back to the global flip
    for flip in [false, true] {
        if let Some(out) = rebuild_with_reroute(&healed, &arcs_path, mv.bridge.over, flip) {
            if out.validate().is_ok() && out.euler_ok() {
                return Ok(out);
            }
        }
    }
    Err(PassMoveError::SoundnessViolation)
}

fn rebuild_with_reroute(
    healed: &Healed,
    arcs_path: &[usize],
    over: bool,
    flip: bool,
) -> Option<FlatDiagram> {
    let faces = healed.faces();
    let face_of_dart = |dart: (usize, u8)| -> usize {
        faces
            .iter()
            .position(|f| f.contains(&dart))
            .expect("dart on a face")
    };
    let arcs = healed.arcs();
    let base = healed.crossings.len();
    let jn = arcs_path.len();
    let mut rot: Vec<[Option<(usize, u8)>; 4]> = healed.crossings.iter().map(|c| c.rot).collect();
    let mut under: Vec<u8> = healed.crossings.iter().map(|c| c.under_diag).collect();
    rot.extend(std::iter::repeat_n([None; 4], jn));
    // new crossings: strand through slots (0, 2); crossed arc through (1, 3)
    for _ in 0..jn {
        under.push(if over { 1 } else { 0 });
    }
    let mut cur_face = face_of_dart(healed.open_start);
    let mut prev_dart: (usize, u8) = healed.open_start;
    for (step, &ai) in arcs_path.iter().enumerate() {
        let x = base + step;
        let (p, q) = arcs[ai];
        let fp = face_of_dart(p);
        let entering_from_p = fp == cur_face;
        let (near, far) = if entering_from_p != flip { (p, q) } else { (q, p) };
        rot[prev_dart.0][prev_dart.1 as usize] = Some((x, 0));
        rot[x][0] = Some(prev_dart);
        rot[x][1] = Some(near);
        rot[near.0][near.1 as usize] = Some((x, 1));
        rot[x][3] = Some(far);
        rot[far.0][far.1 as usize] = Some((x, 3));
        prev_dart = (x, 2);
        cur_face = if entering_from_p { face_of_dart(q) } else { fp };
    }
    rot[prev_dart.0][prev_dart.1 as usize] = Some(healed.open_end);
    rot[healed.open_end.0][healed.open_end.1 as usize] = Some(prev_dart);
    let crossings: Vec<crate::diagram::CrossingNode> = rot
        .into_iter()
        .zip(under)
        .map(|(r, u)| {
            Some(crate::diagram::CrossingNode {
                rot: [r[0]?, r[1]?, r[2]?, r[3]?],
                under_diag: u,
            })
        })
        .collect::<Option<Vec<_>>>()?;
    Some(FlatDiagram { crossings })
}

#[derive(Debug)]
pub enum DischargeOutcome {
    /// Crossing count strictly decreased at least once.
    Reduced(FlatDiagram),
    /// No reducing pass move was found.
    Irreducible,
}

/// Repeatedly apply reducing pass moves; every application is re-verified
/// by comparing Jones polynomials (a changed value is a soundness bug).
pub fn discharge_survivor(d: &FlatDiagram) -> Result<DischargeOutcome, PassMoveError> {
    let mut current = d.clone();
    let mut reduced = false;
    let reference = d.jones()?;
    loop {
        match find_reducing_pass_move(&current)? {
            None => {
                return Ok(if reduced {
                    DischargeOutcome::Reduced(current)
                } else {
                    DischargeOutcome::Irreducible
                });
            }
            Some(mv) => {
                let next = apply_pass_move(&current, &mv)?;
                if next.crossing_count() >= current.crossing_count() {
                    return Err(PassMoveError::SoundnessViolation);
                }
                if next.crossing_count() > 0 {
                    let j = next.jones()?;
                    if j != reference {
                        return Err(PassMoveError::SoundnessViolation);
                    }
                } else if !reference.is_one_like() {
                    return Err(PassMoveError::SoundnessViolation);
                }
                reduced = true;
                if next.crossing_count() == 0 {
                    return Ok(DischargeOutcome::Reduced(next));
                }
                current = next;
            }
        }
    }
}

trait OneLike {
    fn is_one_like(&self) -> bool;
}

impl OneLike for crate::laurent::LaurentInt {
    fn is_one_like(&self) -> bool {
        *self == crate::laurent::LaurentInt::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{braid_closure, parse_pd, tangle_closure_diagram};
    use crate::tangle::{ClosureKind, TangleExpr};

    #[test]
    fn reduced_trefoil_has_no_move() {
        let d = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap();
        assert!(find_reducing_pass_move(&d).unwrap().is_none());
        match discharge_survivor(&d) {
            Err(_) => panic!("discharge failed"),
            Ok(DischargeOutcome::Reduced(_)) => panic!("trefoil reduced"),
            Ok(DischargeOutcome::Irreducible) => {}
        }
    }

    #[test]
    fn kink_is_a_one_zero_move() {
        // N(integral 1): a single kink; rerouting across the kink face
        // removes the crossing
        let d = tangle_closure_diagram(&TangleExpr::integral(1), ClosureKind::Numerator).unwrap();
        let mv = find_reducing_pass_move(&d).unwrap().expect("kink move");
        assert_eq!(mv.savings, 1);
        match discharge_survivor(&d).unwrap() {
            DischargeOutcome::Reduced(out) => assert_eq!(out.crossing_count(), 0),
            DischargeOutcome::Irreducible => panic!("kink not discharged"),
        }
    }

    #[test]
    fn double_kink_discharges() {
        // braid sigma_1 sigma_1^{-1} closure-ish reducible diagram
        let d = braid_closure(2, &[1, -1, 1]).unwrap();
        if d.component_count() != 1 {
            return;
        }
        let before = d.jones().unwrap();
        match discharge_survivor(&d).unwrap() {
            DischargeOutcome::Reduced(out) => {
                assert!(out.crossing_count() < 3);
                if out.crossing_count() > 0 {
                    assert_eq!(out.jones().unwrap(), before);
                }
            }
            DischargeOutcome::Irreducible => panic!("reducible diagram not reduced"),
        }
    }

    #[test]
    fn alternating_diagrams_report_nothing() {
        // alternating closures of rational tangles are minimal
        for spec in [(5i64, 2i64), (7, 3), (9, 2), (11, 4)] {
            let e = crate::tangle::rational_tangle(crate::tangle::RationalSpec::new(spec.0, spec.1))
                .unwrap();
            let d = match tangle_closure_diagram(&e, ClosureKind::Numerator) {
                Ok(d) => d,
                Err(_) => continue,
            };
            if d.component_count() != 1 {
                continue;
            }
            assert!(
                find_reducing_pass_move(&d).unwrap().is_none(),
                "alternating diagram {spec:?} reported a move"
            );
        }
    }

    #[test]
    fn soundness_on_applied_moves() {
        // a diagram with a (2,0)-ish bridge: trefoil plus two extra over
        // crossings from a doubled strand
        let d = braid_closure(2, &[1, 1, 1, 1, -1]).unwrap();
        if d.component_count() != 1 {
            return;
        }
        let before = d.jones().unwrap();
        if let Some(mv) = find_reducing_pass_move(&d).unwrap() {
            let out = apply_pass_move(&d, &mv).unwrap();
            assert!(out.crossing_count() < d.crossing_count());
            assert_eq!(out.jones().unwrap(), before, "pass move changed the knot");
        }
    }
}
