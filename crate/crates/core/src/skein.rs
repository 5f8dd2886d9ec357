//! Divide-and-conquer Kauffman bracket contraction over crossingless
//! matching bases, with a brute-force state-sum oracle, scalar determinant
//! evaluation at t = -1, multiplication accounting, and the Jones
//! normalization.
//!
//! Contraction works on any 4-regular rotation system ("shadow"): Conway
//! polyhedra carrying algebraic tangles and parsed flat diagrams carrying
//! single crossings both compile to the same input. The structural part of
//! every step (which boundary points glue, how matchings merge, how many
//! loops close) is independent of the inserted coefficients, so it is
//! precomputed per shadow into transition tables and reused across all
//! assignments.


use thiserror::Error;

use crate::laurent::{exact_sqrt, DetValue, GradedBracket, Int, LaurentInt};
use crate::matching::{basis, Matching, MatchingBasis};
use crate::polyhedra::{ContractionOrder, PlanarQuartic};
use crate::tangle::{ClosedBracket, EndpointPairing};

/// Hard cap on boundary points (basis size C_8 = 1430).
pub const MAX_BOUNDARY: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SkeinError {
    #[error("boundary size {0} exceeds the matching cap {MAX_BOUNDARY}")]
    BoundaryCap(usize),
    #[error("partial tangle boundary is not a single circle")]
    NonDisk,
    #[error("diagram has {0} components, expected a knot")]
    MultiComponent(usize),
    #[error("grading violation: {0}")]
    Grading(String),
    #[error("determinant is not an integer (norm^2 = {0})")]
    NonIntegerDeterminant(String),
}

// ---------------------------------------------------------------------------
// Shadows: 4-regular rotation systems with NW corners.
// ---------------------------------------------------------------------------

/// Rotation system of a 4-valent diagram skeleton. `rot[u][s]` is the dart
/// glued to slot `s` of vertex `u` (loops and parallel edges allowed).
#[derive(Clone, Debug)]
pub struct Shadow {
    pub rot: Vec<[(usize, u8); 4]>,
    pub nw: Vec<u8>,
}

impl Shadow {
    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn from_polyhedron(p: &PlanarQuartic) -> Shadow {
        let n = p.vertex_count();
        let mut rot = vec![[(0usize, 0u8); 4]; n];
        for u in 0..n {
            for (s, &v) in p.rotation[u].iter().enumerate() {
                rot[u][s] = (v, p.slot_of(v, u));
            }
        }
        Shadow {
            rot,
            nw: p.nw_corner.clone(),
        }
    }

    /// Corner `c` (0=NW, 1=NE, 2=SE, 3=SW) of vertex `u` as a rotation slot.
    pub fn corner_slot(&self, u: usize, c: u8) -> u8 {
        (self.nw[u] + c) % 4
    }

    /// Strand components when each vertex is replaced by the given
    /// endpoint pairing (in its corner frame).
    pub fn component_count(&self, pairings: &[EndpointPairing]) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![[false; 4]; n];
        let mut components = 0;
        for v0 in 0..n {
            for s0 in 0..4u8 {
                if seen[v0][s0 as usize] {
                    continue;
                }
                components += 1;
                let (mut v, mut s) = (v0, s0);
                loop {
                    if seen[v][s as usize] {
                        break;
                    }
                    seen[v][s as usize] = true;
                    let s2 = pairing_partner(self, v, s, pairings[v]);
                    seen[v][s2 as usize] = true;
                    let (nv, ns) = self.rot[v][s2 as usize];
                    v = nv;
                    s = ns;
                }
            }
        }
        components
    }
}

fn pairing_partner(shadow: &Shadow, v: usize, slot: u8, pairing: EndpointPairing) -> u8 {
    // corner index of this slot
    let c = (slot + 4 - shadow.nw[v]) % 4;
    let c2 = match pairing {
        // corners: 0=NW, 1=NE, 2=SE, 3=SW
        EndpointPairing::ZeroType => [1, 0, 3, 2][c as usize],
        EndpointPairing::InftyType => [3, 2, 1, 0][c as usize],
        EndpointPairing::CrossType => [2, 3, 0, 1][c as usize],
    };
    shadow.corner_slot(v, c2)
}

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

/// Ring of contraction coefficients: the graded polynomial form for exact
/// brackets and the scalar Gaussian form for the determinant pretest share
/// one kernel.
pub trait SkeinScalar: Clone + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn add_assign(&mut self, other: &Self);
    /// Multiply by the loop factor once.
    fn times_loop(&self) -> Self;
}

/// `A^shift * f(t)` with the shift kept canonical in 0..=3 by folding
/// `A^4 = t^{-1}`. Coefficients of one matching always agree in the shift;
/// a mismatch on addition is a grading bug and panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCoeff {
    pub shift: i64,
    pub poly: LaurentInt,
}

impl GradedCoeff {
    pub fn new(shift: i64, poly: LaurentInt) -> Self {
        if poly.is_zero() {
            return GradedCoeff {
                shift: 0,
                poly,
            };
        }
        let r = shift.rem_euclid(4);
        let folds = (shift - r) / 4;
        GradedCoeff {
            shift: r,
            poly: poly.shifted(-folds),
        }
    }

    pub fn one() -> Self {
        GradedCoeff {
            shift: 0,
            poly: LaurentInt::one(),
        }
    }

    pub fn to_closed(&self) -> ClosedBracket {
        ClosedBracket::normalize(self.shift, self.poly.clone())
    }

    /// The bracket pair of a tangle as contraction coefficients
    /// (infinity smoothing first).
    pub fn from_bracket(g: &GradedBracket) -> (GradedCoeff, GradedCoeff) {
        (
            GradedCoeff::new(g.shift + 2, g.p.clone()),
            GradedCoeff::new(g.shift, g.q.clone()),
        )
    }
}

impl SkeinScalar for GradedCoeff {
    fn zero() -> Self {
        GradedCoeff {
            shift: 0,
            poly: LaurentInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    fn mul(&self, other: &Self) -> Self {
        GradedCoeff::new(self.shift + other.shift, &self.poly * &other.poly)
    }

    fn add_assign(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.clone();
            return;
        }
        assert_eq!(
            self.shift, other.shift,
            "graded coefficients of one matching must share their shift"
        );
        self.poly = &self.poly + &other.poly;
        if self.poly.is_zero() {
            self.shift = 0;
        }
    }

    fn times_loop(&self) -> Self {
        // eps = -A^2 - A^{-2} = A^2 (-1 - t)
        let eps = LaurentInt::from_terms([(0, -1), (1, -1)]);
        GradedCoeff::new(self.shift + 2, &self.poly * &eps)
    }
}

impl SkeinScalar for DetValue {
    fn zero() -> Self {
        DetValue::zero()
    }

    fn is_zero(&self) -> bool {
        DetValue::is_zero(self)
    }

    fn mul(&self, other: &Self) -> Self {
        DetValue::mul(self, other)
    }

    fn add_assign(&mut self, other: &Self) {
        *self = DetValue::add(self, other);
    }

    fn times_loop(&self) -> Self {
        // eps vanishes at t = -1
        DetValue::zero()
    }
}

// ---------------------------------------------------------------------------
// Contraction plans
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PlanStep {
    pub vertex: usize,
    pub old_points: usize,
    pub new_points: usize,
    /// per old matching index, per smoothing (0 = infinity/a, 1 = zero/b):
    /// resulting matching index and closed-loop count
    pub transitions: Vec<[(u32, u8); 2]>,
}

/// Structural contraction data for one shadow and insertion order,
/// reusable across every coefficient assignment.
#[derive(Clone, Debug)]
pub struct ContractionPlan {
    pub order: Vec<usize>,
    pub steps: Vec<PlanStep>,
    /// boundary sizes before each step (first entry 0)
    pub boundary_before: Vec<usize>,
}

type Dart = (usize, u8);

impl ContractionPlan {
    pub fn new(shadow: &Shadow, order: &ContractionOrder) -> Result<ContractionPlan, SkeinError> {
        let n = shadow.vertex_count();
        assert_eq!(order.order.len(), n);
        let mut inserted = vec![false; n];
        let mut boundary: Vec<Dart> = Vec::new();
        let mut steps = Vec::new();
        let mut boundary_before = Vec::new();

        for &w in &order.order {
            boundary_before.push(boundary.len());
            let old_basis = basis(boundary.len());

            // classify the four corners of w
            let mut glue: [Option<usize>; 4] = [None; 4]; // corner -> old boundary position
            let mut self_glue: [Option<u8>; 4] = [None; 4]; // corner -> corner (loops at w)
            for c in 0..4u8 {
                let slot = shadow.corner_slot(w, c);
                let (tv, ts) = shadow.rot[w][slot as usize];
                if tv == w {
                    let tc = (ts + 4 - shadow.nw[w]) % 4;
                    self_glue[c as usize] = Some(tc);
                } else if inserted[tv] {
                    let pos = boundary
                        .iter()
                        .position(|&d| d == (tv, ts))
                        .expect("glued edge end on boundary");
                    glue[c as usize] = Some(pos);
                }
            }

            inserted[w] = true;
            let new_boundary = trace_boundary(shadow, &inserted)?;
            if new_boundary.len() > MAX_BOUNDARY {
                return Err(SkeinError::BoundaryCap(new_boundary.len()));
            }
            let new_basis = basis(new_boundary.len());

            // node ids: 0..old_points = old positions, old_points + c = corners
            let old_points = boundary.len();
            let id_of_new: Vec<Option<usize>> = {
                // free node id for each new boundary dart
                new_boundary
                    .iter()
                    .map(|d| {
                        if d.0 == w {
                            let c = (d.1 + 4 - shadow.nw[w]) % 4;
                            Some(old_points + c as usize)
                        } else {
                            boundary.iter().position(|x| x == d)
                        }
                    })
                    .collect()
            };
            let mut transitions = Vec::with_capacity(old_basis.len());
            for m in &old_basis.list {
                let mut entry = [(0u32, 0u8); 2];
                for (si, corner_pairs) in [[(0u8, 3u8), (1, 2)], [(0, 1), (2, 3)]]
                    .iter()
                    .enumerate()
                {
                    let (idx, loops) = merge_step(
                        m,
                        corner_pairs,
                        &glue,
                        &self_glue,
                        old_points,
                        &id_of_new,
                        &new_basis,
                    );
                    entry[si] = (idx, loops);
                }
                transitions.push(entry);
            }
            steps.push(PlanStep {
                vertex: w,
                old_points,
                new_points: new_boundary.len(),
                transitions,
            });
            boundary = new_boundary;
        }
        debug_assert!(boundary.is_empty());
        // the final closure provides the <O> = 1 normalization: its last
        // circle must not contribute a loop factor
        if let Some(last) = steps.last_mut() {
            debug_assert_eq!(last.new_points, 0);
            for entry in last.transitions.iter_mut() {
                for t in entry.iter_mut() {
                    assert!(t.1 >= 1, "closing step must close a circle");
                    t.1 -= 1;
                }
            }
        }
        Ok(ContractionPlan {
            order: order.order.clone(),
            steps,
            boundary_before,
        })
    }

    /// Contract with per-vertex coefficient pairs (infinity, zero),
    /// indexed by vertex id.
    pub fn contract<C: SkeinScalar>(&self, coeffs: &[(C, C)]) -> C {
        contract_seeded(self, coeffs)
    }
}

/// Walk the contour of the inserted region; the circular order of dangling
/// darts. Fails if the boundary has more than one circle.
fn trace_boundary(shadow: &Shadow, inserted: &[bool]) -> Result<Vec<Dart>, SkeinError> {
    let mut dangling: Vec<Dart> = Vec::new();
    for (v, ins) in inserted.iter().enumerate() {
        if !ins {
            continue;
        }
        for s in 0..4u8 {
            let (tv, _) = shadow.rot[v][s as usize];
            if !inserted[tv] {
                dangling.push((v, s));
            }
        }
    }
    if dangling.is_empty() {
        return Ok(Vec::new());
    }
    let start = *dangling.iter().min().unwrap();
    let mut out = Vec::with_capacity(dangling.len());
    let (mut v, mut s) = start;
    loop {
        out.push((v, s));
        // rotate to the next slot at v; cross interior edges until dangling
        let mut cs = (s + 1) % 4;
        let mut cv = v;
        loop {
            let (tv, ts) = shadow.rot[cv][cs as usize];
            if inserted[tv] {
                cv = tv;
                cs = (ts + 1) % 4;
            } else {
                break;
            }
        }
        v = cv;
        s = cs;
        if (v, s) == start {
            break;
        }
    }
    if out.len() != dangling.len() {
        return Err(SkeinError::NonDisk);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn merge_step(
    m: &Matching,
    corner_pairs: &[(u8, u8); 2],
    glue: &[Option<usize>; 4],
    self_glue: &[Option<u8>; 4],
    old_points: usize,
    id_of_new: &[Option<usize>],
    new_basis: &MatchingBasis,
) -> (u32, u8) {
    // union-find over old positions and the four corners
    let total = old_points + 4;
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    fn union(parent: &mut Vec<usize>, a: usize, b: usize) -> bool {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
        true
    }
    let mut loops = 0u8;
    // existing arcs
    for i in 0..old_points {
        let j = m.0[i] as usize;
        if i < j {
            union(&mut parent, i, j);
        }
    }
    // tangle smoothing arcs
    for &(a, b) in corner_pairs {
        if !union(&mut parent, old_points + a as usize, old_points + b as usize) {
            loops += 1;
        }
    }
    // gluings
    for c in 0..4usize {
        if let Some(pos) = glue[c] {
            if !union(&mut parent, old_points + c, pos) {
                loops += 1;
            }
        }
        if let Some(c2) = self_glue[c] {
            if c < c2 as usize && !union(&mut parent, old_points + c, old_points + c2 as usize) {
                loops += 1;
            }
        }
    }
    // free ends pair up in the new matching
    let mut rep_to_free: std::collections::HashMap<usize, Vec<usize>> = Default::default();
    for (new_pos, id) in id_of_new.iter().enumerate() {
        let id = id.expect("new boundary dart has a node id");
        rep_to_free
            .entry(find(&mut parent, id))
            .or_default()
            .push(new_pos);
    }
    let mut pairing = vec![0u8; id_of_new.len()];
    for (_, ends) in rep_to_free {
        assert_eq!(ends.len(), 2, "arc with {} free ends", ends.len());
        pairing[ends[0]] = ends[1] as u8;
        pairing[ends[1]] = ends[0] as u8;
    }
    let matching = Matching(pairing);
    debug_assert!(matching.is_noncrossing(), "crossing matching produced");
    (new_basis.index_of(&matching), loops)
}

// ---------------------------------------------------------------------------
// Diagram specifications over polyhedra
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    AsStored,
    QuarterTurn,
}

/// A filled shadow: per-vertex tangle bracket pair, endpoint pairing and
/// crossing count (already adjusted for the chosen orientation).
#[derive(Clone, Debug)]
pub struct FilledShadow {
    pub shadow: Shadow,
    pub coeffs: Vec<(GradedCoeff, GradedCoeff)>,
    pub pairings: Vec<EndpointPairing>,
    pub crossings: u32,
}

impl FilledShadow {
    pub fn from_assignment(
        p: &PlanarQuartic,
        assignment: &[(GradedBracket, EndpointPairing, u32, Orientation)],
    ) -> FilledShadow {
        let shadow = Shadow::from_polyhedron(p);
        let mut coeffs = Vec::with_capacity(assignment.len());
        let mut pairings = Vec::with_capacity(assignment.len());
        let mut crossings = 0;
        for (bracket, pairing, cr, orient) in assignment {
            let g = match orient {
                Orientation::AsStored => bracket.clone(),
                Orientation::QuarterTurn => crate::tangle::rotate_bracket(bracket),
            };
            let pr = match orient {
                Orientation::AsStored => *pairing,
                Orientation::QuarterTurn => pairing.rotated(),
            };
            coeffs.push(GradedCoeff::from_bracket(&g));
            pairings.push(pr);
            crossings += cr;
        }
        FilledShadow {
            shadow,
            coeffs,
            pairings,
            crossings,
        }
    }

    pub fn component_count(&self) -> usize {
        self.shadow.component_count(&self.pairings)
    }

    pub fn det_coeffs(&self) -> Vec<(DetValue, DetValue)> {
        self.coeffs
            .iter()
            .map(|(a, b)| {
                (
                    DetValue::from_eighth_power(a.shift, a.poly.eval_neg_one()),
                    DetValue::from_eighth_power(b.shift, b.poly.eval_neg_one()),
                )
            })
            .collect()
    }
}

/// Kauffman bracket of the closed diagram with the monomiality flag.
pub fn contract_bracket(
    filled: &FilledShadow,
    plan: &ContractionPlan,
) -> Result<(ClosedBracket, bool), SkeinError> {
    let comps = filled.component_count();
    if comps != 1 {
        return Err(SkeinError::MultiComponent(comps));
    }
    let result = contract_seeded(plan, &filled.coeffs);
    let closed = result.to_closed();
    let monomial = closed.is_monomial();
    Ok((closed, monomial))
}

/// Brute-force oracle: resolve all 2^v smoothings, counting loops.
pub fn state_sum_bracket(filled: &FilledShadow) -> Result<ClosedBracket, SkeinError> {
    let n = filled.shadow.vertex_count();
    assert!(n <= 20, "state sum oracle is exponential");
    let comps = filled.component_count();
    if comps != 1 {
        return Err(SkeinError::MultiComponent(comps));
    }
    let mut total = GradedCoeff::zero();
    for mask in 0u32..(1 << n) {
        let pairings: Vec<EndpointPairing> = (0..n)
            .map(|v| {
                if mask & (1 << v) != 0 {
                    EndpointPairing::InftyType
                } else {
                    EndpointPairing::ZeroType
                }
            })
            .collect();
        let loops = filled.shadow.component_count(&pairings);
        let mut term = GradedCoeff::one();
        for v in 0..n {
            let (ca, cb) = &filled.coeffs[v];
            let c = if mask & (1 << v) != 0 { ca } else { cb };
            term = term.mul(c);
        }
        for _ in 1..loops {
            term = term.times_loop();
        }
        total.add_assign(&term);
    }
    Ok(total.to_closed())
}

fn contract_seeded<C: SkeinScalar>(plan: &ContractionPlan, coeffs: &[(C, C)]) -> C {
    // inline of ContractionPlan::contract with an explicit unit seed
    let mut state: Vec<C> = Vec::new();
    for step in &plan.steps {
        let new_len = basis(step.new_points).len();
        let mut next: Vec<C> = vec![C::zero(); new_len];
        let (ca, cb) = &coeffs[step.vertex];
        if state.is_empty() {
            // first step: unit times each smoothing coefficient
            for (si, c) in [ca, cb].into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (new_idx, loops) = step.transitions[0][si];
                let mut term = c.clone();
                for _ in 0..loops {
                    term = term.times_loop();
                }
                next[new_idx as usize].add_assign(&term);
            }
        } else {
            for (old_idx, val) in state.iter().enumerate() {
                if val.is_zero() {
                    continue;
                }
                for (si, c) in [ca, cb].into_iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (new_idx, loops) = step.transitions[old_idx][si];
                    let mut term = val.mul(c);
                    for _ in 0..loops {
                        term = term.times_loop();
                    }
                    next[new_idx as usize].add_assign(&term);
                }
            }
        }
        state = next;
    }
    debug_assert_eq!(state.len(), 1);
    state.pop().unwrap()
}

/// Determinant via the scalar route: the same contraction kernel evaluated
/// at t = -1, where the loop factor vanishes.
pub fn determinant(filled: &FilledShadow, plan: &ContractionPlan) -> Result<Int, SkeinError> {
    let comps = filled.component_count();
    if comps != 1 {
        return Err(SkeinError::MultiComponent(comps));
    }
    let coeffs = filled.det_coeffs();
    let value: DetValue = contract_seeded(plan, &coeffs);
    let norm2 = value.norm_sqr();
    exact_sqrt(&norm2).ok_or_else(|| SkeinError::NonIntegerDeterminant(norm2.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    StateSum,
    Stepwise,
}

/// Polynomial-multiplication count for a diagram on v vertices: the full
/// state sum performs 2^v (v-1); the stepwise method performs
/// sum_k 2 C(b_{k-1}/2) over the actual boundary profile.
pub fn count_multiplications(v: usize, plan: Option<&ContractionPlan>, method: CountMethod) -> u64 {
    match method {
        CountMethod::StateSum => (1u64 << v) * (v as u64 - 1),
        CountMethod::Stepwise => {
            let plan = plan.expect("stepwise count needs a contraction plan");
            plan.boundary_before
                .iter()
                .map(|&b| 2 * crate::matching::catalan(b / 2))
                .sum()
        }
    }
}

/// The bound formula `4 * sum_{i=1}^{floor(v/2)} C(i)`.
pub fn stepwise_bound(v: usize) -> u64 {
    (1..=v / 2).map(crate::matching::catalan).map(|c| 4 * c).sum()
}

/// Jones polynomial from a closed bracket and the diagram writhe:
/// `(-A^{-3})^w <D>` at `A = t^{-1/4}`; knots always land on integer
/// exponents.
pub fn jones_polynomial(bracket: &ClosedBracket, writhe: i64) -> Result<LaurentInt, SkeinError> {
    if bracket.poly.is_zero() {
        return Ok(LaurentInt::zero());
    }
    let d = bracket.shift - 3 * writhe;
    if d.rem_euclid(4) != 0 {
        return Err(SkeinError::Grading(format!(
            "bracket shift {} with writhe {} leaves fractional exponents",
            bracket.shift, writhe
        )));
    }
    let tpow = -d / 4;
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(bracket.poly.shifted(tpow).mul_term(0, &Int::from(sign)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::{contraction_order, generate_polyhedra};
    use crate::tangle::TangleExpr;

    fn filled_octahedron(ns: &[i64; 6]) -> (FilledShadow, ContractionPlan) {
        let p = &generate_polyhedra(6)[0];
        let assignment: Vec<_> = ns
            .iter()
            .map(|&n| {
                let e = TangleExpr::integral(n);
                (
                    e.bracket().unwrap(),
                    e.pairing(),
                    e.crossing_count(),
                    Orientation::AsStored,
                )
            })
            .collect();
        let filled = FilledShadow::from_assignment(p, &assignment);
        let order = contraction_order(&p.graph);
        let plan = ContractionPlan::new(&filled.shadow, &order).unwrap();
        (filled, plan)
    }

    #[test]
    fn contraction_matches_state_sum_on_octahedron() {
        let mut exercised = 0;
        for code in 0..64u32 {
            let ns: [i64; 6] = std::array::from_fn(|i| {
                if code & (1 << i) != 0 {
                    2
                } else {
                    1
                }
            });
            let (filled, plan) = filled_octahedron(&ns);
            if filled.component_count() != 1 {
                continue;
            }
            exercised += 1;
            let (fast, _) = contract_bracket(&filled, &plan).unwrap();
            let slow = state_sum_bracket(&filled).unwrap();
            assert_eq!(fast, slow, "mismatch for {ns:?}");
            if exercised >= 8 {
                break;
            }
        }
        assert!(exercised > 0, "no single-component filling found");
    }

    #[test]
    fn zero_tangle_vertex_smooths_away() {
        let mut exercised = 0;
        for code in 0..64u32 {
            let mut ns: [i64; 6] = std::array::from_fn(|i| {
                if code & (1 << i) != 0 {
                    2
                } else {
                    1
                }
            });
            ns[3] = 0;
            let (filled, plan) = filled_octahedron(&ns);
            if filled.component_count() != 1 {
                continue;
            }
            exercised += 1;
            let (fast, _) = contract_bracket(&filled, &plan).unwrap();
            let slow = state_sum_bracket(&filled).unwrap();
            assert_eq!(fast, slow);
            if exercised >= 4 {
                break;
            }
        }
        assert!(exercised > 0);
    }

    #[test]
    fn determinant_is_modulus_at_det_point() {
        let mut exercised = 0;
        for code in 0..64u32 {
            let ns: [i64; 6] = std::array::from_fn(|i| {
                if code & (1 << i) != 0 {
                    2
                } else {
                    -1
                }
            });
            let (filled, plan) = filled_octahedron(&ns);
            if filled.component_count() != 1 {
                continue;
            }
            exercised += 1;
            let det = determinant(&filled, &plan).unwrap();
            let (bracket, _) = contract_bracket(&filled, &plan).unwrap();
            let val = bracket.eval_det_point();
            assert_eq!(det, exact_sqrt(&val.norm_sqr()).unwrap());
            assert_eq!(det.to_bigint() % 2, num_bigint::BigInt::from(1));
            if exercised >= 8 {
                break;
            }
        }
        assert!(exercised > 0);
    }

    #[test]
    fn multiplication_counts() {
        assert_eq!(count_multiplications(4, None, CountMethod::StateSum), 48);
        assert_eq!(stepwise_bound(4), 12);
        let (_, plan) = filled_octahedron(&[1, 1, 1, 1, 1, 1]);
        let n2 = count_multiplications(6, Some(&plan), CountMethod::Stepwise);
        // octahedron profile [0,4,6,6,6,4]: 2(1 + 2 + 5 + 5 + 5 + 2)
        assert_eq!(n2, 40);
    }

    #[test]
    fn order_independence() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = &generate_polyhedra(6)[0];
        let mut found = None;
        for code in 0..64u32 {
            let ns: [i64; 6] =
                std::array::from_fn(|i| if code & (1 << i) != 0 { 2 } else { -1 });
            let (filled, plan) = filled_octahedron(&ns);
            if filled.component_count() == 1 {
                found = Some((filled, plan));
                break;
            }
        }
        let (filled, plan) = found.expect("some octahedron filling is a knot");
        let (reference, _) = contract_bracket(&filled, &plan).unwrap();
        for _ in 0..5 {
            // random valid order: prefix-connected and co-connected
            let mut order: Vec<usize> = (0..6).collect();
            order.shuffle(&mut rng);
            // repair into a connected order greedily
            let mut fixed = Vec::new();
            let mut inside = 0u16;
            while fixed.len() < 6 {
                let v = *order
                    .iter()
                    .find(|&&v| {
                        inside & (1 << v) == 0
                            && (inside == 0 || p.graph.neighbors_mask(v) & inside != 0)
                    })
                    .unwrap();
                fixed.push(v);
                inside |= 1 << v;
            }
            let mut co = crate::polyhedra::ContractionOrder {
                order: fixed,
                boundary_after: vec![],
            };
            // recompute boundary profile
            let mut ins = 0u16;
            for &v in &co.order {
                ins |= 1 << v;
                let mut cut = 0;
                for u in 0..6 {
                    if ins & (1 << u) != 0 {
                        for w in p.graph.neighbors(u) {
                            if ins & (1 << w) == 0 {
                                cut += 1;
                            }
                        }
                    }
                }
                co.boundary_after.push(cut);
            }
            if let Ok(plan2) = ContractionPlan::new(&filled.shadow, &co) {
                let (b2, _) = contract_bracket(&filled, &plan2).unwrap();
                assert_eq!(b2, reference);
            }
        }
    }

    #[test]
    fn jones_normalization() {
        // unknot with one positive kink: bracket -A^{-3}... writhe...
        let unknot = ClosedBracket::normalize(-3, LaurentInt::from_terms([(0, -1)]));
        // calibrated: N(integral 1) has bracket -A^{-3} and writhe -1
        let j = jones_polynomial(&unknot, -1).unwrap();
        assert_eq!(j, LaurentInt::one());

        // trefoil: A^7 - A^3 - A^{-5} with writhe -3
        let tre = ClosedBracket::normalize(
            7,
            LaurentInt::from_terms([(0, 1), (1, -1), (3, -1)]),
        );
        let j = jones_polynomial(&tre, -3).unwrap();
        assert_eq!(j, LaurentInt::from_terms([(-4, -1), (-3, 1), (-1, 1)]));
        // the mirror convention: same writhe sign flips
        assert!(jones_polynomial(&tre, -2).is_err());
    }
}
