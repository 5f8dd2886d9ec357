//! Enumeration of algebraic tangles by crossing number, deduplicated up to
//! mutation, reflection, and mirror image.
//!
//! Mutation closure makes sum operands freely permutable (a half-turn of a
//! sum reverses it, and half-turns of the summands undo themselves), so the
//! canonical form flattens sums, merges integral summands, cancels double
//! reflections, rewrites the reflected one-crossing tangle to itself, and
//! sorts operands. A class key is the least serialization over the four
//! global variants {id, reflect, mirror, reflect∘mirror}; quarter-turn
//! rotation is the composite of those with a mutation, so rotated tangles
//! land in the same class automatically.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::ideal;
use crate::laurent::GradedBracket;
use crate::tangle::{EndpointPairing, TangleError, TangleExpr, TangleNode};

#[derive(Debug, Error)]
pub enum TableError {
    #[error("tangle error: {0}")]
    Tangle(#[from] TangleError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed table file: {0}")]
    Format(String),
    #[error("stored bracket mismatch for key {0}")]
    Corrupt(String),
}

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------

/// Normal form: mutations erased, mirrors pushed to integral leaves,
/// double reflections cancelled, reflected one-crossing tangles rewritten,
/// sums flattened with integral summands merged and operands sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Nf {
    Int(i64),
    Refl(Box<Nf>),
    Sum(Vec<Nf>),
}

impl Nf {
    fn serialize(&self) -> String {
        let mut s = String::new();
        self.write(&mut s);
        s
    }

    fn write(&self, out: &mut String) {
        match self {
            Nf::Int(n) => {
                let _ = write!(out, "int({n})");
            }
            Nf::Refl(c) => {
                out.push_str("refl(");
                c.write(out);
                out.push(')');
            }
            Nf::Sum(ops) => {
                out.push_str("sum(");
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    op.write(out);
                }
                out.push(')');
            }
        }
    }

    fn to_expr(&self) -> TangleExpr {
        match self {
            Nf::Int(n) => TangleExpr::integral(*n),
            Nf::Refl(c) => TangleExpr::reflect(c.to_expr()),
            Nf::Sum(ops) => {
                let mut it = ops.iter();
                let mut acc = it.next().unwrap().to_expr();
                for op in it {
                    acc = TangleExpr::sum(acc, op.to_expr());
                }
                acc
            }
        }
    }
}

fn normalize(e: &TangleExpr) -> Nf {
    match e.node() {
        TangleNode::Integral(n) => Nf::Int(*n),
        TangleNode::MutateX(c) | TangleNode::MutateY(c) | TangleNode::MutateZ(c) => normalize(c),
        TangleNode::Mirror(c) => mirror_nf(&normalize(c)),
        TangleNode::Reflect(c) => refl_nf(normalize(c)),
        TangleNode::Sum(l, r) => sum_nf(normalize(l), normalize(r)),
    }
}

fn mirror_nf(nf: &Nf) -> Nf {
    match nf {
        Nf::Int(n) => Nf::Int(-n),
        Nf::Refl(c) => Nf::Refl(Box::new(mirror_nf(c))),
        // re-canonicalize: the fraction-merge target depends on sort order
        Nf::Sum(ops) => canonical_multiset(ops.iter().map(mirror_nf).collect()),
    }
}

fn refl_nf(nf: Nf) -> Nf {
    match nf {
        Nf::Refl(c) => *c,
        // the one-crossing tangle is symmetric under the diagonal reflection
        Nf::Int(1) => Nf::Int(1),
        Nf::Int(-1) => Nf::Int(-1),
        other => Nf::Refl(Box::new(other)),
    }
}

fn sum_nf(a: Nf, b: Nf) -> Nf {
    canonical_multiset(vec![a, b])
}

fn nf_crossings(nf: &Nf) -> u32 {
    match nf {
        Nf::Int(n) => n.unsigned_abs() as u32,
        Nf::Refl(c) => nf_crossings(c),
        Nf::Sum(ops) => ops.iter().map(nf_crossings).sum(),
    }
}

/// Conway fraction of a rational fragment; `(1, 0)` is infinity. A sum is a
/// rational fragment only when at most one operand is non-integral.
fn nf_fraction(nf: &Nf) -> Option<(i64, i64)> {
    match nf {
        Nf::Int(n) => Some((*n, 1)),
        Nf::Refl(c) => {
            let (p, q) = nf_fraction(c)?;
            Some(reduce_frac(q, p))
        }
        Nf::Sum(ops) => {
            let mut total = 0i64;
            let mut frac: Option<(i64, i64)> = None;
            for op in ops {
                let (p, q) = nf_fraction(op)?;
                if q == 1 {
                    total = total.checked_add(p)?;
                } else if frac.is_none() {
                    frac = Some((p, q));
                } else {
                    return None;
                }
            }
            let (p, q) = frac.unwrap_or((0, 1));
            Some(reduce_frac(p.checked_add(total.checked_mul(q)?)?, q))
        }
    }
}

fn reduce_frac(p: i64, q: i64) -> (i64, i64) {
    if q == 0 {
        return (1, 0);
    }
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs().max(1)
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(p, q);
    let s = if q < 0 { -1 } else { 1 };
    (s * p / g, s * q / g)
}

/// Canonical form of the rational tangle with the given fraction: the
/// pure-sign continued-fraction expression (crossing-minimal).
fn structural_mirror(nf: &Nf) -> Nf {
    match nf {
        Nf::Int(n) => Nf::Int(-n),
        Nf::Refl(c) => Nf::Refl(Box::new(structural_mirror(c))),
        Nf::Sum(ops) => {
            let mut m: Vec<Nf> = ops.iter().map(structural_mirror).collect();
            m.sort_by_key(|a| a.serialize());
            Nf::Sum(m)
        }
    }
}

fn canonical_rational_nf(p: i64, q: i64) -> Nf {
    let (p, q) = reduce_frac(p, q);
    if q == 0 {
        return Nf::Refl(Box::new(Nf::Int(0)));
    }
    if p == 0 {
        return Nf::Int(0);
    }
    if p < 0 {
        // the negative canonical form is the element-wise mirror of the
        // positive one; no re-canonicalization needed (or wanted: it recurses)
        return structural_mirror(&canonical_rational_nf(-p, q));
    }
    if p < q {
        return refl_nf(canonical_rational_nf(q, p));
    }
    if q == 1 {
        return Nf::Int(p);
    }
    let terms = crate::tangle::continued_fraction(p, q);
    let mut t = Nf::Int(*terms.last().unwrap());
    for c in terms.iter().rev().skip(1) {
        let mut ops = vec![Nf::Int(*c), refl_nf(t)];
        ops.sort_by_key(|a| a.serialize());
        t = Nf::Sum(ops);
    }
    t
}

/// Canonical multiset form of a sum: operands spliced, integral operands
/// pooled; the pool merges into a rational operand by exact fraction
/// arithmetic (an isotopy) only when that operand is unique, so the
/// rewrite has no choices and the normal form is confluent. Remaining
/// operands are sorted.
fn canonical_multiset(input: Vec<Nf>) -> Nf {
    let mut total = 0i64;
    let mut rest: Vec<Nf> = Vec::new();
    let mut queue = input;
    while let Some(op) = queue.pop() {
        match op {
            Nf::Int(n) => total += n,
            Nf::Sum(ops) => queue.extend(ops),
            other => rest.push(other),
        }
    }
    rest.sort_by_key(|a| a.serialize());
    if total != 0 {
        let rational: Vec<usize> = (0..rest.len())
            .filter(|&i| nf_fraction(&rest[i]).is_some())
            .collect();
        if rational.len() == 1 {
            let i = rational[0];
            let (p, q) = nf_fraction(&rest[i]).unwrap();
            rest.remove(i);
            if q == 0 {
                // twists absorb into the infinity tangle
                rest.push(Nf::Refl(Box::new(Nf::Int(0))));
            } else if let Some(np) = p.checked_add(total.saturating_mul(q)) {
                match canonical_rational_nf(np, q) {
                    Nf::Int(n) if rest.is_empty() => return Nf::Int(n),
                    Nf::Int(0) => {}
                    Nf::Int(n) => rest.push(Nf::Int(n)),
                    other => rest.push(other),
                }
            } else {
                // fraction overflow: keep the integral operand unmerged
                rest.push(Nf::Int(total));
                rest.sort_by_key(|a| a.serialize());
                return finish_multiset(rest);
            }
            rest.sort_by_key(|a| a.serialize());
        } else {
            rest.push(Nf::Int(total));
            rest.sort_by_key(|a| a.serialize());
        }
    }
    finish_multiset(rest)
}

fn finish_multiset(mut rest: Vec<Nf>) -> Nf {
    match rest.len() {
        0 => Nf::Int(0),
        1 => rest.pop().unwrap(),
        _ => Nf::Sum(rest),
    }
}

/// Canonical key of the mutation/reflection/mirror class of a loop-free
/// tangle expression.
pub fn canonical_key(e: &TangleExpr) -> Result<String, TangleError> {
    if e.loops() > 0 {
        return Err(TangleError::InternalLoops(e.loops() as usize));
    }
    Ok(class_key_unchecked(e))
}

fn class_key_unchecked(e: &TangleExpr) -> String {
    let base = normalize(e);
    let refl = refl_nf(base.clone());
    let mir = mirror_nf(&base);
    let refl_mir = refl_nf(mir.clone());
    [base, refl, mir, refl_mir]
        .iter()
        .map(|v| v.serialize())
        .min()
        .unwrap()
}

// ---------------------------------------------------------------------------
// Records and tables
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct TangleRecord {
    pub canonical_key: String,
    pub expr: TangleExpr,
    pub bracket: GradedBracket,
    pub pairing: EndpointPairing,
    pub crossings: u32,
    pub trivializable: Option<bool>,
}

impl TangleRecord {
    fn build(expr: TangleExpr, key: String) -> TangleRecord {
        let bracket = expr.bracket().expect("loop-free by construction");
        TangleRecord {
            canonical_key: key,
            pairing: expr.pairing(),
            crossings: expr.crossing_count(),
            expr,
            bracket,
            trivializable: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TangleTable {
    /// Per crossing number, records sorted by canonical key.
    pub levels: BTreeMap<u32, Vec<TangleRecord>>,
    pub max_crossings: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelCounts {
    pub crossings: u32,
    pub total: usize,
    pub trivializable: usize,
}

impl TangleTable {
    pub fn counts(&self) -> Vec<LevelCounts> {
        self.levels
            .iter()
            .map(|(n, recs)| LevelCounts {
                crossings: *n,
                total: recs.len(),
                trivializable: recs
                    .iter()
                    .filter(|r| r.trivializable == Some(true))
                    .count(),
            })
            .collect()
    }

    pub fn all_records(&self) -> impl Iterator<Item = &TangleRecord> {
        self.levels.values().flatten()
    }

    pub fn stats_tsv(&self) -> String {
        let mut out = String::from("n\ttotal\ttrivializable\n");
        for c in self.counts() {
            let _ = writeln!(out, "{}\t{}\t{}", c.crossings, c.total, c.trivializable);
        }
        out
    }
}

/// One record per reduced fraction p/q ≥ 1 whose continued-fraction term sum
/// is at most `max_crossings`.
pub fn enumerate_rationals(max_crossings: u32) -> Vec<TangleRecord> {
    fn rec(terms: &mut Vec<i64>, budget: i64, out: &mut Vec<Vec<i64>>) {
        for c in 1..=budget {
            terms.push(c);
            // canonical expansions end with a term >= 2 unless length 1
            if terms.len() == 1 || c >= 2 {
                out.push(terms.clone());
            }
            rec(terms, budget - c, out);
            terms.pop();
        }
    }
    let mut seqs = Vec::new();
    rec(&mut Vec::new(), max_crossings as i64, &mut seqs);
    let mut records = Vec::new();
    for seq in seqs {
        // value c0 + 1/(c1 + 1/(...)), last entry innermost
        let mut it = seq.iter().rev();
        let mut expr = TangleExpr::integral(*it.next().unwrap());
        for c in it {
            expr = TangleExpr::sum(TangleExpr::integral(*c), TangleExpr::reflect(expr));
        }
        let key = canonical_key(&expr).expect("rationals are loop-free");
        records.push(TangleRecord::build(expr, key));
    }
    records.sort_by(|a, b| (a.crossings, &a.canonical_key).cmp(&(b.crossings, &b.canonical_key)));
    records
}

/// Closure of the integral tangles under sum and reflection within the
/// crossing budget, deduplicated by canonical key; tangles with internal
/// loops discarded. Trivializability is annotated unless skipped.
fn summand_variants(e: &TangleExpr) -> [TangleExpr; 4] {
    [
        e.clone(),
        TangleExpr::reflect(e.clone()),
        TangleExpr::mirror(e.clone()),
        TangleExpr::reflect(TangleExpr::mirror(e.clone())),
    ]
}

pub fn enumerate_algebraic(max_crossings: u32, with_trivializability: bool) -> TangleTable {
    fn admit(expr: TangleExpr, level: &mut BTreeMap<String, TangleRecord>) {
        if expr.loops() > 0 {
            return;
        }
        // candidates whose canonical form has fewer crossings are
        // non-minimal diagrams of tangles counted at a lower level
        if nf_crossings(&normalize(&expr)) < expr.crossing_count() {
            return;
        }
        let key = class_key_unchecked(&expr);
        if let Some(existing) = level.get(&key) {
            // dedup guard: brackets within a class agree up to the
            // reflection/mirror variants
            let g = expr.bracket_raw();
            let variants = [
                existing.bracket.clone(),
                TangleExpr::reflect(existing.expr.clone()).bracket_raw(),
                TangleExpr::mirror(existing.expr.clone()).bracket_raw(),
                TangleExpr::reflect(TangleExpr::mirror(existing.expr.clone())).bracket_raw(),
            ];
            assert!(
                variants.contains(&g),
                "class {key} collided with inconsistent bracket:\n  rep: {}\n  new: {}",
                existing.expr,
                expr
            );
            return;
        }
        level.insert(key.clone(), TangleRecord::build(expr, key));
    }

    let mut levels: Vec<BTreeMap<String, TangleRecord>> =
        vec![BTreeMap::new(); max_crossings as usize + 1];

    for n in 1..=max_crossings {
        let mut level: BTreeMap<String, TangleRecord> = BTreeMap::new();
        admit(TangleExpr::integral(n as i64), &mut level);
        for n1 in 1..n {
            let n2 = n - n1;
            for r1 in levels[n1 as usize].values() {
                for r2 in levels[n2 as usize].values() {
                    let xs = summand_variants(&r1.expr);
                    let ys = summand_variants(&r2.expr);
                    for x in &xs {
                        for y in &ys {
                            admit(TangleExpr::sum(x.clone(), y.clone()), &mut level);
                        }
                    }
                }
            }
        }
        // close under reflection (an involution, so one pass over a snapshot)
        let snapshot: Vec<TangleExpr> = level.values().map(|r| r.expr.clone()).collect();
        for e in snapshot {
            admit(TangleExpr::reflect(e), &mut level);
        }
        levels[n as usize] = level;
    }

    let mut table = TangleTable {
        levels: BTreeMap::new(),
        max_crossings,
    };
    for (n, level) in levels.into_iter().enumerate().skip(1) {
        let mut recs: Vec<TangleRecord> = level.into_values().collect();
        if with_trivializability {
            recs.par_iter_mut().for_each(|r| {
                r.trivializable = Some(ideal::decide_trivializable(&r.bracket));
            });
        }
        table.levels.insert(n as u32, recs);
    }
    table
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

const TABLE_HEADER: &str = "knotscan-tangles v1";

pub fn save_table(table: &TangleTable, path: &std::path::Path) -> Result<(), TableError> {
    let mut out = String::new();
    let _ = writeln!(out, "{} max={}", TABLE_HEADER, table.max_crossings);
    for rec in table.all_records() {
        let triv = match rec.trivializable {
            Some(true) => "1",
            Some(false) => "0",
            None => "-",
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            rec.crossings,
            rec.canonical_key,
            rec.expr,
            rec.bracket.shift,
            rec.bracket.p,
            rec.bracket.q,
            rec.pairing.code() as char,
            triv
        );
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn load_table(path: &std::path::Path) -> Result<TangleTable, TableError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| TableError::Format("empty file".into()))?;
    if !header.starts_with(TABLE_HEADER) {
        return Err(TableError::Format(format!("bad header: {header}")));
    }
    let max_crossings: u32 = header
        .split("max=")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| TableError::Format("missing max=".into()))?;
    let mut table = TangleTable {
        levels: BTreeMap::new(),
        max_crossings,
    };
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 8 {
            return Err(TableError::Format(format!("bad line: {line}")));
        }
        let crossings: u32 = cols[0]
            .parse()
            .map_err(|_| TableError::Format(format!("bad crossing count: {}", cols[0])))?;
        let key = cols[1].to_string();
        let expr = TangleExpr::from_str(cols[2])?;
        let shift: i64 = cols[3]
            .parse()
            .map_err(|_| TableError::Format(format!("bad shift: {}", cols[3])))?;
        let p = cols[4]
            .parse()
            .map_err(|_| TableError::Format(format!("bad poly: {}", cols[4])))?;
        let q = cols[5]
            .parse()
            .map_err(|_| TableError::Format(format!("bad poly: {}", cols[5])))?;
        let pairing = EndpointPairing::from_code(cols[6].as_bytes()[0])
            .ok_or_else(|| TableError::Format(format!("bad pairing: {}", cols[6])))?;
        let trivializable = match cols[7] {
            "1" => Some(true),
            "0" => Some(false),
            "-" => None,
            other => return Err(TableError::Format(format!("bad flag: {other}"))),
        };
        let stored = GradedBracket { shift, p, q };
        // corruption guard: stored data must match recomputation
        let recomputed = expr.bracket()?;
        if recomputed != stored || expr.pairing() != pairing || expr.crossing_count() != crossings
        {
            return Err(TableError::Corrupt(key));
        }
        table
            .levels
            .entry(crossings)
            .or_default()
            .push(TangleRecord {
                canonical_key: key,
                expr,
                bracket: stored,
                pairing,
                crossings,
                trivializable,
            });
    }
    for recs in table.levels.values_mut() {
        recs.sort_by(|a, b| a.canonical_key.cmp(&b.canonical_key));
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Orbit oracle: explicit closure for cross-validation.
// ---------------------------------------------------------------------------

/// Independent route to the class key: enumerate every operand ordering at
/// every sum node of each of the four global variants and take the least
/// serialization, instead of sorting.
pub mod orbit {
    use super::*;

    pub fn orbit_min_key(e: &TangleExpr) -> String {
        let base = normalize(e);
        let variants = [
            base.clone(),
            refl_nf(base.clone()),
            mirror_nf(&base),
            refl_nf(mirror_nf(&base)),
        ];
        variants
            .iter()
            .flat_map(all_orderings)
            .map(|v| v.serialize())
            .min()
            .unwrap()
    }

    fn all_orderings(nf: &Nf) -> Vec<Nf> {
        match nf {
            Nf::Int(_) => vec![nf.clone()],
            Nf::Refl(c) => all_orderings(c)
                .into_iter()
                .map(|x| Nf::Refl(Box::new(x)))
                .collect(),
            Nf::Sum(ops) => {
                let choices: Vec<Vec<Nf>> = ops.iter().map(all_orderings).collect();
                let mut combos: Vec<Vec<Nf>> = vec![Vec::new()];
                for ch in &choices {
                    let mut next = Vec::new();
                    for c in combos.iter() {
                        for x in ch {
                            let mut v = c.clone();
                            v.push(x.clone());
                            next.push(v);
                        }
                    }
                    combos = next;
                }
                let mut out = Vec::new();
                for combo in combos {
                    permutations(&combo, &mut Vec::new(), &mut vec![false; combo.len()], &mut out);
                }
                out
            }
        }
    }

    fn permutations(items: &[Nf], cur: &mut Vec<Nf>, used: &mut Vec<bool>, out: &mut Vec<Nf>) {
        if cur.len() == items.len() {
            out.push(Nf::Sum(cur.clone()));
            return;
        }
        for i in 0..items.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            cur.push(items[i].clone());
            permutations(items, cur, used, out);
            cur.pop();
            used[i] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::{rational_tangle, RationalSpec};

    #[test]
    fn key_identifies_mutations_and_mirrors() {
        let t1 = rational_tangle(RationalSpec::new(5, 2)).unwrap();
        let t2 = rational_tangle(RationalSpec::new(7, 3)).unwrap();
        let e = TangleExpr::sum(t1.clone(), t2.clone());
        let k = canonical_key(&e).unwrap();
        assert_eq!(canonical_key(&TangleExpr::mutate_z(e.clone())).unwrap(), k);
        assert_eq!(canonical_key(&TangleExpr::mutate_x(e.clone())).unwrap(), k);
        assert_eq!(canonical_key(&TangleExpr::mirror(e.clone())).unwrap(), k);
        assert_eq!(canonical_key(&TangleExpr::reflect(e.clone())).unwrap(), k);
        // swapped operand order is a mutation consequence
        let swapped = TangleExpr::sum(t2, t1);
        assert_eq!(canonical_key(&swapped).unwrap(), k);
    }

    #[test]
    fn key_rejects_loops() {
        let e = TangleExpr::sum(
            TangleExpr::reflect(TangleExpr::integral(2)),
            TangleExpr::reflect(TangleExpr::integral(2)),
        );
        assert!(canonical_key(&e).is_err());
    }

    #[test]
    fn integral_merging_and_reflected_one() {
        // 2 + r(1) is isotopic to 3 since r(1) = 1
        let e = TangleExpr::sum(
            TangleExpr::integral(2),
            TangleExpr::reflect(TangleExpr::integral(1)),
        );
        assert_eq!(
            canonical_key(&e).unwrap(),
            canonical_key(&TangleExpr::integral(3)).unwrap()
        );
        // 1 + x + 1 merges the twists around x
        let x = TangleExpr::reflect(TangleExpr::integral(2));
        let e2 = TangleExpr::sum(
            TangleExpr::sum(TangleExpr::integral(1), x.clone()),
            TangleExpr::integral(1),
        );
        let e3 = TangleExpr::sum(TangleExpr::integral(2), x);
        assert_eq!(canonical_key(&e2).unwrap(), canonical_key(&e3).unwrap());
    }

    #[test]
    fn rationals_small_counts() {
        let recs = enumerate_rationals(5);
        let count_at = |n: u32| recs.iter().filter(|r| r.crossings == n).count();
        assert_eq!(count_at(1), 1);
        assert_eq!(count_at(2), 1);
        assert_eq!(count_at(3), 2);
        assert_eq!(count_at(4), 4);
        assert_eq!(count_at(5), 8);
        // crossing-4 fractions are {4, 5/2, 4/3, 5/3}
        let mut fours: Vec<String> = recs
            .iter()
            .filter(|r| r.crossings == 4)
            .map(|r| r.expr.fraction().unwrap().to_string())
            .collect();
        fours.sort();
        assert_eq!(fours, vec!["4/1", "4/3", "5/2", "5/3"]);
    }

    #[test]
    fn algebraic_counts_to_five() {
        let table = enumerate_algebraic(5, true);
        let counts = table.counts();
        let expect = [(1, 1, 1), (2, 1, 1), (3, 2, 2), (4, 4, 4), (5, 12, 12)];
        for (n, total, triv) in expect {
            let c = counts.iter().find(|c| c.crossings == n).unwrap();
            assert_eq!((c.total, c.trivializable), (total, triv), "at n={n}");
        }
    }

    #[test]
    fn keys_match_orbit_oracle_small() {
        let table = enumerate_algebraic(5, false);
        for rec in table.all_records() {
            assert_eq!(
                orbit::orbit_min_key(&rec.expr),
                rec.canonical_key,
                "orbit key differs for {}",
                rec.expr
            );
        }
    }

    #[test]
    fn table_round_trip() {
        let dir = std::env::temp_dir().join("knotscan-table-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("tangles.tsv");
        let table = enumerate_algebraic(4, true);
        save_table(&table, &path).unwrap();
        let loaded = load_table(&path).unwrap();
        assert_eq!(loaded.counts(), table.counts());
        assert_eq!(loaded.max_crossings, 4);
    }

    #[test]
    fn prefix_stability() {
        let t5 = enumerate_algebraic(5, false);
        let t6 = enumerate_algebraic(6, false);
        for n in 1..=5u32 {
            let a: Vec<&String> = t5.levels[&n].iter().map(|r| &r.canonical_key).collect();
            let b: Vec<&String> = t6.levels[&n].iter().map(|r| &r.canonical_key).collect();
            assert_eq!(a, b, "prefix changed at n={n}");
        }
    }
}
