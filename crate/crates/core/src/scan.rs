//! The end-to-end verification scan: iterate knot diagrams built from
//! trivializable tangles inserted into non-thin polyhedra (plus closures of
//! algebraic tangles) within a crossing budget, apply the determinant
//! prefilter, compute full brackets for determinant-1 diagrams, test
//! monomiality, discharge survivors through pass moves, and export the
//! irreducible ones as PD and DT codes.
//!
//! Runs are deterministic (fixed iteration order and tie-breaks), checkpoint
//! periodically, and resume to byte-identical reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diagram::{self, FlatDiagram};
use crate::laurent::Int;
use crate::passmove::{self, DischargeOutcome};
use crate::polyhedra::{self, PlanarQuartic};
use crate::skein::{self, ContractionPlan, FilledShadow, Orientation};
use crate::tangle::{ClosureKind, EndpointPairing, TangleExpr};
use crate::tangle_table::{self, TangleRecord, TangleTable};

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("table error: {0}")]
    Table(#[from] tangle_table::TableError),
    #[error("polyhedra error: {0}")]
    Polyhedra(#[from] polyhedra::PolyhedraError),
    #[error("diagram error: {0}")]
    Diagram(#[from] diagram::DiagramError),
    #[error("skein error: {0}")]
    Skein(#[from] skein::SkeinError),
    #[error("pass move error: {0}")]
    PassMove(#[from] passmove::PassMoveError),
    #[error("scan needs trivializability annotations (regenerate the tangle table)")]
    MissingTrivializability,
    #[error("checkpoint rejected: {0}")]
    Checkpoint(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub max_crossings: u32,
    pub tangles_path: PathBuf,
    pub polyhedra_path: PathBuf,
    pub out_dir: PathBuf,
    pub workers: usize,
    pub resume: bool,
    pub no_prune: bool,
    pub certifier: Option<String>,
    pub checkpoint_every: usize,
    /// stop after this many units (kill/resume testing)
    pub max_units: Option<usize>,
}

impl ScanConfig {
    pub fn new(
        max_crossings: u32,
        tangles_path: PathBuf,
        polyhedra_path: PathBuf,
        out_dir: PathBuf,
    ) -> ScanConfig {
        ScanConfig {
            max_crossings,
            tangles_path,
            polyhedra_path,
            out_dir,
            workers: 1,
            resume: false,
            no_prune: false,
            certifier: None,
            checkpoint_every: 16,
            max_units: None,
        }
    }

    /// Hash of everything that affects scan results.
    fn content_hash(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"knotscan-config-v1");
        h.update(self.max_crossings.to_le_bytes());
        h.update([self.no_prune as u8]);
        h.finalize().into()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellStats {
    pub considered: u64,
    pub skipped_multicomponent: u64,
    pub det_one: u64,
    pub monomial: u64,
    pub discharged: u64,
    pub exported: u64,
}

impl CellStats {
    fn merge(&mut self, other: &CellStats) {
        self.considered += other.considered;
        self.skipped_multicomponent += other.skipped_multicomponent;
        self.det_one += other.det_one;
        self.monomial += other.monomial;
        self.discharged += other.discharged;
        self.exported += other.exported;
    }

    pub fn conservation_ok(&self) -> bool {
        self.exported == self.monomial - self.discharged && self.det_one >= self.monomial
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub id: String,
    pub cell: String,
    pub crossings: u32,
    pub pd: String,
    pub dt: String,
    pub certifier_exit: Option<i32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    /// cell key: "p<cert>-n<crossings>" or "closure-n<crossings>"
    pub cells: BTreeMap<String, CellStats>,
    pub survivors: Vec<Survivor>,
    pub units_total: u64,
    pub units_done: u64,
}

impl ScanReport {
    pub fn totals(&self) -> CellStats {
        let mut t = CellStats::default();
        for c in self.cells.values() {
            t.merge(c);
        }
        t
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "cell\tconsidered\tskipped_multicomponent\tdet_one\tmonomial\tdischarged\texported\n",
        );
        for (key, c) in &self.cells {
            let _ = writeln!(
                out,
                "{key}\t{}\t{}\t{}\t{}\t{}\t{}",
                c.considered,
                c.skipped_multicomponent,
                c.det_one,
                c.monomial,
                c.discharged,
                c.exported
            );
        }
        let t = self.totals();
        let _ = writeln!(
            out,
            "TOTAL\t{}\t{}\t{}\t{}\t{}\t{}",
            t.considered, t.skipped_multicomponent, t.det_one, t.monomial, t.discharged, t.exported
        );
        out
    }
}

// ---------------------------------------------------------------------------
// Work units
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum Unit {
    /// all assignments of given total crossings into the polyhedron
    Poly { poly_idx: usize, total: u32 },
    /// numerator closures of all records at this crossing count
    Closures { total: u32 },
}

struct Prepared {
    polys: Vec<PreparedPoly>,
    /// per crossing count, usable records
    levels: Vec<Vec<PreparedTangle>>,
    max_crossings: u32,
}

struct PreparedPoly {
    poly: PlanarQuartic,
    plan: ContractionPlan,
    shadow: skein::Shadow,
    cell_prefix: String,
}

struct PreparedTangle {
    expr: TangleExpr,
    crossings: u32,
    /// coefficient pairs and pairings for both orientations
    coeffs: [(skein::GradedCoeff, skein::GradedCoeff); 2],
    dets: [(crate::laurent::DetValue, crate::laurent::DetValue); 2],
    pairings: [EndpointPairing; 2],
}

impl PreparedTangle {
    fn new(rec: &TangleRecord) -> PreparedTangle {
        let g0 = rec.bracket.clone();
        let g1 = crate::tangle::rotate_bracket(&rec.bracket);
        let c0 = skein::GradedCoeff::from_bracket(&g0);
        let c1 = skein::GradedCoeff::from_bracket(&g1);
        let d = |c: &(skein::GradedCoeff, skein::GradedCoeff)| {
            (
                crate::laurent::DetValue::from_eighth_power(c.0.shift, c.0.poly.eval_neg_one()),
                crate::laurent::DetValue::from_eighth_power(c.1.shift, c.1.poly.eval_neg_one()),
            )
        };
        PreparedTangle {
            expr: rec.expr.clone(),
            crossings: rec.crossings,
            dets: [d(&c0), d(&c1)],
            coeffs: [c0, c1],
            pairings: [rec.pairing, rec.pairing.rotated()],
        }
    }
}

fn prepare(config: &ScanConfig) -> Result<Prepared, ScanError> {
    let table: TangleTable = tangle_table::load_table(&config.tangles_path)?;
    let mut all_polys = polyhedra::load_polyhedra(&config.polyhedra_path)?;
    all_polys.sort_by_key(|p| p.cert);
    let mut polys = Vec::new();
    for p in all_polys {
        if p.thin && !config.no_prune {
            continue;
        }
        if p.vertex_count() as u32 > config.max_crossings {
            continue;
        }
        let shadow = skein::Shadow::from_polyhedron(&p);
        let order = polyhedra::contraction_order(&p.graph);
        let plan = ContractionPlan::new(&shadow, &order)?;
        polys.push(PreparedPoly {
            cell_prefix: format!("p{}", &p.cert_hex()[16..]),
            shadow,
            plan,
            poly: p,
        });
    }
    let mut levels: Vec<Vec<PreparedTangle>> = (0..=config.max_crossings as usize)
        .map(|_| Vec::new())
        .collect();
    for rec in table.all_records() {
        if rec.crossings > config.max_crossings {
            continue;
        }
        if !config.no_prune {
            match rec.trivializable {
                Some(true) => {}
                Some(false) => continue,
                None => return Err(ScanError::MissingTrivializability),
            }
        }
        levels[rec.crossings as usize].push(PreparedTangle::new(rec));
    }
    Ok(Prepared {
        polys,
        levels,
        max_crossings: config.max_crossings,
    })
}

fn unit_list(prep: &Prepared) -> Vec<Unit> {
    let mut units = Vec::new();
    for (pi, p) in prep.polys.iter().enumerate() {
        let v = p.poly.vertex_count() as u32;
        for total in v..=prep.max_crossings {
            units.push(Unit::Poly {
                poly_idx: pi,
                total,
            });
        }
    }
    for total in 1..=prep.max_crossings {
        units.push(Unit::Closures { total });
    }
    units
}

// ---------------------------------------------------------------------------
// Unit processing
// ---------------------------------------------------------------------------

#[derive(Default)]
struct UnitResult {
    cells: BTreeMap<String, CellStats>,
    /// (cell, crossings, pd, dt) in deterministic order
    survivors: Vec<(String, u32, String, String)>,
}

fn process_unit(prep: &Prepared, unit: &Unit) -> Result<UnitResult, ScanError> {
    match unit {
        Unit::Poly { poly_idx, total } => process_poly_unit(prep, *poly_idx, *total),
        Unit::Closures { total } => process_closures_unit(prep, *total),
    }
}

fn process_closures_unit(prep: &Prepared, total: u32) -> Result<UnitResult, ScanError> {
    let mut out = UnitResult::default();
    let cell_key = format!("closure-n{total:02}");
    let cell = out.cells.entry(cell_key.clone()).or_default();
    for rec in &prep.levels[total as usize] {
        // numerator closures of the representative and its reflection
        // (the latter is the denominator closure of the representative)
        for refl in [false, true] {
            let expr = if refl {
                TangleExpr::reflect(rec.expr.clone())
            } else {
                rec.expr.clone()
            };
            let pairing = if refl {
                rec.pairings[0].reflected()
            } else {
                rec.pairings[0]
            };
            // numerator closure is a knot unless the tangle is zero-type
            if pairing == EndpointPairing::ZeroType {
                cell.skipped_multicomponent += 1;
                continue;
            }
            cell.considered += 1;
            let bracket = crate::tangle::closure_bracket(
                &expr.bracket().expect("records are loop-free"),
                ClosureKind::Numerator,
            );
            let detval = bracket.eval_det_point();
            let n2 = detval.norm_sqr();
            if n2 != Int::from(1) {
                continue;
            }
            cell.det_one += 1;
            if !bracket.is_monomial() {
                continue;
            }
            cell.monomial += 1;
            let d = diagram::tangle_closure_diagram(&expr, ClosureKind::Numerator)?;
            debug_assert_eq!(d.bracket()?.0, bracket, "closure bracket cross-check");
            match passmove::discharge_survivor(&d)? {
                DischargeOutcome::Reduced(_) => {
                    cell.discharged += 1;
                }
                DischargeOutcome::Irreducible => {
                    cell.exported += 1;
                    let pd = diagram::to_pd_string(&d)?;
                    let dt = diagram::to_dt_string(&d)?;
                    out.survivors.push((cell_key.clone(), total, pd, dt));
                }
            }
        }
    }
    Ok(out)
}

fn process_poly_unit(prep: &Prepared, poly_idx: usize, total: u32) -> Result<UnitResult, ScanError> {
    let p = &prep.polys[poly_idx];
    let v = p.poly.vertex_count();
    let mut out = UnitResult::default();
    let cell_key = format!("{}-n{total:02}", p.cell_prefix);
    let mut composition: Vec<u32> = Vec::new();
    compositions(total, v as u32, &mut composition, &mut |comp| {
        scan_composition(prep, poly_idx, comp, &cell_key, &mut out)
    })?;
    Ok(out)
}

/// Enumerate compositions of `total` into `parts` positive parts, lex order.
fn compositions<F: FnMut(&[u32]) -> Result<(), ScanError>>(
    total: u32,
    parts: u32,
    current: &mut Vec<u32>,
    f: &mut F,
) -> Result<(), ScanError> {
    if parts == 1 {
        if total >= 1 {
            current.push(total);
            f(current)?;
            current.pop();
        }
        return Ok(());
    }
    for first in 1..=(total - (parts - 1)) {
        current.push(first);
        compositions(total - first, parts - 1, current, f)?;
        current.pop();
    }
    Ok(())
}

fn scan_composition(
    prep: &Prepared,
    poly_idx: usize,
    comp: &[u32],
    cell_key: &str,
    out: &mut UnitResult,
) -> Result<(), ScanError> {
    let p = &prep.polys[poly_idx];
    let v = comp.len();
    // any empty level kills the whole composition
    if comp.iter().any(|&c| prep.levels[c as usize].is_empty()) {
        return Ok(());
    }
    let total: u32 = comp.iter().sum();
    let mut choice = vec![0usize; v];
    // borrow the cell once; survivors buffer separately
    let mut survivors: Vec<(String, u32, String, String)> = Vec::new();
    let cell = out.cells.entry(cell_key.to_string()).or_default();
    loop {
        // orientation masks
        for mask in 0..(1u32 << v) {
            let records: Vec<(&PreparedTangle, usize)> = choice
                .iter()
                .enumerate()
                .map(|(vert, &ci)| {
                    let o = ((mask >> vert) & 1) as usize;
                    (&prep.levels[comp[vert] as usize][ci], o)
                })
                .collect();
            // cheap component pre-filter from endpoint pairings
            let pairings: Vec<EndpointPairing> =
                records.iter().map(|(r, o)| r.pairings[*o]).collect();
            if p.shadow.component_count(&pairings) != 1 {
                cell.skipped_multicomponent += 1;
                continue;
            }
            cell.considered += 1;
            // scalar determinant pass
            let det_coeffs: Vec<_> = records.iter().map(|(r, o)| r.dets[*o].clone()).collect();
            let detval: crate::laurent::DetValue = p.plan.contract(&det_coeffs);
            if detval.norm_sqr() != Int::from(1) {
                continue;
            }
            cell.det_one += 1;
            // full polynomial bracket
            let coeffs: Vec<_> = records.iter().map(|(r, o)| r.coeffs[*o].clone()).collect();
            let bracket = p.plan.contract(&coeffs).to_closed();
            if !bracket.is_monomial() {
                continue;
            }
            cell.monomial += 1;
            // assemble the flat diagram and try to discharge it
            let assignment: Vec<(TangleExpr, Orientation)> = records
                .iter()
                .map(|(r, o)| {
                    (
                        r.expr.clone(),
                        if *o == 0 {
                            Orientation::AsStored
                        } else {
                            Orientation::QuarterTurn
                        },
                    )
                })
                .collect();
            let d = diagram::assemble(&p.poly, &assignment)?;
            debug_assert_eq!(d.bracket()?.0, bracket, "assembly bracket cross-check");
            match passmove::discharge_survivor(&d)? {
                DischargeOutcome::Reduced(_) => {
                    cell.discharged += 1;
                }
                DischargeOutcome::Irreducible => {
                    cell.exported += 1;
                    let pd = diagram::to_pd_string(&d)?;
                    let dt = diagram::to_dt_string(&d)?;
                    survivors.push((cell_key.to_string(), total, pd, dt));
                }
            }
        }
        // advance the per-vertex record choice (odometer)
        let mut i = 0;
        loop {
            if i == v {
                out.survivors.extend(survivors);
                return Ok(());
            }
            choice[i] += 1;
            if choice[i] < prep.levels[comp[i] as usize].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

const CHECKPOINT_MAGIC: &[u8; 4] = b"KSCP";

fn write_checkpoint(
    path: &Path,
    config_hash: &[u8; 32],
    next_unit: u64,
    report: &ScanReport,
) -> Result<(), ScanError> {
    let body = serde_json::to_vec(report)?;
    let mut frame = Vec::with_capacity(body.len() + 64);
    frame.extend_from_slice(CHECKPOINT_MAGIC);
    frame.extend_from_slice(&1u32.to_le_bytes());
    frame.extend_from_slice(config_hash);
    frame.extend_from_slice(&next_unit.to_le_bytes());
    frame.extend_from_slice(&(body.len() as u64).to_le_bytes());
    frame.extend_from_slice(&body);
    let digest: [u8; 32] = Sha256::digest(&frame).into();
    let mut file = std::fs::File::create(path)?;
    file.write_all(&(frame.len() as u64).to_le_bytes())?;
    file.write_all(&frame)?;
    file.write_all(&digest)?;
    Ok(())
}

fn read_checkpoint(
    path: &Path,
    config_hash: &[u8; 32],
) -> Result<(u64, ScanReport), ScanError> {
    let data = std::fs::read(path)?;
    if data.len() < 8 + 32 {
        return Err(ScanError::Checkpoint("truncated".into()));
    }
    let len = u64::from_le_bytes(data[..8].try_into().unwrap()) as usize;
    if data.len() != 8 + len + 32 {
        return Err(ScanError::Checkpoint("length mismatch".into()));
    }
    let frame = &data[8..8 + len];
    let digest: [u8; 32] = Sha256::digest(frame).into();
    if digest != data[8 + len..] {
        return Err(ScanError::Checkpoint("content hash mismatch".into()));
    }
    if &frame[..4] != CHECKPOINT_MAGIC {
        return Err(ScanError::Checkpoint("bad magic".into()));
    }
    if frame[4..8] != 1u32.to_le_bytes() {
        return Err(ScanError::Checkpoint("unsupported version".into()));
    }
    if &frame[8..40] != config_hash {
        return Err(ScanError::Checkpoint("config mismatch".into()));
    }
    let next_unit = u64::from_le_bytes(frame[40..48].try_into().unwrap());
    let body_len = u64::from_le_bytes(frame[48..56].try_into().unwrap()) as usize;
    let report: ScanReport = serde_json::from_slice(&frame[56..56 + body_len])?;
    Ok((next_unit, report))
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

pub struct ScanOutcome {
    pub report: ScanReport,
    /// true when the run stopped early due to max_units
    pub interrupted: bool,
}

pub fn run_scan(config: &ScanConfig) -> Result<ScanOutcome, ScanError> {
    std::fs::create_dir_all(&config.out_dir)?;
    let prep = prepare(config)?;
    let units = unit_list(&prep);
    let config_hash = config.content_hash();
    let ckpt_path = config.out_dir.join("checkpoint.bin");

    let (mut cursor, mut report) = if config.resume && ckpt_path.exists() {
        let (next, rep) = read_checkpoint(&ckpt_path, &config_hash)?;
        (next as usize, rep)
    } else {
        (
            0,
            ScanReport {
                units_total: units.len() as u64,
                ..Default::default()
            },
        )
    };
    report.units_total = units.len() as u64;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .expect("thread pool");

    let mut processed_now = 0usize;
    let mut interrupted = false;
    while cursor < units.len() {
        if let Some(maxu) = config.max_units {
            if processed_now >= maxu {
                interrupted = true;
                break;
            }
        }
        let chunk_len = config
            .checkpoint_every
            .min(units.len() - cursor)
            .min(config.max_units.map_or(usize::MAX, |m| m - processed_now));
        let chunk: Vec<usize> = (cursor..cursor + chunk_len).collect();
        let results: Result<Vec<(usize, UnitResult)>, ScanError> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&ui| process_unit(&prep, &units[ui]).map(|r| (ui, r)))
                .collect()
        });
        let mut results = results?;
        results.sort_by_key(|(ui, _)| *ui);
        for (_, unit_result) in results {
            for (key, stats) in unit_result.cells {
                report.cells.entry(key).or_default().merge(&stats);
            }
            for (cell, crossings, pd, dt) in unit_result.survivors {
                let id = format!("{cell}-s{:05}", report.survivors.len());
                report.survivors.push(Survivor {
                    id,
                    cell,
                    crossings,
                    pd,
                    dt,
                    certifier_exit: None,
                });
            }
        }
        cursor += chunk_len;
        processed_now += chunk_len;
        report.units_done = cursor as u64;
        write_checkpoint(&ckpt_path, &config_hash, cursor as u64, &report)?;
    }

    if !interrupted {
        finalize(config, &mut report)?;
    }
    Ok(ScanOutcome {
        report,
        interrupted,
    })
}

fn finalize(config: &ScanConfig, report: &mut ScanReport) -> Result<(), ScanError> {
    let surv_dir = config.out_dir.join("survivors");
    std::fs::create_dir_all(&surv_dir)?;
    for s in report.survivors.iter_mut() {
        let pd_path = surv_dir.join(format!("{}.pd", s.id));
        std::fs::write(&pd_path, format!("{}\n", s.pd))?;
        std::fs::write(surv_dir.join(format!("{}.dt", s.id)), format!("{}\n", s.dt))?;
        if let Some(cmd) = &config.certifier {
            let status = std::process::Command::new(cmd)
                .arg(&pd_path)
                .status()
                .map(|st| st.code().unwrap_or(-1))
                .unwrap_or(-1);
            s.certifier_exit = Some(status);
        }
    }
    std::fs::write(config.out_dir.join("report.tsv"), report.to_tsv())?;
    std::fs::write(
        config.out_dir.join("report.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    Ok(())
}

/// Re-parse every exported survivor and compare brackets (used by the
/// acceptance suite and after resumed runs).
pub fn verify_survivors(report: &ScanReport) -> Result<bool, ScanError> {
    for s in &report.survivors {
        let d: FlatDiagram = diagram::parse_pd(&s.pd)?;
        let (bracket, monomial) = d.bracket()?;
        if !monomial {
            return Ok(false);
        }
        let d2 = diagram::parse_dt(&s.dt)?;
        let (b2, _) = d2.bracket()?;
        // DT reconstruction may mirror the diagram
        let mirrored = crate::tangle::ClosedBracket::normalize(
            -bracket.shift,
            bracket.poly.reversed(),
        );
        if b2 != bracket && b2 != mirrored {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_setup(dir: &Path, max: u32) -> ScanConfig {
        std::fs::create_dir_all(dir).unwrap();
        let tpath = dir.join("tangles.tsv");
        let ppath = dir.join("polyhedra.tsv");
        let table = tangle_table::enumerate_algebraic(max.saturating_sub(5).max(2), true);
        tangle_table::save_table(&table, &tpath).unwrap();
        let polys = polyhedra::generate_polyhedra(6);
        polyhedra::save_polyhedra(&polys, &ppath).unwrap();
        ScanConfig::new(max, tpath, ppath, dir.join("out"))
    }

    #[test]
    fn mini_scan_budget_seven_is_deterministic_and_conserved() {
        let dir = std::env::temp_dir().join("knotscan-scan-test");
        let _ = std::fs::remove_dir_all(&dir);
        let config = tiny_setup(&dir, 7);
        let out1 = run_scan(&config).unwrap();
        assert!(!out1.interrupted);
        let t = out1.report.totals();
        assert!(t.considered > 0, "scan visited no diagrams");
        for c in out1.report.cells.values() {
            assert!(c.conservation_ok(), "conservation violated: {c:?}");
        }
        assert!(verify_survivors(&out1.report).unwrap());
        // byte-identical re-run
        let config2 = ScanConfig {
            out_dir: dir.join("out2"),
            ..config.clone()
        };
        let out2 = run_scan(&config2).unwrap();
        assert_eq!(
            serde_json::to_string(&out1.report).unwrap(),
            serde_json::to_string(&out2.report).unwrap()
        );
    }

    #[test]
    fn kill_and_resume_reproduces_report() {
        let dir = std::env::temp_dir().join("knotscan-resume-test");
        let _ = std::fs::remove_dir_all(&dir);
        let mut config = tiny_setup(&dir, 7);
        config.checkpoint_every = 2;
        let full = run_scan(&ScanConfig {
            out_dir: dir.join("full"),
            ..config.clone()
        })
        .unwrap();
        // kill after 3 units, then resume
        let mut partial = ScanConfig {
            out_dir: dir.join("resumed"),
            max_units: Some(3),
            checkpoint_every: 2,
            ..config.clone()
        };
        let first = run_scan(&partial).unwrap();
        assert!(first.interrupted);
        partial.max_units = None;
        partial.resume = true;
        let resumed = run_scan(&partial).unwrap();
        assert!(!resumed.interrupted);
        assert_eq!(
            serde_json::to_string(&full.report).unwrap(),
            serde_json::to_string(&resumed.report).unwrap()
        );
        config.max_units = None;
    }

    #[test]
    fn checkpoint_corruption_detected() {
        let dir = std::env::temp_dir().join("knotscan-ckpt-test");
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        let report = ScanReport::default();
        let hash = [7u8; 32];
        let path = dir.join("checkpoint.bin");
        write_checkpoint(&path, &hash, 5, &report).unwrap();
        assert!(read_checkpoint(&path, &hash).is_ok());
        // flip a byte
        let mut data = std::fs::read(&path).unwrap();
        let mid = data.len() / 2;
        data[mid] ^= 0xff;
        std::fs::write(&path, &data).unwrap();
        assert!(read_checkpoint(&path, &hash).is_err());
    }

    #[test]
    fn empty_tangle_table_gives_empty_report() {
        let dir = std::env::temp_dir().join("knotscan-empty-test");
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        let tpath = dir.join("tangles.tsv");
        let table = tangle_table::TangleTable {
            levels: Default::default(),
            max_crossings: 0,
        };
        tangle_table::save_table(&table, &tpath).unwrap();
        let ppath = dir.join("polyhedra.tsv");
        polyhedra::save_polyhedra(&polyhedra::generate_polyhedra(6), &ppath).unwrap();
        let config = ScanConfig::new(6, tpath, ppath, dir.join("out"));
        let out = run_scan(&config).unwrap();
        assert_eq!(out.report.totals().considered, 0);
    }
}
