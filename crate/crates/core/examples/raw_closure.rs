// temporary: regenerate inputs and time the budget-12 mini-scan
use knotscan_core::{polyhedra, scan, tangle_table};
use std::time::Instant;

fn main() {
    let dir = std::path::PathBuf::from("/tmp/knotscan-smoke");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let tpath = dir.join("tangles12.tsv");
    let t = Instant::now();
    let table = tangle_table::enumerate_algebraic(12, true);
    println!("tangle table to 12: {:?}", t.elapsed());
    for c in table.counts() {
        println!("  n={}: total {} triv {}", c.crossings, c.total, c.trivializable);
    }
    tangle_table::save_table(&table, &tpath).unwrap();
    let ppath = dir.join("poly611.tsv");
    let mut polys = Vec::new();
    for v in [6usize, 8, 9, 10, 11] {
        polys.extend(polyhedra::generate_polyhedra(v));
    }
    polyhedra::save_polyhedra(&polys, &ppath).unwrap();
    let t = Instant::now();
    let mut config = scan::ScanConfig::new(12, tpath, ppath, dir.join("out12"));
    config.workers = 4;
    let out = scan::run_scan(&config).unwrap();
    println!("scan budget 12: {:?}", t.elapsed());
    println!("totals: {:?}", out.report.totals());
    println!("survivors: {}", out.report.survivors.len());
    for s in &out.report.survivors {
        println!("  {} ({} crossings): {}", s.id, s.crossings, s.dt);
    }
}
