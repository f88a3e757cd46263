//! Experiment harness: paired multi-run execution of the configured
//! algorithms, deterministic file export (summary, per-run archive dumps,
//! plot-ready CSVs), and paired comparison of two result sets.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::archive::ArchiveEntry;
use crate::energy::propulsion_power;
use crate::engine::{run, AlgoConfig, RunOutput};
use crate::error::{Error, Result};
use crate::format::fmt_sig6;
use crate::metrics::{best_per_objective, hypervolume, knee_index, reference_point};
use crate::objective::ObjectiveVector;
use crate::scenario::Scenario;
use crate::solution::{path_segments, trajectory_polyline};

/// One finished run of one algorithm.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub algorithm: String,
    /// 1-based run index.
    pub run: usize,
    pub seed: u64,
    pub output: RunOutput,
    /// Wall-clock time of the run; informational, never exported.
    pub elapsed: Duration,
}

/// Per-run seed: a splitmix64 mix of the master seed offset by the run index,
/// so run r of every algorithm shares one seed (paired comparisons) while
/// distinct runs decorrelate.
pub fn derive_run_seed(master_seed: u64, run: usize) -> u64 {
    let mut z = master_seed
        .wrapping_add((run as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Run every algorithm `runs` times, in parallel across runs. Records come
/// back grouped by algorithm in input order with runs ascending.
pub fn run_experiment(
    scn: &Scenario,
    algorithms: &[(String, AlgoConfig)],
    runs: usize,
    master_seed: u64,
) -> Result<Vec<RunRecord>> {
    if runs < 1 {
        return Err(Error::Config("runs must be at least 1".to_string()));
    }
    if algorithms.is_empty() {
        return Err(Error::Config("at least one algorithm is required".to_string()));
    }
    let mut labels: Vec<&str> = algorithms.iter().map(|(n, _)| n.as_str()).collect();
    labels.sort();
    labels.dedup();
    if labels.len() != algorithms.len() {
        return Err(Error::Config("algorithm labels must be unique".to_string()));
    }
    for (_, cfg) in algorithms {
        cfg.validate()?;
    }
    let jobs: Vec<(usize, usize)> =
        (0..algorithms.len()).flat_map(|a| (1..=runs).map(move |r| (a, r))).collect();
    jobs.par_iter()
        .map(|&(a, r)| {
            let (name, base) = &algorithms[a];
            let mut cfg = base.clone();
            cfg.seed = derive_run_seed(master_seed, r);
            let started = Instant::now();
            let output = run(scn, &cfg)?;
            Ok(RunRecord {
                algorithm: name.clone(),
                run: r,
                seed: cfg.seed,
                output,
                elapsed: started.elapsed(),
            })
        })
        .collect()
}

/// The archive entry the trajectory outputs use: the knee point, closest to
/// the ideal in normalized objective space.
pub fn knee_entry(rec: &RunRecord) -> Result<&ArchiveEntry> {
    let idx = knee_index(&rec.output.archive.objectives()).ok_or(Error::EmptyArchive)?;
    Ok(&rec.output.archive.entries()[idx])
}

fn file_label(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '-' }).collect()
}

fn check_labels(records: &[RunRecord]) -> Result<Vec<String>> {
    let mut order: Vec<String> = Vec::new();
    for rec in records {
        let label = &rec.algorithm;
        if label.is_empty() || label.contains([',', '"', '\n', '\r']) {
            return Err(Error::Config(format!(
                "algorithm label {label:?} cannot be exported; avoid commas, quotes, and line breaks"
            )));
        }
        if !order.contains(label) {
            order.push(label.clone());
        }
    }
    let mut sanitized: Vec<String> = order.iter().map(|n| file_label(n)).collect();
    sanitized.sort();
    sanitized.dedup();
    if sanitized.len() != order.len() {
        return Err(Error::Config("algorithm labels collide after filename sanitization".to_string()));
    }
    let mut keys: Vec<(&str, usize)> = records.iter().map(|r| (r.algorithm.as_str(), r.run)).collect();
    keys.sort();
    for pair in keys.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::Config(format!("duplicate record for algorithm {} run {}", pair[0].0, pair[0].1)));
        }
    }
    Ok(order)
}

fn json_f64_array(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|&x| fmt_sig6(x)).collect();
    format!("[{}]", items.join(","))
}

fn json_usize_array(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

/// Write the complete result set into `out_dir`: `summary.csv` (one row per
/// run, hypervolume against a reference shared by every record), one
/// `archive_<algo>_run<NNN>.jsonl` dump per run, and per-algorithm
/// `scatter_`/`trajectories_`/`segments_` CSVs. Byte-identical for identical
/// inputs. All floats are printed to six significant digits.
pub fn export_results(
    records: &[RunRecord],
    scn: &Scenario,
    config_hash: &str,
    placement_seed: u64,
    out_dir: &Path,
) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Config("no records to export".to_string()));
    }
    let order = check_labels(records)?;
    fs::create_dir_all(out_dir)?;

    let mut union: Vec<ObjectiveVector> = Vec::new();
    for rec in records {
        union.extend(rec.output.archive.objectives());
    }
    let shared = reference_point(&union)?;

    let mut w = BufWriter::new(fs::File::create(out_dir.join("summary.csv"))?);
    writeln!(w, "algorithm,run,best_f1_bps,best_f2_J,best_f3_J,hypervolume,trajectory_m")?;
    for rec in records {
        let objs = rec.output.archive.objectives();
        let (rate, dev, uav) = best_per_objective(&objs)?;
        let hv = hypervolume(&objs, &shared)?;
        let knee = &knee_entry(rec)?.solution;
        let length: f64 = path_segments(knee, scn).iter().map(|s| s.length_m).sum();
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            rec.algorithm,
            rec.run,
            fmt_sig6(rate),
            fmt_sig6(dev),
            fmt_sig6(uav),
            fmt_sig6(hv),
            fmt_sig6(length)
        )?;
    }
    w.flush()?;

    for algo in &order {
        let mut recs: Vec<&RunRecord> = records.iter().filter(|r| &r.algorithm == algo).collect();
        recs.sort_by_key(|r| r.run);
        let base = file_label(algo);

        for rec in &recs {
            let path = out_dir.join(format!("archive_{base}_run{:03}.jsonl", rec.run));
            let mut w = BufWriter::new(fs::File::create(path)?);
            let c = &rec.output.counters;
            let tr = rec.output.trace_ref.0;
            writeln!(
                w,
                "{{\"algorithm\":{},\"run\":{},\"seed\":{},\"config_hash\":\"{config_hash}\",\
                 \"placement_seed\":{placement_seed},\"trace_ref\":[{},{},{}],\"entries\":{},\
                 \"trajectory_rule\":\"knee\",\"counters\":{{\"guided\":{},\"territorial\":{},\
                 \"cauchy\":{},\"migrations\":{},\"accepted\":{},\"rank_regressions\":{}}}}}",
                serde_json::to_string(&rec.algorithm).expect("string serializes"),
                rec.run,
                rec.seed,
                fmt_sig6(tr[0]),
                fmt_sig6(tr[1]),
                fmt_sig6(tr[2]),
                rec.output.archive.len(),
                c.guided,
                c.territorial,
                c.cauchy,
                c.migrations,
                c.accepted,
                c.rank_regressions
            )?;
            for e in rec.output.archive.entries() {
                let o = e.objectives;
                let s = &e.solution;
                writeln!(
                    w,
                    "{{\"rate_bps\":{},\"device_energy_j\":{},\"uav_energy_j\":{},\
                     \"hover_x_m\":{},\"hover_y_m\":{},\"visit_seq\":{},\
                     \"speeds_mps\":{},\"powers_w\":{}}}",
                    fmt_sig6(o.min_rate_bps()),
                    fmt_sig6(o.device_energy_j),
                    fmt_sig6(o.uav_energy_j),
                    json_f64_array(&s.hover_x),
                    json_f64_array(&s.hover_y),
                    json_usize_array(&s.visit_seq),
                    json_f64_array(&s.speeds),
                    json_f64_array(&s.powers)
                )?;
            }
            w.flush()?;
        }

        let mut w = BufWriter::new(fs::File::create(out_dir.join(format!("scatter_{base}.csv")))?);
        writeln!(w, "run,f1_bps,f2_J,f3_J")?;
        for rec in &recs {
            for o in rec.output.archive.objectives() {
                writeln!(
                    w,
                    "{},{},{},{}",
                    rec.run,
                    fmt_sig6(o.min_rate_bps()),
                    fmt_sig6(o.device_energy_j),
                    fmt_sig6(o.uav_energy_j)
                )?;
            }
        }
        w.flush()?;

        let mut w = BufWriter::new(fs::File::create(out_dir.join(format!("trajectories_{base}.csv")))?);
        writeln!(w, "run,vertex,x_m,y_m")?;
        for rec in &recs {
            let knee = &knee_entry(rec)?.solution;
            for (i, p) in trajectory_polyline(knee, scn).iter().enumerate() {
                writeln!(w, "{},{},{},{}", rec.run, i, fmt_sig6(p[0]), fmt_sig6(p[1]))?;
            }
        }
        w.flush()?;

        let mut w = BufWriter::new(fs::File::create(out_dir.join(format!("segments_{base}.csv")))?);
        writeln!(w, "run,segment,from_x_m,from_y_m,to_x_m,to_y_m,length_m,speed_mps,power_w")?;
        for rec in &recs {
            let knee = &knee_entry(rec)?.solution;
            let pts = trajectory_polyline(knee, scn);
            for (i, seg) in path_segments(knee, scn).iter().enumerate() {
                let (a, b) = (pts[i], pts[i + 1]);
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{}",
                    rec.run,
                    i + 1,
                    fmt_sig6(a[0]),
                    fmt_sig6(a[1]),
                    fmt_sig6(b[0]),
                    fmt_sig6(b[1]),
                    fmt_sig6(seg.length_m),
                    fmt_sig6(seg.speed_mps),
                    fmt_sig6(propulsion_power(seg.speed_mps, &scn.uav_power))
                )?;
            }
        }
        w.flush()?;
    }
    Ok(())
}

/// The per-run objective front of one algorithm, taken from finished records
/// or parsed back from dumps.
#[derive(Debug, Clone)]
pub struct RunFront {
    pub run: usize,
    pub objectives: Vec<ObjectiveVector>,
}

/// Extract the per-run fronts of one algorithm from finished records.
pub fn fronts_of(records: &[RunRecord], algorithm: &str) -> Vec<RunFront> {
    let mut fronts: Vec<RunFront> = records
        .iter()
        .filter(|r| r.algorithm == algorithm)
        .map(|r| RunFront { run: r.run, objectives: r.output.archive.objectives() })
        .collect();
    fronts.sort_by_key(|f| f.run);
    fronts
}

/// Paired per-run outcome: hypervolume and per-objective bests
/// (best rate, best device energy, best propulsion energy) per side.
#[derive(Debug, Clone)]
pub struct RunComparison {
    pub run: usize,
    pub hv_a: f64,
    pub hv_b: f64,
    pub best_a: (f64, f64, f64),
    pub best_b: (f64, f64, f64),
}

/// Paired comparison of two result sets over one shared reference point.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub name_a: String,
    pub name_b: String,
    pub reference: [f64; 3],
    pub runs: Vec<RunComparison>,
    pub mean_hv_a: f64,
    pub mean_hv_b: f64,
    /// Fraction of runs A beats B per criterion; ties count one half.
    pub win_rate_f1: f64,
    pub win_rate_f2: f64,
    pub win_rate_f3: f64,
    pub win_rate_hv: f64,
    /// Fraction of runs where A strictly wins at least two of the three
    /// per-objective bests; ties earn nothing.
    pub two_of_three_fraction: f64,
}

/// Compare two algorithms run by run. Both sides must cover exactly the same
/// run indices; hypervolumes use one reference derived from the union of all
/// points of both sides.
pub fn compare_fronts(name_a: &str, a: &[RunFront], name_b: &str, b: &[RunFront]) -> Result<CompareReport> {
    if a.len() != b.len() {
        return Err(Error::Unpaired(format!("{name_a} has {} runs, {name_b} has {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(Error::Unpaired("no runs to compare".to_string()));
    }
    let mut a: Vec<&RunFront> = a.iter().collect();
    let mut b: Vec<&RunFront> = b.iter().collect();
    a.sort_by_key(|f| f.run);
    b.sort_by_key(|f| f.run);
    for (fa, fb) in a.iter().zip(&b) {
        if fa.run != fb.run {
            return Err(Error::Unpaired(format!(
                "run {} of {name_a} has no counterpart in {name_b} (found run {})",
                fa.run, fb.run
            )));
        }
    }
    let mut union: Vec<ObjectiveVector> = Vec::new();
    for f in a.iter().chain(b.iter()) {
        union.extend(f.objectives.iter().copied());
    }
    let reference = reference_point(&union)?;
    let mut runs = Vec::with_capacity(a.len());
    for (fa, fb) in a.iter().zip(&b) {
        runs.push(RunComparison {
            run: fa.run,
            hv_a: hypervolume(&fa.objectives, &reference)?,
            hv_b: hypervolume(&fb.objectives, &reference)?,
            best_a: best_per_objective(&fa.objectives)?,
            best_b: best_per_objective(&fb.objectives)?,
        });
    }
    let n = runs.len() as f64;
    let score = |win: bool, tie: bool| if win { 1.0 } else if tie { 0.5 } else { 0.0 };
    let (mut w1, mut w2, mut w3, mut whv, mut two) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut sum_a, mut sum_b) = (0.0, 0.0);
    for rc in &runs {
        sum_a += rc.hv_a;
        sum_b += rc.hv_b;
        w1 += score(rc.best_a.0 > rc.best_b.0, rc.best_a.0 == rc.best_b.0);
        w2 += score(rc.best_a.1 < rc.best_b.1, rc.best_a.1 == rc.best_b.1);
        w3 += score(rc.best_a.2 < rc.best_b.2, rc.best_a.2 == rc.best_b.2);
        whv += score(rc.hv_a > rc.hv_b, rc.hv_a == rc.hv_b);
        let strict = u32::from(rc.best_a.0 > rc.best_b.0)
            + u32::from(rc.best_a.1 < rc.best_b.1)
            + u32::from(rc.best_a.2 < rc.best_b.2);
        if strict >= 2 {
            two += 1.0;
        }
    }
    Ok(CompareReport {
        name_a: name_a.to_string(),
        name_b: name_b.to_string(),
        reference: reference.0,
        runs,
        mean_hv_a: sum_a / n,
        mean_hv_b: sum_b / n,
        win_rate_f1: w1 / n,
        win_rate_f2: w2 / n,
        win_rate_f3: w3 / n,
        win_rate_hv: whv / n,
        two_of_three_fraction: two / n,
    })
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "paired comparison: A = {}, B = {} ({} runs)", self.name_a, self.name_b, self.runs.len())?;
        let r = self.reference;
        writeln!(f, "shared reference point: [{}, {}, {}]", fmt_sig6(r[0]), fmt_sig6(r[1]), fmt_sig6(r[2]))?;
        writeln!(
            f,
            "{:>4} {:>14} {:>14} {:>14} {:>14} {:>14}",
            "run", "hv_A", "hv_B", "d_rate_bps", "d_device_J", "d_uav_J"
        )?;
        for rc in &self.runs {
            writeln!(
                f,
                "{:>4} {:>14} {:>14} {:>14} {:>14} {:>14}",
                rc.run,
                fmt_sig6(rc.hv_a),
                fmt_sig6(rc.hv_b),
                fmt_sig6(rc.best_a.0 - rc.best_b.0),
                fmt_sig6(rc.best_a.1 - rc.best_b.1),
                fmt_sig6(rc.best_a.2 - rc.best_b.2)
            )?;
        }
        writeln!(f, "mean hypervolume: A = {}, B = {}", fmt_sig6(self.mean_hv_a), fmt_sig6(self.mean_hv_b))?;
        writeln!(
            f,
            "win rates for A (ties 0.5): rate {}, device energy {}, propulsion energy {}, hypervolume {}",
            fmt_sig6(self.win_rate_f1),
            fmt_sig6(self.win_rate_f2),
            fmt_sig6(self.win_rate_f3),
            fmt_sig6(self.win_rate_hv)
        )?;
        write!(f, "two-of-three strict wins for A: {}", fmt_sig6(self.two_of_three_fraction))
    }
}

/// Parse every `archive_*.jsonl` dump under `dir`, grouped by algorithm with
/// runs ascending.
pub fn read_dump_dir(dir: &Path) -> Result<BTreeMap<String, Vec<RunFront>>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("archive_") && n.ends_with(".jsonl"))
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::DumpParse(format!("no archive_*.jsonl dumps in {}", dir.display())));
    }
    let mut by_algo: BTreeMap<String, Vec<RunFront>> = BTreeMap::new();
    for path in &paths {
        let (algo, front) = read_dump_file(path)?;
        by_algo.entry(algo).or_default().push(front);
    }
    for (algo, fronts) in &mut by_algo {
        fronts.sort_by_key(|f| f.run);
        for pair in fronts.windows(2) {
            if pair[0].run == pair[1].run {
                return Err(Error::DumpParse(format!("duplicate run {} for algorithm {algo}", pair[0].run)));
            }
        }
    }
    Ok(by_algo)
}

fn read_dump_file(path: &Path) -> Result<(String, RunFront)> {
    let text = fs::read_to_string(path)?;
    let ctx = |line: usize, what: String| Error::DumpParse(format!("{}:{line}: {what}", path.display()));
    let mut lines = text.lines().enumerate();
    let (_, meta_line) = lines.next().ok_or_else(|| ctx(1, "empty dump".to_string()))?;
    let meta: serde_json::Value =
        serde_json::from_str(meta_line).map_err(|e| ctx(1, format!("bad meta line: {e}")))?;
    let algo = meta
        .get("algorithm")
        .and_then(|v| v.as_str())
        .ok_or_else(|| ctx(1, "meta line is missing `algorithm`".to_string()))?
        .to_string();
    let run = meta
        .get("run")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| ctx(1, "meta line is missing `run`".to_string()))? as usize;
    let declared = meta.get("entries").and_then(|v| v.as_u64());
    let mut objectives = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let v: serde_json::Value =
            serde_json::from_str(line).map_err(|e| ctx(i + 1, format!("bad entry: {e}")))?;
        let get = |key: &str| {
            v.get(key).and_then(|x| x.as_f64()).ok_or_else(|| ctx(i + 1, format!("entry is missing `{key}`")))
        };
        let rate = get("rate_bps")?;
        let dev = get("device_energy_j")?;
        let uav = get("uav_energy_j")?;
        objectives.push(ObjectiveVector::new(-rate, dev, uav));
    }
    if let Some(n) = declared {
        if n as usize != objectives.len() {
            return Err(ctx(1, format!("meta declares {n} entries but the file holds {}", objectives.len())));
        }
    }
    Ok((algo, RunFront { run, objectives }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Mode;
    use crate::scenario::test_fixtures;

    fn quick_algo(mode: Mode) -> AlgoConfig {
        let mut cfg = AlgoConfig::new(mode, 0);
        cfg.pop_size = 6;
        cfg.max_iters = 4;
        cfg.archive_cap = 6;
        cfg.migration_period = 12;
        cfg
    }

    fn quick_algos() -> Vec<(String, AlgoConfig)> {
        vec![
            ("improved".to_string(), quick_algo(Mode::Improved)),
            ("baseline".to_string(), quick_algo(Mode::Baseline)),
        ]
    }

    fn quick_records(scn: &Scenario) -> Vec<RunRecord> {
        run_experiment(scn, &quick_algos(), 2, 99).unwrap()
    }

    #[test]
    fn records_come_back_paired_and_ordered() {
        let scn = test_fixtures::tiny();
        let recs = quick_records(&scn);
        assert_eq!(recs.len(), 4);
        let keys: Vec<(&str, usize)> = recs.iter().map(|r| (r.algorithm.as_str(), r.run)).collect();
        assert_eq!(keys, [("improved", 1), ("improved", 2), ("baseline", 1), ("baseline", 2)]);
        assert_eq!(recs[0].seed, recs[2].seed, "paired runs share seeds");
        assert_eq!(recs[1].seed, recs[3].seed);
        assert_ne!(recs[0].seed, recs[1].seed);
    }

    #[test]
    fn run_seeds_match_the_frozen_derivation() {
        assert_eq!(derive_run_seed(2024, 1), 1793612131670815442);
        assert_eq!(derive_run_seed(2024, 2), 5507758030568793471);
        assert_eq!(derive_run_seed(7, 1), 309689372594955804);
        let mut seen: Vec<u64> = (1..=100).map(|r| derive_run_seed(2024, r)).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 100, "run seeds must not collide");
    }

    #[test]
    fn export_is_byte_identical_per_rerun() {
        let scn = test_fixtures::tiny();
        let recs = quick_records(&scn);
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        export_results(&recs, &scn, "cafe01", 42, dir_a.path()).unwrap();
        export_results(&recs, &scn, "cafe01", 42, dir_b.path()).unwrap();
        let list = |d: &Path| {
            let mut v: Vec<String> =
                fs::read_dir(d).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
            v.sort();
            v
        };
        let names = list(dir_a.path());
        assert_eq!(
            names,
            [
                "archive_baseline_run001.jsonl",
                "archive_baseline_run002.jsonl",
                "archive_improved_run001.jsonl",
                "archive_improved_run002.jsonl",
                "scatter_baseline.csv",
                "scatter_improved.csv",
                "segments_baseline.csv",
                "segments_improved.csv",
                "summary.csv",
                "trajectories_baseline.csv",
                "trajectories_improved.csv",
            ]
        );
        assert_eq!(names, list(dir_b.path()));
        for n in &names {
            let a = fs::read(dir_a.path().join(n)).unwrap();
            let b = fs::read(dir_b.path().join(n)).unwrap();
            assert_eq!(a, b, "{n} differs between identical exports");
        }
    }

    #[test]
    fn summary_bests_are_rederivable_from_dumps() {
        let scn = test_fixtures::tiny();
        let recs = quick_records(&scn);
        let dir = tempfile::tempdir().unwrap();
        export_results(&recs, &scn, "cafe01", 42, dir.path()).unwrap();
        let dumps = read_dump_dir(dir.path()).unwrap();
        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        let mut rows = summary.lines();
        assert_eq!(rows.next().unwrap(), "algorithm,run,best_f1_bps,best_f2_J,best_f3_J,hypervolume,trajectory_m");
        let mut checked = 0;
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            let run: usize = cols[1].parse().unwrap();
            let front = dumps[cols[0]].iter().find(|f| f.run == run).unwrap();
            let rate = front.objectives.iter().map(|o| o.min_rate_bps()).fold(f64::NEG_INFINITY, f64::max);
            let dev = front.objectives.iter().map(|o| o.device_energy_j).fold(f64::INFINITY, f64::min);
            let uav = front.objectives.iter().map(|o| o.uav_energy_j).fold(f64::INFINITY, f64::min);
            // Six-significant-digit rounding commutes with min/max, so the
            // dump-derived bests equal the summary fields exactly.
            assert_eq!(cols[2].parse::<f64>().unwrap(), rate, "{row}");
            assert_eq!(cols[3].parse::<f64>().unwrap(), dev, "{row}");
            assert_eq!(cols[4].parse::<f64>().unwrap(), uav, "{row}");
            checked += 1;
        }
        assert_eq!(checked, 4);
    }

    #[test]
    fn trajectory_lengths_round_trip_through_the_files() {
        let scn = test_fixtures::tiny();
        let recs = quick_records(&scn);
        let dir = tempfile::tempdir().unwrap();
        export_results(&recs, &scn, "cafe01", 42, dir.path()).unwrap();
        let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        let mut traj: BTreeMap<(String, usize), f64> = BTreeMap::new();
        for row in summary.lines().skip(1) {
            let c: Vec<&str> = row.split(',').collect();
            traj.insert((c[0].to_string(), c[1].parse().unwrap()), c[6].parse().unwrap());
        }
        for algo in ["improved", "baseline"] {
            let text = fs::read_to_string(dir.path().join(format!("segments_{algo}.csv"))).unwrap();
            let mut sums: BTreeMap<usize, f64> = BTreeMap::new();
            for row in text.lines().skip(1) {
                let c: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
                let run = c[0] as usize;
                let geo = ((c[4] - c[2]).powi(2) + (c[5] - c[3]).powi(2)).sqrt();
                assert!((geo - c[6]).abs() <= 1e-3 * c[6].max(1.0), "{row}");
                *sums.entry(run).or_insert(0.0) += c[6];
            }
            assert_eq!(sums.len(), 2);
            for (run, total) in sums {
                let expect = traj[&(algo.to_string(), run)];
                assert!((total - expect).abs() <= 1e-3 * expect.max(1.0), "{algo} run {run}: {total} vs {expect}");
            }
        }
    }

    #[test]
    fn dumps_round_trip_the_archive_objectives() {
        let scn = test_fixtures::tiny();
        let recs = quick_records(&scn);
        let dir = tempfile::tempdir().unwrap();
        export_results(&recs, &scn, "cafe01", 42, dir.path()).unwrap();
        let dumps = read_dump_dir(dir.path()).unwrap();
        assert_eq!(dumps.keys().cloned().collect::<Vec<_>>(), ["baseline", "improved"]);
        for rec in &recs {
            let front = dumps[&rec.algorithm].iter().find(|f| f.run == rec.run).unwrap();
            let truth = rec.output.archive.objectives();
            assert_eq!(front.objectives.len(), truth.len());
            for (got, want) in front.objectives.iter().zip(&truth) {
                for (g, w) in got.as_array().iter().zip(want.as_array()) {
                    assert!((g - w).abs() <= 1e-5 * w.abs().max(1e-9), "{g} vs {w}");
                }
            }
        }
    }

    #[test]
    fn self_comparison_reports_ties_everywhere() {
        let scn = test_fixtures::tiny();
        let recs = quick_records(&scn);
        let a = fronts_of(&recs, "improved");
        assert_eq!(a.len(), 2);
        let rep = compare_fronts("improved", &a, "improved-copy", &a).unwrap();
        assert_eq!(rep.win_rate_f1, 0.5);
        assert_eq!(rep.win_rate_f2, 0.5);
        assert_eq!(rep.win_rate_f3, 0.5);
        assert_eq!(rep.win_rate_hv, 0.5);
        assert_eq!(rep.two_of_three_fraction, 0.0);
        assert_eq!(rep.mean_hv_a, rep.mean_hv_b);
        for rc in &rep.runs {
            assert_eq!(rc.hv_a, rc.hv_b);
            assert_eq!(rc.best_a, rc.best_b);
        }
        let text = rep.to_string();
        assert!(text.contains("mean hypervolume"), "{text}");
        assert!(text.contains("0.500000"), "{text}");
    }

    #[test]
    fn unpaired_runs_are_rejected() {
        let scn = test_fixtures::tiny();
        let recs = quick_records(&scn);
        let a = fronts_of(&recs, "improved");
        let b: Vec<RunFront> = fronts_of(&recs, "baseline").into_iter().take(1).collect();
        assert!(matches!(compare_fronts("improved", &a, "baseline", &b), Err(Error::Unpaired(_))));
        let shifted: Vec<RunFront> =
            a.iter().map(|f| RunFront { run: f.run + 7, objectives: f.objectives.clone() }).collect();
        assert!(matches!(compare_fronts("improved", &a, "shifted", &shifted), Err(Error::Unpaired(_))));
    }

    #[test]
    fn a_dominating_side_sweeps_the_win_rates() {
        let strong = vec![ObjectiveVector::new(-10.0, 1.0, 1.0)];
        let weak = vec![ObjectiveVector::new(-5.0, 2.0, 2.0)];
        let a: Vec<RunFront> = (1..=3).map(|r| RunFront { run: r, objectives: strong.clone() }).collect();
        let b: Vec<RunFront> = (1..=3).map(|r| RunFront { run: r, objectives: weak.clone() }).collect();
        let rep = compare_fronts("a", &a, "b", &b).unwrap();
        assert_eq!(rep.win_rate_f1, 1.0);
        assert_eq!(rep.win_rate_f2, 1.0);
        assert_eq!(rep.win_rate_f3, 1.0);
        assert_eq!(rep.win_rate_hv, 1.0);
        assert_eq!(rep.two_of_three_fraction, 1.0);
        assert!(rep.mean_hv_a > rep.mean_hv_b);
    }

    #[test]
    fn bad_labels_and_duplicate_records_are_rejected_at_export() {
        let scn = test_fixtures::tiny();
        let recs = quick_records(&scn);
        let dir = tempfile::tempdir().unwrap();
        let mut clash = recs.clone();
        for r in &mut clash {
            r.algorithm = if r.algorithm == "improved" { "a b".to_string() } else { "a-b".to_string() };
        }
        assert!(export_results(&clash, &scn, "c", 42, dir.path()).is_err(), "sanitized collision");
        let mut comma = recs.clone();
        comma[0].algorithm = "a,b".to_string();
        assert!(export_results(&comma, &scn, "c", 42, dir.path()).is_err(), "comma in label");
        let mut dup = recs.clone();
        dup[1].run = 1;
        assert!(export_results(&dup, &scn, "c", 42, dir.path()).is_err(), "duplicate algorithm/run pair");
    }
}
