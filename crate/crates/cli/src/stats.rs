use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rfx_core::{Instance, RandomForest};

use crate::explain::{compute, validate, Kind, Settings};
use crate::CliError;

/// Column order of the stats table. Stable across releases.
pub const COLUMNS: [&str; 7] = [
    "instance",
    "kind",
    "size",
    "elapsed_ms",
    "optimal",
    "probability",
    "status",
];
pub const SUMMARY_COLUMNS: [&str; 5] = ["kind", "count", "mean_size", "stddev_size", "mean_elapsed_ms"];
pub const TRAJECTORY_COLUMNS: [&str; 6] = ["instance", "kind", "step", "elapsed_ms", "size", "cost"];

#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    /// 1-based position of the instance in the input.
    pub instance: usize,
    pub kind: Kind,
    pub size: Option<usize>,
    pub elapsed_ms: Option<f64>,
    pub optimal: Option<bool>,
    pub probability: Option<String>,
    /// `ok`, `partial`, `fallback`, `none` or `error: <message>`.
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub instance: usize,
    pub kind: Kind,
    pub step: usize,
    pub elapsed_ms: f64,
    pub size: usize,
    pub cost: u64,
}

type Slot = Mutex<Option<(StatsRow, Vec<TrajectoryPoint>)>>;

#[derive(Debug, Default)]
pub struct StatsReport {
    pub rows: Vec<StatsRow>,
    pub trajectory: Vec<TrajectoryPoint>,
}

fn run_one(
    forest: &RandomForest,
    x: &Instance,
    id: usize,
    kind: Kind,
    settings: &Settings,
) -> (StatsRow, Vec<TrajectoryPoint>) {
    let mut points = Vec::new();
    let mut record = |r: &rfx_core::explain::Reason| {
        points.push(TrajectoryPoint {
            instance: id,
            kind,
            step: points.len() + 1,
            elapsed_ms: r.elapsed.as_secs_f64() * 1e3,
            size: r.size(),
            cost: r.cost.unwrap_or(r.size() as u64),
        })
    };
    let outcome = compute(forest, x, kind, settings, &mut record).and_then(|o| {
        if let Some(r) = o.reason() {
            validate(forest, kind, settings, r)?;
        }
        Ok(o)
    });
    let row = match outcome {
        Ok(o) => {
            let r = o.reason();
            StatsRow {
                instance: id,
                kind,
                size: r.map(|r| r.size()),
                elapsed_ms: r.map(|r| r.elapsed.as_secs_f64() * 1e3),
                optimal: r.map(|r| r.optimal),
                probability: r.and_then(|r| r.probability.as_ref()).map(|p| p.to_string()),
                status: o.status().to_string(),
            }
        }
        Err(e) => StatsRow {
            instance: id,
            kind,
            size: None,
            elapsed_ms: None,
            optimal: None,
            probability: None,
            status: format!("error: {e}"),
        },
    };
    (row, points)
}

/// Explains every instance with every kind. Failures are recorded in
/// their row. Rows come out in input order whatever `jobs` is.
pub fn run_stats(
    forest: &RandomForest,
    instances: &[Instance],
    kinds: &[Kind],
    settings: &Settings,
    jobs: usize,
) -> StatsReport {
    let tasks: Vec<(usize, Kind)> = (0..instances.len())
        .flat_map(|i| kinds.iter().map(move |&k| (i, k)))
        .collect();
    let slots: Vec<Slot> = tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let t = next.fetch_add(1, Ordering::Relaxed);
        let Some(&(i, kind)) = tasks.get(t) else { break };
        let result = run_one(forest, &instances[i], i + 1, kind, settings);
        *slots[t].lock().expect("no poisoned slot") = Some(result);
    };
    std::thread::scope(|scope| {
        for _ in 1..jobs.max(1) {
            scope.spawn(worker);
        }
        worker();
    });
    let mut report = StatsReport::default();
    for slot in slots {
        let (row, points) = slot.into_inner().expect("no poisoned slot").expect("every task ran");
        report.rows.push(row);
        report.trajectory.extend(points);
    }
    report
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), T::to_string)
}

/// Per-kind mean and population standard deviation of reason sizes.
pub fn summary(rows: &[StatsRow]) -> Vec<(Kind, usize, f64, f64, f64)> {
    let mut by_kind: BTreeMap<Kind, Vec<(usize, f64)>> = BTreeMap::new();
    for row in rows {
        let entry = by_kind.entry(row.kind).or_default();
        if let (Some(s), Some(ms)) = (row.size, row.elapsed_ms) {
            entry.push((s, ms));
        }
    }
    by_kind
        .into_iter()
        .map(|(kind, v)| {
            if v.is_empty() {
                return (kind, 0, f64::NAN, f64::NAN, f64::NAN);
            }
            let k = v.len() as f64;
            let mean = v.iter().map(|&(s, _)| s as f64).sum::<f64>() / k;
            let var = v.iter().map(|&(s, _)| (s as f64 - mean).powi(2)).sum::<f64>() / k;
            let ms = v.iter().map(|&(_, m)| m).sum::<f64>() / k;
            (kind, v.len(), mean, var.sqrt(), ms)
        })
        .collect()
}

/// Rows, a blank line, a `# summary` marker, then the summary table.
pub fn write_csv(report: &StatsReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS)?;
    for r in &report.rows {
        w.write_record([
            r.instance.to_string(),
            r.kind.name().to_string(),
            opt(&r.size),
            r.elapsed_ms.map_or(String::new(), |m| format!("{m:.3}")),
            opt(&r.optimal),
            opt(&r.probability),
            r.status.clone(),
        ])?;
    }
    let mut out =
        String::from_utf8(w.into_inner().map_err(|e| CliError::Other(e.to_string()))?).expect("csv output is utf-8");
    out.push_str("\n# summary\n");
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_COLUMNS)?;
    for (kind, count, mean, sd, ms) in summary(&report.rows) {
        w.write_record([
            kind.name().to_string(),
            count.to_string(),
            format!("{mean:.3}"),
            format!("{sd:.3}"),
            format!("{ms:.3}"),
        ])?;
    }
    out.push_str(&String::from_utf8(w.into_inner().map_err(|e| CliError::Other(e.to_string()))?).expect("utf-8"));
    Ok(out)
}

pub fn write_trajectory_csv(points: &[TrajectoryPoint]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRAJECTORY_COLUMNS)?;
    for p in points {
        w.write_record([
            p.instance.to_string(),
            p.kind.name().to_string(),
            p.step.to_string(),
            format!("{:.3}", p.elapsed_ms),
            p.size.to_string(),
            p.cost.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| CliError::Other(e.to_string()))?).expect("utf-8"))
}
