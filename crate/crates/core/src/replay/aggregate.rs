use std::collections::BTreeMap;

use serde::Serialize;

use crate::gesture::Mode;
use crate::replay::trial::TrialMetrics;

/// One finished trial with the keys it is grouped by.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub id: String,
    pub mode: Mode,
    pub tag: String,
    pub metrics: TrialMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub mode: Mode,
    pub tag: String,
    pub trials: usize,
    pub completed: usize,
    /// Over completed trials only.
    pub mean_completion_ms: Option<f64>,
    pub median_completion_ms: Option<f64>,
    pub total_overshoots: usize,
    pub mean_attempts: f64,
}

/// Summaries per (mode, tag), ordered by mode then tag.
pub fn aggregate(records: &[TrialRecord]) -> Vec<Summary> {
    let mut groups: BTreeMap<(String, String), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.mode.to_string(), r.tag.clone())).or_default().push(r);
    }
    groups.into_values().map(|group| summarize(&group)).collect()
}

fn summarize(group: &[&TrialRecord]) -> Summary {
    let mut times: Vec<u64> = group.iter().filter_map(|r| r.metrics.completion_ms).collect();
    times.sort_unstable();
    let mean = (!times.is_empty()).then(|| times.iter().sum::<u64>() as f64 / times.len() as f64);
    let median = (!times.is_empty()).then(|| {
        let mid = times.len() / 2;
        if times.len() % 2 == 1 {
            times[mid] as f64
        } else {
            (times[mid - 1] + times[mid]) as f64 / 2.0
        }
    });
    Summary {
        mode: group[0].mode,
        tag: group[0].tag.clone(),
        trials: group.len(),
        completed: group.iter().filter(|r| r.metrics.completed).count(),
        mean_completion_ms: mean,
        median_completion_ms: median,
        total_overshoots: group.iter().map(|r| r.metrics.overshoots).sum(),
        mean_attempts: group.iter().map(|r| r.metrics.attempts as f64).sum::<f64>() / group.len() as f64,
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "kind",
    "id",
    "mode",
    "tag",
    "trials",
    "completed",
    "completion_ms",
    "median_completion_ms",
    "overshoots",
    "attempts",
];

#[derive(Serialize)]
struct CsvRow<'a> {
    kind: &'a str,
    id: &'a str,
    mode: Mode,
    tag: &'a str,
    trials: usize,
    completed: usize,
    completion_ms: Option<String>,
    median_completion_ms: Option<String>,
    overshoots: usize,
    attempts: String,
}

fn number(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{x:.0}")
    } else {
        format!("{x:.3}")
    }
}

/// Trial rows in the given order, then one summary row per group. For
/// summary rows `completion_ms` is the mean over completed trials,
/// `overshoots` the total and `attempts` the mean.
pub fn to_csv(records: &[TrialRecord], summaries: &[Summary]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("writing to memory");
    for r in records {
        w.serialize(CsvRow {
            kind: "trial",
            id: &r.id,
            mode: r.mode,
            tag: &r.tag,
            trials: 1,
            completed: usize::from(r.metrics.completed),
            completion_ms: r.metrics.completion_ms.map(|t| t.to_string()),
            median_completion_ms: None,
            overshoots: r.metrics.overshoots,
            attempts: r.metrics.attempts.to_string(),
        })
        .expect("writing to memory");
    }
    for s in summaries {
        w.serialize(CsvRow {
            kind: "summary",
            id: "",
            mode: s.mode,
            tag: &s.tag,
            trials: s.trials,
            completed: s.completed,
            completion_ms: s.mean_completion_ms.map(number),
            median_completion_ms: s.median_completion_ms.map(number),
            overshoots: s.total_overshoots,
            attempts: number(s.mean_attempts),
        })
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}
