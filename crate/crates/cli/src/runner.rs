//! Multi-worker study execution.
//!
//! Each replication is a pure function of `(seed, size, index)`, so workers
//! simply split the task grid by stride and the records are reassembled in
//! index order before aggregation. Any worker count yields the same report,
//! byte for byte.

use std::thread;

use fuzzykuma_core::sim::{aggregate_report, run_replication, ReplicationRecord, StudyConfig, StudyReport};
use fuzzykuma_core::Result;

/// Runs the study with `workers` threads (1 = in-place sequential).
pub fn run_study_parallel(cfg: &StudyConfig, workers: usize) -> Result<StudyReport> {
    cfg.validate()?;
    let tasks: Vec<(usize, u32)> = cfg
        .sample_sizes
        .iter()
        .flat_map(|&n| (0..cfg.replications).map(move |r| (n, r)))
        .collect();

    let records: Vec<ReplicationRecord> = if workers <= 1 {
        tasks.iter().map(|&(n, r)| run_replication(cfg, n, r)).collect()
    } else {
        let mut slots: Vec<Option<ReplicationRecord>> = Vec::new();
        slots.resize_with(tasks.len(), || None);
        thread::scope(|scope| {
            let mut handles = Vec::with_capacity(workers);
            for w in 0..workers {
                let tasks = &tasks;
                handles.push(scope.spawn(move || {
                    let mut mine = Vec::new();
                    let mut i = w;
                    while i < tasks.len() {
                        let (n, r) = tasks[i];
                        mine.push((i, run_replication(cfg, n, r)));
                        i += workers;
                    }
                    mine
                }));
            }
            for h in handles {
                for (i, rec) in h.join().expect("worker panicked") {
                    slots[i] = Some(rec);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("every slot filled")).collect()
    };

    Ok(aggregate_report(cfg, &records))
}
