use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::thread;

use anyhow::anyhow;
use greedymod::io::{read_dendrogram, read_merge_log, read_partition};
use greedymod::io::{write_dendrogram, write_merge_log, write_partition};
use greedymod::metrics::{q_progress, ratio_series, scaling_fit, size_histogram, time_buckets};
use greedymod::{
    q_scaled_scratch, run, run_observed, write_edge_list, Graph, Heuristic, RunResult, StopPolicy,
};
use serde::Serialize;

use crate::failure::{Failure, InputContext};
use crate::summary::{CompareRow, Summary};
use crate::table::emit;
use crate::{CompareArgs, DetectArgs, GenerateArgs, ReportArgs, Which};

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    let file = File::create(path).input(format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    let file = File::open(path).input(format!("opening {}", path.display()))?;
    Ok(BufReader::new(file))
}

fn cluster(
    g: &Graph,
    heuristic: Heuristic,
    stop: StopPolicy,
    audit: bool,
) -> Result<RunResult, Failure> {
    let res = if audit {
        run_observed(g, heuristic, stop, |engine, _| engine.audit())?
    } else {
        run(g, heuristic, stop)?
    };
    let scratch =
        q_scaled_scratch(g, &res.best_partition).map_err(|e| Failure::Internal(e.into()))?;
    if scratch != res.peak_q {
        return Err(Failure::Internal(anyhow!(
            "peak Q {} disagrees with the recomputed value {} for the best partition",
            res.peak_q.0,
            scratch.0
        )));
    }
    Ok(res)
}

pub fn detect(args: DetectArgs) -> Result<(), Failure> {
    let (g, provenance) = args.source.load()?;
    let res = cluster(&g, args.heuristic, args.stop, args.audit)?;
    let dir = &args.out;
    fs::create_dir_all(dir).input(format!("creating {}", dir.display()))?;

    let path = dir.join("partition.csv");
    write_partition(&g, &res.best_partition, create(&path)?)
        .input(format!("writing {}", path.display()))?;
    let path = dir.join("dendrogram.csv");
    write_dendrogram(&res.dendrogram, &res.log, create(&path)?)
        .input(format!("writing {}", path.display()))?;
    let path = dir.join("mergelog.csv");
    write_merge_log(&res.log, create(&path)?).input(format!("writing {}", path.display()))?;

    let summary = Summary::new(&res, provenance);
    let path = dir.join("summary.json");
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, &summary)
        .input(format!("writing {}", path.display()))?;
    writeln!(out)
        .and_then(|_| out.flush())
        .input(format!("writing {}", path.display()))?;

    println!(
        "{}: n={} m={} merges={} peak_q={:.6} (step {}) communities={} height={} elapsed={:.3}s",
        summary.heuristic,
        summary.n,
        summary.m,
        summary.merges,
        summary.peak_q,
        summary.peak_step,
        summary.communities,
        summary.dendrogram_height,
        summary.elapsed_seconds
    );
    Ok(())
}

pub fn generate(args: GenerateArgs) -> Result<(), Failure> {
    let (g, meta) = args.gen.generate()?;
    let path = &args.out;
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).input(format!("creating {}", parent.display()))?;
    }
    let mut out = create(path)?;
    write_edge_list(&g, &mut out)
        .and_then(|_| out.flush())
        .input(format!("writing {}", path.display()))?;

    let meta_path = PathBuf::from(format!("{}.meta.json", path.display()));
    let mut out = create(&meta_path)?;
    serde_json::to_writer_pretty(&mut out, &meta)
        .input(format!("writing {}", meta_path.display()))?;
    writeln!(out)
        .and_then(|_| out.flush())
        .input(format!("writing {}", meta_path.display()))?;
    println!(
        "wrote {} ({} nodes, {} edges) and {}",
        path.display(),
        g.node_count(),
        g.edge_count(),
        meta_path.display()
    );
    Ok(())
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str, which: &str) -> Result<&'a Path, Failure> {
    path.as_deref()
        .ok_or_else(|| Failure::Usage(format!("report --which {which} needs --{flag}")))
}

fn read_summary(path: &Path) -> Result<Summary, Failure> {
    serde_json::from_reader(open(path)?).input(format!("reading {}", path.display()))
}

#[derive(Serialize)]
struct HeightRow {
    leaves: usize,
    merges: usize,
    height: u32,
}

pub fn report(args: ReportArgs) -> Result<(), Failure> {
    let out = args.out.as_deref();
    let load_log = |which: &str| -> Result<_, Failure> {
        let path = required(&args.log, "log", which)?;
        let log = read_merge_log(open(path)?).input(format!("reading {}", path.display()))?;
        Ok((path, log))
    };
    match args.which {
        Which::Ratio => {
            let (_, log) = load_log("ratio")?;
            emit(&ratio_series(&log).input("ratio series")?, args.format, out)
        }
        Which::Buckets => {
            let (_, log) = load_log("buckets")?;
            let rows = time_buckets(&log, args.bucket).input("time buckets")?;
            emit(&rows, args.format, out)
        }
        Which::Progress => {
            let (path, log) = load_log("progress")?;
            let m = match args.edges {
                Some(m) => m,
                None => {
                    let sibling = path.with_file_name("summary.json");
                    if !sibling.exists() {
                        return Err(Failure::Usage(format!(
                            "report --which progress needs --edges or {}",
                            sibling.display()
                        )));
                    }
                    read_summary(&sibling)?.m
                }
            };
            let rows = q_progress(&log, m, args.normalize).input("modularity progress")?;
            emit(&rows, args.format, out)
        }
        Which::Hist => {
            let path = required(&args.partition, "partition", "hist")?;
            let p = read_partition(open(path)?).input(format!("reading {}", path.display()))?;
            let rows = size_histogram(&p, args.base).input("size histogram")?;
            emit(&rows, args.format, out)
        }
        Which::Height => {
            let path = required(&args.dendrogram, "dendrogram", "height")?;
            let d =
                read_dendrogram(open(path)?, None).input(format!("reading {}", path.display()))?;
            let row = HeightRow {
                leaves: d.leaf_count(),
                merges: d.len(),
                height: d.height(),
            };
            emit(&[row], args.format, out)
        }
        Which::Fit => {
            if args.summaries.is_empty() {
                return Err(Failure::Usage(
                    "report --which fit needs --summaries".into(),
                ));
            }
            let mut points = Vec::new();
            for path in &args.summaries {
                let s = read_summary(path)?;
                points.push((s.n as f64, s.elapsed_seconds));
            }
            let fit = scaling_fit(&points).input("power-law fit")?;
            emit(&[fit], args.format, out)
        }
    }
}

pub fn compare(args: CompareArgs) -> Result<(), Failure> {
    if args.heuristics.len() < 2 {
        return Err(Failure::Usage(
            "compare needs at least two heuristics, e.g. --heuristics plain,hn".into(),
        ));
    }
    let (g, provenance) = args.source.load()?;
    let one = |h: Heuristic| -> Result<Summary, Failure> {
        let res = cluster(&g, h, args.stop, false)?;
        Ok(Summary::new(&res, provenance.clone()))
    };
    let one = &one;
    let summaries: Vec<Summary> = if args.parallel {
        thread::scope(|scope| {
            let handles: Vec<_> = args
                .heuristics
                .iter()
                .map(|&h| scope.spawn(move || one(h)))
                .collect();
            handles
                .into_iter()
                .map(|handle| {
                    handle
                        .join()
                        .unwrap_or_else(|_| Err(Failure::Internal(anyhow!("worker panicked"))))
                })
                .collect::<Result<_, _>>()
        })?
    } else {
        args.heuristics
            .iter()
            .map(|&h| one(h))
            .collect::<Result<_, _>>()?
    };
    let rows: Vec<CompareRow> = summaries.iter().map(CompareRow::from).collect();
    emit(&rows, args.format, args.out.as_deref())
}
