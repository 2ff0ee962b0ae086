use std::fs;

use lcslab::bench::{report_csv_header, report_csv_row};
use lcslab::dataset_file::parse_dataset;
use lcslab::{benchmark, generate, summarize, Algorithm, BenchConfig, ReferenceKind};

use super::dataset_spec;
use crate::error::{CliError, CliResult};
use crate::run::{csv_bytes, json_line, Run};
use crate::{BenchArgs, ReferenceArg};

fn parse_algorithms(list: &str) -> CliResult<Vec<Algorithm>> {
    let mut out: Vec<Algorithm> = Vec::new();
    for item in list.split(',').map(str::trim) {
        let a: Algorithm = item
            .parse()
            .map_err(|e: lcslab::LcsError| CliError::usage(e.to_string()))?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    Ok(out)
}

pub fn run(args: BenchArgs) -> CliResult<()> {
    let mut run = Run::new("bench");
    let dataset = match &args.input {
        Some(path) => {
            if args.spec.n.is_some() || args.spec.count.is_some() {
                return Err(CliError::usage(
                    "--input cannot be combined with --n/--count",
                ));
            }
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_dataset(&text)?
        }
        None => generate(&dataset_spec(&args.spec)?)?,
    };
    let spec = &dataset.spec;
    run.set("n", spec.seq_length);
    run.set("count", spec.count);
    run.set("probs", spec.alphabet.probs_string());
    run.set("seed", spec.master_seed);

    let reference = match args.reference {
        ReferenceArg::Exact => ReferenceKind::Exact,
        ReferenceArg::UpperBound => ReferenceKind::UpperBound,
    };
    let mut config = BenchConfig::new(args.k, reference);
    config.algorithms = parse_algorithms(&args.algorithms)?;
    config.window = args.window;
    config.max_dp_seqs = args.max_dp_seqs;
    config.cell_budget = args.cell_budget;
    if reference == ReferenceKind::Exact && !config.exact_feasible(spec.seq_length) {
        run.warn(format!(
            "exact reference for {} sequences of length {} exceeds the cell budget {}; using upper_bound",
            args.k, spec.seq_length, args.cell_budget
        ));
        config.reference = ReferenceKind::UpperBound;
    }
    run.set("k", args.k);
    run.set(
        "algorithms",
        config
            .algorithms
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    run.set("reference", config.reference);
    run.set(
        "window",
        args.window.map_or("default".to_string(), |w| w.to_string()),
    );
    run.set("max_dp_seqs", args.max_dp_seqs);
    run.set("cell_budget", args.cell_budget);
    run.set("label", &args.label);

    let reports = benchmark(&dataset, &args.label, &config)?;
    let rows: Vec<Vec<String>> = reports.iter().map(report_csv_row).collect();
    run.write(
        &args.out.join("bench.csv"),
        &csv_bytes(&report_csv_header(&config.algorithms), &rows)?,
    )?;
    let mut jsonl = String::new();
    for r in &reports {
        jsonl.push_str(&json_line(r)?);
    }
    run.write(&args.out.join("bench.jsonl"), jsonl.as_bytes())?;

    let summary = summarize(&reports);
    let header: Vec<String> = [
        "algorithm",
        "groups",
        "mean_ratio",
        "variance_ratio",
        "infinite_ratios",
        "mean_length",
        "all_valid",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let summary_rows: Vec<Vec<String>> = summary
        .iter()
        .map(|s| {
            vec![
                s.algorithm.to_string(),
                s.groups.to_string(),
                s.mean_ratio.to_string(),
                s.variance_ratio.to_string(),
                s.infinite_ratios.to_string(),
                s.mean_length.to_string(),
                s.all_valid.to_string(),
            ]
        })
        .collect();
    for s in &summary {
        eprintln!(
            "{:>10}: mean ratio {:.4}, mean length {:.2}",
            s.algorithm.to_string(),
            s.mean_ratio,
            s.mean_length
        );
    }
    run.write(
        &args.out.join("bench_summary.csv"),
        &csv_bytes(&header, &summary_rows)?,
    )?;
    run.finish(&args.out.join("bench.manifest.json"))?;
    Ok(())
}
