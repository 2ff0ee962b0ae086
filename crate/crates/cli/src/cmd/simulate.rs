use std::fs;

use lcslab::mc::fit_variance_growth;
use lcslab::{run_experiment, EstimateRecord, ExperimentConfig};

use super::alphabet;
use crate::error::{CliError, CliResult};
use crate::ranges::parse_lengths;
use crate::run::{csv_bytes, json_line, Run};
use crate::{Preset, SimulateArgs};

/// Instances per length in the published schedule.
pub fn schedule_trials(n: usize) -> u64 {
    match n {
        0..=2000 => (1u64 << n.min(20)).min(100_000),
        2001..=10_000 => 10_000,
        _ => 100,
    }
}

pub fn preset_lengths(preset: Preset) -> Vec<usize> {
    let paper = (16..=25)
        .chain((50..=500).step_by(50))
        .chain((1000..=5000).step_by(500));
    match preset {
        Preset::Paper => paper.collect(),
        Preset::PaperFull => paper
            .chain((6000..=10_000).step_by(1000))
            .chain((20_000..=100_000).step_by(10_000))
            .collect(),
        Preset::Desk => vec![100, 500, 1000, 2000],
    }
}

fn trials_for(args: &SimulateArgs, n: usize) -> u64 {
    match (args.trials, args.preset) {
        (Some(t), _) => t,
        (None, Some(Preset::Desk)) => 1 << 12,
        (None, Some(_)) => schedule_trials(n),
        (None, None) => 1 << 18,
    }
}

fn read_log(path: &std::path::Path) -> CliResult<Vec<EstimateRecord>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| {
                CliError::Lib(lcslab::LcsError::Format {
                    line: i + 1,
                    message: format!("{}: {e}", path.display()),
                })
            })
        })
        .collect()
}

pub fn run(args: SimulateArgs) -> CliResult<()> {
    let ns = match (&args.n, args.preset) {
        (Some(spec), None) => parse_lengths(spec).map_err(CliError::usage)?,
        (None, Some(p)) => preset_lengths(p),
        _ => return Err(CliError::usage("give exactly one of --n or --preset")),
    };
    if args.groups.is_some() && args.trials.is_some() {
        return Err(CliError::usage(
            "--trials cannot be combined with --groups/--per-dataset",
        ));
    }
    let alphabet = alphabet(args.q, args.probs.as_deref())?;

    let mut run = Run::new("simulate");
    if args.preset == Some(Preset::PaperFull) {
        run.warn("the paper-full preset runs lengths up to 100000 and takes many hours".into());
    }
    let mut configs = Vec::new();
    for &n in &ns {
        let mut c =
            ExperimentConfig::new(n, args.k, alphabet.clone(), trials_for(&args, n), args.seed);
        c.batch_size = args.batch_size;
        c.confidence_level = args.confidence;
        c.cell_budget = args.cell_budget;
        if let (Some(g), Some(p)) = (args.groups, args.per_dataset) {
            c = c.grouped(g, p);
        }
        // refuse before any work if a later length is invalid
        c.validate()?;
        configs.push(c);
    }
    run.set(
        "n",
        ns.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    run.set(
        "trials",
        configs
            .iter()
            .map(|c| c.trials.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    run.set("k", args.k);
    run.set("probs", alphabet.probs_string());
    run.set("seed", args.seed);
    run.set("batch_size", args.batch_size);
    run.set("confidence", args.confidence);
    run.set("cell_budget", args.cell_budget);
    run.set("grouping", serde_json::to_string(&configs[0].grouping)?);

    let log = args.out.join("estimates.jsonl");
    let mut records = Vec::new();
    for c in &configs {
        let r = run_experiment(c)?;
        eprintln!(
            "n={} k={} trials={}: gamma {:.6} variance {:.6} ({:.1}s)",
            c.n,
            c.k,
            c.trials,
            r.gamma_hat,
            r.protocol_variance(),
            r.wall_time_seconds
        );
        run.append(&log, json_line(&r)?.as_bytes())?;
        records.push(r);
    }

    let all = read_log(&log)?;
    let header: Vec<String> = EstimateRecord::CSV_HEADER
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = all.iter().map(EstimateRecord::csv_fields).collect();
    run.write(&args.out.join("estimates.csv"), &csv_bytes(&header, &rows)?)?;

    if records.len() >= 3 {
        match fit_variance_growth(&records) {
            Ok(fit) => {
                eprintln!(
                    "variance ~ {:.4} n^{:.4} (r^2 {:.4})",
                    fit.coefficient, fit.exponent, fit.r_squared
                );
                run.write(
                    &args.out.join("variance_fit.json"),
                    json_line(&fit)?.as_bytes(),
                )?;
            }
            Err(e) => run.warn(format!("variance fit skipped: {e}")),
        }
    }
    run.finish(&args.out.join("simulate.manifest.json"))?;
    Ok(())
}
