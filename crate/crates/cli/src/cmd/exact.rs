use std::fmt::Write as _;

use lcslab::exact::{exact_k_stats_with, exact_pair_stats_with, ExactResult};
use lcslab::{delta_concentration, ExactOptions};

use crate::error::{CliError, CliResult};
use crate::ranges::parse_lengths;
use crate::run::{csv_bytes, json_line, Run};
use crate::ExactArgs;

fn histogram_dat(r: &ExactResult) -> String {
    let mut s = format!(
        "# n={} k={} q={} total={}\n# length count fraction\n",
        r.n, r.k, r.q, r.total
    );
    for (len, &count) in r.histogram.iter().enumerate() {
        let frac = lcslab::exact::trim_decimal(&lcslab::exact::decimal(count, r.total, 12));
        let _ = writeln!(s, "{len} {count} {frac}");
    }
    s
}

pub fn run(args: ExactArgs) -> CliResult<()> {
    let ns = parse_lengths(&args.n).map_err(CliError::usage)?;
    let mut run = Run::new("exact");
    run.set(
        "n",
        ns.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    run.set("k", args.k);
    run.set("q", args.q);
    run.set("budget", args.budget);
    run.set("symmetry", !args.no_symmetry);
    let opts = ExactOptions {
        budget: args.budget,
        symmetry: !args.no_symmetry,
    };

    let mut rows = Vec::new();
    let mut jsonl = String::new();
    for &n in &ns {
        let started = std::time::Instant::now();
        let r = if args.k == 2 {
            exact_pair_stats_with(n, args.q, opts)?
        } else {
            exact_k_stats_with(n, args.k, args.q, opts)?
        };
        eprintln!(
            "n={n}: mean {} gamma {} variance {} ({:.1}s)",
            r.mean_length,
            r.gamma,
            r.variance,
            started.elapsed().as_secs_f64()
        );
        let mut value = serde_json::to_value(&r)?;
        value["delta_concentration"] = delta_concentration(&r).into();
        jsonl.push_str(&json_line(&value)?);
        rows.push(r.csv_fields());
        run.write(
            &args.out.join(format!("hist_n{n}.dat")),
            histogram_dat(&r).as_bytes(),
        )?;
    }
    let header: Vec<String> = ExactResult::CSV_HEADER
        .iter()
        .map(|s| s.to_string())
        .collect();
    run.write(&args.out.join("exact.csv"), &csv_bytes(&header, &rows)?)?;
    run.write(&args.out.join("exact.jsonl"), jsonl.as_bytes())?;
    run.finish(&args.out.join("exact.manifest.json"))?;
    Ok(())
}
