use std::fmt::Write as _;

use lcslab::{sweep_alphabet, sweep_p, Alphabet, ExperimentConfig, SweepCurve};

use crate::error::{CliError, CliResult};
use crate::ranges::{parse_grid, parse_lengths};
use crate::run::{csv_bytes, Run};
use crate::{SweepAlphabetArgs, SweepCommon, SweepPArgs};

fn template(c: &SweepCommon) -> ExperimentConfig {
    let mut t = ExperimentConfig::new(
        c.n,
        c.k,
        Alphabet::uniform(2).expect("binary"),
        c.trials,
        c.seed,
    );
    t.batch_size = c.batch_size;
    t.cell_budget = c.cell_budget;
    t
}

fn record_common(run: &mut Run, c: &SweepCommon) {
    run.set("n", c.n);
    run.set("k", c.k);
    run.set("trials", c.trials);
    run.set("seed", c.seed);
    run.set("batch_size", c.batch_size);
    run.set("cell_budget", c.cell_budget);
}

/// Two-column gnuplot data: parameter value and `column(point)`.
fn dat(curve: &SweepCurve, label: &str, column: impl Fn(&lcslab::mc::SweepPoint) -> f64) -> String {
    let mut s = format!("# {} {label}\n", curve.parameter_name);
    for p in &curve.points {
        let _ = writeln!(s, "{} {}", p.value, column(p));
    }
    s
}

fn write_curve(run: &mut Run, c: &SweepCommon, name: &str, curve: &SweepCurve) -> CliResult<()> {
    run.write(
        &c.out.join(format!("{name}.csv")),
        &csv_bytes(&curve.csv_header(), &curve.csv_rows())?,
    )?;
    run.write(
        &c.out.join(format!("{name}.dat")),
        dat(curve, "gamma", |p| p.record.gamma_hat).as_bytes(),
    )?;
    for p in &curve.points {
        eprintln!(
            "{}={}: gamma {:.6}",
            curve.parameter_name, p.value, p.record.gamma_hat
        );
    }
    Ok(())
}

pub fn run_p(args: SweepPArgs) -> CliResult<()> {
    let grid = parse_grid(&args.grid).map_err(CliError::usage)?;
    let mut run = Run::new("sweep p");
    record_common(&mut run, &args.common);
    run.set(
        "grid",
        grid.iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    let curve = sweep_p(&template(&args.common), &grid)?;
    write_curve(&mut run, &args.common, "sweep_p", &curve)?;
    run.finish(&args.common.out.join("sweep_p.manifest.json"))?;
    Ok(())
}

pub fn run_alphabet(args: SweepAlphabetArgs) -> CliResult<()> {
    let qs = parse_lengths(&args.q).map_err(CliError::usage)?;
    let mut run = Run::new("sweep alphabet");
    record_common(&mut run, &args.common);
    run.set(
        "q",
        qs.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(","),
    );
    let curve = sweep_alphabet(&template(&args.common), &qs)?;
    write_curve(&mut run, &args.common, "sweep_alphabet", &curve)?;
    run.write(
        &args.common.out.join("sweep_alphabet_scaled.dat"),
        dat(&curve, "gamma_sqrt_q", |p| {
            p.scaled_gamma.unwrap_or(f64::NAN)
        })
        .as_bytes(),
    )?;
    run.finish(&args.common.out.join("sweep_alphabet.manifest.json"))?;
    Ok(())
}
