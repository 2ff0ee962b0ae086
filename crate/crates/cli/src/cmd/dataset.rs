use std::fs;

use lcslab::dataset_file::{parse_dataset, write_dataset};
use lcslab::seqgen::{CompositionReport, CoverageReport, DatasetSpec};
use lcslab::{composition, coverage, generate};
use serde::Serialize;

use super::dataset_spec;
use crate::error::{CliError, CliResult};
use crate::run::{json_line, sibling_manifest, Run};
use crate::{DatasetAnalyzeArgs, DatasetGenArgs};

pub fn gen(args: DatasetGenArgs) -> CliResult<()> {
    let spec = dataset_spec(&args.spec)?;
    let mut run = Run::new("dataset gen");
    run.set("n", spec.seq_length);
    run.set("count", spec.count);
    run.set("probs", spec.alphabet.probs_string());
    run.set("seed", spec.master_seed);
    let text = write_dataset(&generate(&spec)?)?;
    run.write(&args.out, text.as_bytes())?;
    run.finish(&sibling_manifest(&args.out))?;
    Ok(())
}

#[derive(Serialize)]
struct Analysis {
    spec: DatasetSpec,
    coverage: CoverageReport,
    composition: CompositionReport,
}

pub fn analyze(args: DatasetAnalyzeArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let dataset = parse_dataset(&text)?;
    let out = args.out.unwrap_or_else(|| {
        let mut name = args.input.file_name().unwrap_or_default().to_os_string();
        name.push(".analysis.json");
        args.input.with_file_name(name)
    });
    let mut run = Run::new("dataset analyze");
    run.set("input", args.input.display());
    let report = Analysis {
        spec: dataset.spec.clone(),
        coverage: coverage(&dataset),
        composition: composition(&dataset),
    };
    run.write(&out, json_line(&report)?.as_bytes())?;
    run.finish(&sibling_manifest(&out))?;
    Ok(())
}
