pub mod bench;
pub mod dataset;
pub mod exact;
pub mod simulate;
pub mod sweep;

use lcslab::{Alphabet, DatasetSpec};

use crate::error::{CliError, CliResult};
use crate::ranges::parse_probs;
use crate::GenSpecArgs;

/// Alphabet from `--q` and/or `--probs`; uniform binary when neither is given.
pub fn alphabet(q: Option<usize>, probs: Option<&str>) -> CliResult<Alphabet> {
    match probs {
        Some(p) => {
            let probs = parse_probs(p).map_err(CliError::usage)?;
            if let Some(q) = q.filter(|&q| q != probs.len()) {
                return Err(CliError::usage(format!(
                    "--q {q} disagrees with {} probabilities",
                    probs.len()
                )));
            }
            Ok(Alphabet::new(probs)?)
        }
        None => Ok(Alphabet::uniform(q.unwrap_or(2))?),
    }
}

pub fn dataset_spec(args: &GenSpecArgs) -> CliResult<DatasetSpec> {
    let n = args.n.ok_or_else(|| CliError::usage("--n is required"))?;
    let count = args
        .count
        .ok_or_else(|| CliError::usage("--count is required"))?;
    let spec = DatasetSpec {
        alphabet: alphabet(args.q, args.probs.as_deref())?,
        seq_length: n,
        count,
        master_seed: args.seed,
    };
    spec.validate()?;
    Ok(spec)
}
