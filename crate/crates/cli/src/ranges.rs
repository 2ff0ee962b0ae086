//! Parsers for length ranges, numeric grids and lists given on the command line.

/// Parses `a`, `a..b` (inclusive), `a:b:step` and comma-separated lists of them.
pub fn parse_lengths(spec: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        if part.is_empty() {
            return Err(format!("empty item in length list {spec:?}"));
        }
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (int(a)?, int(b)?);
            if a > b {
                return Err(format!("range {part:?} is empty"));
            }
            out.extend(a..=b);
        } else if part.contains(':') {
            let fields: Vec<&str> = part.split(':').collect();
            let [a, b, step] = fields[..] else {
                return Err(format!("expected start:end:step, got {part:?}"));
            };
            let (a, b, step) = (int(a)?, int(b)?, int(step)?);
            if step == 0 || a > b {
                return Err(format!("range {part:?} is empty"));
            }
            out.extend((a..=b).step_by(step));
        } else {
            out.push(int(part)?);
        }
    }
    Ok(out)
}

fn int(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a non-negative integer"))
}

fn float(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if !v.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(v)
}

/// Parses `start:end:step` or a comma list of reals. Grid points are rounded
/// to 12 decimals so that `0.05:0.5:0.05` yields exactly 0.15, 0.3, ...
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let fields: Vec<&str> = spec.split(':').collect();
    match fields[..] {
        [a, b, step] => {
            let (a, b, step) = (float(a)?, float(b)?, float(step)?);
            if step <= 0.0 || a > b {
                return Err(format!("grid {spec:?} is empty"));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| round12(a + i as f64 * step)).collect())
        }
        [_] => spec.split(',').map(float).collect(),
        _ => Err(format!("expected start:end:step or a list, got {spec:?}")),
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

pub fn parse_probs(spec: &str) -> Result<Vec<f64>, String> {
    spec.split(',').map(float).collect()
}
