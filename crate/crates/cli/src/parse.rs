//! Parsers for the compact flag syntaxes.

use loccgate::witness::PartyGroup;

use crate::error::CliError;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// `0.25`, `1/3` or `-2.5e-3`.
pub fn parse_number(text: &str) -> Result<f64, CliError> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad(format!("bad numerator in {text:?}")))?;
            let d: f64 = d.trim().parse().map_err(|_| bad(format!("bad denominator in {text:?}")))?;
            if d == 0.0 {
                return Err(bad(format!("zero denominator in {text:?}")));
            }
            n / d
        }
        None => text.parse().map_err(|_| bad(format!("not a number: {text:?}")))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad(format!("not a finite number: {text:?}")))
    }
}

/// `uniform`, a comma list, or a single value repeated `count` times.
pub fn parse_probs(text: &str, count: usize) -> Result<Vec<f64>, CliError> {
    if text.trim().eq_ignore_ascii_case("uniform") {
        return Ok(vec![1.0 / count as f64; count]);
    }
    let values = text.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?;
    match values.len() {
        1 if count > 1 => Ok(vec![values[0]; count]),
        n if n == count => Ok(values),
        n => Err(bad(format!("{n} probabilities given for {count} states"))),
    }
}

fn parse_index_list(text: &str) -> Result<Vec<usize>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad(format!("bad party index {t:?}"))))
        .collect()
}

/// Groups separated by `|`, each `state parties/detector parties`,
/// e.g. `0/0|1/1` or `0,1/0|2/1`.
pub fn parse_cut(text: &str) -> Result<Vec<PartyGroup>, CliError> {
    text.split('|')
        .map(|group| {
            let (s, d) = group
                .split_once('/')
                .ok_or_else(|| bad(format!("cut group {group:?} needs the form states/detectors")))?;
            Ok(PartyGroup {
                state_parties: parse_index_list(s)?,
                detector_parties: parse_index_list(d)?,
            })
        })
        .collect()
}

/// Upper bound on sweep grid sizes.
pub const MAX_GRID: usize = 1_000_000;

/// `lo:hi:step` inside (0, 1); points are rounded to 12 decimals.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(bad(format!("grid {text:?} must have the form lo:hi:step")));
    };
    let (lo, hi, step) = (parse_number(lo)?, parse_number(hi)?, parse_number(step)?);
    if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
        return Err(bad(format!("grid bounds must satisfy 0 < lo <= hi < 1, got {lo}:{hi}")));
    }
    if step <= 0.0 {
        return Err(bad(format!("grid step must be positive, got {step}")));
    }
    let span = ((hi - lo) / step + 1e-9).floor();
    if span >= MAX_GRID as f64 {
        return Err(bad(format!("grid has more than {MAX_GRID} points")));
    }
    let round = |x: f64| (x * 1e12).round() / 1e12;
    Ok((0..=span as usize).map(|i| round(lo + i as f64 * step)).collect())
}

/// Comma-separated positive integers.
pub fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    parse_index_list(text)
}
