use std::path::Path;

use rfx_core::{Instance, RandomForest};

use crate::CliError;

fn is_bit(field: &str) -> bool {
    matches!(field, "0" | "1")
}

/// Parses comma-separated 0/1 rows. The first row is a header of feature
/// names when none of its fields is a bit; it must then match the model's
/// names. Rows and columns in errors are 1-based and count the header.
pub fn parse_instances(text: &str, forest: &RandomForest) -> Result<Vec<Instance>, CliError> {
    let n = forest.var_count();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Instance {
            row: i + 1,
            column: 0,
            message: e.to_string(),
        })?;
        let row = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if i == 0 && record.iter().all(|f| !is_bit(f)) {
            let names: Vec<&str> = record.iter().collect();
            let expected: Vec<String> = (1..=n).map(|v| forest.feature_name(v)).collect();
            if names != expected {
                return Err(CliError::Instance {
                    row,
                    column: 0,
                    message: format!("header {names:?} does not match the model's features {expected:?}"),
                });
            }
            continue;
        }
        if record.len() != n {
            return Err(CliError::Instance {
                row,
                column: record.len().min(n) + 1,
                message: format!("expected {n} values, found {}", record.len()),
            });
        }
        let bits = record
            .iter()
            .enumerate()
            .map(|(j, f)| match f {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(CliError::Instance {
                    row,
                    column: j + 1,
                    message: format!("expected 0 or 1, found {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(Instance::new(bits));
    }
    Ok(out)
}

pub fn load_instances(path: &Path, forest: &RandomForest) -> Result<Vec<Instance>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_instances(&text, forest)
}

/// One instance given inline, either as `1,0,1` or as `101`.
pub fn parse_inline(text: &str, forest: &RandomForest) -> Result<Instance, CliError> {
    let text = text.trim();
    let row = if text.contains(',') {
        text.to_string()
    } else {
        text.chars().map(String::from).collect::<Vec<_>>().join(",")
    };
    let mut all = parse_instances(&row, forest)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        _ => Err(CliError::Instance {
            row: 1,
            column: 0,
            message: "expected one instance".into(),
        }),
    }
}

pub fn bit_string(x: &Instance) -> String {
    x.bits().iter().map(|&b| if b { '1' } else { '0' }).collect()
}
