//! Input parsing: the problem matrix and parameter vector from a file or
//! inline JSON, with validation errors naming the offending field.

use gkz::exact::{parse_rat, Rat};
use gkz::IntMatrix;

pub struct ProblemInput {
    pub matrix: IntMatrix,
    pub beta: Option<Vec<Rat>>,
}

pub fn invalid(field: &str, reason: impl Into<String>) -> gkz::Error {
    gkz::Error::InvalidInput {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Load `--matrix`: inline JSON when the argument starts with `[` or `{`,
/// otherwise a file path. Accepts either a bare `[[...]]` matrix or an
/// object `{"matrix": [[...]], "beta": [...]}`.
pub fn parse_problem(matrix_arg: &str, beta_arg: Option<&str>) -> gkz::Result<ProblemInput> {
    let trimmed = matrix_arg.trim();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        trimmed.to_string()
    } else {
        std::fs::read_to_string(trimmed)
            .map_err(|e| invalid("matrix", format!("cannot read {trimmed}: {e}")))?
    };
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| invalid("matrix", format!("malformed JSON: {e}")))?;

    let (matrix_value, beta_value) = match &value {
        serde_json::Value::Array(_) => (value.clone(), None),
        serde_json::Value::Object(obj) => {
            let m = obj
                .get("matrix")
                .ok_or_else(|| invalid("matrix", "missing \"matrix\" key"))?;
            (m.clone(), obj.get("beta").cloned())
        }
        _ => return Err(invalid("matrix", "expected an array or an object")),
    };

    let matrix = parse_matrix(&matrix_value)?;
    let beta = match beta_arg {
        Some(list) => Some(parse_beta_list(list, matrix.rows())?),
        None => match beta_value {
            Some(v) => Some(parse_beta_json(&v, matrix.rows())?),
            None => None,
        },
    };
    Ok(ProblemInput { matrix, beta })
}

fn parse_matrix(value: &serde_json::Value) -> gkz::Result<IntMatrix> {
    let rows = value
        .as_array()
        .ok_or_else(|| invalid("matrix", "expected an array of rows"))?;
    if rows.is_empty() {
        return Err(invalid("matrix", "no rows"));
    }
    let mut data: Vec<Vec<i64>> = Vec::with_capacity(rows.len());
    let mut width: Option<usize> = None;
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| invalid(&format!("matrix[{i}]"), "expected an array"))?;
        if let Some(w) = width {
            if entries.len() != w {
                return Err(invalid(
                    &format!("matrix[{i}]"),
                    format!("expected {w} entries, got {}", entries.len()),
                ));
            }
        } else {
            width = Some(entries.len());
        }
        let mut out = Vec::with_capacity(entries.len());
        for (j, e) in entries.iter().enumerate() {
            let field = format!("matrix[{i}][{j}]");
            let n = match e {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .ok_or_else(|| invalid(&field, "expected an integer"))?,
                serde_json::Value::String(s) => s
                    .parse::<i64>()
                    .map_err(|_| invalid(&field, "expected an integer"))?,
                _ => return Err(invalid(&field, "expected an integer")),
            };
            out.push(n);
        }
        data.push(out);
    }
    let d = data.len();
    let n = width.unwrap_or(0);
    if n < d {
        return Err(invalid(
            "matrix",
            format!("expected at least {d} columns, got {n}"),
        ));
    }
    let matrix = IntMatrix::from_rows(&data);
    let rank = matrix.rank();
    if rank < d {
        return Err(gkz::Error::NotFullRank { rank, expected: d });
    }
    Ok(matrix)
}

fn parse_beta_json(value: &serde_json::Value, d: usize) -> gkz::Result<Vec<Rat>> {
    let entries = value
        .as_array()
        .ok_or_else(|| invalid("beta", "expected an array"))?;
    if entries.len() != d {
        return Err(invalid(
            "beta",
            format!("expected length {d}, got {}", entries.len()),
        ));
    }
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let field = format!("beta[{i}]");
            match e {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(|v| Rat::from_integer(v.into()))
                    .ok_or_else(|| invalid(&field, "expected an integer or \"p/q\"")),
                serde_json::Value::String(s) => {
                    parse_rat(s).map_err(|_| invalid(&field, "expected a rational \"p/q\""))
                }
                _ => Err(invalid(&field, "expected an integer or \"p/q\"")),
            }
        })
        .collect()
}

pub fn parse_beta_list(list: &str, d: usize) -> gkz::Result<Vec<Rat>> {
    let parts: Vec<&str> = list.split(',').map(str::trim).collect();
    if parts.len() != d {
        return Err(invalid(
            "beta",
            format!("expected {d} entries, got {}", parts.len()),
        ));
    }
    parts
        .iter()
        .enumerate()
        .map(|(i, p)| parse_rat(p).map_err(|_| invalid(&format!("beta[{i}]"), "not a rational")))
        .collect()
}

/// Comma-separated 1-based column indices into sorted 0-based form.
pub fn parse_indices(list: &str, n: usize, field: &str) -> gkz::Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim) {
        if part.is_empty() {
            continue;
        }
        let v: usize = part
            .parse()
            .map_err(|_| invalid(field, format!("{part:?} is not an index")))?;
        if v == 0 || v > n {
            return Err(invalid(field, format!("index {v} out of range 1..={n}")));
        }
        out.push(v - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Comma-separated rational list.
pub fn parse_rats(list: &str, field: &str) -> gkz::Result<Vec<Rat>> {
    list.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| parse_rat(p).map_err(|_| invalid(field, format!("{p:?} is not a rational"))))
        .collect()
}

/// Comma-separated nonnegative integer shift vector.
pub fn parse_shift(list: &str, field: &str) -> gkz::Result<Vec<gkz::exact::Int>> {
    list.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<u64>()
                .map(gkz::exact::Int::from)
                .map_err(|_| invalid(field, format!("{p:?} is not a nonnegative integer")))
        })
        .collect()
}
