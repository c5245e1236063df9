//! Result shapes and their encodings.
//!
//! Every command produces one of the structures below.  In JSON mode (the
//! default) the structure is printed as a single compact JSON object
//! followed by a newline; field order is fixed by the struct declarations,
//! so output is byte-stable.  Exact quantities are encoded as their
//! canonical text forms (`"(1+2*z)/(z^3-1/2)"`, `"-2/5"`), which the
//! expression parser accepts back verbatim; numeric quantities are `re`/`im`
//! pairs of IEEE doubles and travel with the `eps` they were computed to.
//!
//! In table mode the same structure is flattened to tab-separated lines:
//! parallel arrays become one row per index, everything else becomes
//! `# key<TAB>value` comment lines, so the output can be piped straight
//! into plotting tools.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use qriccati::EvalValue;

use crate::config::{OutputFormat, Settings};
use crate::error::CliError;

/// A complex number as a `re`/`im` pair of doubles.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexOut {
    fn from(v: Complex64) -> Self {
        ComplexOut { re: v.re, im: v.im }
    }
}

/// A numeric evaluation result: a complex value or the pole marker.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(untagged)]
pub enum ValueOut {
    Finite(ComplexOut),
    Marker(&'static str),
}

impl From<EvalValue> for ValueOut {
    fn from(v: EvalValue) -> Self {
        match v {
            EvalValue::Finite(w) => ValueOut::Finite(w.into()),
            EvalValue::Pole => ValueOut::Marker("pole"),
        }
    }
}

/// A quantity that is exact when it could be certified (canonical text) and
/// numeric otherwise.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ExactOrFloat {
    Exact(String),
    Numeric(ComplexOut),
}

#[derive(Debug, Serialize)]
pub struct VerifyOut {
    pub residual: String,
    pub is_solution: bool,
}

#[derive(Debug, Serialize)]
pub struct ReduceOut {
    pub a1: String,
    pub a0: String,
    pub c: String,
}

#[derive(Debug, Serialize)]
pub struct LinearSolutionsOut {
    pub particular: Option<String>,
    pub basis: Vec<String>,
    pub completeness_note: String,
}

#[derive(Debug, Serialize)]
pub struct SearchOut {
    pub solutions: Vec<String>,
    pub infinite_family: bool,
    pub reduction: Option<ReduceOut>,
    pub reduction_particular: Option<String>,
    pub reduction_basis: Vec<String>,
    pub notes: String,
}

#[derive(Debug, Serialize)]
pub struct FamilyOut {
    pub member: String,
    pub residual: String,
    pub is_solution: bool,
}

#[derive(Debug, Serialize)]
pub struct LinearizeOut {
    /// The multiplier `a(z)` of `h(qz) = a(z)·h(z)`, origin-normalized.
    pub a: String,
    /// `a(0)`, exact.
    pub c: String,
    /// Zeros of the multiplier (numerator parameters of the product form).
    pub alphas: Vec<ExactOrFloat>,
    /// Poles of the multiplier (denominator parameters of the product form).
    pub betas: Vec<ExactOrFloat>,
    /// Leading exponent when it is an integer, else null.
    pub n0: Option<i64>,
    /// Principal-branch `Log c / Log q`.
    pub logq_c: ComplexOut,
    pub meromorphic: bool,
    /// Human-readable product form, e.g.
    /// `gamma_q(-5/2*z)/gamma_q(2*z)`.
    pub closed_form: String,
}

#[derive(Debug, Serialize)]
pub struct GammaOut {
    pub z: ComplexOut,
    pub value: ValueOut,
    pub eps: f64,
}

#[derive(Debug, Serialize)]
pub struct ClosedFormEvalOut {
    pub z: ComplexOut,
    pub value: ValueOut,
    pub eps: f64,
    pub meromorphic: bool,
    pub n0: Option<i64>,
}

#[derive(Debug, Serialize)]
pub struct SecondOrderOut {
    pub c2: String,
    pub c1: String,
    pub c0: String,
}

#[derive(Debug, Serialize)]
pub struct OrbitRow {
    pub z: ComplexOut,
    /// Relative cleared residual at this orbit point; null when an
    /// ingredient hit a pole there.
    pub residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct OrbitOut {
    pub rows: Vec<OrbitRow>,
    pub max_residual: Option<f64>,
    pub eps: f64,
}

#[derive(Debug, Serialize)]
pub struct FitOut {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
}

#[derive(Debug, Serialize)]
pub struct CensusFitsOut {
    pub log_linear: FitOut,
    pub log_squared: FitOut,
    pub best: &'static str,
    pub integrated_log_squared: FitOut,
}

#[derive(Debug, Serialize)]
pub struct CensusOut {
    pub radii: Vec<f64>,
    pub pole_counts: Vec<usize>,
    pub zero_counts: Vec<usize>,
    /// Trapezoidal integral of the pole count against `log r`.
    pub integrated: Vec<f64>,
    pub fit: CensusFitsOut,
}

/// Serializes `value` in the configured format and writes it to `out`.
/// Write failures are internal errors: the mathematics succeeded and the
/// process could not deliver the result.
pub fn write_result<W: Write>(
    out: &mut W,
    settings: &Settings,
    value: &impl Serialize,
) -> Result<(), CliError> {
    let encoded = match settings.output {
        OutputFormat::Json => {
            let mut text = serde_json::to_string(value)
                .map_err(|err| CliError::Internal(format!("cannot encode result: {err}")))?;
            text.push('\n');
            text
        }
        OutputFormat::Table => {
            let tree = serde_json::to_value(value)
                .map_err(|err| CliError::Internal(format!("cannot encode result: {err}")))?;
            render_table(&tree)
        }
    };
    out.write_all(encoded.as_bytes())
        .and_then(|()| out.flush())
        .map_err(|err| CliError::Internal(format!("cannot write result: {err}")))
}

fn scalar_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Tab-separated rendering: parallel top-level arrays become one row per
/// index under a `#`-prefixed header, an array of objects becomes one row
/// per object, and remaining fields become `# key<TAB>value` lines.
fn render_table(tree: &Value) -> String {
    let Value::Object(map) = tree else {
        return format!("{tree}\n");
    };
    let mut text = String::new();

    // Parallel numeric arrays (census-style output).
    let parallel: Vec<(&String, &Vec<Value>)> = map
        .iter()
        .filter_map(|(k, v)| match v {
            Value::Array(items)
                if !items.is_empty() && items.iter().all(|x| x.is_number()) =>
            {
                Some((k, items))
            }
            _ => None,
        })
        .collect();
    let rows_lengths: Vec<usize> = parallel.iter().map(|(_, v)| v.len()).collect();
    let aligned = rows_lengths.windows(2).all(|w| w[0] == w[1]);
    if parallel.len() >= 2 && aligned {
        let header: Vec<String> = parallel.iter().map(|(k, _)| (*k).clone()).collect();
        text.push_str(&format!("# {}\n", header.join("\t")));
        for i in 0..rows_lengths[0] {
            let row: Vec<String> = parallel
                .iter()
                .map(|(_, items)| scalar_text(&items[i]))
                .collect();
            text.push_str(&row.join("\t"));
            text.push('\n');
        }
    }

    // Arrays of flat objects (orbit rows).
    for (key, value) in map {
        let Value::Array(items) = value else { continue };
        if items.is_empty() || !items.iter().all(|x| x.is_object()) {
            continue;
        }
        let mut columns: Vec<String> = Vec::new();
        for item in items {
            if let Value::Object(fields) = item {
                for (name, field) in fields {
                    let flat: Vec<(String, &Value)> = match field {
                        Value::Object(inner) => inner
                            .iter()
                            .map(|(n, v)| (format!("{name}.{n}"), v))
                            .collect(),
                        other => vec![(name.clone(), other)],
                    };
                    for (column, _) in flat {
                        if !columns.contains(&column) {
                            columns.push(column);
                        }
                    }
                }
            }
        }
        text.push_str(&format!("# {key}: {}\n", columns.join("\t")));
        for item in items {
            let Value::Object(fields) = item else { continue };
            let mut row = Vec::new();
            for column in &columns {
                let cell = match column.split_once('.') {
                    Some((outer, inner)) => fields
                        .get(outer)
                        .and_then(|v| v.get(inner))
                        .cloned()
                        .unwrap_or(Value::Null),
                    None => fields.get(column).cloned().unwrap_or(Value::Null),
                };
                row.push(scalar_text(&cell));
            }
            text.push_str(&row.join("\t"));
            text.push('\n');
        }
    }

    // Everything that did not form a row block.
    for (key, value) in map {
        let consumed_parallel = parallel.len() >= 2
            && aligned
            && parallel.iter().any(|(k, _)| *k == key);
        let consumed_rows = matches!(value, Value::Array(items)
            if !items.is_empty() && items.iter().all(|x| x.is_object()));
        if consumed_parallel || consumed_rows {
            continue;
        }
        match value {
            Value::Object(inner) => {
                for (name, field) in inner {
                    text.push_str(&format!("# {key}.{name}\t{}\n", scalar_text(field)));
                }
            }
            other => text.push_str(&format!("# {key}\t{}\n", scalar_text(other))),
        }
    }
    text
}
