//! JSON-lines records: `{"x": [...]}` or `{"x": [[...], ...]}` plus any
//! other fields, which are copied to the output byte for byte.

use std::io::{BufRead, Write};

use anyhow::{anyhow, bail, Context, Result};
use fundom::{ActionSpec, Permutation};
use indexmap::IndexMap;
use rayon::prelude::*;
use serde_json::value::RawValue;
use serde_json::Value;

pub type Record = IndexMap<String, Box<RawValue>>;

const CHUNK: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Vector(usize),
    Matrix(usize, usize),
}

/// Reads `"x"` and checks it against the degree (and, for matrices, the
/// tensor shape) of `spec`.
pub fn read_x(record: &Record, spec: &ActionSpec) -> Result<(Vec<f64>, Shape)> {
    let raw = record
        .get("x")
        .ok_or_else(|| anyhow!("missing field \"x\""))?;
    let value: Value = serde_json::from_str(raw.get())?;
    let Value::Array(items) = value else {
        bail!("\"x\" must be an array");
    };
    let n = spec.degree();
    let number = |v: &Value| {
        v.as_f64()
            .ok_or_else(|| anyhow!("\"x\" entries must be numbers"))
    };
    if items.first().is_some_and(Value::is_array) {
        let rows = items.len();
        let mut values = Vec::with_capacity(n);
        let mut cols = None;
        for row in &items {
            let row = row
                .as_array()
                .ok_or_else(|| anyhow!("\"x\" mixes rows and numbers"))?;
            if *cols.get_or_insert(row.len()) != row.len() {
                bail!("\"x\" rows have different lengths");
            }
            for v in row {
                values.push(number(v)?);
            }
        }
        let cols = cols.unwrap_or(0);
        let shape = spec.shape();
        if !spec.is_tensor() || shape != [rows, cols] {
            bail!(
                "matrix of shape {rows}x{cols} does not match the group action (shape {shape:?})"
            );
        }
        Ok((values, Shape::Matrix(rows, cols)))
    } else {
        let values = items.iter().map(number).collect::<Result<Vec<_>>>()?;
        if values.len() != n {
            bail!("\"x\" has {} entries, the group acts on {n}", values.len());
        }
        Ok((values, Shape::Vector(n)))
    }
}

/// Integer-valued numbers print without a decimal point.
pub fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 9.007_199_254_740_992e15 {
        format!("{}", v as i64)
    } else {
        serde_json::to_string(&v).expect("finite")
    }
}

pub fn format_values(values: &[f64], shape: Shape) -> String {
    let row = |vs: &[f64]| {
        let parts: Vec<String> = vs.iter().map(|&v| format_number(v)).collect();
        format!("[{}]", parts.join(","))
    };
    match shape {
        Shape::Vector(_) => row(values),
        Shape::Matrix(_, cols) => {
            let rows: Vec<String> = values.chunks(cols.max(1)).map(row).collect();
            format!("[{}]", rows.join(","))
        }
    }
}

pub fn raw(text: String) -> Box<RawValue> {
    RawValue::from_string(text).expect("generated JSON is valid")
}

pub fn set_values(record: &mut Record, key: &str, values: &[f64], shape: Shape) {
    record.insert(key.to_string(), raw(format_values(values, shape)));
}

pub fn set_witness(record: &mut Record, witness: &Permutation) {
    let text = serde_json::to_string(witness).expect("permutations serialize");
    record.insert("witness".to_string(), raw(text));
}

/// Applies `f` to every non-blank line, in parallel within chunks, and
/// writes the updated records in input order. Fails on the first bad line
/// with its line number.
pub fn process<T, F>(input: &mut dyn BufRead, output: &mut dyn Write, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut Record) -> Result<T> + Sync,
{
    let mut results = Vec::new();
    let mut line_no = 0usize;
    let mut lines = input.lines();
    loop {
        let mut chunk = Vec::with_capacity(CHUNK);
        let mut read = 0;
        for line in lines.by_ref().take(CHUNK) {
            read += 1;
            line_no += 1;
            let line = line.with_context(|| format!("line {line_no}: read failed"))?;
            if !line.trim().is_empty() {
                chunk.push((line_no, line));
            }
        }
        let processed: Vec<Result<(String, T)>> = chunk
            .par_iter()
            .map(|(no, line)| {
                let mut record: Record = serde_json::from_str(line)
                    .map_err(|e| anyhow!("line {no}: invalid record: {e}"))?;
                let t = f(&mut record).map_err(|e| anyhow!("line {no}: {e:#}"))?;
                Ok((serde_json::to_string(&record)?, t))
            })
            .collect();
        for item in processed {
            let (text, t) = item?;
            writeln!(output, "{text}")?;
            results.push(t);
        }
        if read < CHUNK {
            break;
        }
    }
    output.flush()?;
    Ok(results)
}
