//! Line-oriented model file.
//!
//! ```text
//! devocr-mlp <version>
//! sizes <inputs> <hidden> <outputs>
//! hidden_weights            # `hidden` lines of `inputs` values
//! hidden_bias               # one line of `hidden` values
//! output_weights            # `outputs` lines of `hidden` values
//! output_bias               # one line of `outputs` values
//! end
//! ```
//!
//! Values are written with Rust's shortest round-trip formatting, so a
//! reloaded network is bit-identical.

use std::fs;
use std::path::Path;

use super::{LayerSizes, Mlp, MlpError};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "devocr-mlp";

fn push_rows(out: &mut String, section: &str, values: &[f64], row_len: usize) {
    out.push_str(section);
    out.push('\n');
    for row in values.chunks(row_len) {
        let line: Vec<String> = row.iter().map(f64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

pub fn write_model(net: &Mlp) -> String {
    let s = net.sizes();
    let p = net.parameters();
    let mut out = format!("{MAGIC} {FORMAT_VERSION}\nsizes {} {} {}\n", s.inputs, s.hidden, s.outputs);
    push_rows(&mut out, "hidden_weights", &p[s.hidden_weights()], s.inputs);
    push_rows(&mut out, "hidden_bias", &p[s.hidden_bias()], s.hidden);
    push_rows(&mut out, "output_weights", &p[s.output_weights()], s.hidden);
    push_rows(&mut out, "output_bias", &p[s.output_bias()], s.outputs);
    out.push_str("end\n");
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str), MlpError> {
        self.inner
            .by_ref()
            .map(|(i, l)| (i + 1, l.trim()))
            .find(|(_, l)| !l.is_empty())
            .ok_or_else(|| MlpError::FormatError(format!("unexpected end of file, expected {what}")))
    }

    fn expect(&mut self, keyword: &str) -> Result<(), MlpError> {
        let (n, line) = self.next(keyword)?;
        if line != keyword {
            return Err(MlpError::FormatError(format!("line {n}: expected {keyword:?}, found {line:?}")));
        }
        Ok(())
    }

    fn rows(&mut self, section: &str, rows: usize, row_len: usize, out: &mut Vec<f64>) -> Result<(), MlpError> {
        self.expect(section)?;
        for _ in 0..rows {
            let (n, line) = self.next(section)?;
            let values = line
                .split_whitespace()
                .map(str::parse::<f64>)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| MlpError::FormatError(format!("line {n}: {e}")))?;
            if values.len() != row_len {
                return Err(MlpError::FormatError(format!(
                    "line {n}: expected {row_len} values, found {}",
                    values.len()
                )));
            }
            out.extend(values);
        }
        Ok(())
    }
}

pub fn read_model(text: &str) -> Result<Mlp, MlpError> {
    let mut lines = Lines { inner: text.lines().enumerate() };
    let (_, header) = lines.next("header")?;
    let mut head = header.split_whitespace();
    if head.next() != Some(MAGIC) {
        return Err(MlpError::FormatError(format!("not a model file: {header:?}")));
    }
    let version: u32 = head
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| MlpError::FormatError("missing format version".into()))?;
    if version != FORMAT_VERSION {
        return Err(MlpError::VersionMismatch { found: version, expected: FORMAT_VERSION });
    }

    let (n, sizes_line) = lines.next("sizes")?;
    let dims: Vec<usize> = sizes_line
        .strip_prefix("sizes")
        .map(|rest| rest.split_whitespace().filter_map(|t| t.parse().ok()).collect())
        .unwrap_or_default();
    let [inputs, hidden, outputs] = dims[..] else {
        return Err(MlpError::FormatError(format!("line {n}: bad sizes line {sizes_line:?}")));
    };
    let sizes = LayerSizes::new(inputs, hidden, outputs)?;

    let mut params = Vec::with_capacity(sizes.parameter_count());
    lines.rows("hidden_weights", hidden, inputs, &mut params)?;
    lines.rows("hidden_bias", 1, hidden, &mut params)?;
    lines.rows("output_weights", outputs, hidden, &mut params)?;
    lines.rows("output_bias", 1, outputs, &mut params)?;
    lines.expect("end")?;
    Mlp::from_parameters(sizes, params)
}

pub fn save(net: &Mlp, path: impl AsRef<Path>) -> Result<(), MlpError> {
    fs::write(path, write_model(net))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Mlp, MlpError> {
    read_model(&fs::read_to_string(path)?)
}
