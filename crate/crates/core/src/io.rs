//! Instance file formats.
//!
//! * `matrix`: first line `n`, then `n` rows for a TSP distance matrix, or
//!   `n` flow rows, a blank line and `n` distance rows for a QAP.
//! * `tsplib`: the `EXPLICIT` / `FULL_MATRIX` subset of TSPLIB.
//! * `qaplib`: QAPLIB layout, `n` followed by the flow and distance matrices
//!   as free-form whitespace separated numbers.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::problem::{Matrix, ProblemInstance, QapInstance, TspInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceFormat {
    Matrix,
    Tsplib,
    Qaplib,
}

impl FromStr for InstanceFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "matrix" => Ok(InstanceFormat::Matrix),
            "tsplib" | "tsplib-subset" => Ok(InstanceFormat::Tsplib),
            "qaplib" | "qaplib-subset" => Ok(InstanceFormat::Qaplib),
            other => Err(Error::invalid(format!("unknown instance format '{other}'"))),
        }
    }
}

pub fn parse_instance(path: impl AsRef<Path>, format: InstanceFormat) -> Result<ProblemInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance_str(&text, format)
}

pub fn parse_instance_str(text: &str, format: InstanceFormat) -> Result<ProblemInstance> {
    match format {
        InstanceFormat::Matrix => parse_matrix_format(text),
        InstanceFormat::Tsplib => parse_tsplib(text),
        InstanceFormat::Qaplib => parse_qaplib(text),
    }
}

/// Writes `inst` in the plain matrix format.
pub fn write_instance(inst: &ProblemInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, instance_to_string(inst)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn instance_to_string(inst: &ProblemInstance) -> String {
    fn push_matrix(out: &mut String, m: &Matrix) {
        for row in m.rows() {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    }
    let mut out = format!("{}\n", inst.n());
    match inst {
        ProblemInstance::Tsp(t) => push_matrix(&mut out, t.distances()),
        ProblemInstance::Qap(q) => {
            push_matrix(&mut out, q.flow());
            out.push('\n');
            push_matrix(&mut out, q.distance());
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn line_tokens(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..idx],
                    line: line_no,
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(idx),
            _ => {}
        }
    }
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn number(tok: Token<'_>) -> Result<f64> {
    tok.text
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| {
            parse_err(
                tok.line,
                tok.column,
                format!("'{}' is not a number", tok.text),
            )
        })
}

fn dimension(tok: Token<'_>) -> Result<usize> {
    match tok.text.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(parse_err(
            tok.line,
            tok.column,
            format!("'{}' is not a positive integer dimension", tok.text),
        )),
    }
}

fn end_position(text: &str) -> (usize, usize) {
    let lines: Vec<&str> = text.lines().collect();
    match lines.last() {
        Some(last) => (lines.len(), last.chars().count() + 1),
        None => (1, 1),
    }
}

fn parse_matrix_format(text: &str) -> Result<ProblemInstance> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (n, header_line) = loop {
        match lines.next() {
            Some((no, l)) => {
                let toks = line_tokens(no, l);
                match toks.as_slice() {
                    [] => continue,
                    [tok] => break (dimension(*tok)?, no),
                    [_, extra, ..] => {
                        return Err(parse_err(no, extra.column, "expected a single dimension"))
                    }
                }
            }
            None => return Err(parse_err(1, 1, "empty file, expected dimension")),
        }
    };

    let rows: Vec<(usize, Vec<Token<'_>>)> = lines
        .map(|(no, l)| (no, line_tokens(no, l)))
        .filter(|(_, t)| !t.is_empty())
        .collect();

    let mut matrices = Vec::new();
    for block in rows.chunks(n) {
        let mut m = Vec::with_capacity(n);
        for (no, toks) in block {
            if toks.len() != n {
                let column = toks.get(n).map_or_else(
                    || toks.last().map_or(1, |t| t.column + t.text.len()),
                    |t| t.column,
                );
                return Err(parse_err(
                    *no,
                    column,
                    format!("row has {} entries, expected {n}", toks.len()),
                ));
            }
            m.push(
                toks.iter()
                    .map(|t| number(*t))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        matrices.push((block.len(), m));
    }

    let (eof_line, eof_col) = end_position(text);
    let short = |have: usize, want: usize| {
        parse_err(
            eof_line,
            eof_col,
            format!("unexpected end of file after {have} of {want} matrix rows"),
        )
    };
    match matrices.len() {
        0 => Err(parse_err(
            header_line + 1,
            1,
            format!("missing {n} matrix rows"),
        )),
        1 => {
            let (count, rows) = matrices.pop().unwrap();
            if count < n {
                return Err(short(count, n));
            }
            Ok(TspInstance::new(Matrix::from_rows(rows)?)?.into())
        }
        2 => {
            let (count, c) = matrices.pop().unwrap();
            let (_, b) = matrices.pop().unwrap();
            if count < n {
                return Err(short(n + count, 2 * n));
            }
            Ok(QapInstance::new(Matrix::from_rows(b)?, Matrix::from_rows(c)?)?.into())
        }
        _ => {
            let (no, toks) = &rows[2 * n];
            Err(parse_err(
                *no,
                toks[0].column,
                "trailing data after the matrices",
            ))
        }
    }
}

fn parse_tsplib(text: &str) -> Result<ProblemInstance> {
    let mut dim = None;
    let mut weight_type = None;
    let mut weight_format = None;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut in_section = false;

    for (no, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("EDGE_WEIGHT_SECTION") {
            in_section = true;
            break;
        }
        if line == "EOF" || (!line.contains(':') && line.ends_with("_SECTION")) {
            break;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(parse_err(
                no,
                1,
                format!("expected 'KEY : VALUE', got '{line}'"),
            ));
        };
        let value = value.trim();
        let value_col = raw.find(value).map_or(1, |i| i + 1);
        match key.trim() {
            "DIMENSION" => {
                dim = Some(dimension(Token {
                    text: value,
                    line: no,
                    column: value_col,
                })?)
            }
            "EDGE_WEIGHT_TYPE" => weight_type = Some((value.to_string(), no, value_col)),
            "EDGE_WEIGHT_FORMAT" => weight_format = Some((value.to_string(), no, value_col)),
            "TYPE" if value != "TSP" && value != "ATSP" => {
                return Err(parse_err(
                    no,
                    value_col,
                    format!("unsupported TYPE '{value}'"),
                ))
            }
            _ => {}
        }
    }

    let n = dim.ok_or_else(|| parse_err(1, 1, "missing DIMENSION"))?;
    match weight_type {
        Some((ref t, _, _)) if t == "EXPLICIT" => {}
        Some((t, no, col)) => {
            return Err(parse_err(
                no,
                col,
                format!("unsupported EDGE_WEIGHT_TYPE '{t}'"),
            ))
        }
        None => return Err(parse_err(1, 1, "missing EDGE_WEIGHT_TYPE")),
    }
    if let Some((f, no, col)) = weight_format {
        if f != "FULL_MATRIX" {
            return Err(parse_err(
                no,
                col,
                format!("unsupported EDGE_WEIGHT_FORMAT '{f}'"),
            ));
        }
    }
    if !in_section {
        let (l, c) = end_position(text);
        return Err(parse_err(l, c, "missing EDGE_WEIGHT_SECTION"));
    }

    let mut values = Vec::with_capacity(n * n);
    for (no, l) in lines {
        if l.trim() == "EOF" {
            break;
        }
        for tok in line_tokens(no, l) {
            if values.len() == n * n {
                return Err(parse_err(tok.line, tok.column, "too many edge weights"));
            }
            values.push(number(tok)?);
        }
    }
    if values.len() < n * n {
        let (l, c) = end_position(text);
        return Err(parse_err(
            l,
            c,
            format!("expected {} edge weights, found {}", n * n, values.len()),
        ));
    }
    let m = Matrix::from_fn(n, |i, j| values[i * n + j]);
    Ok(TspInstance::new(m)?.into())
}

fn parse_qaplib(text: &str) -> Result<ProblemInstance> {
    let mut toks = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| line_tokens(i + 1, l));
    let n = match toks.next() {
        Some(t) => dimension(t)?,
        None => return Err(parse_err(1, 1, "empty file, expected dimension")),
    };
    let mut read = |what: &str| -> Result<Matrix> {
        let mut vals = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            match toks.next() {
                Some(t) => vals.push(number(t)?),
                None => {
                    let (l, c) = end_position(text);
                    return Err(parse_err(
                        l,
                        c,
                        format!(
                            "{what} matrix truncated after {} of {} entries",
                            vals.len(),
                            n * n
                        ),
                    ));
                }
            }
        }
        Ok(Matrix::from_fn(n, |i, j| vals[i * n + j]))
    };
    let flow = read("flow")?;
    let distance = read("distance")?;
    if let Some(t) = toks.next() {
        return Err(parse_err(
            t.line,
            t.column,
            "trailing data after the matrices",
        ));
    }
    Ok(QapInstance::new(flow, distance)?.into())
}
