//! Plain-text game and profile files.
//!
//! Game format: the first data line holds `m n`; the next m data lines hold
//! the rows of R, then m more hold the rows of C. Values are decimal floats
//! separated by whitespace and are written with 17 significant digits, so a
//! write/read round trip reproduces every f64 bit-exactly. Lines starting
//! with `#` and blank lines are ignored; by convention a blank line separates
//! the two matrices. Payoffs outside [0, 1] are accepted and normalized on
//! read, which is how externally produced games are imported.
//!
//! Profile format: `m n` on the first data line, then one line with the m row
//! probabilities and one with the n column probabilities.

use crate::game::{BimatrixGame, GameError, MixedProfile};
use ndarray::{Array1, Array2};
use std::fs;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FileError {
    FileError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Data lines with their original 1-based line numbers; comments and blanks
/// stripped.
fn data_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_dims(line_no: usize, line: &str) -> Result<(usize, usize), FileError> {
    let mut it = line.split_whitespace();
    let m = it
        .next()
        .ok_or_else(|| parse_err(line_no, "expected `m n`"))?
        .parse::<usize>()
        .map_err(|e| parse_err(line_no, format!("bad row count: {e}")))?;
    let n = it
        .next()
        .ok_or_else(|| parse_err(line_no, "expected `m n`"))?
        .parse::<usize>()
        .map_err(|e| parse_err(line_no, format!("bad column count: {e}")))?;
    if it.next().is_some() {
        return Err(parse_err(line_no, "trailing tokens after `m n`"));
    }
    if m == 0 || n == 0 {
        return Err(parse_err(line_no, "dimensions must be positive"));
    }
    Ok((m, n))
}

fn parse_row(line_no: usize, line: &str, n: usize) -> Result<Vec<f64>, FileError> {
    let vals: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
    let vals = vals.map_err(|e| parse_err(line_no, format!("bad number: {e}")))?;
    if vals.len() != n {
        return Err(parse_err(
            line_no,
            format!("expected {n} values, found {}", vals.len()),
        ));
    }
    Ok(vals)
}

fn parse_matrix(
    lines: &[(usize, &str)],
    start: usize,
    m: usize,
    n: usize,
) -> Result<Array2<f64>, FileError> {
    let mut out = Array2::zeros((m, n));
    for i in 0..m {
        let (line_no, line) = lines
            .get(start + i)
            .ok_or_else(|| parse_err(lines.last().map_or(1, |l| l.0), "unexpected end of file"))?;
        let row = parse_row(*line_no, line, n)?;
        for (j, v) in row.into_iter().enumerate() {
            out[[i, j]] = v;
        }
    }
    Ok(out)
}

pub fn read_game(path: &Path) -> Result<BimatrixGame, FileError> {
    let text = fs::read_to_string(path)?;
    let lines = data_lines(&text);
    let (first_no, first) = lines
        .first()
        .ok_or_else(|| parse_err(1, "file contains no data"))?;
    let (m, n) = parse_dims(*first_no, first)?;
    let r = parse_matrix(&lines, 1, m, n)?;
    let c = parse_matrix(&lines, 1 + m, m, n)?;
    if lines.len() > 1 + 2 * m {
        return Err(parse_err(lines[1 + 2 * m].0, "trailing data after game"));
    }
    Ok(BimatrixGame::normalized(r, c)?)
}

fn write_matrix(out: &mut String, m: &Array2<f64>) {
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

pub fn write_game(game: &BimatrixGame, path: &Path) -> Result<(), FileError> {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", game.rows(), game.cols()));
    write_matrix(&mut out, game.r());
    out.push('\n');
    write_matrix(&mut out, game.c());
    fs::write(path, out)?;
    Ok(())
}

pub fn read_profile(path: &Path) -> Result<MixedProfile, FileError> {
    let text = fs::read_to_string(path)?;
    let lines = data_lines(&text);
    let (first_no, first) = lines
        .first()
        .ok_or_else(|| parse_err(1, "file contains no data"))?;
    let (m, n) = parse_dims(*first_no, first)?;
    let (x_no, x_line) = lines
        .get(1)
        .ok_or_else(|| parse_err(*first_no, "missing row strategy"))?;
    let (y_no, y_line) = lines
        .get(2)
        .ok_or_else(|| parse_err(*first_no, "missing column strategy"))?;
    let x = parse_row(*x_no, x_line, m)?;
    let y = parse_row(*y_no, y_line, n)?;
    Ok(MixedProfile::new(Array1::from(x), Array1::from(y))?)
}

pub fn write_profile(profile: &MixedProfile, path: &Path) -> Result<(), FileError> {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", profile.x().len(), profile.y().len()));
    for v in [profile.x(), profile.y()] {
        let line: Vec<String> = v.iter().map(|e| format!("{e:.16e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}
