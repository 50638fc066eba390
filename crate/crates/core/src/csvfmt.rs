//! Text formats shared by every CSV writer in the crate.
//!
//! Reals are written in scientific notation with 17 significant digits so a
//! round trip through text is lossless. Complex entries are written as
//! `re+imj` / `re-imj`.

use crate::algebra::{c, CMat, C64};
use crate::error::{Error, Result};

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}j", z.re, sign, z.im.abs())
}

/// One matrix row per line, entries comma separated.
pub fn matrix_to_csv(m: &CMat) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| complex(m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    let body = s.strip_suffix('j').ok_or_else(|| Error::Parse(format!("complex entry {s:?} must end in 'j'")))?;
    let bytes = body.as_bytes();
    // the re/im separator is the last sign that does not start an exponent
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(|| Error::Parse(format!("complex entry {s:?} has no imaginary part")))?;
    let re: f64 = body[..split].parse().map_err(|e| Error::Parse(format!("real part of {s:?}: {e}")))?;
    let im: f64 = body[split..].parse().map_err(|e| Error::Parse(format!("imaginary part of {s:?}: {e}")))?;
    Ok(c(re, im))
}

pub fn matrix_from_csv(text: &str) -> Result<CMat> {
    let rows: Vec<Vec<C64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(parse_complex).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse("matrix CSV rows are empty or ragged".into()));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}
