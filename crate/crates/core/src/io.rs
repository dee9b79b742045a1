//! Text formats.
//!
//! QMX v1 (density matrices):
//!
//! ```text
//! qmx 1
//! dims <dA> <dB>
//! <re>,<im> <re>,<im> ...      (dA*dB rows of dA*dB entries)
//! ```
//!
//! Ensembles (pure-state mixtures over any number of parties):
//!
//! ```text
//! dims <d1> <d2> ... <dm>
//! <p> | <re>,<im> <re>,<im> ...  (one member per line, d1*...*dm amplitudes)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored in ensemble files.
//! Ensemble amplitudes may be unnormalized; each member is rescaled to unit norm.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::localorth::{MultiDims, MultiEnsemble};
use crate::state::{DensityMatrix, Dims};
use num_complex::Complex64;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Whitespace-separated tokens with their 1-based starting columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..idx]));
                start = None;
            }
            (false, None) => start = Some(idx),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(move |(s, t)| (line[..s].chars().count() + 1, t))
}

fn parse_complex(token: &str, line: usize, column: usize) -> Result<Complex64> {
    let (re_str, im_str) = token
        .split_once(',')
        .ok_or_else(|| parse_err(line, column, format!("expected '<re>,<im>', got '{token}'")))?;
    let re: f64 = re_str
        .parse()
        .map_err(|_| parse_err(line, column, format!("bad real part '{re_str}'")))?;
    let im: f64 = im_str.parse().map_err(|_| {
        parse_err(line, column + re_str.chars().count() + 1, format!("bad imaginary part '{im_str}'"))
    })?;
    if !re.is_finite() || !im.is_finite() {
        return Err(parse_err(line, column, "non-finite entry"));
    }
    Ok(Complex64::new(re, im))
}

fn parse_dims_line(line: &str, lineno: usize) -> Result<Vec<usize>> {
    let mut toks = tokens(line);
    match toks.next() {
        Some((_, "dims")) => {}
        Some((col, other)) => return Err(parse_err(lineno, col, format!("expected 'dims', got '{other}'"))),
        None => return Err(parse_err(lineno, 1, "expected 'dims' header")),
    }
    let dims: Vec<usize> = toks
        .map(|(col, t)| match t.parse::<usize>() {
            Ok(d) if d > 0 => Ok(d),
            _ => Err(parse_err(lineno, col, format!("bad dimension '{t}'"))),
        })
        .collect::<Result<_>>()?;
    if dims.is_empty() {
        return Err(parse_err(lineno, 5, "no dimensions given"));
    }
    Ok(dims)
}

pub fn write_qmx(rho: &DensityMatrix) -> String {
    let d = rho.dims();
    let m = rho.matrix();
    let mut out = format!("qmx 1\ndims {} {}\n", d.a, d.b);
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:.16e},{:.16e}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Parses and validates a QMX v1 document.
pub fn parse_qmx(text: &str) -> Result<DensityMatrix> {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines.first().copied().unwrap_or("");
    let head: Vec<(usize, &str)> = tokens(header).collect();
    if head.len() != 2 || head[0].1 != "qmx" || head[1].1 != "1" {
        return Err(parse_err(1, 1, "expected header 'qmx 1'"));
    }
    let dims_line = lines.get(1).ok_or_else(|| parse_err(2, 1, "missing dims line"))?;
    let d = parse_dims_line(dims_line, 2)?;
    if d.len() != 2 {
        return Err(parse_err(2, 1, format!("QMX needs exactly two dimensions, got {}", d.len())));
    }
    let dims = Dims::new(d[0], d[1]).map_err(|e| parse_err(2, 1, e.to_string()))?;
    let n = dims.total();
    let mut m = CMatrix::zeros(n, n);
    for row in 0..n {
        let lineno = row + 3;
        let line = lines
            .get(row + 2)
            .ok_or_else(|| parse_err(lineno, 1, format!("expected {n} matrix rows, found {row}")))?;
        let mut count = 0;
        for (col, tok) in tokens(line) {
            if count == n {
                return Err(parse_err(lineno, col, format!("more than {n} entries in row")));
            }
            m[(row, count)] = parse_complex(tok, lineno, col)?;
            count += 1;
        }
        if count != n {
            return Err(parse_err(lineno, line.chars().count() + 1, format!("expected {n} entries, got {count}")));
        }
    }
    if let Some((k, extra)) = lines.iter().enumerate().skip(n + 2).find(|(_, l)| !l.trim().is_empty()) {
        return Err(parse_err(k + 1, 1, format!("unexpected trailing content '{}'", extra.trim())));
    }
    DensityMatrix::new(m, dims)
}

pub fn parse_ensemble(text: &str) -> Result<MultiEnsemble> {
    let mut dims: Option<MultiDims> = None;
    let mut members = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let Some(ref md) = dims else {
            let d = parse_dims_line(line, lineno)?;
            dims = Some(MultiDims::new(d).map_err(|e| parse_err(lineno, 1, e.to_string()))?);
            continue;
        };
        let bar = line
            .find('|')
            .ok_or_else(|| parse_err(lineno, 1, "expected '<p> | <amplitudes>'"))?;
        let weight_str = line[..bar].trim();
        let weight: f64 = weight_str
            .parse()
            .map_err(|_| parse_err(lineno, 1, format!("bad weight '{weight_str}'")))?;
        let offset = line[..=bar].chars().count();
        let mut amps = Vec::with_capacity(md.total());
        for (col, tok) in tokens(&line[bar + 1..]) {
            amps.push(parse_complex(tok, lineno, col + offset)?);
        }
        if amps.len() != md.total() {
            return Err(parse_err(
                lineno,
                offset + 1,
                format!("expected {} amplitudes, got {}", md.total(), amps.len()),
            ));
        }
        members.push((lineno, weight, CVector::from_vec(amps)));
    }
    let dims = dims.ok_or_else(|| parse_err(1, 1, "missing 'dims' header"))?;
    if members.is_empty() {
        return Err(parse_err(text.lines().count().max(1), 1, "ensemble has no members"));
    }
    for (lineno, w, v) in &members {
        if *w < 0.0 || !w.is_finite() {
            return Err(parse_err(*lineno, 1, format!("invalid weight {w}")));
        }
        if v.norm() == 0.0 {
            return Err(parse_err(*lineno, 1, "zero state vector"));
        }
    }
    let total: f64 = members.iter().map(|m| m.1).sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(parse_err(members[0].0, 1, format!("weights sum to {total}, expected 1")));
    }
    MultiEnsemble::new(dims, members.into_iter().map(|(_, w, v)| (w / total, v)).collect())
}

pub fn write_ensemble(e: &MultiEnsemble) -> String {
    let dims: Vec<String> = e.dims().as_slice().iter().map(|d| d.to_string()).collect();
    let mut out = format!("dims {}\n", dims.join(" "));
    for (w, v) in e.members() {
        let amps: Vec<String> = v.iter().map(|z| format!("{:.16e},{:.16e}", z.re, z.im)).collect();
        let _ = writeln!(out, "{:.16e} | {}", w, amps.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::random;
    use proptest::prelude::*;

    #[test]
    fn qmx_roundtrip_is_exact() {
        let rho = families::werner(0.9).unwrap();
        let text = write_qmx(&rho);
        assert!(text.starts_with("qmx 1\ndims 2 2\n"));
        let back = parse_qmx(&text).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn qmx_accepts_exponent_notation() {
        let text = "qmx 1\ndims 1 2\n5e-1,0e0 0,0\n0,0 0.5E0,-0\n";
        let rho = parse_qmx(text).unwrap();
        assert_eq!(rho.matrix()[(1, 1)].re, 0.5);
    }

    #[test]
    fn qmx_errors_name_position() {
        let cases = [
            ("qmx 2\n", 1, 1),
            ("qmx 1\ndimz 2 2\n", 2, 1),
            ("qmx 1\ndims 1 2\n0.5,0 0,0\n0,0 0.5;0\n", 4, 5),
            ("qmx 1\ndims 1 2\n0.5,0 0,0\n0,0 0.5,x\n", 4, 9),
            ("qmx 1\ndims 1 2\n0.5,0 0,0\n", 4, 1),
            ("qmx 1\ndims 1 2\n0.5,0\n0,0 0.5,0\n", 3, 6),
            ("qmx 1\ndims 1 2\n0.5,0 0,0 0,0\n0,0 0.5,0\n", 3, 11),
        ];
        for (text, line, column) in cases {
            match parse_qmx(text) {
                Err(Error::Parse { line: l, column: c, .. }) => {
                    assert_eq!((l, c), (line, column), "{text:?}")
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn qmx_validates_state() {
        let text = "qmx 1\ndims 1 2\n1,0 0,0\n0,0 1,0\n";
        assert!(matches!(parse_qmx(text), Err(Error::InvalidTrace(_))));
    }

    #[test]
    fn ensemble_parse() {
        let text = "# two product states\ndims 2 2\n0.5 | 1,0 0,0 0,0 0,0\n\n0.5 | 0,0 0,0 0,0 2,0\n";
        let e = parse_ensemble(text).unwrap();
        assert_eq!(e.len(), 2);
        assert!((e.members()[1].1[3].re - 1.0).abs() < 1e-15);
        let back = parse_ensemble(&write_ensemble(&e)).unwrap();
        assert_eq!(back.len(), 2);
    }

    #[test]
    fn ensemble_errors() {
        for (text, line) in [
            ("0.5 | 1,0\n", 1),
            ("dims 2 2\n0.5 1,0 0,0 0,0 0,0\n", 2),
            ("dims 2 2\n0.5 | 1,0 0,0 0,0\n", 2),
            ("dims 2 2\n0.4 | 1,0 0,0 0,0 0,0\n", 2),
            ("dims 2 2\n1 | 0,0 0,0 0,0 0,0\n", 2),
            ("dims 2 x\n", 1),
        ] {
            match parse_ensemble(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn qmx_roundtrip_random(seed in any::<u64>(), da in 1usize..4, db in 1usize..4, rank in 1usize..4) {
            let dims = Dims::new(da, db).unwrap();
            let rho = random::random_density(dims, rank.min(dims.total()), seed).unwrap();
            let back = parse_qmx(&write_qmx(&rho)).unwrap();
            prop_assert_eq!(back, rho);
        }
    }
}
