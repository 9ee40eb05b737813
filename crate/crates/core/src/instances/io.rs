//! Text formats.
//!
//! Instance (`.potts`):
//! ```text
//! POTTS n m k
//! <k costs for vertex 0>
//! ...
//! <k costs for vertex n-1>
//! u v w          (m lines, 0-based vertex indices)
//! ```
//! Labeling: `LABELING n k` followed by `n` labels, one per line.
//! Everything after a `#` on a line is ignored. Numbers are exact decimals or `p/q`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Labeling, PottsInstance};
use crate::num::{format_rational, parse_rational};

use super::GrayImage;

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("invalid {what} '{tok}'") })
}

pub fn parse_instance(text: &str) -> Result<PottsInstance> {
    let mut lines = content_lines(text);
    let (hline, header) =
        lines.next().ok_or(Error::Parse { line: 1, msg: "empty instance file".into() })?;
    if header.len() != 4 || header[0] != "POTTS" {
        return Err(Error::Parse { line: hline, msg: "expected header 'POTTS n m k'".into() });
    }
    let n = parse_usize(header[1], hline, "vertex count")?;
    let m = parse_usize(header[2], hline, "edge count")?;
    let k = parse_usize(header[3], hline, "label count")?;

    let mut costs = Vec::with_capacity(n * k);
    let mut last_line = hline;
    for u in 0..n {
        let (line, toks) = lines.next().ok_or(Error::Parse {
            line: last_line + 1,
            msg: format!("missing cost row for vertex {u}"),
        })?;
        last_line = line;
        if toks.len() != k {
            return Err(Error::Parse {
                line,
                msg: format!("vertex {u}: expected {k} costs, found {}", toks.len()),
            });
        }
        for t in toks {
            let c = parse_rational(t)
                .ok_or_else(|| Error::Parse { line, msg: format!("invalid cost '{t}'") })?;
            costs.push(c);
        }
    }
    let mut edges = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for e in 0..m {
        let (line, toks) = lines.next().ok_or(Error::Parse {
            line: last_line + 1,
            msg: format!("missing edge line {e}"),
        })?;
        last_line = line;
        if toks.len() != 3 {
            return Err(Error::Parse { line, msg: "expected 'u v w'".into() });
        }
        let u = parse_usize(toks[0], line, "vertex")?;
        let v = parse_usize(toks[1], line, "vertex")?;
        let w = parse_rational(toks[2])
            .ok_or_else(|| Error::Parse { line, msg: format!("invalid weight '{}'", toks[2]) })?;
        edges.push((u, v));
        weights.push(w);
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse { line, msg: "trailing content after last edge".into() });
    }
    PottsInstance::new(n, k, edges, costs, weights).map_err(|e| match e {
        Error::InvalidInstance(msg) => Error::Parse { line: hline, msg },
        other => other,
    })
}

pub fn format_instance(instance: &PottsInstance) -> String {
    let (n, m, k) = (instance.vertex_count(), instance.edge_count(), instance.label_count());
    let mut out = format!("POTTS {n} {m} {k}\n");
    for u in 0..n {
        let row: Vec<String> = (0..k).map(|i| format_rational(instance.node_cost(u, i))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    for (e, &(u, v)) in instance.edges().iter().enumerate() {
        out.push_str(&format!("{u} {v} {}\n", format_rational(instance.weight(e))));
    }
    out
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<PottsInstance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn write_instance(instance: &PottsInstance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_instance(instance))?;
    Ok(())
}

/// Parses a labeling; returns it with the declared label count.
pub fn parse_labeling(text: &str) -> Result<(Labeling, usize)> {
    let mut lines = content_lines(text);
    let (hline, header) =
        lines.next().ok_or(Error::Parse { line: 1, msg: "empty labeling file".into() })?;
    if header.len() != 3 || header[0] != "LABELING" {
        return Err(Error::Parse { line: hline, msg: "expected header 'LABELING n k'".into() });
    }
    let n = parse_usize(header[1], hline, "vertex count")?;
    let k = parse_usize(header[2], hline, "label count")?;
    let mut labels = Vec::with_capacity(n);
    for (line, toks) in lines {
        for t in toks {
            let l = parse_usize(t, line, "label")?;
            if l >= k {
                return Err(Error::Parse { line, msg: format!("label {l} >= k = {k}") });
            }
            labels.push(l);
        }
    }
    if labels.len() != n {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header declares {n} labels, found {}", labels.len()),
        });
    }
    Ok((Labeling::new(labels), k))
}

pub fn format_labeling(x: &Labeling, k: usize) -> String {
    let mut out = format!("LABELING {} {k}\n", x.len());
    for l in x.labels() {
        out.push_str(&l.to_string());
        out.push('\n');
    }
    out
}

pub fn read_labeling(path: impl AsRef<Path>) -> Result<(Labeling, usize)> {
    parse_labeling(&std::fs::read_to_string(path)?)
}

pub fn write_labeling(x: &Labeling, k: usize, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_labeling(x, k))?;
    Ok(())
}

/// Renders a grid labeling as an 8-bit image with gray level `⌊255·label/(k−1)⌋`.
pub fn labeling_to_pgm(x: &Labeling, k: usize, width: usize, height: usize) -> Result<GrayImage> {
    if width * height != x.len() {
        return Err(Error::SizeMismatch { expected: width * height, found: x.len() });
    }
    if k < 2 {
        return Err(Error::Parameter("need k >= 2 to scale labels".into()));
    }
    let data = x.labels().iter().map(|&l| (255 * l / (k - 1)) as u16).collect();
    GrayImage::new(width, height, 255, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;

    #[test]
    fn t1_text_round_trip() {
        let text = "POTTS 2 1 2\n0 2\n2 0\n0 1 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst, fixtures::t1());
        assert_eq!(format_instance(&inst), text);
    }

    #[test]
    fn comments_and_fractions() {
        let text = "# header comment\nPOTTS 1 0 3  # one vertex\n0.5 1/3 -2\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.node_cost(0, 1), &crate::num::ratio(1, 3));
        assert_eq!(format_instance(&inst), "POTTS 1 0 3\n0.5 1/3 -2\n");
    }

    #[test]
    fn p4_round_trip_is_exact() {
        let p4 = fixtures::p4();
        assert_eq!(parse_instance(&format_instance(&p4)).unwrap(), p4);
    }

    #[test]
    fn errors_name_lines() {
        let cases = [
            ("POTTS 2 1 2\n0 2\n2\n0 1 1\n", 3),
            ("POTTS 2 1 2\n0 2\n2 0\n0 1 x\n", 4),
            ("POTS 2 1 2\n", 1),
            ("POTTS 2 1 2\n0 2\n2 0\n", 4),
            ("POTTS 1 0 2\n0 0\n0 0\n", 3),
        ];
        for (text, want) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
        assert!(parse_instance("POTTS 2 1 2\n0 2\n2 0\n0 0 1\n").is_err());
    }

    #[test]
    fn labeling_round_trip_and_errors() {
        let x = Labeling::new(vec![0, 4, 2, 3, 1]);
        let text = format_labeling(&x, 5);
        assert_eq!(parse_labeling(&text).unwrap(), (x, 5));
        assert!(parse_labeling("LABELING 2 2\n0\n2\n").is_err());
        assert!(parse_labeling("LABELING 3 2\n0\n1\n").is_err());
    }

    #[test]
    fn labeling_pgm_gray_levels() {
        let x = Labeling::new(vec![0, 1, 2, 3, 4]);
        let img = labeling_to_pgm(&x, 5, 5, 1).unwrap();
        assert_eq!(img.data, vec![0, 63, 127, 191, 255]);
    }
}
