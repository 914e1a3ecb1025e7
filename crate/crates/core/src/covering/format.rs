//! Plain-text covering tables: a header line `n k t b`, then `b` lines of `k`
//! 1-based points. Blank lines and lines starting with `#` are ignored.

use super::CoveringDesign;
use crate::error::{Error, Result};

/// Parses the text format, reporting errors with 1-based line numbers.
///
/// The result is structurally valid; whether it actually covers is a
/// separate question for [`super::verify_covering`].
pub fn parse_design_file(text: &str) -> Result<CoveringDesign> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(text.lines().count().max(1), "missing header line"))?;
    let nums = parse_ints(hline, header)?;
    let [n, k, t, b] = nums[..] else {
        return Err(Error::parse(
            hline,
            format!("header needs 4 integers \"n k t b\", found {}", nums.len()),
        ));
    };
    if !(n >= k && k >= t && t > 0) || n > crate::metric::MAX_LEN {
        return Err(Error::parse(
            hline,
            format!(
                "header needs n ≥ k ≥ t > 0 and n ≤ {}, got {n} {k} {t}",
                crate::metric::MAX_LEN
            ),
        ));
    }

    let mut blocks = Vec::with_capacity(b);
    for (lineno, line) in lines.by_ref() {
        if blocks.len() == b {
            return Err(Error::parse(
                lineno,
                format!("more than the declared {b} blocks"),
            ));
        }
        let pts = parse_ints(lineno, line)?;
        if pts.len() != k {
            return Err(Error::parse(
                lineno,
                format!("block has {} points, expected {k}", pts.len()),
            ));
        }
        let mut mask = 0u128;
        for p in pts {
            if p == 0 || p > n {
                return Err(Error::parse(lineno, format!("point {p} outside 1..={n}")));
            }
            if mask >> (p - 1) & 1 == 1 {
                return Err(Error::parse(lineno, format!("point {p} repeated")));
            }
            mask |= 1 << (p - 1);
        }
        blocks.push(mask);
    }
    if blocks.len() < b {
        return Err(Error::parse(
            text.lines().count() + 1,
            format!("expected {b} blocks, found {}", blocks.len()),
        ));
    }
    CoveringDesign::new(n, k, t, blocks)
}

/// Accepts either the text format or the JSON form `{"n","k","t","blocks"}`.
pub fn parse_design(text: &str) -> Result<CoveringDesign> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    } else {
        parse_design_file(text)
    }
}

/// Writes the text format with points sorted inside each block and block order kept.
pub fn serialize_design(design: &CoveringDesign) -> String {
    let mut out = format!(
        "{} {} {} {}\n",
        design.n(),
        design.k(),
        design.t(),
        design.len()
    );
    for block in design.block_lists() {
        let line: Vec<String> = block.iter().map(|p| p.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn parse_ints(lineno: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("not a nonnegative integer: {tok:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::known;

    const TEXT: &str =
        "# one block per line\n9 5 2 5\n1 2 3 4 5\n1 2 3 4 6\n1 2 7 8 9\n3 4 7 8 9\n5 6 7 8 9\n";

    #[test]
    fn parse_known_table() {
        let d = parse_design_file(TEXT).unwrap();
        assert_eq!(d, known::design_9_5_2());
        assert_eq!(
            serialize_design(&d),
            TEXT.lines().skip(1).collect::<Vec<_>>().join("\n") + "\n"
        );
    }

    #[test]
    fn round_trip_normalizes() {
        let messy = "  3 2 1 2 \n\n 2   1\n# note\n3 2\n";
        let d = parse_design_file(messy).unwrap();
        let norm = serialize_design(&d);
        assert_eq!(norm, "3 2 1 2\n1 2\n2 3\n");
        assert_eq!(serialize_design(&parse_design_file(&norm).unwrap()), norm);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_design_file("3 2 1 2\n0 1\n2 3\n").unwrap_err();
        assert_eq!(err, Error::parse(2, "point 0 outside 1..=3"));
        assert!(matches!(
            parse_design_file("3 2 1 2\n1 2 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_design_file("3 2 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_design_file("3 2 1 2\n1 2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_design_file("3 2 1 1\n1 2\n1 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_design_file("3 x 1 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_design_file("# only a comment\n").is_err());
    }

    #[test]
    fn json_form_accepted() {
        let json = serde_json::to_string(&known::fano_plane()).unwrap();
        assert_eq!(parse_design(&json).unwrap(), known::fano_plane());
        assert_eq!(parse_design(TEXT).unwrap(), known::design_9_5_2());
    }
}
