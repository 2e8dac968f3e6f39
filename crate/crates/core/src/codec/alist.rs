//! Reader for the alist sparse parity-check format.
//!
//! Lines starting with `#` are comments. A comment of the form
//! `# punctured: <p>` declares that the first `p` columns are not transmitted.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A sparse binary parity-check matrix in column-adjacency form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheck {
    pub num_cols: usize,
    pub num_rows: usize,
    /// Row indices (0-based) of the ones in each column.
    pub cols: Vec<Vec<usize>>,
    /// Number of leading columns that are punctured.
    pub punctured: usize,
}

impl ParityCheck {
    /// Row-adjacency view.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        let mut rows = alloc::vec![Vec::new(); self.num_rows];
        for (c, col) in self.cols.iter().enumerate() {
            for &r in col {
                rows[r].push(c);
            }
        }
        rows
    }
}

fn perr(line: usize, msg: impl Into<alloc::string::String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_alist(text: &str) -> Result<ParityCheck> {
    let mut punctured = 0;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("punctured:") {
                punctured = v.trim().parse().map_err(|_| perr(i + 1, "bad punctured count"))?;
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| perr(i + 1, format!("not an integer: {t}"))))
            .collect::<Result<Vec<_>>>()?;
        lines.push((i + 1, nums));
    }
    let mut it = lines.into_iter();
    let mut next = |what: &str| it.next().ok_or_else(|| perr(0, format!("missing {what}")));

    let (l, dims) = next("dimensions")?;
    if dims.len() != 2 {
        return Err(perr(l, "expected 'num_cols num_rows'"));
    }
    let (num_cols, num_rows) = (dims[0], dims[1]);
    let _max_degrees = next("max degrees")?;
    let (l, col_deg) = next("column degrees")?;
    if col_deg.len() != num_cols {
        return Err(perr(l, "column degree count"));
    }
    let (l, row_deg) = next("row degrees")?;
    if row_deg.len() != num_rows {
        return Err(perr(l, "row degree count"));
    }
    let mut cols = Vec::with_capacity(num_cols);
    for c in 0..num_cols {
        let (l, entries) = next("column list")?;
        let col: Vec<usize> = entries.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
        if col.len() != col_deg[c] || col.iter().any(|&r| r >= num_rows) {
            return Err(perr(l, format!("column {c} inconsistent with its degree")));
        }
        cols.push(col);
    }
    let h = ParityCheck { num_cols, num_rows, cols, punctured };
    // Row lists are redundant; check them against the column lists.
    let rows = h.rows();
    for r in 0..num_rows {
        let (l, entries) = next("row list")?;
        let mut listed: Vec<usize> = entries.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
        listed.sort_unstable();
        let mut expect = rows[r].clone();
        expect.sort_unstable();
        if listed != expect || row_deg[r] != listed.len() {
            return Err(perr(l, format!("row {r} disagrees with column lists")));
        }
    }
    if punctured >= num_cols {
        return Err(perr(0, "punctured count exceeds length"));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HAMMING: &str = "# (7,4) Hamming\n7 3\n3 4\n1 1 2 1 2 2 3\n4 4 4\n\
        1 0 0\n2 0 0\n1 2 0\n3 0 0\n1 3 0\n2 3 0\n1 2 3\n\
        1 3 5 7\n2 3 6 7\n4 5 6 7\n";

    #[test]
    fn parses_small_code() {
        let h = parse_alist(HAMMING).unwrap();
        assert_eq!((h.num_cols, h.num_rows, h.punctured), (7, 3, 0));
        assert_eq!(h.cols[6], [0, 1, 2]);
        assert_eq!(h.rows()[0], [0, 2, 4, 6]);
    }

    #[test]
    fn rejects_inconsistent_rows() {
        let bad = HAMMING.replace("4 5 6 7", "4 5 6 1");
        assert!(parse_alist(&bad).is_err());
        assert!(parse_alist("7 3\n").is_err());
    }

    #[test]
    fn shipped_bg2_file() {
        let h = parse_alist(super::super::NR_BG2_Z10_ALIST).unwrap();
        assert_eq!((h.num_cols, h.num_rows, h.punctured), (520, 420, 20));
        assert_eq!(h.cols.iter().map(|c| c.len()).sum::<usize>(), 1970);
    }
}
