//! LDPC codes as Tanner graphs.
//!
//! A [`TannerGraph`] is built once and never mutated. Edges are numbered in
//! check-major order: all edges of check 0 (by ascending variable index),
//! then check 1, and so on. Both adjacency views are stored as flat
//! offset/index arrays.
//!
//! Two text formats are supported: the conventional alist sparse-matrix
//! format and a small quasi-cyclic (QC) base-matrix format
//! (`rows cols z` header followed by `rows` lines of shifts, `-1` for a
//! zero block).

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("block ({row}, {col}): shift {value} outside [-1, {z})")]
    InvalidShift {
        row: usize,
        col: usize,
        value: i64,
        z: usize,
    },
    #[error("invalid graph: {0}")]
    Structure(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

/// Immutable bipartite graph of `n_vars` variable nodes and `n_checks`
/// check nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n_vars: usize,
    n_checks: usize,
    edge_check: Vec<usize>,
    edge_var: Vec<usize>,
    check_offsets: Vec<usize>,
    var_offsets: Vec<usize>,
    var_edges: Vec<usize>,
}

impl TannerGraph {
    /// Builds a graph from `(check, var)` pairs in any order.
    ///
    /// Rejects duplicate pairs, out-of-range indices and isolated nodes.
    /// Degree-1 checks are legal here; decoders reject them (see
    /// [`TannerGraph::require_check_degree_2`]).
    pub fn from_edges(
        n_checks: usize,
        n_vars: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CodeError> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        if n_vars == 0 || n_checks == 0 {
            return Err(CodeError::Structure("graph has no nodes".into()));
        }
        if pairs.is_empty() {
            return Err(CodeError::Structure("graph has no edges".into()));
        }
        for &(c, v) in &pairs {
            if c >= n_checks || v >= n_vars {
                return Err(CodeError::Structure(format!(
                    "edge ({c}, {v}) out of range for {n_checks} checks x {n_vars} variables"
                )));
            }
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(CodeError::Structure(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }

        let n_edges = pairs.len();
        let mut check_offsets = vec![0; n_checks + 1];
        let mut var_degree = vec![0usize; n_vars];
        for &(c, v) in &pairs {
            check_offsets[c + 1] += 1;
            var_degree[v] += 1;
        }
        for c in 0..n_checks {
            let deg = check_offsets[c + 1];
            if deg == 0 {
                return Err(CodeError::Structure(format!("check {c} is isolated")));
            }
            check_offsets[c + 1] += check_offsets[c];
        }
        if let Some(v) = var_degree.iter().position(|&d| d == 0) {
            return Err(CodeError::Structure(format!("variable {v} is isolated")));
        }

        let mut var_offsets = vec![0; n_vars + 1];
        for v in 0..n_vars {
            var_offsets[v + 1] = var_offsets[v] + var_degree[v];
        }
        let mut fill = var_offsets.clone();
        let mut var_edges = vec![0; n_edges];
        for (e, &(_, v)) in pairs.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }

        Ok(TannerGraph {
            n_vars,
            n_checks,
            edge_check: pairs.iter().map(|p| p.0).collect(),
            edge_var: pairs.iter().map(|p| p.1).collect(),
            check_offsets,
            var_offsets,
            var_edges,
        })
    }

    /// Builds a graph from a dense 0/1 parity-check matrix given row by row.
    pub fn from_dense(rows: &[&[u8]]) -> Result<Self, CodeError> {
        let n_vars = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n_vars) {
            return Err(CodeError::Structure("ragged dense matrix".into()));
        }
        let pairs = rows.iter().enumerate().flat_map(|(c, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &b)| b != 0)
                .map(move |(v, _)| (c, v))
        });
        Self::from_edges(rows.len(), n_vars, pairs)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_checks(&self) -> usize {
        self.n_checks
    }

    pub fn n_edges(&self) -> usize {
        self.edge_var.len()
    }

    #[inline]
    pub fn edge_check(&self, e: usize) -> usize {
        self.edge_check[e]
    }

    #[inline]
    pub fn edge_var(&self, e: usize) -> usize {
        self.edge_var[e]
    }

    /// Edge indices of check `c`; contiguous because of check-major numbering.
    #[inline]
    pub fn check_edges(&self, c: usize) -> std::ops::Range<usize> {
        self.check_offsets[c]..self.check_offsets[c + 1]
    }

    /// Edge indices incident to variable `v`, ascending.
    #[inline]
    pub fn var_edges(&self, v: usize) -> &[usize] {
        &self.var_edges[self.var_offsets[v]..self.var_offsets[v + 1]]
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_offsets[c + 1] - self.check_offsets[c]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_offsets[v + 1] - self.var_offsets[v]
    }

    /// Every check must have at least two neighbours for the check-node
    /// kernels to be defined.
    pub fn require_check_degree_2(&self) -> Result<(), CodeError> {
        match (0..self.n_checks).find(|&c| self.check_degree(c) < 2) {
            Some(c) => Err(CodeError::Structure(format!(
                "check {c} has degree {}, decoding needs >= 2",
                self.check_degree(c)
            ))),
            None => Ok(()),
        }
    }

    /// `(check, var)` pairs in edge-index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edge_check
            .iter()
            .copied()
            .zip(self.edge_var.iter().copied())
    }

    /// Number of connected components. Disconnected graphs are legal; the
    /// CLI warns about them.
    pub fn component_count(&self) -> usize {
        // variables are nodes 0..n_vars, checks n_vars..n_vars+n_checks
        let mut parent: Vec<usize> = (0..self.n_vars + self.n_checks).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (c, v) in self.edges() {
            let a = find(&mut parent, v);
            let b = find(&mut parent, self.n_vars + c);
            if a != b {
                parent[a] = b;
            }
        }
        (0..parent.len())
            .filter(|&x| find(&mut parent, x) == x)
            .count()
    }
}

/// Quasi-cyclic base matrix. Entry `-1` is the all-zero `z x z` block; a
/// shift `k` in `[0, z)` is the identity cyclically right-shifted by `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcBaseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub z: usize,
    pub entries: Vec<i64>,
}

impl QcBaseMatrix {
    pub fn new(rows: usize, cols: usize, z: usize, entries: Vec<i64>) -> Result<Self, CodeError> {
        if rows == 0 || cols == 0 || z == 0 {
            return Err(CodeError::Structure(
                "QC base matrix needs rows, cols, z >= 1".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(CodeError::Structure(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let base = QcBaseMatrix {
            rows,
            cols,
            z,
            entries,
        };
        base.validate()?;
        Ok(base)
    }

    fn validate(&self) -> Result<(), CodeError> {
        for r in 0..self.rows {
            for c in 0..self.cols {
                let value = self.entry(r, c);
                if value < -1 || value >= self.z as i64 {
                    return Err(CodeError::InvalidShift {
                        row: r,
                        col: c,
                        value,
                        z: self.z,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.cols + col]
    }

    /// Number of non-zero blocks.
    pub fn nonzero_blocks(&self) -> usize {
        self.entries.iter().filter(|&&s| s >= 0).count()
    }

    /// Parses the QC text format.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(CodeError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let dims: Vec<usize> = parse_numbers(hline, header)?;
        let [rows, cols, z] = dims[..] else {
            return Err(CodeError::Parse {
                line: hline,
                msg: format!("header must be `rows cols z`, found {} fields", dims.len()),
            });
        };
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (line, body) = lines.next().ok_or(CodeError::Parse {
                line: hline + r + 1,
                msg: format!("missing block row {r}"),
            })?;
            let row: Vec<i64> = parse_numbers(line, body)?;
            if row.len() != cols {
                return Err(CodeError::Parse {
                    line,
                    msg: format!("expected {cols} entries, found {}", row.len()),
                });
            }
            entries.extend(row);
        }
        if let Some((line, _)) = lines.next() {
            return Err(CodeError::Parse {
                line,
                msg: "trailing data after last block row".into(),
            });
        }
        Self::new(rows, cols, z, entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.z);
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.entry(r, c).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Lifts a QC base matrix into its full Tanner graph.
///
/// Block `(r, c)` with shift `k` contributes edges
/// `(r*z + i, c*z + (i + k) mod z)` for `i` in `0..z`.
pub fn expand_qc(base: &QcBaseMatrix) -> Result<TannerGraph, CodeError> {
    base.validate()?;
    let z = base.z;
    let mut pairs = Vec::with_capacity(base.nonzero_blocks() * z);
    for r in 0..base.rows {
        for c in 0..base.cols {
            let shift = base.entry(r, c);
            if shift < 0 {
                continue;
            }
            let shift = shift as usize;
            pairs.extend((0..z).map(|i| (r * z + i, c * z + (i + shift) % z)));
        }
    }
    TannerGraph::from_edges(base.rows * z, base.cols * z, pairs)
}

fn parse_numbers<T: FromStr>(line: usize, text: &str) -> Result<Vec<T>, CodeError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse().map_err(|_| CodeError::Parse {
                line,
                msg: format!("invalid integer `{tok}`"),
            })
        })
        .collect()
}

/// Parses the alist format.
///
/// Adjacency lines may be zero-padded to the maximum degree or carry exactly
/// the node's degree; indices are 1-based. The column lists and row lists
/// must describe the same edge set.
pub fn load_alist(text: &str) -> Result<TannerGraph, CodeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next_line = |what: &str| -> Result<(usize, Vec<usize>), CodeError> {
        let (line, body) = lines.next().ok_or_else(|| CodeError::Parse {
            line: 0,
            msg: format!("unexpected end of input, expected {what}"),
        })?;
        Ok((line, parse_numbers(line, body)?))
    };
    let expect_len = |line: usize, vals: &[usize], n: usize, what: &str| {
        if vals.len() == n {
            Ok(())
        } else {
            Err(CodeError::Parse {
                line,
                msg: format!("expected {n} values for {what}, found {}", vals.len()),
            })
        }
    };

    let (line, dims) = next_line("`N M` header")?;
    expect_len(line, &dims, 2, "`N M` header")?;
    let (n_vars, n_checks) = (dims[0], dims[1]);
    let (line, maxd) = next_line("max degrees")?;
    expect_len(line, &maxd, 2, "max degrees")?;
    let (max_col, max_row) = (maxd[0], maxd[1]);
    let (line, col_deg) = next_line("column degrees")?;
    expect_len(line, &col_deg, n_vars, "column degrees")?;
    if let Some(d) = col_deg.iter().find(|&&d| d > max_col) {
        return Err(CodeError::Parse {
            line,
            msg: format!("column degree {d} exceeds declared maximum {max_col}"),
        });
    }
    let (line, row_deg) = next_line("row degrees")?;
    expect_len(line, &row_deg, n_checks, "row degrees")?;
    if let Some(d) = row_deg.iter().find(|&&d| d > max_row) {
        return Err(CodeError::Parse {
            line,
            msg: format!("row degree {d} exceeds declared maximum {max_row}"),
        });
    }

    let mut read_lists = |count: usize,
                          degrees: &[usize],
                          bound: usize,
                          what: &str|
     -> Result<Vec<(usize, Vec<usize>)>, CodeError> {
        let mut out = Vec::with_capacity(count);
        for (node, &deg) in degrees.iter().enumerate().take(count) {
            let (line, vals) = next_line(what)?;
            let nonzero: Vec<usize> = vals.iter().copied().take_while(|&x| x != 0).collect();
            if vals[nonzero.len()..].iter().any(|&x| x != 0) {
                return Err(CodeError::Parse {
                    line,
                    msg: "non-zero entry after zero padding".into(),
                });
            }
            if nonzero.len() != deg {
                return Err(CodeError::Parse {
                    line,
                    msg: format!(
                        "{what} {node} lists {} neighbours but its degree is {deg}",
                        nonzero.len()
                    ),
                });
            }
            if let Some(&x) = nonzero.iter().find(|&&x| x > bound) {
                return Err(CodeError::Parse {
                    line,
                    msg: format!("index {x} exceeds {bound}"),
                });
            }
            out.push((line, nonzero));
        }
        Ok(out)
    };
    let cols = read_lists(n_vars, &col_deg, n_checks, "column")?;
    let rows = read_lists(n_checks, &row_deg, n_vars, "row")?;
    if let Some((line, _)) = lines.next() {
        return Err(CodeError::Parse {
            line,
            msg: "trailing data after row lists".into(),
        });
    }

    let mut from_cols: Vec<(usize, usize)> = cols
        .iter()
        .enumerate()
        .flat_map(|(v, (_, checks))| checks.iter().map(move |&c| (c - 1, v)))
        .collect();
    let mut from_rows: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(c, (_, vars))| vars.iter().map(move |&v| (c, v - 1)))
        .collect();
    from_cols.sort_unstable();
    from_rows.sort_unstable();
    if from_cols != from_rows {
        let line = rows.first().map_or(0, |r| r.0);
        return Err(CodeError::Parse {
            line,
            msg: "row lists disagree with column lists".into(),
        });
    }
    TannerGraph::from_edges(n_checks, n_vars, from_rows)
}

/// Serializes a graph in canonical alist form: adjacency lists sorted
/// ascending and zero-padded to the maximum degree.
pub fn write_alist(graph: &TannerGraph) -> String {
    let col_deg: Vec<usize> = (0..graph.n_vars()).map(|v| graph.var_degree(v)).collect();
    let row_deg: Vec<usize> = (0..graph.n_checks())
        .map(|c| graph.check_degree(c))
        .collect();
    let max_col = col_deg.iter().copied().max().unwrap_or(0);
    let max_row = row_deg.iter().copied().max().unwrap_or(0);

    let join = |vals: &mut dyn Iterator<Item = usize>| {
        vals.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", graph.n_vars(), graph.n_checks());
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(&mut col_deg.iter().copied()));
    let _ = writeln!(out, "{}", join(&mut row_deg.iter().copied()));
    for v in 0..graph.n_vars() {
        let checks = graph.var_edges(v).iter().map(|&e| graph.edge_check(e) + 1);
        let pad = std::iter::repeat_n(0, max_col - graph.var_degree(v));
        let _ = writeln!(out, "{}", join(&mut checks.chain(pad)));
    }
    for c in 0..graph.n_checks() {
        let vars = graph.check_edges(c).map(|e| graph.edge_var(e) + 1);
        let pad = std::iter::repeat_n(0, max_row - graph.check_degree(c));
        let _ = writeln!(out, "{}", join(&mut vars.chain(pad)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFormat {
    Alist,
    Qc,
}

impl FromStr for CodeFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alist" => Ok(CodeFormat::Alist),
            "qc" => Ok(CodeFormat::Qc),
            other => Err(format!("unknown code format `{other}` (expected alist|qc)")),
        }
    }
}

/// Loads a code file in the given format.
pub fn load_code(path: &Path, format: CodeFormat) -> Result<TannerGraph, CodeError> {
    let text = std::fs::read_to_string(path).map_err(|e| CodeError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    match format {
        CodeFormat::Alist => load_alist(&text),
        CodeFormat::Qc => expand_qc(&QcBaseMatrix::parse(&text)?),
    }
}
