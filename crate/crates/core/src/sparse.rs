//! Sparse integer matrices and their line-oriented text format.
//!
//! ```text
//! <nrows> <ncols> M
//! <row> <col> <value>      (1-based, one nonzero per line)
//! 0 0 0
//! ```

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SparseError {
    #[error("entry ({row}, {col}) outside {nrows}x{ncols}")]
    OutOfRange { row: usize, col: usize, nrows: usize, ncols: usize },
    #[error("duplicate entry ({0}, {1})")]
    Duplicate(usize, usize),
    #[error("zero value stored at ({0}, {1})")]
    ZeroEntry(usize, usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Exact integer that stays inline while it fits in `i64`; larger values are
/// shared, since binomial coefficients repeat across many columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IntValue {
    Small(i64),
    Big(Arc<BigInt>),
}

impl IntValue {
    pub fn from_bigint(v: BigInt) -> Self {
        match v.to_i64() {
            Some(s) => IntValue::Small(s),
            None => IntValue::Big(Arc::new(v)),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            IntValue::Small(s) => BigInt::from(*s),
            IntValue::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            IntValue::Small(s) => *s == 0,
            IntValue::Big(b) => b.is_zero(),
        }
    }

    /// Residue in `[0, p)`.
    pub fn mod_p(&self, p: u64) -> u64 {
        match self {
            IntValue::Small(s) => s.rem_euclid(p as i64) as u64,
            IntValue::Big(b) => {
                let r = (&**b % BigInt::from(p)).to_i64().expect("residue fits");
                r.rem_euclid(p as i64) as u64
            }
        }
    }

    pub fn scaled(&self, k: i64) -> IntValue {
        match self {
            IntValue::Small(s) => match s.checked_mul(k) {
                Some(v) => IntValue::Small(v),
                None => IntValue::from_bigint(BigInt::from(*s) * k),
            },
            IntValue::Big(b) => IntValue::from_bigint(&**b * k),
        }
    }

    pub fn abs_bits(&self) -> u64 {
        match self {
            IntValue::Small(s) => 64 - s.unsigned_abs().leading_zeros() as u64,
            IntValue::Big(b) => b.bits(),
        }
    }
}

impl From<i64> for IntValue {
    fn from(v: i64) -> Self {
        IntValue::Small(v)
    }
}

impl fmt::Display for IntValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntValue::Small(s) => write!(f, "{s}"),
            IntValue::Big(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for IntValue {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(IntValue::Small(v));
        }
        BigInt::from_str(s).map(IntValue::from_bigint).map_err(|_| format!("invalid integer `{s}`"))
    }
}

/// Integer matrix stored row-major by `(row, col)` with nonzero values only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    nrows: usize,
    ncols: usize,
    positions: Vec<(u32, u32)>,
    values: Vec<IntValue>,
}

impl SparseIntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseIntMatrix { nrows, ncols, positions: Vec::new(), values: Vec::new() }
    }

    /// Builds from `(row, col, value)` in any order; zero values are dropped,
    /// duplicates rejected.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, IntValue)>,
    ) -> Result<Self, SparseError> {
        let mut items: Vec<((u32, u32), IntValue)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(SparseError::OutOfRange { row: r, col: c, nrows, ncols });
            }
            if !v.is_zero() {
                items.push(((r as u32, c as u32), v));
            }
        }
        items.sort_unstable_by_key(|(pos, _)| *pos);
        for w in items.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(SparseError::Duplicate(w[0].0 .0 as usize, w[0].0 .1 as usize));
            }
        }
        let (positions, values) = items.into_iter().unzip();
        Ok(SparseIntMatrix { nrows, ncols, positions, values })
    }

    /// Builds from columns given in order, each a list of `(row, value)` with
    /// distinct rows. Entries are placed directly in row-major order and each
    /// column is released once copied.
    pub fn from_columns(nrows: usize, columns: Vec<Vec<(usize, IntValue)>>) -> Result<Self, SparseError> {
        let ncols = columns.len();
        let mut offsets = vec![0usize; nrows + 1];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                if *r >= nrows {
                    return Err(SparseError::OutOfRange { row: *r, col: c, nrows, ncols });
                }
                if v.is_zero() {
                    return Err(SparseError::ZeroEntry(*r, c));
                }
                offsets[r + 1] += 1;
            }
        }
        for i in 0..nrows {
            offsets[i + 1] += offsets[i];
        }
        let nnz = offsets[nrows];
        let mut positions = vec![(0u32, 0u32); nnz];
        let mut values = vec![IntValue::Small(0); nnz];
        let mut next = offsets;
        for (c, col) in columns.into_iter().enumerate() {
            for (r, v) in col {
                let k = next[r];
                if k > 0 && positions[k - 1] == (r as u32, c as u32) {
                    return Err(SparseError::Duplicate(r, c));
                }
                positions[k] = (r as u32, c as u32);
                values[k] = v;
                next[r] += 1;
            }
        }
        Ok(SparseIntMatrix { nrows, ncols, positions, values })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let triplets = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, IntValue::Small(v))));
        SparseIntMatrix::from_triplets(nrows, ncols, triplets).expect("dense input is well formed")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn density(&self) -> f64 {
        if self.nrows == 0 || self.ncols == 0 {
            0.0
        } else {
            self.nnz() as f64 / (self.nrows as f64 * self.ncols as f64)
        }
    }

    /// Entries in canonical row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &IntValue)> + '_ {
        self.positions.iter().zip(&self.values).map(|(&(r, c), v)| (r as usize, c as usize, v))
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&IntValue> {
        self.positions.binary_search(&(row as u32, col as u32)).ok().map(|i| &self.values[i])
    }

    pub fn max_abs_bits(&self) -> u64 {
        self.values.iter().map(IntValue::abs_bits).max().unwrap_or(0)
    }

    /// Rows reduced mod `p` as `(col, residue)` lists with zero residues removed.
    pub fn rows_mod(&self, p: u64) -> Vec<Vec<(u32, u32)>> {
        assert!(p < (1 << 32), "modulus must fit in 32 bits");
        let mut rows = vec![Vec::new(); self.nrows];
        for (&(r, c), v) in self.positions.iter().zip(&self.values) {
            let x = v.mod_p(p);
            if x != 0 {
                rows[r as usize].push((c, x as u32));
            }
        }
        rows
    }

    pub fn to_dense_bigint(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.ncols]; self.nrows];
        for (r, c, v) in self.iter() {
            out[r][c] = v.to_bigint();
        }
        out
    }

    /// New matrix with row `i` moved to `row_perm[i]` and column `j` to `col_perm[j]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let triplets = self.iter().map(|(r, c, v)| (row_perm[r], col_perm[c], v.clone()));
        SparseIntMatrix::from_triplets(self.nrows, self.ncols, triplets).expect("permutation is a bijection")
    }

    /// Keeps only columns with at least one entry.
    pub fn without_zero_columns(&self) -> Self {
        let mut used = vec![false; self.ncols];
        for &(_, c) in &self.positions {
            used[c as usize] = true;
        }
        let mut map = vec![usize::MAX; self.ncols];
        let mut next = 0;
        for (c, &u) in used.iter().enumerate() {
            if u {
                map[c] = next;
                next += 1;
            }
        }
        let triplets = self.iter().map(|(r, c, v)| (r, map[c], v.clone()));
        SparseIntMatrix::from_triplets(self.nrows, next, triplets).expect("column compaction is valid")
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {} M", self.nrows, self.ncols)?;
        for (r, c, v) in self.iter() {
            writeln!(out, "{} {} {}", r + 1, c + 1, v)?;
        }
        writeln!(out, "0 0 0")?;
        out.flush()
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self, SparseError> {
        let mut lines = input.lines().enumerate();
        let parse_err = |line: usize, message: &str| SparseError::Parse { line, message: message.to_string() };
        let (nrows, ncols) = loop {
            let Some((i, line)) = lines.next() else {
                return Err(parse_err(1, "missing header"));
            };
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 || toks[2] != "M" {
                return Err(parse_err(i + 1, "header must be `<nrows> <ncols> M`"));
            }
            let nrows = toks[0].parse().map_err(|_| parse_err(i + 1, "invalid row count"))?;
            let ncols = toks[1].parse().map_err(|_| parse_err(i + 1, "invalid column count"))?;
            break (nrows, ncols);
        };
        let mut triplets = Vec::new();
        let mut terminated = false;
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if terminated {
                return Err(parse_err(i + 1, "content after terminator"));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(parse_err(i + 1, "expected `<row> <col> <value>`"));
            }
            let r: usize = toks[0].parse().map_err(|_| parse_err(i + 1, "invalid row index"))?;
            let c: usize = toks[1].parse().map_err(|_| parse_err(i + 1, "invalid column index"))?;
            let v: IntValue = toks[2].parse().map_err(|e: String| parse_err(i + 1, &e))?;
            if r == 0 && c == 0 && v.is_zero() {
                terminated = true;
                continue;
            }
            if r == 0 || c == 0 {
                return Err(parse_err(i + 1, "indices are 1-based"));
            }
            if v.is_zero() {
                return Err(SparseError::ZeroEntry(r, c));
            }
            triplets.push((r - 1, c - 1, v));
        }
        if !terminated {
            return Err(parse_err(0, "missing `0 0 0` terminator"));
        }
        SparseIntMatrix::from_triplets(nrows, ncols, triplets)
    }
}
