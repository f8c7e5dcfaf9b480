//! 16×16 matrices over GF(2) and the plain-text fixture format used to
//! store them.
//!
//! A [`BinMatrix16`] is kept in one canonical orientation: `rows[r]` holds
//! output bit `r`, and bit `c` of that word is the coefficient of input bit
//! `c`. Printed bit matrices carry no bit-order convention, so they are
//! parsed into a [`PrintedMatrix`] first and mapped to the canonical form
//! through an explicit [`Orientation`].

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixtureError {
    #[error("expected 16 rows, found {0}")]
    RowCount(usize),
    #[error("row {row}: expected 16 binary digits, found {len}")]
    RowLength { row: usize, len: usize },
    #[error("row {row}, column {col}: invalid character {ch:?}")]
    BadChar { row: usize, col: usize, ch: char },
}

/// A 16×16 binary matrix in canonical orientation.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinMatrix16 {
    rows: [u16; 16],
}

impl BinMatrix16 {
    pub const fn from_rows(rows: [u16; 16]) -> Self {
        Self { rows }
    }

    pub const fn identity() -> Self {
        let mut rows = [0u16; 16];
        let mut i = 0;
        while i < 16 {
            rows[i] = 1 << i;
            i += 1;
        }
        Self { rows }
    }

    /// Builds the matrix whose column `c` is `cols[c]`.
    pub fn from_columns(cols: [u16; 16]) -> Self {
        let mut rows = [0u16; 16];
        for (c, &col) in cols.iter().enumerate() {
            for (r, row) in rows.iter_mut().enumerate() {
                *row |= ((col >> r) & 1) << c;
            }
        }
        Self { rows }
    }

    pub fn rows(&self) -> &[u16; 16] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        (self.rows[row] >> col) & 1 == 1
    }

    pub fn column(&self, col: usize) -> u16 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (r, &row)| acc | (((row >> col) & 1) << r))
    }

    /// GF(2) matrix-vector product: output bit `r` is the parity of
    /// `row[r] & x`.
    #[inline]
    pub fn mat_vec(&self, x: u16) -> u16 {
        let mut out = 0u16;
        for (r, &row) in self.rows.iter().enumerate() {
            out |= (((row & x).count_ones() & 1) as u16) << r;
        }
        out
    }

    /// Matrix product `self · rhs`, i.e. apply `rhs` first.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self::from_columns(std::array::from_fn(|c| self.mat_vec(rhs.column(c))))
    }

    pub fn transpose(&self) -> Self {
        Self::from_columns(self.rows)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Number of ones in the matrix.
    pub fn weight(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    pub fn rank(&self) -> u32 {
        let mut rows = self.rows;
        let mut rank = 0;
        for col in 0..16 {
            let bit = 1u16 << col;
            let Some(pivot) = (rank as usize..16).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank as usize, pivot);
            let p = rows[rank as usize];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank as usize && *row & bit != 0 {
                    *row ^= p;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let mut a = self.rows;
        let mut inv = Self::identity().rows;
        for col in 0..16 {
            let bit = 1u16 << col;
            let pivot = (col..16).find(|&r| a[r] & bit != 0)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..16 {
                if r != col && a[r] & bit != 0 {
                    a[r] ^= a[col];
                    inv[r] ^= inv[col];
                }
            }
        }
        Some(Self { rows: inv })
    }

    /// Entries where `self` and `other` differ, as `(row, col)` pairs in the
    /// canonical orientation.
    pub fn diff(&self, other: &Self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..16 {
            let d = self.rows[r] ^ other.rows[r];
            for c in 0..16 {
                if (d >> c) & 1 == 1 {
                    out.push((r, c));
                }
            }
        }
        out
    }
}

impl Default for BinMatrix16 {
    fn default() -> Self {
        Self::identity()
    }
}

impl fmt::Debug for BinMatrix16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix16 [")?;
        for row in &self.rows {
            // bit 0 leftmost, matching `Orientation::LSB_FIRST`
            let s: String = (0..16)
                .map(|c| if (row >> c) & 1 == 1 { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

/// How a printed grid maps onto bit indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Orientation {
    /// Top printed row is output bit 15 (otherwise bit 0).
    pub top_row_msb: bool,
    /// Leftmost printed column is input bit 15 (otherwise bit 0).
    pub left_col_msb: bool,
}

impl Orientation {
    pub const LSB_FIRST: Self = Self {
        top_row_msb: false,
        left_col_msb: false,
    };
    pub const MSB_FIRST: Self = Self {
        top_row_msb: true,
        left_col_msb: true,
    };

    /// The four row/column reading orders, MSB_FIRST first.
    pub const ALL: [Self; 4] = [
        Self::MSB_FIRST,
        Self {
            top_row_msb: true,
            left_col_msb: false,
        },
        Self {
            top_row_msb: false,
            left_col_msb: true,
        },
        Self::LSB_FIRST,
    ];
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "top row = bit {}, left column = bit {}",
            if self.top_row_msb { 15 } else { 0 },
            if self.left_col_msb { 15 } else { 0 }
        )
    }
}

/// A 16×16 grid exactly as printed: `cells[i]` bit `j` is the entry in
/// printed row `i` (from the top), printed column `j` (from the left).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrintedMatrix {
    cells: [u16; 16],
}

impl PrintedMatrix {
    /// Parses 16 lines of 16 `'0'`/`'1'` characters. Blank lines and
    /// surrounding whitespace are ignored.
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        if lines.len() != 16 {
            return Err(FixtureError::RowCount(lines.len()));
        }
        let mut cells = [0u16; 16];
        for (row, line) in lines.iter().enumerate() {
            let len = line.chars().count();
            if len != 16 {
                return Err(FixtureError::RowLength { row, len });
            }
            for (col, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => cells[row] |= 1 << col,
                    _ => return Err(FixtureError::BadChar { row, col, ch }),
                }
            }
        }
        Ok(Self { cells })
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        (self.cells[row] >> col) & 1 == 1
    }

    pub fn to_matrix(&self, o: Orientation) -> BinMatrix16 {
        let mut rows = [0u16; 16];
        for i in 0..16 {
            let r = if o.top_row_msb { 15 - i } else { i };
            for j in 0..16 {
                let c = if o.left_col_msb { 15 - j } else { j };
                if self.get(i, j) {
                    rows[r] |= 1 << c;
                }
            }
        }
        BinMatrix16::from_rows(rows)
    }

    pub fn from_matrix(m: &BinMatrix16, o: Orientation) -> Self {
        let mut cells = [0u16; 16];
        for (i, cell) in cells.iter_mut().enumerate() {
            let r = if o.top_row_msb { 15 - i } else { i };
            for j in 0..16 {
                let c = if o.left_col_msb { 15 - j } else { j };
                if m.get(r, c) {
                    *cell |= 1 << j;
                }
            }
        }
        Self { cells }
    }

    /// Fixture text: 16 lines of 16 digits, each line newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(17 * 16);
        for row in &self.cells {
            for j in 0..16 {
                s.push(if (row >> j) & 1 == 1 { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}
