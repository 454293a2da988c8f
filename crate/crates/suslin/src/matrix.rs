//! Dense square matrices over [`RingElem`] with exact product and
//! determinant. Group elements are realized here concretely; nothing in this
//! module is numeric.

use std::fmt;

use crate::ring::{CoeffSpec, RingCtx, RingElem, RingError};

/// Dimensions are desk-scale by design; the determinant algorithms assume it.
pub const MAX_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension {0} outside supported range 2..={MAX_DIM}")]
    Dimension(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected {expected} entries for a {n}x{n} matrix, got {got}")]
    EntryCount {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// An `n x n` matrix whose entries all live in one ring.
#[derive(Clone, PartialEq, Eq)]
pub struct SqMatrix {
    ctx: RingCtx,
    n: usize,
    entries: Vec<RingElem>, // row-major
}

impl SqMatrix {
    pub fn identity(ctx: RingCtx, n: usize) -> Result<Self, MatrixError> {
        check_dim(n)?;
        let mut entries = vec![RingElem::zero(ctx); n * n];
        for i in 0..n {
            entries[i * n + i] = RingElem::one(ctx);
        }
        Ok(SqMatrix { ctx, n, entries })
    }

    /// Builds from row-major entries, checking the count and that every
    /// entry lives in `ctx`.
    pub fn from_entries(
        ctx: RingCtx,
        n: usize,
        entries: Vec<RingElem>,
    ) -> Result<Self, MatrixError> {
        check_dim(n)?;
        if entries.len() != n * n {
            return Err(MatrixError::EntryCount {
                n,
                expected: n * n,
                got: entries.len(),
            });
        }
        for e in &entries {
            if e.ctx() != ctx {
                return Err(RingError::Incompatible {
                    left: ctx,
                    right: e.ctx(),
                }
                .into());
            }
        }
        Ok(SqMatrix { ctx, n, entries })
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Zero-based entry access.
    pub fn entry(&self, row: usize, col: usize) -> &RingElem {
        assert!(row < self.n && col < self.n, "entry index out of range");
        &self.entries[row * self.n + col]
    }

    /// Row-major iteration.
    pub fn entries(&self) -> impl Iterator<Item = &RingElem> {
        self.entries.iter()
    }

    pub fn row(&self, i: usize) -> Vec<RingElem> {
        assert!(i < self.n);
        self.entries[i * self.n..(i + 1) * self.n].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<RingElem> {
        assert!(j < self.n);
        (0..self.n)
            .map(|i| self.entries[i * self.n + j].clone())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.entry(i, j);
                if i == j {
                    if !e.is_one() {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn try_mul(&self, other: &SqMatrix) -> Result<SqMatrix, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch(self.n, other.n));
        }
        if self.ctx != other.ctx {
            return Err(RingError::Incompatible {
                left: self.ctx,
                right: other.ctx,
            }
            .into());
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = RingElem::zero(self.ctx);
                for k in 0..n {
                    let a = self.entry(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.entry(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                entries.push(acc);
            }
        }
        Ok(SqMatrix {
            ctx: self.ctx,
            n,
            entries,
        })
    }

    pub fn transpose(&self) -> SqMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entry(j, i).clone());
            }
        }
        SqMatrix {
            ctx: self.ctx,
            n,
            entries,
        }
    }

    /// Applies `f` to every entry. The results must all land in one ring;
    /// the output context is taken from the first mapped entry.
    pub fn map_entries(
        &self,
        mut f: impl FnMut(&RingElem) -> Result<RingElem, RingError>,
    ) -> Result<SqMatrix, MatrixError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(f(e)?);
        }
        let ctx = entries[0].ctx();
        SqMatrix::from_entries(ctx, self.n, entries)
    }

    /// Column operation `col[dst] += a * col[src]`, i.e. right multiplication
    /// by the elementary matrix `I + a E_{src,dst}`.
    pub(crate) fn col_axpy(&mut self, dst: usize, src: usize, a: &RingElem) {
        assert!(dst < self.n && src < self.n && dst != src);
        if a.is_zero() {
            return;
        }
        for i in 0..self.n {
            let add = self.entry(i, src) * a;
            if add.is_zero() {
                continue;
            }
            let cur = &self.entries[i * self.n + dst];
            self.entries[i * self.n + dst] = cur + &add;
        }
    }

    /// Exact determinant. Cofactor expansion up to 4x4; above that,
    /// fraction-free Bareiss elimination over integer coefficients and a
    /// division-free minor expansion over modular coefficients (where the
    /// coefficient ring can have zero divisors and Bareiss quotients need
    /// not exist).
    pub fn det(&self) -> RingElem {
        if self.n <= 4 {
            return self.det_cofactor();
        }
        match self.ctx.coeff {
            CoeffSpec::Integers => self.det_bareiss(),
            CoeffSpec::Mod(_) => self.det_minor_expansion(),
        }
    }

    /// `det == 1`, the membership check for matrices claimed to lie in the
    /// elementary group.
    pub fn det_is_one(&self) -> bool {
        self.det().is_one()
    }

    fn det_cofactor(&self) -> RingElem {
        fn go(m: &SqMatrix, rows: &[usize], cols: &[usize]) -> RingElem {
            let ctx = m.ctx;
            if rows.len() == 1 {
                return m.entry(rows[0], cols[0]).clone();
            }
            let mut acc = RingElem::zero(ctx);
            let r = rows[0];
            let sub_rows = &rows[1..];
            for (pos, &c) in cols.iter().enumerate() {
                let e = m.entry(r, c);
                if e.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = go(m, sub_rows, &sub_cols);
                let term = e * &minor;
                acc = if pos % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
        let idx: Vec<usize> = (0..self.n).collect();
        go(self, &idx, &idx)
    }

    fn det_bareiss(&self) -> RingElem {
        let n = self.n;
        let ctx = self.ctx;
        let mut m: Vec<Vec<RingElem>> = (0..n).map(|i| self.row(i)).collect();
        let mut sign_negative = false;
        let mut prev = RingElem::one(ctx);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign_negative = !sign_negative;
                    }
                    None => return RingElem::zero(ctx),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num
                        .exact_div(&prev)
                        .expect("Bareiss division is exact over an integral domain");
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign_negative {
            det.neg()
        } else {
            det
        }
    }

    /// Expansion by minors over column subsets, O(2^n * n) ring products.
    /// Division-free, so valid over any coefficient ring.
    fn det_minor_expansion(&self) -> RingElem {
        let n = self.n;
        let ctx = self.ctx;
        let mut table: Vec<Option<RingElem>> = vec![None; 1 << n];
        table[0] = Some(RingElem::one(ctx));
        for mask in 1usize..(1 << n) {
            let row = (mask as u32).count_ones() as usize - 1;
            let mut acc = RingElem::zero(ctx);
            let mut pos = 0;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let e = self.entry(row, j);
                if !e.is_zero() {
                    let sub = table[mask ^ (1 << j)]
                        .as_ref()
                        .expect("smaller masks are filled");
                    let term = e * sub;
                    // cofactor sign for position `pos` in the last row
                    acc = if (row + pos).is_multiple_of(2) {
                        &acc + &term
                    } else {
                        &acc - &term
                    };
                }
                pos += 1;
            }
            table[mask] = Some(acc);
        }
        table[(1 << n) - 1].take().unwrap()
    }
}

fn check_dim(n: usize) -> Result<(), MatrixError> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(MatrixError::Dimension(n));
    }
    Ok(())
}

impl fmt::Debug for SqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SqMatrix {}x{} over {}", self.n, self.n, self.ctx)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for SqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.entry(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// `I + a E_{ij}` with zero-based indices; shared by the group modules.
pub(crate) fn plus_unit(
    ctx: RingCtx,
    n: usize,
    i: usize,
    j: usize,
    a: &RingElem,
) -> Result<SqMatrix, MatrixError> {
    let mut m = SqMatrix::identity(ctx, n)?;
    assert!(i != j && i < n && j < n);
    m.entries[i * n + j] = a.clone();
    Ok(m)
}
