//! Dense linear algebra over GF(2) on bit-packed rows.

/// A system of affine equations `A x = b` over GF(2). Each pushed row
/// holds the coefficient bits of one equation plus its right-hand side.
#[derive(Debug, Clone)]
pub struct F2System {
    ncols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl F2System {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, words: (ncols + 1).div_ceil(64), rows: Vec::new() }
    }

    /// Adds one equation. `coeffs` must yield exactly `ncols` items.
    pub fn push_row<I>(&mut self, coeffs: I, rhs: bool)
    where
        I: IntoIterator<Item = bool>,
    {
        let mut row = vec![0u64; self.words];
        let mut count = 0usize;
        for (i, bit) in coeffs.into_iter().enumerate() {
            assert!(i < self.ncols, "equation has too many coefficients");
            if bit {
                row[i / 64] |= 1u64 << (i % 64);
            }
            count += 1;
        }
        assert_eq!(count, self.ncols, "equation has too few coefficients");
        if rhs {
            row[self.ncols / 64] |= 1u64 << (self.ncols % 64);
        }
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }
}

/// Solution set of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum F2Solution {
    /// Exactly one assignment satisfies the system.
    Unique(Vec<u8>),
    /// The affine space `particular + span(nullspace)`.
    Space { particular: Vec<u8>, nullspace: Vec<Vec<u8>> },
    /// No assignment satisfies the system.
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Outcome {
    /// Rank of the coefficient matrix.
    pub rank: usize,
    pub solution: F2Solution,
}

/// Reduces the system to reduced row echelon form and classifies the
/// solution set.
pub fn gaussian_solve(system: &F2System) -> F2Outcome {
    let ncols = system.ncols;
    let nrows = system.rows.len();
    let mut rows = system.rows.clone();
    let mut pivots: Vec<usize> = Vec::new();

    for col in 0..ncols {
        let r = pivots.len();
        if r == nrows {
            break;
        }
        let w = col / 64;
        let m = 1u64 << (col % 64);
        let Some(p) = (r..nrows).find(|&i| rows[i][w] & m != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[w] & m != 0 {
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a ^= b;
                }
            }
        }
        pivots.push(col);
    }

    let rank = pivots.len();
    let rhs_w = ncols / 64;
    let rhs_m = 1u64 << (ncols % 64);
    if rows.iter().skip(rank).any(|row| row[rhs_w] & rhs_m != 0) {
        return F2Outcome { rank, solution: F2Solution::Inconsistent };
    }

    let mut particular = vec![0u8; ncols];
    for (i, &pc) in pivots.iter().enumerate() {
        if rows[i][rhs_w] & rhs_m != 0 {
            particular[pc] = 1;
        }
    }
    if rank == ncols {
        return F2Outcome { rank, solution: F2Solution::Unique(particular) };
    }

    let mut is_pivot = vec![false; ncols];
    for &pc in &pivots {
        is_pivot[pc] = true;
    }
    let mut nullspace = Vec::with_capacity(ncols - rank);
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u8; ncols];
        v[free] = 1;
        let w = free / 64;
        let m = 1u64 << (free % 64);
        for (i, &pc) in pivots.iter().enumerate() {
            if rows[i][w] & m != 0 {
                v[pc] = 1;
            }
        }
        nullspace.push(v);
    }
    F2Outcome { rank, solution: F2Solution::Space { particular, nullspace } }
}
