//! Linear algebra over GF(2) and mod-2 homology of chain complexes.

use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{alternating_sum, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("shape mismatch: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
    ShapeMismatch { left_rows: usize, left_cols: usize, right_rows: usize, right_cols: usize },
    #[error("boundary {dim} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    BoundaryShape { dim: usize, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("composite boundary d{lower}*d{upper} is nonzero")]
    NonzeroComposite { lower: usize, upper: usize },
}

const WORD: usize = 64;

/// Dense bit-packed matrix over GF(2), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            let row: String = (0..self.cols.min(64)).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD);
        Gf2Matrix { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Rows given as 0/1 entries; any nonzero byte counts as 1.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |r, c| rows[r][c] != 0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    /// Column indices of the set bits in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.row(r).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * WORD + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Product `self * other`; row `r` of the result is the XOR of the rows
    /// of `other` selected by row `r` of `self`.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let start = r * out.stride;
            for k in self.row_support(r) {
                let src = other.row(k);
                for (d, s) in out.bits[start..start + out.stride].iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
        Ok(out)
    }

    /// Rank by forward elimination with word-level XOR; the pivot is the
    /// first row with a set bit in the current column.
    pub fn rank(&self) -> usize {
        let mut bits = self.bits.clone();
        let stride = self.stride;
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let (word, mask) = (c / WORD, 1u64 << (c % WORD));
            let Some(p) = (rank..self.rows).find(|&r| bits[r * stride + word] & mask != 0) else {
                continue;
            };
            if p != rank {
                for w in 0..stride {
                    bits.swap(p * stride + w, rank * stride + w);
                }
            }
            let (head, tail) = bits.split_at_mut((rank + 1) * stride);
            let pivot = &head[rank * stride + word..];
            for r in 0..self.rows - rank - 1 {
                let row = &mut tail[r * stride..(r + 1) * stride];
                if row[word] & mask != 0 {
                    for (d, s) in row[word..].iter_mut().zip(pivot) {
                        *d ^= s;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

pub fn rank_gf2(m: &Gf2Matrix) -> usize {
    m.rank()
}

/// Graded chain complex over GF(2). `boundary(i)` maps degree-`i` chains to
/// degree-`(i-1)` chains and has shape `sizes[i-1] x sizes[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexZ2 {
    sizes: Vec<usize>,
    boundaries: Vec<Gf2Matrix>,
}

impl ChainComplexZ2 {
    /// `boundaries[i]` is the boundary out of degree `i + 1`.
    pub fn new(sizes: Vec<usize>, boundaries: Vec<Gf2Matrix>) -> Result<Self, Gf2Error> {
        let expected = sizes.len().saturating_sub(1);
        assert_eq!(boundaries.len(), expected, "one boundary per positive degree");
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != sizes[i] || b.cols() != sizes[i + 1] {
                return Err(Gf2Error::BoundaryShape {
                    dim: i + 1,
                    rows: b.rows(),
                    cols: b.cols(),
                    expected_rows: sizes[i],
                    expected_cols: sizes[i + 1],
                });
            }
        }
        Ok(ChainComplexZ2 { sizes, boundaries })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Boundary out of degree `dim` (`dim >= 1`).
    pub fn boundary(&self, dim: usize) -> Option<&Gf2Matrix> {
        dim.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.sizes.len().checked_sub(1)
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.sizes)
    }

    pub fn check_boundary_squared(&self) -> Result<(), Gf2Error> {
        for i in 1..self.boundaries.len() {
            let comp = self.boundaries[i - 1].mul(&self.boundaries[i])?;
            if !comp.is_zero() {
                return Err(Gf2Error::NonzeroComposite { lower: i, upper: i + 1 });
            }
        }
        Ok(())
    }

    /// Ranks of the boundary maps, `ranks[i]` for the map out of degree `i`
    /// (zero for degree 0).
    pub fn boundary_ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0];
        ranks.extend(self.boundaries.par_iter().map(Gf2Matrix::rank).collect::<Vec<_>>());
        ranks
    }
}

/// Simplicial chain complex with the complex's face order as basis.
pub fn boundary_complex(k: &SimplicialComplex) -> ChainComplexZ2 {
    let sizes = k.f_vector();
    let boundaries = (1..sizes.len())
        .map(|d| {
            let mut m = Gf2Matrix::zeros(sizes[d - 1], sizes[d]);
            for (c, s) in k.faces(d).iter().enumerate() {
                for b in s.boundary() {
                    let r = k.index_of(&b).expect("complex is downward closed");
                    m.set(r, c, true);
                }
            }
            m
        })
        .collect();
    ChainComplexZ2::new(sizes, boundaries).expect("shapes follow the f-vector")
}

/// Mod-2 Betti numbers `b_i = n_i - rank d_i - rank d_{i+1}`.
pub fn betti_mod2(c: &ChainComplexZ2) -> Result<Vec<usize>, Gf2Error> {
    c.check_boundary_squared()?;
    let ranks = c.boundary_ranks();
    Ok(c.sizes.iter().enumerate().map(|(i, &n)| n - ranks[i] - ranks.get(i + 1).copied().unwrap_or(0)).collect())
}

/// Betti numbers of a simplicial complex.
pub fn simplicial_betti(k: &SimplicialComplex) -> Vec<usize> {
    betti_mod2(&boundary_complex(k)).expect("simplicial boundary squares to zero")
}
