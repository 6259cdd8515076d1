//! Simplicial deleted product: the cell complex of ordered pairs of
//! disjoint faces, with the factor-exchange involution.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex};
use crate::gf2::{betti_mod2, ChainComplexZ2, Gf2Error, Gf2Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DelProdError {
    #[error("cell {0} is fixed by the exchange involution")]
    FixedCell(ProductCell),
    #[error("swap of cell {0} is not a cell")]
    SwapMissing(ProductCell),
    #[error("boundary face {face} of cell {cell} is not a cell")]
    NotClosed { cell: ProductCell, face: ProductCell },
    #[error("exchange involution does not commute with the boundary at cell {0}")]
    NotChainMap(ProductCell),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// Product cell σ × τ of dimension `dim σ + dim τ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductCell {
    pub first: Simplex,
    pub second: Simplex,
}

impl ProductCell {
    pub fn new(first: Simplex, second: Simplex) -> Self {
        ProductCell { first, second }
    }

    pub fn dim(&self) -> usize {
        self.first.dim() + self.second.dim()
    }

    pub fn swapped(&self) -> ProductCell {
        ProductCell { first: self.second.clone(), second: self.first.clone() }
    }

    /// `∂(σ×τ) = ∂σ×τ + σ×∂τ`, omitting terms with an empty factor.
    pub fn boundary(&self) -> Vec<ProductCell> {
        self.first
            .boundary()
            .map(|f| ProductCell::new(f, self.second.clone()))
            .chain(self.second.boundary().map(|s| ProductCell::new(self.first.clone(), s)))
            .collect()
    }
}

impl std::fmt::Display for ProductCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.first, self.second)
    }
}

#[derive(Clone, Debug)]
pub struct DeletedProductComplex {
    cells: Vec<Vec<ProductCell>>,
    index: HashMap<ProductCell, usize>,
    max_dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionReport {
    pub free: bool,
    pub orbits_per_dim: Vec<usize>,
    pub total_orbits: usize,
}

/// All ordered pairs of disjoint nonempty faces.
pub fn deleted_product(k: &SimplicialComplex) -> DeletedProductComplex {
    deleted_product_capped(k, None)
}

/// Deleted product restricted to cells of dimension at most `max_dim`.
pub fn deleted_product_capped(k: &SimplicialComplex, max_dim: Option<usize>) -> DeletedProductComplex {
    let faces: Vec<&Simplex> = k.all_faces().collect();
    let cap = max_dim.unwrap_or(usize::MAX);
    let cells: Vec<ProductCell> = faces
        .par_iter()
        .flat_map_iter(|&s| {
            faces
                .iter()
                .filter(move |&&t| s.dim() + t.dim() <= cap && s.is_disjoint(t))
                .map(move |&t| ProductCell::new(s.clone(), t.clone()))
        })
        .collect();
    DeletedProductComplex::assemble(cells, max_dim)
}

impl DeletedProductComplex {
    fn assemble(cells: Vec<ProductCell>, max_dim: Option<usize>) -> Self {
        let top = cells.iter().map(ProductCell::dim).max();
        let mut graded: Vec<Vec<ProductCell>> = vec![Vec::new(); top.map_or(0, |d| d + 1)];
        for c in cells {
            let d = c.dim();
            graded[d].push(c);
        }
        for layer in &mut graded {
            layer.sort_unstable();
            layer.dedup();
        }
        let index = graded.iter().flat_map(|layer| layer.iter().enumerate().map(|(i, c)| (c.clone(), i))).collect();
        DeletedProductComplex { cells: graded, index, max_dim }
    }

    /// Builds a cell set without checking disjointness or closure; intended
    /// for exercising the checks in `check_free_involution`.
    pub fn from_cells_unchecked(cells: Vec<ProductCell>) -> Self {
        Self::assemble(cells, None)
    }

    pub fn cells(&self, dim: usize) -> &[ProductCell] {
        self.cells.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.max_dim
    }

    pub fn index_of(&self, c: &ProductCell) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Cellular chain complex over GF(2) in cell order.
    pub fn chain_complex(&self) -> Result<ChainComplexZ2, DelProdError> {
        let sizes = self.cell_counts();
        let mut boundaries = Vec::with_capacity(sizes.len().saturating_sub(1));
        for d in 1..sizes.len() {
            let mut m = Gf2Matrix::zeros(sizes[d - 1], sizes[d]);
            for (col, cell) in self.cells[d].iter().enumerate() {
                for face in cell.boundary() {
                    let row =
                        self.index_of(&face).ok_or_else(|| DelProdError::NotClosed { cell: cell.clone(), face })?;
                    m.flip(row, col);
                }
            }
            boundaries.push(m);
        }
        Ok(ChainComplexZ2::new(sizes, boundaries)?)
    }

    /// Mod-2 Betti numbers. With a dimension cap `m`, only degrees below
    /// `m` are meaningful and the returned vector is truncated to them.
    pub fn betti(&self) -> Result<Vec<usize>, DelProdError> {
        let mut b = betti_mod2(&self.chain_complex()?)?;
        if let Some(m) = self.max_dim {
            if b.len() > m {
                b.truncate(m);
            }
        }
        Ok(b)
    }

    /// Verifies that `(σ,τ) ↦ (τ,σ)` permutes the cells without fixed
    /// points and commutes with the boundary matrices.
    pub fn check_free_involution(&self) -> Result<InvolutionReport, DelProdError> {
        for layer in &self.cells {
            for c in layer {
                if c.first == c.second {
                    return Err(DelProdError::FixedCell(c.clone()));
                }
                if !self.index.contains_key(&c.swapped()) {
                    return Err(DelProdError::SwapMissing(c.clone()));
                }
            }
        }
        let chain = self.chain_complex()?;
        for d in 1..self.cells.len() {
            let transposed = chain.boundary(d).expect("boundary exists").transpose();
            let lower = &self.cells[d - 1];
            for (col, cell) in self.cells[d].iter().enumerate() {
                // swap applied to the boundary column of `cell` ...
                let mut mapped: Vec<usize> =
                    transposed.row_support(col).into_iter().map(|r| self.index[&lower[r].swapped()]).collect();
                mapped.sort_unstable();
                // ... equals the boundary column of swap(cell)
                let swapped_col = self.index[&cell.swapped()];
                if mapped != transposed.row_support(swapped_col) {
                    return Err(DelProdError::NotChainMap(cell.clone()));
                }
            }
        }
        let orbits_per_dim: Vec<usize> = self.cells.iter().map(|l| l.len() / 2).collect();
        Ok(InvolutionReport { free: true, total_orbits: orbits_per_dim.iter().sum(), orbits_per_dim })
    }
}
