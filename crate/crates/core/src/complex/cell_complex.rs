use std::collections::BTreeSet;

use super::{ComplexError, SimplicialComplex};
use crate::geometry::{intersect_cells, ConvexCell, GeometryError, RationalPoint};

/// Finite complex of convex cells, closed under faces.
///
/// Cells are kept sorted by `(dim, vertices)`, so faces precede the cells
/// they bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    ambient_dim: usize,
    cells: Vec<ConvexCell>,
    maximal: Vec<usize>,
}

impl CellComplex {
    /// Closes `cells` under faces. Does not check proper intersection; see
    /// [`CellComplex::validate`].
    pub fn from_cells(ambient_dim: usize, cells: Vec<ConvexCell>) -> Result<Self, ComplexError> {
        for c in &cells {
            if c.ambient_dim() != ambient_dim {
                return Err(GeometryError::DimensionMismatch { expected: ambient_dim, found: c.ambient_dim() }.into());
            }
        }
        let mut closure: BTreeSet<ConvexCell> = BTreeSet::new();
        let mut proper: BTreeSet<ConvexCell> = BTreeSet::new();
        for c in &cells {
            for f in c.faces() {
                if &f != c {
                    proper.insert(f.clone());
                }
                closure.insert(f);
            }
        }
        let cells: Vec<ConvexCell> = closure.into_iter().collect();
        let maximal = (0..cells.len()).filter(|&i| !proper.contains(&cells[i])).collect();
        Ok(CellComplex { ambient_dim, cells, maximal })
    }

    pub fn from_simplicial(k: &SimplicialComplex) -> CellComplex {
        let cells = k.facets().iter().map(|f| k.cell(f)).collect();
        CellComplex::from_cells(k.ambient_dim(), cells).expect("uniform ambient dimension")
    }

    pub fn empty(ambient_dim: usize) -> CellComplex {
        CellComplex { ambient_dim, cells: Vec::new(), maximal: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn cells(&self) -> &[ConvexCell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells_of_dim(&self, k: usize) -> impl Iterator<Item = &ConvexCell> {
        self.cells.iter().filter(move |c| c.dim() == k)
    }

    pub fn maximal_cells(&self) -> impl Iterator<Item = &ConvexCell> {
        self.maximal.iter().map(|&i| &self.cells[i])
    }

    pub fn dim(&self) -> usize {
        self.cells.last().map_or(0, |c| c.dim())
    }

    pub fn index_of(&self, cell: &ConvexCell) -> Option<usize> {
        self.cells.binary_search(cell).ok()
    }

    pub fn contains(&self, cell: &ConvexCell) -> bool {
        self.index_of(cell).is_some()
    }

    pub fn is_subcomplex_of(&self, other: &CellComplex) -> bool {
        self.cells.iter().all(|c| other.contains(c))
    }

    /// Whether `x` lies in the underlying space.
    pub fn covers(&self, x: &RationalPoint) -> bool {
        self.maximal_cells().any(|c| c.contains_point(x))
    }

    /// Pairs of maximal cells whose intersection is nonempty and not a common
    /// face of both.
    pub fn improper_pairs(&self) -> Vec<(usize, usize)> {
        let faces: Vec<BTreeSet<ConvexCell>> =
            self.maximal.iter().map(|&i| self.cells[i].faces().into_iter().collect()).collect();
        let mut out = Vec::new();
        for a in 0..self.maximal.len() {
            for b in a + 1..self.maximal.len() {
                let (ca, cb) = (&self.cells[self.maximal[a]], &self.cells[self.maximal[b]]);
                if let Some(meet) = intersect_cells(ca, cb) {
                    if !faces[a].contains(&meet) || !faces[b].contains(&meet) {
                        out.push((self.maximal[a], self.maximal[b]));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        match self.improper_pairs().first() {
            None => Ok(()),
            Some(&(a, b)) => Err(ComplexError::InvalidCellComplex(format!(
                "cells {:?} and {:?} do not meet in a common face",
                self.cells[a], self.cells[b]
            ))),
        }
    }

    /// Cellwise intersection `{a ∩ b}` of two complexes on the same space.
    ///
    /// For complexes whose maximal cells all have the top dimension, only
    /// top-dimensional intersections are kept as generators; the rest are
    /// faces of those whenever both supports agree.
    pub fn intersection(&self, other: &CellComplex) -> Result<CellComplex, ComplexError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(GeometryError::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim }.into());
        }
        let mut pieces = Vec::new();
        for a in self.maximal_cells() {
            for b in other.maximal_cells() {
                if let Some(c) = intersect_cells(a, b) {
                    pieces.push(c);
                }
            }
        }
        let pure = |k: &CellComplex| k.maximal_cells().all(|c| c.dim() == k.dim());
        if pure(self) && pure(other) && self.dim() == other.dim() {
            let d = self.dim();
            let top: Vec<ConvexCell> = pieces.iter().filter(|c| c.dim() == d).cloned().collect();
            if !top.is_empty() {
                pieces = top;
            }
        }
        CellComplex::from_cells(self.ambient_dim, pieces)
    }
}
