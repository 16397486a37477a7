//! Lattice ↔ chain bookkeeping.
//!
//! A `d`-dimensional lattice `N₁ × … × N_d` is listed as a chain with
//! `k = 1 + Σ_l (n_l - 1) ∏_{m<l} N_m`. Edges are defined purely by chain
//! offsets `1, N₁, N₁N₂, …`, which produces the helical boundary: the last
//! site of one row/layer is bonded to the first site of the next.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice needs at least one dimension")]
    NoDimensions,
    #[error("dimension {axis} has length 0")]
    EmptyDimension { axis: usize },
    #[error("photon count {count} outside 1..={capacity}")]
    PhotonCount { count: usize, capacity: usize },
    #[error("coordinate has {got} components, lattice has {expected} dimensions")]
    CoordinateRank { got: usize, expected: usize },
    #[error("coordinate component {axis} = {value} outside 1..={len}")]
    CoordinateRange {
        axis: usize,
        value: usize,
        len: usize,
    },
    #[error("chain index {index} outside 1..={capacity}")]
    IndexRange { index: usize, capacity: usize },
}

/// Lattice shape plus the number of photons actually emitted (the last layer
/// may be partially filled).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeDims {
    dims: Vec<usize>,
    photon_count: usize,
}

impl LatticeDims {
    pub fn new(dims: Vec<usize>, photon_count: usize) -> Result<Self, LatticeError> {
        if dims.is_empty() {
            return Err(LatticeError::NoDimensions);
        }
        if let Some(axis) = dims.iter().position(|&n| n == 0) {
            return Err(LatticeError::EmptyDimension { axis });
        }
        let capacity = dims.iter().product();
        if photon_count == 0 || photon_count > capacity {
            return Err(LatticeError::PhotonCount {
                count: photon_count,
                capacity,
            });
        }
        Ok(Self { dims, photon_count })
    }

    /// Fully filled lattice.
    pub fn full(dims: Vec<usize>) -> Result<Self, LatticeError> {
        let count = dims.iter().product();
        Self::new(dims, count)
    }

    /// A 1D chain of `k` photons.
    pub fn chain(k: usize) -> Result<Self, LatticeError> {
        Self::full(vec![k])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.dims.len()
    }

    pub fn photon_count(&self) -> usize {
        self.photon_count
    }

    pub fn capacity(&self) -> usize {
        self.dims.iter().product()
    }

    /// Same shape with a different photon count.
    pub fn with_photon_count(&self, photon_count: usize) -> Result<Self, LatticeError> {
        Self::new(self.dims.clone(), photon_count)
    }

    /// Distinct chain offsets realizing the lattice bonds, ascending:
    /// `1, N₁, N₁N₂, …, ∏_{l<d} N_l`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::with_capacity(self.dims.len());
        let mut stride = 1;
        for (axis, &n) in self.dims.iter().enumerate() {
            if !out.contains(&stride) {
                out.push(stride);
            }
            if axis + 1 < self.dims.len() {
                stride *= n;
            }
        }
        out.sort_unstable();
        out
    }

    /// Offsets other than 1 (those needing a delay line), ascending.
    pub fn long_offsets(&self) -> Vec<usize> {
        self.offsets().into_iter().filter(|&o| o != 1).collect()
    }

    pub fn max_offset(&self) -> usize {
        *self.offsets().last().expect("offsets always contain 1")
    }

    /// Photons that can still interact at once: the largest offset plus one.
    pub fn window_size(&self) -> usize {
        self.max_offset() + 1
    }

    /// Stack size `∏_{l<d} N_l`, the number of photons per layer.
    pub fn stack_size(&self) -> usize {
        self.dims[..self.dims.len() - 1].iter().product()
    }
}

/// Chain index of a 1-based lattice coordinate.
pub fn linear_index(coord: &[usize], dims: &LatticeDims) -> Result<usize, LatticeError> {
    if coord.len() != dims.dims.len() {
        return Err(LatticeError::CoordinateRank {
            got: coord.len(),
            expected: dims.dims.len(),
        });
    }
    let mut k = 1;
    let mut stride = 1;
    for (axis, (&c, &n)) in coord.iter().zip(&dims.dims).enumerate() {
        if c == 0 || c > n {
            return Err(LatticeError::CoordinateRange {
                axis,
                value: c,
                len: n,
            });
        }
        k += (c - 1) * stride;
        stride *= n;
    }
    Ok(k)
}

/// Inverse of [`linear_index`].
pub fn coordinate(index: usize, dims: &LatticeDims) -> Result<Vec<usize>, LatticeError> {
    let capacity = dims.capacity();
    if index == 0 || index > capacity {
        return Err(LatticeError::IndexRange { index, capacity });
    }
    let mut rest = index - 1;
    Ok(dims
        .dims
        .iter()
        .map(|&n| {
            let c = rest % n + 1;
            rest /= n;
            c
        })
        .collect())
}

/// Bond between chain sites `source < target`, realized by `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSpec {
    pub source: usize,
    pub target: usize,
    pub offset: usize,
}

/// All bonds of the chain, grouped by target and with larger offsets first.
pub fn chain_edges(dims: &LatticeDims) -> Vec<EdgeSpec> {
    let offsets = dims.offsets();
    let mut edges = Vec::new();
    for k in 1..=dims.photon_count {
        for &o in offsets.iter().rev() {
            if k > o {
                edges.push(EdgeSpec {
                    source: k - o,
                    target: k,
                    offset: o,
                });
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_index_examples() {
        let d = LatticeDims::full(vec![2, 2, 3]).unwrap();
        assert_eq!(linear_index(&[1, 1, 1], &d), Ok(1));
        assert_eq!(linear_index(&[2, 2, 1], &d), Ok(4));
        assert_eq!(linear_index(&[1, 1, 2], &d), Ok(5));
        assert_eq!(
            linear_index(&[3, 1, 1], &d),
            Err(LatticeError::CoordinateRange {
                axis: 0,
                value: 3,
                len: 2
            })
        );
        assert_eq!(
            linear_index(&[1, 1], &d),
            Err(LatticeError::CoordinateRank {
                got: 2,
                expected: 3
            })
        );
        assert_eq!(coordinate(5, &d), Ok(vec![1, 1, 2]));
        assert!(coordinate(13, &d).is_err());
    }

    #[test]
    fn chain_edge_examples() {
        let path = chain_edges(&LatticeDims::chain(3).unwrap());
        let pairs: Vec<_> = path.iter().map(|e| (e.source, e.target)).collect();
        assert_eq!(pairs, vec![(1, 2), (2, 3)]);

        let cube = chain_edges(&LatticeDims::full(vec![2, 2, 2]).unwrap());
        assert_eq!(cube.len(), 17);
        let count = |o| cube.iter().filter(|e| e.offset == o).count();
        assert_eq!((count(1), count(2), count(4)), (7, 6, 4));

        // helical boundary: (2,2,1) bonded to (1,1,2)
        let d = LatticeDims::full(vec![2, 2, 3]).unwrap();
        let edges = chain_edges(&d);
        let e = edges
            .iter()
            .find(|e| e.source == 4 && e.target == 5)
            .unwrap();
        assert_eq!(e.offset, 1);
        assert_eq!(coordinate(4, &d).unwrap(), vec![2, 2, 1]);
        assert_eq!(coordinate(5, &d).unwrap(), vec![1, 1, 2]);
    }

    #[test]
    fn partial_layer_drops_missing_endpoints() {
        let d = LatticeDims::new(vec![2, 2, 3], 6).unwrap();
        assert!(chain_edges(&d).iter().all(|e| e.target <= 6));
        assert!(LatticeDims::new(vec![2, 2], 5).is_err());
        assert!(LatticeDims::new(vec![2, 0], 1).is_err());
        assert!(LatticeDims::new(vec![], 1).is_err());
    }

    #[test]
    fn offsets_and_window() {
        let d = LatticeDims::full(vec![3, 2, 4]).unwrap();
        assert_eq!(d.offsets(), vec![1, 3, 6]);
        assert_eq!(d.long_offsets(), vec![3, 6]);
        assert_eq!(d.window_size(), 7);
        assert_eq!(d.stack_size(), 6);
        // degenerate unit axis collapses onto an existing offset
        let d = LatticeDims::full(vec![1, 4]).unwrap();
        assert_eq!(d.offsets(), vec![1]);
    }

    #[test]
    fn interior_sites_have_six_bonds_in_3d() {
        let d = LatticeDims::full(vec![4, 4, 4]).unwrap();
        let edges = chain_edges(&d);
        let interior = linear_index(&[2, 2, 2], &d).unwrap();
        let degree = edges
            .iter()
            .filter(|e| e.source == interior || e.target == interior)
            .count();
        assert_eq!(degree, 6);
    }
}
