//! Permutations of `{0, ..., d-1}` as image vectors.

use alloc::vec::Vec;

/// A permutation stored by its image vector: point `i` maps to `images[i]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from images, validating bijectivity.
    pub fn new(images: Vec<u32>) -> Self {
        let d = images.len();
        let mut seen = alloc::vec![false; d];
        for &i in &images {
            assert!((i as usize) < d, "image out of range");
            assert!(!seen[i as usize], "images repeat");
            seen[i as usize] = true;
        }
        Permutation { images }
    }

    /// The identity on `degree` points.
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds the permutation from disjoint-cycle notation on `degree` points.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Self {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w] as usize;
                let to = cycle[(w + 1) % cycle.len()];
                images[from] = to;
            }
        }
        Permutation::new(images)
    }

    /// Number of points.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a point.
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    /// The image vector.
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self` then `other`: the product `self * other` acting on the left
    /// point first through `self`.
    pub fn compose(&self, other: &Self) -> Self {
        assert!(self.degree() == other.degree(), "degree mismatch");
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    /// Inverse permutation.
    pub fn inverse(&self) -> Self {
        let mut images = alloc::vec![0u32; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Permutation { images }
    }

    /// True iff every point is fixed.
    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }
}
