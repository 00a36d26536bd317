use alloc::vec;
use alloc::vec::Vec;

use crate::CoreError;

/// Mixed-radix indexing of a product space `A_1 × ··· × A_n`.
///
/// The first coordinate is the most significant digit, so index order is the
/// lexicographic order of coordinate tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSpace {
    radices: Vec<usize>,
    strides: Vec<usize>,
    size: usize,
}

impl ProfileSpace {
    pub fn new(radices: Vec<usize>) -> Result<Self, CoreError> {
        let mut strides = vec![0; radices.len()];
        let mut size: usize = 1;
        for (k, &r) in radices.iter().enumerate().rev() {
            strides[k] = size;
            size = size.checked_mul(r).ok_or(CoreError::SpaceTooLarge)?;
        }
        Ok(ProfileSpace {
            radices,
            strides,
            size,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dims(&self) -> usize {
        self.radices.len()
    }

    pub fn radix(&self, coord: usize) -> usize {
        self.radices[coord]
    }

    pub fn stride(&self, coord: usize) -> usize {
        self.strides[coord]
    }

    pub fn index(&self, profile: &[usize]) -> usize {
        debug_assert_eq!(profile.len(), self.radices.len());
        profile
            .iter()
            .zip(&self.strides)
            .map(|(digit, stride)| digit * stride)
            .sum()
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        self.radices
            .iter()
            .zip(&self.strides)
            .map(|(r, stride)| (index / stride) % r)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.size).map(move |idx| self.decode(idx))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_order_is_lexicographic() {
        let space = ProfileSpace::new(vec![2, 3, 2]).unwrap();
        assert_eq!(space.size(), 12);
        let all: Vec<_> = space.iter().collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        for (idx, p) in all.iter().enumerate() {
            assert_eq!(space.index(p), idx);
        }
    }

    #[test]
    fn empty_product_has_one_point() {
        let space = ProfileSpace::new(vec![]).unwrap();
        assert_eq!(space.size(), 1);
        assert_eq!(space.iter().collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(
            ProfileSpace::new(vec![usize::MAX, 3]),
            Err(CoreError::SpaceTooLarge)
        );
    }
}
