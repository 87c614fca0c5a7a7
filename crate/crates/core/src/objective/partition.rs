use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disjoint split of the coordinates `0..total_dim` into non-empty blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    total_dim: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn new(total_dim: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if total_dim == 0 {
            return Err(Error::InvalidPartition("empty coordinate space".into()));
        }
        if blocks.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        let mut seen = vec![false; total_dim];
        for (b, idx) in blocks.iter().enumerate() {
            if idx.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &i in idx {
                if i >= total_dim {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} in block {b} outside 0..{total_dim}"
                    )));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("index {i} repeated")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {i} not covered")));
        }
        Ok(Self { total_dim, blocks })
    }

    /// `n_blocks` contiguous blocks of (nearly) equal size.
    pub fn contiguous(total_dim: usize, n_blocks: usize) -> Result<Self> {
        if n_blocks == 0 || n_blocks > total_dim {
            return Err(Error::InvalidPartition(format!(
                "{n_blocks} blocks over {total_dim} coordinates"
            )));
        }
        let base = total_dim / n_blocks;
        let extra = total_dim % n_blocks;
        let mut start = 0;
        let blocks = (0..n_blocks)
            .map(|b| {
                let len = base + usize::from(b < extra);
                let idx: Vec<usize> = (start..start + len).collect();
                start += len;
                idx
            })
            .collect();
        Self::new(total_dim, blocks)
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_len(&self, i: usize) -> usize {
        self.blocks[i].len()
    }

    pub fn check_block(&self, i: usize) -> Result<()> {
        if i >= self.blocks.len() {
            return Err(Error::InvalidInput(format!(
                "block {i} out of range (n = {})",
                self.blocks.len()
            )));
        }
        Ok(())
    }

    /// Components of `x` belonging to block `i`.
    pub fn gather(&self, x: &[f64], i: usize) -> Vec<f64> {
        self.blocks[i].iter().map(|&j| x[j]).collect()
    }

    /// Write block values back into a full vector.
    pub fn scatter(&self, x: &mut [f64], i: usize, values: &[f64]) {
        debug_assert_eq!(values.len(), self.blocks[i].len());
        for (&j, &v) in self.blocks[i].iter().zip(values) {
            x[j] = v;
        }
    }

    /// Copy of `x` with block `i` replaced.
    pub fn with_block(&self, x: &[f64], i: usize, values: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        self.scatter(&mut out, i, values);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_disjoint_cover() {
        assert!(BlockPartition::new(3, vec![vec![0, 1], vec![2]]).is_ok());
        assert!(BlockPartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(BlockPartition::new(3, vec![vec![0], vec![2]]).is_err());
        assert!(BlockPartition::new(3, vec![vec![0, 1, 2], vec![]]).is_err());
        assert!(BlockPartition::new(3, vec![vec![0, 1, 3]]).is_err());
    }

    #[test]
    fn contiguous_split() {
        let p = BlockPartition::contiguous(7, 3).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 1, 2], vec![3, 4], vec![5, 6]]);
        assert!(BlockPartition::contiguous(2, 3).is_err());
    }

    #[test]
    fn gather_scatter() {
        let p = BlockPartition::new(4, vec![vec![3, 0], vec![1, 2]]).unwrap();
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(p.gather(&x, 0), vec![4.0, 1.0]);
        assert_eq!(p.with_block(&x, 0, &[9.0, 8.0]), vec![8.0, 2.0, 3.0, 9.0]);
    }
}
