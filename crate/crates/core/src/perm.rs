//! Permutations of sheet sets, stored as 0-indexed image lists.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Permutation of `{0, .., n-1}` with `apply(i) = images[i]`. Composition
/// reads right to left like function application: `(a.compose(b))(i)` is
/// `a(b(i))`, so `a.compose(b)` is the group product `a * b`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: u32) -> Self {
        assert!(n > 0, "permutations act on at least one sheet");
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::BadPermutation {
                detail: "empty image list".to_string(),
            });
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img as usize >= n {
                return Err(Error::BadPermutation {
                    detail: format!("image {} out of range for degree {}", img, n),
                });
            }
            if seen[img as usize] {
                return Err(Error::BadPermutation {
                    detail: format!("image {} repeated", img),
                });
            }
            seen[img as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses the 1-indexed image list used in serialized form.
    pub fn from_one_indexed(xs: &[u64]) -> Result<Self> {
        let mut images = Vec::with_capacity(xs.len());
        for &x in xs {
            if x == 0 || x > xs.len() as u64 {
                return Err(Error::BadPermutation {
                    detail: format!("1-indexed image {} out of range for degree {}", x, xs.len()),
                });
            }
            images.push((x - 1) as u32);
        }
        Permutation::from_images(images)
    }

    pub fn one_indexed(&self) -> Vec<u64> {
        self.images.iter().map(|&i| i as u64 + 1).collect()
    }

    pub fn n(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    /// Group product `self * other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "degree mismatch in composition");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// Disjoint cycles, fixed points included, sorted by least element.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur as u32);
                cur = self.images[cur] as usize;
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Cycle lengths in the order of [`Permutation::cycles`].
    pub fn cycle_lengths(&self) -> Vec<u64> {
        self.cycles().iter().map(|c| c.len() as u64).collect()
    }

    pub fn order(&self) -> u64 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u64, |acc, len| acc.lcm(&len))
    }
}
