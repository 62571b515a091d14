use std::fmt;

use rand::{Rng, RngExt};

use super::CycleType;
use crate::error::{Error, Result};

/// A permutation of `{0, …, n−1}` in one-line notation: `image[i] = π(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n as u32).collect(),
        }
    }

    /// Checks that `image` is a bijection on `0..image.len()`.
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::invalid("permutation degree must be at least 1"));
        }
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::invalid(format!("image is not a bijection on 0..{n}")));
            }
        }
        Ok(Permutation {
            image: image.into_iter().map(|v| v as u32).collect(),
        })
    }

    /// Builds a permutation from disjoint cycles; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p >= n || std::mem::replace(&mut used[p], true) {
                    return Err(Error::invalid(format!("bad or repeated point {p} in cycles")));
                }
                image[p] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_image(image)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    pub fn image(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.image.iter().map(|&v| v as usize)
    }

    /// Swaps the images of points 0 and 1, i.e. composes with the
    /// transposition `(0 1)` on the right. Flips parity.
    fn compose_transposition(&mut self) {
        self.image.swap(0, 1);
    }

    pub fn cycle_type(&self) -> CycleType {
        cycle_type(self)
    }

    pub fn parity(&self) -> Parity {
        let cycles = self.cycle_type().num_cycles();
        if (self.degree() - cycles).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-indexed for display
        let shown: Vec<u32> = self.image.iter().map(|v| v + 1).collect();
        write!(f, "Permutation{shown:?}")
    }
}

/// Uniform element of `S_n` by Fisher–Yates, one draw per position.
pub fn sample_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::invalid("permutation degree must be at least 1"));
    }
    let mut image: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        image.swap(i, j);
    }
    Ok(Permutation { image })
}

/// Uniform element of `A_n` (even) or of the odd coset.
///
/// Draws a uniform permutation and, if its parity is wrong, composes it with
/// the fixed transposition `(0 1)`. That map is a bijection between the two
/// cosets, so the result is uniform on the requested one.
pub fn sample_permutation_with_parity<R: Rng + ?Sized>(
    n: usize,
    parity: Parity,
    rng: &mut R,
) -> Result<Permutation> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "parity-conditioned sampling needs n >= 2, got {n}"
        )));
    }
    let mut p = sample_permutation(n, rng)?;
    if p.parity() != parity {
        p.compose_transposition();
    }
    Ok(p)
}

/// Cycle decomposition in O(n).
pub fn cycle_type(p: &Permutation) -> CycleType {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut lengths = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p.image[i] as usize;
            len += 1;
        }
        lengths.push(len);
    }
    CycleType::from_lengths(&lengths).expect("cycle lengths of a permutation are valid")
}
