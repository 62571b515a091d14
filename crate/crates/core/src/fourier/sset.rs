use super::riesz::RieszInstance;
use super::Budget;
use crate::error::{Error, Result};
use crate::poisson::natural_sumset;

const WORD: usize = 64;

/// `S = {(n₁ − n₃, n₂ − n₃)}` over the three sumsets, as a bit matrix on
/// `[−cap, cap]²`.
#[derive(Clone, PartialEq, Eq)]
pub struct SSet2D {
    cap: usize,
    width: usize,
    row_words: usize,
    bits: Vec<u64>,
}

impl SSet2D {
    fn empty(cap: usize) -> Self {
        let width = 2 * cap + 1;
        let row_words = width.div_ceil(WORD);
        SSet2D {
            cap,
            width,
            row_words,
            bits: vec![0; row_words * width],
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn offset(&self, a: i64) -> Option<usize> {
        let i = a + self.cap as i64;
        (0..self.width as i64).contains(&i).then_some(i as usize)
    }

    pub fn contains(&self, a: i64, b: i64) -> bool {
        match (self.offset(a), self.offset(b)) {
            (Some(r), Some(c)) => self.bits[r * self.row_words + c / WORD] >> (c % WORD) & 1 == 1,
            _ => false,
        }
    }

    /// `|S|`.
    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Whether every point lies in `[−bound, bound]²`.
    pub fn within(&self, bound: usize) -> bool {
        self.iter().all(|(a, b)| a.unsigned_abs() as usize <= bound && b.unsigned_abs() as usize <= bound)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let cap = self.cap as i64;
        (0..self.width).flat_map(move |r| {
            let row = &self.bits[r * self.row_words..(r + 1) * self.row_words];
            row.iter().enumerate().flat_map(move |(wi, &w)| {
                let mut w = w;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((r as i64 - cap, (wi * WORD + b) as i64 - cap))
                })
            })
        })
    }
}

impl std::fmt::Debug for SSet2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SSet2D")
            .field("cap", &self.cap)
            .field("size", &self.count())
            .finish()
    }
}

/// `dst |= src << shift` on bit vectors.
fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let ws = shift / WORD;
    let bs = shift % WORD;
    for (i, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let lo = i + ws;
        if lo < dst.len() {
            dst[lo] |= w << bs;
        }
        if bs > 0 && lo + 1 < dst.len() {
            dst[lo + 1] |= w >> (WORD - bs);
        }
    }
}

/// Builds the S-set of an instance.
///
/// `cap` is the largest of the three sumset maxima, so every difference fits.
pub fn compute_s(inst: &RieszInstance, budget: &Budget) -> Result<SSet2D> {
    let lx = natural_sumset(inst.interval, &inst.x);
    let ly = natural_sumset(inst.interval, &inst.y);
    let lz = natural_sumset(inst.interval, &inst.z);
    let cap = lx.cap().max(ly.cap()).max(lz.cap());
    let width = 2 * cap + 1;
    if cap > budget.max_cap || (width as u64).saturating_mul(width as u64) > budget.max_cells {
        return Err(Error::capacity(format!(
            "S-set cap {cap} needs {width}x{width} cells, budget is cap <= {} and {} cells",
            budget.max_cap, budget.max_cells
        )));
    }
    let mut s = SSet2D::empty(cap);
    let rw = s.row_words;
    let xs = lx.to_vec();
    let mut shifted = vec![0u64; rw];
    for n3 in lz.iter() {
        // column of n₂ − n₃ is n₂ + cap − n₃
        shifted.iter_mut().for_each(|w| *w = 0);
        or_shifted(&mut shifted, ly.words(), cap - n3);
        for &n1 in &xs {
            let row = n1 + cap - n3;
            let dst = &mut s.bits[row * rw..(row + 1) * rw];
            for (d, &w) in dst.iter_mut().zip(&shifted) {
                *d |= w;
            }
        }
    }
    Ok(s)
}
