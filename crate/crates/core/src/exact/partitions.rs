use crate::error::{Error, Result};
use crate::perm::CycleType;

/// Partitions of `n` in reverse-lexicographic order, starting from `[n]` and
/// ending with `[1, 1, …, 1]`.
#[derive(Debug, Clone)]
pub struct Partitions {
    parts: Vec<usize>,
    done: bool,
}

impl Partitions {
    fn new(n: usize) -> Self {
        Partitions {
            parts: vec![n],
            done: false,
        }
    }

    fn advance(&mut self) {
        // Pop trailing ones, decrement the last part > 1, then refill the
        // remainder greedily with copies of the decremented part.
        let mut ones = 0;
        while self.parts.last() == Some(&1) {
            self.parts.pop();
            ones += 1;
        }
        let Some(last) = self.parts.last_mut() else {
            self.done = true;
            return;
        };
        *last -= 1;
        let part = *last;
        let mut rest = ones + 1;
        while rest > 0 {
            let p = part.min(rest);
            self.parts.push(p);
            rest -= p;
        }
    }
}

impl Iterator for Partitions {
    type Item = CycleType;

    fn next(&mut self) -> Option<CycleType> {
        if self.done {
            return None;
        }
        let out = CycleType::from_lengths(&self.parts).expect("partition parts are positive");
        self.advance();
        Some(out)
    }
}

/// Streams every partition of `n` exactly once; `n` must not exceed `limit`.
pub fn partitions(n: usize, limit: usize) -> Result<Partitions> {
    if n == 0 {
        return Err(Error::invalid("partitions need n >= 1"));
    }
    if n > limit {
        return Err(Error::capacity(format!(
            "n = {n} exceeds the exact-mode limit {limit}"
        )));
    }
    Ok(Partitions::new(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_for_four() {
        let got: Vec<Vec<usize>> = partitions(4, 30).unwrap().map(|c| c.parts()).collect();
        assert_eq!(
            got,
            vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );
    }

    #[test]
    fn one_is_single_part() {
        let got: Vec<_> = partitions(1, 30).unwrap().map(|c| c.parts()).collect();
        assert_eq!(got, vec![vec![1]]);
    }

    #[test]
    fn limit_and_zero() {
        assert!(matches!(partitions(31, 30), Err(Error::Capacity(_))));
        assert!(partitions(0, 30).is_err());
    }
}
