use serde::Serialize;

use crate::{Error, Result};

/// Fixed-particle-number Fock basis over levels `lo..=hi`. Bit `b` of a state
/// is the occupation of level `lo + b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FockBasis {
    pub lo: i64,
    pub hi: i64,
    pub n_tot: usize,
    #[serde(skip)]
    states: Vec<u64>,
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Largest basis the oracle will enumerate.
pub const MAX_DIM: u128 = 5_000_000;

impl FockBasis {
    pub fn new(lo: i64, hi: i64, n_tot: usize) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidInput(format!("empty level range [{lo}, {hi}]")));
        }
        let levels = (hi - lo + 1) as usize;
        if levels > 63 {
            return Err(Error::InvalidInput(format!("at most 63 levels supported, got {levels}")));
        }
        if n_tot > levels {
            return Err(Error::InvalidInput(format!("{n_tot} fermions do not fit in {levels} levels")));
        }
        let dim = binomial(levels, n_tot);
        if dim > MAX_DIM {
            return Err(Error::InvalidInput(format!("basis dimension {dim} exceeds {MAX_DIM}")));
        }
        let mut states = Vec::with_capacity(dim as usize);
        if n_tot == 0 {
            states.push(0);
        } else {
            // Gosper's hack enumerates k-subsets in increasing order
            let mut s: u64 = (1u64 << n_tot) - 1;
            let limit = 1u64 << levels;
            while s < limit {
                states.push(s);
                let c = s & s.wrapping_neg();
                let r = s + c;
                s = (((r ^ s) >> 2) / c) | r;
            }
        }
        Ok(FockBasis { lo, hi, n_tot, states })
    }

    /// `N` physical fermions plus `below` filled levels under n = 0, up to level `hi`.
    pub fn around_fermi(n: usize, below: usize, hi: i64) -> Result<Self> {
        FockBasis::new(-(below as i64), hi, n + below)
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn levels(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn index_of(&self, state: u64) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }

    /// Lowest `n_tot` levels filled.
    pub fn reference(&self) -> u64 {
        self.states[0]
    }

    pub fn bit(&self, level: i64) -> Option<u32> {
        (self.lo..=self.hi).contains(&level).then(|| (level - self.lo) as u32)
    }
}

/// `c+_a c_b |s>` for bit positions `a`, `b`: the new state and its sign.
pub(crate) fn hop(s: u64, a: u32, b: u32) -> Option<(u64, f64)> {
    if s & (1 << b) == 0 {
        return None;
    }
    if a == b {
        return Some((s, 1.0));
    }
    if s & (1 << a) != 0 {
        return None;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let between = (s >> (lo + 1)) & ((1u64 << (hi - lo - 1)) - 1);
    let sign = if between.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
    Some(((s & !(1 << b)) | (1 << a), sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_and_order() {
        let b = FockBasis::new(-4, 11, 10).unwrap();
        assert_eq!(b.dim(), 8008);
        assert!(b.states().windows(2).all(|w| w[0] < w[1]));
        assert!(b.states().iter().all(|s| s.count_ones() == 10));
        assert_eq!(b.reference(), (1 << 10) - 1);
        assert_eq!(FockBasis::new(0, 5, 2).unwrap().dim(), 15);
        assert_eq!(FockBasis::around_fermi(6, 5, 12).unwrap().dim(), 31824);
        assert_eq!(FockBasis::new(0, 3, 0).unwrap().dim(), 1);
        assert!(FockBasis::new(0, 3, 5).is_err());
        for (i, s) in b.states().iter().enumerate().step_by(97) {
            assert_eq!(b.index_of(*s), Some(i));
        }
    }

    #[test]
    fn hop_signs() {
        // |levels 0,2,3> : c+_4 c_0 passes two occupied levels
        let s = 0b1101;
        assert_eq!(hop(s, 4, 0), Some((0b11100, 1.0)));
        assert_eq!(hop(s, 1, 3), Some((0b0111, -1.0)));
        assert_eq!(hop(s, 1, 0), Some((0b1110, 1.0)));
        assert_eq!(hop(s, 2, 0), None);
        assert_eq!(hop(s, 1, 1), None);
        assert_eq!(hop(s, 2, 2), Some((s, 1.0)));
    }
}
