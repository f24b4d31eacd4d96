//! Bit-packed vectors over GF(2) and the row reductions built on them.

use serde::{Deserialize, Serialize};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(WORD)] }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    #[inline]
    pub fn or(&self, other: &BitVec) -> BitVec {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        BitVec { len: self.len, words }
    }

    #[inline]
    pub fn and(&self, other: &BitVec) -> BitVec {
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        BitVec { len: self.len, words }
    }

    /// Parity of the bitwise AND, i.e. the GF(2) dot product.
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        self.and_count(other) & 1 == 1
    }

    #[inline]
    pub fn and_count(&self, other: &BitVec) -> u32 {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum()
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        BitVec::from_indices(len, self.ones().filter(|&i| i >= start && i < start + len).map(|i| i - start))
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec({s})")
    }
}

/// Reduced row echelon form of a GF(2) matrix, with the row combination that
/// produced every reduced row.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    /// Nonzero reduced rows, one per pivot, sorted by pivot column.
    pub rows: Vec<BitVec>,
    pub pivots: Vec<usize>,
    /// For each input row that became zero, the input rows whose sum vanishes.
    pub dependencies: Vec<BitVec>,
}

impl Echelon {
    /// Gauss-Jordan elimination; pivots are taken at the lowest available column
    /// and the lowest remaining row, so the output is deterministic.
    pub fn new(rows: &[BitVec], ncols: usize) -> Self {
        let nrows = rows.len();
        let mut work: Vec<(BitVec, BitVec)> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                debug_assert_eq!(r.len(), ncols);
                (r.clone(), BitVec::from_indices(nrows, [i]))
            })
            .collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..ncols {
            let Some(found) = (next..nrows).find(|&i| work[i].0.get(col)) else {
                continue;
            };
            work.swap(next, found);
            let (prow, pcomb) = work[next].clone();
            for (i, (row, comb)) in work.iter_mut().enumerate() {
                if i != next && row.get(col) {
                    row.xor_assign(&prow);
                    comb.xor_assign(&pcomb);
                }
            }
            pivots.push(col);
            next += 1;
            if next == nrows {
                break;
            }
        }
        let dependencies = work[next..].iter().map(|(_, comb)| comb.clone()).collect();
        let rows = work[..next].iter().map(|(r, _)| r.clone()).collect();
        Self { ncols, rows, pivots, dependencies }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of `{v : row · v = 0 for every row}`, one vector per free column in
    /// increasing column order.
    pub fn nullspace(&self) -> Vec<BitVec> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::zeros(self.ncols);
                v.set(free, true);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

pub fn rank(rows: &[BitVec], ncols: usize) -> usize {
    Echelon::new(rows, ncols).rank()
}

/// Reflected binary Gray code: successive values differ in exactly one bit.
#[inline]
pub fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}
