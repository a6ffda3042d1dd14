//! Lexicographic enumeration of k-subsets of `0..n` with the running XOR of
//! their packed columns. This is the hot loop of every exhaustive check.

use std::ops::ControlFlow;

use crate::f2linalg::BitVector;

/// Columns of a query matrix packed contiguously, `stride` words per column.
#[derive(Clone, Debug)]
pub(crate) struct ColumnTable {
    n: usize,
    stride: usize,
    data: Vec<u64>,
}

impl ColumnTable {
    pub fn new(columns: &[BitVector], nrows: usize) -> Self {
        let stride = nrows.div_ceil(64).max(1);
        let mut data = vec![0; stride * columns.len()];
        for (j, col) in columns.iter().enumerate() {
            data[j * stride..j * stride + col.words().len()].copy_from_slice(col.words());
        }
        ColumnTable { n: columns.len(), stride, data }
    }

    #[inline]
    fn column(&self, j: usize) -> &[u64] {
        &self.data[j * self.stride..(j + 1) * self.stride]
    }

    /// Pads a syndrome to the table's stride.
    pub fn pack(&self, v: &BitVector) -> Vec<u64> {
        let mut out = vec![0; self.stride];
        out[..v.words().len()].copy_from_slice(v.words());
        out
    }

    /// Visits every k-subset in lexicographic order with the XOR of its
    /// columns. Stops early when `visit` breaks.
    pub fn for_each_subset<B>(
        &self,
        k: usize,
        mut visit: impl FnMut(&[usize], &[u64]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if k == 0 {
            return visit(&[], &vec![0; self.stride]);
        }
        if k > self.n {
            return ControlFlow::Continue(());
        }
        match self.stride {
            1 => self.walk_fixed::<1, B>(k, visit),
            2 => self.walk_fixed::<2, B>(k, visit),
            _ => self.walk(k, visit),
        }
    }

    /// Same walk with the column width known at compile time.
    fn walk_fixed<const W: usize, B>(
        &self,
        k: usize,
        mut visit: impl FnMut(&[usize], &[u64]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let n = self.n;
        let cols: Vec<[u64; W]> =
            self.data.chunks_exact(W).map(|c| c.try_into().expect("chunk has width W")).collect();
        let mut idx: Vec<usize> = (0..k).collect();
        let mut acc = vec![[0u64; W]; k];
        for t in 1..k {
            acc[t] = xor(&acc[t - 1], &cols[idx[t - 1]]);
        }
        loop {
            let prefix = acc[k - 1];
            for (last, col) in cols.iter().enumerate().skip(idx[k - 1]) {
                idx[k - 1] = last;
                visit(&idx, &xor(&prefix, col))?;
            }
            let Some(i) = (0..k - 1).rev().find(|&i| idx[i] < n - k + i) else {
                return ControlFlow::Continue(());
            };
            idx[i] += 1;
            for t in i + 1..k {
                idx[t] = idx[t - 1] + 1;
            }
            for t in i + 1..k {
                acc[t] = xor(&acc[t - 1], &cols[idx[t - 1]]);
            }
        }
    }

    fn walk<B>(&self, k: usize, mut visit: impl FnMut(&[usize], &[u64]) -> ControlFlow<B>) -> ControlFlow<B> {
        let (n, w) = (self.n, self.stride);
        let mut idx: Vec<usize> = (0..k).collect();
        // acc[t*w..(t+1)*w] = XOR of the columns idx[..t]
        let mut acc = vec![0u64; (k + 1) * w];
        self.refill(&idx, &mut acc, 0, k - 1);
        loop {
            let (prefix, last_acc) = acc.split_at_mut(k * w);
            let prefix = &prefix[(k - 1) * w..];
            for last in idx[k - 1]..n {
                idx[k - 1] = last;
                for ((dst, a), c) in last_acc.iter_mut().zip(prefix).zip(self.column(last)) {
                    *dst = a ^ c;
                }
                visit(&idx, last_acc)?;
            }
            let Some(i) = (0..k - 1).rev().find(|&i| idx[i] < n - k + i) else {
                return ControlFlow::Continue(());
            };
            idx[i] += 1;
            for t in i + 1..k {
                idx[t] = idx[t - 1] + 1;
            }
            self.refill(&idx, &mut acc, i, k - 1);
        }
    }

    /// Recomputes prefix XORs `acc[t+1]` for `t` in `from..to`.
    fn refill(&self, idx: &[usize], acc: &mut [u64], from: usize, to: usize) {
        let w = self.stride;
        for t in from..to {
            let col = self.column(idx[t]);
            let (lo, hi) = acc.split_at_mut((t + 1) * w);
            for ((dst, src), c) in hi[..w].iter_mut().zip(&lo[t * w..]).zip(col) {
                *dst = src ^ c;
            }
        }
    }
}

#[inline(always)]
fn xor<const W: usize>(a: &[u64; W], b: &[u64; W]) -> [u64; W] {
    std::array::from_fn(|t| a[t] ^ b[t])
}

/// `sum_{i <= d} C(n, i)`, saturating at `u128::MAX`.
pub fn subset_count(n: usize, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for i in 0..=d.min(n) {
        if i > 0 {
            match term.checked_mul((n - i + 1) as u128) {
                Some(t) => term = t / i as u128,
                None => return u128::MAX,
            }
        }
        total = match total.checked_add(term) {
            Some(t) => t,
            None => return u128::MAX,
        };
    }
    total
}
