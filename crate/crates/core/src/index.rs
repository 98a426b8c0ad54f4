//! Multi-index bookkeeping: binomials and lexicographic subset tables.
//!
//! Subsets of {1..n} are stored as bitmasks (bit `i-1` for index `i`). Within a
//! fixed size they are ranked in lexicographic order of their increasing tuples.

use std::sync::OnceLock;

/// Largest complex dimension with precomputed subset tables.
pub const MAX_N: usize = 8;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Binomial with the convention C(n, k) = 0 for k < 0.
pub fn binomial_i(n: usize, k: isize) -> usize {
    if k < 0 {
        0
    } else {
        binomial(n, k as usize)
    }
}

#[derive(Debug)]
pub struct SubsetTable {
    by_size: Vec<Vec<u32>>,
    rank: Vec<usize>,
}

impl SubsetTable {
    fn build(n: usize) -> Self {
        let mut by_size = vec![Vec::new(); n + 1];
        for size in 0..=n {
            let mut cur = Vec::with_capacity(size);
            lex_subsets(n, size, 0, &mut cur, &mut by_size[size]);
        }
        let mut rank = vec![usize::MAX; 1 << n];
        for masks in &by_size {
            for (r, &m) in masks.iter().enumerate() {
                rank[m as usize] = r;
            }
        }
        Self { by_size, rank }
    }

    /// Masks of the given size in lexicographic order.
    pub fn of_size(&self, size: usize) -> &[u32] {
        &self.by_size[size]
    }

    pub fn rank(&self, mask: u32) -> usize {
        self.rank[mask as usize]
    }
}

fn lex_subsets(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<u32>) {
    if cur.len() == size {
        out.push(cur.iter().fold(0u32, |m, &i| m | (1 << i)));
        return;
    }
    for i in start..n {
        if n - i < size - cur.len() {
            break;
        }
        cur.push(i);
        lex_subsets(n, size, i + 1, cur, out);
        cur.pop();
    }
}

/// Shared subset table for `n <= MAX_N`.
pub fn subsets(n: usize) -> &'static SubsetTable {
    static TABLES: OnceLock<Vec<SubsetTable>> = OnceLock::new();
    &TABLES.get_or_init(|| (0..=MAX_N).map(SubsetTable::build).collect())[n]
}

/// Zero-based members of a mask, ascending.
pub fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// Sign of the shuffle that sorts the concatenation `A ++ B` of two disjoint
/// increasing index lists: (-1)^{#{(a,b) : a ∈ A, b ∈ B, a > b}}.
pub fn merge_sign(a: u32, b: u32) -> f64 {
    let mut inversions = 0u32;
    for j in members(b) {
        inversions += (a >> (j + 1)).count_ones();
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Sign of moving the factor at sorted position of `from` to the sorted
/// position of `to` inside `mask` (with `from` in the mask, `to` not):
/// (-1)^{# members of mask∖{from} strictly between from and to}.
pub fn substitution_sign(mask: u32, from: usize, to: usize) -> f64 {
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
    let between = if hi - lo <= 1 {
        0
    } else {
        let window = ((1u32 << (hi - lo - 1)) - 1) << (lo + 1);
        (mask & window).count_ones()
    };
    if between % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn pair_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Index of the unordered pair {i, k} (zero-based) in the lexicographic list
/// (0,0), (0,1), …, (0,n-1), (1,1), …
pub fn pair_index(n: usize, i: usize, k: usize) -> usize {
    let (a, b) = if i <= k { (i, k) } else { (k, i) };
    a * n - a * (a + 1) / 2 + b
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(n: usize, idx: usize) -> (usize, usize) {
    let mut a = 0;
    let mut start = 0;
    while start + (n - a) <= idx {
        start += n - a;
        a += 1;
    }
    (a, a + idx - start)
}
