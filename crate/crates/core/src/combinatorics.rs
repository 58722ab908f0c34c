//! Counting helpers: set and integer partitions, Eulerian numbers, pairings.

use alloc::vec;
use alloc::vec::Vec;

pub fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Eulerian number `<n, k>`; zero outside `0 <= k < n`, except `<0,0> = 1`.
pub fn eulerian(n: u32, k: u32) -> u128 {
    let n = n as usize;
    let k = k as usize;
    let mut row = vec![1u128];
    for m in 1..=n {
        let mut next = vec![0u128; m];
        for (j, slot) in next.iter_mut().enumerate() {
            let from_left = if j >= 1 {
                (m - j) as u128 * row.get(j - 1).copied().unwrap_or(0)
            } else {
                0
            };
            let from_same = (j + 1) as u128 * row.get(j).copied().unwrap_or(0);
            *slot = from_left + from_same;
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

/// Non-decreasing index sequences of length `k` over `0..n`.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    if n == 0 {
        return out;
    }
    let mut cur = vec![0usize; k];
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        let v = cur[i - 1] + 1;
        for c in &mut cur[i - 1..] {
            *c = v;
        }
    }
}

/// All set partitions of `0..n` as lists of blocks, via restricted growth
/// strings. Blocks are sorted by smallest element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().copied().max().unwrap() + 1;
        let mut p = vec![Vec::new(); blocks];
        for (i, &b) in rgs.iter().enumerate() {
            p[b].push(i);
        }
        out.push(p);
        // advance: rightmost position that may grow
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap();
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in &mut rgs[i + 1..] {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

pub fn bell(n: usize) -> usize {
    set_partitions(n).len()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Perfect matchings of `0..k` as lists of index pairs; empty for odd `k`.
pub fn perfect_matchings(k: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(rest: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = rest[0];
        for j in 1..rest.len() {
            acc.push((first, rest[j]));
            let remaining: Vec<usize> = rest[1..]
                .iter()
                .copied()
                .filter(|&x| x != rest[j])
                .collect();
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if k % 2 == 1 {
        return out;
    }
    let idx: Vec<usize> = (0..k).collect();
    go(&idx, &mut Vec::new(), &mut out);
    out
}

pub fn double_factorial(n: i64) -> u128 {
    let mut acc = 1u128;
    let mut m = n;
    while m > 1 {
        acc *= m as u128;
        m -= 2;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionRecord {
    /// Parts in non-increasing order.
    pub parts: Vec<usize>,
    /// `multiplicity[k]` is the number of parts equal to `k`.
    pub multiplicity: Vec<usize>,
    pub m1: u128,
    pub m2: u128,
    pub m3: u128,
}

impl PartitionRecord {
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of distinct products contributed by this class.
    pub fn term_count(&self) -> u128 {
        self.m1 * self.m3
    }

    /// Coefficient shared by every product in this class.
    pub fn coefficient(&self) -> u128 {
        self.m2 * factorial(self.n() as u32) / (self.m1 * self.m3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("partition size {0} out of range 1..=12")]
pub struct PartitionRangeError(pub usize);

/// Integer partitions of `n` in reverse lexicographic order (`[n]` first).
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(acc.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            acc.push(p);
            go(rem - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn partitions_with_multiplicities(
    n: usize,
) -> Result<Vec<PartitionRecord>, PartitionRangeError> {
    if !(1..=12).contains(&n) {
        return Err(PartitionRangeError(n));
    }
    let nf = factorial(n as u32);
    Ok(integer_partitions(n)
        .into_iter()
        .map(|parts| {
            let mut multiplicity = vec![0usize; n + 1];
            for &p in &parts {
                multiplicity[p] += 1;
            }
            let (mut d1, mut d2, mut d3) = (1u128, 1u128, 1u128);
            for (k, &a) in multiplicity.iter().enumerate().skip(1) {
                let kf = factorial(k as u32);
                let af = factorial(a as u32);
                d1 *= kf.pow(a as u32);
                d2 *= (k as u128).pow(a as u32) * af;
                d3 *= kf.pow(a as u32) * af;
            }
            PartitionRecord {
                parts,
                multiplicity,
                m1: nf / d1,
                m2: nf / d2,
                m3: nf / d3,
            }
        })
        .collect())
}
