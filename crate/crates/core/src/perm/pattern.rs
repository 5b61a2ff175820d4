//! Backtracking pattern matcher.
//!
//! The pattern is compiled once: for every pattern index `k` we record which
//! earlier pattern entries are its nearest neighbours in value. Placing the
//! `k`-th pattern entry then only needs two comparisons against the host
//! values already chosen, which keeps the search prefix-pruned.

use super::Permutation;

#[derive(Debug, Clone)]
pub struct Matcher {
    len: usize,
    below: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
}

impl Matcher {
    pub fn new(pattern: &Permutation) -> Self {
        let vals = pattern.values();
        let len = vals.len();
        let mut below = Vec::with_capacity(len);
        let mut above = Vec::with_capacity(len);
        for k in 0..len {
            let mut lo: Option<usize> = None;
            let mut hi: Option<usize> = None;
            for j in 0..k {
                if vals[j] < vals[k] {
                    if lo.is_none_or(|l| vals[j] > vals[l]) {
                        lo = Some(j);
                    }
                } else if hi.is_none_or(|h| vals[j] < vals[h]) {
                    hi = Some(j);
                }
            }
            below.push(lo);
            above.push(hi);
        }
        Matcher { len, below, above }
    }

    pub fn pattern_len(&self) -> usize {
        self.len
    }

    /// Position-lexicographically least occurrence (0-based positions).
    pub fn find(&self, host: &[u16]) -> Option<Vec<usize>> {
        self.search(host, None)
    }

    /// Least occurrence that uses host position `through` (0-based).
    pub fn find_through(&self, host: &[u16], through: usize) -> Option<Vec<usize>> {
        self.search(host, Some(through))
    }

    pub fn occurs_in(&self, host: &[u16]) -> bool {
        self.search(host, None).is_some()
    }

    pub fn occurs_through(&self, host: &[u16], through: usize) -> bool {
        self.search(host, Some(through)).is_some()
    }

    fn search(&self, host: &[u16], through: Option<usize>) -> Option<Vec<usize>> {
        let m = self.len;
        let n = host.len();
        if m == 0 {
            return Some(Vec::new());
        }
        if m > n || through.is_some_and(|t| t >= n) {
            return None;
        }
        let mut pos = vec![0usize; m];
        let mut k = 0usize;
        let mut next = 0usize;
        loop {
            let mut limit = n - (m - k);
            let mut start = next;
            if let Some(t) = through {
                if k == 0 || pos[k - 1] < t {
                    limit = limit.min(t);
                    if k + 1 == m {
                        start = start.max(t);
                    }
                }
            }
            let lo = self.below[k].map(|j| host[pos[j]]);
            let hi = self.above[k].map(|j| host[pos[j]]);
            let mut found = None;
            let mut j = start;
            while j <= limit {
                let v = host[j];
                if lo.is_none_or(|l| v > l) && hi.is_none_or(|h| v < h) {
                    found = Some(j);
                    break;
                }
                j += 1;
            }
            match found {
                Some(j) => {
                    pos[k] = j;
                    if k + 1 == m {
                        return Some(pos);
                    }
                    k += 1;
                    next = j + 1;
                }
                None => {
                    if k == 0 {
                        return None;
                    }
                    k -= 1;
                    next = pos[k] + 1;
                }
            }
        }
    }
}
