//! The Lambda algebra, used as an independent way to compute `Ext_A(F2, F2)`.
//!
//! `λ_i` has filtration 1 and stem `i`. A monomial `λ_{i1} ... λ_{is}` is
//! admissible when `2 i_k >= i_{k+1}`; these form a basis. Inadmissible pairs
//! are rewritten with
//!
//! ```text
//! λ_i λ_{2i+1+n} = Σ_{j >= 0} binom(n-j-1, j) λ_{i+n-j} λ_{2i+1+j}
//! ```
//!
//! and the differential is the derivation with
//! `d(λ_n) = Σ_{j >= 1} binom(n-j, j) λ_{n-j} λ_{j-1}`.
//! The homology in filtration `s` and stem `n` is `Ext^{s, s+n}`.
//!
//! Nothing here touches the Steenrod algebra code or the shared linear
//! algebra, so agreement with the minimal resolution is a real cross-check.

use std::collections::{BTreeSet, HashMap};

fn binom_odd(n: i64, k: i64) -> bool {
    n >= 0 && k >= 0 && k <= n && (k & !n) == 0
}

fn toggle(set: &mut BTreeSet<Vec<u32>>, w: Vec<u32>) {
    if !set.remove(&w) {
        set.insert(w);
    }
}

#[derive(Default)]
pub struct LambdaAlgebra {
    normal: HashMap<Vec<u32>, BTreeSet<Vec<u32>>>,
}

impl LambdaAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    /// Admissible monomials of length `s` and stem `n`, in lexicographic order.
    pub fn basis(s: u32, n: u32) -> Vec<Vec<u32>> {
        fn rec(s: u32, n: u32, prev: Option<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if s == 0 {
                if n == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let hi = match prev {
                Some(p) => n.min(2 * p),
                None => n,
            };
            for i in 0..=hi {
                cur.push(i);
                rec(s - 1, n - i, Some(i), cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(s, n, None, &mut Vec::new(), &mut out);
        out
    }

    /// Rewrites a word as a sum of admissible monomials.
    pub fn normalize(&mut self, w: &[u32]) -> BTreeSet<Vec<u32>> {
        if let Some(r) = self.normal.get(w) {
            return r.clone();
        }
        let bad = (0..w.len().saturating_sub(1)).find(|&k| 2 * w[k] < w[k + 1]);
        let result = match bad {
            None => BTreeSet::from([w.to_vec()]),
            Some(k) => {
                let i = w[k] as i64;
                let n = w[k + 1] as i64 - 2 * i - 1;
                let mut acc = BTreeSet::new();
                let mut j = 0;
                while 2 * j < n {
                    if binom_odd(n - j - 1, j) {
                        let mut nw = w.to_vec();
                        nw[k] = (i + n - j) as u32;
                        nw[k + 1] = (2 * i + 1 + j) as u32;
                        for term in self.normalize(&nw) {
                            toggle(&mut acc, term);
                        }
                    }
                    j += 1;
                }
                acc
            }
        };
        self.normal.insert(w.to_vec(), result.clone());
        result
    }

    /// The differential of an admissible monomial.
    pub fn differential(&mut self, w: &[u32]) -> BTreeSet<Vec<u32>> {
        let mut acc = BTreeSet::new();
        for (pos, &m) in w.iter().enumerate() {
            let m = m as i64;
            let mut j = 1;
            while 2 * j <= m {
                if binom_odd(m - j, j) {
                    let mut nw = Vec::with_capacity(w.len() + 1);
                    nw.extend_from_slice(&w[..pos]);
                    nw.push((m - j) as u32);
                    nw.push((j - 1) as u32);
                    nw.extend_from_slice(&w[pos + 1..]);
                    for term in self.normalize(&nw) {
                        toggle(&mut acc, term);
                    }
                }
                j += 1;
            }
        }
        acc
    }

    /// Rank of `d` from filtration `s`, stem `n` to filtration `s+1`, stem `n-1`.
    fn rank_of_d(&mut self, s: u32, n: u32) -> usize {
        if n == 0 {
            return 0;
        }
        let target: HashMap<Vec<u32>, usize> = Self::basis(s + 1, n - 1)
            .into_iter()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let words = target.len().div_ceil(64);
        let rows: Vec<Vec<u64>> = Self::basis(s, n)
            .iter()
            .map(|w| {
                let mut row = vec![0u64; words];
                for term in self.differential(w) {
                    let i = target[&term];
                    row[i / 64] ^= 1 << (i % 64);
                }
                row
            })
            .collect();
        gf2_rank(rows)
    }

    /// `dim Ext^{s, s+n}(F2, F2)`.
    pub fn ext_dim(&mut self, s: u32, n: u32) -> usize {
        let dim = Self::basis(s, n).len();
        let out = self.rank_of_d(s, n);
        let incoming = if s == 0 { 0 } else { self.rank_of_d(s - 1, n + 1) };
        dim - out - incoming
    }
}

fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let ncols = rows.first().map_or(0, |r| r.len() * 64);
    for col in 0..ncols {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}
