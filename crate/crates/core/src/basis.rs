//! Deterministic enumeration of monomials (equivalently multisets) and subsets.
//!
//! Monomials of one degree are listed in lex order on exponent vectors, largest first:
//! `x1^2, x1 x2, x2^2`. Subsets of one size are listed in colex order on sorted index
//! tuples: `{0,1}, {0,2}, {1,2}, {0,3}, ...`.

use std::collections::HashMap;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Number of monomials of degree `t` in `m` variables; zero for negative `t`.
pub fn monomial_count(m: usize, t: i64) -> usize {
    if t < 0 {
        return 0;
    }
    if m == 0 {
        return usize::from(t == 0);
    }
    binomial(t as u64 + m as u64 - 1, t as u64) as usize
}

/// Exponent vectors of total degree `t` in `m` variables, lex-descending.
pub fn monomials(m: usize, t: i64) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(monomial_count(m, t));
    if t < 0 {
        return out;
    }
    if m == 0 {
        if t == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; m];
    fill(&mut cur, 0, t as u32, &mut out);
    out
}

fn fill(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(cur, i + 1, left - e, out);
    }
    cur[i] = 0;
}

/// Monomials of one degree with a reverse index.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub degree: i64,
    pub list: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(m: usize, t: i64) -> MonomialBasis {
        let list = monomials(m, t);
        let index = list.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        MonomialBasis { degree: t, list, index }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// Renders an exponent vector with the given variable names, e.g. `x1^2*x3`, or `1`.
pub fn monomial_label(e: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(k, _)| **k > 0)
        .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// `n`-element subsets of `0..a` in colex order.
pub fn subsets(a: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n > a {
        return out;
    }
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // colex successor: bump the first entry that can move without colliding
        let mut i = 0;
        while i < n {
            let limit = if i + 1 < n { cur[i + 1] } else { a };
            if cur[i] + 1 < limit {
                break;
            }
            i += 1;
        }
        if i == n {
            return out;
        }
        cur[i] += 1;
        for (j, c) in cur.iter_mut().enumerate().take(i) {
            *c = j;
        }
    }
}

/// Subsets of one size with a reverse index.
#[derive(Clone, Debug)]
pub struct SubsetBasis {
    pub list: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl SubsetBasis {
    pub fn new(a: usize, n: usize) -> SubsetBasis {
        let list = subsets(a, n);
        let index = list.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        SubsetBasis { list, index }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }
}

pub fn subset_label(s: &[usize], prefix: &str) -> String {
    if s.is_empty() {
        return format!("{prefix}∅");
    }
    let idx: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{prefix}{}", idx.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_count(2, 3), 4);
        assert_eq!(monomial_count(5, 0), 1);
        assert_eq!(monomial_count(3, 2), 6);
        assert_eq!(monomial_count(3, -1), 0);
        for m in 1..=6 {
            for t in 0..=8 {
                assert_eq!(monomials(m, t).len(), monomial_count(m, t));
            }
        }
    }

    #[test]
    fn monomial_order_is_lex_descending() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let ms = monomials(3, 3);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn subsets_in_colex_order() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(4, 2)[3], vec![0, 3]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
        for a in 0..=6 {
            for n in 0..=a {
                assert_eq!(subsets(a, n).len() as u64, binomial(a as u64, n as u64));
            }
        }
    }

    #[test]
    fn labels() {
        let names: Vec<String> = ["x1", "x2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(monomial_label(&[2, 1], &names), "x1^2*x2");
        assert_eq!(monomial_label(&[0, 0], &names), "1");
        assert_eq!(subset_label(&[0, 2], "e"), "e1,3");
    }
}
