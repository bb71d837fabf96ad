use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::endotransfer::FinAlgebraRep;
use crate::exactla::{Field, SparseMatrix};

/// A word in normal form: no factor `x_n x_{n+1}`. Ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Product in the algebra: `None` when the product vanishes.
    pub fn mul(&self, other: &Word) -> Option<Word> {
        if let (Some(a), Some(&b)) = (self.last(), other.0.first()) {
            if b == a + 1 {
                return None;
            }
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Some(Word(v))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("x{i}")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// The word itself if it has no forbidden factor, `None` (zero) otherwise.
pub fn normal_form(raw: &[u32]) -> Option<Word> {
    raw.windows(2).all(|w| w[1] != w[0] + 1).then(|| Word(raw.to_vec()))
}

/// Number of normal-form words of length `len` over `x₀, …, x_N`.
pub fn count_basis_words(n_gens: u32, len: usize) -> BigUint {
    if len == 0 {
        return BigUint::one();
    }
    let letters = n_gens as usize + 1;
    // ending[i]: words of the current length ending in x_i
    let mut ending = vec![BigUint::one(); letters];
    for _ in 1..len {
        let total: BigUint = ending.iter().sum();
        let next = (0..letters)
            .map(|j| if j == 0 { total.clone() } else { &total - &ending[j - 1] })
            .collect();
        ending = next;
    }
    ending.iter().sum()
}

/// Filters all `(N+1)^len` words through [`normal_form`].
pub fn count_basis_words_brute(n_gens: u32, len: usize) -> u64 {
    let letters = n_gens as u64 + 1;
    let total = letters.pow(len as u32);
    (0..total)
        .filter(|&code| {
            let mut c = code;
            let w: Vec<u32> = (0..len)
                .map(|_| {
                    let d = (c % letters) as u32;
                    c /= letters;
                    d
                })
                .collect();
            normal_form(&w).is_some()
        })
        .count() as u64
}

/// Normal-form words over `x₀, …, x_N` of length at most `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedAlgebra {
    pub n_gens: u32,
    pub max_length: usize,
    by_length: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
}

impl TruncatedAlgebra {
    pub fn new(n_gens: u32, max_length: usize) -> TruncatedAlgebra {
        let mut by_length = vec![vec![Word::empty()]];
        for l in 1..=max_length {
            let next: Vec<Word> = by_length[l - 1]
                .iter()
                .flat_map(|w| (0..=n_gens).filter_map(move |i| w.mul(&Word(vec![i]))))
                .collect();
            by_length.push(next);
        }
        // extension of a lex-sorted list by a trailing letter stays lex-sorted
        let index = by_length
            .iter()
            .map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect())
            .collect();
        TruncatedAlgebra {
            n_gens,
            max_length,
            by_length,
            index,
        }
    }

    pub fn words(&self, len: usize) -> &[Word] {
        self.by_length.get(len).map_or(&[], Vec::as_slice)
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        self.index.get(w.len())?.get(w).copied()
    }

    /// All basis words, in basis order.
    pub fn basis(&self) -> impl Iterator<Item = &Word> {
        self.by_length.iter().flatten()
    }

    pub fn dim(&self) -> usize {
        self.by_length.iter().map(Vec::len).sum()
    }

    fn offset(&self, len: usize) -> usize {
        self.by_length[..len].iter().map(Vec::len).sum()
    }

    /// Global basis index of a word.
    pub fn basis_index(&self, w: &Word) -> Option<usize> {
        Some(self.offset(w.len()) + self.position(w)?)
    }

    /// The product, or `None` when it vanishes or leaves the truncation.
    pub fn mul(&self, u: &Word, v: &Word) -> Option<Word> {
        u.mul(v).filter(|w| w.len() <= self.max_length)
    }

    /// The quotient by all words longer than `L`, as a finite-dimensional algebra.
    pub fn to_algebra(&self, field: Field) -> FinAlgebraRep {
        let n = self.dim();
        let basis: Vec<&Word> = self.basis().collect();
        let left = basis
            .iter()
            .map(|u| {
                let trip = basis.iter().enumerate().filter_map(|(j, v)| {
                    let w = self.mul(u, v)?;
                    Some((self.basis_index(&w).expect("basis word"), j, field.one()))
                });
                SparseMatrix::from_triplets(field, n, n, trip.collect::<Vec<_>>())
            })
            .collect();
        let mut unit = vec![field.zero(); n];
        unit[0] = field.one();
        FinAlgebraRep::from_structure(field, left, unit).expect("monomial quotient is an algebra")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_forms() {
        assert_eq!(normal_form(&[0, 1]), None);
        assert_eq!(normal_form(&[1, 0]), Some(Word(vec![1, 0])));
        assert_eq!(normal_form(&[2, 2, 3]), None);
        assert_eq!(normal_form(&[]), Some(Word::empty()));
    }

    #[test]
    fn counts_match_enumeration() {
        assert_eq!(count_basis_words(3, 0), BigUint::one());
        assert_eq!(count_basis_words(2, 2), BigUint::from(7u32));
        assert_eq!(count_basis_words(1, 2), BigUint::from(3u32));
        for n in 0..=4 {
            for l in 0..=6 {
                assert_eq!(
                    count_basis_words(n, l),
                    BigUint::from(count_basis_words_brute(n, l)),
                    "N={n} ℓ={l}"
                );
            }
        }
    }

    #[test]
    fn truncated_basis_is_sorted_and_counted() {
        let s = TruncatedAlgebra::new(3, 4);
        for l in 0..=4 {
            assert_eq!(BigUint::from(s.words(l).len()), count_basis_words(3, l));
        }
        let all: Vec<&Word> = s.basis().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s.basis_index(&Word(vec![0])), Some(1));
    }

    #[test]
    fn products_respect_relations_and_truncation() {
        let s = TruncatedAlgebra::new(2, 2);
        let (x0, x1) = (Word(vec![0]), Word(vec![1]));
        assert_eq!(s.mul(&x0, &x1), None);
        assert_eq!(s.mul(&x1, &x0), Some(Word(vec![1, 0])));
        assert_eq!(s.mul(&Word(vec![1, 0]), &x0), None);
        assert!(s.to_algebra(Field::prime(2).unwrap()).verify());
    }
}
