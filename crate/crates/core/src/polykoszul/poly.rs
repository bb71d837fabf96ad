use std::collections::BTreeMap;

use crate::exactla::{Field, FieldScalar};

/// Sparse polynomial: exponent vector → nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldScalar>,
}

/// A polynomial whose terms do not share one degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MixedDegrees;

impl Poly {
    pub fn zero(field: Field, nvars: usize) -> Poly {
        Poly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, nvars: usize, c: FieldScalar) -> Poly {
        Poly::monomial(field, vec![0; nvars], c)
    }

    pub fn monomial(field: Field, exponents: Vec<u32>, c: FieldScalar) -> Poly {
        let nvars = exponents.len();
        let mut p = Poly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    /// The variable with index `i`.
    pub fn var(field: Field, nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(field, e, field.one())
    }

    pub fn from_terms(field: Field, nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, FieldScalar)>) -> Poly {
        let mut p = Poly::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: FieldScalar) {
        let v = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, FieldScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms; `None` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<i64>, MixedDegrees> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d: i64 = e.iter().map(|&x| x as i64).sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Err(MixedDegrees),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn scale(&self, c: &FieldScalar) -> Poly {
        Poly::from_terms(
            self.field,
            self.nvars,
            self.terms.iter().map(|(e, v)| (e.clone(), v * c)),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut p = Poly::zero(self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    /// Same polynomial viewed in a ring with more variables; `map[i]` is the new index of
    /// variable `i`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        Poly::from_terms(
            self.field,
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut f = vec![0; nvars];
                for (i, k) in e.iter().enumerate() {
                    f[map[i]] = *k;
                }
                (f, c.clone())
            }),
        )
    }
}

/// Matrix with polynomial entries; column `c` is the image of source generator `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        assert!(r < self.rows && c < self.cols);
        if p.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), p);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Poly> {
        self.entries.get(&(r, c))
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), p)| ((c, r), p.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &PolyMatrix, field: Field, nvars: usize) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = PolyMatrix::zeros(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            for (&(k2, c), b) in other.entries.range((k, 0)..(k + 1, 0)) {
                debug_assert_eq!(k, k2);
                let cur = out.entries.remove(&(r, c)).unwrap_or_else(|| Poly::zero(field, nvars));
                out.set(r, c, cur.add(&a.mul(b)));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let f = Field::Prime(101);
        let x = Poly::var(f, 2, 0);
        let y = Poly::var(f, 2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.terms().len(), 3);
        assert_eq!(sq.terms()[&vec![1, 1]], f.from_i64(2));
        assert_eq!(sq.homogeneous_degree(), Ok(Some(2)));
        assert!(sq.add(&x).homogeneous_degree().is_err());
        assert!(x.add(&x.scale(&f.from_i64(-1))).is_zero());
    }

    #[test]
    fn embedding_moves_exponents() {
        let f = Field::Rational;
        let x = Poly::var(f, 1, 0).embed(3, &[2]);
        assert_eq!(x, Poly::var(f, 3, 2));
    }
}
