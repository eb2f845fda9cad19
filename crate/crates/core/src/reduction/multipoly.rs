use std::collections::BTreeMap;

use crate::field::Field;
use crate::poly::Poly;

/// `Q(X, Y_1..Y_s) = sum_j Q_j(X) Y^j`, stored sparsely by exponent vector.
pub struct MultiPoly<F: Field> {
    s: usize,
    terms: BTreeMap<Vec<usize>, Poly<F>>,
}

impl<F: Field> Clone for MultiPoly<F> {
    fn clone(&self) -> Self {
        MultiPoly {
            s: self.s,
            terms: self.terms.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s && self.terms == other.terms
    }
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(s: usize) -> Self {
        MultiPoly {
            s,
            terms: BTreeMap::new(),
        }
    }

    /// A polynomial in `X` only.
    pub fn from_univariate(s: usize, q: Poly<F>) -> Self {
        let mut out = MultiPoly::zero(s);
        out.set(vec![0; s], q);
        out
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Sets the coefficient of `Y^j`; zero polynomials are not stored.
    pub fn set(&mut self, j: Vec<usize>, q: Poly<F>) {
        assert_eq!(j.len(), self.s, "exponent vector length");
        if q.is_zero() {
            self.terms.remove(&j);
        } else {
            self.terms.insert(j, q);
        }
    }

    pub fn get(&self, j: &[usize]) -> Option<&Poly<F>> {
        self.terms.get(j)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly<F>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree in the `Y` variables; `None` for the zero polynomial.
    pub fn y_degree(&self) -> Option<usize> {
        self.terms.keys().map(|j| j.iter().sum()).max()
    }

    /// `max_j (deg Q_j + j . weights)`; `None` for the zero polynomial.
    pub fn weighted_degree(&self, weights: &[i64]) -> Option<i64> {
        self.terms
            .iter()
            .map(|(j, q)| q.len() as i64 - 1 + dot(j, weights))
            .max()
    }

    /// Multiplies every coefficient by a polynomial in `X`.
    pub fn mul_univariate(&self, k: &F, p: &Poly<F>) -> Self {
        let mut out = MultiPoly::zero(self.s);
        for (j, q) in &self.terms {
            out.set(j.clone(), q.mul(k, p));
        }
        out
    }

    pub fn eval(&self, k: &F, x: &F::Elem, ys: &[F::Elem]) -> F::Elem {
        self.terms.iter().fold(k.zero(), |acc, (j, q)| {
            let mono = j
                .iter()
                .zip(ys)
                .fold(q.eval(k, x), |m, (&e, y)| k.mul(&m, &k.pow(y, e as u128)));
            k.add(&acc, &mono)
        })
    }
}

pub(crate) fn dot(j: &[usize], weights: &[i64]) -> i64 {
    j.iter().zip(weights).map(|(&a, &w)| a as i64 * w).sum()
}
