use std::collections::BTreeMap;

use super::multipoly::MultiPoly;
use super::InterpolationInstance;
use crate::field::Field;

/// Pascal's triangle reduced into the field, valid in any characteristic.
pub struct Binomials<F: Field> {
    table: Vec<Vec<F::Elem>>,
}

impl<F: Field> Binomials<F> {
    pub fn new(k: &F, max_n: usize) -> Self {
        let mut table: Vec<Vec<F::Elem>> = Vec::with_capacity(max_n + 1);
        for n in 0..=max_n {
            let mut row = vec![k.one(); n + 1];
            for r in 1..n {
                row[r] = k.add(&table[n - 1][r - 1], &table[n - 1][r]);
            }
            table.push(row);
        }
        Binomials { table }
    }

    pub fn get(&self, k: &F, n: usize, r: usize) -> F::Elem {
        if r > n {
            k.zero()
        } else {
            self.table[n][r].clone()
        }
    }

    /// `prod_t binom(j_t, i_t)`, which vanishes unless `i <= j` componentwise.
    pub fn multi(&self, k: &F, j: &[usize], i: &[usize]) -> F::Elem {
        j.iter()
            .zip(i)
            .fold(k.one(), |acc, (&a, &b)| k.mul(&acc, &self.get(k, a, b)))
    }
}

/// All `i` with `i <= j` componentwise.
pub(crate) fn below_or_equal(j: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &jt in j {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=jt).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// Coefficients of `X^h Y^i` in `Q(X + x, Y + y)`, keyed by `(h, i)`.
///
/// With `below = Some(m)` only the terms with `h + |i| < m` are produced.
pub fn shifted_terms<F: Field>(
    k: &F,
    q: &MultiPoly<F>,
    x: &F::Elem,
    ys: &[F::Elem],
    below: Option<usize>,
) -> BTreeMap<(usize, Vec<usize>), F::Elem> {
    let max_exp = q.terms().flat_map(|(j, _)| j.iter().copied()).max().unwrap_or(0);
    let binom = Binomials::new(k, max_exp);
    let mut out: BTreeMap<(usize, Vec<usize>), F::Elem> = BTreeMap::new();
    for (j, qj) in q.terms() {
        let count = below.unwrap_or(qj.len()).min(qj.len());
        let taylor = qj.taylor_coeffs(k, x, count);
        for i in below_or_equal(j) {
            let i_deg: usize = i.iter().sum();
            let h_limit = match below {
                Some(m) if i_deg >= m => continue,
                Some(m) => (m - i_deg).min(count),
                None => count,
            };
            let c = j
                .iter()
                .zip(&i)
                .zip(ys)
                .fold(binom.multi(k, j, &i), |acc, ((&jt, &it), y)| {
                    k.mul(&acc, &k.pow(y, (jt - it) as u128))
                });
            if k.is_zero(&c) {
                continue;
            }
            for (h, t) in taylor.iter().take(h_limit).enumerate() {
                let entry = out.entry((h, i.clone())).or_insert_with(|| k.zero());
                *entry = k.add(entry, &k.mul(t, &c));
            }
        }
    }
    out.retain(|_, v| !k.is_zero(v));
    out
}

/// Full expansion of `Q(X + x, Y + y)`.
pub fn hasse_shift_expand<F: Field>(
    k: &F,
    q: &MultiPoly<F>,
    x: &F::Elem,
    ys: &[F::Elem],
) -> BTreeMap<(usize, Vec<usize>), F::Elem> {
    shifted_terms(k, q, x, ys, None)
}

/// Whether `Q` vanishes to order at least `m` at `(x, y)`.
pub fn vanishes_to_order<F: Field>(k: &F, q: &MultiPoly<F>, x: &F::Elem, ys: &[F::Elem], m: usize) -> bool {
    shifted_terms(k, q, x, ys, Some(m)).is_empty()
}

/// Checks every condition of the interpolation problem directly.
pub fn verify_solution<F: Field>(inst: &InterpolationInstance<F>, q: &MultiPoly<F>) -> bool {
    let k = inst.field();
    if q.is_zero() || q.s() != inst.s() {
        return false;
    }
    if q.y_degree().is_some_and(|d| d > inst.ell()) {
        return false;
    }
    if q.weighted_degree(inst.weights()).is_some_and(|w| w >= inst.b()) {
        return false;
    }
    inst.points()
        .iter()
        .all(|pt| vanishes_to_order(k, q, &pt.x, &pt.ys, pt.mult))
}
