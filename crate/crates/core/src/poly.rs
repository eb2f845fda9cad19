//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored low degree first with no trailing zeros, so the
//! zero polynomial has an empty coefficient vector and equality is
//! structural.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::Field;

/// Operand length below which multiplication falls back to the schoolbook method.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// Quotient length above which division goes through a power-series inverse.
const FAST_DIVISION_THRESHOLD: usize = 64;

pub struct Poly<F: Field> {
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Clone for Poly<F> {
    fn clone(&self) -> Self {
        Poly {
            coeffs: self.coeffs.clone(),
        }
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> Hash for Poly<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state)
    }
}

fn trim<F: Field>(k: &F, v: &mut Vec<F::Elem>) {
    while v.last().is_some_and(|c| k.is_zero(c)) {
        v.pop();
    }
}

fn add_into<F: Field>(k: &F, acc: &mut [F::Elem], v: &[F::Elem]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = k.add(a, b);
    }
}

fn sub_into<F: Field>(k: &F, acc: &mut [F::Elem], v: &[F::Elem]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = k.sub(a, b);
    }
}

fn schoolbook<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    out
}

fn padded_sum<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![k.zero(); a.len().max(b.len())];
    add_into(k, &mut out, a);
    add_into(k, &mut out, b);
    out
}

fn karatsuba<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem], threshold: usize) -> Vec<F::Elem> {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return Vec::new();
    }
    if n.min(m) <= threshold.max(1) {
        return schoolbook(k, a, b);
    }
    let (long, short) = if n >= m { (a, b) } else { (b, a) };
    if long.len() >= 2 * short.len() {
        let mut out = vec![k.zero(); n + m - 1];
        for (c, chunk) in long.chunks(short.len()).enumerate() {
            let part = karatsuba(k, chunk, short, threshold);
            add_into(k, &mut out[c * short.len()..], &part);
        }
        return out;
    }
    let h = n.max(m) / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = karatsuba(k, a0, b0, threshold);
    let z2 = karatsuba(k, a1, b1, threshold);
    let mut z1 = karatsuba(k, &padded_sum(k, a0, a1), &padded_sum(k, b0, b1), threshold);
    sub_into(k, &mut z1, &z0);
    sub_into(k, &mut z1, &z2);
    let mut out = vec![k.zero(); n + m - 1];
    add_into(k, &mut out, &z0);
    add_into(k, &mut out[h..], &z1);
    add_into(k, &mut out[2 * h..], &z2);
    out
}

/// Product of two coefficient slices; the result has length `a.len() + b.len() - 1`
/// (or zero when either is empty) and is not normalized.
pub fn mul_slices<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    karatsuba(k, a, b, KARATSUBA_THRESHOLD)
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(k: &F) -> Self {
        Poly::constant(k, k.one())
    }

    pub fn constant(k: &F, c: F::Elem) -> Self {
        Poly::from_coeffs(k, vec![c])
    }

    /// `c * X^deg`.
    pub fn monomial(k: &F, c: F::Elem, deg: usize) -> Self {
        let mut v = vec![k.zero(); deg + 1];
        v[deg] = c;
        Poly::from_coeffs(k, v)
    }

    pub fn x(k: &F) -> Self {
        Poly::monomial(k, k.one(), 1)
    }

    /// `X - a`.
    pub fn linear_root(k: &F, a: &F::Elem) -> Self {
        Poly {
            coeffs: vec![k.neg(a), k.one()],
        }
    }

    pub fn from_coeffs(k: &F, mut coeffs: Vec<F::Elem>) -> Self {
        trim(k, &mut coeffs);
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    /// Coefficient vector padded or truncated to exactly `len` entries.
    pub fn to_vec_len(&self, k: &F, len: usize) -> Vec<F::Elem> {
        let mut v: Vec<F::Elem> = self.coeffs.iter().take(len).cloned().collect();
        v.resize(len, k.zero());
        v
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of stored coefficients, i.e. degree plus one (zero for the zero polynomial).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: &F, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, k: &F) -> bool {
        self.leading().is_some_and(|c| k.is_one(c))
    }

    pub fn add(&self, k: &F, other: &Self) -> Self {
        Poly::from_coeffs(k, padded_sum(k, &self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, k: &F, other: &Self) -> Self {
        let mut out = vec![k.zero(); self.len().max(other.len())];
        add_into(k, &mut out, &self.coeffs);
        sub_into(k, &mut out, &other.coeffs);
        Poly::from_coeffs(k, out)
    }

    pub fn neg(&self, k: &F) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| k.neg(c)).collect(),
        }
    }

    pub fn scale(&self, k: &F, c: &F::Elem) -> Self {
        Poly::from_coeffs(k, self.coeffs.iter().map(|x| k.mul(x, c)).collect())
    }

    pub fn mul(&self, k: &F, other: &Self) -> Self {
        Poly::from_coeffs(k, mul_slices(k, &self.coeffs, &other.coeffs))
    }

    /// Multiplication with an explicit schoolbook cutoff.
    pub fn mul_with_threshold(&self, k: &F, other: &Self, threshold: usize) -> Self {
        Poly::from_coeffs(k, karatsuba(k, &self.coeffs, &other.coeffs, threshold))
    }

    /// Product truncated modulo `X^n`.
    pub fn mul_trunc(&self, k: &F, other: &Self, n: usize) -> Self {
        let a = &self.coeffs[..self.len().min(n)];
        let b = &other.coeffs[..other.len().min(n)];
        let mut v = mul_slices(k, a, b);
        v.truncate(n);
        Poly::from_coeffs(k, v)
    }

    /// Remainder modulo `X^n`.
    pub fn truncate(&self, k: &F, n: usize) -> Self {
        Poly::from_coeffs(k, self.coeffs.iter().take(n).cloned().collect())
    }

    /// Multiplies by `X^s`.
    pub fn shift(&self, k: &F, s: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![k.zero(); s];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn pow(&self, k: &F, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(k);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(k, &base);
            }
        }
        acc
    }

    pub fn eval(&self, k: &F, x: &F::Elem) -> F::Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
    }

    /// `X^n * self(1/X)`; requires `n >= deg self`.
    pub fn reverse(&self, k: &F, n: usize) -> Result<Self> {
        match self.degree() {
            None => Ok(Poly::zero()),
            Some(d) if d > n => Err(Error::BadLength { len: n, degree: d }),
            Some(_) => {
                let mut v = self.to_vec_len(k, n + 1);
                v.reverse();
                Ok(Poly::from_coeffs(k, v))
            }
        }
    }

    /// Inverse modulo `X^prec` by Newton iteration.
    pub fn series_inv(&self, k: &F, prec: usize) -> Result<Self> {
        let c0 = self.coeffs.first().ok_or(Error::NotInvertible)?;
        if k.is_zero(c0) {
            return Err(Error::NotInvertible);
        }
        if prec == 0 {
            return Ok(Poly::zero());
        }
        let mut g = Poly::constant(k, k.inv(c0)?);
        let mut len = 1;
        let two = Poly::constant(k, k.from_u64(2));
        while len < prec {
            len = (2 * len).min(prec);
            let fg = self.mul_trunc(k, &g, len);
            g = g.mul_trunc(k, &two.sub(k, &fg), len);
        }
        Ok(g)
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, k: &F, divisor: &Self) -> Result<(Self, Self)> {
        let m = divisor.degree().ok_or(Error::DivisionByZero)?;
        let n = match self.degree() {
            Some(n) if n >= m => n,
            _ => return Ok((Poly::zero(), self.clone())),
        };
        let qlen = n - m + 1;
        if qlen > FAST_DIVISION_THRESHOLD && m > FAST_DIVISION_THRESHOLD {
            let rev_a = self.reverse(k, n)?;
            let rev_b = divisor.reverse(k, m)?;
            let rev_q = rev_a.mul_trunc(k, &rev_b.series_inv(k, qlen)?, qlen);
            let q = rev_q.reverse(k, qlen - 1)?;
            let r = self.sub(k, &q.mul(k, divisor)).truncate(k, m);
            return Ok((q, r));
        }
        let lead_inv = k.inv(&divisor.coeffs[m])?;
        let mut rem = self.coeffs.clone();
        let mut q = vec![k.zero(); qlen];
        for i in (0..qlen).rev() {
            let c = k.mul(&rem[i + m], &lead_inv);
            if k.is_zero(&c) {
                continue;
            }
            for (t, d) in divisor.coeffs.iter().enumerate() {
                rem[i + t] = k.sub(&rem[i + t], &k.mul(&c, d));
            }
            q[i] = c;
        }
        rem.truncate(m);
        Ok((Poly::from_coeffs(k, q), Poly::from_coeffs(k, rem)))
    }

    pub fn rem(&self, k: &F, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(k, divisor)?.1)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, k: &F, mut e: u128, modulus: &Self) -> Result<Self> {
        let mut base = self.rem(k, modulus)?;
        let mut acc = Poly::one(k).rem(k, modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &base).rem(k, modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(k, &base).rem(k, modulus)?;
            }
        }
        Ok(acc)
    }

    /// Returns `(g, s, t)` with `s * self + t * other = g = gcd(self, other)`.
    pub fn xgcd(&self, k: &F, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(k), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(k, &r1).expect("nonzero divisor");
            let s2 = s0.sub(k, &q.mul(k, &s1));
            let t2 = t0.sub(k, &q.mul(k, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        (r0, s0, t0)
    }

    /// Rabin's irreducibility test over a finite field.
    pub fn is_irreducible(&self, k: &F) -> bool {
        let d = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        let q = k.order();
        let x = Poly::x(k);
        // frob[i] = X^(q^i) mod self
        let mut frob = vec![x.clone()];
        for i in 0..d {
            let next = frob[i].pow_mod(k, q, self).expect("nonzero modulus");
            frob.push(next);
        }
        if frob[d] != x.rem(k, self).expect("nonzero modulus") {
            return false;
        }
        prime_factors(d).into_iter().all(|r| {
            let h = frob[d / r].sub(k, &x);
            let (g, _, _) = self.xgcd(k, &h);
            g.degree() == Some(0)
        })
    }

    /// The first `count` coefficients of `self(X + a)`, by repeated synthetic
    /// division by `X - a`.
    pub fn taylor_coeffs(&self, k: &F, a: &F::Elem, count: usize) -> Vec<F::Elem> {
        let mut cur = self.coeffs.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            if cur.is_empty() {
                out.push(k.zero());
                continue;
            }
            // Horner pass: quotient overwrites cur[1..], remainder lands in cur[0].
            for i in (0..cur.len() - 1).rev() {
                let carry = k.mul(&cur[i + 1], a);
                cur[i] = k.add(&cur[i], &carry);
            }
            out.push(cur.remove(0));
        }
        out
    }

    pub fn map_field<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> G::Elem) -> Poly<G> {
        Poly::from_coeffs(target, self.coeffs.iter().map(f).collect())
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Balanced product of a list of polynomials.
pub fn product_tree<F: Field>(k: &F, mut layer: Vec<Poly<F>>) -> Poly<F> {
    if layer.is_empty() {
        return Poly::one(k);
    }
    while layer.len() > 1 {
        layer = layer
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a.mul(k, b),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    layer.pop().expect("nonempty")
}

/// `prod_r (X - xs[r])^exps[r]`.
pub fn weighted_product<F: Field>(k: &F, xs: &[F::Elem], exps: &[usize]) -> Poly<F> {
    let leaves = xs
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(x, &e)| Poly::linear_root(k, x).pow(k, e as u64))
        .collect();
    product_tree(k, leaves)
}

/// The unique polynomial of degree `< xs.len()` through the given points.
pub fn lagrange_interp<F: Field>(k: &F, xs: &[F::Elem], ys: &[F::Elem]) -> Result<Poly<F>> {
    if xs.len() != ys.len() {
        return Err(Error::BadLength {
            len: ys.len(),
            degree: xs.len(),
        });
    }
    let mut seen = HashSet::new();
    if !xs.iter().all(|x| seen.insert(x)) {
        return Err(Error::DuplicateNode);
    }
    let n = xs.len();
    let master = weighted_product(k, xs, &vec![1; n]);
    let mut acc = vec![k.zero(); n];
    for (x, y) in xs.iter().zip(ys) {
        if k.is_zero(y) {
            continue;
        }
        let (quot, _) = master.divrem(k, &Poly::linear_root(k, x))?;
        let w = k.div(y, &quot.eval(k, x))?;
        for (a, c) in acc.iter_mut().zip(quot.coeffs()) {
            *a = k.add(a, &k.mul(&w, c));
        }
    }
    Ok(Poly::from_coeffs(k, acc))
}

/// First `count` terms of the linear recurrence with monic characteristic
/// polynomial `charpoly` (degree `m`) and initial terms `init` (length `m`):
/// `b[t+m] + sum_j p_j b[t+j] = 0`.
///
/// The generating series of the sequence is `N / rev(charpoly)` with
/// `deg N < m`, so the extension is one power-series division.
pub fn extend_recurrence<F: Field>(k: &F, init: &[F::Elem], charpoly: &Poly<F>, count: usize) -> Result<Vec<F::Elem>> {
    let m = init.len();
    if charpoly.degree() != Some(m) || !charpoly.is_monic(k) {
        return Err(Error::BadLength {
            len: m,
            degree: charpoly.degree().unwrap_or(0),
        });
    }
    if count <= m {
        return Ok(init[..count].to_vec());
    }
    let rev = charpoly.reverse(k, m)?;
    let numer = Poly::from_coeffs(k, init.to_vec()).mul_trunc(k, &rev, m);
    let series = numer.mul_trunc(k, &rev.series_inv(k, count)?, count);
    Ok(series.to_vec_len(k, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn p(k: &PrimeField, c: &[u64]) -> Poly<PrimeField> {
        Poly::from_coeffs(k, c.to_vec())
    }

    #[test]
    fn square_in_characteristic_two() {
        let k = fp(2);
        let a = p(&k, &[1, 1]);
        assert_eq!(a.mul(&k, &a), p(&k, &[1, 0, 1]));
    }

    #[test]
    fn divrem_exact() {
        let k = fp(13);
        let (q, r) = p(&k, &[0, 0, 0, 1]).divrem(&k, &p(&k, &[0, 0, 1])).unwrap();
        assert_eq!(q, p(&k, &[0, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&k, &[1]).divrem(&k, &Poly::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn geometric_series_inverse() {
        let k = fp(13);
        let inv = p(&k, &[1, 12]).series_inv(&k, 4).unwrap();
        assert_eq!(inv, p(&k, &[1, 1, 1, 1]));
        assert_eq!(p(&k, &[0, 1]).series_inv(&k, 4), Err(Error::NotInvertible));
    }

    #[test]
    fn interpolation_through_three_points() {
        let k = fp(13);
        let f = lagrange_interp(&k, &[0, 1, 2], &[1, 2, 5]).unwrap();
        assert_eq!(f, p(&k, &[1, 0, 1]));
        assert_eq!(lagrange_interp(&k, &[1, 1], &[0, 1]), Err(Error::DuplicateNode));
    }

    #[test]
    fn weighted_product_of_roots() {
        let k = fp(13);
        let g = weighted_product(&k, &[0, 1, 2], &[1, 1, 1]);
        assert_eq!(g, p(&k, &[0, 2, 10, 1]));
        let g2 = weighted_product(&k, &[0, 1], &[2, 0]);
        assert_eq!(g2, p(&k, &[0, 0, 1]));
    }

    #[test]
    fn reversal() {
        let k = fp(13);
        let a = p(&k, &[5, 3, 1]);
        assert_eq!(a.reverse(&k, 2).unwrap(), p(&k, &[1, 3, 5]));
        assert_eq!(a.reverse(&k, 4).unwrap(), p(&k, &[0, 0, 1, 3, 5]));
        assert_eq!(a.reverse(&k, 1), Err(Error::BadLength { len: 1, degree: 2 }));
    }

    #[test]
    fn period_two_recurrence() {
        let k = fp(13);
        let seq = extend_recurrence(&k, &[0, 1], &p(&k, &[12, 0, 1]), 6).unwrap();
        assert_eq!(seq, vec![0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn taylor_shift() {
        let k = fp(13);
        // (X+1)^2 = X^2 + 2X + 1
        let c = p(&k, &[0, 0, 1]).taylor_coeffs(&k, &1, 4);
        assert_eq!(c, vec![1, 2, 1, 0]);
    }

    fn naive_recurrence(k: &PrimeField, init: &[u64], cp: &[u64], count: usize) -> Vec<u64> {
        let m = init.len();
        let mut b = init.to_vec();
        while b.len() < count {
            let t = b.len() - m;
            let mut s = 0;
            for j in 0..m {
                s = k.add(&s, &k.mul(&cp[j], &b[t + j]));
            }
            b.push(k.neg(&s));
        }
        b.truncate(count);
        b
    }

    fn arb_poly(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(0u64..65537, 0..max_len)
    }

    proptest! {
        #[test]
        fn karatsuba_matches_schoolbook(a in arb_poly(150), b in arb_poly(150)) {
            let k = fp(65537);
            let (pa, pb) = (p(&k, &a), p(&k, &b));
            let fast = pa.mul(&k, &pb);
            let slow = pa.mul_with_threshold(&k, &pb, usize::MAX);
            prop_assert_eq!(&fast, &slow);
            prop_assert_eq!(pa.mul_with_threshold(&k, &pb, 2), slow);
        }

        #[test]
        fn divrem_identity(a in arb_poly(300), b in arb_poly(150)) {
            let k = fp(65537);
            let (pa, pb) = (p(&k, &a), p(&k, &b));
            prop_assume!(!pb.is_zero());
            let (q, r) = pa.divrem(&k, &pb).unwrap();
            prop_assert!(r.len() < pb.len());
            prop_assert_eq!(q.mul(&k, &pb).add(&k, &r), pa);
        }

        #[test]
        fn series_inverse_identity(a in arb_poly(120), n in 1usize..200) {
            let k = fp(65537);
            let pa = p(&k, &a);
            prop_assume!(a.first().is_some_and(|&c| c != 0));
            let inv = pa.series_inv(&k, n).unwrap();
            prop_assert_eq!(pa.mul_trunc(&k, &inv, n), Poly::one(&k));
        }

        #[test]
        fn interpolation_hits_points(ys in prop::collection::vec(0u64..101, 1..40)) {
            let k = fp(101);
            let xs: Vec<u64> = (0..ys.len() as u64).map(|i| (7 * i + 3) % 101).collect();
            let f = lagrange_interp(&k, &xs, &ys).unwrap();
            prop_assert!(f.len() <= xs.len());
            for (x, y) in xs.iter().zip(&ys) {
                prop_assert_eq!(f.eval(&k, x), *y);
            }
        }

        #[test]
        fn recurrence_matches_naive(
            init in prop::collection::vec(0u64..13, 1..12),
            tail in prop::collection::vec(0u64..13, 12),
            count in 0usize..80,
        ) {
            let k = fp(13);
            let m = init.len();
            let mut cp = tail[..m].to_vec();
            cp.push(1);
            let fast = extend_recurrence(&k, &init, &p(&k, &cp), count).unwrap();
            prop_assert_eq!(fast, naive_recurrence(&k, &init, &cp, count));
        }
    }
}
