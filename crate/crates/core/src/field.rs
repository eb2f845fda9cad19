//! Finite fields: prime fields `F_p` and extensions `F_q[X]/(f)`.
//!
//! Elements are plain values; every operation goes through the owning field
//! context, so contexts can be cheaply cloned and shared across threads.

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::Poly;

pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Image of the integer `n` under the canonical map `Z -> F`.
    fn from_u64(&self, n: u64) -> Self::Elem;
    fn characteristic(&self) -> u64;
    /// Number of elements, saturating at `u128::MAX`.
    fn order(&self) -> u128;
    /// The `index`-th element in the canonical enumeration (`index < order`).
    fn element_at(&self, index: u128) -> Self::Elem;
    /// Checks that `a` is a well-formed element of this field.
    fn validate(&self, a: &Self::Elem) -> Result<()>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        let v = self.from_u64(n.unsigned_abs());
        if n < 0 {
            self.neg(&v)
        } else {
            v
        }
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        self.element_at(rng.gen_range(0..self.order()))
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for &w in &WITNESSES {
        let mut x = powmod(w, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Copy, Debug, Eq, PartialEq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        if self.p <= u32::MAX as u64 {
            a * b % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1 % self.p
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let (s, carry) = a.overflowing_add(*b);
        if carry || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> u128 {
        self.p as u128
    }
    fn element_at(&self, index: u128) -> u64 {
        debug_assert!(index < self.p as u128);
        index as u64
    }
    fn validate(&self, a: &u64) -> Result<()> {
        if *a < self.p {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }
}

/// `B[X]/(f)` for a monic irreducible `f` of degree `d >= 1`.
///
/// Elements are coefficient vectors of length exactly `d`, low degree first.
#[derive(Clone, Debug)]
pub struct ExtField<B: Field> {
    inner: Arc<ExtInner<B>>,
}

#[derive(Debug)]
struct ExtInner<B: Field> {
    base: B,
    /// Monic defining polynomial, `d + 1` coefficients.
    modulus: Vec<B::Elem>,
    order: u128,
}

impl<B: Field> ExtField<B> {
    /// Wraps a monic irreducible defining polynomial.
    pub fn new(base: B, modulus: &Poly<B>) -> Result<Self> {
        let d = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidInstance("defining polynomial must have degree >= 1".into()))?;
        if !base.is_one(&modulus.coeffs()[d]) {
            return Err(Error::InvalidInstance("defining polynomial must be monic".into()));
        }
        if !modulus.is_irreducible(&base) {
            return Err(Error::InvalidInstance("defining polynomial is reducible".into()));
        }
        let order = (0..d).fold(1u128, |acc, _| acc.saturating_mul(base.order()));
        Ok(ExtField {
            inner: Arc::new(ExtInner {
                base,
                modulus: modulus.coeffs().to_vec(),
                order,
            }),
        })
    }

    /// Samples monic polynomials of degree `d` until one is irreducible.
    ///
    /// A random monic polynomial is irreducible with probability about `1/d`,
    /// so the attempt budget is generous.
    pub fn build<R: Rng + ?Sized>(base: B, d: usize, rng: &mut R) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInstance("extension degree must be >= 1".into()));
        }
        let budget = 64 * d + 64;
        for _ in 0..budget {
            let mut coeffs: Vec<B::Elem> = (0..d).map(|_| base.random(rng)).collect();
            coeffs.push(base.one());
            let f = Poly::from_coeffs(&base, coeffs);
            if f.is_irreducible(&base) {
                return ExtField::new(base, &f);
            }
        }
        Err(Error::RandomSearchExhausted(budget))
    }

    /// Smallest degree `d` such that `|base|^d >= min_size`.
    pub fn degree_for(base: &B, min_size: u128) -> usize {
        let q = base.order();
        let mut d = 1;
        let mut size = q;
        while size < min_size {
            size = size.saturating_mul(q);
            d += 1;
        }
        d
    }

    pub fn base(&self) -> &B {
        &self.inner.base
    }

    pub fn degree(&self) -> usize {
        self.inner.modulus.len() - 1
    }

    pub fn modulus(&self) -> Poly<B> {
        Poly::from_coeffs(&self.inner.base, self.inner.modulus.clone())
    }

    pub fn embed(&self, a: &B::Elem) -> Vec<B::Elem> {
        let mut v = vec![self.inner.base.zero(); self.degree()];
        v[0] = a.clone();
        v
    }

    /// Builds an element from up to `d` coefficients.
    pub fn from_coeffs(&self, mut coeffs: Vec<B::Elem>) -> Result<Vec<B::Elem>> {
        if coeffs.len() > self.degree() {
            return Err(Error::CtxMismatch);
        }
        coeffs.resize(self.degree(), self.inner.base.zero());
        self.validate(&coeffs)?;
        Ok(coeffs)
    }

    fn reduce(&self, mut prod: Vec<B::Elem>) -> Vec<B::Elem> {
        let k = &self.inner.base;
        let f = &self.inner.modulus;
        let d = self.degree();
        while prod.len() > d {
            let top = prod.pop().expect("nonempty");
            if k.is_zero(&top) {
                continue;
            }
            let shift = prod.len() - d;
            for (t, fc) in f[..d].iter().enumerate() {
                let sub = k.mul(&top, fc);
                prod[shift + t] = k.sub(&prod[shift + t], &sub);
            }
        }
        prod.resize(d, k.zero());
        prod
    }
}

impl<B: Field> Field for ExtField<B> {
    type Elem = Vec<B::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.inner.base.zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        self.embed(&self.inner.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|c| self.inner.base.is_zero(c))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.inner.base;
        a.iter().zip(b).map(|(x, y)| k.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.inner.base;
        a.iter().zip(b).map(|(x, y)| k.sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        let k = &self.inner.base;
        a.iter().map(|x| k.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let k = &self.inner.base;
        let d = self.degree();
        let mut prod = vec![k.zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = k.add(&prod[i + j], &k.mul(x, y));
            }
        }
        self.reduce(prod)
    }
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        let k = &self.inner.base;
        let pa = Poly::from_coeffs(k, a.clone());
        let (g, s, _) = pa.xgcd(k, &self.modulus());
        // g is a nonzero constant because the modulus is irreducible.
        let g0 = k.inv(&g.coeffs()[0])?;
        let mut out = s.scale(k, &g0).coeffs().to_vec();
        out.resize(self.degree(), k.zero());
        Ok(out)
    }
    fn from_u64(&self, n: u64) -> Self::Elem {
        self.embed(&self.inner.base.from_u64(n))
    }
    fn characteristic(&self) -> u64 {
        self.inner.base.characteristic()
    }
    fn order(&self) -> u128 {
        self.inner.order
    }
    fn element_at(&self, mut index: u128) -> Self::Elem {
        let k = &self.inner.base;
        let q = k.order();
        (0..self.degree())
            .map(|_| {
                let digit = index % q;
                index /= q;
                k.element_at(digit)
            })
            .collect()
    }
    fn validate(&self, a: &Self::Elem) -> Result<()> {
        if a.len() != self.degree() {
            return Err(Error::CtxMismatch);
        }
        a.iter().try_for_each(|c| self.inner.base.validate(c))
    }
}

/// Uniform sampling from a fixed subset `S` of a field with `|S| >= min_size`.
///
/// `S` is the whole field when the field has fewer than `2 * min_size`
/// elements, and otherwise the first `min_size` elements of the canonical
/// enumeration.
#[derive(Clone, Copy, Debug)]
pub struct SubsetSampler {
    size: u128,
}

impl SubsetSampler {
    pub fn new<F: Field>(field: &F, min_size: u128) -> Result<Self> {
        let order = field.order();
        if order < min_size {
            return Err(Error::FieldTooSmall {
                order,
                required: min_size,
            });
        }
        let size = if order < min_size.saturating_mul(2) {
            order
        } else {
            min_size.max(1)
        };
        Ok(SubsetSampler { size })
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn sample<F: Field, R: Rng + ?Sized>(&self, field: &F, rng: &mut R) -> F::Elem {
        field.element_at(rng.gen_range(0..self.size))
    }
}

pub fn sample_subset_element<F: Field, R: Rng + ?Sized>(field: &F, min_size: u128, rng: &mut R) -> Result<F::Elem> {
    Ok(SubsetSampler::new(field, min_size)?.sample(field, rng))
}

/// Maps a vector over `B[X]/(f)` back to `B` by taking the first nonzero
/// coefficient slice.
///
/// When every entry of a linear system lies in `B`, each coefficient slice of
/// a solution over the extension is again a solution, so the result is a
/// nonzero solution over `B`.
pub fn project_solution_to_base<B: Field>(ext: &ExtField<B>, sol: &[Vec<B::Elem>]) -> Result<Vec<B::Elem>> {
    let k = ext.base();
    (0..ext.degree())
        .map(|t| sol.iter().map(|e| e[t].clone()).collect::<Vec<_>>())
        .find(|slice| slice.iter().any(|c| !k.is_zero(c)))
        .ok_or(Error::ZeroInput)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn inverse_in_f7() {
        assert_eq!(f(7).inv(&3).unwrap(), 5);
        assert_eq!(f(7).inv(&0), Err(Error::DivisionByZero));
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        let naive = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive(n), "n = {n}");
        }
        assert!(is_prime(65537));
        assert!(is_prime(4294967291));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3215031751));
        assert!(PrimeField::new(15).is_err());
    }

    #[test]
    fn large_prime_arithmetic() {
        let p = (1u64 << 61) - 1;
        let k = f(p);
        let a = p - 2;
        let b = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &b), 1);
        assert_eq!(k.add(&a, &(p - 1)), p - 3);
    }

    #[test]
    fn gf4_multiplication() {
        let k = f(2);
        let modulus = Poly::from_coeffs(&k, vec![1, 1, 1]);
        let l = ExtField::new(k, &modulus).unwrap();
        let x = vec![0, 1];
        assert_eq!(l.mul(&x, &x), vec![1, 1]);
        assert_eq!(l.inv(&x).unwrap(), vec![1, 1]);
    }

    #[test]
    fn build_gf4_finds_unique_irreducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let l = ExtField::build(f(2), 2, &mut rng).unwrap();
        assert_eq!(l.modulus().coeffs(), &[1, 1, 1]);
        assert_eq!(l.order(), 4);
    }

    #[test]
    fn build_f9_modulus_has_no_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = f(3);
        let l = ExtField::build(k, 2, &mut rng).unwrap();
        let m = l.modulus();
        assert!((0..3).all(|x| m.eval(&k, &x) != 0));
    }

    #[test]
    fn extension_field_axioms_exhaustive_f9() {
        let k = f(3);
        let l = ExtField::new(k, &Poly::from_coeffs(&k, vec![1, 0, 1])).unwrap();
        let elems: Vec<_> = (0..9).map(|i| l.element_at(i)).collect();
        for a in &elems {
            if !l.is_zero(a) {
                assert!(l.is_one(&l.mul(a, &l.inv(a).unwrap())));
            }
            for b in &elems {
                assert_eq!(l.mul(a, b), l.mul(b, a));
                for c in &elems {
                    let lhs = l.mul(a, &l.add(b, c));
                    let rhs = l.add(&l.mul(a, b), &l.mul(a, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        let k = f(2);
        let m = Poly::from_coeffs(&k, vec![1, 0, 1]);
        assert!(ExtField::new(k, &m).is_err());
    }

    #[test]
    fn validate_detects_foreign_elements() {
        assert_eq!(f(5).validate(&6), Err(Error::CtxMismatch));
        let k = f(2);
        let l = ExtField::new(k, &Poly::from_coeffs(&k, vec![1, 1, 1])).unwrap();
        assert_eq!(l.validate(&vec![1, 0, 0]), Err(Error::CtxMismatch));
    }

    #[test]
    fn sampler_subset_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let e = sample_subset_element(&f(101), 50, &mut rng).unwrap();
            assert!(e < 50);
        }
        assert!(matches!(
            sample_subset_element(&f(5), 6, &mut rng),
            Err(Error::FieldTooSmall { .. })
        ));
        assert_eq!(SubsetSampler::new(&f(101), 60).unwrap().size(), 101);
    }

    #[test]
    fn sampler_is_uniform_chi_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let k = f(101);
        let s = SubsetSampler::new(&k, 20).unwrap();
        let draws = 10_000;
        let mut counts = [0usize; 20];
        for _ in 0..draws {
            counts[s.sample(&k, &mut rng) as usize] += 1;
        }
        let expected = draws as f64 / 20.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 19 degrees of freedom; the 0.999 quantile is about 43.8.
        assert!(chi2 < 43.8, "chi2 = {chi2}");
    }

    #[test]
    fn projection_picks_first_nonzero_slice() {
        let k = f(2);
        let l = ExtField::new(k, &Poly::from_coeffs(&k, vec![1, 1, 1])).unwrap();
        let sol = vec![vec![0, 1], vec![0, 0], vec![0, 1]];
        assert_eq!(project_solution_to_base(&l, &sol).unwrap(), vec![1, 0, 1]);
        assert_eq!(project_solution_to_base(&l, &[vec![0, 0]]), Err(Error::ZeroInput));
    }
}
