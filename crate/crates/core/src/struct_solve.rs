//! Nullspace computation for matrices given by a displacement generator.
//!
//! Two displacement operators are supported on `M x N` matrices:
//! Toeplitz-like `A - Z A Z^T` and Hankel-like `A - Z A Z`, where `Z` is the
//! lower shift. A Hankel-like system is turned into a Toeplitz-like one by
//! reversing its columns, and rectangular systems are padded to square with
//! zero rows or columns.
//!
//! The randomized core multiplies by unit triangular Toeplitz matrices,
//! `A~ = U A L`, which gives `A~` generic rank profile with high probability.
//! Schur complements of a Toeplitz-like matrix are Toeplitz-like with the same
//! displacement rank, so Gaussian elimination can run on generators alone at
//! `O(alpha)` cost per entry of the pivot row and column. The resulting rank is
//! exact, the nullspace of `A~` is parametrized by its free unknowns, and a
//! candidate `L z` is checked against `A` through the generator.

use std::fmt;

use rand::Rng;

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::field::{Field, SubsetSampler};
use crate::poly::mul_slices;

/// Largest dimension for which dense matrices are materialized.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, Eq, PartialEq)]
pub enum Displacement {
    /// `A - Z A Z^T`
    Toeplitz,
    /// `A - Z A Z`
    Hankel,
}

/// `A` represented by `(V, W)` with `V W` equal to its displacement.
///
/// `V` is stored as `alpha` columns of length `rows`, `W` as `alpha` rows of
/// length `cols`.
pub struct GeneratorPair<F: Field> {
    pub op: Displacement,
    pub rows: usize,
    pub cols: usize,
    pub v: Vec<Vec<F::Elem>>,
    pub w: Vec<Vec<F::Elem>>,
}

impl<F: Field> Clone for GeneratorPair<F> {
    fn clone(&self) -> Self {
        GeneratorPair {
            op: self.op,
            rows: self.rows,
            cols: self.cols,
            v: self.v.clone(),
            w: self.w.clone(),
        }
    }
}

impl<F: Field> fmt::Debug for GeneratorPair<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorPair")
            .field("op", &self.op)
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("alpha", &self.alpha())
            .finish()
    }
}

impl<F: Field> GeneratorPair<F> {
    pub fn new(op: Displacement, rows: usize, cols: usize, v: Vec<Vec<F::Elem>>, w: Vec<Vec<F::Elem>>) -> Result<Self> {
        if v.len() != w.len() || v.iter().any(|c| c.len() != rows) || w.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInstance("generator shapes are inconsistent".into()));
        }
        Ok(GeneratorPair { op, rows, cols, v, w })
    }

    /// Generator of length `rank(A)` read off a dense matrix: `V = A`, `W = I`
    /// would be too long, so the displacement is factored exactly instead.
    pub fn from_dense(k: &F, op: Displacement, a: &Matrix<F>) -> Self {
        let d = displacement(k, op, a);
        let mut r = d.clone();
        let pivots = r.rref_in_place(k);
        let v = pivots.iter().map(|&c| d.column(c)).collect();
        let w = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        GeneratorPair {
            op,
            rows: a.rows(),
            cols: a.cols(),
            v,
            w,
        }
    }

    pub fn alpha(&self) -> usize {
        self.v.len()
    }

    /// The dense product `V W`.
    pub fn product(&self, k: &F) -> Matrix<F> {
        let v = Matrix::from_columns(k, self.rows, &self.v);
        let w = Matrix::from_rows(k, self.cols, &self.w);
        v.mul(k, &w)
    }

    /// `A x` in `O(alpha M(P))` operations.
    pub fn apply(&self, k: &F, x: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(x.len(), self.cols);
        match self.op {
            Displacement::Toeplitz => toeplitz_apply(k, self.rows, self.cols, &self.v, &self.w, x),
            Displacement::Hankel => {
                let w_rev: Vec<Vec<F::Elem>> = self.w.iter().map(|r| r.iter().rev().cloned().collect()).collect();
                let x_rev: Vec<F::Elem> = x.iter().rev().cloned().collect();
                toeplitz_apply(k, self.rows, self.cols, &self.v, &w_rev, &x_rev)
            }
        }
    }
}

/// `A x` for `A - Z A Z^T = sum_k v_k w_k^T`, using
/// `A = sum_k L(v_k) L(w_k)^T` with `L(.)` lower triangular Toeplitz.
fn toeplitz_apply<F: Field>(
    k: &F,
    rows: usize,
    cols: usize,
    v: &[Vec<F::Elem>],
    w: &[Vec<F::Elem>],
    x: &[F::Elem],
) -> Vec<F::Elem> {
    let t = rows.min(cols);
    let x_rev: Vec<F::Elem> = x.iter().rev().cloned().collect();
    let mut out = vec![k.zero(); rows];
    for (vk, wk) in v.iter().zip(w) {
        // y_t = sum_d w[d] x[t + d]
        let corr = mul_slices(k, wk, &x_rev);
        let y: Vec<F::Elem> = (0..t)
            .map(|i| corr.get(cols - 1 - i).cloned().unwrap_or_else(|| k.zero()))
            .collect();
        let z = mul_slices(k, vk, &y);
        for (o, zi) in out.iter_mut().zip(z) {
            *o = k.add(o, &zi);
        }
    }
    out
}

/// The dense displacement of `a` under `op`.
pub fn displacement<F: Field>(k: &F, op: Displacement, a: &Matrix<F>) -> Matrix<F> {
    let (m, n) = (a.rows(), a.cols());
    Matrix::from_fn(m, n, |i, j| {
        let prev = match op {
            Displacement::Toeplitz if i > 0 && j > 0 => Some(a.get(i - 1, j - 1)),
            Displacement::Hankel if i > 0 && j + 1 < n => Some(a.get(i - 1, j + 1)),
            _ => None,
        };
        match prev {
            Some(p) => k.sub(a.get(i, j), p),
            None => a.get(i, j).clone(),
        }
    })
}

/// Inverts the displacement: the unique `A` whose displacement is `V W`.
pub fn reconstruct_dense<F: Field>(k: &F, g: &GeneratorPair<F>) -> Result<Matrix<F>> {
    if g.rows > DENSE_LIMIT || g.cols > DENSE_LIMIT {
        return Err(Error::TooLarge {
            rows: g.rows,
            cols: g.cols,
        });
    }
    let d = g.product(k);
    let mut a = Matrix::zeros(k, g.rows, g.cols);
    for i in 0..g.rows {
        for j in 0..g.cols {
            let prev = match g.op {
                Displacement::Toeplitz if i > 0 && j > 0 => Some(a.get(i - 1, j - 1).clone()),
                Displacement::Hankel if i > 0 && j + 1 < g.cols => Some(a.get(i - 1, j + 1).clone()),
                _ => None,
            };
            let v = match prev {
                Some(p) => k.add(d.get(i, j), &p),
                None => d.get(i, j).clone(),
            };
            a.set(i, j, v);
        }
    }
    Ok(a)
}

/// Generator of `B = A J` under the Toeplitz operator; a nullspace vector `v`
/// of `B` maps back to `J v` for `A`.
pub fn hankel_to_toeplitz<F: Field>(g: &GeneratorPair<F>) -> Result<GeneratorPair<F>> {
    if g.op != Displacement::Hankel {
        return Err(Error::WrongTag);
    }
    Ok(GeneratorPair {
        op: Displacement::Toeplitz,
        rows: g.rows,
        cols: g.cols,
        v: g.v.clone(),
        w: g.w.iter().map(|r| r.iter().rev().cloned().collect()).collect(),
    })
}

/// How to map a nullspace vector of the padded square matrix back.
#[derive(Clone, Copy, Debug, Eq, PartialEq)]
pub struct Padding {
    pub rows: usize,
    pub cols: usize,
}

impl Padding {
    pub fn size(&self) -> usize {
        self.rows.max(self.cols)
    }

    /// Wide systems share their nullspace with the padded one; tall systems
    /// drop the coordinates of the adjoined zero columns.
    pub fn lift<T: Clone>(&self, v: &[T]) -> Vec<T> {
        v[v.len() - self.cols..].to_vec()
    }
}

/// Zero rows on top (wide) or zero columns on the left (tall).
pub fn pad_to_square<F: Field>(k: &F, g: &GeneratorPair<F>) -> Result<(GeneratorPair<F>, Padding)> {
    if g.op != Displacement::Toeplitz {
        return Err(Error::WrongTag);
    }
    let p = g.rows.max(g.cols);
    let pad = |vecs: &[Vec<F::Elem>], len: usize| -> Vec<Vec<F::Elem>> {
        vecs.iter()
            .map(|c| {
                let mut out = vec![k.zero(); p - len];
                out.extend(c.iter().cloned());
                out
            })
            .collect()
    };
    let padded = GeneratorPair {
        op: Displacement::Toeplitz,
        rows: p,
        cols: p,
        v: pad(&g.v, g.rows),
        w: pad(&g.w, g.cols),
    };
    Ok((
        padded,
        Padding {
            rows: g.rows,
            cols: g.cols,
        },
    ))
}

/// Replaces `(V, W)` by a generator of length `rank(V W)`.
pub fn compress<F: Field>(k: &F, g: &GeneratorPair<F>) -> GeneratorPair<F> {
    // W = C Wb with Wb in reduced echelon form and C = W[:, pivots].
    let w = Matrix::from_rows(k, g.cols, &g.w);
    let mut wb = w.clone();
    let wpiv = wb.rref_in_place(k);
    let c = Matrix::from_fn(g.alpha(), wpiv.len(), |i, t| w.get(i, wpiv[t]).clone());
    let vc = Matrix::from_columns(k, g.rows, &g.v).mul(k, &c);
    // V C = Vb D, read off the echelon form of (V C)^T.
    let vct = vc.transpose();
    let mut r = vct.clone();
    let vpiv = r.rref_in_place(k);
    let d = Matrix::from_fn(vpiv.len(), wpiv.len(), |i, t| vct.get(t, vpiv[i]).clone());
    let wb_rows = Matrix::from_fn(wpiv.len(), g.cols, |i, j| wb.get(i, j).clone());
    let new_w = d.mul(k, &wb_rows);
    GeneratorPair {
        op: g.op,
        rows: g.rows,
        cols: g.cols,
        v: (0..vpiv.len()).map(|i| r.row(i).to_vec()).collect(),
        w: (0..vpiv.len()).map(|i| new_w.row(i).to_vec()).collect(),
    }
}

/// Why no solution exists.
#[derive(Clone, Copy, Debug, Eq, PartialEq)]
pub enum NoSolutionReason {
    /// No monomial satisfies the degree constraints.
    NoSolutionSpace,
    /// The linear system has full column rank.
    TrivialNullspace,
    /// The explicit large-weight answer exceeds the degree bound.
    WeightBound,
}

impl fmt::Display for NoSolutionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoSolutionReason::NoSolutionSpace => "NoSolutionSpace",
            NoSolutionReason::TrivialNullspace => "TrivialNullspace",
            NoSolutionReason::WeightBound => "WeightBound",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<T> {
    Solution(T),
    NoSolution(NoSolutionReason),
    Failure { attempts: usize },
}

impl<T> SolveOutcome<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SolveOutcome<U> {
        match self {
            SolveOutcome::Solution(t) => SolveOutcome::Solution(f(t)),
            SolveOutcome::NoSolution(r) => SolveOutcome::NoSolution(r),
            SolveOutcome::Failure { attempts } => SolveOutcome::Failure { attempts },
        }
    }

    pub fn is_solution(&self) -> bool {
        matches!(self, SolveOutcome::Solution(_))
    }

    pub fn solution(self) -> Option<T> {
        match self {
            SolveOutcome::Solution(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StructuredOptions {
    pub max_retries: usize,
    /// Square systems of at most this size are solved by dense elimination.
    pub dense_below: usize,
}

impl Default for StructuredOptions {
    fn default() -> Self {
        StructuredOptions {
            max_retries: 8,
            dense_below: 4,
        }
    }
}

/// Result of a single randomized attempt.
#[derive(Clone, Debug, PartialEq)]
pub enum Attempt<T> {
    Solution(T),
    /// Exact rank shows the nullspace is trivial.
    NoSolution,
    /// Unlucky random choices; retrying may succeed.
    Failed,
}

/// Sample size needed for a square system of size `p`.
pub fn required_sample_size(p: usize) -> u128 {
    6 * (p as u128) * (p as u128)
}

/// Finds a nonzero `u` with `A u = 0`, or certifies that none exists.
pub fn nullspace_structured<F: Field, R: Rng + ?Sized>(
    k: &F,
    g: &GeneratorPair<F>,
    rng: &mut R,
    opts: &StructuredOptions,
) -> Result<SolveOutcome<Vec<F::Elem>>> {
    let p = g.rows.max(g.cols);
    if p <= opts.dense_below {
        return dense_nullspace_vector(k, g);
    }
    let sampler = SubsetSampler::new(k, required_sample_size(p))?;
    for _ in 0..opts.max_retries {
        match nullspace_attempt(k, g, &sampler, rng)? {
            Attempt::Solution(u) => return Ok(SolveOutcome::Solution(u)),
            Attempt::NoSolution => return Ok(SolveOutcome::NoSolution(NoSolutionReason::TrivialNullspace)),
            Attempt::Failed => {}
        }
    }
    Ok(SolveOutcome::Failure {
        attempts: opts.max_retries,
    })
}

fn dense_nullspace_vector<F: Field>(k: &F, g: &GeneratorPair<F>) -> Result<SolveOutcome<Vec<F::Elem>>> {
    let a = reconstruct_dense(k, g)?;
    Ok(match a.nullspace(k).into_iter().next() {
        Some(v) => SolveOutcome::Solution(v),
        None => SolveOutcome::NoSolution(NoSolutionReason::TrivialNullspace),
    })
}

/// One randomized attempt of the structured solver; never falls back to
/// dense elimination.
pub fn nullspace_attempt<F: Field, R: Rng + ?Sized>(
    k: &F,
    g: &GeneratorPair<F>,
    sampler: &SubsetSampler,
    rng: &mut R,
) -> Result<Attempt<Vec<F::Elem>>> {
    let toeplitz = match g.op {
        Displacement::Toeplitz => g.clone(),
        Displacement::Hankel => hankel_to_toeplitz(g)?,
    };
    let (square, padding) = pad_to_square(k, &toeplitz)?;
    let p = square.rows;

    let mut draw = |n: usize| -> Vec<F::Elem> {
        let mut v = vec![k.one()];
        v.extend((1..n).map(|_| sampler.sample(k, rng)));
        v
    };
    let upper = draw(p);
    let lower = draw(p);
    let pre = compress(k, &precondition(k, &square, &upper, &lower));

    let (rank, urows) = match schur_eliminate(k, p, pre.v, pre.w) {
        Some(res) => res,
        None => return Ok(Attempt::Failed),
    };
    if rank == g.cols {
        return Ok(Attempt::NoSolution);
    }

    // Free unknowns z[rank..] are random; back-substitute through U.
    let mut z = vec![k.zero(); p];
    for zi in z.iter_mut().skip(rank) {
        *zi = sampler.sample(k, rng);
    }
    for r in (0..rank).rev() {
        let row = &urows[r];
        let mut acc = k.zero();
        for (c, zc) in z.iter().enumerate().skip(r + 1) {
            acc = k.add(&acc, &k.mul(&row[c - r], zc));
        }
        z[r] = k.neg(&k.div(&acc, &row[0])?);
    }
    let mut u = padding.lift(&lower_apply(k, &lower, &z));
    if g.op == Displacement::Hankel {
        u.reverse();
    }
    if u.iter().all(|e| k.is_zero(e)) {
        return Ok(Attempt::Failed);
    }
    if g.apply(k, &u).iter().any(|e| !k.is_zero(e)) {
        return Ok(Attempt::Failed);
    }
    Ok(Attempt::Solution(u))
}

/// `L(a) x` truncated to `x.len()` entries.
fn lower_apply<F: Field>(k: &F, a: &[F::Elem], x: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = mul_slices(k, a, x);
    out.resize(x.len(), k.zero());
    out
}

/// `L(a)^T x`, i.e. `out_i = sum_{j >= i} a_{j-i} x_j`.
fn upper_apply<F: Field>(k: &F, a: &[F::Elem], x: &[F::Elem]) -> Vec<F::Elem> {
    let n = x.len();
    let x_rev: Vec<F::Elem> = x.iter().rev().cloned().collect();
    let prod = mul_slices(k, a, &x_rev);
    (0..n)
        .map(|i| prod.get(n - 1 - i).cloned().unwrap_or_else(|| k.zero()))
        .collect()
}

fn shift_down<F: Field>(k: &F, x: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![k.zero()];
    out.extend(x[..x.len() - 1].iter().cloned());
    out
}

/// Generator of `U A L` with `U = L(upper)^T` and `L = L(lower)`, both unit
/// triangular Toeplitz, for a square Toeplitz-like `A` of size `p`.
///
/// With `E_U = Z U - U Z` and `E_L = L Z^T - Z^T L` (each of rank two):
/// `Delta(U A L) = U V W L - U Z A E_L - E_U A L Z^T`.
fn precondition<F: Field>(k: &F, g: &GeneratorPair<F>, upper: &[F::Elem], lower: &[F::Elem]) -> GeneratorPair<F> {
    let p = g.rows;
    let apply = |x: &[F::Elem]| toeplitz_apply(k, p, p, &g.v, &g.w, x);
    let apply_t = |y: &[F::Elem]| toeplitz_apply(k, p, p, &g.w, &g.v, y);
    let unit = |i: usize| {
        let mut e = vec![k.zero(); p];
        e[i] = k.one();
        e
    };
    let tail = |a: &[F::Elem]| {
        // (a_1, ..., a_{p-1}, 0)
        let mut t: Vec<F::Elem> = a[1..].to_vec();
        t.push(k.zero());
        t
    };
    let mirrored = |a: &[F::Elem]| {
        // (0, a_{p-1}, ..., a_1)
        let mut t = vec![k.zero()];
        t.extend(a[1..].iter().rev().cloned());
        t
    };

    let mut v: Vec<Vec<F::Elem>> = g.v.iter().map(|c| upper_apply(k, upper, c)).collect();
    let mut w: Vec<Vec<F::Elem>> = g.w.iter().map(|r| upper_apply(k, lower, r)).collect();

    // -U Z A E_L with E_L = -tail(l) e_0^T + e_{p-1} mirrored(l)^T
    v.push(upper_apply(k, upper, &shift_down(k, &apply(&tail(lower)))));
    w.push(unit(0));
    let last_col = apply(&unit(p - 1));
    v.push(
        upper_apply(k, upper, &shift_down(k, &last_col))
            .iter()
            .map(|e| k.neg(e))
            .collect(),
    );
    w.push(mirrored(lower));

    // -E_U A L Z^T with E_U = -e_0 tail(u)^T + mirrored(u) e_{p-1}^T
    let row_times_lz = |r: Vec<F::Elem>| shift_down(k, &upper_apply(k, lower, &r));
    v.push(unit(0));
    w.push(row_times_lz(apply_t(&tail(upper))));
    v.push(mirrored(upper).iter().map(|e| k.neg(e)).collect());
    w.push(row_times_lz(apply_t(&unit(p - 1))));

    GeneratorPair {
        op: Displacement::Toeplitz,
        rows: p,
        cols: p,
        v,
        w,
    }
}

/// Whether the matrix with Toeplitz displacement `V W` is zero, i.e. `V W = 0`.
fn generator_is_zero<F: Field>(k: &F, v: &[Vec<F::Elem>], w: &[Vec<F::Elem>]) -> bool {
    let len = w.first().map_or(0, Vec::len);
    if len == 0 {
        return true;
    }
    let wm = Matrix::from_rows(k, len, w);
    let mut r = wm.clone();
    let piv = r.rref_in_place(k);
    // V W = (V C) Wb with Wb of full row rank, so it vanishes iff V C does.
    let rows = v.first().map_or(0, Vec::len);
    (0..rows).all(|i| {
        piv.iter().all(|&pc| {
            let s = v
                .iter()
                .enumerate()
                .fold(k.zero(), |acc, (a, va)| k.add(&acc, &k.mul(&va[i], wm.get(a, pc))));
            k.is_zero(&s)
        })
    })
}

/// Gaussian elimination without pivoting on generators. Returns the rank
/// and the rows of the upper factor (row `r` holds columns `r..p`), or
/// `None` when a zero pivot appears before the trailing block vanishes.
#[allow(clippy::type_complexity)]
fn schur_eliminate<F: Field>(
    k: &F,
    p: usize,
    mut v: Vec<Vec<F::Elem>>,
    mut w: Vec<Vec<F::Elem>>,
) -> Option<(usize, Vec<Vec<F::Elem>>)> {
    let mut urows = Vec::new();
    for step in 0..p {
        // Column `step` and row `step` of the trailing block, accumulated
        // one generator pair at a time over contiguous slices.
        let mut col = vec![k.zero(); p - step];
        let mut row = vec![k.zero(); p - step];
        for (vc, wr) in v.iter().zip(&w) {
            let (ws, vs) = (&wr[step], &vc[step]);
            if !k.is_zero(ws) {
                for (acc, x) in col.iter_mut().zip(&vc[step..]) {
                    *acc = k.add(acc, &k.mul(x, ws));
                }
            }
            if !k.is_zero(vs) {
                for (acc, x) in row.iter_mut().zip(&wr[step..]) {
                    *acc = k.add(acc, &k.mul(vs, x));
                }
            }
        }
        if k.is_zero(&row[0]) {
            let trailing_zero = col.iter().chain(&row).all(|e| k.is_zero(e)) && {
                let vs: Vec<Vec<F::Elem>> = v.iter().map(|c| c[step..].to_vec()).collect();
                let ws: Vec<Vec<F::Elem>> = w.iter().map(|r| r[step..].to_vec()).collect();
                generator_is_zero(k, &vs, &ws)
            };
            return trailing_zero.then_some((step, urows));
        }
        let inv = k.inv(&row[0]).expect("nonzero pivot");
        let l: Vec<F::Elem> = col.iter().map(|c| k.mul(c, &inv)).collect();
        for vc in v.iter_mut() {
            let v0 = vc[step].clone();
            if k.is_zero(&v0) {
                continue;
            }
            for i in step + 1..p {
                let delta = k.sub(&l[i - step - 1], &l[i - step]);
                vc[i] = k.add(&vc[i], &k.mul(&delta, &v0));
            }
        }
        for wr in w.iter_mut() {
            let c = k.mul(&wr[step], &inv);
            if k.is_zero(&c) {
                continue;
            }
            for j in step + 1..p {
                let delta = k.sub(&row[j - step - 1], &row[j - step]);
                wr[j] = k.add(&wr[j], &k.mul(&c, &delta));
            }
        }
        urows.push(row);
    }
    Some((p, urows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_gen(
        k: &PrimeField,
        op: Displacement,
        rows: usize,
        cols: usize,
        alpha: usize,
        rng: &mut ChaCha8Rng,
    ) -> GeneratorPair<PrimeField> {
        let v = (0..alpha).map(|_| (0..rows).map(|_| k.random(rng)).collect()).collect();
        let w = (0..alpha).map(|_| (0..cols).map(|_| k.random(rng)).collect()).collect();
        GeneratorPair::new(op, rows, cols, v, w).unwrap()
    }

    fn flip_cols(k: &PrimeField, a: &Matrix<PrimeField>) -> Matrix<PrimeField> {
        let _ = k;
        Matrix::from_fn(a.rows(), a.cols(), |i, j| *a.get(i, a.cols() - 1 - j))
    }

    #[test]
    fn reconstruction_inverts_displacement() {
        let k = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for op in [Displacement::Toeplitz, Displacement::Hankel] {
            for _ in 0..20 {
                let g = random_gen(&k, op, rng.gen_range(1..9), rng.gen_range(1..9), 3, &mut rng);
                let a = reconstruct_dense(&k, &g).unwrap();
                assert_eq!(displacement(&k, op, &a), g.product(&k));
                let x: Vec<u64> = (0..g.cols).map(|_| k.random(&mut rng)).collect();
                assert_eq!(g.apply(&k, &x), a.mul_vec(&k, &x));
            }
        }
    }

    #[test]
    fn all_ones_lower_triangle() {
        let k = PrimeField::new(7).unwrap();
        let g = GeneratorPair::new(Displacement::Toeplitz, 3, 3, vec![vec![1, 0, 0]], vec![vec![1, 1, 1]]).unwrap();
        let a = reconstruct_dense(&k, &g).unwrap();
        // First row all ones, propagated down the diagonals: upper triangle of ones.
        assert_eq!(a, Matrix::from_fn(3, 3, |i, j| u64::from(j >= i)));
        let zero = GeneratorPair::<PrimeField>::new(Displacement::Toeplitz, 2, 2, vec![], vec![]).unwrap();
        assert!(reconstruct_dense(&k, &zero).unwrap().is_zero(&k));
    }

    #[test]
    fn flip_reverses_columns() {
        let k = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let g = random_gen(
                &k,
                Displacement::Hankel,
                rng.gen_range(1..8),
                rng.gen_range(1..8),
                2,
                &mut rng,
            );
            let b = reconstruct_dense(&k, &hankel_to_toeplitz(&g).unwrap()).unwrap();
            assert_eq!(b, flip_cols(&k, &reconstruct_dense(&k, &g).unwrap()));
        }
        let t = random_gen(&k, Displacement::Toeplitz, 2, 2, 1, &mut rng);
        assert_eq!(hankel_to_toeplitz(&t).unwrap_err(), Error::WrongTag);
    }

    #[test]
    fn padding_embeds_original() {
        let k = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (rows, cols) in [(3, 7), (7, 3), (5, 5)] {
            let g = random_gen(&k, Displacement::Toeplitz, rows, cols, 2, &mut rng);
            let a = reconstruct_dense(&k, &g).unwrap();
            let (sq, pad) = pad_to_square(&k, &g).unwrap();
            let b = reconstruct_dense(&k, &sq).unwrap();
            let p = rows.max(cols);
            for i in 0..p {
                for j in 0..p {
                    let expected = if i >= p - rows && j >= p - cols {
                        *a.get(i - (p - rows), j - (p - cols))
                    } else {
                        0
                    };
                    assert_eq!(*b.get(i, j), expected);
                }
            }
            assert_eq!(pad.lift(&vec![0u64; p]).len(), cols);
        }
    }

    #[test]
    fn padding_examples() {
        let k = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let opts = StructuredOptions {
            dense_below: 0,
            ..Default::default()
        };
        // A = [1 0] has nullspace (0, 1).
        let wide = GeneratorPair::from_dense(
            &k,
            Displacement::Toeplitz,
            &Matrix::from_fn(1, 2, |_, j| u64::from(j == 0)),
        );
        let u = nullspace_structured(&k, &wide, &mut rng, &opts)
            .unwrap()
            .solution()
            .unwrap();
        assert_eq!(u[0], 0);
        assert_ne!(u[1], 0);
        // A = [1; 0] has a trivial nullspace.
        let tall = GeneratorPair::from_dense(
            &k,
            Displacement::Toeplitz,
            &Matrix::from_fn(2, 1, |i, _| u64::from(i == 0)),
        );
        assert_eq!(
            nullspace_structured(&k, &tall, &mut rng, &opts).unwrap(),
            SolveOutcome::NoSolution(NoSolutionReason::TrivialNullspace)
        );
    }

    #[test]
    fn small_examples() {
        let k = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let opts = StructuredOptions {
            dense_below: 0,
            ..Default::default()
        };
        let id = GeneratorPair::from_dense(
            &k,
            Displacement::Toeplitz,
            &Matrix::from_fn(2, 2, |i, j| u64::from(i == j)),
        );
        assert!(id.alpha() <= 2);
        assert!(matches!(
            nullspace_structured(&k, &id, &mut rng, &opts).unwrap(),
            SolveOutcome::NoSolution(_)
        ));
        let nil = GeneratorPair::from_dense(
            &k,
            Displacement::Toeplitz,
            &Matrix::from_fn(2, 2, |i, j| u64::from(i == 1 && j == 0)),
        );
        let u = nullspace_structured(&k, &nil, &mut rng, &opts)
            .unwrap()
            .solution()
            .unwrap();
        assert_eq!(u[0], 0);
        assert_ne!(u[1], 0);
    }

    #[test]
    fn preconditioned_generator_matches_dense_product() {
        let k = PrimeField::new(65537).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for p in 1..10 {
            let g = random_gen(&k, Displacement::Toeplitz, p, p, 2, &mut rng);
            let upper: Vec<u64> = std::iter::once(1).chain((1..p).map(|_| k.random(&mut rng))).collect();
            let lower: Vec<u64> = std::iter::once(1).chain((1..p).map(|_| k.random(&mut rng))).collect();
            let pre = precondition(&k, &g, &upper, &lower);
            let u = Matrix::from_fn(p, p, |i, j| if j >= i { upper[j - i] } else { 0 });
            let l = Matrix::from_fn(p, p, |i, j| if i >= j { lower[i - j] } else { 0 });
            let a = reconstruct_dense(&k, &g).unwrap();
            let expected = u.mul(&k, &a).mul(&k, &l);
            assert_eq!(reconstruct_dense(&k, &pre).unwrap(), expected, "p = {p}");
            let c = compress(&k, &pre);
            assert!(c.alpha() <= g.alpha() + 4);
            assert_eq!(reconstruct_dense(&k, &c).unwrap(), expected);
        }
    }

    #[test]
    fn schur_elimination_rank_matches_dense() {
        let k = PrimeField::new(65537).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let p = rng.gen_range(1..12);
            let rank_cap = rng.gen_range(0..=p);
            let left = Matrix::from_fn(p, rank_cap, |_, _| k.random(&mut rng));
            let right = Matrix::from_fn(rank_cap, p, |_, _| k.random(&mut rng));
            let a = left.mul(&k, &right);
            let g = GeneratorPair::from_dense(&k, Displacement::Toeplitz, &a);
            // Generic matrices have generic rank profile.
            let (rank, _) = schur_eliminate(&k, p, g.v.clone(), g.w.clone()).unwrap();
            assert_eq!(rank, a.rank(&k));
        }
    }

    #[test]
    fn random_generators_agree_with_dense_verdict() {
        let k = PrimeField::new(65537).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let opts = StructuredOptions {
            dense_below: 0,
            ..Default::default()
        };
        let mut first_try = 0;
        for trial in 0..200 {
            let alpha = rng.gen_range(1..=5);
            let (rows, cols) = if trial % 2 == 0 { (12, 13) } else { (13, 12) };
            let g = random_gen(&k, Displacement::Toeplitz, rows, cols, alpha, &mut rng);
            let a = reconstruct_dense(&k, &g).unwrap();
            let has_kernel = !a.nullspace(&k).is_empty();
            let sampler = SubsetSampler::new(&k, required_sample_size(13)).unwrap();
            if !matches!(nullspace_attempt(&k, &g, &sampler, &mut rng).unwrap(), Attempt::Failed) {
                first_try += 1;
            }
            match nullspace_structured(&k, &g, &mut rng, &opts).unwrap() {
                SolveOutcome::Solution(u) => {
                    assert!(has_kernel);
                    assert!(a.mul_vec(&k, &u).iter().all(|e| *e == 0));
                    assert!(u.iter().any(|e| *e != 0));
                }
                SolveOutcome::NoSolution(_) => assert!(!has_kernel),
                SolveOutcome::Failure { .. } => panic!("solver failed"),
            }
        }
        assert!(first_try >= 180, "first-try successes: {first_try}");
    }

    #[test]
    fn low_rank_structured_matrices() {
        // Toeplitz matrices with many dependent columns exercise early termination.
        let k = PrimeField::new(65537).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let opts = StructuredOptions {
            dense_below: 0,
            ..Default::default()
        };
        for _ in 0..40 {
            let rows = rng.gen_range(1..15);
            let cols = rng.gen_range(1..15);
            let zeros = rng.gen_range(0..rows.max(cols));
            let diag: Vec<u64> = (0..rows + cols)
                .map(|t| if t < zeros { 0 } else { k.random(&mut rng) })
                .collect();
            let a = Matrix::from_fn(rows, cols, |i, j| diag[i + cols - 1 - j]);
            let g = GeneratorPair::from_dense(&k, Displacement::Toeplitz, &a);
            assert!(g.alpha() <= 2);
            let has_kernel = !a.nullspace(&k).is_empty();
            match nullspace_structured(&k, &g, &mut rng, &opts).unwrap() {
                SolveOutcome::Solution(u) => {
                    assert!(has_kernel);
                    assert!(a.mul_vec(&k, &u).iter().all(|e| *e == 0));
                }
                SolveOutcome::NoSolution(_) => assert!(!has_kernel),
                SolveOutcome::Failure { .. } => panic!("solver failed"),
            }
        }
    }

    #[test]
    fn small_field_is_rejected() {
        let k = PrimeField::new(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = random_gen(&k, Displacement::Toeplitz, 5, 6, 2, &mut rng);
        assert!(matches!(
            nullspace_structured(&k, &g, &mut rng, &StructuredOptions::default()),
            Err(Error::FieldTooSmall { .. })
        ));
    }
}
