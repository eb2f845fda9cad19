//! Linearization through the multiplication maps `Q -> F_{i,j} Q mod P_i`.
//!
//! Block `(i, j)` of the matrix `A'` has columns `X^h F_{i,j} mod P_i` for
//! `h < N_j`; consecutive columns differ by one companion-matrix step, which
//! makes `A'` Toeplitz-like with displacement rank at most `mu + nu`. The
//! unknown vector is the plain concatenation of the `Q_j`, low degree first.

use rand::Rng;

use crate::approx::{solve_with_generator, trim_instance, ApproxInstance};
use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{extend_recurrence, mul_slices, Poly};
use crate::struct_solve::{Displacement, GeneratorPair, SolveOutcome, StructuredOptions, DENSE_LIMIT};

/// Coefficient of `X^{m-1}` in `X^i F mod P` for `i < count`, where `m = deg P`.
pub fn last_coeff_sequence<F: Field>(k: &F, p: &Poly<F>, f: &Poly<F>, count: usize) -> Result<Vec<F::Elem>> {
    let m = match p.degree() {
        Some(m) if m >= 1 => m,
        _ => return Err(Error::BadLength { len: count, degree: 0 }),
    };
    if count == 0 {
        return Ok(Vec::new());
    }
    // b_t is the top coefficient of X^t mod P; it obeys the recurrence of P.
    let mut init = vec![k.zero(); m];
    init[m - 1] = k.one();
    let b = extend_recurrence(k, &init, p, count + m - 1)?;
    // c_i = sum_j f_j b_{i+j}
    let f_rev: Vec<F::Elem> = f.to_vec_len(k, m).into_iter().rev().collect();
    let corr = mul_slices(k, &f_rev, &b);
    Ok((0..count)
        .map(|i| corr.get(i + m - 1).cloned().unwrap_or_else(|| k.zero()))
        .collect())
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect()
}

/// Generator of `A'` under `A - Z A Z^T`.
pub fn build_toeplitz_generators<F: Field>(a: &ApproxInstance<F>) -> Result<GeneratorPair<F>> {
    let k = a.field();
    let row_sizes = a.row_sizes();
    let bounds = a.col_bounds();
    let rows: usize = row_sizes.iter().sum();
    let cols: usize = bounds.iter().sum();
    let row_off = offsets(&row_sizes);
    let col_off = offsets(bounds);

    let mut v = Vec::with_capacity(a.mu() + a.nu());
    let mut w = Vec::with_capacity(a.mu() + a.nu());

    // Companion steps inside each row block: columns -V_i, rows equal to the
    // last row of block i shifted right by one.
    for i in 0..a.mu() {
        let mut col = vec![k.zero(); rows];
        for (r, c) in a.modulus(i).coeffs()[..row_sizes[i]].iter().enumerate() {
            col[row_off[i] + r] = k.neg(c);
        }
        if i + 1 < a.mu() {
            col[row_off[i + 1]] = k.neg(&k.one());
        }
        v.push(col);

        let mut last_row = vec![k.zero(); cols];
        for j in 0..a.nu() {
            let seq = last_coeff_sequence(k, a.modulus(i), a.residue(i, j), bounds[j])?;
            for (h, c) in seq.into_iter().enumerate() {
                let target = col_off[j] + h + 1;
                if target < cols {
                    last_row[target] = c;
                }
            }
        }
        w.push(last_row);
    }

    // First column of each column block: alpha^(0) of block j minus the
    // overflow column alpha^(N_{j-1}) of block j-1.
    for j in 0..a.nu() {
        let mut col = vec![k.zero(); rows];
        for i in 0..a.mu() {
            let cur = a.residue(i, j).to_vec_len(k, row_sizes[i]);
            let prev = if j > 0 {
                a.residue(i, j - 1)
                    .shift(k, bounds[j - 1])
                    .rem(k, a.modulus(i))?
                    .to_vec_len(k, row_sizes[i])
            } else {
                vec![k.zero(); row_sizes[i]]
            };
            for r in 0..row_sizes[i] {
                col[row_off[i] + r] = k.sub(&cur[r], &prev[r]);
            }
        }
        v.push(col);
        let mut unit = vec![k.zero(); cols];
        unit[col_off[j]] = k.one();
        w.push(unit);
    }

    GeneratorPair::new(Displacement::Toeplitz, rows, cols, v, w)
}

/// `A'` materialized by repeated multiplication by `X` modulo each `P_i`.
pub fn dense_build_aprime<F: Field>(a: &ApproxInstance<F>) -> Result<Matrix<F>> {
    let k = a.field();
    let rows = a.total_rows();
    let cols = a.total_cols();
    if rows > DENSE_LIMIT || cols > DENSE_LIMIT {
        return Err(Error::TooLarge { rows, cols });
    }
    let row_sizes = a.row_sizes();
    let row_off = offsets(&row_sizes);
    let col_off = offsets(a.col_bounds());
    let mut out = Matrix::zeros(k, rows, cols);
    for i in 0..a.mu() {
        let m = row_sizes[i];
        let p = a.modulus(i).coeffs();
        for j in 0..a.nu() {
            let mut alpha = a.residue(i, j).to_vec_len(k, m);
            for h in 0..a.col_bounds()[j] {
                for (r, e) in alpha.iter().enumerate() {
                    out.set(row_off[i] + r, col_off[j] + h, e.clone());
                }
                // companion step: X * alpha mod P_i
                let top = alpha[m - 1].clone();
                let mut next = Vec::with_capacity(m);
                next.push(k.neg(&k.mul(&p[0], &top)));
                for r in 1..m {
                    next.push(k.sub(&alpha[r - 1], &k.mul(&p[r], &top)));
                }
                alpha = next;
            }
        }
    }
    Ok(out)
}

/// Solves the instance through the Toeplitz-like system.
pub fn solve_via_toeplitz<F: Field, R: Rng + ?Sized>(
    a: &ApproxInstance<F>,
    rng: &mut R,
    opts: &StructuredOptions,
) -> Result<SolveOutcome<Vec<Poly<F>>>> {
    let (trimmed, trim) = trim_instance(a);
    let generator = build_toeplitz_generators(&trimmed)?;
    solve_with_generator(&trimmed, &trim, &generator, rng, opts)
}
