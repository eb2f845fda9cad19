//! Linearization through truncated power series: block `(i, j)` is the
//! Hankel matrix of the series `rev(F_{i,j}) / rev(P_i)`, so the whole matrix
//! is mosaic-Hankel with displacement rank at most `mu + nu` under
//! `A - Z A Z`.
//!
//! The unknown vector is the plain concatenation of the `Q_j`, low degree
//! first, as for the Toeplitz-like system.

use rand::Rng;

use crate::approx::{solve_with_generator, trim_instance, ApproxInstance};
use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;
use crate::struct_solve::{Displacement, GeneratorPair, SolveOutcome, StructuredOptions, DENSE_LIMIT};

/// Block bookkeeping of the mosaic-Hankel system.
#[derive(Clone, Debug, Eq, PartialEq)]
pub struct EkeLayout {
    /// Largest column bound.
    pub beta: usize,
    /// `M_i + beta - 1`.
    pub series_len: Vec<usize>,
    /// `beta - N_j`.
    pub col_gap: Vec<usize>,
    /// First row of each row block.
    pub row_offsets: Vec<usize>,
    /// Last column of each column block.
    pub col_offsets: Vec<usize>,
}

impl EkeLayout {
    pub fn new<F: Field>(a: &ApproxInstance<F>) -> Self {
        let beta = *a.col_bounds().iter().max().expect("at least one column");
        let row_sizes = a.row_sizes();
        let mut row_offsets = Vec::with_capacity(a.mu());
        let mut acc = 0;
        for &m in &row_sizes {
            row_offsets.push(acc);
            acc += m;
        }
        let mut col_offsets = Vec::with_capacity(a.nu());
        let mut acc = 0;
        for &n in a.col_bounds() {
            acc += n;
            col_offsets.push(acc - 1);
        }
        EkeLayout {
            beta,
            series_len: row_sizes.iter().map(|m| m + beta - 1).collect(),
            col_gap: a.col_bounds().iter().map(|n| beta - n).collect(),
            row_offsets,
            col_offsets,
        }
    }
}

/// `rev(F_{i,j}) / rev(P_i) mod X^{M_i + N_j - 1}` for every block.
pub fn compute_s_star<F: Field>(a: &ApproxInstance<F>) -> Result<Vec<Vec<Poly<F>>>> {
    let k = a.field();
    let row_sizes = a.row_sizes();
    (0..a.mu())
        .map(|i| {
            let m = row_sizes[i];
            let prec = m + a.col_bounds().iter().max().copied().unwrap_or(1) - 1;
            let inv = a.modulus(i).reverse(k, m)?.series_inv(k, prec)?;
            (0..a.nu())
                .map(|j| {
                    let len = m + a.col_bounds()[j] - 1;
                    Ok(a.residue(i, j).reverse(k, m - 1)?.mul_trunc(k, &inv, len))
                })
                .collect()
        })
        .collect()
}

/// Entry accessor for the blocks `A_{i,j}[u][v] = S*_{i,j}[u + v]`, with
/// zero outside the block grid and outside each block.
struct Blocks<'a, F: Field> {
    field: &'a F,
    series: &'a [Vec<Poly<F>>],
    row_sizes: Vec<usize>,
    col_bounds: &'a [usize],
}

impl<F: Field> Blocks<'_, F> {
    fn entry(&self, i: isize, j: usize, u: isize, v: usize) -> F::Elem {
        let k = self.field;
        if i < 0 || u < 0 || j >= self.col_bounds.len() {
            return k.zero();
        }
        let (i, u) = (i as usize, u as usize);
        if i >= self.row_sizes.len() || u >= self.row_sizes[i] || v >= self.col_bounds[j] {
            return k.zero();
        }
        self.series[i][j].coeff(k, u + v)
    }
}

/// Generator of the mosaic-Hankel matrix under `A - Z A Z`, with the layout.
pub fn build_hankel_generators<F: Field>(a: &ApproxInstance<F>) -> Result<(GeneratorPair<F>, EkeLayout)> {
    let k = a.field();
    let layout = EkeLayout::new(a);
    let series = compute_s_star(a)?;
    let blocks = Blocks {
        field: k,
        series: &series,
        row_sizes: a.row_sizes(),
        col_bounds: a.col_bounds(),
    };
    let rows = a.total_rows();
    let cols = a.total_cols();
    let bounds = a.col_bounds();
    let mut v = Vec::with_capacity(a.mu() + a.nu());
    let mut w = Vec::with_capacity(a.mu() + a.nu());

    // Last column of each column block, below the first row of each row block.
    for j in 0..a.nu() {
        let last = bounds[j] - 1;
        let mut col = vec![k.zero(); rows];
        for i in 0..a.mu() {
            for r in 1..blocks.row_sizes[i] {
                let ri = r as isize;
                let cur = blocks.entry(i as isize, j, ri, last);
                let below_right = blocks.entry(i as isize, j + 1, ri - 1, 0);
                col[layout.row_offsets[i] + r] = k.sub(&cur, &below_right);
            }
        }
        v.push(col);
        let mut unit = vec![k.zero(); cols];
        unit[layout.col_offsets[j]] = k.one();
        w.push(unit);
    }

    // First row of each row block.
    for i in 0..a.mu() {
        let ii = i as isize;
        let mut unit = vec![k.zero(); rows];
        unit[layout.row_offsets[i]] = k.one();
        v.push(unit);
        let prev_last = if i > 0 {
            blocks.row_sizes[i - 1] as isize - 1
        } else {
            -1
        };
        let mut row = Vec::with_capacity(cols);
        for j in 0..a.nu() {
            for r in 0..bounds[j] {
                let cur = blocks.entry(ii, j, 0, r);
                let above = if r + 1 < bounds[j] {
                    blocks.entry(ii - 1, j, prev_last, r + 1)
                } else {
                    blocks.entry(ii - 1, j + 1, prev_last, 0)
                };
                row.push(k.sub(&cur, &above));
            }
        }
        w.push(row);
    }

    let g = GeneratorPair::new(Displacement::Hankel, rows, cols, v, w)?;
    Ok((g, layout))
}

/// The mosaic-Hankel matrix materialized from the series.
pub fn dense_build_a<F: Field>(a: &ApproxInstance<F>) -> Result<Matrix<F>> {
    let rows = a.total_rows();
    let cols = a.total_cols();
    if rows > DENSE_LIMIT || cols > DENSE_LIMIT {
        return Err(Error::TooLarge { rows, cols });
    }
    let k = a.field();
    let series = compute_s_star(a)?;
    let layout = EkeLayout::new(a);
    let row_sizes = a.row_sizes();
    let mut out = Matrix::zeros(k, rows, cols);
    for i in 0..a.mu() {
        let mut col_start = 0;
        for j in 0..a.nu() {
            for u in 0..row_sizes[i] {
                for v in 0..a.col_bounds()[j] {
                    out.set(layout.row_offsets[i] + u, col_start + v, series[i][j].coeff(k, u + v));
                }
            }
            col_start += a.col_bounds()[j];
        }
    }
    Ok(out)
}

/// Solves the instance through the mosaic-Hankel system.
pub fn solve_via_hankel<F: Field, R: Rng + ?Sized>(
    a: &ApproxInstance<F>,
    rng: &mut R,
    opts: &StructuredOptions,
) -> Result<SolveOutcome<Vec<Poly<F>>>> {
    let (trimmed, trim) = trim_instance(a);
    let (generator, _) = build_hankel_generators(&trimmed)?;
    solve_with_generator(&trimmed, &trim, &generator, rng, opts)
}
