//! Interpolation at uniform-multiplicity points where part of the answer is
//! known in advance: `Q_j = factor_j * Q*_j`, and only the `Q*_j` are
//! unknown. Re-encoding and points at infinity both reduce to this form.

use rand::Rng;

use crate::approx::ApproxInstance;
use crate::error::Result;
use crate::field::Field;
use crate::poly::{lagrange_interp, Poly};
use crate::reduction::{graded_indices, residue_table, MultiPoly};
use crate::solver::{solve_approx, SolveOptions};
use crate::struct_solve::{NoSolutionReason, SolveOutcome};

pub(crate) struct FactoredSystem<F: Field> {
    /// `Y` exponents `j` whose `Q*_j` may be nonzero.
    pub columns: Vec<usize>,
    /// `factor_j` for each kept column.
    pub factors: Vec<Poly<F>>,
    /// `None` when there are no conditions left to impose.
    pub approx: Option<ApproxInstance<F>>,
}

/// `factors[j]` for `j = 0..=ell`; `points` are the remaining `(x, y)` with
/// multiplicity `m`, whose `x` must be distinct.
pub(crate) fn build_factored<F: Field>(
    k: &F,
    weight: i64,
    b: i64,
    m: usize,
    points: &[(F::Elem, F::Elem)],
    factors: Vec<Poly<F>>,
) -> Result<FactoredSystem<F>> {
    let mut columns = Vec::new();
    let mut bounds = Vec::new();
    let mut kept = Vec::new();
    for (j, f) in factors.into_iter().enumerate() {
        let bound = b - j as i64 * weight - (f.len() as i64 - 1);
        if bound > 0 {
            columns.push(j);
            bounds.push(bound as usize);
            kept.push(f);
        }
    }
    if columns.is_empty() || points.is_empty() {
        return Ok(FactoredSystem {
            columns,
            factors: kept,
            approx: None,
        });
    }
    let xs: Vec<F::Elem> = points.iter().map(|p| p.0.clone()).collect();
    let ys: Vec<F::Elem> = points.iter().map(|p| p.1.clone()).collect();
    let g = crate::poly::weighted_product(k, &xs, &vec![1; xs.len()]);
    let level_moduli: Vec<Poly<F>> = (0..m).map(|t| g.pow(k, (m - t) as u64)).collect();
    let interpolant = if columns.iter().any(|&j| j > 0) {
        Some(lagrange_interp(k, &xs, &ys)?)
    } else {
        None
    };
    let rows = graded_indices(1, m - 1);
    let gamma: Vec<Vec<usize>> = columns.iter().map(|&j| vec![j]).collect();
    let col_factors: Vec<Option<Poly<F>>> = kept.iter().map(|f| Some(f.clone())).collect();
    let table = residue_table(k, &rows, &gamma, &level_moduli, &[interpolant], &col_factors)?;
    let moduli = rows.iter().map(|i| level_moduli[i[0]].clone()).collect();
    let approx = ApproxInstance::new(k.clone(), moduli, table, bounds)?;
    Ok(FactoredSystem {
        columns,
        factors: kept,
        approx: Some(approx),
    })
}

/// Solves the system and returns `Q = sum_j factor_j Q*_j Y^j`.
pub(crate) fn solve_factored<F: Field, R: Rng + ?Sized>(
    k: &F,
    sys: &FactoredSystem<F>,
    rng: &mut R,
    opts: &SolveOptions,
) -> Result<SolveOutcome<MultiPoly<F>>> {
    let assemble = |stars: Vec<Poly<F>>| {
        let mut q = MultiPoly::zero(1);
        for ((&j, f), star) in sys.columns.iter().zip(&sys.factors).zip(stars) {
            q.set(vec![j], f.mul(k, &star));
        }
        q
    };
    if sys.columns.is_empty() {
        return Ok(SolveOutcome::NoSolution(NoSolutionReason::NoSolutionSpace));
    }
    match &sys.approx {
        // Nothing to satisfy: the first admissible column alone is a solution.
        None => {
            let mut stars = vec![Poly::zero(); sys.columns.len()];
            stars[0] = Poly::one(k);
            Ok(SolveOutcome::Solution(assemble(stars)))
        }
        Some(a) => Ok(solve_approx(a, rng, opts)?.map(assemble)),
    }
}
