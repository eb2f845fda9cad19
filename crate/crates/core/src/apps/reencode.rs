//! Interpolation after re-encoding: the first `n0` points have `y = 0`, so
//! `(X - x)^(m - j)` divides `Q_j` for each of them and `j < m`. Writing
//! `Q_j = G0^(m - j) Q*_j` with `G0 = prod_{r < n0} (X - x_r)` leaves only
//! the conditions at the other points.

use rand::Rng;

use super::factored::{build_factored, solve_factored, FactoredSystem};
use super::GsParams;
use crate::approx::ApproxInstance;
use crate::error::{Assumption, Error, Result};
use crate::field::Field;
use crate::poly::{weighted_product, Poly};
use crate::reduction::{verify_solution, MultiPoly};
use crate::solver::SolveOptions;
use crate::struct_solve::SolveOutcome;

/// The reduced approximation problem of a re-encoded instance.
pub struct ReencodeSystem<F: Field> {
    inner: FactoredSystem<F>,
    /// `prod_{r < n0} (X - x_r)`.
    pub g0: Poly<F>,
}

impl<F: Field> ReencodeSystem<F> {
    /// `None` when every point has `y = 0` and nothing remains to solve.
    pub fn approx(&self) -> Option<&ApproxInstance<F>> {
        self.inner.approx.as_ref()
    }

    /// The `Y` exponents whose coefficients are unknowns.
    pub fn columns(&self) -> &[usize] {
        &self.inner.columns
    }
}

/// Checks the preconditions and builds the reduced problem.
pub fn build_reencode<F: Field>(params: &GsParams<F>, n0: usize) -> Result<ReencodeSystem<F>> {
    params.require(&[
        Assumption::MultiplicityAtMostListSize,
        Assumption::PositiveWeightBound,
        Assumption::WeightBelowPointCount,
        Assumption::UniformMultiplicity,
    ])?;
    let k = &params.field;
    if (n0 as i64) < params.k + 1 || n0 > params.n() {
        return Err(Error::PreconditionViolated(format!(
            "need k + 1 <= n0 <= n, got n0 = {n0} with k = {} and n = {}",
            params.k,
            params.n()
        )));
    }
    let (zeros, rest) = params.points.split_at(n0);
    if zeros.iter().any(|p| !k.is_zero(&p.ys[0])) || rest.iter().any(|p| k.is_zero(&p.ys[0])) {
        return Err(Error::PreconditionViolated(
            "the first n0 points must have y = 0 and the others y != 0".into(),
        ));
    }
    let m = params.m();
    let xs0: Vec<F::Elem> = zeros.iter().map(|p| p.x.clone()).collect();
    let g0 = weighted_product(k, &xs0, &vec![1; n0]);
    let factors = (0..=params.ell)
        .map(|j| if j < m { g0.pow(k, (m - j) as u64) } else { Poly::one(k) })
        .collect();
    let others: Vec<(F::Elem, F::Elem)> = rest.iter().map(|p| (p.x.clone(), p.ys[0].clone())).collect();
    let inner = build_factored(k, params.k, params.b, m, &others, factors)?;
    Ok(ReencodeSystem { inner, g0 })
}

/// Solves a re-encoded instance; the first `n0` points must have `y = 0`.
pub fn reencode_interpolate<F: Field, R: Rng + ?Sized>(
    params: &GsParams<F>,
    n0: usize,
    rng: &mut R,
    opts: &SolveOptions,
) -> Result<SolveOutcome<MultiPoly<F>>> {
    let sys = build_reencode(params, n0)?;
    let out = solve_factored(&params.field, &sys.inner, rng, opts)?;
    if let SolveOutcome::Solution(q) = &out {
        if !verify_solution(&params.to_instance()?, q) {
            return Err(Error::Internal("re-encoded solution fails verification".into()));
        }
    }
    Ok(out)
}
