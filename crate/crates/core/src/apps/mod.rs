//! Decoding-oriented interpolation pipelines built on the reduction and the
//! approximation solvers.

mod factored;
mod reencode;
mod soft;
mod wu;

pub use reencode::{build_reencode, reencode_interpolate, ReencodeSystem};
pub use soft::{build_soft_reduction, soft_group, soft_interpolate, SoftGrouping};
pub use wu::{verify_wu, wu_divisibility_holds, wu_interpolate, ExtPoint, WuParams};

use rand::Rng;

use crate::error::{Assumption, Error, Result};
use crate::field::Field;
use crate::poly::Poly;
use crate::reduction::{
    assemble_q, build_reduction, preprocess_high_multiplicity, trivial_weight_check, verify_solution,
    InterpolationInstance, MultiPoly, Point, TrivialCheck,
};
use crate::solver::{solve_approx, SolveOptions};
use crate::struct_solve::{NoSolutionReason, SolveOutcome};

/// Univariate (`s = 1`) interpolation parameters: weight `k`, list size
/// `ell`, degree bound `b` and the points with their multiplicities.
pub struct GsParams<F: Field> {
    pub field: F,
    pub k: i64,
    pub ell: usize,
    pub b: i64,
    pub points: Vec<Point<F>>,
}

impl<F: Field> Clone for GsParams<F> {
    fn clone(&self) -> Self {
        GsParams {
            field: self.field.clone(),
            k: self.k,
            ell: self.ell,
            b: self.b,
            points: self.points.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for GsParams<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GsParams")
            .field("k", &self.k)
            .field("ell", &self.ell)
            .field("b", &self.b)
            .field("points", &self.points)
            .finish()
    }
}

impl<F: Field> GsParams<F> {
    /// Points `(xs[r], ys[r])`, all with multiplicity `m`.
    pub fn uniform(field: F, k: i64, m: usize, ell: usize, b: i64, xs: &[F::Elem], ys: &[F::Elem]) -> Self {
        let points = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| Point::new(x.clone(), vec![y.clone()], m))
            .collect();
        GsParams {
            field,
            k,
            ell,
            b,
            points,
        }
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Largest multiplicity.
    pub fn m(&self) -> usize {
        self.points.iter().map(|p| p.mult).max().unwrap_or(0)
    }

    /// Every assumption the parameters violate.
    pub fn violated_assumptions(&self) -> Vec<Assumption> {
        let mut out = Vec::new();
        if self.m() > self.ell {
            out.push(Assumption::MultiplicityAtMostListSize);
        }
        if self.b <= 0 || self.b <= self.ell as i64 * self.k {
            out.push(Assumption::PositiveWeightBound);
        }
        if self.k < 0 || self.k >= self.n() as i64 {
            out.push(Assumption::WeightBelowPointCount);
        }
        if self.points.iter().any(|p| p.mult != self.m()) {
            out.push(Assumption::UniformMultiplicity);
        }
        out
    }

    /// Fails on the first violated assumption in `required`.
    pub(crate) fn require(&self, required: &[Assumption]) -> Result<()> {
        match self.violated_assumptions().into_iter().find(|a| required.contains(a)) {
            Some(a) => Err(Error::AssumptionViolated(a)),
            None => Ok(()),
        }
    }

    pub fn to_instance(&self) -> Result<InterpolationInstance<F>> {
        InterpolationInstance::new(
            self.field.clone(),
            1,
            self.ell,
            self.b,
            vec![self.k],
            self.points.clone(),
        )
    }
}

/// Solves a general interpolation instance: large weights are answered
/// directly, multiplicities above `ell` are factored out, repeated nodes go
/// through point grouping, and every answer is checked against `inst`.
pub fn interpolate<F: Field, R: Rng + ?Sized>(
    inst: &InterpolationInstance<F>,
    rng: &mut R,
    opts: &SolveOptions,
) -> Result<SolveOutcome<MultiPoly<F>>> {
    if !inst.has_distinct_nodes() {
        return soft_interpolate(inst, rng, opts);
    }
    match trivial_weight_check(inst) {
        TrivialCheck::Solution(q) => return Ok(SolveOutcome::Solution(q)),
        TrivialCheck::NoSolution => return Ok(SolveOutcome::NoSolution(NoSolutionReason::WeightBound)),
        TrivialCheck::NotApplicable => {}
    }
    let (reduced, multiplier) = preprocess_high_multiplicity(inst)?;
    let (plan, approx) = match build_reduction(&reduced) {
        Err(Error::NoSolutionSpace) => return Ok(SolveOutcome::NoSolution(NoSolutionReason::NoSolutionSpace)),
        other => other?,
    };
    let k = inst.field();
    finish(inst, solve_approx(&approx, rng, opts)?, |qs| {
        Ok(assemble_q(&plan, &qs)?.mul_univariate(k, &multiplier))
    })
}

/// Maps a solved approximation problem to an interpolation polynomial and
/// checks it against the original instance.
pub(crate) fn finish<F: Field>(
    inst: &InterpolationInstance<F>,
    outcome: SolveOutcome<Vec<Poly<F>>>,
    assemble: impl FnOnce(Vec<Poly<F>>) -> Result<MultiPoly<F>>,
) -> Result<SolveOutcome<MultiPoly<F>>> {
    Ok(match outcome {
        SolveOutcome::Solution(qs) => {
            let q = assemble(qs)?;
            if !verify_solution(inst, &q) {
                return Err(Error::Internal("interpolation polynomial fails verification".into()));
            }
            SolveOutcome::Solution(q)
        }
        SolveOutcome::NoSolution(r) => SolveOutcome::NoSolution(r),
        SolveOutcome::Failure { attempts } => SolveOutcome::Failure { attempts },
    })
}

/// Univariate interpolation under the standing assumptions. Multiplicities
/// above `ell` and weights `k >= n` are accepted and handled by their
/// shortcuts.
pub fn gs_interpolate<F: Field, R: Rng + ?Sized>(
    params: &GsParams<F>,
    rng: &mut R,
    opts: &SolveOptions,
) -> Result<SolveOutcome<MultiPoly<F>>> {
    params.require(&[Assumption::PositiveWeightBound, Assumption::UniformMultiplicity])?;
    if params.k < 0 {
        return Err(Error::AssumptionViolated(Assumption::WeightBelowPointCount));
    }
    interpolate(&params.to_instance()?, rng, opts)
}
