//! Interpolation through points whose `y` coordinate may be infinite.
//!
//! `Q` passes through `(x, inf)` with multiplicity `m` when the reversal
//! `Y^ell Q(X, 1/Y)` passes through `(x, 0)` with multiplicity `m`, i.e. when
//! `(X - x)^(m - j)` divides `Q_{ell - j}` for `j < m`. Those factors are
//! imposed up front, as in re-encoding.

use rand::Rng;

use super::factored::{build_factored, solve_factored};
use crate::error::{Assumption, Error, Result};
use crate::field::Field;
use crate::poly::{weighted_product, Poly};
use crate::reduction::{vanishes_to_order, MultiPoly, Point};
use crate::solver::SolveOptions;
use crate::struct_solve::SolveOutcome;

/// A point `(x, y)`; `y = None` stands for infinity.
pub struct ExtPoint<F: Field> {
    pub x: F::Elem,
    pub y: Option<F::Elem>,
}

impl<F: Field> Clone for ExtPoint<F> {
    fn clone(&self) -> Self {
        ExtPoint {
            x: self.x.clone(),
            y: self.y.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for ExtPoint<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.y {
            Some(y) => write!(f, "({:?}, {:?})", self.x, y),
            None => write!(f, "({:?}, inf)", self.x),
        }
    }
}

/// Parameters with uniform multiplicity `m` at every point.
pub struct WuParams<F: Field> {
    pub field: F,
    pub k: i64,
    pub m: usize,
    pub ell: usize,
    pub b: i64,
    pub points: Vec<ExtPoint<F>>,
}

impl<F: Field> Clone for WuParams<F> {
    fn clone(&self) -> Self {
        WuParams {
            field: self.field.clone(),
            k: self.k,
            m: self.m,
            ell: self.ell,
            b: self.b,
            points: self.points.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for WuParams<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WuParams")
            .field("k", &self.k)
            .field("m", &self.m)
            .field("ell", &self.ell)
            .field("b", &self.b)
            .field("points", &self.points)
            .finish()
    }
}

impl<F: Field> WuParams<F> {
    fn finite(&self) -> Vec<(F::Elem, F::Elem)> {
        self.points
            .iter()
            .filter_map(|p| p.y.as_ref().map(|y| (p.x.clone(), y.clone())))
            .collect()
    }

    fn infinite_xs(&self) -> Vec<F::Elem> {
        self.points
            .iter()
            .filter(|p| p.y.is_none())
            .map(|p| p.x.clone())
            .collect()
    }

    /// `prod (X - x)` over the points at infinity.
    pub fn g_inf(&self) -> Poly<F> {
        let xs = self.infinite_xs();
        weighted_product(&self.field, &xs, &vec![1; xs.len()])
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.ell == 0 || self.points.is_empty() {
            return Err(Error::InvalidInstance(
                "need m >= 1, ell >= 1 and at least one point".into(),
            ));
        }
        if self.m > self.ell {
            return Err(Error::AssumptionViolated(Assumption::MultiplicityAtMostListSize));
        }
        if self.b <= 0 || self.b <= self.ell as i64 * self.k {
            return Err(Error::AssumptionViolated(Assumption::PositiveWeightBound));
        }
        let mut seen = std::collections::HashSet::new();
        if !self.points.iter().all(|p| seen.insert(p.x.clone())) {
            return Err(Error::DuplicateNode);
        }
        for p in &self.points {
            self.field.validate(&p.x)?;
            if let Some(y) = &p.y {
                self.field.validate(y)?;
            }
        }
        Ok(())
    }
}

/// Solves the instance; infinite points are handled by divisibility.
pub fn wu_interpolate<F: Field, R: Rng + ?Sized>(
    params: &WuParams<F>,
    rng: &mut R,
    opts: &SolveOptions,
) -> Result<SolveOutcome<MultiPoly<F>>> {
    params.validate()?;
    let k = &params.field;
    let (m, ell) = (params.m, params.ell);
    let g_inf = params.g_inf();
    let factors = (0..=ell)
        .map(|j| {
            if j + m > ell {
                g_inf.pow(k, (j + m - ell) as u64)
            } else {
                Poly::one(k)
            }
        })
        .collect();
    let sys = build_factored(k, params.k, params.b, m, &params.finite(), factors)?;
    let out = solve_factored(k, &sys, rng, opts)?;
    if let SolveOutcome::Solution(q) = &out {
        if !verify_wu(params, q) || !wu_divisibility_holds(params, q) {
            return Err(Error::Internal("solution fails the point conditions".into()));
        }
    }
    Ok(out)
}

/// Degree constraints, multiplicities at finite points, and multiplicities
/// of the reversed polynomial at `(x, 0)` for infinite points.
pub fn verify_wu<F: Field>(params: &WuParams<F>, q: &MultiPoly<F>) -> bool {
    let k = &params.field;
    if q.is_zero() || q.s() != 1 || q.y_degree().is_some_and(|d| d > params.ell) {
        return false;
    }
    if q.weighted_degree(&[params.k]).is_some_and(|w| w >= params.b) {
        return false;
    }
    let finite: Vec<Point<F>> = params
        .finite()
        .into_iter()
        .map(|(x, y)| Point::new(x, vec![y], params.m))
        .collect();
    if !finite.iter().all(|p| vanishes_to_order(k, q, &p.x, &p.ys, p.mult)) {
        return false;
    }
    let mut reversed = MultiPoly::zero(1);
    for (j, c) in q.terms() {
        reversed.set(vec![params.ell - j[0]], c.clone());
    }
    params
        .infinite_xs()
        .iter()
        .all(|x| vanishes_to_order(k, &reversed, x, &[k.zero()], params.m))
}

/// Whether `G_inf^(m - j)` divides `Q_{ell - j}` for every `j < m`.
pub fn wu_divisibility_holds<F: Field>(params: &WuParams<F>, q: &MultiPoly<F>) -> bool {
    let k = &params.field;
    let g_inf = params.g_inf();
    (0..params.m.min(params.ell + 1)).all(|j| {
        let Some(c) = q.get(&[params.ell - j]) else {
            return true;
        };
        let divisor = g_inf.pow(k, (params.m - j) as u64);
        c.rem(k, &divisor).is_ok_and(|r| r.is_zero())
    })
}
