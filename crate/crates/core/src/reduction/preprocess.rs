use super::multipoly::MultiPoly;
use super::{InterpolationInstance, Point};
use crate::error::Result;
use crate::field::Field;
use crate::poly::{weighted_product, Poly};

/// Outcome of the large-weight shortcut.
#[derive(Clone, Debug, PartialEq)]
pub enum TrivialCheck<F: Field> {
    NotApplicable,
    Solution(MultiPoly<F>),
    NoSolution,
}

/// Caps multiplicities at `ell` by factoring out the forced univariate part.
///
/// Any solution `Q` with multiplicity `m_i > ell` at a point is divisible by
/// `(X - x_i)^(m_i - ell)`; dividing it out leaves an instance with
/// multiplicities `min(m_i, ell)` and bound `b - d`. Returns that instance
/// and the multiplier `prod (X - x_i)^(m_i - ell)` of degree `d`.
pub fn preprocess_high_multiplicity<F: Field>(
    inst: &InterpolationInstance<F>,
) -> Result<(InterpolationInstance<F>, Poly<F>)> {
    let k = inst.field();
    let ell = inst.ell();
    if inst.max_mult() <= ell {
        return Ok((inst.clone(), Poly::one(k)));
    }
    let xs: Vec<F::Elem> = inst.points().iter().map(|p| p.x.clone()).collect();
    let excess: Vec<usize> = inst.points().iter().map(|p| p.mult.saturating_sub(ell)).collect();
    let multiplier = weighted_product(k, &xs, &excess);
    let d = multiplier.len() as i64 - 1;
    let points = inst
        .points()
        .iter()
        .map(|p| Point {
            x: p.x.clone(),
            ys: p.ys.clone(),
            mult: p.mult.min(ell),
        })
        .collect();
    let reduced = inst.with_points_and_bound(points, inst.b() - d)?;
    Ok((reduced, multiplier))
}

/// When every weight is at least the number of points, the problem has the
/// explicit answer `prod (X - x_i)^(m_i)` if its degree is below `b`, and no
/// solution otherwise.
pub fn trivial_weight_check<F: Field>(inst: &InterpolationInstance<F>) -> TrivialCheck<F> {
    let n = inst.points().len() as i64;
    if inst.weights().iter().any(|&w| w < n) {
        return TrivialCheck::NotApplicable;
    }
    let k = inst.field();
    let xs: Vec<F::Elem> = inst.points().iter().map(|p| p.x.clone()).collect();
    let mults: Vec<usize> = inst.points().iter().map(|p| p.mult).collect();
    let d: usize = mults.iter().sum();
    if inst.b() > d as i64 {
        TrivialCheck::Solution(MultiPoly::from_univariate(inst.s(), weighted_product(k, &xs, &mults)))
    } else {
        TrivialCheck::NoSolution
    }
}
