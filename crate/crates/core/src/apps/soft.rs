//! Points with repeated `x` coordinates: split them into groups with
//! distinct nodes, reduce each group separately with the same monomial
//! support, and stack the resulting congruences.

use rand::Rng;

use super::finish;
use crate::approx::ApproxInstance;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::reduction::{assemble_q, build_reduction, InterpolationInstance, MultiPoly, Point};
use crate::solver::{solve_approx, SolveOptions};
use crate::struct_solve::{NoSolutionReason, SolveOutcome};

pub struct SoftGrouping<F: Field> {
    pub groups: Vec<Vec<Point<F>>>,
    /// `sum_h` of the largest multiplicity in group `h`.
    pub mult_sum: usize,
}

impl<F: Field> SoftGrouping<F> {
    /// Largest number of points sharing one `x`.
    pub fn q(&self) -> usize {
        self.groups.len()
    }
}

/// Sorts the points sharing each `x` by decreasing multiplicity and puts the
/// `h`-th of them into group `h`. Points keep their input order within a
/// group.
pub fn soft_group<F: Field>(points: &[Point<F>]) -> SoftGrouping<F> {
    let mut by_x: std::collections::HashMap<&F::Elem, Vec<usize>> = std::collections::HashMap::new();
    for (r, p) in points.iter().enumerate() {
        by_x.entry(&p.x).or_default().push(r);
    }
    let mut group_of = vec![0; points.len()];
    for idx in by_x.values_mut() {
        // stable, so equal multiplicities keep input order
        idx.sort_by_key(|&r| std::cmp::Reverse(points[r].mult));
        for (h, &r) in idx.iter().enumerate() {
            group_of[r] = h;
        }
    }
    let q = by_x.values().map(Vec::len).max().unwrap_or(0);
    let mut groups = vec![Vec::new(); q];
    for (r, p) in points.iter().enumerate() {
        groups[group_of[r]].push(p.clone());
    }
    let mult_sum = groups.iter().map(|g| g.iter().map(|p| p.mult).max().unwrap_or(0)).sum();
    SoftGrouping { groups, mult_sum }
}

/// Stacks the reductions of all groups into one approximation problem.
pub fn build_soft_reduction<F: Field>(
    inst: &InterpolationInstance<F>,
) -> Result<(crate::reduction::ReductionPlan, ApproxInstance<F>)> {
    let grouping = soft_group(inst.points());
    let mut plan = None;
    let mut moduli = Vec::new();
    let mut residues = Vec::new();
    for group in grouping.groups {
        let sub = InterpolationInstance::new(
            inst.field().clone(),
            inst.s(),
            inst.ell(),
            inst.b(),
            inst.weights().to_vec(),
            group,
        )?;
        let (p, a) = build_reduction(&sub)?;
        for i in 0..a.mu() {
            moduli.push(a.modulus(i).clone());
            residues.push((0..a.nu()).map(|j| a.residue(i, j).clone()).collect());
        }
        plan.get_or_insert(p);
    }
    let plan = plan.ok_or_else(|| Error::InvalidInstance("no points".into()))?;
    let approx = ApproxInstance::new(inst.field().clone(), moduli, residues, plan.col_bounds().to_vec())?;
    Ok((plan, approx))
}

/// Solves an instance whose nodes may repeat.
pub fn soft_interpolate<F: Field, R: Rng + ?Sized>(
    inst: &InterpolationInstance<F>,
    rng: &mut R,
    opts: &SolveOptions,
) -> Result<SolveOutcome<MultiPoly<F>>> {
    let (plan, approx) = match build_soft_reduction(inst) {
        Err(Error::NoSolutionSpace) => return Ok(SolveOutcome::NoSolution(NoSolutionReason::NoSolutionSpace)),
        other => other?,
    };
    finish(inst, solve_approx(&approx, rng, opts)?, |qs| assemble_q(&plan, &qs))
}
