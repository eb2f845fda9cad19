//! From interpolation with multiplicities to simultaneous approximations.
//!
//! For a point `(x, y)` of multiplicity `m`, `Q` vanishes to order `m` iff
//! every Hasse derivative `Q^[i]` with `|i| < m` vanishes to order `m - |i|`
//! at `X = x` once `Y` is replaced by the interpolant `R`. Gathering all
//! points by the CRT turns each `i` into one congruence modulo
//! `P_i = prod_{m_r > |i|} (X - x_r)^(m_r - |i|)` with residues
//! `F_{i,j} = binom(j, i) R^(j - i) mod P_i`.

mod multipoly;
mod preprocess;
mod verify;

use std::collections::{HashMap, HashSet};

pub(crate) use multipoly::dot;
pub use multipoly::MultiPoly;
pub use preprocess::{preprocess_high_multiplicity, trivial_weight_check, TrivialCheck};
pub use verify::{hasse_shift_expand, vanishes_to_order, verify_solution, Binomials};

use crate::approx::ApproxInstance;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{lagrange_interp, weighted_product, Poly};

/// An interpolation point `(x, y_1..y_s)` with its multiplicity.
pub struct Point<F: Field> {
    pub x: F::Elem,
    pub ys: Vec<F::Elem>,
    pub mult: usize,
}

impl<F: Field> Clone for Point<F> {
    fn clone(&self) -> Self {
        Point {
            x: self.x.clone(),
            ys: self.ys.clone(),
            mult: self.mult,
        }
    }
}

impl<F: Field> std::fmt::Debug for Point<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?}; m={})", self.x, self.ys, self.mult)
    }
}

impl<F: Field> Point<F> {
    pub fn new(x: F::Elem, ys: Vec<F::Elem>, mult: usize) -> Self {
        Point { x, ys, mult }
    }
}

/// Find `Q != 0` with `deg_Y Q <= ell`, weighted degree `< b`, vanishing to
/// order `m_r` at each point.
#[derive(Clone, Debug)]
pub struct InterpolationInstance<F: Field> {
    field: F,
    s: usize,
    ell: usize,
    b: i64,
    weights: Vec<i64>,
    points: Vec<Point<F>>,
    distinct_nodes: bool,
}

impl<F: Field> InterpolationInstance<F> {
    /// Instance with pairwise distinct `x` coordinates.
    pub fn new(field: F, s: usize, ell: usize, b: i64, weights: Vec<i64>, points: Vec<Point<F>>) -> Result<Self> {
        let inst = Self::with_repeated_nodes(field, s, ell, b, weights, points)?;
        if !inst.distinct_nodes {
            return Err(Error::DuplicateNode);
        }
        Ok(inst)
    }

    /// Instance whose `x` coordinates may repeat (soft-decision inputs).
    pub fn with_repeated_nodes(
        field: F,
        s: usize,
        ell: usize,
        b: i64,
        weights: Vec<i64>,
        points: Vec<Point<F>>,
    ) -> Result<Self> {
        let invalid = |msg: &str| Err(Error::InvalidInstance(msg.into()));
        if s == 0 || ell == 0 {
            return invalid("need s >= 1 and ell >= 1");
        }
        if weights.len() != s {
            return invalid("need one weight per Y variable");
        }
        if points.is_empty() {
            return invalid("need at least one point");
        }
        for p in &points {
            if p.ys.len() != s || p.mult == 0 {
                return invalid("each point needs s coordinates and multiplicity >= 1");
            }
            field.validate(&p.x)?;
            p.ys.iter().try_for_each(|y| field.validate(y))?;
        }
        let mut seen = HashSet::new();
        let distinct_nodes = points.iter().all(|p| seen.insert(p.x.clone()));
        Ok(InterpolationInstance {
            field,
            s,
            ell,
            b,
            weights,
            points,
            distinct_nodes,
        })
    }

    pub(crate) fn with_points_and_bound(&self, points: Vec<Point<F>>, b: i64) -> Result<Self> {
        let inst = Self::with_repeated_nodes(self.field.clone(), self.s, self.ell, b, self.weights.clone(), points)?;
        Ok(inst)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn ell(&self) -> usize {
        self.ell
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
    pub fn points(&self) -> &[Point<F>] {
        &self.points
    }
    pub fn has_distinct_nodes(&self) -> bool {
        self.distinct_nodes
    }
    pub fn max_mult(&self) -> usize {
        self.points.iter().map(|p| p.mult).max().unwrap_or(0)
    }

    /// Number of linear conditions, `sum_r binom(s + m_r, s + 1)`.
    pub fn condition_count(&self) -> usize {
        self.points.iter().map(|p| binomial(self.s + p.mult, self.s + 1)).sum()
    }

    /// Number of unknown coefficients, `sum_{j in Gamma} (b - j.k)`.
    pub fn unknown_count(&self) -> usize {
        monomial_support(self.s, self.ell, self.b, &self.weights)
            .iter()
            .map(|j| (self.b - dot(j, &self.weights)) as usize)
            .sum()
    }
}

pub(crate) fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1usize, |acc, t| acc * (n - t) / (t + 1))
}

/// All exponent vectors of length `s` with total degree at most `max_total`,
/// ordered by total degree and then lexicographically from the largest first
/// coordinate down (so `Y_1` precedes `Y_2`).
pub fn graded_indices(s: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn compositions(s: usize, total: usize, out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        if s == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            compositions(s - 1, total - first, out, prefix);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=max_total {
        compositions(s, d, &mut out, &mut Vec::new());
    }
    out
}

/// The exponent vectors `j` with `|j| <= ell` and `j.k < b`, in graded order.
pub fn monomial_support(s: usize, ell: usize, b: i64, weights: &[i64]) -> Vec<Vec<usize>> {
    graded_indices(s, ell)
        .into_iter()
        .filter(|j| dot(j, weights) < b)
        .collect()
}

/// Index bookkeeping linking the two problems: row blocks correspond to
/// multi-indices `i` with `|i| < m`, columns to exponent vectors in `Gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionPlan {
    s: usize,
    gamma: Vec<Vec<usize>>,
    rows: Vec<Vec<usize>>,
    row_sizes: Vec<usize>,
    col_bounds: Vec<usize>,
}

impl ReductionPlan {
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn mu(&self) -> usize {
        self.rows.len()
    }
    pub fn nu(&self) -> usize {
        self.gamma.len()
    }
    pub fn gamma(&self) -> &[Vec<usize>] {
        &self.gamma
    }
    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }
    pub fn row_sizes(&self) -> &[usize] {
        &self.row_sizes
    }
    pub fn col_bounds(&self) -> &[usize] {
        &self.col_bounds
    }
}

/// Computes `binom(j, i) R^(j-i) * factor_j mod P_{level(i)}` for every row
/// `i` and column `j`.
///
/// `moduli[t]` is the modulus shared by all rows with `|i| = t`; powers of
/// `R` are built incrementally and shared between rows of the same level.
pub(crate) fn residue_table<F: Field>(
    k: &F,
    rows: &[Vec<usize>],
    gamma: &[Vec<usize>],
    moduli: &[Poly<F>],
    interpolants: &[Option<Poly<F>>],
    col_factors: &[Option<Poly<F>>],
) -> Result<Vec<Vec<Poly<F>>>> {
    let max_exp = gamma.iter().flat_map(|j| j.iter().copied()).max().unwrap_or(0);
    let binom = Binomials::new(k, max_exp);
    let mut caches: Vec<HashMap<Vec<usize>, Poly<F>>> = vec![HashMap::new(); moduli.len()];
    let mut reduced_r: Vec<Vec<Option<Poly<F>>>> = vec![Vec::new(); moduli.len()];
    let mut table = Vec::with_capacity(rows.len());
    for i in rows {
        let level: usize = i.iter().sum();
        let p = &moduli[level];
        if reduced_r[level].is_empty() {
            reduced_r[level] = interpolants
                .iter()
                .map(|r| r.as_ref().map(|r| r.rem(k, p)).transpose())
                .collect::<Result<_>>()?;
        }
        let mut row = Vec::with_capacity(gamma.len());
        for (col, j) in gamma.iter().enumerate() {
            let c = binom.multi(k, j, i);
            if k.is_zero(&c) {
                row.push(Poly::zero());
                continue;
            }
            let e: Vec<usize> = j.iter().zip(i).map(|(a, b)| a - b).collect();
            let pw = power(k, &e, p, &reduced_r[level], &mut caches[level])?;
            let mut f = pw.scale(k, &c);
            if let Some(g) = &col_factors[col] {
                f = f.mul(k, g).rem(k, p)?;
            }
            row.push(f);
        }
        table.push(row);
    }
    Ok(table)
}

fn power<F: Field>(
    k: &F,
    e: &[usize],
    p: &Poly<F>,
    rs: &[Option<Poly<F>>],
    cache: &mut HashMap<Vec<usize>, Poly<F>>,
) -> Result<Poly<F>> {
    if let Some(v) = cache.get(e) {
        return Ok(v.clone());
    }
    let value = match e.iter().position(|&x| x > 0) {
        None => Poly::one(k).rem(k, p)?,
        Some(t) => {
            let mut prev = e.to_vec();
            prev[t] -= 1;
            let r = rs[t]
                .as_ref()
                .ok_or_else(|| Error::Internal(format!("interpolant for Y_{} was not computed", t + 1)))?;
            power(k, &prev, p, rs, cache)?.mul(k, r).rem(k, p)?
        }
    };
    cache.insert(e.to_vec(), value.clone());
    Ok(value)
}

/// Builds the approximation problem equivalent to `inst`.
///
/// The interpolant `R_t` is computed whenever some exponent vector in
/// `Gamma` involves `Y_t`; with negative weights that can happen even when
/// `Y_t` alone is not in `Gamma`.
pub fn build_reduction<F: Field>(inst: &InterpolationInstance<F>) -> Result<(ReductionPlan, ApproxInstance<F>)> {
    if !inst.has_distinct_nodes() {
        return Err(Error::DuplicateNode);
    }
    let k = inst.field();
    let s = inst.s();
    let gamma = monomial_support(s, inst.ell(), inst.b(), inst.weights());
    if gamma.is_empty() {
        return Err(Error::NoSolutionSpace);
    }
    let m = inst.max_mult();
    let rows = graded_indices(s, m - 1);
    let xs: Vec<F::Elem> = inst.points().iter().map(|p| p.x.clone()).collect();

    // P_{m-1} = G_{m-1}, P_t = P_{t+1} G_t with G_t = prod_{m_r > t} (X - x_r).
    let mut level_moduli = vec![Poly::one(k); m];
    for t in (0..m).rev() {
        let above: Vec<usize> = inst.points().iter().map(|p| usize::from(p.mult > t)).collect();
        let g = weighted_product(k, &xs, &above);
        level_moduli[t] = if t + 1 < m { level_moduli[t + 1].mul(k, &g) } else { g };
    }

    let interpolants = (0..s)
        .map(|t| {
            if gamma.iter().any(|j| j[t] > 0) {
                let ys: Vec<F::Elem> = inst.points().iter().map(|p| p.ys[t].clone()).collect();
                lagrange_interp(k, &xs, &ys).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let col_bounds: Vec<usize> = gamma
        .iter()
        .map(|j| (inst.b() - dot(j, inst.weights())) as usize)
        .collect();
    let no_factors = vec![None; gamma.len()];
    let table = residue_table(k, &rows, &gamma, &level_moduli, &interpolants, &no_factors)?;
    let moduli: Vec<Poly<F>> = rows
        .iter()
        .map(|i| level_moduli[i.iter().sum::<usize>()].clone())
        .collect();
    let row_sizes = moduli.iter().map(|p| p.len() - 1).collect();
    let approx = ApproxInstance::new(k.clone(), moduli, table, col_bounds.clone())?;
    let plan = ReductionPlan {
        s,
        gamma,
        rows,
        row_sizes,
        col_bounds,
    };
    Ok((plan, approx))
}

/// `Q = sum_j qs[j] Y^gamma[j]`.
pub fn assemble_q<F: Field>(plan: &ReductionPlan, qs: &[Poly<F>]) -> Result<MultiPoly<F>> {
    if qs.len() != plan.nu() {
        return Err(Error::DegreeViolation(format!(
            "expected {} coefficient polynomials, got {}",
            plan.nu(),
            qs.len()
        )));
    }
    let mut q = MultiPoly::zero(plan.s);
    for ((j, poly), &bound) in plan.gamma.iter().zip(qs).zip(&plan.col_bounds) {
        if poly.len() > bound {
            return Err(Error::DegreeViolation(format!(
                "coefficient of Y^{j:?} has degree {} but the bound is {bound}",
                poly.len() - 1
            )));
        }
        q.set(j.clone(), poly.clone());
    }
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(q)
}
