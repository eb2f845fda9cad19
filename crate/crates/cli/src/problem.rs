//! Parsed instances of every mode, with their solver and checker.

use clap::ValueEnum;
use gsinterp::approx::{verify_approx, ApproxInstance};
use gsinterp::apps::{interpolate, reencode_interpolate, verify_wu, wu_interpolate, ExtPoint, GsParams, WuParams};
use gsinterp::poly::Poly;
use gsinterp::reduction::{verify_solution, InterpolationInstance, MultiPoly, Point};
use gsinterp::solver::{solve_approx, SolveOptions};
use gsinterp::struct_solve::SolveOutcome;
use rand::Rng;

use crate::format::{CliResult, RawApprox, RawInstance, TextField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Gs,
    Reencode,
    Wu,
    Soft,
    RawApprox,
}

pub enum Problem<F: TextField> {
    Interp(InterpolationInstance<F>),
    Reencode(GsParams<F>, usize),
    Wu(WuParams<F>),
    Approx(ApproxInstance<F>),
}

fn err(e: gsinterp::Error) -> String {
    e.to_string()
}

/// Interpolation points with finite coordinates.
fn finite_points<F: TextField>(field: &F, raw: &RawInstance) -> CliResult<Vec<Point<F>>> {
    raw.points
        .iter()
        .map(|p| {
            let x = field.parse_elem(&p.x)?;
            let ys =
                p.ys.iter()
                    .map(|y| field.parse_elem(y))
                    .collect::<CliResult<Vec<_>>>()?;
            Ok(Point::new(x, ys, p.mult))
        })
        .collect()
}

impl<F: TextField> Problem<F> {
    pub fn from_raw(field: F, mode: Mode, raw: &RawInstance) -> CliResult<Self> {
        if mode != Mode::Reencode && raw.n0.is_some() {
            return Err("`n0` is only meaningful in reencode mode".into());
        }
        match mode {
            Mode::Gs => {
                let pts = finite_points(&field, raw)?;
                InterpolationInstance::new(field, raw.s, raw.ell, raw.b, raw.weights.clone(), pts)
                    .map(Problem::Interp)
                    .map_err(err)
            }
            Mode::Soft => {
                let pts = finite_points(&field, raw)?;
                InterpolationInstance::with_repeated_nodes(field, raw.s, raw.ell, raw.b, raw.weights.clone(), pts)
                    .map(Problem::Interp)
                    .map_err(err)
            }
            Mode::Reencode => {
                if raw.s != 1 {
                    return Err("reencode mode needs s = 1".into());
                }
                let n0 = raw.n0.ok_or("reencode mode needs an `n0` line")?;
                let points = finite_points(&field, raw)?;
                let params = GsParams {
                    field,
                    k: raw.weights[0],
                    ell: raw.ell,
                    b: raw.b,
                    points,
                };
                // Checks node distinctness.
                params.to_instance().map_err(err)?;
                Ok(Problem::Reencode(params, n0))
            }
            Mode::Wu => {
                if raw.s != 1 {
                    return Err("wu mode needs s = 1".into());
                }
                let m = raw.points.first().map_or(0, |p| p.mult);
                if raw.points.iter().any(|p| p.mult != m) {
                    return Err("wu mode needs the same multiplicity at every point".into());
                }
                let points = raw
                    .points
                    .iter()
                    .map(|p| {
                        let y = match p.ys[0].as_str() {
                            "inf" => None,
                            t => Some(field.parse_elem(t)?),
                        };
                        Ok(ExtPoint {
                            x: field.parse_elem(&p.x)?,
                            y,
                        })
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(Problem::Wu(WuParams {
                    field,
                    k: raw.weights[0],
                    m,
                    ell: raw.ell,
                    b: raw.b,
                    points,
                }))
            }
            Mode::RawApprox => Err("approximation instances use a different file format".into()),
        }
    }

    pub fn from_approx(field: F, raw: &RawApprox) -> CliResult<Self> {
        raw.to_instance(&field).map(Problem::Approx)
    }

    pub fn field(&self) -> &F {
        match self {
            Problem::Interp(i) => i.field(),
            Problem::Reencode(p, _) => &p.field,
            Problem::Wu(p) => &p.field,
            Problem::Approx(a) => a.field(),
        }
    }

    /// Number of `Y` variables in a solution.
    pub fn s(&self) -> usize {
        match self {
            Problem::Interp(i) => i.s(),
            _ => 1,
        }
    }

    pub fn solve<R: Rng + ?Sized>(&self, rng: &mut R, opts: &SolveOptions) -> CliResult<SolveOutcome<MultiPoly<F>>> {
        match self {
            Problem::Interp(inst) => interpolate(inst, rng, opts).map_err(err),
            Problem::Reencode(params, n0) => reencode_interpolate(params, *n0, rng, opts).map_err(err),
            Problem::Wu(params) => wu_interpolate(params, rng, opts).map_err(err),
            Problem::Approx(a) => {
                let out = solve_approx(a, rng, opts).map_err(err)?;
                Ok(out.map(|qs| {
                    let mut q = MultiPoly::zero(1);
                    for (j, c) in qs.into_iter().enumerate() {
                        q.set(vec![j], c);
                    }
                    q
                }))
            }
        }
    }

    pub fn verify(&self, q: &MultiPoly<F>) -> bool {
        match self {
            Problem::Interp(inst) => verify_solution(inst, q),
            Problem::Reencode(params, _) => params.to_instance().is_ok_and(|inst| verify_solution(&inst, q)),
            Problem::Wu(params) => verify_wu(params, q),
            Problem::Approx(a) => {
                if q.s() != 1 || q.terms().any(|(j, _)| j[0] >= a.nu()) {
                    return false;
                }
                let qs: Vec<Poly<F>> = (0..a.nu())
                    .map(|j| q.get(&[j]).cloned().unwrap_or_else(Poly::zero))
                    .collect();
                verify_approx(a, &qs)
            }
        }
    }
}
