//! Backend selection for the simultaneous approximation problem, including
//! the detour through an extension field when the base field is too small
//! for the randomized solvers.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::approx::{trim_instance, verify_approx, ApproxInstance};
use crate::error::{Error, Result};
use crate::field::{project_solution_to_base, ExtField, Field};
use crate::mosaic_hankel::solve_via_hankel;
use crate::poly::Poly;
use crate::struct_solve::{required_sample_size, NoSolutionReason, SolveOutcome, StructuredOptions};
use crate::toeplitz_like::{dense_build_aprime, solve_via_toeplitz};

#[derive(Clone, Copy, Debug, Eq, PartialEq, Hash)]
pub enum Backend {
    Hankel,
    Toeplitz,
    Dense,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Hankel, Backend::Toeplitz, Backend::Dense];

    pub fn name(&self) -> &'static str {
        match self {
            Backend::Hankel => "hankel",
            Backend::Toeplitz => "toeplitz",
            Backend::Dense => "dense",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::InvalidInstance(format!("unknown backend `{s}`")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub backend: Backend,
    pub structured: StructuredOptions,
    /// Solve over an extension field when the base field is too small for
    /// the random sampling; otherwise report `FieldTooSmall`.
    pub extend_small_fields: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            backend: Backend::Toeplitz,
            structured: StructuredOptions::default(),
            extend_small_fields: true,
        }
    }
}

impl SolveOptions {
    pub fn with_backend(backend: Backend) -> Self {
        SolveOptions {
            backend,
            ..Default::default()
        }
    }
}

/// Dense elimination on the Toeplitz-like matrix of the trimmed instance.
pub fn solve_dense<F: Field>(a: &ApproxInstance<F>) -> Result<SolveOutcome<Vec<Poly<F>>>> {
    let (trimmed, trim) = trim_instance(a);
    let m = dense_build_aprime(&trimmed)?;
    match m.nullspace(trimmed.field()).into_iter().next() {
        Some(v) => {
            let qs = trimmed.unpack(&v);
            if !verify_approx(&trimmed, &qs) {
                return Err(Error::Internal("dense nullspace vector fails verification".into()));
            }
            Ok(SolveOutcome::Solution(trim.lift(qs)))
        }
        None => Ok(SolveOutcome::NoSolution(NoSolutionReason::TrivialNullspace)),
    }
}

/// Runs the chosen backend over the instance's own field.
pub fn solve_direct<F: Field, R: Rng + ?Sized>(
    a: &ApproxInstance<F>,
    rng: &mut R,
    opts: &SolveOptions,
) -> Result<SolveOutcome<Vec<Poly<F>>>> {
    match opts.backend {
        Backend::Hankel => solve_via_hankel(a, rng, &opts.structured),
        Backend::Toeplitz => solve_via_toeplitz(a, rng, &opts.structured),
        Backend::Dense => solve_dense(a),
    }
}

/// Size of the square system the structured backends work on.
pub fn system_size<F: Field>(a: &ApproxInstance<F>) -> usize {
    let (trimmed, _) = trim_instance(a);
    trimmed.total_rows().max(trimmed.total_cols())
}

/// Whether the structured backends need a larger field than `a`'s.
pub fn needs_extension<F: Field>(a: &ApproxInstance<F>, opts: &SolveOptions) -> bool {
    let p = system_size(a);
    opts.backend != Backend::Dense && p > opts.structured.dense_below && a.field().order() < required_sample_size(p)
}

/// Solves `a`, moving to an extension field first if required and allowed.
pub fn solve_approx<F: Field, R: Rng + ?Sized>(
    a: &ApproxInstance<F>,
    rng: &mut R,
    opts: &SolveOptions,
) -> Result<SolveOutcome<Vec<Poly<F>>>> {
    if !needs_extension(a, opts) {
        return solve_direct(a, rng, opts);
    }
    if !opts.extend_small_fields {
        return Err(Error::FieldTooSmall {
            order: a.field().order(),
            required: required_sample_size(system_size(a)),
        });
    }
    let base = a.field();
    let degree = ExtField::degree_for(base, required_sample_size(system_size(a)));
    let ext = ExtField::build(base.clone(), degree, rng)?;
    let lifted = a.map_field(&ext, |c| ext.embed(c));
    Ok(match solve_direct(&lifted, rng, opts)? {
        SolveOutcome::Solution(qs) => {
            let packed = project_solution_to_base(&ext, &lifted.pack(&qs))?;
            let qs = a.unpack(&packed);
            if !verify_approx(a, &qs) {
                return Err(Error::Internal("projected solution fails verification".into()));
            }
            SolveOutcome::Solution(qs)
        }
        SolveOutcome::NoSolution(r) => SolveOutcome::NoSolution(r),
        SolveOutcome::Failure { attempts } => SolveOutcome::Failure { attempts },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_instance(k: &PrimeField, rng: &mut ChaCha8Rng) -> ApproxInstance<PrimeField> {
        let mu = rng.gen_range(1..3);
        let nu = rng.gen_range(1..4);
        let moduli: Vec<_> = (0..mu)
            .map(|_| {
                let d = rng.gen_range(1..6);
                let mut c: Vec<u64> = (0..d).map(|_| k.random(rng)).collect();
                c.push(1);
                Poly::from_coeffs(k, c)
            })
            .collect();
        let residues = moduli
            .iter()
            .map(|m| {
                (0..nu)
                    .map(|_| Poly::from_coeffs(k, (0..m.len() - 1).map(|_| k.random(rng)).collect()))
                    .collect()
            })
            .collect();
        let bounds = (0..nu).map(|_| rng.gen_range(1..5)).collect();
        ApproxInstance::new(*k, moduli, residues, bounds).unwrap()
    }

    #[test]
    fn backend_names_round_trip() {
        for b in Backend::ALL {
            assert_eq!(b.name().parse::<Backend>().unwrap(), b);
        }
        assert!("fast".parse::<Backend>().is_err());
    }

    #[test]
    fn small_field_goes_through_extension() {
        let k = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut extended = 0;
        for _ in 0..40 {
            let a = random_instance(&k, &mut rng);
            let dense = solve_dense(&a).unwrap();
            for backend in [Backend::Hankel, Backend::Toeplitz] {
                let opts = SolveOptions::with_backend(backend);
                if needs_extension(&a, &opts) {
                    extended += 1;
                }
                let out = solve_approx(&a, &mut rng, &opts).unwrap();
                assert_eq!(out.is_solution(), dense.is_solution());
                if let SolveOutcome::Solution(qs) = out {
                    assert!(verify_approx(&a, &qs));
                }
            }
        }
        assert!(extended > 0);
    }

    #[test]
    fn extension_can_be_refused() {
        let k = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = ApproxInstance::new(
            k,
            vec![Poly::from_coeffs(&k, vec![1, 2, 3, 4, 0, 1])],
            vec![vec![
                Poly::from_coeffs(&k, vec![1, 1]),
                Poly::from_coeffs(&k, vec![0, 3]),
            ]],
            vec![3, 3],
        )
        .unwrap();
        let opts = SolveOptions {
            extend_small_fields: false,
            ..Default::default()
        };
        assert!(matches!(
            solve_approx(&a, &mut rng, &opts),
            Err(Error::FieldTooSmall { .. })
        ));
    }
}
