//! Simultaneous polynomial approximations: find `Q_0..Q_{nu-1}`, not all
//! zero, with `deg Q_j < N_j` and `sum_j F_{i,j} Q_j = 0 mod P_i` for every row `i`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;
use crate::struct_solve::{nullspace_structured, GeneratorPair, SolveOutcome, StructuredOptions};

#[derive(Clone, Debug)]
pub struct ApproxInstance<F: Field> {
    field: F,
    moduli: Vec<Poly<F>>,
    residues: Vec<Vec<Poly<F>>>,
    col_bounds: Vec<usize>,
}

impl<F: Field> ApproxInstance<F> {
    /// `residues[i][j]` is `F_{i,j}`; it is reduced modulo `moduli[i]` on entry.
    pub fn new(field: F, moduli: Vec<Poly<F>>, residues: Vec<Vec<Poly<F>>>, col_bounds: Vec<usize>) -> Result<Self> {
        let invalid = |msg: &str| Err(Error::InvalidInstance(msg.into()));
        if moduli.is_empty() || col_bounds.is_empty() {
            return invalid("need at least one row and one column");
        }
        if col_bounds.contains(&0) {
            return invalid("column degree bounds must be positive");
        }
        if residues.len() != moduli.len() || residues.iter().any(|r| r.len() != col_bounds.len()) {
            return invalid("residue table shape does not match moduli and bounds");
        }
        if moduli
            .iter()
            .any(|p| !p.is_monic(&field) || p.degree().unwrap_or(0) == 0)
        {
            return invalid("moduli must be monic of positive degree");
        }
        let residues = residues
            .into_iter()
            .zip(&moduli)
            .map(|(row, p)| row.iter().map(|f| f.rem(&field, p)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Ok(ApproxInstance {
            field,
            moduli,
            residues,
            col_bounds,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn mu(&self) -> usize {
        self.moduli.len()
    }

    pub fn nu(&self) -> usize {
        self.col_bounds.len()
    }

    pub fn modulus(&self, i: usize) -> &Poly<F> {
        &self.moduli[i]
    }

    pub fn residue(&self, i: usize, j: usize) -> &Poly<F> {
        &self.residues[i][j]
    }

    /// Row block sizes `M_i = deg P_i`.
    pub fn row_sizes(&self) -> Vec<usize> {
        self.moduli.iter().map(|p| p.len() - 1).collect()
    }

    pub fn col_bounds(&self) -> &[usize] {
        &self.col_bounds
    }

    /// Total number of linear equations.
    pub fn total_rows(&self) -> usize {
        self.row_sizes().iter().sum()
    }

    /// Total number of unknown coefficients.
    pub fn total_cols(&self) -> usize {
        self.col_bounds.iter().sum()
    }

    pub fn map_field<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> G::Elem) -> ApproxInstance<G> {
        ApproxInstance {
            field: target.clone(),
            moduli: self.moduli.iter().map(|p| p.map_field(target, &f)).collect(),
            residues: self
                .residues
                .iter()
                .map(|row| row.iter().map(|p| p.map_field(target, &f)).collect())
                .collect(),
            col_bounds: self.col_bounds.clone(),
        }
    }

    /// Concatenates the coefficient vectors of `qs`, low degree first, each
    /// padded to its column bound.
    pub fn pack(&self, qs: &[Poly<F>]) -> Vec<F::Elem> {
        qs.iter()
            .zip(&self.col_bounds)
            .flat_map(|(q, &n)| q.to_vec_len(&self.field, n))
            .collect()
    }

    /// Inverse of [`pack`](Self::pack).
    pub fn unpack(&self, v: &[F::Elem]) -> Vec<Poly<F>> {
        let mut out = Vec::with_capacity(self.nu());
        let mut offset = 0;
        for &n in &self.col_bounds {
            out.push(Poly::from_coeffs(&self.field, v[offset..offset + n].to_vec()));
            offset += n;
        }
        out
    }
}

/// Records how a trimmed instance relates to the original one.
#[derive(Clone, Debug, Eq, PartialEq)]
pub struct Trim {
    /// Number of trailing columns removed entirely.
    pub dropped: usize,
    /// Bound of the last kept column after shrinking.
    pub last_bound: usize,
    original_nu: usize,
}

impl Trim {
    /// Zero-pads a solution of the trimmed instance to the original column count.
    pub fn lift<F: Field>(&self, mut qs: Vec<Poly<F>>) -> Vec<Poly<F>> {
        qs.resize(self.original_nu, Poly::zero());
        qs
    }
}

/// Shrinks the column bounds from the right until at most `M + 1` unknowns
/// remain; forcing the highest coefficients to zero keeps the system
/// underdetermined while making it at most one column wider than tall.
pub fn trim_instance<F: Field>(a: &ApproxInstance<F>) -> (ApproxInstance<F>, Trim) {
    let cap = a.total_rows() + 1;
    let mut bounds = Vec::new();
    let mut used = 0;
    for &n in &a.col_bounds {
        if used == cap {
            break;
        }
        let take = n.min(cap - used);
        bounds.push(take);
        used += take;
    }
    let kept = bounds.len();
    let trim = Trim {
        dropped: a.nu() - kept,
        last_bound: *bounds.last().expect("at least one column"),
        original_nu: a.nu(),
    };
    let trimmed = ApproxInstance {
        field: a.field.clone(),
        moduli: a.moduli.clone(),
        residues: a.residues.iter().map(|row| row[..kept].to_vec()).collect(),
        col_bounds: bounds,
    };
    (trimmed, trim)
}

/// Checks that `qs` is a solution: not all zero, within the degree bounds,
/// and satisfying every congruence.
pub fn verify_approx<F: Field>(a: &ApproxInstance<F>, qs: &[Poly<F>]) -> bool {
    let k = &a.field;
    if qs.len() != a.nu() || qs.iter().all(Poly::is_zero) {
        return false;
    }
    if qs.iter().zip(&a.col_bounds).any(|(q, &n)| q.len() > n) {
        return false;
    }
    (0..a.mu()).all(|i| {
        let sum = qs
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (j, q)| acc.add(k, &a.residues[i][j].mul(k, q)));
        sum.rem(k, &a.moduli[i]).expect("monic modulus").is_zero()
    })
}

/// Solves the linearization of a trimmed instance given by `generator`,
/// whose nullspace vectors are the packed `(Q_j)`. Every candidate is
/// checked with [`verify_approx`]; a rejected one costs one attempt.
pub(crate) fn solve_with_generator<F: Field, R: Rng + ?Sized>(
    trimmed: &ApproxInstance<F>,
    trim: &Trim,
    generator: &GeneratorPair<F>,
    rng: &mut R,
    opts: &StructuredOptions,
) -> Result<SolveOutcome<Vec<Poly<F>>>> {
    let single = StructuredOptions {
        max_retries: 1,
        ..*opts
    };
    for _ in 0..opts.max_retries {
        match nullspace_structured(trimmed.field(), generator, rng, &single)? {
            SolveOutcome::Solution(u) => {
                let qs = trimmed.unpack(&u);
                if verify_approx(trimmed, &qs) {
                    return Ok(SolveOutcome::Solution(trim.lift(qs)));
                }
            }
            SolveOutcome::NoSolution(reason) => return Ok(SolveOutcome::NoSolution(reason)),
            SolveOutcome::Failure { .. } => {}
        }
    }
    Ok(SolveOutcome::Failure {
        attempts: opts.max_retries,
    })
}
