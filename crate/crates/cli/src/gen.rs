//! Random instance generation.

use gsinterp::reduction::graded_indices;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::format::{CliResult, FieldSpec, RawInstance, RawPoint};
use crate::problem::Mode;

#[derive(Clone, Debug)]
pub struct GenSpec {
    pub p: u64,
    pub n: usize,
    pub m: usize,
    pub ell: usize,
    pub k: i64,
    pub s: usize,
    /// `None` picks the smallest bound with more unknowns than conditions.
    pub b: Option<i64>,
    pub mode: Mode,
    pub seed: u64,
}

fn binomial(n: usize, r: usize) -> usize {
    (0..r).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

/// Smallest `b` for which the linear system has more unknowns than equations.
pub fn auto_bound(s: usize, ell: usize, k: i64, n: usize, m: usize) -> i64 {
    let conditions = (n * binomial(s + m, s + 1)) as i64;
    let support = graded_indices(s, ell);
    (1..)
        .find(|&b| {
            let unknowns: i64 = support
                .iter()
                .map(|j| b - k * j.iter().sum::<usize>() as i64)
                .filter(|&c| c > 0)
                .sum();
            unknowns > conditions
        })
        .expect("unknown count grows without bound")
}

pub fn generate(spec: &GenSpec) -> CliResult<RawInstance> {
    if spec.mode == Mode::RawApprox {
        return Err("gen does not produce approximation instances".into());
    }
    if !gsinterp::field::is_prime(spec.p) {
        return Err(format!("{} is not prime", spec.p));
    }
    if spec.n == 0 || spec.m == 0 || spec.ell == 0 || spec.s == 0 {
        return Err("n, m, ell and s must be positive".into());
    }
    if spec.n as u64 > spec.p {
        return Err(format!(
            "cannot pick {} distinct nodes in a field of size {}",
            spec.n, spec.p
        ));
    }
    if spec.k < 0 {
        return Err("k must be non-negative".into());
    }
    if spec.s != 1 && matches!(spec.mode, Mode::Reencode | Mode::Wu) {
        return Err("reencode and wu modes need s = 1".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n0 = (spec.mode == Mode::Reencode).then(|| ((spec.k + 1) as usize).min(spec.n));
    let xs: Vec<u64> = if spec.mode == Mode::Soft {
        // Draw from about half as many nodes so that some repeat.
        let pool = (spec.n as u64).div_ceil(2).max(1);
        (0..spec.n).map(|_| rng.gen_range(0..pool)).collect()
    } else {
        let pool = usize::try_from(spec.p).unwrap_or(usize::MAX);
        sample(&mut rng, pool, spec.n).into_iter().map(|x| x as u64).collect()
    };
    let points = xs
        .into_iter()
        .enumerate()
        .map(|(r, x)| {
            let ys = (0..spec.s)
                .map(|_| match (spec.mode, n0) {
                    (Mode::Reencode, Some(n0)) if r < n0 => "0".to_string(),
                    (Mode::Reencode, _) => rng.gen_range(1..spec.p).to_string(),
                    (Mode::Wu, _) if rng.gen_ratio(1, 4) => "inf".to_string(),
                    _ => rng.gen_range(0..spec.p).to_string(),
                })
                .collect();
            RawPoint {
                x: x.to_string(),
                mult: spec.m,
                ys,
            }
        })
        .collect();
    Ok(RawInstance {
        field: FieldSpec {
            p: spec.p,
            modulus: None,
        },
        s: spec.s,
        ell: spec.ell,
        b: spec
            .b
            .unwrap_or_else(|| auto_bound(spec.s, spec.ell, spec.k, spec.n, spec.m)),
        weights: vec![spec.k; spec.s],
        n0,
        points,
    })
}
