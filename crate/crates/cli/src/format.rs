//! Text formats for instances and solutions.
//!
//! Interpolation instance:
//!
//! ```text
//! field <p> [<d> <c0>,<c1>,...,<cd>]
//! s <s>
//! ell <ell>
//! b <b>
//! weights <k1> ... <ks>
//! n0 <n0>                      (optional, re-encoding only)
//! points <n>
//! <x> <m> <y1> ... <ys>        (n lines; a y may be `inf`)
//! ```
//!
//! Approximation instance:
//!
//! ```text
//! field <p> [...]
//! bounds <N0> ... <N_{nu-1}>
//! rows <mu>
//! modulus <c0> ... <cM>        (then nu `residue` lines, repeated mu times)
//! residue <c0> ... <c_{M-1}>
//! ```
//!
//! Solution: `# instance <sha256>` and `# backend <name>` headers, then one
//! line `<j1> ... <js> : <c0> ... <cd>` per nonzero coefficient of `Y^j`.
//!
//! Blank lines and lines starting with `#` are ignored in instance files.
//! Extension field elements are written as comma-joined coefficient lists.

use std::fmt::Write as _;

use gsinterp::approx::ApproxInstance;
use gsinterp::poly::Poly;
use gsinterp::reduction::MultiPoly;
use gsinterp::{ExtField, Field, PrimeField};
use sha2::{Digest, Sha256};

pub type CliResult<T> = std::result::Result<T, String>;

/// Field elements that can be read and written as text.
pub trait TextField: Field {
    fn parse_elem(&self, token: &str) -> CliResult<Self::Elem>;
    fn fmt_elem(&self, e: &Self::Elem) -> String;
}

impl TextField for PrimeField {
    fn parse_elem(&self, token: &str) -> CliResult<u64> {
        let v: u64 = token.parse().map_err(|_| format!("invalid field element `{token}`"))?;
        self.validate(&v)
            .map_err(|_| format!("`{token}` is not reduced modulo {}", self.modulus()))?;
        Ok(v)
    }

    fn fmt_elem(&self, e: &u64) -> String {
        e.to_string()
    }
}

impl TextField for ExtField<PrimeField> {
    fn parse_elem(&self, token: &str) -> CliResult<Vec<u64>> {
        let coeffs = token
            .split(',')
            .map(|c| self.base().parse_elem(c))
            .collect::<CliResult<Vec<_>>>()?;
        self.from_coeffs(coeffs).map_err(|e| format!("`{token}`: {e}"))
    }

    fn fmt_elem(&self, e: &Vec<u64>) -> String {
        e.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

/// `field` line contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    /// Monic defining polynomial, low degree first, for extension fields.
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    fn parse(tokens: &[&str]) -> CliResult<Self> {
        let p = parse_num(tokens.first().copied(), "field characteristic")?;
        match tokens.len() {
            1 => Ok(FieldSpec { p, modulus: None }),
            3 => {
                let d: usize = parse_num(Some(tokens[1]), "extension degree")?;
                let coeffs = tokens[2]
                    .split(',')
                    .map(|c| parse_num(Some(c), "defining polynomial coefficient"))
                    .collect::<CliResult<Vec<u64>>>()?;
                if coeffs.len() != d + 1 {
                    return Err(format!("extension of degree {d} needs {} coefficients", d + 1));
                }
                Ok(FieldSpec {
                    p,
                    modulus: Some(coeffs),
                })
            }
            _ => Err("field line must be `field <p>` or `field <p> <d> <c0,...,cd>`".into()),
        }
    }

    fn render(&self) -> String {
        match &self.modulus {
            None => format!("field {}", self.p),
            Some(c) => format!(
                "field {} {} {}",
                self.p,
                c.len() - 1,
                c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

/// Code generic over the field chosen at run time.
pub trait FieldVisitor {
    type Out;
    fn visit<F: TextField>(self, field: F) -> Self::Out;
}

pub fn dispatch<V: FieldVisitor>(spec: &FieldSpec, v: V) -> CliResult<V::Out> {
    let base = PrimeField::new(spec.p).map_err(|e| e.to_string())?;
    match &spec.modulus {
        None => Ok(v.visit(base)),
        Some(c) => {
            let c = c
                .iter()
                .map(|x| base.parse_elem(&x.to_string()))
                .collect::<CliResult<Vec<_>>>()?;
            let modulus = Poly::from_coeffs(&base, c);
            let ext = ExtField::new(base, &modulus).map_err(|e| format!("defining polynomial: {e}"))?;
            Ok(v.visit(ext))
        }
    }
}

fn parse_num<T: std::str::FromStr>(token: Option<&str>, what: &str) -> CliResult<T> {
    let t = token.ok_or_else(|| format!("missing {what}"))?;
    t.parse().map_err(|_| format!("invalid {what} `{t}`"))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

pub fn instance_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// A point row with tokens still unparsed (the field is not known yet).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawPoint {
    pub x: String,
    pub mult: usize,
    pub ys: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInstance {
    pub field: FieldSpec,
    pub s: usize,
    pub ell: usize,
    pub b: i64,
    pub weights: Vec<i64>,
    pub n0: Option<usize>,
    pub points: Vec<RawPoint>,
}

impl RawInstance {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut field = None;
        let (mut s, mut ell, mut b, mut weights, mut n0) = (None, None, None, None, None);
        let mut points = Vec::new();
        let mut expected_points = None;
        for (line, tokens) in content_lines(text) {
            let err = |msg: String| format!("line {line}: {msg}");
            if let Some(n) = expected_points {
                if points.len() < n {
                    let s: usize = s.ok_or_else(|| err("`s` must precede the points".into()))?;
                    if tokens.len() != s + 2 {
                        return Err(err(format!("point rows need x, m and {s} y values")));
                    }
                    let mult = parse_num(Some(tokens[1]), "multiplicity").map_err(err)?;
                    points.push(RawPoint {
                        x: tokens[0].to_string(),
                        mult,
                        ys: tokens[2..].iter().map(|t| t.to_string()).collect(),
                    });
                    continue;
                }
            }
            let rest = &tokens[1..];
            let single = |what| parse_num(rest.first().copied(), what).map_err(err);
            match tokens[0] {
                "field" => field = Some(FieldSpec::parse(rest).map_err(err)?),
                "s" => s = Some(single("s")?),
                "ell" => ell = Some(single("ell")?),
                "b" => b = Some(parse_num::<i64>(rest.first().copied(), "b").map_err(err)?),
                "n0" => n0 = Some(single("n0")?),
                "weights" => {
                    weights = Some(
                        rest.iter()
                            .map(|t| parse_num(Some(t), "weight"))
                            .collect::<CliResult<Vec<i64>>>()
                            .map_err(err)?,
                    )
                }
                "points" => expected_points = Some(single("point count")?),
                other => return Err(err(format!("unexpected `{other}`"))),
            }
        }
        let need = |what: &str| format!("missing `{what}` line");
        let inst = RawInstance {
            field: field.ok_or_else(|| need("field"))?,
            s: s.ok_or_else(|| need("s"))?,
            ell: ell.ok_or_else(|| need("ell"))?,
            b: b.ok_or_else(|| need("b"))?,
            weights: weights.ok_or_else(|| need("weights"))?,
            n0,
            points,
        };
        match expected_points {
            None => Err(need("points")),
            Some(n) if n != inst.points.len() => Err(format!("expected {n} points, found {}", inst.points.len())),
            Some(_) if inst.weights.len() != inst.s => Err(format!("expected {} weights", inst.s)),
            Some(_) => Ok(inst),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.field.render());
        let _ = writeln!(out, "s {}", self.s);
        let _ = writeln!(out, "ell {}", self.ell);
        let _ = writeln!(out, "b {}", self.b);
        let w: Vec<String> = self.weights.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "weights {}", w.join(" "));
        if let Some(n0) = self.n0 {
            let _ = writeln!(out, "n0 {n0}");
        }
        let _ = writeln!(out, "points {}", self.points.len());
        for p in &self.points {
            let _ = writeln!(out, "{} {} {}", p.x, p.mult, p.ys.join(" "));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawApprox {
    pub field: FieldSpec,
    pub bounds: Vec<usize>,
    /// `(modulus coefficients, residue coefficient lists)` per row.
    pub rows: Vec<(Vec<String>, Vec<Vec<String>>)>,
}

impl RawApprox {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut field = None;
        let mut bounds = None;
        let mut mu = None;
        let mut rows: Vec<(Vec<String>, Vec<Vec<String>>)> = Vec::new();
        for (line, tokens) in content_lines(text) {
            let err = |msg: &str| format!("line {line}: {msg}");
            let rest: Vec<String> = tokens[1..].iter().map(|t| t.to_string()).collect();
            match tokens[0] {
                "field" => field = Some(FieldSpec::parse(&tokens[1..]).map_err(|e| err(&e))?),
                "bounds" => {
                    bounds = Some(
                        rest.iter()
                            .map(|t| parse_num(Some(t), "column bound"))
                            .collect::<CliResult<Vec<usize>>>()
                            .map_err(|e| err(&e))?,
                    )
                }
                "rows" => {
                    mu = Some(parse_num::<usize>(rest.first().map(String::as_str), "row count").map_err(|e| err(&e))?)
                }
                "modulus" => rows.push((rest, Vec::new())),
                "residue" => rows
                    .last_mut()
                    .ok_or_else(|| err("`residue` before any `modulus`"))?
                    .1
                    .push(rest),
                other => return Err(err(&format!("unexpected `{other}`"))),
            }
        }
        let inst = RawApprox {
            field: field.ok_or("missing `field` line")?,
            bounds: bounds.ok_or("missing `bounds` line")?,
            rows,
        };
        if mu != Some(inst.rows.len()) {
            return Err(format!("`rows` does not match the {} modulus lines", inst.rows.len()));
        }
        if inst.rows.iter().any(|r| r.1.len() != inst.bounds.len()) {
            return Err("each row needs one `residue` line per column bound".into());
        }
        Ok(inst)
    }

    pub fn to_instance<F: TextField>(&self, field: &F) -> CliResult<ApproxInstance<F>> {
        let poly = |tokens: &[String]| -> CliResult<Poly<F>> {
            let c = tokens
                .iter()
                .map(|t| field.parse_elem(t))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Poly::from_coeffs(field, c))
        };
        let moduli = self.rows.iter().map(|r| poly(&r.0)).collect::<CliResult<Vec<_>>>()?;
        let residues = self
            .rows
            .iter()
            .map(|r| r.1.iter().map(|t| poly(t)).collect::<CliResult<Vec<_>>>())
            .collect::<CliResult<Vec<_>>>()?;
        ApproxInstance::new(field.clone(), moduli, residues, self.bounds.clone()).map_err(|e| e.to_string())
    }
}

/// Coefficient lists keyed by exponent vector.
pub fn render_solution<F: TextField>(field: &F, hash: &str, backend: &str, q: &MultiPoly<F>) -> String {
    let mut out = format!("# instance {hash}\n# backend {backend}\n");
    for (j, c) in q.terms() {
        let exps: Vec<String> = j.iter().map(usize::to_string).collect();
        let coeffs: Vec<String> = c.coeffs().iter().map(|e| field.fmt_elem(e)).collect();
        let _ = writeln!(out, "{} : {}", exps.join(" "), coeffs.join(" "));
    }
    out
}

pub struct ParsedSolution<F: Field> {
    pub hash: Option<String>,
    pub q: MultiPoly<F>,
}

pub fn parse_solution<F: TextField>(field: &F, s: usize, text: &str) -> CliResult<ParsedSolution<F>> {
    let mut hash = None;
    let mut q = MultiPoly::zero(s);
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(h) = line.strip_prefix("# instance ") {
            hash = Some(h.trim().to_string());
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| format!("solution line {}: {msg}", i + 1);
        let (lhs, rhs) = line
            .split_once(':')
            .ok_or_else(|| err("expected `j... : coefficients`".into()))?;
        let j = lhs
            .split_whitespace()
            .map(|t| parse_num(Some(t), "exponent"))
            .collect::<CliResult<Vec<usize>>>()
            .map_err(err)?;
        if j.len() != s {
            return Err(err(format!("expected {s} exponents")));
        }
        if q.get(&j).is_some() {
            return Err(err("repeated exponent vector".into()));
        }
        let c = rhs
            .split_whitespace()
            .map(|t| field.parse_elem(t))
            .collect::<CliResult<Vec<_>>>()
            .map_err(err)?;
        q.set(j, Poly::from_coeffs(field, c));
    }
    Ok(ParsedSolution { hash, q })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "field 13\ns 1\nell 1\nb 3\nweights 1\npoints 3\n0 1 1\n1 1 2\n2 1 5\n";

    #[test]
    fn instance_round_trip() {
        let raw = RawInstance::parse(SAMPLE).unwrap();
        assert_eq!(raw.render(), SAMPLE);
        assert_eq!(RawInstance::parse(&raw.render()).unwrap(), raw);
        let ext = "# comment\nfield 2 2 1,1,1\ns 2\nell 2\nb 4\nweights 1 1\nn0 1\npoints 1\n1,0 2 0,1 inf\n";
        let raw = RawInstance::parse(ext).unwrap();
        assert_eq!(RawInstance::parse(&raw.render()).unwrap(), raw);
    }

    #[test]
    fn instance_errors() {
        assert!(RawInstance::parse("s 1\n").is_err());
        assert!(RawInstance::parse(&SAMPLE.replace("points 3", "points 4")).is_err());
        assert!(RawInstance::parse(&SAMPLE.replace("0 1 1\n", "0 1\n")).is_err());
        assert!(RawInstance::parse(&SAMPLE.replace("field 13", "field 13 2")).is_err());
    }

    #[test]
    fn solution_round_trip() {
        let k = PrimeField::new(13).unwrap();
        let mut q = MultiPoly::zero(2);
        q.set(vec![0, 0], Poly::from_coeffs(&k, vec![1, 0, 12]));
        q.set(vec![1, 0], Poly::from_coeffs(&k, vec![5]));
        let text = render_solution(&k, "abc", "hankel", &q);
        let parsed = parse_solution(&k, 2, &text).unwrap();
        assert_eq!(parsed.q, q);
        assert_eq!(parsed.hash.as_deref(), Some("abc"));
        assert!(parse_solution(&k, 1, &text).is_err());
    }

    #[test]
    fn extension_elements() {
        let spec = FieldSpec::parse(&["2", "2", "1,1,1"]).unwrap();
        struct Check;
        impl FieldVisitor for Check {
            type Out = String;
            fn visit<F: TextField>(self, field: F) -> String {
                let e = field.parse_elem("1,1").unwrap();
                field.fmt_elem(&field.mul(&e, &e))
            }
        }
        // (1 + t)^2 = 1 + t^2 = t over GF(2)[t]/(t^2 + t + 1)
        assert_eq!(dispatch(&spec, Check).unwrap(), "0,1");
    }

    #[test]
    fn approx_round_trip() {
        let text = "field 13\nbounds 2 1\nrows 1\nmodulus 0 0 1\nresidue 1\nresidue 0 1\n";
        let raw = RawApprox::parse(text).unwrap();
        let k = PrimeField::new(13).unwrap();
        let a = raw.to_instance(&k).unwrap();
        assert_eq!(a.col_bounds(), &[2, 1]);
        assert!(RawApprox::parse("field 13\nbounds 1\nrows 2\nmodulus 0 1\nresidue 1\n").is_err());
    }
}
