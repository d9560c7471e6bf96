//! Presentation files for iterated Ore extensions, plus the built-in catalog.
//!
//! A presentation names the twist matrix `lambda`, the derivation values
//! `delta_k(x_j)`, optional torus witnesses `h` / `h_prime`, and an optional
//! nilpotence bound. Files are JSON documents; see the serde structs below
//! for the exact shape.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::pbw::{Exp, Ore, PBWPoly};
use crate::scalars::{parse_int_poly, parse_rational, MonomialScalar, RatFunc};
use crate::Error;

/// A validated presentation of `K[x_1][x_2; s2, d2] ... [x_N; sN, dN]`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub n: usize,
    pub ore: Ore,
    /// `h[k]` is the diagonal torus element witnessing sigma_k (0-based).
    pub h: Option<Vec<Vec<MonomialScalar>>>,
    /// `h_prime[j]` witnesses the reversed-side action (0-based).
    pub h_prime: Option<Vec<Vec<MonomialScalar>>>,
    /// Bound explicitly given in the file, if any.
    pub explicit_bound: Option<u32>,
}

impl Presentation {
    /// The iteration bound used when certifying local nilpotence:
    /// the explicit bound, or `4 N (1 + max total degree of any delta value)`.
    pub fn nilpotence_bound(&self) -> u32 {
        if let Some(b) = self.explicit_bound {
            return b;
        }
        let maxdeg = self
            .ore
            .delta
            .iter()
            .flatten()
            .map(|p| p.total_degree())
            .max()
            .unwrap_or(0) as u32;
        4 * self.n as u32 * (1 + maxdeg)
    }

    /// SHA-256 of the canonical serialized form, for report provenance.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.serialize().as_bytes());
        format!("{:x}", h.finalize())
    }

    pub fn lambda(&self, k: usize, j: usize) -> &MonomialScalar {
        &self.ore.lambda[k][j]
    }

    /// The sub-presentation on the first `m` generators.
    pub fn truncate(&self, m: usize) -> Presentation {
        assert!(m >= 1 && m <= self.n);
        let lower = (0..m).map(|k| self.ore.lambda[k][..k].to_vec()).collect();
        let delta = (0..m)
            .map(|k| {
                (0..m)
                    .map(|j| {
                        let d = &self.ore.delta[k][j];
                        let mut out = PBWPoly::zero(m);
                        for (e, c) in &d.terms {
                            out.add_term(Exp(e.0[..m].to_vec()), c.clone());
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        let cut = |t: &Option<Vec<Vec<MonomialScalar>>>| {
            t.as_ref().map(|rows| rows[..m].iter().map(|r| r[..m].to_vec()).collect())
        };
        Presentation {
            name: format!("{}[1..{}]", self.name, m),
            n: m,
            ore: Ore::new(m, lower, delta),
            h: cut(&self.h),
            h_prime: None,
            explicit_bound: self.explicit_bound,
        }
    }
}

// ---------------------------------------------------------------------------
// File format

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    name: String,
    #[serde(rename = "N")]
    n: usize,
    lambda: Vec<LambdaEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    delta: Vec<DeltaEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<Vec<Vec<ScalarDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h_prime: Option<Vec<Vec<ScalarDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nilpotence_bound: Option<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LambdaEntry {
    k: usize,
    j: usize,
    c: String,
    e: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaEntry {
    k: usize,
    j: usize,
    poly: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    coeff: CoeffDoc,
    exp: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffDoc {
    Monomial { c: String, e: i64 },
    Ratio { num: String, den: String },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarDoc {
    c: String,
    e: i64,
}

fn scalar_of_doc(d: &ScalarDoc) -> Result<MonomialScalar, Error> {
    MonomialScalar::new(parse_rational(&d.c)?, d.e)
}

fn doc_of_scalar(s: &MonomialScalar) -> ScalarDoc {
    ScalarDoc { c: s.c.to_string(), e: s.e }
}

fn coeff_of_doc(d: &CoeffDoc) -> Result<RatFunc, Error> {
    match d {
        CoeffDoc::Monomial { c, e } => Ok(RatFunc::q_power(&parse_rational(c)?, *e)),
        CoeffDoc::Ratio { num, den } => RatFunc::new(parse_int_poly(num)?, parse_int_poly(den)?),
    }
}

fn doc_of_coeff(r: &RatFunc) -> CoeffDoc {
    match r.as_monomial() {
        Some((c, e)) => CoeffDoc::Monomial { c: c.to_string(), e },
        None => CoeffDoc::Ratio { num: r.num().to_string(), den: r.den().to_string() },
    }
}

/// Parse and validate a presentation document.
pub fn parse_presentation(text: &str) -> Result<Presentation, Error> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| {
        if e.is_syntax() || e.is_eof() {
            Error::Syntax { offset: e.column(), msg: format!("line {}: {}", e.line(), e) }
        } else {
            Error::Schema(e.to_string())
        }
    })?;
    presentation_of_doc(doc)
}

fn presentation_of_doc(doc: Doc) -> Result<Presentation, Error> {
    let n = doc.n;
    if n < 1 {
        return Err(Error::Schema("N must be at least 1".into()));
    }
    // Build the full twist matrix, checking multiplicative skewsymmetry if
    // both triangles are supplied.
    let mut lambda: Vec<Vec<Option<MonomialScalar>>> = vec![vec![None; n]; n];
    for ent in &doc.lambda {
        if ent.k < 1 || ent.k > n || ent.j < 1 || ent.j > n || ent.k == ent.j {
            return Err(Error::Schema(format!("bad lambda index pair ({}, {})", ent.k, ent.j)));
        }
        let s = MonomialScalar::new(parse_rational(&ent.c)?, ent.e)?;
        if lambda[ent.k - 1][ent.j - 1].is_some() {
            return Err(Error::Schema(format!("duplicate lambda entry ({}, {})", ent.k, ent.j)));
        }
        lambda[ent.k - 1][ent.j - 1] = Some(s);
    }
    let mut lower: Vec<Vec<MonomialScalar>> = vec![Vec::new(); n];
    for k in 0..n {
        lower[k] = vec![MonomialScalar::one(); k];
        for j in 0..k {
            match (&lambda[k][j], &lambda[j][k]) {
                (Some(a), Some(b)) => {
                    if !a.mul(b).is_one() {
                        return Err(Error::InvariantViolation(format!(
                            "lambda_{}{} * lambda_{}{} != 1",
                            k + 1,
                            j + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                    lower[k][j] = a.clone();
                }
                (Some(a), None) => lower[k][j] = a.clone(),
                (None, Some(b)) => lower[k][j] = b.inv(),
                (None, None) => {}
            }
        }
    }
    // Derivation table
    let mut delta = vec![vec![PBWPoly::zero(n); n]; n];
    for ent in &doc.delta {
        if ent.k < 2 || ent.k > n || ent.j < 1 || ent.j >= ent.k {
            return Err(Error::Schema(format!("bad delta index pair ({}, {})", ent.k, ent.j)));
        }
        let mut p = PBWPoly::zero(n);
        for t in &ent.poly {
            if t.exp.len() != n {
                return Err(Error::Schema(format!(
                    "delta ({}, {}): exponent vector of length {}, expected {}",
                    ent.k,
                    ent.j,
                    t.exp.len(),
                    n
                )));
            }
            if t.exp.iter().any(|&e| e < 0) {
                return Err(Error::Schema(format!(
                    "delta ({}, {}): negative exponent",
                    ent.k, ent.j
                )));
            }
            p.add_term(Exp(t.exp.clone()), coeff_of_doc(&t.coeff)?);
        }
        if p.top_var() >= ent.k {
            return Err(Error::InvariantViolation(format!(
                "delta_{}(x{}) involves a variable with index >= {}",
                ent.k, ent.j, ent.k
            )));
        }
        if !delta[ent.k - 1][ent.j - 1].is_zero() {
            return Err(Error::Schema(format!("duplicate delta entry ({}, {})", ent.k, ent.j)));
        }
        delta[ent.k - 1][ent.j - 1] = p;
    }
    let read_torus = |t: &Option<Vec<Vec<ScalarDoc>>>, what: &str| -> Result<Option<Vec<Vec<MonomialScalar>>>, Error> {
        match t {
            None => Ok(None),
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Schema(format!("{} must be {} tuples of length {}", what, n, n)));
                }
                let mut out = Vec::with_capacity(n);
                for r in rows {
                    out.push(r.iter().map(scalar_of_doc).collect::<Result<Vec<_>, _>>()?);
                }
                Ok(Some(out))
            }
        }
    };
    if let Some(b) = doc.nilpotence_bound {
        if b == 0 {
            return Err(Error::Schema("nilpotence_bound must be positive".into()));
        }
    }
    Ok(Presentation {
        name: doc.name,
        n,
        h: read_torus(&doc.h, "h")?,
        h_prime: read_torus(&doc.h_prime, "h_prime")?,
        explicit_bound: doc.nilpotence_bound,
        ore: Ore::new(n, lower, delta),
    })
}

impl Presentation {
    /// Canonical serialized form: lower-triangle lambda entries with the
    /// trivial ones omitted, delta entries in (k, j) order.
    pub fn serialize(&self) -> String {
        let n = self.n;
        let mut lambda = Vec::new();
        for k in 1..n {
            for j in 0..k {
                let s = &self.ore.lambda[k][j];
                if !s.is_one() {
                    lambda.push(LambdaEntry { k: k + 1, j: j + 1, c: s.c.to_string(), e: s.e });
                }
            }
        }
        let mut delta = Vec::new();
        for k in 1..n {
            for j in 0..k {
                let p = &self.ore.delta[k][j];
                if p.is_zero() {
                    continue;
                }
                let poly = p
                    .terms
                    .iter()
                    .map(|(e, c)| TermDoc { coeff: doc_of_coeff(c), exp: e.0.clone() })
                    .collect();
                delta.push(DeltaEntry { k: k + 1, j: j + 1, poly });
            }
        }
        let tuples = |t: &Option<Vec<Vec<MonomialScalar>>>| {
            t.as_ref().map(|rows| {
                rows.iter().map(|r| r.iter().map(doc_of_scalar).collect()).collect()
            })
        };
        let doc = Doc {
            name: self.name.clone(),
            n,
            lambda,
            delta,
            h: tuples(&self.h),
            h_prime: tuples(&self.h_prime),
            nilpotence_bound: self.explicit_bound,
        };
        serde_json::to_string_pretty(&doc).expect("presentation serialization")
    }
}

// ---------------------------------------------------------------------------
// Catalog

fn q(e: i64) -> MonomialScalar {
    MonomialScalar::q(e)
}

struct Builder {
    n: usize,
    lower: Vec<Vec<MonomialScalar>>,
    delta: Vec<Vec<PBWPoly>>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            n,
            lower: (0..n).map(|k| vec![MonomialScalar::one(); k]).collect(),
            delta: vec![vec![PBWPoly::zero(n); n]; n],
        }
    }

    /// 1-based indices, `k > j`.
    fn lam(&mut self, k: usize, j: usize, s: MonomialScalar) -> &mut Self {
        self.lower[k - 1][j - 1] = s;
        self
    }

    fn del(&mut self, k: usize, j: usize, p: PBWPoly) -> &mut Self {
        self.delta[k - 1][j - 1] = p;
        self
    }

    fn term(&self, c: RatFunc, exps: &[(usize, i64)]) -> PBWPoly {
        let mut e = Exp::zero(self.n);
        for &(v, x) in exps {
            e.0[v - 1] = x;
        }
        PBWPoly::monomial(self.n, e, c)
    }

    fn finish(
        self,
        name: &str,
        h: Option<Vec<Vec<MonomialScalar>>>,
        h_prime: Option<Vec<Vec<MonomialScalar>>>,
    ) -> Presentation {
        Presentation {
            name: name.to_string(),
            n: self.n,
            ore: Ore::new(self.n, self.lower, self.delta),
            h,
            h_prime,
            explicit_bound: None,
        }
    }
}

fn tuple(entries: &[i64]) -> Vec<MonomialScalar> {
    entries.iter().map(|&e| q(e)).collect()
}

/// `x2 x1 = q x1 x2`.
pub fn quantum_plane() -> Presentation {
    let mut b = Builder::new(2);
    b.lam(2, 1, q(1));
    let h = vec![tuple(&[1, 0]), tuple(&[1, 1])];
    let hp = vec![tuple(&[-1, -1]), tuple(&[0, -1])];
    b.finish("quantum_plane", Some(h), Some(hp))
}

/// `x_k x_j = q x_j x_k` for all `k > j`.
pub fn quantum_affine_space(n: usize) -> Presentation {
    let mut b = Builder::new(n);
    for k in 2..=n {
        for j in 1..k {
            b.lam(k, j, q(1));
        }
    }
    let h = (1..=n)
        .map(|k| (1..=n).map(|i| if i <= k { q(1) } else { q(0) }).collect())
        .collect();
    let hp = (1..=n)
        .map(|j| (1..=n).map(|i| if i >= j { q(-1) } else { q(0) }).collect())
        .collect();
    b.finish(&format!("quantum_affine_space({})", n), Some(h), Some(hp))
}

/// Length-3 extension with
/// `x2 x1 = q x1 x2 + 1`, `x3 x1 = q^-1 x1 x3 + x2^r`, `x3 x2 = q x2 x3`.
pub fn example_3_2(r: u32) -> Presentation {
    let mut b = Builder::new(3);
    b.lam(2, 1, q(1)).lam(3, 1, q(-1)).lam(3, 2, q(1));
    let one = b.term(RatFunc::one(), &[]);
    let x2r = b.term(RatFunc::one(), &[(2, r as i64)]);
    b.del(2, 1, one).del(3, 1, x2r);
    let ri = r as i64;
    let h = vec![
        tuple(&[1, -1, -ri - 1]),
        tuple(&[1, -1, -ri - 1]),
        tuple(&[-1, 1, ri + 1]),
    ];
    b.finish(&format!("example_3_2({})", r), Some(h), None)
}

/// Generic 2x2 quantum matrices on generators `(a, b, c, d) = (x1, x2, x3, x4)`.
pub fn quantum_matrices_2x2() -> Presentation {
    let mut b = Builder::new(4);
    b.lam(2, 1, q(-1))
        .lam(3, 1, q(-1))
        .lam(3, 2, q(0))
        .lam(4, 1, q(0))
        .lam(4, 2, q(-1))
        .lam(4, 3, q(-1));
    // d a = a d + (q^-1 - q) b c
    let coeff = RatFunc::q_power(&BigRational::one(), -1);
    let coeff = &coeff - &RatFunc::q_power(&BigRational::one(), 1);
    let bc = b.term(coeff, &[(2, 1), (3, 1)]);
    b.del(4, 1, bc);
    let h = vec![
        tuple(&[1, 0, 0, -1]),
        tuple(&[-1, -1, 0, 0]),
        tuple(&[-1, 0, -1, 0]),
        tuple(&[0, -1, -1, -2]),
    ];
    let hp = vec![
        tuple(&[2, 1, 1, 0]),
        tuple(&[0, 1, 0, 1]),
        tuple(&[0, 0, 1, 1]),
        tuple(&[1, 0, 0, -1]),
    ];
    b.finish("quantum_matrices_2x2", Some(h), Some(hp))
}

/// The positive part of U_q(sl3) on `(E1, E12, E2)` with
/// `E12 = E1 E2 - q^-1 E2 E1`.
pub fn uqplus_sl3() -> Presentation {
    let mut b = Builder::new(3);
    b.lam(2, 1, q(-1)).lam(3, 1, q(1)).lam(3, 2, q(-1));
    // x3 x1 = q x1 x3 - q x2
    let neg_q_x2 = {
        let coeff = RatFunc::q_power(&BigRational::one(), 1);
        b.term(-&coeff, &[(2, 1)])
    };
    b.del(3, 1, neg_q_x2);
    let h = vec![
        tuple(&[1, 1, 0]),
        tuple(&[-1, 1, 2]),
        tuple(&[1, -1, -2]),
    ];
    let hp = vec![
        tuple(&[2, 1, -1]),
        tuple(&[1, 2, 1]),
        tuple(&[0, 1, 1]),
    ];
    b.finish("uqplus_sl3", Some(h), Some(hp))
}

/// Resolve a catalog name, with optional parenthesized parameter:
/// `quantum_plane`, `quantum_affine_space(3)`, `example_3_2(2)`,
/// `quantum_matrices_2x2`, `uqplus_sl3`.
pub fn catalog(name: &str) -> Result<Presentation, Error> {
    let name = name.trim();
    let (base, arg) = match name.find('(') {
        Some(i) if name.ends_with(')') => {
            (name[..i].trim(), Some(name[i + 1..name.len() - 1].trim()))
        }
        Some(_) => return Err(Error::UnknownName(name.to_string())),
        None => (name, None),
    };
    let int_arg = |what: &str| -> Result<u32, Error> {
        arg.ok_or_else(|| Error::UnknownName(format!("{} requires a parameter, e.g. {}(2)", base, base)))?
            .parse::<u32>()
            .map_err(|_| Error::UnknownName(format!("bad {} parameter in {:?}", what, name)))
    };
    match base {
        "quantum_plane" => Ok(quantum_plane()),
        "quantum_affine_space" => {
            let n = int_arg("N")?;
            if n < 1 {
                return Err(Error::UnknownName("quantum_affine_space needs N >= 1".into()));
            }
            Ok(quantum_affine_space(n as usize))
        }
        "example_3_2" => {
            Ok(example_3_2(int_arg("r")?))
        }
        "quantum_matrices_2x2" => Ok(quantum_matrices_2x2()),
        "uqplus_sl3" => Ok(uqplus_sl3()),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

pub const CATALOG_NAMES: &[&str] = &[
    "quantum_plane",
    "quantum_affine_space(N)",
    "example_3_2(r)",
    "quantum_matrices_2x2",
    "uqplus_sl3",
];

/// Load a presentation: a catalog name, or a path to a presentation file.
pub fn load(spec: &str) -> Result<Presentation, Error> {
    match catalog(spec) {
        Ok(p) => Ok(p),
        Err(Error::UnknownName(_)) if std::path::Path::new(spec).exists() => {
            parse_presentation(&std::fs::read_to_string(spec)?)
        }
        Err(e) => Err(e),
    }
}
