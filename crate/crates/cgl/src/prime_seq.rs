//! The recursive sequence of homogeneous prime elements `y_1, ..., y_N`,
//! the level function mu with its predecessor/successor tables, and the
//! alpha- and q-matrices governing all commutation identities.

use crate::cgl_verify::Certificate;
use crate::char_lattice::{self, RelationLattice};
use crate::pbw::{Exp, PBWPoly};
use crate::presentation::Presentation;
use crate::scalars::MonomialScalar;
use crate::Error;

#[derive(Clone, Debug)]
pub struct PrimeSequence {
    pub n_vars: usize,
    pub y: Vec<PBWPoly>,
    /// `d[k]` is defined exactly when `p[k]` is.
    pub d: Vec<Option<PBWPoly>>,
    /// Level function onto `[0, rank)`, fresh indices in order of appearance.
    pub mu: Vec<usize>,
    /// Predecessor in the same level (`None` plays negative infinity).
    pub p: Vec<Option<usize>>,
    /// Successor in the same level (`None` plays positive infinity).
    pub s: Vec<Option<usize>>,
    pub rank: usize,
    /// `kbar[k]`: the exponent of the leading term of `y_k`.
    pub kbar: Vec<Exp>,
    /// `alpha[k][j] = prod_m lambda_{k, p^m(j)}`.
    pub alpha: Vec<Vec<MonomialScalar>>,
    /// `qmat[k][j]`: the scalar in `y_k y_j = qmat[k][j] y_j y_k`.
    pub qmat: Vec<Vec<MonomialScalar>>,
    /// The witness eigenvalue of `h_k` on `x_k` used at each step.
    pub lambda_k: Vec<MonomialScalar>,
}

impl PrimeSequence {
    /// Iterations of `p` before reaching the bottom of the level.
    pub fn o_minus(&self, k: usize) -> usize {
        let mut m = 0;
        let mut cur = k;
        while let Some(prev) = self.p[cur] {
            m += 1;
            cur = prev;
        }
        m
    }

    /// Indices generating the normal subalgebra: `{j : s(j) = +inf}`.
    pub fn normal_generators(&self) -> Vec<usize> {
        (0..self.n_vars).filter(|&j| self.s[j].is_none()).collect()
    }

    /// The diagonal tuple `(alpha_{1j}^-1, ..., alpha_{Nj}^-1)` normalizing
    /// `y_j`: `y_j x_k = psi_k x_k y_j`.
    pub fn normalizer_of_prime(&self, j: usize) -> Vec<MonomialScalar> {
        (0..self.n_vars).map(|k| self.alpha[k][j].inv()).collect()
    }
}

fn chain(p: &[Option<usize>], k: usize) -> Vec<usize> {
    // k, p(k), p^2(k), ...
    let mut out = vec![k];
    let mut cur = k;
    while let Some(prev) = p[cur] {
        out.push(prev);
        cur = prev;
    }
    out
}

pub fn compute_prime_sequence(
    pres: &Presentation,
    cert: &Certificate,
) -> Result<PrimeSequence, Error> {
    if !cert.is_cgl() {
        return Err(Error::InvariantViolation(format!(
            "prime sequence requires a CGL certificate, status is {:?}",
            cert.status
        )));
    }
    let n = pres.n;
    let ore = &pres.ore;
    let lattice = &cert.lattice;
    let lambda_k: Vec<MonomialScalar> = cert
        .witnesses
        .iter()
        .map(|w| w.as_ref().expect("CGL certificate carries witnesses").eigenvalue.clone())
        .collect();
    let mut y: Vec<PBWPoly> = Vec::with_capacity(n);
    let mut d: Vec<Option<PBWPoly>> = Vec::with_capacity(n);
    let mut mu: Vec<usize> = Vec::with_capacity(n);
    let mut p: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut s: Vec<Option<usize>> = vec![None; n];
    let mut fresh = 0usize;
    for k in 0..n {
        let delta_k_zero = (0..k).all(|j| ore.delta[k][j].is_zero());
        if delta_k_zero {
            y.push(PBWPoly::var(n, k));
            d.push(None);
            p.push(None);
            mu.push(fresh);
            fresh += 1;
            continue;
        }
        // evaluate delta_k on the still-active primes
        let active: Vec<usize> = (0..k).filter(|&j| s[j].is_none()).collect();
        let mut hits: Vec<(usize, PBWPoly)> = Vec::new();
        for &j in &active {
            let dy = ore.apply_delta(k, &y[j])?;
            if !dy.is_zero() {
                hits.push((j, dy));
            }
        }
        match hits.len() {
            0 => {
                return Err(Error::PrimeCaseContradiction {
                    k: k + 1,
                    msg: "delta_k is nonzero but vanishes on every active prime".into(),
                })
            }
            1 => {}
            _ => {
                return Err(Error::MultipleNonzeroDelta {
                    k: k + 1,
                    j1: hits[0].0 + 1,
                    j2: hits[1].0 + 1,
                })
            }
        }
        let (j0, dy) = hits.pop().unwrap();
        // alpha_{k j0} over the already-known chain of j0
        let mut akj = MonomialScalar::one();
        for m in chain(&p, j0) {
            akj = akj.mul(&ore.lambda[k][m]);
        }
        // d_k = delta_k(y_{j0}) / (alpha_{k j0} (lambda_k - 1))
        let divisor = &akj.to_ratfunc()
            * &(&lambda_k[k].to_ratfunc() - &crate::scalars::RatFunc::one());
        if divisor.is_zero() {
            return Err(Error::PrimeCaseContradiction {
                k: k + 1,
                msg: "eigenvalue 1 makes the closed-form divisor vanish".into(),
            });
        }
        let dk = dy.scale(&divisor.inv()?);
        let yk = ore.mul(&y[j0], &PBWPoly::var(n, k))?.sub(&dk);
        // homogeneity of the new data
        ensure_homogeneous(&dk, lattice, k, "d")?;
        ensure_homogeneous(&yk, lattice, k, "y")?;
        s[j0] = Some(k);
        mu.push(mu[j0]);
        p.push(Some(j0));
        d.push(Some(dk));
        y.push(yk);
    }
    let rank = fresh;
    let delta_zero_count = (0..n).filter(|&k| (0..k).all(|j| ore.delta[k][j].is_zero())).count();
    if rank != delta_zero_count {
        return Err(Error::InvariantViolation(format!(
            "rank {} does not match the {} derivation-free levels",
            rank, delta_zero_count
        )));
    }
    // kbar, alpha, q
    let kbar: Vec<Exp> = (0..n)
        .map(|k| {
            let mut e = Exp::zero(n);
            for m in chain(&p, k) {
                e.0[m] += 1;
            }
            e
        })
        .collect();
    let mut alpha = vec![vec![MonomialScalar::one(); n]; n];
    for k in 0..n {
        for j in 0..n {
            let mut a = MonomialScalar::one();
            for m in chain(&p, j) {
                a = a.mul(&ore.lambda[k][m]);
            }
            alpha[k][j] = a;
        }
    }
    let mut qmat = vec![vec![MonomialScalar::one(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut qq = MonomialScalar::one();
            for i in chain(&p, a) {
                for m in chain(&p, b) {
                    qq = qq.mul(&ore.lambda[i][m]);
                }
            }
            qmat[a][b] = qq;
        }
    }
    Ok(PrimeSequence { n_vars: n, y, d, mu, p, s, rank, kbar, alpha, qmat, lambda_k })
}

fn ensure_homogeneous(
    a: &PBWPoly,
    lattice: &RelationLattice,
    k: usize,
    what: &str,
) -> Result<(), Error> {
    if a.is_zero() {
        return Ok(());
    }
    char_lattice::homogeneity_class(a, lattice).map(|_| ()).map_err(|_| {
        Error::NotHomogeneous(format!("{}_{} = {}", what, k + 1, a))
    })
}

/// One named identity check of the verification report.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

/// Re-verify every commutation identity of the sequence by exact expansion.
pub fn verify_prime_sequence(
    pres: &Presentation,
    seq: &PrimeSequence,
    lattice: &RelationLattice,
) -> Result<Vec<Check>, Error> {
    let n = pres.n;
    let ore = &pres.ore;
    let mut checks = Vec::new();
    let mut push = |name: String, pass: bool| checks.push(Check { name, pass });
    // (a) y_k y_j = q_{kj} y_j y_k
    for k in 0..n {
        for j in 0..k {
            let lhs = ore.mul(&seq.y[k], &seq.y[j])?;
            let rhs = ore.mul(&seq.y[j], &seq.y[k])?.scale(&seq.qmat[k][j].to_ratfunc());
            push(format!("y{} y{} = q_{}{} y{} y{}", k + 1, j + 1, k + 1, j + 1, j + 1, k + 1), lhs == rhs);
        }
    }
    // (b) y_j x_k = alpha_{kj}^-1 x_k y_j whenever s(j) > k
    for j in 0..n {
        for k in 0..n {
            let s_gt_k = seq.s[j].is_none_or(|sj| sj > k);
            if !s_gt_k {
                continue;
            }
            let xk = PBWPoly::var(n, k);
            let lhs = ore.mul(&seq.y[j], &xk)?;
            let rhs = ore.mul(&xk, &seq.y[j])?.scale(&seq.alpha[k][j].inv().to_ratfunc());
            push(format!("y{} x{} = alpha_{}{}^-1 x{} y{}", j + 1, k + 1, k + 1, j + 1, k + 1, j + 1), lhs == rhs);
        }
    }
    // (c) lt(y_k) = x^kbar with unit coefficient
    for k in 0..n {
        let lt = seq.y[k].leading_term();
        let pass = matches!(lt, Some((e, c)) if *e == seq.kbar[k] && c.is_one());
        push(format!("lt(y{}) = x^kbar_{}", k + 1, k + 1), pass);
    }
    // (d) delta_k kills the primes that stay active past step k
    for k in 0..n {
        for j in 0..k {
            if seq.s[j].is_none_or(|sj| sj > k) {
                let dy = ore.apply_delta(k, &seq.y[j])?;
                push(format!("delta_{}(y{}) = 0", k + 1, j + 1), dy.is_zero());
            }
        }
    }
    // (e) delta_k(d_k) = 0 and the d_k commutation identity
    for k in 0..n {
        let (Some(dk), Some(pk)) = (&seq.d[k], seq.p[k]) else { continue };
        let ddk = ore.apply_delta(k, dk)?;
        push(format!("delta_{}(d{}) = 0", k + 1, k + 1), ddk.is_zero());
        let lhs = ore.mul(&seq.y[pk], dk)?;
        let scale = seq.alpha[k][pk].mul(&seq.lambda_k[k]).inv();
        let rhs = ore.mul(dk, &seq.y[pk])?.scale(&scale.to_ratfunc());
        push(
            format!("y{} d{} = (alpha_{}{} lambda_{})^-1 d{} y{}", pk + 1, k + 1, k + 1, pk + 1, k + 1, k + 1, pk + 1),
            lhs == rhs,
        );
    }
    // (f) d_k is homogeneous of the degree class of x^kbar_k
    for k in 0..n {
        let Some(dk) = &seq.d[k] else { continue };
        let target: Vec<num_bigint::BigInt> =
            seq.kbar[k].0.iter().map(|&x| num_bigint::BigInt::from(x)).collect();
        let pass = match char_lattice::homogeneity_class(dk, lattice) {
            Ok(rep) => char_lattice::same_class(lattice, &rep, &target),
            Err(_) => false,
        };
        push(format!("deg d{} = deg x^kbar_{}", k + 1, k + 1), pass);
    }
    Ok(checks)
}
