//! The character lattice of relations forced on a diagonal torus action,
//! its saturation, and the maximal torus it cuts out.
//!
//! Each nonzero derivation `delta_k` forces the relation
//! `psi_k psi_{j_k} = psi^{m_k}` on any diagonal automorphism
//! `x_i -> psi_i x_i`; the integer rows `e_k + e_{j_k} - m_k` span a lattice
//! whose saturation describes the maximal torus exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::intmat::{self, Mat};
use crate::pbw::{Exp, PBWPoly};
use crate::presentation::Presentation;
use crate::scalars::MonomialScalar;
use crate::Error;

#[derive(Clone, Debug)]
pub struct RelationLattice {
    pub n: usize,
    /// One row `e_k + e_{j_k} - m_k` per index with a nonzero derivation.
    pub rows: Mat,
    /// The `(k, j_k, m_k)` choices behind each row (0-based indices).
    pub choices: Vec<(usize, usize, Exp)>,
    /// Basis of the saturation of the row lattice.
    pub saturation: Mat,
    /// Rank of the lattice; equals the number of rows for CGL data.
    pub rank: usize,
}

impl RelationLattice {
    /// Rank of the maximal torus: the corank of the lattice.
    pub fn hmax_rank(&self) -> usize {
        self.n - self.rank
    }

    /// Integer `n x hmax_rank` matrix whose columns parametrize the torus:
    /// the kernel of the saturation basis.
    pub fn cocharacter_basis(&self) -> Mat {
        intmat::kernel_basis(&self.saturation, self.n)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        intmat::row_lattice_contains(&self.saturation, v)
    }
}

fn exp_to_bigint(e: &Exp) -> Vec<BigInt> {
    e.0.iter().map(|&x| BigInt::from(x)).collect()
}

fn row_of_choice(n: usize, k: usize, j: usize, m: &Exp) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); n];
    row[k] += 1;
    row[j] += 1;
    for (i, &x) in m.0.iter().enumerate() {
        row[i] -= BigInt::from(x);
    }
    row
}

fn build(n: usize, rows: Mat, choices: Vec<(usize, usize, Exp)>) -> Result<RelationLattice, Error> {
    let expected = rows.len();
    let (saturation, rank) = if rows.is_empty() {
        (Vec::new(), 0)
    } else {
        let sat = intmat::saturation_basis(&rows);
        let r = sat.len();
        (sat, r)
    };
    if rank != expected {
        return Err(Error::InvariantViolation(format!(
            "relation lattice has rank {} but {} derivation rows",
            rank, expected
        )));
    }
    Ok(RelationLattice { n, rows, choices, saturation, rank })
}

/// The lattice under the default choice policy: smallest admissible `j_k`,
/// least monomial of `delta_k(x_{j_k})` in the exponent order.
pub fn relation_lattice(p: &Presentation) -> Result<RelationLattice, Error> {
    let n = p.n;
    let mut rows = Vec::new();
    let mut choices = Vec::new();
    for k in 0..n {
        let Some(j) = (0..k).find(|&j| !p.ore.delta[k][j].is_zero()) else { continue };
        let m = p.ore.delta[k][j].terms.keys().next().unwrap().clone();
        rows.push(row_of_choice(n, k, j, &m));
        choices.push((k, j, m));
    }
    build(n, rows, choices)
}

/// True iff `prod_i psi_i^{v_i} = 1` for every saturation-basis vector `v`.
pub fn torus_membership(psi: &[MonomialScalar], l: &RelationLattice) -> bool {
    for v in &l.saturation {
        let mut c = BigRational::one();
        let mut e = 0i64;
        for (psi_i, vi) in psi.iter().zip(v) {
            let vi = i64::try_from(vi).expect("saturation entry fits i64");
            let p = psi_i.pow(vi);
            c *= p.c;
            e += p.e;
        }
        if !(c.is_one() && e == 0) {
            return false;
        }
    }
    true
}

/// The common exponent class of all terms of `a` modulo the saturation,
/// as a representative vector.
pub fn homogeneity_class(a: &PBWPoly, l: &RelationLattice) -> Result<Vec<BigInt>, Error> {
    let mut it = a.terms.keys();
    let Some(first) = it.next() else { return Err(Error::ZeroElement) };
    let rep = exp_to_bigint(first);
    for e in it {
        let diff: Vec<BigInt> =
            exp_to_bigint(e).iter().zip(&rep).map(|(a, b)| a - b).collect();
        if !l.contains(&diff) {
            return Err(Error::NotHomogeneous(format!("{}", a)));
        }
    }
    Ok(rep)
}

pub fn same_class(l: &RelationLattice, a: &[BigInt], b: &[BigInt]) -> bool {
    let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    l.contains(&diff)
}

const ENUMERATION_CAP: u64 = 10_000;

/// Exhaustively checks that every admissible `(j_k, m_k)` choice produces
/// the same saturated lattice.
pub fn choice_independence(p: &Presentation) -> Result<bool, Error> {
    let n = p.n;
    // options[k] = all (j, m) with delta_k(x_j) != 0, m a monomial thereof
    let mut options: Vec<Vec<(usize, Exp)>> = Vec::new();
    for k in 0..n {
        let opts: Vec<(usize, Exp)> = (0..k)
            .flat_map(|j| {
                p.ore.delta[k][j].terms.keys().map(move |m| (j, m.clone())).collect::<Vec<_>>()
            })
            .collect();
        if !opts.is_empty() {
            options.push(opts);
        }
    }
    let total: u64 = options.iter().map(|o| o.len() as u64).product();
    if total > ENUMERATION_CAP {
        return Err(Error::EnumerationCapExceeded(format!(
            "{} choice combinations exceed the cap of {}",
            total, ENUMERATION_CAP
        )));
    }
    let reference = relation_lattice(p)?;
    let ks: Vec<usize> = (0..n).filter(|&k| (0..k).any(|j| !p.ore.delta[k][j].is_zero())).collect();
    let mut picks = vec![0usize; options.len()];
    loop {
        let rows: Mat = ks
            .iter()
            .zip(&picks)
            .map(|(&k, &pi)| {
                let (j, m) = &options[ks.iter().position(|&x| x == k).unwrap()][pi];
                row_of_choice(n, k, *j, m)
            })
            .collect();
        let sat = if rows.is_empty() { Vec::new() } else { intmat::saturation_basis(&rows) };
        let same = sat.len() == reference.saturation.len()
            && sat.iter().all(|r| reference.contains(r))
            && reference.saturation.iter().all(|r| intmat::row_lattice_contains(&sat, r));
        if !same {
            return Ok(false);
        }
        // next combination
        let mut i = 0;
        loop {
            if i == picks.len() {
                return Ok(true);
            }
            picks[i] += 1;
            if picks[i] < options[i].len() {
                break;
            }
            picks[i] = 0;
            i += 1;
        }
    }
}

const SIGN_SEARCH_MAX_N: usize = 12;
const EXPONENT_TARGETS: &[i64] = &[1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7, 8, -8];

/// Search the monomial ansatz `psi_i = s_i q^{a_i}` for a torus element with
/// the prescribed fixed slots, a non-root-of-unity value in `nonroot_slot`,
/// and membership in the maximal torus. Returns `None` if the search fails.
fn find_torus_solution(
    fixed: &[Option<MonomialScalar>],
    nonroot_slot: usize,
    l: &RelationLattice,
) -> Option<Vec<MonomialScalar>> {
    let n = l.n;
    // the ansatz needs every fixed coefficient to be +-1 times a q-power
    let mut sign_fixed: Vec<Option<bool>> = vec![None; n]; // true = negative
    let mut exp_fixed: Vec<Option<i64>> = vec![None; n];
    for (i, f) in fixed.iter().enumerate() {
        if let Some(s) = f {
            if s.c.is_one() {
                sign_fixed[i] = Some(false);
            } else if (-&s.c).is_one() {
                sign_fixed[i] = Some(true);
            } else {
                return None;
            }
            exp_fixed[i] = Some(s.e);
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| exp_fixed[i].is_none()).collect();
    if !free.contains(&nonroot_slot) && exp_fixed[nonroot_slot] == Some(0) {
        return None;
    }
    // exponent part: for each saturation row v, sum_i v_i a_i = 0
    let a_mat: Mat = l
        .saturation
        .iter()
        .map(|v| free.iter().map(|&i| v[i].clone()).collect())
        .collect();
    let b_vec: Vec<BigInt> = l
        .saturation
        .iter()
        .map(|v| {
            -(0..n)
                .filter_map(|i| exp_fixed[i].map(|a| &v[i] * BigInt::from(a)))
                .sum::<BigInt>()
        })
        .collect();
    let exps: Option<Vec<i64>> = 'exp: {
        if free.is_empty() {
            if b_vec.iter().all(|b| b.is_zero()) {
                break 'exp Some(Vec::new());
            }
            break 'exp None;
        }
        let slot_pos = free.iter().position(|&i| i == nonroot_slot);
        // try pinning the non-root slot to small nonzero targets
        if let Some(sp) = slot_pos {
            for &t in EXPONENT_TARGETS {
                let mut a2 = a_mat.clone();
                let mut b2 = b_vec.clone();
                let mut pin = vec![BigInt::zero(); free.len()];
                pin[sp] = BigInt::one();
                a2.push(pin);
                b2.push(BigInt::from(t));
                if let Some(x) = intmat::solve(&a2, &b2) {
                    break 'exp Some(
                        x.iter().map(|v| i64::try_from(v).expect("small solution")).collect(),
                    );
                }
            }
            break 'exp None;
        }
        intmat::solve(&a_mat, &b_vec)
            .map(|x| x.iter().map(|v| i64::try_from(v).expect("small solution")).collect())
    };
    let exps = exps?;
    // sign part: exhaust the free sign bits (n is small)
    let free_signs: Vec<usize> = (0..n).filter(|&i| sign_fixed[i].is_none()).collect();
    if free_signs.len() > SIGN_SEARCH_MAX_N {
        return None;
    }
    'signs: for mask in 0u64..(1u64 << free_signs.len()) {
        let mut neg = vec![false; n];
        for (i, sf) in sign_fixed.iter().enumerate() {
            if let Some(s) = sf {
                neg[i] = *s;
            }
        }
        for (bit, &i) in free_signs.iter().enumerate() {
            neg[i] = (mask >> bit) & 1 == 1;
        }
        for v in &l.saturation {
            let parity: BigInt = (0..n).filter(|&i| neg[i]).map(|i| v[i].clone()).sum();
            if !(&parity % BigInt::from(2)).is_zero() {
                continue 'signs;
            }
        }
        // assemble and double-check
        let mut psi = Vec::with_capacity(n);
        for i in 0..n {
            let e = exp_fixed[i].unwrap_or_else(|| {
                exps[free.iter().position(|&f| f == i).unwrap()]
            });
            let c = if neg[i] {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            psi.push(MonomialScalar::new(c, e).unwrap());
        }
        if psi[nonroot_slot].is_root_of_unity() {
            continue;
        }
        if torus_membership(&psi, l) {
            return Some(psi);
        }
    }
    None
}

/// Best-effort witness for axiom (iv) at index `k` (0-based): a torus element
/// acting as `sigma_k` on `x_1..x_{k-1}` with non-root-of-unity eigenvalue on
/// `x_k`.
pub fn find_h_element(k: usize, p: &Presentation, l: &RelationLattice) -> Option<Vec<MonomialScalar>> {
    let mut fixed: Vec<Option<MonomialScalar>> = vec![None; p.n];
    for j in 0..k {
        fixed[j] = Some(p.ore.lambda[k][j].clone());
    }
    find_torus_solution(&fixed, k, l)
}

/// Best-effort witness for the symmetric condition at index `j` (0-based):
/// a torus element acting by `lambda_{kj}^{-1}` on `x_k` for `k > j` with
/// non-root-of-unity eigenvalue on `x_j`.
pub fn find_h_prime_element(
    j: usize,
    p: &Presentation,
    l: &RelationLattice,
) -> Option<Vec<MonomialScalar>> {
    let mut fixed: Vec<Option<MonomialScalar>> = vec![None; p.n];
    for k in (j + 1)..p.n {
        fixed[k] = Some(p.ore.lambda[k][j].inv());
    }
    find_torus_solution(&fixed, j, l)
}
