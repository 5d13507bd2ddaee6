//! Point-to-point function updates.
//!
//! The receiver knows `A x`. The source sends `H (x + e)` with `H = S A`,
//! where the rows of H span a 2eps-dimensional MRSC of the row space of A.
//! The receiver strips `S A x`, finds a lightest `e'` with `H e' = H e`, and
//! outputs `A x + A e'`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{certify, Certificate, LinearCode};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{min_weight_preimage, Combinations, FieldMatrix};
use crate::mrsc::{construct_linearized_mrsc, construct_random_mrsc, construct_striped_mrsc};

/// No scheme can send fewer than min(m, 2 eps) symbols.
pub fn lower_bound(m: usize, eps: usize) -> usize {
    m.min(2 * eps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P2PMethod {
    Random { max_tries: usize },
    /// Moore-matrix route; the scheme then lives over GF(q^m).
    Linearized,
    /// Extension-then-shorten route for block-diagonal A.
    Striped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P2PScheme {
    a: FieldMatrix,
    eps: usize,
    h: FieldMatrix,
    s: FieldMatrix,
    certificate: Option<Certificate>,
}

impl P2PScheme {
    /// Reassembles a scheme, checking `H = S A` and that H has full rank.
    pub fn from_parts(
        a: FieldMatrix,
        eps: usize,
        h: FieldMatrix,
        s: FieldMatrix,
        certificate: Option<Certificate>,
    ) -> Result<P2PScheme> {
        if s.mul(&a)? != h {
            return Err(Error::NotSubcode);
        }
        let rank = h.rank();
        if rank != h.rows() {
            return Err(Error::NotFullRank { rank, rows: h.rows() });
        }
        Ok(P2PScheme { a, eps, h, s, certificate })
    }

    pub fn a(&self) -> &FieldMatrix {
        &self.a
    }

    pub fn eps(&self) -> usize {
        self.eps
    }

    pub fn h(&self) -> &FieldMatrix {
        &self.h
    }

    pub fn s(&self) -> &FieldMatrix {
        &self.s
    }

    /// Present when H had to be an MRSC; absent when H = A.
    pub fn certificate(&self) -> Option<&Certificate> {
        self.certificate.as_ref()
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn cost(&self) -> usize {
        self.h.rows()
    }

    pub fn encode(&self, x_new: &[u32]) -> Result<Vec<u32>> {
        self.h.mul_vec(x_new)
    }

    /// Recovers `A (x + e)` from `y = H (x + e)` and `side = A x`.
    pub fn decode(&self, y: &[u32], side: &[u32]) -> Result<Vec<u32>> {
        if side.len() != self.a.rows() {
            return Err(Error::Dimension(format!(
                "side information of length {} for {} rows",
                side.len(),
                self.a.rows()
            )));
        }
        let f = self.a.field();
        let known = self.s.mul_vec(side)?;
        if y.len() != known.len() {
            return Err(Error::Dimension(format!(
                "received {} symbols, scheme sends {}",
                y.len(),
                known.len()
            )));
        }
        let syndrome: Vec<u32> = y.iter().zip(&known).map(|(&a, &b)| f.sub(a, b)).collect();
        let e_hat = min_weight_preimage(&self.h, &syndrome, self.eps)?
            .ok_or(Error::NoPreimage { w_max: self.eps })?;
        let delta = self.a.mul_vec(&e_hat.to_dense())?;
        Ok(side.iter().zip(&delta).map(|(&a, &b)| f.add(a, b)).collect())
    }
}

pub fn p2p_encode(scheme: &P2PScheme, x_new: &[u32]) -> Result<Vec<u32>> {
    scheme.encode(x_new)
}

pub fn p2p_decode(scheme: &P2PScheme, y: &[u32], side: &[u32]) -> Result<Vec<u32>> {
    scheme.decode(y, side)
}

/// Recovers `a` from `diag(a, .., a)`.
pub fn detect_stripes(a: &FieldMatrix) -> Result<Vec<u32>> {
    let m = a.rows();
    if m == 0 || !a.cols().is_multiple_of(m) {
        return Err(Error::NotStriped);
    }
    let k = a.cols() / m;
    let first = a.row(0)[..k].to_vec();
    for i in 0..m {
        for (c, &v) in a.row(i).iter().enumerate() {
            let expected = if c / k == i { first[c % k] } else { 0 };
            if v != expected {
                return Err(Error::NotStriped);
            }
        }
    }
    Ok(first)
}

/// Builds an optimal scheme with cost min(m, 2 eps).
pub fn build_p2p_scheme(a: &FieldMatrix, eps: usize, method: P2PMethod, seed: u64) -> Result<P2PScheme> {
    let c_a = LinearCode::new(a.clone())?;
    let m = a.rows();
    let f = a.field();
    if eps == 0 {
        let zero = LinearCode::zero(f, a.cols());
        let certificate = certify(&zero, &c_a)?;
        return P2PScheme::from_parts(
            a.clone(),
            0,
            FieldMatrix::empty(f, a.cols()),
            FieldMatrix::zeros(f, 0, m),
            Some(certificate),
        );
    }
    if m <= 2 * eps {
        return P2PScheme::from_parts(a.clone(), eps, a.clone(), FieldMatrix::identity(f, m), None);
    }
    let k = 2 * eps;
    let (a, certified) = match method {
        P2PMethod::Random { max_tries } => (a.clone(), construct_random_mrsc(&c_a, k, seed, max_tries)?),
        P2PMethod::Linearized => {
            let lifted = construct_linearized_mrsc(&c_a, k)?;
            (lifted.superset.generator().clone(), lifted.code)
        }
        P2PMethod::Striped => {
            let stripe = detect_stripes(a)?;
            (a.clone(), construct_striped_mrsc(f, &stripe, m, eps)?.code)
        }
    };
    let h = certified.code.generator().clone();
    let s = a.solve_left(&h)?.ok_or(Error::NotSubcode)?;
    P2PScheme::from_parts(a, eps, h, s, Some(certified.certificate))
}

/// Two inputs the receiver cannot tell apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusablePair {
    pub x1: Vec<u32>,
    pub e1: Vec<u32>,
    pub x2: Vec<u32>,
    pub e2: Vec<u32>,
    /// `e1 - e2`: 2eps-sparse, killed by the common code, not by A.
    pub y: Vec<u32>,
    pub h_images_equal: bool,
    pub side_equal: bool,
    pub updates_differ: bool,
}

impl ConfusablePair {
    pub fn is_valid(&self) -> bool {
        self.h_images_equal && self.side_equal && self.updates_differ
    }
}

pub fn add_vectors(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

/// Searches for a 2eps-sparse `y` orthogonal to `C_H ∩ C_A` with `A y != 0`
/// and turns it into a confusable pair. `None` means H meets the necessary
/// condition.
pub fn find_counterexample(h: &FieldMatrix, a: &FieldMatrix, eps: usize) -> Result<Option<ConfusablePair>> {
    let f = a.field().clone();
    let n = a.cols();
    let common = h.row_space_intersection(a)?;
    let w = (2 * eps).min(n);

    let mut combos = Combinations::new(n, w);
    let mut found = None;
    while let Some(t) = combos.next_subset() {
        let kernel = common.select_columns(t)?.kernel_basis();
        let a_t = a.select_columns(t)?;
        for r in 0..kernel.rows() {
            let v = kernel.row(r);
            if a_t.mul_vec(v)?.iter().any(|&x| x != 0) {
                let mut y = vec![0u32; n];
                for (&c, &val) in t.iter().zip(v) {
                    y[c] = val;
                }
                found = Some(y);
                break;
            }
        }
        if found.is_some() {
            break;
        }
    }
    let Some(y) = found else {
        return Ok(None);
    };

    // y = e1 - e2 with both halves eps-sparse
    let support: Vec<usize> = (0..n).filter(|&i| y[i] != 0).collect();
    let mut e1 = vec![0u32; n];
    let mut e2 = vec![0u32; n];
    for (j, &i) in support.iter().enumerate() {
        if j < eps {
            e1[i] = y[i];
        } else {
            e2[i] = f.neg(y[i]);
        }
    }

    // y = u + v with u in dual(C_A), v in dual(C_H)
    let dual_a = a.kernel_basis();
    let dual_h = h.kernel_basis();
    let stacked = dual_a.vstack(&dual_h)?;
    let target = FieldMatrix::new(&f, 1, n, y.clone())?;
    let z = stacked
        .solve_left(&target)?
        .ok_or_else(|| Error::Dimension("sparse word outside the sum of duals".to_string()))?;
    let z_a: Vec<u32> = z.row(0)[..dual_a.rows()].to_vec();
    let u = dual_a.left_mul_vec(&z_a)?;

    let x1: Vec<u32> = u.iter().map(|&v| f.neg(v)).collect();
    let x2 = vec![0u32; n];
    let h1 = h.mul_vec(&add_vectors(&f, &x1, &e1))?;
    let h2 = h.mul_vec(&add_vectors(&f, &x2, &e2))?;
    let side_equal = a.mul_vec(&x1)? == a.mul_vec(&x2)?;
    let updates_differ = a.mul_vec(&e1)? != a.mul_vec(&e2)?;
    Ok(Some(ConfusablePair {
        x1,
        e1,
        x2,
        e2,
        y,
        h_images_equal: h1 == h2,
        side_equal,
        updates_differ,
    }))
}

/// Outcome of running a check over many difference vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<Vec<u32>>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self
    }
}

/// Number of vectors of length n over GF(q) with weight at most w.
pub fn count_sparse(n: usize, q: u32, w: usize) -> u128 {
    (0..=w.min(n))
        .map(|k| crate::linalg::binomial(n, k) * ((q - 1) as u128).pow(k as u32))
        .sum()
}

/// Runs `check` on every vector of weight at most `w_max`, in parallel over
/// supports. `check` returns true on success.
pub fn sweep_sparse<F>(n: usize, field: &Field, w_max: usize, check: F) -> SweepReport
where
    F: Fn(&[u32]) -> bool + Sync,
{
    let q = field.order();
    let mut supports: Vec<Vec<usize>> = Vec::new();
    for w in 0..=w_max.min(n) {
        let mut combos = Combinations::new(n, w);
        while let Some(s) = combos.next_subset() {
            supports.push(s.to_vec());
        }
    }
    supports
        .par_iter()
        .map(|support| {
            let mut report = SweepReport::default();
            let mut values = vec![1u32; support.len()];
            let mut e = vec![0u32; n];
            loop {
                for (&i, &v) in support.iter().zip(&values) {
                    e[i] = v;
                }
                report.cases += 1;
                if !check(&e) {
                    report.failures += 1;
                    if report.first_failure.is_none() {
                        report.first_failure = Some(e.clone());
                    }
                }
                // odometer over nonzero values
                let mut j = 0;
                while j < values.len() {
                    values[j] += 1;
                    if values[j] < q {
                        break;
                    }
                    values[j] = 1;
                    j += 1;
                }
                if j == values.len() {
                    break;
                }
            }
            report
        })
        .reduce(SweepReport::default, SweepReport::merge)
}

/// Decodes every eps-sparse update against each of the given messages.
pub fn verify_p2p_exhaustive(scheme: &P2PScheme, messages: &[Vec<u32>]) -> SweepReport {
    let f = scheme.field().clone();
    let a = scheme.a();
    let sides: Vec<Vec<u32>> = messages
        .iter()
        .map(|x| a.mul_vec(x).expect("message length"))
        .collect();
    sweep_sparse(a.cols(), &f, scheme.eps(), |e| {
        messages.iter().zip(&sides).all(|(x, side)| {
            let x_new = add_vectors(&f, x, e);
            let Ok(y) = scheme.encode(&x_new) else {
                return false;
            };
            match scheme.decode(&y, side) {
                Ok(out) => a.mul_vec(&x_new).is_ok_and(|want| want == out),
                Err(_) => false,
            }
        })
    })
}
