//! Broadcasting one update to two receivers with different side information.
//!
//! Receiver A knows `A x`, receiver B knows `B x`. The source sends `H (x + e)`
//! where `C_H = C_HA + C_HB`, each `C_HX` being a 2eps-dimensional MRSC of
//! `C_X` and both containing a common θ-dimensional MRSC of `C_A ∩ C_B`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::linalg::{binomial, Combinations, FieldMatrix, SupportSet};
use crate::mrsc::{construct_random_mrsc, construct_sandwiched_random, SandwichSpec};
use crate::update::{add_vectors, build_p2p_scheme, P2PMethod, P2PScheme, SweepReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Receiver {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `C_A ∩ C_B = {0}`.
    TrivialIntersection,
    /// Nontrivial intersection and both ranks above 2eps.
    General,
    /// Nontrivial intersection with a rank at most 2eps; no optimal cost known.
    Uncovered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub theta_a: usize,
    pub theta_b: usize,
    pub theta: usize,
    pub argmin_a: Option<SupportSet>,
    pub argmin_b: Option<SupportSet>,
    pub intersection_dim: usize,
}

/// Smallest rank of the intersection code over 2eps-cores of `dual(C_X)`.
/// Returns the first minimizing core in lexicographic order.
fn min_over_cores(x: &FieldMatrix, common: &FieldMatrix, k: usize) -> Result<(usize, SupportSet)> {
    let n = x.cols();
    let best = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut best: Option<(usize, Vec<usize>)> = None;
            if n - first < k || (k == 0 && first > 0) {
                return best;
            }
            let start: Vec<usize> = (first..first + k).collect();
            let mut combos = Combinations::starting_at(n, start);
            while let Some(s) = combos.next_subset() {
                if k > 0 && s[0] != first {
                    break;
                }
                if x.rank_of_columns(s) != k {
                    continue;
                }
                let r = common.rank_of_columns(s);
                if best.as_ref().is_none_or(|(b, _)| r < *b) {
                    best = Some((r, s.to_vec()));
                    if r == 0 {
                        break;
                    }
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .fold(None::<(usize, Vec<usize>)>, |acc, cur| match acc {
            Some(a) if a.0 <= cur.0 => Some(a),
            _ => Some(cur),
        });
    let (r, s) = best.ok_or(Error::NoCore { size: k, rank: x.rows() })?;
    Ok((r, SupportSet::new(n, s)?))
}

/// θ for the pair (A, B). Refuses when more than `budget` subsets would be
/// scanned per side.
pub fn compute_theta(a: &FieldMatrix, b: &FieldMatrix, eps: usize, budget: u128) -> Result<ThetaReport> {
    check_pair(a, b)?;
    let common = a.row_space_intersection(b)?;
    if common.rows() == 0 {
        return Ok(ThetaReport {
            theta_a: 0,
            theta_b: 0,
            theta: 0,
            argmin_a: None,
            argmin_b: None,
            intersection_dim: 0,
        });
    }
    let n = a.cols();
    let k = 2 * eps;
    let subsets = binomial(n, k);
    if subsets > budget {
        return Err(Error::BudgetExceeded { subsets, budget });
    }
    let (theta_a, argmin_a) = min_over_cores(a, &common, k)?;
    let (theta_b, argmin_b) = min_over_cores(b, &common, k)?;
    Ok(ThetaReport {
        theta_a,
        theta_b,
        theta: theta_a.min(theta_b),
        argmin_a: Some(argmin_a),
        argmin_b: Some(argmin_b),
        intersection_dim: common.rows(),
    })
}

fn check_pair(a: &FieldMatrix, b: &FieldMatrix) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "A has {} columns, B has {}",
            a.cols(),
            b.cols()
        )));
    }
    for m in [a, b] {
        let rank = m.rank();
        if rank != m.rows() {
            return Err(Error::NotFullRank { rank, rows: m.rows() });
        }
    }
    Ok(())
}

pub fn classify(a: &FieldMatrix, b: &FieldMatrix, eps: usize) -> Result<Regime> {
    check_pair(a, b)?;
    if a.row_space_intersection(b)?.rows() == 0 {
        Ok(Regime::TrivialIntersection)
    } else if a.rows() > 2 * eps && b.rows() > 2 * eps {
        Ok(Regime::General)
    } else {
        Ok(Regime::Uncovered)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub regime: Regime,
    /// None in the uncovered regime.
    pub cost: Option<usize>,
    pub theta: Option<ThetaReport>,
}

pub fn optimal_broadcast_cost(a: &FieldMatrix, b: &FieldMatrix, eps: usize, budget: u128) -> Result<CostReport> {
    let regime = classify(a, b, eps)?;
    Ok(match regime {
        Regime::TrivialIntersection => CostReport {
            regime,
            cost: Some(a.rows().min(2 * eps) + b.rows().min(2 * eps)),
            theta: None,
        },
        Regime::General => {
            let theta = compute_theta(a, b, eps, budget)?;
            CostReport {
                regime,
                cost: Some(4 * eps - theta.theta),
                theta: Some(theta),
            }
        }
        Regime::Uncovered => CostReport {
            regime,
            cost: None,
            theta: None,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BroadcastOptions {
    /// Used for each receiver when the intersection is trivial. The general
    /// regime always goes through the random sandwich route.
    pub method: P2PMethod,
    pub max_tries: usize,
    pub theta_budget: u128,
}

impl Default for BroadcastOptions {
    fn default() -> Self {
        BroadcastOptions {
            method: P2PMethod::Random { max_tries: 64 },
            max_tries: 64,
            theta_budget: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BroadcastScheme {
    pub eps: usize,
    pub regime: Regime,
    pub h: FieldMatrix,
    /// `H_X = T_X H`.
    pub t_a: FieldMatrix,
    pub t_b: FieldMatrix,
    /// Generator of `C_HA ∩ C_HB`; empty in the trivial regime.
    pub h_hat: FieldMatrix,
    pub theta: Option<ThetaReport>,
    pub receiver_a: P2PScheme,
    pub receiver_b: P2PScheme,
}

impl BroadcastScheme {
    pub fn cost(&self) -> usize {
        self.h.rows()
    }

    pub fn receiver(&self, r: Receiver) -> &P2PScheme {
        match r {
            Receiver::A => &self.receiver_a,
            Receiver::B => &self.receiver_b,
        }
    }

    pub fn projection(&self, r: Receiver) -> &FieldMatrix {
        match r {
            Receiver::A => &self.t_a,
            Receiver::B => &self.t_b,
        }
    }

    pub fn encode(&self, x_new: &[u32]) -> Result<Vec<u32>> {
        self.h.mul_vec(x_new)
    }

    pub fn decode(&self, r: Receiver, y: &[u32], side: &[u32]) -> Result<Vec<u32>> {
        let y_r = self.projection(r).mul_vec(y)?;
        self.receiver(r).decode(&y_r, side)
    }
}

pub fn broadcast_decode(scheme: &BroadcastScheme, r: Receiver, y: &[u32], side: &[u32]) -> Result<Vec<u32>> {
    scheme.decode(r, y, side)
}

fn projections(h: &FieldMatrix, h_a: &FieldMatrix, h_b: &FieldMatrix) -> Result<(FieldMatrix, FieldMatrix)> {
    let t_a = h.solve_left(h_a)?.ok_or(Error::NotSubcode)?;
    let t_b = h.solve_left(h_b)?.ok_or(Error::NotSubcode)?;
    Ok((t_a, t_b))
}

pub fn build_broadcast_scheme(
    a: &FieldMatrix,
    b: &FieldMatrix,
    eps: usize,
    seed: u64,
    options: &BroadcastOptions,
) -> Result<BroadcastScheme> {
    let regime = classify(a, b, eps)?;
    let f = a.field();
    match regime {
        Regime::Uncovered => Err(Error::UncoveredRegime(format!(
            "ranks {} and {} with 2eps = {} and a nontrivial intersection",
            a.rows(),
            b.rows(),
            2 * eps
        ))),
        Regime::TrivialIntersection => {
            let receiver_a = build_p2p_scheme(a, eps, options.method, seed)?;
            let receiver_b = build_p2p_scheme(b, eps, options.method, seed.wrapping_add(1))?;
            if receiver_a.a() != a || receiver_b.a() != b {
                return Err(Error::FieldMismatch);
            }
            let h = receiver_a.h().vstack(receiver_b.h())?;
            let (t_a, t_b) = projections(&h, receiver_a.h(), receiver_b.h())?;
            Ok(BroadcastScheme {
                eps,
                regime,
                h,
                t_a,
                t_b,
                h_hat: FieldMatrix::empty(f, a.cols()),
                theta: None,
                receiver_a,
                receiver_b,
            })
        }
        Regime::General => {
            let theta = compute_theta(a, b, eps, options.theta_budget)?;
            let c_a = LinearCode::new(a.clone())?;
            let c_b = LinearCode::new(b.clone())?;
            let common = c_a.intersection(&c_b)?;
            let c_hat = construct_random_mrsc(&common, theta.theta, seed, options.max_tries)?.code;
            let k = 2 * eps;
            let c_ha = construct_sandwiched_random(
                &SandwichSpec::new(c_a, c_hat.clone(), k)?,
                seed.wrapping_add(1),
                options.max_tries,
            )?;
            let c_hb = construct_sandwiched_random(
                &SandwichSpec::new(c_b, c_hat.clone(), k)?,
                seed.wrapping_add(2),
                options.max_tries,
            )?;
            let h_a = c_ha.code.generator().clone();
            let h_b = c_hb.code.generator().clone();
            let h = h_a.vstack(&h_b)?.row_basis();
            let h_hat = h_a.row_space_intersection(&h_b)?;
            if !LinearCode::span(&h_hat).same_code(&c_hat)? || h.rows() != 4 * eps - theta.theta {
                return Err(Error::CertificateFailed(None));
            }
            let (t_a, t_b) = projections(&h, &h_a, &h_b)?;
            let s_a = a.solve_left(&h_a)?.ok_or(Error::NotSubcode)?;
            let s_b = b.solve_left(&h_b)?.ok_or(Error::NotSubcode)?;
            let receiver_a = P2PScheme::from_parts(a.clone(), eps, h_a, s_a, Some(c_ha.certificate))?;
            let receiver_b = P2PScheme::from_parts(b.clone(), eps, h_b, s_b, Some(c_hb.certificate))?;
            Ok(BroadcastScheme {
                eps,
                regime,
                h,
                t_a,
                t_b,
                h_hat,
                theta: Some(theta),
                receiver_a,
                receiver_b,
            })
        }
    }
}

/// True when both receivers recover their updates for message `x` and
/// difference `e`.
pub fn broadcast_round_trip(scheme: &BroadcastScheme, x: &[u32], e: &[u32]) -> bool {
    let f = scheme.h.field();
    let x_new = add_vectors(f, x, e);
    let Ok(y) = scheme.encode(&x_new) else {
        return false;
    };
    [Receiver::A, Receiver::B].iter().all(|&r| {
        let m = scheme.receiver(r).a();
        let (Ok(side), Ok(want)) = (m.mul_vec(x), m.mul_vec(&x_new)) else {
            return false;
        };
        scheme.decode(r, &y, &side).is_ok_and(|got| got == want)
    })
}

/// Checks every eps-sparse difference against each message.
pub fn verify_broadcast_exhaustive(scheme: &BroadcastScheme, messages: &[Vec<u32>]) -> SweepReport {
    let f = scheme.h.field().clone();
    crate::update::sweep_sparse(scheme.h.cols(), &f, scheme.eps, |e| {
        messages.iter().all(|x| broadcast_round_trip(scheme, x, e))
    })
}
