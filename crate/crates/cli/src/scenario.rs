//! End-to-end storage scenarios with cost accounting.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use supdate_core::broadcast::{build_broadcast_scheme, optimal_broadcast_cost, BroadcastOptions, BroadcastScheme, Receiver, Regime};
use supdate_core::codes::{build_striped_matrix, Certificate};
use supdate_core::update::{add_vectors, build_p2p_scheme, lower_bound, P2PMethod, P2PScheme};
use supdate_core::{Error, Field, Result};

use crate::formats::FieldJson;
use crate::mbr::{block_diagonal, MbrLayout};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    StripedP2p,
    MdsBroadcast,
    MbrBroadcast,
}

fn default_trials() -> usize {
    100
}

fn default_tries() -> usize {
    200
}

fn default_nodes() -> (usize, usize) {
    (1, 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    /// Required for the striped scenarios. For MBR, omitting it tries
    /// GF(2^6), GF(2^8), ... until the construction certifies.
    #[serde(default)]
    pub field: Option<FieldJson>,
    /// Coding vector of the (first) node, length K.
    #[serde(default)]
    pub a: Option<Vec<u32>>,
    /// Coding vector of the second node for mds-broadcast.
    #[serde(default)]
    pub b: Option<Vec<u32>>,
    /// MBR node pair, 1-based.
    #[serde(default = "default_nodes")]
    pub nodes: (usize, usize),
    #[serde(default)]
    pub gamma: Option<u32>,
    pub m: usize,
    pub eps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_tries")]
    pub max_tries: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialStats {
    pub passed: usize,
    pub failed: usize,
    /// (X, E) of the first failing trial.
    pub first_failure: Option<(Vec<u32>, Vec<u32>)>,
}

impl TrialStats {
    fn record(&mut self, ok: bool, x: &[u32], e: &[u32]) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some((x.to_vec(), e.to_vec()));
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: ScenarioKind,
    pub seed: u64,
    pub field: FieldJson,
    pub q: u32,
    /// Field orders attempted before the one used.
    pub fields_rejected: Vec<u32>,
    pub gamma: Option<u32>,
    /// Whether every entry of the common codeword is nonzero (MBR only).
    pub common_codeword_nonzero: Option<bool>,
    pub n: usize,
    pub m: usize,
    pub eps: usize,
    pub cost: usize,
    pub optimal_cost: usize,
    /// Cost of updating each receiver separately.
    pub individual_cost: usize,
    pub saving_percent: f64,
    pub regime: Option<Regime>,
    pub theta: Option<usize>,
    pub certificates: Vec<Certificate>,
    pub trials: usize,
    pub receivers: Vec<TrialStats>,
}

impl ScenarioReport {
    pub fn all_passed(&self) -> bool {
        self.receivers.iter().all(|r| r.failed == 0)
    }
}

/// Uniform weight in 0..=w_max, uniform support, uniform nonzero values.
pub fn random_sparse(n: usize, field: &Field, w_max: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let w = rng.gen_range(0..=w_max.min(n));
    let mut e = vec![0u32; n];
    for i in sample(rng, n, w) {
        e[i] = rng.gen_range(1..field.order());
    }
    e
}

pub fn random_vector(n: usize, field: &Field, rng: &mut ChaCha8Rng) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..field.order())).collect()
}

fn p2p_trial(scheme: &P2PScheme, x: &[u32], e: &[u32]) -> bool {
    let f = scheme.field();
    let a = scheme.a();
    let x_new = add_vectors(f, x, e);
    let (Ok(side), Ok(want), Ok(y)) = (a.mul_vec(x), a.mul_vec(&x_new), scheme.encode(&x_new)) else {
        return false;
    };
    scheme.decode(&y, &side).is_ok_and(|got| got == want)
}

pub fn simulate_p2p(scheme: &P2PScheme, trials: usize, seed: u64) -> TrialStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = scheme.field().clone();
    let n = scheme.a().cols();
    let mut stats = TrialStats::default();
    for _ in 0..trials {
        let x = random_vector(n, &f, &mut rng);
        let e = random_sparse(n, &f, scheme.eps(), &mut rng);
        stats.record(p2p_trial(scheme, &x, &e), &x, &e);
    }
    stats
}

/// Per-receiver statistics, A first.
pub fn simulate_broadcast(scheme: &BroadcastScheme, trials: usize, seed: u64) -> Vec<TrialStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = scheme.h.field().clone();
    let n = scheme.h.cols();
    let mut stats = vec![TrialStats::default(), TrialStats::default()];
    for _ in 0..trials {
        let x = random_vector(n, &f, &mut rng);
        let e = random_sparse(n, &f, scheme.eps, &mut rng);
        let x_new = add_vectors(&f, &x, &e);
        let y = scheme.encode(&x_new).ok();
        for (k, r) in [Receiver::A, Receiver::B].into_iter().enumerate() {
            let m = scheme.receiver(r).a();
            let ok = match (&y, m.mul_vec(&x), m.mul_vec(&x_new)) {
                (Some(y), Ok(side), Ok(want)) => scheme.decode(r, y, &side).is_ok_and(|got| got == want),
                _ => false,
            };
            stats[k].record(ok, &x, &e);
        }
    }
    stats
}

fn saving(individual: usize, cost: usize) -> f64 {
    if individual == 0 {
        0.0
    } else {
        100.0 * (individual as f64 - cost as f64) / individual as f64
    }
}

fn require_field(cfg: &ScenarioConfig) -> Result<Field> {
    cfg.field
        .as_ref()
        .ok_or_else(|| Error::Dimension("this scenario needs a field".to_string()))?
        .to_field()
}

fn require_vector<'a>(v: &'a Option<Vec<u32>>, name: &str) -> Result<&'a [u32]> {
    v.as_deref()
        .ok_or_else(|| Error::Dimension(format!("this scenario needs the coding vector `{name}`")))
}

fn broadcast_report(
    cfg: &ScenarioConfig,
    field: &Field,
    scheme: &BroadcastScheme,
    optimal: usize,
) -> ScenarioReport {
    let (ma, mb) = (scheme.receiver_a.a().rows(), scheme.receiver_b.a().rows());
    let individual = lower_bound(ma, cfg.eps) + lower_bound(mb, cfg.eps);
    let certificates = [&scheme.receiver_a, &scheme.receiver_b]
        .iter()
        .filter_map(|s| s.certificate().cloned())
        .collect();
    ScenarioReport {
        scenario: cfg.scenario,
        seed: cfg.seed,
        field: FieldJson::from_field(field),
        q: field.order(),
        fields_rejected: Vec::new(),
        gamma: None,
        common_codeword_nonzero: None,
        n: scheme.h.cols(),
        m: cfg.m,
        eps: cfg.eps,
        cost: scheme.cost(),
        optimal_cost: optimal,
        individual_cost: individual,
        saving_percent: saving(individual, scheme.cost()),
        regime: Some(scheme.regime),
        theta: scheme.theta.as_ref().map(|t| t.theta),
        certificates,
        trials: cfg.trials,
        receivers: simulate_broadcast(scheme, cfg.trials, cfg.seed),
    }
}

fn recoverable(e: &Error) -> bool {
    matches!(
        e,
        Error::TriesExhausted { .. } | Error::CertificateFailed(_) | Error::FieldTooSmall { .. }
    )
}

pub const MBR_FIELD_DEGREES: [u32; 5] = [6, 8, 10, 12, 16];

/// The MBR scenario's node matrices and scheme over one field.
pub fn build_mbr_broadcast(cfg: &ScenarioConfig, field: &Field) -> Result<(MbrLayout, BroadcastScheme)> {
    let layout = MbrLayout::new(field, cfg.gamma)?;
    let (i, j) = cfg.nodes;
    let a = block_diagonal(&layout.node_block(i)?, cfg.m);
    let b = block_diagonal(&layout.node_block(j)?, cfg.m);
    let options = BroadcastOptions {
        method: P2PMethod::Random { max_tries: cfg.max_tries },
        max_tries: cfg.max_tries,
        ..BroadcastOptions::default()
    };
    let scheme = build_broadcast_scheme(&a, &b, cfg.eps, cfg.seed, &options)?;
    Ok((layout, scheme))
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    if cfg.m == 0 {
        return Err(Error::Dimension("need at least one stripe".to_string()));
    }
    match cfg.scenario {
        ScenarioKind::StripedP2p => {
            let f = require_field(cfg)?;
            let a = build_striped_matrix(&f, require_vector(&cfg.a, "a")?, cfg.m)?;
            let scheme = build_p2p_scheme(&a, cfg.eps, P2PMethod::Striped, cfg.seed)?;
            let individual = lower_bound(a.rows(), cfg.eps);
            Ok(ScenarioReport {
                scenario: cfg.scenario,
                seed: cfg.seed,
                field: FieldJson::from_field(&f),
                q: f.order(),
                fields_rejected: Vec::new(),
                gamma: None,
                common_codeword_nonzero: None,
                n: a.cols(),
                m: cfg.m,
                eps: cfg.eps,
                cost: scheme.cost(),
                optimal_cost: individual,
                individual_cost: individual,
                saving_percent: 0.0,
                regime: None,
                theta: None,
                certificates: scheme.certificate().cloned().into_iter().collect(),
                trials: cfg.trials,
                receivers: vec![simulate_p2p(&scheme, cfg.trials, cfg.seed)],
            })
        }
        ScenarioKind::MdsBroadcast => {
            let f = require_field(cfg)?;
            let a = build_striped_matrix(&f, require_vector(&cfg.a, "a")?, cfg.m)?;
            let b = build_striped_matrix(&f, require_vector(&cfg.b, "b")?, cfg.m)?;
            let optimal = optimal_broadcast_cost(&a, &b, cfg.eps, u128::MAX)?
                .cost
                .ok_or_else(|| Error::UncoveredRegime("no optimal cost for this pair".to_string()))?;
            let options = BroadcastOptions {
                method: P2PMethod::Striped,
                max_tries: cfg.max_tries,
                ..BroadcastOptions::default()
            };
            let scheme = build_broadcast_scheme(&a, &b, cfg.eps, cfg.seed, &options)?;
            Ok(broadcast_report(cfg, &f, &scheme, optimal))
        }
        ScenarioKind::MbrBroadcast => {
            let (i, j) = cfg.nodes;
            if i == j {
                return Err(Error::Dimension("MBR scenario needs two distinct nodes".to_string()));
            }
            let candidates: Vec<Field> = match &cfg.field {
                Some(fj) => vec![fj.to_field()?],
                None => MBR_FIELD_DEGREES
                    .iter()
                    .map(|&d| Field::new(2, d, None))
                    .collect::<Result<_>>()?,
            };
            let mut rejected = Vec::new();
            let mut last_err = None;
            for f in candidates {
                match build_mbr_broadcast(cfg, &f) {
                    Ok((layout, scheme)) => {
                        let a = scheme.receiver_a.a();
                        let b = scheme.receiver_b.a();
                        let optimal = optimal_broadcast_cost(a, b, cfg.eps, u128::MAX)?
                            .cost
                            .ok_or_else(|| Error::UncoveredRegime("no optimal cost for this pair".to_string()))?;
                        let mut report = broadcast_report(cfg, &f, &scheme, optimal);
                        let c = layout.common_codeword(i, j)?;
                        report.gamma = Some(layout.gamma());
                        report.common_codeword_nonzero = Some(c.iter().all(|&v| v != 0));
                        report.fields_rejected = rejected;
                        return Ok(report);
                    }
                    Err(e) if recoverable(&e) => {
                        rejected.push(f.order());
                        last_err = Some(e);
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(last_err.unwrap_or(Error::CertificateFailed(None)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_sampler_respects_weight() {
        let f = Field::new(2, 3, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let e = random_sparse(10, &f, 2, &mut rng);
            assert!(e.iter().filter(|&&v| v != 0).count() <= 2);
            assert!(e.iter().all(|&v| v < 8));
        }
    }

    #[test]
    fn config_defaults() {
        let cfg: ScenarioConfig =
            serde_json::from_str(r#"{"scenario":"mbr-broadcast","m":2,"eps":1}"#).unwrap();
        assert_eq!(cfg.nodes, (1, 2));
        assert_eq!(cfg.trials, 100);
        assert!(cfg.field.is_none());
    }
}
