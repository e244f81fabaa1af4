//! Audits of the fixed-point data under Markov moves.
//!
//! Both sides of every move are solved from scratch. Classes of the source
//! braid are transported along the move and matched against the classes of
//! the target braid, index by index.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::braid::{
    destabilize, markov_conjugate, markov_stabilize, require_knot, BraidWord, Sign,
};
use crate::error::{Error, Result};
use crate::fixpoint::{casson_lin, FixedPointRecord, LambdaResult, SolverConfig};
use crate::rep::{hurwitz, Configuration};
use crate::su2::align;

/// Largest accepted alignment distance between a transported class and its
/// partner.
pub const TRANSPORT_TOL: f64 = 1e-7;
/// Walks never stabilize beyond this many strands.
pub const MAX_WALK_STRANDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MarkovMove {
    Conjugate { xi: String },
    Stabilize { sign: i32 },
    Destabilize { sign: i32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovAudit {
    #[serde(rename = "move")]
    pub movement: MarkovMove,
    pub braid_before: String,
    pub braid_after: String,
    pub lambda_before: Option<i64>,
    pub lambda_after: Option<i64>,
    pub classes_before: usize,
    pub classes_after: usize,
    pub matched_classes: usize,
    /// `None` when some class had no candidate partner at all.
    pub max_transport_distance: Option<f64>,
    pub passed: bool,
    pub reason: Option<String>,
}

/// Transport of one configuration across a move.
type Transport<'a> = dyn Fn(&Configuration) -> Result<Configuration> + 'a;

/// Best partner of `x` among `targets`: (position, alignment distance).
fn best_partner(x: &Configuration, targets: &[FixedPointRecord]) -> Option<(usize, f64)> {
    targets
        .iter()
        .enumerate()
        .filter(|(_, r)| r.config.n() == x.n())
        .filter_map(|(k, r)| align(r.config.elems(), x.elems()).ok().map(|(_, d)| (k, d.max(0.0).sqrt())))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

fn audit(
    movement: MarkovMove,
    before: (&BraidWord, &LambdaResult),
    after: (&BraidWord, &LambdaResult),
    transport: &Transport<'_>,
) -> Result<MarkovAudit> {
    let (src, dst) = (before.1, after.1);
    let mut used = vec![false; dst.records.len()];
    let mut matched = 0;
    let mut worst: Option<f64> = Some(0.0);
    let mut index_mismatch = false;
    for r in &src.records {
        let moved = transport(&r.config)?;
        match best_partner(&moved, &dst.records) {
            Some((k, d)) => {
                worst = worst.map(|w| w.max(d));
                if d <= TRANSPORT_TOL && !used[k] {
                    used[k] = true;
                    matched += 1;
                    index_mismatch |= dst.records[k].index != r.index;
                }
            }
            None => worst = None,
        }
    }
    let degenerate = src.is_degenerate() || dst.is_degenerate();
    let reason = if degenerate {
        Some("degenerate".to_string())
    } else if src.lambda != dst.lambda {
        Some("lambda changed".to_string())
    } else if matched != src.records.len() || matched != dst.records.len() {
        Some(format!(
            "matched {matched} of {} -> {} classes",
            src.records.len(),
            dst.records.len()
        ))
    } else if worst.is_none_or(|w| w > TRANSPORT_TOL) {
        Some(format!("transport distance {worst:?}"))
    } else if index_mismatch {
        Some("index changed on a matched class".to_string())
    } else {
        None
    };
    Ok(MarkovAudit {
        movement,
        braid_before: before.0.to_string(),
        braid_after: after.0.to_string(),
        lambda_before: src.lambda,
        lambda_after: dst.lambda,
        classes_before: src.records.len(),
        classes_after: dst.records.len(),
        matched_classes: matched,
        max_transport_distance: worst,
        passed: reason.is_none(),
        reason,
    })
}

fn conjugate_audit(b: &BraidWord, xi: &BraidWord, src: &LambdaResult, cfg: &SolverConfig) -> Result<(MarkovAudit, BraidWord, LambdaResult)> {
    let after = markov_conjugate(b, xi)?;
    let dst = casson_lin(&after, cfg)?;
    let transport = |x: &Configuration| hurwitz(xi, x);
    let a = audit(
        MarkovMove::Conjugate { xi: xi.to_string() },
        (b, src),
        (&after, &dst),
        &transport,
    )?;
    Ok((a, after, dst))
}

fn stabilize_audit(b: &BraidWord, sign: Sign, src: &LambdaResult, cfg: &SolverConfig) -> Result<(MarkovAudit, BraidWord, LambdaResult)> {
    let after = markov_stabilize(b, sign);
    let dst = casson_lin(&after, cfg)?;
    let transport = |x: &Configuration| Ok(stabilized_point(b, x));
    let a = audit(
        MarkovMove::Stabilize { sign: sign.as_i32() },
        (b, src),
        (&after, &dst),
        &transport,
    )?;
    Ok((a, after, dst))
}

fn destabilize_audit(b: &BraidWord, src: &LambdaResult, cfg: &SolverConfig) -> Result<Option<(MarkovAudit, BraidWord, LambdaResult)>> {
    let Some(d) = destabilize(b) else {
        return Ok(None);
    };
    let dst = casson_lin(&d.reduced, cfg)?;
    let n = d.reduced.strands();
    let prefix = d.prefix.clone();
    let transport = move |x: &Configuration| Ok(hurwitz(&prefix, x)?.truncated(n));
    let a = audit(
        MarkovMove::Destabilize { sign: d.sign.as_i32() },
        (b, src),
        (&d.reduced, &dst),
        &transport,
    )?;
    Ok(Some((a, d.reduced, dst)))
}

/// Image of a fixed point of `b` in the stabilized space:
/// `(X_1, …, X_n, β(X)_n)`.
pub fn stabilized_point(b: &BraidWord, x: &Configuration) -> Configuration {
    let image = hurwitz(b, x).unwrap_or_else(|_| x.clone());
    let last = image.elems()[x.n() - 1];
    x.extended(last)
}

/// Pair embedding `Q_n × Q_n → Q_{n+1} × Q_{n+1}` that doubles the last
/// entry of `Y` into both stabilized tuples.
pub fn pair_embedding(x: &Configuration, y: &Configuration) -> Result<(Configuration, Configuration)> {
    if x.n() != y.n() || x.n() == 0 {
        return Err(Error::StrandMismatch {
            expected: x.n(),
            found: y.n(),
        });
    }
    let last = y.elems()[y.n() - 1];
    Ok((x.extended(last), y.extended(last)))
}

/// Type I audit for `b` against `ξ^{-1} b ξ`.
pub fn verify_type1(b: &BraidWord, xi: &BraidWord, cfg: &SolverConfig) -> Result<MarkovAudit> {
    if b.strands() != xi.strands() {
        return Err(Error::StrandMismatch {
            expected: b.strands(),
            found: xi.strands(),
        });
    }
    let src = casson_lin(b, cfg)?;
    Ok(conjugate_audit(b, xi, &src, cfg)?.0)
}

/// Type II audit for `b` against `σ_n^{±1} b`.
pub fn verify_type2(b: &BraidWord, sign: Sign, cfg: &SolverConfig) -> Result<MarkovAudit> {
    require_knot(b)?;
    let src = casson_lin(b, cfg)?;
    Ok(stabilize_audit(b, sign, &src, cfg)?.0)
}

/// Inverse type II audit; `None` when the last column is not used exactly once.
pub fn verify_destabilization(b: &BraidWord, cfg: &SolverConfig) -> Result<Option<MarkovAudit>> {
    require_knot(b)?;
    let src = casson_lin(b, cfg)?;
    Ok(destabilize_audit(b, &src, cfg)?.map(|t| t.0))
}

fn random_word(strands: usize, rng: &mut ChaCha8Rng) -> BraidWord {
    let len = rng.gen_range(1..=3);
    let letters = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..strands as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    BraidWord::new(strands, letters).expect("letters in range")
}

/// Random sequence of Markov moves starting at `b`, one audit per step.
/// Stabilization stops at [`MAX_WALK_STRANDS`] strands.
pub fn random_markov_walk(b: &BraidWord, steps: usize, rng_seed: u64, cfg: &SolverConfig) -> Result<Vec<MarkovAudit>> {
    require_knot(b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut current = b.clone();
    let mut state = casson_lin(&current, cfg)?;
    let mut audits = Vec::with_capacity(steps);
    for _ in 0..steps {
        let n = current.strands();
        let can_destabilize = n > 2 && destabilize(&current).is_some();
        let can_stabilize = n < MAX_WALK_STRANDS;
        let roll = rng.gen_range(0..3);
        let step = if roll == 2 && can_destabilize {
            destabilize_audit(&current, &state, cfg)?
        } else if (roll == 1 || n < 2) && can_stabilize {
            let sign = if rng.gen_bool(0.5) {
                Sign::Positive
            } else {
                Sign::Negative
            };
            Some(stabilize_audit(&current, sign, &state, cfg)?)
        } else {
            None
        };
        let (a, next, next_state) = match step {
            Some(s) => s,
            None if n >= 2 => {
                let xi = random_word(n, &mut rng);
                conjugate_audit(&current, &xi, &state, cfg)?
            }
            None => {
                let sign = Sign::Positive;
                stabilize_audit(&current, sign, &state, cfg)?
            }
        };
        audits.push(a);
        current = next;
        state = next_state;
    }
    Ok(audits)
}
