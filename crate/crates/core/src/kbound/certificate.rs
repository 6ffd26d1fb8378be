use std::f64::consts::FRAC_PI_2;

use serde::{Serialize, Serializer};

use super::KboundError;
use crate::concave::{witness_sequence, HullFunction, Witness};
use crate::functional::rayleigh_ratio;
use crate::geom2d::{classify_vertical_support, Domain, Side};

/// Chord distances run through `2^-j` for `j = 0..=MAX_HALVINGS`.
pub const MAX_HALVINGS: i32 = 40;

const SHRINK: f64 = 0.8;

/// A witness whose exactly integrated ratio reaches the threshold.
#[derive(Clone, Debug, Serialize)]
pub struct DivergenceCertificate {
    pub threshold: f64,
    pub side: Side,
    #[serde(serialize_with = "serialize_witness")]
    pub witness: HullFunction,
    pub achieved_ratio: f64,
    pub eps_used: f64,
    pub phi_used: f64,
    /// `(eps, ratio)` along the schedule at `phi_used`, up to success.
    pub trace: Vec<(f64, f64)>,
}

fn serialize_witness<S: Serializer>(u: &HullFunction, s: S) -> Result<S::Ok, S::Error> {
    u.apexes().serialize(s)
}

/// Angles tried in order: `arccot √(2T)` first, whose witnesses have
/// ratio at least `2T` in the limit, then doublings of it below π/2.
fn phi_schedule(threshold: f64) -> Vec<f64> {
    let first = (1.0 / (2.0 * threshold).sqrt()).atan();
    std::iter::successors(Some(first), |&p| Some(2.0 * p))
        .take_while(|&p| p < FRAC_PI_2)
        .collect()
}

/// Runs the witness schedule on `sides` and returns the first witness at
/// or above `threshold`, or the best ratio seen.
fn search(domain: &Domain, sides: &[Side], threshold: f64) -> Result<DivergenceCertificate, f64> {
    let mut best = 0.0f64;
    for phi in phi_schedule(threshold) {
        for &side in sides {
            let eps = (0..=MAX_HALVINGS).map(|j| 2f64.powi(-j));
            let mut trace = Vec::new();
            for w in witness_sequence(domain, side, phi, SHRINK, eps) {
                // Chords too short for the current step are skipped.
                let Ok(w): Result<Witness, _> = w else { continue };
                let Ok(ratio) = rayleigh_ratio(&w.function) else { continue };
                trace.push((w.params.eps, ratio));
                best = best.max(ratio);
                if ratio >= threshold {
                    return Ok(DivergenceCertificate {
                        threshold,
                        side,
                        witness: w.function,
                        achieved_ratio: ratio,
                        eps_used: w.params.eps,
                        phi_used: phi,
                        trace,
                    });
                }
            }
        }
    }
    Err(best)
}

/// Drives witness sequences near non-angular vertical support lines until
/// the ratio reaches `threshold`.
pub fn divergence_certificate(domain: &Domain, threshold: f64) -> Result<DivergenceCertificate, KboundError> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(KboundError::BadThreshold(threshold));
    }
    let open: Vec<Side> = [Side::Left, Side::Right]
        .into_iter()
        .filter(|&s| !classify_vertical_support(domain, s).is_angular())
        .collect();
    if open.is_empty() {
        let best_ratio = match search(domain, &[Side::Left, Side::Right], threshold) {
            Ok(c) => c.achieved_ratio,
            Err(best) => best,
        };
        return Err(KboundError::HypothesisFailed { best_ratio });
    }
    search(domain, &open, threshold).map_err(|best_ratio| KboundError::BudgetExhausted { best_ratio })
}
