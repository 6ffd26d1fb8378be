use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{upper_bounds, KEstimate, MethodDetail};
use crate::concave::{hull_function, Apex, HullFunction};
use crate::functional::rayleigh_ratio;
use crate::geom2d::{Domain, Point2};

/// Environment variable capping the number of search threads.
pub const THREADS_ENV: &str = "FLATNEWT_THREADS";

/// Steps below this fraction of the domain scale end a restart early.
const MIN_STEP: f64 = 1e-9;

/// Apexes closer to the boundary than this fraction of the scale are
/// rejected, keeping the hull away from degenerate slivers.
const MIN_INSET: f64 = 1e-9;

/// Vertex cap for the polygon the search runs on. Finer boundaries are
/// subsampled to an inscribed polygon and only the final configuration of
/// each restart is scored on the full domain.
const SEARCH_VERTICES: usize = 48;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub restarts: usize,
    /// Pattern-search sweeps per restart.
    pub iters: usize,
    pub apex_counts: Vec<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            restarts: 50,
            iters: 200,
            apex_counts: vec![1, 2, 3, 4],
        }
    }
}

/// The thread cap from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

struct RestartResult {
    ratio: f64,
    params: Vec<f64>,
    k: usize,
    sweeps: usize,
}

/// Multi-start coordinate pattern search over apex configurations.
///
/// Each restart draws its start from a stream keyed by `(seed, apex count,
/// restart)`, so results do not depend on scheduling or thread count.
/// Restart 0 with a single apex is the tent over the centroid.
pub fn estimate_k(domain: &Domain, budget: &Budget, seed: u64) -> KEstimate {
    let jobs: Vec<(usize, usize)> = budget
        .apex_counts
        .iter()
        .filter(|&&k| k > 0)
        .flat_map(|&k| (0..budget.restarts.max(1)).map(move |r| (k, r)))
        .collect();
    let coarse = search_polygon(domain);
    let search_domain = coarse.as_ref().unwrap_or(domain);
    let run = || -> Vec<RestartResult> {
        jobs.par_iter()
            .map(|&(k, r)| {
                let mut res = restart(search_domain, k, r, budget.iters, seed);
                if coarse.is_some() {
                    res.ratio = objective(domain, &res.params, k);
                }
                res
            })
            .collect()
    };
    let results = match thread_cap() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    };

    let mut best: Option<&RestartResult> = None;
    let mut trace = Vec::with_capacity(results.len());
    let mut sweeps = 0;
    for res in &results {
        sweeps += res.sweeps;
        if best.is_none_or(|b| res.ratio > b.ratio) {
            best = Some(res);
        }
        trace.push((sweeps, best.map_or(f64::NEG_INFINITY, |b| b.ratio)));
    }
    let (lower, witness) = match best {
        Some(b) if b.ratio.is_finite() => (
            b.ratio,
            hull_function(domain, &decode(&b.params, b.k)).expect("search only keeps valid configurations"),
        ),
        _ => (f64::NEG_INFINITY, HullFunction::zero(domain)),
    };
    let (first, second, upper) = upper_bounds(domain);
    KEstimate {
        lower,
        upper,
        witness,
        method_detail: MethodDetail {
            first_proof_bound: first,
            second_proof_bound: second,
            search_trace: trace,
        },
    }
}

/// Parameters are `(x, y)` per apex followed by `ln h` for every apex but
/// the first, whose height is pinned to one.
fn decode(params: &[f64], k: usize) -> Vec<Apex> {
    (0..k)
        .map(|i| {
            let h = if i == 0 { 1.0 } else { params[2 * k + i - 1].exp() };
            Apex::new(Point2::new(params[2 * i], params[2 * i + 1]), h)
        })
        .collect()
}

fn objective(domain: &Domain, params: &[f64], k: usize) -> f64 {
    let apexes = decode(params, k);
    let floor = MIN_INSET * domain.scale();
    if apexes.iter().any(|a| !(domain.polygon_inset(a.point) > floor)) {
        return f64::NEG_INFINITY;
    }
    match hull_function(domain, &apexes).map(|u| rayleigh_ratio(&u)) {
        Ok(Ok(r)) if r.is_finite() => r,
        _ => f64::NEG_INFINITY,
    }
}

/// Evenly spaced vertices of the polygonization, when it has more than
/// [`SEARCH_VERTICES`]. The result is convex and contained in the domain.
fn search_polygon(domain: &Domain) -> Option<Domain> {
    let verts = domain.hull_vertices();
    if verts.len() <= SEARCH_VERTICES {
        return None;
    }
    let picked: Vec<Point2> = (0..SEARCH_VERTICES)
        .map(|i| verts[i * verts.len() / SEARCH_VERTICES])
        .collect();
    Domain::polygon(&picked).ok()
}

fn random_interior(domain: &Domain, rng: &mut ChaCha8Rng) -> Point2 {
    let (lo, hi) = domain.bbox();
    let floor = 1e-3 * domain.scale();
    loop {
        let p = Point2::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y));
        if domain.polygon_inset(p) > floor {
            return p;
        }
    }
}

fn restart(domain: &Domain, k: usize, index: usize, iters: usize, seed: u64) -> RestartResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((k as u64) << 32) | index as u64);
    let mut params = Vec::with_capacity(3 * k - 1);
    if k == 1 && index == 0 {
        let c = domain.centroid();
        params.extend([c.x, c.y]);
    } else {
        for _ in 0..k {
            let p = random_interior(domain, &mut rng);
            params.extend([p.x, p.y]);
        }
        for _ in 1..k {
            params.push(rng.gen_range(-1.0..0.0));
        }
    }
    let pos_step = 0.25 * domain.diameter();
    let mut steps: Vec<f64> = (0..params.len())
        .map(|i| if i < 2 * k { pos_step } else { 0.5 })
        .collect();
    let mut value = objective(domain, &params, k);
    let floor = MIN_STEP * domain.scale();
    let mut sweeps = 0;
    while sweeps < iters {
        sweeps += 1;
        let mut improved = false;
        for i in 0..params.len() {
            for dir in [1.0, -1.0] {
                let old = params[i];
                params[i] = old + dir * steps[i];
                let v = objective(domain, &params, k);
                if v > value {
                    value = v;
                    improved = true;
                    break;
                }
                params[i] = old;
            }
        }
        if !improved {
            steps.iter_mut().for_each(|s| *s *= 0.5);
            if steps[..2 * k].iter().all(|&s| s < floor) {
                break;
            }
        }
    }
    RestartResult {
        ratio: value,
        params,
        k,
        sweeps,
    }
}
