//! Reproducible parallel trial loop.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::estimate::Estimate;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Environment variable holding the default lane count.
pub const LANES_ENV: &str = "ROOTLAB_LANES";
const BLOCK: u64 = 32;

/// Default worker count: `ROOTLAB_LANES` if set to a positive integer,
/// otherwise the available parallelism.
pub fn default_lanes() -> usize {
    std::env::var(LANES_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialPlan {
    pub trials: u64,
    pub seed: u64,
    pub lanes: usize,
}

impl TrialPlan {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self { trials, seed, lanes: default_lanes() }
    }

    pub fn with_lanes(mut self, lanes: usize) -> Self {
        self.lanes = lanes.max(1);
        self
    }
}

/// Runs `trial(stream)` for trial indices `0..plan.trials`, each on the
/// stream `(plan.seed, index)`. Failed trials are counted; more than 1%
/// failures is an error.
pub fn run_trials<F>(plan: &TrialPlan, label: &str, trial: F) -> Result<Estimate>
where
    F: Fn(&mut RngStream) -> Result<f64> + Sync,
{
    let mut v = run_trials_multi(plan, &[label], |s| trial(s).map(|x| vec![x]))?;
    Ok(v.pop().expect("one output"))
}

/// Vector-valued version of [`run_trials`]: one estimate per output slot.
pub fn run_trials_multi<F>(plan: &TrialPlan, labels: &[&str], trial: F) -> Result<Vec<Estimate>>
where
    F: Fn(&mut RngStream) -> Result<Vec<f64>> + Sync,
{
    if plan.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let dim = labels.len();
    let blocks = plan.trials.div_ceil(BLOCK) as usize;
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Vec<Estimate>>>> = Mutex::new(vec![None; blocks]);
    let fresh = || labels.iter().map(|l| Estimate::new(*l, plan.seed)).collect::<Vec<_>>();
    let work = || loop {
        let b = next.fetch_add(1, Ordering::Relaxed);
        if b >= blocks {
            break;
        }
        let mut acc = fresh();
        let lo = b as u64 * BLOCK;
        let hi = (lo + BLOCK).min(plan.trials);
        for i in lo..hi {
            let mut s = RngStream::new(plan.seed, i);
            match trial(&mut s) {
                Ok(v) if v.len() == dim && v.iter().all(|x| x.is_finite()) => {
                    for (e, x) in acc.iter_mut().zip(v) {
                        e.push(x);
                    }
                }
                _ => acc.iter_mut().for_each(Estimate::push_failure),
            }
        }
        slots.lock().expect("no panics while holding the lock")[b] = Some(acc);
    };
    let lanes = plan.lanes.max(1).min(blocks);
    if lanes == 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..lanes {
                s.spawn(work);
            }
        });
    }
    let mut out = fresh();
    for block in slots.into_inner().expect("workers finished") {
        for (e, b) in out.iter_mut().zip(block.expect("every block ran")) {
            e.merge(&b);
        }
    }
    let failed = out[0].failed;
    if failed * 100 > plan.trials {
        return Err(Error::FailureBudgetExceeded { failed, trials: plan.trials });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn lanes_do_not_change_results() {
        let f = |s: &mut RngStream| Ok(s.random::<f64>());
        let a = run_trials(&TrialPlan::new(1000, 5).with_lanes(1), "u", f).unwrap();
        let b = run_trials(&TrialPlan::new(1000, 5).with_lanes(8), "u", f).unwrap();
        assert_eq!(a, b);
        assert!((a.mean() - 0.5).abs() < 0.05);
    }

    #[test]
    fn failure_budget() {
        let plan = TrialPlan::new(200, 1).with_lanes(2);
        let few = run_trials(&plan, "f", |s| if s.index() < 2 { Err(Error::DegenerateAllZero) } else { Ok(1.0) });
        assert_eq!(few.unwrap().failed, 2);
        let many = run_trials(&plan, "f", |s| if s.index() < 3 { Err(Error::DegenerateAllZero) } else { Ok(1.0) });
        assert_eq!(many.unwrap_err(), Error::FailureBudgetExceeded { failed: 3, trials: 200 });
    }
}
