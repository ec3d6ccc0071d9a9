use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::image::Image;
use crate::metrics::psnr;

/// Per-run record produced by the iterative denoisers.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    /// Objective value after each completed outer iteration.
    pub cost_trajectory: Vec<f64>,
    /// PSNR of the (clipped) estimate after each iteration; empty without a reference.
    pub psnr_trajectory: Vec<f64>,
    pub iterations_run: usize,
    /// True when the relative cost change dropped below tolerance.
    pub converged: bool,
    /// Number of inner linear solves that hit their iteration cap.
    pub cg_warnings: usize,
    pub wall_time_s: f64,
}

pub(crate) struct TraceRecorder<'a> {
    trace: RunTrace,
    reference: Option<&'a Image>,
    started: Instant,
    rel_tol: f64,
}

impl<'a> TraceRecorder<'a> {
    pub(crate) fn new(reference: Option<&'a Image>, rel_tol: f64) -> Self {
        Self {
            trace: RunTrace::default(),
            reference,
            started: Instant::now(),
            rel_tol,
        }
    }

    pub(crate) fn cg_warning(&mut self) {
        self.trace.cg_warnings += 1;
    }

    /// Records one outer iteration and reports whether the stopping rule fired.
    pub(crate) fn record(&mut self, cost: f64, estimate: &Image) -> bool {
        let t = &mut self.trace;
        let stop = match t.cost_trajectory.last() {
            Some(&prev) => {
                let denom = prev.abs().max(f64::MIN_POSITIVE);
                (cost - prev).abs() / denom < self.rel_tol
            }
            None => false,
        };
        t.cost_trajectory.push(cost);
        t.iterations_run += 1;
        if let Some(reference) = self.reference {
            if let Ok(p) = psnr(reference, &estimate.clipped()) {
                t.psnr_trajectory.push(p);
            }
        }
        log::debug!("iteration {:>3}: cost {:.6e}", t.iterations_run, cost);
        if stop {
            t.converged = true;
        }
        stop
    }

    pub(crate) fn finish(mut self) -> RunTrace {
        self.trace.wall_time_s = self.started.elapsed().as_secs_f64();
        self.trace
    }
}
