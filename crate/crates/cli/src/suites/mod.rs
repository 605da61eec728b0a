//! Seeded verification suites. Each suite draws every random instance from
//! one ChaCha8 stream seeded by the caller and returns a [`RunReport`].

use std::time::Instant;

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wasserlab_core::transport::is_cyclically_monotone;
use wasserlab_core::{solve_wp, AtomicMeasure, Point, Space, TransportPlan};

use crate::report::{Assertion, RunReport};

mod conditions;
mod cylinder;
mod euclid;
mod ray;
mod suspension;
mod transport;

/// Id of the per-suite assertion that every optimal plan the suite computed
/// passes the 5-cycle check.
pub const MONOTONE_ID: &str = "optimal-plans-cyclically-monotone";

/// Longest cycle examined on every optimal plan.
pub const PLAN_CYCLE_LENGTH: usize = 5;

type SuiteFn = fn(&mut Ctx) -> Result<()>;

const SUITES: &[(&str, SuiteFn)] = &[
    ("ray-formulas", ray::ray_formulas),
    ("delta2-chart", ray::delta2_chart),
    ("exotic", euclid::exotic),
    ("frechet", euclid::frechet),
    ("cylinder-branching", cylinder::cylinder_branching),
    ("suspension-midpoints", suspension::midpoints),
    ("conditions", conditions::conditions),
    ("oracle", transport::oracle),
    ("suspension-diameter", suspension::diameter),
    ("meridian-projection", suspension::meridian_projection),
    ("monotonicity", transport::monotonicity),
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|s| s.0)
}

/// Overrides for suites that take an exponent or a product parameter.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SuiteOptions {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub timed: bool,
}

pub struct Ctx {
    pub rng: ChaCha8Rng,
    pub opts: SuiteOptions,
    assertions: Vec<Assertion>,
    plans: usize,
    violations: Vec<String>,
}

impl Ctx {
    fn new(seed: u64, opts: SuiteOptions) -> Self {
        Ctx { rng: ChaCha8Rng::seed_from_u64(seed), opts, assertions: Vec::new(), plans: 0, violations: Vec::new() }
    }

    pub fn push(&mut self, a: Assertion) {
        self.assertions.push(a);
    }

    pub fn p_or(&self, default: f64) -> f64 {
        self.opts.p.unwrap_or(default)
    }

    /// Solves and records the plan for the cyclical-monotonicity tally.
    pub fn solve(&mut self, mu: &AtomicMeasure, nu: &AtomicMeasure, p: f64) -> Result<(f64, TransportPlan)> {
        let (w, plan) = solve_wp(mu, nu, p)?;
        self.check_plan(&plan)?;
        Ok((w, plan))
    }

    pub fn check_plan(&mut self, plan: &TransportPlan) -> Result<()> {
        self.plans += 1;
        if let Some(c) = is_cyclically_monotone(plan, PLAN_CYCLE_LENGTH)? {
            self.violations.push(format!("entries {:?} gain {:e}", c.entries, c.gain));
        }
        Ok(())
    }

    fn finish(mut self, suite: &str, seed: u64) -> RunReport {
        if self.plans > 0 {
            let desc = match self.violations.first() {
                None => format!("{} optimal plans pass the {PLAN_CYCLE_LENGTH}-cycle check", self.plans),
                Some(v) => format!("{} optimal plans checked, first violation: {v}", self.plans),
            };
            self.assertions.push(Assertion::equal(MONOTONE_ID, desc, 0usize, self.violations.len()));
        }
        RunReport::new(suite, seed, self.assertions)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// A measure with `n` atoms drawn by `point` and weights in `[0.05, 1)`,
    /// normalised.
    pub fn measure(&mut self, space: &std::sync::Arc<Space>, n: usize, mut point: impl FnMut(&mut Self) -> Point) -> Result<AtomicMeasure> {
        let atoms = (0..n).map(|_| (point(self), self.uniform(0.05, 1.0))).collect();
        Ok(AtomicMeasure::from_unnormalized(space.clone(), atoms)?)
    }
}

/// Runs the named suite. A suite that hits an unexpected library error
/// reports it as a failed assertion; an unknown name is an error.
pub fn run_suite(name: &str, seed: u64, opts: SuiteOptions) -> Result<RunReport> {
    let Some(&(name, suite)) = SUITES.iter().find(|s| s.0 == name) else {
        bail!("unknown suite {name:?}; known suites: {}", suite_names().collect::<Vec<_>>().join(", "));
    };
    if let Some(p) = opts.p {
        if !(p >= 1.0 && p.is_finite()) {
            bail!("--p must be a finite number >= 1, got {p}");
        }
    }
    if let Some(q) = opts.q {
        if !(q > 1.0 && q.is_finite()) {
            bail!("--q must be a finite number > 1, got {q}");
        }
    }
    let start = Instant::now();
    let mut ctx = Ctx::new(seed, opts);
    if let Err(e) = suite(&mut ctx) {
        ctx.push(Assertion::equal("suite-completed", "the suite ran to completion", "ok", format!("{e:#}")));
    }
    let mut report = ctx.finish(name, seed);
    if opts.timed {
        report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}
