//! Named verification suites. Each suite expands into an ordered list of
//! independent tasks; tasks may run on several threads but reports are
//! always returned in task order.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::counterexample::{counterexample_checks, counterexample_checks_for_k, CounterexampleMap};
use crate::error::{Error, Result};
use crate::form::{standard_symplectic_form, Form};
use crate::injectivity::{kernel_chain_check, proof_certificate_kernel, verify_injectivity};
use crate::kahler::kahler_checks;
use crate::metric::CompatibleTriple;
use crate::report::CheckReport;
use crate::scalar::{int, ratio, Scalar};
use crate::symplectic::{large_family_report, orbit_span_report, span_proof_report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Kahler,
    Injectivity,
    OrbitSpan,
    LargeFamily,
    Counterexample,
    All,
}

impl Suite {
    const PARTS: [Suite; 5] = [
        Suite::Kahler,
        Suite::Injectivity,
        Suite::OrbitSpan,
        Suite::LargeFamily,
        Suite::Counterexample,
    ];

    pub fn default_n(self) -> Vec<usize> {
        match self {
            Suite::Kahler => vec![2, 3, 4],
            Suite::Injectivity => vec![3, 4, 5],
            Suite::OrbitSpan | Suite::LargeFamily => vec![2, 3],
            Suite::Counterexample => vec![2, 3, 4, 5],
            Suite::All => Vec::new(),
        }
    }

    fn min_n(self) -> usize {
        match self {
            Suite::Kahler => 1,
            _ => 2,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "kahler" => Suite::Kahler,
            "injectivity" => Suite::Injectivity,
            "orbit-span" => Suite::OrbitSpan,
            "large-family" => Suite::LargeFamily,
            "counterexample" => Suite::Counterexample,
            "all" => Suite::All,
            other => return Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Kahler => "kahler",
            Suite::Injectivity => "injectivity",
            Suite::OrbitSpan => "orbit-span",
            Suite::LargeFamily => "large-family",
            Suite::Counterexample => "counterexample",
            Suite::All => "all",
        })
    }
}

/// Parameters for one run. `None` ranges fall back to each suite's defaults;
/// `k_values` is read by the injectivity and counterexample suites only.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n_values: Option<Vec<usize>>,
    pub k_values: Option<Vec<usize>>,
    pub scales: Option<Vec<Scalar>>,
    pub budget: usize,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    /// Largest accepted `n`.
    pub max_n: usize,
}

pub const DEFAULT_BUDGET: usize = 4;
pub const DEFAULT_MAX_N: usize = 6;

pub fn default_scales() -> Vec<Scalar> {
    vec![int(2), int(3), ratio(3, 2)]
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig {
            suite,
            n_values: None,
            k_values: None,
            scales: None,
            budget: DEFAULT_BUDGET,
            out: None,
            jobs: 1,
            max_n: DEFAULT_MAX_N,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.budget == 0 {
            return bad("budget must be at least 1".into());
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        if let Some(ns) = &self.n_values {
            if ns.is_empty() {
                return bad("n list is empty".into());
            }
            let min = self.parts().iter().map(|s| s.min_n()).max().unwrap_or(1);
            if let Some(n) = ns.iter().find(|&&n| n < min || n > self.max_n) {
                return bad(format!("n = {n} outside {min}..={}", self.max_n));
            }
        }
        if let Some(ks) = &self.k_values {
            if ks.is_empty() || ks.contains(&0) {
                return bad("k values must be positive and non-empty".into());
            }
        }
        if let Some(ss) = &self.scales {
            if ss.is_empty() || ss.iter().any(|s| s <= &int(1)) {
                return bad("scales must exceed 1 and be non-empty".into());
            }
        }
        Ok(())
    }

    fn parts(&self) -> Vec<Suite> {
        match self.suite {
            Suite::All => Suite::PARTS.to_vec(),
            s => vec![s],
        }
    }

    fn n_for(&self, suite: Suite) -> Vec<usize> {
        self.n_values.clone().unwrap_or_else(|| suite.default_n())
    }
}

type Task = Box<dyn Fn() -> Result<Vec<CheckReport>> + Send + Sync>;

/// Orbit seeds for `orbit-span`: non-degenerate, not multiples of `ω`, and
/// pairwise non-proportional.
pub fn orbit_seeds(n: usize) -> Result<Vec<Form>> {
    let omega = standard_symplectic_form(n)?;
    let alternating = (1..=n).fold(Form::zero(n, 2), |acc, i| {
        let c = if i % 2 == 1 { int(1) } else { int(-1) };
        &acc + &Form::dx_dy(n, i, i).scale(&c)
    });
    let tilted = &omega + &Form::dx_dx(n, 1, 2);
    let stretched = CounterexampleMap::new(n, int(2))?.pullback(&omega)?;
    let mixed = &(&omega + &Form::dx_dy(n, 1, 2)) + &Form::dy_dy(n, 1, 2).scale(&int(3));
    Ok(vec![alternating, tilted, stretched, mixed])
}

fn tasks(config: &SuiteConfig) -> Vec<Task> {
    let mut out: Vec<Task> = Vec::new();
    for suite in config.parts() {
        let ns = config.n_for(suite);
        match suite {
            Suite::Kahler => {
                for n in ns {
                    out.push(Box::new(move || kahler_checks(&CompatibleTriple::standard(n)?)));
                }
            }
            Suite::Injectivity => {
                for n in ns {
                    let ks = config.k_values.clone().unwrap_or_else(|| (1..=n).collect());
                    for k in ks {
                        out.push(Box::new(move || {
                            let mut r = vec![verify_injectivity(n, k)?];
                            if n >= 3 && k < n {
                                r.push(proof_certificate_kernel(n, k)?);
                            }
                            r.push(kernel_chain_check(n, k)?);
                            Ok(r)
                        }));
                    }
                }
            }
            Suite::OrbitSpan => {
                for n in ns {
                    let budget = config.budget;
                    out.push(Box::new(move || {
                        let mut r = Vec::new();
                        for seed in orbit_seeds(n)? {
                            r.push(orbit_span_report(&seed, budget)?);
                        }
                        r.push(span_proof_report(n)?);
                        Ok(r)
                    }));
                }
            }
            Suite::LargeFamily => {
                for n in ns {
                    let budget = config.budget;
                    out.push(Box::new(move || Ok(vec![large_family_report(n, budget)?])));
                }
            }
            Suite::Counterexample => {
                let scales = config.scales.clone().unwrap_or_else(default_scales);
                for n in ns {
                    for s in scales.clone() {
                        match config.k_values.clone() {
                            None => out.push(Box::new(move || counterexample_checks(n, &s))),
                            Some(ks) => {
                                for k in ks {
                                    let s = s.clone();
                                    out.push(Box::new(move || counterexample_checks_for_k(n, &s, k)));
                                }
                            }
                        }
                    }
                }
            }
            Suite::All => unreachable!("expanded by parts()"),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub reports: Vec<CheckReport>,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(CheckReport::passed)
    }
}

/// Runs the configured suite and writes the report array to `config.out`.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome> {
    config.validate()?;
    let tasks = tasks(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let results: Vec<Result<Vec<CheckReport>>> = pool.install(|| tasks.par_iter().map(|t| t()).collect());
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    if let Some(path) = &config.out {
        std::fs::write(path, crate::report::reports_to_string(&reports))
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(SuiteOutcome { reports })
}
