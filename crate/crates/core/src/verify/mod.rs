//! Seeded randomized property suites, one per structural statement about
//! quotient categories. Each trial draws its randomness from `(seed, trial)`
//! alone, so runs are reproducible and trials may run in any order.

pub mod oracle;
pub mod sample;
mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abcat::{Backend, Mor, Obj};
use crate::error::{Error, Result};
use crate::exactlin::Mat;
use crate::ideal::{self, build_quotient_backend, QuotientBackend};
use crate::serre::SerreSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Suite {
    #[serde(rename = "lemma_2_4")]
    Lemma2_4,
    #[serde(rename = "prop_3_2")]
    Prop3_2,
    #[serde(rename = "lemma_3_3")]
    Lemma3_3,
    #[serde(rename = "lemma_4_1")]
    Lemma4_1,
    #[serde(rename = "lemma_4_2")]
    Lemma4_2,
    #[serde(rename = "lemma_4_3")]
    Lemma4_3,
    #[serde(rename = "prop_4_5")]
    Prop4_5,
    #[serde(rename = "prop_4_8")]
    Prop4_8,
    #[serde(rename = "prop_4_9")]
    Prop4_9,
    #[serde(rename = "prop_4_10")]
    Prop4_10,
    #[serde(rename = "prop_4_11")]
    Prop4_11,
    #[serde(rename = "functoriality_T")]
    FunctorialityT,
    #[serde(rename = "colimit_oracle")]
    ColimitOracle,
}

impl Suite {
    /// Every suite, in reporting order.
    pub const ALL: [Suite; 13] = [
        Suite::Lemma2_4,
        Suite::Prop3_2,
        Suite::Lemma3_3,
        Suite::Lemma4_1,
        Suite::Lemma4_2,
        Suite::Lemma4_3,
        Suite::Prop4_5,
        Suite::Prop4_8,
        Suite::Prop4_9,
        Suite::Prop4_10,
        Suite::Prop4_11,
        Suite::FunctorialityT,
        Suite::ColimitOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma2_4 => "lemma_2_4",
            Suite::Prop3_2 => "prop_3_2",
            Suite::Lemma3_3 => "lemma_3_3",
            Suite::Lemma4_1 => "lemma_4_1",
            Suite::Lemma4_2 => "lemma_4_2",
            Suite::Lemma4_3 => "lemma_4_3",
            Suite::Prop4_5 => "prop_4_5",
            Suite::Prop4_8 => "prop_4_8",
            Suite::Prop4_9 => "prop_4_9",
            Suite::Prop4_10 => "prop_4_10",
            Suite::Prop4_11 => "prop_4_11",
            Suite::FunctorialityT => "functoriality_T",
            Suite::ColimitOracle => "colimit_oracle",
        }
    }

    fn needs_tensor(self) -> bool {
        matches!(
            self,
            Suite::Lemma4_1
                | Suite::Lemma4_2
                | Suite::Lemma4_3
                | Suite::Prop4_5
                | Suite::Prop4_8
                | Suite::Prop4_9
                | Suite::Prop4_10
                | Suite::Prop4_11
        )
    }

    fn needs_ideal(self) -> bool {
        matches!(
            self,
            Suite::Lemma4_1 | Suite::Prop4_5 | Suite::Prop4_8 | Suite::Prop4_9 | Suite::Prop4_10
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// How the trials of a suite are scheduled. Results do not depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// One failing trial with everything needed to replay it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub message: String,
    pub data: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub backend: String,
    pub serre: Vec<String>,
    pub seed: u64,
    pub trials: usize,
    /// Trials in which the statement's hypothesis was met non-vacuously.
    pub nontrivial: usize,
    pub failures: Vec<Failure>,
    pub pass: bool,
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

pub(crate) enum Outcome {
    Pass { nontrivial: bool },
    Fail { message: String, data: Value },
}

pub(crate) fn fail(message: impl Into<String>, data: Value) -> Result<Outcome> {
    Ok(Outcome::Fail {
        message: message.into(),
        data,
    })
}

/// Shared, read-only inputs of every trial.
pub(crate) struct Ctx {
    pub backend: Backend,
    pub serre: SerreSpec,
    pub is_ideal: bool,
    pub model: Option<QuotientBackend>,
}

fn prepare(suite: Suite, c: &SerreSpec) -> Result<Ctx> {
    let backend = c.backend().clone();
    if suite.needs_tensor() && !backend.tensor_capable() {
        return Err(Error::RequirementUnmet(format!(
            "{suite} needs a tensor backend; `{}` has none",
            backend.name()
        )));
    }
    if suite == Suite::ColimitOracle && backend.field().order().is_none() {
        return Err(Error::RequirementUnmet(format!(
            "{suite} needs a prime field; `{}` is over {}",
            backend.name(),
            backend.field()
        )));
    }
    let is_ideal = backend.tensor_capable() && ideal::is_tensor_ideal(c)?;
    if suite.needs_ideal() && !is_ideal {
        return Err(Error::RequirementUnmet(format!(
            "{suite} needs C to be a two-sided tensor-ideal; {:?} is not",
            c.labels()
        )));
    }
    let model = if matches!(suite, Suite::Prop4_8 | Suite::Prop4_9 | Suite::Prop4_10) {
        let grid = ideal::component_grid(&backend)?;
        let j = ideal::index_set(c, &grid);
        let desc = ideal::enumerate_tensor_ideals(&backend)?
            .into_iter()
            .find(|d| d.j.iter().copied().eq(j.iter().copied()))
            .ok_or_else(|| Error::NotTensorIdeal(format!("{:?}", c.labels())))?;
        Some(build_quotient_backend(&backend, &desc)?)
    } else {
        None
    };
    Ok(Ctx {
        backend,
        serre: c.clone(),
        is_ideal,
        model,
    })
}

/// The generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn run_one(suite: Suite, ctx: &Ctx, seed: u64, trial: usize) -> Outcome {
    let mut rng = trial_rng(seed, trial);
    suites::run_trial(suite, ctx, &mut rng, trial).unwrap_or_else(|e| Outcome::Fail {
        message: format!("error: {e}"),
        data: Value::Null,
    })
}

fn collect(suite: Suite, ctx: &Ctx, seed: u64, trials: usize, exec: Execution) -> Vec<Outcome> {
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..trials)
                .into_par_iter()
                .map(|t| run_one(suite, ctx, seed, t))
                .collect()
        }
        _ => (0..trials).map(|t| run_one(suite, ctx, seed, t)).collect(),
    }
}

/// Runs `trials` seeded trials of `suite` against `(B, C)`.
pub fn run_suite(suite: Suite, c: &SerreSpec, trials: usize, seed: u64) -> Result<SuiteReport> {
    run_suite_with(suite, c, trials, seed, Execution::default())
}

pub fn run_suite_with(suite: Suite, c: &SerreSpec, trials: usize, seed: u64, exec: Execution) -> Result<SuiteReport> {
    let start = Instant::now();
    let ctx = prepare(suite, c)?;
    let outcomes = collect(suite, &ctx, seed, trials, exec);
    let mut nontrivial = 0;
    let mut failures = Vec::new();
    for (trial, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass { nontrivial: n } => nontrivial += usize::from(n),
            Outcome::Fail { message, data } => failures.push(Failure {
                trial,
                message,
                data: json!({ "seed": seed, "trial": trial, "detail": data }),
            }),
        }
    }
    Ok(SuiteReport {
        suite,
        backend: c.backend().name().to_string(),
        serre: c.labels(),
        seed,
        trials,
        nontrivial,
        pass: failures.is_empty(),
        vacuous: trials == 0,
        failures,
        skipped: None,
        wall_time: start.elapsed(),
    })
}

/// Re-runs a single trial; `Ok(None)` means it passes.
pub fn replay(suite: Suite, c: &SerreSpec, seed: u64, trial: usize) -> Result<Option<String>> {
    let ctx = prepare(suite, c)?;
    Ok(match run_one(suite, &ctx, seed, trial) {
        Outcome::Pass { .. } => None,
        Outcome::Fail { message, .. } => Some(message),
    })
}

/// Every suite in [`Suite::ALL`] order. Suites whose requirements fail are
/// reported as skipped.
pub fn run_all(c: &SerreSpec, trials: usize, seed: u64) -> Vec<SuiteReport> {
    run_all_with(c, trials, seed, Execution::default())
}

pub fn run_all_with(c: &SerreSpec, trials: usize, seed: u64, exec: Execution) -> Vec<SuiteReport> {
    Suite::ALL
        .into_iter()
        .map(|suite| match run_suite_with(suite, c, trials, seed, exec) {
            Ok(r) => r,
            Err(e) => {
                let (skipped, failures) = match e {
                    Error::RequirementUnmet(reason) => (Some(reason), Vec::new()),
                    other => (
                        None,
                        vec![Failure {
                            trial: 0,
                            message: format!("error: {other}"),
                            data: Value::Null,
                        }],
                    ),
                };
                SuiteReport {
                    suite,
                    backend: c.backend().name().to_string(),
                    serre: c.labels(),
                    seed,
                    trials: 0,
                    nontrivial: 0,
                    pass: failures.is_empty(),
                    vacuous: true,
                    failures,
                    skipped,
                    wall_time: Duration::ZERO,
                }
            }
        })
        .collect()
}

pub fn mat_json(m: &Mat) -> Value {
    json!(m.to_strings())
}

pub fn obj_json(x: &Obj) -> Value {
    json!({
        "dims": x.dims(),
        "actions": x.actions().iter().map(mat_json).collect::<Vec<_>>(),
    })
}

pub fn mor_json(f: &Mor) -> Value {
    json!({
        "source": obj_json(f.source()),
        "target": obj_json(f.target()),
        "maps": f.maps().iter().map(mat_json).collect::<Vec<_>>(),
    })
}
