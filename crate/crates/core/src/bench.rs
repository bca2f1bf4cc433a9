//! Wall-clock scaling sweeps of [`discover`] over generated logs.
//!
//! For each point of a sweep a log is generated with the swept parameter
//! substituted into the fixed parameters, and discovery (without I/O) is
//! timed as the best of a few runs. The fit reports how time scales per
//! doubling of the parameter: about 2 for linear growth, 4 for quadratic.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::discovery::discover;
use crate::error::{Error, Result};
use crate::generator::{generate, GeneratorParams};
use crate::log::DatabaseEventLog;

pub const MIN_POINTS: usize = 3;
pub const DEFAULT_REPEATS: usize = 3;

const MAX_EVENTS: usize = 5_000_000;
const MAX_OBJECTS: usize = 5_000_000;
const MAX_ACTIVITIES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Events,
    Activities,
    Classes,
    Objects,
}

impl SweepParam {
    pub fn apply(self, base: &GeneratorParams, value: usize) -> GeneratorParams {
        let mut p = *base;
        match self {
            SweepParam::Events => p.n_events = value,
            SweepParam::Activities => p.n_activities = value,
            SweepParam::Classes => p.n_classes = value,
            SweepParam::Objects => p.n_objects_per_class = value,
        }
        p
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::Events => "events",
            SweepParam::Activities => "activities",
            SweepParam::Classes => "classes",
            SweepParam::Objects => "objects",
        })
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "events" => Ok(SweepParam::Events),
            "activities" => Ok(SweepParam::Activities),
            "classes" => Ok(SweepParam::Classes),
            "objects" => Ok(SweepParam::Objects),
            other => Err(Error::Domain(format!(
                "unknown sweep {other:?}; expected events, activities, classes or objects"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchPoint {
    pub value: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFit {
    /// Least-squares slope of log(time) against log(value).
    pub exponent: f64,
    /// `2^exponent`: expected time factor when the parameter doubles.
    pub doubling_ratio: f64,
    /// Per consecutive pair of points, the time factor rescaled to a doubling.
    pub step_ratios: Vec<f64>,
}

impl SweepFit {
    pub fn from_points(points: &[BenchPoint]) -> Self {
        let xs: Vec<f64> = points.iter().map(|p| (p.value as f64).ln()).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.seconds.ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let exponent = sxy / sxx;
        let step_ratios = points
            .windows(2)
            .map(|w| {
                let time_ratio = w[1].seconds / w[0].seconds;
                let doublings = (w[1].value as f64 / w[0].value as f64).log2();
                time_ratio.powf(1.0 / doublings)
            })
            .collect();
        SweepFit {
            exponent,
            doubling_ratio: exponent.exp2(),
            step_ratios,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub parameter: SweepParam,
    pub fixed: FixedParams,
    pub points: Vec<BenchPoint>,
    pub fit: SweepFit,
}

/// Serializable copy of the generator parameters a sweep started from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FixedParams {
    pub n_events: usize,
    pub n_activities: usize,
    pub n_classes: usize,
    pub n_objects_per_class: usize,
    pub links_per_event: usize,
    pub seed: u64,
}

impl From<&GeneratorParams> for FixedParams {
    fn from(p: &GeneratorParams) -> Self {
        FixedParams {
            n_events: p.n_events,
            n_activities: p.n_activities,
            n_classes: p.n_classes,
            n_objects_per_class: p.n_objects_per_class,
            links_per_event: p.links_per_event,
            seed: p.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct BenchReport {
    pub sweeps: Vec<Sweep>,
}

impl BenchReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Checks every point of a sweep before anything is generated or timed.
pub fn validate_sweep(param: SweepParam, points: &[usize], fixed: &GeneratorParams) -> Result<()> {
    if points.len() < MIN_POINTS {
        return Err(Error::Domain(format!(
            "a sweep needs at least {MIN_POINTS} points, got {}",
            points.len()
        )));
    }
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "sweep points must be strictly increasing".into(),
        ));
    }
    for &value in points {
        let p = param.apply(fixed, value);
        p.validate()?;
        let objects = p.n_classes.saturating_mul(p.n_objects_per_class);
        if p.n_events > MAX_EVENTS || objects > MAX_OBJECTS || p.n_activities > MAX_ACTIVITIES {
            return Err(Error::Domain(format!(
                "{param}={value} is beyond desk scale (at most {MAX_EVENTS} events, \
                 {MAX_OBJECTS} objects, {MAX_ACTIVITIES} activities)"
            )));
        }
    }
    Ok(())
}

/// Best-of-`repeats` wall-clock seconds of discovery on `log`.
pub fn time_discover(log: &Arc<DatabaseEventLog>, repeats: usize) -> f64 {
    (0..repeats.max(1))
        .map(|_| {
            let start = Instant::now();
            let model = discover(Arc::clone(log));
            let elapsed = start.elapsed().as_secs_f64();
            drop(model);
            elapsed
        })
        .fold(f64::INFINITY, f64::min)
        .max(f64::MIN_POSITIVE)
}

pub fn run_sweep(
    param: SweepParam,
    points: &[usize],
    fixed: &GeneratorParams,
    repeats: usize,
) -> Result<Sweep> {
    validate_sweep(param, points, fixed)?;
    let mut measured = Vec::with_capacity(points.len());
    for &value in points {
        let log = Arc::new(generate(&param.apply(fixed, value))?);
        measured.push(BenchPoint {
            value,
            seconds: time_discover(&log, repeats),
        });
    }
    Ok(Sweep {
        parameter: param,
        fixed: fixed.into(),
        fit: SweepFit::from_points(&measured),
        points: measured,
    })
}

/// One sweep of a suite: the swept parameter, its grid and the fixed values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub parameter: SweepParam,
    pub points: Vec<usize>,
    pub fixed: GeneratorParams,
}

/// The default laptop-sized suite: events, classes and activities sweeps.
pub fn desk_suite() -> Vec<SweepPlan> {
    let base = GeneratorParams {
        n_events: 25_000,
        n_activities: 40,
        n_classes: 10,
        n_objects_per_class: 1_500,
        seed: 42,
        links_per_event: 2,
    };
    vec![
        SweepPlan {
            parameter: SweepParam::Events,
            points: vec![25_000, 50_000, 100_000],
            fixed: base,
        },
        SweepPlan {
            parameter: SweepParam::Classes,
            points: vec![5, 10, 20],
            fixed: GeneratorParams {
                n_events: 2_500,
                ..base
            },
        },
        SweepPlan {
            parameter: SweepParam::Activities,
            points: vec![20, 40, 80],
            fixed: GeneratorParams {
                n_objects_per_class: 250,
                ..base
            },
        },
    ]
}

pub fn run_suite(plans: &[SweepPlan], repeats: usize) -> Result<BenchReport> {
    for plan in plans {
        validate_sweep(plan.parameter, &plan.points, &plan.fixed)?;
    }
    let sweeps = plans
        .iter()
        .map(|plan| run_sweep(plan.parameter, &plan.points, &plan.fixed, repeats))
        .collect::<Result<_>>()?;
    Ok(BenchReport { sweeps })
}
