//! Synthetic database event logs of a requested size.
//!
//! Events are one second apart. Each event gets an activity drawn uniformly,
//! then `links_per_event` times a class is drawn uniformly and an object
//! uniformly within it (repeated draws of the same object collapse). All
//! draws come from one ChaCha stream seeded with `seed`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::log::DatabaseEventLog;

/// 2020-01-01 00:00:00 UTC.
const START_MS: i64 = 1_577_836_800_000;
const STEP_MS: i64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    pub n_events: usize,
    pub n_activities: usize,
    pub n_classes: usize,
    pub n_objects_per_class: usize,
    pub seed: u64,
    pub links_per_event: usize,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            n_events: 1000,
            n_activities: 10,
            n_classes: 3,
            n_objects_per_class: 50,
            seed: 0,
            links_per_event: 2,
        }
    }
}

impl GeneratorParams {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_events", self.n_events),
            ("n_activities", self.n_activities),
            ("n_classes", self.n_classes),
            ("n_objects_per_class", self.n_objects_per_class),
            ("links_per_event", self.links_per_event),
        ];
        for (name, value) in counts {
            if value == 0 {
                return Err(Error::Domain(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }
}

fn padded(prefix: &str, i: usize, n: usize) -> String {
    let width = (n.max(1) - 1).to_string().len();
    format!("{prefix}{i:0width$}")
}

pub fn generate(params: &GeneratorParams) -> Result<DatabaseEventLog> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let activities: Vec<String> = (0..params.n_activities)
        .map(|a| padded("activity_", a, params.n_activities))
        .collect();
    let classes: Vec<String> = (0..params.n_classes)
        .map(|c| padded("class_", c, params.n_classes))
        .collect();
    let objects: Vec<Vec<String>> = classes
        .iter()
        .map(|class| {
            (0..params.n_objects_per_class)
                .map(|o| padded(&format!("{class}_obj_"), o, params.n_objects_per_class))
                .collect()
        })
        .collect();

    let mut builder = DatabaseEventLog::builder();
    for (class, objs) in classes.iter().zip(&objects) {
        for obj in objs {
            builder.add_object(obj, class)?;
        }
    }
    for i in 0..params.n_events {
        let id = padded("event_", i, params.n_events);
        let activity = &activities[rng.gen_range(0..params.n_activities)];
        builder.add_event(&id, activity, START_MS + STEP_MS * i as i64)?;
        for _ in 0..params.links_per_event {
            let class = rng.gen_range(0..params.n_classes);
            let obj = rng.gen_range(0..params.n_objects_per_class);
            builder.link(&id, &objects[class][obj])?;
        }
    }
    Ok(builder.build())
}
