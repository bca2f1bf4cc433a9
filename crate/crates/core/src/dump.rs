//! JSON dump of an [`MvpModel`].
//!
//! ```json
//! {
//!   "log": { "classes": [..], "activities": [..],
//!            "events": [{"id", "activity", "timestamp_ms"}],
//!            "objects": [{"id", "class"}] },
//!   "e2o": [{"event", "object"}],
//!   "e2e": [{"source", "target", "object", "duration_ms"}],
//!   "a2a": [{"source", "target", "class", "count", "perf_ms", "dep"}],
//!   "start_activities": {"<class>": ["<activity>", ..]},
//!   "end_activities": {"<class>": ["<activity>", ..]}
//! }
//! ```
//!
//! Loading rebuilds the log from `log` and `e2o`, rediscovers the model and
//! rejects the dump if any stored graph disagrees with it.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::discovery::{discover, ClassActivities, MvpModel};
use crate::error::{Error, Result};
use crate::log::DatabaseEventLog;

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct ModelDoc {
    log: LogDoc,
    e2o: Vec<E2ODoc>,
    e2e: Vec<E2EDoc>,
    a2a: Vec<A2ADoc>,
    start_activities: BTreeMap<String, Vec<String>>,
    end_activities: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct LogDoc {
    classes: Vec<String>,
    activities: Vec<String>,
    events: Vec<EventDoc>,
    objects: Vec<ObjectDoc>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct EventDoc {
    id: String,
    activity: String,
    timestamp_ms: i64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct ObjectDoc {
    id: String,
    class: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct E2ODoc {
    event: String,
    object: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct E2EDoc {
    source: String,
    target: String,
    object: String,
    duration_ms: i64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct A2ADoc {
    source: String,
    target: String,
    class: String,
    count: usize,
    perf_ms: f64,
    dep: f64,
}

fn class_activities(model: &MvpModel, sets: &ClassActivities) -> BTreeMap<String, Vec<String>> {
    sets.iter()
        .enumerate()
        .map(|(c, acts)| {
            (
                model.class(c).to_owned(),
                acts.iter().map(|&a| model.activity(a).to_owned()).collect(),
            )
        })
        .collect()
}

fn to_doc(model: &MvpModel) -> ModelDoc {
    let log = &model.log;
    let event_id = |e: usize| log.event(e).id.clone();
    let object_id = |o: usize| log.object(o).id.clone();
    ModelDoc {
        log: LogDoc {
            classes: log.classes().to_vec(),
            activities: log.activities().to_vec(),
            events: log
                .events()
                .iter()
                .enumerate()
                .map(|(i, e)| EventDoc {
                    id: e.id.clone(),
                    activity: log.act(i).to_owned(),
                    timestamp_ms: e.time_ms,
                })
                .collect(),
            objects: log
                .objects()
                .iter()
                .enumerate()
                .map(|(i, o)| ObjectDoc {
                    id: o.id.clone(),
                    class: log.class_of(i).to_owned(),
                })
                .collect(),
        },
        e2o: model
            .e2o
            .edges
            .iter()
            .map(|&(e, o)| E2ODoc {
                event: event_id(e),
                object: object_id(o),
            })
            .collect(),
        e2e: model
            .e2e
            .edges
            .iter()
            .map(|f| E2EDoc {
                source: event_id(f.source),
                target: event_id(f.target),
                object: object_id(f.object),
                duration_ms: f.duration_ms,
            })
            .collect(),
        a2a: model
            .a2a
            .edges
            .iter()
            .enumerate()
            .map(|(i, edge)| {
                let (source, target, class) = model.a2a_names(i);
                A2ADoc {
                    source: source.to_owned(),
                    target: target.to_owned(),
                    class: class.to_owned(),
                    count: edge.count,
                    perf_ms: edge.perf_ms,
                    dep: model.dep[i],
                }
            })
            .collect(),
        start_activities: class_activities(model, &model.start_activities),
        end_activities: class_activities(model, &model.end_activities),
    }
}

pub fn model_to_json(model: &MvpModel) -> Result<String> {
    Ok(serde_json::to_string_pretty(&to_doc(model))?)
}

pub fn model_from_json(text: &str) -> Result<MvpModel> {
    let doc: ModelDoc = serde_json::from_str(text)?;

    let mut builder = DatabaseEventLog::builder();
    for class in &doc.log.classes {
        builder.add_class(class);
    }
    for e in &doc.log.events {
        builder.add_event(&e.id, &e.activity, e.timestamp_ms)?;
    }
    for o in &doc.log.objects {
        builder.add_object(&o.id, &o.class)?;
    }
    for link in &doc.e2o {
        builder.link(&link.event, &link.object)?;
    }
    let log = builder.build();
    if log.classes() != doc.log.classes || log.activities() != doc.log.activities {
        return Err(Error::InvalidDump(
            "class or activity table does not match the events and objects".into(),
        ));
    }

    let model = discover(log);
    let rebuilt = to_doc(&model);
    let check = |what: &str, same: bool| {
        if same {
            Ok(())
        } else {
            Err(Error::InvalidDump(format!(
                "stored {what} disagree with the stored log"
            )))
        }
    };
    check("events", rebuilt.log.events == doc.log.events)?;
    check("objects", rebuilt.log.objects == doc.log.objects)?;
    check("e2o edges", rebuilt.e2o == doc.e2o)?;
    check("e2e edges", rebuilt.e2e == doc.e2e)?;
    check("a2a edges", a2a_agree(&rebuilt.a2a, &doc.a2a))?;
    check(
        "start activities",
        rebuilt.start_activities == doc.start_activities,
    )?;
    check(
        "end activities",
        rebuilt.end_activities == doc.end_activities,
    )?;
    Ok(model)
}

fn a2a_agree(a: &[A2ADoc], b: &[A2ADoc]) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0);
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.source == y.source
                && x.target == y.target
                && x.class == y.class
                && x.count == y.count
                && close(x.perf_ms, y.perf_ms)
                && close(x.dep, y.dep)
        })
}

pub fn save_model(model: &MvpModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_json(model)?).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<MvpModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}
