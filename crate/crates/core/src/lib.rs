//! Multiple-viewpoint (MVP) process discovery.
//!
//! Database event logs relate each event to any number of objects instead of
//! a single case. This crate discovers, from such a log, the event-to-object
//! graph, the event-to-event and activity-to-activity multigraphs (with
//! frequency and performance annotations), per-class start and end
//! activities and a dependency measure, and projects chosen class viewpoints
//! onto directly-follows graphs and classical event logs.
//!
//! ```
//! use mvp_core::{discover, generate, GeneratorParams, Viewpoint, project_dfg};
//!
//! let log = generate(&GeneratorParams { n_events: 200, ..Default::default() }).unwrap();
//! let model = discover(log);
//! let view = Viewpoint::new(&model.log, &["class_0"]).unwrap();
//! let dfg = project_dfg(&model, &view).unwrap();
//! assert!(dfg.edges.values().all(|&c| c > 0));
//! ```

pub mod bench;
pub mod cli;
pub mod columnar;
pub mod discovery;
pub mod dump;
pub mod error;
pub mod generator;
pub mod log;
pub mod render;
pub mod viewpoint;

pub use columnar::{
    export_classical_csv, export_csv, load_csv, read_csv, write_classical_csv, write_csv,
};
pub use discovery::{
    build_a2a, build_e2e, build_e2o, dependency, discover, filter_edges, related_events,
    start_end_activities, A2AEdge, A2AGraph, A2AKey, E2EEdge, E2EGraph, E2OGraph, MvpModel,
};
pub use dump::{load_model, model_from_json, model_to_json, save_model};
pub use error::{Error, Result};
pub use generator::{generate, GeneratorParams};
pub use log::{ClassicalEventLog, DatabaseEventLog, Event, LogBuilder, Object};
pub use render::{render_dfg, render_e2e, render_e2o, render_mvp, Decoration, RenderOptions};
pub use viewpoint::{
    derive_case_notion, derive_case_notion_with, project_dfg, project_log, project_log_with,
    viewpoint_edges, CaseMerge, CaseNotion, Dfg, Viewpoint,
};
