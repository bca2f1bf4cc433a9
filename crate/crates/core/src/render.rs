//! Graphviz DOT output for E2O graphs, E2E multigraphs, DFGs and MVP models.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::discovery::{filter_edges, E2EGraph, E2OGraph, MvpModel};
use crate::error::{Error, Result};
use crate::log::{ActivityIdx, ClassIdx, DatabaseEventLog, EventIdx};
use crate::viewpoint::Dfg;

/// Class colors, cycled by sorted class index.
pub const PALETTE: [&str; 12] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f", "#393b79", "#637939",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decoration {
    #[default]
    Frequency,
    Performance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub decoration: Decoration,
    /// Dependency threshold in [-1, 1].
    pub threshold: f64,
    /// Also emit activities that end up with no edges.
    pub show_isolated: bool,
    pub palette_seed: u64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            decoration: Decoration::Frequency,
            threshold: 0.0,
            show_isolated: false,
            palette_seed: 0,
        }
    }
}

pub fn class_color(class: ClassIdx, palette_seed: u64) -> &'static str {
    let offset = (palette_seed % PALETTE.len() as u64) as usize;
    PALETTE[(class + offset) % PALETTE.len()]
}

/// Quotes `s` as a DOT string.
fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Formats a duration with the largest unit (ms, s, min, h, d) that keeps the
/// value at or above one.
pub fn human_duration(ms: f64) -> String {
    const UNITS: [(f64, &str); 4] = [
        (86_400_000.0, "d"),
        (3_600_000.0, "h"),
        (60_000.0, "min"),
        (1_000.0, "s"),
    ];
    for (scale, unit) in UNITS {
        if ms >= scale {
            return format!("{:.1}{unit}", ms / scale);
        }
    }
    format!("{ms:.0}ms")
}

pub fn render_mvp(model: &MvpModel, opts: &RenderOptions) -> Result<String> {
    let kept = filter_edges(model, opts.threshold)?;
    let n_classes = model.log.classes().len();

    let mut used: BTreeSet<ActivityIdx> = BTreeSet::new();
    for &i in &kept {
        let k = model.a2a.edges[i].key;
        used.insert(k.source);
        used.insert(k.target);
    }
    let scaffolded: Vec<ClassIdx> = (0..n_classes)
        .filter(|&c| !model.start_activities[c].is_empty())
        .collect();
    for &c in &scaffolded {
        used.extend(&model.start_activities[c]);
        used.extend(&model.end_activities[c]);
    }
    let nodes: Vec<ActivityIdx> = if opts.show_isolated {
        (0..model.log.activities().len()).collect()
    } else {
        used.into_iter().collect()
    };

    let mut out =
        String::from("digraph mvp {\n  rankdir=LR;\n  node [shape=box, style=rounded];\n");
    for a in nodes {
        let _ = writeln!(out, "  a{a} [label={}];", quote(model.activity(a)));
    }
    for &c in &scaffolded {
        let color = class_color(c, opts.palette_seed);
        let name = quote(model.class(c));
        let _ = writeln!(
            out,
            "  start{c} [label={name}, shape=circle, style=filled, fillcolor=\"{color}\", fontcolor=white];"
        );
        let _ = writeln!(
            out,
            "  end{c} [label={name}, shape=doublecircle, style=filled, fillcolor=\"{color}\", fontcolor=white];"
        );
    }
    for &i in &kept {
        let edge = &model.a2a.edges[i];
        let k = edge.key;
        let color = class_color(k.class, opts.palette_seed);
        let class = model.class(k.class);
        let label = match opts.decoration {
            Decoration::Frequency => format!("{class}\n{}", edge.count),
            Decoration::Performance => format!("{class}\n{}", human_duration(edge.perf_ms)),
        };
        let _ = write!(
            out,
            "  a{} -> a{} [label={}, color=\"{color}\", fontcolor=\"{color}\"",
            k.source,
            k.target,
            quote(&label)
        );
        if opts.decoration == Decoration::Performance {
            let _ = write!(out, ", tooltip=\"{} ms\"", edge.perf_ms);
        }
        out.push_str("];\n");
    }
    for &c in &scaffolded {
        let color = class_color(c, opts.palette_seed);
        for &a in &model.start_activities[c] {
            let _ = writeln!(out, "  start{c} -> a{a} [color=\"{color}\", style=dashed];");
        }
        for &a in &model.end_activities[c] {
            let _ = writeln!(out, "  a{a} -> end{c} [color=\"{color}\", style=dashed];");
        }
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn render_e2o(log: &DatabaseEventLog, e2o: &E2OGraph) -> String {
    let mut out = String::from("digraph e2o {\n  rankdir=LR;\n");
    for e in 0..e2o.n_events {
        let _ = writeln!(
            out,
            "  e{e} [label={}, shape=box, style=filled, fillcolor=\"#e34a33\", fontcolor=white];",
            quote(&log.event(e).id)
        );
    }
    for o in 0..e2o.n_objects {
        let _ = writeln!(
            out,
            "  o{o} [label={}, shape=ellipse, style=filled, fillcolor=white];",
            quote(&log.object(o).id)
        );
    }
    for &(e, o) in &e2o.edges {
        let _ = writeln!(out, "  e{e} -> o{o};");
    }
    out.push_str("}\n");
    out
}

/// Renders the E2E multigraph, optionally restricted to the events in
/// `subset` (edges are kept when both endpoints are in the subset).
pub fn render_e2e<S: AsRef<str>>(
    log: &DatabaseEventLog,
    e2e: &E2EGraph,
    subset: Option<&[S]>,
) -> Result<String> {
    let selected: Option<HashSet<EventIdx>> = subset
        .map(|ids| {
            ids.iter()
                .map(|id| {
                    log.event_index(id.as_ref())
                        .ok_or_else(|| Error::UnknownEvent(id.as_ref().to_owned()))
                })
                .collect::<Result<_>>()
        })
        .transpose()?;
    let keep = |e: EventIdx| selected.as_ref().is_none_or(|s| s.contains(&e));

    let mut out = String::from("digraph e2e {\n  rankdir=LR;\n  node [shape=box];\n");
    for e in (0..e2e.n_events).filter(|&e| keep(e)) {
        let event = log.event(e);
        let _ = writeln!(
            out,
            "  e{e} [label={}];",
            quote(&format!("{}\n{}", event.id, log.act(e)))
        );
    }
    for f in e2e
        .edges
        .iter()
        .filter(|f| keep(f.source) && keep(f.target))
    {
        let _ = writeln!(
            out,
            "  e{} -> e{} [label={}];",
            f.source,
            f.target,
            quote(&log.object(f.object).id)
        );
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn render_dfg(dfg: &Dfg) -> String {
    let index: Vec<&String> = dfg.nodes.iter().collect();
    let pos = |name: &String| index.binary_search(&name).expect("edge endpoint is a node");
    let mut out =
        String::from("digraph dfg {\n  rankdir=LR;\n  node [shape=box, style=rounded];\n");
    for (i, name) in index.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label={}];", quote(name));
    }
    for ((s, t), count) in &dfg.edges {
        let _ = writeln!(out, "  n{} -> n{} [label=\"{count}\"];", pos(s), pos(t));
    }
    out.push_str("}\n");
    out
}
