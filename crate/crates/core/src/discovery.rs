//! MVP model discovery.
//!
//! From a [`DatabaseEventLog`]:
//!
//! * the E2O graph is the event-to-object relation itself;
//! * each object's related events, in the total order, give one
//!   directly-follows edge per adjacent pair (the E2E multigraph, with the
//!   elapsed time as the edge duration);
//! * grouping E2E edges by (source activity, target activity, object class)
//!   gives the A2A multigraph, with occurrence counts and mean durations;
//! * the first and last related event of every object give the per-class
//!   start and end activities;
//! * forward and backward A2A counts give a dependency value per A2A edge.
//!
//! Everything after sorting the relation is linear in the number of
//! event-object pairs.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::log::{ActivityIdx, ClassIdx, DatabaseEventLog, EventIdx, ObjectIdx};

/// Related events of every object, in the total order (compressed rows).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectSequences {
    offsets: Vec<usize>,
    events: Vec<EventIdx>,
}

impl ObjectSequences {
    pub fn build(log: &DatabaseEventLog) -> Self {
        let n_objects = log.objects().len();
        let mut offsets = vec![0usize; n_objects + 1];
        for &(_, o) in log.eo() {
            offsets[o + 1] += 1;
        }
        for i in 0..n_objects {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut events = vec![0; log.eo().len()];
        // `eo` is sorted by event, so each bucket fills in event order.
        for &(e, o) in log.eo() {
            events[fill[o]] = e;
            fill[o] += 1;
        }
        ObjectSequences { offsets, events }
    }

    pub fn get(&self, object: ObjectIdx) -> &[EventIdx] {
        &self.events[self.offsets[object]..self.offsets[object + 1]]
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (ObjectIdx, &[EventIdx])> {
        (0..self.len()).map(move |o| (o, self.get(o)))
    }
}

/// Events related to `object`, in the total order.
pub fn related_events<'a>(log: &'a DatabaseEventLog, object: &str) -> Result<Vec<&'a str>> {
    let o = log
        .object_index(object)
        .ok_or_else(|| Error::UnknownObject(object.to_owned()))?;
    Ok(log
        .eo()
        .iter()
        .filter(|&&(_, obj)| obj == o)
        .map(|&(e, _)| log.event(e).id.as_str())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum E2ONode {
    Event(EventIdx),
    Object(ObjectIdx),
}

/// Bipartite event/object graph; nodes are all events and all objects.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct E2OGraph {
    pub n_events: usize,
    pub n_objects: usize,
    pub edges: Vec<(EventIdx, ObjectIdx)>,
}

impl E2OGraph {
    pub fn node_count(&self) -> usize {
        self.n_events + self.n_objects
    }

    pub fn nodes(&self) -> impl Iterator<Item = E2ONode> + '_ {
        (0..self.n_events)
            .map(E2ONode::Event)
            .chain((0..self.n_objects).map(E2ONode::Object))
    }
}

pub fn build_e2o(log: &DatabaseEventLog) -> E2OGraph {
    E2OGraph {
        n_events: log.events().len(),
        n_objects: log.objects().len(),
        edges: log.eo().to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct E2EEdge {
    pub source: EventIdx,
    pub target: EventIdx,
    pub object: ObjectIdx,
    pub duration_ms: i64,
}

/// Event-to-event multigraph; nodes are all events of the log.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct E2EGraph {
    pub n_events: usize,
    /// Grouped by object (id order), then by position in the object's sequence.
    pub edges: Vec<E2EEdge>,
}

pub fn build_e2e(log: &DatabaseEventLog) -> E2EGraph {
    build_e2e_from(log, &ObjectSequences::build(log))
}

fn build_e2e_from(log: &DatabaseEventLog, sequences: &ObjectSequences) -> E2EGraph {
    let n_edges = log.eo().len().saturating_sub(sequences.len());
    let mut edges = Vec::with_capacity(n_edges);
    for (object, seq) in sequences.iter() {
        edges.extend(seq.windows(2).map(|w| E2EEdge {
            source: w[0],
            target: w[1],
            object,
            duration_ms: log.time(w[1]) - log.time(w[0]),
        }));
    }
    E2EGraph {
        n_events: log.events().len(),
        edges,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct A2AKey {
    pub source: ActivityIdx,
    pub target: ActivityIdx,
    pub class: ClassIdx,
}

#[derive(Debug, Clone, PartialEq)]
pub struct A2AEdge {
    pub key: A2AKey,
    pub count: usize,
    /// Sum of the member E2E durations.
    pub total_ms: i64,
    /// Mean member E2E duration.
    pub perf_ms: f64,
}

/// Activity-to-activity multigraph; nodes are all activities of the log.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct A2AGraph {
    pub n_activities: usize,
    /// Sorted by key.
    pub edges: Vec<A2AEdge>,
    /// For each edge, the indices of its member E2E edges.
    members: Vec<Vec<usize>>,
    lookup: HashMap<A2AKey, usize>,
}

impl A2AGraph {
    /// Rebuilds the graph from `(key, member E2E indices)` groups.
    fn from_groups(
        n_activities: usize,
        e2e: &E2EGraph,
        mut groups: Vec<(A2AKey, Vec<usize>)>,
    ) -> Self {
        groups.sort_unstable_by_key(|(k, _)| *k);
        let mut edges = Vec::with_capacity(groups.len());
        let mut members = Vec::with_capacity(groups.len());
        let mut lookup = HashMap::with_capacity(groups.len());
        for (i, (key, group)) in groups.into_iter().enumerate() {
            let total_ms: i64 = group.iter().map(|&f| e2e.edges[f].duration_ms).sum();
            let count = group.len();
            edges.push(A2AEdge {
                key,
                count,
                total_ms,
                perf_ms: total_ms as f64 / count as f64,
            });
            members.push(group);
            lookup.insert(key, i);
        }
        A2AGraph {
            n_activities,
            edges,
            members,
            lookup,
        }
    }

    pub fn find(&self, key: &A2AKey) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    pub fn get(&self, key: &A2AKey) -> Option<&A2AEdge> {
        self.find(key).map(|i| &self.edges[i])
    }

    /// E2E edges (as indices into the E2E graph) grouped under edge `idx`.
    pub fn members(&self, idx: usize) -> &[usize] {
        &self.members[idx]
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub fn build_a2a(e2e: &E2EGraph, log: &DatabaseEventLog) -> A2AGraph {
    let mut index: HashMap<A2AKey, usize> = HashMap::new();
    let mut groups: Vec<(A2AKey, Vec<usize>)> = Vec::new();
    for (i, edge) in e2e.edges.iter().enumerate() {
        let key = A2AKey {
            source: log.event(edge.source).activity,
            target: log.event(edge.target).activity,
            class: log.object(edge.object).class,
        };
        let slot = *index.entry(key).or_insert_with(|| {
            groups.push((key, Vec::new()));
            groups.len() - 1
        });
        groups[slot].1.push(i);
    }
    A2AGraph::from_groups(log.activities().len(), e2e, groups)
}

/// Start or end activities, indexed by class.
pub type ClassActivities = Vec<BTreeSet<ActivityIdx>>;

pub fn start_end_activities(log: &DatabaseEventLog) -> (ClassActivities, ClassActivities) {
    start_end_from(log, &ObjectSequences::build(log))
}

fn start_end_from(
    log: &DatabaseEventLog,
    sequences: &ObjectSequences,
) -> (ClassActivities, ClassActivities) {
    let n_classes = log.classes().len();
    let mut starts = vec![BTreeSet::new(); n_classes];
    let mut ends = vec![BTreeSet::new(); n_classes];
    for (object, seq) in sequences.iter() {
        if let (Some(&first), Some(&last)) = (seq.first(), seq.last()) {
            let class = log.object(object).class;
            starts[class].insert(log.event(first).activity);
            ends[class].insert(log.event(last).activity);
        }
    }
    (starts, ends)
}

/// Dependency value of every A2A edge, aligned with `a2a.edges`.
///
/// Without a distinct reverse edge in the same class the value is
/// `n / (n + 1)`; otherwise `(n - m) / (n + m + 1)` with `m` the reverse count.
/// Values lie in the open interval (-1, 1).
pub fn dependency(a2a: &A2AGraph) -> Vec<f64> {
    a2a.edges
        .iter()
        .map(|edge| {
            let forward = edge.count as f64;
            let k = edge.key;
            let reverse = A2AKey {
                source: k.target,
                target: k.source,
                class: k.class,
            };
            match a2a.get(&reverse) {
                Some(back) if k.source != k.target => {
                    let backward = back.count as f64;
                    (forward - backward) / (forward + backward + 1.0)
                }
                _ => forward / (forward + 1.0),
            }
        })
        .collect()
}

/// A discovered multiple-viewpoint model. Immutable; cheap to share.
#[derive(Debug, Clone, PartialEq)]
pub struct MvpModel {
    pub log: Arc<DatabaseEventLog>,
    pub sequences: ObjectSequences,
    pub e2o: E2OGraph,
    pub e2e: E2EGraph,
    pub a2a: A2AGraph,
    pub start_activities: ClassActivities,
    pub end_activities: ClassActivities,
    /// Aligned with `a2a.edges`.
    pub dep: Vec<f64>,
}

pub fn discover(log: impl Into<Arc<DatabaseEventLog>>) -> MvpModel {
    let log = log.into();
    let sequences = ObjectSequences::build(&log);
    let e2o = build_e2o(&log);
    let e2e = build_e2e_from(&log, &sequences);
    let a2a = build_a2a(&e2e, &log);
    let (start_activities, end_activities) = start_end_from(&log, &sequences);
    let dep = dependency(&a2a);
    MvpModel {
        log,
        sequences,
        e2o,
        e2e,
        a2a,
        start_activities,
        end_activities,
        dep,
    }
}

/// Indices of the A2A edges whose dependency is at least `threshold`.
pub fn filter_edges(model: &MvpModel, threshold: f64) -> Result<Vec<usize>> {
    check_threshold(threshold)?;
    Ok(model
        .dep
        .iter()
        .enumerate()
        .filter(|(_, &d)| d >= threshold)
        .map(|(i, _)| i)
        .collect())
}

pub(crate) fn check_threshold(threshold: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&threshold) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "dependency threshold {threshold} is outside [-1, 1]"
        )))
    }
}

impl MvpModel {
    pub fn activity(&self, idx: ActivityIdx) -> &str {
        &self.log.activities()[idx]
    }

    pub fn class(&self, idx: ClassIdx) -> &str {
        &self.log.classes()[idx]
    }

    /// `(source activity, target activity, class)` names of A2A edge `idx`.
    pub fn a2a_names(&self, idx: usize) -> (&str, &str, &str) {
        let k = self.a2a.edges[idx].key;
        (
            self.activity(k.source),
            self.activity(k.target),
            self.class(k.class),
        )
    }
}
