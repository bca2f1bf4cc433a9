//! Projections of an MVP model onto a viewpoint (a set of object classes):
//! the viewpoint's E2E edges, a directly-follows graph, and a classical event
//! log whose cases come from objects of the viewpoint's classes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::discovery::{E2EEdge, MvpModel};
use crate::error::{Error, Result};
use crate::log::{ClassIdx, ClassicalEventLog, DatabaseEventLog, EventIdx, ObjectIdx};

/// A nonempty set of classes of one log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Viewpoint {
    classes: BTreeSet<ClassIdx>,
}

impl Viewpoint {
    pub fn new<S: AsRef<str>>(log: &DatabaseEventLog, classes: &[S]) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Domain("a viewpoint needs at least one class".into()));
        }
        let classes = classes
            .iter()
            .map(|name| {
                let name = name.as_ref();
                log.class_index(name).ok_or_else(|| Error::UnknownClass {
                    class: name.to_owned(),
                    known: log.classes().to_vec(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Viewpoint { classes })
    }

    /// Every class of the log. Fails on a log without classes.
    pub fn all(log: &DatabaseEventLog) -> Result<Self> {
        Self::new(log, log.classes())
    }

    pub fn classes(&self) -> &BTreeSet<ClassIdx> {
        &self.classes
    }

    pub fn contains(&self, class: ClassIdx) -> bool {
        self.classes.contains(&class)
    }

    fn check(&self, log: &DatabaseEventLog) -> Result<()> {
        match self.classes.iter().find(|&&c| c >= log.classes().len()) {
            Some(c) => Err(Error::Domain(format!(
                "viewpoint class #{c} does not belong to this log"
            ))),
            None => Ok(()),
        }
    }

    fn covers(&self, log: &DatabaseEventLog, object: ObjectIdx) -> bool {
        self.classes.contains(&log.object(object).class)
    }
}

/// E2E edges whose object belongs to a class of the viewpoint.
pub fn viewpoint_edges(model: &MvpModel, viewpoint: &Viewpoint) -> Result<Vec<E2EEdge>> {
    viewpoint.check(&model.log)?;
    Ok(model
        .e2e
        .edges
        .iter()
        .filter(|f| viewpoint.covers(&model.log, f.object))
        .copied()
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dfg {
    pub nodes: BTreeSet<String>,
    /// Edge → number of directly-follows occurrences.
    pub edges: BTreeMap<(String, String), usize>,
}

#[derive(Serialize, Deserialize)]
struct DfgDoc {
    nodes: Vec<String>,
    edges: Vec<DfgEdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct DfgEdgeDoc {
    source: String,
    target: String,
    count: usize,
}

impl Dfg {
    /// Builds a DFG from directly-follows activity pairs, one per occurrence.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut dfg = Dfg::default();
        for (a, b) in pairs {
            *dfg.edges.entry((a.to_owned(), b.to_owned())).or_insert(0) += 1;
        }
        for (a, b) in dfg.edges.keys() {
            dfg.nodes.insert(a.clone());
            dfg.nodes.insert(b.clone());
        }
        dfg
    }

    pub fn count(&self, source: &str, target: &str) -> Option<usize> {
        self.edges
            .get(&(source.to_owned(), target.to_owned()))
            .copied()
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = DfgDoc {
            nodes: self.nodes.iter().cloned().collect(),
            edges: self
                .edges
                .iter()
                .map(|((s, t), &count)| DfgEdgeDoc {
                    source: s.clone(),
                    target: t.clone(),
                    count,
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DfgDoc = serde_json::from_str(text)?;
        let mut dfg = Dfg {
            nodes: doc.nodes.into_iter().collect(),
            edges: BTreeMap::new(),
        };
        for e in doc.edges {
            if e.count == 0 || !dfg.nodes.contains(&e.source) || !dfg.nodes.contains(&e.target) {
                return Err(Error::Domain(format!(
                    "dfg edge {} -> {} is not over listed nodes with a positive count",
                    e.source, e.target
                )));
            }
            dfg.edges.insert((e.source, e.target), e.count);
        }
        Ok(dfg)
    }
}

pub fn project_dfg(model: &MvpModel, viewpoint: &Viewpoint) -> Result<Dfg> {
    let log = &model.log;
    let edges = viewpoint_edges(model, viewpoint)?;
    Ok(Dfg::from_pairs(
        edges.iter().map(|f| (log.act(f.source), log.act(f.target))),
    ))
}

/// How the events of intersecting objects are merged into a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CaseMerge {
    /// The case seeded by an object is the union of the related events of
    /// every in-scope object sharing at least one event with it.
    #[default]
    OneHop,
    /// Extension: one case per connected component of the object
    /// "shares an event" relation.
    Connected,
}

/// A set of nonempty event sets; members may overlap.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CaseNotion {
    /// Each member sorted in the total order.
    pub cases: BTreeSet<Vec<EventIdx>>,
}

impl CaseNotion {
    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    /// Cases as sets of event ids.
    pub fn to_ids(&self, log: &DatabaseEventLog) -> BTreeSet<BTreeSet<String>> {
        self.cases
            .iter()
            .map(|c| c.iter().map(|&e| log.event(e).id.clone()).collect())
            .collect()
    }
}

pub fn derive_case_notion(model: &MvpModel, viewpoint: &Viewpoint) -> Result<CaseNotion> {
    derive_case_notion_with(model, viewpoint, CaseMerge::OneHop)
}

pub fn derive_case_notion_with(
    model: &MvpModel,
    viewpoint: &Viewpoint,
    merge: CaseMerge,
) -> Result<CaseNotion> {
    viewpoint.check(&model.log)?;
    let log = &model.log;
    let seqs = &model.sequences;

    // In-scope objects of every event, via the event-sorted relation.
    let n_events = log.events().len();
    let mut offsets = vec![0usize; n_events + 1];
    let mut event_objects = Vec::new();
    for &(e, o) in log.eo() {
        if viewpoint.covers(log, o) {
            offsets[e + 1] += 1;
            event_objects.push(o);
        }
    }
    for i in 0..n_events {
        offsets[i + 1] += offsets[i];
    }
    let objects_of = |e: EventIdx| &event_objects[offsets[e]..offsets[e + 1]];

    let seeds = (0..seqs.len()).filter(|&o| viewpoint.covers(log, o) && !seqs.get(o).is_empty());
    let mut cases = BTreeSet::new();
    match merge {
        CaseMerge::OneHop => {
            let mut neighbours: Vec<ObjectIdx> = Vec::new();
            for o in seeds {
                neighbours.clear();
                neighbours.extend(seqs.get(o).iter().flat_map(|&e| objects_of(e)));
                neighbours.sort_unstable();
                neighbours.dedup();
                let mut case: Vec<EventIdx> = neighbours
                    .iter()
                    .flat_map(|&n| seqs.get(n))
                    .copied()
                    .collect();
                case.sort_unstable();
                case.dedup();
                cases.insert(case);
            }
        }
        CaseMerge::Connected => {
            let mut parent: Vec<ObjectIdx> = (0..seqs.len()).collect();
            fn root(parent: &mut [ObjectIdx], mut x: ObjectIdx) -> ObjectIdx {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            for e in 0..n_events {
                if let Some((&first, rest)) = objects_of(e).split_first() {
                    for &other in rest {
                        let (a, b) = (root(&mut parent, first), root(&mut parent, other));
                        if a != b {
                            parent[a] = b;
                        }
                    }
                }
            }
            let mut components: BTreeMap<ObjectIdx, Vec<EventIdx>> = BTreeMap::new();
            for o in seeds {
                let r = root(&mut parent, o);
                components
                    .entry(r)
                    .or_default()
                    .extend_from_slice(seqs.get(o));
            }
            for (_, mut case) in components {
                case.sort_unstable();
                case.dedup();
                cases.insert(case);
            }
        }
    }
    Ok(CaseNotion { cases })
}

/// Deterministic identifier for a case: a digest of its event ids in
/// lexicographic order.
pub fn case_id(log: &DatabaseEventLog, members: &[EventIdx]) -> String {
    let mut ids: Vec<&str> = members.iter().map(|&e| log.event(e).id.as_str()).collect();
    ids.sort_unstable();
    let mut hasher = Sha256::new();
    for id in ids {
        hasher.update(id.as_bytes());
        hasher.update([0u8]);
    }
    let digest = hasher.finalize();
    let hex: String = digest[..12].iter().map(|b| format!("{b:02x}")).collect();
    format!("case-{hex}")
}

/// Classical log over the full event set, with one case per member of `notion`.
pub fn project_with_case_notion(
    log: &DatabaseEventLog,
    notion: &CaseNotion,
) -> Result<ClassicalEventLog> {
    let mut cases = BTreeMap::new();
    for members in &notion.cases {
        let id = case_id(log, members);
        if cases.insert(id.clone(), members.clone()).is_some() {
            return Err(Error::Domain(format!("case identifier collision on {id}")));
        }
    }
    ClassicalEventLog::new(log.events().to_vec(), log.activities().to_vec(), cases)
}

pub fn project_log(model: &MvpModel, viewpoint: &Viewpoint) -> Result<ClassicalEventLog> {
    project_log_with(model, viewpoint, CaseMerge::OneHop)
}

pub fn project_log_with(
    model: &MvpModel,
    viewpoint: &Viewpoint,
    merge: CaseMerge,
) -> Result<ClassicalEventLog> {
    let notion = derive_case_notion_with(model, viewpoint, merge)?;
    project_with_case_notion(&model.log, &notion)
}
