//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! The oracles work on [`RawLog`] (plain ids, activities, timestamps and
//! links) and never call into the discovery code they check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use mvp_core::DatabaseEventLog;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The storage-format fragment shown for the ERP example log.
pub const ERP_CSV: &str = "\
event_id,event_activity,event_timestamp,supplier_order,supplier_order_line
create_order15,create_order,2016-10-21 11:38:26,supplier_order15,NaN
approve_order15,approve_order,2016-10-21 11:38:53,supplier_order15,NaN
make_order1027,make_order,2016-10-21 11:40:00,NaN,NaN
make_order1027,make_order,2016-10-21 11:40:00,supplier_order15,NaN
make_dispatch19,make_dispatch,2016-10-21 11:42:31,NaN,NaN
make_dispatch19,make_dispatch,2016-10-21 11:42:31,NaN,supplier_order_line22
make_dispatch18,make_dispatch,2016-10-21 11:42:31,NaN,NaN
make_dispatch18,make_dispatch,2016-10-21 11:42:31,NaN,supplier_order_line23
receive_partial_order1028,receive_partial_order,2016-10-21 11:43:00,NaN,NaN
make_dispatch21,make_dispatch,2016-10-21 11:44:25,NaN,NaN
make_dispatch21,make_dispatch,2016-10-21 11:44:25,NaN,supplier_order_line22
make_dispatch20,make_dispatch,2016-10-21 11:44:25,NaN,NaN
make_dispatch20,make_dispatch,2016-10-21 11:44:25,NaN,supplier_order_line23
receive_total_order1029,receive_total_order,2016-10-21 11:45:00,NaN,NaN
receive_total_order1029,receive_total_order,2016-10-21 11:45:00,supplier_order15,NaN
create_invoice17,create_invoice,2016-10-21 11:45:46,NaN,NaN
create_invoice17,create_invoice,2016-10-21 11:45:46,NaN,NaN
create_payment11,create_payment,2016-10-21 11:46:14,NaN,NaN
create_payment11,create_payment,2016-10-21 11:46:14,NaN,NaN
create_payment12,create_payment,2016-10-21 11:46:29,NaN,NaN
create_payment12,create_payment,2016-10-21 11:46:29,NaN,NaN
create_order16,create_order,2016-10-21 11:56:35,supplier_order16,NaN
approve_order16,approve_order,2016-10-21 11:56:50,supplier_order16,NaN
make_order1033,make_order,2016-10-21 11:57:00,NaN,NaN
make_order1033,make_order,2016-10-21 11:57:00,supplier_order16,NaN
make_dispatch22,make_dispatch,2016-10-21 11:57:28,NaN,NaN
make_dispatch22,make_dispatch,2016-10-21 11:57:28,NaN,supplier_order_line24
receive_total_order1034,receive_total_order,2016-10-21 11:58:00,NaN,NaN
receive_total_order1034,receive_total_order,2016-10-21 11:58:00,supplier_order16,NaN
create_invoice18,create_invoice,2016-10-21 11:58:36,NaN,NaN
create_invoice18,create_invoice,2016-10-21 11:58:36,NaN,NaN
";

pub fn erp_log() -> DatabaseEventLog {
    mvp_core::read_csv(ERP_CSV.as_bytes()).expect("fixture parses")
}

#[derive(Debug, Clone)]
pub struct RawEvent {
    pub id: String,
    pub activity: String,
    pub time_ms: i64,
}

#[derive(Debug, Clone)]
pub struct RawLog {
    pub events: Vec<RawEvent>,
    /// (object id, class)
    pub objects: Vec<(String, String)>,
    /// (event position, object position), may contain duplicates
    pub links: Vec<(usize, usize)>,
}

impl RawLog {
    /// Random log with colliding timestamps, unlinked events and objects,
    /// and duplicate links.
    pub fn random(seed: u64, max_events: usize, max_classes: usize) -> RawLog {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_events = rng.gen_range(0..=max_events);
        let n_classes = rng.gen_range(1..=max_classes);
        let n_activities = rng.gen_range(1..=6);
        let n_objects = rng.gen_range(1..=12);
        let events = (0..n_events)
            .map(|i| RawEvent {
                // Ids deliberately not in time order.
                id: format!("ev{}", (i * 7919) % 10_007),
                activity: format!("act{}", rng.gen_range(0..n_activities)),
                time_ms: rng.gen_range(0..20) * 1000,
            })
            .collect();
        let objects = (0..n_objects)
            .map(|i| {
                (
                    format!("obj{i}"),
                    format!("cls{}", rng.gen_range(0..n_classes)),
                )
            })
            .collect();
        let mut links = Vec::new();
        for e in 0..n_events {
            for _ in 0..rng.gen_range(0..=3) {
                links.push((e, rng.gen_range(0..n_objects)));
            }
        }
        RawLog {
            events,
            objects,
            links,
        }
    }

    pub fn build(&self) -> DatabaseEventLog {
        let mut b = DatabaseEventLog::builder();
        for e in &self.events {
            b.add_event(&e.id, &e.activity, e.time_ms).unwrap();
        }
        for (id, class) in &self.objects {
            b.add_object(id, class).unwrap();
        }
        for &(e, o) in &self.links {
            b.link(&self.events[e].id, &self.objects[o].0).unwrap();
        }
        b.build()
    }

    fn precedes(&self, a: usize, b: usize) -> bool {
        let (x, y) = (&self.events[a], &self.events[b]);
        (x.time_ms, &x.id) < (y.time_ms, &y.id)
    }

    fn events_of(&self, o: usize) -> BTreeSet<usize> {
        self.links
            .iter()
            .filter(|&&(_, obj)| obj == o)
            .map(|&(e, _)| e)
            .collect()
    }

    pub fn class_of(&self, object_id: &str) -> &str {
        &self
            .objects
            .iter()
            .find(|(id, _)| id == object_id)
            .unwrap()
            .1
    }

    pub fn activity_of(&self, event_id: &str) -> &str {
        &self
            .events
            .iter()
            .find(|e| e.id == event_id)
            .unwrap()
            .activity
    }
}

/// `(source event, target event, object, duration)`.
pub type NamedE2E = (String, String, String, i64);

/// Directly-follows edges per object by checking every ordered pair of the
/// object's events for an intermediate event.
pub fn oracle_e2e(raw: &RawLog) -> BTreeSet<NamedE2E> {
    let mut out = BTreeSet::new();
    for o in 0..raw.objects.len() {
        let evs = raw.events_of(o);
        for &a in &evs {
            for &b in &evs {
                if !raw.precedes(a, b) {
                    continue;
                }
                let between = evs
                    .iter()
                    .any(|&c| raw.precedes(a, c) && raw.precedes(c, b));
                if !between {
                    out.insert((
                        raw.events[a].id.clone(),
                        raw.events[b].id.clone(),
                        raw.objects[o].0.clone(),
                        raw.events[b].time_ms - raw.events[a].time_ms,
                    ));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleA2A {
    pub count: usize,
    pub total_ms: i64,
    /// Dependency as an exact fraction `(numerator, denominator)`.
    pub dep: (i64, i64),
}

/// Evaluates the A2A definition literally over every (activity, activity,
/// class) triple, grouping the oracle E2E edges.
pub fn oracle_a2a(raw: &RawLog) -> BTreeMap<(String, String, String), OracleA2A> {
    let e2e = oracle_e2e(raw);
    let activities: BTreeSet<&str> = raw.events.iter().map(|e| e.activity.as_str()).collect();
    let classes: BTreeSet<&str> = raw.objects.iter().map(|(_, c)| c.as_str()).collect();
    // Resolve names once so the triple loop stays cheap.
    let labelled: Vec<(&str, &str, &str, i64)> = e2e
        .iter()
        .map(|(s, t, o, d)| (raw.activity_of(s), raw.activity_of(t), raw.class_of(o), *d))
        .collect();
    let mut counts = BTreeMap::new();
    for &a1 in &activities {
        for &a2 in &activities {
            for &c in &classes {
                let group: Vec<i64> = labelled
                    .iter()
                    .filter(|&&(x, y, z, _)| x == a1 && y == a2 && z == c)
                    .map(|f| f.3)
                    .collect();
                if !group.is_empty() {
                    counts.insert(
                        (a1.to_owned(), a2.to_owned(), c.to_owned()),
                        (group.len(), group.iter().sum::<i64>()),
                    );
                }
            }
        }
    }
    counts
        .iter()
        .map(|((a1, a2, c), &(count, total_ms))| {
            let n = count as i64;
            let reverse = counts.get(&(a2.clone(), a1.clone(), c.clone()));
            let dep = match reverse {
                Some(&(m, _)) if a1 != a2 => (n - m as i64, n + m as i64 + 1),
                _ => (n, n + 1),
            };
            (
                (a1.clone(), a2.clone(), c.clone()),
                OracleA2A {
                    count,
                    total_ms,
                    dep,
                },
            )
        })
        .collect()
}

/// Case notion by a double loop over in-scope object pairs.
pub fn oracle_case_notion(
    raw: &RawLog,
    viewpoint: &BTreeSet<String>,
) -> BTreeSet<BTreeSet<String>> {
    let in_scope: Vec<usize> = (0..raw.objects.len())
        .filter(|&o| viewpoint.contains(&raw.objects[o].1))
        .collect();
    let mut cases = BTreeSet::new();
    for &o in &in_scope {
        let mine = raw.events_of(o);
        let mut case = BTreeSet::new();
        for &other in &in_scope {
            let theirs = raw.events_of(other);
            if !mine.is_disjoint(&theirs) {
                case.extend(theirs.iter().map(|&e| raw.events[e].id.clone()));
            }
        }
        if !case.is_empty() {
            cases.insert(case);
        }
    }
    cases
}

/// Named E2E edges of a discovered model.
pub fn model_e2e(model: &mvp_core::MvpModel) -> BTreeSet<NamedE2E> {
    let log = &model.log;
    model
        .e2e
        .edges
        .iter()
        .map(|f| {
            (
                log.event(f.source).id.clone(),
                log.event(f.target).id.clone(),
                log.object(f.object).id.clone(),
                f.duration_ms,
            )
        })
        .collect()
}

/// Parses A2A edges back out of rendered MVP DOT text as
/// `(source activity, target activity, class, count label)`.
pub fn parse_mvp_dot(dot: &str) -> Vec<(String, String, String, String)> {
    let node = regex::Regex::new(r#"^\s*(a\d+) \[label="((?:[^"\\]|\\.)*)"\];$"#).unwrap();
    let edge = regex::Regex::new(
        r#"^\s*(a\d+) -> (a\d+) \[label="((?:[^"\\]|\\.)*)\\n((?:[^"\\]|\\.)*)""#,
    )
    .unwrap();
    let mut names = BTreeMap::new();
    for line in dot.lines() {
        if let Some(c) = node.captures(line) {
            names.insert(c[1].to_owned(), unescape(&c[2]));
        }
    }
    let mut out: Vec<_> = dot
        .lines()
        .filter_map(|line| edge.captures(line))
        .map(|c| {
            (
                names[&c[1]].clone(),
                names[&c[2]].clone(),
                unescape(&c[3]),
                unescape(&c[4]),
            )
        })
        .collect();
    out.sort();
    out
}

fn unescape(s: &str) -> String {
    s.replace("\\\"", "\"").replace("\\\\", "\\")
}
