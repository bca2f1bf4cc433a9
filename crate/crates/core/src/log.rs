//! Event-log data models.
//!
//! A [`DatabaseEventLog`] holds events that reference any number of objects
//! (each object belonging to one class) with no case notion attached. A
//! [`ClassicalEventLog`] is the case-centric form obtained after choosing
//! which event sets make up the cases.
//!
//! Both logs are immutable once built. Events are stored sorted by
//! `(timestamp, event id)`, so an event's position in [`DatabaseEventLog::events`]
//! realizes the total order on events; every other table refers to events,
//! objects, activities and classes by their position.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};

/// Position of an event in the total order.
pub type EventIdx = usize;
/// Position of an object in the id-sorted object table.
pub type ObjectIdx = usize;
/// Position of an activity name in the sorted activity table.
pub type ActivityIdx = usize;
/// Position of a class name in the sorted class table.
pub type ClassIdx = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub id: String,
    pub activity: ActivityIdx,
    /// Epoch milliseconds, UTC.
    pub time_ms: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Object {
    pub id: String,
    pub class: ClassIdx,
}

#[derive(Debug, Clone, Default)]
pub struct DatabaseEventLog {
    events: Vec<Event>,
    objects: Vec<Object>,
    classes: Vec<String>,
    activities: Vec<String>,
    eo: Vec<(EventIdx, ObjectIdx)>,
    event_lookup: HashMap<String, EventIdx>,
    object_lookup: HashMap<String, ObjectIdx>,
}

impl PartialEq for DatabaseEventLog {
    fn eq(&self, other: &Self) -> bool {
        // The lookup tables are derived from `events` and `objects`.
        self.events == other.events
            && self.objects == other.objects
            && self.classes == other.classes
            && self.activities == other.activities
            && self.eo == other.eo
    }
}

impl DatabaseEventLog {
    pub fn builder() -> LogBuilder {
        LogBuilder::default()
    }

    /// Events in the total order.
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Objects sorted by id.
    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn activities(&self) -> &[String] {
        &self.activities
    }

    /// The event-to-object relation, sorted by event order then object id.
    pub fn eo(&self) -> &[(EventIdx, ObjectIdx)] {
        &self.eo
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty() && self.objects.is_empty()
    }

    pub fn event_index(&self, id: &str) -> Option<EventIdx> {
        self.event_lookup.get(id).copied()
    }

    pub fn object_index(&self, id: &str) -> Option<ObjectIdx> {
        self.object_lookup.get(id).copied()
    }

    pub fn class_index(&self, name: &str) -> Option<ClassIdx> {
        self.classes.binary_search_by(|c| c.as_str().cmp(name)).ok()
    }

    pub fn activity_index(&self, name: &str) -> Option<ActivityIdx> {
        self.activities
            .binary_search_by(|a| a.as_str().cmp(name))
            .ok()
    }

    pub fn event(&self, idx: EventIdx) -> &Event {
        &self.events[idx]
    }

    pub fn object(&self, idx: ObjectIdx) -> &Object {
        &self.objects[idx]
    }

    /// Activity name of the event at `idx`.
    pub fn act(&self, idx: EventIdx) -> &str {
        &self.activities[self.events[idx].activity]
    }

    /// Class name of the object at `idx`.
    pub fn class_of(&self, idx: ObjectIdx) -> &str {
        &self.classes[self.objects[idx].class]
    }

    pub fn time(&self, idx: EventIdx) -> i64 {
        self.events[idx].time_ms
    }
}

/// Accumulates events, objects and links, then sorts them into a
/// [`DatabaseEventLog`].
///
/// Re-adding an event or object with identical content is a no-op; re-adding
/// it with different content is a [`Error::Consistency`] with row 0 (callers
/// that know the source row rewrite it).
#[derive(Debug, Default)]
pub struct LogBuilder {
    events: HashMap<String, (String, i64)>,
    objects: HashMap<String, String>,
    classes: BTreeSet<String>,
    links: Vec<(String, String)>,
}

impl LogBuilder {
    pub fn add_class(&mut self, class: &str) -> &mut Self {
        if !self.classes.contains(class) {
            self.classes.insert(class.to_owned());
        }
        self
    }

    pub fn add_event(&mut self, id: &str, activity: &str, time_ms: i64) -> Result<&mut Self> {
        match self.events.get(id) {
            Some((a, t)) if a == activity && *t == time_ms => {}
            Some((a, t)) => {
                return Err(Error::Consistency {
                    row: 0,
                    message: format!(
                        "event {id:?} already recorded with activity {a:?} at {t} ms, \
                         now {activity:?} at {time_ms} ms"
                    ),
                })
            }
            None => {
                self.events
                    .insert(id.to_owned(), (activity.to_owned(), time_ms));
            }
        }
        Ok(self)
    }

    pub fn add_object(&mut self, id: &str, class: &str) -> Result<&mut Self> {
        match self.objects.get(id) {
            Some(c) if c == class => {}
            Some(c) => {
                return Err(Error::Consistency {
                    row: 0,
                    message: format!("object {id:?} appears under classes {c:?} and {class:?}"),
                })
            }
            None => {
                self.objects.insert(id.to_owned(), class.to_owned());
                self.add_class(class);
            }
        }
        Ok(self)
    }

    /// Relates an already-added event to an already-added object.
    pub fn link(&mut self, event: &str, object: &str) -> Result<&mut Self> {
        if !self.events.contains_key(event) {
            return Err(Error::UnknownEvent(event.to_owned()));
        }
        if !self.objects.contains_key(object) {
            return Err(Error::UnknownObject(object.to_owned()));
        }
        self.links.push((event.to_owned(), object.to_owned()));
        Ok(self)
    }

    pub fn build(self) -> DatabaseEventLog {
        let classes: Vec<String> = self.classes.into_iter().collect();
        let activities: Vec<String> = self
            .events
            .values()
            .map(|(a, _)| a.as_str())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(str::to_owned)
            .collect();

        let mut raw_events: Vec<(String, String, i64)> = self
            .events
            .into_iter()
            .map(|(id, (act, t))| (id, act, t))
            .collect();
        raw_events.sort_by(|a, b| a.2.cmp(&b.2).then_with(|| a.0.cmp(&b.0)));
        let events: Vec<Event> = raw_events
            .into_iter()
            .map(|(id, act, time_ms)| Event {
                activity: activities
                    .binary_search(&act)
                    .expect("activity collected above"),
                id,
                time_ms,
            })
            .collect();

        let mut raw_objects: Vec<(String, String)> = self.objects.into_iter().collect();
        raw_objects.sort_unstable();
        let objects: Vec<Object> = raw_objects
            .into_iter()
            .map(|(id, class)| Object {
                class: classes
                    .binary_search(&class)
                    .expect("class registered with object"),
                id,
            })
            .collect();

        let event_lookup: HashMap<String, EventIdx> = events
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
        let object_lookup: HashMap<String, ObjectIdx> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.id.clone(), i))
            .collect();

        let mut eo: Vec<(EventIdx, ObjectIdx)> = self
            .links
            .iter()
            .map(|(e, o)| (event_lookup[e], object_lookup[o]))
            .collect();
        eo.sort_unstable();
        eo.dedup();

        DatabaseEventLog {
            events,
            objects,
            classes,
            activities,
            eo,
            event_lookup,
            object_lookup,
        }
    }
}

/// A case-centric log. Cases may share events.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalEventLog {
    events: Vec<Event>,
    activities: Vec<String>,
    cases: BTreeMap<String, Vec<EventIdx>>,
}

impl ClassicalEventLog {
    /// Builds a classical log over `events` (already in the total order).
    ///
    /// Each case's member list is sorted into event order; empty cases and
    /// out-of-range members are rejected.
    pub fn new(
        events: Vec<Event>,
        activities: Vec<String>,
        cases: impl IntoIterator<Item = (String, Vec<EventIdx>)>,
    ) -> Result<Self> {
        let mut case_ev = BTreeMap::new();
        for (case_id, mut members) in cases {
            if members.is_empty() {
                return Err(Error::Domain(format!("case {case_id:?} has no events")));
            }
            if let Some(&bad) = members.iter().find(|&&e| e >= events.len()) {
                return Err(Error::Domain(format!(
                    "case {case_id:?} references event #{bad} outside the log"
                )));
            }
            members.sort_unstable();
            members.dedup();
            case_ev.insert(case_id, members);
        }
        if let Some(e) = events.iter().find(|e| e.activity >= activities.len()) {
            return Err(Error::Domain(format!(
                "event {:?} has no activity name",
                e.id
            )));
        }
        Ok(ClassicalEventLog {
            events,
            activities,
            cases: case_ev,
        })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn activities(&self) -> &[String] {
        &self.activities
    }

    /// Case identifier → member events in the total order.
    pub fn cases(&self) -> &BTreeMap<String, Vec<EventIdx>> {
        &self.cases
    }

    pub fn act(&self, idx: EventIdx) -> &str {
        &self.activities[self.events[idx].activity]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_orders_events_by_time_then_id() {
        let mut b = DatabaseEventLog::builder();
        b.add_event("b", "X", 10).unwrap();
        b.add_event("a", "Y", 10).unwrap();
        b.add_event("c", "X", 5).unwrap();
        let log = b.build();
        let ids: Vec<_> = log.events().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["c", "a", "b"]);
        assert_eq!(log.activities(), ["X", "Y"]);
        assert_eq!(log.act(1), "Y");
    }

    #[test]
    fn conflicting_event_is_rejected() {
        let mut b = DatabaseEventLog::builder();
        b.add_event("e1", "A", 0).unwrap();
        b.add_event("e1", "A", 0).unwrap();
        assert!(matches!(
            b.add_event("e1", "B", 0),
            Err(Error::Consistency { .. })
        ));
        assert!(b.add_event("e1", "A", 1).is_err());
    }

    #[test]
    fn object_in_two_classes_is_rejected() {
        let mut b = DatabaseEventLog::builder();
        b.add_object("o", "c1").unwrap();
        assert!(b.add_object("o", "c2").is_err());
    }

    #[test]
    fn duplicate_links_collapse() {
        let mut b = DatabaseEventLog::builder();
        b.add_event("e", "A", 0).unwrap();
        b.add_object("o", "c").unwrap();
        b.link("e", "o").unwrap();
        b.link("e", "o").unwrap();
        let log = b.build();
        assert_eq!(log.eo(), [(0, 0)]);
    }

    #[test]
    fn link_requires_known_endpoints() {
        let mut b = DatabaseEventLog::builder();
        b.add_event("e", "A", 0).unwrap();
        assert!(matches!(b.link("e", "o"), Err(Error::UnknownObject(_))));
        assert!(matches!(b.link("x", "o"), Err(Error::UnknownEvent(_))));
    }

    #[test]
    fn classical_log_rejects_empty_case() {
        let events = vec![Event {
            id: "e".into(),
            activity: 0,
            time_ms: 0,
        }];
        let err = ClassicalEventLog::new(events, vec!["A".into()], [("c".to_owned(), vec![])]);
        assert!(err.is_err());
    }
}
