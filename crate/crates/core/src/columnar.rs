//! Columnar CSV layout for database event logs.
//!
//! One row per (event, object) pair:
//!
//! ```text
//! event_id,event_activity,event_timestamp,supplier_order,supplier_order_line
//! create_order15,create_order,2016-10-21 11:38:26,supplier_order15,
//! make_order1027,make_order,2016-10-21 11:40:00,,
//! make_order1027,make_order,2016-10-21 11:40:00,supplier_order15,
//! ```
//!
//! Every header other than the three reserved names is a class column, and a
//! row names at most one object (in the column of its class). Blank and `NaN`
//! cells mean "no object". An event without objects is written as a single
//! row with all class cells blank.
//!
//! Objects that no event references cannot be expressed as (event, object)
//! rows; they are written after all event rows with blank event columns and
//! the object in its class column, and read back the same way.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};

use crate::error::{Error, Result};
use crate::log::{ClassicalEventLog, DatabaseEventLog};

pub const EVENT_ID: &str = "event_id";
pub const EVENT_ACTIVITY: &str = "event_activity";
pub const EVENT_TIMESTAMP: &str = "event_timestamp";

const TIMESTAMP_FORMAT: &str = "%Y-%m-%d %H:%M:%S";

/// Parses `YYYY-MM-DD HH:MM:SS` (optionally followed by `.` and one to three
/// fractional digits) as UTC into epoch milliseconds.
pub fn parse_timestamp(s: &str) -> Option<i64> {
    let (base, frac_ms) = match s.split_once('.') {
        Some((base, frac)) => {
            if frac.is_empty() || frac.len() > 3 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let scale = 10_i64.pow(3 - frac.len() as u32);
            (base, frac.parse::<i64>().ok()? * scale)
        }
        None => (s, 0),
    };
    let naive = NaiveDateTime::parse_from_str(base, TIMESTAMP_FORMAT).ok()?;
    Some(naive.and_utc().timestamp_millis() + frac_ms)
}

/// Inverse of [`parse_timestamp`]; the fraction is only written when nonzero.
pub fn format_timestamp(ms: i64) -> Result<String> {
    let dt = DateTime::from_timestamp_millis(ms)
        .ok_or_else(|| Error::Domain(format!("timestamp {ms} ms is out of range")))?;
    let mut out = dt.format(TIMESTAMP_FORMAT).to_string();
    let frac = ms.rem_euclid(1000);
    if frac != 0 {
        out.push_str(&format!(".{frac:03}"));
    }
    Ok(out)
}

fn is_blank(cell: &str) -> bool {
    cell.is_empty() || cell == "NaN"
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<DatabaseEventLog> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file)
}

pub fn read_csv<R: Read>(reader: R) -> Result<DatabaseEventLog> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = rdr.headers()?.clone();
    let column = |name: &str| -> Result<usize> {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Format {
                row: 1,
                message: format!("header lacks required column {name:?}"),
            })
    };
    let id_col = column(EVENT_ID)?;
    let act_col = column(EVENT_ACTIVITY)?;
    let ts_col = column(EVENT_TIMESTAMP)?;

    let mut class_cols: Vec<(usize, String)> = Vec::new();
    for (i, name) in header.iter().enumerate() {
        if i == id_col || i == act_col || i == ts_col {
            continue;
        }
        if name.is_empty() || [EVENT_ID, EVENT_ACTIVITY, EVENT_TIMESTAMP].contains(&name) {
            return Err(Error::Format {
                row: 1,
                message: format!("invalid class column name {name:?} at position {}", i + 1),
            });
        }
        if class_cols.iter().any(|(_, c)| c == name) {
            return Err(Error::Format {
                row: 1,
                message: format!("duplicate class column {name:?}"),
            });
        }
        class_cols.push((i, name.to_owned()));
    }

    let mut builder = DatabaseEventLog::builder();
    for (_, class) in &class_cols {
        builder.add_class(class);
    }

    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let with_row = |e: Error| match e {
            Error::Consistency { message, .. } => Error::Consistency { row, message },
            other => other,
        };

        let mut linked = class_cols
            .iter()
            .filter(|(i, _)| !is_blank(&record[*i]))
            .map(|(i, class)| (class.as_str(), &record[*i]));
        let object = linked.next();
        if linked.next().is_some() {
            return Err(Error::Format {
                row,
                message: "more than one non-blank class cell".into(),
            });
        }

        let (id, act, ts) = (&record[id_col], &record[act_col], &record[ts_col]);
        if id.is_empty() {
            // Object declaration without events.
            match object {
                Some((class, obj)) if act.is_empty() && ts.is_empty() => {
                    builder.add_object(obj, class).map_err(with_row)?;
                    continue;
                }
                _ => {
                    return Err(Error::Format {
                        row,
                        message: "blank event_id".into(),
                    })
                }
            }
        }
        if act.is_empty() {
            return Err(Error::Format {
                row,
                message: format!("event {id:?} has a blank activity"),
            });
        }
        let time_ms = parse_timestamp(ts).ok_or_else(|| Error::Timestamp {
            row,
            value: ts.to_owned(),
        })?;
        builder.add_event(id, act, time_ms).map_err(with_row)?;
        if let Some((class, obj)) = object {
            builder.add_object(obj, class).map_err(with_row)?;
            builder.link(id, obj)?;
        }
    }
    Ok(builder.build())
}

pub fn export_csv(log: &DatabaseEventLog, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(log, file)
}

pub fn write_csv<W: Write>(log: &DatabaseEventLog, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let n_classes = log.classes().len();
    let mut header = vec![EVENT_ID, EVENT_ACTIVITY, EVENT_TIMESTAMP];
    header.extend(log.classes().iter().map(String::as_str));
    wtr.write_record(&header)?;

    let eo = log.eo();
    let mut cursor = 0;
    let mut referenced = vec![false; log.objects().len()];
    for (idx, event) in log.events().iter().enumerate() {
        let ts = format_timestamp(event.time_ms)?;
        let mut row: Vec<&str> = vec![""; 3 + n_classes];
        row[0] = &event.id;
        row[1] = log.act(idx);
        row[2] = &ts;

        let start = cursor;
        while cursor < eo.len() && eo[cursor].0 == idx {
            cursor += 1;
        }
        if start == cursor {
            wtr.write_record(&row)?;
            continue;
        }
        for &(_, obj) in &eo[start..cursor] {
            referenced[obj] = true;
            let object = log.object(obj);
            row[3..].iter_mut().for_each(|c| *c = "");
            row[3 + object.class] = &object.id;
            wtr.write_record(&row)?;
        }
    }

    for (obj, _) in referenced.iter().enumerate().filter(|(_, r)| !**r) {
        let object = log.object(obj);
        let mut row: Vec<&str> = vec![""; 3 + n_classes];
        row[3 + object.class] = &object.id;
        wtr.write_record(&row)?;
    }
    wtr.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

pub fn export_classical_csv(log: &ClassicalEventLog, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_classical_csv(log, file)
}

/// Writes `case_id,activity,timestamp`, one row per case membership, events of
/// a case in the total order. Events shared by several cases are repeated.
pub fn write_classical_csv<W: Write>(log: &ClassicalEventLog, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["case_id", "activity", "timestamp"])?;
    for (case_id, members) in log.cases() {
        for &e in members {
            let ts = format_timestamp(log.events()[e].time_ms)?;
            wtr.write_record([case_id.as_str(), log.act(e), ts.as_str()])?;
        }
    }
    wtr.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}
