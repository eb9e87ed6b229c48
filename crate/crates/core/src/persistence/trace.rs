//! Monitor input traces and event logs.
//!
//! Input: `timestamp,label` with one classified frame per line.
//! Output: `timestamp,event_kind,bed_id` with one event per line.

use serde::{Deserialize, Serialize};

use super::{parse_canonical_int, Lines};
use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::monitor::{Event, EventKind};

const TRACE_HEADER: &str = "timestamp,label";
const EVENTS_HEADER: &str = "timestamp,event_kind,bed_id";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventRecord {
    pub timestamp: i64,
    pub event_kind: EventKind,
    pub bed_id: String,
}

impl EventRecord {
    pub fn new(event: Event, bed_id: &str) -> Self {
        Self {
            timestamp: event.timestamp,
            event_kind: event.kind,
            bed_id: bed_id.to_string(),
        }
    }
}

pub fn write_trace(frames: &[(i64, Label)]) -> String {
    let mut out = format!("{TRACE_HEADER}\n");
    for (ts, label) in frames {
        out.push_str(&format!("{ts},{label}\n"));
    }
    out
}

pub fn read_trace(text: &str) -> Result<Vec<(i64, Label)>> {
    let mut lines = Lines::new(text)?;
    expect_header(&mut lines, TRACE_HEADER)?;
    let mut frames = Vec::with_capacity(lines.remaining());
    while lines.remaining() > 0 {
        let line = lines.next_line("frame")?;
        let n = lines.line_no();
        let (ts, label) = line
            .split_once(',')
            .ok_or_else(|| Error::format(n, "frame", "expected `timestamp,label`"))?;
        let ts = parse_canonical_int(n, "timestamp", ts)?;
        let label = label.parse().map_err(|e| Error::format(n, "label", e))?;
        frames.push((ts, label));
    }
    Ok(frames)
}

pub fn write_events(events: &[EventRecord]) -> String {
    let mut out = format!("{EVENTS_HEADER}\n");
    for e in events {
        out.push_str(&format!("{},{},{}\n", e.timestamp, e.event_kind, e.bed_id));
    }
    out
}

pub fn read_events(text: &str) -> Result<Vec<EventRecord>> {
    let mut lines = Lines::new(text)?;
    expect_header(&mut lines, EVENTS_HEADER)?;
    let mut events = Vec::with_capacity(lines.remaining());
    while lines.remaining() > 0 {
        let line = lines.next_line("event")?;
        let n = lines.line_no();
        let fields: Vec<&str> = line.split(',').collect();
        let [ts, kind, bed] = fields[..] else {
            return Err(Error::format(n, "event", "expected `timestamp,event_kind,bed_id`"));
        };
        if bed.is_empty() {
            return Err(Error::format(n, "bed_id", "empty bed id"));
        }
        events.push(EventRecord {
            timestamp: parse_canonical_int(n, "timestamp", ts)?,
            event_kind: kind.parse().map_err(|e| Error::format(n, "event_kind", e))?,
            bed_id: bed.to_string(),
        });
    }
    Ok(events)
}

fn expect_header(lines: &mut Lines, header: &str) -> Result<()> {
    let found = lines.next_line("header")?;
    if found != header {
        return Err(Error::format(1, "header", format!("expected `{header}`, found `{found}`")));
    }
    Ok(())
}
