//! Bed-exit alerting over a stream of per-frame occupancy labels.
//!
//! A label only changes the occupancy state after `debounce_frames`
//! consecutive frames agree on it; the new state is dated from the first
//! of those frames. Events:
//!
//! - `Return` when a confirmed `Empty` period ends in `Occupied`.
//! - `BedExit` once per absence, when an `Empty` period that followed
//!   `Occupied` has lasted `long_absence` seconds.
//! - `FrequentExits` when an exit pushes the count of exits within the
//!   trailing `window` above `max_exits`.
//!
//! Timestamps are integer seconds and must strictly increase.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonitorConfig {
    pub debounce_frames: u32,
    pub long_absence_s: i64,
    pub window_s: i64,
    pub max_exits: usize,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        Self {
            debounce_frames: 3,
            long_absence_s: 15 * 60,
            window_s: 8 * 3600,
            max_exits: 5,
        }
    }
}

impl MonitorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.debounce_frames == 0 {
            return Err(Error::Config("debounce must be at least one frame".into()));
        }
        if self.long_absence_s < 0 || self.window_s <= 0 {
            return Err(Error::Config("absence threshold and window must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Occupancy {
    Occupied,
    Empty,
    Unknown,
}

impl From<Label> for Occupancy {
    fn from(l: Label) -> Self {
        match l {
            Label::Person => Occupancy::Occupied,
            Label::NoPerson => Occupancy::Empty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    BedExit,
    FrequentExits,
    Return,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::BedExit => "bed_exit",
            EventKind::FrequentExits => "frequent_exits",
            EventKind::Return => "return",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [EventKind::BedExit, EventKind::FrequentExits, EventKind::Return]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown event kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    pub timestamp: i64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorState {
    pub current: Occupancy,
    /// Start of the current state; `None` until the first frame.
    pub since: Option<i64>,
    /// Recent exit times, oldest first.
    pub exit_count_window: VecDeque<i64>,
    /// Consecutive frames disagreeing with `current`.
    pub debounce: u32,
    candidate: Option<(Occupancy, i64)>,
    last_ts: Option<i64>,
    /// The current `Empty` period began with the person leaving.
    absence_tracked: bool,
    absence_alerted: bool,
}

impl Default for MonitorState {
    fn default() -> Self {
        Self {
            current: Occupancy::Unknown,
            since: None,
            exit_count_window: VecDeque::new(),
            debounce: 0,
            candidate: None,
            last_ts: None,
            absence_tracked: false,
            absence_alerted: false,
        }
    }
}

impl MonitorState {
    /// Consumes one classified frame and returns the successor state with
    /// the events it raised.
    pub fn step(&self, label: Label, ts: i64, cfg: &MonitorConfig) -> Result<(MonitorState, Vec<Event>)> {
        let mut next = self.clone();
        let events = next.advance(label, ts, cfg)?;
        Ok((next, events))
    }

    fn advance(&mut self, label: Label, ts: i64, cfg: &MonitorConfig) -> Result<Vec<Event>> {
        if let Some(prev) = self.last_ts {
            if ts <= prev {
                return Err(Error::Stream(format!(
                    "timestamp {ts} does not follow {prev}"
                )));
            }
        }
        self.last_ts = Some(ts);
        let mut events = Vec::new();
        let observed = Occupancy::from(label);

        if observed == self.current {
            self.candidate = None;
            self.debounce = 0;
        } else {
            match self.candidate {
                Some((c, _)) if c == observed => self.debounce += 1,
                _ => {
                    self.candidate = Some((observed, ts));
                    self.debounce = 1;
                }
            }
            if self.debounce >= cfg.debounce_frames {
                let started = self.candidate.map_or(ts, |(_, t)| t);
                self.transition(observed, started, ts, cfg, &mut events);
            }
        }

        if self.current == Occupancy::Empty && self.absence_tracked && !self.absence_alerted {
            if let Some(since) = self.since {
                if ts - since >= cfg.long_absence_s {
                    self.absence_alerted = true;
                    events.push(Event {
                        timestamp: ts,
                        kind: EventKind::BedExit,
                    });
                }
            }
        }
        Ok(events)
    }

    fn transition(&mut self, to: Occupancy, started: i64, ts: i64, cfg: &MonitorConfig, events: &mut Vec<Event>) {
        let from = self.current;
        self.current = to;
        self.since = Some(started);
        self.candidate = None;
        self.debounce = 0;
        match (from, to) {
            (Occupancy::Occupied, Occupancy::Empty) => {
                self.absence_tracked = true;
                self.absence_alerted = false;
                self.exit_count_window.push_back(started);
                while self
                    .exit_count_window
                    .front()
                    .is_some_and(|&t| t < ts - cfg.window_s)
                {
                    self.exit_count_window.pop_front();
                }
                if self.exit_count_window.len() > cfg.max_exits {
                    events.push(Event {
                        timestamp: ts,
                        kind: EventKind::FrequentExits,
                    });
                }
            }
            (Occupancy::Empty, Occupancy::Occupied) => {
                self.absence_tracked = false;
                events.push(Event {
                    timestamp: ts,
                    kind: EventKind::Return,
                });
            }
            _ => self.absence_tracked = false,
        }
    }
}

/// Runs a whole `(timestamp, label)` sequence through a fresh monitor.
pub fn replay<I>(frames: I, cfg: &MonitorConfig) -> Result<Vec<Event>>
where
    I: IntoIterator<Item = (i64, Label)>,
{
    cfg.validate()?;
    let mut state = MonitorState::default();
    let mut events = Vec::new();
    for (ts, label) in frames {
        events.extend(state.advance(label, ts, cfg)?);
    }
    Ok(events)
}
