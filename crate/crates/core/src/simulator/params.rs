//! Generation ranges for the synthetic datasets, loadable from a flat
//! `key = value` file.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatorParams {
    pub baseline_room_min: f64,
    pub baseline_room_max: f64,
    pub hot_room_min: f64,
    pub hot_room_max: f64,
    pub skin_min: f64,
    pub skin_max: f64,
    pub noise_sigma: f64,
    pub duvet_f0: f64,
    pub duvet_tau_min: f64,
    pub person_row_min: f64,
    pub person_row_max: f64,
    pub person_col_min: f64,
    pub person_col_max: f64,
    pub orientation_max_deg: f64,
    pub semi_major_min: f64,
    pub semi_major_max: f64,
    pub semi_minor_min: f64,
    pub semi_minor_max: f64,
    pub falloff_sigma: f64,
    pub bottle_temp: f64,
    pub bottle_radius: f64,
    pub bottle_row_min: f64,
    pub bottle_row_max: f64,
    pub bottle_col_min: f64,
    pub bottle_col_max: f64,
    /// Probability that a no-person frame has someone standing at the edge
    /// of the view.
    pub edge_person_prob: f64,
}

impl Default for SimulatorParams {
    fn default() -> Self {
        Self {
            baseline_room_min: 20.0,
            baseline_room_max: 21.0,
            hot_room_min: 24.0,
            hot_room_max: 25.0,
            skin_min: 30.0,
            skin_max: 34.0,
            noise_sigma: 0.1,
            duvet_f0: 0.35,
            duvet_tau_min: 4.0,
            // The bed (0.9 × 2 m) spans roughly 3 × 7 pixels of the 2.3 m
            // square footprint, centered, long axis along the rows.
            person_row_min: 3.2,
            person_row_max: 4.8,
            person_col_min: 3.4,
            person_col_max: 4.6,
            orientation_max_deg: 20.0,
            semi_major_min: 2.4,
            semi_major_max: 3.0,
            semi_minor_min: 1.0,
            semi_minor_max: 1.4,
            falloff_sigma: 1.0,
            bottle_temp: 37.0,
            bottle_radius: 0.3,
            bottle_row_min: 1.0,
            bottle_row_max: 7.0,
            bottle_col_min: 2.5,
            bottle_col_max: 5.5,
            edge_person_prob: 0.0,
        }
    }
}

macro_rules! fields {
    ($self:ident, $($name:ident),* $(,)?) => {
        [$((stringify!($name), &$self.$name)),*]
    };
}

macro_rules! fields_mut {
    ($self:ident, $($name:ident),* $(,)?) => {
        [$((stringify!($name), &mut $self.$name)),*]
    };
}

macro_rules! all_fields {
    ($mac:ident, $self:ident) => {
        $mac!(
            $self,
            baseline_room_min,
            baseline_room_max,
            hot_room_min,
            hot_room_max,
            skin_min,
            skin_max,
            noise_sigma,
            duvet_f0,
            duvet_tau_min,
            person_row_min,
            person_row_max,
            person_col_min,
            person_col_max,
            orientation_max_deg,
            semi_major_min,
            semi_major_max,
            semi_minor_min,
            semi_minor_max,
            falloff_sigma,
            bottle_temp,
            bottle_radius,
            bottle_row_min,
            bottle_row_max,
            bottle_col_min,
            bottle_col_max,
            edge_person_prob,
        )
    };
}

impl SimulatorParams {
    /// Key/value pairs in declaration order.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        all_fields!(fields, self).iter().map(|(k, v)| (*k, **v)).collect()
    }

    /// Parses a `key = value` file on top of the defaults. Blank lines and
    /// `#` comments are ignored; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut params = Self::default();
        let mut seen = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::format(line_no, line, "expected `key = value`"))?;
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::format(line_no, key, format!("not a number: `{}`", value.trim())))?;
            if seen.contains(&key.to_string()) {
                return Err(Error::format(line_no, key, "key given twice"));
            }
            seen.push(key.to_string());
            let mut fields = all_fields!(fields_mut, params);
            let slot = fields
                .iter_mut()
                .find(|(k, _)| *k == key)
                .ok_or_else(|| Error::format(line_no, key, "unknown simulator parameter"))?;
            *slot.1 = value;
        }
        params.validate()?;
        Ok(params)
    }

    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries() {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((k, v)) = self.entries().into_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Config(format!("{k} = {v} is not finite")));
        }
        let ranges = [
            ("baseline_room", self.baseline_room_min, self.baseline_room_max),
            ("hot_room", self.hot_room_min, self.hot_room_max),
            ("skin", self.skin_min, self.skin_max),
            ("person_row", self.person_row_min, self.person_row_max),
            ("person_col", self.person_col_min, self.person_col_max),
            ("semi_major", self.semi_major_min, self.semi_major_max),
            ("semi_minor", self.semi_minor_min, self.semi_minor_max),
            ("bottle_row", self.bottle_row_min, self.bottle_row_max),
            ("bottle_col", self.bottle_col_min, self.bottle_col_max),
        ];
        for (name, lo, hi) in ranges {
            if lo > hi {
                return Err(Error::Config(format!("{name}_min {lo} exceeds {name}_max {hi}")));
            }
        }
        if !(0.0..=1.0).contains(&self.edge_person_prob) {
            return Err(Error::Config("edge_person_prob must be a probability".into()));
        }
        if self.semi_minor_min <= 0.0 {
            return Err(Error::Config("semi-axes must be positive".into()));
        }
        Ok(())
    }
}
