//! Scene description and the forward thermal model that turns it into a
//! sensor frame.
//!
//! Coordinates are continuous grid units: pixel `(r, c)` covers
//! `[r, r+1) × [c, c+1)` and is sampled at its center. Each heat emitter
//! produces an apparent temperature field that is flat over its footprint
//! and decays as `exp(-d² / 2σ²)` with the distance `d` outside it. The
//! pixel reads the hottest of the background and all emitters, plus sensor
//! noise, then goes through the sensor's quantizer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::frame::{quantize, ThermalFrame, GRID};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersonConfig {
    /// (row, col) of the body center.
    pub center: (f64, f64),
    /// Rotation of the long body axis away from the bed's long (row) axis.
    pub orientation_deg: f64,
    /// (along-body, across-body) semi-axes in grid units.
    pub semi_axes: (f64, f64),
    /// Apparent skin temperature seen by the sensor.
    pub skin_temp_c: f64,
}

impl PersonConfig {
    /// Half extents of the ellipse's bounding box, (rows, cols).
    pub fn half_extents(&self) -> (f64, f64) {
        let (a, b) = self.semi_axes;
        let t = self.orientation_deg.to_radians();
        let (s, c) = t.sin_cos();
        (
            (a * a * c * c + b * b * s * s).sqrt(),
            (a * a * s * s + b * b * c * c).sqrt(),
        )
    }

    pub fn fits_grid(&self) -> bool {
        let (hr, hc) = self.half_extents();
        let n = GRID as f64;
        let (r, c) = self.center;
        r - hr >= 0.0 && r + hr <= n && c - hc >= 0.0 && c + hc <= n
    }

    /// Distance from `(row, col)` to the ellipse, zero inside it.
    ///
    /// Measured along the ray from the center, which is exact on the axes
    /// and close enough elsewhere for a sensor this coarse.
    fn outside_distance(&self, row: f64, col: f64) -> f64 {
        let (a, b) = self.semi_axes;
        let dr = row - self.center.0;
        let dc = col - self.center.1;
        let (s, c) = self.orientation_deg.to_radians().sin_cos();
        let u = (dr * c + dc * s) / a;
        let v = (-dr * s + dc * c) / b;
        let rho = (u * u + v * v).sqrt();
        if rho <= 1.0 {
            0.0
        } else {
            (dr * dr + dc * dc).sqrt() * (1.0 - 1.0 / rho)
        }
    }

    fn validate(&self, what: &str) -> Result<()> {
        let (a, b) = self.semi_axes;
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::Config(format!("{what} semi-axes must be positive")));
        }
        if !(self.center.0.is_finite() && self.center.1.is_finite() && self.orientation_deg.is_finite()) {
            return Err(Error::Config(format!("{what} pose must be finite")));
        }
        Ok(())
    }
}

/// A small non-human heat emitter, e.g. a warm water bottle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSource {
    pub center: (f64, f64),
    pub radius: f64,
    pub temp_c: f64,
}

impl PointSource {
    fn outside_distance(&self, row: f64, col: f64) -> f64 {
        let dr = row - self.center.0;
        let dc = col - self.center.1;
        ((dr * dr + dc * dc).sqrt() - self.radius).max(0.0)
    }
}

/// How much of the body's excess heat shows through a duvet over time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuvetModel {
    /// Fraction visible right after covering.
    pub initial_transmission: f64,
    /// Warm-up time constant in minutes.
    pub time_constant_min: f64,
}

impl Default for DuvetModel {
    fn default() -> Self {
        Self {
            initial_transmission: 0.35,
            time_constant_min: 4.0,
        }
    }
}

impl DuvetModel {
    /// `1 − (1 − f0)·exp(−t/τ)`: starts at `f0`, rises monotonically to 1.
    pub fn factor(&self, minutes: f64) -> Result<f64> {
        if !minutes.is_finite() || minutes < 0.0 {
            return Err(Error::InvalidInput(format!(
                "duvet time must be a non-negative number of minutes, got {minutes}"
            )));
        }
        Ok(1.0 - (1.0 - self.initial_transmission) * (-minutes / self.time_constant_min).exp())
    }

    fn validate(&self) -> Result<()> {
        let f0 = self.initial_transmission;
        if !(f0 > 0.0 && f0 <= 1.0) {
            return Err(Error::Config(format!("duvet initial transmission {f0} outside (0, 1]")));
        }
        if !(self.time_constant_min > 0.0 && self.time_constant_min.is_finite()) {
            return Err(Error::Config("duvet time constant must be positive".into()));
        }
        Ok(())
    }
}

/// Duvet factor under the default warm-up model.
pub fn duvet_factor(minutes: f64) -> Result<f64> {
    DuvetModel::default().factor(minutes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub room_temp_c: f64,
    pub person: Option<PersonConfig>,
    pub heat_sources: Vec<PointSource>,
    pub duvet_minutes: Option<f64>,
    pub noise_sigma: f64,
    pub seed: u64,
    pub duvet: DuvetModel,
    /// Someone standing next to the bed, mostly outside the field of view.
    pub bystander: Option<PersonConfig>,
    /// Length scale of the heat falloff outside an emitter, grid units.
    pub falloff_sigma: f64,
}

impl SceneConfig {
    pub fn empty_room(room_temp_c: f64, noise_sigma: f64, seed: u64) -> Self {
        Self {
            room_temp_c,
            person: None,
            heat_sources: Vec::new(),
            duvet_minutes: None,
            noise_sigma,
            seed,
            duvet: DuvetModel::default(),
            bystander: None,
            falloff_sigma: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(15.0..=35.0).contains(&self.room_temp_c) {
            return Err(Error::Config(format!(
                "room temperature {} °C outside [15, 35]",
                self.room_temp_c
            )));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::Config("noise sigma must be a finite value ≥ 0".into()));
        }
        if !(self.falloff_sigma > 0.0 && self.falloff_sigma.is_finite()) {
            return Err(Error::Config("falloff sigma must be positive".into()));
        }
        self.duvet.validate()?;
        match (&self.person, self.duvet_minutes) {
            (None, Some(_)) => {
                return Err(Error::Config("duvet time given without a person".into()));
            }
            (_, Some(t)) if !(t >= 0.0 && t.is_finite()) => {
                return Err(Error::Config(format!("duvet time {t} must be ≥ 0")));
            }
            _ => {}
        }
        if let Some(p) = &self.person {
            p.validate("person")?;
            if !(28.0..=37.0).contains(&p.skin_temp_c) {
                return Err(Error::Config(format!(
                    "skin temperature {} °C outside [28, 37]",
                    p.skin_temp_c
                )));
            }
            if !p.fits_grid() {
                return Err(Error::Config("person footprint extends past the grid".into()));
            }
        }
        if let Some(p) = &self.bystander {
            p.validate("bystander")?;
        }
        for s in &self.heat_sources {
            if !(s.temp_c <= 45.0 && s.temp_c.is_finite()) {
                return Err(Error::Config(format!("heat source at {} °C exceeds 45 °C", s.temp_c)));
            }
            if !(s.radius > 0.0 && s.radius.is_finite()) {
                return Err(Error::Config("heat source radius must be positive".into()));
            }
        }
        Ok(())
    }

    fn falloff(&self, distance: f64) -> f64 {
        let z = distance / self.falloff_sigma;
        (-0.5 * z * z).exp()
    }

    /// Apparent temperature at a point before noise and quantization.
    pub fn temperature_at(&self, row: f64, col: f64) -> Result<f64> {
        let room = self.room_temp_c;
        let mut t = room;
        if let Some(p) = &self.person {
            let transmission = match self.duvet_minutes {
                Some(m) => self.duvet.factor(m)?,
                None => 1.0,
            };
            let effective = room + (p.skin_temp_c - room) * transmission;
            t = t.max(room + (effective - room) * self.falloff(p.outside_distance(row, col)));
        }
        if let Some(p) = &self.bystander {
            t = t.max(room + (p.skin_temp_c - room) * self.falloff(p.outside_distance(row, col)));
        }
        for s in &self.heat_sources {
            t = t.max(room + (s.temp_c - room) * self.falloff(s.outside_distance(row, col)));
        }
        Ok(t)
    }
}

/// Renders one sensor frame. Deterministic in `cfg.seed`.
pub fn render(cfg: &SceneConfig) -> Result<ThermalFrame> {
    cfg.validate()?;
    let mut raw = [[0.0; GRID]; GRID];
    for (r, row) in raw.iter_mut().enumerate() {
        for (c, px) in row.iter_mut().enumerate() {
            *px = cfg.temperature_at(r as f64 + 0.5, c as f64 + 0.5)?;
        }
    }
    if cfg.noise_sigma > 0.0 {
        let noise = Normal::new(0.0, cfg.noise_sigma)
            .map_err(|e| Error::Config(format!("noise distribution: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for px in raw.iter_mut().flatten() {
            *px += noise.sample(&mut rng);
        }
    }
    quantize(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn centered_person(skin: f64) -> PersonConfig {
        PersonConfig {
            center: (4.0, 4.0),
            orientation_deg: 0.0,
            semi_axes: (2.8, 1.2),
            skin_temp_c: skin,
        }
    }

    #[test]
    fn noiseless_empty_room_is_flat() {
        let f = render(&SceneConfig::empty_room(22.0, 0.0, 1)).unwrap();
        assert!(f.pixels().iter().all(|&v| v == 22.0));
    }

    #[test]
    fn empty_room_with_noise_stays_near_background() {
        for seed in 0..1000 {
            let f = render(&SceneConfig::empty_room(20.5, 0.1, seed)).unwrap();
            assert!(f.pixels().iter().all(|&v| (20.0..=21.25).contains(&v)), "seed {seed}");
            assert!(f.max() < 23.0);
        }
    }

    #[test]
    fn uncovered_person_is_hot() {
        let mut cfg = SceneConfig::empty_room(20.5, 0.1, 3);
        cfg.person = Some(centered_person(33.0));
        assert!(render(&cfg).unwrap().max() >= 28.0);
    }

    #[test]
    fn duvet_factor_shape() {
        assert!((duvet_factor(0.0).unwrap() - 0.35).abs() < 1e-12);
        assert!(duvet_factor(60.0).unwrap() > 0.99);
        assert!(duvet_factor(5.0).unwrap() < duvet_factor(10.0).unwrap());
        assert!(duvet_factor(-1.0).is_err());
        assert!(duvet_factor(f64::NAN).is_err());
    }

    #[test]
    fn duvet_dims_the_person() {
        let mut cfg = SceneConfig::empty_room(20.5, 0.0, 0);
        cfg.person = Some(centered_person(32.0));
        let bare = render(&cfg).unwrap().max();
        cfg.duvet_minutes = Some(0.0);
        let covered = render(&cfg).unwrap().max();
        assert!(covered < bare);
        // 20.5 + 11.5 × 0.35 = 24.525, quantized.
        assert_eq!(covered, 24.5);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = SceneConfig::empty_room(20.5, 0.1, 0);
        cfg.duvet_minutes = Some(5.0);
        assert!(matches!(render(&cfg), Err(Error::Config(_))));

        let cfg = SceneConfig::empty_room(40.0, 0.1, 0);
        assert!(render(&cfg).is_err());

        let mut cfg = SceneConfig::empty_room(20.5, 0.1, 0);
        cfg.person = Some(PersonConfig {
            center: (0.5, 4.0),
            ..centered_person(32.0)
        });
        assert!(render(&cfg).is_err());

        let mut cfg = SceneConfig::empty_room(20.5, 0.1, 0);
        cfg.heat_sources.push(PointSource {
            center: (4.0, 4.0),
            radius: 0.3,
            temp_c: 50.0,
        });
        assert!(render(&cfg).is_err());
    }

    #[test]
    fn render_is_deterministic() {
        let mut cfg = SceneConfig::empty_room(20.7, 0.1, 99);
        cfg.person = Some(centered_person(31.0));
        assert_eq!(render(&cfg).unwrap(), render(&cfg).unwrap());
    }
}
