//! Synthetic stand-in for the recorded datasets: a main set under constant
//! conditions and a variational set under hot-room, warm-object, and duvet
//! perturbations.
//!
//! Every frame draws from its own seeded stream keyed by its position in
//! the output, so generation parallelizes without changing the result.

mod params;
mod scene;

pub use params::SimulatorParams;
pub use scene::{duvet_factor, render, DuvetModel, PersonConfig, PointSource, SceneConfig};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::{ConditionTag, Dataset, Label, LabeledSample};
use crate::error::{Error, Result};
use crate::rng;

/// Main-set capture alternates this many frames of one class with the same
/// number of the other.
const CAPTURE_BLOCK: usize = 20;

#[derive(Debug, Clone, Copy)]
struct FrameSpec {
    label: Label,
    condition: ConditionTag,
    hot_room: bool,
    bottle: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Simulator {
    pub params: SimulatorParams,
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

impl Simulator {
    pub fn new(params: SimulatorParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params })
    }

    fn duvet_model(&self) -> DuvetModel {
        DuvetModel {
            initial_transmission: self.params.duvet_f0,
            time_constant_min: self.params.duvet_tau_min,
        }
    }

    fn random_person(&self, rng: &mut ChaCha8Rng) -> PersonConfig {
        let p = &self.params;
        PersonConfig {
            center: (
                uniform(rng, p.person_row_min, p.person_row_max),
                uniform(rng, p.person_col_min, p.person_col_max),
            ),
            orientation_deg: uniform(rng, -p.orientation_max_deg, p.orientation_max_deg),
            semi_axes: (
                uniform(rng, p.semi_major_min, p.semi_major_max),
                uniform(rng, p.semi_minor_min, p.semi_minor_max),
            ),
            skin_temp_c: uniform(rng, p.skin_min, p.skin_max),
        }
    }

    /// Someone standing beside the bed: body center just past the left or
    /// right border so only the outermost columns warm up.
    fn random_bystander(&self, rng: &mut ChaCha8Rng) -> PersonConfig {
        let p = &self.params;
        let col = if rng.random_bool(0.5) {
            uniform(rng, -1.8, -1.2)
        } else {
            uniform(rng, 9.2, 9.8)
        };
        PersonConfig {
            center: (uniform(rng, 2.0, 6.0), col),
            orientation_deg: 0.0,
            semi_axes: (1.0, 1.0),
            skin_temp_c: uniform(rng, p.skin_min, p.skin_max),
        }
    }

    fn scene_for(&self, spec: FrameSpec, rng: &mut ChaCha8Rng) -> SceneConfig {
        let p = &self.params;
        let room = if spec.hot_room {
            uniform(rng, p.hot_room_min, p.hot_room_max)
        } else {
            uniform(rng, p.baseline_room_min, p.baseline_room_max)
        };
        let mut scene = SceneConfig::empty_room(room, p.noise_sigma, 0);
        scene.duvet = self.duvet_model();
        scene.falloff_sigma = p.falloff_sigma;
        match spec.label {
            Label::Person => {
                scene.person = Some(self.random_person(rng));
                scene.duvet_minutes = spec.condition.duvet_minutes();
            }
            Label::NoPerson => {
                if p.edge_person_prob > 0.0 && rng.random_bool(p.edge_person_prob) {
                    scene.bystander = Some(self.random_bystander(rng));
                }
            }
        }
        if spec.bottle {
            scene.heat_sources.push(PointSource {
                center: (
                    uniform(rng, p.bottle_row_min, p.bottle_row_max),
                    uniform(rng, p.bottle_col_min, p.bottle_col_max),
                ),
                radius: p.bottle_radius,
                temp_c: p.bottle_temp,
            });
        }
        scene.seed = rng.random();
        scene
    }

    fn generate(&self, name: &str, domain: u64, specs: &[FrameSpec], seed: u64) -> Result<Dataset> {
        let samples = specs
            .par_iter()
            .enumerate()
            .map(|(i, &spec)| {
                let mut rng = rng::stream(seed, domain, i as u64);
                let frame = render(&self.scene_for(spec, &mut rng))?;
                Ok(LabeledSample::new(frame, spec.label, spec.condition))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset::new(name, samples))
    }

    /// `n_per_class` frames of each class under baseline conditions, in
    /// alternating capture blocks starting with `Person`.
    pub fn generate_main(&self, n_per_class: usize, seed: u64) -> Result<Dataset> {
        if n_per_class == 0 {
            return Err(Error::Parameter("n_per_class must be at least 1".into()));
        }
        let spec = |label| FrameSpec {
            label,
            condition: ConditionTag::Baseline,
            hot_room: false,
            bottle: false,
        };
        let mut specs = Vec::with_capacity(2 * n_per_class);
        let mut remaining = [n_per_class; 2];
        let mut label = Label::Person;
        while remaining.iter().any(|&r| r > 0) {
            let take = remaining[label.index()].min(CAPTURE_BLOCK);
            specs.extend(std::iter::repeat_n(spec(label), take));
            remaining[label.index()] -= take;
            label = match label {
                Label::Person => Label::NoPerson,
                Label::NoPerson => Label::Person,
            };
        }
        self.generate("main", rng::domain::MAIN, &specs, seed)
    }

    /// Three perturbations with `n_per_cell` frames per class each:
    /// hot room, warm water bottle on the bed, and duvet. Duvet frames with
    /// a person are split evenly across 0, 5 and 10 minutes of warm-up;
    /// duvet frames without a person carry the 0-minute tag.
    pub fn generate_variational(&self, n_per_cell: usize, seed: u64) -> Result<Dataset> {
        if n_per_cell == 0 || !n_per_cell.is_multiple_of(3) {
            return Err(Error::Parameter(format!(
                "n_per_cell must be a positive multiple of 3, got {n_per_cell}"
            )));
        }
        let spec = |label, condition, hot_room, bottle| FrameSpec {
            label,
            condition,
            hot_room,
            bottle,
        };
        let mut specs = Vec::with_capacity(6 * n_per_cell);
        for label in [Label::Person, Label::NoPerson] {
            specs.extend(std::iter::repeat_n(
                spec(label, ConditionTag::HotRoom, true, false),
                n_per_cell,
            ));
        }
        for label in [Label::Person, Label::NoPerson] {
            specs.extend(std::iter::repeat_n(
                spec(label, ConditionTag::WaterBottle, false, true),
                n_per_cell,
            ));
        }
        for tag in [ConditionTag::Duvet0min, ConditionTag::Duvet5min, ConditionTag::Duvet10min] {
            specs.extend(std::iter::repeat_n(
                spec(Label::Person, tag, false, false),
                n_per_cell / 3,
            ));
        }
        specs.extend(std::iter::repeat_n(
            spec(Label::NoPerson, ConditionTag::Duvet0min, false, false),
            n_per_cell,
        ));
        self.generate("variational", rng::domain::VARIATIONAL, &specs, seed)
    }
}

pub fn generate_main(n_per_class: usize, seed: u64) -> Result<Dataset> {
    Simulator::default().generate_main(n_per_class, seed)
}

pub fn generate_variational(n_per_cell: usize, seed: u64) -> Result<Dataset> {
    Simulator::default().generate_variational(n_per_cell, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_of(ds: &Dataset, label: Label, tag: ConditionTag) -> Vec<f64> {
        ds.samples
            .iter()
            .filter(|s| s.label == label && s.condition == tag)
            .map(|s| s.frame.max())
            .collect()
    }

    fn mean(v: &[f64]) -> f64 {
        v.iter().sum::<f64>() / v.len() as f64
    }

    #[test]
    fn main_set_counts() {
        let ds = generate_main(240, 7).unwrap();
        assert_eq!(ds.len(), 480);
        assert_eq!(ds.class_counts(), [240, 240]);
        assert!(ds.samples.iter().all(|s| s.condition == ConditionTag::Baseline));
        assert_eq!(ds.samples[0].label, Label::Person);
        assert_eq!(ds.samples[20].label, Label::NoPerson);
    }

    #[test]
    fn tiny_main_set_is_reproducible() {
        let a = generate_main(1, 42).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a, generate_main(1, 42).unwrap());
        assert_ne!(a, generate_main(1, 43).unwrap());
    }

    #[test]
    fn main_classes_separate_on_max_pixel() {
        let ds = generate_main(240, 3).unwrap();
        let persons = max_of(&ds, Label::Person, ConditionTag::Baseline);
        let empties = max_of(&ds, Label::NoPerson, ConditionTag::Baseline);
        let coldest_person = persons.iter().copied().fold(f64::MAX, f64::min);
        let hottest_empty = empties.iter().copied().fold(f64::MIN, f64::max);
        assert!(coldest_person > hottest_empty + 2.0, "{coldest_person} vs {hottest_empty}");
    }

    #[test]
    fn variational_layout() {
        let ds = generate_variational(30, 5).unwrap();
        assert_eq!(ds.len(), 180);
        let count = |label, tag| {
            ds.samples
                .iter()
                .filter(|s| s.label == label && s.condition == tag)
                .count()
        };
        assert_eq!(count(Label::Person, ConditionTag::HotRoom), 30);
        assert_eq!(count(Label::NoPerson, ConditionTag::HotRoom), 30);
        assert_eq!(count(Label::Person, ConditionTag::WaterBottle), 30);
        assert_eq!(count(Label::NoPerson, ConditionTag::WaterBottle), 30);
        assert_eq!(count(Label::Person, ConditionTag::Duvet0min), 10);
        assert_eq!(count(Label::Person, ConditionTag::Duvet5min), 10);
        assert_eq!(count(Label::Person, ConditionTag::Duvet10min), 10);
        assert_eq!(count(Label::NoPerson, ConditionTag::Duvet0min), 30);
    }

    #[test]
    fn variational_needs_multiple_of_three() {
        assert!(matches!(generate_variational(20, 1), Err(Error::Parameter(_))));
        assert!(generate_variational(0, 1).is_err());
    }

    #[test]
    fn hot_room_and_bottle_signatures() {
        let ds = generate_variational(30, 9).unwrap();
        let main = generate_main(60, 9).unwrap();
        let baseline_empty_max = max_of(&main, Label::NoPerson, ConditionTag::Baseline)
            .into_iter()
            .fold(f64::MIN, f64::max);
        for s in ds.samples.iter().filter(|s| s.label == Label::NoPerson) {
            match s.condition {
                ConditionTag::HotRoom => {
                    let m = s.frame.mean();
                    assert!((23.5..=25.5).contains(&m), "hot room mean {m}");
                }
                ConditionTag::WaterBottle => {
                    let m = s.frame.max();
                    assert!((30.0..=38.0).contains(&m), "bottle max {m}");
                    assert!(m > baseline_empty_max);
                }
                _ => {}
            }
        }
    }

    #[test]
    fn fresh_duvet_has_smallest_contrast() {
        // Excludes the bottle condition, whose hot object dominates the
        // max pixel of both classes.
        let ds = generate_variational(30, 2).unwrap();
        let main = generate_main(60, 2).unwrap();
        let duvet_empty = mean(&max_of(&ds, Label::NoPerson, ConditionTag::Duvet0min));
        let gap = |persons: Vec<f64>, empties: f64| mean(&persons) - empties;
        let duvet0 = gap(max_of(&ds, Label::Person, ConditionTag::Duvet0min), duvet_empty);
        let others = [
            gap(max_of(&ds, Label::Person, ConditionTag::Duvet5min), duvet_empty),
            gap(max_of(&ds, Label::Person, ConditionTag::Duvet10min), duvet_empty),
            gap(
                max_of(&ds, Label::Person, ConditionTag::HotRoom),
                mean(&max_of(&ds, Label::NoPerson, ConditionTag::HotRoom)),
            ),
            gap(
                max_of(&main, Label::Person, ConditionTag::Baseline),
                mean(&max_of(&main, Label::NoPerson, ConditionTag::Baseline)),
            ),
        ];
        assert!(others.iter().all(|&g| duvet0 < g), "{duvet0} vs {others:?}");
    }

    #[test]
    fn bystander_only_touches_the_border() {
        let params = SimulatorParams {
            edge_person_prob: 1.0,
            noise_sigma: 0.0,
            ..Default::default()
        };
        let sim = Simulator::new(params).unwrap();
        let ds = sim.generate_main(20, 4).unwrap();
        for s in ds.samples.iter().filter(|s| s.label == Label::NoPerson) {
            for r in 0..8 {
                for c in 2..6 {
                    assert!(s.frame.get(r, c) <= 21.5);
                }
            }
        }
    }
}
