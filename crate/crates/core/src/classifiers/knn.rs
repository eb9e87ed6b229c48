//! Lazy k-nearest-neighbour classifier over raw °C feature vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::{Classifier, FeatureVector};
use crate::dataset::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weighting {
    Uniform,
    /// Votes weighted by inverse Euclidean distance.
    Distance,
}

impl Weighting {
    pub fn as_str(self) -> &'static str {
        match self {
            Weighting::Uniform => "uniform",
            Weighting::Distance => "distance",
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Weighting {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "uniform" => Ok(Weighting::Uniform),
            "distance" => Ok(Weighting::Distance),
            other => Err(format!("unknown weighting `{other}` (uniform|distance)")),
        }
    }
}

/// Label returned when the vote is tied.
pub const VOTE_TIE: Label = Label::NoPerson;

#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    k: usize,
    weighting: Weighting,
    features: Vec<FeatureVector>,
    labels: Vec<Label>,
}

pub fn train_knn(
    features: &[FeatureVector],
    labels: &[Label],
    k: usize,
    weighting: Weighting,
) -> Result<KnnModel> {
    if features.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} feature vectors but {} labels",
            features.len(),
            labels.len()
        )));
    }
    if k == 0 || k > features.len() {
        return Err(Error::Parameter(format!(
            "k = {k} must lie in 1..={}",
            features.len()
        )));
    }
    Ok(KnnModel {
        k,
        weighting,
        features: features.to_vec(),
        labels: labels.to_vec(),
    })
}

fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

fn majority(person: f64, no_person: f64) -> Label {
    if person > no_person {
        Label::Person
    } else if no_person > person {
        Label::NoPerson
    } else {
        VOTE_TIE
    }
}

impl KnnModel {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn features(&self) -> &[FeatureVector] {
        &self.features
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// The `k` nearest stored samples as `(distance, index)`, nearest
    /// first; equal distances go to the lower stored index.
    pub fn neighbors(&self, x: &FeatureVector) -> Vec<(f64, usize)> {
        let mut all: Vec<(f64, usize)> = self
            .features
            .iter()
            .enumerate()
            .map(|(i, f)| (super::kernel::squared_distance(f, x).sqrt(), i))
            .collect();
        if self.k < all.len() {
            all.select_nth_unstable_by(self.k - 1, by_distance_then_index);
            all.truncate(self.k);
        }
        all.sort_by(by_distance_then_index);
        all
    }
}

impl Classifier for KnnModel {
    fn predict(&self, x: &FeatureVector) -> Label {
        let neighbors = self.neighbors(x);
        let mut votes = [0.0; 2];
        match self.weighting {
            Weighting::Uniform => {
                for &(_, i) in &neighbors {
                    votes[self.labels[i].index()] += 1.0;
                }
            }
            Weighting::Distance => {
                let exact: Vec<usize> = neighbors
                    .iter()
                    .filter(|(d, _)| *d == 0.0)
                    .map(|&(_, i)| i)
                    .collect();
                if exact.is_empty() {
                    for &(d, i) in &neighbors {
                        votes[self.labels[i].index()] += 1.0 / d;
                    }
                } else {
                    for i in exact {
                        votes[self.labels[i].index()] += 1.0;
                    }
                }
            }
        }
        majority(votes[Label::Person.index()], votes[Label::NoPerson.index()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(x0: f64) -> FeatureVector {
        let mut v = [0.0; 64];
        v[0] = x0;
        v
    }

    #[test]
    fn one_nn_memorizes_training_set() {
        let feats: Vec<_> = (0..20).map(|i| point(i as f64 * 0.7)).collect();
        let labels: Vec<_> = (0..20)
            .map(|i| if i % 3 == 0 { Label::Person } else { Label::NoPerson })
            .collect();
        let m = train_knn(&feats, &labels, 1, Weighting::Uniform).unwrap();
        for (f, l) in feats.iter().zip(&labels) {
            assert_eq!(m.predict(f), *l);
        }
        assert_eq!(m.features(), &feats[..]);
        assert_eq!(m.labels(), &labels[..]);
    }

    #[test]
    fn k_out_of_range() {
        let feats = vec![point(0.0), point(1.0)];
        let labels = vec![Label::Person, Label::NoPerson];
        assert!(train_knn(&feats, &labels, 3, Weighting::Uniform).is_err());
        assert!(train_knn(&feats, &labels, 0, Weighting::Uniform).is_err());
    }

    #[test]
    fn exact_match_wins_under_distance_weighting() {
        let feats = vec![point(0.0), point(0.1), point(0.2)];
        let labels = vec![Label::Person, Label::NoPerson, Label::NoPerson];
        let m = train_knn(&feats, &labels, 3, Weighting::Distance).unwrap();
        assert_eq!(m.predict(&point(0.0)), Label::Person);
    }

    #[test]
    fn uniform_majority() {
        let feats = vec![point(1.0), point(2.0), point(3.0), point(10.0)];
        let labels = vec![Label::Person, Label::Person, Label::NoPerson, Label::NoPerson];
        let m = train_knn(&feats, &labels, 3, Weighting::Uniform).unwrap();
        assert_eq!(m.predict(&point(0.0)), Label::Person);
    }

    #[test]
    fn distance_weighted_tie_goes_to_no_person() {
        // Query at the origin: NoPerson at d=1 weighs 1.0, two Persons at
        // d=2 weigh 0.5 + 0.5. Exact tie.
        let feats = vec![point(1.0), point(2.0), point(-2.0), point(9.0)];
        let labels = vec![Label::NoPerson, Label::Person, Label::Person, Label::Person];
        let m = train_knn(&feats, &labels, 3, Weighting::Distance).unwrap();
        assert_eq!(m.predict(&point(0.0)), Label::NoPerson);
    }

    #[test]
    fn equal_distances_prefer_lower_index() {
        let feats = vec![point(5.0), point(1.0), point(-1.0)];
        let labels = vec![Label::NoPerson, Label::Person, Label::NoPerson];
        let m = train_knn(&feats, &labels, 1, Weighting::Uniform).unwrap();
        assert_eq!(m.neighbors(&point(0.0)), vec![(1.0, 1)]);
        assert_eq!(m.predict(&point(0.0)), Label::Person);
    }
}
