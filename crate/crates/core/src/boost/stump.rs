use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Hypothesis};
use crate::error::{Error, Result};

/// `polarity · sign(x[feature] - threshold)` with `sign(0) = +1`.
///
/// Thresholds may be infinite: `-∞` predicts `polarity` everywhere and `+∞`
/// predicts `-polarity` everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionStump {
    pub feature: usize,
    #[serde(with = "threshold_repr")]
    pub threshold: f64,
    pub polarity: i8,
}

impl DecisionStump {
    pub fn new(feature: usize, threshold: f64, polarity: i8) -> Result<Self> {
        if polarity != 1 && polarity != -1 {
            return Err(Error::InvalidArgument(format!(
                "polarity {polarity} is not ±1"
            )));
        }
        if threshold.is_nan() {
            return Err(Error::InvalidArgument("threshold is NaN".into()));
        }
        Ok(DecisionStump {
            feature,
            threshold,
            polarity,
        })
    }
}

impl Hypothesis for DecisionStump {
    #[inline]
    fn predict(&self, x: &[f64]) -> f64 {
        let side = if x[self.feature] - self.threshold >= 0.0 {
            1.0
        } else {
            -1.0
        };
        f64::from(self.polarity) * side
    }
}

/// A stump with its weighted edge `Σ D(i) y_i h(x_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StumpFit {
    pub stump: DecisionStump,
    pub edge: f64,
}

const TIE_EPS: f64 = 1e-12;

/// Exhaustive search for the stump with the largest weighted edge.
///
/// Candidate thresholds per feature are `-∞`, the midpoints between
/// consecutive distinct sorted values, and `+∞`. Ties go to the lowest
/// feature, then the lowest threshold, then polarity `+1`.
pub fn train_stump(dataset: &Dataset, weights: &[f64]) -> Result<StumpFit> {
    let n = dataset.len();
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: weights.len(),
        });
    }
    if weights.iter().any(|&d| !(d >= 0.0)) {
        return Err(Error::InvalidArgument(
            "sample weights must be nonnegative".into(),
        ));
    }
    let mass: f64 = weights.iter().sum();
    if !(mass > 0.0) || (mass - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "sample weights sum to {mass}, expected 1"
        )));
    }

    let signed: Vec<f64> = (0..n).map(|i| weights[i] * dataset.label(i)).collect();
    let total: f64 = signed.iter().sum();
    let mut best: Option<StumpFit> = None;
    let mut consider = |feature: usize, threshold: f64, edge_up: f64| {
        for (polarity, edge) in [(1i8, edge_up), (-1i8, -edge_up)] {
            if best.is_none_or(|b| edge > b.edge + TIE_EPS) {
                best = Some(StumpFit {
                    stump: DecisionStump {
                        feature,
                        threshold,
                        polarity,
                    },
                    edge,
                });
            }
        }
    };

    let mut order: Vec<usize> = (0..n).collect();
    for f in 0..dataset.dim() {
        order.sort_by(|&a, &b| dataset.point(a)[f].total_cmp(&dataset.point(b)[f]));
        consider(f, f64::NEG_INFINITY, total);
        let mut below = 0.0;
        let mut p = 0;
        while p < n {
            let v = dataset.point(order[p])[f];
            while p < n && dataset.point(order[p])[f] == v {
                below += signed[order[p]];
                p += 1;
            }
            if p < n {
                let next = dataset.point(order[p])[f];
                let mut mid = v + (next - v) / 2.0;
                if mid <= v {
                    mid = next;
                }
                consider(f, mid, total - 2.0 * below);
            }
        }
        consider(f, f64::INFINITY, -total);
    }
    best.ok_or(Error::Empty("no candidate stump"))
}

mod threshold_repr {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!("bad threshold {other:?}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64], ys: &[i8]) -> Dataset {
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        Dataset::from_rows(&rows, ys.to_vec()).unwrap()
    }

    fn weighted_error(ds: &Dataset, h: &DecisionStump, d: &[f64]) -> f64 {
        (0..ds.len())
            .filter(|&i| h.predict(ds.point(i)) != ds.label(i))
            .map(|i| d[i])
            .sum()
    }

    #[test]
    fn separable_line() {
        let ds = line(&[1.0, 2.0, 3.0, 4.0], &[1, 1, -1, -1]);
        let fit = train_stump(&ds, &[0.25; 4]).unwrap();
        assert_eq!(fit.stump.threshold, 2.5);
        assert_eq!(fit.stump.polarity, -1);
        assert_eq!(fit.stump.predict(&[1.0]), 1.0);
        assert_eq!(weighted_error(&ds, &fit.stump, &[0.25; 4]), 0.0);
        assert!((fit.edge - 1.0).abs() < 1e-15);
    }

    #[test]
    fn alternating_line_matches_exhaustive_search() {
        let ds = line(&[1.0, 2.0, 3.0, 4.0], &[1, -1, 1, -1]);
        let d = [0.25; 4];
        let fit = train_stump(&ds, &d).unwrap();
        let err = weighted_error(&ds, &fit.stump, &d);
        assert_eq!(err, 0.25);
        assert_eq!(fit.stump.threshold, 1.5);
        assert_eq!(fit.stump.polarity, -1);
        // exhaustive oracle over every threshold/polarity
        let mut best = f64::INFINITY;
        for th in [f64::NEG_INFINITY, 0.5, 1.5, 2.5, 3.5, 4.5, f64::INFINITY] {
            for pol in [1, -1] {
                let h = DecisionStump::new(0, th, pol).unwrap();
                best = best.min(weighted_error(&ds, &h, &d));
            }
        }
        assert_eq!(err, best);
    }

    #[test]
    fn point_mass_is_classified() {
        let ds = line(&[1.0, 2.0, 3.0, 4.0], &[-1, 1, 1, -1]);
        let fit = train_stump(&ds, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(fit.stump.predict(&[1.0]), -1.0);
        assert!((fit.edge - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_weights_rejected() {
        let ds = line(&[1.0, 2.0], &[1, -1]);
        assert!(train_stump(&ds, &[0.0, 0.0]).is_err());
        assert!(train_stump(&ds, &[1.5, -0.5]).is_err());
    }

    #[test]
    fn sign_zero_is_positive() {
        let h = DecisionStump::new(0, 2.0, 1).unwrap();
        assert_eq!(h.predict(&[2.0]), 1.0);
        let h = DecisionStump::new(0, f64::NEG_INFINITY, -1).unwrap();
        assert_eq!(h.predict(&[-1e300]), -1.0);
    }
}
