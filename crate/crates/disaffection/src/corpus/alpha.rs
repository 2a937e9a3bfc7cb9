//! Krippendorff's alpha for nominal data.

use std::collections::{BTreeMap, HashMap};

use super::Annotation;
use crate::error::{Error, Result};

/// Which annotation variable to measure reliability on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaVariable {
    Political,
    Sentiment,
}

impl AlphaVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            AlphaVariable::Political => "political",
            AlphaVariable::Sentiment => "sentiment",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "political" => Ok(AlphaVariable::Political),
            "sentiment" => Ok(AlphaVariable::Sentiment),
            other => Err(Error::InvalidInput(format!(
                "unknown alpha variable {other:?}"
            ))),
        }
    }
}

/// Inter-coder reliability via the coincidence-matrix formulation,
/// `alpha = 1 - D_o / D_e` with the nominal difference function.
///
/// Units (tweets) with fewer than two codings of the variable are excluded.
/// For the sentiment variable, annotations without a sentiment are treated
/// as missing. Perfect agreement with zero expected disagreement is defined
/// as 1.
pub fn krippendorff_alpha(annotations: &[Annotation], variable: AlphaVariable) -> Result<f64> {
    // BTreeMap keeps the unit order stable so the float accumulation below
    // is reproducible run to run.
    let mut units: BTreeMap<&str, Vec<u32>> = BTreeMap::new();
    for ann in annotations {
        let value = match variable {
            AlphaVariable::Political => Some(ann.political as u32),
            AlphaVariable::Sentiment => ann.sentiment.map(|s| s as u32),
        };
        if let Some(v) = value {
            units.entry(ann.tweet_id.as_str()).or_default().push(v);
        }
    }
    let units: Vec<Vec<u32>> = units.into_values().filter(|vs| vs.len() >= 2).collect();
    alpha_nominal(&units)
}

/// Alpha over pre-extracted units; every unit must hold >= 2 values.
/// Category identities are irrelevant, only coincidences matter.
pub(crate) fn alpha_nominal(units: &[Vec<u32>]) -> Result<f64> {
    if units.is_empty() {
        return Err(Error::InsufficientData(
            "no units with at least two codings".into(),
        ));
    }

    // Coincidence matrix: each ordered pair within a unit of m codings
    // contributes 1/(m-1).
    let mut categories: Vec<u32> = Vec::new();
    for unit in units {
        for &v in unit {
            if !categories.contains(&v) {
                categories.push(v);
            }
        }
    }
    let cat_index: HashMap<u32, usize> = categories
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let c = categories.len();
    let mut coincidence = vec![vec![0.0f64; c]; c];
    for unit in units {
        let m = unit.len();
        let weight = 1.0 / (m as f64 - 1.0);
        for (i, &a) in unit.iter().enumerate() {
            for (j, &b) in unit.iter().enumerate() {
                if i != j {
                    coincidence[cat_index[&a]][cat_index[&b]] += weight;
                }
            }
        }
    }

    let n: f64 = coincidence.iter().flatten().sum();
    let marginals: Vec<f64> = coincidence.iter().map(|row| row.iter().sum()).collect();

    let observed_disagreement: f64 = (0..c)
        .flat_map(|v| (0..c).filter(move |&k| k != v).map(move |k| (v, k)))
        .map(|(v, k)| coincidence[v][k])
        .sum::<f64>()
        / n;
    let expected_disagreement: f64 = (0..c)
        .flat_map(|v| (0..c).filter(move |&k| k != v).map(move |k| (v, k)))
        .map(|(v, k)| marginals[v] * marginals[k])
        .sum::<f64>()
        / (n * (n - 1.0));

    if expected_disagreement == 0.0 {
        // Every coding identical: agreement is perfect by definition.
        return Ok(1.0);
    }
    Ok(1.0 - observed_disagreement / expected_disagreement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SentimentLabel;

    fn ann(tweet: &str, coder: &str, political: bool) -> Annotation {
        Annotation {
            tweet_id: tweet.to_string(),
            coder_id: coder.to_string(),
            political,
            sentiment: None,
        }
    }

    /// Independent oracle: alpha from first principles, enumerating within-
    /// unit pairs directly rather than building the coincidence matrix.
    fn alpha_pair_oracle(units: &[Vec<u32>]) -> f64 {
        let n: f64 = units.iter().map(|u| u.len() as f64).sum();
        // Observed: weighted share of disagreeing ordered pairs.
        let mut d_o = 0.0;
        for unit in units {
            let m = unit.len() as f64;
            let mut disagree = 0.0;
            for (i, a) in unit.iter().enumerate() {
                for (j, b) in unit.iter().enumerate() {
                    if i != j && a != b {
                        disagree += 1.0;
                    }
                }
            }
            d_o += disagree / (m - 1.0);
        }
        let d_o = d_o / n;
        // Expected: marginal totals of the same pair distribution.
        let mut totals: HashMap<u32, f64> = HashMap::new();
        for unit in units {
            let m = unit.len() as f64;
            for &v in unit {
                // Each coding participates in (m-1) ordered pairs with
                // weight 1/(m-1), so its marginal mass is exactly 1.
                *totals.entry(v).or_insert(0.0) += (m - 1.0) / (m - 1.0);
            }
        }
        let mut d_e = 0.0;
        for (&a, &na) in &totals {
            for (&b, &nb) in &totals {
                if a != b {
                    d_e += na * nb;
                }
            }
        }
        let d_e = d_e / (n * (n - 1.0));
        if d_e == 0.0 {
            1.0
        } else {
            1.0 - d_o / d_e
        }
    }

    #[test]
    fn perfect_agreement_is_one() {
        let mut anns = Vec::new();
        for t in 0..5 {
            for c in 0..3 {
                anns.push(ann(&format!("t{t}"), &format!("c{c}"), t % 2 == 0));
            }
        }
        let alpha = krippendorff_alpha(&anns, AlphaVariable::Political).unwrap();
        assert_eq!(alpha, 1.0);
    }

    #[test]
    fn perfect_agreement_single_category_is_one() {
        // D_e = 0: all codings identical across the board.
        let anns = vec![
            ann("t1", "c1", true),
            ann("t1", "c2", true),
            ann("t2", "c1", true),
            ann("t2", "c2", true),
        ];
        assert_eq!(
            krippendorff_alpha(&anns, AlphaVariable::Political).unwrap(),
            1.0
        );
    }

    #[test]
    fn worked_two_coder_example() {
        // Units (a,a),(a,b),(b,b),(b,b): D_o = 0.25, D_e = 30/56,
        // alpha = 1 - 0.25 * 56/30 = 16/30.
        let units = vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 1]];
        let alpha = alpha_nominal(&units).unwrap();
        assert!((alpha - alpha_pair_oracle(&units)).abs() < 1e-12);
        assert!((alpha - 0.5333).abs() < 1e-4, "alpha = {alpha}");
        assert!((alpha - 16.0 / 30.0).abs() < 1e-12);
    }

    #[test]
    fn matches_pair_oracle_on_varied_units() {
        let units = vec![
            vec![0, 0, 1],
            vec![1, 1, 1],
            vec![0, 1],
            vec![2, 2, 0, 1],
            vec![0, 0],
        ];
        let alpha = alpha_nominal(&units).unwrap();
        assert!((alpha - alpha_pair_oracle(&units)).abs() < 1e-12);
    }

    #[test]
    fn invariant_under_category_renaming() {
        let units = vec![vec![0, 0, 1], vec![1, 1, 0], vec![0, 1], vec![1, 1]];
        let renamed: Vec<Vec<u32>> = units
            .iter()
            .map(|u| u.iter().map(|&v| 7 - v * 3).collect())
            .collect();
        let a = alpha_nominal(&units).unwrap();
        let b = alpha_nominal(&renamed).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn unpairable_units_excluded_and_error_when_none() {
        // Single codings only: nothing to pair.
        let anns = vec![ann("t1", "c1", true), ann("t2", "c1", false)];
        assert!(krippendorff_alpha(&anns, AlphaVariable::Political).is_err());
    }

    #[test]
    fn sentiment_variable_skips_missing() {
        let mk = |t: &str, c: &str, s: Option<SentimentLabel>| Annotation {
            tweet_id: t.to_string(),
            coder_id: c.to_string(),
            political: true,
            sentiment: s,
        };
        use SentimentLabel::{Negative, NonNegative};
        let anns = vec![
            mk("t1", "c1", Some(Negative)),
            mk("t1", "c2", Some(Negative)),
            mk("t1", "c3", None),
            mk("t2", "c1", Some(NonNegative)),
            mk("t2", "c2", Some(Negative)),
            // t3 has one sentiment coding: excluded.
            mk("t3", "c1", Some(Negative)),
        ];
        let alpha = krippendorff_alpha(&anns, AlphaVariable::Sentiment).unwrap();
        let oracle = alpha_pair_oracle(&[vec![0, 0], vec![1, 0]]);
        assert!((alpha - oracle).abs() < 1e-12);
    }
}
