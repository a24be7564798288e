//! Result serialization: rank tables and weight vectors as CSV or JSON,
//! with readers that round-trip bit-exactly.

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::core::{RankResult, WeightVector};

/// Format a float with 17 significant digits, enough to reconstruct the
/// exact bit pattern on parse.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// What [`write_result`] serializes.
pub enum ResultPayload<'a> {
    Rank {
        names: &'a [String],
        result: &'a RankResult,
    },
    Weights(&'a WeightVector),
}

/// JSON document for a rank result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankDoc {
    pub names: Vec<String>,
    pub scores: Vec<f64>,
    pub ordering: Vec<usize>,
    pub ties: Vec<Vec<usize>>,
}

/// JSON document for a weight vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsDoc {
    pub names: Vec<String>,
    pub weights: Vec<f64>,
}

/// Parsed rank CSV (one row per alternative, best first).
#[derive(Debug, Clone, PartialEq)]
pub struct RankCsv {
    pub names: Vec<String>,
    pub scores: Vec<f64>,
    pub ranks: Vec<usize>,
}

/// Serialize a result. CSV rank output is `name,score,rank` in ranked
/// order; weight output is `name,weight` in criterion order.
pub fn write_result(payload: &ResultPayload<'_>, format: OutputFormat) -> String {
    match (payload, format) {
        (ResultPayload::Rank { names, result }, OutputFormat::Csv) => {
            write_rank_csv(names, result)
        }
        (ResultPayload::Rank { names, result }, OutputFormat::Json) => {
            write_rank_json(names, result)
        }
        (ResultPayload::Weights(w), OutputFormat::Csv) => write_weights_csv(w),
        (ResultPayload::Weights(w), OutputFormat::Json) => write_weights_json(w),
    }
}

pub fn write_rank_csv(names: &[String], result: &RankResult) -> String {
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    wtr.write_record(["name", "score", "rank"]).expect("csv");
    for (pos, &alt) in result.ordering.iter().enumerate() {
        wtr.write_record([
            names[alt].as_str(),
            &fmt_f64(result.scores[alt]),
            &(pos + 1).to_string(),
        ])
        .expect("csv");
    }
    String::from_utf8(wtr.into_inner().expect("csv flush")).expect("utf8")
}

pub fn read_rank_csv(text: &str) -> Result<RankCsv, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let mut out = RankCsv {
        names: Vec::new(),
        scores: Vec::new(),
        ranks: Vec::new(),
    };
    for record in rdr.records() {
        let record = record.map_err(|e| IoError::MalformedResult {
            detail: e.to_string(),
        })?;
        if record.len() != 3 {
            return Err(IoError::MalformedResult {
                detail: format!("expected 3 columns, got {}", record.len()),
            });
        }
        out.names.push(record[0].to_string());
        out.scores
            .push(record[1].parse().map_err(|_| IoError::MalformedResult {
                detail: format!("bad score: {}", &record[1]),
            })?);
        out.ranks
            .push(record[2].parse().map_err(|_| IoError::MalformedResult {
                detail: format!("bad rank: {}", &record[2]),
            })?);
    }
    Ok(out)
}

pub fn write_rank_json(names: &[String], result: &RankResult) -> String {
    let doc = RankDoc {
        names: names.to_vec(),
        scores: result.scores.clone(),
        ordering: result.ordering.clone(),
        ties: result.ties.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("serialize")
}

pub fn read_rank_json(text: &str) -> Result<RankDoc, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::MalformedResult {
        detail: e.to_string(),
    })
}

pub fn write_weights_csv(weights: &WeightVector) -> String {
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    wtr.write_record(["name", "weight"]).expect("csv");
    for (name, w) in weights.criterion_names().iter().zip(weights.weights()) {
        wtr.write_record([name.as_str(), &fmt_f64(*w)]).expect("csv");
    }
    String::from_utf8(wtr.into_inner().expect("csv flush")).expect("utf8")
}

pub fn read_weights_csv(text: &str) -> Result<WeightsDoc, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let mut doc = WeightsDoc {
        names: Vec::new(),
        weights: Vec::new(),
    };
    for record in rdr.records() {
        let record = record.map_err(|e| IoError::MalformedResult {
            detail: e.to_string(),
        })?;
        if record.len() != 2 {
            return Err(IoError::MalformedResult {
                detail: format!("expected 2 columns, got {}", record.len()),
            });
        }
        doc.names.push(record[0].to_string());
        doc.weights
            .push(record[1].parse().map_err(|_| IoError::MalformedResult {
                detail: format!("bad weight: {}", &record[1]),
            })?);
    }
    Ok(doc)
}

pub fn write_weights_json(weights: &WeightVector) -> String {
    let doc = WeightsDoc {
        names: weights.criterion_names().to_vec(),
        weights: weights.weights().to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("serialize")
}

pub fn read_weights_json(text: &str) -> Result<WeightsDoc, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::MalformedResult {
        detail: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{rank_from_scores, ScoreDirection};

    #[test]
    fn rank_csv_has_header_and_one_row_per_alternative() {
        let r = rank_from_scores(&[0.4, 0.6], ScoreDirection::HigherIsBetter).unwrap();
        let names = vec!["A".to_string(), "B".to_string()];
        let text = write_rank_csv(&names, &r);
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("name,score,rank\n"));
        assert!(text.lines().nth(1).unwrap().starts_with("B,"));
    }

    #[test]
    fn rank_csv_round_trips_exact_bits() {
        let scores = [0.1 + 0.2, 1.0 / 3.0, 7.0 * 0.3];
        let r = rank_from_scores(&scores, ScoreDirection::HigherIsBetter).unwrap();
        let names: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let parsed = read_rank_csv(&write_rank_csv(&names, &r)).unwrap();
        for (pos, &alt) in r.ordering.iter().enumerate() {
            assert_eq!(parsed.scores[pos].to_bits(), scores[alt].to_bits());
            assert_eq!(parsed.ranks[pos], pos + 1);
        }
    }

    #[test]
    fn rank_json_round_trips() {
        let r = rank_from_scores(&[0.5, 0.5], ScoreDirection::HigherIsBetter).unwrap();
        let names = vec!["A".to_string(), "B".to_string()];
        let doc = read_rank_json(&write_rank_json(&names, &r)).unwrap();
        assert_eq!(doc.scores, r.scores);
        assert_eq!(doc.ordering, r.ordering);
        assert_eq!(doc.ties, vec![vec![0, 1]]);
    }

    #[test]
    fn weights_json_sums_to_one() {
        let w = WeightVector::new(vec![0.5, 0.5], vec!["a".into(), "b".into()]).unwrap();
        let doc = read_weights_json(&write_weights_json(&w)).unwrap();
        let sum: f64 = doc.weights.iter().sum();
        assert_eq!(sum, 1.0);
    }

    #[test]
    fn quoted_names_survive_csv() {
        let scores = [1.0, 2.0];
        let r = rank_from_scores(&scores, ScoreDirection::HigherIsBetter).unwrap();
        let names: Vec<String> = vec!["with, comma".into(), "with \"quote\"".into()];
        let parsed = read_rank_csv(&write_rank_csv(&names, &r)).unwrap();
        assert_eq!(parsed.names[0], "with \"quote\"");
        assert_eq!(parsed.names[1], "with, comma");
    }
}
