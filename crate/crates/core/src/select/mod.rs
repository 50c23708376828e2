//! Pairwise t-test feature selection.
//!
//! For each of the 21 emotion pairs every feature is scored with Welch's
//! t-test; the two best-ranked features fill that pair's two slots of a
//! 42-slot schema. A feature may serve several pairs.

mod ttest;

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::emotion::{pair_name, Emotion};
use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, FeatureRow};

pub use ttest::{
    ln_gamma, regularized_incomplete_beta, t_two_sided_p, welch_t, WelchResult, T_SENTINEL,
};

pub const SLOTS_PER_PAIR: usize = 2;
pub const SCHEMA_SLOTS: usize = SLOTS_PER_PAIR * 21;

#[derive(Debug, Clone, PartialEq)]
pub struct PairTestResult {
    pub feature_name: String,
    pub pair: (Emotion, Emotion),
    pub t_stat: f64,
    pub dof: f64,
    pub p_value: f64,
    pub degenerate: bool,
}

impl PairTestResult {
    /// A constant feature that carries no information about the pair.
    pub fn is_uninformative(&self) -> bool {
        self.degenerate && self.t_stat == 0.0
    }
}

/// Ascending p, then descending |t|, then feature name.
fn rank_order(a: &PairTestResult, b: &PairTestResult) -> std::cmp::Ordering {
    a.p_value
        .total_cmp(&b.p_value)
        .then_with(|| b.t_stat.abs().total_cmp(&a.t_stat.abs()))
        .then_with(|| a.feature_name.cmp(&b.feature_name))
}

/// Scores every feature for one label pair, best first.
pub fn rank_pair(matrix: &FeatureMatrix, pair: (Emotion, Emotion)) -> Result<Vec<PairTestResult>> {
    matrix.require_rows(&[pair.0, pair.1], 2)?;
    let mut results = (0..matrix.n_features())
        .map(|i| {
            let a = matrix.column_for(i, pair.0);
            let b = matrix.column_for(i, pair.1);
            let r = welch_t(&a, &b)?;
            Ok(PairTestResult {
                feature_name: matrix.feature_names[i].clone(),
                pair,
                t_stat: r.t,
                dof: r.dof,
                p_value: r.p,
                degenerate: r.degenerate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(rank_order);
    Ok(results)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemaSlot {
    pub index: usize,
    pub result: PairTestResult,
}

/// Ordered feature slots, two per label pair, pairs in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionSchema {
    pub slots: Vec<SchemaSlot>,
}

pub fn build_schema(matrix: &FeatureMatrix) -> Result<SelectionSchema> {
    matrix.require_rows(&Emotion::ALL, 2)?;
    let per_pair = Emotion::pairs()
        .into_par_iter()
        .map(|pair| {
            let ranked = rank_pair(matrix, pair)?;
            let chosen: Vec<PairTestResult> = ranked
                .into_iter()
                .filter(|r| !r.is_uninformative())
                .take(SLOTS_PER_PAIR)
                .collect();
            if chosen.len() < SLOTS_PER_PAIR {
                return Err(Error::NotEnoughFeatures {
                    pair: pair_name(pair),
                });
            }
            Ok(chosen)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let slots = per_pair
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(index, result)| SchemaSlot { index, result })
        .collect();
    Ok(SelectionSchema { slots })
}

/// Materializes one column per schema slot, in slot order.
pub fn project(matrix: &FeatureMatrix, schema: &SelectionSchema) -> Result<FeatureMatrix> {
    let columns = schema
        .slots
        .iter()
        .map(|s| {
            matrix
                .feature_index(&s.result.feature_name)
                .ok_or_else(|| Error::MissingFeature(s.result.feature_name.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureMatrix {
        feature_names: schema.feature_names(),
        rows: matrix
            .rows
            .iter()
            .map(|r| FeatureRow {
                id: r.id.clone(),
                label: r.label,
                values: columns.iter().map(|&c| r.values[c]).collect(),
            })
            .collect(),
    })
}

impl SelectionSchema {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.slots.iter().map(|s| s.result.feature_name.clone()).collect()
    }

    /// SHA-256 over the slot feature names, newline separated, hex encoded.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for s in &self.slots {
            h.update(s.result.feature_name.as_bytes());
            h.update(b"\n");
        }
        format!("{:x}", h.finalize())
    }

    /// Slot invariants: 42 slots, two distinct features per pair, pairs in order.
    pub fn validate(&self) -> Result<()> {
        if self.slots.len() != SCHEMA_SLOTS {
            return Err(Error::Format(format!(
                "schema has {} slots, expected {SCHEMA_SLOTS}",
                self.slots.len()
            )));
        }
        for (k, (pair, chunk)) in Emotion::pairs().iter().zip(self.slots.chunks(SLOTS_PER_PAIR)).enumerate() {
            for (j, s) in chunk.iter().enumerate() {
                if s.index != k * SLOTS_PER_PAIR + j || s.result.pair != *pair {
                    return Err(Error::Format(format!("slot {} out of order", s.index)));
                }
            }
            if chunk[0].result.feature_name == chunk[1].result.feature_name {
                return Err(Error::Format(format!(
                    "pair {} uses `{}` twice",
                    pair_name(*pair),
                    chunk[0].result.feature_name
                )));
            }
        }
        Ok(())
    }

    /// One line per slot: `<pair>  <slot>  <feature>  <t>  <dof>  <p>`, with a
    /// trailing `degenerate` marker on zero-variance slots.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# pair  slot  feature  t  dof  p\n");
        for s in &self.slots {
            let r = &s.result;
            let _ = write!(
                out,
                "{}  {}  {}  {:e}  {:e}  {:e}",
                pair_name(r.pair),
                s.index,
                r.feature_name,
                r.t_stat,
                r.dof,
                r.p_value
            );
            if r.degenerate {
                out.push_str("  degenerate");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut slots = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Format(format!("schema line {}: {what}", i + 1));
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() != 6 && !(tok.len() == 7 && tok[6] == "degenerate") {
                return Err(bad("expected 6 fields"));
            }
            let (a, b) = tok[0].split_once('-').ok_or_else(|| bad("bad pair"))?;
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
            slots.push(SchemaSlot {
                index: tok[1].parse().map_err(|_| bad("bad slot index"))?,
                result: PairTestResult {
                    feature_name: tok[2].to_string(),
                    pair: (a.parse()?, b.parse()?),
                    t_stat: num(tok[3])?,
                    dof: num(tok[4])?,
                    p_value: num(tok[5])?,
                    degenerate: tok.len() == 7,
                },
            });
        }
        let schema = SelectionSchema { slots };
        schema.validate()?;
        Ok(schema)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::io_util::write_atomic(path, self.to_text().as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}
