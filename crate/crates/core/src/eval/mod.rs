//! End-to-end orchestration: corpus, features, held-out split, selection,
//! training, evaluation and report files.

mod config;
mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::audio::{load_corpus, synth_corpus, CorpusManifest, Recording};
use crate::classifier::{predict, stratified_indices, train, NetworkParams, TrainConfig, TrainOutcome};
use crate::emotion::{pair_name, Emotion};
use crate::error::{Error, Result};
use crate::features::{extract_corpus_logged, FeatureMatrix};
use crate::io_util::write_atomic;
use crate::select::{build_schema, project, SelectionSchema};
use crate::wavelet::WaveletSpec;

pub use config::{
    ConfigFile, CorpusSource, RunConfig, DEFAULT_LEVELS, DEFAULT_TEST_FRACTION, DEFAULT_WAVELETS,
};
pub use report::{
    balanced_accuracy, confusion, confusion_from_names, overall_accuracy, pairwise_errors,
    pairwise_errors_balanced, render_confusion, render_counts, render_pairwise, ConfusionMatrix,
    PairwiseErrorTable,
};

/// Stratified train/test split. Both halves keep the source row order.
pub fn split(matrix: &FeatureMatrix, seed: u64, test_fraction: f64) -> Result<(FeatureMatrix, FeatureMatrix)> {
    if !(test_fraction > 0.0 && test_fraction < 0.5) {
        return Err(Error::Config(format!(
            "test_fraction must be in (0, 0.5), got {test_fraction}"
        )));
    }
    matrix.require_rows(&Emotion::ALL, 2)?;
    let labels: Vec<Emotion> = matrix.rows.iter().map(|r| r.label).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (train_idx, test_idx) = stratified_indices(&labels, test_fraction, &mut rng);
    Ok((matrix.subset(&train_idx), matrix.subset(&test_idx)))
}

pub fn load_source(source: &CorpusSource) -> Result<Vec<Recording>> {
    match source {
        CorpusSource::Manifest(path) => load_corpus(&CorpusManifest::read(path)?),
        CorpusSource::Synth {
            seed,
            per_class,
            length,
        } => synth_corpus(*seed, *per_class, *length),
    }
}

/// Builds the selection schema from the training half only.
pub fn select_on_train(matrix: &FeatureMatrix, seed: u64, test_fraction: f64) -> Result<SelectionSchema> {
    let (train_rows, _) = split(matrix, seed, test_fraction)?;
    build_schema(&train_rows)
}

pub fn train_on_split(
    matrix: &FeatureMatrix,
    schema: &SelectionSchema,
    seed: u64,
    test_fraction: f64,
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    let (train_rows, _) = split(matrix, seed, test_fraction)?;
    train(&project(&train_rows, schema)?, schema, config)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub id: String,
    pub truth: Emotion,
    pub predicted: Emotion,
    pub memberships: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub predictions: Vec<Prediction>,
    pub confusion: ConfusionMatrix,
}

impl Evaluation {
    pub fn overall_accuracy(&self) -> Result<f64> {
        overall_accuracy(&self.confusion)
    }

    pub fn balanced_accuracy(&self) -> Result<f64> {
        balanced_accuracy(&self.confusion)
    }

    pub fn pairwise(&self) -> Result<PairwiseErrorTable> {
        pairwise_errors(&self.confusion)
    }
}

/// Predicts every row of an already split-off matrix.
pub fn evaluate_rows(test: &FeatureMatrix, schema: &SelectionSchema, params: &NetworkParams) -> Result<Evaluation> {
    let projected = project(test, schema)?;
    let predictions = projected
        .rows
        .iter()
        .map(|r| {
            let (predicted, memberships) = predict(params, &r.values)?;
            Ok(Prediction {
                id: r.id.clone(),
                truth: r.label,
                predicted,
                memberships,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let truth: Vec<Emotion> = predictions.iter().map(|p| p.truth).collect();
    let pred: Vec<Emotion> = predictions.iter().map(|p| p.predicted).collect();
    Ok(Evaluation {
        confusion: confusion(&truth, &pred)?,
        predictions,
    })
}

/// Evaluates on the held-out half of the seeded split.
pub fn evaluate(
    matrix: &FeatureMatrix,
    schema: &SelectionSchema,
    params: &NetworkParams,
    seed: u64,
    test_fraction: f64,
) -> Result<Evaluation> {
    let (_, test) = split(matrix, seed, test_fraction)?;
    evaluate_rows(&test, schema, params)
}

#[derive(Serialize)]
struct PairEntry {
    pair: String,
    pooled: f64,
    balanced: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    labels: Vec<&'static str>,
    counts: &'a [[u64; Emotion::COUNT]; Emotion::COUNT],
    n_test: u64,
    overall_accuracy: f64,
    balanced_accuracy: f64,
    pairwise_errors: Vec<PairEntry>,
}

/// Writes `confusion.txt`, `counts.txt`, `pairwise.txt`, `predictions.csv` and
/// `report.json` into `dir`.
pub fn write_reports(dir: &Path, eval: &Evaluation) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let cm = &eval.confusion;
    let pooled = pairwise_errors(cm)?;
    let balanced = pairwise_errors_balanced(cm)?;

    let mut table1 = render_confusion(cm);
    let _ = writeln!(table1, "\nOverall accuracy\t{:.2}%", overall_accuracy(cm)?);
    let _ = writeln!(table1, "Balanced accuracy\t{:.2}%", balanced_accuracy(cm)?);
    write_atomic(dir.join("confusion.txt"), table1.as_bytes())?;
    write_atomic(dir.join("counts.txt"), render_counts(cm).as_bytes())?;
    write_atomic(dir.join("pairwise.txt"), render_pairwise(&pooled).as_bytes())?;
    write_atomic(dir.join("pairwise_balanced.txt"), render_pairwise(&balanced).as_bytes())?;

    let mut csv = String::from("id,true,predicted");
    for e in Emotion::ALL {
        let _ = write!(csv, ",{e}");
    }
    csv.push('\n');
    for p in &eval.predictions {
        let _ = write!(csv, "{},{},{}", p.id, p.truth, p.predicted);
        for m in &p.memberships {
            let _ = write!(csv, ",{m:e}");
        }
        csv.push('\n');
    }
    write_atomic(dir.join("predictions.csv"), csv.as_bytes())?;

    let json = ReportJson {
        labels: Emotion::ALL.iter().map(|e| e.as_str()).collect(),
        counts: &cm.counts,
        n_test: cm.total(),
        overall_accuracy: overall_accuracy(cm)?,
        balanced_accuracy: balanced_accuracy(cm)?,
        pairwise_errors: pooled
            .entries
            .iter()
            .zip(&balanced.entries)
            .map(|((pair, p), (_, b))| PairEntry {
                pair: pair_name(*pair),
                pooled: *p,
                balanced: *b,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&json)?;
    text.push('\n');
    write_atomic(dir.join("report.json"), text.as_bytes())
}

/// Artifacts and results of one full run.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub output_dir: PathBuf,
    pub n_recordings: usize,
    pub n_features: usize,
    pub schema: SelectionSchema,
    pub training: TrainOutcome,
    pub evaluation: Evaluation,
}

/// Loads or synthesizes the corpus and runs every stage, writing all
/// artifacts under `config.output_dir`. Deterministic given `config`.
pub fn run_pipeline(config: &RunConfig) -> Result<PipelineReport> {
    config.train.validate()?;
    let out = &config.output_dir;
    std::fs::create_dir_all(out)?;

    let corpus = load_source(&config.source).map_err(|e| e.at_stage("load"))?;
    let matrix = extract_stage(&corpus, &config.wavelets, config.levels, &out.join("features.csv"))?;

    let (train_rows, test_rows) =
        split(&matrix, config.split_seed, config.test_fraction).map_err(|e| e.at_stage("split"))?;
    let mut split_txt = String::new();
    for (side, m) in [("train", &train_rows), ("test", &test_rows)] {
        for r in &m.rows {
            let _ = writeln!(split_txt, "{side}\t{}\t{}", r.id, r.label);
        }
    }
    write_atomic(out.join("split.txt"), split_txt.as_bytes()).map_err(|e| e.at_stage("split"))?;

    let schema = build_schema(&train_rows).map_err(|e| e.at_stage("select"))?;
    schema.save(out.join("schema.txt")).map_err(|e| e.at_stage("select"))?;

    let training = project(&train_rows, &schema)
        .and_then(|m| train(&m, &schema, &config.train))
        .map_err(|e| e.at_stage("train"))?;
    training
        .params
        .save(out.join("params.json"))
        .and_then(|_| write_atomic(out.join("train_log.csv"), training.log.to_csv().as_bytes()))
        .map_err(|e| e.at_stage("train"))?;

    let evaluation = evaluate_rows(&test_rows, &schema, &training.params).map_err(|e| e.at_stage("evaluate"))?;
    write_reports(out, &evaluation).map_err(|e| e.at_stage("report"))?;

    Ok(PipelineReport {
        output_dir: out.clone(),
        n_recordings: corpus.len(),
        n_features: matrix.n_features(),
        schema,
        training,
        evaluation,
    })
}

/// Extraction, writing the matrix to `features_path` and the degenerate-feature
/// log to `extraction_log.txt` beside it.
pub fn extract_stage(
    corpus: &[Recording],
    wavelets: &[WaveletSpec],
    levels: usize,
    features_path: &Path,
) -> Result<FeatureMatrix> {
    let (matrix, log) = extract_corpus_logged(corpus, wavelets, levels).map_err(|e| e.at_stage("extract"))?;
    matrix.save(features_path).map_err(|e| e.at_stage("extract"))?;
    let out = features_path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut text = String::from("# zero-variance subbands: kurtosis and skewness reported as 0\n");
    for d in &log {
        let _ = writeln!(text, "{}\t{}", d.id, d.feature);
    }
    write_atomic(out.join("extraction_log.txt"), text.as_bytes()).map_err(|e| e.at_stage("extract"))?;
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureRow;

    fn labeled(per_class: usize) -> FeatureMatrix {
        FeatureMatrix {
            feature_names: vec!["x".into()],
            rows: Emotion::ALL
                .iter()
                .flat_map(|&l| (0..per_class).map(move |i| (l, i)))
                .map(|(label, i)| FeatureRow {
                    id: format!("{label}_{i}"),
                    label,
                    values: vec![i as f64],
                })
                .collect(),
        }
    }

    #[test]
    fn stratified_holdout() {
        let m = labeled(10);
        let (train, test) = split(&m, 4, 0.2).unwrap();
        assert_eq!(test.n_rows(), 14);
        assert!(test.label_counts().iter().all(|&c| c == 2));
        let again = split(&m, 4, 0.2).unwrap();
        assert_eq!(again.1, test);

        let mut ids: Vec<&str> = train.rows.iter().chain(&test.rows).map(|r| r.id.as_str()).collect();
        let total = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!((ids.len(), total), (70, 70));
    }

    #[test]
    fn split_rejects_thin_labels() {
        let mut m = labeled(3);
        m.rows.retain(|r| !(r.label == Emotion::Anger && r.id != "anger_0"));
        assert!(matches!(split(&m, 1, 0.2), Err(Error::InsufficientRows { .. })));
        assert!(matches!(split(&labeled(3), 1, 0.6), Err(Error::Config(_))));
    }
}
