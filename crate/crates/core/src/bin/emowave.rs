use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use emowave::audio::{synth_corpus, write_corpus};
use emowave::classifier::NetworkParams;
use emowave::error::{Error, Result};
use emowave::eval::{
    evaluate, extract_stage, load_source, render_confusion, render_pairwise, run_pipeline,
    select_on_train, train_on_split, write_reports, ConfigFile,
};
use emowave::features::FeatureMatrix;
use emowave::select::SelectionSchema;
use emowave::wavelet::InvariantReport;
use emowave::write_atomic;

/// Speech emotion recognition from Daubechies wavelet subband statistics.
#[derive(Parser)]
#[command(name = "emowave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print filter coefficients and check their invariants.
    Filters(Opts),
    /// Write a synthetic labeled corpus (WAV files and manifest.txt).
    Synth {
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract the subband feature matrix to CSV.
    Extract {
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        out: PathBuf,
    },
    /// Select 42 features on the training split.
    Select {
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the classifier on the training split.
    Train {
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Per-epoch loss log (CSV).
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Evaluate on the held-out split and write reports.
    Evaluate {
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        params: PathBuf,
    },
    /// Run every stage and write all artifacts to --output-dir.
    Pipeline(Opts),
}

/// Flags mirroring the run configuration keys; they override --config.
#[derive(Args, Default)]
struct Opts {
    /// Key-value (TOML) configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    synth_seed: Option<u64>,
    #[arg(long)]
    synth_per_class: Option<usize>,
    #[arg(long)]
    synth_length: Option<usize>,
    /// Comma-separated, e.g. db1,db6,db8,db10.
    #[arg(long)]
    wavelets: Option<String>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    test_fraction: Option<f64>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    momentum: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    max_epochs: Option<usize>,
    #[arg(long)]
    patience: Option<usize>,
    #[arg(long)]
    validation_fraction: Option<f64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

impl Opts {
    fn resolve(self) -> Result<ConfigFile> {
        let base = match &self.config {
            Some(p) => ConfigFile::read(p)?,
            None => ConfigFile::default(),
        };
        Ok(base.overlay(ConfigFile {
            manifest: self.manifest,
            synth_seed: self.synth_seed,
            synth_per_class: self.synth_per_class,
            synth_length: self.synth_length,
            wavelets: self.wavelets,
            levels: self.levels,
            seed: self.seed,
            test_fraction: self.test_fraction,
            learning_rate: self.learning_rate,
            momentum: self.momentum,
            batch_size: self.batch_size,
            max_epochs: self.max_epochs,
            patience: self.patience,
            validation_fraction: self.validation_fraction,
            output_dir: self.output_dir,
        }))
    }
}

fn parent_dir(p: &Path) -> &Path {
    p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."))
}

fn filters(cfg: &ConfigFile) -> Result<()> {
    let mut failed = Vec::new();
    for spec in cfg.wavelet_specs()? {
        let r: InvariantReport = spec.check();
        println!("{} (order {}, {} taps)", spec.name, spec.order, spec.len());
        for (k, (h, g)) in spec.lowpass.iter().zip(&spec.highpass).enumerate() {
            println!("  {k:2}  h = {h:+.17e}  g = {g:+.17e}");
        }
        println!(
            "  |sum h - sqrt2| = {:.2e}  |sum h^2 - 1| = {:.2e}  orthogonality = {:.2e}  qmf = {:.2e}  moments = {:.2e}  {}",
            r.sum_error,
            r.energy_error,
            r.orthogonality_error,
            r.qmf_error,
            r.moment_error,
            if r.passes() { "ok" } else { "FAILED" }
        );
        if !r.passes() {
            failed.push(spec.name.clone());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Format(format!("filter invariants failed for {}", failed.join(", "))))
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Filters(opts) => filters(&opts.resolve()?),
        Command::Synth { opts, out } => {
            let cfg = opts.resolve()?;
            let seed = cfg.synth_seed.or(cfg.seed).ok_or_else(|| Error::Config("missing field: seed".into()))?;
            let per_class = cfg
                .synth_per_class
                .ok_or_else(|| Error::Config("missing field: synth_per_class".into()))?;
            let length = cfg
                .synth_length
                .ok_or_else(|| Error::Config("missing field: synth_length".into()))?;
            let corpus = synth_corpus(seed, per_class, length)?;
            let manifest = write_corpus(&out, &corpus)?;
            println!("wrote {} recordings, manifest {}", corpus.len(), manifest.display());
            Ok(())
        }
        Command::Extract { opts, out } => {
            let cfg = opts.resolve()?;
            let corpus = load_source(&cfg.source()?).map_err(|e| e.at_stage("load"))?;
            let dir = parent_dir(&out);
            std::fs::create_dir_all(dir)?;
            let matrix = extract_stage(&corpus, &cfg.wavelet_specs()?, cfg.levels()?, &out)?;
            println!("{} rows x {} features -> {}", matrix.n_rows(), matrix.n_features(), out.display());
            Ok(())
        }
        Command::Select { opts, features, out } => {
            let cfg = opts.resolve()?;
            let matrix = FeatureMatrix::load(&features)?;
            let schema = select_on_train(&matrix, cfg.seed()?, cfg.test_fraction()?)?;
            schema.save(&out)?;
            println!("{} slots -> {}", schema.len(), out.display());
            Ok(())
        }
        Command::Train {
            opts,
            features,
            schema,
            out,
            log,
        } => {
            let cfg = opts.resolve()?;
            let matrix = FeatureMatrix::load(&features)?;
            let schema = SelectionSchema::load(&schema)?;
            let outcome = train_on_split(&matrix, &schema, cfg.seed()?, cfg.test_fraction()?, &cfg.train_config()?)?;
            outcome.params.save(&out)?;
            if let Some(log) = log {
                write_atomic(log, outcome.log.to_csv().as_bytes())?;
            }
            println!(
                "best epoch {} (validation loss {:.4}) -> {}",
                outcome.log.best_epoch,
                outcome.log.epochs[outcome.log.best_epoch].val_loss,
                out.display()
            );
            Ok(())
        }
        Command::Evaluate {
            opts,
            features,
            schema,
            params,
        } => {
            let cfg = opts.resolve()?;
            let dir = cfg
                .output_dir
                .clone()
                .ok_or_else(|| Error::Config("missing field: output_dir".into()))?;
            let matrix = FeatureMatrix::load(&features)?;
            let schema = SelectionSchema::load(&schema)?;
            let params = NetworkParams::load(&params, &schema)?;
            let eval = evaluate(&matrix, &schema, &params, cfg.seed()?, cfg.test_fraction()?)?;
            write_reports(&dir, &eval)?;
            print!("{}", render_confusion(&eval.confusion));
            println!("overall accuracy {:.2}%", eval.overall_accuracy()?);
            Ok(())
        }
        Command::Pipeline(opts) => {
            let rc = opts.resolve()?.run_config()?;
            let report = run_pipeline(&rc)?;
            println!("{}", render_confusion(&report.evaluation.confusion));
            println!("{}", render_pairwise(&report.evaluation.pairwise()?));
            println!(
                "overall accuracy {:.2}%  (artifacts in {})",
                report.evaluation.overall_accuracy()?,
                report.output_dir.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_class() as u8)
        }
    }
}
