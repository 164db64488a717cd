use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use parsec_cli::{commands, render, CliError, ExperimentConfig, Format, Overrides, Split};

#[derive(Parser)]
#[command(name = "parsec", version, about = "Evolve POS-pattern compressors that keep sentiment intact")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a compressor on the training split of each corpus.
    Evolve(Common),
    /// Apply a model to a tagged corpus.
    Compress {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Baseline accuracy before and after compression.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// One model for every corpus, or one per corpus in order.
        /// Defaults to `<out>/<corpus>/model.json`.
        #[arg(long)]
        model: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Split::Test)]
        split: Split,
        /// Also write the rows as CSV to this file.
        #[arg(long)]
        rows: Option<PathBuf>,
    },
    /// Render accuracy rows previously written as CSV.
    Report {
        rows: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Vec<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    negations: Option<PathBuf>,
    #[arg(long)]
    lcb: Option<f64>,
    #[arg(long)]
    ucb: Option<f64>,
    #[arg(long)]
    rules_min: Option<usize>,
    #[arg(long)]
    rules_max: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    train_fraction: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let o = Overrides {
            corpus: self.corpus.clone(),
            lexicon: self.lexicon.clone(),
            negations: self.negations.clone(),
            out: self.out.clone(),
            format: self.format,
            train_fraction: self.train_fraction,
            lcb: self.lcb,
            ucb: self.ucb,
            rules_min: self.rules_min,
            rules_max: self.rules_max,
            population_size: self.pop,
            generations: self.gens,
            seed: self.seed,
        };
        ExperimentConfig::resolve(self.config.as_deref(), &o)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve(common) => {
            let cfg = common.resolve()?;
            for o in commands::evolve(&cfg)? {
                println!(
                    "{}\t{}\ttotal={:.4}\trules={}\tcompression={:.2}%",
                    o.dataset,
                    o.dir.display(),
                    o.manifest.best.total,
                    o.manifest.best_rules,
                    o.manifest.train_compression_rate
                );
            }
        }
        Command::Compress { model, corpus, out } => {
            let rate = commands::compress(&model, &corpus, out.as_deref())?;
            log::info!("compression rate {rate:.2}%");
        }
        Command::Evaluate { common, model, split, rows } => {
            let cfg = common.resolve()?;
            let result = commands::evaluate(&cfg, &model, split)?;
            if let Some(path) = rows {
                let file = std::fs::File::create(&path).map_err(|e| CliError::at(&path, e))?;
                parsec_cli::report::write_csv(&result, file)?;
            }
            print!("{}", render(&result, cfg.format)?);
        }
        Command::Report { rows, format } => {
            print!("{}", render(&commands::report(&rows)?, format)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
