//! Command-line front end.
//!
//! Exit codes: 0 success with a consistent final model, 1 success with an
//! inconsistent final model, 2 usage error, 3 data or model error.

use clap::{Args, Parser, Subcommand};

use crate::corr::{load_correlation, CorrelationMatrix};
use crate::dataset::{default_missing_tokens, load_dataset, pearson_matrix};
use crate::effects::effects_table;
use crate::error::Result;
use crate::estimator::fit_model;
use crate::fit_trim::{
    fit_and_trim, fit_report, load_replay_coefficients, replay_coefficients, replay_fit_report,
};
use crate::model::parse_model;
use crate::report::{
    decompositions_json, effects_json, effects_json_from_coefficients, equations_json, fit_json,
    render_diagram, render_json, render_text, replay_equations_json, trim_log_json, AnalysisReport,
    MatrixJson, Provenance,
};
use crate::screening::screen_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pathwright",
    version,
    about = "Recursive path analysis: coefficients, trace decompositions, fit, trimming, effects"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Args)]
struct DataOpts {
    /// Model file (var/path/covary lines)
    #[arg(long)]
    model: String,
    /// Raw dataset CSV with a header row
    #[arg(long, conflicts_with = "corr")]
    data: Option<String>,
    /// Summary correlation file (n/vars/matrix lines)
    #[arg(long)]
    corr: Option<String>,
    /// Missing-value tokens for CSV intake, comma separated
    #[arg(long, value_delimiter = ',')]
    missing: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct FitOpts {
    #[command(flatten)]
    data: DataOpts,
    /// Significance level for coefficients and trimming
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Flag threshold on |observed - reproduced|
    #[arg(long, default_value_t = 0.05)]
    fit_threshold: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Trim non-significant paths and refit until stable
    #[arg(long)]
    trim: bool,
    /// Reproduce correlations from supplied `A -> B value` coefficients
    /// instead of estimating them
    #[arg(long, conflicts_with = "trim")]
    replay_coefficients: Option<String>,
    /// Recorded in provenance for reproducibility of synthetic inputs
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Data screening diagnostics on a raw dataset
    Screen {
        #[command(flatten)]
        data: DataOpts,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Fit path coefficients and assess model fit
    Fit(FitOpts),
    /// Fit, then trim non-significant paths (alias for `fit --trim`)
    Trim(FitOpts),
    /// Emit a DOT diagram of the model, labeled when data is supplied
    Diagram {
        #[command(flatten)]
        data: DataOpts,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
}

fn observed_matrix(
    opts: &DataOpts,
) -> Result<(CorrelationMatrix, Option<crate::dataset::Dataset>)> {
    if let Some(path) = &opts.data {
        let tokens = opts.missing.clone().unwrap_or_else(default_missing_tokens);
        let d = load_dataset(path, &tokens)?;
        let c = pearson_matrix(&d)?;
        Ok((c, Some(d)))
    } else if let Some(path) = &opts.corr {
        Ok((load_correlation(path)?, None))
    } else {
        unreachable!("clap enforces one data source")
    }
}

fn run_fit(opts: &FitOpts, force_trim: bool) -> Result<i32> {
    let trim = force_trim || opts.trim;
    let g = parse_model(&opts.data.model)?;
    let (observed, raw) = observed_matrix(&opts.data)?;
    if let Some(warn) = observed.psd_warning {
        eprintln!("warning: correlation matrix slightly indefinite (min eigenvalue {warn:.2e})");
    }
    let mut provenance = Provenance::new(opts.alpha, opts.fit_threshold);
    provenance.model_file = Some(opts.data.model.clone());
    provenance.data_file = opts.data.data.clone();
    provenance.corr_file = opts.data.corr.clone();
    provenance.seed = opts.seed;
    let screening = match &raw {
        Some(d) => Some(screen_report(d, &g)?),
        None => None,
    };

    if let Some(replay_path) = &opts.replay_coefficients {
        let coefs = load_replay_coefficients(replay_path)?;
        let pc = replay_coefficients(&g, &coefs, Some(&observed))?;
        let fr = replay_fit_report(&g, &coefs, &observed, opts.fit_threshold)?;
        provenance.replay_file = Some(replay_path.clone());
        let report = AnalysisReport {
            screening,
            coefficients: replay_equations_json(&pc),
            observed: MatrixJson::from_matrix(&observed, true),
            reproduced: MatrixJson::from_matrix(&fr.reproduced, false),
            fit: fit_json(&fr),
            trim_log: None,
            decompositions: decompositions_json(&pc)?,
            effects: effects_json_from_coefficients(&pc)?,
            provenance,
        };
        emit(&report, opts.format, &g, None);
        return Ok(if fr.consistent {
            EXIT_OK
        } else {
            EXIT_INCONSISTENT
        });
    }

    if trim {
        let log = fit_and_trim(&observed, &g, opts.alpha, opts.fit_threshold)?;
        let fin = log.final_iteration();
        let pc = fin.model.path_coefficients();
        let report = AnalysisReport {
            screening,
            coefficients: equations_json(&fin.model),
            observed: MatrixJson::from_matrix(&observed, true),
            reproduced: MatrixJson::from_matrix(&fin.report.reproduced, false),
            fit: fit_json(&fin.report),
            trim_log: Some(trim_log_json(&log)),
            decompositions: decompositions_json(&pc)?,
            effects: effects_json(&effects_table(&fin.model)?),
            provenance,
        };
        let consistent = fin.report.consistent;
        let model = fin.model.clone();
        emit(&report, opts.format, &model.graph, Some(&model));
        Ok(if consistent {
            EXIT_OK
        } else {
            EXIT_INCONSISTENT
        })
    } else {
        let m = fit_model(&observed, &g, opts.alpha)?;
        let fr = fit_report(&m, opts.fit_threshold)?;
        let pc = m.path_coefficients();
        let report = AnalysisReport {
            screening,
            coefficients: equations_json(&m),
            observed: MatrixJson::from_matrix(&observed, true),
            reproduced: MatrixJson::from_matrix(&fr.reproduced, false),
            fit: fit_json(&fr),
            trim_log: None,
            decompositions: decompositions_json(&pc)?,
            effects: effects_json(&effects_table(&m)?),
            provenance,
        };
        emit(&report, opts.format, &g, Some(&m));
        Ok(if fr.consistent {
            EXIT_OK
        } else {
            EXIT_INCONSISTENT
        })
    }
}

fn emit(
    report: &AnalysisReport,
    format: Format,
    graph: &crate::model::CausalGraph,
    model: Option<&crate::estimator::FittedModel>,
) {
    match format {
        Format::Text => print!("{}", render_text(report)),
        Format::Json => print!("{}", render_json(report)),
        Format::Dot => print!("{}", render_diagram(graph, model)),
    }
}

fn run_screen(opts: &DataOpts, format: Format) -> Result<i32> {
    let g = parse_model(&opts.model)?;
    let tokens = opts.missing.clone().unwrap_or_else(default_missing_tokens);
    let path = opts.data.as_ref().ok_or_else(|| {
        crate::error::Error::InvalidArgument("screen requires --data (raw dataset)".into())
    })?;
    let d = load_dataset(path, &tokens)?;
    let report = screen_report(&d, &g)?;
    match format {
        Format::Json => {
            let doc = serde_json::json!({
                "screening": report,
                "provenance": {
                    "tool": "pathwright",
                    "version": env!("CARGO_PKG_VERSION"),
                    "model_file": opts.model,
                    "data_file": path,
                },
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializes")
            );
        }
        _ => print!("{}", crate::report::render_screening(&report)),
    }
    Ok(EXIT_OK)
}

fn run_diagram(opts: &DataOpts, alpha: f64) -> Result<i32> {
    let g = parse_model(&opts.model)?;
    let fitted = if opts.data.is_some() || opts.corr.is_some() {
        let (observed, _) = observed_matrix(opts)?;
        Some(fit_model(&observed, &g, alpha)?)
    } else {
        None
    };
    print!("{}", render_diagram(&g, fitted.as_ref()));
    Ok(EXIT_OK)
}

/// Entry point used by both `main` and the integration tests.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are success, anything else is usage
            let code = if e.exit_code() == 0 { 0 } else { EXIT_USAGE };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Screen { data, format } => {
            if data.data.is_none() {
                eprintln!("error: screen requires --data <csv>");
                return EXIT_USAGE;
            }
            run_screen(data, *format)
        }
        Command::Fit(opts) | Command::Trim(opts) => {
            if opts.data.data.is_none() && opts.data.corr.is_none() {
                eprintln!("error: fit requires --data <csv> or --corr <file>");
                return EXIT_USAGE;
            }
            run_fit(opts, matches!(cli.command, Command::Trim(_)))
        }
        Command::Diagram { data, alpha } => run_diagram(data, *alpha),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}
