//! `mvp` command line: discover, project, generate, render and bench.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, SweepParam, SweepPlan};
use crate::columnar::{export_classical_csv, export_csv, load_csv};
use crate::discovery::discover;
use crate::dump::{load_model, save_model};
use crate::error::{Error, Result};
use crate::generator::{generate, GeneratorParams};
use crate::render::{render_dfg, render_e2e, render_e2o, render_mvp, Decoration, RenderOptions};
use crate::viewpoint::{project_dfg, project_log_with, CaseMerge, Viewpoint};

#[derive(Debug, Parser)]
#[command(name = "mvp", version, about = "Multiple-viewpoint process discovery")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discover an MVP model from a columnar CSV log and write its JSON dump.
    Discover {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Project a model dump onto a viewpoint as a DFG (JSON) or classical log (CSV).
    Project {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        classes: Vec<String>,
        #[arg(long, value_enum, default_value_t = ProjectKind::Dfg)]
        kind: ProjectKind,
        /// Merge whole connected groups of objects into one case instead of one hop.
        #[arg(long)]
        connected: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Generate a synthetic columnar CSV log.
    Generate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        output: PathBuf,
    },
    /// Render a model dump as Graphviz DOT.
    Render {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphKind::Mvp)]
        graph: GraphKind,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = DecorationArg::Frequency)]
        decoration: DecorationArg,
        #[arg(long)]
        show_isolated: bool,
        #[arg(long, default_value_t = 0)]
        palette_seed: u64,
        /// Viewpoint classes for `--graph dfg` (default: all classes).
        #[arg(long, value_delimiter = ',')]
        classes: Vec<String>,
        /// Restrict `--graph e2e` to these event ids.
        #[arg(long, value_delimiter = ',')]
        events: Vec<String>,
        /// Defaults to `<model stem>.<graph>.dot` next to the model.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time discovery over generated logs while sweeping one parameter.
    ///
    /// Without `--sweep`, runs the built-in events/classes/activities suite.
    Bench {
        #[arg(long)]
        sweep: Option<SweepParam>,
        #[arg(long, value_delimiter = ',')]
        points: Vec<usize>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = bench::DEFAULT_REPEATS)]
        repeats: usize,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProjectKind {
    Dfg,
    Log,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum GraphKind {
    Mvp,
    E2o,
    E2e,
    Dfg,
}

impl GraphKind {
    fn name(self) -> &'static str {
        match self {
            GraphKind::Mvp => "mvp",
            GraphKind::E2o => "e2o",
            GraphKind::E2e => "e2e",
            GraphKind::Dfg => "dfg",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DecorationArg {
    Frequency,
    Performance,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 1000)]
    pub events: usize,
    #[arg(long, default_value_t = 10)]
    pub activities: usize,
    #[arg(long, default_value_t = 3)]
    pub classes: usize,
    #[arg(long, default_value_t = 50)]
    pub objects_per_class: usize,
    #[arg(long, default_value_t = 2)]
    pub links_per_event: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl From<&ParamArgs> for GeneratorParams {
    fn from(a: &ParamArgs) -> Self {
        GeneratorParams {
            n_events: a.events,
            n_activities: a.activities,
            n_classes: a.classes,
            n_objects_per_class: a.objects_per_class,
            seed: a.seed,
            links_per_event: a.links_per_event,
        }
    }
}

impl clap::builder::ValueParserFactory for SweepParam {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| {
            s.parse::<SweepParam>().map_err(|e| e.to_string())
        })
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Discover { input, output } => {
            let model = discover(load_csv(&input)?);
            save_model(&model, &output)
        }
        Command::Project {
            model,
            classes,
            kind,
            connected,
            output,
        } => {
            let model = load_model(&model)?;
            let view = Viewpoint::new(&model.log, &classes)?;
            match kind {
                ProjectKind::Dfg => write_text(&output, &project_dfg(&model, &view)?.to_json()?),
                ProjectKind::Log => {
                    let merge = if connected {
                        CaseMerge::Connected
                    } else {
                        CaseMerge::OneHop
                    };
                    export_classical_csv(&project_log_with(&model, &view, merge)?, &output)
                }
            }
        }
        Command::Generate { params, output } => {
            let log = generate(&GeneratorParams::from(&params))?;
            export_csv(&log, &output)
        }
        Command::Render {
            model: model_path,
            graph,
            threshold,
            decoration,
            show_isolated,
            palette_seed,
            classes,
            events,
            output,
        } => {
            let model = load_model(&model_path)?;
            let text = match graph {
                GraphKind::Mvp => {
                    let opts = RenderOptions {
                        decoration: match decoration {
                            DecorationArg::Frequency => Decoration::Frequency,
                            DecorationArg::Performance => Decoration::Performance,
                        },
                        threshold,
                        show_isolated,
                        palette_seed,
                    };
                    render_mvp(&model, &opts)?
                }
                GraphKind::E2o => render_e2o(&model.log, &model.e2o),
                GraphKind::E2e => {
                    let subset = (!events.is_empty()).then_some(events.as_slice());
                    render_e2e(&model.log, &model.e2e, subset)?
                }
                GraphKind::Dfg => {
                    let view = if classes.is_empty() {
                        Viewpoint::all(&model.log)?
                    } else {
                        Viewpoint::new(&model.log, &classes)?
                    };
                    render_dfg(&project_dfg(&model, &view)?)
                }
            };
            let output = output.unwrap_or_else(|| default_dot_path(&model_path, graph));
            write_text(&output, &text)
        }
        Command::Bench {
            sweep,
            points,
            params,
            repeats,
            output,
        } => {
            let plans = match sweep {
                Some(parameter) => vec![SweepPlan {
                    parameter,
                    points,
                    fixed: GeneratorParams::from(&params),
                }],
                None if points.is_empty() => bench::desk_suite(),
                None => {
                    return Err(Error::Domain("--points needs --sweep".into()));
                }
            };
            let report = bench::run_suite(&plans, repeats)?;
            for sweep in &report.sweeps {
                println!(
                    "{}: doubling ratio {:.2} (exponent {:.2})",
                    sweep.parameter, sweep.fit.doubling_ratio, sweep.fit.exponent
                );
            }
            write_text(&output, &report.to_json()?)
        }
    }
}

/// `<stem>.<graph>.dot` next to `model`.
pub fn default_dot_path(model: &Path, graph: GraphKind) -> PathBuf {
    let stem = model
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".into());
    model.with_file_name(format!("{stem}.{}.dot", graph.name()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_kebab_case_flags() {
        let cli = Cli::try_parse_from([
            "mvp",
            "render",
            "--model",
            "m.json",
            "--threshold",
            "-0.5",
            "--decoration",
            "performance",
            "--show-isolated",
            "--palette-seed",
            "3",
        ])
        .unwrap();
        match cli.command {
            Command::Render {
                threshold,
                show_isolated,
                palette_seed,
                ..
            } => {
                assert_eq!(threshold, -0.5);
                assert!(show_isolated);
                assert_eq!(palette_seed, 3);
            }
            other => panic!("{other:?}"),
        }
        let cli = Cli::try_parse_from([
            "mvp",
            "project",
            "--model",
            "m",
            "--classes",
            "a,b",
            "--output",
            "o",
        ])
        .unwrap();
        assert!(
            matches!(cli.command, Command::Project { ref classes, .. } if classes == &["a", "b"])
        );
    }

    #[test]
    fn default_dot_name() {
        assert_eq!(
            default_dot_path(Path::new("/tmp/run/model.json"), GraphKind::E2o),
            PathBuf::from("/tmp/run/model.e2o.dot")
        );
    }
}
