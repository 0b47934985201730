use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vaforms::config::{BuiltModel, FunctionalSource, ModelConfig, ModelVisitor};
use vaforms::report::{self, VerifyRun};
use vaforms::{Rational, Result, VaError, VertexAlgebra, Weight};

/// Exact invariant forms and radicals of graded vertex algebras.
#[derive(Parser)]
#[command(name = "vaforms", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Block dimensions inside the cutoffs.
    Dims(Common),
    /// Gram matrix of the invariant form on one block pair, or on a whole degree.
    Gram {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        /// Comma-separated weight, e.g. `1,0`. Omit for every block of the degree.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        /// Column weight; defaults to `--weight`.
        #[arg(long, allow_hyphen_values = true)]
        partner: Option<String>,
    },
    /// Radical of the invariant form, block by block.
    Radical(Common),
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Highest degree of the basis states fed to the suites; defaults to `max_degree`.
        #[arg(long)]
        cutoff: Option<i64>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    max_degree: Option<i64>,
    #[arg(long)]
    max_weight_len: Option<usize>,
    /// `canonical` or a JSON file of functional values.
    #[arg(long, default_value = "canonical")]
    functional: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| VaError::Config(format!("{}: {e}", path.display())))
}

impl Common {
    fn model(&self) -> Result<BuiltModel> {
        ModelConfig::from_json(&read(&self.model)?)?
            .with_overrides(self.max_degree, self.max_weight_len)
            .build()
    }

    fn functional(&self) -> Result<FunctionalSource> {
        match self.functional.as_str() {
            "canonical" => Ok(FunctionalSource::Canonical),
            path => FunctionalSource::from_json(&read(Path::new(path))?),
        }
    }

    fn json_only(&self) -> Result<()> {
        match self.format {
            Format::Json => Ok(()),
            Format::Csv => Err(VaError::Config("CSV output is available for dims only".into())),
        }
    }
}

fn parse_weight(s: &str) -> Result<Weight> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| VaError::Config(format!("bad weight {s:?}: {e}"))))
        .collect::<Result<Vec<_>>>()
        .map(Weight)
}

struct Dims(Format);

impl ModelVisitor for Dims {
    type Output = String;
    fn visit<M: VertexAlgebra<Rational>>(self, model: &Arc<M>) -> String {
        let rows = report::dims(model.as_ref());
        match self.0 {
            Format::Json => report::to_json(&serde_json::json!({ "model": model.describe(), "blocks": rows })),
            Format::Csv => report::dims_csv(&rows),
        }
    }
}

struct Gram {
    functional: FunctionalSource,
    degree: i64,
    pair: Option<(Weight, Weight)>,
}

impl ModelVisitor for Gram {
    type Output = Result<String>;
    fn visit<M: VertexAlgebra<Rational>>(self, model: &Arc<M>) -> Result<String> {
        let m = model.as_ref();
        let form = self.functional.form(m)?;
        let v = match &self.pair {
            Some((w, p)) => report::gram_report(m, &form, w, p, self.degree)?,
            None => report::degree_gram_report(m, &form, self.degree)?,
        };
        Ok(report::to_json(&v))
    }
}

struct Radical(FunctionalSource);

impl ModelVisitor for Radical {
    type Output = Result<String>;
    fn visit<M: VertexAlgebra<Rational>>(self, model: &Arc<M>) -> Result<String> {
        let form = self.0.form(model.as_ref())?;
        Ok(report::to_json(&report::radical_report(model.as_ref(), &form)?))
    }
}

/// Output text and whether every verification passed.
fn run(cli: Cli) -> Result<(String, bool)> {
    match cli.command {
        Command::Dims(c) => Ok((c.model()?.visit(Dims(c.format)), true)),
        Command::Gram { common, degree, weight, partner } => {
            common.json_only()?;
            let pair = match (weight, partner) {
                (Some(w), p) => {
                    let w = parse_weight(&w)?;
                    let p = p.map(|p| parse_weight(&p)).transpose()?.unwrap_or_else(|| w.clone());
                    Some((w, p))
                }
                (None, Some(_)) => return Err(VaError::Config("--partner needs --weight".into())),
                (None, None) => None,
            };
            let g = Gram { functional: common.functional()?, degree, pair };
            Ok((common.model()?.visit(g)?, true))
        }
        Command::Radical(c) => {
            c.json_only()?;
            Ok((c.model()?.visit(Radical(c.functional()?))?, true))
        }
        Command::Verify { common, suite, seed, samples, cutoff } => {
            common.json_only()?;
            let run = VerifyRun { suite, seed, samples, cutoff, functional: common.functional()? };
            let out = common.model()?.visit(&run)?;
            Ok((report::to_json(&out), out.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, passed)) => {
            print!("{text}");
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
