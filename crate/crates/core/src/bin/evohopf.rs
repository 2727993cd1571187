//! Command-line front end; every subcommand builds a `JobConfig` and hands it
//! to the library.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use evohopf::certify::CertCase;
use evohopf::cli::{self, CliError, HopfSource, JobConfig, LawSelection, RenderOptions, Report};
use evohopf::evolution::{AlgebraSpec, FamilyName};
use evohopf::fields::FieldSpec;
use evohopf::hopf::HopfJson;

/// Automorphism group schemes, Hopf algebras and universal p-algebras of
/// two-dimensional evolution algebras.
///
/// Fields are written `Q` or `GF:p`. Laws are comma lists `l0,l1,l2,l3` of
/// field literals giving p(a,b) = l0 ab + l1 ab* + l2 a*b + l3 a*b*.
/// The worker count for parallel jobs is read from EVOHOPF_WORKERS.
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on
/// invalid input.
#[derive(Parser)]
#[command(name = "evohopf", version)]
struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Append wall-clock time to the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct AlgebraArgs {
    /// Family name: A1, A2, A3, A4, A5ab, A5, A6, A7, A8.
    #[arg(long, required_unless_present = "algebra_file")]
    family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// JSON algebra description (`{"family": ..}` or `{"dim": 2, "omega": ..}`).
    #[arg(long, conflicts_with = "family")]
    algebra_file: Option<String>,
}

impl AlgebraArgs {
    fn spec(&self) -> Result<AlgebraSpec, CliError> {
        if let Some(path) = &self.algebra_file {
            return cli::read_json(path);
        }
        let name = self.family.as_deref().unwrap_or_default();
        let family: FamilyName = name.parse()?;
        Ok(AlgebraSpec::family(family, self.alpha.as_deref(), self.beta.as_deref()))
    }
}

#[derive(Args)]
struct HopfArgs {
    /// Catalog entry: K, H1, H2, H5_char2, H5, H5_alt, H6, H7, H8.
    #[arg(long, required_unless_present = "file")]
    catalog: Option<String>,
    /// Parameter of H2 and H8.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// JSON presentation file.
    #[arg(long, conflicts_with = "catalog")]
    file: Option<String>,
}

impl HopfArgs {
    fn source(&self) -> Result<HopfSource, CliError> {
        if let Some(path) = &self.file {
            let json: HopfJson = cli::read_json(path)?;
            return Ok(HopfSource::Inline(json));
        }
        Ok(HopfSource::Catalog {
            catalog: self.catalog.clone().unwrap_or_default(),
            params: self.alpha.iter().cloned().collect(),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate aut(A) over a finite field.
    Aut {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value = "GF:7")]
        field: FieldSpec,
    },
    /// Verify or enumerate Hopf algebras.
    Hopf {
        #[command(subcommand)]
        action: HopfAction,
    },
    /// Build U_p and decide faithfulness for one law or a grid of laws.
    Upalg {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        /// Single law `l0,l1,l2,l3`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "law_grid")]
        law: Option<String>,
        /// `default` (all laws with entries in -2..2) or `sample:N`.
        #[arg(long, default_value = "default")]
        law_grid: String,
        /// Seed for `sample:N`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fail unless the outcome is `faithful` or `not-faithful`.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Build the tight p-algebra T_p for one law.
    Tight {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long, allow_hyphen_values = true)]
        law: String,
        /// Also enumerate *-automorphisms (finite fields only).
        #[arg(long)]
        star_aut: bool,
    },
    /// Recompute the summary tables for all families.
    Tables {
        /// Run every row over this field instead of its default.
        #[arg(long)]
        field: Option<FieldSpec>,
    },
    /// Re-check the ideal-membership case list.
    Certify {
        /// JSON list of cases replacing the built-in list.
        #[arg(long)]
        cases: Option<String>,
        /// Skip the characteristic-2 elimination check.
        #[arg(long)]
        no_elimination: bool,
    },
    /// Re-run a job from a config file or from a JSON report.
    Replay { file: String },
}

#[derive(Subcommand)]
enum HopfAction {
    /// Check coassociativity, counit and antipode axioms.
    Verify {
        #[command(flatten)]
        hopf: HopfArgs,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
    },
    /// Enumerate rational points over a finite field.
    Points {
        #[command(flatten)]
        hopf: HopfArgs,
        #[arg(long, default_value = "GF:7")]
        field: FieldSpec,
        /// Compare with aut(A) of this family.
        #[arg(long)]
        family: Option<String>,
        /// Parameter of the family to compare with.
        #[arg(long, allow_hyphen_values = true)]
        family_alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        family_beta: Option<String>,
    },
}

fn law_parts(s: &str) -> Result<[String; 4], CliError> {
    let parts: Vec<String> = s.split(',').map(|p| p.trim().to_string()).collect();
    parts
        .try_into()
        .map_err(|p: Vec<String>| CliError::Usage(format!("a law needs four entries, got {}", p.len())))
}

fn config(command: Command) -> Result<JobConfig, CliError> {
    Ok(match command {
        Command::Aut { algebra, field } => JobConfig::Aut {
            algebra: algebra.spec()?,
            field,
        },
        Command::Hopf {
            action: HopfAction::Verify { hopf, field },
        } => JobConfig::HopfVerify {
            hopf: hopf.source()?,
            field,
        },
        Command::Hopf {
            action:
                HopfAction::Points {
                    hopf,
                    field,
                    family,
                    family_alpha,
                    family_beta,
                },
        } => {
            let algebra = match family {
                Some(f) => Some(AlgebraSpec::family(
                    f.parse()?,
                    family_alpha.as_deref(),
                    family_beta.as_deref(),
                )),
                None => None,
            };
            JobConfig::HopfPoints {
                hopf: hopf.source()?,
                field,
                algebra,
            }
        }
        Command::Upalg {
            algebra,
            field,
            law,
            law_grid,
            seed,
            expect,
        } => {
            let laws = match law {
                Some(l) => LawSelection::Single(law_parts(&l)?),
                None if law_grid == "default" => LawSelection::DefaultGrid,
                None => match law_grid.strip_prefix("sample:").and_then(|n| n.parse().ok()) {
                    Some(count) => LawSelection::Sampled { count, seed },
                    None => return Err(CliError::Usage(format!("unknown law grid {law_grid:?}"))),
                },
            };
            let expect_faithful = match expect.as_deref() {
                None => None,
                Some("faithful") => Some(true),
                Some("not-faithful") => Some(false),
                Some(other) => return Err(CliError::Usage(format!("--expect takes faithful or not-faithful, got {other:?}"))),
            };
            JobConfig::Upalg {
                algebra: algebra.spec()?,
                field,
                laws,
                expect_faithful,
            }
        }
        Command::Tight {
            algebra,
            field,
            law,
            star_aut,
        } => JobConfig::Tight {
            algebra: algebra.spec()?,
            field,
            law: law_parts(&law)?,
            star_automorphisms: star_aut,
        },
        Command::Tables { field } => JobConfig::Tables { field },
        Command::Certify { cases, no_elimination } => {
            let cases: Option<Vec<CertCase>> = cases.as_deref().map(cli::read_json).transpose()?;
            JobConfig::Certify {
                cases,
                elimination: !no_elimination,
            }
        }
        Command::Replay { file } => {
            let value: serde_json::Value = cli::read_json(&file)?;
            // a saved report carries its config under "config"
            let cfg = value.get("config").cloned().unwrap_or(value);
            serde_json::from_value(cfg).map_err(|source| CliError::Json { path: file, source })?
        }
    })
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let opts = RenderOptions {
        json: args.json,
        timings: args.timings,
    };
    let report: Result<Report, CliError> = config(args.command).and_then(|c| cli::run_job(&c));
    match report {
        Ok(r) => {
            print!("{}", r.render(opts));
            if r.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
