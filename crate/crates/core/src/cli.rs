//! Jobs behind the `evohopf` command line: a serializable [`JobConfig`] per
//! command, one report structure per job, rendered as text or JSON.
//!
//! Reports are deterministic: the same config gives byte-identical output.
//! Wall-clock timings are only added when explicitly requested.

use std::collections::HashSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{self, CaseOutcome, CertCase, CertifyError};
use crate::evolution::{format_matrix, AlgebraSpec, EvolutionAlgebra, EvolutionError};
use crate::fields::{FieldError, FieldSpec};
use crate::hopf::{
    self, AxiomReport, CatalogName, HopfError, HopfJson, HopfPresentation, PointsIsoReport, RationalPoint,
};
use crate::tables::{self, TablesReport};
use crate::upalgebra::{default_law_grid, ProductLaw, UniversalPAlgebra, UpError};

/// Environment variable holding the worker count for parallel jobs.
pub const WORKERS_ENV: &str = "EVOHOPF_WORKERS";

/// Search bound for *-automorphism enumeration.
const STAR_AUT_BOUND: u128 = 100_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error(transparent)]
    Up(#[from] UpError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{what} needs a finite field, got {field}; try --field GF:7")]
    InfiniteField { what: &'static str, field: FieldSpec },
    #[error("{WORKERS_ENV} must be a positive integer, got {0:?}")]
    Workers(String),
    #[error("{0}")]
    Usage(String),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing {path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

/// A Hopf algebra given by catalog name or inline presentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HopfSource {
    Catalog {
        catalog: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        params: Vec<String>,
    },
    Inline(HopfJson),
}

impl HopfSource {
    pub fn build(&self, field: FieldSpec) -> Result<HopfPresentation, CliError> {
        match self {
            HopfSource::Catalog { catalog, params } => {
                let name: CatalogName = catalog.parse()?;
                let ps = params
                    .iter()
                    .map(|s| field.parse_element(s))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(hopf::catalog(name, field, &ps)?)
            }
            HopfSource::Inline(json) => Ok(HopfPresentation::from_json(json, field)?),
        }
    }
}

/// Which laws a `upalg` job examines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawSelection {
    Single([String; 4]),
    /// Every law of the default grid.
    DefaultGrid,
    /// `count` laws drawn without replacement from the default grid.
    Sampled { count: usize, seed: u64 },
}

impl LawSelection {
    pub fn laws(&self, field: FieldSpec) -> Result<Vec<ProductLaw>, CliError> {
        match self {
            LawSelection::Single(l) => Ok(vec![ProductLaw::from_strs(field, l)?]),
            LawSelection::DefaultGrid => Ok(default_law_grid(field)),
            LawSelection::Sampled { count, seed } => {
                let grid = default_law_grid(field);
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok(grid.choose_multiple(&mut rng, *count).cloned().collect())
            }
        }
    }
}

/// Full description of a job; echoed at the top of every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum JobConfig {
    Aut {
        algebra: AlgebraSpec,
        field: FieldSpec,
    },
    HopfVerify {
        hopf: HopfSource,
        field: FieldSpec,
    },
    HopfPoints {
        hopf: HopfSource,
        field: FieldSpec,
        /// Algebra whose automorphism group the points are compared with.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        algebra: Option<AlgebraSpec>,
    },
    Upalg {
        algebra: AlgebraSpec,
        field: FieldSpec,
        laws: LawSelection,
        /// Expected answer to "some examined law is faithful".
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_faithful: Option<bool>,
    },
    Tight {
        algebra: AlgebraSpec,
        field: FieldSpec,
        law: [String; 4],
        #[serde(default)]
        star_automorphisms: bool,
    },
    Tables {
        /// Run every row over this field instead of its default one.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        field: Option<FieldSpec>,
    },
    Certify {
        /// Case list; the built-in list when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cases: Option<Vec<CertCase>>,
        #[serde(default = "default_true")]
        elimination: bool,
    },
}

fn default_true() -> bool {
    true
}

/// Output format options; not part of the config since they do not change
/// what is computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RenderOptions {
    pub json: bool,
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutReport {
    pub algebra: String,
    pub field: String,
    pub order: usize,
    pub matrices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointsReport {
    pub hopf: String,
    pub field: String,
    pub count: usize,
    pub points: Vec<String>,
    /// Closure of the points under the convolution product and antipode.
    pub group: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<PointsIsoReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawOutcome {
    pub law: String,
    pub faithful: bool,
    pub dim_u: Option<usize>,
    pub dim_t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_relation: Option<Vec<String>>,
    pub gb_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpalgReport {
    pub algebra: String,
    pub field: String,
    pub examined: usize,
    pub faithful_count: usize,
    pub laws: Vec<LawOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_faithful: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightReport {
    pub algebra: String,
    pub field: String,
    pub law: String,
    pub dim_u: Option<usize>,
    pub dim_t: Option<usize>,
    pub basis: Vec<String>,
    pub unit: Option<String>,
    pub contains_one: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star_automorphisms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub induced_star_group: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EliminationOutcome {
    pub eliminated: Vec<String>,
    pub gcd: String,
    pub quoted_gcd: String,
    pub z_member: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub cases: Vec<CaseOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elimination: Option<EliminationOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportBody {
    Aut(AutReport),
    HopfVerify(AxiomReport),
    HopfPoints(PointsReport),
    Upalg(UpalgReport),
    Tight(TightReport),
    Tables(TablesReport),
    Certify(CertifyReport),
}

impl ReportBody {
    pub fn passed(&self) -> bool {
        match self {
            ReportBody::Aut(_) | ReportBody::Tight(_) => true,
            ReportBody::HopfVerify(r) => r.all_passed(),
            ReportBody::HopfPoints(r) => r.group && r.comparison.as_ref().is_none_or(|c| c.passed()),
            ReportBody::Upalg(r) => r.expect_faithful.is_none_or(|e| e == (r.faithful_count > 0)),
            ReportBody::Tables(r) => r.passed(),
            ReportBody::Certify(r) => {
                r.cases.iter().all(|c| c.passed())
                    && r.elimination.as_ref().is_none_or(|e| e.z_member && e.gcd == "z" && e.quoted_gcd == "z")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: JobConfig,
    pub passed: bool,
    pub result: ReportBody,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn render(&self, opts: RenderOptions) -> String {
        let mut r = self.clone();
        if !opts.timings {
            r.elapsed_ms = None;
        }
        if opts.json {
            let mut s = serde_json::to_string_pretty(&r).expect("reports serialize");
            s.push('\n');
            s
        } else {
            r.render_text()
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let cfg = serde_json::to_string(&self.config).expect("configs serialize");
        out.push_str(&format!("config: {cfg}\n"));
        match &self.result {
            ReportBody::Aut(r) => {
                out.push_str(&format!("aut({}) over {}: order {}\n", r.algebra, r.field, r.order));
                for m in &r.matrices {
                    out.push_str(&format!("  {m}\n"));
                }
            }
            ReportBody::HopfVerify(r) => {
                out.push_str(&format!("Hopf axioms for {} over {}\n", r.name, r.field));
                for (name, c) in [
                    ("well-defined", &r.well_defined),
                    ("coassociativity", &r.coassociativity),
                    ("counit", &r.counit),
                    ("antipode", &r.antipode),
                ] {
                    let verdict = if c.passed { "pass" } else { "FAIL" };
                    match &c.witness {
                        Some(w) => out.push_str(&format!("  {name:<16} {verdict}  ({w})\n")),
                        None => out.push_str(&format!("  {name:<16} {verdict}\n")),
                    }
                }
            }
            ReportBody::HopfPoints(r) => {
                out.push_str(&format!("rational points of {} over {}: {}\n", r.hopf, r.field, r.count));
                for p in &r.points {
                    out.push_str(&format!("  {p}\n"));
                }
                out.push_str(&format!("  closed under product and antipode: {}\n", yes_no(r.group)));
                if let Some(c) = &r.comparison {
                    out.push_str(&format!(
                        "  |aut points| = {}, bijective {}, products respected {}\n",
                        c.aut_points,
                        yes_no(c.bijective),
                        yes_no(c.respects_products)
                    ));
                    if let Some(w) = &c.witness {
                        out.push_str(&format!("  witness: {w}\n"));
                    }
                }
            }
            ReportBody::Upalg(r) => {
                out.push_str(&format!(
                    "U_p for {} over {}: {} of {} laws faithful\n",
                    r.algebra, r.field, r.faithful_count, r.examined
                ));
                let show_all = r.laws.len() == 1;
                for l in &r.laws {
                    if !show_all && !l.faithful {
                        continue;
                    }
                    out.push_str(&format!(
                        "  law {}: {}, dim U = {}, dim T = {}, GB size {}\n",
                        l.law,
                        if l.faithful { "faithful" } else { "not faithful" },
                        fmt_dim(l.dim_u),
                        fmt_dim(l.dim_t),
                        l.gb_size
                    ));
                    if let Some(k) = &l.kernel_relation {
                        out.push_str(&format!("    kernel relation: ({})\n", k.join(", ")));
                    }
                }
                if let Some(e) = r.expect_faithful {
                    out.push_str(&format!("  expected: {}\n", if e { "faithful" } else { "not faithful" }));
                }
            }
            ReportBody::Tight(r) => {
                out.push_str(&format!("T_p for {} over {}, law {}\n", r.algebra, r.field, r.law));
                out.push_str(&format!("  dim U = {}, dim T = {}\n", fmt_dim(r.dim_u), fmt_dim(r.dim_t)));
                if !r.basis.is_empty() {
                    out.push_str(&format!("  basis: {}\n", r.basis.join(", ")));
                }
                out.push_str(&format!(
                    "  unit: {}\n",
                    r.unit.clone().unwrap_or_else(|| "none".into())
                ));
                out.push_str(&format!("  contains 1 of U: {}\n", yes_no(r.contains_one)));
                if let Some(n) = r.star_automorphisms {
                    out.push_str(&format!("  |Aut*(T_p)| = {n}\n"));
                }
                if let Some(n) = r.induced_star_group {
                    out.push_str(&format!("  |<aut(A), *>| = {n}\n"));
                }
            }
            ReportBody::Tables(r) => out.push_str(&tables::render_text(r)),
            ReportBody::Certify(r) => {
                for c in &r.cases {
                    out.push_str(&format!(
                        "[{}] {} ({} ideal)\n",
                        if c.passed() { "pass" } else { "FAIL" },
                        c.label,
                        c.ideal
                    ));
                    if let Some(inside) = c.listed_in_ideal {
                        out.push_str(&format!("    listed generators lie in I: {}\n", yes_no(inside)));
                    }
                    for m in &c.checks {
                        out.push_str(&format!(
                            "    {} {}\n",
                            if m.member { "in I:    " } else { "NOT in I:" },
                            m.polynomial
                        ));
                    }
                }
                if let Some(e) = &r.elimination {
                    out.push_str("elimination of x, y, t (characteristic 2):\n");
                    for f in &e.eliminated {
                        out.push_str(&format!("    {f}\n"));
                    }
                    out.push_str(&format!("    gcd = {}, gcd of quoted polynomials = {}\n", e.gcd, e.quoted_gcd));
                    out.push_str(&format!("    z in ideal: {}\n", yes_no(e.z_member)));
                }
            }
        }
        out.push_str(&format!("result: {}\n", if self.passed { "PASS" } else { "FAIL" }));
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed_ms: {ms}\n"));
        }
        out
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn fmt_dim(d: Option<usize>) -> String {
    d.map_or_else(|| "infinite".to_string(), |n| n.to_string())
}

/// Worker pool sized by [`WORKERS_ENV`], or rayon's default when unset.
pub fn worker_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| CliError::Workers(v.clone()))?;
        if n == 0 {
            return Err(CliError::Workers(v));
        }
        b = b.num_threads(n);
    }
    Ok(b.build().expect("thread pool"))
}

/// Reads a JSON file into `T`.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_string(),
        source,
    })
}

/// Runs a job. Errors are reserved for malformed input; failed checks are
/// reported through [`Report::passed`].
pub fn run_job(config: &JobConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let result = match config {
        JobConfig::Aut { algebra, field } => ReportBody::Aut(cmd_aut(algebra, *field)?),
        JobConfig::HopfVerify { hopf, field } => ReportBody::HopfVerify(hopf::verify_hopf(&hopf.build(*field)?)?),
        JobConfig::HopfPoints { hopf, field, algebra } => {
            ReportBody::HopfPoints(cmd_hopf_points(hopf, *field, algebra.as_ref())?)
        }
        JobConfig::Upalg {
            algebra,
            field,
            laws,
            expect_faithful,
        } => ReportBody::Upalg(cmd_upalg(algebra, *field, laws, *expect_faithful)?),
        JobConfig::Tight {
            algebra,
            field,
            law,
            star_automorphisms,
        } => ReportBody::Tight(cmd_tight(algebra, *field, law, *star_automorphisms)?),
        JobConfig::Tables { field } => ReportBody::Tables(tables::run_tables(*field, &worker_pool()?)?),
        JobConfig::Certify { cases, elimination } => ReportBody::Certify(cmd_certify(cases.as_deref(), *elimination)?),
    };
    Ok(Report {
        config: config.clone(),
        passed: result.passed(),
        result,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

pub fn cmd_aut(spec: &AlgebraSpec, field: FieldSpec) -> Result<AutReport, CliError> {
    if !field.is_finite() {
        return Err(CliError::InfiniteField {
            what: "enumerating automorphisms",
            field,
        });
    }
    let a = spec.build(field)?;
    let points = a.aut_points()?;
    Ok(AutReport {
        algebra: a.label().to_string(),
        field: field.to_string(),
        order: points.len(),
        matrices: points.iter().map(format_matrix).collect(),
    })
}

/// Whether the points contain the counit and are closed under products and
/// the antipode.
pub fn points_form_group(h: &HopfPresentation, points: &[RationalPoint]) -> Result<bool, HopfError> {
    let set: HashSet<&RationalPoint> = points.iter().collect();
    if !set.contains(&hopf::counit_point(h)) {
        return Ok(false);
    }
    for a in points {
        if !set.contains(&hopf::antipode_point(h, a)?) {
            return Ok(false);
        }
        for b in points {
            if !set.contains(&hopf::point_product(h, a, b)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn cmd_hopf_points(
    source: &HopfSource,
    field: FieldSpec,
    algebra: Option<&AlgebraSpec>,
) -> Result<PointsReport, CliError> {
    if !field.is_finite() {
        return Err(CliError::InfiniteField {
            what: "enumerating rational points",
            field,
        });
    }
    let h = source.build(field)?;
    let points = hopf::rational_points(&h)?;
    let comparison = match algebra {
        Some(spec) => Some(hopf::points_group_iso_check(&h, &spec.build(field)?)?),
        None => None,
    };
    Ok(PointsReport {
        hopf: h.name().to_string(),
        field: field.to_string(),
        count: points.len(),
        points: points.iter().map(|p| p.display(&h)).collect(),
        group: points_form_group(&h, &points)?,
        comparison,
    })
}

fn law_outcome(a: &EvolutionAlgebra, law: &ProductLaw) -> Result<LawOutcome, UpError> {
    let r = UniversalPAlgebra::build(a, law)?.faithful()?;
    Ok(LawOutcome {
        law: law.to_string(),
        faithful: r.faithful,
        dim_u: r.dim_u,
        dim_t: r.dim_t,
        kernel_relation: r.kernel_relation.map(|v| v.iter().map(|c| c.to_string()).collect()),
        gb_size: r.gb_size,
    })
}

/// Faithfulness of `U_p` for each law, computed on the worker pool and
/// returned in the order of `laws`.
pub fn sweep_laws(
    a: &EvolutionAlgebra,
    laws: &[ProductLaw],
    pool: &rayon::ThreadPool,
) -> Result<Vec<LawOutcome>, UpError> {
    pool.install(|| laws.par_iter().map(|l| law_outcome(a, l)).collect())
}

pub fn cmd_upalg(
    spec: &AlgebraSpec,
    field: FieldSpec,
    selection: &LawSelection,
    expect_faithful: Option<bool>,
) -> Result<UpalgReport, CliError> {
    let a = spec.build(field)?;
    let laws = selection.laws(field)?;
    let outcomes = sweep_laws(&a, &laws, &worker_pool()?)?;
    Ok(UpalgReport {
        algebra: a.label().to_string(),
        field: field.to_string(),
        examined: outcomes.len(),
        faithful_count: outcomes.iter().filter(|o| o.faithful).count(),
        laws: outcomes,
        expect_faithful,
    })
}

pub fn cmd_tight(
    spec: &AlgebraSpec,
    field: FieldSpec,
    law: &[String; 4],
    star_automorphisms: bool,
) -> Result<TightReport, CliError> {
    let a = spec.build(field)?;
    let law = ProductLaw::from_strs(field, law)?;
    let up = UniversalPAlgebra::build(&a, &law)?;
    let dim_u = up.dim();
    let mut report = TightReport {
        algebra: a.label().to_string(),
        field: field.to_string(),
        law: law.to_string(),
        dim_u,
        dim_t: None,
        basis: Vec::new(),
        unit: None,
        contains_one: false,
        star_automorphisms: None,
        induced_star_group: None,
    };
    if dim_u.is_none() {
        return Ok(report);
    }
    let t = up.tight()?;
    report.dim_t = Some(t.dim());
    report.basis = t.basis().iter().map(|b| b.to_string()).collect();
    report.unit = t.unit()?.map(|u| u.to_string());
    report.contains_one = t.contains_one()?;
    if star_automorphisms {
        if !field.is_finite() {
            return Err(CliError::InfiniteField {
                what: "enumerating *-automorphisms",
                field,
            });
        }
        report.star_automorphisms = Some(t.star_automorphisms(None, STAR_AUT_BOUND)?.len());
        report.induced_star_group = Some(up.induced_star_group(&t)?.len());
    }
    Ok(report)
}

pub fn cmd_certify(cases: Option<&[CertCase]>, elimination: bool) -> Result<CertifyReport, CliError> {
    let defaults;
    let cases = match cases {
        Some(c) => c,
        None => {
            defaults = certify::default_cases();
            &defaults
        }
    };
    let outcomes = cases.iter().map(certify::run_case).collect::<Result<Vec<_>, _>>()?;
    let elimination = if elimination {
        let e = certify::char2_elimination(FieldSpec::Prime(2), "1", "1")?;
        Some(EliminationOutcome {
            eliminated: e.eliminated.iter().map(|f| f.to_string()).collect(),
            gcd: e.gcd.to_string(),
            quoted_gcd: e.quoted_gcd.to_string(),
            z_member: e.z_member,
        })
    } else {
        None
    };
    Ok(CertifyReport {
        cases: outcomes,
        elimination,
    })
}
