//! Summary tables over all families: automorphism group, representing Hopf
//! algebra, faithfulness of the universal representation and the tight
//! algebra, each computed and compared with the expected entry.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cli::{fmt_dim, yes_no, CliError};
use crate::evolution::{EvolutionAlgebra, EvolutionError, FamilyName};
use crate::fields::{FieldElement, FieldSpec};
use crate::hopf::{self, CatalogName, HopfPresentation};
use crate::upalgebra::{default_law_grid, ProductLaw, UniversalPAlgebra};

/// Fields a row is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharClass {
    Any,
    Two,
    NotTwo,
}

impl CharClass {
    fn admits(self, field: FieldSpec) -> bool {
        match self {
            CharClass::Any => true,
            CharClass::Two => field.characteristic() == 2,
            CharClass::NotTwo => field.characteristic() != 2,
        }
    }

    fn default_field(self) -> FieldSpec {
        match self {
            CharClass::Two => FieldSpec::Prime(2),
            _ => FieldSpec::Rationals,
        }
    }
}

/// Isomorphism type of the automorphism group functor, enough to count its
/// points over a finite field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupShape {
    Trivial,
    /// n-th roots of unity.
    Mu(u64),
    /// Constant group of order 2; agrees with `Mu(2)` off characteristic 2.
    C2,
    /// Cube roots of unity extended by the constant group of order 2.
    Mu3C2,
    Additive,
    Multiplicative,
    MultiplicativeTimesAdditive,
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

impl GroupShape {
    /// Number of points over GF(q).
    pub fn order(self, q: u64) -> usize {
        let n = match self {
            GroupShape::Trivial => 1,
            GroupShape::Mu(k) => gcd(k, q - 1),
            GroupShape::C2 => 2,
            GroupShape::Mu3C2 => gcd(3, q - 1) * 2,
            GroupShape::Additive => q,
            GroupShape::Multiplicative => q - 1,
            GroupShape::MultiplicativeTimesAdditive => q * (q - 1),
        };
        n as usize
    }

    pub fn describe(self) -> String {
        match self {
            GroupShape::Trivial => "1".into(),
            GroupShape::Mu(k) => format!("mu_{k}"),
            GroupShape::C2 => "mu_2 ~ C_2".into(),
            GroupShape::Mu3C2 => "mu_3 x| C_2".into(),
            GroupShape::Additive => "(K,+)".into(),
            GroupShape::Multiplicative => "(K,*)".into(),
            GroupShape::MultiplicativeTimesAdditive => "K^x x K".into(),
        }
    }
}

/// Expected entries of one row.
#[derive(Debug, Clone)]
pub struct RowSpec {
    pub label: &'static str,
    pub family: FamilyName,
    pub params: &'static [&'static str],
    pub class: CharClass,
    pub aut: GroupShape,
    pub hopf: CatalogName,
    pub hopf_params: &'static [&'static str],
    pub hopf_description: &'static str,
    /// `None` for infinite-dimensional Hopf algebras.
    pub hopf_dim: Option<usize>,
    pub faithful: bool,
    /// Laws known to give faithful representations; the default grid is
    /// swept for rows expected not faithful.
    pub faithful_laws: &'static [[&'static str; 4]],
    /// Whether `T_p` is expected to match the Hopf algebra via a recorded
    /// correspondence.
    pub tight_matches_hopf: bool,
}

pub fn table_rows() -> Vec<RowSpec> {
    use CharClass::*;
    use GroupShape::*;
    let row = |label, family, params, class, aut, hopf, hopf_params, desc, dim, faithful, laws, tight| RowSpec {
        label,
        family,
        params,
        class,
        aut,
        hopf,
        hopf_params,
        hopf_description: desc,
        hopf_dim: dim,
        faithful,
        faithful_laws: laws,
        tight_matches_hopf: tight,
    };
    vec![
        row("A1", FamilyName::A1, &[], Any, C2, CatalogName::H1, &[], "K^2", Some(2), true, &[["0", "1", "0", "0"]], true),
        row(
            "A2(1)",
            FamilyName::A2,
            &["1"],
            Any,
            Mu3C2,
            CatalogName::H2,
            &["1"],
            "KC3 (x) KC2",
            Some(6),
            true,
            &[["0", "0", "0", "1"]],
            true,
        ),
        row("A3(1)", FamilyName::A3, &["1"], Any, Trivial, CatalogName::K, &[], "K", Some(1), false, &[], false),
        row("A4(1)", FamilyName::A4, &["1"], Any, Trivial, CatalogName::K, &[], "K", Some(1), false, &[], false),
        row("A5(1,2)", FamilyName::A5ab, &["1", "2"], Any, Trivial, CatalogName::K, &[], "K", Some(1), false, &[], false),
        row(
            "A5(2,2)",
            FamilyName::A5ab,
            &["2", "2"],
            Any,
            C2,
            CatalogName::H1,
            &[],
            "K^2",
            Some(2),
            true,
            &[["1", "0", "0", "2"]],
            true,
        ),
        row(
            "A5, char 2",
            FamilyName::A5,
            &[],
            Two,
            Additive,
            CatalogName::H5Char2,
            &[],
            "K[x]",
            None,
            true,
            &[["1", "0", "0", "1"]],
            false,
        ),
        row(
            "A5, char != 2",
            FamilyName::A5,
            &[],
            NotTwo,
            Multiplicative,
            CatalogName::H5,
            &[],
            "K[x^+-1]",
            None,
            true,
            &[["-2", "0", "0", "2"]],
            false,
        ),
        row(
            "A6",
            FamilyName::A6,
            &[],
            Any,
            MultiplicativeTimesAdditive,
            CatalogName::H6,
            &[],
            "K[x, y^+-1]",
            None,
            true,
            &[["1", "0", "0", "0"]],
            false,
        ),
        row(
            "A7",
            FamilyName::A7,
            &[],
            Any,
            Multiplicative,
            CatalogName::H7,
            &[],
            "K[x^+-1]",
            None,
            true,
            &[["1", "0", "0", "0"]],
            false,
        ),
        row(
            "A8(1), char != 2",
            FamilyName::A8,
            &["1"],
            NotTwo,
            Mu(2),
            CatalogName::H8,
            &["1"],
            "K^2",
            Some(2),
            true,
            &[["-15/4", "17/4", "17/4", "-15/4"]],
            false,
        ),
        row(
            "A8(1), char 2",
            FamilyName::A8,
            &["1"],
            Two,
            Trivial,
            CatalogName::H8,
            &["1"],
            "K(e) = K[x]/(x^2)",
            Some(2),
            false,
            &[],
            false,
        ),
    ]
}

/// Computed entries of one row with the comparison against its spec.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub field: String,
    /// Set when the row does not apply to the requested field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub aut_shape: String,
    /// Finite field the point counts are taken over.
    pub point_field: String,
    pub aut_order: usize,
    pub aut_order_expected: usize,
    pub hopf: String,
    pub hopf_entry: String,
    pub hopf_entry_matches_family: bool,
    pub hopf_dim: Option<usize>,
    pub hopf_dim_expected: Option<usize>,
    pub hopf_axioms: bool,
    pub hopf_points: usize,
    pub points_iso: bool,
    pub faithful: bool,
    pub faithful_expected: bool,
    pub laws_examined: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faithful_law: Option<String>,
    /// `T_p` matches the Hopf algebra; `None` when no match is expected.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tight_matches_hopf: Option<bool>,
    pub failures: Vec<String>,
}

impl TableRow {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn skipped(spec: &RowSpec, field: FieldSpec, reason: String) -> Self {
        TableRow {
            label: spec.label.to_string(),
            field: field.to_string(),
            skipped: Some(reason),
            aut_shape: spec.aut.describe(),
            point_field: String::new(),
            aut_order: 0,
            aut_order_expected: 0,
            hopf: spec.hopf_description.to_string(),
            hopf_entry: spec.hopf.to_string(),
            hopf_entry_matches_family: false,
            hopf_dim: None,
            hopf_dim_expected: spec.hopf_dim,
            hopf_axioms: false,
            hopf_points: 0,
            points_iso: false,
            faithful: false,
            faithful_expected: spec.faithful,
            laws_examined: 0,
            faithful_law: None,
            tight_matches_hopf: None,
            failures: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablesReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub rows: Vec<TableRow>,
}

impl TablesReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(TableRow::passed)
    }

    pub fn row(&self, label: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

fn parse_all(field: FieldSpec, xs: &[&str]) -> Result<Vec<FieldElement>, CliError> {
    Ok(xs.iter().map(|s| field.parse_element(s)).collect::<Result<_, _>>()?)
}

fn build_algebra(spec: &RowSpec, field: FieldSpec) -> Result<Option<EvolutionAlgebra>, CliError> {
    let params = parse_all(field, spec.params)?;
    match EvolutionAlgebra::family(spec.family, field, &params) {
        Ok(a) => Ok(Some(a)),
        Err(EvolutionError::Parameter { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn catalog_entry(spec: &RowSpec, field: FieldSpec) -> Result<HopfPresentation, CliError> {
    Ok(hopf::catalog(spec.hopf, field, &parse_all(field, spec.hopf_params)?)?)
}

/// Computes one row over `field` (its default field when `None`).
pub fn run_row(spec: &RowSpec, field: Option<FieldSpec>) -> Result<TableRow, CliError> {
    let field = field.unwrap_or(spec.class.default_field());
    if !spec.class.admits(field) {
        return Ok(TableRow::skipped(spec, field, "characteristic".into()));
    }
    let Some(algebra) = build_algebra(spec, field)? else {
        return Ok(TableRow::skipped(spec, field, "parameters degenerate over this field".into()));
    };
    let point_field = if field.is_finite() { field } else { FieldSpec::Prime(7) };
    let Some(point_algebra) = build_algebra(spec, point_field)? else {
        return Ok(TableRow::skipped(spec, field, "parameters degenerate over the point field".into()));
    };
    let mut row = TableRow::skipped(spec, field, String::new());
    row.skipped = None;
    row.point_field = point_field.to_string();

    let aut = point_algebra.aut_points()?;
    row.aut_order = aut.len();
    row.aut_order_expected = spec.aut.order(point_field.characteristic());

    let h = catalog_entry(spec, field)?;
    let params = parse_all(field, spec.params)?;
    row.hopf_entry = h.name().to_string();
    row.hopf_entry_matches_family = hopf::catalog_for_family(spec.family, field, &params)?.name() == h.name();
    row.hopf_dim = h.dim();
    row.hopf_axioms = hopf::verify_hopf(&h)?.all_passed();
    let hp = catalog_entry(spec, point_field)?;
    row.hopf_points = hopf::rational_points(&hp)?.len();
    row.points_iso = hopf::points_group_iso_check(&hp, &point_algebra)?.passed();

    let laws: Vec<ProductLaw> = if spec.faithful {
        spec.faithful_laws
            .iter()
            .map(|l| ProductLaw::from_strs(field, l))
            .collect::<Result<_, _>>()?
    } else {
        default_law_grid(field)
    };
    for law in &laws {
        row.laws_examined += 1;
        if UniversalPAlgebra::build(&algebra, law)?.faithful()?.faithful {
            row.faithful = true;
            row.faithful_law = Some(law.to_string());
            break;
        }
    }

    if spec.tight_matches_hopf {
        let rc = hopf::recorded_correspondences()
            .into_iter()
            .find(|rc| {
                rc.family == spec.family
                    && rc.params.iter().map(|p| p.to_string()).collect::<Vec<_>>() == spec.params
            })
            .ok_or_else(|| CliError::Usage(format!("no recorded correspondence for {}", spec.label)))?;
        row.tight_matches_hopf = Some(hopf::run_recorded_correspondence(&rc, field)?.passed());
    }

    let mut fail = |ok: bool, what: &str| {
        if !ok {
            row.failures.push(what.to_string());
        }
    };
    fail(row.aut_order == row.aut_order_expected, "automorphism count");
    fail(row.hopf_entry_matches_family, "catalog entry for family");
    fail(row.hopf_dim == spec.hopf_dim, "Hopf dimension");
    fail(row.hopf_axioms, "Hopf axioms");
    fail(row.hopf_points == row.aut_order, "Hopf point count");
    fail(row.points_iso, "point group isomorphism");
    fail(row.faithful == spec.faithful, "faithfulness");
    fail(row.tight_matches_hopf != Some(false), "tight algebra vs Hopf algebra");
    Ok(row)
}

/// All rows, computed on `pool` and returned in table order.
pub fn run_tables(field: Option<FieldSpec>, pool: &rayon::ThreadPool) -> Result<TablesReport, CliError> {
    let specs = table_rows();
    let rows = pool.install(|| specs.par_iter().map(|s| run_row(s, field)).collect::<Result<Vec<_>, _>>())?;
    Ok(TablesReport {
        field: field.map(|f| f.to_string()),
        rows,
    })
}

fn check(row: &TableRow) -> &'static str {
    if row.skipped.is_some() {
        "skip"
    } else if row.passed() {
        "pass"
    } else {
        "FAIL"
    }
}

fn render_grid(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    out.push_str(&line(header.iter().map(|s| s.to_string()).collect()));
    out.push_str(&format!(
        "|{}|\n",
        width.iter().map(|w| "-".repeat(w + 2)).collect::<Vec<_>>().join("|")
    ));
    for r in rows {
        out.push_str(&line(r.clone()));
    }
}

pub fn render_text(r: &TablesReport) -> String {
    let mut out = String::new();
    out.push_str("Hopf algebras and universal representations\n");
    let t1: Vec<Vec<String>> = r
        .rows
        .iter()
        .map(|row| {
            if let Some(why) = &row.skipped {
                return vec![
                    row.label.clone(),
                    row.field.clone(),
                    format!("skipped: {why}"),
                    String::new(),
                    String::new(),
                    String::new(),
                    check(row).into(),
                ];
            }
            let tight = match (row.faithful, row.tight_matches_hopf) {
                (false, _) => "-".to_string(),
                (true, Some(true)) => "= H".to_string(),
                (true, Some(false)) => "differs from H".to_string(),
                (true, None) => String::new(),
            };
            vec![
                row.label.clone(),
                row.field.clone(),
                row.aut_shape.clone(),
                row.hopf.clone(),
                if row.faithful { "Faithful" } else { "Not faithful" }.to_string(),
                tight,
                check(row).into(),
            ]
        })
        .collect();
    render_grid(&mut out, &["A", "field", "aut(A)", "H", "Univ. repr.", "T_p", "check"], &t1);
    out.push('\n');
    out.push_str("Hopf algebras of aut(A)\n");
    let t2: Vec<Vec<String>> = r
        .rows
        .iter()
        .filter(|row| row.skipped.is_none())
        .map(|row| {
            vec![
                row.label.clone(),
                row.hopf_entry.clone(),
                fmt_dim(row.hopf_dim),
                yes_no(row.hopf_axioms).into(),
                row.point_field.clone(),
                format!("{} (expected {})", row.aut_order, row.aut_order_expected),
                row.hopf_points.to_string(),
                yes_no(row.points_iso).into(),
                check(row).into(),
            ]
        })
        .collect();
    render_grid(
        &mut out,
        &["A", "H", "dim H", "axioms", "points over", "|aut(A)|", "|H points|", "iso", "check"],
        &t2,
    );
    for row in &r.rows {
        if !row.failures.is_empty() {
            out.push_str(&format!("{}: failed {}\n", row.label, row.failures.join(", ")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool() -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()
    }

    #[test]
    fn group_shape_counts() {
        assert_eq!(GroupShape::Mu3C2.order(13), 6);
        assert_eq!(GroupShape::Mu3C2.order(5), 2);
        assert_eq!(GroupShape::Mu3C2.order(2), 2);
        assert_eq!(GroupShape::Mu(2).order(2), 1);
        assert_eq!(GroupShape::MultiplicativeTimesAdditive.order(3), 6);
    }

    #[test]
    fn default_tables_match() {
        let r = run_tables(None, &pool()).unwrap();
        assert_eq!(r.rows.len(), 12);
        assert!(r.rows.iter().all(|row| row.skipped.is_none()));
        for row in &r.rows {
            assert!(row.passed(), "{}: {:?}", row.label, row.failures);
        }
        let faithful: Vec<bool> = r.rows.iter().map(|row| row.faithful).collect();
        assert_eq!(
            faithful,
            vec![true, true, false, false, false, true, true, true, true, true, true, false]
        );
    }

    #[test]
    fn char2_run_flips_a8() {
        let r = run_tables(Some(FieldSpec::Prime(2)), &pool()).unwrap();
        let a8 = r.row("A8(1), char 2").unwrap();
        assert!(a8.skipped.is_none());
        assert!(!a8.faithful);
        assert_eq!(a8.hopf_dim, Some(2));
        assert!(r.row("A8(1), char != 2").unwrap().skipped.is_some());
        assert!(render_text(&r).contains("K(e) = K[x]/(x^2)"));
    }
}
