//! The `qtkring` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::bott::{
    bott_equivalence, bott_presentation, bott_samelson_presentation, cartan_word_matrix, involution_holds,
    laurent_basis, BottError, BottMatrix, CartanWord, LaurentPresentation, PairingConvention,
};
use crate::charmap::{validate_charmap, vertex_determinants, CharMapError, CharacteristicMap};
use crate::format::*;
use crate::intlinalg::Rational;
use crate::kring::{
    build_presentation, compute_basis, projective_bundle_check, BasisResult, CoefficientSpec, KRingError,
};
use crate::polyring::{MonomialOrder, QuotientRing, VarNames, DEFAULT_BUDGET};
use crate::polytope::{default_functional, order_vertices, PolytopeError, SimplePolytope, VertexOrder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommandError {
    /// Unreadable or malformed input; exit code 2.
    Input(String),
    /// A computation or check failed; exit code 1.
    Failed(String),
}

impl CommandError {
    pub fn code(&self) -> i32 {
        match self {
            CommandError::Input(_) => 2,
            CommandError::Failed(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CommandError::Input(m) | CommandError::Failed(m) => m,
        }
    }
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl From<PolytopeError> for CommandError {
    fn from(e: PolytopeError) -> Self {
        CommandError::Input(e.to_string())
    }
}

impl From<CharMapError> for CommandError {
    fn from(e: CharMapError) -> Self {
        CommandError::Input(e.to_string())
    }
}

impl From<KRingError> for CommandError {
    fn from(e: KRingError) -> Self {
        use KRingError::*;
        match &e {
            Polytope(_) | CharMap(_) | CoefficientLength { .. } | ZeroCoefficient(_) | ShapeMismatch(_) | Poly(_) => {
                CommandError::Input(e.to_string())
            }
            Invalid(_)
            | BudgetExceeded(_)
            | InfiniteDimension(_)
            | RankDeficient { .. }
            | NotABasis
            | Integrality(_)
            | NotAUnit => CommandError::Failed(e.to_string()),
        }
    }
}

impl From<BottError> for CommandError {
    fn from(e: BottError) -> Self {
        match e {
            BottError::KRing(k) => k.into(),
            other => CommandError::Input(other.to_string()),
        }
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CommandError> {
    serde_json::from_str(text).map_err(|e| CommandError::Input(format!("cannot parse {what}: {e}")))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CommandError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

#[derive(Debug, Clone, Default)]
pub struct KRingOptions {
    pub r: Option<Vec<Rational>>,
    pub functional: Option<Vec<Rational>>,
    pub order: Option<Vec<usize>>,
    pub budget: Option<usize>,
}

fn presentation_doc(gens: &[crate::polyring::Poly], order: &MonomialOrder, names: &VarNames) -> PresentationDoc {
    let nv = order.nvars();
    PresentationDoc {
        variables: (0..nv).map(|v| names.name(v)).collect(),
        variable_priority: order.priority().iter().map(|&v| names.name(v)).collect(),
        generators: gens.iter().map(|g| g.render(order, names)).collect(),
    }
}

fn ring_listing(ring: &QuotientRing, names: &VarNames) -> (Vec<String>, Vec<String>) {
    (ring.groebner_basis().render(names), ring.standard_monomials().iter().map(|m| m.render(names)).collect())
}

pub fn validate_report(p: &SimplePolytope, l: &CharacteristicMap) -> Result<ValidateReport, CommandError> {
    let report = validate_charmap(p, l)?;
    let determinants = if report.check("unimodular").is_some() {
        vertex_determinants(p, l)?.iter().map(|d| d.to_string()).collect()
    } else {
        Vec::new()
    };
    Ok(ValidateReport { passed: report.passed(), checks: report.checks, determinants })
}

/// Runs presentation, Gröbner basis and the `x(T_w)` basis.
pub fn kring_report(
    p: &SimplePolytope,
    l: &CharacteristicMap,
    opts: &KRingOptions,
) -> Result<KRingReport, CommandError> {
    let n = p.dim();
    let r = match &opts.r {
        Some(v) => CoefficientSpec::new(v.clone())?,
        None => CoefficientSpec::ones(n),
    };
    let pres = build_presentation(p, l, &r)?;
    let ord = match (&opts.order, &opts.functional) {
        (Some(seq), _) => VertexOrder::from_sequence(p, seq.clone())?,
        (None, Some(f)) => order_vertices(p, f)?,
        (None, None) => order_vertices(p, &default_functional(p)?)?,
    };
    let res = compute_basis(&pres, &ord, opts.budget.unwrap_or(DEFAULT_BUDGET))?;
    let names = VarNames::X;
    let (groebner_basis, standard_monomials) = ring_listing(res.ring(), &names);
    let checks = res.checks();
    Ok(KRingReport {
        rank: res.rank(),
        vertex_count: p.vertex_count(),
        integral: r.is_integral(),
        r: r.values().iter().map(rat_string).collect(),
        base_vertex: l.base_vertex.unwrap_or(0),
        vertex_order: res.vertices().to_vec(),
        basis: res.faces().iter().map(|f| f.facet_set.clone()).collect(),
        basis_monomials: res.elements().iter().map(|e| e.render(&pres.order, &names)).collect(),
        structure_constants: res.structure_constants().map(|c| sparse_constants(c)),
        presentation: presentation_doc(&pres.generators(), &pres.order, &names),
        groebner_basis,
        standard_monomials,
        checks: KRingChecks {
            rank_equals_vertex_count: res.rank() == p.vertex_count(),
            basis_spans: checks.spans,
            structure_constants_integral: checks.constants_integral,
            standard_monomials_integral: checks.standard_monomials_integral,
            standard_monomial_determinant: checks.standard_monomial_determinant.as_ref().map(rat_string),
            projective_bundle_relation: projective_bundle_check(&pres, res.ring()),
        },
        warnings: res.warnings().to_vec(),
    })
}

impl KRingReport {
    /// Exit status: 1 if a reported check is false.
    pub fn exit_code(&self) -> i32 {
        let c = &self.checks;
        let bad = (self.integral && !c.rank_equals_vertex_count)
            || c.structure_constants_integral == Some(false)
            || c.standard_monomials_integral == Some(false)
            || c.projective_bundle_relation == Some(false);
        i32::from(bad)
    }
}

fn laurent_report(
    pres: &LaurentPresentation,
    cartan: Option<CartanDoc>,
    budget: usize,
) -> Result<LaurentReport, CommandError> {
    let res: BasisResult = laurent_basis(pres, budget)?;
    let names = pres.names();
    let order = pres.order();
    let (groebner_basis, standard_monomials) = ring_listing(res.ring(), &names);
    let n = pres.n();
    Ok(LaurentReport {
        n,
        c: pres.matrix.entries(),
        cartan,
        presentation: presentation_doc(&pres.relations(), &order, &names),
        defining_relations: pres.defining.len(),
        annotations: pres.annotations.clone(),
        rank: res.rank(),
        basis: res.elements().iter().map(|e| e.render(&order, &names)).collect(),
        structure_constants: res.structure_constants().map(|c| sparse_constants(c)),
        groebner_basis,
        standard_monomials,
        checks: LaurentChecks {
            rank_is_power_of_two: res.rank() == 1 << n,
            involution: involution_holds(pres, res.ring()),
            structure_constants_integral: res.checks().constants_integral,
        },
    })
}

impl LaurentReport {
    pub fn exit_code(&self) -> i32 {
        let c = &self.checks;
        i32::from(!c.rank_is_power_of_two || !c.involution || c.structure_constants_integral == Some(false))
    }
}

pub fn bott_report(c: &BottMatrix, budget: usize) -> Result<LaurentReport, CommandError> {
    laurent_report(&bott_presentation(c), None, budget)
}

pub fn bott_samelson_report(cw: &CartanWord, budget: usize) -> Result<LaurentReport, CommandError> {
    let pres = bott_samelson_presentation(cw);
    let doc =
        CartanDoc { matrix: cw.cartan().to_vec(), word: cw.word().to_vec(), convention: cw.convention().to_string() };
    laurent_report(&pres, Some(doc), budget)
}

pub fn compare_report(c: &BottMatrix, budget: usize) -> Result<CompareReport, CommandError> {
    let eq = bott_equivalence(c, budget)?;
    let d = 2 * c.n();
    let order = MonomialOrder::degrevlex(d);
    Ok(CompareReport {
        n: c.n(),
        c: c.entries(),
        isomorphic: eq.passed(),
        pipeline_rank: eq.pipeline_rank,
        laurent_rank: eq.laurent_rank,
        relations_checked: eq.iso.relations_checked,
        failed_relations: eq.failed_relations.clone(),
        determinant: eq.iso.determinant.as_ref().map(rat_string),
        unimodular: eq.iso.unimodular,
        images: eq.images[..c.n()].iter().map(|p| p.render(&order, &VarNames::X)).collect(),
    })
}

// --- text rendering ---

fn constants_text(c: &Option<SparseConstants>, basis: &[String]) -> Vec<String> {
    let Some(c) = c else { return vec!["structure constants: not available".into()] };
    let mut lines = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    let mut terms: Vec<String> = Vec::new();
    let flush = |key: Option<(usize, usize)>, terms: &mut Vec<String>, lines: &mut Vec<String>| {
        if let Some((i, j)) = key {
            lines.push(format!("  ({}) * ({}) = {}", basis[i], basis[j], terms.join(" + ")));
            terms.clear();
        }
    };
    for (i, j, k, v) in c {
        if current != Some((*i, *j)) {
            flush(current, &mut terms, &mut lines);
            current = Some((*i, *j));
        }
        let t = if v == "1" { format!("({})", basis[*k]) } else { format!("{v}*({})", basis[*k]) };
        terms.push(t);
    }
    flush(current, &mut terms, &mut lines);
    lines
}

fn opt_bool(b: Option<bool>) -> String {
    b.map_or("n/a".into(), |x| x.to_string())
}

pub fn kring_text(r: &KRingReport) -> String {
    let mut out = vec![
        format!("rank {} (vertices {}, {})", r.rank, r.vertex_count, if r.integral { "integral" } else { "rational" }),
        format!("r = ({})", r.r.join(", ")),
        format!("relations: {}", r.presentation.generators.join(", ")),
        format!("basis: {}", r.basis_monomials.join(", ")),
    ];
    out.extend(constants_text(&r.structure_constants, &r.basis_monomials));
    let c = &r.checks;
    out.push(format!(
        "checks: rank_equals_vertex_count={} structure_constants_integral={} standard_monomials_integral={} \
         projective_bundle_relation={}",
        c.rank_equals_vertex_count,
        opt_bool(c.structure_constants_integral),
        opt_bool(c.standard_monomials_integral),
        opt_bool(c.projective_bundle_relation)
    ));
    out.extend(r.warnings.iter().map(|w| format!("warning: {w}")));
    out.join("\n") + "\n"
}

pub fn laurent_text(r: &LaurentReport) -> String {
    let mut out = vec![format!("rank {}", r.rank)];
    out.push(format!("relations: {}", r.presentation.generators[..r.defining_relations].join(", ")));
    out.extend(r.annotations.iter().cloned());
    out.push(format!("basis: {}", r.basis.join(", ")));
    out.push(format!("involution: {}", r.checks.involution));
    out.join("\n") + "\n"
}

pub fn compare_text(r: &CompareReport) -> String {
    let mut s = format!("isomorphic: {}, rank {}\n", r.isomorphic, r.pipeline_rank);
    for f in &r.failed_relations {
        s.push_str(&format!("failed relation: {f}\n"));
    }
    s
}

pub fn validate_text(r: &ValidateReport) -> String {
    let mut out = vec![format!("valid: {}", r.passed)];
    for c in r.checks.iter().filter(|c| !c.passed) {
        let mut line = format!("failed {}", c.name);
        if !c.culprits.is_empty() {
            line.push_str(&format!(" at {:?}", c.culprits));
        }
        if let Some(d) = &c.detail {
            line.push_str(&format!(": {d}"));
        }
        out.push(line);
    }
    out.join("\n") + "\n"
}

// --- argument parsing ---

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Row,
    Col,
}

#[derive(Debug, Args)]
struct Common {
    /// Maximum number of S-pair reductions.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Parser)]
#[command(
    name = "qtkring",
    version,
    about = "K-rings of quasitoric manifolds, Bott towers and Bott-Samelson varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a polytope and characteristic map.
    Validate {
        polytope: PathBuf,
        lambda: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Presentation, rank and structure constants of the K-ring.
    Kring {
        polytope: PathBuf,
        lambda: PathBuf,
        /// Coefficients r_1..r_n, e.g. "2,3/2".
        #[arg(long)]
        r: Option<String>,
        /// Height functional ordering the vertices, e.g. "1,2,4".
        #[arg(long, conflicts_with = "order_file")]
        functional: Option<String>,
        /// JSON file {"order": [...]} listing vertices from lowest to highest.
        #[arg(long)]
        order_file: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Laurent presentation of a Bott tower.
    Bott {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Bott tower presentation from a Cartan matrix and a word.
    BottSamelson {
        file: PathBuf,
        #[arg(long, value_enum)]
        convention: Option<Convention>,
        #[command(flatten)]
        common: Common,
    },
    /// Cross-check a Bott tower's Laurent presentation against the cube pipeline.
    Compare {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn emit<T: Serialize>(report: &T, format: Format, text: impl Fn(&T) -> String, code: i32) -> Outcome {
    let stdout = match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Text => text(report),
    };
    Outcome { code, stdout, stderr: String::new() }
}

fn rationals(s: &str, what: &str) -> Result<Vec<Rational>, CommandError> {
    parse_rational_list(s).map_err(|e| CommandError::Input(format!("{what}: {e}")))
}

fn dispatch(cmd: Command) -> Result<Outcome, CommandError> {
    match cmd {
        Command::Validate { polytope, lambda, format } => {
            let pf: PolytopeFile = read_json(&polytope)?;
            let lf: LambdaFile = read_json(&lambda)?;
            let p = SimplePolytope::unchecked(pf.dim, pf.facets, pf.vertices.clone(), None);
            let p = match pf.to_polytope() {
                Ok(full) => full,
                Err(PolytopeError::Invalid(_)) => p,
                Err(e) => return Err(e.into()),
            };
            let report = validate_report(&p, &lf.to_charmap())?;
            let code = i32::from(!report.passed);
            Ok(emit(&report, format, validate_text, code))
        }
        Command::Kring { polytope, lambda, r, functional, order_file, common } => {
            let p = read_json::<PolytopeFile>(&polytope)?.to_polytope()?;
            let l = read_json::<LambdaFile>(&lambda)?.to_charmap();
            let opts = KRingOptions {
                r: r.as_deref().map(|s| rationals(s, "--r")).transpose()?,
                functional: functional.as_deref().map(|s| rationals(s, "--functional")).transpose()?,
                order: order_file.as_deref().map(read_json::<OrderFile>).transpose()?.map(|o| o.order),
                budget: Some(common.budget),
            };
            let report = kring_report(&p, &l, &opts)?;
            let code = report.exit_code();
            Ok(emit(&report, common.format, kring_text, code))
        }
        Command::Bott { file, common } => {
            let c = read_json::<BottFile>(&file)?.to_matrix()?;
            let report = bott_report(&c, common.budget)?;
            let code = report.exit_code();
            Ok(emit(&report, common.format, laurent_text, code))
        }
        Command::BottSamelson { file, convention, common } => {
            let conv = convention.map(|c| match c {
                Convention::Row => PairingConvention::Row,
                Convention::Col => PairingConvention::Col,
            });
            let cw = read_json::<CartanFile>(&file)?.to_word(conv)?;
            debug_assert_eq!(cartan_word_matrix(&cw).n(), cw.word().len());
            let report = bott_samelson_report(&cw, common.budget)?;
            let code = report.exit_code();
            Ok(emit(&report, common.format, laurent_text, code))
        }
        Command::Compare { file, common } => {
            let c = read_json::<BottFile>(&file)?.to_matrix()?;
            let report = compare_report(&c, common.budget)?;
            let code = i32::from(!report.isomorphic);
            Ok(emit(&report, common.format, compare_text, code))
        }
    }
}

/// Parses arguments (including the program name) and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome { code: e.code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::simplex;

    fn simplex_lambda(n: usize) -> CharacteristicMap {
        let mut v = vec![vec![-1; n]];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            v.push(e);
        }
        CharacteristicMap::new(v, Some(0))
    }

    #[test]
    fn kring_report_for_triangle() {
        let p = simplex(2).unwrap();
        let rep = kring_report(&p, &simplex_lambda(2), &KRingOptions::default()).unwrap();
        assert_eq!((rep.rank, rep.vertex_count), (3, 3));
        assert_eq!(rep.basis, vec![vec![], vec![0], vec![0, 1]]);
        assert_eq!(rep.checks.projective_bundle_relation, Some(true));
        assert_eq!(rep.exit_code(), 0);
        let gens = rep.presentation.parse_generators().unwrap();
        let again: Vec<String> = gens
            .iter()
            .map(|g| g.render(&MonomialOrder::with_priority(vec![1, 2, 0]).unwrap(), &VarNames::X))
            .collect();
        assert_eq!(again, rep.presentation.generators);
        assert_eq!(rep.presentation.variables, vec!["x0", "x1", "x2"]);
    }

    #[test]
    fn error_codes() {
        let p = simplex(2).unwrap();
        let opts = KRingOptions { r: Some(vec![Rational::from_integer(1.into())]), ..Default::default() };
        assert_eq!(kring_report(&p, &simplex_lambda(2), &opts).unwrap_err().code(), 2);
        let opts = KRingOptions { budget: Some(0), ..Default::default() };
        assert_eq!(kring_report(&p, &simplex_lambda(2), &opts).unwrap_err().code(), 1);
        let out = run(["qtkring", "frobnicate"]);
        assert_eq!(out.code, 2);
        assert_eq!(run(["qtkring", "--help"]).code, 0);
    }
}
