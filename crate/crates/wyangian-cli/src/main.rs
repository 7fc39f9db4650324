use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use wyangian::format::{
    generators_json, generators_text, matrix_json, melement_json, melement_text, series_text, CandidateFile,
    FormatError,
};
use wyangian::pyramid::{HalfInt, Partition, PyramidError};
use wyangian::report::Report;
use wyangian::series::YangianReport;
use wyangian::uea::{Gl, Letter, UeaElement};
use wyangian::walgebra::capelli::{capelli_suite, det_identities, entry_selectors, inverse_commutator_witness};
use wyangian::walgebra::capelli::{principal_gl, quasideterminant_paths_agree};
use wyangian::walgebra::families::{
    check_relations, conjecture_witness, family_generators, family_relations, generator_membership_witness,
    premet_witness, Family, PremetFailure, WGenerators,
};
use wyangian::walgebra::presentation::minimal_yangian;
use wyangian::walgebra::{
    build_l, default_floor, main_lemma_witness, membership_witness, yangian_check_l, z_plus_e, MainLemmaMethod,
    Product, WError,
};

#[derive(Parser)]
#[command(name = "wyangian", version, about = "Exact computations and checks for finite W-algebras of gl_N")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the randomized parts of a check
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print L(z) down to the floor
    #[command(name = "L")]
    L(Common),
    /// Run a check
    Check {
        #[command(subcommand)]
        what: Check,
    },
    /// Print the generators w[i,j;k] of a family
    Generators(FamilyArgs),
    /// Check the commutation relations of a family
    Relations(FamilyArgs),
    /// Compare the quasideterminant of -(-z)^p + W(z) with L(z)
    Conjecture {
        #[command(flatten)]
        common: Common,
        /// JSON file {partition, generators: [{i, j, k, element}]}
        #[arg(long, conflicts_with = "family")]
        candidates: Option<PathBuf>,
        /// Use the closed formulas of a family instead of a file
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
    },
}

#[derive(Subcommand)]
enum Check {
    /// The Yangian identity for L(z)
    Yangian {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = YangianMethod::Auto)]
        method: YangianMethod,
    },
    /// ad-invariance of every coefficient of L(z)
    Membership(Common),
    /// |1 + z^{-Δ}E|_{I1 J1} 1 = z^{-p1} L(z) 1
    MainLemma {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = LemmaMethod::Corrected)]
        method: LemmaMethod,
    },
    /// Centrality of the coefficients of rdet(z + E + D) in U(gl_n)
    Capelli {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Determinant and quasideterminant identities in U(gl_n)
    Identities {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, allow_negative_numbers = true, value_parser = parse_floor)]
        floor: Option<HalfInt>,
    },
    /// Premet's leading-term conditions for a generator family
    Premet(FamilyArgs),
}

#[derive(Args)]
struct Common {
    /// Partition of N, e.g. "3,2,1"
    #[arg(long, value_parser = parse_partition)]
    partition: Partition,
    /// Truncation floor, default -(2 p1 + 4)
    #[arg(long, allow_negative_numbers = true, value_parser = parse_floor)]
    floor: Option<HalfInt>,
}

impl Common {
    fn floor(&self) -> HalfInt {
        self.floor.unwrap_or_else(|| default_floor(&self.partition))
    }
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_parser = parse_partition)]
    partition: Partition,
    /// Generator family; inferred from the partition when omitted
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Principal,
    Rectangular,
    Minimal,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Principal => Family::Principal,
            FamilyArg::Rectangular => Family::Rectangular,
            FamilyArg::Minimal => Family::Minimal,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum YangianMethod {
    /// presented for minimal partitions with at least three rows, direct otherwise
    Auto,
    /// products of cosets in M
    Direct,
    /// products in the algebra presented by the minimal-family relations
    Presented,
}

#[derive(Clone, Copy, ValueEnum)]
enum LemmaMethod {
    Corrected,
    Direct,
}

fn parse_partition(s: &str) -> Result<Partition, PyramidError> {
    s.parse()
}

fn parse_floor(s: &str) -> Result<HalfInt, String> {
    let f: HalfInt = s.parse().map_err(|e: PyramidError| e.to_string())?;
    if f > HalfInt::ZERO {
        return Err(format!("floor {f} must be at most 0"));
    }
    Ok(f)
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    W(WError),
}

impl From<WError> for CliError {
    fn from(e: WError) -> CliError {
        match e {
            WError::FamilyMismatch { .. } | WError::Input(_) => CliError::Usage(e.to_string()),
            e => CliError::W(e),
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> CliError {
        match e {
            FormatError::W(w) => w.into(),
            FormatError::Parse { .. } | FormatError::NoSuchBox(..) | FormatError::Json(_) => {
                CliError::Usage(e.to_string())
            }
        }
    }
}

/// What a subcommand produced.
enum Output {
    Report(Report),
    /// data that is not a pass/fail outcome
    Data {
        json: Value,
        text: String,
    },
}

fn family_of(p: &Partition, given: Option<FamilyArg>) -> Result<Family, CliError> {
    if let Some(f) = given {
        return Ok(f.into());
    }
    [Family::Principal, Family::Minimal, Family::Rectangular]
        .into_iter()
        .find(|f| f.matches(p))
        .ok_or_else(|| CliError::Usage(format!("partition {p} has no closed-form family")))
}

fn yangian_witness(report: &YangianReport) -> Option<Value> {
    report.witness.as_ref().map(|w| {
        let (i, j, h, k) = w.indices;
        json!({"indices": [i + 1, j + 1, h + 1, k + 1], "zpow": w.zpow.to_string(), "wpow": w.wpow.to_string()})
    })
}

fn run_yangian(common: &Common, method: YangianMethod) -> Result<Output, CliError> {
    let p = &common.partition;
    let floor = common.floor();
    let gl = Gl::new(p);
    let presented = match method {
        YangianMethod::Auto => p.is_minimal() && p.r() >= 3,
        YangianMethod::Direct => false,
        YangianMethod::Presented => true,
    };
    let mut r = Report::new("yangian", &p.to_string(), Some(floor));
    let yr = if presented {
        let g = family_generators(&gl, Family::Minimal)?;
        let out = minimal_yangian(&gl, &g, floor)?;
        for f in &out.relation_failures {
            r.fail(json!({"relation": f}));
        }
        if !out.l_matches {
            r.fail(json!({"generator_form": "differs from L(z)"}));
        }
        r.detail("method", json!("presented"));
        out.report
    } else {
        r.detail("method", json!("direct"));
        yangian_check_l(&gl, floor, Product::Lift)?
    };
    if let Some(w) = yangian_witness(&yr) {
        r.fail(w);
    }
    r.pass &= yr.pass;
    r.detail("window", json!(yr.window.to_string()));
    r.detail("checked", json!(yr.checked));
    Ok(Output::Report(r))
}

fn run_membership(common: &Common) -> Result<Output, CliError> {
    let p = &common.partition;
    let floor = common.floor();
    let gl = Gl::new(p);
    let l = build_l(&gl, floor)?;
    let mut r = Report::new("membership", &p.to_string(), Some(floor));
    if let Some(w) = membership_witness(&gl, &l) {
        let letter = wyangian::format::letter_text(&gl, w.letter);
        r.fail(json!({"entry": [w.entry.0 + 1, w.entry.1 + 1], "zpow": w.zpow.to_string(), "letter": letter}));
    }
    r.detail("coefficients", json!(l.coefficients().count()));
    r.detail("polynomial", json!(l.is_exact()));
    Ok(Output::Report(r))
}

fn run_main_lemma(common: &Common, method: LemmaMethod) -> Result<Output, CliError> {
    let p = &common.partition;
    let floor = common.floor();
    let gl = Gl::new(p);
    let (m, name) = match method {
        LemmaMethod::Corrected => (MainLemmaMethod::Corrected, "corrected"),
        LemmaMethod::Direct => (MainLemmaMethod::Direct, "direct"),
    };
    let mut r = Report::new("main-lemma", &p.to_string(), Some(floor));
    if let Some(w) = main_lemma_witness(&gl, floor, m)? {
        r.fail(json!({"entry": [w.entry.0 + 1, w.entry.1 + 1], "zpow": w.zpow.to_string()}));
    }
    r.detail("method", json!(name));
    Ok(Output::Report(r))
}

fn run_capelli(n: usize) -> Result<Output, CliError> {
    if n == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    let gl = principal_gl(n)?;
    let c = capelli_suite(n)?;
    let mut r = Report::new("capelli", &n.to_string(), None);
    if !c.monic {
        r.fail(json!({"leading": "rdet(z + E + D) is not monic of degree n"}));
    }
    for (k, central) in c.central.iter().enumerate() {
        if !central {
            r.fail(json!({"coefficient": k + 1, "central": false}));
        }
    }
    let coeffs: Vec<Value> = c
        .coefficients
        .iter()
        .enumerate()
        .map(|(k, z)| json!(format!("z_{} = {}", k + 1, wyangian::format::element_text(&gl, z))))
        .collect();
    r.detail("central", json!(c.central.iter().filter(|&&x| x).count()));
    r.detail("coefficients", Value::Array(coeffs));
    Ok(Output::Report(r))
}

/// A random element of `U(gl)` with words of length at most `max_len`.
fn random_element(gl: &Gl, rng: &mut ChaCha8Rng, max_len: usize) -> UeaElement {
    let words: Vec<(Vec<Letter>, wyangian::rational::Q)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let len = rng.gen_range(0..=max_len);
            let w = (0..len).map(|_| rng.gen_range(0..gl.num_letters()) as Letter).collect();
            (w, wyangian::rational::Q::new(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
        })
        .collect();
    gl.normal_form_sum(&words)
}

fn run_identities(n: usize, floor: Option<HalfInt>, seed: u64) -> Result<Output, CliError> {
    if n < 2 {
        return Err(CliError::Usage("n must be at least 2".into()));
    }
    let floor = floor.unwrap_or(HalfInt::int(-6));
    let mut r = Report::new("identities", &n.to_string(), Some(floor));
    let d = det_identities(n)?;
    let want_sign = if n % 2 == 1 { 1 } else { -1 };
    let named = [
        ("rho(rdet E) = rdet(rho E)", d.rho_row_unshifted),
        ("rho(rdet(E + D)) = rdet(rho(E + D))", d.rho_row_shifted),
        ("rdet A = cdet A", d.row_equals_column),
        ("rdet A = (-1)^(n-1) |A|_1n", d.quasideterminant_sign == Some(want_sign)),
        ("rho(cdet E) differs from rho(rdet E)", n != 2 || !d.cdet_correction.is_zero()),
    ];
    for (name, ok) in named {
        if !ok {
            r.fail(json!({"identity": name}));
        }
    }
    let gl = principal_gl(n)?;
    let a = z_plus_e(&gl);
    for k in 0..n {
        let (i1, j1) = entry_selectors(n, k, k);
        if !quasideterminant_paths_agree(&gl, &a, &i1, &j1, floor)? {
            r.fail(json!({"identity": "quasideterminant: definition = submatrix formula", "entry": [k + 1, k + 1]}));
        }
    }
    if let Some((i, j, h, k)) = inverse_commutator_witness(n, floor)? {
        r.fail(json!({"identity": "inverse commutator", "indices": [i + 1, j + 1, h + 1, k + 1]}));
    }
    // randomized associativity and Jacobi in U(gl_n)
    let ugl = Gl::new(&Partition::new(vec![1; n]).map_err(|e| CliError::Usage(e.to_string()))?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = 200;
    for t in 0..samples {
        let (x, y, z) =
            (random_element(&ugl, &mut rng, 3), random_element(&ugl, &mut rng, 3), random_element(&ugl, &mut rng, 3));
        let assoc = ugl.mul(&ugl.mul(&x, &y), &z) == ugl.mul(&x, &ugl.mul(&y, &z));
        let c = |a: &UeaElement, b: &UeaElement| ugl.commutator(a, b);
        let jacobi = c(&x, &c(&y, &z)).plus(&c(&y, &c(&z, &x))).plus(&c(&z, &c(&x, &y))).is_zero();
        if !assoc || !jacobi {
            r.fail(json!({"identity": "associativity and Jacobi", "sample": t}));
            break;
        }
    }
    if d.n == 2 {
        r.detail("cdet correction", json!(melement_text(&gl, &d.cdet_correction)));
    }
    r.detail("random samples", json!(samples));
    r.detail("seed", json!(seed));
    Ok(Output::Report(r))
}

fn run_premet(args: &FamilyArgs) -> Result<Output, CliError> {
    let p = &args.partition;
    let family = family_of(p, args.family)?;
    let gl = Gl::new(p);
    let g = family_generators(&gl, family)?;
    let mut r = Report::new("premet", &p.to_string(), None);
    if let Some(((i, j, k), why)) = premet_witness(&gl, &g) {
        let reason = match why {
            PremetFailure::Degree { degree, bound } => format!("Kazhdan degree {degree} exceeds {bound}"),
            PremetFailure::Symbol => "leading symbol differs from f[i,j;k]".to_string(),
        };
        r.fail(json!({"generator": [i, j, k], "reason": reason}));
    }
    r.detail("family", json!(family.name()));
    r.detail("generators", json!(g.len()));
    Ok(Output::Report(r))
}

fn run_l(common: &Common) -> Result<Output, CliError> {
    let p = &common.partition;
    let floor = common.floor();
    let gl = Gl::new(p);
    let l = build_l(&gl, floor)?;
    let m = l.reduced();
    let json = json!({
        "partition": p.to_string(),
        "floor": floor.to_string(),
        "polynomial": l.is_exact(),
        "L": matrix_json(m, |c| melement_json(&gl, c)),
    });
    let mut text = format!("L(z) for partition {p}, floor {floor}\n");
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            text.push_str(&format!("L[{},{}]:\n", i + 1, j + 1));
            text.push_str(&series_text(m.get(i, j), "z", "  ", |c| melement_text(&gl, c)));
        }
    }
    Ok(Output::Data { json, text })
}

fn run_generators(args: &FamilyArgs) -> Result<Output, CliError> {
    let p = &args.partition;
    let family = family_of(p, args.family)?;
    let gl = Gl::new(p);
    let g = family_generators(&gl, family)?;
    Ok(Output::Data { json: generators_json(&gl, &g), text: generators_text(&gl, &g) })
}

fn run_relations(args: &FamilyArgs) -> Result<Output, CliError> {
    let p = &args.partition;
    let family = family_of(p, args.family)?;
    let gl = Gl::new(p);
    let g = family_generators(&gl, family)?;
    let rels = family_relations(p, family)?;
    let mut r = Report::new("relations", &p.to_string(), None);
    for (name, product) in [("lift", Product::Lift), ("circ", Product::Circ)] {
        let out = check_relations(&gl, &g, &rels, product)?;
        for f in out.failures {
            r.fail(json!({"product": name, "relation": f}));
        }
    }
    r.detail("family", json!(family.name()));
    r.detail("relations", json!(rels.len()));
    Ok(Output::Report(r))
}

fn run_conjecture(
    common: &Common,
    candidates: Option<&PathBuf>,
    family: Option<FamilyArg>,
) -> Result<Output, CliError> {
    let p = &common.partition;
    let floor = common.floor();
    let gl = Gl::new(p);
    let g: WGenerators = match (candidates, family) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let file = CandidateFile::parse(&text)?;
            if &file.partition != p {
                return Err(CliError::Usage(format!("candidates are for partition {}, not {p}", file.partition)));
            }
            file.generators(&gl)?
        }
        (None, Some(f)) => family_generators(&gl, f.into())?,
        (None, None) => return Err(CliError::Usage("give --candidates <file> or --family".into())),
    };
    let mut r = Report::new("conjecture", &p.to_string(), Some(floor));
    if let Some(((i, j, k), letter)) = generator_membership_witness(&gl, &g) {
        r.fail(json!({"generator": [i, j, k], "not invariant under": wyangian::format::letter_text(&gl, letter)}));
    }
    if let Some(w) = conjecture_witness(&gl, &g, floor)? {
        r.fail(json!({"entry": [w.entry.0 + 1, w.entry.1 + 1], "zpow": w.zpow.to_string()}));
    }
    r.detail("family", json!(g.family().name()));
    r.detail("generators", json!(g.len()));
    Ok(Output::Report(r))
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::L(common) => run_l(common),
        Command::Check { what } => match what {
            Check::Yangian { common, method } => run_yangian(common, *method),
            Check::Membership(common) => run_membership(common),
            Check::MainLemma { common, method } => run_main_lemma(common, *method),
            Check::Capelli { n } => run_capelli(*n),
            Check::Identities { n, floor } => run_identities(*n, *floor, cli.seed),
            Check::Premet(args) => run_premet(args),
        },
        Command::Generators(args) => run_generators(args),
        Command::Relations(args) => run_relations(args),
        Command::Conjecture { common, candidates, family } => run_conjecture(common, candidates.as_ref(), *family),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Report(r)) => {
            match cli.format {
                Format::Json => println!("{}", r.to_json()),
                Format::Text => print!("{}", r.to_text()),
            }
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Output::Data { json, text }) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&json).expect("JSON output")),
                Format::Text => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
