use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gauge_mps_core::constructors::{
    build_d10_example, build_su2_example, build_u1_example, couple_matter_to_gauge, elementary_b_block,
    gauge_global_symmetry, wigner_eckart_a_block, Su2Params,
};
use gauge_mps_core::group_rep::su2::haar_samples;
use gauge_mps_core::group_rep::{conjugate_rep, decompose_rep, tensor_product_rep, Catalog, Rep};
use gauge_mps_core::linalg::{self, CMat};
use gauge_mps_core::mpv_core::{canonical_form_with_limit, is_normal, MpsTensor, TensorPair, DEFAULT_SIZE_LIMIT};
use gauge_mps_core::symmetry::{
    check_global_symmetry, check_local_symmetry_gauge, check_local_symmetry_matter, check_local_symmetry_matter_gauge,
    CheckOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bundle::{bundle_text, load_bundle, read_json, Bundle};
use crate::dto::{complex_to_json, matrices_from_json, matrix_to_json, GroupJson, MatrixJson, Pair, TensorJson};
use crate::error::CliError;
use crate::report::{render_json, render_text, ReportJson};

pub const SIZE_LIMIT_VAR: &str = "GAUGE_MPS_SIZE_LIMIT";

#[derive(Debug, Parser)]
#[command(
    name = "gauge-mps",
    version,
    about = "Build, canonicalise and certify gauge-symmetric matrix product vectors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a symmetry of a bundle on chains of 1..=N pairs.
    Verify(VerifyArgs),
    /// Build tensors with a certified symmetry.
    Construct(ConstructArgs),
    /// Bring a tensor to canonical form.
    CanonicalForm(CanonicalArgs),
    /// Decompose a representation into catalog irreps.
    DecomposeRep(DecomposeArgs),
    /// Write one of the built-in examples as a bundle.
    Example(ExampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Setting {
    MatterLocal,
    #[value(alias = "global")]
    MatterGlobal,
    GaugeLocal,
    Bab,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be a positive number".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Write the result to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub bundle: PathBuf,
    #[arg(long, value_enum)]
    pub setting: Setting,
    /// Largest chain length, in pairs for `bab` and in sites otherwise.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
    #[arg(long, default_value_t = 1e-9, value_parser = positive_f64)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    /// Gauge-field block for a pair of irreps (`--left`, `--right`).
    Elementary,
    /// Matter block `conj(left) ⊗ right → j0`.
    WignerEckart,
    /// Gauge the global symmetry of the bundle's `a`, `theta`, `x`.
    Gauge,
    /// Couple matter to the bundle's gauge field `b`, `r`, `l`, `x`.
    Couple,
}

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub kind: ConstructKind,
    /// Built-in catalog name (`D10`, `S3`, `Q8`, `Z5`, ...) or a group JSON file.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    /// Irrep of the left virtual space.
    #[arg(long)]
    pub left: Option<String>,
    /// Irrep of the right virtual space.
    #[arg(long)]
    pub right: Option<String>,
    /// Physical irrep of a Wigner-Eckart block.
    #[arg(long)]
    pub j0: Option<String>,
    /// Physical irrep per virtual block when coupling, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub choice: Option<Vec<String>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Site {
    A,
    B,
}

#[derive(Debug, Clone, Args)]
pub struct CanonicalArgs {
    /// Tensor JSON file.
    #[arg(long, conflicts_with = "bundle", required_unless_present = "bundle")]
    pub tensor: Option<PathBuf>,
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    /// Which tensor of the bundle to use.
    #[arg(long, value_enum, default_value_t = Site::A)]
    pub site: Site,
    /// Chain length up to which the reassembled tensor is compared.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub group: String,
    /// JSON file with one matrix per group element.
    #[arg(long, conflicts_with = "product", required_unless_present = "product")]
    pub rep: Option<PathBuf>,
    /// Product of catalog irreps, e.g. `conj(rho1),rho2`.
    #[arg(long, value_delimiter = ',')]
    pub product: Option<Vec<String>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    D10,
    Su2,
    U1,
}

#[derive(Debug, Clone, Args)]
pub struct ExampleArgs {
    #[arg(value_enum)]
    pub name: ExampleName,
    /// Number of sampled group elements for Lie groups.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Charges of the U(1) example.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1")]
    pub charges: Vec<i64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Settings read from the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Env {
    pub size_limit: u128,
}

impl Default for Env {
    fn default() -> Self {
        Env { size_limit: DEFAULT_SIZE_LIMIT }
    }
}

impl Env {
    pub fn from_var(value: Option<&str>) -> Result<Env, CliError> {
        match value {
            None => Ok(Env::default()),
            Some(v) => v
                .trim()
                .parse::<u128>()
                .ok()
                .filter(|&n| n > 0)
                .map(|size_limit| Env { size_limit })
                .ok_or_else(|| CliError::Usage(format!("{SIZE_LIMIT_VAR} must be a positive integer, found {v:?}"))),
        }
    }
}

/// Exit status and standard output of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout }
    }
}

fn emit(text: String, out: Option<&Path>) -> Result<String, CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

pub fn run(cli: &Cli, env: &Env) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Verify(args) => verify(args, env),
        Command::Construct(args) => construct(args),
        Command::CanonicalForm(args) => canonical(args, env),
        Command::DecomposeRep(args) => decompose(args),
        Command::Example(args) => example(args),
    }
}

fn verify(args: &VerifyArgs, env: &Env) -> Result<Outcome, CliError> {
    let bundle = load_bundle(&args.bundle)?;
    let opts = CheckOptions { n_max: args.n_max as usize, tolerance: args.tol, size_limit: env.size_limit };
    let report = match args.setting {
        Setting::MatterLocal => check_local_symmetry_matter(
            Bundle::require(&bundle.a, "a")?,
            Bundle::require(&bundle.theta, "theta")?,
            &opts,
        )?,
        Setting::MatterGlobal => {
            check_global_symmetry(Bundle::require(&bundle.a, "a")?, Bundle::require(&bundle.theta, "theta")?, &opts)?
        }
        Setting::GaugeLocal => check_local_symmetry_gauge(
            Bundle::require(&bundle.b, "b")?,
            Bundle::require(&bundle.r, "r")?,
            Bundle::require(&bundle.l, "l")?,
            &opts,
        )?,
        Setting::Bab => {
            let pair =
                TensorPair::new(Bundle::require(&bundle.a, "a")?.clone(), Bundle::require(&bundle.b, "b")?.clone())?;
            check_local_symmetry_matter_gauge(
                &pair,
                Bundle::require(&bundle.r, "r")?,
                Bundle::require(&bundle.theta, "theta")?,
                Bundle::require(&bundle.l, "l")?,
                &opts,
            )?
        }
    };
    let json = ReportJson::from_report(&report);
    let text = if args.output.json { render_json(&json) } else { render_text(&json) };
    let code = if report.passed() { 0 } else { 1 };
    Ok(Outcome { code, stdout: emit(text, args.output.out.as_deref())? })
}

/// Built-in catalog name or a group JSON file.
pub fn load_catalog(spec: &str) -> Result<Catalog, CliError> {
    if let Ok(cat) = Catalog::builtin(spec) {
        return Ok(cat);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!("{spec:?} is neither a built-in group nor a file")));
    }
    let json: GroupJson = read_json(path)?;
    json.to_catalog("").map_err(|e| e.in_file(path))
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn construct(args: &ConstructArgs) -> Result<Outcome, CliError> {
    let bundle = match args.kind {
        ConstructKind::Elementary => {
            let cat = load_catalog(required(&args.group, "group")?)?;
            let left = cat.get(required(&args.left, "left")?)?;
            let right = cat.get(required(&args.right, "right")?)?;
            let blk = elementary_b_block(&conjugate_rep(&left.rep), &right.rep)?;
            Bundle {
                name: Some(format!("elementary {} {}", left.label, right.label)),
                b: Some(blk.b),
                r: Some(blk.r),
                l: Some(blk.l),
                x: Some(blk.x),
                y: Some(blk.y),
                parameters: json!({ "construction": "elementary", "left": left.label, "right": right.label }),
                catalog: Some(cat.clone()),
                ..Bundle::default()
            }
        }
        ConstructKind::WignerEckart => {
            let cat = load_catalog(required(&args.group, "group")?)?;
            let j0 = cat.get(required(&args.j0, "j0")?)?;
            let left = cat.get(required(&args.left, "left")?)?;
            let right = cat.get(required(&args.right, "right")?)?;
            let a = wigner_eckart_a_block(j0, left, right, &cat.irreps, &[])?;
            Bundle {
                name: Some(format!("wigner-eckart {} {} {}", j0.label, left.label, right.label)),
                a: Some(a),
                theta: Some(j0.rep.clone()),
                x: Some(left.rep.matrices().to_vec()),
                y: Some(right.rep.matrices().to_vec()),
                parameters: json!({
                    "construction": "wigner-eckart", "j0": j0.label, "left": left.label, "right": right.label
                }),
                catalog: Some(cat.clone()),
                ..Bundle::default()
            }
        }
        ConstructKind::Gauge => {
            let path = args.bundle.as_deref().ok_or_else(|| CliError::Usage("--bundle is required".into()))?;
            let mut bundle = load_bundle(path)?;
            let a = Bundle::require(&bundle.a, "a")?;
            let theta = Bundle::require(&bundle.theta, "theta")?;
            let x = Bundle::require(&bundle.x, "x")?;
            let gp = gauge_global_symmetry(a, theta, x, bundle.group(), args.seed)?;
            bundle.b = Some(gp.b);
            bundle.r = Some(gp.r);
            bundle.l = Some(gp.l);
            bundle.x = Some(gp.x.clone());
            bundle.y = Some(gp.x);
            bundle.parameters = json!({ "construction": "gauge", "sector_dims": gp.sector_dims, "seed": args.seed });
            bundle
        }
        ConstructKind::Couple => {
            let path = args.bundle.as_deref().ok_or_else(|| CliError::Usage("--bundle is required".into()))?;
            let mut bundle = load_bundle(path)?;
            let cat = match &args.group {
                Some(g) => load_catalog(g)?,
                None => Bundle::require(&bundle.catalog, "group")?.clone(),
            };
            let x = Rep::new(Bundle::require(&bundle.x, "x")?.clone(), &cat.group)?;
            let cm = couple_matter_to_gauge(
                Bundle::require(&bundle.b, "b")?,
                Bundle::require(&bundle.r, "r")?,
                Bundle::require(&bundle.l, "l")?,
                &x,
                &cat,
                args.choice.as_deref(),
            )?;
            bundle.a = Some(cm.a);
            bundle.theta = Some(cm.theta);
            bundle.y = Some(x.matrices().to_vec());
            bundle.parameters = json!({
                "construction": "couple",
                "virtual_labels": cm.virtual_labels,
                "physical_labels": cm.physical_labels,
            });
            bundle.catalog = Some(cat);
            bundle
        }
    };
    Ok(Outcome::ok(emit(bundle_text(&bundle), args.out.as_deref())?))
}

#[derive(Serialize)]
struct CopyJson {
    weight: Pair,
    similarity: MatrixJson,
}

#[derive(Serialize)]
struct BlockJson {
    tensor: TensorJson,
    fixed_point: Vec<f64>,
    normal: bool,
    copies: Vec<CopyJson>,
}

#[derive(Serialize)]
struct CanonicalJson {
    blocking_factor: usize,
    phys_dim: usize,
    reconstruction_residual: f64,
    blocks: Vec<BlockJson>,
}

fn canonical(args: &CanonicalArgs, env: &Env) -> Result<Outcome, CliError> {
    let tensor: MpsTensor = match (&args.tensor, &args.bundle) {
        (Some(path), _) => {
            let json: TensorJson = read_json(path)?;
            json.to_tensor("").map_err(|e| e.in_file(path))?
        }
        (None, Some(path)) => {
            let bundle = load_bundle(path)?;
            match args.site {
                Site::A => Bundle::require(&bundle.a, "a")?.clone(),
                Site::B => Bundle::require(&bundle.b, "b")?.clone(),
            }
        }
        (None, None) => return Err(CliError::Usage("--tensor or --bundle is required".into())),
    };
    let cf = canonical_form_with_limit(&tensor, args.seed, env.size_limit)?;
    let residual = cf.verify(&tensor, args.n_max as usize)?;
    let out = CanonicalJson {
        blocking_factor: cf.blocking_factor,
        phys_dim: cf.phys_dim,
        reconstruction_residual: residual,
        blocks: cf
            .blocks
            .iter()
            .map(|b| BlockJson {
                tensor: TensorJson::from_tensor(&b.tensor),
                fixed_point: b.fixed_point.clone(),
                normal: is_normal(&b.tensor, false).is_normal(),
                copies: b
                    .copies
                    .iter()
                    .map(|q| CopyJson { weight: complex_to_json(q.weight), similarity: matrix_to_json(&q.similarity) })
                    .collect(),
            })
            .collect(),
    };
    let text = if args.output.json {
        pretty(&out)
    } else {
        let mut s = String::new();
        writeln!(s, "blocking factor: {}", out.blocking_factor).unwrap();
        writeln!(s, "physical dimension: {}", out.phys_dim).unwrap();
        for (k, b) in out.blocks.iter().enumerate() {
            let fp: Vec<String> = b.fixed_point.iter().map(|v| format!("{v:.2e}")).collect();
            writeln!(
                s,
                "block {k}: D = {}, copies = {}, {}, fixed point [{}]",
                b.tensor.left_dim,
                b.copies.len(),
                if b.normal { "normal" } else { "not normal" },
                fp.join(", ")
            )
            .unwrap();
            for q in &b.copies {
                writeln!(s, "  weight {:.2e}{:+.2e}i", q.weight[0], q.weight[1]).unwrap();
            }
        }
        writeln!(s, "reconstruction residual (N <= {}): {:.2e}", args.n_max, residual).unwrap();
        s
    };
    Ok(Outcome::ok(emit(text, args.output.out.as_deref())?))
}

#[derive(Serialize)]
struct ComponentJson {
    label: String,
    copy: usize,
    offset: usize,
    dim: usize,
}

#[derive(Serialize)]
struct DecompositionJson {
    dim: usize,
    multiplicities: Vec<(String, usize)>,
    components: Vec<ComponentJson>,
    basis_change: MatrixJson,
    /// Largest `‖P† U(g) P − ⊕ D^J(g)‖` over the group.
    residual: f64,
}

fn irrep_factor(cat: &Catalog, label: &str) -> Result<Rep, CliError> {
    let label = label.trim();
    match label.strip_prefix("conj(").and_then(|s| s.strip_suffix(')')) {
        Some(inner) => Ok(conjugate_rep(&cat.get(inner)?.rep)),
        None => Ok(cat.get(label)?.rep.clone()),
    }
}

fn decompose(args: &DecomposeArgs) -> Result<Outcome, CliError> {
    let cat = load_catalog(&args.group)?;
    let rep = match (&args.rep, &args.product) {
        (Some(path), _) => {
            let mats: Vec<MatrixJson> = read_json(path)?;
            let mats = matrices_from_json(&mats, "").map_err(|e| e.in_file(path))?;
            Rep::new(mats, &cat.group)?
        }
        (None, Some(labels)) => {
            let mut factors = labels.iter().map(|l| irrep_factor(&cat, l));
            let first =
                factors.next().ok_or_else(|| CliError::Usage("--product needs at least one irrep".into()))??;
            factors.try_fold(first, |acc, f| Ok::<Rep, CliError>(tensor_product_rep(&acc, &f?)?))?
        }
        (None, None) => return Err(CliError::Usage("--rep or --product is required".into())),
    };
    let dec = decompose_rep(&rep, &cat.irreps)?;
    let p = &dec.basis_change;
    let mut residual: f64 = 0.0;
    for g in 0..cat.group.order() {
        let blocks: Vec<&CMat> =
            dec.components.iter().map(|c| cat.get(&c.label).map(|i| i.matrix(g))).collect::<Result<_, _>>()?;
        let target = linalg::direct_sum(&blocks);
        residual = residual.max((p.adjoint() * rep.matrix(g) * p - target).norm());
    }
    let out = DecompositionJson {
        dim: rep.dim(),
        multiplicities: dec.blocks.clone(),
        components: dec
            .components
            .iter()
            .map(|c| ComponentJson { label: c.label.clone(), copy: c.copy, offset: c.offset, dim: c.dim })
            .collect(),
        basis_change: matrix_to_json(p),
        residual,
    };
    let text = if args.output.json {
        pretty(&out)
    } else {
        let parts: Vec<String> =
            out.multiplicities.iter().map(|(l, m)| if *m == 1 { l.clone() } else { format!("{m} x {l}") }).collect();
        format!("dimension {}: {}\nresidual: {:.2e}\n", out.dim, parts.join(" + "), residual)
    };
    Ok(Outcome::ok(emit(text, args.output.out.as_deref())?))
}

fn example(args: &ExampleArgs) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let k = args.samples as usize;
    let bundle = match args.name {
        ExampleName::D10 => {
            let ex = build_d10_example();
            Bundle {
                name: Some("d10".into()),
                catalog: Some(Catalog::dihedral(5)),
                a: Some(ex.a),
                b: Some(ex.b),
                theta: Some(ex.theta),
                r: Some(ex.r),
                l: Some(ex.l),
                x: Some(ex.x),
                y: Some(ex.y),
                gauss: None,
                parameters: json!({ "alphas": [[1.0, 0.0]], "betas": [[1.0, 0.0]] }),
            }
        }
        ExampleName::Su2 => {
            let samples = haar_samples(k, &mut rng);
            let params = Su2Params::default();
            let ex = build_su2_example(&params, &samples)?;
            let c = ex.construction;
            Bundle {
                name: Some("su2".into()),
                catalog: None,
                a: Some(c.a),
                b: Some(c.b),
                theta: Some(c.theta),
                r: Some(c.r),
                l: Some(c.l),
                x: Some(c.x),
                y: Some(c.y),
                gauss: Some(ex.gauss),
                parameters: json!({
                    "r": params.r.label(),
                    "l": params.l.label(),
                    "spins": params.j_set.iter().map(|s| s.label()).collect::<Vec<_>>(),
                    "alphas": c.alphas.iter().map(|z| complex_to_json(*z)).collect::<Vec<_>>(),
                    "beta": complex_to_json(params.beta),
                    "seed": args.seed,
                    "samples": samples,
                }),
            }
        }
        ExampleName::U1 => {
            let angles: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..2.0 * std::f64::consts::PI)).collect();
            let ex = build_u1_example(&args.charges, &angles)?;
            let c = ex.construction;
            Bundle {
                name: Some("u1".into()),
                catalog: None,
                a: Some(c.a),
                b: Some(c.b),
                theta: Some(c.theta),
                r: Some(c.r),
                l: Some(c.l),
                x: Some(c.x),
                y: Some(c.y),
                gauss: Some(ex.gauss),
                parameters: json!({ "charges": args.charges, "seed": args.seed, "angles": angles }),
            }
        }
    };
    let _: &Value = &bundle.parameters;
    Ok(Outcome::ok(emit(bundle_text(&bundle), args.out.as_deref())?))
}
