//! The `skewcoh` command line: argument parsing, file loading, and report
//! rendering. Exit status is 0 on success, 1 on input errors and 2 when a
//! verification fails.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{avol_generation_certificate, default_names, ThetaTable, VolAssignment};
use crate::group::{FiniteGroup, GroupSpec, DEFAULT_CAP};
use crate::hochschild::{classify, cup_via_bar, parse_cochain, proj_h, smash_cup, Cochain, HochContext};
use crate::invariant::{
    brute_force_product, class_decompose, invariant_basis, invariant_dims, mackey_cup_with_terms, InvariantClass,
};
use crate::poset::{hasse_dot, quotient_poset};
use crate::reflength::{compare_orders_report, csv_field};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "skewcoh", version, about = "Cup products on Hochschild cohomology of S(V)#G for finite matrix groups")]
pub struct Cli {
    /// Maximum group order accepted during closure.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP, value_parser = clap::value_parser!(usize))]
    pub cap: usize,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Args, Debug)]
pub struct MaxDeg {
    /// Polynomial degree bound D.
    #[arg(long, env = "SKEWCOH_MAXDEG", default_value_t = 4)]
    pub maxdeg: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group construction.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// The codimension poset on G/K (DOT on stdout unless --json/--dot paths are given).
    Poset {
        spec: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// The volume-form cocycle θ as a table g,h,θ(g,h).
    Theta { spec: PathBuf },
    /// Multiplication table of the twisted volume algebra and generation certificates.
    Avol { spec: PathBuf },
    /// Smash and bar-complex cup products of two cochains.
    Cup {
        spec: PathBuf,
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        beta: PathBuf,
    },
    /// Product of invariant classes through the Mackey formula.
    Mackey {
        spec: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Invariant dimensions per conjugacy class and the product table of volume classes.
    Invariants {
        spec: PathBuf,
        #[command(flatten)]
        maxdeg: MaxDeg,
    },
    /// Reflection length against codimension.
    Reflen { spec: PathBuf },
    /// Run a verification suite.
    Verify {
        spec: PathBuf,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(verify::SUITES))]
        suite: String,
        #[command(flatten)]
        maxdeg: MaxDeg,
        /// Perturb θ(g,h) before the cocycle suite; g and h are names or indices.
        #[arg(long, value_name = "G,H")]
        perturb_theta: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupAction {
    /// Close the generators and print a summary.
    Build { spec: PathBuf },
}

/// Failure modes of a command, mapped to exit codes.
enum Failure {
    Input(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

/// A loaded spec with its group and coordinate names.
struct Loaded {
    spec: GroupSpec,
    group: FiniteGroup,
    names: Vec<String>,
    dir: PathBuf,
}

fn load(path: &Path, cap: usize) -> Result<Loaded> {
    let spec = GroupSpec::from_path(path)?;
    let group = spec.build(cap)?;
    let names = coordinate_names(&spec.raw, group.n())?;
    Ok(Loaded {
        spec,
        group,
        names,
        dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
    })
}

/// Optional `"coordinates"` key naming the basis of V.
fn coordinate_names(raw: &Value, n: usize) -> Result<Vec<String>> {
    match raw.get("coordinates") {
        None => Ok(default_names(n)),
        Some(Value::Array(a)) if a.len() == n => a
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::malformed(format!("coordinates[{i}]"), "expected a string"))
            })
            .collect(),
        Some(_) => Err(Error::malformed("coordinates", format!("expected a list of {n} names"))),
    }
}

/// Read a JSON file, falling back to the spec's directory for relative paths.
fn read_json(path: &Path, dir: &Path) -> Result<Value> {
    let resolved = if path.exists() || path.is_absolute() {
        path.to_path_buf()
    } else {
        dir.join(path)
    };
    let text = std::fs::read_to_string(&resolved)?;
    Ok(serde_json::from_str(&text)?)
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

/// Parse arguments and run; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if cli.cap == 0 {
        let _ = writeln!(err, "error: --cap must be at least 1");
        return EXIT_INPUT;
    }
    match dispatch(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
        Err(Failure::Verify) => EXIT_VERIFY,
    }
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<(), Failure> {
    let cap = cli.cap;
    match &cli.command {
        Command::Group {
            action: GroupAction::Build { spec },
        } => {
            let l = load(spec, cap)?;
            let mut v = serde_json::to_value(l.group.summary()).map_err(Error::from)?;
            if let Some(label) = &l.spec.label {
                v["label"] = json!(label);
            }
            write_json(out, &v)?;
        }
        Command::Poset { spec, dot, json } => {
            let l = load(spec, cap)?;
            let poset = quotient_poset(&l.group)?;
            let dot_text = hasse_dot(&poset);
            let json_value = json!({
                "cosets": poset.names,
                "codims": poset.codims,
                "covers": poset.covers(),
                "minimal": poset.minimal_nonidentity.iter().map(|&c| &poset.names[c]).collect::<Vec<_>>(),
            });
            if let Some(p) = dot {
                std::fs::write(p, &dot_text).map_err(Error::from)?;
            }
            if let Some(p) = json {
                std::fs::write(p, serde_json::to_string_pretty(&json_value).map_err(Error::from)? + "\n")
                    .map_err(Error::from)?;
            }
            if dot.is_none() && json.is_none() {
                match cli.format {
                    Some(Format::Json) => write_json(out, &json_value)?,
                    _ => write!(out, "{dot_text}").map_err(Error::from)?,
                }
            }
        }
        Command::Theta { spec } => {
            let l = load(spec, cap)?;
            let table = ThetaTable::new(&l.group, &VolAssignment::canonical(&l.group));
            let ord = l.group.order();
            if cli.format == Some(Format::Json) {
                let rows: Vec<Value> = (0..ord)
                    .flat_map(|g| (0..ord).map(move |h| (g, h)))
                    .map(|(g, h)| json!({"g": l.group.name(g), "h": l.group.name(h), "theta": table.get(g, h).to_string()}))
                    .collect();
                write_json(out, &Value::Array(rows))?;
            } else {
                let mut s = String::from("g,h,theta\n");
                for g in 0..ord {
                    for h in 0..ord {
                        s.push_str(&format!(
                            "{},{},{}\n",
                            csv_field(l.group.name(g)),
                            csv_field(l.group.name(h)),
                            csv_field(&table.get(g, h).to_string())
                        ));
                    }
                }
                write!(out, "{s}").map_err(Error::from)?;
            }
        }
        Command::Avol { spec } => {
            let l = load(spec, cap)?;
            let group = &l.group;
            let table = ThetaTable::new(group, &VolAssignment::canonical(group));
            let poset = quotient_poset(group)?;
            let certs = avol_generation_certificate(group, &table, &poset)?;
            let ord = group.order();
            let products: Vec<Value> = (0..ord)
                .map(|g| {
                    Value::Array(
                        (0..ord)
                            .map(|h| {
                                let t = table.get(g, h);
                                if t.is_zero() {
                                    Value::Null
                                } else {
                                    json!({"tag": group.name(group.mul(g, h)), "coeff": t.to_string()})
                                }
                            })
                            .collect(),
                    )
                })
                .collect();
            let certificates: Vec<Value> = certs
                .iter()
                .map(|c| {
                    json!({
                        "element": group.name(c.element),
                        "codim": group.element(c.element).codim,
                        "factors": c.factors.iter().map(|&f| group.name(f)).collect::<Vec<_>>(),
                        "scalar": c.scalar.to_string(),
                    })
                })
                .collect();
            write_json(
                out,
                &json!({
                    "elements": (0..ord).map(|g| group.name(g)).collect::<Vec<_>>(),
                    "degrees": (0..ord).map(|g| group.element(g).codim).collect::<Vec<_>>(),
                    "products": products,
                    "certificates": certificates,
                }),
            )?;
        }
        Command::Cup { spec, alpha, beta } => {
            let l = load(spec, cap)?;
            let ctx = HochContext::new(&l.group);
            let a = parse_cochain(&read_json(alpha, &l.dir)?, &ctx, &l.names)?;
            let b = parse_cochain(&read_json(beta, &l.dir)?, &ctx, &l.names)?;
            let smash = smash_cup(&ctx, &a, &b);
            let bar = if a.degree() + b.degree() <= ctx.n() {
                Some(cup_via_bar(&ctx, &a, &b)?)
            } else {
                None
            };
            let describe = |c: &Cochain| c.to_json(&l.group, &l.names);
            let class_names = |c: &Cochain| -> Value {
                classify(&ctx, c)
                    .into_iter()
                    .map(|(g, k)| (l.group.name(g).to_string(), serde_json::to_value(k).unwrap_or(Value::Null)))
                    .collect::<serde_json::Map<_, _>>()
                    .into()
            };
            let h = proj_h(&ctx, &smash).ok().map(|h| describe(h.cochain()));
            write_json(
                out,
                &json!({
                    "alpha": describe(&a),
                    "beta": describe(&b),
                    "alpha_classes": class_names(&a),
                    "beta_classes": class_names(&b),
                    "smash": describe(&smash),
                    "bar": bar.as_ref().map(describe),
                    "smash_equals_bar": bar.as_ref().map(|c| *c == smash),
                    "cohomology_class": h,
                }),
            )?;
        }
        Command::Mackey { spec, a, b } => {
            let l = load(spec, cap)?;
            let ctx = HochContext::new(&l.group);
            let xa = invariant_input(&ctx, &read_json(a, &l.dir)?, &l.names)?;
            let xb = invariant_input(&ctx, &read_json(b, &l.dir)?, &l.names)?;
            let mut total: std::collections::BTreeMap<usize, Cochain> = Default::default();
            let mut oracle: std::collections::BTreeMap<usize, Cochain> = Default::default();
            let mut terms = Vec::new();
            for ia in &xa {
                for ib in &xb {
                    let (prod, ts) = mackey_cup_with_terms(&ctx, ia, ib)?;
                    for t in ts {
                        terms.push(json!({
                            "g": l.group.name(ia.class_rep),
                            "h": l.group.name(ib.class_rep),
                            "x": l.group.name(t.x),
                            "y": l.group.name(t.y),
                            "k": l.group.name(t.k),
                            "intersection_order": t.subgroup_order,
                        }));
                    }
                    for p in prod {
                        add_into(&mut total, p);
                    }
                    for p in brute_force_product(&ctx, ia, ib)? {
                        add_into(&mut oracle, p);
                    }
                }
            }
            let product: Vec<Value> = total
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(&k, c)| json!({"class_rep": l.group.name(k), "component": c.to_json(&l.group, &l.names)}))
                .collect();
            let agrees = total.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>()
                == oracle.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>();
            write_json(
                out,
                &json!({"product": product, "double_coset_terms": terms, "brute_force_agrees": agrees}),
            )?;
            if !agrees {
                return Err(Failure::Verify);
            }
        }
        Command::Invariants { spec, maxdeg } => {
            let l = load(spec, cap)?;
            let ctx = HochContext::new(&l.group);
            let d = maxdeg.maxdeg;
            let reps = l.group.class_reps();
            let dims: Vec<_> = reps.iter().map(|&g| invariant_dims(&ctx, g, d)).collect();
            let vol_classes: Vec<InvariantClass> = reps
                .iter()
                .filter_map(|&g| invariant_basis(&ctx, g, l.group.element(g).codim, 0).into_iter().next())
                .collect();
            let mut products = Vec::new();
            for a in &vol_classes {
                for b in &vol_classes {
                    let (prod, _) = mackey_cup_with_terms(&ctx, a, b)?;
                    products.push(json!({
                        "a": l.group.name(a.class_rep),
                        "b": l.group.name(b.class_rep),
                        "product": prod.iter().map(|p| json!({
                            "class_rep": l.group.name(p.class_rep),
                            "component": p.component.cochain().display_with(&l.group, &l.names),
                        })).collect::<Vec<_>>(),
                    }));
                }
            }
            if cli.format == Some(Format::Csv) {
                let mut s = String::from("class,det_is_one,centralizer_order,p,d,dim\n");
                for r in &dims {
                    for (p, row) in r.dims.iter().enumerate() {
                        for (dd, x) in row.iter().enumerate() {
                            s.push_str(&format!(
                                "{},{},{},{p},{dd},{x}\n",
                                csv_field(&r.name),
                                r.det_is_one,
                                r.centralizer_order
                            ));
                        }
                    }
                }
                write!(out, "{s}").map_err(Error::from)?;
            } else {
                write_json(
                    out,
                    &json!({"maxdeg": d, "classes": dims, "volume_class_products": products}),
                )?;
            }
        }
        Command::Reflen { spec } => {
            let l = load(spec, cap)?;
            let rep = compare_orders_report(&l.group)?;
            if cli.format == Some(Format::Json) {
                write_json(out, &serde_json::to_value(&rep).map_err(Error::from)?)?;
            } else {
                write!(out, "{}", rep.table.to_csv()).map_err(Error::from)?;
            }
        }
        Command::Verify {
            spec,
            suite,
            maxdeg,
            perturb_theta,
        } => {
            let l = load(spec, cap)?;
            let ctx = HochContext::new(&l.group);
            let d = maxdeg.maxdeg;
            let report = match suite.as_str() {
                "cupsmash" => {
                    let showcase = showcase_pairs(&l, &ctx)?;
                    verify::cupsmash(&ctx, d, &showcase, &l.names)?
                }
                "phiupsilon" => verify::phiupsilon(&ctx, d),
                "kernel" => verify::kernel(&ctx, d),
                "dims" => verify::dims(&ctx, d),
                "cocycle" => {
                    let mut table = ThetaTable::new(&l.group, ctx.vols());
                    if let Some(spec) = perturb_theta {
                        let (g, h) = parse_pair(&l.group, spec)?;
                        verify::perturb_theta(&mut table, g, h, ctx.m());
                    }
                    verify::cocycle(&l.group, &table)
                }
                "mackey" => verify::mackey(&ctx, d)?,
                "determinant" => verify::determinant(&ctx, d),
                "molien" => verify::molien(&l.group, d),
                other => return Err(Error::InvalidSpec(format!("unknown suite {other}")).into()),
            };
            let passed = report.passed();
            let mut v = serde_json::to_value(&report).map_err(Error::from)?;
            v["passed"] = json!(passed);
            v["maxdeg"] = json!(d);
            write_json(out, &v)?;
            if !passed {
                let _ = writeln!(err, "verification failed: {} of {} checks", report.failures.len(), report.checked);
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}

fn add_into(acc: &mut std::collections::BTreeMap<usize, Cochain>, p: InvariantClass) {
    let c = p.component.cochain();
    acc.entry(p.class_rep)
        .or_insert_with(|| Cochain::zero(c.n(), c.modulus(), c.degree()))
        .add_assign(c);
}

/// A cochain file for `mackey`: either supported on one class
/// representative (and invariant under its centralizer) or G-invariant.
fn invariant_input(ctx: &HochContext, v: &Value, names: &[String]) -> Result<Vec<InvariantClass>> {
    let c = parse_cochain(v, ctx, names)?;
    let h = proj_h(ctx, &c)?;
    let tags: Vec<usize> = h.cochain().comps().keys().copied().collect();
    match tags.as_slice() {
        [g] if ctx.group().is_class_rep(*g) => Ok(vec![InvariantClass::new(ctx, *g, h)?]),
        _ => class_decompose(ctx, &h),
    }
}

fn parse_element(group: &FiniteGroup, s: &str) -> Result<usize> {
    let s = s.trim();
    if let Some(i) = group.index_of_name(s) {
        return Ok(i);
    }
    s.parse::<usize>()
        .ok()
        .filter(|&i| i < group.order())
        .ok_or_else(|| Error::InvalidSpec(format!("no element {s:?}")))
}

fn parse_pair(group: &FiniteGroup, s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidSpec(format!("expected G,H but got {s:?}")))?;
    Ok((parse_element(group, a)?, parse_element(group, b)?))
}

/// Optional `"showcase"` key: a list of `{"alpha": cochain, "beta": cochain}`.
fn showcase_pairs(l: &Loaded, ctx: &HochContext) -> Result<Vec<(Cochain, Cochain)>> {
    let Some(list) = l.spec.raw.get("showcase") else {
        return Ok(Vec::new());
    };
    let list = list
        .as_array()
        .ok_or_else(|| Error::malformed("showcase", "expected a list"))?;
    list.iter()
        .enumerate()
        .map(|(i, item)| {
            let get = |key: &str| -> Result<Cochain> {
                let v = item
                    .get(key)
                    .ok_or_else(|| Error::malformed(format!("showcase[{i}]"), format!("missing {key:?}")))?;
                parse_cochain(v, ctx, &l.names).map_err(|e| crate::group::relocate(e, &format!("showcase[{i}].{key}")))
            };
            Ok((get("alpha")?, get("beta")?))
        })
        .collect()
}
