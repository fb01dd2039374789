//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use twistzeta_core::chars::character_table;
use twistzeta_core::cohml::{h2_basis, h2_certificate, h2_equal};
use twistzeta_core::cyclo::{factorize, is_prime};
use twistzeta_core::group::{FiniteGroup, Subgroup, DEFAULT_SIZE_CAP};
use twistzeta_core::inv::{gamma_by_predicate, mu_table, strong_extension_matrix, t_equal_ratio, Context, PsiPick};
use twistzeta_core::twist::{gamma_group, stabilizers};

use crate::corpus;
use crate::error::CliError;
use crate::json;
use crate::pipeline;
use crate::verify::{self, VerifyOptions};

#[derive(Debug, Parser)]
#[command(
    name = "twistzeta",
    version,
    about = "Twist zeta functions of finite groups through Clifford theory over a normal p-subgroup"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the twist classes of N, assemble the twist zeta function and
    /// compare it with the brute-force value.
    Pipeline(RunArgs),
    /// Run the verification suite on a group or on the built-in corpus.
    Verify(RunArgs),
    /// Print the character table of G (and of N when one is given).
    Chartab(RunArgs),
    /// Print the G-twist classes of Irr(N) with their stabilisers.
    Twist(RunArgs),
    /// Print C, T and Gamma per class together with the route comparison.
    Invariants(RunArgs),
    /// List the built-in corpus.
    Corpus,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Group file in JSON.
    #[arg(long, conflicts_with = "corpus")]
    pub group: Option<PathBuf>,
    /// Built-in corpus entry.
    #[arg(long)]
    pub corpus: Option<String>,
    /// Generators of N as element indices or labels, comma separated.
    #[arg(long)]
    pub normal: Option<String>,
    /// The prime p; inferred from |N| when N is a nontrivial p-group.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Extra factors of p in the cohomology solver modulus, counted from 1.
    #[arg(long, default_value_t = 1)]
    pub headroom: u32,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = VerifyOptions::default().seed)]
    pub seed: u64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `(name, G, N, p)` selected by the arguments.
struct Target {
    name: String,
    group: FiniteGroup,
    normal: Subgroup,
    p: u64,
}

fn infer_prime(n: &Subgroup) -> Result<u64, CliError> {
    match factorize(n.order() as u64).as_slice() {
        [(p, _)] => Ok(*p),
        _ => Err(CliError::Input("cannot infer the prime from N; pass --prime".into())),
    }
}

fn load_target(args: &RunArgs) -> Result<Target, CliError> {
    if let Some(p) = args.prime {
        if !is_prime(p) {
            return Err(CliError::Input(format!("{} is not prime", p)));
        }
    }
    if args.headroom == 0 {
        return Err(CliError::Input("--headroom must be at least 1".into()));
    }
    let (name, group, file_normal, file_prime, default) = match (&args.group, &args.corpus) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            let f = json::parse_group_file(&text)?;
            let g = FiniteGroup::from_spec(&f.spec, DEFAULT_SIZE_CAP)?;
            (path.display().to_string(), g, f.normal, f.prime, None)
        }
        (None, Some(c)) => {
            let e = corpus::load(c).ok_or_else(|| {
                CliError::Input(format!(
                    "unknown corpus entry {:?}; known: {}",
                    c,
                    corpus::names().join(", ")
                ))
            })?;
            (e.name.to_string(), e.group, None, None, Some((e.normal, e.p)))
        }
        (None, None) => return Err(CliError::Input("pass --group FILE or --corpus NAME".into())),
    };
    let tokens = args.normal.as_deref().map(json::split_generators).or(file_normal);
    let normal = match (tokens, &default) {
        (Some(t), _) => {
            let gens = t
                .iter()
                .map(|x| json::resolve_element(&group, x))
                .collect::<Result<Vec<_>, _>>()?;
            Subgroup::closure(&group, &gens)
        }
        (None, Some((n, _))) => n.clone(),
        (None, None) => return Err(CliError::Input("no normal subgroup given; pass --normal".into())),
    };
    let p = match (args.prime.or(file_prime), &default) {
        (Some(p), _) => p,
        (None, Some((n, p))) if *n == normal => *p,
        _ => infer_prime(&normal)?,
    };
    Ok(Target { name, group, normal, p })
}

fn context(t: Target, headroom: u32) -> Result<Context, CliError> {
    Ok(Context::new(t.group, t.normal, t.p, headroom)?)
}

fn cmd_pipeline(args: &RunArgs) -> Result<(Value, i32), CliError> {
    let t = load_target(args)?;
    let run = pipeline::run(t.group, t.normal, t.p, args.headroom)?;
    let code = if run.agree() { 0 } else { 1 };
    Ok((pipeline::report(&run), code))
}

fn cmd_verify(args: &RunArgs) -> Result<(Value, i32), CliError> {
    let opts = VerifyOptions {
        seed: args.seed,
        headroom: args.headroom,
        ..VerifyOptions::default()
    };
    let targets: Vec<Target> = if args.group.is_some() || args.corpus.is_some() {
        vec![load_target(args)?]
    } else {
        corpus::all()
            .into_iter()
            .map(|e| Target {
                name: e.name.into(),
                group: e.group,
                normal: e.normal,
                p: e.p,
            })
            .collect()
    };
    let mut entries = Vec::new();
    for t in targets {
        entries.push(verify::verify_entry(&t.name, t.group, t.normal, t.p, &opts)?);
    }
    let global = verify::verify_global(&opts)?;
    let report = verify::report_json(&entries, &global);
    let code = if report["passed"] == true { 0 } else { 1 };
    Ok((report, code))
}

fn cmd_chartab(args: &RunArgs) -> Result<(Value, i32), CliError> {
    let has_normal = args.normal.is_some() || args.corpus.is_some();
    let t = load_target(args).or_else(|e| match (&args.group, has_normal) {
        // a group file without N still has a character table
        (Some(path), false) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            let f = json::parse_group_file(&text)?;
            let g = FiniteGroup::from_spec(&f.spec, DEFAULT_SIZE_CAP)?;
            let triv = Subgroup::trivial(&g);
            let _ = e;
            Ok(Target {
                name: path.display().to_string(),
                group: g,
                normal: triv,
                p: 2,
            })
        }
        _ => Err(e),
    })?;
    let g = &t.group;
    let whole = Subgroup::whole(g);
    let mut out = json!({
        "schema": json::SCHEMA,
        "command": "chartab",
        "G": json::char_table(g, &character_table(g, &whole)?),
    });
    if t.normal.order() > 1 {
        out["N"] = json::char_table(g, &character_table(g, &t.normal)?);
    }
    Ok((out, 0))
}

fn cmd_twist(args: &RunArgs) -> Result<(Value, i32), CliError> {
    let ctx = context(load_target(args)?, args.headroom)?;
    let cache = pipeline::basis_cache(&ctx);
    let invs = pipeline::invariants(&ctx, &cache)?;
    let classes: Vec<Value> = ctx
        .classes_n
        .iter()
        .zip(&invs)
        .map(|(c, inv)| {
            let st = stabilizers(&ctx.g, &ctx.table_n, c);
            json!({
                "rep": c.rep,
                "members": c.members,
                "degree": c.degree,
                "K": json::subgroup(&ctx.g, &st.k),
                "L": json::subgroup(&ctx.g, &st.l),
                "Gamma": json::gamma_ids(&ctx.g, &inv.gamma_p, &ctx.n),
            })
        })
        .collect();
    Ok((
        json!({ "schema": json::SCHEMA, "command": "twist", "group": pipeline::group_header(&ctx), "classes": classes }),
        0,
    ))
}

fn cmd_invariants(args: &RunArgs) -> Result<(Value, i32), CliError> {
    let t = load_target(args)?;
    let run = pipeline::run(t.group, t.normal, t.p, args.headroom)?;
    let ctx = &run.ctx;
    let mut token_of = vec![0usize; run.invariants.len()];
    for b in &run.buckets {
        for &m in &b.members {
            token_of[m] = b.t_id;
        }
    }
    let mut all_agree = true;
    let mut classes = Vec::new();
    for (i, inv) in run.invariants.iter().enumerate() {
        let mat = strong_extension_matrix(ctx, &inv.pair, &inv.kp)?;
        let basis = h2_basis(&inv.theta_hat.alpha.q);
        let mc = h2_certificate(&mat.alpha, &basis)?;
        let mg = gamma_group(&ctx.g, &inv.kp, &ctx.n, &mat.support(), &ctx.lin_g);
        let mu = mu_table(ctx, &mat, inv.theta(ctx), &ctx.bar(&inv.lp), PsiPick::First)?;
        let c_agree = h2_equal(&mc, &inv.c)?;
        let t_agree = t_equal_ratio(ctx, &inv.mu.module, &inv.mu_raw, &mu)?;
        let g_agree = mg == inv.gamma_p && gamma_by_predicate(ctx, inv) == inv.gamma_p;
        all_agree &= c_agree && t_agree && g_agree;
        classes.push(json!({
            "class": i,
            "rep": inv.rep,
            "C": json::certificate(&inv.c),
            "T": { "token": token_of[i], "cocycle": json::token(&inv.mu) },
            "Gamma": json::gamma_ids(&ctx.g, &inv.gamma_p, &ctx.n),
            "routes": {
                "monomial": { "C": json::certificate(&inv.c), "Gamma": json::gamma_ids(&ctx.g, &inv.gamma_p, &ctx.n) },
                "matrix": {
                    "C": json::certificate(&mc),
                    "Gamma": json::gamma_ids(&ctx.g, &mg, &ctx.n),
                    "C_agrees": c_agree,
                    "T_agrees": t_agree,
                    "Gamma_agrees": g_agree,
                },
            },
        }));
    }
    let out = json!({ "schema": json::SCHEMA, "command": "invariants", "group": pipeline::group_header(ctx), "classes": classes });
    Ok((out, if all_agree { 0 } else { 1 }))
}

fn cmd_corpus() -> (Value, i32) {
    let entries: Vec<Value> = corpus::all()
        .iter()
        .map(|e| json!({ "name": e.name, "about": e.about, "order": e.group.order(), "normal_order": e.normal.order(), "prime": e.p }))
        .collect();
    (
        json!({ "schema": json::SCHEMA, "command": "corpus", "entries": entries }),
        0,
    )
}

fn emit(value: &Value, out: Option<&PathBuf>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        }),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

/// Runs one parsed command and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let args = match &cli.command {
        Command::Corpus => None,
        Command::Pipeline(a)
        | Command::Verify(a)
        | Command::Chartab(a)
        | Command::Twist(a)
        | Command::Invariants(a) => Some(a.clone()),
    };
    let work = || match &cli.command {
        Command::Pipeline(a) => cmd_pipeline(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Chartab(a) => cmd_chartab(a),
        Command::Twist(a) => cmd_twist(a),
        Command::Invariants(a) => cmd_invariants(a),
        Command::Corpus => Ok(cmd_corpus()),
    };
    let jobs = args.as_ref().and_then(|a| a.jobs);
    let result = match rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build() {
        Ok(pool) => pool.install(work),
        Err(e) => Err(CliError::Input(format!("thread pool: {}", e))),
    };
    let out = args.as_ref().and_then(|a| a.out.as_ref());
    match result {
        Ok((value, code)) => match emit(&value, out) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("twistzeta: {}", e);
                2
            }
        },
        Err(e) => {
            let _ = emit(&json::error(e.code(), &e.to_string()), None);
            eprintln!("twistzeta: {}", e);
            e.exit_code()
        }
    }
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}
