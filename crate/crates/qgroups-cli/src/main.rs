//! Command-line front end for the exact R-matrix workbench: build the
//! R-matrices of the built-in (or user-supplied) modules, run the check
//! batteries, compute braiding minimal polynomials, normalize (R, R') pairs,
//! and emit the double-bosonization relation reports.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qgroups::dbos::{
    braided_relations, make_rprime, normalization_lambda, relation_report, BraidedRelation,
    RPrimePair,
};
use qgroups::frt::{
    antipode_identities, frt_condition, identity_suite, pairing_chain_check, IdentityReport,
};
use qgroups::minpoly::{minpoly_generic, minpoly_probe, MinPolyResult};
use qgroups::qfield::{rat_int, Rat};
use qgroups::rmatrix::{
    a1_root_vector_specs, b3_root_vector_specs, build_rvv, RMatrixBundle,
};
use qgroups::repmod::{builtin_a1_spin32, builtin_a1_vector, builtin_b3_spin};
use qgroups::serial;
use qgroups::tensor::{qybe_residual, TensorMatrix};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qgroups", about = "Exact symbolic R-matrix workbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    #[value(name = "b3-spin")]
    B3Spin,
    #[value(name = "a1-spin32")]
    A1Spin32,
    #[value(name = "a1-vector")]
    A1Vector,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    /// Printed orientation: raising operators act on the second leg.
    Paper,
    /// Raising operators act on the first leg.
    Std,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// Canonical JSON records.
    Record,
    /// Human-readable transcript.
    Text,
}

#[derive(Args)]
struct InputArgs {
    /// Built-in module selector.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    /// Module file (JSON record); requires --roots.
    #[arg(long)]
    module: Option<PathBuf>,
    /// Root-vector spec file (JSON record).
    #[arg(long)]
    roots: Option<PathBuf>,
    /// Which index orientation of R to use.
    #[arg(long, value_enum, default_value = "paper")]
    convention: Convention,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Build the R-matrix for a module and emit it.
    Build {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run check batteries; exit code 0 iff all requested checks pass.
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Quantum Yang-Baxter equation.
        #[arg(long)]
        qybe: bool,
        /// Dual-basis consistency constants.
        #[arg(long)]
        frt_condition: bool,
        /// The ten three-leg transpose identities.
        #[arg(long)]
        identity_suite: bool,
        /// Weak-antipode convolution units.
        #[arg(long)]
        antipode: bool,
        /// All of the above.
        #[arg(long)]
        all: bool,
    },
    /// Minimal polynomial of the braiding PR.
    Minpoly {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Probe rows "i,k;i,k;..." for the sparse solver (generic
        /// elimination if omitted).
        #[arg(long)]
        probe_rows: Option<String>,
        /// Polynomial degree for the probe solver.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Normalization data: lambda, q_*, rescaled eigenvalues.
    Normalize {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Squared length of the adjoined root.
        #[arg(long)]
        target_length: i64,
    },
    /// Build the companion matrix R' of the normalized pair.
    Rprime {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Squared length of the adjoined root.
        #[arg(long)]
        target_length: i64,
    },
    /// Full relation report: Cartan matrix and rendered relations.
    Report {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Squared length of the adjoined root.
        #[arg(long)]
        target_length: i64,
    },
    /// Braided-vector-algebra relations from R'.
    Relations {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Squared length of the adjoined root.
        #[arg(long)]
        target_length: i64,
    },
}

fn load_bundle(input: &InputArgs) -> Result<RMatrixBundle> {
    match (&input.builtin, &input.module) {
        (Some(_), Some(_)) => bail!("--builtin and --module are mutually exclusive"),
        (Some(b), None) => {
            let (m, specs) = match b {
                Builtin::B3Spin => (builtin_b3_spin(), b3_root_vector_specs()),
                Builtin::A1Spin32 => {
                    let m = builtin_a1_spin32();
                    let s = a1_root_vector_specs(&m);
                    (m, s)
                }
                Builtin::A1Vector => {
                    let m = builtin_a1_vector();
                    let s = a1_root_vector_specs(&m);
                    (m, s)
                }
            };
            build_rvv(&m, &specs).map_err(|e| anyhow!("build failed: {e}"))
        }
        (None, Some(path)) => {
            let roots = input
                .roots
                .as_ref()
                .ok_or_else(|| anyhow!("--module requires --roots"))?;
            let ms = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let m = serial::module_from_json(&ms)
                .map_err(|e| anyhow!("{}: {e}", path.display()))?;
            let rs = fs::read_to_string(roots)
                .with_context(|| format!("reading {}", roots.display()))?;
            let specs = serial::specs_from_json(&rs)
                .map_err(|e| anyhow!("{}: {e}", roots.display()))?;
            build_rvv(&m, &specs).map_err(|e| anyhow!("build failed: {e}"))
        }
        (None, None) => bail!("exactly one of --builtin or --module is required"),
    }
}

fn chosen_r<'a>(b: &'a RMatrixBundle, c: Convention) -> &'a TensorMatrix {
    match c {
        Convention::Paper => &b.r_paper,
        Convention::Std => &b.r_std,
    }
}

fn emit(output: &OutputArgs, payload: &str) -> Result<()> {
    match &output.out {
        Some(p) => fs::write(p, format!("{payload}\n"))
            .with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            // Tolerate a closed pipe (e.g. piping into `head`).
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{payload}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.context("writing to stdout"),
            }
        }
    }
}

fn render_tensor_text(r: &TensorMatrix) -> String {
    let mut lines = vec![format!("dim {}, {} nonzero entries", r.dim, r.mat.entries.len())];
    for ((fr, fc), v) in &r.mat.entries {
        let (i, k) = r.unflat(*fr);
        let (j, l) = r.unflat(*fc);
        lines.push(format!("R^{{{i}{k}}}_{{{j}{l}}} = {v}"));
    }
    lines.join("\n")
}

fn render_identity_report(rep: &IdentityReport) -> Vec<String> {
    let mut lines = vec![format!("subject: {}", rep.subject)];
    for c in &rep.checks {
        let status = if c.pass { "pass" } else { "FAIL" };
        match &c.witness {
            Some((r, w)) if !c.pass => {
                lines.push(format!("  {:<28} {status} (first mismatch at {r:?} {w:?})", c.name))
            }
            _ => lines.push(format!("  {:<28} {status}", c.name)),
        }
    }
    lines
}

fn parse_probe_rows(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(';')
        .map(|pair| {
            let mut it = pair.split(',');
            let a = it.next().and_then(|x| x.trim().parse().ok());
            let b = it.next().and_then(|x| x.trim().parse().ok());
            match (a, b, it.next()) {
                (Some(a), Some(b), None) => Ok((a, b)),
                _ => bail!("bad probe row {pair:?}; expected \"i,k\" pairs joined by ';'"),
            }
        })
        .collect()
}

/// The minimal polynomial as a rendered line: t^d - D1 t^{d-1} + ... .
fn render_minpoly(mp: &MinPolyResult) -> Vec<String> {
    let mut lines = vec![format!("degree {}", mp.degree)];
    lines.push(format!(
        "roots: {}",
        mp.eigenvalues.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ")
    ));
    for (k, d) in mp.elementary_symmetric.iter().enumerate() {
        let val = d
            .as_coeff()
            .map(|c| format!("{c}"))
            .unwrap_or_else(|| "<non-polynomial>".into());
        lines.push(format!("D{} = {}", k + 1, val));
    }
    lines
}

/// Normalized pair for the given target root length: normalizes the braiding
/// at the eigenvalue -lambda with lambda = q^{(mu_n, mu_n) - target}.
fn normalized_pair(b: &RMatrixBundle, target: i64) -> Result<(MinPolyResult, RPrimePair, Rat)> {
    let n = b.module.dim;
    let t = rat_int(target);
    let mu = b.module.weight_pairing(n, n);
    let lambda =
        normalization_lambda(&mu, &t).map_err(|e| anyhow!("normalization failed: {e}"))?;
    let mp = minpoly_generic(&b.braiding());
    let pair = make_rprime(&b.r_paper, &mp, &(-lambda))
        .map_err(|e| anyhow!("pair construction failed: {e}"))?;
    Ok((mp, pair, t))
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Build { input, output } => {
            let b = load_bundle(&input)?;
            let r = chosen_r(&b, input.convention);
            let payload = match output.format {
                Format::Record => serial::tensor_to_json(r),
                Format::Text => render_tensor_text(r),
            };
            emit(&output, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { input, output, qybe, frt_condition: frt, identity_suite: suite, antipode, all } => {
            if !(qybe || frt || suite || antipode || all) {
                bail!("select at least one of --qybe --frt-condition --identity-suite --antipode --all");
            }
            let b = load_bundle(&input)?;
            let r = chosen_r(&b, input.convention);
            let mut lines = Vec::new();
            let mut ok = true;
            if qybe || all {
                let pass = qybe_residual(r).map_err(|e| anyhow!("{e}"))?.is_zero();
                ok &= pass;
                lines.push(format!("qybe: {}", if pass { "pass" } else { "FAIL" }));
            }
            if frt || all {
                match frt_condition(r) {
                    Ok(consts) => {
                        lines.push(format!(
                            "frt-condition: pass (constants {})",
                            consts.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(", ")
                        ));
                    }
                    Err(e) => {
                        ok = false;
                        lines.push(format!("frt-condition: FAIL ({e})"));
                    }
                }
            }
            if suite || all {
                let rep = identity_suite(r).map_err(|e| anyhow!("{e}"))?;
                ok &= rep.all_pass();
                lines.push("identity-suite:".into());
                lines.extend(render_identity_report(&rep));
                let chain = pairing_chain_check(r).map_err(|e| anyhow!("{e}"))?;
                ok &= chain.pass;
                lines.push(format!(
                    "  {:<28} {}",
                    chain.name,
                    if chain.pass { "pass" } else { "FAIL" }
                ));
            }
            if antipode || all {
                let rep = antipode_identities(r).map_err(|e| anyhow!("{e}"))?;
                ok &= rep.all_pass();
                lines.push("antipode:".into());
                lines.extend(render_identity_report(&rep));
            }
            lines.push(format!("overall: {}", if ok { "pass" } else { "FAIL" }));
            emit(&output, &lines.join("\n"))?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Minpoly { input, output, probe_rows, degree } => {
            let b = load_bundle(&input)?;
            let braid = qgroups::tensor::permutation(b.module.dim)
                .mul(chosen_r(&b, input.convention))
                .map_err(|e| anyhow!("{e}"))?;
            let mp = match probe_rows {
                Some(s) => {
                    let rows = parse_probe_rows(&s)?;
                    let d = degree.ok_or_else(|| anyhow!("--probe-rows requires --degree"))?;
                    minpoly_probe(&braid, d, &rows).map_err(|e| anyhow!("probe solve: {e}"))?
                }
                None => minpoly_generic(&braid),
            };
            let payload = match output.format {
                Format::Record => serial::minpoly_to_json(&mp),
                Format::Text => render_minpoly(&mp).join("\n"),
            };
            emit(&output, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Normalize { input, output, target_length } => {
            let b = load_bundle(&input)?;
            let (_, pair, _) = normalized_pair(&b, target_length)?;
            let qs = qgroups::dbos::q_star(&rat_int(target_length))
                .map_err(|e| anyhow!("{e}"))?;
            let payload = match output.format {
                Format::Record => format!(
                    "{{\n  \"lambda\": {},\n  \"q_star\": {},\n  \"eigenvalues_normalized\": [{}],\n  \"normalized_index\": {}\n}}",
                    serial::coeff_record(&pair.lambda),
                    serial::coeff_record(&qs),
                    pair.eigenvalues_normalized
                        .iter()
                        .map(|x| serial::coeff_record(x))
                        .collect::<Vec<_>>()
                        .join(", "),
                    pair.normalized_index
                ),
                Format::Text => {
                    let evs = pair
                        .eigenvalues_normalized
                        .iter()
                        .map(|x| format!("{x}"))
                        .collect::<Vec<_>>()
                        .join(", ");
                    format!(
                        "lambda = {}\nq_* = {}\nnormalized eigenvalues: {}\nnormalized at index {}",
                        pair.lambda, qs, evs, pair.normalized_index
                    )
                }
            };
            emit(&output, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Rprime { input, output, target_length } => {
            let b = load_bundle(&input)?;
            let (_, pair, _) = normalized_pair(&b, target_length)?;
            let payload = match output.format {
                Format::Record => serial::tensor_to_json(&pair.rprime),
                Format::Text => render_tensor_text(&pair.rprime),
            };
            emit(&output, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { input, output, target_length } => {
            let b = load_bundle(&input)?;
            let (_, pair, t) = normalized_pair(&b, target_length)?;
            let rep = relation_report(&b, &pair, b.module.dim, &t)
                .map_err(|e| anyhow!("report failed: {e}"))?;
            let payload = match output.format {
                Format::Record => serial::report_to_json(&rep),
                Format::Text => {
                    let mut lines = vec![format!(
                        "Cartan matrix: {:?}",
                        rep.cartan_matrix
                    )];
                    lines.extend(rep.relations.iter().cloned());
                    lines.join("\n")
                }
            };
            emit(&output, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Relations { input, output, target_length } => {
            let b = load_bundle(&input)?;
            let (_, pair, _) = normalized_pair(&b, target_length)?;
            let rels = braided_relations(&pair);
            let mut lines = Vec::new();
            for rel in &rels {
                match rel {
                    BraidedRelation::Binomial { i, j, coeff } => {
                        lines.push(format!("e{i} e{j} = {coeff} e{j} e{i}"));
                    }
                    BraidedRelation::General { i, j, terms } => {
                        let rhs = terms
                            .iter()
                            .map(|(a, b, v)| format!("({v}) e{b} e{a}"))
                            .collect::<Vec<_>>()
                            .join(" + ");
                        lines.push(format!("e{i} e{j} = {rhs}"));
                    }
                }
            }
            let payload = match output.format {
                Format::Record => {
                    let body = rels
                        .iter()
                        .zip(&lines)
                        .map(|(rel, rendered)| {
                            let (i, j, kind) = match rel {
                                BraidedRelation::Binomial { i, j, .. } => (i, j, "binomial"),
                                BraidedRelation::General { i, j, .. } => (i, j, "general"),
                            };
                            format!(
                                "  {{\"i\": {i}, \"j\": {j}, \"kind\": \"{kind}\", \"rendered\": {}}}",
                                serde_json::to_string(rendered).expect("string serializes")
                            )
                        })
                        .collect::<Vec<_>>()
                        .join(",\n");
                    format!("[\n{body}\n]")
                }
                Format::Text => lines.join("\n"),
            };
            emit(&output, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
