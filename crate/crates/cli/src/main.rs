use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ergodic_core::carlitz::{check_ergodic_carlitz, lipschitz_report, to_carlitz};
use ergodic_core::cyclegen::{gen_cycle, random_data};
use ergodic_core::dynamics::{is_bijective_mod, is_compatible, is_transitive_mod, orbit};
use ergodic_core::gf2ps::{format_hex, parse_hex_u64};
use ergodic_core::io::{self, Coefficients, Ring};
use ergodic_core::vanderput::{check_ergodic_vdp, check_lipschitz_vdp, check_mp_vdp, to_vdp};
use ergodic_core::z2compare::{
    check_compatible_z2, check_ergodic_mahler_z2, check_ergodic_z2, check_mp_z2, to_vdp_z2,
};
use ergodic_core::{Error, LevelVerdicts, Residue, Verdict, Z2FunctionTable};

/// Verify, expand and iterate 1-Lipschitz maps of F2[[T]] and Z2.
#[derive(Parser)]
#[command(name = "ergodic", version)]
struct Cli {
    /// Print nothing on standard output; report through the exit code only.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a criterion on a coefficient file, or every property of a table.
    Verify(VerifyArgs),
    /// Expansion coefficients of a table.
    Expand {
        #[arg(long, value_enum)]
        basis: ExpandBasis,
        #[arg(long)]
        table: PathBuf,
    },
    /// Value of an expansion at one point.
    Eval {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, value_parser = hex)]
        x: u64,
        #[arg(long)]
        prec: u32,
    },
    /// Rewrite coefficients in the other basis.
    Convert {
        #[arg(long, value_enum)]
        from: ExpandBasis,
        #[arg(long, value_enum)]
        to: ExpandBasis,
        #[arg(long)]
        coeffs: PathBuf,
    },
    /// Build a single-cycle compatible permutation modulo T^(n+1).
    GenCycle {
        #[arg(long)]
        n: u32,
        #[arg(long, conflicts_with = "data", required_unless_present = "data")]
        seed: Option<u64>,
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Print the orbit of a point, one hex residue (or one bit) per line.
    Keystream {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, value_parser = hex)]
        x0: u64,
        #[arg(long)]
        prec: u32,
        #[arg(long)]
        steps: usize,
        /// Emit only the coefficient of T^I (bit I) of each residue.
        #[arg(long)]
        bit: Option<u32>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, required_unless_present = "exhaustive")]
    ring: Option<RingArg>,
    #[arg(long, value_enum, required_unless_present = "exhaustive")]
    basis: Option<BasisArg>,
    #[arg(long, value_enum, required_unless_present = "exhaustive")]
    check: Option<Check>,
    #[arg(long, required_unless_present = "exhaustive")]
    coeffs: Option<PathBuf>,
    /// Brute-force compatibility, bijectivity and transitivity on a table.
    #[arg(long, requires = "table", conflicts_with_all = ["ring", "basis", "check", "coeffs"])]
    exhaustive: bool,
    #[arg(long, requires = "exhaustive")]
    table: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RingArg {
    F2t,
    Z2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Vdp,
    Carlitz,
    Mahler,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpandBasis {
    Vdp,
    Carlitz,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Lipschitz,
    Mp,
    Ergodic,
}

fn hex(s: &str) -> std::result::Result<u64, String> {
    parse_hex_u64(s).map_err(|e| e.to_string())
}

/// What a subcommand prints, and whether the property it tested holds.
enum Report {
    Json(Value, Verdict),
    Lines(Vec<String>),
}

fn levels_json(v: &LevelVerdicts) -> Value {
    Value::from(v.as_options())
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Unknown => "unknown",
    }
}

fn verify(args: &VerifyArgs) -> Result<Report> {
    if args.exhaustive {
        return exhaustive(args.table.as_ref().expect("clap enforces --table"));
    }
    let (Some(ring), Some(basis), Some(check), Some(path)) =
        (args.ring, args.basis, args.check, args.coeffs.as_ref())
    else {
        bail!("--ring, --basis, --check and --coeffs are required");
    };
    let c = io::load_coefficients(path)?;
    let ring_ok = matches!(
        (ring, c.ring()),
        (RingArg::F2t, Ring::F2T) | (RingArg::Z2, Ring::Z2)
    );
    let basis_ok = matches!(
        (basis, &c),
        (BasisArg::Vdp, Coefficients::Vdp(_) | Coefficients::Z2Vdp(_))
            | (BasisArg::Carlitz, Coefficients::Carlitz(_))
            | (BasisArg::Mahler, Coefficients::Mahler(_))
    );
    if !ring_ok || !basis_ok {
        bail!(
            "{} holds {:?} coefficients over {:?}",
            path.display(),
            c.basis(),
            c.ring()
        );
    }
    let k = c.precision();
    // criteria without a native form in the file's basis go through the
    // table and its van der Put coefficients
    let levels = match (check, &c) {
        (Check::Lipschitz, Coefficients::Vdp(v)) => Levels::Overall(check_lipschitz_vdp(v)),
        (Check::Lipschitz, Coefficients::Carlitz(a)) => {
            let r = lipschitz_report(a);
            Levels::Overall(r.holds).with_note((!r.undetermined.is_empty()).then(|| {
                format!(
                    "{} coefficients not visible at this precision",
                    r.undetermined.len()
                )
            }))
        }
        (Check::Lipschitz, Coefficients::Z2Vdp(v)) => Levels::Overall(check_compatible_z2(v)),
        (Check::Lipschitz, Coefficients::Mahler(_)) => {
            Levels::Overall(check_compatible_z2(&to_vdp_z2(&z2_table(&c)?)))
        }
        (Check::Mp, Coefficients::Vdp(v)) => lipschitz_gated(check_mp_vdp(v))?,
        (Check::Mp, Coefficients::Carlitz(a)) => {
            lipschitz_gated(check_mp_vdp(&to_vdp(&a.to_table()?)))?
        }
        (Check::Mp, Coefficients::Z2Vdp(v)) => lipschitz_gated(check_mp_z2(v))?,
        (Check::Mp, Coefficients::Mahler(_)) => {
            lipschitz_gated(check_mp_z2(&to_vdp_z2(&z2_table(&c)?)))?
        }
        (Check::Ergodic, Coefficients::Vdp(v)) => lipschitz_gated(check_ergodic_vdp(v))?,
        (Check::Ergodic, Coefficients::Carlitz(a)) => lipschitz_gated(check_ergodic_carlitz(a))?,
        (Check::Ergodic, Coefficients::Z2Vdp(v)) => lipschitz_gated(check_ergodic_z2(v))?,
        (Check::Ergodic, Coefficients::Mahler(m)) => Levels::Overall(check_ergodic_mahler_z2(m)),
    };
    let (verdict, mut report) = levels.into_json();
    report["command"] = json!("verify");
    report["ring"] = json!(c.ring());
    report["basis"] = json!(c.basis());
    report["check"] = json!(match check {
        Check::Lipschitz => "lipschitz",
        Check::Mp => "mp",
        Check::Ergodic => "ergodic",
    });
    report["precision"] = json!(k);
    report["verdict"] = json!(verdict_name(verdict));
    Ok(Report::Json(report, verdict))
}

enum Levels {
    Overall(bool),
    PerLevel(LevelVerdicts),
    Noted(Box<Levels>, String),
}

impl Levels {
    fn with_note(self, note: Option<String>) -> Levels {
        match note {
            Some(n) => Levels::Noted(Box::new(self), n),
            None => self,
        }
    }

    fn into_json(self) -> (Verdict, Value) {
        match self {
            Levels::Overall(b) => (Verdict::from_bool(b), json!({})),
            Levels::PerLevel(v) => (v.overall(), json!({ "levels": levels_json(&v) })),
            Levels::Noted(inner, note) => {
                let (v, mut j) = inner.into_json();
                j["note"] = json!(note);
                (v, j)
            }
        }
    }
}

/// A criterion stated for 1-Lipschitz maps fails outright on anything else.
fn lipschitz_gated(r: ergodic_core::Result<LevelVerdicts>) -> Result<Levels> {
    match r {
        Ok(v) => Ok(Levels::PerLevel(v)),
        Err(Error::NotLipschitz) => {
            Ok(Levels::Overall(false).with_note(Some("not 1-Lipschitz".into())))
        }
        Err(e) => Err(e.into()),
    }
}

fn z2_table(c: &Coefficients) -> Result<Z2FunctionTable> {
    Ok(Z2FunctionTable::from_f2(c.to_table(c.precision())?))
}

fn exhaustive(path: &Path) -> Result<Report> {
    let doc = io::load_table(path)?;
    let t = &doc.table;
    let compatible = is_compatible(t);
    let bijective = is_bijective_mod(t);
    let transitive = is_transitive_mod(t);
    let all = [&compatible, &bijective, &transitive];
    let verdict = if all.iter().all(|v| v.holds()) {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    let report = json!({
        "command": "verify",
        "ring": doc.ring,
        "precision": t.precision(),
        "compatible": levels_json(&compatible),
        "bijective": levels_json(&bijective),
        "transitive": levels_json(&transitive),
        "verdict": verdict_name(verdict),
    });
    Ok(Report::Json(report, verdict))
}

fn coefficients_json(c: &Coefficients) -> Value {
    serde_json::from_str(&io::coefficients_to_json(c)).expect("serializer emits valid JSON")
}

fn expand(basis: ExpandBasis, path: &Path) -> Result<Report> {
    let doc = io::load_table(path)?;
    let c = match (doc.ring, basis) {
        (Ring::F2T, ExpandBasis::Vdp) => Coefficients::Vdp(to_vdp(&doc.table)),
        (Ring::F2T, ExpandBasis::Carlitz) => Coefficients::Carlitz(to_carlitz(&doc.table)?),
        (Ring::Z2, ExpandBasis::Vdp) => Coefficients::Z2Vdp(to_vdp_z2(&doc.z2())),
        (Ring::Z2, ExpandBasis::Carlitz) => bail!("the Carlitz basis is defined over F2[[T]] only"),
    };
    Ok(Report::Json(coefficients_json(&c), Verdict::Holds))
}

fn eval(path: &Path, x: u64, prec: u32) -> Result<Report> {
    let c = io::load_coefficients(path)?;
    let value = c.eval(x, prec)?;
    let report = json!({
        "command": "eval",
        "precision": prec,
        "x": format_hex(x),
        "value": format_hex(value),
    });
    Ok(Report::Json(report, Verdict::Holds))
}

fn convert(from: ExpandBasis, to: ExpandBasis, path: &Path) -> Result<Report> {
    let c = io::load_coefficients(path)?;
    let table = match (from, &c) {
        (ExpandBasis::Vdp, Coefficients::Vdp(v)) => v.to_table(),
        (ExpandBasis::Carlitz, Coefficients::Carlitz(a)) => a.to_table()?,
        _ => bail!(
            "{} holds {:?} coefficients over {:?}",
            path.display(),
            c.basis(),
            c.ring()
        ),
    };
    let out = match to {
        ExpandBasis::Vdp => Coefficients::Vdp(to_vdp(&table)),
        ExpandBasis::Carlitz => Coefficients::Carlitz(to_carlitz(&table)?),
    };
    Ok(Report::Json(coefficients_json(&out), Verdict::Holds))
}

fn cycle(n: u32, seed: Option<u64>, data: Option<&PathBuf>) -> Result<Report> {
    let d = match (seed, data) {
        (_, Some(path)) => {
            let d = io::load_cycle_data(path)?;
            if d.depth() != n {
                bail!("{} has depth {}, not {n}", path.display(), d.depth());
            }
            d
        }
        (Some(s), None) => random_data(s, n)?,
        (None, None) => bail!("one of --seed or --data is required"),
    };
    let g = gen_cycle(&d)?;
    let hexes = |v: &[u64]| v.iter().map(|&x| format_hex(x)).collect::<Vec<_>>();
    let report = json!({
        "command": "gen-cycle",
        "n": n,
        "precision": g.table.precision(),
        "sequence": hexes(&g.sequence),
        "table": hexes(g.table.entries()),
    });
    Ok(Report::Json(report, Verdict::Holds))
}

fn keystream(path: &Path, x0: u64, prec: u32, steps: usize, bit: Option<u32>) -> Result<Report> {
    let c = io::load_coefficients(path)?;
    let table = c.to_table(prec)?;
    if let Some(b) = bit {
        if b >= prec {
            bail!("--bit {b} is not below --prec {prec}");
        }
    }
    let x0 = Residue::new(x0, prec).with_context(|| format!("--x0 at precision {prec}"))?;
    let lines = orbit(&table, x0, steps)?
        .into_iter()
        .map(|r| match bit {
            Some(b) => ((r.bits() >> b) & 1).to_string(),
            None => format_hex(r.bits()),
        })
        .collect();
    Ok(Report::Lines(lines))
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Verify(args) => verify(args),
        Command::Expand { basis, table } => expand(*basis, table),
        Command::Eval { coeffs, x, prec } => eval(coeffs, *x, *prec),
        Command::Convert { from, to, coeffs } => convert(*from, *to, coeffs),
        Command::GenCycle { n, seed, data } => cycle(*n, *seed, data.as_ref()),
        Command::Keystream {
            coeffs,
            x0,
            prec,
            steps,
            bit,
        } => keystream(coeffs, *x0, *prec, *steps, *bit),
    }
}

/// Writes the report; a closed pipe just ends the output early.
fn emit(lines: impl IntoIterator<Item = String>) {
    let mut out = std::io::stdout().lock();
    for line in lines {
        if writeln!(out, "{line}").is_err() {
            return;
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let body = msg.split("Usage:").next().unwrap_or_default();
            let line = body.split_whitespace().collect::<Vec<_>>().join(" ");
            eprintln!("ergodic: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(Report::Json(value, verdict)) => {
            if !cli.quiet {
                emit([value.to_string()]);
            }
            if verdict == Verdict::Holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Report::Lines(lines)) => {
            if !cli.quiet {
                emit(lines);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("ergodic: {msg}");
            ExitCode::from(2)
        }
    }
}
