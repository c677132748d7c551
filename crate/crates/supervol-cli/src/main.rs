//! Command-line front end: volume computations, kernel moments, constrained
//! partition functions, verification suites, and exports. Every command is
//! deterministic, so downstream scripts can diff output byte for byte.
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use supervol::error::Error;
use supervol::kappa::kappa_polynomials;
use supervol::kernels::{closed_form_moment, moment_to_json};
use supervol::quad::{quadrature_oracle, MomentKind};
use supervol::tau::{
    commutator_check, omk_bridge_check, solve_constraints, translate_partition,
    virconj_residual, Family,
};
use supervol::tseries::{TCaps, TKey};
use supervol::verify::run_suite;
use supervol::volumes::{
    closed_form_v2, disk_direct, disk_laplace, laplace_to_volume, solve_volumes, VolumeId,
};
use supervol::VolPoly;

#[derive(Parser)]
#[command(
    name = "supervol",
    version,
    about = "Exact super Weil-Petersson volumes, kernel moments, and Virasoro tau functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one volume polynomial, scaled as the s^m/m! series coefficient
    Volume(VolumeArgs),
    /// Print the disk series through a given s-order
    Disk(DiskArgs),
    /// Print a closed-form kernel moment, optionally checked against quadrature
    Moments(MomentsArgs),
    /// Solve or cross-check the constrained partition functions
    #[command(subcommand)]
    Tau(TauCmd),
    /// Run verification suites and report pass/fail/flagged checks
    Verify(VerifyArgs),
    /// Export reference tables and polynomials
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Latex,
    Json,
}

#[derive(Args)]
struct VolumeArgs {
    /// Genus of the surface
    #[arg(long)]
    genus: u32,
    /// Number of Neveu-Schwarz boundary components
    #[arg(long)]
    ns: u32,
    /// Even number of Ramond points (the s-order)
    #[arg(long)]
    s_order: u32,
    /// Allow s-orders above 2 away from the disk (conjectural values)
    #[arg(long)]
    extended: bool,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DiskRoute {
    /// Moment recursion order by order in s
    Direct,
    /// Laplace-domain functional recursion, inverted back to polynomials
    Laplace,
}

#[derive(Args)]
struct DiskArgs {
    /// Largest s-order to print (even)
    #[arg(long, default_value_t = 10)]
    s_max: u32,
    #[arg(long, value_enum, default_value_t = DiskRoute::Direct)]
    route: DiskRoute,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args)]
struct MomentsArgs {
    /// Kernel name: D (two indices) or R (one index)
    #[arg(long)]
    kernel: String,
    /// First moment index
    #[arg(long)]
    i: u32,
    /// Second moment index (kernel D only)
    #[arg(long)]
    j: Option<u32>,
    /// Compare the closed form against adaptive quadrature
    #[arg(long)]
    check: bool,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Subcommand)]
enum TauCmd {
    /// Solve a constraint family inside a truncation box
    Solve(TauSolveArgs),
    /// Cross-check commutators, constraint residuals, and the bridge identity
    Check(TauCheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Bare series, determined through s^2
    Zbar,
    /// Kappa-insertion series, all s-orders
    Zk,
    /// Translated series with pi^2-bearing coefficients
    Z,
}

#[derive(Args)]
struct TauSolveArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Largest t-variable index in the box
    #[arg(long, default_value_t = 8)]
    t_max: u8,
    /// Cap on the monomial weight sum(2k+1)
    #[arg(long, default_value_t = 13)]
    weight_max: u32,
    /// Largest s-order (default 2, or 10 for family zk)
    #[arg(long)]
    s_max: Option<u32>,
    /// Largest genus; the Euler grading runs over h = g - 1
    #[arg(long, default_value_t = 3)]
    genus_max: u32,
    /// Emit JSON instead of one line per coefficient
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TauCheckArgs {
    /// Check the commutator relation on the truncated basis
    #[arg(long)]
    commutators: bool,
    /// Check that the conjugated constraint residuals vanish
    #[arg(long)]
    residuals: bool,
    /// Check the bridge between the bare and kappa-insertion series
    #[arg(long)]
    bridge: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or "all"
    #[arg(long, default_value = "all")]
    suite: String,
    /// Emit the machine-readable report instead of the human summary
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum ExportCmd {
    /// CSV of the two-Ramond-point sphere volumes across boundary counts
    V2Csv(OutArg),
    /// LaTeX displays of the kappa insertion polynomials K_1..K_4
    KappaLatex(OutArg),
    /// Canonical JSON of one volume polynomial (round-trips through the importer)
    VolumeJson(VolumeJsonArgs),
}

#[derive(Args)]
struct OutArg {
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct VolumeJsonArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    ns: u32,
    #[arg(long)]
    s_order: u32,
    /// Allow s-orders above 2 away from the disk (conjectural values)
    #[arg(long)]
    extended: bool,
    #[command(flatten)]
    out: OutArg,
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(usage_exit(&e));
        }
    }
}

/// Usage problems exit 2; everything else surfaced as an error exits 1.
fn usage_exit(e: &Error) -> i32 {
    match e {
        Error::InvalidRequest(_) | Error::Parse(_) | Error::DimensionMismatch { .. } => 2,
        _ => 1,
    }
}

fn run(cmd: Command) -> Result<i32, Error> {
    match cmd {
        Command::Volume(a) => run_volume(a),
        Command::Disk(a) => run_disk(a),
        Command::Moments(a) => run_moments(a),
        Command::Tau(TauCmd::Solve(a)) => run_tau_solve(a),
        Command::Tau(TauCmd::Check(a)) => run_tau_check(a),
        Command::Verify(a) => run_verify(a),
        Command::Export(c) => run_export(c),
    }
}

/// The table value for one id: the disk route for `(0, 1)` (guaranteed at
/// every order), the general recursion otherwise (orders above 2 need the
/// extended flag).
fn compute_volume(id: VolumeId, extended: bool) -> Result<VolPoly, Error> {
    if id.g == 0 && id.n == 1 {
        let series = disk_direct(id.m)?;
        return series
            .get(id.m)
            .cloned()
            .ok_or_else(|| Error::InvalidRequest(format!("no disk order {}", id.m)));
    }
    if id.m > 2 && !extended {
        return Err(Error::InvalidRequest(format!(
            "{id} is beyond the guaranteed s-orders: pass --extended"
        )));
    }
    let out = solve_volumes(id.g, id.n, id.m, extended)?;
    out.table.require(&id)
}

fn print_poly(poly: &VolPoly, format: Format) {
    match format {
        Format::Plain => println!("{}", poly.to_plain()),
        Format::Latex => println!("{}", poly.to_latex()),
        Format::Json => println!(
            "{}",
            serde_json::to_string(&poly.to_json()).expect("serializing a polynomial")
        ),
    }
}

fn run_volume(a: VolumeArgs) -> Result<i32, Error> {
    let id = VolumeId::new(a.genus, a.ns, a.s_order)?;
    if !id.is_stable() {
        match a.format {
            Format::Json => println!(
                "{}",
                serde_json::json!({
                    "g": id.g, "n": id.n, "m": id.m,
                    "stable": false,
                    "poly": serde_json::to_value(VolPoly::zero(id.n as usize).to_json())
                        .expect("serializing zero"),
                })
            ),
            _ => println!("0 (unstable)"),
        }
        return Ok(0);
    }
    let poly = compute_volume(id, a.extended)?;
    if a.format == Format::Json {
        println!(
            "{}",
            serde_json::json!({
                "g": id.g, "n": id.n, "m": id.m,
                "stable": true,
                "poly": serde_json::to_value(poly.to_json()).expect("serializing a polynomial"),
            })
        );
    } else {
        print_poly(&poly, a.format);
    }
    Ok(0)
}

fn run_disk(a: DiskArgs) -> Result<i32, Error> {
    let series = match a.route {
        DiskRoute::Direct => disk_direct(a.s_max)?,
        DiskRoute::Laplace => laplace_to_volume(&disk_laplace(a.s_max)?)?,
    };
    if a.format == Format::Json {
        let orders: Vec<_> = series
            .orders()
            .map(|(m, poly)| {
                serde_json::json!({
                    "m": m,
                    "poly": serde_json::to_value(poly.to_json()).expect("serializing an order"),
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::json!({ "s_max": a.s_max, "orders": orders })
        );
        return Ok(0);
    }
    for (m, poly) in series.orders() {
        let rendered = match a.format {
            Format::Latex => poly.to_latex(),
            _ => poly.to_plain(),
        };
        println!("s^{m}/{m}!: {rendered}");
    }
    Ok(0)
}

fn run_moments(a: MomentsArgs) -> Result<i32, Error> {
    let kernel = a.kernel.to_uppercase();
    let moment = closed_form_moment(&kernel, a.i, a.j)?;
    match a.format {
        Format::Plain => println!("L1 * ({})", moment.quotient().to_plain()),
        Format::Latex => println!("L_1({})", moment.quotient().to_latex()),
        Format::Json => println!("{}", moment_to_json(&moment)),
    }
    if !a.check {
        return Ok(0);
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let mut worst = 0.0f64;
    match kernel.as_str() {
        "D" => {
            let j = a.j.expect("checked by closed_form_moment");
            for l in [0.5, 1.1, 1.8, 2.6, 3.4] {
                let numeric = quadrature_oracle(MomentKind::DDouble { i: a.i, j, l })?;
                let exact = moment.eval_f64(&[l], pi2);
                worst = worst.max(rel_err(numeric, exact));
            }
        }
        _ => {
            for (l1, lj) in [(0.5, 0.9), (1.0, 1.0), (2.0, 1.0), (1.0, 3.0), (2.5, 1.5)] {
                let numeric = quadrature_oracle(MomentKind::RSingle { k: a.i, l1, lj })?;
                let exact = moment.eval_f64(&[l1, lj], pi2);
                worst = worst.max(rel_err(numeric, exact));
            }
        }
    }
    let ok = worst < 1e-8;
    println!(
        "quadrature check: {} (max rel err {worst:.2e})",
        if ok { "pass" } else { "FAIL" }
    );
    Ok(if ok { 0 } else { 1 })
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-30)
}

fn tkey_line(key: &TKey) -> String {
    format!("h={} s={} {}", key.h, key.s, key.mon)
}

fn tkey_json(key: &TKey) -> serde_json::Value {
    serde_json::json!({
        "h": key.h,
        "s": key.s,
        "t": key.mon.indices(),
    })
}

fn run_tau_solve(a: TauSolveArgs) -> Result<i32, Error> {
    let family = match a.family {
        FamilyArg::Zbar | FamilyArg::Z => Family::ZBar,
        FamilyArg::Zk => Family::ZK,
    };
    let s_max = a.s_max.unwrap_or(match a.family {
        FamilyArg::Zk => 10,
        _ => 2,
    });
    if a.genus_max == 0 {
        return Err(Error::InvalidRequest(
            "genus cap must cover at least the torus term: pass --genus-max >= 1".into(),
        ));
    }
    let caps = TCaps {
        t_max: a.t_max,
        weight_max: a.weight_max,
        s_max,
        h_min: -1,
        h_max: a.genus_max as i32 - 1,
    };
    let solved = solve_constraints(family, caps)?;
    let name = match a.family {
        FamilyArg::Zbar => "zbar",
        FamilyArg::Zk => "zk",
        FamilyArg::Z => "z",
    };
    if a.family == FamilyArg::Z {
        let translated = translate_partition(&solved.series);
        if a.json {
            let coeffs: Vec<_> = translated
                .iter()
                .map(|(k, c)| {
                    let mut v = tkey_json(k);
                    v["c"] = serde_json::Value::String(c.to_string());
                    v
                })
                .collect();
            let flagged: Vec<_> = solved.flagged.iter().map(tkey_json).collect();
            println!(
                "{}",
                serde_json::json!({ "family": name, "coefficients": coeffs, "flagged": flagged })
            );
        } else {
            for (k, c) in translated.iter() {
                println!("{}: {c}", tkey_line(k));
            }
            for k in &solved.flagged {
                println!("flagged free constant set to 0: {}", tkey_line(k));
            }
        }
        return Ok(0);
    }
    if a.json {
        let coeffs: Vec<_> = solved
            .series
            .iter()
            .map(|(k, c)| {
                let mut v = tkey_json(k);
                v["c"] = serde_json::Value::String(c.to_string());
                v
            })
            .collect();
        let flagged: Vec<_> = solved.flagged.iter().map(tkey_json).collect();
        println!(
            "{}",
            serde_json::json!({ "family": name, "coefficients": coeffs, "flagged": flagged })
        );
    } else {
        for (k, c) in solved.series.iter() {
            println!("{}: {c}", tkey_line(k));
        }
        for k in &solved.flagged {
            println!("flagged free constant set to 0: {}", tkey_line(k));
        }
    }
    Ok(0)
}

fn run_tau_check(a: TauCheckArgs) -> Result<i32, Error> {
    let all = !(a.commutators || a.residuals || a.bridge);
    let mut failed = false;
    let mut report = |name: &str, ok: bool, detail: String| {
        println!("{name}: {} ({detail})", if ok { "pass" } else { "FAIL" });
        failed |= !ok;
    };

    if all || a.commutators {
        let mut pairs = 0;
        let mut ok = true;
        for n in -1..=4i32 {
            for m in (n + 1)..=4 {
                pairs += 1;
                ok &= commutator_check(m, n, 3, 7);
            }
        }
        report(
            "commutators",
            ok,
            format!("{pairs} pairs with -1 <= n < m <= 4 on the t<=3, weight<=7 basis"),
        );
    }

    if all || a.residuals || a.bridge {
        let caps = TCaps {
            t_max: 3,
            weight_max: 9,
            s_max: 2,
            h_min: -1,
            h_max: 2,
        };
        let zbar = solve_constraints(Family::ZBar, caps)?;

        if all || a.residuals {
            let mut ok = true;
            for m in [0u32, 1, 3] {
                ok &= virconj_residual(&zbar.series, m)?.is_zero();
            }
            report(
                "constraint residuals",
                ok,
                "m in {0, 1, 3} applied to the solved bare series".into(),
            );
        }

        if all || a.bridge {
            let zk = solve_constraints(Family::ZK, caps)?;
            let bridge = omk_bridge_check(&zbar.series, &zk.series)?;
            report(
                "bridge",
                bridge.ok(),
                format!(
                    "{} log-form and {} partition-form coefficients",
                    bridge.coefficients_checked, bridge.zform_checked
                ),
            );
        }
    }

    Ok(if failed { 1 } else { 0 })
}

fn run_verify(a: VerifyArgs) -> Result<i32, Error> {
    let report = run_suite(&a.suite)?;
    if a.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render());
    }
    Ok(report.exit_status())
}

fn write_out(out: &OutArg, content: &str) -> Result<(), Error> {
    match &out.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Parse(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run_export(cmd: ExportCmd) -> Result<i32, Error> {
    match cmd {
        ExportCmd::V2Csv(out) => {
            let mut csv = String::from("n,volume\n");
            for n in 1..=8u32 {
                let poly = closed_form_v2(n);
                let c = poly.coeff(&vec![0; n as usize]);
                csv.push_str(&format!("{n},{c}\n"));
            }
            write_out(&out, &csv)?;
        }
        ExportCmd::KappaLatex(out) => {
            let ks = kappa_polynomials(4);
            let mut text = String::new();
            for (i, k) in ks.iter().enumerate() {
                text.push_str(&format!("K_{} = {}\n", i + 1, k.to_latex()));
            }
            write_out(&out, &text)?;
        }
        ExportCmd::VolumeJson(a) => {
            let id = VolumeId::new(a.genus, a.ns, a.s_order)?;
            let poly = if id.is_stable() {
                compute_volume(id, a.extended)?
            } else {
                VolPoly::zero(id.n as usize)
            };
            let json = serde_json::to_string(&poly.to_json())
                .expect("serializing a polynomial");
            write_out(&a.out, &format!("{json}\n"))?;
        }
    }
    Ok(0)
}
