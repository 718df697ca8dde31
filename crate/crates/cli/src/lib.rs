//! Command-line front end for `ik-solitary`.
//!
//! [`run`] takes the argument list and two output streams and returns the
//! process exit code: 0 on success, 1 when a solver fails, 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use ik_solitary::io::{gnuplot_script, write_profile_csv, write_table_csv};
use ik_solitary::params::exact_constants;
use ik_solitary::{
    build_params, check_positivity, compare_kdv, crest_curvature, diagnostics_table,
    dimensionalize, extreme_profile, fundamental_checks, kdv_profile, q_positivity, solve_crest,
    solve_critical, solve_solitary, verify_kdv_solution, Error, ExponentSet, IntegratorConfig,
    TableRow, WaveProfile,
};

pub const OUT_DIR_ENV: &str = "IK_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "ik-solitary-output";

/// Crest table deltas used when `table` is run without `--deltas`.
pub const TABLE_DELTAS: [f64; 9] = [
    0.6, 0.62, 0.625, 0.626, 0.6263, 0.62633, 0.626334, 0.6263349, 0.62633493,
];
/// Profiles reproduced by `reproduce-paper`, in panel order.
pub const PANEL_DELTAS: [f64; 6] = [0.3, 0.45, 0.55, 0.6, 0.62, 0.62633493];
const NEAR_CREST_DELTAS: [f64; 5] = [0.6, 0.62, 0.625, 0.626, 0.62633493];
const OVERLAY_DELTAS: [f64; 5] = [0.45, 0.55, 0.6, 0.62, 0.62633493];

#[derive(Parser, Debug)]
#[command(
    name = "ik-solitary",
    version,
    about = "Solitary waves of the Isobe-Kakinuma model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Model constants for an exponent set.
    Params {
        #[arg(long, value_delimiter = ',', default_value = "2")]
        p: Vec<u32>,
    },
    /// Crest height, velocity, curvature and denominator.
    Crest {
        #[arg(long, value_parser = positive)]
        delta: f64,
    },
    /// Integrate a full solitary wave profile.
    Solve {
        #[arg(long, value_parser = positive)]
        delta: f64,
        #[command(flatten)]
        output: ProfileOutput,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Crest diagnostics for several deltas.
    Table {
        #[arg(long, value_delimiter = ',', value_parser = positive)]
        deltas: Vec<f64>,
    },
    /// Sup-norm distance to the KdV soliton.
    CompareKdv {
        #[arg(long, value_parser = positive)]
        delta: f64,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Critical delta and the crest of the wave of extreme form.
    Critical,
    /// Integrate the wave of extreme form.
    Extreme {
        #[command(flatten)]
        output: ProfileOutput,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Express a profile in physical units.
    Dimensional {
        #[arg(long, value_parser = positive)]
        delta: f64,
        #[arg(long, value_parser = positive)]
        depth: f64,
        #[arg(long, value_parser = positive, default_value = "9.81")]
        gravity: f64,
        /// CSV file for the dimensional profile.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form checks of the long-wave theory.
    Checks {
        #[arg(long, value_delimiter = ',', default_value = "2")]
        p: Vec<u32>,
    },
    /// Write all profile data, the crest table and plot scripts to a directory.
    ReproducePaper {
        /// Output directory; defaults to $IK_OUT_DIR, then ./ik-solitary-output.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ProfileOutput {
    /// CSV file; the profile goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Resample on a uniform grid of this spacing.
    #[arg(long, value_parser = positive)]
    dx: Option<f64>,
    /// Also write a gnuplot script plotting the CSV.
    #[arg(long, requires = "out")]
    gnuplot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Tolerances {
    #[arg(long, value_parser = positive)]
    rel_tol: Option<f64>,
    #[arg(long, value_parser = positive)]
    abs_tol: Option<f64>,
    #[arg(long, value_parser = positive)]
    x_max: Option<f64>,
}

impl Tolerances {
    fn config(&self) -> IntegratorConfig {
        let mut cfg = IntegratorConfig::default();
        if let Some(v) = self.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = self.x_max {
            cfg.x_max = v;
        }
        cfg
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

enum Failure {
    Usage(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::InvalidExponents(_) => Failure::Usage(e.to_string()),
            _ => Failure::Solver(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Solver(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

/// Format with at least twelve significant digits.
pub fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..7).contains(&mag) {
        format!("{:.*}", (11 - mag).max(0) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

fn kv<W: Write>(out: &mut W, key: &str, value: impl AsRef<str>) -> io::Result<()> {
    writeln!(out, "{key:<16} = {}", value.as_ref())
}

pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Solver(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn dispatch<W: Write>(cmd: Command, out: &mut W) -> CmdResult {
    match cmd {
        Command::Params { p } => params(p, out),
        Command::Crest { delta } => crest(delta, out),
        Command::Solve { delta, output, tol } => {
            let prof = solve_solitary(delta, &tol.config())?;
            emit_profile(
                prof,
                &output,
                &format!("solitary wave, delta = {delta}"),
                out,
            )
        }
        Command::Table { deltas } => {
            let deltas = if deltas.is_empty() {
                TABLE_DELTAS.to_vec()
            } else {
                deltas
            };
            table(&deltas, out)
        }
        Command::CompareKdv { delta, tol } => {
            let prof = solve_solitary(delta, &tol.config())?;
            kv(out, "delta", num(delta))?;
            kv(out, "eta0", num(prof.eta_max))?;
            kv(out, "eta0_kdv", num(4.0 / 3.0 * delta * delta))?;
            kv(out, "sup_error", num(compare_kdv(&prof)))?;
            Ok(())
        }
        Command::Critical => critical(out),
        Command::Extreme { output, tol } => {
            let cp = solve_critical()?;
            let prof = extreme_profile(&cp, &tol.config())?;
            emit_profile(prof, &output, "wave of extreme form", out)
        }
        Command::Dimensional {
            delta,
            depth,
            gravity,
            out: path,
        } => dimensional(delta, depth, gravity, path.as_deref(), out),
        Command::Checks { p } => checks(p, out),
        Command::ReproducePaper { out_dir } => {
            let dir = out_dir
                .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
            reproduce(&dir, out)
        }
    }
}

fn params<W: Write>(p: Vec<u32>, out: &mut W) -> CmdResult {
    let p = ExponentSet::new(p)?;
    let params = build_params(&p)?;
    let exact = exact_constants(&p)?;
    let pos = check_positivity(&params);
    let vec = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(", ");
    kv(out, "p", p.to_string())?;
    kv(
        out,
        "gamma",
        format!("{} ({})", num(params.gamma), exact.gamma),
    )?;
    kv(
        out,
        "gamma_vec",
        format!(
            "[{}] ([{}])",
            vec(&mut params.gamma_vec.iter().map(|&g| num(g))),
            vec(&mut exact.gamma_vec.iter().map(|g| g.to_string()))
        ),
    )?;
    kv(
        out,
        "kappa1",
        format!("{} ({})", num(params.kappa1), exact.kappa1),
    )?;
    kv(
        out,
        "kappa2",
        format!("{} ({})", num(params.kappa2), exact.kappa2),
    )?;
    kv(
        out,
        "kappa3",
        format!("{} ({})", num(params.kappa3), exact.kappa3),
    )?;
    kv(out, "min_eig_A1", num(pos.min_eig_a1))?;
    kv(out, "min_eig_A0_shift", num(pos.min_eig_a0_shifted))?;
    kv(out, "positive", pos.is_positive().to_string())?;
    Ok(())
}

fn crest<W: Write>(delta: f64, out: &mut W) -> CmdResult {
    let crest = solve_crest(delta)?;
    let (i1, i2) = crest.identity_residuals();
    kv(out, "delta", num(delta))?;
    kv(out, "c", num(crest.c))?;
    kv(out, "eta0", num(crest.eta0))?;
    kv(out, "u0", num(crest.u0))?;
    kv(out, "phi1_0", num(crest.phi1_0))?;
    kv(out, "d0", num(crest.denominator()))?;
    match crest_curvature(&crest) {
        Ok(k) => kv(out, "kappa0", num(k))?,
        Err(_) => kv(out, "kappa0", "undefined (d0 = 0)")?,
    }
    kv(out, "I1", num(i1))?;
    kv(out, "I2", num(i2))?;
    Ok(())
}

fn format_row(r: &TableRow) -> String {
    let kappa = r.minus_kappa0.map_or_else(|| "nan".to_string(), num);
    format!(
        "{:<12} {:<16} {:<20} {}",
        r.delta,
        num(r.eta0),
        kappa,
        num(r.d0)
    )
}

fn table<W: Write>(deltas: &[f64], out: &mut W) -> CmdResult {
    writeln!(out, "{:<12} {:<16} {:<20} d0", "delta", "eta0", "-kappa0")?;
    let mut failure = None;
    for (delta, row) in deltas.iter().zip(diagnostics_table(deltas)) {
        match row {
            Ok(r) => writeln!(out, "{}", format_row(&r))?,
            Err(e) => {
                writeln!(out, "{delta:<12} error: {e}")?;
                failure.get_or_insert(e);
            }
        }
    }
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn critical<W: Write>(out: &mut W) -> CmdResult {
    let cp = solve_critical()?;
    kv(out, "delta_c", num(cp.delta_c))?;
    kv(out, "eta_c0", num(cp.eta_c0))?;
    kv(out, "u_c0", num(cp.u_c0))?;
    kv(out, "c_c", num(cp.c_c))?;
    kv(out, "c_c+u_c0", num(cp.v_c0))?;
    kv(out, "slope", num(cp.slope_nondim))?;
    kv(out, "slope_dim", num(cp.slope_dim))?;
    kv(out, "theta_deg", num(cp.theta_deg))?;
    Ok(())
}

fn emit_profile<W: Write>(
    prof: WaveProfile,
    output: &ProfileOutput,
    title: &str,
    out: &mut W,
) -> CmdResult {
    let prof = match output.dx {
        Some(dx) => prof.resampled(dx)?,
        None => prof,
    };
    let kdv = kdv_profile(prof.delta, &prof.grid);
    let kdv = prof.kappa0.is_some().then_some(kdv.as_slice());
    match &output.out {
        None => write_profile_csv(out, &prof, kdv)?,
        Some(path) => {
            write_csv_file(path, &prof, kdv)?;
            let (i1, i2) = prof.max_identity_residuals();
            kv(out, "delta", num(prof.delta))?;
            kv(out, "c", num(prof.c))?;
            kv(out, "eta_max", num(prof.eta_max))?;
            match prof.kappa0 {
                Some(k) => kv(out, "kappa0", num(k))?,
                None => kv(out, "kappa0", "corner")?,
            }
            kv(out, "x_end", num(prof.half().x_end()))?;
            kv(out, "stop", format!("{:?}", prof.stop))?;
            kv(out, "points", prof.len().to_string())?;
            kv(out, "max_abs_I1", num(i1))?;
            kv(out, "max_abs_I2", num(i2))?;
            kv(out, "csv", path.display().to_string())?;
            if let Some(gp) = &output.gnuplot {
                let name = path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                fs::write(gp, gnuplot_script(&name, title, kdv.is_some()))?;
                kv(out, "gnuplot", gp.display().to_string())?;
            }
        }
    }
    Ok(())
}

fn write_csv_file(path: &Path, prof: &WaveProfile, kdv: Option<&[f64]>) -> io::Result<()> {
    let mut buf = Vec::new();
    write_profile_csv(&mut buf, prof, kdv)?;
    fs::write(path, buf)
}

fn dimensional<W: Write>(
    delta: f64,
    depth: f64,
    gravity: f64,
    path: Option<&Path>,
    out: &mut W,
) -> CmdResult {
    let prof = solve_solitary(delta, &IntegratorConfig::default())?;
    let dim = dimensionalize(&prof, depth, gravity)?;
    let max_slope = dim
        .slope
        .iter()
        .filter(|s| s.is_finite())
        .fold(0.0f64, |m, s| m.max(s.abs()));
    kv(out, "delta", num(delta))?;
    kv(out, "depth", num(depth))?;
    kv(out, "gravity", num(gravity))?;
    kv(out, "length_scale", num(dim.wavelength))?;
    kv(out, "amplitude", num(dim.amplitude))?;
    kv(out, "speed", num(dim.c))?;
    kv(out, "long_wave_speed", num(dim.long_wave_speed()))?;
    kv(out, "crest_velocity", num(dim.u[prof.len() / 2]))?;
    kv(out, "max_slope", num(max_slope))?;
    if let Some(path) = path {
        let mut buf = Vec::new();
        writeln!(buf, "x,eta,u,slope")?;
        for i in 0..dim.x.len() {
            writeln!(
                buf,
                "{:e},{:e},{:e},{:e}",
                dim.x[i], dim.eta[i], dim.u[i], dim.slope[i]
            )?;
        }
        fs::write(path, buf)?;
        kv(out, "csv", path.display().to_string())?;
    }
    Ok(())
}

fn checks<W: Write>(p: Vec<u32>, out: &mut W) -> CmdResult {
    let p = ExponentSet::new(p)?;
    let params = build_params(&p)?;
    let grid: Vec<f64> = (0..=2000).map(|k| -10.0 + 0.01 * k as f64).collect();
    let mut all = true;
    let mut line = |out: &mut W, name: &str, ok: bool, detail: String| -> io::Result<()> {
        all &= ok;
        writeln!(
            out,
            "{} {name:<22} {detail}",
            if ok { "PASS" } else { "FAIL" }
        )
    };

    let kdv = verify_kdv_solution(params.gamma, &grid);
    line(
        out,
        "kdv-profile",
        kdv <= 1e-12,
        format!("max residual {}", num(kdv)),
    )?;

    let f = fundamental_checks(&grid);
    line(
        out,
        "fundamental-ode",
        f.max_residual_u1 <= 1e-10 && f.max_residual_u2 <= 1e-10,
        format!(
            "max residual u1 {} u2 {}",
            num(f.max_residual_u1),
            num(f.max_residual_u2)
        ),
    )?;
    line(
        out,
        "wronskian",
        f.max_wronskian_error <= 1e-12,
        format!("max |W - 1| {}", num(f.max_wronskian_error)),
    )?;
    line(
        out,
        "decay-rates",
        (f.decay_exponent + 2.0).abs() <= 0.04 && (f.growth_exponent - 2.0).abs() <= 0.04,
        format!("u1 {} u2 {}", num(f.decay_exponent), num(f.growth_exponent)),
    )?;

    match q_positivity(&p, 20.0, 400) {
        Ok(min) => line(
            out,
            "symbol-positivity",
            true,
            format!("min q {}", num(min)),
        )?,
        Err(e) => line(out, "symbol-positivity", false, e.to_string())?,
    }
    let pos = check_positivity(&params);
    line(
        out,
        "matrix-positivity",
        pos.is_positive(),
        format!(
            "min eig A1 {} A0 shifted {}",
            num(pos.min_eig_a1),
            num(pos.min_eig_a0_shifted)
        ),
    )?;

    if all {
        Ok(())
    } else {
        Err(Failure::Solver("some checks failed".into()))
    }
}

struct FileEntry {
    name: String,
    figure: String,
}

fn profile_name(delta: f64) -> String {
    format!("profile_delta_{delta}.csv")
}

fn reproduce<W: Write>(dir: &Path, out: &mut W) -> CmdResult {
    fs::create_dir_all(dir)?;
    let cfg = IntegratorConfig::default();

    let mut deltas: Vec<f64> = PANEL_DELTAS
        .iter()
        .chain(&NEAR_CREST_DELTAS)
        .copied()
        .collect();
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();
    let profiles: Vec<Result<WaveProfile, Error>> = deltas
        .par_iter()
        .map(|&d| solve_solitary(d, &cfg))
        .collect();

    let mut manifest: Vec<FileEntry> = Vec::new();
    for (&delta, prof) in deltas.iter().zip(profiles) {
        let prof = prof?;
        let kdv = kdv_profile(delta, &prof.grid);
        let name = profile_name(delta);
        write_csv_file(&dir.join(&name), &prof, Some(&kdv))?;
        let mut figures = Vec::new();
        if let Some(k) = PANEL_DELTAS.iter().position(|&d| d == delta) {
            figures.push(format!(
                "figure 2({}) surface profile with KdV soliton",
                (b'a' + k as u8) as char
            ));
        }
        if OVERLAY_DELTAS.contains(&delta) {
            figures.push("figure 3 overlay".to_string());
        }
        if NEAR_CREST_DELTAS.contains(&delta) {
            figures.push("figure 4 near-crest overlay".to_string());
        }
        manifest.push(FileEntry {
            name,
            figure: figures.join("; "),
        });
    }

    let cp = solve_critical()?;
    let ext = extreme_profile(&cp, &cfg)?;
    write_csv_file(&dir.join("extreme_profile.csv"), &ext, None)?;
    manifest.push(FileEntry {
        name: "extreme_profile.csv".into(),
        figure: "figure 5 surface (eta) and figure 6 horizontal velocity (u), wave of extreme form"
            .into(),
    });

    let rows: Result<Vec<TableRow>, Error> = diagnostics_table(&TABLE_DELTAS).into_iter().collect();
    let mut buf = Vec::new();
    write_table_csv(&mut buf, &rows?)?;
    fs::write(dir.join("crest_table.csv"), buf)?;
    manifest.push(FileEntry {
        name: "crest_table.csv".into(),
        figure: "table of crest height, curvature and denominator".into(),
    });

    let mut buf = Vec::new();
    critical(&mut buf)?;
    fs::write(dir.join("critical.txt"), buf)?;
    manifest.push(FileEntry {
        name: "critical.txt".into(),
        figure: "critical values, crest slope and included angle".into(),
    });

    for (name, script, figure) in plot_scripts() {
        fs::write(dir.join(&name), script)?;
        manifest.push(FileEntry { name, figure });
    }

    let mut buf = Vec::new();
    writeln!(buf, "file,figure")?;
    for e in &manifest {
        writeln!(buf, "{},\"{}\"", e.name, e.figure)?;
    }
    fs::write(dir.join("manifest.csv"), buf)?;

    kv(out, "out_dir", dir.display().to_string())?;
    kv(out, "files", (manifest.len() + 1).to_string())?;
    for e in &manifest {
        writeln!(out, "  {}", e.name)?;
    }
    writeln!(out, "  manifest.csv")?;
    Ok(())
}

fn plot_scripts() -> Vec<(String, String, String)> {
    let header = |png: &str| {
        format!(
            "set datafile separator ','\nset terminal pngcairo size 1200,800\nset output '{png}'\n"
        )
    };
    let mut scripts = Vec::new();

    let mut s = header("figure2.png");
    s.push_str("set multiplot layout 2,3\nset xrange [-8:8]\n");
    for (k, d) in PANEL_DELTAS.iter().enumerate() {
        s.push_str(&format!(
            "set title '({}) delta = {d}'\nplot '{f}' using 1:2 skip 1 with lines title 'IK', '{f}' using 1:10 skip 1 with lines dashtype 2 title 'KdV'\n",
            (b'a' + k as u8) as char,
            f = profile_name(*d)
        ));
    }
    s.push_str("unset multiplot\n");
    scripts.push((
        "figure2.gp".to_string(),
        s,
        "plot script for figure 2".to_string(),
    ));

    for (file, png, deltas, range, label) in [
        (
            "figure3.gp",
            "figure3.png",
            &OVERLAY_DELTAS[..],
            "[-6:6]",
            "figure 3",
        ),
        (
            "figure4.gp",
            "figure4.png",
            &NEAR_CREST_DELTAS[..],
            "[-0.5:0.5]",
            "figure 4",
        ),
    ] {
        let mut s = header(png);
        s.push_str(&format!("set xrange {range}\nplot "));
        let parts: Vec<String> = deltas
            .iter()
            .map(|d| {
                format!(
                    "'{}' using 1:2 skip 1 with lines title 'delta = {d}'",
                    profile_name(*d)
                )
            })
            .collect();
        s.push_str(&parts.join(", \\\n     "));
        s.push('\n');
        scripts.push((file.to_string(), s, format!("plot script for {label}")));
    }

    for (file, png, col, label, fig) in [
        ("figure5.gp", "figure5.png", 2, "eta", "figure 5"),
        ("figure6.gp", "figure6.png", 3, "u", "figure 6"),
    ] {
        let mut s = header(png);
        s.push_str(&format!(
            "set xrange [-6:6]\nplot 'extreme_profile.csv' using 1:{col} skip 1 with lines title '{label}'\n"
        ));
        scripts.push((file.to_string(), s, format!("plot script for {fig}")));
    }
    scripts
}
