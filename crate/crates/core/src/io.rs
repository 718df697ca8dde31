//! CSV and gnuplot output.
//!
//! Numbers are written with Rust's shortest round-trip scientific formatting,
//! so parsing a file back gives the exact doubles that were computed.

use std::io::{self, Write};

use crate::profile::{TableRow, WaveProfile};

pub const PROFILE_COLUMNS: [&str; 9] = [
    "x",
    "eta",
    "u",
    "phi1",
    "phi0_prime",
    "phi1_prime",
    "d",
    "I1",
    "I2",
];

/// Write a profile as CSV. When `kdv` is given it becomes a trailing
/// `eta_kdv` column and must have one entry per grid point.
pub fn write_profile_csv<W: Write>(
    out: &mut W,
    profile: &WaveProfile,
    kdv: Option<&[f64]>,
) -> io::Result<()> {
    if let Some(k) = kdv {
        if k.len() != profile.len() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                format!(
                    "eta_kdv has {} entries, profile has {}",
                    k.len(),
                    profile.len()
                ),
            ));
        }
    }
    let mut header = PROFILE_COLUMNS.join(",");
    if kdv.is_some() {
        header.push_str(",eta_kdv");
    }
    writeln!(out, "{header}")?;
    for i in 0..profile.len() {
        let s = &profile.states[i];
        write!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            profile.grid[i],
            s.eta,
            s.u,
            s.phi1,
            profile.phi0_prime[i],
            profile.phi1_prime[i],
            profile.d_values[i],
            profile.i1[i],
            profile.i2[i],
        )?;
        if let Some(k) = kdv {
            write!(out, ",{:e}", k[i])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_table_csv<W: Write>(out: &mut W, rows: &[TableRow]) -> io::Result<()> {
    writeln!(out, "delta,eta0,minus_kappa0,d0")?;
    for r in rows {
        let kappa = r
            .minus_kappa0
            .map_or_else(|| "nan".to_string(), |k| format!("{k:e}"));
        writeln!(out, "{:e},{:e},{},{:e}", r.delta, r.eta0, kappa, r.d0)?;
    }
    Ok(())
}

/// A gnuplot script plotting `eta` (and `eta_kdv` if present) from a CSV
/// written by [`write_profile_csv`]. The script is only emitted, never run.
pub fn gnuplot_script(csv_file: &str, title: &str, with_kdv: bool) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set title '{title}'\n"));
    s.push_str("set xlabel 'x'\nset ylabel 'eta'\nset key top right\n");
    s.push_str(&format!(
        "plot '{csv_file}' using 1:2 skip 1 with lines title 'eta'"
    ));
    if with_kdv {
        s.push_str(&format!(
            ", \\\n     '{csv_file}' using 1:10 skip 1 with lines dashtype 2 title 'KdV'"
        ));
    }
    s.push('\n');
    s
}
