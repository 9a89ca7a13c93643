//! Plain-text persistence of steady states, lossless for f64 round-trips.
//!
//! ```text
//! # collective-spin steady state
//! n 4
//! omega 5.00000000000000000e-1
//! dim 5
//! <re> <im>          (dim*dim lines, row-major)
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::Complex;

use dicke::spin::{steady_state, DickeDensityMatrix, ModelParams};
use dicke::CMatrix;

use crate::CliError;

pub fn write_state(
    rho: &DickeDensityMatrix,
    omega: f64,
    mut out: impl Write,
) -> std::io::Result<()> {
    let d = rho.dim();
    writeln!(out, "# collective-spin steady state")?;
    writeln!(out, "n {}", rho.n_particles())?;
    writeln!(out, "omega {omega:.17e}")?;
    writeln!(out, "dim {d}")?;
    let m = rho.matrix();
    for r in 0..d {
        for c in 0..d {
            writeln!(out, "{:.17e} {:.17e}", m[(r, c)].re, m[(r, c)].im)?;
        }
    }
    Ok(())
}

/// Computes the steady state for `(n, omega)` and writes it to `path`.
pub fn dump_state(n: usize, omega: f64, path: &Path) -> Result<(), CliError> {
    let params = ModelParams::new(n, omega)?;
    let rho = steady_state(&params)?;
    let file = fs::File::create(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    let mut buf = std::io::BufWriter::new(file);
    write_state(&rho, omega, &mut buf).map_err(|e| CliError::io(path.display().to_string(), e))?;
    Ok(())
}

pub fn read_state(path: &Path) -> Result<(ModelParams, DickeDensityMatrix), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    parse_state(&text).map_err(|reason| CliError::Parse {
        path: path.display().to_string(),
        reason,
    })
}

pub fn parse_state(text: &str) -> Result<(ModelParams, DickeDensityMatrix), String> {
    let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
    let mut field = |name: &str| -> Result<String, String> {
        let line = lines
            .next()
            .ok_or_else(|| format!("missing '{name}' line"))?;
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| format!("malformed '{name}' line"))?;
        if key != name {
            return Err(format!("expected '{name}', found '{key}'"));
        }
        Ok(value.trim().to_string())
    };
    let n: usize = field("n")?.parse().map_err(|e| format!("n: {e}"))?;
    let omega: f64 = field("omega")?.parse().map_err(|e| format!("omega: {e}"))?;
    let dim: usize = field("dim")?.parse().map_err(|e| format!("dim: {e}"))?;
    if dim != n + 1 {
        return Err(format!("dim {dim} does not match n {n}"));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            let line = lines
                .next()
                .ok_or_else(|| format!("missing entry ({r}, {c})"))?;
            let mut parts = line.split_whitespace();
            let re: f64 = parts
                .next()
                .ok_or("missing real part")?
                .parse()
                .map_err(|e| format!("entry ({r}, {c}): {e}"))?;
            let im: f64 = parts
                .next()
                .ok_or("missing imaginary part")?
                .parse()
                .map_err(|e| format!("entry ({r}, {c}): {e}"))?;
            m[(r, c)] = Complex::new(re, im);
        }
    }
    let params = ModelParams::new(n, omega).map_err(|e| e.to_string())?;
    let rho = DickeDensityMatrix::new(n, m).map_err(|e| e.to_string())?;
    Ok((params, rho))
}
