//! CSV tables and atomic file output.
//!
//! Floats are written in Rust's shortest round-trip exponent form, so equal
//! results always produce equal bytes. Failed rows keep their frequencies,
//! leave the numeric cells empty and carry the error code in `status`.

use std::io::Write;
use std::path::Path;

use sers_core::Vec3C;

/// Schema version of the spectrum header below; bump on any column change.
pub const SPECTRUM_SCHEMA_VERSION: u32 = 1;
pub const SPECTRUM_HEADER: &str = "omega_k,omega_kp,i_raman,i_sers,enhancement,g_norm,gp_norm,iterations,status";
pub const SELF_ENERGY_HEADER: &str = "omega,orbital,shift,width,status";
pub const FIELD_HEADER: &str =
    "omega,field_x_re,field_x_im,field_y_re,field_y_im,field_z_re,field_z_im,dipole_norm,status";

pub type Status = Result<(), &'static str>;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub omega_k: f64,
    pub omega_kp: f64,
    pub i_raman: f64,
    pub i_sers: f64,
    /// i_sers / i_raman, or 0 when i_raman is 0.
    pub enhancement: f64,
    pub g_norm: f64,
    pub gp_norm: f64,
    pub iterations: usize,
    pub status: Status,
}

impl SpectrumRow {
    pub fn failed(omega_k: f64, omega_kp: f64, code: &'static str) -> Self {
        Self {
            omega_k,
            omega_kp,
            i_raman: f64::NAN,
            i_sers: f64::NAN,
            enhancement: f64::NAN,
            g_norm: f64::NAN,
            gp_norm: f64::NAN,
            iterations: 0,
            status: Err(code),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfEnergyRow {
    pub omega: f64,
    pub orbital: usize,
    /// Re Σ_pp(ω).
    pub shift: f64,
    /// −2 Im Σ_pp(ω).
    pub width: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldRow {
    pub omega: f64,
    /// Total field at the molecule position.
    pub field: Vec3C,
    /// |Σ_j p_j|.
    pub dipole_norm: f64,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Spectrum(Vec<SpectrumRow>),
    SelfEnergy(Vec<SelfEnergyRow>),
    Field(Vec<FieldRow>),
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn status(s: &Status) -> &'static str {
    match s {
        Ok(()) => "ok",
        Err(code) => code,
    }
}

fn line(ok: bool, head: &[String], body: Vec<String>, s: &Status) -> String {
    let mut cells = head.to_vec();
    if ok {
        cells.extend(body);
    } else {
        cells.extend(body.iter().map(|_| String::new()));
    }
    cells.push(status(s).to_string());
    cells.join(",")
}

impl Output {
    pub fn header(&self) -> &'static str {
        match self {
            Output::Spectrum(_) => SPECTRUM_HEADER,
            Output::SelfEnergy(_) => SELF_ENERGY_HEADER,
            Output::Field(_) => FIELD_HEADER,
        }
    }

    fn statuses(&self) -> Vec<&Status> {
        match self {
            Output::Spectrum(r) => r.iter().map(|x| &x.status).collect(),
            Output::SelfEnergy(r) => r.iter().map(|x| &x.status).collect(),
            Output::Field(r) => r.iter().map(|x| &x.status).collect(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.statuses().len()
    }

    pub fn n_ok(&self) -> usize {
        self.statuses().into_iter().filter(|s| s.is_ok()).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(self.header());
        out.push('\n');
        let lines: Vec<String> = match self {
            Output::Spectrum(rows) => rows
                .iter()
                .map(|r| {
                    line(
                        r.status.is_ok(),
                        &[num(r.omega_k), num(r.omega_kp)],
                        vec![
                            num(r.i_raman),
                            num(r.i_sers),
                            num(r.enhancement),
                            num(r.g_norm),
                            num(r.gp_norm),
                            r.iterations.to_string(),
                        ],
                        &r.status,
                    )
                })
                .collect(),
            Output::SelfEnergy(rows) => rows
                .iter()
                .map(|r| {
                    line(
                        r.status.is_ok(),
                        &[num(r.omega), r.orbital.to_string()],
                        vec![num(r.shift), num(r.width)],
                        &r.status,
                    )
                })
                .collect(),
            Output::Field(rows) => rows
                .iter()
                .map(|r| {
                    let mut body: Vec<String> = r.field.iter().flat_map(|z| [num(z.re), num(z.im)]).collect();
                    body.push(num(r.dipole_norm));
                    line(r.status.is_ok(), &[num(r.omega)], body, &r.status)
                })
                .collect(),
        };
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }
}

/// Writes `contents` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_rows_keep_frequencies() {
        let out = Output::Spectrum(vec![SpectrumRow::failed(0.1, 0.09, "resonance")]);
        assert_eq!(out.to_csv(), format!("{SPECTRUM_HEADER}\n1e-1,9e-2,,,,,,,resonance\n"));
        assert_eq!((out.n_rows(), out.n_ok()), (1, 0));
    }

    #[test]
    fn header_has_nine_columns() {
        assert_eq!(SPECTRUM_HEADER.split(',').count(), 9);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, "a\n").unwrap();
        write_atomic(&path, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
