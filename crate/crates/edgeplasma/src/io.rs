//! On-disk formats: spectral states (JSON), tabular diagnostics (CSV), and
//! the run manifest with content hashes.
//!
//! Every CSV begins with the line `# format: 1`; every JSON document
//! carries a `"format": 1` field.  Floats are written with Rust's shortest
//! round-trip formatting, so identical data produces identical bytes.

use crate::continuation::ContinuationPoint;
use crate::error::{Error, Result};
use crate::integrate::TraceRecord;
use crate::spectral::{GridField, SpectralState};
use crate::stability::SweepRow;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::{BufWriter, Write as _};
use std::path::Path;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct StateFile {
    format: u32,
    n1: usize,
    n2: usize,
    modes: Vec<ModeEntry>,
}

#[derive(Serialize, Deserialize)]
struct ModeEntry {
    k1: u32,
    k2: i32,
    /// `[[re u1, im u1], [re u2, im u2]]`.
    c: [[f64; 2]; 2],
}

/// Write a spectral state as JSON (only modes with a nonzero coefficient
/// are stored).
pub fn write_state_json(path: &Path, state: &SpectralState) -> Result<()> {
    let mut modes = Vec::new();
    for k1 in 1..=state.k1_max() as u32 {
        for k2 in -(state.k2_max() as i32)..=(state.k2_max() as i32) {
            let a = state.get(0, k1, k2);
            let b = state.get(1, k1, k2);
            if a != Complex64::new(0.0, 0.0) || b != Complex64::new(0.0, 0.0) {
                modes.push(ModeEntry {
                    k1,
                    k2,
                    c: [[a.re, a.im], [b.re, b.im]],
                });
            }
        }
    }
    let file = StateFile {
        format: FORMAT_VERSION,
        n1: state.k1_max(),
        n2: state.k2_max(),
        modes,
    };
    let mut w = BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &file)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Read a spectral state written by [`write_state_json`].
pub fn read_state_json(path: &Path) -> Result<SpectralState> {
    let text = fs::read_to_string(path)?;
    let file: StateFile = serde_json::from_str(&text)?;
    if file.format != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported state format {} (expected {FORMAT_VERSION})",
            file.format
        )));
    }
    if file.n1 < 1 {
        return Err(Error::Format("state needs n1 >= 1".into()));
    }
    let mut state = SpectralState::new(file.n1, file.n2);
    for m in &file.modes {
        if m.k1 < 1 || m.k1 as usize > file.n1 || m.k2.unsigned_abs() as usize > file.n2 {
            return Err(Error::Format(format!(
                "mode ({}, {}) outside the declared truncation ({}, {})",
                m.k1, m.k2, file.n1, file.n2
            )));
        }
        state.set(0, m.k1, m.k2, Complex64::new(m.c[0][0], m.c[0][1]));
        state.set(1, m.k1, m.k2, Complex64::new(m.c[1][0], m.c[1][1]));
    }
    Ok(state)
}

/// Scalar trace of a run: time, sup and mid-channel samples of `u1`, and
/// the energy functionals when defined.
pub fn write_traces_csv(path: &Path, records: &[TraceRecord]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "# format: {FORMAT_VERSION}")?;
    writeln!(w, "t,sup_u1,mid_u1,l2_sq,grad_v_sq,dissipation,energy")?;
    for r in records {
        match r.energy {
            Some(e) => writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.t, r.sup_u1, r.mid_u1, e.l2_sq, e.grad_v_sq, e.dissipation_accum, e.energy
            )?,
            None => writeln!(w, "{},{},{},,,,", r.t, r.sup_u1, r.mid_u1)?,
        }
    }
    w.flush()?;
    Ok(())
}

/// Bifurcation diagram rows from a parameter sweep.
pub fn write_bifurcation_csv(path: &Path, points: &[ContinuationPoint]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "# format: {FORMAT_VERSION}")?;
    writeln!(w, "dT,amplitude,period,classification")?;
    for p in points {
        match p.period {
            Some(per) => writeln!(
                w,
                "{},{},{},{}",
                p.d_t,
                p.amplitude,
                per,
                p.classification.label()
            )?,
            None => writeln!(w, "{},{},,{}", p.d_t, p.amplitude, p.classification.label())?,
        }
    }
    w.flush()?;
    Ok(())
}

/// Eigenvalue sweep rows.
pub fn write_spectrum_csv(path: &Path, rows: &[SweepRow<f64>]) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "# format: {FORMAT_VERSION}")?;
    writeln!(
        w,
        "dT,k1,k2,re_lambda_plus,im_lambda_plus,re_lambda_minus,im_lambda_minus"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.d_t,
            r.k.k1,
            r.k.k2,
            r.lambda_plus.re,
            r.lambda_plus.im,
            r.lambda_minus.re,
            r.lambda_minus.im
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Physical-space snapshot on the sampling grid.
pub fn write_grid_csv(path: &Path, field: &GridField) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "# format: {FORMAT_VERSION}")?;
    writeln!(w, "x1,x2,u1,u2")?;
    for j in 0..=field.n1() {
        for m in 0..field.n2() {
            writeln!(
                w,
                "{},{},{},{}",
                field.x1(j),
                field.x2(m),
                field.u1[[j, m]],
                field.u2[[j, m]]
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

/// SHA-256 of a file's contents, lowercase hex.
pub fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        use std::fmt::Write as _;
        write!(s, "{b:02x}").expect("writing to a String cannot fail");
    }
    Ok(s)
}

/// One output file recorded in the manifest.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutputEntry {
    /// Path relative to the output directory.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Reproducibility record written next to every command's outputs: the
/// exact configuration, any seeds, and content hashes of the files
/// produced.  Timestamps are informational and excluded from byte-level
/// rerun comparisons.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub format: u32,
    /// The command line that produced the outputs.
    pub command: String,
    pub package_version: String,
    /// Unix epoch milliseconds at completion (informational).
    pub created_unix_ms: u64,
    /// Full resolved configuration.
    pub config: serde_json::Value,
    /// RNG seeds that influenced the outputs (empty when none).
    pub seeds: Vec<u64>,
    pub outputs: Vec<OutputEntry>,
}

impl RunManifest {
    pub fn new(command: String, config: serde_json::Value, seeds: Vec<u64>) -> Self {
        let created_unix_ms = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        RunManifest {
            format: FORMAT_VERSION,
            command,
            package_version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix_ms,
            config,
            seeds,
            outputs: Vec::new(),
        }
    }

    /// Hash `file` (already written) and add it to the manifest under its
    /// name relative to `dir`.
    pub fn add_output(&mut self, dir: &Path, file: &Path) -> Result<()> {
        let bytes = fs::metadata(file)?.len();
        let sha256 = sha256_hex(file)?;
        let rel = file
            .strip_prefix(dir)
            .unwrap_or(file)
            .to_string_lossy()
            .into_owned();
        self.outputs.push(OutputEntry {
            path: rel,
            bytes,
            sha256,
        });
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::random_state;

    #[test]
    fn state_round_trips_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        let state = random_state(5, 4, 0.3, 99);
        write_state_json(&path, &state).unwrap();
        let back = read_state_json(&path).unwrap();
        assert_eq!(state, back);
    }

    #[test]
    fn state_format_and_bounds_are_validated() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, r#"{"format":2,"n1":2,"n2":2,"modes":[]}"#).unwrap();
        assert!(matches!(read_state_json(&path), Err(Error::Format(_))));
        fs::write(
            &path,
            r#"{"format":1,"n1":2,"n2":2,"modes":[{"k1":3,"k2":0,"c":[[1,0],[0,0]]}]}"#,
        )
        .unwrap();
        assert!(matches!(read_state_json(&path), Err(Error::Format(_))));
        fs::write(&path, "not json").unwrap();
        assert!(matches!(read_state_json(&path), Err(Error::Json(_))));
    }

    #[test]
    fn csv_headers_and_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let traces = dir.path().join("traces.csv");
        let recs = vec![
            TraceRecord {
                t: 0.0,
                sup_u1: 0.1,
                mid_u1: -0.05,
                energy: None,
            },
            TraceRecord {
                t: 0.5,
                sup_u1: 0.2,
                mid_u1: 0.07,
                energy: None,
            },
        ];
        write_traces_csv(&traces, &recs).unwrap();
        let text = fs::read_to_string(&traces).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# format: 1");
        assert!(lines[1].starts_with("t,sup_u1,mid_u1"));
        assert_eq!(lines.len(), 4);
        assert!(lines[2].ends_with(",,,,"));

        let bif = dir.path().join("bifurcation.csv");
        let pts = vec![crate::continuation::ContinuationPoint {
            d_t: 0.15,
            amplitude: 0.04,
            period: Some(24.9),
            classification: crate::continuation::PointClass::Periodic,
        }];
        write_bifurcation_csv(&bif, &pts).unwrap();
        let text = fs::read_to_string(&bif).unwrap();
        assert!(text.contains("0.15,0.04,24.9,periodic"));
    }

    #[test]
    fn sha256_known_vector() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("abc.txt");
        fs::write(&path, "abc").unwrap();
        assert_eq!(
            sha256_hex(&path).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn manifest_records_outputs_and_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("traces.csv");
        fs::write(&out, "# format: 1\n").unwrap();
        let mut m = RunManifest::new(
            "edgeplasma simulate --L1 2".into(),
            serde_json::json!({"L1": 2.0}),
            vec![7],
        );
        m.add_output(dir.path(), &out).unwrap();
        let mpath = dir.path().join("manifest.json");
        m.write(&mpath).unwrap();
        let text = fs::read_to_string(&mpath).unwrap();
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back.format, 1);
        assert_eq!(back.outputs.len(), 1);
        assert_eq!(back.outputs[0].path, "traces.csv");
        assert_eq!(back.outputs[0].bytes, 12);
        assert_eq!(back.seeds, vec![7]);
        assert_eq!(back.config["L1"], 2.0);
    }
}
