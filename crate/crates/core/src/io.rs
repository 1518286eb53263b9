//! Output formatting, atomic file writes, and checksums.

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::pauli::OperatorSum;
use crate::register::QubitRegister;

/// Format a float with 12 significant digits (scientific). All numeric file
/// output goes through this so regression diffs stay meaningful.
pub fn fmt_sig12(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x }; // normalize -0.0
    format!("{x:.11e}")
}

/// Round a float to the 12-significant-digit grid used by [`fmt_sig12`].
pub fn round_sig12(x: f64) -> f64 {
    fmt_sig12(x).parse().unwrap_or(x)
}

/// Write a file atomically: write to `<path>.tmp`, then rename over `path`.
/// Malformed runs that error out earlier never leave partial output behind.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Hex-encoded SHA-256 of a byte slice.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Stable JSON rendering of an operator sum: register sizes plus one term per
/// entry, sorted by factor map, coefficients as `[re, im]` pairs.
pub fn operator_to_json(op: &OperatorSum, reg: &QubitRegister) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = op
        .sorted_terms()
        .iter()
        .map(|t| {
            let factors: Vec<serde_json::Value> = t
                .factors()
                .iter()
                .map(|(&q, &p)| serde_json::json!([q, p.label().to_string()]))
                .collect();
            serde_json::json!({
                "coefficient": [round_sig12(t.coefficient().re), round_sig12(t.coefficient().im)],
                "factors": factors,
            })
        })
        .collect();
    serde_json::json!({
        "schema": "gadgetsim/operator/v1",
        "register": { "data_qubits": reg.n_data(), "ancilla_qubits": reg.n_ancilla() },
        "terms": terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_formatting() {
        assert_eq!(fmt_sig12(1.0), "1.00000000000e0");
        assert_eq!(fmt_sig12(0.0), "0.00000000000e0");
        assert_eq!(fmt_sig12(-0.0), "0.00000000000e0");
        assert_eq!(fmt_sig12(0.5773502691896258), "5.77350269190e-1");
    }

    #[test]
    fn atomic_write_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        atomic_write(&path, b"a,b\n1,2\n").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"a,b\n1,2\n");
        assert!(!path.with_extension("csv.tmp").exists());
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
