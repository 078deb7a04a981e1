//! JSON representation files.
//!
//! ```json
//! {
//!   "n": 2,
//!   "generators": { "a1": [[...], [...]], "b1": ..., "a2": ..., "b2": ... },
//!   "relator": "a1 B1 a2 B2 A1 b1 A2 b2",
//!   "provenance": "octagon-fuchsian"
//! }
//! ```
//!
//! Matrices are row-major lists of rows. Numbers are written with 17
//! significant digits so that loading reproduces every entry bit-exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;

use super::sympower::recognize_lift;
use super::{Provenance, SurfaceRep, RELATOR_TOL_LOAD};
use crate::error::{Error, Result};
use crate::word::{Presentation, Word, GENERATOR_NAMES};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub n: usize,
    pub generators: BTreeMap<String, Vec<Vec<f64>>>,
    pub relator: String,
    pub provenance: String,
}

impl RepFile {
    pub fn into_rep(self) -> Result<SurfaceRep> {
        let n = self.n;
        if n < 2 {
            return Err(Error::Schema(format!("n = {n} must be at least 2")));
        }
        for key in self.generators.keys() {
            if !GENERATOR_NAMES.contains(&key.as_str()) {
                return Err(Error::Schema(format!("unknown generator `{key}`")));
            }
        }
        let mut gens = Vec::with_capacity(4);
        for name in GENERATOR_NAMES {
            let rows = self
                .generators
                .get(name)
                .ok_or_else(|| Error::Schema(format!("missing generator `{name}`")))?;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Schema(format!("generator `{name}` is not {n}x{n}")));
            }
            gens.push(DMatrix::from_fn(n, n, |i, j| rows[i][j]));
        }
        let gens: [DMatrix<f64>; 4] = gens.try_into().expect("four generators");
        let relator: Word = self.relator.parse()?;
        let presentation = Presentation::new(relator).map_err(|e| Error::Schema(e.to_string()))?;
        let provenance: Provenance = self.provenance.parse()?;
        if provenance == Provenance::SymPowerLift {
            if let Some(rep) = recognize_lift(gens.clone(), &presentation) {
                return Ok(rep);
            }
        }
        SurfaceRep::new(gens, presentation, provenance, RELATOR_TOL_LOAD)
    }
}

pub fn rep_to_json(rep: &SurfaceRep) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"n\": {},", rep.n());
    let _ = writeln!(out, "  \"generators\": {{");
    for (k, name) in GENERATOR_NAMES.iter().enumerate() {
        let g = &rep.generators()[k];
        let rows: Vec<String> = (0..rep.n())
            .map(|i| {
                let cells: Vec<String> = (0..rep.n()).map(|j| format!("{:.16e}", g[(i, j)])).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        let sep = if k + 1 < GENERATOR_NAMES.len() { "," } else { "" };
        let _ = writeln!(out, "    \"{name}\": [{}]{sep}", rows.join(", "));
    }
    let _ = writeln!(out, "  }},");
    let _ = writeln!(out, "  \"relator\": \"{}\",", rep.presentation().relator());
    let _ = writeln!(out, "  \"provenance\": \"{}\"", rep.provenance());
    let _ = writeln!(out, "}}");
    out
}

pub fn rep_from_json(text: &str) -> Result<SurfaceRep> {
    let file: RepFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    file.into_rep()
}

pub fn load_rep(path: impl AsRef<Path>) -> Result<SurfaceRep> {
    rep_from_json(&fs::read_to_string(path)?)
}

pub fn save_rep(rep: &SurfaceRep, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, rep_to_json(rep))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::build_octagon_fuchsian;

    #[test]
    fn round_trip_is_bit_exact() {
        let rep = build_octagon_fuchsian();
        let back = rep_from_json(&rep_to_json(&rep)).unwrap();
        for (a, b) in rep.generators().iter().zip(back.generators()) {
            for (x, y) in a.iter().zip(b.iter()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        assert_eq!(back.presentation(), rep.presentation());
        assert_eq!(back.provenance(), Provenance::OctagonFuchsian);
    }

    #[test]
    fn large_lifts_reload() {
        let base = build_octagon_fuchsian();
        for n in [5, 8, 12] {
            let rep = crate::rep::sym_power_lift(&base, n).unwrap();
            let back = rep_from_json(&rep_to_json(&rep)).unwrap();
            assert_eq!(back.provenance(), Provenance::SymPowerLift);
            assert!(back.relator_residual() <= 1e-11);
            assert_eq!(rep_to_json(&back), rep_to_json(&rep));
        }
    }

    #[test]
    fn determinant_two_rejected() {
        let rep = build_octagon_fuchsian();
        let text = rep_to_json(&rep);
        let mut file: serde_json::Value = serde_json::from_str(&text).unwrap();
        // scale the first row of a1 by 2
        let row = file["generators"]["a1"][0].as_array_mut().unwrap();
        for x in row.iter_mut() {
            *x = serde_json::json!(x.as_f64().unwrap() * 2.0);
        }
        let err = rep_from_json(&file.to_string()).unwrap_err();
        assert!(matches!(err, Error::Determinant { .. }), "{err}");
    }

    #[test]
    fn schema_violations() {
        assert!(matches!(rep_from_json("{}"), Err(Error::Schema(_))));
        let rep = build_octagon_fuchsian();
        let text = rep_to_json(&rep).replace("\"n\": 2", "\"n\": 3");
        assert!(matches!(rep_from_json(&text), Err(Error::Schema(_))));
        let text = rep_to_json(&rep).replace("octagon-fuchsian", "mystery");
        assert!(rep_from_json(&text).is_err());
    }
}
