use serde::{Deserialize, Serialize};

use crate::geometry::{round15, Classification, Solved, SweepReport};
use crate::surgery::{assemble, JsjAssembly, Piece};

pub const SOLVE_SCHEMA: &str = "surgerylab.solve/1";
pub const SWEEP_SCHEMA: &str = "surgerylab.sweep/1";
pub const JSJ_SCHEMA: &str = "surgerylab.jsj/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<String>,
    pub diagram_hash: String,
    pub fillings: Vec<String>,
    pub tetrahedra: usize,
    pub classification: Classification,
    pub volume: Option<f64>,
    pub residual: f64,
    /// `[re, im]` per unfilled cusp, `null` for filled ones.
    pub cusp_shapes: Vec<Option<[f64; 2]>>,
    pub shapes: Vec<[f64; 2]>,
}

impl SolveReport {
    pub fn new(name: Option<&str>, hash: &str, fillings: Vec<String>, s: &Solved) -> Self {
        let sol = &s.solution;
        let c = |z: num_complex::Complex64| [round15(z.re), round15(z.im)];
        SolveReport {
            schema: SOLVE_SCHEMA.into(),
            diagram: name.map(str::to_string),
            diagram_hash: hash.into(),
            fillings,
            tetrahedra: s.triangulation().num_tets(),
            classification: sol.classification,
            volume: sol.volume.map(round15),
            residual: round15(sol.residual),
            cusp_shapes: sol.cusp_shapes.iter().map(|m| m.map(c)).collect(),
            shapes: sol.shapes.z.iter().map(|&z| c(z)).collect(),
        }
    }

    /// A single hyperbolic piece with one boundary torus per unfilled cusp.
    pub fn as_assembly(&self) -> Option<JsjAssembly> {
        let v = match self.classification {
            Classification::Geometric | Classification::Nongeometric => self.volume?,
            _ => return None,
        };
        let tori = self.fillings.iter().filter(|f| f.as_str() == "*").count();
        let label = self.diagram.clone().unwrap_or_else(|| self.diagram_hash.clone());
        assemble(vec![Piece::hyperbolic(label, v, tori)], Vec::new()).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<String>,
    pub diagram_hash: String,
    #[serde(flatten)]
    pub report: SweepReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsjFile {
    pub schema: String,
    pub assembly: JsjAssembly,
}

/// Anything `compare` accepts.
#[derive(Debug, Clone, PartialEq)]
pub enum Comparable {
    Solve(SolveReport),
    Jsj(JsjFile),
}

impl Comparable {
    pub fn schema(&self) -> &str {
        match self {
            Comparable::Solve(r) => &r.schema,
            Comparable::Jsj(j) => &j.schema,
        }
    }

    pub fn assembly(&self) -> Option<JsjAssembly> {
        match self {
            Comparable::Solve(r) => r.as_assembly(),
            Comparable::Jsj(j) => Some(j.assembly.clone()),
        }
    }

    /// Reads either kind, dispatching on the `schema` field.
    pub fn from_json(text: &str) -> Result<Comparable, String> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let schema = v.get("schema").and_then(|s| s.as_str()).ok_or("missing `schema` field")?.to_string();
        let family = schema.split('/').next().unwrap_or_default();
        let parsed = match family {
            "surgerylab.solve" => serde_json::from_value(v).map(Comparable::Solve),
            "surgerylab.jsj" => serde_json::from_value(v).map(Comparable::Jsj),
            _ => return Err(format!("unknown schema `{schema}`")),
        };
        parsed.map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_on_schema() {
        let j = r#"{"schema":"surgerylab.jsj/1","assembly":{"pieces":[{"label":"a","geometry":{"hyperbolic":{"volume":2.0}},"boundary_tori":1}],"gluings":[]}}"#;
        let c = Comparable::from_json(j).unwrap();
        assert_eq!(c.schema(), JSJ_SCHEMA);
        assert_eq!(c.assembly().unwrap().volumes(), vec![2.0]);
        assert!(Comparable::from_json(r#"{"schema":"other/1"}"#).is_err());
        assert!(Comparable::from_json("[1]").is_err());
    }
}
