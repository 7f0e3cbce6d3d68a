//! The bodies-file format: named bodies plus one task binding.
//!
//! ```json
//! {
//!   "dim": 3,
//!   "bodies": {
//!     "K": {"type": "zonotope", "generators": [{"u": ["1","0","0"]}, ...]},
//!     "L": {"type": "polytope", "vertices": [["1","0","0"], ...]}
//!   },
//!   "task": {"K": "K", "L": "L", "t": "1/2"}
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{Scalar, Vector};
use crate::bodies::{Body, Generator, SmoothBody, SupportExpr, SymmetricPolytope, Zonotope};
use crate::equality::DecompositionCertificate;
use crate::error::{check_dim, Error, Result};
use crate::mixedvol::{AtomicSphericalMeasure, MeasureJson};

pub const MAX_DIM: usize = 6;
pub const MAX_GENERATORS: usize = 64;
pub const MAX_VERTICES: usize = 256;
pub const MAX_ELLIPSOIDS: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub u: Vector,
    #[serde(default = "Scalar::one")]
    pub lambda: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodyJson {
    Zonotope { generators: Vec<GeneratorJson> },
    Polytope { vertices: Vec<Vector> },
    Smooth { matrices: Vec<Vec<Vector>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coef: Scalar,
    pub body: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskJson {
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vector>,
    /// `f = Σ coef·h_body`; defaults to `h_L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<TermJson>>,
    /// Coefficient in `f = h_L - a·h_K` for the smooth checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodiesFileJson {
    pub dim: usize,
    pub bodies: BTreeMap<String, BodyJson>,
    pub task: TaskJson,
}

/// A validated bodies file.
#[derive(Clone, Debug, PartialEq)]
pub struct BodiesFile {
    pub dim: usize,
    pub bodies: BTreeMap<String, Body>,
    pub task: TaskJson,
}

impl BodyJson {
    pub fn to_body(&self, dim: usize) -> Result<Body> {
        match self {
            BodyJson::Zonotope { generators } => {
                limit("generators", generators.len(), MAX_GENERATORS)?;
                let gens = generators
                    .iter()
                    .map(|g| {
                        check_dim(dim, g.u.dim())?;
                        Ok(Generator::new(g.u.clone(), g.lambda.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Body::Zonotope(Zonotope::new(dim, gens)?))
            }
            BodyJson::Polytope { vertices } => {
                limit("vertices", vertices.len(), MAX_VERTICES)?;
                Ok(Body::Polytope(SymmetricPolytope::new(dim, vertices.clone())?))
            }
            BodyJson::Smooth { matrices } => {
                limit("ellipsoids", matrices.len(), MAX_ELLIPSOIDS)?;
                Ok(Body::Smooth(SmoothBody::new(dim, matrices.clone())?))
            }
        }
    }

    pub fn from_body(b: &Body) -> Self {
        match b {
            Body::Zonotope(z) => BodyJson::Zonotope {
                generators: z
                    .generators()
                    .iter()
                    .map(|g| GeneratorJson { u: g.u.clone(), lambda: g.lambda.clone() })
                    .collect(),
            },
            Body::Polytope(p) => BodyJson::Polytope { vertices: p.vertices().to_vec() },
            Body::Smooth(s) => BodyJson::Smooth { matrices: s.matrices().to_vec() },
        }
    }
}

fn limit(what: &str, n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(Error::Unsupported(format!("{n} {what} exceeds the limit of {max}")));
    }
    Ok(())
}

impl BodiesFile {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: BodiesFileJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(raw)
    }

    pub fn parse_bytes(data: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(data).map_err(|e| Error::Parse(e.to_string()))?;
        Self::parse(text)
    }

    pub fn from_json(raw: BodiesFileJson) -> Result<Self> {
        if raw.dim == 0 || raw.dim > MAX_DIM {
            return Err(Error::Unsupported(format!("dimension {} outside 1..={MAX_DIM}", raw.dim)));
        }
        let mut bodies = BTreeMap::new();
        for (name, b) in &raw.bodies {
            let body = b.to_body(raw.dim).map_err(|e| match e {
                Error::Parse(m) => Error::Parse(format!("body `{name}`: {m}")),
                other => other,
            })?;
            bodies.insert(name.clone(), body);
        }
        let file = BodiesFile { dim: raw.dim, bodies, task: raw.task };
        file.body(&file.task.k)?;
        if let Some(l) = &file.task.l {
            file.body(l)?;
        }
        if let Some(u) = &file.task.u {
            check_dim(file.dim, u.dim())?;
        }
        if let Some(terms) = &file.task.f {
            for t in terms {
                file.body(&t.body)?;
            }
        }
        Ok(file)
    }

    pub fn to_json(&self) -> BodiesFileJson {
        BodiesFileJson {
            dim: self.dim,
            bodies: self.bodies.iter().map(|(k, v)| (k.clone(), BodyJson::from_body(v))).collect(),
            task: self.task.clone(),
        }
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("bodies file serializes")
    }

    /// A file binding `K` and `L` under those names.
    pub fn pair(k: &Body, l: &Body, task: TaskJson) -> Self {
        let mut bodies = BTreeMap::new();
        bodies.insert("K".to_string(), k.clone());
        bodies.insert("L".to_string(), l.clone());
        BodiesFile { dim: k.dim(), bodies, task }
    }

    pub fn body(&self, name: &str) -> Result<&Body> {
        self.bodies
            .get(name)
            .ok_or_else(|| Error::Parse(format!("task refers to unknown body `{name}`")))
    }

    pub fn k(&self) -> Result<&Body> {
        self.body(&self.task.k)
    }

    pub fn l(&self) -> Result<&Body> {
        let name = self.task.l.as_deref().ok_or_else(|| Error::Parse("task needs an `L` binding".into()))?;
        self.body(name)
    }

    pub fn k_zonotope(&self) -> Result<&Zonotope> {
        self.k()?
            .as_zonotope()
            .ok_or_else(|| Error::Unsupported(format!("K must be a zonotope, found a {}", self.k().map(Body::kind).unwrap_or("?"))))
    }

    pub fn k_smooth(&self) -> Result<&SmoothBody> {
        match self.k()? {
            Body::Smooth(s) => Ok(s),
            other => Err(Error::Unsupported(format!("K must be a smooth body, found a {}", other.kind()))),
        }
    }

    /// `f` from the task: the explicit terms, else `h_L`.
    pub fn f(&self) -> Result<SupportExpr> {
        match &self.task.f {
            Some(terms) => {
                let t = terms
                    .iter()
                    .map(|t| Ok((t.coef.clone(), self.body(&t.body)?.clone())))
                    .collect::<Result<Vec<_>>>()?;
                SupportExpr::new(self.dim, t)
            }
            None => Ok(SupportExpr::body(self.l()?.clone())),
        }
    }

    pub fn t(&self) -> Result<Scalar> {
        self.task.t.clone().ok_or_else(|| Error::Parse("task needs `t`".into()))
    }

    pub fn u(&self) -> Result<Vector> {
        self.task.u.clone().ok_or_else(|| Error::Parse("task needs `u`".into()))
    }

    pub fn to_backend(&self, backend: crate::arith::Backend) -> Result<Self> {
        let bodies = self
            .bodies
            .iter()
            .map(|(k, v)| {
                let b = match v {
                    Body::Smooth(_) => v.clone(),
                    _ => v.to_backend(backend)?,
                };
                Ok((k.clone(), b))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(BodiesFile { dim: self.dim, bodies, task: self.task.clone() })
    }
}

pub fn parse_scalar(text: &str) -> Result<Scalar> {
    text.parse()
}

pub fn parse_measure(text: &str) -> Result<AtomicSphericalMeasure> {
    let raw: MeasureJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.dim == 0 || raw.dim > MAX_DIM {
        return Err(Error::Unsupported(format!("dimension {} outside 1..={MAX_DIM}", raw.dim)));
    }
    AtomicSphericalMeasure::from_serde(raw)
}

pub fn parse_certificate(text: &str) -> Result<DecompositionCertificate> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBE_CROSS: &str = r#"{
        "dim": 3,
        "bodies": {
            "K": {"type": "zonotope", "generators": [{"u": ["1","0","0"]}, {"u": ["0","1","0"]}, {"u": ["0","0","1"], "lambda": "1"}]},
            "L": {"type": "polytope", "vertices": [["1","0","0"], ["0","1","0"], ["0","0","1"]]}
        },
        "task": {"K": "K", "L": "L"}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let f = BodiesFile::parse(CUBE_CROSS).unwrap();
        assert_eq!(f.k_zonotope().unwrap(), &Zonotope::cube(3));
        assert_eq!(f.l().unwrap(), &Body::Polytope(SymmetricPolytope::cross_polytope(3)));
        let again = BodiesFile::parse(&f.to_string_pretty()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(BodiesFile::parse("{"), Err(Error::Parse(_))));
        let unknown = CUBE_CROSS.replace(r#""L": "L""#, r#""L": "M""#);
        assert!(matches!(BodiesFile::parse(&unknown), Err(Error::Parse(_))));
        let big = CUBE_CROSS.replace(r#""dim": 3"#, r#""dim": 40"#);
        assert!(matches!(BodiesFile::parse(&big), Err(Error::Unsupported(_))));
        let wrong = CUBE_CROSS.replace(r#"["0","0","1"]]"#, r#"["0","1"]]"#);
        assert!(BodiesFile::parse(&wrong).is_err());
    }

    #[test]
    fn certificate_and_measure_parse() {
        let c = parse_certificate(r#"{"components":[[0],[1]],"dims":[1,1],"scales":["1","1/2"]}"#).unwrap();
        assert_eq!(c.scales[1], Scalar::ratio(1, 2));
        assert!(parse_certificate(r#"{"components":[],"dims":[],"scales":[],"x":1}"#).is_err());
        let m = parse_measure(r#"{"dim":2,"atoms":[{"w":["2","0"],"c":"1"}]}"#).unwrap();
        assert_eq!(m.atoms()[0].c, Scalar::int(2));
    }
}
