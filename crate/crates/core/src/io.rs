//! JSON model files: complex scalars as `[re, im]`, row-major matrices, relations by generator columns,
//! parameters as tagged closed forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::{BoundaryError, BoundaryRelation, OrdinaryTriplet};
use crate::coupling::{CouplingError, CouplingScene};
use crate::linalg::{c, CMat, C64};
use crate::linrel::{LinearRelation, RelError, Tol};
use crate::models::{ParamModel, SlModel};
use crate::nevanlinna::HerglotzModel;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {0}: {1}")]
    Read(String, String),
    #[error("no object named `{0}`")]
    Missing(String),
    #[error("object `{0}` is a {1}, expected {2}")]
    WrongKind(String, &'static str, &'static str),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
}

/// `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JComplex(pub [f64; 2]);

impl From<C64> for JComplex {
    fn from(z: C64) -> Self {
        JComplex([z.re, z.im])
    }
}

impl From<JComplex> for C64 {
    fn from(z: JComplex) -> Self {
        c(z.0[0], z.0[1])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub data: Vec<JComplex>,
}

impl MatrixJson {
    pub fn from_mat(m: &CMat) -> Self {
        let data = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].into()).collect();
        MatrixJson { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_mat(&self) -> Result<CMat, IoError> {
        if self.data.len() != self.rows * self.cols {
            return Err(IoError::Shape(format!("{} entries for a {}x{} matrix", self.data.len(), self.rows, self.cols)));
        }
        Ok(CMat::from_fn(self.rows, self.cols, |i, j| self.data[i * self.cols + j].into()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationJson {
    pub dim_in: usize,
    pub dim_out: usize,
    /// `(dim_in + dim_out) x k` matrix whose columns span the graph.
    pub generators: MatrixJson,
}

impl RelationJson {
    pub fn from_rel(r: &LinearRelation) -> Self {
        RelationJson {
            dim_in: r.dim_in(),
            dim_out: r.dim_out(),
            generators: MatrixJson::from_mat(r.basis()),
        }
    }

    pub fn to_rel(&self) -> Result<LinearRelation, IoError> {
        let g = self.generators.to_mat()?;
        if g.nrows() != self.dim_in + self.dim_out {
            return Err(IoError::Shape(format!(
                "generators have {} rows, expected dim_in + dim_out = {}",
                g.nrows(),
                self.dim_in + self.dim_out
            )));
        }
        Ok(LinearRelation::from_generators(self.dim_in, self.dim_out, &g)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassJson {
    pub t: f64,
    pub weight: MatrixJson,
}

/// Closed-form Nevanlinna parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum PairJson {
    Herglotz { a: MatrixJson, b: MatrixJson, masses: Vec<MassJson> },
    Constant { relation: RelationJson },
    SlInterval { length: f64 },
    /// `a + bλ + Σ w_k (1/(t_k - λ) - t_k/(t_k² + 1))` with `[t_k, w_k]` pairs.
    ScalarRational { a: f64, b: f64, poles: Vec<[f64; 2]> },
}

impl PairJson {
    pub fn to_model(&self) -> Result<ParamModel, IoError> {
        let inv = |e: crate::nevanlinna::NevError| IoError::Invalid(e.to_string());
        Ok(match self {
            PairJson::Herglotz { a, b, masses } => {
                let ms = masses.iter().map(|m| Ok((m.t, m.weight.to_mat()?))).collect::<Result<Vec<_>, IoError>>()?;
                ParamModel::Herglotz(HerglotzModel::new(a.to_mat()?, b.to_mat()?, ms).map_err(inv)?)
            }
            PairJson::Constant { relation } => ParamModel::Constant(relation.to_rel()?),
            PairJson::SlInterval { length } => ParamModel::SlInterval(SlModel::new(*length).map_err(|e| IoError::Invalid(e.to_string()))?),
            PairJson::ScalarRational { a, b, poles } => {
                let ps: Vec<(f64, f64)> = poles.iter().map(|p| (p[0], p[1])).collect();
                ParamModel::Herglotz(HerglotzModel::scalar(*a, *b, &ps).map_err(inv)?)
            }
        })
    }

    pub fn from_model(m: &ParamModel) -> Self {
        match m {
            ParamModel::Herglotz(h) => PairJson::Herglotz {
                a: MatrixJson::from_mat(&h.a),
                b: MatrixJson::from_mat(&h.b),
                masses: h.masses.iter().map(|(t, w)| MassJson { t: *t, weight: MatrixJson::from_mat(w) }).collect(),
            },
            ParamModel::Constant(r) => PairJson::Constant { relation: RelationJson::from_rel(r) },
            ParamModel::SlInterval(s) => PairJson::SlInterval { length: s.length },
        }
    }
}

/// A named object of a model file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ObjectJson {
    Matrix(MatrixJson),
    Relation(RelationJson),
    /// A boundary relation `Γ` from `C^{2n}` into `C^{2m}`.
    Boundary { gamma: RelationJson },
    /// An ordinary boundary triplet given by its (single-valued, surjective) `Γ`.
    Triplet { gamma: RelationJson },
    Pair(PairJson),
    /// A selfadjoint `Ã` on `C^{h1} ⊕ C^{h2}`, optionally with the name of a triplet for `S1*`.
    Scene {
        a_tilde: RelationJson,
        h1: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        triplet: Option<String>,
    },
}

impl ObjectJson {
    pub fn kind(&self) -> &'static str {
        match self {
            ObjectJson::Matrix(_) => "matrix",
            ObjectJson::Relation(_) => "relation",
            ObjectJson::Boundary { .. } => "boundary",
            ObjectJson::Triplet { .. } => "triplet",
            ObjectJson::Pair(_) => "pair",
            ObjectJson::Scene { .. } => "scene",
        }
    }
}

/// Named objects, serialized in name order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub objects: BTreeMap<String, ObjectJson>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let f: ModelFile = serde_json::from_str(text)?;
        f.check_references()?;
        Ok(f)
    }

    pub fn load(path: &str) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|e| IoError::Read(path.to_string(), e.to_string()))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn insert(&mut self, name: &str, obj: ObjectJson) {
        self.objects.insert(name.to_string(), obj);
    }

    fn check_references(&self) -> Result<(), IoError> {
        for obj in self.objects.values() {
            if let ObjectJson::Scene { triplet: Some(t), .. } = obj {
                self.get(t)?;
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&ObjectJson, IoError> {
        self.objects.get(name).ok_or_else(|| IoError::Missing(name.to_string()))
    }

    fn wrong(&self, name: &str, want: &'static str) -> IoError {
        match self.objects.get(name) {
            Some(o) => IoError::WrongKind(name.to_string(), o.kind(), want),
            None => IoError::Missing(name.to_string()),
        }
    }

    pub fn matrix(&self, name: &str) -> Result<CMat, IoError> {
        match self.get(name)? {
            ObjectJson::Matrix(m) => m.to_mat(),
            _ => Err(self.wrong(name, "matrix")),
        }
    }

    /// A relation, or the `Γ` of a boundary relation or triplet.
    pub fn relation(&self, name: &str) -> Result<LinearRelation, IoError> {
        match self.get(name)? {
            ObjectJson::Relation(r) | ObjectJson::Boundary { gamma: r } | ObjectJson::Triplet { gamma: r } => r.to_rel(),
            _ => Err(self.wrong(name, "relation")),
        }
    }

    fn split_gamma(&self, name: &str) -> Result<LinearRelation, IoError> {
        let g = self.relation(name)?;
        if g.dim_in() % 2 != 0 || g.dim_out() % 2 != 0 {
            return Err(IoError::Shape(format!("`{name}` must map C^(2n) into C^(2m)")));
        }
        Ok(g)
    }

    pub fn boundary(&self, name: &str, tol: &Tol) -> Result<BoundaryRelation, IoError> {
        Ok(BoundaryRelation::validate(self.split_gamma(name)?, tol)?)
    }

    pub fn triplet(&self, name: &str, tol: &Tol) -> Result<OrdinaryTriplet, IoError> {
        Ok(OrdinaryTriplet::new(self.boundary(name, tol)?, tol)?)
    }

    pub fn pair(&self, name: &str) -> Result<ParamModel, IoError> {
        match self.get(name)? {
            ObjectJson::Pair(p) => p.to_model(),
            _ => Err(self.wrong(name, "pair")),
        }
    }

    /// Scene and the name of its triplet, if given.
    pub fn scene(&self, name: &str, tol: &Tol) -> Result<(CouplingScene, Option<String>), IoError> {
        match self.get(name)? {
            ObjectJson::Scene { a_tilde, h1, triplet } => Ok((CouplingScene::new(a_tilde.to_rel()?, *h1, tol)?, triplet.clone())),
            _ => Err(self.wrong(name, "scene")),
        }
    }
}

/// Built-in fixtures: FIX-A, FIX-∞, FIX-B (matrix, boundary relation, scene, triplet, parameter),
/// the interval model and a scalar rational parameter.
pub fn fixture_file() -> ModelFile {
    let t = Tol::default();
    let mut f = ModelFile::default();
    f.insert("fixA", ObjectJson::Relation(RelationJson::from_rel(&crate::models::fix_a())));
    f.insert("fixInf", ObjectJson::Relation(RelationJson::from_rel(&crate::models::fix_inf())));
    f.insert("fixBMatrix", ObjectJson::Matrix(MatrixJson::from_mat(&crate::models::fix_b_matrix())));
    f.insert("fixBGamma", ObjectJson::Boundary { gamma: RelationJson::from_rel(&crate::models::fix_b_gamma()) });
    let id = crate::models::identity_triplet(&t);
    f.insert("idTriplet", ObjectJson::Triplet { gamma: RelationJson::from_rel(id.base().gamma()) });
    f.insert(
        "fixB",
        ObjectJson::Scene {
            a_tilde: RelationJson::from_rel(&LinearRelation::graph_of(&crate::models::fix_b_matrix())),
            h1: 1,
            triplet: Some("idTriplet".into()),
        },
    );
    f.insert(
        "tauFixB",
        ObjectJson::Pair(PairJson::ScalarRational { a: 0.0, b: 0.0, poles: vec![[0.0, 1.0]] }),
    );
    f.insert("interval", ObjectJson::Pair(PairJson::SlInterval { length: 1.0 }));
    f
}
