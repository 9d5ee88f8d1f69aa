//! Model files: a Lie algebra with its Cartan block, an r-matrix, and the
//! optional Weyl curvature, gauge element and base point.
//!
//! Indices are zero-based positions in `basis`. Frame indices in
//! `weyl_curvature` run over `∂λ₁..∂λ_l` first, then the basis.

use std::path::Path;
use std::sync::Arc;

use dynr::{DynamicalR, GaugeElement};
use geom::FrameForm;
use liealg::{validate_lie_algebra, LieAlgebra, MultiVector};
use serde::{Deserialize, Serialize};
use symexpr::{parse_scalar, GaussRat, Scalar};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    pub dim: usize,
    pub cartan_dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub r: Vec<REntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl_curvature: Option<Vec<Vec<FormEntry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<Vec<String>>,
}

/// `c_ij^k = c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

/// `coeff · e_i∧e_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct REntry {
    pub i: usize,
    pub j: usize,
    pub coeff: String,
}

/// `coeff · θ^A∧θ^B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntry {
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSpec {
    pub log: Vec<GaugeTerm>,
    pub nilpotency: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeTerm {
    pub a: usize,
    pub coeff: String,
}

/// A validated model.
#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub alg: Arc<LieAlgebra>,
    pub rm: DynamicalR,
    /// `ω₁, ω₂, …` of the Weyl curvature `ω + Σ ℏⁱωᵢ`.
    pub omegas: Vec<FrameForm>,
    pub gauge: Option<GaugeElement>,
    /// `None` when the file gives no base point.
    pub base_point: Option<Vec<GaussRat>>,
}

/// The base point used when a model gives none.
pub const DEFAULT_BASE_COORD: i64 = 2;

impl Model {
    pub fn base_point_or_default(&self) -> Vec<GaussRat> {
        self.base_point.clone().unwrap_or_else(|| vec![GaussRat::from_i64(DEFAULT_BASE_COORD); self.alg.cartan_dim()])
    }
}

fn scalar(text: &str, l: usize, field: String) -> Result<Scalar, CliError> {
    parse_scalar(text, l).map_err(|e| CliError::Parse { field, pos: e.position(), msg: e.to_string() })
}

fn in_range(entry: String, index: usize, bound: usize) -> Result<(), CliError> {
    if index >= bound {
        return Err(CliError::Index { entry, index, bound });
    }
    Ok(())
}

pub fn parse_model_str(text: &str) -> Result<ModelFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema { path: e.path().to_string(), msg: e.inner().to_string() })
}

pub fn load_model(path: &Path) -> Result<Model, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    build_model(&parse_model_str(&text)?)
}

/// Parses Weyl curvature terms, one list per ℏ-order.
pub fn parse_weyl_curvature(orders: &[Vec<FormEntry>], l: usize, n: usize) -> Result<Vec<FrameForm>, CliError> {
    let size = l + n;
    let mut out = Vec::new();
    for (k, terms) in orders.iter().enumerate() {
        let mut w = FrameForm::zero(size);
        for (t, e) in terms.iter().enumerate() {
            let entry = format!("weyl_curvature[{k}][{t}]");
            in_range(format!("{entry}.A"), e.a, size)?;
            in_range(format!("{entry}.B"), e.b, size)?;
            if e.a == e.b {
                return Err(CliError::Model(format!("{entry}: repeated frame index {}", e.a)));
            }
            w.add_term(vec![e.a, e.b], scalar(&e.coeff, l, format!("{entry}.coeff"))?);
        }
        out.push(w);
    }
    Ok(out)
}

pub fn build_model(file: &ModelFile) -> Result<Model, CliError> {
    let n = file.dim;
    let l = file.cartan_dim;
    if file.basis.len() != n {
        return Err(CliError::Model(format!("basis has {} labels but dim is {n}", file.basis.len())));
    }
    if l > n {
        return Err(CliError::Model(format!("cartan_dim {l} exceeds dim {n}")));
    }
    let mut triples = Vec::new();
    for (t, e) in file.brackets.iter().enumerate() {
        let entry = format!("brackets[{t}]");
        in_range(format!("{entry}.i"), e.i, n)?;
        in_range(format!("{entry}.j"), e.j, n)?;
        in_range(format!("{entry}.k"), e.k, n)?;
        let c = scalar(&e.c, l, format!("{entry}.c"))?;
        triples.push((e.i, e.j, e.k, c));
    }
    // entries with i < j fill the opposite order unless it is given explicitly
    let mut all = triples.clone();
    for (i, j, k, c) in &triples {
        if i < j && !triples.iter().any(|(a, b, kk, _)| a == j && b == i && kk == k) {
            all.push((*j, *i, *k, c.neg()));
        }
    }
    let alg = LieAlgebra::from_raw(file.basis.clone(), l, &all).map_err(|e| CliError::Model(e.to_string()))?;
    let diag = validate_lie_algebra(&alg);
    if !diag.is_empty() {
        return Err(CliError::InvalidAlgebra(format!("{diag:?}")));
    }
    let alg = Arc::new(alg);
    let mut r = MultiVector::zero(&alg);
    for (t, e) in file.r.iter().enumerate() {
        let entry = format!("r[{t}]");
        in_range(format!("{entry}.i"), e.i, n)?;
        in_range(format!("{entry}.j"), e.j, n)?;
        if e.i == e.j {
            return Err(CliError::Model(format!("{entry}: e{0}∧e{0} is zero; repeated index", e.i)));
        }
        r.add_term(vec![e.i, e.j], scalar(&e.coeff, l, format!("{entry}.coeff"))?);
    }
    let rm = DynamicalR::new(r).map_err(|e| CliError::Model(e.to_string()))?;
    let omegas = match &file.weyl_curvature {
        Some(w) => parse_weyl_curvature(w, l, n)?,
        None => Vec::new(),
    };
    let gauge = match &file.gauge {
        Some(g) => {
            let mut log = vec![Scalar::zero(); n];
            for (t, e) in g.log.iter().enumerate() {
                let entry = format!("gauge.log[{t}]");
                in_range(format!("{entry}.a"), e.a, n)?;
                log[e.a] = log[e.a].add(&scalar(&e.coeff, l, format!("{entry}.coeff"))?);
            }
            Some(GaugeElement::new(log, g.nilpotency))
        }
        None => None,
    };
    let base_point = match &file.base_point {
        Some(p) => {
            if p.len() != l {
                return Err(CliError::Model(format!("base_point has {} coordinates, expected {l}", p.len())));
            }
            let mut pt = Vec::new();
            for (t, s) in p.iter().enumerate() {
                let field = format!("base_point[{t}]");
                let v = scalar(s, 0, field.clone())?
                    .constant_value()
                    .ok_or_else(|| CliError::Model(format!("{field} is not a constant")))?;
                pt.push(v);
            }
            Some(pt)
        }
        None => None,
    };
    Ok(Model { name: file.name.clone(), alg, rm, omegas, gauge, base_point })
}

/// The canonical file for a model: scalars reprinted, brackets listed once
/// with `i < j`, terms in index order.
pub fn canonical(m: &Model) -> ModelFile {
    let alg = &m.alg;
    let brackets = alg
        .structure_constants()
        .into_iter()
        .filter(|(i, j, _, _)| i < j)
        .map(|(i, j, k, c)| BracketEntry { i, j, k, c: c.to_string() })
        .collect();
    let r = m
        .rm
        .r
        .terms()
        .map(|(idx, c)| REntry { i: idx[0], j: idx[1], coeff: c.to_string() })
        .collect();
    let weyl_curvature = if m.omegas.is_empty() {
        None
    } else {
        Some(
            m.omegas
                .iter()
                .map(|w| w.terms().map(|(idx, c)| FormEntry { a: idx[0], b: idx[1], coeff: c.to_string() }).collect())
                .collect(),
        )
    };
    let gauge = m.gauge.as_ref().map(|g| GaugeSpec {
        log: g
            .log
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| GaugeTerm { a, coeff: c.to_string() })
            .collect(),
        nilpotency: g.nilpotency,
    });
    let base_point = m.base_point.as_ref().map(|p| p.iter().map(|c| Scalar::constant(c.clone()).to_string()).collect());
    ModelFile {
        name: m.name.clone(),
        dim: alg.dim(),
        cartan_dim: alg.cartan_dim(),
        basis: alg.labels().to_vec(),
        brackets,
        r,
        weyl_curvature,
        gauge,
        base_point,
    }
}

pub fn to_json(f: &ModelFile) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("model files always serialize");
    s.push('\n');
    s
}
