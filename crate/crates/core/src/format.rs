//! The `kco-v1` operator file: a JSON document holding a Kähler curvature
//! operator either as the real matrix of 𝔑 on u(n) or as the Hermitian form
//! h on Sym²ℂⁿ.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::curvature::{model_cp_k_flat, model_cpn, model_n2_from_mu, KahlerCurvature};
use crate::index::{pair_count, pair_from_index, pair_index};
use crate::lie::u_dim;
use crate::{Error, Result, C64};

pub const FORMAT: &str = "kco-v1";
pub const BASIS_ORDER: &str = "Rij_lex,Iij_lex,Iii_asc";
/// Symmetry / Hermitian tolerance applied on load.
pub const LOAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    UOperator,
    HermitianSym2,
}

impl Representation {
    pub fn as_str(self) -> &'static str {
        match self {
            Representation::UOperator => "u_operator",
            Representation::HermitianSym2 => "hermitian_sym2",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_plus: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_minus: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl Metadata {
    fn is_empty(&self) -> bool {
        *self == Metadata::default()
    }
}

/// A curvature operator together with its file metadata.
#[derive(Debug, Clone)]
pub struct OperatorFile {
    pub curvature: KahlerCurvature,
    pub representation: Representation,
    pub metadata: Metadata,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| schema(format!("missing field `{name}`")))
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema(format!("`{what}` must be a number")))
}

fn as_index(v: &Value, what: &str, n: usize) -> Result<usize> {
    let i = v
        .as_u64()
        .ok_or_else(|| schema(format!("`{what}` must be a positive integer")))? as usize;
    if i == 0 || i > n {
        return Err(schema(format!("`{what}` = {i} is outside 1..={n}")));
    }
    Ok(i - 1)
}

/// Parses a `kco-v1` document.
pub fn from_json_str(text: &str) -> Result<OperatorFile> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root.as_object().ok_or_else(|| schema("top level must be an object"))?;

    let format = field(obj, "format")?;
    if format.as_str() != Some(FORMAT) {
        return Err(schema(format!("`format` must be \"{FORMAT}\", found {format}")));
    }
    let basis = field(obj, "basis_order")?;
    if basis.as_str() != Some(BASIS_ORDER) {
        return Err(schema(format!("`basis_order` must be \"{BASIS_ORDER}\", found {basis}")));
    }
    let n = field(obj, "n")?
        .as_u64()
        .ok_or_else(|| schema("`n` must be a positive integer"))? as usize;
    crate::exterior::check_n(n)?;
    let representation: Representation = serde_json::from_value(field(obj, "representation")?.clone())
        .map_err(|_| schema("`representation` must be \"u_operator\" or \"hermitian_sym2\""))?;
    let metadata: Metadata = match obj.get("metadata") {
        None | Some(Value::Null) => Metadata::default(),
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| schema(format!("`metadata`: {e}")))?,
    };
    let matrix = field(obj, "matrix")?;
    let curvature = match representation {
        Representation::UOperator => parse_u_operator(n, matrix)?,
        Representation::HermitianSym2 => parse_hermitian(n, matrix)?,
    };
    Ok(OperatorFile {
        curvature,
        representation,
        metadata,
    })
}

/// Rows of numbers, or one flat row-major list.
fn parse_u_operator(n: usize, matrix: &Value) -> Result<KahlerCurvature> {
    let m = u_dim(n);
    let arr = matrix
        .as_array()
        .ok_or_else(|| schema("`matrix` must be an array for u_operator"))?;
    let flat: Vec<f64> = if arr.first().is_some_and(Value::is_array) {
        if arr.len() != m {
            return Err(Error::SizeMismatch {
                field: "matrix rows".into(),
                expected: m,
                found: arr.len(),
            });
        }
        let mut out = Vec::with_capacity(m * m);
        for (r, row) in arr.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| schema(format!("`matrix[{r}]` must be an array")))?;
            if row.len() != m {
                return Err(Error::SizeMismatch {
                    field: format!("matrix[{r}]"),
                    expected: m,
                    found: row.len(),
                });
            }
            for (c, v) in row.iter().enumerate() {
                out.push(as_f64(v, &format!("matrix[{r}][{c}]"))?);
            }
        }
        out
    } else {
        if arr.len() != m * m {
            return Err(Error::SizeMismatch {
                field: "matrix".into(),
                expected: m * m,
                found: arr.len(),
            });
        }
        arr.iter()
            .enumerate()
            .map(|(i, v)| as_f64(v, &format!("matrix[{i}]")))
            .collect::<Result<_>>()?
    };
    let mat = DMatrix::from_row_slice(m, m, &flat);
    let scale = mat.abs().max().max(1.0);
    let defect = (&mat - mat.transpose()).abs().max();
    if defect > LOAD_TOL * scale {
        return Err(Error::NonSymmetricInput { defect });
    }
    KahlerCurvature::from_operator_matrix(n, &((&mat + mat.transpose()) * 0.5))
}

/// Entries {i,k,j,l,re,im} (1-based, i ≤ k, j ≤ l) of h((i,k),(j,l)); absent
/// entries are zero and a lone entry implies its conjugate-transposed partner.
fn parse_hermitian(n: usize, matrix: &Value) -> Result<KahlerCurvature> {
    let arr = matrix
        .as_array()
        .ok_or_else(|| schema("`matrix` must be a list of entries for hermitian_sym2"))?;
    let p = pair_count(n);
    let mut h: DMatrix<Option<C64>> = DMatrix::from_element(p, p, None);
    for (e, entry) in arr.iter().enumerate() {
        let obj = entry
            .as_object()
            .ok_or_else(|| schema(format!("`matrix[{e}]` must be an object")))?;
        let get = |name: &str| field(obj, name).map_err(|_| schema(format!("`matrix[{e}]` is missing `{name}`")));
        let i = as_index(get("i")?, &format!("matrix[{e}].i"), n)?;
        let k = as_index(get("k")?, &format!("matrix[{e}].k"), n)?;
        let j = as_index(get("j")?, &format!("matrix[{e}].j"), n)?;
        let l = as_index(get("l")?, &format!("matrix[{e}].l"), n)?;
        if i > k || j > l {
            return Err(schema(format!("`matrix[{e}]` must satisfy i ≤ k and j ≤ l")));
        }
        let re = as_f64(get("re")?, &format!("matrix[{e}].re"))?;
        let im = match obj.get("im") {
            None => 0.0,
            Some(v) => as_f64(v, &format!("matrix[{e}].im"))?,
        };
        let (r, c) = (pair_index(n, i, k), pair_index(n, j, l));
        if h[(r, c)].is_some() {
            return Err(schema(format!("`matrix[{e}]` repeats entry ({},{}),({},{})", i + 1, k + 1, j + 1, l + 1)));
        }
        h[(r, c)] = Some(C64::new(re, im));
    }
    let zero = C64::new(0.0, 0.0);
    let scale = h.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    let mut defect: f64 = 0.0;
    let full = DMatrix::from_fn(p, p, |r, c| match (h[(r, c)], h[(c, r)]) {
        (Some(a), Some(b)) => {
            defect = defect.max((a - b.conj()).norm());
            (a + b.conj()) * 0.5
        }
        (Some(a), None) => a,
        (None, Some(b)) => b.conj(),
        (None, None) => zero,
    });
    if defect > LOAD_TOL * scale {
        return Err(Error::NonHermitianInput { defect });
    }
    KahlerCurvature::from_hermitian(n, full)
}

/// Serialises to a `kco-v1` document. The output is deterministic.
pub fn to_json_string(r: &KahlerCurvature, representation: Representation, metadata: &Metadata) -> Result<String> {
    let n = r.n();
    let matrix = match representation {
        Representation::UOperator => {
            let m = r.operator();
            Value::Array(
                (0..m.nrows())
                    .map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect()))
                    .collect(),
            )
        }
        Representation::HermitianSym2 => {
            let h = r.herm();
            let mut entries = Vec::new();
            for row in 0..h.nrows() {
                for col in 0..h.ncols() {
                    let z = h[(row, col)];
                    if z == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let (i, k) = pair_from_index(n, row);
                    let (j, l) = pair_from_index(n, col);
                    entries.push(json!({
                        "i": i + 1, "k": k + 1, "j": j + 1, "l": l + 1, "re": z.re, "im": z.im
                    }));
                }
            }
            Value::Array(entries)
        }
    };
    let mut doc = Map::new();
    doc.insert("format".into(), json!(FORMAT));
    doc.insert("n".into(), json!(n));
    doc.insert("representation".into(), json!(representation.as_str()));
    doc.insert("basis_order".into(), json!(BASIS_ORDER));
    if !metadata.is_empty() {
        doc.insert("metadata".into(), serde_json::to_value(metadata)?);
    }
    doc.insert("matrix".into(), matrix);
    let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
    s.push('\n');
    Ok(s)
}

pub fn load_operator(path: impl AsRef<Path>) -> Result<OperatorFile> {
    from_json_str(&std::fs::read_to_string(path)?)
}

/// Saves in the `u_operator` representation.
pub fn save_operator(r: &KahlerCurvature, path: impl AsRef<Path>) -> Result<()> {
    save_operator_with(r, path, Representation::UOperator, &Metadata::default())
}

pub fn save_operator_with(
    r: &KahlerCurvature,
    path: impl AsRef<Path>,
    representation: Representation,
    metadata: &Metadata,
) -> Result<()> {
    std::fs::write(path, to_json_string(r, representation, metadata)?)?;
    Ok(())
}

/// Named model operators shipped as fixtures.
pub const MODEL_NAMES: [&str; 5] = ["cpn", "cpk_flat", "example_2pos", "example_optimality", "zero"];

/// Builds a named model. `n` is ignored by the two n = 2 examples; `k` is
/// required by `cpk_flat`; `epsilon` (default 1) parametrises `example_2pos`.
pub fn named_model(name: &str, n: usize, k: Option<usize>, epsilon: Option<f64>) -> Result<(KahlerCurvature, Metadata)> {
    let mut meta = Metadata {
        name: Some(name.to_string()),
        ..Metadata::default()
    };
    let r = match name {
        "cpn" => model_cpn(n)?,
        "cpk_flat" => {
            let k = k.ok_or_else(|| Error::InvalidArgument("cpk_flat needs k".into()))?;
            meta.k = Some(k);
            model_cp_k_flat(n, k)?
        }
        "example_2pos" => {
            let eps = epsilon.unwrap_or(1.0);
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidArgument(format!("ε = {eps} must be positive")));
            }
            let (plus, minus) = ([6.0, 0.0, 0.0], [6.0 + 2.0 * eps, -eps, -eps]);
            meta.epsilon = Some(eps);
            meta.mu_plus = Some(plus);
            meta.mu_minus = Some(minus);
            model_n2_from_mu(plus, minus)?
        }
        "example_optimality" => {
            let (plus, minus) = ([3.0, 0.0, 0.0], [-1.0, 1.0, 3.0]);
            meta.mu_plus = Some(plus);
            meta.mu_minus = Some(minus);
            model_n2_from_mu(plus, minus)?
        }
        "zero" => KahlerCurvature::zero(n)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown model `{other}` (expected one of {})",
                MODEL_NAMES.join(", ")
            )))
        }
    };
    Ok((r, meta))
}
