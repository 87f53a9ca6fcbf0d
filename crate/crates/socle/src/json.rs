//! Wire formats.
//!
//! Elements travel as {"schema":1,"block_dims":[...],"blocks":[...]}
//! with each block row-major and every complex entry an [re, im] pair.
//! Preserver forms travel as {"schema":1,"u":element,"perm":[...],
//! "flags":["I"|"T",...],"p":[matrix,...]}. Both formats are normative
//! for the command line. The schema field is optional on input but
//! must be 1 when present; unknown fields are tolerated on input and
//! never emitted.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, BlockAlgebra, Tolerances};
use crate::error::{Error, Result};
use crate::mat::{C64, Mat};
use crate::preserver::{MapKind, PreserverForm};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

fn require_current_schema(schema: u32, context: &str) -> Result<()> {
    if schema != SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "{context}: schema version {schema} is not supported (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
pub struct ElementJson {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub block_dims: Vec<usize>,
    pub blocks: Vec<MatrixJson>,
}

#[derive(Serialize, Deserialize)]
pub struct FormJson {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub u: ElementJson,
    pub perm: Vec<usize>,
    pub flags: Vec<MapKind>,
    pub p: Vec<MatrixJson>,
}

pub fn matrix_to_json(m: &Mat) -> MatrixJson {
    (0..m.dim())
        .map(|r| (0..m.dim()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson, context: &str) -> Result<Mat> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Schema(format!("{context}: empty matrix")));
    }
    let mut m = Mat::zeros(n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Schema(format!(
                "{context}: row {r} has {} entries in a {n}x{n} matrix",
                row.len()
            )));
        }
        for (c, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Schema(format!("{context}: non-finite entry at ({r},{c})")));
            }
            m[(r, c)] = C64::new(re, im);
        }
    }
    Ok(m)
}

pub fn element_to_json(x: &AlgebraElement) -> ElementJson {
    ElementJson {
        schema: SCHEMA_VERSION,
        block_dims: x.algebra().block_dims().to_vec(),
        blocks: x.blocks().iter().map(matrix_to_json).collect(),
    }
}

pub fn element_to_string(x: &AlgebraElement) -> String {
    serde_json::to_string(&element_to_json(x)).expect("element serialization cannot fail")
}

pub fn element_from_json(parsed: &ElementJson) -> Result<AlgebraElement> {
    require_current_schema(parsed.schema, "element")?;
    let alg = BlockAlgebra::new(parsed.block_dims.clone())?;
    if parsed.blocks.len() != parsed.block_dims.len() {
        return Err(Error::Schema(format!(
            "block_dims lists {} blocks but blocks has {}",
            parsed.block_dims.len(),
            parsed.blocks.len()
        )));
    }
    let mut blocks = Vec::with_capacity(parsed.blocks.len());
    for (i, rows) in parsed.blocks.iter().enumerate() {
        let m = matrix_from_json(rows, &format!("block {i}"))?;
        if m.dim() != parsed.block_dims[i] {
            return Err(Error::Schema(format!(
                "block {i} is {}x{} but block_dims says {}",
                m.dim(),
                m.dim(),
                parsed.block_dims[i]
            )));
        }
        blocks.push(m);
    }
    alg.from_blocks(blocks)
}

pub fn element_from_str(s: &str) -> Result<AlgebraElement> {
    let parsed: ElementJson = serde_json::from_str(s)?;
    element_from_json(&parsed)
}

pub fn form_to_json(form: &PreserverForm) -> FormJson {
    FormJson {
        schema: SCHEMA_VERSION,
        u: element_to_json(form.unit()),
        perm: form.block_perm().to_vec(),
        flags: form.flags().to_vec(),
        p: form.similarities().iter().map(matrix_to_json).collect(),
    }
}

pub fn form_to_string(form: &PreserverForm) -> String {
    serde_json::to_string(&form_to_json(form)).expect("form serialization cannot fail")
}

pub fn form_from_str(s: &str, tol: &Tolerances) -> Result<PreserverForm> {
    let parsed: FormJson = serde_json::from_str(s)?;
    require_current_schema(parsed.schema, "form")?;
    let u = element_from_json(&parsed.u)?;
    let similarities = parsed
        .p
        .iter()
        .enumerate()
        .map(|(i, rows)| matrix_from_json(rows, &format!("similarity {i}")))
        .collect::<Result<Vec<_>>>()?;
    PreserverForm::new(u, parsed.perm, parsed.flags, similarities, tol)
}
