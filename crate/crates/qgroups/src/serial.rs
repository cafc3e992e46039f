//! Canonical JSON record formats for the crate's data types.
//!
//! Every emitter produces a canonical byte string: object keys in a fixed
//! order, map keys in numeric order, no timestamps, so serialize -> parse ->
//! serialize is byte-identical.  Parsing goes through `serde_json` and accepts
//! any field order.
//!
//! Formats:
//! - coefficient: `{"1": {"3": "1", "-1": "-1"}, "r2": {...}}` — optional keys
//!   `"1"`, `"r2"`, `"r3"`, `"r2r3"`, each mapping a v-exponent (as string) to
//!   a rational string `"p/q"`.
//! - square matrix: `{"dim": n, "entries": [{"row": i, "col": j, "coeff": ...}]}`
//!   with 1-based indices.
//! - two-leg matrix: same with `"row": [i, k]`, `"col": [j, l]`; three-leg
//!   matrices use 3-element index arrays.
//! - module: `{"cartan": {"roots", "gram", "d"}, "weights", "E", "F", "labels"}`.
//! - root-vector specs: list of `{"root", "qbeta_exponent", "E_word", "F_word"}`
//!   where the words are lists of `{"coeff", "word"}` terms with signed
//!   coefficients.

use crate::dbos::DBosReport;
use crate::minpoly::MinPolyResult;
use crate::qfield::{CoeffElem, FracElem, LaurentV, Rat};
use crate::repmod::{CartanData, ModuleData};
use crate::rmatrix::{RootTerm, RootVectorSpec};
use crate::tensor::{SparseSq, TensorMatrix, TripleMatrix};
use num::{One, Zero};
use serde_json::Value;
use std::fmt::Write as _;
use std::str::FromStr;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub enum ParseError {
    Json(serde_json::Error),
    Bad(String),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Json(e)
    }
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::Json(e) => write!(f, "invalid JSON: {e}"),
            ParseError::Bad(m) => write!(f, "invalid record: {m}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn bad(m: impl Into<String>) -> ParseError {
    ParseError::Bad(m.into())
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(v: &Value) -> Result<Rat, ParseError> {
    let s = v.as_str().ok_or_else(|| bad("rational must be a string"))?;
    Rat::from_str(s).map_err(|e| bad(format!("bad rational {s:?}: {e}")))
}

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

fn laurent_record(out: &mut String, l: &LaurentV) {
    out.push('{');
    let mut first = true;
    for (e, r) in &l.terms {
        if !first {
            out.push_str(", ");
        }
        first = false;
        let _ = write!(out, "\"{}\": \"{}\"", e, rat_string(r));
    }
    out.push('}');
}

pub fn coeff_record(c: &CoeffElem) -> String {
    let mut out = String::from("{");
    let mut first = true;
    for (key, part) in [("1", &c.c0), ("r2", &c.c2), ("r3", &c.c3), ("r2r3", &c.c23)] {
        if part.is_zero() {
            continue;
        }
        if !first {
            out.push_str(", ");
        }
        first = false;
        let _ = write!(out, "\"{key}\": ");
        laurent_record(&mut out, part);
    }
    out.push('}');
    out
}

fn parse_laurent(v: &Value) -> Result<LaurentV, ParseError> {
    let obj = v.as_object().ok_or_else(|| bad("Laurent part must be an object"))?;
    let mut l = LaurentV::zero();
    for (k, rv) in obj {
        let e: i64 = k.parse().map_err(|_| bad(format!("bad exponent key {k:?}")))?;
        let r = parse_rat(rv)?;
        if !r.is_zero() {
            l.terms.insert(e, r);
        }
    }
    Ok(l)
}

pub fn parse_coeff(v: &Value) -> Result<CoeffElem, ParseError> {
    let obj = v.as_object().ok_or_else(|| bad("coefficient must be an object"))?;
    let mut c = CoeffElem::zero();
    for (k, part) in obj {
        let slot = match k.as_str() {
            "1" => &mut c.c0,
            "r2" => &mut c.c2,
            "r3" => &mut c.c3,
            "r2r3" => &mut c.c23,
            other => return Err(bad(format!("unknown coefficient key {other:?}"))),
        };
        *slot = parse_laurent(part)?;
    }
    Ok(c)
}

pub fn frac_record(x: &FracElem) -> String {
    format!("{{\"num\": {}, \"den\": {}}}", coeff_record(&x.num), coeff_record(&x.den))
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

fn entry_line(out: &mut String, row: &[usize], col: &[usize], c: &CoeffElem) {
    let idx = |ix: &[usize]| {
        if ix.len() == 1 {
            ix[0].to_string()
        } else {
            format!("[{}]", ix.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
        }
    };
    let _ = write!(
        out,
        "    {{\"row\": {}, \"col\": {}, \"coeff\": {}}}",
        idx(row),
        idx(col),
        coeff_record(c)
    );
}

fn matrix_record<F>(n: usize, entries: &SparseSq, legs: usize, unflat: F) -> String
where
    F: Fn(usize) -> Vec<usize>,
{
    let _ = legs;
    let mut out = String::new();
    let _ = write!(out, "{{\n  \"dim\": {},\n  \"entries\": [", n);
    let mut first = true;
    for ((r, c), v) in &entries.entries {
        if !first {
            out.push(',');
        }
        first = false;
        out.push('\n');
        entry_line(&mut out, &unflat(*r), &unflat(*c), v);
    }
    if !first {
        out.push('\n');
        out.push_str("  ");
    }
    out.push_str("]\n}");
    out
}

pub fn sparse_to_json(m: &SparseSq) -> String {
    matrix_record(m.n, m, 1, |i| vec![i + 1])
}

pub fn tensor_to_json(m: &TensorMatrix) -> String {
    let d = m.dim;
    matrix_record(d, &m.mat, 2, move |i| vec![i / d + 1, i % d + 1])
}

pub fn triple_to_json(m: &TripleMatrix) -> String {
    let d = m.dim;
    matrix_record(d, &m.mat, 3, move |i| vec![i / (d * d) + 1, (i / d) % d + 1, i % d + 1])
}

fn parse_index(v: &Value, legs: usize, dim: usize) -> Result<usize, ParseError> {
    let parts: Vec<usize> = if legs == 1 {
        vec![v.as_u64().ok_or_else(|| bad("index must be an integer"))? as usize]
    } else {
        let arr = v.as_array().ok_or_else(|| bad("index must be an array"))?;
        if arr.len() != legs {
            return Err(bad(format!("index needs {legs} components")));
        }
        arr.iter()
            .map(|x| x.as_u64().map(|u| u as usize).ok_or_else(|| bad("index must be an integer")))
            .collect::<Result<_, _>>()?
    };
    let mut flat = 0usize;
    for p in parts {
        if p < 1 || p > dim {
            return Err(bad(format!("index component {p} out of range 1..={dim}")));
        }
        flat = flat * dim + (p - 1);
    }
    Ok(flat)
}

fn parse_matrix(s: &str, legs: usize) -> Result<(usize, SparseSq), ParseError> {
    let v: Value = serde_json::from_str(s)?;
    let obj = v.as_object().ok_or_else(|| bad("matrix must be an object"))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("matrix needs an integer \"dim\""))? as usize;
    let n = dim.pow(legs as u32);
    let mut m = SparseSq::zero(n);
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("matrix needs an \"entries\" array"))?;
    for e in entries {
        let eo = e.as_object().ok_or_else(|| bad("entry must be an object"))?;
        let r = parse_index(eo.get("row").ok_or_else(|| bad("entry needs \"row\""))?, legs, dim)?;
        let c = parse_index(eo.get("col").ok_or_else(|| bad("entry needs \"col\""))?, legs, dim)?;
        let coeff = parse_coeff(eo.get("coeff").ok_or_else(|| bad("entry needs \"coeff\""))?)?;
        m.set(r, c, coeff);
    }
    Ok((dim, m))
}

pub fn sparse_from_json(s: &str) -> Result<SparseSq, ParseError> {
    Ok(parse_matrix(s, 1)?.1)
}

pub fn tensor_from_json(s: &str) -> Result<TensorMatrix, ParseError> {
    let (dim, mat) = parse_matrix(s, 2)?;
    Ok(TensorMatrix { dim, mat })
}

pub fn triple_from_json(s: &str) -> Result<TripleMatrix, ParseError> {
    let (dim, mat) = parse_matrix(s, 3)?;
    Ok(TripleMatrix { dim, mat })
}

// ---------------------------------------------------------------------------
// Modules
// ---------------------------------------------------------------------------

fn rat_vec_record(v: &[Rat]) -> String {
    format!(
        "[{}]",
        v.iter().map(|r| format!("\"{}\"", rat_string(r))).collect::<Vec<_>>().join(", ")
    )
}

fn indent(block: &str, pad: &str) -> String {
    block.lines().collect::<Vec<_>>().join(&format!("\n{pad}"))
}

pub fn module_to_json(m: &ModuleData) -> String {
    let mut out = String::from("{\n  \"cartan\": {\n    \"roots\": [");
    out.push_str(
        &m.cartan.simple_roots.iter().map(|r| rat_vec_record(r)).collect::<Vec<_>>().join(", "),
    );
    out.push_str("],\n    \"gram\": [");
    out.push_str(&m.cartan.gram.iter().map(|r| rat_vec_record(r)).collect::<Vec<_>>().join(", "));
    out.push_str("],\n    \"d\": ");
    out.push_str(&rat_vec_record(&m.cartan.d));
    out.push_str("\n  },\n  \"weights\": [");
    out.push_str(&m.weights.iter().map(|w| rat_vec_record(w)).collect::<Vec<_>>().join(", "));
    out.push_str("],\n  \"E\": [");
    let mats = |list: &[SparseSq]| {
        list.iter().map(|e| indent(&sparse_to_json(e), "    ")).collect::<Vec<_>>().join(", ")
    };
    out.push_str(&mats(&m.e_act));
    out.push_str("],\n  \"F\": [");
    out.push_str(&mats(&m.f_act));
    out.push_str("],\n  \"labels\": [");
    out.push_str(
        &m.labels
            .iter()
            .map(|l| serde_json::to_string(l).expect("string serializes"))
            .collect::<Vec<_>>()
            .join(", "),
    );
    out.push_str("]\n}");
    out
}

fn parse_rat_vec(v: &Value) -> Result<Vec<Rat>, ParseError> {
    v.as_array()
        .ok_or_else(|| bad("expected an array of rationals"))?
        .iter()
        .map(parse_rat)
        .collect()
}

pub fn module_from_json(s: &str) -> Result<ModuleData, ParseError> {
    let v: Value = serde_json::from_str(s)?;
    let obj = v.as_object().ok_or_else(|| bad("module must be an object"))?;
    let cart = obj
        .get("cartan")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("module needs a \"cartan\" object"))?;
    let roots: Vec<Vec<Rat>> = cart
        .get("roots")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("cartan needs \"roots\""))?
        .iter()
        .map(parse_rat_vec)
        .collect::<Result<_, _>>()?;
    let gram: Vec<Vec<Rat>> = cart
        .get("gram")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("cartan needs \"gram\""))?
        .iter()
        .map(parse_rat_vec)
        .collect::<Result<_, _>>()?;
    let d = parse_rat_vec(cart.get("d").ok_or_else(|| bad("cartan needs \"d\""))?)?;
    let cartan = CartanData { rank: roots.len(), simple_roots: roots, gram, d };
    cartan.check().map_err(ParseError::Bad)?;
    let weights: Vec<Vec<Rat>> = obj
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("module needs \"weights\""))?
        .iter()
        .map(parse_rat_vec)
        .collect::<Result<_, _>>()?;
    let dim = weights.len();
    let parse_mats = |key: &str| -> Result<Vec<SparseSq>, ParseError> {
        obj.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| bad(format!("module needs {key:?}")))?
            .iter()
            .map(|mv| {
                let m = sparse_from_json(&mv.to_string())?;
                if m.n != dim {
                    return Err(bad(format!("{key} matrix dimension {} != {dim}", m.n)));
                }
                Ok(m)
            })
            .collect()
    };
    let e_act = parse_mats("E")?;
    let f_act = parse_mats("F")?;
    if e_act.len() != cartan.rank || f_act.len() != cartan.rank {
        return Err(bad("one E and one F matrix per simple root required"));
    }
    let labels: Vec<String> = obj
        .get("labels")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("module needs \"labels\""))?
        .iter()
        .map(|l| l.as_str().map(String::from).ok_or_else(|| bad("label must be a string")))
        .collect::<Result<_, _>>()?;
    if labels.len() != dim {
        return Err(bad("one label per basis vector required"));
    }
    Ok(ModuleData { cartan, dim, weights, e_act, f_act, labels })
}

// ---------------------------------------------------------------------------
// Root-vector specs
// ---------------------------------------------------------------------------

fn term_record(t: &RootTerm) -> String {
    format!(
        "{{\"coeff\": {}, \"word\": [{}]}}",
        coeff_record(&t.coeff),
        t.word.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
    )
}

pub fn specs_to_json(specs: &[RootVectorSpec]) -> String {
    let mut out = String::from("[");
    let mut first = true;
    for s in specs {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str("\n  {\"root\": ");
        out.push_str(&rat_vec_record(&s.root));
        // q_beta = q^{qbeta_exponent} with v = q^{1/4}
        let _ = write!(out, ", \"qbeta_exponent\": \"{}\"", rat_string(&crate::qfield::rat_frac(s.qbeta_vstep, 4)));
        let words = |w: &[RootTerm]| {
            w.iter().map(term_record).collect::<Vec<_>>().join(", ")
        };
        let _ = write!(out, ",\n   \"E_word\": [{}]", words(&s.e_terms));
        let _ = write!(out, ",\n   \"F_word\": [{}]}}", words(&s.f_terms));
    }
    out.push_str("\n]");
    out
}

fn parse_term(v: &Value) -> Result<RootTerm, ParseError> {
    let obj = v.as_object().ok_or_else(|| bad("word term must be an object"))?;
    let coeff = parse_coeff(obj.get("coeff").ok_or_else(|| bad("term needs \"coeff\""))?)?;
    let word = obj
        .get("word")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("term needs a \"word\" array"))?
        .iter()
        .map(|x| x.as_u64().map(|u| u as usize).ok_or_else(|| bad("word letter must be an integer")))
        .collect::<Result<_, _>>()?;
    Ok(RootTerm { coeff, word })
}

pub fn specs_from_json(s: &str) -> Result<Vec<RootVectorSpec>, ParseError> {
    let v: Value = serde_json::from_str(s)?;
    let arr = v.as_array().ok_or_else(|| bad("root-vector file must be a list"))?;
    let mut out = Vec::new();
    for sv in arr {
        let obj = sv.as_object().ok_or_else(|| bad("spec must be an object"))?;
        let root = parse_rat_vec(obj.get("root").ok_or_else(|| bad("spec needs \"root\""))?)?;
        let qe = parse_rat(
            obj.get("qbeta_exponent").ok_or_else(|| bad("spec needs \"qbeta_exponent\""))?,
        )?;
        let four = &qe * crate::qfield::rat_int(4);
        if !four.is_integer() {
            return Err(bad("qbeta_exponent must be a quarter integer"));
        }
        use num::ToPrimitive;
        let qbeta_vstep = four
            .to_integer()
            .to_i64()
            .ok_or_else(|| bad("qbeta_exponent out of range"))?;
        let parse_words = |key: &str| -> Result<Vec<RootTerm>, ParseError> {
            obj.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(format!("spec needs {key:?}")))?
                .iter()
                .map(parse_term)
                .collect()
        };
        out.push(RootVectorSpec {
            root,
            qbeta_vstep,
            e_terms: parse_words("E_word")?,
            f_terms: parse_words("F_word")?,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Result records (emit-only)
// ---------------------------------------------------------------------------

pub fn minpoly_to_json(mp: &MinPolyResult) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\n  \"degree\": {},\n  \"coefficients\": [", mp.degree);
    out.push_str(&mp.coefficients.iter().map(frac_record).collect::<Vec<_>>().join(", "));
    out.push_str("],\n  \"eigenvalues\": [");
    out.push_str(&mp.eigenvalues.iter().map(coeff_record).collect::<Vec<_>>().join(", "));
    out.push_str("],\n  \"eigenvalues_rendered\": [");
    out.push_str(
        &mp.eigenvalues
            .iter()
            .map(|x| format!("\"{x}\""))
            .collect::<Vec<_>>()
            .join(", "),
    );
    out.push_str("],\n  \"elementary_symmetric\": [");
    out.push_str(&mp.elementary_symmetric.iter().map(frac_record).collect::<Vec<_>>().join(", "));
    out.push_str("]\n}");
    out
}

pub fn report_to_json(rep: &DBosReport) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\n  \"lambda\": {},\n  \"q_star\": {},\n", coeff_record(&rep.lambda), coeff_record(&rep.q_star));
    let _ = write!(out, "  \"target_root_length_sq\": \"{}\",\n", rat_string(&rep.target_root_length_sq));
    let _ = write!(out, "  \"theta\": {},\n", rat_vec_record(&rep.theta));
    let _ = write!(out, "  \"theta_self\": \"{}\",\n", rat_string(&rep.theta_self));
    out.push_str("  \"cartan_matrix\": [");
    out.push_str(
        &rep.cartan_matrix
            .iter()
            .map(|row| {
                format!("[{}]", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            })
            .collect::<Vec<_>>()
            .join(", "),
    );
    out.push_str("],\n  \"relations\": [\n");
    out.push_str(
        &rep.relations
            .iter()
            .map(|l| format!("    {}", serde_json::to_string(l).expect("string serializes")))
            .collect::<Vec<_>>()
            .join(",\n"),
    );
    out.push_str("\n  ]\n}");
    out
}
