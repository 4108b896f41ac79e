//! JSON documents: input quivers with optional module presentations, and reports.
//!
//! Paths are arrays of arrow names in application order; coefficients are strings
//! parsed by the chosen field, so `"-1/2"` is fine over `Q` and over `F7`.

use crate::algebra::{Alg, DgAlgebra, DgQuiver};
use crate::field::{Field, SUPPORTED_PRIMES};
use crate::linalg::SVec;
use crate::pvd::{find_iso, Obj, PvdObject};
use crate::semifree::{Gen, Semifree};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub const REPORT_SCHEMA: &str = "dgx-report/1";

/// `"Q"` or `{"Fp": p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSpec {
    Q,
    Fp(u64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => write!(f, "Q"),
            FieldSpec::Fp(p) => write!(f, "F{p}"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = String;
    /// Accepts `Q`, `F7` or `Fp7`.
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "Q" {
            return Ok(FieldSpec::Q);
        }
        let digits = s.strip_prefix("Fp").or_else(|| s.strip_prefix('F')).ok_or_else(|| format!("unknown field {s}"))?;
        let p: u64 = digits.parse().map_err(|_| format!("unknown field {s}"))?;
        FieldSpec::Fp(p).check()
    }
}

impl FieldSpec {
    pub fn check(self) -> Result<Self, String> {
        match self {
            FieldSpec::Fp(p) if !SUPPORTED_PRIMES.contains(&p) => {
                Err(format!("F{p} is not supported; primes available: {SUPPORTED_PRIMES:?}"))
            }
            _ => Ok(self),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub field: FieldSpec,
    pub algebra: QuiverDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDoc {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<DiffDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub name: String,
    pub source: String,
    pub target: String,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffDoc {
    pub arrow: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: String,
    pub path: Vec<String>,
}

/// A semifree presentation: `d(g_from)` has component `Σ coeff · path` on `g_to`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub name: String,
    pub generators: Vec<GenDoc>,
    #[serde(default)]
    pub differential: Vec<ModDiffDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenDoc {
    pub vertex: String,
    pub shift: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModDiffDoc {
    pub from: usize,
    pub to: usize,
    pub terms: Vec<TermDoc>,
}

/// An input problem, located in the document.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{location}: {message}")]
pub struct InputError {
    pub location: String,
    pub message: String,
}

fn err(location: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError { location: location.into(), message: message.into() }
}

pub fn parse_document(text: &str) -> Result<InputDocument, InputError> {
    let doc: InputDocument =
        serde_json::from_str(text).map_err(|e| err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    doc.field.check().map_err(|m| err("field", m))?;
    if let Some(d) = doc.d {
        if d < 1 {
            return Err(err("d", format!("must be at least 1, got {d}")));
        }
    }
    Ok(doc)
}

fn coeff<F: Field>(s: &str, at: &str) -> Result<F, InputError> {
    F::parse(s).ok_or_else(|| err(at, format!("cannot read coefficient {s:?} in {}", F::name())))
}

pub fn build_quiver<F: Field>(doc: &QuiverDoc) -> Result<DgQuiver<F>, InputError> {
    let mut vidx = HashMap::new();
    for (i, v) in doc.vertices.iter().enumerate() {
        if vidx.insert(v.as_str(), i).is_some() {
            return Err(err(format!("algebra.vertices[{i}]"), format!("duplicate vertex {v}")));
        }
    }
    let mut q = DgQuiver::new(&doc.vertices.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    let mut aidx = HashMap::new();
    for (i, a) in doc.arrows.iter().enumerate() {
        let at = format!("algebra.arrows[{i}]");
        if aidx.insert(a.name.as_str(), i).is_some() {
            return Err(err(at, format!("duplicate arrow {}", a.name)));
        }
        for end in [&a.source, &a.target] {
            if !vidx.contains_key(end.as_str()) {
                return Err(err(&at, format!("arrow {} uses unknown vertex {end}", a.name)));
            }
        }
        if a.degree > 0 {
            return Err(err(at, format!("arrow {} has positive degree {}", a.name, a.degree)));
        }
        q = q.arrow(&a.name, &a.source, &a.target, a.degree);
    }
    let mut seen = vec![false; doc.arrows.len()];
    for (i, dd) in doc.differential.iter().enumerate() {
        let at = format!("algebra.differential[{i}]");
        let a = *aidx.get(dd.arrow.as_str()).ok_or_else(|| err(&at, format!("unknown arrow {}", dd.arrow)))?;
        if std::mem::replace(&mut seen[a], true) {
            return Err(err(at, format!("d({}) given twice", dd.arrow)));
        }
        let mut terms = Vec::new();
        for (t, term) in dd.terms.iter().enumerate() {
            let tat = format!("{at}.terms[{t}]");
            let c = coeff::<F>(&term.coeff, &tat)?;
            let mut path = Vec::new();
            for name in &term.path {
                path.push(*aidx.get(name.as_str()).ok_or_else(|| err(&tat, format!("unknown arrow {name} in d({})", dd.arrow)))?);
            }
            if path.is_empty() {
                return Err(err(tat, format!("d({}) has an empty path", dd.arrow)));
            }
            terms.push((c, path));
        }
        q.differential.push((a, terms));
    }
    Ok(q)
}

/// Build and validate the algebra; `reduce` passes to the quotient by `τ≤-d`
/// when the algebra is not already `d`-truncated.
pub fn build_algebra<F: Field>(doc: &QuiverDoc, d: i32, reduce: bool) -> Result<Alg<F>, InputError> {
    let q = build_quiver::<F>(doc)?;
    let alg = DgAlgebra::build(&q).map_err(|e| err("algebra", e.to_string()))?;
    if alg.is_truncated(d) {
        return Ok(Arc::new(alg));
    }
    if reduce {
        return Ok(Arc::new(alg.reduce_to_truncated(d)));
    }
    Err(err("algebra", format!("cohomology reaches degree -{d} or below; the algebra is not {d}-truncated (rerun with --reduce)")))
}

/// Basis element of `alg` spelled by an arrow path; the empty path is `e_v`.
fn path_elem<F: Field>(alg: &DgAlgebra<F>, names: &[String], v: usize, at: &str) -> Result<usize, InputError> {
    if names.is_empty() {
        return Ok(alg.idem[v]);
    }
    // Path basis elements are named by their arrows joined with dots.
    let want = names.join(".");
    (0..alg.dim())
        .find(|&i| !alg.basis[i].idempotent && alg.basis[i].name == want)
        .ok_or_else(|| err(at, format!("path {want} is zero or not a basis path")))
}

/// The object of the extended module category presented by `doc`.
pub fn build_module<F: Field>(alg: &Alg<F>, doc: &ModuleDoc, d: i32, at: &str) -> Result<Obj<F>, InputError> {
    let vidx = |name: &str, at: &str| -> Result<usize, InputError> {
        alg.vertices.iter().position(|v| v == name).ok_or_else(|| err(at, format!("unknown vertex {name}")))
    };
    let mut gens = Vec::new();
    for (i, g) in doc.generators.iter().enumerate() {
        let v = vidx(&g.vertex, &format!("{at}.generators[{i}]"))?;
        if g.shift < 0 || g.shift > d {
            return Err(err(format!("{at}.generators[{i}]"), format!("shift {} outside 0..={d}", g.shift)));
        }
        gens.push(Gen { vertex: v, shift: g.shift });
    }
    let mut cols: Vec<Vec<(usize, SVec<F>)>> = vec![vec![]; gens.len()];
    for (i, e) in doc.differential.iter().enumerate() {
        let eat = format!("{at}.differential[{i}]");
        if e.from >= gens.len() || e.to >= gens.len() {
            return Err(err(eat, "generator index out of range"));
        }
        let mut terms = Vec::new();
        for (t, term) in e.terms.iter().enumerate() {
            let tat = format!("{eat}.terms[{t}]");
            terms.push((path_elem(alg, &term.path, gens[e.to].vertex, &tat)?, coeff::<F>(&term.coeff, &tat)?));
        }
        cols[e.from].push((e.to, SVec::from_terms(terms)));
    }
    let pres = Semifree::new(alg.clone(), gens, cols);
    pres.validate().map_err(|m| err(at, m))?;
    let (x, _) = pres.module().tau_gt(-d);
    PvdObject::from_module(&x, d).map_err(|e| err(at, e.to_string()))
}

/// The document of a quiver, with coefficients printed by the field.
pub fn quiver_document<F: Field>(q: &DgQuiver<F>, field: FieldSpec, d: Option<i32>) -> InputDocument {
    let name = |a: usize| q.arrows[a].name.clone();
    InputDocument {
        field,
        algebra: QuiverDoc {
            vertices: q.vertices.clone(),
            arrows: q
                .arrows
                .iter()
                .map(|a| ArrowDoc {
                    name: a.name.clone(),
                    source: q.vertices[a.source].clone(),
                    target: q.vertices[a.target].clone(),
                    degree: a.degree,
                })
                .collect(),
            differential: q
                .differential
                .iter()
                .map(|(a, terms)| DiffDoc {
                    arrow: name(*a),
                    terms: terms
                        .iter()
                        .map(|(c, p)| TermDoc { coeff: c.to_string(), path: p.iter().map(|&b| name(b)).collect() })
                        .collect(),
                })
                .collect(),
        },
        d,
        modules: vec![],
    }
}

/// A short name such as `S2`, `P1[1]` or `I3` when `x` is a shifted simple,
/// projective or injective; `None` otherwise.
pub fn label<F: Field>(x: &Obj<F>) -> Option<String> {
    let (alg, d) = (&x.alg, x.d);
    let cv = x.cohomology_vector();
    let shift = match cv.iter().filter(|(_, v)| v.iter().any(|&n| n > 0)).map(|(i, _)| -i).collect::<Vec<_>>()[..] {
        [s] => s,
        _ => return None,
    };
    for (tag, make) in [
        ("S", PvdObject::simple as fn(&Alg<F>, usize, i32) -> Obj<F>),
        ("P", PvdObject::projective),
        ("I", PvdObject::injective),
    ] {
        for v in 0..alg.n_vertices() {
            let base = make(alg, v, d);
            let dims = base.xmod.cohomology_dims();
            if dims.iter().any(|(&i, &n)| n > 0 && i != 0) {
                continue;
            }
            let Ok(y) = PvdObject::from_module(&base.xmod.shift(shift), d) else { continue };
            if find_iso(x, &y).is_some() {
                let s = if shift == 0 { String::new() } else { format!("[{shift}]") };
                return Some(format!("{tag}{}{s}", alg.vertices[v]));
            }
        }
    }
    None
}

/// Report envelope shared by all commands.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub command: String,
    pub input: String,
    pub field: String,
    pub d: i32,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<u128>,
    pub results: serde_json::Value,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};

    const A2: &str = r#"{"field": "Q", "algebra": {"vertices": ["1", "2"], "arrows": [{"name": "a", "source": "1", "target": "2", "degree": 0}]}, "d": 2}"#;

    #[test]
    fn field_specs() {
        assert_eq!("Q".parse::<FieldSpec>(), Ok(FieldSpec::Q));
        assert_eq!("F7".parse::<FieldSpec>(), Ok(FieldSpec::Fp(7)));
        assert_eq!("Fp101".parse::<FieldSpec>(), Ok(FieldSpec::Fp(101)));
        assert!("F8".parse::<FieldSpec>().is_err());
        assert_eq!(serde_json::to_string(&FieldSpec::Fp(5)).unwrap(), r#"{"Fp":5}"#);
    }

    #[test]
    fn a2_parses_and_labels() {
        let doc = parse_document(A2).unwrap();
        let alg = build_algebra::<Rational>(&doc.algebra, 2, false).unwrap();
        assert_eq!(alg.dim(), 3);
        let p1 = PvdObject::projective(&alg, 0, 2);
        assert_eq!(label(&p1).as_deref(), Some("P1"));
        let s1 = PvdObject::simple(&alg, 0, 2);
        let s1_shift = PvdObject::from_module(&s1.xmod.shift(1), 2).unwrap();
        assert_eq!(label(&s1_shift).as_deref(), Some("S1[1]"));
    }

    #[test]
    fn errors_are_located() {
        let e = parse_document(r#"{"field": "Q", "algebra": {"vertices": []}, "d": 0}"#).unwrap_err();
        assert_eq!(e.location, "d");
        let doc = parse_document(r#"{"field": "Q", "algebra": {"vertices": []}}"#).unwrap();
        let e = build_algebra::<Rational>(&doc.algebra, 1, false).unwrap_err();
        assert!(e.message.contains("unit"), "{e}");
        let bad = r#"{"field": "Q", "algebra": {"vertices": ["1", "2", "3"],
            "arrows": [{"name": "a", "source": "1", "target": "2", "degree": 0},
                       {"name": "b", "source": "2", "target": "3", "degree": 0},
                       {"name": "h2", "source": "1", "target": "3", "degree": -2}],
            "differential": [{"arrow": "h2", "terms": [{"coeff": "1", "path": ["a", "b"]}]}]}}"#;
        let doc = parse_document(bad).unwrap();
        let e = build_algebra::<Rational>(&doc.algebra, 2, false).unwrap_err();
        assert!(e.to_string().contains("h2"), "{e}");
        assert!(parse_document("{").is_err());
    }

    #[test]
    fn modules_from_presentations() {
        let text = r#"{"field": {"Fp": 5}, "algebra": {"vertices": ["1", "2"], "arrows": [{"name": "a", "source": "1", "target": "2", "degree": 0}]},
            "modules": [{"name": "S1", "generators": [{"vertex": "1", "shift": 0}, {"vertex": "2", "shift": 1}],
                         "differential": [{"from": 1, "to": 0, "terms": [{"coeff": "1", "path": ["a"]}]}]}]}"#;
        let doc = parse_document(text).unwrap();
        let alg = build_algebra::<Fp<5>>(&doc.algebra, 2, false).unwrap();
        let m = build_module(&alg, &doc.modules[0], 2, "modules[0]").unwrap();
        assert_eq!(label(&m).as_deref(), Some("S1"));
    }

    #[test]
    fn emitted_documents_reparse() {
        let q = crate::corpus::gamma_a2::<Rational>();
        let doc = quiver_document(&q, FieldSpec::Q, Some(2));
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back = parse_document(&text).unwrap();
        assert_eq!(back, doc);
        let a = build_algebra::<Rational>(&back.algebra, 2, false).unwrap();
        assert_eq!(*a, DgAlgebra::build(&q).unwrap());
    }
}
