//! Browser bindings: knit an AR quiver, read off cohomology, ask for an Auslander verdict.
//!
//! Every entry point takes the command-line JSON document as text and returns JSON.

use dgx_core::arknit::{fingerprint, knit, ArQuiver, KnitStatus};
use dgx_core::extmod::is_auslander;
use dgx_core::io::{self, FieldSpec, InputDocument};
use dgx_core::{DgModule, Field, Fp, Rational};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

pub const A2: &str = include_str!("../../cli/tests/fixtures/a2.json");
pub const GAMMA: &str = include_str!("../../cli/tests/fixtures/gamma_example.json");

#[derive(Clone, Copy)]
enum Op {
    Knit(usize),
    Cohomology,
    Auslander,
}

fn dispatch(text: &str, d: i32, op: Op) -> Result<Value, String> {
    let doc = io::parse_document(text).map_err(|e| e.to_string())?;
    let d = if d > 0 { d } else { doc.d.ok_or("no window size")? };
    match doc.field {
        FieldSpec::Q => run::<Rational>(&doc, d, op),
        FieldSpec::Fp(2) => run::<Fp<2>>(&doc, d, op),
        FieldSpec::Fp(3) => run::<Fp<3>>(&doc, d, op),
        FieldSpec::Fp(5) => run::<Fp<5>>(&doc, d, op),
        FieldSpec::Fp(7) => run::<Fp<7>>(&doc, d, op),
        FieldSpec::Fp(p) => Err(format!("the demo runs over Q, F2, F3, F5 and F7, not F{p}")),
    }
}

fn run<F: Field>(doc: &InputDocument, d: i32, op: Op) -> Result<Value, String> {
    let alg = io::build_algebra::<F>(&doc.algebra, d, true).map_err(|e| e.to_string())?;
    Ok(match op {
        Op::Knit(max) => {
            let ar = knit(&alg, d, max).map_err(|e| e.to_string())?;
            let tq = ar.translation_quiver();
            json!({
                "status": ar.status,
                "complete": ar.status == KnitStatus::Complete,
                "count": ar.vertices.len(),
                "labels": labels(&ar),
                "svg": svg(&ar),
                "dot": tq.to_dot(),
            })
        }
        Op::Cohomology => {
            let reg = DgModule::regular(&alg);
            json!({"dimension": alg.dim(), "cohomology": reg.cohomology_dims(), "by_vertex": reg.cohomology_vector()})
        }
        Op::Auslander => json!(is_auslander(&alg, d)),
    })
}

fn labels<F: Field>(ar: &ArQuiver<F>) -> Vec<String> {
    ar.vertices
        .iter()
        .map(|v| {
            io::label(&v.obj).unwrap_or_else(|| {
                // Top cohomology first, one digit string per degree.
                let rows: Vec<String> = fingerprint(&v.obj)
                    .iter()
                    .map(|row| row.iter().map(|n| n.to_string()).collect::<String>())
                    .collect();
                rows.join("|")
            })
        })
        .collect()
}

/// Columns by longest arrow path from a source, rows in knitting order.
fn svg<F: Field>(ar: &ArQuiver<F>) -> String {
    let n = ar.vertices.len();
    let mut col = vec![0usize; n];
    for _ in 0..n {
        for a in &ar.arrows {
            col[a.dst] = col[a.dst].max(col[a.src] + 1);
        }
    }
    let mut row = vec![0usize; n];
    let mut used = std::collections::HashMap::new();
    for v in 0..n {
        let r = used.entry(col[v]).or_insert(0usize);
        row[v] = *r;
        *r += 1;
    }
    let (dx, dy) = (90.0, 60.0);
    let pos = |v: usize| (40.0 + dx * col[v] as f64, 30.0 + dy * row[v] as f64);
    let width = 80.0 + dx * col.iter().max().copied().unwrap_or(0) as f64;
    let height = 60.0 + dy * (used.values().max().copied().unwrap_or(1) as f64 - 1.0);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" font-family=\"monospace\" font-size=\"12\">\
         <defs><marker id=\"h\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">\
         <path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>"
    );
    let line = |a: (f64, f64), b: (f64, f64), dash: &str| {
        let (ux, uy) = (b.0 - a.0, b.1 - a.1);
        let len = (ux * ux + uy * uy).sqrt().max(1.0);
        let (ox, oy) = (18.0 * ux / len, 18.0 * uy / len);
        format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"{dash}/>",
            a.0 + ox,
            a.1 + oy,
            b.0 - ox,
            b.1 - oy
        )
    };
    for a in &ar.arrows {
        s.push_str(&line(pos(a.src), pos(a.dst), " marker-end=\"url(#h)\""));
    }
    for m in &ar.meshes {
        s.push_str(&line(pos(m.end), pos(m.start), " stroke-dasharray=\"4 3\" stroke-opacity=\"0.5\""));
    }
    for (v, text) in labels(ar).iter().enumerate() {
        let (x, y) = pos(v);
        s.push_str(&format!("<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{text}</text>", y + 4.0));
    }
    s.push_str("</svg>");
    s
}

fn answer(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

/// Knit the AR quiver; `d = 0` takes the window from the document.
#[wasm_bindgen]
pub fn knit_quiver(doc: &str, d: i32, max_objects: usize) -> Result<String, JsError> {
    answer(dispatch(doc, d, Op::Knit(max_objects)))
}

#[wasm_bindgen]
pub fn algebra_cohomology(doc: &str, d: i32) -> Result<String, JsError> {
    answer(dispatch(doc, d, Op::Cohomology))
}

#[wasm_bindgen]
pub fn auslander_verdict(doc: &str, d: i32) -> Result<String, JsError> {
    answer(dispatch(doc, d, Op::Auslander))
}

#[wasm_bindgen]
pub fn example(name: &str) -> String {
    match name {
        "gamma" => GAMMA.into(),
        _ => A2.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knits_the_examples() {
        let v = dispatch(A2, 2, Op::Knit(50)).unwrap();
        assert_eq!(v["count"], 6);
        assert!(v["svg"].as_str().unwrap().starts_with("<svg"));
        let v = dispatch(GAMMA, 0, Op::Knit(100)).unwrap();
        assert_eq!(v["count"], 37);
    }

    #[test]
    fn verdicts() {
        assert_eq!(dispatch(GAMMA, 0, Op::Auslander).unwrap()["is_auslander"], true);
        assert_eq!(dispatch(A2, 2, Op::Auslander).unwrap()["is_auslander"], false);
        assert_eq!(dispatch(A2, 1, Op::Cohomology).unwrap()["cohomology"]["0"], 3);
        assert!(dispatch("{}", 1, Op::Cohomology).is_err());
    }
}
