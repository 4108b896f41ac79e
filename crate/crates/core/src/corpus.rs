//! Small DG quivers used by tests, the CLI and the demo.

use crate::algebra::DgQuiver;
use crate::field::Field;

/// The ground field: one vertex, no arrows.
pub fn point<F: Field>() -> DgQuiver<F> {
    DgQuiver::new(&["1"])
}

/// Linearly oriented `A_n` in degree 0: `1 → 2 → … → n`.
pub fn linear_a<F: Field>(n: usize) -> DgQuiver<F> {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut q = DgQuiver::new(&refs);
    for i in 1..n {
        q = q.arrow(&format!("a{i}"), &names[i - 1], &names[i], 0);
    }
    q
}

/// The A2 quiver `1 → 2` with arrow `a`.
pub fn a2<F: Field>() -> DgQuiver<F> {
    DgQuiver::new(&["1", "2"]).arrow("a", "1", "2", 0)
}

/// The six-vertex DG quiver presenting the Auslander algebra of `H^2` for A2:
/// degree-0 arrows a..e along the zigzag, degree -1 arrows with mesh differentials.
pub fn gamma_a2<F: Field>() -> DgQuiver<F> {
    DgQuiver::new(&["1", "2", "3", "4", "5", "6"])
        .arrow("a", "1", "2", 0)
        .arrow("b", "2", "3", 0)
        .arrow("c", "3", "4", 0)
        .arrow("d", "4", "5", 0)
        .arrow("e", "5", "6", 0)
        .arrow("h2", "1", "3", -1)
        .arrow("h1", "2", "4", -1)
        .arrow("h4", "3", "5", -1)
        .arrow("h3", "4", "6", -1)
        .diff("h2", &[(1, &["a", "b"])])
        .diff("h1", &[(1, &["b", "c"])])
        .diff("h4", &[(1, &["c", "d"])])
        .diff("h3", &[(1, &["d", "e"])])
}

/// Small DG quivers for property checks, with short names.
pub fn property_corpus<F: Field>() -> Vec<(&'static str, DgQuiver<F>)> {
    let three = || DgQuiver::new(&["1", "2", "3"]);
    vec![
        ("point", point()),
        ("a2", a2()),
        ("a3", linear_a(3)),
        ("a3-sink", three().arrow("a", "1", "2", 0).arrow("b", "3", "2", 0)),
        ("a3-source", three().arrow("a", "2", "1", 0).arrow("b", "2", "3", 0)),
        ("a4", linear_a(4)),
        ("a2-odd", DgQuiver::new(&["1", "2"]).arrow("x", "1", "2", -1)),
        ("a2-deep", DgQuiver::new(&["1", "2"]).arrow("x", "1", "2", -2)),
        ("a2-pair", DgQuiver::new(&["1", "2"]).arrow("a", "1", "2", 0).arrow("x", "1", "2", -1)),
        (
            "a3-killed",
            three().arrow("a", "1", "2", 0).arrow("b", "2", "3", 0).arrow("h", "1", "3", -1).diff("h", &[(1, &["a", "b"])]),
        ),
        ("gamma-a2", gamma_a2()),
    ]
}
