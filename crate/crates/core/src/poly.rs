//! Dense univariate polynomials, lowest coefficient first.

use crate::field::Field;

fn trim<F: Field>(mut a: Vec<F>) -> Vec<F> {
    while a.last().is_some_and(|x| x.is_zero()) {
        a.pop();
    }
    a
}

pub fn mul<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![F::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add_ref(&x.mul_ref(y));
        }
    }
    trim(out)
}

pub fn sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(F::zero);
            let y = b.get(i).cloned().unwrap_or_else(F::zero);
            x - y
        })
        .collect();
    trim(out)
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub fn rem<F: Field>(a: &[F], m: &[F]) -> Vec<F> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let lead = m.last().expect("division by zero polynomial").inv().unwrap();
    while r.len() >= m.len() {
        let q = r.last().unwrap().mul_ref(&lead);
        let shift = r.len() - m.len();
        for (i, c) in m.iter().enumerate() {
            r[shift + i] = r[shift + i].sub_ref(&q.mul_ref(c));
        }
        r = trim(r);
    }
    r
}

pub fn gcd<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last() {
        let li = l.inv().unwrap();
        a = a.iter().map(|x| x.mul_ref(&li)).collect();
    }
    a
}

/// `base^e mod m`.
pub fn powmod<F: Field>(base: &[F], mut e: u64, m: &[F]) -> Vec<F> {
    let mut acc = vec![F::one()];
    let mut b = rem(base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b), m);
        }
        b = rem(&mul(&b, &b), m);
        e >>= 1;
    }
    acc
}

/// Roots over a large prime field: isolate the product of linear factors with
/// `gcd(f, x^p - x)`, then split it by deterministic shifts.
pub fn roots_large_prime<F: Field>(c: &[F]) -> Vec<F> {
    let p = F::characteristic();
    let f = trim(c.to_vec());
    let x = vec![F::zero(), F::one()];
    let xp = powmod(&x, p, &f);
    let g = gcd(&f, &sub(&xp, &x));
    let mut out = Vec::new();
    split_linear(g, p, 0, &mut out);
    out
}

fn split_linear<F: Field>(g: Vec<F>, p: u64, mut shift: i64, out: &mut Vec<F>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(-(g[0].div_ref(&g[1]))),
        _ => loop {
            // (x + a)^((p-1)/2) - 1 separates quadratic residues from non-residues.
            let xa = vec![F::from_i64(shift), F::one()];
            let h = sub(&powmod(&xa, (p - 1) / 2, &g), &[F::one()]);
            let d = gcd(&g, &h);
            shift += 1;
            if d.len() > 1 && d.len() < g.len() {
                let rest = quotient(&g, &d);
                split_linear(d, p, shift, out);
                split_linear(rest, p, shift, out);
                return;
            }
        },
    }
}

fn quotient<F: Field>(a: &[F], m: &[F]) -> Vec<F> {
    let mut r = trim(a.to_vec());
    let lead = m.last().unwrap().inv().unwrap();
    let mut q = vec![F::zero(); r.len() + 1 - m.len()];
    while r.len() >= m.len() {
        let c = r.last().unwrap().mul_ref(&lead);
        let shift = r.len() - m.len();
        for (i, x) in m.iter().enumerate() {
            r[shift + i] = r[shift + i].sub_ref(&c.mul_ref(x));
        }
        q[shift] = c;
        r = trim(r);
    }
    trim(q)
}
