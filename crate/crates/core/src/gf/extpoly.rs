//! Dense univariate polynomials over F_{p^m}, just enough for root finding.

use super::{FieldDesc, FieldElem};

pub(crate) type EPoly = Vec<FieldElem>;

fn trim(f: &mut EPoly) {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
}

fn deg(f: &EPoly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

fn sub(f: &EPoly, g: &EPoly, field: &FieldDesc) -> EPoly {
    let n = f.len().max(g.len());
    let z = field.zero();
    let mut out: EPoly = (0..n).map(|i| f.get(i).unwrap_or(&z) - g.get(i).unwrap_or(&z)).collect();
    trim(&mut out);
    out
}

fn divrem(f: &EPoly, g: &EPoly, field: &FieldDesc) -> (EPoly, EPoly) {
    let dg = deg(g).expect("division by zero polynomial");
    let mut r = f.clone();
    trim(&mut r);
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let lead_inv = g[dg].inv().expect("nonzero leading coefficient");
    let mut q = vec![field.zero(); r.len() - dg];
    for k in (dg..r.len()).rev() {
        let t = &r[k] * &lead_inv;
        if t.is_zero() {
            continue;
        }
        for i in 0..=dg {
            let v = &r[k - dg + i] - &(&t * &g[i]);
            r[k - dg + i] = v;
        }
        q[k - dg] = t;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn rem(f: &EPoly, g: &EPoly, field: &FieldDesc) -> EPoly {
    divrem(f, g, field).1
}

fn monic(mut f: EPoly) -> EPoly {
    if let Some(l) = f.last().cloned() {
        let inv = l.inv().expect("nonzero");
        for c in f.iter_mut() {
            *c = &*c * &inv;
        }
    }
    f
}

fn gcd(f: &EPoly, g: &EPoly, field: &FieldDesc) -> EPoly {
    let mut a = f.clone();
    let mut b = g.clone();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, field);
        a = b;
        b = r;
    }
    monic(a)
}

/// f^p mod g, using (Σ f_i X^i)^p = Σ f_i^p X^{ip}.
fn pow_p_mod(f: &EPoly, g: &EPoly, field: &FieldDesc) -> EPoly {
    let p = field.p() as usize;
    let mut out = vec![field.zero(); (f.len().max(1) - 1) * p + 1];
    for (i, c) in f.iter().enumerate() {
        out[i * p] = c.frobenius();
    }
    rem(&out, g, field)
}

/// Roots of a polynomial that splits into distinct linear factors over `field`,
/// in increasing enumeration order.
pub(crate) fn split_roots(f: &EPoly, field: &FieldDesc) -> Vec<FieldElem> {
    let mut out = Vec::new();
    let mut f = monic(f.clone());
    trim(&mut f);
    split(&f, field, &mut out);
    out.sort();
    out
}

fn split(g: &EPoly, field: &FieldDesc, out: &mut Vec<FieldElem>) {
    match deg(g) {
        None | Some(0) => {}
        Some(1) => out.push(-&(&g[0] * &g[1].inv().expect("nonzero"))),
        Some(d) => {
            let m = field.degree();
            let p = field.p();
            for k in 0..m {
                // T(X) = Σ_i (δX)^{p^i} mod g with δ = θ^k
                let delta = field.basis_element(k);
                let mut y: EPoly = vec![field.zero(), delta];
                y = rem(&y, g, field);
                let mut t = y.clone();
                for _ in 1..m {
                    y = pow_p_mod(&y, g, field);
                    let n = t.len().max(y.len());
                    let z = field.zero();
                    t = (0..n).map(|i| t.get(i).unwrap_or(&z) + y.get(i).unwrap_or(&z)).collect();
                }
                trim(&mut t);
                for c in 0..p {
                    let shifted = sub(&t, &vec![field.from_int(c as i64)], field);
                    let h = gcd(g, &shifted, field);
                    if let Some(dh) = deg(&h) {
                        if dh > 0 && dh < d {
                            let (q, _) = divrem(g, &h, field);
                            split(&h, field, out);
                            split(&monic(q), field, out);
                            return;
                        }
                    }
                }
            }
            panic!("polynomial does not split into distinct linear factors");
        }
    }
}
