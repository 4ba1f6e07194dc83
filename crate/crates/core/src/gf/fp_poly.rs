//! Dense polynomials over the prime field F_p, coefficients low to high.
//!
//! Only what field construction needs: remainder, gcd, extended gcd and
//! modular powering. Inputs are assumed reduced mod p.

pub(crate) type Poly = Vec<u32>;

pub(crate) fn mod_inv(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    mod_pow(a, (p - 2) as u64, p)
}

pub(crate) fn mod_pow(a: u32, mut e: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut base = a as u64 % p64;
    let mut acc = 1u64 % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

/// Legendre symbol as a bool; `a` must be nonzero mod p.
pub(crate) fn is_square_mod(a: u32, p: u32) -> bool {
    mod_pow(a, ((p - 1) / 2) as u64, p) == 1
}

pub(crate) fn trim(f: &mut Poly) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

pub(crate) fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub(f: &[u32], g: &[u32], p: u32) -> Poly {
    let n = f.len().max(g.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = ((a + p - b) % p) as u32;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(f: &[u32], g: &[u32], p: u32) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a as u64 * b as u64) % p64;
        }
    }
    let mut out: Poly = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `g` must be nonzero.
pub(crate) fn divrem(f: &[u32], g: &[u32], p: u32) -> (Poly, Poly) {
    let dg = degree(g).expect("division by the zero polynomial");
    let mut r: Poly = f.to_vec();
    trim(&mut r);
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let p64 = p as u64;
    let lead_inv = mod_inv(g[dg], p) as u64;
    let mut q = vec![0u32; r.len() - dg];
    for k in (dg..r.len()).rev() {
        let t = r[k] as u64 * lead_inv % p64;
        if t == 0 {
            continue;
        }
        q[k - dg] = t as u32;
        for i in 0..=dg {
            let idx = k - dg + i;
            r[idx] = ((r[idx] as u64 + (p64 - t) * g[i] as u64) % p64) as u32;
        }
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(f: &[u32], g: &[u32], p: u32) -> Poly {
    divrem(f, g, p).1
}

pub(crate) fn make_monic(f: &mut Poly, p: u32) {
    if let Some(d) = degree(f) {
        let inv = mod_inv(f[d], p) as u64;
        for c in f.iter_mut() {
            *c = (*c as u64 * inv % p as u64) as u32;
        }
    }
}

pub(crate) fn gcd(f: &[u32], g: &[u32], p: u32) -> Poly {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(&mut a, p);
    a
}

/// Inverse of `f` modulo the irreducible `m`. Returns None when `f` is zero mod `m`.
pub(crate) fn inv_mod(f: &[u32], m: &[u32], p: u32) -> Option<Poly> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(f, m, p);
    if r1.is_empty() {
        return None;
    }
    let mut t0: Poly = Vec::new();
    let mut t1: Poly = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    // r0 is a nonzero constant
    let c = mod_inv(r0[0], p) as u64;
    let mut out: Poly = t0.iter().map(|&x| (x as u64 * c % p as u64) as u32).collect();
    out = rem(&out, m, p);
    Some(out)
}

pub(crate) fn mulmod(f: &[u32], g: &[u32], m: &[u32], p: u32) -> Poly {
    rem(&mul(f, g, p), m, p)
}

pub(crate) fn powmod(f: &[u32], mut e: u64, m: &[u32], p: u32) -> Poly {
    let mut base = rem(f, m, p);
    let mut acc: Poly = rem(&[1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

/// Rabin-style test: `f` monic of degree m is irreducible iff
/// gcd(X^{p^d} - X, f) = 1 for every d <= m/2.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = match degree(f) {
        Some(d) => d,
        None => return false,
    };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=m / 2 {
        xp = powmod(&xp, p as u64, f, p);
        let g = gcd(&sub(&xp, &x, p), f, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}
