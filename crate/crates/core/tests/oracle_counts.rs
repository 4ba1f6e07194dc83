//! Point counts and defining polynomials checked against a naive brute-force
//! model written here, with the results frozen.

use aszeta_core::{make_curve, make_field, Limits};

/// F_p[t]/(f) with schoolbook arithmetic; f is stored highest coefficient first.
struct Naive {
    p: u32,
    m: usize,
    f: Vec<u32>,
}

impl Naive {
    fn irreducible(p: u32, f: &[u32]) -> bool {
        // no factor of degree ≤ deg/2, by trial division over all monic polynomials
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let count = (p as usize).pow(d as u32);
            for k in 0..count {
                let mut g = vec![1u32];
                let mut x = k;
                for _ in 0..d {
                    g.push((x % p as usize) as u32);
                    x /= p as usize;
                }
                if Self::rem(p, f, &g).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    fn rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut r = a.to_vec();
        let inv = (1..p).find(|&x| x * b[0] % p == 1).unwrap();
        while r.len() >= b.len() {
            let c = r[0] * inv % p;
            for (i, &bi) in b.iter().enumerate() {
                r[i] = (r[i] + p * p - c * bi % p) % p;
            }
            r.remove(0);
        }
        r
    }

    /// Least monic irreducible X^m + Σ c_j X^j, comparing (c_0, ..., c_{m-1}) with c_0 most significant.
    fn new(p: u32, m: usize) -> Naive {
        let total = (p as usize).pow(m as u32);
        for k in 0..total {
            let mut low = vec![0u32; m];
            let mut x = k;
            for j in (0..m).rev() {
                low[j] = (x % p as usize) as u32;
                x /= p as usize;
            }
            let mut f = vec![1u32];
            f.extend(low.iter().rev());
            if Self::irreducible(p, &f) {
                return Naive { p, m, f };
            }
        }
        unreachable!()
    }

    fn elem(&self, idx: usize) -> Vec<u32> {
        let mut x = idx;
        (0..self.m)
            .map(|_| {
                let c = (x % self.p as usize) as u32;
                x /= self.p as usize;
                c
            })
            .collect()
    }

    fn size(&self) -> usize {
        (self.p as usize).pow(self.m as u32)
    }

    fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn sub(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // highest first for the division
        let hi: Vec<u32> = prod.iter().rev().map(|&c| c as u32).collect();
        let mut r = if hi.len() >= self.f.len() { Self::rem(self.p, &hi, &self.f) } else { hi };
        r.reverse();
        r.resize(self.m, 0);
        r
    }

    fn pow(&self, a: &[u32], e: u64) -> Vec<u32> {
        let mut acc = self.elem(1);
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Embeds F_{p^r} coefficient vectors by finding the image of t: a root of
    /// the small field's modulus, least in enumeration order.
    fn embed_from(&self, small: &Naive, x: &[u32]) -> Vec<u32> {
        let root = (0..self.size())
            .map(|i| self.elem(i))
            .find(|z| {
                let mut acc = vec![0u32; self.m];
                for &c in &small.f {
                    let mut cc = vec![0u32; self.m];
                    cc[0] = c;
                    acc = self.add(&self.mul(&acc, z), &cc);
                }
                acc.iter().all(|&c| c == 0)
            })
            .unwrap();
        let mut out = vec![0u32; self.m];
        let mut pw = self.elem(1);
        for &c in x {
            let mut cc = vec![0u32; self.m];
            cc[0] = c;
            out = self.add(&out, &self.mul(&cc, &pw));
            pw = self.mul(&pw, &root);
        }
        out
    }

    /// Affine solutions of y^p - y = x R(x) by trying every (x, y), plus one point at infinity.
    fn count(&self, r_coeffs: &[Vec<u32>]) -> u64 {
        let n = self.size();
        let elems: Vec<Vec<u32>> = (0..n).map(|i| self.elem(i)).collect();
        let as_map: Vec<Vec<u32>> = elems.iter().map(|y| self.sub(&self.pow(y, self.p as u64), y)).collect();
        let mut hits = 1u64;
        for x in &elems {
            let mut rx = vec![0u32; self.m];
            let mut xp = x.clone();
            for a in r_coeffs {
                rx = self.add(&rx, &self.mul(a, &xp));
                xp = self.pow(&xp, self.p as u64);
            }
            let rhs = self.mul(x, &rx);
            hits += as_map.iter().filter(|v| **v == rhs).count() as u64;
        }
        hits
    }
}

fn naive_count(p: u32, r: usize, coeffs: &[Vec<u32>], s: usize) -> u64 {
    let small = Naive::new(p, r);
    let big = Naive::new(p, s);
    let lifted: Vec<Vec<u32>> = coeffs
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.resize(r, 0);
            big.embed_from(&small, &c)
        })
        .collect();
    big.count(&lifted)
}

#[test]
fn defining_polynomials_match_naive_search() {
    for (p, m) in [(3u32, 2usize), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (11, 2)] {
        let naive = Naive::new(p, m);
        let f = make_field(p as u64, m).unwrap();
        let low_first: Vec<u32> = naive.f.iter().rev().copied().collect();
        assert_eq!(f.modulus(), &low_first[..], "p = {p}, m = {m}");
    }
}

// (p, r, coefficients of R, s, frozen count)
const CASES: &[(u32, usize, &[&[u32]], usize, u64)] = &[
    (3, 1, &[&[0], &[1]], 1, 4),
    (3, 1, &[&[0], &[1]], 2, 4),
    (3, 1, &[&[0], &[1]], 3, 28),
    (3, 1, &[&[0], &[1]], 4, 28),
    (3, 2, &[&[0, 0], &[0, 1]], 2, 28),
    (3, 2, &[&[0, 0], &[0, 1]], 4, 28),
    (3, 2, &[&[1, 1], &[0, 1]], 4, 82),
    (3, 3, &[&[0, 1, 0]], 3, 28),
    (3, 1, &[&[1], &[1]], 2, 10),
    (3, 1, &[&[1], &[1]], 3, 28),
    (3, 1, &[&[1], &[1]], 4, 82),
    (3, 1, &[&[1]], 3, 28),
    (3, 1, &[&[2]], 4, 64),
    (5, 1, &[&[0], &[1]], 2, 6),
    (5, 1, &[&[2]], 2, 6),
    (5, 1, &[&[2]], 3, 126),
    (7, 1, &[&[1]], 2, 92),
    (7, 1, &[&[3]], 2, 92),
];

#[test]
fn counts_match_naive_model_and_frozen_values() {
    let l = Limits::default();
    for &(p, r, coeffs, s, want) in CASES {
        let coeffs: Vec<Vec<u32>> = coeffs.iter().map(|c| c.to_vec()).collect();
        let naive = naive_count(p, r, &coeffs, s);
        let curve = make_curve(p as u64, r, &coeffs, &l).unwrap();
        let oracle = curve.count_points_oracle(s, &l).unwrap();
        let quadric = curve.count_points_quadric(s).unwrap().count;
        assert_eq!(naive, want, "naive p={p} r={r} {coeffs:?} s={s}");
        assert_eq!(oracle, want, "oracle p={p} r={r} {coeffs:?} s={s}");
        assert_eq!(quadric, want.into(), "quadric p={p} r={r} {coeffs:?} s={s}");
    }
}

