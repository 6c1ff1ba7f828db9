//! Rationals and simple extensions Q(θ) = Q[t]/(m(t)).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub(crate) type QPoly = Vec<BigRational>;

pub(crate) fn q_trim(a: &mut QPoly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub(crate) fn q_divrem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let mut r = a.to_vec();
    q_trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quot = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].clone();
    while r.len() > db {
        let top = r.len() - 1;
        let c = &r[top] / &lead;
        for (i, bi) in b.iter().enumerate() {
            let j = top - db + i;
            r[j] = &r[j] - &c * bi;
        }
        quot[top - db] = c;
        r.pop();
        q_trim(&mut r);
    }
    (quot, r)
}

fn q_mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    out
}

fn q_sub(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    let mut out: QPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    q_trim(&mut out);
    out
}

pub(crate) struct NumberField {
    pub modulus: QPoly,
    pub d: usize,
}

impl NumberField {
    pub fn new(modulus: QPoly) -> Self {
        let d = modulus.len() - 1;
        NumberField { modulus, d }
    }

    pub fn reduce(&self, v: QPoly) -> QPoly {
        let (_, mut r) = q_divrem(&v, &self.modulus);
        r.resize(self.d, BigRational::zero());
        r
    }

    pub fn add(&self, a: &[BigRational], b: &[BigRational]) -> QPoly {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[BigRational], b: &[BigRational]) -> QPoly {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &[BigRational]) -> QPoly {
        a.iter().map(|x| -x).collect()
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> QPoly {
        self.reduce(q_mul(a, b))
    }

    pub fn inv(&self, a: &[BigRational]) -> Option<QPoly> {
        let mut a0 = a.to_vec();
        q_trim(&mut a0);
        if a0.is_empty() {
            return None;
        }
        // extended Euclid on (m, a): track s with s*a ≡ r mod m
        let (mut r0, mut r1) = (self.modulus.clone(), a0);
        let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = q_divrem(&r0, &r1);
            let s = q_sub(&s0, &q_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.len() != 1 {
            return None;
        }
        let c = r0[0].clone();
        let s: QPoly = s0.into_iter().map(|x| x / &c).collect();
        Some(self.reduce(s))
    }
}

pub(crate) fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    let r = BigRational::new(n, d);
    (&r * &r == *x).then_some(r)
}

pub(crate) fn rational_cbrt(x: &BigRational) -> Option<BigRational> {
    let n = x.numer().cbrt();
    let d = x.denom().cbrt();
    let r = BigRational::new(n, d);
    (&r * &r * &r == *x).then_some(r)
}

fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    Some(out)
}

/// Distinct rational roots of a polynomial with rational coefficients.
/// Returns `None` when the coefficients are too large for divisor enumeration.
pub(crate) fn rational_roots(coeffs: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut c = coeffs.to_vec();
    q_trim(&mut c);
    if c.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    let shift = c.iter().take_while(|x| x.is_zero()).count();
    if shift > 0 {
        roots.push(BigRational::zero());
        c.drain(..shift);
    }
    if c.len() > 1 {
        let lcm = c.iter().fold(BigInt::one(), |acc, x| {
            num::integer::lcm(acc, x.denom().clone())
        });
        let ints: Vec<BigInt> = c.iter().map(|x| (x * &lcm).to_integer()).collect();
        let ps = divisors(&ints[0])?;
        let qs = divisors(ints.last().unwrap())?;
        for &pn in &ps {
            for &qd in &qs {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(BigInt::from(pn) * sign, BigInt::from(qd));
                    if roots.contains(&cand) {
                        continue;
                    }
                    let v = c
                        .iter()
                        .rev()
                        .fold(BigRational::zero(), |acc, a| acc * &cand + a);
                    if v.is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}
