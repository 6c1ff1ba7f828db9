//! Univariate polynomials and root finding.

use num::rational::BigRational;
use num::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::finite::prime_factors;
use super::number::{rational_cbrt, rational_roots, rational_sqrt};
use super::{Elem, Field};
use crate::error::{Error, Result};

const BRUTE_FORCE_LIMIT: u64 = 256;

/// Polynomial with coefficients lowest degree first, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> UniPoly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_i64(field: &Field, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: Elem) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    /// The polynomial x.
    pub fn x(field: &Field) -> UniPoly {
        UniPoly::new(field, vec![field.zero(), field.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &Elem {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = f.zero();
        let c = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).unwrap_or(&zero),
                    other.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        UniPoly::new(f, c)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    pub fn scale(&self, s: &Elem) -> UniPoly {
        let f = &self.field;
        UniPoly::new(f, self.coeffs.iter().map(|c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(f);
        }
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        UniPoly::new(f, c)
    }

    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let f = &self.field;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.coeffs.len() - 1;
        let lead_inv = f.inv(d.lead())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(f), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = f.mul(&r[top], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                let j = top - dd + i;
                r[j] = f.sub(&r[j], &f.mul(&c, di));
            }
            q[top - dd] = c;
        }
        r.truncate(dd);
        Ok((UniPoly::new(f, q), UniPoly::new(f, r)))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(&inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// self^e mod m.
    pub fn powmod(&self, mut e: u64, m: &UniPoly) -> Result<UniPoly> {
        let f = &self.field;
        let mut result = UniPoly::constant(f, f.one()).rem(m)?;
        let mut base = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(result)
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        UniPoly::new(f, c)
    }

    /// All roots in the field, with multiplicity, sorted.
    pub fn roots(&self) -> Result<Vec<Elem>> {
        if self.is_zero() {
            return Err(Error::Parse("roots of the zero polynomial".into()));
        }
        let mut out = Vec::new();
        for r in self.distinct_roots()? {
            let lin = UniPoly::new(&self.field, vec![self.field.neg(&r), self.field.one()]);
            let mut g = self.clone();
            loop {
                let (q, rem) = g.divrem(&lin)?;
                if !rem.is_zero() {
                    break;
                }
                out.push(r.clone());
                g = q;
            }
        }
        out.sort();
        Ok(out)
    }

    /// Distinct roots in the field, sorted.
    pub fn distinct_roots(&self) -> Result<Vec<Elem>> {
        if self.is_zero() {
            return Err(Error::Parse("roots of the zero polynomial".into()));
        }
        let f = &self.field;
        let mut out = match f.cardinality() {
            Some(q) if q <= BRUTE_FORCE_LIMIT => {
                f.elements()?.filter(|x| f.is_zero(&self.eval(x))).collect()
            }
            Some(q) => finite_roots(self, q)?,
            None => char0_roots(self)?,
        };
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Cantor–Zassenhaus: isolate the linear part gcd(f, x^q - x), then split it.
fn finite_roots(poly: &UniPoly, q: u64) -> Result<Vec<Elem>> {
    let f = poly.field();
    let m = poly.monic();
    if m.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let x = UniPoly::x(f);
    let xq = x.powmod(q, &m)?;
    let g = m.gcd(&xq.sub(&x));
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    split_linear(&g, q, &mut rng, &mut out)?;
    Ok(out)
}

fn split_linear(g: &UniPoly, q: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Elem>) -> Result<()> {
    let f = g.field();
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            let m = g.monic();
            out.push(f.neg(&m.coeffs()[0]));
            return Ok(());
        }
        _ => {}
    }
    let p = f.characteristic();
    loop {
        let a = f.random(rng);
        let h = if p == 2 {
            // absolute trace of a*x from F_q down to F_2
            let n = q.trailing_zeros();
            let ax = UniPoly::new(f, vec![f.zero(), a]);
            let mut term = ax.rem(g)?;
            let mut tr = term.clone();
            for _ in 1..n {
                term = term.mul(&term).rem(g)?;
                tr = tr.add(&term);
            }
            tr
        } else {
            let base = UniPoly::new(f, vec![a, f.one()]);
            base.powmod((q - 1) / 2, g)?
                .sub(&UniPoly::constant(f, f.one()))
        };
        let d = g.gcd(&h);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && Some(dd) < g.degree() {
            let (other, _) = g.divrem(&d)?;
            split_linear(&d, q, rng, out)?;
            split_linear(&other, q, rng, out)?;
            return Ok(());
        }
    }
}

fn char0_roots(poly: &UniPoly) -> Result<Vec<Elem>> {
    let f = poly.field();
    let mut c: Vec<Elem> = poly.coeffs().to_vec();
    let mut out = Vec::new();
    let shift = c.iter().take_while(|x| f.is_zero(x)).count();
    if shift > 0 {
        out.push(f.zero());
        c.drain(..shift);
    }
    let reduced = UniPoly::new(f, c);
    if f.is_rational() {
        let rc: Vec<BigRational> = reduced
            .coeffs()
            .iter()
            .map(|e| f.as_rational(e).expect("rational coefficient"))
            .collect();
        let rs = rational_roots(&rc).ok_or_else(|| {
            Error::UnsupportedField("coefficients too large for rational root search".into())
        })?;
        out.extend(rs.into_iter().map(Elem::Rat));
        return Ok(out);
    }
    match reduced.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = reduced.monic();
            out.push(f.neg(&m.coeffs()[0]));
        }
        Some(2) => {
            let m = reduced.monic();
            let (c0, c1) = (&m.coeffs()[0], &m.coeffs()[1]);
            // t = (-c1 ± sqrt(c1^2 - 4 c0)) / 2
            let disc = f.sub(&f.mul(c1, c1), &f.mul(&f.from_i64(4), c0));
            let two_inv = f.inv(&f.from_i64(2))?;
            for s in nf_sqrt(f, &disc)? {
                out.push(f.mul(&f.sub(&s, c1), &two_inv));
            }
        }
        Some(3) if is_binomial(&reduced) => {
            let m = reduced.monic();
            let x = f.neg(&m.coeffs()[0]);
            out.extend(nf_cbrt(f, &x)?);
        }
        Some(d) => {
            return Err(Error::UnsupportedField(format!(
                "root finding of degree {d} over a number field"
            )))
        }
    }
    Ok(out)
}

fn is_binomial(p: &UniPoly) -> bool {
    let f = p.field();
    let c = p.coeffs();
    c[1..c.len() - 1].iter().all(|x| f.is_zero(x))
}

/// Multiplication-by-x matrix on the power basis, used for norms and traces.
fn mult_matrix(f: &Field, x: &Elem) -> Vec<Vec<BigRational>> {
    let modulus = f.number_field().expect("number field");
    let d = modulus.len() - 1;
    let mut cols = Vec::with_capacity(d);
    for j in 0..d {
        let mut b = vec![BigRational::zero(); d];
        b[j] = BigRational::one();
        let prod = f.mul(x, &Elem::Nf(b));
        cols.push(f.rational_coords(&prod).unwrap());
    }
    cols
}

fn norm_trace_deg2(f: &Field, x: &Elem) -> (BigRational, BigRational) {
    let m = mult_matrix(f, x);
    let tr = &m[0][0] + &m[1][1];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    (det, tr)
}

/// Square roots in Q or in a number field of degree at most 2.
fn nf_sqrt(f: &Field, x: &Elem) -> Result<Vec<Elem>> {
    if f.is_zero(x) {
        return Ok(vec![f.zero()]);
    }
    if f.is_rational() || f.degree() == 1 {
        let r = f.as_rational(x).unwrap();
        return Ok(match rational_sqrt(&r) {
            Some(s) => {
                let a = f.from_rational(&s)?;
                vec![a.clone(), f.neg(&a)]
            }
            None => Vec::new(),
        });
    }
    if f.degree() != 2 {
        return Err(Error::UnsupportedField(
            "square roots in number fields of degree > 2".into(),
        ));
    }
    // y = u + vθ with θ^2 = -b θ - c:
    //   y^2 = (u^2 - c v^2) + (2uv - b v^2) θ
    let m = f.number_field().unwrap();
    let (c, b) = (&m[0], &m[1]);
    let xs = f.rational_coords(x).unwrap();
    let (d0, d1) = (&xs[0], &xs[1]);
    let mut out = Vec::new();
    if d1.is_zero() {
        if let Some(u) = rational_sqrt(d0) {
            out.push(Elem::Nf(vec![u.clone(), BigRational::zero()]));
            out.push(Elem::Nf(vec![-u, BigRational::zero()]));
        }
    }
    // v != 0: w = v^2 solves (b^2 - 4c) w^2 + (2 b d1 - 4 d0) w + d1^2 = 0
    let two = BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    let qa = b * b - &four * c;
    let qb = &two * b * d1 - &four * d0;
    let qc = d1 * d1;
    let ws = rational_roots(&[qc, qb, qa]).unwrap_or_default();
    for w in ws {
        if w.is_zero() {
            continue;
        }
        if let Some(v) = rational_sqrt(&w) {
            for v in [v.clone(), -v] {
                let u = (d1 + b * &v * &v) / (&two * &v);
                let y = Elem::Nf(vec![u, v]);
                if f.mul(&y, &y) == *x {
                    out.push(y);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Cube roots in Q or in a number field of degree at most 2.
fn nf_cbrt(f: &Field, x: &Elem) -> Result<Vec<Elem>> {
    if f.is_zero(x) {
        return Ok(vec![f.zero()]);
    }
    if f.is_rational() || f.degree() == 1 {
        let r = f.as_rational(x).unwrap();
        return Ok(match rational_cbrt(&r) {
            Some(s) => vec![f.from_rational(&s)?],
            None => Vec::new(),
        });
    }
    if f.degree() != 2 {
        return Err(Error::UnsupportedField(
            "cube roots in number fields of degree > 2".into(),
        ));
    }
    let mut out = Vec::new();
    if let Some(r) = f.as_rational(x) {
        // y^3 rational forces y = r·ω with r rational and ω^3 = 1
        if let Some(r) = rational_cbrt(&r) {
            let r = f.from_rational(&r)?;
            out.push(r.clone());
            let omega = UniPoly::from_i64(f, &[1, 1, 1]);
            for w in char0_roots(&omega)? {
                out.push(f.mul(&r, &w));
            }
        }
        return Ok(out);
    }
    // y ∉ Q: N(y) = cbrt(N(x)), and t = Tr(y) solves t^3 - 3 N(y) t - Tr(x) = 0;
    // then y = (x + t N(y)) / (t^2 - N(y)).
    let (nx, tx) = norm_trace_deg2(f, x);
    let Some(n) = rational_cbrt(&nx) else {
        return Ok(out);
    };
    let three = BigRational::from_integer(3.into());
    let ts = rational_roots(&[-tx, -(&three * &n), BigRational::zero(), BigRational::one()])
        .unwrap_or_default();
    for t in ts {
        let den = &t * &t - &n;
        if den.is_zero() {
            continue;
        }
        let num = f.add(x, &f.from_rational(&(&t * &n))?);
        let y = f.div(&num, &f.from_rational(&den)?)?;
        if f.mul(&f.mul(&y, &y), &y) == *x {
            out.push(y);
        }
    }
    Ok(out)
}

fn has_exact_order(f: &Field, x: &Elem, n: u64) -> bool {
    f.is_one(&f.pow(x, n))
        && prime_factors(n)
            .into_iter()
            .all(|r| !f.is_one(&f.pow(x, n / r)))
}

/// Primitive roots of unity in characteristic 0: via Φ_n when it has degree
/// at most 2, otherwise among ±θ^j when the generator θ is itself a root of unity.
pub(super) fn char0_root_of_unity(f: &Field, n: u64) -> Result<Option<Elem>> {
    let cyclo: Option<&[i64]> = match n {
        1 => Some(&[-1, 1]),
        2 => Some(&[1, 1]),
        3 => Some(&[1, 1, 1]),
        4 => Some(&[1, 0, 1]),
        6 => Some(&[1, -1, 1]),
        _ => None,
    };
    if let Some(c) = cyclo {
        return Ok(UniPoly::from_i64(f, c).distinct_roots()?.into_iter().min());
    }
    let Some(theta) = f.generator() else {
        return Ok(None);
    };
    let mut cands = Vec::new();
    let mut pw = f.one();
    for _ in 0..120 {
        pw = f.mul(&pw, &theta);
        cands.push(pw.clone());
        cands.push(f.neg(&pw));
        if f.is_one(&pw) {
            break;
        }
    }
    if !f.is_one(&pw) {
        return Ok(None);
    }
    Ok(cands.into_iter().filter(|c| has_exact_order(f, c, n)).min())
}
