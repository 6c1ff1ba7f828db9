//! Exact fields: Q, F_p, F_{p^k}, and simple number fields Q(θ).
//!
//! A [`Field`] is a cheap, cloneable handle. Internals work with raw [`Elem`]
//! values and call arithmetic through the handle; [`FieldElement`] pairs a value
//! with its field and checks that operands agree.
//!
//! Canonical element order (used for deterministic choices such as roots of
//! unity): prime and extension fields compare the packed integer
//! `c0 + c1 p + ... + c_{k-1} p^{k-1}`, i.e. coefficients from the top degree
//! down; Q compares by value; number fields compare coefficient vectors from the
//! top degree down.

mod finite;
mod number;
pub mod uni;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use finite::ExtField;
use number::NumberField;

pub use uni::UniPoly;

/// Description of a field. Moduli are stored lowest degree first and are monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
    Finite { p: u64, k: u32, modulus: Vec<u64> },
    NumberField { modulus: Vec<BigRational> },
}

impl FieldSpec {
    /// Parse `Q`, `Fp:<p>`, `Fq:<p>:<k>[:<c0,...,ck>]`, or `NF:<c0,...,ck>`.
    /// Omitting the modulus of `Fq` selects the default one.
    pub fn parse(s: &str) -> Result<FieldSpec> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad field spec '{s}'"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["Q"] => Ok(FieldSpec::Rational),
            ["Fp", p] => Ok(FieldSpec::Prime(p.parse().map_err(|_| bad())?)),
            ["Fq", p, k] => {
                let p: u64 = p.parse().map_err(|_| bad())?;
                let k: u32 = k.parse().map_err(|_| bad())?;
                if !finite::is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                if k == 0 {
                    return Err(bad());
                }
                check_size(p, k)?;
                Ok(FieldSpec::Finite {
                    p,
                    k,
                    modulus: finite::default_modulus(p, k as usize),
                })
            }
            ["Fq", p, k, cs] => {
                let p: u64 = p.parse().map_err(|_| bad())?;
                let k: u32 = k.parse().map_err(|_| bad())?;
                let modulus: Vec<u64> = cs
                    .split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                Ok(FieldSpec::Finite { p, k, modulus })
            }
            ["NF", cs] => {
                let modulus = cs
                    .split(',')
                    .map(|c| parse_rational(c.trim()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FieldSpec::NumberField { modulus })
            }
            _ => Err(bad()),
        }
    }
}

fn check_size(p: u64, k: u32) -> Result<()> {
    match p.checked_pow(k) {
        Some(q) if q < (1u64 << 62) => Ok(()),
        _ => Err(Error::UnsupportedField(format!(
            "F_{{{p}^{k}}} exceeds the 62-bit packed representation"
        ))),
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp:{p}"),
            FieldSpec::Finite { p, k, modulus } => {
                let cs: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                write!(f, "Fq:{p}:{k}:{}", cs.join(","))
            }
            FieldSpec::NumberField { modulus } => {
                let cs: Vec<String> = modulus.iter().map(fmt_rational).collect();
                write!(f, "NF:{}", cs.join(","))
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational literal '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            s.trim().parse().map_err(|_| bad())?,
        )),
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Raw field element. Only meaningful together with the [`Field`] it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Fin(u64),
    Rat(BigRational),
    Nf(Vec<BigRational>),
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Elem::Fin(a), Elem::Fin(b)) => a.cmp(b),
            (Elem::Rat(a), Elem::Rat(b)) => a.cmp(b),
            (Elem::Nf(a), Elem::Nf(b)) => a.iter().rev().cmp(b.iter().rev()),
            (a, b) => variant_rank(a).cmp(&variant_rank(b)),
        }
    }
}

fn variant_rank(e: &Elem) -> u8 {
    match e {
        Elem::Fin(_) => 0,
        Elem::Rat(_) => 1,
        Elem::Nf(_) => 2,
    }
}

enum Kind {
    Rational,
    Prime(u64),
    Ext(ExtField),
    Number(NumberField),
}

struct Inner {
    spec: FieldSpec,
    kind: Kind,
    modulus_verified: bool,
}

/// Handle to an exact field.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.0.spec)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field> {
        let mut modulus_verified = true;
        let kind = match &spec {
            FieldSpec::Rational => Kind::Rational,
            FieldSpec::Prime(p) => {
                if !finite::is_prime(*p) {
                    return Err(Error::NotPrime(*p));
                }
                if *p >= 1 << 31 {
                    return Err(Error::UnsupportedField(format!("prime {p} too large")));
                }
                Kind::Prime(*p)
            }
            FieldSpec::Finite { p, k, modulus } => {
                if !finite::is_prime(*p) {
                    return Err(Error::NotPrime(*p));
                }
                if *p >= 1 << 31 {
                    return Err(Error::UnsupportedField(format!("prime {p} too large")));
                }
                check_size(*p, *k)?;
                if modulus.len() != *k as usize + 1
                    || modulus.last() != Some(&1)
                    || modulus.iter().any(|c| c >= p)
                {
                    return Err(Error::Parse(format!(
                        "modulus must be monic of degree {k} with coefficients in [0,{p})"
                    )));
                }
                if !finite::fp_is_irreducible(modulus, *p) {
                    return Err(Error::ReducibleModulus);
                }
                Kind::Ext(ExtField::new(*p, modulus.clone()))
            }
            FieldSpec::NumberField { modulus } => {
                if modulus.len() < 2 || !modulus.last().unwrap().is_one() {
                    return Err(Error::Parse(
                        "number-field modulus must be monic of degree >= 1".into(),
                    ));
                }
                match number::rational_roots(modulus) {
                    Some(r) if !r.is_empty() && modulus.len() > 2 => {
                        return Err(Error::ReducibleModulus)
                    }
                    Some(_) => {}
                    None => modulus_verified = false,
                }
                // above degree 3 the absence of rational roots does not prove irreducibility
                if modulus.len() > 4 {
                    modulus_verified = false;
                }
                Kind::Number(NumberField::new(modulus.clone()))
            }
        };
        Ok(Field(Arc::new(Inner {
            spec,
            kind,
            modulus_verified,
        })))
    }

    pub fn parse(s: &str) -> Result<Field> {
        Field::new(FieldSpec::parse(s)?)
    }

    pub fn rational() -> Field {
        Field::new(FieldSpec::Rational).unwrap()
    }

    pub fn prime(p: u64) -> Result<Field> {
        Field::new(FieldSpec::Prime(p))
    }

    /// F_{p^k} with the default modulus; `k = 1` gives the prime field.
    pub fn finite(p: u64, k: u32) -> Result<Field> {
        if k == 1 {
            return Field::prime(p);
        }
        if !finite::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        check_size(p, k)?;
        Field::new(FieldSpec::Finite {
            p,
            k,
            modulus: finite::default_modulus(p, k as usize),
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    /// Whether the modulus irreducibility was fully verified at construction.
    pub fn modulus_verified(&self) -> bool {
        self.0.modulus_verified
    }

    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            Kind::Rational | Kind::Number(_) => 0,
            Kind::Prime(p) => *p,
            Kind::Ext(f) => f.p,
        }
    }

    /// Number of elements, or `None` for infinite fields.
    pub fn cardinality(&self) -> Option<u64> {
        match &self.0.kind {
            Kind::Rational | Kind::Number(_) => None,
            Kind::Prime(p) => Some(*p),
            Kind::Ext(f) => Some(f.q),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.cardinality().is_some()
    }

    /// Degree over the prime field (or over Q).
    pub fn degree(&self) -> u32 {
        match &self.0.kind {
            Kind::Rational | Kind::Prime(_) => 1,
            Kind::Ext(f) => f.k as u32,
            Kind::Number(nf) => nf.d as u32,
        }
    }

    pub fn zero(&self) -> Elem {
        match &self.0.kind {
            Kind::Prime(_) | Kind::Ext(_) => Elem::Fin(0),
            Kind::Rational => Elem::Rat(BigRational::zero()),
            Kind::Number(nf) => Elem::Nf(vec![BigRational::zero(); nf.d]),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match &self.0.kind {
            Kind::Prime(p) => Elem::Fin(n.rem_euclid(*p as i64) as u64),
            Kind::Ext(f) => Elem::Fin(n.rem_euclid(f.p as i64) as u64),
            Kind::Rational => Elem::Rat(BigRational::from_integer(n.into())),
            Kind::Number(nf) => {
                let mut v = vec![BigRational::zero(); nf.d];
                v[0] = BigRational::from_integer(n.into());
                Elem::Nf(v)
            }
        }
    }

    /// Image of a rational number; fails when the denominator vanishes in the field.
    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        match &self.0.kind {
            Kind::Rational => Ok(Elem::Rat(r.clone())),
            Kind::Number(nf) => {
                let mut v = vec![BigRational::zero(); nf.d];
                v[0] = r.clone();
                Ok(Elem::Nf(v))
            }
            Kind::Prime(_) | Kind::Ext(_) => {
                let p = BigInt::from(self.characteristic());
                let n = (r.numer() % &p + &p) % &p;
                let d = (r.denom() % &p + &p) % &p;
                let n = self.from_i64(n.to_i64().unwrap());
                let d = self.from_i64(d.to_i64().unwrap());
                self.div(&n, &d)
            }
        }
    }

    /// The class of t in F_p[t]/(m) or Q[t]/(m); `None` for prime fields and Q.
    pub fn generator(&self) -> Option<Elem> {
        match &self.0.kind {
            Kind::Ext(f) => Some(Elem::Fin(f.p)),
            Kind::Number(nf) if nf.d >= 2 => {
                let mut v = vec![BigRational::zero(); nf.d];
                v[1] = BigRational::one();
                Some(Elem::Nf(v))
            }
            Kind::Number(nf) => {
                // degree-1 modulus t + c: θ = -c
                Some(Elem::Nf(vec![-nf.modulus[0].clone()]))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Fin(x) => *x == 0,
            Elem::Rat(x) => x.is_zero(),
            Elem::Nf(v) => v.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (Kind::Prime(p), Elem::Fin(x), Elem::Fin(y)) => {
                let s = x + y;
                Elem::Fin(if s >= *p { s - p } else { s })
            }
            (Kind::Ext(f), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(f.add(*x, *y)),
            (Kind::Rational, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Kind::Number(nf), Elem::Nf(x), Elem::Nf(y)) => Elem::Nf(nf.add(x, y)),
            _ => foreign(self),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&self.0.kind, a) {
            (Kind::Prime(p), Elem::Fin(x)) => Elem::Fin(if *x == 0 { 0 } else { p - x }),
            (Kind::Ext(f), Elem::Fin(x)) => Elem::Fin(f.neg(*x)),
            (Kind::Rational, Elem::Rat(x)) => Elem::Rat(-x),
            (Kind::Number(nf), Elem::Nf(x)) => Elem::Nf(nf.neg(x)),
            _ => foreign(self),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (Kind::Prime(p), Elem::Fin(x), Elem::Fin(y)) => {
                Elem::Fin(if x >= y { x - y } else { x + p - y })
            }
            (Kind::Rational, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x - y),
            (Kind::Number(nf), Elem::Nf(x), Elem::Nf(y)) => Elem::Nf(nf.sub(x, y)),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (Kind::Prime(p), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(x * y % p),
            (Kind::Ext(f), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(f.mul(*x, *y)),
            (Kind::Rational, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Kind::Number(nf), Elem::Nf(x), Elem::Nf(y)) => Elem::Nf(nf.mul(x, y)),
            _ => foreign(self),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match (&self.0.kind, a) {
            (Kind::Prime(p), Elem::Fin(x)) => Ok(Elem::Fin(finite::mod_inv(*x, *p))),
            (Kind::Ext(f), Elem::Fin(x)) => f.inv(*x).map(Elem::Fin).ok_or(Error::DivisionByZero),
            (Kind::Rational, Elem::Rat(x)) => Ok(Elem::Rat(x.recip())),
            (Kind::Number(nf), Elem::Nf(x)) => nf.inv(x).map(Elem::Nf).ok_or(Error::DivisionByZero),
            _ => foreign(self),
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: u64) -> Elem {
        if let (Kind::Ext(f), Elem::Fin(x)) = (&self.0.kind, a) {
            return Elem::Fin(f.pow(*x, e));
        }
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// Signed power; negative exponents require a nonzero base.
    pub fn pow_i(&self, a: &Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(&self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// Sum of a slice of elements.
    pub fn sum<'a>(&self, it: impl IntoIterator<Item = &'a Elem>) -> Elem {
        it.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Multiplicative order of a nonzero element of a finite field.
    pub fn mult_order(&self, a: &Elem) -> Option<u64> {
        let q = self.cardinality()?;
        if self.is_zero(a) {
            return None;
        }
        let mut n = q - 1;
        for r in finite::prime_factors(q - 1) {
            while n % r == 0 && self.is_one(&self.pow(a, n / r)) {
                n /= r;
            }
        }
        Some(n)
    }

    /// All elements of a finite field in canonical order.
    pub fn elements(&self) -> Result<impl Iterator<Item = Elem>> {
        let q = self
            .cardinality()
            .ok_or_else(|| Error::UnsupportedField(format!("{self} is infinite")))?;
        Ok((0..q).map(Elem::Fin))
    }

    /// Uniformly random element (finite fields) or a small random rational/number-field element.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match &self.0.kind {
            Kind::Prime(p) => Elem::Fin(rng.gen_range(0..*p)),
            Kind::Ext(f) => Elem::Fin(rng.gen_range(0..f.q)),
            Kind::Rational => Elem::Rat(small_rational(rng)),
            Kind::Number(nf) => Elem::Nf((0..nf.d).map(|_| small_rational(rng)).collect()),
        }
    }

    /// Parse an element literal: integer, `num/den`, or `[c0,c1,...]`.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let cs: Vec<BigRational> = inner
                .split(',')
                .filter(|c| !c.trim().is_empty())
                .map(|c| parse_rational(c.trim()))
                .collect::<Result<_>>()?;
            return match &self.0.kind {
                Kind::Ext(f) => {
                    if cs.len() > f.k {
                        return Err(Error::Parse(format!("too many coefficients in '{s}'")));
                    }
                    let mut acc = self.zero();
                    let t = Elem::Fin(f.p);
                    let mut tp = self.one();
                    for c in &cs {
                        acc = self.add(&acc, &self.mul(&self.from_rational(c)?, &tp));
                        tp = self.mul(&tp, &t);
                    }
                    Ok(acc)
                }
                Kind::Number(nf) => {
                    if cs.len() > nf.d {
                        return Err(Error::Parse(format!("too many coefficients in '{s}'")));
                    }
                    let mut v = cs;
                    v.resize(nf.d, BigRational::zero());
                    Ok(Elem::Nf(v))
                }
                _ => {
                    if cs.len() > 1 {
                        return Err(Error::Parse(format!("'{s}' is not in the base field")));
                    }
                    self.from_rational(cs.first().unwrap_or(&BigRational::zero()))
                }
            };
        }
        self.from_rational(&parse_rational(s)?)
    }

    /// Canonical literal for an element.
    pub fn format(&self, a: &Elem) -> String {
        match (&self.0.kind, a) {
            (Kind::Prime(_), Elem::Fin(x)) => x.to_string(),
            (Kind::Ext(f), Elem::Fin(x)) => {
                if *x < f.p {
                    x.to_string()
                } else {
                    let d: Vec<String> = f.digits(*x).iter().map(|c| c.to_string()).collect();
                    format!("[{}]", d.join(","))
                }
            }
            (Kind::Rational, Elem::Rat(r)) => fmt_rational(r),
            (Kind::Number(_), Elem::Nf(v)) => {
                if v.iter().skip(1).all(|c| c.is_zero()) {
                    fmt_rational(&v[0])
                } else {
                    let d: Vec<String> = v.iter().map(fmt_rational).collect();
                    format!("[{}]", d.join(","))
                }
            }
            _ => foreign(self),
        }
    }

    /// Coefficients over the prime field (finite fields) as integers in [0, p).
    pub fn coords(&self, a: &Elem) -> Option<Vec<u64>> {
        match (&self.0.kind, a) {
            (Kind::Prime(_), Elem::Fin(x)) => Some(vec![*x]),
            (Kind::Ext(f), Elem::Fin(x)) => Some(f.digits(*x)),
            _ => None,
        }
    }

    pub fn element(&self, value: Elem) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    /// Checks that an element is a valid canonical representative of this field.
    pub fn contains(&self, a: &Elem) -> bool {
        match (&self.0.kind, a) {
            (Kind::Prime(p), Elem::Fin(x)) => x < p,
            (Kind::Ext(f), Elem::Fin(x)) => *x < f.q,
            (Kind::Rational, Elem::Rat(_)) => true,
            (Kind::Number(nf), Elem::Nf(v)) => v.len() == nf.d,
            _ => false,
        }
    }

    /// Embedding of `sub` into `self`, when one exists: prime field into any
    /// extension of the same characteristic, F_{p^j} into F_{p^k} for j | k
    /// (generator sent to the smallest root of its modulus), Q into number fields.
    pub fn embedding_from(&self, sub: &Field) -> Result<Embedding> {
        let fail = || Error::UnsupportedField(format!("no embedding of {sub} into {self}"));
        let image = match (&sub.0.kind, &self.0.kind) {
            (Kind::Rational, _) => None,
            (Kind::Prime(p), _) if *p == self.characteristic() => None,
            (Kind::Ext(fs), Kind::Ext(ft)) if fs.p == ft.p && ft.k % fs.k == 0 => {
                let m = UniPoly::new(
                    self,
                    fs.modulus
                        .iter()
                        .map(|&c| self.from_i64(c as i64))
                        .collect(),
                );
                let roots = m.roots()?;
                Some(roots.into_iter().min().ok_or_else(fail)?)
            }
            (Kind::Number(a), Kind::Number(b)) if a.modulus == b.modulus => self.generator(),
            _ => return Err(fail()),
        };
        Ok(Embedding {
            source: sub.clone(),
            target: self.clone(),
            image,
        })
    }
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let n: i64 = rng.gen_range(-20..=20);
    let d: i64 = rng.gen_range(1..=6);
    BigRational::new(n.into(), d.into())
}

#[cold]
fn foreign(f: &Field) -> ! {
    panic!("element does not belong to {f}")
}

/// A field homomorphism `source -> target`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    image: Option<Elem>,
}

impl Embedding {
    pub fn apply(&self, a: &Elem) -> Result<Elem> {
        let t = &self.target;
        match a {
            Elem::Rat(r) => t.from_rational(r),
            Elem::Fin(_) => {
                let cs = self
                    .source
                    .coords(a)
                    .ok_or(Error::SpecMismatch(self.source.to_string(), t.to_string()))?;
                match &self.image {
                    None => Ok(t.from_i64(cs[0] as i64)),
                    Some(g) => {
                        let mut acc = t.zero();
                        let mut gp = t.one();
                        for c in cs {
                            acc = t.add(&acc, &t.mul(&t.from_i64(c as i64), &gp));
                            gp = t.mul(&gp, g);
                        }
                        Ok(acc)
                    }
                }
            }
            Elem::Nf(v) => {
                let g = self.image.clone().unwrap_or_else(|| t.one());
                let mut acc = t.zero();
                let mut gp = t.one();
                for c in v {
                    acc = t.add(&acc, &t.mul(&t.from_rational(c)?, &gp));
                    gp = t.mul(&gp, &g);
                }
                Ok(acc)
            }
        }
    }

    pub fn target(&self) -> &Field {
        &self.target
    }
}

/// Field element bundled with its field; binary operations check that both
/// operands live in the same field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.spec().hash(state);
        self.value.hash(state);
    }
}

impl FieldElement {
    pub fn parse(field: &Field, s: &str) -> Result<FieldElement> {
        Ok(field.element(field.parse_elem(s)?))
    }

    pub fn from_i64(field: &Field, n: i64) -> FieldElement {
        field.element(field.from_i64(n))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn into_value(self) -> Elem {
        self.value
    }

    fn same(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::SpecMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self
            .field
            .element(self.field.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self
            .field
            .element(self.field.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self
            .field
            .element(self.field.mul(&self.value, &other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self
            .field
            .element(self.field.div(&self.value, &other.value)?))
    }

    pub fn neg(&self) -> FieldElement {
        self.field.element(self.field.neg(&self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.inv(&self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.element(self.field.pow(&self.value, e))
    }

    /// Equality that reports a mismatch instead of answering `false`.
    pub fn eq_checked(&self, other: &FieldElement) -> Result<bool> {
        self.same(other)?;
        Ok(self.value == other.value)
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(&self.value))
    }
}

/// Primitive n-th root of unity, the smallest one in canonical order.
pub fn root_of_unity(field: &Field, n: u64) -> Result<Elem> {
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    if n == 1 {
        return Ok(field.one());
    }
    let none = || Error::NoSuchRoot {
        n,
        field: field.to_string(),
    };
    match field.cardinality() {
        Some(q) => {
            if (q - 1) % n != 0 {
                return Err(none());
            }
            let mut poly = vec![field.zero(); n as usize + 1];
            poly[0] = field.neg(&field.one());
            poly[n as usize] = field.one();
            let roots = UniPoly::new(field, poly).distinct_roots()?;
            roots
                .into_iter()
                .filter(|r| field.mult_order(r) == Some(n))
                .min()
                .ok_or_else(none)
        }
        None => uni::char0_root_of_unity(field, n)?.ok_or_else(none),
    }
}

/// All y with y^n = x, in canonical order.
pub fn nth_root(field: &Field, x: &Elem, n: u32) -> Result<Vec<Elem>> {
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    let mut poly = vec![field.zero(); n as usize + 1];
    poly[0] = field.neg(x);
    poly[n as usize] = field.one();
    let mut r = UniPoly::new(field, poly).distinct_roots()?;
    r.sort();
    Ok(r)
}

impl Field {
    pub(crate) fn number_field(&self) -> Option<&[BigRational]> {
        match &self.0.kind {
            Kind::Number(nf) => Some(&nf.modulus),
            _ => None,
        }
    }

    pub(crate) fn is_rational(&self) -> bool {
        matches!(self.0.kind, Kind::Rational)
    }

    /// Rational coordinate view of a characteristic-0 element.
    pub(crate) fn rational_coords(&self, a: &Elem) -> Option<Vec<BigRational>> {
        match a {
            Elem::Rat(r) => Some(vec![r.clone()]),
            Elem::Nf(v) => Some(v.clone()),
            Elem::Fin(_) => None,
        }
    }

    /// Whether a characteristic-0 element is rational; returns the rational value.
    pub(crate) fn as_rational(&self, a: &Elem) -> Option<BigRational> {
        match a {
            Elem::Rat(r) => Some(r.clone()),
            Elem::Nf(v) if v.iter().skip(1).all(|c| c.is_zero()) => Some(v[0].clone()),
            _ => None,
        }
    }
}
