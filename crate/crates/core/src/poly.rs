//! Homogeneous forms in x0..x3 and 4×4 matrices acting on them.
//!
//! Substitution convention: `(f∘M)(x) = f(Mx)`, so row i of M is the linear
//! form that replaces x_i.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::{Elem, Field, FieldElement};
use crate::linalg::{self, Matrix};

/// Exponents (d0, d1, d2, d3).
pub type Monomial = [u32; 4];

/// All monomials of the given degree, exponent tuples in lexicographically
/// descending order (x0^d first, x3^d last).
pub fn monomials(degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d0 in (0..=degree).rev() {
        for d1 in (0..=degree - d0).rev() {
            for d2 in (0..=degree - d0 - d1).rev() {
                out.push([d0, d1, d2, degree - d0 - d1 - d2]);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomForm {
    field: Field,
    degree: u32,
    terms: BTreeMap<Monomial, Elem>,
}

impl HomForm {
    pub fn zero(field: &Field, degree: u32) -> HomForm {
        HomForm {
            field: field.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from (monomial, coefficient) pairs, summing repeats.
    pub fn from_terms(
        field: &Field,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, Elem)>,
    ) -> Result<HomForm> {
        let mut f = HomForm::zero(field, degree);
        for (m, c) in terms {
            if m.iter().sum::<u32>() != degree {
                return Err(Error::Parse(format!("monomial {m:?} has wrong degree")));
            }
            f.add_term(m, &c);
        }
        Ok(f)
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_i64_terms(field: &Field, degree: u32, terms: &[(Monomial, i64)]) -> HomForm {
        HomForm::from_terms(
            field,
            degree,
            terms.iter().map(|(m, c)| (*m, field.from_i64(*c))),
        )
        .expect("consistent degrees")
    }

    /// The linear form c0 x0 + c1 x1 + c2 x2 + c3 x3.
    pub fn linear(field: &Field, c: &[Elem]) -> HomForm {
        let mut f = HomForm::zero(field, 1);
        for (i, ci) in c.iter().enumerate().take(4) {
            let mut m = [0; 4];
            m[i] = 1;
            f.add_term(m, ci);
        }
        f
    }

    pub fn var(field: &Field, i: usize) -> HomForm {
        let mut c = vec![field.zero(); 4];
        c[i] = field.one();
        HomForm::linear(field, &c)
    }

    pub fn constant(field: &Field, c: Elem) -> HomForm {
        let mut f = HomForm::zero(field, 0);
        f.add_term([0; 4], &c);
        f
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Elem) {
        let f = &self.field;
        if f.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = f.add(v, c);
                if f.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Coefficients in the fixed monomial order of [`monomials`].
    pub fn coeff_vector(&self) -> Vec<Elem> {
        monomials(self.degree)
            .iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    pub fn from_coeff_vector(field: &Field, degree: u32, c: &[Elem]) -> Result<HomForm> {
        let ms = monomials(degree);
        if ms.len() != c.len() {
            return Err(Error::Parse(format!(
                "expected {} coefficients, got {}",
                ms.len(),
                c.len()
            )));
        }
        HomForm::from_terms(field, degree, ms.into_iter().zip(c.iter().cloned()))
    }

    /// Coefficients of a linear form, indexed by variable.
    pub fn linear_coeffs(&self) -> [Elem; 4] {
        assert_eq!(self.degree, 1);
        std::array::from_fn(|i| {
            let mut m = [0; 4];
            m[i] = 1;
            self.coeff(&m)
        })
    }

    fn check_same(&self, other: &HomForm) -> Result<()> {
        if self.field != other.field {
            return Err(Error::SpecMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &HomForm) -> Result<HomForm> {
        self.check_same(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Parse("adding forms of different degrees".into()));
        }
        let mut out = self.clone();
        if out.is_zero() {
            out.degree = other.degree;
        }
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomForm) -> Result<HomForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HomForm {
        let f = &self.field;
        HomForm {
            field: f.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, s: &Elem) -> HomForm {
        let f = &self.field;
        if f.is_zero(s) {
            return HomForm::zero(f, self.degree);
        }
        HomForm {
            field: f.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, f.mul(c, s))).collect(),
        }
    }

    pub fn mul(&self, other: &HomForm) -> Result<HomForm> {
        self.check_same(other)?;
        let f = &self.field;
        let mut out = HomForm::zero(f, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]];
                out.add_term(m, &f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> HomForm {
        let mut out = HomForm::constant(&self.field, self.field.one());
        for _ in 0..e {
            out = out.mul(self).expect("same field");
        }
        out
    }

    /// Exact evaluation at a point given by raw coordinates.
    pub fn eval(&self, pt: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..4 {
                if m[i] > 0 {
                    t = f.mul(&t, &f.pow(&pt[i], m[i] as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Evaluation with field checks on every coordinate.
    pub fn eval_checked(&self, pt: &[FieldElement]) -> Result<FieldElement> {
        if pt.len() != 4 {
            return Err(Error::Parse("points need 4 coordinates".into()));
        }
        for x in pt {
            if *x.field() != self.field {
                return Err(Error::SpecMismatch(
                    self.field.to_string(),
                    x.field().to_string(),
                ));
            }
        }
        let raw: Vec<Elem> = pt.iter().map(|x| x.value().clone()).collect();
        Ok(self.field.element(self.eval(&raw)))
    }

    /// f∘M for an invertible M.
    pub fn substitute(&self, m: &Mat4) -> Result<HomForm> {
        if self.field.is_zero(&m.det(&self.field)) {
            return Err(Error::SingularMatrix);
        }
        Ok(self.substitute_unchecked(m))
    }

    /// f∘M without the invertibility check (M may be singular).
    pub fn substitute_unchecked(&self, m: &Mat4) -> HomForm {
        let f = &self.field;
        let rows: Vec<HomForm> = (0..4).map(|i| HomForm::linear(f, &m.0[i])).collect();
        let mut powers: Vec<Vec<HomForm>> = rows
            .iter()
            .map(|r| vec![HomForm::constant(f, f.one()), r.clone()])
            .collect();
        for (i, r) in rows.iter().enumerate() {
            while powers[i].len() <= self.degree as usize {
                let next = powers[i].last().unwrap().mul(r).expect("same field");
                powers[i].push(next);
            }
        }
        let mut out = HomForm::zero(f, self.degree);
        for (mono, c) in &self.terms {
            let mut t = HomForm::constant(f, c.clone());
            for i in 0..4 {
                if mono[i] > 0 {
                    t = t.mul(&powers[i][mono[i] as usize]).expect("same field");
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, &cc);
            }
        }
        out
    }

    /// ∂f/∂x_i for i = 0..3, with coefficients reduced in the field.
    pub fn partials(&self) -> [HomForm; 4] {
        let f = &self.field;
        std::array::from_fn(|i| {
            let mut out = HomForm::zero(f, self.degree.saturating_sub(1));
            for (m, c) in &self.terms {
                if m[i] == 0 {
                    continue;
                }
                let mut mm = *m;
                mm[i] -= 1;
                out.add_term(mm, &f.mul(c, &f.from_i64(m[i] as i64)));
            }
            out
        })
    }

    /// Whether the form involves x3 (used for plane forms in three variables).
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m[i] > 0)
    }
}

/// λ ≠ 0 with f = λ·g, if it exists. Zero forms never qualify.
pub fn scalar_multiple(f: &HomForm, g: &HomForm) -> Option<Elem> {
    if f.field != g.field || f.degree != g.degree || f.is_zero() || g.is_zero() {
        return None;
    }
    if f.terms.len() != g.terms.len() {
        return None;
    }
    let k = &f.field;
    let (m0, c0) = g.terms.iter().next()?;
    let fc = f.terms.get(m0)?;
    let lambda = k.div(fc, c0).ok()?;
    for (m, c) in &g.terms {
        let fv = f.terms.get(m)?;
        if *fv != k.mul(&lambda, c) {
            return None;
        }
    }
    Some(lambda)
}

impl fmt::Display for HomForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let f = &self.field;
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let vars: Vec<String> = (0..4)
                .filter(|&i| m[i] > 0)
                .map(|i| {
                    if m[i] == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{}", m[i])
                    }
                })
                .collect();
            if f.is_one(c) && !vars.is_empty() {
                write!(out, "{}", vars.join("*"))?;
            } else if vars.is_empty() {
                write!(out, "{}", f.format(c))?;
            } else {
                write!(out, "({})*{}", f.format(c), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// 4×4 matrix; row i gives the image of coordinate x_i under substitution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat4(pub [[Elem; 4]; 4]);

impl Mat4 {
    pub fn identity(f: &Field) -> Mat4 {
        Mat4(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { f.one() } else { f.zero() })
        }))
    }

    pub fn from_i64(f: &Field, rows: [[i64; 4]; 4]) -> Mat4 {
        Mat4(std::array::from_fn(|i| {
            std::array::from_fn(|j| f.from_i64(rows[i][j]))
        }))
    }

    pub fn from_fn(mut g: impl FnMut(usize, usize) -> Elem) -> Mat4 {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| g(i, j))))
    }

    pub fn diag(d: [Elem; 4], f: &Field) -> Mat4 {
        Mat4::from_fn(|i, j| if i == j { d[i].clone() } else { f.zero() })
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.0[i][j]
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.0.iter().map(|r| r.to_vec()).collect())
    }

    pub fn from_matrix(m: &Matrix) -> Mat4 {
        assert!(m.rows == 4 && m.cols == 4);
        Mat4::from_fn(|i, j| m.get(i, j).clone())
    }

    pub fn mul(&self, f: &Field, other: &Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| {
            (0..4).fold(f.zero(), |acc, k| {
                f.add(&acc, &f.mul(&self.0[i][k], &other.0[k][j]))
            })
        })
    }

    pub fn apply(&self, f: &Field, v: &[Elem]) -> [Elem; 4] {
        std::array::from_fn(|i| {
            (0..4).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&self.0[i][k], &v[k])))
        })
    }

    pub fn transpose(&self) -> Mat4 {
        Mat4::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn det(&self, f: &Field) -> Elem {
        linalg::det(f, &self.to_matrix())
    }

    pub fn inv(&self, f: &Field) -> Result<Mat4> {
        Ok(Mat4::from_matrix(&linalg::inverse(f, &self.to_matrix())?))
    }

    pub fn scale(&self, f: &Field, s: &Elem) -> Mat4 {
        Mat4::from_fn(|i, j| f.mul(&self.0[i][j], s))
    }

    pub fn pow(&self, f: &Field, e: u32) -> Mat4 {
        let mut out = Mat4::identity(f);
        for _ in 0..e {
            out = out.mul(f, self);
        }
        out
    }

    /// Whether the matrix is a nonzero scalar multiple of the identity.
    pub fn is_scalar(&self, f: &Field) -> bool {
        let d = &self.0[0][0];
        !f.is_zero(d)
            && (0..4).all(|i| {
                (0..4).all(|j| {
                    if i == j {
                        self.0[i][j] == *d
                    } else {
                        f.is_zero(&self.0[i][j])
                    }
                })
            })
    }

    /// Order in PGL_4, searched up to `max`.
    pub fn projective_order(&self, f: &Field, max: u32) -> Option<u32> {
        let mut acc = self.clone();
        for n in 1..=max {
            if acc.is_scalar(f) {
                return Some(n);
            }
            acc = acc.mul(f, self);
        }
        None
    }

    pub fn to_json(&self, f: &Field) -> Value {
        Value::Array(
            self.0
                .iter()
                .flat_map(|r| r.iter().map(|x| Value::String(f.format(x))))
                .collect(),
        )
    }

    pub fn from_json(f: &Field, v: &Value) -> Result<Mat4> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array".into()))?;
        if arr.len() != 16 {
            return Err(Error::Parse("matrix needs 16 entries".into()));
        }
        let vals: Vec<Elem> = arr
            .iter()
            .map(|x| parse_literal(f, x))
            .collect::<Result<_>>()?;
        Ok(Mat4::from_fn(|i, j| vals[4 * i + j].clone()))
    }
}

fn parse_literal(f: &Field, v: &Value) -> Result<Elem> {
    match v {
        Value::String(s) => f.parse_elem(s),
        Value::Number(n) => f.parse_elem(&n.to_string()),
        _ => Err(Error::Parse(format!("bad element literal {v}"))),
    }
}

/// `{ "field": spec, "degree": d, "coeffs": [...] }` in the fixed monomial order.
pub fn form_to_json(f: &HomForm) -> Value {
    json!({
        "field": f.field.spec().to_string(),
        "degree": f.degree,
        "coeffs": f.coeff_vector().iter().map(|c| f.field.format(c)).collect::<Vec<_>>(),
    })
}

pub fn form_from_json(v: &Value) -> Result<HomForm> {
    let spec = v
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing field".into()))?;
    let field = Field::parse(spec)?;
    let degree = v
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing degree".into()))? as u32;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing coeffs".into()))?;
    let c: Vec<Elem> = coeffs
        .iter()
        .map(|x| parse_literal(&field, x))
        .collect::<Result<_>>()?;
    HomForm::from_coeff_vector(&field, degree, &c)
}
