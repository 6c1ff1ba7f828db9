//! Cayley–Salmon equations, the reduction of a split cubic surface to the
//! octanomial form, and the catalog of automorphism strata.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::e6::{triad_pairs, TriadPair, Trio};
use crate::error::{Error, Result};
use crate::fields::{nth_root, Elem, Embedding, Field};
use crate::linalg::{self, Matrix};
use crate::poly::{monomials, scalar_multiple, HomForm, Mat4, Monomial};
use crate::surface::{plane_of, CubicSurface, MarkedLines};

mod graph;
mod strata;
mod verify;

pub use graph::{
    specialization_check, EdgeReport, Node, SpecializationGraph, SpecializationReport,
};
pub use strata::{
    catalog, eckardt_involution, sample_instance, solve_dagger, solve_star, stratum_automorphism,
    stratum_params, stratum_residuals, stratum_solutions, Candidate, FormVariant,
    StratumDescriptor, StratumInstance, DAGGER_SCAN_LIMIT,
};
pub use verify::{find_splitting, verify_stratum, Claim, Splitting, StratumReport};

/// The parameters (a0, a1, a2, a3) of the octanomial form
/// x0x1(x0 + x1 + a3x2 + a2x3) + x2x3(a1x0 + a0x1 + x2 + x3).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OctanomialParams {
    pub a0: Elem,
    pub a1: Elem,
    pub a2: Elem,
    pub a3: Elem,
}

impl OctanomialParams {
    pub fn new([a0, a1, a2, a3]: [Elem; 4]) -> OctanomialParams {
        OctanomialParams { a0, a1, a2, a3 }
    }

    pub fn from_i64(k: &Field, a: [i64; 4]) -> OctanomialParams {
        OctanomialParams::new(a.map(|x| k.from_i64(x)))
    }

    pub fn to_array(&self) -> [Elem; 4] {
        [
            self.a0.clone(),
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
        ]
    }

    pub fn format(&self, k: &Field) -> [String; 4] {
        self.to_array().map(|a| k.format(&a))
    }

    pub fn embed(&self, e: &Embedding) -> Result<OctanomialParams> {
        Ok(OctanomialParams::new([
            e.apply(&self.a0)?,
            e.apply(&self.a1)?,
            e.apply(&self.a2)?,
            e.apply(&self.a3)?,
        ]))
    }

    pub fn to_json(&self, k: &Field) -> Value {
        json!(self.format(k))
    }

    pub fn from_json(k: &Field, v: &Value) -> Result<OctanomialParams> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| Error::Parse("params must be an array of 4 elements".into()))?;
        let mut out = Vec::with_capacity(4);
        for x in arr {
            out.push(match x {
                Value::String(s) => k.parse_elem(s)?,
                Value::Number(n) => k.parse_elem(&n.to_string())?,
                _ => return Err(Error::Parse(format!("bad element literal {x}"))),
            });
        }
        Ok(OctanomialParams::new(out.try_into().unwrap()))
    }
}

const OCTA_MONOMIALS: [Monomial; 8] = [
    [2, 1, 0, 0],
    [1, 2, 0, 0],
    [1, 1, 1, 0],
    [1, 1, 0, 1],
    [1, 0, 1, 1],
    [0, 1, 1, 1],
    [0, 0, 2, 1],
    [0, 0, 1, 2],
];

pub fn octanomial_form(k: &Field, p: &OctanomialParams) -> HomForm {
    let one = k.one();
    let coeffs = [&one, &one, &p.a3, &p.a2, &p.a1, &p.a0, &one, &one];
    HomForm::from_terms(
        k,
        3,
        OCTA_MONOMIALS
            .iter()
            .copied()
            .zip(coeffs.into_iter().cloned()),
    )
    .expect("octanomial monomials have degree 3")
}

pub fn octanomial_surface(k: &Field, p: &OctanomialParams) -> CubicSurface {
    CubicSurface::new(octanomial_form(k, p)).expect("nonzero cubic")
}

/// f = scale · (π1π2π3 + λ π'1π'2π'3), planes given by normalized coefficients.
#[derive(Clone, Debug)]
pub struct CayleySalmon {
    pub pair: TriadPair,
    /// π1, π2, π3 (planes of the rows), then π'1, π'2, π'3 (columns).
    pub planes: [[Elem; 4]; 6],
    pub lambda: Elem,
    pub scale: Elem,
}

impl CayleySalmon {
    pub fn plane_forms(&self, k: &Field) -> [HomForm; 6] {
        std::array::from_fn(|i| HomForm::linear(k, &self.planes[i]))
    }

    /// π1π2π3 + λ π'1π'2π'3.
    pub fn form(&self, k: &Field) -> HomForm {
        let [p1, p2, p3, q1, q2, q3] = self.plane_forms(k);
        let a = p1.mul(&p2).and_then(|x| x.mul(&p3)).expect("same field");
        let b = q1.mul(&q2).and_then(|x| x.mul(&q3)).expect("same field");
        a.add(&b.scale(&self.lambda)).expect("same field")
    }

    /// The zero-diagonal determinantal matrix with determinant π1π2π3 + λπ'1π'2π'3.
    pub fn det_matrix(&self, k: &Field) -> [[HomForm; 3]; 3] {
        let [p1, p2, p3, q1, q2, q3] = self.plane_forms(k);
        let z = HomForm::zero(k, 1);
        [
            [z.clone(), q2.neg(), p3],
            [p1, z.clone(), q3.neg()],
            [q1.scale(&self.lambda), p2, z],
        ]
    }
}

fn trio_plane(m: &MarkedLines, trio: &Trio) -> Result<[Elem; 4]> {
    let k = &m.field;
    let plane = plane_of(k, m.line(trio[0]), m.line(trio[1])).ok_or_else(|| {
        Error::ConfigurationMismatch(format!("{} and {} do not span a plane", trio[0], trio[1]))
    })?;
    if !m.line(trio[2]).rows.iter().all(|p| {
        let s = p
            .iter()
            .zip(&plane)
            .fold(k.zero(), |acc, (x, y)| k.add(&acc, &k.mul(x, y)));
        k.is_zero(&s)
    }) {
        return Err(Error::ConfigurationMismatch(format!(
            "{} {} {} are not coplanar",
            trio[0], trio[1], trio[2]
        )));
    }
    Ok(plane)
}

fn product3(k: &Field, planes: &[[Elem; 4]]) -> HomForm {
    planes
        .iter()
        .map(|p| HomForm::linear(k, p))
        .reduce(|a, b| a.mul(&b).expect("same field"))
        .unwrap()
}

/// The Cayley–Salmon equation attached to a conjugate pair of triads: the
/// six plane equations come from the labeled lines, α and β in f = αP + βP'
/// from a linear solve, and the identity is checked on every coefficient.
pub fn cayley_salmon(x: &CubicSurface, m: &MarkedLines, pair: &TriadPair) -> Result<CayleySalmon> {
    let k = x.field();
    if m.field != *k {
        return Err(Error::SpecMismatch(m.field.to_string(), k.to_string()));
    }
    let mut planes = Vec::with_capacity(6);
    for t in pair.rows().iter().chain(pair.cols().iter()) {
        planes.push(trio_plane(m, t)?);
    }
    let planes: [[Elem; 4]; 6] = planes.try_into().unwrap();
    let p = product3(k, &planes[..3]);
    let q = product3(k, &planes[3..]);
    let mons = monomials(3);
    let sys = Matrix::from_rows(
        mons.iter()
            .map(|mm| vec![p.coeff(mm), q.coeff(mm)])
            .collect(),
    );
    let rhs: Vec<Elem> = mons.iter().map(|mm| x.form().coeff(mm)).collect();
    let fail = |why: &str| Error::IdentityFailure(format!("Cayley–Salmon equation: {why}"));
    let sol = linalg::solve(k, &sys, &rhs)
        .ok_or_else(|| fail("f is not in the span of the two products"))?;
    let (alpha, beta) = (&sol[0], &sol[1]);
    if k.is_zero(alpha) || k.is_zero(beta) {
        return Err(fail("degenerate coefficients"));
    }
    let cs = CayleySalmon {
        pair: pair.clone(),
        planes,
        lambda: k.div(beta, alpha)?,
        scale: alpha.clone(),
    };
    if cs.form(k).scale(&cs.scale) != *x.form() {
        return Err(fail("identity does not hold"));
    }
    Ok(cs)
}

fn det3(m: &[[HomForm; 3]; 3]) -> Result<HomForm> {
    let minor = |a: &HomForm, b: &HomForm, c: &HomForm, d: &HomForm| -> Result<HomForm> {
        a.mul(b)?.sub(&c.mul(d)?)
    };
    let t0 = m[0][0].mul(&minor(&m[1][1], &m[2][2], &m[1][2], &m[2][1])?)?;
    let t1 = m[0][1].mul(&minor(&m[1][0], &m[2][2], &m[1][2], &m[2][0])?)?;
    let t2 = m[0][2].mul(&minor(&m[1][0], &m[2][1], &m[1][1], &m[2][0])?)?;
    t0.sub(&t1)?.add(&t2)
}

/// λ ≠ 0 with det M = λ f.
pub fn det_rep_check(m3: &[[HomForm; 3]; 3], x: &CubicSurface) -> Result<Elem> {
    if m3
        .iter()
        .flatten()
        .any(|e| e.degree() != 1 || e.field() != x.field())
    {
        return Err(Error::NotADeterminantalRep);
    }
    let d = det3(m3)?;
    scalar_multiple(&d, x.form()).ok_or(Error::NotADeterminantalRep)
}

pub fn transpose3(m3: &[[HomForm; 3]; 3]) -> [[HomForm; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m3[j][i].clone()))
}

/// Output of the reduction: f∘T⁻¹ = scalar · octanomial(params).
#[derive(Clone, Debug)]
pub struct Reduction {
    pub pair: TriadPair,
    /// Row 0 and 1 give x0, x1; columns 0 and 1 give x2, x3.
    pub arrangement: TriadPair,
    pub cube_root_choice: usize,
    pub transform: Mat4,
    pub params: OctanomialParams,
    pub scalar: Elem,
}

impl Reduction {
    pub fn to_json(&self, k: &Field) -> Value {
        let trio = |t: &Trio| t.iter().map(|l| l.to_string()).collect::<Vec<_>>();
        json!({
            "pair": self.pair.rows().iter().map(trio).collect::<Vec<_>>(),
            "arrangement": self.arrangement.rows().iter().map(trio).collect::<Vec<_>>(),
            "cube_root_choice": self.cube_root_choice,
            "T": self.transform.to_json(k),
            "params": self.params.to_json(k),
            "scalar": k.format(&self.scalar),
        })
    }
}

/// Smallest extension (degree ≤ 12 over the given field) in which x has a cube root.
fn cube_root_suggestion(k: &Field, x: &Elem) -> String {
    if k.is_finite() {
        let p = k.characteristic();
        for m in 2..=12u32 {
            let Ok(big) = Field::finite(p, k.degree() * m) else {
                break;
            };
            let Ok(e) = big.embedding_from(k) else {
                continue;
            };
            let Ok(y) = e.apply(x) else { continue };
            if nth_root(&big, &y, 3).is_ok_and(|r| !r.is_empty()) {
                return big.spec().to_string();
            }
        }
        return format!("an extension of {k} of degree > 12");
    }
    match k.as_rational(x) {
        Some(r) => format!("NF:{},0,0,1", -r),
        None => format!(
            "an extension of {k} containing a cube root of {}",
            k.format(x)
        ),
    }
}

/// Rows of T are the planes π_1, π_2, π'_1, π'_2 of an arrangement; the third
/// planes then appear as the linear factors in the transformed form.
fn reduce_planes(
    k: &Field,
    f: &HomForm,
    rows: [[Elem; 4]; 4],
    cube_root_choice: usize,
) -> Result<(Mat4, OctanomialParams, Elem)> {
    let t = Mat4(rows);
    let tinv = t
        .inv(k)
        .map_err(|_| Error::IdentityFailure("the four planes are dependent".into()))?;
    let g = f.substitute(&tinv)?;
    for (mm, _) in g.terms() {
        if !OCTA_MONOMIALS.contains(mm) {
            return Err(Error::IdentityFailure(format!(
                "unexpected monomial {mm:?} after the plane change"
            )));
        }
    }
    let c = |m: Monomial| g.coeff(&m);
    let [a0, a1, a2, a3, b0, b1, b2, b3] = OCTA_MONOMIALS.map(c);
    if [&a0, &a1, &b2, &b3].iter().any(|v| k.is_zero(v)) {
        return Err(Error::NotSmooth);
    }
    // y = D z with D = diag(1, d1, d2, d3)
    let d1 = k.div(&a0, &a1)?;
    let r = k.div(&k.mul(&a0, &a0), &a1)?;
    let cube = k.div(&k.mul(&r, &b3), &k.mul(&b2, &b2))?;
    let roots = nth_root(k, &cube, 3)?;
    if roots.is_empty() {
        return Err(Error::CubeRootUnavailable {
            suggestion: cube_root_suggestion(k, &cube),
        });
    }
    let d2 = roots.get(cube_root_choice).cloned().ok_or_else(|| {
        Error::Parse(format!(
            "cube root choice {cube_root_choice} of {}",
            roots.len()
        ))
    })?;
    let d3 = k.div(&k.mul(&d2, &b2), &b3)?;
    let over_r = |v: Elem| k.div(&v, &r);
    let params = OctanomialParams {
        a3: over_r(k.mul(&k.mul(&d1, &d2), &a2))?,
        a2: over_r(k.mul(&k.mul(&d1, &d3), &a3))?,
        a1: over_r(k.mul(&k.mul(&d2, &d3), &b0))?,
        a0: over_r(k.mul(&k.mul(&k.mul(&d2, &d3), &d1), &b1))?,
    };
    let dinv = [k.one(), k.inv(&d1)?, k.inv(&d2)?, k.inv(&d3)?];
    let total = Mat4::from_fn(|i, j| k.mul(&dinv[i], &t.0[i][j]));
    Ok((total, params, r))
}

/// Number of cube roots of a nonzero cube in the field.
fn cube_root_count(k: &Field) -> Result<usize> {
    Ok(nth_root(k, &k.one(), 3)?.len())
}

/// The reduction of the proof of the normal form theorem for one arrangement
/// of a conjugate pair and one choice of cube root.
pub fn octanomial_reduce(
    x: &CubicSurface,
    m: &MarkedLines,
    pair: &TriadPair,
    ordering: usize,
    cube_root_choice: usize,
) -> Result<Reduction> {
    let k = x.field();
    if m.field != *k {
        return Err(Error::SpecMismatch(m.field.to_string(), k.to_string()));
    }
    let arrangements = pair.arrangements();
    let arr = arrangements.get(ordering).ok_or_else(|| {
        Error::Parse(format!(
            "ordering {ordering} out of range 0..{}",
            arrangements.len()
        ))
    })?;
    let rows = arr.rows();
    let cols = arr.cols();
    let planes = [
        trio_plane(m, &rows[0])?,
        trio_plane(m, &rows[1])?,
        trio_plane(m, &cols[0])?,
        trio_plane(m, &cols[1])?,
    ];
    let (transform, params, scalar) = reduce_planes(k, x.form(), planes, cube_root_choice)?;
    let lhs = x.form().substitute(&transform.inv(k)?)?;
    if lhs != octanomial_form(k, &params).scale(&scalar) {
        return Err(Error::IdentityFailure(
            "f∘T⁻¹ differs from the octanomial form".into(),
        ));
    }
    Ok(Reduction {
        pair: pair.clone(),
        arrangement: arr.clone(),
        cube_root_choice,
        transform,
        params,
        scalar,
    })
}

/// Lines of the surface (over its own field) with a marking; NotSplit when
/// fewer than 27 lines are rational.
pub fn split_marking(x: &CubicSurface) -> Result<MarkedLines> {
    let lines = crate::surface::lines_on(x)?;
    if lines.len() != 27 {
        return Err(Error::NotSplit { found: lines.len() });
    }
    crate::surface::marking_from(x.field(), &lines)
}

/// All octanomial parameters reachable over the surface's field: 120 pairs,
/// 72 arrangements each, and every cube root choice.
pub fn enumerate_octanomial_params(
    x: &CubicSurface,
    m: &MarkedLines,
) -> Result<BTreeSet<OctanomialParams>> {
    let k = x.field();
    if m.field != *k {
        return Err(Error::SpecMismatch(m.field.to_string(), k.to_string()));
    }
    let mut planes: BTreeMap<Trio, [Elem; 4]> = BTreeMap::new();
    for trio in crate::e6::tritangent_trios() {
        planes.insert(trio, trio_plane(m, &trio)?);
    }
    let plane = |t: &Trio| {
        let mut s = *t;
        s.sort();
        planes[&s].clone()
    };
    let choices = cube_root_count(k)?;
    let per_pair: Vec<Result<Vec<OctanomialParams>>> = triad_pairs()
        .par_iter()
        .map(|pair| {
            let mut out = Vec::new();
            for arr in pair.arrangements() {
                let (r, c) = (arr.rows(), arr.cols());
                let rows = [plane(&r[0]), plane(&r[1]), plane(&c[0]), plane(&c[1])];
                for choice in 0..choices {
                    let (_, params, _) = reduce_planes(k, x.form(), rows.clone(), choice)?;
                    out.push(params);
                }
            }
            Ok(out)
        })
        .collect();
    let mut set = BTreeSet::new();
    for r in per_pair {
        set.extend(r?);
    }
    Ok(set)
}

/// The labels of an arrangement as x0, x1, x2, x3 plane trios.
pub fn arrangement_planes(arr: &TriadPair) -> [Trio; 4] {
    let (r, c) = (arr.rows(), arr.cols());
    [r[0], r[1], c[0], c[1]]
}
