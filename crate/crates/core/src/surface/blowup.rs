use rand::Rng;

use super::{CubicSurface, MarkedLines, ProjLine};
use crate::e6::Label;
use crate::error::{Error, GeneralPositionFailure, Result};
use crate::fields::{Elem, Field};
use crate::linalg::{self, Matrix};
use crate::poly::{monomials, HomForm, Monomial};

fn plane_monomials(deg: u32) -> Vec<Monomial> {
    monomials(deg).into_iter().filter(|m| m[3] == 0).collect()
}

fn pad(p: &[Elem], k: &Field) -> Vec<Elem> {
    let mut v = p.to_vec();
    v.resize(4, k.zero());
    v
}

fn monomial_row(k: &Field, mons: &[Monomial], p: &[Elem]) -> Vec<Elem> {
    mons.iter()
        .map(|m| (0..3).fold(k.one(), |acc, i| k.mul(&acc, &k.pow(&p[i], m[i] as u64))))
        .collect()
}

fn proportional(k: &Field, a: &[Elem], b: &[Elem]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| k.mul(&a[i], &b[j]) == k.mul(&a[j], &b[i])))
}

/// No two points equal, no three on a line, not all six on a conic.
pub fn check_general_position(k: &Field, pts: &[Vec<Elem>]) -> Result<()> {
    if pts.len() != 6
        || pts
            .iter()
            .any(|p| p.len() != 3 || p.iter().all(|c| k.is_zero(c)))
    {
        return Err(Error::Parse(
            "need six nonzero points with 3 coordinates".into(),
        ));
    }
    let fail = |g| Err(Error::NotGeneralPosition(g));
    for i in 0..6 {
        for j in i + 1..6 {
            if proportional(k, &pts[i], &pts[j]) {
                return fail(GeneralPositionFailure::Repeated(i + 1, j + 1));
            }
        }
    }
    for i in 0..6 {
        for j in i + 1..6 {
            for l in j + 1..6 {
                let m = Matrix::from_rows(vec![pts[i].clone(), pts[j].clone(), pts[l].clone()]);
                if k.is_zero(&linalg::det(k, &m)) {
                    return fail(GeneralPositionFailure::Collinear(i + 1, j + 1, l + 1));
                }
            }
        }
    }
    let conics = plane_monomials(2);
    let m = Matrix::from_rows(pts.iter().map(|p| monomial_row(k, &conics, p)).collect());
    if k.is_zero(&linalg::det(k, &m)) {
        return fail(GeneralPositionFailure::Conic);
    }
    Ok(())
}

/// Basis of the plane cubics through the six points, as forms in x0, x1, x2.
fn cubic_system(k: &Field, pts: &[Vec<Elem>]) -> Result<Vec<HomForm>> {
    let mons = plane_monomials(3);
    let m = Matrix::from_rows(pts.iter().map(|p| monomial_row(k, &mons, p)).collect());
    let ker = linalg::kernel(k, &m);
    if ker.len() != 4 {
        return Err(Error::ConfigurationMismatch(format!(
            "{} cubics through the points",
            ker.len()
        )));
    }
    ker.iter()
        .map(|v| HomForm::from_terms(k, 3, mons.iter().copied().zip(v.iter().cloned())))
        .collect()
}

fn image(k: &Field, sys: &[HomForm], p: &[Elem]) -> Vec<Elem> {
    let p = pad(p, k);
    sys.iter().map(|c| c.eval(&p)).collect()
}

/// The cubic surface obtained by mapping P² to P³ by the cubics through six
/// points in general position. The unique cubic relation among the four
/// basis cubics is found by linear algebra on degree-9 plane forms.
pub fn from_six_points(k: &Field, pts: &[Vec<Elem>]) -> Result<CubicSurface> {
    check_general_position(k, pts)?;
    let sys = cubic_system(k, pts)?;
    let (f, kernel_dim) = cubic_relation(k, &sys)?;
    if kernel_dim != 1 {
        return Err(Error::ConfigurationMismatch(format!(
            "relation space has dimension {kernel_dim}"
        )));
    }
    let x = CubicSurface::new(f)?;
    if !x.is_smooth()? {
        return Err(Error::NotSmooth);
    }
    Ok(x)
}

/// The first relation found and the dimension of the relation space.
fn cubic_relation(k: &Field, sys: &[HomForm]) -> Result<(HomForm, usize)> {
    let rel_mons = monomials(3);
    let target = plane_monomials(9);
    let pows: Vec<Vec<HomForm>> = sys
        .iter()
        .map(|c| {
            let mut v = vec![HomForm::constant(k, k.one())];
            for e in 1..=3 {
                v.push(c.pow(e));
            }
            v
        })
        .collect();
    let mut cols = Vec::new();
    for m in &rel_mons {
        let mut prod = HomForm::constant(k, k.one());
        for i in 0..4 {
            if m[i] > 0 {
                prod = prod.mul(&pows[i][m[i] as usize])?;
            }
        }
        cols.push(target.iter().map(|t| prod.coeff(t)).collect::<Vec<_>>());
    }
    let mat = Matrix::from_rows(cols).transpose();
    let ker = linalg::kernel(k, &mat);
    let first = ker
        .first()
        .ok_or_else(|| Error::ConfigurationMismatch("no cubic relation".into()))?;
    let f = HomForm::from_terms(k, 3, rel_mons.iter().copied().zip(first.iter().cloned()))?;
    Ok((f, ker.len()))
}

/// Small integer directions tried, in order, when points on a line or conic are needed.
fn candidates(k: &Field) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let r = [1i64, -1, 2, -2, 3, -3, 0];
    r.into_iter().flat_map(move |a| {
        r.into_iter().flat_map(move |b| {
            r.into_iter()
                .map(move |c| vec![k.from_i64(a), k.from_i64(b), k.from_i64(c)])
        })
    })
}

fn line_from_images(k: &Field, imgs: impl Iterator<Item = Vec<Elem>>) -> Option<ProjLine> {
    let mut first: Option<Vec<Elem>> = None;
    for v in imgs {
        if v.iter().all(|c| k.is_zero(c)) {
            continue;
        }
        match &first {
            None => first = Some(v),
            Some(a) if !proportional(k, a, &v) => return ProjLine::through(k, a, &v).ok(),
            _ => {}
        }
    }
    None
}

/// The marking coming from the blow-up: E_i is the exceptional line over
/// P_i, F_ij the image of the line P_iP_j, G_j the image of the conic
/// through the five points other than P_j.
pub fn blowup_marking(x: &CubicSurface, pts: &[Vec<Elem>]) -> Result<MarkedLines> {
    let k = x.field();
    check_general_position(k, pts)?;
    let sys = cubic_system(k, pts)?;
    // the relation for this basis must be the given surface up to scalar
    let (f, _) = cubic_relation(k, &sys)?;
    if crate::poly::scalar_multiple(&f, x.form()).is_none() {
        return Err(Error::ConfigurationMismatch(
            "surface does not come from these points".into(),
        ));
    }
    let is_base = |p: &[Elem]| pts.iter().any(|b| proportional(k, b, p));
    let mut lines: Vec<Option<ProjLine>> = vec![None; 27];
    let missing =
        |what: String| Error::ConfigurationMismatch(format!("could not construct {what}"));

    for i in 0..6 {
        // columns of the Jacobian at P_i span the exceptional line
        let p = pad(&pts[i], k);
        let cols: Vec<Vec<Elem>> = (0..3)
            .map(|l| sys.iter().map(|c| c.partials()[l].eval(&p)).collect())
            .collect();
        let l =
            line_from_images(k, cols.into_iter()).ok_or_else(|| missing(format!("E{}", i + 1)))?;
        lines[Label::e(i + 1).index()] = Some(l);
    }
    for i in 0..6 {
        for j in i + 1..6 {
            let imgs = [1i64, 2, -1, -2, 3, -3, 4, 5].into_iter().filter_map(|t| {
                let t = k.from_i64(t);
                let q: Vec<Elem> = (0..3)
                    .map(|c| k.add(&pts[i][c], &k.mul(&t, &pts[j][c])))
                    .collect();
                (!q.iter().all(|c| k.is_zero(c)) && !is_base(&q)).then(|| image(k, &sys, &q))
            });
            let l =
                line_from_images(k, imgs).ok_or_else(|| missing(format!("F{}{}", i + 1, j + 1)))?;
            lines[Label::f(i + 1, j + 1).index()] = Some(l);
        }
    }
    let conic_mons = plane_monomials(2);
    for j in 0..6 {
        let five: Vec<&Vec<Elem>> = pts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, p)| p)
            .collect();
        let m = Matrix::from_rows(
            five.iter()
                .map(|p| monomial_row(k, &conic_mons, p))
                .collect(),
        );
        let ker = linalg::kernel(k, &m);
        let conic =
            HomForm::from_terms(k, 2, conic_mons.iter().copied().zip(ker[0].iter().cloned()))?;
        let a = pad(five[0], k);
        let imgs = candidates(k).filter_map(|r| {
            let r4 = pad(&r, k);
            let cr = conic.eval(&r4);
            if k.is_zero(&cr) {
                return None;
            }
            // conic(a + t r) = t (polar + t conic(r))
            let grad: Vec<Elem> = conic.partials().iter().map(|d| d.eval(&a)).collect();
            let polar = super::dot(k, &grad, &r4);
            if k.is_zero(&polar) {
                return None;
            }
            let t = k.neg(&k.div(&polar, &cr).ok()?);
            let q: Vec<Elem> = (0..3).map(|c| k.add(&a[c], &k.mul(&t, &r4[c]))).collect();
            (!is_base(&q)).then(|| image(k, &sys, &q))
        });
        let l = line_from_images(k, imgs).ok_or_else(|| missing(format!("G{}", j + 1)))?;
        lines[Label::g(j + 1).index()] = Some(l);
    }
    let marked = MarkedLines {
        field: k.clone(),
        lines: lines.into_iter().map(Option::unwrap).collect(),
    };
    for (i, l) in marked.lines.iter().enumerate() {
        if !x.contains_line(l) {
            return Err(Error::ConfigurationMismatch(format!(
                "{} is not on the surface",
                Label(i as u8)
            )));
        }
    }
    marked.verify()?;
    Ok(marked)
}

/// Six random points of P²(k) in general position.
pub fn random_six_points<R: Rng + ?Sized>(k: &Field, rng: &mut R) -> Result<Vec<Vec<Elem>>> {
    for _ in 0..10_000 {
        let pts: Vec<Vec<Elem>> = (0..6)
            .map(|_| (0..3).map(|_| k.random(rng)).collect())
            .collect();
        if pts
            .iter()
            .any(|p: &Vec<Elem>| p.iter().all(|c| k.is_zero(c)))
        {
            continue;
        }
        if check_general_position(k, &pts).is_ok() {
            return Ok(pts
                .into_iter()
                .map(|p| {
                    let lead = p.iter().find(|c| !k.is_zero(c)).cloned().unwrap();
                    let inv = k.inv(&lead).unwrap();
                    p.iter().map(|c| k.mul(c, &inv)).collect()
                })
                .collect());
        }
    }
    Err(Error::NoSolutionInField(format!(
        "six points in general position over {k}"
    )))
}
