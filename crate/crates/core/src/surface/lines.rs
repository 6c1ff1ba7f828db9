use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{projective_points, CubicSurface, ProjLine};
use crate::e6::{self, incidence, Label, WeylElement};
use crate::error::{Error, Result};
use crate::fields::{Elem, Field, UniPoly};
use crate::linalg::{self, Matrix};

/// Fields up to this size are searched completely; larger ones start from a seed line.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

/// All lines on X defined over its (finite) field, sorted by echelon key.
///
/// Every line meets the plane x3 = 0, so it suffices to find, for each
/// rational point P of the plane section, the directions Q with
/// f(P + tQ) ≡ 0. The coefficient of t is linear in Q, which cuts the
/// directions down to a pencil; the t² and t³ coefficients are then a
/// quadratic and a cubic on that pencil whose common roots give the lines.
///
/// Over fields larger than [`EXHAUSTIVE_LIMIT`] the search instead starts
/// from a rational coordinate line x_i = x_j = 0 on X (see
/// [`lines_from_seed`]), which finds every line once the surface is split.
pub fn lines_on(x: &CubicSurface) -> Result<Vec<ProjLine>> {
    let k = x.field();
    let q = k
        .cardinality()
        .ok_or_else(|| Error::UnsupportedField(format!("lines over {k} need a finite field")))?;
    if !x.is_smooth()? {
        return Err(Error::NotSmooth);
    }
    if q > EXHAUSTIVE_LIMIT {
        let seed = coordinate_lines(k)
            .into_iter()
            .find(|l| x.contains_line(l))
            .ok_or_else(|| {
                Error::UnsupportedField(format!(
                    "{k} is too large for a search without a seed line"
                ))
            })?;
        return lines_from_seed(x, &seed);
    }
    let plane = plane_section_points(x)?;
    let found: Vec<Vec<ProjLine>> = plane
        .par_iter()
        .map(|p| lines_through(x, p))
        .collect::<Result<_>>()?;
    let set: BTreeSet<ProjLine> = found.into_iter().flatten().collect();
    Ok(set.into_iter().collect())
}

/// The six lines x_i = x_j = 0.
pub fn coordinate_lines(k: &Field) -> Vec<ProjLine> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let free: Vec<usize> = (0..4).filter(|&c| c != i && c != j).collect();
            let mut a = vec![k.zero(); 4];
            let mut b = vec![k.zero(); 4];
            a[free[0]] = k.one();
            b[free[1]] = k.one();
            out.push(ProjLine::through(k, &a, &b).unwrap());
        }
    }
    out
}

/// Rational points of X on the plane x3 = 0: one cubic in x2 per point [a:b] of P¹.
fn plane_section_points(x: &CubicSurface) -> Result<Vec<Vec<Elem>>> {
    let k = x.field();
    let mut out = Vec::new();
    let mut top = vec![k.zero(); 4];
    top[2] = k.one();
    if k.is_zero(&x.eval(&top)) {
        out.push(top.clone());
    }
    let mut slopes: Vec<[Elem; 2]> = vec![[k.zero(), k.one()]];
    slopes.extend(k.elements()?.map(|t| [k.one(), t]));
    for [a, b] in slopes {
        let base = vec![a, b, k.zero(), k.zero()];
        let c = x.restrict(&base, &top);
        let poly = UniPoly::new(k, c.to_vec());
        let ts: Vec<Elem> = if poly.is_zero() {
            k.elements()?.collect()
        } else {
            poly.distinct_roots()?
        };
        for t in ts {
            let mut p = base.clone();
            p[2] = t;
            out.push(p);
        }
    }
    Ok(out)
}

/// Lines on X reachable from a known line by repeatedly taking the ten
/// lines that meet it. Works over any field with exact root finding and
/// finds all 27 lines when the surface is split.
pub fn lines_from_seed(x: &CubicSurface, seed: &ProjLine) -> Result<Vec<ProjLine>> {
    if !x.contains_line(seed) {
        return Err(Error::ConfigurationMismatch(
            "seed line is not on the surface".into(),
        ));
    }
    let mut found: BTreeSet<ProjLine> = BTreeSet::from([seed.clone()]);
    let mut queue = vec![seed.clone()];
    while let Some(l) = queue.pop() {
        if found.len() == 27 {
            break;
        }
        for n in lines_meeting(x, &l)? {
            if found.insert(n.clone()) {
                queue.push(n);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Rational lines on X meeting the line L (ten when the surface is split).
///
/// Planes through L form a pencil π(u:v); the residual conic of X ∩ π is
/// degenerate exactly on the five tritangent planes through L, the roots
/// of a binary quintic discriminant.
pub fn lines_meeting(x: &CubicSurface, l: &ProjLine) -> Result<Vec<ProjLine>> {
    let k = x.field();
    // basis A, B of L completed by two unit vectors C, D
    let mut basis: Vec<Vec<Elem>> = vec![l.rows[0].to_vec(), l.rows[1].to_vec()];
    for i in 0..4 {
        if basis.len() == 4 {
            break;
        }
        let mut e = vec![k.zero(); 4];
        e[i] = k.one();
        let mut trial = basis.clone();
        trial.push(e.clone());
        if linalg::rank(k, &Matrix::from_rows(trial)) == basis.len() + 1 {
            basis.push(e);
        }
    }
    let m = crate::poly::Mat4::from_fn(|i, j| basis[j][i].clone());
    // g(z) = f(z0 A + z1 B + z2 C + z3 D)
    let g = x.form().substitute(&m)?;
    // residual conic coefficients in y0, y1, y2 as binary forms in (u, v), u^i v^(d-i) stored at index i
    let conic = |a: u32, b: u32| -> Vec<Elem> {
        let c = 2 - a - b;
        (0..=c + 1)
            .map(|i| g.coeff(&[a, b, i, c + 1 - i]))
            .collect()
    };
    let (a00, a11, a01) = (conic(2, 0), conic(0, 2), conic(1, 1));
    let (a02, a12, a22) = (conic(1, 0), conic(0, 1), conic(0, 0));
    let bf = BinaryForms(k);
    let disc = bf.sum(&[
        bf.scale(&bf.mul(&bf.mul(&a00, &a11), &a22), 4),
        bf.mul(&bf.mul(&a01, &a02), &a12),
        bf.scale(&bf.mul(&a00, &bf.mul(&a12, &a12)), -1),
        bf.scale(&bf.mul(&a11, &bf.mul(&a02, &a02)), -1),
        bf.scale(&bf.mul(&a22, &bf.mul(&a01, &a01)), -1),
    ]);
    let mut out = BTreeSet::new();
    for (u, v) in bf.roots(&disc)? {
        let ev = |c: &Vec<Elem>| bf.eval(c, &u, &v);
        let q = [ev(&a00), ev(&a11), ev(&a22), ev(&a01), ev(&a02), ev(&a12)];
        for comp in split_conic(k, &q)? {
            // plane coordinates y ↦ z = (y0, y1, u y2, v y2) ↦ M z
            let lift = |y: &[Elem]| -> Vec<Elem> {
                let z = [
                    y[0].clone(),
                    y[1].clone(),
                    k.mul(&u, &y[2]),
                    k.mul(&v, &y[2]),
                ];
                m.apply(k, &z).to_vec()
            };
            let line = ProjLine::through(k, &lift(&comp[0]), &lift(&comp[1]))?;
            if !x.contains_line(&line) {
                return Err(Error::ConfigurationMismatch(
                    "residual component is not on the surface".into(),
                ));
            }
            out.insert(line);
        }
    }
    Ok(out.into_iter().collect())
}

/// Binary forms stored by coefficient of u^i v^(d-i).
struct BinaryForms<'a>(&'a Field);

impl BinaryForms<'_> {
    fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let k = self.0;
        let mut out = vec![k.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(x, y));
            }
        }
        out
    }

    fn scale(&self, a: &[Elem], s: i64) -> Vec<Elem> {
        let s = self.0.from_i64(s);
        a.iter().map(|x| self.0.mul(x, &s)).collect()
    }

    fn sum(&self, parts: &[Vec<Elem>]) -> Vec<Elem> {
        let k = self.0;
        let n = parts[0].len();
        (0..n)
            .map(|i| parts.iter().fold(k.zero(), |acc, p| k.add(&acc, &p[i])))
            .collect()
    }

    fn eval(&self, a: &[Elem], u: &Elem, v: &Elem) -> Elem {
        let k = self.0;
        let d = a.len() as u64 - 1;
        a.iter().enumerate().fold(k.zero(), |acc, (i, c)| {
            let t = k.mul(&k.mul(c, &k.pow(u, i as u64)), &k.pow(v, d - i as u64));
            k.add(&acc, &t)
        })
    }

    /// Distinct projective roots (u : v), with v = 1 or (1 : 0).
    fn roots(&self, a: &[Elem]) -> Result<Vec<(Elem, Elem)>> {
        let k = self.0;
        if a.iter().all(|c| k.is_zero(c)) {
            return Err(Error::NotSmooth);
        }
        let mut out: Vec<(Elem, Elem)> = UniPoly::new(k, a.to_vec())
            .distinct_roots()?
            .into_iter()
            .map(|s| (s, k.one()))
            .collect();
        if k.is_zero(a.last().unwrap()) {
            out.push((k.one(), k.zero()));
        }
        Ok(out)
    }
}

/// The two lines of a degenerate conic
/// q00 y0² + q11 y1² + q22 y2² + q01 y0y1 + q02 y0y2 + q12 y1y2,
/// each given by two points, when both are rational.
fn split_conic(k: &Field, q: &[Elem; 6]) -> Result<Vec<[Vec<Elem>; 2]>> {
    let evalq = |y: &[Elem]| -> Elem {
        let t = [
            k.mul(&q[0], &k.mul(&y[0], &y[0])),
            k.mul(&q[1], &k.mul(&y[1], &y[1])),
            k.mul(&q[2], &k.mul(&y[2], &y[2])),
            k.mul(&q[3], &k.mul(&y[0], &y[1])),
            k.mul(&q[4], &k.mul(&y[0], &y[2])),
            k.mul(&q[5], &k.mul(&y[1], &y[2])),
        ];
        k.sum(&t)
    };
    let comb = |a: &[Elem], s: &Elem, b: &[Elem]| -> Vec<Elem> {
        (0..3).map(|i| k.add(&a[i], &k.mul(s, &b[i]))).collect()
    };
    // Q(a + s b) = Q(a) + s B(a, b) + s² Q(b)
    let on_line = |a: &[Elem], b: &[Elem]| -> [Elem; 3] {
        let qa = evalq(a);
        let qb = evalq(b);
        let one = k.one();
        let qab = evalq(&comb(a, &one, b));
        [qa.clone(), k.sub(&k.sub(&qab, &qa), &qb), qb]
    };
    let vanishes_on = |a: &[Elem], b: &[Elem]| on_line(a, b).iter().all(|c| k.is_zero(c));
    let pt = |v: [i64; 3]| -> Vec<Elem> { v.iter().map(|&c| k.from_i64(c)).collect() };
    let aux: Vec<(Vec<Elem>, Vec<Elem>)> = vec![
        (pt([1, 0, 0]), pt([0, 1, 0])),
        (pt([0, 0, 1]), pt([1, 0, 0])),
        (pt([0, 0, 1]), pt([0, 1, 0])),
        (pt([0, 0, 1]), pt([1, 1, 0])),
        (pt([1, 0, 1]), pt([0, 1, 1])),
        (pt([1, 1, 1]), pt([1, -1, 0])),
        (pt([1, 2, 1]), pt([2, 1, 0])),
        (pt([1, 0, 2]), pt([0, 1, 3])),
    ];
    let mut pool: Vec<Vec<Elem>> = Vec::new();
    let mut comps: Vec<[Vec<Elem>; 2]> = Vec::new();
    let same = |a: &[Elem], b: &[Elem]| {
        (0..3).all(|i| (0..3).all(|j| k.mul(&a[i], &b[j]) == k.mul(&a[j], &b[i])))
    };
    let add_comp = |a: Vec<Elem>, b: Vec<Elem>, comps: &mut Vec<[Vec<Elem>; 2]>| {
        let dup = comps.iter().any(|c| {
            let m = Matrix::from_rows(vec![c[0].clone(), c[1].clone(), a.clone(), b.clone()]);
            linalg::rank(k, &m) == 2
        });
        if !dup {
            comps.push([a, b]);
        }
    };
    for (a, b) in aux {
        if linalg::rank(k, &Matrix::from_rows(vec![a.clone(), b.clone()])) < 2 {
            continue;
        }
        if vanishes_on(&a, &b) {
            add_comp(a, b, &mut comps);
        } else {
            let c = on_line(&a, &b);
            let poly = UniPoly::new(k, c.to_vec());
            for s in poly.distinct_roots()? {
                pool.push(comb(&a, &s, &b));
            }
            if k.is_zero(&c[2]) {
                pool.push(b.clone());
            }
        }
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                if !same(&pool[i], &pool[j]) && vanishes_on(&pool[i], &pool[j]) {
                    add_comp(pool[i].clone(), pool[j].clone(), &mut comps);
                }
            }
        }
        if comps.len() >= 2 {
            break;
        }
    }
    Ok(comps)
}

/// Lines on X through a point P of X.
fn lines_through(x: &CubicSurface, p: &[Elem]) -> Result<Vec<ProjLine>> {
    let k = x.field();
    let pivot = p.iter().position(|c| !k.is_zero(c)).unwrap();
    let grad: Vec<Elem> = x.partials().iter().map(|d| d.eval(p)).collect();
    let mut e = vec![k.zero(); 4];
    e[pivot] = k.one();
    // directions Q with Q_pivot = 0 and ∇f(P)·Q = 0
    let dirs = linalg::kernel(k, &Matrix::from_rows(vec![grad, e]));
    let mut out = Vec::new();
    if dirs.len() != 2 {
        // P is singular; test every direction
        for q in projective_points(k, 3)? {
            if !k.is_zero(&q[pivot]) {
                continue;
            }
            if let Ok(l) = ProjLine::through(k, p, &q) {
                if x.contains_line(&l) {
                    out.push(l);
                }
            }
        }
        return Ok(out);
    }
    let (a, b) = (&dirs[0], &dirs[1]);
    // g(Q) = Σ P_i ∂f/∂x_i (Q); the t² coefficient of f(P + tQ)
    let g = x
        .partials()
        .iter()
        .zip(p)
        .fold(crate::poly::HomForm::zero(k, 2), |acc, (d, pi)| {
            acc.add(&d.scale(pi)).unwrap()
        });
    let gd = g.partials();
    let polar = |h: &[crate::poly::HomForm], at: &[Elem], dir: &[Elem]| -> Elem {
        super::dot(k, &h.iter().map(|d| d.eval(at)).collect::<Vec<_>>(), dir)
    };
    // Q = a + s b
    let u2 = UniPoly::new(k, vec![g.eval(a), polar(&gd, a, b), g.eval(b)]);
    let u3 = UniPoly::new(k, vec![x.eval(a), x.polar(a, b), x.polar(b, a), x.eval(b)]);
    let mut dirs_found: Vec<Vec<Elem>> = Vec::new();
    let common = match (u2.is_zero(), u3.is_zero()) {
        (true, true) => Some(k.elements()?.collect::<Vec<_>>()),
        (true, false) => Some(u3.distinct_roots()?),
        (false, true) => Some(u2.distinct_roots()?),
        (false, false) => {
            let d = u2.gcd(&u3);
            if d.degree() == Some(0) {
                None
            } else {
                Some(d.distinct_roots()?)
            }
        }
    };
    for s in common.unwrap_or_default() {
        dirs_found.push((0..4).map(|i| k.add(&a[i], &k.mul(&s, &b[i]))).collect());
    }
    // s = ∞
    if k.is_zero(&g.eval(b)) && k.is_zero(&x.eval(b)) {
        dirs_found.push(b.clone());
    }
    for q in dirs_found {
        let l = ProjLine::through(k, p, &q)?;
        debug_assert!(x.contains_line(&l));
        out.push(l);
    }
    Ok(out)
}

/// Whether the smooth point P of X is an Eckardt point: the second
/// fundamental form vanishes, so the tangent plane section is three
/// concurrent lines. Needs no lines and no extension of the field.
pub fn is_eckardt_point(x: &CubicSurface, p: &[Elem]) -> Result<bool> {
    let k = x.field();
    if p.len() != 4 || p.iter().all(|c| k.is_zero(c)) {
        return Err(Error::Parse(
            "point needs 4 coordinates, not all zero".into(),
        ));
    }
    if !k.is_zero(&x.eval(p)) {
        return Ok(false);
    }
    let pivot = p.iter().position(|c| !k.is_zero(c)).unwrap();
    let grad: Vec<Elem> = x.partials().iter().map(|d| d.eval(p)).collect();
    if grad.iter().all(|c| k.is_zero(c)) {
        return Err(Error::NotSmooth);
    }
    let mut e = vec![k.zero(); 4];
    e[pivot] = k.one();
    let dirs = linalg::kernel(k, &Matrix::from_rows(vec![grad, e]));
    let g = x
        .partials()
        .iter()
        .zip(p)
        .fold(crate::poly::HomForm::zero(k, 2), |acc, (d, pi)| {
            acc.add(&d.scale(pi)).unwrap()
        });
    let (a, b) = (&dirs[0], &dirs[1]);
    let mut ab = a.clone();
    for i in 0..4 {
        ab[i] = k.add(&a[i], &b[i]);
    }
    Ok([a, b, &ab].iter().all(|v| k.is_zero(&g.eval(v))))
}

/// Exhaustive oracle: tests every line of P³(F_q), one echelon form each.
pub fn lines_by_enumeration(x: &CubicSurface) -> Result<Vec<ProjLine>> {
    let k = x.field();
    let elems: Vec<Elem> = k.elements()?.collect();
    let mut out = Vec::new();
    for p1 in 0..4 {
        for p2 in p1 + 1..4 {
            // free entries: row 0 at columns > p1 except p2, row 1 at columns > p2
            let free0: Vec<usize> = (p1 + 1..4).filter(|&c| c != p2).collect();
            let free1: Vec<usize> = (p2 + 1..4).collect();
            let n = free0.len() + free1.len();
            let total = (elems.len() as u64).pow(n as u32);
            for mut code in 0..total {
                let mut r0 = vec![k.zero(); 4];
                let mut r1 = vec![k.zero(); 4];
                r0[p1] = k.one();
                r1[p2] = k.one();
                for &c in &free0 {
                    r0[c] = elems[(code % elems.len() as u64) as usize].clone();
                    code /= elems.len() as u64;
                }
                for &c in &free1 {
                    r1[c] = elems[(code % elems.len() as u64) as usize].clone();
                    code /= elems.len() as u64;
                }
                let l = ProjLine {
                    rows: [
                        std::array::from_fn(|i| r0[i].clone()),
                        std::array::from_fn(|i| r1[i].clone()),
                    ],
                };
                if x.contains_line(&l) {
                    out.push(l);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The 27 lines indexed by label (E1..E6, F12..F56, G1..G6).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedLines {
    pub field: Field,
    pub lines: Vec<ProjLine>,
}

impl MarkedLines {
    pub fn line(&self, l: Label) -> &ProjLine {
        &self.lines[l.index()]
    }

    pub fn label_of(&self, line: &ProjLine) -> Option<Label> {
        self.lines
            .iter()
            .position(|m| m == line)
            .map(|i| Label(i as u8))
    }

    pub fn incidence(&self) -> Vec<Vec<bool>> {
        let k = &self.field;
        (0..27)
            .map(|i| {
                (0..27)
                    .map(|j| self.lines[i].meets(k, &self.lines[j]))
                    .collect()
            })
            .collect()
    }

    /// Checks the labeled incidence against the abstract configuration.
    pub fn verify(&self) -> Result<()> {
        if self.lines.len() != 27 {
            return Err(Error::ConfigurationMismatch(format!(
                "{} lines",
                self.lines.len()
            )));
        }
        let abs = incidence();
        let geo = self.incidence();
        for a in Label::all() {
            for b in Label::all() {
                if abs[a.index()][b.index()] != geo[a.index()][b.index()] {
                    return Err(Error::ConfigurationMismatch(format!(
                        "{a} and {b}: expected {}, found {}",
                        if abs[a.index()][b.index()] {
                            "meeting"
                        } else {
                            "skew"
                        },
                        if geo[a.index()][b.index()] {
                            "meeting"
                        } else {
                            "skew"
                        },
                    )));
                }
            }
        }
        Ok(())
    }

    /// The marking obtained by composing with a Weyl element: the line that
    /// carried label ℓ now carries w(ℓ).
    pub fn relabel(&self, w: &WeylElement) -> MarkedLines {
        let mut lines = self.lines.clone();
        for i in 0..27 {
            lines[w.perm[i] as usize] = self.lines[i].clone();
        }
        MarkedLines {
            field: self.field.clone(),
            lines,
        }
    }

    /// Geometric realizations of the 36 abstract double-sixes that pass the
    /// incidence check.
    pub fn double_six_count(&self) -> usize {
        let inc = self.incidence();
        e6::double_sixes()
            .iter()
            .filter(|d| {
                (0..6).all(|i| {
                    (0..6).all(|j| {
                        let m = inc[d.rows[0][i].index()][d.rows[1][j].index()];
                        let same = inc[d.rows[0][i].index()][d.rows[0][j].index()];
                        m == (i != j) && !same
                    })
                })
            })
            .count()
    }
}

/// A marking of 27 lines: the first sixer found by backtracking becomes
/// E1..E6, then G_j meets every E_i except E_j and F_ij meets exactly E_i, E_j.
pub fn marking_from(field: &Field, lines: &[ProjLine]) -> Result<MarkedLines> {
    let bad = |m: &str| Error::ConfigurationMismatch(m.to_string());
    if lines.len() != 27 {
        return Err(bad(&format!("expected 27 lines, got {}", lines.len())));
    }
    let inc: Vec<Vec<bool>> = (0..27)
        .map(|i| (0..27).map(|j| lines[i].meets(field, &lines[j])).collect())
        .collect();
    if inc.iter().any(|r| r.iter().filter(|&&b| b).count() != 10) {
        return Err(bad("some line does not meet exactly 10 others"));
    }
    let sixer = find_sixer(&inc).ok_or_else(|| bad("no six mutually skew lines"))?;
    let mut out: Vec<Option<ProjLine>> = vec![None; 27];
    for (i, &s) in sixer.iter().enumerate() {
        out[Label::e(i + 1).index()] = Some(lines[s].clone());
    }
    for n in 0..27 {
        if sixer.contains(&n) {
            continue;
        }
        let met: Vec<usize> = (0..6).filter(|&i| inc[n][sixer[i]]).collect();
        let label = match met.as_slice() {
            [a, b] => Label::f(a + 1, b + 1),
            m if m.len() == 5 => {
                let j = (0..6).find(|j| !m.contains(j)).unwrap();
                Label::g(j + 1)
            }
            _ => return Err(bad("line meets an unexpected number of the sixer")),
        };
        if out[label.index()].replace(lines[n].clone()).is_some() {
            return Err(bad(&format!("two lines claim label {label}")));
        }
    }
    let marked = MarkedLines {
        field: field.clone(),
        lines: out
            .into_iter()
            .map(|l| l.ok_or_else(|| bad("unlabeled slot")))
            .collect::<Result<_>>()?,
    };
    marked.verify()?;
    Ok(marked)
}

fn find_sixer(inc: &[Vec<bool>]) -> Option<[usize; 6]> {
    fn rec(start: usize, cur: &mut Vec<usize>, inc: &[Vec<bool>]) -> bool {
        if cur.len() == 6 {
            return true;
        }
        for n in start..inc.len() {
            if cur.iter().all(|&c| !inc[c][n]) {
                cur.push(n);
                if rec(n + 1, cur, inc) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let mut cur = Vec::new();
    rec(0, &mut cur, inc).then(|| std::array::from_fn(|i| cur[i]))
}
