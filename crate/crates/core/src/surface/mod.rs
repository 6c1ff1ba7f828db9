//! Concrete cubic surfaces over exact fields: smoothness, the 27 lines,
//! markings, tritangent planes, Eckardt points, automorphisms, and the
//! six-point blow-up.

mod aut;
mod blowup;
mod config;
mod lines;

use std::fmt;

use num::{BigInt, BigRational, Integer, One, ToPrimitive};

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::linalg::{self, Matrix};
use crate::poly::{monomials, HomForm, Mat4, Monomial};

pub use aut::{automorphism_group, induced_permutation, Automorphism};
pub use blowup::{blowup_marking, check_general_position, from_six_points, random_six_points};
pub(crate) use config::plane_of;
pub use config::{
    eckardt_points, lines_with_three_eckardt_points, orbit_partition, trihedral_lines,
    tritangent_planes, EckardtPoint, Orbit, OrbitTag, TrihedralLine, TritangentPlane,
};
pub use lines::{
    coordinate_lines, is_eckardt_point, lines_by_enumeration, lines_from_seed, lines_meeting,
    lines_on, marking_from, MarkedLines, EXHAUSTIVE_LIMIT,
};

/// A point of P³ with first nonzero coordinate 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    pub coords: [Elem; 4],
}

impl ProjPoint {
    pub fn new(f: &Field, v: &[Elem]) -> Result<ProjPoint> {
        let lead = v
            .iter()
            .find(|x| !f.is_zero(x))
            .ok_or_else(|| Error::Parse("zero vector is not a point".into()))?;
        let inv = f.inv(lead)?;
        Ok(ProjPoint {
            coords: std::array::from_fn(|i| f.mul(&v[i], &inv)),
        })
    }

    pub fn from_i64(f: &Field, v: [i64; 4]) -> Result<ProjPoint> {
        ProjPoint::new(f, &v.map(|x| f.from_i64(x)))
    }

    pub fn format(&self, f: &Field) -> Vec<String> {
        self.coords.iter().map(|c| f.format(c)).collect()
    }
}

/// A line of P³ stored as the reduced row echelon form of a 2×4 basis.
/// The echelon form doubles as the canonical key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjLine {
    pub rows: [[Elem; 4]; 2],
}

impl ProjLine {
    pub fn through(f: &Field, a: &[Elem], b: &[Elem]) -> Result<ProjLine> {
        let mut m = Matrix::from_rows(vec![a.to_vec(), b.to_vec()]);
        let piv = linalg::rref(f, &mut m);
        if piv.len() < 2 {
            return Err(Error::Parse("points do not span a line".into()));
        }
        Ok(ProjLine {
            rows: [
                std::array::from_fn(|j| m.get(0, j).clone()),
                std::array::from_fn(|j| m.get(1, j).clone()),
            ],
        })
    }

    pub fn points(&self) -> [&[Elem; 4]; 2] {
        [&self.rows[0], &self.rows[1]]
    }

    pub fn contains(&self, f: &Field, p: &[Elem]) -> bool {
        let m = Matrix::from_rows(vec![
            self.rows[0].to_vec(),
            self.rows[1].to_vec(),
            p.to_vec(),
        ]);
        linalg::rank(f, &m) == 2
    }

    /// Whether two distinct lines meet (equal lines do not count).
    pub fn meets(&self, f: &Field, other: &ProjLine) -> bool {
        self != other && f.is_zero(&linalg::det(f, &self.stack(other)))
    }

    fn stack(&self, other: &ProjLine) -> Matrix {
        Matrix::from_rows(vec![
            self.rows[0].to_vec(),
            self.rows[1].to_vec(),
            other.rows[0].to_vec(),
            other.rows[1].to_vec(),
        ])
    }

    /// Common point of two distinct meeting lines.
    pub fn intersection(&self, f: &Field, other: &ProjLine) -> Option<ProjPoint> {
        if self == other {
            return None;
        }
        // a·p + b·q = c·p' + d·q'
        let cols = self.stack(other).transpose();
        let mut m = cols.clone();
        for i in 0..4 {
            for j in 2..4 {
                let v = f.neg(cols.get(i, j));
                m.set(i, j, v);
            }
        }
        let k = linalg::kernel(f, &m);
        if k.len() != 1 {
            return None;
        }
        let v: Vec<Elem> = (0..4)
            .map(|i| {
                f.add(
                    &f.mul(&k[0][0], &self.rows[0][i]),
                    &f.mul(&k[0][1], &self.rows[1][i]),
                )
            })
            .collect();
        ProjPoint::new(f, &v).ok()
    }

    /// The image line x ↦ Mx.
    pub fn image(&self, f: &Field, m: &Mat4) -> Result<ProjLine> {
        ProjLine::through(f, &m.apply(f, &self.rows[0]), &m.apply(f, &self.rows[1]))
    }

    pub fn format(&self, f: &Field) -> [Vec<String>; 2] {
        self.rows
            .clone()
            .map(|r| r.iter().map(|c| f.format(c)).collect())
    }
}

/// Normalized coefficients of the unique plane through the given points.
pub(crate) fn plane_through(f: &Field, pts: &[&[Elem]]) -> Option<[Elem; 4]> {
    let m = Matrix::from_rows(pts.iter().map(|p| p.to_vec()).collect());
    let k = linalg::kernel(f, &m);
    if k.len() != 1 {
        return None;
    }
    ProjPoint::new(f, &k[0]).ok().map(|p| p.coords)
}

pub(crate) fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// A cubic surface f = 0 in P³.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicSurface {
    f: HomForm,
    partials: [HomForm; 4],
}

impl CubicSurface {
    pub fn new(f: HomForm) -> Result<CubicSurface> {
        if f.degree() != 3 {
            return Err(Error::Parse(format!(
                "expected a cubic form, got degree {}",
                f.degree()
            )));
        }
        if f.is_zero() {
            return Err(Error::Parse("zero form".into()));
        }
        let partials = f.partials();
        Ok(CubicSurface { f, partials })
    }

    pub fn form(&self) -> &HomForm {
        &self.f
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    pub fn partials(&self) -> &[HomForm; 4] {
        &self.partials
    }

    pub fn eval(&self, p: &[Elem]) -> Elem {
        self.f.eval(p)
    }

    /// Σ b_i ∂f/∂x_i evaluated at a.
    pub fn polar(&self, a: &[Elem], b: &[Elem]) -> Elem {
        let k = self.field();
        let g: Vec<Elem> = self.partials.iter().map(|d| d.eval(a)).collect();
        dot(k, &g, b)
    }

    /// Coefficients (c0, c1, c2, c3) of f(a + t b) in t.
    pub fn restrict(&self, a: &[Elem], b: &[Elem]) -> [Elem; 4] {
        [
            self.eval(a),
            self.polar(a, b),
            self.polar(b, a),
            self.eval(b),
        ]
    }

    pub fn contains_line(&self, l: &ProjLine) -> bool {
        let k = self.field();
        self.restrict(&l.rows[0], &l.rows[1])
            .iter()
            .all(|c| k.is_zero(c))
    }

    /// Whether f and its partial derivatives have no common zero over the
    /// algebraic closure.
    ///
    /// Decided exactly by a Macaulay rank test. Outside characteristic 3 the
    /// Euler relation puts f in the ideal of the four partials, and four
    /// quadrics without a common zero generate every form of degree 5. In
    /// characteristic 3 the ideal (f, ∂f) is used in degree 9.
    pub fn is_smooth(&self) -> Result<bool> {
        let k = self.field();
        let (gens, deg): (Vec<&HomForm>, u32) = if k.characteristic() == 3 {
            (
                std::iter::once(&self.f)
                    .chain(self.partials.iter())
                    .collect(),
                9,
            )
        } else {
            (self.partials.iter().collect(), 5)
        };
        let gens: Vec<&HomForm> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let target = monomials(deg).len();
        if k.is_rational() {
            // certify modulo a few primes first; a full rank mod p implies full rank over Q
            let ints = integer_generators(&gens);
            for p in [2_147_483_647u64, 2_147_483_629, 2_147_483_587] {
                let fp = Field::prime(p)?;
                let reduced: Vec<HomForm> = ints
                    .iter()
                    .map(|g| reduce_mod(&fp, g))
                    .collect::<Result<_>>()?;
                let refs: Vec<&HomForm> = reduced.iter().collect();
                if macaulay_rank(&fp, &refs, deg) == target {
                    return Ok(true);
                }
            }
        }
        Ok(macaulay_rank(k, &gens, deg) == target)
    }

    /// Singular points over F_{q^m}, m ≤ `max_m`, by scanning every point
    /// (only feasible for tiny fields). Points are returned in the largest
    /// extension scanned.
    pub fn singular_points_scan(&self, max_m: u32, max_points: u64) -> Result<Vec<ProjPoint>> {
        let k = self.field();
        let q = k
            .cardinality()
            .ok_or_else(|| Error::UnsupportedField("point scan needs a finite field".into()))?;
        let p = k.characteristic();
        let mut found = Vec::new();
        for m in 1..=max_m {
            let size = (q as u128).pow(m);
            if size.pow(3) > max_points as u128 {
                break;
            }
            let ext = Field::finite(p, k.degree() * m)?;
            let emb = ext.embedding_from(k)?;
            let lift = |g: &HomForm| -> Result<HomForm> {
                HomForm::from_terms(
                    &ext,
                    g.degree(),
                    g.terms().map(|(mm, c)| (*mm, emb.apply(c).unwrap())),
                )
            };
            let f = lift(&self.f)?;
            let parts: Vec<HomForm> = self.partials.iter().map(&lift).collect::<Result<_>>()?;
            found.clear();
            for pt in projective_points(&ext, 3)? {
                if parts.iter().all(|d| ext.is_zero(&d.eval(&pt))) && ext.is_zero(&f.eval(&pt)) {
                    found.push(ProjPoint::new(&ext, &pt)?);
                }
            }
            if !found.is_empty() {
                return Ok(found);
            }
        }
        Ok(found)
    }
}

impl fmt::Display for CubicSurface {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.f)
    }
}

/// Rank of the degree-`deg` part of the ideal generated by `gens`.
pub fn macaulay_rank(k: &Field, gens: &[&HomForm], deg: u32) -> usize {
    let cols = monomials(deg);
    let index: std::collections::HashMap<Monomial, usize> =
        cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        for mult in monomials(deg - g.degree()) {
            let mut row = vec![k.zero(); cols.len()];
            for (m, c) in g.terms() {
                let mm: Monomial = std::array::from_fn(|i| m[i] + mult[i]);
                row[index[&mm]] = c.clone();
            }
            rows.push(row);
        }
    }
    linalg::rank(k, &Matrix::from_rows(rows))
}

fn integer_generators(gens: &[&HomForm]) -> Vec<Vec<(Monomial, BigInt)>> {
    gens.iter()
        .map(|g| {
            let rats: Vec<(Monomial, BigRational)> = g
                .terms()
                .map(|(m, c)| match c {
                    Elem::Rat(r) => (*m, r.clone()),
                    _ => unreachable!("rational field"),
                })
                .collect();
            let l = rats
                .iter()
                .fold(BigInt::one(), |acc, (_, r)| acc.lcm(r.denom()));
            rats.into_iter()
                .map(|(m, r)| (m, (r * BigRational::from_integer(l.clone())).to_integer()))
                .collect()
        })
        .collect()
}

fn reduce_mod(fp: &Field, g: &[(Monomial, BigInt)]) -> Result<HomForm> {
    let p = BigInt::from(fp.characteristic());
    let deg = g.first().map_or(0, |(m, _)| m.iter().sum());
    HomForm::from_terms(
        fp,
        deg,
        g.iter().map(|(m, c)| {
            let r = c.mod_floor(&p).to_u64().unwrap();
            (*m, Elem::Fin(r))
        }),
    )
}

/// All normalized points of P^n over a finite field.
pub fn projective_points(k: &Field, n: usize) -> Result<Vec<Vec<Elem>>> {
    let elems: Vec<Elem> = k.elements()?.collect();
    let mut out = Vec::new();
    for lead in 0..=n {
        let free = n - lead;
        let total = (elems.len() as u64).pow(free as u32);
        for mut code in 0..total {
            let mut v = vec![k.zero(); n + 1];
            v[lead] = k.one();
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = elems[(code % elems.len() as u64) as usize].clone();
                code /= elems.len() as u64;
            }
            out.push(v);
        }
    }
    Ok(out)
}
