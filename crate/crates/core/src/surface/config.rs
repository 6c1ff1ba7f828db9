use std::collections::BTreeMap;

use serde::Serialize;

use super::{plane_through, CubicSurface, MarkedLines, ProjLine, ProjPoint};
use crate::e6::{is_trio, meets, triad_pairs, tritangent_trios, Label, Trio, WeylElement};
use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::linalg::{self, Matrix};
use crate::poly::HomForm;

#[derive(Clone, Debug)]
pub struct TritangentPlane {
    pub trio: Trio,
    /// Normalized coefficients (first nonzero = 1).
    pub coeffs: [Elem; 4],
}

impl TritangentPlane {
    pub fn form(&self, k: &Field) -> HomForm {
        HomForm::linear(k, &self.coeffs)
    }
}

/// The plane of each abstract trio, checked to contain all three lines.
pub fn tritangent_planes(m: &MarkedLines) -> Result<Vec<TritangentPlane>> {
    let k = &m.field;
    tritangent_trios()
        .into_iter()
        .map(|trio| {
            let plane = plane_of(k, m.line(trio[0]), m.line(trio[1])).ok_or_else(|| {
                Error::ConfigurationMismatch(format!(
                    "{} and {} do not span a plane",
                    trio[0], trio[1]
                ))
            })?;
            let third = m.line(trio[2]);
            if !third
                .rows
                .iter()
                .all(|p| k.is_zero(&super::dot(k, &plane, p)))
            {
                return Err(Error::ConfigurationMismatch(format!(
                    "{} {} {} are not coplanar",
                    trio[0], trio[1], trio[2]
                )));
            }
            Ok(TritangentPlane {
                trio,
                coeffs: plane,
            })
        })
        .collect()
}

pub(crate) fn plane_of(k: &Field, a: &ProjLine, b: &ProjLine) -> Option<[Elem; 4]> {
    for extra in &b.rows {
        if !a.contains(k, extra) {
            return plane_through(k, &[&a.rows[0], &a.rows[1], extra]);
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct EckardtPoint {
    pub point: ProjPoint,
    pub trio: Trio,
    /// Set when another trio reports the same point; such points are listed
    /// once per trio and never merged.
    pub shared: bool,
}

/// Trios whose three lines pass through one point.
pub fn eckardt_points(m: &MarkedLines) -> Vec<EckardtPoint> {
    let k = &m.field;
    let mut out: Vec<EckardtPoint> = Vec::new();
    for trio in tritangent_trios() {
        let Some(p) = m.line(trio[0]).intersection(k, m.line(trio[1])) else {
            continue;
        };
        if m.line(trio[2]).contains(k, &p.coords) {
            out.push(EckardtPoint {
                point: p,
                trio,
                shared: false,
            });
        }
    }
    let mut count: BTreeMap<ProjPoint, usize> = BTreeMap::new();
    for e in &out {
        *count.entry(e.point.clone()).or_default() += 1;
    }
    for e in &mut out {
        e.shared = count[&e.point] > 1;
    }
    out
}

#[derive(Clone, Debug)]
pub struct TrihedralLine {
    pub line: ProjLine,
    /// The triad whose three planes contain the line.
    pub triad: [Trio; 3],
    pub eckardt: Vec<ProjPoint>,
}

/// Lines in which the three planes of one triad meet, for all 120 conjugate
/// pairs and both triads of each pair; each carries its Eckardt points.
pub fn trihedral_lines(x: &CubicSurface, m: &MarkedLines) -> Result<Vec<TrihedralLine>> {
    let k = &m.field;
    let planes: BTreeMap<Trio, [Elem; 4]> = tritangent_planes(m)?
        .into_iter()
        .map(|p| (p.trio, p.coeffs))
        .collect();
    let eck = eckardt_points(m);
    let mut found: BTreeMap<ProjLine, [Trio; 3]> = BTreeMap::new();
    for pair in triad_pairs() {
        for triad in [pair.rows(), pair.cols()] {
            let sorted: Vec<Trio> = triad
                .iter()
                .map(|t| {
                    let mut t = *t;
                    t.sort();
                    t
                })
                .collect();
            let rows: Vec<Vec<Elem>> = sorted.iter().map(|t| planes[t].to_vec()).collect();
            let mat = Matrix::from_rows(rows);
            if linalg::rank(k, &mat) != 2 {
                continue;
            }
            let basis = linalg::kernel(k, &mat);
            let line = ProjLine::through(k, &basis[0], &basis[1])?;
            if x.contains_line(&line) {
                continue;
            }
            found
                .entry(line)
                .or_insert([sorted[0], sorted[1], sorted[2]]);
        }
    }
    Ok(found
        .into_iter()
        .map(|(line, triad)| {
            let mut pts: Vec<ProjPoint> = eck
                .iter()
                .filter(|e| line.contains(k, &e.point.coords))
                .map(|e| e.point.clone())
                .collect();
            pts.sort();
            pts.dedup();
            TrihedralLine {
                line,
                triad,
                eckardt: pts,
            }
        })
        .collect())
}

/// Lines off the surface through exactly three Eckardt points, found from
/// the Eckardt points alone (the other side of the trihedral criterion).
pub fn lines_with_three_eckardt_points(x: &CubicSurface, m: &MarkedLines) -> Result<Vec<ProjLine>> {
    let k = &m.field;
    let mut pts: Vec<ProjPoint> = eckardt_points(m).into_iter().map(|e| e.point).collect();
    pts.sort();
    pts.dedup();
    let mut out = std::collections::BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let l = ProjLine::through(k, &pts[i].coords, &pts[j].coords)?;
            if x.contains_line(&l) {
                continue;
            }
            let n = pts.iter().filter(|p| l.contains(k, &p.coords)).count();
            if n == 3 {
                out.insert(l);
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitTag {
    Invariant,
    TritangentTrio,
    SkewTriple,
    Pair,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub labels: Vec<Label>,
    pub tag: OrbitTag,
}

/// Orbits of w on the 27 lines, tagged by how their lines meet.
pub fn orbit_partition(w: &WeylElement) -> Vec<Orbit> {
    w.orbits()
        .into_iter()
        .map(|labels| {
            let tag = match labels.len() {
                1 => OrbitTag::Invariant,
                2 => OrbitTag::Pair,
                3 if is_trio(&labels) => OrbitTag::TritangentTrio,
                3 if labels.iter().all(|a| labels.iter().all(|b| !meets(*a, *b))) => {
                    OrbitTag::SkewTriple
                }
                _ => OrbitTag::Other,
            };
            Orbit { labels, tag }
        })
        .collect()
}
