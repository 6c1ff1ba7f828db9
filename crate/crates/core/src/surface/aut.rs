use std::collections::HashMap;

use rayon::prelude::*;

use super::{CubicSurface, MarkedLines, ProjLine, ProjPoint};
use crate::e6::{meets, weyl_group, Label, Perm, WeylElement};
use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::linalg::{self, Matrix};
use crate::poly::{scalar_multiple, Mat4};

#[derive(Clone, Debug)]
pub struct Automorphism {
    /// Normalized so that the first nonzero entry is 1.
    pub matrix: Mat4,
    pub weyl: WeylElement,
    /// f∘g = λ f.
    pub lambda: Elem,
}

/// The permutation of the labeled lines induced by x ↦ gx.
pub fn induced_permutation(x: &CubicSurface, m: &MarkedLines, g: &Mat4) -> Result<WeylElement> {
    let k = x.field();
    let fg = x.form().substitute(g)?;
    if scalar_multiple(&fg, x.form()).is_none() {
        return Err(Error::NotAnAutomorphism);
    }
    let index: HashMap<&ProjLine, u8> = m
        .lines
        .iter()
        .enumerate()
        .map(|(i, l)| (l, i as u8))
        .collect();
    permutation_of(k, m, &index, g)
}

fn permutation_of(
    k: &Field,
    m: &MarkedLines,
    index: &HashMap<&ProjLine, u8>,
    g: &Mat4,
) -> Result<WeylElement> {
    let mut perm: Perm = [0; 27];
    for (i, l) in m.lines.iter().enumerate() {
        let img = l.image(k, g)?;
        perm[i] = *index.get(&img).ok_or(Error::NotAnAutomorphism)?;
    }
    let w = WeylElement::from_perm(perm);
    if !weyl_group().contains(&w) {
        return Err(Error::ConfigurationMismatch(
            "induced permutation is not in W(E6)".into(),
        ));
    }
    Ok(w)
}

pub(crate) fn normalize(k: &Field, g: &Mat4) -> Mat4 {
    let lead =
        g.0.iter()
            .flatten()
            .find(|x| !k.is_zero(x))
            .cloned()
            .unwrap();
    let inv = k.inv(&lead).unwrap();
    g.scale(k, &inv)
}

/// Pairs of meeting lines whose intersection points serve as the frame
/// (four independent points plus one with all frame coordinates nonzero)
/// and two extra check points.
struct Frame {
    pairs: Vec<(Label, Label)>,
    /// Inverse of the scaled frame matrix.
    inv: Matrix,
}

fn point_table(k: &Field, m: &MarkedLines) -> HashMap<(u8, u8), ProjPoint> {
    let mut t = HashMap::new();
    for a in Label::all() {
        for b in Label::all() {
            if meets(a, b) {
                let p = m
                    .line(a)
                    .intersection(k, m.line(b))
                    .expect("meeting lines intersect");
                t.insert((a.0, b.0), p);
            }
        }
    }
    t
}

/// Columns c_i p_i with p_5 = Σ c_i p_i, or None if p_1..p_5 are not in general position.
fn scaled_frame(k: &Field, pts: &[&[Elem; 4]]) -> Option<Matrix> {
    let b = Matrix::from_rows(pts[..4].iter().map(|p| p.to_vec()).collect()).transpose();
    let c = linalg::solve(k, &b, pts[4])?;
    if linalg::rank(k, &b) < 4 || c.iter().any(|x| k.is_zero(x)) {
        return None;
    }
    let mut s = b.clone();
    for i in 0..4 {
        for j in 0..4 {
            s.set(i, j, k.mul(b.get(i, j), &c[j]));
        }
    }
    Some(s)
}

fn choose_frame(k: &Field, table: &HashMap<(u8, u8), ProjPoint>) -> Result<Frame> {
    let mut pairs: Vec<(u8, u8)> = table.keys().copied().filter(|(a, b)| a < b).collect();
    pairs.sort();
    let mut chosen: Vec<(u8, u8)> = Vec::new();
    for &pr in &pairs {
        let p = &table[&pr];
        if chosen.iter().any(|c| table[c] == *p) {
            continue;
        }
        let mut trial: Vec<&[Elem; 4]> = chosen.iter().map(|c| &table[c].coords).collect();
        trial.push(&p.coords);
        let ok = match trial.len() {
            1..=4 => {
                linalg::rank(
                    k,
                    &Matrix::from_rows(trial.iter().map(|v| v.to_vec()).collect()),
                ) == trial.len()
            }
            5 => scaled_frame(k, &trial).is_some(),
            _ => true,
        };
        if ok {
            chosen.push(pr);
        }
        if chosen.len() == 7 {
            break;
        }
    }
    if chosen.len() < 7 {
        return Err(Error::ConfigurationMismatch(
            "no frame among line intersections".into(),
        ));
    }
    let pts: Vec<&[Elem; 4]> = chosen[..5].iter().map(|c| &table[c].coords).collect();
    let s = scaled_frame(k, &pts).unwrap();
    Ok(Frame {
        pairs: chosen.iter().map(|&(a, b)| (Label(a), Label(b))).collect(),
        inv: linalg::inverse(k, &s)?,
    })
}

fn proportional(k: &Field, a: &[Elem], b: &[Elem]) -> bool {
    (0..4).all(|i| (0..4).all(|j| k.mul(&a[i], &b[j]) == k.mul(&a[j], &b[i])))
}

/// All projective automorphisms of a split marked surface, one per realized
/// Weyl element, sorted by Weyl permutation.
///
/// A projective map is fixed by five points in general position, so each
/// Weyl element w determines at most one candidate: the map sending the
/// frame points (intersections of meeting line pairs) to the intersections
/// of the image pairs.
pub fn automorphism_group(x: &CubicSurface, m: &MarkedLines) -> Result<Vec<Automorphism>> {
    let k = x.field().clone();
    let table = point_table(&k, m);
    let frame = choose_frame(&k, &table)?;
    let index: HashMap<&ProjLine, u8> = m
        .lines
        .iter()
        .enumerate()
        .map(|(i, l)| (l, i as u8))
        .collect();
    let g = weyl_group();
    let found: Vec<Option<Automorphism>> = (0..g.order())
        .into_par_iter()
        .map(|i| {
            let w = g.element(i);
            let img: Vec<&ProjPoint> = frame
                .pairs
                .iter()
                .map(|(a, b)| &table[&(w.apply(*a).0, w.apply(*b).0)])
                .collect();
            let coords: Vec<&[Elem; 4]> = img.iter().map(|p| &p.coords).collect();
            let target = scaled_frame(&k, &coords[..5])?;
            let mm = target.mul(&k, &frame.inv);
            let gm = normalize(&k, &Mat4::from_matrix(&mm));
            for e in 5..7 {
                let src = &table[&(frame.pairs[e].0 .0, frame.pairs[e].1 .0)];
                if !proportional(&k, &gm.apply(&k, &src.coords), &img[e].coords) {
                    return None;
                }
            }
            let fg = x.form().substitute(&gm).ok()?;
            let lambda = scalar_multiple(&fg, x.form())?;
            let perm = permutation_of(&k, m, &index, &gm).ok()?;
            if perm != w {
                return None;
            }
            Some(Automorphism {
                matrix: gm,
                weyl: w,
                lambda,
            })
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}
