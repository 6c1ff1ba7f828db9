//! Conjugacy class signatures and the anchoring of class labels.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::Serialize;

use super::weyl::{weyl_group, WeylElement, WeylGroup};
use super::Label;
use crate::error::{Error, Result};

/// Labels assigned by anchoring; all other classes carry only their signature.
pub const CLASS_LABELS: [&str; 12] = [
    "1A", "2A", "2B", "3A", "3C", "3D", "4A", "4B", "5A", "6E", "8A", "12A",
];

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassSignature {
    pub order: u32,
    /// Characteristic polynomial on the orthogonal complement of k, leading coefficient first.
    pub char_poly: Vec<i64>,
    pub fixed_lines: u32,
    /// Cycle lengths on the 27 lines, descending.
    pub cycle_type: Vec<u32>,
    pub label: Option<String>,
}

impl ClassSignature {
    pub fn of(w: &WeylElement) -> ClassSignature {
        let mut sig = raw_signature(w);
        sig.label = labels().by_key.get(&sig).map(|s| s.to_string());
        sig
    }

    /// Signature without the label lookup.
    pub fn raw(w: &WeylElement) -> ClassSignature {
        raw_signature(w)
    }

    pub fn cycle_type_string(&self) -> String {
        let mut counts: Vec<(u32, usize)> = Vec::new();
        for &c in &self.cycle_type {
            match counts.iter_mut().find(|(l, _)| *l == c) {
                Some(e) => e.1 += 1,
                None => counts.push((c, 1)),
            }
        }
        counts.sort();
        counts
            .iter()
            .map(|(l, n)| format!("{l}^{n}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn raw_signature(w: &WeylElement) -> ClassSignature {
    let full = char_poly(&w.matrix());
    ClassSignature {
        order: w.order(),
        char_poly: divide_by_t_minus_1(&full),
        fixed_lines: w.fixed_count() as u32,
        cycle_type: w.cycle_type(),
        label: None,
    }
}

/// Faddeev–LeVerrier over the integers; leading coefficient first.
pub fn char_poly(m: &[[i32; 7]; 7]) -> Vec<i64> {
    let n = 7;
    let a: Vec<Vec<i64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i64).collect())
        .collect();
    let mut coeffs = vec![1i64];
    let mut mk = vec![vec![0i64; n]; n];
    let mut c_prev = 1i64;
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        let mut next = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|t| a[i][t] * mk[t][j]).sum::<i64>();
            }
            next[i][i] += c_prev;
        }
        mk = next;
        let tr: i64 = (0..n)
            .map(|i| (0..n).map(|t| a[i][t] * mk[t][i]).sum::<i64>())
            .sum();
        debug_assert_eq!(tr % k as i64, 0);
        let c = -tr / k as i64;
        coeffs.push(c);
        c_prev = c;
    }
    coeffs
}

/// Synthetic division; k is fixed so t - 1 always divides.
fn divide_by_t_minus_1(p: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(p.len() - 1);
    let mut acc = 0i64;
    for &c in &p[..p.len() - 1] {
        acc += c;
        out.push(acc);
    }
    debug_assert_eq!(acc + p[p.len() - 1], 0);
    out
}

struct LabelTable {
    by_key: HashMap<ClassSignature, &'static str>,
    by_class: HashMap<&'static str, usize>,
}

fn labels() -> &'static LabelTable {
    static T: OnceLock<LabelTable> = OnceLock::new();
    T.get_or_init(|| build_labels(weyl_group()).expect("class anchoring is consistent"))
}

/// Class index (into [`WeylGroup::classes`]) carrying a given label.
pub fn class_with_label(label: &str) -> Option<usize> {
    labels().by_class.get(label).copied()
}

/// Orbit data used to pin labels, written as lists of line-label orbits.
const ORBIT_ANCHORS: [(&str, &[&[&str]]); 8] = [
    (
        "2A",
        &[
            &["E6"],
            &["F56"],
            &["G5"],
            &["G1", "F16"],
            &["G2", "F26"],
            &["G3", "F36"],
            &["G4", "F46"],
            &["E5", "G6"],
            &["E1", "F15"],
            &["E2", "F25"],
            &["E3", "F35"],
            &["E4", "F45"],
            &["F12", "F34"],
            &["F13", "F24"],
            &["F14", "F23"],
        ],
    ),
    (
        "2B",
        &[
            &["E6"],
            &["F36"],
            &["F46"],
            &["F56"],
            &["G3"],
            &["G4"],
            &["G5"],
            &["G1", "F16"],
            &["G2", "F26"],
            &["E1", "E2"],
            &["G6", "F12"],
            &["E3", "F45"],
            &["E4", "F35"],
            &["E5", "F34"],
            &["F13", "F23"],
            &["F14", "F24"],
            &["F15", "F25"],
        ],
    ),
    (
        "3D",
        &[
            &["E6", "G5", "F56"],
            &["G4", "F45", "E5"],
            &["F46", "E4", "G6"],
            &["F14", "F16", "F15"],
            &["F26", "F25", "F24"],
            &["F35", "F34", "F36"],
            &["E1", "F23", "G1"],
            &["G3", "E3", "F12"],
            &["F13", "G2", "E2"],
        ],
    ),
    (
        "3A",
        &[
            &["F14", "F25", "F36"],
            &["F26", "F34", "F15"],
            &["F35", "F16", "F24"],
            &["E1", "G2", "F12"],
            &["G3", "F23", "E2"],
            &["F13", "E3", "G1"],
            &["E4", "F46", "G6"],
            &["E5", "F45", "G4"],
            &["E6", "F56", "G5"],
        ],
    ),
    (
        "4A",
        &[
            &["E6"],
            &["F56"],
            &["G5"],
            &["G1", "G2", "F16", "F26"],
            &["G3", "G4", "F36", "F46"],
            &["E5", "F24", "G6", "F13"],
            &["E1", "F45", "F15", "E4"],
            &["F12", "F23", "F34", "F14"],
            &["E2", "E3", "F25", "F35"],
        ],
    ),
    (
        "4B",
        &[
            &["E1", "E5", "E2", "F34"],
            &["G6", "F25", "F12", "F15"],
            &["F16", "G2", "G1", "F26"],
            &["E4", "F14", "F35", "F24"],
            &["E3", "F13", "F45", "F23"],
            &["F36", "F46"],
            &["G3", "G4"],
            &["G5", "F56"],
            &["E6"],
        ],
    ),
    (
        "3C",
        &[
            &["F16", "F26", "F36"],
            &["F15", "F25", "F35"],
            &["F14", "F24", "F34"],
            &["E1", "E2", "E3"],
            &["F12", "F23", "F13"],
            &["G1", "G2", "G3"],
            &["E4"],
            &["E5"],
            &["E6"],
            &["G4"],
            &["G5"],
            &["G6"],
            &["F45"],
            &["F56"],
            &["F46"],
        ],
    ),
    (
        "5A",
        &[
            &["E2"],
            &["G2"],
            &["E1", "E5", "E6", "E4", "E3"],
            &["G1", "G5", "G6", "G4", "G3"],
            &["F12", "F25", "F26", "F24", "F23"],
            &["F13", "F15", "F56", "F46", "F34"],
            &["F14", "F35", "F16", "F45", "F36"],
        ],
    ),
];

fn parse_partition(orbits: &[&[&str]]) -> Result<BTreeSet<Vec<Label>>> {
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    for o in orbits {
        let mut v = o
            .iter()
            .map(|s| Label::parse(s))
            .collect::<Result<Vec<_>>>()?;
        v.sort();
        for l in &v {
            if !seen.insert(*l) {
                return Err(Error::Parse(format!("label {l} repeated in orbit data")));
            }
        }
        out.insert(v);
    }
    if seen.len() != 27 {
        return Err(Error::Parse(format!(
            "orbit data covers {} lines, expected 27",
            seen.len()
        )));
    }
    Ok(out)
}

/// All group elements whose orbit partition on the lines equals the given one.
pub fn elements_with_orbits(g: &WeylGroup, orbits: &[&[&str]]) -> Result<Vec<WeylElement>> {
    let target = parse_partition(orbits)?;
    Ok(g.elements()
        .filter(|w| w.orbits().into_iter().collect::<BTreeSet<_>>() == target)
        .collect())
}

/// The conjugacy class index containing every element with the given orbit
/// partition. Errors if no element matches or matches span several classes.
pub fn anchor_orbits(g: &WeylGroup, orbits: &[&[&str]]) -> Result<usize> {
    let els = elements_with_orbits(g, orbits)?;
    let classes: BTreeSet<usize> = els.iter().map(|w| g.class_of(w).unwrap()).collect();
    match classes.len() {
        1 => Ok(*classes.iter().next().unwrap()),
        0 => Err(Error::ConfigurationMismatch(
            "no element has this orbit partition".into(),
        )),
        _ => Err(Error::ConfigurationMismatch(format!(
            "orbit partition met by {} classes",
            classes.len()
        ))),
    }
}

/// Classes of the given order whose `power`-th power lies in class `target`.
pub fn classes_by_power(g: &WeylGroup, order: u32, power: u32, target: usize) -> Vec<usize> {
    g.classes()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.order == order)
        .filter(|(_, c)| {
            let w = g.element(c.rep as usize);
            g.class_of(&w.pow(power)) == Some(target)
        })
        .map(|(i, _)| i)
        .collect()
}

fn unique(v: Vec<usize>, what: &str) -> Result<usize> {
    match v.as_slice() {
        [c] => Ok(*c),
        _ => Err(Error::ConfigurationMismatch(format!(
            "{what}: {} candidate classes",
            v.len()
        ))),
    }
}

fn build_labels(g: &WeylGroup) -> Result<LabelTable> {
    let mut by_class: HashMap<&'static str, usize> = HashMap::new();
    by_class.insert("1A", g.class_of(&WeylElement::identity()).unwrap());
    for (label, orbits) in ORBIT_ANCHORS {
        by_class.insert(
            label,
            anchor_orbits(g, orbits)
                .map_err(|e| Error::ConfigurationMismatch(format!("{label}: {e}")))?,
        );
    }
    // 3A is also the unique class whose orbits are nine tritangent trios
    let all_trios: BTreeSet<usize> = g
        .elements()
        .filter(|w| w.orbits().iter().all(|o| o.len() == 3 && super::is_trio(o)))
        .map(|w| g.class_of(&w).unwrap())
        .collect();
    if all_trios.len() != 1 || !all_trios.contains(&by_class["3A"]) {
        return Err(Error::ConfigurationMismatch(
            "3A is not the class with nine invariant trios".into(),
        ));
    }
    // power relations: cross-check 4A, 4B and pin 6E, 8A, 12A
    let c2a = by_class["2A"];
    let c2b = by_class["2B"];
    let c3d = by_class["3D"];
    if !classes_by_power(g, 4, 2, c2a).contains(&by_class["4A"]) {
        return Err(Error::ConfigurationMismatch("4A squared is not 2A".into()));
    }
    if !classes_by_power(g, 4, 2, c2b).contains(&by_class["4B"]) {
        return Err(Error::ConfigurationMismatch("4B squared is not 2B".into()));
    }
    let six: Vec<usize> = classes_by_power(g, 6, 2, c3d)
        .into_iter()
        .filter(|c| classes_by_power(g, 6, 3, c2a).contains(c))
        .collect();
    by_class.insert("6E", unique(six, "6E")?);
    by_class.insert(
        "8A",
        unique(classes_by_power(g, 8, 2, by_class["4A"]), "8A")?,
    );
    by_class.insert(
        "12A",
        unique(classes_by_power(g, 12, 4, by_class["3A"]), "12A")?,
    );

    let distinct: BTreeSet<usize> = by_class.values().copied().collect();
    if distinct.len() != CLASS_LABELS.len() {
        return Err(Error::ConfigurationMismatch(
            "two labels anchored to one class".into(),
        ));
    }
    let by_key = by_class
        .iter()
        .map(|(&l, &c)| (raw_signature(&g.element(g.classes()[c].rep as usize)), l))
        .collect();
    Ok(LabelTable { by_key, by_class })
}

/// Label of the class of w, if it is one of [`CLASS_LABELS`].
pub fn label_of(w: &WeylElement) -> Option<&'static str> {
    let c = weyl_group().class_of(w)?;
    labels()
        .by_class
        .iter()
        .find(|(_, &k)| k == c)
        .map(|(&l, _)| l)
}
