//! The lattice I^{1,6}, roots and exceptional vectors, and the combinatorics of
//! the 27 lines: sixers, double-sixes, tritangent trios, conjugate triad pairs.

mod classes;
mod weyl;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub use classes::{
    anchor_orbits, char_poly, class_with_label, classes_by_power, elements_with_orbits, label_of,
    ClassSignature, CLASS_LABELS,
};
pub use weyl::{
    closure_parallel, closure_serial, init_weyl_group, simple_roots, weyl_group, ConjugacyClass,
    Perm, WeylElement, WeylGroup, IDENTITY,
};

/// Coordinates in the basis e0, e1, ..., e6.
pub type LatticeVector = [i32; 7];

/// The canonical class k = -3e0 + e1 + ... + e6.
pub const K: LatticeVector = [-3, 1, 1, 1, 1, 1, 1];

pub fn pairing(u: &LatticeVector, v: &LatticeVector) -> i32 {
    u[0] * v[0] - (1..7).map(|i| u[i] * v[i]).sum::<i32>()
}

pub fn basis(i: usize) -> LatticeVector {
    let mut v = [0; 7];
    v[i] = 1;
    v
}

pub fn add(u: &LatticeVector, v: &LatticeVector) -> LatticeVector {
    std::array::from_fn(|i| u[i] + v[i])
}

pub fn scale(u: &LatticeVector, s: i32) -> LatticeVector {
    std::array::from_fn(|i| u[i] * s)
}

pub fn neg(u: &LatticeVector) -> LatticeVector {
    scale(u, -1)
}

pub fn is_root(v: &LatticeVector) -> bool {
    pairing(v, v) == -2 && pairing(v, &K) == 0
}

pub fn is_exceptional(v: &LatticeVector) -> bool {
    pairing(v, v) == -1 && pairing(v, &K) == -1
}

/// α_max = 2e0 - Σe_i.
pub fn alpha_max() -> LatticeVector {
    [2, -1, -1, -1, -1, -1, -1]
}

/// α_ij = e_i - e_j (1-based indices).
pub fn alpha_ij(i: usize, j: usize) -> LatticeVector {
    let mut v = [0; 7];
    v[i] = 1;
    v[j] = -1;
    v
}

/// α_ijk = e0 - e_i - e_j - e_k (1-based indices).
pub fn alpha_ijk(i: usize, j: usize, k: usize) -> LatticeVector {
    let mut v = [1, 0, 0, 0, 0, 0, 0];
    v[i] = -1;
    v[j] = -1;
    v[k] = -1;
    v
}

/// Index pairs (i, j), 1 ≤ i < j ≤ 6, in lexicographic order.
pub(crate) fn pairs() -> impl Iterator<Item = (usize, usize)> {
    (1..=6).flat_map(|i| (i + 1..=6).map(move |j| (i, j)))
}

/// Label of one of the 27 exceptional vectors. Index order: E1..E6, F12..F56, G1..G6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u8);

impl Label {
    pub fn e(i: usize) -> Label {
        assert!((1..=6).contains(&i));
        Label((i - 1) as u8)
    }

    pub fn g(j: usize) -> Label {
        assert!((1..=6).contains(&j));
        Label((21 + j - 1) as u8)
    }

    pub fn f(i: usize, j: usize) -> Label {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        assert!(i >= 1 && i < j && j <= 6);
        let idx = pairs().position(|p| p == (i, j)).unwrap();
        Label((6 + idx) as u8)
    }

    pub fn all() -> impl Iterator<Item = Label> {
        (0..27u8).map(Label)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn vector(self) -> LatticeVector {
        let i = self.0 as usize;
        if i < 6 {
            basis(i + 1)
        } else if i < 21 {
            let (a, b) = pairs().nth(i - 6).unwrap();
            let mut v = [1, 0, 0, 0, 0, 0, 0];
            v[a] = -1;
            v[b] = -1;
            v
        } else {
            let j = i - 21 + 1;
            let mut v = [2, -1, -1, -1, -1, -1, -1];
            v[j] = 0;
            v
        }
    }

    pub fn from_vector(v: &LatticeVector) -> Option<Label> {
        Label::all().find(|l| l.vector() == *v)
    }

    pub fn parse(s: &str) -> Result<Label> {
        let bad = || Error::Parse(format!("bad line label '{s}'"));
        let s = s.trim();
        let (kind, rest) = s.split_at(1);
        let digits: Vec<usize> = rest
            .chars()
            .filter(|c| c.is_ascii_digit())
            .map(|c| c.to_digit(10).unwrap() as usize)
            .collect();
        let ok = |d: usize| (1..=6).contains(&d);
        match (kind, digits.as_slice()) {
            ("E", [i]) if ok(*i) => Ok(Label::e(*i)),
            ("G", [j]) if ok(*j) => Ok(Label::g(*j)),
            ("F", [i, j]) if ok(*i) && ok(*j) && i != j => Ok(Label::f(*i, *j)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.0 as usize;
        if i < 6 {
            write!(f, "E{}", i + 1)
        } else if i < 21 {
            let (a, b) = pairs().nth(i - 6).unwrap();
            write!(f, "F{a}{b}")
        } else {
            write!(f, "G{}", i - 21 + 1)
        }
    }
}

/// Whether two distinct lines meet, i.e. their classes pair to 1.
pub fn meets(a: Label, b: Label) -> bool {
    a != b && pairing(&a.vector(), &b.vector()) == 1
}

/// 27×27 incidence table of the abstract configuration.
pub fn incidence() -> [[bool; 27]; 27] {
    let mut t = [[false; 27]; 27];
    for a in Label::all() {
        for b in Label::all() {
            t[a.index()][b.index()] = meets(a, b);
        }
    }
    t
}

pub type Sixer = [Label; 6];
pub type Trio = [Label; 3];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DoubleSix {
    /// Columns are aligned: rows[0][i] and rows[1][i] are skew, all other cross pairs meet.
    pub rows: [[Label; 6]; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriadPair {
    /// Rows form one triad of tritangent trios, columns the conjugate triad.
    pub m: [[Label; 3]; 3],
}

impl TriadPair {
    pub fn rows(&self) -> [Trio; 3] {
        self.m
    }

    pub fn cols(&self) -> [Trio; 3] {
        std::array::from_fn(|j| std::array::from_fn(|i| self.m[i][j]))
    }

    pub fn transpose(&self) -> TriadPair {
        TriadPair { m: self.cols() }
    }

    /// Smallest arrangement under row/column permutations and transposition.
    pub fn canonical(&self) -> TriadPair {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut best: Option<TriadPair> = None;
        for base in [self.clone(), self.transpose()] {
            for rp in PERMS {
                for cp in PERMS {
                    let cand = TriadPair {
                        m: std::array::from_fn(|i| std::array::from_fn(|j| base.m[rp[i]][cp[j]])),
                    };
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
        }
        best.unwrap()
    }

    /// All 72 arrangements (3! row orders × 3! column orders × transposition).
    pub fn arrangements(&self) -> Vec<TriadPair> {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::with_capacity(72);
        for base in [self.clone(), self.transpose()] {
            for rp in PERMS {
                for cp in PERMS {
                    out.push(TriadPair {
                        m: std::array::from_fn(|i| std::array::from_fn(|j| base.m[rp[i]][cp[j]])),
                    });
                }
            }
        }
        out
    }
}

pub fn is_trio(t: &[Label]) -> bool {
    t.len() == 3 && meets(t[0], t[1]) && meets(t[0], t[2]) && meets(t[1], t[2])
}

/// All 72 roots, sorted lexicographically by coordinates.
pub fn roots() -> Vec<LatticeVector> {
    let mut out = vec![alpha_max(), neg(&alpha_max())];
    for i in 1..=6 {
        for j in 1..=6 {
            if i != j {
                out.push(alpha_ij(i, j));
            }
        }
    }
    for i in 1..=6 {
        for j in i + 1..=6 {
            for k in j + 1..=6 {
                let a = alpha_ijk(i, j, k);
                out.push(a);
                out.push(neg(&a));
            }
        }
    }
    out.sort();
    out
}

/// All roots found by brute force over a coordinate box (oracle for [`roots`]).
pub fn roots_by_search() -> Vec<LatticeVector> {
    let mut out = Vec::new();
    let r = -3..=3;
    for v0 in r.clone() {
        for v1 in r.clone() {
            for v2 in r.clone() {
                for v3 in r.clone() {
                    for v4 in r.clone() {
                        for v5 in r.clone() {
                            for v6 in r.clone() {
                                let v = [v0, v1, v2, v3, v4, v5, v6];
                                if is_root(&v) {
                                    out.push(v);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// The 27 exceptional vectors with labels, sorted lexicographically by coordinates.
pub fn exceptionals() -> Vec<(Label, LatticeVector)> {
    let mut out: Vec<(Label, LatticeVector)> = Label::all().map(|l| (l, l.vector())).collect();
    out.sort_by_key(|(_, v)| *v);
    out
}

/// The six lines ℓ with (ℓ, α) = 1.
pub fn root_sixer(alpha: &LatticeVector) -> Result<Sixer> {
    if !is_root(alpha) {
        return Err(Error::Parse("not a root".into()));
    }
    let v: Vec<Label> = Label::all()
        .filter(|l| pairing(&l.vector(), alpha) == 1)
        .collect();
    v.try_into().map_err(|_| Error::NotASixer)
}

pub fn is_sixer(d: &[Label]) -> bool {
    let set: BTreeSet<Label> = d.iter().copied().collect();
    set.len() == 6 && d.iter().all(|a| d.iter().all(|b| !meets(*a, *b)))
}

/// The unique root α with (ℓ, α) = 1 for all six lines of the sixer.
pub fn sixer_root(d: &[Label]) -> Result<LatticeVector> {
    if !is_sixer(d) {
        return Err(Error::NotASixer);
    }
    let cands: Vec<LatticeVector> = roots()
        .into_iter()
        .filter(|a| d.iter().all(|l| pairing(&l.vector(), a) == 1))
        .collect();
    match cands.as_slice() {
        [a] => Ok(*a),
        _ => Err(Error::NotASixer),
    }
}

/// All 72 sixers (label-sorted), sorted lexicographically.
pub fn sixers() -> Vec<Sixer> {
    let mut out: Vec<Sixer> = roots().iter().map(|a| root_sixer(a).unwrap()).collect();
    out.sort();
    out
}

/// Sixers found by exhaustive search over 6-subsets of mutually skew lines.
pub fn sixers_by_search() -> Vec<Sixer> {
    let inc = incidence();
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(start: usize, cur: &mut Vec<usize>, inc: &[[bool; 27]; 27], out: &mut Vec<Sixer>) {
        if cur.len() == 6 {
            out.push(std::array::from_fn(|i| Label(cur[i] as u8)));
            return;
        }
        for n in start..27 {
            if cur.iter().all(|&c| !inc[c][n]) {
                cur.push(n);
                rec(n + 1, cur, inc, out);
                cur.pop();
            }
        }
    }
    rec(0, &mut cur, &inc, &mut out);
    out
}

/// Partner of each line of a sixer in the complementary sixer of its double-six.
pub fn double_six_of(d: &Sixer) -> Result<DoubleSix> {
    let alpha = sixer_root(d)?;
    let other = root_sixer(&neg(&alpha))?;
    let mut partner = [Label(0); 6];
    for (i, l) in d.iter().enumerate() {
        let skew: Vec<Label> = other.iter().copied().filter(|m| !meets(*l, *m)).collect();
        if skew.len() != 1 {
            return Err(Error::ConfigurationMismatch("double-six alignment".into()));
        }
        partner[i] = skew[0];
    }
    Ok(DoubleSix {
        rows: [*d, partner],
    })
}

/// All 36 double-sixes; the first row is the lexicographically smaller sixer.
pub fn double_sixes() -> Vec<DoubleSix> {
    let mut out: Vec<DoubleSix> = sixers()
        .iter()
        .map(|d| double_six_of(d).unwrap())
        .filter(|ds| {
            let mut other = ds.rows[1];
            other.sort();
            ds.rows[0] < other
        })
        .collect();
    out.sort();
    out
}

/// All 45 tritangent trios (label-sorted), sorted lexicographically.
pub fn tritangent_trios() -> Vec<Trio> {
    let mut out = Vec::new();
    for a in 0..27u8 {
        for b in a + 1..27 {
            for c in b + 1..27 {
                let t = [Label(a), Label(b), Label(c)];
                if is_trio(&t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// All 120 conjugate pairs of triads, as canonical 3×3 arrangements, sorted.
pub fn triad_pairs() -> Vec<TriadPair> {
    let trios = tritangent_trios();
    let disjoint = |x: &Trio, y: &Trio| x.iter().all(|a| !y.contains(a));
    let mut set = BTreeSet::new();
    for (i, r0) in trios.iter().enumerate() {
        for (j, r1) in trios.iter().enumerate().skip(i + 1) {
            if !disjoint(r0, r1) {
                continue;
            }
            for r2 in trios.iter().skip(j + 1) {
                if !disjoint(r0, r2) || !disjoint(r1, r2) {
                    continue;
                }
                if let Some(tp) = arrange_columns(r0, r1, r2) {
                    set.insert(tp.canonical());
                }
            }
        }
    }
    set.into_iter().collect()
}

fn arrange_columns(r0: &Trio, r1: &Trio, r2: &Trio) -> Option<TriadPair> {
    let mut m = [*r0, [Label(0); 3], [Label(0); 3]];
    let mut used1 = [false; 3];
    let mut used2 = [false; 3];
    for j in 0..3 {
        let mut found = false;
        'search: for (b, &l1) in r1.iter().enumerate() {
            if used1[b] {
                continue;
            }
            for (c, &l2) in r2.iter().enumerate() {
                if !used2[c] && is_trio(&[r0[j], l1, l2]) {
                    m[1][j] = l1;
                    m[2][j] = l2;
                    used1[b] = true;
                    used2[c] = true;
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            return None;
        }
    }
    Some(TriadPair { m })
}

/// Reflection r_α(v) = v + (v, α)α.
pub fn reflect(alpha: &LatticeVector, v: &LatticeVector) -> LatticeVector {
    add(v, &scale(alpha, pairing(v, alpha)))
}

/// The reflection in a root as a Weyl group element.
pub fn reflection(alpha: &LatticeVector) -> Result<WeylElement> {
    if !is_root(alpha) {
        return Err(Error::Parse("not a root".into()));
    }
    let mut perm = [0u8; 27];
    for l in Label::all() {
        let img = Label::from_vector(&reflect(alpha, &l.vector()))
            .expect("reflections permute exceptional vectors");
        perm[l.index()] = img.0;
    }
    Ok(WeylElement::from_perm(perm))
}

/// One row of the table relating sixers, roots, and twisted cubic classes.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TwistedCubicRow {
    pub name: &'static str,
    pub count: usize,
    pub expected_count: usize,
    pub all_match: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct TwistedCubicReport {
    pub rows: Vec<TwistedCubicRow>,
    pub total: usize,
    pub distinct_roots: usize,
    pub pass: bool,
}

/// For each family c of twisted cubic classes, checks c + k against the stated root.
pub fn twisted_cubic_check() -> TwistedCubicReport {
    let mut rows = Vec::new();
    let mut all_roots = BTreeSet::new();
    let mut push =
        |name: &'static str, expected: usize, items: Vec<(LatticeVector, LatticeVector)>| {
            let mut ok = true;
            for (c, root) in &items {
                ok &= add(c, &K) == *root && is_root(root);
                // a twisted cubic class: c^2 = 1, (c, k) = -3
                ok &= pairing(c, c) == 1 && pairing(c, &K) == -3;
                all_roots.insert(*root);
            }
            rows.push(TwistedCubicRow {
                name,
                count: items.len(),
                expected_count: expected,
                all_match: ok && items.len() == expected,
            });
        };
    let sum_e: LatticeVector = [0, 1, 1, 1, 1, 1, 1];
    push(
        "D_max",
        1,
        vec![(add(&scale(&basis(0), 5), &scale(&sum_e, -2)), alpha_max())],
    );
    push("-D_max", 1, vec![(basis(0), neg(&alpha_max()))]);
    let mut dij = Vec::new();
    let mut mdij = Vec::new();
    for i in 1..=6 {
        for j in 1..=6 {
            if i == j || i > j {
                continue;
            }
            // both orientations of the unordered pair give the 15 + 15 rows
            let c = add(&add(&scale(&basis(0), 3), &neg(&sum_e)), &alpha_ij(i, j));
            dij.push((c, alpha_ij(i, j)));
            let c2 = add(&add(&scale(&basis(0), 3), &neg(&sum_e)), &alpha_ij(j, i));
            mdij.push((c2, alpha_ij(j, i)));
        }
    }
    push("D_ij", 15, dij);
    push("-D_ij", 15, mdij);
    let mut dijk = Vec::new();
    let mut mdijk = Vec::new();
    for i in 1..=6 {
        for j in i + 1..=6 {
            for k in j + 1..=6 {
                let rest: Vec<usize> = (1..=6).filter(|x| ![i, j, k].contains(x)).collect();
                let mut c = scale(&basis(0), 4);
                for &t in &rest {
                    c[t] -= 1;
                }
                for t in [i, j, k] {
                    c[t] -= 2;
                }
                dijk.push((c, alpha_ijk(i, j, k)));
                let mut c2 = scale(&basis(0), 2);
                for &t in &rest {
                    c2[t] -= 1;
                }
                mdijk.push((c2, neg(&alpha_ijk(i, j, k))));
            }
        }
    }
    push("D_ijk", 20, dijk);
    push("-D_ijk", 20, mdijk);
    let total = rows.iter().map(|r| r.count).sum();
    let distinct_roots = all_roots.len();
    let pass = rows.iter().all(|r| r.all_match) && total == 72 && distinct_roots == 72;
    TwistedCubicReport {
        rows,
        total,
        distinct_roots,
        pass,
    }
}
