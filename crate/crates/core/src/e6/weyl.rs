//! W(E6) as a permutation group on the 27 exceptional vectors.

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};
use std::path::Path;
use std::sync::OnceLock;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::{add, is_root, pairing, reflection, roots, Label, LatticeVector, K};
use crate::error::{Error, Result};

/// perm[i] is the index of the image of label i.
pub type Perm = [u8; 27];

pub const IDENTITY: Perm = {
    let mut p = [0u8; 27];
    let mut i = 0;
    while i < 27 {
        p[i] = i as u8;
        i += 1;
    }
    p
};

pub fn compose(a: &Perm, b: &Perm) -> Perm {
    std::array::from_fn(|i| a[b[i] as usize])
}

pub fn invert(a: &Perm) -> Perm {
    let mut out = [0u8; 27];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

/// An element of W(E6), stored as a permutation of the 27 labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    pub perm: Perm,
}

impl WeylElement {
    pub fn from_perm(perm: Perm) -> WeylElement {
        WeylElement { perm }
    }

    pub fn identity() -> WeylElement {
        WeylElement { perm: IDENTITY }
    }

    pub fn apply(&self, l: Label) -> Label {
        Label(self.perm[l.index()])
    }

    /// self ∘ other (other acts first).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement::from_perm(compose(&self.perm, &other.perm))
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement::from_perm(invert(&self.perm))
    }

    pub fn pow(&self, n: u32) -> WeylElement {
        let mut out = WeylElement::identity();
        for _ in 0..n {
            out = out.compose(self);
        }
        out
    }

    pub fn order(&self) -> u32 {
        let mut x = *self;
        let mut n = 1;
        while x.perm != IDENTITY {
            x = x.compose(self);
            n += 1;
        }
        n
    }

    pub fn fixed_count(&self) -> usize {
        self.perm
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i == x as usize)
            .count()
    }

    /// The induced lattice isometry; column c is the image of e_c.
    /// Uses e_i = E_i (i ≥ 1) and e0 = F12 + E1 + E2.
    pub fn matrix(&self) -> [[i32; 7]; 7] {
        let img = |l: Label| self.apply(l).vector();
        let mut cols: [LatticeVector; 7] = [[0; 7]; 7];
        cols[0] = add(
            &add(&img(Label::f(1, 2)), &img(Label::e(1))),
            &img(Label::e(2)),
        );
        for i in 1..=6 {
            cols[i] = img(Label::e(i));
        }
        std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r]))
    }

    /// Applies the lattice matrix to a vector.
    pub fn act(&self, v: &LatticeVector) -> LatticeVector {
        let m = self.matrix();
        std::array::from_fn(|r| (0..7).map(|c| m[r][c] * v[c]).sum())
    }

    /// Orbits as sorted label lists, sorted by their smallest label.
    pub fn orbits(&self) -> Vec<Vec<Label>> {
        let mut seen = [false; 27];
        let mut out = Vec::new();
        for start in 0..27 {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                orbit.push(Label(x as u8));
                x = self.perm[x] as usize;
            }
            orbit.sort();
            out.push(orbit);
        }
        out
    }

    /// Cycle lengths on the 27 lines, descending.
    pub fn cycle_type(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.orbits().iter().map(|o| o.len() as u32).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Whether perm comes from a lattice isometry fixing k: the reconstructed
    /// matrix must reproduce perm on all 27 vectors and preserve the pairing.
    pub fn is_valid(&self) -> bool {
        let m = self.matrix();
        let act = |v: &LatticeVector| -> LatticeVector {
            std::array::from_fn(|r| (0..7).map(|c| m[r][c] * v[c]).sum())
        };
        if act(&K) != K {
            return false;
        }
        for l in Label::all() {
            if act(&l.vector()) != self.apply(l).vector() {
                return false;
            }
        }
        for i in 0..7 {
            for j in 0..7 {
                let (ei, ej) = (super::basis(i), super::basis(j));
                if pairing(&act(&ei), &act(&ej)) != pairing(&ei, &ej) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    /// Index of the smallest member in the sorted element list.
    pub rep: u32,
    pub size: u32,
    pub order: u32,
}

/// The 51840 elements sorted lexicographically by permutation, with lookup
/// tables and the conjugacy partition.
pub struct WeylGroup {
    elems: Vec<Perm>,
    index: HashMap<Perm, u32>,
    class_of: Vec<u32>,
    classes: Vec<ConjugacyClass>,
}

const MAGIC: &[u8; 8] = b"W6PERM01";
pub const ORDER: usize = 51840;

fn reflection_perms() -> Vec<Perm> {
    roots()
        .iter()
        .map(|a| reflection(a).unwrap().perm)
        .collect()
}

/// Breadth-first closure of the identity under the 72 reflections.
pub fn closure_serial() -> Vec<Perm> {
    let gens = reflection_perms();
    let mut seen: HashSet<Perm> = HashSet::from([IDENTITY]);
    let mut frontier = vec![IDENTITY];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                let y = compose(g, x);
                if seen.insert(y) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let mut v: Vec<Perm> = seen.into_iter().collect();
    v.sort_unstable();
    v
}

/// Level-synchronous parallel closure; must agree with [`closure_serial`].
pub fn closure_parallel() -> Vec<Perm> {
    let gens = reflection_perms();
    let mut seen: HashSet<Perm> = HashSet::from([IDENTITY]);
    let mut frontier = vec![IDENTITY];
    while !frontier.is_empty() {
        let cand: Vec<Perm> = frontier
            .par_iter()
            .flat_map_iter(|x| gens.iter().map(move |g| compose(g, x)))
            .collect();
        let mut next = Vec::new();
        for y in cand {
            if seen.insert(y) {
                next.push(y);
            }
        }
        frontier = next;
    }
    let mut v: Vec<Perm> = seen.into_iter().collect();
    v.sort_unstable();
    v
}

impl WeylGroup {
    pub fn generate() -> WeylGroup {
        WeylGroup::from_elements(closure_serial())
    }

    fn from_elements(elems: Vec<Perm>) -> WeylGroup {
        let index: HashMap<Perm, u32> = elems
            .iter()
            .enumerate()
            .map(|(i, p)| (*p, i as u32))
            .collect();
        let mut g = WeylGroup {
            elems,
            index,
            class_of: Vec::new(),
            classes: Vec::new(),
        };
        g.compute_classes();
        g
    }

    /// Loads the cached element list from `dir`, or generates and writes it.
    /// A cache whose hash or contents do not check out is regenerated.
    pub fn load_or_generate(dir: Option<&Path>) -> Result<WeylGroup> {
        let Some(dir) = dir else {
            return Ok(WeylGroup::generate());
        };
        let path = dir.join("weyl_e6.bin");
        if let Ok(elems) = read_cache(&path) {
            return Ok(WeylGroup::from_elements(elems));
        }
        let g = WeylGroup::generate();
        std::fs::create_dir_all(dir)?;
        write_cache(&path, &g.elems)?;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = WeylElement> + '_ {
        self.elems.iter().map(|p| WeylElement::from_perm(*p))
    }

    pub fn element(&self, i: usize) -> WeylElement {
        WeylElement::from_perm(self.elems[i])
    }

    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(&w.perm).map(|&i| i as usize)
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.index.contains_key(&w.perm)
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    /// Index into [`WeylGroup::classes`].
    pub fn class_of(&self, w: &WeylElement) -> Option<usize> {
        self.index_of(w).map(|i| self.class_of[i] as usize)
    }

    pub fn class_members(&self, c: usize) -> impl Iterator<Item = WeylElement> + '_ {
        self.class_of
            .iter()
            .enumerate()
            .filter(move |(_, &k)| k as usize == c)
            .map(|(i, _)| self.element(i))
    }

    /// Conjugacy classes by orbit search under conjugation by the generators
    /// (simple reflections suffice since they generate the group).
    fn compute_classes(&mut self) {
        let simple: Vec<Perm> = simple_roots()
            .iter()
            .map(|a| reflection(a).unwrap().perm)
            .collect();
        let n = self.elems.len();
        let mut class_of = vec![u32::MAX; n];
        let mut raw: Vec<(u32, u32)> = Vec::new();
        for start in 0..n {
            if class_of[start] != u32::MAX {
                continue;
            }
            let cid = raw.len() as u32;
            class_of[start] = cid;
            let mut stack = vec![start];
            let mut size = 0u32;
            while let Some(i) = stack.pop() {
                size += 1;
                let x = self.elems[i];
                for s in &simple {
                    let y = compose(s, &compose(&x, s));
                    let j = self.index[&y] as usize;
                    if class_of[j] == u32::MAX {
                        class_of[j] = cid;
                        stack.push(j);
                    }
                }
            }
            raw.push((start as u32, size));
        }
        // order classes by (element order, size, representative)
        let mut keyed: Vec<(u32, u32, u32, u32)> = raw
            .iter()
            .enumerate()
            .map(|(cid, &(rep, size))| {
                (
                    WeylElement::from_perm(self.elems[rep as usize]).order(),
                    size,
                    rep,
                    cid as u32,
                )
            })
            .collect();
        keyed.sort_unstable();
        let mut remap = vec![0u32; keyed.len()];
        self.classes = keyed
            .iter()
            .enumerate()
            .map(|(new, &(order, size, rep, old))| {
                remap[old as usize] = new as u32;
                ConjugacyClass { rep, size, order }
            })
            .collect();
        self.class_of = class_of.into_iter().map(|c| remap[c as usize]).collect();
    }

    /// The 72 elements that are reflections in some root.
    pub fn reflections(&self) -> Vec<WeylElement> {
        let refl: HashSet<Perm> = reflection_perms().into_iter().collect();
        self.elements().filter(|w| refl.contains(&w.perm)).collect()
    }

    /// Elements of order 2 with 15 fixed lines whose matrix is r_α for some root α.
    pub fn reflections_by_filter(&self) -> Vec<WeylElement> {
        let root_list = roots();
        self.elements()
            .filter(|w| w.order() == 2 && w.fixed_count() == 15)
            .filter(|w| {
                let m = w.matrix();
                root_list.iter().any(|a| {
                    (0..7).all(|c| {
                        let img = super::reflect(a, &super::basis(c));
                        (0..7).all(|r| m[r][c] == img[r])
                    })
                })
            })
            .collect()
    }

    pub fn content_hash(&self) -> [u8; 32] {
        hash_payload(&self.elems)
    }
}

/// Simple roots α_12, α_23, α_34, α_45, α_56, α_123.
pub fn simple_roots() -> Vec<LatticeVector> {
    let mut v: Vec<LatticeVector> = (1..6).map(|i| super::alpha_ij(i, i + 1)).collect();
    v.push(super::alpha_ijk(1, 2, 3));
    debug_assert!(v.iter().all(is_root));
    v
}

fn hash_payload(elems: &[Perm]) -> [u8; 32] {
    let mut h = Sha256::new();
    for p in elems {
        h.update(p);
    }
    h.finalize().into()
}

fn write_cache(path: &Path, elems: &[Perm]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(MAGIC)?;
    f.write_all(&(elems.len() as u32).to_le_bytes())?;
    f.write_all(&hash_payload(elems))?;
    for p in elems {
        f.write_all(p)?;
    }
    Ok(())
}

fn read_cache(path: &Path) -> Result<Vec<Perm>> {
    let mut f = std::fs::File::open(path)?;
    let mut buf = Vec::new();
    f.read_to_end(&mut buf)?;
    let bad = || Error::Io(format!("corrupt cache {}", path.display()));
    if buf.len() < 44 || &buf[..8] != MAGIC {
        return Err(bad());
    }
    let n = u32::from_le_bytes(buf[8..12].try_into().unwrap()) as usize;
    if n != ORDER || buf.len() != 44 + 27 * n {
        return Err(bad());
    }
    let elems: Vec<Perm> = buf[44..]
        .chunks(27)
        .map(|c| c.try_into().unwrap())
        .collect();
    if hash_payload(&elems)[..] != buf[12..44] {
        return Err(bad());
    }
    // the list must be sorted, contain the identity, and be closed under the simple reflections
    if !elems.windows(2).all(|w| w[0] < w[1]) {
        return Err(bad());
    }
    let set: HashSet<&Perm> = elems.iter().collect();
    let gens: Vec<Perm> = simple_roots()
        .iter()
        .map(|a| reflection(a).unwrap().perm)
        .collect();
    if !set.contains(&IDENTITY)
        || !elems
            .iter()
            .all(|x| gens.iter().all(|g| set.contains(&compose(g, x))))
    {
        return Err(bad());
    }
    Ok(elems)
}

static GROUP: OnceLock<WeylGroup> = OnceLock::new();

/// Process-wide group, generated on first use.
pub fn weyl_group() -> &'static WeylGroup {
    GROUP.get_or_init(WeylGroup::generate)
}

/// Sets up the process-wide group from a cache directory, unless it already exists.
pub fn init_weyl_group(dir: Option<&Path>) -> Result<&'static WeylGroup> {
    if GROUP.get().is_none() {
        let g = WeylGroup::load_or_generate(dir)?;
        let _ = GROUP.set(g);
    }
    Ok(weyl_group())
}
