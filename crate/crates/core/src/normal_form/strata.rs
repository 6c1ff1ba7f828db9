use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::{octanomial_surface, OctanomialParams};
use crate::error::{Error, Result};
use crate::fields::{root_of_unity, Elem, Field, UniPoly};
use crate::linalg::{self, Matrix};
use crate::poly::{monomials, Mat4};
use crate::surface::CubicSurface;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormVariant {
    Main,
    /// The 4B form preserving 3D → 4B and the 5A form (0,0,0,2).
    Alternative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CharRule {
    Any,
    Not(&'static [u64]),
    Only(u64),
}

impl CharRule {
    fn holds(self, p: u64) -> bool {
        match self {
            CharRule::Any => true,
            CharRule::Not(bad) => !bad.contains(&p),
            CharRule::Only(q) => p == q,
        }
    }

    fn describe(self) -> String {
        match self {
            CharRule::Any => "any".into(),
            CharRule::Not(bad) => bad
                .iter()
                .map(|p| format!("p≠{p}"))
                .collect::<Vec<_>>()
                .join(", "),
            CharRule::Only(q) => format!("p={q}"),
        }
    }
}

/// Which parametrization and which matrices a catalog row uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Recipe {
    R2A,
    R2B,
    R3A,
    R3AChar3,
    R3C,
    R3D,
    R4A,
    R4B,
    R4BAlt,
    R5A,
    R5AAlt,
    R6E,
    R8A,
    R12A,
    /// The 6E form in p = 2, carrying 6E, 4A and 4B.
    Char2SixE,
    /// (0,0,0,0) in p = 2, carrying 3C, 5A and 12A.
    Char2ThreeC,
    /// (0,0,i,−i) in p = 3, carrying 8A and 12A.
    Char3EightA,
}

#[derive(Clone, Debug)]
pub struct StratumDescriptor {
    pub label: &'static str,
    pub variant: FormVariant,
    pub char_condition: String,
    /// Number of free values passed to `stratum_params`.
    pub free_params: usize,
    pub constraints: &'static [&'static str],
    /// Roots of unity and other radicals the row needs in the field.
    pub requirements: &'static [&'static str],
    rule: CharRule,
    recipe: Recipe,
}

impl StratumDescriptor {
    pub fn applies(&self, p: u64) -> bool {
        self.rule.holds(p)
    }

    pub fn order(&self) -> u32 {
        label_order(self.label)
    }
}

pub(crate) fn label_order(label: &str) -> u32 {
    label
        .trim_end_matches(|c: char| c.is_ascii_alphabetic())
        .parse()
        .unwrap_or(1)
}

const NOT2: &[u64] = &[2];
const NOT3: &[u64] = &[3];
const NOT25: &[u64] = &[2, 5];
const NOT23: &[u64] = &[2, 3];

fn row(
    label: &'static str,
    variant: FormVariant,
    rule: CharRule,
    free_params: usize,
    constraints: &'static [&'static str],
    requirements: &'static [&'static str],
    recipe: Recipe,
) -> StratumDescriptor {
    StratumDescriptor {
        label,
        variant,
        char_condition: rule.describe(),
        free_params,
        constraints,
        requirements,
        rule,
        recipe,
    }
}

/// Every row of the stratum table, the two alternative forms, and the
/// characteristic 2 and 3 coincidences.
pub fn catalog() -> Vec<StratumDescriptor> {
    use CharRule::*;
    use FormVariant::*;
    use Recipe::*;
    const SIXE: &[&str] = &["a0 = a1 = 0", "a2 = a3"];
    const THREEC: &[&str] = &["a0 = a1 = a2 = a3 = 0"];
    const NINE: &[&str] = &["a0 = a1 = 0", "a2 = i", "a3 = -i"];
    vec![
        row("2A", Main, Any, 3, &["a0 = a1"], &[], R2A),
        row("2B", Main, Any, 2, &["a0 = a1", "a2 = a3"], &[], R2B),
        row(
            "3A",
            Main,
            Not(NOT3),
            1,
            &["a0 = a1 = 0", "a2 + ζ3·a3 = 0"],
            &["ζ3"],
            R3A,
        ),
        row(
            "3A",
            Main,
            Only(3),
            1,
            &["a0 = a1 = 0", "a2 + a3 = 0"],
            &[],
            R3AChar3,
        ),
        row("3C", Main, Not(NOT3), 0, THREEC, &["ζ3"], R3C),
        row("3D", Main, Any, 2, &["a0 = a1 = 0"], &[], R3D),
        row(
            "4A",
            Main,
            Not(NOT2),
            1,
            &[
                "a0 = a1",
                "q³ + 4pq + 8 − 2a0(3q² − 4a0q + 4p) = 0",
                "3q − p² + a0(2a0²q − a0(q² + 2p) + pq + 2) = 0",
            ],
            &["i", "roots of the (∗) elimination"],
            R4A,
        ),
        row(
            "4A",
            Main,
            Only(2),
            1,
            SIXE,
            &["roots of t³ + a2·t + 1"],
            Char2SixE,
        ),
        row("4B", Main, Not(NOT2), 1, &["a0 = a1 = a2 = a3"], &[], R4B),
        row(
            "4B",
            Main,
            Only(2),
            1,
            SIXE,
            &["roots of t³ + a2·t + 1"],
            Char2SixE,
        ),
        row(
            "4B",
            Alternative,
            Not(NOT2),
            1,
            &["a0 = a1 = 0", "a2 + a3 + 2c = 0", "c(a2 + c)(a3 + c) = 1"],
            &["a root c of the cubic"],
            R4BAlt,
        ),
        row(
            "5A",
            Main,
            Not(NOT25),
            0,
            &["a0 = a1 = 0", "a2 = a3 = −2"],
            &[],
            R5A,
        ),
        row("5A", Main, Only(2), 0, THREEC, &["ζ3"], Char2ThreeC),
        row(
            "5A",
            Alternative,
            Not(NOT25),
            0,
            &["a0 = a1 = a2 = 0", "a3 = 2"],
            &[],
            R5AAlt,
        ),
        row("6E", Main, Not(NOT2), 1, SIXE, &[], R6E),
        row(
            "6E",
            Main,
            Only(2),
            1,
            SIXE,
            &["roots of t³ + a2·t + 1"],
            Char2SixE,
        ),
        row(
            "8A",
            Main,
            Not(&[2, 3]),
            0,
            &["(∗)", "γ(1 − a0a2) − 2δ(1 − a0a3) = 0"],
            &["ζ8", "a solution of (∗) and (†)"],
            R8A,
        ),
        row("8A", Main, Only(3), 0, NINE, &["i", "ζ8"], Char3EightA),
        row(
            "12A",
            Main,
            Not(NOT23),
            0,
            &[
                "a0 = a1 = 0",
                "a2 + ζ3·a3 = 0",
                "a3⁶ + 4ζ3(1 − ζ3)a3³ − 8 = 0",
            ],
            &["ζ3", "i", "a root of the sextic"],
            R12A,
        ),
        row("12A", Main, Only(2), 0, THREEC, &["ζ3"], Char2ThreeC),
        row("12A", Main, Only(3), 0, NINE, &["i", "ζ8"], Char3EightA),
    ]
}

pub(crate) fn descriptor(label: &str, variant: FormVariant, p: u64) -> Result<StratumDescriptor> {
    catalog()
        .into_iter()
        .find(|d| d.label == label && d.variant == variant && d.applies(p))
        .ok_or_else(|| {
            Error::Parse(format!(
                "no {} row for stratum {label} in characteristic {p}",
                if variant == FormVariant::Main {
                    "main"
                } else {
                    "alternative"
                }
            ))
        })
}

/// Parameters of a stratum together with the auxiliary values of its row.
#[derive(Clone, Debug)]
pub struct StratumInstance {
    pub label: &'static str,
    pub variant: FormVariant,
    pub field: Field,
    pub params: OctanomialParams,
    pub aux: BTreeMap<String, Elem>,
    pub residuals: Vec<(String, Elem)>,
    recipe: Recipe,
}

impl StratumInstance {
    pub fn surface(&self) -> CubicSurface {
        octanomial_surface(&self.field, &self.params)
    }

    /// Builds an instance from given parameters, recomputing the auxiliary
    /// values; the residuals are reported, not enforced.
    pub fn from_params(
        label: &str,
        variant: FormVariant,
        k: &Field,
        params: OctanomialParams,
    ) -> Result<StratumInstance> {
        let d = descriptor(label, variant, k.characteristic())?;
        let aux = derived_aux(d.recipe, k, &params)?;
        let residuals = residuals_for(d.recipe, k, &params)?;
        Ok(StratumInstance {
            label: d.label,
            variant,
            field: k.clone(),
            params,
            aux,
            residuals,
            recipe: d.recipe,
        })
    }

    pub fn satisfied(&self) -> bool {
        self.residuals.iter().all(|(_, r)| self.field.is_zero(r))
    }
}

fn c(k: &Field, n: i64) -> Elem {
    k.from_i64(n)
}

fn half(k: &Field) -> Result<Elem> {
    k.inv(&c(k, 2))
}

/// α, β, A of the 4A row.
fn alpha_beta(k: &Field, a0: &Elem, a2: &Elem, a3: &Elem) -> Result<(Elem, Elem, Elem)> {
    let den = |a: &Elem| k.mul(&c(k, 4), &k.sub(&k.mul(a0, a), &k.one()));
    let degenerate =
        |what: &str| Error::DegenerateParameters(format!("{what} has vanishing denominator"));
    let alpha = k
        .div(&k.mul(a2, a2), &den(a2))
        .map_err(|_| degenerate("α"))?;
    let beta = k
        .div(&k.mul(a3, a3), &den(a3))
        .map_err(|_| degenerate("β"))?;
    let big_a = k.add(&k.mul(a3, &alpha), &k.mul(a2, &beta));
    Ok((alpha, beta, big_a))
}

/// γ and δ of the 8A row.
fn gamma_delta(k: &Field, a0: &Elem, a2: &Elem, a3: &Elem) -> Result<(Elem, Elem)> {
    let (alpha, beta, big_a) = alpha_beta(k, a0, a2, a3)?;
    let u2 = k.sub(&k.one(), &k.mul(a0, a2));
    let u3 = k.sub(&k.one(), &k.mul(a0, a3));
    let h = half(k)?;
    let one_minus_a = k.sub(&k.one(), &big_a);
    let two_ab = k.mul(&c(k, 2), &k.mul(&alpha, &beta));
    let gamma = k.sum(&[
        k.mul(&k.mul(&beta, &beta), &u2),
        k.mul(&two_ab, &u3),
        k.mul(a0, &beta),
        k.neg(&k.mul(&k.mul(a3, &one_minus_a), &h)),
    ]);
    let delta = k.sum(&[
        k.mul(&k.mul(&alpha, &alpha), &u3),
        k.mul(&two_ab, &u2),
        k.mul(a0, &alpha),
        k.neg(&k.mul(&k.mul(a2, &one_minus_a), &h)),
    ]);
    Ok((gamma, delta))
}

/// The two (∗) polynomials at (a0, p, q).
fn star(k: &Field, a0: &Elem, p: &Elem, q: &Elem) -> (Elem, Elem) {
    let q2 = k.mul(q, q);
    let q3 = k.mul(&q2, q);
    let pq = k.mul(p, q);
    let first = k.sub(
        &k.sum(&[q3, k.mul(&c(k, 4), &pq), c(k, 8)]),
        &k.mul(
            &k.mul(&c(k, 2), a0),
            &k.sum(&[
                k.mul(&c(k, 3), &q2),
                k.neg(&k.mul(&c(k, 4), &k.mul(a0, q))),
                k.mul(&c(k, 4), p),
            ]),
        ),
    );
    let inner = k.sum(&[
        k.mul(&c(k, 2), &k.mul(&k.mul(a0, a0), q)),
        k.neg(&k.mul(a0, &k.add(&q2, &k.mul(&c(k, 2), p)))),
        pq,
        c(k, 2),
    ]);
    let second = k.sum(&[k.mul(&c(k, 3), q), k.neg(&k.mul(p, p)), k.mul(a0, &inner)]);
    (first, second)
}

fn star_residuals(k: &Field, pr: &OctanomialParams) -> Vec<(String, Elem)> {
    let p = k.add(&pr.a2, &pr.a3);
    let q = k.mul(&pr.a2, &pr.a3);
    let (s1, s2) = star(k, &pr.a0, &p, &q);
    vec![
        ("a0 - a1".into(), k.sub(&pr.a0, &pr.a1)),
        ("(*) first".into(), s1),
        ("(*) second".into(), s2),
    ]
}

fn dagger(k: &Field, pr: &OctanomialParams) -> Result<Elem> {
    let (gamma, delta) = gamma_delta(k, &pr.a0, &pr.a2, &pr.a3)?;
    let u2 = k.sub(&k.one(), &k.mul(&pr.a0, &pr.a2));
    let u3 = k.sub(&k.one(), &k.mul(&pr.a0, &pr.a3));
    Ok(k.sub(&k.mul(&gamma, &u2), &k.mul(&c(k, 2), &k.mul(&delta, &u3))))
}

fn sextic(k: &Field, z3: &Elem, a3: &Elem) -> Elem {
    let a33 = k.pow(a3, 3);
    let coef = k.mul(&c(k, 4), &k.mul(z3, &k.sub(&k.one(), z3)));
    k.sum(&[k.mul(&a33, &a33), k.mul(&coef, &a33), c(k, -8)])
}

fn residuals_for(recipe: Recipe, k: &Field, pr: &OctanomialParams) -> Result<Vec<(String, Elem)>> {
    use Recipe::*;
    let r = |name: &str, v: Elem| (name.to_string(), v);
    let zero_pair = || vec![r("a0", pr.a0.clone()), r("a1", pr.a1.clone())];
    Ok(match recipe {
        R2A => vec![r("a0 - a1", k.sub(&pr.a0, &pr.a1))],
        R2B => vec![
            r("a0 - a1", k.sub(&pr.a0, &pr.a1)),
            r("a2 - a3", k.sub(&pr.a2, &pr.a3)),
        ],
        R3A | R12A => {
            let z = root_of_unity(k, 3)?;
            let mut v = zero_pair();
            v.push(r("a2 + z3*a3", k.add(&pr.a2, &k.mul(&z, &pr.a3))));
            if recipe == R12A {
                v.push(r("sextic", sextic(k, &z, &pr.a3)));
            }
            v
        }
        R3AChar3 => {
            let mut v = zero_pair();
            v.push(r("a2 + a3", k.add(&pr.a2, &pr.a3)));
            v
        }
        R3C | Char2ThreeC => {
            let mut v = zero_pair();
            v.push(r("a2", pr.a2.clone()));
            v.push(r("a3", pr.a3.clone()));
            v
        }
        R3D => zero_pair(),
        R4A => star_residuals(k, pr),
        R8A => {
            let mut v = star_residuals(k, pr);
            v.push(r("(dagger)", dagger(k, pr)?));
            v
        }
        R4B => vec![
            r("a0 - a1", k.sub(&pr.a0, &pr.a1)),
            r("a1 - a2", k.sub(&pr.a1, &pr.a2)),
            r("a2 - a3", k.sub(&pr.a2, &pr.a3)),
        ],
        R4BAlt => {
            let cc = k.neg(&k.mul(&half(k)?, &k.add(&pr.a2, &pr.a3)));
            let mut v = zero_pair();
            let prod = k.mul(&cc, &k.mul(&k.add(&pr.a2, &cc), &k.add(&pr.a3, &cc)));
            v.push(r("c(a2+c)(a3+c) - 1", k.sub(&prod, &k.one())));
            v
        }
        R5A => {
            let mut v = zero_pair();
            v.push(r("a2 + 2", k.add(&pr.a2, &c(k, 2))));
            v.push(r("a3 + 2", k.add(&pr.a3, &c(k, 2))));
            v
        }
        R5AAlt => {
            let mut v = zero_pair();
            v.push(r("a2", pr.a2.clone()));
            v.push(r("a3 - 2", k.sub(&pr.a3, &c(k, 2))));
            v
        }
        R6E | Char2SixE => {
            let mut v = zero_pair();
            v.push(r("a2 - a3", k.sub(&pr.a2, &pr.a3)));
            v
        }
        Char3EightA => {
            let mut v = zero_pair();
            v.push(r("a2 + a3", k.add(&pr.a2, &pr.a3)));
            v.push(r("a2^2 + 1", k.add(&k.mul(&pr.a2, &pr.a2), &k.one())));
            v
        }
    })
}

/// Residuals of the constraints of a row; all zero iff the parameters lie on it.
pub fn stratum_residuals(
    label: &str,
    variant: FormVariant,
    k: &Field,
    params: &OctanomialParams,
) -> Result<Vec<(String, Elem)>> {
    let d = descriptor(label, variant, k.characteristic())?;
    residuals_for(d.recipe, k, params)
}

fn derived_aux(recipe: Recipe, k: &Field, pr: &OctanomialParams) -> Result<BTreeMap<String, Elem>> {
    use Recipe::*;
    let mut aux = BTreeMap::new();
    match recipe {
        R3A | R3C | R12A | Char2ThreeC => {
            let z = root_of_unity(k, 3)?;
            if recipe == R12A {
                let z2 = k.mul(&z, &z);
                aux.insert("a3'".into(), k.mul(&k.sub(&k.one(), &z2), &pr.a3));
            }
            aux.insert("zeta3".into(), z);
        }
        R4A | R8A => {
            let p = k.add(&pr.a2, &pr.a3);
            let q = k.mul(&pr.a2, &pr.a3);
            aux.insert("p".into(), p);
            aux.insert("q".into(), q);
            if let Ok((alpha, beta, big_a)) = alpha_beta(k, &pr.a0, &pr.a2, &pr.a3) {
                aux.insert("alpha".into(), alpha);
                aux.insert("beta".into(), beta);
                aux.insert("A".into(), big_a);
            }
            if recipe == R8A {
                if let Ok((g, d)) = gamma_delta(k, &pr.a0, &pr.a2, &pr.a3) {
                    aux.insert("gamma".into(), g);
                    aux.insert("delta".into(), d);
                }
            }
        }
        R4BAlt => {
            let cc = k.neg(&k.mul(&half(k)?, &k.add(&pr.a2, &pr.a3)));
            aux.insert("c".into(), cc);
        }
        Char2SixE => {
            let mu = UniPoly::new(k, vec![k.one(), pr.a2.clone(), k.zero(), k.one()])
                .distinct_roots()?;
            for (n, m) in mu.into_iter().enumerate() {
                aux.insert(format!("mu{}", n + 1), m);
            }
        }
        _ => {}
    }
    Ok(aux)
}

fn expect_arity(d: &StratumDescriptor, free: &[Elem]) -> Result<()> {
    if free.len() != d.free_params {
        return Err(Error::Parse(format!(
            "stratum {} takes {} free values, got {}",
            d.label,
            d.free_params,
            free.len()
        )));
    }
    Ok(())
}

/// Solutions (a2, a3) of (∗) for fixed a0, by eliminating p between the two
/// polynomials (the first is linear in p) and recovering a2, a3 as the roots
/// of t² − pt + q.
pub fn solve_star(k: &Field, a0: &Elem) -> Result<Vec<(Elem, Elem)>> {
    let poly = |cs: &[Elem]| UniPoly::new(k, cs.to_vec());
    let a02 = k.mul(a0, a0);
    // first = c1·p + c0, second = −p² + b1·p + b0, all in q
    let c1 = poly(&[k.neg(&k.mul(&c(k, 8), a0)), c(k, 4)]);
    let c0 = poly(&[
        c(k, 8),
        k.mul(&c(k, 8), &a02),
        k.neg(&k.mul(&c(k, 6), a0)),
        k.one(),
    ]);
    let b1 = poly(&[k.neg(&k.mul(&c(k, 2), &a02)), a0.clone()]);
    let b0 = poly(&[
        k.mul(&c(k, 2), a0),
        k.add(&c(k, 3), &k.mul(&c(k, 2), &k.mul(&a02, a0))),
        k.neg(&a02),
    ]);
    let res = b0
        .mul(&c1)
        .mul(&c1)
        .sub(&c0.mul(&c0))
        .sub(&b1.mul(&c0).mul(&c1));
    if res.is_zero() {
        return Err(Error::DegenerateParameters(
            "the (∗) resultant vanishes identically".into(),
        ));
    }
    let mut pq: Vec<(Elem, Elem)> = Vec::new();
    for q in res.distinct_roots()? {
        let lead = c1.eval(&q);
        if !k.is_zero(&lead) {
            pq.push((k.neg(&k.div(&c0.eval(&q), &lead)?), q));
        } else if k.is_zero(&c0.eval(&q)) {
            let quad = UniPoly::new(k, vec![k.neg(&b0.eval(&q)), k.neg(&b1.eval(&q)), k.one()]);
            for p in quad.distinct_roots()? {
                pq.push((p, q.clone()));
            }
        }
    }
    let mut out = Vec::new();
    for (p, q) in pq {
        let (s1, s2) = star(k, a0, &p, &q);
        if !k.is_zero(&s1) || !k.is_zero(&s2) {
            return Err(Error::ConstraintViolation(
                "elimination produced a non-solution of (∗)".into(),
            ));
        }
        let t = UniPoly::new(k, vec![q.clone(), k.neg(&p), k.one()]);
        let roots = t.roots()?;
        match roots.as_slice() {
            [r] if k.is_zero(&t.eval(r))
                && UniPoly::new(k, vec![k.neg(r), k.one()])
                    .mul(&UniPoly::new(k, vec![k.neg(r), k.one()]))
                    == t =>
            {
                out.push((r.clone(), r.clone()))
            }
            [r, s] => {
                out.push((r.clone(), s.clone()));
                if r != s {
                    out.push((s.clone(), r.clone()));
                }
            }
            _ => {}
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Largest field scanned for a0 when solving (∗) together with (†).
pub const DAGGER_SCAN_LIMIT: u64 = 1 << 14;

/// Solutions (a0, a2, a3) of (∗) and (†): a0 runs over the field, (a2, a3)
/// come from `solve_star`.
pub fn solve_dagger(k: &Field) -> Result<Vec<(Elem, Elem, Elem)>> {
    let n = k
        .cardinality()
        .ok_or_else(|| Error::UnsupportedField("the (†) solver needs a finite field".into()))?;
    if n > DAGGER_SCAN_LIMIT {
        return Err(Error::UnsupportedField(format!(
            "(†) scan limited to {DAGGER_SCAN_LIMIT} elements"
        )));
    }
    let mut out = Vec::new();
    for a0 in k.elements()? {
        let Ok(sols) = solve_star(k, &a0) else {
            continue;
        };
        for (a2, a3) in sols {
            let pr = OctanomialParams::new([a0.clone(), a0.clone(), a2.clone(), a3.clone()]);
            let Ok((gamma, _)) = gamma_delta(k, &a0, &a2, &a3) else {
                continue;
            };
            if k.is_zero(&gamma) {
                continue;
            }
            if k.is_zero(&dagger(k, &pr)?) {
                out.push((a0.clone(), a2, a3));
            }
        }
    }
    Ok(out)
}

fn pick<T: Clone>(sols: &[T], branch: usize, what: &str, k: &Field) -> Result<T> {
    if sols.is_empty() {
        return Err(Error::NoSolutionInField(format!("{what} over {k}")));
    }
    sols.get(branch).cloned().ok_or_else(|| {
        Error::Parse(format!(
            "branch {branch} out of range: {} solutions of {what}",
            sols.len()
        ))
    })
}

fn smooth_only(k: &Field, sols: Vec<OctanomialParams>) -> Result<Vec<OctanomialParams>> {
    let mut out = Vec::new();
    for s in sols {
        if octanomial_surface(k, &s).is_smooth()? {
            out.push(s);
        }
    }
    Ok(out)
}

/// All parameter points on a stratum row for the given free values; rows
/// with finitely many solutions list every one giving a smooth surface.
/// Free values follow the row's arity (2A: a0, a2, a3; 2B: a0, a2; 3A: a3;
/// 3D: a2, a3; 4A: a0; 4B: a0; alternative 4B: a2; 6E and the p = 2 rows
/// carried by the 6E form: a2).
pub fn stratum_solutions(
    label: &str,
    variant: FormVariant,
    k: &Field,
    free: &[Elem],
) -> Result<Vec<StratumInstance>> {
    use Recipe::*;
    let p = k.characteristic();
    let d = descriptor(label, variant, p)?;
    expect_arity(&d, free)?;
    let z = || k.zero();
    let o = |a: [Elem; 4]| OctanomialParams::new(a);
    let all: Vec<OctanomialParams> = match d.recipe {
        R2A => vec![o([
            free[0].clone(),
            free[0].clone(),
            free[1].clone(),
            free[2].clone(),
        ])],
        R2B => vec![o([
            free[0].clone(),
            free[0].clone(),
            free[1].clone(),
            free[1].clone(),
        ])],
        R3A => {
            let zeta = root_of_unity(k, 3)?;
            vec![o([
                z(),
                z(),
                k.neg(&k.mul(&zeta, &free[0])),
                free[0].clone(),
            ])]
        }
        R3AChar3 => vec![o([z(), z(), k.neg(&free[0]), free[0].clone()])],
        R3C | Char2ThreeC => vec![o([z(), z(), z(), z()])],
        R3D => vec![o([z(), z(), free[0].clone(), free[1].clone()])],
        R4A => {
            let a0 = &free[0];
            let sols: Vec<OctanomialParams> = solve_star(k, a0)?
                .into_iter()
                .filter(|(a2, a3)| alpha_beta(k, a0, a2, a3).is_ok())
                .map(|(a2, a3)| o([a0.clone(), a0.clone(), a2, a3]))
                .collect();
            smooth_only(k, sols)?
        }
        R4B => vec![o([
            free[0].clone(),
            free[0].clone(),
            free[0].clone(),
            free[0].clone(),
        ])],
        R4BAlt => {
            // −c(a2 + c)² = 1 once a3 = −2c − a2
            let a2 = &free[0];
            let cubic = UniPoly::new(
                k,
                vec![k.one(), k.mul(a2, a2), k.mul(&c(k, 2), a2), k.one()],
            );
            let sols: Vec<OctanomialParams> = cubic
                .distinct_roots()?
                .into_iter()
                .map(|cc| {
                    o([
                        z(),
                        z(),
                        a2.clone(),
                        k.sub(&k.neg(&k.mul(&c(k, 2), &cc)), a2),
                    ])
                })
                .collect();
            smooth_only(k, sols)?
        }
        R5A => vec![OctanomialParams::from_i64(k, [0, 0, -2, -2])],
        R5AAlt => vec![OctanomialParams::from_i64(k, [0, 0, 0, 2])],
        R6E => vec![o([z(), z(), free[0].clone(), free[0].clone()])],
        Char2SixE => {
            // the 4A and 4B matrices need all three roots of t³ + a2·t + 1
            let mu = UniPoly::new(k, vec![k.one(), free[0].clone(), k.zero(), k.one()])
                .distinct_roots()?;
            if d.label != "6E" && mu.len() < 3 {
                vec![]
            } else {
                vec![o([z(), z(), free[0].clone(), free[0].clone()])]
            }
        }
        R8A => {
            let sols: Vec<OctanomialParams> = solve_dagger(k)?
                .into_iter()
                .map(|(a0, a2, a3)| o([a0.clone(), a0, a2, a3]))
                .collect();
            smooth_only(k, sols)?
        }
        R12A => {
            let zeta = root_of_unity(k, 3)?;
            let coef = k.mul(&c(k, 4), &k.mul(&zeta, &k.sub(&k.one(), &zeta)));
            let mut cs = vec![k.zero(); 7];
            cs[0] = c(k, -8);
            cs[3] = coef;
            cs[6] = k.one();
            let sols: Vec<OctanomialParams> = UniPoly::new(k, cs)
                .distinct_roots()?
                .into_iter()
                .map(|a3| o([z(), z(), k.neg(&k.mul(&zeta, &a3)), a3]))
                .collect();
            smooth_only(k, sols)?
        }
        Char3EightA => {
            let i = root_of_unity(k, 4)?;
            vec![o([z(), z(), i.clone(), k.neg(&i)])]
        }
    };
    all.into_iter()
        .map(|params| {
            let aux = derived_aux(d.recipe, k, &params)?;
            let residuals = residuals_for(d.recipe, k, &params)?;
            if let Some((name, _)) = residuals.iter().find(|(_, r)| !k.is_zero(r)) {
                return Err(Error::ConstraintViolation(format!(
                    "{label}: {name} does not vanish"
                )));
            }
            Ok(StratumInstance {
                label: d.label,
                variant,
                field: k.clone(),
                params,
                aux,
                residuals,
                recipe: d.recipe,
            })
        })
        .collect()
}

/// One point of a stratum row; `branch` indexes `stratum_solutions`.
pub fn stratum_params(
    label: &str,
    variant: FormVariant,
    k: &Field,
    free: &[Elem],
    branch: usize,
) -> Result<StratumInstance> {
    let sols = stratum_solutions(label, variant, k, free)?;
    pick(&sols, branch, &format!("the {label} constraints"), k)
}

/// Random instance of a row with smooth surface: free values drawn from
/// the field, then the first branch.
pub fn sample_instance<R: Rng + ?Sized>(
    label: &str,
    variant: FormVariant,
    k: &Field,
    rng: &mut R,
    attempts: usize,
) -> Result<StratumInstance> {
    let d = descriptor(label, variant, k.characteristic())?;
    let mut last = Error::NoSolutionInField(format!("{label} over {k}"));
    for _ in 0..attempts.max(1) {
        let free: Vec<Elem> = (0..d.free_params).map(|_| k.random(rng)).collect();
        match stratum_params(label, variant, k, &free, 0) {
            Ok(inst) => {
                if inst.surface().is_smooth()? {
                    return Ok(inst);
                }
            }
            Err(e) => last = e,
        }
        if d.free_params == 0 {
            break;
        }
    }
    Err(last)
}

/// One matrix offered for a stratum; candidates sharing a `group` differ only
/// in the choice of roots.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub label: &'static str,
    pub group: String,
    pub branch: String,
    pub matrix: Mat4,
    /// The displayed matrix, known to fail as printed; kept for the report.
    pub erratum: bool,
}

fn mat(rows: [[Elem; 4]; 4]) -> Mat4 {
    Mat4(rows)
}

fn perm_matrix(k: &Field, rows: [[i64; 4]; 4]) -> Mat4 {
    Mat4::from_i64(k, rows)
}

fn unit(k: &Field, i: usize) -> [Elem; 4] {
    std::array::from_fn(|j| if i == j { k.one() } else { k.zero() })
}

/// The involution of type 2A with center q (p ≠ 2): its axis is the second
/// factor of the polar quadric Σ q_i ∂_i f, the first being the tangent plane.
pub fn eckardt_involution(x: &CubicSurface, q: &[Elem]) -> Result<Mat4> {
    let k = x.field();
    if k.characteristic() == 2 {
        return Err(Error::UnsupportedField(
            "reflections about an Eckardt point need p ≠ 2".into(),
        ));
    }
    let grads: Vec<Elem> = x.partials().iter().map(|d| d.eval(q)).collect();
    if grads.iter().all(|g| k.is_zero(g)) {
        return Err(Error::NotSmooth);
    }
    let mut polar = crate::poly::HomForm::zero(k, 2);
    for (i, d) in x.partials().iter().enumerate() {
        polar = polar.add(&d.scale(&q[i]))?;
    }
    // tangent·h = polar, linear in h
    let mons = monomials(2);
    let rows: Vec<Vec<Elem>> = mons
        .iter()
        .map(|m| {
            (0..4)
                .map(|j| {
                    let mut acc = k.zero();
                    for (i, g) in grads.iter().enumerate() {
                        let mut e = [0u32; 4];
                        e[i] += 1;
                        e[j] += 1;
                        if e == *m {
                            acc = k.add(&acc, g);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let rhs: Vec<Elem> = mons.iter().map(|m| polar.coeff(m)).collect();
    let h = linalg::solve(k, &Matrix::from_rows(rows), &rhs).ok_or_else(|| {
        Error::DegenerateParameters("the polar quadric does not contain the tangent plane".into())
    })?;
    let hq = h
        .iter()
        .zip(q)
        .fold(k.zero(), |acc, (a, b)| k.add(&acc, &k.mul(a, b)));
    if k.is_zero(&hq) {
        return Err(Error::DegenerateParameters(
            "the center lies on the axis".into(),
        ));
    }
    let two = c(k, 2);
    Ok(Mat4::from_fn(|i, j| {
        let id = if i == j { hq.clone() } else { k.zero() };
        k.sub(&id, &k.mul(&two, &k.mul(&q[i], &h[j])))
    }))
}

fn square_roots(k: &Field, x: &Elem) -> Result<Vec<Elem>> {
    crate::fields::nth_root(k, x, 2)
}

fn fourth_roots_of_unity(k: &Field) -> Result<Vec<Elem>> {
    UniPoly::new(k, vec![k.one(), k.zero(), k.one()]).distinct_roots()
}

fn primitive_roots(k: &Field, n: u64) -> Result<Vec<Elem>> {
    let mut cs = vec![k.zero(); n as usize + 1];
    cs[0] = k.neg(&k.one());
    cs[n as usize] = k.one();
    let all = UniPoly::new(k, cs).distinct_roots()?;
    let out: Vec<Elem> = all
        .into_iter()
        .filter(|r| k.mult_order(r) == Some(n))
        .collect();
    if out.is_empty() {
        return Err(Error::NoSuchRoot {
            n,
            field: k.to_string(),
        });
    }
    Ok(out)
}

fn matrix_4a(k: &Field, pr: &OctanomialParams, i: &Elem) -> Result<Mat4> {
    let (alpha, beta, big_a) = alpha_beta(k, &pr.a0, &pr.a2, &pr.a3)?;
    let h = half(k)?;
    let (a2, a3) = (&pr.a2, &pr.a3);
    let d = k.add(&big_a, &k.mul(&k.sub(i, &k.one()), &h));
    let e = k.sub(&big_a, &k.mul(&k.add(i, &k.one()), &h));
    let am1 = k.sub(&big_a, &k.one());
    let m2a = k.mul(&c(k, -2), &alpha);
    let m2b = k.mul(&c(k, -2), &beta);
    Ok(mat([
        [d.clone(), e.clone(), k.mul(a3, &am1), k.mul(a2, &am1)],
        [e, d, k.mul(a3, &am1), k.mul(a2, &am1)],
        [
            m2a.clone(),
            m2a.clone(),
            k.add(&k.one(), &k.mul(a3, &m2a)),
            k.mul(a2, &m2a),
        ],
        [
            m2b.clone(),
            m2b.clone(),
            k.mul(a3, &m2b),
            k.add(&k.one(), &k.mul(a2, &m2b)),
        ],
    ]))
}

fn matrix_8a(k: &Field, pr: &OctanomialParams, z8: &Elem, corrected: bool) -> Result<Mat4> {
    let (alpha, beta, big_a) = alpha_beta(k, &pr.a0, &pr.a2, &pr.a3)?;
    let (gamma, delta) = gamma_delta(k, &pr.a0, &pr.a2, &pr.a3)?;
    let (a2, a3) = (&pr.a2, &pr.a3);
    let i = k.mul(z8, z8);
    let h = half(k)?;
    let one_m_i = k.sub(&k.one(), &i);
    let one_p_i = k.add(&k.one(), &i);
    let dg = k
        .div(&delta, &gamma)
        .map_err(|_| Error::DegenerateParameters("γ = 0".into()))?;
    let mut s = k.neg(&k.mul(&k.add(&k.mul(&one_m_i, &big_a), &i), &h));
    if corrected {
        s = k.add(
            &s,
            &k.sub(&k.mul(a2, &beta), &k.mul(&k.mul(a3, &beta), &dg)),
        );
    }
    let t = k.add(
        &k.mul(&alpha, &one_m_i),
        &k.mul(&c(k, 2), &k.mul(&beta, &dg)),
    );
    let zh = k.mul(z8, &h);
    let sp = k.add(&s, &zh);
    let sm = k.sub(&s, &zh);
    let c2 = k.mul(a3, &k.add(&s, &h));
    let c3 = k.add(&k.mul(a2, &k.sub(&s, &h)), &k.mul(a3, &dg));
    let pb = k.neg(&k.mul(&one_p_i, &beta));
    Ok(mat([
        [sp.clone(), sm.clone(), c2.clone(), c3.clone()],
        [sm, sp, c2, c3],
        [
            t.clone(),
            t.clone(),
            k.sub(&k.mul(a3, &t), &k.one()),
            k.sub(&k.mul(a2, &t), &k.mul(&c(k, 2), &dg)),
        ],
        [
            pb.clone(),
            pb.clone(),
            k.mul(a3, &pb),
            k.add(&k.one(), &k.mul(a2, &pb)),
        ],
    ]))
}

fn matrix_12a(k: &Field, pr: &OctanomialParams, zeta: &Elem, i: &Elem) -> Result<Mat4> {
    let z2 = k.mul(zeta, zeta);
    let ap = k.mul(&k.sub(&k.one(), &z2), &pr.a3);
    let ap2 = k.mul(&ap, &ap);
    let ap3 = k.mul(&ap2, &ap);
    let den = k.mul(&c(k, 2), &k.sub(&k.one(), &z2));
    let one_p_i = k.add(&k.one(), i);
    let twelfth = k.inv(&c(k, 12))?;
    let sixth = k.inv(&c(k, 6))?;
    let r10 = k.mul(
        &k.add(&k.sub(&ap3, &c(k, 6)), &k.mul(&c(k, 6), i)),
        &twelfth,
    );
    let r12 = k.div(&k.mul(&ap, &one_p_i), &den)?;
    let r13 = k.div(&k.mul(&k.mul(&ap, &one_p_i), &k.add(&k.one(), &z2)), &den)?;
    Ok(mat([
        unit(k, 0),
        [r10, i.clone(), r12, r13],
        [k.neg(&k.mul(&ap2, &sixth)), k.zero(), k.zero(), k.neg(&z2)],
        [
            k.neg(&k.mul(&k.mul(zeta, &ap2), &sixth)),
            k.zero(),
            z2.clone(),
            z2,
        ],
    ]))
}

fn label_for(recipe: Recipe, wanted: &str) -> Result<&'static str> {
    let allowed: &[&'static str] = match recipe {
        Recipe::Char2SixE => &["6E", "4A", "4B"],
        Recipe::Char2ThreeC => &["3C", "5A", "12A"],
        Recipe::Char3EightA => &["8A", "12A"],
        _ => &[],
    };
    allowed
        .iter()
        .copied()
        .find(|l| *l == wanted)
        .ok_or_else(|| Error::Parse(format!("{wanted} is not carried by this form")))
}

/// The automorphism matrices of a row. Root choices (i, ζ8, μ, ζ3) that the
/// displayed matrices leave implicit are enumerated as branches.
pub fn stratum_automorphism(inst: &StratumInstance) -> Result<Vec<Candidate>> {
    use Recipe::*;
    let k = &inst.field;
    let pr = &inst.params;
    let residual = inst.residuals.iter().find(|(_, r)| !k.is_zero(r));
    if let Some((name, _)) = residual {
        return Err(Error::ConstraintViolation(format!(
            "{}: {name} does not vanish",
            inst.label
        )));
    }
    let label = inst.label;
    let one = |group: &str, matrix: Mat4| Candidate {
        label,
        group: group.into(),
        branch: String::new(),
        matrix,
        erratum: false,
    };
    let e = |n: i64| c(k, n);
    Ok(match inst.recipe {
        R2A => vec![one(
            "displayed",
            perm_matrix(k, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        )],
        R2B => vec![one(
            "displayed",
            perm_matrix(k, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
        )],
        R3A => {
            let z = root_of_unity(k, 3)?;
            let z2 = k.mul(&z, &z);
            vec![one(
                "displayed",
                mat([
                    unit(k, 0),
                    unit(k, 1),
                    [e(0), e(0), e(0), z2.clone()],
                    [e(0), e(0), k.neg(&z2), k.neg(&z2)],
                ]),
            )]
        }
        R3AChar3 => vec![one(
            "displayed",
            perm_matrix(
                k,
                [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, -1], [0, 0, 1, 0]],
            ),
        )],
        R3C => {
            let z = root_of_unity(k, 3)?;
            vec![one("displayed", Mat4::diag([z.clone(), z, e(1), e(1)], k))]
        }
        R3D => vec![one(
            "displayed",
            mat([
                unit(k, 1),
                [e(-1), e(-1), k.neg(&pr.a3), k.neg(&pr.a2)],
                unit(k, 2),
                unit(k, 3),
            ]),
        )],
        R4A => fourth_roots_of_unity(k)?
            .into_iter()
            .map(|i| {
                Ok(Candidate {
                    label,
                    group: "displayed".into(),
                    branch: format!("i = {}", k.format(&i)),
                    matrix: matrix_4a(k, pr, &i)?,
                    erratum: false,
                })
            })
            .collect::<Result<_>>()?,
        R4B => vec![one(
            "displayed",
            perm_matrix(k, [[0, 0, 0, 1], [0, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0]]),
        )],
        R4BAlt => {
            let x = inst.surface();
            let cc = &inst.aux["c"];
            let q0 = [k.add(&pr.a2, cc), k.neg(&k.add(&pr.a3, cc)), e(1), e(-1)];
            let g0 = eckardt_involution(&x, &q0)?;
            let on_line = [
                [e(0), e(1), e(0), e(0)],
                [e(1), e(0), e(0), e(0)],
                [e(1), e(-1), e(0), e(0)],
            ];
            let invs: Vec<Mat4> = on_line
                .iter()
                .map(|p| eckardt_involution(&x, p))
                .collect::<Result<_>>()?;
            let name = |p: &[Elem; 4]| {
                format!(
                    "({})",
                    p.iter().map(|v| k.format(v)).collect::<Vec<_>>().join(",")
                )
            };
            // two Eckardt points on the trihedral line and q0, in every order
            let mut out = Vec::new();
            for a in 0..3 {
                for b in 0..3 {
                    if a == b {
                        continue;
                    }
                    let orders = [
                        (
                            invs[a].mul(k, &invs[b]).mul(k, &g0),
                            format!("{}·{}·q0", name(&on_line[a]), name(&on_line[b])),
                        ),
                        (
                            invs[a].mul(k, &g0).mul(k, &invs[b]),
                            format!("{}·q0·{}", name(&on_line[a]), name(&on_line[b])),
                        ),
                    ];
                    for (matrix, branch) in orders {
                        out.push(Candidate {
                            label,
                            group: "product of three 2A involutions".into(),
                            branch,
                            matrix,
                            erratum: false,
                        });
                    }
                }
            }
            out
        }
        R5A => vec![one(
            "displayed",
            perm_matrix(
                k,
                [[-1, 0, 0, 1], [-1, -1, 2, 2], [0, 0, 0, 1], [-1, -1, 1, 1]],
            ),
        )],
        R5AAlt => {
            // x2 ↦ −(x2 + x3) carries the main 5A form to (0,0,0,2)
            let g = perm_matrix(
                k,
                [[-1, 0, 0, 1], [-1, -1, 2, 2], [0, 0, 0, 1], [-1, -1, 1, 1]],
            );
            let ch = perm_matrix(
                k,
                [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, -1], [0, 0, 0, 1]],
            );
            vec![one(
                "conjugated 5A matrix",
                ch.inv(k)?.mul(k, &g).mul(k, &ch),
            )]
        }
        R6E => vec![one(
            "displayed",
            mat([
                unit(k, 1),
                [e(-1), e(-1), k.neg(&pr.a2), k.neg(&pr.a2)],
                unit(k, 3),
                unit(k, 2),
            ]),
        )],
        R8A => {
            let mut out = Vec::new();
            for corrected in [false, true] {
                for z8 in primitive_roots(k, 8)? {
                    out.push(Candidate {
                        label,
                        group: if corrected {
                            "corrected S".into()
                        } else {
                            "displayed".into()
                        },
                        branch: format!("zeta8 = {}", k.format(&z8)),
                        matrix: matrix_8a(k, pr, &z8, corrected)?,
                        erratum: !corrected,
                    });
                }
            }
            out
        }
        R12A => {
            let z = root_of_unity(k, 3)?;
            fourth_roots_of_unity(k)?
                .into_iter()
                .map(|i| {
                    Ok(Candidate {
                        label,
                        group: "displayed".into(),
                        branch: format!("i = {}", k.format(&i)),
                        matrix: matrix_12a(k, pr, &z, &i)?,
                        erratum: false,
                    })
                })
                .collect::<Result<_>>()?
        }
        Char2SixE => {
            let target = label_for(Char2SixE, label)?;
            let a2 = &pr.a2;
            let mus =
                UniPoly::new(k, vec![k.one(), a2.clone(), k.zero(), k.one()]).distinct_roots()?;
            match target {
                "6E" => vec![one(
                    "displayed",
                    mat([
                        unit(k, 1),
                        [e(1), e(1), a2.clone(), a2.clone()],
                        unit(k, 3),
                        unit(k, 2),
                    ]),
                )],
                "4A" => {
                    let mut out = Vec::new();
                    for m1 in &mus {
                        for m2 in &mus {
                            let m22 = k.mul(m2, m2);
                            let m12 = k.mul(m1, m1);
                            let x = k.mul(&m22, m1);
                            let x1 = k.add(&x, &e(1));
                            out.push(Candidate {
                                label,
                                group: "displayed".into(),
                                branch: format!("mu1 = {}, mu2 = {}", k.format(m1), k.format(m2)),
                                matrix: mat([
                                    [e(1), e(0), m22.clone(), m22.clone()],
                                    [e(0), e(1), m12.clone(), m12],
                                    [m1.clone(), m2.clone(), x.clone(), x1.clone()],
                                    [m1.clone(), m2.clone(), x1, x],
                                ]),
                                erratum: false,
                            });
                        }
                    }
                    out
                }
                _ => mus
                    .iter()
                    .map(|m1| {
                        let m12 = k.mul(m1, m1);
                        let m13 = k.mul(&m12, m1);
                        let m13p = k.add(&m13, &e(1));
                        Candidate {
                            label,
                            group: "displayed".into(),
                            branch: format!("mu1 = {}", k.format(m1)),
                            matrix: mat([
                                [e(1), e(0), m12.clone(), m12],
                                [e(1), e(1), a2.clone(), a2.clone()],
                                [m1.clone(), m1.clone(), m13p.clone(), m13.clone()],
                                [m1.clone(), m1.clone(), m13, m13p],
                            ]),
                            erratum: false,
                        }
                    })
                    .collect(),
            }
        }
        Char2ThreeC => {
            let target = label_for(Char2ThreeC, label)?;
            let zetas = primitive_roots(k, 3)?;
            match target {
                "5A" => vec![one(
                    "displayed",
                    perm_matrix(k, [[1, 0, 0, 1], [1, 1, 0, 0], [0, 0, 0, 1], [1, 1, 1, 1]]),
                )],
                "3C" => zetas
                    .iter()
                    .map(|z| Candidate {
                        label,
                        group: "displayed".into(),
                        branch: format!("zeta3 = {}", k.format(z)),
                        matrix: Mat4::diag([z.clone(), z.clone(), e(1), e(1)], k),
                        erratum: false,
                    })
                    .collect(),
                _ => zetas
                    .iter()
                    .map(|z| {
                        let z2 = k.mul(z, z);
                        Candidate {
                            label,
                            group: "displayed".into(),
                            branch: format!("zeta3 = {}", k.format(z)),
                            matrix: mat([
                                [z2.clone(), z2.clone(), e(0), z.clone()],
                                [z2.clone(), e(0), e(0), e(1)],
                                [e(1), z2, e(1), z.clone()],
                                unit(k, 3),
                            ]),
                            erratum: false,
                        }
                    })
                    .collect(),
            }
        }
        Char3EightA => {
            let target = label_for(Char3EightA, label)?;
            let i = pr.a2.clone();
            let pi = k.add(&e(1), &i);
            let mi = k.sub(&e(1), &i);
            match target {
                "8A" => square_roots(k, &i)?
                    .into_iter()
                    .map(|z8| Candidate {
                        label,
                        group: "displayed".into(),
                        branch: format!("zeta8 = {}", k.format(&z8)),
                        matrix: mat([
                            [k.sub(&i, &z8), k.add(&z8, &i), pi.clone(), k.neg(&pi)],
                            [k.add(&z8, &i), k.sub(&i, &z8), pi.clone(), k.neg(&pi)],
                            [k.neg(&pi), k.neg(&pi), pi.clone(), k.neg(&i)],
                            [k.neg(&pi), k.neg(&pi), k.sub(&i, &e(1)), k.neg(&pi)],
                        ]),
                        erratum: false,
                    })
                    .collect(),
                _ => vec![one(
                    "displayed",
                    mat([
                        [mi.clone(), pi.clone(), i.clone(), k.neg(&i)],
                        [pi.clone(), mi.clone(), i.clone(), k.neg(&i)],
                        [e(1), e(1), k.neg(&pi), k.sub(&i, &e(1))],
                        [e(1), e(1), mi, i],
                    ]),
                )],
            }
        }
    })
}
