use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::strata::{label_order, Candidate, FormVariant, StratumInstance};
use super::stratum_automorphism;
use crate::e6::{label_of, WeylElement};
use crate::error::{Error, Result};
use crate::fields::{Elem, Embedding, Field};
use crate::poly::{scalar_multiple, HomForm, Mat4};
use crate::surface::{
    coordinate_lines, eckardt_points, induced_permutation, is_eckardt_point, lines_from_seed,
    marking_from, orbit_partition, trihedral_lines, tritangent_planes, CubicSurface, MarkedLines,
    OrbitTag, ProjLine, ProjPoint,
};

/// Extension degrees tried, in order, when looking for a field where all 27
/// lines are defined.
pub const SPLIT_DEGREES: [u32; 10] = [1, 2, 3, 4, 5, 6, 8, 9, 10, 12];

/// A surface base-changed to a field over which its lines split.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub degree: u32,
    pub field: Field,
    pub embedding: Embedding,
    pub surface: CubicSurface,
    pub marking: MarkedLines,
}

impl Splitting {
    pub fn embed_point(&self, p: &[Elem]) -> Result<[Elem; 4]> {
        Ok([
            self.embedding.apply(&p[0])?,
            self.embedding.apply(&p[1])?,
            self.embedding.apply(&p[2])?,
            self.embedding.apply(&p[3])?,
        ])
    }

    pub fn embed_matrix(&self, g: &Mat4) -> Result<Mat4> {
        Ok(Mat4([
            self.embed_point(&g.0[0])?,
            self.embed_point(&g.0[1])?,
            self.embed_point(&g.0[2])?,
            self.embed_point(&g.0[3])?,
        ]))
    }
}

pub(crate) fn embed_form(e: &Embedding, f: &HomForm) -> Result<HomForm> {
    let terms: Vec<_> = f
        .terms()
        .map(|(m, c)| Ok((*m, e.apply(c)?)))
        .collect::<Result<_>>()?;
    HomForm::from_terms(e.target(), f.degree(), terms)
}

/// Smallest listed extension over which the 27 lines are defined. Lines are
/// grown from a coordinate line on the surface.
pub fn find_splitting(x: &CubicSurface) -> Result<Splitting> {
    let k = x.field();
    if !k.is_finite() {
        return Err(Error::UnsupportedField(
            "splitting search needs a finite field".into(),
        ));
    }
    let p = k.characteristic();
    let mut found = 0;
    for m in SPLIT_DEGREES {
        let big = if m == 1 {
            k.clone()
        } else {
            match Field::finite(p, k.degree() * m) {
                Ok(f) => f,
                Err(_) => break,
            }
        };
        let embedding = big.embedding_from(k)?;
        let surface = CubicSurface::new(embed_form(&embedding, x.form())?)?;
        let Some(seed) = coordinate_lines(&big)
            .into_iter()
            .find(|l| surface.contains_line(l))
        else {
            return Err(Error::UnsupportedField(
                "no coordinate line on the surface to start from".into(),
            ));
        };
        let lines = lines_from_seed(&surface, &seed)?;
        found = found.max(lines.len());
        if lines.len() == 27 {
            let marking = marking_from(&big, &lines)?;
            return Ok(Splitting {
                degree: m,
                field: big,
                embedding,
                surface,
                marking,
            });
        }
    }
    Err(Error::NotSplit { found })
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
    /// Reported but excluded from the verdict.
    pub informational: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumReport {
    pub label: String,
    pub variant: FormVariant,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub field: String,
    pub params: [String; 4],
    pub aux: BTreeMap<String, String>,
    #[serde(rename = "constraints_residuals")]
    pub constraint_residuals: BTreeMap<String, String>,
    pub automorphism: Option<Value>,
    pub recipe: Option<String>,
    pub lambda: Option<String>,
    pub order: Option<u32>,
    pub weyl_class: Option<String>,
    pub cycle_type: Option<String>,
    pub orbit_tags: BTreeMap<String, usize>,
    pub split_field: Option<String>,
    pub claims: Vec<Claim>,
}

impl StratumReport {
    pub fn passed(&self) -> bool {
        self.claims
            .iter()
            .filter(|c| !c.informational)
            .all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["pass"] = json!(self.passed());
        v
    }
}

struct Claims(Vec<Claim>);

impl Claims {
    fn push(
        &mut self,
        name: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
        pass: bool,
    ) {
        self.0.push(Claim {
            name: name.into(),
            expected: expected.into(),
            got: got.into(),
            pass,
            informational: false,
        });
    }

    fn info(
        &mut self,
        name: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
        pass: bool,
    ) {
        self.0.push(Claim {
            name: name.into(),
            expected: expected.into(),
            got: got.into(),
            pass,
            informational: true,
        });
    }

    fn check(&mut self, name: &str, r: Result<bool>) {
        match r {
            Ok(b) => self.push(name, "true", b.to_string(), b),
            Err(e) => self.push(name, "true", format!("error: {e}"), false),
        }
    }
}

fn class_name(w: &WeylElement) -> String {
    label_of(w).unwrap_or("?").to_string()
}

fn cycle_string(w: &WeylElement) -> String {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for c in w.cycle_type() {
        *counts.entry(c).or_default() += 1;
    }
    counts
        .iter()
        .map(|(len, n)| format!("{len}^{n}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn tag_name(t: OrbitTag) -> &'static str {
    match t {
        OrbitTag::Invariant => "invariant",
        OrbitTag::TritangentTrio => "tritangent-trio",
        OrbitTag::SkewTriple => "skew-triple",
        OrbitTag::Pair => "pair",
        OrbitTag::Other => "other",
    }
}

fn preserves(x: &CubicSurface, g: &Mat4) -> Option<Elem> {
    let k = x.field();
    if k.is_zero(&g.det(k)) {
        return None;
    }
    scalar_multiple(&x.form().substitute_unchecked(g), x.form())
}

fn pt(k: &Field, v: [i64; 4]) -> [Elem; 4] {
    v.map(|c| k.from_i64(c))
}

fn line_x2x3(k: &Field) -> Result<ProjLine> {
    ProjLine::through(k, &pt(k, [1, 0, 0, 0]), &pt(k, [0, 1, 0, 0]))
}

fn fmt_pt(k: &Field, p: &[Elem]) -> String {
    format!(
        "({})",
        p.iter().map(|c| k.format(c)).collect::<Vec<_>>().join(",")
    )
}

/// Checks a stratum instance: smoothness, constraints, the automorphism
/// matrices (every root branch), the Weyl class of the induced permutation
/// on a split extension, power maps, orbit patterns and the special points
/// and lines attached to the row.
pub fn verify_stratum(inst: &StratumInstance) -> StratumReport {
    let k = &inst.field;
    let x = inst.surface();
    let mut claims = Claims(Vec::new());
    let label = inst.label;
    let want_order = label_order(label);

    claims.check("surface is smooth", x.is_smooth());
    let residuals: BTreeMap<String, String> = inst
        .residuals
        .iter()
        .map(|(n, r)| (n.clone(), k.format(r)))
        .collect();
    claims.push(
        "constraints vanish",
        "all zero",
        if inst.satisfied() {
            "all zero".to_string()
        } else {
            format!("{residuals:?}")
        },
        inst.satisfied(),
    );

    let mut report = StratumReport {
        label: label.to_string(),
        variant: inst.variant,
        characteristic: k.characteristic(),
        field: k.to_string(),
        params: inst.params.format(k),
        aux: inst
            .aux
            .iter()
            .map(|(n, v)| (n.clone(), k.format(v)))
            .collect(),
        constraint_residuals: residuals,
        automorphism: None,
        recipe: None,
        lambda: None,
        order: None,
        weyl_class: None,
        cycle_type: None,
        orbit_tags: BTreeMap::new(),
        split_field: None,
        claims: Vec::new(),
    };

    let candidates = match stratum_automorphism(inst) {
        Ok(c) => c,
        Err(e) => {
            claims.push(
                "automorphism matrices",
                "built",
                format!("error: {e}"),
                false,
            );
            report.claims = claims.0;
            return report;
        }
    };

    let mut groups: BTreeMap<(bool, String), Vec<(&Candidate, Option<Elem>, Option<u32>)>> =
        BTreeMap::new();
    for cand in &candidates {
        let lambda = preserves(&x, &cand.matrix);
        let order = lambda
            .as_ref()
            .and_then(|_| cand.matrix.projective_order(k, 24));
        groups
            .entry((cand.erratum, cand.group.clone()))
            .or_default()
            .push((cand, lambda, order));
    }
    let mut chosen: Option<(&Candidate, Elem)> = None;
    for ((erratum, group), members) in &groups {
        let good: Vec<&str> = members
            .iter()
            .filter(|(_, l, o)| l.is_some() && *o == Some(want_order))
            .map(|(c, _, _)| {
                if c.branch.is_empty() {
                    "unique"
                } else {
                    c.branch.as_str()
                }
            })
            .collect();
        let got = if good.is_empty() {
            "fails for every branch".to_string()
        } else {
            format!("holds for {}", good.join("; "))
        };
        let name = format!("{group} matrix preserves f with order {want_order}");
        if *erratum {
            claims.info(
                name,
                "fails as printed (typo in the S entry)",
                got,
                good.is_empty(),
            );
        } else {
            claims.push(name, "some branch", got, !good.is_empty());
            if chosen.is_none() {
                if let Some((c, l, _)) = members
                    .iter()
                    .find(|(_, l, o)| l.is_some() && *o == Some(want_order))
                {
                    chosen = Some((c, l.clone().unwrap()));
                }
            }
        }
    }

    let Some((cand, lambda)) = chosen else {
        if groups.is_empty() {
            claims.push("automorphism matrices", "at least one", "none", false);
        }
        report.claims = claims.0;
        return report;
    };
    let g = cand.matrix.clone();
    report.automorphism = Some(g.to_json(k));
    report.recipe = Some(if cand.branch.is_empty() {
        cand.group.clone()
    } else {
        format!("{} ({})", cand.group, cand.branch)
    });
    report.lambda = Some(k.format(&lambda));
    report.order = g.projective_order(k, 24);

    let split = match find_splitting(&x) {
        Ok(s) => s,
        Err(e) => {
            claims.push(
                "27 lines over a small extension",
                "split",
                format!("error: {e}"),
                false,
            );
            report.claims = claims.0;
            return report;
        }
    };
    report.split_field = Some(split.field.to_string());
    let big = &split.field;
    let gb = match split.embed_matrix(&g) {
        Ok(m) => m,
        Err(e) => {
            claims.push("embed automorphism", "ok", format!("error: {e}"), false);
            report.claims = claims.0;
            return report;
        }
    };
    let w = match induced_permutation(&split.surface, &split.marking, &gb) {
        Ok(w) => w,
        Err(e) => {
            claims.push(
                "induced permutation",
                "in W(E6)",
                format!("error: {e}"),
                false,
            );
            report.claims = claims.0;
            return report;
        }
    };
    let cls = class_name(&w);
    claims.push("Weyl class", label, cls.clone(), cls == label);
    report.weyl_class = Some(cls);
    report.cycle_type = Some(cycle_string(&w));
    let orbits = orbit_partition(&w);
    for o in &orbits {
        *report
            .orbit_tags
            .entry(tag_name(o.tag).to_string())
            .or_default() += 1;
    }
    let count = |t: OrbitTag| orbits.iter().filter(|o| o.tag == t).count();

    // power maps through the matrix, not the permutation
    let powers: &[(u32, &str)] = match label {
        "4A" => &[(2, "2A")],
        "4B" => &[(2, "2B")],
        "6E" => &[(2, "3D"), (3, "2A")],
        "8A" => &[(2, "4A")],
        "12A" => &[(4, "3A"), (3, "4A")],
        _ => &[],
    };
    for &(e, target) in powers {
        let (got, agrees) =
            match induced_permutation(&split.surface, &split.marking, &gb.pow(big, e)) {
                Ok(v) => (class_name(&v), v == w.pow(e)),
                Err(err) => (format!("error: {err}"), false),
            };
        claims.push(
            format!("g^{e} class"),
            target,
            got.clone(),
            got == target && agrees,
        );
    }
    if label == "12A" {
        let o = gb.pow(big, 3).projective_order(big, 24);
        claims.push("g^3 order", "4", format!("{o:?}"), o == Some(4));
    }

    match label {
        "2A" => claims.push(
            "cycle type",
            "1^3 2^12",
            cycle_string(&w),
            cycle_string(&w) == "1^3 2^12",
        ),
        "2B" => claims.push(
            "cycle type",
            "1^7 2^10",
            cycle_string(&w),
            cycle_string(&w) == "1^7 2^10",
        ),
        "3A" => {
            let n = count(OrbitTag::TritangentTrio);
            claims.push("tritangent-trio orbits", "9", n.to_string(), n == 9);
        }
        "3C" => {
            let (a, b) = (count(OrbitTag::Invariant), count(OrbitTag::SkewTriple));
            claims.push(
                "invariant lines, skew-triple orbits",
                "9, 6",
                format!("{a}, {b}"),
                a == 9 && b == 6,
            );
        }
        "3D" => {
            let (a, b) = (count(OrbitTag::TritangentTrio), count(OrbitTag::SkewTriple));
            claims.push(
                "tritangent-trio, skew-triple orbits",
                "3, 6",
                format!("{a}, {b}"),
                a == 3 && b == 6,
            );
        }
        "5A" => claims.push(
            "cycle type",
            "1^2 5^5",
            cycle_string(&w),
            cycle_string(&w) == "1^2 5^5",
        ),
        _ => {}
    }

    geometry_claims(inst, &x, &g, &split, &mut claims);
    report.claims = claims.0;
    report
}

fn eckardt_claim(claims: &mut Claims, x: &CubicSurface, split: &Splitting, p: &[Elem; 4]) {
    let k = x.field();
    let name = format!("{} is an Eckardt point", fmt_pt(k, p));
    // second fundamental form, and three concurrent labeled lines upstairs
    let direct = is_eckardt_point(x, p);
    let upstairs = split.embed_point(p).and_then(|q| {
        let q = ProjPoint::new(&split.field, &q)?;
        Ok(eckardt_points(&split.marking).iter().any(|e| e.point == q))
    });
    match (direct, upstairs) {
        (Ok(a), Ok(b)) => claims.push(name, "true (both routes)", format!("{a}, {b}"), a && b),
        (a, b) => claims.push(name, "true (both routes)", format!("{a:?}, {b:?}"), false),
    }
}

fn trihedral_claim(claims: &mut Claims, x: &CubicSurface, split: &Splitting, pts: &[[Elem; 4]]) {
    let k = x.field();
    let big = &split.field;
    let res = (|| -> Result<bool> {
        let l = line_x2x3(big)?;
        let on = pts.iter().all(|p| k.is_zero(&p[2]) && k.is_zero(&p[3]));
        let tri = trihedral_lines(&split.surface, &split.marking)?;
        Ok(on && tri.iter().any(|t| t.line == l && t.eckardt.len() == 3))
    })();
    claims.check(
        "x2 = x3 = 0 is a trihedral line with three Eckardt points",
        res,
    );
}

fn tritangent_plane_claim(claims: &mut Claims, split: &Splitting, plane: &[Elem; 4], name: &str) {
    let res = (|| -> Result<bool> {
        let h = split.embed_point(plane)?;
        let big = &split.field;
        let planes = tritangent_planes(&split.marking)?;
        Ok(planes.iter().any(|p| {
            let m = crate::linalg::Matrix::from_rows(vec![p.coeffs.to_vec(), h.to_vec()]);
            crate::linalg::rank(big, &m) == 1
        }))
    })();
    claims.check(name, res);
}

/// The g-invariant tritangent plane is unique and carries six Eckardt points.
fn invariant_tritangent_claim(claims: &mut Claims, g: &Mat4, split: &Splitting) {
    let big = &split.field;
    let res = split.embed_matrix(g).and_then(|gb| {
        let mut eck: Vec<ProjPoint> = eckardt_points(&split.marking)
            .into_iter()
            .map(|e| e.point)
            .collect();
        eck.sort();
        eck.dedup();
        Ok(tritangent_planes(&split.marking)?
            .iter()
            .filter(|p| invariant_plane(big, &gb, &p.coeffs))
            .map(|p| {
                eck.iter()
                    .filter(|e| big.is_zero(&crate::surface::dot(big, &p.coeffs, &e.coords)))
                    .count()
            })
            .collect::<Vec<_>>())
    });
    match res {
        Ok(n) => claims.push(
            "Eckardt points on each g-invariant tritangent plane",
            "[6]",
            format!("{n:?}"),
            n == vec![6],
        ),
        Err(e) => claims.push(
            "Eckardt points on each g-invariant tritangent plane",
            "[6]",
            format!("error: {e}"),
            false,
        ),
    }
}

fn invariant_plane(k: &Field, g: &Mat4, h: &[Elem; 4]) -> bool {
    // plane h·x = 0 is mapped to itself iff hᵀg ∝ h
    let hg: Vec<Elem> = (0..4)
        .map(|j| (0..4).fold(k.zero(), |acc, i| k.add(&acc, &k.mul(&h[i], &g.0[i][j]))))
        .collect();
    let m = crate::linalg::Matrix::from_rows(vec![hg, h.to_vec()]);
    crate::linalg::rank(k, &m) == 1
}

fn geometry_claims(
    inst: &StratumInstance,
    x: &CubicSurface,
    g: &Mat4,
    split: &Splitting,
    claims: &mut Claims,
) {
    let k = x.field();
    let pr = &inst.params;
    let label = inst.label;
    let char2 = k.characteristic() == 2;
    match (label, inst.variant) {
        ("2A", _) => eckardt_claim(claims, x, split, &pt(k, [1, -1, 0, 0])),
        ("2B", _) => {
            for p in [pt(k, [1, -1, 0, 0]), pt(k, [0, 0, 1, -1])] {
                eckardt_claim(claims, x, split, &p);
            }
            let h1 = [pr.a0.clone(), pr.a0.clone(), k.one(), k.one()];
            let h2 = [k.one(), k.one(), pr.a2.clone(), pr.a2.clone()];
            let fixed = (|| -> Result<bool> {
                let basis = crate::linalg::kernel(
                    k,
                    &crate::linalg::Matrix::from_rows(vec![h1.to_vec(), h2.to_vec()]),
                );
                if basis.len() != 2 {
                    return Ok(false);
                }
                Ok(basis.iter().all(|v| {
                    let gv = g.apply(k, v);
                    let m = crate::linalg::Matrix::from_rows(vec![gv.to_vec(), v.clone()]);
                    crate::linalg::rank(k, &m) == 1
                }) && {
                    let gs = g.apply(
                        k,
                        &(0..4)
                            .map(|i| k.add(&basis[0][i], &basis[1][i]))
                            .collect::<Vec<_>>(),
                    );
                    let s: Vec<Elem> = (0..4).map(|i| k.add(&basis[0][i], &basis[1][i])).collect();
                    crate::linalg::rank(k, &crate::linalg::Matrix::from_rows(vec![gs.to_vec(), s]))
                        == 1
                })
            })();
            claims.check(
                "a0x0 + a0x1 + x2 + x3 = x0 + x1 + a2x2 + a2x3 = 0 is pointwise fixed",
                fixed,
            );
        }
        ("3D", _) => {
            let pts = [
                pt(k, [0, 1, 0, 0]),
                pt(k, [1, 0, 0, 0]),
                pt(k, [1, -1, 0, 0]),
            ];
            for p in &pts {
                eckardt_claim(claims, x, split, p);
            }
            trihedral_claim(claims, x, split, &pts);
            let l = line_x2x3(k).and_then(|l| Ok(l.image(k, g)? == l));
            claims.check("g maps x2 = x3 = 0 to itself", l);
        }
        ("6E", _) if !char2 => {
            let pts = [
                pt(k, [0, 1, 0, 0]),
                pt(k, [1, 0, 0, 0]),
                pt(k, [1, -1, 0, 0]),
            ];
            for p in pts.iter().chain([pt(k, [0, 0, 1, -1])].iter()) {
                eckardt_claim(claims, x, split, p);
            }
            trihedral_claim(claims, x, split, &pts);
            let q = pt(k, [0, 0, 1, -1]);
            let tangent: Vec<Elem> = x.partials().iter().map(|d| d.eval(&q)).collect();
            let inside = [pt(k, [1, 0, 0, 0]), pt(k, [0, 1, 0, 0])]
                .iter()
                .all(|p| k.is_zero(&crate::surface::dot(k, &tangent, p)));
            claims.push(
                "tangent plane at (0,0,1,-1) contains x2 = x3 = 0",
                "true",
                inside.to_string(),
                inside,
            );
        }
        ("4B", FormVariant::Main) if !char2 => {
            let h = pt(k, [1, 1, 1, 1]);
            let inv = invariant_plane(k, g, &h);
            claims.push(
                "x0 + x1 + x2 + x3 = 0 is invariant",
                "true",
                inv.to_string(),
                inv,
            );
            tritangent_plane_claim(
                claims,
                split,
                &h,
                "x0 + x1 + x2 + x3 = 0 is a tritangent plane",
            );
            invariant_tritangent_claim(claims, g, split);
        }
        ("4B", FormVariant::Alternative) => {
            let c = &inst.aux["c"];
            let q0 = [
                k.add(&pr.a2, c),
                k.neg(&k.add(&pr.a3, c)),
                k.one(),
                k.neg(&k.one()),
            ];
            eckardt_claim(claims, x, split, &q0);
            let pts = [
                pt(k, [0, 1, 0, 0]),
                pt(k, [1, 0, 0, 0]),
                pt(k, [1, -1, 0, 0]),
            ];
            for p in &pts {
                eckardt_claim(claims, x, split, p);
            }
            trihedral_claim(claims, x, split, &pts);
            let h = [k.one(), k.one(), k.add(&pr.a3, c), k.add(&pr.a2, c)];
            tritangent_plane_claim(
                claims,
                split,
                &h,
                "x0 + x1 + (a3+c)x2 + (a2+c)x3 = 0 is a tritangent plane",
            );
            invariant_tritangent_claim(claims, g, split);
        }
        _ => {}
    }
}
