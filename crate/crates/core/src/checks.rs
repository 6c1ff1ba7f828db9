//! The acceptance checks, runnable from the command line.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::e6::{
    class_with_label, double_sixes, exceptionals, roots, sixers, triad_pairs, tritangent_trios,
    twisted_cubic_check, weyl_group, ClassSignature, WeylElement,
};
use crate::error::Result;
use crate::fields::{root_of_unity, Field};
use crate::normal_form::{
    enumerate_octanomial_params, octanomial_form, octanomial_reduce, specialization_check,
    stratum_params, verify_stratum, FormVariant, OctanomialParams, SpecializationGraph,
};
use crate::poly::HomForm;
use crate::surface::{
    automorphism_group, blowup_marking, eckardt_points, from_six_points, lines_on, marking_from,
    orbit_partition, random_six_points, tritangent_planes, CubicSurface, MarkedLines, OrbitTag,
};

/// Which characteristic classes to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharFilter {
    /// Every characteristic class (2, 3, 5 and generic).
    All,
    Prime(u64),
}

impl CharFilter {
    pub fn parse(s: &str) -> Option<CharFilter> {
        match s {
            "0-equivalent" | "all" => Some(CharFilter::All),
            _ => s.parse().ok().map(CharFilter::Prime),
        }
    }

    /// Items tagged with `None` are characteristic-free; generic items run for p ∉ {2, 3, 5}.
    fn wants(&self, tag: Tag) -> bool {
        match (self, tag) {
            (CharFilter::All, _) | (_, Tag::Free) => true,
            (CharFilter::Prime(p), Tag::Char(q)) => *p == q,
            (CharFilter::Prime(p), Tag::Generic) => ![2, 3, 5].contains(p),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tag {
    Free,
    Generic,
    Char(u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub criterion: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

struct Runner {
    filter: CharFilter,
    items: Vec<CheckItem>,
}

impl Runner {
    fn run(
        &mut self,
        criterion: u8,
        name: &str,
        tag: Tag,
        f: impl FnOnce() -> Result<(bool, String)>,
    ) {
        if !self.filter.wants(tag) {
            return;
        }
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        self.items.push(CheckItem {
            criterion,
            name: name.to_string(),
            pass,
            detail,
        });
    }
}

fn count(got: usize, want: usize) -> (bool, String) {
    (got == want, format!("{got} (expected {want})"))
}

fn fermat(k: &Field) -> Result<CubicSurface> {
    CubicSurface::new(HomForm::from_i64_terms(
        k,
        3,
        &[
            ([3, 0, 0, 0], 1),
            ([0, 3, 0, 0], 1),
            ([0, 0, 3, 0], 1),
            ([0, 0, 0, 3], 1),
        ],
    ))
}

fn marked(x: &CubicSurface) -> Result<MarkedLines> {
    marking_from(x.field(), &lines_on(x)?)
}

fn class_rep(label: &str) -> Option<WeylElement> {
    let g = weyl_group();
    class_with_label(label).map(|c| g.element(g.classes()[c].rep as usize))
}

fn tag_counts(w: &WeylElement) -> (usize, usize, usize) {
    let o = orbit_partition(w);
    let n = |t: OrbitTag| o.iter().filter(|x| x.tag == t).count();
    (
        n(OrbitTag::Invariant),
        n(OrbitTag::TritangentTrio),
        n(OrbitTag::SkewTriple),
    )
}

fn verify_row(
    label: &str,
    variant: FormVariant,
    k: &Field,
    free: &[i64],
) -> Result<(bool, String)> {
    let free: Vec<_> = free.iter().map(|&v| k.from_i64(v)).collect();
    let inst = stratum_params(label, variant, k, &free, 0)?;
    let r = verify_stratum(&inst);
    let failed: Vec<&str> = r
        .claims
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    let detail = format!(
        "{k}: params {:?}, class {}",
        r.params,
        r.weyl_class.as_deref().unwrap_or("?")
    );
    Ok((
        r.passed(),
        if failed.is_empty() {
            detail
        } else {
            format!("{detail}; failed {failed:?}")
        },
    ))
}

fn six_point_surface(sub: &Field, k: &Field, seed: u64) -> Result<(CubicSurface, MarkedLines)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = k.embedding_from(sub)?;
    let pts = random_six_points(sub, &mut rng)?
        .iter()
        .map(|p| p.iter().map(|c| e.apply(c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let x = from_six_points(k, &pts)?;
    let m = blowup_marking(&x, &pts)?;
    Ok((x, m))
}

/// Runs the acceptance checks selected by `filter`.
pub fn run_checks(filter: CharFilter) -> Vec<CheckItem> {
    let mut r = Runner {
        filter,
        items: Vec::new(),
    };

    r.run(1, "lattice enumerations", Tag::Free, || {
        let got = [
            roots().len(),
            exceptionals().len(),
            sixers().len(),
            double_sixes().len(),
            tritangent_trios().len(),
            triad_pairs().len(),
        ];
        let want = [72, 27, 72, 36, 45, 120];
        Ok((got == want, format!("{got:?}")))
    });

    r.run(2, "Weyl group order and classes", Tag::Free, || {
        let g = weyl_group();
        let sigs: BTreeSet<ClassSignature> = g
            .classes()
            .iter()
            .map(|c| ClassSignature::raw(&g.element(c.rep as usize)))
            .collect();
        let ok = g.order() == 51840 && g.classes().len() == 25 && sigs.len() == 25;
        Ok((
            ok,
            format!(
                "order {}, {} classes, {} signatures",
                g.order(),
                g.classes().len(),
                sigs.len()
            ),
        ))
    });
    r.run(2, "anchored orbit patterns", Tag::Free, || {
        let cyc = |l: &str| class_rep(l).map(|w| ClassSignature::raw(&w).cycle_type_string());
        let tags = |l: &str| class_rep(l).map(|w| tag_counts(&w));
        let ok = cyc("2A").as_deref() == Some("1^3 2^12")
            && cyc("2B").as_deref() == Some("1^7 2^10")
            && cyc("5A").as_deref() == Some("1^2 5^5")
            && tags("3A") == Some((0, 9, 0))
            && tags("3C") == Some((9, 0, 6))
            && tags("3D") == Some((0, 3, 6));
        Ok((
            ok,
            format!(
                "2A {:?}, 3C {:?}, 3D {:?}",
                cyc("2A"),
                tags("3C"),
                tags("3D")
            ),
        ))
    });

    r.run(3, "Fermat over F13", Tag::Generic, || {
        let k = Field::prime(13)?;
        let x = fermat(&k)?;
        let m = marked(&x)?;
        let got = [
            m.lines.len(),
            tritangent_planes(&m)?.len(),
            eckardt_points(&m).len(),
            automorphism_group(&x, &m)?.len(),
        ];
        Ok((
            got == [27, 45, 18, 648],
            format!("lines, planes, Eckardt, |Aut| = {got:?}"),
        ))
    });
    r.run(3, "Fermat over F4", Tag::Char(2), || {
        let k = Field::finite(2, 2)?;
        let x = fermat(&k)?;
        let m = marked(&x)?;
        let got = [eckardt_points(&m).len(), automorphism_group(&x, &m)?.len()];
        Ok((got == [45, 25920], format!("Eckardt, |Aut| = {got:?}")))
    });

    r.run(4, "six-point reduction round trips", Tag::Generic, || {
        let pairs = triad_pairs();
        let mut done = 0;
        for p in [11, 13, 17] {
            let k = Field::prime(p)?;
            for seed in 0..7 {
                let (x, m) = six_point_surface(&k, &k, seed)?;
                let red = (0..pairs.len() * 72)
                    .find_map(|i| octanomial_reduce(&x, &m, &pairs[i / 72], i % 72, 0).ok());
                let Some(red) = red else { continue };
                let tinv = red.transform.inv(&k)?;
                let lhs = x.form().substitute_unchecked(&tinv);
                if lhs == octanomial_form(&k, &red.params).scale(&red.scalar) {
                    done += 1;
                }
            }
        }
        Ok((done >= 20, format!("{done} of 21 identities exact")))
    });

    r.run(5, "parameter count, generic surface", Tag::Generic, || {
        let (x, m) = six_point_surface(&Field::prime(7)?, &Field::finite(7, 3)?, 4)?;
        let n = enumerate_octanomial_params(&x, &m)?.len() * automorphism_group(&x, &m)?.len();
        Ok(count(n, 25920))
    });
    r.run(5, "parameter count, char 3", Tag::Char(3), || {
        let k = Field::finite(3, 3)?;
        let (x, m) = six_point_surface(&k, &k, 2)?;
        let n = enumerate_octanomial_params(&x, &m)?.len() * automorphism_group(&x, &m)?.len();
        Ok(count(n, 8640))
    });
    r.run(5, "Fermat parameters over F61", Tag::Generic, || {
        let k = Field::prime(61)?;
        let x = fermat(&k)?;
        let params = enumerate_octanomial_params(&x, &marked(&x)?)?;
        let z = root_of_unity(&k, 3)?;
        let z2 = k.mul(&z, &z);
        let m2 = k.from_i64(-2);
        let two = k.from_i64(2);
        let listed = [
            OctanomialParams::from_i64(&k, [0, -2, 0, -2]),
            OctanomialParams::from_i64(&k, [2, 2, 2, 2]),
            OctanomialParams::new([k.zero(), k.mul(&m2, &z), k.zero(), k.mul(&m2, &z2)]),
            OctanomialParams::new([
                k.mul(&two, &z),
                k.mul(&two, &z),
                k.mul(&two, &z2),
                k.mul(&two, &z2),
            ]),
        ];
        let ok = params.len() == 40 && listed.iter().all(|p| params.contains(p));
        Ok((ok, format!("{} parameters", params.len())))
    });
    r.run(5, "Fermat parameters over F4", Tag::Char(2), || {
        let k = Field::finite(2, 2)?;
        let x = fermat(&k)?;
        let params = enumerate_octanomial_params(&x, &marked(&x)?)?;
        let zero = OctanomialParams::from_i64(&k, [0, 0, 0, 0]);
        Ok((
            params.len() == 1 && params.contains(&zero),
            format!("{} parameters", params.len()),
        ))
    });

    let f73 = || Field::prime(73);
    for (label, variant, free) in [
        ("2A", FormVariant::Main, &[5, 9, 20][..]),
        ("2B", FormVariant::Main, &[5, 9]),
        ("3A", FormVariant::Main, &[4]),
        ("3C", FormVariant::Main, &[]),
        ("3D", FormVariant::Main, &[3, 11]),
        ("4B", FormVariant::Main, &[6]),
        ("4B", FormVariant::Alternative, &[43]),
        ("5A", FormVariant::Main, &[]),
        ("5A", FormVariant::Alternative, &[]),
        ("6E", FormVariant::Main, &[10]),
    ] {
        let name = match variant {
            FormVariant::Main => format!("{label} over F73"),
            FormVariant::Alternative => format!("{label}' over F73"),
        };
        r.run(6, &name, Tag::Generic, || {
            verify_row(label, variant, &f73()?, free)
        });
    }
    r.run(6, "3A over F9", Tag::Char(3), || {
        let k = Field::finite(3, 2)?;
        let a3 = k
            .generator()
            .ok_or_else(|| crate::Error::UnsupportedField("no generator".into()))?;
        let inst = stratum_params("3A", FormVariant::Main, &k, &[a3], 0)?;
        Ok((verify_stratum(&inst).passed(), format!("{k}")))
    });

    r.run(7, "4A over F73", Tag::Generic, || {
        verify_row("4A", FormVariant::Main, &f73()?, &[29])
    });
    r.run(7, "8A over F73", Tag::Generic, || {
        verify_row("8A", FormVariant::Main, &f73()?, &[])
    });
    r.run(7, "12A over F97", Tag::Generic, || {
        verify_row("12A", FormVariant::Main, &Field::prime(97)?, &[])
    });

    r.run(8, "char 2: one 6E form as 6E, 4A, 4B", Tag::Char(2), || {
        let k = Field::finite(2, 6)?;
        let a2 = k
            .elements()?
            .filter(|a| !k.is_zero(a))
            .find(|a| stratum_params("4A", FormVariant::Main, &k, &[a.clone()], 0).is_ok())
            .ok_or_else(|| crate::Error::NoSolutionInField("a2 with three roots μ".into()))?;
        let mut ok = true;
        let mut classes = Vec::new();
        for label in ["6E", "4A", "4B"] {
            let inst = stratum_params(label, FormVariant::Main, &k, &[a2.clone()], 0)?;
            let rep = verify_stratum(&inst);
            ok &= rep.passed()
                && rep.params == [k.zero(), k.zero(), a2.clone(), a2.clone()].map(|e| k.format(&e));
            classes.push(rep.weyl_class.unwrap_or_default());
        }
        Ok((
            ok,
            format!("{k}: a2 = {}, classes {classes:?}", k.format(&a2)),
        ))
    });
    for label in ["3C", "5A", "12A"] {
        r.run(
            8,
            &format!("char 2: (0,0,0,0) as {label}"),
            Tag::Char(2),
            || verify_row(label, FormVariant::Main, &Field::finite(2, 2)?, &[]),
        );
    }
    for label in ["8A", "12A"] {
        r.run(
            8,
            &format!("char 3: (0,0,i,-i) as {label}"),
            Tag::Char(3),
            || verify_row(label, FormVariant::Main, &Field::finite(3, 2)?, &[]),
        );
    }

    r.run(9, "twisted cubic table", Tag::Free, || {
        let t = twisted_cubic_check();
        let counts: Vec<usize> = t.rows.iter().map(|r| r.count).collect();
        Ok((
            t.pass && counts == [1, 1, 15, 15, 20, 20] && t.total == 72,
            format!("{counts:?}"),
        ))
    });

    r.run(10, "specialization graph over F97", Tag::Generic, || {
        let rep = specialization_check(
            &SpecializationGraph::with_alternatives(),
            &Field::prime(97)?,
            12,
            7,
        )?;
        let bad: Vec<String> = rep
            .edges
            .iter()
            .filter(|e| e.preserved != Some(e.expected_preserved))
            .map(|e| format!("{}→{}", e.from, e.to))
            .collect();
        Ok((
            bad.is_empty(),
            format!("{} edges, disagreeing {bad:?}", rep.edges.len()),
        ))
    });

    r.items
}
