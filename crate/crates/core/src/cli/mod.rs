//! Command-line front end. Every command prints one JSON document.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{run_checks, CharFilter};
use crate::e6::{
    self, double_sixes, exceptionals, init_weyl_group, label_of, roots, sixers, triad_pairs,
    tritangent_trios, twisted_cubic_check, weyl_group, ClassSignature, Label,
};
use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::normal_form::{
    enumerate_octanomial_params, find_splitting, octanomial_reduce, octanomial_surface,
    sample_instance, stratum_params, verify_stratum, FormVariant, OctanomialParams,
};
use crate::poly::{form_from_json, form_to_json, Mat4};
use crate::surface::{
    automorphism_group, blowup_marking, eckardt_points, from_six_points, induced_permutation,
    lines_on, marking_from, orbit_partition, random_six_points, CubicSurface, MarkedLines,
    ProjLine,
};

pub const SCHEMA: u64 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "octanomial",
    about = "Exact computations with smooth cubic surfaces",
    version
)]
pub struct Cli {
    /// Indentation of the JSON output; 0 prints one line.
    #[arg(long, global = true, default_value_t = 2)]
    pub json_indent: usize,
    /// Directory holding the cached Weyl group.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate a combinatorial family of the E6 lattice.
    Lattice {
        #[arg(long, value_enum)]
        enumerate: Family,
    },
    /// The 27 lines of a split surface.
    Lines(SurfaceIn),
    /// A labeling of the 27 lines.
    Mark(SurfaceIn),
    /// Eckardt points with their tritangent trios.
    Eckardt(SurfaceIn),
    /// Reduce a surface to octanomial form along one triad pair.
    Reduce {
        #[command(flatten)]
        input: SurfaceIn,
        /// Index of the conjugate triad pair (0..120).
        #[arg(long, default_value_t = 0)]
        pair: usize,
        /// Index of the row/column arrangement (0..72).
        #[arg(long, default_value_t = 0)]
        ordering: usize,
        /// Which cube root to take (0..3).
        #[arg(long, default_value_t = 0)]
        cube_root: usize,
    },
    /// All octanomial parameters of a surface.
    Params(SurfaceIn),
    /// Instantiate and verify one stratum of the catalog.
    Stratum {
        #[arg(long)]
        label: String,
        #[arg(long)]
        field: String,
        /// Use the alternative form (4B, 5A).
        #[arg(long)]
        alternative: bool,
        /// Free parameter values, comma separated.
        #[arg(long, value_delimiter = ',')]
        free: Vec<String>,
        /// Draw free values at random instead.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        branch: usize,
    },
    /// Weyl classes of the automorphisms of a surface, or of one matrix.
    Classify {
        #[command(flatten)]
        input: SurfaceIn,
        /// Row-major 16 entries, comma separated.
        #[arg(long, value_delimiter = ',')]
        matrix: Vec<String>,
    },
    /// A surface from six random points in general position.
    Gen {
        #[arg(long)]
        field: String,
        #[arg(long)]
        seed: u64,
    },
    /// Run the acceptance checks.
    CheckAll {
        /// A prime, or "0-equivalent" for every characteristic class.
        #[arg(long = "char", default_value = "0-equivalent")]
        characteristic: String,
    },
}

#[derive(Args, Debug)]
pub struct SurfaceIn {
    /// Surface JSON file (as written by `gen`).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Octanomial parameters a0,a1,a2,a3 instead of a file.
    #[arg(long, value_delimiter = ',')]
    pub octanomial: Vec<String>,
    /// Field for --octanomial.
    #[arg(long)]
    pub field: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
#[value(rename_all = "snake_case")]
pub enum Family {
    Roots,
    Exceptionals,
    Sixers,
    DoubleSixes,
    Trios,
    TriadPairs,
    TwistedCubics,
}

/// Failed verifications exit with 1; the JSON is printed either way.
struct Outcome {
    value: Value,
    pass: bool,
}

impl Outcome {
    fn ok(value: Value) -> Outcome {
        Outcome { value, pass: true }
    }
}

/// Parses `argv`, runs the command, prints JSON to `out`, and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = init_weyl_group(cli.cache_dir.as_deref()).and_then(|_| dispatch(&cli.command));
    let (code, mut value) = match result {
        Ok(o) => (if o.pass { 0 } else { 1 }, o.value),
        Err(e) => (error_code(&e), json!({ "error": e.to_string() })),
    };
    if let Value::Object(map) = &mut value {
        map.insert("schema".into(), json!(SCHEMA));
    }
    let _ = writeln!(out, "{}", render(&value, cli.json_indent));
    code
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) => 2,
        _ => 1,
    }
}

fn render(v: &Value, indent: usize) -> String {
    if indent == 0 {
        return v.to_string();
    }
    let pad = vec![b' '; indent];
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    v.serialize(&mut ser).expect("json value serializes");
    String::from_utf8(buf).expect("json is utf-8")
}

fn labels(ls: &[Label]) -> Vec<String> {
    ls.iter().map(|l| l.to_string()).collect()
}

fn load_surface(input: &SurfaceIn) -> Result<CubicSurface> {
    if let Some(path) = &input.input {
        let text = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        let form = v.get("surface").unwrap_or(&v);
        return CubicSurface::new(form_from_json(form)?);
    }
    if input.octanomial.len() == 4 {
        let spec = input
            .field
            .as_deref()
            .ok_or_else(|| Error::Parse("--octanomial needs --field".into()))?;
        let k = Field::parse(spec)?;
        let a: Vec<Elem> = input
            .octanomial
            .iter()
            .map(|s| k.parse_elem(s))
            .collect::<Result<_>>()?;
        let params =
            OctanomialParams::new([a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone()]);
        return Ok(octanomial_surface(&k, &params));
    }
    Err(Error::Parse(
        "give --in <file> or --octanomial a0,a1,a2,a3 --field <spec>".into(),
    ))
}

fn load_marked(input: &SurfaceIn) -> Result<(CubicSurface, MarkedLines)> {
    let x = load_surface(input)?;
    let m = marking_from(x.field(), &lines_on(&x)?)?;
    Ok((x, m))
}

fn line_json(k: &Field, l: &ProjLine) -> Value {
    json!(l.format(k))
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Lattice { enumerate } => Ok(Outcome::ok(lattice(*enumerate))),
        Command::Lines(input) => {
            let x = load_surface(input)?;
            let k = x.field();
            let lines = lines_on(&x)?;
            Ok(Outcome::ok(json!({
                "field": k.spec().to_string(),
                "count": lines.len(),
                "lines": lines.iter().map(|l| line_json(k, l)).collect::<Vec<_>>(),
            })))
        }
        Command::Mark(input) => {
            let (x, m) = load_marked(input)?;
            let k = x.field();
            let marking: serde_json::Map<String, Value> = Label::all()
                .map(|l| (l.to_string(), line_json(k, m.line(l))))
                .collect();
            let incidence: Vec<String> = m
                .incidence()
                .iter()
                .map(|row| row.iter().map(|&b| if b { '1' } else { '0' }).collect())
                .collect();
            Ok(Outcome::ok(json!({
                "field": k.spec().to_string(),
                "marking": marking,
                "double_sixes": m.double_six_count(),
                "incidence": incidence,
            })))
        }
        Command::Eckardt(input) => {
            let (x, m) = load_marked(input)?;
            let k = x.field();
            let pts = eckardt_points(&m);
            Ok(Outcome::ok(json!({
                "field": k.spec().to_string(),
                "count": pts.len(),
                "points": pts.iter().map(|p| json!({
                    "point": p.point.format(k),
                    "trio": labels(&p.trio),
                    "shared": p.shared,
                })).collect::<Vec<_>>(),
            })))
        }
        Command::Reduce {
            input,
            pair,
            ordering,
            cube_root,
        } => {
            let (x, m) = load_marked(input)?;
            let pairs = triad_pairs();
            let p = pairs.get(*pair).ok_or_else(|| {
                Error::Parse(format!("pair {pair} out of range 0..{}", pairs.len()))
            })?;
            let r = octanomial_reduce(&x, &m, p, *ordering, *cube_root)?;
            Ok(Outcome::ok(r.to_json(x.field())))
        }
        Command::Params(input) => {
            let (x, m) = load_marked(input)?;
            let k = x.field();
            let params = enumerate_octanomial_params(&x, &m)?;
            Ok(Outcome::ok(json!({
                "field": k.spec().to_string(),
                "count": params.len(),
                "params": params.iter().map(|p| p.format(k)).collect::<Vec<_>>(),
            })))
        }
        Command::Stratum {
            label,
            field,
            alternative,
            free,
            seed,
            branch,
        } => {
            let k = Field::parse(field)?;
            let variant = if *alternative {
                FormVariant::Alternative
            } else {
                FormVariant::Main
            };
            let inst = match seed {
                Some(s) if free.is_empty() => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*s);
                    sample_instance(label, variant, &k, &mut rng, 100)?
                }
                _ => {
                    let vals: Vec<Elem> = free
                        .iter()
                        .map(|s| k.parse_elem(s))
                        .collect::<Result<_>>()?;
                    stratum_params(label, variant, &k, &vals, *branch)?
                }
            };
            let report = verify_stratum(&inst);
            Ok(Outcome {
                pass: report.passed(),
                value: report.to_json(),
            })
        }
        Command::Classify { input, matrix } => classify(input, matrix),
        Command::Gen { field, seed } => {
            let k = Field::parse(field)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let pts = random_six_points(&k, &mut rng)?;
            let x = from_six_points(&k, &pts)?;
            blowup_marking(&x, &pts)?;
            Ok(Outcome::ok(json!({
                "surface": form_to_json(x.form()),
                "points": pts.iter().map(|p| p.iter().map(|c| k.format(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "seed": seed,
            })))
        }
        Command::CheckAll { characteristic } => {
            let filter = CharFilter::parse(characteristic)
                .ok_or_else(|| Error::Parse(format!("bad --char {characteristic}")))?;
            let items = run_checks(filter);
            let pass = items.iter().all(|i| i.pass);
            Ok(Outcome {
                pass,
                value: json!({
                    "char": characteristic,
                    "pass": pass,
                    "passed": items.iter().filter(|i| i.pass).count(),
                    "total": items.len(),
                    "checks": items,
                }),
            })
        }
    }
}

fn lattice(family: Family) -> Value {
    let vecs = |v: Vec<e6::LatticeVector>| v.iter().map(|r| json!(r)).collect::<Vec<_>>();
    let items: Vec<Value> = match family {
        Family::Roots => vecs(roots()),
        Family::Exceptionals => exceptionals()
            .iter()
            .map(|(l, v)| json!({ "label": l.to_string(), "vector": v }))
            .collect(),
        Family::Sixers => sixers().iter().map(|s| json!(labels(s))).collect(),
        Family::DoubleSixes => double_sixes()
            .iter()
            .map(|d| json!([labels(&d.rows[0]), labels(&d.rows[1])]))
            .collect(),
        Family::Trios => tritangent_trios()
            .iter()
            .map(|t| json!(labels(t)))
            .collect(),
        Family::TriadPairs => triad_pairs()
            .iter()
            .map(|p| json!(p.m.iter().map(|r| labels(r)).collect::<Vec<_>>()))
            .collect(),
        Family::TwistedCubics => {
            let t = twisted_cubic_check();
            return json!({ "family": "twisted_cubics", "count": t.total, "report": t });
        }
    };
    let name = family.to_possible_value().map(|v| v.get_name().to_string());
    json!({ "family": name, "count": items.len(), "items": items })
}

fn class_json(w: &e6::WeylElement) -> Value {
    let sig = ClassSignature::of(w);
    json!({
        "weyl_class": label_of(w),
        "order": sig.order,
        "cycle_type": sig.cycle_type_string(),
        "fixed_lines": sig.fixed_lines,
        "orbits": orbit_partition(w)
            .iter()
            .map(|o| json!({ "labels": labels(&o.labels), "tag": o.tag }))
            .collect::<Vec<_>>(),
    })
}

fn classify(input: &SurfaceIn, matrix: &[String]) -> Result<Outcome> {
    let x = load_surface(input)?;
    let k = x.field();
    let split = find_splitting(&x)?;
    if !matrix.is_empty() {
        if matrix.len() != 16 {
            return Err(Error::Parse("--matrix needs 16 entries".into()));
        }
        let e: Vec<Elem> = matrix
            .iter()
            .map(|s| k.parse_elem(s))
            .collect::<Result<_>>()?;
        let g = Mat4::from_fn(|i, j| e[4 * i + j].clone());
        let w = induced_permutation(&split.surface, &split.marking, &split.embed_matrix(&g)?)?;
        let mut v = class_json(&w);
        v["matrix"] = g.to_json(k);
        v["split_field"] = json!(split.field.spec().to_string());
        return Ok(Outcome::ok(v));
    }
    let aut = automorphism_group(&split.surface, &split.marking)?;
    let mut hist: std::collections::BTreeMap<String, usize> = std::collections::BTreeMap::new();
    for a in &aut {
        let name = match label_of(&a.weyl) {
            Some(l) => l.to_string(),
            None => format!(
                "class {}",
                weyl_group().class_of(&a.weyl).unwrap_or(usize::MAX)
            ),
        };
        *hist.entry(name).or_default() += 1;
    }
    Ok(Outcome::ok(json!({
        "field": k.spec().to_string(),
        "split_field": split.field.spec().to_string(),
        "order": aut.len(),
        "classes": hist,
    })))
}
