use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use super::strata::{
    descriptor, stratum_residuals, stratum_solutions, FormVariant, StratumInstance,
};
use crate::error::Result;
use crate::fields::{Elem, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Node {
    pub label: &'static str,
    pub variant: FormVariant,
}

impl Node {
    pub const fn main(label: &'static str) -> Node {
        Node {
            label,
            variant: FormVariant::Main,
        }
    }

    pub const fn alternative(label: &'static str) -> Node {
        Node {
            label,
            variant: FormVariant::Alternative,
        }
    }

    pub fn name(&self) -> String {
        match self.variant {
            FormVariant::Main => self.label.to_string(),
            FormVariant::Alternative => format!("{}'", self.label),
        }
    }
}

/// Specialization edges between strata of automorphism types.
#[derive(Clone, Debug)]
pub struct SpecializationGraph {
    pub edges: Vec<(Node, Node)>,
}

const MAIN_EDGES: [(&str, &str); 17] = [
    ("1A", "2A"),
    ("2A", "2B"),
    ("2A", "3D"),
    ("2A", "4A"),
    ("2B", "4B"),
    ("2B", "6E"),
    ("3D", "4B"),
    ("3D", "6E"),
    ("3D", "3A"),
    ("4B", "5A"),
    ("4B", "3C"),
    ("6E", "5A"),
    ("6E", "3C"),
    ("3A", "3C"),
    ("3A", "12A"),
    ("4A", "12A"),
    ("4A", "8A"),
];

impl SpecializationGraph {
    /// The seventeen edges among the main forms.
    pub fn main_forms() -> SpecializationGraph {
        SpecializationGraph {
            edges: MAIN_EDGES
                .iter()
                .map(|&(a, b)| (Node::main(a), Node::main(b)))
                .collect(),
        }
    }

    /// The main edges plus those through the alternative 4B and 5A forms.
    pub fn with_alternatives() -> SpecializationGraph {
        let mut g = SpecializationGraph::main_forms();
        g.edges.extend([
            (Node::main("3D"), Node::alternative("4B")),
            (Node::alternative("4B"), Node::alternative("5A")),
        ]);
        g
    }

    /// Whether the octanomial parametrizations are known to respect the edge.
    pub fn expected_preserved(from: &Node, to: &Node) -> bool {
        !matches!(
            (from.label, from.variant, to.label, to.variant),
            ("3D", FormVariant::Main, "4B", FormVariant::Main)
                | ("4B", FormVariant::Main, "5A", FormVariant::Main)
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeReport {
    pub from: String,
    pub to: String,
    /// Every sampled point of the target satisfies the source constraints;
    /// `None` when the target has no points over the field.
    pub preserved: Option<bool>,
    pub expected_preserved: bool,
    pub samples: usize,
    /// Target parameters violating the source constraints.
    pub witness: Option<[String; 4]>,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecializationReport {
    pub field: String,
    pub edges: Vec<EdgeReport>,
}

impl SpecializationReport {
    pub fn matches_expectation(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.preserved == Some(e.expected_preserved))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Points of a target stratum: all of them for zero-dimensional rows,
/// otherwise random free values (skipping values without solutions).
fn target_points(
    node: &Node,
    k: &Field,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<StratumInstance>, bool)> {
    let d = descriptor(node.label, node.variant, k.characteristic())?;
    if d.free_params == 0 {
        return Ok((stratum_solutions(node.label, node.variant, k, &[])?, true));
    }
    let mut out = Vec::new();
    for _ in 0..samples * 20 {
        if out.len() >= samples {
            break;
        }
        let free: Vec<Elem> = (0..d.free_params).map(|_| k.random(rng)).collect();
        if let Ok(sols) = stratum_solutions(node.label, node.variant, k, &free) {
            out.extend(sols.into_iter().take(1));
        }
    }
    Ok((out, false))
}

/// Tests each edge S → T by checking that points of T satisfy the
/// constraints of S. One violating point settles non-preservation.
pub fn specialization_check(
    graph: &SpecializationGraph,
    k: &Field,
    samples: usize,
    seed: u64,
) -> Result<SpecializationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for (from, to) in &graph.edges {
        let (points, exhaustive) = target_points(to, k, samples, &mut rng)?;
        let mut witness = None;
        for inst in &points {
            let ok = if from.label == "1A" {
                true
            } else {
                stratum_residuals(from.label, from.variant, k, &inst.params)
                    .map(|r| r.iter().all(|(_, v)| k.is_zero(v)))
                    .unwrap_or(false)
            };
            if !ok {
                witness = Some(inst.params.format(k));
                break;
            }
        }
        edges.push(EdgeReport {
            from: from.name(),
            to: to.name(),
            preserved: if points.is_empty() {
                None
            } else {
                Some(witness.is_none())
            },
            expected_preserved: SpecializationGraph::expected_preserved(from, to),
            samples: points.len(),
            witness,
            exhaustive,
        });
    }
    Ok(SpecializationReport {
        field: k.to_string(),
        edges,
    })
}
