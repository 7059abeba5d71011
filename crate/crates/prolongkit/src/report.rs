//! End-to-end analysis pipeline and its report shape.
//!
//! One call runs: Hessian witness search, symmetry algebra, prolongation
//! (with the one-stage cross-check at small dimensions), canonical
//! decomposition of every prolongation element, and Gauss sampling. Every
//! number in the report is recomputed on each run; the input descriptor
//! carries a content hash of the canonical tensor so reports are tied to
//! the exact form analyzed.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::aut::compute_aut;
use crate::catalog::{build, CatalogName};
use crate::decomp::decompose;
use crate::error::Result;
use crate::gauss::{gauss_degeneracy_report, hessian_nonzero_witness, GaussSampleRecord};
use crate::json::content_hash;
use crate::multilinear::CubicForm;
use crate::prolong::{compute_prolongation, compute_prolongation_naive, same_span};
use crate::rat::{format_rat, rat, ratio, Rat};
use crate::verify::ExpectationRow;

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub samples: usize,
    pub seed: u64,
    pub skip_prolongation: bool,
    /// One-stage solver cross-check cap; the naive comparison runs only when
    /// the dimension is at most this.
    pub max_naive_dim: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            samples: 20,
            seed: 0,
            skip_prolongation: false,
            max_naive_dim: crate::prolong::NAIVE_DIM_CAP,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDescriptor {
    pub kind: String,
    pub name: String,
    pub dim: usize,
    pub content_hash: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct HessianSection {
    pub nonzero: bool,
    pub witness: Option<Vec<String>>,
    pub det: Option<String>,
    pub trials_used: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AutSection {
    pub dim: usize,
    pub chi: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProlongationSection {
    pub dim: usize,
    pub chi_rank: usize,
    pub naive_checked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub naive_agrees: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationRow {
    pub index: usize,
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    pub degenerate: bool,
    pub unique: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussSection {
    pub samples: Vec<GaussSampleRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub input: InputDescriptor,
    pub hessian: HessianSection,
    pub aut: AutSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prolongation: Option<ProlongationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Vec<ClassificationRow>>,
    pub gauss: GaussSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog_expectations: Option<Vec<ExpectationRow>>,
}

pub enum AnalyzeInput {
    Catalog(CatalogName),
    Cubic { name: String, form: CubicForm },
}

pub fn analyze(input: AnalyzeInput, opts: &AnalyzeOptions) -> Result<Report> {
    let (kind, name, form, catalog) = match input {
        AnalyzeInput::Catalog(n) => {
            let entry = build(n);
            ("catalog".to_string(), n.to_string(), entry.cubic.clone(), Some(entry))
        }
        AnalyzeInput::Cubic { name, form } => ("file".to_string(), name, form, None),
    };

    let descriptor = InputDescriptor {
        kind,
        name,
        dim: form.dim(),
        content_hash: content_hash(&form),
    };

    let witness = hessian_nonzero_witness(&form, 200, opts.seed);
    let hessian = HessianSection {
        nonzero: witness.nonzero,
        witness: witness
            .witness
            .as_ref()
            .map(|w| w.iter().map(format_rat).collect()),
        det: witness.det.as_ref().map(format_rat),
        trials_used: witness.trials_used,
    };

    let alg = compute_aut(&form);
    let aut = AutSection {
        dim: alg.dim(),
        chi: alg.characters.iter().map(format_rat).collect(),
    };

    let mut prolongation = None;
    let mut classification = None;
    let mut expectations: Vec<ExpectationRow> = Vec::new();
    if !opts.skip_prolongation {
        let p = compute_prolongation(&form, &alg);
        let naive_checked = form.dim() <= opts.max_naive_dim;
        let naive_agrees = if naive_checked {
            let naive = compute_prolongation_naive(&form, opts.max_naive_dim)?;
            Some(same_span(&p, &naive))
        } else {
            None
        };
        prolongation = Some(ProlongationSection {
            dim: p.dim(),
            chi_rank: p.character_rank(),
            naive_checked,
            naive_agrees,
        });
        let rows: Vec<ClassificationRow> = p
            .basis
            .iter()
            .zip(&p.characters)
            .enumerate()
            .map(|(index, (a, chi))| {
                let d = decompose(&form, a, chi).expect("solver basis element");
                ClassificationRow {
                    index,
                    member: d.member,
                    a: d.scale.as_ref().map(format_rat),
                    degenerate: d.degenerate,
                    unique: d.unique,
                }
            })
            .collect();
        if let Some(entry) = &catalog {
            expectations.push(expectation(
                "aut_dim",
                entry.expected_aut_dim,
                alg.dim(),
            ));
            expectations.push(expectation(
                "prolongation_dim",
                entry.expected_prolongation_dim,
                p.dim(),
            ));
            let half = ratio(1, 2);
            let all_half = p
                .basis
                .iter()
                .zip(&p.characters)
                .all(|(a, chi)| match decompose(&form, a, chi) {
                    Ok(d) => d.member && d.scale.as_ref() == Some(&half),
                    Err(_) => false,
                });
            expectations.push(ExpectationRow {
                name: "classification_scale_half".into(),
                pass: all_half,
                expected: "true".into(),
                actual: all_half.to_string(),
            });
        }
        classification = Some(rows);
    } else if let Some(entry) = &catalog {
        expectations.push(expectation("aut_dim", entry.expected_aut_dim, alg.dim()));
    }

    // Gauss sampling: catalog entries use their parametrized samplers; file
    // cubics fall back to a bounded search for small rational points.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (samples, note) = match &catalog {
        Some(entry) => {
            let samples: Vec<Vec<Rat>> = (0..opts.samples)
                .map(|_| entry.sample_smooth_on_y(&mut rng))
                .collect::<Result<_>>()?;
            (samples, None)
        }
        None => {
            let found = search_smooth_points(&form, opts.samples);
            let note = if found.is_empty() {
                Some("no small rational smooth points found on the cone".to_string())
            } else {
                None
            };
            (found, note)
        }
    };
    let gauss = if samples.is_empty() {
        GaussSection {
            samples: Vec::new(),
            degenerate: None,
            note,
        }
    } else {
        let report = gauss_degeneracy_report(&form, &samples)?;
        GaussSection {
            samples: report.samples,
            degenerate: Some(report.degenerate),
            note,
        }
    };

    Ok(Report {
        input: descriptor,
        hessian,
        aut,
        prolongation,
        classification,
        gauss,
        catalog_expectations: if catalog.is_some() {
            Some(expectations)
        } else {
            None
        },
    })
}

fn expectation<T: PartialEq + ToString>(name: &str, expected: T, actual: T) -> ExpectationRow {
    ExpectationRow {
        name: name.into(),
        pass: expected == actual,
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

/// Bounded search for smooth rational points on the cone of an arbitrary
/// cubic: small-integer vectors in lexicographic order, capped.
fn search_smooth_points(f: &CubicForm, want: usize) -> Vec<Vec<Rat>> {
    const RANGE: i64 = 2;
    const CAP: usize = 200_000;
    let n = f.dim();
    let width = (2 * RANGE + 1) as usize;
    let mut out = Vec::new();
    let mut counter = vec![0usize; n];
    for _ in 0..CAP {
        // decode the counter into a vector over [-RANGE, RANGE]
        let v: Vec<Rat> = counter.iter().map(|&d| rat(d as i64 - RANGE)).collect();
        // advance
        let mut carry = true;
        for d in counter.iter_mut() {
            if carry {
                *d += 1;
                if *d == width {
                    *d = 0;
                } else {
                    carry = false;
                }
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            if carry {
                break;
            }
            continue;
        }
        if f.eval_cubic(&v).map(|c| c.is_zero()).unwrap_or(false)
            && !crate::gauss::is_singular_point(f, &v)
        {
            out.push(v);
            if out.len() >= want {
                break;
            }
        }
        if carry {
            break;
        }
    }
    out
}
