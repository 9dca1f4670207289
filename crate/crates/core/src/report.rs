//! Reports assembled from the other modules, rendered as fixed-width
//! tables or JSON.

use std::fmt::Write as _;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundles::gluing_bundle;
use crate::homology::{
    admissible_strata, area, link_dimension, strata_codim, HomologyError, RuledSurface,
    SymplecticForm,
};
use crate::plumbing::{
    blow_down, chain_to_lens, circle_bundle, lens_equivalent, link20_pipeline, link_nontrivial,
    PlumbingError, PlumbingGraph, SpaceRecord, TraceStep,
};
use crate::projective_maps::{verify_identities, MapCheck, ProjectiveError};
use crate::stable_trees::{enumerate_pointed_strata, enumerate_strata, StratumRecord};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Plumbing(#[from] PlumbingError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(
        "link of J_{m} in J_{k} on the {surface} surface is not derived; supported: \
         m = k+1 with k >= 1 and (m, k) = (2, 0) on the trivial surface, \
         m = k+1 with k >= 1 on the nontrivial surface"
    )]
    NotDerived {
        surface: RuledSurface,
        m: i64,
        k: i64,
    },
    #[error("fiber degree must be at least 1, got {0}")]
    BadDegree(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataRow {
    pub k: i64,
    pub class: String,
    pub area: String,
    pub codim: i64,
    /// `2 - 2c₁·B`; differs from `codim` on the nontrivial surface.
    pub adjunction_codim: i64,
    /// Dimension of the link of `J_{k+1}` in `J_k`, when `J_{k+1}` is nonempty.
    pub link_dim: Option<i64>,
    pub link_dim_inferred: bool,
    pub anchor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataReport {
    pub surface: RuledSurface,
    pub lambda: String,
    pub rows: Vec<StrataRow>,
}

pub fn run_strata(lambda: Rational64, surface: RuledSurface) -> Result<StrataReport, ReportError> {
    let form = SymplecticForm::new(surface, lambda)?;
    let ks = admissible_strata(&form);
    let mut rows = Vec::new();
    for &k in &ks {
        let class = surface.stratum_class(k)?;
        let (codim, adjunction_codim, anchor) = if k == 0 {
            (0, 0, "open stratum")
        } else {
            let c = strata_codim(surface, k)?;
            let anchor = match surface {
                RuledSurface::Trivial => "codimension 4k-2",
                RuledSurface::Nontrivial => "codimension 4k (stated); adjunction differs",
            };
            (c.stated, c.adjunction, anchor)
        };
        let next = ks.contains(&(k + 1)).then(|| link_dimension(k + 1, k)).transpose()?;
        rows.push(StrataRow {
            k,
            class: class.to_string(),
            area: area(&form, &class)?.to_string(),
            codim,
            adjunction_codim,
            link_dim: next.map(|l| l.dim),
            link_dim_inferred: next.is_some_and(|l| l.inferred),
            anchor: anchor.to_string(),
        });
    }
    Ok(StrataReport {
        surface,
        lambda: lambda.to_string(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedSpace {
    pub name: String,
    pub space: SpaceRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub surface: RuledSurface,
    pub m: i64,
    pub k: i64,
    pub link: SpaceRecord,
    pub trace: Vec<TraceStep>,
    pub sublinks: Vec<NamedSpace>,
    /// Alternative derivations reported without changing `link`.
    pub diagnostics: Vec<String>,
    pub anchor: String,
}

pub fn run_links(m: i64, k: i64, surface: RuledSurface) -> Result<LinkReport, ReportError> {
    let not_derived = || ReportError::NotDerived { surface, m, k };
    if k < 0 || m <= k {
        return Err(HomologyError::LinkIndices { m, k }.into());
    }
    match surface {
        RuledSurface::Trivial if m == k + 1 && k >= 1 => {
            let bundle = gluing_bundle(k).map_err(PlumbingError::from)?;
            let link = circle_bundle(&bundle)?;
            let degree = bundle.degree().expect("sphere base");
            let (chain_link, notes) = chain_to_lens(&[degree])?;
            if chain_link != link {
                return Err(PlumbingError::Inconsistent(format!(
                    "circle bundle gives {link}, single-vertex chain gives {chain_link}"
                ))
                .into());
            }
            Ok(LinkReport {
                surface,
                m,
                k,
                link: link.to_record(notes),
                trace: vec![
                    TraceStep {
                        step: "gluingBundle".into(),
                        rule: "tensor of tangent lines at the node".into(),
                        result: bundle.to_string(),
                    },
                    TraceStep {
                        step: "chainToLens".into(),
                        rule: "circle bundle of O(-n) is L(n,1)".into(),
                        result: link.to_string(),
                    },
                ],
                sublinks: Vec::new(),
                diagnostics: Vec::new(),
                anchor: "adjacent strata have lens space links".into(),
            })
        }
        RuledSurface::Trivial if (m, k) == (2, 0) => {
            let l = link20_pipeline()?;
            let sub = |name: &str, s: &crate::plumbing::Space| NamedSpace {
                name: name.into(),
                space: s.to_record(Vec::new()),
            };
            Ok(LinkReport {
                surface,
                m,
                k,
                link: l.link.to_record(Vec::new()),
                trace: l.trace.clone(),
                sublinks: vec![
                    sub("L_Z", &l.link_z),
                    sub("conic", &l.conic),
                    sub("R+", &l.r_plus),
                    sub("R-", &l.r_minus),
                ],
                diagnostics: Vec::new(),
                anchor: "pointed link through plumbing with S(L_Y)".into(),
            })
        }
        RuledSurface::Nontrivial if m == k + 1 && k >= 1 => {
            let l = link_nontrivial(k)?;
            let diagnostic = format!(
                "circle bundle of degree (E-kF)^2+2 gives {}; {} the stated value",
                l.derived,
                if l.agrees() { "agrees with" } else { "differs from" }
            );
            Ok(LinkReport {
                surface,
                m,
                k,
                link: l.stated.to_record(Vec::new()),
                trace: vec![TraceStep {
                    step: "linkNontrivial".into(),
                    rule: "stated lens space L(4k+1,1)".into(),
                    result: l.stated.to_string(),
                }],
                sublinks: Vec::new(),
                diagnostics: vec![diagnostic],
                anchor: "links on the nontrivial bundle".into(),
            })
        }
        _ => Err(not_derived()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbReport {
    pub chain: Vec<i64>,
    pub space: SpaceRecord,
    /// Successive chains produced by blow-downs.
    pub blow_downs: Vec<Vec<i64>>,
    /// Lens space of the final chain, when it is a single vertex or empty.
    pub blow_down_space: Option<SpaceRecord>,
    pub agrees: Option<bool>,
    pub anchor: String,
}

pub fn run_plumb(chain: &[i64]) -> Result<PlumbReport, ReportError> {
    let (space, notes) = chain_to_lens(chain)?;
    let mut blow_downs = Vec::new();
    let mut g = PlumbingGraph::chain(chain);
    loop {
        let next = blow_down(&g);
        if next == g {
            break;
        }
        blow_downs.push(next.as_chain().expect("chains stay linear"));
        g = next;
    }
    let last = g.as_chain().expect("chains stay linear");
    let reduced = match last.as_slice() {
        [] => Some(crate::plumbing::Space::S3.normalize()),
        [e] => Some(crate::plumbing::Space::CircleBundle { euler: *e }.normalize()),
        _ => None,
    };
    Ok(PlumbReport {
        chain: chain.to_vec(),
        space: space.to_record(notes),
        agrees: reduced.map(|r| lens_equivalent(&space, &r)),
        blow_down_space: reduced.map(|r| r.to_record(Vec::new())),
        blow_downs,
        anchor: "negative continued fraction of a linear plumbing".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub rows: Vec<MapCheck>,
    pub all_pass: bool,
}

pub fn run_verify_maps(samples: usize, seed: u64, tolerance: f64) -> Result<VerifyReport, ReportError> {
    let rows = verify_identities(samples, seed, tolerance)?;
    Ok(VerifyReport {
        samples,
        seed,
        tolerance,
        all_pass: rows.iter().all(|r| r.pass),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionsReport {
    pub n: i64,
    pub pointed: bool,
    pub depth: u32,
    /// Set for the pointed enumeration, whose rules are inferred.
    pub inferred: bool,
    pub strata: Vec<StratumRecord>,
    pub anchor: String,
}

pub fn run_decompositions(n: i64, depth: u32, pointed: bool) -> Result<DecompositionsReport, ReportError> {
    if n < 1 {
        return Err(ReportError::BadDegree(n));
    }
    let strata = if pointed {
        enumerate_pointed_strata(n, depth)
    } else {
        enumerate_strata(n, depth)
    };
    Ok(DecompositionsReport {
        n,
        pointed,
        depth,
        inferred: pointed,
        strata: strata.iter().map(|s| s.to_record()).collect(),
        anchor: if pointed {
            "pointed fiber strata".into()
        } else {
            "fiber strata of dimension 4n-2p".into()
        },
    })
}

/// Fixed-width ASCII rendering.
pub trait Table {
    fn to_table(&self) -> String;
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let _ = write!(s, "{c:<w$}");
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    out += &line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
    for r in rows {
        out += &line(r);
    }
    out
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl Table for StrataReport {
    fn to_table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    r.class.clone(),
                    r.area.clone(),
                    r.codim.to_string(),
                    r.adjunction_codim.to_string(),
                    format!("{}{}", opt(r.link_dim), if r.link_dim_inferred { "*" } else { "" }),
                    r.anchor.clone(),
                ]
            })
            .collect();
        format!(
            "surface {}  lambda {}\n{}",
            self.surface,
            self.lambda,
            table(&["k", "class", "area", "codim", "adj", "link_dim", "rule"], &rows)
        )
    }
}

impl Table for LinkReport {
    fn to_table(&self) -> String {
        let mut out = format!(
            "link of J_{} in J_{} ({}): {}\n",
            self.m, self.k, self.surface, self.link.name
        );
        let rows: Vec<Vec<String>> = self
            .trace
            .iter()
            .enumerate()
            .map(|(i, t)| vec![(i + 1).to_string(), t.step.clone(), t.result.clone(), t.rule.clone()])
            .collect();
        out += &table(&["#", "step", "result", "rule"], &rows);
        for s in &self.sublinks {
            let _ = writeln!(out, "sublink {}: {}", s.name, s.space.name);
        }
        for n in self.link.notes.iter().chain(&self.diagnostics) {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

impl Table for PlumbReport {
    fn to_table(&self) -> String {
        let mut out = format!("chain {:?}: {}\n", self.chain, self.space.name);
        for (i, c) in self.blow_downs.iter().enumerate() {
            let _ = writeln!(out, "blow-down {}: {:?}", i + 1, c);
        }
        if let Some(s) = &self.blow_down_space {
            let _ = writeln!(
                out,
                "blow-down result: {} ({})",
                s.name,
                if self.agrees == Some(true) { "agrees" } else { "DISAGREES" }
            );
        }
        for n in &self.space.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

impl Table for VerifyReport {
    fn to_table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.check.clone(),
                    r.samples.to_string(),
                    format!("{:.3e}", r.max_residual),
                    format!("{:.1e}", r.tolerance),
                    if r.pass { "pass" } else { "FAIL" }.to_string(),
                    r.anchor.clone(),
                ]
            })
            .collect();
        format!(
            "seed {}  samples {}  tol {:e}\n{}",
            self.seed,
            self.samples,
            self.tolerance,
            table(&["check", "samples", "max_residual", "tol", "result", "rule"], &rows)
        )
    }
}

impl Table for DecompositionsReport {
    fn to_table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .strata
            .iter()
            .map(|s| {
                vec![
                    format!("{:?}", s.parts),
                    s.shape.join(" "),
                    s.dim.to_string(),
                    s.isotropy.to_string(),
                ]
            })
            .collect();
        format!(
            "n {}  depth {}{}\n{}",
            self.n,
            self.depth,
            if self.inferred { "  (pointed, inferred)" } else { "" },
            table(&["parts", "shape", "dim", "isotropy"], &rows)
        )
    }
}
