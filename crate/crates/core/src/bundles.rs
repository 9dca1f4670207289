//! Formal line and rank-2 bundle arithmetic.
//!
//! Bundles are recorded by their base and integer Chern data only; every
//! isomorphism question reduces to comparing integers.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plumbing::Space;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("base mismatch: {0} vs {1}")]
    BaseMismatch(BaseSpace, BaseSpace),
    #[error("operation needs a sphere base, got {0}")]
    NotSphere(BaseSpace),
    #[error("gluing bundle for adjacent strata needs k >= 1, got {0}")]
    BadIndex(i64),
    #[error("{id} has {expected} generators, got {got} degrees")]
    GeneratorCount {
        id: String,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseSpace {
    Sphere,
    /// A named stratum space whose line bundles are classified by one
    /// integer per generator of its second cohomology.
    Named { id: String, generators: usize },
}

impl fmt::Display for BaseSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSpace::Sphere => f.write_str("S2"),
            BaseSpace::Named { id, .. } => f.write_str(id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineBundle {
    base: BaseSpace,
    degrees: Vec<i64>,
}

impl LineBundle {
    /// `O(d)` over S².
    pub fn sphere(d: i64) -> Self {
        LineBundle {
            base: BaseSpace::Sphere,
            degrees: vec![d],
        }
    }

    /// `TS² = O(2)`.
    pub fn tangent_sphere() -> Self {
        LineBundle::sphere(2)
    }

    pub fn named(id: &str, generators: usize, degrees: Vec<i64>) -> Result<Self, BundleError> {
        if degrees.len() != generators {
            return Err(BundleError::GeneratorCount {
                id: id.to_string(),
                expected: generators,
                got: degrees.len(),
            });
        }
        Ok(LineBundle {
            base: BaseSpace::Named {
                id: id.to_string(),
                generators,
            },
            degrees,
        })
    }

    pub fn base(&self) -> &BaseSpace {
        &self.base
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Euler number over a sphere base.
    pub fn degree(&self) -> Option<i64> {
        match self.base {
            BaseSpace::Sphere => Some(self.degrees[0]),
            BaseSpace::Named { .. } => None,
        }
    }
}

impl fmt::Display for LineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.base, self.degrees.as_slice()) {
            (BaseSpace::Sphere, [0]) => f.write_str("C"),
            (BaseSpace::Sphere, [d]) => write!(f, "O({d})"),
            (base, ds) => write!(f, "O{ds:?} -> {base}"),
        }
    }
}

pub fn tensor(a: &LineBundle, b: &LineBundle) -> Result<LineBundle, BundleError> {
    if a.base != b.base {
        return Err(BundleError::BaseMismatch(a.base.clone(), b.base.clone()));
    }
    Ok(LineBundle {
        base: a.base.clone(),
        degrees: a.degrees.iter().zip(&b.degrees).map(|(x, y)| x + y).collect(),
    })
}

/// Pullback along a degree-`d` self-map of S².
pub fn pullback_by_degree(d: i64, a: &LineBundle) -> Result<LineBundle, BundleError> {
    let deg = a.degree().ok_or_else(|| BundleError::NotSphere(a.base.clone()))?;
    Ok(LineBundle::sphere(d * deg))
}

/// `O(k) ⊕ O(m)` over S².
///
/// The ordered pair is kept because intermediate plumbing steps twist one
/// specific factor; isomorphism only sees the sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rank2Bundle {
    pub degrees: (i64, i64),
}

impl Rank2Bundle {
    pub const fn new(k: i64, m: i64) -> Self {
        Rank2Bundle { degrees: (k, m) }
    }

    /// Normal form: `k + m`.
    pub fn sum(&self) -> i64 {
        self.degrees.0 + self.degrees.1
    }

    pub fn is_isomorphic(&self, other: &Rank2Bundle) -> bool {
        self.sum() == other.sum()
    }

    /// Both factors tensored with `O(t)`.
    pub fn tensor_line(&self, t: i64) -> Rank2Bundle {
        Rank2Bundle::new(self.degrees.0 + t, self.degrees.1 + t)
    }

    /// `(k+t, m-t)`, an isomorphic bundle.
    pub fn shift(&self, t: i64) -> Rank2Bundle {
        Rank2Bundle::new(self.degrees.0 + t, self.degrees.1 - t)
    }

    /// First factor tensored with `O(t)`.
    pub fn twist_first(&self, t: i64) -> Rank2Bundle {
        Rank2Bundle::new(self.degrees.0 + t, self.degrees.1)
    }

    /// Isomorphic representative `(k+m, 0)`.
    pub fn with_trivial_second(&self) -> Rank2Bundle {
        self.shift(self.degrees.1)
    }
}

impl fmt::Display for Rank2Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (k, m) = self.degrees;
        let term = |d: i64| {
            if d == 0 {
                "C".to_string()
            } else {
                format!("O({d})")
            }
        };
        write!(f, "{}+{}", term(k), term(m))
    }
}

/// Gluing parameters at the nodes of a stable map with a section stem.
///
/// The fiber at a branch point `w` is `T_{ρ(w)}Σ₁ ⊗ T_wΣ₀`: the tangent
/// line of the branch pulled back along the stem's graph map, tensored
/// with the tangent line of the stem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingBundleSpec {
    /// Degree of the self-map of S² whose graph is the stem.
    pub stem_graph_degree: i64,
    /// Tangent line of the branch component at the attaching point.
    pub branch_tangent: LineBundle,
    /// Tangent line of the stem at the attaching point.
    pub stem_tangent: LineBundle,
}

impl GluingBundleSpec {
    /// Stem `A-(k+1)F` is the graph of a degree `-(k+1)` map.
    pub fn adjacent(k: i64) -> Self {
        GluingBundleSpec {
            stem_graph_degree: -(k + 1),
            branch_tangent: LineBundle::tangent_sphere(),
            stem_tangent: LineBundle::tangent_sphere(),
        }
    }

    pub fn line_bundle(&self) -> Result<LineBundle, BundleError> {
        let pulled = pullback_by_degree(self.stem_graph_degree, &self.branch_tangent)?;
        tensor(&pulled, &self.stem_tangent)
    }
}

/// Line bundle of gluing parameters over the one-point-branch stratum
/// `Z_J ≅ S²` for the adjacent strata `J_{k+1} ⊂ closure(J_k)`.
pub fn gluing_bundle(k: i64) -> Result<LineBundle, BundleError> {
    if k <= 0 {
        return Err(BundleError::BadIndex(k));
    }
    GluingBundleSpec::adjacent(k).line_bundle()
}

/// Rank-2 gluing bundle over the two-fiber stratum compactified to S²:
/// the moving fiber contributes the `O(-2)` of the adjacent case `k = 1`,
/// the fixed fiber through the base point a trivial factor.
pub fn v2_bundle() -> Rank2Bundle {
    let moving = gluing_bundle(1).expect("k = 1").degree().expect("sphere");
    Rank2Bundle::new(moving, 0)
}

/// Isolated cyclic orbifold point of an orbibundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldPoint {
    pub label: String,
    /// Homogeneous coordinates in the ambient projective model.
    pub coords: Vec<i64>,
    pub order: u32,
    /// Generator of the local group acts by `ζ^w` on each base chart
    /// coordinate, with `ζ = exp(2πi/order)`.
    pub base_weights: Vec<u32>,
    /// Exponent of the action on the fiber.
    pub fiber_weight: u32,
}

/// Orbifold line bundle whose unit circle bundle is the orbit map of a
/// weighted circle action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbiLineBundle {
    pub base: BaseSpace,
    pub orbifold_points: Vec<OrbifoldPoint>,
    /// Weights of the circle action on `S⁵ ⊂ C³` with the circle bundle as orbit map.
    pub circle_weights: [u32; 3],
    pub total_space: Space,
}

impl OrbiLineBundle {
    /// Period of the orbit through a point whose nonzero coordinates are
    /// flagged by `support`: `2π / gcd` of the weights there.
    pub fn orbit_period(&self, support: [bool; 3]) -> f64 {
        let g = self
            .circle_weights
            .iter()
            .zip(support)
            .filter(|(_, s)| *s)
            .fold(0u32, |g, (w, _)| gcd(g, *w));
        2.0 * PI / g.max(1) as f64
    }

    /// Order of the stabilizer of the orbit through that point.
    pub fn stabilizer_order(&self, support: [bool; 3]) -> u32 {
        (2.0 * PI / self.orbit_period(support)).round() as u32
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `L_Y → Y` over the quadric cone `Y = {t² = uv} ⊂ CP³`.
///
/// Its only orbifold point is the cone point `[0:0:1:0]`, where `Z/2`
/// acts by `(x, y) × v ↦ (-x, -y) × (-v)`; the unit circle bundle is
/// `S⁵` with orbits of `θ·(x, y, z) = (e^{iθ}x, e^{iθ}y, e^{2iθ}z)`.
pub fn l_y_bundle() -> OrbiLineBundle {
    OrbiLineBundle {
        base: BaseSpace::Named {
            id: "Y".to_string(),
            generators: 1,
        },
        orbifold_points: vec![OrbifoldPoint {
            label: "sigma01".to_string(),
            coords: vec![0, 0, 1, 0],
            order: 2,
            base_weights: vec![1, 1],
            fiber_weight: 1,
        }],
        circle_weights: [1, 1, 2],
        total_space: Space::S5,
    }
}
