//! Numerics for the explicit projective models: degree-2 maps of the
//! sphere, the symmetric product map `H`, the maps `φ₃₀`, `φ₃₂`, the
//! quadric, the cone `Y`, and the weighted circle action on `S⁵`.
//!
//! Points are stored homogeneously. Equality is projective: two points
//! agree when every 2×2 minor of the stacked coordinates is small
//! relative to the product of their largest coordinates.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const ROUNDTRIP_TOL: f64 = 1e-7;
pub const CLUSTER_TOL: f64 = 1e-6;
/// Generic samples stay at least this far (relatively) from branch loci.
pub const GENERIC_MARGIN: f64 = 1e-3;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);
const I: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectiveError {
    #[error("projective point needs 2 to 4 coordinates, got {0}")]
    Dimension(usize),
    #[error("all coordinates vanish")]
    ZeroPoint,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("numerator and denominator share a root (relative resultant {0:e})")]
    CommonRoot(f64),
    #[error("critical values coincide")]
    Coincident,
    #[error("point is not on the unit sphere (|p|² = {0})")]
    NotUnit(f64),
    #[error("expected a point of CP^{expected}, got CP^{got}")]
    WrongSpace { expected: usize, got: usize },
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

/// A point of `CP¹`, `CP²` or `CP³`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    coords: Vec<C>,
}

impl ProjPoint {
    pub fn new(coords: Vec<C>) -> Result<Self, ProjectiveError> {
        if !(2..=4).contains(&coords.len()) {
            return Err(ProjectiveError::Dimension(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(ProjectiveError::NonFinite);
        }
        if coords.iter().all(|c| *c == ZERO) {
            return Err(ProjectiveError::ZeroPoint);
        }
        Ok(ProjPoint { coords })
    }

    /// From real coordinates.
    pub fn real(coords: &[f64]) -> Result<Self, ProjectiveError> {
        ProjPoint::new(coords.iter().map(|&x| C::new(x, 0.0)).collect())
    }

    pub fn coords(&self) -> &[C] {
        &self.coords
    }

    /// Complex dimension of the ambient projective space.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Largest coordinate modulus.
    pub fn scale(&self) -> f64 {
        self.coords.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Representative whose largest coordinate is 1.
    pub fn normalized(&self) -> ProjPoint {
        let pivot = *self
            .coords
            .iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("nonempty");
        ProjPoint {
            coords: self.coords.iter().map(|c| c / pivot).collect(),
        }
    }

    pub fn scaled(&self, s: C) -> ProjPoint {
        ProjPoint {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Largest 2×2 minor relative to the product of scales; infinite when
    /// the dimensions differ.
    pub fn distance(&self, other: &ProjPoint) -> f64 {
        if self.coords.len() != other.coords.len() {
            return f64::INFINITY;
        }
        let n = self.coords.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let minor = self.coords[i] * other.coords[j] - self.coords[j] * other.coords[i];
                worst = worst.max(minor.norm());
            }
        }
        worst / (self.scale() * other.scale())
    }

    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        self.distance(other) < tol
    }

    fn expect_dim(&self, dim: usize) -> Result<(), ProjectiveError> {
        if self.dim() != dim {
            return Err(ProjectiveError::WrongSpace {
                expected: dim,
                got: self.dim(),
            });
        }
        Ok(())
    }

    /// Internal constructor for map outputs known to be nonzero.
    fn from_image(coords: Vec<C>) -> ProjPoint {
        assert!(
            coords.iter().any(|c| *c != ZERO),
            "polynomial map produced the zero vector"
        );
        ProjPoint { coords }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        let parts: Vec<String> = n
            .coords
            .iter()
            .map(|c| {
                if c.im.abs() < 1e-12 {
                    format!("{:.6}", c.re)
                } else {
                    format!("{:.6}{:+.6}i", c.re, c.im)
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

/// `H([x₀:x₁],[y₀:y₁]) = [x₀y₀ : x₁y₁ : x₀y₁ + x₁y₀ - x₀y₀ - x₁y₁]`.
pub fn eval_h(p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint, ProjectiveError> {
    p.expect_dim(1)?;
    q.expect_dim(1)?;
    let (x0, x1, y0, y1) = (p.coords[0], p.coords[1], q.coords[0], q.coords[1]);
    let u = x0 * y0;
    let v = x1 * y1;
    Ok(ProjPoint::from_image(vec![u, v, x0 * y1 + x1 * y0 - u - v]))
}

/// `|(u+v+w)² - 4uv|` relative to the squared scale.
pub fn quadric_residual(pt: &ProjPoint) -> Result<f64, ProjectiveError> {
    pt.expect_dim(2)?;
    let [u, v, w] = [pt.coords[0], pt.coords[1], pt.coords[2]];
    let s = u + v + w;
    Ok((s * s - 4.0 * u * v).norm() / pt.scale().powi(2))
}

/// Membership in the quadric `(u+v+w)² = 4uv`.
pub fn quadric_q(pt: &ProjPoint, tol: f64) -> Result<bool, ProjectiveError> {
    Ok(quadric_residual(pt)? < tol)
}

/// `[x:y:z] ↦ [x²:y²:z²]`.
pub fn eval_phi30(pt: &ProjPoint) -> Result<ProjPoint, ProjectiveError> {
    pt.expect_dim(2)?;
    Ok(ProjPoint::from_image(
        pt.coords.iter().map(|c| c * c).collect(),
    ))
}

/// `[x:y:z] ↦ [x²:y²:z²:xy]`.
pub fn eval_phi32(pt: &ProjPoint) -> Result<ProjPoint, ProjectiveError> {
    pt.expect_dim(2)?;
    let [x, y, z] = [pt.coords[0], pt.coords[1], pt.coords[2]];
    Ok(ProjPoint::from_image(vec![x * x, y * y, z * z, x * y]))
}

/// `τ[x:y:z] = [x:y:-z]`.
pub fn tau(pt: &ProjPoint) -> Result<ProjPoint, ProjectiveError> {
    pt.expect_dim(2)?;
    Ok(ProjPoint {
        coords: vec![pt.coords[0], pt.coords[1], -pt.coords[2]],
    })
}

/// `|t² - uv|` relative to the squared scale.
pub fn y_residual(pt: &ProjPoint) -> Result<f64, ProjectiveError> {
    pt.expect_dim(3)?;
    let [u, v, _, t] = [pt.coords[0], pt.coords[1], pt.coords[2], pt.coords[3]];
    Ok((t * t - u * v).norm() / pt.scale().powi(2))
}

/// Membership in the cone `Y = {t² = uv} ⊂ CP³`.
pub fn on_y(pt: &ProjPoint, tol: f64) -> Result<bool, ProjectiveError> {
    Ok(y_residual(pt)? < tol)
}

/// Binary quadratic form `c₀x² + c₁xy + c₂y²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryQuadratic(pub [C; 3]);

impl BinaryQuadratic {
    pub fn eval(&self, x: C, y: C) -> C {
        let [a, b, c] = self.0;
        a * x * x + b * x * y + c * y * y
    }

    fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Whether the discriminant is negligible relative to the coefficients.
    pub fn is_confluent(&self, tol: f64) -> bool {
        let [a, b, c] = self.0;
        (b * b - 4.0 * a * c).norm() < tol * self.norm().powi(2)
    }

    /// The two roots in `CP¹`, with multiplicity.
    ///
    /// Uses `q = -(c₁ + sign·√disc)/2` with the sign avoiding cancellation;
    /// the roots are then `[q : c₀]` and `[c₂ : q]`, which also covers
    /// roots at infinity without special cases.
    pub fn roots(&self) -> Result<[ProjPoint; 2], ProjectiveError> {
        let [a, b, c] = self.0;
        if self.norm() == 0.0 {
            return Err(ProjectiveError::ZeroPoint);
        }
        let s = (b * b - 4.0 * a * c).sqrt();
        let plus = b + s;
        let minus = b - s;
        let q = -0.5 * if plus.norm() >= minus.norm() { plus } else { minus };
        if q == ZERO {
            // b = 0 and ac = 0: a double root at 0 or at infinity.
            let r = if a == ZERO {
                ProjPoint::from_image(vec![ONE, ZERO])
            } else {
                ProjPoint::from_image(vec![ZERO, ONE])
            };
            return Ok([r.clone(), r]);
        }
        Ok([
            ProjPoint::from_image(vec![q, a]),
            ProjPoint::from_image(vec![c, q]),
        ])
    }
}

/// `[x₀:x₁] ↦ [P(x₀,x₁) : Q(x₀,x₁)]` with `P, Q` binary quadratics.
///
/// The point `[z:1]` is `z ∈ C` and `[1:0]` is `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalMapDeg2 {
    pub numerator: BinaryQuadratic,
    pub denominator: BinaryQuadratic,
}

impl RationalMapDeg2 {
    pub fn new(numerator: [C; 3], denominator: [C; 3]) -> Result<Self, ProjectiveError> {
        let m = RationalMapDeg2 {
            numerator: BinaryQuadratic(numerator),
            denominator: BinaryQuadratic(denominator),
        };
        let r = m.relative_resultant();
        if !(r > DEFAULT_TOL) {
            return Err(ProjectiveError::CommonRoot(r));
        }
        Ok(m)
    }

    /// `z ↦ z²`.
    pub fn square() -> Self {
        RationalMapDeg2::new([ONE, ZERO, ZERO], [ZERO, ZERO, ONE]).expect("no common root")
    }

    /// `Res(P, Q) = (a₀b₂ - a₂b₀)² - (a₀b₁ - a₁b₀)(a₁b₂ - a₂b₁)`,
    /// divided by `|P|²|Q|²`.
    pub fn relative_resultant(&self) -> f64 {
        let [a0, a1, a2] = self.numerator.0;
        let [b0, b1, b2] = self.denominator.0;
        let r = (a0 * b2 - a2 * b0).powi(2) - (a0 * b1 - a1 * b0) * (a1 * b2 - a2 * b1);
        r.norm() / (self.numerator.norm().powi(2) * self.denominator.norm().powi(2))
    }

    pub fn eval(&self, p: &ProjPoint) -> Result<ProjPoint, ProjectiveError> {
        p.expect_dim(1)?;
        let (x, y) = (p.coords[0], p.coords[1]);
        Ok(ProjPoint::from_image(vec![
            self.numerator.eval(x, y),
            self.denominator.eval(x, y),
        ]))
    }

    /// Jacobian determinant `∂(P,Q)/∂(x₀,x₁)`, halved:
    /// `(a₀b₁-a₁b₀)x² + 2(a₀b₂-a₂b₀)xy + (a₁b₂-a₂b₁)y²`.
    pub fn wronskian(&self) -> BinaryQuadratic {
        let [a0, a1, a2] = self.numerator.0;
        let [b0, b1, b2] = self.denominator.0;
        BinaryQuadratic([
            a0 * b1 - a1 * b0,
            2.0 * (a0 * b2 - a2 * b0),
            a1 * b2 - a2 * b1,
        ])
    }

    /// Postcomposition with a Möbius transformation.
    pub fn post_compose(&self, g: &Mobius) -> RationalMapDeg2 {
        let [[a, b], [c, d]] = g.0;
        let (p, q) = (self.numerator.0, self.denominator.0);
        let mix = |s: C, t: C| BinaryQuadratic([0, 1, 2].map(|i| s * p[i] + t * q[i]));
        RationalMapDeg2 {
            numerator: mix(a, b),
            denominator: mix(c, d),
        }
    }
}

/// `[u:v] ↦ [au+bv : cu+dv]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius(pub [[C; 2]; 2]);

impl Mobius {
    pub fn new(m: [[C; 2]; 2]) -> Option<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let scale = m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        (det.norm() > DEFAULT_TOL * scale * scale).then_some(Mobius(m))
    }

    /// The transformation sending `0 = [0:1]` to `x` and `∞ = [1:0]` to `y`.
    pub fn sending_zero_infinity_to(x: &ProjPoint, y: &ProjPoint) -> Option<Self> {
        Mobius::new([[y.coords[0], x.coords[0]], [y.coords[1], x.coords[1]]])
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint, ProjectiveError> {
        p.expect_dim(1)?;
        let [[a, b], [c, d]] = self.0;
        let (u, v) = (p.coords[0], p.coords[1]);
        Ok(ProjPoint::from_image(vec![a * u + b * v, c * u + d * v]))
    }
}

/// The branch values of a degree-2 map.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalValues {
    pub values: [ProjPoint; 2],
    /// The two critical points merged within tolerance; both values are
    /// then the same point.
    pub degenerate: bool,
}

impl CriticalValues {
    /// Distance to an unordered pair, minimized over the two matchings.
    pub fn pair_distance(&self, x: &ProjPoint, y: &ProjPoint) -> f64 {
        let [a, b] = &self.values;
        let straight = a.distance(x).max(b.distance(y));
        let crossed = a.distance(y).max(b.distance(x));
        straight.min(crossed)
    }
}

/// Images of the zeros of the Wronskian.
pub fn critical_values(m: &RationalMapDeg2) -> Result<CriticalValues, ProjectiveError> {
    let w = m.wronskian();
    let degenerate = w.is_confluent(DEFAULT_TOL);
    let [r0, r1] = w.roots()?;
    let v0 = m.eval(&r0)?;
    let v1 = if degenerate { v0.clone() } else { m.eval(&r1)? };
    Ok(CriticalValues {
        values: [v0, v1],
        degenerate,
    })
}

/// `z ↦ z²` conjugated so that its branch values are `x` and `y`.
pub fn map_from_critical_values(
    x: &ProjPoint,
    y: &ProjPoint,
) -> Result<RationalMapDeg2, ProjectiveError> {
    x.expect_dim(1)?;
    y.expect_dim(1)?;
    if x.approx_eq(y, DEFAULT_TOL) {
        return Err(ProjectiveError::Coincident);
    }
    let g = Mobius::sending_zero_infinity_to(x, y).ok_or(ProjectiveError::Coincident)?;
    let m = RationalMapDeg2::square().post_compose(&g);
    RationalMapDeg2::new(m.numerator.0, m.denominator.0)
}

/// Maps whose fibers can be counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyMap {
    Phi30,
    Phi32,
    /// `H` on `CP¹×CP¹`, counting ordered pairs.
    H,
}

impl PolyMap {
    /// Number of preimages of a generic point.
    pub fn generic_degree(self) -> usize {
        match self {
            PolyMap::Phi30 => 4,
            PolyMap::Phi32 | PolyMap::H => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageCount {
    pub count: usize,
    /// Set when roots merged, i.e. the target lies on the branch locus.
    pub non_generic: bool,
}

/// Roots of `x² = r` merged at the clustering tolerance, relative to the
/// chart's unit coordinate.
fn square_roots(r: C) -> Vec<C> {
    let s = r.sqrt();
    if s.norm() < CLUSTER_TOL {
        vec![ZERO]
    } else {
        vec![s, -s]
    }
}

fn push_distinct(points: &mut Vec<ProjPoint>, p: ProjPoint) {
    if points.iter().all(|q| !q.approx_eq(&p, CLUSTER_TOL)) {
        points.push(p);
    }
}

/// Preimages of `[a:b:c]` under `φ₃₀`, computed in the chart where the
/// target's largest coordinate is 1.
fn phi30_preimages(target: &ProjPoint) -> Vec<ProjPoint> {
    let c = &target.coords;
    let j = (0..3)
        .max_by(|&a, &b| c[a].norm().total_cmp(&c[b].norm()))
        .expect("three coordinates");
    let per_coord: Vec<Vec<C>> = (0..3)
        .map(|i| {
            if i == j {
                vec![ONE]
            } else {
                square_roots(c[i] / c[j])
            }
        })
        .collect();
    let mut out = Vec::new();
    for x in &per_coord[0] {
        for y in &per_coord[1] {
            for z in &per_coord[2] {
                push_distinct(&mut out, ProjPoint::from_image(vec![*x, *y, *z]));
            }
        }
    }
    out
}

/// Distinct preimages of `target` under `f`.
pub fn preimages(f: PolyMap, target: &ProjPoint) -> Result<Vec<(ProjPoint, Option<ProjPoint>)>, ProjectiveError> {
    match f {
        PolyMap::Phi30 => {
            target.expect_dim(2)?;
            Ok(phi30_preimages(target).into_iter().map(|p| (p, None)).collect())
        }
        PolyMap::Phi32 => {
            target.expect_dim(3)?;
            let base = ProjPoint::from_image(target.coords[..3].to_vec());
            if base.scale() < CLUSTER_TOL * target.scale() {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for p in phi30_preimages(&base) {
                if eval_phi32(&p)?.approx_eq(target, CLUSTER_TOL) {
                    out.push((p, None));
                }
            }
            Ok(out)
        }
        PolyMap::H => {
            target.expect_dim(2)?;
            let [u, v, w] = [target.coords[0], target.coords[1], target.coords[2]];
            // H(p, q) = target iff (x₀s + x₁t)(y₀s + y₁t) = us² + (u+v+w)st + vt².
            let form = BinaryQuadratic([u, u + v + w, v]);
            let [r0, r1] = form.roots()?;
            let lift = |r: &ProjPoint| {
                ProjPoint::from_image(vec![r.coords[1], -r.coords[0]])
            };
            let (p, q) = (lift(&r0), lift(&r1));
            let mut pairs = vec![(p.clone(), Some(q.clone()))];
            if !p.approx_eq(&q, CLUSTER_TOL) {
                pairs.push((q, Some(p)));
            }
            Ok(pairs)
        }
    }
}

/// Number of distinct preimages, flagged when fewer than generic.
pub fn count_preimages(f: PolyMap, target: &ProjPoint) -> Result<PreimageCount, ProjectiveError> {
    let count = preimages(f, target)?.len();
    Ok(PreimageCount {
        count,
        non_generic: count < f.generic_degree(),
    })
}

/// A point of the unit sphere `S⁵ ⊂ C³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint5 {
    pub coords: [C; 3],
}

impl SpherePoint5 {
    pub fn new(x: C, y: C, z: C) -> Result<Self, ProjectiveError> {
        let n = x.norm_sqr() + y.norm_sqr() + z.norm_sqr();
        if (n - 1.0).abs() > DEFAULT_TOL {
            return Err(ProjectiveError::NotUnit(n));
        }
        Ok(SpherePoint5 { coords: [x, y, z] })
    }

    /// Radial projection of a nonzero vector.
    pub fn normalize(x: C, y: C, z: C) -> Result<Self, ProjectiveError> {
        let n = (x.norm_sqr() + y.norm_sqr() + z.norm_sqr()).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(ProjectiveError::ZeroPoint);
        }
        Ok(SpherePoint5 {
            coords: [x / n, y / n, z / n],
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn distance(&self, other: &SpherePoint5) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `θ·(x, y, z) = (e^{iθ}x, e^{iθ}y, e^{2iθ}z)`.
pub fn weighted_circle_orbit(theta: f64, p: &SpherePoint5) -> SpherePoint5 {
    let e1 = C::from_polar(1.0, theta);
    let e2 = C::from_polar(1.0, 2.0 * theta);
    let [x, y, z] = p.coords;
    SpherePoint5 {
        coords: [e1 * x, e1 * y, e2 * z],
    }
}

/// `(x, y, z) ↦ (x√(1+|z|²), y√(1+|z|²), z²)`, invariant under `z ↦ -z`.
pub fn s5_identification(p: &SpherePoint5) -> SpherePoint5 {
    let [x, y, z] = p.coords;
    let r = (1.0 + z.norm_sqr()).sqrt();
    SpherePoint5 {
        coords: [x * r, y * r, z * z],
    }
}

/// `(x, y, z) ↦ [x² : y² : z : xy]`, constant on weighted circle orbits.
pub fn orbit_space_map(p: &SpherePoint5) -> ProjPoint {
    let [x, y, z] = p.coords;
    ProjPoint::from_image(vec![x * x, y * y, z, x * y])
}

/// The point `[0:0:1:0]` of `Y`.
pub fn sigma01() -> ProjPoint {
    ProjPoint::from_image(vec![ZERO, ZERO, ONE, ZERO])
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex number uniform in the square `[-1, 1]²`.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> C {
    C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random point of `CP^dim` with all coordinates bounded away from 0
/// relative to the largest.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ProjPoint {
    loop {
        let coords: Vec<C> = (0..=dim).map(|_| random_complex(rng)).collect();
        let scale = coords.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if coords.iter().all(|c| c.norm() > GENERIC_MARGIN * scale) {
            return ProjPoint::from_image(coords);
        }
    }
}

pub fn random_sphere_point<R: Rng + ?Sized>(rng: &mut R) -> SpherePoint5 {
    loop {
        let [x, y, z] = [0, 1, 2].map(|_| random_complex(rng));
        if let Ok(p) = SpherePoint5::normalize(x, y, z) {
            return p;
        }
    }
}

pub fn random_mobius<R: Rng + ?Sized>(rng: &mut R) -> Mobius {
    loop {
        let m = [0, 1].map(|_| [0, 1].map(|_| random_complex(rng)));
        if let Some(g) = Mobius::new(m) {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det.norm() > GENERIC_MARGIN {
                return g;
            }
        }
    }
}

/// Random point on the line `x + s₁y + s₂iz = 0`.
pub fn random_point_on_line<R: Rng + ?Sized>(rng: &mut R, s1: f64, s2: f64) -> ProjPoint {
    loop {
        let y = random_complex(rng);
        let z = random_complex(rng);
        let x = -(s1 * y + s2 * I * z);
        if let Ok(p) = ProjPoint::new(vec![x, y, z]) {
            return p;
        }
    }
}

/// Generic point of the coordinate line `ℓᵢ = {xᵢ = 0}` in `CP²`.
pub fn random_point_on_coordinate_line<R: Rng + ?Sized>(rng: &mut R, i: usize) -> ProjPoint {
    let mut p = random_point(rng, 2);
    p.coords[i] = ZERO;
    p
}

/// One row of the numeric identity checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapCheck {
    pub check: String,
    pub samples: usize,
    #[serde(rename = "maxResidual")]
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub anchor: String,
}

struct Checker<'a> {
    rows: Vec<MapCheck>,
    seed: u64,
    tol: &'a dyn Fn(&str) -> f64,
}

impl Checker<'_> {
    /// Runs `residual` on `samples` draws from a per-check stream so that
    /// adding checks never perturbs existing ones.
    fn run(
        &mut self,
        check: &str,
        anchor: &str,
        samples: usize,
        mut residual: impl FnMut(&mut ChaCha8Rng) -> f64,
    ) {
        let mut rng = seeded_rng(self.seed ^ fnv(check));
        let max = (0..samples)
            .map(|_| residual(&mut rng))
            .fold(0.0, |a: f64, r| if r.is_nan() { f64::INFINITY } else { a.max(r) });
        let tolerance = (self.tol)(check);
        self.rows.push(MapCheck {
            check: check.to_string(),
            samples,
            max_residual: max,
            tolerance,
            pass: max < tolerance,
            anchor: anchor.to_string(),
        });
    }
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}

/// Numeric checks of every displayed identity. Count checks report the
/// largest deviation from the expected count as their residual.
pub fn verify_identities(
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<MapCheck>, ProjectiveError> {
    if samples == 0 {
        return Err(ProjectiveError::NoSamples);
    }
    if !(tol > 0.0) {
        return Err(ProjectiveError::BadTolerance(tol));
    }
    let tol_for = |check: &str| -> f64 {
        match check {
            "critical_values_roundtrip" | "critical_values_mobius" => tol.max(ROUNDTRIP_TOL),
            c if c.starts_with("count_") => 0.5,
            _ => tol,
        }
    };
    let mut c = Checker {
        rows: Vec::new(),
        seed,
        tol: &tol_for,
    };
    let p1 = |rng: &mut ChaCha8Rng| random_point(rng, 1);
    let p2 = |rng: &mut ChaCha8Rng| random_point(rng, 2);

    c.run("h_symmetry", "symmetric product map", samples, |rng| {
        let (p, q) = (p1(rng), p1(rng));
        eval_h(&p, &q).unwrap().distance(&eval_h(&q, &p).unwrap())
    });
    c.run("h_diagonal_quadric", "diagonal image is the quadric", samples, |rng| {
        let p = p1(rng);
        quadric_residual(&eval_h(&p, &p).unwrap()).unwrap()
    });
    for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let name = format!(
            "phi30_line_x{}y{}iz_quadric",
            if s1 > 0.0 { "+" } else { "-" },
            if s2 > 0.0 { "+" } else { "-" }
        );
        c.run(&name, "four lines over the quadric", samples, |rng| {
            let p = random_point_on_line(rng, s1, s2);
            quadric_residual(&eval_phi30(&p).unwrap()).unwrap()
        });
    }
    c.run("phi32_tau_invariance", "phi32 factors through tau", samples, |rng| {
        let p = p2(rng);
        let a = eval_phi32(&p).unwrap();
        let b = eval_phi32(&tau(&p).unwrap()).unwrap();
        a.distance(&b)
    });
    c.run("phi32_image_on_y", "image of phi32 is Y", samples, |rng| {
        y_residual(&eval_phi32(&p2(rng)).unwrap()).unwrap()
    });
    c.run("phi30_sign_flips", "deck group of phi30", samples, |rng| {
        let p = p2(rng);
        let base = eval_phi30(&p).unwrap();
        let mut worst: f64 = 0.0;
        for signs in [[1.0, -1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]] {
            let q = ProjPoint::from_image(
                p.coords.iter().zip(signs).map(|(c, s)| c * s).collect(),
            );
            worst = worst.max(eval_phi30(&q).unwrap().distance(&base));
        }
        worst
    });
    c.run("critical_values_roundtrip", "map determined by critical values", samples, |rng| {
        let (x, y) = loop {
            let (x, y) = (p1(rng), p1(rng));
            if x.distance(&y) >= GENERIC_MARGIN {
                break (x, y);
            }
        };
        let m = map_from_critical_values(&x, &y).unwrap();
        critical_values(&m).unwrap().pair_distance(&x, &y)
    });
    c.run("critical_values_mobius", "critical values move with the target", samples, |rng| {
        let m = map_from_critical_values(&p1(rng), &p1(rng)).unwrap();
        let g = random_mobius(rng);
        let before = critical_values(&m).unwrap();
        let after = critical_values(&m.post_compose(&g)).unwrap();
        let [a, b] = &before.values;
        after.pair_distance(&g.apply(a).unwrap(), &g.apply(b).unwrap())
    });
    let count_samples = samples.min(100);
    c.run("count_phi30_generic", "phi30 is 4 to 1", count_samples, |rng| {
        count_preimages(PolyMap::Phi30, &p2(rng)).unwrap().count.abs_diff(4) as f64
    });
    for i in 0..3 {
        c.run(&format!("count_phi30_line_{i}"), "2 to 1 over one branch line", count_samples, |rng| {
            let p = random_point_on_coordinate_line(rng, i);
            count_preimages(PolyMap::Phi30, &p).unwrap().count.abs_diff(2) as f64
        });
    }
    c.run("count_phi30_corner", "1 to 1 over two branch lines", 1, |_| {
        let p = ProjPoint::real(&[1.0, 0.0, 0.0]).unwrap();
        count_preimages(PolyMap::Phi30, &p).unwrap().count.abs_diff(1) as f64
    });
    c.run("count_phi32_generic", "phi32 is a double cover of Y", count_samples, |rng| {
        let target = eval_phi32(&p2(rng)).unwrap();
        count_preimages(PolyMap::Phi32, &target).unwrap().count.abs_diff(2) as f64
    });
    c.run("weighted_orbit_invariance", "orbit space of the weighted action", samples, |rng| {
        let p = random_sphere_point(rng);
        let theta = rng.random_range(0.0..2.0 * PI);
        orbit_space_map(&weighted_circle_orbit(theta, &p)).distance(&orbit_space_map(&p))
    });
    c.run("orbit_space_on_y", "orbit space is Y", samples, |rng| {
        y_residual(&orbit_space_map(&random_sphere_point(rng))).unwrap()
    });
    c.run("s5_identification_norm", "S5/tau is S5", samples, |rng| {
        (s5_identification(&random_sphere_point(rng)).norm_sqr() - 1.0).abs()
    });
    c.run("s5_identification_tau", "S5/tau is S5", samples, |rng| {
        let p = random_sphere_point(rng);
        let [x, y, z] = p.coords;
        let q = SpherePoint5 { coords: [x, y, -z] };
        s5_identification(&p).distance(&s5_identification(&q))
    });
    Ok(c.rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[C]) -> ProjPoint {
        ProjPoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn point_validation() {
        assert_eq!(ProjPoint::new(vec![ONE]), Err(ProjectiveError::Dimension(1)));
        assert_eq!(
            ProjPoint::new(vec![ZERO, ZERO]),
            Err(ProjectiveError::ZeroPoint)
        );
        let p = pt(&[ONE, I]);
        assert!(p.approx_eq(&p.scaled(C::new(3.0, -2.0)), DEFAULT_TOL));
        assert!(!p.approx_eq(&pt(&[ONE, ONE]), DEFAULT_TOL));
    }

    #[test]
    fn h_examples() {
        let p = ProjPoint::real(&[0.0, 1.0]).unwrap();
        let q = ProjPoint::real(&[1.0, 0.0]).unwrap();
        let h = eval_h(&p, &q).unwrap();
        assert!(h.approx_eq(&ProjPoint::real(&[0.0, 0.0, 1.0]).unwrap(), DEFAULT_TOL));
    }

    #[test]
    fn quadric_examples() {
        assert!(quadric_q(&ProjPoint::real(&[1.0, 1.0, 0.0]).unwrap(), DEFAULT_TOL).unwrap());
        assert!(!quadric_q(&ProjPoint::real(&[1.0, 0.0, 0.0]).unwrap(), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn phi_examples() {
        let p = pt(&[ONE, I, ZERO]);
        let image = eval_phi30(&p).unwrap();
        assert!(image.approx_eq(&ProjPoint::real(&[1.0, -1.0, 0.0]).unwrap(), DEFAULT_TOL));
        let s = eval_phi32(&ProjPoint::real(&[0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert!(s.approx_eq(&sigma01(), DEFAULT_TOL));
    }

    #[test]
    fn y_examples() {
        assert!(on_y(&sigma01(), DEFAULT_TOL).unwrap());
        assert!(on_y(&ProjPoint::real(&[1.0, 1.0, 0.0, 1.0]).unwrap(), DEFAULT_TOL).unwrap());
        assert!(!on_y(&ProjPoint::real(&[1.0, 1.0, 0.0, 0.0]).unwrap(), DEFAULT_TOL).unwrap());
        assert!(matches!(
            on_y(&ProjPoint::real(&[1.0, 1.0, 0.0]).unwrap(), DEFAULT_TOL),
            Err(ProjectiveError::WrongSpace { .. })
        ));
    }

    #[test]
    fn quadratic_roots() {
        // (x - 2y)(x + 3y) = x² + xy - 6y²
        let f = BinaryQuadratic([ONE, ONE, C::new(-6.0, 0.0)]);
        let [a, b] = f.roots().unwrap();
        for r in [a, b] {
            assert!(f.eval(r.coords[0], r.coords[1]).norm() < 1e-12 * r.scale().powi(2));
        }
        // Roots at infinity: 0·x² + xy + 0·y².
        let [a, b] = BinaryQuadratic([ZERO, ONE, ZERO]).roots().unwrap();
        let zero = ProjPoint::real(&[0.0, 1.0]).unwrap();
        let inf = ProjPoint::real(&[1.0, 0.0]).unwrap();
        assert!(
            (a.approx_eq(&zero, 1e-12) && b.approx_eq(&inf, 1e-12))
                || (a.approx_eq(&inf, 1e-12) && b.approx_eq(&zero, 1e-12))
        );
        let [a, b] = BinaryQuadratic([ZERO, ZERO, ONE]).roots().unwrap();
        assert!(a.approx_eq(&inf, 1e-12) && b.approx_eq(&inf, 1e-12));
    }

    #[test]
    fn square_map_critical_values() {
        let cv = critical_values(&RationalMapDeg2::square()).unwrap();
        let zero = ProjPoint::real(&[0.0, 1.0]).unwrap();
        let inf = ProjPoint::real(&[1.0, 0.0]).unwrap();
        assert!(!cv.degenerate);
        assert!(cv.pair_distance(&zero, &inf) < 1e-12);
    }

    #[test]
    fn common_root_rejected() {
        // x·y and x² share the root x = 0.
        assert!(matches!(
            RationalMapDeg2::new([ZERO, ONE, ZERO], [ONE, ZERO, ZERO]),
            Err(ProjectiveError::CommonRoot(_))
        ));
    }

    #[test]
    fn coincident_critical_values() {
        let x = ProjPoint::real(&[1.0, 2.0]).unwrap();
        assert_eq!(
            map_from_critical_values(&x, &x.scaled(C::new(0.0, 5.0))),
            Err(ProjectiveError::Coincident)
        );
    }

    #[test]
    fn counts_at_special_points() {
        let corner = ProjPoint::real(&[1.0, 0.0, 0.0]).unwrap();
        let c = count_preimages(PolyMap::Phi30, &corner).unwrap();
        assert_eq!((c.count, c.non_generic), (1, true));
        let on_line = ProjPoint::real(&[1.0, 2.0, 0.0]).unwrap();
        assert_eq!(count_preimages(PolyMap::Phi30, &on_line).unwrap().count, 2);
        let generic = ProjPoint::real(&[1.0, 2.0, 3.0]).unwrap();
        let c = count_preimages(PolyMap::Phi30, &generic).unwrap();
        assert_eq!((c.count, c.non_generic), (4, false));
        assert_eq!(count_preimages(PolyMap::Phi32, &sigma01()).unwrap().count, 1);
        let off_y = ProjPoint::real(&[1.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(count_preimages(PolyMap::Phi32, &off_y).unwrap().count, 0);
        let h_generic = ProjPoint::real(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(count_preimages(PolyMap::H, &h_generic).unwrap().count, 2);
        let on_quadric = ProjPoint::real(&[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(count_preimages(PolyMap::H, &on_quadric).unwrap().count, 1);
    }

    #[test]
    fn circle_action_examples() {
        let north = SpherePoint5::new(ZERO, ZERO, ONE).unwrap();
        assert!(weighted_circle_orbit(PI, &north).distance(&north) < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = SpherePoint5::new(C::new(h, 0.0), C::new(h, 0.0), ZERO).unwrap();
        let q = weighted_circle_orbit(PI, &p);
        assert!(q.distance(&SpherePoint5::new(C::new(-h, 0.0), C::new(-h, 0.0), ZERO).unwrap()) < 1e-15);
        assert!(q.distance(&p) > 1.0);
        assert!(weighted_circle_orbit(2.0 * PI, &p).distance(&p) < 1e-15);
        assert!(orbit_space_map(&north).approx_eq(&sigma01(), DEFAULT_TOL));
        assert_eq!(s5_identification(&p), p);
        assert!(matches!(
            SpherePoint5::new(ONE, ONE, ZERO),
            Err(ProjectiveError::NotUnit(_))
        ));
    }

    #[test]
    fn identity_checks_pass_and_repeat() {
        let a = verify_identities(200, 7, DEFAULT_TOL).unwrap();
        for row in &a {
            assert!(row.pass, "{row:?}");
        }
        assert_eq!(a, verify_identities(200, 7, DEFAULT_TOL).unwrap());
        assert_eq!(verify_identities(0, 7, DEFAULT_TOL), Err(ProjectiveError::NoSamples));
        assert!(verify_identities(1, 7, 0.0).is_err());
    }
}
