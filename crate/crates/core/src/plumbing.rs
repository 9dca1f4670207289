//! Plumbing of circle and 3-sphere bundles, lens space recognition, and
//! the link computations built on top of them.
//!
//! Orientation convention: the unit circle bundle of `O(-n)` over S² is
//! `L(n, 1)`. A linear chain with Euler numbers `e₁, …, eₙ` bounds
//! `L(p, q)` with `p/q = a₁ - 1/(a₂ - 1/(… - 1/aₙ))`, `aᵢ = -eᵢ`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundles::{gluing_bundle, l_y_bundle, v2_bundle, BundleError, LineBundle, Rank2Bundle};
use crate::homology::{intersect, H2Class, RuledSurface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlumbingError {
    #[error("empty plumbing chain")]
    EmptyChain,
    #[error("plumbing graph is not a tree")]
    NotATree,
    #[error("edge endpoint {0} out of range")]
    BadVertex(usize),
    #[error("plumbing at the singular fiber of S(L_Y) is unsupported")]
    SingularFiber,
    #[error("unsupported plumbing: {0}")]
    Unsupported(String),
    #[error("expected a bundle with degree sum -1, got {0}")]
    WrongSum(Rank2Bundle),
    #[error("expected the blow-down pullback space, got {0}")]
    NotPullback(Space),
    #[error("pullback data disagrees with the intersection form: {0}")]
    Inconsistent(String),
    #[error("stratum index must be >= 1, got {0}")]
    BadIndex(i64),
    #[error("could not parse chain {0:?}")]
    ParseChain(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("chain {chain:?} could not be reduced by blow-downs")]
    Irreducible { chain: Vec<i64> },
    #[error("integer overflow evaluating chain {0:?}")]
    Overflow(Vec<i64>),
}

/// Euler data of the circle bundle over `CP²#-CP²` obtained by pulling
/// back `S(L_can) → CP²` along the blow-down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PullbackData {
    /// Degree sum of the sphere bundle this came from.
    pub sum: i64,
    /// Euler number over the section `S₋` of self-intersection -1.
    pub euler_s_minus: i64,
    /// Euler number over the section `S₊` of self-intersection +1.
    pub euler_s_plus: i64,
    /// Euler number over a fiber.
    pub euler_fiber: i64,
}

/// Normal forms of the link spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    /// `L(p, q)`, normalized with `p >= 0` and `0 <= q < p` when `p >= 2`.
    Lens { p: i64, q: i64 },
    S2xS1,
    S3,
    RP3,
    /// Unit circle bundle over S² with the given Euler number.
    CircleBundle { euler: i64 },
    /// Unit sphere bundle of a rank-2 bundle over S² with the given degree sum.
    SphereBundle3 { sum: i64 },
    /// `S(O(-1)⊕C)` recognized as the blow-down pullback of `S(L_can)`.
    BlowdownPullback(PullbackData),
    S5,
}

impl Space {
    /// `L(p, q)` in normal form.
    pub fn lens(p: i64, q: i64) -> Space {
        let (p, q) = if p < 0 { (-p, -q) } else { (p, q) };
        match p {
            0 => Space::Lens { p: 0, q: 1 },
            1 => Space::Lens { p: 1, q: 0 },
            _ => Space::Lens {
                p,
                q: q.rem_euclid(p),
            },
        }
    }

    /// Lens parameters, resolving the named aliases.
    pub fn as_lens(&self) -> Option<(i64, i64)> {
        match *self {
            Space::Lens { p, q } => Some((p, q)),
            Space::S2xS1 => Some((0, 1)),
            Space::S3 => Some((1, 0)),
            Space::RP3 => Some((2, 1)),
            Space::CircleBundle { euler } => match Space::lens(-euler, 1) {
                Space::Lens { p, q } => Some((p, q)),
                _ => unreachable!(),
            },
            _ => None,
        }
    }

    /// Canonical representative: lens-type spaces become `Lens`.
    pub fn normalize(&self) -> Space {
        match self.as_lens() {
            Some((p, q)) => Space::lens(p, q),
            None => *self,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Space::Lens { .. } => "LensSpace",
            Space::S2xS1 => "S2xS1",
            Space::S3 => "S3",
            Space::RP3 => "RP3",
            Space::CircleBundle { .. } => "CircleBundle",
            Space::SphereBundle3 { .. } => "SphereBundle3",
            Space::BlowdownPullback(_) => "BlowdownPullback",
            Space::S5 => "S5",
        }
    }

    /// Common name for the lens spaces that have one.
    pub fn common_name(&self) -> Option<&'static str> {
        match self.as_lens()? {
            (0, _) => Some("S2xS1"),
            (1, _) => Some("S3"),
            (2, _) => Some("RP3"),
            _ => None,
        }
    }

    pub fn to_record(&self, notes: Vec<String>) -> SpaceRecord {
        let (p, q) = match self.as_lens() {
            Some((p, q)) => (Some(p), Some(q)),
            None => (None, None),
        };
        let normal = self.normalize();
        SpaceRecord {
            tag: normal.tag().to_string(),
            p,
            q,
            name: self.to_string(),
            notes,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Lens { p, q } => {
                write!(f, "L({p},{q})")?;
                if let Some(name) = self.common_name() {
                    write!(f, " = {name}")?;
                }
                Ok(())
            }
            Space::S2xS1 => f.write_str("S2xS1"),
            Space::S3 => f.write_str("S3"),
            Space::RP3 => f.write_str("RP3"),
            Space::CircleBundle { euler } => write!(f, "S(O({euler}))"),
            Space::SphereBundle3 { sum } => write!(f, "S(O({sum})+C)"),
            Space::BlowdownPullback(d) => write!(
                f,
                "S(O({})+C) = blowdown pullback of S(L_can)",
                d.sum
            ),
            Space::S5 => f.write_str("S5"),
        }
    }
}

/// JSON form of a [`Space`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceRecord {
    pub tag: String,
    pub p: Option<i64>,
    pub q: Option<i64>,
    pub name: String,
    pub notes: Vec<String>,
}

/// Lens space classification up to (possibly orientation reversing)
/// diffeomorphism. Returns false unless both are lens-type.
pub fn lens_equivalent(a: &Space, b: &Space) -> bool {
    let (Some((p, q)), Some((p2, q2))) = (a.as_lens(), b.as_lens()) else {
        return false;
    };
    if p != p2 {
        return false;
    }
    if p <= 1 {
        return true;
    }
    let m = |x: i64| x.rem_euclid(p);
    m(q2 - q) == 0 || m(q2 + q) == 0 || m(q2 * q - 1) == 0 || m(q2 * q + 1) == 0
}

/// Whether the orbifold vertex is plumbed along a regular or the singular fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Attach {
    Regular,
    Singular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Vertex {
    /// Circle bundle over S².
    Circle { euler: i64 },
    /// Unit sphere bundle of `O(k)⊕O(m)` over S².
    Sphere3 { degrees: Rank2Bundle },
    /// `S(L_can) → CP²`.
    Canonical,
    /// `S(L_Y) → Y`, plumbed along the indicated fiber.
    OrbiLY { attach: Attach },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: BTreeSet<(usize, usize)>,
}

impl PlumbingGraph {
    pub fn new(vertices: Vec<Vertex>, edges: &[(usize, usize)]) -> Result<Self, PlumbingError> {
        let n = vertices.len();
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(PlumbingError::BadVertex(v));
                }
            }
            if a == b || !set.insert((a.min(b), a.max(b))) {
                return Err(PlumbingError::NotATree);
            }
        }
        let g = PlumbingGraph {
            vertices,
            edges: set,
        };
        if n > 0 && (g.edges.len() != n - 1 || !g.is_connected()) {
            return Err(PlumbingError::NotATree);
        }
        Ok(g)
    }

    /// Circle bundles over S² plumbed in a line.
    pub fn chain(eulers: &[i64]) -> Self {
        let vertices = eulers.iter().map(|&euler| Vertex::Circle { euler }).collect();
        let edges = (1..eulers.len()).map(|i| (i - 1, i)).collect();
        PlumbingGraph { vertices, edges }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn euler(&self, v: usize) -> Option<i64> {
        match self.vertices[v] {
            Vertex::Circle { euler } => Some(euler),
            _ => None,
        }
    }

    /// Euler numbers in order if this is a linear chain of circle bundles.
    pub fn as_chain(&self) -> Option<Vec<i64>> {
        let n = self.vertices.len();
        if n == 0 {
            return Some(Vec::new());
        }
        let ends: Vec<usize> = (0..n).filter(|&v| self.neighbors(v).len() <= 1).collect();
        if (0..n).any(|v| self.neighbors(v).len() > 2) {
            return None;
        }
        let mut order = vec![ends[0]];
        let mut prev = usize::MAX;
        let mut cur = ends[0];
        while let Some(next) = self.neighbors(cur).into_iter().find(|&w| w != prev) {
            prev = cur;
            cur = next;
            order.push(cur);
        }
        order.into_iter().map(|v| self.euler(v)).collect()
    }

    /// Removes `v`, reconnecting the given neighbors in a path.
    fn remove_and_join(&self, v: usize, join: &[usize]) -> PlumbingGraph {
        let remap = |w: usize| if w > v { w - 1 } else { w };
        let mut vertices = self.vertices.clone();
        vertices.remove(v);
        let mut edges: BTreeSet<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != v && b != v)
            .map(|&(a, b)| (remap(a), remap(b)))
            .collect();
        for pair in join.windows(2) {
            let (a, b) = (remap(pair[0]), remap(pair[1]));
            edges.insert((a.min(b), a.max(b)));
        }
        PlumbingGraph { vertices, edges }
    }
}

/// One blow-down: the first circle vertex with Euler number `±1` and at
/// most two neighbors, all of them circle vertices, is removed; each
/// neighbor's Euler number moves by `∓1` and the neighbors are joined.
/// Returns the graph unchanged when no such vertex exists.
pub fn blow_down(g: &PlumbingGraph) -> PlumbingGraph {
    for v in 0..g.vertices.len() {
        let Some(e @ (1 | -1)) = g.euler(v) else {
            continue;
        };
        let nbrs = g.neighbors(v);
        if nbrs.len() > 2 || nbrs.iter().any(|&w| g.euler(w).is_none()) {
            continue;
        }
        let mut out = g.clone();
        for &w in &nbrs {
            if let Vertex::Circle { euler } = &mut out.vertices[w] {
                *euler -= e;
            }
        }
        return out.remove_and_join(v, &nbrs);
    }
    g.clone()
}

/// Blows down until no `±1` vertex is left.
pub fn blow_down_all(g: &PlumbingGraph) -> PlumbingGraph {
    let mut cur = g.clone();
    loop {
        let next = blow_down(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Lens space bounded by a linear plumbing chain.
///
/// Evaluates the continued fraction as a fraction `N/D` from the far end,
/// `(N, D) ← (aN - D, N)`, which never divides. If a partial value is
/// `0` the naive fraction is undefined at that position; the result is
/// then confirmed on the chain simplified by blow-downs and noted.
pub fn chain_to_lens(eulers: &[i64]) -> Result<(Space, Vec<String>), PlumbingError> {
    if eulers.is_empty() {
        return Err(PlumbingError::EmptyChain);
    }
    let (space, undefined_at) = eval_fraction(eulers)?;
    let mut notes = Vec::new();
    if let Some(pos) = undefined_at {
        let simplified = simplify_chain(eulers);
        let confirmed = match simplified.as_slice() {
            [] => Space::S3.normalize(),
            _ => match eval_fraction(&simplified)? {
                (s, None) => s,
                (_, Some(_)) => {
                    return Err(PlumbingError::Irreducible { chain: simplified });
                }
            },
        };
        if !lens_equivalent(&space, &confirmed) {
            return Err(PlumbingError::Irreducible { chain: simplified });
        }
        notes.push(format!(
            "continued fraction undefined at position {pos}; blow-downs give {simplified:?} = {confirmed}"
        ));
    }
    Ok((space, notes))
}

/// Fraction evaluation, with the 1-based position where a naive
/// evaluation would divide by zero.
fn eval_fraction(eulers: &[i64]) -> Result<(Space, Option<usize>), PlumbingError> {
    let overflow = || PlumbingError::Overflow(eulers.to_vec());
    let (mut n, mut d): (i64, i64) = (1, 0);
    let mut undefined_at = None;
    for (i, &e) in eulers.iter().enumerate().rev() {
        if n == 0 && undefined_at.is_none() {
            undefined_at = Some(i + 1);
        }
        let next = (-e)
            .checked_mul(n)
            .and_then(|x| x.checked_sub(d))
            .ok_or_else(overflow)?;
        (n, d) = (next, n);
    }
    Ok((Space::lens(n, d), undefined_at))
}

/// Applies blow-downs and removes `0` vertices until neither applies.
///
/// An interior `0` merges its neighbors `a, 0, b → a+b`; a `0` at an end
/// is removed together with its neighbor. Every surviving entry has
/// absolute value at least 2, so the continued fraction of the result
/// is always defined.
pub fn simplify_chain(eulers: &[i64]) -> Vec<i64> {
    let mut chain = eulers.to_vec();
    while chain.len() > 1 {
        let g = PlumbingGraph::chain(&chain);
        let next = blow_down(&g);
        if next != g {
            chain = next.as_chain().expect("blow-down keeps chains linear");
            continue;
        }
        let Some(i) = chain.iter().position(|&e| e == 0) else {
            break;
        };
        if i > 0 && i + 1 < chain.len() {
            let merged = chain[i - 1] + chain[i + 1];
            chain.splice(i - 1..=i + 1, [merged]);
        } else if i == 0 {
            chain.drain(0..2);
        } else {
            chain.truncate(i - 1);
        }
    }
    chain
}

/// Rewrites a small graph of 3-sphere bundle and 5-dimensional circle
/// bundle vertices to a normal form, or evaluates a linear chain of
/// circle bundles over S².
pub fn evaluate(g: &PlumbingGraph) -> Result<Space, PlumbingError> {
    if let Some(chain) = g.as_chain() {
        return chain_to_lens(&chain).map(|(s, _)| s);
    }
    let unsupported = || {
        PlumbingError::Unsupported(
            "only a sphere bundle alone or plumbed with one of S(L_can), S(L_Y)".to_string(),
        )
    };
    match g.vertices.as_slice() {
        [Vertex::Sphere3 { degrees }] => Ok(Space::SphereBundle3 { sum: degrees.sum() }),
        [a, b] => {
            let (degrees, other) = match (a, b) {
                (Vertex::Sphere3 { degrees }, o) | (o, Vertex::Sphere3 { degrees }) => (degrees, o),
                _ => return Err(unsupported()),
            };
            let out = match other {
                Vertex::Canonical => plumb_with_canonical(degrees),
                Vertex::OrbiLY { attach } => plumb_with_ly(degrees, *attach)?,
                _ => return Err(unsupported()),
            };
            Ok(Space::SphereBundle3 { sum: out.sum() })
        }
        _ => Err(unsupported()),
    }
}

/// `S(O(k)⊕O(m)) ⋈ S(L_can) = S(O(k+1)⊕O(m+1))`.
pub fn plumb_with_canonical(b: &Rank2Bundle) -> Rank2Bundle {
    b.tensor_line(1)
}

/// Sign of the extra twist on the first factor when plumbing with `S(L_Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrientationConvention {
    AddOne,
    SubtractOne,
}

impl OrientationConvention {
    fn sign(self) -> i64 {
        match self {
            OrientationConvention::AddOne => 1,
            OrientationConvention::SubtractOne => -1,
        }
    }
}

/// `S(O(k)⊕O(m)) ⋈ S(L_Y) = S(O(k+2)⊕O(m+1))` along a regular fiber.
pub fn plumb_with_ly(b: &Rank2Bundle, attach: Attach) -> Result<Rank2Bundle, PlumbingError> {
    plumb_with_ly_convention(b, attach, OrientationConvention::AddOne)
}

/// The same plumbing with an explicit choice of the orientation sign;
/// the result is `plumb_with_canonical` of the first factor twisted by it.
pub fn plumb_with_ly_convention(
    b: &Rank2Bundle,
    attach: Attach,
    convention: OrientationConvention,
) -> Result<Rank2Bundle, PlumbingError> {
    if attach == Attach::Singular {
        return Err(PlumbingError::SingularFiber);
    }
    Ok(plumb_with_canonical(&b.twist_first(convention.sign())))
}

/// Tensoring with the tautological line `O(-1)` of the attaching parameter.
pub fn twist_by_attaching(b: &Rank2Bundle) -> Rank2Bundle {
    b.tensor_line(-1)
}

/// Recognizes `S(O(k)⊕O(m))` with `k + m = -1` as the pullback of the
/// canonical circle bundle of CP² over the blow-down `CP²#-CP² → CP²`.
///
/// The total space is a circle bundle over the Hirzebruch surface whose
/// sections `S₋`, `S₊` have self-intersections `∓1`; these are matched
/// with `E` and `L` and the Euler numbers are checked against
/// `c₁(L_can) = -3L` pulled back, restricted appropriately.
pub fn identify_pullback_over_blowdown(b: &Rank2Bundle) -> Result<Space, PlumbingError> {
    if b.sum() != -1 {
        return Err(PlumbingError::WrongSum(*b));
    }
    let (k, m) = b.with_trivial_second().degrees;
    // P(O(k)⊕C) has sections S₋, S₊ of square k and -k; the circle
    // bundle restricts to each with the degree of the matching factor.
    let data = PullbackData {
        sum: k + m,
        euler_s_minus: m,
        euler_s_plus: k,
        euler_fiber: -1,
    };
    let s_minus = H2Class::new(RuledSurface::Nontrivial, 0, 1);
    let s_plus = H2Class::new(RuledSurface::Nontrivial, 1, 0);
    let fiber = RuledSurface::Nontrivial.fiber();
    let pulled_euler = H2Class::new(RuledSurface::Nontrivial, -1, 0);
    let expect = |c: &H2Class| intersect(&pulled_euler, c).expect("same surface");
    let square = |c: &H2Class| intersect(c, c).expect("same surface");
    let checks = [
        ("S- square", square(&s_minus), k),
        ("S+ square", square(&s_plus), -k),
        ("euler over S-", expect(&s_minus), data.euler_s_minus),
        ("euler over S+", expect(&s_plus), data.euler_s_plus),
        ("euler over fiber", expect(&fiber), data.euler_fiber),
    ];
    for (what, want, got) in checks {
        if want != got {
            return Err(PlumbingError::Inconsistent(format!(
                "{what}: intersection form gives {want}, bundle gives {got}"
            )));
        }
    }
    Ok(Space::BlowdownPullback(data))
}

/// Collapsing the circles over the exceptional divisor turns the pullback
/// back into `S(L_can) → CP²`, the 5-sphere.
pub fn collapse_exceptional(s: &Space) -> Result<Space, PlumbingError> {
    match s {
        Space::BlowdownPullback(d) if d.euler_s_minus == 0 => Ok(Space::S5),
        other => Err(PlumbingError::NotPullback(*other)),
    }
}

/// Circle bundle of a line bundle over S², as a lens space.
pub fn circle_bundle(l: &LineBundle) -> Result<Space, PlumbingError> {
    let euler = l
        .degree()
        .ok_or_else(|| PlumbingError::Unsupported(format!("circle bundle over {}", l.base())))?;
    Ok(Space::CircleBundle { euler }.normalize())
}

/// Inverse image in `S(L_can)` of a conic: the circle bundle of
/// `L_can` restricted to a degree-2 curve.
pub fn conic_sublink() -> Space {
    let line = H2Class::new(RuledSurface::Nontrivial, 1, 0);
    let euler = intersect(&-line, &line.scale(2)).expect("same surface");
    Space::CircleBundle { euler }.normalize()
}

/// Link of `J_{k+1}` in the closure of `J_k` on the product surface.
pub fn link_adjacent(k: i64) -> Result<Space, PlumbingError> {
    if k < 1 {
        return Err(PlumbingError::BadIndex(k));
    }
    circle_bundle(&gluing_bundle(k)?)
}

/// One step of a link computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: String,
    pub rule: String,
    pub result: String,
}

impl TraceStep {
    fn new(step: &str, rule: &str, result: impl fmt::Display) -> Self {
        TraceStep {
            step: step.to_string(),
            rule: rule.to_string(),
            result: result.to_string(),
        }
    }
}

/// Result of the link computation for `J_2` in the closure of `J_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link20 {
    pub v2: Rank2Bundle,
    pub twisted: Rank2Bundle,
    pub plumbed: Rank2Bundle,
    /// `L_Z`, the link of the two-fiber stratum.
    pub link_z: Space,
    pub link: Space,
    /// Circle bundles over the two sections after twisting, plumbed with
    /// the corresponding pieces of `S(L_Y)`.
    pub r_plus: Space,
    pub r_minus: Space,
    /// Inverse image of a conic in the final `S⁵`.
    pub conic: Space,
    pub trace: Vec<TraceStep>,
}

pub fn link20_pipeline() -> Result<Link20, PlumbingError> {
    let v2 = v2_bundle();
    let twisted = twist_by_attaching(&v2);
    let ly = l_y_bundle();
    let plumbed = plumb_with_ly(&twisted, Attach::Regular)?;
    let link_z = identify_pullback_over_blowdown(&plumbed)?;
    let link = collapse_exceptional(&link_z)?;
    if link != ly.total_space {
        return Err(PlumbingError::Inconsistent(format!(
            "collapse gives {link}, S(L_Y) is {}",
            ly.total_space
        )));
    }
    // Each section piece is a circle bundle over S² plumbed with the
    // (-1)-circle bundle over the corresponding piece of Y.
    let (plus, minus) = twisted.degrees;
    let (r_plus, _) = chain_to_lens(&[plus, -1])?;
    let (r_minus, _) = chain_to_lens(&[minus, -1])?;
    let conic = conic_sublink();
    if !lens_equivalent(&r_plus, &conic) {
        return Err(PlumbingError::Inconsistent(format!(
            "R+ plumbing gives {r_plus}, conic preimage is {conic}"
        )));
    }
    let trace = vec![
        TraceStep::new("v2Bundle", "gluing bundle of two-fiber stratum", v2),
        TraceStep::new("twistByAttaching", "tautological twist of attaching parameter", twisted),
        TraceStep::new("plumbWithLY", "plumbing with S(L_Y) at a regular fiber", plumbed),
        TraceStep::new("identifyPullbackOverBlowdown", "blow-down pullback of S(L_can)", link_z),
        TraceStep::new("collapseExceptional", "collapse fibers over exceptional divisor", link),
    ];
    Ok(Link20 {
        v2,
        twisted,
        plumbed,
        link_z,
        link,
        r_plus,
        r_minus,
        conic,
        trace,
    })
}

/// Link of the next stratum on `CP²#-CP²`: the stated `L(4k+1, 1)`
/// together with the circle bundle of Euler number `(E-kF)² + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NontrivialLink {
    pub stated: Space,
    pub derived: Space,
}

impl NontrivialLink {
    pub fn agrees(&self) -> bool {
        lens_equivalent(&self.stated, &self.derived)
    }
}

pub fn link_nontrivial(k: i64) -> Result<NontrivialLink, PlumbingError> {
    if k < 1 {
        return Err(PlumbingError::BadIndex(k));
    }
    let stated = Space::lens(4 * k + 1, 1);
    let class = RuledSurface::Nontrivial
        .stratum_class(k + 1)
        .map_err(|e| PlumbingError::Unsupported(e.to_string()))?;
    let square = intersect(&class, &class).expect("same surface");
    let derived = Space::CircleBundle { euler: square + 2 }.normalize();
    Ok(NontrivialLink { stated, derived })
}

/// Parses `"e1,e2,..."`.
pub fn parse_chain(s: &str) -> Result<Vec<i64>, PlumbingError> {
    let chain: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| PlumbingError::ParseChain(s.to_string()))?;
    if chain.is_empty() {
        return Err(PlumbingError::EmptyChain);
    }
    Ok(chain)
}
