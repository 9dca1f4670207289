//! Combinatorial shadows of genus-zero stable maps.
//!
//! A [`StableTree`] records the dual tree of a nodal domain together with
//! the homology class of each component and its labelled marked points.
//! The enumeration side works with [`BranchShape`]s: rooted trees of
//! fiber degrees describing how one branch (the part of the domain mapped
//! into a single fiber) has degenerated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::{H2Class, RuledSurface};

/// Default bound on the number of nodes inside one branch.
pub const DEFAULT_BRANCH_DEPTH: u32 = 3;

/// Label reserved for the marked point `z0` in pointed enumerations.
pub const POINTED_MARK: u32 = 0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree has no components")]
    Empty,
    #[error("edge ({0}, {1}) refers to a missing component")]
    BadEdge(usize, usize),
    #[error("self-loop at component {0}")]
    SelfLoop(usize),
    #[error("graph is not a tree: {vertices} vertices, {edges} edges, connected = {connected}")]
    NotATree {
        vertices: usize,
        edges: usize,
        connected: bool,
    },
    #[error("stem index {0} out of range")]
    BadStem(usize),
    #[error("stem class {0} is not of the form A-mF with m >= 0")]
    StemClass(H2Class),
    #[error("marked point {0} appears twice")]
    DuplicateMark(u32),
    #[error("components live on different surfaces")]
    MixedSurfaces,
}

/// One irreducible component of the domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub class: H2Class,
    /// Labels of the marked points carried by this component.
    pub marked: Vec<u32>,
    /// Declared order of a cyclic reparametrization symmetry of the map on
    /// this component (for example 2 for `z ↦ z²`). Only counted by
    /// [`isotropy_with_declared_factors`], and only on fiber components of
    /// degree at least 2.
    pub cyclic_factor: u32,
}

impl Component {
    pub fn new(class: H2Class) -> Self {
        Component {
            class,
            marked: Vec::new(),
            cyclic_factor: 1,
        }
    }

    pub fn ghost(surface: RuledSurface) -> Self {
        Component::new(H2Class::zero(surface))
    }

    /// A component mapped with degree `d` onto a fiber.
    pub fn fiber(surface: RuledSurface, d: u32) -> Self {
        Component::new(surface.fiber().scale(d as i64))
    }

    pub fn with_marks(mut self, marks: impl IntoIterator<Item = u32>) -> Self {
        self.marked.extend(marks);
        self.marked.sort_unstable();
        self
    }

    pub fn with_cyclic_factor(mut self, n: u32) -> Self {
        self.cyclic_factor = n.max(1);
        self
    }

    pub fn is_ghost(&self) -> bool {
        self.class.is_zero()
    }

    /// `Some(d)` when the class is `d·F`.
    pub fn fiber_degree(&self) -> Option<u32> {
        let f = self.class.surface.fiber();
        let i = f.coeffs.iter().position(|&c| c != 0)?;
        let d = self.class.coeffs[i] / f.coeffs[i];
        (d >= 0 && f.scale(d) == self.class).then_some(d as u32)
    }
}

/// Tree of components of a genus-zero nodal domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableTree {
    components: Vec<Component>,
    edges: BTreeSet<(usize, usize)>,
    stem: Option<usize>,
}

impl StableTree {
    pub fn new(
        components: Vec<Component>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        stem: Option<usize>,
    ) -> Result<Self, TreeError> {
        let n = components.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let surface = components[0].class.surface;
        if components.iter().any(|c| c.class.surface != surface) {
            return Err(TreeError::MixedSurfaces);
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(TreeError::BadEdge(a, b));
            }
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let tree = StableTree {
            components,
            edges: set,
            stem,
        };
        let connected = tree.is_connected();
        if !connected || tree.edges.len() != n - 1 {
            return Err(TreeError::NotATree {
                vertices: n,
                edges: tree.edges.len(),
                connected,
            });
        }
        if let Some(s) = stem {
            let c = tree.components.get(s).ok_or(TreeError::BadStem(s))?;
            let [a, b] = c.class.coeffs;
            if c.class.surface != RuledSurface::Trivial || a != 1 || b > 0 {
                return Err(TreeError::StemClass(c.class));
            }
        }
        let mut seen = BTreeSet::new();
        for m in tree.components.iter().flat_map(|c| &c.marked) {
            if !seen.insert(*m) {
                return Err(TreeError::DuplicateMark(*m));
            }
        }
        Ok(tree)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn stem(&self) -> Option<usize> {
        self.stem
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn total_class(&self) -> H2Class {
        let surface = self.components[0].class.surface;
        self.components
            .iter()
            .fold(H2Class::zero(surface), |acc, c| {
                acc.checked_add(c.class).expect("single surface")
            })
    }

    /// Adds a marked point to component `v`.
    pub fn add_marked_point(&mut self, v: usize, label: u32) -> Result<(), TreeError> {
        if self.components.iter().any(|c| c.marked.contains(&label)) {
            return Err(TreeError::DuplicateMark(label));
        }
        let c = &mut self.components[v];
        c.marked.push(label);
        c.marked.sort_unstable();
        Ok(())
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.components.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; adj.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Vertex label used by automorphism counting.
    fn vertex_key(&self, v: usize) -> String {
        let c = &self.components[v];
        format!(
            "{}:{}:{:?}:{}",
            c.class.coeffs[0],
            c.class.coeffs[1],
            c.marked,
            u8::from(self.stem == Some(v))
        )
    }
}

/// Every constant component has at least three special points.
pub fn is_stable(t: &StableTree) -> bool {
    (0..t.len()).all(|v| {
        let c = &t.components[v];
        !c.is_ghost() || t.degree(v) + c.marked.len() >= 3
    })
}

/// Order of the group of label-preserving automorphisms of the tree that
/// fix the stem together with each of its attaching points, and every
/// marked point.
///
/// This is the combinatorial bound for the reparametrization group of a
/// stable map with this shadow.
pub fn combinatorial_isotropy(t: &StableTree) -> u64 {
    let adj = t.adjacency();
    let keys: Vec<String> = (0..t.len()).map(|v| t.vertex_key(v)).collect();
    let ctx = AutCtx { adj: &adj, keys: &keys };

    if let Some(s) = t.stem {
        // Branches sit at distinct points of the embedded stem.
        return adj[s].iter().map(|&c| ctx.rooted(c, s).1).product();
    }
    if let Some(v) = (0..t.len()).find(|&v| !t.components[v].marked.is_empty()) {
        return ctx.rooted(v, usize::MAX).1;
    }
    match tree_centers(&adj).as_slice() {
        [c] => ctx.rooted(*c, usize::MAX).1,
        [a, b] => {
            let (fa, na) = ctx.rooted(*a, *b);
            let (fb, nb) = ctx.rooted(*b, *a);
            na * nb * if fa == fb { 2 } else { 1 }
        }
        _ => unreachable!("a tree has one or two centers"),
    }
}

/// [`combinatorial_isotropy`] times the declared cyclic factors of the
/// multiply covered fiber components.
pub fn isotropy_with_declared_factors(t: &StableTree) -> u64 {
    let declared: u64 = t
        .components
        .iter()
        .filter(|c| c.fiber_degree().is_some_and(|d| d >= 2))
        .map(|c| c.cyclic_factor as u64)
        .product();
    combinatorial_isotropy(t) * declared
}

struct AutCtx<'a> {
    adj: &'a [Vec<usize>],
    keys: &'a [String],
}

impl AutCtx<'_> {
    /// Canonical form of the subtree at `v` (away from `parent`) and the
    /// number of its automorphisms fixing `v`.
    fn rooted(&self, v: usize, parent: usize) -> (String, u64) {
        let mut children: Vec<(String, u64)> = self.adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| self.rooted(w, v))
            .collect();
        children.sort();
        let mut count = 1u64;
        let mut groups: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
        for (form, n) in &children {
            let g = groups.entry(form.as_str()).or_insert((0, *n));
            g.0 += 1;
        }
        for (mult, n) in groups.values() {
            count *= factorial(*mult) * n.pow(*mult as u32);
        }
        let form = format!(
            "[{}|{}]",
            self.keys[v],
            children
                .iter()
                .map(|c| c.0.as_str())
                .collect::<Vec<_>>()
                .join(",")
        );
        (form, count)
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn tree_centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// Unordered decomposition `d₁ + … + d_p` of a total fiber degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiberDecomposition {
    parts: Vec<u32>,
}

impl FiberDecomposition {
    /// Parts are stored in non-increasing order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Option<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return None;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(FiberDecomposition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// All partitions of `n`, each once, in reverse lexicographic order.
pub fn enumerate_decompositions(n: i64) -> Vec<FiberDecomposition> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<FiberDecomposition>) {
        if rest == 0 {
            out.push(FiberDecomposition { parts: cur.clone() });
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 1 {
        let n = n as u32;
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Real dimension `4(d-1)` of degree-`d` stable maps into S² with one
/// marked point sent to a fixed point.
pub fn branch_moduli_dim(d: u32) -> i64 {
    4 * (d as i64 - 1)
}

/// `4n - 2p`: the stratum where every branch is irreducible.
pub fn top_stratum_dimension(d: &FiberDecomposition) -> i64 {
    4 * d.total() as i64 - 2 * d.len() as i64
}

/// Degeneration type of one branch: a rooted tree of fiber degrees. The
/// root is the component meeting the stem.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchShape {
    pub degree: u32,
    /// Carries the marked point `z0` (pointed enumeration only).
    pub marked: bool,
    pub children: Vec<BranchShape>,
}

impl BranchShape {
    pub fn irreducible(d: u32) -> Self {
        BranchShape {
            degree: d,
            marked: false,
            children: Vec::new(),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.degree + self.children.iter().map(BranchShape::total_degree).sum::<u32>()
    }

    /// Number of nodes inside the branch.
    pub fn nodes(&self) -> u32 {
        self.children.iter().map(|c| 1 + c.nodes()).sum()
    }

    pub fn has_mark(&self) -> bool {
        self.marked || self.children.iter().any(BranchShape::has_mark)
    }

    /// `4(d-1) - 2·nodes`.
    pub fn dimension(&self) -> i64 {
        branch_moduli_dim(self.total_degree()) - 2 * self.nodes() as i64
    }

    fn canonical(mut self) -> Self {
        self.children = self.children.into_iter().map(Self::canonical).collect();
        self.children.sort();
        self
    }
}

impl fmt::Display for BranchShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.degree)?;
        if self.marked {
            f.write_str("*")?;
        }
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Branch shapes of total degree `d` with at most `max_nodes` nodes.
///
/// With `pointed`, exactly one component carries `z0`. That component
/// may not be a ghost joined to the stem through ghosts only, since such
/// a ghost is mapped to the stem and `z0` is not.
pub fn branch_shapes(d: u32, max_nodes: u32, pointed: bool) -> Vec<BranchShape> {
    let mut gen = ShapeGen::default();
    gen.shapes(d, max_nodes, pointed, true)
}

#[derive(Default)]
struct ShapeGen {
    memo: BTreeMap<(u32, u32, bool, bool), Vec<BranchShape>>,
}

impl ShapeGen {
    /// `pinned`: a ghost here would be mapped to the attaching point on the stem.
    fn shapes(&mut self, d: u32, budget: u32, pointed: bool, pinned: bool) -> Vec<BranchShape> {
        let key = (d, budget, pointed, pinned);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut out = BTreeSet::new();
        for r in 0..=d {
            let rest = d - r;
            // marker on this component
            let mark_here: &[bool] = if pointed { &[true, false] } else { &[false] };
            for &here in mark_here {
                if here && pinned && r == 0 {
                    continue;
                }
                let marked_child = pointed && !here;
                for children in self.child_sets(rest, budget, marked_child, pinned && r == 0) {
                    let special = children.len() + 1 + usize::from(here);
                    if r == 0 && special < 3 {
                        continue;
                    }
                    out.insert(
                        BranchShape {
                            degree: r,
                            marked: here,
                            children,
                        }
                        .canonical(),
                    );
                }
            }
        }
        let v: Vec<BranchShape> = out.into_iter().collect();
        self.memo.insert(key, v.clone());
        v
    }

    /// Multisets of child subtrees with total degree `rest` using at most
    /// `budget` nodes (one per child plus their internal nodes).
    fn child_sets(
        &mut self,
        rest: u32,
        budget: u32,
        one_marked: bool,
        pinned: bool,
    ) -> Vec<Vec<BranchShape>> {
        if rest == 0 {
            return if one_marked { Vec::new() } else { vec![Vec::new()] };
        }
        if budget == 0 {
            return Vec::new();
        }
        let mut pool = Vec::new();
        for d in 1..=rest {
            pool.extend(self.shapes(d, budget - 1, false, pinned));
        }
        pool.sort();
        let mut out = Vec::new();
        if one_marked {
            let mut marked_pool = Vec::new();
            for d in 1..=rest {
                marked_pool.extend(self.shapes(d, budget - 1, true, pinned));
            }
            for m in marked_pool {
                let used = 1 + m.nodes();
                let left = rest - m.total_degree();
                for mut plain in multisets(&pool, left, budget - used) {
                    plain.push(m.clone());
                    out.push(plain);
                }
            }
        } else {
            out = multisets(&pool, rest, budget);
        }
        out
    }
}

fn multisets(pool: &[BranchShape], degree: u32, budget: u32) -> Vec<Vec<BranchShape>> {
    fn go(
        pool: &[BranchShape],
        start: usize,
        degree: u32,
        budget: u32,
        cur: &mut Vec<BranchShape>,
        out: &mut Vec<Vec<BranchShape>>,
    ) {
        if degree == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            let s = &pool[i];
            let cost = 1 + s.nodes();
            if s.total_degree() <= degree && cost <= budget {
                cur.push(s.clone());
                go(pool, i, degree - s.total_degree(), budget - cost, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(pool, 0, degree, budget, &mut Vec::new(), &mut out);
    out
}

/// One stratum of the fiber of stable maps over a fixed stem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumDescriptor {
    pub decomposition: FiberDecomposition,
    /// One shape per part, aligned with `decomposition.parts()`.
    pub branch_shapes: Vec<BranchShape>,
    pub dimension: i64,
    pub isotropy_order: u64,
    /// Index of the branch carrying `z0`, for pointed strata.
    pub marked_branch: Option<usize>,
}

impl StratumDescriptor {
    /// Realizes the descriptor with stem class `A - mF`.
    pub fn to_tree(&self, m: i64) -> StableTree {
        let surface = RuledSurface::Trivial;
        let mut comps = vec![Component::new(H2Class::section(m))];
        let mut edges = Vec::new();
        fn add(
            s: &BranchShape,
            parent: usize,
            surface: RuledSurface,
            comps: &mut Vec<Component>,
            edges: &mut Vec<(usize, usize)>,
        ) {
            let mut c = Component::fiber(surface, s.degree);
            if s.marked {
                c = c.with_marks([POINTED_MARK]);
            }
            comps.push(c);
            let v = comps.len() - 1;
            edges.push((parent, v));
            for ch in &s.children {
                add(ch, v, surface, comps, edges);
            }
        }
        for s in &self.branch_shapes {
            add(s, 0, surface, &mut comps, &mut edges);
        }
        StableTree::new(comps, edges, Some(0)).expect("shapes build trees")
    }

    pub fn to_record(&self) -> StratumRecord {
        StratumRecord {
            parts: self.decomposition.parts().to_vec(),
            shape: self.branch_shapes.iter().map(ToString::to_string).collect(),
            dim: self.dimension,
            isotropy: self.isotropy_order,
            marked_branch: self.marked_branch,
        }
    }
}

/// JSON form of a [`StratumDescriptor`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRecord {
    pub parts: Vec<u32>,
    pub shape: Vec<String>,
    pub dim: i64,
    pub isotropy: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_branch: Option<usize>,
}

fn shape_multisets(shapes: &[BranchShape], count: usize) -> Vec<Vec<BranchShape>> {
    fn go(
        shapes: &[BranchShape],
        start: usize,
        left: usize,
        cur: &mut Vec<BranchShape>,
        out: &mut Vec<Vec<BranchShape>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..shapes.len() {
            cur.push(shapes[i].clone());
            go(shapes, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(shapes, 0, count, &mut Vec::new(), &mut out);
    out
}

fn cartesian(groups: Vec<Vec<Vec<BranchShape>>>) -> Vec<Vec<BranchShape>> {
    groups.into_iter().fold(vec![Vec::new()], |acc, choices| {
        acc.iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.extend(c.iter().cloned());
                    v
                })
            })
            .collect()
    })
}

fn group_parts(d: &FiberDecomposition) -> Vec<(u32, usize)> {
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for &p in d.parts() {
        match groups.last_mut() {
            Some((v, c)) if *v == p => *c += 1,
            _ => groups.push((p, 1)),
        }
    }
    groups
}

fn descriptor(
    decomposition: &FiberDecomposition,
    shapes: Vec<BranchShape>,
    marked_branch: Option<usize>,
    n: u32,
) -> StratumDescriptor {
    let moving = decomposition.len() as i64 - i64::from(marked_branch.is_some());
    let dimension = shapes.iter().map(BranchShape::dimension).sum::<i64>() + 2 * moving;
    let mut d = StratumDescriptor {
        decomposition: decomposition.clone(),
        branch_shapes: shapes,
        dimension,
        isotropy_order: 1,
        marked_branch,
    };
    d.isotropy_order = combinatorial_isotropy(&d.to_tree(n as i64));
    d
}

/// Strata of the space of stable maps `stem ∪ branches` with total branch
/// degree `n`, up to `max_branch_depth` nodes per branch.
///
/// Each branch is attached at a moving point of the stem (2 real
/// dimensions) and contributes `4(d-1) - 2·nodes`.
pub fn enumerate_strata(n: i64, max_branch_depth: u32) -> Vec<StratumDescriptor> {
    let mut out = Vec::new();
    let mut gen = ShapeGen::default();
    for dec in enumerate_decompositions(n) {
        let groups = group_parts(&dec)
            .into_iter()
            .map(|(d, c)| shape_multisets(&gen.shapes(d, max_branch_depth, false, true), c))
            .collect();
        for shapes in cartesian(groups) {
            out.push(descriptor(&dec, shapes, None, n as u32));
        }
    }
    out
}

/// Pointed variant: total class `A`, stem `A - mF`, one marked point `z0`
/// sent to a fixed point off the stem.
///
/// The branch containing `z0` lies in the fixed fiber through that point,
/// so it has no moving attaching point. The strata list here is built by
/// the same rules and is an inference, not a quoted result.
pub fn enumerate_pointed_strata(m: i64, max_branch_depth: u32) -> Vec<StratumDescriptor> {
    let mut out = Vec::new();
    let mut gen = ShapeGen::default();
    for dec in enumerate_decompositions(m) {
        let groups = group_parts(&dec);
        for (gi, &(dm, _)) in groups.iter().enumerate() {
            let mut choices = Vec::new();
            let mut marked_index = 0;
            for (j, &(d, c)) in groups.iter().enumerate() {
                let plain = gen.shapes(d, max_branch_depth, false, true);
                if j == gi {
                    let marked = gen.shapes(dm, max_branch_depth, true, true);
                    let mut opts = Vec::new();
                    for mk in &marked {
                        for mut rest in shape_multisets(&plain, c - 1) {
                            rest.insert(0, mk.clone());
                            opts.push(rest);
                        }
                    }
                    choices.push(opts);
                } else {
                    if j < gi {
                        marked_index += c;
                    }
                    choices.push(shape_multisets(&plain, c));
                }
            }
            for shapes in cartesian(choices) {
                out.push(descriptor(&dec, shapes, Some(marked_index), m as u32));
            }
        }
    }
    out
}
