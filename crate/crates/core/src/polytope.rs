//! Simple polytopes given by vertex–facet incidence.
//!
//! A vertex is identified with the sorted list of the `n` facets that meet
//! there. Two vertices span an edge when they share `n - 1` facets.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlinalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("polytopes of dimension 0 are not supported")]
    ZeroDimension,
    #[error("invalid polytope: {0}")]
    Invalid(ValidationReport),
    #[error("polytope has no coordinates; supply an explicit vertex order")]
    MissingCoords,
    #[error("functional has {got} entries, polytope dimension is {expected}")]
    FunctionalLength { expected: usize, got: usize },
    #[error("functional is not generic: vertices {0} and {1} have equal height")]
    Tie(usize, usize),
    #[error("vertex order is not a permutation of 0..{0}")]
    BadOrder(usize),
    #[error("order property fails: vertex {lower} lies on the ascending face of vertex {vertex}")]
    OrderProperty { vertex: usize, lower: usize },
}

/// Outcome of a single named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Offending vertex or facet indices, depending on the check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub culprits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub(crate) fn push(&mut self, name: &str, culprits: Vec<usize>, detail: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: culprits.is_empty() && detail.is_none(),
            culprits,
            detail,
        });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let failed: Vec<String> = self
            .failures()
            .map(|c| {
                let mut s = c.name.clone();
                if !c.culprits.is_empty() {
                    s.push_str(&format!(" {:?}", c.culprits));
                }
                if let Some(d) = &c.detail {
                    s.push_str(&format!(" ({d})"));
                }
                s
            })
            .collect();
        if failed.is_empty() {
            write!(f, "all checks passed")
        } else {
            write!(f, "failed: {}", failed.join("; "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplePolytope {
    dim: usize,
    facet_count: usize,
    vertices: Vec<Vec<usize>>,
    coords: Option<Vec<Vec<Rational>>>,
}

/// A face given by the facets containing it, with its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub facet_set: Vec<usize>,
    pub vertex_set: Vec<usize>,
}

impl Face {
    pub fn is_empty(&self) -> bool {
        self.vertex_set.is_empty()
    }

    pub fn codim(&self) -> usize {
        self.facet_set.len()
    }
}

impl SimplePolytope {
    /// Builds and validates a polytope; vertex facet lists are sorted.
    pub fn new(
        dim: usize,
        facet_count: usize,
        vertices: Vec<Vec<usize>>,
        coords: Option<Vec<Vec<Rational>>>,
    ) -> Result<Self, PolytopeError> {
        if dim == 0 {
            return Err(PolytopeError::ZeroDimension);
        }
        let p = Self::unchecked(dim, facet_count, vertices, coords);
        let report = validate_polytope(&p);
        if report.passed() {
            Ok(p)
        } else {
            Err(PolytopeError::Invalid(report))
        }
    }

    /// No validation beyond sorting each vertex's facet list.
    pub fn unchecked(
        dim: usize,
        facet_count: usize,
        mut vertices: Vec<Vec<usize>>,
        coords: Option<Vec<Vec<Rational>>>,
    ) -> Self {
        for v in &mut vertices {
            v.sort_unstable();
        }
        SimplePolytope { dim, facet_count, vertices, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_count(&self) -> usize {
        self.facet_count
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    /// Facets meeting at vertex `w`, ascending.
    pub fn vertex(&self, w: usize) -> &[usize] {
        &self.vertices[w]
    }

    pub fn coords(&self) -> Option<&[Vec<Rational>]> {
        self.coords.as_deref()
    }

    pub fn vertex_of_facets(&self, facets: &[usize]) -> Option<usize> {
        let mut key = facets.to_vec();
        key.sort_unstable();
        self.vertices.iter().position(|v| *v == key)
    }

    /// True if some vertex lies on every facet in `facets`.
    pub fn is_face(&self, facets: &[usize]) -> bool {
        self.vertices.iter().any(|v| facets.iter().all(|f| v.binary_search(f).is_ok()))
    }

    pub fn face(&self, facets: &[usize]) -> Face {
        let mut facet_set = facets.to_vec();
        facet_set.sort_unstable();
        facet_set.dedup();
        let vertex_set = (0..self.vertices.len())
            .filter(|&w| facet_set.iter().all(|f| self.vertices[w].binary_search(f).is_ok()))
            .collect();
        Face { facet_set, vertex_set }
    }

    /// The other endpoint of the edge at `w` that leaves facet `f` and stays
    /// on the remaining facets of `w`.
    pub fn neighbor_across(&self, w: usize, f: usize) -> Option<usize> {
        let rest: Vec<usize> = self.vertices[w].iter().copied().filter(|&g| g != f).collect();
        (0..self.vertices.len()).find(|&u| u != w && rest.iter().all(|g| self.vertices[u].binary_search(g).is_ok()))
    }

    pub fn neighbors(&self, w: usize) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&u| u != w && self.shared(w, u) + 1 == self.dim).collect()
    }

    /// Edges as vertex pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let m = self.vertices.len();
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if self.shared(a, b) + 1 == self.dim {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn shared(&self, a: usize, b: usize) -> usize {
        self.vertices[a].iter().filter(|f| self.vertices[b].binary_search(f).is_ok()).count()
    }

    /// Applies a facet relabeling: facet `f` becomes `new_index[f]`.
    pub(crate) fn relabel_facets(&self, new_index: &[usize]) -> SimplePolytope {
        let vertices = self.vertices.iter().map(|v| v.iter().map(|&f| new_index[f]).collect()).collect();
        SimplePolytope::unchecked(self.dim, self.facet_count, vertices, self.coords.clone())
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// The standard simplex. Facet `i > 0` is `{x_i = 0}`, facet 0 is opposite
/// the origin; vertex 0 is the origin and vertex `i` is `e_i`.
pub fn simplex(n: usize) -> Result<SimplePolytope, PolytopeError> {
    if n == 0 {
        return Err(PolytopeError::ZeroDimension);
    }
    let vertices = (0..=n).map(|i| (0..=n).filter(|&f| f != i).collect()).collect();
    let coords = (0..=n).map(|i| (1..=n).map(|k| int(i64::from(k == i))).collect()).collect();
    SimplePolytope::new(n, n + 1, vertices, Some(coords))
}

/// The cube `I^n`. Facet `2(i-1)+s` is `{x_i = s}`; vertex `k` has
/// `x_i` equal to bit `i-1` of `k`.
pub fn cube(n: usize) -> Result<SimplePolytope, PolytopeError> {
    if n == 0 {
        return Err(PolytopeError::ZeroDimension);
    }
    let m = 1usize << n;
    let bit = |k: usize, i: usize| (k >> i) & 1;
    let vertices = (0..m).map(|k| (0..n).map(|i| 2 * i + bit(k, i)).collect()).collect();
    let coords = (0..m).map(|k| (0..n).map(|i| int(bit(k, i) as i64)).collect()).collect();
    SimplePolytope::new(n, 2 * n, vertices, Some(coords))
}

/// Flat index of the cube facet `{x_i = s}` for `1 <= i <= n`.
pub fn cube_facet(i: usize, s: usize) -> usize {
    2 * (i - 1) + s
}

/// A convex `k`-gon with facets in cyclic order; vertex `i` is the meet of
/// facets `i` and `i + 1 (mod k)`, placed at `(i, i^2)`.
pub fn polygon(k: usize) -> Result<SimplePolytope, PolytopeError> {
    if k < 3 {
        return Err(PolytopeError::Invalid(ValidationReport {
            checks: vec![Check {
                name: "dimension".into(),
                passed: false,
                culprits: vec![],
                detail: Some(format!("a polygon needs at least 3 sides, got {k}")),
            }],
        }));
    }
    let vertices = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    let coords = (0..k).map(|i| vec![int(i as i64), int((i * i) as i64)]).collect();
    SimplePolytope::new(2, k, vertices, Some(coords))
}

/// Cartesian product; facets of `q` are shifted past those of `p` and
/// vertex `(i, j)` has index `i * m_q + j`.
pub fn product(p: &SimplePolytope, q: &SimplePolytope) -> Result<SimplePolytope, PolytopeError> {
    if p.dim == 0 || q.dim == 0 {
        return Err(PolytopeError::ZeroDimension);
    }
    for x in [p, q] {
        let report = validate_polytope(x);
        if !report.passed() {
            return Err(PolytopeError::Invalid(report));
        }
    }
    let shift = p.facet_count;
    let mut vertices = Vec::new();
    let mut coords = Vec::new();
    for (i, a) in p.vertices.iter().enumerate() {
        for (j, b) in q.vertices.iter().enumerate() {
            vertices.push(a.iter().copied().chain(b.iter().map(|f| f + shift)).collect());
            if let (Some(pc), Some(qc)) = (&p.coords, &q.coords) {
                coords.push(pc[i].iter().chain(&qc[j]).cloned().collect());
            }
        }
    }
    let coords = (p.coords.is_some() && q.coords.is_some()).then_some(coords);
    SimplePolytope::new(p.dim + q.dim, p.facet_count + q.facet_count, vertices, coords)
}

pub fn validate_polytope(p: &SimplePolytope) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (n, d, m) = (p.dim, p.facet_count, p.vertices.len());

    let dim_detail = if n == 0 {
        Some("dimension must be positive".to_string())
    } else if d < n {
        Some(format!("{d} facets is fewer than the dimension {n}"))
    } else if m == 0 {
        Some("no vertices".to_string())
    } else {
        None
    };
    report.push("dimension", vec![], dim_detail);

    let out_of_range: Vec<usize> = (0..m).filter(|&w| p.vertices[w].iter().any(|&f| f >= d)).collect();
    report.push("facet_range", out_of_range, None);

    let not_simple: Vec<usize> = (0..m)
        .filter(|&w| {
            let v = &p.vertices[w];
            v.len() != n || v.windows(2).any(|x| x[0] == x[1])
        })
        .collect();
    report.push("simplicity", not_simple, None);

    let mut seen = BTreeSet::new();
    let dups: Vec<usize> = (0..m).filter(|&w| !seen.insert(p.vertices[w].clone())).collect();
    report.push("distinct_vertices", dups, None);

    let used: BTreeSet<usize> = p.vertices.iter().flatten().copied().collect();
    let unused: Vec<usize> = (0..d).filter(|f| !used.contains(f)).collect();
    report.push("facet_coverage", unused, None);

    let bad_degree: Vec<usize> = (0..m).filter(|&w| p.neighbors(w).len() != n).collect();
    report.push("vertex_degree", bad_degree, None);

    let mut reached = vec![false; m];
    if m > 0 {
        let mut queue = VecDeque::from([0usize]);
        reached[0] = true;
        while let Some(w) = queue.pop_front() {
            for u in p.neighbors(w) {
                if !std::mem::replace(&mut reached[u], true) {
                    queue.push_back(u);
                }
            }
        }
    }
    let unreached: Vec<usize> = (0..m).filter(|&w| !reached[w]).collect();
    report.push("connected", unreached, None);

    if let Some(coords) = &p.coords {
        let bad: Vec<usize> = (0..m).filter(|&w| coords.get(w).is_none_or(|c| c.len() != n)).collect();
        let detail = (coords.len() != m).then(|| format!("{} coordinate rows for {m} vertices", coords.len()));
        report.push("coords_shape", bad, detail);
    }
    report
}

/// Inclusion-minimal facet sets with empty intersection, sorted.
///
/// Every minimal non-face is a face plus one facet, so it suffices to extend
/// each face by one facet and keep the sets all of whose maximal proper
/// subsets are faces.
pub fn minimal_nonfaces(p: &SimplePolytope) -> Vec<Vec<usize>> {
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for v in &p.vertices {
        for mask in 0u64..(1u64 << v.len()) {
            faces.insert((0..v.len()).filter(|&i| mask >> i & 1 == 1).map(|i| v[i]).collect());
        }
    }
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for face in &faces {
        for f in 0..p.facet_count {
            if face.binary_search(&f).is_ok() {
                continue;
            }
            let mut cand = face.clone();
            let pos = cand.binary_search(&f).unwrap_err();
            cand.insert(pos, f);
            if faces.contains(&cand) {
                continue;
            }
            let minimal = (0..cand.len()).all(|i| {
                let mut sub = cand.clone();
                sub.remove(i);
                faces.contains(&sub)
            });
            if minimal {
                out.insert(cand);
            }
        }
    }
    out.into_iter().collect()
}

/// A strict total order on the vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrder {
    order: Vec<usize>,
    heights: Vec<Rational>,
    position: Vec<usize>,
}

impl VertexOrder {
    /// An explicit order listing vertices from lowest to highest; heights
    /// are the positions.
    pub fn from_sequence(p: &SimplePolytope, order: Vec<usize>) -> Result<Self, PolytopeError> {
        let m = p.vertex_count();
        let mut position = vec![usize::MAX; m];
        if order.len() != m {
            return Err(PolytopeError::BadOrder(m));
        }
        for (k, &w) in order.iter().enumerate() {
            if w >= m || position[w] != usize::MAX {
                return Err(PolytopeError::BadOrder(m));
            }
            position[w] = k;
        }
        let heights = position.iter().map(|&k| int(k as i64)).collect();
        Ok(VertexOrder { order, heights, position })
    }

    /// Vertices from lowest to highest.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn heights(&self) -> &[Rational] {
        &self.heights
    }

    pub fn position(&self, w: usize) -> usize {
        self.position[w]
    }

    pub fn minimum(&self) -> usize {
        self.order[0]
    }

    pub fn maximum(&self) -> usize {
        *self.order.last().expect("nonempty order")
    }

    pub(crate) fn len(&self) -> usize {
        self.order.len()
    }
}

pub fn order_vertices(p: &SimplePolytope, functional: &[Rational]) -> Result<VertexOrder, PolytopeError> {
    let coords = p.coords().ok_or(PolytopeError::MissingCoords)?;
    if functional.len() != p.dim {
        return Err(PolytopeError::FunctionalLength { expected: p.dim, got: functional.len() });
    }
    let heights: Vec<Rational> =
        coords.iter().map(|c| c.iter().zip(functional).fold(Rational::zero(), |acc, (x, a)| acc + x * a)).collect();
    let mut order: Vec<usize> = (0..heights.len()).collect();
    order.sort_by(|&a, &b| heights[a].cmp(&heights[b]).then(a.cmp(&b)));
    if let Some(w) = order.windows(2).find(|w| heights[w[0]] == heights[w[1]]) {
        let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
        return Err(PolytopeError::Tie(a, b));
    }
    let mut position = vec![0; order.len()];
    for (k, &w) in order.iter().enumerate() {
        position[w] = k;
    }
    Ok(VertexOrder { order, heights, position })
}

/// First functional of the form `(1, t, t^2, ...)`, `t = 2, 3, ...`, that
/// separates the vertices.
pub fn default_functional(p: &SimplePolytope) -> Result<Vec<Rational>, PolytopeError> {
    if p.coords().is_none() {
        return Err(PolytopeError::MissingCoords);
    }
    let mut last = None;
    for t in 2i64..10_000 {
        let f: Vec<Rational> = (0..p.dim as u32).map(|k| int(t.pow(k))).collect();
        match order_vertices(p, &f) {
            Ok(_) => return Ok(f),
            Err(e @ PolytopeError::Tie(..)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("loop ran"))
}

/// For every vertex `w`, the face spanned by the edges leaving `w` upward:
/// the meet of those facets at `w` whose opposite edge arrives from a
/// lower vertex. Verifies that every vertex of that face sits at or above
/// `w` in the order.
pub fn ascending_faces(p: &SimplePolytope, ord: &VertexOrder) -> Result<Vec<Face>, PolytopeError> {
    if ord.len() != p.vertex_count() {
        return Err(PolytopeError::BadOrder(p.vertex_count()));
    }
    let mut out = Vec::with_capacity(p.vertex_count());
    for w in 0..p.vertex_count() {
        let incoming: Vec<usize> = p
            .vertex(w)
            .iter()
            .copied()
            .filter(|&f| p.neighbor_across(w, f).is_some_and(|u| ord.position(u) < ord.position(w)))
            .collect();
        let face = p.face(&incoming);
        if let Some(&lower) = face.vertex_set.iter().find(|&&u| ord.position(u) < ord.position(w)) {
            return Err(PolytopeError::OrderProperty { vertex: w, lower });
        }
        out.push(face);
    }
    Ok(out)
}
