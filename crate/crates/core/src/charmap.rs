//! Characteristic maps: a primitive integer vector for each facet such that
//! the vectors at every vertex form a basis of `Z^n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::intlinalg::{det_bareiss, rat_inverse, IntMatrix, RatMatrix};
use crate::polytope::{validate_polytope, SimplePolytope, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharMapError {
    #[error("charmap has {got} vectors for {expected} facets")]
    FacetCount { expected: usize, got: usize },
    #[error("vector for facet {facet} has length {got}, expected {expected}")]
    VectorLength { facet: usize, expected: usize, got: usize },
    #[error("no base vertex chosen")]
    NoBaseVertex,
    #[error("base vertex {0} is out of range")]
    BadBaseVertex(usize),
    #[error("vectors at vertex {0} do not form a basis of the lattice")]
    NotUnimodular(usize),
    #[error("invalid characteristic data: {0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicMap {
    pub vectors: Vec<Vec<i64>>,
    pub base_vertex: Option<usize>,
}

/// An integer linear functional on the lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Covector(pub Vec<i64>);

impl Covector {
    pub fn apply(&self, v: &[i64]) -> i64 {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl CharacteristicMap {
    pub fn new(vectors: Vec<Vec<i64>>, base_vertex: Option<usize>) -> Self {
        CharacteristicMap { vectors, base_vertex }
    }

    pub fn vector(&self, f: usize) -> &[i64] {
        &self.vectors[f]
    }

    pub fn with_base_vertex(&self, w: usize) -> Self {
        CharacteristicMap { vectors: self.vectors.clone(), base_vertex: Some(w) }
    }

    /// Applies `g` to every vector, `g` given by rows.
    pub fn transform(&self, g: &[Vec<i64>]) -> Self {
        let vectors = self
            .vectors
            .iter()
            .map(|v| g.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
            .collect();
        CharacteristicMap { vectors, base_vertex: self.base_vertex }
    }

    /// Integer matrix whose columns are the vectors of `facets`, in order.
    pub fn matrix_at(&self, facets: &[usize]) -> IntMatrix {
        let n = facets.len();
        let mut m = IntMatrix::zeros(n, n);
        for (j, &f) in facets.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = BigInt::from(self.vectors[f][i]);
            }
        }
        m
    }

    fn check_shape(&self, p: &SimplePolytope) -> Result<(), CharMapError> {
        if self.vectors.len() != p.facet_count() {
            return Err(CharMapError::FacetCount { expected: p.facet_count(), got: self.vectors.len() });
        }
        for (f, v) in self.vectors.iter().enumerate() {
            if v.len() != p.dim() {
                return Err(CharMapError::VectorLength { facet: f, expected: p.dim(), got: v.len() });
            }
        }
        Ok(())
    }
}

/// Determinant of the vectors at each vertex, columns in facet-index order.
pub fn vertex_determinants(p: &SimplePolytope, lambda: &CharacteristicMap) -> Result<Vec<BigInt>, CharMapError> {
    lambda.check_shape(p)?;
    Ok((0..p.vertex_count())
        .map(|w| det_bareiss(&lambda.matrix_at(p.vertex(w))).expect("square by construction"))
        .collect())
}

/// Runs the polytope checks followed by the characteristic-map checks.
/// Shape mismatches are reported as errors rather than failed checks.
pub fn validate_charmap(p: &SimplePolytope, lambda: &CharacteristicMap) -> Result<ValidationReport, CharMapError> {
    let mut report = validate_polytope(p);
    if !report.passed() {
        return Ok(report);
    }
    lambda.check_shape(p)?;

    let not_primitive: Vec<usize> =
        (0..lambda.vectors.len()).filter(|&f| lambda.vectors[f].iter().fold(0i64, |g, &a| g.gcd(&a)) != 1).collect();
    report.push("primitive", not_primitive, None);

    let dets = vertex_determinants(p, lambda)?;
    let bad: Vec<usize> = (0..dets.len()).filter(|&w| !dets[w].abs().is_one()).collect();
    report.push("unimodular", bad, None);

    let base = match lambda.base_vertex {
        Some(b) if b >= p.vertex_count() => Some(format!("base vertex {b} out of range")),
        _ => None,
    };
    report.push("base_vertex", vec![], base);
    Ok(report)
}

/// Facets at the base vertex, ascending.
pub fn base_facets(p: &SimplePolytope, lambda: &CharacteristicMap) -> Result<Vec<usize>, CharMapError> {
    let b = lambda.base_vertex.ok_or(CharMapError::NoBaseVertex)?;
    if b >= p.vertex_count() {
        return Err(CharMapError::BadBaseVertex(b));
    }
    Ok(p.vertex(b).to_vec())
}

/// The integer covectors `u_i` with `u_i(v_{b_j}) = δ_ij`, where `b_j` runs
/// over the base facets in ascending order.
pub fn dual_basis(p: &SimplePolytope, lambda: &CharacteristicMap) -> Result<Vec<Covector>, CharMapError> {
    lambda.check_shape(p)?;
    let bases = base_facets(p, lambda)?;
    let b = lambda.base_vertex.expect("checked by base_facets");
    let m: RatMatrix = lambda.matrix_at(&bases).to_rational();
    let inv = rat_inverse(&m).map_err(|_| CharMapError::NotUnimodular(b))?;
    let inv = inv.to_integer().ok_or(CharMapError::NotUnimodular(b))?;
    Ok((0..p.dim())
        .map(|i| {
            Covector(
                inv.row(i)
                    .iter()
                    .map(|x| i64::try_from(x).map_err(|_| CharMapError::NotUnimodular(b)))
                    .collect::<Result<Vec<_>, _>>()
                    .expect("entries of a unimodular inverse fit"),
            )
        })
        .collect())
}

/// Relabels facets so the base vertex's facets come first (ascending),
/// followed by the rest (ascending). Returns `perm` with `perm[new] = old`.
pub fn reindex_to_base(
    p: &SimplePolytope,
    lambda: &CharacteristicMap,
) -> Result<(SimplePolytope, CharacteristicMap, Vec<usize>), CharMapError> {
    lambda.check_shape(p)?;
    let bases = base_facets(p, lambda)?;
    let perm: Vec<usize> = bases.iter().copied().chain((0..p.facet_count()).filter(|f| !bases.contains(f))).collect();
    let mut new_index = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        new_index[old] = new;
    }
    let q = p.relabel_facets(&new_index);
    let base = q.vertex_of_facets(&(0..p.dim()).collect::<Vec<_>>());
    let vectors = perm.iter().map(|&old| lambda.vectors[old].clone()).collect();
    Ok((q, CharacteristicMap { vectors, base_vertex: base }, perm))
}
