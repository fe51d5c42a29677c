//! JSON input schemas and report documents.
//!
//! Rationals are written as `"p/q"` strings (integers as `"p"`); input
//! coordinates may also be plain JSON integers.

use serde::{Deserialize, Serialize};

use crate::bott::{BottError, BottMatrix, CartanType, CartanWord, PairingConvention};
use crate::charmap::CharacteristicMap;
use crate::intlinalg::Rational;
use crate::polyring::{parse_rational, Poly, PolyError, VarNames};
use crate::polytope::{PolytopeError, SimplePolytope};

pub fn rat_string(r: &Rational) -> String {
    r.to_string()
}

/// Comma-separated rationals, e.g. `"1,2/3,-4"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',').map(parse_rational).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatValue {
    Int(i64),
    Text(String),
}

impl RatValue {
    pub fn to_rational(&self) -> Result<Rational, String> {
        match self {
            RatValue::Int(n) => Ok(Rational::from_integer((*n).into())),
            RatValue::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub dim: usize,
    pub facets: usize,
    pub vertices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<RatValue>>>,
}

impl PolytopeFile {
    pub fn from_polytope(p: &SimplePolytope) -> Self {
        PolytopeFile {
            dim: p.dim(),
            facets: p.facet_count(),
            vertices: p.vertices().to_vec(),
            coords: p
                .coords()
                .map(|c| c.iter().map(|row| row.iter().map(|x| RatValue::Text(rat_string(x))).collect()).collect()),
        }
    }

    pub fn to_polytope(&self) -> Result<SimplePolytope, PolytopeError> {
        let coords = match &self.coords {
            None => None,
            Some(rows) => Some(
                rows.iter()
                    .map(|row| row.iter().map(RatValue::to_rational).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| {
                        PolytopeError::Invalid(crate::polytope::ValidationReport {
                            checks: vec![crate::polytope::Check {
                                name: "coords_parse".into(),
                                passed: false,
                                culprits: vec![],
                                detail: Some(e),
                            }],
                        })
                    })?,
            ),
        };
        SimplePolytope::new(self.dim, self.facets, self.vertices.clone(), coords)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaFile {
    pub lambda: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_vertex: Option<usize>,
}

impl LambdaFile {
    pub fn from_charmap(l: &CharacteristicMap) -> Self {
        LambdaFile { lambda: l.vectors.clone(), base_vertex: l.base_vertex }
    }

    /// The base vertex defaults to vertex 0.
    pub fn to_charmap(&self) -> CharacteristicMap {
        CharacteristicMap::new(self.lambda.clone(), Some(self.base_vertex.unwrap_or(0)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BottFile {
    pub n: usize,
    /// `[i, j, c_ij]` with `1 <= i < j <= n`.
    #[serde(default)]
    pub c: Vec<(usize, usize, i64)>,
}

impl BottFile {
    pub fn from_matrix(c: &BottMatrix) -> Self {
        BottFile { n: c.n(), c: c.entries() }
    }

    pub fn to_matrix(&self) -> Result<BottMatrix, BottError> {
        BottMatrix::from_entries(self.n, &self.c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanFile {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
    pub word: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
}

impl CartanFile {
    /// `convention` overrides the file's setting.
    pub fn to_word(&self, convention: Option<PairingConvention>) -> Result<CartanWord, BottError> {
        let kind: CartanType = self.kind.parse()?;
        let conv = match (convention, &self.convention) {
            (Some(c), _) => c,
            (None, Some(s)) => s.parse()?,
            (None, None) => PairingConvention::default(),
        };
        match kind {
            CartanType::Matrix => {
                let m = self
                    .matrix
                    .clone()
                    .ok_or_else(|| BottError::InvalidCartan("type \"matrix\" needs a \"matrix\" field".into()))?;
                if let Some(r) = self.rank {
                    if r != m.len() {
                        return Err(BottError::InvalidCartan(format!("rank {r} but matrix has {} rows", m.len())));
                    }
                }
                CartanWord::new(m, self.word.clone(), conv)
            }
            t => {
                let rank = self.rank.ok_or_else(|| BottError::InvalidCartan("missing \"rank\"".into()))?;
                CartanWord::of_type(t, rank, self.word.clone(), conv)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderFile {
    /// Vertices from lowest to highest.
    pub order: Vec<usize>,
}

/// A presentation as printed in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub variables: Vec<String>,
    /// Variables from highest to lowest priority in the monomial order.
    pub variable_priority: Vec<String>,
    pub generators: Vec<String>,
}

impl PresentationDoc {
    pub fn names(&self) -> VarNames {
        VarNames::Custom(self.variables.clone())
    }

    /// Parses the generators back into polynomials.
    pub fn parse_generators(&self) -> Result<Vec<Poly>, PolyError> {
        let names = self.names();
        self.generators.iter().map(|g| Poly::parse(g, self.variables.len(), &names)).collect()
    }
}

/// `e_i e_j = Σ_k c e_k` as `[i, j, k, "c"]` for `i <= j`, nonzero `c` only.
pub type SparseConstants = Vec<(usize, usize, usize, String)>;

pub fn sparse_constants(c: &[Vec<Vec<Rational>>]) -> SparseConstants {
    let mut out = Vec::new();
    for (i, row) in c.iter().enumerate() {
        for (j, coeffs) in row.iter().enumerate().skip(i) {
            for (k, x) in coeffs.iter().enumerate() {
                if !num_traits::Zero::is_zero(x) {
                    out.push((i, j, k, rat_string(x)));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRingChecks {
    pub rank_equals_vertex_count: bool,
    pub basis_spans: bool,
    pub structure_constants_integral: Option<bool>,
    pub standard_monomials_integral: Option<bool>,
    pub standard_monomial_determinant: Option<String>,
    pub projective_bundle_relation: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRingReport {
    pub rank: usize,
    pub vertex_count: usize,
    pub integral: bool,
    pub r: Vec<String>,
    pub base_vertex: usize,
    /// Vertices from lowest to highest; `basis[k]` belongs to `vertex_order[k]`.
    pub vertex_order: Vec<usize>,
    /// Facet sets of the faces `T_w`.
    pub basis: Vec<Vec<usize>>,
    pub basis_monomials: Vec<String>,
    pub structure_constants: Option<SparseConstants>,
    pub presentation: PresentationDoc,
    pub groebner_basis: Vec<String>,
    pub standard_monomials: Vec<String>,
    pub checks: KRingChecks,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDoc {
    pub matrix: Vec<Vec<i64>>,
    pub word: Vec<usize>,
    pub convention: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentChecks {
    pub rank_is_power_of_two: bool,
    pub involution: bool,
    pub structure_constants_integral: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentReport {
    pub n: usize,
    pub c: Vec<(usize, usize, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<CartanDoc>,
    /// Defining relations first, then `y_i w_i - 1`.
    pub presentation: PresentationDoc,
    pub defining_relations: usize,
    pub annotations: Vec<String>,
    pub rank: usize,
    /// Products of `y_i` over subsets in binary order.
    pub basis: Vec<String>,
    pub structure_constants: Option<SparseConstants>,
    pub groebner_basis: Vec<String>,
    pub standard_monomials: Vec<String>,
    pub checks: LaurentChecks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub n: usize,
    pub c: Vec<(usize, usize, i64)>,
    pub isomorphic: bool,
    pub pipeline_rank: usize,
    pub laurent_rank: usize,
    pub relations_checked: usize,
    pub failed_relations: Vec<String>,
    pub determinant: Option<String>,
    pub unimodular: Option<bool>,
    /// Image of each `y_i` in the cube ring.
    pub images: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub passed: bool,
    pub checks: Vec<crate::polytope::Check>,
    pub determinants: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_print_exactly() {
        let r = parse_rational_list("1, -2/4,3").unwrap();
        let s: Vec<String> = r.iter().map(rat_string).collect();
        assert_eq!(s, vec!["1", "-1/2", "3"]);
        assert!(parse_rational_list("1,x").is_err());
    }

    #[test]
    fn polytope_file_round_trip() {
        let p = crate::polytope::cube(2).unwrap();
        let f = PolytopeFile::from_polytope(&p);
        let text = serde_json::to_string(&f).unwrap();
        let back: PolytopeFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_polytope().unwrap(), p);
        let mixed: PolytopeFile =
            serde_json::from_str(r#"{"dim":1,"facets":2,"vertices":[[1],[0]],"coords":[[0],["1/2"]]}"#).unwrap();
        assert_eq!(mixed.to_polytope().unwrap().coords().unwrap()[1][0], parse_rational("1/2").unwrap());
    }

    #[test]
    fn cartan_file_defaults() {
        let f: CartanFile = serde_json::from_str(r#"{"type":"B","rank":2,"word":[1,2]}"#).unwrap();
        let w = f.to_word(None).unwrap();
        assert_eq!(w.convention(), PairingConvention::Col);
        assert_eq!(f.to_word(Some(PairingConvention::Row)).unwrap().convention(), PairingConvention::Row);
        let m: CartanFile =
            serde_json::from_str(r#"{"type":"matrix","matrix":[[2,-3],[-1,2]],"word":[2,1],"convention":"row"}"#)
                .unwrap();
        assert_eq!(m.to_word(None).unwrap().pairing(2, 1), -1);
        let bad: CartanFile = serde_json::from_str(r#"{"type":"Q","rank":2,"word":[1]}"#).unwrap();
        assert!(bad.to_word(None).is_err());
    }
}
