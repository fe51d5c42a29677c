//! The ring `R(S; λ)`: Stanley–Reisner monomials plus the linear relations
//! `z_u`, its standard-monomial model, and the `x(T_w)` module basis.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::charmap::{base_facets, dual_basis, validate_charmap, CharMapError, CharacteristicMap, Covector};
use crate::intlinalg::{rat_det, rat_inverse, rat_solve, RatMatrix, Rational};
use crate::polyring::{Monomial, MonomialOrder, Poly, PolyError, QuotientRing};
use crate::polytope::{
    ascending_faces, minimal_nonfaces, Face, PolytopeError, SimplePolytope, ValidationReport, VertexOrder,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KRingError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    CharMap(#[from] CharMapError),
    #[error("invalid input: {0}")]
    Invalid(ValidationReport),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientLength { expected: usize, got: usize },
    #[error("coefficient {0} is zero")]
    ZeroCoefficient(usize),
    #[error("Gröbner computation exceeded the budget of {0} pair reductions")]
    BudgetExceeded(usize),
    #[error("ring is not finite-dimensional (escaping variable {0:?})")]
    InfiniteDimension(Option<usize>),
    #[error("rank {rank} differs from the expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("proposed elements do not form a basis")]
    NotABasis,
    #[error("integrality check failed: {0}")]
    Integrality(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Poly(PolyError),
}

impl From<PolyError> for KRingError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::BudgetExceeded(b) => KRingError::BudgetExceeded(b),
            PolyError::InfiniteDimension(v) => KRingError::InfiniteDimension(v),
            other => KRingError::Poly(other),
        }
    }
}

/// Nonzero rationals `r_1..r_n`, one for each base facet in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSpec {
    r: Vec<Rational>,
}

impl CoefficientSpec {
    pub fn new(r: Vec<Rational>) -> Result<Self, KRingError> {
        if let Some(i) = r.iter().position(Zero::is_zero) {
            return Err(KRingError::ZeroCoefficient(i));
        }
        Ok(CoefficientSpec { r })
    }

    pub fn ones(n: usize) -> Self {
        CoefficientSpec { r: vec![Rational::one(); n] }
    }

    pub fn values(&self) -> &[Rational] {
        &self.r
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// True when every `r_i` is 1, the case with a Z-form.
    pub fn is_integral(&self) -> bool {
        self.r.iter().all(One::is_one)
    }

    /// `∏ r_i^{e_i}` for integer exponents.
    pub fn monomial(&self, exps: &[i64]) -> Rational {
        self.r.iter().zip(exps).fold(Rational::one(), |acc, (r, &e)| acc * rat_pow(r, e))
    }
}

fn rat_pow(r: &Rational, e: i64) -> Rational {
    let base = if e < 0 { r.recip() } else { r.clone() };
    (0..e.unsigned_abs()).fold(Rational::one(), |acc, _| acc * &base)
}

/// `∏_{u(v_j)>0} (1-x_j)^{u(v_j)} - r_u ∏_{u(v_j)<0} (1-x_j)^{-u(v_j)}` with
/// `r_u = ∏ r_i^{u(v_{b_i})}`.
pub fn z_element(
    p: &SimplePolytope,
    lambda: &CharacteristicMap,
    u: &Covector,
    r: &CoefficientSpec,
) -> Result<Poly, KRingError> {
    let bases = base_facets(p, lambda)?;
    if r.len() != bases.len() {
        return Err(KRingError::CoefficientLength { expected: bases.len(), got: r.len() });
    }
    let d = p.facet_count();
    let mut pos = Poly::one(d);
    let mut neg = Poly::one(d);
    for j in 0..d {
        let e = u.apply(lambda.vector(j));
        let factor = Poly::one_minus_var(d, j).pow(e.unsigned_abs() as u32);
        if e > 0 {
            pos = &pos * &factor;
        } else if e < 0 {
            neg = &neg * &factor;
        }
    }
    let exps: Vec<i64> = bases.iter().map(|&b| u.apply(lambda.vector(b))).collect();
    Ok(&pos - &neg.scale(&r.monomial(&exps)))
}

#[derive(Debug, Clone)]
pub struct KRingPresentation {
    pub polytope: SimplePolytope,
    pub charmap: CharacteristicMap,
    pub coefficients: CoefficientSpec,
    pub base_facets: Vec<usize>,
    pub duals: Vec<Covector>,
    pub nonfaces: Vec<Vec<usize>>,
    pub sr_generators: Vec<Poly>,
    pub linear_generators: Vec<Poly>,
    /// Degree-reverse-lex with the base facets given top priority.
    pub order: MonomialOrder,
}

impl KRingPresentation {
    pub fn nvars(&self) -> usize {
        self.polytope.facet_count()
    }

    pub fn generators(&self) -> Vec<Poly> {
        self.sr_generators.iter().chain(&self.linear_generators).cloned().collect()
    }
}

/// Validates the input and writes down the defining ideal.
pub fn build_presentation(
    p: &SimplePolytope,
    lambda: &CharacteristicMap,
    r: &CoefficientSpec,
) -> Result<KRingPresentation, KRingError> {
    let report = validate_charmap(p, lambda)?;
    if !report.passed() {
        return Err(KRingError::Invalid(report));
    }
    let bases = base_facets(p, lambda)?;
    if r.len() != bases.len() {
        return Err(KRingError::CoefficientLength { expected: bases.len(), got: r.len() });
    }
    let d = p.facet_count();
    let duals = dual_basis(p, lambda)?;
    let nonfaces = minimal_nonfaces(p);
    let sr_generators = nonfaces.iter().map(|s| Poly::monomial(d, Monomial::product_of(s.iter().copied()))).collect();
    let linear_generators = duals.iter().map(|u| z_element(p, lambda, u, r)).collect::<Result<_, _>>()?;
    let priority = bases.iter().copied().chain((0..d).filter(|f| !bases.contains(f))).collect();
    let order = MonomialOrder::with_priority(priority).expect("base facets then the rest is a permutation");
    Ok(KRingPresentation {
        polytope: p.clone(),
        charmap: lambda.clone(),
        coefficients: r.clone(),
        base_facets: bases,
        duals,
        nonfaces,
        sr_generators,
        linear_generators,
        order,
    })
}

/// `c[i][j][k]`: `e_i e_j = Σ_k c[i][j][k] e_k`.
pub type StructureConstants = Vec<Vec<Vec<Rational>>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisChecks {
    /// The proposed elements are a Q-basis of the quotient.
    pub spans: bool,
    pub constants_integral: Option<bool>,
    /// Standard monomials have integer coordinates in the proposed basis.
    pub standard_monomials_integral: Option<bool>,
    /// Determinant of the matrix expressing standard monomials in the
    /// proposed basis.
    pub standard_monomial_determinant: Option<Rational>,
    /// That determinant is `±1` and the matrix is integral.
    pub unimodular: Option<bool>,
}

/// A finite quotient together with a proposed module basis.
#[derive(Debug, Clone)]
pub struct BasisResult {
    ring: QuotientRing,
    elements: Vec<Poly>,
    faces: Vec<Face>,
    vertices: Vec<usize>,
    change_of_basis: RatMatrix,
    inverse: Option<RatMatrix>,
    integral: bool,
    structure_constants: Option<StructureConstants>,
    checks: BasisChecks,
    warnings: Vec<String>,
}

impl BasisResult {
    /// In integral mode the rank must equal the number of elements, the
    /// elements must form a basis, and the structure constants must be
    /// integers. Otherwise shortfalls are recorded as warnings.
    pub fn with_basis(ring: QuotientRing, elements: Vec<Poly>, integral: bool) -> Result<Self, KRingError> {
        let q = ring.dim();
        let m = elements.len();
        let mut warnings = Vec::new();
        if integral && q != m {
            return Err(KRingError::RankDeficient { rank: q, expected: m });
        }
        if q != m {
            warnings.push(format!("rank {q} differs from the {m} proposed basis elements"));
        }
        let mut change = RatMatrix::zeros(q, m);
        for (k, e) in elements.iter().enumerate() {
            for (i, c) in ring.coordinates(e).into_iter().enumerate() {
                change[(i, k)] = c;
            }
        }
        let inverse = if q == m { rat_inverse(&change).ok() } else { None };
        if inverse.is_none() {
            if integral {
                return Err(KRingError::NotABasis);
            }
            if q == m {
                warnings.push("proposed elements are linearly dependent".to_string());
            }
        }

        let structure_constants = inverse.as_ref().map(|inv| {
            let mut c = vec![vec![Vec::new(); m]; m];
            for i in 0..m {
                for j in i..m {
                    let prod = ring.coordinates(&(&elements[i] * &elements[j]));
                    let col = RatMatrix::from_columns(&[prod]).expect("one column");
                    let coeffs = inv.mul(&col).expect("shapes agree").column(0);
                    c[j][i] = coeffs.clone();
                    c[i][j] = coeffs;
                }
            }
            c
        });

        let mut checks = BasisChecks {
            spans: inverse.is_some(),
            constants_integral: None,
            standard_monomials_integral: None,
            standard_monomial_determinant: None,
            unimodular: None,
        };
        if integral {
            let sc = structure_constants.as_ref().expect("integral mode has an inverse");
            let ok = sc.iter().flatten().flatten().all(Rational::is_integer);
            checks.constants_integral = Some(ok);
            if !ok {
                return Err(KRingError::Integrality("structure constants are not integers".into()));
            }
            let inv = inverse.as_ref().expect("integral mode has an inverse");
            let std_ok = inv.to_integer().is_some();
            let det = rat_det(inv).expect("square");
            checks.standard_monomials_integral = Some(std_ok);
            checks.unimodular = Some(std_ok && det.abs().is_one());
            checks.standard_monomial_determinant = Some(det);
            if !std_ok {
                return Err(KRingError::Integrality("standard monomials leave the integral span".into()));
            }
        }

        Ok(BasisResult {
            ring,
            elements,
            faces: Vec::new(),
            vertices: Vec::new(),
            change_of_basis: change,
            inverse,
            integral,
            structure_constants,
            checks,
            warnings,
        })
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.ring.dim()
    }

    pub fn elements(&self) -> &[Poly] {
        &self.elements
    }

    /// Faces `T_w` labelling the elements, when they come from a vertex order.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Vertices `w` labelling the elements, empty for custom bases.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Column `k` holds the standard-monomial coordinates of element `k`.
    pub fn change_of_basis(&self) -> &RatMatrix {
        &self.change_of_basis
    }

    pub fn inverse_change_of_basis(&self) -> Option<&RatMatrix> {
        self.inverse.as_ref()
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn structure_constants(&self) -> Option<&StructureConstants> {
        self.structure_constants.as_ref()
    }

    pub fn checks(&self) -> &BasisChecks {
        &self.checks
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Coordinates of `p` in the proposed basis.
    pub fn coordinates_in_basis(&self, p: &Poly) -> Option<Vec<Rational>> {
        let inv = self.inverse.as_ref()?;
        let col = RatMatrix::from_columns(&[self.ring.coordinates(p)]).ok()?;
        Some(inv.mul(&col).ok()?.column(0))
    }
}

/// The `x(T_w)` basis for the given vertex order, listed in ascending order.
pub fn compute_basis(pres: &KRingPresentation, ord: &VertexOrder, budget: usize) -> Result<BasisResult, KRingError> {
    let faces = ascending_faces(&pres.polytope, ord)?;
    let ring = QuotientRing::new(pres.generators(), &pres.order, budget)?;
    let d = pres.nvars();
    let vertices: Vec<usize> = ord.order().to_vec();
    let ordered_faces: Vec<Face> = vertices.iter().map(|&w| faces[w].clone()).collect();
    let elements =
        ordered_faces.iter().map(|t| Poly::monomial(d, Monomial::product_of(t.facet_set.iter().copied()))).collect();
    let integral = pres.coefficients.is_integral();
    let mut res = BasisResult::with_basis(ring, elements, integral)?;
    res.faces = ordered_faces;
    res.vertices = vertices;
    Ok(res)
}

/// The inverse of `p` in the quotient.
pub fn invert_unit(ring: &QuotientRing, p: &Poly) -> Result<Poly, KRingError> {
    let m = ring.multiplication_matrix(p);
    let one = ring.coordinates(&Poly::one(ring.nvars()));
    let rhs = RatMatrix::from_columns(&[one]).expect("one column");
    let sol = rat_solve(&m, &rhs).map_err(|_| KRingError::NotAUnit)?;
    Ok(ring.from_coordinates(&sol.column(0)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub relations_checked: usize,
    /// Indices of source relations whose image is nonzero.
    pub failed_relations: Vec<usize>,
    pub source_rank: usize,
    pub target_rank: usize,
    /// Column `k`: target-basis coordinates of the image of source element `k`.
    pub matrix: RatMatrix,
    pub determinant: Option<Rational>,
    /// Present when both sides are integral.
    pub unimodular: Option<bool>,
}

impl IsoReport {
    pub fn relations_vanish(&self) -> bool {
        self.failed_relations.is_empty()
    }

    pub fn bijective(&self) -> bool {
        self.determinant.as_ref().is_some_and(|d| !d.is_zero())
    }

    pub fn passed(&self) -> bool {
        self.relations_vanish() && self.bijective() && self.unimodular != Some(false)
    }
}

/// Checks that `x_k ↦ images[k]` defines a ring map from `src` to `dst`
/// and that it carries the source basis onto a target basis (over Z when
/// both sides are integral).
pub fn ring_map_check(src: &BasisResult, images: &[Poly], dst: &BasisResult) -> Result<IsoReport, KRingError> {
    if images.len() != src.ring.nvars() {
        return Err(KRingError::ShapeMismatch(format!(
            "{} images for {} source variables",
            images.len(),
            src.ring.nvars()
        )));
    }
    if let Some(bad) = images.iter().position(|p| p.nvars() != dst.ring.nvars()) {
        return Err(KRingError::ShapeMismatch(format!("image {bad} is not in the target ring")));
    }
    let nf = |q: Poly| dst.ring.normal_form(&q);
    let apply = |p: &Poly| p.substitute(images, &nf).map(|q| dst.ring.normal_form(&q));

    let mut failed = Vec::new();
    for (i, rel) in src.ring.generators().iter().enumerate() {
        if !apply(rel)?.is_zero() {
            failed.push(i);
        }
    }

    let rows = dst.inverse.as_ref().map_or(dst.rank(), RatMatrix::rows);
    let mut matrix = RatMatrix::zeros(rows, src.elements.len());
    for (k, e) in src.elements.iter().enumerate() {
        let img = apply(e)?;
        let coords = dst.coordinates_in_basis(&img).unwrap_or_else(|| dst.ring.coordinates(&img));
        for (i, c) in coords.into_iter().enumerate() {
            matrix[(i, k)] = c;
        }
    }
    let determinant = matrix.is_square().then(|| rat_det(&matrix).expect("square"));
    let unimodular = (src.integral && dst.integral)
        .then(|| matrix.to_integer().is_some() && determinant.as_ref().is_some_and(|d| d.abs().is_one()));
    Ok(IsoReport {
        relations_checked: src.ring.generators().len(),
        failed_relations: failed,
        source_rank: src.rank(),
        target_rank: dst.rank(),
        matrix,
        determinant,
        unimodular,
    })
}

/// For a simplex whose non-base facet vector is minus the sum of the base
/// vectors, `∏_{i=0}^{n} (1 - r_i X)` with `X = 1 - x_f`, `r_0 = 1` and `f`
/// the non-base facet, lies in the ideal. Returns `None` when the shape
/// does not apply, otherwise whether the product vanishes.
pub fn projective_bundle_check(pres: &KRingPresentation, ring: &QuotientRing) -> Option<bool> {
    let p = &pres.polytope;
    let n = p.dim();
    if p.facet_count() != n + 1 || p.vertex_count() != n + 1 {
        return None;
    }
    let f = (0..=n).find(|g| !pres.base_facets.contains(g))?;
    let expected: Vec<i64> =
        (0..n).map(|i| -pres.base_facets.iter().map(|&b| pres.charmap.vector(b)[i]).sum::<i64>()).collect();
    if pres.charmap.vector(f) != expected.as_slice() {
        return None;
    }
    let d = p.facet_count();
    let x = Poly::one_minus_var(d, f);
    let one = Poly::one(d);
    let prod = std::iter::once(Rational::one())
        .chain(pres.coefficients.values().iter().cloned())
        .fold(one.clone(), |acc, r| &acc * &(&one - &x.scale(&r)));
    Some(ring.is_zero(&prod))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{buchberger, standard_monomials, StandardMonomials, VarNames, DEFAULT_BUDGET};
    use crate::polytope::{cube, order_vertices, polygon, product, simplex};
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn simplex_data(n: usize) -> (SimplePolytope, CharacteristicMap) {
        let mut v = vec![vec![-1; n]];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            v.push(e);
        }
        (simplex(n).unwrap(), CharacteristicMap::new(v, Some(0)))
    }

    fn hirzebruch(a: i64) -> (SimplePolytope, CharacteristicMap) {
        (polygon(4).unwrap(), CharacteristicMap::new(vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]], Some(0)))
    }

    fn bott3(c12: i64, c13: i64, c23: i64) -> (SimplePolytope, CharacteristicMap) {
        let v =
            vec![vec![1, 0, 0], vec![-1, -c12, -c13], vec![0, 1, 0], vec![0, -1, -c23], vec![0, 0, 1], vec![0, 0, -1]];
        (cube(3).unwrap(), CharacteristicMap::new(v, Some(0)))
    }

    fn pipeline(p: &SimplePolytope, l: &CharacteristicMap, f: &[i64]) -> (KRingPresentation, BasisResult) {
        let pres = build_presentation(p, l, &CoefficientSpec::ones(p.dim())).unwrap();
        let ord = order_vertices(p, &ints(f)).unwrap();
        let res = compute_basis(&pres, &ord, DEFAULT_BUDGET).unwrap();
        (pres, res)
    }

    fn catalog() -> Vec<(SimplePolytope, CharacteristicMap, Vec<i64>)> {
        let mut out = Vec::new();
        for n in 1..=3 {
            let (p, l) = simplex_data(n);
            out.push((p, l, (1..=n as i64).collect()));
        }
        for a in 0..=2 {
            let (p, l) = hirzebruch(a);
            out.push((p, l, vec![1, 0]));
        }
        let (p, l) = bott3(1, -1, 2);
        out.push((p, l, vec![1, 2, 4]));
        let (s1, l1) = simplex_data(1);
        let (s2, l2) = simplex_data(2);
        let prod = product(&s1, &s2).unwrap();
        let mut v = l1.vectors.iter().map(|v| vec![v[0], 0, 0]).collect::<Vec<_>>();
        v.extend(l2.vectors.iter().map(|w| vec![0, w[0], w[1]]));
        let base = prod.vertex_of_facets(&[1, 3, 4]);
        out.push((prod, CharacteristicMap::new(v, base), vec![1, 3, 7]));
        out
    }

    #[test]
    fn triangle_presentation() {
        let (p, l) = simplex_data(2);
        let pres = build_presentation(&p, &l, &CoefficientSpec::ones(2)).unwrap();
        assert_eq!(pres.base_facets, vec![1, 2]);
        assert_eq!(pres.order.priority(), &[1, 2, 0]);
        let names = VarNames::X;
        let rendered: Vec<String> = pres.generators().iter().map(|g| g.render(&pres.order, &names)).collect();
        assert_eq!(rendered, vec!["x0*x1*x2", "-x1 + x0", "-x2 + x0"]);
        let ord = order_vertices(&p, &ints(&[1, 2])).unwrap();
        let res = compute_basis(&pres, &ord, DEFAULT_BUDGET).unwrap();
        assert_eq!(res.rank(), 3);
        let std: Vec<String> = res.ring().standard_monomials().iter().map(|m| m.render(&names)).collect();
        assert_eq!(std, vec!["1", "x0", "x0^2"]);
        let basis: Vec<String> = res.elements().iter().map(|e| e.render(&pres.order, &names)).collect();
        assert_eq!(basis, vec!["1", "x0", "x0*x1"]);

        let inv = invert_unit(res.ring(), &Poly::one_minus_var(3, 0)).unwrap();
        let expected = Poly::parse("1 + x0 + x0*x1", 3, &names).unwrap();
        assert_eq!(inv, res.ring().normal_form(&expected));
        assert_eq!(invert_unit(res.ring(), &Poly::var(3, 0)), Err(KRingError::NotAUnit));
    }

    #[test]
    fn projective_space_structure_constants() {
        // x(T_k) = x_0^k and x_0^{n+1} = 0
        for n in 1..=4 {
            let (p, l) = simplex_data(n);
            let (_, res) = pipeline(&p, &l, &(1..=n as i64).collect::<Vec<_>>());
            let c = res.structure_constants().unwrap();
            for i in 0..=n {
                for j in 0..=n {
                    for k in 0..=n {
                        assert_eq!(c[i][j][k], q(i64::from(i + j == k)), "n={n} ({i},{j},{k})");
                    }
                }
            }
        }
    }

    #[test]
    fn hirzebruch_ranks() {
        for a in 0..=3 {
            let (p, l) = hirzebruch(a);
            let (_, res) = pipeline(&p, &l, &[1, 0]);
            assert_eq!(res.rank(), 4);
            assert_eq!(res.checks().standard_monomials_integral, Some(true));
            // x1 = x3 - a*x2 + a*x0*x3 while the standard monomials are 1, x1, x2, x3
            let det = res.checks().standard_monomial_determinant.clone().unwrap();
            assert_eq!(det.abs(), q(a.max(1)));
            assert_eq!(res.checks().unimodular, Some(a <= 1));
        }
    }

    #[test]
    fn catalog_ranks_and_integrality() {
        for (p, l, f) in catalog() {
            let (_, res) = pipeline(&p, &l, &f);
            assert_eq!(res.rank(), p.vertex_count());
            assert_eq!(res.checks().constants_integral, Some(true));
            assert_eq!(res.checks().standard_monomials_integral, Some(true));
            let inv = res.inverse_change_of_basis().unwrap();
            assert!(inv.to_integer().is_some());
        }
    }

    #[test]
    fn structure_constants_are_associative_and_unital() {
        for (p, l, f) in catalog() {
            let (_, res) = pipeline(&p, &l, &f);
            let c = res.structure_constants().unwrap();
            let m = c.len();
            // e_0 = x(∅) = 1
            for i in 0..m {
                for k in 0..m {
                    assert_eq!(c[0][i][k], q(i64::from(i == k)));
                }
            }
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for t in 0..m {
                            let lhs: Rational = (0..m).map(|s| &c[i][j][s] * &c[s][k][t]).sum();
                            let rhs: Rational = (0..m).map(|s| &c[j][k][s] * &c[i][s][t]).sum();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nilpotent_generators() {
        for (p, l, f) in catalog() {
            let (_, res) = pipeline(&p, &l, &f);
            let d = p.facet_count();
            for j in 0..d {
                assert!(res.ring().is_zero(&Poly::var(d, j).pow(p.dim() as u32 + 1)));
            }
        }
    }

    #[test]
    fn projective_bundle_relation_holds() {
        for n in 1..=3 {
            let (p, l) = simplex_data(n);
            let r = CoefficientSpec::new((2..=n as i64 + 1).map(q).collect()).unwrap();
            let pres = build_presentation(&p, &l, &r).unwrap();
            let ord = order_vertices(&p, &ints(&(1..=n as i64).collect::<Vec<_>>())).unwrap();
            let res = compute_basis(&pres, &ord, DEFAULT_BUDGET).unwrap();
            assert_eq!(res.rank(), n + 1);
            assert!(!res.is_integral());
            assert_eq!(projective_bundle_check(&pres, res.ring()), Some(true));
        }
        let (p, l) = hirzebruch(1);
        let (pres, res) = pipeline(&p, &l, &[1, 0]);
        assert_eq!(projective_bundle_check(&pres, res.ring()), None);
    }

    #[test]
    fn generic_coefficients_on_the_square() {
        let (p, l) = hirzebruch(1);
        let r = CoefficientSpec::new(vec![q(2), q(3)]).unwrap();
        let pres = build_presentation(&p, &l, &r).unwrap();
        let ord = order_vertices(&p, &ints(&[1, 0])).unwrap();
        let res = compute_basis(&pres, &ord, DEFAULT_BUDGET).unwrap();
        assert!(res.rank() <= 4);
        if res.rank() < 4 {
            assert!(!res.warnings().is_empty());
            assert!(res.structure_constants().is_none());
        }
    }

    #[test]
    fn input_errors() {
        let (p, l) = simplex_data(2);
        assert_eq!(
            build_presentation(&p, &l, &CoefficientSpec::ones(3)).unwrap_err(),
            KRingError::CoefficientLength { expected: 2, got: 3 }
        );
        assert_eq!(CoefficientSpec::new(vec![q(1), q(0)]), Err(KRingError::ZeroCoefficient(1)));
        let bad = CharacteristicMap::new(vec![vec![-1, -2], vec![1, 0], vec![0, 1]], Some(0));
        assert!(matches!(build_presentation(&p, &bad, &CoefficientSpec::ones(2)), Err(KRingError::Invalid(_))));
        let (pres, _) = pipeline(&p, &l, &[1, 2]);
        let ord = order_vertices(&p, &ints(&[1, 2])).unwrap();
        assert_eq!(compute_basis(&pres, &ord, 0).unwrap_err(), KRingError::BudgetExceeded(0));
    }

    #[test]
    fn order_independence() {
        for (p, l, f) in catalog() {
            let (_, a) = pipeline(&p, &l, &f);
            let g: Vec<i64> = f.iter().rev().map(|x| -x).collect();
            let (_, b) = pipeline(&p, &l, &g);
            assert_eq!(a.rank(), b.rank());
            let ident: Vec<Poly> = (0..p.facet_count()).map(|j| Poly::var(p.facet_count(), j)).collect();
            let iso = ring_map_check(&a, &ident, &b).unwrap();
            assert!(iso.passed(), "{:?}", iso);
            assert_eq!(iso.unimodular, Some(true));

            // constants of b agree with those of a pushed through the change of basis
            let t = &iso.matrix;
            let tinv = rat_inverse(t).unwrap();
            let (ca, cb) = (a.structure_constants().unwrap(), b.structure_constants().unwrap());
            let m = ca.len();
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let mut s = Rational::zero();
                        for x in 0..m {
                            for y in 0..m {
                                if tinv[(x, i)].is_zero() || tinv[(y, j)].is_zero() {
                                    continue;
                                }
                                for z in 0..m {
                                    s += &tinv[(x, i)] * &tinv[(y, j)] * &ca[x][y][z] * &t[(k, z)];
                                }
                            }
                        }
                        assert_eq!(s, cb[i][j][k]);
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_is_priority_independent() {
        for (p, l, _) in catalog() {
            let pres = build_presentation(&p, &l, &CoefficientSpec::ones(p.dim())).unwrap();
            let plain = MonomialOrder::degrevlex(p.facet_count());
            let gb = buchberger(&pres.generators(), &plain, DEFAULT_BUDGET).unwrap();
            let StandardMonomials::Finite(s) = standard_monomials(&gb, 10_000) else { panic!("infinite") };
            let ring = QuotientRing::new(pres.generators(), &pres.order, DEFAULT_BUDGET).unwrap();
            assert_eq!(s.len(), ring.dim());
        }
    }

    #[test]
    fn z_elements_match_direct_expansion() {
        let (p, l) = hirzebruch(2);
        let r = CoefficientSpec::new(vec![q(2), q(5)]).unwrap();
        // u = (1, 1): exponents 1, 1, -1 + 2 = 1, -1 on facets 0..3, r_u = 2 * 5
        let z = z_element(&p, &l, &Covector(vec![1, 1]), &r).unwrap();
        let names = VarNames::X;
        let x = |s: &str| Poly::parse(s, 4, &names).unwrap();
        let expected = &(&(&x("1 - x0") * &x("1 - x1")) * &x("1 - x2")) - &x("10 - 10*x3");
        assert_eq!(z, expected);
    }

    fn ring_strategy() -> impl Strategy<Value = (usize, Vec<i64>)> {
        prop_oneof![
            Just((0usize, vec![])),
            (0i64..=2).prop_map(|a| (1usize, vec![a])),
            (-1i64..=1, -1i64..=1, -1i64..=1).prop_map(|(a, b, c)| (2usize, vec![a, b, c]))
        ]
    }

    fn data_for(kind: usize, c: &[i64]) -> (SimplePolytope, CharacteristicMap, Vec<i64>) {
        match kind {
            0 => {
                let (p, l) = simplex_data(3);
                (p, l, vec![1, 2, 3])
            }
            1 => {
                let (p, l) = hirzebruch(c[0]);
                (p, l, vec![1, 0])
            }
            _ => {
                let (p, l) = bott3(c[0], c[1], c[2]);
                (p, l, vec![1, 2, 4])
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn every_z_u_lies_in_the_ideal(
            (kind, c) in ring_strategy(),
            us in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..=8),
            rs in prop::collection::vec(1i64..=4, 3),
        ) {
            let (p, l, f) = data_for(kind, &c);
            let n = p.dim();
            let r = CoefficientSpec::new(rs[..n].iter().map(|&x| q(x)).collect()).unwrap();
            let pres = build_presentation(&p, &l, &r).unwrap();
            let ord = order_vertices(&p, &ints(&f)).unwrap();
            let res = compute_basis(&pres, &ord, DEFAULT_BUDGET).unwrap();
            prop_assert!(res.rank() <= p.vertex_count());
            for u in us {
                let z = z_element(&p, &l, &Covector(u[..n].to_vec()), &r).unwrap();
                prop_assert!(res.ring().is_zero(&z));
            }
        }
    }
}
