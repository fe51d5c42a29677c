//! Bott towers over the cube, their Laurent presentations, and
//! Bott–Samelson data from a Cartan matrix and a word.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::charmap::{validate_charmap, CharacteristicMap};
use crate::intlinalg::Rational;
use crate::kring::{
    build_presentation, compute_basis, invert_unit, ring_map_check, BasisResult, CoefficientSpec, IsoReport, KRingError,
};
use crate::polyring::{Monomial, MonomialOrder, Poly, QuotientRing, VarNames};
use crate::polytope::{cube, cube_facet, order_vertices, SimplePolytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BottError {
    #[error("size must be positive")]
    ZeroSize,
    #[error("entry ({i},{j}) is not strictly above the diagonal of a size {n} matrix")]
    BadEntry { n: usize, i: usize, j: usize },
    #[error("entry ({0},{1}) given twice")]
    DuplicateEntry(usize, usize),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("word letter {letter} at position {position} is outside 1..={rank}")]
    WordIndex { position: usize, letter: usize, rank: usize },
    #[error("empty word")]
    EmptyWord,
    #[error(transparent)]
    KRing(#[from] KRingError),
}

/// A unipotent upper-triangular integer matrix, entries indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottMatrix {
    n: usize,
    c: BTreeMap<(usize, usize), i64>,
}

impl BottMatrix {
    pub fn identity(n: usize) -> Result<Self, BottError> {
        if n == 0 {
            return Err(BottError::ZeroSize);
        }
        Ok(BottMatrix { n, c: BTreeMap::new() })
    }

    /// From `(i, j, c_ij)` triples with `1 <= i < j <= n`.
    pub fn from_entries(n: usize, entries: &[(usize, usize, i64)]) -> Result<Self, BottError> {
        let mut m = Self::identity(n)?;
        for &(i, j, v) in entries {
            if !(1 <= i && i < j && j <= n) {
                return Err(BottError::BadEntry { n, i, j });
            }
            if m.c.contains_key(&(i, j)) {
                return Err(BottError::DuplicateEntry(i, j));
            }
            if v != 0 {
                m.c.insert((i, j), v);
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `c_{i,j}`; 1 on the diagonal, 0 below it.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => 0,
            std::cmp::Ordering::Less => self.c.get(&(i, j)).copied().unwrap_or(0),
        }
    }

    /// Nonzero off-diagonal entries `(i, j, c_ij)`, sorted.
    pub fn entries(&self) -> Vec<(usize, usize, i64)> {
        self.c.iter().map(|(&(i, j), &v)| (i, j, v)).collect()
    }
}

impl fmt::Display for BottMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (1..=self.n)
            .map(|i| (1..=self.n).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// `λ(F_{i,0}) = e_i` and `λ(F_{i,1}) = -e_i - Σ_{j>i} c_{i,j} e_j` on the cube,
/// with base vertex 0 (all facets `F_{i,0}`).
pub fn bott_charmap(c: &BottMatrix) -> Result<(SimplePolytope, CharacteristicMap), BottError> {
    let n = c.n;
    let p = cube(n).map_err(KRingError::from)?;
    let mut vectors = vec![Vec::new(); 2 * n];
    for i in 1..=n {
        let mut e = vec![0; n];
        e[i - 1] = 1;
        vectors[cube_facet(i, 0)] = e;
        let mut a = vec![0; n];
        a[i - 1] = -1;
        for j in i + 1..=n {
            a[j - 1] = -c.get(i, j);
        }
        vectors[cube_facet(i, 1)] = a;
    }
    let lambda = CharacteristicMap::new(vectors, Some(0));
    let report = validate_charmap(&p, &lambda).map_err(KRingError::from)?;
    assert!(report.passed(), "unipotent data yields a valid charmap: {report}");
    Ok((p, lambda))
}

/// Relations in `y_1..y_n, w_1..w_n` with `w_i` the inverse of `y_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPresentation {
    pub matrix: BottMatrix,
    /// `(y_i - 1)(y_i - M_i)` for `i = 1..n`.
    pub defining: Vec<Poly>,
    /// `y_i w_i - 1` for `i = 1..n`.
    pub inverses: Vec<Poly>,
    /// Line-bundle labels for the `y_i`, when known.
    pub annotations: Vec<String>,
}

impl LaurentPresentation {
    pub fn n(&self) -> usize {
        self.matrix.n
    }

    pub fn nvars(&self) -> usize {
        2 * self.matrix.n
    }

    pub fn names(&self) -> VarNames {
        VarNames::Laurent(self.n())
    }

    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::degrevlex(self.nvars())
    }

    pub fn relations(&self) -> Vec<Poly> {
        self.defining.iter().chain(&self.inverses).cloned().collect()
    }
}

/// `M_i = ∏_{j<i} y_j^{-c_{j,i}}`, with negative powers written through `w_j`.
pub fn twisting_monomial(c: &BottMatrix, i: usize) -> Monomial {
    let n = c.n;
    let pairs = (1..i)
        .filter_map(|j| {
            let e = -c.get(j, i);
            match e.signum() {
                1 => Some((j - 1, e as u32)),
                -1 => Some((n + j - 1, (-e) as u32)),
                _ => None,
            }
        })
        .collect();
    Monomial::from_pairs(pairs)
}

pub fn bott_presentation(c: &BottMatrix) -> LaurentPresentation {
    let n = c.n;
    let nv = 2 * n;
    let one = Poly::one(nv);
    let mut defining = Vec::new();
    let mut inverses = Vec::new();
    for i in 1..=n {
        let y = Poly::var(nv, i - 1);
        let m = Poly::monomial(nv, twisting_monomial(c, i));
        defining.push(&(&y - &one) * &(&y - &m));
        inverses.push(&(&y * &Poly::var(nv, n + i - 1)) - &one);
    }
    LaurentPresentation { matrix: c.clone(), defining, inverses, annotations: Vec::new() }
}

/// Products `∏_{i∈S} y_i`, with `S` running over subsets in binary order.
pub fn laurent_basis_elements(n: usize) -> Vec<Poly> {
    (0..1usize << n).map(|s| Poly::monomial(2 * n, Monomial::product_of((0..n).filter(|i| s >> i & 1 == 1)))).collect()
}

pub fn laurent_basis(pres: &LaurentPresentation, budget: usize) -> Result<BasisResult, KRingError> {
    let ring = QuotientRing::new(pres.relations(), &pres.order(), budget)?;
    BasisResult::with_basis(ring, laurent_basis_elements(pres.n()), true)
}

/// `(1, 2, 4, ...)`: generic on the cube's 0/1 vertices.
pub fn cube_functional(n: usize) -> Vec<Rational> {
    (0..n).map(|k| Rational::from_integer((1i64 << k).into())).collect()
}

/// The general pipeline on the cube at `r = 1`.
pub fn bott_pipeline(c: &BottMatrix, budget: usize) -> Result<BasisResult, BottError> {
    let (p, lambda) = bott_charmap(c)?;
    let pres = build_presentation(&p, &lambda, &CoefficientSpec::ones(c.n))?;
    let ord = order_vertices(&p, &cube_functional(c.n)).map_err(KRingError::from)?;
    Ok(compute_basis(&pres, &ord, budget)?)
}

/// Images of `y_i` and `w_i` in the cube ring: `y_i ↦ (1 - x_{i,1})^{-1}`,
/// `w_i ↦ 1 - x_{i,1}`.
pub fn laurent_images(n: usize, target: &QuotientRing) -> Result<Vec<Poly>, KRingError> {
    let d = 2 * n;
    let units: Vec<Poly> = (1..=n).map(|i| Poly::one_minus_var(d, cube_facet(i, 1))).collect();
    let mut images = Vec::with_capacity(2 * n);
    for u in &units {
        images.push(invert_unit(target, u)?);
    }
    images.extend(units);
    Ok(images)
}

#[derive(Debug, Clone)]
pub struct BottEquivalence {
    pub matrix: BottMatrix,
    pub pipeline_rank: usize,
    pub laurent_rank: usize,
    pub iso: IsoReport,
    /// Images of `y_1..y_n, w_1..w_n` in the cube ring.
    pub images: Vec<Poly>,
    /// Rendered Laurent relations whose images did not vanish.
    pub failed_relations: Vec<String>,
}

impl BottEquivalence {
    pub fn expected_rank(&self) -> usize {
        1 << self.matrix.n
    }

    pub fn passed(&self) -> bool {
        self.pipeline_rank == self.expected_rank() && self.laurent_rank == self.expected_rank() && self.iso.passed()
    }
}

pub fn bott_equivalence(c: &BottMatrix, budget: usize) -> Result<BottEquivalence, BottError> {
    let pipeline = bott_pipeline(c, budget)?;
    let pres = bott_presentation(c);
    let laurent = laurent_basis(&pres, budget)?;
    let images = laurent_images(c.n, pipeline.ring())?;
    let iso = ring_map_check(&laurent, &images, &pipeline)?;
    let rels = pres.relations();
    let (order, names) = (pres.order(), pres.names());
    let failed_relations = iso.failed_relations.iter().map(|&k| rels[k].render(&order, &names)).collect();
    Ok(BottEquivalence {
        matrix: c.clone(),
        pipeline_rank: pipeline.rank(),
        laurent_rank: laurent.rank(),
        iso,
        images,
        failed_relations,
    })
}

/// Swapping `y_i` with `w_i` maps every relation into the ideal.
pub fn involution_holds(pres: &LaurentPresentation, ring: &QuotientRing) -> bool {
    let n = pres.n();
    let nv = pres.nvars();
    let swap: Vec<Poly> = (0..nv).map(|v| Poly::var(nv, if v < n { v + n } else { v - n })).collect();
    let nf = |p: Poly| ring.normal_form(&p);
    pres.relations().iter().all(|r| r.substitute(&swap, &nf).map(|p| ring.is_zero(&p)).unwrap_or(false))
}

pub fn involution_check(pres: &LaurentPresentation, budget: usize) -> Result<bool, KRingError> {
    let ring = QuotientRing::new(pres.relations(), &pres.order(), budget)?;
    Ok(involution_holds(pres, &ring))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    F,
    G,
    Matrix,
}

impl std::str::FromStr for CartanType {
    type Err = BottError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "A" => CartanType::A,
            "B" => CartanType::B,
            "C" => CartanType::C,
            "D" => CartanType::D,
            "F" => CartanType::F,
            "G" => CartanType::G,
            "matrix" => CartanType::Matrix,
            other => return Err(BottError::InvalidCartan(format!("unknown type {other:?}"))),
        })
    }
}

/// Which entry of the Cartan matrix supplies `c_{i,j}` for letters `a_i, a_j`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum PairingConvention {
    /// `A[a_j][a_i]`.
    #[default]
    Col,
    /// `A[a_i][a_j]`.
    Row,
}

impl std::str::FromStr for PairingConvention {
    type Err = BottError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "col" => Ok(PairingConvention::Col),
            "row" => Ok(PairingConvention::Row),
            other => Err(BottError::InvalidCartan(format!("unknown convention {other:?}"))),
        }
    }
}

impl fmt::Display for PairingConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairingConvention::Col => "col",
            PairingConvention::Row => "row",
        })
    }
}

/// Cartan matrices with `A_ij = 2(α_i, α_j)/(α_i, α_i)`, Bourbaki numbering.
/// In `B_n` the last root is short, in `C_n` it is long; in `G_2` the first
/// root is short.
pub fn cartan_matrix(t: CartanType, rank: usize) -> Result<Vec<Vec<i64>>, BottError> {
    let bad = |msg: &str| Err(BottError::InvalidCartan(msg.to_string()));
    let path = |n: usize| {
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        a
    };
    match t {
        CartanType::A if rank >= 1 => Ok(path(rank)),
        CartanType::B if rank >= 2 => {
            let mut a = path(rank);
            a[rank - 1][rank - 2] = -2;
            Ok(a)
        }
        CartanType::C if rank >= 2 => {
            let mut a = path(rank);
            a[rank - 2][rank - 1] = -2;
            Ok(a)
        }
        CartanType::D if rank >= 3 => {
            let mut a = path(rank);
            let (x, y, z) = (rank - 3, rank - 2, rank - 1);
            a[y][z] = 0;
            a[z][y] = 0;
            a[x][z] = -1;
            a[z][x] = -1;
            Ok(a)
        }
        CartanType::F if rank == 4 => {
            let mut a = path(4);
            a[2][1] = -2;
            Ok(a)
        }
        CartanType::G if rank == 2 => Ok(vec![vec![2, -3], vec![-1, 2]]),
        CartanType::Matrix => bad("type \"matrix\" needs explicit entries"),
        _ => bad(&format!("no type {t:?} of rank {rank}")),
    }
}

/// Checks the generalized Cartan matrix axioms.
pub fn validate_cartan(a: &[Vec<i64>]) -> Result<(), BottError> {
    let n = a.len();
    if n == 0 {
        return Err(BottError::InvalidCartan("empty matrix".into()));
    }
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(BottError::InvalidCartan(format!("row {} has length {}", i + 1, row.len())));
        }
        for (j, &v) in row.iter().enumerate() {
            let ok = if i == j { v == 2 } else { v <= 0 && (v == 0) == (a[j][i] == 0) };
            if !ok {
                return Err(BottError::InvalidCartan(format!("entry ({},{}) = {v}", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanWord {
    cartan: Vec<Vec<i64>>,
    /// Simple-root indices, 1-based.
    word: Vec<usize>,
    convention: PairingConvention,
}

impl CartanWord {
    pub fn new(cartan: Vec<Vec<i64>>, word: Vec<usize>, convention: PairingConvention) -> Result<Self, BottError> {
        validate_cartan(&cartan)?;
        if word.is_empty() {
            return Err(BottError::EmptyWord);
        }
        let rank = cartan.len();
        if let Some(k) = word.iter().position(|&a| a == 0 || a > rank) {
            return Err(BottError::WordIndex { position: k + 1, letter: word[k], rank });
        }
        Ok(CartanWord { cartan, word, convention })
    }

    pub fn of_type(
        t: CartanType,
        rank: usize,
        word: Vec<usize>,
        convention: PairingConvention,
    ) -> Result<Self, BottError> {
        Self::new(cartan_matrix(t, rank)?, word, convention)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn convention(&self) -> PairingConvention {
        self.convention
    }

    pub fn with_convention(&self, convention: PairingConvention) -> Self {
        CartanWord { convention, ..self.clone() }
    }

    /// Pairing of simple roots `a` and `b` (1-based).
    pub fn pairing(&self, a: usize, b: usize) -> i64 {
        match self.convention {
            PairingConvention::Col => self.cartan[b - 1][a - 1],
            PairingConvention::Row => self.cartan[a - 1][b - 1],
        }
    }
}

pub fn cartan_word_matrix(cw: &CartanWord) -> BottMatrix {
    let n = cw.word.len();
    let mut entries = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            entries.push((i, j, cw.pairing(cw.word[i - 1], cw.word[j - 1])));
        }
    }
    BottMatrix::from_entries(n, &entries).expect("indices are strictly upper triangular")
}

pub fn bott_samelson_presentation(cw: &CartanWord) -> LaurentPresentation {
    let c = cartan_word_matrix(cw);
    let mut pres = bott_presentation(&c);
    let names = pres.names();
    pres.annotations =
        (1..=c.n).map(|i| format!("y{i} = [O(-M_{i})], M_{i} = {}", twisting_monomial(&c, i).render(&names))).collect();
    pres
}

/// Relation `(y - 1)^{n+1}` in one variable: the ring of projective space.
pub fn projective_space_ring(n: usize, budget: usize) -> Result<BasisResult, KRingError> {
    let y = Poly::var(1, 0);
    let rel = (&y - &Poly::one(1)).pow(n as u32 + 1);
    let ring = QuotientRing::new(vec![rel], &MonomialOrder::degrevlex(1), budget)?;
    let basis = (0..=n as u32).map(|k| y.pow(k)).collect();
    BasisResult::with_basis(ring, basis, true)
}
