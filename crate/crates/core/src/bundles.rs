//! Diagrams over fans: adaptedness, valuations at fan points, Klyachko
//! spaces, and constructions of tropical points from PL functions.

use crate::error::{Error, Result};
use crate::exactalg::{intersect, rat, Rational, RationalMatrix, Subspace};
use crate::fans::{combinations, CartierData, Fan};
use crate::plsemifield::{newton_valuation, PLFunction, PLValue};
use crate::polyring::{
    buchberger, in_closed_cone, initial_ideal, iota, GroebnerBudget, Monomial, Polynomial, Ring, RingRef,
    WeightOrder,
};
use crate::troplinear::{
    circuits, common_apartment, in_closed_basis_cone, iota_in_basis, one_based, pl_bends, LinearPresentation,
    Matroid, DEFAULT_MATROID_BUDGET,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;

#[derive(Serialize, Deserialize)]
struct IdealJson {
    variables: Vec<String>,
    generators: Vec<String>,
}

/// A fiber ideal I in k[y_1..y_d]; the variables play the role of the
/// Khovanskii basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPresentation {
    ring: RingRef,
    generators: Vec<Polynomial>,
}

impl IdealPresentation {
    pub fn new(ring: RingRef, generators: Vec<Polynomial>) -> Result<Self> {
        if generators.iter().any(|g| g.ring() != &ring && **g.ring() != *ring) {
            return Err(Error::RingMismatch("generator from another ring".into()));
        }
        Ok(IdealPresentation { ring, generators })
    }

    pub fn parse(variables: &[&str], generators: &[&str]) -> Result<Self> {
        let ring = Ring::new(variables.iter().copied());
        let gens = generators.iter().map(|g| Polynomial::parse(g, &ring)).collect::<Result<_>>()?;
        Self::new(ring, gens)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }
}

impl Serialize for IdealPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IdealJson {
            variables: self.ring.names().to_vec(),
            generators: self.generators.iter().map(|g| g.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IdealPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = IdealJson::deserialize(d)?;
        let vars: Vec<&str> = j.variables.iter().map(String::as_str).collect();
        let gens: Vec<&str> = j.generators.iter().map(String::as_str).collect();
        IdealPresentation::parse(&vars, &gens).map_err(D::Error::custom)
    }
}

/// Either a linear arrangement in E (bundle case) or a general fiber ideal
/// (flat family case).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Presentation {
    Linear(LinearPresentation),
    Ideal(IdealPresentation),
}

impl Presentation {
    pub fn d(&self) -> usize {
        match self {
            Presentation::Linear(p) => p.d(),
            Presentation::Ideal(p) => p.ring.nvars(),
        }
    }

    pub fn as_linear(&self) -> Option<&LinearPresentation> {
        match self {
            Presentation::Linear(p) => Some(p),
            Presentation::Ideal(_) => None,
        }
    }

    pub fn matroid(&self) -> Result<Option<Matroid>> {
        match self {
            Presentation::Linear(p) => circuits(p, DEFAULT_MATROID_BUDGET).map(Some),
            Presentation::Ideal(_) => Ok(None),
        }
    }

    /// Fiber ring and generators of the fiber ideal. Linear presentations
    /// use y1..yd and a basis of the linear relations.
    pub fn fiber(&self) -> (RingRef, Vec<Polynomial>) {
        match self {
            Presentation::Linear(p) => {
                let ring = Ring::new((1..=p.d()).map(|j| format!("y{j}")));
                let gens = p
                    .relations()
                    .into_iter()
                    .map(|v| {
                        Polynomial::from_terms(
                            &ring,
                            v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (Monomial::var(p.d(), j), c)),
                        )
                    })
                    .collect();
                (ring, gens)
            }
            Presentation::Ideal(p) => (p.ring.clone(), p.generators.clone()),
        }
    }

    /// Names of the Rees variables attached to the basis elements.
    pub fn rees_names(&self) -> Vec<String> {
        match self {
            Presentation::Linear(p) => (1..=p.d()).map(|j| format!("Y{j}")).collect(),
            Presentation::Ideal(p) => p
                .ring
                .names()
                .iter()
                .map(|n| {
                    let tail = n.trim_start_matches(|c: char| c.is_ascii_alphabetic());
                    if !tail.is_empty() && tail.len() < n.len() && tail.chars().all(|c| c.is_ascii_digit()) {
                        format!("Y{tail}")
                    } else {
                        format!("Y_{n}")
                    }
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    fan: Fan,
    presentation: Presentation,
    matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Integer matrix of valuation values: one row per ray, one column per
/// basis element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiagramJson", into = "DiagramJson")]
pub struct Diagram {
    fan: Fan,
    presentation: Presentation,
    matrix: Vec<Vec<i64>>,
    labels: Option<Vec<String>>,
}

impl TryFrom<DiagramJson> for Diagram {
    type Error = Error;
    fn try_from(j: DiagramJson) -> Result<Self> {
        Diagram::new(j.fan, j.presentation, j.matrix)?.with_labels(j.labels)
    }
}

impl From<Diagram> for DiagramJson {
    fn from(d: Diagram) -> Self {
        DiagramJson { fan: d.fan, presentation: d.presentation, matrix: d.matrix, labels: d.labels }
    }
}

impl Diagram {
    pub fn new(fan: Fan, presentation: Presentation, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if matrix.len() != fan.n_rays() {
            return Err(Error::DimensionMismatch(format!("{} rows for {} rays", matrix.len(), fan.n_rays())));
        }
        if let Some((i, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != presentation.d()) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} entries for {} basis elements",
                i + 1,
                r.len(),
                presentation.d()
            )));
        }
        Ok(Diagram { fan, presentation, matrix, labels: None })
    }

    /// Names for the Rees variables of the columns.
    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.n_cols() {
                return Err(Error::DimensionMismatch(format!("{} labels for {} columns", l.len(), self.n_cols())));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn labels(&self) -> Vec<String> {
        self.labels.clone().unwrap_or_else(|| self.presentation.rees_names())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("diagram serializes")
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn n_cols(&self) -> usize {
        self.presentation.d()
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.matrix[i]
    }

    pub fn row_rational(&self, i: usize) -> Vec<Rational> {
        self.matrix[i].iter().map(|&x| rat(x)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|r| r[j]).collect()
    }
}

/// The row is a point of the tropical variety of the fiber ideal.
pub fn row_is_tropical(d: &Diagram, w: &[Rational], budget: &GroebnerBudget) -> Result<std::result::Result<(), String>> {
    match d.presentation.matroid()? {
        Some(m) => Ok(match m.violated_circuit(w) {
            None => Ok(()),
            Some(c) => Err(format!("minimum attained once on circuit {:?}", one_based(&c.support))),
        }),
        None => {
            let (_, gens) = d.presentation.fiber();
            if family_tropical(w, &gens, budget)? {
                Ok(Ok(()))
            } else {
                Ok(Err("the initial ideal contains a monomial".into()))
            }
        }
    }
}

/// w ∈ Trop(I) iff in_w(I) : (y_1⋯y_d)^∞ is proper.
pub fn family_tropical(w: &[Rational], gens: &[Polynomial], budget: &GroebnerBudget) -> Result<bool> {
    let gens: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Ok(true);
    }
    let ring = gens[0].ring().clone();
    let n = ring.nvars();
    let init = initial_ideal(&gens, w, budget)?;
    let mut names = ring.names().to_vec();
    names.push("u_sat".into());
    let big = Ring::new(names);
    let map: Vec<usize> = (0..n).collect();
    let mut all: Vec<Polynomial> = init.generators().iter().map(|g| g.embed(&big, &map)).collect();
    let e = vec![1; n + 1];
    all.push(Polynomial::term(&big, Monomial(e), rat(1)).sub(&Polynomial::one(&big)));
    let gb = buchberger(&all, &WeightOrder::grevlex(n + 1), budget)?;
    Ok(!gb.is_unit_ideal())
}

/// Checks every row; the first failure is returned as an error.
pub fn check_rows_tropical(d: &Diagram, budget: &GroebnerBudget) -> Result<()> {
    for i in 0..d.n_rows() {
        if let Err(detail) = row_is_tropical(d, &d.row_rational(i), budget)? {
            return Err(Error::NonTropicalRow { row: i + 1, detail });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeVerdict {
    /// 1-based ray indices.
    pub rays: Vec<usize>,
    pub adapted: bool,
    /// 1-based basis witnessing a common apartment (bundle case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub apartment: Option<Vec<usize>>,
    /// Leading monomials of the shared Gröbner basis (family case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shared_leading_monomials: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdaptednessReport {
    pub adapted: bool,
    pub cones: Vec<ConeVerdict>,
}

impl AdaptednessReport {
    pub fn failing_cones(&self) -> Vec<&ConeVerdict> {
        self.cones.iter().filter(|c| !c.adapted).collect()
    }
}

/// Shared Gröbner cone for several weights: the basis under the
/// lexicographic refinement by the weights contains all of them in its
/// closed cone exactly when some Gröbner cone does.
pub fn family_common_cone(
    rows: &[Vec<Rational>],
    gens: &[Polynomial],
    budget: &GroebnerBudget,
) -> Result<Option<crate::polyring::GroebnerBasis>> {
    let gens: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let Some(first) = gens.first() else { return Ok(None) };
    let n = first.nvars();
    let ord = WeightOrder::refined(n, rows.to_vec())?;
    let gb = buchberger(&gens, &ord, budget)?;
    Ok(if rows.iter().all(|w| in_closed_cone(w, &gb)) { Some(gb) } else { None })
}

pub fn check_adapted(d: &Diagram, budget: &GroebnerBudget) -> Result<AdaptednessReport> {
    check_rows_tropical(d, budget)?;
    let matroid = d.presentation.matroid()?;
    let (_, gens) = d.presentation.fiber();
    let mut cones = Vec::new();
    for cone in d.fan.maximal_cones() {
        if !d.fan.is_simplicial_cone(&cone) {
            return Err(Error::Precondition(format!("cone {:?} is not simplicial", one_based(&cone))));
        }
        let rows: Vec<Vec<Rational>> = cone.iter().map(|&i| d.row_rational(i)).collect();
        let mut v = ConeVerdict {
            rays: one_based(&cone),
            adapted: false,
            apartment: None,
            shared_leading_monomials: None,
            reason: None,
        };
        match &matroid {
            Some(m) => match common_apartment(&rows, m)? {
                Some(b) => {
                    v.adapted = true;
                    v.apartment = Some(one_based(&b));
                }
                None => v.reason = Some("no basis cone contains all rows of the cone".into()),
            },
            None => {
                if gens.iter().all(|g| g.is_zero()) {
                    v.adapted = true;
                    v.shared_leading_monomials = Some(Vec::new());
                } else {
                    match family_common_cone(&rows, &gens, budget)? {
                        Some(gb) => {
                            v.adapted = true;
                            v.shared_leading_monomials = Some(
                                gb.leading_monomials()
                                    .into_iter()
                                    .map(|m| Polynomial::term(gb.ring(), m, rat(1)).to_string())
                                    .collect(),
                            );
                        }
                        None => v.reason = Some("the rows share no Groebner cone".into()),
                    }
                }
            }
        }
        cones.push(v);
    }
    let adapted = cones.iter().all(|c| c.adapted);
    Ok(AdaptednessReport { adapted, cones })
}

/// Valuation vector at a point of the fan's support: ι of the barycentric
/// combination of the rows of the containing cone.
pub fn weight_at_point(d: &Diagram, point: &[Rational], budget: &GroebnerBudget) -> Result<Vec<Rational>> {
    let (cone, lam) = d.fan.locate(point)?;
    let mut w = vec![Rational::zero(); d.n_cols()];
    for (k, &i) in cone.iter().enumerate() {
        for (j, x) in w.iter_mut().enumerate() {
            *x += &lam[k] * rat(d.matrix[i][j]);
        }
    }
    match d.presentation.matroid()? {
        Some(m) => {
            let rows: Vec<Vec<Rational>> = cone.iter().map(|&i| d.row_rational(i)).collect();
            let b = common_apartment(&rows, &m)?
                .ok_or_else(|| Error::Precondition(format!("cone {:?} is not adapted", one_based(&cone))))?;
            Ok(iota_in_basis(&w, &b, &m))
        }
        None => {
            let (_, gens) = d.presentation.fiber();
            let gens: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
            if gens.is_empty() {
                return Ok(w);
            }
            iota(&w, &gens, budget)
        }
    }
}

pub fn weight_at_lattice_point(d: &Diagram, point: &[i64], budget: &GroebnerBudget) -> Result<Vec<Rational>> {
    let p: Vec<Rational> = point.iter().map(|&x| rat(x)).collect();
    weight_at_point(d, &p, budget)
}

fn linear_part(d: &Diagram) -> Result<(&LinearPresentation, Matroid)> {
    let p = d
        .presentation
        .as_linear()
        .ok_or_else(|| Error::Precondition("Klyachko spaces need a linear presentation".into()))?;
    Ok((p, circuits(p, DEFAULT_MATROID_BUDGET)?))
}

/// All bases whose closed cone contains row i.
pub fn witnessing_bases(d: &Diagram, i: usize) -> Result<Vec<Vec<usize>>> {
    let (_, m) = linear_part(d)?;
    let w = d.row_rational(i);
    let mut out = Vec::new();
    for b in m.bases() {
        if in_closed_basis_cone(&w, b, &m)? {
            out.push(b.clone());
        }
    }
    Ok(out)
}

/// G^{ρ_i}_r: span of the basis elements of value at least r, for a basis
/// adapted to row i.
pub fn klyachko_space_in_basis(d: &Diagram, i: usize, r: i64, basis: &[usize]) -> Result<Subspace> {
    let (p, m) = linear_part(d)?;
    if !in_closed_basis_cone(&d.row_rational(i), basis, &m)? {
        return Err(Error::Precondition(format!("basis {:?} is not adapted to row {}", one_based(basis), i + 1)));
    }
    let keep: Vec<usize> = basis.iter().copied().filter(|&j| d.matrix[i][j] >= r).collect();
    Ok(p.span_of(&keep))
}

pub fn klyachko_space(d: &Diagram, i: usize, r: i64) -> Result<Subspace> {
    if i >= d.n_rows() {
        return Err(Error::DimensionMismatch(format!("ray {} of {}", i + 1, d.n_rows())));
    }
    let (_, m) = linear_part(d)?;
    let b = common_apartment(&[d.row_rational(i)], &m)?.expect("a single tropical row has a basis");
    klyachko_space_in_basis(d, i, r, &b)
}

/// F_ψ = ⋂_i G^{ρ_i}_{ψ(ρ_i)}.
pub fn f_psi(d: &Diagram, psi: &CartierData) -> Result<Subspace> {
    if psi.ray_values.len() != d.n_rows() {
        return Err(Error::DimensionMismatch("one value per ray is required".into()));
    }
    let spaces: Vec<Subspace> =
        (0..d.n_rows()).map(|i| klyachko_space(d, i, psi.ray_values[i])).collect::<Result<_>>()?;
    intersect(&spaces)
}

/// Plücker relations of Gr(m, n): ring with one variable per m-subset
/// (lexicographic) and the distinct quadratic relations.
pub fn plucker_relations(m: usize, n: usize) -> (RingRef, Vec<Polynomial>) {
    let subsets = combinations(n, m);
    let name = |s: &[usize]| {
        if n < 10 {
            format!("p{}", s.iter().map(|i| (i + 1).to_string()).collect::<String>())
        } else {
            format!("p_{}", s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("_"))
        }
    };
    let ring = Ring::new(subsets.iter().map(|s| name(s)));
    let index_of = |seq: &[usize]| -> Option<(usize, i64)> {
        let mut v = seq.to_vec();
        let mut sign = 1i64;
        for a in 0..v.len() {
            for b in 0..v.len() - 1 - a {
                if v[b] > v[b + 1] {
                    v.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        subsets.iter().position(|s| *s == v).map(|k| (k, sign))
    };
    let nv = subsets.len();
    let mut seen = BTreeSet::new();
    let mut rels = Vec::new();
    if m == 0 || m >= n {
        return (ring, rels);
    }
    for small in combinations(n, m - 1) {
        for big in combinations(n, m + 1) {
            let mut f = Polynomial::zero(&ring);
            for (l, &j) in big.iter().enumerate() {
                let mut a = small.clone();
                a.push(j);
                let b: Vec<usize> = big.iter().copied().filter(|&x| x != j).collect();
                let (Some((ia, sa)), Some((ib, sb))) = (index_of(&a), index_of(&b)) else { continue };
                let sign = if l % 2 == 0 { 1 } else { -1 } * sa * sb;
                let mono = Monomial::var(nv, ia).mul(&Monomial::var(nv, ib));
                f.add_term(mono, rat(sign));
            }
            if f.is_zero() {
                continue;
            }
            let f = f.monic();
            if seen.insert(f.to_string()) {
                rels.push(f);
            }
        }
    }
    (ring, rels)
}

/// Output of the skeleton construction.
#[derive(Clone, Debug)]
pub struct SkeletonBundle {
    pub m: usize,
    pub points: Vec<Vec<i64>>,
    /// m-subsets in lexicographic order, 0-based.
    pub subsets: Vec<Vec<usize>>,
    pub functions: Vec<PLFunction>,
    /// Rows 2..m of the matrix L(m, t).
    pub lower_rows: Vec<Vec<Rational>>,
    /// The maximal minors δ_I as Laurent polynomials in t.
    pub minors: Vec<Polynomial>,
    pub draws: usize,
}

const SKELETON_DRAWS: usize = 64;

/// Support functions of the faces conv{m_i : i ∈ I} of the point
/// configuration, certified through the minors of a seeded generic matrix
/// whose first row is (t^{m_1}, ..., t^{m_n}).
pub fn skeleton_bundle(points: &[Vec<i64>], m: usize, seed: u64) -> Result<SkeletonBundle> {
    let n = points.len();
    if m == 0 || m > n {
        return Err(Error::Invalid(format!("rank {m} with {n} points")));
    }
    let k = points[0].len();
    if points.iter().any(|p| p.len() != k) {
        return Err(Error::DimensionMismatch("points of different dimensions".into()));
    }
    let ring = Ring::laurent((1..=k).map(|i| format!("t{i}")), vec![true; k])?;
    let subsets = combinations(n, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 1..=SKELETON_DRAWS {
        let lower: Vec<Vec<Rational>> = (1..m)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let num: i64 = rng.random_range(-30..=30);
                        let den: i64 = rng.random_range(1..=7);
                        crate::exactalg::rat_frac(num, den)
                    })
                    .collect()
            })
            .collect();
        let minors: Vec<Polynomial> = subsets.iter().map(|s| laplace_minor(&ring, points, &lower, s)).collect::<Result<_>>()?;
        let certified = subsets.iter().zip(&minors).all(|(s, delta)| {
            let support: BTreeSet<Vec<i32>> = delta.terms().map(|(mo, _)| mo.0.clone()).collect();
            let expected: BTreeSet<Vec<i32>> = s.iter().map(|&i| points[i].iter().map(|&x| x as i32).collect()).collect();
            support == expected
        });
        if !certified {
            continue;
        }
        let functions: Vec<PLFunction> = subsets
            .iter()
            .map(|s| PLFunction::new(k, s.iter().map(|&i| points[i].clone()).collect()))
            .collect::<Result<_>>()?;
        for (f, delta) in functions.iter().zip(&minors) {
            debug_assert_eq!(newton_valuation(delta), PLValue::Finite(f.clone()));
        }
        return Ok(SkeletonBundle { m, points: points.to_vec(), subsets, functions, lower_rows: lower, minors, draws: draw });
    }
    Err(Error::Degenerate(format!("no generic matrix found in {SKELETON_DRAWS} draws")))
}

fn laplace_minor(ring: &RingRef, points: &[Vec<i64>], lower: &[Vec<Rational>], s: &[usize]) -> Result<Polynomial> {
    let mut out = Polynomial::zero(ring);
    for (a, &i) in s.iter().enumerate() {
        let cols: Vec<usize> = s.iter().copied().filter(|&c| c != i).collect();
        let coeff = if cols.is_empty() {
            rat(1)
        } else {
            let rows = lower.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            RationalMatrix::from_rows(rows, cols.len())?.determinant()?
        };
        let coeff = if a % 2 == 0 { coeff } else { -coeff };
        out.add_term(Monomial(points[i].iter().map(|&x| x as i32).collect()), coeff);
    }
    Ok(out)
}

/// Tropical Plücker check for a tuple of PL functions indexed by m-subsets.
pub fn plucker_tropical(functions: &[PLFunction], m: usize, n: usize) -> Result<bool> {
    let (_, rels) = plucker_relations(m, n);
    for f in &rels {
        if !pl_bends(f, functions)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Newton-polytope valuations of a tuple of Laurent polynomials annihilated
/// by the given relations.
pub fn kernel_bundle(lambdas: &[Polynomial], relations: &[Polynomial]) -> Result<Vec<PLFunction>> {
    let Some(first) = lambdas.first() else { return Ok(Vec::new()) };
    let target = first.ring().clone();
    for r in relations {
        if !r.evaluate(lambdas, &target)?.is_zero() {
            return Err(Error::Precondition(format!("relation {r} does not vanish on the tuple")));
        }
    }
    lambdas
        .iter()
        .map(|l| match newton_valuation(l) {
            PLValue::Finite(f) => Ok(f),
            PLValue::Infinity => Err(Error::Invalid("a zero entry has valuation ∞".into())),
        })
        .collect()
}

/// Same as [`kernel_bundle`] with the circuits of a matroid as relations.
pub fn kernel_bundle_linear(lambdas: &[Polynomial], m: &Matroid) -> Result<Vec<PLFunction>> {
    let ring = m.default_ring();
    kernel_bundle(lambdas, &m.linear_forms(&ring))
}

/// Diagram of ray values of PL functions that are linear on every cone.
pub fn diagram_from_pl(fan: &Fan, phis: &[PLFunction], presentation: Presentation) -> Result<Diagram> {
    if phis.len() != presentation.d() {
        return Err(Error::DimensionMismatch("one PL function per basis element is required".into()));
    }
    if phis.iter().any(|f| f.rank() != fan.dim()) {
        return Err(Error::DimensionMismatch("PL function rank differs from the fan dimension".into()));
    }
    for cone in fan.maximal_cones() {
        for (j, f) in phis.iter().enumerate() {
            if f.is_linear_on_cone(fan, &cone).is_none() {
                return Err(Error::NotLinearOnCone { cone: one_based(&cone), function: j + 1 });
            }
        }
    }
    let matrix = fan
        .rays()
        .iter()
        .map(|r| phis.iter().map(|f| f.evaluate(r)).collect::<Result<Vec<i64>>>())
        .collect::<Result<_>>()?;
    Diagram::new(fan.clone(), presentation, matrix)
}

/// The Plücker ideal of Gr(m, n) as a presentation.
pub fn plucker_presentation(m: usize, n: usize) -> Presentation {
    let (ring, rels) = plucker_relations(m, n);
    Presentation::Ideal(IdealPresentation { ring, generators: rels })
}
