//! Matroids of linear ideals: circuits, bases, tropical membership and
//! apartment (basis cone) tests.

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, kernel, parse_rational, rat, Rational, RationalMatrix, Subspace};
use crate::fans::combinations;
use crate::plsemifield::PLFunction;
use crate::polyring::{Monomial, Polynomial, Ring, RingRef};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const DEFAULT_MATROID_BUDGET: usize = 12;

/// A rational read from JSON as `"p/q"` or as a bare integer.
#[derive(Deserialize)]
#[serde(untagged)]
enum RatJson {
    Text(String),
    Int(i64),
}

fn rational_from_json(r: RatJson) -> Result<Rational> {
    match r {
        RatJson::Text(s) => parse_rational(&s),
        RatJson::Int(i) => Ok(rat(i)),
    }
}

#[derive(Serialize, Deserialize)]
struct LinearJson {
    columns: Vec<Vec<serde_json::Value>>,
}

/// The elements b_1..b_d of the fiber E, as coordinate columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearPresentation {
    columns: Vec<Vec<Rational>>,
}

impl Serialize for LinearPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|x| serde_json::Value::String(format_rational(x))).collect())
            .collect();
        LinearJson { columns }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = LinearJson::deserialize(d)?;
        let mut columns = Vec::new();
        for c in j.columns {
            let mut col = Vec::new();
            for v in c {
                let r: RatJson = serde_json::from_value(v).map_err(D::Error::custom)?;
                col.push(rational_from_json(r).map_err(D::Error::custom)?);
            }
            columns.push(col);
        }
        LinearPresentation::new(columns).map_err(D::Error::custom)
    }
}

impl LinearPresentation {
    pub fn new(columns: Vec<Vec<Rational>>) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::Invalid("a linear presentation needs at least one column".into()));
        };
        let e = first.len();
        if columns.iter().any(|c| c.len() != e) {
            return Err(Error::DimensionMismatch("columns of different lengths".into()));
        }
        Ok(LinearPresentation { columns })
    }

    pub fn from_i64(columns: &[Vec<i64>]) -> Result<Self> {
        Self::new(columns.iter().map(|c| c.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Number of elements.
    pub fn d(&self) -> usize {
        self.columns.len()
    }

    /// Dimension of the coordinate space holding the columns.
    pub fn dim_e(&self) -> usize {
        self.columns[0].len()
    }

    pub fn columns(&self) -> &[Vec<Rational>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[Rational] {
        &self.columns[j]
    }

    /// dim_e × d matrix with the elements as columns.
    pub fn matrix(&self) -> RationalMatrix {
        let rows = (0..self.dim_e()).map(|i| self.columns.iter().map(|c| c[i].clone()).collect()).collect();
        RationalMatrix::from_rows(rows, self.d()).expect("rectangular")
    }

    pub fn rank(&self) -> usize {
        self.matrix().rank()
    }

    fn sub_rank(&self, subset: &[usize]) -> usize {
        if subset.is_empty() {
            return 0;
        }
        let rows = (0..self.dim_e()).map(|i| subset.iter().map(|&j| self.columns[j][i].clone()).collect()).collect();
        RationalMatrix::from_rows(rows, subset.len()).expect("rectangular").rank()
    }

    pub fn span_of(&self, subset: &[usize]) -> Subspace {
        Subspace::span(self.dim_e(), subset.iter().map(|&j| self.columns[j].clone()).collect()).expect("lengths")
    }

    /// Linear relations among the elements: a kernel basis of the matrix.
    pub fn relations(&self) -> Vec<Vec<Rational>> {
        kernel(&self.matrix()).basis_vectors()
    }
}

/// A minimal dependent set with a kernel vector supported exactly on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub support: Vec<usize>,
    pub vector: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    d: usize,
    rank: usize,
    circuits: Vec<Circuit>,
    bases: Vec<Vec<usize>>,
}

/// Circuits and bases by exhaustive subset enumeration.
pub fn circuits(p: &LinearPresentation, budget: usize) -> Result<Matroid> {
    let d = p.d();
    if d > budget {
        return Err(Error::Budget(format!("{d} elements exceed the matroid enumeration budget {budget}")));
    }
    let rank = p.rank();
    let mut circuits = Vec::new();
    for k in 1..=(rank + 1).min(d) {
        for s in combinations(d, k) {
            let rows: Vec<Vec<Rational>> =
                (0..p.dim_e()).map(|i| s.iter().map(|&j| p.columns[j][i].clone()).collect()).collect();
            let ker = kernel(&RationalMatrix::from_rows(rows, k)?);
            if ker.dim() != 1 {
                continue;
            }
            let v = &ker.basis_vectors()[0];
            if v.iter().any(|x| x.is_zero()) {
                continue;
            }
            let mut vector = vec![Rational::zero(); d];
            for (a, &j) in s.iter().enumerate() {
                vector[j] = v[a].clone();
            }
            circuits.push(Circuit { support: s, vector });
        }
    }
    let bases = combinations(d, rank).into_iter().filter(|b| p.sub_rank(b) == rank).collect();
    Ok(Matroid { d, rank, circuits, bases })
}

impl Matroid {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn circuits(&self) -> &[Circuit] {
        &self.circuits
    }

    /// Bases in lexicographic order.
    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    pub fn is_uniform(&self) -> bool {
        self.bases.len() == combinations(self.d, self.rank).len()
    }

    pub fn is_independent(&self, s: &[usize]) -> bool {
        self.bases.iter().any(|b| s.iter().all(|x| b.contains(x)))
    }

    /// The unique circuit inside B ∪ {j} for j outside the basis B.
    pub fn fundamental_circuit(&self, basis: &[usize], j: usize) -> Option<&Circuit> {
        self.circuits
            .iter()
            .find(|c| c.support.contains(&j) && c.support.iter().all(|i| *i == j || basis.contains(i)))
    }

    /// The circuits as linear forms in a ring with one variable per element.
    pub fn linear_forms(&self, ring: &RingRef) -> Vec<Polynomial> {
        self.circuits
            .iter()
            .map(|c| {
                Polynomial::from_terms(
                    ring,
                    c.support.iter().map(|&j| (Monomial::var(ring.nvars(), j), c.vector[j].clone())),
                )
            })
            .collect()
    }

    pub fn default_ring(&self) -> RingRef {
        Ring::new((1..=self.d).map(|j| format!("y{j}")))
    }

    /// First circuit on which the minimum of w is attained only once.
    pub fn violated_circuit(&self, w: &[Rational]) -> Option<&Circuit> {
        self.circuits.iter().find(|c| {
            let m = c.support.iter().map(|&j| &w[j]).min().expect("nonempty");
            c.support.iter().filter(|&&j| &w[j] == m).count() < 2
        })
    }

    /// Max-weight basis; by the exchange property it lies in the closed
    /// cone of w.
    pub fn max_weight_basis(&self, w: &[Rational]) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.d).collect();
        order.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
        let mut chosen: Vec<usize> = Vec::new();
        for j in order {
            let mut t = chosen.clone();
            t.push(j);
            if self.is_independent(&t) {
                chosen = t;
            }
        }
        chosen.sort();
        chosen
    }
}

/// Min of w over every circuit support is attained at least twice.
pub fn trop_member_scalar(w: &[Rational], m: &Matroid) -> Result<bool> {
    if w.len() != m.d {
        return Err(Error::DimensionMismatch(format!("weight of length {} for {} elements", w.len(), m.d)));
    }
    Ok(m.violated_circuit(w).is_none())
}

pub fn trop_member_scalar_i64(w: &[i64], m: &Matroid) -> Result<bool> {
    let w: Vec<Rational> = w.iter().map(|&x| rat(x)).collect();
    trop_member_scalar(&w, m)
}

/// For every circuit J and j ∈ J, ⊕_{J} ψ = ⊕_{J∖j} ψ.
pub fn trop_member_pl(phis: &[PLFunction], m: &Matroid) -> Result<bool> {
    if phis.len() != m.d {
        return Err(Error::DimensionMismatch("one PL function per element is required".into()));
    }
    for c in &m.circuits {
        let terms: Vec<PLFunction> = c.support.iter().map(|&j| phis[j].clone()).collect();
        if !pl_terms_bend(&terms)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn tropical_sum(fs: &[&PLFunction]) -> Result<PLFunction> {
    let mut acc = fs[0].clone();
    for f in &fs[1..] {
        acc = acc.trop_add(f)?;
    }
    Ok(acc)
}

/// The pointwise minimum of the terms is attained at least twice everywhere.
pub fn pl_terms_bend(terms: &[PLFunction]) -> Result<bool> {
    if terms.len() < 2 {
        return Ok(false);
    }
    let all: Vec<&PLFunction> = terms.iter().collect();
    let total = tropical_sum(&all)?;
    for j in 0..terms.len() {
        let rest: Vec<&PLFunction> = terms.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, t)| t).collect();
        if tropical_sum(&rest)? != total {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tropical membership of a PL tuple for one polynomial relation: each
/// monomial term contributes ⊗ ψ_i^{a_i}.
pub fn pl_bends(f: &Polynomial, phis: &[PLFunction]) -> Result<bool> {
    if phis.len() != f.nvars() {
        return Err(Error::DimensionMismatch("one PL function per variable is required".into()));
    }
    let rank = phis.first().map(|p| p.rank()).unwrap_or(0);
    let mut terms = Vec::new();
    for (m, _) in f.terms() {
        let mut acc = PLFunction::zero_form(rank);
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                acc = acc.trop_mul(&phis[i])?;
            }
        }
        terms.push(acc);
    }
    pl_terms_bend(&terms)
}

/// Scalar tropical membership for one polynomial: the minimal term weight
/// is attained at least twice.
pub fn scalar_bends(f: &Polynomial, w: &[Rational]) -> bool {
    let ws: Vec<Rational> = f.terms().map(|(m, _)| m.weight(w)).collect();
    match ws.iter().min() {
        Some(m) => ws.iter().filter(|x| *x == m).count() >= 2,
        None => true,
    }
}

/// Every non-basis element j is initial in its fundamental circuit:
/// w_j ≤ w_i for all other i in C(j, B).
pub fn in_closed_basis_cone(w: &[Rational], basis: &[usize], m: &Matroid) -> Result<bool> {
    if !m.bases.iter().any(|b| b == basis) {
        return Err(Error::Precondition(format!("{basis:?} is not a basis")));
    }
    for j in (0..m.d).filter(|j| !basis.contains(j)) {
        let c = m.fundamental_circuit(basis, j).expect("fundamental circuit exists");
        if c.support.iter().any(|&i| i != j && w[j] > w[i]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lexicographically least basis whose closed cone holds every row.
pub fn common_apartment(rows: &[Vec<Rational>], m: &Matroid) -> Result<Option<Vec<usize>>> {
    for (r, w) in rows.iter().enumerate() {
        if w.len() != m.d {
            return Err(Error::DimensionMismatch("row length".into()));
        }
        if let Some(c) = m.violated_circuit(w) {
            return Err(Error::NonTropicalRow {
                row: r + 1,
                detail: format!("minimum attained once on circuit {:?}", one_based(&c.support)),
            });
        }
    }
    for b in &m.bases {
        let mut ok = true;
        for w in rows {
            if !in_closed_basis_cone(w, b, m)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(b.clone()));
        }
    }
    Ok(None)
}

pub(crate) fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// ι(w) for a linear ideal: expand each element in a basis from the closed
/// cone of w and take the minimal weight of the expansion.
pub fn iota_linear(w: &[Rational], m: &Matroid) -> Result<Vec<Rational>> {
    if w.len() != m.d {
        return Err(Error::DimensionMismatch("weight length".into()));
    }
    let b = m.max_weight_basis(w);
    Ok(iota_in_basis(w, &b, m))
}

pub(crate) fn iota_in_basis(w: &[Rational], basis: &[usize], m: &Matroid) -> Vec<Rational> {
    (0..m.d)
        .map(|j| {
            if basis.contains(&j) {
                w[j].clone()
            } else {
                let c = m.fundamental_circuit(basis, j).expect("fundamental circuit exists");
                c.support.iter().filter(|&&i| i != j).map(|&i| w[i].clone()).min().expect("circuit of size ≥ 2")
            }
        })
        .collect()
}

/// Coordinates of element j in the basis B (so b_j = Σ c_i b_i).
pub fn expansion_in_basis(p: &LinearPresentation, basis: &[usize], j: usize) -> Result<Vec<Rational>> {
    let rows = (0..p.dim_e()).map(|i| basis.iter().map(|&k| p.columns[k][i].clone()).collect()).collect();
    let a = RationalMatrix::from_rows(rows, basis.len())?;
    a.solve(&p.columns[j])?
        .ok_or_else(|| Error::Invalid(format!("element {} is not in the span of the basis", j + 1)))
}

/// True when the scaled circuit vector is ±1 on its support.
pub fn is_signed_unit(c: &Circuit) -> bool {
    let first = &c.vector[c.support[0]];
    c.support.iter().all(|&j| {
        let q = &c.vector[j] / first;
        q == Rational::one() || q == -Rational::one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn ri(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn hyper(d: usize) -> LinearPresentation {
        let mut cols: Vec<Vec<i64>> = (0..d - 1).map(|i| (0..d - 1).map(|k| (k == i) as i64).collect()).collect();
        cols.push(vec![-1; d - 1]);
        LinearPresentation::from_i64(&cols).unwrap()
    }

    #[test]
    fn circuits_of_small_presentations() {
        let m = circuits(&hyper(4), 12).unwrap();
        assert_eq!(m.circuits().len(), 1);
        assert_eq!(m.circuits()[0].support, vec![0, 1, 2, 3]);
        let id = LinearPresentation::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(circuits(&id, 12).unwrap().circuits().is_empty());
        let gen = LinearPresentation::from_i64(&[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]).unwrap();
        let gm = circuits(&gen, 12).unwrap();
        assert_eq!(gm.circuits().len(), 4);
        assert!(gm.is_uniform());
        assert!(circuits(&hyper(13), 12).is_err());
    }

    #[test]
    fn scalar_membership() {
        let m = circuits(&hyper(4), 12).unwrap();
        assert!(trop_member_scalar(&ri(&[2, 1, 0, 0]), &m).unwrap());
        assert!(trop_member_scalar(&ri(&[0, 0, 0, 0]), &m).unwrap());
        assert!(!trop_member_scalar(&ri(&[0, 1, 1, 1]), &m).unwrap());
    }

    #[test]
    fn basis_cones_for_the_plane_hypersurface() {
        let m = circuits(&hyper(6), 12).unwrap();
        let w = ri(&[0, 4, 0, 2, 1, 3]);
        assert!(in_closed_basis_cone(&w, &[1, 2, 3, 4, 5], &m).unwrap());
        assert!(in_closed_basis_cone(&w, &[0, 1, 3, 4, 5], &m).unwrap());
        assert!(!in_closed_basis_cone(&w, &[0, 2, 3, 4, 5], &m).unwrap());
        let rows = vec![ri(&[0, 4, 0, 2, 1, 3]), ri(&[0, 0, 4, 1, 3, 2])];
        assert_eq!(common_apartment(&rows, &m).unwrap(), Some(vec![1, 2, 3, 4, 5]));
        let bad = vec![ri(&[0, 1, 1, 1, 1, 1])];
        assert!(matches!(common_apartment(&bad, &m), Err(Error::NonTropicalRow { .. })));
    }

    #[test]
    fn no_common_apartment_for_spread_minima() {
        let m = circuits(&hyper(4), 12).unwrap();
        let rows = vec![ri(&[2, 1, 0, 0]), ri(&[0, 0, 2, 1])];
        assert_eq!(common_apartment(&rows, &m).unwrap(), None);
    }

    #[test]
    fn iota_lifts_non_tropical_weights() {
        let m = circuits(&hyper(4), 12).unwrap();
        assert_eq!(iota_linear(&ri(&[0, 1, 1, 1]), &m).unwrap(), ri(&[1, 1, 1, 1]));
        assert_eq!(iota_linear(&ri(&[2, 1, 0, 0]), &m).unwrap(), ri(&[2, 1, 0, 0]));
    }

    #[test]
    fn pl_membership() {
        let m = circuits(&hyper(3), 12).unwrap();
        let f = |g: &[[i64; 2]]| PLFunction::new(2, g.iter().map(|x| x.to_vec()).collect()).unwrap();
        let same = vec![f(&[[1, 0]]); 3];
        assert!(trop_member_pl(&same, &m).unwrap());
        // triangle of edges: min{x,0}, min{x,y}, min{0,y}
        let edges = vec![f(&[[0, 0], [1, 0]]), f(&[[1, 0], [0, 1]]), f(&[[0, 0], [0, 1]])];
        assert!(trop_member_pl(&edges, &m).unwrap());
        let low = vec![f(&[[0, 0], [1, 0]]), f(&[[0, 0]]), f(&[[0, 0]])];
        assert!(!trop_member_pl(&low, &m).unwrap());
    }
}
