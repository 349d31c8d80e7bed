//! Concave integral piecewise-linear functions ρ ↦ min_k ⟨ρ, m_k⟩, stored by
//! the vertex set of the convex hull of the m_k.

use crate::error::{Error, Result};
use crate::exactalg::{lp_feasible, rat, Rational, RationalMatrix};
use crate::fans::Fan;
use crate::polyring::Polynomial;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct PLJson {
    rank: usize,
    generators: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PLJson", into = "PLJson")]
pub struct PLFunction {
    rank: usize,
    vertices: Vec<Vec<i64>>,
}

impl TryFrom<PLJson> for PLFunction {
    type Error = Error;
    fn try_from(j: PLJson) -> Result<Self> {
        PLFunction::new(j.rank, j.generators)
    }
}

impl From<PLFunction> for PLJson {
    fn from(f: PLFunction) -> PLJson {
        PLJson { rank: f.rank, generators: f.vertices }
    }
}

impl PLFunction {
    pub fn new(rank: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Invalid("a PL function needs at least one linear form".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != rank) {
            return Err(Error::DimensionMismatch(format!("generator {g:?} in rank {rank}")));
        }
        Ok(PLFunction { rank, vertices: hull_vertices(rank, generators) })
    }

    pub fn linear(m: Vec<i64>) -> Self {
        PLFunction { rank: m.len(), vertices: vec![m] }
    }

    pub fn zero_form(rank: usize) -> Self {
        Self::linear(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Canonical generators: hull vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn is_linear(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn evaluate(&self, rho: &[i64]) -> Result<i64> {
        if rho.len() != self.rank {
            return Err(Error::DimensionMismatch("evaluation point".into()));
        }
        Ok(self.vertices.iter().map(|m| pair(m, rho)).min().expect("nonempty"))
    }

    pub fn evaluate_rational(&self, rho: &[Rational]) -> Rational {
        self.vertices
            .iter()
            .map(|m| m.iter().zip(rho).fold(rat(0), |a, (x, y)| a + rat(*x) * y))
            .min()
            .expect("nonempty")
    }

    fn check_rank(&self, other: &PLFunction) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::DimensionMismatch(format!("ranks {} and {}", self.rank, other.rank)));
        }
        Ok(())
    }

    /// Pointwise minimum.
    pub fn trop_add(&self, other: &PLFunction) -> Result<PLFunction> {
        self.check_rank(other)?;
        let mut g = self.vertices.clone();
        g.extend(other.vertices.iter().cloned());
        PLFunction::new(self.rank, g)
    }

    /// Pointwise sum.
    pub fn trop_mul(&self, other: &PLFunction) -> Result<PLFunction> {
        self.check_rank(other)?;
        let mut g = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                g.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        PLFunction::new(self.rank, g)
    }

    /// Pointwise `self ≥ other`, i.e. the hull of self lies in the hull of other.
    pub fn dominates(&self, other: &PLFunction) -> Result<bool> {
        Ok(&self.trop_add(other)? == other)
    }

    /// A generator that realizes the minimum at every ray of the cone.
    pub fn is_linear_on_cone(&self, fan: &Fan, cone: &[usize]) -> Option<Vec<i64>> {
        let vals: Vec<i64> = cone.iter().map(|&i| self.evaluate(fan.ray(i)).expect("rank")).collect();
        self.vertices
            .iter()
            .find(|m| cone.iter().zip(&vals).all(|(&i, v)| pair(m, fan.ray(i)) == *v))
            .cloned()
    }
}

fn pair(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A PL function or the additive identity ∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PLValue {
    Finite(PLFunction),
    Infinity,
}

impl PLValue {
    pub fn trop_add(&self, other: &PLValue) -> Result<PLValue> {
        Ok(match (self, other) {
            (PLValue::Infinity, x) | (x, PLValue::Infinity) => x.clone(),
            (PLValue::Finite(a), PLValue::Finite(b)) => PLValue::Finite(a.trop_add(b)?),
        })
    }

    pub fn trop_mul(&self, other: &PLValue) -> Result<PLValue> {
        Ok(match (self, other) {
            (PLValue::Infinity, _) | (_, PLValue::Infinity) => PLValue::Infinity,
            (PLValue::Finite(a), PLValue::Finite(b)) => PLValue::Finite(a.trop_mul(b)?),
        })
    }

    /// Tropical power (k-fold product); k = 0 gives the zero form.
    pub fn trop_pow(&self, k: u32, rank: usize) -> Result<PLValue> {
        let mut acc = PLValue::Finite(PLFunction::zero_form(rank));
        for _ in 0..k {
            acc = acc.trop_mul(self)?;
        }
        Ok(acc)
    }

    pub fn evaluate(&self, rho: &[i64]) -> Result<Option<i64>> {
        match self {
            PLValue::Finite(f) => f.evaluate(rho).map(Some),
            PLValue::Infinity => Ok(None),
        }
    }
}

impl From<PLFunction> for PLValue {
    fn from(f: PLFunction) -> Self {
        PLValue::Finite(f)
    }
}

/// Support function of the Newton polytope; ∞ for the zero polynomial.
/// Every variable of the ring is a torus coordinate.
pub fn newton_valuation(p: &Polynomial) -> PLValue {
    if p.is_zero() {
        return PLValue::Infinity;
    }
    let gens: Vec<Vec<i64>> = p.terms().map(|(m, _)| m.0.iter().map(|&e| e as i64).collect()).collect();
    PLValue::Finite(PLFunction::new(p.nvars(), gens).expect("nonempty with matching lengths"))
}

fn hull_vertices(rank: usize, pts: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let uniq: Vec<Vec<i64>> = pts.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    if uniq.len() <= 1 {
        return uniq;
    }
    match rank {
        0 => uniq,
        1 => {
            let lo = uniq.first().unwrap().clone();
            let hi = uniq.last().unwrap().clone();
            vec![lo, hi]
        }
        2 => {
            let mut v = monotone_chain(&uniq);
            v.sort();
            v
        }
        _ => redundancy_elimination(uniq),
    }
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

/// Convex hull vertices (strict) of sorted distinct planar points.
fn monotone_chain(p: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut lower: Vec<Vec<i64>> = Vec::new();
    for q in p {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q.clone());
    }
    let mut upper: Vec<Vec<i64>> = Vec::new();
    for q in p.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn redundancy_elimination(mut pts: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let mut i = 0;
    while i < pts.len() {
        let others: Vec<&Vec<i64>> = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
        if in_convex_hull(&pts[i], &others) {
            pts.remove(i);
        } else {
            i += 1;
        }
    }
    pts
}

fn in_convex_hull(p: &[i64], others: &[&Vec<i64>]) -> bool {
    if others.is_empty() {
        return false;
    }
    let n = p.len();
    let k = others.len();
    let mut rows: Vec<Vec<Rational>> = (0..n).map(|c| others.iter().map(|q| rat(q[c])).collect()).collect();
    rows.push(vec![rat(1); k]);
    let mut b: Vec<Rational> = p.iter().map(|&x| rat(x)).collect();
    b.push(rat(1));
    let a = RationalMatrix::from_rows(rows, k).expect("shape");
    matches!(lp_feasible(&a, &b), Ok(Some(_)))
}

fn primitive(v: (i64, i64)) -> (i64, i64) {
    let g = v.0.gcd(&v.1);
    (v.0 / g, v.1 / g)
}

fn half(r: (i64, i64)) -> u8 {
    if r.1 > 0 || (r.1 == 0 && r.0 > 0) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let c = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
        0.cmp(&c)
    })
}

/// Complete planar fan on whose cones every input function is linear.
/// Rays are the inner edge normals of the Newton polygons; gaps of angle
/// at least π are split by inserting the ray rotated a quarter turn.
pub fn linearity_fan(functions: &[PLFunction]) -> Result<Fan> {
    if functions.iter().any(|f| f.rank != 2) {
        return Err(Error::Precondition("linearity_fan is implemented in rank 2 only".into()));
    }
    let mut rays: BTreeSet<(i64, i64)> = BTreeSet::new();
    for f in functions {
        let v = &f.vertices;
        for a in 0..v.len() {
            for b in a + 1..v.len() {
                let d = (v[b][0] - v[a][0], v[b][1] - v[a][1]);
                for rho in [primitive((-d.1, d.0)), primitive((d.1, -d.0))] {
                    let r = [rho.0, rho.1];
                    let val = pair(&v[a], &r);
                    if v.iter().all(|m| pair(m, &r) >= val) {
                        rays.insert(rho);
                    }
                }
            }
        }
    }
    let mut rays: Vec<(i64, i64)> = rays.into_iter().collect();
    if rays.is_empty() {
        rays.push((1, 0));
    }
    loop {
        rays.sort_by(|a, b| angle_cmp(*a, *b));
        let k = rays.len();
        let gap = (0..k).find(|&i| {
            let (a, b) = (rays[i], rays[(i + 1) % k]);
            let c = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
            k == 1 || c <= 0
        });
        match gap {
            Some(i) => {
                let a = rays[i];
                rays.push((-a.1, a.0));
            }
            None => break,
        }
    }
    let k = rays.len();
    let cones = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    Fan::new(2, rays.into_iter().map(|r| vec![r.0, r.1]).collect(), cones)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(g: &[[i64; 2]]) -> PLFunction {
        PLFunction::new(2, g.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn add_and_mul_examples() {
        let f = pl(&[[1, 0], [0, 0]]);
        let g = pl(&[[0, 0], [0, 1]]);
        assert_eq!(f.trop_add(&g).unwrap(), pl(&[[1, 0], [0, 0], [0, 1]]));
        assert_eq!(f.trop_add(&f).unwrap(), f);
        assert_eq!(f.trop_mul(&PLFunction::zero_form(2)).unwrap(), f);
        let prod = f.trop_mul(&g).unwrap();
        assert_eq!(prod, pl(&[[1, 1], [1, 0], [0, 1], [0, 0]]));
        assert_eq!(PLValue::Finite(f.clone()).trop_add(&PLValue::Infinity).unwrap(), PLValue::Finite(f));
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let f = pl(&[[0, 0], [2, 0], [0, 2], [1, 0], [1, 1], [0, 1]]);
        assert_eq!(f.vertices(), &[vec![0, 0], vec![0, 2], vec![2, 0]]);
        let h = PLFunction::new(3, vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0], vec![1, 1, 0]]).unwrap();
        assert_eq!(h.vertices().len(), 5);
        let h2 = PLFunction::new(3, vec![vec![0, 0, 0], vec![2, 0, 0], vec![1, 0, 0]]).unwrap();
        assert_eq!(h2.vertices().len(), 2);
    }

    #[test]
    fn evaluation() {
        let f = pl(&[[1, 0], [0, 1]]);
        assert_eq!(f.evaluate(&[1, 1]).unwrap(), 1);
        assert_eq!(f.evaluate(&[0, 0]).unwrap(), 0);
        assert_eq!(f.evaluate(&[2, -1]).unwrap(), -1);
    }

    #[test]
    fn linear_on_cone() {
        let f = pl(&[[1, 0], [0, 0]]);
        let fan = Fan::new(2, vec![vec![1, 0], vec![1, 1], vec![-1, -1]], vec![vec![0, 1], vec![0, 2]]).unwrap();
        assert_eq!(f.is_linear_on_cone(&fan, &[0, 1]), Some(vec![0, 0]));
        assert_eq!(f.is_linear_on_cone(&fan, &[0, 2]), None);
    }

    #[test]
    fn linearity_fans() {
        let single = linearity_fan(&[PLFunction::linear(vec![3, 1])]).unwrap();
        assert_eq!(single.n_rays(), 4);
        assert!(single.validate().valid);
        let seg = linearity_fan(&[pl(&[[1, 0], [0, 0]])]).unwrap();
        assert_eq!(seg.rays(), &[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]);
        assert!(linearity_fan(&[PLFunction::linear(vec![1, 2, 3])]).is_err());
    }
}
