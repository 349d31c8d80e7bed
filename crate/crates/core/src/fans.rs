//! Simplicial rational fans in a lattice N and Cartier data on them.

use crate::error::{Error, Result};
use crate::exactalg::{lp_feasible, rat, Rational, RationalMatrix};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct FanJson {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

/// Rays plus cones given as ray-index sets. All faces of listed cones are
/// present (completed on construction).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FanJson", into = "FanJson")]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

impl TryFrom<FanJson> for Fan {
    type Error = Error;
    fn try_from(j: FanJson) -> Result<Fan> {
        Fan::new(j.dim, j.rays, j.cones)
    }
}

impl From<Fan> for FanJson {
    fn from(f: Fan) -> FanJson {
        FanJson { dim: f.dim, cones: f.maximal_cones(), rays: f.rays }
    }
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch(format!("ray {i} has length {} in dimension {dim}", r.len())));
            }
        }
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &cones {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::Invalid(format!("cone refers to missing ray {bad}")));
            }
            if c.len() > 20 {
                return Err(Error::Invalid("cone with too many rays".into()));
            }
            for mask in 1u32..(1u32 << c.len()) {
                let face: Vec<usize> = (0..c.len()).filter(|b| mask >> b & 1 == 1).map(|b| c[b]).collect();
                all.insert(face);
            }
        }
        let mut cones: Vec<Vec<usize>> = all.into_iter().collect();
        cones.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        Ok(Fan { dim, rays, cones })
    }

    /// The fan of projective space P^n: rays e_1..e_n and -(e_1+..+e_n).
    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
        Fan::new(n, rays, cones).expect("well-formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    /// All nonempty cones, faces included.
    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn maximal_cones(&self) -> Vec<Vec<usize>> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|d| d.len() > c.len() && c.iter().all(|i| d.contains(i))))
            .cloned()
            .collect()
    }

    fn ray_matrix(&self, cone: &[usize]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(&cone.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>(), self.dim)
            .expect("ray lengths checked")
    }

    pub fn is_simplicial_cone(&self, cone: &[usize]) -> bool {
        self.ray_matrix(cone).rank() == cone.len()
    }

    pub fn validate(&self) -> FanValidation {
        let mut issues = Vec::new();
        let primitive = self.rays.iter().enumerate().all(|(i, r)| {
            let g = r.iter().fold(0i64, |g, &x| g.gcd(&x));
            if g != 1 {
                issues.push(format!("ray {i} is not primitive"));
            }
            g == 1
        });
        let mut distinct = true;
        for i in 0..self.rays.len() {
            for j in i + 1..self.rays.len() {
                if self.rays[i] == self.rays[j] {
                    distinct = false;
                    issues.push(format!("rays {i} and {j} coincide"));
                }
            }
        }
        let mut simplicial = true;
        for c in self.maximal_cones() {
            if !self.is_simplicial_cone(&c) {
                simplicial = false;
                issues.push(format!("cone {c:?} is not simplicial"));
            }
        }
        let faces_closed = self.cones.iter().all(|c| {
            (0..c.len()).all(|skip| {
                let f: Vec<usize> = c.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &x)| x).collect();
                f.is_empty() || self.cones.contains(&f)
            })
        });
        let mut intersections = true;
        if simplicial {
            let maxc = self.maximal_cones();
            for a in 0..maxc.len() {
                for b in a + 1..maxc.len() {
                    if !self.meet_is_face(&maxc[a], &maxc[b]) {
                        intersections = false;
                        issues.push(format!("cones {:?} and {:?} meet outside a common face", maxc[a], maxc[b]));
                    }
                }
            }
        }
        FanValidation {
            primitive,
            distinct,
            simplicial,
            faces_closed,
            intersections_proper: intersections,
            valid: primitive && distinct && simplicial && faces_closed && intersections,
            issues,
        }
    }

    /// For simplicial cones: no point of the intersection uses a ray outside
    /// the common face (an exact feasibility problem).
    fn meet_is_face(&self, s: &[usize], t: &[usize]) -> bool {
        let only_s: Vec<usize> = s.iter().copied().filter(|i| !t.contains(i)).collect();
        let only_t: Vec<usize> = t.iter().copied().filter(|i| !s.contains(i)).collect();
        if only_s.is_empty() || only_t.is_empty() {
            return true;
        }
        // variables: lambda over s, mu over t
        let nv = s.len() + t.len();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for k in 0..self.dim {
            let mut row = Vec::with_capacity(nv);
            row.extend(s.iter().map(|&i| rat(self.rays[i][k])));
            row.extend(t.iter().map(|&i| rat(-self.rays[i][k])));
            rows.push(row);
        }
        let mut norm = Vec::with_capacity(nv);
        norm.extend(s.iter().map(|i| rat(only_s.contains(i) as i64)));
        norm.extend(t.iter().map(|i| rat(only_t.contains(i) as i64)));
        rows.push(norm);
        let mut b = vec![Rational::zero(); self.dim];
        b.push(rat(1));
        let a = RationalMatrix::from_rows(rows, nv).expect("shape");
        matches!(lp_feasible(&a, &b), Ok(None))
    }

    /// Smoothness per maximal cone: the ray matrix extends to a lattice basis.
    pub fn is_smooth(&self) -> Vec<(Vec<usize>, bool)> {
        self.maximal_cones().into_iter().map(|c| {
            let ok = self.cone_is_smooth(&c);
            (c, ok)
        }).collect()
    }

    pub fn cone_is_smooth(&self, cone: &[usize]) -> bool {
        let k = cone.len();
        if k == 0 {
            return true;
        }
        if !self.is_simplicial_cone(cone) {
            return false;
        }
        let mut g = num_bigint::BigInt::zero();
        for cols in combinations(self.dim, k) {
            let rows: Vec<Vec<i64>> = cone.iter().map(|&i| cols.iter().map(|&c| self.rays[i][c]).collect()).collect();
            let det = RationalMatrix::from_i64_rows(&rows, k).expect("square").determinant().expect("square");
            g = g.gcd(det.numer());
        }
        g.abs() == num_bigint::BigInt::from(1)
    }

    /// Coefficients λ ≥ 0 with point = Σ λ_j ρ_j over the cone's rays.
    pub fn barycentric_coordinates(&self, cone: &[usize], point: &[Rational]) -> Result<Vec<Rational>> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch("point dimension".into()));
        }
        if !self.is_simplicial_cone(cone) {
            return Err(Error::Precondition(format!("cone {cone:?} is not simplicial")));
        }
        let a = self.ray_matrix(cone).transpose();
        let lam = a
            .solve(point)?
            .ok_or_else(|| Error::OutsideCone(format!("point not in the span of cone {cone:?}")))?;
        if lam.iter().any(|x| x.is_negative()) {
            return Err(Error::OutsideCone(format!("point has a negative coordinate in cone {cone:?}")));
        }
        Ok(lam)
    }

    /// A maximal cone containing the point, with its coordinates.
    pub fn locate(&self, point: &[Rational]) -> Result<(Vec<usize>, Vec<Rational>)> {
        for c in self.maximal_cones() {
            if let Ok(l) = self.barycentric_coordinates(&c, point) {
                return Ok((c, l));
            }
        }
        Err(Error::OutsideCone("point outside the support of the fan".into()))
    }
}

/// Ordered k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanValidation {
    pub primitive: bool,
    pub distinct: bool,
    pub simplicial: bool,
    pub faces_closed: bool,
    pub intersections_proper: bool,
    pub valid: bool,
    pub issues: Vec<String>,
}

/// Integer values of a piecewise-linear Cartier datum at the rays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartierData {
    pub ray_values: Vec<i64>,
}

impl CartierData {
    pub fn new(fan: &Fan, ray_values: Vec<i64>) -> Result<Self> {
        if ray_values.len() != fan.n_rays() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} rays",
                ray_values.len(),
                fan.n_rays()
            )));
        }
        Ok(CartierData { ray_values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1xp1() -> Fan {
        Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).unwrap()
    }

    #[test]
    fn standard_fans_valid() {
        assert!(Fan::projective_space(2).validate().valid);
        assert!(p1xp1().validate().valid);
        let blow = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]],
        )
        .unwrap();
        assert!(blow.validate().valid);
        assert!(blow.is_smooth().iter().all(|(_, s)| *s));
    }

    #[test]
    fn overlapping_cones_detected() {
        let f = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![vec![0, 1], vec![0, 2]]).unwrap();
        let v = f.validate();
        assert!(!v.intersections_proper);
        assert!(!v.valid);
    }

    #[test]
    fn non_smooth_cone() {
        let f = Fan::new(2, vec![vec![1, 0], vec![1, 2]], vec![vec![0, 1]]).unwrap();
        assert!(!f.cone_is_smooth(&[0, 1]));
        assert!(f.cone_is_smooth(&[0]));
    }

    #[test]
    fn barycentric() {
        let f = p1xp1();
        assert_eq!(f.barycentric_coordinates(&[0, 1], &[rat(1), rat(1)]).unwrap(), vec![rat(1), rat(1)]);
        assert!(f.barycentric_coordinates(&[0, 1], &[rat(-1), rat(1)]).is_err());
        assert_eq!(f.barycentric_coordinates(&[0, 1], &[rat(1), rat(0)]).unwrap(), vec![rat(1), rat(0)]);
    }

    #[test]
    fn combos() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn json_roundtrip() {
        let f = p1xp1();
        let s = serde_json::to_string(&f).unwrap();
        let g: Fan = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.validate(), g.validate());
    }
}
