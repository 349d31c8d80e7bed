//! Exact rational linear algebra: matrices, RREF, kernels, canonical subspaces
//! and a small exact simplex solver.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a decimal-free integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {} columns",
                    row.len(),
                    cols
                )));
            }
            data.extend(row);
        }
        Ok(RationalMatrix { rows: r, cols, data })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pv = a.get(c, c).clone();
            det *= &pv;
            for r in c + 1..n {
                let f = a.get(r, c) / &pv;
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = a.get(r, k) - &f * a.get(c, k);
                    a.set(r, k, v);
                }
            }
        }
        Ok(det)
    }

    /// Some solution x of `self · x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, piv) = rref(&aug);
        if piv.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in piv.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = a.get(r, c).recip();
        for k in c..a.cols {
            let v = a.get(r, k) * &inv;
            a.set(r, k, v);
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for k in c..a.cols {
                let v = a.get(i, k) - &f * a.get(r, k);
                a.set(i, k, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Null space of `m` as a canonical subspace of Q^cols.
pub fn kernel(m: &RationalMatrix) -> Subspace {
    let (r, piv) = rref(m);
    let n = m.cols;
    let mut vecs = Vec::new();
    for free in (0..n).filter(|c| !piv.contains(c)) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (i, &p) in piv.iter().enumerate() {
            v[p] = -r.get(i, free).clone();
        }
        vecs.push(v);
    }
    Subspace::span(n, vecs).expect("kernel vectors have the ambient length")
}

/// A linear subspace of Q^n stored by its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RationalMatrix,
}

impl Subspace {
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        let m = RationalMatrix::from_rows(vectors, ambient_dim)?;
        let (r, piv) = rref(&m);
        let basis = RationalMatrix::from_rows(
            (0..piv.len()).map(|i| r.row(i).to_vec()).collect(),
            ambient_dim,
        )?;
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn zero(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: RationalMatrix::zeros(0, n) }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient_dim: n, basis: RationalMatrix::identity(n) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut rows = self.basis_vectors();
        rows.push(v.to_vec());
        let m = RationalMatrix::from_rows(rows, self.ambient_dim).expect("lengths checked");
        m.rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.basis_vectors().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        check_ambient(self, other)?;
        let mut v = self.basis_vectors();
        v.extend(other.basis_vectors());
        Subspace::span(self.ambient_dim, v)
    }

    /// Orthogonal complement for the standard pairing.
    pub fn perp(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient_dim);
        }
        kernel(&self.basis)
    }
}

fn check_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "subspaces of Q^{} and Q^{}",
            a.ambient_dim, b.ambient_dim
        )));
    }
    Ok(())
}

/// Intersection of a nonempty list of subspaces of a common ambient space.
pub fn intersect(spaces: &[Subspace]) -> Result<Subspace> {
    let first = spaces
        .first()
        .ok_or_else(|| Error::Precondition("intersection of an empty list".into()))?;
    let n = first.ambient_dim;
    let mut normals = Vec::new();
    for s in spaces {
        check_ambient(first, s)?;
        normals.extend(s.perp().basis_vectors());
    }
    Ok(Subspace::span(n, normals)?.perp())
}

/// Outcome of a linear program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rational>, value: Rational },
}

/// Minimizes `c·x` subject to `a·x = b`, `x ≥ 0` with Bland's rule.
pub fn lp_minimize(a: &RationalMatrix, b: &[Rational], c: &[Rational]) -> Result<LpOutcome> {
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m || c.len() != n {
        return Err(Error::DimensionMismatch("linear program shapes".into()));
    }
    // tableau columns: n structural, m artificial, 1 rhs
    let w = n + m + 1;
    let mut t = vec![vec![Rational::zero(); w]; m];
    for i in 0..m {
        let neg = b[i].is_negative();
        for j in 0..n {
            let v = a.get(i, j).clone();
            t[i][j] = if neg { -v } else { v };
        }
        t[i][n + i] = Rational::one();
        t[i][w - 1] = if neg { -b[i].clone() } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut phase1 = vec![Rational::zero(); w - 1];
    for v in phase1.iter_mut().skip(n) {
        *v = Rational::one();
    }
    run_simplex(&mut t, &mut basis, &phase1, n + m);
    let infeas: Rational = basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .map(|(i, _)| t[i][w - 1].clone())
        .fold(Rational::zero(), |s, x| s + x);
    if !infeas.is_zero() {
        return Ok(LpOutcome::Infeasible);
    }
    // drive remaining artificials out of the basis
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, i, j);
            } else {
                t.remove(i);
                basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    let mut cost = vec![Rational::zero(); w - 1];
    cost[..n].clone_from_slice(c);
    if !run_simplex(&mut t, &mut basis, &cost, n) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        x[bv] = t[i][w - 1].clone();
    }
    let value = dot(&x, c);
    Ok(LpOutcome::Optimal { x, value })
}

/// Some `x ≥ 0` with `a·x = b`.
pub fn lp_feasible(a: &RationalMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let c = vec![Rational::zero(); a.cols()];
    Ok(match lp_minimize(a, b, &c)? {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    })
}

fn pivot(t: &mut [Vec<Rational>], basis: &mut [usize], r: usize, c: usize) {
    let inv = t[r][c].recip();
    for v in t[r].iter_mut() {
        *v *= &inv;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
    }
    basis[r] = c;
}

/// Returns false when the objective is unbounded below. Only the first
/// `active` columns may enter.
fn run_simplex(t: &mut [Vec<Rational>], basis: &mut [usize], cost: &[Rational], active: usize) -> bool {
    let w = cost.len() + 1;
    loop {
        let mut entering = None;
        for j in 0..active {
            if basis.contains(&j) {
                continue;
            }
            let mut red = cost[j].clone();
            for (i, &bv) in basis.iter().enumerate() {
                if !t[i][j].is_zero() && !cost[bv].is_zero() {
                    red -= &cost[bv] * &t[i][j];
                }
            }
            if red.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else { return true };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..t.len() {
            if t[i][j].is_positive() {
                let ratio = &t[i][w - 1] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { return false };
        pivot(t, basis, r, j);
    }
}

/// Smallest positive integer multiple of a rational vector.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows, rows[0].len()).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = RationalMatrix::identity(3);
        let (r, p) = rref(&id);
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1, 2]);
        let z = RationalMatrix::zeros(2, 3);
        let (r, p) = rref(&z);
        assert!(r.is_zero());
        assert!(p.is_empty());
    }

    #[test]
    fn kernel_of_all_ones_row() {
        let k = kernel(&m(&[vec![1, 1, 1, 1]]));
        assert_eq!(k.dim(), 3);
        assert_eq!(kernel(&RationalMatrix::identity(4)).dim(), 0);
    }

    #[test]
    fn kernel_annihilates() {
        let a = m(&[vec![1, 2, 0, 1, 3], vec![2, 4, 1, 0, 1], vec![3, 6, 1, 1, 4]]);
        let k = kernel(&a);
        assert_eq!(k.dim(), 3);
        for v in k.basis_vectors() {
            assert!(a.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn intersect_axes() {
        let e1 = Subspace::span(2, vec![vec![rat(1), rat(0)]]).unwrap();
        let e2 = Subspace::span(2, vec![vec![rat(0), rat(1)]]).unwrap();
        assert_eq!(intersect(&[e1.clone(), e2]).unwrap().dim(), 0);
        assert_eq!(intersect(&[e1.clone(), e1.clone()]).unwrap(), e1);
        let e3 = Subspace::zero(3);
        assert!(intersect(&[e1, e3]).is_err());
    }

    #[test]
    fn determinant_and_solve() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(a.determinant().unwrap(), rat(1));
        let x = a.solve(&[rat(3), rat(2)]).unwrap().unwrap();
        assert_eq!(x, vec![rat(1), rat(1)]);
        let s = m(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(s.solve(&[rat(1), rat(2)]).unwrap(), None);
    }

    #[test]
    fn lp_small() {
        // x + y = 1, minimize -x
        let a = m(&[vec![1, 1]]);
        match lp_minimize(&a, &[rat(1)], &[rat(-1), rat(0)]).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![rat(1), rat(0)]);
                assert_eq!(value, rat(-1));
            }
            o => panic!("{o:?}"),
        }
        // x - y = 0 unbounded below for -x
        let a = m(&[vec![1, -1]]);
        assert_eq!(lp_minimize(&a, &[rat(0)], &[rat(-1), rat(0)]).unwrap(), LpOutcome::Unbounded);
        let a = m(&[vec![1, 1]]);
        assert_eq!(lp_feasible(&a, &[rat(-1)]).unwrap(), None);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat_frac(-1, 2));
        assert_eq!(format_rational(&rat_frac(4, 2)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
