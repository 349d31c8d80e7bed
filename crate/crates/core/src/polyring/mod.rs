//! Multivariate (Laurent) polynomials over Q, weight orders with the min
//! convention, and a Buchberger engine.

mod groebner;
mod order;
mod parse;

pub use groebner::{
    buchberger, eliminate, ideals_equal, in_closed_cone, initial_ideal, iota, normal_form,
    positive_grading, saturate, weight_value, ExtValue, GroebnerBasis, GroebnerBudget,
};
pub use order::WeightOrder;

use crate::error::{Error, Result};
use crate::exactalg::{format_rational, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Variable names plus per-variable Laurent flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
    laurent: Vec<bool>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> RingRef {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let laurent = vec![false; names.len()];
        Arc::new(Ring { names, laurent })
    }

    pub fn laurent<S: Into<String>>(names: impl IntoIterator<Item = S>, flags: Vec<bool>) -> Result<RingRef> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if flags.len() != names.len() {
            return Err(Error::DimensionMismatch("Laurent flags".into()));
        }
        Ok(Arc::new(Ring { names, laurent: flags }))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn is_laurent(&self, i: usize) -> bool {
        self.laurent[i]
    }

    pub fn has_laurent(&self) -> bool {
        self.laurent.iter().any(|&l| l)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn weight(&self, w: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(w)
            .filter(|(e, _)| **e != 0)
            .fold(Rational::zero(), |acc, (e, x)| acc + x * Rational::from_integer((*e).into()))
    }

    pub fn weight_i64(&self, w: &[i64]) -> i64 {
        self.0.iter().zip(w).map(|(&e, &x)| e as i64 * x).sum()
    }
}

/// A polynomial: a map from monomials to nonzero rational coefficients.
#[derive(Clone)]
pub struct Polynomial {
    ring: RingRef,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &RingRef, c: Rational) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i), Rational::one())
    }

    pub fn term(ring: &RingRef, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), ring.nvars(), "monomial length must match the ring");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn from_terms(ring: &RingRef, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m);
        match e {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_ring(&self, other: &Polynomial) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "polynomials from different rings"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.same_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.same_ring(other);
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            out.add_term(m1.mul(m), c1 * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(&self.ring);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Total degree (max over terms); `None` for zero.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree vector under an integer grading; `None` if not homogeneous or zero.
    pub fn homogeneous_degree(&self, grading: &[i64]) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.weight_i64(grading));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous(&self, grading: &[i64]) -> bool {
        self.is_zero() || self.homogeneous_degree(grading).is_some()
    }

    /// Multi-degree under a matrix grading (rows are gradings).
    pub fn multidegree(&self, gradings: &[Vec<i64>]) -> Option<Vec<i64>> {
        let mut it = self.terms.keys().map(|m| gradings.iter().map(|g| m.weight_i64(g)).collect::<Vec<_>>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Terms of minimal w-weight (min convention).
    pub fn initial_form(&self, w: &[Rational]) -> Polynomial {
        let Some(min) = self.terms.keys().map(|m| m.weight(w)).min() else {
            return self.clone();
        };
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight(w) == min)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Minimal term weight; `None` for the zero polynomial.
    pub fn min_weight(&self, w: &[Rational]) -> Option<Rational> {
        self.terms.keys().map(|m| m.weight(w)).min()
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] != 0)
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.uses_var(i)).collect()
    }

    /// Greatest common monomial divisor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one(self.nvars());
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    /// Divides every term by `m`, which must divide all of them unless the ring is Laurent.
    pub fn div_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.div(m), c.clone())).collect(),
        }
    }

    /// Substitutes the constant `c` for variable `i`.
    pub fn set_var(&self, i: usize, c: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, x) in &self.terms {
            let e = m.0[i];
            let mut m2 = m.clone();
            m2.0[i] = 0;
            let f = if e == 0 {
                Rational::one()
            } else if c.is_zero() {
                if e < 0 {
                    panic!("zero substituted into a negative power");
                }
                Rational::zero()
            } else {
                num_traits::pow::Pow::pow(c, e)
            };
            out.add_term(m2, x * f);
        }
        out
    }

    /// Ring homomorphism sending variable i to `images[i]`.
    /// Negative exponents require monomial images.
    pub fn evaluate(&self, images: &[Polynomial], target: &RingRef) -> Result<Polynomial> {
        if images.len() != self.nvars() {
            return Err(Error::DimensionMismatch("substitution length".into()));
        }
        let mut out = Polynomial::zero(target);
        let mut cache: BTreeMap<(usize, i32), Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = match cache.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = power_of(&images[i], e)?;
                        cache.insert((i, e), p.clone());
                        p
                    }
                };
                t = t.mul(&p);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Re-labels into another ring; `map[i]` is the target index of variable i.
    pub fn embed(&self, target: &RingRef, map: &[usize]) -> Polynomial {
        let n = target.nvars();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; n];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Moves into a ring with the same variable names.
    pub fn with_ring(&self, target: &RingRef) -> Result<Polynomial> {
        let map: Option<Vec<usize>> = self.ring.names.iter().map(|n| target.index_of(n)).collect();
        let map = map.ok_or_else(|| Error::RingMismatch("variable missing from target ring".into()))?;
        let out = self.embed(target, &map);
        Ok(out)
    }

    /// Leading coefficient made 1 under the ring's default (grevlex) order.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term(&WeightOrder::grevlex(self.nvars())) {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn leading_term(&self, ord: &WeightOrder) -> Option<(Monomial, Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Terms sorted descending under `ord`.
    pub fn sorted_terms(&self, ord: &WeightOrder) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        v
    }

    pub fn parse(text: &str, ring: &RingRef) -> Result<Polynomial> {
        parse::parse_polynomial(text, ring)
    }

    /// Parses several polynomials, collecting variables in order of first appearance.
    pub fn parse_many(texts: &[&str]) -> Result<(RingRef, Vec<Polynomial>)> {
        let mut names: Vec<String> = Vec::new();
        for t in texts {
            for n in parse::identifiers(t)? {
                if !names.contains(&n) {
                    names.push(n);
                }
            }
        }
        let ring = Ring::new(names);
        let polys = texts.iter().map(|t| Polynomial::parse(t, &ring)).collect::<Result<_>>()?;
        Ok((ring, polys))
    }
}

fn power_of(p: &Polynomial, e: i32) -> Result<Polynomial> {
    if e >= 0 {
        return Ok(p.pow(e as u32));
    }
    if p.term_count() != 1 {
        return Err(Error::Precondition("negative power of a non-monomial".into()));
    }
    let (m, c) = p.terms().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
    let inv = Polynomial::term(p.ring(), Monomial(m.0.iter().map(|x| -x).collect()), c.recip());
    Ok(inv.pow((-e) as u32))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms = self.sorted_terms(&WeightOrder::grevlex(self.nvars()));
        for (k, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.names[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&a), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn parse_display_roundtrip() {
        let ring = Ring::new(["Y1", "Y2", "X1", "X2"]);
        let p = Polynomial::parse("Y1*X1^2 + 3/2*Y2*X2 - 4", &ring).unwrap();
        let s = p.to_string();
        assert_eq!(Polynomial::parse(&s, &ring).unwrap(), p);
        assert_eq!(p.coefficient(&Monomial(vec![0, 1, 0, 1])), crate::exactalg::rat_frac(3, 2));
    }

    #[test]
    fn initial_form_min_convention() {
        let ring = Ring::new(["Y1", "Y2", "Y3", "Y4", "X1", "X2", "X3", "X4"]);
        let f = Polynomial::parse("Y1*X1^2*X4+Y2*X1*X2^2+Y3*X2*X3^2+Y4*X3*X4^2", &ring).unwrap();
        let mut w = vec![rat(0); 8];
        w[4] = rat(1);
        let g = Polynomial::parse("Y3*X2*X3^2+Y4*X3*X4^2", &ring).unwrap();
        assert_eq!(f.initial_form(&w), g);
        assert_eq!(f.initial_form(&vec![rat(0); 8]), f);
    }

    #[test]
    fn evaluate_laurent_monomials() {
        let src = Ring::new(["Y", "X"]);
        let tgt = Ring::laurent(["b", "t"], vec![false, true]).unwrap();
        let p = Polynomial::parse("Y*X^2", &src).unwrap();
        let images = vec![
            Polynomial::parse("b*t^2", &tgt).unwrap(),
            Polynomial::parse("t^-1", &tgt).unwrap(),
        ];
        assert_eq!(p.evaluate(&images, &tgt).unwrap(), Polynomial::parse("b", &tgt).unwrap());
    }

    #[test]
    fn set_var_and_content() {
        let ring = Ring::new(["x", "y", "z"]);
        let p = Polynomial::parse("x*y^2*z + x^2*y*z", &ring).unwrap();
        assert_eq!(p.monomial_content(), Monomial(vec![1, 1, 1]));
        assert!(p.set_var(0, &rat(0)).is_zero());
        assert_eq!(p.set_var(2, &rat(2)), Polynomial::parse("2*x*y^2 + 2*x^2*y", &ring).unwrap());
    }
}
