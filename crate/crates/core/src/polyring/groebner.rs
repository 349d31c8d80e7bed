use super::{Monomial, Polynomial, RingRef, WeightOrder};
use crate::error::{Error, Result};
use crate::exactalg::{clear_denominators, lp_feasible, rat, Rational, RationalMatrix};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Resource limits for Buchberger runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerBudget {
    pub max_basis: usize,
    pub max_pairs: usize,
}

impl Default for GroebnerBudget {
    fn default() -> Self {
        GroebnerBudget { max_basis: 2000, max_pairs: 200_000 }
    }
}

/// Value of a weight valuation: finite or +∞ (the value of 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtValue {
    Finite(Rational),
    Infinity,
}

impl ExtValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtValue::Finite(r) => Some(r),
            ExtValue::Infinity => None,
        }
    }
}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtValue::Infinity, ExtValue::Infinity) => Ordering::Equal,
            (ExtValue::Infinity, _) => Ordering::Greater,
            (_, ExtValue::Infinity) => Ordering::Less,
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(r) => write!(f, "{}", crate::exactalg::format_rational(r)),
            ExtValue::Infinity => write!(f, "inf"),
        }
    }
}

/// A Gröbner basis with the order it was computed for. When the requested
/// order is not a well-order, a positive grading of the (homogeneous) ideal
/// is placed in front of it; on homogeneous elements both agree.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: RingRef,
    generators: Vec<Polynomial>,
    order: WeightOrder,
    grading: Option<Vec<i64>>,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &WeightOrder {
        &self.order
    }

    pub fn grading(&self) -> Option<&[i64]> {
        self.grading.as_deref()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn effective_order(&self) -> WeightOrder {
        match &self.grading {
            Some(g) => self.order.with_grading(g),
            None => self.order.clone(),
        }
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        let eff = self.effective_order();
        self.generators.iter().filter_map(|g| g.leading_term(&eff).map(|t| t.0)).collect()
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        normal_form(f, self).is_zero()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.iter().any(|g| !g.is_zero() && g.is_constant())
    }

    /// Ideal equality by mutual reduction.
    pub fn same_ideal(&self, other: &GroebnerBasis) -> bool {
        other.generators.iter().all(|g| self.contains(g)) && self.generators.iter().all(|g| other.contains(g))
    }
}

#[derive(Clone, Debug)]
struct GTerm {
    key: Vec<i64>,
    m: Monomial,
    c: Rational,
}

#[derive(Clone, Debug, Default)]
struct GPoly {
    terms: Vec<GTerm>,
}

impl GPoly {
    fn from_poly(p: &Polynomial, ord: &WeightOrder) -> GPoly {
        let mut terms: Vec<GTerm> = p
            .terms()
            .map(|(m, c)| GTerm { key: ord.key(m), m: m.clone(), c: c.clone() })
            .collect();
        terms.sort_by(|a, b| b.key.cmp(&a.key));
        GPoly { terms }
    }

    fn to_poly(&self, ring: &RingRef) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.iter().map(|t| (t.m.clone(), t.c.clone())))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &GTerm {
        &self.terms[0]
    }

    fn make_monic(&mut self) {
        if let Some(t) = self.terms.first() {
            if !t.c.is_one() {
                let inv = t.c.recip();
                for t in &mut self.terms {
                    t.c *= &inv;
                }
            }
        }
    }

    /// self − c·x^s·g, skipping the first `skip` terms of g.
    fn sub_mul(&self, c: &Rational, s: &Monomial, skey: &[i64], g: &GPoly, skip: usize) -> GPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms[skip..].iter().map(|t| GTerm {
            key: t.key.iter().zip(skey).map(|(x, y)| x + y).collect(),
            m: t.m.mul(s),
            c: -(c * &t.c),
        });
        let mut bn = b.next();
        loop {
            match (a.peek(), &bn) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    out.push(bn.take().unwrap());
                    bn = b.next();
                }
                (Some(x), Some(y)) => match x.key.cmp(&y.key) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => {
                        out.push(bn.take().unwrap());
                        bn = b.next();
                    }
                    Ordering::Equal => {
                        let mut t = a.next().unwrap().clone();
                        t.c += &bn.take().unwrap().c;
                        bn = b.next();
                        if !t.c.is_zero() {
                            out.push(t);
                        }
                    }
                },
            }
        }
        GPoly { terms: out }
    }
}

fn find_reducer<'a>(m: &Monomial, basis: &[&'a GPoly]) -> Option<&'a GPoly> {
    basis.iter().find(|g| g.lead().m.divides(m)).copied()
}

/// Full reduction; basis elements must be monic.
fn reduce_full(p: &GPoly, basis: &[&GPoly], ord: &WeightOrder) -> GPoly {
    let mut rem: Vec<GTerm> = Vec::new();
    let mut cur = p.clone();
    while !cur.is_zero() {
        let lt = cur.lead().clone();
        match find_reducer(&lt.m, basis) {
            Some(g) => {
                let s = lt.m.div(&g.lead().m);
                let skey = ord.key(&s);
                let mut rest = GPoly { terms: cur.terms[1..].to_vec() };
                rest = rest.sub_mul(&lt.c, &s, &skey, g, 1);
                cur = rest;
            }
            None => {
                rem.push(lt);
                cur.terms.remove(0);
            }
        }
    }
    GPoly { terms: rem }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    key: Vec<i64>,
}

fn spoly(f: &GPoly, g: &GPoly, lcm: &Monomial, ord: &WeightOrder) -> GPoly {
    let sf = lcm.div(&f.lead().m);
    let sg = lcm.div(&g.lead().m);
    let a = GPoly { terms: Vec::new() }.sub_mul(&-Rational::one(), &sf, &ord.key(&sf), f, 1);
    a.sub_mul(&Rational::one(), &sg, &ord.key(&sg), g, 1)
}

fn coprime(a: &Monomial, b: &Monomial) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| *x == 0 || *y == 0)
}

fn buchberger_core(inputs: Vec<GPoly>, ord: &WeightOrder, budget: &GroebnerBudget) -> Result<Vec<GPoly>> {
    let mut polys: Vec<GPoly> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut processed = 0usize;

    let insert = |h: GPoly, polys: &mut Vec<GPoly>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>| -> Result<()> {
        if polys.len() >= budget.max_basis {
            return Err(Error::Budget(format!("Groebner basis exceeded {} elements", budget.max_basis)));
        }
        let hi = polys.len();
        let hm = h.lead().m.clone();
        // Gebauer-Moeller update
        let mut cands: Vec<(usize, Monomial)> = (0..polys.len())
            .filter(|&g| active[g])
            .map(|g| (g, hm.lcm(&polys[g].lead().m)))
            .collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        while let Some((g1, l1)) = cands.pop() {
            let disjoint = coprime(&hm, &polys[g1].lead().m);
            let dominated = cands.iter().chain(kept.iter()).any(|(_, l2)| l2.divides(&l1));
            if disjoint || !dominated {
                kept.push((g1, l1));
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|(g, _)| !coprime(&hm, &polys[*g].lead().m))
            .map(|(g, l)| Pair { i: g, j: hi, key: ord.key(&l), lcm: l })
            .collect();
        pairs.retain(|p| {
            if !hm.divides(&p.lcm) {
                return true;
            }
            let li = polys[p.i].lead().m.lcm(&hm);
            let lj = polys[p.j].lead().m.lcm(&hm);
            li == p.lcm || lj == p.lcm
        });
        pairs.extend(new_pairs);
        for g in 0..polys.len() {
            if active[g] && hm.divides(&polys[g].lead().m) {
                active[g] = false;
            }
        }
        polys.push(h);
        active.push(true);
        Ok(())
    };

    for p in inputs {
        let basis: Vec<&GPoly> = polys.iter().zip(&active).filter(|(_, a)| **a).map(|(p, _)| p).collect();
        let mut r = reduce_full(&p, &basis, ord);
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        insert(r, &mut polys, &mut active, &mut pairs)?;
    }

    while !pairs.is_empty() {
        processed += 1;
        if processed > budget.max_pairs {
            return Err(Error::Budget(format!("more than {} S-pairs", budget.max_pairs)));
        }
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.lcm.degree(), &a.1.key).cmp(&(b.1.lcm.degree(), &b.1.key)))
            .unwrap();
        let pr = pairs.swap_remove(idx);
        let s = spoly(&polys[pr.i], &polys[pr.j], &pr.lcm, ord);
        let basis: Vec<&GPoly> = polys.iter().zip(&active).filter(|(_, a)| **a).map(|(p, _)| p).collect();
        let mut r = reduce_full(&s, &basis, ord);
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        insert(r, &mut polys, &mut active, &mut pairs)?;
    }

    let mut basis: Vec<GPoly> = polys.into_iter().zip(active).filter(|(_, a)| *a).map(|(p, _)| p).collect();
    // interreduce tails
    for i in 0..basis.len() {
        let others: Vec<&GPoly> = basis.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
        let head = GPoly { terms: vec![basis[i].lead().clone()] };
        let tail = GPoly { terms: basis[i].terms[1..].to_vec() };
        let tail = reduce_full(&tail, &others, ord);
        let mut terms = head.terms;
        terms.extend(tail.terms);
        basis[i] = GPoly { terms };
    }
    basis.sort_by(|a, b| a.lead().key.cmp(&b.lead().key));
    Ok(basis)
}

fn check_same_ring(gens: &[Polynomial]) -> Result<RingRef> {
    let ring = gens
        .first()
        .map(|g| g.ring().clone())
        .ok_or_else(|| Error::Precondition("empty generator list".into()))?;
    for g in gens {
        if g.ring() != &ring {
            return Err(Error::RingMismatch("generators from different rings".into()));
        }
        if g.terms().any(|(m, _)| m.0.iter().any(|&e| e < 0)) {
            return Err(Error::Precondition("negative exponents are not allowed in Groebner computations".into()));
        }
    }
    Ok(ring)
}

/// A positive integer grading making every generator homogeneous, if one exists.
pub fn positive_grading(gens: &[Polynomial]) -> Result<Option<Vec<i64>>> {
    let Some(first) = gens.first() else { return Ok(None) };
    let n = first.nvars();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for g in gens {
        let ms: Vec<&Monomial> = g.terms().map(|(m, _)| m).collect();
        for m in ms.iter().skip(1) {
            rows.push((0..n).map(|i| rat((m.0[i] - ms[0].0[i]) as i64)).collect());
        }
    }
    if rows.is_empty() {
        return Ok(Some(vec![1; n]));
    }
    // g = 1 + x with x >= 0 and A g = 0
    let a = RationalMatrix::from_rows(rows, n)?;
    let ones = vec![Rational::one(); n];
    let b: Vec<Rational> = a.mul_vec(&ones)?.into_iter().map(|x| -x).collect();
    let Some(x) = lp_feasible(&a, &b)? else { return Ok(None) };
    let g: Vec<Rational> = x.iter().map(|v| v + Rational::one()).collect();
    let ints = clear_denominators(&g);
    let out: Option<Vec<i64>> = ints.iter().map(|v| v.to_i64()).collect();
    Ok(out)
}

fn effective(gens: &[Polynomial], ord: &WeightOrder) -> Result<Option<Vec<i64>>> {
    if ord.is_well_order() {
        return Ok(None);
    }
    match positive_grading(gens)? {
        Some(g) => Ok(Some(g)),
        None => Err(Error::Precondition(
            "weight order is not a well-order and the ideal admits no positive grading".into(),
        )),
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Polynomial], ord: &WeightOrder, budget: &GroebnerBudget) -> Result<GroebnerBasis> {
    let ring = check_same_ring(gens)?;
    if ord.nvars() != ring.nvars() {
        return Err(Error::DimensionMismatch("order and ring sizes differ".into()));
    }
    let grading = effective(gens, ord)?;
    let eff = match &grading {
        Some(g) => ord.with_grading(g),
        None => ord.clone(),
    };
    let inputs: Vec<GPoly> = gens.iter().filter(|g| !g.is_zero()).map(|g| GPoly::from_poly(g, &eff)).collect();
    let basis = buchberger_core(inputs, &eff, budget)?;
    Ok(GroebnerBasis {
        generators: basis.iter().map(|p| p.to_poly(&ring)).collect(),
        ring,
        order: ord.clone(),
        grading,
        reduced: true,
    })
}

/// Remainder of `f` on division by the basis, supported on standard monomials.
pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Polynomial {
    let eff = gb.effective_order();
    let basis: Vec<GPoly> = gb.generators.iter().map(|g| GPoly::from_poly(g, &eff)).collect();
    let refs: Vec<&GPoly> = basis.iter().collect();
    reduce_full(&GPoly::from_poly(f, &eff), &refs, &eff).to_poly(f.ring())
}

/// Initial ideal in_w(I) under the min convention, returned as a reduced
/// Gröbner basis for the grevlex tie-break.
pub fn initial_ideal(gens: &[Polynomial], w: &[Rational], budget: &GroebnerBudget) -> Result<GroebnerBasis> {
    let ring = check_same_ring(gens)?;
    let ord = WeightOrder::refined(ring.nvars(), vec![w.to_vec()])?;
    let gb = buchberger(gens, &ord, budget)?;
    let forms: Vec<Polynomial> = gb.generators.iter().map(|g| g.initial_form(w)).collect();
    buchberger(&forms, &WeightOrder::grevlex(ring.nvars()), budget)
}

/// Generators of I ∩ k[variables not in `vars`].
pub fn eliminate(gens: &[Polynomial], vars: &[usize], budget: &GroebnerBudget) -> Result<Vec<Polynomial>> {
    let ring = check_same_ring(gens)?;
    let ord = WeightOrder::elimination(ring.nvars(), vars);
    let gb = buchberger(gens, &ord, budget)?;
    Ok(gb.generators.into_iter().filter(|g| vars.iter().all(|&v| !g.uses_var(v))).collect())
}

/// Generators of I : (x_v1 ... x_vk)^∞, computed by eliminating an auxiliary
/// variable u from I + <u x_v1 ... x_vk - 1>.
pub fn saturate(gens: &[Polynomial], vars: &[usize], budget: &GroebnerBudget) -> Result<Vec<Polynomial>> {
    let ring = check_same_ring(gens)?;
    if vars.is_empty() {
        return Ok(gens.to_vec());
    }
    let n = ring.nvars();
    let mut fresh = "u".to_string();
    while ring.index_of(&fresh).is_some() {
        fresh.push('_');
    }
    let big = super::Ring::new(ring.names().iter().cloned().chain(std::iter::once(fresh)));
    let map: Vec<usize> = (0..n).collect();
    let mut all: Vec<Polynomial> = gens.iter().map(|g| g.embed(&big, &map)).collect();
    let mut e = vec![0; n + 1];
    for &v in vars {
        e[v] += 1;
    }
    e[n] = 1;
    all.push(Polynomial::term(&big, Monomial(e), rat(1)).sub(&Polynomial::one(&big)));
    let kept = eliminate(&all, &[n], budget)?;
    Ok(kept
        .into_iter()
        .map(|g| {
            let mut out = Polynomial::zero(&ring);
            for (m, c) in g.terms() {
                out.add_term(Monomial(m.0[..n].to_vec()), c.clone());
            }
            out
        })
        .collect())
}

/// True when w lies in the closed Gröbner cone of the basis' order.
pub fn in_closed_cone(w: &[Rational], gb: &GroebnerBasis) -> bool {
    let eff = gb.effective_order();
    gb.generators.iter().all(|g| match g.leading_term(&eff) {
        Some((lm, _)) => {
            let lw = lm.weight(w);
            g.terms().all(|(m, _)| lw <= m.weight(w))
        }
        None => true,
    })
}

/// Weight valuation of the class of `a` in k[x]/I, computed through the
/// standard-monomial expansion of the basis.
pub fn weight_value(a: &Polynomial, w: &[Rational], gb: &GroebnerBasis) -> Result<ExtValue> {
    if w.len() != gb.ring.nvars() {
        return Err(Error::DimensionMismatch("weight length".into()));
    }
    if !in_closed_cone(w, gb) {
        return Err(Error::Precondition("weight is outside the closed Groebner cone of the basis".into()));
    }
    let r = normal_form(a, gb);
    Ok(match r.min_weight(w) {
        Some(v) => ExtValue::Finite(v),
        None => ExtValue::Infinity,
    })
}

/// ι(w): the weight valuation at w of each variable class.
pub fn iota(w: &[Rational], gens: &[Polynomial], budget: &GroebnerBudget) -> Result<Vec<Rational>> {
    let ring = check_same_ring(gens)?;
    let n = ring.nvars();
    let ord = WeightOrder::refined(n, vec![w.to_vec()])?;
    let gb = buchberger(gens, &ord, budget)?;
    (0..n)
        .map(|i| match weight_value(&Polynomial::var(&ring, i), w, &gb)? {
            ExtValue::Finite(v) => Ok(v),
            ExtValue::Infinity => Err(Error::Precondition(format!("variable {} lies in the ideal", ring.name(i)))),
        })
        .collect()
}

/// Mutual-reduction ideal equality.
pub fn ideals_equal(a: &[Polynomial], b: &[Polynomial], budget: &GroebnerBudget) -> Result<bool> {
    let all_zero = |v: &[Polynomial]| v.iter().all(|p| p.is_zero());
    if all_zero(a) || all_zero(b) {
        return Ok(all_zero(a) && all_zero(b));
    }
    let ring = check_same_ring(a)?;
    let ord = WeightOrder::grevlex(ring.nvars());
    let ga = buchberger(a, &ord, budget)?;
    let gb = buchberger(b, &ord, budget)?;
    Ok(ga.same_ideal(&gb))
}
