//! Presentations of the Rees algebra of a diagram, primality of the
//! specialisations at each ray, finite-generation criteria and the
//! subduction-style extension of a Khovanskii basis.

mod alter;
mod criteria;
mod prime;
mod subduction;

pub use alter::{alter_diagram, cone_cf_member, good_basis, Alteration, AlterationOutcome, AlterationVerdict, CfMembership, GoodBasis};
pub use criteria::{
    hypersurface_check, single_apartment_check, sparse_check, strong_khovanskii_verdict, uniform_check, CriterionResult,
    MdsReport, MdsVerdict, RayPrimeCheck, SparseCertificate, VerdictOptions,
};
pub use prime::{prime_check, NotPrimeCertificate, PrimalityVerdict};
pub use subduction::{subduction_extend, AdjoinedElement, ExtensionOutcome};

use crate::bundles::Diagram;
use crate::error::{Error, Result};
use crate::exactalg::{rat, Rational};
use crate::polyring::{buchberger, normal_form, saturate, GroebnerBasis, GroebnerBudget, Monomial, Polynomial, Ring, RingRef, WeightOrder};
use serde::Serialize;
use std::fmt;

/// Ring k[Y_1..Y_m, X_1..X_n]: one Y per basis element, one X per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReesRing {
    ring: RingRef,
    n_y: usize,
    n_x: usize,
}

impl ReesRing {
    pub fn new(labels: &[String], n_x: usize) -> Self {
        let names = labels.iter().cloned().chain((1..=n_x).map(|i| format!("X{i}")));
        ReesRing { ring: Ring::new(names), n_y: labels.len(), n_x }
    }

    pub fn for_diagram(d: &Diagram) -> Self {
        Self::new(&d.labels(), d.n_rows())
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn x(&self, i: usize) -> usize {
        self.n_y + i
    }

    /// The weight s(w): w on the Y variables and 0 on the X variables.
    pub fn s_weight(&self, w: &[i64]) -> Vec<Rational> {
        w.iter().map(|&x| rat(x)).chain(std::iter::repeat_n(rat(0), self.n_x)).collect()
    }

    pub fn x_vars(&self) -> Vec<usize> {
        (self.n_y..self.n_y + self.n_x).collect()
    }

    /// Divides out the largest monomial in the X variables dividing `f`.
    pub fn strip_x_content(&self, f: &Polynomial) -> Polynomial {
        let mut c = f.monomial_content();
        for e in c.0.iter_mut().take(self.n_y) {
            *e = 0;
        }
        f.div_monomial(&c)
    }
}

/// Generators of an ideal in a Rees ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReesPresentation {
    rees: ReesRing,
    generators: Vec<Polynomial>,
}

impl ReesPresentation {
    pub fn rees(&self) -> &ReesRing {
        &self.rees
    }

    pub fn ring(&self) -> &RingRef {
        self.rees.ring()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// The generators with X_i set to 0, zeros dropped.
    pub fn specialize(&self, i: usize) -> Vec<Polynomial> {
        let v = self.rees.x(i);
        self.generators.iter().map(|g| g.set_var(v, &rat(0))).filter(|g| !g.is_zero()).collect()
    }
}

impl fmt::Display for ReesPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

impl Serialize for ReesPresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("variables", self.ring().names())?;
        m.serialize_entry("generators", &self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>())?;
        m.end()
    }
}

pub(crate) fn gb_opt(gens: &[Polynomial], ord: &WeightOrder, budget: &GroebnerBudget) -> Result<Option<GroebnerBasis>> {
    let nz: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nz.is_empty() {
        return Ok(None);
    }
    buchberger(&nz, ord, budget).map(Some)
}

pub(crate) fn nf_opt(f: &Polynomial, gb: &Option<GroebnerBasis>) -> Polynomial {
    match gb {
        Some(g) => normal_form(f, g),
        None => f.clone(),
    }
}

pub(crate) fn gb_gens(gb: &Option<GroebnerBasis>) -> Vec<Polynomial> {
    gb.as_ref().map(|g| g.generators().to_vec()).unwrap_or_default()
}

/// Kernel of k[Y, X_active] -> (k[e]/K) ⊗ k[t_active^±] sending
/// Y_l to e_l t^{columns[l]} and X_k to t_k^{-1}, as a reduced grevlex
/// Gröbner basis. `fiber` lives in a ring with one variable per Y.
pub fn rees_kernel(
    rees: &ReesRing,
    fiber: &[Polynomial],
    columns: &[Vec<i64>],
    active: &[usize],
    budget: &GroebnerBudget,
) -> Result<Vec<Polynomial>> {
    if columns.len() != rees.n_y {
        return Err(Error::DimensionMismatch(format!("{} columns for {} Y variables", columns.len(), rees.n_y)));
    }
    let n = rees.ring.nvars();
    let mut lifted = Vec::new();
    for f in fiber.iter().filter(|f| !f.is_zero()) {
        if f.nvars() != rees.n_y {
            return Err(Error::RingMismatch("fiber ideal has the wrong number of variables".into()));
        }
        let terms: Vec<(Vec<i32>, Rational)> = f
            .terms()
            .map(|(m, c)| {
                let mut e = vec![0i32; n];
                e[..rees.n_y].copy_from_slice(&m.0);
                for &k in active {
                    let x: i64 = m.0.iter().zip(columns).map(|(&b, col)| b as i64 * col[k]).sum();
                    e[rees.x(k)] = x as i32;
                }
                (e, c.clone())
            })
            .collect();
        let mut lo = vec![i32::MAX; n];
        for (e, _) in &terms {
            for &k in active {
                lo[rees.x(k)] = lo[rees.x(k)].min(e[rees.x(k)]);
            }
        }
        let mut p = Polynomial::zero(&rees.ring);
        for (mut e, c) in terms {
            for &k in active {
                e[rees.x(k)] -= lo[rees.x(k)];
            }
            p.add_term(Monomial(e), c);
        }
        lifted.push(p);
    }
    if lifted.is_empty() {
        return Ok(Vec::new());
    }
    let xs: Vec<usize> = active.iter().map(|&k| rees.x(k)).collect();
    let sat = saturate(&lifted, &xs, budget)?;
    Ok(gb_gens(&gb_opt(&sat, &WeightOrder::grevlex(n), budget)?))
}

/// A generating subset of a Gröbner basis with no redundant member, chosen
/// greedily from the simplest elements.
pub fn minimal_generators(gb: &[Polynomial], budget: &GroebnerBudget) -> Result<Vec<Polynomial>> {
    let mut cand: Vec<Polynomial> = gb.iter().filter(|g| !g.is_zero()).cloned().collect();
    cand.sort_by_key(|g| (g.total_degree().unwrap_or(0), g.term_count(), g.to_string()));
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in cand {
        let Some(first) = kept.first() else {
            kept.push(g);
            continue;
        };
        let ord = WeightOrder::grevlex(first.nvars());
        let cur = gb_opt(&kept, &ord, budget)?;
        if !nf_opt(&g, &cur).is_zero() {
            kept.push(g);
        }
    }
    Ok(kept)
}

fn fiber_for(d: &Diagram) -> Result<Vec<Polynomial>> {
    let (_, gens) = d.presentation().fiber();
    Ok(gens)
}

fn columns_of(d: &Diagram) -> Vec<Vec<i64>> {
    (0..d.n_cols()).map(|j| d.column(j)).collect()
}

/// The ideal I_B of relations among X_i and the lifts of the basis.
pub fn build_ib(d: &Diagram, budget: &GroebnerBudget) -> Result<ReesPresentation> {
    let rees = ReesRing::for_diagram(d);
    let fiber = fiber_for(d)?;
    let active: Vec<usize> = (0..d.n_rows()).collect();
    let gb = rees_kernel(&rees, &fiber, &columns_of(d), &active, budget)?;
    let generators = minimal_generators(&gb, budget)?;
    Ok(ReesPresentation { rees, generators })
}

/// Presentation of the partial Rees algebra that uses only the first `j` rays.
pub fn stage_presentation(d: &Diagram, j: usize, budget: &GroebnerBudget) -> Result<ReesPresentation> {
    if j > d.n_rows() {
        return Err(Error::DimensionMismatch(format!("stage {j} of a diagram with {} rows", d.n_rows())));
    }
    let rees = ReesRing::for_diagram(d);
    let fiber = fiber_for(d)?;
    let active: Vec<usize> = (0..j).collect();
    let gb = rees_kernel(&rees, &fiber, &columns_of(d), &active, budget)?;
    let generators = minimal_generators(&gb, budget)?;
    Ok(ReesPresentation { rees, generators })
}

/// I_B computed by eliminating fiber coordinates and torus variables from the
/// graph of the Rees map. Much slower than `build_ib`; kept as a cross-check.
pub fn build_ib_by_elimination(d: &Diagram, budget: &GroebnerBudget) -> Result<ReesPresentation> {
    let rees = ReesRing::for_diagram(d);
    let n = d.n_rows();
    let m = d.n_cols();
    // coordinates: fiber z (one per basis element, or E-coordinates), t_i, s_i, Y, X
    let (fiber_ring, fiber_gens, images): (usize, Vec<Polynomial>, Vec<Vec<(usize, Rational)>>) = match d.presentation().as_linear() {
        Some(p) => {
            let e = p.dim_e();
            let imgs = (0..m)
                .map(|j| p.column(j).iter().enumerate().filter(|(_, c)| !num_traits::Zero::is_zero(*c)).map(|(i, c)| (i, c.clone())).collect())
                .collect();
            (e, Vec::new(), imgs)
        }
        None => {
            let (_, gens) = d.presentation().fiber();
            (m, gens, (0..m).map(|j| vec![(j, rat(1))]).collect())
        }
    };
    let z0 = 0;
    let t0 = fiber_ring;
    let s0 = t0 + n;
    let y0 = s0 + n;
    let x0 = y0 + m;
    let total = x0 + n;
    let names: Vec<String> = (0..fiber_ring)
        .map(|i| format!("z{}", i + 1))
        .chain((0..n).map(|i| format!("t{}", i + 1)))
        .chain((0..n).map(|i| format!("s{}", i + 1)))
        .chain(rees.ring.names().iter().cloned())
        .collect();
    let big = Ring::new(names);
    let var = |i: usize| Polynomial::var(&big, i);
    let mut gens = Vec::new();
    for f in &fiber_gens {
        let map: Vec<usize> = (0..m).map(|j| z0 + j).collect();
        gens.push(f.embed(&big, &map));
    }
    for i in 0..n {
        gens.push(var(t0 + i).mul(&var(s0 + i)).sub(&Polynomial::one(&big)));
        gens.push(var(x0 + i).sub(&var(s0 + i)));
    }
    for j in 0..m {
        let mut e = vec![0i32; total];
        for i in 0..n {
            let c = d.row(i)[j];
            if c >= 0 {
                e[t0 + i] = c as i32;
            } else {
                e[s0 + i] = (-c) as i32;
            }
        }
        let mut b = Polynomial::zero(&big);
        for (k, c) in &images[j] {
            let mut ek = e.clone();
            ek[z0 + k] += 1;
            b.add_term(Monomial(ek), c.clone());
        }
        gens.push(var(y0 + j).sub(&b));
    }
    let elim: Vec<usize> = (0..y0).collect();
    let kept = crate::polyring::eliminate(&gens, &elim, budget)?;
    let back: Vec<Polynomial> = kept
        .into_iter()
        .map(|g| {
            let mut out = Polynomial::zero(&rees.ring);
            for (mo, c) in g.terms() {
                out.add_term(Monomial(mo.0[y0..].to_vec()), c.clone());
            }
            out
        })
        .collect();
    let gb = gb_gens(&gb_opt(&back, &WeightOrder::grevlex(rees.ring.nvars()), budget)?);
    let generators = minimal_generators(&gb, budget)?;
    Ok(ReesPresentation { rees, generators })
}
