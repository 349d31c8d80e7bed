use super::{gb_gens, gb_opt, nf_opt, rees_kernel, ReesRing};
use crate::bundles::{Diagram, IdealPresentation, Presentation};
use crate::error::{Error, Result};
use crate::exactalg::{Rational, RationalMatrix};
use crate::polyring::{initial_ideal, GroebnerBasis, GroebnerBudget, Monomial, Polynomial, Ring, RingRef, WeightOrder};
use crate::troplinear::LinearPresentation;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

fn ser_poly<S: Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// An element added to the basis, written in the original fiber variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjoinedElement {
    pub label: String,
    #[serde(serialize_with = "ser_poly")]
    pub element: Polynomial,
    /// Its value under every row's valuation.
    pub column: Vec<i64>,
    pub degree: i64,
    /// 1-based ray whose valuation exposed it.
    pub stage: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionOutcome {
    pub terminated: bool,
    pub reason: String,
    pub adjoined: Vec<AdjoinedElement>,
    /// The diagram of the extended basis; present when `terminated`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<Diagram>,
}

struct RowData {
    w: Vec<Rational>,
    gb: Option<GroebnerBasis>,
    gb_in: Option<GroebnerBasis>,
    init: Vec<Polynomial>,
}

struct State {
    fring: RingRef,
    fgens: Vec<Polynomial>,
    rows: Vec<RowData>,
    canon: Option<GroebnerBasis>,
    elements: Vec<Polynomial>,
    columns: Vec<Vec<i64>>,
    degrees: Vec<i64>,
}

impl State {
    fn value(&self, f: &Polynomial, i: usize) -> Option<i64> {
        let r = &self.rows[i];
        nf_opt(f, &r.gb).min_weight(&r.w).map(|v| v.to_integer().to_i64().expect("small valuation"))
    }

    fn initial(&self, f: &Polynomial, i: usize) -> Polynomial {
        let r = &self.rows[i];
        nf_opt(f, &r.gb).initial_form(&r.w)
    }

    fn ext_ring(&self) -> RingRef {
        let d0 = self.fring.nvars();
        let names = self.fring.names().iter().cloned().chain((1..=self.elements.len() - d0).map(|l| format!("z{l}")));
        Ring::new(names)
    }

    /// Fiber ideal of the current basis: I_0 together with z_l - c_l.
    fn ext_fiber(&self, ring: &RingRef, images: &[Polynomial], base: &[Polynomial]) -> Vec<Polynomial> {
        let d0 = self.fring.nvars();
        let map: Vec<usize> = (0..d0).collect();
        let mut out: Vec<Polynomial> = base.iter().map(|g| g.embed(ring, &map)).collect();
        for (l, c) in images.iter().enumerate().skip(d0) {
            out.push(Polynomial::var(ring, l).sub(&c.embed(ring, &map)));
        }
        out
    }

    fn candidates(&self, s: usize, degree: i64, value: i64, mdeg: &[i64]) -> Vec<Vec<u32>> {
        let m = self.elements.len();
        let mut out = Vec::new();
        let mut cur = vec![0u32; m];
        fn rec(st: &State, l: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>, s: usize, value: i64, mdeg: &[i64]) {
            if l == cur.len() {
                if left != 0 {
                    return;
                }
                let val: i64 = (0..cur.len()).map(|j| cur[j] as i64 * st.columns[j][s]).sum();
                if val != value {
                    return;
                }
                let ok = (0..s).all(|k| (0..cur.len()).map(|j| cur[j] as i64 * st.columns[j][k]).sum::<i64>() >= mdeg[k]);
                if ok {
                    out.push(cur.clone());
                }
                return;
            }
            let dl = st.degrees[l];
            let mut e = 0;
            while e as i64 * dl <= left {
                cur[l] = e;
                rec(st, l + 1, left - e as i64 * dl, cur, out, s, value, mdeg);
                e += 1;
            }
            cur[l] = 0;
        }
        rec(self, 0, degree, &mut cur, &mut out, s, value, mdeg);
        out
    }

    fn product(&self, beta: &[u32], factors: &[Polynomial]) -> Polynomial {
        let mut p = Polynomial::one(&self.fring);
        for (l, &e) in beta.iter().enumerate() {
            if e > 0 {
                p = p.mul(&factors[l].pow(e));
            }
        }
        p
    }

    /// Repeatedly cancels the initial form of `f` at row `s` by initial
    /// forms of products of basis elements of matching degrees. Returns the
    /// remainder whose initial form is not expressible, or None.
    fn subduct(&self, f0: &Polynomial, s: usize, degree: i64, mdeg: &[i64]) -> Result<Option<Polynomial>> {
        let row = &self.rows[s];
        let inits: Vec<Polynomial> = (0..self.elements.len()).map(|l| self.initial(&self.elements[l], s)).collect();
        let mut f = nf_opt(f0, &row.gb);
        for _ in 0..10_000 {
            if f.is_zero() {
                return Ok(None);
            }
            let value = f.min_weight(&row.w).expect("nonzero").to_integer().to_i64().expect("small valuation");
            let target = nf_opt(&f.initial_form(&row.w), &row.gb_in);
            let cands = self.candidates(s, degree, value, mdeg);
            if cands.is_empty() {
                return Ok(Some(f));
            }
            let forms: Vec<Polynomial> = cands.iter().map(|b| nf_opt(&self.product(b, &inits), &row.gb_in)).collect();
            let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
            for p in forms.iter().chain(std::iter::once(&target)) {
                for (m, _) in p.terms() {
                    let k = index.len();
                    index.entry(m.clone()).or_insert(k);
                }
            }
            let mut a = RationalMatrix::zeros(index.len(), forms.len());
            for (c, p) in forms.iter().enumerate() {
                for (m, x) in p.terms() {
                    a.set(index[m], c, x.clone());
                }
            }
            let mut b = vec![Rational::zero(); index.len()];
            for (m, x) in target.terms() {
                b[index[m]] = x.clone();
            }
            let Some(lam) = a.solve(&b)? else { return Ok(Some(f)) };
            let mut sub = Polynomial::zero(&self.fring);
            for (c, beta) in cands.iter().enumerate() {
                if !lam[c].is_zero() {
                    sub = sub.add(&self.product(beta, &self.elements).scale(&lam[c]));
                }
            }
            f = nf_opt(&f.sub(&sub), &row.gb);
        }
        Err(Error::Budget("subduction did not finish".into()))
    }

    fn diagram(&self, d: &Diagram) -> Result<Diagram> {
        let d0 = self.fring.nvars();
        let k = self.elements.len() - d0;
        if k == 0 {
            return Ok(d.clone());
        }
        let mut labels = d.labels();
        labels.extend((1..=k).map(|l| format!("Z{l}")));
        let matrix: Vec<Vec<i64>> = (0..d.n_rows()).map(|i| self.columns.iter().map(|c| c[i]).collect()).collect();
        let linear = d.presentation().as_linear().filter(|_| self.degrees.iter().all(|&x| x == 1));
        let presentation = match linear {
            Some(p) => {
                let mut cols: Vec<Vec<Rational>> = p.columns().to_vec();
                for c in &self.elements[d0..] {
                    let mut v = vec![Rational::zero(); p.dim_e()];
                    for (m, x) in c.terms() {
                        let j = m.0.iter().position(|&e| e == 1).expect("linear element");
                        for (t, vt) in v.iter_mut().enumerate() {
                            *vt += x * &p.column(j)[t];
                        }
                    }
                    cols.push(v);
                }
                Presentation::Linear(LinearPresentation::new(cols)?)
            }
            None => {
                let ring = self.ext_ring();
                let gens = self.ext_fiber(&ring, &self.elements, &self.fgens);
                Presentation::Ideal(IdealPresentation::new(ring, gens)?)
            }
        };
        Diagram::new(d.fan().clone(), presentation, matrix)?.with_labels(Some(labels))
    }
}

/// Extends the basis until, ray by ray, the initial relations of each
/// partial Rees algebra lift; stops at the degree and size caps.
pub fn subduction_extend(d: &Diagram, degree_cap: usize, max_adjoined: usize, budget: &GroebnerBudget) -> Result<ExtensionOutcome> {
    let (fring, fgens) = d.presentation().fiber();
    let fgens: Vec<Polynomial> = fgens.into_iter().filter(|g| !g.is_zero()).collect();
    if fgens.iter().any(|g| g.total_degree().is_none()) {
        return Err(Error::Precondition("the fiber ideal must be homogeneous in the standard grading".into()));
    }
    let d0 = fring.nvars();
    let n = d.n_rows();
    let mut rows = Vec::new();
    for i in 0..n {
        let w = d.row_rational(i);
        let gb = gb_opt(&fgens, &WeightOrder::refined(d0, vec![w.clone()])?, budget)?;
        let init: Vec<Polynomial> = gb_gens(&gb).iter().map(|g| g.initial_form(&w)).collect();
        let gb_in = gb_opt(&init, &WeightOrder::refined(d0, vec![w.clone()])?, budget)?;
        rows.push(RowData { w, gb, gb_in, init });
    }
    let canon = gb_opt(&fgens, &WeightOrder::grevlex(d0), budget)?;
    let mut st = State {
        fring: fring.clone(),
        fgens,
        rows,
        canon,
        elements: (0..d0).map(|j| Polynomial::var(&fring, j)).collect(),
        columns: (0..d.n_cols()).map(|j| d.column(j)).collect(),
        degrees: vec![1; d0],
    };
    let mut adjoined: Vec<AdjoinedElement> = Vec::new();
    'outer: loop {
        let m = st.elements.len();
        let mut labels = d.labels();
        labels.extend((1..=m - d0).map(|l| format!("Z{l}")));
        let rees = ReesRing::new(&labels, n);
        let ering = st.ext_ring();
        let fiber = st.ext_fiber(&ering, &st.elements, &st.fgens);
        let mut unresolved = Vec::new();
        for s in 0..n {
            let active: Vec<usize> = (0..s).collect();
            let is = rees_kernel(&rees, &fiber, &st.columns, &active, budget)?;
            let row: Vec<i64> = st.columns.iter().map(|c| c[s]).collect();
            let sw = rees.s_weight(&row);
            let ins = if is.is_empty() { None } else { Some(initial_ideal(&is, &sw, budget)?) };
            let inits: Vec<Polynomial> = (0..m).map(|l| st.initial(&st.elements[l], s)).collect();
            let kfiber = st.ext_fiber(&ering, &inits, &st.rows[s].init);
            let js = rees_kernel(&rees, &kfiber, &st.columns, &active, budget)?;
            let mut failing: Vec<Polynomial> = js.into_iter().filter(|g| !nf_opt(g, &ins).is_zero()).collect();
            failing.sort_by_key(|g| (g.total_degree().unwrap_or(0), g.to_string()));
            if !failing.is_empty() {
                unresolved.push(s + 1);
            }
            for g in failing {
                let mut images: Vec<Polynomial> = st.elements.clone();
                images.extend(std::iter::repeat_n(Polynomial::one(&fring), n));
                let h0 = g.evaluate(&images, &fring)?;
                let (mono, _) = g.terms().next().expect("nonzero");
                let degree: i64 = (0..m).map(|l| mono.0[l] as i64 * st.degrees[l]).sum();
                let mdeg: Vec<i64> =
                    (0..s).map(|k| (0..m).map(|l| mono.0[l] as i64 * st.columns[l][k]).sum::<i64>() - mono.0[rees.x(k)] as i64).collect();
                if degree > degree_cap as i64 {
                    return Ok(ExtensionOutcome {
                        terminated: false,
                        reason: format!("a relation of degree {degree} at ray {} exceeds the degree cap {degree_cap}", s + 1),
                        adjoined,
                        diagram: None,
                    });
                }
                let Some(rem) = st.subduct(&h0, s, degree, &mdeg)? else { continue };
                if adjoined.len() >= max_adjoined {
                    return Ok(ExtensionOutcome {
                        terminated: false,
                        reason: format!("more than {max_adjoined} elements needed"),
                        adjoined,
                        diagram: None,
                    });
                }
                let c = nf_opt(&rem, &st.canon).monic();
                let column: Vec<i64> = (0..n)
                    .map(|i| st.value(&c, i).ok_or_else(|| Error::Invalid("adjoined element is zero".into())))
                    .collect::<Result<_>>()?;
                adjoined.push(AdjoinedElement {
                    label: format!("Z{}", m - d0 + 1),
                    element: c.clone(),
                    column: column.clone(),
                    degree,
                    stage: s + 1,
                });
                st.elements.push(c);
                st.columns.push(column);
                st.degrees.push(degree);
                continue 'outer;
            }
        }
        if !unresolved.is_empty() {
            return Ok(ExtensionOutcome {
                terminated: false,
                reason: format!("initial relations at rays {unresolved:?} do not lift, yet subduct to zero"),
                adjoined,
                diagram: None,
            });
        }
        let diagram = st.diagram(d)?;
        let reason = if adjoined.is_empty() { "basis already strong at every stage".into() } else { "initial relations lift at every stage".into() };
        return Ok(ExtensionOutcome { terminated: true, reason, adjoined, diagram: Some(diagram) });
    }
}
