//! Property checks shared by the proptest suites and the acceptance harness.
//! Each returns `Err` with a description of the first counterexample.

use std::collections::BTreeSet;

use toricbundle::bundles::{klyachko_space, klyachko_space_in_basis, witnessing_bases, Diagram};
use toricbundle::exactalg::{rat, Rational, RationalMatrix};
use toricbundle::plsemifield::PLFunction;
use toricbundle::polyring::{buchberger, iota, weight_value, ExtValue, Monomial, Polynomial, WeightOrder};
use toricbundle::troplinear::{iota_linear, trop_member_scalar, Matroid};

use super::budget;

pub type Check = Result<(), String>;

pub fn ratv(w: &[i64]) -> Vec<Rational> {
    w.iter().map(|&x| rat(x)).collect()
}

/// Positively graded ideals used for the idempotence property.
pub fn graded_ideals() -> Vec<Vec<Polynomial>> {
    [
        &["p12*p34 - p13*p24 + p14*p23"][..],
        &["a*c - b^2", "a*d - b*c", "b*d - c^2"],
        &["x + y + z", "y - 2*z + w"],
        &["x*y - z^2", "x^3 - y*z*w"],
        &["x^2 - y*z", "y^2 - x*z", "z^2 - x*y"],
    ]
    .iter()
    .map(|t| Polynomial::parse_many(t).expect("ideal parses").1)
    .collect()
}

/// Homogeneous ideals whose quotients carry the weight-value property.
pub fn quotient_ideals() -> Vec<Vec<Polynomial>> {
    [
        &["p12*p34 - p13*p24 + p14*p23"][..],
        &["a*c - b^2", "a*d - b*c", "b*d - c^2"],
        &["x*y - z^2", "x*z - y^2 + z^2"],
    ]
    .iter()
    .map(|t| Polynomial::parse_many(t).expect("ideal parses").1)
    .collect()
}

/// ι(ι(w)) = ι(w).
pub fn iota_idempotent(gens: &[Polynomial], w: &[i64]) -> Check {
    let w = ratv(w);
    let once = iota(&w, gens, &budget()).map_err(|e| e.to_string())?;
    let twice = iota(&once, gens, &budget()).map_err(|e| e.to_string())?;
    if once == twice {
        Ok(())
    } else {
        Err(format!("iota({w:?}) = {once:?} but iota of that is {twice:?}"))
    }
}

/// ι(w) = w exactly when w is tropical on every circuit, and the matroid
/// formula for ι agrees with the Gröbner computation.
pub fn iota_linear_fixed_iff_tropical(m: &Matroid, w: &[i64], groebner: bool) -> Check {
    let w = ratv(w);
    let image = iota_linear(&w, m).map_err(|e| e.to_string())?;
    let fixed = image == w;
    let tropical = trop_member_scalar(&w, m).map_err(|e| e.to_string())?;
    if fixed != tropical {
        return Err(format!("w = {w:?}: fixed {fixed}, tropical {tropical}"));
    }
    if groebner {
        let forms = m.linear_forms(&m.default_ring());
        let g = iota(&w, &forms, &budget()).map_err(|e| e.to_string())?;
        if g != image {
            return Err(format!("w = {w:?}: matroid iota {image:?}, Groebner iota {g:?}"));
        }
    }
    Ok(())
}

/// Every lattice point of [lo, hi]^d, in lexicographic order.
pub fn grid(d: usize, lo: i64, hi: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (hi - lo + 1) as usize;
    (0..side.pow(d as u32)).map(move |mut k| {
        let mut v = vec![0; d];
        for x in v.iter_mut().rev() {
            *x = lo + (k % side) as i64;
            k /= side;
        }
        v
    })
}

/// The Klyachko filtration of every row is the same in every witnessing basis.
pub fn klyachko_apartment_independent(d: &Diagram) -> Check {
    for i in 0..d.n_rows() {
        let row = d.row(i);
        let lo = row.iter().min().copied().unwrap_or(0) - 1;
        let hi = row.iter().max().copied().unwrap_or(0) + 1;
        let bases = witnessing_bases(d, i).map_err(|e| e.to_string())?;
        if bases.is_empty() {
            return Err(format!("row {} has no witnessing basis", i + 1));
        }
        for r in lo..=hi {
            let reference = klyachko_space(d, i, r).map_err(|e| e.to_string())?;
            for b in &bases {
                let s = klyachko_space_in_basis(d, i, r, b).map_err(|e| e.to_string())?;
                if s != reference {
                    return Err(format!("row {}, r = {r}: basis {b:?} gives a different space", i + 1));
                }
            }
        }
    }
    Ok(())
}

/// Monomials of total degree `deg` in `n` variables.
pub fn monomials_of_degree(n: usize, deg: i32) -> Vec<Monomial> {
    if n == 0 {
        return if deg == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in monomials_of_degree(n - 1, deg - first) {
            rest.0.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// max over representatives f of a + I_D of the minimal term weight, found
/// by linear algebra in the degree-D component. `a` must be homogeneous.
pub fn weight_value_by_representatives(a: &Polynomial, w: &[Rational], gens: &[Polynomial]) -> ExtValue {
    if a.is_zero() {
        return ExtValue::Infinity;
    }
    let ring = a.ring().clone();
    let n = ring.nvars();
    let deg = a.total_degree().expect("nonzero") as i32;
    let monos = monomials_of_degree(n, deg);
    let mut span: Vec<Polynomial> = Vec::new();
    for g in gens {
        let dg = g.total_degree().expect("nonzero generator") as i32;
        if dg <= deg {
            for m in monomials_of_degree(n, deg - dg) {
                span.push(g.mul_monomial(&m, &rat(1)));
            }
        }
    }
    // Is there f in a + I_D with no term of weight below t (None: f = 0)?
    let feasible = |t: Option<&Rational>| -> bool {
        let forbidden: Vec<&Monomial> = monos.iter().filter(|m| t.is_none_or(|t| &m.weight(w) < t)).collect();
        if forbidden.is_empty() {
            return true;
        }
        if span.is_empty() {
            return forbidden.iter().all(|m| a.coefficient(m) == rat(0));
        }
        let rows = forbidden.iter().map(|m| span.iter().map(|h| h.coefficient(m)).collect()).collect();
        let rhs: Vec<Rational> = forbidden.iter().map(|m| -a.coefficient(m)).collect();
        let mat = RationalMatrix::from_rows(rows, span.len()).expect("shape");
        mat.solve(&rhs).expect("shape").is_some()
    };
    if feasible(None) {
        return ExtValue::Infinity;
    }
    let levels: BTreeSet<Rational> = monos.iter().map(|m| m.weight(w)).collect();
    let best = levels.into_iter().rev().find(|t| feasible(Some(t))).expect("the lowest level is feasible");
    ExtValue::Finite(best)
}

/// weight_value on a Gröbner basis for w matches the representative oracle.
pub fn weight_value_matches_oracle(gens: &[Polynomial], a: &Polynomial, w: &[i64]) -> Check {
    let w = ratv(w);
    let n = a.ring().nvars();
    let ord = WeightOrder::refined(n, vec![w.clone()]).map_err(|e| e.to_string())?;
    let gb = buchberger(gens, &ord, &budget()).map_err(|e| e.to_string())?;
    let got = weight_value(a, &w, &gb).map_err(|e| e.to_string())?;
    let want = weight_value_by_representatives(a, &w, gens);
    if got == want {
        Ok(())
    } else {
        Err(format!("class of {a} at {w:?}: weight_value {got:?}, oracle {want:?}"))
    }
}

/// Homogeneous polynomial of degree `deg` from (monomial index, coefficient) picks.
pub fn homogeneous_poly(gens: &[Polynomial], deg: i32, picks: &[(usize, i64)]) -> Polynomial {
    let ring = gens[0].ring().clone();
    let monos = monomials_of_degree(ring.nvars(), deg);
    let mut p = Polynomial::zero(&ring);
    for &(k, c) in picks {
        p.add_term(monos[k % monos.len()].clone(), rat(c));
    }
    p
}

fn pl(f: toricbundle::Result<PLFunction>) -> Result<PLFunction, String> {
    f.map_err(|e| e.to_string())
}

fn same(what: &str, a: &PLFunction, b: &PLFunction) -> Check {
    if a == b {
        Ok(())
    } else {
        Err(format!("{what}: {a:?} != {b:?}"))
    }
}

/// Semiring laws in canonical form, plus the evaluation homomorphism at rho.
pub fn pl_semiring_laws(f: &PLFunction, g: &PLFunction, h: &PLFunction, rho: &[i64]) -> Check {
    let fg = pl(f.trop_add(g))?;
    same("add commutes", &fg, &pl(g.trop_add(f))?)?;
    same("add idempotent", &pl(f.trop_add(f))?, f)?;
    same("add associates", &pl(fg.trop_add(h))?, &pl(f.trop_add(&pl(g.trop_add(h))?))?)?;
    let fm = pl(f.trop_mul(g))?;
    same("mul commutes", &fm, &pl(g.trop_mul(f))?)?;
    same("mul associates", &pl(fm.trop_mul(h))?, &pl(f.trop_mul(&pl(g.trop_mul(h))?))?)?;
    same(
        "mul distributes",
        &pl(f.trop_mul(&pl(g.trop_add(h))?))?,
        &pl(pl(f.trop_mul(g))?.trop_add(&pl(f.trop_mul(h))?))?,
    )?;
    let ev = |p: &PLFunction| p.evaluate(rho).map_err(|e| e.to_string());
    let (a, b) = (ev(f)?, ev(g)?);
    if ev(&fg)? != a.min(b) || ev(&fm)? != a + b {
        return Err(format!("evaluation at {rho:?} is not a homomorphism"));
    }
    for l in 0..4 {
        let scaled: Vec<i64> = rho.iter().map(|x| l * x).collect();
        if f.evaluate(&scaled).map_err(|e| e.to_string())? != l * a {
            return Err(format!("f({l} * {rho:?}) != {l} * f({rho:?})"));
        }
    }
    Ok(())
}
