use super::{gb_opt, nf_opt};
use crate::error::{Error, Result};
use crate::exactalg::{rat, Subspace};
use crate::polyring::{saturate, GroebnerBasis, GroebnerBudget, Monomial, Polynomial, WeightOrder};
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;

fn ser_poly<S: Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn ser_polys<S: Serializer>(p: &[Polynomial], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(|x| x.to_string()))
}

/// Evidence that an ideal is not prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NotPrimeCertificate {
    UnitIdeal,
    /// The ideal is principal and its generator is the product of the factors.
    Factorization {
        #[serde(serialize_with = "ser_polys")]
        factors: Vec<Polynomial>,
    },
    /// a·b lies in the ideal while neither a nor b does.
    ZeroDivisors {
        #[serde(serialize_with = "ser_poly")]
        a: Polynomial,
        #[serde(serialize_with = "ser_poly")]
        b: Polynomial,
    },
    /// The ideal is strictly contained in a prime of the same dimension; the
    /// witness lies in the prime but not in the ideal.
    KernelContainment {
        #[serde(serialize_with = "ser_poly")]
        witness: Polynomial,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PrimalityVerdict {
    Prime { reason: String },
    NotPrime { certificate: NotPrimeCertificate },
    Inconclusive { reason: String },
}

impl PrimalityVerdict {
    pub fn is_prime(&self) -> bool {
        matches!(self, PrimalityVerdict::Prime { .. })
    }

    pub fn is_not_prime(&self) -> bool {
        matches!(self, PrimalityVerdict::NotPrime { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            PrimalityVerdict::Prime { .. } => "prime",
            PrimalityVerdict::NotPrime { .. } => "not prime",
            PrimalityVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

fn prime(reason: &str) -> PrimalityVerdict {
    PrimalityVerdict::Prime { reason: reason.to_string() }
}

fn monomial_poly(like: &Polynomial, m: &Monomial) -> Polynomial {
    Polynomial::term(like.ring(), m.clone(), rat(1))
}

/// Specialises `extra` to zero and drops zero generators.
pub(crate) fn specialize(gens: &[Polynomial], extra: Option<usize>) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = Vec::new();
    for g in gens {
        let h = match extra {
            Some(v) => g.set_var(v, &rat(0)),
            None => g.clone(),
        };
        if !h.is_zero() && !out.contains(&h) {
            out.push(h);
        }
    }
    out
}

/// Primality of a principal ideal <f> with f free of monomial content.
fn principal_linear_pattern(f: &Polynomial, linear_vars: &[usize]) -> bool {
    if f.term_count() < 2 {
        return false;
    }
    let mut seen = BTreeSet::new();
    for (m, _) in f.terms() {
        let lin: Vec<usize> = linear_vars.iter().copied().filter(|&v| m.0[v] != 0).collect();
        if lin.len() != 1 || m.0[lin[0]] != 1 || !seen.insert(lin[0]) {
            return false;
        }
    }
    true
}

/// Generators of the form ψ(ℓ) with ℓ linear, where ψ sends each y_i to a
/// monomial, the monomials have pairwise disjoint supports and each has a
/// variable of exponent one, and the linear ideal contains no variable.
fn disjoint_pattern(polys: &[Polynomial]) -> bool {
    if polys.is_empty() {
        return false;
    }
    let monos: Vec<Monomial> = polys.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect::<BTreeSet<_>>().into_iter().collect();
    let mut used = BTreeSet::new();
    for m in &monos {
        if m.is_one() || !m.0.contains(&1) {
            return false;
        }
        for (i, &e) in m.0.iter().enumerate() {
            if e != 0 && !used.insert(i) {
                return false;
            }
        }
    }
    let rows: Vec<Vec<_>> = polys.iter().map(|p| monos.iter().map(|m| p.coefficient(m)).collect()).collect();
    let Ok(space) = Subspace::span(monos.len(), rows) else { return false };
    (0..monos.len()).all(|i| {
        let mut e = vec![rat(0); monos.len()];
        e[i] = rat(1);
        !space.contains(&e)
    })
}

/// Cheap sound checks. `None` when nothing applies.
pub(crate) fn prime_check_patterns(
    gens: &[Polynomial],
    linear_vars: &[usize],
    budget: &GroebnerBudget,
) -> Result<(Option<PrimalityVerdict>, Option<GroebnerBasis>)> {
    if gens.is_empty() {
        return Ok((Some(prime("zero ideal")), None));
    }
    if gens.iter().any(|g| g.is_constant()) {
        return Ok((Some(PrimalityVerdict::NotPrime { certificate: NotPrimeCertificate::UnitIdeal }), None));
    }
    let n = gens[0].nvars();
    let gb = gb_opt(gens, &WeightOrder::grevlex(n), budget)?;
    let Some(g) = gb.clone() else { return Ok((Some(prime("zero ideal")), None)) };
    if g.is_unit_ideal() {
        return Ok((Some(PrimalityVerdict::NotPrime { certificate: NotPrimeCertificate::UnitIdeal }), gb));
    }
    let basis = g.generators();
    if basis.iter().all(|p| p.terms().all(|(m, _)| m.degree() <= 1)) {
        return Ok((Some(prime("linear ideal")), gb));
    }
    if basis.len() == 1 {
        let f = &basis[0];
        let c = f.monomial_content();
        if !c.is_one() {
            let rest = f.div_monomial(&c);
            if rest.is_constant() {
                if c.degree() == 1 {
                    return Ok((Some(prime("generated by a variable")), gb));
                }
                let v = c.0.iter().position(|&e| e > 0).expect("nonconstant monomial");
                let x = Monomial::var(n, v);
                let factors = vec![monomial_poly(f, &x), rest.mul(&monomial_poly(f, &c.div(&x)))];
                return Ok((Some(PrimalityVerdict::NotPrime { certificate: NotPrimeCertificate::Factorization { factors } }), gb));
            }
            let factors = vec![monomial_poly(f, &c), rest];
            return Ok((Some(PrimalityVerdict::NotPrime { certificate: NotPrimeCertificate::Factorization { factors } }), gb));
        }
        if principal_linear_pattern(f, linear_vars) {
            return Ok((Some(prime("principal, linear in the basis variables with coprime coefficients")), gb));
        }
    }
    if disjoint_pattern(gens) || disjoint_pattern(basis) {
        return Ok((Some(prime("monomial substitution with disjoint supports of a monomial-free linear ideal")), gb));
    }
    for h in basis {
        let c = h.monomial_content();
        if c.is_one() {
            continue;
        }
        let a = monomial_poly(h, &c);
        let b = h.div_monomial(&c);
        if !nf_opt(&a, &gb).is_zero() && !nf_opt(&b, &gb).is_zero() {
            return Ok((Some(PrimalityVerdict::NotPrime { certificate: NotPrimeCertificate::ZeroDivisors { a, b } }), gb));
        }
    }
    Ok((None, gb))
}

/// Looks for x^e·g in the ideal with neither factor in it, one variable at a time.
pub(crate) fn saturation_witness(
    gb: &GroebnerBasis,
    budget: &GroebnerBudget,
) -> Result<Option<NotPrimeCertificate>> {
    let basis = gb.generators();
    let Some(first) = basis.first() else { return Ok(None) };
    let n = first.nvars();
    let used: BTreeSet<usize> = basis.iter().flat_map(|p| p.vars_used()).collect();
    let some = Some(gb.clone());
    for &k in &used {
        let x = Polynomial::var(first.ring(), k);
        if nf_opt(&x, &some).is_zero() {
            continue;
        }
        let sat = match saturate(basis, &[k], budget) {
            Ok(s) => s,
            Err(Error::Budget(_)) => continue,
            Err(e) => return Err(e),
        };
        let sat_gb = match gb_opt(&sat, &WeightOrder::grevlex(n), budget) {
            Ok(s) => s,
            Err(Error::Budget(_)) => continue,
            Err(e) => return Err(e),
        };
        for g in super::gb_gens(&sat_gb) {
            if nf_opt(&g, &some).is_zero() {
                continue;
            }
            let mut xe = Polynomial::one(first.ring());
            for _ in 0..64 {
                xe = xe.mul(&x);
                if nf_opt(&xe.mul(&g), &some).is_zero() {
                    if nf_opt(&xe, &some).is_zero() {
                        let mut low = Polynomial::one(first.ring());
                        loop {
                            let next = low.mul(&x);
                            if nf_opt(&next, &some).is_zero() {
                                return Ok(Some(NotPrimeCertificate::ZeroDivisors { a: x, b: low }));
                            }
                            low = next;
                        }
                    }
                    return Ok(Some(NotPrimeCertificate::ZeroDivisors { a: xe, b: g }));
                }
            }
        }
    }
    Ok(None)
}

/// Sound but incomplete primality test for <gens> (+ <x_extra>).
/// `linear_vars` are the variables in which the principal pattern looks for
/// linearity (the basis variables of a Rees ring).
pub fn prime_check(
    gens: &[Polynomial],
    extra: Option<usize>,
    linear_vars: &[usize],
    budget: &GroebnerBudget,
) -> Result<PrimalityVerdict> {
    let spec = specialize(gens, extra);
    let (v, gb) = prime_check_patterns(&spec, linear_vars, budget)?;
    if let Some(v) = v {
        return Ok(v);
    }
    if let Some(gb) = gb {
        if let Some(cert) = saturation_witness(&gb, budget)? {
            return Ok(PrimalityVerdict::NotPrime { certificate: cert });
        }
    }
    Ok(PrimalityVerdict::Inconclusive { reason: "no primality pattern or zero-divisor witness found".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Ring;

    fn b() -> GroebnerBudget {
        GroebnerBudget::default()
    }

    #[test]
    fn content_gives_a_factorization() {
        let r = Ring::new(["Y1", "Y2", "Y3", "Y4", "X1", "X2", "X3", "X4"]);
        let f = Polynomial::parse("Y1*X1^2*X4 + Y2*X1*X2^2 + Y3*X2*X3^2 + Y4*X3*X4^2", &r).unwrap();
        let v = prime_check(&[f.clone()], Some(4), &[0, 1, 2, 3], &b()).unwrap();
        let PrimalityVerdict::NotPrime { certificate: NotPrimeCertificate::Factorization { factors } } = v else {
            panic!("{v:?}")
        };
        assert_eq!(factors[0].to_string(), "X3");
        assert_eq!(factors[0].mul(&factors[1]), f.set_var(4, &rat(0)));
        let v2 = prime_check(&[f], Some(5), &[0, 1, 2, 3], &b()).unwrap();
        assert!(v2.is_not_prime());
    }

    #[test]
    fn linear_and_disjoint_patterns() {
        let r = Ring::new(["Y1", "Y2", "Y3", "X1", "X2", "X3"]);
        let f = Polynomial::parse("Y1*X1^4 + Y2*X2^4 + Y3*X3^4", &r).unwrap();
        assert!(prime_check(&[f.clone()], Some(3), &[0, 1, 2], &b()).unwrap().is_prime());
        assert!(prime_check(&[f], None, &[0, 1, 2], &b()).unwrap().is_prime());
        let r = Ring::new(["a", "b", "c", "d", "x", "y"]);
        let g = Polynomial::parse("x^2*a*b - y^2*c*d", &r).unwrap();
        assert!(prime_check(&[g], None, &[], &b()).unwrap().is_prime());
    }

    #[test]
    fn quadric_without_pattern_is_inconclusive() {
        let r = Ring::new(["Y1", "Y2"]);
        let f = Polynomial::parse("Y1^2 + Y2^2", &r).unwrap();
        let v = prime_check(&[f], None, &[0, 1], &b()).unwrap();
        assert!(matches!(v, PrimalityVerdict::Inconclusive { .. }), "{v:?}");
    }

    #[test]
    fn zero_divisor_from_saturation() {
        let r = Ring::new(["x", "y", "z"]);
        // <x*y, x*z>: x·y in it, neither factor is
        let gens = vec![Polynomial::parse("x*y", &r).unwrap(), Polynomial::parse("x*z - x^2", &r).unwrap()];
        let v = prime_check(&gens, None, &[], &b()).unwrap();
        let PrimalityVerdict::NotPrime { certificate: NotPrimeCertificate::ZeroDivisors { a, b: bb } } = v else { panic!("{v:?}") };
        let gb = gb_opt(&gens, &WeightOrder::grevlex(3), &b()).unwrap();
        assert!(nf_opt(&a.mul(&bb), &gb).is_zero());
        assert!(!nf_opt(&a, &gb).is_zero() && !nf_opt(&bb, &gb).is_zero());
    }

    #[test]
    fn unit_and_zero() {
        let r = Ring::new(["x"]);
        assert!(prime_check(&[], None, &[], &b()).unwrap().is_prime());
        let f = Polynomial::parse("x - 1", &r).unwrap();
        assert!(prime_check(&[f], Some(0), &[], &b()).unwrap().is_not_prime());
    }
}
