use super::prime::{prime_check_patterns, saturation_witness};
use super::subduction::{subduction_extend, ExtensionOutcome};
use super::{build_ib, gb_opt, nf_opt, rees_kernel, NotPrimeCertificate, PrimalityVerdict, ReesPresentation, ReesRing};
use crate::bundles::{check_adapted, family_common_cone, AdaptednessReport, Diagram, Presentation};
use crate::error::{Error, Result};
use crate::exactalg::{rat, Rational};
use crate::fans::combinations;
use crate::polyring::{initial_ideal, GroebnerBudget, Polynomial, WeightOrder};
use crate::troplinear::{common_apartment, one_based};
use num_traits::Zero;
use serde::Serialize;

/// Knobs for `strong_khovanskii_verdict`.
#[derive(Clone, Debug)]
pub struct VerdictOptions {
    pub budget: GroebnerBudget,
    /// Largest degree of an element the extension may adjoin.
    pub degree_cap: usize,
    /// Largest number of elements the extension may adjoin.
    pub max_adjoined: usize,
    /// Try to extend the basis when it is not strong.
    pub extend: bool,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions { budget: GroebnerBudget::default(), degree_cap: 4, max_adjoined: 6, extend: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MdsVerdict {
    MoriDream,
    NotMoriDream,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub name: String,
    pub applicable: bool,
    pub certifies: bool,
    pub detail: String,
}

impl CriterionResult {
    fn not_applicable(name: &str, why: impl Into<String>) -> Self {
        CriterionResult { name: name.into(), applicable: false, certifies: false, detail: why.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayPrimeCheck {
    /// 1-based ray index.
    pub ray: usize,
    pub verdict: PrimalityVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct MdsReport {
    pub adaptedness: AdaptednessReport,
    pub criteria: Vec<CriterionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypersurface_failing_pairs: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<ReesPresentation>,
    pub prime_checks: Vec<RayPrimeCheck>,
    /// Some(true): every ⟨I_B, X_i⟩ is certified prime; Some(false): one is certified not prime.
    pub strong_basis: Option<bool>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extended: Option<Box<MdsReport>>,
    pub verdict: MdsVerdict,
}

/// Columns of the minimum entries of each row.
fn row_minima(d: &Diagram) -> Vec<Vec<usize>> {
    (0..d.n_rows())
        .map(|i| {
            let r = d.row(i);
            let m = *r.iter().min().expect("nonempty row");
            (0..r.len()).filter(|&j| r[j] == m).collect()
        })
        .collect()
}

/// For a fiber ideal generated by one linear form of full support: the
/// 1-based pairs of rows whose minima share no column. Empty means the
/// basis is strong.
pub fn hypersurface_check(d: &Diagram) -> Result<Vec<(usize, usize)>> {
    let p = d
        .presentation()
        .as_linear()
        .ok_or_else(|| Error::Precondition("not a hypersurface presentation: the fiber ideal is not linear".into()))?;
    let rel = p.relations();
    if rel.len() != 1 || rel[0].iter().any(|c| c.is_zero()) {
        return Err(Error::Precondition("not a hypersurface presentation: need one relation involving every element".into()));
    }
    let mins = row_minima(d);
    let mut bad = Vec::new();
    for i in 0..mins.len() {
        for j in i + 1..mins.len() {
            if !mins[i].iter().any(|c| mins[j].contains(c)) {
                bad.push((i + 1, j + 1));
            }
        }
    }
    Ok(bad)
}

/// Twist and surviving columns showing a diagram is sparse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseCertificate {
    /// Subtracted from each row.
    pub twist: Vec<i64>,
    /// 1-based representatives of the parallel classes of basis elements.
    pub kept_columns: Vec<usize>,
}

/// Parallel basis elements carry equal columns; after keeping one element
/// per class and subtracting row minima, each row must have at most one
/// nonzero entry.
pub fn sparse_check(d: &Diagram) -> Option<SparseCertificate> {
    let p = d.presentation().as_linear()?;
    let mut kept: Vec<usize> = Vec::new();
    for j in 0..d.n_cols() {
        let parallel = kept.iter().copied().find(|&k| p.span_of(&[k, j]).dim() <= 1 && p.span_of(&[k]).dim() == 1);
        match parallel {
            Some(k) if d.column(k) == d.column(j) => {}
            Some(_) => return None,
            None => kept.push(j),
        }
    }
    let twist: Vec<i64> = (0..d.n_rows()).map(|i| kept.iter().map(|&j| d.row(i)[j]).min().unwrap_or(0)).collect();
    let ok = (0..d.n_rows()).all(|i| kept.iter().filter(|&&j| d.row(i)[j] != twist[i]).count() <= 1);
    ok.then(|| SparseCertificate { twist, kept_columns: one_based(&kept) })
}

/// Uniform bundles over projective space with few relations: the basis is
/// strong when no column attains every row minimum.
pub fn uniform_check(d: &Diagram) -> Result<bool> {
    let fan = d.fan();
    let n = fan.n_rays();
    let k = fan.dim();
    if n != k + 1 {
        return Err(Error::Precondition(format!("fan with {n} rays in dimension {k} is not the fan of projective space")));
    }
    let maxc = fan.maximal_cones();
    let expected = combinations(n, n - 1);
    if maxc.len() != expected.len() || expected.iter().any(|c| !maxc.contains(c)) {
        return Err(Error::Precondition("the maximal cones are not all (n-1)-subsets of the rays".into()));
    }
    let sum: Vec<i64> = (0..k).map(|c| fan.rays().iter().map(|r| r[c]).sum()).collect();
    if sum.iter().any(|&x| x != 0) {
        return Err(Error::Precondition("the rays do not sum to zero".into()));
    }
    let m = d
        .presentation()
        .matroid()?
        .ok_or_else(|| Error::Precondition("uniform check needs a linear presentation".into()))?;
    if !m.is_uniform() {
        return Err(Error::Precondition("the column matroid is not uniform".into()));
    }
    let (dd, r) = (m.d(), m.rank());
    if dd - r >= n - 1 {
        return Err(Error::Precondition(format!("d - r = {} is not below n - 1 = {}", dd - r, n - 1)));
    }
    let mins = row_minima(d);
    Ok(!(0..d.n_cols()).any(|j| mins.iter().all(|s| s.contains(&j))))
}

/// A basis (bundle case) or Gröbner cone (family case) containing every row.
pub fn single_apartment_check(d: &Diagram, budget: &GroebnerBudget) -> Result<Option<String>> {
    let rows: Vec<Vec<Rational>> = (0..d.n_rows()).map(|i| d.row_rational(i)).collect();
    match d.presentation().matroid()? {
        Some(m) => Ok(common_apartment(&rows, &m)?.map(|b| format!("basis {:?}", one_based(&b)))),
        None => {
            let (_, gens) = d.presentation().fiber();
            if gens.iter().all(|g| g.is_zero()) {
                return Ok(Some("zero fiber ideal".into()));
            }
            Ok(family_common_cone(&rows, &gens, budget)?.map(|_| "shared Groebner cone".to_string()))
        }
    }
}

/// Kernel of k[Y, X_active] onto gr_w(A) ⊗ torus, when gr_w(A) is certified
/// to be a domain.
pub(crate) fn kernel_at_weight(
    rees: &ReesRing,
    presentation: &Presentation,
    fiber: &[Polynomial],
    columns: &[Vec<i64>],
    w: &[i64],
    active: &[usize],
    budget: &GroebnerBudget,
) -> Result<Option<Vec<Polynomial>>> {
    let nz: Vec<Polynomial> = fiber.iter().filter(|g| !g.is_zero()).cloned().collect();
    let init: Vec<Polynomial> = if nz.is_empty() {
        Vec::new()
    } else {
        let wr: Vec<Rational> = w.iter().map(|&x| rat(x)).collect();
        initial_ideal(&nz, &wr, budget)?.generators().to_vec()
    };
    if presentation.as_linear().is_none() {
        let (v, _) = prime_check_patterns(&init, &[], budget)?;
        if !matches!(v, Some(PrimalityVerdict::Prime { .. })) {
            return Ok(None);
        }
    }
    rees_kernel(rees, &init, columns, active, budget).map(Some)
}

/// Primality of ⟨I_B, X_i⟩: pattern checks, then comparison with the prime
/// kernel onto gr_{w_i}(A) ⊗ torus, then zero-divisor search.
fn ray_prime_check(d: &Diagram, ib: &ReesPresentation, i: usize, budget: &GroebnerBudget) -> Result<PrimalityVerdict> {
    let rees = ib.rees();
    let spec = ib.specialize(i);
    let linear_vars: Vec<usize> = (0..rees.n_y()).collect();
    let (v, gb) = prime_check_patterns(&spec, &linear_vars, budget)?;
    if let Some(v) = v {
        return Ok(v);
    }
    let (_, fiber) = d.presentation().fiber();
    let columns: Vec<Vec<i64>> = (0..d.n_cols()).map(|j| d.column(j)).collect();
    let active: Vec<usize> = (0..d.n_rows()).filter(|&k| k != i).collect();
    if let Some(kernel) = kernel_at_weight(rees, d.presentation(), &fiber, &columns, d.row(i), &active, budget)? {
        let kgb = gb_opt(&kernel, &WeightOrder::grevlex(rees.ring().nvars()), budget)?;
        let contained = spec.iter().all(|g| nf_opt(g, &kgb).is_zero());
        if contained {
            match kernel.iter().find(|g| !nf_opt(g, &gb).is_zero()) {
                None => return Ok(PrimalityVerdict::Prime { reason: "equals the kernel onto a domain".into() }),
                Some(w) => {
                    return Ok(PrimalityVerdict::NotPrime {
                        certificate: NotPrimeCertificate::KernelContainment { witness: w.clone() },
                    })
                }
            }
        }
    }
    if let Some(gb) = gb {
        if let Some(cert) = saturation_witness(&gb, budget)? {
            return Ok(PrimalityVerdict::NotPrime { certificate: cert });
        }
    }
    Ok(PrimalityVerdict::Inconclusive { reason: "no certificate found".into() })
}

fn criteria(d: &Diagram, budget: &GroebnerBudget) -> Result<(Vec<CriterionResult>, Option<Vec<(usize, usize)>>)> {
    let mut out = Vec::new();
    let mut pairs = None;
    match hypersurface_check(d) {
        Ok(bad) => {
            let detail = if bad.is_empty() {
                "every pair of rows shares a minimizing column".to_string()
            } else {
                format!("row pairs without a shared minimizing column: {bad:?}")
            };
            out.push(CriterionResult { name: "hypersurface".into(), applicable: true, certifies: bad.is_empty(), detail });
            pairs = Some(bad);
        }
        Err(Error::Precondition(why)) => out.push(CriterionResult::not_applicable("hypersurface", why)),
        Err(e) => return Err(e),
    }
    match sparse_check(d) {
        Some(c) => out.push(CriterionResult {
            name: "sparse".into(),
            applicable: true,
            certifies: true,
            detail: format!("twist {:?}, columns {:?}", c.twist, c.kept_columns),
        }),
        None => out.push(CriterionResult {
            name: "sparse".into(),
            applicable: d.presentation().as_linear().is_some(),
            certifies: false,
            detail: "some row has two entries above its minimum".into(),
        }),
    }
    match uniform_check(d) {
        Ok(ok) => out.push(CriterionResult {
            name: "uniform".into(),
            applicable: true,
            certifies: ok,
            detail: if ok { "no column attains every row minimum".into() } else { "a column attains every row minimum".into() },
        }),
        Err(Error::Precondition(why)) => out.push(CriterionResult::not_applicable("uniform", why)),
        Err(e) => return Err(e),
    }
    match single_apartment_check(d, budget)? {
        Some(w) => out.push(CriterionResult { name: "single_apartment".into(), applicable: true, certifies: true, detail: w }),
        None => out.push(CriterionResult {
            name: "single_apartment".into(),
            applicable: true,
            certifies: false,
            detail: "the rows share no apartment".into(),
        }),
    }
    Ok((out, pairs))
}

/// Decides whether the diagram's basis is strong by the sufficient criteria
/// and by primality of each ⟨I_B, X_i⟩; when a check fails, optionally
/// extends the basis and decides again.
pub fn strong_khovanskii_verdict(d: &Diagram, opts: &VerdictOptions) -> Result<MdsReport> {
    let budget = &opts.budget;
    let adaptedness = check_adapted(d, budget)?;
    if !adaptedness.adapted {
        return Ok(MdsReport {
            adaptedness,
            criteria: Vec::new(),
            hypersurface_failing_pairs: None,
            presentation: None,
            prime_checks: Vec::new(),
            strong_basis: None,
            notes: vec!["diagram is not adapted to the fan".into()],
            extension: None,
            extended: None,
            verdict: MdsVerdict::Inconclusive,
        });
    }
    let (criteria, pairs) = criteria(d, budget)?;
    let ib = build_ib(d, budget)?;
    let mut checks = Vec::new();
    for i in 0..d.n_rows() {
        checks.push(RayPrimeCheck { ray: i + 1, verdict: ray_prime_check(d, &ib, i, budget)? });
    }
    let strong_basis = if checks.iter().all(|c| c.verdict.is_prime()) {
        Some(true)
    } else if checks.iter().any(|c| c.verdict.is_not_prime()) {
        Some(false)
    } else {
        None
    };
    let mut notes = Vec::new();
    let certified = criteria.iter().any(|c| c.certifies);
    let mut verdict = if certified || strong_basis == Some(true) { MdsVerdict::MoriDream } else { MdsVerdict::Inconclusive };
    let mut extension = None;
    let mut extended = None;
    if strong_basis == Some(false) {
        let rays: Vec<usize> = checks.iter().filter(|c| c.verdict.is_not_prime()).map(|c| c.ray).collect();
        notes.push(format!("strong basis fails for B: <I_B, X_i> is not prime for rays {rays:?}"));
        if verdict != MdsVerdict::MoriDream && opts.extend {
            let ext = subduction_extend(d, opts.degree_cap, opts.max_adjoined, budget)?;
            if ext.terminated && !ext.adjoined.is_empty() {
                let ed = ext.diagram.clone().expect("terminated extension carries a diagram");
                let inner = VerdictOptions { extend: false, ..opts.clone() };
                let rep = strong_khovanskii_verdict(&ed, &inner)?;
                if rep.verdict == MdsVerdict::MoriDream {
                    notes.push(format!("extended basis with {} adjoined elements is strong", ext.adjoined.len()));
                    verdict = MdsVerdict::MoriDream;
                } else {
                    notes.push(format!("extended basis with {} adjoined elements is not certified strong", ext.adjoined.len()));
                }
                extended = Some(Box::new(rep));
            } else if !ext.terminated {
                notes.push(format!("extension did not stabilise within budget: {}", ext.reason));
            }
            extension = Some(ext);
        } else {
            notes.push("extension not attempted".into());
        }
    }
    Ok(MdsReport {
        adaptedness,
        criteria,
        hypersurface_failing_pairs: pairs,
        presentation: Some(ib),
        prime_checks: checks,
        strong_basis,
        notes,
        extension,
        extended,
        verdict,
    })
}
