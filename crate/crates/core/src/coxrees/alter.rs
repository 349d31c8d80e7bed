use super::criteria::kernel_at_weight;
use super::{build_ib, gb_gens, gb_opt, nf_opt, strong_khovanskii_verdict, MdsVerdict, ReesRing, VerdictOptions};
use crate::bundles::{check_adapted, row_is_tropical, AdaptednessReport, Diagram};
use crate::error::{Error, Result};
use crate::exactalg::rat;
use crate::fans::Fan;
use crate::polyring::{ideals_equal, initial_ideal, GroebnerBudget, Polynomial, WeightOrder};
use serde::{Serialize, Serializer};

fn ser_polys<S: Serializer>(p: &[Polynomial], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(|x| x.to_string()))
}

/// Generators whose initial forms at every s(w_i) generate the initial
/// ideal, each equal to its X_i = 0 specialisation there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodBasis {
    #[serde(serialize_with = "ser_polys")]
    pub generators: Vec<Polynomial>,
    /// Both defining properties were checked for every row.
    pub verified: bool,
}

fn initial_forms_generate(f: &[Polynomial], rees: &ReesRing, ideal: &[Polynomial], row: &[i64], budget: &GroebnerBudget) -> Result<bool> {
    let w = rees.s_weight(row);
    let forms: Vec<Polynomial> = f.iter().map(|g| g.initial_form(&w)).collect();
    let target = initial_ideal(ideal, &w, budget)?;
    ideals_equal(&forms, target.generators(), budget)
}

pub fn good_basis(d: &Diagram, budget: &GroebnerBudget) -> Result<GoodBasis> {
    let ib = build_ib(d, budget)?;
    let rees = ib.rees().clone();
    let gens = ib.generators().to_vec();
    if gens.len() <= 1 {
        return Ok(GoodBasis { generators: gens, verified: true });
    }
    let n = rees.ring().nvars();
    let mut pool: Vec<Polynomial> = Vec::new();
    for i in 0..d.n_rows() {
        let w = rees.s_weight(d.row(i));
        let gb = gb_opt(&gens, &WeightOrder::refined(n, vec![w])?, budget)?;
        for g in gb_gens(&gb) {
            let h = rees.strip_x_content(&g).monic();
            if !pool.contains(&h) {
                pool.push(h);
            }
        }
    }
    pool.sort_by_key(|g| (g.total_degree().unwrap_or(0), g.term_count(), g.to_string()));
    // drop members the others can do without, most complicated first
    let mut k = pool.len();
    while k > 0 {
        k -= 1;
        let mut rest = pool.clone();
        rest.remove(k);
        let mut ok = !rest.is_empty();
        for i in 0..d.n_rows() {
            if !ok {
                break;
            }
            ok = initial_forms_generate(&rest, &rees, &gens, d.row(i), budget)?;
        }
        if ok {
            pool = rest;
        }
    }
    let mut verified = ideals_equal(&pool, &gens, budget)?;
    for i in 0..d.n_rows() {
        let w = rees.s_weight(d.row(i));
        let x = rees.x(i);
        verified &= pool.iter().all(|f| f.initial_form(&w) == f.set_var(x, &rat(0)));
        verified &= initial_forms_generate(&pool, &rees, &gens, d.row(i), budget)?;
    }
    Ok(GoodBasis { generators: pool, verified })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CfMembership {
    pub member: bool,
    /// 1-based (element, row) pairs whose initial forms differ.
    pub violations: Vec<(usize, usize)>,
}

/// Whether `candidate` lies in the cone C_F of `reference`: every element of
/// `f` has the same initial form at s(w'_i) as at s(w_i).
pub fn cone_cf_member(reference: &Diagram, f: &[Polynomial], candidate: &Diagram) -> Result<CfMembership> {
    if reference.n_rows() != candidate.n_rows() || reference.n_cols() != candidate.n_cols() {
        return Err(Error::DimensionMismatch("reference and candidate diagrams differ in shape".into()));
    }
    if reference.presentation() != candidate.presentation() {
        return Err(Error::Precondition("reference and candidate use different presentations".into()));
    }
    let rees = ReesRing::for_diagram(reference);
    let mut violations = Vec::new();
    for (k, g) in f.iter().enumerate() {
        if g.nvars() != rees.ring().nvars() {
            return Err(Error::RingMismatch("element of F is not in the Rees ring".into()));
        }
        for i in 0..reference.n_rows() {
            let a = g.initial_form(&rees.s_weight(reference.row(i)));
            let b = g.initial_form(&rees.s_weight(candidate.row(i)));
            if a != b {
                violations.push((k + 1, i + 1));
            }
        }
    }
    Ok(CfMembership { member: violations.is_empty(), violations })
}

/// Append a row (a new last ray) or delete one, with the fan after the change.
#[derive(Clone, Debug)]
pub enum Alteration {
    Append { row: Vec<i64>, fan: Fan },
    Delete { row: usize, fan: Fan },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlterationVerdict {
    FinitelyGenerated,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlterationOutcome {
    pub diagram: Diagram,
    pub adaptedness: AdaptednessReport,
    pub verdict: AlterationVerdict,
    pub reason: String,
}

/// Adds or removes a ray. Finite generation carries over when the input
/// basis is strong, the new diagram is adapted and, for an appended row w,
/// the initial ideal in_{s(w)}(I_B) is the prime kernel onto gr_w(A).
pub fn alter_diagram(d: &Diagram, action: &Alteration, opts: &VerdictOptions) -> Result<AlterationOutcome> {
    let budget = &opts.budget;
    let (fan, matrix) = match action {
        Alteration::Append { row, fan } => {
            if row.len() != d.n_cols() {
                return Err(Error::DimensionMismatch(format!("row of length {} for {} columns", row.len(), d.n_cols())));
            }
            let w: Vec<_> = row.iter().map(|&x| rat(x)).collect();
            if let Err(detail) = row_is_tropical(d, &w, budget)? {
                return Err(Error::NonTropicalRow { row: d.n_rows() + 1, detail });
            }
            let mut m = d.matrix().to_vec();
            m.push(row.clone());
            (fan.clone(), m)
        }
        Alteration::Delete { row, fan } => {
            if *row >= d.n_rows() {
                return Err(Error::DimensionMismatch(format!("no row {}", row + 1)));
            }
            let mut m = d.matrix().to_vec();
            m.remove(*row);
            (fan.clone(), m)
        }
    };
    let labels = d.labels();
    let nd = Diagram::new(fan, d.presentation().clone(), matrix)?.with_labels(Some(labels))?;
    let adaptedness = check_adapted(&nd, budget)?;
    let inconclusive = |why: &str, adaptedness: AdaptednessReport| {
        Ok(AlterationOutcome { diagram: nd.clone(), adaptedness, verdict: AlterationVerdict::Inconclusive, reason: why.to_string() })
    };
    if !adaptedness.adapted {
        return inconclusive("the altered diagram is not adapted", adaptedness);
    }
    let base = strong_khovanskii_verdict(d, &VerdictOptions { extend: false, ..opts.clone() })?;
    if base.strong_basis != Some(true) || base.verdict != MdsVerdict::MoriDream {
        return inconclusive("the input basis is not certified strong", adaptedness);
    }
    if let Alteration::Append { row, .. } = action {
        let ib = base.presentation.as_ref().expect("adapted report has a presentation");
        let rees = ib.rees();
        let (_, fiber) = d.presentation().fiber();
        let columns: Vec<Vec<i64>> = (0..d.n_cols()).map(|j| d.column(j)).collect();
        let active: Vec<usize> = (0..d.n_rows()).collect();
        let Some(kernel) = kernel_at_weight(rees, d.presentation(), &fiber, &columns, row, &active, budget)? else {
            return inconclusive("no domain certificate for the graded algebra at the new row", adaptedness);
        };
        let init = initial_ideal(ib.generators(), &rees.s_weight(row), budget)?;
        let init = Some(init);
        if kernel.iter().any(|g| !nf_opt(g, &init).is_zero()) {
            return inconclusive("the initial ideal at the new row is not prime", adaptedness);
        }
        let kgb = gb_opt(&kernel, &WeightOrder::grevlex(rees.ring().nvars()), budget)?;
        if gb_gens(&init).iter().any(|g| !nf_opt(g, &kgb).is_zero()) {
            return inconclusive("the initial ideal at the new row is not prime", adaptedness);
        }
    }
    Ok(AlterationOutcome {
        diagram: nd,
        adaptedness,
        verdict: AlterationVerdict::FinitelyGenerated,
        reason: "strong input basis and a prime point at every altered row".into(),
    })
}
