mod common;

use common::*;
use toricbundle::bundles::{f_psi, row_is_tropical, Diagram};
use toricbundle::coxrees::*;
use toricbundle::exactalg::rat;
use toricbundle::fans::CartierData;
use toricbundle::polyring::{buchberger, normal_form, Polynomial, WeightOrder};

// Generators of the extended P1xP1 ideal and the two extra members of F as
// printed, with the first generator's X1 read as X2, the Y1*Z1 of the sixth
// read as Y1*Z2 (both forced by the grading), and Z1, Z2 standing for
// -(b3+b4), -(b1+b4). The fixture's extra columns are b3+b4, b1+b4; the
// extension adjoins b3+b4 and b2+b3 = -(b1+b4).
const EXTENDED_PRINTED: [&str; 5] = [
    "X2*X3*Y3 + X4^2*Y4 + X1*Z1",
    "X1*X2*Y2 + X3^2*Y3 - X4*Z2",
    "X1*X4*Y1 + X2^2*Y2 - X3*Z1",
    "X3*X4*Y4 + X1^2*Y1 + X2*Z2",
    "X1*X3*Y1*Y3 - X2*X4*Y2*Y4 - Z1*Z2",
];
const F_EXTRA_PRINTED: [&str; 2] = [
    "X2^3*Y2^2 + X4^2*Y1*Z2 - X2*X3*Y2*Z1 - X3^2*X4*Y1*Y3",
    "X3^3*Y3^2 - X1^2*Y2*Z1 - X3*X4*Y3*Z2 - X1*X4^2*Y2*Y4",
];

fn printed(ring: &toricbundle::polyring::RingRef, texts: &[&str], flip: &[&str]) -> Vec<Polynomial> {
    let flipped: Vec<String> = texts.iter().map(|t| flip.iter().fold(t.to_string(), |t, z| t.replace(z, &format!("(-{z})")))).collect();
    let refs: Vec<&str> = flipped.iter().map(|s| s.as_str()).collect();
    polys(ring, &refs)
}

fn x_one(gens: &[Polynomial], rees: &ReesRing, rows: &[usize]) -> Vec<Polynomial> {
    gens.iter()
        .map(|g| rows.iter().fold(g.clone(), |acc, &i| acc.set_var(rees.x(i), &rat(1))))
        .filter(|g| !g.is_zero())
        .collect()
}

#[test]
fn p2_hypersurface_presentation() {
    let d = fixture("p2_hypersurface.json");
    let ib = build_ib(&d, &budget()).unwrap();
    let expect = polys(
        ib.ring(),
        &["Y1*X1^4 + Y2*X2^4 + Y3*X3^4 + Y4*X1^3*X2^2*X3 + Y5*X1^2*X2*X3^3 + Y6*X1*X2^3*X3^2"],
    );
    assert!(same_ideal(ib.generators(), &expect));
    assert!(hypersurface_check(&d).unwrap().is_empty());
    let rep = strong_khovanskii_verdict(&d, &VerdictOptions::default()).unwrap();
    assert_eq!(rep.verdict, MdsVerdict::MoriDream);
    assert!(rep.prime_checks.iter().all(|c| c.verdict.is_prime()));
}

#[test]
fn hypersurface_criterion_agrees_with_prime_checks() {
    for name in ALL_DIAGRAMS {
        let d = fixture(name);
        if !matches!(hypersurface_check(&d), Ok(ref bad) if bad.is_empty()) {
            continue;
        }
        let rep = strong_khovanskii_verdict(&d, &VerdictOptions::default()).unwrap();
        assert_eq!(rep.prime_checks.len(), d.n_rows(), "{name}");
        assert!(rep.prime_checks.iter().all(|c| c.verdict.is_prime()), "{name}");
    }
}

#[test]
fn p1p1_basis_is_not_strong() {
    let d = fixture("p1p1.json");
    let ib = build_ib(&d, &budget()).unwrap();
    let expect = polys(ib.ring(), &["Y1*X1^2*X4 + Y2*X1*X2^2 + Y3*X2*X3^2 + Y4*X3*X4^2"]);
    assert!(same_ideal(ib.generators(), &expect));
    assert_eq!(hypersurface_check(&d).unwrap(), vec![(1, 3), (2, 4)]);

    let rees = ib.rees();
    let y: Vec<usize> = (0..rees.n_y()).collect();
    let v = prime_check(ib.generators(), Some(rees.x(0)), &y, &budget()).unwrap();
    let PrimalityVerdict::NotPrime { certificate: NotPrimeCertificate::Factorization { factors } } = v else {
        panic!("expected a factorization, got {v:?}");
    };
    let x3 = Polynomial::var(ib.ring(), rees.x(2));
    assert!(factors.contains(&x3));
    let product = factors.iter().fold(Polynomial::one(ib.ring()), |a, f| a.mul(f));
    let spec = ib.specialize(0);
    assert!(same_ideal(&spec, &[product]));
}

#[test]
fn p1p1_extension_adjoins_two_linear_forms() {
    let d = fixture("p1p1.json");
    let ext = subduction_extend(&d, 4, 6, &budget()).unwrap();
    assert!(ext.terminated);
    let cols: Vec<Vec<i64>> = ext.adjoined.iter().map(|a| a.column.clone()).collect();
    assert_eq!(cols, vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
    assert!(ext.adjoined.iter().all(|a| a.degree == 1));

    let ed = ext.diagram.unwrap();
    let ib = build_ib(&ed, &budget()).unwrap();
    assert!(same_ideal(ib.generators(), &printed(ib.ring(), &EXTENDED_PRINTED, &["Z1"])));

    let fixture_ib = build_ib(&fixture("p1p1_extended.json"), &budget()).unwrap();
    let relabel: Vec<Polynomial> = fixture_ib
        .generators()
        .iter()
        .map(|g| {
            // the fixture's second element is -(b2+b3)
            let z2 = fixture_ib.ring().index_of("Z2").unwrap();
            let imgs: Vec<Polynomial> = (0..g.nvars())
                .map(|k| {
                    let v = Polynomial::var(ib.ring(), k);
                    if k == z2 { v.neg() } else { v }
                })
                .collect();
            g.evaluate(&imgs, ib.ring()).unwrap()
        })
        .collect();
    assert!(same_ideal(ib.generators(), &relabel));
}

#[test]
fn p1p1_verdict_goes_through_the_extension() {
    let d = fixture("p1p1.json");
    let rep = strong_khovanskii_verdict(&d, &VerdictOptions::default()).unwrap();
    assert_eq!(rep.strong_basis, Some(false));
    assert_eq!(rep.hypersurface_failing_pairs, Some(vec![(1, 3), (2, 4)]));
    assert!(rep.notes.iter().any(|n| n.contains("strong basis fails")));
    let ext = rep.extended.as_ref().expect("extension ran");
    assert_eq!(ext.strong_basis, Some(true));
    assert_eq!(rep.verdict, MdsVerdict::MoriDream);

    let no_ext = strong_khovanskii_verdict(&d, &VerdictOptions { extend: false, ..Default::default() }).unwrap();
    assert_eq!(no_ext.verdict, MdsVerdict::Inconclusive);
    assert!(no_ext.notes.iter().any(|n| n.contains("not attempted")));
}

#[test]
fn good_basis_of_the_extended_diagram() {
    let d = fixture("p1p1_extended.json");
    let ib = build_ib(&d, &budget()).unwrap();
    let gb = good_basis(&d, &budget()).unwrap();
    assert!(gb.verified);
    assert!(same_ideal(&gb.generators, ib.generators()));
    let canon = buchberger(ib.generators(), &WeightOrder::grevlex(ib.ring().nvars()), &budget()).unwrap();
    let mut f = printed(ib.ring(), &EXTENDED_PRINTED, &["Z1", "Z2"]);
    f.extend(printed(ib.ring(), &F_EXTRA_PRINTED, &["Z1", "Z2"]));
    for g in &f {
        assert!(normal_form(g, &canon).is_zero(), "{g} not in the ideal");
    }
    // the printed seven have the defining property too
    for i in 0..d.n_rows() {
        let w = ib.rees().s_weight(d.row(i));
        let forms: Vec<Polynomial> = f.iter().map(|g| g.initial_form(&w)).collect();
        let init = toricbundle::polyring::initial_ideal(ib.generators(), &w, &budget()).unwrap();
        assert!(same_ideal(&forms, init.generators()), "row {}", i + 1);
    }
}

fn diagram3(a: i64, b: i64, c: i64, dd: i64, e: i64, f: i64, l: [i64; 4]) -> Vec<Vec<i64>> {
    vec![
        vec![l[0] + 2 * a, l[0] + a, l[0], l[0], l[0] + a, l[0]],
        vec![l[1], l[1] + 2 * b, l[1] + b, l[1], l[1], l[1] + b],
        vec![l[2], l[2], l[2] + c + dd, l[2] + c, l[2] + c, l[2]],
        vec![l[3] + e, l[3], l[3], l[3] + e + f, l[3], l[3] + e],
    ]
}

#[test]
fn cone_cf_membership() {
    let d = fixture("p1p1_extended.json");
    let rees = ReesRing::for_diagram(&d);
    let mut f = printed(rees.ring(), &EXTENDED_PRINTED, &["Z1", "Z2"]);
    f.extend(printed(rees.ring(), &F_EXTRA_PRINTED, &["Z1", "Z2"]));
    let with = |m: Vec<Vec<i64>>| Diagram::new(d.fan().clone(), d.presentation().clone(), m).unwrap();

    assert!(cone_cf_member(&d, &f, &d).unwrap().member);
    let samples = [
        (1, 1, 1, 1, 1, 1, [0, 0, 0, 0]),
        (2, 1, 3, 1, 1, 2, [0, 0, 0, 0]),
        (1, 4, 1, 2, 3, 1, [1, -2, 0, 5]),
        (5, 5, 5, 5, 5, 5, [-3, 3, -3, 3]),
    ];
    for (a, b, c, dd, e, g, l) in samples {
        let r = cone_cf_member(&d, &f, &with(diagram3(a, b, c, dd, e, g, l))).unwrap();
        assert!(r.member, "{:?}", (a, b, c, dd, e, g, l));
    }
    let r = cone_cf_member(&d, &f, &with(diagram3(-1, 1, 1, 1, 1, 1, [0; 4]))).unwrap();
    assert!(!r.member);
    assert!(r.violations.iter().all(|&(_, row)| row == 1));
    let r = cone_cf_member(&d, &f, &with(diagram3(1, 1, 1, 1, 1, -2, [0; 4]))).unwrap();
    assert!(!r.member);
    assert!(r.violations.iter().all(|&(_, row)| row == 4));
}

#[test]
fn blowup_alteration_is_finitely_generated() {
    let d = fixture("p1p1_extended.json");
    let fan = fan_fixture("blowup_fan.json");
    let out = alter_diagram(&d, &Alteration::Append { row: vec![0, 0, 0, 0, 1, 1], fan }, &VerdictOptions::default()).unwrap();
    assert!(out.adaptedness.adapted);
    assert_eq!(out.verdict, AlterationVerdict::FinitelyGenerated);
    let mut expect = d.matrix().to_vec();
    expect.push(vec![0, 0, 0, 0, 1, 1]);
    assert_eq!(out.diagram.matrix(), &expect[..]);
}

#[test]
fn alteration_rejects_non_tropical_rows_and_deletes() {
    let d = fixture("p1p1_extended.json");
    let fan = fan_fixture("blowup_fan.json");
    let err = alter_diagram(&d, &Alteration::Append { row: vec![0, 1, 1, 1, 1, 1], fan }, &VerdictOptions::default()).unwrap_err();
    assert!(matches!(err, toricbundle::error::Error::NonTropicalRow { row: 5, .. }));

    let plane = toricbundle::fans::Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
    let p2 = fixture("p2_hypersurface.json");
    let out = alter_diagram(&p2, &Alteration::Delete { row: 2, fan: plane }, &VerdictOptions::default()).unwrap();
    assert_eq!(out.diagram.n_rows(), 2);
    assert!(out.adaptedness.adapted);
    assert_eq!(out.verdict, AlterationVerdict::FinitelyGenerated);
}

#[test]
fn gr24_strong_family() {
    let d = fixture("gr24.json");
    let (_, rel) = d.presentation().fiber();
    for i in 0..d.n_rows() {
        assert!(row_is_tropical(&d, &d.row_rational(i), &budget()).unwrap().is_ok(), "row {}", i + 1);
    }
    let w = d.row_rational(0);
    let mut weights: Vec<i64> = rel[0].terms().map(|(m, _)| m.weight(&w).to_integer().try_into().unwrap()).collect();
    weights.sort();
    assert_eq!(weights, vec![-6, -6, -4]);

    let ib = build_ib(&d, &budget()).unwrap();
    let expect = polys(ib.ring(), &["X1^2*Y12*Y34 - X5^2*Y13*Y24 + X3^2*Y14*Y23"]);
    assert!(same_ideal(ib.generators(), &expect));
    let local = x_one(ib.generators(), ib.rees(), &[2, 3, 4, 5]);
    let printed_local = polys(ib.ring(), &["X1^2*Y12*Y34 - Y13*Y24 + Y14*Y23"]);
    assert_eq!(local.len(), 1);
    assert_eq!(local[0].monic(), printed_local[0].monic());

    let rep = strong_khovanskii_verdict(&d, &VerdictOptions::default()).unwrap();
    assert_eq!(rep.strong_basis, Some(true));
    assert_eq!(rep.verdict, MdsVerdict::MoriDream);
}

#[test]
fn non_example_stage_two_and_verdict() {
    let d = fixture("non_example.json");
    let t = std::time::Instant::now();
    let st = stage_presentation(&d, 2, &budget()).unwrap();
    let expect = polys(st.ring(), &["Y5*X1 - Y2*X2 - Y3", "Y4*X1^2 - Y1*X2^2 - Y2"]);
    assert!(same_ideal(st.generators(), &expect));
    let rep = strong_khovanskii_verdict(&d, &VerdictOptions::default()).unwrap();
    assert_eq!(rep.verdict, MdsVerdict::Inconclusive);
    assert_eq!(rep.strong_basis, Some(false));
    assert!(t.elapsed().as_secs() < 60);
}

#[test]
fn iterated_rees_consistency() {
    for name in ["p1p1.json", "p1p1_extended.json", "non_example.json", "p2_hypersurface.json", "gr24.json"] {
        let d = fixture(name);
        for j in 0..d.n_rows() {
            let lo = stage_presentation(&d, j, &budget()).unwrap();
            let hi = stage_presentation(&d, j + 1, &budget()).unwrap();
            let cut = x_one(hi.generators(), hi.rees(), &[j]);
            assert!(same_ideal(&cut, lo.generators()), "{name} stage {j}");
        }
    }
}

#[test]
fn rees_ideal_specializes_to_fiber_and_is_homogeneous() {
    for name in ALL_DIAGRAMS {
        let d = fixture(name);
        let ib = build_ib(&d, &budget()).unwrap();
        let rees = ib.rees();
        let all: Vec<usize> = (0..d.n_rows()).collect();
        let fiber_part = x_one(ib.generators(), rees, &all);
        let (fring, fiber) = d.presentation().fiber();
        let map: Vec<usize> = (0..fring.nvars()).collect();
        let fiber: Vec<Polynomial> = fiber.iter().filter(|g| !g.is_zero()).map(|g| g.embed(ib.ring(), &map)).collect();
        assert!(same_ideal(&fiber_part, &fiber), "{name}");

        let gradings: Vec<Vec<i64>> = (0..d.n_rows())
            .map(|i| {
                let mut g: Vec<i64> = d.row(i).to_vec();
                g.extend((0..d.n_rows()).map(|k| if k == i { -1 } else { 0 }));
                g
            })
            .collect();
        for g in ib.generators() {
            assert!(g.multidegree(&gradings).is_some(), "{name}: {g} is not homogeneous");
        }
    }
}

#[test]
fn elimination_cross_check() {
    for name in ["p2_hypersurface.json", "p1p1.json", "sparse_rank2.json"] {
        let d = fixture(name);
        let a = build_ib(&d, &budget()).unwrap();
        let b = build_ib_by_elimination(&d, &budget()).unwrap();
        assert!(same_ideal(a.generators(), b.generators()), "{name}");
    }
}

#[test]
fn sufficient_criteria() {
    let sparse = sparse_check(&fixture("sparse_rank2.json")).expect("sparse");
    assert_eq!(sparse.twist, vec![0, 0, 0]);
    assert!(sparse_check(&fixture("p1p1.json")).is_none());
    assert!(sparse_check(&fixture("zero.json")).is_some());

    assert!(uniform_check(&fixture("uniform_p3.json")).unwrap());
    assert!(uniform_check(&fixture("p2_hypersurface.json")).unwrap());
    assert!(uniform_check(&fixture("p1p1.json")).is_err());
    assert!(!uniform_check(&fixture("zero.json")).unwrap());

    assert!(single_apartment_check(&fixture("zero.json"), &budget()).unwrap().is_some());
    assert!(single_apartment_check(&fixture("p1p1.json"), &budget()).unwrap().is_none());

    assert!(hypersurface_check(&fixture("non_example.json")).is_err());
}

#[test]
fn zero_and_uniform_fixtures_are_mori_dream() {
    for name in ["zero.json", "uniform_p3.json", "sparse_rank2.json"] {
        let rep = strong_khovanskii_verdict(&fixture(name), &VerdictOptions::default()).unwrap();
        assert_eq!(rep.verdict, MdsVerdict::MoriDream, "{name}");
        assert!(rep.criteria.iter().any(|c| c.certifies), "{name}");
    }
}

#[test]
fn non_adapted_diagram_is_inconclusive() {
    let rep = strong_khovanskii_verdict(&fixture("broken.json"), &VerdictOptions::default()).unwrap();
    assert!(!rep.adaptedness.adapted);
    assert_eq!(rep.verdict, MdsVerdict::Inconclusive);
    assert!(rep.presentation.is_none());
}

// For strong linear bases the degree-one part of every F_psi is spanned by
// the basis elements whose columns dominate psi.
#[test]
fn klyachko_spaces_are_spanned_by_basis_elements() {
    for name in ["p2_hypersurface.json", "p1p1_extended.json", "sparse_rank2.json", "uniform_p3.json"] {
        let d = fixture(name);
        let p = d.presentation().as_linear().unwrap().clone();
        let n = d.n_rows();
        let mut psi = vec![-1i64; n];
        loop {
            let f = f_psi(&d, &CartierData::new(d.fan(), psi.clone()).unwrap()).unwrap();
            let cols: Vec<usize> = (0..d.n_cols()).filter(|&j| (0..n).all(|i| d.row(i)[j] >= psi[i])).collect();
            assert_eq!(f, p.span_of(&cols), "{name} at {psi:?}");
            let mut k = 0;
            while k < n && psi[k] == 2 {
                psi[k] = -1;
                k += 1;
            }
            if k == n {
                break;
            }
            psi[k] += 1;
        }
    }
}
