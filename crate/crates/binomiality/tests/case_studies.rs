//! The two mass-action case studies: a 9-species network whose steady-state
//! ideal is binomial after term replacements, and the 29-species ERK network
//! that simplifies to binomials plus two trinomials.

use binomiality::parse::{parse_polynomial, parse_system};
use binomiality::simplify::{
    prune_certified, run_recipe, substitution_search, PipelineVerdict, RecipeOptions,
};
use binomiality::{PolySystem, Polynomial};

fn fixture(name: &str) -> PolySystem {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let src = std::fs::read_to_string(&path).unwrap();
    parse_system(&src).unwrap()
}

fn expect_scaled(sys: &PolySystem, text: &str) -> bool {
    let p = parse_polynomial(text, &sys.ctx).unwrap();
    sys.gens.iter().any(|g| g.scalar_multiple_of(&p))
}

#[test]
fn shinar_recipe_reaches_the_seven_binomials() {
    let s = fixture("shinar.sys");
    let r = run_recipe(&s, &RecipeOptions::default());
    for st in &r.stages {
        eprintln!("stage {}: {}", st.stage, st.outcome);
    }
    for g in &r.system.gens {
        eprintln!("gen: {}", g.to_text(&r.system.ctx));
    }
    assert_eq!(r.verdict, PipelineVerdict::Binomial);
    assert_eq!(r.system.gens.len(), 7);
    assert!(r.system.gens.iter().all(Polynomial::is_binomial));
    let expected = [
        "-k12*x1 + k21*x2",
        "-k34*x3 + k67*x6",
        "k23*x2 - (k32 + k34)*x3",
        "k56*x4*x5 - (k65 + k67)*x6",
        "k89*x3*x7 - (k910 + k98)*x8",
        "k1112*x1*x7 - (k1211 + k1213)*x9",
    ];
    for e in expected {
        assert!(expect_scaled(&r.system, e), "missing generator {e}");
    }
    // The seventh generator couples x6 with x2*x7.
    let f5pp = parse_polynomial(
        "-k67*k12*(k1211 + k1213)*(k32 + k34)*(k910 + k98)*x6 \
         + (k1112*k1213*k21*(k32 + k34)*(k910 + k98) \
         + k23*k89*k910*k12*(k1211 + k1213))*x2*x7",
        &s.ctx,
    )
    .unwrap();
    assert!(
        r.system.gens.iter().any(|g| g.scalar_multiple_of(&f5pp)),
        "missing the x6/x2*x7 generator"
    );
    assert!(r
        .certificate
        .expect("binomial verdicts carry certificates")
        .verify(&s.gens, &r.system.gens));
}

#[test]
fn erk_prune_and_search_reach_binomials_plus_trinomials() {
    let s = fixture("erk.sys");
    let (pruned, cert, relations) = prune_certified(&s);
    assert!(cert.verify(&s.gens, &pruned.gens));
    assert_eq!(relations, 7, "seven conservation relations");
    let r = substitution_search(&pruned, 8, 16);
    for st in &r.stages {
        eprintln!("stage {}: {}", st.stage, st.outcome);
    }
    for g in &r.system.gens {
        eprintln!(
            "{} {}",
            if g.is_binomial() { "bin:   " } else { "nonbin:" },
            g.to_text(&r.system.ctx)
        );
    }
    let new_binomials = [
        // f1': x1*x2 against x4*x5
        "-k1*k3*(k5 + k6)*x1*x2 + k4*k6*(k2 + k3)*x4*x5",
        // f7': x4*x7 against x5*x9
        "-k7*k9*(k17 + k18)*x4*x7 + k16*k18*(k8 + k9)*x5*x9",
        // f11': x11*x5 against x4*x9
        "-k13*k15*(k11 + k12)*x11*x5 + k10*k12*(k14 + k15)*x4*x9",
        // f26': x18*x4 against x26*x5
        "k37*k39*(k41 + k42)*x18*x4 - k40*k42*(k38 + k39)*x26*x5",
        // f28': x19 against x18*x28
        "k46*(k44 + k45)*x19 - k43*k45*x18*x28",
    ];
    for e in new_binomials {
        assert!(expect_scaled(&r.system, e), "missing binomial {e}");
    }
    let nonbin: Vec<&Polynomial> = r.non_binomial_part();
    assert!(
        nonbin.len() <= 2,
        "expected at most two non-binomial generators, got {}",
        nonbin.len()
    );
    assert!(nonbin.iter().all(|g| g.num_terms() <= 3));
    assert!(r
        .certificate
        .expect("search reports carry certificates")
        .verify(&pruned.gens, &r.system.gens));
}
