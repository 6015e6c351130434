//! Test-support Buchberger implementation.  This module exists to
//! cross-validate the linear-algebra detector on desk-scale instances and is
//! deliberately unoptimized; an instance guard keeps it off anything large.

use crate::poly::{monomials_of_degree, Monomial, MonomialOrder, PolySystem, Polynomial};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GbError {
    #[error("instance guard exceeded: {0} (override only if you accept the cost)")]
    GuardExceeded(String),
}

/// Size limits for oracle calls.  The defaults cap what an unoptimized
/// Buchberger run can be trusted to finish quickly.
#[derive(Debug, Clone, Copy)]
pub struct GbGuard {
    pub max_vars: usize,
    pub max_gens: usize,
    pub max_degree: u32,
    pub enabled: bool,
}

impl Default for GbGuard {
    fn default() -> Self {
        GbGuard {
            max_vars: 6,
            max_gens: 10,
            max_degree: 4,
            enabled: true,
        }
    }
}

impl GbGuard {
    pub fn disabled() -> Self {
        GbGuard {
            enabled: false,
            ..Default::default()
        }
    }

    pub fn check(&self, sys: &PolySystem) -> Result<(), GbError> {
        if !self.enabled {
            return Ok(());
        }
        let nvars = sys.ctx.nvars();
        if nvars > self.max_vars {
            return Err(GbError::GuardExceeded(format!(
                "{nvars} variables > {}",
                self.max_vars
            )));
        }
        if sys.gens.len() > self.max_gens {
            return Err(GbError::GuardExceeded(format!(
                "{} generators > {}",
                sys.gens.len(),
                self.max_gens
            )));
        }
        let deg = sys.gens.iter().filter_map(|g| g.degree()).max().unwrap_or(0);
        if deg > self.max_degree {
            return Err(GbError::GuardExceeded(format!(
                "degree {deg} > {}",
                self.max_degree
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub elements: Vec<Polynomial>,
    pub order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn is_binomial(&self) -> bool {
        self.elements.iter().all(|g| g.is_binomial())
    }
}

/// Fully reduce `p` against `basis`: no term of the result is divisible by
/// any basis leading monomial.
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let mut rem = Polynomial::zero();
    let mut work = p.clone();
    'outer: while let Some((m, c)) = work.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        for g in basis {
            let (gl, gc) = g.leading_term(order).expect("basis elements are nonzero");
            if let Some(w) = gl.div(&m) {
                let factor = c.div(gc).expect("leading coefficients are nonzero");
                work = work.sub(&g.mul_monomial(&w).scale(&factor));
                continue 'outer;
            }
        }
        // Leading term irreducible: move it to the remainder.
        rem.add_term(m.clone(), c.clone());
        work = work.sub(&Polynomial::monomial(m, c));
    }
    rem
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (fl, fc) = f.leading_term(order).unwrap();
    let (gl, gc) = g.leading_term(order).unwrap();
    let l = fl.lcm(gl);
    let wf = fl.div(&l).unwrap();
    let wg = gl.div(&l).unwrap();
    f.mul_monomial(&wf)
        .scale(&fc.inv().unwrap())
        .sub(&g.mul_monomial(&wg).scale(&gc.inv().unwrap()))
}

/// Reduced Gröbner basis by plain Buchberger (normal pair selection, no
/// criteria beyond skipping zero reductions).
pub fn buchberger(
    sys: &PolySystem,
    order: MonomialOrder,
    guard: &GbGuard,
) -> Result<GroebnerBasis, GbError> {
    guard.check(sys)?;
    let mut basis: Vec<Polynomial> = sys.gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.first().copied() {
        pairs.remove(0);
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = normal_form(&s, &basis, order);
        if !r.is_zero() {
            let k = basis.len();
            for l in 0..k {
                pairs.push((l, k));
            }
            basis.push(r);
        }
    }
    // Minimalize: drop elements whose leading monomial is divisible by
    // another's.
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let li = basis[i].leading_term(order).unwrap().0.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lj = basis[j].leading_term(order).unwrap().0;
            if lj.divides(&li) && (lj != &li || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<Polynomial> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g)
        .collect();
    // Inter-reduce tails and normalize to leading coefficient 1.
    let mut reduced: Vec<Polynomial> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = normal_form(&minimal[i], &others, order);
        if !r.is_zero() {
            reduced.push(r.monic(order));
        }
    }
    reduced.sort_by(|a, b| {
        let la = a.leading_term(order).unwrap().0;
        let lb = b.leading_term(order).unwrap().0;
        order.cmp(lb, la)
    });
    debug_assert!(verify_groebner(&reduced, sys, order));
    Ok(GroebnerBasis {
        elements: reduced,
        order,
    })
}

/// Buchberger criterion plus containment of the inputs.
fn verify_groebner(basis: &[Polynomial], sys: &PolySystem, order: MonomialOrder) -> bool {
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j], order);
            if !normal_form(&s, basis, order).is_zero() {
                return false;
            }
        }
    }
    sys.gens
        .iter()
        .all(|g| normal_form(g, basis, order).is_zero())
}

/// Like [`normal_form`] but also returns the cofactors:
/// `p = Σ cofactor_i · basis[i] + remainder`.
pub fn normal_form_with_cofactors(
    p: &Polynomial,
    basis: &[Polynomial],
    order: MonomialOrder,
) -> (Polynomial, Vec<Polynomial>) {
    let mut rem = Polynomial::zero();
    let mut cof: Vec<Polynomial> = vec![Polynomial::zero(); basis.len()];
    let mut work = p.clone();
    'outer: while let Some((m, c)) = work.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        for (gi, g) in basis.iter().enumerate() {
            let (gl, gc) = g.leading_term(order).expect("basis elements are nonzero");
            if let Some(w) = gl.div(&m) {
                let factor = c.div(gc).expect("leading coefficients are nonzero");
                work = work.sub(&g.mul_monomial(&w).scale(&factor));
                cof[gi] = cof[gi].add(&Polynomial::monomial(w, factor));
                continue 'outer;
            }
        }
        rem.add_term(m.clone(), c.clone());
        work = work.sub(&Polynomial::monomial(m, c));
    }
    (rem, cof)
}

/// Buchberger with construction tracking: every reduced-basis element comes
/// with its expression over the inputs, and every input with its cofactors
/// over the basis — a full ideal-equality certificate.
pub fn buchberger_certified(
    sys: &PolySystem,
    order: MonomialOrder,
    guard: &GbGuard,
) -> Result<(GroebnerBasis, crate::certificate::Certificate), GbError> {
    use crate::certificate::{Certificate, LinComb};
    guard.check(sys)?;
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut reps: Vec<LinComb> = Vec::new(); // over inputs
    for (i, g) in sys.gens.iter().enumerate() {
        if !g.is_zero() {
            basis.push(g.clone());
            reps.push(LinComb::unit(i));
        }
    }
    let nvars = sys.ctx.nvars();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.first().copied() {
        pairs.remove(0);
        let (fl, fc) = basis[i].leading_term(order).unwrap();
        let (gl, gc) = basis[j].leading_term(order).unwrap();
        let l = fl.lcm(gl);
        let (wf, wg) = (fl.div(&l).unwrap(), gl.div(&l).unwrap());
        let (fci, gci) = (fc.inv().unwrap(), gc.inv().unwrap());
        let s = basis[i]
            .mul_monomial(&wf)
            .scale(&fci)
            .sub(&basis[j].mul_monomial(&wg).scale(&gci));
        let mut srep = reps[i]
            .mul_poly(&Polynomial::monomial(wf, fci))
            .add(&reps[j].mul_poly(&Polynomial::monomial(wg, gci.neg())));
        let (r, cof) = normal_form_with_cofactors(&s, &basis, order);
        if !r.is_zero() {
            for (gi, c) in cof.iter().enumerate() {
                if !c.is_zero() {
                    srep = srep.add(&reps[gi].mul_poly(&c.neg()));
                }
            }
            let k = basis.len();
            for l in 0..k {
                pairs.push((l, k));
            }
            basis.push(r);
            reps.push(srep);
        }
    }
    // Minimalize and inter-reduce exactly as in `buchberger`, carrying reps.
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let li = basis[i].leading_term(order).unwrap().0.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lj = basis[j].leading_term(order).unwrap().0;
            if lj.divides(&li) && (lj != &li || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<(Polynomial, LinComb)> = basis
        .into_iter()
        .zip(reps)
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|((g, r), _)| (g, r))
        .collect();
    let mut reduced: Vec<(Polynomial, LinComb)> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (g, _))| g.clone())
            .collect();
        let (r, cof) = normal_form_with_cofactors(&minimal[i].0, &others, order);
        if r.is_zero() {
            continue;
        }
        let mut rep = minimal[i].1.clone();
        let mut oi = 0;
        for (j, (_, orep)) in minimal.iter().enumerate() {
            if j == i {
                continue;
            }
            if !cof[oi].is_zero() {
                rep = rep.add(&orep.mul_poly(&cof[oi].neg()));
            }
            oi += 1;
        }
        let lc = r.leading_term(order).unwrap().1.clone();
        let inv = lc.inv().unwrap();
        reduced.push((r.monic(order), rep.scale(&inv)));
    }
    reduced.sort_by(|(a, _), (b, _)| {
        let la = a.leading_term(order).unwrap().0;
        let lb = b.leading_term(order).unwrap().0;
        order.cmp(lb, la)
    });
    let elements: Vec<Polynomial> = reduced.iter().map(|(g, _)| g.clone()).collect();
    let derived: Vec<LinComb> = reduced.into_iter().map(|(_, r)| r).collect();
    // Inputs over the basis via division.
    let originals: Vec<LinComb> = sys
        .gens
        .iter()
        .map(|g| {
            let (r, cof) = normal_form_with_cofactors(g, &elements, order);
            assert!(r.is_zero(), "input does not reduce to zero");
            let mut lc = LinComb::zero();
            for (k, c) in cof.into_iter().enumerate() {
                lc.add_term(k, c);
            }
            lc
        })
        .collect();
    let cert = Certificate { derived, originals };
    debug_assert!(cert.verify(&sys.gens, &elements));
    let _ = nvars;
    Ok((GroebnerBasis { elements, order }, cert))
}

/// The cited criterion: an ideal is binomial iff a reduced Gröbner basis
/// consists of polynomials with at most two terms.
pub fn is_binomial_ideal_oracle(sys: &PolySystem, guard: &GbGuard) -> Result<bool, GbError> {
    Ok(buchberger(sys, sys.ctx.order, guard)?.is_binomial())
}

/// Dimension of the degree-d slice of k[x]/<B> counted via standard
/// monomials of a Gröbner basis of the binomial ideal B.
pub fn quotient_dimension_oracle(
    sys: &PolySystem,
    d: u32,
    guard: &GbGuard,
) -> Result<usize, GbError> {
    let gb = buchberger(sys, sys.ctx.order, guard)?;
    let leads: Vec<Monomial> = gb
        .elements
        .iter()
        .map(|g| g.leading_term(gb.order).unwrap().0.clone())
        .collect();
    Ok(monomials_of_degree(sys.ctx.nvars(), d)
        .into_iter()
        .filter(|m| !leads.iter().any(|l| l.divides(m)))
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_polynomial, parse_system};

    fn sys(src: &str) -> PolySystem {
        parse_system(src).unwrap()
    }

    fn guard() -> GbGuard {
        GbGuard::default()
    }

    #[test]
    fn already_reduced_basis_is_unchanged() {
        let s = sys("vars: x y z w\nx - y\nz - w\n");
        let gb = buchberger(&s, s.ctx.order, &guard()).unwrap();
        assert_eq!(gb.elements, s.gens);
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let s = sys("vars: x y z\nx^2 + y^2 + z^2\n");
        let gb = buchberger(&s, s.ctx.order, &guard()).unwrap();
        assert_eq!(gb.elements, s.gens);
    }

    #[test]
    fn lex_elimination_example() {
        // S(xy−1, y²−1) = y·(xy−1)·(1/1) − x·(y²−1) = x − y under lex x>y;
        // the reduced basis is {x − y, y² − 1}.
        let s = sys("vars: x y\norder: lex\nx*y - 1\ny^2 - 1\n");
        let gb = buchberger(&s, MonomialOrder::Lex, &guard()).unwrap();
        let ctx = &s.ctx;
        assert_eq!(
            gb.elements,
            vec![
                parse_polynomial("x - y", ctx).unwrap(),
                parse_polynomial("y^2 - 1", ctx).unwrap(),
            ]
        );
        for g in &s.gens {
            assert!(normal_form(g, &gb.elements, MonomialOrder::Lex).is_zero());
        }
    }

    #[test]
    fn binomial_ideal_oracle_examples() {
        let s = sys("vars: x y z w\nx - y\nz - w\nx^2 - x*y + x*z - x*w\n");
        assert!(is_binomial_ideal_oracle(&s, &guard()).unwrap());
        let s = sys("vars: x y z\nx^2 + y^2 + z^2\n");
        assert!(!is_binomial_ideal_oracle(&s, &guard()).unwrap());
        let s = sys("vars: x\nx\n");
        assert!(is_binomial_ideal_oracle(&s, &guard()).unwrap());
    }

    #[test]
    fn quotient_dimension_examples() {
        let s = sys("vars: x y\nx^2 - y^2\n");
        assert_eq!(quotient_dimension_oracle(&s, 3, &guard()).unwrap(), 2);
        let empty = sys("vars: x y z\n");
        assert_eq!(quotient_dimension_oracle(&empty, 1, &guard()).unwrap(), 3);
        let s = sys("vars: x y\nx - 2*y\n");
        assert_eq!(quotient_dimension_oracle(&s, 2, &guard()).unwrap(), 1);
    }

    #[test]
    fn binomial_closure() {
        // Binomial input keeps the reduced basis binomial.
        for src in [
            "vars: x y z\nx*y - z^2\ny^2 - x*z\n",
            "vars: x y\nx^2 - y^2\nx^3 - y^3\n",
            "vars: x y z w\nx*y - z*w\nx*z - y*w\n",
        ] {
            let s = sys(src);
            let gb = buchberger(&s, s.ctx.order, &guard()).unwrap();
            assert!(gb.is_binomial(), "non-binomial basis for {src}");
        }
    }

    #[test]
    fn guard_refuses_large_instances() {
        let s = sys("vars: x y\nx^5 - y^5\n");
        assert!(matches!(
            buchberger(&s, s.ctx.order, &guard()),
            Err(GbError::GuardExceeded(_))
        ));
        assert!(buchberger(&s, s.ctx.order, &GbGuard::disabled()).is_ok());
    }

    #[test]
    fn certified_basis_matches_plain_and_verifies() {
        for src in [
            "vars: x y\norder: lex\nx*y - 1\ny^2 - 1\n",
            "vars: x y z w\nx - y\nz - w\nx^2 - x*y + x*z - x*w\n",
            "vars: x y z\nx - y\nx^2 + y^2 + z^2\n",
        ] {
            let s = sys(src);
            let plain = buchberger(&s, s.ctx.order, &guard()).unwrap();
            let (gb, cert) = buchberger_certified(&s, s.ctx.order, &guard()).unwrap();
            assert_eq!(gb.elements, plain.elements);
            assert!(cert.verify(&s.gens, &gb.elements));
        }
    }

    #[test]
    fn agreement_with_detector_on_fixtures() {
        use crate::detect::{detect_binomial_homogeneous, Verdict};
        for src in [
            "vars: x y z w\nx - y\nz - w\nx^2 - x*y + x*z - x*w\n",
            "vars: x y z\nx^2 + y^2 + z^2\n",
            "vars: x y z\nx - y\nx^2 + y^2 + z^2\n",
            "vars: x y\nx^2 - y^2\nx^3 - y^3\n",
        ] {
            let s = sys(src);
            let det = detect_binomial_homogeneous(&s).unwrap();
            let gb = is_binomial_ideal_oracle(&s, &guard()).unwrap();
            assert_eq!(det.verdict == Verdict::Yes, gb, "disagreement on {src}");
        }
    }
}
