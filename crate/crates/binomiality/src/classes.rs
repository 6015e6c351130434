//! The quotient k[x]/<B> for a set B of homogeneous binomials, represented
//! degree by degree as monomial equivalence classes with scale factors.
//! Classes are found by breadth-first search on the graph whose edges are the
//! monomial multiples of the binomials; every scale assignment carries a
//! replayable derivation (an explicit membership certificate).

use crate::poly::{monomials_of_degree, Context, Monomial, MonomialOrder, Polynomial};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("generator is not a binomial")]
    NotBinomial,
    #[error("generator is not homogeneous")]
    Inhomogeneous,
    #[error("zero generator")]
    ZeroGenerator,
    #[error("polynomial degree does not match an enumerated degree")]
    DegreeNotEnumerated,
}

/// A monic binomial `lead - λ·tail` (or a pure monomial when `tail` is
/// absent), with `lead` greater than `tail` in the monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedBinomial {
    pub lead: Monomial,
    pub tail: Option<(Monomial, Scalar)>,
}

impl NormalizedBinomial {
    /// Normalize a binomial generator.  Returns the normalized form together
    /// with the scalar `s` such that `normalized = s · input`.
    pub fn from_polynomial(
        p: &Polynomial,
        order: MonomialOrder,
    ) -> Result<(Self, Scalar), QuotientError> {
        if p.is_zero() {
            return Err(QuotientError::ZeroGenerator);
        }
        if !p.is_binomial() {
            return Err(QuotientError::NotBinomial);
        }
        if !p.is_homogeneous() {
            return Err(QuotientError::Inhomogeneous);
        }
        let (lead, a) = p.leading_term(order).expect("nonzero");
        let s = a.inv().expect("leading coefficient is nonzero");
        let tail = p
            .terms()
            .find(|(m, _)| *m != lead)
            .map(|(m, b)| (m.clone(), b.mul(&s).neg()));
        Ok((
            NormalizedBinomial {
                lead: lead.clone(),
                tail,
            },
            s,
        ))
    }

    pub fn degree(&self) -> u32 {
        self.lead.total_degree()
    }

    /// `lead - λ·tail` as a polynomial.
    pub fn polynomial(&self) -> Polynomial {
        let mut p = Polynomial::monomial(self.lead.clone(), Scalar::one());
        if let Some((t, lam)) = &self.tail {
            p.add_term(t.clone(), lam.neg());
        }
        p
    }
}

/// A formal combination Σ c · w · b_i of monomial multiples of the normalized
/// binomials: an explicit ideal-membership certificate.
#[derive(Debug, Clone, Default)]
pub struct Derivation(pub Vec<(usize, Monomial, Scalar)>);

impl Derivation {
    pub fn zero() -> Self {
        Derivation(Vec::new())
    }

    pub fn single(bin: usize, mult: Monomial, c: Scalar) -> Self {
        Derivation(vec![(bin, mult, c)])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Derivation::zero();
        }
        Derivation(
            self.0
                .iter()
                .map(|(i, w, v)| (*i, w.clone(), v.mul(c)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<(usize, Monomial), Scalar> = BTreeMap::new();
        for (i, w, v) in self.0.iter().chain(&other.0) {
            let e = acc
                .entry((*i, w.clone()))
                .or_insert_with(Scalar::zero);
            *e = e.add(v);
        }
        Derivation(
            acc.into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|((i, w), v)| (i, w, v))
                .collect(),
        )
    }

    /// Expand the combination into an honest polynomial.
    pub fn to_polynomial(&self, binomials: &[NormalizedBinomial]) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (i, w, c) in &self.0 {
            acc = acc.add(&binomials[*i].polynomial().mul_monomial(w).scale(c));
        }
        acc
    }
}

/// Where a degree-d monomial lands in the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassRef {
    Zero,
    In { class: usize, scale: Scalar },
}

#[derive(Debug, Clone)]
pub struct ClassData {
    pub rep: Monomial,
    /// Members in descending monomial order.
    pub members: Vec<Monomial>,
}

/// All equivalence classes of one degree.  For every monomial `m` the stored
/// pair (σ, D) satisfies `m = σ·rep + D` as polynomials (σ = 0 and no rep for
/// Zero-class members), making every scale claim replayable.
#[derive(Debug, Clone)]
pub struct DegreeClasses {
    pub degree: u32,
    pub classes: Vec<ClassData>,
    pub map: HashMap<Monomial, ClassRef>,
    pub derivations: HashMap<Monomial, (Scalar, Derivation)>,
}

impl DegreeClasses {
    pub fn class_of(&self, m: &Monomial) -> &ClassRef {
        self.map.get(m).expect("monomial of the enumerated degree")
    }

    pub fn num_nonzero_classes(&self) -> usize {
        self.classes.len()
    }
}

/// A homogeneous vector over the nonzero classes of one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassVector {
    pub degree: u32,
    pub entries: BTreeMap<usize, Scalar>,
}

impl ClassVector {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// k[x]/<B> with per-degree class caches.
#[derive(Debug, Clone)]
pub struct QuotientStructure {
    nvars: usize,
    order: MonomialOrder,
    binomials: Vec<NormalizedBinomial>,
    /// normalized_i = input_scale_i · input_i
    input_scales: Vec<Scalar>,
    cache: BTreeMap<u32, DegreeClasses>,
}

impl QuotientStructure {
    pub fn new(
        nvars: usize,
        order: MonomialOrder,
        gens: &[Polynomial],
    ) -> Result<Self, QuotientError> {
        let mut q = QuotientStructure {
            nvars,
            order,
            binomials: Vec::new(),
            input_scales: Vec::new(),
            cache: BTreeMap::new(),
        };
        q.add_binomials(gens)?;
        Ok(q)
    }

    /// Extend B; all cached degrees are invalidated.
    pub fn add_binomials(&mut self, gens: &[Polynomial]) -> Result<(), QuotientError> {
        for g in gens {
            let (nb, s) = NormalizedBinomial::from_polynomial(g, self.order)?;
            self.binomials.push(nb);
            self.input_scales.push(s);
        }
        self.cache.clear();
        Ok(())
    }

    pub fn binomials(&self) -> &[NormalizedBinomial] {
        &self.binomials
    }

    /// The scalar `s` with `binomials()[i].polynomial() = s · input_i`.
    pub fn input_scale(&self, i: usize) -> &Scalar {
        &self.input_scales[i]
    }

    pub fn num_binomials(&self) -> usize {
        self.binomials.len()
    }

    pub fn enumerate_classes(&mut self, d: u32) -> &DegreeClasses {
        if !self.cache.contains_key(&d) {
            let dc = enumerate(self.nvars, self.order, &self.binomials, d);
            debug_assert!(verify_degree_classes(&dc, &self.binomials));
            self.cache.insert(d, dc);
        }
        &self.cache[&d]
    }

    /// Image of a homogeneous polynomial in the quotient, plus the remainder
    /// derivation R with `p = Σ γ_c·rep_c + R`.
    pub fn reduce_to_classes(
        &mut self,
        p: &Polynomial,
    ) -> Result<(ClassVector, Derivation), QuotientError> {
        if !p.is_homogeneous() {
            return Err(QuotientError::Inhomogeneous);
        }
        let d = p.degree().unwrap_or(0);
        let terms: Vec<(Monomial, Scalar)> = p
            .terms()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let dc = self.enumerate_classes(d);
        let mut entries: BTreeMap<usize, Scalar> = BTreeMap::new();
        let mut rem = Derivation::zero();
        for (m, a) in &terms {
            let (sigma, deriv) = &dc.derivations[m];
            rem = rem.add(&deriv.scale(a));
            if let ClassRef::In { class, .. } = dc.class_of(m) {
                debug_assert!(!sigma.is_zero());
                let e = entries.entry(*class).or_insert_with(Scalar::zero);
                *e = e.add(&a.mul(sigma));
            }
        }
        entries.retain(|_, v| !v.is_zero());
        Ok((ClassVector { degree: d, entries }, rem))
    }

    /// Preimage of a class vector with at most two entries, built from the
    /// class representatives.
    pub fn lift_class_binomial(&mut self, v: &ClassVector) -> Polynomial {
        assert!(v.entries.len() <= 2, "lift expects at most two entries");
        let dc = self.enumerate_classes(v.degree);
        let mut p = Polynomial::zero();
        for (class, c) in &v.entries {
            p.add_term(dc.classes[*class].rep.clone(), c.clone());
        }
        p
    }

    /// `class <id>: rep=<monomial> members={m:scale,…}` lines plus a `ZERO`
    /// section for the annihilated monomials.
    pub fn dump(&mut self, d: u32, ctx: &Context) -> String {
        let order = self.order;
        let dc = self.enumerate_classes(d);
        let mut out = String::new();
        for (id, data) in dc.classes.iter().enumerate() {
            let members: Vec<String> = data
                .members
                .iter()
                .map(|m| {
                    let scale = match dc.map[m] {
                        ClassRef::In { ref scale, .. } => scale.to_text(&ctx.params),
                        ClassRef::Zero => unreachable!(),
                    };
                    format!("{}:{}", m.to_text(&ctx.vars), scale)
                })
                .collect();
            out.push_str(&format!(
                "class {}: rep={} members={{{}}}\n",
                id,
                data.rep.to_text(&ctx.vars),
                members.join(", ")
            ));
        }
        let mut zero: Vec<&Monomial> = dc
            .map
            .iter()
            .filter(|(_, r)| **r == ClassRef::Zero)
            .map(|(m, _)| m)
            .collect();
        zero.sort_by(|a, b| order.cmp(b, a));
        let zs: Vec<String> = zero.iter().map(|m| m.to_text(&ctx.vars)).collect();
        out.push_str(&format!("ZERO: {{{}}}\n", zs.join(", ")));
        out
    }
}

struct Edge {
    other: usize,
    /// this = scale·other + coeff·mult·b_bin
    scale: Scalar,
    bin: usize,
    mult: Monomial,
    coeff: Scalar,
}

fn enumerate(
    nvars: usize,
    order: MonomialOrder,
    binomials: &[NormalizedBinomial],
    d: u32,
) -> DegreeClasses {
    let mons = monomials_of_degree(nvars, d);
    let index: HashMap<&Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = mons.len();
    let mut adj: Vec<Vec<Edge>> = (0..n).map(|_| Vec::new()).collect();
    // Direct annihilations from pure-monomial generators.
    let mut annihilated: Vec<Option<Derivation>> = vec![None; n];

    for (bi, nb) in binomials.iter().enumerate() {
        let dl = nb.degree();
        if dl > d {
            continue;
        }
        for w in monomials_of_degree(nvars, d - dl) {
            let u = index[&w.mul(&nb.lead)];
            match &nb.tail {
                None => {
                    // w·lead = w·b
                    if annihilated[u].is_none() {
                        annihilated[u] = Some(Derivation::single(bi, w.clone(), Scalar::one()));
                    }
                }
                Some((t, lam)) => {
                    let v = index[&w.mul(t)];
                    debug_assert!({
                        // Edge soundness: u - λ·v is literally w·b.
                        let lhs = Polynomial::monomial(mons[u].clone(), Scalar::one())
                            .add(&Polynomial::monomial(mons[v].clone(), lam.neg()));
                        lhs == nb.polynomial().mul_monomial(&w)
                    });
                    let lam_inv = lam.inv().expect("λ ≠ 0");
                    adj[u].push(Edge {
                        other: v,
                        scale: lam.clone(),
                        bin: bi,
                        mult: w.clone(),
                        coeff: Scalar::one(),
                    });
                    adj[v].push(Edge {
                        other: u,
                        scale: lam_inv.clone(),
                        bin: bi,
                        mult: w.clone(),
                        coeff: lam_inv.neg(),
                    });
                }
            }
        }
    }

    let mut visited = vec![false; n];
    let mut classes: Vec<ClassData> = Vec::new();
    let mut map: HashMap<Monomial, ClassRef> = HashMap::new();
    let mut derivations: HashMap<Monomial, (Scalar, Derivation)> = HashMap::new();

    for start in 0..n {
        if visited[start] {
            continue;
        }
        // BFS: node = σ·base + D relative to the start node.
        let mut comp: Vec<usize> = Vec::new();
        let mut sigma: HashMap<usize, Scalar> = HashMap::new();
        let mut deriv: HashMap<usize, Derivation> = HashMap::new();
        sigma.insert(start, Scalar::one());
        deriv.insert(start, Derivation::zero());
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        // If set: base = this derivation (the component is annihilated).
        let mut base_zero: Option<Derivation> = None;
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for e in &adj[u] {
                let v = e.other;
                // u = e.scale·v + e.coeff·(mult·b): solve for v.
                let s_inv = e.scale.inv().expect("edge weights are nonzero");
                let sv = sigma[&u].mul(&s_inv);
                let dv = deriv[&u]
                    .add(&Derivation::single(e.bin, e.mult.clone(), e.coeff.neg()))
                    .scale(&s_inv);
                if !visited[v] {
                    visited[v] = true;
                    sigma.insert(v, sv);
                    deriv.insert(v, dv);
                    queue.push_back(v);
                } else if base_zero.is_none() && !sigma[&v].equal(&sv) {
                    // Scale conflict: (σ_v − σ'_v)·base = D'_v − D_v, so the
                    // whole component collapses to zero.
                    let diff = sigma[&v].sub(&sv);
                    let inv = diff.inv().expect("scales differ");
                    base_zero = Some(dv.add(&deriv[&v].scale(&Scalar::one().neg())).scale(&inv));
                }
            }
        }
        if base_zero.is_none() {
            for &u in &comp {
                if let Some(a) = &annihilated[u] {
                    // σ_u·base + D_u = A_u  =>  base = σ_u⁻¹·(A_u − D_u).
                    let inv = sigma[&u].inv().expect("scales are nonzero");
                    base_zero = Some(a.add(&deriv[&u].scale(&Scalar::one().neg())).scale(&inv));
                    break;
                }
            }
        }

        if let Some(base) = base_zero {
            for &u in &comp {
                let dm = deriv[&u].add(&base.scale(&sigma[&u]));
                map.insert(mons[u].clone(), ClassRef::Zero);
                derivations.insert(mons[u].clone(), (Scalar::zero(), dm));
            }
        } else {
            // Rebase onto the greatest monomial of the component.
            let rep = *comp
                .iter()
                .max_by(|a, b| order.cmp(&mons[**a], &mons[**b]))
                .unwrap();
            let sr_inv = sigma[&rep].inv().expect("scales are nonzero");
            let id = classes.len();
            let mut members = comp.clone();
            members.sort_by(|a, b| order.cmp(&mons[*b], &mons[*a]));
            classes.push(ClassData {
                rep: mons[rep].clone(),
                members: members.iter().map(|&u| mons[u].clone()).collect(),
            });
            for &u in &comp {
                let s = sigma[&u].mul(&sr_inv);
                // m = σ_m·base + D_m and rep = σ_r·base + D_r give
                // m = (σ_m/σ_r)·rep + D_m − (σ_m/σ_r)·D_r.
                let dm = deriv[&u].add(&deriv[&rep].scale(&s.neg()));
                map.insert(mons[u].clone(), ClassRef::In { class: id, scale: s.clone() });
                derivations.insert(mons[u].clone(), (s, dm));
            }
        }
    }

    // Deterministic ids: classes in descending order of representative.
    let mut perm: Vec<usize> = (0..classes.len()).collect();
    perm.sort_by(|a, b| order.cmp(&classes[*b].rep, &classes[*a].rep));
    let inv_perm: HashMap<usize, usize> = perm.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let classes: Vec<ClassData> = perm.iter().map(|&old| classes[old].clone()).collect();
    for r in map.values_mut() {
        if let ClassRef::In { class, .. } = r {
            *class = inv_perm[class];
        }
    }

    DegreeClasses {
        degree: d,
        classes,
        map,
        derivations,
    }
}

/// Replay every stored derivation: `m = σ·rep + D` must hold literally.
pub fn verify_degree_classes(dc: &DegreeClasses, binomials: &[NormalizedBinomial]) -> bool {
    for (m, r) in &dc.map {
        let (sigma, deriv) = &dc.derivations[m];
        let mut expect = deriv.to_polynomial(binomials);
        match r {
            ClassRef::Zero => {
                if !sigma.is_zero() {
                    return false;
                }
            }
            ClassRef::In { class, scale } => {
                if !sigma.equal(scale) || sigma.is_zero() {
                    return false;
                }
                expect = expect.add(&Polynomial::monomial(
                    dc.classes[*class].rep.clone(),
                    sigma.clone(),
                ));
            }
        }
        if Polynomial::monomial(m.clone(), Scalar::one()) != expect {
            return false;
        }
    }
    // Representatives carry scale 1.
    for data in &dc.classes {
        match &dc.map[&data.rep] {
            ClassRef::In { scale, .. } if scale.is_one() => {}
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::Context;

    fn poly(s: &str, ctx: &Context) -> Polynomial {
        parse_polynomial(s, ctx).unwrap()
    }

    fn quotient(gens: &[&str], ctx: &Context) -> QuotientStructure {
        let gens: Vec<Polynomial> = gens.iter().map(|g| poly(g, ctx)).collect();
        QuotientStructure::new(ctx.nvars(), ctx.order, &gens).unwrap()
    }

    fn mono(s: &str, ctx: &Context) -> Monomial {
        let p = poly(s, ctx);
        assert!(p.is_monomial());
        let m = p.terms().next().unwrap().0.clone();
        m
    }

    #[test]
    fn two_classes_modulo_difference_of_squares_degree_three() {
        // x³ ~ xy² and x²y ~ y³, all scales 1.
        let ctx = Context::rational(&["x", "y"]);
        let mut q = quotient(&["x^2 - y^2"], &ctx);
        let dc = q.enumerate_classes(3);
        assert_eq!(dc.classes.len(), 2);
        assert_eq!(dc.classes[0].rep, mono("x^3", &ctx));
        assert_eq!(dc.classes[0].members, vec![mono("x^3", &ctx), mono("x*y^2", &ctx)]);
        assert_eq!(dc.classes[1].rep, mono("x^2*y", &ctx));
        assert_eq!(dc.classes[1].members, vec![mono("x^2*y", &ctx), mono("y^3", &ctx)]);
        for m in ["x^3", "x*y^2", "x^2*y", "y^3"] {
            match dc.class_of(&mono(m, &ctx)) {
                ClassRef::In { scale, .. } => assert!(scale.is_one()),
                ClassRef::Zero => panic!("unexpected zero class"),
            }
        }
    }

    #[test]
    fn empty_binomial_set_gives_singletons() {
        let ctx = Context::rational(&["x", "y", "z"]);
        let mut q = quotient(&[], &ctx);
        let dc = q.enumerate_classes(2).clone();
        let dc = &dc;
        assert_eq!(dc.classes.len(), 6);
        for c in &dc.classes {
            assert_eq!(c.members, vec![c.rep.clone()]);
        }
    }

    #[test]
    fn scales_modulo_x_minus_2y() {
        let ctx = Context::rational(&["x", "y"]);
        let mut q = quotient(&["x - 2*y"], &ctx);
        // d = 1: one class {x, y} with x the representative and y ≡ x/2.
        let dc = q.enumerate_classes(1).clone();
        let dc = &dc;
        assert_eq!(dc.classes.len(), 1);
        assert_eq!(dc.classes[0].rep, mono("x", &ctx));
        match dc.class_of(&mono("y", &ctx)) {
            ClassRef::In { scale, .. } => assert!(scale.equal(&Scalar::from_frac(1, 2))),
            _ => panic!(),
        }
        // d = 2: one class {x², xy, y²}; relative to x² the scales are
        // 1, 1/2, 1/4 (equivalently 4, 2, 1 relative to y²).  The cofactor
        // identities x² − 4y² = (x+2y)(x−2y) and xy − 2y² = y(x−2y) are
        // exactly what the stored derivations replay to.
        let dc = q.enumerate_classes(2).clone();
        let dc = &dc;
        assert_eq!(dc.classes.len(), 1);
        assert_eq!(dc.classes[0].rep, mono("x^2", &ctx));
        let expect = [("x^2", (1, 1)), ("x*y", (1, 2)), ("y^2", (1, 4))];
        for (m, (n, d)) in expect {
            match dc.class_of(&mono(m, &ctx)) {
                ClassRef::In { scale, .. } => assert!(scale.equal(&Scalar::from_frac(n, d))),
                _ => panic!(),
            }
        }
        assert!(verify_degree_classes(dc, q.binomials()));
    }

    #[test]
    fn reduce_example_gives_two_one_vector() {
        // x³ + xy² + y³ mod {x²−y²} → 2·[x³] + 1·[x²y].
        let ctx = Context::rational(&["x", "y"]);
        let mut q = quotient(&["x^2 - y^2"], &ctx);
        let (v, rem) = q.reduce_to_classes(&poly("x^3 + x*y^2 + y^3", &ctx)).unwrap();
        assert_eq!(v.degree, 3);
        let entries: Vec<(usize, Scalar)> = v.entries.into_iter().collect();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].0, 0);
        assert!(entries[0].1.equal(&Scalar::from_int(2)));
        assert_eq!(entries[1].0, 1);
        assert!(entries[1].1.equal(&Scalar::one()));
        // Remainder replays: p = 2·x³ + 1·x²y + rem.
        let p = poly("x^3 + x*y^2 + y^3", &ctx);
        let lifted = poly("2*x^3 + x^2*y", &ctx);
        assert_eq!(p, lifted.add(&rem.to_polynomial(q.binomials())));
    }

    #[test]
    fn generators_reduce_to_zero() {
        let ctx = Context::rational(&["x", "y"]);
        let mut q = quotient(&["x^2 - y^2"], &ctx);
        let (v, rem) = q.reduce_to_classes(&poly("x^2 - y^2", &ctx)).unwrap();
        assert!(v.is_zero());
        assert_eq!(rem.to_polynomial(q.binomials()), poly("x^2 - y^2", &ctx));
    }

    #[test]
    fn reduce_sum_of_squares_modulo_x_minus_y() {
        // x²+y²+z² mod {x−y} → 2·[x²] + 1·[z²].
        let ctx = Context::rational(&["x", "y", "z"]);
        let mut q = quotient(&["x - y"], &ctx);
        let (v, _) = q.reduce_to_classes(&poly("x^2 + y^2 + z^2", &ctx)).unwrap();
        assert_eq!(v.entries.len(), 2);
        let lifted = q.lift_class_binomial(&v);
        assert_eq!(lifted, poly("2*x^2 + z^2", &ctx));
    }

    #[test]
    fn lift_examples() {
        let ctx = Context::rational(&["x", "y"]);
        let mut q = quotient(&["x^2 - y^2"], &ctx);
        let v = ClassVector {
            degree: 3,
            entries: BTreeMap::from([(0, Scalar::from_int(2)), (1, Scalar::one())]),
        };
        assert_eq!(q.lift_class_binomial(&v), poly("2*x^3 + x^2*y", &ctx));
        let single = ClassVector {
            degree: 3,
            entries: BTreeMap::from([(1, Scalar::from_int(5))]),
        };
        assert_eq!(q.lift_class_binomial(&single), poly("5*x^2*y", &ctx));
    }

    #[test]
    fn scale_conflict_collapses_component() {
        // x ≡ y and x ≡ 2y force y ≡ 0, hence the whole class is zero; the
        // replayed certificate is y = (x − y) − (x − 2y).
        let ctx = Context::rational(&["x", "y"]);
        let mut q = quotient(&["x - y", "x - 2*y"], &ctx);
        let dc = q.enumerate_classes(1).clone();
        let dc = &dc;
        assert_eq!(dc.classes.len(), 0);
        for m in ["x", "y"] {
            assert_eq!(dc.class_of(&mono(m, &ctx)), &ClassRef::Zero);
            let (_, deriv) = &dc.derivations[&mono(m, &ctx)];
            assert_eq!(
                deriv.to_polynomial(q.binomials()),
                poly(m, &ctx)
            );
        }
    }

    #[test]
    fn pure_monomial_annihilates_component() {
        // Modulo {x², x−y} every degree-2 monomial dies; in particular
        // y² = x² − (x+y)(x−y) is in the ideal.
        let ctx = Context::rational(&["x", "y"]);
        let mut q = quotient(&["x^2", "x - y"], &ctx);
        let dc = q.enumerate_classes(2).clone();
        let dc = &dc;
        assert_eq!(dc.classes.len(), 0);
        for m in ["x^2", "x*y", "y^2"] {
            assert_eq!(dc.class_of(&mono(m, &ctx)), &ClassRef::Zero);
            let (_, deriv) = &dc.derivations[&mono(m, &ctx)];
            assert_eq!(deriv.to_polynomial(q.binomials()), poly(m, &ctx));
        }
    }

    #[test]
    fn determinism_of_dump() {
        let ctx = Context::rational(&["x", "y", "z"]);
        let mut q1 = quotient(&["x - y", "z^2"], &ctx);
        let mut q2 = quotient(&["x - y", "z^2"], &ctx);
        assert_eq!(q1.dump(2, &ctx), q2.dump(2, &ctx));
        let d = q1.dump(2, &ctx);
        assert!(d.contains("class 0: rep=x^2"));
        assert!(d.contains("ZERO:"));
    }

    #[test]
    fn rejects_bad_generators() {
        let ctx = Context::rational(&["x", "y", "z"]);
        let bad = poly("x - y^2", &ctx);
        assert_eq!(
            QuotientStructure::new(3, ctx.order, &[bad]).unwrap_err(),
            QuotientError::Inhomogeneous
        );
        let tri = poly("x + y + z", &ctx);
        assert_eq!(
            QuotientStructure::new(3, ctx.order, &[tri]).unwrap_err(),
            QuotientError::NotBinomial
        );
        let mut q = quotient(&["x - y"], &ctx);
        assert_eq!(
            q.reduce_to_classes(&poly("x + y^2", &ctx)).unwrap_err(),
            QuotientError::Inhomogeneous
        );
    }

    #[test]
    fn nonzero_class_count_matches_known_dimensions() {
        // dim of degree-3 slice of k[x,y]/<x²−y²> is 2; of k[x,y]/<x−2y> is 1.
        let ctx = Context::rational(&["x", "y"]);
        let mut q = quotient(&["x^2 - y^2"], &ctx);
        assert_eq!(q.enumerate_classes(3).num_nonzero_classes(), 2);
        let mut q = quotient(&["x - 2*y"], &ctx);
        assert_eq!(q.enumerate_classes(2).num_nonzero_classes(), 1);
    }
}
