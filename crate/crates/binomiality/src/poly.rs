//! Sparse multivariate polynomials over the exact scalar field, systems of
//! them, and the degree bookkeeping (homogenization, dehomogenization) the
//! detection pipeline relies on.

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use thiserror::Error;

/// Exponent vector of fixed length (the number of declared variables).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(idx: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self, when it divides.
    pub fn div(&self, other: &Self) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(
                other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Self) -> Self {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn to_text(&self, vars: &[String]) -> String {
        let mut factors = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 1 {
                factors.push(vars[i].clone());
            } else if e > 1 {
                factors.push(format!("{}^{}", vars[i], e));
            }
        }
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

/// Monomial orders.  The default is graded reverse lexicographic over the
/// declared variable list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    Grevlex,
    Grlex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::Grlex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| a.0.cmp(&b.0)),
            MonomialOrder::Grevlex => a.total_degree().cmp(&b.total_degree()).then_with(|| {
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    match y.cmp(x) {
                        Ordering::Equal => {}
                        other => return other,
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grevlex" => Some(MonomialOrder::Grevlex),
            "grlex" => Some(MonomialOrder::Grlex),
            "lex" => Some(MonomialOrder::Lex),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Grevlex => "grevlex",
            MonomialOrder::Grlex => "grlex",
            MonomialOrder::Lex => "lex",
        }
    }
}

/// Variable/parameter declarations shared by all polynomials of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub order: MonomialOrder,
}

impl Context {
    pub fn new(vars: Vec<String>, params: Vec<String>, order: MonomialOrder) -> Self {
        Context { vars, params, order }
    }

    pub fn rational(vars: &[&str]) -> Self {
        Context {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            params: Vec::new(),
            order: MonomialOrder::Grevlex,
        }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable name {0:?} already declared")]
    NameCollision(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("generator {0} is not homogeneous")]
    NotHomogeneous(usize),
}

/// Sparse polynomial: map from monomial to nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        Polynomial::monomial(Monomial::one(nvars), c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() <= 1
    }

    /// A binomial is a polynomial with at most two terms.
    pub fn is_binomial(&self) -> bool {
        self.terms.len() <= 2
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    /// Term-wise exponent addition: multiply by a monomial.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        r
    }

    /// Max total degree over terms, None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.total_degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Leading term under the given order.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Scalar)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp(a, b))
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("stored coefficients are nonzero");
                self.scale(&inv)
            }
        }
    }

    /// True if other == c * self for some nonzero scalar c.
    pub fn scalar_multiple_of(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() == other.is_zero();
        }
        if self.terms.len() != other.terms.len() {
            return false;
        }
        let mut ratio: Option<Scalar> = None;
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(&other.terms) {
            if ma != mb {
                return false;
            }
            let r = cb.div(ca).expect("nonzero");
            match &ratio {
                None => ratio = Some(r),
                Some(prev) => {
                    if !prev.equal(&r) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Append a variable with exponent 0 to every term (context extension).
    pub fn extend_vars(&self, extra: usize) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.extend(std::iter::repeat(0).take(extra));
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Homogenize to degree `target` using the variable at `hvar` (already in
    /// the exponent vector).
    pub fn homogenize_to(&self, hvar: usize, target: u32) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[hvar] += target - m.total_degree();
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Substitute 1 for the variable at index `var`, keeping the slot.
    pub fn substitute_one(&self, var: usize) -> Self {
        let mut r = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e[var] = 0;
            r.add_term(Monomial(e), c.clone());
        }
        r
    }

    /// Drop the variable slot at `var` (its exponent must be 0 everywhere).
    pub fn remove_var(&self, var: usize) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    debug_assert_eq!(m.0[var], 0);
                    let mut e = m.0.clone();
                    e.remove(var);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    pub fn to_text(&self, ctx: &Context) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut sorted: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        sorted.sort_by(|(a, _), (b, _)| ctx.order.cmp(b, a));
        let mut out = String::new();
        for (i, (m, c)) in sorted.iter().enumerate() {
            // Split a leading minus off plain rationals for readability.
            let (neg, mag) = match c {
                Scalar::Rat(r) if r < &num_rational::BigRational::from_integer(0.into()) => {
                    (true, c.neg())
                }
                _ => (false, (*c).clone()),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let ctext = mag.to_text(&ctx.params);
            let ctext = if mag.needs_parens(&ctx.params) {
                format!("({})", ctext)
            } else {
                ctext
            };
            if m.is_one() {
                out.push_str(&ctext);
            } else if mag.is_one() {
                out.push_str(&m.to_text(&ctx.vars));
            } else {
                out.push_str(&ctext);
                out.push('*');
                out.push_str(&m.to_text(&ctx.vars));
            }
        }
        out
    }
}

/// An ordered list of generators over a shared context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pub ctx: Context,
    pub gens: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(ctx: Context, gens: Vec<Polynomial>) -> Self {
        PolySystem { ctx, gens }
    }

    /// Drop zero generators.
    pub fn normalized(&self) -> Self {
        PolySystem {
            ctx: self.ctx.clone(),
            gens: self.gens.iter().filter(|g| !g.is_zero()).cloned().collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    /// Index of the first inhomogeneous generator, if any.
    pub fn first_inhomogeneous(&self) -> Option<usize> {
        self.gens.iter().position(|g| !g.is_homogeneous())
    }

    /// Homogenize each generator to its own max degree with a fresh variable.
    /// Already-homogeneous generators are unchanged (up to the extra slot).
    pub fn homogenize(&self, new_var: &str) -> Result<PolySystem, PolyError> {
        if self.ctx.vars.iter().any(|v| v == new_var)
            || self.ctx.params.iter().any(|p| p == new_var)
        {
            return Err(PolyError::NameCollision(new_var.to_string()));
        }
        let mut ctx = self.ctx.clone();
        ctx.vars.push(new_var.to_string());
        let hvar = ctx.vars.len() - 1;
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let ext = g.extend_vars(1);
                match ext.degree() {
                    None => ext,
                    Some(d) => ext.homogenize_to(hvar, d),
                }
            })
            .collect();
        Ok(PolySystem { ctx, gens })
    }

    /// Substitute 1 for `var` and remove it from the context.
    pub fn dehomogenize(&self, var: &str) -> Result<PolySystem, PolyError> {
        let idx = self
            .ctx
            .var_index(var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        let mut ctx = self.ctx.clone();
        ctx.vars.remove(idx);
        let gens = self
            .gens
            .iter()
            .map(|g| g.substitute_one(idx).remove_var(idx))
            .collect();
        Ok(PolySystem { ctx, gens })
    }

    /// Pick a homogenization variable name that does not collide.
    pub fn fresh_var_name(&self) -> String {
        for cand in ["x0", "h", "z0"] {
            if self.ctx.var_index(cand).is_none() && self.ctx.param_index(cand).is_none() {
                return cand.to_string();
            }
        }
        let mut i = 0;
        loop {
            let cand = format!("h{}", i);
            if self.ctx.var_index(&cand).is_none() && self.ctx.param_index(&cand).is_none() {
                return cand;
            }
            i += 1;
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("vars:");
        for v in &self.ctx.vars {
            out.push(' ');
            out.push_str(v);
        }
        out.push('\n');
        if !self.ctx.params.is_empty() {
            out.push_str("params:");
            for p in &self.ctx.params {
                out.push(' ');
                out.push_str(p);
            }
            out.push('\n');
        }
        for g in &self.gens {
            out.push_str(&g.to_text(&self.ctx));
            out.push('\n');
        }
        out
    }
}

/// Enumerate all monomials of total degree `d` in `nvars` variables.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(cur: &mut Vec<u32>, idx: usize, rem: u32, out: &mut Vec<Monomial>) {
        if idx + 1 == cur.len() {
            cur[idx] = rem;
            out.push(Monomial(cur.clone()));
            cur[idx] = 0;
            return;
        }
        for e in (0..=rem).rev() {
            cur[idx] = e;
            rec(cur, idx + 1, rem - e, out);
            cur[idx] = 0;
        }
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(&mut cur, 0, d, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn ctx3() -> Context {
        Context::rational(&["x", "y", "z"])
    }

    #[test]
    fn degree_examples() {
        let ctx = Context::rational(&["x", "y", "z"]);
        assert_eq!(parse_polynomial("x - y", &ctx).unwrap().degree(), Some(1));
        assert_eq!(
            parse_polynomial("x - y + x^2 + y^2 + z^2", &ctx)
                .unwrap()
                .degree(),
            Some(2)
        );
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn grevlex_ordering() {
        let ctx = ctx3();
        let m = |s: &str| {
            parse_polynomial(s, &ctx)
                .unwrap()
                .terms()
                .next()
                .unwrap()
                .0
                .clone()
        };
        let order = MonomialOrder::Grevlex;
        // x^2 > x*y > y^2 > x*z > y*z > z^2
        let seq = ["x^2", "x*y", "y^2", "x*z", "y*z", "z^2"];
        for w in seq.windows(2) {
            assert_eq!(
                order.cmp(&m(w[0]), &m(w[1])),
                Ordering::Greater,
                "{} vs {}",
                w[0],
                w[1]
            );
        }
    }

    #[test]
    fn homogenize_example() {
        // {ab - x, ab - y, x + y + 1} -> {ab - xz, ab - yz, x + y + z}
        let ctx = Context::rational(&["a", "b", "x", "y"]);
        let gens = ["a*b - x", "a*b - y", "x + y + 1"]
            .iter()
            .map(|s| parse_polynomial(s, &ctx).unwrap())
            .collect();
        let sys = PolySystem::new(ctx, gens);
        let hom = sys.homogenize("z").unwrap();
        let expect = ["a*b - x*z", "a*b - y*z", "x + y + z"];
        for (g, e) in hom.gens.iter().zip(expect) {
            assert_eq!(g, &parse_polynomial(e, &hom.ctx).unwrap());
        }
        // Round trip.
        let back = hom.dehomogenize("z").unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn homogenize_noop_on_homogeneous() {
        let ctx = ctx3();
        let sys = PolySystem::new(ctx, vec![parse_polynomial("x^2 - y*z", &ctx3()).unwrap()]);
        let hom = sys.homogenize("w").unwrap();
        assert_eq!(
            hom.gens[0],
            parse_polynomial("x^2 - y*z", &hom.ctx).unwrap()
        );
    }

    #[test]
    fn homogenize_name_collision() {
        let sys = PolySystem::new(ctx3(), vec![]);
        assert!(matches!(
            sys.homogenize("x"),
            Err(PolyError::NameCollision(_))
        ));
    }

    #[test]
    fn monomial_times_polynomial() {
        // x * (x - y + z - w) = x^2 - xy + xz - xw
        let ctx = Context::rational(&["x", "y", "z", "w"]);
        let f = parse_polynomial("x - y + z - w", &ctx).unwrap();
        let x = Monomial::var(0, 4);
        let prod = f.mul_monomial(&x);
        assert_eq!(
            prod,
            parse_polynomial("x^2 - x*y + x*z - x*w", &ctx).unwrap()
        );
        let one = Monomial::one(4);
        assert_eq!(f.mul_monomial(&one), f);
        assert!(Polynomial::zero().mul_monomial(&x).is_zero());
    }

    #[test]
    fn binomial_and_monomial_predicates() {
        let ctx = ctx3();
        assert!(parse_polynomial("x - y", &ctx).unwrap().is_binomial());
        assert!(parse_polynomial("3*x^2", &ctx).unwrap().is_binomial());
        assert!(parse_polynomial("3*x^2", &ctx).unwrap().is_monomial());
        assert!(Polynomial::zero().is_binomial());
        assert!(!parse_polynomial("x + y + z", &ctx).unwrap().is_binomial());
        // Cancellation prunes to a binomial.
        let p = parse_polynomial("x + y - y + z - z", &ctx).unwrap();
        assert!(p.is_monomial());
    }

    #[test]
    fn monomial_enumeration_count() {
        // C(d + n - 1, n - 1) monomials of degree d.
        assert_eq!(monomials_of_degree(3, 3).len(), 10);
        assert_eq!(monomials_of_degree(2, 5).len(), 6);
        assert_eq!(monomials_of_degree(4, 0).len(), 1);
    }
}
