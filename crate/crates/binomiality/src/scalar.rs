//! Exact coefficient arithmetic.
//!
//! Two fields are supported: the rational numbers, and rational functions in a
//! finite set of named parameters (reaction rate constants in the network
//! application).  Parameters are treated as algebraically independent
//! transcendentals, so any nonzero polynomial in them is invertible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, Ordering};
use thiserror::Error;

pub type Rat = BigRational;

/// When enabled (the default), rational functions are reduced by a full
/// multivariate gcd, which together with the monic-denominator convention
/// makes the stored form canonical: structural equality then coincides with
/// semantic equality.  Disabling it only removes monomial content and
/// syntactic common factors; comparisons must then go through
/// [`RatFun::equal`].
static FULL_GCD: AtomicBool = AtomicBool::new(true);

pub fn set_full_gcd(on: bool) {
    FULL_GCD.store(on, Ordering::Relaxed);
}

pub fn full_gcd_enabled() -> bool {
    FULL_GCD.load(Ordering::Relaxed)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parameter arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
}

/// Polynomial in the parameters with rational coefficients.  Exponent vectors
/// have fixed length equal to the number of declared parameters; zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamPoly {
    nparams: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

fn grlex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl ParamPoly {
    pub fn zero(nparams: usize) -> Self {
        ParamPoly {
            nparams,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nparams: usize) -> Self {
        Self::constant(Rat::one(), nparams)
    }

    pub fn constant(c: Rat, nparams: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nparams], c);
        }
        ParamPoly { nparams, terms }
    }

    pub fn param(idx: usize, nparams: usize) -> Self {
        assert!(idx < nparams);
        let mut exp = vec![0u32; nparams];
        exp[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, Rat::one());
        ParamPoly { nparams, terms }
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Some(c) if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            let (exp, c) = self.terms.iter().next().unwrap();
            if exp.iter().all(|&e| e == 0) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u64).sum())
            .max()
            .unwrap_or(0)
    }

    fn insert_term(&mut self, exp: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nparams, other.nparams);
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.insert_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        ParamPoly {
            nparams: self.nparams,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nparams, other.nparams);
        let mut r = ParamPoly::zero(self.nparams);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                r.insert_term(exp, ca * cb);
            }
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return ParamPoly::zero(self.nparams);
        }
        ParamPoly {
            nparams: self.nparams,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Leading term under graded lexicographic order on the parameter list.
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &Rat)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| grlex_cmp(a, b))
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    /// Per-parameter minimum exponent over all terms (the monomial content).
    pub fn monomial_content(&self) -> Vec<u32> {
        let mut content = vec![u32::MAX; self.nparams];
        for exp in self.terms.keys() {
            for (c, &e) in content.iter_mut().zip(exp) {
                *c = (*c).min(e);
            }
        }
        if self.terms.is_empty() {
            content = vec![0; self.nparams];
        }
        content
    }

    pub fn div_monomial(&self, m: &[u32]) -> Self {
        ParamPoly {
            nparams: self.nparams,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(x, y)| x - y).collect(), c.clone()))
                .collect(),
        }
    }

    /// Exact division; None if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.nparams, d.nparams);
        if d.is_zero() {
            return None;
        }
        let (dexp, dc) = d.leading_term().unwrap();
        let dexp = dexp.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero(self.nparams);
        while !rem.is_zero() {
            let (rexp, rc) = {
                let (e, c) = rem.leading_term().unwrap();
                (e.clone(), c.clone())
            };
            if rexp.iter().zip(&dexp).any(|(a, b)| a < b) {
                return None;
            }
            let qexp: Vec<u32> = rexp.iter().zip(&dexp).map(|(a, b)| a - b).collect();
            let qc = rc / &dc;
            let mut t = ParamPoly::zero(self.nparams);
            t.insert_term(qexp, qc);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Multivariate gcd via a primitive remainder sequence.  Result is
    /// normalized to leading coefficient 1.  Only used when full reduction is
    /// requested; instances stay small.
    pub fn gcd(&self, other: &Self) -> Self {
        let g = self.gcd_raw(other);
        if g.is_zero() {
            return g;
        }
        let lc = g.leading_coeff();
        g.scale(&(Rat::one() / lc))
    }

    fn gcd_raw(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // Pick the first parameter that actually occurs.
        let var = (0..self.nparams).find(|&i| {
            self.terms.keys().any(|e| e[i] > 0) || other.terms.keys().any(|e| e[i] > 0)
        });
        let var = match var {
            Some(v) => v,
            // Both constants.
            None => return ParamPoly::one(self.nparams),
        };
        let a = UniView::new(self, var);
        let b = UniView::new(other, var);
        let ca = a.content();
        let cb = b.content();
        let cont = ca.gcd_raw(&cb);
        let mut p = a.primitive_part(&ca);
        let mut q = b.primitive_part(&cb);
        if p.degree() < q.degree() {
            std::mem::swap(&mut p, &mut q);
        }
        loop {
            if q.is_zero() {
                let pc = p.content();
                let pp = p.primitive_part(&pc);
                return cont.mul(&pp.to_poly());
            }
            let r = p.pseudo_rem(&q);
            p = q;
            q = {
                let rc = r.content();
                r.primitive_part(&rc)
            };
        }
    }

    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<(Vec<u32>, Rat)> =
            self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        parts.sort_by(|(a, _), (b, _)| grlex_cmp(b, a));
        let mut out = String::new();
        for (i, (exp, c)) in parts.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono = monomial_text(exp, names);
            if mono.is_empty() {
                let _ = write!(out, "{}", rat_text(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{}*{}", rat_text(&mag), mono);
            }
        }
        out
    }
}

fn monomial_text(exp: &[u32], names: &[String]) -> String {
    let mut factors = Vec::new();
    for (i, &e) in exp.iter().enumerate() {
        if e == 1 {
            factors.push(names[i].clone());
        } else if e > 1 {
            factors.push(format!("{}^{}", names[i], e));
        }
    }
    factors.join("*")
}

fn rat_text(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Univariate view of a `ParamPoly` in one parameter, with `ParamPoly`
/// coefficients in the remaining ones.  Internal helper for gcd.
struct UniView {
    nparams: usize,
    var: usize,
    coeffs: BTreeMap<u32, ParamPoly>,
}

impl UniView {
    fn new(p: &ParamPoly, var: usize) -> Self {
        let mut coeffs: BTreeMap<u32, ParamPoly> = BTreeMap::new();
        for (exp, c) in &p.terms {
            let d = exp[var];
            let mut rest = exp.clone();
            rest[var] = 0;
            coeffs
                .entry(d)
                .or_insert_with(|| ParamPoly::zero(p.nparams))
                .insert_term(rest, c.clone());
        }
        coeffs.retain(|_, c| !c.is_zero());
        UniView {
            nparams: p.nparams,
            var,
            coeffs,
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> i64 {
        self.coeffs.keys().max().map(|&d| d as i64).unwrap_or(-1)
    }

    fn lc(&self) -> ParamPoly {
        self.coeffs
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| ParamPoly::zero(self.nparams))
    }

    fn content(&self) -> ParamPoly {
        let mut g = ParamPoly::zero(self.nparams);
        for c in self.coeffs.values() {
            g = g.gcd_raw(c);
        }
        if g.is_zero() {
            ParamPoly::one(self.nparams)
        } else {
            g
        }
    }

    fn primitive_part(&self, content: &ParamPoly) -> UniView {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&d, c)| (d, c.div_exact(content).expect("content divides")))
            .collect();
        UniView {
            nparams: self.nparams,
            var: self.var,
            coeffs,
        }
    }

    fn to_poly(&self) -> ParamPoly {
        let mut r = ParamPoly::zero(self.nparams);
        for (&d, c) in &self.coeffs {
            for (exp, k) in &c.terms {
                let mut e = exp.clone();
                e[self.var] += d;
                r.insert_term(e, k.clone());
            }
        }
        r
    }

    fn scale_poly(&self, f: &ParamPoly) -> UniView {
        UniView {
            nparams: self.nparams,
            var: self.var,
            coeffs: self.coeffs.iter().map(|(&d, c)| (d, c.mul(f))).collect(),
        }
    }

    fn shift_sub(&self, other: &UniView, shift: u32, factor: &ParamPoly) -> UniView {
        // self - x^shift * factor * other
        let mut coeffs = self.coeffs.clone();
        for (&d, c) in &other.coeffs {
            let t = c.mul(factor);
            let e = d + shift;
            let cur = coeffs.remove(&e).unwrap_or_else(|| ParamPoly::zero(self.nparams));
            let nv = cur.sub(&t);
            if !nv.is_zero() {
                coeffs.insert(e, nv);
            }
        }
        UniView {
            nparams: self.nparams,
            var: self.var,
            coeffs,
        }
    }

    fn pseudo_rem(&self, d: &UniView) -> UniView {
        let mut r = self.scale_poly(&ParamPoly::one(self.nparams));
        let dd = d.degree();
        let lcd = d.lc();
        while !r.is_zero() && r.degree() >= dd {
            let shift = (r.degree() - dd) as u32;
            let lcr = r.lc();
            r = r.scale_poly(&lcd).shift_sub(d, shift, &lcr);
        }
        r
    }
}

/// Rational function in the parameters, canonicalized: denominator nonzero
/// with leading coefficient 1, no common monomial content, and (when full gcd
/// reduction is on) numerator and denominator coprime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFun {
    num: ParamPoly,
    den: ParamPoly,
}

impl RatFun {
    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.nparams != den.nparams {
            return Err(ScalarError::ArityMismatch(num.nparams, den.nparams));
        }
        Ok(Self::reduce_parts(num, den))
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        let one = ParamPoly::one(p.nparams);
        Self::reduce_parts(p, one)
    }

    pub fn constant(c: Rat, nparams: usize) -> Self {
        Self::from_poly(ParamPoly::constant(c, nparams))
    }

    fn reduce_parts(mut num: ParamPoly, mut den: ParamPoly) -> Self {
        if num.is_zero() {
            return RatFun {
                num,
                den: ParamPoly::one(den.nparams),
            };
        }
        // Common monomial content.
        let cn = num.monomial_content();
        let cd = den.monomial_content();
        let common: Vec<u32> = cn.iter().zip(&cd).map(|(a, b)| *a.min(b)).collect();
        if common.iter().any(|&e| e > 0) {
            num = num.div_monomial(&common);
            den = den.div_monomial(&common);
        }
        // Syntactic common factor: one side exactly divides the other.
        if !den.is_one() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = ParamPoly::one(den.nparams);
            } else if let Some(q) = den.div_exact(&num) {
                den = q;
                num = ParamPoly::one(num.nparams);
            } else if full_gcd_enabled() {
                let g = num.gcd(&den);
                if !g.is_one() && !g.is_zero() {
                    num = num.div_exact(&g).expect("gcd divides numerator");
                    den = den.div_exact(&g).expect("gcd divides denominator");
                }
            }
        }
        // Monic denominator.
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFun { num, den }
    }

    /// Re-canonicalize under the current reduction settings.
    pub fn reduce(&self) -> Self {
        Self::reduce_parts(self.num.clone(), self.den.clone())
    }

    pub fn num(&self) -> &ParamPoly {
        &self.num
    }

    pub fn den(&self) -> &ParamPoly {
        &self.den
    }

    pub fn nparams(&self) -> usize {
        self.num.nparams
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::reduce_parts(num, den)
    }

    pub fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::reduce_parts(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce_parts(self.den.clone(), self.num.clone()))
    }

    /// Semantic equality: cross multiplication, independent of reduction state.
    pub fn equal(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Term count of numerator plus denominator; a crude size measure.
    pub fn size(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    pub fn to_text(&self, names: &[String]) -> String {
        let n = self.num.to_text(names);
        if self.den.is_one() {
            return n;
        }
        let ntxt = if self.num.num_terms() > 1 {
            format!("({})", n)
        } else {
            n
        };
        let d = self.den.to_text(names);
        let dtxt = if self.den.num_terms() > 1 || self.den.terms.keys().next().map(|e| e.iter().filter(|&&x| x > 0).count() > 1).unwrap_or(false)
        {
            format!("({})", d)
        } else {
            d
        };
        format!("{}/{}", ntxt, dtxt)
    }
}

/// An element of the active coefficient field: a plain rational, or a rational
/// function in the declared parameters.  Arithmetic is exact; equality is
/// decidable.  Values are immutable and thread-safe.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(Rat),
    Fun(RatFun),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(Rat::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Scalar::Rat(Rat::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn param(idx: usize, nparams: usize) -> Self {
        Scalar::Fun(RatFun::from_poly(ParamPoly::param(idx, nparams)))
    }

    /// Demote a constant rational function back to a plain rational so that
    /// canonical forms are unique across the tag.
    pub fn from_ratfun(f: RatFun) -> Self {
        if f.den.is_one() {
            if let Some(c) = f.num.as_constant() {
                return Scalar::Rat(c);
            }
        }
        Scalar::Fun(f)
    }

    fn promote(&self, nparams: usize) -> RatFun {
        match self {
            Scalar::Rat(r) => RatFun::constant(r.clone(), nparams),
            Scalar::Fun(f) => f.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fun(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fun(f) => f.den.is_one() && f.num.is_one(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (a, b) => {
                let n = a.arity().max(b.arity());
                Scalar::from_ratfun(a.promote(n).add(&b.promote(n)))
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r.clone()),
            Scalar::Fun(f) => Scalar::Fun(f.neg()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (a, b) => {
                let n = a.arity().max(b.arity());
                Scalar::from_ratfun(a.promote(n).mul(&b.promote(n)))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(Rat::one() / r))
                }
            }
            Scalar::Fun(f) => Ok(Scalar::from_ratfun(f.inv()?)),
        }
    }

    fn arity(&self) -> usize {
        match self {
            Scalar::Rat(_) => 0,
            Scalar::Fun(f) => f.nparams(),
        }
    }

    /// Semantic equality, independent of reduction state.
    pub fn equal(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (a, b) => {
                let n = a.arity().max(b.arity());
                a.promote(n).equal(&b.promote(n))
            }
        }
    }

    /// Crude size measure used by the simplification heuristics.
    pub fn size(&self) -> usize {
        match self {
            Scalar::Rat(_) => 1,
            Scalar::Fun(f) => f.size(),
        }
    }

    pub fn to_text(&self, params: &[String]) -> String {
        match self {
            Scalar::Rat(r) => rat_text(r),
            Scalar::Fun(f) => f.to_text(params),
        }
    }

    /// True when the printed form starts with a sum or difference and would
    /// need parentheses as a coefficient factor.
    pub fn needs_parens(&self, params: &[String]) -> bool {
        let t = self.to_text(params);
        let inner = t.strip_prefix('-').unwrap_or(&t);
        let mut depth = 0usize;
        for ch in inner.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 => return true,
                _ => {}
            }
        }
        false
    }
}
