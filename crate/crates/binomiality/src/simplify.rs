//! Heuristic pipeline for inhomogeneous ideals: linear-algebra pass,
//! homogenize-and-detect, and a bounded best-first search over binomial term
//! replacements.  Every stage records a replayable equivalence certificate;
//! verdicts are Binomial, NotBinomialProven (homogeneous refutation only), or
//! Inconclusive.

use crate::certificate::{Certificate, LinComb};
use crate::detect::{detect_binomial_homogeneous, DetectionResult, Verdict, Witness};
use crate::groebner::{buchberger_certified, GbGuard};
use crate::matrix::{linearize, prune_redundant_generators, rref};
use crate::poly::{Monomial, MonomialOrder, PolySystem, Polynomial};
use crate::scalar::Scalar;
use std::collections::{BinaryHeap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeurError {
    #[error("rewrite rule does not terminate: target monomial is divisible by the source")]
    NonTerminatingRule,
    #[error("rule provenance index out of range")]
    BadProvenance,
}

/// An oriented binomial `from → λ·to` (or `from → 0` for a pure monomial),
/// derived from generator `provenance`.
#[derive(Debug, Clone, PartialEq)]
pub struct RewriteRule {
    pub from: Monomial,
    pub to: Option<(Monomial, Scalar)>,
    pub provenance: usize,
}

impl RewriteRule {
    /// Orient a binomial generator.  `flip = false` eliminates the monomial
    /// that is larger in the order; `flip = true` the smaller one.  Returns
    /// None when the generator is not a usable binomial or the orientation
    /// would not terminate.
    pub fn from_generator(
        sys: &PolySystem,
        gen: usize,
        flip: bool,
    ) -> Option<RewriteRule> {
        let g = sys.gens.get(gen)?;
        if !g.is_binomial() || g.is_zero() {
            return None;
        }
        let order = sys.ctx.order;
        let (lead, a) = g.leading_term(order)?;
        let other = g.terms().find(|(m, _)| m != &lead);
        let (from, to) = match (flip, other) {
            (false, None) => (lead.clone(), None),
            (false, Some((v, b))) => (
                lead.clone(),
                Some((v.clone(), b.div(a).ok()?.neg())),
            ),
            (true, None) => return None,
            (true, Some((v, b))) => (
                v.clone(),
                Some((lead.clone(), a.div(b).ok()?.neg())),
            ),
        };
        let rule = RewriteRule {
            from,
            to,
            provenance: gen,
        };
        if rule.is_terminating() {
            Some(rule)
        } else {
            None
        }
    }

    /// Orient the binomial to eliminate a side that is a single variable
    /// (first power); useful for systems whose binomials read x_i = K·m.
    pub fn isolating(sys: &PolySystem, gen: usize) -> Option<RewriteRule> {
        let g = sys.gens.get(gen)?;
        if !g.is_binomial() || g.num_terms() != 2 {
            return None;
        }
        let terms: Vec<(&Monomial, &Scalar)> = g.terms().collect();
        let single = |m: &Monomial| m.total_degree() == 1;
        let flip = match (single(terms[0].0), single(terms[1].0)) {
            (false, false) => return None,
            _ => {
                // Pick the orientation whose `from` is a single variable,
                // preferring the default one when both are.
                let order = sys.ctx.order;
                let (lead, _) = g.leading_term(order)?;
                if single(lead) {
                    false
                } else {
                    true
                }
            }
        };
        RewriteRule::from_generator(sys, gen, flip)
    }

    /// A rule terminates iff `from` does not divide `to`: some variable's
    /// exponent then strictly drops with every application.
    pub fn is_terminating(&self) -> bool {
        match &self.to {
            None => true,
            Some((t, _)) => !self.from.divides(t),
        }
    }
}

/// Rewrite every `from`-divisible term of `p` to fixpoint.  Returns the
/// rewritten polynomial and the cofactor q with `new_p = p − q·g`, where `g`
/// is the originating generator.
fn apply_rule(
    p: &Polynomial,
    rule: &RewriteRule,
    g: &Polynomial,
) -> (Polynomial, Polynomial) {
    let a = g
        .coeff(&rule.from)
        .expect("rule source monomial occurs in its generator")
        .clone();
    let mut work = p.clone();
    let mut cofactor = Polynomial::zero();
    loop {
        let hit = work
            .terms()
            .find(|(m, _)| rule.from.divides(m))
            .map(|(m, c)| (m.clone(), c.clone()));
        let Some((m, c)) = hit else { break };
        let w = rule.from.div(&m).expect("divisibility checked");
        let q = Polynomial::monomial(w, c.div(&a).expect("nonzero coefficient"));
        work = work.sub(&q.mul(g));
        cofactor = cofactor.add(&q);
    }
    (work, cofactor)
}

/// Substitute a rule into every other generator (the originating binomial is
/// kept unchanged).  The certificate is invertible because only multiples of
/// the kept generator were added.
pub fn substitute(
    sys: &PolySystem,
    rule: &RewriteRule,
) -> Result<(PolySystem, Certificate), HeurError> {
    let targets: Vec<usize> = (0..sys.gens.len())
        .filter(|&j| j != rule.provenance)
        .collect();
    substitute_targeted(sys, rule, &targets)
}

/// Like [`substitute`] but only rewrites the listed generators.
pub fn substitute_targeted(
    sys: &PolySystem,
    rule: &RewriteRule,
    targets: &[usize],
) -> Result<(PolySystem, Certificate), HeurError> {
    if rule.provenance >= sys.gens.len() {
        return Err(HeurError::BadProvenance);
    }
    if !rule.is_terminating() {
        return Err(HeurError::NonTerminatingRule);
    }
    let g = &sys.gens[rule.provenance];
    let mut gens = sys.gens.clone();
    let mut cert = Certificate::identity(sys.gens.len());
    for &j in targets {
        if j == rule.provenance {
            continue;
        }
        let (new, cof) = apply_rule(&sys.gens[j], rule, g);
        if cof.is_zero() {
            continue;
        }
        gens[j] = new;
        cert.derived[j].add_term(rule.provenance, cof.neg());
        cert.originals[j].add_term(rule.provenance, cof);
    }
    let out = PolySystem::new(sys.ctx.clone(), gens);
    debug_assert!(
        cert.verify(&sys.gens, &out.gens),
        "substitute replay failed\nrule: {:?}\ninput: {}\noutput: {}",
        rule,
        sys.to_text(),
        out.to_text()
    );
    Ok((out, cert))
}

/// Replace generator `dst` by `dst − c·src` where c cancels their shared
/// monomial `m`.  Returns None when `m` is not shared.
pub fn cancel(
    sys: &PolySystem,
    dst: usize,
    src: usize,
    m: &Monomial,
) -> Option<(PolySystem, Certificate)> {
    if dst == src {
        return None;
    }
    let a = sys.gens[dst].coeff(m)?;
    let b = sys.gens[src].coeff(m)?;
    let c = a.div(b).ok()?;
    let mut gens = sys.gens.clone();
    gens[dst] = gens[dst].sub(&gens[src].scale(&c));
    let mut cert = Certificate::identity(sys.gens.len());
    cert.derived[dst].add_term(src, Polynomial::constant(c.neg(), sys.ctx.nvars()));
    cert.originals[dst].add_term(src, Polynomial::constant(c, sys.ctx.nvars()));
    let out = PolySystem::new(sys.ctx.clone(), gens);
    debug_assert!(cert.verify(&sys.gens, &out.gens));
    Some((out, cert))
}

/// Drop zero generators and exact scalar multiples of earlier generators.
pub fn dedupe(sys: &PolySystem) -> (PolySystem, Certificate) {
    let mut kept: Vec<usize> = Vec::new();
    let mut originals: Vec<LinComb> = Vec::new();
    let nvars = sys.ctx.nvars();
    for (i, g) in sys.gens.iter().enumerate() {
        if g.is_zero() {
            originals.push(LinComb::zero());
            continue;
        }
        let dup = kept
            .iter()
            .position(|&k| g.scalar_multiple_of(&sys.gens[k]));
        match dup {
            Some(pos) => {
                let k = kept[pos];
                let order = sys.ctx.order;
                let (lm, lc) = g.leading_term(order).unwrap();
                let kc = sys.gens[k].coeff(lm).unwrap();
                let c = lc.div(kc).unwrap();
                let mut lc2 = LinComb::zero();
                lc2.add_term(pos, Polynomial::constant(c, nvars));
                originals.push(lc2);
            }
            None => {
                originals.push(LinComb::unit(kept.len()));
                kept.push(i);
            }
        }
    }
    let derived: Vec<LinComb> = kept.iter().map(|&i| LinComb::unit(i)).collect();
    let out = PolySystem::new(
        sys.ctx.clone(),
        kept.iter().map(|&i| sys.gens[i].clone()).collect(),
    );
    let cert = Certificate { derived, originals };
    debug_assert!(cert.verify(&sys.gens, &out.gens));
    (out, cert)
}

/// Replace the generators by the rows of the reduced row echelon form of
/// their coefficient matrix (zero rows dropped).  The ideal is unchanged.
pub fn linear_pass(sys: &PolySystem) -> (PolySystem, Certificate) {
    let m = linearize(sys);
    let r = rref(&m);
    let nvars = sys.ctx.nvars();
    let derived: Vec<LinComb> = r
        .transform
        .iter()
        .map(|combo| {
            let mut lc = LinComb::zero();
            for (i, c) in combo.iter().enumerate() {
                lc.add_term(i, Polynomial::constant(c.clone(), nvars));
            }
            lc
        })
        .collect();
    // Each input row is recovered from its coordinates at the pivot columns.
    let originals: Vec<LinComb> = m
        .rows
        .iter()
        .map(|row| {
            let mut lc = LinComb::zero();
            for (k, pivot) in r.pivots.iter().enumerate() {
                if let Some((_, c)) = row.iter().find(|(col, _)| col == pivot) {
                    lc.add_term(k, Polynomial::constant(c.clone(), nvars));
                }
            }
            lc
        })
        .collect();
    let out = PolySystem::new(sys.ctx.clone(), r.matrix.polys());
    let cert = Certificate { derived, originals };
    debug_assert!(cert.verify(&sys.gens, &out.gens));
    (out, cert)
}

/// Rank-based pruning with certificates; also reports how many relations
/// (dropped generators) were found.
pub fn prune_certified(sys: &PolySystem) -> (PolySystem, Certificate, usize) {
    let pr = prune_redundant_generators(sys);
    let nvars = sys.ctx.nvars();
    let pos_of = |orig: usize| pr.kept.iter().position(|&k| k == orig);
    let derived: Vec<LinComb> = pr.kept.iter().map(|&i| LinComb::unit(i)).collect();
    let mut originals: Vec<LinComb> = Vec::with_capacity(sys.gens.len());
    for i in 0..sys.gens.len() {
        if let Some(p) = pos_of(i) {
            originals.push(LinComb::unit(p));
        } else {
            let (_, combo) = pr
                .relations
                .iter()
                .find(|(d, _)| *d == i)
                .expect("dropped generator has a relation");
            let mut lc = LinComb::zero();
            for (k, c) in combo {
                lc.add_term(
                    pos_of(*k).expect("relation references kept generators"),
                    Polynomial::constant(c.clone(), nvars),
                );
            }
            originals.push(lc);
        }
    }
    let n_relations = pr.relations.len();
    let cert = Certificate { derived, originals };
    debug_assert!(cert.verify(&sys.gens, &pr.system.gens));
    (pr.system, cert, n_relations)
}

/// Outcome of homogenizing and running the detector.
#[derive(Debug, Clone)]
pub struct HomogenizedDetection {
    pub hvar: String,
    pub homogenized: PolySystem,
    pub detection: DetectionResult,
    /// On Yes: the dehomogenized binomials with a certificate against the
    /// original (un-homogenized) generators.
    pub dehomogenized: Option<(PolySystem, Certificate)>,
}

/// Homogenize with a fresh variable and run the detector.  A Yes transfers to
/// the original ideal by setting the fresh variable to 1; a No proves nothing
/// unless the input was homogeneous to begin with.
pub fn homogenize_and_detect(sys: &PolySystem) -> HomogenizedDetection {
    let hvar = sys.fresh_var_name();
    let hsys = sys.homogenize(&hvar).expect("fresh name cannot collide");
    let detection = detect_binomial_homogeneous(&hsys).expect("homogenized system");
    let dehomogenized = if detection.verdict == Verdict::Yes {
        let hidx = hsys.ctx.var_index(&hvar).unwrap();
        let bsys = PolySystem::new(hsys.ctx.clone(), detection.binomials.clone())
            .dehomogenize(&hvar)
            .unwrap();
        let hcert = detection.certificate.as_ref().unwrap();
        let cert = Certificate {
            derived: hcert.derived.iter().map(|lc| dehomogenize_lincomb(lc, hidx)).collect(),
            originals: hcert
                .originals
                .iter()
                .map(|lc| dehomogenize_lincomb(lc, hidx))
                .collect(),
        };
        debug_assert!(cert.verify(&sys.gens, &bsys.gens));
        Some((bsys, cert))
    } else {
        None
    };
    HomogenizedDetection {
        hvar,
        homogenized: hsys,
        detection,
        dehomogenized,
    }
}

fn dehomogenize_lincomb(lc: &LinComb, hidx: usize) -> LinComb {
    let mut out = LinComb::zero();
    for (i, p) in &lc.terms {
        let arity = p.terms().next().map(|(m, _)| m.0.len()).unwrap_or(0);
        let q = if arity > hidx {
            p.substitute_one(hidx).remove_var(hidx)
        } else {
            p.clone()
        };
        out.add_term(*i, q);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineVerdict {
    Binomial,
    NotBinomialProven,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct StageReport {
    pub stage: String,
    pub outcome: String,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub verdict: PipelineVerdict,
    /// Final generators (certified equivalent to the input).
    pub system: PolySystem,
    pub certificate: Option<Certificate>,
    pub stages: Vec<StageReport>,
    pub witness: Option<Witness>,
}

impl PipelineReport {
    pub fn binomial_part(&self) -> Vec<&Polynomial> {
        self.system.gens.iter().filter(|g| g.is_binomial()).collect()
    }

    pub fn non_binomial_part(&self) -> Vec<&Polynomial> {
        self.system
            .gens
            .iter()
            .filter(|g| !g.is_binomial())
            .collect()
    }
}

/// One step of the substitution search.  Rules rewrite only generators that
/// are currently non-binomial: the binomial part of the presentation is never
/// disturbed by a substitution, mirroring how term replacement is used to
/// simplify the non-binomial remainder.
#[derive(Debug, Clone, PartialEq)]
pub enum Move {
    /// Apply every binomial's default-orientation rule, in generator order.
    SweepDefault,
    /// Apply every binomial's variable-isolating rule, in generator order.
    SweepIsolate,
    Rule { gen: usize, flip: bool },
    Cancel { dst: usize, src: usize, m: Monomial },
}

impl Move {
    pub fn describe(&self) -> String {
        match self {
            Move::SweepDefault => "sweep-default".into(),
            Move::SweepIsolate => "sweep-isolate".into(),
            Move::Rule { gen, flip } => {
                format!("rule(gen {gen}, {})", if *flip { "flipped" } else { "default" })
            }
            Move::Cancel { dst, src, .. } => format!("cancel(gen {dst} against gen {src})"),
        }
    }
}

type Score = (usize, usize);

fn score(sys: &PolySystem) -> Score {
    let nonbin = sys.gens.iter().filter(|g| !g.is_binomial()).count();
    let terms: usize = sys.gens.iter().map(|g| g.num_terms()).sum();
    (nonbin, terms)
}

fn canonical_key(sys: &PolySystem) -> String {
    let order = sys.ctx.order;
    let mut lines: Vec<String> = sys
        .gens
        .iter()
        .map(|g| g.monic(order).to_text(&sys.ctx))
        .collect();
    lines.sort();
    lines.join(";")
}

/// Apply a move followed by zero/duplicate cleanup; None when the move does
/// not apply or changes nothing.
fn apply_move(sys: &PolySystem, mv: &Move) -> Option<(PolySystem, Certificate)> {
    let nonbin_targets = |s: &PolySystem| -> Vec<usize> {
        (0..s.gens.len())
            .filter(|&j| !s.gens[j].is_binomial())
            .collect()
    };
    let (mid, cert) = match mv {
        Move::SweepDefault | Move::SweepIsolate => {
            let isolate = matches!(mv, Move::SweepIsolate);
            // Rules and targets are fixed up front: every non-binomial
            // generator is rewritten to normal form under the whole rule
            // set, even if an early rule already made it binomial.
            let targets = nonbin_targets(sys);
            let mut cur = sys.clone();
            let mut cert = Certificate::identity(sys.gens.len());
            let mut changed = false;
            for gen in 0..cur.gens.len() {
                if !sys.gens[gen].is_binomial() {
                    continue;
                }
                let rule = if isolate {
                    RewriteRule::isolating(&cur, gen)
                } else {
                    RewriteRule::from_generator(&cur, gen, false)
                };
                let Some(rule) = rule else { continue };
                let (next, c) = substitute_targeted(&cur, &rule, &targets).ok()?;
                if next.gens != cur.gens {
                    changed = true;
                }
                cert = Certificate::compose(&cert, &c);
                cur = next;
            }
            if !changed {
                return None;
            }
            (cur, cert)
        }
        Move::Rule { gen, flip } => {
            let rule = RewriteRule::from_generator(sys, *gen, *flip)?;
            let targets = nonbin_targets(sys);
            let (next, c) = substitute_targeted(sys, &rule, &targets).ok()?;
            if next.gens == sys.gens {
                return None;
            }
            (next, c)
        }
        Move::Cancel { dst, src, m } => cancel(sys, *dst, *src, m)?,
    };
    let (clean, dcert, _) = prune_certified(&mid);
    Some((clean, Certificate::compose(&cert, &dcert)))
}

/// Certificate-free twin of [`apply_move`] used while exploring; the winning
/// path is replayed through [`apply_move`] to reconstruct certificates.
pub fn apply_move_plain(sys: &PolySystem, mv: &Move) -> Option<PolySystem> {
    let rewrite = |s: &PolySystem, rule: &RewriteRule, targets: &[usize]| -> PolySystem {
        let g = s.gens[rule.provenance].clone();
        let mut gens = s.gens.clone();
        for &j in targets {
            if j == rule.provenance {
                continue;
            }
            let (new, cof) = apply_rule(&gens[j], rule, &g);
            if !cof.is_zero() {
                gens[j] = new;
            }
        }
        PolySystem::new(s.ctx.clone(), gens)
    };
    let nonbin_targets: Vec<usize> = (0..sys.gens.len())
        .filter(|&j| !sys.gens[j].is_binomial())
        .collect();
    let mid = match mv {
        Move::SweepDefault | Move::SweepIsolate => {
            let isolate = matches!(mv, Move::SweepIsolate);
            let mut cur = sys.clone();
            for gen in 0..cur.gens.len() {
                if !sys.gens[gen].is_binomial() {
                    continue;
                }
                let rule = if isolate {
                    RewriteRule::isolating(&cur, gen)
                } else {
                    RewriteRule::from_generator(&cur, gen, false)
                };
                let Some(rule) = rule else { continue };
                cur = rewrite(&cur, &rule, &nonbin_targets);
            }
            if cur.gens == sys.gens {
                return None;
            }
            cur
        }
        Move::Rule { gen, flip } => {
            let rule = RewriteRule::from_generator(sys, *gen, *flip)?;
            let next = rewrite(sys, &rule, &nonbin_targets);
            if next.gens == sys.gens {
                return None;
            }
            next
        }
        Move::Cancel { dst, src, m } => {
            let a = sys.gens[*dst].coeff(m)?;
            let b = sys.gens[*src].coeff(m)?;
            let c = a.div(b).ok()?;
            let mut gens = sys.gens.clone();
            gens[*dst] = gens[*dst].sub(&gens[*src].scale(&c));
            PolySystem::new(sys.ctx.clone(), gens)
        }
    };
    Some(prune_redundant_generators(&mid).system)
}

/// Orientation tried first for the rule derived from `gen`.  The default
/// orientation (eliminate the order-larger monomial, i.e. replace higher
/// degree by lower degree) is generally preferred.  For a rule between two
/// single variables, prefer keeping the variable that is less entangled with
/// the higher-degree monomials owned by the other binomial generators:
/// rewriting targets toward an entangled variable recreates monomials that
/// the frozen binomials already couple, while the untangled variable acts as
/// a fresh common representative into which several targets can merge.
fn preferred_flip(sys: &PolySystem, gen: usize, binomial_gens: &[usize]) -> bool {
    let g = &sys.gens[gen];
    if g.num_terms() != 2 {
        return false;
    }
    let order = sys.ctx.order;
    let mut mons = g.terms().map(|(m, _)| m);
    let (a, b) = (mons.next().unwrap(), mons.next().unwrap());
    let (lead, trail) = if order.cmp(a, b) == std::cmp::Ordering::Greater {
        (a, b)
    } else {
        (b, a)
    };
    let single_var = |m: &Monomial| -> Option<usize> {
        if m.total_degree() == 1 {
            m.0.iter().position(|&e| e == 1)
        } else {
            None
        }
    };
    let (Some(lv), Some(tv)) = (single_var(lead), single_var(trail)) else {
        return false;
    };
    let entangled = |v: usize| -> usize {
        binomial_gens
            .iter()
            .filter(|&&i| i != gen)
            .flat_map(|&i| sys.gens[i].terms())
            .filter(|(m, _)| m.total_degree() >= 2 && m.0[v] > 0)
            .count()
    };
    // Default keeps `trail`, flip keeps `lead`; keep the less entangled one.
    entangled(lv) < entangled(tv)
}

pub fn candidate_moves(sys: &PolySystem, max_depth: usize) -> Vec<Move> {
    let binomial_gens: Vec<usize> = (0..sys.gens.len())
        .filter(|&i| sys.gens[i].is_binomial() && !sys.gens[i].is_zero())
        .collect();
    let mut moves = Vec::new();
    let nonbin_gens: Vec<usize> = (0..sys.gens.len())
        .filter(|&i| !sys.gens[i].is_binomial())
        .collect();
    // Cancellations before sweeps and substitutions: eliminating a shared
    // monomial by a linear combination touches a single generator, so these
    // moves are the closest to plain linear algebra and get the earliest
    // queue positions.
    for &dst in &nonbin_gens {
        for src in 0..sys.gens.len() {
            if src == dst {
                continue;
            }
            for (m, _) in sys.gens[dst].terms() {
                if sys.gens[src].coeff(m).is_some() {
                    moves.push(Move::Cancel {
                        dst,
                        src,
                        m: m.clone(),
                    });
                }
            }
        }
    }
    // Sweeps bundle one rule per binomial into a single move.  They are only
    // worth a move when firing the rules one at a time could not fit in the
    // depth budget; on small systems single rules explore more faithfully.
    if binomial_gens.len() > max_depth {
        moves.push(Move::SweepIsolate);
        moves.push(Move::SweepDefault);
    }
    for &gen in &binomial_gens {
        let first = preferred_flip(sys, gen, &binomial_gens);
        for flip in [first, !first] {
            let Some(rule) = RewriteRule::from_generator(sys, gen, flip) else {
                continue;
            };
            let applies = nonbin_gens.iter().any(|&t| {
                sys.gens[t].terms().any(|(m, _)| rule.from.divides(m))
            });
            if applies {
                moves.push(Move::Rule { gen, flip });
            }
        }
    }
    moves
}

/// Ranking key for all-binomial end states beyond the score: prefer the
/// presentation whose generators reuse the fewest monomials (closest to the
/// pairwise-disjoint supports of a partitioning kernel basis), and among
/// those avoid binomials whose two monomials share a common factor (such a
/// generator hides a monomial factorization).  Lower keys are better.
fn terminal_key(sys: &PolySystem) -> (usize, usize, usize) {
    let terms: usize = sys.gens.iter().map(|g| g.num_terms()).sum();
    let distinct: std::collections::HashSet<&Monomial> =
        sys.gens.iter().flat_map(|g| g.terms().map(|(m, _)| m)).collect();
    let noncoprime = sys
        .gens
        .iter()
        .filter(|g| g.num_terms() == 2)
        .filter(|g| {
            let ms: Vec<&Monomial> = g.terms().map(|(m, _)| m).collect();
            ms[0].0.iter().zip(&ms[1].0).any(|(a, b)| *a > 0 && *b > 0)
        })
        .count();
    (terms, usize::MAX - distinct.len(), noncoprime)
}

struct Node {
    sys: PolySystem,
    /// Move that produced this state from its parent.
    mv: Option<Move>,
    parent: Option<usize>,
    depth: usize,
}

const DEFAULT_NODE_BUDGET: usize = 1500;

/// Bounded best-first search over term-replacement moves.  States are scored
/// by (#non-binomial generators, total terms); the best state reached is
/// returned with a full certificate chain.
pub fn substitution_search(
    sys: &PolySystem,
    max_depth: usize,
    branch: usize,
) -> PipelineReport {
    substitution_search_with_budget(sys, max_depth, branch, DEFAULT_NODE_BUDGET)
}

pub fn substitution_search_with_budget(
    sys: &PolySystem,
    max_depth: usize,
    branch: usize,
    node_budget: usize,
) -> PipelineReport {
    assert!(max_depth >= 1 && branch >= 1, "bounds must be at least 1");
    let (start, start_cert, _) = prune_certified(sys);
    let mut nodes: Vec<Node> = vec![Node {
        sys: start.clone(),
        mv: None,
        parent: None,
        depth: 0,
    }];
    let mut visited: HashSet<String> = HashSet::new();
    visited.insert(canonical_key(&start));
    // Max-heap on Reverse((score, id)): pop the best score first; among equal
    // scores the earliest-discovered state wins, so the search order is
    // deterministic and the first optimum found is the one reported.
    let mut frontier: BinaryHeap<std::cmp::Reverse<(Score, usize)>> = BinaryHeap::new();
    frontier.push(std::cmp::Reverse((score(&start), 0)));
    let mut best: usize = 0;
    let mut best_score = score(&start);
    // All-binomial end states are collected and ranked by `terminal_key`
    // instead of by discovery order; the search keeps draining the frontier
    // so every reachable presentation within the budget competes.
    let mut best_terminal: Option<((usize, usize, usize), usize)> = None;
    let mut expanded = 0usize;

    if best_score.0 == 0 {
        best_terminal = Some((terminal_key(&start), 0));
    }

    while let Some(std::cmp::Reverse((_, id))) = frontier.pop() {
        if expanded >= node_budget {
            break;
        }
        expanded += 1;
        let depth = nodes[id].depth;
        if depth >= max_depth {
            continue;
        }
        let mut children: Vec<(Score, PolySystem, Move)> = Vec::new();
        for mv in candidate_moves(&nodes[id].sys, max_depth) {
            let Some(child) = apply_move_plain(&nodes[id].sys, &mv) else {
                continue;
            };
            let key = canonical_key(&child);
            if visited.contains(&key) {
                continue;
            }
            visited.insert(key);
            children.push((score(&child), child, mv));
        }
        children.sort_by(|a, b| a.0.cmp(&b.0));
        children.truncate(branch);
        for (csc, child, mv) in children {
            let cid = nodes.len();
            if csc.0 == 0 {
                let tk = terminal_key(&child);
                if best_terminal.as_ref().map_or(true, |(bk, _)| tk < *bk) {
                    best_terminal = Some((tk, cid));
                }
            }
            nodes.push(Node {
                sys: child,
                mv: Some(mv),
                parent: Some(id),
                depth: depth + 1,
            });
            if csc < best_score {
                best_score = csc;
                best = cid;
            }
            // All-binomial states have no further moves, so they never need
            // to enter the frontier.
            if csc.0 > 0 {
                frontier.push(std::cmp::Reverse((csc, cid)));
            }
        }
    }

    if let Some((_, tid)) = best_terminal {
        best = tid;
        best_score = score(&nodes[tid].sys);
    }

    // Replay the winning move chain with certificates and compose them.
    let mut chain: Vec<usize> = Vec::new();
    let mut cur = Some(best);
    while let Some(i) = cur {
        chain.push(i);
        cur = nodes[i].parent;
    }
    chain.reverse();
    let mut cert = start_cert;
    let mut state = start;
    for &i in &chain[1..] {
        let mv = nodes[i].mv.as_ref().expect("non-root nodes store a move");
        let (next, c) = apply_move(&state, mv).expect("winning move replays");
        cert = Certificate::compose(&cert, &c);
        state = next;
    }
    debug_assert_eq!(state.gens, nodes[best].sys.gens);
    let system = nodes[best].sys.clone();
    debug_assert!(cert.verify(&sys.gens, &system.gens));
    let all_binomial = best_score.0 == 0;
    PipelineReport {
        verdict: if all_binomial {
            PipelineVerdict::Binomial
        } else {
            PipelineVerdict::Inconclusive
        },
        system,
        certificate: Some(cert),
        stages: vec![StageReport {
            stage: "substitution-search".into(),
            outcome: format!(
                "explored {} states, best has {} non-binomial generator(s); moves: [{}]",
                expanded + 1,
                best_score.0,
                chain[1..]
                    .iter()
                    .map(|&i| nodes[i].mv.as_ref().unwrap().describe())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }],
        witness: None,
    }
}

#[derive(Debug, Clone)]
pub struct RecipeOptions {
    pub max_depth: usize,
    pub branch: usize,
    pub node_budget: usize,
    pub enable_gb_oracle: bool,
    pub homogenize_retry: bool,
    pub gb_guard: GbGuard,
}

impl Default for RecipeOptions {
    fn default() -> Self {
        RecipeOptions {
            max_depth: 8,
            branch: 16,
            node_budget: DEFAULT_NODE_BUDGET,
            enable_gb_oracle: false,
            homogenize_retry: true,
            gb_guard: GbGuard::default(),
        }
    }
}

/// The full heuristic pipeline: (1) linear algebra, (2) homogenize and
/// detect, (3) substitution search, optional homogenize-retry and (4)
/// Gröbner oracle.  Short-circuits on the first Binomial verdict.
pub fn run_recipe(sys: &PolySystem, opts: &RecipeOptions) -> PipelineReport {
    let mut stages: Vec<StageReport> = Vec::new();

    // Stage 1: reduced row echelon form of the generators.
    let (s1, c1) = linear_pass(sys);
    if s1.gens.iter().all(|g| g.is_binomial()) {
        stages.push(StageReport {
            stage: "linear-pass".into(),
            outcome: "all reduced generators are binomial".into(),
        });
        debug_assert!(c1.verify(&sys.gens, &s1.gens));
        return PipelineReport {
            verdict: PipelineVerdict::Binomial,
            system: s1,
            certificate: Some(c1),
            stages,
            witness: None,
        };
    }
    stages.push(StageReport {
        stage: "linear-pass".into(),
        outcome: format!(
            "{} generator(s) remain non-binomial after row reduction",
            s1.gens.iter().filter(|g| !g.is_binomial()).count()
        ),
    });

    // Stage 2: detection, directly when homogeneous, else via homogenization.
    if s1.is_homogeneous() {
        let det = detect_binomial_homogeneous(&s1).expect("homogeneous by check");
        match det.verdict {
            Verdict::Yes => {
                stages.push(StageReport {
                    stage: "detect".into(),
                    outcome: "homogeneous input accepted by the detector".into(),
                });
                let bsys = PolySystem::new(s1.ctx.clone(), det.binomials.clone());
                let cert = Certificate::compose(&c1, det.certificate.as_ref().unwrap());
                return PipelineReport {
                    verdict: PipelineVerdict::Binomial,
                    system: bsys,
                    certificate: Some(cert),
                    stages,
                    witness: None,
                };
            }
            Verdict::No => {
                stages.push(StageReport {
                    stage: "detect".into(),
                    outcome: "homogeneous input refused with a witness".into(),
                });
                return PipelineReport {
                    verdict: PipelineVerdict::NotBinomialProven,
                    system: s1,
                    certificate: None,
                    stages,
                    witness: det.witness,
                };
            }
        }
    }
    let hd = homogenize_and_detect(&s1);
    match &hd.dehomogenized {
        Some((bsys, cert)) => {
            stages.push(StageReport {
                stage: "homogenize-detect".into(),
                outcome: "homogenized ideal is binomial; dehomogenized the basis".into(),
            });
            let full = Certificate::compose(&c1, cert);
            return PipelineReport {
                verdict: PipelineVerdict::Binomial,
                system: bsys.clone(),
                certificate: Some(full),
                stages,
                witness: None,
            };
        }
        None => {
            stages.push(StageReport {
                stage: "homogenize-detect".into(),
                outcome:
                    "homogenized generators are not binomial; inconclusive for the original ideal"
                        .into(),
            });
        }
    }

    // Stage 3: substitution search on the original generators.
    let mut search =
        substitution_search_with_budget(sys, opts.max_depth, opts.branch, opts.node_budget);
    stages.append(&mut search.stages);
    if search.verdict == PipelineVerdict::Binomial {
        return PipelineReport {
            verdict: PipelineVerdict::Binomial,
            system: search.system,
            certificate: search.certificate,
            stages,
            witness: None,
        };
    }

    // Homogenize again with the enlarged (simplified) generating set.
    if opts.homogenize_retry {
        let hd = homogenize_and_detect(&search.system);
        if let Some((bsys, cert)) = &hd.dehomogenized {
            stages.push(StageReport {
                stage: "homogenize-retry".into(),
                outcome: "homogenization after substitution succeeded".into(),
            });
            let full = Certificate::compose(search.certificate.as_ref().unwrap(), cert);
            return PipelineReport {
                verdict: PipelineVerdict::Binomial,
                system: bsys.clone(),
                certificate: Some(full),
                stages,
                witness: None,
            };
        }
        stages.push(StageReport {
            stage: "homogenize-retry".into(),
            outcome: "still not binomial after homogenizing the enlarged set".into(),
        });
    }

    // Stage 4: optional Gröbner oracle (never on the main path).
    if opts.enable_gb_oracle {
        match buchberger_certified(sys, sys.ctx.order, &opts.gb_guard) {
            Ok((gb, cert)) => {
                if gb.is_binomial() {
                    stages.push(StageReport {
                        stage: "gb-oracle".into(),
                        outcome: "reduced basis is binomial".into(),
                    });
                    let bsys = PolySystem::new(sys.ctx.clone(), gb.elements);
                    return PipelineReport {
                        verdict: PipelineVerdict::Binomial,
                        system: bsys,
                        certificate: Some(cert),
                        stages,
                        witness: None,
                    };
                }
                stages.push(StageReport {
                    stage: "gb-oracle".into(),
                    outcome: "reduced basis is not binomial; the ideal is not binomial".into(),
                });
                return PipelineReport {
                    verdict: PipelineVerdict::NotBinomialProven,
                    system: search.system,
                    certificate: search.certificate,
                    stages,
                    witness: None,
                };
            }
            Err(e) => {
                stages.push(StageReport {
                    stage: "gb-oracle".into(),
                    outcome: format!("skipped: {e}"),
                });
            }
        }
    }

    PipelineReport {
        verdict: PipelineVerdict::Inconclusive,
        system: search.system,
        certificate: search.certificate,
        stages,
        witness: None,
    }
}

/// Discourage accidental use of a non-default order in tests.
pub fn default_order() -> MonomialOrder {
    MonomialOrder::Grevlex
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_polynomial, parse_system};

    fn sys(src: &str) -> PolySystem {
        parse_system(src).unwrap()
    }

    #[test]
    fn linear_pass_isolates_the_linear_binomial() {
        let s = sys("vars: x y z\nx - y + x^2 + y^2 + z^2\nx^2 + y^2 + z^2\n");
        let (out, cert) = linear_pass(&s);
        let ctx = &s.ctx;
        assert_eq!(out.gens.len(), 2);
        assert!(out
            .gens
            .contains(&parse_polynomial("x - y", ctx).unwrap()));
        assert!(out
            .gens
            .contains(&parse_polynomial("x^2 + y^2 + z^2", ctx).unwrap()));
        assert!(cert.verify(&s.gens, &out.gens));
    }

    #[test]
    fn linear_pass_finds_the_constant_shift() {
        let s = sys("vars: a b x y\na*b - x\na*b - y\nx + y + 1\n");
        let (out, _) = linear_pass(&s);
        let ctx = &s.ctx;
        assert_eq!(
            out.gens,
            vec![
                parse_polynomial("a*b + 1/2", ctx).unwrap(),
                parse_polynomial("x + 1/2", ctx).unwrap(),
                parse_polynomial("y + 1/2", ctx).unwrap(),
            ]
        );
        assert!(out.gens.iter().all(|g| g.is_binomial()));
    }

    #[test]
    fn linear_pass_leaves_echelon_binomials_alone() {
        let s = sys("vars: x y z w\nx - y\nz - w\n");
        let (out, _) = linear_pass(&s);
        assert_eq!(out.gens, s.gens);
    }

    #[test]
    fn substitute_simple_rule() {
        let s = sys("vars: x y\nx - y\nx^2\n");
        let rule = RewriteRule::from_generator(&s, 0, false).unwrap();
        let (out, cert) = substitute(&s, &rule).unwrap();
        let ctx = &s.ctx;
        assert_eq!(out.gens[1], parse_polynomial("y^2", ctx).unwrap());
        assert!(cert.verify(&s.gens, &out.gens));
    }

    #[test]
    fn non_terminating_rule_rejected() {
        // x²y − x is a binomial but the orientation x → x²y loops.
        let s = sys("vars: x y\nx^2*y - x\ny^2\n");
        assert!(RewriteRule::from_generator(&s, 0, true).is_none());
        let bad = RewriteRule {
            from: parse_monomial("x", &s),
            to: Some((parse_monomial("x^2*y", &s), Scalar::one())),
            provenance: 0,
        };
        assert_eq!(
            substitute(&s, &bad).unwrap_err(),
            HeurError::NonTerminatingRule
        );
    }

    fn parse_monomial(t: &str, s: &PolySystem) -> Monomial {
        let p = parse_polynomial(t, &s.ctx).unwrap();
        let m = p.terms().next().unwrap().0.clone();
        m
    }

    #[test]
    fn homogenize_and_detect_constant_binomial() {
        let s = sys("vars: x\n2*x + 1\n");
        let hd = homogenize_and_detect(&s);
        let (bsys, cert) = hd.dehomogenized.expect("homogenized line is binomial");
        assert_eq!(bsys.gens.len(), 1);
        assert!(bsys.gens[0]
            .scalar_multiple_of(&parse_polynomial("2*x + 1", &s.ctx).unwrap()));
        assert!(cert.verify(&s.gens, &bsys.gens));
    }

    #[test]
    fn homogenization_failure_is_not_a_refutation() {
        // The homogenized ideal of this system is not binomial even though
        // the original ideal is.
        let s = sys("vars: a b x y\na*b - x\na*b - y\nx + y + 1\n");
        let hd = homogenize_and_detect(&s);
        assert_eq!(hd.detection.verdict, Verdict::No);
        assert!(hd.dehomogenized.is_none());
    }

    #[test]
    fn search_trivial_on_binomial_input() {
        let s = sys("vars: x y z\nx - y\ny*z\n");
        let r = substitution_search(&s, 4, 8);
        assert_eq!(r.verdict, PipelineVerdict::Binomial);
        assert_eq!(r.system.gens, s.gens);
    }

    #[test]
    fn search_resolves_single_substitution() {
        let s = sys("vars: x y\nx - y\nx^2 + x*y\n");
        let r = substitution_search(&s, 4, 8);
        assert_eq!(r.verdict, PipelineVerdict::Binomial);
        assert!(r
            .certificate
            .unwrap()
            .verify(&s.gens, &r.system.gens));
    }

    #[test]
    fn cancel_move_removes_shared_monomial() {
        let s = sys("vars: x y z\nx + y\nx + z\n");
        let m = parse_monomial("x", &s);
        let (out, cert) = cancel(&s, 0, 1, &m).unwrap();
        assert_eq!(
            out.gens[0],
            parse_polynomial("y - z", &s.ctx).unwrap()
        );
        assert!(cert.verify(&s.gens, &out.gens));
    }

    #[test]
    fn recipe_stops_at_stage_one_for_the_shift_example() {
        let s = sys("vars: a b x y\na*b - x\na*b - y\nx + y + 1\n");
        let r = run_recipe(&s, &RecipeOptions::default());
        assert_eq!(r.verdict, PipelineVerdict::Binomial);
        assert_eq!(r.stages[0].stage, "linear-pass");
        let expect = ["2*a*b + 1", "2*x + 1", "2*y + 1"];
        for (g, e) in r.system.gens.iter().zip(expect) {
            assert!(g.scalar_multiple_of(&parse_polynomial(e, &s.ctx).unwrap()));
        }
        assert!(r.certificate.unwrap().verify(&s.gens, &r.system.gens));
    }

    #[test]
    fn recipe_uses_detector_after_linear_pass() {
        let s = sys("vars: x y z\nx - y + x^2 + y^2 + z^2\nx^2 + y^2 + z^2\n");
        let r = run_recipe(&s, &RecipeOptions::default());
        assert_eq!(r.verdict, PipelineVerdict::Binomial);
        let ctx = &s.ctx;
        let expect = [
            parse_polynomial("x - y", ctx).unwrap(),
            parse_polynomial("2*x^2 + z^2", ctx).unwrap(),
        ];
        assert_eq!(r.system.gens.len(), 2);
        for (g, e) in r.system.gens.iter().zip(&expect) {
            assert!(g.scalar_multiple_of(e), "unexpected generator");
        }
        assert!(r.certificate.unwrap().verify(&s.gens, &r.system.gens));
    }

    #[test]
    fn recipe_refutes_homogeneous_non_binomial() {
        let s = sys("vars: x y z\nx^2 + y^2 + z^2\n");
        let r = run_recipe(&s, &RecipeOptions::default());
        assert_eq!(r.verdict, PipelineVerdict::NotBinomialProven);
        assert!(r.witness.is_some());
    }

    #[test]
    fn recipe_gb_stage_confirms_binomial() {
        // xy−1 is inhomogeneous; search cannot reorient it usefully, but the
        // lex-free grevlex basis of <xy−1, y²−1> is binomial.
        let s = sys("vars: x y\nx*y - 1\ny^2 - 1\n");
        let mut opts = RecipeOptions::default();
        opts.enable_gb_oracle = true;
        let r = run_recipe(&s, &opts);
        assert_eq!(r.verdict, PipelineVerdict::Binomial);
        if let Some(cert) = &r.certificate {
            assert!(cert.verify(&s.gens, &r.system.gens));
        }
    }

    #[test]
    fn dedupe_drops_zero_and_scalar_multiples() {
        let s = sys("vars: x y\nx - y\n3*x - 3*y\n0\n");
        let (out, cert) = dedupe(&s);
        assert_eq!(out.gens.len(), 1);
        assert!(cert.verify(&s.gens, &out.gens));
    }

    #[test]
    fn prune_certified_counts_relations() {
        let s = sys("vars: x y z\nx + y\ny + z\nx - z\nx + 2*y + z\n");
        let (out, cert, n) = prune_certified(&s);
        assert_eq!(out.gens.len(), 2);
        assert_eq!(n, 2);
        assert!(cert.verify(&s.gens, &out.gens));
    }
}
