//! Replayable equivalence certificates: every derived generator is stored as
//! an explicit polynomial combination of the originals and vice versa, so
//! ideal equality can be audited by exact arithmetic alone.

use crate::poly::{Context, Polynomial};
use crate::scalar::Scalar;
use serde_json::{json, Value};

/// A formal combination Σ coeff_j · basis[index_j] with polynomial
/// coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinComb {
    pub terms: Vec<(usize, Polynomial)>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb { terms: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        LinComb {
            terms: vec![(i, Polynomial::constant(Scalar::one(), 0))],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, i: usize, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        if let Some(t) = self.terms.iter_mut().find(|(j, _)| *j == i) {
            let (a, b) = widen_pair(&t.1, &p);
            t.1 = a.add(&b);
        } else {
            self.terms.push((i, p));
        }
        self.terms.retain(|(_, p)| !p.is_zero());
        self.terms.sort_by_key(|(j, _)| *j);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, p) in &other.terms {
            out.add_term(*i, p.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return LinComb::zero();
        }
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(i, p)| (*i, p.scale(c)))
                .collect(),
        }
    }

    pub fn mul_poly(&self, q: &Polynomial) -> Self {
        if q.is_zero() {
            return LinComb::zero();
        }
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(i, p)| (*i, mul_widened(p, q)))
                .collect(),
        }
    }

    /// Expand the combination against concrete basis polynomials.  The
    /// constant coefficients produced by [`LinComb::unit`] are widened to the
    /// basis arity on the fly.
    pub fn evaluate(&self, basis: &[Polynomial]) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (i, p) in &self.terms {
            acc = acc.add(&widen(p, &basis[*i]).mul(&basis[*i]));
        }
        acc
    }

    pub fn to_json(&self, ctx: &Context) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(i, p)| json!({ "index": i, "coefficient": p.to_text(ctx) }))
                .collect(),
        )
    }
}

/// Coefficient polynomials are stored with whatever variable arity was
/// convenient at construction time; widen to match before multiplying.
fn widen(p: &Polynomial, like: &Polynomial) -> Polynomial {
    let want = like
        .terms()
        .next()
        .map(|(m, _)| m.0.len())
        .unwrap_or(0);
    let have = p.terms().next().map(|(m, _)| m.0.len()).unwrap_or(0);
    if have < want {
        p.extend_vars(want - have)
    } else {
        p.clone()
    }
}

/// Bidirectional ideal-equality certificate between an original and a
/// derived generating set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Certificate {
    /// derived[j] = Σ coeff · original[i]
    pub derived: Vec<LinComb>,
    /// original[i] = Σ coeff · derived[j]
    pub originals: Vec<LinComb>,
}

impl Certificate {
    /// The identity certificate for a set of n generators.
    pub fn identity(n: usize) -> Self {
        Certificate {
            derived: (0..n).map(LinComb::unit).collect(),
            originals: (0..n).map(LinComb::unit).collect(),
        }
    }

    /// Chain a certificate A→B with a certificate B→C into A→C.
    pub fn compose(first: &Certificate, second: &Certificate) -> Certificate {
        let derived = second
            .derived
            .iter()
            .map(|lc| substitute(lc, &first.derived))
            .collect();
        let originals = first
            .originals
            .iter()
            .map(|lc| substitute(lc, &second.originals))
            .collect();
        Certificate { derived, originals }
    }

    /// Replay both directions with exact arithmetic.
    pub fn verify(&self, originals: &[Polynomial], derived: &[Polynomial]) -> bool {
        if self.derived.len() != derived.len() || self.originals.len() != originals.len() {
            return false;
        }
        self.derived
            .iter()
            .zip(derived)
            .all(|(lc, p)| &lc.evaluate(originals) == p)
            && self
                .originals
                .iter()
                .zip(originals)
                .all(|(lc, p)| &lc.evaluate(derived) == p)
    }

    pub fn to_json(&self, ctx: &Context) -> Value {
        json!({
            "derived": self.derived.iter().map(|lc| lc.to_json(ctx)).collect::<Vec<_>>(),
            "originals": self.originals.iter().map(|lc| lc.to_json(ctx)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, ctx: &Context) -> Result<Self, String> {
        let side = |key: &str| -> Result<Vec<LinComb>, String> {
            let arr = v
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| format!("certificate: missing array '{key}'"))?;
            arr.iter()
                .map(|lc| {
                    let terms = lc
                        .as_array()
                        .ok_or_else(|| "certificate: combination is not an array".to_string())?;
                    let mut out = LinComb::zero();
                    for t in terms {
                        let i = t
                            .get("index")
                            .and_then(Value::as_u64)
                            .ok_or_else(|| "certificate: missing term index".to_string())?;
                        let c = t
                            .get("coefficient")
                            .and_then(Value::as_str)
                            .ok_or_else(|| "certificate: missing term coefficient".to_string())?;
                        let p = crate::parse::parse_polynomial(c, ctx)
                            .map_err(|e| format!("certificate coefficient: {e}"))?;
                        out.add_term(i as usize, p);
                    }
                    Ok(out)
                })
                .collect()
        };
        Ok(Certificate {
            derived: side("derived")?,
            originals: side("originals")?,
        })
    }
}

fn substitute(lc: &LinComb, basis: &[LinComb]) -> LinComb {
    let mut out = LinComb::zero();
    for (i, p) in &lc.terms {
        for (j, q) in &basis[*i].terms {
            out.add_term(*j, mul_widened(p, q));
        }
    }
    out
}

fn widen_pair(p: &Polynomial, q: &Polynomial) -> (Polynomial, Polynomial) {
    let np = p.terms().next().map(|(m, _)| m.0.len()).unwrap_or(0);
    let nq = q.terms().next().map(|(m, _)| m.0.len()).unwrap_or(0);
    let n = np.max(nq);
    (p.extend_vars(n - np), q.extend_vars(n - nq))
}

fn mul_widened(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let (a, b) = widen_pair(p, q);
    a.mul(&b)
}
