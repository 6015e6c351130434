//! JSON serialization for detection results and pipeline reports.
//!
//! Reports round-trip: `from_json(to_json(r))` reproduces `r` exactly, so
//! machine consumers can archive and replay runs.  Polynomials and scalar
//! coefficients travel as their text form, which the parser accepts back.

use crate::certificate::{Certificate, LinComb};
use crate::detect::{DetectionResult, IterationLog, Verdict, Witness};
use crate::parse::{parse_polynomial, parse_scalar, parse_system, ParseError};
use crate::poly::{Context, Monomial, MonomialOrder, PolySystem, Polynomial};
use crate::scalar::Scalar;
use crate::simplify::{PipelineReport, PipelineVerdict, StageReport};
use serde_json::{json, Value};

fn poly_to_json(p: &Polynomial, ctx: &Context) -> Value {
    Value::String(p.to_text(ctx))
}

fn poly_from_json(v: &Value, ctx: &Context) -> Result<Polynomial, String> {
    let s = v.as_str().ok_or("polynomial must be a string")?;
    parse_polynomial(s, ctx).map_err(|e| e.to_string())
}

/// `vars:`/`params:`/`order:` headers plus one generator per line — the same
/// text format the system parser reads.
pub fn system_to_text(sys: &PolySystem) -> String {
    let mut out = String::new();
    out.push_str(&format!("order: {}\n", sys.ctx.order.name()));
    out.push_str(&sys.to_text());
    out
}

pub fn system_to_json(sys: &PolySystem) -> Value {
    json!({
        "vars": sys.ctx.vars,
        "params": sys.ctx.params,
        "order": sys.ctx.order.name(),
        "generators": sys.gens.iter().map(|g| poly_to_json(g, &sys.ctx)).collect::<Vec<_>>(),
    })
}

pub fn system_from_json(v: &Value) -> Result<PolySystem, String> {
    let strings = |key: &str| -> Result<Vec<String>, String> {
        v.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| format!("system: missing array '{key}'"))?
            .iter()
            .map(|s| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| format!("system: '{key}' entries must be strings"))
            })
            .collect()
    };
    let order = v
        .get("order")
        .and_then(Value::as_str)
        .and_then(MonomialOrder::parse)
        .ok_or("system: missing or unknown 'order'")?;
    let ctx = Context::new(strings("vars")?, strings("params")?, order);
    let gens = v
        .get("generators")
        .and_then(Value::as_array)
        .ok_or("system: missing array 'generators'")?
        .iter()
        .map(|g| poly_from_json(g, &ctx))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolySystem::new(ctx, gens))
}

fn lincomb_from_json(v: &Value, ctx: &Context) -> Result<LinComb, String> {
    let terms = v.as_array().ok_or("combination must be an array")?;
    let mut out = LinComb::zero();
    for t in terms {
        let i = t
            .get("index")
            .and_then(Value::as_u64)
            .ok_or("combination term: missing 'index'")?;
        let c = t
            .get("coefficient")
            .and_then(Value::as_str)
            .ok_or("combination term: missing 'coefficient'")?;
        out.add_term(
            i as usize,
            parse_polynomial(c, ctx).map_err(|e| e.to_string())?,
        );
    }
    Ok(out)
}

fn witness_to_json(w: &Witness, ctx: &Context) -> Value {
    json!({
        "degree": w.degree,
        "row": w.row.iter().map(|(m, c)| json!({
            "monomial": m.to_text(&ctx.vars),
            "coefficient": c.to_text(&ctx.params),
        })).collect::<Vec<_>>(),
        "polynomial": poly_to_json(&w.polynomial, ctx),
        "membership": w.membership.to_json(ctx),
    })
}

fn witness_from_json(v: &Value, ctx: &Context) -> Result<Witness, String> {
    let degree = v
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or("witness: missing 'degree'")? as u32;
    let mut row: Vec<(Monomial, Scalar)> = Vec::new();
    for entry in v
        .get("row")
        .and_then(Value::as_array)
        .ok_or("witness: missing array 'row'")?
    {
        let mtext = entry
            .get("monomial")
            .and_then(Value::as_str)
            .ok_or("witness row: missing 'monomial'")?;
        let p = parse_polynomial(mtext, ctx).map_err(|e| e.to_string())?;
        let (m, _) = p
            .terms()
            .next()
            .ok_or("witness row: monomial parses to zero")?;
        let ctext = entry
            .get("coefficient")
            .and_then(Value::as_str)
            .ok_or("witness row: missing 'coefficient'")?;
        let c = parse_scalar(ctext, &ctx.params).map_err(|e| e.to_string())?;
        row.push((m.clone(), c));
    }
    Ok(Witness {
        degree,
        row,
        polynomial: poly_from_json(
            v.get("polynomial").ok_or("witness: missing 'polynomial'")?,
            ctx,
        )?,
        membership: lincomb_from_json(
            v.get("membership").ok_or("witness: missing 'membership'")?,
            ctx,
        )?,
    })
}

pub fn detection_to_json(r: &DetectionResult, sys: &PolySystem) -> Value {
    let ctx = &sys.ctx;
    json!({
        "verdict": match r.verdict { Verdict::Yes => "yes", Verdict::No => "no" },
        "system": system_to_json(sys),
        "binomials": r.binomials.iter().map(|b| poly_to_json(b, ctx)).collect::<Vec<_>>(),
        "witness": r.witness.as_ref().map(|w| witness_to_json(w, ctx)),
        "trace": r.trace.iter().map(|l| json!({
            "degree": l.degree,
            "fmin_size": l.fmin_size,
            "rank": l.rank,
            "binomials_found": l.binomials_found,
            "absorbed": l.absorbed,
        })).collect::<Vec<_>>(),
        "certificate": r.certificate.as_ref().map(|c| c.to_json(ctx)),
    })
}

pub fn detection_from_json(v: &Value) -> Result<(DetectionResult, PolySystem), String> {
    let sys = system_from_json(v.get("system").ok_or("detection: missing 'system'")?)?;
    let ctx = &sys.ctx;
    let verdict = match v.get("verdict").and_then(Value::as_str) {
        Some("yes") => Verdict::Yes,
        Some("no") => Verdict::No,
        _ => return Err("detection: missing or unknown 'verdict'".into()),
    };
    let binomials = v
        .get("binomials")
        .and_then(Value::as_array)
        .ok_or("detection: missing array 'binomials'")?
        .iter()
        .map(|b| poly_from_json(b, ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let witness = match v.get("witness") {
        None | Some(Value::Null) => None,
        Some(w) => Some(witness_from_json(w, ctx)?),
    };
    let mut trace = Vec::new();
    for l in v
        .get("trace")
        .and_then(Value::as_array)
        .ok_or("detection: missing array 'trace'")?
    {
        let field = |key: &str| -> Result<u64, String> {
            l.get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| format!("trace entry: missing '{key}'"))
        };
        trace.push(IterationLog {
            degree: field("degree")? as u32,
            fmin_size: field("fmin_size")? as usize,
            rank: field("rank")? as usize,
            binomials_found: field("binomials_found")? as usize,
            absorbed: l
                .get("absorbed")
                .and_then(Value::as_array)
                .ok_or("trace entry: missing 'absorbed'")?
                .iter()
                .map(|i| {
                    i.as_u64()
                        .map(|n| n as usize)
                        .ok_or("trace entry: bad index".to_string())
                })
                .collect::<Result<Vec<_>, _>>()?,
        });
    }
    let certificate = match v.get("certificate") {
        None | Some(Value::Null) => None,
        Some(c) => Some(Certificate::from_json(c, ctx)?),
    };
    Ok((
        DetectionResult {
            verdict,
            binomials,
            witness,
            trace,
            certificate,
        },
        sys,
    ))
}

pub fn verdict_name(v: PipelineVerdict) -> &'static str {
    match v {
        PipelineVerdict::Binomial => "binomial",
        PipelineVerdict::NotBinomialProven => "not-binomial",
        PipelineVerdict::Inconclusive => "inconclusive",
    }
}

pub fn pipeline_to_json(r: &PipelineReport) -> Value {
    let ctx = &r.system.ctx;
    json!({
        "verdict": verdict_name(r.verdict),
        "system": system_to_json(&r.system),
        "stages": r.stages.iter().map(|s| json!({
            "stage": s.stage,
            "outcome": s.outcome,
        })).collect::<Vec<_>>(),
        "certificate": r.certificate.as_ref().map(|c| c.to_json(ctx)),
        "witness": r.witness.as_ref().map(|w| witness_to_json(w, ctx)),
    })
}

pub fn pipeline_from_json(v: &Value) -> Result<PipelineReport, String> {
    let system = system_from_json(v.get("system").ok_or("pipeline: missing 'system'")?)?;
    let verdict = match v.get("verdict").and_then(Value::as_str) {
        Some("binomial") => PipelineVerdict::Binomial,
        Some("not-binomial") => PipelineVerdict::NotBinomialProven,
        Some("inconclusive") => PipelineVerdict::Inconclusive,
        _ => return Err("pipeline: missing or unknown 'verdict'".into()),
    };
    let mut stages = Vec::new();
    for s in v
        .get("stages")
        .and_then(Value::as_array)
        .ok_or("pipeline: missing array 'stages'")?
    {
        let field = |key: &str| -> Result<String, String> {
            s.get(key)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| format!("stage entry: missing '{key}'"))
        };
        stages.push(StageReport {
            stage: field("stage")?,
            outcome: field("outcome")?,
        });
    }
    let certificate = match v.get("certificate") {
        None | Some(Value::Null) => None,
        Some(c) => Some(Certificate::from_json(c, &system.ctx)?),
    };
    let witness = match v.get("witness") {
        None | Some(Value::Null) => None,
        Some(w) => Some(witness_from_json(w, &system.ctx)?),
    };
    Ok(PipelineReport {
        verdict,
        system,
        certificate,
        stages,
        witness,
    })
}

/// Self-contained certificate file: the two generating sets plus the linear
/// combinations connecting them, all in one JSON document.
pub fn certificate_file_to_json(
    originals: &PolySystem,
    derived: &[Polynomial],
    cert: &Certificate,
) -> Value {
    let ctx = &originals.ctx;
    json!({
        "system": system_to_json(originals),
        "derived": derived.iter().map(|g| poly_to_json(g, ctx)).collect::<Vec<_>>(),
        "certificate": cert.to_json(ctx),
    })
}

pub fn certificate_file_from_json(
    v: &Value,
) -> Result<(PolySystem, Vec<Polynomial>, Certificate), String> {
    let sys = system_from_json(v.get("system").ok_or("certificate file: missing 'system'")?)?;
    let derived = v
        .get("derived")
        .and_then(Value::as_array)
        .ok_or("certificate file: missing array 'derived'")?
        .iter()
        .map(|g| poly_from_json(g, &sys.ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let cert = Certificate::from_json(
        v.get("certificate")
            .ok_or("certificate file: missing 'certificate'")?,
        &sys.ctx,
    )?;
    Ok((sys, derived, cert))
}

/// Parse a system file, then apply a caller-supplied default monomial order
/// if the file itself did not pin one with an `order:` header.
pub fn parse_system_with_default_order(
    src: &str,
    default: Option<MonomialOrder>,
) -> Result<PolySystem, ParseError> {
    let mut sys = parse_system(src)?;
    let file_pins_order = src
        .lines()
        .any(|l| l.split('#').next().unwrap_or("").trim_start().starts_with("order:"));
    if let (false, Some(o)) = (file_pins_order, default) {
        // Term storage is order-independent; switching the order only
        // changes leading-term selection and printing.
        sys.ctx.order = o;
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::detect_binomial_homogeneous;
    use crate::simplify::{run_recipe, RecipeOptions};

    fn sys(src: &str) -> PolySystem {
        parse_system(src).unwrap()
    }

    #[test]
    fn detection_json_round_trips() {
        for src in [
            "vars: x y z w\nx - y\nz - w\nx*z - y*w\n",
            "vars: x y z\nx + y + z\n",
        ] {
            let s = sys(src);
            let r = detect_binomial_homogeneous(&s).unwrap();
            let j = detection_to_json(&r, &s);
            let (r2, s2) = detection_from_json(&j).unwrap();
            assert_eq!(detection_to_json(&r2, &s2), j);
        }
    }

    #[test]
    fn pipeline_json_round_trips() {
        let s = sys("vars: x y\nparams: a\nx - a*y\nx*y - y^2/a\nx^2 + x\n");
        let r = run_recipe(&s, &RecipeOptions::default());
        let j = pipeline_to_json(&r);
        let r2 = pipeline_from_json(&j).unwrap();
        assert_eq!(pipeline_to_json(&r2), j);
        assert_eq!(r2.verdict, r.verdict);
        assert_eq!(r2.system.gens, r.system.gens);
    }

    #[test]
    fn certificate_file_round_trips_and_verifies() {
        let s = sys("vars: x y\n2*x - y\ny\n");
        let r = run_recipe(&s, &RecipeOptions::default());
        let cert = r.certificate.unwrap();
        let j = certificate_file_to_json(&s, &r.system.gens, &cert);
        let (s2, derived, cert2) = certificate_file_from_json(&j).unwrap();
        assert!(cert2.verify(&s2.gens, &derived));
    }

    #[test]
    fn default_order_applies_only_without_header() {
        let plain = parse_system_with_default_order("vars: x y\nx - y\n", Some(MonomialOrder::Lex))
            .unwrap();
        assert_eq!(plain.ctx.order, MonomialOrder::Lex);
        let pinned = parse_system_with_default_order(
            "vars: x y\norder: grevlex\nx - y\n",
            Some(MonomialOrder::Lex),
        )
        .unwrap();
        assert_eq!(pinned.ctx.order, MonomialOrder::Grevlex);
    }

    #[test]
    fn system_text_round_trips() {
        let s = sys("vars: x y\nparams: a\norder: lex\nx - a*y\n");
        let t = system_to_text(&s);
        let s2 = parse_system(&t).unwrap();
        assert_eq!(s2.ctx, s.ctx);
        assert_eq!(s2.gens, s.gens);
    }
}
