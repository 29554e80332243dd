use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use mingens_core::constructions::{char0_simplex, q_analog_line, two_var_triangle, ConstructionResult, Family};
use mingens_core::dual_certificates::{
    greedy_point_search, solve_certificate, verify_certificate, SearchOptions,
};
use mingens_core::generator_count::{
    sharp_instance, telescope_generators, verify_monomial_lower_bound, WorkingDegree,
};
use mingens_core::groebner::{buchberger, membership};
use mingens_core::json::{
    certificate_from_json, certificate_to_json, element_to_json, field_to_json, point_to_json, poly_from_json,
    poly_to_json, polys_to_json, verdict_to_json,
};
use mingens_core::norm_lift::{
    attempt_seed, conjecture_params, galois_attempt, galois_search, instance_from_attempt,
    verify_norm_instance, ConjectureParams, Embedding, NormInstance, NormVerdict, SearchStats,
};
use mingens_core::polynomials::{parse_element, parse_poly};
use mingens_core::scalars::primitive_element;
use mingens_core::univariate::{
    count_irreducibles, cumulative_count, extremal_set, verify_univariate_minimality,
};
use mingens_core::{Error, Field, FieldCtx, FieldElement, MultiPoly};

use crate::args::*;
use crate::{batch, exit, manifest, table, Failure, Response};

pub(crate) fn dispatch(cmd: Command) -> Result<Response, Failure> {
    match cmd {
        Command::MuBound(a) => mu_bound(a),
        Command::Certificate(CertificateCmd::Search(a)) => certificate_search(a),
        Command::Certificate(CertificateCmd::Verify(a)) => certificate_verify(a),
        Command::Univariate(UnivariateCmd::Extremal(a)) => univariate_extremal(a),
        Command::Univariate(UnivariateCmd::Count(a)) => univariate_count(a),
        Command::Conjecture(ConjectureCmd::Probe(a)) => conjecture_probe(a),
        Command::Construct(ConstructCmd::Simplex(a)) => construct_simplex(a),
        Command::Construct(ConstructCmd::Qline(a)) => construct_qline(a),
        Command::Construct(ConstructCmd::Triangle(a)) => construct_triangle(a),
        Command::Oracle(OracleCmd::Gb(a)) => oracle_gb(a),
        Command::Oracle(OracleCmd::Member(a)) => oracle_member(a),
        Command::Batch(a) => batch::run_batch(a),
    }
}

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("serializable arguments")
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_gens(ctx: &Field, n: usize, gens: &GensArgs) -> Result<Vec<MultiPoly>, Failure> {
    let mut out = Vec::new();
    if let Some(path) = &gens.gens {
        let text = read_file(path)?;
        match serde_json::from_str::<Value>(&text) {
            Ok(v) => {
                let list = v.get("polys").unwrap_or(&v);
                let items = list
                    .as_array()
                    .ok_or_else(|| Failure::usage(format!("{}: expected a JSON array of polynomials", path.display())))?;
                for item in items {
                    out.push(poly_from_json(ctx, n, item)?);
                }
            }
            Err(_) => {
                for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
                    out.push(parse_poly(line, n, ctx)?);
                }
            }
        }
    }
    for p in &gens.poly {
        out.push(parse_poly(p, n, ctx)?);
    }
    Ok(out)
}

/// Integers that fit in `u64` stay numbers; larger ones become strings.
fn big(n: &impl ToString) -> Value {
    let s = n.to_string();
    match s.parse::<u64>() {
        Ok(v) => json!(v),
        Err(_) => json!(s),
    }
}

fn mu_bound(a: MuBoundArgs) -> Result<Response, Failure> {
    let ctx = FieldCtx::from_spec(&a.field)?;
    let gens = if a.sharp {
        sharp_instance(&ctx, a.n, a.d)
    } else {
        load_gens(&ctx, a.n, &a.gens)?
    };
    let working = a.working_degree.map_or(WorkingDegree::Auto, WorkingDegree::Fixed);
    let report = telescope_generators(&ctx, a.n, &gens, a.d, working)?;
    let mut body = json!({
        "input": polys_to_json(&gens),
        "profile": {
            "c": report.profile.c,
            "working_degree": report.profile.working_degree,
            "stabilized": report.profile.stabilized,
        },
        "generators": polys_to_json(&report.generators),
        "added_at": report.added_at,
        "count": report.generators.len(),
        "claimed_bound": report.claimed_bound,
    });
    let mut outcome = json!({
        "count": report.generators.len(),
        "claimed_bound": report.claimed_bound,
        "stabilized": report.profile.stabilized,
    });
    if a.sharp {
        let ok = verify_monomial_lower_bound(a.n, a.d, &report.generators);
        body["lower_bound_verified"] = json!(ok);
        outcome["lower_bound_verified"] = json!(ok);
    }
    body["manifest"] = manifest("mu-bound", params(&a), Some(field_to_json(&ctx)), None, outcome);
    Ok(Response::ok(body))
}

fn certificate_search(a: SearchArgs) -> Result<Response, Failure> {
    let ctx = FieldCtx::from_spec(&a.field)?;
    let options = SearchOptions {
        grid_size: a.grid,
        structured: !a.no_structured,
    };
    let found = greedy_point_search(&ctx, a.n, a.d, a.seed, a.budget, &options)?;
    let cert = solve_certificate(&ctx, a.n, &found.points, a.d)?;
    let verdict = verify_certificate(&cert);
    let code = if verdict.valid { exit::OK } else { exit::VERIFICATION };
    let outcome = json!({"points": cert.len(), "trials": found.trials, "valid": verdict.valid});
    let body = json!({
        "manifest": manifest("certificate search", params(&a), Some(field_to_json(&ctx)), Some(a.seed), outcome),
        "certificate": certificate_to_json(&cert),
        "trials": found.trials,
        "verdict": verdict_to_json(&verdict),
    });
    Ok(Response { body, code, table: None })
}

fn certificate_verify(a: VerifyArgs) -> Result<Response, Failure> {
    let text = read_file(&a.file)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", a.file.display())))?;
    let cert = certificate_from_json(v.get("certificate").unwrap_or(&v))?;
    let verdict = verify_certificate(&cert);
    let code = if verdict.valid { exit::OK } else { exit::VERIFICATION };
    let outcome = json!({"points": cert.len(), "valid": verdict.valid});
    let body = json!({
        "manifest": manifest("certificate verify", params(&a), Some(field_to_json(&cert.ctx)), None, outcome),
        "verdict": verdict_to_json(&verdict),
    });
    Ok(Response { body, code, table: None })
}

fn univariate_extremal(a: ExtremalArgs) -> Result<Response, Failure> {
    let r = extremal_set(a.q, a.d)?;
    let v = verify_univariate_minimality(&r.generators)?;
    let field = r.generators.first().map(|g| field_to_json(g.ctx()));
    let outcome = json!({"m": r.m, "max_degree": r.max_degree, "minimal": v.minimal});
    let body = json!({
        "manifest": manifest("univariate extremal", params(&a), field, None, outcome),
        "q": r.q,
        "d": r.d,
        "m": r.m,
        "max_degree": r.max_degree,
        "degrees_used": r.degrees_used,
        "degenerate": r.degenerate,
        "irreducibles": polys_to_json(&r.irreducibles),
        "generators": polys_to_json(&r.generators),
        "minimality": {
            "generates_unit": v.generates_unit,
            "minimal": v.minimal,
            "redundant": v.redundant,
        },
    });
    Ok(Response::ok(body))
}

fn univariate_count(a: CountArgs) -> Result<Response, Failure> {
    let mut rows = Vec::new();
    let mut cells = Vec::new();
    for k in 1..=a.max_degree {
        let count = count_irreducibles(a.q, k)?;
        let cumulative = cumulative_count(a.q, k)?;
        cells.push(vec![k.to_string(), count.to_string(), cumulative.to_string()]);
        rows.push(json!({"k": k, "count": big(&count), "cumulative": big(&cumulative)}));
    }
    let outcome = json!({"rows": rows.len()});
    let body = json!({
        "manifest": manifest("univariate count", params(&a), None, None, outcome),
        "rows": rows,
    });
    let table = table::render(&["k", "p_q(k)", "P_q(k)"], &cells);
    Ok(Response {
        body,
        code: exit::OK,
        table: Some(table),
    })
}

fn params_json(p: &ConjectureParams) -> Value {
    json!({
        "q": p.q,
        "d": p.d,
        "n": p.n,
        "k": p.k,
        "d_prime": p.d_prime,
        "target_size": p.target_size,
    })
}

fn stats_json(s: &SearchStats) -> Value {
    json!({
        "attempts": s.attempts,
        "galois_rejections": s.galois_rejections,
        "trials": s.trials,
        "seeds": s.seeds,
        "exhausted": s.exhausted,
    })
}

fn norm_verdict_json(v: &NormVerdict) -> Value {
    json!({
        "size_ok": v.size_ok,
        "degree_ok": v.degree_ok,
        "norm_ok": v.norm_ok,
        "off_diagonal_ok": v.off_diagonal_ok,
        "diagonal_ok": v.diagonal_ok,
        "valid": v.valid,
    })
}

fn instance_json(inst: &NormInstance, verdict: &NormVerdict) -> Value {
    json!({
        "params": params_json(&inst.params),
        "base": field_to_json(&inst.base),
        "extension": field_to_json(&inst.extension),
        "points": inst.points.iter().map(point_to_json).collect::<Vec<_>>(),
        "lifted_g": polys_to_json(&inst.lifted_g),
        "descended_f": polys_to_json(&inst.descended_f),
        "galois_ok": inst.galois_ok,
        "stats": stats_json(&inst.stats),
        "verification": norm_verdict_json(verdict),
    })
}

fn conjecture_probe(a: ProbeArgs) -> Result<Response, Failure> {
    let p = conjecture_params(a.q, a.d, a.n)?;
    let emb = Embedding::new(a.q, p.k)?;
    let field = Some(field_to_json(emb.base()));
    if let Some(n) = a.attempts {
        return probe_attempts(&a, &p, &emb, n, field);
    }
    let outcome = galois_search(&p, &emb, a.seed, a.budget)?;
    match outcome.accepted {
        Some(attempt) => {
            let inst = instance_from_attempt(&p, &emb, attempt, outcome.stats)?;
            let verdict = verify_norm_instance(&inst)?;
            let code = if verdict.valid { exit::OK } else { exit::VERIFICATION };
            let summary = json!({
                "found": true,
                "size": inst.descended_f.len(),
                "attempts": inst.stats.attempts,
                "valid": verdict.valid,
            });
            let body = json!({
                "manifest": manifest("conjecture probe", params(&a), field, Some(a.seed), summary),
                "instance": instance_json(&inst, &verdict),
            });
            Ok(Response { body, code, table: None })
        }
        None => {
            let summary = json!({"found": false, "attempts": outcome.stats.attempts});
            let body = json!({
                "manifest": manifest("conjecture probe", params(&a), field, Some(a.seed), summary),
                "params": params_json(&p),
                "stats": stats_json(&outcome.stats),
            });
            Ok(Response {
                body,
                code: exit::BUDGET,
                table: None,
            })
        }
    }
}

enum AttemptResult {
    Accepted { valid: bool, trials: u64 },
    Rejected { conjugate: u32, trials: u64 },
    Exhausted,
}

fn probe_attempts(
    a: &ProbeArgs,
    p: &ConjectureParams,
    emb: &Embedding,
    attempts: u64,
    field: Option<Value>,
) -> Result<Response, Failure> {
    let results = (0..attempts)
        .into_par_iter()
        .map(|i| {
            let seed = attempt_seed(a.seed, i);
            match galois_attempt(p, emb, seed, a.budget) {
                Ok(att) => {
                    let trials = att.trials;
                    match att.galois_failure {
                        Some((_, r)) => Ok(AttemptResult::Rejected { conjugate: r, trials }),
                        None => {
                            let inst = instance_from_attempt(p, emb, att, SearchStats::default())?;
                            let valid = verify_norm_instance(&inst)?.valid;
                            Ok(AttemptResult::Accepted { valid, trials })
                        }
                    }
                }
                Err(Error::BudgetExhausted { .. }) => Ok(AttemptResult::Exhausted),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let (mut accepted, mut verified, mut rejected, mut exhausted, mut trials) = (0u64, 0u64, 0u64, 0u64, 0u64);
    let mut by_conjugate: BTreeMap<u32, u64> = BTreeMap::new();
    for r in &results {
        match *r {
            AttemptResult::Accepted { valid, trials: t } => {
                accepted += 1;
                verified += valid as u64;
                trials += t;
            }
            AttemptResult::Rejected { conjugate, trials: t } => {
                rejected += 1;
                *by_conjugate.entry(conjugate).or_default() += 1;
                trials += t;
            }
            AttemptResult::Exhausted => exhausted += 1,
        }
    }
    let rate = if attempts == 0 { 0.0 } else { accepted as f64 / attempts as f64 };
    let all_verified = verified == accepted;
    let summary = json!({
        "attempts": attempts,
        "accepted": accepted,
        "acceptance_rate": rate,
        "all_accepted_verified": all_verified,
    });
    let body = json!({
        "manifest": manifest("conjecture probe", params(a), field, Some(a.seed), summary),
        "params": params_json(p),
        "attempts": attempts,
        "accepted": accepted,
        "accepted_verified": verified,
        "all_accepted_verified": all_verified,
        "galois_rejections": rejected,
        "rejections_by_conjugate": by_conjugate.iter().map(|(r, c)| json!({"r": r, "count": c})).collect::<Vec<_>>(),
        "exhausted": exhausted,
        "trials": trials,
        "acceptance_rate": rate,
    });
    let code = if all_verified { exit::OK } else { exit::VERIFICATION };
    Ok(Response { body, code, table: None })
}

fn construction_response(command: &str, args: Value, r: &ConstructionResult) -> Response {
    let verdict = verify_certificate(&r.certificate);
    let family = match r.family {
        Family::Char0Simplex => "char0_simplex",
        Family::QAnalogLine => "q_analog_line",
        Family::TwoVarTriangle => "two_var_triangle",
    };
    let parameters: serde_json::Map<String, Value> = r
        .parameters
        .iter()
        .map(|(k, v)| (k.to_string(), element_to_json(v)))
        .collect();
    let outcome = json!({"family": family, "size": r.certificate.len(), "valid": verdict.valid});
    let body = json!({
        "manifest": manifest(command, args, Some(field_to_json(&r.certificate.ctx)), None, outcome),
        "family": family,
        "parameters": parameters,
        "certificate": certificate_to_json(&r.certificate),
        "factors": r.factors.iter().map(|fs| polys_to_json(fs)).collect::<Vec<_>>(),
        "verdict": verdict_to_json(&verdict),
    });
    let code = if verdict.valid { exit::OK } else { exit::VERIFICATION };
    Response { body, code, table: None }
}

fn construct_simplex(a: SimplexArgs) -> Result<Response, Failure> {
    let ctx = FieldCtx::from_spec(&a.field)?;
    let r = char0_simplex(a.n, a.d, &ctx)?;
    Ok(construction_response("construct simplex", params(&a), &r))
}

/// Least primitive element, or 2 over `Q`.
fn default_generator(ctx: &Field) -> Result<FieldElement, Failure> {
    if ctx.is_finite() {
        Ok(primitive_element(ctx)?)
    } else {
        Ok(FieldElement::from_i64(ctx, 2))
    }
}

fn construct_qline(a: QlineArgs) -> Result<Response, Failure> {
    let ctx = FieldCtx::from_spec(&a.field)?;
    let zeta = match &a.zeta {
        Some(z) => parse_element(z, &ctx)?,
        None => default_generator(&ctx)?,
    };
    let r = q_analog_line(a.d, &zeta)?;
    Ok(construction_response("construct qline", params(&a), &r))
}

fn construct_triangle(a: TriangleArgs) -> Result<Response, Failure> {
    let ctx = FieldCtx::from_spec(&a.field)?;
    let x = match &a.x {
        Some(x) => parse_element(x, &ctx)?,
        None => FieldElement::one(&ctx),
    };
    let y = match &a.y {
        Some(y) => parse_element(y, &ctx)?,
        None => default_generator(&ctx)?,
    };
    let r = two_var_triangle(a.d, &x, &y)?;
    Ok(construction_response("construct triangle", params(&a), &r))
}

fn oracle_gb(a: OracleGbArgs) -> Result<Response, Failure> {
    let ctx = FieldCtx::from_spec(&a.field)?;
    let gens = load_gens(&ctx, a.n, &a.gens)?;
    let gb = buchberger(&ctx, a.n, &gens)?;
    let outcome = json!({"size": gb.basis().len(), "unit_ideal": gb.is_unit_ideal()});
    let body = json!({
        "manifest": manifest("oracle gb", params(&a), Some(field_to_json(&ctx)), None, outcome),
        "basis": polys_to_json(gb.basis()),
        "unit_ideal": gb.is_unit_ideal(),
    });
    Ok(Response::ok(body))
}

fn oracle_member(a: OracleMemberArgs) -> Result<Response, Failure> {
    let ctx = FieldCtx::from_spec(&a.field)?;
    let gens = load_gens(&ctx, a.n, &a.gens)?;
    let f = parse_poly(&a.f, a.n, &ctx)?;
    let gb = buchberger(&ctx, a.n, &gens)?;
    let member = membership(&f, &gb)?;
    let body = json!({
        "manifest": manifest("oracle member", params(&a), Some(field_to_json(&ctx)), None, json!({"member": member})),
        "f": poly_to_json(&f),
        "member": member,
    });
    Ok(Response::ok(body))
}
