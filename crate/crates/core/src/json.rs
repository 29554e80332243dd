//! JSON encodings.
//!
//! Rationals are strings `"a/b"`, prime-field elements are integers and
//! extension elements are little-endian coordinate arrays. Polynomials are
//! term lists `{"exps": [...], "coef": ...}` in column order.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::dual_certificates::{DualCertificate, Verdict, Violation};
use crate::error::{Error, Result};
use crate::polynomials::{Monomial, MultiPoly, Point};
use crate::scalars::{Field, FieldCtx, FieldElement, FieldKind};

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn get_u64(v: &Value, key: &str) -> Result<u64> {
    get(v, key)?
        .as_u64()
        .ok_or_else(|| bad(format!("`{key}` must be a nonnegative integer")))
}

fn get_array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    get(v, key)?
        .as_array()
        .ok_or_else(|| bad(format!("`{key}` must be an array")))
}

pub fn field_to_json(ctx: &Field) -> Value {
    match ctx.kind() {
        FieldKind::Rational => json!({"kind": "rational", "spec": "q"}),
        FieldKind::Prime { p } => json!({"kind": "prime", "spec": ctx.spec(), "p": p, "order": p}),
        FieldKind::Extension { p, e, modulus } => json!({
            "kind": "extension",
            "spec": ctx.spec(),
            "p": p,
            "e": e,
            "modulus": modulus,
            "order": ctx.order(),
        }),
    }
}

/// Accepts a field object, or a bare spec string.
pub fn field_from_json(v: &Value) -> Result<Field> {
    if let Some(spec) = v.as_str() {
        return FieldCtx::from_spec(spec);
    }
    match get(v, "kind")?.as_str() {
        Some("rational") => Ok(FieldCtx::rational()),
        Some("prime") => FieldCtx::prime(get_u64(v, "p")?),
        Some("extension") => {
            let modulus = get_array(v, "modulus")?
                .iter()
                .map(|c| c.as_u64().ok_or_else(|| bad("modulus coefficients must be integers")))
                .collect::<Result<Vec<_>>>()?;
            FieldCtx::extension(get_u64(v, "p")?, modulus)
        }
        _ => Err(bad("`kind` must be rational, prime or extension")),
    }
}

pub fn element_to_json(a: &FieldElement) -> Value {
    if let Some(r) = a.as_rational() {
        return Value::String(format!("{}/{}", r.numer(), r.denom()));
    }
    match a.ctx().kind() {
        FieldKind::Prime { .. } => json!(a.index()),
        _ => json!(a.coords()),
    }
}

pub fn element_from_json(ctx: &Field, v: &Value) -> Result<FieldElement> {
    match v {
        Value::String(s) => {
            let (num, den) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            let parse = |t: &str| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| bad(format!("bad rational `{s}`")))
            };
            FieldElement::from_ratio(ctx, &parse(num)?, &parse(den)?)
        }
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(FieldElement::from_i64(ctx, i)),
            None => Err(bad(format!("bad integer {n}"))),
        },
        Value::Array(cs) => {
            let coords = cs
                .iter()
                .map(|c| c.as_u64().ok_or_else(|| bad("coordinates must be integers")))
                .collect::<Result<Vec<_>>>()?;
            FieldElement::from_coeffs(ctx, &coords)
        }
        _ => Err(bad(format!("cannot read a field element from {v}"))),
    }
}

pub fn point_to_json(p: &Point) -> Value {
    Value::Array(p.coords().iter().map(element_to_json).collect())
}

pub fn point_from_json(ctx: &Field, v: &Value) -> Result<Point> {
    let coords = v
        .as_array()
        .ok_or_else(|| bad("a point is an array of coordinates"))?
        .iter()
        .map(|c| element_from_json(ctx, c))
        .collect::<Result<Vec<_>>>()?;
    Point::new(ctx, coords)
}

pub fn poly_to_json(f: &MultiPoly) -> Value {
    Value::Array(
        f.terms_column_order()
            .into_iter()
            .map(|(m, c)| json!({"exps": m.exps(), "coef": element_to_json(c)}))
            .collect(),
    )
}

/// Accepts a term list, or a string in the text grammar.
pub fn poly_from_json(ctx: &Field, n: usize, v: &Value) -> Result<MultiPoly> {
    if let Some(text) = v.as_str() {
        return crate::polynomials::parse_poly(text, n, ctx);
    }
    let terms = v
        .as_array()
        .ok_or_else(|| bad("a polynomial is a term list or a string"))?
        .iter()
        .map(|t| {
            let exps = get_array(t, "exps")?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .and_then(|e| u32::try_from(e).ok())
                        .ok_or_else(|| bad("exponents must be small integers"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((Monomial::new(exps), element_from_json(ctx, get(t, "coef")?)?))
        })
        .collect::<Result<Vec<_>>>()?;
    MultiPoly::from_terms(ctx, n, terms)
}

pub fn polys_to_json(fs: &[MultiPoly]) -> Value {
    Value::Array(fs.iter().map(poly_to_json).collect())
}

pub fn certificate_to_json(c: &DualCertificate) -> Value {
    json!({
        "field": field_to_json(&c.ctx),
        "n": c.n,
        "d": c.d,
        "points": c.points.iter().map(point_to_json).collect::<Vec<_>>(),
        "polys": polys_to_json(&c.polys),
        "diagonal": c.diagonal.iter().map(element_to_json).collect::<Vec<_>>(),
    })
}

pub fn certificate_from_json(v: &Value) -> Result<DualCertificate> {
    let ctx = field_from_json(get(v, "field")?)?;
    let n = get_u64(v, "n")? as usize;
    let d = u32::try_from(get_u64(v, "d")?).map_err(|_| bad("`d` out of range"))?;
    let points = get_array(v, "points")?
        .iter()
        .map(|p| point_from_json(&ctx, p))
        .collect::<Result<Vec<_>>>()?;
    let polys = get_array(v, "polys")?
        .iter()
        .map(|f| poly_from_json(&ctx, n, f))
        .collect::<Result<Vec<_>>>()?;
    let diagonal = get_array(v, "diagonal")?
        .iter()
        .map(|c| element_from_json(&ctx, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(DualCertificate {
        ctx,
        n,
        d,
        points,
        polys,
        diagonal,
    })
}

pub fn verdict_to_json(v: &Verdict) -> Value {
    let failure = v.first_failure.as_ref().map(|f| {
        let mut m = Map::new();
        let (kind, fields): (&str, Vec<(&str, Value)>) = match f {
            Violation::Malformed(msg) => ("malformed", vec![("message", json!(msg))]),
            Violation::DuplicatePoints { i, j } => ("duplicate_points", vec![("i", json!(i)), ("j", json!(j))]),
            Violation::DegreeExceeded { i, degree } => {
                ("degree_exceeded", vec![("i", json!(i)), ("degree", json!(degree))])
            }
            Violation::OffDiagonal { i, j } => ("off_diagonal_nonzero", vec![("i", json!(i)), ("j", json!(j))]),
            Violation::ZeroDiagonal { i } => ("diagonal_zero", vec![("i", json!(i))]),
            Violation::DiagonalMismatch { i } => ("diagonal_mismatch", vec![("i", json!(i))]),
        };
        m.insert("kind".into(), json!(kind));
        for (k, val) in fields {
            m.insert(k.into(), val);
        }
        Value::Object(m)
    });
    json!({"valid": v.valid, "first_failure": failure})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_certificates::{greedy_point_search, solve_certificate, verify_certificate, SearchOptions};
    use crate::polynomials::parse_poly;
    use crate::scalars::make_extension;

    #[test]
    fn fields_round_trip() {
        for ctx in [
            FieldCtx::rational(),
            FieldCtx::prime(7).unwrap(),
            make_extension(2, 4).unwrap(),
            make_extension(3, 2).unwrap(),
        ] {
            assert_eq!(field_from_json(&field_to_json(&ctx)).unwrap(), ctx);
            assert_eq!(field_from_json(&json!(ctx.spec())).unwrap(), ctx);
        }
        assert_eq!(
            field_to_json(&make_extension(2, 4).unwrap())["modulus"],
            json!([1, 0, 0, 1, 1])
        );
    }

    #[test]
    fn element_encodings() {
        let q = FieldCtx::rational();
        let half = parse_poly("1/2", 0, &q).unwrap().coeff(&Monomial::one(0));
        assert_eq!(element_to_json(&half), json!("1/2"));
        assert_eq!(element_to_json(&FieldElement::from_i64(&q, -3)), json!("-3/1"));
        assert_eq!(element_from_json(&q, &json!("-3")).unwrap(), FieldElement::from_i64(&q, -3));
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(element_to_json(&FieldElement::from_i64(&f7, -1)), json!(6));
        let f4 = make_extension(2, 2).unwrap();
        let t = FieldElement::from_coeffs(&f4, &[0, 1]).unwrap();
        assert_eq!(element_to_json(&t), json!([0, 1]));
        assert_eq!(element_from_json(&f4, &json!([0, 1])).unwrap(), t);
        assert!(element_from_json(&f7, &json!({})).is_err());
    }

    #[test]
    fn polys_round_trip() {
        let f9 = make_extension(3, 2).unwrap();
        let f = parse_poly("[1,2]*X1^2*X2 - X2 + [0,1]", 2, &f9).unwrap();
        let v = poly_to_json(&f);
        assert_eq!(v[0]["exps"], json!([0, 0]));
        assert_eq!(poly_from_json(&f9, 2, &v).unwrap(), f);
        assert_eq!(poly_from_json(&f9, 2, &json!("[1,2]*X1^2*X2 - X2 + [0,1]")).unwrap(), f);
    }

    #[test]
    fn certificates_round_trip() {
        for ctx in [FieldCtx::rational(), FieldCtx::prime(5).unwrap(), make_extension(2, 2).unwrap()] {
            let r = greedy_point_search(&ctx, 2, 2, 11, 1000, &SearchOptions::default()).unwrap();
            let c = solve_certificate(&ctx, 2, &r.points, 2).unwrap();
            let back = certificate_from_json(&certificate_to_json(&c)).unwrap();
            assert_eq!(back, c);
            assert!(verify_certificate(&back).valid);
        }
    }

    #[test]
    fn verdict_encoding() {
        let v = Verdict {
            valid: false,
            first_failure: Some(Violation::OffDiagonal { i: 1, j: 0 }),
        };
        assert_eq!(
            verdict_to_json(&v),
            json!({"valid": false, "first_failure": {"kind": "off_diagonal_nonzero", "i": 1, "j": 0}})
        );
    }
}
