//! JSON encodings of the algebraic objects and parsing of group files.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use twistzeta_core::chars::CharTable;
use twistzeta_core::cohml::{Cocycle1, H2ClassCertificate};
use twistzeta_core::cyclo::{Cyclotomic, RootOfUnity};
use twistzeta_core::group::{FiniteGroup, GroupSpec, Subgroup};
use twistzeta_core::twist::{lin_quotient, GammaGroup};
use twistzeta_core::zeta::DirichletPoly;

use crate::error::CliError;

pub const SCHEMA: &str = "twistzeta/1";

fn bigint(a: &BigInt) -> Value {
    match a.to_i64() {
        Some(v) => json!(v),
        None => json!(a.to_string()),
    }
}

pub fn cyclotomic(c: &Cyclotomic) -> Value {
    let coeffs: Vec<String> = c.coeffs().iter().map(|q| q.to_string()).collect();
    json!({ "m": c.modulus(), "c": coeffs })
}

pub fn root_of_unity(w: &RootOfUnity) -> Value {
    json!({ "m": w.modulus(), "k": w.exponent() })
}

pub fn poly(p: &DirichletPoly) -> Value {
    let terms: Vec<Value> = p.terms().map(|(n, a)| json!([n, bigint(a)])).collect();
    json!({ "terms": terms })
}

pub fn subgroup(g: &FiniteGroup, s: &Subgroup) -> Value {
    let gens: Vec<String> = s.gens().into_iter().map(|x| g.label(x)).collect();
    json!({ "order": s.order(), "gens": gens })
}

pub fn char_table(g: &FiniteGroup, t: &CharTable) -> Value {
    let classes: Vec<Value> = t
        .classes
        .iter()
        .map(|c| {
            let rep = t.domain.members()[c[0]] as usize;
            json!({ "rep": rep, "label": g.label(rep), "size": c.len() })
        })
        .collect();
    let rows: Vec<Value> = t
        .chars
        .iter()
        .map(|ch| {
            let values: Vec<Value> = t.classes.iter().map(|c| cyclotomic(&ch.values[c[0]])).collect();
            json!({ "degree": ch.degree, "values": values })
        })
        .collect();
    json!({ "order": t.domain.order(), "classes": classes, "rows": rows })
}

/// Ids of the members of `gamma` in the enumeration of `Lin(K/N)`.
pub fn gamma_ids(g: &FiniteGroup, gamma: &GammaGroup, n: &Subgroup) -> Vec<usize> {
    let all: Vec<_> = lin_quotient(g, &gamma.k, n).into_iter().map(|l| l.reduced()).collect();
    gamma
        .members
        .iter()
        .map(|nu| {
            let r = nu.reduced();
            all.iter().position(|x| *x == r).expect("Gamma lies in Lin(K/N)")
        })
        .collect()
}

pub fn certificate(c: &H2ClassCertificate) -> Value {
    let gens: Vec<Value> = c
        .gens
        .iter()
        .map(|chain| Value::Array(chain.iter().map(|(x, y, k)| json!([x, y, bigint(k)])).collect()))
        .collect();
    let evals: Vec<Value> = c.evals.iter().map(cyclotomic).collect();
    json!({ "gens": gens, "evals": evals })
}

/// A cocycle as exponents over the common modulus of its values.
pub fn token(c: &Cocycle1) -> Value {
    let m = c.modulus();
    let table: Vec<Vec<u64>> = c
        .values
        .iter()
        .map(|r| r.iter().map(|w| w.exponent_in(m)).collect())
        .collect();
    json!({ "modulus": m, "table": table })
}

pub fn error(code: &str, message: &str) -> Value {
    json!({ "schema": SCHEMA, "error": { "code": code, "message": message } })
}

/// A group file: the group spec plus optional `normal` generators and
/// `prime`.
#[derive(Clone, Debug)]
pub struct GroupFile {
    pub spec: GroupSpec,
    pub normal: Option<Vec<String>>,
    pub prime: Option<u64>,
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>, CliError> {
    v.as_array()
        .ok_or_else(|| CliError::Input(format!("{} must be an array", what)))?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| CliError::Input(format!("{} must hold nonnegative integers", what)))
        })
        .collect()
}

pub fn parse_group_file(text: &str) -> Result<GroupFile, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("group file: {}", e)))?;
    let obj: &Map<String, Value> = v
        .as_object()
        .ok_or_else(|| CliError::Input("group file must be an object".into()))?;
    let spec = if let Some(t) = obj.get("table") {
        let rows = t
            .as_array()
            .ok_or_else(|| CliError::Input("table must be an array".into()))?;
        let table = rows
            .iter()
            .map(|r| usize_list(r, "table row"))
            .collect::<Result<Vec<_>, _>>()?;
        let labels = match obj.get("labels") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => Some(
                a.iter()
                    .map(|x| match x {
                        Value::String(s) => Ok(s.clone()),
                        other => Ok(other.to_string()),
                    })
                    .collect::<Result<Vec<_>, CliError>>()?,
            ),
            Some(_) => return Err(CliError::Input("labels must be an array".into())),
        };
        GroupSpec::Table { table, labels }
    } else if let Some(gs) = obj.get("perm_gens") {
        let points =
            obj.get("points")
                .and_then(Value::as_u64)
                .ok_or_else(|| CliError::Input("perm_gens needs an integer \"points\"".into()))? as usize;
        let gens = gs
            .as_array()
            .ok_or_else(|| CliError::Input("perm_gens must be an array".into()))?
            .iter()
            .map(|g| {
                g.as_array()
                    .ok_or_else(|| CliError::Input("a generator must be a list of cycles".into()))?
                    .iter()
                    .map(|c| usize_list(c, "cycle"))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupSpec::Permutations { points, gens }
    } else {
        return Err(CliError::Input("group file needs \"table\" or \"perm_gens\"".into()));
    };
    let normal = match obj.get("normal") {
        None | Some(Value::Null) => None,
        Some(Value::Array(a)) => Some(
            a.iter()
                .map(|x| match x {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect(),
        ),
        Some(_) => return Err(CliError::Input("normal must be an array".into())),
    };
    let prime = obj.get("prime").and_then(Value::as_u64);
    Ok(GroupFile { spec, normal, prime })
}

/// Resolves an element given by index or label.
pub fn resolve_element(g: &FiniteGroup, token: &str) -> Result<usize, CliError> {
    let t = token.trim();
    if let Some(labels) = g.labels() {
        if let Some(i) = labels.iter().position(|l| l == t) {
            return Ok(i);
        }
    }
    match t.parse::<usize>() {
        Ok(i) if i < g.order() => Ok(i),
        _ => Err(CliError::Input(format!("unknown element {:?}", t))),
    }
}

/// Splits `--normal` on commas that are not inside parentheses.
pub fn split_generators(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter()
        .map(|x| x.trim().to_string())
        .filter(|x| !x.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use twistzeta_core::group::DEFAULT_SIZE_CAP;

    #[test]
    fn encodes_values() {
        let c = Cyclotomic::root_of_unity(4, 1).add(&Cyclotomic::from_int(1).div_int(2));
        let v = cyclotomic(&c);
        assert_eq!(v["m"], 4);
        assert_eq!(v["c"], json!(["1/2", "1"]));
        assert_eq!(root_of_unity(&RootOfUnity::new(6, 4)), json!({"m": 3, "k": 2}));
        let p = DirichletPoly::from_terms([(1, BigInt::from(1)), (3, BigInt::from(2))]);
        assert_eq!(poly(&p), json!({"terms": [[1, 1], [3, 2]]}));
    }

    #[test]
    fn parses_group_files() {
        let f = parse_group_file(
            r#"{"perm_gens": [[[1,2,3,4]], [[1,3]]], "points": 4, "normal": ["(1 3)(2 4)"], "prime": 2}"#,
        )
        .unwrap();
        let g = FiniteGroup::from_spec(&f.spec, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(g.order(), 8);
        let z = resolve_element(&g, &f.normal.unwrap()[0]).unwrap();
        assert_eq!(g.elem_order(z), 2);
        assert_eq!(f.prime, Some(2));
        let t = parse_group_file(r#"{"table": [[0,1],[1,0]], "labels": ["e","a"]}"#).unwrap();
        let g2 = FiniteGroup::from_spec(&t.spec, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(resolve_element(&g2, "a").unwrap(), 1);
        assert_eq!(resolve_element(&g2, "1").unwrap(), 1);
        assert!(resolve_element(&g2, "b").is_err());
        assert!(parse_group_file("{}").is_err());
        assert!(parse_group_file("[").is_err());
    }

    #[test]
    fn splits_cycle_lists() {
        assert_eq!(
            split_generators("(1 2)(3 4), 5,(1 3)"),
            vec!["(1 2)(3 4)", "5", "(1 3)"]
        );
    }
}
