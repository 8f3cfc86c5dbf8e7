//! Parsing of command-line values: complex scalars, parameter sets, forms
//! and grids given as JSON text, `@file` or `-` for stdin.

use std::io::Read;

use heun_core::scalar::C64;
use heun_core::{GridSpec, HeunParams, HypergeometricForm};
use serde_json::{json, Map, Value};

use crate::CliError;

/// `1.5`, `-2i`, `0.3-1.2i`, `i`
pub fn parse_complex(text: &str) -> Result<C64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(String::from("empty complex number"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|e| format!("'{text}': {e}"));
    };
    // split at the last sign that is not part of an exponent
    let split = body
        .char_indices()
        .filter(|&(k, c)| k > 0 && (c == '+' || c == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .next_back();
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|e| format!("'{text}': {e}"))?,
    };
    let re = re.parse::<f64>().map_err(|e| format!("'{text}': {e}"))?;
    Ok(C64::new(re, im))
}

/// Inline JSON, `@path` or `-` for stdin.
pub fn read_source(arg: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Invalid(format!("stdin: {e}")))?;
        Ok(text)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_json(arg: &str, what: &str) -> Result<Value, CliError> {
    serde_json::from_str(&read_source(arg)?).map_err(|e| CliError::Invalid(format!("{what}: {e}")))
}

/// Numbers and strings such as `"1-2i"` become `{"re": .., "im": ..}`.
fn complexify(v: &Value, what: &str) -> Result<Value, CliError> {
    match v {
        Value::Number(n) => Ok(json!({"re": n.as_f64(), "im": 0.0})),
        Value::String(s) => {
            let z = parse_complex(s).map_err(|e| CliError::Invalid(format!("{what}: {e}")))?;
            Ok(json!({"re": z.re, "im": z.im}))
        }
        Value::Object(_) => Ok(v.clone()),
        other => Err(CliError::Invalid(format!("{what}: expected a complex number, got {other}"))),
    }
}

fn complexify_fields(obj: &mut Map<String, Value>, keys: &[&str]) -> Result<(), CliError> {
    for key in keys {
        if let Some(v) = obj.get(*key) {
            let z = complexify(v, key)?;
            obj.insert((*key).to_string(), z);
        }
    }
    Ok(())
}

fn complexify_array(obj: &mut Map<String, Value>, key: &str) -> Result<(), CliError> {
    if let Some(Value::Array(items)) = obj.get(key) {
        let items = items.iter().map(|v| complexify(v, key)).collect::<Result<Vec<_>, _>>()?;
        obj.insert(key.to_string(), Value::Array(items));
    }
    Ok(())
}

const PARAM_KEYS: [&str; 7] = ["d", "q", "a", "b", "gamma", "delta", "epsilon"];

/// Parameter set; `epsilon` may be given but must satisfy the Fuchsian
/// relation, since it is always recomputed.
pub fn params_from_value(v: Value) -> Result<HeunParams, CliError> {
    let Value::Object(mut obj) = v else {
        return Err(CliError::Invalid(String::from("params: expected a JSON object")));
    };
    complexify_fields(&mut obj, &PARAM_KEYS)?;
    let given_epsilon = obj.get("epsilon").cloned();
    let p: HeunParams = serde_json::from_value(Value::Object(obj)).map_err(|e| CliError::Invalid(format!("params: {e}")))?;
    if let Some(e) = given_epsilon {
        let e: C64 = heun_core::scalar::serde_c64::deserialize(e).map_err(|e| CliError::Invalid(format!("epsilon: {e}")))?;
        if (e - p.epsilon()).norm() > 1e-12 * (1.0 + e.norm()) {
            return Err(CliError::Invalid(format!(
                "epsilon = {} violates a + b + 1 = Γ + Δ + ε (expected {})",
                heun_core::scalar::fmt_c64(e),
                heun_core::scalar::fmt_c64(p.epsilon())
            )));
        }
    }
    Ok(p)
}

pub fn parse_params(arg: &str) -> Result<HeunParams, CliError> {
    params_from_value(parse_json(arg, "params")?)
}

/// Form JSON; `arg_den` defaults to `[1]` and `prefactor` to the empty product.
pub fn parse_form(arg: &str) -> Result<HypergeometricForm, CliError> {
    let Value::Object(mut obj) = parse_json(arg, "form")? else {
        return Err(CliError::Invalid(String::from("form: expected a JSON object")));
    };
    // a, b, c are accepted as shorthand for the stored names
    for (short, long) in [("a", "a2"), ("b", "b2"), ("c", "c2")] {
        if !obj.contains_key(long) {
            if let Some(v) = obj.remove(short) {
                obj.insert(long.to_string(), v);
            }
        }
    }
    complexify_fields(&mut obj, &["a2", "b2", "c2"])?;
    obj.entry("arg_den").or_insert_with(|| json!([1.0]));
    obj.entry("prefactor").or_insert_with(|| json!([]));
    complexify_array(&mut obj, "arg_num")?;
    complexify_array(&mut obj, "arg_den")?;
    if let Some(Value::Array(factors)) = obj.get_mut("prefactor") {
        for f in factors.iter_mut() {
            if let Value::Object(fo) = f {
                complexify_fields(fo, &["c0", "c1", "exponent"])?;
            }
        }
    }
    let f: HypergeometricForm = serde_json::from_value(Value::Object(obj)).map_err(|e| CliError::Invalid(format!("form: {e}")))?;
    // the map is rebuilt through its constructor so degree and finiteness are checked
    let arg = heun_core::RationalMap::new(f.arg_map.num.clone(), f.arg_map.den.clone())?;
    Ok(HypergeometricForm::new(f.a2, f.b2, f.c2, arg, f.prefactor))
}

pub fn parse_grid(arg: &str) -> Result<GridSpec, CliError> {
    let mut v = parse_json(arg, "grid")?;
    if let Value::Object(obj) = &mut v {
        if let Some(Value::Object(seg)) = obj.get_mut("segment") {
            complexify_fields(seg, &["from", "to"])?;
        }
        complexify_array(obj, "explicit")?;
    }
    serde_json::from_value(v).map_err(|e| CliError::Invalid(format!("grid: {e}")))
}
