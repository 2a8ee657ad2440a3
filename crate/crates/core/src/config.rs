//! Potential config files and the family registry that parses them.
//!
//! A config is a JSON object `{"family": <name>, "params": {...}}`. Complex
//! parameters are written either as a number (real) or as `[re, im]`.
//!
//! | family        | params                                                       |
//! |---------------|--------------------------------------------------------------|
//! | `scarf2`      | `{"P": c, "Q": c}`, or exactly one of `{"absorptive_d": d}`, |
//! |               | `{"broken_pt_c": c}`, `{"unbroken_ab": {"a": a, "b": b}}`    |
//! | `rectangular` | `{"P": c, "Q": q, "L": l}`                                   |
//! | `gaussian`    | `{"P": c, "Q": q}`                                           |
//! | `tabulated`   | `{"samples": [[x, re, im], ...]}` with strictly increasing x |
//!
//! Unknown keys are rejected at every level.

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::potential::{PotentialSpec, ScarfII, Tabulated};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("unknown potential family `{0}`")]
    UnknownFamily(String),
}

impl ConfigError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Field { field: field.into(), message: message.into() }
    }
}

type ConfigResult<T> = std::result::Result<T, ConfigError>;

/// A potential family: parses its `params` object and writes it back.
pub trait Family: Send + Sync {
    fn name(&self) -> &'static str;

    fn parse(&self, params: &Map<String, Value>) -> ConfigResult<PotentialSpec>;

    /// `params` for a spec of this family, or `None` if the spec belongs elsewhere.
    fn params(&self, spec: &PotentialSpec) -> Option<Value>;
}

fn reject_unknown(params: &Map<String, Value>, allowed: &[&str], context: &str) -> ConfigResult<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(key) => Err(ConfigError::field(
            format!("{context}.{key}"),
            format!("unknown field (expected one of: {})", allowed.join(", ")),
        )),
        None => Ok(()),
    }
}

fn real(params: &Map<String, Value>, key: &str, context: &str) -> ConfigResult<f64> {
    let field = format!("{context}.{key}");
    match params.get(key) {
        None => Err(ConfigError::field(field, "missing")),
        Some(v) => v
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| ConfigError::field(field, format!("expected a real number, got {v}"))),
    }
}

fn complex_value(v: &Value, field: &str) -> ConfigResult<Complex64> {
    if let Some(re) = v.as_f64() {
        return Ok(Complex64::new(re, 0.0));
    }
    if let Some([re, im]) = v.as_array().map(|a| a.as_slice()) {
        if let (Some(re), Some(im)) = (re.as_f64(), im.as_f64()) {
            return Ok(Complex64::new(re, im));
        }
    }
    Err(ConfigError::field(field, format!("expected a number or [re, im], got {v}")))
}

fn complex(params: &Map<String, Value>, key: &str, context: &str) -> ConfigResult<Complex64> {
    let field = format!("{context}.{key}");
    match params.get(key) {
        None => Err(ConfigError::field(field, "missing")),
        Some(v) => complex_value(v, &field),
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

struct ScarfFamily;

impl Family for ScarfFamily {
    fn name(&self) -> &'static str {
        "scarf2"
    }

    fn parse(&self, params: &Map<String, Value>) -> ConfigResult<PotentialSpec> {
        const CTX: &str = "params";
        reject_unknown(params, &["P", "Q", "absorptive_d", "broken_pt_c", "unbroken_ab"], CTX)?;
        let named: Vec<&str> = ["absorptive_d", "broken_pt_c", "unbroken_ab"]
            .into_iter()
            .filter(|k| params.contains_key(*k))
            .collect();
        let explicit = params.contains_key("P") || params.contains_key("Q");
        if named.len() + explicit as usize != 1 {
            return Err(ConfigError::field(
                CTX,
                "give either P and Q, or exactly one of absorptive_d, broken_pt_c, unbroken_ab",
            ));
        }
        let scarf = match named.first().copied() {
            Some("absorptive_d") => ScarfII::AbsorptiveD { d: real(params, "absorptive_d", CTX)? },
            Some("broken_pt_c") => ScarfII::BrokenPtC { c: real(params, "broken_pt_c", CTX)? },
            Some(_) => {
                let ctx = "params.unbroken_ab";
                let inner = params["unbroken_ab"]
                    .as_object()
                    .ok_or_else(|| ConfigError::field(ctx, "expected an object {\"a\": .., \"b\": ..}"))?;
                reject_unknown(inner, &["a", "b"], ctx)?;
                ScarfII::UnbrokenAb { a: real(inner, "a", ctx)?, b: real(inner, "b", ctx)? }
            }
            None => ScarfII::General { p: complex(params, "P", CTX)?, q: complex(params, "Q", CTX)? },
        };
        Ok(PotentialSpec::ScarfII(scarf))
    }

    fn params(&self, spec: &PotentialSpec) -> Option<Value> {
        Some(match spec.as_scarf()? {
            ScarfII::General { p, q } => json!({"P": complex_json(*p), "Q": complex_json(*q)}),
            ScarfII::AbsorptiveD { d } => json!({"absorptive_d": d}),
            ScarfII::BrokenPtC { c } => json!({"broken_pt_c": c}),
            ScarfII::UnbrokenAb { a, b } => json!({"unbroken_ab": {"a": a, "b": b}}),
        })
    }
}

struct RectangularFamily;

impl Family for RectangularFamily {
    fn name(&self) -> &'static str {
        "rectangular"
    }

    fn parse(&self, params: &Map<String, Value>) -> ConfigResult<PotentialSpec> {
        reject_unknown(params, &["P", "Q", "L"], "params")?;
        let p = complex(params, "P", "params")?;
        let q = real(params, "Q", "params")?;
        let l = real(params, "L", "params")?;
        PotentialSpec::rectangular(p, q, l).map_err(|e| ConfigError::field("params.L", e.to_string()))
    }

    fn params(&self, spec: &PotentialSpec) -> Option<Value> {
        match spec {
            PotentialSpec::Rectangular { p, q, half_width } => {
                Some(json!({"P": complex_json(*p), "Q": q, "L": half_width}))
            }
            _ => None,
        }
    }
}

struct GaussianFamily;

impl Family for GaussianFamily {
    fn name(&self) -> &'static str {
        "gaussian"
    }

    fn parse(&self, params: &Map<String, Value>) -> ConfigResult<PotentialSpec> {
        reject_unknown(params, &["P", "Q"], "params")?;
        Ok(PotentialSpec::gaussian(complex(params, "P", "params")?, real(params, "Q", "params")?))
    }

    fn params(&self, spec: &PotentialSpec) -> Option<Value> {
        match spec {
            PotentialSpec::Gaussian { p, q } => Some(json!({"P": complex_json(*p), "Q": q})),
            _ => None,
        }
    }
}

struct TabulatedFamily;

impl Family for TabulatedFamily {
    fn name(&self) -> &'static str {
        "tabulated"
    }

    fn parse(&self, params: &Map<String, Value>) -> ConfigResult<PotentialSpec> {
        reject_unknown(params, &["samples"], "params")?;
        let rows = params
            .get("samples")
            .ok_or_else(|| ConfigError::field("params.samples", "missing"))?
            .as_array()
            .ok_or_else(|| ConfigError::field("params.samples", "expected an array of [x, re, im]"))?;
        let mut samples = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let field = format!("params.samples[{i}]");
            let triple: Option<Vec<f64>> = row.as_array().and_then(|r| r.iter().map(Value::as_f64).collect());
            match triple.as_deref() {
                Some(&[x, re, im]) => samples.push((x, Complex64::new(re, im))),
                _ => return Err(ConfigError::field(field, format!("expected [x, re, im], got {row}"))),
            }
        }
        Tabulated::new(samples)
            .map(PotentialSpec::Tabulated)
            .map_err(|e| ConfigError::field("params.samples", e.to_string()))
    }

    fn params(&self, spec: &PotentialSpec) -> Option<Value> {
        match spec {
            PotentialSpec::Tabulated(t) => {
                let rows: Vec<Value> = t.samples().iter().map(|(x, v)| json!([x, v.re, v.im])).collect();
                Some(json!({ "samples": rows }))
            }
            _ => None,
        }
    }
}

pub struct FamilyRegistry {
    families: Vec<Box<dyn Family>>,
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        let mut registry = Self { families: Vec::new() };
        registry.register(Box::new(ScarfFamily));
        registry.register(Box::new(RectangularFamily));
        registry.register(Box::new(GaussianFamily));
        registry.register(Box::new(TabulatedFamily));
        registry
    }
}

impl FamilyRegistry {
    pub fn register(&mut self, family: Box<dyn Family>) {
        self.families.retain(|f| f.name() != family.name());
        self.families.push(family);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.iter().map(|f| f.name()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&dyn Family> {
        self.families.iter().find(|f| f.name() == name).map(|f| f.as_ref())
    }

    /// Parses a `{"family": .., "params": {..}}` value.
    pub fn from_value(&self, value: &Value) -> ConfigResult<PotentialSpec> {
        let root = value
            .as_object()
            .ok_or_else(|| ConfigError::field("<root>", "expected an object"))?;
        reject_unknown(root, &["family", "params"], "<root>")?;
        let name = root
            .get("family")
            .ok_or_else(|| ConfigError::field("family", "missing"))?
            .as_str()
            .ok_or_else(|| ConfigError::field("family", "expected a string"))?;
        let family = self.get(name).ok_or_else(|| ConfigError::UnknownFamily(name.to_string()))?;
        let empty = Map::new();
        let params = match root.get("params") {
            None => &empty,
            Some(v) => v.as_object().ok_or_else(|| ConfigError::field("params", "expected an object"))?,
        };
        family.parse(params)
    }

    pub fn from_json(&self, text: &str) -> ConfigResult<PotentialSpec> {
        let value: Value = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        self.from_value(&value)
    }

    pub fn to_value(&self, spec: &PotentialSpec) -> Value {
        let params = self
            .families
            .iter()
            .find_map(|f| f.params(spec))
            .unwrap_or_else(|| json!({}));
        json!({ "family": spec.family(), "params": params })
    }
}

/// Parses CLI shorthand such as `P=4.0,0 Q=-6.25` into a params object:
/// `re,im` becomes `[re, im]`, a single number stays a number.
pub fn inline_params(tokens: &[String]) -> ConfigResult<Map<String, Value>> {
    let mut params = Map::new();
    for token in tokens.iter().flat_map(|t| t.split_whitespace()) {
        let (key, raw) = token
            .split_once('=')
            .ok_or_else(|| ConfigError::field(token, "expected key=value"))?;
        let numbers: Option<Vec<f64>> = raw.split(',').map(|s| s.trim().parse::<f64>().ok()).collect();
        let value = match numbers.as_deref() {
            Some(&[x]) => json!(x),
            Some(&[re, im]) => json!([re, im]),
            _ => return Err(ConfigError::field(key, format!("expected a number or re,im, got `{raw}`"))),
        };
        if params.insert(key.to_string(), value).is_some() {
            return Err(ConfigError::field(key, "given more than once"));
        }
    }
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> ConfigResult<PotentialSpec> {
        FamilyRegistry::default().from_json(text)
    }

    #[test]
    fn parses_every_family() {
        assert_eq!(
            parse(r#"{"family":"scarf2","params":{"absorptive_d":2}}"#).unwrap(),
            PotentialSpec::absorptive_d(2.0)
        );
        assert_eq!(
            parse(r#"{"family":"scarf2","params":{"broken_pt_c":2}}"#).unwrap(),
            PotentialSpec::broken_pt_c(2.0)
        );
        assert_eq!(
            parse(r#"{"family":"scarf2","params":{"unbroken_ab":{"a":1.2,"b":0.8}}}"#).unwrap(),
            PotentialSpec::unbroken_ab(1.2, 0.8)
        );
        assert_eq!(
            parse(r#"{"family":"rectangular","params":{"P":[2.21,-1.091],"Q":0,"L":2}}"#).unwrap(),
            PotentialSpec::rectangular(Complex64::new(2.21, -1.091), 0.0, 2.0).unwrap()
        );
        assert_eq!(
            parse(r#"{"family":"gaussian","params":{"P":4.0,"Q":-6.25}}"#).unwrap(),
            PotentialSpec::gaussian(Complex64::new(4.0, 0.0), -6.25)
        );
        let tab = parse(r#"{"family":"tabulated","params":{"samples":[[-1,0,0],[0,1,-1],[1,0,0]]}}"#).unwrap();
        assert_eq!(tab.evaluate(0.0), Complex64::new(1.0, -1.0));
        assert_eq!(parse(r#"{"family":"tabulated","params":{"samples":[]}}"#).unwrap(), PotentialSpec::zero());
    }

    #[test]
    fn rejects_unknown_fields_and_families() {
        let err = parse(r#"{"family":"gaussian","params":{"P":4.0,"Q":0,"sigma":1}}"#).unwrap_err();
        assert!(matches!(&err, ConfigError::Field { field, .. } if field == "params.sigma"), "{err}");
        let err = parse(r#"{"family":"gaussian","params":{"P":4.0,"Q":0},"extra":true}"#).unwrap_err();
        assert!(matches!(&err, ConfigError::Field { field, .. } if field == "<root>.extra"));
        let err = parse(r#"{"family":"scarf2","params":{"unbroken_ab":{"a":1,"b":2,"c":3}}}"#).unwrap_err();
        assert!(matches!(&err, ConfigError::Field { field, .. } if field == "params.unbroken_ab.c"));
        assert_eq!(parse(r#"{"family":"morse","params":{}}"#).unwrap_err(), ConfigError::UnknownFamily("morse".into()));
    }

    #[test]
    fn rejects_bad_values() {
        assert!(parse(r#"{"family":"rectangular","params":{"P":1,"Q":0,"L":0}}"#).is_err());
        assert!(parse(r#"{"family":"rectangular","params":{"P":1,"Q":0}}"#).is_err());
        assert!(parse(r#"{"family":"scarf2","params":{"absorptive_d":2,"broken_pt_c":1}}"#).is_err());
        assert!(parse(r#"{"family":"scarf2","params":{}}"#).is_err());
        assert!(parse(r#"{"family":"tabulated","params":{"samples":[[1,0,0],[0,0,0]]}}"#).is_err());
        assert!(parse(r#"{"family":"gaussian","params":{"P":[1,2,3],"Q":0}}"#).is_err());
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("{\n  \"family\": \"gaussian\",\n  \"params\": {\"P\": }\n}").unwrap_err() {
            ConfigError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inline_shorthand() {
        let tokens = vec!["P=4.0,0".to_string(), "Q=-6.25".to_string()];
        let params = inline_params(&tokens).unwrap();
        assert_eq!(params["P"], json!([4.0, 0.0]));
        assert_eq!(params["Q"], json!(-6.25));
        let spec = FamilyRegistry::default().get("gaussian").unwrap().parse(&params).unwrap();
        assert_eq!(spec, PotentialSpec::gaussian(Complex64::new(4.0, 0.0), -6.25));
        assert!(inline_params(&["P".to_string()]).is_err());
        assert!(inline_params(&["P=a,b".to_string()]).is_err());
        assert!(inline_params(&["P=1".to_string(), "P=2".to_string()]).is_err());
    }

    fn arb_spec() -> impl Strategy<Value = PotentialSpec> {
        let num = || -10.0f64..10.0;
        prop_oneof![
            num().prop_map(PotentialSpec::absorptive_d),
            num().prop_map(PotentialSpec::broken_pt_c),
            (num(), num()).prop_map(|(a, b)| PotentialSpec::unbroken_ab(a, b)),
            (num(), num(), num(), num()).prop_map(|(a, b, c, d)| PotentialSpec::ScarfII(ScarfII::General {
                p: Complex64::new(a, b),
                q: Complex64::new(c, d)
            })),
            (num(), num(), num(), 0.01f64..5.0)
                .prop_map(|(a, b, q, l)| PotentialSpec::rectangular(Complex64::new(a, b), q, l).unwrap()),
            (num(), num(), num()).prop_map(|(a, b, q)| PotentialSpec::gaussian(Complex64::new(a, b), q)),
        ]
    }

    proptest! {
        #[test]
        fn config_round_trips(spec in arb_spec()) {
            let registry = FamilyRegistry::default();
            let text = serde_json::to_string(&registry.to_value(&spec)).unwrap();
            prop_assert_eq!(registry.from_json(&text).unwrap(), spec);
        }
    }
}
