//! JSON run reports.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::rational::to_f64;
use crate::specfun::AnalyticValue;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub name: String,
    pub value: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub defect: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub params: Map<String, Value>,
    pub results: Vec<ResultRecord>,
    pub checks: Vec<CheckRecord>,
    pub timing_ms: u64,
    pub cache_hits: u64,
}

/// Non-finite floats have no JSON encoding; they are written as strings.
fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            params: Map::new(),
            results: Vec::new(),
            checks: Vec::new(),
            timing_ms: 0,
            cache_hits: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.params.insert(key.to_string(), v);
    }

    fn push(&mut self, name: &str, value: Value) -> &mut ResultRecord {
        self.results.push(ResultRecord {
            name: name.to_string(),
            value,
            abs_error: None,
            num: None,
            den: None,
        });
        self.results.last_mut().expect("just pushed")
    }

    pub fn value(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.push(name, v);
    }

    pub fn real(&mut self, name: &str, x: f64) {
        self.push(name, float(x));
    }

    pub fn count(&mut self, name: &str, n: u64) {
        self.push(name, Value::from(n));
    }

    /// A certified value; complex values split into `.re` and `.im`.
    pub fn analytic(&mut self, name: &str, v: &AnalyticValue) {
        if v.value.im == 0.0 {
            self.push(name, float(v.value.re)).abs_error = Some(v.abs_error);
        } else {
            self.push(&format!("{name}.re"), float(v.value.re)).abs_error = Some(v.abs_error);
            self.push(&format!("{name}.im"), float(v.value.im)).abs_error = Some(v.abs_error);
        }
    }

    pub fn rational(&mut self, name: &str, q: &BigRational) {
        let rec = self.push(name, float(to_f64(q)));
        rec.num = Some(q.numer().to_string());
        rec.den = Some(q.denom().to_string());
    }

    pub fn check(&mut self, name: &str, pass: bool, defect: impl Serialize) {
        let defect = match serde_json::to_value(defect) {
            Ok(Value::Number(n)) => Value::Number(n),
            Ok(v) => v,
            Err(_) => Value::Null,
        };
        self.checks.push(CheckRecord {
            name: name.to_string(),
            pass,
            defect,
        });
    }

    /// A numeric check `defect ≤ bound`.
    pub fn check_bound(&mut self, name: &str, defect: f64, bound: f64) {
        self.checks.push(CheckRecord {
            name: name.to_string(),
            pass: defect <= bound,
            defect: float(defect),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self, pretty: bool) -> String {
        let out = if pretty {
            serde_json::to_string_pretty(self)
        } else {
            serde_json::to_string(self)
        };
        out.expect("report values are always serializable")
    }

    pub fn result(&self, name: &str) -> Option<&ResultRecord> {
        self.results.iter().find(|r| r.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::specfun::c;

    #[test]
    fn complex_split_and_roundtrip() {
        let mut r = RunReport::new("zeta eval");
        r.param("s", "2+1i");
        r.analytic("z", &AnalyticValue::new(c(1.0, 2.0), 1e-9));
        r.analytic("w", &AnalyticValue::real(3.0, 0.0));
        r.rational("q", &rat(-3, 8));
        r.check_bound("d", 1e-12, 1e-9);
        r.real("nan", f64::NAN);
        assert_eq!(r.results[0].name, "z.re");
        assert_eq!(r.results[1].name, "z.im");
        assert_eq!(r.result("q").unwrap().den.as_deref(), Some("8"));
        assert!(r.all_pass());
        let back: RunReport = serde_json::from_str(&r.to_json(false)).unwrap();
        assert_eq!(back, r);
    }
}
