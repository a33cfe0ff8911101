//! Deterministic text output: 12 significant digits everywhere.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::noise::{MeasurementEnsemble, Quadrature};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style formatting.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `v` rounded to 12 significant digits.
pub fn round_sig(v: f64) -> f64 {
    if v.is_finite() {
        fmt_num(v).parse().unwrap_or(v)
    } else {
        v
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits and a
/// trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut v =
        serde_json::to_value(value).map_err(|e| Error::Parse { location: "output".into(), reason: e.to_string() })?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v)
        .map_err(|e| Error::Parse { location: "output".into(), reason: e.to_string() })?;
    s.push('\n');
    Ok(s)
}

/// Comma-separated table with a header row.
#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn fmt_bool(b: bool) -> String {
    b.to_string()
}

/// ```text
/// # quantity=position
/// # seed=42
/// # sigma=0.5
/// # center=2
/// outcome
/// 2.13412
/// ...
/// ```
pub fn ensemble_to_csv(ens: &MeasurementEnsemble) -> String {
    let mut out = format!(
        "# quantity={}\n# seed={}\n# sigma={}\n# center={}\noutcome\n",
        ens.quantity.name(),
        ens.seed,
        fmt_num(ens.sigma),
        fmt_num(ens.true_center)
    );
    for x in &ens.samples {
        out.push_str(&fmt_num(*x));
        out.push('\n');
    }
    out
}

pub fn ensemble_from_csv(text: &str) -> Result<MeasurementEnsemble> {
    let err = |line: usize, reason: String| Error::Parse { location: format!("line {line}"), reason };
    let mut quantity = None;
    let mut seed = None;
    let mut sigma = None;
    let mut center = None;
    let mut header_seen = false;
    let mut samples = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            if header_seen {
                return Err(err(line_no, "metadata after the column header".into()));
            }
            let (key, value) =
                meta.trim().split_once('=').ok_or_else(|| err(line_no, "expected `# key=value`".into()))?;
            let value = value.trim();
            let number = |v: &str| v.parse::<f64>().map_err(|e| err(line_no, format!("{key}: {e}")));
            match key.trim() {
                "quantity" => {
                    quantity = Some(match value {
                        "position" => Quadrature::Position,
                        "momentum" => Quadrature::Momentum,
                        other => return Err(err(line_no, format!("unknown quantity `{other}`"))),
                    })
                }
                "seed" => seed = Some(value.parse::<u64>().map_err(|e| err(line_no, format!("seed: {e}")))?),
                "sigma" => sigma = Some(number(value)?),
                "center" => center = Some(number(value)?),
                other => return Err(err(line_no, format!("unknown metadata key `{other}`"))),
            }
            continue;
        }
        if !header_seen {
            if line != "outcome" {
                return Err(err(line_no, format!("expected column header `outcome`, got `{line}`")));
            }
            header_seen = true;
            continue;
        }
        let x: f64 = line.parse().map_err(|e| err(line_no, format!("outcome: {e}")))?;
        if !x.is_finite() {
            return Err(err(line_no, "outcome is not finite".into()));
        }
        samples.push(x);
    }
    let missing = |what: &str| Error::Parse { location: "header".into(), reason: format!("missing `{what}`") };
    let center = center.ok_or_else(|| missing("center"))?;
    if !center.is_finite() {
        return Err(Error::Parse { location: "header".into(), reason: "center is not finite".into() });
    }
    MeasurementEnsemble::new(
        quantity.ok_or_else(|| missing("quantity"))?,
        samples,
        seed.ok_or_else(|| missing("seed"))?,
        center,
        sigma.ok_or_else(|| missing("sigma"))?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::sample_ensemble;

    #[test]
    fn formatting() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(123456789012.0), "123456789012");
        assert_eq!(fmt_num(1234567890123.0), "1.23456789012e12");
        assert_eq!(fmt_num(1e-5), "0.00001");
        assert_eq!(fmt_num(1.5e-6), "1.5e-6");
        assert_eq!(fmt_num(9.99999999999951), "10");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn json_rounds_floats_only() {
        #[derive(Serialize)]
        struct S {
            a: f64,
            n: u64,
            v: Vec<f64>,
        }
        let s = to_json(&S { a: 0.1 + 0.2, n: u64::MAX, v: vec![1.0 / 3.0] }).unwrap();
        assert!(s.contains("\"a\": 0.3,"), "{s}");
        assert!(s.contains("18446744073709551615"));
        assert!(s.contains("0.333333333333"));
    }

    #[test]
    fn ensemble_round_trip() {
        let e = sample_ensemble(Quadrature::Momentum, -1.0, 1.2, 50, 8).unwrap();
        let text = ensemble_to_csv(&e);
        let back = ensemble_from_csv(&text).unwrap();
        assert_eq!((back.quantity, back.seed, back.sigma, back.true_center), (e.quantity, 8, 1.2, -1.0));
        for (a, b) in back.samples.iter().zip(&e.samples) {
            assert_eq!(*a, round_sig(*b));
        }
        assert_eq!(ensemble_to_csv(&back), text);
    }

    #[test]
    fn ensemble_parse_errors() {
        let ok = "# quantity=position\n# seed=1\n# sigma=1\n# center=0\noutcome\n1\n2\n";
        assert!(ensemble_from_csv(ok).is_ok());
        let cases = [
            ("# quantity=spin\n", "line 1"),
            ("# quantity=position\n# seed=-1\n", "line 2"),
            ("# quantity=position\n# seed=1\n# sigma=1\n# center=0\nvalue\n", "line 5"),
            ("# quantity=position\n# seed=1\n# sigma=1\n# center=0\noutcome\n1\nx\n", "line 7"),
            ("# quantity=position\n# seed=1\n# center=0\noutcome\n1\n2\n", "header"),
        ];
        for (text, loc) in cases {
            match ensemble_from_csv(text) {
                Err(Error::Parse { location, .. }) => assert_eq!(location, loc, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert_eq!(ensemble_from_csv(&ok.replace("\n2\n", "\n")), Err(Error::InvalidCount(1)));
    }
}
