//! Wire formats: parsing with serde, emission through a canonical writer.
//!
//! Output must be byte-reproducible, so floats are not left to a library
//! formatter. Every `f64` is printed at exactly 17 significant digits
//! (enough to round-trip any double) in whichever of two fully specified
//! forms is shorter:
//!
//! * positional, e.g. `1.2345600000000000`, `0.0012300000000000000`;
//! * lowercase scientific `d.dddddddddddddddde<exp>` with a bare integer
//!   exponent (no `+`, no leading zeros), e.g. `1.0000000000000000e-12`.
//!
//! Positional wins ties. Integers (dimensions, seeds, counts) are printed
//! as plain JSON integers. Parsing accepts any standard JSON number.
//!
//! Formats:
//!
//! * matrix: `{"rows": r, "cols": c, "data": [[re, im], ...]}`, row-major
//!   complex pairs of length `r·c`;
//! * realization: `{"n":…, "m_in":…, "m_out":…, "A":…, "B":…, "C":…, "D":…}`;
//! * factorization problem: `{"F":…, "F_inv":…, "dims": {"n_l":…, "m_l":…,
//!   "n_r":…, "m_r":…}, "u":…, "v":…, "T":…?}`;
//! * factorization result: `{"F_l":…, "F_r":…, "residual_report":
//!   [{"z": [re, im], "residual": …}, ...]}`.

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::factorization::{FactorDims, FactorizationProblem, FactorizationResult};
use crate::linalg::CMatrix;
use crate::realization::Realization;

// ---------------------------------------------------------------------------
// canonical float formatting

/// Format a double at 17 significant digits, positional or scientific,
/// whichever is shorter (positional on ties).
pub fn fmt_f64(x: f64) -> String {
    assert!(x.is_finite(), "non-finite value reached the serializer");
    let sci = format!("{:.16e}", x);
    // split "d.dddd…e<exp>" into sign, 17 digits, exponent
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 17);

    let positional = if exp >= 0 {
        let e = exp as usize;
        if e >= 16 {
            // all digits land left of the decimal point
            let mut s = digits.clone();
            s.push_str(&"0".repeat(e - 16));
            s
        } else {
            format!("{}.{}", &digits[..=e], &digits[e + 1..])
        }
    } else {
        let zeros = (-exp - 1) as usize;
        format!("0.{}{}", "0".repeat(zeros), digits)
    };
    let positional = if neg {
        format!("-{positional}")
    } else {
        positional
    };
    if sci.len() < positional.len() {
        sci
    } else {
        positional
    }
}

fn push_complex_pair(out: &mut String, z: Complex64) {
    out.push('[');
    out.push_str(&fmt_f64(z.re));
    out.push(',');
    out.push_str(&fmt_f64(z.im));
    out.push(']');
}

fn push_str_escaped(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

// ---------------------------------------------------------------------------
// emitters

pub fn matrix_to_json(m: &CMatrix) -> String {
    let mut out = String::new();
    push_matrix(&mut out, m);
    out
}

fn push_matrix(out: &mut String, m: &CMatrix) {
    out.push_str(&format!("{{\"rows\":{},\"cols\":{},\"data\":[", m.rows(), m.cols()));
    for (i, &z) in m.data().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_complex_pair(out, z);
    }
    out.push_str("]}");
}

pub fn realization_to_json(r: &Realization) -> String {
    let mut out = String::new();
    push_realization(&mut out, r);
    out
}

fn push_realization(out: &mut String, r: &Realization) {
    out.push_str(&format!(
        "{{\"n\":{},\"m_in\":{},\"m_out\":{},\"A\":",
        r.state_dim(),
        r.input_dim(),
        r.output_dim()
    ));
    push_matrix(out, r.a());
    out.push_str(",\"B\":");
    push_matrix(out, r.b());
    out.push_str(",\"C\":");
    push_matrix(out, r.c());
    out.push_str(",\"D\":");
    push_matrix(out, r.d());
    out.push('}');
}

pub fn problem_to_json(p: &FactorizationProblem, t: Option<&CMatrix>) -> String {
    let mut out = String::new();
    out.push_str("{\"F\":");
    push_realization(&mut out, &p.f);
    out.push_str(",\"F_inv\":");
    push_realization(&mut out, &p.f_inv);
    out.push_str(&format!(
        ",\"dims\":{{\"n_l\":{},\"m_l\":{},\"n_r\":{},\"m_r\":{}}}",
        p.dims.n_l, p.dims.m_l, p.dims.n_r, p.dims.m_r
    ));
    out.push_str(",\"u\":");
    push_matrix(&mut out, &p.u);
    out.push_str(",\"v\":");
    push_matrix(&mut out, &p.v);
    if let Some(t) = t {
        out.push_str(",\"T\":");
        push_matrix(&mut out, t);
    }
    out.push('}');
    out
}

pub fn result_to_json(r: &FactorizationResult) -> String {
    let mut out = String::new();
    out.push_str("{\"F_l\":");
    push_realization(&mut out, &r.f_l);
    out.push_str(",\"F_r\":");
    push_realization(&mut out, &r.f_r);
    out.push_str(",\"residual_report\":[");
    for (i, s) in r.samples.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("{\"z\":");
        push_complex_pair(&mut out, s.z);
        out.push_str(",\"residual\":");
        out.push_str(&fmt_f64(s.residual));
        out.push('}');
    }
    out.push_str("]}");
    out
}

/// Structured error envelope for the CLI: `{"error":{"kind":…,"message":…}}`.
pub fn error_to_json(e: &Error) -> String {
    let mut out = String::new();
    out.push_str("{\"error\":{\"kind\":");
    push_str_escaped(&mut out, e.kind());
    out.push_str(",\"message\":");
    push_str_escaped(&mut out, &e.to_string());
    out.push_str("}}");
    out
}

/// Ordered helper for report-style objects assembled by callers.
pub struct JsonObject {
    buf: String,
    first: bool,
}

impl JsonObject {
    pub fn new() -> Self {
        Self {
            buf: String::from("{"),
            first: true,
        }
    }

    fn key(&mut self, key: &str) {
        if !self.first {
            self.buf.push(',');
        }
        self.first = false;
        push_str_escaped(&mut self.buf, key);
        self.buf.push(':');
    }

    pub fn field_str(&mut self, key: &str, value: &str) -> &mut Self {
        self.key(key);
        push_str_escaped(&mut self.buf, value);
        self
    }

    pub fn field_u64(&mut self, key: &str, value: u64) -> &mut Self {
        self.key(key);
        self.buf.push_str(&value.to_string());
        self
    }

    pub fn field_f64(&mut self, key: &str, value: f64) -> &mut Self {
        self.key(key);
        self.buf.push_str(&fmt_f64(value));
        self
    }

    pub fn field_bool(&mut self, key: &str, value: bool) -> &mut Self {
        self.key(key);
        self.buf.push_str(if value { "true" } else { "false" });
        self
    }

    /// Insert pre-rendered JSON (an array or object built elsewhere).
    pub fn field_raw(&mut self, key: &str, raw: &str) -> &mut Self {
        self.key(key);
        self.buf.push_str(raw);
        self
    }

    pub fn finish(&self) -> String {
        let mut s = self.buf.clone();
        s.push('}');
        s
    }
}

impl Default for JsonObject {
    fn default() -> Self {
        Self::new()
    }
}

// ---------------------------------------------------------------------------
// parsers

#[derive(Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<(f64, f64)>,
}

impl MatrixWire {
    fn build(self, what: &'static str) -> Result<CMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Json(format!(
                "{what}: {} entries for a {}x{} matrix",
                self.data.len(),
                self.rows,
                self.cols
            )));
        }
        if self.data.iter().any(|(re, im)| !re.is_finite() || !im.is_finite()) {
            return Err(Error::NonFinite { what });
        }
        let data: Vec<Complex64> = self
            .data
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect();
        CMatrix::from_vec(self.rows, self.cols, data)
    }
}

#[derive(Deserialize)]
struct RealizationWire {
    n: usize,
    m_in: usize,
    m_out: usize,
    #[serde(rename = "A")]
    a: MatrixWire,
    #[serde(rename = "B")]
    b: MatrixWire,
    #[serde(rename = "C")]
    c: MatrixWire,
    #[serde(rename = "D")]
    d: MatrixWire,
}

impl RealizationWire {
    fn build(self) -> Result<Realization> {
        let (n, m_in, m_out) = (self.n, self.m_in, self.m_out);
        let r = Realization::new(
            self.a.build("A")?,
            self.b.build("B")?,
            self.c.build("C")?,
            self.d.build("D")?,
        )?;
        if r.state_dim() != n || r.input_dim() != m_in || r.output_dim() != m_out {
            return Err(Error::Json(format!(
                "declared dimensions (n={n}, m_in={m_in}, m_out={m_out}) disagree with the blocks \
                 (n={}, m_in={}, m_out={})",
                r.state_dim(),
                r.input_dim(),
                r.output_dim()
            )));
        }
        Ok(r)
    }
}

#[derive(Deserialize)]
struct DimsWire {
    n_l: usize,
    m_l: usize,
    n_r: usize,
    m_r: usize,
}

#[derive(Deserialize)]
struct ProblemWire {
    #[serde(rename = "F")]
    f: RealizationWire,
    #[serde(rename = "F_inv")]
    f_inv: RealizationWire,
    dims: DimsWire,
    u: MatrixWire,
    v: MatrixWire,
    #[serde(rename = "T")]
    t: Option<MatrixWire>,
}

#[derive(Deserialize)]
struct MarginalSpecWire {
    #[serde(rename = "N1")]
    n1: usize,
    #[serde(rename = "N2")]
    n2: usize,
    side: String,
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Json(e.to_string())
}

pub fn matrix_from_json(s: &str) -> Result<CMatrix> {
    let wire: MatrixWire = serde_json::from_str(s).map_err(json_err)?;
    wire.build("matrix")
}

pub fn realization_from_json(s: &str) -> Result<Realization> {
    let wire: RealizationWire = serde_json::from_str(s).map_err(json_err)?;
    wire.build()
}

/// Marginal-spec fragment: `{"N1": …, "N2": …, "side": "A"|"B"}`.
pub fn marginal_spec_from_json(s: &str) -> Result<crate::marginal::MarginalSpec> {
    let wire: MarginalSpecWire = serde_json::from_str(s).map_err(json_err)?;
    let side = match wire.side.as_str() {
        "A" => crate::marginal::MarginalSide::A,
        "B" => crate::marginal::MarginalSide::B,
        other => return Err(Error::Json(format!("side must be \"A\" or \"B\", got {other:?}"))),
    };
    Ok(crate::marginal::MarginalSpec::new(wire.n1, wire.n2, side))
}

pub fn marginal_spec_to_json(spec: &crate::marginal::MarginalSpec) -> String {
    let side = match spec.side {
        crate::marginal::MarginalSide::A => "A",
        crate::marginal::MarginalSide::B => "B",
    };
    format!(
        "{{\"N1\":{},\"N2\":{},\"side\":\"{side}\"}}",
        spec.n1, spec.n2
    )
}

/// Parse a factorization problem; the optional transformation comes back
/// separately.
pub fn problem_from_json(s: &str) -> Result<(FactorizationProblem, Option<CMatrix>)> {
    let wire: ProblemWire = serde_json::from_str(s).map_err(json_err)?;
    let dims = FactorDims {
        n_l: wire.dims.n_l,
        m_l: wire.dims.m_l,
        n_r: wire.dims.n_r,
        m_r: wire.dims.m_r,
    };
    let problem = FactorizationProblem {
        f: wire.f.build()?,
        f_inv: wire.f_inv.build()?,
        dims,
        u: wire.u.build("u")?,
        v: wire.v.build("v")?,
    };
    let t = wire.t.map(|t| t.build("T")).transpose()?;
    Ok((problem, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_matrix, random_realization, SplitMix64};

    #[test]
    fn float_formatting_grammar() {
        assert_eq!(fmt_f64(0.0), "0.0000000000000000");
        assert_eq!(fmt_f64(1.5), "1.5000000000000000");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000");
        assert_eq!(fmt_f64(1e-12), "9.9999999999999998e-13");
        assert_eq!(fmt_f64(1e300), "1.0000000000000001e300");
        assert_eq!(fmt_f64(123.456), "123.45600000000000");
        // 0.1 carries its full 17-digit double expansion
        assert_eq!(fmt_f64(0.1), "0.10000000000000001");
    }

    #[test]
    fn float_formatting_round_trips_exactly() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..2000 {
            let x = rng.signed_unit() * 10f64.powi((rng.below(60) as i32) - 30);
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x} -> {s} -> {back}");
        }
    }

    #[test]
    fn matrix_round_trip() {
        let mut rng = SplitMix64::new(5);
        let m = random_matrix(&mut rng, 3, 4);
        let s = matrix_to_json(&m);
        let back = matrix_from_json(&s).unwrap();
        assert_eq!(back.max_abs_diff(&m), 0.0);
        // and the rendering is stable
        assert_eq!(matrix_to_json(&back), s);
    }

    #[test]
    fn realization_round_trip_including_empty_state() {
        let mut rng = SplitMix64::new(6);
        for n in [0usize, 3] {
            let r = random_realization(&mut rng, n, 2, 3, false).unwrap();
            let s = realization_to_json(&r);
            let back = realization_from_json(&s).unwrap();
            assert_eq!(back.max_abs_diff(&r), 0.0);
        }
    }

    #[test]
    fn parse_rejects_bad_inputs() {
        assert!(matrix_from_json("{\"rows\":2,\"cols\":2,\"data\":[[1,2]]}").is_err());
        assert!(matrix_from_json("{\"rows\":1,\"cols\":1,\"data\":[[1e999,0]]}").is_err());
        let r = "{\"n\":1,\"m_in\":1,\"m_out\":1,\
                 \"A\":{\"rows\":2,\"cols\":2,\"data\":[[0,0],[0,0],[0,0],[0,0]]},\
                 \"B\":{\"rows\":2,\"cols\":1,\"data\":[[1,0],[0,0]]},\
                 \"C\":{\"rows\":1,\"cols\":2,\"data\":[[1,0],[0,0]]},\
                 \"D\":{\"rows\":1,\"cols\":1,\"data\":[[0,0]]}}";
        // declared n does not match the blocks
        assert!(realization_from_json(r).is_err());
    }

    #[test]
    fn problem_round_trip() {
        let mut rng = SplitMix64::new(7);
        let dims = crate::factorization::FactorDims {
            n_l: 1,
            m_l: 2,
            n_r: 1,
            m_r: 2,
        };
        let inst = crate::factorization::planted_instance(&mut rng, dims);
        let s = problem_to_json(&inst.problem, Some(&inst.t));
        let (problem, t) = problem_from_json(&s).unwrap();
        assert_eq!(problem.f.max_abs_diff(&inst.problem.f), 0.0);
        assert_eq!(t.unwrap().max_abs_diff(&inst.t), 0.0);
        assert_eq!(problem.dims, dims);
    }

    #[test]
    fn marginal_spec_fragment_round_trip() {
        let spec = crate::marginal::MarginalSpec::new(2, 3, crate::marginal::MarginalSide::B);
        let s = marginal_spec_to_json(&spec);
        assert_eq!(s, "{\"N1\":2,\"N2\":3,\"side\":\"B\"}");
        let back = marginal_spec_from_json(&s).unwrap();
        assert_eq!(back, spec);
        assert!(marginal_spec_from_json("{\"N1\":2,\"N2\":3,\"side\":\"C\"}").is_err());
    }

    #[test]
    fn error_envelope_shape() {
        let e = Error::Pole {
            z: Complex64::new(1.0, 2.0),
        };
        let s = error_to_json(&e);
        assert!(s.starts_with("{\"error\":{\"kind\":\"pole\""), "{s}");
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["error"]["kind"], "pole");
    }
}
