//! Job files: parsing and validation.
//!
//! A job is a JSON object with the keys `root_datum`, `Q`, `n`, `C`, `field`,
//! `psi`, `kappa` and `command`; `docs/jobspec.md` documents each one.
//! Validation collects every problem it finds, each tagged with a stable
//! code and the line of the offending key when it can be located.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use mlk_core::rootdata::preset_names;

/// Stable error codes for job validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorCode {
    #[serde(rename = "E_PARSE")]
    Parse,
    #[serde(rename = "E_UNKNOWN_KEY")]
    UnknownKey,
    #[serde(rename = "E_MISSING_FIELD")]
    MissingField,
    #[serde(rename = "E_WRONG_SHAPE")]
    WrongShape,
    #[serde(rename = "E_NOT_INTEGER")]
    NotInteger,
    #[serde(rename = "E_UNKNOWN_PRESET")]
    UnknownPreset,
    #[serde(rename = "E_BAD_VALUE")]
    BadValue,
    #[serde(rename = "E_IO")]
    Io,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Parse => "E_PARSE",
            ErrorCode::UnknownKey => "E_UNKNOWN_KEY",
            ErrorCode::MissingField => "E_MISSING_FIELD",
            ErrorCode::WrongShape => "E_WRONG_SHAPE",
            ErrorCode::NotInteger => "E_NOT_INTEGER",
            ErrorCode::UnknownPreset => "E_UNKNOWN_PRESET",
            ErrorCode::BadValue => "E_BAD_VALUE",
            ErrorCode::Io => "E_IO",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaError {
    pub code: ErrorCode,
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code.as_str())?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
            if let Some(col) = self.column {
                write!(f, ", column {col}")?;
            }
        }
        write!(f, ": {}", self.message)
    }
}

/// Root datum: a preset name or explicit data on `Y = X = Z^rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatumSpec {
    Preset(String),
    Explicit { rank: usize, pairing: Vec<Vec<i64>>, coroots: Vec<Vec<i64>>, roots: Vec<Vec<i64>> },
}

/// The quadratic form: values on the simple coroots (`alpha1_vee`, ...) or
/// values on the basis of `Y` with optional cross terms `B(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormSpec {
    Basis { values: Vec<i64>, cross: Vec<Vec<i64>> },
    Coroots(BTreeMap<String, i64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    MinusI,
    PlusI,
}

/// `p = None` is the real field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: Option<i64>,
    pub precision: Option<u32>,
    pub orientation: Option<Orientation>,
}

/// `psi = ^c psi_0` with `c = p^conductor * unit` (for the reals, `c = unit`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiSpec {
    pub conductor: i64,
    pub unit: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Modify,
    Bisector,
    Tetractor,
    Verify,
    Symbols,
    Params,
    Unramified,
    Report,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Modify,
        Command::Bisector,
        Command::Tetractor,
        Command::Verify,
        Command::Symbols,
        Command::Params,
        Command::Unramified,
        Command::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Modify => "modify",
            Command::Bisector => "bisector",
            Command::Tetractor => "tetractor",
            Command::Verify => "verify",
            Command::Symbols => "symbols",
            Command::Params => "params",
            Command::Unramified => "unramified",
            Command::Report => "report",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub root_datum: DatumSpec,
    #[serde(rename = "Q")]
    pub q: FormSpec,
    pub n: i64,
    #[serde(rename = "C")]
    pub c: Option<Vec<Vec<i64>>>,
    pub field: Option<FieldSpec>,
    pub psi: Option<PsiSpec>,
    pub kappa: Option<usize>,
    pub command: Option<Command>,
}

const TOP_KEYS: [&str; 8] = ["root_datum", "Q", "n", "C", "field", "psi", "kappa", "command"];

struct Checker<'a> {
    text: &'a str,
    errors: Vec<SchemaError>,
}

impl Checker<'_> {
    fn line_of(&self, key: &str) -> Option<usize> {
        let needle = format!("\"{key}\"");
        let at = self.text.find(&needle)?;
        Some(self.text[..at].matches('\n').count() + 1)
    }

    fn push(&mut self, code: ErrorCode, key: &str, message: String) {
        let line = self.line_of(key);
        self.errors.push(SchemaError { code, message, line, column: None });
    }

    fn keys(&mut self, obj: &Map<String, Value>, allowed: &[&str], path: &str) {
        for k in obj.keys() {
            if !allowed.contains(&k.as_str()) {
                self.push(ErrorCode::UnknownKey, k, format!("unknown key {path}{k:?}; expected one of {allowed:?}"));
            }
        }
    }

    fn int(&mut self, v: &Value, key: &str, path: &str) -> Option<i64> {
        match v {
            Value::Number(num) => match num.as_i64() {
                Some(x) => Some(x),
                None => {
                    self.push(ErrorCode::NotInteger, key, format!("{path} must be an integer, got {num}"));
                    None
                }
            },
            other => {
                self.push(ErrorCode::NotInteger, key, format!("{path} must be an integer, got {}", kind(other)));
                None
            }
        }
    }

    fn vector(&mut self, v: &Value, key: &str, path: &str) -> Option<Vec<i64>> {
        let Value::Array(items) = v else {
            self.push(ErrorCode::WrongShape, key, format!("{path} must be an array of integers"));
            return None;
        };
        let out: Vec<Option<i64>> =
            items.iter().enumerate().map(|(i, x)| self.int(x, key, &format!("{path}[{i}]"))).collect();
        out.into_iter().collect()
    }

    fn matrix(&mut self, v: &Value, key: &str, path: &str) -> Option<Vec<Vec<i64>>> {
        let Value::Array(rows) = v else {
            self.push(ErrorCode::WrongShape, key, format!("{path} must be an array of integer arrays"));
            return None;
        };
        let out: Vec<Option<Vec<i64>>> =
            rows.iter().enumerate().map(|(i, r)| self.vector(r, key, &format!("{path}[{i}]"))).collect();
        out.into_iter().collect()
    }

    fn square(&mut self, m: &[Vec<i64>], size: usize, key: &str, path: &str) -> bool {
        if m.len() != size || m.iter().any(|r| r.len() != size) {
            self.push(ErrorCode::WrongShape, key, format!("{path} must be {size} x {size}"));
            return false;
        }
        true
    }

    fn datum(&mut self, v: &Value) -> Option<(DatumSpec, usize, usize)> {
        match v {
            Value::String(name) => {
                if preset_names().contains(&name.as_str()) {
                    let p = mlk_core::rootdata::preset(name).ok()?;
                    Some((DatumSpec::Preset(name.clone()), p.datum.rank(), p.datum.semisimple_rank()))
                } else {
                    self.push(
                        ErrorCode::UnknownPreset,
                        "root_datum",
                        format!("unknown preset {name:?}; known presets: {:?}", preset_names()),
                    );
                    None
                }
            }
            Value::Object(obj) => {
                self.keys(obj, &["rank", "pairing", "coroots", "roots"], "root_datum.");
                let mut get = |k: &str| {
                    let v = obj.get(k);
                    if v.is_none() {
                        self.push(ErrorCode::MissingField, "root_datum", format!("root_datum.{k} is required"));
                    }
                    v
                };
                let (rank, pairing, coroots, roots) = (get("rank"), get("pairing"), get("coroots"), get("roots"));
                let rank = self.int(rank?, "rank", "root_datum.rank")?;
                let pairing = self.matrix(pairing?, "pairing", "root_datum.pairing")?;
                let coroots = self.matrix(coroots?, "coroots", "root_datum.coroots")?;
                let roots = self.matrix(roots?, "roots", "root_datum.roots")?;
                if rank < 0 {
                    self.push(ErrorCode::BadValue, "rank", "root_datum.rank must be non-negative".into());
                    return None;
                }
                let rank = rank as usize;
                let l = pairing.len();
                let mut ok = self.square(&pairing, l, "pairing", "root_datum.pairing");
                for (name, vs) in [("coroots", &coroots), ("roots", &roots)] {
                    if vs.len() != l || vs.iter().any(|x| x.len() != rank) {
                        self.push(
                            ErrorCode::WrongShape,
                            name,
                            format!("root_datum.{name} must hold {l} vectors of length {rank}"),
                        );
                        ok = false;
                    }
                }
                ok.then_some((DatumSpec::Explicit { rank, pairing, coroots, roots }, rank, l))
            }
            other => {
                self.push(
                    ErrorCode::WrongShape,
                    "root_datum",
                    format!("root_datum must be a preset name or an object, got {}", kind(other)),
                );
                None
            }
        }
    }

    fn form(&mut self, v: &Value, rank: Option<usize>, ss_rank: Option<usize>) -> Option<FormSpec> {
        let Value::Object(obj) = v else {
            self.push(ErrorCode::WrongShape, "Q", format!("Q must be an object, got {}", kind(v)));
            return None;
        };
        if obj.contains_key("values") || obj.contains_key("cross") {
            self.keys(obj, &["values", "cross"], "Q.");
            let Some(values) = obj.get("values") else {
                self.push(ErrorCode::MissingField, "Q", "Q.values is required with Q.cross".into());
                return None;
            };
            let values = self.vector(values, "values", "Q.values")?;
            let cross = match obj.get("cross") {
                Some(c) => self.matrix(c, "cross", "Q.cross")?,
                None => Vec::new(),
            };
            if let Some(r) = rank {
                if values.len() != r {
                    self.push(ErrorCode::WrongShape, "values", format!("Q.values must have length {r}"));
                    return None;
                }
                if !cross.is_empty() && !self.square(&cross, r, "cross", "Q.cross") {
                    return None;
                }
            }
            return Some(FormSpec::Basis { values, cross });
        }
        let mut out = BTreeMap::new();
        let l = ss_rank.unwrap_or(0);
        let expected: Vec<String> = (1..=l).map(|i| format!("alpha{i}_vee")).collect();
        for (k, x) in obj {
            if ss_rank.is_some() && !expected.contains(k) {
                self.push(
                    ErrorCode::UnknownKey,
                    k,
                    format!("unknown key Q.{k}; expected {expected:?} or values/cross"),
                );
                continue;
            }
            if let Some(x) = self.int(x, k, &format!("Q.{k}")) {
                out.insert(k.clone(), x);
            }
        }
        if ss_rank.is_some() {
            for k in &expected {
                if !obj.contains_key(k) {
                    self.push(ErrorCode::MissingField, "Q", format!("Q.{k} is required"));
                }
            }
        }
        if l == 0 && ss_rank.is_some() {
            self.push(ErrorCode::WrongShape, "Q", "a torus needs Q as {\"values\": [...]}".into());
            return None;
        }
        (ss_rank.is_some() && out.len() == l).then_some(FormSpec::Coroots(out))
    }

    fn field(&mut self, v: &Value) -> Option<FieldSpec> {
        let Value::Object(obj) = v else {
            self.push(ErrorCode::WrongShape, "field", format!("field must be an object, got {}", kind(v)));
            return None;
        };
        self.keys(obj, &["p", "precision", "orientation", "n"], "field.");
        let p = match obj.get("p") {
            None => {
                self.push(ErrorCode::MissingField, "field", "field.p is required (a prime or \"real\")".into());
                return None;
            }
            Some(Value::String(s)) if s == "real" => None,
            Some(Value::String(s)) => {
                self.push(ErrorCode::BadValue, "p", format!("field.p must be a prime or \"real\", got {s:?}"));
                return None;
            }
            Some(x) => {
                let p = self.int(x, "p", "field.p")?;
                if !is_odd_prime(p) {
                    self.push(ErrorCode::BadValue, "p", format!("field.p must be an odd prime, got {p}"));
                    return None;
                }
                Some(p)
            }
        };
        let precision = match obj.get("precision") {
            None => None,
            Some(x) => {
                let k = self.int(x, "precision", "field.precision")?;
                if !(1..=12).contains(&k) {
                    self.push(ErrorCode::BadValue, "precision", format!("field.precision must be in 1..=12, got {k}"));
                    return None;
                }
                Some(k as u32)
            }
        };
        let orientation = match obj.get("orientation") {
            None => None,
            Some(Value::String(s)) if s == "minus_i" => Some(Orientation::MinusI),
            Some(Value::String(s)) if s == "plus_i" => Some(Orientation::PlusI),
            Some(other) => {
                self.push(
                    ErrorCode::BadValue,
                    "orientation",
                    format!("field.orientation must be \"minus_i\" or \"plus_i\", got {other}"),
                );
                return None;
            }
        };
        Some(FieldSpec { p, precision, orientation })
    }

    fn psi(&mut self, v: &Value) -> Option<PsiSpec> {
        let Value::Object(obj) = v else {
            self.push(ErrorCode::WrongShape, "psi", format!("psi must be an object, got {}", kind(v)));
            return None;
        };
        self.keys(obj, &["conductor", "unit"], "psi.");
        let conductor = match obj.get("conductor") {
            Some(x) => self.int(x, "conductor", "psi.conductor")?,
            None => 0,
        };
        let unit = match obj.get("unit") {
            Some(x) => self.int(x, "unit", "psi.unit")?,
            None => 1,
        };
        if unit == 0 {
            self.push(ErrorCode::BadValue, "unit", "psi.unit must be non-zero".into());
            return None;
        }
        Some(PsiSpec { conductor, unit })
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

pub(crate) fn is_odd_prime(p: i64) -> bool {
    p > 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Parses and validates a job. On failure, returns every problem found.
pub fn parse_jobspec(text: &str) -> Result<JobSpec, Vec<SchemaError>> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        vec![SchemaError {
            code: ErrorCode::Parse,
            message: e.to_string(),
            line: Some(e.line()),
            column: Some(e.column()),
        }]
    })?;
    let Value::Object(obj) = value else {
        return Err(vec![SchemaError {
            code: ErrorCode::WrongShape,
            message: "a job must be a JSON object".into(),
            line: Some(1),
            column: None,
        }]);
    };
    let mut ck = Checker { text, errors: Vec::new() };
    ck.keys(&obj, &TOP_KEYS, "");
    for k in ["root_datum", "Q", "n"] {
        if !obj.contains_key(k) {
            ck.errors.push(SchemaError {
                code: ErrorCode::MissingField,
                message: format!("missing required field {k:?}"),
                line: None,
                column: None,
            });
        }
    }
    let datum = obj.get("root_datum").and_then(|v| ck.datum(v));
    let (rank, ss) = match &datum {
        Some((_, r, l)) => (Some(*r), Some(*l)),
        None => (None, None),
    };
    let q = obj.get("Q").and_then(|v| ck.form(v, rank, ss));
    let n = obj.get("n").and_then(|v| ck.int(v, "n", "n"));
    if let Some(n) = n {
        if !(1..=64).contains(&n) {
            ck.push(ErrorCode::BadValue, "n", format!("n must be in 1..=64, got {n}"));
        }
    }
    let c = match obj.get("C") {
        None | Some(Value::Null) => Some(None),
        Some(v) => ck.matrix(v, "C", "C").and_then(|m| {
            let ok = rank.map_or(true, |r| ck.square(&m, r, "C", "C"));
            let bits = m.iter().flatten().all(|&x| x == 0 || x == 1);
            if !bits {
                ck.push(ErrorCode::BadValue, "C", "C entries must be 0 or 1".into());
            }
            (ok && bits).then_some(Some(m))
        }),
    };
    let field = match obj.get("field") {
        None | Some(Value::Null) => Some(None),
        Some(v) => ck.field(v).map(Some),
    };
    if let (Some(Value::Object(f)), Some(n)) = (obj.get("field"), n) {
        if let Some(fnv) = f.get("n") {
            if ck.int(fnv, "n", "field.n").is_some_and(|x| x != n) {
                ck.push(ErrorCode::BadValue, "field", format!("field.n must equal n = {n}"));
            }
        }
    }
    let psi = match obj.get("psi") {
        None | Some(Value::Null) => Some(None),
        Some(v) => ck.psi(v).map(Some),
    };
    let kappa = match obj.get("kappa") {
        None | Some(Value::Null) => Some(None),
        Some(v) => ck.int(v, "kappa", "kappa").and_then(|k| {
            if k < 0 {
                ck.push(ErrorCode::BadValue, "kappa", "kappa must be a non-negative index".into());
                None
            } else {
                Some(Some(k as usize))
            }
        }),
    };
    let command = match obj.get("command") {
        None | Some(Value::Null) => Some(None),
        Some(Value::String(s)) => match Command::from_name(s) {
            Some(c) => Some(Some(c)),
            None => {
                let names: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
                ck.push(ErrorCode::BadValue, "command", format!("unknown command {s:?}; expected one of {names:?}"));
                None
            }
        },
        Some(other) => {
            ck.push(ErrorCode::WrongShape, "command", format!("command must be a string, got {}", kind(other)));
            None
        }
    };
    if let (Some(Some(f)), Some(Some(p))) = (&field, &psi) {
        if f.p.is_none() && (p.conductor != 0 || p.unit.abs() != 1) {
            ck.push(ErrorCode::BadValue, "psi", "over the reals psi takes conductor 0 and unit +-1".into());
        }
    }
    if !ck.errors.is_empty() {
        return Err(ck.errors);
    }
    Ok(JobSpec {
        root_datum: datum.expect("validated").0,
        q: q.expect("validated"),
        n: n.expect("validated"),
        c: c.expect("validated"),
        field: field.expect("validated"),
        psi: psi.expect("validated"),
        kappa: kappa.expect("validated"),
        command: command.expect("validated"),
    })
}
