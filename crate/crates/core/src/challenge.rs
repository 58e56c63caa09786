//! Coach command and server configuration for the parameter-override
//! challenge mode.
//!
//! Command grammar:
//!
//! ```text
//! Cmd  := '(' 'change_player_param' Pair+ ')'
//! Pair := '(' name number ')'
//! ```
//!
//! with arbitrary whitespace between tokens. Names match `[a-z][a-z0-9_]*`;
//! numbers are decimals with optional sign, fraction and exponent.

use std::fmt;

use serde::Deserialize;
use thiserror::Error;

pub const COMMAND: &str = "change_player_param";
pub const MODE_PARAM: &str = "global_challenge_mode";

/// Parameters a home side may perturb to simulate bad weather.
pub const WEATHER_PARAMS: [&str; 8] = [
    "ball_accel_max",
    "ball_decay",
    "ball_rand",
    "ball_speed_max",
    "catch_probability",
    "inertia_moment",
    "kick_rand",
    "player_rand",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChallengeError {
    /// `pos` is a 0-based byte offset into the input.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("parameter {0} given more than once")]
    DuplicateParam(String),

    #[error("command has no parameter assignments")]
    EmptyCommand,

    #[error("invalid parameter name {0:?}: expected [a-z][a-z0-9_]*")]
    InvalidName(String),

    #[error("value of {0} is not finite")]
    NonFinite(String),

    #[error("registry {path}: {msg}")]
    Registry { path: String, msg: String },
}

type Result<T> = std::result::Result<T, ChallengeError>;

/// One server parameter assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamOverride {
    name: String,
    value: f64,
}

impl ParamOverride {
    pub fn new(name: impl Into<String>, value: f64) -> Result<Self> {
        let name = name.into();
        if !is_param_name(&name) {
            return Err(ChallengeError::InvalidName(name));
        }
        if !value.is_finite() {
            return Err(ChallengeError::NonFinite(name));
        }
        Ok(ParamOverride { name, value })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

impl fmt::Display for ParamOverride {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.name, self.value)
    }
}

pub fn is_param_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

/// Accepts `[+-]? (digits ('.' digits?)? | '.' digits) ([eE] [+-]? digits)?`.
pub fn is_number(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        *i - start
    };
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let mut mantissa = digits(&mut i);
    if i < b.len() && b[i] == b'.' {
        i += 1;
        mantissa += digits(&mut i);
    }
    if mantissa == 0 {
        return false;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        if digits(&mut i) == 0 {
            return false;
        }
    }
    i == b.len()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next_token(&mut self) -> Option<(usize, Token<'a>)> {
        let rest = &self.text[self.pos..];
        let skip = rest.len() - rest.trim_start().len();
        self.pos += skip;
        let start = self.pos;
        let rest = &self.text[start..];
        let c = rest.chars().next()?;
        let tok = match c {
            '(' => {
                self.pos += 1;
                Token::Open
            }
            ')' => {
                self.pos += 1;
                Token::Close
            }
            _ => {
                let len = rest
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(rest.len());
                self.pos += len;
                Token::Atom(&rest[..len])
            }
        };
        Some((start, tok))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Option<(usize, Token<'a>)>>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<(usize, Token<'a>)> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token());
        }
        self.peeked.unwrap()
    }

    fn bump(&mut self) -> Option<(usize, Token<'a>)> {
        let t = self.peek();
        self.peeked = None;
        t
    }

    fn eof_pos(&self) -> usize {
        self.lexer.text.len()
    }

    fn expect(&mut self, want: Token<'static>, what: &str) -> Result<usize> {
        match self.bump() {
            Some((pos, tok)) if tok == want => Ok(pos),
            Some((pos, tok)) => Err(syntax(pos, format!("expected {what}, found {}", describe(tok)))),
            None => Err(syntax(self.eof_pos(), format!("expected {what}, found end of input"))),
        }
    }

    fn atom(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.bump() {
            Some((pos, Token::Atom(s))) => Ok((pos, s)),
            Some((pos, tok)) => Err(syntax(pos, format!("expected {what}, found {}", describe(tok)))),
            None => Err(syntax(self.eof_pos(), format!("expected {what}, found end of input"))),
        }
    }
}

fn syntax(pos: usize, msg: String) -> ChallengeError {
    ChallengeError::Syntax { pos, msg }
}

fn describe(tok: Token<'_>) -> String {
    match tok {
        Token::Open => "'('".into(),
        Token::Close => "')'".into(),
        Token::Atom(s) => format!("{s:?}"),
    }
}

pub fn parse_change_command(text: &str) -> Result<Vec<ParamOverride>> {
    let mut p = Parser {
        lexer: Lexer { text, pos: 0 },
        peeked: None,
    };
    p.expect(Token::Open, "'('")?;
    let (pos, head) = p.atom(COMMAND)?;
    if head != COMMAND {
        return Err(syntax(pos, format!("expected {COMMAND}, found {head:?}")));
    }
    let mut out: Vec<ParamOverride> = Vec::new();
    loop {
        match p.bump() {
            Some((_, Token::Close)) => break,
            Some((_, Token::Open)) => {
                let (name_pos, name) = p.atom("parameter name")?;
                if !is_param_name(name) {
                    return Err(syntax(name_pos, format!("invalid parameter name {name:?}")));
                }
                let (num_pos, num) = p.atom("number")?;
                if !is_number(num) {
                    return Err(syntax(num_pos, format!("invalid number {num:?}")));
                }
                let value: f64 = num
                    .parse()
                    .map_err(|_| syntax(num_pos, format!("invalid number {num:?}")))?;
                if !value.is_finite() {
                    return Err(syntax(num_pos, format!("number {num:?} out of range")));
                }
                p.expect(Token::Close, "')'")?;
                if out.iter().any(|o| o.name == name) {
                    return Err(ChallengeError::DuplicateParam(name.to_string()));
                }
                out.push(ParamOverride {
                    name: name.to_string(),
                    value,
                });
            }
            Some((pos, tok)) => {
                return Err(syntax(pos, format!("expected '(' or ')', found {}", describe(tok))));
            }
            None => return Err(syntax(p.eof_pos(), "unterminated command".into())),
        }
    }
    if let Some((pos, tok)) = p.bump() {
        return Err(syntax(pos, format!("trailing input {}", describe(tok))));
    }
    if out.is_empty() {
        return Err(ChallengeError::EmptyCommand);
    }
    Ok(out)
}

fn check_list(overrides: &[ParamOverride]) -> Result<()> {
    if overrides.is_empty() {
        return Err(ChallengeError::EmptyCommand);
    }
    for (i, o) in overrides.iter().enumerate() {
        if overrides[..i].iter().any(|p| p.name == o.name) {
            return Err(ChallengeError::DuplicateParam(o.name.clone()));
        }
    }
    Ok(())
}

/// Canonical command text: single spaces, shortest round-trip numbers.
pub fn emit_change_command(overrides: &[ParamOverride]) -> Result<String> {
    check_list(overrides)?;
    let mut out = format!("({COMMAND}");
    for o in overrides {
        out.push_str(&format!(" ({} {})", o.name, o.value));
    }
    out.push(')');
    Ok(out)
}

/// `server::` lines for server.conf, each LF-terminated.
pub fn emit_server_conf(mode: bool, overrides: &[ParamOverride]) -> String {
    let mut out = format!("server::{MODE_PARAM} = {mode}\n");
    for o in overrides {
        out.push_str(&format!("server::{} = {}\n", o.name, o.value));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub name: String,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
}

/// Known parameter names, each with an optional numeric range.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamRegistry {
    entries: Vec<ParamSpec>,
}

impl ParamRegistry {
    pub fn new(entries: Vec<ParamSpec>) -> Result<Self> {
        let mut reg = ParamRegistry { entries: Vec::new() };
        for (i, e) in entries.into_iter().enumerate() {
            reg.insert(e).map_err(|msg| ChallengeError::Registry {
                path: format!("[{i}]"),
                msg,
            })?;
        }
        Ok(reg)
    }

    /// The eight weather parameters; only `catch_probability` is range-bound.
    pub fn weather() -> Self {
        ParamRegistry {
            entries: WEATHER_PARAMS
                .iter()
                .map(|&name| ParamSpec {
                    name: name.to_string(),
                    min: (name == "catch_probability").then_some(0.0),
                    max: (name == "catch_probability").then_some(1.0),
                })
                .collect(),
        }
    }

    /// Registry file: JSON array of `{name, min?, max?}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let entries: Vec<ParamSpec> = serde_path_to_error::deserialize(de).map_err(|e| ChallengeError::Registry {
            path: e.path().to_string(),
            msg: e.into_inner().to_string(),
        })?;
        ParamRegistry::new(entries)
    }

    /// Adds entries from another registry; names already present are an error.
    pub fn extend(&mut self, other: ParamRegistry) -> Result<()> {
        for e in other.entries {
            let name = e.name.clone();
            self.insert(e).map_err(|msg| ChallengeError::Registry { path: name, msg })?;
        }
        Ok(())
    }

    fn insert(&mut self, e: ParamSpec) -> std::result::Result<(), String> {
        if !is_param_name(&e.name) {
            return Err(format!("invalid parameter name {:?}", e.name));
        }
        if self.get(&e.name).is_some() {
            return Err(format!("duplicate parameter {}", e.name));
        }
        if let (Some(lo), Some(hi)) = (e.min, e.max) {
            if lo > hi {
                return Err(format!("{}: min {lo} > max {hi}", e.name));
            }
        }
        self.entries.push(e);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&ParamSpec> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn entries(&self) -> &[ParamSpec] {
        &self.entries
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FindingKind {
    UnknownParam,
    OutOfRange {
        value: f64,
        min: Option<f64>,
        max: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub name: String,
    pub severity: Severity,
    pub kind: FindingKind,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match &self.kind {
            FindingKind::UnknownParam => write!(f, "{sev}: {}: unknown parameter", self.name),
            FindingKind::OutOfRange { value, min, max } => {
                let bound = |b: &Option<f64>| b.map_or_else(|| "-".to_string(), |v| v.to_string());
                write!(
                    f,
                    "{sev}: {}: value {value} outside [{}, {}]",
                    self.name,
                    bound(min),
                    bound(max)
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Error)
    }
}

/// Unknown names are errors under `strict`, warnings otherwise; values
/// outside a registered range are warnings.
pub fn validate(overrides: &[ParamOverride], registry: &ParamRegistry, strict: bool) -> ValidationReport {
    let mut findings = Vec::new();
    for o in overrides {
        match registry.get(&o.name) {
            None => findings.push(Finding {
                name: o.name.clone(),
                severity: if strict { Severity::Error } else { Severity::Warning },
                kind: FindingKind::UnknownParam,
            }),
            Some(spec) => {
                let below = spec.min.is_some_and(|lo| o.value < lo);
                let above = spec.max.is_some_and(|hi| o.value > hi);
                if below || above {
                    findings.push(Finding {
                        name: o.name.clone(),
                        severity: Severity::Warning,
                        kind: FindingKind::OutOfRange {
                            value: o.value,
                            min: spec.min,
                            max: spec.max,
                        },
                    });
                }
            }
        }
    }
    ValidationReport { findings }
}
