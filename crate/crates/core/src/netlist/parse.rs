use thiserror::Error;

use super::units::parse_value;
use super::validate::{validate_netlist, Diagnostic};
use super::{ElementKind, Netlist, Probe, Tran, GROUND};
use crate::devices::{MosfetParams, MtjParams, Polarity, PowerClock, Pulse, SourceSpec};

#[derive(Debug, Error, PartialEq)]
pub enum NetlistError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate element name `{name}`")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: unknown parameter `{key}` for element `{element}`")]
    UnknownParameter {
        line: usize,
        element: String,
        key: String,
    },
    #[error("netlist has elements but none is connected to ground node `0`")]
    MissingGround,
    #[error("invalid netlist: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
}

impl NetlistError {
    pub fn line(&self) -> Option<usize> {
        match self {
            NetlistError::Syntax { line, .. }
            | NetlistError::DuplicateName { line, .. }
            | NetlistError::UnknownParameter { line, .. } => Some(*line),
            _ => None,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> NetlistError {
    NetlistError::Syntax {
        line,
        message: message.into(),
    }
}

/// Splits a line into tokens. Parentheses become their own tokens, commas
/// are whitespace and `KEY = VALUE` is glued into `KEY=VALUE`.
fn tokenize(line: &str) -> Vec<String> {
    let spaced = line
        .replace('(', " ( ")
        .replace(')', " ) ")
        .replace(',', " ")
        .replace('=', " = ");
    let raw: Vec<&str> = spaced.split_whitespace().collect();
    let mut out: Vec<String> = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        if raw[i] == "=" && !out.is_empty() && i + 1 < raw.len() {
            let key = out.pop().unwrap();
            out.push(format!("{key}={}", raw[i + 1]));
            i += 2;
        } else {
            out.push(raw[i].to_string());
            i += 1;
        }
    }
    out
}

struct Line<'a> {
    no: usize,
    tokens: &'a [String],
}

impl Line<'_> {
    fn value(&self, idx: usize, what: &str) -> Result<f64, NetlistError> {
        let tok = self
            .tokens
            .get(idx)
            .ok_or_else(|| syntax(self.no, format!("missing {what}")))?;
        parse_value(tok).ok_or_else(|| syntax(self.no, format!("bad {what} `{tok}`")))
    }

    fn node(&self, idx: usize) -> Result<String, NetlistError> {
        let tok = self
            .tokens
            .get(idx)
            .ok_or_else(|| syntax(self.no, "missing node name"))?;
        if tok.contains('=') || tok == "(" || tok == ")" {
            return Err(syntax(self.no, format!("bad node name `{tok}`")));
        }
        Ok(tok.to_ascii_lowercase())
    }
}

/// Parses `KEY=VALUE` tokens, calling `apply` for each. `apply` returns
/// `Ok(false)` for keys it does not know.
fn key_values(
    line: &Line,
    from: usize,
    element: &str,
    mut apply: impl FnMut(&str, &str) -> Result<bool, String>,
) -> Result<(), NetlistError> {
    for tok in &line.tokens[from..] {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| syntax(line.no, format!("expected KEY=VALUE, found `{tok}`")))?;
        let key = key.to_ascii_uppercase();
        match apply(&key, val) {
            Ok(true) => {}
            Ok(false) => {
                return Err(NetlistError::UnknownParameter {
                    line: line.no,
                    element: element.to_string(),
                    key,
                })
            }
            Err(msg) => return Err(syntax(line.no, msg)),
        }
    }
    Ok(())
}

fn num(key: &str, val: &str) -> Result<f64, String> {
    parse_value(val).ok_or_else(|| format!("bad value `{val}` for {key}"))
}

fn parse_source_spec(line: &Line, from: usize) -> Result<SourceSpec, NetlistError> {
    let toks = &line.tokens[from..];
    let head = toks
        .first()
        .ok_or_else(|| syntax(line.no, "missing source value"))?;
    let upper = head.to_ascii_uppercase();
    let args = |n_min: usize, n_max: usize| -> Result<Vec<f64>, NetlistError> {
        if toks.get(1).map(String::as_str) != Some("(") || toks.last().map(String::as_str) != Some(")") {
            return Err(syntax(line.no, format!("{upper} expects a parenthesised argument list")));
        }
        let inner = &toks[2..toks.len() - 1];
        if inner.len() < n_min || inner.len() > n_max {
            return Err(syntax(line.no, format!("wrong number of {upper} arguments")));
        }
        inner
            .iter()
            .map(|t| parse_value(t).ok_or_else(|| syntax(line.no, format!("bad {upper} argument `{t}`"))))
            .collect()
    };
    match upper.as_str() {
        "DC" => {
            if toks.len() != 2 {
                return Err(syntax(line.no, "DC expects one value"));
            }
            Ok(SourceSpec::Dc(line.value(from + 1, "DC value")?))
        }
        "PWL" => {
            let v = args(2, usize::MAX)?;
            if v.len() % 2 != 0 {
                return Err(syntax(line.no, "PWL expects time/value pairs"));
            }
            Ok(SourceSpec::Pwl(v.chunks(2).map(|c| (c[0], c[1])).collect()))
        }
        "PULSE" => {
            let v = args(7, 7)?;
            Ok(SourceSpec::Pulse(Pulse {
                v1: v[0],
                v2: v[1],
                delay: v[2],
                rise: v[3],
                fall: v[4],
                width: v[5],
                period: v[6],
            }))
        }
        "PCLK" => {
            let v = args(2, 3)?;
            Ok(SourceSpec::PowerClock(PowerClock {
                vdd: v[0],
                t_phase: v[1],
                t0: v.get(2).copied().unwrap_or(0.0),
            }))
        }
        _ => {
            if toks.len() != 1 {
                return Err(syntax(line.no, format!("unexpected source specification `{head}`")));
            }
            Ok(SourceSpec::Dc(line.value(from, "source value")?))
        }
    }
}

fn parse_element(line: &Line) -> Result<(String, ElementKind), NetlistError> {
    let name = line.tokens[0].clone();
    let letter = name.chars().next().unwrap().to_ascii_uppercase();
    let kind = match letter {
        'R' => {
            if line.tokens.len() != 4 {
                return Err(syntax(line.no, "resistor expects: R<name> n1 n2 <ohms>"));
            }
            ElementKind::Resistor {
                n1: line.node(1)?,
                n2: line.node(2)?,
                ohms: line.value(3, "resistance")?,
            }
        }
        'C' => {
            let farads = line.value(3, "capacitance")?;
            let mut ic = None;
            key_values(line, 4, &name, |k, v| match k {
                "IC" => {
                    ic = Some(num(k, v)?);
                    Ok(true)
                }
                _ => Ok(false),
            })?;
            ElementKind::Capacitor {
                n1: line.node(1)?,
                n2: line.node(2)?,
                farads,
                initial_volts: ic,
            }
        }
        'V' | 'I' => {
            let np = line.node(1)?;
            let nn = line.node(2)?;
            let spec = parse_source_spec(line, 3)?;
            if letter == 'V' {
                ElementKind::VSource { np, nn, spec }
            } else {
                ElementKind::ISource { np, nn, spec }
            }
        }
        'M' => {
            let (d, g, s) = (line.node(1)?, line.node(2)?, line.node(3)?);
            let polarity = match line.tokens.get(4).map(|t| t.to_ascii_uppercase()).as_deref() {
                Some("N") => Polarity::N,
                Some("P") => Polarity::P,
                _ => return Err(syntax(line.no, "MOSFET expects polarity N or P after the terminals")),
            };
            let mut p = MosfetParams::default_for(polarity);
            key_values(line, 5, &name, |k, v| {
                let slot = match k {
                    "VT" => &mut p.vt0,
                    "KP" => &mut p.kp,
                    "W" => &mut p.w,
                    "L" => &mut p.l,
                    "LAMBDA" => &mut p.lambda,
                    "CG" => &mut p.cg,
                    _ => return Ok(false),
                };
                *slot = num(k, v)?;
                Ok(true)
            })?;
            ElementKind::Mosfet {
                d,
                g,
                s,
                polarity,
                params: p,
            }
        }
        'J' => {
            let (n_free, n_pinned) = (line.node(1)?, line.node(2)?);
            let mut p = MtjParams::default();
            let mut state = crate::devices::MtjConfig::Parallel;
            key_values(line, 3, &name, |k, v| {
                let slot = match k {
                    "RP" => &mut p.rp,
                    "TMR" => &mut p.tmr,
                    "IC" => &mut p.ic,
                    "TSW" => &mut p.tsw,
                    "STATE" => {
                        state = v.parse()?;
                        return Ok(true);
                    }
                    _ => return Ok(false),
                };
                *slot = num(k, v)?;
                Ok(true)
            })?;
            ElementKind::Mtj {
                n_free,
                n_pinned,
                params: p,
                initial_state: state,
            }
        }
        _ => return Err(syntax(line.no, format!("unknown element type `{letter}`"))),
    };
    Ok((name, kind))
}

fn parse_probe(tokens: &[String], i: &mut usize, line: usize) -> Result<(Option<char>, String), NetlistError> {
    let tok = &tokens[*i];
    let upper = tok.to_ascii_uppercase();
    if (upper == "V" || upper == "I") && tokens.get(*i + 1).map(String::as_str) == Some("(") {
        let name = tokens
            .get(*i + 2)
            .ok_or_else(|| syntax(line, "unterminated probe"))?;
        if tokens.get(*i + 3).map(String::as_str) != Some(")") {
            return Err(syntax(line, "unterminated probe"));
        }
        *i += 4;
        Ok((upper.chars().next(), name.clone()))
    } else if tok == "(" || tok == ")" || tok.contains('=') {
        Err(syntax(line, format!("bad probe `{tok}`")))
    } else {
        *i += 1;
        Ok((None, tok.clone()))
    }
}

/// Parses and validates a netlist.
pub fn parse_netlist(text: &str) -> Result<Netlist, NetlistError> {
    let mut nl = Netlist::new("");
    let mut seen = std::collections::HashSet::new();
    // (line, explicit kind, name) resolved once all elements are known.
    let mut probes: Vec<(usize, Option<char>, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let no = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('*') {
            continue;
        }
        if trimmed.starts_with('.') {
            let (word, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            match word.to_ascii_lowercase().as_str() {
                ".title" => nl.title = rest.trim().to_string(),
                ".end" => break,
                ".tran" => {
                    let tokens = tokenize(rest);
                    let line = Line { no, tokens: &tokens };
                    if tokens.len() != 2 {
                        return Err(syntax(no, ".tran expects: .tran <dt> <tstop>"));
                    }
                    nl.directives.tran = Some(Tran {
                        dt: line.value(0, "timestep")?,
                        tstop: line.value(1, "stop time")?,
                    });
                }
                ".record" => {
                    let tokens = tokenize(rest);
                    let mut i = 0;
                    while i < tokens.len() {
                        let (kind, name) = parse_probe(&tokens, &mut i, no)?;
                        probes.push((no, kind, name));
                    }
                }
                other => return Err(syntax(no, format!("unknown directive `{other}`"))),
            }
            continue;
        }
        let tokens = tokenize(trimmed);
        let line = Line { no, tokens: &tokens };
        let (name, kind) = parse_element(&line)?;
        if !seen.insert(name.to_ascii_lowercase()) {
            return Err(NetlistError::DuplicateName { line: no, name });
        }
        nl.add(name, kind);
    }

    for (no, kind, name) in probes {
        let probe = match kind {
            Some('V') => Probe::Voltage(name.to_ascii_lowercase()),
            Some(_) => Probe::Current(resolve_source(&nl, &name).ok_or_else(|| {
                syntax(no, format!("`{name}` is not a voltage source"))
            })?),
            None => match resolve_source(&nl, &name) {
                Some(src) => Probe::Current(src),
                None => Probe::Voltage(name.to_ascii_lowercase()),
            },
        };
        nl.directives.record.push(probe);
    }

    if !nl.elements.is_empty()
        && !nl
            .elements
            .iter()
            .any(|e| e.kind.terminals().contains(&GROUND))
    {
        return Err(NetlistError::MissingGround);
    }
    let diags = validate_netlist(&nl);
    if !diags.is_empty() {
        return Err(NetlistError::Invalid(diags));
    }
    Ok(nl)
}

fn resolve_source(nl: &Netlist, name: &str) -> Option<String> {
    nl.element(name).and_then(|e| match e.kind {
        ElementKind::VSource { .. } => Some(e.name.clone()),
        _ => None,
    })
}
