//! Assertion files checked against a recorded trace.
//!
//! ```text
//! expect count kind=PinChange level=HIGH == 1
//! expect order SerialTx[0].byte == 0x68
//! expect order PinChange[0] < PinChange[1]
//! ```

use std::fmt;

use immerse::sceneio::ParsedRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Op {
    fn parse(s: &str) -> Option<Op> {
        Some(match s {
            "==" => Op::Eq,
            "!=" => Op::Ne,
            "<" => Op::Lt,
            "<=" => Op::Le,
            ">" => Op::Gt,
            ">=" => Op::Ge,
            _ => return None,
        })
    }

    fn holds<T: PartialOrd>(self, a: T, b: T) -> bool {
        match self {
            Op::Eq => a == b,
            Op::Ne => a != b,
            Op::Lt => a < b,
            Op::Le => a <= b,
            Op::Gt => a > b,
            Op::Ge => a >= b,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Op::Eq => "==",
            Op::Ne => "!=",
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Gt => ">",
            Op::Ge => ">=",
        }
    }
}

/// `Kind[index]`: the index-th record of that kind in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nth {
    pub kind: String,
    pub index: usize,
}

impl Nth {
    fn parse(s: &str) -> Option<Nth> {
        let (kind, rest) = s.split_once('[')?;
        let index = rest.strip_suffix(']')?.parse().ok()?;
        (!kind.is_empty()).then(|| Nth { kind: kind.to_string(), index })
    }

    fn find<'a>(&self, trace: &'a [ParsedRecord]) -> Option<(usize, &'a ParsedRecord)> {
        trace.iter().enumerate().filter(|(_, r)| r.kind == self.kind).nth(self.index)
    }
}

impl fmt::Display for Nth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    Count { filters: Vec<(String, String)>, op: Op, n: usize },
    Field { at: Nth, key: String, op: Op, value: String },
    Before { a: Nth, op: Op, b: Nth },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub line: usize,
    pub text: String,
    pub predicate: Predicate,
}

pub fn parse_assertions(text: &str) -> Result<Vec<Assertion>, (usize, String)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        let predicate = match words.as_slice() {
            ["expect", "count", rest @ ..] if rest.len() >= 2 => {
                let (filters, tail) = rest.split_at(rest.len() - 2);
                let op = Op::parse(tail[0]).ok_or((line, format!("unknown operator {:?}", tail[0])))?;
                let n = tail[1].parse().map_err(|_| (line, format!("expected a count, found {:?}", tail[1])))?;
                let filters = filters
                    .iter()
                    .map(|f| {
                        f.split_once('=')
                            .map(|(k, v)| (k.to_string(), v.to_string()))
                            .ok_or((line, format!("expected key=value, found {f:?}")))
                    })
                    .collect::<Result<_, _>>()?;
                Predicate::Count { filters, op, n }
            }
            ["expect", "order", lhs, op, rhs] => {
                let op = Op::parse(op).ok_or((line, format!("unknown operator {op:?}")))?;
                match lhs.split_once("].") {
                    Some((sel, key)) => {
                        let at = Nth::parse(&format!("{sel}]")).ok_or((line, format!("bad selector {lhs:?}")))?;
                        Predicate::Field { at, key: key.to_string(), op, value: rhs.to_string() }
                    }
                    None => {
                        let a = Nth::parse(lhs).ok_or((line, format!("bad selector {lhs:?}")))?;
                        let b = Nth::parse(rhs).ok_or((line, format!("bad selector {rhs:?}")))?;
                        Predicate::Before { a, op, b }
                    }
                }
            }
            _ => return Err((line, format!("cannot parse assertion {body:?}"))),
        };
        out.push(Assertion { line, text: body.to_string(), predicate });
    }
    Ok(out)
}

impl Assertion {
    /// `Err` carries what was actually observed.
    pub fn check(&self, trace: &[ParsedRecord]) -> Result<(), String> {
        match &self.predicate {
            Predicate::Count { filters, op, n } => {
                let found = trace
                    .iter()
                    .filter(|r| filters.iter().all(|(k, v)| r.get(k) == Some(v.as_str())))
                    .count();
                if op.holds(found, *n) {
                    Ok(())
                } else {
                    Err(format!("found {found}"))
                }
            }
            Predicate::Field { at, key, op, value } => {
                let (_, r) = at.find(trace).ok_or_else(|| format!("no record {at}"))?;
                let actual = match key.as_str() {
                    "tick" => r.tick.to_string(),
                    _ => r.get(key).ok_or_else(|| format!("{at} (line {}) has no field {key}", r.line))?.to_string(),
                };
                let holds = match (actual.parse::<f64>(), value.parse::<f64>()) {
                    (Ok(a), Ok(b)) if *op != Op::Eq && *op != Op::Ne => op.holds(a, b),
                    _ => op.holds(actual.as_str(), value.as_str()),
                };
                if holds {
                    Ok(())
                } else {
                    Err(format!("{at}.{key} is {actual}"))
                }
            }
            Predicate::Before { a, op, b } => {
                let (ia, _) = a.find(trace).ok_or_else(|| format!("no record {a}"))?;
                let (ib, _) = b.find(trace).ok_or_else(|| format!("no record {b}"))?;
                if op.holds(ia, ib) {
                    Ok(())
                } else {
                    Err(format!("{a} is record {ia}, {b} is record {ib} ({} {} {} is false)", ia, op.as_str(), ib))
                }
            }
        }
    }
}
