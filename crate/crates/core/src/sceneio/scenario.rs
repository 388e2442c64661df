//! Scenario scripts: timed device poses and interactions.
//!
//! ```text
//! at <t> pose <Role> <x> <y> <z> [<ax> <ay> <az> <angle>]
//! at <t> press <node-path>
//! at <t> trigger <LeftHand|RightHand> down|up
//! run_until <t>
//! ```
//!
//! Times are seconds, non-decreasing; `run_until` must come last.

use std::fmt;

use super::lex::{self, Token};
use super::{num, FormatError, Pos};
use crate::devices::Role;

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// Tracking-space pose keyframe; rotation is axis (x, y, z) and angle.
    Pose { role: Role, position: [f64; 3], rotation: Option<[f64; 4]> },
    Press { path: String },
    Trigger { role: Role, down: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimedCommand {
    pub time: f64,
    pub command: Command,
}

impl fmt::Display for TimedCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {} ", num(self.time))?;
        match &self.command {
            Command::Pose { role, position: [x, y, z], rotation } => {
                write!(f, "pose {role} {} {} {}", num(*x), num(*y), num(*z))?;
                if let Some([ax, ay, az, a]) = rotation {
                    write!(f, " {} {} {} {}", num(*ax), num(*ay), num(*az), num(*a))?;
                }
                Ok(())
            }
            Command::Press { path } => write!(f, "press {path}"),
            Command::Trigger { role, down } => write!(f, "trigger {role} {}", if *down { "down" } else { "up" }),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioDoc {
    pub commands: Vec<TimedCommand>,
    pub run_until: Option<f64>,
}

impl ScenarioDoc {
    /// Scripted duration: `run_until`, else the last command's time.
    pub fn duration(&self) -> f64 {
        self.run_until.or_else(|| self.commands.last().map(|c| c.time)).unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.commands.len() + usize::from(self.run_until.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for ScenarioDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.commands {
            writeln!(f, "{c}")?;
        }
        if let Some(t) = self.run_until {
            writeln!(f, "run_until {}", num(t))?;
        }
        Ok(())
    }
}

pub fn parse_scenario_bytes(bytes: &[u8]) -> Result<ScenarioDoc, FormatError> {
    parse_scenario(lex::decode(bytes)?)
}

struct Cursor<'t, 'a> {
    tokens: &'t [Token<'a>],
    next: usize,
    eol: Pos,
}

impl<'t, 'a> Cursor<'t, 'a> {
    fn take(&mut self, what: &str) -> Result<&'t Token<'a>, FormatError> {
        let t = self.tokens.get(self.next).ok_or_else(|| FormatError::parse(self.eol, what))?;
        self.next += 1;
        if t.quoted {
            return Err(FormatError::parse(t.pos, what));
        }
        Ok(t)
    }

    fn number(&mut self, what: &str) -> Result<f64, FormatError> {
        let t = self.take(what)?;
        lex::finite(t.text, t.pos)
    }

    fn time(&mut self) -> Result<(f64, Pos), FormatError> {
        let t = self.take("time in seconds")?;
        let x = lex::finite(t.text, t.pos)?;
        if x < 0.0 {
            return Err(FormatError::parse(t.pos, "a non-negative time"));
        }
        Ok((x, t.pos))
    }

    fn role(&mut self) -> Result<Role, FormatError> {
        let t = self.take("device role")?;
        t.text.parse().map_err(|_| FormatError::parse(t.pos, "Head, LeftHand, RightHand, LeftFoot or RightFoot"))
    }

    fn end(&self) -> Result<(), FormatError> {
        match self.tokens.get(self.next) {
            Some(t) => Err(FormatError::parse(t.pos, "end of line")),
            None => Ok(()),
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioDoc, FormatError> {
    let mut doc = ScenarioDoc::default();
    let mut previous = 0.0f64;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let tokens = lex::tokenize(line, lineno)?;
        if tokens.is_empty() {
            continue;
        }
        let mut cur = Cursor { tokens: &tokens, next: 0, eol: Pos { line: lineno, column: line.chars().count() + 1 } };
        let head = cur.take("'at' or 'run_until'")?;
        if doc.run_until.is_some() {
            return Err(FormatError::parse(head.pos, "nothing after run_until"));
        }
        let (time, tpos) = match head.text {
            "at" | "run_until" => cur.time()?,
            _ => return Err(FormatError::parse(head.pos, "'at' or 'run_until'")),
        };
        if time < previous {
            return Err(FormatError::NonMonotonicTime { pos: tpos, time, previous });
        }
        previous = time;
        if head.text == "run_until" {
            cur.end()?;
            doc.run_until = Some(time);
            continue;
        }
        let verb = cur.take("'pose', 'press' or 'trigger'")?;
        let command = match verb.text {
            "pose" => {
                let role = cur.role()?;
                let position = [cur.number("x")?, cur.number("y")?, cur.number("z")?];
                let rotation = if cur.next < tokens.len() {
                    let r = [cur.number("axis x")?, cur.number("axis y")?, cur.number("axis z")?, cur.number("angle")?];
                    if r[..3] == [0.0; 3] {
                        return Err(FormatError::parse(tokens[cur.next - 4].pos, "a non-zero rotation axis"));
                    }
                    Some(r)
                } else {
                    None
                };
                Command::Pose { role, position, rotation }
            }
            "press" => {
                let p = cur.take("node path")?;
                if p.text.split('/').any(str::is_empty) && p.text != "/" {
                    return Err(FormatError::parse(p.pos, "node path"));
                }
                Command::Press { path: p.text.to_string() }
            }
            "trigger" => {
                let rt = cur.tokens.get(cur.next).map(|t| t.pos).unwrap_or(cur.eol);
                let role = cur.role()?;
                if !role.is_hand() {
                    return Err(FormatError::parse(rt, "LeftHand or RightHand"));
                }
                let d = cur.take("'down' or 'up'")?;
                let down = match d.text {
                    "down" => true,
                    "up" => false,
                    _ => return Err(FormatError::parse(d.pos, "'down' or 'up'")),
                };
                Command::Trigger { role, down }
            }
            _ => return Err(FormatError::parse(verb.pos, "'pose', 'press' or 'trigger'")),
        };
        cur.end()?;
        doc.commands.push(TimedCommand { time, command });
    }
    Ok(doc)
}
