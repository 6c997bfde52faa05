//! Change/query scripts: one operation per line.
//!
//! ```text
//! set 3 a
//! reset 3
//! range 0 7
//! member
//! ```
//!
//! Blank lines and anything after `#` are ignored.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptOp {
    Set { pos: usize, symbol: String },
    Reset { pos: usize },
    SetU { pos: usize, symbol: String },
    SetV { pos: usize, symbol: String },
    ResetU { pos: usize },
    ResetV { pos: usize },
    Member,
    Equals,
    Range { l: usize, r: usize },
    Succ(usize),
    Pred(usize),
}

impl ScriptOp {
    pub fn name(&self) -> &'static str {
        match self {
            ScriptOp::Set { .. } => "set",
            ScriptOp::Reset { .. } => "reset",
            ScriptOp::SetU { .. } => "setu",
            ScriptOp::SetV { .. } => "setv",
            ScriptOp::ResetU { .. } => "resetu",
            ScriptOp::ResetV { .. } => "resetv",
            ScriptOp::Member => "member",
            ScriptOp::Equals => "equals",
            ScriptOp::Range { .. } => "range",
            ScriptOp::Succ(_) => "succ",
            ScriptOp::Pred(_) => "pred",
        }
    }

    pub fn is_change(&self) -> bool {
        matches!(
            self,
            ScriptOp::Set { .. }
                | ScriptOp::Reset { .. }
                | ScriptOp::SetU { .. }
                | ScriptOp::SetV { .. }
                | ScriptOp::ResetU { .. }
                | ScriptOp::ResetV { .. }
        )
    }

    /// The two argument columns of a report row; absent arguments are empty.
    pub fn args(&self) -> (String, String) {
        match self {
            ScriptOp::Set { pos, symbol } | ScriptOp::SetU { pos, symbol } | ScriptOp::SetV { pos, symbol } => {
                (pos.to_string(), symbol.clone())
            }
            ScriptOp::Reset { pos } | ScriptOp::ResetU { pos } | ScriptOp::ResetV { pos } => {
                (pos.to_string(), String::new())
            }
            ScriptOp::Range { l, r } => (l.to_string(), r.to_string()),
            ScriptOp::Succ(i) | ScriptOp::Pred(i) => (i.to_string(), String::new()),
            ScriptOp::Member | ScriptOp::Equals => (String::new(), String::new()),
        }
    }
}

impl fmt::Display for ScriptOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.args();
        let mut s = self.name().to_string();
        for part in [a, b] {
            if !part.is_empty() {
                s.push(' ');
                s.push_str(&part);
            }
        }
        f.write_str(&s)
    }
}

impl FromStr for ScriptOp {
    type Err = String;

    fn from_str(line: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let (&cmd, args) = parts.split_first().ok_or("empty line")?;
        let num = |k: usize| -> std::result::Result<usize, String> {
            let a = args.get(k).ok_or_else(|| format!("`{cmd}` needs more arguments"))?;
            a.parse().map_err(|_| format!("`{a}` is not a position"))
        };
        let sym = |k: usize| -> std::result::Result<String, String> {
            args.get(k).map(|s| s.to_string()).ok_or_else(|| format!("`{cmd}` needs a symbol"))
        };
        let arity = match cmd {
            "set" | "setu" | "setv" | "range" => 2,
            "reset" | "resetu" | "resetv" | "succ" | "pred" => 1,
            "member" | "equals" => 0,
            other => return Err(format!("unknown operation `{other}`")),
        };
        if args.len() != arity {
            return Err(format!("`{cmd}` takes {arity} argument(s), got {}", args.len()));
        }
        Ok(match cmd {
            "set" => ScriptOp::Set { pos: num(0)?, symbol: sym(1)? },
            "setu" => ScriptOp::SetU { pos: num(0)?, symbol: sym(1)? },
            "setv" => ScriptOp::SetV { pos: num(0)?, symbol: sym(1)? },
            "reset" => ScriptOp::Reset { pos: num(0)? },
            "resetu" => ScriptOp::ResetU { pos: num(0)? },
            "resetv" => ScriptOp::ResetV { pos: num(0)? },
            "range" => ScriptOp::Range { l: num(0)?, r: num(1)? },
            "succ" => ScriptOp::Succ(num(0)?),
            "pred" => ScriptOp::Pred(num(0)?),
            "member" => ScriptOp::Member,
            _ => ScriptOp::Equals,
        })
    }
}

pub fn parse_script(text: &str) -> Result<Vec<ScriptOp>> {
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let op = line.parse().map_err(|message| Error::Parse { line: i + 1, message })?;
        ops.push(op);
    }
    Ok(ops)
}
