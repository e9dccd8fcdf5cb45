//! Linda-calculus terms, substitution and the concrete syntax.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::label::ActionOp;
use crate::linda::LindaError;
use crate::port::Value;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Actual(Value),
    Formal(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(pub Vec<Param>);

impl Tuple {
    pub fn ground(values: impl IntoIterator<Item = i64>) -> Self {
        Tuple(
            values
                .into_iter()
                .map(|v| Param::Actual(Value(v)))
                .collect(),
        )
    }

    pub fn is_ground(&self) -> bool {
        self.0.iter().all(|p| matches!(p, Param::Actual(_)))
    }

    /// The values of a ground tuple.
    pub fn values(&self) -> Option<Vec<Value>> {
        self.0
            .iter()
            .map(|p| match p {
                Param::Actual(v) => Some(*v),
                Param::Formal(_) => None,
            })
            .collect()
    }

    pub fn formals(&self) -> BTreeSet<String> {
        self.0
            .iter()
            .filter_map(|p| match p {
                Param::Formal(x) => Some(x.clone()),
                Param::Actual(_) => None,
            })
            .collect()
    }

    pub fn subst(&self, gamma: &Subst) -> Tuple {
        Tuple(
            self.0
                .iter()
                .map(|p| match p {
                    Param::Formal(x) => match gamma.get(x) {
                        Some(v) => Param::Actual(*v),
                        None => p.clone(),
                    },
                    a => a.clone(),
                })
                .collect(),
        )
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|p| match p {
                Param::Actual(v) => v.to_string(),
                Param::Formal(x) => x.clone(),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

pub type Subst = BTreeMap<String, Value>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process {
    Prefix {
        op: ActionOp,
        tuple: Tuple,
        cont: Box<Process>,
    },
    Var(String),
    Rec(String, Box<Process>),
    Choice(Box<Process>, Box<Process>),
    End,
}

impl Process {
    pub fn prefix(op: ActionOp, tuple: Tuple, cont: Process) -> Self {
        Process::Prefix {
            op,
            tuple,
            cont: Box::new(cont),
        }
    }

    pub fn choice(a: Process, b: Process) -> Self {
        Process::Choice(Box::new(a), Box::new(b))
    }

    pub fn rec(x: impl Into<String>, body: Process) -> Self {
        Process::Rec(x.into(), Box::new(body))
    }

    /// `P[γ]`: replaces free data variables. A variable already bound by the
    /// time it appears in a pattern is matched literally.
    pub fn subst_data(&self, gamma: &Subst) -> Process {
        if gamma.is_empty() {
            return self.clone();
        }
        match self {
            Process::Prefix { op, tuple, cont } => Process::Prefix {
                op: *op,
                tuple: tuple.subst(gamma),
                cont: Box::new(cont.subst_data(gamma)),
            },
            Process::Rec(x, body) => Process::Rec(x.clone(), Box::new(body.subst_data(gamma))),
            Process::Choice(a, b) => Process::choice(a.subst_data(gamma), b.subst_data(gamma)),
            Process::Var(_) | Process::End => self.clone(),
        }
    }

    /// `P[Q/X]` on process variables; stops under a `rec X` that rebinds X.
    pub fn subst_var(&self, x: &str, q: &Process) -> Process {
        match self {
            Process::Var(y) if y == x => q.clone(),
            Process::Var(_) | Process::End => self.clone(),
            Process::Prefix { op, tuple, cont } => Process::Prefix {
                op: *op,
                tuple: tuple.clone(),
                cont: Box::new(cont.subst_var(x, q)),
            },
            Process::Rec(y, _) if y == x => self.clone(),
            Process::Rec(y, body) => Process::Rec(y.clone(), Box::new(body.subst_var(x, q))),
            Process::Choice(a, b) => Process::choice(a.subst_var(x, q), b.subst_var(x, q)),
        }
    }

    /// One-level unfolding of `rec X . P` into `P[rec X . P / X]`.
    pub fn unfold(&self) -> Process {
        match self {
            Process::Rec(x, body) => body.subst_var(x, self),
            p => p.clone(),
        }
    }

    /// Fails unless every process variable is bound by a `rec`, every
    /// recursion is guarded by an action, and every data variable used in
    /// an `out` is bound by an earlier pattern.
    pub fn check_closed(&self) -> Result<(), LindaError> {
        self.closed_in(&mut Vec::new(), &mut Vec::new())?;
        self.guarded()
    }

    fn closed_in(
        &self,
        pvars: &mut Vec<String>,
        dvars: &mut Vec<String>,
    ) -> Result<(), LindaError> {
        match self {
            Process::End => Ok(()),
            Process::Var(x) if pvars.contains(x) => Ok(()),
            Process::Var(x) => Err(LindaError::OpenProcess(format!(
                "free process variable {x}"
            ))),
            Process::Rec(x, body) => {
                pvars.push(x.clone());
                let r = body.closed_in(pvars, dvars);
                pvars.pop();
                r
            }
            Process::Choice(a, b) => {
                a.closed_in(pvars, dvars)?;
                b.closed_in(pvars, dvars)
            }
            Process::Prefix { op, tuple, cont } => {
                let fresh: Vec<String> = tuple
                    .formals()
                    .into_iter()
                    .filter(|x| !dvars.contains(x))
                    .collect();
                if *op == ActionOp::Out && !fresh.is_empty() {
                    return Err(LindaError::OpenProcess(format!(
                        "out{tuple} uses unbound variable {}",
                        fresh[0]
                    )));
                }
                let n = dvars.len();
                dvars.extend(fresh);
                let r = cont.closed_in(pvars, dvars);
                dvars.truncate(n);
                r
            }
        }
    }

    fn guarded(&self) -> Result<(), LindaError> {
        match self {
            Process::End | Process::Var(_) => Ok(()),
            Process::Prefix { cont, .. } => cont.guarded(),
            Process::Choice(a, b) => {
                a.guarded()?;
                b.guarded()
            }
            Process::Rec(x, body) => {
                if body.unguarded_vars().contains(x) {
                    return Err(LindaError::UnguardedRecursion(x.clone()));
                }
                body.guarded()
            }
        }
    }

    fn unguarded_vars(&self) -> BTreeSet<String> {
        match self {
            Process::Var(x) => [x.clone()].into_iter().collect(),
            Process::End | Process::Prefix { .. } => BTreeSet::new(),
            Process::Choice(a, b) => {
                let mut s = a.unguarded_vars();
                s.extend(b.unguarded_vars());
                s
            }
            Process::Rec(x, body) => {
                let mut s = body.unguarded_vars();
                s.remove(x);
                s
            }
        }
    }

    /// Number of action prefixes, choices and recursions.
    pub fn size(&self) -> usize {
        match self {
            Process::End | Process::Var(_) => 0,
            Process::Prefix { cont, .. } => 1 + cont.size(),
            Process::Rec(_, b) => 1 + b.size(),
            Process::Choice(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Process::Prefix { op, tuple, cont } => {
                write!(f, "{}{}.", op.keyword(), tuple)?;
                match **cont {
                    Process::Choice(..) | Process::Rec(..) => write!(f, "({cont})"),
                    _ => write!(f, "{cont}"),
                }
            }
            Process::Var(x) => f.write_str(x),
            Process::Rec(x, body) => write!(f, "rec {x} . {body}"),
            Process::Choice(a, b) => {
                match **a {
                    Process::Choice(..) | Process::Rec(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, " [] {b}")
            }
            Process::End => f.write_str("end"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Dot,
    Choice,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, LindaError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((start, Tok::LParen));
                i += 1
            }
            ')' => {
                out.push((start, Tok::RParen));
                i += 1
            }
            ',' => {
                out.push((start, Tok::Comma));
                i += 1
            }
            '.' => {
                out.push((start, Tok::Dot));
                i += 1
            }
            '[' if chars.get(i + 1) == Some(&']') => {
                out.push((start, Tok::Choice));
                i += 2
            }
            c if c.is_ascii_digit()
                || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) =>
            {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse().map_err(|_| LindaError::Parse {
                    pos: start,
                    msg: format!("integer out of range: {text}"),
                })?;
                out.push((start, Tok::Int(n)));
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
            }
            other => {
                return Err(LindaError::Parse {
                    pos: start,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn is_variable(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase())
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LindaError> {
        Err(LindaError::Parse {
            pos: self.at(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), LindaError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn process(&mut self) -> Result<Process, LindaError> {
        let mut items = vec![self.unit()?];
        while self.peek() == Some(&Tok::Choice) {
            self.pos += 1;
            items.push(self.unit()?);
        }
        let last = items.pop().expect("at least one branch");
        Ok(items
            .into_iter()
            .rev()
            .fold(last, |acc, p| Process::choice(p, acc)))
    }

    fn unit(&mut self) -> Result<Process, LindaError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let p = self.process()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(p)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "end" => Ok(Process::End),
                    "rec" => {
                        let x = match self.peek().cloned() {
                            Some(Tok::Ident(x)) if is_variable(&x) => x,
                            _ => return self.err("expected a recursion variable"),
                        };
                        self.pos += 1;
                        self.expect(Tok::Dot, "'.' after rec variable")?;
                        Ok(Process::rec(x, self.process()?))
                    }
                    "out" | "in" | "rd" => {
                        let op = match id.as_str() {
                            "out" => ActionOp::Out,
                            "in" => ActionOp::In,
                            _ => ActionOp::Rd,
                        };
                        let tuple = self.tuple()?;
                        let cont = if self.peek() == Some(&Tok::Dot) {
                            self.pos += 1;
                            self.unit()?
                        } else {
                            Process::End
                        };
                        Ok(Process::prefix(op, tuple, cont))
                    }
                    x if is_variable(x) => Ok(Process::Var(x.to_string())),
                    other => {
                        self.pos -= 1;
                        self.err(format!("unexpected identifier {other:?}"))
                    }
                }
            }
            _ => self.err("expected a process"),
        }
    }

    fn tuple(&mut self) -> Result<Tuple, LindaError> {
        self.expect(Tok::LParen, "'('")?;
        let mut params = Vec::new();
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            return Ok(Tuple(params));
        }
        loop {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => params.push(Param::Actual(Value(n))),
                Some(Tok::Ident(x)) if is_variable(&x) => params.push(Param::Formal(x)),
                _ => return self.err("expected a value or an uppercase variable"),
            }
            self.pos += 1;
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::RParen) => {
                    self.pos += 1;
                    return Ok(Tuple(params));
                }
                _ => return self.err("expected ',' or ')'"),
            }
        }
    }
}

/// Parses a closed process such as `in(42,X).out(X).end [] rec R . out(1).R`.
pub fn parse_process(src: &str) -> Result<Process, LindaError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        end: src.len(),
    };
    let proc_ = p.process()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    proc_.check_closed()?;
    Ok(proc_)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_forms() {
        for src in [
            "out(1,2).end",
            "in(42,X).out(X).end",
            "rd(42,X).end",
            "rec R . out(1).R",
            "out(1).end [] in(2).end",
            "(out(1).end [] in(2).end)",
        ] {
            let p = parse_process(src).unwrap();
            let again = parse_process(&p.to_string()).unwrap();
            assert_eq!(p, again, "{src}");
        }
    }

    #[test]
    fn rec_body_extends_right() {
        let p = parse_process("rec R . out(1).R [] in(2).end").unwrap();
        assert!(matches!(p, Process::Rec(_, ref b) if matches!(**b, Process::Choice(..))));
        let q = parse_process("out(1).end [] in(2).end [] rd(3).end").unwrap();
        assert!(matches!(q, Process::Choice(..)));
    }

    #[test]
    fn rejects_open_and_unguarded_terms() {
        assert!(matches!(
            parse_process("out(X).end"),
            Err(LindaError::OpenProcess(_))
        ));
        assert!(matches!(
            parse_process("out(1).R"),
            Err(LindaError::OpenProcess(_))
        ));
        assert!(matches!(
            parse_process("rec R . (R [] out(1).end)"),
            Err(LindaError::UnguardedRecursion(_))
        ));
        assert!(matches!(
            parse_process("out(x).end"),
            Err(LindaError::Parse { .. })
        ));
    }

    #[test]
    fn substitution_respects_rec_shadowing() {
        let inner = Process::rec("X", Process::Var("X".into()));
        let p = Process::choice(Process::Var("X".into()), inner.clone());
        let r = p.subst_var("X", &Process::End);
        assert_eq!(r, Process::choice(Process::End, inner));
    }
}
