//! Parser and pretty-printer for the textual process language.
//!
//! A spec file is line-oriented: `alphabet`, `order`, `process NAME = EXPR`
//! and `main NAME` directives, with `#` starting a comment. Expression
//! precedence, tightest first: prefix, `;`, `[]`/`[+]`, `|~|`; all binary
//! operators associate to the right.

use std::collections::BTreeMap;
use std::fmt;

use tockpri_core::event::{Alphabet, Event};
use tockpri_core::order::PriorityOrder;
use tockpri_core::process::{ProcessError, ProcessExpr, SpecFile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax { line: usize, col: usize, msg: String },
    UnknownEvent { line: usize, name: String },
    UnboundProcessName(String),
    CyclicOrder { line: usize },
    Invalid(ProcessError),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, col, msg } => {
                write!(f, "syntax error at line {line}, column {col}: {msg}")
            }
            ParseError::UnknownEvent { line, name } => {
                write!(f, "line {line}: event `{name}` is not in the alphabet")
            }
            ParseError::UnboundProcessName(n) => write!(f, "unbound process name `{n}`"),
            ParseError::CyclicOrder { line } => {
                write!(f, "line {line}: priority order contains a cycle")
            }
            ParseError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u32),
    Arrow,     // ->
    TArrow,    // ->t
    ExtOp,     // []
    TExtOp,    // [+]
    IntOp,     // |~|
    Semi,      // ;
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::TArrow => f.write_str("`->t`"),
            Tok::ExtOp => f.write_str("`[]`"),
            Tok::TExtOp => f.write_str("`[+]`"),
            Tok::IntOp => f.write_str("`|~|`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
        }
    }
}

fn lex(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |i: usize, msg: String| ParseError::Syntax { line: line_no, col: i + 1, msg };
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            ';' => {
                out.push((Tok::Semi, i));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&'>') {
                    // `->t` only when the t is not the start of a longer ident
                    if bytes.get(i + 2) == Some(&'t')
                        && !bytes
                            .get(i + 3)
                            .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                    {
                        out.push((Tok::TArrow, i));
                        i += 3;
                    } else {
                        out.push((Tok::Arrow, i));
                        i += 2;
                    }
                } else {
                    return Err(err(i, "expected `->`".into()));
                }
            }
            '[' => match bytes.get(i + 1) {
                Some(']') => {
                    out.push((Tok::ExtOp, i));
                    i += 2;
                }
                Some('+') if bytes.get(i + 2) == Some(&']') => {
                    out.push((Tok::TExtOp, i));
                    i += 3;
                }
                _ => return Err(err(i, "expected `[]` or `[+]`".into())),
            },
            '|' => {
                if bytes.get(i + 1) == Some(&'~') && bytes.get(i + 2) == Some(&'|') {
                    out.push((Tok::IntOp, i));
                    i += 3;
                } else {
                    return Err(err(i, "expected `|~|`".into()));
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().collect();
                let n = text
                    .parse::<u32>()
                    .map_err(|_| err(start, format!("number `{text}` out of range")))?;
                out.push((Tok::Nat(n), start));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(bytes[start..i].iter().collect()), start));
            }
            other => return Err(err(i, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct ExprParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| c + 1)
            .unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, msg: String) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col(), msg }
    }

    // EXPR := EXT ("|~|" EXPR)?
    fn expr(&mut self) -> Result<ProcessExpr, ParseError> {
        let lhs = self.ext()?;
        if self.peek() == Some(&Tok::IntOp) {
            self.bump();
            let rhs = self.expr()?;
            Ok(ProcessExpr::int(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    // EXT := SEQ (("[]" | "[+]") EXT)?
    fn ext(&mut self) -> Result<ProcessExpr, ParseError> {
        let lhs = self.seq()?;
        match self.peek() {
            Some(Tok::ExtOp) => {
                self.bump();
                let rhs = self.ext()?;
                Ok(ProcessExpr::ext(lhs, rhs))
            }
            Some(Tok::TExtOp) => {
                self.bump();
                let rhs = self.ext()?;
                Ok(ProcessExpr::text(lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    // SEQ := PREFIX (";" SEQ)?
    fn seq(&mut self) -> Result<ProcessExpr, ParseError> {
        let lhs = self.prefix()?;
        if self.peek() == Some(&Tok::Semi) {
            self.bump();
            let rhs = self.seq()?;
            Ok(ProcessExpr::seq(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    // PREFIX := ident ("->" | "->t") PREFIX | ATOM
    fn prefix(&mut self) -> Result<ProcessExpr, ParseError> {
        if let Some(Tok::Ident(name)) = self.peek().cloned() {
            match self.toks.get(self.pos + 1).map(|(t, _)| t) {
                Some(Tok::Arrow) | Some(Tok::TArrow) => {
                    let timed = self.toks[self.pos + 1].0 == Tok::TArrow;
                    if matches!(
                        name.as_str(),
                        "STOP" | "SKIP" | "DIV" | "CHAOS" | "WAIT" | "tick" | "tock"
                    ) {
                        return Err(self.err(format!("`{name}` cannot be a prefix event")));
                    }
                    self.bump();
                    self.bump();
                    let rest = self.prefix()?;
                    let e = Event::sym(&name);
                    return Ok(if timed {
                        ProcessExpr::tprefix(e, rest)
                    } else {
                        ProcessExpr::prefix(e, rest)
                    });
                }
                _ => {}
            }
        }
        self.atom()
    }

    // ATOM := STOP | SKIP | DIV | CHAOS | WAIT nat | "(" EXPR ")" | ident
    fn atom(&mut self) -> Result<ProcessExpr, ParseError> {
        match self.bump() {
            Some(Tok::Ident(name)) => match name.as_str() {
                "STOP" => Ok(ProcessExpr::Stop),
                "SKIP" => Ok(ProcessExpr::Skip),
                "DIV" => Ok(ProcessExpr::Div),
                "CHAOS" => Ok(ProcessExpr::Chaos),
                "WAIT" => match self.bump() {
                    Some(Tok::Nat(n)) => Ok(ProcessExpr::Wait(n)),
                    _ => {
                        self.pos -= 1;
                        Err(self.err("expected a natural number after WAIT".into()))
                    }
                },
                "tick" | "tock" => {
                    self.pos -= 1;
                    Err(self.err(format!("`{name}` is reserved")))
                }
                _ => Ok(ProcessExpr::named(&name)),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        Err(self.err("expected `)`".into()))
                    }
                }
            }
            Some(t) => {
                self.pos -= 1;
                Err(self.err(format!("unexpected {t}")))
            }
            None => Err(self.err("unexpected end of expression".into())),
        }
    }
}

/// Parses a single expression (one line's worth of tokens).
pub fn parse_expr(text: &str, line_no: usize) -> Result<ProcessExpr, ParseError> {
    let toks = lex(text, line_no)?;
    if toks.is_empty() {
        return Err(ParseError::Syntax {
            line: line_no,
            col: 1,
            msg: "empty expression".into(),
        });
    }
    let end_col = text.chars().count() + 1;
    let mut p = ExprParser { toks, pos: 0, line: line_no, end_col };
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(p.err(format!("unexpected {t} after expression")));
    }
    Ok(e)
}

/// Parses a complete spec file.
pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let mut alphabet: Option<Alphabet> = None;
    let mut order_pairs: Vec<(Event, Event)> = Vec::new();
    let mut order_line = 0;
    let mut defs: BTreeMap<String, ProcessExpr> = BTreeMap::new();
    let mut main: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (directive, rest) = match line.split_once(char::is_whitespace) {
            Some((d, r)) => (d, r.trim()),
            None => (line, ""),
        };
        match directive {
            "alphabet" => {
                let mut names = Vec::new();
                for part in rest.split(',') {
                    let name = part.trim();
                    if name.is_empty() {
                        return Err(ParseError::Syntax {
                            line: line_no,
                            col: 1,
                            msg: "empty alphabet entry".into(),
                        });
                    }
                    if name == "tick" || name == "tock" {
                        return Err(ParseError::Syntax {
                            line: line_no,
                            col: 1,
                            msg: format!("`{name}` is reserved and not declarable"),
                        });
                    }
                    names.push(name);
                }
                alphabet = Some(Alphabet::from_names(names.iter().map(|s| &**s)));
            }
            "order" => {
                order_line = line_no;
                for part in rest.split(',') {
                    let pair = part.trim();
                    let (lo, hi) = pair.split_once('<').ok_or_else(|| ParseError::Syntax {
                        line: line_no,
                        col: 1,
                        msg: format!("expected `e1 < e2` in order directive, got `{pair}`"),
                    })?;
                    order_pairs
                        .push((Event::from_name(lo.trim()), Event::from_name(hi.trim())));
                }
            }
            "process" => {
                let (name, body) =
                    rest.split_once('=').ok_or_else(|| ParseError::Syntax {
                        line: line_no,
                        col: 1,
                        msg: "expected `process NAME = EXPR`".into(),
                    })?;
                let name = name.trim();
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
                {
                    return Err(ParseError::Syntax {
                        line: line_no,
                        col: 1,
                        msg: format!("bad process name `{name}`"),
                    });
                }
                let expr = parse_expr(body, line_no)?;
                defs.insert(name.to_string(), expr);
            }
            "main" => {
                main = Some(rest.to_string());
            }
            other => {
                return Err(ParseError::Syntax {
                    line: line_no,
                    col: 1,
                    msg: format!("unknown directive `{other}`"),
                });
            }
        }
    }

    let alphabet = alphabet.unwrap_or_else(|| Alphabet::from_names([]));
    // Order events must be in scope before building the closure.
    for (lo, hi) in &order_pairs {
        for e in [lo, hi] {
            if matches!(e, Event::Sym(_)) && !alphabet.contains_sym(e) {
                return Err(ParseError::UnknownEvent {
                    line: order_line,
                    name: e.name().to_string(),
                });
            }
        }
    }
    let order = PriorityOrder::new(order_pairs)
        .map_err(|_| ParseError::CyclicOrder { line: order_line })?;
    let main = match main {
        Some(m) => m,
        None if defs.len() == 1 => defs.keys().next().unwrap().clone(),
        None => {
            return Err(ParseError::Syntax {
                line: text.lines().count().max(1),
                col: 1,
                msg: "missing `main` directive".into(),
            })
        }
    };
    let spec = SpecFile { alphabet, order, defs, main };
    spec.validate().map_err(|e| match e {
        ProcessError::UnboundProcessName(n) => ParseError::UnboundProcessName(n),
        other => ParseError::Invalid(other),
    })?;
    Ok(spec)
}

fn bp(e: &ProcessExpr) -> u8 {
    // Binding power: higher binds tighter.
    match e {
        ProcessExpr::IntChoice(..) => 1,
        ProcessExpr::ExtChoice(..) | ProcessExpr::TExtChoice(..) => 2,
        ProcessExpr::Seq(..) => 3,
        ProcessExpr::Prefix(..) | ProcessExpr::TPrefix(..) => 4,
        _ => 5,
    }
}

fn pretty_at(e: &ProcessExpr, min_bp: u8, out: &mut String) {
    let mine = bp(e);
    let parens = mine < min_bp;
    if parens {
        out.push('(');
    }
    match e {
        ProcessExpr::Stop => out.push_str("STOP"),
        ProcessExpr::Skip => out.push_str("SKIP"),
        ProcessExpr::Div => out.push_str("DIV"),
        ProcessExpr::Chaos => out.push_str("CHAOS"),
        ProcessExpr::Wait(n) => {
            out.push_str("WAIT ");
            out.push_str(&n.to_string());
        }
        ProcessExpr::Ref(n) => out.push_str(n),
        ProcessExpr::Prefix(a, p) => {
            out.push_str(a.name());
            out.push_str(" -> ");
            pretty_at(p, mine, out);
        }
        ProcessExpr::TPrefix(a, p) => {
            out.push_str(a.name());
            out.push_str(" ->t ");
            pretty_at(p, mine, out);
        }
        ProcessExpr::Seq(p, q) => {
            pretty_at(p, mine + 1, out);
            out.push_str(" ; ");
            pretty_at(q, mine, out);
        }
        ProcessExpr::ExtChoice(p, q) => {
            pretty_at(p, mine + 1, out);
            out.push_str(" [] ");
            pretty_at(q, mine, out);
        }
        ProcessExpr::TExtChoice(p, q) => {
            pretty_at(p, mine + 1, out);
            out.push_str(" [+] ");
            pretty_at(q, mine, out);
        }
        ProcessExpr::IntChoice(p, q) => {
            pretty_at(p, mine + 1, out);
            out.push_str(" |~| ");
            pretty_at(q, mine, out);
        }
    }
    if parens {
        out.push(')');
    }
}

/// Renders an expression so that `parse_expr(pretty(e), _) == e`.
pub fn pretty(e: &ProcessExpr) -> String {
    let mut out = String::new();
    pretty_at(e, 0, &mut out);
    out
}

/// Renders a whole spec file in the directive format `parse_spec` accepts.
pub fn pretty_spec(spec: &SpecFile) -> String {
    let mut out = String::new();
    let names: Vec<&str> = spec.alphabet.sigma().iter().map(|e| e.name()).collect();
    out.push_str("alphabet ");
    out.push_str(&names.join(", "));
    out.push('\n');
    let pairs: Vec<String> = spec
        .order
        .pairs()
        .iter()
        .map(|(lo, hi)| format!("{} < {}", lo.name(), hi.name()))
        .collect();
    if !pairs.is_empty() {
        out.push_str("order ");
        out.push_str(&pairs.join(", "));
        out.push('\n');
    }
    for (name, expr) in &spec.defs {
        out.push_str(&format!("process {name} = {}\n", pretty(expr)));
    }
    out.push_str(&format!("main {}\n", spec.main));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use tockpri_core::process::builtin_corpus;

    #[test]
    fn parses_example_processes() {
        let e = parse_expr("a -> SKIP [] b -> SKIP", 1).unwrap();
        assert_eq!(
            e,
            ProcessExpr::ext(
                ProcessExpr::prefix(Event::sym("a"), ProcessExpr::Skip),
                ProcessExpr::prefix(Event::sym("b"), ProcessExpr::Skip),
            )
        );
        let w = parse_expr("WAIT 1 ; W", 1).unwrap();
        assert_eq!(w, ProcessExpr::seq(ProcessExpr::Wait(1), ProcessExpr::named("W")));
    }

    #[test]
    fn precedence_and_associativity() {
        // prefix > ";" > "[]" > "|~|", all right-associative
        let e = parse_expr("a -> SKIP ; STOP [] b -> STOP |~| DIV", 1).unwrap();
        assert_eq!(
            e,
            ProcessExpr::int(
                ProcessExpr::ext(
                    ProcessExpr::seq(
                        ProcessExpr::prefix(Event::sym("a"), ProcessExpr::Skip),
                        ProcessExpr::Stop,
                    ),
                    ProcessExpr::prefix(Event::sym("b"), ProcessExpr::Stop),
                ),
                ProcessExpr::Div,
            )
        );
        let r = parse_expr("SKIP [] STOP [] DIV", 1).unwrap();
        assert_eq!(
            r,
            ProcessExpr::ext(ProcessExpr::Skip, ProcessExpr::ext(ProcessExpr::Stop, ProcessExpr::Div))
        );
    }

    #[test]
    fn dangling_prefix_is_a_syntax_error() {
        assert!(matches!(
            parse_expr("a ->", 3),
            Err(ParseError::Syntax { line: 3, .. })
        ));
    }

    #[test]
    fn timed_arrow_lexing() {
        let e = parse_expr("a ->t SKIP", 1).unwrap();
        assert_eq!(e, ProcessExpr::tprefix(Event::sym("a"), ProcessExpr::Skip));
        // `->` followed by an identifier beginning with t is untimed
        let f = parse_expr("a -> tea", 1).unwrap();
        assert_eq!(
            f,
            ProcessExpr::prefix(Event::sym("a"), ProcessExpr::named("tea"))
        );
    }

    #[test]
    fn spec_file_round_trip_on_corpus() {
        for (name, spec) in builtin_corpus() {
            let text = pretty_spec(&spec);
            let back = parse_spec(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
            assert_eq!(back, spec, "{name} round-trips");
        }
    }

    #[test]
    fn unguarded_recursion_rejected() {
        let text = "alphabet a\nprocess P = P |~| a -> SKIP\nmain P\n";
        assert!(matches!(
            parse_spec(text),
            Err(ParseError::Invalid(ProcessError::UnguardedRecursion(_)))
        ));
        let ok = "alphabet a\nprocess P = a -> P\nmain P\n";
        assert!(parse_spec(ok).is_ok());
    }

    #[test]
    fn unknown_event_rejected() {
        let text = "alphabet a\nprocess P = c -> SKIP\nmain P\n";
        assert!(matches!(
            parse_spec(text),
            Err(ParseError::Invalid(ProcessError::UnknownEvent(_)))
        ));
    }
}
