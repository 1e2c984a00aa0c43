//! Recursive-descent parser for the concrete type and process syntax.

use thiserror::Error;

use super::ast::{BaseType, Channel, Expr, Process, Selector, SessionType, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{column}: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

const KEYWORDS: &[&str] = &[
    "end", "unit", "bool", "int", "case", "inl", "inr", "if", "then", "else", "true", "false", "l", "r",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Bang,
    Quest,
    Dot,
    Colon,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    SelOp,
    Plus,
    ParOp,
    EqEq,
    Hash,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Bang => "`!`".into(),
            Tok::Quest => "`?`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::SelOp => "`(+)`".into(),
            Tok::Plus => "`+`".into(),
            Tok::ParOp => "`||`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Hash => "`#`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, expected: &str, found: String| ParseError {
        line,
        column,
        expected: vec![expected.to_string()],
        found,
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        let tok = match c {
            '!' => {
                advance(1, &mut i, &mut col);
                Tok::Bang
            }
            '?' => {
                advance(1, &mut i, &mut col);
                Tok::Quest
            }
            '.' => {
                advance(1, &mut i, &mut col);
                Tok::Dot
            }
            ':' => {
                advance(1, &mut i, &mut col);
                Tok::Colon
            }
            ',' => {
                advance(1, &mut i, &mut col);
                Tok::Comma
            }
            ')' => {
                advance(1, &mut i, &mut col);
                Tok::RParen
            }
            '{' => {
                advance(1, &mut i, &mut col);
                Tok::LBrace
            }
            '}' => {
                advance(1, &mut i, &mut col);
                Tok::RBrace
            }
            '#' => {
                advance(1, &mut i, &mut col);
                Tok::Hash
            }
            '+' => {
                advance(1, &mut i, &mut col);
                Tok::Plus
            }
            '(' => {
                // `(+)` may contain blanks between its characters
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_whitespace() && chars[j] != '\n' {
                    j += 1;
                }
                let mut k = j + 1;
                while k < chars.len() && chars[k].is_whitespace() && chars[k] != '\n' {
                    k += 1;
                }
                if j < chars.len() && chars[j] == '+' && k < chars.len() && chars[k] == ')' {
                    advance(k + 1 - i, &mut i, &mut col);
                    Tok::SelOp
                } else {
                    advance(1, &mut i, &mut col);
                    Tok::LParen
                }
            }
            '|' => {
                if chars.get(i + 1) == Some(&'|') {
                    advance(2, &mut i, &mut col);
                    Tok::ParOp
                } else {
                    return Err(err(line, col, "`||`", "`|`".into()));
                }
            }
            '=' => {
                if chars.get(i + 1) == Some(&'=') {
                    advance(2, &mut i, &mut col);
                    Tok::EqEq
                } else {
                    return Err(err(line, col, "`==`", "`=`".into()));
                }
            }
            '-' | '0'..='9' => {
                let mut j = i;
                if c == '-' {
                    j += 1;
                }
                let digits_start = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == digits_start {
                    return Err(err(line, col, "integer literal", "`-`".into()));
                }
                let lexeme: String = chars[i..j].iter().collect();
                let n = lexeme
                    .parse::<i64>()
                    .map_err(|_| err(line, col, "64-bit integer literal", format!("`{lexeme}`")))?;
                advance(j - i, &mut i, &mut col);
                Tok::Int(n)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                advance(j - i, &mut i, &mut col);
                Tok::Ident(word)
            }
            other => return Err(err(line, col, "a token", format!("`{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            expected: expected.iter().map(|e| e.to_string()).collect(),
            found: s.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn at_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    fn expect_word(&mut self, word: &str) -> PResult<()> {
        if self.at_word(word) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{word}`")]))
        }
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }

    // ---- types ----

    fn choice(&mut self) -> PResult<SessionType> {
        let first = self.prefix()?;
        match self.peek() {
            Tok::SelOp => self.choice_chain(first, Tok::SelOp, Tok::Plus, SessionType::select),
            Tok::Plus => self.choice_chain(first, Tok::Plus, Tok::SelOp, SessionType::branch),
            _ => Ok(first),
        }
    }

    fn choice_chain(
        &mut self,
        first: SessionType,
        op: Tok,
        other: Tok,
        mk: fn(SessionType, SessionType) -> SessionType,
    ) -> PResult<SessionType> {
        let mut items = vec![first];
        while *self.peek() == op {
            self.bump();
            items.push(self.prefix()?);
        }
        if *self.peek() == other {
            return Err(self.error(&[&op.describe(), "parentheses around a mixed choice"]));
        }
        let mut acc = items.pop().expect("at least two items");
        while let Some(t) = items.pop() {
            acc = mk(t, acc);
        }
        Ok(acc)
    }

    fn prefix(&mut self) -> PResult<SessionType> {
        match self.peek() {
            Tok::Bang | Tok::Quest => {
                let out = self.bump() == Tok::Bang;
                let b = self.base()?;
                self.expect(Tok::Dot)?;
                let k = self.prefix()?;
                Ok(if out {
                    SessionType::out(b, k)
                } else {
                    SessionType::inp(b, k)
                })
            }
            Tok::LParen => {
                self.bump();
                let t = self.choice()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ if self.at_word("end") => {
                self.bump();
                Ok(SessionType::End)
            }
            _ => Err(self.error(&["`!`", "`?`", "`end`", "`(`"])),
        }
    }

    fn base(&mut self) -> PResult<BaseType> {
        let b = match self.peek() {
            Tok::Ident(w) if w == "unit" => BaseType::Unit,
            Tok::Ident(w) if w == "bool" => BaseType::Bool,
            Tok::Ident(w) if w == "int" => BaseType::Int,
            _ => return Err(self.error(&["`unit`", "`bool`", "`int`"])),
        };
        self.bump();
        Ok(b)
    }

    // ---- processes ----

    fn proc(&mut self) -> PResult<Process> {
        let mut acc = self.seq()?;
        while *self.peek() == Tok::ParOp {
            self.bump();
            let rhs = self.seq()?;
            acc = Process::par(acc, rhs);
        }
        Ok(acc)
    }

    fn chan(&mut self) -> PResult<Channel> {
        let c = match self.peek() {
            Tok::Ident(w) if w == "l" => Channel::L,
            Tok::Ident(w) if w == "r" => Channel::R,
            _ => return Err(self.error(&["`l`", "`r`"])),
        };
        self.bump();
        Ok(c)
    }

    fn var(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(w) if !is_keyword(&w) && w.starts_with(|c: char| c.is_ascii_lowercase()) => {
                self.bump();
                Ok(w)
            }
            _ => Err(self.error(&["variable"])),
        }
    }

    fn seq(&mut self) -> PResult<Process> {
        match self.peek().clone() {
            Tok::Int(0) => {
                self.bump();
                Ok(Process::Idle)
            }
            Tok::LParen => {
                self.bump();
                let p = self.proc()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Ident(w) if w == "l" || w == "r" => {
                let chan = self.chan()?;
                match self.peek() {
                    Tok::Quest => {
                        self.bump();
                        self.expect(Tok::LParen)?;
                        let var = self.var()?;
                        self.expect(Tok::Colon)?;
                        let ty = self.base()?;
                        self.expect(Tok::RParen)?;
                        self.expect(Tok::Dot)?;
                        let cont = self.seq()?;
                        Ok(Process::input(chan, var, ty, cont))
                    }
                    Tok::Bang => {
                        self.bump();
                        self.expect(Tok::LParen)?;
                        let e = self.expr()?;
                        self.expect(Tok::RParen)?;
                        self.expect(Tok::Dot)?;
                        let cont = self.seq()?;
                        Ok(Process::output(chan, e, cont))
                    }
                    Tok::Hash => {
                        self.bump();
                        let sel = if self.at_word("inl") {
                            Selector::Inl
                        } else if self.at_word("inr") {
                            Selector::Inr
                        } else {
                            return Err(self.error(&["`inl`", "`inr`"]));
                        };
                        self.bump();
                        self.expect(Tok::Dot)?;
                        let cont = self.seq()?;
                        Ok(Process::select(chan, sel, cont))
                    }
                    _ => Err(self.error(&["`?`", "`!`", "`#`"])),
                }
            }
            Tok::Ident(w) if w == "case" => {
                self.bump();
                let chan = self.chan()?;
                self.expect(Tok::LBrace)?;
                self.expect_word("inl")?;
                self.expect(Tok::Colon)?;
                let inl = self.proc()?;
                self.expect(Tok::Comma)?;
                self.expect_word("inr")?;
                self.expect(Tok::Colon)?;
                let inr = self.proc()?;
                self.expect(Tok::RBrace)?;
                Ok(Process::branch(chan, inl, inr))
            }
            Tok::Ident(w) if w == "if" => {
                self.bump();
                let guard = self.expr()?;
                self.expect_word("then")?;
                self.expect(Tok::LBrace)?;
                let then = self.proc()?;
                self.expect(Tok::RBrace)?;
                self.expect_word("else")?;
                self.expect(Tok::LBrace)?;
                let els = self.proc()?;
                self.expect(Tok::RBrace)?;
                Ok(Process::cond(guard, then, els))
            }
            _ => Err(self.error(&["`0`", "`l`", "`r`", "`case`", "`if`", "`(`"])),
        }
    }

    // ---- expressions ----

    fn expr(&mut self) -> PResult<Expr> {
        let lhs = self.sum()?;
        if *self.peek() == Tok::EqEq {
            self.bump();
            let rhs = self.sum()?;
            Ok(Expr::eq(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn sum(&mut self) -> PResult<Expr> {
        let mut acc = self.aexpr()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.aexpr()?;
            acc = Expr::add(acc, rhs);
        }
        Ok(acc)
    }

    fn aexpr(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::int(n))
            }
            Tok::LParen if *self.peek_at(1) == Tok::RParen => {
                self.bump();
                self.bump();
                Ok(Expr::Lit(Value::Unit))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(w) if w == "true" => {
                self.bump();
                Ok(Expr::bool(true))
            }
            Tok::Ident(w) if w == "false" => {
                self.bump();
                Ok(Expr::bool(false))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.var()?)),
            _ => Err(self.error(&["expression"])),
        }
    }
}

pub fn parse_type(text: &str) -> Result<SessionType, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.choice()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_process(text: &str) -> Result<Process, ParseError> {
    let mut p = Parser::new(text)?;
    let proc = p.proc()?;
    p.finish()?;
    Ok(proc)
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{print_process, print_type};
    use BaseType::*;

    #[test]
    fn parses_end() {
        assert_eq!(parse_type("end").unwrap(), SessionType::End);
    }

    #[test]
    fn parses_output_chain() {
        let t = parse_type("!int.!bool.end").unwrap();
        assert_eq!(t, SessionType::out(Int, SessionType::out(Bool, SessionType::End)));
        assert_eq!(print_type(&t), "!int.!bool.end");
    }

    #[test]
    fn parses_selection() {
        let t = parse_type("!int.end (+) ?bool.end").unwrap();
        assert_eq!(
            t,
            SessionType::select(
                SessionType::out(Int, SessionType::End),
                SessionType::inp(Bool, SessionType::End)
            )
        );
    }

    #[test]
    fn choices_associate_to_the_right() {
        let t = parse_type("end + end + end").unwrap();
        assert_eq!(
            t,
            SessionType::branch(
                SessionType::End,
                SessionType::branch(SessionType::End, SessionType::End)
            )
        );
        let left = parse_type("(end (+) end) (+) end").unwrap();
        assert_eq!(print_type(&left), "(end (+) end) (+) end");
    }

    #[test]
    fn mixed_choice_needs_parentheses() {
        let err = parse_type("end (+) end + end").unwrap_err();
        assert_eq!((err.line, err.column), (1, 13));
        assert!(parse_type("end (+) (end + end)").is_ok());
    }

    #[test]
    fn spaced_selection_operator() {
        assert_eq!(parse_type("end ( + ) end").unwrap(), parse_type("end (+) end").unwrap());
    }

    #[test]
    fn parses_idle_and_adapter() {
        assert_eq!(parse_process("0").unwrap(), Process::Idle);
        let a = parse_process("l?(x:int).l?(y:bool).r!(y).r!(x).0").unwrap();
        let expected = Process::input(
            Channel::L,
            "x",
            Int,
            Process::input(
                Channel::L,
                "y",
                Bool,
                Process::output(
                    Channel::R,
                    Expr::var("y"),
                    Process::output(Channel::R, Expr::var("x"), Process::Idle),
                ),
            ),
        );
        assert_eq!(a, expected);
    }

    #[test]
    fn parses_and_prints_case() {
        let p = parse_process("case l { inl: 0, inr: 0 }").unwrap();
        assert_eq!(p, Process::branch(Channel::L, Process::Idle, Process::Idle));
        assert_eq!(print_process(&p), "case l { inl: 0, inr: 0 }");
    }

    #[test]
    fn par_is_left_associative() {
        let p = parse_process("0 || 0 || 0").unwrap();
        assert_eq!(
            p,
            Process::par(Process::par(Process::Idle, Process::Idle), Process::Idle)
        );
        let q = parse_process("0 || (0 || 0)").unwrap();
        assert_eq!(print_process(&q), "0 || (0 || 0)");
    }

    #[test]
    fn expressions() {
        assert_eq!(parse_expr("1 + 2 + x == ()").unwrap().to_string(), "1 + 2 + x == ()");
        assert_eq!(parse_expr("1 + (2 + 3)").unwrap().to_string(), "1 + (2 + 3)");
        assert_eq!(parse_expr("-4").unwrap(), Expr::int(-4));
    }

    #[test]
    fn reports_position_and_expectation() {
        let err = parse_process("l?(x:int).\n  r!(x)0").unwrap_err();
        assert_eq!((err.line, err.column), (2, 8));
        assert!(err.expected.contains(&"`.`".to_string()));
    }

    #[test]
    fn rejects_keywords_as_variables() {
        assert!(parse_process("l?(end:int).0").is_err());
        assert!(parse_process("l?(r:int).0").is_err());
    }

    #[test]
    fn integer_overflow_is_a_parse_error() {
        assert!(parse_expr("99999999999999999999").is_err());
    }
}
