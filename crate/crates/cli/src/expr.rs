//! Small arithmetic expression language for field and radius functions:
//! `+ - * / ^`, unary minus, `exp`/`cos`/`sin`, numeric literals and the
//! variables `r`, `x1`, `x2` (fields) or `s` (boundary radius functions).

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    R,
    X1,
    X2,
    S,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::R => "r",
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::S => "s",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Cos,
    Sin,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Cos => "cos",
            Func::Sin => "sin",
        }
    }

    pub fn apply(self, x: f64) -> f64 {
        match self {
            Func::Exp => x.exp(),
            Func::Cos => x.cos(),
            Func::Sin => x.sin(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Variable bindings for evaluation; unused slots may stay at zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bindings {
    pub r: f64,
    pub x1: f64,
    pub x2: f64,
    pub s: f64,
}

impl Expr {
    pub fn eval(&self, b: &Bindings) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::R) => b.r,
            Expr::Var(Var::X1) => b.x1,
            Expr::Var(Var::X2) => b.x2,
            Expr::Var(Var::S) => b.s,
            Expr::Neg(e) => -e.eval(b),
            Expr::Bin(op, l, r) => {
                let (lv, rv) = (l.eval(b), r.eval(b));
                match op {
                    Op::Add => lv + rv,
                    Op::Sub => lv - rv,
                    Op::Mul => lv * rv,
                    Op::Div => lv / rv,
                    Op::Pow => lv.powf(rv),
                }
            }
            Expr::Call(f, e) => f.apply(e.eval(b)),
        }
    }

    /// Variables referenced by the expression.
    pub fn variables(&self) -> Vec<Var> {
        let mut out = Vec::new();
        fn walk(e: &Expr, out: &mut Vec<Var>) {
            match e {
                Expr::Var(v) => {
                    if !out.contains(v) {
                        out.push(*v);
                    }
                }
                Expr::Neg(x) => walk(x, out),
                Expr::Bin(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                Expr::Call(_, x) => walk(x, out),
                Expr::Num(_) => {}
            }
        }
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next_token(&mut self) -> Result<(Token, usize), String> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Token::End, start));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'0'..=b'9' | b'.' => {
                let mut end = self.pos;
                let mut seen_e = false;
                while end < self.src.len() {
                    let d = self.src[end];
                    if d.is_ascii_digit() || d == b'.' {
                        end += 1;
                    } else if (d == b'e' || d == b'E') && !seen_e {
                        seen_e = true;
                        end += 1;
                        if end < self.src.len() && (self.src[end] == b'+' || self.src[end] == b'-')
                        {
                            end += 1;
                        }
                    } else {
                        break;
                    }
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                let v: f64 = text
                    .parse()
                    .map_err(|_| format!("invalid number '{text}' at position {start}"))?;
                self.pos = end;
                return Ok((Token::Num(v), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                return Ok((Token::Ident(text), start));
            }
            other => {
                return Err(format!(
                    "unexpected character '{}' at position {start}",
                    other as char
                ))
            }
        };
        self.pos += 1;
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Token,
    current_pos: usize,
}

const KNOWN_NAMES: &[&str] = &["r", "x1", "x2", "s", "exp", "cos", "sin"];

fn suggestion(name: &str) -> String {
    let mut best = KNOWN_NAMES[0];
    let mut best_d = usize::MAX;
    for cand in KNOWN_NAMES {
        let d = edit_distance(name, cand);
        if d < best_d {
            best_d = d;
            best = cand;
        }
    }
    format!("unknown identifier '{name}'; did you mean '{best}'?")
}

fn edit_distance(a: &str, b: &str) -> usize {
    let (a, b): (Vec<char>, Vec<char>) = (a.chars().collect(), b.chars().collect());
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut row = vec![i + 1];
        for (j, cb) in b.iter().enumerate() {
            let cost = if ca == cb { 0 } else { 1 };
            row.push((prev[j] + cost).min(prev[j + 1] + 1).min(row[j] + 1));
        }
        prev = row;
    }
    prev[b.len()]
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, String> {
        let mut lexer = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let (current, current_pos) = lexer.next_token()?;
        Ok(Parser {
            lexer,
            current,
            current_pos,
        })
    }

    fn advance(&mut self) -> Result<(), String> {
        let (t, p) = self.lexer.next_token()?;
        self.current = t;
        self.current_pos = p;
        Ok(())
    }

    fn parse_add(&mut self) -> Result<Expr, String> {
        let mut lhs = self.parse_mul()?;
        loop {
            let op = match self.current {
                Token::Plus => Op::Add,
                Token::Minus => Op::Sub,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.parse_mul()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn parse_mul(&mut self) -> Result<Expr, String> {
        let mut lhs = self.parse_unary()?;
        loop {
            let op = match self.current {
                Token::Star => Op::Mul,
                Token::Slash => Op::Div,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.parse_unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn parse_unary(&mut self) -> Result<Expr, String> {
        if self.current == Token::Minus {
            self.advance()?;
            return Ok(Expr::Neg(Box::new(self.parse_unary()?)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr, String> {
        let base = self.parse_atom()?;
        if self.current == Token::Caret {
            self.advance()?;
            // Right-associative; exponent may carry a unary minus.
            let exp = self.parse_unary()?;
            return Ok(Expr::Bin(Op::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr, String> {
        match self.current.clone() {
            Token::Num(v) => {
                self.advance()?;
                Ok(Expr::Num(v))
            }
            Token::LParen => {
                self.advance()?;
                let inner = self.parse_add()?;
                if self.current != Token::RParen {
                    return Err(format!(
                        "expected ')' at position {}",
                        self.current_pos
                    ));
                }
                self.advance()?;
                Ok(inner)
            }
            Token::Ident(name) => {
                let pos = self.current_pos;
                self.advance()?;
                match name.as_str() {
                    "r" => Ok(Expr::Var(Var::R)),
                    "x1" => Ok(Expr::Var(Var::X1)),
                    "x2" => Ok(Expr::Var(Var::X2)),
                    "s" => Ok(Expr::Var(Var::S)),
                    "exp" | "cos" | "sin" => {
                        if self.current != Token::LParen {
                            return Err(format!(
                                "function '{name}' needs parentheses at position {pos}"
                            ));
                        }
                        self.advance()?;
                        let arg = self.parse_add()?;
                        if self.current != Token::RParen {
                            return Err(format!(
                                "expected ')' closing '{name}' at position {}",
                                self.current_pos
                            ));
                        }
                        self.advance()?;
                        let f = match name.as_str() {
                            "exp" => Func::Exp,
                            "cos" => Func::Cos,
                            _ => Func::Sin,
                        };
                        Ok(Expr::Call(f, Box::new(arg)))
                    }
                    _ => Err(format!("{} (position {pos})", suggestion(&name))),
                }
            }
            Token::End => Err(format!(
                "unexpected end of expression at position {}",
                self.current_pos
            )),
            other => Err(format!(
                "unexpected token {other:?} at position {}",
                self.current_pos
            )),
        }
    }
}

/// Parse an expression string.
pub fn parse(src: &str) -> Result<Expr, String> {
    if src.trim().is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser::new(src)?;
    let e = p.parse_add()?;
    if p.current != Token::End {
        return Err(format!(
            "trailing input at position {}",
            p.current_pos
        ));
    }
    Ok(e)
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(Op::Add | Op::Sub, ..) => 1,
            Expr::Bin(Op::Mul | Op::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(Op::Pow, ..) => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for Expr {
    /// Canonical pretty-printer: minimal parentheses, round-trips through
    /// [`parse`] to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, need: u8) -> fmt::Result {
            if e.precedence() < need {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(v) => write!(f, "{}", v.name()),
            Expr::Neg(e) => {
                write!(f, "-")?;
                child(f, e, 3)
            }
            Expr::Bin(op, l, r) => {
                let (prec, sym) = match op {
                    Op::Add => (1, " + "),
                    Op::Sub => (1, " - "),
                    Op::Mul => (2, "*"),
                    Op::Div => (2, "/"),
                    Op::Pow => (4, "^"),
                };
                match op {
                    // Left-assoc: right child at equal precedence needs
                    // parentheses for an exact AST round-trip.
                    Op::Add | Op::Sub | Op::Mul | Op::Div => {
                        child(f, l, prec)?;
                        write!(f, "{sym}")?;
                        child(f, r, prec + 1)
                    }
                    // Right-assoc, parenthesize a left power child.
                    Op::Pow => {
                        child(f, l, prec + 1)?;
                        write!(f, "{sym}")?;
                        child(f, r, prec)
                    }
                }
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_and_arithmetic() {
        assert_eq!(parse("2").unwrap().eval(&Bindings::default()), 2.0);
        let e = parse("1 + r^2").unwrap();
        assert_eq!(e.eval(&Bindings { r: 2.0, ..Default::default() }), 5.0);
        let e = parse("exp(-(x1^2+x2^2))+0.1").unwrap();
        assert!((e.eval(&Bindings::default()) - 1.1).abs() < 1e-15);
    }

    #[test]
    fn precedence_and_unary_minus() {
        // ^ binds tighter than * and unary minus.
        let e = parse("2*3^2").unwrap();
        assert_eq!(e.eval(&Bindings::default()), 18.0);
        let e = parse("-3^2").unwrap();
        assert_eq!(e.eval(&Bindings::default()), -9.0);
        let e = parse("2^-1").unwrap();
        assert_eq!(e.eval(&Bindings::default()), 0.5);
        // Right associativity: 2^3^2 = 2^9.
        let e = parse("2^3^2").unwrap();
        assert_eq!(e.eval(&Bindings::default()), 512.0);
        let e = parse("1 - 2 - 3").unwrap();
        assert_eq!(e.eval(&Bindings::default()), -4.0);
    }

    #[test]
    fn errors_carry_positions_and_suggestions() {
        let err = parse("1 + co(2)").unwrap_err();
        assert!(err.contains("cos"), "{err}");
        let err = parse("1 + ").unwrap_err();
        assert!(err.contains("position"), "{err}");
        let err = parse("(1 + 2").unwrap_err();
        assert!(err.contains("')'"), "{err}");
    }

    #[test]
    fn pretty_print_round_trip() {
        for src in [
            "1 + 0.1*cos(2*s)",
            "exp(-(x1^2+x2^2))+0.1",
            "-(r + 1)^2/(3 - r)",
            "2^-3^2",
            "-(-r)",
            "1/(2/(3/4))",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            let e2 = parse(&printed).unwrap();
            assert_eq!(e, e2, "{src} -> {printed}");
        }
    }

    #[test]
    fn variables_are_tracked() {
        let e = parse("1 + r^2").unwrap();
        assert_eq!(e.variables(), vec![Var::R]);
        let e = parse("x1*x2 + sin(x1)").unwrap();
        assert_eq!(e.variables(), vec![Var::X1, Var::X2]);
    }
}
