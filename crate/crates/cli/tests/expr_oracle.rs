//! Criterion 14, parser half: the recursive-descent parser agrees with an
//! independent shunting-yard evaluator on randomly generated expressions,
//! and pretty-printing round-trips.

use paulilab_cli::expr::{parse, Bindings, Expr, Func, Op, Var};

/// Independent oracle: shunting-yard evaluation straight off the source
/// string (no AST).
mod oracle {
    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(f64),
        Ident(String),
        Op(char),
        LParen,
        RParen,
    }

    fn lex(src: &str) -> Vec<Tok> {
        let b = src.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < b.len() {
            let c = b[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() || c == '.' {
                let start = i;
                while i < b.len()
                    && (b[i].is_ascii_digit()
                        || b[i] == b'.'
                        || b[i] == b'e'
                        || b[i] == b'E'
                        || ((b[i] == b'+' || b[i] == b'-')
                            && i > start
                            && (b[i - 1] == b'e' || b[i - 1] == b'E')))
                {
                    i += 1;
                }
                out.push(Tok::Num(src[start..i].parse().unwrap()));
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push(Tok::Ident(src[start..i].to_string()));
            } else if "+-*/^".contains(c) {
                out.push(Tok::Op(c));
                i += 1;
            } else if c == '(' {
                out.push(Tok::LParen);
                i += 1;
            } else if c == ')' {
                out.push(Tok::RParen);
                i += 1;
            } else {
                panic!("oracle lexer: unexpected '{c}'");
            }
        }
        out
    }

    fn precedence(op: char) -> (u8, bool) {
        // (binding power, right-associative)
        match op {
            '+' | '-' => (1, false),
            '*' | '/' => (2, false),
            'u' => (3, true), // unary minus
            '^' => (4, true),
            _ => unreachable!(),
        }
    }

    /// Evaluate with explicit operator and output stacks.
    pub fn eval(src: &str, r: f64, x1: f64, x2: f64, s: f64) -> f64 {
        let toks = lex(src);
        let mut output: Vec<f64> = Vec::new();
        let mut ops: Vec<char> = Vec::new(); // operators, 'u' for unary minus, '(' and function initials
        let mut funcs: Vec<String> = Vec::new();

        fn apply(output: &mut Vec<f64>, op: char) {
            if op == 'u' {
                let a = output.pop().unwrap();
                output.push(-a);
                return;
            }
            let b = output.pop().unwrap();
            let a = output.pop().unwrap();
            output.push(match op {
                '+' => a + b,
                '-' => a - b,
                '*' => a * b,
                '/' => a / b,
                '^' => a.powf(b),
                _ => unreachable!(),
            });
        }

        let mut prev_operand = false;
        for tok in toks {
            match tok {
                Tok::Num(v) => {
                    output.push(v);
                    prev_operand = true;
                }
                Tok::Ident(name) => match name.as_str() {
                    "r" => {
                        output.push(r);
                        prev_operand = true;
                    }
                    "x1" => {
                        output.push(x1);
                        prev_operand = true;
                    }
                    "x2" => {
                        output.push(x2);
                        prev_operand = true;
                    }
                    "s" => {
                        output.push(s);
                        prev_operand = true;
                    }
                    f @ ("exp" | "cos" | "sin") => {
                        funcs.push(f.to_string());
                        ops.push('f');
                        prev_operand = false;
                    }
                    other => panic!("oracle: unknown identifier {other}"),
                },
                Tok::Op(mut c) => {
                    if c == '-' && !prev_operand {
                        c = 'u';
                    } else if c == '+' && !prev_operand {
                        continue;
                    }
                    let (p, right) = precedence(c);
                    while let Some(&top) = ops.last() {
                        if top == '(' || top == 'f' {
                            break;
                        }
                        let (tp, _) = precedence(top);
                        if tp > p || (tp == p && !right) {
                            apply(&mut output, ops.pop().unwrap());
                        } else {
                            break;
                        }
                    }
                    ops.push(c);
                    prev_operand = false;
                }
                Tok::LParen => {
                    ops.push('(');
                    prev_operand = false;
                }
                Tok::RParen => {
                    while let Some(op) = ops.pop() {
                        if op == '(' {
                            break;
                        }
                        apply(&mut output, op);
                    }
                    if ops.last() == Some(&'f') {
                        ops.pop();
                        let f = funcs.pop().unwrap();
                        let a = output.pop().unwrap();
                        output.push(match f.as_str() {
                            "exp" => a.exp(),
                            "cos" => a.cos(),
                            _ => a.sin(),
                        });
                    }
                    prev_operand = true;
                }
            }
        }
        while let Some(op) = ops.pop() {
            apply(&mut output, op);
        }
        assert_eq!(output.len(), 1, "oracle stack imbalance for {src}");
        output[0]
    }
}

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn f(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn random_expr(rng: &mut Rng, depth: usize) -> Expr {
    if depth == 0 || rng.below(5) == 0 {
        return match rng.below(5) {
            0 => Expr::Num((rng.f() * 4.0).round() / 2.0 + 0.5),
            1 => Expr::Num((rng.f() * 9.0).round() + 1.0),
            2 => Expr::Var(Var::R),
            3 => Expr::Var(Var::X1),
            _ => Expr::Var(Var::X2),
        };
    }
    match rng.below(8) {
        0 => Expr::Neg(Box::new(random_expr(rng, depth - 1))),
        1 => Expr::Call(Func::Cos, Box::new(random_expr(rng, depth - 1))),
        2 => Expr::Call(Func::Sin, Box::new(random_expr(rng, depth - 1))),
        3 => Expr::Call(Func::Exp, Box::new(random_expr(rng, depth - 1))),
        n => {
            let op = match n {
                4 => Op::Add,
                5 => Op::Sub,
                6 => Op::Mul,
                _ => Op::Div,
            };
            Expr::Bin(
                op,
                Box::new(random_expr(rng, depth - 1)),
                Box::new(random_expr(rng, depth - 1)),
            )
        }
    }
}

#[test]
fn parser_agrees_with_shunting_yard_oracle() {
    let mut rng = Rng(0x5eed_cafe_f00d_1234);
    let mut checked = 0;
    let mut guard = 0;
    while checked < 100 {
        guard += 1;
        assert!(guard < 2000, "could not generate enough finite samples");
        let ast = random_expr(&mut rng, 4);
        let printed = ast.to_string();
        let reparsed = parse(&printed).unwrap_or_else(|e| panic!("reparse {printed}: {e}"));
        let b = Bindings {
            r: rng.f() * 2.0,
            x1: rng.f() * 2.0 - 1.0,
            x2: rng.f() * 2.0 - 1.0,
            s: rng.f() * 6.28,
        };
        let ours = reparsed.eval(&b);
        let theirs = oracle::eval(&printed, b.r, b.x1, b.x2, b.s);
        if !ours.is_finite() || !theirs.is_finite() {
            continue;
        }
        let scale = ours.abs().max(theirs.abs()).max(1.0);
        assert!(
            (ours - theirs).abs() <= 1e-12 * scale,
            "disagreement on '{printed}': {ours} vs {theirs}"
        );
        checked += 1;
    }
    println!("PASS — criterion 14 parser: oracle agreement on {checked} random expressions");
}

#[test]
fn pretty_print_parse_identity_on_corpus() {
    let mut rng = Rng(0xabcd_ef01_2345_6789);
    for _ in 0..50 {
        let ast = random_expr(&mut rng, 5);
        let printed = ast.to_string();
        let reparsed = parse(&printed).expect("printed form parses");
        assert_eq!(ast, reparsed, "round trip changed the tree for '{printed}'");
        // Idempotence of the printed form.
        assert_eq!(printed, reparsed.to_string());
    }
    println!("PASS — pretty-print ∘ parse is the identity on 50 random expressions");
}
