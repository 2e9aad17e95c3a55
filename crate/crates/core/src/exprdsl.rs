//! Scalar expression language for user-supplied immersion components.
//!
//! Grammar (standard precedence, `^` right-associative, unary minus binds
//! looser than `^`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := number | name | name '(' expr ')' | '(' expr ')'
//! ```
//!
//! Implicit multiplication is rejected ("2u" is a syntax error). Numbers are
//! decimal with optional fraction and exponent. `pi` is predefined; all other
//! bare names must be declared variables or constants, checked at parse time.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Built-in single-argument functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Number(f64),
    Variable(String),
    Constant(String),
    Neg(Box<ExprAst>),
    Binary(BinOp, Box<ExprAst>, Box<ExprAst>),
    Call(Func, Box<ExprAst>),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                tokens.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(Error::Syntax {
                            offset: i.min(bytes.len()),
                            message: "expected digits after decimal point".into(),
                        });
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let value: f64 = text[start..i].parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("malformed number literal `{}`", &text[start..i]),
                })?;
                tokens.push((Token::Number(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((Token::Name(text[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
    variables: &'a [String],
    constants: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Syntax {
                offset: self.offset(),
                message: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = ExprAst::Binary(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = ExprAst::Binary(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = ExprAst::Binary(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = ExprAst::Binary(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprAst> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(ExprAst::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let exponent = self.factor()?;
            return Ok(ExprAst::Binary(
                BinOp::Pow,
                Box::new(base),
                Box::new(exponent),
            ));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst> {
        let offset = self.offset();
        match self.bump() {
            Some(Token::Number(v)) => Ok(ExprAst::Number(v)),
            Some(Token::Name(name)) => {
                if self.peek() == Some(&Token::LParen) {
                    let func = Func::from_name(&name).ok_or(Error::UnknownName {
                        name: name.clone(),
                        offset,
                    })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(Token::RParen, "`)` to close the call")?;
                    Ok(ExprAst::Call(func, Box::new(arg)))
                } else if name == "pi" {
                    Ok(ExprAst::Constant("pi".into()))
                } else if self.variables.contains(&name) {
                    Ok(ExprAst::Variable(name))
                } else if self.constants.contains(&name) {
                    Ok(ExprAst::Constant(name))
                } else {
                    Err(Error::UnknownName { name, offset })
                }
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(Error::Syntax {
                offset,
                message: "expected a number, name, or `(`".into(),
            }),
        }
    }
}

/// Parses `text` against the declared variable and constant names.
pub fn parse(text: &str, variables: &[String], constants: &[String]) -> Result<ExprAst> {
    if text.trim().is_empty() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        variables,
        constants,
    };
    let ast = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Syntax {
            offset: parser.offset(),
            message: "unexpected trailing input".into(),
        });
    }
    Ok(ast)
}

/// Evaluates the tree in IEEE double arithmetic. The environment must bind
/// every variable and constant; `pi` is supplied automatically.
pub fn eval(ast: &ExprAst, env: &BTreeMap<String, f64>) -> Result<f64> {
    match ast {
        ExprAst::Number(v) => Ok(*v),
        ExprAst::Variable(name) | ExprAst::Constant(name) => {
            if name == "pi" && !env.contains_key("pi") {
                return Ok(std::f64::consts::PI);
            }
            env.get(name).copied().ok_or_else(|| Error::UnknownName {
                name: name.clone(),
                offset: 0,
            })
        }
        ExprAst::Neg(inner) => Ok(-eval(inner, env)?),
        ExprAst::Binary(op, lhs, rhs) => {
            let a = eval(lhs, env)?;
            let b = eval(rhs, env)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div => {
                    if b == 0.0 {
                        Err(Error::Domain(format!("division by zero: {a} / 0")))
                    } else {
                        Ok(a / b)
                    }
                }
                BinOp::Pow => {
                    let r = a.powf(b);
                    if r.is_nan() && !a.is_nan() && !b.is_nan() {
                        Err(Error::Domain(format!("{a}^{b} is not a real number")))
                    } else {
                        Ok(r)
                    }
                }
            }
        }
        ExprAst::Call(func, arg) => {
            let x = eval(arg, env)?;
            match func {
                Func::Sin => Ok(x.sin()),
                Func::Cos => Ok(x.cos()),
                Func::Tan => Ok(x.tan()),
                Func::Sinh => Ok(x.sinh()),
                Func::Cosh => Ok(x.cosh()),
                Func::Tanh => Ok(x.tanh()),
                Func::Exp => Ok(x.exp()),
                Func::Log => {
                    if x <= 0.0 {
                        Err(Error::Domain(format!("log of non-positive value {x}")))
                    } else {
                        Ok(x.ln())
                    }
                }
                Func::Sqrt => {
                    if x < 0.0 {
                        Err(Error::Domain(format!("sqrt of negative value {x}")))
                    } else {
                        Ok(x.sqrt())
                    }
                }
                Func::Abs => Ok(x.abs()),
            }
        }
    }
}

impl fmt::Display for ExprAst {
    /// Fully parenthesized form; reparsing it reproduces the tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Number(v) => {
                if *v == v.trunc() && v.abs() < 1e15 {
                    write!(f, "{v:.1}")
                } else {
                    write!(f, "{v:e}")
                }
            }
            ExprAst::Variable(name) | ExprAst::Constant(name) => write!(f, "{name}"),
            ExprAst::Neg(inner) => write!(f, "(-{inner})"),
            ExprAst::Binary(op, lhs, rhs) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({lhs} {sym} {rhs})")
            }
            ExprAst::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn env(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn product_of_constant_and_variable() {
        let ast = parse("a*u", &names(&["u", "v"]), &names(&["a"])).unwrap();
        assert_eq!(
            ast,
            ExprAst::Binary(
                BinOp::Mul,
                Box::new(ExprAst::Constant("a".into())),
                Box::new(ExprAst::Variable("u".into()))
            )
        );
    }

    #[test]
    fn gallery_style_component() {
        let ast = parse(
            "exp(k*u)*cos(u)*cosh(v)",
            &names(&["u", "v"]),
            &names(&["k"]),
        )
        .unwrap();
        let value = eval(&ast, &env(&[("u", 0.0), ("v", 0.0), ("k", 1.0)])).unwrap();
        assert!((value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn caret_is_right_associative() {
        let ast = parse("2^3^2", &[], &[]).unwrap();
        assert_eq!(eval(&ast, &BTreeMap::new()).unwrap(), 512.0);
    }

    #[test]
    fn unary_minus_binds_looser_than_caret() {
        let ast = parse("-2^2", &[], &[]).unwrap();
        assert_eq!(eval(&ast, &BTreeMap::new()).unwrap(), -4.0);
    }

    #[test]
    fn sum_of_variables() {
        let ast = parse("u+v", &names(&["u", "v"]), &[]).unwrap();
        assert_eq!(eval(&ast, &env(&[("u", 1.0), ("v", 2.0)])).unwrap(), 3.0);
    }

    #[test]
    fn corrected_coefficient_form() {
        // sqrt(1 - sinh(t)^2) at t = 0.5, against direct evaluation.
        let ast = parse("sqrt(1 - sinh(t)^2)", &names(&["t"]), &[]).unwrap();
        let got = eval(&ast, &env(&[("t", 0.5)])).unwrap();
        let expected = (1.0 - 0.5f64.sinh().powi(2)).sqrt();
        assert!((got - expected).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let sqrt_neg = parse("sqrt(-1)", &[], &[]).unwrap();
        assert!(matches!(eval(&sqrt_neg, &BTreeMap::new()), Err(Error::Domain(_))));
        let log_zero = parse("log(0)", &[], &[]).unwrap();
        assert!(matches!(eval(&log_zero, &BTreeMap::new()), Err(Error::Domain(_))));
        let div_zero = parse("1/0", &[], &[]).unwrap();
        assert!(matches!(eval(&div_zero, &BTreeMap::new()), Err(Error::Domain(_))));
    }

    #[test]
    fn no_implicit_multiplication() {
        let err = parse("2u", &names(&["u"]), &[]).unwrap_err();
        assert!(matches!(err, Error::Syntax { offset: 1, .. }));
    }

    #[test]
    fn unknown_name_carries_offset() {
        let err = parse("a*q", &names(&["u"]), &names(&["a"])).unwrap_err();
        match err {
            Error::UnknownName { name, offset } => {
                assert_eq!(name, "q");
                assert_eq!(offset, 2);
            }
            other => panic!("expected UnknownName, got {other:?}"),
        }
    }

    #[test]
    fn pi_is_predefined() {
        let ast = parse("cos(pi)", &[], &[]).unwrap();
        assert!((eval(&ast, &BTreeMap::new()).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn scientific_literals() {
        let ast = parse("1.5e-3", &[], &[]).unwrap();
        assert_eq!(eval(&ast, &BTreeMap::new()).unwrap(), 1.5e-3);
    }

    #[test]
    fn display_roundtrip_smoke() {
        let vars = names(&["u", "v"]);
        let consts = names(&["a", "k"]);
        for text in [
            "a*u + k*v",
            "-sin(u)^2 * cosh(v)",
            "exp(k*u)*cos(u)*cosh(v)",
            "2^3^2 - u/v",
            "sqrt(abs(1 - cosh(u)^2))",
        ] {
            let ast = parse(text, &vars, &consts).unwrap();
            let printed = ast.to_string();
            let reparsed = parse(&printed, &vars, &consts).unwrap();
            assert_eq!(ast, reparsed, "{text} -> {printed}");
        }
    }
}
