//! Expression parsing for command-line arguments.
//!
//! Arguments such as coefficients and candidate solutions are written in a
//! small arithmetic language over the indeterminate `z` and the imaginary
//! unit `i`:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' integer)?
//! atom   := number | 'i' | 'z' | '(' expr ')'
//! ```
//!
//! Numbers are unsigned integer or decimal literals; decimals are converted
//! to exact rationals (`0.25` means `1/4`, with no floating-point rounding).
//! Exponents are integer literals, optionally negated.  Everything lowers to
//! an exact [`RationalFunction`], so `(1-2*z)/(3+z^2)` and `1/2+3/4*i` mean
//! exactly what they say.
//!
//! Parse failures report a line and column (1-based, counted in characters)
//! together with the set of tokens that would have been acceptable.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use qriccati::algebra::{ExactComplexRational, RationalFunction};

/// Maximum bracket/negation nesting accepted before the parser refuses the
/// input, so that hostile arguments cannot exhaust the call stack.
const MAX_NESTING_DEPTH: usize = 512;

/// A parse failure with its source position and the tokens that were
/// acceptable at that point.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based line of the offending character or token.
    pub line: usize,
    /// 1-based column (in characters) of the offending character or token.
    pub column: usize,
    /// What went wrong, e.g. `unexpected '^'`.
    pub message: String,
    /// Human-readable descriptions of the tokens that would have been valid.
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, "; expected {}", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

/// Outcome of parsing plus lowering: the text may be ill-formed, may denote
/// an impossible operation (division by an expression that is identically
/// zero), or may depend on `z` where a constant was required.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprError {
    Syntax(ParseError),
    Domain(String),
    NotConstant,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax(err) => write!(f, "{err}"),
            ExprError::Domain(msg) => write!(f, "{msg}"),
            ExprError::NotConstant => {
                write!(f, "expected a constant expression, but it depends on z")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Integer(BigInt),
    Decimal(BigRational),
    ImagUnit,
    Variable,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl TokKind {
    fn describe(&self) -> String {
        match self {
            TokKind::Integer(_) | TokKind::Decimal(_) => "number".to_owned(),
            TokKind::ImagUnit => "'i'".to_owned(),
            TokKind::Variable => "'z'".to_owned(),
            TokKind::Plus => "'+'".to_owned(),
            TokKind::Minus => "'-'".to_owned(),
            TokKind::Star => "'*'".to_owned(),
            TokKind::Slash => "'/'".to_owned(),
            TokKind::Caret => "'^'".to_owned(),
            TokKind::LParen => "'('".to_owned(),
            TokKind::RParen => "')'".to_owned(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokKind,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.chars.next()?;
        if ch == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(ch)
    }

    fn error(&self, line: usize, column: usize, message: String) -> ParseError {
        ParseError {
            line,
            column,
            message,
            expected: Vec::new(),
        }
    }

    /// Tokenize the whole input; the second value is the position one past
    /// the final character, used to locate end-of-input errors.
    fn run(mut self) -> Result<(Vec<Token>, (usize, usize)), ParseError> {
        let mut tokens = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let (line, column) = (self.line, self.column);
            let ch = match self.chars.peek() {
                Some(&c) => c,
                None => return Ok((tokens, (line, column))),
            };
            let kind = match ch {
                '+' => {
                    self.bump();
                    TokKind::Plus
                }
                '-' => {
                    self.bump();
                    TokKind::Minus
                }
                '*' => {
                    self.bump();
                    TokKind::Star
                }
                '/' => {
                    self.bump();
                    TokKind::Slash
                }
                '^' => {
                    self.bump();
                    TokKind::Caret
                }
                '(' => {
                    self.bump();
                    TokKind::LParen
                }
                ')' => {
                    self.bump();
                    TokKind::RParen
                }
                c if c.is_ascii_digit() => self.lex_number()?,
                c if c.is_alphabetic() || c == '_' => self.lex_word(line, column)?,
                c => {
                    return Err(self.error(
                        line,
                        column,
                        format!("unexpected character '{c}'"),
                    ))
                }
            };
            tokens.push(Token { kind, line, column });
        }
    }

    fn lex_number(&mut self) -> Result<TokKind, ParseError> {
        let mut digits = String::new();
        while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if self.chars.peek() != Some(&'.') {
            let value: BigInt = digits.parse().expect("digit run parses as an integer");
            return Ok(TokKind::Integer(value));
        }
        self.bump();
        let mut frac = String::new();
        while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
            frac.push(self.bump().unwrap());
        }
        if frac.is_empty() {
            return Err(self.error(
                self.line,
                self.column,
                "expected digits after the decimal point".to_owned(),
            ));
        }
        let whole: BigInt = digits.parse().expect("digit run parses as an integer");
        let frac_value: BigInt = frac.parse().expect("digit run parses as an integer");
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let value = BigRational::new(whole * &scale + frac_value, scale);
        Ok(TokKind::Decimal(value))
    }

    fn lex_word(&mut self, line: usize, column: usize) -> Result<TokKind, ParseError> {
        let mut word = String::new();
        while matches!(self.chars.peek(), Some(&c) if c.is_alphanumeric() || c == '_') {
            word.push(self.bump().unwrap());
        }
        match word.as_str() {
            "z" => Ok(TokKind::Variable),
            "i" => Ok(TokKind::ImagUnit),
            _ => Err(self.error(
                line,
                column,
                format!("unknown identifier '{word}' (only 'z' and 'i' are defined)"),
            )),
        }
    }
}

/// Abstract syntax of a parsed expression, prior to lowering.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Integer(BigInt),
    Decimal(BigRational),
    ImagUnit,
    Variable,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    depth: usize,
}

const ATOM_EXPECTED: &[&str] = &["number", "'i'", "'z'", "'('", "'-'"];

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn error_here(&self, message: &str, expected: &[&'static str]) -> ParseError {
        let (line, column) = match self.peek() {
            Some(tok) => (tok.line, tok.column),
            None => self.end,
        };
        let message = match self.peek() {
            Some(tok) => format!("{message} {}", tok.kind.describe()),
            None => format!("{message} end of input"),
        };
        ParseError {
            line,
            column,
            message,
            expected: expected.to_vec(),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING_DEPTH {
            let (line, column) = match self.peek() {
                Some(tok) => (tok.line, tok.column),
                None => self.end,
            };
            return Err(ParseError {
                line,
                column,
                message: format!("expression nests deeper than {MAX_NESTING_DEPTH} levels"),
                expected: Vec::new(),
            });
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.parse_term()?;
        while let Some(tok) = self.peek() {
            let op = match tok.kind {
                TokKind::Plus => Expr::Add as fn(_, _) -> _,
                TokKind::Minus => Expr::Sub as fn(_, _) -> _,
                _ => break,
            };
            self.advance();
            let rhs = self.parse_term()?;
            lhs = op(Box::new(lhs), Box::new(rhs));
        }
        self.leave();
        Ok(lhs)
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_factor()?;
        while let Some(tok) = self.peek() {
            let op = match tok.kind {
                TokKind::Star => Expr::Mul as fn(_, _) -> _,
                TokKind::Slash => Expr::Div as fn(_, _) -> _,
                _ => break,
            };
            self.advance();
            let rhs = self.parse_factor()?;
            lhs = op(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Some(tok) if tok.kind == TokKind::Minus) {
            self.advance();
            self.enter()?;
            let inner = self.parse_factor()?;
            self.leave();
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let atom = self.parse_atom()?;
        if matches!(self.peek(), Some(tok) if tok.kind == TokKind::Caret) {
            self.advance();
            let exponent = self.parse_exponent()?;
            return Ok(Expr::Pow(Box::new(atom), exponent));
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.peek() else {
            return Err(self.error_here("unexpected", ATOM_EXPECTED));
        };
        match tok.kind.clone() {
            TokKind::Integer(value) => {
                self.advance();
                Ok(Expr::Integer(value))
            }
            TokKind::Decimal(value) => {
                self.advance();
                Ok(Expr::Decimal(value))
            }
            TokKind::ImagUnit => {
                self.advance();
                Ok(Expr::ImagUnit)
            }
            TokKind::Variable => {
                self.advance();
                Ok(Expr::Variable)
            }
            TokKind::LParen => {
                self.advance();
                let inner = self.parse_expr()?;
                match self.peek() {
                    Some(tok) if tok.kind == TokKind::RParen => {
                        self.advance();
                        Ok(inner)
                    }
                    _ => Err(self.error_here("unexpected", &["')'"])),
                }
            }
            _ => Err(self.error_here("unexpected", ATOM_EXPECTED)),
        }
    }

    /// Exponents are integer literals with an optional leading minus; any
    /// other token (a decimal, a parenthesis, a second caret) is rejected
    /// here so that `z^1.5` and `z^(1/2)` fail with a clear message.
    fn parse_exponent(&mut self) -> Result<i64, ParseError> {
        let negate = if matches!(self.peek(), Some(tok) if tok.kind == TokKind::Minus) {
            self.advance();
            true
        } else {
            false
        };
        let Some(tok) = self.peek() else {
            return Err(self.error_here("unexpected", &["integer exponent"]));
        };
        let (line, column) = (tok.line, tok.column);
        match tok.kind.clone() {
            TokKind::Integer(value) => {
                self.advance();
                let signed = if negate { -value } else { value };
                signed.to_i64().ok_or(ParseError {
                    line,
                    column,
                    message: "exponent is too large".to_owned(),
                    expected: Vec::new(),
                })
            }
            TokKind::Decimal(_) => Err(ParseError {
                line,
                column,
                message: "exponent must be an integer, not a decimal".to_owned(),
                expected: vec!["integer exponent"],
            }),
            _ => Err(self.error_here("unexpected", &["integer exponent"])),
        }
    }
}

/// Parse `text` into an abstract syntax tree without lowering it.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let (tokens, end) = Lexer::new(text).run()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
        depth: 0,
    };
    let expr = parser.parse_expr()?;
    if parser.peek().is_some() {
        return Err(parser.error_here(
            "unexpected",
            &["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"],
        ));
    }
    Ok(expr)
}

fn constant(value: ExactComplexRational) -> RationalFunction {
    RationalFunction::constant(value)
}

/// Lower an abstract syntax tree to an exact rational function.  Division by
/// a subexpression that is identically zero, and `0^n` for negative `n`, are
/// domain errors rather than syntax errors.
pub fn lower(expr: &Expr) -> Result<RationalFunction, ExprError> {
    match expr {
        Expr::Integer(value) => Ok(constant(ExactComplexRational::new(
            BigRational::from_integer(value.clone()),
            BigRational::zero(),
        ))),
        Expr::Decimal(value) => Ok(constant(ExactComplexRational::new(
            value.clone(),
            BigRational::zero(),
        ))),
        Expr::ImagUnit => Ok(constant(ExactComplexRational::i())),
        Expr::Variable => Ok(RationalFunction::variable()),
        Expr::Neg(inner) => Ok(-&lower(inner)?),
        Expr::Add(lhs, rhs) => Ok(&lower(lhs)? + &lower(rhs)?),
        Expr::Sub(lhs, rhs) => Ok(&lower(lhs)? - &lower(rhs)?),
        Expr::Mul(lhs, rhs) => Ok(&lower(lhs)? * &lower(rhs)?),
        Expr::Div(lhs, rhs) => {
            let num = lower(lhs)?;
            let den = lower(rhs)?;
            num.checked_div(&den).map_err(|_| {
                ExprError::Domain(
                    "division by an expression that is identically zero".to_owned(),
                )
            })
        }
        Expr::Pow(base, exponent) => {
            let base = lower(base)?;
            base.checked_pow(*exponent).map_err(|_| {
                ExprError::Domain(format!(
                    "cannot raise an identically zero expression to the power {exponent}"
                ))
            })
        }
    }
}

/// Parse and lower in one step.
pub fn parse_rational(text: &str) -> Result<RationalFunction, ExprError> {
    let expr = parse(text).map_err(ExprError::Syntax)?;
    lower(&expr)
}

/// Parse an expression that must denote a constant (must not mention `z`).
pub fn parse_scalar(text: &str) -> Result<ExactComplexRational, ExprError> {
    let value = parse_rational(text)?;
    if value.is_constant() {
        // A constant in canonical form has denominator 1.
        Ok(value.num().coeff(0))
    } else {
        Err(ExprError::NotConstant)
    }
}
