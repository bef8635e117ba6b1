//! Text form of series, shared lexer for the other textual formats.
//!
//! Grammar for a series literal:
//!
//! ```text
//! series  = term ("+" term)* ["+" tail] | tail
//! tail    = "O" "(" "e" "^" int ")"
//! term    = coeff "*" "e" "^" int | "e" "^" int | coeff
//! coeff   = int | "t" ["^" int] | "(" poly ")"
//! poly    = pterm ("+" pterm)*
//! pterm   = int ["*" "t" ["^" int]] | "t" ["^" int]
//! ```
//!
//! Whitespace is insignificant. A bare coeff term means coeff·e^0. Duplicate
//! exponents are summed. Without an explicit tail the precision defaults to
//! the configured precision, shifted up by the leading exponent when that is
//! positive. A nonzero term at or beyond the resulting precision is an error:
//! the literal claims more than the window can hold.

use crate::arith::field::{FieldElem, FieldParams};
use crate::arith::series::Series;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(i64),
    Word(String),
    Caret,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

#[derive(Debug, Clone)]
pub struct SpannedTok {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn bump(it: &mut std::iter::Peekable<std::str::Chars<'_>>, line: &mut usize, col: &mut usize) -> char {
    let c = it.next().unwrap();
    if c == '\n' {
        *line += 1;
        *col = 1;
    } else {
        *col += 1;
    }
    c
}

pub fn lex(input: &str) -> Result<Vec<SpannedTok>> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut it = input.chars().peekable();
    while let Some(&c) = it.peek() {
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            bump(&mut it, &mut line, &mut col);
            continue;
        }
        let tok = match c {
            '^' | '*' | '+' | '-' | '(' | ')' | '[' | ']' | ',' => {
                match bump(&mut it, &mut line, &mut col) {
                    '^' => Tok::Caret,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    _ => Tok::Comma,
                }
            }
            '0'..='9' => {
                let mut v: i64 = 0;
                while let Some(&d) = it.peek() {
                    if let Some(dv) = d.to_digit(10) {
                        bump(&mut it, &mut line, &mut col);
                        v = v
                            .checked_mul(10)
                            .and_then(|x| x.checked_add(dv as i64))
                            .ok_or(Error::Syntax {
                                line: tl,
                                col: tc,
                                msg: "integer literal too large".into(),
                            })?;
                    } else {
                        break;
                    }
                }
                Tok::Int(v)
            }
            c if c.is_ascii_alphabetic() => {
                let mut w = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_alphanumeric() {
                        w.push(bump(&mut it, &mut line, &mut col));
                    } else {
                        break;
                    }
                }
                Tok::Word(w)
            }
            other => {
                return Err(Error::Syntax {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        toks.push(SpannedTok { tok, line: tl, col: tc });
    }
    Ok(toks)
}

/// Cursor over lexed tokens with positioned errors.
pub struct TokStream {
    toks: Vec<SpannedTok>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl TokStream {
    pub fn new(input: &str) -> Result<TokStream> {
        let toks = lex(input)?;
        let (end_line, end_col) = toks
            .last()
            .map(|t| (t.line, t.col + 1))
            .unwrap_or((1, 1));
        Ok(TokStream {
            toks,
            pos: 0,
            end_line,
            end_col,
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn next_tok(&mut self) -> Option<SpannedTok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    pub fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn expect(&mut self, want: &Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    pub fn expect_word(&mut self, want: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Word(w)) if w == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{want}'"))),
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    /// Signed integer: optional minus, then digits.
    pub fn parse_int(&mut self) -> Result<i64> {
        let neg = matches!(self.peek(), Some(Tok::Minus));
        if neg {
            self.pos += 1;
        }
        match self.peek() {
            Some(&Tok::Int(v)) => {
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("expected integer")),
        }
    }
}

/// t^k as a field element; k = 0 gives 1. Requires m ≥ 2 when k ≥ 1.
fn t_power(field: &FieldParams, k: i64) -> Result<FieldElem> {
    if k == 0 {
        return Ok(field.one());
    }
    if field.m() < 2 {
        return Err(Error::FieldMismatch);
    }
    let mut raw = vec![0u64; k as usize + 1];
    raw[k as usize] = 1;
    Ok(field.from_poly(&raw))
}

/// "t" with optional "^k" already past the initial word.
fn parse_t_tail(ts: &mut TokStream, field: &FieldParams) -> Result<FieldElem> {
    let k = if matches!(ts.peek(), Some(Tok::Caret)) {
        ts.next_tok();
        let k = ts.parse_int()?;
        if k < 0 {
            return Err(ts.err("negative power of t"));
        }
        k
    } else {
        1
    };
    t_power(field, k)
}

/// Parenthesized polynomial in t, already past the opening paren.
fn parse_poly(ts: &mut TokStream, field: &FieldParams) -> Result<FieldElem> {
    let mut acc = field.zero();
    loop {
        let neg = matches!(ts.peek(), Some(Tok::Minus));
        if neg {
            ts.next_tok();
        }
        let term = match ts.peek() {
            Some(&Tok::Int(v)) => {
                ts.next_tok();
                if matches!(ts.peek(), Some(Tok::Star)) {
                    ts.next_tok();
                    ts.expect_word("t")?;
                    let tp = parse_t_tail(ts, field)?;
                    field.mul(&field.from_int(v), &tp)
                } else {
                    field.from_int(v)
                }
            }
            Some(Tok::Word(w)) if w == "t" => {
                ts.next_tok();
                parse_t_tail(ts, field)?
            }
            _ => return Err(ts.err("expected polynomial term")),
        };
        acc = if neg {
            field.sub(&acc, &term)
        } else {
            field.add(&acc, &term)
        };
        match ts.peek() {
            Some(Tok::Plus) | Some(Tok::Minus) => {
                if matches!(ts.peek(), Some(Tok::Plus)) {
                    ts.next_tok();
                }
                // a Minus stays put and signs the next term
            }
            Some(Tok::RParen) => {
                ts.next_tok();
                return Ok(acc);
            }
            _ => return Err(ts.err("expected '+' or ')' in polynomial")),
        }
    }
}

fn parse_coeff(ts: &mut TokStream, field: &FieldParams) -> Result<FieldElem> {
    let neg = matches!(ts.peek(), Some(Tok::Minus));
    if neg {
        ts.next_tok();
    }
    let c = match ts.peek() {
        Some(&Tok::Int(v)) => {
            ts.next_tok();
            field.from_int(v)
        }
        Some(Tok::Word(w)) if w == "t" => {
            ts.next_tok();
            parse_t_tail(ts, field)?
        }
        Some(Tok::LParen) => {
            ts.next_tok();
            parse_poly(ts, field)?
        }
        _ => return Err(ts.err("expected coefficient")),
    };
    Ok(if neg { field.neg(&c) } else { c })
}

/// "e" "^" int, already past the word.
fn parse_epsilon_power(ts: &mut TokStream) -> Result<i64> {
    ts.expect(&Tok::Caret, "'^' after e")?;
    ts.parse_int()
}

/// The precision tail "O(e^P)", already past the word.
fn parse_tail(ts: &mut TokStream) -> Result<i64> {
    ts.expect(&Tok::LParen, "'(' after O")?;
    ts.expect_word("e")?;
    let p = parse_epsilon_power(ts)?;
    ts.expect(&Tok::RParen, "')' closing precision tail")?;
    Ok(p)
}

/// Parses a series from the stream, stopping at a delimiter (comma, closing
/// bracket) or end of input.
pub fn parse_series_stream(
    ts: &mut TokStream,
    field: &FieldParams,
    default_prec: i64,
) -> Result<Series> {
    let mut terms: BTreeMap<i64, FieldElem> = BTreeMap::new();
    let mut explicit_prec: Option<i64> = None;
    loop {
        match ts.peek() {
            Some(Tok::Word(w)) if w == "O" => {
                ts.next_tok();
                explicit_prec = Some(parse_tail(ts)?);
                break;
            }
            Some(Tok::Word(w)) if w == "e" => {
                ts.next_tok();
                let k = parse_epsilon_power(ts)?;
                let e = terms.entry(k).or_insert_with(|| field.zero());
                *e = field.add(e, &field.one());
            }
            _ => {
                let c = parse_coeff(ts, field)?;
                let k = if matches!(ts.peek(), Some(Tok::Star)) {
                    ts.next_tok();
                    ts.expect_word("e")?;
                    parse_epsilon_power(ts)?
                } else {
                    0
                };
                let e = terms.entry(k).or_insert_with(|| field.zero());
                *e = field.add(e, &c);
            }
        }
        if matches!(ts.peek(), Some(Tok::Plus)) {
            ts.next_tok();
        } else {
            break;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    let prec = match explicit_prec {
        Some(p) => p,
        None => {
            let vmin = terms.keys().next().copied().unwrap_or(0);
            default_prec + vmin.max(0)
        }
    };
    if let Some((&kmax, _)) = terms.iter().next_back() {
        if kmax >= prec {
            return Err(Error::PrecisionExhausted);
        }
    }
    match terms.iter().next() {
        None => Ok(Series::zero(field, prec)),
        Some((&vmin, _)) => {
            let mut coeffs = vec![field.zero(); (prec - vmin) as usize];
            for (&k, c) in &terms {
                coeffs[(k - vmin) as usize] = c.clone();
            }
            Ok(Series::from_coeffs(field, vmin, coeffs, prec))
        }
    }
}

pub fn parse_series(input: &str, field: &FieldParams, default_prec: i64) -> Result<Series> {
    let mut ts = TokStream::new(input)?;
    let s = parse_series_stream(&mut ts, field, default_prec)?;
    ts.expect_end()?;
    Ok(s)
}

/// Canonical text for a field element as a series coefficient. Constants
/// print as bare integers; t-monomials with unit coefficient print bare;
/// anything else is parenthesized.
pub fn render_coeff(field: &FieldParams, c: &FieldElem) -> String {
    let parts: Vec<(usize, u64)> = (0..field.m())
        .rev()
        .map(|d| (d, c.coeff(d)))
        .filter(|&(_, cv)| cv != 0)
        .collect();
    match parts.as_slice() {
        [] => "0".to_string(),
        [(0, cv)] => cv.to_string(),
        [(d, 1)] => render_t_power(*d),
        [(d, cv)] => format!("({}*{})", cv, render_t_power(*d)),
        _ => {
            let body: Vec<String> = parts
                .iter()
                .map(|&(d, cv)| match (d, cv) {
                    (0, cv) => cv.to_string(),
                    (d, 1) => render_t_power(d),
                    (d, cv) => format!("{}*{}", cv, render_t_power(d)),
                })
                .collect();
            format!("({})", body.join("+"))
        }
    }
}

fn render_t_power(d: usize) -> String {
    if d == 1 {
        "t".to_string()
    } else {
        format!("t^{d}")
    }
}

/// Canonical text: nonzero terms in ascending exponent order, unit
/// coefficients elided, always closed by the precision tail. Round-trips
/// through the parser exactly.
pub fn render_series(s: &Series) -> String {
    let field = s.field();
    let (vmin, coeffs) = s.window();
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = vmin + i as i64;
        if c.is_one() {
            parts.push(format!("e^{k}"));
        } else {
            parts.push(format!("{}*e^{}", render_coeff(field, c), k));
        }
    }
    parts.push(format!("O(e^{})", s.prec()));
    parts.join(" + ")
}
