//! Text formats for ideals and graphs.
//!
//! ```text
//! ring 5; ideal x1*x2, x2*x3, x3*x4, x4*x5;
//! graph 5; edges 1-2, 2-3, 3-4, 4-5;
//! ```
//!
//! Whitespace is insignificant, `#` starts a comment running to end of line,
//! indices are 1-based and exponents default to 1. The term `1` denotes the
//! unit monomial. A program may hold several `ideal` statements after a
//! single `ring` header.

use std::fmt;

use thiserror::Error;

use crate::graphs::Graph;
use crate::ideal::{ExponentVector, MonomialIdeal, MAX_DIM};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(u64),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Lexer {
    fn new(src: &str) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        let mut chars = src.chars().peekable();
        let (mut line, mut col) = (1usize, 1usize);
        while let Some(&c) = chars.peek() {
            let (l0, c0) = (line, col);
            if c == '\n' {
                chars.next();
                line += 1;
                col = 1;
            } else if c.is_whitespace() {
                chars.next();
                col += 1;
            } else if c == '#' {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            } else if c.is_ascii_alphabetic() {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_ascii_alphabetic() {
                        break;
                    }
                    w.push(c);
                    chars.next();
                    col += 1;
                }
                toks.push((Tok::Word(w), l0, c0));
            } else if c.is_ascii_digit() {
                let mut n: u64 = 0;
                while let Some(&c) = chars.peek() {
                    let Some(d) = c.to_digit(10) else { break };
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as u64))
                        .ok_or_else(|| ParseError {
                            line: l0,
                            column: c0,
                            message: "integer literal too large".into(),
                        })?;
                    chars.next();
                    col += 1;
                }
                toks.push((Tok::Int(n), l0, c0));
            } else if ";,*^-".contains(c) {
                chars.next();
                col += 1;
                toks.push((Tok::Punct(c), l0, c0));
            } else {
                return Err(ParseError {
                    line,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
        toks.push((Tok::Eof, line, col));
        Ok(Lexer { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (_, line, column) = self.toks[self.pos];
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn expect_punct(&mut self, p: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Punct(p) {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{p}`, found {}", self.peek())))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Word(x) if x == w => {
                self.next();
                Ok(())
            }
            t => Err(self.error_here(format!("expected `{w}`, found {t}"))),
        }
    }

    fn expect_int(&mut self) -> Result<(u64, usize, usize), ParseError> {
        match self.next() {
            (Tok::Int(n), l, c) => Ok((n, l, c)),
            (t, l, c) => Err(ParseError {
                line: l,
                column: c,
                message: format!("expected an integer, found {t}"),
            }),
        }
    }

    fn header(&mut self, keyword: &str) -> Result<usize, ParseError> {
        self.expect_word(keyword)?;
        let (d, l, c) = self.expect_int()?;
        if d as usize > MAX_DIM {
            return Err(ParseError {
                line: l,
                column: c,
                message: format!("dimension {d} exceeds the supported maximum of {MAX_DIM}"),
            });
        }
        self.expect_punct(';')?;
        Ok(d as usize)
    }
}

fn parse_term(lx: &mut Lexer, dim: usize) -> Result<ExponentVector, ParseError> {
    let mut exps = vec![0i64; dim];
    if let Tok::Int(1) = lx.peek() {
        lx.next();
        if *lx.peek() != Tok::Punct('*') {
            return Ok(ExponentVector::new(exps));
        }
        lx.next();
    }
    loop {
        lx.expect_word("x")?;
        let (idx, l, c) = lx.expect_int()?;
        if idx == 0 || idx as usize > dim {
            return Err(ParseError {
                line: l,
                column: c,
                message: format!("variable index x{idx} outside 1..={dim}"),
            });
        }
        let mut e = 1;
        if *lx.peek() == Tok::Punct('^') {
            lx.next();
            let (v, l, c) = lx.expect_int()?;
            e = i64::try_from(v).map_err(|_| ParseError {
                line: l,
                column: c,
                message: "exponent too large".into(),
            })?;
        }
        let slot = &mut exps[idx as usize - 1];
        *slot = slot.checked_add(e).ok_or_else(|| ParseError {
            line: l,
            column: c,
            message: "exponent too large".into(),
        })?;
        if *lx.peek() != Tok::Punct('*') {
            break;
        }
        lx.next();
    }
    Ok(ExponentVector::new(exps))
}

fn parse_ideal_statement(lx: &mut Lexer, dim: usize) -> Result<MonomialIdeal, ParseError> {
    lx.expect_word("ideal")?;
    let mut gens = Vec::new();
    if *lx.peek() != Tok::Punct(';') {
        loop {
            gens.push(parse_term(lx, dim)?);
            if *lx.peek() != Tok::Punct(',') {
                break;
            }
            lx.next();
        }
    }
    lx.expect_punct(';')?;
    Ok(MonomialIdeal::new(dim, gens).expect("terms are built in the declared dimension"))
}

/// Parse a `ring` header followed by one or more `ideal` statements.
pub fn parse_ideals(src: &str) -> Result<(usize, Vec<MonomialIdeal>), ParseError> {
    let mut lx = Lexer::new(src)?;
    let dim = lx.header("ring")?;
    let mut ideals = vec![parse_ideal_statement(&mut lx, dim)?];
    while *lx.peek() != Tok::Eof {
        ideals.push(parse_ideal_statement(&mut lx, dim)?);
    }
    Ok((dim, ideals))
}

/// Parse a program holding exactly one ideal.
pub fn parse_ideal(src: &str) -> Result<MonomialIdeal, ParseError> {
    let mut lx = Lexer::new(src)?;
    let dim = lx.header("ring")?;
    let ideal = parse_ideal_statement(&mut lx, dim)?;
    if *lx.peek() != Tok::Eof {
        return Err(lx.error_here(format!("expected end of input, found {}", lx.peek())));
    }
    Ok(ideal)
}

pub fn parse_graph(src: &str) -> Result<Graph, ParseError> {
    let mut lx = Lexer::new(src)?;
    let dim = lx.header("graph")?;
    lx.expect_word("edges")?;
    let mut edges = Vec::new();
    if *lx.peek() != Tok::Punct(';') {
        loop {
            let (u, l, c) = lx.expect_int()?;
            lx.expect_punct('-')?;
            let (v, _, _) = lx.expect_int()?;
            if u == 0 || v == 0 || u as usize > dim || v as usize > dim {
                return Err(ParseError {
                    line: l,
                    column: c,
                    message: format!("edge {u}-{v} outside vertices 1..={dim}"),
                });
            }
            if u == v {
                return Err(ParseError {
                    line: l,
                    column: c,
                    message: format!("loop at vertex {u}"),
                });
            }
            edges.push((u as usize - 1, v as usize - 1));
            if *lx.peek() != Tok::Punct(',') {
                break;
            }
            lx.next();
        }
    }
    lx.expect_punct(';')?;
    if *lx.peek() != Tok::Eof {
        return Err(lx.error_here(format!("expected end of input, found {}", lx.peek())));
    }
    Ok(Graph::new(dim, edges).expect("edges validated above"))
}

fn format_term(g: &ExponentVector) -> String {
    let factors: Vec<String> = g
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

/// The ideal statement alone, e.g. `ideal x1*x2, x2*x3;`.
pub fn format_ideal_statement(ideal: &MonomialIdeal) -> String {
    let terms: Vec<String> = ideal.gens().iter().map(format_term).collect();
    if terms.is_empty() {
        "ideal ;".to_string()
    } else {
        format!("ideal {};", terms.join(", "))
    }
}

pub fn format_ideal(ideal: &MonomialIdeal) -> String {
    format!("ring {}; {}", ideal.dim(), format_ideal_statement(ideal))
}

pub fn format_graph(graph: &Graph) -> String {
    let edges: Vec<String> = graph
        .edges()
        .iter()
        .map(|&(u, v)| format!("{}-{}", u + 1, v + 1))
        .collect();
    format!("graph {}; edges {};", graph.dim(), edges.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path_ideal() {
        let i = parse_ideal("ring 5; ideal x1*x2, x2*x3, x3*x4, x4*x5;").unwrap();
        assert_eq!(i.dim(), 5);
        assert_eq!(i.gens().len(), 4);
        let j = parse_ideal("ring 5;\n  ideal x1 * x2 ,x2*x3,\n x3*x4, x4 *x5 ; # comment").unwrap();
        assert_eq!(i, j);
    }

    #[test]
    fn exponents_and_unit() {
        let i = parse_ideal("ring 2; ideal x1*x2^5, x1^4*x2^4, x1^5*x2;").unwrap();
        assert_eq!(i.gens()[0].entries(), &[1, 5]);
        assert!(parse_ideal("ring 3; ideal 1;").unwrap().is_unit());
        assert!(parse_ideal("ring 3; ideal ;").unwrap().is_zero());
        // repeated factors accumulate
        let i = parse_ideal("ring 1; ideal x1*x1^2;").unwrap();
        assert_eq!(i.gens()[0].entries(), &[3]);
    }

    #[test]
    fn reports_positions() {
        let e = parse_ideal("ring 2;\nideal x3;").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        let e = parse_ideal("ring 2; ideal x1 x2;").unwrap_err();
        assert_eq!((e.line, e.column), (1, 18));
        let e = parse_ideal("ring 2; ideal x1$;").unwrap_err();
        assert_eq!((e.line, e.column), (1, 17));
        assert!(parse_ideal("ideal x1;").is_err());
    }

    #[test]
    fn multiple_ideals() {
        let (d, v) = parse_ideals("ring 2; ideal x1; ideal x2; ideal x1*x2;").unwrap();
        assert_eq!(d, 2);
        assert_eq!(v.len(), 3);
        assert!(parse_ideal("ring 2; ideal x1; ideal x2;").is_err());
    }

    #[test]
    fn graph_dsl() {
        let g = parse_graph("graph 5; edges 1-2, 2-3, 3-4, 4-5;").unwrap();
        assert_eq!(g.edges().len(), 4);
        assert_eq!(format_graph(&g), "graph 5; edges 1-2, 2-3, 3-4, 4-5;");
        assert!(parse_graph("graph 3; edges 1-1;").is_err());
        assert!(parse_graph("graph 3; edges 1-4;").is_err());
    }

    #[test]
    fn formatting_round_trips() {
        for src in [
            "ring 5; ideal x1*x2, x2*x3, x3*x4, x4*x5;",
            "ring 2; ideal x1*x2^5, x1^4*x2^4, x1^5*x2;",
            "ring 3; ideal 1;",
            "ring 3; ideal ;",
        ] {
            let i = parse_ideal(src).unwrap();
            assert_eq!(parse_ideal(&format_ideal(&i)).unwrap(), i);
        }
    }
}
