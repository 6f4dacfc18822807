//! The `.primo` rule language.
//!
//! ```text
//! spec  := stmt*
//! stmt  := input | rule
//! input := "input" lit "=" NUM ";"
//! rule  := "rule" ID ":" [ ante ("&" ante)* ] "->" "(" NUM ")" lit ";"
//! ante  := lit | "not" "[" NUM "]" lit
//! lit   := "~"? ID
//! ```
//!
//! `~` is classical negation (a distinct literal), `not[a] P` is the
//! nonmonotonic antecedent, `#` starts a line comment. Numbers are plain
//! decimals with at most nine fractional digits.

mod lexer;
mod render;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{GraphError, Justification, Literal, NonmonAntecedent, PrimoGraph};
use crate::scalar::Scalar;
use crate::tnorm::TNormFamily;

pub use lexer::{tokenize, Token, TokenKind, MAX_FRACTION_DIGITS};
pub use render::{render, render_number};

/// Location of a piece of source text. Lines and columns are 1-based and
/// count characters; `offset` and `len` are in bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
    pub len: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    Lexical,
    Syntax { expected: Vec<String> },
    Range,
    Duplicate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputDecl<S> {
    pub literal: Literal,
    pub confidence: S,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleDecl<S> {
    pub rule: Justification<S>,
    pub span: Span,
}

/// Parsed rule base: input confidences and justifications with their
/// source positions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PrimoSpec<S> {
    pub inputs: Vec<InputDecl<S>>,
    pub rules: Vec<RuleDecl<S>>,
}

impl<S: Scalar> PrimoSpec<S> {
    /// Equality of inputs and rules regardless of order and source spans.
    pub fn same_content(&self, other: &Self) -> bool {
        fn sorted<T: Clone, K: Ord>(items: &[T], key: impl Fn(&T) -> K) -> Vec<T> {
            let mut v = items.to_vec();
            v.sort_by_key(key);
            v
        }
        let inputs = |s: &Self| {
            sorted(&s.inputs, |d| d.literal.clone())
                .into_iter()
                .map(|d| (d.literal, d.confidence))
                .collect::<Vec<_>>()
        };
        let rules = |s: &Self| {
            sorted(&s.rules, |d| d.rule.id.clone())
                .into_iter()
                .map(|d| d.rule)
                .collect::<Vec<_>>()
        };
        inputs(self) == inputs(other) && rules(self) == rules(other)
    }

    pub fn to_graph(&self, family: TNormFamily) -> Result<PrimoGraph<S>, Vec<GraphError>> {
        let builder = self.inputs.iter().fold(PrimoGraph::builder(family), |b, d| {
            b.input(d.literal.clone(), d.confidence)
        });
        self.rules.iter().fold(builder, |b, d| b.rule(d.rule.clone())).build()
    }
}

/// Parses `.primo` text. Syntax errors are recovered from at the next `;`
/// so that one pass reports as many problems as possible.
pub fn parse<S: Scalar>(text: &str) -> Result<PrimoSpec<S>, ParseError> {
    let (tokens, mut diagnostics) = tokenize(text);
    let mut parser = Parser {
        tokens,
        pos: 0,
        diagnostics: Vec::new(),
        sites: Vec::new(),
        spec: PrimoSpec {
            inputs: Vec::new(),
            rules: Vec::new(),
        },
    };
    parser.spec_body();
    diagnostics.append(&mut parser.diagnostics);
    diagnostics.extend(semantic_checks(&parser.spec, &parser.sites));
    if diagnostics.is_empty() {
        Ok(parser.spec)
    } else {
        diagnostics.sort_by_key(|d| d.span.offset);
        Err(ParseError { diagnostics })
    }
}

// Numeric fields keep the span of the token they came from so range errors
// point at it.
#[derive(Debug, Clone, Copy)]
enum NumberSite {
    Input(usize),
    Sufficiency(usize),
    Alpha(usize, usize),
}

struct Parser<S> {
    tokens: Vec<Token>,
    pos: usize,
    diagnostics: Vec<Diagnostic>,
    sites: Vec<(NumberSite, Span)>,
    spec: PrimoSpec<S>,
}

struct SyntaxError;

type PResult<T> = Result<T, SyntaxError>;

impl<S: Scalar> Parser<S> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error(&mut self, expected: &[&str]) -> SyntaxError {
        let tok = self.peek().clone();
        let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        let list = expected.iter().map(|e| format!("`{e}`")).collect::<Vec<_>>().join(", ");
        self.diagnostics.push(Diagnostic {
            span: tok.span,
            kind: DiagnosticKind::Syntax {
                expected: expected.clone(),
            },
            message: if expected.len() == 1 {
                format!("expected {list}, found {}", tok.kind.describe())
            } else {
                format!("expected one of {list}, found {}", tok.kind.describe())
            },
        });
        SyntaxError
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Token> {
        if self.peek().kind == kind {
            Ok(self.advance())
        } else {
            Err(self.error(&[kind.symbol()]))
        }
    }

    fn spec_body(&mut self) {
        loop {
            let result = match self.peek().kind {
                TokenKind::Eof => break,
                TokenKind::Input => self.input_stmt(),
                TokenKind::Rule => self.rule_stmt(),
                _ => {
                    let err = self.error(&["input", "rule"]);
                    self.advance();
                    Err(err)
                }
            };
            if result.is_err() {
                self.recover();
            }
        }
    }

    // Skip past the next `;`, or stop before a statement keyword.
    fn recover(&mut self) {
        loop {
            match self.peek().kind {
                TokenKind::Eof | TokenKind::Input | TokenKind::Rule => return,
                TokenKind::Semi => {
                    self.advance();
                    return;
                }
                _ => {
                    self.advance();
                }
            }
        }
    }

    fn literal(&mut self) -> PResult<(Literal, Span)> {
        let negated = self.peek().kind == TokenKind::Tilde;
        let start = self.peek().span;
        if negated {
            self.advance();
        }
        match self.peek().kind.clone() {
            TokenKind::Ident(name) => {
                let end = self.advance().span;
                let span = Span {
                    len: end.offset + end.len - start.offset,
                    ..start
                };
                Ok((Literal::new(name, negated), span))
            }
            _ if negated => Err(self.error(&["identifier"])),
            _ => Err(self.error(&["identifier", "~"])),
        }
    }

    fn number(&mut self, site: NumberSite) -> PResult<S> {
        match self.peek().kind.clone() {
            TokenKind::Number(text) => {
                let span = self.advance().span;
                self.sites.push((site, span));
                S::from_str_radix(&text, 10).map_err(|_| {
                    self.diagnostics.push(Diagnostic {
                        span,
                        kind: DiagnosticKind::Lexical,
                        message: format!("cannot read `{text}` as a number"),
                    });
                    SyntaxError
                })
            }
            _ => Err(self.error(&["number"])),
        }
    }

    fn input_stmt(&mut self) -> PResult<()> {
        let start = self.expect(TokenKind::Input)?.span;
        let (literal, _) = self.literal()?;
        self.expect(TokenKind::Eq)?;
        let confidence = self.number(NumberSite::Input(self.spec.inputs.len()))?;
        let end = self.expect(TokenKind::Semi)?.span;
        self.spec.inputs.push(InputDecl {
            literal,
            confidence,
            span: join(start, end),
        });
        Ok(())
    }

    fn rule_stmt(&mut self) -> PResult<()> {
        let start = self.expect(TokenKind::Rule)?.span;
        let id = match self.peek().kind.clone() {
            TokenKind::Ident(id) => {
                self.advance();
                id
            }
            _ => return Err(self.error(&["identifier"])),
        };
        self.expect(TokenKind::Colon)?;
        let index = self.spec.rules.len();
        let mut monotonic = Vec::new();
        let mut nonmonotonic = Vec::new();
        if self.peek().kind != TokenKind::Arrow {
            loop {
                if self.peek().kind == TokenKind::Not {
                    self.advance();
                    self.expect(TokenKind::LBracket)?;
                    let alpha = self.number(NumberSite::Alpha(index, nonmonotonic.len()))?;
                    self.expect(TokenKind::RBracket)?;
                    let (target, _) = self.literal()?;
                    nonmonotonic.push(NonmonAntecedent { target, alpha });
                } else if matches!(self.peek().kind, TokenKind::Ident(_) | TokenKind::Tilde) {
                    monotonic.push(self.literal()?.0);
                } else {
                    return Err(self.error(&["identifier", "~", "not", "->"]));
                }
                match self.peek().kind {
                    TokenKind::Amp => {
                        self.advance();
                    }
                    TokenKind::Arrow => break,
                    _ => return Err(self.error(&["&", "->"])),
                }
            }
        }
        self.expect(TokenKind::Arrow)?;
        self.expect(TokenKind::LParen)?;
        let sufficiency = self.number(NumberSite::Sufficiency(index))?;
        self.expect(TokenKind::RParen)?;
        let (conclusion, _) = self.literal()?;
        let end = self.expect(TokenKind::Semi)?.span;
        self.spec.rules.push(RuleDecl {
            rule: Justification {
                id,
                monotonic,
                nonmonotonic,
                sufficiency,
                conclusion,
            },
            span: join(start, end),
        });
        Ok(())
    }
}

fn join(start: Span, end: Span) -> Span {
    Span {
        len: end.offset + end.len - start.offset,
        ..start
    }
}

fn semantic_checks<S: Scalar>(spec: &PrimoSpec<S>, sites: &[(NumberSite, Span)]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let unit_open = |v: S| v > S::zero() && v <= S::one();
    let range = |span: Span, message: String| Diagnostic {
        span,
        kind: DiagnosticKind::Range,
        message,
    };
    for &(site, span) in sites {
        match site {
            NumberSite::Input(i) => {
                if let Some(d) = spec.inputs.get(i) {
                    if !d.confidence.in_unit_interval() {
                        out.push(range(
                            span,
                            format!(
                                "input confidence {} for `{}` is outside [0, 1]",
                                d.confidence, d.literal
                            ),
                        ));
                    }
                }
            }
            NumberSite::Sufficiency(r) => {
                if let Some(d) = spec.rules.get(r) {
                    if !unit_open(d.rule.sufficiency) {
                        out.push(range(
                            span,
                            format!(
                                "sufficiency {} of rule `{}` is outside (0, 1]",
                                d.rule.sufficiency, d.rule.id
                            ),
                        ));
                    }
                }
            }
            NumberSite::Alpha(r, k) => {
                if let Some(nm) = spec.rules.get(r).and_then(|d| d.rule.nonmonotonic.get(k)) {
                    if !unit_open(nm.alpha) {
                        out.push(range(
                            span,
                            format!("threshold {} on `{}` is outside (0, 1]", nm.alpha, nm.target),
                        ));
                    }
                }
            }
        }
    }

    let mut inputs: HashMap<&Literal, Span> = HashMap::new();
    for d in &spec.inputs {
        if let Some(first) = inputs.insert(&d.literal, d.span) {
            out.push(Diagnostic {
                span: d.span,
                kind: DiagnosticKind::Duplicate,
                message: format!("duplicate input `{}` (first declared at {first})", d.literal),
            });
            inputs.insert(&d.literal, first);
        }
    }
    let mut rules: HashMap<&str, Span> = HashMap::new();
    for d in &spec.rules {
        if let Some(first) = rules.insert(&d.rule.id, d.span) {
            out.push(Diagnostic {
                span: d.span,
                kind: DiagnosticKind::Duplicate,
                message: format!("duplicate rule id `{}` (first declared at {first})", d.rule.id),
            });
            rules.insert(&d.rule.id, first);
        }
    }
    out
}
