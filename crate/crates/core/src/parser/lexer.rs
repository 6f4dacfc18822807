use super::{Diagnostic, DiagnosticKind, Span};

/// Maximum number of digits after the decimal point in a numeric literal.
pub const MAX_FRACTION_DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Number(String),
    Input,
    Rule,
    Not,
    Eq,
    Semi,
    Colon,
    Amp,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Tilde,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::Number(text) => format!("number `{text}`"),
            TokenKind::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            TokenKind::Ident(_) => "identifier",
            TokenKind::Number(_) => "number",
            TokenKind::Input => "input",
            TokenKind::Rule => "rule",
            TokenKind::Not => "not",
            TokenKind::Eq => "=",
            TokenKind::Semi => ";",
            TokenKind::Colon => ":",
            TokenKind::Amp => "&",
            TokenKind::Arrow => "->",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Tilde => "~",
            TokenKind::Eof => "end of input",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

struct Cursor<'a> {
    text: &'a str,
    offset: usize,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.offset..].chars().next()
    }

    fn peek_second(&self) -> Option<char> {
        let mut it = self.text[self.offset..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: (usize, usize, usize)) -> Span {
        Span {
            line: start.1,
            column: start.2,
            offset: start.0,
            len: self.offset - start.0,
        }
    }

    fn mark(&self) -> (usize, usize, usize) {
        (self.offset, self.line, self.column)
    }
}

/// Splits `text` into tokens. Lexical problems are collected and the
/// offending characters skipped, so the token stream always ends in `Eof`.
pub fn tokenize(text: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor {
        text,
        offset: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut errors = Vec::new();

    while let Some(c) = cur.peek() {
        let start = cur.mark();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        let simple = match c {
            '=' => Some(TokenKind::Eq),
            ';' => Some(TokenKind::Semi),
            ':' => Some(TokenKind::Colon),
            '&' => Some(TokenKind::Amp),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            '~' => Some(TokenKind::Tilde),
            _ => None,
        };
        if let Some(kind) = simple {
            cur.bump();
            tokens.push(Token {
                kind,
                span: cur.span_from(start),
            });
            continue;
        }
        if c == '-' && cur.peek_second() == Some('>') {
            cur.bump();
            cur.bump();
            tokens.push(Token {
                kind: TokenKind::Arrow,
                span: cur.span_from(start),
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                cur.bump();
            }
            let word = &text[start.0..cur.offset];
            let kind = match word {
                "input" => TokenKind::Input,
                "rule" => TokenKind::Rule,
                "not" => TokenKind::Not,
                _ => TokenKind::Ident(word.to_string()),
            };
            tokens.push(Token {
                kind,
                span: cur.span_from(start),
            });
            continue;
        }
        if c.is_ascii_digit() {
            lex_number(&mut cur, start, &mut tokens, &mut errors);
            continue;
        }
        cur.bump();
        errors.push(Diagnostic {
            span: cur.span_from(start),
            kind: DiagnosticKind::Lexical,
            message: format!("unexpected character `{c}`"),
        });
    }
    let end = cur.mark();
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: cur.span_from(end),
    });
    (tokens, errors)
}

fn lex_number(
    cur: &mut Cursor<'_>,
    start: (usize, usize, usize),
    tokens: &mut Vec<Token>,
    errors: &mut Vec<Diagnostic>,
) {
    while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        cur.bump();
    }
    let mut problem = None;
    if cur.peek() == Some('.') {
        cur.bump();
        let frac_start = cur.offset;
        while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            cur.bump();
        }
        let digits = cur.offset - frac_start;
        if digits == 0 {
            problem = Some("expected digits after the decimal point".to_string());
        } else if digits > MAX_FRACTION_DIGITS {
            problem = Some(format!(
                "number has {digits} fractional digits; at most {MAX_FRACTION_DIGITS} are allowed"
            ));
        }
    }
    if matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '.') {
        while matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '.') {
            cur.bump();
        }
        problem = Some("malformed number (only plain decimals are accepted)".to_string());
    }
    let span = cur.span_from(start);
    match problem {
        Some(message) => errors.push(Diagnostic {
            span,
            kind: DiagnosticKind::Lexical,
            message,
        }),
        None => tokens.push(Token {
            kind: TokenKind::Number(cur.text[start.0..cur.offset].to_string()),
            span,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        let (toks, errs) = tokenize(text);
        assert!(errs.is_empty(), "{errs:?}");
        toks.into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn rule_tokens() {
        use TokenKind::*;
        assert_eq!(
            kinds("rule r1: A & not[0.2] ~B -> (1) C; # tail"),
            vec![
                Rule,
                Ident("r1".into()),
                Colon,
                Ident("A".into()),
                Amp,
                Not,
                LBracket,
                Number("0.2".into()),
                RBracket,
                Tilde,
                Ident("B".into()),
                Arrow,
                LParen,
                Number("1".into()),
                RParen,
                Ident("C".into()),
                Semi,
                Eof
            ]
        );
    }

    #[test]
    fn positions_are_one_based() {
        let (toks, _) = tokenize("input A = 1;\n  rule");
        assert_eq!((toks[0].span.line, toks[0].span.column), (1, 1));
        assert_eq!((toks[2].span.line, toks[2].span.column), (1, 9));
        assert_eq!((toks[5].span.line, toks[5].span.column), (2, 3));
        assert_eq!(toks.last().unwrap().span.offset, 19);
    }

    #[test]
    fn number_limits() {
        let (_, errs) = tokenize("0.1234567891 1e5 2. 0.123456789");
        assert_eq!(errs.len(), 3);
        assert!(errs[0].message.contains("10 fractional digits"));
        assert_eq!(errs[1].span.column, 14);
    }

    #[test]
    fn stray_characters() {
        let (toks, errs) = tokenize("A $ B");
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].span.column, 3);
        assert_eq!(toks.len(), 3);
    }
}
