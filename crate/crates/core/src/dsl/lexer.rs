//! Tokenizer for the domain and query languages.

use super::{ParseDiagnostic, SourceSpan};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TokenKind {
    Ident,
    Integer,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    At,
    Slash,
    Eq,
    Gt,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Eof,
}

impl TokenKind {
    pub fn show(&self) -> &'static str {
        match self {
            TokenKind::Ident => "identifier",
            TokenKind::Integer => "integer",
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Comma => ",",
            TokenKind::Semi => ";",
            TokenKind::Colon => ":",
            TokenKind::Dot => ".",
            TokenKind::At => "@",
            TokenKind::Slash => "/",
            TokenKind::Eq => "=",
            TokenKind::Gt => ">",
            TokenKind::Tilde => "~",
            TokenKind::Amp => "&",
            TokenKind::Pipe => "|",
            TokenKind::Arrow => "->",
            TokenKind::Eof => "end of input",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
}

/// Scans the whole input; lexical errors become diagnostics.
pub fn tokenize(input: &str) -> Result<Vec<Token>, Vec<ParseDiagnostic>> {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = input.chars().peekable();

    macro_rules! push {
        ($kind:expr, $text:expr, $len:expr) => {
            tokens.push(Token {
                kind: $kind,
                text: $text,
                span: SourceSpan::new(line, col, $len),
            })
        };
    }

    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        text.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let len = text.len() as u32;
                push!(TokenKind::Ident, text, len);
                col += len;
            }
            c if c.is_ascii_digit() => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        text.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let len = text.len() as u32;
                push!(TokenKind::Integer, text, len);
                col += len;
            }
            '-' => {
                chars.next();
                match chars.peek() {
                    Some('>') => {
                        chars.next();
                        push!(TokenKind::Arrow, "->".to_string(), 2);
                        col += 2;
                    }
                    Some(d) if d.is_ascii_digit() => {
                        let mut text = String::from("-");
                        while let Some(&c) = chars.peek() {
                            if c.is_ascii_digit() {
                                text.push(c);
                                chars.next();
                            } else {
                                break;
                            }
                        }
                        let len = text.len() as u32;
                        push!(TokenKind::Integer, text, len);
                        col += len;
                    }
                    _ => {
                        diags.push(ParseDiagnostic::error(
                            "stray '-'; expected '->' or a number",
                            SourceSpan::new(line, col, 1),
                        ));
                        col += 1;
                    }
                }
            }
            _ => {
                let kind = match c {
                    '{' => Some(TokenKind::LBrace),
                    '}' => Some(TokenKind::RBrace),
                    '(' => Some(TokenKind::LParen),
                    ')' => Some(TokenKind::RParen),
                    '[' => Some(TokenKind::LBracket),
                    ']' => Some(TokenKind::RBracket),
                    ',' => Some(TokenKind::Comma),
                    ';' => Some(TokenKind::Semi),
                    ':' => Some(TokenKind::Colon),
                    '.' => Some(TokenKind::Dot),
                    '@' => Some(TokenKind::At),
                    '/' => Some(TokenKind::Slash),
                    '=' => Some(TokenKind::Eq),
                    '>' => Some(TokenKind::Gt),
                    '~' => Some(TokenKind::Tilde),
                    '&' => Some(TokenKind::Amp),
                    '|' => Some(TokenKind::Pipe),
                    _ => None,
                };
                chars.next();
                match kind {
                    Some(kind) => {
                        push!(kind, c.to_string(), 1);
                        col += 1;
                    }
                    None => {
                        diags.push(ParseDiagnostic::error(
                            format!("unexpected character {c:?}"),
                            SourceSpan::new(line, col, 1),
                        ));
                        col += 1;
                    }
                }
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        text: String::new(),
        span: SourceSpan::new(line, col, 1),
    });
    if diags.is_empty() {
        Ok(tokens)
    } else {
        Err(diags)
    }
}
