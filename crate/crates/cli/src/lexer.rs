//! Tokenizer for model files. Newlines are significant statement
//! separators; `#` starts a comment running to end of line.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eq,
    Comma,
    Caret,
    Plus,
    Minus,
    Star,
    Slash,
    Arrow,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Newline => write!(f, "end of line"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub pos: Pos,
    pub message: String,
}

pub fn lex(input: &str) -> Result<Vec<Token>, LexError> {
    let mut out: Vec<Token> = Vec::new();
    let mut chars = input.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! push {
        ($tok:expr) => {
            out.push(Token {
                tok: $tok,
                pos: Pos { line, col },
            })
        };
    }

    while let Some(&ch) = chars.peek() {
        match ch {
            '\n' => {
                // collapse runs of blank lines into one separator
                if !matches!(out.last().map(|t| &t.tok), Some(Tok::Newline) | None) {
                    push!(Tok::Newline);
                }
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '{' => {
                push!(Tok::LBrace);
                chars.next();
                col += 1;
            }
            '}' => {
                push!(Tok::RBrace);
                chars.next();
                col += 1;
            }
            '(' => {
                push!(Tok::LParen);
                chars.next();
                col += 1;
            }
            ')' => {
                push!(Tok::RParen);
                chars.next();
                col += 1;
            }
            '[' => {
                push!(Tok::LBracket);
                chars.next();
                col += 1;
            }
            ']' => {
                push!(Tok::RBracket);
                chars.next();
                col += 1;
            }
            '=' => {
                push!(Tok::Eq);
                chars.next();
                col += 1;
            }
            ',' => {
                push!(Tok::Comma);
                chars.next();
                col += 1;
            }
            '^' => {
                push!(Tok::Caret);
                chars.next();
                col += 1;
            }
            '+' => {
                push!(Tok::Plus);
                chars.next();
                col += 1;
            }
            '*' => {
                push!(Tok::Star);
                chars.next();
                col += 1;
            }
            '/' => {
                push!(Tok::Slash);
                chars.next();
                col += 1;
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    out.push(Token {
                        tok: Tok::Arrow,
                        pos: Pos { line, col: col - 1 },
                    });
                    col += 1;
                } else {
                    out.push(Token {
                        tok: Tok::Minus,
                        pos: Pos { line, col: col - 1 },
                    });
                }
            }
            c if c.is_ascii_digit() => {
                let start = Pos { line, col };
                let mut value = 0i64;
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((d as u8 - b'0') as i64))
                        .ok_or_else(|| LexError {
                            pos: start,
                            message: "integer literal too large".to_string(),
                        })?;
                    chars.next();
                    col += 1;
                }
                out.push(Token {
                    tok: Tok::Int(value),
                    pos: start,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = Pos { line, col };
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Ident(name),
                    pos: start,
                });
            }
            other => {
                return Err(LexError {
                    pos: Pos { line, col },
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    let pos = Pos { line, col };
    out.push(Token { tok: Tok::Eof, pos });
    Ok(out)
}
