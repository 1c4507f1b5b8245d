//! Line tokenizer shared by the knowledge-base, sentence, and grammar
//! file formats. `#` starts a comment; double-quoted strings carry
//! arbitrary text (multi-word lemmas, display text).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Bare word: letters, digits, `-`, `_`, `.`, `@`.
    Word(String),
    /// Double-quoted string, unescaped.
    Quoted(String),
    LParen,
    RParen,
    Comma,
    Equals,
    Lt,
    Gt,
    Colon,
    Plus,
    Arrow,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{}`", w),
            Tok::Quoted(q) => format!("\"{}\"", q),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Arrow => "`->`".into(),
        }
    }
}

fn word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '-' | '_' | '.' | '@')
}

/// One source line tokenized with 1-based column positions.
#[derive(Debug, Clone)]
pub(crate) struct Line {
    pub number: usize,
    pub toks: Vec<(Tok, usize)>,
}

pub(crate) fn tokenize(text: &str, file: &str) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let mut toks = Vec::new();
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let col = i + 1;
            let c = chars[i];
            match c {
                '#' => break,
                c if c.is_whitespace() => {
                    i += 1;
                }
                '(' => {
                    toks.push((Tok::LParen, col));
                    i += 1;
                }
                ')' => {
                    toks.push((Tok::RParen, col));
                    i += 1;
                }
                ',' => {
                    toks.push((Tok::Comma, col));
                    i += 1;
                }
                '=' => {
                    toks.push((Tok::Equals, col));
                    i += 1;
                }
                '<' => {
                    toks.push((Tok::Lt, col));
                    i += 1;
                }
                '>' => {
                    toks.push((Tok::Gt, col));
                    i += 1;
                }
                ':' => {
                    toks.push((Tok::Colon, col));
                    i += 1;
                }
                '+' => {
                    toks.push((Tok::Plus, col));
                    i += 1;
                }
                '-' if chars.get(i + 1) == Some(&'>') => {
                    toks.push((Tok::Arrow, col));
                    i += 2;
                }
                '"' => {
                    let mut s = String::new();
                    i += 1;
                    let mut closed = false;
                    while i < chars.len() {
                        match chars[i] {
                            '\\' if i + 1 < chars.len() => {
                                s.push(chars[i + 1]);
                                i += 2;
                            }
                            '"' => {
                                i += 1;
                                closed = true;
                                break;
                            }
                            ch => {
                                s.push(ch);
                                i += 1;
                            }
                        }
                    }
                    if !closed {
                        return Err(Error::Syntax {
                            file: file.to_string(),
                            line: number,
                            col,
                            msg: "unterminated string".to_string(),
                        });
                    }
                    toks.push((Tok::Quoted(s), col));
                }
                c if word_char(c) => {
                    let start = i;
                    while i < chars.len() && word_char(chars[i]) {
                        // A `->` inside a word boundary ends it.
                        if chars[i] == '-' && chars.get(i + 1) == Some(&'>') {
                            break;
                        }
                        i += 1;
                    }
                    let w: String = chars[start..i].iter().collect();
                    toks.push((Tok::Word(w), col));
                }
                other => {
                    return Err(Error::Syntax {
                        file: file.to_string(),
                        line: number,
                        col,
                        msg: format!("unexpected character `{}`", other),
                    });
                }
            }
        }
        if !toks.is_empty() {
            out.push(Line { number, toks });
        }
    }
    Ok(out)
}
