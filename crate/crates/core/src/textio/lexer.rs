use std::fmt;

use super::{ParseError, SourceText};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase-initial identifier.
    Ident(String),
    /// Uppercase-initial variable.
    Var(String),
    /// `_`
    Anon,
    Int(String),
    Quoted(String),
    /// `#name`, e.g. `#count` or a reserved null lexeme.
    Hash(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Slash,
    Colon,
    If,
    Arrow,
    Question,
    Pipe,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Anon => f.write_str("`_`"),
            Tok::Quoted(s) => write!(f, "'{s}'"),
            Tok::Hash(s) => write!(f, "`#{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::If => f.write_str("`:-`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Question => f.write_str("`?`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Ne => f.write_str("`!=`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Ge => f.write_str("`>=`"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(src: &SourceText) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.content.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| ParseError::new(&src.origin, line, col, msg);

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        let next = chars.get(i + 1).copied();
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '/' => Some(Tok::Slash),
            '?' => Some(Tok::Question),
            '|' => Some(Tok::Pipe),
            _ => None,
        };
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                advance(1, &mut i);
            }
            continue;
        }
        let (tok, len) = if let Some(t) = simple {
            (t, 1)
        } else {
            match (c, next) {
                (':', Some('-')) => (Tok::If, 2),
                (':', _) => (Tok::Colon, 1),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('!', Some('=')) => (Tok::Ne, 2),
                ('<', Some('>')) => (Tok::Ne, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('<', _) => (Tok::Lt, 1),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('>', _) => (Tok::Gt, 1),
                ('=', Some('=')) => (Tok::Eq, 2),
                ('=', _) => (Tok::Eq, 1),
                ('\'', _) | ('"', _) => {
                    let quote = c;
                    let mut s = String::new();
                    let mut j = i + 1;
                    loop {
                        match chars.get(j) {
                            None | Some('\n') => return Err(err(start_line, start_col, "unterminated string".into())),
                            Some('\\') => {
                                match chars.get(j + 1) {
                                    Some(e) if *e != '\n' => s.push(*e),
                                    _ => return Err(err(start_line, start_col, "unterminated string".into())),
                                }
                                j += 2;
                            }
                            Some(ch) if *ch == quote => break,
                            Some(ch) => {
                                s.push(*ch);
                                j += 1;
                            }
                        }
                    }
                    (Tok::Quoted(s), j + 1 - i)
                }
                ('#', _) => {
                    let mut j = i + 1;
                    while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    if j == i + 1 {
                        return Err(err(start_line, start_col, "expected a name after `#`".into()));
                    }
                    (Tok::Hash(chars[i + 1..j].iter().collect()), j - i)
                }
                _ if c.is_ascii_digit() || (c == '-' && next.is_some_and(|n| n.is_ascii_digit())) => {
                    let mut j = i + 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    (Tok::Int(chars[i..j].iter().collect()), j - i)
                }
                _ if c.is_alphabetic() || c == '_' => {
                    let mut j = i + 1;
                    while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    let word: String = chars[i..j].iter().collect();
                    let tok = if word == "_" {
                        Tok::Anon
                    } else if c.is_uppercase() || c == '_' {
                        Tok::Var(word)
                    } else {
                        Tok::Ident(word)
                    };
                    (tok, j - i)
                }
                _ => return Err(err(start_line, start_col, format!("unexpected character {c:?}"))),
            }
        };
        advance(len, &mut i);
        out.push(Token { tok, line: start_line, col: start_col });
    }
    Ok(out)
}
