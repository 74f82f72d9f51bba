use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, serde::Serialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// One identifier segment, primes included. Dots are separate tokens.
    Ident(String),
    Int(u64),
    Dot,
    Bang,
    Question,
    Lt,
    Gt,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eq,
    Comma,
    At,
    Plus,
    Bar,
    Semi,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::Dot => ".",
            Tok::Bang => "!",
            Tok::Question => "?",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Eq => "=",
            Tok::Comma => ",",
            Tok::At => "@",
            Tok::Plus => "+",
            Tok::Bar => "|",
            Tok::Semi => ";",
            Tok::Ident(_) => "identifier",
            Tok::Int(_) => "number",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexError {
    pub span: Span,
    pub found: char,
}

pub fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, LexError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = src.chars().peekable();

    while let Some(&c) = chars.peek() {
        let span = Span { line, column };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
                continue;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                column += 1;
                continue;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    column += 1;
                }
                continue;
            }
            _ => {}
        }

        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            while chars.peek() == Some(&'\'') {
                s.push('\'');
                chars.next();
                column += 1;
            }
            out.push((Tok::Ident(s), span));
            continue;
        }
        if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while let Some(&c) = chars.peek() {
                if let Some(d) = c.to_digit(10) {
                    v = v.saturating_mul(10).saturating_add(d as u64);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            out.push((Tok::Int(v), span));
            continue;
        }
        let tok = match c {
            '.' => Tok::Dot,
            '!' => Tok::Bang,
            '?' => Tok::Question,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '=' => Tok::Eq,
            ',' => Tok::Comma,
            '@' => Tok::At,
            '+' => Tok::Plus,
            '|' => Tok::Bar,
            ';' => Tok::Semi,
            other => return Err(LexError { span, found: other }),
        };
        chars.next();
        column += 1;
        out.push((tok, span));
    }
    out.push((Tok::Eof, Span { line, column }));
    Ok(out)
}
