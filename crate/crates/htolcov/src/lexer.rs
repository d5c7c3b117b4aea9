//! Token stream shared by the MiniImp and HTL parsers.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
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
    // keywords
    KwInt,
    KwBool,
    KwTrue,
    KwFalse,
    KwIf,
    KwElse,
    KwWhile,
    KwReturn,
    KwGuard,
    KwWith,
    // punctuation and operators
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Dot,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Bang,
    Lt,
    Gt,
    Le,
    Ge,
    EqEq,
    NotEq,
    AndAnd,
    OrOr,
    Equals, // = in hyperlabel definitions
    Assign,  // :=
    BindArrow, // <-
    SeqArrow,  // ->
    Implies,   // =>
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::KwInt => write!(f, "`int`"),
            Tok::KwBool => write!(f, "`bool`"),
            Tok::KwTrue => write!(f, "`true`"),
            Tok::KwFalse => write!(f, "`false`"),
            Tok::KwIf => write!(f, "`if`"),
            Tok::KwElse => write!(f, "`else`"),
            Tok::KwWhile => write!(f, "`while`"),
            Tok::KwReturn => write!(f, "`return`"),
            Tok::KwGuard => write!(f, "`guard`"),
            Tok::KwWith => write!(f, "`with`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Percent => write!(f, "`%`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Lt => write!(f, "`<`"),
            Tok::Gt => write!(f, "`>`"),
            Tok::Le => write!(f, "`<=`"),
            Tok::Ge => write!(f, "`>=`"),
            Tok::EqEq => write!(f, "`==`"),
            Tok::NotEq => write!(f, "`!=`"),
            Tok::AndAnd => write!(f, "`&&`"),
            Tok::OrOr => write!(f, "`||`"),
            Tok::Equals => write!(f, "`=`"),
            Tok::Assign => write!(f, "`:=`"),
            Tok::BindArrow => write!(f, "`<-`"),
            Tok::SeqArrow => write!(f, "`->`"),
            Tok::Implies => write!(f, "`=>`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, Error)]
#[error("{pos}: {msg}")]
pub struct LexError {
    pub pos: Pos,
    pub msg: String,
}

pub struct Lexer {
    toks: Vec<(Tok, Pos)>,
    idx: usize,
}

impl Lexer {
    /// Tokenises `src`. `//` line comments and `#` line comments are both
    /// skipped, so MiniImp sources and suite/HTL files share the lexer.
    pub fn new(src: &str) -> Result<Self, LexError> {
        let mut toks = Vec::new();
        let mut line: u32 = 1;
        let mut col: u32 = 1;
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let pos = Pos { line, col };
            let c = chars[i];
            let mut adv = |i: &mut usize, n: usize| {
                *i += n;
                col += n as u32;
            };
            match c {
                '\n' => {
                    i += 1;
                    line += 1;
                    col = 1;
                }
                c if c.is_whitespace() => adv(&mut i, 1),
                '/' if chars.get(i + 1) == Some(&'/') => {
                    while i < chars.len() && chars[i] != '\n' {
                        i += 1;
                    }
                }
                '#' => {
                    while i < chars.len() && chars[i] != '\n' {
                        i += 1;
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    let mut n = 0;
                    while i + n < chars.len()
                        && (chars[i + n].is_ascii_alphanumeric() || chars[i + n] == '_')
                    {
                        n += 1;
                    }
                    // primed metavariable names: c1', lo''
                    while i + n < chars.len() && chars[i + n] == '\'' {
                        n += 1;
                    }
                    let word: String = chars[start..start + n].iter().collect();
                    adv(&mut i, n);
                    let tok = match word.as_str() {
                        "int" => Tok::KwInt,
                        "bool" => Tok::KwBool,
                        "true" => Tok::KwTrue,
                        "false" => Tok::KwFalse,
                        "if" => Tok::KwIf,
                        "else" => Tok::KwElse,
                        "while" => Tok::KwWhile,
                        "return" => Tok::KwReturn,
                        "guard" => Tok::KwGuard,
                        "with" => Tok::KwWith,
                        _ => Tok::Ident(word),
                    };
                    toks.push((tok, pos));
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    let mut n = 0;
                    while i + n < chars.len() && chars[i + n].is_ascii_digit() {
                        n += 1;
                    }
                    let text: String = chars[start..start + n].iter().collect();
                    adv(&mut i, n);
                    let value = text.parse::<i64>().map_err(|_| LexError {
                        pos,
                        msg: format!("integer literal `{text}` out of range"),
                    })?;
                    toks.push((Tok::Int(value), pos));
                }
                _ => {
                    let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
                    let tok2 = match two.as_str() {
                        "<=" => Some(Tok::Le),
                        ">=" => Some(Tok::Ge),
                        "==" => Some(Tok::EqEq),
                        "!=" => Some(Tok::NotEq),
                        "&&" => Some(Tok::AndAnd),
                        "||" => Some(Tok::OrOr),
                        ":=" => Some(Tok::Assign),
                        "<-" => Some(Tok::BindArrow),
                        "->" => Some(Tok::SeqArrow),
                        "=>" => Some(Tok::Implies),
                        _ => None,
                    };
                    if let Some(tok) = tok2 {
                        adv(&mut i, 2);
                        toks.push((tok, pos));
                        continue;
                    }
                    let tok1 = match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '[' => Tok::LBracket,
                        ']' => Tok::RBracket,
                        ';' => Tok::Semi,
                        ',' => Tok::Comma,
                        '.' => Tok::Dot,
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '/' => Tok::Slash,
                        '%' => Tok::Percent,
                        '!' => Tok::Bang,
                        '<' => Tok::Lt,
                        '>' => Tok::Gt,
                        '=' => Tok::Equals,
                        _ => {
                            return Err(LexError {
                                pos,
                                msg: format!("unexpected character `{c}`"),
                            })
                        }
                    };
                    adv(&mut i, 1);
                    toks.push((tok1, pos));
                }
            }
        }
        toks.push((Tok::Eof, Pos { line, col }));
        Ok(Lexer { toks, idx: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    pub fn peek2(&self) -> &Tok {
        &self.toks[(self.idx + 1).min(self.toks.len() - 1)].0
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.idx].1
    }

    pub fn next(&mut self) -> Tok {
        let t = self.toks[self.idx].0.clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    pub fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == want {
            self.next();
            true
        } else {
            false
        }
    }
}
