use thiserror::Error;

use super::{ConstVal, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Int(i64),
    Ident(String),
    /// Supercombinator name, `$X`.
    Global(String),
    /// Opaque constant, `@name`.
    Opaque(String),
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn bump(n: usize, i: &mut usize, col: &mut usize) {
    *i += n;
    *col += n;
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError { line, col, message };

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                bump(1, &mut i, &mut col);
                continue;
            }
            '-' if chars.get(i + 1) == Some(&'-') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let tok = match c {
            '\\' | 'λ' => {
                bump(1, &mut i, &mut col);
                Tok::Lambda
            }
            '.' => {
                bump(1, &mut i, &mut col);
                Tok::Dot
            }
            '(' => {
                bump(1, &mut i, &mut col);
                Tok::LParen
            }
            ')' => {
                bump(1, &mut i, &mut col);
                Tok::RParen
            }
            '[' => {
                bump(1, &mut i, &mut col);
                Tok::LBracket
            }
            ']' => {
                bump(1, &mut i, &mut col);
                Tok::RBracket
            }
            ',' => {
                bump(1, &mut i, &mut col);
                Tok::Comma
            }
            '+' => {
                bump(1, &mut i, &mut col);
                Tok::Plus
            }
            '-' | '0'..='9' => {
                let start = i;
                if c == '-' {
                    if !chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                        return Err(err(tl, tc, "expected digit after '-'".into()));
                    }
                    bump(1, &mut i, &mut col);
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    bump(1, &mut i, &mut col);
                }
                let text: String = chars[start..i].iter().collect();
                let n = text
                    .parse::<i64>()
                    .map_err(|_| err(tl, tc, format!("integer literal out of range: {text}")))?;
                Tok::Int(n)
            }
            '$' | '@' => {
                bump(1, &mut i, &mut col);
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    bump(1, &mut i, &mut col);
                }
                if start == i {
                    return Err(err(tl, tc, format!("expected name after '{c}'")));
                }
                let name: String = chars[start..i].iter().collect();
                if c == '$' {
                    Tok::Global(format!("${name}"))
                } else {
                    Tok::Opaque(name)
                }
            }
            c if is_ident_start(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    bump(1, &mut i, &mut col);
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            other => return Err(err(tl, tc, format!("unexpected character '{other}'"))),
        };
        out.push(Spanned { tok, line: tl, col: tc });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError { line: t.line, col: t.col, message: message.into() }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek().tok == want {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {what}, found {}", describe(&self.peek().tok))))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if self.peek().tok == Tok::Lambda {
            self.next();
            let mut binders = Vec::new();
            while let Tok::Ident(name) = &self.peek().tok {
                if keyword(name).is_some() {
                    return Err(self.error_here(format!("'{name}' is reserved")));
                }
                binders.push(name.clone());
                self.next();
            }
            if binders.is_empty() {
                return Err(self.error_here("expected binder after '\\'"));
            }
            self.expect(Tok::Dot, "'.'")?;
            let body = self.term()?;
            return Ok(Term::lams(binders, body));
        }
        let mut head = self.atom()?;
        loop {
            if self.peek().tok == Tok::Lambda {
                // trailing abstraction extends to the right: `f \x. x`
                let arg = self.term()?;
                return Ok(Term::app(head, arg));
            }
            if !starts_atom(&self.peek().tok) {
                return Ok(head);
            }
            let arg = self.atom()?;
            head = Term::app(head, arg);
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Ident(name) => Ok(match keyword(&name) {
                Some(c) => Term::Const(c),
                None => Term::Var(name),
            }),
            Tok::Global(name) => Ok(Term::Var(name)),
            Tok::Opaque(name) => Ok(Term::opaque(name)),
            Tok::Int(n) => Ok(Term::int(n)),
            Tok::Plus => Ok(Term::Const(ConstVal::AddPair)),
            Tok::LParen => {
                let inner = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::LBracket => {
                let left = self.term()?;
                self.expect(Tok::Comma, "','")?;
                let right = self.term()?;
                self.expect(Tok::RBracket, "']'")?;
                Ok(Term::pair(left, right))
            }
            other => Err(ParseError {
                line: t.line,
                col: t.col,
                message: format!("expected a term, found {}", describe(&other)),
            }),
        }
    }
}

fn keyword(name: &str) -> Option<ConstVal> {
    match name {
        "add" => Some(ConstVal::Add),
        "sub" => Some(ConstVal::Sub),
        "fix" => Some(ConstVal::Fix),
        _ => None,
    }
}

fn starts_atom(t: &Tok) -> bool {
    matches!(
        t,
        Tok::Ident(_) | Tok::Global(_) | Tok::Opaque(_) | Tok::Int(_) | Tok::Plus | Tok::LParen | Tok::LBracket
    )
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Lambda => "'\\'".into(),
        Tok::Dot => "'.'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::LBracket => "'['".into(),
        Tok::RBracket => "']'".into(),
        Tok::Comma => "','".into(),
        Tok::Plus => "'+'".into(),
        Tok::Int(n) => format!("integer {n}"),
        Tok::Ident(s) | Tok::Global(s) => format!("identifier '{s}'"),
        Tok::Opaque(s) => format!("constant '@{s}'"),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses one term. Application is left-associative and an abstraction
/// body extends as far right as possible.
pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let t = p.term()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error_here(format!("unexpected {}", describe(&p.peek().tok))));
    }
    Ok(t)
}
