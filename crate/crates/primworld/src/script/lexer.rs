//! Hand-rolled lexer producing a flat token stream with source positions.

use super::ast::{Diagnostic, DiagnosticKind, Pos};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Float(f64),
    Str(String),
    KwDefault,
    KwState,
    KwIf,
    KwElse,
    KwWhile,
    KwReturn,
    KwInteger,
    KwFloat,
    KwVector,
    KwRotation,
    KwString,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Dot,
    Assign,
    EqEq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Bang,
    AndAnd,
    OrOr,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Int(v) => format!("integer literal `{v}`"),
            Tok::Float(v) => format!("float literal `{v}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::KwDefault => "`default`".to_string(),
            Tok::KwState => "`state`".to_string(),
            Tok::KwIf => "`if`".to_string(),
            Tok::KwElse => "`else`".to_string(),
            Tok::KwWhile => "`while`".to_string(),
            Tok::KwReturn => "`return`".to_string(),
            Tok::KwInteger => "`integer`".to_string(),
            Tok::KwFloat => "`float`".to_string(),
            Tok::KwVector => "`vector`".to_string(),
            Tok::KwRotation => "`rotation`".to_string(),
            Tok::KwString => "`string`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::LBrace => "`{`".to_string(),
            Tok::RBrace => "`}`".to_string(),
            Tok::Semi => "`;`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Dot => "`.`".to_string(),
            Tok::Assign => "`=`".to_string(),
            Tok::EqEq => "`==`".to_string(),
            Tok::Ne => "`!=`".to_string(),
            Tok::Lt => "`<`".to_string(),
            Tok::Gt => "`>`".to_string(),
            Tok::Le => "`<=`".to_string(),
            Tok::Ge => "`>=`".to_string(),
            Tok::Plus => "`+`".to_string(),
            Tok::Minus => "`-`".to_string(),
            Tok::Star => "`*`".to_string(),
            Tok::Slash => "`/`".to_string(),
            Tok::Percent => "`%`".to_string(),
            Tok::Bang => "`!`".to_string(),
            Tok::AndAnd => "`&&`".to_string(),
            Tok::OrOr => "`||`".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

struct Lexer {
    chars: Vec<char>,
    idx: usize,
    line: u32,
    col: u32,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.idx + 1).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn error(&self, pos: Pos, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(DiagnosticKind::SyntaxError, pos, message)
    }
}

pub fn lex(source: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut lx = Lexer { chars: source.chars().collect(), idx: 0, line: 1, col: 1 };
    let mut tokens = Vec::new();

    while let Some(c) = lx.peek() {
        let pos = lx.pos();
        // Whitespace.
        if c.is_whitespace() {
            lx.bump();
            continue;
        }
        // Comments: // to end of line, /* ... */ possibly multi-line.
        if c == '/' && lx.peek2() == Some('/') {
            while let Some(c) = lx.peek() {
                if c == '\n' {
                    break;
                }
                lx.bump();
            }
            continue;
        }
        if c == '/' && lx.peek2() == Some('*') {
            lx.bump();
            lx.bump();
            loop {
                match lx.peek() {
                    None => return Err(lx.error(pos, "unterminated block comment")),
                    Some('*') if lx.peek2() == Some('/') => {
                        lx.bump();
                        lx.bump();
                        break;
                    }
                    Some(_) => {
                        lx.bump();
                    }
                }
            }
            continue;
        }
        // Identifiers and keywords.
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(c) = lx.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    name.push(c);
                    lx.bump();
                } else {
                    break;
                }
            }
            let tok = match name.as_str() {
                "default" => Tok::KwDefault,
                "state" => Tok::KwState,
                "if" => Tok::KwIf,
                "else" => Tok::KwElse,
                "while" => Tok::KwWhile,
                "return" => Tok::KwReturn,
                "integer" => Tok::KwInteger,
                "float" => Tok::KwFloat,
                "vector" => Tok::KwVector,
                "rotation" => Tok::KwRotation,
                "string" => Tok::KwString,
                _ => Tok::Ident(name),
            };
            tokens.push(Token { tok, pos });
            continue;
        }
        // Numbers. A leading dot (`.5`) is accepted; a trailing dot (`2.`) is
        // accepted as well, matching common C-family lexers.
        if c.is_ascii_digit() || (c == '.' && lx.peek2().is_some_and(|d| d.is_ascii_digit())) {
            let mut text = String::new();
            let mut is_float = false;
            while let Some(c) = lx.peek() {
                if c.is_ascii_digit() {
                    text.push(c);
                    lx.bump();
                } else {
                    break;
                }
            }
            if lx.peek() == Some('.') {
                is_float = true;
                text.push('.');
                lx.bump();
                while let Some(c) = lx.peek() {
                    if c.is_ascii_digit() {
                        text.push(c);
                        lx.bump();
                    } else {
                        break;
                    }
                }
            }
            if matches!(lx.peek(), Some('e') | Some('E')) {
                // Only an exponent if followed by digits (with optional sign);
                // otherwise it's the start of an identifier like `x`.
                let sign_ok = matches!(lx.peek2(), Some('+') | Some('-'))
                    && lx.chars.get(lx.idx + 2).is_some_and(|d| d.is_ascii_digit());
                let digit_ok = lx.peek2().is_some_and(|d| d.is_ascii_digit());
                if sign_ok || digit_ok {
                    is_float = true;
                    text.push('e');
                    lx.bump();
                    if matches!(lx.peek(), Some('+') | Some('-')) {
                        text.push(lx.peek().unwrap());
                        lx.bump();
                    }
                    while let Some(c) = lx.peek() {
                        if c.is_ascii_digit() {
                            text.push(c);
                            lx.bump();
                        } else {
                            break;
                        }
                    }
                }
            }
            if is_float {
                let value: f64 = text
                    .parse()
                    .map_err(|_| lx.error(pos, format!("invalid float literal `{text}`")))?;
                tokens.push(Token { tok: Tok::Float(value), pos });
            } else {
                let value: i64 = text
                    .parse()
                    .map_err(|_| lx.error(pos, format!("integer literal `{text}` out of range")))?;
                tokens.push(Token { tok: Tok::Int(value), pos });
            }
            continue;
        }
        // String literals with a small escape set.
        if c == '"' {
            lx.bump();
            let mut value = String::new();
            loop {
                match lx.bump() {
                    None => return Err(lx.error(pos, "unterminated string literal")),
                    Some('"') => break,
                    Some('\\') => match lx.bump() {
                        Some('n') => value.push('\n'),
                        Some('t') => value.push('\t'),
                        Some('"') => value.push('"'),
                        Some('\\') => value.push('\\'),
                        Some(other) => {
                            return Err(lx.error(pos, format!("unknown escape `\\{other}`")))
                        }
                        None => return Err(lx.error(pos, "unterminated string literal")),
                    },
                    Some(other) => value.push(other),
                }
            }
            tokens.push(Token { tok: Tok::Str(value), pos });
            continue;
        }
        // Operators and punctuation.
        let tok = match c {
            '(' => {
                lx.bump();
                Tok::LParen
            }
            ')' => {
                lx.bump();
                Tok::RParen
            }
            '{' => {
                lx.bump();
                Tok::LBrace
            }
            '}' => {
                lx.bump();
                Tok::RBrace
            }
            ';' => {
                lx.bump();
                Tok::Semi
            }
            ',' => {
                lx.bump();
                Tok::Comma
            }
            '.' => {
                lx.bump();
                Tok::Dot
            }
            '+' => {
                lx.bump();
                Tok::Plus
            }
            '-' => {
                lx.bump();
                Tok::Minus
            }
            '*' => {
                lx.bump();
                Tok::Star
            }
            '/' => {
                lx.bump();
                Tok::Slash
            }
            '%' => {
                lx.bump();
                Tok::Percent
            }
            '=' => {
                lx.bump();
                if lx.peek() == Some('=') {
                    lx.bump();
                    Tok::EqEq
                } else {
                    Tok::Assign
                }
            }
            '!' => {
                lx.bump();
                if lx.peek() == Some('=') {
                    lx.bump();
                    Tok::Ne
                } else {
                    Tok::Bang
                }
            }
            '<' => {
                lx.bump();
                if lx.peek() == Some('=') {
                    lx.bump();
                    Tok::Le
                } else {
                    Tok::Lt
                }
            }
            '>' => {
                lx.bump();
                if lx.peek() == Some('=') {
                    lx.bump();
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            '&' => {
                lx.bump();
                if lx.peek() == Some('&') {
                    lx.bump();
                    Tok::AndAnd
                } else {
                    return Err(lx.error(pos, "expected `&&`"));
                }
            }
            '|' => {
                lx.bump();
                if lx.peek() == Some('|') {
                    lx.bump();
                    Tok::OrOr
                } else {
                    return Err(lx.error(pos, "expected `||`"));
                }
            }
            other => return Err(lx.error(pos, format!("unexpected character `{other}`"))),
        };
        tokens.push(Token { tok, pos });
    }

    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_mixed_tokens() {
        let toks = lex("integer x = 42; float y = 1.5e3; v.x").unwrap();
        let kinds: Vec<&Tok> = toks.iter().map(|t| &t.tok).collect();
        assert_eq!(kinds[0], &Tok::KwInteger);
        assert_eq!(kinds[1], &Tok::Ident("x".into()));
        assert_eq!(kinds[2], &Tok::Assign);
        assert_eq!(kinds[3], &Tok::Int(42));
        assert_eq!(kinds[8], &Tok::Float(1500.0));
        assert_eq!(kinds[10], &Tok::Ident("v".into()));
        assert_eq!(kinds[11], &Tok::Dot);
        assert_eq!(kinds[12], &Tok::Ident("x".into()));
    }

    #[test]
    fn tracks_positions() {
        let toks = lex("a\n  b").unwrap();
        assert_eq!((toks[0].pos.line, toks[0].pos.col), (1, 1));
        assert_eq!((toks[1].pos.line, toks[1].pos.col), (2, 3));
    }

    #[test]
    fn comments_are_skipped() {
        let toks = lex("a // line\n/* block\nstill */ b").unwrap();
        assert_eq!(toks.len(), 2);
        assert_eq!(toks[1].tok, Tok::Ident("b".into()));
        assert_eq!(toks[1].pos.line, 3);
    }

    #[test]
    fn string_escapes() {
        let toks = lex(r#""a\nb\"c""#).unwrap();
        assert_eq!(toks[0].tok, Tok::Str("a\nb\"c".into()));
    }

    #[test]
    fn rejects_stray_character() {
        let err = lex("a # b").unwrap_err();
        assert!(err.message.contains('#'));
        assert_eq!(err.pos.col, 3);
    }

    #[test]
    fn big_integer_overflows() {
        assert!(lex("99999999999999999999").is_err());
    }
}
