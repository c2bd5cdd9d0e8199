//! Recursive-descent parser.
//!
//! The only delicate corner is `<`, which opens both comparisons and
//! vector/rotation literals. Literals are recognized at primary position and
//! their components are parsed at additive precedence, so the closing `>` is
//! never swallowed as a comparison operator.

use super::ast::*;
use super::lexer::{Tok, Token};

pub fn parse_tokens(tokens: Vec<Token>) -> Result<Script, Diagnostic> {
    let mut p = Parser { tokens, idx: 0 };
    p.script()
}

struct Parser {
    tokens: Vec<Token>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.idx).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.tokens.get(self.idx + 1).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.tokens
            .get(self.idx)
            .map(|t| t.pos)
            .or_else(|| self.tokens.last().map(|t| t.pos))
            .unwrap_or_default()
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(DiagnosticKind::SyntaxError, self.pos(), message)
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, Diagnostic> {
        match self.peek() {
            Some(t) if *t == tok => Ok(self.bump().unwrap().pos),
            Some(t) => Err(self.error(format!("expected {}, found {}", tok.describe(), t.describe()))),
            None => Err(self.error(format!("expected {}, found end of input", tok.describe()))),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Pos), Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let t = self.bump().unwrap();
                match t.tok {
                    Tok::Ident(name) => Ok((name, t.pos)),
                    _ => unreachable!(),
                }
            }
            Some(t) => Err(self.error(format!("expected identifier, found {}", t.describe()))),
            None => Err(self.error("expected identifier, found end of input")),
        }
    }

    fn type_keyword(&self) -> Option<Type> {
        match self.peek()? {
            Tok::KwInteger => Some(Type::Integer),
            Tok::KwFloat => Some(Type::Float),
            Tok::KwVector => Some(Type::Vector),
            Tok::KwRotation => Some(Type::Rotation),
            Tok::KwString => Some(Type::String),
            _ => None,
        }
    }

    // -- top level ----------------------------------------------------------

    fn script(&mut self) -> Result<Script, Diagnostic> {
        let mut script = Script::default();
        while let Some(tok) = self.peek() {
            match tok {
                Tok::KwDefault => {
                    let pos = self.bump().unwrap().pos;
                    let handlers = self.state_body()?;
                    script.states.push(StateDef { name: "default".into(), handlers, pos });
                }
                Tok::KwState => {
                    let pos = self.bump().unwrap().pos;
                    let (name, _) = self.expect_ident()?;
                    let handlers = self.state_body()?;
                    script.states.push(StateDef { name, handlers, pos });
                }
                Tok::Ident(_) => {
                    // Void function: name(params) { ... }
                    let (name, pos) = self.expect_ident()?;
                    self.expect(Tok::LParen)?;
                    let params = self.params()?;
                    let body = self.block()?;
                    script.functions.push(Function { name, ret: None, params, body, pos });
                }
                _ if self.type_keyword().is_some() => {
                    let ty = self.type_keyword().unwrap();
                    let pos = self.bump().unwrap().pos;
                    let (name, _) = self.expect_ident()?;
                    if self.peek() == Some(&Tok::LParen) {
                        self.bump();
                        let params = self.params()?;
                        let body = self.block()?;
                        script.functions.push(Function { name, ret: Some(ty), params, body, pos });
                    } else {
                        let init = if self.peek() == Some(&Tok::Assign) {
                            self.bump();
                            Some(self.expr()?)
                        } else {
                            None
                        };
                        self.expect(Tok::Semi)?;
                        script.globals.push(GlobalVar { ty, name, init, pos });
                    }
                }
                other => {
                    return Err(self.error(format!(
                        "expected declaration, function, or state, found {}",
                        other.describe()
                    )))
                }
            }
        }
        Ok(script)
    }

    /// Parses `(...)` parameter lists; the opening paren is already consumed.
    fn params(&mut self) -> Result<Vec<Param>, Diagnostic> {
        let mut params = Vec::new();
        if self.peek() == Some(&Tok::RParen) {
            self.bump();
            return Ok(params);
        }
        loop {
            let ty = self
                .type_keyword()
                .ok_or_else(|| self.error("expected parameter type"))?;
            let pos = self.bump().unwrap().pos;
            let (name, _) = self.expect_ident()?;
            params.push(Param { ty, name, pos });
            match self.peek() {
                Some(Tok::Comma) => {
                    self.bump();
                }
                Some(Tok::RParen) => {
                    self.bump();
                    break;
                }
                _ => return Err(self.error("expected `,` or `)` in parameter list")),
            }
        }
        Ok(params)
    }

    fn state_body(&mut self) -> Result<Vec<Handler>, Diagnostic> {
        self.expect(Tok::LBrace)?;
        let mut handlers = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek().is_none() {
                return Err(self.error("unclosed state body"));
            }
            let (name, pos) = self.expect_ident()?;
            let event = EventKind::from_name(&name)
                .ok_or_else(|| Diagnostic::new(
                    DiagnosticKind::SyntaxError,
                    pos,
                    format!("unknown event `{name}`"),
                ))?;
            self.expect(Tok::LParen)?;
            let params = self.params()?;
            let body = self.block()?;
            handlers.push(Handler { event, params, body, pos });
        }
        self.bump();
        Ok(handlers)
    }

    // -- statements ---------------------------------------------------------

    fn block(&mut self) -> Result<Block, Diagnostic> {
        let pos = self.expect(Tok::LBrace)?;
        let mut stmts = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek().is_none() {
                return Err(self.error("unclosed block"));
            }
            stmts.push(self.stmt()?);
        }
        self.bump();
        Ok(Block { stmts, pos })
    }

    fn stmt(&mut self) -> Result<Stmt, Diagnostic> {
        if let Some(ty) = self.type_keyword() {
            let pos = self.bump().unwrap().pos;
            let (name, _) = self.expect_ident()?;
            let init = if self.peek() == Some(&Tok::Assign) {
                self.bump();
                Some(self.expr()?)
            } else {
                None
            };
            self.expect(Tok::Semi)?;
            return Ok(Stmt::Decl { ty, name, init, pos });
        }
        match self.peek() {
            Some(Tok::LBrace) => Ok(Stmt::Block(self.block()?)),
            Some(Tok::KwIf) => {
                let pos = self.bump().unwrap().pos;
                self.expect(Tok::LParen)?;
                let cond = self.expr()?;
                self.expect(Tok::RParen)?;
                let then_branch = Box::new(self.stmt()?);
                let else_branch = if self.peek() == Some(&Tok::KwElse) {
                    self.bump();
                    Some(Box::new(self.stmt()?))
                } else {
                    None
                };
                Ok(Stmt::If { cond, then_branch, else_branch, pos })
            }
            Some(Tok::KwWhile) => {
                let pos = self.bump().unwrap().pos;
                self.expect(Tok::LParen)?;
                let cond = self.expr()?;
                self.expect(Tok::RParen)?;
                let body = Box::new(self.stmt()?);
                Ok(Stmt::While { cond, body, pos })
            }
            Some(Tok::KwReturn) => {
                let pos = self.bump().unwrap().pos;
                let value = if self.peek() == Some(&Tok::Semi) {
                    None
                } else {
                    Some(self.expr()?)
                };
                self.expect(Tok::Semi)?;
                Ok(Stmt::Return { value, pos })
            }
            Some(Tok::KwState) => {
                let pos = self.bump().unwrap().pos;
                let target = match self.peek() {
                    Some(Tok::KwDefault) => {
                        self.bump();
                        "default".to_string()
                    }
                    _ => self.expect_ident()?.0,
                };
                self.expect(Tok::Semi)?;
                Ok(Stmt::StateChange { target, pos })
            }
            Some(Tok::Ident(_)) => {
                // Assignment (`x = e;`, `v.x = e;`) or an expression statement.
                match self.peek2() {
                    Some(Tok::Assign) => {
                        let (name, pos) = self.expect_ident()?;
                        self.bump(); // =
                        let value = self.expr()?;
                        self.expect(Tok::Semi)?;
                        Ok(Stmt::Assign { name, member: None, value, pos })
                    }
                    Some(Tok::Dot) => {
                        // Look ahead past `.member` for `=`; otherwise it's an
                        // expression statement beginning with a member read.
                        let is_assign = matches!(
                            (self.tokens.get(self.idx + 2).map(|t| &t.tok),
                             self.tokens.get(self.idx + 3).map(|t| &t.tok)),
                            (Some(Tok::Ident(_)), Some(Tok::Assign))
                        );
                        if is_assign {
                            let (name, pos) = self.expect_ident()?;
                            self.bump(); // .
                            let (m, mpos) = self.expect_ident()?;
                            let member = Member::from_name(&m).ok_or_else(|| {
                                Diagnostic::new(
                                    DiagnosticKind::SyntaxError,
                                    mpos,
                                    format!("unknown member `.{m}`"),
                                )
                            })?;
                            self.bump(); // =
                            let value = self.expr()?;
                            self.expect(Tok::Semi)?;
                            Ok(Stmt::Assign { name, member: Some(member), value, pos })
                        } else {
                            let expr = self.expr()?;
                            self.expect(Tok::Semi)?;
                            Ok(Stmt::Expr { expr })
                        }
                    }
                    _ => {
                        let expr = self.expr()?;
                        self.expect(Tok::Semi)?;
                        Ok(Stmt::Expr { expr })
                    }
                }
            }
            Some(other) => Err(self.error(format!("expected statement, found {}", other.describe()))),
            None => Err(self.error("expected statement, found end of input")),
        }
    }

    // -- expressions --------------------------------------------------------

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut left = self.and_expr()?;
        while self.peek() == Some(&Tok::OrOr) {
            let pos = self.bump().unwrap().pos;
            let right = self.and_expr()?;
            left = Expr::Binary { op: BinaryOp::Or, left: Box::new(left), right: Box::new(right), pos };
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut left = self.equality()?;
        while self.peek() == Some(&Tok::AndAnd) {
            let pos = self.bump().unwrap().pos;
            let right = self.equality()?;
            left = Expr::Binary { op: BinaryOp::And, left: Box::new(left), right: Box::new(right), pos };
        }
        Ok(left)
    }

    fn equality(&mut self) -> Result<Expr, Diagnostic> {
        let mut left = self.relational()?;
        loop {
            let op = match self.peek() {
                Some(Tok::EqEq) => BinaryOp::Eq,
                Some(Tok::Ne) => BinaryOp::Ne,
                _ => break,
            };
            let pos = self.bump().unwrap().pos;
            let right = self.relational()?;
            left = Expr::Binary { op, left: Box::new(left), right: Box::new(right), pos };
        }
        Ok(left)
    }

    fn relational(&mut self) -> Result<Expr, Diagnostic> {
        let mut left = self.additive()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Lt) => BinaryOp::Lt,
                Some(Tok::Gt) => BinaryOp::Gt,
                Some(Tok::Le) => BinaryOp::Le,
                Some(Tok::Ge) => BinaryOp::Ge,
                _ => break,
            };
            let pos = self.bump().unwrap().pos;
            let right = self.additive()?;
            left = Expr::Binary { op, left: Box::new(left), right: Box::new(right), pos };
        }
        Ok(left)
    }

    fn additive(&mut self) -> Result<Expr, Diagnostic> {
        let mut left = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinaryOp::Add,
                Some(Tok::Minus) => BinaryOp::Sub,
                _ => break,
            };
            let pos = self.bump().unwrap().pos;
            let right = self.multiplicative()?;
            left = Expr::Binary { op, left: Box::new(left), right: Box::new(right), pos };
        }
        Ok(left)
    }

    fn multiplicative(&mut self) -> Result<Expr, Diagnostic> {
        let mut left = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinaryOp::Mul,
                Some(Tok::Slash) => BinaryOp::Div,
                Some(Tok::Percent) => BinaryOp::Mod,
                _ => break,
            };
            let pos = self.bump().unwrap().pos;
            let right = self.unary()?;
            left = Expr::Binary { op, left: Box::new(left), right: Box::new(right), pos };
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        match self.peek() {
            Some(Tok::Minus) => {
                let pos = self.bump().unwrap().pos;
                let operand = Box::new(self.unary()?);
                Ok(Expr::Unary { op: UnaryOp::Neg, operand, pos })
            }
            Some(Tok::Bang) => {
                let pos = self.bump().unwrap().pos;
                let operand = Box::new(self.unary()?);
                Ok(Expr::Unary { op: UnaryOp::Not, operand, pos })
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Expr, Diagnostic> {
        let mut expr = self.primary()?;
        while self.peek() == Some(&Tok::Dot) {
            let pos = self.bump().unwrap().pos;
            let (name, mpos) = self.expect_ident()?;
            let member = Member::from_name(&name).ok_or_else(|| {
                Diagnostic::new(DiagnosticKind::SyntaxError, mpos, format!("unknown member `.{name}`"))
            })?;
            expr = Expr::Member { base: Box::new(expr), member, pos };
        }
        Ok(expr)
    }

    fn primary(&mut self) -> Result<Expr, Diagnostic> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let t = self.bump().unwrap();
                match t.tok {
                    Tok::Int(value) => Ok(Expr::Int { value, pos: t.pos }),
                    _ => unreachable!(),
                }
            }
            Some(Tok::Float(_)) => {
                let t = self.bump().unwrap();
                match t.tok {
                    Tok::Float(value) => Ok(Expr::Float { value, pos: t.pos }),
                    _ => unreachable!(),
                }
            }
            Some(Tok::Str(_)) => {
                let t = self.bump().unwrap();
                match t.tok {
                    Tok::Str(value) => Ok(Expr::Str { value, pos: t.pos }),
                    _ => unreachable!(),
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let expr = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(expr)
            }
            Some(Tok::Lt) => {
                // Vector `<x, y, z>` or rotation `<x, y, z, s>` literal.
                let pos = self.bump().unwrap().pos;
                let mut components = vec![self.additive()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    components.push(self.additive()?);
                }
                self.expect(Tok::Gt)?;
                match components.len() {
                    3 => {
                        let mut it = components.into_iter();
                        Ok(Expr::VectorLit {
                            components: Box::new([
                                it.next().unwrap(),
                                it.next().unwrap(),
                                it.next().unwrap(),
                            ]),
                            pos,
                        })
                    }
                    4 => {
                        let mut it = components.into_iter();
                        Ok(Expr::RotationLit {
                            components: Box::new([
                                it.next().unwrap(),
                                it.next().unwrap(),
                                it.next().unwrap(),
                                it.next().unwrap(),
                            ]),
                            pos,
                        })
                    }
                    n => Err(Diagnostic::new(
                        DiagnosticKind::SyntaxError,
                        pos,
                        format!("vector literal needs 3 components, rotation 4, found {n}"),
                    )),
                }
            }
            Some(Tok::Ident(_)) => {
                let (name, pos) = self.expect_ident()?;
                if self.peek() == Some(&Tok::LParen) {
                    self.bump();
                    let mut args = Vec::new();
                    if self.peek() == Some(&Tok::RParen) {
                        self.bump();
                    } else {
                        loop {
                            args.push(self.expr()?);
                            match self.peek() {
                                Some(Tok::Comma) => {
                                    self.bump();
                                }
                                Some(Tok::RParen) => {
                                    self.bump();
                                    break;
                                }
                                _ => return Err(self.error("expected `,` or `)` in argument list")),
                            }
                        }
                    }
                    Ok(Expr::Call { name, args, pos })
                } else {
                    Ok(Expr::Var { name, pos })
                }
            }
            Some(other) => Err(self.error(format!("expected expression, found {}", other.describe()))),
            None => Err(self.error("expected expression, found end of input")),
        }
    }
}
