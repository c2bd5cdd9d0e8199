//! Syntax tree for the scripting language, plus the canonical pretty-printer.

use std::fmt;

/// Source location, 1-based.
///
/// Positions are diagnostics metadata, not program structure: two ASTs that
/// differ only in positions are the same program, so `Pos` compares equal to
/// everything. This is what makes `parse(pretty(ast)) == ast` hold.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}
impl Eq for Pos {}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    SyntaxError,
    UnknownBuiltin,
    TypeError,
}

/// Parse/check failure with a source location. Rendered as
/// `line:col: kind: message`; the CLI prepends the file name.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, pos: Pos, message: impl Into<String>) -> Diagnostic {
        Diagnostic { kind, pos, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::SyntaxError => "syntax error",
            DiagnosticKind::UnknownBuiltin => "unknown builtin",
            DiagnosticKind::TypeError => "type error",
        };
        write!(f, "{}: {kind}: {}", self.pos, self.message)
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type {
    Integer,
    Float,
    Vector,
    Rotation,
    String,
}

impl Type {
    pub fn keyword(self) -> &'static str {
        match self {
            Type::Integer => "integer",
            Type::Float => "float",
            Type::Vector => "vector",
            Type::Rotation => "rotation",
            Type::String => "string",
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Member {
    X,
    Y,
    Z,
    S,
}

impl Member {
    pub fn name(self) -> &'static str {
        match self {
            Member::X => "x",
            Member::Y => "y",
            Member::Z => "z",
            Member::S => "s",
        }
    }
    pub fn from_name(name: &str) -> Option<Member> {
        match name {
            "x" => Some(Member::X),
            "y" => Some(Member::Y),
            "z" => Some(Member::Z),
            "s" => Some(Member::S),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Mod => "%",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Gt => ">",
            BinaryOp::Le => "<=",
            BinaryOp::Ge => ">=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int { value: i64, pos: Pos },
    Float { value: f64, pos: Pos },
    Str { value: String, pos: Pos },
    /// `<x, y, z>`
    VectorLit { components: Box<[Expr; 3]>, pos: Pos },
    /// `<x, y, z, s>`
    RotationLit { components: Box<[Expr; 4]>, pos: Pos },
    Var { name: String, pos: Pos },
    Member { base: Box<Expr>, member: Member, pos: Pos },
    Call { name: String, args: Vec<Expr>, pos: Pos },
    Unary { op: UnaryOp, operand: Box<Expr>, pos: Pos },
    Binary { op: BinaryOp, left: Box<Expr>, right: Box<Expr>, pos: Pos },
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Int { pos, .. }
            | Expr::Float { pos, .. }
            | Expr::Str { pos, .. }
            | Expr::VectorLit { pos, .. }
            | Expr::RotationLit { pos, .. }
            | Expr::Var { pos, .. }
            | Expr::Member { pos, .. }
            | Expr::Call { pos, .. }
            | Expr::Unary { pos, .. }
            | Expr::Binary { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Decl { ty: Type, name: String, init: Option<Expr>, pos: Pos },
    Assign { name: String, member: Option<Member>, value: Expr, pos: Pos },
    If { cond: Expr, then_branch: Box<Stmt>, else_branch: Option<Box<Stmt>>, pos: Pos },
    While { cond: Expr, body: Box<Stmt>, pos: Pos },
    Return { value: Option<Expr>, pos: Pos },
    /// `state other;`
    StateChange { target: String, pos: Pos },
    Expr { expr: Expr },
    Block(Block),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventKind {
    StateEntry,
    Timer,
    TouchStart,
    CollisionStart,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::StateEntry => "state_entry",
            EventKind::Timer => "timer",
            EventKind::TouchStart => "touch_start",
            EventKind::CollisionStart => "collision_start",
        }
    }
    pub fn from_name(name: &str) -> Option<EventKind> {
        match name {
            "state_entry" => Some(EventKind::StateEntry),
            "timer" => Some(EventKind::Timer),
            "touch_start" => Some(EventKind::TouchStart),
            "collision_start" => Some(EventKind::CollisionStart),
            _ => None,
        }
    }
    /// Required handler parameter types.
    pub fn param_types(self) -> &'static [Type] {
        match self {
            EventKind::StateEntry | EventKind::Timer => &[],
            EventKind::TouchStart | EventKind::CollisionStart => &[Type::Integer],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub ty: Type,
    pub name: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Handler {
    pub event: EventKind,
    pub params: Vec<Param>,
    pub body: Block,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Function {
    pub name: String,
    pub ret: Option<Type>,
    pub params: Vec<Param>,
    pub body: Block,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateDef {
    pub name: String,
    pub handlers: Vec<Handler>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalVar {
    pub ty: Type,
    pub name: String,
    pub init: Option<Expr>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Script {
    pub globals: Vec<GlobalVar>,
    pub functions: Vec<Function>,
    pub states: Vec<StateDef>,
}

// ---------------------------------------------------------------------------
// Pretty-printer
// ---------------------------------------------------------------------------

/// Canonical source form. Reparsing the output yields an AST equal to the
/// input (positions excluded, which compare equal by design).
pub fn pretty(script: &Script) -> String {
    let mut out = String::new();
    for g in &script.globals {
        out.push_str(&format!("{} {}", g.ty, g.name));
        if let Some(init) = &g.init {
            out.push_str(" = ");
            print_expr(&mut out, init);
        }
        out.push_str(";\n");
    }
    if !script.globals.is_empty() {
        out.push('\n');
    }
    for f in &script.functions {
        match f.ret {
            Some(ty) => out.push_str(&format!("{ty} {}(", f.name)),
            None => out.push_str(&format!("{}(", f.name)),
        }
        print_params(&mut out, &f.params);
        out.push_str(") ");
        print_block(&mut out, &f.body, 0);
        out.push_str("\n\n");
    }
    for (i, s) in script.states.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if s.name == "default" {
            out.push_str("default {\n");
        } else {
            out.push_str(&format!("state {} {{\n", s.name));
        }
        for h in &s.handlers {
            out.push_str(&format!("    {}(", h.event.name()));
            print_params(&mut out, &h.params);
            out.push_str(") ");
            print_block(&mut out, &h.body, 1);
            out.push('\n');
        }
        out.push_str("}\n");
    }
    out
}

fn print_params(out: &mut String, params: &[Param]) {
    for (i, p) in params.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format!("{} {}", p.ty, p.name));
    }
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

fn print_block(out: &mut String, block: &Block, level: usize) {
    out.push_str("{\n");
    for stmt in &block.stmts {
        print_stmt(out, stmt, level + 1);
    }
    indent(out, level);
    out.push('}');
}

fn print_stmt(out: &mut String, stmt: &Stmt, level: usize) {
    indent(out, level);
    match stmt {
        Stmt::Decl { ty, name, init, .. } => {
            out.push_str(&format!("{ty} {name}"));
            if let Some(e) = init {
                out.push_str(" = ");
                print_expr(out, e);
            }
            out.push_str(";\n");
        }
        Stmt::Assign { name, member, value, .. } => {
            out.push_str(name);
            if let Some(m) = member {
                out.push('.');
                out.push_str(m.name());
            }
            out.push_str(" = ");
            print_expr(out, value);
            out.push_str(";\n");
        }
        Stmt::If { cond, then_branch, else_branch, .. } => {
            out.push_str("if (");
            print_expr(out, cond);
            out.push_str(")\n");
            print_stmt(out, then_branch, level + 1);
            if let Some(e) = else_branch {
                indent(out, level);
                out.push_str("else\n");
                print_stmt(out, e, level + 1);
            }
        }
        Stmt::While { cond, body, .. } => {
            out.push_str("while (");
            print_expr(out, cond);
            out.push_str(")\n");
            print_stmt(out, body, level + 1);
        }
        Stmt::Return { value, .. } => {
            out.push_str("return");
            if let Some(e) = value {
                out.push(' ');
                print_expr(out, e);
            }
            out.push_str(";\n");
        }
        Stmt::StateChange { target, .. } => {
            out.push_str(&format!("state {target};\n"));
        }
        Stmt::Expr { expr } => {
            print_expr(out, expr);
            out.push_str(";\n");
        }
        Stmt::Block(b) => {
            print_block(out, b, level);
            out.push('\n');
        }
    }
}

fn print_expr(out: &mut String, expr: &Expr) {
    match expr {
        Expr::Int { value, .. } => out.push_str(&value.to_string()),
        Expr::Float { value, .. } => {
            // {:?} keeps a decimal point or exponent, so it re-lexes as float.
            out.push_str(&format!("{value:?}"));
        }
        Expr::Str { value, .. } => {
            out.push('"');
            for c in value.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    _ => out.push(c),
                }
            }
            out.push('"');
        }
        Expr::VectorLit { components, .. } => {
            out.push('<');
            for (i, c) in components.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr(out, c);
            }
            out.push('>');
        }
        Expr::RotationLit { components, .. } => {
            out.push('<');
            for (i, c) in components.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr(out, c);
            }
            out.push('>');
        }
        Expr::Var { name, .. } => out.push_str(name),
        Expr::Member { base, member, .. } => {
            let simple = matches!(**base, Expr::Var { .. } | Expr::Call { .. });
            if !simple {
                out.push('(');
            }
            print_expr(out, base);
            if !simple {
                out.push(')');
            }
            out.push('.');
            out.push_str(member.name());
        }
        Expr::Call { name, args, .. } => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_expr(out, a);
            }
            out.push(')');
        }
        Expr::Unary { op, operand, .. } => {
            out.push('(');
            out.push(match op {
                UnaryOp::Neg => '-',
                UnaryOp::Not => '!',
            });
            print_expr(out, operand);
            out.push(')');
        }
        Expr::Binary { op, left, right, .. } => {
            out.push('(');
            print_expr(out, left);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            print_expr(out, right);
            out.push(')');
        }
    }
}
