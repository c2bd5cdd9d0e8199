//! Static checks: name resolution, types, event signatures, state targets.
//!
//! The checker is deliberately strict where the engine needs guarantees (the
//! interpreter and builtin dispatch assume well-typed operands) and follows
//! the source language elsewhere: `integer` promotes to `float` implicitly,
//! conditions must be integers, and `float` never demotes back.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;
use super::builtins;

pub fn check(script: &Script) -> Result<(), Diagnostic> {
    Checker::new(script)?.run()
}

fn err(kind: DiagnosticKind, pos: Pos, message: impl Into<String>) -> Diagnostic {
    Diagnostic::new(kind, pos, message)
}

fn type_err(pos: Pos, message: impl Into<String>) -> Diagnostic {
    err(DiagnosticKind::TypeError, pos, message)
}

/// `from` value usable where `to` is expected.
fn assignable(to: Type, from: Type) -> bool {
    to == from || (to == Type::Float && from == Type::Integer)
}

struct FnSig {
    params: Vec<Type>,
    ret: Option<Type>,
}

struct Checker<'a> {
    script: &'a Script,
    globals: BTreeMap<&'a str, Type>,
    functions: BTreeMap<&'a str, FnSig>,
    states: BTreeSet<&'a str>,
}

/// Lexical scope stack for locals; index 0 is the handler/function root.
struct Scope {
    frames: Vec<BTreeMap<String, Type>>,
}

impl Scope {
    fn new() -> Scope {
        Scope { frames: vec![BTreeMap::new()] }
    }
    fn push(&mut self) {
        self.frames.push(BTreeMap::new());
    }
    fn pop(&mut self) {
        self.frames.pop();
    }
    fn declare(&mut self, name: &str, ty: Type, pos: Pos) -> Result<(), Diagnostic> {
        let top = self.frames.last_mut().expect("scope stack never empty");
        if top.contains_key(name) {
            return Err(type_err(pos, format!("`{name}` already declared in this scope")));
        }
        top.insert(name.to_string(), ty);
        Ok(())
    }
    fn lookup(&self, name: &str) -> Option<Type> {
        self.frames.iter().rev().find_map(|f| f.get(name).copied())
    }
}

/// What the enclosing body allows.
struct BodyCtx {
    ret: Option<Type>,
    in_handler: bool,
}

impl<'a> Checker<'a> {
    fn new(script: &'a Script) -> Result<Checker<'a>, Diagnostic> {
        let mut globals = BTreeMap::new();
        for g in &script.globals {
            if builtins::constant(&g.name).is_some() {
                return Err(type_err(g.pos, format!("`{}` shadows a builtin constant", g.name)));
            }
            if globals.insert(g.name.as_str(), g.ty).is_some() {
                return Err(type_err(g.pos, format!("global `{}` already declared", g.name)));
            }
        }
        let mut functions = BTreeMap::new();
        for f in &script.functions {
            if builtins::lookup(&f.name).is_some() {
                return Err(type_err(f.pos, format!("`{}` shadows a builtin function", f.name)));
            }
            let sig = FnSig { params: f.params.iter().map(|p| p.ty).collect(), ret: f.ret };
            if functions.insert(f.name.as_str(), sig).is_some() {
                return Err(type_err(f.pos, format!("function `{}` already declared", f.name)));
            }
        }
        let mut states = BTreeSet::new();
        for s in &script.states {
            if !states.insert(s.name.as_str()) {
                return Err(err(
                    DiagnosticKind::SyntaxError,
                    s.pos,
                    format!("state `{}` already declared", s.name),
                ));
            }
        }
        if !states.contains("default") {
            let pos = script.states.first().map(|s| s.pos).unwrap_or_default();
            return Err(err(DiagnosticKind::SyntaxError, pos, "missing `default` state"));
        }
        Ok(Checker { script, globals, functions, states })
    }

    fn run(&self) -> Result<(), Diagnostic> {
        // Globals are initialized top to bottom at attach time, so an
        // initializer may only mention the globals above it.
        let order: BTreeMap<&str, usize> = self
            .script
            .globals
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.as_str(), i))
            .collect();
        for (i, g) in self.script.globals.iter().enumerate() {
            if let Some(init) = &g.init {
                self.check_const_expr(init)?;
                check_global_order(init, i, &order)?;
                let ty = self.type_of(init, &Scope::new())?;
                if !assignable(g.ty, ty) {
                    return Err(type_err(
                        init.pos(),
                        format!("cannot initialize {} `{}` with {ty}", g.ty, g.name),
                    ));
                }
            }
        }
        for f in &self.script.functions {
            let mut scope = Scope::new();
            for p in &f.params {
                scope.declare(&p.name, p.ty, p.pos)?;
            }
            let ctx = BodyCtx { ret: f.ret, in_handler: false };
            self.check_block(&f.body, &mut scope, &ctx)?;
        }
        for s in &self.script.states {
            let mut seen = BTreeSet::new();
            for h in &s.handlers {
                if !seen.insert(h.event) {
                    return Err(err(
                        DiagnosticKind::SyntaxError,
                        h.pos,
                        format!("duplicate `{}` handler in state `{}`", h.event.name(), s.name),
                    ));
                }
                let want = h.event.param_types();
                let got: Vec<Type> = h.params.iter().map(|p| p.ty).collect();
                if got != want {
                    return Err(type_err(
                        h.pos,
                        format!(
                            "`{}` takes ({}), found ({})",
                            h.event.name(),
                            want.iter().map(|t| t.keyword()).collect::<Vec<_>>().join(", "),
                            got.iter().map(|t| t.keyword()).collect::<Vec<_>>().join(", "),
                        ),
                    ));
                }
                let mut scope = Scope::new();
                for p in &h.params {
                    scope.declare(&p.name, p.ty, p.pos)?;
                }
                let ctx = BodyCtx { ret: None, in_handler: true };
                self.check_block(&h.body, &mut scope, &ctx)?;
            }
        }
        Ok(())
    }

    /// Global initializers run before any event, with no world attached, so
    /// they must be closed expressions over literals, constants, and earlier
    /// globals — no calls.
    fn check_const_expr(&self, expr: &Expr) -> Result<(), Diagnostic> {
        match expr {
            Expr::Int { .. } | Expr::Float { .. } | Expr::Str { .. } | Expr::Var { .. } => Ok(()),
            Expr::VectorLit { components, .. } => {
                components.iter().try_for_each(|c| self.check_const_expr(c))
            }
            Expr::RotationLit { components, .. } => {
                components.iter().try_for_each(|c| self.check_const_expr(c))
            }
            Expr::Member { base, .. } => self.check_const_expr(base),
            Expr::Unary { operand, .. } => self.check_const_expr(operand),
            Expr::Binary { left, right, .. } => {
                self.check_const_expr(left)?;
                self.check_const_expr(right)
            }
            Expr::Call { pos, .. } => {
                Err(type_err(*pos, "global initializers cannot call functions"))
            }
        }
    }

    fn check_block(&self, block: &Block, scope: &mut Scope, ctx: &BodyCtx) -> Result<(), Diagnostic> {
        scope.push();
        for stmt in &block.stmts {
            self.check_stmt(stmt, scope, ctx)?;
        }
        scope.pop();
        Ok(())
    }

    fn check_stmt(&self, stmt: &Stmt, scope: &mut Scope, ctx: &BodyCtx) -> Result<(), Diagnostic> {
        match stmt {
            Stmt::Decl { ty, name, init, pos } => {
                if builtins::constant(name).is_some() {
                    return Err(type_err(*pos, format!("`{name}` shadows a builtin constant")));
                }
                if let Some(init) = init {
                    let got = self.type_of(init, scope)?;
                    if !assignable(*ty, got) {
                        return Err(type_err(
                            init.pos(),
                            format!("cannot initialize {ty} `{name}` with {got}"),
                        ));
                    }
                }
                scope.declare(name, *ty, *pos)
            }
            Stmt::Assign { name, member, value, pos } => {
                let base_ty = match scope.lookup(name).or_else(|| self.globals.get(name.as_str()).copied()) {
                    Some(ty) => ty,
                    None if builtins::constant(name).is_some() => {
                        return Err(type_err(*pos, format!("cannot assign to constant `{name}`")))
                    }
                    None => return Err(type_err(*pos, format!("undeclared variable `{name}`"))),
                };
                let target_ty = match member {
                    None => base_ty,
                    Some(m) => member_type(base_ty, *m).ok_or_else(|| {
                        type_err(*pos, format!("{base_ty} has no member `.{}`", m.name()))
                    })?,
                };
                let got = self.type_of(value, scope)?;
                if !assignable(target_ty, got) {
                    return Err(type_err(
                        value.pos(),
                        format!("cannot assign {got} to {target_ty} `{name}`"),
                    ));
                }
                Ok(())
            }
            Stmt::If { cond, then_branch, else_branch, .. } => {
                self.check_condition(cond, scope)?;
                self.check_stmt(then_branch, scope, ctx)?;
                if let Some(e) = else_branch {
                    self.check_stmt(e, scope, ctx)?;
                }
                Ok(())
            }
            Stmt::While { cond, body, .. } => {
                self.check_condition(cond, scope)?;
                self.check_stmt(body, scope, ctx)
            }
            Stmt::Return { value, pos } => match (ctx.ret, value) {
                (None, None) => Ok(()),
                (None, Some(v)) => Err(type_err(
                    v.pos(),
                    if ctx.in_handler {
                        "event handlers cannot return a value".to_string()
                    } else {
                        "void function cannot return a value".to_string()
                    },
                )),
                (Some(want), None) => {
                    Err(type_err(*pos, format!("function must return {want}")))
                }
                (Some(want), Some(v)) => {
                    let got = self.type_of(v, scope)?;
                    if !assignable(want, got) {
                        return Err(type_err(v.pos(), format!("expected {want}, found {got}")));
                    }
                    Ok(())
                }
            },
            Stmt::StateChange { target, pos } => {
                if !ctx.in_handler {
                    return Err(err(
                        DiagnosticKind::SyntaxError,
                        *pos,
                        "state change outside an event handler",
                    ));
                }
                if !self.states.contains(target.as_str()) {
                    return Err(err(
                        DiagnosticKind::SyntaxError,
                        *pos,
                        format!("unknown state `{target}`"),
                    ));
                }
                Ok(())
            }
            Stmt::Expr { expr } => {
                // A call may be void in statement position; anything else
                // must still typecheck.
                match expr {
                    Expr::Call { .. } => {
                        self.type_of_call(expr, scope)?;
                        Ok(())
                    }
                    _ => {
                        self.type_of(expr, scope)?;
                        Ok(())
                    }
                }
            }
            Stmt::Block(b) => self.check_block(b, scope, ctx),
        }
    }

    fn check_condition(&self, cond: &Expr, scope: &Scope) -> Result<(), Diagnostic> {
        let ty = self.type_of(cond, scope)?;
        if ty != Type::Integer {
            return Err(type_err(cond.pos(), format!("condition must be integer, found {ty}")));
        }
        Ok(())
    }

    /// Types a call; `Ok(None)` is a void call.
    fn type_of_call(&self, expr: &Expr, scope: &Scope) -> Result<Option<Type>, Diagnostic> {
        let Expr::Call { name, args, pos } = expr else {
            unreachable!("type_of_call on non-call");
        };
        let (params, ret): (Vec<Type>, Option<Type>) = if let Some(f) = self.functions.get(name.as_str()) {
            (f.params.clone(), f.ret)
        } else if let Some(b) = builtins::lookup(name) {
            (b.params.to_vec(), b.ret)
        } else {
            return Err(err(
                DiagnosticKind::UnknownBuiltin,
                *pos,
                format!("unknown function `{name}`"),
            ));
        };
        if args.len() != params.len() {
            return Err(type_err(
                *pos,
                format!("`{name}` takes {} argument(s), found {}", params.len(), args.len()),
            ));
        }
        for (arg, want) in args.iter().zip(&params) {
            let got = self.type_of(arg, scope)?;
            if !assignable(*want, got) {
                return Err(type_err(
                    arg.pos(),
                    format!("`{name}` expects {want} here, found {got}"),
                ));
            }
        }
        Ok(ret)
    }

    fn type_of(&self, expr: &Expr, scope: &Scope) -> Result<Type, Diagnostic> {
        match expr {
            Expr::Int { .. } => Ok(Type::Integer),
            Expr::Float { .. } => Ok(Type::Float),
            Expr::Str { .. } => Ok(Type::String),
            Expr::VectorLit { components, .. } => {
                for c in components.iter() {
                    let ty = self.type_of(c, scope)?;
                    if !assignable(Type::Float, ty) {
                        return Err(type_err(
                            c.pos(),
                            format!("vector component must be numeric, found {ty}"),
                        ));
                    }
                }
                Ok(Type::Vector)
            }
            Expr::RotationLit { components, .. } => {
                for c in components.iter() {
                    let ty = self.type_of(c, scope)?;
                    if !assignable(Type::Float, ty) {
                        return Err(type_err(
                            c.pos(),
                            format!("rotation component must be numeric, found {ty}"),
                        ));
                    }
                }
                Ok(Type::Rotation)
            }
            Expr::Var { name, pos } => scope
                .lookup(name)
                .or_else(|| self.globals.get(name.as_str()).copied())
                .or_else(|| builtins::constant(name).map(|c| c.type_of()))
                .ok_or_else(|| type_err(*pos, format!("undeclared variable `{name}`"))),
            Expr::Member { base, member, pos } => {
                let base_ty = self.type_of(base, scope)?;
                member_type(base_ty, *member)
                    .ok_or_else(|| type_err(*pos, format!("{base_ty} has no member `.{}`", member.name())))
            }
            Expr::Call { name, pos, .. } => match self.type_of_call(expr, scope)? {
                Some(ty) => Ok(ty),
                None => Err(type_err(*pos, format!("`{name}` returns no value"))),
            },
            Expr::Unary { op, operand, pos } => {
                let ty = self.type_of(operand, scope)?;
                match (op, ty) {
                    (UnaryOp::Neg, Type::Integer) => Ok(Type::Integer),
                    (UnaryOp::Neg, Type::Float) => Ok(Type::Float),
                    (UnaryOp::Neg, Type::Vector) => Ok(Type::Vector),
                    (UnaryOp::Not, Type::Integer) => Ok(Type::Integer),
                    (UnaryOp::Neg, other) => Err(type_err(*pos, format!("cannot negate {other}"))),
                    (UnaryOp::Not, other) => {
                        Err(type_err(*pos, format!("`!` needs an integer, found {other}")))
                    }
                }
            }
            Expr::Binary { op, left, right, pos } => {
                let l = self.type_of(left, scope)?;
                let r = self.type_of(right, scope)?;
                binary_type(*op, l, r).ok_or_else(|| {
                    type_err(*pos, format!("`{}` not defined for {l} and {r}", op.symbol()))
                })
            }
        }
    }
}

fn check_global_order(
    expr: &Expr,
    idx: usize,
    order: &BTreeMap<&str, usize>,
) -> Result<(), Diagnostic> {
    match expr {
        Expr::Var { name, pos } => {
            if order.get(name.as_str()).is_some_and(|j| *j >= idx) {
                return Err(type_err(*pos, format!("global `{name}` used before declaration")));
            }
            Ok(())
        }
        Expr::Int { .. } | Expr::Float { .. } | Expr::Str { .. } => Ok(()),
        Expr::VectorLit { components, .. } => {
            components.iter().try_for_each(|c| check_global_order(c, idx, order))
        }
        Expr::RotationLit { components, .. } => {
            components.iter().try_for_each(|c| check_global_order(c, idx, order))
        }
        Expr::Member { base, .. } => check_global_order(base, idx, order),
        Expr::Unary { operand, .. } => check_global_order(operand, idx, order),
        Expr::Binary { left, right, .. } => {
            check_global_order(left, idx, order)?;
            check_global_order(right, idx, order)
        }
        Expr::Call { .. } => Ok(()), // already rejected by check_const_expr
    }
}

fn member_type(base: Type, member: Member) -> Option<Type> {
    match (base, member) {
        (Type::Vector, Member::X | Member::Y | Member::Z) => Some(Type::Float),
        (Type::Rotation, _) => Some(Type::Float),
        _ => None,
    }
}

fn numeric(ty: Type) -> bool {
    matches!(ty, Type::Integer | Type::Float)
}

fn numeric_join(l: Type, r: Type) -> Type {
    if l == Type::Float || r == Type::Float {
        Type::Float
    } else {
        Type::Integer
    }
}

fn binary_type(op: BinaryOp, l: Type, r: Type) -> Option<Type> {
    use BinaryOp::*;
    use Type::*;
    match op {
        Add | Sub => match (l, r) {
            (Vector, Vector) => Some(Vector),
            _ if numeric(l) && numeric(r) => Some(numeric_join(l, r)),
            _ => None,
        },
        Mul => match (l, r) {
            // Vector · vector is the dot product.
            (Vector, Vector) => Some(Float),
            (Vector, _) if numeric(r) => Some(Vector),
            (_, Vector) if numeric(l) => Some(Vector),
            _ if numeric(l) && numeric(r) => Some(numeric_join(l, r)),
            _ => None,
        },
        Div => match (l, r) {
            (Vector, _) if numeric(r) => Some(Vector),
            _ if numeric(l) && numeric(r) => Some(numeric_join(l, r)),
            _ => None,
        },
        // `%` is integer remainder, or the cross product on vectors.
        Mod => match (l, r) {
            (Integer, Integer) => Some(Integer),
            (Vector, Vector) => Some(Vector),
            _ => None,
        },
        Eq | Ne => match (l, r) {
            (Vector, Vector) | (Rotation, Rotation) | (String, String) => Some(Integer),
            _ if numeric(l) && numeric(r) => Some(Integer),
            _ => None,
        },
        Lt | Gt | Le | Ge => {
            if numeric(l) && numeric(r) {
                Some(Integer)
            } else {
                None
            }
        }
        And | Or => {
            if l == Integer && r == Integer {
                Some(Integer)
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::lexer::lex;
    use super::super::parser::parse_tokens;
    use super::*;

    fn check_src(src: &str) -> Result<(), Diagnostic> {
        check(&parse_tokens(lex(src).unwrap()).unwrap())
    }

    #[test]
    fn accepts_well_typed_script() {
        check_src(
            "float speed = 2.5;\n\
             vector scaled(vector v, float k) { return v * k; }\n\
             default {\n\
                 state_entry() {\n\
                     vector f = scaled(<0, 0, 1>, speed);\n\
                     if (f.z > 1.0) llSetForce(f);\n\
                 }\n\
                 collision_start(integer n) { integer hits = n + 1; }\n\
             }",
        )
        .unwrap();
    }

    #[test]
    fn unknown_builtin_is_flagged_with_position() {
        let e = check_src("default { state_entry() { llFoo(); } }").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::UnknownBuiltin);
        assert!(e.message.contains("llFoo"));
        assert_eq!(e.pos.line, 1);
        assert_eq!(e.pos.col, 27);
    }

    #[test]
    fn integer_promotes_to_float_but_not_back() {
        check_src("default { state_entry() { float x = 3; } }").unwrap();
        let e = check_src("default { state_entry() { integer x = 3.0; } }").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::TypeError);
    }

    #[test]
    fn vector_operators() {
        check_src(
            "default { state_entry() {\n\
                 vector a = <1, 0, 0>;\n\
                 vector b = <0, 1, 0>;\n\
                 float dot = a * b;\n\
                 vector cross = a % b;\n\
                 vector scaled = a * 2;\n\
                 vector summed = a + b;\n\
             } }",
        )
        .unwrap();
        let e = check_src("default { state_entry() { vector v = <1,0,0> * <0,1,0>; } }")
            .unwrap_err();
        assert!(e.message.contains("vector"));
    }

    #[test]
    fn conditions_must_be_integer() {
        let e = check_src("default { state_entry() { if (1.0) return; } }").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::TypeError);
    }

    #[test]
    fn handler_signatures_enforced() {
        let e = check_src("default { touch_start() { } }").unwrap_err();
        assert!(e.message.contains("touch_start"));
        let e = check_src("default { state_entry(integer n) { } }").unwrap_err();
        assert!(e.message.contains("state_entry"));
    }

    #[test]
    fn state_targets_resolved() {
        let e = check_src("default { state_entry() { state nowhere; } }").unwrap_err();
        assert!(e.message.contains("nowhere"));
        check_src(
            "default { state_entry() { state armed; } } state armed { }",
        )
        .unwrap();
    }

    #[test]
    fn state_change_disallowed_in_functions() {
        let e = check_src(
            "go() { state armed; } default { } state armed { }",
        )
        .unwrap_err();
        assert!(e.message.contains("outside an event handler"));
    }

    #[test]
    fn missing_default_state() {
        let e = check_src("state armed { }").unwrap_err();
        assert!(e.message.contains("default"));
    }

    #[test]
    fn global_initializers_cannot_call() {
        let e = check_src("float m = llGetMass(); default { }").unwrap_err();
        assert!(e.message.contains("cannot call"));
    }

    #[test]
    fn globals_initialize_in_order() {
        check_src("float a = 1.0; float b = a + 1.0; default { }").unwrap();
        let e = check_src("float a = b + 1.0; float b = 1.0; default { }").unwrap_err();
        assert!(e.message.contains("before declaration"));
    }

    #[test]
    fn constants_are_known_and_immutable() {
        check_src("default { state_entry() { float t = PI * 2.0; integer b = TRUE; } }").unwrap();
        let e = check_src("default { state_entry() { TRUE = 0; } }").unwrap_err();
        assert!(e.message.contains("constant"));
    }

    #[test]
    fn member_access_rules() {
        check_src("default { state_entry() { vector v; v.x = 1.0; float s = v.y; } }").unwrap();
        let e = check_src("default { state_entry() { vector v; float s = v.s; } }").unwrap_err();
        assert!(e.message.contains(".s"));
    }

    #[test]
    fn void_function_in_value_position_rejected() {
        let e = check_src(
            "noop() { } default { state_entry() { float x = noop(); } }",
        )
        .unwrap_err();
        assert!(e.message.contains("returns no value"));
    }

    #[test]
    fn builtin_arity_and_types() {
        let e = check_src("default { state_entry() { llSetForce(1.0); } }").unwrap_err();
        assert_eq!(e.kind, DiagnosticKind::TypeError);
        let e = check_src("default { state_entry() { llSetForce(); } }").unwrap_err();
        assert!(e.message.contains("argument"));
        check_src("default { state_entry() { llSetBuoyancy(1); } }").unwrap();
    }
}
