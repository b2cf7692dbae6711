//! Rendering back to the ASCII syntax with minimal brackets.
//!
//! The output reparses to the same tree: `parse_eqset(&render(s)) == s`.

use crate::expr::{EqSet, Equation, Expr};
use crate::rational::Rational;

pub fn render(s: &EqSet) -> String {
    s.equations()
        .iter()
        .map(render_equation)
        .collect::<Vec<_>>()
        .join(" or ")
}

pub fn render_equation(e: &Equation) -> String {
    format!("{} = {}", render_expr(&e.lhs), render_expr(&e.rhs))
}

pub fn render_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_sum(e, &mut out);
    out
}

fn write_sum(e: &Expr, out: &mut String) {
    match e {
        Expr::Sum(items) => {
            for (i, item) in items.iter().enumerate() {
                let start = out.len();
                write_term(item, out);
                if i > 0 && !out[start..].starts_with('-') {
                    out.insert(start, '+');
                }
            }
        }
        other => write_term(other, out),
    }
}

fn write_term(e: &Expr, out: &mut String) {
    match e {
        Expr::Prod(factors) => {
            for (i, f) in factors.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                write_factor(f, i == 0, out);
            }
        }
        Expr::Sum(_) => bracketed(e, out),
        other => write_factor(other, true, out),
    }
}

fn write_rational(r: &Rational, out: &mut String) {
    out.push_str(&r.to_string());
}

fn write_factor(e: &Expr, leading: bool, out: &mut String) {
    match e {
        Expr::Const(c) if c.is_negative() && !leading => bracketed(e, out),
        Expr::Const(c) => write_rational(c, out),
        Expr::Var => out.push('x'),
        Expr::Pow(base, n) => {
            write_atom(base, out);
            out.push('^');
            out.push_str(&n.to_string());
        }
        Expr::Sqrt(inner) => {
            out.push_str("sqrt(");
            write_sum(inner, out);
            out.push(')');
        }
        Expr::Neg(_) if !leading => bracketed(e, out),
        Expr::Neg(inner) => {
            out.push('-');
            match &**inner {
                Expr::Var | Expr::Sqrt(_) => write_factor(inner, true, out),
                Expr::Pow(base, n) => {
                    write_atom(base, out);
                    out.push('^');
                    out.push_str(&n.to_string());
                }
                other => bracketed(other, out),
            }
        }
        Expr::Sum(_) | Expr::Prod(_) => bracketed(e, out),
    }
}

/// The operand of `^`: anything but `x`, a non-negative integer or a square
/// root gets brackets.
fn write_atom(e: &Expr, out: &mut String) {
    match e {
        Expr::Var | Expr::Sqrt(_) => write_factor(e, true, out),
        Expr::Const(c) if !c.is_negative() && c.denom() == &1.into() => write_rational(c, out),
        other => bracketed(other, out),
    }
}

fn bracketed(e: &Expr, out: &mut String) {
    out.push('(');
    write_sum(e, out);
    out.push(')');
}
