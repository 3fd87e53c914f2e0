use super::{Formula, StandpointExpr, TILDE_SUFFIX};

// Binding strength, loosest first.
const LEADS_TO: u8 = 0;
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

const UNION: u8 = 0;
const DIFFERENCE: u8 = 1;
const INTERSECTION: u8 = 2;
const COMPLEMENT: u8 = 3;

/// Canonical concrete syntax with the fewest parentheses that still parse
/// back to the same tree.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, LEADS_TO, &mut out);
    out
}

pub fn print_standpoint_expr(e: &StandpointExpr) -> String {
    let mut out = String::new();
    write_expr(e, UNION, &mut out);
    out
}

fn formula_level(f: &Formula) -> u8 {
    match f {
        Formula::DefImplies(..) => LEADS_TO,
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write_formula(f: &Formula, min_level: u8, out: &mut String) {
    let wrap = formula_level(f) < min_level;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Top => out.push_str("true"),
        Formula::Bottom => out.push_str("false"),
        Formula::Atom(p) => out.push_str(p),
        Formula::Not(g) => {
            out.push('!');
            write_formula(g, UNARY, out);
        }
        Formula::And(a, b) => binary(a, " & ", b, AND, AND + 1, out),
        Formula::Or(a, b) => binary(a, " | ", b, OR, OR + 1, out),
        Formula::Implies(a, b) => binary(a, " -> ", b, IMPLIES + 1, IMPLIES, out),
        Formula::Iff(a, b) => binary(a, " <-> ", b, IFF, IFF + 1, out),
        Formula::DefImplies(a, b) => binary(a, " ~> ", b, IFF, IFF, out),
        Formula::Box(e, g) => modal("[", e, "]", g, out),
        Formula::DefBox(e, g) => modal("[[", e, "]]", g, out),
        Formula::Diamond(e, g) => modal("<", e, ">", g, out),
        Formula::DefDiamond(e, g) => modal("<<", e, ">>", g, out),
        Formula::Sharpening(e, d) => sharpening(e, " <= ", d, out),
        Formula::DefSharpening(e, d) => sharpening(e, " <~ ", d, out),
    }
    if wrap {
        out.push(')');
    }
}

fn binary(a: &Formula, op: &str, b: &Formula, left: u8, right: u8, out: &mut String) {
    write_formula(a, left, out);
    out.push_str(op);
    write_formula(b, right, out);
}

fn modal(open: &str, e: &StandpointExpr, close: &str, g: &Formula, out: &mut String) {
    out.push_str(open);
    write_expr(e, UNION, out);
    // `s~>` would lex as `s` followed by `~>`.
    if close.starts_with('>') && out.ends_with(TILDE_SUFFIX) {
        out.push(' ');
    }
    out.push_str(close);
    out.push(' ');
    write_formula(g, UNARY, out);
}

fn sharpening(e: &StandpointExpr, op: &str, d: &StandpointExpr, out: &mut String) {
    out.push('{');
    write_expr(e, UNION, out);
    out.push('}');
    out.push_str(op);
    out.push('{');
    write_expr(d, UNION, out);
    out.push('}');
}

fn expr_level(e: &StandpointExpr) -> u8 {
    match e {
        StandpointExpr::Union(..) => UNION,
        StandpointExpr::Difference(..) => DIFFERENCE,
        StandpointExpr::Intersection(..) => INTERSECTION,
        _ => COMPLEMENT,
    }
}

fn write_expr(e: &StandpointExpr, min_level: u8, out: &mut String) {
    let wrap = expr_level(e) < min_level;
    if wrap {
        out.push('(');
    }
    match e {
        StandpointExpr::Universal => out.push('*'),
        StandpointExpr::Atom(s) => out.push_str(s),
        StandpointExpr::Complement(inner) => {
            out.push('-');
            write_expr(inner, COMPLEMENT, out);
        }
        StandpointExpr::Intersection(a, b) => {
            write_expr(a, INTERSECTION, out);
            out.push_str(" & ");
            write_expr(b, INTERSECTION + 1, out);
        }
        StandpointExpr::Difference(a, b) => {
            write_expr(a, DIFFERENCE, out);
            out.push_str(" \\ ");
            write_expr(b, DIFFERENCE + 1, out);
        }
        StandpointExpr::Union(a, b) => {
            write_expr(a, UNION, out);
            out.push_str(" u ");
            write_expr(b, UNION + 1, out);
        }
    }
    if wrap {
        out.push(')');
    }
}
