//! Canonical printer. `parse(print(f))` reproduces `f` exactly.

use std::fmt::Write;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::ast::*;
use super::lexer::{is_ident_char, is_ident_start};
use super::parser::RESERVED;
use crate::algebra::Algebra;
use crate::field::Field;

fn quoted(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn is_plain_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c)) && cs.all(is_ident_char) && !RESERVED.contains(&s)
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}

/// A label in a `basis` or `vertices` list.
fn list_label(s: &str) -> String {
    if is_plain_ident(s) || is_digits(s) {
        s.to_string()
    } else {
        quoted(s)
    }
}

/// A label where a bare integer would read as an index, or an arrow label.
fn ref_label(s: &str) -> String {
    if is_plain_ident(s) {
        s.to_string()
    } else {
        quoted(s)
    }
}

fn print_ref(r: &Ref) -> String {
    match r {
        Ref::Index(i) => i.to_string(),
        Ref::Label(l) => ref_label(l),
    }
}

fn print_sum<T>(terms: &[(BigRational, T)], atom: impl Fn(&T) -> String) -> String {
    let mut out = String::new();
    for (k, (c, a)) in terms.iter().enumerate() {
        let sign = if c.is_negative() { "-" } else { "+" };
        match (k, sign) {
            (0, "+") => {}
            (0, _) => out.push_str("- "),
            _ => {
                out.push(' ');
                out.push_str(sign);
                out.push(' ');
            }
        }
        let a_abs = c.abs();
        if !a_abs.is_one() {
            write!(out, "{a_abs} ").unwrap();
        }
        out.push_str(&atom(a));
    }
    out
}

pub fn print_combo(c: &Combo) -> String {
    if c.0.is_empty() {
        return "zero".into();
    }
    let terms: Vec<(BigRational, &Ref)> = c.0.iter().map(|t| (t.coef.clone(), &t.basis)).collect();
    print_sum(&terms, |r| print_ref(r))
}

fn print_product(p: &Product) -> String {
    format!("{} * {} = {}", print_ref(&p.left), print_ref(&p.right), print_combo(&p.value))
}

fn block(out: &mut String, head: &str, lines: &[String]) {
    out.push_str(head);
    if lines.is_empty() {
        out.push_str("{ }");
        return;
    }
    out.push_str("{\n");
    for (i, l) in lines.iter().enumerate() {
        out.push_str("  ");
        out.push_str(l);
        if i + 1 < lines.len() {
            out.push(';');
        }
        out.push('\n');
    }
    out.push('}');
}

fn names(ns: &[&Name]) -> String {
    ns.iter().map(|n| n.text.as_str()).collect::<Vec<_>>().join(", ")
}

fn print_quiver(q: &QuiverPresentation) -> Vec<String> {
    let mut lines = vec![format!(
        "vertices {}",
        q.vertices.iter().map(|v| list_label(v)).collect::<Vec<_>>().join(" ")
    )];
    for a in &q.arrows {
        lines.push(format!(
            "arrow {} : {} -> {}",
            ref_label(&a.label),
            list_label(&q.vertices[a.source]),
            list_label(&q.vertices[a.target])
        ));
    }
    for r in &q.relations {
        let path = |p: &Vec<usize>| p.iter().map(|&i| ref_label(&q.arrows[i].label)).collect::<Vec<_>>().join("*");
        lines.push(format!("relation {}", print_sum(r, path)));
    }
    if q.length_bound != DEFAULT_LENGTH_BOUND {
        lines.push(format!("bound {}", q.length_bound));
    }
    lines
}

fn print_algebra_expr(out: &mut String, e: &AlgebraExpr) {
    match e {
        AlgebraExpr::StructConst { dim, basis, products, unit } => {
            let mut lines = vec![format!("dim {dim}")];
            if let Some(b) = basis {
                lines.push(format!("basis {}", b.iter().map(|l| list_label(l)).collect::<Vec<_>>().join(" ")));
            }
            lines.extend(products.iter().map(print_product));
            lines.push(format!("unit = {}", print_combo(unit)));
            block(out, "structconst ", &lines);
        }
        AlgebraExpr::Quiver(q) => block(out, "quiver ", &print_quiver(q)),
        AlgebraExpr::Ground => out.push_str("ground"),
        AlgebraExpr::Truncated { var, n } => write!(out, "truncated({var}, {n})").unwrap(),
        AlgebraExpr::MatrixAlg { base, n } => write!(out, "matrixalg({}, {n})", base.text).unwrap(),
        AlgebraExpr::Triangular { s, t, m } => write!(out, "triangular({})", names(&[s, t, m])).unwrap(),
        AlgebraExpr::Product { a, b } => write!(out, "product({})", names(&[a, b])).unwrap(),
        AlgebraExpr::Tensor { a, b } => write!(out, "tensor({})", names(&[a, b])).unwrap(),
        AlgebraExpr::Opposite { a } => write!(out, "opposite({})", a.text).unwrap(),
        AlgebraExpr::Sub { parent, span } => {
            let lines: Vec<String> = span.iter().map(print_combo).collect();
            block(out, &format!("sub({}) ", parent.text), &lines);
        }
    }
}

pub fn print_decl(d: &Decl) -> String {
    let mut out = String::new();
    let name = &d.name.text;
    match &d.kind {
        DeclKind::Algebra(e) => {
            write!(out, "algebra {name} = ").unwrap();
            print_algebra_expr(&mut out, e);
        }
        DeclKind::Morphism { source, target, expr } => {
            write!(out, "morphism {name} : {} -> {} = ", source.text, target.text).unwrap();
            match expr {
                MorphismExpr::Images(images) => {
                    let lines: Vec<String> =
                        images.iter().map(|(r, c)| format!("{} = {}", print_ref(r), print_combo(c))).collect();
                    block(&mut out, "", &lines);
                }
                MorphismExpr::Identity => out.push_str("identity"),
                MorphismExpr::Inclusion => out.push_str("inclusion"),
                MorphismExpr::Compose { first, second } => write!(out, "then({})", names(&[first, second])).unwrap(),
            }
        }
        DeclKind::Bimodule { left, right, expr } => {
            write!(out, "bimodule {name} : {} - {} = ", left.text, right.text).unwrap();
            match expr {
                BimoduleExpr::Regular => out.push_str("regular"),
                BimoduleExpr::Zero => out.push_str("zero"),
                BimoduleExpr::Restrict { of, left, right } => {
                    write!(out, "restrict({})", names(&[of, left, right])).unwrap()
                }
                BimoduleExpr::Actions { dim, basis, left, right } => {
                    let mut lines = vec![format!("dim {dim}")];
                    if let Some(b) = basis {
                        lines.push(format!("basis {}", b.iter().map(|l| list_label(l)).collect::<Vec<_>>().join(" ")));
                    }
                    lines.extend(left.iter().map(|p| format!("left {}", print_product(p))));
                    lines.extend(right.iter().map(|p| format!("right {}", print_product(p))));
                    block(&mut out, "actions ", &lines);
                }
            }
        }
        DeclKind::Element { parent, value } => {
            write!(out, "element {name} in {} = {}", parent.text, print_combo(value)).unwrap();
        }
        DeclKind::Context(c) => {
            write!(out, "context {name} = ").unwrap();
            match c {
                ContextExpr::Exact { lambda, mu, m, element } => {
                    write!(out, "exact({})", names(&[lambda, mu, m, element])).unwrap()
                }
                ContextExpr::Trivial { r } => write!(out, "trivial({})", r.text).unwrap(),
                ContextExpr::Extension { lambda } => write!(out, "extension({})", lambda.text).unwrap(),
                ContextExpr::Milnor { j1, j2 } => write!(out, "milnor({})", names(&[j1, j2])).unwrap(),
                ContextExpr::Morita { a, c, x, y, f, g } => {
                    let mut lines: Vec<String> = f.iter().map(|p| format!("f {}", print_product(p))).collect();
                    lines.extend(g.iter().map(|p| format!("g {}", print_product(p))));
                    block(&mut out, &format!("morita({}) ", names(&[a, c, x, y])), &lines);
                }
                ContextExpr::Pure { lambda, mu, x, y } => {
                    let mut lines: Vec<String> = x.iter().map(|v| format!("x {}", print_combo(v))).collect();
                    lines.extend(y.iter().map(|v| format!("y {}", print_combo(v))));
                    block(&mut out, &format!("pure({}) ", names(&[lambda, mu])), &lines);
                }
            }
        }
    }
    out
}

pub fn print(file: &PresentationFile) -> String {
    let mut parts = Vec::new();
    if let Some(f) = file.field {
        parts.push(format!("field {f}"));
    }
    parts.extend(file.decls.iter().map(print_decl));
    let mut out = parts.join("\n\n");
    out.push('\n');
    out
}

/// A `structconst` declaration reproducing `a` exactly, basis labels
/// included.
pub fn algebra_decl<F: Field>(name: &str, a: &Algebra<F>) -> Decl {
    let k = a.field();
    let d = a.dim();
    let basis_ref = |i: usize| -> Ref {
        let l = &a.labels()[i];
        match l.parse::<usize>() {
            Ok(n) if n.to_string() == *l => Ref::Index(n),
            _ => Ref::Label(l.clone()),
        }
    };
    let coef = |e: &F::Elem| -> BigRational { k.format(e).parse().expect("exact scalar") };
    let combo = |v: &[(usize, F::Elem)]| -> Combo {
        Combo(v.iter().map(|(i, e)| Term { coef: coef(e), basis: basis_ref(*i) }).collect())
    };
    let mut products = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let p = a.basis_product(i, j);
            if !p.is_empty() {
                products.push(Product { left: basis_ref(i), right: basis_ref(j), value: combo(p) });
            }
        }
    }
    let unit: Vec<(usize, F::Elem)> =
        a.unit().iter().enumerate().filter(|(_, e)| !k.is_zero(e)).map(|(i, e)| (i, e.clone())).collect();
    Decl {
        name: Name { text: name.to_string(), pos: Pos::default() },
        kind: DeclKind::Algebra(AlgebraExpr::StructConst {
            dim: d,
            basis: Some(a.labels().to_vec()),
            products,
            unit: combo(&unit),
        }),
        pos: Pos::default(),
    }
}

/// A complete presentation file declaring `a` under `name`.
pub fn print_algebra<F: Field>(name: &str, a: &Algebra<F>) -> String {
    print(&PresentationFile { field: Some(a.field().spec()), decls: vec![algebra_decl(name, a)] })
}
