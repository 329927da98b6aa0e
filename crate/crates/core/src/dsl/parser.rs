use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::DslError;
use crate::field::FieldSpec;

/// Words that start a declaration or denote zero; they never parse as basis
/// labels and are quoted by the printer.
pub const RESERVED: [&str; 8] = ["field", "algebra", "morphism", "bimodule", "element", "context", "zero", "in"];

pub fn parse(src: &str) -> Result<PresentationFile, DslError> {
    let tokens = tokenize(src)?;
    Parser { tokens, at: 0, expected: BTreeSet::new(), names: HashSet::new() }.file()
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    /// What was tried and failed at the current position.
    expected: BTreeSet<String>,
    names: HashSet<String>,
}

type P<T> = Result<T, DslError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.tokens[(self.at + 1).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        self.expected.clear();
        t
    }

    fn fail<T>(&mut self) -> P<T> {
        let Pos { line, col } = self.pos();
        Err(DslError::Syntax { line, col, expected: std::mem::take(&mut self.expected).into_iter().collect() })
    }

    fn fail_with<T>(&mut self, what: &str) -> P<T> {
        self.expected.insert(what.to_string());
        self.fail()
    }

    fn at_sym(&mut self, s: &'static str) -> bool {
        if *self.peek() == Tok::Sym(s) {
            true
        } else {
            self.expected.insert(format!("`{s}`"));
            false
        }
    }

    fn eat_sym(&mut self, s: &'static str) -> bool {
        let hit = self.at_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn sym(&mut self, s: &'static str) -> P<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.fail()
        }
    }

    fn at_kw(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == k) {
            true
        } else {
            self.expected.insert(format!("`{k}`"));
            false
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        let hit = self.at_kw(k);
        if hit {
            self.bump();
        }
        hit
    }

    fn kw(&mut self, k: &str) -> P<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.fail()
        }
    }

    fn count(&mut self) -> P<usize> {
        if let Tok::Int(s) = self.peek() {
            if let Ok(n) = s.parse::<u32>() {
                self.bump();
                return Ok(n as usize);
            }
        }
        self.fail_with("a count")
    }

    fn ident(&mut self) -> P<Name> {
        if let Tok::Ident(s) = self.peek() {
            if !RESERVED.contains(&s.as_str()) {
                let text = s.clone();
                let pos = self.bump().pos;
                return Ok(Name { text, pos });
            }
        }
        self.fail_with("a name")
    }

    /// A new declaration name.
    fn fresh(&mut self) -> P<Name> {
        let n = self.ident()?;
        if !self.names.insert(n.text.clone()) {
            return Err(DslError::DuplicateName { name: n.text, line: n.pos.line, col: n.pos.col });
        }
        Ok(n)
    }

    /// A reference to an earlier declaration.
    fn reference(&mut self) -> P<Name> {
        let n = self.ident()?;
        if !self.names.contains(&n.text) {
            return Err(DslError::UnresolvedReference { name: n.text, line: n.pos.line, col: n.pos.col });
        }
        Ok(n)
    }

    fn args(&mut self, n: usize) -> P<Vec<Name>> {
        self.sym("(")?;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                self.sym(",")?;
            }
            out.push(self.reference()?);
        }
        self.sym(")")?;
        Ok(out)
    }

    fn file(mut self) -> P<PresentationFile> {
        let mut file = PresentationFile::default();
        if self.eat_kw("field") {
            file.field = Some(self.field_spec()?);
        }
        loop {
            if *self.peek() == Tok::Eof {
                return Ok(file);
            }
            let pos = self.pos();
            let decl = if self.eat_kw("algebra") {
                let name = self.fresh()?;
                self.sym("=")?;
                Decl { name, kind: DeclKind::Algebra(self.algebra()?), pos }
            } else if self.eat_kw("morphism") {
                let name = self.fresh()?;
                self.sym(":")?;
                let source = self.reference()?;
                self.sym("->")?;
                let target = self.reference()?;
                self.sym("=")?;
                let expr = self.morphism()?;
                Decl { name, kind: DeclKind::Morphism { source, target, expr }, pos }
            } else if self.eat_kw("bimodule") {
                let name = self.fresh()?;
                self.sym(":")?;
                let left = self.reference()?;
                self.sym("-")?;
                let right = self.reference()?;
                self.sym("=")?;
                let expr = self.bimodule()?;
                Decl { name, kind: DeclKind::Bimodule { left, right, expr }, pos }
            } else if self.eat_kw("element") {
                let name = self.fresh()?;
                self.kw("in")?;
                let parent = self.reference()?;
                self.sym("=")?;
                let value = self.combo()?;
                Decl { name, kind: DeclKind::Element { parent, value }, pos }
            } else if self.eat_kw("context") {
                let name = self.fresh()?;
                self.sym("=")?;
                Decl { name, kind: DeclKind::Context(self.context()?), pos }
            } else {
                self.expected.insert("end of input".into());
                return self.fail();
            };
            file.decls.push(decl);
        }
    }

    fn field_spec(&mut self) -> P<FieldSpec> {
        let text = match self.peek().clone() {
            Tok::Ident(s) if s == "Fp" && self.peek2() == &Tok::Sym(":") => {
                self.bump();
                self.bump();
                match self.peek().clone() {
                    Tok::Int(p) => format!("Fp:{p}"),
                    _ => return self.fail_with("a prime"),
                }
            }
            Tok::Ident(s) => s,
            _ => return self.fail_with("`Q` or `Fp:<p>`"),
        };
        match text.parse::<FieldSpec>() {
            Ok(spec) => {
                self.bump();
                Ok(spec)
            }
            Err(_) => self.fail_with("`Q` or `Fp:<p>` with p prime below 2^31"),
        }
    }

    /// `{ item ; item ; … }` with an optional trailing `;`.
    fn block<T>(&mut self, mut item: impl FnMut(&mut Self) -> P<T>) -> P<Vec<T>> {
        self.sym("{")?;
        let mut out = Vec::new();
        loop {
            if self.eat_sym("}") {
                return Ok(out);
            }
            out.push(item(self)?);
            if self.eat_sym(";") {
                continue;
            }
            self.sym("}")?;
            return Ok(out);
        }
    }

    fn algebra(&mut self) -> P<AlgebraExpr> {
        if self.eat_kw("structconst") {
            return self.structconst();
        }
        if self.eat_kw("quiver") {
            return self.quiver().map(AlgebraExpr::Quiver);
        }
        if self.eat_kw("ground") {
            return Ok(AlgebraExpr::Ground);
        }
        if self.eat_kw("truncated") {
            self.sym("(")?;
            let var = self.ident()?.text;
            self.sym(",")?;
            let n = self.count()?;
            if n == 0 {
                return self.fail_with("a positive count");
            }
            self.sym(")")?;
            return Ok(AlgebraExpr::Truncated { var, n });
        }
        if self.eat_kw("matrixalg") {
            self.sym("(")?;
            let base = self.reference()?;
            self.sym(",")?;
            let n = self.count()?;
            if n == 0 {
                return self.fail_with("a positive count");
            }
            self.sym(")")?;
            return Ok(AlgebraExpr::MatrixAlg { base, n });
        }
        if self.eat_kw("triangular") {
            let [s, t, m]: [Name; 3] = self.args(3)?.try_into().expect("three");
            return Ok(AlgebraExpr::Triangular { s, t, m });
        }
        if self.eat_kw("product") {
            let [a, b]: [Name; 2] = self.args(2)?.try_into().expect("two");
            return Ok(AlgebraExpr::Product { a, b });
        }
        if self.eat_kw("tensor") {
            let [a, b]: [Name; 2] = self.args(2)?.try_into().expect("two");
            return Ok(AlgebraExpr::Tensor { a, b });
        }
        if self.eat_kw("opposite") {
            let [a]: [Name; 1] = self.args(1)?.try_into().expect("one");
            return Ok(AlgebraExpr::Opposite { a });
        }
        if self.eat_kw("sub") {
            let [parent]: [Name; 1] = self.args(1)?.try_into().expect("one");
            let span = self.block(|p| p.combo())?;
            return Ok(AlgebraExpr::Sub { parent, span });
        }
        self.fail()
    }

    fn structconst(&mut self) -> P<AlgebraExpr> {
        self.sym("{")?;
        self.kw("dim")?;
        let dim = self.count()?;
        let (mut basis, mut products, mut unit) = (None, Vec::new(), None);
        loop {
            if self.at_sym("}") {
                if unit.is_none() {
                    return self.fail_with("`unit`");
                }
                self.bump();
                break;
            }
            self.sym(";")?;
            if self.at_sym("}") {
                continue;
            }
            let next_is_star = *self.peek2() == Tok::Sym("*");
            if !next_is_star && basis.is_none() && self.eat_kw("basis") {
                basis = Some(self.labels()?);
            } else if !next_is_star && unit.is_none() && self.eat_kw("unit") {
                self.sym("=")?;
                unit = Some(self.combo()?);
            } else {
                products.push(self.product()?);
            }
        }
        let unit = unit.expect("checked before the closing brace");
        Ok(AlgebraExpr::StructConst { dim, basis, products, unit })
    }

    fn label(&mut self) -> Option<String> {
        let s = match self.peek() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => s.clone(),
            Tok::Int(s) | Tok::Str(s) => s.clone(),
            _ => {
                self.expected.insert("a label".into());
                return None;
            }
        };
        self.bump();
        Some(s)
    }

    fn labels(&mut self) -> P<Vec<String>> {
        let mut out = Vec::new();
        while let Some(l) = self.label() {
            out.push(l);
        }
        if out.is_empty() {
            return self.fail();
        }
        Ok(out)
    }

    fn basis_ref(&mut self) -> Option<Ref> {
        let r = match self.peek() {
            Tok::Int(s) => match s.parse::<usize>() {
                Ok(i) => Ref::Index(i),
                Err(_) => Ref::Label(s.clone()),
            },
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => Ref::Label(s.clone()),
            Tok::Str(s) => Ref::Label(s.clone()),
            _ => {
                self.expected.insert("a basis element".into());
                return None;
            }
        };
        self.bump();
        Some(r)
    }

    fn need_ref(&mut self) -> P<Ref> {
        match self.basis_ref() {
            Some(r) => Ok(r),
            None => self.fail(),
        }
    }

    fn product(&mut self) -> P<Product> {
        let left = self.need_ref()?;
        self.sym("*")?;
        let right = self.need_ref()?;
        self.sym("=")?;
        let value = self.combo()?;
        Ok(Product { left, right, value })
    }

    fn number(&mut self) -> P<BigRational> {
        let num = match self.peek() {
            Tok::Int(s) => s.parse::<BigInt>().expect("digits"),
            _ => return self.fail_with("a number"),
        };
        self.bump();
        if self.eat_sym("/") {
            let den = match self.peek() {
                Tok::Int(s) => s.parse::<BigInt>().expect("digits"),
                _ => return self.fail_with("a denominator"),
            };
            if den.is_zero() {
                return self.fail_with("a nonzero denominator");
            }
            self.bump();
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn starts_ref(&self, t: &Tok) -> bool {
        match t {
            Tok::Int(_) | Tok::Str(_) => true,
            Tok::Ident(s) => !RESERVED.contains(&s.as_str()),
            _ => false,
        }
    }

    /// `[number] atom`, where a lone integer is an atom, not a coefficient.
    fn term<T>(&mut self, atom: &mut impl FnMut(&mut Self) -> P<T>) -> P<(BigRational, T)> {
        let coefficient = match self.peek() {
            Tok::Int(_) => {
                let t2 = self.peek2().clone();
                t2 == Tok::Sym("/") || self.starts_ref(&t2)
            }
            _ => false,
        };
        let c = if coefficient { self.number()? } else { BigRational::one() };
        Ok((c, atom(self)?))
    }

    fn sum<T>(&mut self, mut atom: impl FnMut(&mut Self) -> P<T>) -> P<Vec<(BigRational, T)>> {
        let mut out = Vec::new();
        let mut neg = self.eat_sym("-");
        loop {
            let (c, a) = self.term(&mut atom)?;
            out.push((if neg { -c } else { c }, a));
            if self.eat_sym("+") {
                neg = false;
            } else if self.eat_sym("-") {
                neg = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn combo(&mut self) -> P<Combo> {
        if self.eat_kw("zero") {
            return Ok(Combo::default());
        }
        let terms = self.sum(|p| p.need_ref())?;
        Ok(Combo(terms.into_iter().map(|(coef, basis)| Term { coef, basis }).collect()))
    }

    fn quiver(&mut self) -> P<QuiverPresentation> {
        let mut q = QuiverPresentation {
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
            length_bound: DEFAULT_LENGTH_BOUND,
        };
        self.sym("{")?;
        self.kw("vertices")?;
        q.vertices = self.labels()?;
        let mut seen = HashSet::new();
        for (i, v) in q.vertices.iter().enumerate() {
            if !seen.insert(v.clone()) {
                let pos = self.tokens[self.at - q.vertices.len() + i].pos;
                return Err(DslError::DuplicateName { name: v.clone(), line: pos.line, col: pos.col });
            }
        }
        let mut bound_set = false;
        loop {
            if self.eat_sym("}") {
                return Ok(q);
            }
            self.sym(";")?;
            if self.eat_sym("}") {
                return Ok(q);
            }
            if self.eat_kw("arrow") {
                let pos = self.pos();
                let label = match self.peek().clone() {
                    Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => s,
                    Tok::Str(s) => s,
                    _ => return self.fail_with("an arrow label"),
                };
                if q.arrows.iter().any(|a| a.label == label) || q.vertices.contains(&label) {
                    return Err(DslError::DuplicateName { name: label, line: pos.line, col: pos.col });
                }
                self.bump();
                self.sym(":")?;
                let source = self.vertex(&q)?;
                self.sym("->")?;
                let target = self.vertex(&q)?;
                q.arrows.push(Arrow { label, source, target });
            } else if self.eat_kw("relation") {
                let arrows = q.arrows.clone();
                q.relations.push(self.sum(|p| p.path(&arrows))?);
            } else if !bound_set && self.eat_kw("bound") {
                q.length_bound = self.count()?;
                bound_set = true;
            } else {
                return self.fail();
            }
        }
    }

    fn vertex(&mut self, q: &QuiverPresentation) -> P<usize> {
        let pos = self.pos();
        match self.label() {
            Some(l) => q
                .vertices
                .iter()
                .position(|v| *v == l)
                .ok_or(DslError::UnresolvedReference { name: l, line: pos.line, col: pos.col }),
            None => self.fail(),
        }
    }

    fn path(&mut self, arrows: &[Arrow]) -> P<Vec<usize>> {
        let mut out = Vec::new();
        loop {
            let pos = self.pos();
            let label = match self.peek().clone() {
                Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => s,
                Tok::Str(s) => s,
                _ => return self.fail_with("an arrow"),
            };
            self.bump();
            let i = arrows
                .iter()
                .position(|a| a.label == label)
                .ok_or(DslError::UnresolvedReference { name: label, line: pos.line, col: pos.col })?;
            out.push(i);
            if !self.eat_sym("*") {
                return Ok(out);
            }
        }
    }

    fn morphism(&mut self) -> P<MorphismExpr> {
        if self.eat_kw("identity") {
            return Ok(MorphismExpr::Identity);
        }
        if self.eat_kw("inclusion") {
            return Ok(MorphismExpr::Inclusion);
        }
        if self.eat_kw("then") {
            let [first, second]: [Name; 2] = self.args(2)?.try_into().expect("two");
            return Ok(MorphismExpr::Compose { first, second });
        }
        if self.at_sym("{") {
            let images = self.block(|p| {
                let r = p.need_ref()?;
                p.sym("=")?;
                Ok((r, p.combo()?))
            })?;
            return Ok(MorphismExpr::Images(images));
        }
        self.fail()
    }

    fn bimodule(&mut self) -> P<BimoduleExpr> {
        if self.eat_kw("regular") {
            return Ok(BimoduleExpr::Regular);
        }
        if self.eat_kw("zero") {
            return Ok(BimoduleExpr::Zero);
        }
        if self.eat_kw("restrict") {
            let [of, left, right]: [Name; 3] = self.args(3)?.try_into().expect("three");
            return Ok(BimoduleExpr::Restrict { of, left, right });
        }
        if self.eat_kw("actions") {
            self.sym("{")?;
            self.kw("dim")?;
            let dim = self.count()?;
            let (mut basis, mut left, mut right) = (None, Vec::new(), Vec::new());
            loop {
                if self.eat_sym("}") {
                    break;
                }
                self.sym(";")?;
                if self.eat_sym("}") {
                    break;
                }
                if basis.is_none() && self.eat_kw("basis") {
                    basis = Some(self.labels()?);
                } else if self.eat_kw("left") {
                    left.push(self.product()?);
                } else if self.eat_kw("right") {
                    right.push(self.product()?);
                } else {
                    return self.fail();
                }
            }
            return Ok(BimoduleExpr::Actions { dim, basis, left, right });
        }
        self.fail()
    }

    fn context(&mut self) -> P<ContextExpr> {
        if self.eat_kw("exact") {
            let [lambda, mu, m, element]: [Name; 4] = self.args(4)?.try_into().expect("four");
            return Ok(ContextExpr::Exact { lambda, mu, m, element });
        }
        if self.eat_kw("trivial") {
            let [r]: [Name; 1] = self.args(1)?.try_into().expect("one");
            return Ok(ContextExpr::Trivial { r });
        }
        if self.eat_kw("extension") {
            let [lambda]: [Name; 1] = self.args(1)?.try_into().expect("one");
            return Ok(ContextExpr::Extension { lambda });
        }
        if self.eat_kw("milnor") {
            let [j1, j2]: [Name; 2] = self.args(2)?.try_into().expect("two");
            return Ok(ContextExpr::Milnor { j1, j2 });
        }
        if self.eat_kw("morita") {
            let [a, c, x, y]: [Name; 4] = self.args(4)?.try_into().expect("four");
            let (mut f, mut g) = (Vec::new(), Vec::new());
            self.block(|p| {
                if p.eat_kw("f") {
                    f.push(p.product()?);
                } else if p.eat_kw("g") {
                    g.push(p.product()?);
                } else {
                    return p.fail();
                }
                Ok(())
            })?;
            return Ok(ContextExpr::Morita { a, c, x, y, f, g });
        }
        if self.eat_kw("pure") {
            let [lambda, mu]: [Name; 2] = self.args(2)?.try_into().expect("two");
            let (mut x, mut y) = (Vec::new(), Vec::new());
            self.block(|p| {
                if p.eat_kw("x") {
                    x.push(p.combo()?);
                } else if p.eat_kw("y") {
                    y.push(p.combo()?);
                } else {
                    return p.fail();
                }
                Ok(())
            })?;
            return Ok(ContextExpr::Pure { lambda, mu, x, y });
        }
        self.fail()
    }
}
