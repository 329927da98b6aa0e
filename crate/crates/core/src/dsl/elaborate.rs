//! Turns a parsed presentation into validated objects.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use super::ast::*;
use super::quiver::{elaborate_quiver, QuiverError};
use crate::algebra::{
    matrix_algebra, product, subalgebra_from_spanning, tensor_product, triangular_algebra, Algebra, AlgebraError,
    AlgebraMorphism, SparseVec,
};
use crate::context::{
    check_exact_context, context_from_extension, context_from_milnor, context_from_morita, context_from_strictly_pure,
    trivial_context, ContextError, ExactContext, ExtensionData, MoritaData, PureData,
};
use crate::field::{Field, FieldError};
use crate::linalg::{zero_vec, Matrix, Vector};
use crate::module::{Bimodule, ModuleError};

pub const DEFAULT_MAX_DIM: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElabErrorKind {
    #[error("`{name}` is not {expected}")]
    WrongKind { name: String, expected: &'static str },
    #[error("no basis element `{label}` in `{of}`")]
    UnknownBasis { label: String, of: String },
    #[error("`{0}` is given twice")]
    DuplicateEntry(String),
    #[error("dimension {dim} exceeds the limit {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An elaboration failure inside the declaration `decl`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("in `{decl}` at {line}:{col}: {kind}")]
pub struct ElabError {
    pub decl: String,
    pub line: usize,
    pub col: usize,
    pub kind: ElabErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElabOptions {
    /// Largest dimension allowed for any algebra or bimodule.
    pub max_dim: usize,
}

impl Default for ElabOptions {
    fn default() -> Self {
        ElabOptions { max_dim: DEFAULT_MAX_DIM }
    }
}

/// How a context was built, with the constructor's extra data.
#[derive(Debug, Clone)]
pub enum ContextKind<F: Field> {
    Exact,
    Trivial,
    Extension(Box<ExtensionData<F>>),
    Morita(Box<MoritaData<F>>),
    Pure(Box<PureData<F>>),
    Milnor,
}

impl<F: Field> ContextKind<F> {
    pub fn name(&self) -> &'static str {
        match self {
            ContextKind::Exact => "exact",
            ContextKind::Trivial => "trivial",
            ContextKind::Extension(_) => "extension",
            ContextKind::Morita(_) => "morita",
            ContextKind::Pure(_) => "pure",
            ContextKind::Milnor => "milnor",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContextValue<F: Field> {
    pub context: ExactContext<F>,
    pub kind: ContextKind<F>,
}

#[derive(Debug, Clone)]
pub enum Value<F: Field> {
    /// `inclusion` is set for `sub` algebras.
    Algebra { algebra: Arc<Algebra<F>>, inclusion: Option<AlgebraMorphism<F>> },
    Morphism(AlgebraMorphism<F>),
    Bimodule(Bimodule<F>),
    Element { parent: String, coords: Vector<F> },
    Context(Box<ContextValue<F>>),
}

/// Elaborated declarations in file order.
#[derive(Debug, Clone)]
pub struct Environment<F: Field> {
    pub field: F,
    order: Vec<String>,
    values: HashMap<String, Value<F>>,
}

impl<F: Field> Environment<F> {
    pub fn names(&self) -> &[String] {
        &self.order
    }

    pub fn get(&self, name: &str) -> Option<&Value<F>> {
        self.values.get(name)
    }

    pub fn algebra(&self, name: &str) -> Option<&Arc<Algebra<F>>> {
        match self.values.get(name) {
            Some(Value::Algebra { algebra, .. }) => Some(algebra),
            _ => None,
        }
    }

    pub fn morphism(&self, name: &str) -> Option<&AlgebraMorphism<F>> {
        match self.values.get(name) {
            Some(Value::Morphism(m)) => Some(m),
            _ => None,
        }
    }

    pub fn bimodule(&self, name: &str) -> Option<&Bimodule<F>> {
        match self.values.get(name) {
            Some(Value::Bimodule(b)) => Some(b),
            _ => None,
        }
    }

    pub fn context(&self, name: &str) -> Option<&ContextValue<F>> {
        match self.values.get(name) {
            Some(Value::Context(c)) => Some(c),
            _ => None,
        }
    }

    /// Context names in file order.
    pub fn contexts(&self) -> Vec<&str> {
        self.order.iter().filter(|n| self.context(n).is_some()).map(|n| n.as_str()).collect()
    }
}

/// Index of `r` among `labels`: a label match wins, otherwise an integer is
/// read as a 0-based index.
pub fn resolve(labels: &[String], r: &Ref) -> Option<usize> {
    let text = r.text();
    labels.iter().position(|l| *l == text).or(match r {
        Ref::Index(i) if *i < labels.len() => Some(*i),
        _ => None,
    })
}

type R<T> = Result<T, ElabErrorKind>;

struct Elaborator<'a, F: Field> {
    env: Environment<F>,
    opts: &'a ElabOptions,
}

impl<F: Field> Elaborator<'_, F> {
    fn k(&self) -> &F {
        &self.env.field
    }

    fn algebra(&self, n: &Name) -> R<Arc<Algebra<F>>> {
        self.env.algebra(&n.text).cloned().ok_or(ElabErrorKind::WrongKind { name: n.text.clone(), expected: "an algebra" })
    }

    fn morphism(&self, n: &Name) -> R<AlgebraMorphism<F>> {
        self.env.morphism(&n.text).cloned().ok_or(ElabErrorKind::WrongKind { name: n.text.clone(), expected: "a morphism" })
    }

    fn bimodule(&self, n: &Name) -> R<Bimodule<F>> {
        self.env.bimodule(&n.text).cloned().ok_or(ElabErrorKind::WrongKind { name: n.text.clone(), expected: "a bimodule" })
    }

    fn check_dim(&self, dim: usize) -> R<()> {
        if dim > self.opts.max_dim {
            return Err(ElabErrorKind::TooLarge { dim, max: self.opts.max_dim });
        }
        Ok(())
    }

    fn index(&self, labels: &[String], r: &Ref, of: &str) -> R<usize> {
        resolve(labels, r).ok_or_else(|| ElabErrorKind::UnknownBasis { label: r.text(), of: of.to_string() })
    }

    fn vector(&self, labels: &[String], c: &Combo, of: &str) -> R<Vector<F>> {
        let k = self.k();
        let mut v = zero_vec(k, labels.len());
        for t in &c.0 {
            let i = self.index(labels, &t.basis, of)?;
            let c = k.from_fraction(t.coef.numer(), t.coef.denom())?;
            v[i] = k.add(&v[i], &c);
        }
        Ok(v)
    }

    /// `table[i][j]` from `left * right = value` entries, zero elsewhere.
    fn table(
        &self,
        entries: &[Product],
        (rows, row_of): (&[String], &str),
        (cols, col_of): (&[String], &str),
        (out, out_of): (&[String], &str),
    ) -> R<Vec<Vec<Vector<F>>>> {
        let mut t = vec![vec![zero_vec(self.k(), out.len()); cols.len()]; rows.len()];
        let mut seen = vec![vec![false; cols.len()]; rows.len()];
        for p in entries {
            let i = self.index(rows, &p.left, row_of)?;
            let j = self.index(cols, &p.right, col_of)?;
            if std::mem::replace(&mut seen[i][j], true) {
                return Err(ElabErrorKind::DuplicateEntry(format!("{} * {}", p.left.text(), p.right.text())));
            }
            t[i][j] = self.vector(out, &p.value, out_of)?;
        }
        Ok(t)
    }

    fn labels_for(&self, dim: usize, basis: &Option<Vec<String>>) -> R<Vec<String>> {
        match basis {
            Some(b) if b.len() != dim => {
                Err(ElabErrorKind::Invalid(format!("basis has {} labels, dim is {dim}", b.len())))
            }
            Some(b) => Ok(b.clone()),
            None => Ok((0..dim).map(|i| i.to_string()).collect()),
        }
    }

    fn algebra_expr(&self, name: &str, e: &AlgebraExpr) -> R<Value<F>> {
        let k = self.k().clone();
        let mut inclusion = None;
        let a = match e {
            AlgebraExpr::StructConst { dim, basis, products, unit } => {
                self.check_dim(*dim)?;
                let labels = self.labels_for(*dim, basis)?;
                let t = self.table(products, (&labels, name), (&labels, name), (&labels, name))?;
                let table: Vec<SparseVec<F>> = t
                    .into_iter()
                    .flatten()
                    .map(|v| v.into_iter().enumerate().filter(|(_, x)| !k.is_zero(x)).collect())
                    .collect();
                let unit = self.vector(&labels, unit, name)?;
                Algebra::from_sparse(k, labels, table, unit)?
            }
            AlgebraExpr::Quiver(q) => elaborate_quiver(q, &k)?,
            AlgebraExpr::Ground => Algebra::ground(k),
            AlgebraExpr::Truncated { var, n } => {
                self.check_dim(*n)?;
                Algebra::truncated_polynomial(k, *n, var)
            }
            AlgebraExpr::MatrixAlg { base, n } => {
                let b = self.algebra(base)?;
                self.check_dim(b.dim().saturating_mul(n * n))?;
                matrix_algebra(&b, *n)
            }
            AlgebraExpr::Triangular { s, t, m } => {
                let (s, t, m) = (self.algebra(s)?, self.algebra(t)?, self.bimodule(m)?);
                if !m.left_algebra().same_structure(&s) || !m.right_algebra().same_structure(&t) {
                    return Err(ElabErrorKind::Invalid("the bimodule does not match the diagonal algebras".into()));
                }
                self.check_dim(s.dim() + m.dim() + t.dim())?;
                triangular_algebra(&s, &t, &m)?.algebra
            }
            AlgebraExpr::Product { a, b } => {
                let (a, b) = (self.algebra(a)?, self.algebra(b)?);
                self.check_dim(a.dim() + b.dim())?;
                product(&a, &b)
            }
            AlgebraExpr::Tensor { a, b } => {
                let (a, b) = (self.algebra(a)?, self.algebra(b)?);
                self.check_dim(a.dim().saturating_mul(b.dim()))?;
                tensor_product(&a, &b)
            }
            AlgebraExpr::Opposite { a } => self.algebra(a)?.opposite(),
            AlgebraExpr::Sub { parent, span } => {
                let p = self.algebra(parent)?;
                let vs = span.iter().map(|c| self.vector(p.labels(), c, &parent.text)).collect::<R<Vec<_>>>()?;
                let (sub, inc) = subalgebra_from_spanning(&p, &vs)?;
                inclusion = Some(inc);
                return Ok(Value::Algebra { algebra: sub, inclusion });
            }
        };
        self.check_dim(a.dim())?;
        Ok(Value::Algebra { algebra: Arc::new(a), inclusion })
    }

    fn morphism_expr(&self, source: &Name, target: &Name, e: &MorphismExpr) -> R<AlgebraMorphism<F>> {
        let (s, t) = (self.algebra(source)?, self.algebra(target)?);
        let k = self.k().clone();
        let m = match e {
            MorphismExpr::Images(images) => {
                let mut rows = vec![zero_vec(&k, t.dim()); s.dim()];
                let mut seen = vec![false; s.dim()];
                for (r, c) in images {
                    let i = self.index(s.labels(), r, &source.text)?;
                    if std::mem::replace(&mut seen[i], true) {
                        return Err(ElabErrorKind::DuplicateEntry(r.text()));
                    }
                    rows[i] = self.vector(t.labels(), c, &target.text)?;
                }
                AlgebraMorphism::new(s.clone(), t.clone(), Matrix::from_rows(k, t.dim(), &rows))?
            }
            MorphismExpr::Identity => {
                if !s.same_structure(&t) {
                    return Err(ElabErrorKind::Invalid("identity between different algebras".into()));
                }
                AlgebraMorphism::new(s.clone(), t.clone(), Matrix::identity(k, s.dim()))?
            }
            MorphismExpr::Inclusion => match self.env.get(&source.text) {
                Some(Value::Algebra { inclusion: Some(inc), .. }) if Arc::ptr_eq(&inc.target, &t) => inc.clone(),
                _ => {
                    return Err(ElabErrorKind::Invalid(format!(
                        "`{}` is not declared as a sub algebra of `{}`",
                        source.text, target.text
                    )))
                }
            },
            MorphismExpr::Compose { first, second } => {
                let (f, g) = (self.morphism(first)?, self.morphism(second)?);
                if !Arc::ptr_eq(&f.target, &g.source) {
                    return Err(ElabErrorKind::Invalid("the morphisms are not composable".into()));
                }
                f.then(&g)
            }
        };
        if !m.source.same_structure(&s) || !m.target.same_structure(&t) {
            return Err(ElabErrorKind::Invalid("declared source or target does not match".into()));
        }
        Ok(m)
    }

    fn bimodule_expr(&self, left: &Name, right: &Name, e: &BimoduleExpr) -> R<Bimodule<F>> {
        let (l, r) = (self.algebra(left)?, self.algebra(right)?);
        let k = self.k().clone();
        let b = match e {
            BimoduleExpr::Regular => {
                if !l.same_structure(&r) {
                    return Err(ElabErrorKind::Invalid("a regular bimodule needs equal sides".into()));
                }
                Bimodule::regular(l)
            }
            BimoduleExpr::Zero => Bimodule::zero(l, r),
            BimoduleExpr::Restrict { of, left: f, right: g } => {
                let (gamma, f, g) = (self.algebra(of)?, self.morphism(f)?, self.morphism(g)?);
                if !f.source.same_structure(&l) || !g.source.same_structure(&r) {
                    return Err(ElabErrorKind::Invalid("the morphisms do not start at the declared sides".into()));
                }
                if !f.target.same_structure(&gamma) || !g.target.same_structure(&gamma) {
                    return Err(ElabErrorKind::Invalid(format!("the morphisms do not end at `{}`", of.text)));
                }
                Bimodule::regular(gamma).restrict(&f, &g)?
            }
            BimoduleExpr::Actions { dim, basis, left: la, right: ra } => {
                self.check_dim(*dim)?;
                let labels = self.labels_for(*dim, basis)?;
                let lt = self.table(la, (l.labels(), &left.text), (&labels, "module"), (&labels, "module"))?;
                let rt = self.table(ra, (&labels, "module"), (r.labels(), &right.text), (&labels, "module"))?;
                let lm = lt.iter().map(|rows| Matrix::from_rows(k.clone(), *dim, rows)).collect();
                // right action of t_j: row i is m_i t_j
                let rm = (0..r.dim())
                    .map(|j| Matrix::from_rows(k.clone(), *dim, &rt.iter().map(|row| row[j].clone()).collect::<Vec<_>>()))
                    .collect();
                Bimodule::new(l, r, labels, lm, rm)?
            }
        };
        self.check_dim(b.dim())?;
        Ok(b)
    }

    fn element(&self, parent: &Name, value: &Combo) -> R<Vector<F>> {
        match self.env.get(&parent.text) {
            Some(Value::Algebra { algebra, .. }) => self.vector(algebra.labels(), value, &parent.text),
            Some(Value::Bimodule(b)) => self.vector(b.labels(), value, &parent.text),
            _ => Err(ElabErrorKind::WrongKind { name: parent.text.clone(), expected: "an algebra or a bimodule" }),
        }
    }

    fn context_expr(&self, e: &ContextExpr) -> R<ContextValue<F>> {
        let (context, kind) = match e {
            ContextExpr::Exact { lambda, mu, m, element } => {
                let (lambda, mu, bm) = (self.morphism(lambda)?, self.morphism(mu)?, self.bimodule(m)?);
                let v = match self.env.get(&element.text) {
                    Some(Value::Element { parent, coords }) if *parent == m.text => coords.clone(),
                    _ => {
                        return Err(ElabErrorKind::WrongKind {
                            name: element.text.clone(),
                            expected: "an element of the bimodule",
                        })
                    }
                };
                (check_exact_context(lambda, mu, bm, v)?, ContextKind::Exact)
            }
            ContextExpr::Trivial { r } => (trivial_context(self.algebra(r)?), ContextKind::Trivial),
            ContextExpr::Extension { lambda } => {
                let (ctx, data) = context_from_extension(&self.morphism(lambda)?)?;
                (ctx, ContextKind::Extension(Box::new(data)))
            }
            ContextExpr::Milnor { j1, j2 } => {
                (context_from_milnor(&self.morphism(j1)?, &self.morphism(j2)?)?, ContextKind::Milnor)
            }
            ContextExpr::Morita { a, c, x, y, f, g } => {
                let (an, cn, xn, yn) = (a, c, x, y);
                let (a, c, x, y) = (self.algebra(a)?, self.algebra(c)?, self.bimodule(x)?, self.bimodule(y)?);
                let ft = self.table(f, (x.labels(), &xn.text), (y.labels(), &yn.text), (a.labels(), &an.text))?;
                let gt = self.table(g, (y.labels(), &yn.text), (x.labels(), &xn.text), (c.labels(), &cn.text))?;
                let (ctx, data) = context_from_morita(a, c, x, y, ft, gt)?;
                (ctx, ContextKind::Morita(Box::new(data)))
            }
            ContextExpr::Pure { lambda, mu, x, y } => {
                let (lambda, mu) = (self.morphism(lambda)?, self.morphism(mu)?);
                let (s, t) = (lambda.target.clone(), mu.target.clone());
                let xs = x.iter().map(|c| self.vector(s.labels(), c, "S")).collect::<R<Vec<_>>>()?;
                let ys = y.iter().map(|c| self.vector(t.labels(), c, "T")).collect::<R<Vec<_>>>()?;
                let (ctx, data) = context_from_strictly_pure(lambda, mu, xs, ys)?;
                (ctx, ContextKind::Pure(Box::new(data)))
            }
        };
        self.check_dim(context.bimodule.dim())?;
        Ok(ContextValue { context, kind })
    }

    fn decl(&mut self, d: &Decl) -> R<Value<F>> {
        Ok(match &d.kind {
            DeclKind::Algebra(e) => self.algebra_expr(&d.name.text, e)?,
            DeclKind::Morphism { source, target, expr } => Value::Morphism(self.morphism_expr(source, target, expr)?),
            DeclKind::Bimodule { left, right, expr } => Value::Bimodule(self.bimodule_expr(left, right, expr)?),
            DeclKind::Element { parent, value } => {
                Value::Element { parent: parent.text.clone(), coords: self.element(parent, value)? }
            }
            DeclKind::Context(e) => Value::Context(Box::new(self.context_expr(e)?)),
        })
    }
}

/// Elaborates every declaration over `field`, stopping at the first error.
pub fn elaborate<F: Field>(file: &PresentationFile, field: F, opts: &ElabOptions) -> Result<Environment<F>, ElabError> {
    let mut el = Elaborator { env: Environment { field, order: Vec::new(), values: HashMap::new() }, opts };
    for d in &file.decls {
        let v = el.decl(d).map_err(|kind| ElabError {
            decl: d.name.text.clone(),
            line: d.pos.line,
            col: d.pos.col,
            kind,
        })?;
        el.env.order.push(d.name.text.clone());
        el.env.values.insert(d.name.text.clone(), v);
    }
    Ok(el.env)
}
