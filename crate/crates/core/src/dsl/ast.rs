//! Syntax tree of presentation files. Positions are 1-based line/column of
//! the first token of each item.

use num_rational::BigRational;

use crate::field::FieldSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A name together with where it was written.
#[derive(Debug, Clone)]
pub struct Name {
    pub text: String,
    pub pos: Pos,
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for Name {}

/// A basis element, written as a label or (when no label matches) a
/// 0-based index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ref {
    Index(usize),
    Label(String),
}

impl Ref {
    pub fn text(&self) -> String {
        match self {
            Ref::Index(i) => i.to_string(),
            Ref::Label(l) => l.clone(),
        }
    }
}

/// `coef · basis element`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: BigRational,
    pub basis: Ref,
}

/// A linear combination of basis elements; empty means zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Combo(pub Vec<Term>);

/// `left * right = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub left: Ref,
    pub right: Ref,
    pub value: Combo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A quiver with relations. Paths are arrow indices; `[a, b]` is "first a,
/// then b" and is written `a*b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverPresentation {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Vec<(BigRational, Vec<usize>)>>,
    pub length_bound: usize,
}

pub const DEFAULT_LENGTH_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraExpr {
    StructConst { dim: usize, basis: Option<Vec<String>>, products: Vec<Product>, unit: Combo },
    Quiver(QuiverPresentation),
    Ground,
    Truncated { var: String, n: usize },
    MatrixAlg { base: Name, n: usize },
    Triangular { s: Name, t: Name, m: Name },
    Product { a: Name, b: Name },
    Tensor { a: Name, b: Name },
    Opposite { a: Name },
    /// The subalgebra spanned by the given elements of `parent`.
    Sub { parent: Name, span: Vec<Combo> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismExpr {
    /// Images of source basis elements; missing ones map to zero.
    Images(Vec<(Ref, Combo)>),
    Identity,
    /// The inclusion of a `sub` algebra into its parent.
    Inclusion,
    Compose { first: Name, second: Name },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BimoduleExpr {
    Regular,
    Zero,
    /// `_S Γ_T` through `f: S → Γ` and `g: T → Γ`.
    Restrict { of: Name, left: Name, right: Name },
    /// Explicit actions: `left s * m = …` and `right m * t = …`; missing
    /// products are zero.
    Actions { dim: usize, basis: Option<Vec<String>>, left: Vec<Product>, right: Vec<Product> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextExpr {
    Exact { lambda: Name, mu: Name, m: Name, element: Name },
    Trivial { r: Name },
    Extension { lambda: Name },
    Morita { a: Name, c: Name, x: Name, y: Name, f: Vec<Product>, g: Vec<Product> },
    Pure { lambda: Name, mu: Name, x: Vec<Combo>, y: Vec<Combo> },
    Milnor { j1: Name, j2: Name },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclKind {
    Algebra(AlgebraExpr),
    Morphism { source: Name, target: Name, expr: MorphismExpr },
    Bimodule { left: Name, right: Name, expr: BimoduleExpr },
    Element { parent: Name, value: Combo },
    Context(ContextExpr),
}

#[derive(Debug, Clone)]
pub struct Decl {
    pub name: Name,
    pub kind: DeclKind,
    pub pos: Pos,
}

/// Positions are ignored.
impl PartialEq for Decl {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.kind == other.kind
    }
}

impl Eq for Decl {}

impl Decl {
    pub fn keyword(&self) -> &'static str {
        match self.kind {
            DeclKind::Algebra(_) => "algebra",
            DeclKind::Morphism { .. } => "morphism",
            DeclKind::Bimodule { .. } => "bimodule",
            DeclKind::Element { .. } => "element",
            DeclKind::Context(_) => "context",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PresentationFile {
    pub field: Option<FieldSpec>,
    pub decls: Vec<Decl>,
}

impl PresentationFile {
    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name.text == name)
    }

    pub fn names_of(&self, keyword: &str) -> Vec<&str> {
        self.decls.iter().filter(|d| d.keyword() == keyword).map(|d| d.name.text.as_str()).collect()
    }
}
