//! Finite-dimensional unital associative algebras given by structure
//! constants, their morphisms, and the standard constructors.

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::field::Field;
use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, Matrix, Subspace, Vector};
use crate::module::Bimodule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("unit law fails at basis element {index}")]
    BadUnit { index: usize },
    #[error("not associative: (b{i} b{j}) b{k} != b{i} (b{j} b{k})")]
    NonAssociative { i: usize, j: usize, k: usize },
    #[error("span is not closed under multiplication: v{i} v{j} leaves it")]
    NotClosed { i: usize, j: usize },
    #[error("span does not contain the unit")]
    UnitMissing,
    #[error("not an algebra morphism: {0}")]
    NotAMorphism(MorphismFailure),
    #[error("algebras are over different fields")]
    FieldMismatch,
    #[error("not a complete set of orthogonal idempotents: {0}")]
    BadIdempotents(String),
}

/// First failure found by [`AlgebraMorphism::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismFailure {
    Shape,
    Unit,
    Multiplicative { i: usize, j: usize },
}

impl std::fmt::Display for MorphismFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MorphismFailure::Shape => write!(f, "matrix has the wrong shape"),
            MorphismFailure::Unit => write!(f, "unit is not preserved"),
            MorphismFailure::Multiplicative { i, j } => {
                write!(f, "f(b{i} b{j}) != f(b{i}) f(b{j})")
            }
        }
    }
}

pub type SparseVec<F> = Vec<(usize, <F as Field>::Elem)>;

#[derive(Debug, Clone)]
pub struct Algebra<F: Field> {
    field: F,
    dim: usize,
    labels: Vec<String>,
    /// `table[i * dim + j]` = sparse coordinates of `b_i b_j`, sorted by index.
    table: Vec<SparseVec<F>>,
    unit: Vector<F>,
    /// Nonzero orthogonal idempotents summing to the unit. Resolutions
    /// cover by the summands `eR` instead of `R`; `[1]` when nothing finer
    /// is known.
    idempotents: Vec<Vector<F>>,
    generators: OnceLock<Vec<usize>>,
    refined: OnceLock<Vec<Vector<F>>>,
}

impl<F: Field> PartialEq for Algebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.same_structure(other)
    }
}

impl<F: Field> Eq for Algebra<F> {}

fn to_sparse<F: Field>(f: &F, v: &[F::Elem]) -> SparseVec<F> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !f.is_zero(x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

impl<F: Field> Algebra<F> {
    /// Builds an algebra from dense structure constants, `mult[i * dim + j]`
    /// being the coordinate vector of `b_i b_j`.
    pub fn new(
        field: F,
        labels: Vec<String>,
        mult: Vec<Vector<F>>,
        unit: Vector<F>,
    ) -> Result<Self, AlgebraError> {
        let dim = labels.len();
        if mult.len() != dim * dim || mult.iter().any(|v| v.len() != dim) {
            return Err(AlgebraError::Shape(format!(
                "expected {dim}x{dim} products of length {dim}"
            )));
        }
        let table = mult.iter().map(|v| to_sparse(&field, v)).collect();
        Self::from_sparse(field, labels, table, unit)
    }

    /// Like [`Algebra::new`] with sparse products. Entries may be unsorted
    /// and may repeat indices; they are normalized.
    pub fn from_sparse(
        field: F,
        labels: Vec<String>,
        table: Vec<SparseVec<F>>,
        unit: Vector<F>,
    ) -> Result<Self, AlgebraError> {
        let alg = Self::from_sparse_unchecked(field, labels, table, unit)?;
        alg.validate()?;
        Ok(alg)
    }

    /// For constructions that are algebras whenever their inputs are:
    /// normalizes without re-checking the axioms.
    pub(crate) fn from_sparse_trusted(
        field: F,
        labels: Vec<String>,
        table: Vec<SparseVec<F>>,
        unit: Vector<F>,
    ) -> Result<Self, AlgebraError> {
        Self::from_sparse_unchecked(field, labels, table, unit)
    }

    fn from_sparse_unchecked(
        field: F,
        labels: Vec<String>,
        table: Vec<SparseVec<F>>,
        unit: Vector<F>,
    ) -> Result<Self, AlgebraError> {
        let dim = labels.len();
        if table.len() != dim * dim || unit.len() != dim {
            return Err(AlgebraError::Shape(format!("expected {} products and unit of length {dim}", dim * dim)));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
        }
        let mut normalized = Vec::with_capacity(table.len());
        for entry in table {
            let mut dense: Vec<Option<F::Elem>> = vec![None; 0];
            let mut out: SparseVec<F> = Vec::with_capacity(entry.len());
            if entry.windows(2).all(|w| w[0].0 < w[1].0) {
                for (k, c) in entry {
                    if k >= dim {
                        return Err(AlgebraError::Shape(format!("index {k} out of range")));
                    }
                    if !field.is_zero(&c) {
                        out.push((k, c));
                    }
                }
            } else {
                dense.resize(dim, None);
                for (k, c) in entry {
                    if k >= dim {
                        return Err(AlgebraError::Shape(format!("index {k} out of range")));
                    }
                    dense[k] = Some(match dense[k].take() {
                        Some(old) => field.add(&old, &c),
                        None => c,
                    });
                }
                for (k, c) in dense.into_iter().enumerate() {
                    if let Some(c) = c {
                        if !field.is_zero(&c) {
                            out.push((k, c));
                        }
                    }
                }
            }
            normalized.push(out);
        }
        let idempotents = if dim == 0 { Vec::new() } else { vec![unit.clone()] };
        Ok(Algebra { field, dim, labels, table: normalized, unit, idempotents, generators: OnceLock::new(), refined: OnceLock::new() })
    }

    /// Unit law and associativity on all basis triples.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        let d = self.dim;
        for i in 0..d {
            let e = unit_vec(&self.field, d, i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(AlgebraError::BadUnit { index: i });
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = &self.table[i * d + j];
                for k in 0..d {
                    let mut lhs = zero_vec(&self.field, d);
                    for (l, c) in ij {
                        self.add_basis_product(&mut lhs, c, *l, k);
                    }
                    let mut rhs = zero_vec(&self.field, d);
                    for (l, c) in &self.table[j * d + k] {
                        self.add_basis_product(&mut rhs, c, i, *l);
                    }
                    if lhs != rhs {
                        return Err(AlgebraError::NonAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// `acc += c * b_i b_j`
    fn add_basis_product(&self, acc: &mut [F::Elem], c: &F::Elem, i: usize, j: usize) {
        for (k, x) in &self.table[i * self.dim + j] {
            self.field.add_mul_assign(&mut acc[*k], c, x);
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &Vector<F> {
        &self.unit
    }
    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec<F> {
        &self.table[i * self.dim + j]
    }

    pub fn basis_vector(&self, i: usize) -> Vector<F> {
        unit_vec(&self.field, self.dim, i)
    }

    pub fn zero(&self) -> Vector<F> {
        zero_vec(&self.field, self.dim)
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Same structure constants and unit, labels ignored.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.unit == other.unit
            && self.table == other.table
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self, AlgebraError> {
        if labels.len() != self.dim {
            return Err(AlgebraError::Shape("label count".into()));
        }
        let mut a = Self::from_sparse_unchecked(self.field.clone(), labels, self.table.clone(), self.unit.clone())?;
        a.idempotents = self.idempotents.clone();
        Ok(a)
    }

    pub fn idempotents(&self) -> &[Vector<F>] {
        &self.idempotents
    }

    /// A finer decomposition computed once by `refine` and cached.
    pub fn refined_idempotents(&self, refine: impl FnOnce(&Self) -> Vec<Vector<F>>) -> &[Vector<F>] {
        self.refined.get_or_init(|| refine(self))
    }

    /// Replaces the idempotent decomposition of the unit; zero entries are
    /// dropped.
    pub fn with_idempotents(mut self, es: Vec<Vector<F>>) -> Result<Self, AlgebraError> {
        let es: Vec<_> = es.into_iter().filter(|e| e.iter().any(|c| !self.field.is_zero(c))).collect();
        let bad = |m: String| Err(AlgebraError::BadIdempotents(m));
        if es.iter().any(|e| e.len() != self.dim) {
            return bad("wrong length".into());
        }
        let mut sum = self.zero();
        for (i, e) in es.iter().enumerate() {
            for (j, g) in es.iter().enumerate() {
                let p = self.mul(e, g);
                let expected = if i == j { e.clone() } else { self.zero() };
                if p != expected {
                    return bad(format!("e{i} e{j}"));
                }
            }
            axpy(&self.field, &mut sum, &self.field.one(), e);
        }
        if sum != self.unit {
            return bad("sum is not the unit".into());
        }
        self.idempotents = es;
        self.refined = OnceLock::new();
        Ok(self)
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
        let f = &self.field;
        let mut out = zero_vec(f, self.dim);
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let c = f.mul(x, y);
                self.add_basis_product(&mut out, &c, i, j);
            }
        }
        out
    }

    /// Matrix of `x ↦ a x` in the row convention (row `i` is `a b_i`).
    pub fn left_mult_matrix(&self, a: &[F::Elem]) -> Matrix<F> {
        let rows: Vec<_> = (0..self.dim).map(|i| self.mul(a, &self.basis_vector(i))).collect();
        Matrix::from_rows(self.field.clone(), self.dim, &rows)
    }

    /// Matrix of `x ↦ x a` in the row convention (row `i` is `b_i a`).
    pub fn right_mult_matrix(&self, a: &[F::Elem]) -> Matrix<F> {
        let rows: Vec<_> = (0..self.dim).map(|i| self.mul(&self.basis_vector(i), a)).collect();
        Matrix::from_rows(self.field.clone(), self.dim, &rows)
    }

    /// Right multiplication by a basis element, read off the table.
    pub fn right_basis_matrix(&self, j: usize) -> Matrix<F> {
        let mut m = Matrix::zero(self.field.clone(), self.dim, self.dim);
        for i in 0..self.dim {
            for (k, c) in self.basis_product(i, j) {
                m.set(i, *k, c.clone());
            }
        }
        m
    }

    /// Left multiplication by a basis element.
    pub fn left_basis_matrix(&self, j: usize) -> Matrix<F> {
        let mut m = Matrix::zero(self.field.clone(), self.dim, self.dim);
        for i in 0..self.dim {
            for (k, c) in self.basis_product(j, i) {
                m.set(i, *k, c.clone());
            }
        }
        m
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    pub fn is_central(&self, a: &[F::Elem]) -> bool {
        (0..self.dim).all(|i| {
            let b = self.basis_vector(i);
            self.mul(a, &b) == self.mul(&b, a)
        })
    }

    /// Basis indices generating the algebra: greedily adds each basis element
    /// not already in the subalgebra generated by the earlier choices.
    pub fn generators(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let f = &self.field;
            let mut gens: Vec<usize> = Vec::new();
            let mut span = Subspace::new(f.clone(), self.dim);
            span.insert(&self.unit);
            for i in 0..self.dim {
                if span.contains(&self.basis_vector(i)) {
                    continue;
                }
                gens.push(i);
                // close span under right multiplication by all chosen generators
                span.insert(&self.basis_vector(i));
                let mut frontier: Vec<Vector<F>> = span.basis().to_vec();
                while let Some(v) = frontier.pop() {
                    for &g in &gens {
                        let w = self.mul(&v, &self.basis_vector(g));
                        if span.insert(&w) {
                            frontier.push(w);
                        }
                    }
                }
                if span.is_full() {
                    break;
                }
            }
            gens
        })
    }

    pub fn opposite(&self) -> Self {
        let d = self.dim;
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                table.push(self.table[j * d + i].clone());
            }
        }
        Algebra {
            field: self.field.clone(),
            dim: d,
            labels: self.labels.clone(),
            table,
            unit: self.unit.clone(),
            idempotents: self.idempotents.clone(),
            generators: OnceLock::new(),
            refined: OnceLock::new(),
        }
    }

    /// The ground field as a 1-dimensional algebra.
    pub fn ground(field: F) -> Self {
        let one = field.one();
        Self::from_sparse(field.clone(), vec!["1".into()], vec![vec![(0, one.clone())]], vec![one])
            .expect("the field is an algebra")
    }

    /// `k[x]/(x^n)` with basis `1, x, …, x^{n-1}`, labels `1`, `x`, `x2`, …
    pub fn truncated_polynomial(field: F, n: usize, var: &str) -> Self {
        assert!(n >= 1);
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}{i}"),
            })
            .collect();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(if i + j < n { vec![(i + j, field.one())] } else { vec![] });
            }
        }
        let unit = unit_vec(&field, n, 0);
        Self::from_sparse(field, labels, table, unit).expect("truncated polynomial ring")
    }
}

/// `M_n(a)` with basis `E_ij ⊗ b_k` ordered by `(i, j, k)` and labels
/// `E{i}_{j}.{label}` (1-based matrix positions).
pub fn matrix_algebra<F: Field>(a: &Algebra<F>, n: usize) -> Algebra<F> {
    assert!(n >= 1);
    let d = a.dim;
    let f = &a.field;
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * d + k;
    let dim = n * n * d;
    let mut labels = Vec::with_capacity(dim);
    for i in 0..n {
        for j in 0..n {
            for l in &a.labels {
                labels.push(format!("E{}_{}.{}", i + 1, j + 1, l));
            }
        }
    }
    let mut table = vec![Vec::new(); dim * dim];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                for k in 0..d {
                    for m in 0..d {
                        let prod = a
                            .basis_product(k, m)
                            .iter()
                            .map(|(r, c)| (idx(i, l, *r), c.clone()))
                            .collect();
                        table[idx(i, j, k) * dim + idx(j, l, m)] = prod;
                    }
                }
            }
        }
    }
    let mut unit = zero_vec(f, dim);
    for i in 0..n {
        for k in 0..d {
            unit[idx(i, i, k)] = a.unit[k].clone();
        }
    }
    let idems = (0..n)
        .flat_map(|i| {
            a.idempotents.iter().map(move |e| {
                let mut v = zero_vec(f, dim);
                for k in 0..d {
                    v[idx(i, i, k)] = e[k].clone();
                }
                v
            })
        })
        .collect();
    Algebra::from_sparse_trusted(f.clone(), labels, table, unit)
        .and_then(|m| m.with_idempotents(idems))
        .expect("matrix algebra is associative")
}

/// The triangular algebra `(S M; 0 T)` with its block layout.
#[derive(Debug, Clone)]
pub struct Triangular<F: Field> {
    pub algebra: Algebra<F>,
    pub s_dim: usize,
    pub m_dim: usize,
    pub t_dim: usize,
    pub e1: Vector<F>,
    pub e2: Vector<F>,
}

impl<F: Field> Triangular<F> {
    pub fn s_offset(&self) -> usize {
        0
    }
    pub fn m_offset(&self) -> usize {
        self.s_dim
    }
    pub fn t_offset(&self) -> usize {
        self.s_dim + self.m_dim
    }

    /// `(s, x, t)` as a vector of the triangular algebra.
    pub fn assemble(&self, s: &[F::Elem], x: &[F::Elem], t: &[F::Elem]) -> Vector<F> {
        let mut v = Vec::with_capacity(self.algebra.dim);
        v.extend_from_slice(s);
        v.extend_from_slice(x);
        v.extend_from_slice(t);
        v
    }
}

/// `(S M; 0 T)`, basis order S, M, T, labels prefixed `s.`, `m.`, `t.`.
pub fn triangular_algebra<F: Field>(
    s: &Algebra<F>,
    t: &Algebra<F>,
    m: &Bimodule<F>,
) -> Result<Triangular<F>, AlgebraError> {
    if m.left_algebra().dim() != s.dim || m.right_algebra().dim() != t.dim {
        return Err(AlgebraError::Shape("bimodule does not match the diagonal algebras".into()));
    }
    Ok(block_triangular(s, t, m, ["s.", "m.", "t."]))
}

fn block_triangular<F: Field>(
    s: &Algebra<F>,
    t: &Algebra<F>,
    m: &Bimodule<F>,
    prefixes: [&str; 3],
) -> Triangular<F> {
    let f = s.field.clone();
    let (ds, dm, dt) = (s.dim, m.dim(), t.dim);
    let dim = ds + dm + dt;
    let (om, ot) = (ds, ds + dm);
    let mut labels: Vec<String> = Vec::with_capacity(dim);
    labels.extend(s.labels.iter().map(|l| format!("{}{l}", prefixes[0])));
    labels.extend(m.labels().iter().map(|l| format!("{}{l}", prefixes[1])));
    labels.extend(t.labels.iter().map(|l| format!("{}{l}", prefixes[2])));
    let mut table: Vec<SparseVec<F>> = vec![Vec::new(); dim * dim];
    for i in 0..ds {
        for j in 0..ds {
            table[i * dim + j] = s.basis_product(i, j).clone();
        }
        // s_i · x_a
        let l = m.left_matrix(i);
        for a in 0..dm {
            table[i * dim + om + a] = to_sparse(&f, l.row(a)).into_iter().map(|(k, c)| (om + k, c)).collect();
        }
    }
    for j in 0..dt {
        let r = m.right_matrix(j);
        for a in 0..dm {
            table[(om + a) * dim + ot + j] =
                to_sparse(&f, r.row(a)).into_iter().map(|(k, c)| (om + k, c)).collect();
        }
        for i in 0..dt {
            table[(ot + i) * dim + ot + j] =
                t.basis_product(i, j).iter().map(|(k, c)| (ot + k, c.clone())).collect();
        }
    }
    let mut e1 = zero_vec(&f, dim);
    e1[..ds].clone_from_slice(&s.unit);
    let mut e2 = zero_vec(&f, dim);
    e2[ot..].clone_from_slice(&t.unit);
    let mut unit = e1.clone();
    unit[ot..].clone_from_slice(&t.unit);
    let mut idems = Vec::new();
    for e in &s.idempotents {
        let mut v = zero_vec(&f, dim);
        v[..ds].clone_from_slice(e);
        idems.push(v);
    }
    for e in &t.idempotents {
        let mut v = zero_vec(&f, dim);
        v[ot..].clone_from_slice(e);
        idems.push(v);
    }
    let algebra = Algebra::from_sparse_trusted(f, labels, table, unit)
        .and_then(|a| a.with_idempotents(idems))
        .expect("triangular algebra is associative");
    Triangular { algebra, s_dim: ds, m_dim: dm, t_dim: dt, e1, e2 }
}

/// `a × b`, basis order a then b, labels prefixed `p1.`, `p2.`.
pub fn product<F: Field>(a: &Algebra<F>, b: &Algebra<F>) -> Algebra<F> {
    let zero = Bimodule::zero(Arc::new(a.clone()), Arc::new(b.clone()));
    block_triangular(a, b, &zero, ["p1.", "", "p2."]).algebra
}

/// `a ⊗_k b` with basis `a_i ⊗ b_j` ordered by `(i, j)`, labels `{ai}*{bj}`.
pub fn tensor_product<F: Field>(a: &Algebra<F>, b: &Algebra<F>) -> Algebra<F> {
    let (da, db) = (a.dim, b.dim);
    let f = a.field.clone();
    let dim = da * db;
    let mut labels = Vec::with_capacity(dim);
    for la in &a.labels {
        for lb in &b.labels {
            labels.push(format!("{la}*{lb}"));
        }
    }
    let mut table = Vec::with_capacity(dim * dim);
    for i1 in 0..da {
        for j1 in 0..db {
            for i2 in 0..da {
                for j2 in 0..db {
                    let mut out: SparseVec<F> = Vec::new();
                    for (ka, ca) in a.basis_product(i1, i2) {
                        for (kb, cb) in b.basis_product(j1, j2) {
                            out.push((ka * db + kb, f.mul(ca, cb)));
                        }
                    }
                    out.sort_by_key(|e| e.0);
                    table.push(out);
                }
            }
        }
    }
    let mut unit = zero_vec(&f, dim);
    for i in 0..da {
        for j in 0..db {
            unit[i * db + j] = f.mul(&a.unit[i], &b.unit[j]);
        }
    }
    let idems = a
        .idempotents
        .iter()
        .flat_map(|e| b.idempotents.iter().map(move |g| (e, g)))
        .map(|(e, g)| {
            let mut v = zero_vec(&f, dim);
            for i in 0..da {
                for j in 0..db {
                    v[i * db + j] = f.mul(&e[i], &g[j]);
                }
            }
            v
        })
        .collect();
    Algebra::from_sparse_trusted(f.clone(), labels, table, unit)
        .and_then(|t| t.with_idempotents(idems))
        .expect("tensor product is associative")
}

pub fn opposite<F: Field>(a: &Algebra<F>) -> Algebra<F> {
    a.opposite()
}

/// The subalgebra spanned by `vectors` with basis the RREF rows of the span.
pub fn subalgebra_from_spanning<F: Field>(
    a: &Arc<Algebra<F>>,
    vectors: &[Vector<F>],
) -> Result<(Arc<Algebra<F>>, AlgebraMorphism<F>), AlgebraError> {
    let f = a.field.clone();
    let span = Subspace::spanned_by(f.clone(), a.dim, vectors);
    let basis = span.basis();
    let pivots = span.pivots();
    let coords = |v: &[F::Elem]| -> Option<Vector<F>> {
        if span.contains(v) {
            Some(pivots.iter().map(|&p| v[p].clone()).collect())
        } else {
            None
        }
    };
    let n = basis.len();
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let p = a.mul(&basis[i], &basis[j]);
            let c = coords(&p).ok_or(AlgebraError::NotClosed { i, j })?;
            table.push(to_sparse(&f, &c));
        }
    }
    let unit = coords(&a.unit).ok_or(AlgebraError::UnitMissing)?;
    let labels = basis
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let nz: Vec<usize> = (0..v.len()).filter(|&k| !f.is_zero(&v[k])).collect();
            if nz.len() == 1 && f.is_one(&v[nz[0]]) {
                a.labels[nz[0]].clone()
            } else {
                format!("v{i}")
            }
        })
        .collect();
    let mut sub = Algebra::from_sparse(f.clone(), labels, table, unit)?;
    if let Some(idems) = a.idempotents.iter().map(|e| coords(e)).collect::<Option<Vec<_>>>() {
        sub = sub.with_idempotents(idems)?;
    }
    let sub = Arc::new(sub);
    let matrix = Matrix::from_rows(f, a.dim, basis);
    let inc = AlgebraMorphism::new(sub.clone(), a.clone(), matrix)?;
    Ok((sub, inc))
}

/// An element of an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement<F: Field> {
    pub parent: Arc<Algebra<F>>,
    pub coords: Vector<F>,
}

impl<F: Field> AlgebraElement<F> {
    pub fn new(parent: Arc<Algebra<F>>, coords: Vector<F>) -> Result<Self, AlgebraError> {
        if coords.len() != parent.dim {
            return Err(AlgebraError::Shape("element has wrong length".into()));
        }
        Ok(AlgebraElement { parent, coords })
    }

    pub fn mul(&self, other: &Self) -> Self {
        AlgebraElement { parent: self.parent.clone(), coords: self.parent.mul(&self.coords, &other.coords) }
    }

    pub fn is_idempotent(&self) -> bool {
        self.parent.mul(&self.coords, &self.coords) == self.coords
    }
}

/// A unital algebra morphism, `v ↦ v·matrix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMorphism<F: Field> {
    pub source: Arc<Algebra<F>>,
    pub target: Arc<Algebra<F>>,
    pub matrix: Matrix<F>,
}

/// Outcome of [`AlgebraMorphism::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub failure: Option<MorphismFailure>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl<F: Field> AlgebraMorphism<F> {
    pub fn new(
        source: Arc<Algebra<F>>,
        target: Arc<Algebra<F>>,
        matrix: Matrix<F>,
    ) -> Result<Self, AlgebraError> {
        let f = Self::new_unchecked(source, target, matrix);
        match f.check().failure {
            None => Ok(f),
            Some(e) => Err(AlgebraError::NotAMorphism(e)),
        }
    }

    pub fn new_unchecked(source: Arc<Algebra<F>>, target: Arc<Algebra<F>>, matrix: Matrix<F>) -> Self {
        AlgebraMorphism { source, target, matrix }
    }

    pub fn identity(a: Arc<Algebra<F>>) -> Self {
        let m = Matrix::identity(a.field.clone(), a.dim);
        AlgebraMorphism { source: a.clone(), target: a, matrix: m }
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vector<F> {
        self.matrix.vec_mul(v)
    }

    /// Images of the source idempotents: again orthogonal and summing to
    /// the unit, since the morphism is unital.
    pub fn image_idempotents(&self) -> Vec<Vector<F>> {
        self.source.idempotents.iter().map(|e| self.apply(e)).collect()
    }

    /// Unit preservation, then multiplicativity on basis pairs.
    pub fn check(&self) -> MorphismReport {
        let (s, t) = (&self.source, &self.target);
        if self.matrix.rows() != s.dim || self.matrix.cols() != t.dim {
            return MorphismReport { failure: Some(MorphismFailure::Shape) };
        }
        if self.apply(&s.unit) != t.unit {
            return MorphismReport { failure: Some(MorphismFailure::Unit) };
        }
        let f = &s.field;
        for i in 0..s.dim {
            let fi = self.matrix.row(i);
            for j in 0..s.dim {
                let mut lhs = zero_vec(f, t.dim);
                for (k, c) in s.basis_product(i, j) {
                    axpy(f, &mut lhs, c, self.matrix.row(*k));
                }
                let rhs = t.mul(fi, self.matrix.row(j));
                if lhs != rhs {
                    return MorphismReport { failure: Some(MorphismFailure::Multiplicative { i, j }) };
                }
            }
        }
        MorphismReport { failure: None }
    }

    /// First `self`, then `g`.
    pub fn then(&self, g: &Self) -> Self {
        AlgebraMorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            matrix: self.matrix.mul(&g.matrix),
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim
    }
    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim
    }

    /// A nonzero vector of the kernel, if any.
    pub fn kernel_witness(&self) -> Option<Vector<F>> {
        self.matrix.left_kernel().into_iter().next()
    }
}

pub fn is_zero_element<F: Field>(a: &Algebra<F>, v: &[F::Elem]) -> bool {
    is_zero_vec(&a.field, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn dual_numbers() -> Algebra<Rationals> {
        Algebra::truncated_polynomial(Rationals, 2, "x")
    }

    #[test]
    fn unvalidated_constructions_pass_the_axioms() {
        let a = dual_numbers();
        let m = matrix_algebra(&a, 2);
        m.validate().unwrap();
        tensor_product(&a, &m).validate().unwrap();
        product(&a, &m).validate().unwrap();
        let bi = Bimodule::regular(Arc::new(a.clone()));
        let tri = triangular_algebra(&a, &a, &bi).unwrap();
        tri.algebra.validate().unwrap();
        for alg in [&m, &tri.algebra] {
            assert!(alg.clone().with_idempotents(alg.idempotents().to_vec()).is_ok());
        }
        assert_eq!(m.idempotents().len(), 2);
        assert_eq!(tri.algebra.idempotents().len(), 2);
    }

    #[test]
    fn bad_idempotents_are_rejected() {
        let m = matrix_algebra(&Algebra::ground(Rationals), 2);
        let e11 = m.basis_vector(0);
        assert!(matches!(m.clone().with_idempotents(vec![e11.clone()]), Err(AlgebraError::BadIdempotents(_))));
        assert!(matches!(m.with_idempotents(vec![e11.clone(), e11]), Err(AlgebraError::BadIdempotents(_))));
    }

    #[test]
    fn ground_field_and_dual_numbers() {
        let k = Algebra::ground(Rationals);
        assert_eq!(k.dim(), 1);
        let a = dual_numbers();
        let x = a.basis_vector(1);
        assert!(is_zero_element(&a, &a.mul(&x, &x)));
        assert!(a.is_commutative());
    }

    #[test]
    fn bad_unit_detected() {
        let q = Rationals;
        let one = q.one();
        let zero = q.zero();
        // basis {1, x} with x·x = 1 but unit declared as x
        let mult = vec![
            vec![one.clone(), zero.clone()],
            vec![zero.clone(), one.clone()],
            vec![zero.clone(), one.clone()],
            vec![one.clone(), zero.clone()],
        ];
        let err = Algebra::new(q, vec!["1".into(), "x".into()], mult, vec![zero, one]).unwrap_err();
        assert!(matches!(err, AlgebraError::BadUnit { .. }));
    }

    #[test]
    fn non_associative_detected() {
        let q = Rationals;
        let (o, z) = (q.one(), q.zero());
        // 1, a, b with a·a = b, b·a = 0, a·b = a: (aa)a = ba = 0, a(aa) = ab = a
        let v = |x: &[i64]| x.iter().map(|&n| q.from_i64(n)).collect::<Vec<_>>();
        let mult = vec![
            v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1]),
            v(&[0, 1, 0]), v(&[0, 0, 1]), v(&[0, 1, 0]),
            v(&[0, 0, 1]), v(&[0, 0, 0]), v(&[0, 0, 0]),
        ];
        let err = Algebra::new(q, vec!["1".into(), "a".into(), "b".into()], mult, vec![o, z.clone(), z]).unwrap_err();
        assert!(matches!(err, AlgebraError::NonAssociative { .. }));
    }

    #[test]
    fn matrix_units() {
        let k = Algebra::ground(Rationals);
        let m2 = matrix_algebra(&k, 2);
        assert_eq!(m2.dim(), 4);
        let e12 = m2.label_index("E1_2.1").unwrap();
        let e21 = m2.label_index("E2_1.1").unwrap();
        let e11 = m2.label_index("E1_1.1").unwrap();
        assert_eq!(m2.basis_product(e12, e21), &vec![(e11, Rationals.one())]);
        let m1 = matrix_algebra(&dual_numbers(), 1);
        assert!(m1.same_structure(&dual_numbers()));
        assert_eq!(matrix_algebra(&dual_numbers(), 3).dim(), 18);
    }

    #[test]
    fn triangular_with_zero_module_is_product() {
        let a = Arc::new(dual_numbers());
        let b = Arc::new(Algebra::ground(Rationals));
        let zero = Bimodule::zero(a.clone(), b.clone());
        let tri = triangular_algebra(&a, &b, &zero).unwrap();
        assert!(tri.algebra.same_structure(&product(&a, &b)));
        assert!(tri.algebra.mul(&tri.e1, &tri.e1) == tri.e1);
        assert!(is_zero_element(&tri.algebra, &tri.algebra.mul(&tri.e1, &tri.e2)));
    }

    #[test]
    fn opposite_is_involution() {
        let m2 = matrix_algebra(&dual_numbers(), 2);
        assert_eq!(m2.opposite().opposite(), m2);
        assert_eq!(dual_numbers().opposite(), dual_numbers());
    }

    #[test]
    fn upper_triangular_subalgebra() {
        let k = Algebra::ground(Rationals);
        let m2 = Arc::new(matrix_algebra(&k, 2));
        let span: Vec<_> = ["E1_1.1", "E1_2.1", "E2_2.1"]
            .iter()
            .map(|l| m2.basis_vector(m2.label_index(l).unwrap()))
            .collect();
        let (sub, inc) = subalgebra_from_spanning(&m2, &span).unwrap();
        assert_eq!(sub.dim(), 3);
        assert!(inc.check().passed());
        let e12 = m2.basis_vector(m2.label_index("E1_2.1").unwrap());
        let e21 = m2.basis_vector(m2.label_index("E2_1.1").unwrap());
        let err = subalgebra_from_spanning(&m2, &[m2.unit().clone(), e12.clone(), e21]).unwrap_err();
        assert!(matches!(err, AlgebraError::NotClosed { .. }));
        let err = subalgebra_from_spanning(&m2, &[e12]).unwrap_err();
        assert_eq!(err, AlgebraError::UnitMissing);
    }

    #[test]
    fn morphism_checks() {
        let a = Arc::new(dual_numbers());
        assert!(AlgebraMorphism::identity(a.clone()).check().passed());
        let z = AlgebraMorphism::new_unchecked(a.clone(), a.clone(), Matrix::zero(Rationals, 2, 2));
        assert_eq!(z.check().failure, Some(MorphismFailure::Unit));
    }

    #[test]
    fn generators_of_matrix_algebra() {
        let f = PrimeField::new(101).unwrap();
        let m3 = matrix_algebra(&Algebra::ground(f), 3);
        let gens = m3.generators().to_vec();
        assert!(gens.len() < m3.dim());
        // the generated subalgebra is everything
        let mut span = Subspace::new(f, m3.dim());
        span.insert(m3.unit());
        let mut frontier = span.basis().to_vec();
        for &g in &gens {
            if span.insert(&m3.basis_vector(g)) {
                frontier.push(m3.basis_vector(g));
            }
        }
        while let Some(v) = frontier.pop() {
            for &g in &gens {
                let w = m3.mul(&v, &m3.basis_vector(g));
                if span.insert(&w) {
                    frontier.push(w);
                }
            }
        }
        assert!(span.is_full());
    }

    #[test]
    fn tensor_product_dims() {
        let a = dual_numbers();
        let t = tensor_product(&a, &a);
        assert_eq!(t.dim(), 4);
        assert!(t.is_commutative());
    }
}
