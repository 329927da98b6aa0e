//! Finite-dimensional modules and bimodules over structure-constant
//! algebras, Hom spaces, endomorphism algebras and tensor products.
//!
//! Every action is stored as matrices in the row convention: for a right
//! module `action[i]` is the matrix of `x ↦ x·b_i`, for a left module the
//! matrix of `x ↦ b_i·x`. A module homomorphism `h: X → Y` is a
//! `dim X × dim Y` matrix, and the composite "first `h`, then `g`" is the
//! product `h·g`. This is the only place where the order of composition is
//! fixed; everything else goes through matrix products.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, AlgebraMorphism};
use crate::field::Field;
use crate::linalg::{
    axpy, quotient_space, unit_vec, zero_vec, Basis, Matrix, QuotientPresentation, Subspace, Vector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("modules live over different algebras or sides")]
    AlgebraMismatch,
    #[error("action matrices have the wrong shape")]
    Shape,
    #[error("the unit does not act as the identity")]
    UnitAction,
    #[error("{side} action is not compatible with the product b{i} b{j}")]
    NotAModule { side: Side, i: usize, j: usize },
    #[error("left action of s{i} and right action of t{j} do not commute")]
    NotCommuting { i: usize, j: usize },
    #[error("subspace is not stable: spanning vector {vector} leaves it under b{generator}")]
    NotStable { vector: usize, generator: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module<F: Field> {
    algebra: Arc<Algebra<F>>,
    side: Side,
    dim: usize,
    action: Vec<Matrix<F>>,
}

fn same_algebra<F: Field>(a: &Arc<Algebra<F>>, b: &Arc<Algebra<F>>) -> bool {
    Arc::ptr_eq(a, b) || a.same_structure(b)
}

/// Sum of `c_i A_i` over the nonzero coordinates of `v`.
fn combine<F: Field>(f: &F, dim: usize, mats: &[Matrix<F>], v: &[F::Elem]) -> Matrix<F> {
    let mut out = Matrix::zero(f.clone(), dim, dim);
    for (c, m) in v.iter().zip(mats) {
        out.add_scaled_assign(c, m);
    }
    out
}

/// Module law for one side: `first` is the matrix that is applied first.
fn check_law<F: Field>(
    algebra: &Algebra<F>,
    side: Side,
    dim: usize,
    action: &[Matrix<F>],
) -> Result<(), ModuleError> {
    let f = algebra.field();
    let d = algebra.dim();
    if action.len() != d || action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
        return Err(ModuleError::Shape);
    }
    if combine(f, dim, action, algebra.unit()) != Matrix::identity(f.clone(), dim) {
        return Err(ModuleError::UnitAction);
    }
    for i in 0..d {
        for j in 0..d {
            let mut prod = Matrix::zero(f.clone(), dim, dim);
            for (k, c) in algebra.basis_product(i, j) {
                prod.add_scaled_assign(c, &action[*k]);
            }
            let composite = match side {
                Side::Right => action[i].mul(&action[j]),
                Side::Left => action[j].mul(&action[i]),
            };
            if prod != composite {
                return Err(ModuleError::NotAModule { side, i, j });
            }
        }
    }
    Ok(())
}

impl<F: Field> Module<F> {
    pub fn new(algebra: Arc<Algebra<F>>, side: Side, dim: usize, action: Vec<Matrix<F>>) -> Result<Self, ModuleError> {
        check_law(&algebra, side, dim, &action)?;
        Ok(Module { algebra, side, dim, action })
    }

    pub fn new_unchecked(algebra: Arc<Algebra<F>>, side: Side, dim: usize, action: Vec<Matrix<F>>) -> Self {
        Module { algebra, side, dim, action }
    }

    /// The algebra acting on itself by multiplication on the given side.
    pub fn regular(algebra: Arc<Algebra<F>>, side: Side) -> Self {
        let d = algebra.dim();
        let action = (0..d)
            .map(|i| match side {
                Side::Right => algebra.right_basis_matrix(i),
                Side::Left => algebra.left_basis_matrix(i),
            })
            .collect();
        Module { algebra, side, dim: d, action }
    }

    /// The free module of rank `n`, as `n` stacked copies of the regular
    /// module.
    pub fn free(algebra: Arc<Algebra<F>>, side: Side, n: usize) -> Self {
        let reg = Self::regular(algebra.clone(), side);
        let mut out = Self::zero(algebra, side);
        for _ in 0..n {
            out = out.direct_sum(&reg).expect("same algebra");
        }
        out
    }

    pub fn zero(algebra: Arc<Algebra<F>>, side: Side) -> Self {
        let f = algebra.field().clone();
        let action = vec![Matrix::zero(f, 0, 0); algebra.dim()];
        Module { algebra, side, dim: 0, action }
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }
    pub fn side(&self) -> Side {
        self.side
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn field(&self) -> &F {
        self.algebra.field()
    }
    pub fn action(&self, i: usize) -> &Matrix<F> {
        &self.action[i]
    }
    pub fn actions(&self) -> &[Matrix<F>] {
        &self.action
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn action_of(&self, r: &[F::Elem]) -> Matrix<F> {
        combine(self.field(), self.dim, &self.action, r)
    }

    pub fn check(&self) -> Result<(), ModuleError> {
        check_law(&self.algebra, self.side, self.dim, &self.action)
    }

    /// Reinterprets a right `R`-module as a left `R^op`-module and vice versa.
    pub fn to_opposite(&self) -> Self {
        Module {
            algebra: Arc::new(self.algebra.opposite()),
            side: self.side.flip(),
            dim: self.dim,
            action: self.action.clone(),
        }
    }

    /// Restriction of scalars along `f: R' → R`.
    pub fn restrict(&self, f: &AlgebraMorphism<F>) -> Result<Self, ModuleError> {
        if !same_algebra(&f.target, &self.algebra) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let action = (0..f.source.dim()).map(|i| self.action_of(f.matrix.row(i))).collect();
        Ok(Module { algebra: f.source.clone(), side: self.side, dim: self.dim, action })
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, ModuleError> {
        if self.side != other.side || !same_algebra(&self.algebra, &other.algebra) {
            return Err(ModuleError::AlgebraMismatch);
        }
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.direct_sum(b)).collect();
        Ok(Module { algebra: self.algebra.clone(), side: self.side, dim: self.dim + other.dim, action })
    }

    /// Whether the span of `vectors` is a submodule; the error names the
    /// first spanning vector that leaves it.
    pub fn check_stable(&self, vectors: &[Vector<F>]) -> Result<Subspace<F>, ModuleError> {
        let span = Subspace::spanned_by(self.field().clone(), self.dim, vectors);
        for &g in self.algebra.generators() {
            for (idx, w) in span.basis().iter().enumerate() {
                if !span.contains(&self.act(w, g)) {
                    return Err(ModuleError::NotStable { vector: idx, generator: g });
                }
            }
        }
        Ok(span)
    }

    /// `self / span(sub)`, with the quotient presentation of the underlying
    /// spaces.
    pub fn quotient_module(&self, sub: &[Vector<F>]) -> Result<(Self, QuotientPresentation<F>), ModuleError> {
        self.check_stable(sub)?;
        let qp = quotient_space(self.field().clone(), self.dim, sub);
        let action = self.action.iter().map(|a| qp.section.mul(a).mul(&qp.projection)).collect();
        let q = Module { algebra: self.algebra.clone(), side: self.side, dim: qp.dim(), action };
        Ok((q, qp))
    }

    /// A submodule with the given basis (which must span a stable subspace).
    pub fn submodule(&self, basis: Vec<Vector<F>>) -> Result<(Self, Matrix<F>), ModuleError> {
        let f = self.field().clone();
        let n = basis.len();
        let inc = Matrix::from_rows(f.clone(), self.dim, &basis);
        let coords = Basis::new(f, self.dim, basis).ok_or(ModuleError::Shape)?;
        let mut action = Vec::with_capacity(self.action.len());
        for (g, a) in self.action.iter().enumerate() {
            let mut rows = Vec::with_capacity(n);
            for (vi, v) in coords.vectors().iter().enumerate() {
                let w = a.vec_mul(v);
                rows.push(coords.coords(&w).ok_or(ModuleError::NotStable { vector: vi, generator: g })?);
            }
            action.push(Matrix::from_rows(self.field().clone(), n, &rows));
        }
        Ok((Module { algebra: self.algebra.clone(), side: self.side, dim: n, action }, inc))
    }

    /// Whether `h` (a `dim × other.dim` matrix) commutes with the actions.
    pub fn is_homomorphism(&self, other: &Self, h: &Matrix<F>) -> bool {
        self.algebra
            .generators()
            .iter()
            .all(|&g| self.action[g].mul(h) == h.mul(&other.action[g]))
    }
}

/// Anything an algebra acts on from one side through `act`.
pub trait Action<F: Field> {
    fn algebra(&self) -> &Arc<Algebra<F>>;
    fn dim(&self) -> usize;
    /// `x·b_i` for a right action, `b_i·x` for a left one.
    fn act(&self, x: &[F::Elem], i: usize) -> Vector<F>;

    /// `x·r` or `r·x` for an arbitrary element `r`.
    fn act_by(&self, x: &[F::Elem], r: &[F::Elem]) -> Vector<F> {
        let f = self.algebra().field().clone();
        let mut out = zero_vec(&f, self.dim());
        for (i, c) in r.iter().enumerate().filter(|(_, c)| !f.is_zero(c)) {
            axpy(&f, &mut out, c, &self.act(x, i));
        }
        out
    }

    /// `act_by` on many vectors with the same element.
    fn act_by_all(&self, xs: &[Vector<F>], r: &[F::Elem]) -> Vec<Vector<F>> {
        xs.iter().map(|x| self.act_by(x, r)).collect()
    }

    /// Adds `v` and everything it generates to `span`.
    fn close_into(&self, span: &mut Subspace<F>, v: &[F::Elem]) {
        if !span.insert(v) {
            return;
        }
        let gens = self.algebra().generators();
        let mut frontier = vec![v.to_vec()];
        while let Some(w) = frontier.pop() {
            for &g in gens {
                let u = self.act(&w, g);
                if span.insert(&u) {
                    frontier.push(u);
                }
            }
        }
    }

    /// The submodule generated by `vectors`.
    fn submodule_span(&self, vectors: &[Vector<F>]) -> Subspace<F> {
        let mut span = Subspace::new(self.algebra().field().clone(), self.dim());
        for v in vectors {
            self.close_into(&mut span, v);
        }
        span
    }

    /// Module generators chosen greedily among `candidates`.
    fn generators_among(&self, candidates: &[Vector<F>]) -> Vec<Vector<F>> {
        self.pick_among(candidates).into_iter().map(|k| candidates[k].clone()).collect()
    }

    /// Indices of [`Action::generators_among`].
    fn pick_among(&self, candidates: &[Vector<F>]) -> Vec<usize> {
        let mut span = Subspace::new(self.algebra().field().clone(), self.dim());
        let mut picked = Vec::new();
        for (k, v) in candidates.iter().enumerate() {
            if span.dim() == self.dim() {
                break;
            }
            if span.contains(v) {
                continue;
            }
            picked.push(k);
            self.close_into(&mut span, v);
        }
        picked
    }

    /// Module generators chosen greedily among the standard basis vectors.
    fn generators(&self) -> Vec<Vector<F>> {
        let f = self.algebra().field();
        let cands: Vec<_> = (0..self.dim()).map(|i| unit_vec(f, self.dim(), i)).collect();
        self.generators_among(&cands)
    }

    /// Indices of candidates whose images generate `X / X·J` irredundantly,
    /// where `spanning` spans `X` and `radical` spans the ideal `J`. They
    /// generate `X` whenever `J` is nilpotent; candidates of the form `v·e`
    /// with `e` primitive give a minimal number of generators.
    fn pick_mod(&self, spanning: &[Vector<F>], candidates: &[Vector<F>], radical: &[Vector<F>]) -> Vec<usize> {
        let f = self.algebra().field().clone();
        let mut span = Subspace::new(f, self.dim());
        for j in radical {
            for w in self.act_by_all(spanning, j) {
                span.insert(&w);
            }
        }
        let mut picked = Vec::new();
        for (k, v) in candidates.iter().enumerate() {
            if span.dim() == self.dim() {
                break;
            }
            if !span.contains(v) {
                picked.push(k);
                self.close_into(&mut span, v);
            }
        }
        picked
    }

    /// The cover `R^n → X` for the given generators: row `(j, l)` is the
    /// image of `e_j ⊗ b_l`.
    fn cover_matrix(&self, generators: &[Vector<F>]) -> Matrix<F> {
        let d = self.algebra().dim();
        let mut rows = Vec::with_capacity(generators.len() * d);
        for g in generators {
            for l in 0..d {
                rows.push(self.act(g, l));
            }
        }
        Matrix::from_rows(self.algebra().field().clone(), self.dim(), &rows)
    }
}

impl<F: Field> Action<F> for Module<F> {
    fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn act(&self, x: &[F::Elem], i: usize) -> Vector<F> {
        self.action[i].vec_mul(x)
    }
    fn act_by_all(&self, xs: &[Vector<F>], r: &[F::Elem]) -> Vec<Vector<F>> {
        let m = self.action_of(r);
        xs.iter().map(|x| m.vec_mul(x)).collect()
    }
}

/// The free module `R^n` without materialized action matrices: vectors have
/// length `n·d`, block `j` holding the `j`-th component.
#[derive(Debug, Clone)]
pub struct FreeModule<F: Field> {
    regular: Module<F>,
    rank: usize,
}

impl<F: Field> FreeModule<F> {
    pub fn new(algebra: Arc<Algebra<F>>, side: Side, rank: usize) -> Self {
        FreeModule { regular: Module::regular(algebra, side), rank }
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn side(&self) -> Side {
        self.regular.side
    }
}

impl<F: Field> Action<F> for FreeModule<F> {
    fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.regular.algebra
    }
    fn dim(&self) -> usize {
        self.rank * self.regular.dim
    }
    fn act(&self, x: &[F::Elem], i: usize) -> Vector<F> {
        let d = self.regular.dim;
        let mut out = Vec::with_capacity(x.len());
        if d == 0 {
            return out;
        }
        for block in x.chunks(d) {
            out.extend(self.regular.action[i].vec_mul(block));
        }
        out
    }
    fn act_by(&self, x: &[F::Elem], r: &[F::Elem]) -> Vector<F> {
        let d = self.regular.dim;
        let alg = &self.regular.algebra;
        let mut out = Vec::with_capacity(x.len());
        if d == 0 {
            return out;
        }
        for block in x.chunks(d) {
            out.extend(match self.regular.side {
                Side::Right => alg.mul(block, r),
                Side::Left => alg.mul(r, block),
            });
        }
        out
    }
}

/// A surjection from a free module onto a module together with module
/// generators of its kernel.
#[derive(Debug, Clone)]
pub struct Presentation<F: Field> {
    /// Images of the free generators.
    pub generators: Vec<Vector<F>>,
    /// `(n·d) × dim` matrix of the cover `R^n → X`, row `(j, l)` = image of `e_j ⊗ b_l`.
    pub cover: Matrix<F>,
    /// Module generators of the kernel, as vectors of `R^n`.
    pub relations: Vec<Vector<F>>,
    /// Basis of the kernel as a vector space.
    pub kernel_basis: Vec<Vector<F>>,
}

impl<F: Field> Presentation<F> {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

impl<F: Field> Module<F> {
    /// Presentation with the given generators, which must generate.
    pub fn presentation_with(&self, generators: Vec<Vector<F>>) -> Presentation<F> {
        let cover = self.cover_matrix(&generators);
        let kernel_basis = cover.left_kernel();
        let free = FreeModule::new(self.algebra.clone(), self.side, generators.len());
        let relations = free.generators_among(&kernel_basis);
        Presentation { generators, cover, relations, kernel_basis }
    }

    pub fn presentation(&self) -> Presentation<F> {
        self.presentation_with(self.generators())
    }
}

/// Intertwiners `X → Y`.
#[derive(Debug, Clone)]
pub struct HomSpace<F: Field> {
    pub source: Module<F>,
    pub target: Module<F>,
    pub basis: Vec<Matrix<F>>,
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The basis matrices flattened row-major, for coordinate computations.
    pub fn flattened(&self) -> Vec<Vector<F>> {
        self.basis.iter().map(|m| m.data().to_vec()).collect()
    }
}

/// Basis of `Hom(x, y)`, computed from a presentation of `x`: a
/// homomorphism is determined by the images `y_j` of the generators, and
/// those are constrained exactly by the relations.
pub fn hom_space<F: Field>(x: &Module<F>, y: &Module<F>) -> Result<HomSpace<F>, ModuleError> {
    if x.side != y.side || !same_algebra(&x.algebra, &y.algebra) {
        return Err(ModuleError::AlgebraMismatch);
    }
    let f = x.field().clone();
    let d = x.algebra.dim();
    let (dx, dy) = (x.dim, y.dim);
    if dx == 0 || dy == 0 {
        return Ok(HomSpace { source: x.clone(), target: y.clone(), basis: Vec::new() });
    }
    let pres = x.presentation();
    let n = pres.rank();
    let m = pres.relations.len();
    // Φ: y^n → y^m, block (j, p) = Σ_l k^{(p)}_{j,l} B_l
    let mut phi = Matrix::zero(f.clone(), n * dy, m.max(1) * dy);
    for (p, k) in pres.relations.iter().enumerate() {
        for j in 0..n {
            let block = y.action_of(&k[j * d..(j + 1) * d]);
            phi.write_block(j * dy, p * dy, &block);
        }
    }
    let solutions = if m == 0 {
        (0..n * dy).map(|i| unit_vec(&f, n * dy, i)).collect()
    } else {
        phi.left_kernel()
    };
    // preimages of the standard basis of x under the cover
    let pre = pres
        .cover
        .solve_left_matrix(&Matrix::identity(f.clone(), dx))
        .expect("generators generate");
    let basis = solutions
        .iter()
        .map(|ys| {
            let mut psi_rows = Vec::with_capacity(n * d);
            for j in 0..n {
                let yj = &ys[j * dy..(j + 1) * dy];
                for l in 0..d {
                    psi_rows.push(y.act(yj, l));
                }
            }
            pre.mul(&Matrix::from_rows(f.clone(), dy, &psi_rows))
        })
        .collect();
    Ok(HomSpace { source: x.clone(), target: y.clone(), basis })
}

/// `End(x)` with product "first `a`, then `b`" = `a·b`, and the matrices
/// corresponding to its basis.
pub fn end_algebra<F: Field>(x: &Module<F>) -> (Arc<Algebra<F>>, Vec<Matrix<F>>) {
    let hom = hom_space(x, x).expect("same module");
    let f = x.field().clone();
    let n = hom.dim();
    let coords = Basis::new(f.clone(), x.dim * x.dim, hom.flattened()).expect("basis is independent");
    let mut table = Vec::with_capacity(n * n);
    for a in &hom.basis {
        for b in &hom.basis {
            let c = coords.coords(a.mul(b).data()).expect("End is closed under composition");
            table.push(c.into_iter().enumerate().collect());
        }
    }
    let unit = coords
        .coords(Matrix::identity(f.clone(), x.dim).data())
        .expect("identity is an endomorphism");
    let labels = (0..n).map(|i| format!("h{i}")).collect();
    let alg = Algebra::from_sparse(f, labels, table, unit).expect("End is an algebra");
    (Arc::new(alg), hom.basis)
}

/// `t ⊗_R s` as a quotient of `t ⊗_k s`; the basis vector `t_i ⊗ s_j` has
/// index `i * dim s + j`. Relations are imposed only for algebra
/// generators, which suffices.
pub fn tensor_over<F: Field>(t: &Module<F>, s: &Module<F>) -> Result<QuotientPresentation<F>, ModuleError> {
    if t.side != Side::Right || s.side != Side::Left || !same_algebra(&t.algebra, &s.algebra) {
        return Err(ModuleError::AlgebraMismatch);
    }
    let f = t.field().clone();
    let (dt, ds) = (t.dim, s.dim);
    let n = dt * ds;
    let mut rels = Subspace::new(f.clone(), n);
    for &g in t.algebra.generators() {
        let (tg, sg) = (&t.action[g], &s.action[g]);
        for i in 0..dt {
            for j in 0..ds {
                if rels.is_full() {
                    break;
                }
                let mut v = zero_vec(&f, n);
                for a in 0..dt {
                    let c = tg.get(i, a);
                    if !f.is_zero(c) {
                        v[a * ds + j] = f.add(&v[a * ds + j], c);
                    }
                }
                for b in 0..ds {
                    let c = sg.get(j, b);
                    if !f.is_zero(c) {
                        v[i * ds + b] = f.sub(&v[i * ds + b], c);
                    }
                }
                rels.insert(&v);
            }
        }
    }
    Ok(crate::linalg::quotient_of(rels))
}

/// `dim(t ⊗_R s)` via a presentation of `t`: the cokernel of
/// `relations ⊗ s → s^n`.
pub fn tensor_dim<F: Field>(t: &Module<F>, s: &Module<F>) -> Result<usize, ModuleError> {
    if t.side != Side::Right || s.side != Side::Left || !same_algebra(&t.algebra, &s.algebra) {
        return Err(ModuleError::AlgebraMismatch);
    }
    let pres = t.presentation();
    Ok(pres.rank() * s.dim - relation_map(&pres.relations, pres.rank(), s).rank())
}

/// The map `s^m → s^n` induced by relations `k^{(p)} ∈ R^n`.
pub(crate) fn relation_map<F: Field>(relations: &[Vector<F>], n: usize, s: &Module<F>) -> Matrix<F> {
    let d = s.algebra.dim();
    let ds = s.dim;
    let mut m = Matrix::zero(s.field().clone(), relations.len() * ds, n * ds);
    for (p, k) in relations.iter().enumerate() {
        for j in 0..n {
            let block = s.action_of(&k[j * d..(j + 1) * d]);
            m.write_block(p * ds, j * ds, &block);
        }
    }
    m
}

/// A bimodule `_S M_T` with commuting actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule<F: Field> {
    left: Arc<Algebra<F>>,
    right: Arc<Algebra<F>>,
    dim: usize,
    labels: Vec<String>,
    left_action: Vec<Matrix<F>>,
    right_action: Vec<Matrix<F>>,
    pub distinguished: Option<Vector<F>>,
}

/// Outcome of [`Bimodule::check`]; each field holds the first failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimoduleReport {
    pub left: Option<ModuleError>,
    pub right: Option<ModuleError>,
    pub commuting: Option<ModuleError>,
}

impl BimoduleReport {
    pub fn passed(&self) -> bool {
        self.left.is_none() && self.right.is_none() && self.commuting.is_none()
    }

    pub fn first_failure(&self) -> Option<&ModuleError> {
        self.left.as_ref().or(self.right.as_ref()).or(self.commuting.as_ref())
    }
}

impl<F: Field> Bimodule<F> {
    pub fn new(
        left: Arc<Algebra<F>>,
        right: Arc<Algebra<F>>,
        labels: Vec<String>,
        left_action: Vec<Matrix<F>>,
        right_action: Vec<Matrix<F>>,
    ) -> Result<Self, ModuleError> {
        let b = Self::new_unchecked(left, right, labels, left_action, right_action);
        match b.check().first_failure() {
            Some(e) => Err(e.clone()),
            None => Ok(b),
        }
    }

    pub fn new_unchecked(
        left: Arc<Algebra<F>>,
        right: Arc<Algebra<F>>,
        labels: Vec<String>,
        left_action: Vec<Matrix<F>>,
        right_action: Vec<Matrix<F>>,
    ) -> Self {
        let dim = labels.len();
        Bimodule { left, right, dim, labels, left_action, right_action, distinguished: None }
    }

    pub fn zero(left: Arc<Algebra<F>>, right: Arc<Algebra<F>>) -> Self {
        let f = left.field().clone();
        let la = vec![Matrix::zero(f.clone(), 0, 0); left.dim()];
        let ra = vec![Matrix::zero(f, 0, 0); right.dim()];
        Bimodule { left, right, dim: 0, labels: Vec::new(), left_action: la, right_action: ra, distinguished: None }
    }

    /// `_A A_A`.
    pub fn regular(a: Arc<Algebra<F>>) -> Self {
        let d = a.dim();
        let la = (0..d).map(|i| a.left_basis_matrix(i)).collect();
        let ra = (0..d).map(|i| a.right_basis_matrix(i)).collect();
        Bimodule {
            labels: a.labels().to_vec(),
            left: a.clone(),
            right: a,
            dim: d,
            left_action: la,
            right_action: ra,
            distinguished: None,
        }
    }

    /// Restriction along `f: S → S0` on the left and `g: T → T0` on the right.
    pub fn restrict(&self, f: &AlgebraMorphism<F>, g: &AlgebraMorphism<F>) -> Result<Self, ModuleError> {
        let lm = self.left_module().restrict(f)?;
        let rm = self.right_module().restrict(g)?;
        Ok(Bimodule {
            left: f.source.clone(),
            right: g.source.clone(),
            dim: self.dim,
            labels: self.labels.clone(),
            left_action: lm.action,
            right_action: rm.action,
            distinguished: self.distinguished.clone(),
        })
    }

    pub fn with_distinguished(mut self, m: Vector<F>) -> Self {
        self.distinguished = Some(m);
        self
    }

    pub fn left_algebra(&self) -> &Arc<Algebra<F>> {
        &self.left
    }
    pub fn right_algebra(&self) -> &Arc<Algebra<F>> {
        &self.right
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn field(&self) -> &F {
        self.left.field()
    }
    pub fn left_matrix(&self, i: usize) -> &Matrix<F> {
        &self.left_action[i]
    }
    pub fn right_matrix(&self, j: usize) -> &Matrix<F> {
        &self.right_action[j]
    }

    /// `s·x`
    pub fn left_act(&self, s: &[F::Elem], x: &[F::Elem]) -> Vector<F> {
        let mut out = zero_vec(self.field(), self.dim);
        for (c, m) in s.iter().zip(&self.left_action) {
            if !self.field().is_zero(c) {
                axpy(self.field(), &mut out, c, &m.vec_mul(x));
            }
        }
        out
    }

    /// `x·t`
    pub fn right_act(&self, x: &[F::Elem], t: &[F::Elem]) -> Vector<F> {
        let mut out = zero_vec(self.field(), self.dim);
        for (c, m) in t.iter().zip(&self.right_action) {
            if !self.field().is_zero(c) {
                axpy(self.field(), &mut out, c, &m.vec_mul(x));
            }
        }
        out
    }

    /// `s ↦ s·x` as a `dim S × dim M` matrix.
    pub fn left_orbit_matrix(&self, x: &[F::Elem]) -> Matrix<F> {
        let rows: Vec<_> = self.left_action.iter().map(|m| m.vec_mul(x)).collect();
        Matrix::from_rows(self.field().clone(), self.dim, &rows)
    }

    /// `t ↦ x·t` as a `dim T × dim M` matrix.
    pub fn right_orbit_matrix(&self, x: &[F::Elem]) -> Matrix<F> {
        let rows: Vec<_> = self.right_action.iter().map(|m| m.vec_mul(x)).collect();
        Matrix::from_rows(self.field().clone(), self.dim, &rows)
    }

    pub fn left_module(&self) -> Module<F> {
        Module::new_unchecked(self.left.clone(), Side::Left, self.dim, self.left_action.clone())
    }

    pub fn right_module(&self) -> Module<F> {
        Module::new_unchecked(self.right.clone(), Side::Right, self.dim, self.right_action.clone())
    }

    pub fn check(&self) -> BimoduleReport {
        let left = check_law(&self.left, Side::Left, self.dim, &self.left_action).err();
        let right = check_law(&self.right, Side::Right, self.dim, &self.right_action).err();
        let mut commuting = None;
        if left.is_none() && right.is_none() {
            'outer: for (i, l) in self.left_action.iter().enumerate() {
                for (j, r) in self.right_action.iter().enumerate() {
                    if l.mul(r) != r.mul(l) {
                        commuting = Some(ModuleError::NotCommuting { i, j });
                        break 'outer;
                    }
                }
            }
        }
        BimoduleReport { left, right, commuting }
    }
}

pub fn check_bimodule<F: Field>(b: &Bimodule<F>) -> BimoduleReport {
    b.check()
}
