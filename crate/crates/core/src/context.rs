//! Exact contexts `(λ, μ, M, m)` and their constructions.
//!
//! A context is exact when `0 → R → S ⊕ T → M → 0`, with maps
//! `r ↦ (λ(r), μ(r))` and `ζ(s, t) = s·m − m·t`, is exact.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{product, subalgebra_from_spanning, Algebra, AlgebraError, AlgebraMorphism, SparseVec};
use crate::field::Field;
use crate::homological::is_ring_epimorphism;
use crate::linalg::{is_zero_vec, unit_vec, zero_vec, Basis, Matrix, QuotientPresentation, Subspace, Vector};
use crate::module::{end_algebra, hom_space, tensor_dim, tensor_over, Bimodule, Module, ModuleError, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactnessStage {
    /// `(λ, μ)` is not injective.
    Injectivity,
    /// `ζ ∘ (λ, μ) ≠ 0`.
    Complex,
    /// `ζ` is not onto `M`.
    Surjectivity,
    /// `ker ζ` is larger than the image of `(λ, μ)`.
    MiddleExactness,
}

impl std::fmt::Display for ExactnessStage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ExactnessStage::Injectivity => "injectivity",
            ExactnessStage::Complex => "complex",
            ExactnessStage::Surjectivity => "surjectivity",
            ExactnessStage::MiddleExactness => "middle exactness",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("inconsistent data: {0}")]
    Mismatch(String),
    #[error("not exact at {stage} (witness {witness})")]
    NotExact { stage: ExactnessStage, witness: String },
    #[error("morphism is not rigid")]
    NotRigid,
    #[error("ring homomorphism is not injective")]
    NotInjective,
    #[error("the extension is trivial, so S/R = 0")]
    DegenerateQuotient,
    #[error("pairings are incompatible: {0}")]
    IncompatiblePairings(String),
    #[error("{0} is not an ideal")]
    NotIdeal(String),
    #[error("{0} is not a complement of the image of R")]
    NotBimoduleSplitting(String),
    #[error("neither map of the square is surjective")]
    NeitherSurjective,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

fn fmt_vec<F: Field>(f: &F, v: &[F::Elem]) -> String {
    let parts: Vec<String> = v.iter().map(|x| f.format(x)).collect();
    format!("({})", parts.join(", "))
}

/// Rank data recorded when a context is verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessCertificate {
    pub dims: [usize; 4],
    pub rank_inclusion: usize,
    pub rank_zeta: usize,
}

#[derive(Debug, Clone)]
pub struct ExactContext<F: Field> {
    pub lambda: AlgebraMorphism<F>,
    pub mu: AlgebraMorphism<F>,
    pub bimodule: Bimodule<F>,
    pub m: Vector<F>,
    /// `s ↦ s·m`, `dim S × dim M`.
    pub sm: Matrix<F>,
    /// `t ↦ m·t`, `dim T × dim M`.
    pub mt: Matrix<F>,
    pub certificate: ExactnessCertificate,
}

impl<F: Field> ExactContext<F> {
    pub fn r(&self) -> &Arc<Algebra<F>> {
        &self.lambda.source
    }
    pub fn s(&self) -> &Arc<Algebra<F>> {
        &self.lambda.target
    }
    pub fn t(&self) -> &Arc<Algebra<F>> {
        &self.mu.target
    }
    pub fn field(&self) -> &F {
        self.lambda.source.field()
    }

    /// `ζ: S ⊕ T → M`, `(s, t) ↦ s·m − m·t`.
    pub fn zeta(&self) -> Matrix<F> {
        zeta_matrix(&self.sm, &self.mt)
    }

    /// `S` as a right and `T` as a left `R`-module.
    pub fn s_right(&self) -> Module<F> {
        Module::regular(self.s().clone(), Side::Right).restrict(&self.lambda).expect("λ targets S")
    }
    pub fn s_left(&self) -> Module<F> {
        Module::regular(self.s().clone(), Side::Left).restrict(&self.lambda).expect("λ targets S")
    }
    pub fn t_right(&self) -> Module<F> {
        Module::regular(self.t().clone(), Side::Right).restrict(&self.mu).expect("μ targets T")
    }
    pub fn t_left(&self) -> Module<F> {
        Module::regular(self.t().clone(), Side::Left).restrict(&self.mu).expect("μ targets T")
    }

    /// `M = Sm + mT`, which is the image of `ζ`.
    pub fn is_hypercyclic(&self) -> bool {
        self.zeta().rank() == self.bimodule.dim()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let [r, s, t, m] = self.certificate.dims;
        r as i64 - s as i64 - t as i64 + m as i64
    }
}

fn zeta_matrix<F: Field>(sm: &Matrix<F>, mt: &Matrix<F>) -> Matrix<F> {
    let f = sm.field().clone();
    sm.vstack(&mt.scale(&f.neg(&f.one())))
}

/// Verifies exactness of the context. Stages are checked in the order
/// injectivity, complex, surjectivity, middle exactness.
pub fn check_exact_context<F: Field>(
    lambda: AlgebraMorphism<F>,
    mu: AlgebraMorphism<F>,
    bimodule: Bimodule<F>,
    m: Vector<F>,
) -> Result<ExactContext<F>, ContextError> {
    if !lambda.source.same_structure(&mu.source) {
        return Err(ContextError::Mismatch("λ and μ have different sources".into()));
    }
    if !bimodule.left_algebra().same_structure(&lambda.target)
        || !bimodule.right_algebra().same_structure(&mu.target)
    {
        return Err(ContextError::Mismatch("M is not an S-T-bimodule".into()));
    }
    if m.len() != bimodule.dim() {
        return Err(ContextError::Mismatch("m has the wrong length".into()));
    }
    let f = lambda.source.field().clone();
    let (dr, ds, dt, dm) = (lambda.source.dim(), lambda.target.dim(), mu.target.dim(), bimodule.dim());
    let sm = bimodule.left_orbit_matrix(&m);
    let mt = bimodule.right_orbit_matrix(&m);
    let zeta = zeta_matrix(&sm, &mt);
    let inclusion = lambda.matrix.hstack(&mu.matrix);
    let rank_inclusion = inclusion.rank();
    if rank_inclusion < dr {
        let w = inclusion.left_kernel().remove(0);
        return Err(ContextError::NotExact { stage: ExactnessStage::Injectivity, witness: fmt_vec(&f, &w) });
    }
    let comp = inclusion.mul(&zeta);
    if let Some(i) = (0..dr).find(|&i| !is_zero_vec(&f, comp.row(i))) {
        return Err(ContextError::NotExact { stage: ExactnessStage::Complex, witness: format!("r{i}") });
    }
    let image = Subspace::spanned_by(f.clone(), dm, &zeta.row_vectors());
    let rank_zeta = image.dim();
    if rank_zeta < dm {
        let i = (0..dm).find(|&i| !image.contains(&unit_vec(&f, dm, i))).expect("proper subspace");
        return Err(ContextError::NotExact {
            stage: ExactnessStage::Surjectivity,
            witness: bimodule.labels().get(i).cloned().unwrap_or_else(|| format!("m{i}")),
        });
    }
    if ds + dt - rank_zeta != dr {
        let incl = Subspace::spanned_by(f.clone(), ds + dt, &inclusion.row_vectors());
        let w = zeta.left_kernel().into_iter().find(|v| !incl.contains(v)).expect("kernel is larger");
        return Err(ContextError::NotExact { stage: ExactnessStage::MiddleExactness, witness: fmt_vec(&f, &w) });
    }
    let certificate = ExactnessCertificate { dims: [dr, ds, dt, dm], rank_inclusion, rank_zeta };
    Ok(ExactContext { lambda, mu, bimodule, m, sm, mt, certificate })
}

/// `(id, id, R, 1)`.
pub fn trivial_context<F: Field>(r: Arc<Algebra<F>>) -> ExactContext<F> {
    let id = AlgebraMorphism::identity(r.clone());
    let m = r.unit().clone();
    let b = Bimodule::regular(r).with_distinguished(m.clone());
    check_exact_context(id.clone(), id, b, m).expect("the trivial context is exact")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPairVerdict {
    pub gamma_bijective: bool,
    /// `dim S ⊗_R T`
    pub tensor_dim: usize,
    /// `dim Coker λ ⊗_R Coker μ`
    pub coker_tensor_dim: usize,
}

impl ExactPairVerdict {
    pub fn holds(&self) -> bool {
        self.gamma_bijective
    }
}

/// `γ: S ⊗_R T → M`, `s ⊗ t ↦ s·m·t`, on the quotient basis of `S ⊗_R T`.
pub fn gamma<F: Field>(ctx: &ExactContext<F>) -> (QuotientPresentation<F>, Matrix<F>) {
    let qp = tensor_over(&ctx.s_right(), &ctx.t_left()).expect("sides match");
    let dt = ctx.t().dim();
    let rows: Vec<_> = qp
        .free
        .iter()
        .map(|&c| {
            let (i, j) = (c / dt, c % dt);
            ctx.bimodule.right_act(ctx.sm.row(i), &unit_vec(ctx.field(), dt, j))
        })
        .collect();
    let g = Matrix::from_rows(ctx.field().clone(), ctx.bimodule.dim(), &rows);
    (qp, g)
}

/// Decides whether `(λ, μ)` is an exact pair in two independent ways:
/// bijectivity of `γ` and vanishing of `Coker λ ⊗_R Coker μ`.
pub fn is_exact_pair<F: Field>(ctx: &ExactContext<F>) -> Result<ExactPairVerdict, ContextError> {
    let (qp, g) = gamma(ctx);
    let gamma_bijective = qp.dim() == ctx.bimodule.dim() && g.rank() == qp.dim();
    let coker_l = ctx.s_right().quotient_module(&ctx.lambda.matrix.row_vectors())?.0;
    let coker_m = ctx.t_left().quotient_module(&ctx.mu.matrix.row_vectors())?.0;
    let coker_tensor_dim = if coker_l.dim() == 0 || coker_m.dim() == 0 {
        0
    } else {
        tensor_dim(&coker_l, &coker_m)?
    };
    if gamma_bijective != (coker_tensor_dim == 0) {
        return Err(ContextError::InternalInconsistency(format!(
            "γ bijective = {gamma_bijective} but dim Coker λ ⊗ Coker μ = {coker_tensor_dim}"
        )));
    }
    Ok(ExactPairVerdict { gamma_bijective, tensor_dim: qp.dim(), coker_tensor_dim })
}

/// Ring epimorphism on either side forces `γ` to be bijective.
pub fn check_ring_epi_implies_exact_pair<F: Field>(ctx: &ExactContext<F>, verdict: &ExactPairVerdict) -> bool {
    let epi = is_ring_epimorphism(&ctx.lambda).holds || is_ring_epimorphism(&ctx.mu).holds;
    !epi || verdict.gamma_bijective
}

#[derive(Debug, Clone)]
pub struct RigidityReport<F: Field> {
    pub holds: bool,
    pub hom_dim: usize,
    pub span_dim: usize,
    /// A homomorphism outside `End(Y)f + f End(X)`.
    pub witness: Option<Matrix<F>>,
}

/// Compares `Hom(Y, X)` with `End(Y)f + f End(X)`.
pub fn is_rigid<F: Field>(y: &Module<F>, x: &Module<F>, f: &Matrix<F>) -> Result<RigidityReport<F>, ContextError> {
    let hom = hom_space(y, x)?;
    if f.rows() != y.dim() || f.cols() != x.dim() || !y.is_homomorphism(x, f) {
        return Err(ContextError::Mismatch("f is not a homomorphism Y → X".into()));
    }
    let field = y.field().clone();
    let (ey, _) = hom_space(y, y).map(|h| (h.basis, ()))?;
    let (ex, _) = hom_space(x, x).map(|h| (h.basis, ()))?;
    let n = y.dim() * x.dim();
    let mut span = Subspace::new(field, n);
    for e in &ey {
        span.insert(e.mul(f).data());
    }
    for g in &ex {
        span.insert(f.mul(g).data());
    }
    let witness = hom.basis.iter().find(|h| !span.contains(h.data())).cloned();
    Ok(RigidityReport { holds: witness.is_none(), hom_dim: hom.dim(), span_dim: span.dim(), witness })
}

/// Coordinates of matrices in a basis of matrices.
fn matrix_coords<F: Field>(basis: &Basis<F>, m: &Matrix<F>) -> Vector<F> {
    basis.coords(m.data()).expect("matrix lies in the span")
}

/// Builds an `S-T`-bimodule on `Hom(Y, X)` from matrices acting by
/// composition: `s·h = E_s h`, `h·t = h G_t`.
fn hom_bimodule<F: Field>(
    s: Arc<Algebra<F>>,
    s_mats: &[Matrix<F>],
    t: Arc<Algebra<F>>,
    t_mats: &[Matrix<F>],
    hom: &[Matrix<F>],
    ambient: usize,
) -> (Bimodule<F>, Basis<F>) {
    let f = s.field().clone();
    let basis = Basis::new(f.clone(), ambient, hom.iter().map(|h| h.data().to_vec()).collect()).expect("basis");
    let n = hom.len();
    let left = s_mats
        .iter()
        .map(|e| {
            let rows: Vec<_> = hom.iter().map(|h| matrix_coords(&basis, &e.mul(h))).collect();
            Matrix::from_rows(f.clone(), n, &rows)
        })
        .collect();
    let right = t_mats
        .iter()
        .map(|g| {
            let rows: Vec<_> = hom.iter().map(|h| matrix_coords(&basis, &h.mul(g))).collect();
            Matrix::from_rows(f.clone(), n, &rows)
        })
        .collect();
    let labels = (0..n).map(|i| format!("h{i}")).collect();
    (Bimodule::new_unchecked(s, t, labels, left, right), basis)
}

/// The context `(End Y ← K → End X, Hom(Y, X), f)` of a rigid morphism,
/// with `K = {(s, t) : s f = f t}`.
pub fn context_from_rigid<F: Field>(y: &Module<F>, x: &Module<F>, f: &Matrix<F>) -> Result<ExactContext<F>, ContextError> {
    let report = is_rigid(y, x, f)?;
    if !report.holds {
        return Err(ContextError::NotRigid);
    }
    let (s, s_mats) = end_algebra(y);
    let (t, t_mats) = end_algebra(x);
    let hom = hom_space(y, x)?;
    let (bimodule, coords) = hom_bimodule(s.clone(), &s_mats, t.clone(), &t_mats, &hom.basis, y.dim() * x.dim());
    let m = matrix_coords(&coords, f);
    let bimodule = bimodule.with_distinguished(m.clone());
    let sm = bimodule.left_orbit_matrix(&m);
    let mt = bimodule.right_orbit_matrix(&m);
    let kernel = zeta_matrix(&sm, &mt).left_kernel();
    let st = Arc::new(product(&s, &t));
    let (r, inc) = subalgebra_from_spanning(&st, &kernel)?;
    let ds = s.dim();
    let lambda = AlgebraMorphism::new(r.clone(), s.clone(), inc.matrix.block(0, 0, r.dim(), ds))?;
    let mu = AlgebraMorphism::new(r.clone(), t.clone(), inc.matrix.block(0, ds, r.dim(), t.dim()))?;
    check_exact_context(lambda, mu, bimodule, m)
}

/// The pieces of the extension context kept for later comparisons.
#[derive(Debug, Clone)]
pub struct ExtensionData<F: Field> {
    /// `_R S`.
    pub s_module: Module<F>,
    /// `_R(S/R)`.
    pub quotient: Module<F>,
    pub quotient_presentation: QuotientPresentation<F>,
    /// Matrices of the basis of `S′ = End_R(S/R)`.
    pub end_matrices: Vec<Matrix<F>>,
    /// Matrices of the basis of `M = Hom_R(S, S/R)`.
    pub hom_matrices: Vec<Matrix<F>>,
}

/// `(λ, λ′, Hom_R(S, S/R), π)` for an injective `λ: R → S`, with
/// `S′ = End_R(S/R)` and `λ′(r)` right multiplication by `λ(r)`.
pub fn context_from_extension<F: Field>(
    lambda: &AlgebraMorphism<F>,
) -> Result<(ExactContext<F>, ExtensionData<F>), ContextError> {
    if !lambda.is_injective() {
        return Err(ContextError::NotInjective);
    }
    let s = lambda.target.clone();
    let r = lambda.source.clone();
    let f = s.field().clone();
    let ds = s.dim();
    let rs = Module::regular(s.clone(), Side::Left).restrict(lambda)?;
    let (q, qp) = rs.quotient_module(&lambda.matrix.row_vectors())?;
    if q.dim() == 0 {
        return Err(ContextError::DegenerateQuotient);
    }
    let (s_prime, g_mats) = end_algebra(&q);
    let hom = hom_space(&rs, &q)?;
    let r_mats: Vec<Matrix<F>> = (0..ds).map(|i| s.right_basis_matrix(i)).collect();
    let (bimodule, coords) = hom_bimodule(s.clone(), &r_mats, s_prime.clone(), &g_mats, &hom.basis, ds * q.dim());
    let m = matrix_coords(&coords, &qp.projection);
    let bimodule = bimodule.with_distinguished(m.clone());
    let end_basis = Basis::new(f.clone(), q.dim() * q.dim(), g_mats.iter().map(|g| g.data().to_vec()).collect())
        .expect("basis");
    let lp_rows: Vec<_> = (0..r.dim())
        .map(|i| {
            let right = s.right_mult_matrix(lambda.matrix.row(i));
            matrix_coords(&end_basis, &qp.section.mul(&right).mul(&qp.projection))
        })
        .collect();
    let lambda_prime = AlgebraMorphism::new(r, s_prime, Matrix::from_rows(f, g_mats.len(), &lp_rows))?;
    let ctx = check_exact_context(lambda.clone(), lambda_prime, bimodule, m)?;
    let data = ExtensionData {
        s_module: rs,
        quotient: q,
        quotient_presentation: qp,
        end_matrices: g_mats,
        hom_matrices: hom.basis,
    };
    Ok((ctx, data))
}

/// A bilinear pairing given on basis pairs: `table[i][j]` is the value on
/// the `i`-th basis vector of the first factor and the `j`-th of the second.
pub type Pairing<F> = Vec<Vec<Vector<F>>>;

/// The raw data of a Morita context and its context ring
/// `Γ = (A X; Y C)` with basis order A, X, Y, C.
#[derive(Debug, Clone)]
pub struct MoritaData<F: Field> {
    pub a: Arc<Algebra<F>>,
    pub c: Arc<Algebra<F>>,
    /// `_A X_C`
    pub x: Bimodule<F>,
    /// `_C Y_A`
    pub y: Bimodule<F>,
    /// `f: X ⊗_C Y → A`
    pub f: Pairing<F>,
    /// `g: Y ⊗_A X → C`
    pub g: Pairing<F>,
    pub gamma: Arc<Algebra<F>>,
    /// `S ↪ Γ` and `T ↪ Γ`.
    pub s_embedding: AlgebraMorphism<F>,
    pub t_embedding: AlgebraMorphism<F>,
}

impl<F: Field> MoritaData<F> {
    pub fn offsets(&self) -> [usize; 4] {
        let (da, dx, dy) = (self.a.dim(), self.x.dim(), self.y.dim());
        [0, da, da + dx, da + dx + dy]
    }
}

fn pair<F: Field>(field: &F, table: &Pairing<F>, u: &[F::Elem], v: &[F::Elem], out_dim: usize) -> Vector<F> {
    let mut acc = zero_vec(field, out_dim);
    for (i, a) in u.iter().enumerate() {
        if field.is_zero(a) {
            continue;
        }
        for (j, b) in v.iter().enumerate() {
            if field.is_zero(b) {
                continue;
            }
            let c = field.mul(a, b);
            crate::linalg::axpy(field, &mut acc, &c, &table[i][j]);
        }
    }
    acc
}

/// Checks that the pairings are balanced bimodule maps satisfying
/// `f(x, y)·x' = x·g(y, x')` and `g(y, x)·y' = y·f(x, y')`.
pub fn check_pairings<F: Field>(
    a: &Algebra<F>,
    c: &Algebra<F>,
    x: &Bimodule<F>,
    y: &Bimodule<F>,
    f: &Pairing<F>,
    g: &Pairing<F>,
) -> Result<(), ContextError> {
    let k = a.field();
    let (da, dc, dx, dy) = (a.dim(), c.dim(), x.dim(), y.dim());
    let shape_ok = f.len() == dx
        && f.iter().all(|r| r.len() == dy && r.iter().all(|v| v.len() == da))
        && g.len() == dy
        && g.iter().all(|r| r.len() == dx && r.iter().all(|v| v.len() == dc));
    if !shape_ok {
        return Err(ContextError::Mismatch("pairing tables have the wrong shape".into()));
    }
    let ex = |i| unit_vec(k, dx, i);
    let ey = |j| unit_vec(k, dy, j);
    let fail = |what: &str, i: usize, j: usize, l: usize| {
        Err(ContextError::IncompatiblePairings(format!("{what} at ({i}, {j}, {l})")))
    };
    for i in 0..dx {
        for j in 0..dy {
            for l in 0..da {
                let al = unit_vec(k, da, l);
                // f(a x, y) = a f(x, y), f(x, y a) = f(x, y) a
                if pair(k, f, &x.left_act(&al, &ex(i)), &ey(j), da) != a.mul(&al, &f[i][j]) {
                    return fail("f(a·x, y) != a·f(x, y)", l, i, j);
                }
                if pair(k, f, &ex(i), &y.right_act(&ey(j), &al), da) != a.mul(&f[i][j], &al) {
                    return fail("f(x, y·a) != f(x, y)·a", i, j, l);
                }
                // g(y, a x) = g(y a, x)
                if pair(k, g, &ey(j), &x.left_act(&al, &ex(i)), dc) != pair(k, g, &y.right_act(&ey(j), &al), &ex(i), dc) {
                    return fail("g(y·a, x) != g(y, a·x)", j, l, i);
                }
            }
            for l in 0..dc {
                let cl = unit_vec(k, dc, l);
                if pair(k, g, &y.left_act(&cl, &ey(j)), &ex(i), dc) != c.mul(&cl, &g[j][i]) {
                    return fail("g(c·y, x) != c·g(y, x)", l, j, i);
                }
                if pair(k, g, &ey(j), &x.right_act(&ex(i), &cl), dc) != c.mul(&g[j][i], &cl) {
                    return fail("g(y, x·c) != g(y, x)·c", j, i, l);
                }
                if pair(k, f, &x.right_act(&ex(i), &cl), &ey(j), da) != pair(k, f, &ex(i), &y.left_act(&cl, &ey(j)), da) {
                    return fail("f(x·c, y) != f(x, c·y)", i, l, j);
                }
            }
        }
    }
    for i in 0..dx {
        for j in 0..dy {
            for l in 0..dx {
                // f(x_i, y_j)·x_l = x_i·g(y_j, x_l)
                if x.left_act(&f[i][j], &ex(l)) != x.right_act(&ex(i), &g[j][l]) {
                    return fail("f(x, y)·x' != x·g(y, x')", i, j, l);
                }
            }
        }
    }
    for j in 0..dy {
        for i in 0..dx {
            for l in 0..dy {
                if y.left_act(&g[j][i], &ey(l)) != y.right_act(&ey(j), &f[i][l]) {
                    return fail("g(y, x)·y' != y·f(x, y')", j, i, l);
                }
            }
        }
    }
    Ok(())
}

/// The Morita context ring `Γ = (A X; Y C)`, labels prefixed `a.`, `x.`,
/// `y.`, `c.`.
pub fn morita_ring<F: Field>(
    a: &Algebra<F>,
    c: &Algebra<F>,
    x: &Bimodule<F>,
    y: &Bimodule<F>,
    f: &Pairing<F>,
    g: &Pairing<F>,
) -> Result<Algebra<F>, AlgebraError> {
    let k = a.field().clone();
    let (da, dc, dx, dy) = (a.dim(), c.dim(), x.dim(), y.dim());
    let (ox, oy, oc) = (da, da + dx, da + dx + dy);
    let dim = oc + dc;
    let mut labels = Vec::with_capacity(dim);
    labels.extend(a.labels().iter().map(|l| format!("a.{l}")));
    labels.extend(x.labels().iter().map(|l| format!("x.{l}")));
    labels.extend(y.labels().iter().map(|l| format!("y.{l}")));
    labels.extend(c.labels().iter().map(|l| format!("c.{l}")));
    let shift = |v: &[F::Elem], off: usize| -> SparseVec<F> {
        v.iter().enumerate().filter(|(_, e)| !k.is_zero(e)).map(|(i, e)| (off + i, e.clone())).collect()
    };
    let shift_sparse = |v: &SparseVec<F>, off: usize| -> SparseVec<F> { v.iter().map(|(i, e)| (off + i, e.clone())).collect() };
    let mut table: Vec<SparseVec<F>> = vec![Vec::new(); dim * dim];
    for i in 0..da {
        for j in 0..da {
            table[i * dim + j] = shift_sparse(a.basis_product(i, j), 0);
        }
        for j in 0..dx {
            table[i * dim + ox + j] = shift(x.left_matrix(i).row(j), ox);
        }
    }
    for i in 0..dx {
        for j in 0..dc {
            table[(ox + i) * dim + oc + j] = shift(x.right_matrix(j).row(i), ox);
        }
        for j in 0..dy {
            table[(ox + i) * dim + oy + j] = shift(&f[i][j], 0);
        }
    }
    for i in 0..dy {
        for j in 0..da {
            table[(oy + i) * dim + j] = shift(y.right_matrix(j).row(i), oy);
        }
        for j in 0..dx {
            table[(oy + i) * dim + ox + j] = shift(&g[i][j], oc);
        }
    }
    for i in 0..dc {
        for j in 0..dy {
            table[(oc + i) * dim + oy + j] = shift(y.left_matrix(i).row(j), oy);
        }
        for j in 0..dc {
            table[(oc + i) * dim + oc + j] = shift_sparse(c.basis_product(i, j), oc);
        }
    }
    let mut unit = zero_vec(&k, dim);
    unit[..da].clone_from_slice(a.unit());
    unit[oc..].clone_from_slice(c.unit());
    let pad = |e: &Vector<F>, off: usize| {
        let mut v = zero_vec(&k, dim);
        v[off..off + e.len()].clone_from_slice(e);
        v
    };
    let idems = a.idempotents().iter().map(|e| pad(e, 0)).chain(c.idempotents().iter().map(|e| pad(e, oc))).collect();
    Algebra::from_sparse(k.clone(), labels, table, unit)?.with_idempotents(idems)
}

/// The subalgebra on a set of standard basis vectors, with basis in the
/// ambient order.
fn coordinate_subalgebra<F: Field>(
    ambient: &Arc<Algebra<F>>,
    indices: &[usize],
) -> Result<(Arc<Algebra<F>>, AlgebraMorphism<F>), AlgebraError> {
    let vs: Vec<_> = indices.iter().map(|&i| ambient.basis_vector(i)).collect();
    subalgebra_from_spanning(ambient, &vs)
}

/// `f ∘ g⁻¹` restricted: the morphism `R → S` between two coordinate
/// subalgebras with `R ⊆ S`.
fn inclusion_between<F: Field>(r_inc: &AlgebraMorphism<F>, s_inc: &AlgebraMorphism<F>) -> Result<AlgebraMorphism<F>, ContextError> {
    let m = s_inc
        .matrix
        .solve_left_matrix(&r_inc.matrix)
        .ok_or_else(|| ContextError::Mismatch("not a subalgebra".into()))?;
    Ok(AlgebraMorphism::new(r_inc.source.clone(), s_inc.source.clone(), m)?)
}

/// The exact context of a Morita context: `R = diag(A, C)`, `S = (A X; 0 C)`,
/// `T = (A 0; Y C)`, `M = Γ`, `m = 1`.
pub fn context_from_morita<F: Field>(
    a: Arc<Algebra<F>>,
    c: Arc<Algebra<F>>,
    x: Bimodule<F>,
    y: Bimodule<F>,
    f: Pairing<F>,
    g: Pairing<F>,
) -> Result<(ExactContext<F>, MoritaData<F>), ContextError> {
    if !x.left_algebra().same_structure(&a) || !x.right_algebra().same_structure(&c) {
        return Err(ContextError::Mismatch("X must be an A-C-bimodule".into()));
    }
    if !y.left_algebra().same_structure(&c) || !y.right_algebra().same_structure(&a) {
        return Err(ContextError::Mismatch("Y must be a C-A-bimodule".into()));
    }
    check_pairings(&a, &c, &x, &y, &f, &g)?;
    let gamma = Arc::new(
        morita_ring(&a, &c, &x, &y, &f, &g)
            .map_err(|e| ContextError::IncompatiblePairings(e.to_string()))?,
    );
    let (da, dx, dy, dc) = (a.dim(), x.dim(), y.dim(), c.dim());
    let (oy, oc) = (da + dx, da + dx + dy);
    let r_idx: Vec<usize> = (0..da).chain(oc..oc + dc).collect();
    let s_idx: Vec<usize> = (0..oy).chain(oc..oc + dc).collect();
    let t_idx: Vec<usize> = (0..da).chain(oy..oc + dc).collect();
    let (_, r_inc) = coordinate_subalgebra(&gamma, &r_idx)?;
    let (_, s_inc) = coordinate_subalgebra(&gamma, &s_idx)?;
    let (_, t_inc) = coordinate_subalgebra(&gamma, &t_idx)?;
    let lambda = inclusion_between(&r_inc, &s_inc)?;
    let mu = inclusion_between(&r_inc, &t_inc)?;
    let m = gamma.unit().clone();
    let bimodule = Bimodule::regular(gamma.clone()).restrict(&s_inc, &t_inc)?.with_distinguished(m.clone());
    let ctx = check_exact_context(lambda, mu, bimodule, m)?;
    let data = MoritaData { a, c, x, y, f, g, gamma, s_embedding: s_inc, t_embedding: t_inc };
    Ok((ctx, data))
}

/// Data of a strictly pure context: `S = λ(R) ⊕ X`, `T = μ(R) ⊕ Y`, and
/// `M = R ⊕ X ⊕ Y` with `x·y = y·x = 0`.
#[derive(Debug, Clone)]
pub struct PureData<F: Field> {
    pub lambda: AlgebraMorphism<F>,
    pub mu: AlgebraMorphism<F>,
    /// Basis of `X` inside `S`.
    pub x: Vec<Vector<F>>,
    /// Basis of `Y` inside `T`.
    pub y: Vec<Vector<F>>,
    /// Coordinates of `S` in the basis `λ(R), X`.
    pub s_split: Basis<F>,
    pub t_split: Basis<F>,
    pub m_algebra: Arc<Algebra<F>>,
}

fn check_ideal<F: Field>(s: &Algebra<F>, x: &Subspace<F>, name: &str) -> Result<(), ContextError> {
    for v in x.basis() {
        for i in 0..s.dim() {
            let b = s.basis_vector(i);
            if !x.contains(&s.mul(&b, v)) || !x.contains(&s.mul(v, &b)) {
                return Err(ContextError::NotIdeal(name.into()));
            }
        }
    }
    Ok(())
}

fn split_basis<F: Field>(inc: &AlgebraMorphism<F>, comp: &[Vector<F>], name: &str) -> Result<Basis<F>, ContextError> {
    let n = inc.target.dim();
    let mut vs = inc.matrix.row_vectors();
    vs.extend(comp.iter().cloned());
    if vs.len() != n {
        return Err(ContextError::NotBimoduleSplitting(name.into()));
    }
    Basis::new(inc.target.field().clone(), n, vs).ok_or_else(|| ContextError::NotBimoduleSplitting(name.into()))
}

pub fn context_from_strictly_pure<F: Field>(
    lambda: AlgebraMorphism<F>,
    mu: AlgebraMorphism<F>,
    x: Vec<Vector<F>>,
    y: Vec<Vector<F>>,
) -> Result<(ExactContext<F>, PureData<F>), ContextError> {
    if !lambda.source.same_structure(&mu.source) {
        return Err(ContextError::Mismatch("λ and μ have different sources".into()));
    }
    let (s, t, r) = (lambda.target.clone(), mu.target.clone(), lambda.source.clone());
    let k = r.field().clone();
    let xs = Subspace::spanned_by(k.clone(), s.dim(), &x);
    let ys = Subspace::spanned_by(k.clone(), t.dim(), &y);
    check_ideal(&s, &xs, "X")?;
    check_ideal(&t, &ys, "Y")?;
    let x = xs.basis().to_vec();
    let y = ys.basis().to_vec();
    let s_split = split_basis(&lambda, &x, "X")?;
    let t_split = split_basis(&mu, &y, "Y")?;
    let (dr, dx, dy) = (r.dim(), x.len(), y.len());
    let dim = dr + dx + dy;
    // S → M and T → M in the split coordinates
    let s_to_m = |v: &[F::Elem]| -> Vector<F> {
        let c = s_split.coords(v).expect("S = λ(R) ⊕ X");
        let mut out = c;
        out.extend(std::iter::repeat(k.zero()).take(dy));
        out
    };
    let t_to_m = |v: &[F::Elem]| -> Vector<F> {
        let c = t_split.coords(v).expect("T = μ(R) ⊕ Y");
        let mut out = c[..dr].to_vec();
        out.extend(std::iter::repeat(k.zero()).take(dx));
        out.extend_from_slice(&c[dr..]);
        out
    };
    let m_basis_in_s = |i: usize| -> Vector<F> {
        if i < dr {
            lambda.matrix.row(i).to_vec()
        } else {
            x[i - dr].clone()
        }
    };
    let m_basis_in_t = |i: usize| -> Vector<F> {
        if i < dr {
            mu.matrix.row(i).to_vec()
        } else {
            y[i - dr - dx].clone()
        }
    };
    let mut labels: Vec<String> = r.labels().iter().map(|l| format!("r.{l}")).collect();
    labels.extend((0..dx).map(|i| format!("x{i}")));
    labels.extend((0..dy).map(|i| format!("y{i}")));
    let mut table = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let in_x = |n: usize| (dr..dr + dx).contains(&n);
            let in_y = |n: usize| n >= dr + dx;
            let v = if (in_x(i) && in_y(j)) || (in_y(i) && in_x(j)) {
                zero_vec(&k, dim)
            } else if in_y(i) || in_y(j) {
                t_to_m(&t.mul(&m_basis_in_t(i), &m_basis_in_t(j)))
            } else {
                s_to_m(&s.mul(&m_basis_in_s(i), &m_basis_in_s(j)))
            };
            table.push(v.into_iter().enumerate().filter(|(_, e)| !k.is_zero(e)).collect());
        }
    }
    let mut unit = zero_vec(&k, dim);
    unit[..dr].clone_from_slice(r.unit());
    let m_alg = Arc::new(Algebra::from_sparse(k.clone(), labels, table, unit)?);
    let s_emb = AlgebraMorphism::new(
        s.clone(),
        m_alg.clone(),
        Matrix::from_rows(k.clone(), dim, &(0..s.dim()).map(|i| s_to_m(&s.basis_vector(i))).collect::<Vec<_>>()),
    )?;
    let t_emb = AlgebraMorphism::new(
        t.clone(),
        m_alg.clone(),
        Matrix::from_rows(k.clone(), dim, &(0..t.dim()).map(|i| t_to_m(&t.basis_vector(i))).collect::<Vec<_>>()),
    )?;
    let m = m_alg.unit().clone();
    let bimodule = Bimodule::regular(m_alg.clone()).restrict(&s_emb, &t_emb)?.with_distinguished(m.clone());
    let ctx = check_exact_context(lambda.clone(), mu.clone(), bimodule, m)?;
    Ok((ctx, PureData { lambda, mu, x, y, s_split, t_split, m_algebra: m_alg }))
}

/// The context `(i1, i2, Λ′, 1)` of a Milnor square, with
/// `Λ = {(a, b) : j1(a) = j2(b)}`.
pub fn context_from_milnor<F: Field>(j1: &AlgebraMorphism<F>, j2: &AlgebraMorphism<F>) -> Result<ExactContext<F>, ContextError> {
    if !j1.target.same_structure(&j2.target) {
        return Err(ContextError::Mismatch("j1 and j2 have different targets".into()));
    }
    if !j1.is_surjective() && !j2.is_surjective() {
        return Err(ContextError::NeitherSurjective);
    }
    let (l1, l2) = (j1.source.clone(), j2.source.clone());
    let k = l1.field().clone();
    let diff = j1.matrix.vstack(&j2.matrix.scale(&k.neg(&k.one())));
    let kernel = diff.left_kernel();
    let prod = Arc::new(product(&l1, &l2));
    let (lam, inc) = subalgebra_from_spanning(&prod, &kernel)?;
    let d1 = l1.dim();
    let i1 = AlgebraMorphism::new(lam.clone(), l1.clone(), inc.matrix.block(0, 0, lam.dim(), d1))?;
    let i2 = AlgebraMorphism::new(lam.clone(), l2.clone(), inc.matrix.block(0, d1, lam.dim(), l2.dim()))?;
    let target = j1.target.clone();
    let m = target.unit().clone();
    let bimodule = Bimodule::regular(target).restrict(j1, j2)?.with_distinguished(m.clone());
    check_exact_context(i1, i2, bimodule, m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauReport {
    pub ring_epi: bool,
    /// `dim Hom_R(S/R, S)`
    pub hom_quotient_to_s: usize,
    /// `End_R(S) = S` through right multiplications.
    pub sigma_bijective: bool,
    pub gamma_bijective: bool,
    pub tau_injective: bool,
    pub tau_bijective: bool,
    pub dim_b: usize,
    pub dim_lambda: usize,
    /// `Some(true)` when `λ` is a ring epimorphism and the expected
    /// conclusions hold, `Some(false)` if they do not, `None` otherwise.
    pub implication: Option<bool>,
}

/// Compares the triangular ring `B = (S M; 0 S′)` with
/// `End_R(S ⊕ S/R)` through `τ`, which sends `s` to right multiplication,
/// `h` to itself in the corner and `g` to itself.
pub fn tau_comparison<F: Field>(ctx: &ExactContext<F>, data: &ExtensionData<F>) -> Result<TauReport, ContextError> {
    let s = ctx.s();
    let k = s.field().clone();
    let ds = s.dim();
    let dq = data.quotient.dim();
    let n = ds + dq;
    let mut images: Vec<Vector<F>> = Vec::new();
    for i in 0..ds {
        let mut big = Matrix::zero(k.clone(), n, n);
        big.write_block(0, 0, &s.right_basis_matrix(i));
        images.push(big.data().to_vec());
    }
    for h in &data.hom_matrices {
        let mut big = Matrix::zero(k.clone(), n, n);
        big.write_block(0, ds, h);
        images.push(big.data().to_vec());
    }
    for g in &data.end_matrices {
        let mut big = Matrix::zero(k.clone(), n, n);
        big.write_block(ds, ds, g);
        images.push(big.data().to_vec());
    }
    let dim_b = images.len();
    let tau_injective = Matrix::from_rows(k, n * n, &images).rank() == dim_b;
    let end_s = hom_space(&data.s_module, &data.s_module)?.dim();
    let hom_qs = hom_space(&data.quotient, &data.s_module)?.dim();
    let dim_lambda = end_s + data.hom_matrices.len() + hom_qs + data.end_matrices.len();
    let sigma_bijective = end_s == ds;
    let tau_bijective = tau_injective && dim_lambda == dim_b;
    let gamma_bijective = is_exact_pair(ctx)?.gamma_bijective;
    let ring_epi = is_ring_epimorphism(&ctx.lambda).holds;
    let implication = ring_epi.then_some(hom_qs == 0 && tau_bijective && gamma_bijective);
    Ok(TauReport {
        ring_epi,
        hom_quotient_to_s: hom_qs,
        sigma_bijective,
        gamma_bijective,
        tau_injective,
        tau_bijective,
        dim_b,
        dim_lambda,
        implication,
    })
}
