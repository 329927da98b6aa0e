//! The noncommutative tensor product `T ⊠_R S` of an exact context, the
//! map `θ: B → C` and the checks around it.
//!
//! Elements of `T ⊗_k S` are vectors indexed by `i * dim S + j` for
//! `t_i ⊗ s_j`; `T ⊗_R S` is a quotient of that space.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{matrix_algebra, triangular_algebra, Algebra, AlgebraError, AlgebraMorphism};
use crate::context::{gamma, is_exact_pair, ContextError, ExactContext, MoritaData, PureData};
use crate::field::Field;
use crate::homological::{
    is_ring_epimorphism, projective_dimension, tor, HomologicalError, ProjectiveDimension, RingEpiVerdict, TorResult,
};
use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, Basis, Matrix, QuotientPresentation, Vector};
use crate::module::{end_algebra, tensor_dim, tensor_over, Module, ModuleError, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Homological(#[from] HomologicalError),
}

fn internal(msg: impl Into<String>) -> NcError {
    NcError::InternalInconsistency(msg.into())
}

/// `t ⊗ s` in `T ⊗_k S`.
fn outer<F: Field>(f: &F, t: &[F::Elem], s: &[F::Elem]) -> Vector<F> {
    let mut out = Vec::with_capacity(t.len() * s.len());
    for a in t {
        if f.is_zero(a) {
            out.extend(std::iter::repeat(f.zero()).take(s.len()));
        } else {
            out.extend(s.iter().map(|b| f.mul(a, b)));
        }
    }
    out
}

/// `β: M → T ⊗_R S`, `x ↦ 1 ⊗ s_x + t_x ⊗ 1` where `x = s_x·m + m·t_x`.
#[derive(Debug, Clone)]
pub struct BetaMap<F: Field> {
    /// Values in `T ⊗_k S`, `dim M × dim T·dim S`.
    pub free: Matrix<F>,
    /// Values in the quotient basis, `dim M × dim ⊠`.
    pub projected: Matrix<F>,
}

/// Solves `x = s·m + m·t` for every row of `xs`, returning `(s, t)` rows.
fn split_through_m<F: Field>(ctx: &ExactContext<F>, xs: &Matrix<F>) -> Result<Matrix<F>, NcError> {
    ctx.sm
        .vstack(&ctx.mt)
        .solve_left_matrix(xs)
        .ok_or_else(|| internal("M ≠ Sm + mT on a verified context"))
}

fn beta_from_split<F: Field>(ctx: &ExactContext<F>, st: &[F::Elem]) -> Vector<F> {
    let f = ctx.field();
    let ds = ctx.s().dim();
    let (s, t) = st.split_at(ds);
    let mut v = outer(f, ctx.t().unit(), s);
    let w = outer(f, t, ctx.s().unit());
    axpy(f, &mut v, &f.one(), &w);
    v
}

/// `β`, re-verified on a second solution obtained by adding an element of
/// `ker ζ` to every chosen preimage.
pub fn build_beta<F: Field>(ctx: &ExactContext<F>, tensor: &QuotientPresentation<F>) -> Result<BetaMap<F>, NcError> {
    let f = ctx.field().clone();
    let dm = ctx.bimodule.dim();
    let n = ctx.t().dim() * ctx.s().dim();
    let split = split_through_m(ctx, &Matrix::identity(f.clone(), dm))?;
    let rows: Vec<_> = (0..dm).map(|x| beta_from_split(ctx, split.row(x))).collect();
    let free = Matrix::from_rows(f.clone(), n, &rows);
    let projected_rows: Vec<_> = rows.iter().map(|v| tensor.project(v)).collect();
    let projected = Matrix::from_rows(f.clone(), tensor.dim(), &projected_rows);

    let kernel = ctx.sm.vstack(&ctx.mt).left_kernel();
    if !kernel.is_empty() {
        let mut shift = zero_vec(&f, split.cols());
        for (c, k) in kernel.iter().enumerate() {
            axpy(&f, &mut shift, &f.from_i64(c as i64 + 2), k);
        }
        for x in 0..dm {
            let mut other = split.row(x).to_vec();
            axpy(&f, &mut other, &f.from_i64(x as i64 + 1), &shift);
            if tensor.project(&beta_from_split(ctx, &other)) != projected_rows[x] {
                return Err(internal(format!("β depends on the chosen preimage of basis vector {x}")));
            }
        }
    }
    Ok(BetaMap { free, projected })
}

/// `T ⊠_R S` with its structure maps.
#[derive(Debug, Clone)]
pub struct NcTensorRing<F: Field> {
    pub context: ExactContext<F>,
    pub algebra: Arc<Algebra<F>>,
    /// `T ⊗_R S` as a quotient of `T ⊗_k S`.
    pub tensor: QuotientPresentation<F>,
    pub rho: AlgebraMorphism<F>,
    pub phi: AlgebraMorphism<F>,
    pub beta: BetaMap<F>,
    /// `S ⊗_R T` as a quotient of `S ⊗_k T`.
    pub st_tensor: QuotientPresentation<F>,
    /// `δ = γ β` on the quotient basis of `S ⊗_R T`.
    pub delta: Matrix<F>,
    t_left: Vec<Matrix<F>>,
    s_right: Vec<Matrix<F>>,
}

impl<F: Field> NcTensorRing<F> {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
    pub fn field(&self) -> &F {
        self.context.field()
    }

    /// `t_i · w · s_l` on `T ⊗_k S`.
    fn sandwich(&self, i: usize, w: &[F::Elem], l: usize) -> Vector<F> {
        let f = self.field();
        let (dt, ds) = (self.context.t().dim(), self.context.s().dim());
        let wm = Matrix::new(f.clone(), dt, ds, w.to_vec());
        self.t_left[i].transpose().mul(&wm).mul(&self.s_right[l]).data().to_vec()
    }

    /// `(t_i ⊗ s_j) ∘ (t_k ⊗ s_l) = t_i · β(s_j m t_k) · s_l` in `T ⊗_k S`.
    fn mul_basis(&self, i: usize, j: usize, k: usize, l: usize) -> Vector<F> {
        let ctx = &self.context;
        let x = ctx.bimodule.right_act(ctx.sm.row(j), &unit_vec(self.field(), ctx.t().dim(), k));
        let w = self.beta.free.vec_mul(&x);
        self.sandwich(i, &w, l)
    }

    /// The product of two arbitrary representatives in `T ⊗_k S`.
    pub fn mul_reps(&self, u: &[F::Elem], v: &[F::Elem]) -> Vector<F> {
        let f = self.field().clone();
        let ds = self.context.s().dim();
        let mut out = zero_vec(&f, u.len());
        for (a, cu) in u.iter().enumerate().filter(|(_, c)| !f.is_zero(c)) {
            for (b, cv) in v.iter().enumerate().filter(|(_, c)| !f.is_zero(c)) {
                let p = self.mul_basis(a / ds, a % ds, b / ds, b % ds);
                axpy(&f, &mut out, &f.mul(cu, cv), &p);
            }
        }
        out
    }

    /// Class of `t ⊗ s`.
    pub fn class_of(&self, t: &[F::Elem], s: &[F::Elem]) -> Vector<F> {
        self.tensor.project(&outer(self.field(), t, s))
    }

    pub fn beta_apply(&self, x: &[F::Elem]) -> Vector<F> {
        self.beta.projected.vec_mul(x)
    }
}

/// Builds `T ⊠_R S`: products on section representatives, projected back.
/// The algebra constructor re-verifies unit and associativity on every
/// basis triple; `ρ` and `φ` are verified as algebra morphisms.
pub fn build_nc_tensor<F: Field>(ctx: &ExactContext<F>) -> Result<NcTensorRing<F>, NcError> {
    let f = ctx.field().clone();
    let (s, t) = (ctx.s().clone(), ctx.t().clone());
    let (ds, dt) = (s.dim(), t.dim());
    let tensor = tensor_over(&ctx.t_right(), &ctx.s_left())?;
    let beta = build_beta(ctx, &tensor)?;
    let (st_tensor, g) = gamma(ctx);
    let delta = g.mul(&beta.projected);
    let mut ring = NcTensorRing {
        context: ctx.clone(),
        algebra: Arc::new(Algebra::ground(f.clone())),
        tensor,
        rho: AlgebraMorphism::identity(Arc::new(Algebra::ground(f.clone()))),
        phi: AlgebraMorphism::identity(Arc::new(Algebra::ground(f.clone()))),
        beta,
        st_tensor,
        delta,
        t_left: (0..dt).map(|i| t.left_basis_matrix(i)).collect(),
        s_right: (0..ds).map(|j| s.right_basis_matrix(j)).collect(),
    };
    let d = ring.tensor.dim();
    let reps = ring.tensor.free.clone();
    let mut table = Vec::with_capacity(d * d);
    for &a in &reps {
        for &b in &reps {
            let p = ring.mul_basis(a / ds, a % ds, b / ds, b % ds);
            let q = ring.tensor.project(&p);
            table.push(q.into_iter().enumerate().filter(|(_, c)| !f.is_zero(c)).collect());
        }
    }
    let mut labels: Vec<String> =
        reps.iter().map(|&a| format!("{}*{}", t.labels()[a / ds], s.labels()[a % ds])).collect();
    let mut seen = std::collections::HashSet::new();
    if !labels.iter().all(|l| seen.insert(l.clone())) {
        labels = (0..d).map(|i| format!("w{i}")).collect();
    }
    let unit = ring.class_of(t.unit(), s.unit());
    let alg = Algebra::from_sparse(f.clone(), labels, table, unit)
        .map_err(|e| internal(format!("⊠ fails the ring axioms: {e}")))?;
    ring.algebra = Arc::new(alg);
    let rho_rows: Vec<_> = (0..ds).map(|j| ring.class_of(t.unit(), &unit_vec(&f, ds, j))).collect();
    let phi_rows: Vec<_> = (0..dt).map(|i| ring.class_of(&unit_vec(&f, dt, i), s.unit())).collect();
    ring.rho = AlgebraMorphism::new(s.clone(), ring.algebra.clone(), Matrix::from_rows(f.clone(), d, &rho_rows))
        .map_err(|e| internal(format!("ρ is not a ring homomorphism: {e}")))?;
    ring.phi = AlgebraMorphism::new(t.clone(), ring.algebra.clone(), Matrix::from_rows(f.clone(), d, &phi_rows))
        .map_err(|e| internal(format!("φ is not a ring homomorphism: {e}")))?;
    let (via_s, via_t) = (ring.rho.image_idempotents(), ring.phi.image_idempotents());
    let idems = if via_t.len() > via_s.len() { via_t } else { via_s };
    let alg = (*ring.algebra).clone().with_idempotents(idems).map_err(|e| internal(e.to_string()))?;
    ring.algebra = Arc::new(alg);
    ring.rho.target = ring.algebra.clone();
    ring.phi.target = ring.algebra.clone();
    Ok(ring)
}

/// Outcome of the exhaustive ring-axiom suite on `⊠`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    pub associativity_failures: usize,
    pub unit_failures: usize,
    pub rho_morphism: bool,
    pub phi_morphism: bool,
    pub beta_of_m_is_one: bool,
    pub beta_bimodule_failures: usize,
    pub delta_failures: usize,
    pub section_failures: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.associativity_failures == 0
            && self.unit_failures == 0
            && self.rho_morphism
            && self.phi_morphism
            && self.beta_of_m_is_one
            && self.beta_bimodule_failures == 0
            && self.delta_failures == 0
            && self.section_failures == 0
    }
}

/// Re-checks every claim about `⊠` independently of construction:
/// associativity on all basis triples, the unit, `ρ` and `φ`, `β` as a
/// bimodule map with `β(m) = 1`, `δ(s ⊗ 1) = ρ(s)`, `δ(1 ⊗ t) = φ(t)`, and
/// independence of the product from the chosen representatives.
pub fn ring_axiom_suite<F: Field>(ring: &NcTensorRing<F>) -> AxiomReport {
    let a = &ring.algebra;
    let f = ring.field().clone();
    let d = a.dim();
    let mut rep = AxiomReport::default();
    let basis: Vec<_> = (0..d).map(|i| a.basis_vector(i)).collect();
    let prods: Vec<Vec<Vector<F>>> = basis.iter().map(|x| basis.iter().map(|y| a.mul(x, y)).collect()).collect();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if a.mul(&prods[i][j], &basis[k]) != a.mul(&basis[i], &prods[j][k]) {
                    rep.associativity_failures += 1;
                }
            }
        }
        if a.mul(a.unit(), &basis[i]) != basis[i] || a.mul(&basis[i], a.unit()) != basis[i] {
            rep.unit_failures += 1;
        }
    }
    rep.rho_morphism = ring.rho.check().passed();
    rep.phi_morphism = ring.phi.check().passed();
    let ctx = &ring.context;
    rep.beta_of_m_is_one = ring.beta_apply(&ctx.m) == *a.unit();
    let (ds, dt, dm) = (ctx.s().dim(), ctx.t().dim(), ctx.bimodule.dim());
    for x in 0..dm {
        let ex = unit_vec(&f, dm, x);
        let bx = ring.beta_apply(&ex);
        for i in 0..ds {
            let si = unit_vec(&f, ds, i);
            let lhs = ring.beta_apply(&ctx.bimodule.left_act(&si, &ex));
            if lhs != a.mul(&ring.rho.apply(&si), &bx) {
                rep.beta_bimodule_failures += 1;
            }
        }
        for j in 0..dt {
            let tj = unit_vec(&f, dt, j);
            let lhs = ring.beta_apply(&ctx.bimodule.right_act(&ex, &tj));
            if lhs != a.mul(&bx, &ring.phi.apply(&tj)) {
                rep.beta_bimodule_failures += 1;
            }
        }
    }
    // δ on s ⊗ 1 and 1 ⊗ t
    for i in 0..ds {
        let v = ring.st_tensor.project(&outer(&f, &unit_vec(&f, ds, i), ctx.t().unit()));
        if ring.delta.vec_mul(&v) != ring.rho.matrix.row(i) {
            rep.delta_failures += 1;
        }
    }
    for j in 0..dt {
        let v = ring.st_tensor.project(&outer(&f, ctx.s().unit(), &unit_vec(&f, dt, j)));
        if ring.delta.vec_mul(&v) != ring.phi.matrix.row(j) {
            rep.delta_failures += 1;
        }
    }
    rep.section_failures = section_perturbation_failures(ring);
    rep
}

/// Moves every representative by a relation and recomputes products. The
/// relation is a fixed combination of the relation basis, so the check is
/// deterministic. Pairs are sampled when the ring is large.
pub fn section_perturbation_failures<F: Field>(ring: &NcTensorRing<F>) -> usize {
    let f = ring.field().clone();
    let rels = ring.tensor.relations.basis();
    if rels.is_empty() {
        return 0;
    }
    let d = ring.dim();
    let reps: Vec<Vector<F>> = (0..d)
        .map(|a| {
            let mut v = ring.tensor.lift(&unit_vec(&f, d, a));
            let r = &rels[a % rels.len()];
            axpy(&f, &mut v, &f.from_i64(a as i64 + 1), r);
            v
        })
        .collect();
    let stride = if d <= 8 { 1 } else { d / 4 };
    let mut failures = 0;
    for a in (0..d).step_by(stride) {
        for b in (0..d).step_by(stride) {
            let p = ring.tensor.project(&ring.mul_reps(&reps[a], &reps[b]));
            if p != ring.algebra.mul(&unit_vec(&f, d, a), &unit_vec(&f, d, b)) {
                failures += 1;
            }
        }
    }
    failures
}

/// Compares two algebras through a linear bijection `phi` (rows are the
/// images of the basis of `source`): `phi(a b) = phi(a) phi(b)` on all
/// basis pairs and `phi(1) = 1`.
pub fn compare_structure<F: Field>(source: &Algebra<F>, target: &Algebra<F>, phi: &Matrix<F>) -> Result<(), NcError> {
    if source.dim() != target.dim() {
        return Err(NcError::OracleMismatch(format!("dimensions {} and {}", source.dim(), target.dim())));
    }
    if phi.rank() != source.dim() {
        return Err(NcError::OracleMismatch("the identification is not bijective".into()));
    }
    if phi.vec_mul(source.unit()) != *target.unit() {
        return Err(NcError::OracleMismatch("units differ".into()));
    }
    let m = AlgebraMorphism::new_unchecked(Arc::new(source.clone()), Arc::new(target.clone()), phi.clone());
    match m.check().failure {
        None => Ok(()),
        Some(e) => Err(NcError::OracleMismatch(format!("structure constants differ: {e}"))),
    }
}

/// The closed-form algebra `(A X; Y C ⊕ (Y ⊗_A X))`, basis order A, X, Y,
/// C, then the quotient basis of `Y ⊗_A X`.
#[derive(Debug, Clone)]
pub struct MoritaOracle<F: Field> {
    pub algebra: Algebra<F>,
    /// `Y ⊗_A X` as a quotient of `Y ⊗_k X`.
    pub yx: QuotientPresentation<F>,
    /// Offsets of the blocks A, X, Y, C, W.
    pub offsets: [usize; 5],
}

fn pairing_apply<F: Field>(f: &F, table: &[Vec<Vector<F>>], u: &[F::Elem], v: &[F::Elem], out: usize) -> Vector<F> {
    let mut acc = zero_vec(f, out);
    for (i, a) in u.iter().enumerate().filter(|(_, a)| !f.is_zero(a)) {
        for (j, b) in v.iter().enumerate().filter(|(_, b)| !f.is_zero(b)) {
            axpy(f, &mut acc, &f.mul(a, b), &table[i][j]);
        }
    }
    acc
}

pub fn nc_tensor_morita_oracle<F: Field>(data: &MoritaData<F>) -> Result<MoritaOracle<F>, NcError> {
    let (a, c, x, y) = (&data.a, &data.c, &data.x, &data.y);
    let k = a.field().clone();
    let (da, dx, dy, dc) = (a.dim(), x.dim(), y.dim(), c.dim());
    let yx = tensor_over(&y.right_module(), &x.left_module())?;
    let dw = yx.dim();
    let offsets = [0, da, da + dx, da + dx + dy, da + dx + dy + dc];
    let dim = offsets[4] + dw;
    let split = |v: &[F::Elem]| -> [Vector<F>; 5] {
        [
            v[..offsets[1]].to_vec(),
            v[offsets[1]..offsets[2]].to_vec(),
            v[offsets[2]..offsets[3]].to_vec(),
            v[offsets[3]..offsets[4]].to_vec(),
            v[offsets[4]..].to_vec(),
        ]
    };
    // g on Y ⊗_A X through section representatives
    let g_of = |w: &[F::Elem]| -> Vector<F> {
        let rep = yx.lift(w);
        let mut acc = zero_vec(&k, dc);
        for (idx, co) in rep.iter().enumerate().filter(|(_, co)| !k.is_zero(co)) {
            axpy(&k, &mut acc, co, &data.g[idx / dx][idx % dx]);
        }
        acc
    };
    let mul = |u: &[F::Elem], v: &[F::Elem]| -> Vector<F> {
        let [a1, x1, y1, c1, w1] = split(u);
        let [a2, x2, y2, c2, w2] = split(v);
        let mut ra = a.mul(&a1, &a2);
        axpy(&k, &mut ra, &k.one(), &pairing_apply(&k, &data.f, &x1, &y2, da));
        let mut rx = x.left_act(&a1, &x2);
        axpy(&k, &mut rx, &k.one(), &x.right_act(&x1, &c2));
        axpy(&k, &mut rx, &k.one(), &x.right_act(&x1, &g_of(&w2)));
        let mut ry = y.right_act(&y1, &a2);
        axpy(&k, &mut ry, &k.one(), &y.left_act(&c1, &y2));
        axpy(&k, &mut ry, &k.one(), &y.left_act(&g_of(&w1), &y2));
        let rc = c.mul(&c1, &c2);
        // y1⊗x2 + (c1 y')⊗x' + y⊗(x c2) + y⊗(f(x, y') x')
        let mut rw = outer(&k, &y1, &x2);
        let (r1, r2) = (yx.lift(&w1), yx.lift(&w2));
        for (idx, co) in r2.iter().enumerate().filter(|(_, co)| !k.is_zero(co)) {
            let (yj, xl) = (unit_vec(&k, dy, idx / dx), unit_vec(&k, dx, idx % dx));
            axpy(&k, &mut rw, co, &outer(&k, &y.left_act(&c1, &yj), &xl));
        }
        for (idx, co) in r1.iter().enumerate().filter(|(_, co)| !k.is_zero(co)) {
            let (yj, xl) = (unit_vec(&k, dy, idx / dx), unit_vec(&k, dx, idx % dx));
            axpy(&k, &mut rw, co, &outer(&k, &yj, &x.right_act(&xl, &c2)));
            for (idx2, co2) in r2.iter().enumerate().filter(|(_, co)| !k.is_zero(co)) {
                let (yj2, xl2) = (unit_vec(&k, dy, idx2 / dx), unit_vec(&k, dx, idx2 % dx));
                let fxy = pairing_apply(&k, &data.f, &xl, &yj2, da);
                axpy(&k, &mut rw, &k.mul(co, co2), &outer(&k, &yj, &x.left_act(&fxy, &xl2)));
            }
        }
        let rw = yx.project(&rw);
        [ra, rx, ry, rc, rw].concat()
    };
    let mut table = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let p = mul(&unit_vec(&k, dim, i), &unit_vec(&k, dim, j));
            table.push(p.into_iter().enumerate().filter(|(_, e)| !k.is_zero(e)).collect());
        }
    }
    let mut labels: Vec<String> = Vec::with_capacity(dim);
    labels.extend(a.labels().iter().map(|l| format!("a.{l}")));
    labels.extend(x.labels().iter().map(|l| format!("x.{l}")));
    labels.extend(y.labels().iter().map(|l| format!("y.{l}")));
    labels.extend(c.labels().iter().map(|l| format!("c.{l}")));
    labels.extend(yx.free.iter().map(|&i| format!("w.{}*{}", y.labels()[i / dx], x.labels()[i % dx])));
    let mut unit = zero_vec(&k, dim);
    unit[..da].clone_from_slice(a.unit());
    unit[offsets[3]..offsets[4]].clone_from_slice(c.unit());
    let algebra = Algebra::from_sparse(k, labels, table, unit)?;
    Ok(MoritaOracle { algebra, yx, offsets })
}

/// Images in `⊠` of the oracle basis: `a ↦ a ⊗ 1`, `x ↦ 1 ⊗ x`,
/// `y ↦ y ⊗ 1`, `c ↦ c ⊗ 1`, `y ⊗ x ↦ y ⊗ x`.
pub fn morita_identification<F: Field>(
    ring: &NcTensorRing<F>,
    data: &MoritaData<F>,
    oracle: &MoritaOracle<F>,
) -> Result<Matrix<F>, NcError> {
    let k = ring.field().clone();
    let gdim = data.gamma.dim();
    let (s, t) = (ring.context.s(), ring.context.t());
    let in_s = |g: usize| -> Result<Vector<F>, NcError> {
        data.s_embedding.matrix.solve_left(&unit_vec(&k, gdim, g)).ok_or_else(|| internal("not in S"))
    };
    let in_t = |g: usize| -> Result<Vector<F>, NcError> {
        data.t_embedding.matrix.solve_left(&unit_vec(&k, gdim, g)).ok_or_else(|| internal("not in T"))
    };
    let [_, ox, oy, oc, _] = oracle.offsets;
    let dx = data.x.dim();
    let mut rows = Vec::with_capacity(oracle.algebra.dim());
    for g in 0..ox {
        rows.push(ring.class_of(&in_t(g)?, s.unit()));
    }
    for g in ox..oy {
        rows.push(ring.class_of(t.unit(), &in_s(g)?));
    }
    for g in oy..oc + data.c.dim() {
        rows.push(ring.class_of(&in_t(g)?, s.unit()));
    }
    for &idx in &oracle.yx.free {
        rows.push(ring.class_of(&in_t(oy + idx / dx)?, &in_s(ox + idx % dx)?));
    }
    Ok(Matrix::from_rows(k, ring.dim(), &rows))
}

/// The closed-form algebra `R ⊕ X ⊕ Y ⊕ (Y ⊗_R X)` of a strictly pure
/// context, with `x ∘ y = 0` and `y ∘ x = y ⊗ x`.
#[derive(Debug, Clone)]
pub struct PureOracle<F: Field> {
    pub algebra: Algebra<F>,
    pub yx: QuotientPresentation<F>,
    pub offsets: [usize; 4],
}

pub fn nc_tensor_pure_oracle<F: Field>(data: &PureData<F>) -> Result<PureOracle<F>, NcError> {
    let r = data.lambda.source.clone();
    let (s, t) = (data.lambda.target.clone(), data.mu.target.clone());
    let k = r.field().clone();
    let (dr, dx, dy) = (r.dim(), data.x.len(), data.y.len());
    // split coordinates: S ∋ v = λ(r) + x
    let s_split = |v: &[F::Elem]| -> (Vector<F>, Vector<F>) {
        let c = data.s_split.coords(v).expect("S = λ(R) ⊕ X");
        (c[..dr].to_vec(), c[dr..].to_vec())
    };
    let t_split = |v: &[F::Elem]| -> (Vector<F>, Vector<F>) {
        let c = data.t_split.coords(v).expect("T = μ(R) ⊕ Y");
        (c[..dr].to_vec(), c[dr..].to_vec())
    };
    let x_vec = |c: &[F::Elem]| -> Vector<F> {
        let mut v = zero_vec(&k, s.dim());
        for (ci, xi) in c.iter().zip(&data.x) {
            axpy(&k, &mut v, ci, xi);
        }
        v
    };
    let y_vec = |c: &[F::Elem]| -> Vector<F> {
        let mut v = zero_vec(&k, t.dim());
        for (ci, yi) in c.iter().zip(&data.y) {
            axpy(&k, &mut v, ci, yi);
        }
        v
    };
    // products inside X and Y, read off in split coordinates
    let x_only = |v: &[F::Elem]| -> Vector<F> {
        let (rr, xx) = s_split(v);
        debug_assert!(is_zero_vec(&k, &rr));
        xx
    };
    let y_only = |v: &[F::Elem]| -> Vector<F> {
        let (rr, yy) = t_split(v);
        debug_assert!(is_zero_vec(&k, &rr));
        yy
    };
    let lam = |rv: &[F::Elem]| data.lambda.apply(rv);
    let mu = |rv: &[F::Elem]| data.mu.apply(rv);
    let x_actions: Vec<Matrix<F>> = (0..dr)
        .map(|i| {
            let rows: Vec<_> = (0..dx).map(|j| x_only(&s.mul(&lam(&unit_vec(&k, dr, i)), &data.x[j]))).collect();
            Matrix::from_rows(k.clone(), dx, &rows)
        })
        .collect();
    let y_actions: Vec<Matrix<F>> = (0..dr)
        .map(|i| {
            let rows: Vec<_> = (0..dy).map(|j| y_only(&t.mul(&data.y[j], &mu(&unit_vec(&k, dr, i))))).collect();
            Matrix::from_rows(k.clone(), dy, &rows)
        })
        .collect();
    let x_mod = Module::new(r.clone(), Side::Left, dx, x_actions)?;
    let y_mod = Module::new(r.clone(), Side::Right, dy, y_actions)?;
    let yx = tensor_over(&y_mod, &x_mod)?;
    let offsets = [0, dr, dr + dx, dr + dx + dy];
    let dim = offsets[3] + yx.dim();
    let mul = |u: &[F::Elem], v: &[F::Elem]| -> Vector<F> {
        let (r1, x1, y1, w1) = (&u[..dr], &u[dr..offsets[2]], &u[offsets[2]..offsets[3]], yx.lift(&u[offsets[3]..]));
        let (r2, x2, y2, w2) = (&v[..dr], &v[dr..offsets[2]], &v[offsets[2]..offsets[3]], yx.lift(&v[offsets[3]..]));
        let rr = r.mul(r1, r2);
        // (r1 + x1)(r2 + x2) in S minus r1 r2
        let s_prod = s.mul(&add(&k, &lam(r1), &x_vec(x1)), &add(&k, &lam(r2), &x_vec(x2)));
        let rx = x_only(&sub(&k, &s_prod, &lam(&rr)));
        let t_prod = t.mul(&add(&k, &mu(r1), &y_vec(y1)), &add(&k, &mu(r2), &y_vec(y2)));
        let ry = y_only(&sub(&k, &t_prod, &mu(&rr)));
        // y1⊗x2 + y3⊗(x3 r2) + (r1 y4)⊗x4 + (y1 y4)⊗x4 + y3⊗(x3 x2)
        let mut rw = outer(&k, y1, x2);
        for (idx, co) in w1.iter().enumerate().filter(|(_, co)| !k.is_zero(co)) {
            let (y3, x3) = (&data.y[idx / dx], &data.x[idx % dx]);
            let right = x_only(&s.mul(x3, &add(&k, &lam(r2), &x_vec(x2))));
            axpy(&k, &mut rw, co, &outer(&k, &unit_vec(&k, dy, idx / dx), &right));
            let _ = y3;
        }
        for (idx, co) in w2.iter().enumerate().filter(|(_, co)| !k.is_zero(co)) {
            let y4 = &data.y[idx / dx];
            let left = y_only(&t.mul(&add(&k, &mu(r1), &y_vec(y1)), y4));
            axpy(&k, &mut rw, co, &outer(&k, &left, &unit_vec(&k, dx, idx % dx)));
        }
        let rw = yx.project(&rw);
        [rr, rx, ry, rw].concat()
    };
    let mut table = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let p = mul(&unit_vec(&k, dim, i), &unit_vec(&k, dim, j));
            table.push(p.into_iter().enumerate().filter(|(_, e)| !k.is_zero(e)).collect());
        }
    }
    let mut labels: Vec<String> = r.labels().iter().map(|l| format!("r.{l}")).collect();
    labels.extend((0..dx).map(|i| format!("x{i}")));
    labels.extend((0..dy).map(|i| format!("y{i}")));
    labels.extend(yx.free.iter().map(|&i| format!("y{}*x{}", i / dx, i % dx)));
    let mut unit = zero_vec(&k, dim);
    unit[..dr].clone_from_slice(r.unit());
    let algebra = Algebra::from_sparse(k, labels, table, unit)?;
    Ok(PureOracle { algebra, yx, offsets })
}

fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
    crate::linalg::add_vec(f, a, b)
}

fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
    crate::linalg::sub_vec(f, a, b)
}

/// Images in `⊠` of the oracle basis: `r ↦ 1 ⊗ λ(r)`, `x ↦ 1 ⊗ x`,
/// `y ↦ y ⊗ 1`, `y ⊗ x ↦ y ⊗ x`.
pub fn pure_identification<F: Field>(ring: &NcTensorRing<F>, data: &PureData<F>, oracle: &PureOracle<F>) -> Matrix<F> {
    let k = ring.field().clone();
    let (s, t) = (ring.context.s(), ring.context.t());
    let dr = data.lambda.source.dim();
    let dx = data.x.len();
    let mut rows = Vec::with_capacity(oracle.algebra.dim());
    for i in 0..dr {
        rows.push(ring.class_of(t.unit(), data.lambda.matrix.row(i)));
    }
    for x in &data.x {
        rows.push(ring.class_of(t.unit(), x));
    }
    for y in &data.y {
        rows.push(ring.class_of(y, s.unit()));
    }
    for &idx in &oracle.yx.free {
        rows.push(ring.class_of(&data.y[idx / dx], &data.x[idx % dx]));
    }
    Matrix::from_rows(k, ring.dim(), &rows)
}

/// `B = (S M; 0 T)`, `C = M_2(⊠)` and `θ = (ρ β; 0 φ)`.
#[derive(Debug, Clone)]
pub struct ThetaData<F: Field> {
    pub ring: NcTensorRing<F>,
    pub b: Arc<Algebra<F>>,
    pub c: Arc<Algebra<F>>,
    pub theta: AlgebraMorphism<F>,
    pub e1: Vector<F>,
    pub e2: Vector<F>,
    /// `(0, m, 0)`: right multiplication by it is `φ_B: Be1 → Be2`.
    pub carrier: Vector<F>,
    /// `φ_B` from `Be1 ≅ S` to `Be2 ≅ M ⊕ T`.
    pub phi_b: Matrix<F>,
}

impl<F: Field> ThetaData<F> {
    /// Index in `C` of the `(i, j)` entry, `l`-th basis vector of `⊠`.
    pub fn c_index(&self, i: usize, j: usize, l: usize) -> usize {
        (i * 2 + j) * self.ring.dim() + l
    }

    /// `C_B`, restricted to the first row of `C`. `C_B` is the sum of two
    /// copies of it.
    pub fn row_module(&self) -> Module<F> {
        let d = self.ring.dim();
        let idx: Vec<usize> = (0..2 * d).collect();
        self.restricted(&idx, Side::Right)
    }

    /// `_B C`, restricted to the first column of `C`.
    pub fn column_module(&self) -> Module<F> {
        let d = self.ring.dim();
        let idx: Vec<usize> = (0..d).chain(2 * d..3 * d).collect();
        self.restricted(&idx, Side::Left)
    }

    fn restricted(&self, idx: &[usize], side: Side) -> Module<F> {
        let k = self.c.field().clone();
        let actions = (0..self.b.dim())
            .map(|bi| {
                let img = self.theta.matrix.row(bi);
                let full = match side {
                    Side::Right => self.c.right_mult_matrix(img),
                    Side::Left => self.c.left_mult_matrix(img),
                };
                let mut m = Matrix::zero(k.clone(), idx.len(), idx.len());
                for (r, &ri) in idx.iter().enumerate() {
                    for (c, &ci) in idx.iter().enumerate() {
                        m.set(r, c, full.get(ri, ci).clone());
                    }
                }
                m
            })
            .collect();
        Module::new_unchecked(self.b.clone(), side, idx.len(), actions)
    }
}

pub fn build_theta<F: Field>(ring: &NcTensorRing<F>) -> Result<ThetaData<F>, NcError> {
    let ctx = &ring.context;
    let k = ring.field().clone();
    let tri = triangular_algebra(ctx.s(), ctx.t(), &ctx.bimodule)?;
    let c = Arc::new(matrix_algebra(&ring.algebra, 2));
    let d = ring.dim();
    let (ds, dm, dt) = (tri.s_dim, tri.m_dim, tri.t_dim);
    let mut th = Matrix::zero(k.clone(), ds + dm + dt, 4 * d);
    th.write_block(0, 0, &ring.rho.matrix);
    th.write_block(ds, d, &ring.beta.projected);
    th.write_block(ds + dm, 3 * d, &ring.phi.matrix);
    let b = Arc::new(tri.algebra.clone());
    let theta = AlgebraMorphism::new(b.clone(), c.clone(), th)
        .map_err(|e| internal(format!("θ is not a ring homomorphism: {e}")))?;
    let mut carrier = zero_vec(&k, b.dim());
    carrier[ds..ds + dm].clone_from_slice(&ctx.m);
    let phi_b = ctx.sm.hstack(&Matrix::zero(k, ds, dt));
    Ok(ThetaData { ring: ring.clone(), b, c, theta, e1: tri.e1, e2: tri.e2, carrier, phi_b })
}

/// One named verdict with an optional witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name, passed, detail: detail.into() }
    }
}

/// `θ` is a ring epimorphism: with `C_B = P²` and `_BC = Q²`, `C ⊗_B C`
/// has dimension `4 dim(P ⊗_B Q)`, which must equal `dim C`.
pub fn theta_ring_epi<F: Field>(td: &ThetaData<F>) -> Result<RingEpiVerdict, NcError> {
    let pq = tensor_dim(&td.row_module(), &td.column_module())?;
    Ok(RingEpiVerdict { holds: 4 * pq == td.c.dim(), tensor_dim: 4 * pq, target_dim: td.c.dim() })
}

/// `Tor_i^B(C, C) = Tor_i^B(P, Q)^4`; dimensions are multiplied out.
pub fn theta_tor<F: Field>(td: &ThetaData<F>, max_degree: usize) -> Result<TorResult, NcError> {
    let mut t = tor(&td.row_module(), &td.column_module(), max_degree)?;
    for d in t.dims.iter_mut() {
        *d *= 4;
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationReport {
    pub checks: Vec<Check>,
}

impl LocalizationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `C ⊗_B Be ≅ Cθ(e)` for an idempotent `e`; the induced map of `φ_B` is
/// right multiplication by `θ(0, m, 0)`.
fn sigma_inverting<F: Field>(td: &ThetaData<F>) -> Check {
    let k = td.c.field().clone();
    let te1 = td.theta.apply(&td.e1);
    let te2 = td.theta.apply(&td.e2);
    let tm = td.theta.apply(&td.carrier);
    let n = td.c.dim();
    let v1 = crate::linalg::Subspace::spanned_by(
        k.clone(),
        n,
        &(0..n).map(|i| td.c.mul(&td.c.basis_vector(i), &te1)).collect::<Vec<_>>(),
    );
    let v2 = crate::linalg::Subspace::spanned_by(
        k.clone(),
        n,
        &(0..n).map(|i| td.c.mul(&td.c.basis_vector(i), &te2)).collect::<Vec<_>>(),
    );
    let images: Vec<_> = v1.basis().iter().map(|v| td.c.mul(v, &tm)).collect();
    let inside = images.iter().all(|w| v2.contains(w));
    let rank = Matrix::from_rows(k, n, &images).rank();
    let ok = inside && rank == v1.dim() && rank == v2.dim();
    Check::new(
        "sigma_inverting",
        ok,
        format!("dim C⊗Be1 = {}, dim C⊗Be2 = {}, rank = {rank}", v1.dim(), v2.dim()),
    )
}

/// `β` recomputed from scratch for an arbitrary vector of `M`.
fn beta_solve<F: Field>(ring: &NcTensorRing<F>, x: &[F::Elem]) -> Result<Vector<F>, NcError> {
    let f = ring.field().clone();
    let xs = Matrix::from_rows(f, x.len(), &[x.to_vec()]);
    let st = split_through_m(&ring.context, &xs)?;
    Ok(ring.tensor.project(&beta_from_split(&ring.context, st.row(0))))
}

/// The four defining relations of the localization, under `a_x = β(x)`.
fn sheiham_relations<F: Field>(ring: &NcTensorRing<F>) -> Result<Check, NcError> {
    let ctx = &ring.context;
    let a = &ring.algebra;
    let f = ring.field().clone();
    let (ds, dt, dm) = (ctx.s().dim(), ctx.t().dim(), ctx.bimodule.dim());
    let mut failures = Vec::new();
    if beta_solve(ring, &ctx.m)? != *a.unit() {
        failures.push("a_m != 1".to_string());
    }
    let bx: Vec<_> = (0..dm).map(|x| beta_solve(ring, &unit_vec(&f, dm, x))).collect::<Result<_, _>>()?;
    for x in 0..dm {
        for y in x..dm {
            let sum = crate::linalg::add_vec(&f, &unit_vec(&f, dm, x), &unit_vec(&f, dm, y));
            if beta_solve(ring, &sum)? != crate::linalg::add_vec(&f, &bx[x], &bx[y]) {
                failures.push(format!("a_x + a_y != a_(x+y) at ({x}, {y})"));
            }
        }
    }
    for i in 0..ds {
        let si = unit_vec(&f, ds, i);
        let a_sm = beta_solve(ring, &ctx.bimodule.left_act(&si, &ctx.m))?;
        for x in 0..dm {
            let sx = ctx.bimodule.left_act(&si, &unit_vec(&f, dm, x));
            if a.mul(&a_sm, &bx[x]) != beta_solve(ring, &sx)? {
                failures.push(format!("a_(sm) a_x != a_(sx) at (s{i}, x{x})"));
            }
        }
    }
    for j in 0..dt {
        let tj = unit_vec(&f, dt, j);
        let a_mt = beta_solve(ring, &ctx.bimodule.right_act(&ctx.m, &tj))?;
        for x in 0..dm {
            let xt = ctx.bimodule.right_act(&unit_vec(&f, dm, x), &tj);
            if a.mul(&bx[x], &a_mt) != beta_solve(ring, &xt)? {
                failures.push(format!("a_x a_(mt) != a_(xt) at (x{x}, t{j})"));
            }
        }
    }
    let detail = failures.first().cloned().unwrap_or_else(|| "all four relations hold".into());
    Ok(Check::new("sheiham_relations", failures.is_empty(), detail))
}

/// Checks (a) θ ring epimorphism, (b) `Tor_1^B(C, C) = 0`, (c) `C ⊗_B φ_B`
/// bijective, (d) the defining relations of the localization under `β`.
pub fn verify_localization_properties<F: Field>(td: &ThetaData<F>) -> Result<LocalizationReport, NcError> {
    let epi = theta_ring_epi(td)?;
    let t1 = theta_tor(td, 1)?;
    let checks = vec![
        Check::new(
            "theta_ring_epi",
            epi.holds,
            format!("dim C⊗_B C = {}, dim C = {}", epi.tensor_dim, epi.target_dim),
        ),
        Check::new("tor1_vanishes", t1.dims[1] == 0, format!("dim Tor_1^B(C, C) = {}", t1.dims[1])),
        sigma_inverting(td),
        sheiham_relations(&td.ring)?,
    ];
    Ok(LocalizationReport { checks })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Verdict {
    /// `dim Tor_i^R(T, S)`, `0 ≤ i ≤ bound`.
    pub tor: TorResult,
    pub criterion_holds: bool,
    pub failing_degree: Option<usize>,
    pub theta_ring_epi: bool,
    /// `dim Tor_i^B(C, C)`.
    pub theta_tor: TorResult,
    pub theta_homological: bool,
    pub agreement: bool,
}

/// `Tor_i^R(T, S) = 0` for `1 ≤ i ≤ bound`, cross-checked against `θ`
/// being a ring epimorphism with `Tor_i^B(C, C) = 0` in the same range.
pub fn theorem1_criterion<F: Field>(td: &ThetaData<F>, bound: usize) -> Result<Theorem1Verdict, NcError> {
    let ctx = &td.ring.context;
    let t = tor(&ctx.t_right(), &ctx.s_left(), bound)?;
    let failing_degree = t.first_nonvanishing();
    let criterion_holds = failing_degree.is_none();
    let epi = theta_ring_epi(td)?;
    let tt = theta_tor(td, bound)?;
    let theta_homological = epi.holds && tt.first_nonvanishing().is_none();
    Ok(Theorem1Verdict {
        tor: t,
        criterion_holds,
        failing_degree,
        theta_ring_epi: epi.holds,
        theta_tor: tt,
        theta_homological,
        agreement: criterion_holds == theta_homological,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidenceReport {
    pub dim: usize,
    pub mismatches: usize,
}

/// For commutative `R` with central images and an exact pair, `⊠` is the
/// usual tensor product `(t ⊗ s)(t′ ⊗ s′) = tt′ ⊗ ss′`.
pub fn commutative_coincidence_check<F: Field>(ring: &NcTensorRing<F>) -> Result<CoincidenceReport, NcError> {
    let ctx = &ring.context;
    if !ctx.r().is_commutative() {
        return Err(NcError::PreconditionFailed("R is not commutative".into()));
    }
    let central = |m: &AlgebraMorphism<F>| (0..m.source.dim()).all(|i| m.target.is_central(m.matrix.row(i)));
    if !central(&ctx.lambda) {
        return Err(NcError::PreconditionFailed("λ(R) is not central in S".into()));
    }
    if !central(&ctx.mu) {
        return Err(NcError::PreconditionFailed("μ(R) is not central in T".into()));
    }
    if !is_exact_pair(ctx)?.holds() {
        return Err(NcError::PreconditionFailed("(λ, μ) is not an exact pair".into()));
    }
    let k = ring.field().clone();
    let (s, t) = (ctx.s(), ctx.t());
    let ds = s.dim();
    let d = ring.dim();
    let reps = &ring.tensor.free;
    let mut mismatches = 0;
    for (a, &ra) in reps.iter().enumerate() {
        for (b, &rb) in reps.iter().enumerate() {
            let tt = t.mul(&t.basis_vector(ra / ds), &t.basis_vector(rb / ds));
            let ss = s.mul(&s.basis_vector(ra % ds), &s.basis_vector(rb % ds));
            let usual = ring.class_of(&tt, &ss);
            if usual != ring.algebra.mul(&unit_vec(&k, d, a), &unit_vec(&k, d, b)) {
                mismatches += 1;
            }
        }
    }
    Ok(CoincidenceReport { dim: d, mismatches })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndReport {
    pub applicable: bool,
    pub end_dim: usize,
    pub isomorphic: bool,
}

/// When `λ` is a ring epimorphism, `w ↦ (x ↦ x ∘ w)` is an isomorphism
/// `⊠ ≅ End_T(T ⊗_R S)`.
pub fn end_comparison<F: Field>(ring: &NcTensorRing<F>) -> Result<EndReport, NcError> {
    let ctx = &ring.context;
    if !is_ring_epimorphism(&ctx.lambda).holds {
        return Ok(EndReport { applicable: false, end_dim: 0, isomorphic: false });
    }
    let k = ring.field().clone();
    let d = ring.dim();
    let a = &ring.algebra;
    // T ⊗_R S as a left T-module through φ
    let actions: Vec<_> = (0..ctx.t().dim()).map(|i| a.left_mult_matrix(ring.phi.matrix.row(i))).collect();
    let module = Module::new(ctx.t().clone(), Side::Left, d, actions)?;
    let (end, mats) = end_algebra(&module);
    let coords = Basis::new(k.clone(), d * d, mats.iter().map(|m| m.data().to_vec()).collect()).expect("basis");
    let mut rows = Vec::with_capacity(d);
    for w in 0..d {
        let r = a.right_mult_matrix(&unit_vec(&k, d, w));
        match coords.coords(r.data()) {
            Some(c) => rows.push(c),
            None => return Ok(EndReport { applicable: true, end_dim: end.dim(), isomorphic: false }),
        }
    }
    let iso = compare_structure(a, &end, &Matrix::from_rows(k, end.dim(), &rows)).is_ok();
    Ok(EndReport { applicable: true, end_dim: end.dim(), isomorphic: iso })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdReport {
    pub pd_rs: usize,
    pub pd_bc: usize,
    pub pd_tr: usize,
    pub pd_cb: usize,
    pub checks: Vec<Check>,
}

impl PdReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `pd(_R S) ≤ max{1, pd(_B C)}`, `pd(_B C) ≤ max{2, pd(_R S) + 1}` and the
/// same for `T_R`, `C_B`. Requires the Tor criterion up to `bound`.
pub fn pd_inequality_check<F: Field>(td: &ThetaData<F>, bound: usize) -> Result<PdReport, NcError> {
    let ctx = &td.ring.context;
    let t = tor(&ctx.t_right(), &ctx.s_left(), bound)?;
    if let Some(i) = t.first_nonvanishing() {
        return Err(NcError::PreconditionFailed(format!("Tor_{i}^R(T, S) != 0")));
    }
    let get = |m: &Module<F>, what: &str| -> Result<usize, NcError> {
        match projective_dimension(m, bound)? {
            ProjectiveDimension::Exactly(n) => Ok(n),
            ProjectiveDimension::AtLeast(n) => Err(NcError::Inconclusive(format!("pd({what}) >= {n}"))),
        }
    };
    let pd_rs = get(&ctx.s_left(), "_R S")?;
    let pd_tr = get(&ctx.t_right(), "T_R")?;
    let pd_bc = get(&td.column_module(), "_B C")?;
    let pd_cb = get(&td.row_module(), "C_B")?;
    let checks = vec![
        Check::new("pd_rs_le", pd_rs <= pd_bc.max(1), format!("{pd_rs} <= max(1, {pd_bc})")),
        Check::new("pd_bc_le", pd_bc <= 2.max(pd_rs + 1), format!("{pd_bc} <= max(2, {pd_rs} + 1)")),
        Check::new("pd_tr_le", pd_tr <= pd_cb.max(1), format!("{pd_tr} <= max(1, {pd_cb})")),
        Check::new("pd_cb_le", pd_cb <= 2.max(pd_tr + 1), format!("{pd_cb} <= max(2, {pd_tr} + 1)")),
    ];
    Ok(PdReport { pd_rs, pd_bc, pd_tr, pd_cb, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::subalgebra_from_spanning;
    use crate::context::{context_from_extension, context_from_morita, context_from_strictly_pure, trivial_context};
    use crate::field::{PrimeField, Rationals};
    use crate::module::Bimodule;

    fn k() -> Arc<Algebra<Rationals>> {
        Arc::new(Algebra::ground(Rationals))
    }

    fn morita(v: i64) -> (ExactContext<Rationals>, MoritaData<Rationals>) {
        let one = vec![vec![vec![Rationals.from_i64(v)]]];
        context_from_morita(k(), k(), Bimodule::regular(k()), Bimodule::regular(k()), one.clone(), one).unwrap()
    }

    #[test]
    fn trivial_context_gives_r() {
        let r = Arc::new(Algebra::truncated_polynomial(Rationals, 3, "x"));
        let ctx = trivial_context(r.clone());
        let ring = build_nc_tensor(&ctx).unwrap();
        assert_eq!(ring.dim(), 3);
        // class(1 ⊗ b_i) ↦ b_i
        compare_structure(&ring.algebra, &r, &ring.rho.matrix.inverse().unwrap()).unwrap();
        assert!(ring_axiom_suite(&ring).passed());
        assert_eq!(ring.beta.projected, ring.rho.matrix);
        let td = build_theta(&ring).unwrap();
        assert_eq!(td.b.dim(), 9);
        assert_eq!(td.c.dim(), 12);
        assert!(verify_localization_properties(&td).unwrap().passed());
        let v = theorem1_criterion(&td, 4).unwrap();
        assert!(v.criterion_holds && v.agreement);
        let pd = pd_inequality_check(&td, 3).unwrap();
        assert!(pd.passed());
        assert_eq!((pd.pd_rs, pd.pd_tr), (0, 0));
    }

    #[test]
    fn theta_ring_epi_matches_direct_computation() {
        let (ctx, _) = morita(0);
        let ring = build_nc_tensor(&ctx).unwrap();
        let td = build_theta(&ring).unwrap();
        let direct = is_ring_epimorphism(&td.theta);
        assert_eq!(theta_ring_epi(&td).unwrap(), direct);
        let (cb, bc) = crate::homological::bimodule_sides(&td.theta);
        let t = tor(&cb, &bc, 3).unwrap();
        assert_eq!(theta_tor(&td, 3).unwrap().dims, t.dims);
        let (p, q) = (td.row_module(), td.column_module());
        let pd = |m| crate::homological::projective_dimension(m, 4).unwrap();
        assert_eq!(pd(&cb), pd(&p));
        assert_eq!(pd(&bc), pd(&q));
    }

    #[test]
    fn morita_oracles() {
        for v in [0, 1, 3] {
            let (ctx, data) = morita(v);
            let ring = build_nc_tensor(&ctx).unwrap();
            assert_eq!(ring.dim(), 5);
            assert!(ring_axiom_suite(&ring).passed());
            let oracle = nc_tensor_morita_oracle(&data).unwrap();
            let phi = morita_identification(&ring, &data, &oracle).unwrap();
            compare_structure(&oracle.algebra, &ring.algebra, &phi).unwrap();
        }
    }

    #[test]
    fn pure_oracle_on_square_zero_extension() {
        // S = T = k[x]/(x²) over R = k, X = Y = (x)
        let s = Arc::new(Algebra::truncated_polynomial(PrimeField::new(101).unwrap(), 2, "x"));
        let (_, inc) = subalgebra_from_spanning(&s, &[s.unit().clone()]).unwrap();
        let (ctx, data) =
            context_from_strictly_pure(inc.clone(), inc.clone(), vec![s.basis_vector(1)], vec![s.basis_vector(1)])
                .unwrap();
        let ring = build_nc_tensor(&ctx).unwrap();
        assert_eq!(ring.dim(), 4);
        let oracle = nc_tensor_pure_oracle(&data).unwrap();
        let phi = pure_identification(&ring, &data, &oracle);
        compare_structure(&oracle.algebra, &ring.algebra, &phi).unwrap();
        // x ∘ y = 0, y ∘ x = y ⊗ x
        let o = &oracle.algebra;
        assert!(is_zero_vec(o.field(), &o.mul(&o.basis_vector(1), &o.basis_vector(2))));
        assert_eq!(o.mul(&o.basis_vector(2), &o.basis_vector(1)), o.basis_vector(3));
    }

    #[test]
    fn extension_context_checks() {
        let s = Arc::new(Algebra::truncated_polynomial(Rationals, 2, "x"));
        let (_, inc) = subalgebra_from_spanning(&s, &[s.unit().clone()]).unwrap();
        let (ctx, _) = context_from_extension(&inc).unwrap();
        let ring = build_nc_tensor(&ctx).unwrap();
        assert!(ring_axiom_suite(&ring).passed());
        let td = build_theta(&ring).unwrap();
        assert!(verify_localization_properties(&td).unwrap().passed());
        let v = theorem1_criterion(&td, 3).unwrap();
        assert!(v.agreement);
    }

    #[test]
    fn coincidence_on_commutative_data() {
        let r = Arc::new(crate::algebra::product(&Algebra::ground(Rationals), &Algebra::ground(Rationals)));
        let ring = build_nc_tensor(&trivial_context(r)).unwrap();
        assert_eq!(commutative_coincidence_check(&ring).unwrap().mismatches, 0);
        let (ctx, _) = morita(1);
        let ring = build_nc_tensor(&ctx).unwrap();
        assert!(matches!(commutative_coincidence_check(&ring), Err(NcError::PreconditionFailed(_))));
    }

    #[test]
    fn end_comparison_for_identity() {
        let r = Arc::new(Algebra::truncated_polynomial(Rationals, 2, "x"));
        let ring = build_nc_tensor(&trivial_context(r)).unwrap();
        let rep = end_comparison(&ring).unwrap();
        assert!(rep.applicable && rep.isomorphic);
    }
}
