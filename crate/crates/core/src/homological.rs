//! Projective resolutions, Tor, the Jacobson radical, projective dimension
//! and ring-epimorphism tests.
//!
//! Resolutions are built on the side of the module itself. Each term is a
//! sum of summands `eR` for idempotents `e` of a decomposition of the unit,
//! stored inside a free module `R^n` as in [`FreeModule`]; a generator `g`
//! with `g = g·e` covers by `eR`. Without a finer decomposition than `1`
//! the terms are free.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraMorphism};
use crate::field::Field;
use crate::linalg::{Basis, Matrix, Subspace, Vector};
use crate::module::{hom_space, relation_map, tensor_dim, Action, FreeModule, Module, ModuleError, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologicalError {
    #[error("characteristic {p} is too small for the trace-form radical of a {dim}-dimensional algebra")]
    CharacteristicTooSmall { p: u64, dim: usize },
    #[error("expected a {expected} module")]
    WrongSide { expected: Side },
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// Jacobson radical via the trace form `(x, y) ↦ tr(L_{xy})`: its radical is
/// a nil ideal once `p > dim`, and contains every nilpotent ideal.
pub fn radical<F: Field>(a: &Algebra<F>) -> Result<Subspace<F>, HomologicalError> {
    let f = a.field();
    let p = f.characteristic();
    let d = a.dim();
    if p != 0 && p as usize <= d {
        return Err(HomologicalError::CharacteristicTooSmall { p, dim: d });
    }
    // τ_l = tr(L_{b_l}) = Σ_k c_{lk}^k
    let tau: Vec<F::Elem> = (0..d)
        .map(|l| {
            let mut acc = f.zero();
            for k in 0..d {
                for (idx, c) in a.basis_product(l, k) {
                    if *idx == k {
                        acc = f.add(&acc, c);
                    }
                }
            }
            acc
        })
        .collect();
    let mut g = Matrix::zero(f.clone(), d, d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = f.zero();
            for (l, c) in a.basis_product(i, j) {
                f.add_mul_assign(&mut acc, c, &tau[*l]);
            }
            g.set(i, j, acc);
        }
    }
    Ok(Subspace::spanned_by(f.clone(), d, &g.left_kernel()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionKind {
    /// Generators chosen greedily from a spanning set.
    Free,
    /// Generators lifted from a basis of the top `X/XJ`. For local algebras
    /// this is the minimal projective resolution.
    MinimalProjective,
}

#[derive(Debug, Clone)]
pub struct Resolution<F: Field> {
    pub module: Module<F>,
    pub kind: ResolutionKind,
    /// `n_0, n_1, …`: number of summands of `P_0, P_1, …`
    pub ranks: Vec<usize>,
    /// `summands[k][j]` indexes the idempotent `e` of the algebra whose
    /// summand `eR` (right) or `Re` (left) is the `j`-th summand of `P_k`.
    pub summands: Vec<Vec<usize>>,
    /// `P_0 → X`, rows indexed by the basis of `P_0`.
    pub cover: Matrix<F>,
    /// `relations[k]` are the images in `R^{n_k}` of the generators of
    /// `P_{k+1}`.
    pub relations: Vec<Vec<Vector<F>>>,
    /// `differentials[k]` is `d_{k+1}: P_{k+1} → P_k` on the summand bases.
    pub differentials: Vec<Matrix<F>>,
    /// Bases of the syzygies `Ω^{k+1} = ker(d_k)` inside `R^{n_k}` (with `d_0`
    /// the cover), as far as they were computed.
    pub syzygies: Vec<Vec<Vector<F>>>,
    /// Whether some syzygy vanished, so the resolution is finite.
    pub terminated: bool,
}

impl<F: Field> Resolution<F> {
    pub fn length(&self) -> usize {
        self.differentials.len()
    }
}

/// Bases of `eR` (right) or `Re` (left) for the idempotents of `R`.
pub(crate) struct Summands<F: Field> {
    pub idempotents: Vec<Vector<F>>,
    pub bases: Vec<Basis<F>>,
}

impl<F: Field> Summands<F> {
    pub fn new(alg: &Algebra<F>, side: Side) -> Self {
        let f = alg.field().clone();
        let idempotents = refined_idempotents(alg).to_vec();
        let bases = idempotents
            .iter()
            .map(|e| {
                let spanning: Vec<_> = (0..alg.dim())
                    .map(|l| {
                        let b = alg.basis_vector(l);
                        match side {
                            Side::Right => alg.mul(e, &b),
                            Side::Left => alg.mul(&b, e),
                        }
                    })
                    .collect();
                let sub = Subspace::spanned_by(f.clone(), alg.dim(), &spanning);
                Basis::new(f.clone(), alg.dim(), sub.basis().to_vec()).expect("rref rows are independent")
            })
            .collect();
        Summands { idempotents, bases }
    }

    fn dim_of(&self, summands: &[usize]) -> usize {
        summands.iter().map(|&i| self.bases[i].len()).sum()
    }

    /// Candidate generators `v·e` for `v` in `spanning`, tagged with `e`.
    fn split<A: Action<F>>(&self, m: &A, spanning: &[Vector<F>]) -> Vec<(Vector<F>, usize)> {
        if self.idempotents.len() == 1 {
            return spanning.iter().map(|v| (v.clone(), 0)).collect();
        }
        let f = m.algebra().field();
        let mut out = Vec::new();
        for (i, e) in self.idempotents.iter().enumerate() {
            for w in m.act_by_all(spanning, e) {
                if w.iter().any(|c| !f.is_zero(c)) {
                    out.push((w, i));
                }
            }
        }
        out
    }

    /// Rows `g·b` over the bases of the summands of the generators `g`.
    fn cover<A: Action<F>>(&self, m: &A, gens: &[(Vector<F>, usize)]) -> Matrix<F> {
        let mut rows = Vec::new();
        for (g, i) in gens {
            for b in self.bases[*i].vectors() {
                rows.push(m.act_by(g, b));
            }
        }
        Matrix::from_rows(m.algebra().field().clone(), m.dim(), &rows)
    }

    /// A coordinate vector on the summand bases as an element of `R^n`.
    fn embed(&self, summands: &[usize], c: &[F::Elem]) -> Vector<F> {
        let mut out = Vec::new();
        let mut at = 0;
        for &i in summands {
            let b = &self.bases[i];
            out.extend(b.combine(&c[at..at + b.len()]));
            at += b.len();
        }
        out
    }

    /// Inverse of [`Summands::embed`].
    fn coords(&self, summands: &[usize], v: &[F::Elem]) -> Vector<F> {
        let d = v.len() / summands.len().max(1);
        let mut out = Vec::new();
        for (j, &i) in summands.iter().enumerate() {
            out.extend(self.bases[i].coords(&v[j * d..(j + 1) * d]).expect("component lies in its summand"));
        }
        out
    }

    /// The projective `⊕ e_j R` as a module, with its basis embedded in `R^n`.
    fn module(&self, alg: &Arc<Algebra<F>>, side: Side, summands: &[usize]) -> (Module<F>, Vec<Vector<F>>) {
        let f = alg.field().clone();
        let n = self.dim_of(summands);
        let basis: Vec<_> = (0..n).map(|k| self.embed(summands, &crate::linalg::unit_vec(&f, n, k))).collect();
        let free = FreeModule::new(alg.clone(), side, summands.len());
        (submodule_of_free(&free, &basis), basis)
    }
}

enum Strategy<F: Field> {
    Greedy,
    Top(Vec<Vector<F>>),
}

impl<F: Field> Strategy<F> {
    fn choose<A: Action<F>>(&self, m: &A, sum: &Summands<F>, spanning: &[Vector<F>]) -> Vec<(Vector<F>, usize)> {
        let cands = sum.split(m, spanning);
        let vecs: Vec<_> = cands.iter().map(|(v, _)| v.clone()).collect();
        let picked = match self {
            Strategy::Greedy => m.pick_among(&vecs),
            Strategy::Top(rad) => m.pick_mod(spanning, &vecs, rad),
        };
        picked.into_iter().map(|k| cands[k].clone()).collect()
    }
}

fn resolve<F: Field>(x: &Module<F>, length: usize, strategy: Strategy<F>) -> Resolution<F> {
    let f = x.field().clone();
    let alg = x.algebra().clone();
    let side = x.side();
    let sum = Summands::new(&alg, side);
    let standard: Vec<_> = (0..x.dim()).map(|i| crate::linalg::unit_vec(&f, x.dim(), i)).collect();
    let gens = strategy.choose(x, &sum, &standard);
    let cover = sum.cover(x, &gens);
    let mut summands = vec![gens.iter().map(|g| g.1).collect::<Vec<_>>()];
    let mut ranks = vec![gens.len()];
    let mut relations = Vec::new();
    let mut differentials = Vec::new();
    let mut syzygies = Vec::new();
    let mut kernel: Vec<_> = cover.left_kernel().iter().map(|c| sum.embed(&summands[0], c)).collect();
    let mut terminated = kernel.is_empty();
    while !terminated && differentials.len() < length {
        let prev = summands.last().unwrap().clone();
        let free = FreeModule::new(alg.clone(), side, prev.len());
        let rels = strategy.choose(&free, &sum, &kernel);
        let this: Vec<usize> = rels.iter().map(|g| g.1).collect();
        let ambient = sum.cover(&free, &rels);
        let rows: Vec<_> = (0..ambient.rows()).map(|r| sum.coords(&prev, ambient.row(r))).collect();
        let d = Matrix::from_rows(f.clone(), sum.dim_of(&prev), &rows);
        ranks.push(rels.len());
        syzygies.push(std::mem::take(&mut kernel));
        kernel = d.left_kernel().iter().map(|c| sum.embed(&this, c)).collect();
        summands.push(this);
        relations.push(rels.into_iter().map(|g| g.0).collect());
        differentials.push(d);
        terminated = kernel.is_empty();
    }
    if !kernel.is_empty() {
        syzygies.push(kernel);
    }
    let kind = match strategy {
        Strategy::Greedy => ResolutionKind::Free,
        Strategy::Top(_) => ResolutionKind::MinimalProjective,
    };
    Resolution { module: x.clone(), kind, ranks, summands, cover, relations, differentials, syzygies, terminated }
}

/// Projective resolution with `length` differentials (fewer if it
/// terminates), generators chosen greedily.
pub fn free_resolution<F: Field>(x: &Module<F>, length: usize) -> Resolution<F> {
    resolve(x, length, Strategy::Greedy)
}

/// Resolution by covers of the top at every stage.
pub fn minimal_resolution<F: Field>(x: &Module<F>, length: usize) -> Result<Resolution<F>, HomologicalError> {
    let rad = radical(x.algebra())?;
    Ok(resolve(x, length, Strategy::Top(rad.basis().to_vec())))
}

/// Resolution used internally: top covers when the radical is available,
/// greedy generators otherwise.
fn best_resolution<F: Field>(x: &Module<F>, length: usize) -> Resolution<F> {
    match radical(x.algebra()) {
        Ok(rad) => resolve(x, length, Strategy::Top(rad.basis().to_vec())),
        Err(_) => free_resolution(x, length),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorResult {
    /// `dims[i] = dim Tor_i` for `0 ≤ i ≤ bound`.
    pub dims: Vec<usize>,
    pub bound: usize,
    /// Length of a finite resolution, when one was found: all `Tor_i` with
    /// `i` beyond it vanish.
    pub certified_length: Option<usize>,
}

impl TorResult {
    pub fn higher_vanish(&self) -> bool {
        self.dims.iter().skip(1).all(|&d| d == 0)
    }

    pub fn first_nonvanishing(&self) -> Option<usize> {
        (1..self.dims.len()).find(|&i| self.dims[i] != 0)
    }
}

/// `Tor_i^R(t, s)` for `0 ≤ i ≤ max_degree`: homology of the resolution of
/// the right module `t` tensored with the left module `s`.
pub fn tor<F: Field>(t: &Module<F>, s: &Module<F>, max_degree: usize) -> Result<TorResult, HomologicalError> {
    if t.side() != Side::Right {
        return Err(HomologicalError::WrongSide { expected: Side::Right });
    }
    if s.side() != Side::Left {
        return Err(HomologicalError::WrongSide { expected: Side::Left });
    }
    if !t.algebra().same_structure(s.algebra()) {
        return Err(ModuleError::AlgebraMismatch.into());
    }
    let res = best_resolution(t, max_degree + 1);
    Ok(tor_from_resolution(&res, s, max_degree))
}

fn tor_from_resolution<F: Field>(res: &Resolution<F>, s: &Module<F>, max_degree: usize) -> TorResult {
    let f = s.field().clone();
    let alg = s.algebra();
    // P_k ⊗ s = ⊕ e_j s; rows of `onto[i]` span `e_i s`
    let onto: Vec<Matrix<F>> = refined_idempotents(alg)
        .iter()
        .map(|e| {
            let a = s.action_of(e);
            let sub = Subspace::spanned_by(f.clone(), s.dim(), &(0..a.rows()).map(|r| a.row(r).to_vec()).collect::<Vec<_>>());
            Matrix::from_rows(f.clone(), s.dim(), sub.basis())
        })
        .collect();
    let chain_dim = |k: usize| -> usize {
        res.summands.get(k).map_or(0, |ss| ss.iter().map(|&i| onto[i].rows()).sum())
    };
    // ∂_i: P_i ⊗ s → P_{i-1} ⊗ s, for 1 ≤ i ≤ max_degree + 1
    let mut ranks_of_boundary = vec![0usize; max_degree + 2];
    for i in 1..=max_degree + 1 {
        if let Some(rels) = res.relations.get(i - 1) {
            let full = relation_map(rels, res.ranks[i - 1], s);
            let ds = s.dim();
            let mut rows = Vec::new();
            for (p, &e) in res.summands[i].iter().enumerate() {
                let block = Matrix::from_rows(f.clone(), full.cols(), &(p * ds..(p + 1) * ds).map(|r| full.row(r).to_vec()).collect::<Vec<_>>());
                let restricted = onto[e].mul(&block);
                rows.extend((0..restricted.rows()).map(|r| restricted.row(r).to_vec()));
            }
            ranks_of_boundary[i] = Matrix::from_rows(f.clone(), full.cols(), &rows).rank();
        }
    }
    let dims = (0..=max_degree).map(|i| chain_dim(i) - ranks_of_boundary[i] - ranks_of_boundary[i + 1]).collect();
    let certified_length = res.terminated.then(|| res.length());
    TorResult { dims, bound: max_degree, certified_length }
}

/// Same Tor computed by resolving `s` instead (over the opposite algebra).
pub fn tor_via_left<F: Field>(t: &Module<F>, s: &Module<F>, max_degree: usize) -> Result<TorResult, HomologicalError> {
    tor(&s.to_opposite(), &t.to_opposite(), max_degree)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectiveDimension {
    Exactly(usize),
    /// Not certified within the bound: the value is at least this.
    AtLeast(usize),
}

impl ProjectiveDimension {
    pub fn value(&self) -> Option<usize> {
        match self {
            ProjectiveDimension::Exactly(n) => Some(*n),
            ProjectiveDimension::AtLeast(_) => None,
        }
    }
}

impl std::fmt::Display for ProjectiveDimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProjectiveDimension::Exactly(n) => write!(f, "{n}"),
            ProjectiveDimension::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

/// Whether `x` is projective: its cover by a projective `P` must split.
pub fn is_projective<F: Field>(x: &Module<F>) -> bool {
    if x.dim() == 0 {
        return true;
    }
    let f = x.field().clone();
    let sum = Summands::new(x.algebra(), x.side());
    let standard: Vec<_> = (0..x.dim()).map(|i| crate::linalg::unit_vec(&f, x.dim(), i)).collect();
    let gens = Strategy::Greedy.choose(x, &sum, &standard);
    let cover = sum.cover(x, &gens);
    if cover.left_kernel().is_empty() {
        return true;
    }
    let ids: Vec<usize> = gens.iter().map(|g| g.1).collect();
    let (p, _) = sum.module(x.algebra(), x.side(), &ids);
    splits(x, &p, &cover)
}

/// Whether the surjection `p → x` given by `cover` has a module section.
fn splits<F: Field>(x: &Module<F>, p: &Module<F>, cover: &Matrix<F>) -> bool {
    let f = x.field().clone();
    let hom = hom_space(x, p).expect("same algebra and side");
    if hom.dim() == 0 {
        return false;
    }
    // Σ c_a H_a·P = I
    let rows: Vec<Vector<F>> = hom.basis.iter().map(|h| h.mul(cover).data().to_vec()).collect();
    let sys = Matrix::from_rows(f.clone(), x.dim() * x.dim(), &rows);
    sys.solve_left(Matrix::identity(f, x.dim()).data()).is_some()
}

/// Projective dimension of a module given on its own side, certified by a
/// splitting test at each syzygy.
pub fn projective_dimension<F: Field>(x: &Module<F>, bound: usize) -> Result<ProjectiveDimension, HomologicalError> {
    radical(x.algebra())?;
    Ok(pd_unchecked(x, bound))
}

pub(crate) fn pd_unchecked<F: Field>(x: &Module<F>, bound: usize) -> ProjectiveDimension {
    if let Ok(rad) = radical(x.algebra()) {
        if idempotents_are_split_local(x.algebra(), &rad) {
            // a minimal resolution: its length is the projective dimension
            let res = resolve(x, bound, Strategy::Top(rad.basis().to_vec()));
            return if res.terminated {
                ProjectiveDimension::Exactly(res.length())
            } else {
                ProjectiveDimension::AtLeast(bound + 1)
            };
        }
    }
    if is_projective(x) {
        return ProjectiveDimension::Exactly(0);
    }
    let res = best_resolution(x, bound);
    for k in 1..=bound {
        // Ω^k ⊂ R^{n_{k-1}}
        let Some(basis) = res.syzygies.get(k - 1) else {
            // a vanished syzygy
            return ProjectiveDimension::Exactly(k - 1);
        };
        let free = FreeModule::new(x.algebra().clone(), x.side(), res.ranks[k - 1]);
        let omega = submodule_of_free(&free, basis);
        if is_projective(&omega) {
            return ProjectiveDimension::Exactly(k);
        }
    }
    ProjectiveDimension::AtLeast(bound + 1)
}

/// `eRe / eJe = k` for every idempotent of the refined decomposition.
/// Then each is primitive with a one-dimensional top, top covers are
/// projective covers, and top-cover resolutions are minimal.
pub fn idempotents_are_split_local<F: Field>(a: &Algebra<F>, rad: &Subspace<F>) -> bool {
    let f = a.field();
    refined_idempotents(a).iter().all(|e| {
        let whole = corner(a, e).dim();
        let eje: Vec<_> = rad.basis().iter().map(|j| a.mul(&a.mul(e, j), e)).collect();
        whole == Subspace::spanned_by(f.clone(), a.dim(), &eje).dim() + 1
    })
}

/// `eRe`.
fn corner<F: Field>(a: &Algebra<F>, e: &[F::Elem]) -> Subspace<F> {
    let ere: Vec<_> = (0..a.dim()).map(|l| a.mul(&a.mul(e, &a.basis_vector(l)), e)).collect();
    Subspace::spanned_by(a.field().clone(), a.dim(), &ere)
}

/// The algebra's idempotents, split further wherever some `c ∈ eRe` is
/// neither nilpotent nor invertible there.
pub fn refined_idempotents<F: Field>(a: &Algebra<F>) -> &[Vector<F>] {
    a.refined_idempotents(|a| {
        let mut done = Vec::new();
        let mut todo: Vec<Vector<F>> = a.idempotents().to_vec();
        todo.reverse();
        while let Some(e) = todo.pop() {
            match split_idempotent(a, &e) {
                Some((u, v)) => {
                    todo.push(v);
                    todo.push(u);
                }
                None => done.push(e),
            }
        }
        done
    })
}

/// `e = u + v` with `u`, `v` orthogonal nonzero idempotents. For `c ∈ eRe`
/// and `b = c^N` with `N ≥ dim eRe`, `b` is invertible in the Fitting
/// component of `k[c]` it generates, whose unit `u ∈ b·k[c]` solves `u·b = b`.
fn split_idempotent<F: Field>(a: &Algebra<F>, e: &Vector<F>) -> Option<(Vector<F>, Vector<F>)> {
    let f = a.field().clone();
    let ere = corner(a, e);
    let n = ere.dim();
    if n <= 1 {
        return None;
    }
    let is_zero = |v: &[F::Elem]| v.iter().all(|c| f.is_zero(c));
    let mut cands: Vec<Vector<F>> = Vec::new();
    for c in ere.basis() {
        cands.push(c.clone());
        for s in 1..=3 {
            let mut shifted = c.clone();
            crate::linalg::axpy(&f, &mut shifted, &f.neg(&f.from_i64(s)), e);
            cands.push(shifted);
        }
    }
    for c in cands.iter().filter(|c| !is_zero(c)) {
        let mut b = c.clone();
        let mut power = 1;
        while power < n {
            b = a.mul(&b, &b);
            power *= 2;
        }
        if is_zero(&b) {
            continue;
        }
        let rank = Subspace::spanned_by(f.clone(), a.dim(), &ere.basis().iter().map(|v| a.mul(&b, v)).collect::<Vec<_>>()).dim();
        if rank == n {
            continue;
        }
        // b, b·c, …, b·c^{n-1}
        let mut powers = vec![b.clone()];
        for _ in 1..n {
            let next = a.mul(powers.last().unwrap(), c);
            powers.push(next);
        }
        let rows: Vec<_> = powers.iter().map(|p| a.mul(p, &b)).collect();
        let sys = Matrix::from_rows(f.clone(), a.dim(), &rows);
        let Some(x) = sys.solve_left(&b) else { continue };
        let mut u = a.zero();
        for (xi, p) in x.iter().zip(&powers) {
            crate::linalg::axpy(&f, &mut u, xi, p);
        }
        let mut v = e.clone();
        crate::linalg::axpy(&f, &mut v, &f.neg(&f.one()), &u);
        if !is_zero(&u) && !is_zero(&v) && a.mul(&u, &u) == u && a.mul(&u, &v) == a.zero() && a.mul(&v, &u) == a.zero() {
            return Some((u, v));
        }
    }
    None
}

fn submodule_of_free<F: Field>(free: &FreeModule<F>, basis: &[Vector<F>]) -> Module<F> {
    let f = free.algebra().field().clone();
    let coords = crate::linalg::Basis::new(f.clone(), free.dim(), basis.to_vec()).expect("independent");
    let d = free.algebra().dim();
    let action = (0..d)
        .map(|g| {
            let rows: Vec<_> = basis
                .iter()
                .map(|v| coords.coords(&free.act(v, g)).expect("syzygy is a submodule"))
                .collect();
            Matrix::from_rows(f.clone(), basis.len(), &rows)
        })
        .collect();
    Module::new_unchecked(free.algebra().clone(), free.side(), basis.len(), action)
}

/// `S` as a right and as a left `R`-module along `f: R → S`.
pub fn bimodule_sides<F: Field>(f: &AlgebraMorphism<F>) -> (Module<F>, Module<F>) {
    let s = f.target.clone();
    let right = Module::regular(s.clone(), Side::Right).restrict(f).expect("same algebra");
    let left = Module::regular(s, Side::Left).restrict(f).expect("same algebra");
    (right, left)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingEpiVerdict {
    pub holds: bool,
    /// `dim S ⊗_R S`
    pub tensor_dim: usize,
    pub target_dim: usize,
}

/// The multiplication `S ⊗_R S → S` is always onto, so it is bijective
/// exactly when the dimensions agree.
pub fn is_ring_epimorphism<F: Field>(f: &AlgebraMorphism<F>) -> RingEpiVerdict {
    let (sr, rs) = bimodule_sides(f);
    let tensor_dim = tensor_dim(&sr, &rs).expect("sides match");
    RingEpiVerdict { holds: tensor_dim == f.target.dim(), tensor_dim, target_dim: f.target.dim() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologicalVerdict {
    pub ring_epi: RingEpiVerdict,
    pub tor: TorResult,
    /// Ring epimorphism and `Tor_i^R(S, S) = 0` for `1 ≤ i ≤ bound`.
    pub holds_to_bound: bool,
    pub failing_degree: Option<usize>,
    /// The answer does not depend on the bound: either it fails, or a
    /// finite projective dimension of `S` on one side bounds all Tor.
    pub unconditional: bool,
}

pub fn is_homological_up_to<F: Field>(f: &AlgebraMorphism<F>, bound: usize) -> HomologicalVerdict {
    let ring_epi = is_ring_epimorphism(f);
    let (sr, rs) = bimodule_sides(f);
    let tor = tor(&sr, &rs, bound).expect("sides match");
    let failing_degree = tor.first_nonvanishing();
    let holds_to_bound = ring_epi.holds && failing_degree.is_none();
    let unconditional = if !holds_to_bound {
        true
    } else {
        tor.certified_length.is_some_and(|l| l <= bound)
            || pd_unchecked(&sr, bound).value().is_some()
            || pd_unchecked(&rs, bound).value().is_some()
    };
    HomologicalVerdict { ring_epi, tor, holds_to_bound, failing_degree, unconditional }
}

/// Whether every component of every relation lies in `ideal`; for the
/// radical this is minimality of the resolution.
pub fn differential_entries_in<F: Field>(res: &Resolution<F>, ideal: &Subspace<F>) -> bool {
    let d = res.module.algebra().dim();
    res.relations.iter().all(|rels| {
        rels.iter().all(|v| v.chunks(d).all(|block| ideal.contains(block)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{matrix_algebra, subalgebra_from_spanning};
    use crate::field::{PrimeField, Rationals};

    fn dual() -> Arc<Algebra<Rationals>> {
        Arc::new(Algebra::truncated_polynomial(Rationals, 2, "x"))
    }

    fn simple_of_dual(side: Side) -> Module<Rationals> {
        let a = dual();
        let reg = Module::regular(a, side);
        reg.quotient_module(&[crate::linalg::unit_vec(&Rationals, 2, 1)]).unwrap().0
    }

    #[test]
    fn radicals() {
        assert_eq!(radical(&Algebra::ground(Rationals)).unwrap().dim(), 0);
        let r = radical(&dual()).unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.contains(&crate::linalg::unit_vec(&Rationals, 2, 1)));
        assert_eq!(radical(&matrix_algebra(&Algebra::ground(Rationals), 2)).unwrap().dim(), 0);
        let f3 = PrimeField::new(3).unwrap();
        let big = matrix_algebra(&Algebra::ground(f3), 2);
        assert_eq!(radical(&big), Err(HomologicalError::CharacteristicTooSmall { p: 3, dim: 4 }));
    }

    #[test]
    fn resolution_of_projective() {
        let a = dual();
        let res = free_resolution(&Module::regular(a, Side::Right), 4);
        assert_eq!(res.ranks, vec![1]);
        assert!(res.terminated);
    }

    #[test]
    fn resolution_of_simple_is_periodic() {
        let k = simple_of_dual(Side::Right);
        let res = minimal_resolution(&k, 5).unwrap();
        assert_eq!(res.ranks, vec![1; 6]);
        assert!(!res.terminated);
        for w in res.differentials.windows(2) {
            assert!(w[1].mul(&w[0]).is_zero());
        }
        let rad = radical(k.algebra()).unwrap();
        assert!(differential_entries_in(&res, &rad));
    }

    fn dual_matrices(n: usize) -> Arc<Algebra<Rationals>> {
        Arc::new(matrix_algebra(&Algebra::truncated_polynomial(Rationals, 2, "x"), n))
    }

    #[test]
    fn isomorphic_idempotents_give_one_generator() {
        // the first column of M_3(k[x]/x²) is eR-projective with one summand
        let a = dual_matrices(3);
        let col = Module::regular(a.clone(), Side::Left);
        let e11 = a.basis_vector(a.label_index("E1_1.1").unwrap());
        let spanning: Vec<_> = (0..a.dim()).map(|l| a.mul(&a.basis_vector(l), &e11)).collect();
        let basis = Subspace::spanned_by(Rationals, a.dim(), &spanning).basis().to_vec();
        let (p, _) = col.submodule(basis).unwrap();
        assert_eq!(p.dim(), 6);
        let res = minimal_resolution(&p, 3).unwrap();
        assert_eq!(res.ranks, vec![1]);
        assert!(res.terminated);
        assert_eq!(projective_dimension(&p, 3).unwrap(), ProjectiveDimension::Exactly(0));
        // M_3(k[x]/x²) itself needs three summands, not nine
        let reg = Module::regular(a.clone(), Side::Right);
        assert_eq!(minimal_resolution(&reg, 1).unwrap().ranks, vec![3]);
    }

    #[test]
    fn refinement_splits_an_endomorphism_ring() {
        // End(k ⊕ k[x]/x²) over k[x]/x² is basic with two vertices
        let a = dual();
        let reg = Module::regular(a.clone(), Side::Right);
        let simple = simple_of_dual(Side::Right);
        let sum = reg.direct_sum(&simple).unwrap();
        let (end, _) = crate::module::end_algebra(&sum);
        assert_eq!(end.idempotents().len(), 1);
        let refined = refined_idempotents(&end);
        assert_eq!(refined.len(), 2);
        let rad = radical(&end).unwrap();
        assert!(idempotents_are_split_local(&end, &rad));
        let total = refined.iter().fold(end.zero(), |mut acc, e| {
            crate::linalg::axpy(&Rationals, &mut acc, &Rationals.one(), e);
            acc
        });
        assert_eq!(&total, end.unit());
    }

    #[test]
    fn resolution_over_field() {
        let k = Arc::new(Algebra::ground(Rationals));
        let m = Module::free(k, Side::Right, 3);
        let res = free_resolution(&m, 3);
        assert_eq!(res.length(), 0);
        assert!(res.terminated);
    }

    #[test]
    fn tor_of_simple_over_dual_numbers() {
        let t = simple_of_dual(Side::Right);
        let s = simple_of_dual(Side::Left);
        let r = tor(&t, &s, 4).unwrap();
        assert_eq!(r.dims, vec![1; 5]);
        assert_eq!(tor_via_left(&t, &s, 4).unwrap().dims, r.dims);
    }

    #[test]
    fn tor_over_field_vanishes() {
        let k = Arc::new(Algebra::ground(Rationals));
        let t = Module::free(k.clone(), Side::Right, 2);
        let s = Module::free(k, Side::Left, 3);
        let r = tor(&t, &s, 3).unwrap();
        assert_eq!(r.dims, vec![6, 0, 0, 0]);
        assert_eq!(tor(&t, &s, 0).unwrap().dims, vec![6]);
    }

    #[test]
    fn pd_examples() {
        let a = dual();
        assert_eq!(
            projective_dimension(&Module::regular(a, Side::Right), 3).unwrap(),
            ProjectiveDimension::Exactly(0)
        );
        let k = simple_of_dual(Side::Right);
        assert_eq!(projective_dimension(&k, 10).unwrap(), ProjectiveDimension::AtLeast(11));
    }

    #[test]
    fn ring_epi_examples() {
        let a = dual();
        assert!(is_ring_epimorphism(&AlgebraMorphism::identity(a.clone())).holds);
        let (_, inc) = subalgebra_from_spanning(&a, &[a.unit().clone()]).unwrap();
        let v = is_ring_epimorphism(&inc);
        assert!(!v.holds);
        assert_eq!(v.tensor_dim, 4);
        let h = is_homological_up_to(&AlgebraMorphism::identity(a), 3);
        assert!(h.holds_to_bound && h.unconditional);
    }

    #[test]
    fn upper_triangular_into_matrices_is_homological() {
        let k = Algebra::ground(Rationals);
        let m2 = Arc::new(matrix_algebra(&k, 2));
        let span: Vec<_> = ["E1_1.1", "E1_2.1", "E2_2.1"]
            .iter()
            .map(|l| m2.basis_vector(m2.label_index(l).unwrap()))
            .collect();
        let (_, inc) = subalgebra_from_spanning(&m2, &span).unwrap();
        let h = is_homological_up_to(&inc, 3);
        assert!(h.ring_epi.holds);
        assert!(h.holds_to_bound && h.unconditional);
    }
}
