//! The shipped example presentations and seeded random instances.
//!
//! Random instances are Morita contexts and strictly pure extensions built
//! from algebras of dimension at most 3, written in a random basis, so that
//! the general tensor-product construction can be compared with the closed
//! forms on data with no special shape.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{product, Algebra, SparseVec};
use crate::context::{context_from_morita, context_from_strictly_pure, ContextError, ExactContext, MoritaData, PureData};
use crate::dsl::{elaborate, parse, ContextValue, ElabOptions, Environment};
use crate::field::Field;
use crate::linalg::{dot, unit_vec, zero_vec, Matrix, Subspace, Vector};
use crate::module::Bimodule;
use crate::Error;

/// `(file name, source)` of every shipped presentation.
pub const FILES: [(&str, &str); 9] = [
    ("trivial.exc", include_str!("../corpus/trivial.exc")),
    ("morita_i.exc", include_str!("../corpus/morita_i.exc")),
    ("morita_ii.exc", include_str!("../corpus/morita_ii.exc")),
    ("augmentation.exc", include_str!("../corpus/augmentation.exc")),
    ("six.exc", include_str!("../corpus/six.exc")),
    ("extension.exc", include_str!("../corpus/extension.exc")),
    ("milnor.exc", include_str!("../corpus/milnor.exc")),
    ("pure.exc", include_str!("../corpus/pure.exc")),
    ("twisted.exc", include_str!("../corpus/twisted.exc")),
];

pub fn source(file: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == file).map(|(_, s)| *s)
}

pub fn load<F: Field>(src: &str, field: F) -> Result<Environment<F>, Error> {
    let file = parse(src)?;
    Ok(elaborate(&file, field, &ElabOptions::default())?)
}

/// A context of the shipped corpus, named `file/context`.
pub struct NamedContext<F: Field> {
    pub name: String,
    pub value: ContextValue<F>,
}

/// Every context of every shipped file, in file order. With `include_large`
/// false the 18-dimensional example is skipped.
pub fn contexts<F: Field>(field: &F, include_large: bool) -> Result<Vec<NamedContext<F>>, Error> {
    let mut out = Vec::new();
    for (file, src) in FILES {
        if !include_large && file == "six.exc" {
            continue;
        }
        let env = load(src, field.clone())?;
        for name in env.contexts() {
            let value = env.context(name).expect("listed").clone();
            out.push(NamedContext { name: format!("{}/{name}", file.trim_end_matches(".exc")), value });
        }
    }
    Ok(out)
}

/// Seeds of the random instances used by the test suites.
pub const RANDOM_SEEDS: std::ops::Range<u64> = 0..24;

/// A small algebra with an augmentation `ε: A → k`, given by its values on
/// the basis.
#[derive(Debug, Clone)]
struct Augmented<F: Field> {
    alg: Arc<Algebra<F>>,
    aug: Vector<F>,
}

fn sparse<F: Field>(k: &F, v: &[F::Elem]) -> SparseVec<F> {
    v.iter().enumerate().filter(|(_, x)| !k.is_zero(x)).map(|(i, x)| (i, x.clone())).collect()
}

fn two_variables<F: Field>(k: &F) -> Algebra<F> {
    // k[x, y]/(x, y)²
    let one = k.one();
    let mut table = vec![Vec::new(); 9];
    table[0] = vec![(0, one.clone())];
    table[1] = vec![(1, one.clone())];
    table[2] = vec![(2, one.clone())];
    table[3] = vec![(1, one.clone())];
    table[6] = vec![(2, one.clone())];
    Algebra::from_sparse(k.clone(), vec!["1".into(), "x".into(), "y".into()], table, unit_vec(k, 3, 0))
        .expect("k[x, y]/(x, y)²")
}

fn lower_triangular<F: Field>(k: &F) -> Algebra<F> {
    // basis e1, e2, f with e2 f e1 = f
    let one = k.one();
    let mut table = vec![Vec::new(); 9];
    table[0] = vec![(0, one.clone())];
    table[4] = vec![(1, one.clone())];
    table[5] = vec![(2, one.clone())];
    table[6] = vec![(2, one.clone())];
    Algebra::from_sparse(k.clone(), vec!["e1".into(), "e2".into(), "f".into()], table, vec![one.clone(), one, k.zero()])
        .and_then(|a| a.with_idempotents(vec![unit_vec(k, 3, 0), unit_vec(k, 3, 1)]))
        .expect("lower triangular matrices")
}

fn small<F: Field>(k: &F, which: usize) -> Augmented<F> {
    let first = |n: usize| unit_vec(k, n, 0);
    let (alg, aug) = match which % 6 {
        0 => (Algebra::ground(k.clone()), first(1)),
        1 => (Algebra::truncated_polynomial(k.clone(), 2, "x"), first(2)),
        2 => (Algebra::truncated_polynomial(k.clone(), 3, "x"), first(3)),
        3 => {
            let kk = product(&Algebra::ground(k.clone()), &Algebra::ground(k.clone()));
            (kk, first(2))
        }
        4 => (two_variables(k), first(3)),
        _ => (lower_triangular(k), first(3)),
    };
    Augmented { alg: Arc::new(alg), aug }
}

fn random_scalar<F: Field>(k: &F, rng: &mut ChaCha8Rng) -> F::Elem {
    k.from_i64(rng.gen_range(-50..=50))
}

fn random_invertible<F: Field>(k: &F, n: usize, rng: &mut ChaCha8Rng) -> Matrix<F> {
    loop {
        let data = (0..n * n).map(|_| random_scalar(k, rng)).collect();
        let m = Matrix::new(k.clone(), n, n, data);
        if m.rank() == n {
            return m;
        }
    }
}

/// The same algebra in the basis given by the rows of `p` (old coordinates).
/// Returns the new algebra and `p⁻¹`, which converts old coordinates to new.
fn rebase<F: Field>(a: &Algebra<F>, p: &Matrix<F>) -> (Algebra<F>, Matrix<F>) {
    let k = a.field().clone();
    let d = a.dim();
    let inv = p.inverse().expect("invertible");
    let rows = p.row_vectors();
    let mut table = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            table.push(sparse(&k, &inv.vec_mul(&a.mul(&rows[i], &rows[j]))));
        }
    }
    let labels = (0..d).map(|i| format!("u{i}")).collect();
    let unit = inv.vec_mul(a.unit());
    let idems = a.idempotents().iter().map(|e| inv.vec_mul(e)).collect();
    let b = Algebra::from_sparse(k, labels, table, unit)
        .and_then(|b| b.with_idempotents(idems))
        .expect("a change of basis keeps the axioms");
    (b, inv)
}

fn randomized<F: Field>(k: &F, rng: &mut ChaCha8Rng, max_dim: usize) -> Augmented<F> {
    let a = loop {
        let a = small(k, rng.gen_range(0..6));
        if a.alg.dim() <= max_dim {
            break a;
        }
    };
    let p = random_invertible(k, a.alg.dim(), rng);
    let (alg, _) = rebase(&a.alg, &p);
    let aug = p.mul_vec(&a.aug);
    Augmented { alg: Arc::new(alg), aug }
}

/// `k` as an `A`-`C`-bimodule through the augmentations.
fn point<F: Field>(a: &Augmented<F>, c: &Augmented<F>) -> Bimodule<F> {
    let k = a.alg.field().clone();
    let one_by_one = |e: &F::Elem| Matrix::new(k.clone(), 1, 1, vec![e.clone()]);
    Bimodule::new(
        a.alg.clone(),
        c.alg.clone(),
        vec!["p".into()],
        a.aug.iter().map(one_by_one).collect(),
        c.aug.iter().map(one_by_one).collect(),
    )
    .expect("augmentations are algebra maps")
}

/// `{a : r·a = ε(r)·a = a·r for all r}`, the values of bimodule maps
/// `k ⊗ k → A`.
fn invariants<F: Field>(a: &Augmented<F>) -> Vec<Vector<F>> {
    let k = a.alg.field().clone();
    let d = a.alg.dim();
    let mut blocks: Option<Matrix<F>> = None;
    for i in 0..d {
        let shift = Matrix::identity(k.clone(), d).scale(&a.aug[i]);
        for m in [a.alg.right_basis_matrix(i), a.alg.left_basis_matrix(i)] {
            let diff = m.sub(&shift);
            blocks = Some(match blocks {
                None => diff,
                Some(b) => b.hstack(&diff),
            });
        }
    }
    blocks.expect("nonzero dimension").left_kernel()
}

fn random_in<F: Field>(k: &F, n: usize, span: &[Vector<F>], rng: &mut ChaCha8Rng) -> Vector<F> {
    let mut v = zero_vec(k, n);
    for s in span {
        crate::linalg::axpy(k, &mut v, &random_scalar(k, rng), s);
    }
    v
}

/// A Morita context over `k` with `A`, `C`, `X`, `Y` of dimension at most 3,
/// chosen by `seed` among three shapes: `X = Y = k` through augmentations
/// with pairings in the invariants, `X = Y = A = C` with pairings a multiple
/// of the product, and `C = k` with `X = Y = A` and zero pairings.
pub fn random_morita<F: Field>(k: &F, seed: u64) -> Result<(ExactContext<F>, MoritaData<F>), ContextError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match seed % 3 {
        0 => {
            let a = randomized(k, &mut rng, 3);
            let c = randomized(k, &mut rng, 3);
            let (x, y) = (point(&a, &c), point(&c, &a));
            // f(x, y) = u, g(y, x) = v need ε(u) = ε(v)
            let (ia, ic) = (invariants(&a), invariants(&c));
            let mut u = random_in(k, a.alg.dim(), &ia, &mut rng);
            let mut v = random_in(k, c.alg.dim(), &ic, &mut rng);
            let (eu, ev) = (dot(k, &u, &a.aug), dot(k, &v, &c.aug));
            if eu != ev {
                let fix = |w: &mut Vector<F>, aug: &Vector<F>, span: &[Vector<F>], target: &F::Elem| {
                    // move w inside the span so that ε(w) = target, or into ker ε
                    let e = dot(k, w, aug);
                    match span.iter().find(|s| !k.is_zero(&dot(k, s, aug))) {
                        Some(s) => {
                            let c = k.mul(&k.sub(target, &e), &k.inv(&dot(k, s, aug)).expect("nonzero"));
                            crate::linalg::axpy(k, w, &c, s);
                            true
                        }
                        None => false,
                    }
                };
                if !fix(&mut u, &a.aug, &ia, &ev) {
                    let zero = k.zero();
                    let fixed = fix(&mut v, &c.aug, &ic, &zero);
                    debug_assert!(fixed || k.is_zero(&ev));
                    if !fixed {
                        v = zero_vec(k, c.alg.dim());
                    }
                }
            }
            context_from_morita(a.alg.clone(), c.alg.clone(), x, y, vec![vec![u]], vec![vec![v]])
        }
        1 => {
            let a = randomized(k, &mut rng, 3);
            let t = random_scalar(k, &mut rng);
            let d = a.alg.dim();
            let table: Vec<Vec<Vector<F>>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| crate::linalg::scale_vec(k, &t, &a.alg.mul(&a.alg.basis_vector(i), &a.alg.basis_vector(j))))
                        .collect()
                })
                .collect();
            let x = Bimodule::regular(a.alg.clone());
            let y = Bimodule::regular(a.alg.clone());
            context_from_morita(a.alg.clone(), a.alg.clone(), x, y, table.clone(), table)
        }
        _ => {
            let a = randomized(k, &mut rng, 3);
            let c = small(k, 0);
            let d = a.alg.dim();
            let kk = c.alg.clone();
            let scalar = |e: &F::Elem| Matrix::identity(k.clone(), d).scale(e);
            let x = Bimodule::new(
                a.alg.clone(),
                kk.clone(),
                a.alg.labels().to_vec(),
                (0..d).map(|i| a.alg.left_basis_matrix(i)).collect(),
                vec![scalar(&k.one())],
            )
            .map_err(ContextError::Module)?;
            let y = Bimodule::new(
                kk.clone(),
                a.alg.clone(),
                a.alg.labels().to_vec(),
                vec![scalar(&k.one())],
                (0..d).map(|i| a.alg.right_basis_matrix(i)).collect(),
            )
            .map_err(ContextError::Module)?;
            let f = vec![vec![zero_vec(k, d); d]; d];
            let g = vec![vec![zero_vec(k, 1); d]; d];
            context_from_morita(a.alg.clone(), kk, x, y, f, g)
        }
    }
}

/// `R ⋉ X` for an `R`-`R`-bimodule `X`: basis `R` then `X`, `X² = 0`.
fn trivial_extension<F: Field>(r: &Algebra<F>, x: &Bimodule<F>) -> Algebra<F> {
    let k = r.field().clone();
    let (dr, dx) = (r.dim(), x.dim());
    let n = dr + dx;
    let mut table = vec![Vec::new(); n * n];
    for i in 0..dr {
        for j in 0..dr {
            table[i * n + j] = r.basis_product(i, j).clone();
        }
        for j in 0..dx {
            table[i * n + dr + j] = sparse(&k, x.left_matrix(i).row(j)).into_iter().map(|(l, e)| (dr + l, e)).collect();
            table[(dr + j) * n + i] =
                sparse(&k, x.right_matrix(i).row(j)).into_iter().map(|(l, e)| (dr + l, e)).collect();
        }
    }
    let mut labels: Vec<String> = r.labels().iter().map(|l| format!("r.{l}")).collect();
    labels.extend(x.labels().iter().map(|l| format!("x.{l}")));
    let mut unit = r.unit().clone();
    unit.extend(std::iter::repeat(k.zero()).take(dx));
    Algebra::from_sparse(k, labels, table, unit).expect("trivial extension")
}

/// One side of a random strictly pure extension: `S = R ⋉ X` (or
/// `k[x]/(x³)` over `R = k`) in a random basis, with `λ` and a random
/// spanning set of `X`.
fn pure_side<F: Field>(
    k: &F,
    r: &Augmented<F>,
    rng: &mut ChaCha8Rng,
) -> (crate::algebra::AlgebraMorphism<F>, Vec<Vector<F>>) {
    let dr = r.alg.dim();
    let (s, x_coords): (Algebra<F>, Vec<usize>) = match rng.gen_range(0..3) {
        0 if dr <= 3 => {
            let s = trivial_extension(&r.alg, &Bimodule::regular(r.alg.clone()));
            (s, (dr..2 * dr).collect())
        }
        1 if dr == 1 => (Algebra::truncated_polynomial(k.clone(), 3, "x"), vec![1, 2]),
        _ => {
            let s = trivial_extension(&r.alg, &point(r, r));
            (s, vec![dr])
        }
    };
    let ds = s.dim();
    let p = random_invertible(k, ds, rng);
    let (s, inv) = rebase(&s, &p);
    let s = Arc::new(s);
    // λ(b_i) = b_i in the old basis, except over the ground field where the
    // one basis vector of R is a multiple of 1
    let lam_rows: Vec<Vector<F>> = if x_coords == [1, 2] {
        let c = k.inv(&r.alg.unit()[0]).expect("unit is nonzero");
        vec![crate::linalg::scale_vec(k, &c, inv.row(0))]
    } else {
        (0..dr).map(|i| inv.row(i).to_vec()).collect()
    };
    let lambda = crate::algebra::AlgebraMorphism::new(r.alg.clone(), s, Matrix::from_rows(k.clone(), ds, &lam_rows))
        .expect("inclusion");
    let x_old: Vec<Vector<F>> = x_coords.iter().map(|&c| inv.row(c).to_vec()).collect();
    // a random spanning set of X, one extra vector for good measure
    let mut xs: Vec<Vector<F>> = Vec::new();
    while Subspace::spanned_by(k.clone(), ds, &xs).dim() < x_old.len() {
        xs.push(random_in(k, ds, &x_old, rng));
    }
    xs.push(random_in(k, ds, &x_old, rng));
    (lambda, xs)
}

/// A strictly pure extension pair over a random `R` of dimension at most 3.
pub fn random_pure<F: Field>(k: &F, seed: u64) -> Result<(ExactContext<F>, PureData<F>), ContextError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let r = randomized(k, &mut rng, 3);
    let (lambda, x) = pure_side(k, &r, &mut rng);
    let (mu, y) = pure_side(k, &r, &mut rng);
    context_from_strictly_pure(lambda, mu, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn shipped_files_elaborate() {
        let all = contexts(&Rationals, false).unwrap();
        assert!(all.len() >= 15, "{} contexts", all.len());
        let k = PrimeField::new(101).unwrap();
        assert_eq!(contexts(&k, false).unwrap().len(), all.len());
    }

    #[test]
    fn random_instances_are_contexts() {
        let k = PrimeField::new(101).unwrap();
        for seed in RANDOM_SEEDS {
            let (_, m) = random_morita(&k, seed).unwrap();
            assert!(m.a.dim() <= 3 && m.c.dim() <= 3 && m.x.dim() <= 3 && m.y.dim() <= 3);
            random_pure(&k, seed).unwrap();
        }
    }

    #[test]
    fn random_instances_are_deterministic() {
        let k = PrimeField::new(101).unwrap();
        let a = random_pure(&k, 5).unwrap().0;
        let b = random_pure(&k, 5).unwrap().0;
        assert_eq!(a.bimodule.dim(), b.bimodule.dim());
        assert_eq!(a.lambda.matrix, b.lambda.matrix);
    }
}
