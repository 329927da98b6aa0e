//! Path algebras of quivers modulo relations.
//!
//! A path `a*b` means "first `a`, then `b`": it is composable when the
//! target of `a` is the source of `b`. This is the opposite of the order of
//! function application.
//!
//! The relations are row reduced against each other with paths ordered by
//! length, then lexicographically by arrow declaration order. Each reduced
//! relation becomes a rewriting rule for its largest path. The basis is the
//! set of paths containing no leading path, found by extending irreducible
//! paths one arrow at a time, and products are concatenation followed by
//! rewriting. When the rules are not confluent the result is not associative
//! and elaboration fails; when they are, the result is exactly the quotient.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::ast::QuiverPresentation;
use crate::algebra::{Algebra, AlgebraError, SparseVec};
use crate::field::Field;
use crate::linalg::{unit_vec, zero_vec, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    /// `relation` is `None` when the relations as a whole are at fault.
    #[error("bad relation{}: {reason}", relation.map(|i| format!(" {}", i + 1)).unwrap_or_default())]
    BadRelation { relation: Option<usize>, reason: String },
    #[error("not finite dimensional: irreducible paths longer than the bound {bound}")]
    NotFiniteDimensional { bound: usize },
    #[error("arrow `{0}` has an endpoint outside the vertex list")]
    BadArrow(String),
}

type Path = Vec<usize>;

/// Length-then-lexicographic key.
fn key(p: &[usize]) -> (usize, Path) {
    (p.len(), p.to_vec())
}

struct Rewriter<'a, F: Field> {
    field: &'a F,
    rules: Vec<(Path, Vec<(F::Elem, Path)>)>,
    memo: HashMap<Path, BTreeMap<(usize, Path), F::Elem>>,
}

impl<F: Field> Rewriter<'_, F> {
    fn find(&self, p: &[usize]) -> Option<(usize, usize)> {
        for (r, (lt, _)) in self.rules.iter().enumerate() {
            if lt.len() <= p.len() {
                if let Some(i) = (0..=p.len() - lt.len()).find(|&i| p[i..i + lt.len()] == lt[..]) {
                    return Some((r, i));
                }
            }
        }
        None
    }

    fn is_irreducible(&self, p: &[usize]) -> bool {
        self.find(p).is_none()
    }

    /// Normal form of a nonempty path.
    fn normal_form(&mut self, p: &[usize]) -> BTreeMap<(usize, Path), F::Elem> {
        if let Some(nf) = self.memo.get(p) {
            return nf.clone();
        }
        let k = self.field.clone();
        let mut out: BTreeMap<(usize, Path), F::Elem> = BTreeMap::new();
        match self.find(p) {
            None => {
                out.insert(key(p), k.one());
            }
            Some((r, i)) => {
                let len = self.rules[r].0.len();
                let tail = self.rules[r].1.clone();
                for (c, q) in tail {
                    let mut w = p[..i].to_vec();
                    w.extend_from_slice(&q);
                    w.extend_from_slice(&p[i + len..]);
                    for (kp, e) in self.normal_form(&w) {
                        let entry = out.entry(kp).or_insert_with(|| k.zero());
                        *entry = k.add(entry, &k.mul(&c, &e));
                    }
                }
                out.retain(|_, e| !k.is_zero(e));
            }
        }
        self.memo.insert(p.to_vec(), out.clone());
        out
    }
}

pub fn elaborate_quiver<F: Field>(q: &QuiverPresentation, field: &F) -> Result<Algebra<F>, QuiverError> {
    let k = field.clone();
    let nv = q.vertices.len();
    for a in &q.arrows {
        if a.source >= nv || a.target >= nv {
            return Err(QuiverError::BadArrow(a.label.clone()));
        }
    }
    let source = |p: &[usize]| q.arrows[p[0]].source;
    let target = |p: &[usize]| q.arrows[p[p.len() - 1]].target;

    // relations as sparse rows over the paths that occur
    let mut rows: Vec<BTreeMap<(usize, Path), F::Elem>> = Vec::new();
    for (idx, rel) in q.relations.iter().enumerate() {
        let bad = |reason: &str| QuiverError::BadRelation { relation: Some(idx), reason: reason.to_string() };
        let mut row: BTreeMap<(usize, Path), F::Elem> = BTreeMap::new();
        let mut ends = None;
        for (c, p) in rel {
            if p.is_empty() {
                return Err(bad("trivial paths are not allowed"));
            }
            if p.iter().any(|&a| a >= q.arrows.len()) {
                return Err(bad("unknown arrow"));
            }
            if p.windows(2).any(|w| q.arrows[w[0]].target != q.arrows[w[1]].source) {
                return Err(bad("path is not composable"));
            }
            let e = (source(p), target(p));
            if *ends.get_or_insert(e) != e {
                return Err(bad("paths have different endpoints"));
            }
            let c = k
                .from_fraction(c.numer(), c.denom())
                .map_err(|_| bad("coefficient denominator vanishes in the field"))?;
            let entry = row.entry(key(p)).or_insert_with(|| k.zero());
            *entry = k.add(entry, &c);
        }
        row.retain(|_, e| !k.is_zero(e));
        if !row.is_empty() {
            rows.push(row);
        }
    }
    // Gaussian elimination with columns in descending path order
    let mut columns: Vec<(usize, Path)> = rows.iter().flat_map(|r| r.keys().cloned()).collect();
    columns.sort();
    columns.dedup();
    columns.reverse();
    let col_of: HashMap<&(usize, Path), usize> = columns.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut dense = Matrix::zero(k.clone(), rows.len(), columns.len());
    for (i, r) in rows.iter().enumerate() {
        for (p, e) in r {
            dense.set(i, col_of[p], e.clone());
        }
    }
    let rref = dense.rref();
    let mut rules = Vec::with_capacity(rref.rank);
    for (i, &pc) in rref.pivots.iter().enumerate() {
        let tail: Vec<(F::Elem, Path)> = (pc + 1..columns.len())
            .filter(|&j| !k.is_zero(rref.matrix.get(i, j)))
            .map(|j| (k.neg(rref.matrix.get(i, j)), columns[j].1.clone()))
            .collect();
        rules.push((columns[pc].1.clone(), tail));
    }
    let mut rw = Rewriter { field: &k, rules, memo: HashMap::new() };

    // irreducible paths, level by level
    let mut basis: Vec<Path> = Vec::new();
    let mut level: Vec<Path> = (0..q.arrows.len()).map(|a| vec![a]).filter(|p| rw.is_irreducible(p)).collect();
    let mut len = 1;
    while !level.is_empty() {
        if len > q.length_bound {
            return Err(QuiverError::NotFiniteDimensional { bound: q.length_bound });
        }
        level.sort();
        basis.extend(level.iter().cloned());
        let mut next = Vec::new();
        for p in &level {
            for (a, arrow) in q.arrows.iter().enumerate() {
                if arrow.source == target(p) {
                    let mut w = p.clone();
                    w.push(a);
                    if rw.is_irreducible(&w) {
                        next.push(w);
                    }
                }
            }
        }
        level = next;
        len += 1;
    }

    let dim = nv + basis.len();
    let index: HashMap<(usize, Path), usize> = basis.iter().enumerate().map(|(i, p)| (key(p), nv + i)).collect();
    // basis element i: a vertex (Err) or a path (Ok)
    let element = |i: usize| -> Result<&Path, usize> {
        if i < nv {
            Err(i)
        } else {
            Ok(&basis[i - nv])
        }
    };
    let mut table: Vec<SparseVec<F>> = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let prod: SparseVec<F> = match (element(i), element(j)) {
                (Err(v), Err(w)) => {
                    if v == w {
                        vec![(v, k.one())]
                    } else {
                        vec![]
                    }
                }
                (Err(v), Ok(p)) => {
                    if source(p) == v {
                        vec![(j, k.one())]
                    } else {
                        vec![]
                    }
                }
                (Ok(p), Err(w)) => {
                    if target(p) == w {
                        vec![(i, k.one())]
                    } else {
                        vec![]
                    }
                }
                (Ok(p), Ok(r)) => {
                    if target(p) != source(r) {
                        vec![]
                    } else {
                        let mut w = p.clone();
                        w.extend_from_slice(r);
                        let mut out = Vec::new();
                        for (kp, e) in rw.normal_form(&w) {
                            match index.get(&kp) {
                                Some(&b) => out.push((b, e)),
                                None => {
                                    return Err(QuiverError::NotFiniteDimensional { bound: q.length_bound });
                                }
                            }
                        }
                        out
                    }
                }
            };
            table.push(prod);
        }
    }
    let mut labels: Vec<String> = q.vertices.iter().map(|v| format!("e{v}")).collect();
    labels.extend(
        basis.iter().map(|p| p.iter().map(|&a| q.arrows[a].label.as_str()).collect::<Vec<_>>().join("*")),
    );
    let mut unit = zero_vec(&k, dim);
    for u in unit.iter_mut().take(nv) {
        *u = k.one();
    }
    let not_confluent = |e: AlgebraError| QuiverError::BadRelation {
        relation: None,
        reason: format!("rewriting by leading paths is not confluent ({e})"),
    };
    let alg = Algebra::from_sparse(k.clone(), labels, table, unit).map_err(not_confluent)?;
    if nv == 0 {
        return Ok(alg);
    }
    let idems = (0..nv).map(|v| unit_vec(&k, dim, v)).collect();
    alg.with_idempotents(idems).map_err(not_confluent)
}
