//! The 9-dimensional lower triangular subring `R` of `S = M_3(k[x]/x²)`:
//! a ring epimorphism with `Tor_1^R(S, S) = 0 ≠ Tor_2^R(S, S)`, whose
//! extension context nevertheless has a homological `θ`.

use std::sync::Arc;

use excon::algebra::{matrix_algebra, subalgebra_from_spanning, Algebra, AlgebraMorphism};
use excon::context::{context_from_extension, tau_comparison};
use excon::field::{Field, PrimeField, Rationals};
use excon::homological::{bimodule_sides, is_homological_up_to, projective_dimension, tor, ProjectiveDimension};
use excon::nctensor::{
    build_nc_tensor, build_theta, end_comparison, pd_inequality_check, ring_axiom_suite, theorem1_criterion,
    verify_localization_properties,
};

fn inclusion<F: Field>(k: F) -> AlgebraMorphism<F> {
    let s = Arc::new(matrix_algebra(&Algebra::truncated_polynomial(k, 2, "x"), 3));
    let e = |label: String| s.basis_vector(s.label_index(&label).unwrap());
    let mut span: Vec<_> = (1..=3).map(|i| e(format!("E{i}_{i}.1"))).collect();
    for i in 1..=3 {
        for j in 1..i {
            span.push(e(format!("E{i}_{j}.1")));
            span.push(e(format!("E{i}_{j}.x")));
        }
    }
    subalgebra_from_spanning(&s, &span).unwrap().1
}

fn check<F: Field>(k: F) {
    let lambda = inclusion(k);
    assert_eq!(lambda.source.dim(), 9);
    let (sr, rs) = bimodule_sides(&lambda);
    assert_eq!(tor(&sr, &rs, 3).unwrap().dims, vec![18, 0, 18, 0]);
    let verdict = is_homological_up_to(&lambda, 2);
    assert!(verdict.ring_epi.holds);
    assert!(!verdict.holds_to_bound);
    assert_eq!(verdict.failing_degree, Some(2));
    assert_eq!(projective_dimension(&rs, 8).unwrap(), ProjectiveDimension::Exactly(2));

    let (ctx, data) = context_from_extension(&lambda).unwrap();
    assert_eq!(ctx.certificate.dims, [9, 18, 9, 18]);
    // R → S′ is an isomorphism
    assert!(ctx.mu.is_injective() && ctx.mu.is_surjective());
    let ring = build_nc_tensor(&ctx).unwrap();
    assert_eq!(ring.dim(), 18);
    assert!(ring_axiom_suite(&ring).passed());
    let end = end_comparison(&ring).unwrap();
    assert!(end.applicable && end.isomorphic);
    assert!(tau_comparison(&ctx, &data).unwrap().tau_bijective);

    let td = build_theta(&ring).unwrap();
    assert!(verify_localization_properties(&td).unwrap().passed());
    let v = theorem1_criterion(&td, 6).unwrap();
    assert!(v.criterion_holds && v.theta_homological && v.agreement);
    assert_eq!(v.tor.dims, vec![18, 0, 0, 0, 0, 0, 0]);
    let pd = pd_inequality_check(&td, 8).unwrap();
    assert!(pd.passed());
    assert_eq!((pd.pd_rs, pd.pd_tr, pd.pd_bc, pd.pd_cb), (2, 0, 3, 0));
}

#[test]
fn over_rationals() {
    check(Rationals);
}

#[test]
fn over_f101() {
    check(PrimeField::new(101).unwrap());
}
