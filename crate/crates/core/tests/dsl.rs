use excon::algebra::AlgebraMorphism;
use excon::corpus::{load, source, FILES};
use excon::dsl::ast::{AlgebraExpr, DeclKind};
use excon::dsl::{elaborate, parse, print, DslError, ElabErrorKind, ElabOptions, Value};
use excon::field::{Field, PrimeField, Rationals};
use excon::linalg::{Matrix, Subspace};
use excon::nctensor::{build_nc_tensor, compare_structure, ring_axiom_suite};

#[test]
fn one_dimensional_structconst() {
    let file = parse("field Q  algebra A = structconst { dim 1; 0*0 = 0; unit = 0 }").unwrap();
    assert_eq!(file.decls.len(), 1);
    assert!(matches!(file.decls[0].kind, DeclKind::Algebra(AlgebraExpr::StructConst { dim: 1, .. })));
    let env = elaborate(&file, Rationals, &ElabOptions::default()).unwrap();
    assert_eq!(env.algebra("A").unwrap().dim(), 1);
}

#[test]
fn zero_relation_quiver_parses() {
    let src = "algebra G = quiver { vertices 1 2; arrow a : 1 -> 2; arrow b : 2 -> 1; relation a*b; relation b*a }";
    let file = parse(src).unwrap();
    match &file.decls[0].kind {
        DeclKind::Algebra(AlgebraExpr::Quiver(q)) => {
            assert_eq!(q.vertices.len(), 2);
            assert_eq!(q.arrows.len(), 2);
            assert_eq!(q.relations.len(), 2);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn truncated_input_is_a_syntax_error_at_the_end() {
    let src = "algebra A = structconst { dim 1;";
    match parse(src).unwrap_err() {
        DslError::Syntax { line, col, expected } => {
            assert_eq!((line, col), (1, src.len() + 1));
            assert!(!expected.is_empty());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn syntax_errors_carry_positions() {
    let err = parse("field Q\nalgebra A = ground\nalgebra B = matrixalg(A 2)").unwrap_err();
    assert_eq!(err.position(), (3, 25));
}

#[test]
fn duplicate_and_unresolved_names() {
    let err = parse("algebra A = ground\nalgebra A = ground").unwrap_err();
    assert!(matches!(err, DslError::DuplicateName { ref name, line: 2, .. } if name == "A"), "{err:?}");
    let err = parse("algebra A = matrixalg(B, 2)").unwrap_err();
    assert!(matches!(err, DslError::UnresolvedReference { ref name, .. } if name == "B"), "{err:?}");
    let err = parse("algebra A = quiver { vertices 1; arrow a : 1 -> 2 }").unwrap_err();
    assert!(matches!(err, DslError::UnresolvedReference { .. }), "{err:?}");
}

#[test]
fn elaboration_errors() {
    let kind = |src: &str| {
        let file = parse(src).unwrap();
        elaborate(&file, Rationals, &ElabOptions::default()).unwrap_err().kind
    };
    // not associative: x·x = 1 + x does not fix the unit
    let bad = "algebra A = structconst { dim 2; basis 1 x; 1*1 = 1; 1*x = x; x*1 = 1; x*x = x; unit = 1 }";
    assert!(matches!(kind(bad), ElabErrorKind::Algebra(_)));
    assert!(matches!(
        kind("algebra A = truncated(x, 2)\nelement e in A = y"),
        ElabErrorKind::UnknownBasis { .. }
    ));
    assert!(matches!(kind("algebra A = ground\nalgebra B = matrixalg(A, 40)"), ElabErrorKind::TooLarge { .. }));
    assert!(matches!(
        kind("algebra A = quiver { vertices 1; arrow a : 1 -> 1 }"),
        ElabErrorKind::Quiver(_)
    ));
    assert!(matches!(
        kind("algebra A = ground\nmorphism f : A -> A = identity\ncontext c = extension(A)"),
        ElabErrorKind::WrongKind { .. }
    ));
}

#[test]
fn field_header_must_be_a_known_field() {
    assert!(parse("field Fp:7\nalgebra A = ground").is_ok());
    assert!(parse("field Fp:8\nalgebra A = ground").is_err());
}

#[test]
fn corpus_round_trips_through_the_printer() {
    for (name, src) in FILES {
        let file = parse(src).unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = print(&file);
        let again = parse(&printed).unwrap_or_else(|e| panic!("{name}: {e}\n{printed}"));
        assert_eq!(file, again, "{name}");
        assert_eq!(printed, print(&again), "{name}");
    }
}

#[test]
fn corpus_elaborates_over_both_fields() {
    let p = PrimeField::new(101).unwrap();
    for (name, src) in FILES {
        let q = load(src, Rationals).unwrap_or_else(|e| panic!("{name} over Q: {e}"));
        let f = load(src, p.clone()).unwrap_or_else(|e| panic!("{name} over F_101: {e}"));
        assert_eq!(q.names(), f.names(), "{name}");
    }
}

#[test]
fn printed_algebras_elaborate_to_the_same_structure() {
    let mut seen = 0;
    for (file, src) in FILES {
        let env = load(src, Rationals).unwrap();
        for name in env.names() {
            let Some(a) = env.algebra(name) else { continue };
            let text = excon::dsl::print_algebra(name, a);
            let back = load(&text, Rationals).unwrap_or_else(|e| panic!("{file}/{name}: {e}\n{text}"));
            assert!(back.algebra(name).unwrap().same_structure(a), "{file}/{name}\n{text}");
            seen += 1;
        }
    }
    assert!(seen >= 20);
}

/// `σ: T ⊗ S → A`, `t ⊗ s ↦ ts`, read off on the classes of basis pairs.
fn sigma<F: Field>(
    ring: &excon::nctensor::NcTensorRing<F>,
    s_inc: &AlgebraMorphism<F>,
    t_inc: &AlgebraMorphism<F>,
) -> Matrix<F> {
    let k = ring.field().clone();
    let a = &s_inc.target;
    let (s, t) = (ring.context.s(), ring.context.t());
    let mut span = Subspace::new(k.clone(), ring.dim());
    let (mut classes, mut images) = (Vec::new(), Vec::new());
    let mut pairs = Vec::new();
    for i in 0..t.dim() {
        for j in 0..s.dim() {
            let class = ring.class_of(&t.basis_vector(i), &s.basis_vector(j));
            let image = a.mul(t_inc.matrix.row(i), s_inc.matrix.row(j));
            if span.insert(&class) {
                classes.push(class.clone());
                images.push(image.clone());
            }
            pairs.push((class, image));
        }
    }
    let c = Matrix::from_rows(k.clone(), ring.dim(), &classes);
    let phi = c.inverse().expect("classes of basis pairs span").mul(&Matrix::from_rows(k.clone(), a.dim(), &images));
    for (class, image) in pairs {
        assert_eq!(phi.vec_mul(&class), image, "σ is not well defined");
    }
    phi
}

#[test]
fn trivially_twisted_tensor_product_is_the_ambient_algebra() {
    fn check<F: Field>(k: F) {
        let env = load(source("twisted.exc").unwrap(), k).unwrap();
        let ctx = &env.context("twisted").unwrap().context;
        let ring = build_nc_tensor(ctx).unwrap();
        assert!(ring_axiom_suite(&ring).passed());
        let inc = |n: &str| match env.get(n).unwrap() {
            Value::Algebra { inclusion: Some(i), .. } => i.clone(),
            _ => panic!("{n} is not a subalgebra"),
        };
        let a = env.algebra("A").unwrap();
        assert_eq!(a.dim(), 6);
        assert_eq!(ring.dim(), 6);
        let phi = sigma(&ring, &inc("A1"), &inc("A2"));
        compare_structure(&ring.algebra, a, &phi).unwrap();
    }
    check(Rationals);
    check(PrimeField::new(101).unwrap());
}
