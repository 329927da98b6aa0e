use excon::corpus::{random_morita, random_pure, RANDOM_SEEDS};
use excon::field::PrimeField;
use excon::nctensor::{
    build_nc_tensor, compare_structure, morita_identification, nc_tensor_morita_oracle, nc_tensor_pure_oracle,
    pure_identification, ring_axiom_suite,
};

#[test]
fn random_morita_matches_closed_form() {
    let k = PrimeField::new(101).unwrap();
    for seed in RANDOM_SEEDS {
        let (ctx, data) = random_morita(&k, seed).unwrap();
        let ring = build_nc_tensor(&ctx).unwrap();
        assert!(ring_axiom_suite(&ring).passed(), "seed {seed}");
        let oracle = nc_tensor_morita_oracle(&data).unwrap();
        let phi = morita_identification(&ring, &data, &oracle).unwrap();
        compare_structure(&oracle.algebra, &ring.algebra, &phi).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}

#[test]
fn random_pure_matches_closed_form() {
    let k = PrimeField::new(101).unwrap();
    for seed in RANDOM_SEEDS {
        let (ctx, data) = random_pure(&k, seed).unwrap();
        let ring = build_nc_tensor(&ctx).unwrap();
        assert!(ring_axiom_suite(&ring).passed(), "seed {seed}");
        let oracle = nc_tensor_pure_oracle(&data).unwrap();
        let phi = pure_identification(&ring, &data, &oracle);
        compare_structure(&oracle.algebra, &ring.algebra, &phi).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}
