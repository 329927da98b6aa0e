#![no_main]

use libfuzzer_sys::fuzz_target;

use excon::dsl::{elaborate, parse, ElabOptions};
use excon::field::PrimeField;
use excon::nctensor::{build_nc_tensor, ring_axiom_suite};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(file) = parse(src) else { return };
    let k = PrimeField::new(101).unwrap();
    let Ok(env) = elaborate(&file, k, &ElabOptions { max_dim: 12 }) else { return };
    for name in env.contexts() {
        let ctx = &env.context(name).unwrap().context;
        if ctx.s().dim() * ctx.t().dim() > 64 {
            continue;
        }
        if let Ok(ring) = build_nc_tensor(ctx) {
            assert!(ring_axiom_suite(&ring).passed(), "ring axioms fail for `{name}`");
        }
    }
});
