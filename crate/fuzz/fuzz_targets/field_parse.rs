#![no_main]

use libfuzzer_sys::fuzz_target;

use excon::field::{Field, FieldSpec, PrimeField, Rationals};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = s.parse::<FieldSpec>() {
        assert_eq!(spec.to_string().parse::<FieldSpec>().unwrap(), spec);
    }
    if let Ok(x) = Rationals.parse(s) {
        assert_eq!(Rationals.parse(&Rationals.format(&x)).unwrap(), x);
    }
    let k = PrimeField::new(101).unwrap();
    if let Ok(x) = k.parse(s) {
        assert_eq!(k.parse(&k.format(&x)).unwrap(), x);
    }
});
