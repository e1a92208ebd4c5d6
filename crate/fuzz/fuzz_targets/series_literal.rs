#![no_main]

use galois_scaffold::localfield::{ResidueField, SeriesLiteral};
use libfuzzer_sys::fuzz_target;

const FIELDS: [(u64, u32); 4] = [(2, 1), (2, 3), (3, 2), (5, 1)];

fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok(lit) = serde_json::from_str::<SeriesLiteral>(text) else {
        return;
    };
    let (p, d) = FIELDS[k as usize % FIELDS.len()];
    let field = ResidueField::new(p, d).unwrap();
    if let Ok(s) = lit.to_series(&field) {
        let back = SeriesLiteral::from_series(&s);
        assert_eq!(back.to_series(&field).unwrap(), s);
        let _ = s.valuation();
        let _ = s.wp();
    }
});
