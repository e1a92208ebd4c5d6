#![no_main]

use galois_scaffold::hopf::{hopf_from_params, validate_m};
use galois_scaffold::io::HopfParamsFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = HopfParamsFile::parse(text) else {
        return;
    };
    let params = file.to_params();
    let report = validate_m(&params);
    assert_eq!(hopf_from_params(&params).is_ok(), report.valid);
});
