#![no_main]

use galois_scaffold::io::TowerSpecFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = TowerSpecFile::parse(text) else {
        return;
    };
    if let Ok(spec) = file.to_spec() {
        let again = TowerSpecFile::from_spec(&spec);
        assert!(again.to_spec().is_ok());
    }
});
