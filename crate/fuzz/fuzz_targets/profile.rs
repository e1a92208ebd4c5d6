#![no_main]

use galois_scaffold::io::ProfileFile;
use galois_scaffold::numeric::{check_assumptions, different_and_trace};
use galois_scaffold::scaffold::Tolerance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = ProfileFile::parse(text) else {
        return;
    };
    let Ok(profile) = file.to_profile() else {
        return;
    };
    let tol = file.tolerance.map_or(Tolerance::Infinite, Tolerance::Finite);
    let _ = check_assumptions(&profile, file.eps_valuations.as_deref(), tol);
    for j in 0..profile.n {
        let _ = different_and_trace(profile.p, &profile.lower, j, 0);
    }
});
