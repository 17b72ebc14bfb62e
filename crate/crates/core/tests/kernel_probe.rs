//! Opt-in probes for the heavy kernel eliminations; run with
//! `cargo test -p kummer-core --test kernel_probe -- --ignored --nocapture`.

use std::time::{Duration, Instant};

use kummer_core::kummer::{verify_kernel, CurveConfig, KummerError};
use kummer_core::{field_make, EngineError, Limits};

/// The superspecial threefold kernel completes in about a minute in an
/// optimized build and the elimination agrees with the relation families.
#[test]
#[ignore]
fn kernel_g3_supersingular() {
    let f2 = field_make(2, 1, None).unwrap();
    let cfg = CurveConfig::with_unit_j(&f2, 3, 0).unwrap();
    let t = Instant::now();
    let limits = Limits::new(Some(Duration::from_secs(600)), Some(40));
    let report = verify_kernel(&cfg, &limits, None).unwrap();
    println!(
        "g=3 r=0: equal={} kernel gens={} in {:?}",
        report.equal,
        report.kernel_gens.len(),
        t.elapsed()
    );
    assert!(report.equal);
}

/// The all-ordinary threefold elimination does not finish within the probe
/// budget; the engine must report the limit instead of answering.
#[test]
#[ignore]
fn kernel_g3_ordinary_hits_the_limit() {
    let f2 = field_make(2, 1, None).unwrap();
    let cfg = CurveConfig::with_unit_j(&f2, 3, 3).unwrap();
    let limits = Limits::new(Some(Duration::from_secs(30)), Some(40));
    match verify_kernel(&cfg, &limits, None) {
        Err(KummerError::Engine(EngineError::Timeout { .. })) => {}
        other => panic!("expected a reported timeout, got {other:?}"),
    }
}
