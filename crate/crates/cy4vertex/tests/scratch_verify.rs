use cy4vertex::series::{verify_correspondence, CaseSpec};
use std::time::Instant;

#[test]
fn acceptance_cases() {
    for (name, order) in [("v1", 4i64), ("v5", 3), ("v11", 4)] {
        let t0 = Instant::now();
        let case = CaseSpec::catalog(name).unwrap();
        let r = verify_correspondence(&case, order, 1 << 22).unwrap();
        eprintln!("{} in {:?}:\n{}", name, t0.elapsed(), r);
        assert!(r.verified(), "{} failed", name);
    }
}
