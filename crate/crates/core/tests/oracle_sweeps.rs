use std::time::Instant;

use neighborly_core::hadamard::sylvester;
use neighborly_core::oracle::{
    dominance_sweep, projection_containment, verify_k_neighborly, SweepMode,
};
use neighborly_core::build;

#[test]
fn d16_edges_dominance_and_containment() {
    let c = build(&sylvester(4).unwrap()).unwrap();
    let start = Instant::now();
    let faces = verify_k_neighborly(&c, 2, SweepMode::Exhaustive).unwrap();
    eprintln!("faces {:?} in {:?}", (faces.subsets, faces.faces, &faces.min_margin), start.elapsed());
    assert_eq!(faces.subsets, 1984);
    assert!(faces.passed());

    let start = Instant::now();
    let dom = dominance_sweep(&c, 2, SweepMode::Exhaustive).unwrap();
    eprintln!("dominance {:?} in {:?}", (dom.subsets, dom.dominant, &dom.min_margin), start.elapsed());
    assert_eq!(dom.subsets, 496);
    assert!(dom.passed());

    let start = Instant::now();
    let cont = projection_containment(&c, 2, SweepMode::Exhaustive).unwrap();
    eprintln!("containment {:?} in {:?}", (cont.vertices, &cont.min_margin), start.elapsed());
    assert_eq!(cont.vertices, 1984);
    assert!(cont.holds());
}
