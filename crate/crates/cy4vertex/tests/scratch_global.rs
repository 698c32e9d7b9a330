use cy4vertex::toric::{enumerate_global, global_series, EnumBudget, GlobalKind, ToricGeometry};
use std::time::Instant;

#[test]
fn p2_pt1_degree1() {
    let g = ToricGeometry::local_p2(2).unwrap();
    let budget = EnumBudget { max_edge_boxes: 2, max_chart_boxes: 3, pt1_window: 5 };
    let t0 = Instant::now();
    let fps = enumerate_global(&g, GlobalKind::Pt1, 1, &budget).unwrap();
    eprintln!("PT1 d=1: {} raw fixed points in {:?}", fps.len(), t0.elapsed());
    let s = global_series(&g, GlobalKind::Pt1, 1, (3, 5), (1, 3), &budget).unwrap();
    eprintln!("{}", s);
}

#[test]
fn p2_pt0_degree1() {
    let g = ToricGeometry::local_p2(2).unwrap();
    let budget = EnumBudget { max_edge_boxes: 2, max_chart_boxes: 4, pt1_window: 5 };
    let t0 = Instant::now();
    let s = global_series(&g, GlobalKind::Pt0, 1, (3, 5), (1, 6), &budget).unwrap();
    eprintln!("PT0 d=1 in {:?}\n{}", t0.elapsed(), s);
}
