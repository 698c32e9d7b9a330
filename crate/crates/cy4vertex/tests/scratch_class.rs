use cy4vertex::toric::{compute_term, enumerate_global, total_class, EnumBudget, GlobalKind, ToricGeometry};

#[test]
fn class_data() {
    let g = ToricGeometry::local_p2(2).unwrap();
    let budget = EnumBudget { max_edge_boxes: 1, max_chart_boxes: 1, pt1_window: 4 };
    let fps = enumerate_global(&g, GlobalKind::Pt1, 1, &budget).unwrap();
    eprintln!("{} fixed points", fps.len());
    for fp in fps.iter().take(6) {
        let c0 = total_class(&g, fp, "O(1)", 0).unwrap();
        let c1 = total_class(&g, fp, "O(1)", 1).unwrap();
        let c2 = total_class(&g, fp, "O(1)", 2).unwrap();
        eprintln!("fp {}", fp.label());
        eprintln!("  vd = {}, chi0 = {}, chi1 = {}, chi2 = {}",
            c0.y_graded_part(0).rank(), -c0.y_graded_part(1).rank(),
            -c1.y_graded_part(1).rank(), -c2.y_graded_part(1).rank());
        match compute_term(&g, fp, "O(1)", 1) {
            Ok(t) => eprintln!("  d = {}, m2 = {}, n = {}, vd = {}, zero = {}", t.d, t.m2, t.n, t.vd, t.bracket.is_zero()),
            Err(e) => eprintln!("  ERR {}", e),
        }
    }
}
