use super::geometry::{GlobalWt, ToricGeometry};
use crate::algebra::{Exp, LaurentPoly};
use crate::local_terms::{EdgeInput, FaceChart, FaceInput, VertexInput};
use crate::partitions::{
    pt0_enumerate, Decomposition, FinitePartition, PlanePartition, SolidPartition,
};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GlobalKind {
    Dt,
    Pt0,
    Pt1,
}

impl fmt::Display for GlobalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlobalKind::Dt => write!(f, "dt"),
            GlobalKind::Pt0 => write!(f, "pt0"),
            GlobalKind::Pt1 => write!(f, "pt1"),
        }
    }
}

/// Per-edge data: the stabilized cross-section boxes beyond the surface
/// cylinder.  For DT/PT0 these are embedded-curve boxes at nonnegative
/// transverse exponents; for PT1 they are cokernel boxes at negative
/// transverse exponents inside the thickening.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeCurveData {
    pub boxes: BTreeSet<[i32; 3]>,
}

/// Per-chart data beyond what the face and edges dictate.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct ChartData {
    /// DT: embedded points; PT0: box configuration; PT1: the window
    /// completion of the cokernel module (negative coordinates allowed).
    pub boxes: BTreeSet<[i32; 4]>,
}

/// A global torus-fixed point on a local surface geometry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GlobalFixedPoint {
    pub kind: GlobalKind,
    pub lambda_f: FinitePartition,
    pub edges: Vec<EdgeCurveData>,
    pub charts: Vec<ChartData>,
}

impl GlobalFixedPoint {
    pub fn label(&self) -> String {
        let mut s = format!("{}:f[{}]", self.kind, self.lambda_f);
        for (i, e) in self.edges.iter().enumerate() {
            if !e.boxes.is_empty() {
                s.push_str(&format!(";e{}{:?}", i, e.boxes.iter().collect::<Vec<_>>()));
            }
        }
        for (i, c) in self.charts.iter().enumerate() {
            if !c.boxes.is_empty() {
                s.push_str(&format!(";c{}{:?}", i, c.boxes.iter().collect::<Vec<_>>()));
            }
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct EnumError(pub String);

impl fmt::Display for EnumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for EnumError {}

/// Bounds for the enumeration: embedded-curve boxes control the curve class,
/// chart boxes control the holomorphic Euler characteristic.
#[derive(Clone, Copy, Debug)]
pub struct EnumBudget {
    pub max_edge_boxes: usize,
    pub max_chart_boxes: usize,
    /// Window half-width for PT1 chart completions.
    pub pt1_window: i32,
}

/// The plane partition seen from a chart along one of its surface
/// directions: the surface cylinder plus that edge's embedded boxes.
fn chart_mu(lambda_f: &FinitePartition, edge: &EdgeCurveData) -> PlanePartition {
    PlanePartition::new(
        [
            lambda_f.clone(),
            FinitePartition::empty(),
            FinitePartition::empty(),
        ],
        edge.boxes.iter().copied(),
    )
}

/// Enumerates global fixed points on a local surface geometry (one compact
/// face whose surface directions are the local directions 0, 1 in every
/// chart).
pub fn enumerate_global(
    g: &ToricGeometry,
    kind: GlobalKind,
    d: u32,
    budget: &EnumBudget,
) -> Result<Vec<GlobalFixedPoint>, EnumError> {
    let face = g
        .the_face()
        .ok_or_else(|| EnumError("geometry has no compact face".to_string()))?;
    for r in &face.roles {
        if *r != [0, 1, 2, 3] {
            return Err(EnumError(
                "local-surface enumeration expects surface directions 0, 1".into(),
            ));
        }
    }
    let mut out = Vec::new();
    for lambda_f in FinitePartition::all_of_size(d) {
        // per-edge options
        let mut edge_options: Vec<Vec<EdgeCurveData>> = Vec::new();
        for _e in &g.edges {
            let opts = match kind {
                GlobalKind::Dt | GlobalKind::Pt0 => {
                    let base = chart_mu(&lambda_f, &EdgeCurveData::default());
                    base.enumerate_extensions(budget.max_edge_boxes)
                        .into_iter()
                        .flatten()
                        .map(|pp| EdgeCurveData {
                            boxes: pp.extra_boxes().copied().collect(),
                        })
                        .collect()
                }
                GlobalKind::Pt1 => pt1_edge_options(&lambda_f, budget.max_edge_boxes),
            };
            edge_options.push(opts);
        }
        // cartesian product over edges
        let mut edge_choices: Vec<Vec<EdgeCurveData>> = vec![Vec::new()];
        for opts in &edge_options {
            let mut next = Vec::new();
            for partial in &edge_choices {
                for o in opts {
                    let total: usize = partial.iter().map(|e| e.boxes.len()).sum::<usize>()
                        + o.boxes.len();
                    if total <= budget.max_edge_boxes {
                        let mut p = partial.clone();
                        p.push(o.clone());
                        next.push(p);
                    }
                }
            }
            edge_choices = next;
        }
        for edges in edge_choices {
            // per chart: options given the two adjacent edges
            let mut chart_options: Vec<Vec<ChartData>> = Vec::new();
            let mut feasible = true;
            for chart in 0..g.charts.len() {
                let adj = g.edges_at_chart(chart);
                if adj.len() != 2 {
                    return Err(EnumError(
                        "local-surface enumeration expects two edges per chart".into(),
                    ));
                }
                let opts = chart_options_for(
                    kind,
                    &lambda_f,
                    &adj,
                    &edges,
                    budget,
                )?;
                if opts.is_empty() {
                    feasible = false;
                    break;
                }
                chart_options.push(opts);
            }
            if !feasible {
                continue;
            }
            let mut chart_choices: Vec<Vec<ChartData>> = vec![Vec::new()];
            for opts in &chart_options {
                let mut next = Vec::new();
                for partial in &chart_choices {
                    for o in opts {
                        if kind != GlobalKind::Pt1 {
                            let total: usize =
                                partial.iter().map(|c| c.boxes.len()).sum::<usize>()
                                    + o.boxes.len();
                            if total > budget.max_chart_boxes {
                                continue;
                            }
                        }
                        let mut p = partial.clone();
                        p.push(o.clone());
                        next.push(p);
                    }
                }
                chart_choices = next;
            }
            for charts in chart_choices {
                out.push(GlobalFixedPoint {
                    kind,
                    lambda_f: lambda_f.clone(),
                    edges: edges.clone(),
                    charts,
                });
            }
        }
    }
    Ok(out)
}

/// PT1 per-edge cross-sections: gravity-closed subsets of the region
/// `n < 0` inside the thickening profile.
fn pt1_edge_options(lambda_f: &FinitePartition, max_boxes: usize) -> Vec<EdgeCurveData> {
    let depth = max_boxes as i32;
    let mut sites: BTreeSet<[i32; 4]> = BTreeSet::new();
    for (i3, i4) in lambda_f.boxes() {
        for n in -depth..0 {
            sites.insert([n, i3, i4, 0]);
        }
    }
    // closure under successors inside the region
    let mut region_sites = BTreeSet::new();
    for s in &sites {
        region_sites.insert(*s);
    }
    let configs = enumerate_upclosed_sets(&region_sites, max_boxes);
    configs
        .into_iter()
        .map(|b| EdgeCurveData {
            boxes: b.into_iter().map(|w| [w[0], w[1], w[2]]).collect(),
        })
        .collect()
}

fn enumerate_upclosed_sets(
    sites: &BTreeSet<[i32; 4]>,
    max_size: usize,
) -> Vec<BTreeSet<[i32; 4]>> {
    fn up_closure(sites: &BTreeSet<[i32; 4]>, seed: [i32; 4]) -> BTreeSet<[i32; 4]> {
        let mut out = BTreeSet::new();
        let mut stack = vec![seed];
        out.insert(seed);
        while let Some(w) = stack.pop() {
            for i in 0..4 {
                let mut n = w;
                n[i] += 1;
                if sites.contains(&n) && out.insert(n) {
                    stack.push(n);
                }
            }
        }
        out
    }
    let mut seen: BTreeSet<Vec<[i32; 4]>> = BTreeSet::new();
    let mut frontier = vec![BTreeSet::new()];
    seen.insert(Vec::new());
    let mut all = vec![BTreeSet::new()];
    while let Some(b) = frontier.pop() {
        for w in sites.iter() {
            if b.contains(w) {
                continue;
            }
            let mut nb = b.clone();
            nb.extend(up_closure(sites, *w));
            if nb.len() > max_size {
                continue;
            }
            let key: Vec<[i32; 4]> = nb.iter().copied().collect();
            if seen.insert(key) {
                all.push(nb.clone());
                frontier.push(nb);
            }
        }
    }
    all
}

/// Chart options compatible with the data of the two adjacent edges.
fn chart_options_for(
    kind: GlobalKind,
    lambda_f: &FinitePartition,
    adj: &[(usize, usize)],
    edges: &[EdgeCurveData],
    budget: &EnumBudget,
) -> Result<Vec<ChartData>, EnumError> {
    // the edge along local direction 0 and along local direction 1
    let mut by_dir = [None::<&EdgeCurveData>; 2];
    for (edge_idx, dir) in adj {
        if *dir > 1 {
            return Err(EnumError("edge along a fibre direction".into()));
        }
        by_dir[*dir] = Some(&edges[*edge_idx]);
    }
    let (e0, e1) = (
        by_dir[0].ok_or_else(|| EnumError("missing edge along direction 0".into()))?,
        by_dir[1].ok_or_else(|| EnumError("missing edge along direction 1".into()))?,
    );
    match kind {
        GlobalKind::Dt | GlobalKind::Pt0 => {
            let mu = chart_asymptotics(lambda_f, e0, e1);
            match kind {
                GlobalKind::Dt => {
                    let levels = crate::partitions::enumerate_solid_partitions(
                        &mu,
                        budget.max_chart_boxes,
                    )
                    .map_err(|e| EnumError(e.to_string()))?;
                    Ok(levels
                        .into_iter()
                        .flatten()
                        .map(|pi| ChartData {
                            boxes: pi.extra_boxes().copied().collect(),
                        })
                        .collect())
                }
                GlobalKind::Pt0 => {
                    let levels = pt0_enumerate(&mu, budget.max_chart_boxes)
                        .map_err(|e| EnumError(e.to_string()))?;
                    Ok(levels
                        .into_iter()
                        .flatten()
                        .map(|cfg| ChartData { boxes: cfg.boxes })
                        .collect())
                }
                _ => unreachable!(),
            }
        }
        GlobalKind::Pt1 => Ok(pt1_chart_options(lambda_f, e0, e1, budget)),
    }
}

/// Asymptotic plane partitions of a chart: directions 0 and 1 carry the
/// surface cylinder with the respective edge boxes, the fibre directions are
/// empty.
pub fn chart_asymptotics(
    lambda_f: &FinitePartition,
    e0: &EdgeCurveData,
    e1: &EdgeCurveData,
) -> [PlanePartition; 4] {
    [
        chart_mu(lambda_f, e0),
        chart_mu(lambda_f, e1),
        PlanePartition::empty(),
        PlanePartition::empty(),
    ]
}

/// PT1 chart completions inside a window: up-closed subsets of the chart
/// region whose outer slices match the two edge cross-sections.
fn pt1_chart_options(
    lambda_f: &FinitePartition,
    e0: &EdgeCurveData,
    e1: &EdgeCurveData,
    budget: &EnumBudget,
) -> Vec<ChartData> {
    let k = budget.pt1_window;
    let in_region = |w: [i32; 4]| -> bool {
        lambda_f.contains(w[2], w[3]) && (w[0] < 0 || w[1] < 0)
    };
    // allowed sites: region sites in the window whose upward closure exits
    // through prescribed boundary boxes only
    let mut sites: Vec<[i32; 4]> = Vec::new();
    for w0 in -k..k {
        for w1 in -k..k {
            for (w2, w3) in lambda_f.boxes() {
                let w = [w0, w1, w2, w3];
                if !in_region(w) {
                    continue;
                }
                // escaping along +0 keeps w1 fixed: allowed iff w1 < 0 and
                // (w1, w2, w3) is a prescribed cross-section box of edge 0,
                // or the orbit eventually leaves the region (w1 >= 0)
                let ray0_ok = w[1] >= 0 || e0.boxes.contains(&[w[1], w[2], w[3]]);
                let ray1_ok = w[0] >= 0 || e1.boxes.contains(&[w[0], w[2], w[3]]);
                if ray0_ok && ray1_ok {
                    sites.push(w);
                }
            }
        }
    }
    let site_set: BTreeSet<[i32; 4]> = sites.iter().copied().collect();
    // required: boundary layers representing the stabilized legs
    let mut base: BTreeSet<[i32; 4]> = BTreeSet::new();
    for b in &e0.boxes {
        for w0 in (k - 2)..k {
            base.insert([w0, b[0], b[1], b[2]]);
        }
    }
    for b in &e1.boxes {
        for w1 in (k - 2)..k {
            base.insert([b[0], w1, b[1], b[2]]);
        }
    }
    // close the base upward inside the allowed sites
    let closure = |seed: &BTreeSet<[i32; 4]>| -> Option<BTreeSet<[i32; 4]>> {
        let mut out = seed.clone();
        let mut stack: Vec<[i32; 4]> = seed.iter().copied().collect();
        while let Some(w) = stack.pop() {
            for i in 0..4 {
                let mut n = w;
                n[i] += 1;
                if n[0] >= k || n[1] >= k {
                    continue; // beyond the window: the prescribed tails take over
                }
                if in_region(n) {
                    if !site_set.contains(&n) {
                        return None; // closure escapes through a forbidden site
                    }
                    if out.insert(n) {
                        stack.push(n);
                    }
                }
            }
        }
        Some(out)
    };
    let base = match closure(&base) {
        Some(b) => b,
        None => return Vec::new(),
    };
    // enumerate up-closed supersets of base inside the allowed sites
    let mut seen: BTreeSet<Vec<[i32; 4]>> = BTreeSet::new();
    let mut all = Vec::new();
    let mut frontier = vec![base.clone()];
    let base_len = base.len();
    seen.insert(base.iter().copied().collect());
    all.push(ChartData { boxes: base });
    while let Some(b) = frontier.pop() {
        for w in site_set.iter() {
            if b.contains(w) {
                continue;
            }
            let mut seed: BTreeSet<[i32; 4]> = b.clone();
            seed.insert(*w);
            let nb = match closure(&seed) {
                Some(x) => x,
                None => continue,
            };
            if nb.len() - base_len > budget.max_chart_boxes {
                continue;
            }
            let key: Vec<[i32; 4]> = nb.iter().copied().collect();
            if seen.insert(key) {
                all.push(ChartData { boxes: nb.clone() });
                frontier.push(nb);
            }
        }
    }
    all
}

/// Builds the per-chart vertex input (as a character decomposition in chart
/// coordinates) for a fixed point.
pub fn chart_vertex_input(
    g: &ToricGeometry,
    fp: &GlobalFixedPoint,
    chart: usize,
    l_weight: Exp,
) -> Result<VertexInput, EnumError> {
    let adj = g.edges_at_chart(chart);
    let mut by_dir = [None::<&EdgeCurveData>; 2];
    for (edge_idx, dir) in &adj {
        by_dir[*dir] = Some(&fp.edges[*edge_idx]);
    }
    let (e0, e1) = (by_dir[0].unwrap(), by_dir[1].unwrap());
    let decomp = match fp.kind {
        GlobalKind::Dt | GlobalKind::Pt0 => {
            let mu = chart_asymptotics(&fp.lambda_f, e0, e1);
            let mut pi = SolidPartition::minimal(mu).map_err(|e| EnumError(e.to_string()))?;
            let mut d = if fp.kind == GlobalKind::Dt {
                let mut boxes: Vec<[i32; 4]> = fp.charts[chart].boxes.iter().copied().collect();
                boxes.sort_by_key(|b| b.iter().sum::<i32>());
                for b in boxes {
                    pi.push_box(b);
                }
                pi.decompose()
            } else {
                pi.decompose()
            };
            if fp.kind == GlobalKind::Pt0 {
                for b in &fp.charts[chart].boxes {
                    d.w.add_assign(&LaurentPoly::monomial_whole([b[0], b[1], b[2], b[3], 0]));
                }
            }
            d
        }
        GlobalKind::Pt1 => pt1_chart_decomposition(fp, chart, e0, e1),
    };
    Ok(VertexInput::with_l_weight(decomp, l_weight))
}

/// Decomposition of the pair character of a PT1 chart: the pure surface plus
/// the window completion of the cokernel, with the stabilized rows folded
/// into the edge parts.
fn pt1_chart_decomposition(
    fp: &GlobalFixedPoint,
    chart: usize,
    e0: &EdgeCurveData,
    e1: &EdgeCurveData,
) -> Decomposition {
    let mut d = Decomposition::default();
    // pure surface: lambda_f across the pair (0,1)
    d.wij[crate::partitions::pair_index(0, 1)] = fp.lambda_f.character(2, 3);
    let b = &fp.charts[chart].boxes;
    let k = b
        .iter()
        .map(|w| w[0].abs().max(w[1].abs()))
        .max()
        .unwrap_or(1)
        + 1;
    // stabilized rows: edge boxes extend along the respective directions
    let mut tails = LaurentPoly::zero();
    for c in &e0.boxes {
        // row (w0 >= s, c) with start folded as W0 += c and finite
        // correction handled through the window difference below
        d.wi[0].add_assign(&LaurentPoly::monomial_whole([0, c[0], c[1], c[2], 0]));
        for w0 in 0..k {
            tails.add_assign(&LaurentPoly::monomial_whole([w0, c[0], c[1], c[2], 0]));
        }
    }
    for c in &e1.boxes {
        d.wi[1].add_assign(&LaurentPoly::monomial_whole([c[0], 0, c[1], c[2], 0]));
        for w1 in 0..k {
            tails.add_assign(&LaurentPoly::monomial_whole([c[0], w1, c[1], c[2], 0]));
        }
    }
    // W = (actual window boxes) - (window expansion of the declared tails,
    // which start at the window edge -k)
    let mut actual = LaurentPoly::zero();
    for w in b.iter() {
        actual.add_assign(&LaurentPoly::monomial_whole([w[0], w[1], w[2], w[3], 0]));
    }
    actual.sub_assign(&tails);
    d.w = actual;
    d
}

/// Edge input in the coordinates of the first chart of the edge.
pub fn edge_input(
    g: &ToricGeometry,
    fp: &GlobalFixedPoint,
    edge_idx: usize,
    l_weight: Exp,
) -> EdgeInput {
    let e = &g.edges[edge_idx];
    let dir = e.dirs.0;
    let surf_dir = 1 - dir; // the other surface direction
    let mut cross: [LaurentPoly; 3] = Default::default();
    // transverse directions in ascending order
    let trans: Vec<usize> = (0..4).filter(|&i| i != dir).collect();
    let surf_pos = trans.iter().position(|&i| i == surf_dir).unwrap();
    cross[surf_pos] = fp.lambda_f.character(2, 3);
    let mut w_edge = LaurentPoly::zero();
    for b in &fp.edges[edge_idx].boxes {
        let mut e4 = [0i32; 5];
        e4[surf_dir] = b[0];
        e4[2] = b[1];
        e4[3] = b[2];
        w_edge.add_assign(&LaurentPoly::monomial_whole(e4));
    }
    EdgeInput {
        dir,
        cross,
        w_edge,
        normal: e.normal,
        l_weight,
    }
}

/// Face input with per-chart exponent maps into the global lattice.
pub fn face_input(g: &ToricGeometry, fp: &GlobalFixedPoint, l_weights: &[Exp]) -> FaceInput {
    let face = g.the_face().expect("local surface face");
    let charts = face
        .charts
        .iter()
        .zip(face.roles.iter())
        .map(|(&c, roles)| {
            let chart_map = g.charts[c].exp_map();
            let mut map = [[0i32; 5]; 5];
            for i in 0..4 {
                map[i] = chart_map[roles[i]];
            }
            map[4][4] = 2;
            FaceChart {
                map,
                l_weight: l_weights[c],
            }
        })
        .collect();
    FaceInput {
        lambda: fp.lambda_f.clone(),
        charts,
    }
}

/// Local expression of a global weight in a chart's coordinates (whole
/// exponents), solving against the unimodular chart basis.
pub fn global_to_local(chart: &super::geometry::Chart, w: GlobalWt) -> [i64; 4] {
    // solve a * basis = w by Cramer's rule on the transposed system; chart
    // bases are unimodular so the quotients are integers
    fn det4(m: &[[i128; 4]; 4]) -> i128 {
        fn det3(m: &[[i128; 3]; 3]) -> i128 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        let mut total = 0i128;
        for c in 0..4 {
            let mut minor = [[0i128; 3]; 3];
            for r in 1..4 {
                let mut cc = 0;
                for c2 in 0..4 {
                    if c2 == c {
                        continue;
                    }
                    minor[r - 1][cc] = m[r][c2];
                    cc += 1;
                }
            }
            let sign = if c % 2 == 0 { 1 } else { -1 };
            total += sign * m[0][c] * det3(&minor);
        }
        total
    }
    // transposed system: columns are basis vectors
    let mut bt = [[0i128; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            bt[j][i] = chart.basis[i][j] as i128;
        }
    }
    let det = det4(&bt);
    assert!(det == 1 || det == -1, "chart basis must be unimodular");
    let mut out = [0i64; 4];
    for i in 0..4 {
        let mut m = bt;
        for j in 0..4 {
            m[j][i] = w[j] as i128;
        }
        let di = det4(&m);
        assert_eq!(di % det, 0);
        out[i] = (di / det) as i64;
    }
    let mut check = [0i64; 4];
    for i in 0..4 {
        for j in 0..4 {
            check[j] += out[i] * chart.basis[i][j];
        }
    }
    assert_eq!(check, w, "global weight not in the chart lattice");
    out
}
