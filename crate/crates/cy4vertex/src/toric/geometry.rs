use std::collections::BTreeMap;
use std::fmt;

/// Whole (undoubled) weight vector in the global character lattice.
pub type GlobalWt = [i64; 4];

/// One affine chart: the global torus weights of its four local coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub basis: [GlobalWt; 4],
}

impl Chart {
    pub fn identity() -> Self {
        Chart {
            basis: [
                [1, 0, 0, 0],
                [0, 1, 0, 0],
                [0, 0, 1, 0],
                [0, 0, 0, 1],
            ],
        }
    }

    /// Exponent map for transporting doubled-lattice data from this chart's
    /// local coordinates (plus `y`) to the global lattice.
    pub fn exp_map(&self) -> [[i32; 5]; 5] {
        let mut m = [[0i32; 5]; 5];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = 2 * self.basis[i][j] as i32;
            }
        }
        m[4][4] = 2;
        m
    }
}

/// Compact invariant line joining two charts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub charts: (usize, usize),
    /// Local coordinate directions of the edge in each chart.
    pub dirs: (usize, usize),
    /// Normal-bundle degrees along the transverse directions of the first
    /// chart, in ascending local order; they sum to -2.
    pub normal: [i64; 3],
    /// Pairing of transverse directions: `matched[k]` is the local direction
    /// in the second chart glued to the `k`-th transverse direction of the
    /// first.
    pub matched: [usize; 3],
}

/// Compact invariant surface: a cycle of charts.  In each member chart the
/// local directions are split into two surface directions and two normal
/// directions; the normal roles are globally consistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub charts: Vec<usize>,
    /// Per chart: local directions playing the roles
    /// (surface1, surface2, normal1, normal2).
    pub roles: Vec<[usize; 4]>,
}

/// Equivariant line bundle: one global weight per chart (the weight of the
/// chosen trivialization).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundle {
    pub weights: Vec<GlobalWt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricGeometry {
    pub name: String,
    pub charts: Vec<Chart>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub bundles: BTreeMap<String, LineBundle>,
    /// The geometry is the total space of a canonical bundle over a toric
    /// 3-fold, with the fibre along local direction 3 in every chart; local
    /// surfaces are always of this shape.
    pub tot_ky: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometryError(pub String);

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for GeometryError {}

fn sub(a: GlobalWt, b: GlobalWt) -> GlobalWt {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn neg(a: GlobalWt) -> GlobalWt {
    [-a[0], -a[1], -a[2], -a[3]]
}

fn is_multiple(diff: GlobalWt, dir: GlobalWt) -> Option<i64> {
    // diff = m * dir with integer m
    let mut m: Option<i64> = None;
    for i in 0..4 {
        match (diff[i], dir[i]) {
            (0, 0) => {}
            (_, 0) => return None,
            (d, e) => {
                if d % e != 0 {
                    return None;
                }
                let q = d / e;
                match m {
                    None => m = Some(q),
                    Some(prev) if prev == q => {}
                    _ => return None,
                }
            }
        }
    }
    Some(m.unwrap_or(0))
}

impl ToricGeometry {
    /// Derives and validates the edge data between two charts: the second
    /// chart's edge coordinate is the inverse of the first's, and each
    /// transverse coordinate matches one of the other chart up to a twist by
    /// the edge character.
    fn make_edge(&self, a: usize, b: usize, dir_a: usize, dir_b: usize) -> Result<Edge, GeometryError> {
        let wa = &self.charts[a].basis;
        let wb = &self.charts[b].basis;
        let edge_w = wa[dir_a];
        if wb[dir_b] != neg(edge_w) {
            return Err(GeometryError(format!(
                "edge {}-{}: opposite coordinates do not match",
                a, b
            )));
        }
        let trans_a: Vec<usize> = (0..4).filter(|&i| i != dir_a).collect();
        let trans_b: Vec<usize> = (0..4).filter(|&i| i != dir_b).collect();
        let mut normal = [0i64; 3];
        let mut matched = [usize::MAX; 3];
        for (k, &i) in trans_a.iter().enumerate() {
            for &j in trans_b.iter() {
                if let Some(m) = is_multiple(sub(wb[j], wa[i]), neg(edge_w)) {
                    // w_b = w_a - m * edge per the standard transition
                    if matched[k] != usize::MAX {
                        return Err(GeometryError(format!(
                            "edge {}-{}: ambiguous transverse matching",
                            a, b
                        )));
                    }
                    matched[k] = j;
                    normal[k] = m;
                }
            }
            if matched[k] == usize::MAX {
                return Err(GeometryError(format!(
                    "edge {}-{}: transverse direction {} unmatched",
                    a, b, i
                )));
            }
        }
        if normal.iter().sum::<i64>() != -2 {
            return Err(GeometryError(format!(
                "edge {}-{}: normal degrees {:?} violate the Calabi-Yau condition",
                a, b, normal
            )));
        }
        Ok(Edge {
            charts: (a, b),
            dirs: (dir_a, dir_b),
            normal,
            matched,
        })
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        // Calabi-Yau: the product of coordinate weights is chart-independent
        let vol = |c: &Chart| -> GlobalWt {
            let mut v = [0i64; 4];
            for i in 0..4 {
                for j in 0..4 {
                    v[j] += c.basis[i][j];
                }
            }
            v
        };
        let v0 = vol(&self.charts[0]);
        for (i, c) in self.charts.iter().enumerate() {
            if vol(c) != v0 {
                return Err(GeometryError(format!(
                    "chart {} does not preserve the volume character",
                    i
                )));
            }
        }
        for e in &self.edges {
            let rebuilt = self.make_edge(e.charts.0, e.charts.1, e.dirs.0, e.dirs.1)?;
            if &rebuilt != e {
                return Err(GeometryError(format!(
                    "edge {:?} data inconsistent with the chart bases",
                    e.charts
                )));
            }
        }
        for f in &self.faces {
            if f.charts.len() != f.roles.len() || f.charts.is_empty() {
                return Err(GeometryError("malformed face".into()));
            }
            // normal weights must restrict consistently: the surface
            // character spans of consecutive charts agree on the overlap
            for i in 0..f.charts.len() {
                let c = f.charts[i];
                let r = f.roles[i];
                let span: Vec<GlobalWt> =
                    r.iter().take(2).map(|&k| self.charts[c].basis[k]).collect();
                let next = f.charts[(i + 1) % f.charts.len()];
                let rn = f.roles[(i + 1) % f.charts.len()];
                let span_next: Vec<GlobalWt> = rn
                    .iter()
                    .take(2)
                    .map(|&k| self.charts[next].basis[k])
                    .collect();
                // both spans must generate the same rank-2 sublattice: check
                // each vector of one is an integer combination of the other
                for v in &span {
                    if !in_span2(*v, span_next[0], span_next[1]) {
                        return Err(GeometryError(format!(
                            "face charts {} and {} have different surface spans",
                            c, next
                        )));
                    }
                }
            }
        }
        for (name, lb) in &self.bundles {
            if lb.weights.len() != self.charts.len() {
                return Err(GeometryError(format!(
                    "bundle {} has {} weights for {} charts",
                    name,
                    lb.weights.len(),
                    self.charts.len()
                )));
            }
            // weight differences across edges must be multiples of the edge
            // character
            for e in &self.edges {
                let (a, b) = e.charts;
                let d = sub(lb.weights[b], lb.weights[a]);
                if is_multiple(d, self.charts[a].basis[e.dirs.0]).is_none() {
                    return Err(GeometryError(format!(
                        "bundle {} weights inconsistent across edge {:?}",
                        name, e.charts
                    )));
                }
            }
        }
        Ok(())
    }

    /// The affine chart `C^4`.
    pub fn c4() -> Self {
        ToricGeometry {
            name: "c4".into(),
            charts: vec![Chart::identity()],
            edges: vec![],
            faces: vec![],
            bundles: BTreeMap::from([(
                "O".into(),
                LineBundle {
                    weights: vec![[0, 0, 0, 0]],
                },
            )]),
            tot_ky: true,
        }
    }

    /// Total space of `O(a) + O(b) + O(c)` over the projective line, with
    /// `a + b + c = -2`.
    pub fn local_curve(a: i64, b: i64, c: i64) -> Result<Self, GeometryError> {
        if a + b + c != -2 {
            return Err(GeometryError(
                "local curve degrees must sum to -2".into(),
            ));
        }
        let chart0 = Chart::identity();
        let chart1 = Chart {
            basis: [
                [-1, 0, 0, 0],
                [-a, 1, 0, 0],
                [-b, 0, 1, 0],
                [-c, 0, 0, 1],
            ],
        };
        let mut g = ToricGeometry {
            name: format!("local-curve({},{},{})", a, b, c),
            charts: vec![chart0, chart1],
            edges: vec![],
            faces: vec![],
            bundles: BTreeMap::from([(
                "O".into(),
                LineBundle {
                    weights: vec![[0, 0, 0, 0], [0, 0, 0, 0]],
                },
            )]),
            tot_ky: true,
        };
        let e = g.make_edge(0, 1, 0, 0)?;
        g.edges.push(e);
        g.validate()?;
        Ok(g)
    }

    /// Total space of `O(-a) + O(a-3)` over the projective plane, fibre
    /// coordinates in local directions 2 and 3.  For the canonical-bundle
    /// structure the direction-3 fibre is `K_Y` over `Y = Tot(O(-a))`.
    pub fn local_p2(a: i64) -> Result<Self, GeometryError> {
        let d3 = -a; // degree of the first fibre bundle
        let d4 = a - 3;
        let chart0 = Chart::identity();
        // chart at the second fixed point: u' = u^{-1}, v' = v u^{-1},
        // fibres twist by the bundle degrees
        let chart1 = Chart {
            basis: [
                [-1, 0, 0, 0],
                [-1, 1, 0, 0],
                [-d3, 0, 1, 0],
                [-d4, 0, 0, 1],
            ],
        };
        let chart2 = Chart {
            basis: [
                [0, -1, 0, 0],
                [1, -1, 0, 0],
                [0, -d3, 1, 0],
                [0, -d4, 0, 1],
            ],
        };
        let mut g = ToricGeometry {
            name: format!("local-p2({})", a),
            charts: vec![chart0, chart1, chart2],
            edges: vec![],
            faces: vec![],
            bundles: BTreeMap::new(),
            tot_ky: true,
        };
        for (a_, b_, da, db) in [(0usize, 1usize, 0usize, 0usize), (0, 2, 1, 0), (1, 2, 1, 1)] {
            let e = g.make_edge(a_, b_, da, db)?;
            g.edges.push(e);
        }
        g.faces.push(Face {
            charts: vec![0, 1, 2],
            roles: vec![[0, 1, 2, 3]; 3],
        });
        // hyperplane bundle: weight 0 on chart 0, and on the others the
        // weight of the corresponding homogeneous coordinate ratio
        g.bundles.insert(
            "O".into(),
            LineBundle {
                weights: vec![[0; 4]; 3],
            },
        );
        g.bundles.insert(
            "O(1)".into(),
            LineBundle {
                weights: vec![[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0]],
            },
        );
        g.validate()?;
        Ok(g)
    }

    /// Total space of `O(a1, b1) + O(a2, b2)` over the product of two
    /// projective lines, with `a1 + a2 = b1 + b2 = -2`.
    pub fn local_p1p1(d1: (i64, i64), d2: (i64, i64)) -> Result<Self, GeometryError> {
        if d1.0 + d2.0 != -2 || d1.1 + d2.1 != -2 {
            return Err(GeometryError(
                "local surface bundles must multiply to the canonical bundle".into(),
            ));
        }
        // charts indexed by (i, j) in {0,1}^2 -> 2i + j; local coords
        // (u or u^{-1}, v or v^{-1}, fibre1, fibre2)
        let mk = |i: i64, j: i64| -> Chart {
            let su = 1 - 2 * i; // +1 or -1
            let sv = 1 - 2 * j;
            Chart {
                basis: [
                    [su, 0, 0, 0],
                    [0, sv, 0, 0],
                    [-(i * d1.0), -(j * d1.1), 1, 0],
                    [-(i * d2.0), -(j * d2.1), 0, 1],
                ],
            }
        };
        let charts = vec![mk(0, 0), mk(0, 1), mk(1, 0), mk(1, 1)];
        let mut g = ToricGeometry {
            name: format!("local-p1p1({},{};{},{})", d1.0, d1.1, d2.0, d2.1),
            charts,
            edges: vec![],
            faces: vec![],
            bundles: BTreeMap::new(),
            tot_ky: true,
        };
        // edges: u-lines at fixed v-corner, v-lines at fixed u-corner
        for (a, b, da, db) in [
            (0usize, 2usize, 0usize, 0usize), // v = 0 line
            (1, 3, 0, 0),                     // v = infinity line
            (0, 1, 1, 1),                     // u = 0 line
            (2, 3, 1, 1),                     // u = infinity line
        ] {
            let e = g.make_edge(a, b, da, db)?;
            g.edges.push(e);
        }
        g.faces.push(Face {
            charts: vec![0, 1, 2, 3],
            roles: vec![[0, 1, 2, 3]; 4],
        });
        g.bundles.insert(
            "O".into(),
            LineBundle {
                weights: vec![[0; 4]; 4],
            },
        );
        g.bundles.insert(
            "O(1)".into(),
            LineBundle {
                weights: vec![
                    [0, 0, 0, 0],
                    [0, 1, 0, 0],
                    [1, 0, 0, 0],
                    [1, 1, 0, 0],
                ],
            },
        );
        g.validate()?;
        Ok(g)
    }

    /// Named builtin constructor: `c4`, `local-curve:a,b,c`, `local-p2:a=K`,
    /// `local-p1p1:a1,b1,a2,b2`.
    pub fn builtin(spec: &str) -> Result<Self, GeometryError> {
        if spec == "c4" {
            return Ok(Self::c4());
        }
        if let Some(rest) = spec.strip_prefix("local-curve:") {
            let nums: Result<Vec<i64>, _> = rest.split(',').map(|s| s.trim().parse()).collect();
            let nums = nums.map_err(|e| GeometryError(format!("bad degrees: {}", e)))?;
            if nums.len() != 3 {
                return Err(GeometryError("local-curve wants three degrees".into()));
            }
            return Self::local_curve(nums[0], nums[1], nums[2]);
        }
        if let Some(rest) = spec.strip_prefix("local-p2:a=") {
            let a: i64 = rest
                .trim()
                .parse()
                .map_err(|e| GeometryError(format!("bad parameter: {}", e)))?;
            return Self::local_p2(a);
        }
        if let Some(rest) = spec.strip_prefix("local-p1p1:") {
            let nums: Result<Vec<i64>, _> = rest.split(',').map(|s| s.trim().parse()).collect();
            let nums = nums.map_err(|e| GeometryError(format!("bad degrees: {}", e)))?;
            if nums.len() != 4 {
                return Err(GeometryError("local-p1p1 wants four degrees".into()));
            }
            return Self::local_p1p1((nums[0], nums[1]), (nums[2], nums[3]));
        }
        Err(GeometryError(format!("unknown builtin geometry {}", spec)))
    }

    /// The single compact face of a local surface.
    pub fn the_face(&self) -> Option<&Face> {
        self.faces.first()
    }

    /// Edges adjacent to a chart, with the local edge direction.
    pub fn edges_at_chart(&self, chart: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.charts.0 == chart {
                out.push((i, e.dirs.0));
            } else if e.charts.1 == chart {
                out.push((i, e.dirs.1));
            }
        }
        out
    }
}

fn in_span2(v: GlobalWt, a: GlobalWt, b: GlobalWt) -> bool {
    // is v an integer combination of a and b? brute-force small coefficients
    for x in -6..=6i64 {
        for y in -6..=6i64 {
            let mut ok = true;
            for i in 0..4 {
                if v[i] != x * a[i] + y * b[i] {
                    ok = false;
                    break;
                }
            }
            if ok {
                return true;
            }
        }
    }
    false
}

/// Structured text format: `chart`, `edge`, `face`, `bundle` sections.
pub fn parse_geometry(s: &str) -> Result<ToricGeometry, GeometryError> {
    let mut g = ToricGeometry {
        name: "file".into(),
        charts: vec![],
        edges: vec![],
        faces: vec![],
        bundles: BTreeMap::new(),
        tot_ky: false,
    };
    let mut edge_specs: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (ln, raw) in s.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: &str| GeometryError(format!("line {}: {}", ln + 1, m));
        let mut it = line.split_whitespace();
        match it.next().unwrap() {
            "name" => g.name = it.collect::<Vec<_>>().join(" "),
            "tot-ky" => g.tot_ky = true,
            "chart" => {
                let nums: Result<Vec<i64>, _> = it.map(str::parse).collect();
                let nums = nums.map_err(|_| err("bad chart weights"))?;
                if nums.len() != 16 {
                    return Err(err("chart wants 16 integers (4 weights of 4 coordinates)"));
                }
                let mut basis = [[0i64; 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        basis[i][j] = nums[4 * i + j];
                    }
                }
                g.charts.push(Chart { basis });
            }
            "edge" => {
                let nums: Result<Vec<usize>, _> = it.map(str::parse).collect();
                let nums = nums.map_err(|_| err("bad edge spec"))?;
                if nums.len() != 4 {
                    return Err(err("edge wants: chartA chartB dirA dirB"));
                }
                edge_specs.push((nums[0], nums[1], nums[2], nums[3]));
            }
            "face" => {
                // face c0 r0a r0b r0c r0d  c1 ...
                let nums: Result<Vec<usize>, _> = it.map(str::parse).collect();
                let nums = nums.map_err(|_| err("bad face spec"))?;
                if nums.is_empty() || nums.len() % 5 != 0 {
                    return Err(err("face wants groups of: chart s1 s2 n1 n2"));
                }
                let mut charts = Vec::new();
                let mut roles = Vec::new();
                for chunk in nums.chunks(5) {
                    charts.push(chunk[0]);
                    roles.push([chunk[1], chunk[2], chunk[3], chunk[4]]);
                }
                g.faces.push(Face { charts, roles });
            }
            "bundle" => {
                let name = it.next().ok_or_else(|| err("bundle wants a name"))?;
                let nums: Result<Vec<i64>, _> = it.map(str::parse).collect();
                let nums = nums.map_err(|_| err("bad bundle weights"))?;
                if nums.len() % 4 != 0 {
                    return Err(err("bundle weights come in groups of 4"));
                }
                let weights: Vec<GlobalWt> = nums
                    .chunks(4)
                    .map(|c| [c[0], c[1], c[2], c[3]])
                    .collect();
                g.bundles.insert(name.to_string(), LineBundle { weights });
            }
            other => return Err(err(&format!("unknown directive {}", other))),
        }
    }
    for (a, b, da, db) in edge_specs {
        if a >= g.charts.len() || b >= g.charts.len() {
            return Err(GeometryError("edge chart index out of range".into()));
        }
        let e = g.make_edge(a, b, da, db)?;
        g.edges.push(e);
    }
    g.validate()?;
    Ok(g)
}

pub fn format_geometry(g: &ToricGeometry) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "name {}", g.name);
    if g.tot_ky {
        let _ = writeln!(out, "tot-ky");
    }
    for c in &g.charts {
        let nums: Vec<String> = c
            .basis
            .iter()
            .flat_map(|w| w.iter().map(|x| x.to_string()))
            .collect();
        let _ = writeln!(out, "chart {}", nums.join(" "));
    }
    for e in &g.edges {
        let _ = writeln!(
            out,
            "edge {} {} {} {}",
            e.charts.0, e.charts.1, e.dirs.0, e.dirs.1
        );
    }
    for f in &g.faces {
        let mut parts = Vec::new();
        for (c, r) in f.charts.iter().zip(f.roles.iter()) {
            parts.push(format!("{} {} {} {} {}", c, r[0], r[1], r[2], r[3]));
        }
        let _ = writeln!(out, "face {}", parts.join("  "));
    }
    for (name, lb) in &g.bundles {
        let nums: Vec<String> = lb
            .weights
            .iter()
            .flat_map(|w| w.iter().map(|x| x.to_string()))
            .collect();
        let _ = writeln!(out, "bundle {} {}", name, nums.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c4_is_one_chart() {
        let g = ToricGeometry::c4();
        assert_eq!(g.charts.len(), 1);
        assert!(g.edges.is_empty() && g.faces.is_empty());
        g.validate().unwrap();
    }

    #[test]
    fn local_p2_structure() {
        let g = ToricGeometry::local_p2(2).unwrap();
        assert_eq!(g.charts.len(), 3);
        assert_eq!(g.edges.len(), 3);
        assert_eq!(g.faces.len(), 1);
        for e in &g.edges {
            assert_eq!(e.normal.iter().sum::<i64>(), -2);
            // line in the plane, O(-2), O(-1) in some order
            let mut sorted = e.normal;
            sorted.sort();
            assert_eq!(sorted, [-2, -1, 1]);
        }
    }

    #[test]
    fn resolved_conifold_like_curve() {
        let g = ToricGeometry::local_curve(-1, -1, 0).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].normal, [-1, -1, 0]);
    }

    #[test]
    fn cy_violation_rejected() {
        assert!(ToricGeometry::local_curve(-1, -1, 1).is_err());
    }

    #[test]
    fn geometry_file_round_trip() {
        let g = ToricGeometry::local_p2(1).unwrap();
        let text = format_geometry(&g);
        let back = parse_geometry(&text).unwrap();
        assert_eq!(back.charts, g.charts);
        assert_eq!(back.edges, g.edges);
        assert_eq!(back.faces, g.faces);
    }

    #[test]
    fn bad_edge_file_rejected() {
        // an edge whose degrees sum to -1: embed a non-CY chart basis
        let text = "chart 1 0 0 0  0 1 0 0  0 0 1 0  0 0 0 1\nchart -1 0 0 0  1 1 0 0  -1 0 1 0  1 0 0 1\nedge 0 1 0 0\n";
        assert!(parse_geometry(text).is_err());
    }
}
