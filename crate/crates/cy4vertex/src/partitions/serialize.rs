use super::finite::FinitePartition;
use super::plane::PlanePartition;
use super::solid::{mu_slots, SolidPartition};
use std::fmt::Write as _;

/// Text format for solid partitions: each asymptotic plane partition as legs
/// (indexed by the global direction, 1-based) plus its finite boxes in local
/// coordinates, then the added boxes of the solid partition.
///
/// ```text
/// solid
/// mu 1
/// leg 2: 1
/// box 0 1 0
/// end
/// box 0 0 0 1
/// end
/// ```
pub fn format_solid(pi: &SolidPartition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "solid");
    for a in 0..4 {
        let mu = &pi.asymptotics()[a];
        if mu.is_empty() {
            continue;
        }
        let _ = writeln!(out, "mu {}", a + 1);
        for (k, slot) in mu_slots(a).iter().enumerate() {
            let leg = mu.leg(k);
            if !leg.is_empty() {
                let cols: Vec<String> = leg.cols().iter().map(|c| c.to_string()).collect();
                let _ = writeln!(out, "leg {}: {}", slot + 1, cols.join(" "));
            }
        }
        for b in mu.extra_boxes() {
            let _ = writeln!(out, "box {} {} {}", b[0], b[1], b[2]);
        }
        let _ = writeln!(out, "end");
    }
    for b in pi.extra_boxes() {
        let _ = writeln!(out, "box {} {} {} {}", b[0], b[1], b[2], b[3]);
    }
    let _ = writeln!(out, "end");
    out
}

pub fn parse_solid(s: &str) -> Result<SolidPartition, String> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    if lines.next() != Some("solid") {
        return Err("expected 'solid' header".into());
    }
    let mut mu: [PlanePartition; 4] = Default::default();
    let mut solid_boxes: Vec<[i32; 4]> = Vec::new();
    let mut cur: Option<(usize, [FinitePartition; 3], Vec<[i32; 3]>)> = None;
    for line in lines {
        if line == "end" {
            match cur.take() {
                Some((a, legs, boxes)) => {
                    mu[a] = PlanePartition::new(legs, boxes);
                }
                None => {
                    // final end: assemble
                    let mut pi = SolidPartition::minimal(mu).map_err(|e| e.to_string())?;
                    let mut boxes = solid_boxes;
                    boxes.sort_by_key(|b| b.iter().sum::<i32>());
                    for b in boxes {
                        pi.push_box(b);
                    }
                    return Ok(pi);
                }
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("mu ") {
            if cur.is_some() {
                return Err("nested mu block".into());
            }
            let a: usize = rest.trim().parse::<usize>().map_err(|e| e.to_string())?;
            if !(1..=4).contains(&a) {
                return Err(format!("mu index {} out of range", a));
            }
            cur = Some((a - 1, Default::default(), Vec::new()));
            continue;
        }
        if let Some(rest) = line.strip_prefix("leg ") {
            let (a, legs, _) = cur.as_mut().ok_or("leg outside mu block")?;
            let (idx, cols) = rest.split_once(':').ok_or("malformed leg line")?;
            let b: usize = idx.trim().parse::<usize>().map_err(|e| e.to_string())?;
            let b = b.checked_sub(1).ok_or("leg index out of range")?;
            let k = mu_slots(*a)
                .iter()
                .position(|&s| s == b)
                .ok_or("leg direction equals the mu direction")?;
            let cols: Result<Vec<u32>, _> = cols.split_whitespace().map(str::parse).collect();
            legs[k] = FinitePartition::from_cols(cols.map_err(|e: std::num::ParseIntError| e.to_string())?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("box ") {
            let nums: Result<Vec<i32>, _> = rest.split_whitespace().map(str::parse).collect();
            let nums = nums.map_err(|e: std::num::ParseIntError| e.to_string())?;
            match (&mut cur, nums.len()) {
                (Some((_, _, boxes)), 3) => boxes.push([nums[0], nums[1], nums[2]]),
                (None, 4) => solid_boxes.push([nums[0], nums[1], nums[2], nums[3]]),
                _ => return Err(format!("box arity mismatch: {}", line)),
            }
            continue;
        }
        return Err(format!("unrecognized line: {}", line));
    }
    Err("missing final 'end'".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{minimal_plane_partitions, LambdaSet};

    #[test]
    fn round_trip_two_planes_with_box() {
        let mut lambda = LambdaSet::empty();
        lambda.set(0, 1, FinitePartition::one());
        lambda.set(2, 3, FinitePartition::from_cols(vec![2, 1]));
        let mu = minimal_plane_partitions(&lambda);
        let mut pi = SolidPartition::minimal(mu).unwrap();
        pi.push_box([1, 1, 1, 0]);
        let text = format_solid(&pi);
        let back = parse_solid(&text).unwrap();
        assert_eq!(back, pi);
    }

    #[test]
    fn round_trip_embedded_mu_box() {
        let mut lambda = LambdaSet::empty();
        lambda.set(0, 1, FinitePartition::one());
        let mut mu = minimal_plane_partitions(&lambda);
        mu[0].push_box([0, 1, 0]);
        let pi = SolidPartition::minimal(mu).unwrap();
        let text = format_solid(&pi);
        assert_eq!(parse_solid(&text).unwrap(), pi);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_solid("solid\nwibble\nend").is_err());
        assert!(parse_solid("").is_err());
    }
}
