//! Diameter of a finite planar point set.

use num_complex::Complex64;

/// Above this many points the diameter goes through the convex hull.
pub const BRUTE_FORCE_MAX: usize = 4096;

/// Farthest pair among `points`, as `(i, j, distance)`.
///
/// Exhaustive for small inputs, convex hull plus rotating calipers otherwise.
/// Returns `None` for an empty set.
pub fn diameter_pair(points: &[Complex64]) -> Option<(usize, usize, f64)> {
    if points.is_empty() {
        return None;
    }
    if points.len() <= BRUTE_FORCE_MAX {
        return Some(brute_force_pair(points));
    }

    let hull = convex_hull(points);
    let mut best = calipers(points, &hull);

    // The rightmost point is always a hull vertex, but a hull vertex lost to a
    // rounding-level collinearity test could hide the true partner. A linear
    // scan from it costs O(M) and pins any pair that involves it.
    let right = (0..points.len())
        .max_by(|&a, &b| {
            points[a]
                .re
                .total_cmp(&points[b].re)
                .then(points[a].im.total_cmp(&points[b].im))
        })
        .unwrap_or(0);
    if let Some((j, d)) = farthest_from(points, right) {
        if d > best.2 {
            best = (right, j, d);
        }
    }
    Some(best)
}

pub fn diameter(points: &[Complex64]) -> f64 {
    diameter_pair(points).map_or(0.0, |(_, _, d)| d)
}

pub fn brute_force_pair(points: &[Complex64]) -> (usize, usize, f64) {
    let mut best = (0, 0, 0.0f64);
    for (i, a) in points.iter().enumerate() {
        for (j, b) in points.iter().enumerate().skip(i + 1) {
            let d = (a - b).norm();
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    best
}

fn farthest_from(points: &[Complex64], i: usize) -> Option<(usize, f64)> {
    let a = points[i];
    points
        .iter()
        .map(|b| (a - b).norm())
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(&y.1))
}

#[inline]
fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Indices of the convex hull vertices in counter-clockwise order, starting
/// from the leftmost point (monotone chain). Collinear points are dropped.
pub fn convex_hull(points: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a]
            .re
            .total_cmp(&points[b].re)
            .then(points[a].im.total_cmp(&points[b].im))
    });
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }

    let mut lower: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in &idx {
        while lower.len() >= 2
            && cross(points[lower[lower.len() - 2]], points[lower[lower.len() - 1]], points[i]) <= 0.0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross(points[upper[upper.len() - 2]], points[upper[upper.len() - 1]], points[i]) <= 0.0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn calipers(points: &[Complex64], hull: &[usize]) -> (usize, usize, f64) {
    let h = hull.len();
    match h {
        0 => return (0, 0, 0.0),
        1 => return (hull[0], hull[0], 0.0),
        2 => return (hull[0], hull[1], (points[hull[0]] - points[hull[1]]).norm()),
        _ => {}
    }
    let at = |k: usize| points[hull[k % h]];
    let mut best = (hull[0], hull[0], 0.0f64);
    let mut j = 1;
    for i in 0..h {
        let (a, b) = (at(i), at(i + 1));
        // advance j while the triangle area against edge (a, b) grows
        let mut steps = 0;
        while steps < h && cross(a, b, at(j + 1)).abs() > cross(a, b, at(j)).abs() {
            j += 1;
            steps += 1;
        }
        for (u, v) in [(i, j), (i + 1, j)] {
            let d = (at(u) - at(v)).norm();
            if d > best.2 {
                best = (hull[u % h], hull[v % h], d);
            }
        }
    }
    best
}
