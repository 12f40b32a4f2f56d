//! Exact cell traversal of polylines on an origin-anchored grid.
//!
//! Cell `(a, b)` is the half-open square `[aε, (a+1)ε) × [bε, (b+1)ε)`. A
//! segment is walked cell by cell, always crossing whichever boundary comes
//! first along it. When both boundaries are crossed at the same parameter
//! (the segment passes through a grid corner) both side cells are added as
//! well as the diagonal one, so the result never misses a cell the closed
//! segment touches and consecutive cells always share an edge.

use std::collections::{HashSet, VecDeque};

use num_complex::Complex64;
use rayon::prelude::*;

pub type Cell = (i64, i64);

/// Boundary crossings closer than this (in segment parameter) count as a tie.
const TIE: f64 = 1e-12;

#[inline]
pub fn cell_of(z: Complex64, eps: f64) -> Cell {
    ((z.re / eps).floor() as i64, (z.im / eps).floor() as i64)
}

/// Inserts every cell met by the segment `a → b` into `out`.
pub fn rasterize_segment(a: Complex64, b: Complex64, eps: f64, out: &mut HashSet<Cell>) {
    let (mut cx, mut cy) = cell_of(a, eps);
    let (ex, ey) = cell_of(b, eps);
    out.insert((cx, cy));

    let d = b - a;
    let step_x: i64 = if ex > cx { 1 } else { -1 };
    let step_y: i64 = if ey > cy { 1 } else { -1 };
    // Parameter at which the segment leaves the current column / row.
    let exit = |c: i64, step: i64, start: f64, delta: f64| -> f64 {
        if delta == 0.0 {
            return f64::INFINITY;
        }
        let boundary = if step > 0 { c + 1 } else { c } as f64 * eps;
        (boundary - start) / delta
    };

    while (cx, cy) != (ex, ey) {
        let tx = if cx == ex { f64::INFINITY } else { exit(cx, step_x, a.re, d.re) };
        let ty = if cy == ey { f64::INFINITY } else { exit(cy, step_y, a.im, d.im) };
        if (tx - ty).abs() <= TIE {
            out.insert((cx + step_x, cy));
            out.insert((cx, cy + step_y));
            cx += step_x;
            cy += step_y;
        } else if tx < ty {
            cx += step_x;
        } else {
            cy += step_y;
        }
        out.insert((cx, cy));
    }
}

/// Cells met by the closed polyline through `points` (last joins first).
pub fn rasterize_closed_polyline(points: &[Complex64], eps: f64) -> HashSet<Cell> {
    let m = points.len();
    (0..m)
        .into_par_iter()
        .fold(HashSet::new, |mut set, i| {
            rasterize_segment(points[i], points[(i + 1) % m], eps, &mut set);
            set
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return b.into_iter().chain(a).collect();
            }
            a.extend(b);
            a
        })
}

#[inline]
fn neighbours((x, y): Cell) -> impl Iterator<Item = Cell> {
    (-1..=1)
        .flat_map(move |dx| (-1..=1).map(move |dy| (x + dx, y + dy)))
        .filter(move |&c| c != (x, y))
}

/// Fewest cells in a chain from `from` to `to` through `cells`, where
/// consecutive cells touch (closed squares sharing an edge or a corner).
/// `None` when no such chain exists.
pub fn chain_length(cells: &HashSet<Cell>, from: Cell, to: Cell) -> Option<usize> {
    if !cells.contains(&from) || !cells.contains(&to) {
        return None;
    }
    let mut seen = HashSet::from([from]);
    let mut queue = VecDeque::from([(from, 1usize)]);
    while let Some((c, len)) = queue.pop_front() {
        if c == to {
            return Some(len);
        }
        for nb in neighbours(c) {
            if cells.contains(&nb) && seen.insert(nb) {
                queue.push_back((nb, len + 1));
            }
        }
    }
    None
}

/// Whether the closed cells form one connected set.
pub fn is_connected(cells: &HashSet<Cell>) -> bool {
    let Some(&start) = cells.iter().next() else {
        return true;
    };
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        for nb in neighbours(c) {
            if cells.contains(&nb) && seen.insert(nb) {
                stack.push(nb);
            }
        }
    }
    seen.len() == cells.len()
}
