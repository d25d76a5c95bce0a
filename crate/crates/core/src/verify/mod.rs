//! Construction-independent checks on an [`EdgeColoring`]: properness,
//! absence of bichromatic cycles, and an exhaustive lower-bound search for
//! tiny `K_{n,n}`.
//!
//! Nothing here looks at how a coloring was produced; the only input is
//! `(n, num_colors, edge → color)`.

mod search;

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use serde::Serialize;

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::perm::Label;

pub use search::{exhaustive_lower_bound, LowerBound, MAX_SEARCH_N};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Top,
    Bottom,
}

/// A vertex with two or more incident edges of the same color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clash {
    pub side: Side,
    pub vertex: Label,
    pub color: u32,
}

/// A closed walk in the union of two color classes.
///
/// `edges[k]` is `[top, bottom, color]`. Edge `k` shares its bottom vertex
/// with edge `k+1` for even `k` and its top vertex for odd `k`; the last
/// edge shares its top vertex with the first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub colors: [u32; 2],
    pub edges: Vec<[u32; 3]>,
}

impl Witness {
    /// Closed, alternating in color, without repeated vertices, and present
    /// in `c` with the stated colors.
    pub fn is_valid_for(&self, c: &EdgeColoring) -> bool {
        let len = self.edges.len();
        if len < 4 || !len.is_multiple_of(2) || self.colors[0] == self.colors[1] {
            return false;
        }
        let n = c.n() as u32;
        for (k, e) in self.edges.iter().enumerate() {
            let [u, v, col] = *e;
            if u >= n || v >= n || c.color(u, v) != col || !self.colors.contains(&col) {
                return false;
            }
            let next = self.edges[(k + 1) % len];
            if col == next[2] {
                return false;
            }
            let linked = if k % 2 == 0 {
                v == next[1] && u != next[0]
            } else {
                u == next[0] && v != next[1]
            };
            if !linked {
                return false;
            }
        }
        let mut tops: Vec<u32> = self.edges.iter().step_by(2).map(|e| e[0]).collect();
        let mut bottoms: Vec<u32> = self.edges.iter().step_by(2).map(|e| e[1]).collect();
        tops.sort_unstable();
        bottoms.sort_unstable();
        tops.windows(2).all(|w| w[0] != w[1]) && bottoms.windows(2).all(|w| w[0] != w[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub proper: bool,
    pub proper_violations: Vec<Clash>,
    pub acyclic: bool,
    pub bichromatic_witness: Option<Witness>,
    pub pairs_checked: usize,
}

/// Every vertex sees each color at most once.
pub fn check_proper(c: &EdgeColoring) -> Vec<Clash> {
    let n = c.n();
    let mut clashes = Vec::new();
    let mut stamp = vec![(u32::MAX, 0u8); c.num_colors() as usize];
    for side in [Side::Top, Side::Bottom] {
        for w in 0..n as Label {
            for other in 0..n as Label {
                let col = match side {
                    Side::Top => c.color(w, other),
                    Side::Bottom => c.color(other, w),
                };
                let slot = &mut stamp[col as usize];
                let key = w + if side == Side::Top { 0 } else { n as u32 };
                if slot.0 != key {
                    *slot = (key, 1);
                } else {
                    if slot.1 == 1 {
                        clashes.push(Clash {
                            side,
                            vertex: w,
                            color: col,
                        });
                    }
                    slot.1 = 2;
                }
            }
        }
    }
    clashes
}

/// Edges grouped by color: `edges[offsets[c]..offsets[c+1]]`.
struct ColorClasses {
    offsets: Vec<usize>,
    edges: Vec<(Label, Label)>,
}

impl ColorClasses {
    fn new(c: &EdgeColoring) -> Self {
        let k = c.num_colors() as usize;
        let mut offsets = vec![0usize; k + 1];
        for &col in c.raw() {
            offsets[col as usize + 1] += 1;
        }
        for i in 0..k {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut edges = vec![(0, 0); c.raw().len()];
        for [u, v, col] in c.edges() {
            edges[fill[col as usize]] = (u, v);
            fill[col as usize] += 1;
        }
        ColorClasses { offsets, edges }
    }

    fn class(&self, col: u32) -> &[(Label, Label)] {
        &self.edges[self.offsets[col as usize]..self.offsets[col as usize + 1]]
    }
}

/// Union-find over the `2n` vertices that only resets what it touched.
struct Scratch {
    parent: Vec<u32>,
    touched: Vec<u32>,
}

impl Scratch {
    fn new(vertices: usize) -> Self {
        Scratch {
            parent: (0..vertices as u32).collect(),
            touched: Vec::new(),
        }
    }

    fn find(&mut self, mut a: u32) -> u32 {
        while self.parent[a as usize] != a {
            let grand = self.parent[self.parent[a as usize] as usize];
            self.parent[a as usize] = grand;
            a = grand;
        }
        a
    }

    /// False when `a` and `b` were already connected.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra as usize] = rb;
        self.touched.push(ra);
        true
    }

    fn reset(&mut self) {
        for t in self.touched.drain(..) {
            self.parent[t as usize] = t;
        }
    }
}

/// First edge of classes `c1 ∪ c2` that closes a cycle, if any.
fn closing_edge(
    classes: &ColorClasses,
    n: u32,
    c1: u32,
    c2: u32,
    uf: &mut Scratch,
) -> Option<(Label, Label, u32)> {
    let mut hit = None;
    'outer: for col in [c1, c2] {
        for &(u, v) in classes.class(col) {
            if !uf.union(u, n + v) {
                hit = Some((u, v, col));
                break 'outer;
            }
        }
    }
    uf.reset();
    hit
}

/// Walks the two-colored cycle through the closing edge.
fn extract_witness(
    c: &EdgeColoring,
    classes: &ColorClasses,
    c1: u32,
    c2: u32,
    start: (Label, Label, u32),
) -> Witness {
    let n = c.n();
    let none = Label::MAX;
    // top → bottom and bottom → top along each of the two colors
    let mut down = [vec![none; n], vec![none; n]];
    let mut up = [vec![none; n], vec![none; n]];
    for (slot, col) in [c1, c2].into_iter().enumerate() {
        for &(u, v) in classes.class(col) {
            down[slot][u as usize] = v;
            up[slot][v as usize] = u;
        }
    }
    let (u0, v0, col0) = start;
    let first = usize::from(col0 == c2);
    let second = 1 - first;
    let mut edges = vec![[u0, v0, col0]];
    let mut bottom = v0;
    loop {
        let t = up[second][bottom as usize];
        edges.push([t, bottom, [c1, c2][second]]);
        if t == u0 {
            break;
        }
        let b = down[first][t as usize];
        edges.push([t, b, [c1, c2][first]]);
        bottom = b;
        debug_assert!(edges.len() <= 2 * n);
    }
    Witness {
        colors: [c1, c2],
        edges,
    }
}

/// Checks every pair of color classes for a cycle; stops at the first one.
///
/// Rejects improper colorings. In parallel mode the witness returned (and
/// `pairs_checked` on failure) may differ between runs; the verdict does not.
pub fn check_acyclic(c: &EdgeColoring) -> Result<VerificationReport> {
    check_acyclic_with(c, Execution::default())
}

pub fn check_acyclic_with(c: &EdgeColoring, exec: Execution) -> Result<VerificationReport> {
    let clashes = check_proper(c);
    if !clashes.is_empty() {
        return Err(Error::NotProper(clashes.len()));
    }
    let classes = ColorClasses::new(c);
    let k = c.num_colors();
    let n = c.n() as u32;
    let checked = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let hit = exec::find_map_range_init(
        exec,
        0..k as usize,
        || Scratch::new(2 * c.n()),
        |uf, c1| {
            let c1 = c1 as u32;
            for c2 in c1 + 1..k {
                if stop.load(Ordering::Relaxed) {
                    return None;
                }
                checked.fetch_add(1, Ordering::Relaxed);
                if let Some(edge) = closing_edge(&classes, n, c1, c2, uf) {
                    stop.store(true, Ordering::Relaxed);
                    return Some((c1, c2, edge));
                }
            }
            None
        },
    );
    let witness = hit.map(|(c1, c2, edge)| extract_witness(c, &classes, c1, c2, edge));
    Ok(VerificationReport {
        proper: true,
        proper_violations: Vec::new(),
        acyclic: witness.is_none(),
        bichromatic_witness: witness,
        pairs_checked: checked.into_inner(),
    })
}

/// The cycle in color classes `c1 ∪ c2`, if there is one.
pub fn find_bichromatic_cycle(c: &EdgeColoring, c1: u32, c2: u32) -> Result<Option<Witness>> {
    if c1 == c2 || c1 >= c.num_colors() || c2 >= c.num_colors() {
        return Err(Error::InvalidArgument(format!(
            "bad color pair ({c1}, {c2})"
        )));
    }
    let clashes = check_proper(c);
    if !clashes.is_empty() {
        return Err(Error::NotProper(clashes.len()));
    }
    let classes = ColorClasses::new(c);
    let mut uf = Scratch::new(2 * c.n());
    Ok(closing_edge(&classes, c.n() as u32, c1, c2, &mut uf)
        .map(|edge| extract_witness(c, &classes, c1, c2, edge)))
}

/// Properness and, when proper, acyclicity. Never fails.
pub fn verify(c: &EdgeColoring) -> VerificationReport {
    verify_with(c, Execution::default())
}

pub fn verify_with(c: &EdgeColoring, exec: Execution) -> VerificationReport {
    let clashes = check_proper(c);
    if !clashes.is_empty() {
        return VerificationReport {
            proper: false,
            proper_violations: clashes,
            acyclic: false,
            bichromatic_witness: None,
            pairs_checked: 0,
        };
    }
    check_acyclic_with(c, exec).expect("properness checked above")
}
