//! Backtracking search for an acyclic proper edge-coloring of a tiny `K_{n,n}`.

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};

/// Largest side size the search accepts.
pub const MAX_SEARCH_N: usize = 3;

const NONE: u8 = u8::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub n: usize,
    pub colors: u32,
    pub exists: bool,
    pub witness: Option<EdgeColoring>,
    /// Number of color assignments tried past the fixed first row.
    pub nodes: u64,
}

struct Search {
    n: usize,
    palette: usize,
    // top_mate[u * palette + c] = bottom vertex joined to u by color c
    top_mate: Vec<u8>,
    bottom_mate: Vec<u8>,
    colors: Vec<u8>,
    nodes: u64,
}

impl Search {
    fn assign(&mut self, u: usize, v: usize, c: usize) {
        self.top_mate[u * self.palette + c] = v as u8;
        self.bottom_mate[v * self.palette + c] = u as u8;
        self.colors[u * self.n + v] = c as u8;
    }

    fn unassign(&mut self, u: usize, v: usize, c: usize) {
        self.top_mate[u * self.palette + c] = NONE;
        self.bottom_mate[v * self.palette + c] = NONE;
        self.colors[u * self.n + v] = NONE;
    }

    fn free(&self, u: usize, v: usize, c: usize) -> bool {
        self.top_mate[u * self.palette + c] == NONE
            && self.bottom_mate[v * self.palette + c] == NONE
    }

    /// Would coloring `u ↦ v` with `c` close a `c`/`d` cycle for some `d`?
    ///
    /// Such a cycle is a path from `v` back to `u` alternating `d`, `c`, …,
    /// `d`; the partial coloring is proper, so the path is unique.
    fn closes_cycle(&self, u: usize, v: usize, c: usize) -> bool {
        (0..self.palette).filter(|&d| d != c).any(|d| {
            let mut bottom = v;
            for _ in 0..self.n {
                let t = self.bottom_mate[bottom * self.palette + d];
                if t == NONE {
                    return false;
                }
                if t as usize == u {
                    return true;
                }
                let b = self.top_mate[t as usize * self.palette + c];
                if b == NONE {
                    return false;
                }
                bottom = b as usize;
            }
            false
        })
    }

    fn run(&mut self, edge: usize) -> bool {
        if edge == self.n * self.n {
            return true;
        }
        let (u, v) = (edge / self.n, edge % self.n);
        for c in 0..self.palette {
            if !self.free(u, v, c) || self.closes_cycle(u, v, c) {
                continue;
            }
            self.nodes += 1;
            self.assign(u, v, c);
            if self.run(edge + 1) {
                return true;
            }
            self.unassign(u, v, c);
        }
        false
    }
}

/// Whether `K_{n,n}` (`n ≤ 3`) has an acyclic proper edge-coloring with at
/// most `k` colors.
///
/// Edges are visited row by row with colors in ascending order. Colors are
/// interchangeable, so the edges at top vertex 0 are fixed to colors
/// `0..n`, and a palette larger than `n²` is cut down to `n²`.
pub fn exhaustive_lower_bound(n: usize, k: u32) -> Result<LowerBound> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > MAX_SEARCH_N {
        return Err(Error::SearchTooLarge(format!(
            "n = {n}: the search space grows like k^(n²); only n ≤ {MAX_SEARCH_N} is supported"
        )));
    }
    let none = LowerBound {
        n,
        colors: k,
        exists: false,
        witness: None,
        nodes: 0,
    };
    // Top vertex 0 alone needs n distinct colors.
    if (k as usize) < n {
        return Ok(none);
    }
    let palette = (k as usize).min(n * n);
    let mut search = Search {
        n,
        palette,
        top_mate: vec![NONE; n * palette],
        bottom_mate: vec![NONE; n * palette],
        colors: vec![NONE; n * n],
        nodes: 0,
    };
    for v in 0..n {
        search.assign(0, v, v);
    }
    if !search.run(n) {
        return Ok(LowerBound {
            nodes: search.nodes,
            ..none
        });
    }
    let witness = EdgeColoring::new(n, k, search.colors.iter().map(|&c| c as u32).collect())?;
    Ok(LowerBound {
        n,
        colors: k,
        exists: true,
        witness: Some(witness),
        nodes: search.nodes,
    })
}
