//! Permutations of the dense label set `0..n`.
//!
//! `compose(f, g)` applies `g` first: `compose(f, g)(i) = f(g(i))`. The
//! cycle product `π⁻¹∘π_i` that describes `M ∪ M_i` is therefore
//! `compose(&m.inverse(), &pi_i)`.

use std::fmt;

use crate::error::{Error, Result};

/// A vertex label on either side of `K_{n,n}`.
pub type Label = u32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<Label>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n as Label).collect(),
        }
    }

    /// Builds a permutation from its image table, rejecting non-bijections.
    pub fn from_images(image: Vec<Label>) -> Result<Self> {
        if image.is_empty() {
            return Err(Error::InvalidPermutation("empty label set".into()));
        }
        let n = image.len();
        let mut seen = vec![false; n];
        for (i, &v) in image.iter().enumerate() {
            let v = v as usize;
            if v >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image of {i} is {v}, outside 0..{n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("{v} appears twice")));
            }
        }
        Ok(Permutation { image })
    }

    /// Tabulates `f` over `0..n` and validates the result.
    pub fn from_fn(n: usize, f: impl FnMut(Label) -> Label) -> Result<Self> {
        Self::from_images((0..n as Label).map(f).collect())
    }

    /// Builds a permutation from disjoint cycles; labels not mentioned are fixed.
    pub fn from_cycles<C: AsRef<[Label]>>(n: usize, cycles: &[C]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPermutation("empty label set".into()));
        }
        let mut image: Vec<Label> = (0..n as Label).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for (k, &label) in cycle.iter().enumerate() {
                let l = label as usize;
                if l >= n {
                    return Err(Error::InvalidPermutation(format!(
                        "label {l} outside 0..{n}"
                    )));
                }
                if std::mem::replace(&mut used[l], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "label {l} in more than one cycle"
                    )));
                }
                image[l] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { image })
    }

    /// Parses cycle notation such as `"(0)(1 3 4 2)"`. Omitted labels are fixed.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self> {
        let mut cycles: Vec<Vec<Label>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse("unterminated cycle".into()))?;
            let cycle = body[..close]
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<Label>()
                        .map_err(|e| Error::Parse(format!("{tok:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if cycle.is_empty() {
                return Err(Error::Parse("empty cycle".into()));
            }
            cycles.push(cycle);
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(n, &cycles)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: Label) -> Label {
        self.image[i as usize]
    }

    pub fn images(&self) -> &[Label] {
        &self.image
    }

    pub fn into_images(self) -> Vec<Label> {
        self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i as Label == v)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v as usize] = i as Label;
        }
        Permutation { image: inv }
    }

    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        // Scanning labels in ascending order makes each cycle start at its
        // smallest element and sorts cycles by leading element.
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur as Label);
                cur = self.image[cur] as usize;
            }
            cycles.push(cycle);
        }
        CycleDecomposition { n, cycles }
    }

    /// Sorted multiset of cycle lengths, singletons included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths = self.cycle_decomposition().lengths();
        lengths.sort_unstable();
        lengths
    }

    pub fn fixed_points(&self) -> Vec<Label> {
        self.image
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i as Label == v)
            .map(|(i, _)| i as Label)
            .collect()
    }

    /// True iff the permutation is a single cycle through all `n` labels.
    pub fn is_full_cycle(&self) -> bool {
        let n = self.len();
        let mut cur = self.image[0];
        let mut steps = 1;
        while cur != 0 {
            cur = self.image[cur as usize];
            steps += 1;
        }
        steps == n
    }
}

/// `f ∘ g`, i.e. `g` is applied first.
pub fn compose(f: &Permutation, g: &Permutation) -> Result<Permutation> {
    if f.len() != g.len() {
        return Err(Error::SizeMismatch {
            left: f.len(),
            right: g.len(),
        });
    }
    Ok(Permutation {
        image: g.image.iter().map(|&v| f.image[v as usize]).collect(),
    })
}

/// `s⁻¹ ∘ f ∘ s`.
pub fn conjugate(f: &Permutation, s: &Permutation) -> Result<Permutation> {
    compose(&s.inverse(), &compose(f, s)?)
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Permutation[{}]{}",
            self.len(),
            self.cycle_decomposition()
        )
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.cycle_decomposition(), f)
    }
}

/// Disjoint cycles in canonical order: each cycle starts at its smallest
/// label and cycles are sorted by that label. Fixed points are kept as
/// singleton cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    n: usize,
    cycles: Vec<Vec<Label>>,
}

impl CycleDecomposition {
    /// Canonicalizes an arbitrary list of disjoint cycles covering `0..n`.
    pub fn from_cycles(n: usize, cycles: Vec<Vec<Label>>) -> Result<Self> {
        Ok(Permutation::from_cycles(n, &cycles)?.cycle_decomposition())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cycles(&self) -> &[Vec<Label>] {
        &self.cycles
    }

    /// Cycles of length at least two.
    pub fn nontrivial(&self) -> impl Iterator<Item = &Vec<Label>> {
        self.cycles.iter().filter(|c| c.len() >= 2)
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    pub fn to_permutation(&self) -> Permutation {
        let mut image = vec![0; self.n];
        for cycle in &self.cycles {
            for (k, &l) in cycle.iter().enumerate() {
                image[l as usize] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation { image }
    }

    /// Cycle notation; singleton cycles are dropped when `suppress_fixed`.
    pub fn notation(&self, suppress_fixed: bool) -> String {
        self.notation_with(suppress_fixed, |l| l.to_string())
    }

    /// Cycle notation with a custom label renderer.
    pub fn notation_with(
        &self,
        suppress_fixed: bool,
        mut label: impl FnMut(Label) -> String,
    ) -> String {
        let mut out = String::new();
        for cycle in &self.cycles {
            if suppress_fixed && cycle.len() == 1 {
                continue;
            }
            out.push('(');
            for (k, &l) in cycle.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(&label(l));
            }
            out.push(')');
        }
        out
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.notation(false))
    }
}
