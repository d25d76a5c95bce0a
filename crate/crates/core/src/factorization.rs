//! Perfect matchings of `K_{n,n}` stored as permutations, the two
//! factorization families, and the Hamiltonian-union (P1F) check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::field::FieldContext;
use crate::perm::{compose, Label, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `π_i : a ↦ a + i (mod n)`.
    Cyclic,
    /// The `p²` family indexed by `(a, b) ∈ Z_p × Z_p`.
    PSquared,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Cyclic => "cyclic",
            FamilyKind::PSquared => "p_squared",
        }
    }
}

/// An ordered list of `n` pairwise edge-disjoint perfect matchings covering
/// every edge of `K_{n,n}`. Matching `i` is the edge set `{u ↦ π_i(u)}`.
#[derive(Clone, Debug)]
pub struct Factorization {
    n: usize,
    kind: FamilyKind,
    matchings: Vec<Permutation>,
    context: Option<FieldContext>,
}

impl Factorization {
    /// Validates the 1-factorization invariants (not perfection).
    pub fn new(
        kind: FamilyKind,
        matchings: Vec<Permutation>,
        context: Option<FieldContext>,
    ) -> Result<Self> {
        let n = matchings.len();
        if n == 0 {
            return Err(Error::InvalidFactorization("no matchings".into()));
        }
        if let Some(m) = matchings.iter().find(|m| m.len() != n) {
            return Err(Error::InvalidFactorization(format!(
                "{n} matchings but a matching on {} labels",
                m.len()
            )));
        }
        // n matchings of n edges each: edge-disjoint iff, for every top vertex,
        // the images under all matchings are distinct.
        let mut owner = vec![usize::MAX; n];
        for u in 0..n {
            owner.fill(usize::MAX);
            for (i, m) in matchings.iter().enumerate() {
                let v = m.apply(u as Label) as usize;
                if owner[v] != usize::MAX {
                    return Err(Error::InvalidFactorization(format!(
                        "edge {u} ↦ {v} lies in matchings {} and {i}",
                        owner[v]
                    )));
                }
                owner[v] = i;
            }
        }
        if kind == FamilyKind::PSquared {
            match &context {
                Some(ctx) if ctx.pair_count() == n => {}
                _ => {
                    return Err(Error::InvalidFactorization(
                        "p_squared family needs a field context with p² = n".into(),
                    ))
                }
            }
        }
        Ok(Factorization {
            n,
            kind,
            matchings,
            context,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn matchings(&self) -> &[Permutation] {
        &self.matchings
    }

    pub fn matching(&self, i: usize) -> &Permutation {
        &self.matchings[i]
    }

    pub fn context(&self) -> Option<&FieldContext> {
        self.context.as_ref()
    }

    /// Index of the matching that contains edge `u ↦ v`.
    pub fn factor_of_edge(&self, u: Label, v: Label) -> Option<usize> {
        self.matchings.iter().position(|m| m.apply(u) == v)
    }

    pub fn to_json_repr(&self) -> FactorizationJson {
        FactorizationJson {
            n: self.n,
            kind: self.kind,
            p: self.context.as_ref().map(FieldContext::p),
            x: self.context.as_ref().map(FieldContext::x),
            matchings: self.matchings.iter().map(|m| m.images().to_vec()).collect(),
        }
    }

    pub fn from_json_repr(repr: FactorizationJson) -> Result<Self> {
        let context = match repr.p {
            Some(p) => Some(FieldContext::new(p, repr.x)?),
            None => None,
        };
        if repr.matchings.len() != repr.n {
            return Err(Error::InvalidFactorization(format!(
                "n = {} but {} matchings",
                repr.n,
                repr.matchings.len()
            )));
        }
        let matchings = repr
            .matchings
            .into_iter()
            .map(Permutation::from_images)
            .collect::<Result<Vec<_>>>()?;
        Factorization::new(repr.kind, matchings, context)
    }
}

/// Serialized form: `{"n", "kind", "p"?, "x"?, "matchings": [[images…], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationJson {
    pub n: usize,
    pub kind: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<u32>,
    pub matchings: Vec<Vec<Label>>,
}

/// The shifts `a ↦ a + i (mod n)` for odd `n ≥ 3`. Perfect only when `n` is prime.
pub fn cyclic_factorization(n: usize) -> Result<Factorization> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "cyclic family needs odd n ≥ 3, got {n}"
        )));
    }
    let matchings = (0..n as Label)
        .map(|i| Permutation::from_fn(n, |a| (a + i) % n as Label))
        .collect::<Result<Vec<_>>>()?;
    Ok(Factorization {
        n,
        kind: FamilyKind::Cyclic,
        matchings,
        context: None,
    })
}

/// The matching `π_{(a,b)}` on `Z_p × Z_p`:
///
/// ```text
/// (c,d) ↦ (a, a+b+d)      c = 0, a+b+d ≠ 0
///         (a+xb, 0)        c = 0, a+b+d = 0
///         (a+c+xb, 0)      c ≠ 0, b+d = 0
///         (a+c, b+d)       c ≠ 0, b+d ≠ 0
/// ```
pub fn p_squared_matching(ctx: &FieldContext, a: u32, b: u32) -> Permutation {
    let xb = ctx.mul(ctx.x(), b);
    let image = (0..ctx.pair_count() as Label)
        .map(|label| {
            let (c, d) = ctx.decode(label);
            let (c2, d2) = if c == 0 {
                let s = ctx.add(ctx.add(a, b), d);
                if s != 0 {
                    (a, s)
                } else {
                    (ctx.add(a, xb), 0)
                }
            } else {
                let s = ctx.add(b, d);
                if s == 0 {
                    (ctx.add(ctx.add(a, c), xb), 0)
                } else {
                    (ctx.add(a, c), s)
                }
            };
            ctx.encode(c2, d2)
        })
        .collect();
    Permutation::from_images(image).expect("π_(a,b) is a bijection for odd prime p")
}

/// The `p²` family, matching `(a, b)` stored at index `a·p + b`.
pub fn p_squared_factorization(ctx: &FieldContext) -> Result<Factorization> {
    ctx.ensure_p_squared_range()?;
    let p = ctx.p();
    let matchings = (0..p)
        .flat_map(|a| (0..p).map(move |b| (a, b)))
        .map(|(a, b)| p_squared_matching(ctx, a, b))
        .collect();
    Ok(Factorization {
        n: ctx.pair_count(),
        kind: FamilyKind::PSquared,
        matchings,
        context: Some(ctx.clone()),
    })
}

/// The special matching `M` meeting every factor once:
/// `a ↦ ax` for the cyclic family, `(c,d) ↦ (yc, xd)` for the `p²` family.
pub fn transversal_matching(kind: FamilyKind, ctx: &FieldContext) -> Permutation {
    match kind {
        FamilyKind::Cyclic => Permutation::from_fn(ctx.p() as usize, |a| ctx.mul(a, ctx.x()))
            .expect("multiplication by a unit is a bijection"),
        FamilyKind::PSquared => Permutation::from_fn(ctx.pair_count(), |label| {
            let (c, d) = ctx.decode(label);
            ctx.encode(ctx.mul(ctx.y(), c), ctx.mul(ctx.x(), d))
        })
        .expect("(c,d) ↦ (yc,xd) is a bijection"),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum P1fMode {
    /// Check every pair and list every failure.
    #[default]
    Full,
    /// Stop at the first failing pair.
    Fast,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailingPair {
    pub i: usize,
    pub j: usize,
    /// Sorted cycle lengths of `π_i⁻¹ ∘ π_j`.
    pub cycle_lengths: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P1fReport {
    pub ok: bool,
    pub pairs_checked: usize,
    pub failing_pairs: Vec<FailingPair>,
}

fn check_pair(f: &Factorization, inv_i: &Permutation, i: usize, j: usize) -> Option<FailingPair> {
    let prod = compose(inv_i, &f.matchings[j]).expect("same size");
    (!prod.is_full_cycle()).then(|| FailingPair {
        i,
        j,
        cycle_lengths: prod.cycle_type(),
    })
}

/// Perfect iff `π_i⁻¹ ∘ π_j` is a full cycle for every `i < j`.
pub fn validate_p1f(f: &Factorization, mode: P1fMode) -> P1fReport {
    validate_p1f_with(f, mode, Execution::default())
}

pub fn validate_p1f_with(f: &Factorization, mode: P1fMode, exec: Execution) -> P1fReport {
    let n = f.n;
    let total = n * (n - 1) / 2;
    match mode {
        P1fMode::Full => {
            let rows = exec::map_range(exec, 0..n, |i| {
                let inv = f.matchings[i].inverse();
                (i + 1..n)
                    .filter_map(|j| check_pair(f, &inv, i, j))
                    .collect::<Vec<_>>()
            });
            let failing_pairs: Vec<_> = rows.into_iter().flatten().collect();
            P1fReport {
                ok: failing_pairs.is_empty(),
                pairs_checked: total,
                failing_pairs,
            }
        }
        P1fMode::Fast => {
            // Sequential within a row, so the first failure found in row i is
            // the smallest j for that i; across rows any failure may win.
            let hit = exec::find_map_range_init(
                exec,
                0..n,
                || (),
                |_, i| {
                    let inv = f.matchings[i].inverse();
                    (i + 1..n).find_map(|j| check_pair(f, &inv, i, j))
                },
            );
            match hit {
                None => P1fReport {
                    ok: true,
                    pairs_checked: total,
                    failing_pairs: vec![],
                },
                Some(fp) => {
                    let checked = (0..fp.i).map(|i| n - 1 - i).sum::<usize>() + (fp.j - fp.i);
                    P1fReport {
                        ok: false,
                        pairs_checked: checked,
                        failing_pairs: vec![fp],
                    }
                }
            }
        }
    }
}

/// Checks only the listed pairs (spot checks for families too large to
/// enumerate exhaustively).
pub fn validate_p1f_pairs(f: &Factorization, pairs: &[(usize, usize)]) -> P1fReport {
    let failing_pairs: Vec<_> = pairs
        .iter()
        .filter(|&&(i, j)| i != j)
        .filter_map(|&(i, j)| check_pair(f, &f.matchings[i].inverse(), i, j))
        .collect();
    P1fReport {
        ok: failing_pairs.is_empty(),
        pairs_checked: pairs.len(),
        failing_pairs,
    }
}

/// A cycle of `M_A ∪ M_B` in `K_{n,n}`.
///
/// For the label cycle `(i_0 … i_{ℓ-1})` of `π_A⁻¹ ∘ π_B`, `edges` lists
/// `i_j ↦ π_A(i_j)` (even positions, from `M_A`) followed by
/// `i_j ↦ π_B(i_j)` (odd positions, from `M_B`) for each `j`. Consecutive
/// edges, including last-to-first, share an endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingCycle {
    pub labels: Vec<Label>,
    pub edges: Vec<(Label, Label)>,
}

impl AlternatingCycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// The cycles of `M_A ∪ M_B`, one per label cycle of length ≥ 2.
pub fn union_cycles(m_a: &Permutation, m_b: &Permutation) -> Result<Vec<AlternatingCycle>> {
    let prod = compose(&m_a.inverse(), m_b)?;
    Ok(prod
        .cycle_decomposition()
        .nontrivial()
        .map(|labels| AlternatingCycle {
            labels: labels.clone(),
            edges: labels
                .iter()
                .flat_map(|&i| [(i, m_a.apply(i)), (i, m_b.apply(i))])
                .collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_basics() {
        let f = cyclic_factorization(5).unwrap();
        assert_eq!(
            f.matching(1).cycle_decomposition().to_string(),
            "(0 1 2 3 4)"
        );
        assert!(validate_p1f(&f, P1fMode::Full).ok);
        assert!(cyclic_factorization(4).is_err());
        assert!(cyclic_factorization(1).is_err());
    }

    #[test]
    fn cyclic_nine_fails_at_zero_three() {
        let f = cyclic_factorization(9).unwrap();
        let report = validate_p1f(&f, P1fMode::Full);
        assert!(!report.ok);
        assert_eq!(report.pairs_checked, 36);
        let pair = report
            .failing_pairs
            .iter()
            .find(|fp| (fp.i, fp.j) == (0, 3))
            .unwrap();
        assert_eq!(pair.cycle_lengths, vec![3, 3, 3]);
        let fast = validate_p1f(&f, P1fMode::Fast);
        assert!(!fast.ok);
        assert_eq!(fast.failing_pairs.len(), 1);
    }

    #[test]
    fn p_squared_examples() {
        let ctx = FieldContext::new(5, None).unwrap();
        assert!(p_squared_matching(&ctx, 0, 0).is_identity());
        // (c,d) = (0,3), a+b+d = 5 ≡ 0 → (a + x·b, 0) = (3, 0)
        let m = p_squared_matching(&ctx, 1, 1);
        assert_eq!(m.apply(ctx.encode(0, 3)), ctx.encode(3, 0));
        let ctx3 = FieldContext::new(3, None).unwrap();
        let f = p_squared_factorization(&ctx3).unwrap();
        let report = validate_p1f(&f, P1fMode::Full);
        assert!(report.ok);
        assert_eq!(report.pairs_checked, 36);
        assert!(p_squared_factorization(&FieldContext::new(101, None).unwrap()).is_err());
    }

    #[test]
    fn transversal_examples() {
        let ctx = FieldContext::new(5, None).unwrap();
        let m = transversal_matching(FamilyKind::Cyclic, &ctx);
        assert_eq!(m.cycle_decomposition().to_string(), "(0)(1 2 4 3)");
        let m2 = transversal_matching(FamilyKind::PSquared, &ctx);
        assert_eq!(m2.apply(ctx.encode(3, 1)), ctx.encode(4, 2));
        assert_eq!(m2.apply(0), 0);
    }

    #[test]
    fn union_cycles_examples() {
        let a = Permutation::from_cycles(5, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        let b = Permutation::from_cycles(5, &[vec![0, 1]]).unwrap();
        let cycles = union_cycles(&a, &b).unwrap();
        assert_eq!(cycles.len(), 2);
        assert_eq!(cycles[0].labels, vec![1, 2]);
        assert_eq!(cycles[1].labels, vec![3, 4]);
        assert!(cycles.iter().all(|c| c.len() == 4));
        // Edge sets match the example: {1↦2, 1↦0, 2↦0, 2↦2}
        let mut e0 = cycles[0].edges.clone();
        e0.sort();
        assert_eq!(e0, vec![(1, 0), (1, 2), (2, 0), (2, 2)]);

        assert!(union_cycles(&a, &a).unwrap().is_empty());

        let f = cyclic_factorization(5).unwrap();
        let ham = union_cycles(f.matching(1), f.matching(2)).unwrap();
        assert_eq!(ham.len(), 1);
        assert_eq!(ham[0].len(), 10);
    }

    #[test]
    fn rejects_overlapping_matchings() {
        let id = Permutation::identity(3);
        let err = Factorization::new(FamilyKind::Cyclic, vec![id.clone(), id.clone(), id], None);
        assert!(err.is_err());
        let short = Factorization::new(FamilyKind::Cyclic, vec![Permutation::identity(3)], None);
        assert!(short.is_err());
    }

    #[test]
    fn json_repr_round_trip() {
        let ctx = FieldContext::new(3, None).unwrap();
        let f = p_squared_factorization(&ctx).unwrap();
        let repr = f.to_json_repr();
        assert_eq!((repr.p, repr.x), (Some(3), Some(2)));
        let back = Factorization::from_json_repr(repr.clone()).unwrap();
        assert_eq!(back.to_json_repr(), repr);
    }
}
