//! Machine checks for the cycle structure of `π⁻¹ ∘ π_{(a,b)}` in the `p²`
//! construction, where `π : (c,d) ↦ (yc, xd)` is the transversal matching.
//!
//! The closed-form claims (common edge, three-factor split, conjugation by
//! `σ : (c,d) ↦ (yc, yd)`, the per-case cycle shapes and the count `t`) are
//! the expected values; the permutation engine computes the actual ones.

use serde::Serialize;

use crate::coloring::{p_squared_partition, LabelPartition};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::factorization::{p_squared_matching, transversal_matching, FamilyKind};
use crate::field::FieldContext;
use crate::perm::{compose, conjugate, CycleDecomposition, Label, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    ZeroZero,
    ZeroStar,
    StarZero,
    StarStar,
}

impl CaseKind {
    pub fn of(a: u32, b: u32) -> Self {
        match (a == 0, b == 0) {
            (true, true) => CaseKind::ZeroZero,
            (true, false) => CaseKind::ZeroStar,
            (false, true) => CaseKind::StarZero,
            (false, false) => CaseKind::StarStar,
        }
    }
}

/// The unique edge shared by `M` and `M_{(a,b)}`, as `(c,d) ↦ (c',d')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommonEdge {
    pub from: (u32, u32),
    pub to: (u32, u32),
}

/// `(a y', b x') ↦ (−a x', −b y')`.
pub fn common_edge(ctx: &FieldContext, a: u32, b: u32) -> CommonEdge {
    CommonEdge {
        from: (ctx.mul(a, ctx.y_prime()), ctx.mul(b, ctx.x_prime())),
        to: (
            ctx.neg(ctx.mul(a, ctx.x_prime())),
            ctx.neg(ctx.mul(b, ctx.y_prime())),
        ),
    }
}

fn perm_on_pairs(ctx: &FieldContext, f: impl Fn(u32, u32) -> (u32, u32)) -> Permutation {
    Permutation::from_fn(ctx.pair_count(), |label| {
        let (c, d) = ctx.decode(label);
        let (c2, d2) = f(c, d);
        ctx.encode(c2, d2)
    })
    .expect("map on Z_p × Z_p is a bijection")
}

/// `π⁻¹ ∘ π_{(a,b)}` (apply `π_{(a,b)}` first).
pub fn factor_product(ctx: &FieldContext, a: u32, b: u32) -> Permutation {
    let m_inv = transversal_matching(FamilyKind::PSquared, ctx).inverse();
    compose(&m_inv, &p_squared_matching(ctx, a, b)).expect("same size")
}

/// The three maps whose product `p2 ∘ p1 ∘ p0` equals `π⁻¹ ∘ π_{(a,b)}`:
///
/// * `p0 (c,d) = (x(a+c), y(b+d))`
/// * `p1` adds `ya` to the second coordinate on the column `c = xa`
/// * `p2` adds `x²b` to the first coordinate on the row `d = 0`
pub fn decompose_factor_perm(
    ctx: &FieldContext,
    a: u32,
    b: u32,
) -> (Permutation, Permutation, Permutation) {
    let (x, y) = (ctx.x(), ctx.y());
    let p0 = perm_on_pairs(ctx, |c, d| {
        (ctx.mul(x, ctx.add(a, c)), ctx.mul(y, ctx.add(b, d)))
    });
    let xa = ctx.mul(x, a);
    let ya = ctx.mul(y, a);
    let p1 = perm_on_pairs(
        ctx,
        |c, d| if c == xa { (c, ctx.add(ya, d)) } else { (c, d) },
    );
    let x2b = ctx.mul(ctx.mul(x, x), b);
    let p2 = perm_on_pairs(
        ctx,
        |c, d| if d == 0 { (ctx.add(c, x2b), d) } else { (c, d) },
    );
    (p0, p1, p2)
}

/// Whether `p2 ∘ p1 ∘ p0 = π⁻¹ ∘ π_{(a,b)}` as permutations.
pub fn decomposition_holds(ctx: &FieldContext, a: u32, b: u32) -> bool {
    let (p0, p1, p2) = decompose_factor_perm(ctx, a, b);
    let prod = compose(&p2, &compose(&p1, &p0).expect("same size")).expect("same size");
    prod == factor_product(ctx, a, b)
}

/// `σ : (c,d) ↦ (yc, yd)`.
pub fn sigma(ctx: &FieldContext) -> Permutation {
    perm_on_pairs(ctx, |c, d| (ctx.mul(ctx.y(), c), ctx.mul(ctx.y(), d)))
}

/// `π⁻¹ ∘ π_{(xa,xb)} = σ⁻¹ ∘ (π⁻¹ ∘ π_{(a,b)}) ∘ σ`.
pub fn conjugation_check(ctx: &FieldContext, a: u32, b: u32) -> bool {
    let lhs = factor_product(ctx, ctx.mul(ctx.x(), a), ctx.mul(ctx.x(), b));
    let rhs = conjugate(&factor_product(ctx, a, b), &sigma(ctx)).expect("same size");
    lhs == rhs
}

/// `t = (x b'² − 1)⁻¹` with `b' = b/a`, for `a, b ≠ 0`.
pub fn t_value(ctx: &FieldContext, a: u32, b: u32) -> Result<u32> {
    let b_norm = ctx.mul(b, ctx.inv(a)?);
    ctx.inv(ctx.sub(ctx.mul(ctx.x(), ctx.mul(b_norm, b_norm)), 1))
}

/// Both identities `t·x²b − (t+1)·x/b = 0` and `(p−t)·x²b − (p−t−1)·x/b = 0`
/// for normalized `b`, and `t` the least positive solution of the first.
pub fn t_identities_hold(ctx: &FieldContext, b_norm: u32, t: u32) -> bool {
    let p = ctx.p();
    let x2b = ctx.mul(ctx.mul(ctx.x(), ctx.x()), b_norm);
    let x_over_b = match ctx.inv(b_norm) {
        Ok(inv) => ctx.mul(ctx.x(), inv),
        Err(_) => return false,
    };
    let first = |s: u32| ctx.sub(ctx.mul(s % p, x2b), ctx.mul((s + 1) % p, x_over_b)) == 0;
    let second = ctx.sub(ctx.mul(p - t, x2b), ctx.mul((p - t - 1) % p, x_over_b)) == 0;
    first(t) && second && (1..t).all(|s| !first(s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleSummary {
    pub len: usize,
    pub class2: usize,
}

/// Cycle structure of `π⁻¹ ∘ π_{(a,b)}` after all checks for its case passed.
/// `cycles` lists cycles of length ≥ 2 in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub a: u32,
    pub b: u32,
    #[serde(rename = "case")]
    pub case_kind: CaseKind,
    pub fixed: [u32; 2],
    pub cycles: Vec<CycleSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    /// Every cycle of length ≥ 2 has labels from both classes.
    #[serde(skip)]
    pub mixed: bool,
}

impl CaseReport {
    pub fn fixed_label(&self, ctx: &FieldContext) -> Label {
        ctx.encode(self.fixed[0], self.fixed[1])
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cycles.iter().map(|c| c.len).collect();
        v.sort_unstable();
        v
    }
}

/// Cycle notation over `(c,d)` labels, class-2 labels marked with `*`.
pub fn render_cycles(ctx: &FieldContext, part: &LabelPartition, d: &CycleDecomposition) -> String {
    d.notation_with(true, |l| {
        let (c, dd) = ctx.decode(l);
        let mark = if part.is_class2(l) { "*" } else { "" };
        format!("({c},{dd}){mark}")
    })
}

struct Checker<'a> {
    ctx: &'a FieldContext,
    part: &'a LabelPartition,
    decomposition: &'a CycleDecomposition,
    a: u32,
    b: u32,
}

impl Checker<'_> {
    fn ensure(&self, ok: bool, what: impl FnOnce() -> String) -> Result<()> {
        if ok {
            return Ok(());
        }
        Err(Error::Structure {
            a: self.a,
            b: self.b,
            detail: format!(
                "{}; cycles: {}",
                what(),
                render_cycles(self.ctx, self.part, self.decomposition)
            ),
        })
    }

    fn cycle_index_of(&self, label: Label) -> Option<usize> {
        self.decomposition
            .nontrivial()
            .position(|c| c.contains(&label))
    }

    fn class2_in(&self, cycle: &[Label]) -> usize {
        cycle.iter().filter(|&&l| self.part.is_class2(l)).count()
    }

    /// The short cycle is exactly `expected` and holds two class-2 labels.
    fn short_cycle(&self, expected: impl Iterator<Item = Label>) -> Result<()> {
        let p = self.ctx.p() as usize;
        let mut expected: Vec<Label> = expected.collect();
        expected.sort_unstable();
        let short = self.decomposition.nontrivial().find(|c| c.len() == p - 1);
        let mut actual = short.cloned().unwrap_or_default();
        actual.sort_unstable();
        self.ensure(actual == expected, || {
            "short cycle has unexpected labels".into()
        })?;
        let k = self.class2_in(&actual);
        self.ensure(k == 2, || {
            format!("short cycle holds {k} class-2 labels, expected 2")
        })
    }
}

/// Checks and summarizes the cycle structure of `π⁻¹ ∘ π_{(a,b)}`.
///
/// Structure claims are checked for every odd prime. The requirement that
/// every cycle mixes both label classes is enforced only for `p ≥ 5`; at
/// `p = 3` it is recorded in `mixed` and fails for some cases.
pub fn case_report(ctx: &FieldContext, a: u32, b: u32) -> Result<CaseReport> {
    let p = ctx.p();
    if a >= p || b >= p {
        return Err(Error::InvalidArgument(format!(
            "({a},{b}) is not in Z_{p} × Z_{p}"
        )));
    }
    ctx.ensure_p_squared_range()?;
    let part = p_squared_partition(ctx)?;
    let prod = factor_product(ctx, a, b);
    let decomposition = prod.cycle_decomposition();
    let chk = Checker {
        ctx,
        part: &part,
        decomposition: &decomposition,
        a,
        b,
    };

    let edge = common_edge(ctx, a, b);
    let fixed = prod.fixed_points();
    chk.ensure(fixed.len() == 1, || {
        format!("{} fixed labels, expected 1", fixed.len())
    })?;
    chk.ensure(ctx.decode(fixed[0]) == edge.from, || {
        format!(
            "fixed label {:?} differs from common edge source {:?}",
            ctx.decode(fixed[0]),
            edge.from
        )
    })?;
    let to = p_squared_matching(ctx, a, b).apply(fixed[0]);
    chk.ensure(ctx.decode(to) == edge.to, || {
        format!(
            "common edge ends at {:?}, expected {:?}",
            ctx.decode(to),
            edge.to
        )
    })?;

    let cycles: Vec<CycleSummary> = decomposition
        .nontrivial()
        .map(|c| CycleSummary {
            len: c.len(),
            class2: chk.class2_in(c),
        })
        .collect();
    let mut lengths: Vec<usize> = cycles.iter().map(|c| c.len).collect();
    lengths.sort_unstable();
    let (pu, n) = (p as usize, ctx.pair_count());
    chk.ensure(lengths.iter().sum::<usize>() == n - 1, || {
        "cycles do not cover p² − 1 labels".into()
    })?;

    let case_kind = CaseKind::of(a, b);
    let mut t = None;
    match case_kind {
        CaseKind::ZeroZero => {
            chk.ensure(lengths == vec![pu - 1; pu + 1], || {
                format!("lengths {lengths:?}, expected p+1 cycles of length p−1")
            })?;
            let with_01 = chk.cycle_index_of(ctx.encode(0, 1));
            let with_10 = chk.cycle_index_of(ctx.encode(1, 0));
            for (k, summary) in cycles.iter().enumerate() {
                let expected = if Some(k) == with_01 || Some(k) == with_10 {
                    1
                } else {
                    2
                };
                chk.ensure(summary.class2 == expected, || {
                    format!(
                        "cycle {k} holds {} class-2 labels, expected {expected}",
                        summary.class2
                    )
                })?;
            }
        }
        CaseKind::ZeroStar | CaseKind::StarZero => {
            chk.ensure(lengths == vec![pu - 1, pu * (pu - 1)], || {
                format!("lengths {lengths:?}, expected [p−1, p(p−1)]")
            })?;
            if case_kind == CaseKind::ZeroStar {
                let d = ctx.mul(b, ctx.x_prime());
                chk.short_cycle((1..p).map(|c| ctx.encode(c, d)))?;
            } else {
                let c = ctx.mul(a, ctx.y_prime());
                chk.short_cycle((1..p).map(|d| ctx.encode(c, d)))?;
            }
        }
        CaseKind::StarStar => {
            chk.ensure(lengths.len() == 2, || {
                format!("lengths {lengths:?}, expected two cycles")
            })?;
            let b_norm = ctx.mul(b, ctx.inv(a)?);
            let tv = t_value(ctx, a, b)?;
            chk.ensure(t_identities_hold(ctx, b_norm, tv), || {
                format!("t = {tv} fails its defining identities")
            })?;
            // F₁ holds (a(y' + x/b'), 0); F₂ holds (a y', 0).
            let ay = ctx.mul(a, ctx.y_prime());
            let x_over_b = ctx.mul(ctx.x(), ctx.inv(b_norm)?);
            let f1 =
                chk.cycle_index_of(ctx.encode(ctx.mul(a, ctx.add(ctx.y_prime(), x_over_b)), 0));
            let f2 = chk.cycle_index_of(ctx.encode(ay, 0));
            chk.ensure(f1.is_some() && f2.is_some() && f1 != f2, || {
                "F₁ and F₂ anchors not in distinct cycles".into()
            })?;
            let (f1, f2) = (f1.unwrap(), f2.unwrap());
            let nontrivial: Vec<&Vec<Label>> = decomposition.nontrivial().collect();
            let row_zero =
                |cycle: &Vec<Label>| cycle.iter().filter(|&&l| ctx.decode(l).1 == 0).count() as u32;
            let (in_f1, in_f2) = (row_zero(nontrivial[f1]), row_zero(nontrivial[f2]));
            chk.ensure(in_f1 == tv && in_f2 == p - tv, || {
                format!(
                    "F₁/F₂ hold {in_f1}/{in_f2} labels (c,0), expected {tv}/{}",
                    p - tv
                )
            })?;
            let bx = ctx.mul(b, ctx.x_prime());
            let f1_ok = (0..p)
                .filter(|&c| c != ay)
                .all(|c| nontrivial[f1].contains(&ctx.encode(c, bx)));
            let f2_ok = (0..p)
                .filter(|&d| d != bx)
                .all(|d| nontrivial[f2].contains(&ctx.encode(ay, d)));
            chk.ensure(f1_ok && f2_ok, || {
                "F₁ ⊇ row d = bx' or F₂ ⊇ column c = ay' fails".into()
            })?;
            t = Some(tv);
        }
    }

    let mixed = cycles.iter().all(|c| c.class2 >= 1 && c.class2 < c.len);
    if p >= 5 {
        chk.ensure(mixed, || "a cycle misses one of the label classes".into())?;
    }
    Ok(CaseReport {
        a,
        b,
        case_kind,
        fixed: [edge.from.0, edge.from.1],
        cycles,
        t,
        mixed,
    })
}

/// The representative `(a', b')` in `{(0,1), (1,b')}` and the scalar `k`
/// with `(a, b) = k·(a', b')`; `None` for `(0,0)`.
pub fn orbit_representative(ctx: &FieldContext, a: u32, b: u32) -> Option<((u32, u32), u32)> {
    match (a, b) {
        (0, 0) => None,
        (0, b) => Some(((0, 1), b)),
        (a, b) => Some(((1, ctx.mul(b, ctx.inv(a).ok()?)), a)),
    }
}

/// The cycles of `π⁻¹ ∘ π_{(a,b)}` are those of its orbit representative
/// with every label `(c,d)` replaced by `(kc, kd)`.
pub fn symbol_transformation_holds(ctx: &FieldContext, a: u32, b: u32) -> bool {
    let Some(((ra, rb), k)) = orbit_representative(ctx, a, b) else {
        return true;
    };
    let rep = factor_product(ctx, ra, rb).cycle_decomposition();
    let scaled: Vec<Vec<Label>> = rep
        .cycles()
        .iter()
        .map(|cycle| {
            cycle
                .iter()
                .map(|&l| {
                    let (c, d) = ctx.decode(l);
                    ctx.encode(ctx.mul(k, c), ctx.mul(k, d))
                })
                .collect()
        })
        .collect();
    match CycleDecomposition::from_cycles(ctx.pair_count(), scaled) {
        Ok(expected) => expected == factor_product(ctx, a, b).cycle_decomposition(),
        Err(_) => false,
    }
}

/// All `p²` case reports in label order, each also checked against the
/// symbol transformation of its orbit representative.
pub fn survey(ctx: &FieldContext) -> Result<Vec<CaseReport>> {
    survey_with(ctx, Execution::default())
}

pub fn survey_with(ctx: &FieldContext, exec: Execution) -> Result<Vec<CaseReport>> {
    ctx.ensure_p_squared_range()?;
    exec::map_range(exec, 0..ctx.pair_count(), |label| {
        let (a, b) = ctx.decode(label as Label);
        let report = case_report(ctx, a, b)?;
        if !symbol_transformation_holds(ctx, a, b) {
            return Err(Error::Structure {
                a,
                b,
                detail: "not the scaled image of its orbit representative".into(),
            });
        }
        Ok(report)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx5() -> FieldContext {
        FieldContext::new(5, None).unwrap()
    }

    #[test]
    fn common_edge_examples() {
        let ctx = ctx5();
        assert_eq!(
            common_edge(&ctx, 0, 0),
            CommonEdge {
                from: (0, 0),
                to: (0, 0)
            }
        );
        // y' = 3, x' = 1: (3, 1) ↦ (−1, −3) = (4, 2)
        let e = common_edge(&ctx, 1, 1);
        assert_eq!(
            e,
            CommonEdge {
                from: (3, 1),
                to: (4, 2)
            }
        );
        let m = transversal_matching(FamilyKind::PSquared, &ctx);
        assert_eq!(m.apply(ctx.encode(3, 1)), ctx.encode(4, 2));
    }

    #[test]
    fn decomposition_degenerate_cases() {
        let ctx = ctx5();
        let (p0, p1, p2) = decompose_factor_perm(&ctx, 0, 0);
        assert!(p1.is_identity() && p2.is_identity());
        assert_eq!(
            p0,
            transversal_matching(FamilyKind::PSquared, &ctx).inverse()
        );
        let (_, p1, _) = decompose_factor_perm(&ctx, 0, 1);
        assert!(p1.is_identity());
        assert!(decomposition_holds(&ctx, 1, 2));
    }

    #[test]
    fn conjugation_at_origin() {
        let ctx = ctx5();
        assert!(conjugation_check(&ctx, 0, 0));
        assert_eq!(
            factor_product(&ctx, 0, 0),
            transversal_matching(FamilyKind::PSquared, &ctx).inverse()
        );
    }

    #[test]
    fn t_examples() {
        let ctx = ctx5();
        assert_eq!(t_value(&ctx, 1, 1).unwrap(), 1);
        assert_eq!(t_value(&ctx, 1, 2).unwrap(), 3);
        assert!(t_identities_hold(&ctx, 2, 3));
        assert!(!t_identities_hold(&ctx, 2, 2));
    }

    #[test]
    fn case_zero_zero_p5() {
        let ctx = ctx5();
        let r = case_report(&ctx, 0, 0).unwrap();
        assert_eq!(r.case_kind, CaseKind::ZeroZero);
        assert_eq!(r.fixed, [0, 0]);
        assert_eq!(r.cycle_lengths(), vec![4; 6]);
        // canonical order: the cycle through (0,1) (label 1) comes first
        assert_eq!(r.cycles[0].class2, 1);
    }

    #[test]
    fn case_star_star_p5() {
        let ctx = ctx5();
        let r = case_report(&ctx, 1, 1).unwrap();
        assert_eq!(r.t, Some(1));
        assert_eq!(r.cycles.iter().map(|c| c.len).sum::<usize>(), 24);
        let r = case_report(&ctx, 1, 2).unwrap();
        assert_eq!(r.t, Some(3));
    }

    #[test]
    fn report_json_shape() {
        let ctx = ctx5();
        let json = serde_json::to_string(&case_report(&ctx, 1, 2).unwrap()).unwrap();
        assert!(
            json.starts_with(r#"{"a":1,"b":2,"case":"star_star","fixed":[3,2],"cycles":[{"len":"#)
        );
        assert!(json.ends_with(r#","t":3}"#));
        let json = serde_json::to_string(&case_report(&ctx, 0, 2).unwrap()).unwrap();
        assert!(!json.contains("\"t\""));
    }

    #[test]
    fn out_of_range_pair() {
        assert!(case_report(&ctx5(), 5, 0).is_err());
    }
}
