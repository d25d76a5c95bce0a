//! Edge-colorings of `K_{n,n}` built from a 1-factorization and a
//! transversal matching `M` that meets each factor `M_i` in one edge.
//!
//! Factor `i` minus its common edge gets color `i`. The edges of `M` are
//! split by a partition of the labels: class 1 gets color `n`, class 2
//! color `n + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{
    cyclic_factorization, p_squared_factorization, transversal_matching, Factorization, FamilyKind,
};
use crate::field::FieldContext;
use crate::perm::{compose, Label, Permutation};

/// A total edge-coloring of `K_{n,n}`; edge `u ↦ v` is stored at `u·n + v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    n: usize,
    num_colors: u32,
    colors: Vec<u32>,
}

impl EdgeColoring {
    pub fn new(n: usize, num_colors: u32, colors: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidColoring("empty graph".into()));
        }
        if colors.len() != n * n {
            return Err(Error::InvalidColoring(format!(
                "{} colors for {} edges",
                colors.len(),
                n * n
            )));
        }
        if let Some(pos) = colors.iter().position(|&c| c >= num_colors) {
            return Err(Error::InvalidColoring(format!(
                "edge {} ↦ {} has color {} ≥ {num_colors}",
                pos / n,
                pos % n,
                colors[pos]
            )));
        }
        Ok(EdgeColoring {
            n,
            num_colors,
            colors,
        })
    }

    /// Builds a coloring from `[u, v, color]` triples; every edge exactly once.
    pub fn from_edges(
        n: usize,
        num_colors: u32,
        edges: impl IntoIterator<Item = [u32; 3]>,
    ) -> Result<Self> {
        const UNSET: u32 = u32::MAX;
        let mut colors = vec![UNSET; n * n];
        for [u, v, c] in edges {
            let (u, v) = (u as usize, v as usize);
            if u >= n || v >= n {
                return Err(Error::InvalidColoring(format!(
                    "edge {u} ↦ {v} outside K_{{{n},{n}}}"
                )));
            }
            if colors[u * n + v] != UNSET {
                return Err(Error::InvalidColoring(format!(
                    "edge {u} ↦ {v} colored twice"
                )));
            }
            colors[u * n + v] = c;
        }
        if let Some(pos) = colors.iter().position(|&c| c == UNSET) {
            return Err(Error::InvalidColoring(format!(
                "edge {} ↦ {} uncolored",
                pos / n,
                pos % n
            )));
        }
        Self::new(n, num_colors, colors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    #[inline]
    pub fn color(&self, u: Label, v: Label) -> u32 {
        self.colors[u as usize * self.n + v as usize]
    }

    pub fn raw(&self) -> &[u32] {
        &self.colors
    }

    /// `[u, v, color]` in `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = [u32; 3]> + '_ {
        let n = self.n;
        self.colors
            .iter()
            .enumerate()
            .map(move |(k, &c)| [(k / n) as u32, (k % n) as u32, c])
    }

    /// Edge count per color id.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.num_colors as usize];
        for &c in &self.colors {
            h[c as usize] += 1;
        }
        h
    }

    pub fn colors_used(&self) -> usize {
        self.histogram().iter().filter(|&&k| k > 0).count()
    }
}

/// Serialized coloring. Field order is fixed and edges are sorted by `(u, v)`,
/// so equal colorings serialize to identical bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub num_colors: u32,
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<u32>,
    pub edges: Vec<[u32; 3]>,
}

impl Certificate {
    pub fn new(coloring: &EdgeColoring, construction: &str, ctx: Option<&FieldContext>) -> Self {
        Certificate {
            n: coloring.n,
            num_colors: coloring.num_colors,
            construction: construction.to_string(),
            p: ctx.map(FieldContext::p),
            x: ctx.map(FieldContext::x),
            edges: coloring.edges().collect(),
        }
    }

    pub fn to_coloring(&self) -> Result<EdgeColoring> {
        EdgeColoring::from_edges(self.n, self.num_colors, self.edges.iter().copied())
    }
}

/// Split of the label set into class 1 (`I⁽¹⁾`) and class 2 (`I⁽²⁾`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelPartition {
    class_of: Vec<u8>,
}

impl LabelPartition {
    pub fn new(class_of: Vec<u8>) -> Result<Self> {
        if let Some(bad) = class_of.iter().find(|&&c| c != 1 && c != 2) {
            return Err(Error::InvalidPartition(format!(
                "class {bad} is not 1 or 2"
            )));
        }
        Ok(LabelPartition { class_of })
    }

    /// Class 2 is exactly `class2`; everything else is class 1.
    pub fn from_class2(n: usize, class2: impl IntoIterator<Item = Label>) -> Result<Self> {
        let mut class_of = vec![1u8; n];
        for l in class2 {
            let slot = class_of
                .get_mut(l as usize)
                .ok_or_else(|| Error::InvalidPartition(format!("label {l} outside 0..{n}")))?;
            *slot = 2;
        }
        Self::new(class_of)
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    #[inline]
    pub fn class_of(&self, label: Label) -> u8 {
        self.class_of[label as usize]
    }

    #[inline]
    pub fn is_class2(&self, label: Label) -> bool {
        self.class_of[label as usize] == 2
    }

    pub fn class2_size(&self) -> usize {
        self.class_of.iter().filter(|&&c| c == 2).count()
    }

    /// Both classes must be non-empty for a usable partition.
    pub fn validate(&self) -> Result<()> {
        let k = self.class2_size();
        if k == 0 || k == self.len() {
            return Err(Error::InvalidPartition(
                "both classes must be non-empty".into(),
            ));
        }
        Ok(())
    }
}

/// `I⁽²⁾ = {0, 1}` on `Z_p`.
pub fn kpp_partition(p: usize) -> Result<LabelPartition> {
    LabelPartition::from_class2(p, [0, 1])
}

/// `I⁽²⁾ = {(0,1), (1,0)} ∪ {(z,z), (z,zx) : z ≠ 0}`, of size `2p`.
pub fn p_squared_partition(ctx: &FieldContext) -> Result<LabelPartition> {
    let mut class2 = vec![ctx.encode(0, 1), ctx.encode(1, 0)];
    for z in 1..ctx.p() {
        class2.push(ctx.encode(z, z));
        class2.push(ctx.encode(z, ctx.mul(z, ctx.x())));
    }
    LabelPartition::from_class2(ctx.pair_count(), class2)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FrameOptions {
    /// Leave this factor whole: its common edge with `M` keeps the factor's
    /// color instead of a transversal color.
    pub keep_full_factor: Option<usize>,
}

/// Factors `i` for which `|M ∩ M_i| ≠ 1`.
pub fn transversal_violations(f: &Factorization, m: &Permutation) -> Vec<usize> {
    f.matchings()
        .iter()
        .enumerate()
        .filter(|(_, pi)| {
            (0..f.n() as Label)
                .filter(|&u| pi.apply(u) == m.apply(u))
                .count()
                != 1
        })
        .map(|(i, _)| i)
        .collect()
}

fn check_inputs(f: &Factorization, m: &Permutation, part: &LabelPartition) -> Result<()> {
    if m.len() != f.n() {
        return Err(Error::SizeMismatch {
            left: f.n(),
            right: m.len(),
        });
    }
    if part.len() != f.n() {
        return Err(Error::SizeMismatch {
            left: f.n(),
            right: part.len(),
        });
    }
    let offending = transversal_violations(f, m);
    if !offending.is_empty() {
        return Err(Error::TransversalCondition { offending });
    }
    Ok(())
}

/// The `n + 2` coloring: `M_i ∖ M` gets color `i`, the edge `v ↦ m(v)` gets
/// `n` or `n + 1` by the class of `v`.
pub fn frame_coloring(
    f: &Factorization,
    m: &Permutation,
    part: &LabelPartition,
    opts: FrameOptions,
) -> Result<EdgeColoring> {
    check_inputs(f, m, part)?;
    part.validate()?;
    let n = f.n();
    if let Some(k) = opts.keep_full_factor {
        if k >= n {
            return Err(Error::InvalidArgument(format!("factor {k} out of range")));
        }
    }
    let edges = f.matchings().iter().enumerate().flat_map(|(i, pi)| {
        (0..n as Label).map(move |u| {
            let v = pi.apply(u);
            let color = if v == m.apply(u) && opts.keep_full_factor != Some(i) {
                n as u32 + u32::from(part.is_class2(u))
            } else {
                i as u32
            };
            [u, v, color]
        })
    });
    EdgeColoring::from_edges(n, n as u32 + 2, edges)
}

/// `K_{p,p}`: cyclic family, `M : a ↦ ax`, `I⁽²⁾ = {0, 1}`; `p + 2` colors.
///
/// At `p = 3` the cycle `(0 1)` of `π⁻¹∘π_2` lies wholly in `{0, 1}`, so
/// that partition leaves a bichromatic 4-cycle. There the coloring keeps
/// `M_0` whole and puts only `1` in class 2, which is acyclic for every odd
/// prime.
pub fn color_kpp(ctx: &FieldContext) -> Result<EdgeColoring> {
    let f = cyclic_factorization(ctx.p() as usize)?;
    let m = transversal_matching(FamilyKind::Cyclic, ctx);
    if ctx.p() == 3 {
        let part = LabelPartition::from_class2(f.n(), [1])?;
        return frame_coloring(
            &f,
            &m,
            &part,
            FrameOptions {
                keep_full_factor: Some(0),
            },
        );
    }
    frame_coloring(&f, &m, &kpp_partition(f.n())?, FrameOptions::default())
}

/// `K_{p²,p²}`: `p²` family, `M : (c,d) ↦ (yc, xd)`, the `2p`-element
/// class 2; `p² + 2` colors. `p = 3` needs `allow_p3` and does not yield an
/// acyclic coloring.
pub fn color_kp2(ctx: &FieldContext, allow_p3: bool) -> Result<EdgeColoring> {
    if ctx.p() < 5 && !allow_p3 {
        return Err(Error::PrimeTooSmall);
    }
    let f = p_squared_factorization(ctx)?;
    let m = transversal_matching(FamilyKind::PSquared, ctx);
    frame_coloring(&f, &m, &p_squared_partition(ctx)?, FrameOptions::default())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleMix {
    pub len: usize,
    pub class1: usize,
    pub class2: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorMix {
    pub factor: usize,
    pub ok: bool,
    pub cycles: Vec<CycleMix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub ok: bool,
    pub factors: Vec<FactorMix>,
}

/// For each factor, whether every cycle of length ≥ 2 of `m⁻¹ ∘ π_i`
/// contains labels from both classes.
pub fn check_partition_condition(
    f: &Factorization,
    m: &Permutation,
    part: &LabelPartition,
) -> Result<PartitionReport> {
    check_inputs(f, m, part)?;
    let m_inv = m.inverse();
    let factors: Vec<FactorMix> = f
        .matchings()
        .iter()
        .enumerate()
        .map(|(i, pi)| {
            let prod = compose(&m_inv, pi).expect("sizes checked");
            let cycles: Vec<CycleMix> = prod
                .cycle_decomposition()
                .nontrivial()
                .map(|c| {
                    let class2 = c.iter().filter(|&&l| part.is_class2(l)).count();
                    CycleMix {
                        len: c.len(),
                        class1: c.len() - class2,
                        class2,
                    }
                })
                .collect();
            let ok = cycles.iter().all(|c| c.class1 > 0 && c.class2 > 0);
            FactorMix {
                factor: i,
                ok,
                cycles,
            }
        })
        .collect();
    Ok(PartitionReport {
        ok: factors.iter().all(|f| f.ok),
        factors,
    })
}

/// Restriction to the vertices not dropped; surviving labels are renumbered
/// in increasing order on each side. The color palette is kept as is.
pub fn derive_subcoloring(
    c: &EdgeColoring,
    drop_top: &[Label],
    drop_bottom: &[Label],
) -> Result<EdgeColoring> {
    let n = c.n();
    let keep = |drop: &[Label]| -> Result<Vec<Label>> {
        let mut dropped = vec![false; n];
        for &l in drop {
            let slot = dropped
                .get_mut(l as usize)
                .ok_or_else(|| Error::InvalidArgument(format!("label {l} outside 0..{n}")))?;
            if std::mem::replace(slot, true) {
                return Err(Error::InvalidArgument(format!("label {l} dropped twice")));
            }
        }
        Ok((0..n as Label).filter(|&l| !dropped[l as usize]).collect())
    };
    let tops = keep(drop_top)?;
    let bottoms = keep(drop_bottom)?;
    if tops.len() != bottoms.len() {
        return Err(Error::InvalidArgument(format!(
            "unbalanced deletion leaves {} top and {} bottom vertices",
            tops.len(),
            bottoms.len()
        )));
    }
    if tops.is_empty() {
        return Err(Error::InvalidArgument("every vertex dropped".into()));
    }
    let colors = tops
        .iter()
        .flat_map(|&u| bottoms.iter().map(move |&v| c.color(u, v)))
        .collect();
    EdgeColoring::new(tops.len(), c.num_colors(), colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::p_squared_factorization;

    fn k55() -> EdgeColoring {
        color_kpp(&FieldContext::new(5, None).unwrap()).unwrap()
    }

    #[test]
    fn kpp_frame_example() {
        let c = k55();
        assert_eq!(c.num_colors(), 7);
        // M = {a ↦ 2a}; class 2 = {0, 1}
        assert_eq!(c.color(0, 0), 6);
        assert_eq!(c.color(1, 2), 6);
        assert_eq!(c.color(2, 4), 5);
        assert_eq!(c.color(3, 1), 5);
        // 0 ↦ 3 is in M_3 (π_3(0) = 3) and not in M
        assert_eq!(c.color(0, 3), 3);
        let h = c.histogram();
        assert_eq!(&h[..5], &[4, 4, 4, 4, 4]);
        assert_eq!((h[5], h[6]), (3, 2));
    }

    #[test]
    fn histogram_counts_kp2() {
        let ctx = FieldContext::new(5, None).unwrap();
        let c = color_kp2(&ctx, false).unwrap();
        assert_eq!((c.n(), c.num_colors()), (25, 27));
        let h = c.histogram();
        assert!(h[..25].iter().all(|&k| k == 24));
        assert_eq!((h[25], h[26]), (25 - 10, 10));
        assert_eq!(h.iter().sum::<usize>(), 625);
    }

    #[test]
    fn kp2_rejects_p3_without_override() {
        let ctx = FieldContext::new(3, None).unwrap();
        assert!(matches!(color_kp2(&ctx, false), Err(Error::PrimeTooSmall)));
        assert_eq!(color_kp2(&ctx, true).unwrap().num_colors(), 11);
    }

    #[test]
    fn partition_sizes() {
        for p in [3, 5, 7, 11] {
            let ctx = FieldContext::new(p, None).unwrap();
            assert_eq!(
                p_squared_partition(&ctx).unwrap().class2_size(),
                2 * p as usize
            );
        }
        assert!(LabelPartition::new(vec![1, 3]).is_err());
        assert!(LabelPartition::from_class2(3, [0, 1, 2])
            .unwrap()
            .validate()
            .is_err());
        assert!(LabelPartition::from_class2(3, [7]).is_err());
    }

    #[test]
    fn transversal_condition_is_checked() {
        let f = cyclic_factorization(5).unwrap();
        // The identity meets M_0 in five edges and every other factor in none.
        let err = frame_coloring(
            &f,
            &Permutation::identity(5),
            &kpp_partition(5).unwrap(),
            FrameOptions::default(),
        )
        .unwrap_err();
        match err {
            Error::TransversalCondition { offending } => assert_eq!(offending, vec![0, 1, 2, 3, 4]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn keep_full_factor_variant() {
        let ctx = FieldContext::new(5, None).unwrap();
        let f = cyclic_factorization(5).unwrap();
        let m = transversal_matching(FamilyKind::Cyclic, &ctx);
        let part = LabelPartition::from_class2(5, [1]).unwrap();
        let c = frame_coloring(
            &f,
            &m,
            &part,
            FrameOptions {
                keep_full_factor: Some(0),
            },
        )
        .unwrap();
        assert_eq!(c.color(0, 0), 0);
        assert_eq!(c.histogram()[0], 5);
        assert_eq!(c.color(1, 2), 6);
    }

    #[test]
    fn partition_condition_instances() {
        let ctx = FieldContext::new(5, None).unwrap();
        let f = cyclic_factorization(5).unwrap();
        let m = transversal_matching(FamilyKind::Cyclic, &ctx);
        let report = check_partition_condition(&f, &m, &kpp_partition(5).unwrap()).unwrap();
        assert!(report.ok);
        // Each factor: one fixed label plus one (p−1)-cycle.
        assert!(report
            .factors
            .iter()
            .all(|fm| fm.cycles.len() == 1 && fm.cycles[0].len == 4));

        let fp = p_squared_factorization(&ctx).unwrap();
        let mp = transversal_matching(FamilyKind::PSquared, &ctx);
        let report =
            check_partition_condition(&fp, &mp, &p_squared_partition(&ctx).unwrap()).unwrap();
        assert!(report.ok);
        assert_eq!(report.factors.len(), 25);

        let all2 = LabelPartition::from_class2(5, 0..5).unwrap();
        assert!(!check_partition_condition(&f, &m, &all2).unwrap().ok);
    }

    #[test]
    fn subcoloring_edges() {
        let c = k55();
        assert_eq!(derive_subcoloring(&c, &[], &[]).unwrap(), c);
        let sub = derive_subcoloring(&c, &[0, 4], &[1, 2]).unwrap();
        assert_eq!(sub.n(), 3);
        // Survivors: tops 1,2,3 and bottoms 0,3,4
        assert_eq!(sub.color(0, 0), c.color(1, 0));
        assert_eq!(sub.color(2, 2), c.color(3, 4));
        assert!(derive_subcoloring(&c, &[0], &[]).is_err());
        assert!(derive_subcoloring(&c, &[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]).is_err());
        assert!(derive_subcoloring(&c, &[9], &[0]).is_err());
        assert!(derive_subcoloring(&c, &[1, 1], &[0, 2]).is_err());
    }

    #[test]
    fn certificate_round_trip_and_errors() {
        let c = k55();
        let cert = Certificate::new(&c, "kpp", Some(&FieldContext::new(5, None).unwrap()));
        assert_eq!(cert.edges.len(), 25);
        assert!(cert
            .edges
            .windows(2)
            .all(|w| (w[0][0], w[0][1]) < (w[1][0], w[1][1])));
        assert_eq!(cert.to_coloring().unwrap(), c);

        let mut dup = cert.clone();
        dup.edges[1] = dup.edges[0];
        assert!(dup.to_coloring().is_err());
        let mut short = cert.clone();
        short.edges.pop();
        assert!(short.to_coloring().is_err());
        let mut big = cert;
        big.edges[0][2] = 7;
        assert!(big.to_coloring().is_err());
    }
}
