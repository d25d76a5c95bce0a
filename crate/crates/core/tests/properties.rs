use proptest::prelude::*;

use kbip_core::coloring::{self, EdgeColoring};
use kbip_core::factorization::{cyclic_factorization, union_cycles, validate_p1f, P1fMode};
use kbip_core::perm::{compose, conjugate, Label, Permutation};
use kbip_core::verify::{self, check_acyclic_with};
use kbip_core::{Execution, FieldContext};

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as Label).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn sized_permutation(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max).prop_flat_map(permutation)
}

/// A proper coloring: a randomly relabelled cyclic Latin square, with some
/// edges moved to fresh colors of their own.
fn proper_coloring() -> impl Strategy<Value = EdgeColoring> {
    (2usize..=7).prop_flat_map(|n| {
        (
            permutation(n),
            permutation(n),
            permutation(n),
            proptest::collection::vec(any::<bool>(), n * n),
        )
            .prop_map(move |(rows, cols, symbols, fresh)| {
                let mut next = n as u32;
                let mut colors = vec![0; n * n];
                for u in 0..n {
                    for v in 0..n {
                        let s = (rows.apply(u as Label) + cols.apply(v as Label)) as usize % n;
                        colors[u * n + v] = if fresh[u * n + v] {
                            next += 1;
                            next - 1
                        } else {
                            symbols.apply(s as Label)
                        };
                    }
                }
                EdgeColoring::new(n, next, colors).unwrap()
            })
    })
}

/// Naive oracle: some two colors span a subgraph with a component that has
/// as many edges as vertices.
fn has_bichromatic_cycle(c: &EdgeColoring) -> bool {
    let n = c.n();
    for c1 in 0..c.num_colors() {
        for c2 in c1 + 1..c.num_colors() {
            // Vertices 0..n are top, n..2n bottom.
            let mut adj = vec![Vec::new(); 2 * n];
            for [u, v, col] in c.edges() {
                if col == c1 || col == c2 {
                    adj[u as usize].push(n + v as usize);
                    adj[n + v as usize].push(u as usize);
                }
            }
            let mut seen = vec![false; 2 * n];
            for s in 0..2 * n {
                if seen[s] || adj[s].is_empty() {
                    continue;
                }
                let (mut vertices, mut degree_sum) = (0, 0);
                let mut stack = vec![s];
                seen[s] = true;
                while let Some(x) = stack.pop() {
                    vertices += 1;
                    degree_sum += adj[x].len();
                    for &y in &adj[x] {
                        if !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
                if degree_sum / 2 == vertices {
                    return true;
                }
            }
        }
    }
    false
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

proptest! {
    #[test]
    fn inverse_is_two_sided(f in sized_permutation(40)) {
        let inv = f.inverse();
        prop_assert!(compose(&f, &inv).unwrap().is_identity());
        prop_assert!(compose(&inv, &f).unwrap().is_identity());
        prop_assert_eq!(inv.inverse(), f);
    }

    #[test]
    fn composition_applies_right_first((f, g) in (1usize..30).prop_flat_map(|n| (permutation(n), permutation(n)))) {
        let n = f.len();
        let fg = compose(&f, &g).unwrap();
        for i in 0..n as Label {
            prop_assert_eq!(fg.apply(i), f.apply(g.apply(i)));
        }
    }

    #[test]
    fn decomposition_partitions_and_rebuilds(f in sized_permutation(60)) {
        let d = f.cycle_decomposition();
        prop_assert_eq!(d.lengths().iter().sum::<usize>(), f.len());
        let mut all: Vec<Label> = d.cycles().iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..f.len() as Label).collect::<Vec<_>>());
        prop_assert_eq!(d.to_permutation(), f.clone());
        prop_assert_eq!(f.cycle_decomposition(), d);
    }

    #[test]
    fn notation_round_trips(f in sized_permutation(30)) {
        let text = f.cycle_decomposition().notation(false);
        prop_assert_eq!(Permutation::parse_cycles(&text, f.len()).unwrap(), f.clone());
        let short = f.cycle_decomposition().notation(true);
        prop_assert_eq!(Permutation::parse_cycles(&short, f.len()).unwrap(), f);
    }

    #[test]
    fn conjugation_preserves_cycle_type(f in permutation(25), s in permutation(25)) {
        let g = conjugate(&f, &s).unwrap();
        prop_assert_eq!(g.cycle_type(), f.cycle_type());
        // s⁻¹ ∘ f ∘ s maps s⁻¹(i) to s⁻¹(f(i)).
        let si = s.inverse();
        for i in 0..25 {
            prop_assert_eq!(g.apply(si.apply(i)), si.apply(f.apply(i)));
        }
    }

    #[test]
    fn verifier_agrees_with_naive_oracle(c in proper_coloring()) {
        prop_assert!(verify::check_proper(&c).is_empty());
        let expected = has_bichromatic_cycle(&c);
        for exec in [Execution::Sequential, Execution::Parallel] {
            let r = check_acyclic_with(&c, exec).unwrap();
            prop_assert_eq!(r.acyclic, !expected);
            match &r.bichromatic_witness {
                Some(w) => prop_assert!(w.is_valid_for(&c)),
                None => prop_assert!(r.acyclic),
            }
        }
    }

    #[test]
    fn union_cycles_alternate(a in permutation(12), b in permutation(12)) {
        let overlap = (0..12).filter(|&i| a.apply(i) == b.apply(i)).count();
        let cycles = union_cycles(&a, &b).unwrap();
        let covered: usize = cycles.iter().map(|c| c.labels.len()).sum();
        prop_assert_eq!(covered + overlap, 12);
        for cyc in &cycles {
            prop_assert!(cyc.len() >= 4 && cyc.len() % 2 == 0);
            for (k, &(u, v)) in cyc.edges.iter().enumerate() {
                let m = if k % 2 == 0 { &a } else { &b };
                prop_assert_eq!(m.apply(u), v);
                let (nu, nv) = cyc.edges[(k + 1) % cyc.len()];
                // Even edges meet the next at the top, odd ones at the bottom.
                let shared = if k % 2 == 0 { nu == u } else { nv == v };
                prop_assert!(shared);
            }
        }
    }

    #[test]
    fn subcolorings_stay_acyclic(p in prop::sample::select(vec![5u32, 7]), k in 1usize..4, seed in any::<u64>()) {
        let c = coloring::color_kp2(&FieldContext::new(p, None).unwrap(), false).unwrap();
        let n = c.n() as u64;
        let pick = |offset: u64| -> Vec<Label> {
            let mut out: Vec<Label> = Vec::new();
            let mut s = seed.wrapping_add(offset);
            while out.len() < k {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let l = ((s >> 33) % n) as Label;
                if !out.contains(&l) {
                    out.push(l);
                }
            }
            out
        };
        let sub = coloring::derive_subcoloring(&c, &pick(0), &pick(1)).unwrap();
        prop_assert_eq!(sub.n(), c.n() - k);
        let r = verify::verify(&sub);
        prop_assert!(r.proper && r.acyclic);
    }
}

#[test]
fn cyclic_family_is_perfect_exactly_at_primes() {
    for n in (3..=99).step_by(2) {
        let r = validate_p1f(&cyclic_factorization(n).unwrap(), P1fMode::Full);
        assert_eq!(r.ok, is_prime(n), "n = {n}");
    }
}
