//! Classification of graphs: edge-regularity, regular cliques, the
//! common-neighbour spectrum of non-adjacent pairs, and the resulting
//! Neumaier / strongly-regular verdict.

use crate::constructions::GammaSpec;
use crate::cyclotomy::{x_sum_value, CyclotomicTable};
use crate::error::{Error, Result};
use crate::graph::Graph;
use rayon::prelude::*;

/// Cap on the automatic regular-clique search; larger graphs need a
/// candidate clique supplied by the caller.
pub const CLIQUE_SEARCH_CAP: usize = 512;

/// Bound on the number of maximal cliques visited before the search
/// gives up (only relevant for adversarial inputs).
const MAX_CLIQUES_VISITED: usize = 1_000_000;

/// Why a graph failed edge-regularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularityWitness {
    IrregularDegree {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    UnevenTriangles {
        u: usize,
        v: usize,
        count: usize,
        expected: usize,
    },
}

/// Why a clique is not regular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliqueWitness {
    OutsideVertex {
        vertex: usize,
        count: usize,
        expected: usize,
    },
    ZeroNexus,
    NoOutsideVertices,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NotEdgeRegular,
    EdgeRegularOnly,
    StrictlyNeumaier,
    StronglyRegular,
    NeumaierAndSrg,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::NotEdgeRegular => "not-edge-regular",
            Verdict::EdgeRegularOnly => "edge-regular-only",
            Verdict::StrictlyNeumaier => "strictly-neumaier",
            Verdict::StronglyRegular => "strongly-regular",
            Verdict::NeumaierAndSrg => "neumaier-and-srg",
        };
        f.write_str(s)
    }
}

/// Everything `classify` learns about a graph.
#[derive(Debug, Clone)]
pub struct NeumaierReport {
    pub v: usize,
    pub k: Option<usize>,
    pub lambda: Option<usize>,
    /// sorted distinct common-neighbour counts over non-adjacent pairs
    pub mu_set: Vec<usize>,
    pub srg: bool,
    pub clique: Option<Vec<usize>>,
    /// the nexus e, when a regular clique is known
    pub nexus: Option<usize>,
    /// order s of that clique
    pub clique_order: Option<usize>,
    pub verdict: Verdict,
    pub witness: Option<RegularityWitness>,
    /// false when the clique search hit its visit cap without an answer
    pub clique_search_complete: bool,
}

/// Constant degree and constant edge-triangle count, or the first
/// violation found.
pub fn edge_regularity(g: &Graph) -> std::result::Result<(usize, usize, usize), RegularityWitness> {
    let n = g.n();
    if n == 0 {
        return Ok((0, 0, 0));
    }
    let k = g.degree(0);
    for v in 1..n {
        let d = g.degree(v);
        if d != k {
            return Err(RegularityWitness::IrregularDegree {
                vertex: v,
                degree: d,
                expected: k,
            });
        }
    }
    let mut lambda = None;
    for u in 0..n {
        for v in g.neighbors(u) {
            if v < u {
                continue;
            }
            let t = g.common_neighbors(u, v);
            match lambda {
                None => lambda = Some(t),
                Some(l) if l != t => {
                    return Err(RegularityWitness::UnevenTriangles {
                        u,
                        v,
                        count: t,
                        expected: l,
                    })
                }
                _ => {}
            }
        }
    }
    Ok((n, k, lambda.unwrap_or(0)))
}

/// Verifies that `clique` induces a complete subgraph and that every
/// outside vertex has the same positive number of neighbours inside.
pub fn regular_clique_check(
    g: &Graph,
    clique: &[usize],
) -> Result<std::result::Result<usize, CliqueWitness>> {
    for &v in clique {
        if v >= g.n() {
            return Err(Error::VertexRange(v, g.n()));
        }
    }
    for (i, &x) in clique.iter().enumerate() {
        for &y in &clique[i + 1..] {
            if !g.has_edge(x, y) {
                return Err(Error::NotAClique { u: x, v: y });
            }
        }
    }
    let inside = {
        let mut mark = vec![false; g.n()];
        for &v in clique {
            mark[v] = true;
        }
        mark
    };
    let mut nexus = None;
    for (v, &is_in) in inside.iter().enumerate() {
        if is_in {
            continue;
        }
        let count = clique.iter().filter(|&&c| g.has_edge(v, c)).count();
        match nexus {
            None => nexus = Some(count),
            Some(e) if e != count => {
                return Ok(Err(CliqueWitness::OutsideVertex {
                    vertex: v,
                    count,
                    expected: e,
                }))
            }
            _ => {}
        }
    }
    match nexus {
        Some(0) => Ok(Err(CliqueWitness::ZeroNexus)),
        Some(e) => Ok(Ok(e)),
        None => Ok(Err(CliqueWitness::NoOutsideVertices)),
    }
}

/// Sorted distinct common-neighbour counts over non-adjacent pairs.
pub fn mu_set(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut values: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut seen = Vec::new();
            for v in u + 1..n {
                if !g.has_edge(u, v) {
                    seen.push(g.common_neighbors(u, v));
                }
            }
            seen.sort_unstable();
            seen.dedup();
            seen
        })
        .reduce(Vec::new, |mut a, b| {
            a.extend(b);
            a
        });
    values.sort_unstable();
    values.dedup();
    values
}

/// Bron–Kerbosch with pivoting over bitset rows, stopping at the first
/// regular maximal clique. Returns (found clique with nexus, search
/// completed without hitting the visit cap).
fn search_regular_clique(g: &Graph) -> (Option<(Vec<usize>, usize)>, bool) {
    let n = g.n();
    let words = n.div_ceil(64);
    let full: Vec<u64> = {
        let mut f = vec![u64::MAX; words];
        if !n.is_multiple_of(64) {
            f[words - 1] = (1u64 << (n % 64)) - 1;
        }
        f
    };
    struct Ctx<'a> {
        g: &'a Graph,
        visited: usize,
        found: Option<(Vec<usize>, usize)>,
        capped: bool,
    }
    fn bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
        set.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }
    fn expand(ctx: &mut Ctx, r: &mut Vec<usize>, p: &mut [u64], x: &mut [u64]) {
        if ctx.found.is_some() || ctx.capped {
            return;
        }
        if p.iter().all(|&w| w == 0) && x.iter().all(|&w| w == 0) {
            ctx.visited += 1;
            if ctx.visited > MAX_CLIQUES_VISITED {
                ctx.capped = true;
                return;
            }
            if let Ok(Ok(e)) = regular_clique_check(ctx.g, r) {
                let mut clique = r.clone();
                clique.sort_unstable();
                ctx.found = Some((clique, e));
            }
            return;
        }
        // pivot: vertex of P u X with most neighbours in P
        let pivot = bits(p)
            .chain(bits(x))
            .max_by_key(|&u| {
                ctx.g
                    .row(u)
                    .iter()
                    .zip(p.iter())
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
            })
            .expect("P u X nonempty");
        let candidates: Vec<usize> = bits(p).filter(|&v| !ctx.g.has_edge(pivot, v)).collect();
        for v in candidates {
            r.push(v);
            let mut p2: Vec<u64> = p.iter().zip(ctx.g.row(v)).map(|(a, b)| a & b).collect();
            let mut x2: Vec<u64> = x.iter().zip(ctx.g.row(v)).map(|(a, b)| a & b).collect();
            expand(ctx, r, &mut p2, &mut x2);
            r.pop();
            p[v / 64] &= !(1 << (v % 64));
            x[v / 64] |= 1 << (v % 64);
            if ctx.found.is_some() || ctx.capped {
                return;
            }
        }
    }
    let mut ctx = Ctx {
        g,
        visited: 0,
        found: None,
        capped: false,
    };
    let mut r = Vec::new();
    let mut p = full;
    let mut x = vec![0u64; words];
    expand(&mut ctx, &mut r, &mut p, &mut x);
    (ctx.found, !ctx.capped)
}

/// Full classification. When no candidate clique is supplied the search
/// runs only for graphs of order at most [`CLIQUE_SEARCH_CAP`].
pub fn classify(g: &Graph, candidate_clique: Option<&[usize]>) -> Result<NeumaierReport> {
    let n = g.n();
    let mus = mu_set(g);
    let complete = n >= 1 && mus.is_empty() && g.edge_count() == n * (n - 1) / 2;
    let (er, witness) = match edge_regularity(g) {
        Ok((v, k, l)) => {
            debug_assert_eq!(v, n);
            (Some((k, l)), None)
        }
        Err(w) => (None, Some(w)),
    };
    let srg = er.is_some() && !complete && mus.len() == 1;

    let mut clique = None;
    let mut nexus = None;
    let mut search_complete = true;
    if er.is_some() && !complete {
        if let Some(cand) = candidate_clique {
            if let Ok(e) = regular_clique_check(g, cand)? {
                clique = Some(cand.to_vec());
                nexus = Some(e);
            }
        } else if n <= CLIQUE_SEARCH_CAP {
            let (found, completed) = search_regular_clique(g);
            search_complete = completed;
            if let Some((c, e)) = found {
                clique = Some(c);
                nexus = Some(e);
            }
        } else {
            search_complete = false;
        }
    }

    let verdict = match (er.is_some(), complete, clique.is_some(), srg) {
        (false, ..) => Verdict::NotEdgeRegular,
        (true, true, ..) => Verdict::EdgeRegularOnly,
        (true, false, true, true) => Verdict::NeumaierAndSrg,
        (true, false, true, false) => Verdict::StrictlyNeumaier,
        (true, false, false, true) => Verdict::StronglyRegular,
        (true, false, false, false) => Verdict::EdgeRegularOnly,
    };
    Ok(NeumaierReport {
        v: n,
        k: er.map(|(k, _)| k),
        lambda: er.map(|(_, l)| l),
        mu_set: mus,
        srg,
        clique_order: clique.as_ref().map(|c| c.len()),
        clique,
        nexus,
        verdict,
        witness,
        clique_search_complete: search_complete,
    })
}

/// The common-neighbour counts a Neumaier Γ_m(α₁,α₂) must show on
/// non-adjacent pairs: n₁(n₂+1) on the C₂ classes and
/// 2n₁ + X_{0,0,i} on each D_i, i != 0.
pub fn mu_spectrum_prediction(
    spec: &GammaSpec,
    t1: &CyclotomicTable,
    t2: &CyclotomicTable,
) -> Result<Vec<u64>> {
    if t1.m() != spec.m || t2.m() != spec.m {
        return Err(Error::OrderMismatch(t1.m(), t2.m()));
    }
    let mut out = vec![spec.n1 * (spec.n2 + 1)];
    for i in 1..spec.m as i64 {
        out.push(2 * spec.n1 + x_sum_value(t1, t2, 0, 0, i));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gamma, gamma_canonical_clique, omega_fixture, petersen};
    use crate::cyclotomy::cyclotomic_numbers;
    use crate::field::{build_field, prime_power_decompose};
    use crate::graph::Graph;

    fn gamma_spec(m: u64, q1: u64, q2: u64) -> GammaSpec {
        let (p1, r1) = prime_power_decompose(q1).unwrap();
        let (p2, r2) = prime_power_decompose(q2).unwrap();
        let f1 = build_field(p1, r1).unwrap();
        let f2 = build_field(p2, r2).unwrap();
        let a1 = f1.dlog_table(&f1.smallest_primitive()).unwrap();
        let a2 = f2.dlog_table(&f2.smallest_primitive()).unwrap();
        GammaSpec::new(m, f1, a1, f2, a2).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn pentagon_edge_regular() {
        assert_eq!(edge_regularity(&cycle(5)), Ok((5, 2, 0)));
    }

    #[test]
    fn omega_edge_regular() {
        let g = omega_fixture();
        assert_eq!(edge_regularity(&g), Ok((16, 9, 4)));
    }

    #[test]
    fn gamma_4_7_edge_regular() {
        let g = gamma(&gamma_spec(3, 4, 7)).unwrap();
        assert_eq!(edge_regularity(&g), Ok((28, 9, 2)));
    }

    #[test]
    fn irregular_witness() {
        let g = Graph::from_edges(3, [(0, 1)]);
        assert!(matches!(
            edge_regularity(&g),
            Err(RegularityWitness::IrregularDegree { .. })
        ));
    }

    #[test]
    fn canonical_clique_nexus() {
        let spec = gamma_spec(3, 4, 7);
        let g = gamma(&spec).unwrap();
        let clique = gamma_canonical_clique(&spec);
        assert_eq!(regular_clique_check(&g, &clique).unwrap(), Ok(1));
    }

    #[test]
    fn k4_inside_k5() {
        let mut k5 = Graph::new(5);
        for i in 0..5 {
            for j in i + 1..5 {
                k5.add_edge(i, j);
            }
        }
        assert_eq!(regular_clique_check(&k5, &[0, 1, 2, 3]).unwrap(), Ok(4));
    }

    #[test]
    fn non_clique_rejected() {
        let g = cycle(5);
        assert!(matches!(
            regular_clique_check(&g, &[0, 2]),
            Err(Error::NotAClique { u: 0, v: 2 })
        ));
    }

    #[test]
    fn classify_gamma_4_7_strictly_neumaier() {
        let g = gamma(&gamma_spec(3, 4, 7)).unwrap();
        let rep = classify(&g, None).unwrap();
        assert_eq!(rep.verdict, Verdict::StrictlyNeumaier);
        assert_eq!((rep.v, rep.k, rep.lambda), (28, Some(9), Some(2)));
        assert_eq!(rep.nexus, Some(1));
        assert_eq!(rep.clique_order, Some(4));
        assert!(rep.mu_set.len() >= 2);
    }

    #[test]
    fn classify_omega() {
        let rep = classify(&omega_fixture(), None).unwrap();
        assert_eq!(rep.verdict, Verdict::StrictlyNeumaier);
        assert_eq!(rep.nexus, Some(2));
        assert_eq!(rep.clique_order, Some(4));
    }

    #[test]
    fn classify_complete_graph_excluded() {
        let mut k6 = Graph::new(6);
        for i in 0..6 {
            for j in i + 1..6 {
                k6.add_edge(i, j);
            }
        }
        let rep = classify(&k6, None).unwrap();
        assert_eq!(rep.verdict, Verdict::EdgeRegularOnly);
        assert!(!rep.srg);
    }

    #[test]
    fn classify_gamma_alpha_alpha_srg() {
        // same field and primitive element on both axes: Latin-square SRGs
        // m = 3, q = 7: (49, 18, 7, 6)
        let (p, r) = prime_power_decompose(7).unwrap();
        let f = build_field(p, r).unwrap();
        let a = f.dlog_table(&f.smallest_primitive()).unwrap();
        let spec = GammaSpec::new(3, f.clone(), a.clone(), f.clone(), a.clone()).unwrap();
        let g = gamma(&spec).unwrap();
        let rep = classify(&g, None).unwrap();
        assert!(rep.srg);
        assert_eq!((rep.v, rep.k, rep.lambda), (49, Some(18), Some(7)));
        assert_eq!(rep.mu_set, vec![6]);
        assert_eq!(rep.verdict, Verdict::NeumaierAndSrg);
        // m = 2, q = 7: (49, 24, 11, 12)
        let spec = GammaSpec::new(2, f.clone(), a.clone(), f, a).unwrap();
        let g = gamma(&spec).unwrap();
        let rep = classify(&g, None).unwrap();
        assert!(rep.srg);
        assert_eq!((rep.v, rep.k, rep.lambda), (49, Some(24), Some(11)));
        assert_eq!(rep.mu_set, vec![12]);
    }

    #[test]
    fn classify_petersen_srg_without_regular_clique() {
        let rep = classify(&petersen(), None).unwrap();
        assert!(rep.srg);
        assert_eq!(rep.verdict, Verdict::StronglyRegular);
        assert!(rep.clique.is_none());
        assert!(rep.clique_search_complete);
    }

    #[test]
    fn predicted_mu_contains_c2_value() {
        let spec = gamma_spec(3, 4, 7);
        let t1 = cyclotomic_numbers(&spec.field1, &spec.alpha1, 3).unwrap();
        let t2 = cyclotomic_numbers(&spec.field2, &spec.alpha2, 3).unwrap();
        let predicted = mu_spectrum_prediction(&spec, &t1, &t2).unwrap();
        assert!(predicted.contains(&3)); // n1 (n2 + 1) = 1 * 3
                                         // observed values are a subset of the prediction
        let g = gamma(&spec).unwrap();
        let observed = mu_set(&g);
        assert!(observed.iter().all(|&v| predicted.contains(&(v as u64))));
    }
}
