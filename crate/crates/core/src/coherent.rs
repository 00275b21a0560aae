//! Coherent closure via exact 2-dimensional Weisfeiler–Leman refinement,
//! plus rank bounds, structural flags, support decomposition, and the
//! Schur-partition verification for the Γ family.
//!
//! The refinement recolors ordered pairs by the exact sorted multiset of
//! intermediate color pairs (encodings are compared directly, never
//! hashed digests), so the stable coloring is deterministic and colors
//! are numbered by first occurrence in row-major pair order.

use crate::constructions::{build_classes, GammaSpec};
use crate::cyclotomy::{cyclotomic_numbers, x_sum_value};
use crate::error::{Error, Result};
use crate::graph::Graph;
use num_bigint::BigInt;
use rayon::prelude::*;
use std::collections::HashMap;

/// Default cap on the order of a graph accepted by [`wl_closure`].
pub const DEFAULT_WL_CAP: usize = 1024;

/// The stabilized pair-coloring of a graph: the underlying configuration
/// of its coherent closure.
#[derive(Debug, Clone)]
pub struct CoherentConfiguration {
    n: usize,
    colors: Vec<u32>,
    rank: u32,
    class_reps: Vec<(u32, u32)>,
    class_sizes: Vec<u64>,
    diag_classes: Vec<u32>,
    transpose_map: Vec<u32>,
    rounds: usize,
}

impl CoherentConfiguration {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn color(&self, x: usize, y: usize) -> u32 {
        self.colors[x * self.n + y]
    }

    pub fn class_rep(&self, class: u32) -> (usize, usize) {
        let (x, y) = self.class_reps[class as usize];
        (x as usize, y as usize)
    }

    pub fn class_size(&self, class: u32) -> u64 {
        self.class_sizes[class as usize]
    }

    pub fn diag_classes(&self) -> &[u32] {
        &self.diag_classes
    }

    pub fn transpose_class(&self, class: u32) -> u32 {
        self.transpose_map[class as usize]
    }

    /// Refinement rounds taken to stabilize (excluding the confirming one).
    pub fn rounds(&self) -> usize {
        self.rounds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuralFlags {
    pub homogeneous: bool,
    pub symmetric: bool,
    pub commutative: bool,
    /// true when commutativity was checked over all triples (rank <= 16),
    /// false when sampled
    pub commutative_exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportInfo {
    pub classes: Vec<u32>,
    pub cardinality: usize,
}

struct Scratch {
    stamp: Vec<u32>,
    count: Vec<u32>,
    touched: Vec<u32>,
    generation: u32,
    codes: Vec<u64>,
}

impl Scratch {
    fn new(code_space: usize) -> Scratch {
        Scratch {
            stamp: vec![0; code_space],
            count: vec![0; code_space],
            touched: Vec::new(),
            generation: 0,
            codes: Vec::new(),
        }
    }
}

/// Code space above which the per-pair counting falls back to sorting.
const STAMP_LIMIT: usize = 1 << 16;

fn fingerprint(
    n: usize,
    colors: &[u32],
    colors_t: &[u32],
    rank: u32,
    x: usize,
    y: usize,
    scratch: &mut Scratch,
) -> Box<[u64]> {
    let row_x = &colors[x * n..x * n + n];
    let col_y = &colors_t[y * n..y * n + n];
    let old = colors[x * n + y] as u64;
    let r = rank as u64;
    let code_space = (rank as usize) * (rank as usize);
    if code_space <= STAMP_LIMIT {
        scratch.generation += 1;
        let generation = scratch.generation;
        scratch.touched.clear();
        for z in 0..n {
            let code = (row_x[z] as u64 * r + col_y[z] as u64) as usize;
            if scratch.stamp[code] != generation {
                scratch.stamp[code] = generation;
                scratch.count[code] = 0;
                scratch.touched.push(code as u32);
            }
            scratch.count[code] += 1;
        }
        scratch.touched.sort_unstable();
        let mut out = Vec::with_capacity(scratch.touched.len() + 1);
        out.push(old);
        for &code in &scratch.touched {
            out.push((code as u64) << 32 | scratch.count[code as usize] as u64);
        }
        out.into_boxed_slice()
    } else {
        scratch.codes.clear();
        for z in 0..n {
            scratch.codes.push(row_x[z] as u64 * r + col_y[z] as u64);
        }
        scratch.codes.sort_unstable();
        let mut out = vec![old];
        let mut i = 0;
        while i < n {
            let code = scratch.codes[i];
            let mut j = i;
            while j < n && scratch.codes[j] == code {
                j += 1;
            }
            out.push(code << 32 | (j - i) as u64);
            i = j;
        }
        out.into_boxed_slice()
    }
}

/// One refinement round: recolor every ordered pair by (old color,
/// multiset of intermediate color pairs), numbering new colors by first
/// occurrence in row-major order.
fn refine_round(n: usize, colors: &[u32], rank: u32) -> (Vec<u32>, u32) {
    let total = n * n;
    let mut colors_t = vec![0u32; total];
    for x in 0..n {
        for y in 0..n {
            colors_t[y * n + x] = colors[x * n + y];
        }
    }
    const CHUNK: usize = 1 << 14;
    let nchunks = total.div_ceil(CHUNK);
    let code_space = ((rank as usize) * (rank as usize)).min(STAMP_LIMIT);
    let chunks: Vec<Vec<Box<[u64]>>> = (0..nchunks)
        .into_par_iter()
        .map_init(
            || Scratch::new(code_space),
            |scratch, ci| {
                let start = ci * CHUNK;
                let end = (start + CHUNK).min(total);
                let mut out = Vec::with_capacity(end - start);
                for pair in start..end {
                    out.push(fingerprint(
                        n,
                        colors,
                        &colors_t,
                        rank,
                        pair / n,
                        pair % n,
                        scratch,
                    ));
                }
                out
            },
        )
        .collect();
    let mut palette: HashMap<Box<[u64]>, u32> = HashMap::new();
    let mut new_colors = Vec::with_capacity(total);
    for chunk in chunks {
        for fp in chunk {
            let next = palette.len() as u32;
            let id = *palette.entry(fp).or_insert(next);
            new_colors.push(id);
        }
    }
    let new_rank = palette.len() as u32;
    (new_colors, new_rank)
}

/// Runs refinement rounds until the color count stops growing. Returns
/// the stable coloring, its rank, and the number of strict rounds.
pub(crate) fn stabilize(n: usize, mut colors: Vec<u32>, mut rank: u32) -> (Vec<u32>, u32, usize) {
    let mut rounds = 0usize;
    loop {
        let (next, next_rank) = refine_round(n, &colors, rank);
        if next_rank == rank {
            return (colors, rank, rounds);
        }
        debug_assert!(next_rank > rank);
        colors = next;
        rank = next_rank;
        rounds += 1;
    }
}

fn initial_coloring(g: &Graph) -> (Vec<u32>, u32) {
    let n = g.n();
    let mut palette: HashMap<u8, u32> = HashMap::new();
    let mut colors = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let kind = if x == y {
                2u8
            } else {
                u8::from(g.has_edge(x, y))
            };
            let next = palette.len() as u32;
            colors.push(*palette.entry(kind).or_insert(next));
        }
    }
    (colors, palette.len() as u32)
}

/// The coarsest coherent configuration refining {diagonal, edges,
/// non-edges}: the underlying configuration of the coherent closure.
pub fn wl_closure(g: &Graph, cap: usize) -> Result<CoherentConfiguration> {
    let n = g.n();
    if n > cap {
        return Err(Error::WlCapExceeded { n, cap });
    }
    if n == 0 {
        return Err(Error::Internal("refinement of the empty graph".into()));
    }
    let (init, rank0) = initial_coloring(g);
    let (colors, rank, rounds) = stabilize(n, init, rank0);
    let mut class_reps = vec![(u32::MAX, u32::MAX); rank as usize];
    let mut class_sizes = vec![0u64; rank as usize];
    for x in 0..n {
        for y in 0..n {
            let c = colors[x * n + y] as usize;
            if class_reps[c].0 == u32::MAX {
                class_reps[c] = (x as u32, y as u32);
            }
            class_sizes[c] += 1;
        }
    }
    let mut diag_classes: Vec<u32> = (0..n).map(|x| colors[x * n + x]).collect();
    diag_classes.sort_unstable();
    diag_classes.dedup();
    let transpose_map: Vec<u32> = class_reps
        .iter()
        .map(|&(x, y)| colors[y as usize * n + x as usize])
        .collect();
    // CC2: the transpose of a class is a class (constant over the class)
    for x in 0..n {
        for y in 0..n {
            let c = colors[x * n + y];
            if colors[y * n + x] != transpose_map[c as usize] {
                return Err(Error::Internal(format!(
                    "transpose of class {c} is not a single class"
                )));
            }
        }
    }
    Ok(CoherentConfiguration {
        n,
        colors,
        rank,
        class_reps,
        class_sizes,
        diag_classes,
        transpose_map,
        rounds,
    })
}

/// The classes whose union is exactly the edge set.
pub fn support(g: &Graph, c: &CoherentConfiguration) -> Result<SupportInfo> {
    if g.n() != c.n {
        return Err(Error::Internal(
            "configuration belongs to a different graph".into(),
        ));
    }
    let classes: Vec<u32> = (0..c.rank)
        .filter(|&k| {
            let (x, y) = c.class_rep(k);
            x != y && g.has_edge(x, y)
        })
        .collect();
    let covered: u64 = classes.iter().map(|&k| c.class_size(k)).sum();
    if covered != 2 * g.edge_count() as u64 {
        return Err(Error::Internal(
            "adjacency is not a union of closure classes".into(),
        ));
    }
    Ok(SupportInfo {
        cardinality: classes.len(),
        classes,
    })
}

/// Intersection-number tensor p[k][i][j], available for rank <= 16.
pub fn intersection_numbers(c: &CoherentConfiguration) -> Option<Vec<u64>> {
    let r = c.rank as usize;
    if r > 16 {
        return None;
    }
    let n = c.n;
    let mut tensor = vec![0u64; r * r * r];
    for k in 0..r {
        let (x, y) = c.class_rep(k as u32);
        for z in 0..n {
            let i = c.colors[x * n + z] as usize;
            let j = c.colors[z * n + y] as usize;
            tensor[k * r * r + i * r + j] += 1;
        }
    }
    Some(tensor)
}

/// Homogeneity, symmetry, and commutativity of the configuration.
/// Commutativity is exhaustive for rank <= 16 and sampled above.
pub fn structural_flags(c: &CoherentConfiguration) -> StructuralFlags {
    let homogeneous = c.diag_classes.len() == 1;
    let symmetric = (0..c.rank).all(|k| c.transpose_map[k as usize] == k);
    let (commutative, exhaustive) = match intersection_numbers(c) {
        Some(tensor) => {
            let r = c.rank as usize;
            let mut ok = true;
            'outer: for k in 0..r {
                for i in 0..r {
                    for j in 0..r {
                        if tensor[k * r * r + i * r + j] != tensor[k * r * r + j * r + i] {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            (ok, true)
        }
        None => {
            let r = c.rank as u64;
            let n = c.n;
            let p_of = |k: u32, i: u32, j: u32| -> u64 {
                let (x, y) = c.class_rep(k);
                (0..n)
                    .filter(|&z| c.colors[x * n + z] == i && c.colors[z * n + y] == j)
                    .count() as u64
            };
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = || {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                state >> 33
            };
            let mut ok = true;
            for _ in 0..10_000 {
                let i = (next() % r) as u32;
                let j = (next() % r) as u32;
                let k = (next() % r) as u32;
                if p_of(k, i, j) != p_of(k, j, i) {
                    ok = false;
                    break;
                }
            }
            (ok, false)
        }
    };
    StructuralFlags {
        homogeneous,
        symmetric,
        commutative,
        commutative_exhaustive: exhaustive,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankBoundReport {
    pub rank: u32,
    /// (m + 3, rank <= m + 3) when a Γ order m is supplied
    pub upper: Option<(u32, bool)>,
    /// rank >= 3 for a non-complete graph with at least one edge
    pub lower_ok: bool,
}

pub fn rank_bound_check(
    g: &Graph,
    c: &CoherentConfiguration,
    gamma_m: Option<u64>,
) -> RankBoundReport {
    let edges = g.edge_count();
    let complete = edges == g.n() * (g.n() - 1) / 2;
    let lower_ok = if edges > 0 && !complete {
        c.rank >= 3
    } else {
        true
    };
    let upper = gamma_m.map(|m| {
        let bound = m as u32 + 3;
        (bound, c.rank <= bound)
    });
    RankBoundReport {
        rank: c.rank,
        upper,
        lower_ok,
    }
}

/// Number of distinct adjacency eigenvalues, computed exactly as the
/// degree of the minimal polynomial of A inside its own coherent algebra
/// (integer arithmetic on class coordinates). Only available for
/// rank <= 16 and n <= 256; by the spectral lower bound this is <= rank.
pub fn distinct_eigenvalue_bound(g: &Graph, c: &CoherentConfiguration) -> Option<usize> {
    if c.n > 256 {
        return None;
    }
    let tensor = intersection_numbers(c)?;
    let r = c.rank as usize;
    let supp = support(g, c).ok()?;
    // multiplication by A on class coordinates: (M w)[k] = sum_j M[k][j] w[j]
    let mut mat = vec![BigInt::from(0); r * r];
    for k in 0..r {
        for j in 0..r {
            let mut total = 0u64;
            for &i in &supp.classes {
                total += tensor[k * r * r + (i as usize) * r + j];
            }
            mat[k * r + j] = BigInt::from(total);
        }
    }
    // Krylov span of vec(I), vec(A), vec(A^2), ... with fraction-free
    // elimination over the integers
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new(); // (pivot, reduced vector)
    let mut w: Vec<BigInt> = (0..r)
        .map(|k| {
            if c.diag_classes.contains(&(k as u32)) {
                BigInt::from(1)
            } else {
                BigInt::from(0)
            }
        })
        .collect();
    let zero = BigInt::from(0);
    for dim in 0..=r {
        let mut v = w.clone();
        for (pivot, b) in &basis {
            if v[*pivot] != zero {
                let scale = b[*pivot].clone();
                let factor = v[*pivot].clone();
                for i in 0..r {
                    v[i] = &v[i] * &scale - &b[i] * &factor;
                }
                normalize(&mut v);
            }
        }
        match v.iter().position(|x| *x != zero) {
            None => return Some(dim),
            Some(pivot) => basis.push((pivot, v)),
        }
        // w <- M w
        let mut next = vec![BigInt::from(0); r];
        for k in 0..r {
            for j in 0..r {
                if mat[k * r + j] != zero && w[j] != zero {
                    next[k] += &mat[k * r + j] * &w[j];
                }
            }
        }
        w = next;
    }
    Some(r) // span cannot exceed the algebra dimension
}

fn normalize(v: &mut [BigInt]) {
    use num_bigint::Sign;
    let mut g = BigInt::from(0);
    for x in v.iter() {
        if x.sign() != Sign::NoSign {
            g = num_gcd_big(&g, x);
        }
    }
    if g > BigInt::from(1) {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

fn num_gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    use num_bigint::Sign;
    let mut a = if a.sign() == Sign::Minus {
        -a
    } else {
        a.clone()
    };
    let mut b = if b.sign() == Sign::Minus {
        -b
    } else {
        b.clone()
    };
    while b.sign() != Sign::NoSign {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// One coefficient mismatch found by [`schur_verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurMismatch {
    pub left: String,
    pub right: String,
    pub on: String,
    pub element: u64,
    pub expected: i64,
    pub got: i64,
}

#[derive(Debug, Clone)]
pub struct SchurReport {
    pub m: u64,
    pub q1: u64,
    pub q2: u64,
    pub ok: bool,
    pub mismatches: Vec<SchurMismatch>,
}

/// Verifies by explicit convolution that the m + 3 class indicators of
/// the Γ partition multiply exactly as the cyclotomic product formulas
/// predict (powers of the axes, the mixed products, and the D_i D_j
/// expansions whose D-coefficients are the X sums).
pub fn schur_verify(spec: &GammaSpec) -> Result<SchurReport> {
    let m = spec.m as usize;
    let q1 = spec.q1();
    let q2 = spec.q2();
    let n1 = spec.n1 as i64;
    let n2 = spec.n2 as i64;
    let size = (q1 * q2) as usize;
    let classes = build_classes(spec);
    let group = spec.group();

    let nclasses = m + 3;
    let mut member_lists: Vec<Vec<u64>> = Vec::with_capacity(nclasses);
    member_lists.push(vec![0]);
    member_lists.push(classes.c1.members().to_vec());
    member_lists.push(classes.c2.members().to_vec());
    for d in &classes.d {
        member_lists.push(d.members().to_vec());
    }
    let mut class_of = vec![u32::MAX; size];
    for (ci, members) in member_lists.iter().enumerate() {
        for &e in members {
            if class_of[e as usize] != u32::MAX {
                return Err(Error::Internal("classes are not disjoint".into()));
            }
            class_of[e as usize] = ci as u32;
        }
    }
    if class_of.contains(&u32::MAX) {
        return Err(Error::Internal("classes do not cover the group".into()));
    }

    let t1 = cyclotomic_numbers(&spec.field1, &spec.alpha1, spec.m)?;
    let t2 = cyclotomic_numbers(&spec.field2, &spec.alpha2, spec.m)?;
    let x = |i: usize, j: usize, k: usize| -> i64 {
        x_sum_value(&t1, &t2, i as i64, j as i64, k as i64) as i64
    };

    let name = |ci: usize| -> String {
        match ci {
            0 => "1".into(),
            1 => "C1".into(),
            2 => "C2".into(),
            d => format!("D{}", d - 3),
        }
    };

    // predicted coefficient vector for the product of classes ci * cj
    let same_parity = (q1 * spec.n1) % 2 == (q2 * spec.n2) % 2;
    let predict = |ci: usize, cj: usize| -> Vec<i64> {
        let mut e = vec![0i64; nclasses];
        let (a, b) = if ci <= cj { (ci, cj) } else { (cj, ci) };
        match (a, b) {
            (0, k) => e[k] = 1,
            (1, 1) => {
                e[0] = q1 as i64 - 1;
                e[1] = q1 as i64 - 2;
            }
            (2, 2) => {
                e[0] = q2 as i64 - 1;
                e[2] = q2 as i64 - 2;
            }
            (1, 2) => {
                for k in 0..m {
                    e[3 + k] = 1;
                }
            }
            (1, dj) => {
                let j = dj - 3;
                e[2] = n1;
                for k in 0..m {
                    e[3 + k] = if k == j { n1 - 1 } else { n1 };
                }
            }
            (2, dj) if dj >= 3 => {
                let j = dj - 3;
                e[1] = n2;
                for k in 0..m {
                    e[3 + k] = if k == j { n2 - 1 } else { n2 };
                }
            }
            (di, dj) => {
                let (i, j) = (di - 3, dj - 3);
                // F has full n1 n2 axis coefficients; G subtracts one of each
                let g_case = if same_parity {
                    i == j
                } else {
                    (i as i64 - j as i64 - (m as i64) / 2).rem_euclid(m as i64) == 0
                };
                e[1] = if g_case { n1 * n2 - n2 } else { n1 * n2 };
                e[2] = if g_case { n1 * n2 - n1 } else { n1 * n2 };
                e[0] = if g_case { (m as i64) * n1 * n2 } else { 0 };
                for k in 0..m {
                    e[3 + k] = x(i, j, k);
                }
            }
        }
        e
    };

    let mut mismatches = Vec::new();
    let mut conv = vec![0i64; size];
    for ci in 0..nclasses {
        for cj in ci..nclasses {
            conv.iter_mut().for_each(|v| *v = 0);
            for &ga in &member_lists[ci] {
                for &gb in &member_lists[cj] {
                    conv[group.add(ga, gb) as usize] += 1;
                }
            }
            let expected = predict(ci, cj);
            for (elem, &got) in conv.iter().enumerate() {
                let want = expected[class_of[elem] as usize];
                if got != want && mismatches.len() < 32 {
                    mismatches.push(SchurMismatch {
                        left: name(ci),
                        right: name(cj),
                        on: name(class_of[elem] as usize),
                        element: elem as u64,
                        expected: want,
                        got,
                    });
                }
            }
        }
    }
    Ok(SchurReport {
        m: spec.m,
        q1,
        q2,
        ok: mismatches.is_empty(),
        mismatches,
    })
}
