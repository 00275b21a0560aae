//! The graph families under study: the cyclotomic Cayley graphs
//! Γ_m(α₁,α₂) over GF(q₁) × GF(q₂), the antipodal blow-up of a
//! diameter-3 distance-regular graph, the ℤ/pqℤ clique-spread family,
//! and two built-in fixtures (the 16-vertex Ω graph and the icosahedron).

use crate::error::{Error, Result};
use crate::field::{DlogTable, FieldSpec};
use crate::graph::{cayley_graph, Graph, GraphMeta};
use crate::group::{AbelianGroup, ConnectionSet};

/// Everything needed to build Γ_m(α₁,α₂): two fields with chosen
/// primitive elements and the common order m dividing both q_i - 1.
#[derive(Debug, Clone)]
pub struct GammaSpec {
    pub m: u64,
    pub field1: FieldSpec,
    pub field2: FieldSpec,
    pub alpha1: DlogTable,
    pub alpha2: DlogTable,
    pub n1: u64,
    pub n2: u64,
}

impl GammaSpec {
    pub fn new(
        m: u64,
        field1: FieldSpec,
        alpha1: DlogTable,
        field2: FieldSpec,
        alpha2: DlogTable,
    ) -> Result<GammaSpec> {
        if m < 2 || !(field1.q() - 1).is_multiple_of(m) {
            return Err(Error::OrderDoesNotDivide {
                m,
                q_minus_1: field1.q() - 1,
            });
        }
        if !(field2.q() - 1).is_multiple_of(m) {
            return Err(Error::OrderDoesNotDivide {
                m,
                q_minus_1: field2.q() - 1,
            });
        }
        let n1 = (field1.q() - 1) / m;
        let n2 = (field2.q() - 1) / m;
        Ok(GammaSpec {
            m,
            field1,
            field2,
            alpha1,
            alpha2,
            n1,
            n2,
        })
    }

    pub fn q1(&self) -> u64 {
        self.field1.q()
    }

    pub fn q2(&self) -> u64 {
        self.field2.q()
    }

    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::FieldPair(self.field1.clone(), self.field2.clone())
    }

    /// The undirectedness condition q1 n1 = q2 n2 mod 2.
    pub fn parity_ok(&self) -> bool {
        (self.q1() * self.n1) % 2 == (self.q2() * self.n2) % 2
    }
}

/// The m + 3 nontrivial pieces of the Schur partition of
/// GF(q₁) × GF(q₂): the two axes and the m difference-of-log classes.
#[derive(Debug, Clone)]
pub struct GammaClasses {
    pub c1: ConnectionSet,
    pub c2: ConnectionSet,
    pub d: Vec<ConnectionSet>,
}

/// Builds C₁, C₂, and D_0..D_{m-1}. Together with the identity these
/// partition the group; sizes are q₁-1, q₂-1, and (q₁-1)(q₂-1)/m each.
pub fn build_classes(spec: &GammaSpec) -> GammaClasses {
    let q1 = spec.q1();
    let q2 = spec.q2();
    let m = spec.m;
    let c1 = ConnectionSet::new((1..q1).collect(), "C1(alpha1)").expect("axis class");
    let c2 =
        ConnectionSet::new((1..q2).map(|y| q1 * y).collect(), "C2(alpha2)").expect("axis class");
    let mut members: Vec<Vec<u64>> = vec![Vec::new(); m as usize];
    for k1 in 0..q1 - 1 {
        let x = spec.alpha1.pow(k1);
        for k2 in 0..q2 - 1 {
            let y = spec.alpha2.pow(k2);
            let class = (k1 as i64 - k2 as i64).rem_euclid(m as i64) as usize;
            members[class].push(x + q1 * y);
        }
    }
    let d = members
        .into_iter()
        .enumerate()
        .map(|(i, v)| ConnectionSet::new(v, format!("D{i}(alpha1,alpha2)")).expect("D class"))
        .collect();
    GammaClasses { c1, c2, d }
}

/// The canonical clique {(0,0)} ∪ C₁: vertices 0..q1 in the fixed
/// element indexing.
pub fn gamma_canonical_clique(spec: &GammaSpec) -> Vec<usize> {
    (0..spec.q1() as usize).collect()
}

/// The Cayley graph on GF(q₁) × GF(q₂) with connection set C₁ ∪ D₀,
/// of degree (q₁-1)(n₂+1). Errors when the parity condition fails and
/// the connection set would be asymmetric.
pub fn gamma(spec: &GammaSpec) -> Result<Graph> {
    if !spec.parity_ok() {
        return Err(Error::DirectedGamma {
            q1n1: spec.q1() * spec.n1,
            q2n2: spec.q2() * spec.n2,
        });
    }
    let classes = build_classes(spec);
    let s = classes.c1.union(&classes.d[0], "C1 u D0")?;
    let mut graph = cayley_graph(&spec.group(), &s)?;
    graph.set_meta(GraphMeta {
        construction: "gamma".into(),
        m: Some(spec.m),
        q1: Some(spec.q1()),
        q2: Some(spec.q2()),
        alpha1: Some(spec.alpha1.alpha_index()),
        alpha2: Some(spec.alpha2.alpha_index()),
    });
    Ok(graph)
}

/// A validated a-antipodal distance-regular graph of diameter 3,
/// together with the data read off from it.
#[derive(Debug, Clone)]
pub struct DrgInput {
    pub graph: Graph,
    pub a: usize,
    pub k: usize,
    pub lambda: usize,
    /// all-pairs distances, row-major
    dist: Vec<u8>,
}

impl DrgInput {
    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.graph.n() + y] as usize
    }
}

/// Validates from scratch: connectivity, diameter 3, distance-regularity
/// (reporting the first broken intersection number), the specific
/// intersection array {k, k-λ-1, 1; 1, (k-λ-1)/(a-1), k}, and the
/// antipodality of the distance-3-or-0 relation.
pub fn validate_drg(graph: Graph) -> Result<DrgInput> {
    let n = graph.n();
    if n == 0 {
        return Err(Error::NotConnected);
    }
    let mut dist = vec![0u8; n * n];
    let mut diameter = 0usize;
    for x in 0..n {
        let row = graph.bfs_distances(x);
        for (y, &d) in row.iter().enumerate() {
            if d == usize::MAX {
                return Err(Error::NotConnected);
            }
            diameter = diameter.max(d);
            dist[x * n + y] = d as u8;
        }
    }
    if diameter != 3 {
        return Err(Error::WrongDiameter {
            got: diameter,
            expected: 3,
        });
    }
    // intersection numbers c_h, a_h, b_h must be pair-independent
    let mut c = [usize::MAX; 4];
    let mut aa = [usize::MAX; 4];
    let mut b = [usize::MAX; 4];
    let names_c = ["c_0", "c_1", "c_2", "c_3"];
    let names_a = ["a_0", "a_1", "a_2", "a_3"];
    let names_b = ["b_0", "b_1", "b_2", "b_3"];
    for x in 0..n {
        for y in 0..n {
            let h = dist[x * n + y] as usize;
            let (mut ch, mut ah, mut bh) = (0usize, 0usize, 0usize);
            for z in graph.neighbors(y) {
                let dxz = dist[x * n + z] as usize;
                if dxz + 1 == h {
                    ch += 1;
                } else if dxz == h {
                    ah += 1;
                } else if dxz == h + 1 {
                    bh += 1;
                }
            }
            for (slot, got, name) in [
                (&mut c[h], ch, names_c[h]),
                (&mut aa[h], ah, names_a[h]),
                (&mut b[h], bh, names_b[h]),
            ] {
                if *slot == usize::MAX {
                    *slot = got;
                } else if *slot != got {
                    return Err(Error::NotDistanceRegular {
                        name,
                        distance: h,
                        first: *slot,
                        second: got,
                    });
                }
            }
        }
    }
    let k = b[0];
    let lambda = aa[1];
    // antipodality: distance {0,3} is an equivalence with constant class size
    let mut class_size = None;
    for x in 0..n {
        let mates: Vec<usize> = (0..n).filter(|&y| x == y || dist[x * n + y] == 3).collect();
        match class_size {
            None => class_size = Some(mates.len()),
            Some(s) if s != mates.len() => {
                return Err(Error::NotAntipodal(format!(
                    "classes of sizes {s} and {} both occur",
                    mates.len()
                )))
            }
            _ => {}
        }
        for &y in &mates {
            for &z in &mates {
                let d = dist[y * n + z] as usize;
                if y != z && d != 3 {
                    return Err(Error::NotAntipodal(format!(
                        "vertices {y} and {z} share a class but are at distance {d}"
                    )));
                }
            }
        }
    }
    let a = class_size.expect("n > 0");
    if a < 2 {
        return Err(Error::NotAntipodal("classes are singletons".into()));
    }
    // the intersection array forced by a-antipodality
    if b[2] != 1 {
        return Err(Error::NotDistanceRegular {
            name: "b_2",
            distance: 2,
            first: 1,
            second: b[2],
        });
    }
    if c[3] != k {
        return Err(Error::NotDistanceRegular {
            name: "c_3",
            distance: 3,
            first: k,
            second: c[3],
        });
    }
    if c[2] * (a - 1) != k - lambda - 1 {
        return Err(Error::NotDistanceRegular {
            name: "c_2",
            distance: 2,
            first: (k - lambda - 1) / (a - 1),
            second: c[2],
        });
    }
    Ok(DrgInput {
        graph,
        a,
        k,
        lambda,
        dist,
    })
}

/// The blow-up with adjacency I_t ⊗ (A₁+A₃) + (J_t-I_t) ⊗ (I+A₃),
/// t = (λ+2)/a. Requires a to be a proper divisor of λ+2 (the quotient
/// t = 1 case produces strongly regular graphs and is rejected).
pub fn gk_graph(d: &DrgInput) -> Result<Graph> {
    let lp2 = d.lambda + 2;
    if !lp2.is_multiple_of(d.a) || lp2 == d.a {
        return Err(Error::BadAntipodalDivisor {
            a: d.a,
            lambda_plus_2: lp2,
        });
    }
    let t = lp2 / d.a;
    let v = d.graph.n();
    let mut out = Graph::new(v * t);
    for c1 in 0..t {
        for c2 in 0..t {
            for w1 in 0..v {
                for w2 in 0..v {
                    let adjacent = if c1 == c2 {
                        matches!(d.distance(w1, w2), 1 | 3)
                    } else {
                        w1 == w2 || d.distance(w1, w2) == 3
                    };
                    if adjacent {
                        let x = c1 * v + w1;
                        let y = c2 * v + w2;
                        if x < y {
                            out.add_edge(x, y);
                        }
                    }
                }
            }
        }
    }
    out.set_meta(GraphMeta {
        construction: "gk".into(),
        ..Default::default()
    });
    Ok(out)
}

fn mod_pow(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1u64;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % n;
        }
        b = b * b % n;
        e >>= 1;
    }
    acc
}

fn is_primitive_root(alpha: u64, p: u64) -> bool {
    if alpha.is_multiple_of(p) {
        return false;
    }
    crate::field::prime_factors(p - 1)
        .into_iter()
        .all(|f| mod_pow(alpha, (p - 1) / f, p) != 1)
}

/// The ℤ/pqℤ family: t copies of Cay(ℤ/pqℤ, K₀(α)) with the coclique
/// spread (the cosets of pℤ/pqℤ) matched across copies by the given
/// permutations and completed to cliques. `perms` must hold t-1
/// permutations of {0,..,p-1}; pass an empty slice for t = 1.
pub fn whiteman_graph(p: u64, q: u64, alpha: u64, perms: &[Vec<usize>]) -> Result<Graph> {
    if p == q
        || p < 3
        || q < 3
        || !crate::field::is_prime(p)
        || !crate::field::is_prime(q)
        || !(p - 1).is_multiple_of(q - 1)
    {
        return Err(Error::BadWhitemanPrimes { p, q });
    }
    if !is_primitive_root(alpha, p) || !is_primitive_root(alpha, q) {
        return Err(Error::NotCommonPrimitiveRoot { alpha, p, q });
    }
    let pq = p * q;
    let n = p - 1; // (p-1)(q-1)/gcd(p-1, q-1)
    let m = q - 1;
    let k0: Vec<u64> = {
        let mut v = Vec::with_capacity(n as usize);
        let mut acc = 1u64;
        for _ in 0..n {
            v.push(acc);
            acc = acc * alpha % pq;
        }
        v
    };
    // smallest unit x whose powers spread K0 into a partition of the units
    let x = (2..pq)
        .find(|&x| {
            if x % p == 0 || x % q == 0 {
                return false;
            }
            let mut seen = vec![false; pq as usize];
            let mut count = 0u64;
            let mut xi = 1u64;
            for _ in 0..m {
                for &k in &k0 {
                    let e = xi * k % pq;
                    if seen[e as usize] {
                        return false;
                    }
                    seen[e as usize] = true;
                    count += 1;
                }
                xi = xi * x % pq;
            }
            count == (p - 1) * (q - 1)
        })
        .ok_or(Error::NoPartitionWitness(pq))?;
    let _ = x; // existence witness; K0 alone defines the graph below
    let in_k0 = {
        let mut v = vec![false; pq as usize];
        for &k in &k0 {
            v[k as usize] = true;
        }
        v
    };
    let intersection = k0
        .iter()
        .filter(|&&k| in_k0[((k + 1) % pq) as usize])
        .count();
    if (intersection + 2) % q as usize != 0 {
        return Err(Error::NonIntegralT { intersection, q });
    }
    let t = (intersection + 2) / q as usize;
    let identity: Vec<usize> = (0..p as usize).collect();
    if perms.len() != t - 1 {
        return Err(Error::BadPermutations {
            expected: t - 1,
            degree: p as usize,
            got: perms.len(),
        });
    }
    let mut all_perms: Vec<&[usize]> = vec![&identity];
    for perm in perms {
        let mut seen = vec![false; p as usize];
        if perm.len() != p as usize
            || perm
                .iter()
                .any(|&i| i >= p as usize || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::BadPermutations {
                expected: t - 1,
                degree: p as usize,
                got: perms.len(),
            });
        }
        all_perms.push(perm);
    }
    let vtx = |copy: usize, v: u64| copy * pq as usize + v as usize;
    let mut g = Graph::new(t * pq as usize);
    for copy in 0..t {
        for v in 0..pq {
            for &k in &k0 {
                let u = (v + k) % pq;
                if u != v {
                    g.add_edge(vtx(copy, v), vtx(copy, u));
                }
            }
        }
    }
    // coclique spread: coset r + pZ of copy i joins base class perm_i(r)
    for base in 0..p as usize {
        let mut members = Vec::with_capacity(t * q as usize);
        for (copy, perm) in all_perms.iter().enumerate() {
            let r = perm
                .iter()
                .position(|&img| img == base)
                .expect("perm is a bijection");
            for j in 0..q {
                members.push(vtx(copy, r as u64 + p * j));
            }
        }
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if !g.has_edge(x, y) {
                    g.add_edge(x, y);
                }
            }
        }
    }
    g.set_meta(GraphMeta {
        construction: "whiteman".into(),
        q1: Some(p),
        q2: Some(q),
        alpha1: Some(alpha),
        ..Default::default()
    });
    Ok(g)
}

/// Smallest common primitive root of two primes.
pub fn smallest_common_primitive_root(p: u64, q: u64) -> Option<u64> {
    (2..p * q).find(|&a| is_primitive_root(a, p) && is_primitive_root(a, q))
}

/// The 16-vertex Cayley graph over ℤ/2ℤ × ℤ/8ℤ with parameters
/// (16,9,2; 2,4); the smallest strictly Neumaier graph.
pub fn omega_fixture() -> Graph {
    let g = AbelianGroup::cyclic(vec![2, 8]);
    let pairs: [(u64, u64); 9] = [
        (1, 4),
        (0, 1),
        (0, 7),
        (1, 1),
        (1, 7),
        (0, 2),
        (0, 6),
        (1, 2),
        (1, 6),
    ];
    let members: Vec<u64> = pairs.iter().map(|&(a, b)| a + 2 * b).collect();
    let s = ConnectionSet::new(members, "S4 u S5 u S6").expect("fixture set");
    let mut graph = cayley_graph(&g, &s).expect("fixture is symmetric");
    graph.set_meta(GraphMeta {
        construction: "omega".into(),
        ..Default::default()
    });
    graph
}

/// The icosahedron: the smallest 2-antipodal distance-regular graph of
/// diameter 3 usable by [`gk_graph`] (intersection array {5,2,1;1,2,5}).
pub fn icosahedron() -> Graph {
    let mut edges = Vec::with_capacity(30);
    for i in 1..=5 {
        edges.push((0, i));
        edges.push((11, i + 5));
    }
    for i in 0..5 {
        edges.push((1 + i, 1 + (i + 1) % 5));
        edges.push((6 + i, 6 + (i + 1) % 5));
        edges.push((1 + i, 6 + i));
        edges.push((1 + i, 6 + (i + 1) % 5));
    }
    let mut g = Graph::from_edges(12, edges);
    g.set_meta(GraphMeta {
        construction: "icosahedron".into(),
        ..Default::default()
    });
    g
}

/// Petersen graph; a negative control for the blow-up input validation
/// (diameter 2).
pub fn petersen() -> Graph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, edges)
}
