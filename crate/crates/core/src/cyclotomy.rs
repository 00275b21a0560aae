//! Cyclotomic numbers of order m and derived quantities.
//!
//! The brute-force table is the single source of truth; the closed forms
//! for m = 2, 3, 4 are accelerators that are cross-checked against it.
//! Every closed-form division asserts exact divisibility, so a wrong u/v
//! or a wrong sign surfaces as an error rather than a silent off-by-one.

use crate::error::{Error, Result};
use crate::field::{DlogTable, FieldSpec};

/// The m x m array of cyclotomic numbers for one (q, alpha, m).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicTable {
    q: u64,
    m: u64,
    n: u64,
    alpha_index: u64,
    counts: Vec<u64>, // m * m, row-major [a][b]
}

impl CyclotomicTable {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// n with q = 1 + m n.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn alpha_index(&self) -> u64 {
        self.alpha_index
    }

    /// c_m(alpha; a, b), indices reduced mod m (negatives allowed).
    pub fn get(&self, a: i64, b: i64) -> u64 {
        let m = self.m as i64;
        let a = a.rem_euclid(m) as usize;
        let b = b.rem_euclid(m) as usize;
        self.counts[a * self.m as usize + b]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// The table of alpha^t where t = s mod m: (a, b) -> (s a, s b).
    /// Replacing the primitive element by a power relabels the classes by
    /// a unit multiplier, so every table realized by some primitive
    /// element of the same field arises this way.
    pub fn relabel(&self, s: u64) -> CyclotomicTable {
        let m = self.m;
        debug_assert_eq!(num_gcd(s % m, m), 1);
        let mut counts = vec![0u64; (m * m) as usize];
        for a in 0..m {
            for b in 0..m {
                counts[(a * m + b) as usize] = self.get((s * a) as i64, (s * b) as i64);
            }
        }
        CyclotomicTable {
            q: self.q,
            m,
            n: self.n,
            alpha_index: self.alpha_index,
            counts,
        }
    }
}

/// The quadratic-form invariants: 4q = u^2 + 27 v^2 for m = 3 and
/// q = u^2 + 4 v^2 for m = 4, with the congruence and gcd side
/// conditions pinning u uniquely. The sign of v is tied to the choice of
/// primitive element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UVPair {
    pub m: u64,
    pub q: u64,
    pub u: i64,
    pub v: i64,
    pub alpha_index: u64,
}

/// One value of the double sum over products of two cyclotomic tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XValue {
    pub m: u64,
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub value: u64,
}

/// Result of the uniformity test for one table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformityReport {
    pub uniform: bool,
    /// Square root of q used by the closed form, sign chosen so that
    /// r = 1 mod m. None when q is not a perfect square (then no closed
    /// form applies) or when the table is not uniform.
    pub r: Option<i64>,
    /// Whether the r-parameterized closed form reproduced the table.
    pub closed_form_verified: Option<bool>,
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// Brute-force cyclotomic numbers: one pass over the discrete-log table.
/// counts[a][b] counts exponents j = a mod m with alpha^j + 1 a nonzero
/// power alpha^k, k = b mod m.
pub fn cyclotomic_numbers(f: &FieldSpec, table: &DlogTable, m: u64) -> Result<CyclotomicTable> {
    let q = f.q();
    if m < 2 || !(q - 1).is_multiple_of(m) {
        return Err(Error::OrderDoesNotDivide {
            m,
            q_minus_1: q - 1,
        });
    }
    let n = (q - 1) / m;
    let mut counts = vec![0u64; (m * m) as usize];
    for j in 0..q - 1 {
        let x = table.pow(j);
        let y = f.index_add(x, 1); // alpha^j + 1, as an element index
        if y == 0 {
            continue;
        }
        let k = table.log(y).expect("nonzero element has a discrete log");
        counts[((j % m) * m + k % m) as usize] += 1;
    }
    Ok(CyclotomicTable {
        q,
        m,
        n,
        alpha_index: table.alpha_index(),
        counts,
    })
}

/// Remainder of n mod 2, as used by the m = 2 and m = 4 closed forms.
fn r_n(n: u64) -> u64 {
    n % 2
}

fn set(counts: &mut [u64], m: u64, a: u64, b: u64, num: i64, den: i64) -> Result<()> {
    if num % den != 0 || num / den < 0 {
        return Err(Error::NonIntegralEntry {
            numerator: num,
            denominator: den,
            a,
            b,
        });
    }
    counts[((a % m) * m + b % m) as usize] = (num / den) as u64;
    Ok(())
}

/// Closed-form table for m in {2, 3, 4}. A UVPair is required for
/// m = 3, 4; its v sign must match the primitive element the caller has
/// in mind (see [`uv_decomposition`]).
pub fn closed_form(m: u64, q: u64, uv: Option<&UVPair>) -> Result<CyclotomicTable> {
    if !(q - 1).is_multiple_of(m) {
        return Err(Error::OrderDoesNotDivide {
            m,
            q_minus_1: q - 1,
        });
    }
    let n = (q - 1) / m;
    let qi = q as i64;
    let ni = n as i64;
    let mut counts = vec![0u64; (m * m) as usize];
    match m {
        2 => {
            let rr = r_n(n);
            let ri = rr as i64;
            set(&mut counts, 2, 0, rr, ni - 2 + 3 * ri, 2)?;
            for (a, b) in [(0, 1 - rr), (1, 0), (1, 1)] {
                set(&mut counts, 2, a, b, ni - ri, 2)?;
            }
        }
        3 => {
            let uv = uv.ok_or(Error::NoClosedForm(3))?;
            let (u, v) = (uv.u, uv.v);
            set(&mut counts, 3, 0, 0, qi - 8 + u, 9)?;
            for (a, b) in [(0, 1), (1, 0), (2, 2)] {
                set(&mut counts, 3, a, b, 2 * qi - 4 - u - 9 * v, 18)?;
            }
            for (a, b) in [(0, 2), (2, 0), (1, 1)] {
                set(&mut counts, 3, a, b, 2 * qi - 4 - u + 9 * v, 18)?;
            }
            for (a, b) in [(1, 2), (2, 1)] {
                set(&mut counts, 3, a, b, qi + 1 + u, 9)?;
            }
        }
        4 => {
            let uv = uv.ok_or(Error::NoClosedForm(4))?;
            let (u, v) = (uv.u, uv.v);
            let rr = r_n(n);
            let ri = rr as i64;
            let sh = 2 * rr; // second index shift
            set(&mut counts, 4, 0, sh, qi - 6 * u - 11 + 12 * ri, 16)?;
            for (a, b) in [(1, 1 + sh), (0, 3 + sh), (3, sh)] {
                set(&mut counts, 4, a, b, qi + 2 * u - 3 - 8 * v + 4 * ri, 16)?;
            }
            for (a, b) in [(2, 2 + sh), (0, 2 + sh), (2, sh)] {
                set(&mut counts, 4, a, b, qi + 2 * u - 3 - 4 * ri, 16)?;
            }
            for (a, b) in [(3, 3 + sh), (0, 1 + sh), (1, sh)] {
                set(&mut counts, 4, a, b, qi + 2 * u - 3 + 8 * v + 4 * ri, 16)?;
            }
            // off-diagonal block over {1,2,3}^2
            for a in 1..4u64 {
                for b in 1..4u64 {
                    if a == b {
                        continue;
                    }
                    set(&mut counts, 4, a, b + sh, qi + 1 - 2 * u - 4 * ri, 16)?;
                }
            }
        }
        other => return Err(Error::NoClosedForm(other)),
    }
    Ok(CyclotomicTable {
        q,
        m,
        n,
        alpha_index: uv.map_or(0, |x| x.alpha_index),
        counts,
    })
}

/// Unique u (with sign) and |v| for the order-3 or order-4 quadratic
/// form, found by exhaustive enumeration of representations. No field
/// data needed; the v sign is left non-negative.
pub fn uv_magnitude(q: u64, p: u64, m: u64) -> Result<(i64, u64)> {
    let (target, vmul, ucong): (i64, i64, i64) = match m {
        3 => (4 * q as i64, 27, 3),
        4 => (q as i64, 4, 4),
        other => return Err(Error::NoClosedForm(other)),
    };
    let p_cong = if m == 3 { p % 3 == 1 } else { p % 4 == 1 };
    let mut found = None;
    let bound = isqrt(target as u64) as i64;
    for u in -bound..=bound {
        if u.rem_euclid(ucong) == 1 && (!p_cong || u.unsigned_abs() % p != 0) {
            let rest = target - u * u;
            if rest % vmul == 0 {
                let vv = (rest / vmul) as u64;
                let cand = isqrt(vv);
                if cand * cand == vv {
                    if let Some((pu, _)) = found {
                        if pu != u {
                            return Err(Error::Internal(format!(
                                "u for q = {q}, m = {m} is not unique: {pu} and {u}"
                            )));
                        }
                    }
                    found = Some((u, cand));
                }
            }
        }
    }
    found.ok_or(Error::NoUvRepresentation(q))
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// u and sign-calibrated v for the primitive element behind `table`.
/// The sign is fixed by matching one brute-force cyclotomic number
/// against the closed form.
pub fn uv_decomposition(f: &FieldSpec, table: &DlogTable, m: u64) -> Result<UVPair> {
    let q = f.q();
    if !(q - 1).is_multiple_of(m) {
        return Err(Error::OrderDoesNotDivide {
            m,
            q_minus_1: q - 1,
        });
    }
    let (u, vabs) = uv_magnitude(q, f.p(), m)?;
    let brute = cyclotomic_numbers(f, table, m)?;
    let qi = q as i64;
    let v = vabs as i64;
    let sign_ok = |v: i64| -> bool {
        match m {
            3 => {
                let num = 2 * qi - 4 - u - 9 * v;
                num % 18 == 0 && num / 18 == brute.get(0, 1) as i64
            }
            4 => {
                let n = (q - 1) / 4;
                let ri = r_n(n) as i64;
                let num = qi + 2 * u - 3 + 8 * v + 4 * ri;
                num % 16 == 0 && num / 16 == brute.get(0, 1 + 2 * ri) as i64
            }
            _ => unreachable!(),
        }
    };
    for cand in [v, -v] {
        if sign_ok(cand) {
            return Ok(UVPair {
                m,
                q,
                u,
                v: cand,
                alpha_index: table.alpha_index(),
            });
        }
    }
    Err(Error::VSignMismatch(q))
}

/// The double sum X^(m)_{i,j,k}(alpha1, alpha2) over products of two
/// cyclotomic tables, with the second table's indices shifted.
pub fn x_sum(t1: &CyclotomicTable, t2: &CyclotomicTable, i: i64, j: i64, k: i64) -> Result<XValue> {
    if t1.m != t2.m {
        return Err(Error::OrderMismatch(t1.m, t2.m));
    }
    Ok(XValue {
        m: t1.m,
        i,
        j,
        k,
        value: x_sum_value(t1, t2, i, j, k),
    })
}

/// Bare value of the double sum; callers that need the indices attached
/// should prefer [`x_sum`].
pub fn x_sum_value(t1: &CyclotomicTable, t2: &CyclotomicTable, i: i64, j: i64, k: i64) -> u64 {
    let m = t1.m as i64;
    let mut acc = 0u64;
    for a in 0..m {
        for b in 0..m {
            acc += t1.get(a, b) * t2.get(a + i - j, b + i - k);
        }
    }
    acc
}

/// Tests the uniformity equalities (all first-row/diagonal entries equal,
/// all remaining off-diagonal entries equal) and, when q is a perfect
/// square, verifies the r-parameterized closed form.
pub fn is_uniform(t: &CyclotomicTable) -> UniformityReport {
    let m = t.m as i64;
    let side = t.get(0, 1);
    let mut uniform = true;
    for i in 1..m {
        if t.get(i, 0) != side || t.get(0, i) != side || t.get(i, i) != side {
            uniform = false;
        }
    }
    let inner = t.get(1, 2 % m.max(1));
    if m >= 3 {
        for i in 1..m {
            for j in 1..m {
                if i != j && t.get(i, j) != inner {
                    uniform = false;
                }
            }
        }
    }
    if !uniform {
        return UniformityReport {
            uniform: false,
            r: None,
            closed_form_verified: None,
        };
    }
    // closed form needs q = r^2 with r = 1 mod m
    let root = (t.q as f64).sqrt().round() as i64;
    let q_is_square = root * root == t.q as i64;
    if !q_is_square {
        return UniformityReport {
            uniform: true,
            r: None,
            closed_form_verified: None,
        };
    }
    let r = [root, -root]
        .into_iter()
        .find(|r| (r - 1).rem_euclid(m) == 0);
    let Some(r) = r else {
        return UniformityReport {
            uniform: true,
            r: None,
            closed_form_verified: None,
        };
    };
    let m2 = m * m;
    let c00 = (r - 1) * (r - 1) - m * (m - 3) * (r - 1) - m2;
    let cside = (r - 1) * (r - 1 + m);
    let cinner = (r - 1) * (r - 1);
    let ok = c00 % m2 == 0
        && cside % m2 == 0
        && cinner % m2 == 0
        && t.get(0, 0) as i64 == c00 / m2
        && (m < 2 || side as i64 == cside / m2)
        && (m < 3 || inner as i64 == cinner / m2);
    UniformityReport {
        uniform: true,
        r: Some(r),
        closed_form_verified: Some(ok),
    }
}

/// Whether -1 is a power of p modulo m (the arithmetic side of the
/// uniformity criterion).
pub fn minus_one_is_power_of_p(p: u64, m: u64) -> bool {
    let target = (m as i64 - 1).rem_euclid(m as i64) as u64;
    let mut acc = 1u64 % m;
    for _ in 0..=m {
        if acc == target {
            return true;
        }
        acc = acc * (p % m) % m;
    }
    false
}
