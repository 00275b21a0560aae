//! Finite abelian groups, connection sets, and group-ring arithmetic.
//!
//! Elements are addressed by a fixed mixed-radix index so that serialized
//! graphs and group-ring vectors are reproducible across runs.

use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Either a product of cyclic groups or the additive group of a product
/// of two fields. Indexing is little-endian mixed radix; for a field
/// pair the index is `idx1 + q1 * idx2`.
#[derive(Debug, Clone)]
pub enum AbelianGroup {
    Cyclic(Vec<u64>),
    FieldPair(FieldSpec, FieldSpec),
}

impl AbelianGroup {
    pub fn cyclic(factors: Vec<u64>) -> AbelianGroup {
        assert!(!factors.is_empty() && factors.iter().all(|&d| d >= 1));
        AbelianGroup::Cyclic(factors)
    }

    pub fn size(&self) -> u64 {
        match self {
            AbelianGroup::Cyclic(fs) => fs.iter().product(),
            AbelianGroup::FieldPair(f1, f2) => f1.q() * f2.q(),
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self {
            AbelianGroup::Cyclic(fs) => {
                let (mut a, mut b) = (a, b);
                let mut out = 0u64;
                let mut place = 1u64;
                for &d in fs {
                    out += ((a % d + b % d) % d) * place;
                    place *= d;
                    a /= d;
                    b /= d;
                }
                out
            }
            AbelianGroup::FieldPair(f1, f2) => {
                let q1 = f1.q();
                let x = f1.index_add(a % q1, b % q1);
                let y = f2.index_add(a / q1, b / q1);
                x + q1 * y
            }
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        match self {
            AbelianGroup::Cyclic(fs) => {
                let mut a = a;
                let mut out = 0u64;
                let mut place = 1u64;
                for &d in fs {
                    out += ((d - a % d) % d) * place;
                    place *= d;
                    a /= d;
                }
                out
            }
            AbelianGroup::FieldPair(f1, f2) => {
                let q1 = f1.q();
                f1.index_neg(a % q1) + q1 * f2.index_neg(a / q1)
            }
        }
    }
}

/// A set of non-identity group elements intended as a Cayley connection
/// set, with a provenance label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionSet {
    members: Vec<u64>,
    label: String,
}

impl ConnectionSet {
    /// Sorts and deduplicates; rejects the identity.
    pub fn new(mut members: Vec<u64>, label: impl Into<String>) -> Result<ConnectionSet> {
        members.sort_unstable();
        members.dedup();
        if members.first() == Some(&0) {
            return Err(Error::IdentityInConnectionSet);
        }
        Ok(ConnectionSet {
            members,
            label: label.into(),
        })
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Checks closure under negation; on failure reports a witness.
    pub fn check_symmetric(&self, g: &AbelianGroup) -> Result<()> {
        for &s in &self.members {
            let neg = g.neg(s);
            if !self.contains(neg) {
                return Err(Error::AsymmetricConnectionSet {
                    element: s,
                    negation: neg,
                });
            }
        }
        Ok(())
    }

    pub fn union(&self, other: &ConnectionSet, label: impl Into<String>) -> Result<ConnectionSet> {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        ConnectionSet::new(members, label)
    }
}

/// An integer vector indexed by group elements: an element of the group
/// ring ZG in the standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingVector(pub Vec<i64>);

impl GroupRingVector {
    pub fn zero(g: &AbelianGroup) -> GroupRingVector {
        GroupRingVector(vec![0; g.size() as usize])
    }

    pub fn indicator(g: &AbelianGroup, elements: &[u64]) -> GroupRingVector {
        let mut v = Self::zero(g);
        for &e in elements {
            v.0[e as usize] += 1;
        }
        v
    }

    pub fn coeff(&self, e: u64) -> i64 {
        self.0[e as usize]
    }
}

/// Convolution over the group: the group-ring product of two vectors.
/// Skips zero coefficients, so sparse inputs cost support(a) * support(b).
pub fn group_ring_mul(
    g: &AbelianGroup,
    a: &GroupRingVector,
    b: &GroupRingVector,
) -> Result<GroupRingVector> {
    let n = g.size() as usize;
    if a.0.len() != n {
        return Err(Error::GroupSizeMismatch {
            got: a.0.len(),
            expected: n,
        });
    }
    if b.0.len() != n {
        return Err(Error::GroupSizeMismatch {
            got: b.0.len(),
            expected: n,
        });
    }
    let mut out = vec![0i64; n];
    for (x, &ca) in a.0.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (y, &cb) in b.0.iter().enumerate() {
            if cb == 0 {
                continue;
            }
            out[g.add(x as u64, y as u64) as usize] += ca * cb;
        }
    }
    Ok(GroupRingVector(out))
}
