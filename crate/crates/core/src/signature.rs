use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Result, WreathError};

/// Largest supported vertex arity; labels are stored in a byte.
pub const MAX_ARITY: u32 = 256;

/// Upper bound on the total number of labelled vertices in a portrait.
pub const MAX_LABELS: usize = 1 << 30;

/// The arity sequence `(p_1, …, p_k)` of an iterated wreath product of cyclic
/// groups, which is also the shape of the rooted tree it acts on.
///
/// Level `l` (root is level 0) has `p_1 · … · p_l` vertices, each carrying a
/// label in `Z_{p_{l+1}}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AritySignature {
    arities: Arc<[u32]>,
}

impl AritySignature {
    pub fn new(arities: impl Into<Vec<u32>>) -> Result<Self> {
        let arities: Vec<u32> = arities.into();
        let mut vertices: usize = 1;
        let mut total: usize = 0;
        for (l, &p) in arities.iter().enumerate() {
            if !(2..=MAX_ARITY).contains(&p) {
                return Err(WreathError::InvalidSignature(format!(
                    "arity {p} at level {l} must lie in 2..={MAX_ARITY}"
                )));
            }
            total = total
                .checked_add(vertices)
                .filter(|&t| t <= MAX_LABELS)
                .ok_or_else(|| {
                    WreathError::InvalidSignature(format!(
                        "portrait would exceed {MAX_LABELS} labels"
                    ))
                })?;
            vertices = vertices.saturating_mul(p as usize);
        }
        Ok(Self {
            arities: arities.into(),
        })
    }

    /// `k` copies of arity 2: the tree of `B_k`.
    pub fn binary(depth: usize) -> Result<Self> {
        Self::new(vec![2; depth])
    }

    pub fn trivial() -> Self {
        Self {
            arities: Arc::from(Vec::new()),
        }
    }

    pub fn depth(&self) -> usize {
        self.arities.len()
    }

    pub fn arities(&self) -> &[u32] {
        &self.arities
    }

    /// Arity `p_{l+1}` of the vertices on level `l`.
    pub fn arity(&self, level: usize) -> u32 {
        self.arities[level]
    }

    pub fn is_binary(&self) -> bool {
        self.arities.iter().all(|&p| p == 2)
    }

    /// Number of vertices on level `l`, for `0 <= l <= depth`.
    pub fn vertex_count(&self, level: usize) -> usize {
        self.arities[..level].iter().map(|&p| p as usize).product()
    }

    pub fn leaf_count(&self) -> usize {
        self.vertex_count(self.depth())
    }

    /// Total number of labelled vertices (levels `0..depth`).
    pub fn label_count(&self) -> usize {
        (0..self.depth()).map(|l| self.vertex_count(l)).sum()
    }

    /// Signature of the subtree hanging below a vertex on level `from`.
    pub fn truncated(&self, from: usize) -> Self {
        Self {
            arities: Arc::from(&self.arities[from.min(self.depth())..]),
        }
    }

    /// Signature with `root_arity` prepended.
    pub fn extended(&self, root_arity: u32) -> Result<Self> {
        let mut v = Vec::with_capacity(self.depth() + 1);
        v.push(root_arity);
        v.extend_from_slice(&self.arities);
        Self::new(v)
    }

    /// Group order `∏_l p_{l+1}^{vertex_count(l)}`, if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        let mut order: u64 = 1;
        for l in 0..self.depth() {
            let p = self.arity(l) as u64;
            let n = u32::try_from(self.vertex_count(l)).ok()?;
            order = order.checked_mul(p.checked_pow(n)?)?;
        }
        Some(order)
    }

    /// Base-2 logarithm of the group order, always representable.
    pub fn log2_order(&self) -> f64 {
        (0..self.depth())
            .map(|l| self.vertex_count(l) as f64 * (self.arity(l) as f64).log2())
            .sum()
    }
}

impl fmt::Display for AritySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.arities.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AritySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for AritySignature {
    type Err = WreathError;

    /// Parses `"2,2,2"`; the empty string is the depth-0 signature.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::trivial());
        }
        let arities = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| WreathError::InvalidSignature(format!("bad arity {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(arities)
    }
}
