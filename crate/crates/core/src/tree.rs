//! Rooted-tree automorphisms given by portraits.
//!
//! A [`TreeAut`] stores one label per vertex on every level `0..depth`; the
//! label `e` of a vertex on level `l` stands for `σ^e`, where
//! `σ(i) = i + 1 mod p_{l+1}` on the (0-based) child positions. The element
//! acts on a word `x w` by `g(x w) = σ_g(x) · g|_x(w)`, so the label at a
//! vertex is the root permutation of the section there.
//!
//! Products compose left to right: in `g · h` the factor `g` acts first. This
//! is exactly the wreath recursion
//! `g · h = (g|_1 h|_{σ_g(1)}, …, g|_d h|_{σ_g(d)}) σ_g σ_h`.
//! Conjugation and commutators follow `a^b = b a b⁻¹` and
//! `[a, b] = a b a⁻¹ b⁻¹`; most algebra systems use other conventions.

use std::fmt;
use std::ops::Mul;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, WreathError};
use crate::labels::Labels;
use crate::signature::AritySignature;

/// An automorphism of the finite rooted tree described by its signature.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeAut {
    sig: AritySignature,
    levels: Vec<Labels>,
}

/// Per-level counts of active (nonzero-labelled) vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelIndexProfile {
    /// `counts[l]` is the number of active vertices on level `l`.
    pub counts: Vec<usize>,
    /// `per_subtree[l][i]` counts the active level-`l` vertices below the
    /// `i`-th child of the root. Empty for `l = 0`.
    pub per_subtree: Vec<Vec<usize>>,
}

impl LevelIndexProfile {
    pub fn depth(&self) -> usize {
        self.counts.len()
    }

    pub fn all_even(&self) -> bool {
        self.counts.iter().all(|c| c % 2 == 0)
    }
}

impl TreeAut {
    pub fn identity(sig: &AritySignature) -> Self {
        let levels = (0..sig.depth())
            .map(|l| Labels::zeros(sig.arity(l), sig.vertex_count(l)))
            .collect();
        Self {
            sig: sig.clone(),
            levels,
        }
    }

    /// Builds an element from explicit per-level label vectors.
    pub fn from_levels(sig: &AritySignature, labels: &[Vec<u32>]) -> Result<Self> {
        if labels.len() != sig.depth() {
            return Err(WreathError::ArityMismatch {
                expected: sig.depth(),
                got: labels.len(),
            });
        }
        let mut levels = Vec::with_capacity(sig.depth());
        for (l, row) in labels.iter().enumerate() {
            let p = sig.arity(l);
            if row.len() != sig.vertex_count(l) {
                return Err(WreathError::ArityMismatch {
                    expected: sig.vertex_count(l),
                    got: row.len(),
                });
            }
            if let Some((vertex, &label)) = row.iter().enumerate().find(|(_, &e)| e >= p) {
                return Err(WreathError::LabelOutOfRange {
                    level: l,
                    vertex,
                    label,
                    arity: p,
                });
            }
            levels.push(Labels::from_fn(p, row.len(), |i| row[i]));
        }
        Ok(Self {
            sig: sig.clone(),
            levels,
        })
    }

    /// Copy of `self` with one label replaced.
    pub fn with_label(&self, level: usize, vertex: usize, label: u32) -> Result<Self> {
        if level >= self.depth() {
            return Err(WreathError::LevelOutOfRange {
                level,
                depth: self.depth(),
            });
        }
        let p = self.sig.arity(level);
        if vertex >= self.sig.vertex_count(level) || label >= p {
            return Err(WreathError::LabelOutOfRange {
                level,
                vertex,
                label,
                arity: p,
            });
        }
        let mut out = self.clone();
        out.levels[level].set(vertex, label);
        Ok(out)
    }

    pub fn signature(&self) -> &AritySignature {
        &self.sig
    }

    pub fn depth(&self) -> usize {
        self.sig.depth()
    }

    /// Label of vertex `vertex` (lexicographic rank) on `level`.
    pub fn label(&self, level: usize, vertex: usize) -> u32 {
        self.levels[level].get(vertex)
    }

    pub fn level_labels(&self, level: usize) -> Vec<u32> {
        let l = &self.levels[level];
        (0..l.len()).map(|i| l.get(i)).collect()
    }

    pub fn root_label(&self) -> u32 {
        if self.depth() == 0 {
            0
        } else {
            self.levels[0].get(0)
        }
    }

    pub fn is_identity(&self) -> bool {
        self.levels.iter().all(Labels::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(WreathError::SignatureMismatch {
                left: self.sig.clone(),
                right: other.sig.clone(),
            });
        }
        Ok(())
    }

    /// `self · other`: `self` acts first.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, h: &Self) -> Self {
        let k = self.depth();
        let mut levels = Vec::with_capacity(k);
        // pos[v] is the image under self of vertex v on the current level
        let mut pos: Vec<u32> = vec![0];
        let mut next: Vec<u32> = Vec::new();
        for l in 0..k {
            let p = self.sig.arity(l);
            let (gl, hl) = (&self.levels[l], &h.levels[l]);
            let n = pos.len();
            let out = if p == 2 {
                Labels::from_fn(2, n, |v| gl.get(v) ^ hl.get(pos[v] as usize))
            } else {
                Labels::from_fn(p, n, |v| (gl.get(v) + hl.get(pos[v] as usize)) % p)
            };
            levels.push(out);
            if l + 1 < k {
                next.clear();
                next.reserve(n * p as usize);
                for (v, &image) in pos.iter().enumerate() {
                    let e = gl.get(v);
                    let base = image * p;
                    if p == 2 {
                        next.push(base + e);
                        next.push(base + (1 ^ e));
                    } else {
                        next.extend((0..p).map(|i| base + (i + e) % p));
                    }
                }
                std::mem::swap(&mut pos, &mut next);
            }
        }
        Self {
            sig: self.sig.clone(),
            levels,
        }
    }

    pub fn inverse(&self) -> Self {
        let k = self.depth();
        let mut levels = Vec::with_capacity(k);
        let mut pos: Vec<u32> = vec![0];
        let mut next: Vec<u32> = Vec::new();
        for l in 0..k {
            let p = self.sig.arity(l);
            let gl = &self.levels[l];
            // g⁻¹|_{g(v)} = (g|_v)⁻¹
            let mut out = Labels::zeros(p, pos.len());
            for (v, &image) in pos.iter().enumerate() {
                let e = gl.get(v);
                if e != 0 {
                    out.set(image as usize, p - e);
                }
            }
            levels.push(out);
            if l + 1 < k {
                next.clear();
                next.reserve(pos.len() * p as usize);
                for (v, &image) in pos.iter().enumerate() {
                    let e = gl.get(v);
                    next.extend((0..p).map(|i| image * p + (i + e) % p));
                }
                std::mem::swap(&mut pos, &mut next);
            }
        }
        Self {
            sig: self.sig.clone(),
            levels,
        }
    }

    /// `self^by = by · self · by⁻¹`.
    pub fn conjugate(&self, by: &Self) -> Result<Self> {
        self.check_same(by)?;
        Ok(by.mul_unchecked(self).mul_unchecked(&by.inverse()))
    }

    /// `[self, other] = self · other · self⁻¹ · other⁻¹`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self
            .mul_unchecked(other)
            .mul_unchecked(&self.inverse())
            .mul_unchecked(&other.inverse()))
    }

    pub fn square(&self) -> Self {
        self.mul_unchecked(self)
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::identity(&self.sig);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.square();
            n >>= 1;
        }
        acc
    }

    /// Section (state) at a vertex given by 1-based child indices.
    pub fn section(&self, address: &[usize]) -> Result<Self> {
        let m = address.len();
        let bad = || WreathError::InvalidAddress {
            address: address.to_vec(),
            signature: self.sig.clone(),
        };
        if m > self.depth() {
            return Err(bad());
        }
        let mut j = 0usize;
        for (l, &c) in address.iter().enumerate() {
            let p = self.sig.arity(l) as usize;
            if c == 0 || c > p {
                return Err(bad());
            }
            j = j * p + (c - 1);
        }
        Ok(self.section_at(m, j))
    }

    /// Section at the vertex with flat index `vertex` on `level`.
    pub(crate) fn section_at(&self, level: usize, vertex: usize) -> Self {
        let sig = self.sig.truncated(level);
        let below = self.sig.vertex_count(level);
        let levels = (level..self.depth())
            .map(|l| {
                let size = self.sig.vertex_count(l) / below;
                self.levels[l].slice(vertex * size, size)
            })
            .collect();
        Self { sig, levels }
    }

    /// Wreath recursion `g = (g|_1, …, g|_p) σ^e`: returns `e` and the
    /// level-1 sections in child order.
    pub fn decompose(&self) -> Result<(u32, Vec<Self>)> {
        if self.depth() == 0 {
            return Err(WreathError::DepthZero);
        }
        let p = self.sig.arity(0) as usize;
        let sections = (0..p).map(|i| self.section_at(1, i)).collect();
        Ok((self.levels[0].get(0), sections))
    }

    /// Inverse of [`decompose`](Self::decompose).
    pub fn compose_from(power: u32, sections: &[Self], arity: u32) -> Result<Self> {
        if sections.len() != arity as usize || sections.is_empty() {
            return Err(WreathError::ArityMismatch {
                expected: arity as usize,
                got: sections.len(),
            });
        }
        let inner = &sections[0].sig;
        if let Some(s) = sections.iter().find(|s| &s.sig != inner) {
            return Err(WreathError::SignatureMismatch {
                left: inner.clone(),
                right: s.sig.clone(),
            });
        }
        if power >= arity {
            return Err(WreathError::PowerOutOfRange { power, arity });
        }
        let sig = inner.extended(arity)?;
        let mut levels = Vec::with_capacity(sig.depth());
        levels.push(Labels::from_fn(arity, 1, |_| power));
        for t in 0..inner.depth() {
            levels.push(Labels::concat(
                inner.arity(t),
                sections.iter().map(|s| &s.levels[t]),
            ));
        }
        Ok(Self { sig, levels })
    }

    /// `In_l(g)`: number of active vertices on level `l`.
    pub fn level_index(&self, level: usize) -> Result<usize> {
        if level >= self.depth() {
            return Err(WreathError::LevelOutOfRange {
                level,
                depth: self.depth(),
            });
        }
        Ok(self.levels[level].count_nonzero())
    }

    /// Number of active vertices on `level` lying below the level-`from`
    /// vertex with flat index `vertex`.
    pub(crate) fn level_index_below(&self, level: usize, from: usize, vertex: usize) -> usize {
        let size = self.sig.vertex_count(level) / self.sig.vertex_count(from);
        self.levels[level].count_nonzero_in(vertex * size, (vertex + 1) * size)
    }

    /// True if every label strictly below the given vertex is zero.
    pub(crate) fn subtree_is_trivial_below(&self, level: usize, vertex: usize) -> bool {
        let here = self.sig.vertex_count(level);
        (level + 1..self.depth()).all(|l| {
            let size = self.sig.vertex_count(l) / here;
            self.levels[l].is_zero_in(vertex * size, (vertex + 1) * size)
        })
    }

    pub fn level_profile(&self) -> LevelIndexProfile {
        let k = self.depth();
        let counts = self.levels.iter().map(Labels::count_nonzero).collect();
        let per_subtree = (0..k)
            .map(|l| {
                if l == 0 {
                    Vec::new()
                } else {
                    (0..self.sig.arity(0) as usize)
                        .map(|i| self.level_index_below(l, 1, i))
                        .collect()
                }
            })
            .collect();
        LevelIndexProfile {
            counts,
            per_subtree,
        }
    }

    /// Uniform random element: independent uniform labels per vertex.
    pub fn random_with<R: Rng + ?Sized>(sig: &AritySignature, rng: &mut R) -> Self {
        let levels = (0..sig.depth())
            .map(|l| {
                let p = sig.arity(l);
                let n = sig.vertex_count(l);
                if p == 2 {
                    let mut words: Vec<u64> = (0..n.div_ceil(64)).map(|_| rng.gen()).collect();
                    if !n.is_multiple_of(64) {
                        if let Some(last) = words.last_mut() {
                            *last &= (1u64 << (n % 64)) - 1;
                        }
                    }
                    Labels::Bits { len: n, words }
                } else {
                    Labels::from_fn(p, n, |_| rng.gen_range(0..p))
                }
            })
            .collect();
        Self {
            sig: sig.clone(),
            levels,
        }
    }

    /// Deterministic uniform sample seeded by `seed`.
    pub fn random(sig: &AritySignature, seed: u64) -> Self {
        Self::random_with(sig, &mut ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Mul for &TreeAut {
    type Output = TreeAut;

    /// Panics on signature mismatch; use [`TreeAut::multiply`] for a
    /// fallible product.
    fn mul(self, rhs: &TreeAut) -> TreeAut {
        self.multiply(rhs).expect("multiply: signature mismatch")
    }
}

impl fmt::Debug for TreeAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreeAut({})[", self.sig)?;
        for l in 0..self.depth() {
            if l > 0 {
                f.write_str("|")?;
            }
            let labels = self.level_labels(l);
            if self.sig.arity(l) == 2 {
                for e in labels {
                    write!(f, "{e}")?;
                }
            } else {
                let parts: Vec<String> = labels.iter().map(u32::to_string).collect();
                f.write_str(&parts.join(","))?;
            }
        }
        f.write_str("]")
    }
}
