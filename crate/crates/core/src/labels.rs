//! Storage for one level of a portrait.
//!
//! Binary levels pack one bit per vertex; every other arity uses a byte per
//! vertex. Unused high bits of the last word are always zero so that derived
//! equality and hashing are canonical.

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) enum Labels {
    Bits { len: usize, words: Vec<u64> },
    Bytes(Vec<u8>),
}

impl Labels {
    pub(crate) fn zeros(arity: u32, len: usize) -> Self {
        if arity == 2 {
            Labels::Bits {
                len,
                words: vec![0; len.div_ceil(64)],
            }
        } else {
            Labels::Bytes(vec![0; len])
        }
    }

    /// Builds a level from a label function. Values must already be reduced.
    pub(crate) fn from_fn(arity: u32, len: usize, mut f: impl FnMut(usize) -> u32) -> Self {
        if arity == 2 {
            let mut words = vec![0u64; len.div_ceil(64)];
            for (w, word) in words.iter_mut().enumerate() {
                let base = w * 64;
                let end = (base + 64).min(len);
                let mut acc = 0u64;
                for i in base..end {
                    acc |= ((f(i) & 1) as u64) << (i - base);
                }
                *word = acc;
            }
            Labels::Bits { len, words }
        } else {
            Labels::Bytes((0..len).map(|i| f(i) as u8).collect())
        }
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            Labels::Bits { len, .. } => *len,
            Labels::Bytes(v) => v.len(),
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> u32 {
        match self {
            Labels::Bits { words, .. } => ((words[i >> 6] >> (i & 63)) & 1) as u32,
            Labels::Bytes(v) => v[i] as u32,
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, value: u32) {
        match self {
            Labels::Bits { words, .. } => {
                let mask = 1u64 << (i & 63);
                if value & 1 == 1 {
                    words[i >> 6] |= mask;
                } else {
                    words[i >> 6] &= !mask;
                }
            }
            Labels::Bytes(v) => v[i] = value as u8,
        }
    }

    pub(crate) fn count_nonzero(&self) -> usize {
        match self {
            Labels::Bits { words, .. } => words.iter().map(|w| w.count_ones() as usize).sum(),
            Labels::Bytes(v) => v.iter().filter(|&&b| b != 0).count(),
        }
    }

    pub(crate) fn count_nonzero_in(&self, start: usize, end: usize) -> usize {
        (start..end).filter(|&i| self.get(i) != 0).count()
    }

    pub(crate) fn is_zero(&self) -> bool {
        match self {
            Labels::Bits { words, .. } => words.iter().all(|&w| w == 0),
            Labels::Bytes(v) => v.iter().all(|&b| b == 0),
        }
    }

    pub(crate) fn is_zero_in(&self, start: usize, end: usize) -> bool {
        (start..end).all(|i| self.get(i) == 0)
    }

    /// Copies the labels at `start..start + len` into a new level.
    pub(crate) fn slice(&self, start: usize, len: usize) -> Self {
        match self {
            Labels::Bits { words, .. } if start.is_multiple_of(64) => {
                let first = start / 64;
                let mut out = words[first..first + len.div_ceil(64)].to_vec();
                if !len.is_multiple_of(64) {
                    if let Some(last) = out.last_mut() {
                        *last &= (1u64 << (len % 64)) - 1;
                    }
                }
                Labels::Bits { len, words: out }
            }
            Labels::Bits { .. } => Labels::from_fn(2, len, |i| self.get(start + i)),
            Labels::Bytes(v) => Labels::Bytes(v[start..start + len].to_vec()),
        }
    }

    /// Concatenates levels of the same storage kind.
    pub(crate) fn concat<'a>(arity: u32, parts: impl IntoIterator<Item = &'a Labels>) -> Self {
        let parts: Vec<&Labels> = parts.into_iter().collect();
        let len: usize = parts.iter().map(|p| p.len()).sum();
        if arity != 2 {
            let mut out = Vec::with_capacity(len);
            for p in parts {
                match p {
                    Labels::Bytes(v) => out.extend_from_slice(v),
                    Labels::Bits { .. } => out.extend((0..p.len()).map(|i| p.get(i) as u8)),
                }
            }
            return Labels::Bytes(out);
        }
        let mut out = Labels::zeros(2, len);
        let mut offset = 0;
        for p in parts {
            match (p, &mut out) {
                (Labels::Bits { words: src, .. }, Labels::Bits { words: dst, .. })
                    if offset % 64 == 0 =>
                {
                    let w = offset / 64;
                    dst[w..w + src.len()].copy_from_slice(src);
                }
                _ => {
                    for i in 0..p.len() {
                        out.set(offset + i, p.get(i));
                    }
                }
            }
            offset += p.len();
        }
        out
    }
}
