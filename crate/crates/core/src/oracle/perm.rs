use std::fmt;

use thiserror::Error;

/// A permutation of the leaf set `{1, …, N}`, stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LeafPermutation {
    images: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleParseError {
    #[error("unexpected character {found:?} at byte {offset}")]
    Unexpected { offset: usize, found: char },
    #[error("point {point} at byte {offset} outside 1..={degree}")]
    PointOutOfRange {
        offset: usize,
        point: usize,
        degree: usize,
    },
    #[error("point {point} repeated at byte {offset}")]
    Repeated { offset: usize, point: usize },
    #[error("unterminated cycle starting at byte {offset}")]
    Unterminated { offset: usize },
}

impl LeafPermutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// From 0-based images; `None` if `images` is not a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self` first, then `other`. Panics on degree mismatch.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "compose: degree mismatch");
        Self {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Nontrivial cycles, 1-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.images[i] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Cycle notation without separators, e.g. `(13)(24)`; only unambiguous
    /// for degree below 10, otherwise falls back to the spaced form.
    pub fn to_compact_string(&self) -> String {
        if self.degree() >= 10 {
            return self.to_string();
        }
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles
            .iter()
            .map(|c| {
                let digits: String = c.iter().map(|p| p.to_string()).collect();
                format!("({digits})")
            })
            .collect()
    }

    /// Parses cycle notation on `{1, …, degree}`. Points inside a cycle are
    /// separated by spaces or commas; a cycle written without separators is
    /// read digit by digit. `()`, `e` and the empty string denote the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, CycleParseError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut moved = vec![false; degree];
        let bytes = text.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        skip_ws(&mut pos);
        if text.trim() == "e" {
            return Ok(Self { images });
        }
        while pos < bytes.len() {
            if bytes[pos] != b'(' {
                return Err(CycleParseError::Unexpected {
                    offset: pos,
                    found: text[pos..].chars().next().unwrap_or('?'),
                });
            }
            let open = pos;
            let close = text[open..]
                .find(')')
                .map(|i| open + i)
                .ok_or(CycleParseError::Unterminated { offset: open })?;
            let body = &text[open + 1..close];
            let mut points: Vec<(usize, usize)> = Vec::new();
            let separated = body.contains(|c: char| c.is_whitespace() || c == ',');
            if separated {
                let mut start = None;
                for (i, c) in body.char_indices().chain([(body.len(), ' ')]) {
                    if c.is_ascii_digit() {
                        start.get_or_insert(i);
                    } else if c.is_whitespace() || c == ',' {
                        if let Some(s) = start.take() {
                            let point = body[s..i].parse().unwrap_or(usize::MAX);
                            points.push((open + 1 + s, point));
                        }
                    } else {
                        return Err(CycleParseError::Unexpected {
                            offset: open + 1 + i,
                            found: c,
                        });
                    }
                }
            } else {
                for (i, c) in body.char_indices() {
                    let d = c.to_digit(10).ok_or(CycleParseError::Unexpected {
                        offset: open + 1 + i,
                        found: c,
                    })?;
                    points.push((open + 1 + i, d as usize));
                }
            }
            for &(offset, point) in &points {
                if point == 0 || point > degree {
                    return Err(CycleParseError::PointOutOfRange {
                        offset,
                        point,
                        degree,
                    });
                }
                if std::mem::replace(&mut moved[point - 1], true) {
                    return Err(CycleParseError::Repeated { offset, point });
                }
            }
            for w in 0..points.len() {
                let from = points[w].1 - 1;
                let to = points[(w + 1) % points.len()].1 - 1;
                images[from] = to as u32;
            }
            pos = close + 1;
            skip_ws(&mut pos);
        }
        Ok(Self { images })
    }
}

impl fmt::Display for LeafPermutation {
    /// Spaced cycle notation with 1-based points, e.g. `(1 3)(2 4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}
