//! Integer partitions (Young diagrams given by row lengths).

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Build from row lengths; trailing zeros are dropped. Returns `None` if
    /// the rows are not weakly decreasing.
    pub fn new(mut parts: Vec<usize>) -> Option<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Some(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    /// The rectangle (c^a): `a` rows of length `c`.
    pub fn rectangle(c: usize, a: usize) -> Self {
        if c == 0 {
            return Partition::empty();
        }
        Partition { parts: vec![c; a] }
    }

    /// (c^a, 1): the rectangle with one extra box in row a+1.
    pub fn rectangle_plus_one(c: usize, a: usize) -> Self {
        let mut parts = vec![c; a];
        parts.push(1);
        Partition::new(parts).expect("c >= 1")
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Row i (1-based); zero past the end.
    pub fn row(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=width)
            .map(|j| self.parts.iter().filter(|&&r| r >= j).count())
            .collect();
        Partition { parts }
    }

    /// m_j: number of columns of length exactly j, for j = 1..=len.
    pub fn column_multiplicities(&self) -> Vec<usize> {
        let h = self.len();
        (1..=h)
            .map(|j| self.row(j) - self.row(j + 1))
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
