//! Box-ball configurations and their time evolution.

use std::fmt;

use crate::error::{Error, Result};
use crate::tableau::{Carrier, Letter};

/// A finitely supported box-ball configuration on sites 1, 2, ...
///
/// Trailing zeros are never stored, so two configurations compare equal iff
/// they agree on every site.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    kappa: usize,
    cells: Vec<Letter>,
}

/// A maximal non-increasing block of balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Soliton {
    /// Colors, non-increasing left to right.
    pub colors: Vec<Letter>,
    /// 1-based site of the leftmost ball.
    pub position: usize,
}

impl Soliton {
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

impl Configuration {
    pub fn new(kappa: usize, cells: Vec<Letter>) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::InvalidParameter("kappa must be at least 1".into()));
        }
        if let Some(&bad) = cells.iter().find(|&&v| v as usize > kappa) {
            return Err(Error::LetterOutOfRange { letter: bad as usize, kappa });
        }
        Ok(Self::from_raw(kappa, cells))
    }

    pub(crate) fn from_raw(kappa: usize, mut cells: Vec<Letter>) -> Self {
        while cells.last() == Some(&0) {
            cells.pop();
        }
        Configuration { kappa, cells }
    }

    pub fn empty(kappa: usize) -> Self {
        Configuration { kappa, cells: Vec::new() }
    }

    /// Parse contiguous digits (whitespace ignored) or comma-separated
    /// integers. A trailing `...` or `…` is allowed. With `kappa = None` the
    /// largest letter is used (at least 1).
    pub fn parse(s: &str, kappa: Option<usize>) -> Result<Self> {
        let mut body = s.trim_end();
        for tail in ["…", "..."] {
            if let Some(b) = body.strip_suffix(tail) {
                body = b;
            }
        }
        let mut cells = Vec::new();
        if body.contains(',') {
            let mut col = 0;
            for tok in body.split(',') {
                let t = tok.trim();
                if !t.is_empty() {
                    let v: u32 = t.parse().map_err(|_| Error::Parse {
                        column: col + 1,
                        message: format!("bad letter {t:?}"),
                    })?;
                    if v > Letter::MAX as u32 {
                        return Err(Error::Parse { column: col + 1, message: "letter too large".into() });
                    }
                    cells.push(v as Letter);
                }
                col += tok.chars().count() + 1;
            }
        } else {
            for (k, ch) in body.chars().enumerate() {
                if ch.is_whitespace() {
                    continue;
                }
                let v = ch.to_digit(10).ok_or(Error::Parse {
                    column: k + 1,
                    message: format!("bad letter {ch:?}"),
                })?;
                cells.push(v as Letter);
            }
        }
        let max = cells.iter().copied().max().unwrap_or(0) as usize;
        let kappa = kappa.unwrap_or(max.max(1));
        Configuration::new(kappa, cells)
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    /// Occupied prefix: sites 1..=len, the last one nonzero.
    pub fn cells(&self) -> &[Letter] {
        &self.cells
    }

    pub fn support_len(&self) -> usize {
        self.cells.len()
    }

    /// Letter at 1-based site x.
    pub fn get(&self, x: usize) -> Letter {
        if x == 0 {
            return 0;
        }
        self.cells.get(x - 1).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of balls of each color 1..=κ (index 0 is color 1).
    pub fn ball_counts(&self) -> Vec<usize> {
        let mut m = vec![0; self.kappa];
        for &v in &self.cells {
            if v > 0 {
                m[v as usize - 1] += 1;
            }
        }
        m
    }

    pub fn total_balls(&self) -> usize {
        self.cells.iter().filter(|&&v| v > 0).count()
    }

    /// K_a: move each color-a ball, left to right, to the leftmost empty
    /// site on its right.
    pub fn apply_k(&self, a: usize) -> Result<Configuration> {
        if a == 0 || a > self.kappa {
            return Err(Error::ColorOutOfRange { color: a, kappa: self.kappa });
        }
        let mut cells = self.cells.clone();
        self.apply_k_in_place(&mut cells, a as Letter);
        Ok(Self::from_raw(self.kappa, cells))
    }

    fn apply_k_in_place(&self, cells: &mut Vec<Letter>, a: Letter) {
        let n_a = cells.iter().filter(|&&v| v == a).count();
        cells.resize(cells.len() + n_a, 0);
        // Balls of one color are interchangeable, so the set of landing
        // sites is what matters: a left-to-right sweep that picks up every
        // a-ball and drops one into each originally empty site gives it.
        let mut carried = 0usize;
        for v in cells.iter_mut() {
            if *v == a {
                carried += 1;
                // The site stays occupied until this ball leaves, so no
                // earlier ball can land here.
                *v = 0;
            } else if *v == 0 && carried > 0 {
                *v = a;
                carried -= 1;
            }
        }
        debug_assert_eq!(carried, 0);
    }

    /// One time step X -> K_1 ∘ ... ∘ K_κ(X).
    pub fn evolve(&self) -> Configuration {
        let mut cells = self.cells.clone();
        for a in (1..=self.kappa as Letter).rev() {
            self.apply_k_in_place(&mut cells, a);
            while cells.last() == Some(&0) {
                cells.pop();
            }
        }
        Self::from_raw(self.kappa, cells)
    }

    pub fn evolve_steps(&self, t: usize) -> Configuration {
        let mut x = self.clone();
        for _ in 0..t {
            x = x.evolve();
        }
        x
    }

    /// The configuration emitted by a B_c^(a) carrier swept from the left,
    /// starting at the ground state. For a = 1 and c at least the number of
    /// balls this is one time step.
    pub fn evolve_by_carrier(&self, a: usize, c: usize) -> Result<Configuration> {
        if a == 0 || a > self.kappa {
            return Err(Error::ColorOutOfRange { color: a, kappa: self.kappa });
        }
        if c == 0 {
            return Err(Error::InvalidParameter("carrier capacity must be positive".into()));
        }
        let mut carrier = Carrier::ground(a, c, self.kappa);
        let mut out = Vec::with_capacity(self.cells.len() + c);
        for &x in &self.cells {
            out.push(carrier.absorb(x).0);
        }
        while !carrier.top_row_empty() {
            out.push(carrier.absorb(0).0);
        }
        Ok(Self::from_raw(self.kappa, out))
    }

    /// Maximal non-increasing runs of balls, left to right.
    pub fn blocks(&self) -> Vec<Soliton> {
        let mut out: Vec<Soliton> = Vec::new();
        let mut prev: Letter = 0;
        for (k, &v) in self.cells.iter().enumerate() {
            if v == 0 {
                prev = 0;
                continue;
            }
            if prev != 0 && v <= prev {
                out.last_mut().unwrap().colors.push(v);
            } else {
                out.push(Soliton { colors: vec![v], position: k + 1 });
            }
            prev = v;
        }
        out
    }

    /// The soliton decomposition, if the configuration is already
    /// decomposed: block lengths weakly increase left to right and one time
    /// step moves every block rigidly by its own length.
    pub fn solitons(&self) -> Option<Vec<Soliton>> {
        let blocks = self.blocks();
        if blocks.windows(2).any(|w| w[0].len() > w[1].len()) {
            return None;
        }
        let shifted_len = blocks.last().map_or(0, |b| b.position - 1 + 2 * b.len());
        let mut shifted = vec![0; shifted_len];
        for b in &blocks {
            let start = b.position - 1 + b.len();
            shifted[start..start + b.len()].copy_from_slice(&b.colors);
        }
        if Self::from_raw(self.kappa, shifted) == self.evolve() {
            Some(blocks)
        } else {
            None
        }
    }

    /// Paper-style line: letters separated by single spaces, padded with
    /// zeros to `width` sites.
    pub fn to_spaced(&self, width: usize) -> String {
        let n = width.max(self.cells.len());
        (1..=n).map(|x| self.get(x).to_string()).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kappa > 9 {
            let s: Vec<String> = self.cells.iter().map(|v| v.to_string()).collect();
            f.write_str(&s.join(","))
        } else {
            for v in &self.cells {
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration(κ={}, {})", self.kappa, self)
    }
}
