//! Semistandard tableaux, Schensted insertion and the combinatorial R on
//! rectangle-times-single-box.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A box state: 0 is empty, 1..=κ are ball colors.
pub type Letter = u8;

/// Rectangular semistandard tableau with `a` rows and `c` columns.
///
/// Rows weakly increase and columns strictly increase; every value of this
/// type satisfies both.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    a: usize,
    c: usize,
    cells: Vec<Letter>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<Letter>>) -> Result<Self> {
        let a = rows.len();
        if a == 0 {
            return Err(Error::InvalidTableau("no rows".into()));
        }
        let c = rows[0].len();
        if c == 0 {
            return Err(Error::InvalidTableau("empty row".into()));
        }
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::InvalidTableau("rows of unequal length".into()));
        }
        let cells: Vec<Letter> = rows.into_iter().flatten().collect();
        let t = Tableau { a, c, cells };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        for i in 0..self.a {
            for j in 0..self.c {
                let v = self.get(i, j);
                if j + 1 < self.c && v > self.get(i, j + 1) {
                    return Err(Error::InvalidTableau(format!(
                        "row {} decreases at column {}",
                        i + 1,
                        j + 1
                    )));
                }
                if i + 1 < self.a && v >= self.get(i + 1, j) {
                    return Err(Error::InvalidTableau(format!(
                        "column {} not strictly increasing at row {}",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// U_c^(a): row i (1-based) filled with i-1.
    pub fn ground(a: usize, c: usize) -> Self {
        assert!(a >= 1 && c >= 1);
        let cells = (0..a).flat_map(|i| std::iter::repeat_n(i as Letter, c)).collect();
        Tableau { a, c, cells }
    }

    /// V_c^(a): the bottom row filled with κ, the one above with κ-1, and so on.
    pub fn lowest(a: usize, c: usize, kappa: usize) -> Self {
        assert!(a >= 1 && c >= 1 && a <= kappa + 1);
        let cells = (0..a)
            .flat_map(|i| std::iter::repeat_n((kappa + 1 - a + i) as Letter, c))
            .collect();
        Tableau { a, c, cells }
    }

    pub fn height(&self) -> usize {
        self.a
    }

    pub fn width(&self) -> usize {
        self.c
    }

    /// Entry at (row, column), both 0-based.
    pub fn get(&self, i: usize, j: usize) -> Letter {
        self.cells[i * self.c + j]
    }

    pub fn row(&self, i: usize) -> &[Letter] {
        &self.cells[i * self.c..(i + 1) * self.c]
    }

    pub fn rows(&self) -> Vec<Vec<Letter>> {
        (0..self.a).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn bottom_left(&self) -> Letter {
        self.get(self.a - 1, 0)
    }

    pub fn max_letter(&self) -> Letter {
        self.get(self.a - 1, self.c - 1)
    }

    /// m_i: number of entries equal to i, for i in 0..=kappa.
    pub fn letter_counts(&self, kappa: usize) -> Vec<usize> {
        let mut m = vec![0; kappa + 1];
        for &v in &self.cells {
            m[v as usize] += 1;
        }
        m
    }

    /// Rows concatenated from the bottom row up.
    pub fn row_word(&self) -> Vec<Letter> {
        (0..self.a).rev().flat_map(|i| self.row(i).iter().copied()).collect()
    }

    pub fn reverse_row_word(&self) -> Vec<Letter> {
        let mut w = self.row_word();
        w.reverse();
        w
    }

    pub fn to_shaped(&self) -> ShapedTableau {
        ShapedTableau { rows: self.rows() }
    }

    /// Apply the combinatorial R in place: the carrier absorbs `x` and the
    /// returned letter is emitted. Local energy is `x > bottom_left()` before
    /// the call.
    pub fn absorb(&mut self, x: Letter) -> Letter {
        let (a, c) = (self.a, self.c);
        if x > self.bottom_left() {
            // Reverse bumping, bottom row first.
            let mut carry = x;
            for i in (0..a).rev() {
                let row = &mut self.cells[i * c..(i + 1) * c];
                // Rightmost entry strictly less than carry; it exists because
                // the entry below it in the previous step exceeded it.
                let j = row.partition_point(|&v| v < carry) - 1;
                std::mem::swap(&mut row[j], &mut carry);
            }
            carry
        } else {
            // Column insertion, left to right.
            let mut carry = x;
            for j in 0..c {
                let i = (0..a)
                    .find(|&i| self.cells[i * c + j] >= carry)
                    .expect("bottom entry bounds the carried letter");
                std::mem::swap(&mut self.cells[i * c + j], &mut carry);
            }
            carry
        }
    }

    /// Compact text form, e.g. `011/234`; comma-separated rows when a letter
    /// exceeds 9.
    pub fn to_text(&self) -> String {
        let wide = self.cells.iter().any(|&v| v > 9);
        (0..self.a)
            .map(|i| {
                let r = self.row(i).iter().map(|v| v.to_string());
                if wide {
                    r.collect::<Vec<_>>().join(",")
                } else {
                    r.collect::<String>()
                }
            })
            .collect::<Vec<_>>()
            .join("/")
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tableau({})", self.to_text())
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Tableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Tableau::new(parse_rows(s)?)
    }
}

fn parse_rows(s: &str) -> Result<Vec<Vec<Letter>>> {
    let mut rows = Vec::new();
    let mut offset = 0;
    for part in s.split('/') {
        let mut row = Vec::new();
        if part.contains(',') {
            let mut col = offset;
            for tok in part.split(',') {
                let t = tok.trim();
                let v: Letter = t.parse().map_err(|_| Error::Parse {
                    column: col + 1,
                    message: format!("bad letter {t:?}"),
                })?;
                row.push(v);
                col += tok.len() + 1;
            }
        } else {
            for (k, ch) in part.chars().enumerate() {
                let v = ch.to_digit(10).ok_or(Error::Parse {
                    column: offset + k + 1,
                    message: format!("bad letter {ch:?}"),
                })?;
                row.push(v as Letter);
            }
        }
        rows.push(row);
        offset += part.len() + 1;
    }
    Ok(rows)
}

/// R(C, x) = (y, S).
pub fn combinatorial_r(c: &Tableau, x: Letter) -> (Letter, Tableau) {
    let mut s = c.clone();
    let y = s.absorb(x);
    (y, s)
}

/// H(C, x) = 1 iff x exceeds the bottom-left entry of C.
pub fn local_energy(c: &Tableau, x: Letter) -> u8 {
    (x > c.bottom_left()) as u8
}

/// Semistandard tableau of arbitrary (possibly ragged) shape.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ShapedTableau {
    rows: Vec<Vec<Letter>>,
}

impl ShapedTableau {
    pub fn empty() -> Self {
        ShapedTableau::default()
    }

    pub fn new(rows: Vec<Vec<Letter>>) -> Result<Self> {
        let rows: Vec<Vec<Letter>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
        let t = ShapedTableau { rows };
        if !t.is_semistandard() {
            return Err(Error::InvalidTableau("not semistandard".into()));
        }
        Ok(t)
    }

    pub fn rows(&self) -> &[Vec<Letter>] {
        &self.rows
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn is_semistandard(&self) -> bool {
        let shape_ok = self.rows.windows(2).all(|w| w[0].len() >= w[1].len());
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|p| p[0] <= p[1]));
        let cols_ok = self
            .rows
            .windows(2)
            .all(|w| w[1].iter().zip(&w[0]).all(|(lo, up)| up < lo));
        shape_ok && rows_ok && cols_ok
    }

    pub fn letter_counts(&self, kappa: usize) -> Vec<usize> {
        let mut m = vec![0; kappa + 1];
        for &v in self.rows.iter().flatten() {
            m[v as usize] += 1;
        }
        m
    }

    pub fn row_word(&self) -> Vec<Letter> {
        self.rows.iter().rev().flatten().copied().collect()
    }

    /// Schensted row insertion.
    pub fn row_insert(&mut self, x: Letter) {
        let mut carry = x;
        for row in self.rows.iter_mut() {
            let j = row.partition_point(|&v| v <= carry);
            if j == row.len() {
                row.push(carry);
                return;
            }
            std::mem::swap(&mut row[j], &mut carry);
        }
        self.rows.push(vec![carry]);
    }

    pub fn row_insert_word(&mut self, word: &[Letter]) {
        for &x in word {
            self.row_insert(x);
        }
    }

    /// Schensted column insertion.
    pub fn column_insert(&mut self, x: Letter) {
        let mut carry = x;
        let mut j = 0;
        loop {
            let height = self.rows.iter().take_while(|r| r.len() > j).count();
            match (0..height).find(|&i| self.rows[i][j] >= carry) {
                Some(i) => {
                    std::mem::swap(&mut self.rows[i][j], &mut carry);
                    j += 1;
                }
                None => {
                    if height == self.rows.len() {
                        self.rows.push(vec![carry]);
                    } else {
                        self.rows[height].push(carry);
                    }
                    return;
                }
            }
        }
    }
}

impl fmt::Debug for ShapedTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "ShapedTableau({})", text.join("/"))
    }
}

impl From<&Tableau> for ShapedTableau {
    fn from(t: &Tableau) -> Self {
        t.to_shaped()
    }
}

/// Schensted product S·T = (S <- row(T)).
pub fn product(s: &ShapedTableau, t: &ShapedTableau) -> ShapedTableau {
    let mut out = s.clone();
    out.row_insert_word(&t.row_word());
    out
}

/// |B_c^(a)(κ)| by the hook-content formula.
pub fn count_rectangular(a: usize, c: usize, kappa: usize) -> BigUint {
    if a > kappa + 1 {
        return BigUint::zero();
    }
    let n = kappa + 1;
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..a {
        for j in 0..c {
            num *= BigUint::from(n + j - i);
            den *= BigUint::from((c - j) + (a - i) - 1);
        }
    }
    num / den
}

/// Saturating u128 version of [`count_rectangular`].
pub fn count_rectangular_u128(a: usize, c: usize, kappa: usize) -> u128 {
    count_rectangular(a, c, kappa).to_u128().unwrap_or(u128::MAX)
}

/// All elements of B_c^(a)(κ) in row-major lexicographic order.
pub fn enumerate_rectangular(a: usize, c: usize, kappa: usize, cap: u128) -> Result<Vec<Tableau>> {
    let count = count_rectangular_u128(a, c, kappa);
    if count > cap {
        return Err(Error::CapExceeded { states: count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    if a == 0 || c == 0 || a > kappa + 1 {
        return Ok(out);
    }
    let mut cells = vec![0 as Letter; a * c];
    fill(&mut cells, 0, a, c, kappa, &mut out);
    Ok(out)
}

fn fill(cells: &mut [Letter], k: usize, a: usize, c: usize, kappa: usize, out: &mut Vec<Tableau>) {
    if k == a * c {
        out.push(Tableau { a, c, cells: cells.to_vec() });
        return;
    }
    let (i, j) = (k / c, k % c);
    let mut lo = if j > 0 { cells[k - 1] } else { 0 };
    if i > 0 {
        lo = lo.max(cells[k - c] + 1);
    }
    let hi = (kappa + 1 + i - a) as Letter;
    for v in lo..=hi {
        cells[k] = v;
        fill(cells, k + 1, a, c, kappa, out);
    }
}

/// Height-one carrier stored as letter counts.
///
/// Equivalent to a 1×c [`Tableau`] but O(κ) per step regardless of c.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RowCarrier {
    counts: Vec<u32>,
}

impl RowCarrier {
    /// The ground state: c empty boxes.
    pub fn ground(c: usize, kappa: usize) -> Self {
        let mut counts = vec![0; kappa + 1];
        counts[0] = c as u32;
        RowCarrier { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    fn min_letter(&self) -> usize {
        self.counts.iter().position(|&n| n > 0).expect("nonempty carrier")
    }

    /// Same contract as [`Tableau::absorb`]; returns (emitted, energy).
    pub fn absorb(&mut self, x: Letter) -> (Letter, u8) {
        let xi = x as usize;
        let z = self.min_letter();
        let (y, h) = if xi > z {
            let y = (0..xi).rev().find(|&k| self.counts[k] > 0).expect("z < x");
            (y, 1)
        } else {
            let y = self.counts.iter().rposition(|&n| n > 0).expect("nonempty");
            (y, 0)
        };
        self.counts[y] -= 1;
        self.counts[xi] += 1;
        (y as Letter, h)
    }

    pub fn is_ground(&self) -> bool {
        self.counts[1..].iter().all(|&n| n == 0)
    }

    pub fn to_tableau(&self) -> Tableau {
        let row: Vec<Letter> = self
            .counts
            .iter()
            .enumerate()
            .flat_map(|(v, &n)| std::iter::repeat_n(v as Letter, n as usize))
            .collect();
        Tableau::new(vec![row]).expect("sorted row")
    }
}

/// A carrier of any height; dispatches to the count representation when a = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Carrier {
    Row(RowCarrier),
    Dense(Tableau),
}

impl Carrier {
    pub fn ground(a: usize, c: usize, kappa: usize) -> Self {
        if a == 1 {
            Carrier::Row(RowCarrier::ground(c, kappa))
        } else {
            Carrier::Dense(Tableau::ground(a, c))
        }
    }

    /// Absorb a letter, returning (emitted letter, local energy).
    #[inline]
    pub fn absorb(&mut self, x: Letter) -> (Letter, u8) {
        match self {
            Carrier::Row(r) => r.absorb(x),
            Carrier::Dense(t) => {
                let h = local_energy(t, x);
                (t.absorb(x), h)
            }
        }
    }

    /// True at the ground state U_c^(a), which is fixed by R(·, 0).
    pub fn is_ground(&self) -> bool {
        match self {
            Carrier::Row(r) => r.is_ground(),
            Carrier::Dense(t) => *t == Tableau::ground(t.height(), t.width()),
        }
    }

    /// True once only zeros remain in the top row, so that further zeros are
    /// absorbed with zero energy and the carrier drains back to ground.
    pub fn top_row_empty(&self) -> bool {
        match self {
            Carrier::Row(r) => r.is_ground(),
            Carrier::Dense(t) => t.row(0).iter().all(|&v| v == 0),
        }
    }

    pub fn to_tableau(&self) -> Tableau {
        match self {
            Carrier::Row(r) => r.to_tableau(),
            Carrier::Dense(t) => t.clone(),
        }
    }
}
