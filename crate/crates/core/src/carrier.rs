//! Carrier sweeps, the energy matrix, invariant Young diagrams and vacancies.

use crate::bbs::Configuration;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::partition::Partition;
use crate::tableau::{Carrier, Letter, Tableau};

/// Γ(0) = U, Γ(1), ..., with R(Γ(x-1), X(x)) = (X'(x), Γ(x)).
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierPath {
    pub states: Vec<Tableau>,
    pub emissions: Vec<Letter>,
    pub energies: Vec<u8>,
}

impl CarrierPath {
    pub fn total_energy(&self) -> u64 {
        self.energies.iter().map(|&h| h as u64).sum()
    }
}

fn check_height(x: &Configuration, a: usize, c: usize) -> Result<()> {
    if a == 0 || a > x.kappa() {
        return Err(Error::ColorOutOfRange { color: a, kappa: x.kappa() });
    }
    if c == 0 {
        return Err(Error::InvalidParameter("carrier capacity must be positive".into()));
    }
    Ok(())
}

/// Sweep a B_c^(a) carrier over the support of `x`, then over zeros until
/// its top row is empty (after which it emits only zeros).
pub fn run_carrier(x: &Configuration, a: usize, c: usize) -> Result<CarrierPath> {
    check_height(x, a, c)?;
    let mut carrier = Carrier::ground(a, c, x.kappa());
    let mut path = CarrierPath {
        states: vec![carrier.to_tableau()],
        emissions: Vec::new(),
        energies: Vec::new(),
    };
    let mut step = |carrier: &mut Carrier, v: Letter| {
        let (y, h) = carrier.absorb(v);
        path.states.push(carrier.to_tableau());
        path.emissions.push(y);
        path.energies.push(h);
    };
    for &v in x.cells() {
        step(&mut carrier, v);
    }
    while !carrier.top_row_empty() {
        step(&mut carrier, 0);
    }
    Ok(path)
}

/// E_c^(a)(X) = Σ_x H(Γ(x-1), X(x)). Zeros carry no energy, so only the
/// support is swept.
pub fn row_energy(x: &Configuration, a: usize, c: usize) -> Result<u64> {
    check_height(x, a, c)?;
    Ok(row_energy_unchecked(x.cells(), a, c, x.kappa()))
}

pub(crate) fn row_energy_unchecked(cells: &[Letter], a: usize, c: usize, kappa: usize) -> u64 {
    let mut carrier = Carrier::ground(a, c, kappa);
    let mut e = 0u64;
    for &v in cells {
        e += carrier.absorb(v).1 as u64;
    }
    e
}

/// E_c^(a) for c = 1..=rows, a = 1..=κ.
///
/// Stored rows run up to and including the first row that repeats its
/// predecessor in every column, so the last row is the stable value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyMatrix {
    kappa: usize,
    rows: Vec<Vec<u64>>,
}

impl EnergyMatrix {
    /// Build from explicit rows (row c-1 holds E_c^(1..=κ)).
    pub fn from_rows(kappa: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != kappa) {
            return Err(Error::InvalidParameter(format!("energy rows must have {kappa} entries")));
        }
        Ok(EnergyMatrix { kappa, rows })
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// E_c^(a) for any c >= 0 (E_0 = 0; beyond the stored rows the column
    /// is constant).
    pub fn get(&self, c: usize, a: usize) -> u64 {
        if c == 0 || self.rows.is_empty() {
            return 0;
        }
        let i = c.min(self.rows.len()) - 1;
        self.rows[i][a - 1]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("c");
        for a in 1..=self.kappa {
            s.push_str(&format!(",E{a}"));
        }
        s.push('\n');
        for (i, r) in self.rows.iter().enumerate() {
            s.push_str(&(i + 1).to_string());
            for v in r {
                s.push_str(&format!(",{v}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Energy matrix of `x`, one column per height computed independently.
pub fn energy_matrix(x: &Configuration) -> EnergyMatrix {
    energy_matrix_with(x, Exec::default())
}

pub fn energy_matrix_with(x: &Configuration, exec: Exec) -> EnergyMatrix {
    let kappa = x.kappa();
    let columns: Vec<Vec<u64>> = exec.map_range(kappa, |i| energy_column(x, i + 1));
    let len = columns.iter().map(Vec::len).max().unwrap_or(1);
    let rows = (0..len)
        .map(|c| columns.iter().map(|col| col[c.min(col.len() - 1)]).collect())
        .collect();
    EnergyMatrix { kappa, rows }
}

/// E_1^(a), E_2^(a), ... up to the first c with E_c = E_{c-1}. Increments
/// are row lengths of a Young diagram, so a zero increment means the column
/// has stabilized.
fn energy_column(x: &Configuration, a: usize) -> Vec<u64> {
    let cap = x.cells().iter().filter(|&&v| v as usize >= a).count() + 1;
    let mut col = Vec::new();
    let mut prev = 0;
    for c in 1..=cap {
        let e = row_energy_unchecked(x.cells(), a, c, x.kappa());
        col.push(e);
        if e == prev {
            break;
        }
        prev = e;
    }
    col
}

/// The κ-tuple of invariant Young diagrams μ^(1), ..., μ^(κ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YoungTuple {
    pub diagrams: Vec<Partition>,
}

impl YoungTuple {
    pub fn kappa(&self) -> usize {
        self.diagrams.len()
    }

    /// μ^(a), 1-based.
    pub fn diagram(&self, a: usize) -> &Partition {
        &self.diagrams[a - 1]
    }

    /// ρ_i^(a).
    pub fn row(&self, a: usize, i: usize) -> usize {
        self.diagrams[a - 1].row(i)
    }

    /// E_i^(a) = ρ_1 + ... + ρ_i.
    pub fn energy(&self, a: usize, i: usize) -> u64 {
        (1..=i).map(|k| self.row(a, k) as u64).sum()
    }

    /// m_j^(a): number of columns of length j.
    pub fn column_multiplicities(&self, a: usize) -> Vec<usize> {
        self.diagrams[a - 1].column_multiplicities()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("a,i,rho\n");
        for (k, mu) in self.diagrams.iter().enumerate() {
            for (i, r) in mu.parts().iter().enumerate() {
                s.push_str(&format!("{},{},{}\n", k + 1, i + 1, r));
            }
        }
        s
    }
}

/// ρ_i^(a) = E_i^(a) - E_{i-1}^(a); rejects a non-concave column.
pub fn young_diagrams(e: &EnergyMatrix) -> Result<YoungTuple> {
    let mut diagrams = Vec::with_capacity(e.kappa());
    for a in 1..=e.kappa() {
        let rows: Vec<usize> = (1..=e.rows().len())
            .map(|c| e.get(c, a).checked_sub(e.get(c - 1, a)))
            .collect::<Option<Vec<u64>>>()
            .ok_or(Error::NotConcave { color: a, row: 0 })?
            .into_iter()
            .map(|v| v as usize)
            .collect();
        if let Some(k) = rows.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::NotConcave { color: a, row: k + 2 });
        }
        diagrams.push(Partition::new(rows).expect("checked non-increasing"));
    }
    Ok(YoungTuple { diagrams })
}

/// Cartan matrix of type A_κ: 2 on the diagonal, -1 on the off-diagonals.
pub fn cartan(a: usize, b: usize) -> i64 {
    if a == b {
        2
    } else if a.abs_diff(b) == 1 {
        -1
    } else {
        0
    }
}

/// v_i^(a) = n δ_{a1} - Σ_b C_ab E_i^(b), for i = 1..=rows, plus the i → ∞
/// values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VacancyTable {
    pub n: usize,
    /// rows[i-1][a-1] = v_i^(a).
    pub rows: Vec<Vec<i64>>,
    pub infinity: Vec<i64>,
}

impl VacancyTable {
    pub fn get(&self, i: usize, a: usize) -> i64 {
        let k = i.min(self.rows.len());
        if k == 0 {
            return self.infinity[a - 1];
        }
        self.rows[k - 1][a - 1]
    }

    pub fn first_negative(&self) -> Option<(usize, usize, i64)> {
        for (i, r) in self.rows.iter().enumerate() {
            for (a, &v) in r.iter().enumerate() {
                if v < 0 {
                    return Some((i + 1, a + 1, v));
                }
            }
        }
        None
    }
}

/// Vacancy numbers without the realizability check. They can be negative
/// when the configuration is not a highest state.
pub fn vacancies_unchecked(y: &YoungTuple, n: usize) -> VacancyTable {
    let kappa = y.kappa();
    let depth = y.diagrams.iter().map(Partition::len).max().unwrap_or(0).max(1);
    let vac = |energy: &dyn Fn(usize) -> i64, a: usize| -> i64 {
        let own = if a == 1 { n as i64 } else { 0 };
        own - (1..=kappa).map(|b| cartan(a, b) * energy(b)).sum::<i64>()
    };
    let rows = (1..=depth)
        .map(|i| (1..=kappa).map(|a| vac(&|b| y.energy(b, i) as i64, a)).collect())
        .collect();
    let infinity = (1..=kappa)
        .map(|a| vac(&|b| y.diagram(b).size() as i64, a))
        .collect();
    VacancyTable { n, rows, infinity }
}

/// Vacancy numbers; a negative entry means the diagrams cannot come from a
/// highest state of length n.
pub fn vacancies(y: &YoungTuple, n: usize) -> Result<VacancyTable> {
    let t = vacancies_unchecked(y, n);
    if let Some((row, color, value)) = t.first_negative() {
        return Err(Error::NegativeVacancy { row, color, value });
    }
    Ok(t)
}
