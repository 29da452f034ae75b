//! Carrier Markov chains, exponential tilting, Perron roots and Legendre
//! transforms.
//!
//! A chain state is a carrier (or a pair of carriers) together with the
//! letter about to be read. States are ordered letter-major:
//! `index = x * n_carriers + carrier`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tableau::{enumerate_rectangular, local_energy, Letter, Tableau};

/// Default cap on the number of chain states.
pub const DEFAULT_STATE_CAP: u128 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    /// B_c^(a) × B_1^(1).
    Single,
    /// Ω_0 × B_1^(1) with Ω_0 the pairs in B_c^(a) × B_{c+1}^(a) reachable
    /// from the ground pair.
    Joint,
}

/// Additive functional of the chain state (C_1, C_2, x).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    /// g_E = H(C_1, x); sums to E_c^(a).
    Energy,
    /// g_ρ = H(C_2, x) - H(C_1, x); sums to ρ_{c+1}^(a). Joint chains only.
    RowIncrement,
}

/// Enumerated carrier chain with its deterministic carrier update.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub kind: ChainKind,
    pub kappa: usize,
    pub a: usize,
    pub c: usize,
    carriers: Vec<(Tableau, Option<Tableau>)>,
    index: HashMap<(Tableau, Option<Tableau>), usize>,
    next: Vec<u32>,
    h1: Vec<u8>,
    h2: Vec<u8>,
}

impl StateSpace {
    pub fn single(c: usize, a: usize, kappa: usize, cap: u128) -> Result<Self> {
        check_shape(c, a, kappa)?;
        let tabs = enumerate_rectangular(a, c, kappa, cap / (kappa as u128 + 1))?;
        let carriers: Vec<_> = tabs.into_iter().map(|t| (t, None)).collect();
        let index: HashMap<_, _> = carriers.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut next = Vec::with_capacity(carriers.len() * (kappa + 1));
        let mut h1 = Vec::with_capacity(next.capacity());
        for (t, _) in &carriers {
            for x in 0..=kappa as Letter {
                let mut s = t.clone();
                h1.push(local_energy(t, x));
                s.absorb(x);
                next.push(index[&(s, None)] as u32);
            }
        }
        let h2 = vec![0; h1.len()];
        Ok(StateSpace { kind: ChainKind::Single, kappa, a, c, carriers, index, next, h1, h2 })
    }

    pub fn joint(c: usize, a: usize, kappa: usize, cap: u128) -> Result<Self> {
        check_shape(c, a, kappa)?;
        let root = (Tableau::ground(a, c), Some(Tableau::ground(a, c + 1)));
        let mut carriers = vec![root.clone()];
        let mut index = HashMap::from([(root, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        let mut edges: Vec<(usize, usize, u32, u8, u8)> = Vec::new();
        while let Some(k) = queue.pop_front() {
            let (t1, t2) = carriers[k].clone();
            let t2 = t2.expect("joint");
            for x in 0..=kappa as Letter {
                let (mut s1, mut s2) = (t1.clone(), t2.clone());
                let (e1, e2) = (local_energy(&s1, x), local_energy(&s2, x));
                s1.absorb(x);
                s2.absorb(x);
                let key = (s1, Some(s2));
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = carriers.len();
                        if (id as u128 + 1) * (kappa as u128 + 1) > cap {
                            return Err(Error::CapExceeded { states: (id as u128 + 1) * (kappa as u128 + 1), cap });
                        }
                        carriers.push(key.clone());
                        index.insert(key, id);
                        queue.push_back(id);
                        id
                    }
                };
                edges.push((k, x as usize, id as u32, e1, e2));
            }
        }
        let n = carriers.len() * (kappa + 1);
        let (mut next, mut h1, mut h2) = (vec![0; n], vec![0; n], vec![0; n]);
        for (k, x, id, e1, e2) in edges {
            let slot = k * (kappa + 1) + x;
            next[slot] = id;
            h1[slot] = e1;
            h2[slot] = e2;
        }
        Ok(StateSpace { kind: ChainKind::Joint, kappa, a, c, carriers, index, next, h1, h2 })
    }

    /// Number of carrier states (|B_c^(a)| or |Ω_0|).
    pub fn n_carriers(&self) -> usize {
        self.carriers.len()
    }

    /// Number of chain states.
    pub fn len(&self) -> usize {
        self.carriers.len() * (self.kappa + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.carriers.is_empty()
    }

    pub fn carrier(&self, k: usize) -> (&Tableau, Option<&Tableau>) {
        let (t1, t2) = &self.carriers[k];
        (t1, t2.as_ref())
    }

    pub fn carrier_index(&self, t1: &Tableau, t2: Option<&Tableau>) -> Option<usize> {
        self.index.get(&(t1.clone(), t2.cloned())).copied()
    }

    /// Chain state index of (carrier k, letter x).
    pub fn state(&self, k: usize, x: usize) -> usize {
        x * self.carriers.len() + k
    }

    /// (carrier, letter) of a chain state.
    pub fn split(&self, s: usize) -> (usize, usize) {
        (s % self.carriers.len(), s / self.carriers.len())
    }

    /// Carrier after reading x.
    pub fn next_carrier(&self, k: usize, x: usize) -> usize {
        self.next[k * (self.kappa + 1) + x] as usize
    }

    pub fn energies(&self, k: usize, x: usize) -> (u8, u8) {
        let slot = k * (self.kappa + 1) + x;
        (self.h1[slot], self.h2[slot])
    }

    /// Values of g on every chain state.
    pub fn functional(&self, g: Functional) -> Result<Vec<f64>> {
        if g == Functional::RowIncrement && self.kind != ChainKind::Joint {
            return Err(Error::InvalidParameter("row increment needs a joint chain".into()));
        }
        Ok((0..self.len())
            .map(|s| {
                let (k, x) = self.split(s);
                let (e1, e2) = self.energies(k, x);
                match g {
                    Functional::Energy => e1 as f64,
                    Functional::RowIncrement => e2 as f64 - e1 as f64,
                }
            })
            .collect())
    }

    /// Index of the ground carrier (U_c or the ground pair).
    pub fn ground(&self) -> usize {
        let u = Tableau::ground(self.a, self.c);
        let u2 = (self.kind == ChainKind::Joint).then(|| Tableau::ground(self.a, self.c + 1));
        self.carrier_index(&u, u2.as_ref()).expect("ground carrier present")
    }

    /// P((C,x),(C',x')) = 1(C' = R_2(C,x)) p(x').
    pub fn kernel<T: Scalar>(&self, p: &[T]) -> MarkovKernel<T> {
        assert_eq!(p.len(), self.kappa + 1);
        let rows = (0..self.len())
            .map(|s| {
                let (k, x) = self.split(s);
                let k2 = self.next_carrier(k, x);
                (0..=self.kappa).map(|x2| (self.state(k2, x2), p[x2].clone())).collect()
            })
            .collect();
        MarkovKernel { rows }
    }
}

fn check_shape(c: usize, a: usize, kappa: usize) -> Result<()> {
    if a == 0 || a > kappa {
        return Err(Error::ColorOutOfRange { color: a, kappa });
    }
    if c == 0 {
        return Err(Error::InvalidParameter("carrier capacity must be positive".into()));
    }
    Ok(())
}

/// Sparse nonnegative matrix stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovKernel<T> {
    pub rows: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> MarkovKernel<T> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row_sums(&self) -> Vec<T> {
        self.rows
            .iter()
            .map(|r| r.iter().fold(T::zero(), |s, (_, v)| s + v.clone()))
            .collect()
    }

    /// Row vector times matrix: (μP)(j) = Σ_i μ(i) P(i, j).
    pub fn left_multiply(&self, mu: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                out[*j] = out[*j].clone() + mu[i].clone() * v.clone();
            }
        }
        out
    }

    /// Dense copy, for small matrices.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.len();
        let mut m = vec![vec![T::zero(); n]; n];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                m[i][*j] = m[i][*j].clone() + v.clone();
            }
        }
        m
    }

    /// Sparse triplets `i,j,value`, one per line.
    pub fn to_triplets(&self) -> String {
        let mut s = String::from("i,j,value\n");
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                s.push_str(&format!("{i},{j},{}\n", crate::fmt::sig12(v.to_f64())));
            }
        }
        s
    }
}

/// Which index of P(x, y) carries the weight e^{t g}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiltSide {
    /// P(x,y) e^{t g(y)}.
    #[default]
    Destination,
    /// P(x,y) e^{t g(x)}; similar to the destination tilt, same spectrum.
    Source,
}

/// Entrywise tilt of a kernel; t = 0 returns P.
pub fn tilt(p: &MarkovKernel<f64>, g: &[f64], t: f64, side: TiltSide) -> MarkovKernel<f64> {
    let rows = p
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .map(|&(j, v)| {
                    let gv = match side {
                        TiltSide::Destination => g[j],
                        TiltSide::Source => g[i],
                    };
                    (j, v * (t * gv).exp())
                })
                .collect()
        })
        .collect();
    MarkovKernel { rows }
}

#[derive(Debug, Clone)]
pub struct Perron {
    pub root: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// Collatz–Wielandt bounds bracketing the root.
    pub lower: f64,
    pub upper: f64,
}

/// Largest dimension handled by the dense bisection fallback.
pub const DENSE_FALLBACK_MAX: usize = 600;

/// Power-iteration steps tried before a small matrix switches to bisection.
const POWER_STEPS_BEFORE_FALLBACK: usize = 20_000;

/// Spectral radius of an irreducible aperiodic nonnegative matrix by power
/// iteration, stopped when the Collatz–Wielandt bounds agree to `tol`
/// relative. When the spectral gap is small (slow power iteration) and the
/// matrix is small, the bracket is finished by [`perron_root_bisection`].
pub fn perron_root(m: &MarkovKernel<f64>, tol: f64, max_iter: usize, start: Option<&[f64]>) -> Result<Perron> {
    if m.len() <= DENSE_FALLBACK_MAX && max_iter > POWER_STEPS_BEFORE_FALLBACK {
        return match power_iteration(m, tol, POWER_STEPS_BEFORE_FALLBACK, start) {
            Ok(r) => Ok(r),
            Err(Error::NoConvergence { lower, upper, .. }) => {
                let root = perron_root_bisection(m, lower, upper, tol);
                Ok(Perron { root, vector: Vec::new(), iterations: POWER_STEPS_BEFORE_FALLBACK, lower: root, upper: root })
            }
            Err(e) => Err(e),
        };
    }
    power_iteration(m, tol, max_iter, start)
}

/// True iff λI - A is a nonsingular M-matrix, i.e. λ > ρ(A): Gaussian
/// elimination without pivoting keeps every pivot positive.
fn exceeds_spectral_radius(a: &[Vec<f64>], lambda: f64) -> bool {
    let n = a.len();
    let mut b: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
    for (i, row) in b.iter_mut().enumerate() {
        row[i] += lambda;
    }
    for k in 0..n {
        let pivot = b[k][k];
        if pivot <= 0.0 {
            return false;
        }
        let (top, bottom) = b.split_at_mut(k + 1);
        let pk = &top[k];
        for row in bottom.iter_mut() {
            let f = row[k] / pivot;
            if f != 0.0 {
                for j in k..n {
                    row[j] -= f * pk[j];
                }
            }
        }
    }
    true
}

/// Perron root by bisection on the M-matrix test, within [lower, upper].
pub fn perron_root_bisection(m: &MarkovKernel<f64>, lower: f64, upper: f64, tol: f64) -> f64 {
    let dense = m.to_dense();
    let (mut lo, mut hi) = (lower, upper);
    while hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if exceeds_spectral_radius(&dense, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn power_iteration(m: &MarkovKernel<f64>, tol: f64, max_iter: usize, start: Option<&[f64]>) -> Result<Perron> {
    let n = m.len();
    let mut v: Vec<f64> = match start {
        Some(s) => s.to_vec(),
        None => vec![1.0; n],
    };
    let mut w = vec![0.0; n];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    let mut best_gap = f64::INFINITY;
    let mut stalled = 0;
    for it in 1..=max_iter {
        for (i, row) in m.rows.iter().enumerate() {
            w[i] = row.iter().map(|&(j, a)| a * v[j]).sum();
        }
        lo = f64::INFINITY;
        hi = 0.0;
        for i in 0..n {
            let r = w[i] / v[i];
            lo = f64::min(lo, r);
            hi = f64::max(hi, r);
        }
        let scale = w.iter().cloned().fold(0.0, f64::max);
        for i in 0..n {
            v[i] = w[i] / scale;
        }
        let gap = hi - lo;
        if gap <= tol * hi {
            return Ok(Perron { root: 0.5 * (lo + hi), vector: v, iterations: it, lower: lo, upper: hi });
        }
        // Rounding can keep the bounds a few ulps apart; accept a stalled
        // bracket once it is tight enough for any downstream use.
        if gap < 0.5 * best_gap {
            best_gap = gap;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 500 && gap <= 1e-12 * hi {
                return Ok(Perron { root: 0.5 * (lo + hi), vector: v, iterations: it, lower: lo, upper: hi });
            }
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, lower: lo, upper: hi })
}

/// Result of sup_t [u t - Λ(t)].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Legendre {
    Finite { value: f64, argmax: f64 },
    /// The supremum was still increasing at |t| = `at`; `lower` bounds it.
    Unbounded { lower: f64, at: f64 },
}

impl Legendre {
    pub fn value(&self) -> f64 {
        match *self {
            Legendre::Finite { value, .. } => value,
            Legendre::Unbounded { .. } => f64::INFINITY,
        }
    }
}

/// Λ(t) = log λ_P(tg) for one chain and functional.
#[derive(Debug, Clone)]
pub struct CumulantGenerator {
    kernel: MarkovKernel<f64>,
    g: Vec<f64>,
    g_min: f64,
    g_max: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub t_cap: f64,
}

impl CumulantGenerator {
    pub fn new(kernel: MarkovKernel<f64>, g: Vec<f64>) -> Self {
        let g_min = g.iter().cloned().fold(f64::INFINITY, f64::min);
        let g_max = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        CumulantGenerator { kernel, g, g_min, g_max, tol: 1e-15, max_iter: 2_000_000, t_cap: 200.0 }
    }

    /// Kernel and functional for a single or joint chain.
    pub fn for_chain(space: &StateSpace, p: &[f64], g: Functional) -> Result<Self> {
        Ok(Self::new(space.kernel(p), space.functional(g)?))
    }

    /// Cumulant generator of the row length ρ_i^(a): the energy of the
    /// B_1^(a) chain for i = 1, otherwise the row increment of the joint
    /// (i-1, i) chain.
    pub fn for_row(i: usize, a: usize, p: &[f64], cap: u128) -> Result<Self> {
        let kappa = p.len() - 1;
        if i == 0 {
            return Err(Error::InvalidParameter("row index starts at 1".into()));
        }
        if i == 1 {
            Self::for_chain(&StateSpace::single(1, a, kappa, cap)?, p, Functional::Energy)
        } else {
            Self::for_chain(&StateSpace::joint(i - 1, a, kappa, cap)?, p, Functional::RowIncrement)
        }
    }

    pub fn kernel(&self) -> &MarkovKernel<f64> {
        &self.kernel
    }

    pub fn functional(&self) -> &[f64] {
        &self.g
    }

    /// Λ(t). The tilt is shifted by the extreme value of g so that all
    /// weights stay at most 1.
    pub fn lambda(&self, t: f64) -> Result<f64> {
        let shift = if t >= 0.0 { self.g_max } else { self.g_min };
        let shifted: Vec<f64> = self.g.iter().map(|v| v - shift).collect();
        let m = tilt(&self.kernel, &shifted, t, TiltSide::Destination);
        let r = perron_root(&m, self.tol, self.max_iter, None)?;
        Ok(r.root.ln() + t * shift)
    }

    /// Λ'(0) by a central difference with step 1e-5.
    pub fn lambda_prime_at_zero(&self) -> Result<f64> {
        let h = 1e-5;
        Ok((self.lambda(h)? - self.lambda(-h)?) / (2.0 * h))
    }

    /// Λ*(u) by golden-section search on the concave map t -> ut - Λ(t),
    /// over a bracket doubled outward until the map turns down.
    pub fn legendre(&self, u: f64) -> Result<Legendre> {
        let f = |t: f64| -> Result<f64> { Ok(u * t - self.lambda(t)?) };
        let f0 = f(0.0)?;
        let dir = if f(1e-3)? >= f0 { 1.0 } else { -1.0 };
        let (mut a, mut b) = (0.0f64, dir);
        let (mut fa, mut fb) = (f0, f(b)?);
        let mut prev = 0.0f64;
        while fb >= fa {
            if b.abs() >= self.t_cap {
                return Ok(Legendre::Unbounded { lower: fb, at: b });
            }
            prev = a;
            a = b;
            fa = fb;
            b *= 2.0;
            fb = f(b)?;
        }
        // The maximum lies in [prev, b].
        let (mut lo, mut hi) = if prev <= b { (prev, b) } else { (b, prev) };
        let gr = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - gr * (hi - lo);
        let mut x2 = lo + gr * (hi - lo);
        let (mut f1, mut f2) = (f(x1)?, f(x2)?);
        while hi - lo > 1e-9 * (1.0 + lo.abs().max(hi.abs())) {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = f(x2)?;
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = f(x1)?;
            }
        }
        let (value, argmax) = if f1 > f2 { (f1, x1) } else { (f2, x2) };
        Ok(Legendre::Finite { value: value.max(f0), argmax })
    }
}

/// Sampled Λ and Λ*.
#[derive(Debug, Clone)]
pub struct RateFunction {
    pub lambda: Vec<(f64, f64)>,
    pub rate: Vec<(f64, Legendre)>,
    /// Λ'(0), the zero of the rate function.
    pub eta: f64,
    /// Smallest and largest sampled u with finite Λ*.
    pub finite_range: Option<(f64, f64)>,
}

impl RateFunction {
    pub fn sample(gen: &CumulantGenerator, ts: &[f64], us: &[f64], exec: crate::exec::Exec) -> Result<Self> {
        let lambda = exec
            .map_slice(ts, |&t| gen.lambda(t).map(|v| (t, v)))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let rate = exec
            .map_slice(us, |&u| gen.legendre(u).map(|v| (u, v)))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let finite: Vec<f64> = rate
            .iter()
            .filter(|(_, l)| matches!(l, Legendre::Finite { .. }))
            .map(|(u, _)| *u)
            .collect();
        let finite_range = finite.first().map(|&lo| (lo, *finite.last().unwrap()));
        Ok(RateFunction { lambda, rate, eta: gen.lambda_prime_at_zero()?, finite_range })
    }

    pub fn lambda_csv(&self) -> String {
        use crate::fmt::sig12;
        let mut s = String::from("t,lambda\n");
        for (t, v) in &self.lambda {
            s.push_str(&format!("{},{}\n", sig12(*t), sig12(*v)));
        }
        s
    }

    pub fn rate_csv(&self) -> String {
        use crate::fmt::sig12;
        let mut s = String::from("u,rate,bound\n");
        for (u, l) in &self.rate {
            match l {
                Legendre::Finite { value, .. } => s.push_str(&format!("{},{},exact\n", sig12(*u), sig12(*value))),
                Legendre::Unbounded { lower, .. } => {
                    s.push_str(&format!("{},{},lower\n", sig12(*u), sig12(*lower)))
                }
            }
        }
        s
    }
}

/// Stationary law of a single chain: π(C) p(x) in state order.
pub fn product_stationary<T: Scalar>(space: &StateSpace, p: &[T]) -> Vec<T> {
    assert_eq!(space.kind, ChainKind::Single);
    let z = crate::equilibrium::partition_z(space.c, space.a, p);
    let pi: Vec<T> = (0..space.n_carriers())
        .map(|k| crate::equilibrium::weight(space.carrier(k).0, p) / z.clone())
        .collect();
    (0..space.len())
        .map(|s| {
            let (k, x) = space.split(s);
            pi[k].clone() * p[x].clone()
        })
        .collect()
}

/// Exact law of Σ_{j=1}^n g(C_{j-1}, x_j) from the ground carrier, for an
/// integer-valued functional. Entry k is the probability that the sum
/// equals `offset + k`; returns (offset, probabilities).
pub fn sum_distribution(space: &StateSpace, p: &[f64], g: Functional, n: usize) -> Result<(i64, Vec<f64>)> {
    let gv = space.functional(g)?;
    if gv.iter().any(|v| v.fract() != 0.0) {
        return Err(Error::InvalidParameter("functional must be integer valued".into()));
    }
    let lo = gv.iter().cloned().fold(0.0, f64::min) as i64;
    let hi = gv.iter().cloned().fold(0.0, f64::max) as i64;
    let offset = lo * n as i64;
    let width = ((hi - lo) * n as i64 + 1) as usize;
    let nc = space.n_carriers();
    let mut cur = vec![vec![0.0; width]; nc];
    cur[space.ground()][(-offset) as usize] = 1.0;
    for _ in 0..n {
        let mut next = vec![vec![0.0; width]; nc];
        for (k, dist) in cur.iter().enumerate() {
            for (x, &px) in p.iter().enumerate() {
                let k2 = space.next_carrier(k, x);
                let step = gv[space.state(k, x)] as i64;
                for (idx, &w) in dist.iter().enumerate() {
                    if w != 0.0 {
                        next[k2][(idx as i64 + step) as usize] += w * px;
                    }
                }
            }
        }
        cur = next;
    }
    let mut out = vec![0.0; width];
    for dist in &cur {
        for (o, w) in out.iter_mut().zip(dist) {
            *o += w;
        }
    }
    Ok((offset, out))
}
