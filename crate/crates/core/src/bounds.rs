//! Classical bounds.
//!
//! * [`nc_bound`]: the non-contextual bound `d^n max|W|`.
//! * [`lhv_exact`]: exact local bound of `ℬ[ρ]` for a two-qudit characteristic
//!   table, enumerating Alice's `d^{d+1}` assignments and solving Bob's side per setting.
//! * [`lhv_anneal`]: coordinate ascent with Metropolis moves on the histogram
//!   form of the cube-rotated Bell score.
//! * [`lhv_exact_generic`]: brute force over all character assignments of a
//!   [`BellOperator`].

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell::BellOperator;
use crate::field::{gauss_phase, legendre, omega_int, omega_table, PrimeDim};
use crate::operators::{MultiPoint, PhasePoint};
use crate::phase_space::{PhaseSpaceTable, SettingIndex, TableKind};
use crate::{round_sig, Error, Result};

/// Largest dimension [`lhv_exact`] accepts.
pub const EXACT_MAX_D: u64 = 7;
/// Strategy-space budget of [`lhv_exact_generic`].
pub const GENERIC_BUDGET: f64 = 1e8;

/// `B_nc = d^n max_𝒖 |W_𝒖|`.
pub fn nc_bound(w: &PhaseSpaceTable) -> Result<f64> {
    if w.kind() != TableKind::Wigner {
        return Err(Error::Domain("nc bound needs a Wigner table".into()));
    }
    Ok((w.d().get() as f64).powi(w.n() as i32) * w.max_abs())
}

/// Per-setting character assignments `α` (Alice) and `β` (Bob), each in `Z_d^{d+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LhvStrategy {
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
}

/// Direct evaluation of `d⁻² Re Σ χ_{u₁,u₂} ω^{s₁α_{r₁} + s₂β_{r₂}}`.
pub fn lhv_score(chi: &PhaseSpaceTable, s: &LhvStrategy) -> f64 {
    let d = chi.d();
    let p = d.as_usize();
    let m = d.get();
    let value = |u: &PhasePoint, assign: &[u64]| {
        SettingIndex::of(u).map_or(0, |(r, s)| s * assign[r.r] % m)
    };
    let mut acc = 0.0;
    for (i, c) in chi.values().iter().enumerate() {
        if c.norm() < 1e-15 {
            continue;
        }
        let u = MultiPoint::from_index(i, 2, d);
        let e = value(&u.points()[0], &s.alpha) + value(&u.points()[1], &s.beta);
        acc += (c * omega_int(e as i64, d)).re;
    }
    acc / (p * p) as f64
}

/// Exact `B_lhv` for a two-qudit characteristic table, `d ≤ 7`.
pub fn lhv_exact(chi: &PhaseSpaceTable) -> Result<(f64, LhvStrategy)> {
    let d = chi.d();
    if chi.kind() != TableKind::Characteristic || chi.n() != 2 {
        return Err(Error::Domain(
            "lhv_exact needs a two-qudit characteristic table".into(),
        ));
    }
    if d.get() > EXACT_MAX_D {
        return Err(Error::Budget {
            size: (d.get() as f64).powi(d.get() as i32 + 1),
            limit: (EXACT_MAX_D as f64).powi(EXACT_MAX_D as i32 + 1),
            hint: "use the annealing solver for d ≥ 11",
        });
    }
    d.require_odd("lhv_exact works with the odd-d setting structure")?;
    let p = d.as_usize();
    let nr = p + 1;
    let omegas = omega_table(d);
    let norm = 1.0 / (p * p) as f64;
    let at = |u1: Option<(usize, usize)>, u2: Option<(usize, usize)>| -> Complex64 {
        let pt = |o: Option<(usize, usize)>| match o {
            None => PhasePoint::new(0, 0, d),
            Some((r, s)) => {
                let g = SettingIndex { r }.generator(d);
                PhasePoint {
                    x: g.x * d.elem(s as i64),
                    z: g.z * d.elem(s as i64),
                }
            }
        };
        let u = MultiPoint::new(vec![pt(u1), pt(u2)]).expect("two points");
        chi.get(&u) * norm
    };
    // q[r1][a][r2][s2 − 1]: Alice's setting r1 at value a, summed over s1
    let mut q = vec![vec![vec![vec![Complex64::new(0.0, 0.0); p - 1]; nr]; p]; nr];
    // pa[r1][a]: Alice-only terms
    let mut pa = vec![vec![0.0; p]; nr];
    let mut base = vec![vec![Complex64::new(0.0, 0.0); p - 1]; nr];
    for r1 in 0..nr {
        for s1 in 1..p {
            let only = at(Some((r1, s1)), None);
            for a in 0..p {
                pa[r1][a] += (only * omegas[s1 * a % p]).re;
            }
            for r2 in 0..nr {
                for s2 in 1..p {
                    let c = at(Some((r1, s1)), Some((r2, s2)));
                    for a in 0..p {
                        q[r1][a][r2][s2 - 1] += c * omegas[s1 * a % p];
                    }
                }
            }
        }
    }
    for (r2, row) in base.iter_mut().enumerate() {
        for s2 in 1..p {
            row[s2 - 1] = at(None, Some((r2, s2)));
        }
    }
    let constant = at(None, None).re;

    let total = p.pow(nr as u32);
    let chunk = total / p;
    // split on Alice's first entry, reduce with deterministic tie-break on the index
    let best = (0..p)
        .into_par_iter()
        .map(|first| {
            let mut alpha = vec![0usize; nr];
            alpha[0] = first;
            let mut m = base.clone();
            let mut pconst = constant;
            for r1 in 0..nr {
                pconst += pa[r1][alpha[r1]];
                for r2 in 0..nr {
                    for s in 0..p - 1 {
                        m[r2][s] += q[r1][alpha[r1]][r2][s];
                    }
                }
            }
            let mut best = (f64::NEG_INFINITY, 0usize);
            for idx in 0..chunk {
                let mut score = pconst;
                for row in &m {
                    score += best_bob_value(row, &omegas).0;
                }
                if score > best.0 + 1e-13 {
                    best = (score, first * chunk + idx);
                }
                // odometer over alpha[1..]
                let mut pos = nr - 1;
                loop {
                    if pos == 0 {
                        break;
                    }
                    let old = alpha[pos];
                    let new = (old + 1) % p;
                    alpha[pos] = new;
                    pconst += pa[pos][new] - pa[pos][old];
                    for r2 in 0..nr {
                        for s in 0..p - 1 {
                            m[r2][s] += q[pos][new][r2][s] - q[pos][old][r2][s];
                        }
                    }
                    if new != 0 {
                        break;
                    }
                    pos -= 1;
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |a, b| {
                if b.0 > a.0 + 1e-13 || ((b.0 - a.0).abs() <= 1e-13 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let mut idx = best.1;
    let mut alpha = vec![0u64; nr];
    for slot in alpha.iter_mut().rev() {
        *slot = (idx % p) as u64;
        idx /= p;
    }
    let mut m = base;
    for r1 in 0..nr {
        for r2 in 0..nr {
            for s in 0..p - 1 {
                m[r2][s] += q[r1][alpha[r1] as usize][r2][s];
            }
        }
    }
    let beta = m
        .iter()
        .map(|row| best_bob_value(row, &omegas).1 as u64)
        .collect();
    let strategy = LhvStrategy { alpha, beta };
    Ok((lhv_score(chi, &strategy), strategy))
}

/// `max_b Re Σ_{s≥1} row[s−1] ω^{s b}`, lowest `b` on ties.
#[inline]
fn best_bob_value(row: &[Complex64], omegas: &[Complex64]) -> (f64, usize) {
    let p = omegas.len();
    let mut best = (f64::NEG_INFINITY, 0);
    for b in 0..p {
        let mut v = 0.0;
        for (i, c) in row.iter().enumerate() {
            let w = omegas[(i + 1) * b % p];
            v += c.re * w.re - c.im * w.im;
        }
        if v > best.0 + 1e-13 {
            best = (v, b);
        }
    }
    best
}

/// Strategy `(a, b)` of the histogram formulation; slot `d` is the `Z`-basis setting.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HistogramStrategy {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl HistogramStrategy {
    /// The equivalent `(α, β) = (−a, −b)` for [`lhv_score`] on `(U_ν ⊗ 1)|Φ⟩`, `γ = 1`.
    pub fn to_lhv(&self, d: PrimeDim) -> LhvStrategy {
        let neg = |v: &[u64]| {
            v.iter()
                .map(|&x| (d.get() - x % d.get()) % d.get())
                .collect()
        };
        LhvStrategy {
            alpha: neg(&self.a),
            beta: neg(&self.b),
        }
    }
}

/// Real coefficients `C_m`, `m ∈ Z_d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffVector {
    pub c: Vec<f64>,
}

fn coefficient_modes(d: PrimeDim) -> Result<Vec<Complex64>> {
    if d.get() < 5 {
        return Err(Error::UnsupportedDimension {
            d: d.get(),
            reason: "the coefficient vector needs 24⁻¹ mod d, so d ≥ 5",
        });
    }
    let m = d.get();
    let eps = gauss_phase(d)?;
    let pref = eps / ((m * m) as f64 * (m as f64).sqrt());
    let (i2, i24) = (d.half(), d.inv_raw(24));
    let mut c = vec![Complex64::new(0.0, 0.0); m as usize];
    for n in 1..m {
        let leg = legendre(d.elem(-((i2 * n % m) as i64))) as f64;
        let cube = n * n % m * n % m;
        let phi = (n + m - cube) % m * i24 % m;
        c[n as usize] = pref * leg * omega_int(phi as i64, d);
    }
    Ok(c)
}

/// `C_m = Re Σ_{n≠0} c_n ω^{n m}` together with the largest discarded imaginary part.
pub fn build_c_with_residue(d: PrimeDim) -> Result<(CoeffVector, f64)> {
    let modes = coefficient_modes(d)?;
    let m = d.get();
    let mut residue: f64 = 0.0;
    let c = (0..m)
        .map(|k| {
            let v: Complex64 = (1..m)
                .map(|n| modes[n as usize] * omega_int((n * k % m) as i64, d))
                .sum();
            residue = residue.max(v.im.abs());
            v.re
        })
        .collect();
    Ok((CoeffVector { c }, residue))
}

/// Coefficient vector for `γ = 1, z = ε = 0`.
pub fn build_c(d: PrimeDim) -> Result<CoeffVector> {
    Ok(build_c_with_residue(d)?.0)
}

/// Second route: `D[m'] = Σ_n c_n ω^{2⁻¹ n m'}` on doubled residues, then `C_m = Re D[2m]`.
pub fn build_c_doubled(d: PrimeDim) -> Result<CoeffVector> {
    let modes = coefficient_modes(d)?;
    let m = d.get();
    let i2 = d.half();
    let dvec: Vec<Complex64> = (0..m)
        .map(|mp| {
            (1..m)
                .map(|n| modes[n as usize] * omega_int((i2 * n % m * mp % m) as i64, d))
                .sum()
        })
        .collect();
    Ok(CoeffVector {
        c: (0..m).map(|k| dvec[(2 * k % m) as usize].re).collect(),
    })
}

/// Residue table `e_l = 2⁻¹(l² − l)`.
fn quadratic_offsets(d: PrimeDim) -> Vec<usize> {
    let m = d.get();
    (0..m)
        .map(|l| (d.half() * ((l * l + m - l) % m) % m) as usize)
        .collect()
}

/// Histogram `H[r]` of `m = e_l + a_{l−k} + b_k` over all `(l, k)`.
pub fn histogram(s: &HistogramStrategy, d: PrimeDim) -> Vec<u64> {
    let p = d.as_usize();
    let e = quadratic_offsets(d);
    let mut h = vec![0; p];
    for l in 0..p {
        for k in 0..p {
            let j = (l + p - k) % p;
            h[(e[l] + s.a[j] as usize + s.b[k] as usize) % p] += 1;
        }
    }
    h
}

/// `Z`-basis term `d⁻² Σ_i ω^{i(a_d − b_d)}`.
pub fn z_term(s: &HistogramStrategy, d: PrimeDim) -> f64 {
    if s.a[d.as_usize()] % d.get() == s.b[d.as_usize()] % d.get() {
        1.0 / d.get() as f64
    } else {
        0.0
    }
}

/// Full score `H · C + Z-term`.
pub fn score(s: &HistogramStrategy, c: &CoeffVector, d: PrimeDim) -> f64 {
    let h = histogram(s, d);
    h.iter().zip(&c.c).map(|(&n, &c)| n as f64 * c).sum::<f64>() + z_term(s, d)
}

/// Which coordinate a move changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

/// A single-coordinate move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub party: Party,
    pub index: usize,
    pub value: u64,
}

/// Incremental score state: strategy, histogram and a counter of moved residues.
#[derive(Clone, Debug)]
pub struct ScoreState {
    d: PrimeDim,
    e: Vec<usize>,
    pub strategy: HistogramStrategy,
    pub hist: Vec<u64>,
    pub cell_updates: u64,
}

impl ScoreState {
    pub fn new(strategy: HistogramStrategy, d: PrimeDim) -> Self {
        let hist = histogram(&strategy, d);
        ScoreState {
            d,
            e: quadratic_offsets(d),
            strategy,
            hist,
            cell_updates: 0,
        }
    }

    pub fn score(&self, c: &CoeffVector) -> f64 {
        self.hist
            .iter()
            .zip(&c.c)
            .map(|(&n, &c)| n as f64 * c)
            .sum::<f64>()
            + z_term(&self.strategy, self.d)
    }

    /// Residues `m` of the `d` pairs affected by coordinate `(party, index)`, with that
    /// coordinate's own contribution removed.
    fn affected_bases(&self, party: Party, index: usize, out: &mut [usize]) {
        let p = self.d.as_usize();
        let s = &self.strategy;
        match party {
            Party::A => {
                for (k, slot) in out.iter_mut().enumerate() {
                    let l = (index + k) % p;
                    *slot = (self.e[l] + s.b[k] as usize) % p;
                }
            }
            Party::B => {
                for (l, slot) in out.iter_mut().enumerate() {
                    let j = (l + p - index) % p;
                    *slot = (self.e[l] + s.a[j] as usize) % p;
                }
            }
        }
    }

    fn current(&self, party: Party, index: usize) -> u64 {
        match party {
            Party::A => self.strategy.a[index],
            Party::B => self.strategy.b[index],
        }
    }

    /// `ΔS` of a move, computed from the `d` affected pairs.
    pub fn score_delta(&self, mv: Move, c: &CoeffVector) -> f64 {
        let p = self.d.as_usize();
        let old = self.current(mv.party, mv.index);
        if mv.index == p {
            let mut after = self.strategy.clone();
            match mv.party {
                Party::A => after.a[p] = mv.value,
                Party::B => after.b[p] = mv.value,
            }
            return z_term(&after, self.d) - z_term(&self.strategy, self.d);
        }
        let mut bases = vec![0; p];
        self.affected_bases(mv.party, mv.index, &mut bases);
        bases
            .iter()
            .map(|&b| c.c[(b + mv.value as usize) % p] - c.c[(b + old as usize) % p])
            .sum()
    }

    /// `ΔS` for every candidate value of one coordinate (index `< d`), by cyclic correlation
    /// of the affected-residue histogram with `C`.
    pub fn all_deltas(&self, party: Party, index: usize, c: &CoeffVector, out: &mut [f64]) {
        let p = self.d.as_usize();
        let mut g = vec![0u32; p];
        let mut bases = vec![0; p];
        self.affected_bases(party, index, &mut bases);
        for &b in &bases {
            g[b] += 1;
        }
        for (v, slot) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for (r, &n) in g.iter().enumerate() {
                if n != 0 {
                    s += n as f64 * c.c[(r + v) % p];
                }
            }
            *slot = s;
        }
        let cur = out[self.current(party, index) as usize];
        for v in out.iter_mut() {
            *v -= cur;
        }
    }

    /// Applies a move, updating the histogram in place.
    pub fn apply(&mut self, mv: Move) {
        let p = self.d.as_usize();
        if mv.index < p {
            let old = self.current(mv.party, mv.index) as usize;
            let mut bases = vec![0; p];
            self.affected_bases(mv.party, mv.index, &mut bases);
            for &b in &bases {
                self.hist[(b + old) % p] -= 1;
                self.hist[(b + mv.value as usize) % p] += 1;
                self.cell_updates += 1;
            }
        }
        match mv.party {
            Party::A => self.strategy.a[mv.index] = mv.value,
            Party::B => self.strategy.b[mv.index] = mv.value,
        }
    }
}

/// Free-function form of [`ScoreState::score_delta`].
pub fn score_delta(state: &ScoreState, mv: Move, c: &CoeffVector) -> f64 {
    state.score_delta(mv, c)
}

/// Candidate set for the per-coordinate move.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Proposal {
    /// Best value over all of `Z_d`, the incumbent included; a move is then never downhill.
    #[default]
    Inclusive,
    /// Best value other than the incumbent, which may be downhill and goes through Metropolis.
    Alternative,
}

/// Annealing budget and seed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub restarts: usize,
    pub iters: usize,
    pub t0: f64,
    pub seed: u64,
    #[serde(default)]
    pub proposal: Proposal,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            restarts: 10_000,
            iters: 100,
            t0: 1.5,
            seed: 0,
            proposal: Proposal::Inclusive,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.iters == 0 {
            return Err(Error::Domain(
                "restarts and iterations must be at least 1".into(),
            ));
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::Domain(format!(
                "initial temperature must be positive, got {}",
                self.t0
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealResult {
    pub best: f64,
    pub strategy: HistogramStrategy,
    /// Restart that produced the best strategy.
    pub restart: usize,
}

/// One annealing run from the stream `restart` of `seed`.
pub fn anneal_once(
    c: &CoeffVector,
    d: PrimeDim,
    cfg: &AnnealConfig,
    restart: usize,
) -> (f64, HistogramStrategy) {
    let p = d.as_usize();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut a: Vec<u64> = (0..=p).map(|_| rng.random_range(0..p as u64)).collect();
    let mut b: Vec<u64> = (0..=p).map(|_| rng.random_range(0..p as u64)).collect();
    a[0] = 0;
    // the Z-basis slot is optimal when equal
    a[p] = 0;
    b[p] = 0;
    let mut st = ScoreState::new(HistogramStrategy { a, b }, d);
    let mut s = st.score(c);
    let mut best = (s, st.strategy.clone());
    let mut deltas = vec![0.0; p];
    let coords: Vec<(Party, usize)> = (1..p)
        .map(|i| (Party::A, i))
        .chain((0..p).map(|j| (Party::B, j)))
        .collect();
    for t in 1..=cfg.iters {
        let temp = cfg.t0 / (1.0 + t as f64 / 5.0);
        for &(party, index) in &coords {
            st.all_deltas(party, index, c, &mut deltas);
            let cur = st.current(party, index) as usize;
            let (mut dv, mut r) = match cfg.proposal {
                Proposal::Inclusive => (0.0, cur),
                Proposal::Alternative => (f64::NEG_INFINITY, cur),
            };
            for (v, &dl) in deltas.iter().enumerate() {
                if v != cur && dl > dv {
                    (dv, r) = (dl, v);
                }
            }
            let accept = if dv > 0.0 {
                true
            } else if dv < 0.0 {
                rng.random::<f64>() < (dv / temp).exp()
            } else {
                false
            };
            if accept {
                st.apply(Move {
                    party,
                    index,
                    value: r as u64,
                });
                s += dv;
                if s > best.0 {
                    best = (s, st.strategy.clone());
                }
            }
        }
    }
    let exact = score(&best.1, c, d);
    (exact, best.1)
}

/// Multi-restart annealing; restarts run in parallel and reduce by score, ties to the lower index.
pub fn lhv_anneal(c: &CoeffVector, d: PrimeDim, cfg: &AnnealConfig) -> Result<AnnealResult> {
    lhv_anneal_with_progress(c, d, cfg, |_| {})
}

/// As [`lhv_anneal`], calling `progress(done)` after each finished restart.
pub fn lhv_anneal_with_progress<F>(
    c: &CoeffVector,
    d: PrimeDim,
    cfg: &AnnealConfig,
    progress: F,
) -> Result<AnnealResult>
where
    F: Fn(usize) + Sync,
{
    cfg.validate()?;
    if c.c.len() != d.as_usize() {
        return Err(Error::Domain(
            "coefficient vector length differs from d".into(),
        ));
    }
    let done = AtomicUsize::new(0);
    let (best, restart, strategy) = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let (s, st) = anneal_once(c, d, cfg, r);
            progress(done.fetch_add(1, Ordering::Relaxed) + 1);
            (s, r, st)
        })
        .reduce_with(|x, y| {
            if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                y
            } else {
                x
            }
        })
        .expect("at least one restart");
    Ok(AnnealResult {
        best,
        strategy,
        restart,
    })
}

/// Exact maximum of `Re⟨ℬ⟩` over deterministic character assignments, with the last
/// party optimized setting by setting.
pub fn lhv_exact_generic(bell: &BellOperator) -> Result<(f64, Vec<Vec<u64>>)> {
    let d = bell.d();
    let m = d.get();
    let counts = bell.settings_per_party();
    let total_settings: usize = counts.iter().sum();
    let size = (m as f64).powi(total_settings as i32);
    if size > GENERIC_BUDGET {
        return Err(Error::Budget {
            size,
            limit: GENERIC_BUDGET,
            hint: "use lhv_exact on the characteristic table or the annealing solver",
        });
    }
    let n = counts.len();
    let last = n - 1;
    let head: usize = counts[..last].iter().sum();
    let omegas = omega_table(d);
    let p = m as usize;
    let mut values: Vec<Vec<u64>> = counts.iter().map(|&c| vec![0; c]).collect();
    let mut best = (f64::NEG_INFINITY, values.clone());
    let combos = p.pow(head as u32);
    let mut by_setting = vec![vec![Complex64::new(0.0, 0.0); p]; counts[last]];
    for idx in 0..combos {
        // decode the head parties' assignment
        let mut rem = idx;
        for party in (0..last).rev() {
            for s in (0..counts[party]).rev() {
                values[party][s] = (rem % p) as u64;
                rem /= p;
            }
        }
        for row in by_setting.iter_mut() {
            row.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        }
        let mut fixed = 0.0;
        for t in bell.terms() {
            let mut e = 0u64;
            for (party, l) in t.locals[..last].iter().enumerate() {
                if let Some(s) = l.setting {
                    e += l.power * values[party][s];
                }
            }
            let c = t.coeff * omegas[(e % m) as usize];
            match t.locals[last].setting {
                None => fixed += c.re,
                Some(s) => {
                    let pw = t.locals[last].power;
                    for (b, slot) in by_setting[s].iter_mut().enumerate() {
                        *slot += c * omegas[(pw * b as u64 % m) as usize];
                    }
                }
            }
        }
        let mut total = fixed;
        let mut choice = vec![0u64; counts[last]];
        for (s, row) in by_setting.iter().enumerate() {
            let (mut v, mut arg) = (f64::NEG_INFINITY, 0);
            for (b, c) in row.iter().enumerate() {
                if c.re > v + 1e-13 {
                    (v, arg) = (c.re, b);
                }
            }
            total += v;
            choice[s] = arg as u64;
        }
        if total > best.0 + 1e-13 {
            values[last] = choice;
            best = (total, values.clone());
        }
    }
    Ok(best)
}

/// Solver output in the JSON layout shared by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverResult {
    pub d: u64,
    pub method: String,
    pub bound: f64,
    pub heuristic: bool,
    pub strategy: LhvStrategy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub wall_ms: u64,
}

impl SolverResult {
    pub fn rounded(mut self) -> Self {
        self.bound = round_sig(self.bound, 12);
        self
    }
}

/// `B_lhv` of the cube-rotated Bell state for `γ = 1, z = ε = 0`: exact for `d ≤ 7`,
/// annealed otherwise.
pub fn cube_bell_lhv(d: PrimeDim, anneal: &AnnealConfig) -> Result<SolverResult> {
    let start = Instant::now();
    if d.get() <= EXACT_MAX_D {
        let p = crate::operators::CubeParams::new(1, 0, 0, d)?;
        let st = crate::operators::rotated_bell(
            &crate::operators::cube_unitary(&p)?,
            crate::operators::Side::First,
        )?;
        let chi = crate::phase_space::characteristic_fn(&st.projector())?;
        let (bound, strategy) = lhv_exact(&chi)?;
        return Ok(SolverResult {
            d: d.get(),
            method: "exact".into(),
            bound,
            heuristic: false,
            strategy,
            restarts: None,
            seed: None,
            wall_ms: start.elapsed().as_millis() as u64,
        });
    }
    let c = build_c(d)?;
    let res = lhv_anneal(&c, d, anneal)?;
    Ok(SolverResult {
        d: d.get(),
        method: "anneal".into(),
        bound: res.best,
        heuristic: true,
        strategy: res.strategy.to_lhv(d),
        restarts: Some(anneal.restarts),
        seed: Some(anneal.seed),
        wall_ms: start.elapsed().as_millis() as u64,
    })
}
