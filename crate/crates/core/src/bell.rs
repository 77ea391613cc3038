//! Bell operators as weighted sums of tensor products of local measurements.
//!
//! Every local factor is a power `O^k` of one of the party's measurement
//! settings `O`, a unitary with character spectrum. A deterministic local
//! model assigns each setting a value `ω^a` and each factor the value `ω^{k a}`,
//! which is what [`crate::bounds::lhv_exact_generic`] enumerates.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::field::{omega_int, omega_pow, PrimeDim, RationalExponent};
use crate::operators::{
    bell_state, displacement, pauli_xz, rational_diag, t_gate, tensor, CubeParams, DenseOperator,
    MultiPoint, StabilizerGroup, StateVector,
};
use crate::phase_space::{characteristic_fn, characteristic_unchecked, SettingIndex};
use crate::{operators, round_sig, Error, Result};

/// One measurement setting of one party.
#[derive(Clone, Debug)]
pub struct Setting {
    pub name: String,
    pub op: DenseOperator,
}

/// `O^power` for setting `setting`, or the identity when `setting` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Local {
    pub setting: Option<usize>,
    pub power: u64,
}

impl Local {
    pub const IDENTITY: Local = Local {
        setting: None,
        power: 0,
    };

    pub fn of(setting: usize, power: u64) -> Self {
        Local {
            setting: Some(setting),
            power,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: Complex64,
    pub locals: Vec<Local>,
}

/// A Bell operator with its term decomposition and per-party settings.
#[derive(Clone, Debug)]
pub struct BellOperator {
    d: PrimeDim,
    settings: Vec<Vec<Setting>>,
    terms: Vec<Term>,
    matrix: DenseOperator,
}

impl BellOperator {
    /// Builds the matrix from the term list.
    pub fn from_terms(d: PrimeDim, settings: Vec<Vec<Setting>>, terms: Vec<Term>) -> Result<Self> {
        let n = settings.len();
        if n == 0 {
            return Err(Error::Domain(
                "a Bell operator needs at least one party".into(),
            ));
        }
        for t in &terms {
            if t.locals.len() != n {
                return Err(Error::Domain(
                    "term has the wrong number of local factors".into(),
                ));
            }
            for (p, l) in t.locals.iter().enumerate() {
                if l.setting.is_some_and(|s| s >= settings[p].len()) {
                    return Err(Error::Domain(format!(
                        "party {p} has no setting {:?}",
                        l.setting
                    )));
                }
            }
        }
        let matrix = expand(d, &settings, &terms);
        Ok(BellOperator {
            d,
            settings,
            terms,
            matrix,
        })
    }

    pub fn d(&self) -> PrimeDim {
        self.d
    }

    pub fn n(&self) -> usize {
        self.settings.len()
    }

    pub fn matrix(&self) -> &DenseOperator {
        &self.matrix
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn settings(&self) -> &[Vec<Setting>] {
        &self.settings
    }

    pub fn settings_per_party(&self) -> Vec<usize> {
        self.settings.iter().map(Vec::len).collect()
    }

    /// Number of distinct joint settings among terms that act nontrivially on every party.
    pub fn joint_settings(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| t.coeff.norm() > 1e-12 && t.locals.iter().all(|l| l.setting.is_some()))
            .map(|t| t.locals.iter().map(|l| l.setting).collect::<Vec<_>>())
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// The matrix of `O^k` for one local factor.
    pub fn local_matrix(&self, party: usize, local: Local) -> DenseOperator {
        match local.setting {
            None => DenseOperator::identity(self.d, 1),
            Some(s) => self.settings[party][s].op.pow(local.power),
        }
    }

    /// `Σ c · ⊗ O^k`, recomputed by dense Kronecker products.
    pub fn dense_expansion(&self) -> DenseOperator {
        let mut acc = DenseOperator::zeros(self.d, self.n());
        for t in &self.terms {
            let locals: Vec<DenseOperator> = t
                .locals
                .iter()
                .enumerate()
                .map(|(p, &l)| self.local_matrix(p, l))
                .collect();
            acc.add_scaled(t.coeff, &tensor(&locals).expect("nonempty"));
        }
        acc
    }

    pub fn expectation(&self, psi: &StateVector) -> Complex64 {
        self.matrix.expectation(psi)
    }

    pub fn expectation_rho(&self, rho: &DenseOperator) -> Complex64 {
        self.matrix.trace_with(rho)
    }

    /// Value of the expression for a deterministic assignment `values[party][setting]`.
    pub fn deterministic_value(&self, values: &[Vec<u64>]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let e: u64 = t
                    .locals
                    .iter()
                    .enumerate()
                    .map(|(p, l)| l.setting.map_or(0, |s| l.power * values[p][s]))
                    .sum();
                (t.coeff * omega_int(e as i64, self.d)).re
            })
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct TermJson {
            coeff: [f64; 2],
            locals: Vec<LocalJson>,
        }
        #[derive(Serialize)]
        struct LocalJson {
            setting: Option<String>,
            power: u64,
        }
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|t| TermJson {
                coeff: [round_sig(t.coeff.re, 12), round_sig(t.coeff.im, 12)],
                locals: t
                    .locals
                    .iter()
                    .enumerate()
                    .map(|(p, l)| LocalJson {
                        setting: l.setting.map(|s| self.settings[p][s].name.clone()),
                        power: l.power,
                    })
                    .collect(),
            })
            .collect();
        serde_json::json!({
            "d": self.d.get(),
            "n": self.n(),
            "settings": self.settings.iter()
                .map(|s| s.iter().map(|x| x.name.clone()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "terms": terms,
        })
    }
}

fn expand(d: PrimeDim, settings: &[Vec<Setting>], terms: &[Term]) -> DenseOperator {
    let n = settings.len();
    let p = d.as_usize();
    let size = p.pow(n as u32);
    // nonzero entries of each distinct local factor
    let mut cache: HashMap<(usize, Local), Vec<(usize, usize, Complex64)>> = HashMap::new();
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    for t in terms {
        if t.coeff.norm() == 0.0 {
            continue;
        }
        let mut acc: Vec<(usize, usize, Complex64)> = vec![(0, 0, t.coeff)];
        for (party, &l) in t.locals.iter().enumerate() {
            let nz = cache.entry((party, l)).or_insert_with(|| {
                let op = match l.setting {
                    None => DenseOperator::identity(d, 1),
                    Some(s) => settings[party][s].op.pow(l.power),
                };
                let mut v = Vec::new();
                for r in 0..p {
                    for c in 0..p {
                        let x = op.get(r, c);
                        if x.norm() > 1e-15 {
                            v.push((r, c, x));
                        }
                    }
                }
                v
            });
            acc = acc
                .iter()
                .flat_map(|&(r, c, x)| {
                    nz.iter()
                        .map(move |&(r2, c2, y)| (r * p + r2, c * p + c2, x * y))
                })
                .collect();
        }
        for (r, c, x) in acc {
            m[(r, c)] += x;
        }
    }
    DenseOperator::from_matrix(d, n, m).expect("shape matches")
}

/// The `d + 1` displacement settings `T_{g_r}`, optionally conjugated by `U`.
fn displacement_settings(d: PrimeDim, rotation: Option<&DenseOperator>) -> Vec<Setting> {
    (0..=d.as_usize())
        .map(|r| {
            let g = SettingIndex { r }.generator(d);
            let t = displacement(&g);
            match rotation {
                None => Setting {
                    name: format!("T{g}"),
                    op: t,
                },
                Some(u) => Setting {
                    name: format!("U T{g} U†"),
                    op: t.conjugate_by(u),
                },
            }
        })
        .collect()
}

fn displacement_local(u: &operators::PhasePoint) -> Local {
    match SettingIndex::of(u) {
        Some((r, s)) => Local::of(r.r, s),
        None => Local::IDENTITY,
    }
}

fn terms_from_characteristic(
    points: impl Iterator<Item = MultiPoint>,
    chi: &crate::phase_space::PhaseSpaceTable,
) -> Vec<Term> {
    let scale = 1.0 / (chi.d().as_usize().pow(chi.n() as u32)) as f64;
    points
        .filter_map(|w| {
            let c = chi.get(&w) * scale;
            (c.norm() > 1e-14).then(|| Term {
                coeff: c,
                locals: w.points().iter().map(displacement_local).collect(),
            })
        })
        .collect()
}

/// `ℬ[ρ] = Σ_𝒖 χ_𝒖 / d^n · ⊗ T_{uᵢ}`, which equals `ρ` itself.
pub fn bell_from_state(rho: &DenseOperator) -> Result<BellOperator> {
    rho.require_state(1e-8)?;
    let (d, n) = (rho.d(), rho.n());
    let chi = characteristic_fn(rho)?;
    let points = (0..chi.len()).map(|i| MultiPoint::from_index(i, n, d));
    let terms = terms_from_characteristic(points, &chi);
    BellOperator::from_terms(d, vec![displacement_settings(d, None); n], terms)
}

/// `ℬ_U = Σ χ^U_{u₁,u₂} / d² · U T_{u₁} U† ⊗ T_{u₂}` with `χ^U` taken from `(U† ⊗ 1)|Φ⟩`,
/// so that `Tr(ℬ_U ρ) = ⟨Φ|ρ|Φ⟩` for every `ρ`.
pub fn bell_rotated(u: &DenseOperator) -> Result<BellOperator> {
    let d = u.d();
    let chi = rotated_characteristic(u)?;
    let points = (0..chi.len()).map(|i| MultiPoint::from_index(i, 2, d));
    let terms = terms_from_characteristic(points, &chi);
    BellOperator::from_terms(
        d,
        vec![
            displacement_settings(d, Some(u)),
            displacement_settings(d, None),
        ],
        terms,
    )
}

fn rotated_characteristic(u: &DenseOperator) -> Result<crate::phase_space::PhaseSpaceTable> {
    if u.n() != 1 {
        return Err(Error::Domain("expected a single-qudit unitary".into()));
    }
    u.require_unitary("rotation")?;
    let psi = operators::rotated_bell(&u.dagger(), operators::Side::First)?;
    Ok(characteristic_unchecked(&psi.projector()))
}

/// Compact operator over the stabilizer points of `|Φ⟩`:
/// `d⁻² Σ_{x,z,t} χ^ν_{(x,z),(x,t−z)} U_ν T_{(x,z)} U_ν† ⊗ T_{(x,t−z)}`.
pub fn bell_compact(p: &CubeParams) -> Result<BellOperator> {
    let d = p.dim();
    let u = operators::cube_unitary(p)?;
    let chi = rotated_characteristic(&u)?;
    let m = d.get() as i64;
    let mut points = Vec::with_capacity((m * m * m) as usize);
    for x in 0..m {
        for z in 0..m {
            for t in 0..m {
                points.push(MultiPoint::from_pairs(&[(x, z), (x, t - z)], d)?);
            }
        }
    }
    let terms = terms_from_characteristic(points.into_iter(), &chi);
    BellOperator::from_terms(
        d,
        vec![
            displacement_settings(d, Some(&u)),
            displacement_settings(d, None),
        ],
        terms,
    )
}

/// Stabilizer-state operator with the cube rotation on the first qudit, summed over
/// the shifted support `Σ + ((0, t), 0, …, 0)`.
pub fn bell_stabilizer(s: &StabilizerGroup, p: &CubeParams) -> Result<BellOperator> {
    let d = s.d();
    if d != p.dim() {
        return Err(Error::Domain(
            "stabilizer group and cube parameters differ in d".into(),
        ));
    }
    let support = s.support();
    if support.iter().any(|u| {
        !u.is_zero()
            && u.points()[1..]
                .iter()
                .all(|q| q.x.is_zero() && q.z.is_zero())
    }) {
        return Err(Error::Precondition(
            "the stabilizer state is a product across the first-qudit cut".into(),
        ));
    }
    let state = operators::stabilizer_state(s)?;
    let u = operators::cube_unitary(p)?;
    let mut rot = vec![u.dagger()];
    rot.extend((1..s.n()).map(|_| DenseOperator::identity(d, 1)));
    let rotated = StateVector::normalized(d, tensor(&rot)?.apply(&state))?;
    let chi = characteristic_unchecked(&rotated.projector());
    let mut points = BTreeSet::new();
    for w in &support {
        for t in 0..d.get() as i64 {
            let mut shift = MultiPoint::zero(s.n(), d).points().to_vec();
            shift[0] = operators::PhasePoint::new(0, t, d);
            points.insert(w.add(&MultiPoint::new(shift)?).index());
        }
    }
    let terms = terms_from_characteristic(
        points
            .into_iter()
            .map(|i| MultiPoint::from_index(i, s.n(), d)),
        &chi,
    );
    let mut settings = vec![displacement_settings(d, Some(&u))];
    settings.extend((1..s.n()).map(|_| displacement_settings(d, None)));
    BellOperator::from_terms(d, settings, terms)
}

/// `U = diag(1, ω^{2/3}, ω^{1/3})` at `d = 3`.
pub fn qutrit_third_root_unitary() -> DenseOperator {
    let d = PrimeDim::new(3).expect("prime");
    let e = |n| RationalExponent::new(n, 3).expect("denominator 3");
    operators::exponent_diag(&[e(0), e(2), e(1)], d).expect("three entries")
}

/// `ℬ₃ = X⊗X + ω X′⊗X′ + X⊗X′ + X′⊗X + h.c.` with `X′ = U X U†`.
pub fn bell_qutrit_noncharacter() -> BellOperator {
    let d = PrimeDim::new(3).expect("prime");
    let (x, _) = pauli_xz(d);
    let xr = x.conjugate_by(&qutrit_third_root_unitary());
    let party = vec![
        Setting {
            name: "X".into(),
            op: x,
        },
        Setting {
            name: "X_(1/3)".into(),
            op: xr,
        },
    ];
    let w = d.omega();
    let one = Complex64::new(1.0, 0.0);
    let mut terms = Vec::new();
    for (c, a, b) in [(one, 0, 0), (w, 1, 1), (one, 0, 1), (one, 1, 0)] {
        terms.push(Term {
            coeff: c,
            locals: vec![Local::of(a, 1), Local::of(b, 1)],
        });
        // hermitian conjugate: X† = X²
        terms.push(Term {
            coeff: c.conj(),
            locals: vec![Local::of(a, 2), Local::of(b, 2)],
        });
    }
    BellOperator::from_terms(d, vec![party.clone(), party], terms).expect("valid terms")
}

/// Offsets and even weights of the rational-phase CGLMP-type operator.
#[derive(Clone, Debug, PartialEq)]
pub struct CglmpConfig {
    pub q0: RationalExponent,
    pub q1: RationalExponent,
    pub p0: RationalExponent,
    pub p1: RationalExponent,
    /// `γ_k` for `k = 1, …, d−1`.
    pub weights: Vec<f64>,
}

impl CglmpConfig {
    pub fn new(offsets: [RationalExponent; 4], weights: Vec<f64>, d: PrimeDim) -> Result<Self> {
        let cfg = CglmpConfig {
            q0: offsets[0],
            q1: offsets[1],
            p0: offsets[2],
            p1: offsets[3],
            weights,
        };
        cfg.validate(d)?;
        Ok(cfg)
    }

    /// Offsets `(0, 1/2; 1/4, −1/4)` with ramp weights.
    pub fn standard(d: PrimeDim) -> Self {
        let r = |n, m| RationalExponent::new(n, m).expect("nonzero denominator");
        CglmpConfig {
            q0: RationalExponent::zero(),
            q1: r(1, 2),
            p0: r(1, 4),
            p1: r(-1, 4),
            weights: ramp_weights(d),
        }
    }

    pub fn offsets(&self) -> [RationalExponent; 4] {
        [self.q0, self.q1, self.p0, self.p1]
    }

    pub fn validate(&self, d: PrimeDim) -> Result<()> {
        let m = d.as_usize();
        if self.weights.len() != m - 1 {
            return Err(Error::Domain(format!(
                "expected {} weights γ_1..γ_{}, got {}",
                m - 1,
                m - 1,
                self.weights.len()
            )));
        }
        for k in 1..m {
            let (a, b) = (self.weights[k - 1], self.weights[m - k - 1]);
            if (a - b).abs() > 1e-12 {
                return Err(Error::Validation(format!(
                    "weights are not even: γ_{k} = {a}, γ_{} = {b}",
                    m - k
                )));
            }
        }
        Ok(())
    }

    /// `γ_k` for any `k`, with `γ_0 = 1` from the ramp formula.
    pub fn weight(&self, k: usize, d: PrimeDim) -> f64 {
        let k = k % d.as_usize();
        if k == 0 {
            1.0
        } else {
            self.weights[k - 1]
        }
    }
}

/// `γ_k = 1 − 2 min(k, d−k)/(d−1)` for `k = 1, …, d−1`.
pub fn ramp_weights(d: PrimeDim) -> Vec<f64> {
    let m = d.as_usize();
    (1..m)
        .map(|k| 1.0 - 2.0 * k.min(m - k) as f64 / (m - 1) as f64)
        .collect()
}

/// `X_(q) = V_q X V_q†`.
pub fn rotated_shift(q: RationalExponent, d: PrimeDim) -> DenseOperator {
    pauli_xz(d).0.conjugate_by(&rational_diag(q, d))
}

/// `ℬ_γ = Σ_{k≠0} γ_k (X^k_(q₀) ⊗ (X^k_(p₀) + X^k_(p₁)) + X^k_(q₁) ⊗ (X^k_(p₀) − X^k_(p₁)))`.
pub fn bell_cglmp(cfg: &CglmpConfig, d: PrimeDim) -> Result<BellOperator> {
    d.require_odd("the rational-phase CGLMP operator needs odd d")?;
    cfg.validate(d)?;
    let mk = |q: RationalExponent, label: &str| Setting {
        name: format!("X_({label})"),
        op: rotated_shift(q, d),
    };
    let alice = vec![
        mk(cfg.q0, &cfg.q0.to_string()),
        mk(cfg.q1, &cfg.q1.to_string()),
    ];
    let bob = vec![
        mk(cfg.p0, &cfg.p0.to_string()),
        mk(cfg.p1, &cfg.p1.to_string()),
    ];
    let mut terms = Vec::new();
    for k in 1..d.get() {
        let g = cfg.weight(k as usize, d);
        for (a, b, sign) in [(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, -1.0)] {
            terms.push(Term {
                coeff: Complex64::new(sign * g, 0.0),
                locals: vec![Local::of(a, k), Local::of(b, k)],
            });
        }
    }
    BellOperator::from_terms(d, vec![alice, bob], terms)
}

/// Outcome weights `W_r = Σ_{k∈Z_d} γ_k ω^{−r k}`.
pub fn cglmp_outcome_weights(cfg: &CglmpConfig, d: PrimeDim) -> Vec<f64> {
    let m = d.get();
    (0..m)
        .map(|r| {
            (0..m)
                .map(|k| cfg.weight(k as usize, d) * omega_int(-((r * k) as i64), d).re)
                .sum()
        })
        .collect()
}

/// Projector onto outcome `m` of a unitary measurement: `d⁻¹ Σ_k ω^{s m k} O^k`.
fn outcome_projectors(o: &DenseOperator, sign: i64) -> Vec<DenseOperator> {
    let d = o.d();
    let m = d.get() as i64;
    let powers: Vec<DenseOperator> = (0..m as u64).map(|k| o.pow(k)).collect();
    (0..m)
        .map(|out| {
            let mut p = DenseOperator::zeros(d, 1);
            for (k, ok) in powers.iter().enumerate() {
                p.add_scaled(omega_int(sign * out * k as i64, d), ok);
            }
            p.scale(Complex64::new(1.0 / m as f64, 0.0))
        })
        .collect()
}

/// `P(r_ab = r)` for every `r`: Alice's outcome `a` labels eigenvalue `ω^{−a}`,
/// Bob's outcome `b` labels `ω^{b}`, and `r = a − b mod d`.
pub fn cglmp_difference_distribution(
    alice: &DenseOperator,
    bob: &DenseOperator,
    rho: &DenseOperator,
) -> Vec<f64> {
    let d = alice.d();
    let m = d.as_usize();
    let pa = outcome_projectors(alice, 1);
    let pb = outcome_projectors(bob, -1);
    let mut dist = vec![0.0; m];
    for (a, pa) in pa.iter().enumerate() {
        for (b, pb) in pb.iter().enumerate() {
            let joint = tensor(&[pa.clone(), pb.clone()]).expect("two factors");
            dist[(a + m - b) % m] += joint.trace_with(rho).re;
        }
    }
    dist
}

/// `Σ_r W_r [P(r₀₀=r) + P(r₀₁=r) + P(r₁₀=r) − P(r₁₁=r)]` by the Born rule.
pub fn cglmp_probability_functional(cfg: &CglmpConfig, rho: &DenseOperator) -> Result<f64> {
    let d = rho.d();
    cfg.validate(d)?;
    let w = cglmp_outcome_weights(cfg, d);
    let a = [rotated_shift(cfg.q0, d), rotated_shift(cfg.q1, d)];
    let b = [rotated_shift(cfg.p0, d), rotated_shift(cfg.p1, d)];
    let mut total = 0.0;
    for (i, j, sign) in [(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, -1.0)] {
        let dist = cglmp_difference_distribution(&a[i], &b[j], rho);
        total += sign * dist.iter().zip(&w).map(|(p, w)| p * w).sum::<f64>();
    }
    Ok(total)
}

/// The functional for a deterministic strategy `(a₀, a₁; b₀, b₁)` of outcomes.
pub fn cglmp_deterministic(cfg: &CglmpConfig, d: PrimeDim, a: [u64; 2], b: [u64; 2]) -> f64 {
    let w = cglmp_outcome_weights(cfg, d);
    let m = d.get();
    let at = |x: u64, y: u64| w[((x + m - y) % m) as usize];
    at(a[0], b[0]) + at(a[0], b[1]) + at(a[1], b[0]) - at(a[1], b[1])
}

/// Largest value of the functional over all `d⁴` deterministic strategies.
pub fn cglmp_lhv_bound(cfg: &CglmpConfig, d: PrimeDim) -> f64 {
    let m = d.get();
    let mut best = f64::NEG_INFINITY;
    for a0 in 0..m {
        for a1 in 0..m {
            for b0 in 0..m {
                for b1 in 0..m {
                    best = best.max(cglmp_deterministic(cfg, d, [a0, a1], [b0, b1]));
                }
            }
        }
    }
    best
}

/// Mode sum `Σ_k γ_k [ω^{k(p₀−q₀)} + ω^{k(p₁−q₀)} + ω^{k(p₀−q₁)} − ω^{k(p₁−q₁)}]` over
/// the symmetric representatives `k = ±1, …, ±(d−1)/2`.
pub fn cglmp_mode_sum(cfg: &CglmpConfig, d: PrimeDim) -> Complex64 {
    let h = (d.get() as i64 - 1) / 2;
    let diff = |p: RationalExponent, q: RationalExponent| p.checked_add(q.negate());
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (-h..=h).filter(|&k| k != 0) {
        let g = cfg.weight(k.rem_euclid(d.get() as i64) as usize, d);
        let ph = |p, q| omega_pow(diff(p, q).scale(k), d);
        acc +=
            (ph(cfg.p0, cfg.q0) + ph(cfg.p1, cfg.q0) + ph(cfg.p0, cfg.q1) - ph(cfg.p1, cfg.q1)) * g;
    }
    acc
}

/// `1⊗1 + σ_z⊗σ_z − (Tσ_yT†⊗σ_y + Tσ_xT†⊗σ_y + Tσ_yT†⊗σ_x − Tσ_xT†⊗σ_x)/√2`.
pub fn qubit_chsh_t() -> BellOperator {
    let d = PrimeDim::new(2).expect("prime");
    let t = t_gate();
    let sx = displacement(&operators::PhasePoint::new(1, 0, d));
    let sz = displacement(&operators::PhasePoint::new(0, 1, d));
    let sy = displacement(&operators::PhasePoint::new(1, 1, d));
    let alice = vec![
        Setting {
            name: "T σy T†".into(),
            op: sy.conjugate_by(&t),
        },
        Setting {
            name: "T σx T†".into(),
            op: sx.conjugate_by(&t),
        },
        Setting {
            name: "σz".into(),
            op: sz.clone(),
        },
    ];
    let bob = vec![
        Setting {
            name: "σy".into(),
            op: sy,
        },
        Setting {
            name: "σx".into(),
            op: sx,
        },
        Setting {
            name: "σz".into(),
            op: sz,
        },
    ];
    let c = |x: f64| Complex64::new(x, 0.0);
    let h = 1.0 / SQRT_2;
    let term = |coeff, a: Option<usize>, b: Option<usize>| Term {
        coeff,
        locals: vec![
            a.map_or(Local::IDENTITY, |s| Local::of(s, 1)),
            b.map_or(Local::IDENTITY, |s| Local::of(s, 1)),
        ],
    };
    let terms = vec![
        term(c(1.0), None, None),
        term(c(1.0), Some(2), Some(2)),
        term(c(-h), Some(0), Some(0)),
        term(c(-h), Some(1), Some(0)),
        term(c(-h), Some(0), Some(1)),
        term(c(h), Some(1), Some(1)),
    ];
    BellOperator::from_terms(d, vec![alice, bob], terms).expect("valid terms")
}

/// Singlet fraction `⟨Φ|ρ|Φ⟩`.
pub fn singlet_fraction(rho: &DenseOperator) -> f64 {
    rho.expectation(&bell_state(rho.d())).re
}
