//! Characteristic and Wigner functions over `Z_d^{2n}`.
//!
//! Tables are flat arrays indexed by [`MultiPoint::index`], i.e. row-major over
//! `(x₁, z₁, x₂, z₂, …)`. The Wigner function is
//! `W_𝒖 = d^{−2n} Σ_𝒗 ω^{−[𝒖,𝒗]} χ_𝒗` with `χ_𝒗 = Tr(ρ T_{−𝒗})`, which sums to one
//! and equals `d^{−n} Tr(A_𝒖 ρ)`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::{omega_int, omega_pow, omega_table, PrimeDim, RationalExponent};
use crate::operators::{
    displacement, displacement_prefactor, hilbert_dim, tensor, CubeParams, DenseOperator,
    MultiPoint, PhasePoint, StateVector,
};
use crate::{round_sig, Error, Result};

const STATE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Characteristic,
    Wigner,
}

/// Values over all `d^{2n}` phase-space points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableJson", into = "TableJson")]
pub struct PhaseSpaceTable {
    d: PrimeDim,
    n: usize,
    kind: TableKind,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    d: u64,
    n: usize,
    kind: TableKind,
    values: Vec<[f64; 2]>,
}

impl From<PhaseSpaceTable> for TableJson {
    fn from(t: PhaseSpaceTable) -> Self {
        TableJson {
            d: t.d.get(),
            n: t.n,
            kind: t.kind,
            values: t
                .values
                .iter()
                .map(|c| [round_sig(c.re, 12), round_sig(c.im, 12)])
                .collect(),
        }
    }
}

impl TryFrom<TableJson> for PhaseSpaceTable {
    type Error = Error;
    fn try_from(j: TableJson) -> Result<Self> {
        let d = PrimeDim::new(j.d)?;
        let values = j
            .values
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        PhaseSpaceTable::new(d, j.n, j.kind, values)
    }
}

impl PhaseSpaceTable {
    pub fn new(d: PrimeDim, n: usize, kind: TableKind, values: Vec<Complex64>) -> Result<Self> {
        let want = d.as_usize().pow(2 * n as u32);
        if n == 0 || values.len() != want {
            return Err(Error::Domain(format!(
                "table for n={n}, d={d} needs {want} values, got {}",
                values.len()
            )));
        }
        Ok(PhaseSpaceTable { d, n, kind, values })
    }

    fn wigner_from_real(d: PrimeDim, n: usize, values: Vec<f64>) -> Self {
        PhaseSpaceTable {
            d,
            n,
            kind: TableKind::Wigner,
            values: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn d(&self) -> PrimeDim {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, u: &MultiPoint) -> Complex64 {
        self.values[u.index()]
    }

    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.re).collect()
    }

    pub fn max_re(&self) -> f64 {
        self.values
            .iter()
            .map(|c| c.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_re(&self) -> f64 {
        self.values
            .iter()
            .map(|c| c.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Largest entrywise distance to another table of the same shape.
    pub fn max_abs_diff(&self, other: &PhaseSpaceTable) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "table shapes differ");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn require_wigner(&self) -> Result<()> {
        if self.kind != TableKind::Wigner {
            return Err(Error::Domain("expected a Wigner table".into()));
        }
        Ok(())
    }
}

fn require_hermitian_unit_trace(rho: &DenseOperator) -> Result<()> {
    let h = rho.hermiticity_defect();
    if h > STATE_TOL {
        return Err(Error::Validation(format!(
            "input is not Hermitian (defect {h:.2e})"
        )));
    }
    let tr = rho.trace();
    if (tr - 1.0).norm() > STATE_TOL {
        return Err(Error::Validation(format!(
            "input has trace {tr}, expected 1"
        )));
    }
    Ok(())
}

/// `χ_𝒖 = Tr(ρ T_{−𝒖})` for every `𝒖`.
pub fn characteristic_fn(rho: &DenseOperator) -> Result<PhaseSpaceTable> {
    require_hermitian_unit_trace(rho)?;
    Ok(characteristic_unchecked(rho))
}

pub(crate) fn characteristic_unchecked(rho: &DenseOperator) -> PhaseSpaceTable {
    let (d, n) = (rho.d(), rho.n());
    let p = d.as_usize();
    let size = hilbert_dim(d, n);
    let omegas = omega_table(d);
    let digits: Vec<Vec<usize>> = (0..size)
        .map(|mut k| {
            let mut v = vec![0; n];
            for slot in v.iter_mut().rev() {
                *slot = k % p;
                k /= p;
            }
            v
        })
        .collect();
    let m = rho.matrix();
    let npts = p.pow(2 * n as u32);
    let values = (0..npts)
        .map(|i| {
            let u = MultiPoint::from_index(i, n, d).neg();
            let pref: Complex64 = u.points().iter().map(displacement_prefactor).product();
            let xs: Vec<usize> = u.points().iter().map(|q| q.x.value() as usize).collect();
            let zs: Vec<usize> = u.points().iter().map(|q| q.z.value() as usize).collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, dk) in digits.iter().enumerate() {
                let mut row = 0;
                let mut ph = 0;
                for q in 0..n {
                    row = row * p + (dk[q] + xs[q]) % p;
                    ph += zs[q] * dk[q];
                }
                // Tr(ρ T) = Σ_k ρ[k, T(k)] T[T(k), k]
                acc += m[(k, row)] * omegas[ph % p];
            }
            acc * pref
        })
        .collect();
    PhaseSpaceTable {
        d,
        n,
        kind: TableKind::Characteristic,
        values,
    }
}

/// Symplectic Fourier transform of a characteristic table.
pub fn wigner_from_characteristic(chi: &PhaseSpaceTable) -> Result<PhaseSpaceTable> {
    if chi.kind != TableKind::Characteristic {
        return Err(Error::Domain("expected a characteristic table".into()));
    }
    let (d, n) = (chi.d, chi.n);
    let p = d.as_usize();
    let omegas = omega_table(d);
    let mut vals = chi.values.clone();
    let mut scratch = vec![Complex64::new(0.0, 0.0); p * p];
    // qudit q occupies a p×p block with stride `inner` in the flat index
    for q in 0..n {
        let inner = (p * p).pow((n - 1 - q) as u32);
        let outer = vals.len() / (inner * p * p);
        for o in 0..outer {
            for i in 0..inner {
                let at = |x: usize, z: usize| (o * p * p + x * p + z) * inner + i;
                for a in 0..p {
                    for b in 0..p {
                        let mut s = Complex64::new(0.0, 0.0);
                        for x in 0..p {
                            for z in 0..p {
                                // ω^{a z − b x}
                                s += omegas[(a * z + (p - b) * x) % p] * vals[at(x, z)];
                            }
                        }
                        scratch[a * p + b] = s;
                    }
                }
                for a in 0..p {
                    for b in 0..p {
                        vals[at(a, b)] = scratch[a * p + b];
                    }
                }
            }
        }
    }
    let norm = 1.0 / (p as f64).powi(2 * n as i32);
    Ok(PhaseSpaceTable {
        d,
        n,
        kind: TableKind::Wigner,
        values: vals
            .into_iter()
            .map(|v| Complex64::new(v.re * norm, v.im * norm))
            .collect(),
    })
}

/// Gross's Wigner function of a Hermitian unit-trace operator.
pub fn wigner_fn(rho: &DenseOperator) -> Result<PhaseSpaceTable> {
    wigner_from_characteristic(&characteristic_fn(rho)?)
}

pub fn wigner_of_state(psi: &StateVector) -> PhaseSpaceTable {
    wigner_fn(&psi.projector()).expect("pure states are valid inputs")
}

/// `A_𝒖 = d^{−n} Σ_𝒗 ω^{[𝒖,𝒗]} T_𝒗`, built as a tensor product of single-qudit factors.
pub fn phase_point_op(u: &MultiPoint) -> DenseOperator {
    let d = u.dim();
    let p = d.get() as usize;
    let singles: Vec<DenseOperator> = u
        .points()
        .iter()
        .map(|ui| {
            let mut a = DenseOperator::zeros(d, 1);
            for j in 0..p * p {
                let v = PhasePoint::from_index(j, d);
                a.add_scaled(
                    omega_int(ui.symplectic(&v).value() as i64, d),
                    &displacement(&v),
                );
            }
            a.scale(Complex64::new(1.0 / p as f64, 0.0))
        })
        .collect();
    tensor(&singles).expect("at least one qudit")
}

/// `N = (Σ|W| − 1) / 2`, with rounding noise below `1e−12` clamped to zero.
pub fn negativity_volume(w: &PhaseSpaceTable) -> Result<f64> {
    w.require_wigner()?;
    let n = (w.values.iter().map(|c| c.re.abs()).sum::<f64>() - 1.0) / 2.0;
    Ok(if n < 1e-12 { 0.0 } else { n })
}

/// Closed-form Wigner table of `(U_ν ⊗ 1)|Φ⟩`.
///
/// For `d = 2` the parameters are ignored and the table of `(T ⊗ 1)|Φ⟩` with
/// `T = diag(1, e^{iπ/4})` is returned.
pub fn wigner_rotated_bell_closed(p: &CubeParams) -> PhaseSpaceTable {
    let d = p.dim();
    match d.get() {
        2 => qubit_t_wigner(),
        3 => qutrit_closed(p),
        _ => cube_closed(p),
    }
}

fn qubit_t_wigner() -> PhaseSpaceTable {
    let d = PrimeDim::new(2).expect("prime");
    let sgn = |k: u64| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let values = (0..16)
        .map(|i| {
            let u = MultiPoint::from_index(i, 2, d);
            let (a, b) = (u.points()[0], u.points()[1]);
            let (x1, z1, x2, z2) = (a.x.value(), a.z.value(), b.x.value(), b.z.value());
            let corr = 1.0 - sgn(x1 + x2) + sgn(x1) + sgn(x2);
            (1.0 + sgn(x1 + x2) + sgn(z1 + z2) * corr / SQRT_2) / 16.0
        })
        .collect();
    PhaseSpaceTable::wigner_from_real(d, 2, values)
}

/// Coefficient `a₁` of the linear term for the point `(x, z₁), (x, z₂)`, `d > 3`.
fn cube_a1(p: &CubeParams, x: u64, zsum: u64) -> u64 {
    let d = p.dim();
    let m = d.get();
    let (g, z, e) = (p.gamma.value(), p.z.value(), p.eps.value());
    let quad = (x * x + x + d.inv_raw(6)) % m;
    let lin = (e + z * x % m + d.half() * (g * quad % m)) % m;
    (lin + m - zsum % m) % m
}

/// `a₃ = 24⁻¹ γ`, `d > 3`.
pub fn cube_a3(p: &CubeParams) -> u64 {
    let d = p.dim();
    d.inv_raw(24) * p.gamma.value() % d.get()
}

/// `S(a₁, a₃) = Σ_k ω^{a₃k³ + a₁k}`, real by the `k ↦ −k` symmetry.
pub fn cubic_character_sum(a1: u64, a3: u64, d: PrimeDim) -> f64 {
    let m = d.get();
    (0..m)
        .map(|k| omega_int(((a3 * (k * k % m) % m * k + a1 * k) % m) as i64, d).re)
        .sum()
}

/// Third-root sum `Σ_{k∈{−1,0,1}} ω^{a₁k + γk/3}` at `d = 3`.
pub fn qutrit_character_sum(a1: u64, gamma: u64) -> f64 {
    let d = PrimeDim::new(3).expect("prime");
    (-1i64..=1)
        .map(|k| {
            let e = RationalExponent::new(3 * a1 as i64 * k + gamma as i64 * k, 3)
                .expect("denominator 3");
            omega_pow(e, d).re
        })
        .sum()
}

fn fill_bell_support(d: PrimeDim, weight: impl Fn(u64, u64) -> f64) -> PhaseSpaceTable {
    let m = d.get();
    let p = m as usize;
    let mut values = vec![0.0; p.pow(4)];
    for x in 0..m {
        for z1 in 0..m {
            for z2 in 0..m {
                let idx = ((x * m + z1) * m + x) * m + z2;
                values[idx as usize] = weight(x, (z1 + z2) % m);
            }
        }
    }
    PhaseSpaceTable::wigner_from_real(d, 2, values)
}

fn cube_closed(p: &CubeParams) -> PhaseSpaceTable {
    let d = p.dim();
    let a3 = cube_a3(p);
    let scale = 1.0 / (d.get() as f64).powi(3);
    fill_bell_support(d, |x, zsum| {
        scale * cubic_character_sum(cube_a1(p, x, zsum), a3, d)
    })
}

fn qutrit_closed(p: &CubeParams) -> PhaseSpaceTable {
    let d = p.dim();
    let (g, z, e) = (p.gamma.value(), p.z.value(), p.eps.value());
    fill_bell_support(d, |x, zsum| {
        let a1 = (zsum + 9 - z * x % 3 - e + g * (x * x + x + 2)) % 3;
        qutrit_character_sum(a1, g) / 27.0
    })
}

/// Outcome of [`extremal_character_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterScan {
    pub d: u64,
    /// `d² max W`.
    pub max_scaled: f64,
    /// `d³ min W`.
    pub min_scaled: f64,
    /// `(a₁, a₃)` attaining the maximum.
    pub argmax: (u64, u64),
    pub argmin: (u64, u64),
}

/// Exhaustive scan of the closed-form character sum over `(a₁, a₃) ∈ Z_d × Z_d^*`.
pub fn extremal_character_scan(d: PrimeDim) -> Result<CharacterScan> {
    if d.get() < 3 {
        return Err(Error::UnsupportedDimension {
            d: d.get(),
            reason: "the character scan needs d ≥ 3",
        });
    }
    let m = d.get();
    let sum = |a1: u64, a3: u64| {
        if m == 3 {
            qutrit_character_sum(a1, a3)
        } else {
            cubic_character_sum(a1, a3, d)
        }
    };
    let mut best = (f64::NEG_INFINITY, (0, 1));
    let mut worst = (f64::INFINITY, (0, 1));
    for a3 in 1..m {
        for a1 in 0..m {
            let s = sum(a1, a3);
            if s > best.0 {
                best = (s, (a1, a3));
            }
            if s < worst.0 {
                worst = (s, (a1, a3));
            }
        }
    }
    Ok(CharacterScan {
        d: m,
        max_scaled: best.0 / m as f64,
        min_scaled: worst.0,
        argmax: best.1,
        argmin: worst.1,
    })
}

/// Largest negativity volume of `(U_ν ⊗ 1)|Φ⟩` over `γ ∈ Z_d^*` at `z = ε = 0`.
/// Returns `(N, γ)`.
pub fn max_negativity(d: PrimeDim) -> Result<(f64, u64)> {
    d.require_odd("negativity scan over cube parameters needs d ≥ 3")?;
    let mut best = (f64::NEG_INFINITY, 1);
    for g in 1..d.get() {
        let p = CubeParams::new(g as i64, 0, 0, d)?;
        let n = negativity_volume(&wigner_rotated_bell_closed(&p))?;
        if n > best.0 + 1e-14 {
            best = (n, g);
        }
    }
    Ok(best)
}

/// Measurement setting `r ∈ [0, d]` of a displacement: the commuting class `𝒢_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SettingIndex {
    pub r: usize,
}

impl SettingIndex {
    /// Decomposes `u ≠ 0` as `s · g_r` with `g_r = (1, r)` or `g_d = (0, 1)`.
    /// Returns `None` for the origin.
    pub fn of(u: &PhasePoint) -> Option<(SettingIndex, u64)> {
        let d = u.dim();
        let (x, z) = (u.x.value(), u.z.value());
        if x != 0 {
            let r = z * d.inv_raw(x) % d.get();
            Some((SettingIndex { r: r as usize }, x))
        } else if z != 0 {
            Some((SettingIndex { r: d.as_usize() }, z))
        } else {
            None
        }
    }

    /// The generator `g_r`.
    pub fn generator(self, d: PrimeDim) -> PhasePoint {
        if self.r == d.as_usize() {
            PhasePoint::new(0, 1, d)
        } else {
            PhasePoint::new(1, self.r as i64, d)
        }
    }
}

/// `F(α)_u = d⁻¹ Σ_v ω^{[u,v] + s(v) α_{r(v)}}` over `Z_d²`, row-major in `(x, z)`.
pub fn strategy_fourier(alpha: &[u64], d: PrimeDim) -> Result<Vec<f64>> {
    let p = d.as_usize();
    if alpha.len() != p + 1 {
        return Err(Error::Domain(format!(
            "strategy needs {} entries, got {}",
            p + 1,
            alpha.len()
        )));
    }
    let val: Vec<u64> = (0..p * p)
        .map(|j| {
            let v = PhasePoint::from_index(j, d);
            SettingIndex::of(&v).map_or(0, |(r, s)| s * (alpha[r.r] % d.get()) % d.get())
        })
        .collect();
    Ok((0..p * p)
        .map(|i| {
            let u = PhasePoint::from_index(i, d);
            let s: f64 = (0..p * p)
                .map(|j| {
                    let v = PhasePoint::from_index(j, d);
                    omega_int((u.symplectic(&v).value() + val[j]) as i64, d).re
                })
                .sum();
            s / p as f64
        })
        .collect())
}

/// Lower bound on the characteristic-function values used for the `C_min` column.
pub fn c_min(d: PrimeDim) -> f64 {
    match d.get() {
        2 => -1.0 / SQRT_2,
        3 => 1.0 + 2.0 * (8.0 * PI / 9.0).cos(),
        m => 1.0 - (m as f64 - 1.0) * (PI / m as f64).cos(),
    }
}

/// Size of the value set `|g(Z_d)|` of a polynomial with coefficients `c₀ + c₁k + …`.
pub fn value_set_size(coeffs: &[u64], d: PrimeDim) -> usize {
    let m = d.get();
    let mut seen = vec![false; m as usize];
    for k in 0..m {
        let v = coeffs.iter().rev().fold(0, |acc, &c| (acc * k + c) % m);
        seen[v as usize] = true;
    }
    seen.into_iter().filter(|&b| b).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{bell_state, cube_unitary, rotated_bell, Side};
    use crate::sampling::random_density_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dim(d: u64) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    #[test]
    fn maximally_mixed_tables() {
        let d = dim(3);
        let rho = DenseOperator::identity(d, 1).scale(Complex64::new(1.0 / 3.0, 0.0));
        let chi = characteristic_fn(&rho).unwrap();
        assert!((chi.values()[0] - 1.0).norm() < 1e-14);
        assert!(chi.values()[1..].iter().all(|c| c.norm() < 1e-14));
        let w = wigner_fn(&rho).unwrap();
        assert!(w.values().iter().all(|c| (c.re - 1.0 / 9.0).abs() < 1e-14));
    }

    #[test]
    fn computational_basis_state() {
        let d = dim(3);
        let chi = characteristic_fn(&StateVector::basis(d, 1, 0).projector()).unwrap();
        for i in 0..9 {
            let u = PhasePoint::from_index(i, d);
            let want = if u.x.is_zero() { 1.0 } else { 0.0 };
            assert!((chi.values()[i] - want).norm() < 1e-14);
        }
        let d5 = dim(5);
        let w = wigner_of_state(&StateVector::basis(d5, 1, 0));
        for i in 0..25 {
            let u = PhasePoint::from_index(i, d5);
            let want = if u.x.is_zero() { 0.2 } else { 0.0 };
            assert!((w.values()[i].re - want).abs() < 1e-14);
        }
    }

    #[test]
    fn bell_state_tables() {
        for p in [3, 5] {
            let d = dim(p);
            let chi = characteristic_fn(&bell_state(d).projector()).unwrap();
            let support = chi.values().iter().filter(|c| c.norm() > 1e-9).count();
            assert_eq!(support, (p * p) as usize);
            assert!(chi
                .values()
                .iter()
                .all(|c| c.norm() < 1e-9 || (c.norm() - 1.0).abs() < 1e-12));
            let w = wigner_of_state(&bell_state(d));
            for i in 0..w.len() {
                let u = MultiPoint::from_index(i, 2, d);
                let (a, b) = (u.points()[0], u.points()[1]);
                let on = a.x == b.x && (a.z + b.z).is_zero();
                let want = if on { 1.0 / (p * p) as f64 } else { 0.0 };
                assert!((w.values()[i].re - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn reconstruction_from_characteristic() {
        let d = dim(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density_matrix(d, 2, &mut rng);
        let chi = characteristic_fn(&rho).unwrap();
        let mut acc = DenseOperator::zeros(d, 2);
        for (i, c) in chi.values().iter().enumerate() {
            let u = MultiPoint::from_index(i, 2, d);
            acc.add_scaled(*c / 9.0, &crate::operators::displacement_multi(&u));
        }
        assert!(acc.max_abs_diff(&rho) < 1e-9);
    }

    #[test]
    fn phase_point_operators() {
        let d = dim(3);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for i in 0..9 {
            let a = phase_point_op(&MultiPoint::from_index(i, 1, d));
            assert!((a.trace() - 1.0).norm() < 1e-12);
            assert!(a.hermiticity_defect() < 1e-12);
        }
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let rho = random_density_matrix(d, 1, &mut rng);
            let w = wigner_fn(&rho).unwrap();
            for i in 0..9 {
                let a = phase_point_op(&MultiPoint::from_index(i, 1, d));
                worst = worst.max((a.trace_with(&rho).re / 3.0 - w.values()[i].re).abs());
            }
        }
        assert!(worst < 1e-10);
    }

    #[test]
    fn closed_form_matches_matrix_oracle() {
        for (p, params) in [
            (3, (1, 0, 0)),
            (3, (2, 1, 2)),
            (5, (1, 0, 0)),
            (5, (3, 4, 2)),
            (7, (6, 2, 5)),
        ] {
            let d = dim(p);
            let cp = CubeParams::new(params.0, params.1, params.2, d).unwrap();
            let st = rotated_bell(&cube_unitary(&cp).unwrap(), Side::First).unwrap();
            let oracle = wigner_of_state(&st);
            assert!(
                wigner_rotated_bell_closed(&cp).max_abs_diff(&oracle) < 1e-10,
                "d={p}"
            );
        }
    }

    #[test]
    fn qubit_closed_form() {
        let d = dim(2);
        let cp = CubeParams::new(1, 0, 0, d).unwrap();
        let w = wigner_rotated_bell_closed(&cp);
        let st = rotated_bell(&crate::operators::t_gate(), Side::First).unwrap();
        assert!(w.max_abs_diff(&wigner_of_state(&st)) < 1e-12);
        assert!((8.0 * w.min_re() + 1.0 / SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn scan_examples() {
        let s3 = extremal_character_scan(dim(3)).unwrap();
        assert!((s3.max_scaled - 0.844).abs() < 5e-4 && (s3.min_scaled + 0.879).abs() < 5e-4);
        let s5 = extremal_character_scan(dim(5)).unwrap();
        assert!((s5.max_scaled - 0.724).abs() < 5e-4 && (s5.min_scaled + 2.236).abs() < 5e-4);
        assert!(extremal_character_scan(dim(2)).is_err());
    }

    #[test]
    fn fourier_of_linear_assignment_is_a_delta() {
        let d = dim(5);
        let a = PhasePoint::new(2, 3, d);
        let alpha: Vec<u64> = (0..=5)
            .map(|r| a.symplectic(&SettingIndex { r }.generator(d)).value())
            .collect();
        let f = strategy_fourier(&alpha, d).unwrap();
        for (i, v) in f.iter().enumerate() {
            let want = if i == (-a).index() { 5.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn setting_index_decomposition() {
        let d = dim(7);
        for i in 1..49 {
            let u = PhasePoint::from_index(i, d);
            let (r, s) = SettingIndex::of(&u).unwrap();
            let g = r.generator(d);
            assert_eq!(
                PhasePoint {
                    x: g.x * d.elem(s as i64),
                    z: g.z * d.elem(s as i64)
                },
                u
            );
        }
        assert!(SettingIndex::of(&PhasePoint::new(0, 0, d)).is_none());
    }

    #[test]
    fn c_min_rows() {
        assert!((c_min(dim(3)) + 0.879).abs() < 5e-4);
        assert!((c_min(dim(5)) + 2.236).abs() < 5e-4);
        assert!((c_min(dim(2)) + 0.707).abs() < 5e-4);
    }

    #[test]
    fn table_json_round_trip() {
        let d = dim(3);
        let w = wigner_of_state(&bell_state(d));
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.starts_with("{\"d\":3,\"n\":2,\"kind\":\"wigner\""));
        let back: PhaseSpaceTable = serde_json::from_str(&s).unwrap();
        assert!(back.max_abs_diff(&w) < 1e-12);
    }
}
