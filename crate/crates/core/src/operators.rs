//! Dense operators on `(C^d)^{⊗n}`.
//!
//! Party 1 owns the most significant tensor index throughout, so basis state
//! `|k₁ k₂ … kₙ⟩` sits at flat index `k₁ d^{n−1} + … + kₙ`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::{omega_int, omega_pow, FieldElement, PrimeDim, RationalExponent};
use crate::{Error, Result};

const UNITARY_TOL: f64 = 1e-8;

/// A point `u = (x, z) ∈ Z_d²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhasePoint {
    pub x: FieldElement,
    pub z: FieldElement,
}

impl PhasePoint {
    pub fn new(x: i64, z: i64, d: PrimeDim) -> Self {
        PhasePoint {
            x: d.elem(x),
            z: d.elem(z),
        }
    }

    pub fn dim(&self) -> PrimeDim {
        self.x.dim()
    }

    /// Index in the row-major `(x, z)` layout.
    pub fn index(&self) -> usize {
        (self.x.value() * self.dim().get() + self.z.value()) as usize
    }

    pub fn from_index(i: usize, d: PrimeDim) -> Self {
        let n = d.as_usize();
        PhasePoint::new((i / n) as i64, (i % n) as i64, d)
    }

    /// Symplectic form `[u, v] = u_z v_x − u_x v_z`.
    pub fn symplectic(&self, v: &PhasePoint) -> FieldElement {
        self.z * v.x - self.x * v.z
    }
}

impl std::ops::Add for PhasePoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        PhasePoint {
            x: self.x + rhs.x,
            z: self.z + rhs.z,
        }
    }
}

impl std::ops::Neg for PhasePoint {
    type Output = Self;
    fn neg(self) -> Self {
        PhasePoint {
            x: -self.x,
            z: -self.z,
        }
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x.value(), self.z.value())
    }
}

/// A point `𝒖 ∈ Z_d^{2n}`, one [`PhasePoint`] per qudit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoint {
    points: Vec<PhasePoint>,
}

impl MultiPoint {
    pub fn new(points: Vec<PhasePoint>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::Domain("a multi-point needs at least one qudit".into()))?;
        if points.iter().any(|p| p.dim() != first.dim()) {
            return Err(Error::Domain(
                "multi-point components have mixed dimensions".into(),
            ));
        }
        Ok(MultiPoint { points })
    }

    /// Builds from raw `(x, z)` pairs.
    pub fn from_pairs(pairs: &[(i64, i64)], d: PrimeDim) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(x, z)| PhasePoint::new(x, z, d))
                .collect(),
        )
    }

    pub fn zero(n: usize, d: PrimeDim) -> Self {
        MultiPoint {
            points: vec![PhasePoint::new(0, 0, d); n.max(1)],
        }
    }

    pub fn points(&self) -> &[PhasePoint] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> PrimeDim {
        self.points[0].dim()
    }

    pub fn is_zero(&self) -> bool {
        self.points.iter().all(|p| p.x.is_zero() && p.z.is_zero())
    }

    /// Flat index over `(x₁, z₁, x₂, z₂, …)`, row-major.
    pub fn index(&self) -> usize {
        let d = self.dim().as_usize();
        self.points.iter().fold(0, |acc, p| acc * d * d + p.index())
    }

    pub fn from_index(mut i: usize, n: usize, d: PrimeDim) -> Self {
        let dd = d.as_usize() * d.as_usize();
        let mut points = vec![PhasePoint::new(0, 0, d); n];
        for slot in points.iter_mut().rev() {
            *slot = PhasePoint::from_index(i % dd, d);
            i /= dd;
        }
        MultiPoint { points }
    }

    pub fn symplectic(&self, v: &MultiPoint) -> FieldElement {
        assert_eq!(self.n(), v.n(), "multi-points of different length");
        self.points
            .iter()
            .zip(&v.points)
            .fold(FieldElement::zero(self.dim()), |acc, (a, b)| {
                acc + a.symplectic(b)
            })
    }

    pub fn scale(&self, k: i64) -> Self {
        let kk = self.dim().elem(k);
        MultiPoint {
            points: self
                .points
                .iter()
                .map(|p| PhasePoint {
                    x: p.x * kk,
                    z: p.z * kk,
                })
                .collect(),
        }
    }

    pub fn add(&self, v: &MultiPoint) -> Self {
        MultiPoint {
            points: self
                .points
                .iter()
                .zip(&v.points)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }
}

impl fmt::Display for MultiPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, "⊗")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A square complex matrix acting on `n` qudits of dimension `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    d: PrimeDim,
    n: usize,
    m: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn from_matrix(d: PrimeDim, n: usize, m: DMatrix<Complex64>) -> Result<Self> {
        let size = hilbert_dim(d, n);
        if n == 0 || m.nrows() != size || m.ncols() != size {
            return Err(Error::Domain(format!(
                "expected a {size}×{size} matrix for n={n}, d={d}; got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(DenseOperator { d, n, m })
    }

    pub fn identity(d: PrimeDim, n: usize) -> Self {
        let size = hilbert_dim(d, n);
        DenseOperator {
            d,
            n,
            m: DMatrix::identity(size, size),
        }
    }

    pub fn zeros(d: PrimeDim, n: usize) -> Self {
        let size = hilbert_dim(d, n);
        DenseOperator {
            d,
            n,
            m: DMatrix::zeros(size, size),
        }
    }

    pub fn diagonal(d: PrimeDim, entries: &[Complex64]) -> Result<Self> {
        let n = qudits_for(d, entries.len())?;
        Ok(DenseOperator {
            d,
            n,
            m: DMatrix::from_diagonal(&DVector::from_column_slice(entries)),
        })
    }

    pub fn d(&self) -> PrimeDim {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total Hilbert-space dimension `d^n`.
    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.m[(r, c)]
    }

    pub fn dagger(&self) -> Self {
        DenseOperator {
            d: self.d,
            n: self.n,
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        DenseOperator {
            d: self.d,
            n: self.n,
            m: &self.m * c,
        }
    }

    pub fn mul(&self, other: &DenseOperator) -> Self {
        self.same_shape(other);
        DenseOperator {
            d: self.d,
            n: self.n,
            m: &self.m * &other.m,
        }
    }

    pub fn add(&self, other: &DenseOperator) -> Self {
        self.same_shape(other);
        DenseOperator {
            d: self.d,
            n: self.n,
            m: &self.m + &other.m,
        }
    }

    pub fn add_scaled(&mut self, c: Complex64, other: &DenseOperator) {
        self.same_shape(other);
        self.m.zip_apply(&other.m, |a, b| *a += c * b);
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = DenseOperator::identity(self.d, self.n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, u: &DenseOperator) -> Self {
        u.mul(self).mul(&u.dagger())
    }

    pub fn apply(&self, v: &StateVector) -> DVector<Complex64> {
        &self.m * &v.amps
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Complex64 {
        psi.amps.dotc(&(&self.m * &psi.amps))
    }

    /// `Tr(A ρ)`.
    pub fn trace_with(&self, rho: &DenseOperator) -> Complex64 {
        self.same_shape(rho);
        let mut t = Complex64::new(0.0, 0.0);
        for i in 0..self.size() {
            for j in 0..self.size() {
                t += self.m[(i, j)] * rho.m[(j, i)];
            }
        }
        t
    }

    /// Frobenius distance.
    pub fn distance(&self, other: &DenseOperator) -> f64 {
        (&self.m - &other.m).norm()
    }

    /// Largest absolute entry of `A − B`.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        (&self.m - &other.m)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    pub fn unitarity_defect(&self) -> f64 {
        let p = &self.m * self.m.adjoint();
        let id = DMatrix::<Complex64>::identity(self.size(), self.size());
        (p - id).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn require_unitary(&self, what: &str) -> Result<()> {
        let defect = self.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::Validation(format!(
                "{what} is not unitary (defect {defect:.2e})"
            )));
        }
        Ok(())
    }

    /// Checks that this is a density matrix to tolerance `tol`: Hermitian, unit trace, positive.
    pub fn require_state(&self, tol: f64) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > tol {
            return Err(Error::Validation(format!(
                "operator is not Hermitian (defect {h:.2e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > tol {
            return Err(Error::Validation(format!("trace is {tr}, expected 1")));
        }
        let herm = (&self.m + self.m.adjoint()) * Complex64::new(0.5, 0.0);
        let min_eig = herm
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(Error::Validation(format!(
                "operator has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.m + self.m.adjoint()) * Complex64::new(0.5, 0.0);
        let mut e: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    fn same_shape(&self, other: &DenseOperator) {
        assert_eq!(
            (self.d, self.n),
            (other.d, other.n),
            "operator shapes differ"
        );
    }
}

/// A normalized pure state on `n` qudits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    d: PrimeDim,
    n: usize,
    amps: DVector<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that must already have unit norm within `1e−10`.
    pub fn from_amplitudes(d: PrimeDim, amps: DVector<Complex64>) -> Result<Self> {
        let n = qudits_for(d, amps.len())?;
        let norm = amps.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!(
                "state vector has norm {norm}, expected 1"
            )));
        }
        Ok(StateVector { d, n, amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(d: PrimeDim, amps: DVector<Complex64>) -> Result<Self> {
        let n = qudits_for(d, amps.len())?;
        let norm = amps.norm();
        if norm < 1e-12 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Ok(StateVector {
            d,
            n,
            amps: amps / Complex64::new(norm, 0.0),
        })
    }

    pub fn basis(d: PrimeDim, n: usize, index: usize) -> Self {
        let mut amps = DVector::zeros(hilbert_dim(d, n));
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { d, n, amps }
    }

    pub fn d(&self) -> PrimeDim {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    pub fn projector(&self) -> DenseOperator {
        DenseOperator {
            d: self.d,
            n: self.n,
            m: &self.amps * self.amps.adjoint(),
        }
    }

    /// Phase-insensitive fidelity `|⟨a|b⟩|`.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }
}

pub(crate) fn hilbert_dim(d: PrimeDim, n: usize) -> usize {
    d.as_usize().pow(n as u32)
}

fn qudits_for(d: PrimeDim, size: usize) -> Result<usize> {
    let mut n = 0;
    let mut s = 1;
    while s < size {
        s *= d.as_usize();
        n += 1;
    }
    if s != size || n == 0 {
        return Err(Error::Domain(format!(
            "size {size} is not a positive power of {d}"
        )));
    }
    Ok(n)
}

/// Parameters `(γ, z, ε)` of the cube polynomial, `γ ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubeParams {
    pub gamma: FieldElement,
    pub z: FieldElement,
    pub eps: FieldElement,
}

impl CubeParams {
    pub fn new(gamma: i64, z: i64, eps: i64, d: PrimeDim) -> Result<Self> {
        let gamma = d.elem(gamma);
        if gamma.is_zero() {
            return Err(Error::Domain("cube parameter γ must be nonzero".into()));
        }
        Ok(CubeParams {
            gamma,
            z: d.elem(z),
            eps: d.elem(eps),
        })
    }

    pub fn dim(&self) -> PrimeDim {
        self.gamma.dim()
    }
}

impl fmt::Display for CubeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "γ={} z={} ε={}",
            self.gamma.value(),
            self.z.value(),
            self.eps.value()
        )
    }
}

/// The shift `X` and clock `Z` on one qudit.
pub fn pauli_xz(d: PrimeDim) -> (DenseOperator, DenseOperator) {
    let n = d.as_usize();
    let mut x = DMatrix::zeros(n, n);
    for k in 0..n {
        x[((k + 1) % n, k)] = Complex64::new(1.0, 0.0);
    }
    let z = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        (0..n).map(|k| omega_int(k as i64, d)),
    ));
    (
        DenseOperator { d, n: 1, m: x },
        DenseOperator { d, n: 1, m: z },
    )
}

/// Phase `c` and shift `x` with `T_u |k⟩ = c · ω^{z k} |k + x⟩`.
#[inline]
pub(crate) fn displacement_prefactor(u: &PhasePoint) -> Complex64 {
    let d = u.dim();
    let (x, z) = (u.x.value(), u.z.value());
    if d.is_odd() {
        omega_int((d.half() * x % d.get() * z) as i64, d)
    } else {
        // i^{xz}
        Complex64::from_polar(1.0, PI / 2.0 * (x * z) as f64)
    }
}

/// `T_u = ω^{2⁻¹ x z} X^x Z^z`; for `d = 2` the Pauli convention `i^{xz} X^x Z^z`.
pub fn displacement(u: &PhasePoint) -> DenseOperator {
    let d = u.dim();
    let n = d.as_usize();
    let c = displacement_prefactor(u);
    let (x, z) = (u.x.value() as usize, u.z.value() as i64);
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        m[((k + x) % n, k)] = c * omega_int(z * k as i64, d);
    }
    DenseOperator { d, n: 1, m }
}

/// `T_𝒖 = ⊗ᵢ T_{uᵢ}`.
pub fn displacement_multi(u: &MultiPoint) -> DenseOperator {
    let ops: Vec<DenseOperator> = u.points().iter().map(displacement).collect();
    tensor(&ops).expect("nonempty")
}

/// Kronecker product with the first factor most significant.
pub fn tensor(ops: &[DenseOperator]) -> Result<DenseOperator> {
    let (first, rest) = ops
        .split_first()
        .ok_or_else(|| Error::Domain("tensor product of an empty list".into()))?;
    let mut acc = first.clone();
    for op in rest {
        if op.d != acc.d {
            return Err(Error::Domain(
                "tensor factors have different local dimensions".into(),
            ));
        }
        acc = DenseOperator {
            d: acc.d,
            n: acc.n + op.n,
            m: acc.m.kronecker(&op.m),
        };
    }
    Ok(acc)
}

/// Exponents `ν_k` of the cube unitary as rational exponents of `ω`.
pub fn cube_exponents(p: &CubeParams) -> Result<Vec<RationalExponent>> {
    let d = p.dim();
    d.require_odd("cube unitaries need d ≥ 3")?;
    let (g, z, e) = (
        p.gamma.value() as i64,
        p.z.value() as i64,
        p.eps.value() as i64,
    );
    let dd = d.get() as i64;
    if dd == 3 {
        return (0..3)
            .map(|k| RationalExponent::new(6 * z * k * k + 2 * g * k + 3 * k * e, 3))
            .collect();
    }
    let i12 = d.inv_raw(12) as i64;
    Ok((0..dd)
        .map(|k| {
            let inner = (g + k * (6 * z + (2 * k + 3) * g)).rem_euclid(dd);
            let nu = (i12 * (k * inner % dd) + e * k).rem_euclid(dd);
            RationalExponent::integer(nu)
        })
        .collect())
}

/// Diagonal cube unitary `U_ν = Σ_k ω^{ν_k} |k⟩⟨k|`.
pub fn cube_unitary(p: &CubeParams) -> Result<DenseOperator> {
    let d = p.dim();
    let phases: Vec<Complex64> = cube_exponents(p)?
        .into_iter()
        .map(|e| omega_pow(e, d))
        .collect();
    DenseOperator::diagonal(d, &phases)
}

/// `V_q = Σ_k ω^{k q} |k⟩⟨k|`.
pub fn rational_diag(q: RationalExponent, d: PrimeDim) -> DenseOperator {
    let phases: Vec<Complex64> = (0..d.get() as i64)
        .map(|k| omega_pow(q.scale(k), d))
        .collect();
    DenseOperator::diagonal(d, &phases).expect("d entries")
}

/// Diagonal unitary with arbitrary rational exponents per basis state.
pub fn exponent_diag(exps: &[RationalExponent], d: PrimeDim) -> Result<DenseOperator> {
    let phases: Vec<Complex64> = exps.iter().map(|&e| omega_pow(e, d)).collect();
    DenseOperator::diagonal(d, &phases)
}

/// The qubit `T = diag(1, e^{iπ/4})`.
pub fn t_gate() -> DenseOperator {
    let d = PrimeDim::new(2).expect("2 is prime");
    DenseOperator::diagonal(
        d,
        &[
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, PI / 4.0),
        ],
    )
    .expect("two entries")
}

/// `|Φ⟩ = Σ_k |k k⟩ / √d`.
pub fn bell_state(d: PrimeDim) -> StateVector {
    let n = d.as_usize();
    let mut amps = DVector::zeros(n * n);
    let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for k in 0..n {
        amps[k * n + k] = a;
    }
    StateVector { d, n: 2, amps }
}

/// Which tensor factor a local unitary acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    First,
    Second,
}

/// `(U ⊗ 1)|Φ⟩` or `(1 ⊗ U)|Φ⟩`.
pub fn rotated_bell(u: &DenseOperator, side: Side) -> Result<StateVector> {
    if u.n != 1 {
        return Err(Error::Domain(
            "rotated_bell expects a single-qudit unitary".into(),
        ));
    }
    u.require_unitary("rotation")?;
    let id = DenseOperator::identity(u.d, 1);
    let op = match side {
        Side::First => tensor(&[u.clone(), id])?,
        Side::Second => tensor(&[id, u.clone()])?,
    };
    let phi = bell_state(u.d);
    StateVector::normalized(u.d, op.apply(&phi))
}

/// An Abelian group of phased displacements `ω^{t} T_𝒖`, kept by generators.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerGroup {
    d: PrimeDim,
    n: usize,
    generators: Vec<(MultiPoint, FieldElement)>,
}

impl StabilizerGroup {
    /// Validates pairwise commutation and that the generators span an `n`-dimensional
    /// isotropic subspace.
    pub fn new(generators: Vec<(MultiPoint, i64)>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Domain("stabilizer group needs generators".into()))?;
        let (d, n) = (first.0.dim(), first.0.n());
        if generators.iter().any(|(g, _)| g.dim() != d || g.n() != n) {
            return Err(Error::Domain("generators have inconsistent shapes".into()));
        }
        for (i, (a, _)) in generators.iter().enumerate() {
            for (b, _) in &generators[i + 1..] {
                if !a.symplectic(b).is_zero() {
                    return Err(Error::Domain(format!(
                        "generators {a} and {b} do not commute"
                    )));
                }
            }
        }
        let rows: Vec<Vec<u64>> = generators.iter().map(|(g, _)| flatten(g)).collect();
        let rank = rank_mod(rows, d.get());
        if rank != n {
            return Err(Error::Domain(format!(
                "generators span a rank-{rank} subspace; a maximal group needs rank {n}"
            )));
        }
        Ok(StabilizerGroup {
            d,
            n,
            generators: generators
                .into_iter()
                .map(|(g, t)| (g, d.elem(t)))
                .collect(),
        })
    }

    pub fn d(&self) -> PrimeDim {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[(MultiPoint, FieldElement)] {
        &self.generators
    }

    /// The operator `ω^{t} T_𝒖` for one generator.
    pub fn generator_op(&self, i: usize) -> DenseOperator {
        let (g, t) = &self.generators[i];
        displacement_multi(g).scale(omega_int(t.value() as i64, self.d))
    }

    /// All `d^n` points of the support `Σ = span(generators)`, sorted by flat index.
    pub fn support(&self) -> Vec<MultiPoint> {
        let dd = self.d.get();
        let k = self.generators.len();
        let mut seen = std::collections::BTreeMap::new();
        let total = dd.pow(k as u32);
        for mut c in 0..total {
            let mut acc = MultiPoint::zero(self.n, self.d);
            for (g, _) in &self.generators {
                acc = acc.add(&g.scale((c % dd) as i64));
                c /= dd;
            }
            seen.insert(acc.index(), acc);
        }
        seen.into_values().collect()
    }
}

fn flatten(u: &MultiPoint) -> Vec<u64> {
    u.points()
        .iter()
        .flat_map(|p| [p.x.value(), p.z.value()])
        .collect()
}

/// Rank of a matrix over `Z_p`.
pub(crate) fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = crate::field::pow_mod(rows[rank][c], p - 2, p);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for j in 0..cols {
                    rows[r][j] = (rows[r][j] + p * p - f * rows[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The joint `+1` eigenstate of the group, via the projector product
/// `Π_g d⁻¹ Σ_k S_g^k` applied to the basis vector it keeps with largest weight.
pub fn stabilizer_state(s: &StabilizerGroup) -> Result<StateVector> {
    let d = s.d;
    let mut proj = DenseOperator::identity(d, s.n);
    for i in 0..s.generators.len() {
        let g = s.generator_op(i);
        let mut p = DenseOperator::zeros(d, s.n);
        let mut gk = DenseOperator::identity(d, s.n);
        for _ in 0..d.get() {
            p = p.add(&gk);
            gk = gk.mul(&g);
        }
        proj = proj.mul(&p.scale(Complex64::new(1.0 / d.get() as f64, 0.0)));
    }
    let (col, weight) = (0..proj.size())
        .map(|j| (j, proj.m.column(j).norm()))
        .fold((0, 0.0), |best, c| if c.1 > best.1 { c } else { best });
    if weight < 1e-9 {
        return Err(Error::Domain(
            "stabilizer generators admit no common +1 eigenstate".into(),
        ));
    }
    StateVector::normalized(d, proj.m.column(col).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(d: u64) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_and_clock() {
        let d = dim(3);
        let (x, z) = pauli_xz(d);
        let v = x.apply(&StateVector::basis(d, 1, 2));
        assert!((v[0] - 1.0).norm() < 1e-15);
        let w = z.apply(&StateVector::basis(d, 1, 1));
        assert!((w[1] - d.omega()).norm() < 1e-15);

        let d5 = dim(5);
        let (x, z) = pauli_xz(d5);
        let lhs = z.mul(&x);
        let rhs = x.mul(&z).scale(d5.omega());
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        assert!(x.is_unitary(1e-12) && z.is_unitary(1e-12));
    }

    #[test]
    fn displacement_examples() {
        let d = dim(3);
        assert!(
            displacement(&PhasePoint::new(0, 0, d)).max_abs_diff(&DenseOperator::identity(d, 1))
                < 1e-15
        );
        let (x, z) = pauli_xz(d);
        assert!(displacement(&PhasePoint::new(0, 1, d)).max_abs_diff(&z) < 1e-15);
        let want = x.mul(&z).scale(omega_int(2, d));
        assert!(displacement(&PhasePoint::new(1, 1, d)).max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn qubit_displacements_are_paulis() {
        let d = dim(2);
        let y = displacement(&PhasePoint::new(1, 1, d));
        assert!((y.get(0, 1) - c(0.0, -1.0)).norm() < 1e-15);
        assert!((y.get(1, 0) - c(0.0, 1.0)).norm() < 1e-15);
        assert!(y.is_hermitian(1e-15));
    }

    #[test]
    fn displacement_product_rule() {
        for p in [3, 5] {
            let d = dim(p);
            let pts: Vec<PhasePoint> = (0..p * p)
                .map(|i| PhasePoint::from_index(i as usize, d))
                .collect();
            for u in &pts {
                let tu = displacement(u);
                assert!(tu.dagger().max_abs_diff(&displacement(&-*u)) < 1e-13);
                for v in &pts {
                    let phase = omega_int((d.half() * u.symplectic(v).value()) as i64, d);
                    let want = displacement(&(*u + *v)).scale(phase);
                    assert!(tu.mul(&displacement(v)).max_abs_diff(&want) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cube_unitary_examples() {
        let d7 = dim(7);
        let u = cube_unitary(&CubeParams::new(1, 0, 0, d7).unwrap()).unwrap();
        assert!((u.get(0, 0) - 1.0).norm() < 1e-15);
        let d3 = dim(3);
        let u = cube_unitary(&CubeParams::new(1, 0, 0, d3).unwrap()).unwrap();
        let want = omega_pow(RationalExponent::new(2, 3).unwrap(), d3);
        assert!((u.get(1, 1) - want).norm() < 1e-15);
        assert!(cube_unitary(&CubeParams {
            gamma: dim(2).elem(1),
            z: dim(2).elem(0),
            eps: dim(2).elem(0)
        })
        .is_err());
        assert!(CubeParams::new(5, 1, 1, dim(5)).is_err());
    }

    #[test]
    fn cube_conjugation_of_shift() {
        let d = dim(5);
        let (x, z) = pauli_xz(d);
        for (g, zz, e) in [(1, 0, 0), (2, 3, 1), (4, 1, 4), (3, 2, 2)] {
            let p = CubeParams::new(g, zz, e, d).unwrap();
            let u = cube_unitary(&p).unwrap();
            let lhs = x.conjugate_by(&u);
            let half = d.half();
            let quad: Vec<Complex64> = (0..5u64)
                .map(|k| omega_int((half * g as u64 * k * k) as i64, d))
                .collect();
            let phase = omega_int(e + (half * ((g + zz) as u64)) as i64, d);
            let rhs = x
                .mul(&z.pow((g + zz) as u64))
                .mul(&DenseOperator::diagonal(d, &quad).unwrap())
                .scale(phase);
            assert!(lhs.max_abs_diff(&rhs) < 1e-12, "params {g} {zz} {e}");
        }
    }

    #[test]
    fn rational_diag_examples() {
        let d5 = dim(5);
        let v = rational_diag(RationalExponent::new(1, 4).unwrap(), d5);
        assert!((v.get(4, 4) - d5.omega()).norm() < 1e-14);
        assert!(
            rational_diag(RationalExponent::zero(), d5)
                .max_abs_diff(&DenseOperator::identity(d5, 1))
                < 1e-15
        );
        // diag(1, ω^{2/3}, ω^{1/3}) at d = 3
        let d3 = dim(3);
        let want = DenseOperator::diagonal(
            d3,
            &[
                c(1.0, 0.0),
                omega_pow(RationalExponent::new(2, 3).unwrap(), d3),
                omega_pow(RationalExponent::new(1, 3).unwrap(), d3),
            ],
        )
        .unwrap();
        let cube = cube_unitary(&CubeParams::new(1, 2, 2, d3).unwrap()).unwrap();
        assert!(cube.max_abs_diff(&want) < 1e-14);
        // V_{2/3} agrees with it up to the integer phase ω on |2⟩
        let v = rational_diag(RationalExponent::new(2, 3).unwrap(), d3);
        assert!((v.get(1, 1) - want.get(1, 1)).norm() < 1e-14);
        assert!((v.get(2, 2) - want.get(2, 2) * d3.omega()).norm() < 1e-14);
    }

    #[test]
    fn tensor_examples() {
        let d = dim(3);
        let id = DenseOperator::identity(d, 1);
        let t = tensor(&[id.clone(), id]).unwrap();
        assert!(t.max_abs_diff(&DenseOperator::identity(d, 2)) < 1e-15);
        assert_eq!(t.size(), 9);
        let (x, z) = pauli_xz(d);
        let v = tensor(&[x, z]).unwrap().apply(&StateVector::basis(d, 2, 0));
        assert!((v[3] - 1.0).norm() < 1e-15);
        assert!(tensor(&[]).is_err());
    }

    #[test]
    fn rotated_bell_examples() {
        let d = dim(3);
        let phi = rotated_bell(&DenseOperator::identity(d, 1), Side::First).unwrap();
        assert!((phi.inner(&bell_state(d)) - 1.0).norm() < 1e-14);
        let p = CubeParams::new(2, 1, 1, d).unwrap();
        let u = cube_unitary(&p).unwrap();
        let st = rotated_bell(&u, Side::Second).unwrap();
        assert!((st.amplitudes().norm() - 1.0).abs() < 1e-12);
        let sum: Complex64 = cube_exponents(&p)
            .unwrap()
            .iter()
            .map(|&e| omega_pow(e, d))
            .sum();
        assert!((st.overlap(&bell_state(d)) - sum.norm() / 3.0).abs() < 1e-12);
        let bad = DenseOperator::identity(d, 1).scale(c(2.0, 0.0));
        assert!(matches!(
            rotated_bell(&bad, Side::First),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn stabilizer_bell_state() {
        let d = dim(3);
        let g = StabilizerGroup::new(vec![
            (MultiPoint::from_pairs(&[(1, 0), (1, 0)], d).unwrap(), 0),
            (MultiPoint::from_pairs(&[(0, 1), (0, -1)], d).unwrap(), 0),
        ])
        .unwrap();
        let s = stabilizer_state(&g).unwrap();
        assert!((s.overlap(&bell_state(d)) - 1.0).abs() < 1e-12);
        assert_eq!(g.support().len(), 9);
    }

    #[test]
    fn stabilizer_single_qudit_and_ghz() {
        let d = dim(3);
        let g =
            StabilizerGroup::new(vec![(MultiPoint::from_pairs(&[(0, 1)], d).unwrap(), 0)]).unwrap();
        let s = stabilizer_state(&g).unwrap();
        assert!((s.amplitudes()[0].norm() - 1.0).abs() < 1e-12);

        let ghz = StabilizerGroup::new(vec![
            (
                MultiPoint::from_pairs(&[(1, 0), (1, 0), (1, 0)], d).unwrap(),
                0,
            ),
            (
                MultiPoint::from_pairs(&[(0, 1), (0, -1), (0, 0)], d).unwrap(),
                0,
            ),
            (
                MultiPoint::from_pairs(&[(0, 0), (0, 1), (0, -1)], d).unwrap(),
                0,
            ),
        ])
        .unwrap();
        let s = stabilizer_state(&ghz).unwrap();
        assert_eq!(s.amplitudes().len(), 27);
        for i in 0..3 {
            assert!((ghz.generator_op(i).expectation(&s) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn stabilizer_validation() {
        let d = dim(3);
        let anti = StabilizerGroup::new(vec![
            (MultiPoint::from_pairs(&[(1, 0)], d).unwrap(), 0),
            (MultiPoint::from_pairs(&[(0, 1)], d).unwrap(), 0),
        ]);
        assert!(anti.is_err());
        let short = StabilizerGroup::new(vec![(
            MultiPoint::from_pairs(&[(1, 0), (1, 0)], d).unwrap(),
            0,
        )]);
        assert!(short.is_err());
    }

    #[test]
    fn multipoint_indexing_round_trips() {
        let d = dim(5);
        for i in [0usize, 1, 24, 25, 311, 624] {
            assert_eq!(MultiPoint::from_index(i, 2, d).index(), i);
        }
        let u = MultiPoint::from_pairs(&[(1, 2), (3, 4)], d).unwrap();
        assert_eq!(u.index(), (5 + 2) * 25 + 3 * 5 + 4);
    }
}
