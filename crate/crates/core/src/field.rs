//! Arithmetic in `Z_d` for prime `d` and the phases built on `ω = exp(2πi/d)`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest dimension accepted by [`PrimeDim::new`]; trial division is plenty below it.
pub const MAX_DIM: u64 = 10_000;

/// A prime local dimension `d`.
///
/// Odd primes are the main target. `d = 2` is accepted so the qubit
/// correspondence paths can share types; operations that need `2⁻¹` check
/// [`PrimeDim::require_odd`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeDim(u64);

impl PrimeDim {
    pub fn new(d: u64) -> Result<Self> {
        if d > MAX_DIM {
            return Err(Error::UnsupportedDimension {
                d,
                reason: "dimensions above 10^4 are out of range",
            });
        }
        if !is_prime(d) {
            return Err(Error::NotPrime(d));
        }
        Ok(PrimeDim(d))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    pub fn require_odd(self, what: &'static str) -> Result<()> {
        if self.is_odd() {
            Ok(())
        } else {
            Err(Error::UnsupportedDimension { d: 2, reason: what })
        }
    }

    /// Reduces any integer into `[0, d)`.
    #[inline]
    pub fn reduce(self, k: i64) -> u64 {
        k.rem_euclid(self.0 as i64) as u64
    }

    pub fn elem(self, k: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(k),
            dim: self,
        }
    }

    /// `k⁻¹ mod d` on raw residues. Panics on zero; use [`inv_mod`] for a checked version.
    #[inline]
    pub(crate) fn inv_raw(self, k: u64) -> u64 {
        let k = k % self.0;
        assert!(k != 0, "zero has no inverse mod {}", self.0);
        pow_mod(k, self.0 - 2, self.0)
    }

    /// `2⁻¹ mod d` (odd `d` only).
    #[inline]
    pub(crate) fn half(self) -> u64 {
        self.inv_raw(2)
    }

    /// `ω = exp(2πi/d)`.
    pub fn omega(self) -> Complex64 {
        omega_int(1, self)
    }
}

impl TryFrom<u64> for PrimeDim {
    type Error = Error;
    fn try_from(d: u64) -> Result<Self> {
        PrimeDim::new(d)
    }
}

impl From<PrimeDim> for u64 {
    fn from(d: PrimeDim) -> u64 {
        d.0
    }
}

impl fmt::Display for PrimeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// An element of `Z_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    dim: PrimeDim,
}

impl FieldElement {
    pub fn new(value: i64, dim: PrimeDim) -> Self {
        dim.elem(value)
    }

    pub fn zero(dim: PrimeDim) -> Self {
        dim.elem(0)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn dim(self) -> PrimeDim {
        self.dim
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, e: u64) -> Self {
        FieldElement {
            value: pow_mod(self.value, e, self.dim.0),
            dim: self.dim,
        }
    }

    fn check(self, other: Self) {
        assert_eq!(self.dim, other.dim, "mixed dimensions in Z_d arithmetic");
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement {
            value: (self.value + rhs.value) % self.dim.0,
            dim: self.dim,
        }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement {
            value: (self.value + self.dim.0 - rhs.value) % self.dim.0,
            dim: self.dim,
        }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement {
            value: self.value * rhs.value % self.dim.0,
            dim: self.dim,
        }
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        FieldElement {
            value: (self.dim.0 - self.value) % self.dim.0,
            dim: self.dim,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.dim)
    }
}

/// A rational exponent of `ω`, kept in lowest terms with a positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalExponent {
    numerator: i64,
    denominator: u64,
}

impl RationalExponent {
    pub fn new(numerator: i64, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Domain(
                "rational exponent with zero denominator".into(),
            ));
        }
        let g = gcd(numerator.unsigned_abs(), denominator).max(1);
        Ok(RationalExponent {
            numerator: numerator / g as i64,
            denominator: denominator / g,
        })
    }

    pub fn integer(k: i64) -> Self {
        RationalExponent {
            numerator: k,
            denominator: 1,
        }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn numerator(self) -> i64 {
        self.numerator
    }

    pub fn denominator(self) -> u64 {
        self.denominator
    }

    pub fn is_integer(self) -> bool {
        self.denominator == 1
    }

    pub fn as_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// `k · self`, reduced.
    pub fn scale(self, k: i64) -> Self {
        Self::new(self.numerator * k, self.denominator).expect("nonzero denominator")
    }

    pub fn checked_add(self, other: Self) -> Self {
        let den = self.denominator * other.denominator;
        let num =
            self.numerator * other.denominator as i64 + other.numerator * self.denominator as i64;
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn negate(self) -> Self {
        RationalExponent {
            numerator: -self.numerator,
            denominator: self.denominator,
        }
    }
}

impl fmt::Display for RationalExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

impl std::str::FromStr for RationalExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("cannot parse rational exponent {s:?}"));
        match s.trim().split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                RationalExponent::new(n, d)
            }
            None => Ok(RationalExponent::integer(
                s.trim().parse().map_err(|_| bad())?,
            )),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `k⁻¹ mod d` via Fermat's little theorem.
pub fn inv_mod(k: FieldElement) -> Result<FieldElement> {
    if k.is_zero() {
        return Err(Error::Domain(format!(
            "0 has no inverse modulo {}",
            k.dim()
        )));
    }
    Ok(k.pow(k.dim().get() - 2))
}

/// The Legendre symbol `(k/d)` by Euler's criterion.
pub fn legendre(k: FieldElement) -> i8 {
    let d = k.dim().get();
    if k.is_zero() {
        return 0;
    }
    if d == 2 {
        return 1;
    }
    if pow_mod(k.value(), (d - 1) / 2, d) == 1 {
        1
    } else {
        -1
    }
}

/// The quadratic Gauss-sum phase `ε_d = Σ_k ω^{k²} / √d`, evaluated numerically.
pub fn gauss_phase(d: PrimeDim) -> Result<Complex64> {
    d.require_odd("the quadratic Gauss-sum phase is defined for odd d")?;
    let n = d.get();
    let sum: Complex64 = (0..n).map(|k| omega_int((k * k % n) as i64, d)).sum();
    Ok(sum / (n as f64).sqrt())
}

/// `ω^k` for integer `k`, reduced mod `d` first.
#[inline]
pub fn omega_int(k: i64, d: PrimeDim) -> Complex64 {
    let r = d.reduce(k);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / d.get() as f64)
}

/// `ω^e = exp(2πi e / d)` for a rational exponent, with a single trigonometric evaluation.
pub fn omega_pow(e: RationalExponent, d: PrimeDim) -> Complex64 {
    let period = (e.denominator() * d.get()) as i64;
    let num = e.numerator().rem_euclid(period);
    Complex64::from_polar(1.0, 2.0 * PI * num as f64 / period as f64)
}

/// Table of `ω^k` for `k = 0..d`.
pub fn omega_table(d: PrimeDim) -> Vec<Complex64> {
    (0..d.get() as i64).map(|k| omega_int(k, d)).collect()
}
