//! Random states, parameters and stabilizer groups for tests and scans.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::field::PrimeDim;
use crate::operators::{
    hilbert_dim, CubeParams, DenseOperator, MultiPoint, PhasePoint, StabilizerGroup, StateVector,
};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state on `n` qudits.
pub fn random_pure_state<R: Rng + ?Sized>(d: PrimeDim, n: usize, rng: &mut R) -> StateVector {
    let size = hilbert_dim(d, n);
    let v = DVector::from_iterator(size, (0..size).map(|_| gaussian(rng)));
    StateVector::normalized(d, v).expect("gaussian vector is nonzero")
}

/// Full-rank Ginibre density matrix `G G† / Tr(G G†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(d: PrimeDim, n: usize, rng: &mut R) -> DenseOperator {
    let size = hilbert_dim(d, n);
    let g = DMatrix::from_fn(size, size, |_, _| gaussian(rng));
    let mut rho = &g * g.adjoint();
    let tr = rho.trace();
    rho /= tr;
    DenseOperator::from_matrix(d, n, rho).expect("shape matches")
}

pub fn random_cube_params<R: Rng + ?Sized>(d: PrimeDim, rng: &mut R) -> CubeParams {
    let n = d.get() as i64;
    CubeParams::new(
        rng.random_range(1..n),
        rng.random_range(0..n),
        rng.random_range(0..n),
        d,
    )
    .expect("γ drawn nonzero")
}

/// A random maximal stabilizer group: the `Z`-type group pushed through a random
/// sequence of local `SL(2, Z_d)` maps and controlled sums, with random phases.
pub fn random_stabilizer_group<R: Rng + ?Sized>(
    d: PrimeDim,
    n: usize,
    rng: &mut R,
) -> StabilizerGroup {
    let p = d.get();
    // rows of (x₁, z₁, …, xₙ, zₙ)
    let mut gens: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; 2 * n];
            v[2 * i + 1] = 1;
            v
        })
        .collect();
    for _ in 0..(4 * n + 4) {
        let i = rng.random_range(0..n);
        let [a, b, c, e] = random_sl2(p, rng);
        for g in gens.iter_mut() {
            let (x, z) = (g[2 * i], g[2 * i + 1]);
            g[2 * i] = (a * x + b * z) % p;
            g[2 * i + 1] = (c * x + e * z) % p;
        }
        if n > 1 {
            let j = (i + rng.random_range(1..n)) % n;
            for g in gens.iter_mut() {
                g[2 * j] = (g[2 * j] + g[2 * i]) % p;
                g[2 * i + 1] = (g[2 * i + 1] + p - g[2 * j + 1]) % p;
            }
        }
    }
    let generators = gens
        .into_iter()
        .map(|g| {
            let pts = (0..n)
                .map(|q| PhasePoint::new(g[2 * q] as i64, g[2 * q + 1] as i64, d))
                .collect();
            (
                MultiPoint::new(pts).expect("n ≥ 1"),
                rng.random_range(0..p as i64),
            )
        })
        .collect();
    StabilizerGroup::new(generators).expect("symplectic images of a Lagrangian stay Lagrangian")
}

fn random_sl2<R: Rng + ?Sized>(p: u64, rng: &mut R) -> [u64; 4] {
    loop {
        let (a, b, c) = (
            rng.random_range(0..p),
            rng.random_range(0..p),
            rng.random_range(0..p),
        );
        // choose e with a e − b c = 1
        if a != 0 {
            let inv = crate::field::pow_mod(a, p - 2, p);
            let e = (1 + b * c) % p * inv % p;
            return [a, b, c, e];
        }
        if b != 0 && c != 0 {
            // a = 0 needs −b c = 1
            let c = (p - crate::field::pow_mod(b, p - 2, p)) % p;
            return [0, b, c, rng.random_range(0..p)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn density_matrices_are_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2, 3, 5] {
            let rho = random_density_matrix(PrimeDim::new(p).unwrap(), 2, &mut rng);
            rho.require_state(1e-10).unwrap();
        }
    }

    #[test]
    fn stabilizer_groups_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=3 {
            for _ in 0..5 {
                let g = random_stabilizer_group(PrimeDim::new(3).unwrap(), n, &mut rng);
                assert_eq!(g.support().len(), 3usize.pow(n as u32));
            }
        }
    }
}
