//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported as FAIL without aborting the run;
//! any other failure exits nonzero.

use std::f64::consts::SQRT_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wigner_bell::bell::{
    bell_cglmp, bell_qutrit_noncharacter, bell_rotated, cglmp_lhv_bound, cglmp_mode_sum,
    cglmp_probability_functional, qubit_chsh_t, singlet_fraction, CglmpConfig,
};
use wigner_bell::bounds::{
    build_c, lhv_anneal, lhv_exact, lhv_exact_generic, nc_bound, AnnealConfig,
};
use wigner_bell::field::PrimeDim;
use wigner_bell::operators::{
    bell_state, cube_unitary, rotated_bell, stabilizer_state, CubeParams, Side,
};
use wigner_bell::phase_space::{
    c_min, characteristic_fn, cubic_character_sum, extremal_character_scan, max_negativity,
    negativity_volume, strategy_fourier, wigner_fn, wigner_of_state, wigner_rotated_bell_closed,
};
use wigner_bell::sampling::{
    random_cube_params, random_density_matrix, random_pure_state, random_stabilizer_group,
};

const TOL: f64 = 5e-4;
const KNOWN_FAILURES: [u32; 2] = [5, 11];

fn dim(d: u64) -> PrimeDim {
    PrimeDim::new(d).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

struct Check {
    pass: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            pass: true,
            notes: Vec::new(),
        }
    }

    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.pass &= ok;
        if !ok {
            self.notes
                .push(format!("{what}: got {got:.6}, want {want} ± {tol:e}"));
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.pass &= ok;
        if !ok {
            self.notes.push(what.to_string());
        }
    }

    fn within(&mut self, what: &str, t: Duration, limit: Duration) {
        self.holds(&format!("{what} took {t:?} > {limit:?}"), t <= limit);
    }

    fn done(self, summary: String) -> Outcome {
        let detail = if self.notes.is_empty() {
            summary
        } else {
            format!("{summary}; {}", self.notes.join("; "))
        };
        Outcome {
            pass: self.pass,
            detail,
        }
    }
}

fn cube_chi(d: PrimeDim, gamma: i64) -> wigner_bell::phase_space::PhaseSpaceTable {
    let p = CubeParams::new(gamma, 0, 0, d).unwrap();
    let st = rotated_bell(&cube_unitary(&p).unwrap(), Side::First).unwrap();
    characteristic_fn(&st.projector()).unwrap()
}

fn c1_max_w() -> Outcome {
    let mut c = Check::new();
    let start = Instant::now();
    let rows = [(3, 0.844), (5, 0.724), (7, 0.677), (11, 0.535), (13, 0.442)];
    let mut got = Vec::new();
    for (d, want) in rows {
        let s = extremal_character_scan(dim(d)).unwrap();
        c.close(&format!("d={d}"), s.max_scaled, want, TOL);
        got.push(format!("{d}:{:.4}", s.max_scaled));
    }
    c.within("scan", start.elapsed(), Duration::from_secs(1));
    c.done(format!("d²maxW {}", got.join(" ")))
}

fn c2_min_w() -> Outcome {
    let mut c = Check::new();
    let start = Instant::now();
    let rows = [
        (3, -0.879),
        (5, -2.236),
        (7, -4.406),
        (11, -4.211),
        (13, -6.953),
    ];
    let mut got = Vec::new();
    for (d, want) in rows {
        let s = extremal_character_scan(dim(d)).unwrap();
        c.close(&format!("d={d}"), s.min_scaled, want, TOL);
        got.push(format!("{d}:{:.4}", s.min_scaled));
    }
    c.within("scan", start.elapsed(), Duration::from_secs(1));
    c.done(format!("d³minW {}", got.join(" ")))
}

fn c3_negativity() -> Outcome {
    let mut c = Check::new();
    let start = Instant::now();
    let mut got = Vec::new();
    for (d, want) in [(3, 0.293), (5, 0.447), (7, 0.725)] {
        let (n, g) = max_negativity(dim(d)).unwrap();
        c.close(&format!("d={d}"), n, want, TOL);
        got.push(format!("{d}:{n:.4}(γ={g})"));
    }
    c.within("negativity scan", start.elapsed(), Duration::from_secs(10));
    c.done(format!("maxN {}", got.join(" ")))
}

fn c4_c_min() -> Outcome {
    let mut c = Check::new();
    let rows = [
        (2, -0.707),
        (3, -0.879),
        (5, -2.236),
        (7, -4.406),
        (11, -8.595),
        (13, -10.651),
        (17, -14.728),
        (19, -16.755),
        (23, -20.795),
    ];
    let start = Instant::now();
    let vals: Vec<f64> = rows.iter().map(|&(d, _)| c_min(dim(d))).collect();
    let t = start.elapsed();
    for ((d, want), v) in rows.iter().zip(&vals) {
        c.close(&format!("d={d}"), *v, *want, TOL);
    }
    c.within("closed forms", t, Duration::from_millis(1));
    c.done(format!("9 rows, {t:?}"))
}

fn c5_exact_lhv() -> Outcome {
    let mut c = Check::new();
    let mut got = Vec::new();
    let limits = [1, 60, 3600];
    for ((d, want), secs) in [(3, 0.960), (5, 0.877), (7, 0.829)].into_iter().zip(limits) {
        let start = Instant::now();
        let (b, _) = lhv_exact(&cube_chi(dim(d), 1)).unwrap();
        let t = start.elapsed();
        c.close(&format!("d={d}"), b, want, TOL);
        c.within(&format!("d={d}"), t, Duration::from_secs(secs));
        got.push(format!("{d}:{b:.6}({:.2}s)", t.as_secs_f64()));
    }
    c.done(format!("B_lhv exact {}", got.join(" ")))
}

fn c6_anneal() -> Outcome {
    let mut c = Check::new();
    let cfg = AnnealConfig::default();
    let mut got = Vec::new();
    for (d, want) in [(11, 0.774), (13, 0.817)] {
        let start = Instant::now();
        let r = lhv_anneal(&build_c(dim(d)).unwrap(), dim(d), &cfg).unwrap();
        c.close(&format!("d={d}"), r.best, want, 1e-2);
        got.push(format!(
            "{d}:{:.6}({:.1}s)",
            r.best,
            start.elapsed().as_secs_f64()
        ));
    }
    // one-sided check where the exact bound is known
    let small = AnnealConfig {
        restarts: 500,
        ..cfg
    };
    for d in [5, 7] {
        let r = lhv_anneal(&build_c(dim(d)).unwrap(), dim(d), &small).unwrap();
        let (exact, _) = lhv_exact(&cube_chi(dim(d), 1)).unwrap();
        c.holds(
            &format!("d={d} anneal {} exceeds exact {exact}", r.best),
            r.best <= exact + 1e-9,
        );
        got.push(format!("{d}:{:.6}≤{exact:.6}", r.best));
    }
    c.done(format!("B_lhv anneal {}", got.join(" ")))
}

fn c7_qubit() -> Outcome {
    let mut c = Check::new();
    let w = wigner_rotated_bell_closed(&CubeParams::new(1, 0, 0, dim(2)).unwrap());
    let min8 = 8.0 * w.min_re();
    c.close("8 min W", min8, -1.0 / SQRT_2, 1e-9);
    let (lhv, _) = lhv_exact_generic(&qubit_chsh_t()).unwrap();
    c.close("lhv", lhv, 2.0 + SQRT_2, 1e-9);
    c.done(format!("8minW={min8:.10} lhv={lhv:.10}"))
}

fn c8_qutrit_noncharacter() -> Outcome {
    let mut c = Check::new();
    let b = bell_qutrit_noncharacter();
    let (lhv, _) = lhv_exact_generic(&b).unwrap();
    c.holds(
        &format!("lhv {lhv} is not exactly 5"),
        (lhv - 5.0).abs() < 1e-12,
    );
    let q = b.expectation(&bell_state(dim(3))).re;
    c.close("⟨Φ|ℬ₃|Φ⟩", q, 5.412, 1e-3);
    c.done(format!("lhv={lhv:.12} quantum={q:.6}"))
}

fn c9_singlet_fraction() -> Outcome {
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for d in [3, 5] {
        let d = dim(d);
        for _ in 0..5 {
            let u = cube_unitary(&random_cube_params(d, &mut rng)).unwrap();
            let b = bell_rotated(&u).unwrap();
            for _ in 0..20 {
                let rho = random_density_matrix(d, 2, &mut rng);
                worst = worst.max((b.expectation_rho(&rho).re - singlet_fraction(&rho)).abs());
            }
        }
    }
    c.holds(&format!("residue {worst:e}"), worst < 1e-9);
    c.done(format!("max |Tr(ℬ_U ρ) − F| = {worst:.2e} over 200 states"))
}

fn c10_oracle() -> Outcome {
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for d in [2, 3, 5, 7] {
        let d = dim(d);
        for _ in 0..5 {
            let (p, u) = if d.get() == 2 {
                (
                    CubeParams::new(1, 0, 0, d).unwrap(),
                    wigner_bell::operators::t_gate(),
                )
            } else {
                let p = random_cube_params(d, &mut rng);
                (p, cube_unitary(&p).unwrap())
            };
            let st = rotated_bell(&u, Side::First).unwrap();
            let oracle = wigner_fn(&st.projector()).unwrap();
            worst = worst.max(wigner_rotated_bell_closed(&p).max_abs_diff(&oracle));
        }
    }
    c.holds(&format!("diff {worst:e}"), worst < 1e-10);
    c.done(format!("max closed-vs-matrix diff {worst:.2e}"))
}

fn c11_cglmp() -> Outcome {
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d5 = dim(5);
    let cfg5 = CglmpConfig::standard(d5);
    let op = bell_cglmp(&cfg5, d5).unwrap();
    let mut residue: f64 = 0.0;
    for _ in 0..5 {
        let rho = random_density_matrix(d5, 2, &mut rng);
        let prob = cglmp_probability_functional(&cfg5, &rho).unwrap();
        // the k = 0 mode contributes γ₀ (1 + 1 + 1 − 1) = 2
        residue = residue.max((prob - 2.0 - op.expectation_rho(&rho).re).abs());
    }
    c.holds(
        &format!("operator/probability residue {residue:e}"),
        residue < 1e-9,
    );
    let lhv3 = cglmp_lhv_bound(&CglmpConfig::standard(dim(3)), dim(3));
    let lhv5 = cglmp_lhv_bound(&cfg5, d5);
    c.close("lhv d=3", lhv3, 2.0, 1e-12);
    c.close("lhv d=5", lhv5, 2.0, 1e-12);
    let quantum = op.expectation(&bell_state(d5)).re;
    let modes = cglmp_mode_sum(&cfg5, d5).re;
    c.holds(
        &format!("⟨Φ|ℬ_γ|Φ⟩ = {quantum:.6} does not exceed 2"),
        quantum > 2.0,
    );
    c.done(format!(
        "residue={residue:.2e} lhv3={lhv3:.6} lhv5={lhv5:.6} ⟨Φ|ℬ_γ|Φ⟩={quantum:.6} mode-sum={modes:.6}"
    ))
}

fn c12_properties() -> Outcome {
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(12);

    // Weil bound over every (a₁, a₃), which covers all cube parameters
    let mut weil_ratio: f64 = 0.0;
    for d in [5u64, 7, 11, 13, 17, 19, 23] {
        let pd = dim(d);
        for a3 in 1..d {
            for a1 in 0..d {
                let s = cubic_character_sum(a1, a3, pd).abs() / (d as f64).powi(3);
                weil_ratio = weil_ratio.max(s * (d * d) as f64 * (d as f64).sqrt() / 2.0);
            }
        }
    }
    c.holds(
        &format!("Weil ratio {weil_ratio}"),
        weil_ratio <= 1.0 + 1e-12,
    );

    let mut stab_min: f64 = 0.0;
    for i in 0..10 {
        let g = random_stabilizer_group(dim(3), 1 + i % 3, &mut rng);
        let w = wigner_of_state(&stabilizer_state(&g).unwrap());
        stab_min = stab_min.min(w.min_re());
        c.holds(
            "stabilizer negativity",
            negativity_volume(&w).unwrap() <= 1e-12,
        );
    }
    c.holds(
        &format!("stabilizer min W {stab_min:e}"),
        stab_min >= -1e-12,
    );

    let mut chain_ok = true;
    for i in 0..50 {
        let d = dim([3, 5][i % 2]);
        let m = d.get() as f64;
        let w = wigner_of_state(&random_pure_state(d, 2, &mut rng));
        let mx = w.max_abs();
        let n = negativity_volume(&w).unwrap();
        chain_ok &= mx >= 1.0 / m.powi(3) - 1e-15 && mx <= 1.0 / m + 1e-15;
        chain_ok &= m * m * mx * (1.0 + 2.0 * n) >= 1.0 - 1e-12;
    }
    c.holds("Wigner bound chain", chain_ok);

    let mut nc_ok = true;
    for (d, g) in [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (7, 2), (7, 3)] {
        let chi = cube_chi(dim(d), g);
        let p = CubeParams::new(g, 0, 0, dim(d)).unwrap();
        let nc = nc_bound(&wigner_rotated_bell_closed(&p)).unwrap();
        let (lhv, _) = lhv_exact(&chi).unwrap();
        nc_ok &= nc <= lhv + 1e-12;
    }
    c.holds("B_nc ≤ B_lhv", nc_ok);

    let mut fourier_ok = true;
    for d in [3u64, 5, 7] {
        for _ in 0..100 {
            let alpha: Vec<u64> = (0..=d).map(|_| rng.random_range(0..d)).collect();
            let f = strategy_fourier(&alpha, dim(d)).unwrap();
            let sum: f64 = f.iter().sum();
            let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
            fourier_ok &= (sum - d as f64).abs() < 1e-9 && (norm - d as f64).abs() < 1e-9;
        }
    }
    c.holds("strategy Fourier identities", fourier_ok);
    c.done(format!(
        "Weil ratio max {weil_ratio:.4}, stabilizer min W {stab_min:.1e}"
    ))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "d² max W", c1_max_w),
        (2, "d³ min W", c2_min_w),
        (3, "max N", c3_negativity),
        (4, "C_min", c4_c_min),
        (5, "exact B_lhv", c5_exact_lhv),
        (6, "annealed B_lhv", c6_anneal),
        (7, "qubit row", c7_qubit),
        (8, "qutrit non-character", c8_qutrit_noncharacter),
        (9, "singlet fraction", c9_singlet_fraction),
        (10, "closed form vs oracle", c10_oracle),
        (11, "CGLMP", c11_cglmp),
        (12, "property suites", c12_properties),
    ];
    let mut unexpected = Vec::new();
    for (n, name, f) in criteria {
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let known = if !o.pass && KNOWN_FAILURES.contains(&n) {
            " (known deviation)"
        } else {
            ""
        };
        println!("criterion {n:>2} {tag} {name}: {}{known}", o.detail);
        if !o.pass && !KNOWN_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
