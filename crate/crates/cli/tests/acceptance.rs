//! Acceptance suite: one test per criterion, each printing a PASS line once
//! every assertion in it has held at the stated tolerance.
//!
//! Run with `cargo test -p qoptics-cli --test acceptance -- --nocapture` to
//! see the per-criterion lines.

use std::f64::consts::PI;
use std::process::Command;

use num_complex::Complex64;
use qoptics::detect::{
    g1_mz, g2_splitter, homodyne_mean, homodyne_mean_closed, homodyne_noise,
    homodyne_second_moment_closed, quadrature_stats, LadderMoments,
};
use qoptics::network::{
    mz_compound_table, mz_effective, mz_split_number, split_joint_number, split_state, MzConfig,
    SplitterCoeffs,
};
use qoptics::phase::{
    number_phase_commutator_residual, phase_distribution, phase_moments, phase_operator,
    phase_variance_series, shift_ops, trig_estimators, PhaseGrid, PhaseRange,
};
use qoptics::ops::lower_half;
use qoptics::{
    auto_truncation, cbh_check, translation, FockState, ModeScale, NormConvention,
    OperatorMatrix, Side,
};
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Coherent state padded far enough past the automatic truncation that the
/// closed-form statistics hold to full double precision.
fn coherent(gamma: Complex64) -> FockState {
    FockState::coherent_unchecked(gamma, auto_truncation(gamma) + 20)
}

fn max_amp_diff(a: &FockState, b: &FockState) -> f64 {
    a.amps()
        .iter()
        .zip(b.amps().iter())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

#[test]
fn criterion_01_coherent_statistics() {
    // ⟨n⟩ = var(n) = |γ|² within 1e-9 for |γ|² in {0.25, 1, 4, 9, 16}.
    for (gsq, theta) in [(0.25f64, 0.0), (1.0, 0.8), (4.0, -1.3), (9.0, 2.4), (16.0, 0.37)] {
        let gamma = Complex64::from_polar(gsq.sqrt(), theta);
        let s = coherent(gamma);
        let n = OperatorMatrix::number(s.n_max());
        let mean = n.expect(&s).unwrap().re;
        let var = n.variance(&s).unwrap();
        assert!((mean - gsq).abs() <= 1e-9, "mean at |γ|² = {gsq}: {mean}");
        assert!((var - gsq).abs() <= 1e-9, "variance at |γ|² = {gsq}: {var}");
    }

    // Overlap law |⟨γ₁|γ₂⟩|² = e^{-|γ₁-γ₂|²} on a 5x5 grid of pairs.
    let gammas = [
        c(0.5, 0.0),
        c(0.0, 1.0),
        Complex64::from_polar(2.0, PI / 4.0),
        c(-1.5, 1.0),
        Complex64::from_polar(3.0, -2.0),
    ];
    let n_max = gammas.iter().map(|g| auto_truncation(*g)).max().unwrap() + 20;
    for g1 in gammas {
        for g2 in gammas {
            let a = FockState::coherent_unchecked(g1, n_max);
            let b = FockState::coherent_unchecked(g2, n_max);
            let overlap = a.inner(&b).unwrap().norm_sqr();
            let expect = (-(g1 - g2).norm_sqr()).exp();
            assert!(
                (overlap - expect).abs() <= 1e-9,
                "overlap for ({g1}, {g2}): {overlap} vs {expect}"
            );
        }
    }
    println!("ACCEPTANCE PASS: criterion 1 — coherent photon statistics and overlap law");
}

#[test]
fn criterion_02_translation_and_cbh() {
    let gammas = [c(0.3, 0.0), c(0.75, 0.75), c(0.0, 1.5), c(-1.2, 0.9), c(1.5, 0.0)];
    for gamma in gammas {
        assert!(gamma.norm() <= 1.5 + 1e-12);
        let n_max = 2 * auto_truncation(gamma);
        let t = translation(gamma, n_max).unwrap();

        // T(γ)|0⟩ reproduces the coherent constructor within 1e-9.
        let generated = t.apply(&FockState::vacuum(n_max)).unwrap();
        let direct = FockState::coherent_unchecked(gamma, n_max);
        let dev = max_amp_diff(&generated, &direct);
        assert!(dev <= 1e-9, "state deviation {dev} for γ = {gamma}");

        // T†âT = â + γ·1̂ within 1e-7 on the lower half-basis.
        let a = OperatorMatrix::annihilation(n_max);
        let shifted = t.adjoint().mul(&a).unwrap().mul(&t).unwrap();
        let expect = a
            .add(&OperatorMatrix::identity(n_max).scaled(gamma))
            .unwrap();
        let dev = shifted.max_abs_diff_on(&expect, lower_half(n_max)).unwrap();
        assert!(dev <= 1e-7, "shift deviation {dev} for γ = {gamma}");

        // The special Campbell-Baker-Hausdorff identity within 1e-7.
        let report = cbh_check(gamma, n_max, 1e-7).unwrap();
        assert!(report.passed(), "CBH deviation {} for γ = {gamma}", report.deviation);
    }
    println!("ACCEPTANCE PASS: criterion 2 — translation operator and CBH identity");
}

#[test]
fn criterion_03_quadratures() {
    let ms = ModeScale::from_scale(0.85).unwrap();
    let s_unit = ms.scale();

    // [Ê_q, Ê_p] = 2is·1̂ on the untruncated subspace.
    let n_max = 40;
    let eq = OperatorMatrix::quadrature_q(n_max, &ms);
    let ep = OperatorMatrix::quadrature_p(n_max, &ms);
    let comm = eq.commutator(&ep).unwrap();
    let expect = OperatorMatrix::identity(n_max).scaled(c(0.0, 2.0 * s_unit));
    let dev = comm.max_abs_diff_on(&expect, n_max - 1).unwrap();
    assert!(dev <= 1e-13, "commutator deviation {dev}");

    // Coherent states: δE_q = δE_p = √s within 1e-8.
    for gamma in [c(0.9, 0.0), c(1.0, -1.4), c(0.0, 2.2)] {
        let st = coherent(gamma);
        let q = quadrature_stats(&st, &ms).unwrap();
        assert!((q.dev_q - s_unit.sqrt()).abs() <= 1e-8);
        assert!((q.dev_p - s_unit.sqrt()).abs() <= 1e-8);
    }

    // Number states: uncertainty product (2n+1)s.
    for n in [0usize, 1, 3, 7] {
        let st = FockState::number(n, (4 * n).max(16)).unwrap();
        let q = quadrature_stats(&st, &ms).unwrap();
        assert!((q.product - (2 * n + 1) as f64 * s_unit).abs() <= 1e-8, "n = {n}");
    }

    // The bound δE_q·δE_p ≥ s holds for 50 random superpositions.
    let n_max = 48;
    let eq = OperatorMatrix::quadrature_q(n_max, &ms);
    let ep = OperatorMatrix::quadrature_p(n_max, &ms);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240901);
    for trial in 0..50 {
        let support = lower_half(n_max) / 2;
        let amps: Vec<Complex64> = (0..=n_max)
            .map(|n| {
                if n <= support {
                    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                } else {
                    c(0.0, 0.0)
                }
            })
            .collect();
        let st = FockState::from_amps(amps).unwrap();
        let dq = eq.variance(&st).unwrap().max(0.0).sqrt();
        let dp = ep.variance(&st).unwrap().max(0.0).sqrt();
        assert!(
            dq * dp >= s_unit * (1.0 - 1e-6),
            "trial {trial}: product {} below {s_unit}",
            dq * dp
        );
    }
    println!("ACCEPTANCE PASS: criterion 3 — quadrature commutator, spreads, and uncertainty bound");
}

/// Frozen quadrature-oracle values of the coherent phase variance (the
/// distribution integrated at 40-digit precision before the build; digits
/// beyond f64 kept to record the oracle output).
#[allow(clippy::excessive_precision)]
const VAR_PHI_ORACLE: [(f64, f64); 4] = [
    (0.5, 1.070_554_553_298_631_7),
    (1.0, 0.587_575_231_277_190_8),
    (2.0, 0.239_428_840_636_755_67),
    (5.0, 0.059_558_676_471_612_744),
];

#[test]
fn criterion_04_phase_distributions_and_variance() {
    // Vacuum variance π²/3 within 1e-8.
    let vac = phase_moments(&FockState::vacuum(0), 0.0);
    assert!((vac.variance - PI * PI / 3.0).abs() <= 1e-8);

    // Series vs quadrature within 1e-6, and both against the frozen oracle.
    for (gsq, frozen) in VAR_PHI_ORACLE {
        let series = phase_variance_series(gsq.sqrt(), 800).unwrap();
        let state = FockState::coherent_auto(c(gsq.sqrt(), 0.0));
        let quad = phase_moments(&state, 0.0).variance;
        assert!(
            (series - quad).abs() <= 1e-6,
            "series {series} vs quadrature {quad} at |γ|² = {gsq}"
        );
        assert!((quad - frozen).abs() <= 1e-6, "oracle drift at |γ|² = {gsq}: {quad}");
    }

    // |γ|² = 5: the variance has collapsed to the oracle-fixed level, far
    // below the vacuum value of π²/3.
    let at_five = phase_moments(&FockState::coherent_auto(c(5.0f64.sqrt(), 0.0)), 0.0).variance;
    assert!((at_five - VAR_PHI_ORACLE[3].1).abs() <= 1e-6);
    assert!(at_five < 0.06, "variance at |γ|² = 5: {at_five}");
    assert!(at_five < 0.02 * (PI * PI / 3.0));

    // Number states: flat distribution 1/(2π) at every grid point, at the
    // floating-point level.
    let grid = PhaseGrid::default_grid();
    let flat = 1.0 / (2.0 * PI);
    for n in [0usize, 4, 17] {
        let dist = phase_distribution(&FockState::number(n, 24).unwrap(), &grid);
        for (j, &p) in dist.density().iter().enumerate() {
            assert!(
                (p - flat).abs() <= 4.0 * f64::EPSILON * flat,
                "n = {n}, grid point {j}: {p}"
            );
        }
    }
    println!("ACCEPTANCE PASS: criterion 4 — phase variance (vacuum, series vs quadrature, collapse) and flat number-state distribution");
}

#[test]
fn criterion_05_trig_estimators() {
    // Number states: ⟨cos⟩ = ⟨sin⟩ = 0 and ⟨cos²⟩ = ⟨sin²⟩ = (n+½)/(2n),
    // exact to 1e-10.
    for n in [1usize, 2, 5, 10] {
        let t = trig_estimators(&FockState::number(n, 2 * n + 4).unwrap()).unwrap();
        let expect = (n as f64 + 0.5) / (2.0 * n as f64);
        assert!(t.cos.abs() <= 1e-10 && t.sin.abs() <= 1e-10);
        assert!((t.cos2 - expect).abs() <= 1e-10, "n = {n}");
        assert!((t.sin2 - expect).abs() <= 1e-10, "n = {n}");
    }

    // Coherent states: ⟨cos⟩ = cos θ, ⟨cos²⟩ = cos²θ + 1/(4|γ|²), within 1e-10.
    for (r, theta) in [(0.8, 0.3), (1.5, -0.9), (2.5, 2.0)] {
        let t = trig_estimators(&coherent(Complex64::from_polar(r, theta))).unwrap();
        let spread = 0.25 / (r * r);
        assert!((t.cos - theta.cos()).abs() <= 1e-10, "cos at r = {r}");
        assert!((t.sin - theta.sin()).abs() <= 1e-10, "sin at r = {r}");
        assert!((t.cos2 - (theta.cos().powi(2) + spread)).abs() <= 1e-10);
        assert!((t.sin2 - (theta.sin().powi(2) + spread)).abs() <= 1e-10);
    }

    // Truncated phase state at n_max = 10⁴: ⟨cos²φ⟩ within 1% of cos²φ.
    let n_max = 10_000;
    let phi = PI / 6.0;
    let raw = FockState::phase(phi, n_max, NormConvention::Raw).unwrap();
    let t = trig_estimators(&raw).unwrap();
    assert!((t.cos2 - phi.cos().powi(2)).abs() <= 0.01 * phi.cos().powi(2));

    // ⟨cos φ⟩ is exactly proportional to cos φ; the ratio converges to a
    // constant that is reported, not asserted.
    let ratio_at = |angle: f64| -> f64 {
        let s = FockState::phase(angle, n_max, NormConvention::Raw).unwrap();
        trig_estimators(&s).unwrap().cos / angle.cos()
    };
    let (r1, r2, r3) = (ratio_at(phi), ratio_at(phi + 0.7), ratio_at(phi - 1.1));
    assert!((r1 - r2).abs() <= 1e-12 && (r1 - r3).abs() <= 1e-12);
    let coarse = {
        let s = FockState::phase(phi, 1_000, NormConvention::Raw).unwrap();
        trig_estimators(&s).unwrap().cos / phi.cos()
    };
    assert!((r1 - coarse).abs() < 0.01, "ratio still drifting: {r1} vs {coarse}");
    println!(
        "ACCEPTANCE PASS: criterion 5 — trig estimators (number/coherent closed forms, \
         phase-state cos² limit; cos ratio converges to {r1:.6}, raw convention)"
    );
}

#[test]
fn criterion_06_pathology_lab() {
    let n_max = 64;
    let (e_plus, e_minus) = shift_ops(n_max);
    let id = OperatorMatrix::identity(n_max);

    // E₊E₋ = 1̂ below the truncation corner, exactly.
    let pm = e_plus.mul(&e_minus).unwrap();
    assert_eq!(pm.max_abs_diff_on(&id, n_max - 1).unwrap(), 0.0);

    // E₋E₊ = 1̂ - |0⟩⟨0| exactly, truncation notwithstanding.
    let mp = e_minus.mul(&e_plus).unwrap();
    let expect = id.sub(&OperatorMatrix::projector(0, n_max).unwrap()).unwrap();
    assert_eq!(mp.max_abs_diff(&expect).unwrap(), 0.0);

    // â†â = n̂ and ââ† = n̂ + 1̂ recovered through the shift factorization on
    // the lower half-basis.
    let sqrt_n = OperatorMatrix::number_sqrt(n_max);
    let number = OperatorMatrix::number(n_max);
    let recovered = sqrt_n.mul(&mp).unwrap().mul(&sqrt_n).unwrap();
    assert!(recovered.max_abs_diff_on(&number, lower_half(n_max)).unwrap() <= 1e-13);
    let conjugated = e_plus.mul(&number).unwrap().mul(&e_minus).unwrap();
    let number_plus = number.add(&id).unwrap();
    assert!(conjugated.max_abs_diff_on(&number_plus, lower_half(n_max)).unwrap() <= 1e-13);

    // [n̂, φ̂]|ψ⟩ - i|ψ⟩ matches the closed-form residual within 1e-10 for
    // 20 random states.
    let op = phase_operator(n_max, PhaseRange::ZeroTwoPi);
    let comm = number.commutator(&op).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
    for trial in 0..20 {
        let amps: Vec<Complex64> = (0..=n_max)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let psi = FockState::from_amps(amps).unwrap();
        let applied = comm.apply(&psi).unwrap();
        let residual = number_phase_commutator_residual(&psi);
        for m in 0..=n_max {
            let got = applied.amp(m) - Complex64::i() * psi.amp(m);
            assert!(
                (got - residual.amp(m)).norm() <= 1e-10,
                "trial {trial}, component {m}"
            );
        }
    }
    println!("ACCEPTANCE PASS: criterion 6 — shift-operator identities and the number-phase commutator residual");
}

#[test]
fn criterion_07_splitter() {
    // Joint-number outputs are norm-1 and photon-conserving for all n1+n2 ≤ 12.
    let sc = SplitterCoeffs::symmetric(c(0.0, 0.55), c((1.0f64 - 0.55 * 0.55).sqrt(), 0.0))
        .unwrap();
    for n1 in 0..=12usize {
        for n2 in 0..=(12 - n1) {
            let out = split_joint_number(n1, n2, &sc).unwrap();
            assert!(
                (out.norm_sqr() - 1.0).abs() <= 1e-12,
                "norm for ({n1},{n2})"
            );
            for ((m, k), amp) in out.amps().indexed_iter() {
                if amp.norm() > 1e-14 {
                    assert_eq!(m + k, n1 + n2);
                }
            }
        }
    }

    // Hong-Ou-Mandel null on the balanced symmetric splitter.
    let hom = split_joint_number(1, 1, &SplitterCoeffs::balanced()).unwrap();
    assert!(hom.amp(1, 1).norm() < 1e-14);

    // Coherent factorization: purity 1 within 1e-9.
    for gamma in [c(1.0, 0.0), c(1.8, -1.2), c(0.0, 3.0)] {
        let split = split_state(&coherent(gamma), &SplitterCoeffs::balanced()).unwrap();
        assert!((split.reduced_purity(Side::Left) - 1.0).abs() <= 1e-9, "γ = {gamma}");
    }

    // Marginal-mean and coincidence closed forms, n|ρ|² and n(n-1)|ρ|²|τ|²,
    // against brute-force sums for n ≤ 30 over the reflectance grid.
    let factorial = |n: usize| (1..=n).fold(1.0f64, |acc, k| acc * k as f64);
    let binom = |n: usize, m: usize| factorial(n) / (factorial(m) * factorial(n - m));
    for n in 0..=30usize {
        for &r_sq in &[0.1f64, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
            let t_sq = 1.0 - r_sq;
            let nf = n as f64;
            let mean: f64 = (0..=n)
                .map(|m| m as f64 * binom(n, m) * r_sq.powi(m as i32) * t_sq.powi((n - m) as i32))
                .sum();
            let corr: f64 = (0..=n)
                .map(|m| {
                    (m * (n - m)) as f64
                        * binom(n, m)
                        * r_sq.powi(m as i32)
                        * t_sq.powi((n - m) as i32)
                })
                .sum();
            assert!((mean - nf * r_sq).abs() <= 1e-10 * (nf * r_sq).max(1.0));
            let closed = nf * (nf - 1.0) * r_sq * t_sq;
            assert!((corr - closed).abs() <= 1e-10 * closed.max(1.0));
        }
    }
    println!("ACCEPTANCE PASS: criterion 7 — splitter conservation laws, HOM null, coherent factorization, closed-form photon bookkeeping");
}

/// Hand-coded triple-sum amplitude table for `|n⟩` through the
/// interferometer, independent of the library's effective-splitter path.
fn mz_triple_sum(n: usize, cfg: &MzConfig) -> Vec<Complex64> {
    let factorial = |n: usize| (1..=n).fold(1.0f64, |acc, k| acc * k as f64);
    let (r1, t1) = (cfg.s1().rho(), cfg.s1().tau());
    let (r2, t2) = (cfg.s2().rho(), cfg.s2().tau());
    let arm = Complex64::from_polar(1.0, cfg.phi());
    let mut amp_by_k = vec![c(0.0, 0.0); n + 1];
    for m in 0..=n {
        let first = (factorial(n) / (factorial(m) * factorial(n - m))).sqrt()
            * r1.powu(m as u32)
            * (t1 * arm).powu((n - m) as u32);
        for k1 in 0..=m {
            for k2 in 0..=(n - m) {
                let k = k1 + k2;
                let coeff = (factorial(m) * factorial(n - m) * factorial(k) * factorial(n - k))
                    .sqrt()
                    / (factorial(k1) * factorial(k2) * factorial(m - k1) * factorial(n - m - k2));
                amp_by_k[k] += first
                    * coeff
                    * r2.powu((n - m + k1 - k2) as u32)
                    * t2.powu((m - k1 + k2) as u32);
            }
        }
    }
    amp_by_k
}

#[test]
fn criterion_08_mach_zehnder() {
    // Unitarity of the effective coefficients over a 100-point grid.
    for i in 0..10 {
        let r_sq = 0.05 + 0.09 * i as f64;
        let s1 = SplitterCoeffs::from_reflectance(r_sq).unwrap();
        let s2 = SplitterCoeffs::from_reflectance(1.0 - r_sq).unwrap();
        for j in 0..10 {
            let phi = -PI + 2.0 * PI * j as f64 / 9.0;
            let eff = mz_effective(&MzConfig::new(s1, s2, phi).unwrap());
            let sum = eff.rho().norm_sqr() + eff.tau().norm_sqr();
            assert!((sum - 1.0).abs() <= 1e-12, "grid point ({i},{j})");
        }
    }

    // Balanced-pair closed form ρ = sin(ϕ/2)e^{i(ϕ-π)/2}, τ = cos(ϕ/2)e^{i(ϕ+π)/2}.
    for phi in [0.0, 0.4, PI / 2.0, 1.9, PI] {
        let eff = mz_effective(&MzConfig::balanced(phi));
        let rho = Complex64::from_polar((phi / 2.0).sin(), (phi - PI) / 2.0);
        let tau = Complex64::from_polar((phi / 2.0).cos(), (phi + PI) / 2.0);
        assert!((eff.rho() - rho).norm() <= 1e-14, "phi = {phi}");
        assert!((eff.tau() - tau).norm() <= 1e-14, "phi = {phi}");
    }

    // Triple-sum oracle equals the effective-splitter path within 1e-10
    // for n ≤ 6.
    let configs = [
        MzConfig::balanced(PI / 2.0),
        MzConfig::balanced(2.6),
        MzConfig::new(
            SplitterCoeffs::from_reflectance(0.25).unwrap(),
            SplitterCoeffs::from_reflectance(0.6).unwrap(),
            -0.7,
        )
        .unwrap(),
    ];
    for cfg in &configs {
        for n in 0..=6usize {
            let oracle = mz_triple_sum(n, cfg);
            let state = mz_split_number(n, cfg).unwrap();
            for (k, expect) in oracle.iter().enumerate() {
                assert!(
                    (state.amp(k, n - k) - expect).norm() <= 1e-10,
                    "n = {n}, k = {k}"
                );
            }
        }
    }

    // Compound-coefficient identities within 1e-12.
    let cfg = MzConfig::new(
        SplitterCoeffs::from_reflectance(0.37).unwrap(),
        SplitterCoeffs::from_reflectance(0.81).unwrap(),
        1.3,
    )
    .unwrap();
    let t = mz_compound_table(&cfg);
    assert!((t.rho_13 - t.rho_31).norm() <= 1e-12);
    assert!((t.rho_24 - t.rho_42).norm() <= 1e-12);
    assert!((t.tau_14 - t.tau_41).norm() <= 1e-12);
    assert!((t.tau_23 - t.tau_32).norm() <= 1e-12);
    assert!((t.rho_13.norm() - t.rho_24.norm()).abs() <= 1e-12);
    assert!((t.tau_14.norm() - t.tau_23.norm()).abs() <= 1e-12);
    let ortho = t.rho_13 * t.tau_14.conj() + t.rho_24.conj() * t.tau_23;
    assert!(ortho.norm() <= 1e-12, "phase relation residual {}", ortho.norm());
    println!("ACCEPTANCE PASS: criterion 8 — Mach-Zehnder unitarity, closed form, triple-sum oracle, compound identities");
}

#[test]
fn criterion_09_detection() {
    let ms = ModeScale::unit();
    let s_unit = ms.scale();

    // Homodyne closed form vs two-mode computation within 1e-8 over the
    // state × φ₂ grid.
    let mut two_a = vec![c(0.0, 0.0); 13];
    two_a[1] = c(1.0, 0.0);
    two_a[2] = c(0.0, 1.0);
    let mut two_b = vec![c(0.0, 0.0); 13];
    two_b[0] = c(0.7, 0.0);
    two_b[3] = c(0.0, 0.9);
    let states = [
        FockState::number(2, 12).unwrap(),
        coherent(c(0.9, 0.6)),
        FockState::from_amps(two_a).unwrap(),
        FockState::from_amps(two_b).unwrap(),
    ];
    let gamma2 = c(1.6, 0.0);
    for state in &states {
        let moments = LadderMoments::from_state(state);
        for phi2 in [0.0, PI / 4.0, -PI / 4.0, PI / 2.0, -PI / 2.0] {
            let mean_closed = homodyne_mean_closed(&moments, gamma2, phi2, &ms);
            let mean_op = homodyne_mean(state, gamma2, phi2, &ms).unwrap();
            assert!((mean_closed - mean_op).abs() <= 1e-8, "mean at φ₂ = {phi2}");
            let second_closed = homodyne_second_moment_closed(&moments, gamma2, phi2, &ms);
            let rep = homodyne_noise(state, gamma2, phi2, &ms).unwrap();
            assert!(
                (second_closed - rep.second_moment).abs() <= 1e-8,
                "second moment at φ₂ = {phi2}"
            );
        }
    }

    // Vacuum-noise floors: LO off leaves ⟨s²⟩ = s²⟨n̂⟩; a vacuum signal
    // leaves ⟨s²⟩ = s²|γ₂|².
    let sig = coherent(c(1.1, -0.4));
    let rep = homodyne_noise(&sig, c(0.0, 0.0), 0.0, &ms).unwrap();
    assert!(rep.mean.abs() <= 1e-12);
    assert!((rep.second_moment - s_unit * s_unit * sig.expect_n()).abs() <= 1e-12);
    let rep = homodyne_noise(&FockState::vacuum(6), c(1.8, 0.0), 0.9, &ms).unwrap();
    assert!(rep.mean.abs() <= 1e-12);
    assert!((rep.second_moment - s_unit * s_unit * 1.8 * 1.8).abs() <= 1e-12);

    // First-order coherence: port 3 reads ⟨n⟩sin²(ϕ/2) and the ports sum to ⟨n⟩.
    let probe = coherent(c(1.4, 0.3));
    let n_mean = probe.expect_n();
    for k in 0..=12 {
        let phi = 2.0 * PI * k as f64 / 12.0;
        let g = g1_mz(&probe, phi, &ms).unwrap();
        assert!((g.port3 - s_unit * n_mean * (phi / 2.0).sin().powi(2)).abs() <= 1e-10);
        assert!((g.port3 + g.port4 - s_unit * n_mean).abs() <= 1e-10);
        assert!((g.difference - s_unit * n_mean * phi.cos()).abs() <= 1e-10);
    }

    // Second-order coherence: 1 for coherent, 0 for |1⟩, (n-1)/n for |n⟩.
    let sc = SplitterCoeffs::balanced();
    let g2 = g2_splitter(&coherent(c(2.0, 0.0)), &sc, &ms).unwrap();
    assert!((g2.normalized.unwrap() - 1.0).abs() <= 1e-10);
    let g2 = g2_splitter(&FockState::number(1, 1).unwrap(), &sc, &ms).unwrap();
    assert!(g2.correlator.abs() <= 1e-14);
    assert_eq!(g2.normalized.unwrap(), 0.0);
    for n in [2usize, 5, 9] {
        let g2 = g2_splitter(&FockState::number(n, n).unwrap(), &sc, &ms).unwrap();
        let expect = (n as f64 - 1.0) / n as f64;
        assert!((g2.normalized.unwrap() - expect).abs() <= 1e-10, "n = {n}");
    }
    println!("ACCEPTANCE PASS: criterion 9 — homodyne dual routes, vacuum floors, first- and second-order coherence");
}

const SCENARIOS: [&str; 11] = [
    "coherent-stats",
    "phase-dist",
    "phase-variance",
    "trig-estimators",
    "pathology",
    "homodyne",
    "quadrature",
    "mz-sweep",
    "g2",
    "splitter",
    "identities",
];

#[test]
fn criterion_10_cli() {
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_qoptics"))
            .env_remove("QOPTICS_CONFIG")
            .env_remove("QOPTICS_OUT_DIR")
            .args(args)
            .output()
            .expect("binary runs")
    };
    for scenario in SCENARIOS {
        // Exit 0 with max_deviation under every row tolerance.
        let out = run(&[scenario, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{scenario} did not pass");
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["pass"], true, "{scenario}");
        let max_dev = doc["max_deviation"].as_f64().unwrap();
        for row in doc["rows"].as_array().unwrap() {
            if let Some(tol) = row["tol"].as_f64() {
                assert!(
                    row["deviation"].as_f64().unwrap() <= tol,
                    "{scenario}: row {} exceeds tolerance",
                    row["label"]
                );
            }
        }
        assert!(max_dev > 0.0, "{scenario} carries no nonzero deviation to gate on");

        // Corrupting the tolerance to zero must flip the run to exit 2.
        let out = run(&[scenario, "--tol", "0"]);
        assert_eq!(out.status.code(), Some(2), "{scenario} ignored --tol 0");

        // Byte-identical reruns.
        let again = run(&[scenario, "--format", "json"]);
        let first = run(&[scenario, "--format", "json"]);
        assert_eq!(first.stdout, again.stdout, "{scenario} output unstable");
    }
    println!("ACCEPTANCE PASS: criterion 10 — CLI exit codes, tolerance gating, deterministic output");
}
