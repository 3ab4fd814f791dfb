//! Acceptance suite: every release-gating numerical contract of the library,
//! one test per criterion, each printing a PASS line with the measured
//! values (run with `--nocapture` to see them).

use std::time::Instant;

use frameform_core::curvature::{
    curvature_scan, dchristoffel, riemann, riemann_closed, sectional, sectional_m1,
    sectional_traceless,
};
use frameform_core::forms::{
    curve_geodesic, curve_geodesic_solve, curve_to_form, distance_bounds, form_geodesic,
    form_to_curve, trapezoid_weights, DiscreteCurve, DiscreteOneForm,
};
use frameform_core::frame::{FrameMatrix, TangentMatrix};
use frameform_core::geodesic::{
    geodesic_rhs, integrate_numeric, path_length, shoot_bvp, solve_ivp, IntegrateError,
    MatrixPath,
};
use frameform_core::matrix::{sample_gaussian, RealMatrix, Seed};
use frameform_core::submersion::{
    dpi, oneill_check, project_pi, split_horizontal_vertical, sym_geodesic_rhs, sym_sectional,
    verify_submersion, SymTangent,
};

const SCAN_SEED: Seed = Seed(271828);

/// Well-conditioned random frame (redraws on rank failure or conditioning).
fn random_frame(n: usize, m: usize, seed: Seed) -> FrameMatrix {
    let mut s = seed;
    loop {
        if let Ok(f) = FrameMatrix::new(sample_gaussian(n, m, s)) {
            if f.sigma_min() > 1e-2 * f.sigma_max() {
                return f;
            }
        }
        s = s.derive(0);
    }
}

/// Random frame rescaled to unit Gram determinant, with a unit-speed random
/// velocity bounded away from the scaling ray (|τ₀| ≤ 0.8√(mδ₀)). The
/// normalization keeps the geodesic's time derivatives tame enough for the
/// criterion's pinned finite-difference step; the exactly-parallel ray is
/// criterion 2's subject.
fn normalized_ic(n: usize, m: usize, seed: Seed) -> (FrameMatrix, TangentMatrix) {
    // Condition number below 5: keeps ‖P₀‖ (and with it the fourth time
    // derivative that the pinned h = 1e-4 difference must resolve) small.
    let a = {
        let mut s = seed;
        loop {
            if let Ok(f) = FrameMatrix::new(sample_gaussian(n, m, s)) {
                if f.sigma_min() > 0.2 * f.sigma_max() {
                    break f.product_decompose().beta().clone();
                }
            }
            s = s.derive(0);
        }
    };
    if n * m == 1 {
        // M₊(1,1) is one-dimensional: every velocity is a multiple of a.
        // Use the expanding unit-speed ray (no finite blow-up, tame f).
        let u = TangentMatrix::new(a.mat().clone());
        let u = TangentMatrix::new(u.mat().scale(1.0 / a.norm(&u)));
        return (a, u);
    }
    let mut s = seed.derive(1);
    loop {
        let raw = TangentMatrix::new(sample_gaussian(n, m, s));
        let u = TangentMatrix::new(raw.mat().scale(1.0 / a.norm(&raw)));
        let tau = u.mat().trace_mul(a.pinv());
        let delta = {
            let l = u.mat() * a.pinv();
            l.dot(&l)
        };
        if tau * tau <= 0.64 * m as f64 * delta {
            return (a, u);
        }
        s = s.derive(0);
    }
}

fn gauss_tangent(n: usize, m: usize, seed: Seed) -> TangentMatrix {
    TangentMatrix::new(sample_gaussian(n, m, seed))
}

fn all_dims_upto_5() -> Vec<(usize, usize)> {
    let mut dims = Vec::new();
    for n in 1..=5usize {
        for m in 1..=n {
            dims.push((m, n));
        }
    }
    dims
}

#[test]
fn acceptance_01_closed_form_geodesics() {
    let start = Instant::now();
    let dims = all_dims_upto_5();
    let mut worst_fd: f64 = 0.0;
    let mut worst_rk4: f64 = 0.0;
    for trial in 0..100u64 {
        let (m, n) = dims[trial as usize % dims.len()];
        let (a0, u0) = normalized_ic(n, m, SCAN_SEED.derive(1000 + trial));
        let sol = solve_ivp(&a0, &u0).unwrap();

        // Finite-difference residual of the geodesic equation at h = 1e-4.
        let h = 1e-4;
        for &t in &[0.2, 0.5, 0.8, 1.0] {
            let (at, vt) = sol.eval(t).unwrap();
            let (ap, _) = sol.eval(t + h).unwrap();
            let (am, _) = sol.eval(t - h).unwrap();
            let second = &(&(ap.mat() + am.mat()) - &at.mat().scale(2.0)) * (1.0 / (h * h));
            let rhs = geodesic_rhs(&at, &vt);
            let rel = second.max_abs_diff(rhs.mat()) / (1.0 + rhs.mat().max_abs());
            worst_fd = worst_fd.max(rel);
        }

        // RK4 with 1000 steps on [0,1] against the closed form.
        let path = integrate_numeric(&a0, &u0, 1.0, 1000).expect("no rank loss expected");
        for (t, frame) in path.times().iter().zip(path.frames()) {
            let (exact, _) = sol.eval(*t).unwrap();
            worst_rk4 = worst_rk4.max(frame.mat().max_abs_diff(exact.mat()));
        }
    }
    let elapsed = start.elapsed();
    assert!(worst_fd < 1e-5, "FD residual {worst_fd}");
    assert!(worst_rk4 < 1e-6, "RK4 deviation {worst_rk4}");
    assert!(elapsed.as_secs_f64() < 30.0, "runtime {elapsed:?}");
    println!(
        "acceptance 01 closed-form geodesics: PASS (FD residual {worst_fd:.3e} < 1e-5, \
         RK4 deviation {worst_rk4:.3e} < 1e-6, runtime {elapsed:.2?} < 30s)"
    );
}

#[test]
fn acceptance_02_blowup_reproduction() {
    let a0 = random_frame(3, 2, SCAN_SEED.derive(2000));
    let u0 = TangentMatrix::new(a0.mat().scale(-1.0));
    let sol = solve_ivp(&a0, &u0).unwrap();
    let analytic = sol.blowup().expect("scaling ray must blow up");
    assert_eq!(analytic, 1.0, "analytic blow-up time must be exactly 1.0");

    let detected = match integrate_numeric(&a0, &u0, 1.2, 1200) {
        Err(IntegrateError::RankLoss { t, .. }) => t,
        other => panic!(
            "expected rank loss, integration returned {:?}",
            other.map(|p| p.len())
        ),
    };
    assert!(
        (0.99..=1.0).contains(&detected),
        "rank loss detected at {detected}"
    );
    println!(
        "acceptance 02 blow-up: PASS (analytic T = {analytic} exactly, RK4 rank loss at \
         {detected} in [0.99, 1.0])"
    );
}

/// Sectional curvature from the Jacobi expansion ‖J(t)‖ = t(1 − K t²/6 + …),
/// using only the exponential map and the metric; Richardson-extrapolated.
fn jacobi_sectional(a: &FrameMatrix, u: &TangentMatrix, v: &TangentMatrix) -> f64 {
    let (u1, v1) = a.orthonormalize_pair(u, v).unwrap();
    let k_at = |t: f64| -> f64 {
        let s = 1e-5;
        let plus = TangentMatrix::new(u1.mat() + &v1.mat().scale(s));
        let minus = TangentMatrix::new(u1.mat() - &v1.mat().scale(s));
        let (ap, _) = solve_ivp(a, &plus).unwrap().eval(t).unwrap();
        let (am, _) = solve_ivp(a, &minus).unwrap().eval(t).unwrap();
        let (gamma, _) = solve_ivp(a, &u1).unwrap().eval(t).unwrap();
        let j = TangentMatrix::new(&(ap.mat() - am.mat()) * (0.5 / s));
        6.0 * (t - gamma.norm(&j)) / (t * t * t)
    };
    let k1 = k_at(0.1);
    let k2 = k_at(0.05);
    (4.0 * k2 - k1) / 3.0
}

#[test]
fn acceptance_03_explicit_curvature_value() {
    // a = (I_m; 0), u, v unit entries in rows m+1, m+2 of the last column.
    // The trace polynomial of the sectional-curvature theorem evaluates to
    // 4 − m there; that polynomial is 4K/√det(aᵀa), so the sectional
    // curvature itself is (4−m)/4 — confirmed below by a Jacobi-field
    // expansion that bypasses every curvature formula.
    for (m, n) in [(2usize, 4usize), (3, 5), (4, 6)] {
        let mut a_mat = RealMatrix::zeros(n, m);
        for i in 0..m {
            a_mat[(i, i)] = 1.0;
        }
        let a = FrameMatrix::new(a_mat).unwrap();
        let mut u_mat = RealMatrix::zeros(n, m);
        u_mat[(m, m - 1)] = 1.0;
        let mut v_mat = RealMatrix::zeros(n, m);
        v_mat[(m + 1, m - 1)] = 1.0;
        let (u, v) = (TangentMatrix::new(u_mat), TangentMatrix::new(v_mat));
        let k = sectional(&a, &u, &v).unwrap();
        let reported = 4.0 * k / a.sqrt_det_gram();
        assert!(
            (reported - (4 - m) as f64).abs() < 1e-10,
            "formula value {reported} vs {}",
            4 - m
        );
        assert!(
            (k - (4 - m) as f64 / 4.0).abs() < 1e-10,
            "sectional value {k} vs {}",
            (4 - m) as f64 / 4.0
        );
        if m < 4 {
            let k_jacobi = jacobi_sectional(&a, &u, &v);
            assert!(
                (k_jacobi - k).abs() < 1e-4,
                "Jacobi oracle {k_jacobi} vs sectional {k}"
            );
        }
        println!(
            "acceptance 03 explicit value (m={m}, n={n}): PASS (4K/√det = {reported:.12} = 4−m, \
             K = {k:.12})"
        );
    }
}

#[test]
fn acceptance_04_curvature_sign_statements() {
    // m = 1: all sectional curvatures nonnegative.
    let mut min_m1 = f64::INFINITY;
    for trial in 0..10_000u64 {
        let n = 2 + (trial % 5) as usize;
        let seed = SCAN_SEED.derive(40_000 + trial);
        let a = random_frame(n, 1, seed);
        let u = gauss_tangent(n, 1, seed.derive(2));
        let v = gauss_tangent(n, 1, seed.derive(3));
        if let Ok(k) = sectional_traceless(&a, &u, &v) {
            min_m1 = min_m1.min(k);
            let k1 = sectional_m1(&a, &u, &v).unwrap();
            assert!((k - k1).abs() < 1e-9 * (1.0 + k.abs()));
        }
    }
    assert!(min_m1 >= -1e-10, "negative m=1 curvature {min_m1}");

    // (m,n) = (1,2): identically zero.
    let mut max_abs_12: f64 = 0.0;
    for trial in 0..10_000u64 {
        let seed = SCAN_SEED.derive(41_000_000 + trial);
        let a = random_frame(2, 1, seed);
        let u = gauss_tangent(2, 1, seed.derive(2));
        let v = gauss_tangent(2, 1, seed.derive(3));
        if let Ok(k) = sectional_traceless(&a, &u, &v) {
            max_abs_12 = max_abs_12.max(k.abs());
        }
    }
    assert!(max_abs_12 < 1e-10, "nonzero (1,2) curvature {max_abs_12}");

    // m ≥ 2 symmetric-horizontal pairs: strictly negative.
    let dims = [(2usize, 3usize), (2, 4), (3, 4), (3, 5)];
    let mut max_horizontal = f64::NEG_INFINITY;
    for trial in 0..10_000u64 {
        let (m, n) = dims[trial as usize % dims.len()];
        let seed = SCAN_SEED.derive(42_000_000 + trial);
        let a = random_frame(n, m, seed);
        let (hu, _) = split_horizontal_vertical(&a, &gauss_tangent(n, m, seed.derive(2)));
        let (hv, _) = split_horizontal_vertical(&a, &gauss_tangent(n, m, seed.derive(3)));
        if let Ok(k) = sectional_traceless(&a, &hu, &hv) {
            max_horizontal = max_horizontal.max(k);
        }
    }
    assert!(
        max_horizontal < -1e-12,
        "horizontal curvature not strictly negative: {max_horizontal}"
    );

    // Pure-trace planes are flat.
    let mut max_trace: f64 = 0.0;
    for trial in 0..100u64 {
        let seed = SCAN_SEED.derive(43_000_000 + trial);
        let a = random_frame(4, 2, seed);
        let trace_dir = TangentMatrix::new(a.mat().scale(0.5 + trial as f64 / 100.0));
        let v = gauss_tangent(4, 2, seed.derive(2));
        if let Ok(k) = sectional(&a, &trace_dir, &v) {
            max_trace = max_trace.max(k.abs());
        }
    }
    assert!(max_trace < 1e-10, "pure-trace plane curvature {max_trace}");

    println!(
        "acceptance 04 sign statements: PASS (min m=1 K = {min_m1:.3e} ≥ -1e-10, \
         max |K| at (1,2) = {max_abs_12:.3e} < 1e-10, max horizontal K = {max_horizontal:.3e} < \
         -1e-12, max pure-trace |K| = {max_trace:.3e} < 1e-10)"
    );
}

#[test]
fn acceptance_05_histogram_fractions() {
    let h23 = curvature_scan(2, 3, 100_000, 200, SCAN_SEED).unwrap();
    assert_eq!(
        h23.positive_fraction(),
        0.0,
        "(2,3) fraction {}",
        h23.positive_fraction()
    );

    let h24 = curvature_scan(2, 4, 1_000_000, 200, SCAN_SEED).unwrap();
    let f24 = h24.positive_fraction();
    assert!(
        (0.015..=0.06).contains(&f24),
        "(2,4) fraction {f24} outside [0.015, 0.06]"
    );

    let start = Instant::now();
    let h35 = curvature_scan(3, 5, 10_000_000, 200, SCAN_SEED).unwrap();
    let elapsed = start.elapsed();
    let f35 = h35.positive_fraction();
    assert!(
        (1e-5..=5e-4).contains(&f35),
        "(3,5) fraction {f35} outside [1e-5, 5e-4]"
    );
    assert!(elapsed.as_secs_f64() < 300.0, "1e7 scan took {elapsed:?}");
    println!(
        "acceptance 05 histogram fractions: PASS ((2,3): 0 of 1e5; (2,4): {f24:.5} in \
         [0.015, 0.06] vs paper 0.03041; (3,5): {f35:.2e} in [1e-5, 5e-4] vs paper 7e-5; \
         1e7 scan in {elapsed:.1?} < 5min)"
    );
}

#[test]
fn acceptance_06_riemann_oracle_equivalence() {
    let dims = [(3usize, 2usize), (4, 2), (4, 3), (5, 3), (5, 4), (3, 1)];
    let mut worst_routes: f64 = 0.0;
    let mut worst_dgamma: f64 = 0.0;
    let mut worst_bianchi: f64 = 0.0;
    let mut worst_antisym: f64 = 0.0;
    for trial in 0..100u64 {
        let (n, m) = dims[trial as usize % dims.len()];
        let seed = SCAN_SEED.derive(60_000 + trial);
        let a = random_frame(n, m, seed);
        let u = gauss_tangent(n, m, seed.derive(1));
        let v = gauss_tangent(n, m, seed.derive(2));
        let w = gauss_tangent(n, m, seed.derive(3));
        let s = gauss_tangent(n, m, seed.derive(4));
        let scale = a.norm(&u) * a.norm(&v) * a.norm(&w) * a.norm(&s) + 1.0;

        // Coordinate route vs expanded closed form.
        let r1 = riemann(&a, &u, &v, &w);
        let r2 = riemann_closed(&a, &u, &v, &w);
        let ip1 = a.metric(&r1, &s);
        let ip2 = a.metric(&r2, &s);
        worst_routes = worst_routes.max((ip1 - ip2).abs() / scale.max(ip1.abs()));

        // Analytic dΓ against central differences.
        let h = 1e-5;
        let analytic = dchristoffel(&a, &u, &v, &w);
        let ap = FrameMatrix::new(a.mat() + &u.mat().scale(h)).unwrap();
        let am = FrameMatrix::new(a.mat() - &u.mat().scale(h)).unwrap();
        let fd = &(frameform_core::curvature::christoffel(&ap, &v, &w).mat()
            - frameform_core::curvature::christoffel(&am, &v, &w).mat())
            * (0.5 / h);
        worst_dgamma = worst_dgamma
            .max(fd.max_abs_diff(analytic.mat()) / (1.0 + analytic.mat().max_abs()));

        // Antisymmetries and the first Bianchi identity.
        let r_vu = riemann(&a, &v, &u, &w);
        worst_antisym = worst_antisym.max((a.metric(&r_vu, &s) + ip1).abs() / scale);
        let r_sw = riemann(&a, &u, &v, &s);
        worst_antisym = worst_antisym.max((a.metric(&r_sw, &w) + ip1).abs() / scale);
        let bianchi = &(riemann(&a, &u, &v, &w).mat() + riemann(&a, &v, &w, &u).mat())
            + riemann(&a, &w, &u, &v).mat();
        worst_bianchi = worst_bianchi.max(bianchi.max_abs() / scale);
    }
    assert!(worst_routes < 1e-8, "route disagreement {worst_routes}");
    assert!(worst_dgamma < 1e-6, "dΓ FD error {worst_dgamma}");
    assert!(worst_bianchi < 1e-9, "Bianchi residual {worst_bianchi}");
    assert!(worst_antisym < 1e-9, "antisymmetry residual {worst_antisym}");
    println!(
        "acceptance 06 Riemann equivalence: PASS (routes {worst_routes:.3e} < 1e-8, dΓ FD \
         {worst_dgamma:.3e} < 1e-6, Bianchi {worst_bianchi:.3e} < 1e-9, antisymmetry \
         {worst_antisym:.3e} < 1e-9)"
    );
}

#[test]
fn acceptance_07_submersion_suite() {
    // dπ isometry, projected geodesic ODE, O'Neill, plus structural checks.
    let report = verify_submersion(Seed(20240808), 24);
    for check in &report.checks {
        assert!(
            check.pass,
            "submersion check {} failed: {:.3e} > {:.1e}",
            check.name, check.max_err, check.threshold
        );
    }
    let by_name = |name: &str| {
        report
            .checks
            .iter()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("missing check {name}"))
    };
    assert!(by_name("dpi_isometry").max_err < 1e-10);
    assert!(by_name("projected_geodesic_ode").max_err < 1e-5);
    assert!(by_name("oneill_identity").max_err < 1e-8);

    // Non-positivity of the base curvature over 1e4 random planes.
    let mut max_sym = f64::NEG_INFINITY;
    for trial in 0..10_000u64 {
        let m = 2 + (trial % 2) as usize;
        let seed = SCAN_SEED.derive(70_000_000 + trial);
        let r = sample_gaussian(m, m, seed);
        let g = match frameform_core::submersion::SymPoint::new(
            &(&r.transpose() * &r) + &RealMatrix::identity(m),
        ) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let sym_tan = |s: Seed| {
            let t = sample_gaussian(m, m, s);
            SymTangent::new(&(&t + &t.transpose()) * 0.5).unwrap()
        };
        let h = sym_tan(seed.derive(1));
        let k = sym_tan(seed.derive(2));
        if let Ok(ks) = sym_sectional(&g, &h, &k) {
            max_sym = max_sym.max(ks);
        }
    }
    assert!(max_sym <= 1e-12, "positive Sym curvature {max_sym}");

    println!(
        "acceptance 07 submersion suite: PASS (dπ isometry {:.3e} < 1e-10, projected ODE \
         {:.3e} < 1e-5, O'Neill {:.3e} < 1e-8, max Sym K = {max_sym:.3e} ≤ 1e-12)",
        by_name("dpi_isometry").max_err,
        by_name("projected_geodesic_ode").max_err,
        by_name("oneill_identity").max_err
    );
}

#[test]
fn acceptance_08_distance_bounds() {
    // Pairs are drawn at m ∈ {1,2}, where random frames are geodesically
    // connectable; as m approaches n the exponential map stops being
    // surjective (the space is incomplete) and shooting legitimately reports
    // NoConvergence — that path is exercised by the forms tests instead.
    let dims = [(3usize, 2usize), (4, 2), (5, 2), (3, 1)];
    let mut shot_count = 0usize;
    let mut worst_margin = f64::INFINITY;
    for trial in 0..100u64 {
        let (n, m) = dims[trial as usize % dims.len()];
        let seed = SCAN_SEED.derive(80_000 + trial);
        let a = random_frame(n, m, seed);
        let b = random_frame(n, m, seed.derive(9));
        let shot = match shoot_bvp(&a, &b, 100, 1e-8) {
            Ok(s) => s,
            Err(_) => continue,
        };
        shot_count += 1;
        let len = a.norm(&shot.u0);
        let mf = m as f64;
        let upper =
            2.0 / mf.sqrt() * (a.sqrt_det_gram().sqrt() + b.sqrt_det_gram().sqrt());
        let lower = 2.0 / mf.sqrt() * (a.sqrt_det_gram().sqrt() - b.sqrt_det_gram().sqrt()).abs();
        assert!(
            lower <= len + 1e-9,
            "volume lower bound {lower} exceeds shot length {len}"
        );
        assert!(len <= upper + 1e-9, "shot length {len} exceeds bound {upper}");
        worst_margin = worst_margin.min(upper - len);
    }
    assert!(shot_count >= 95, "only {shot_count}/100 shots converged");

    // Straight scaling path length equals (2/√m)·det(a₁ᵀa₁)^{1/4}.
    let a1 = random_frame(3, 2, SCAN_SEED.derive(81_000));
    let steps = 4000;
    let mut times = Vec::new();
    let mut frames = Vec::new();
    let mut vels = Vec::new();
    for k in 0..=steps {
        let t = (k as f64 / steps as f64) * (1.0 - 1e-9);
        times.push(t);
        frames.push(a1.scaled(1.0 - t).unwrap());
        vels.push(TangentMatrix::new(a1.mat().scale(-1.0)));
    }
    let ray = MatrixPath::new(times, frames, vels).unwrap();
    let measured = path_length(&ray);
    let expected = 2.0 / (2.0_f64).sqrt() * a1.sqrt_det_gram().sqrt();
    let rel = (measured - expected).abs() / expected;
    assert!(rel < 1e-6, "scaling path length off by {rel}");

    // Form-level bounds bracket the shot lengths on matching grids.
    let values_a: Vec<FrameMatrix> = (0..4)
        .map(|i| random_frame(3, 2, SCAN_SEED.derive(82_000 + i)))
        .collect();
    let values_b: Vec<FrameMatrix> = (0..4)
        .map(|i| random_frame(3, 2, SCAN_SEED.derive(83_000 + i)))
        .collect();
    let alpha = DiscreteOneForm::on_uniform_grid(values_a).unwrap();
    let beta = DiscreteOneForm::on_uniform_grid(values_b).unwrap();
    let d = distance_bounds(&alpha, &beta).unwrap();
    assert!(!d.partial, "distance bounds incomplete");
    assert!(d.lower <= d.upper);

    println!(
        "acceptance 08 distance bounds: PASS ({shot_count}/100 shots converged, all inside \
         the Lemma bounds with min margin {worst_margin:.3e}; scaling path length matches \
         (2/√m)·det^(1/4) to {rel:.3e}; form bounds lower {:.6} ≤ upper {:.6})",
        d.lower, d.upper
    );
}

#[test]
fn acceptance_09_curve_geodesics() {
    // Scaling example: c(t,θ) = (1 − t/2)²·c₀(θ) to 1e-10.
    let c0 = DiscreteCurve::sample(101, |t| vec![t, 0.0]).unwrap();
    let h: Vec<Vec<f64>> = c0.points().iter().map(|p| vec![-p[0], -p[1]]).collect();
    let sol = curve_geodesic_solve(&c0, &h).unwrap();
    assert_eq!(sol.blowup().unwrap().1, 2.0);
    let mut worst: f64 = 0.0;
    for &t in &[0.25, 0.5, 1.0, 1.5] {
        let ct = sol.eval(t).unwrap();
        let scale = (1.0 - t / 2.0) * (1.0 - t / 2.0);
        for (p, q) in ct.points().iter().zip(c0.points()) {
            worst = worst.max((p[0] - scale * q[0]).abs()).max(p[1].abs());
        }
    }
    assert!(worst < 1e-10, "scaling example deviation {worst}");

    // Two independent pipelines agree to quadrature error with order ≥ 1.9.
    let smooth = |t: f64| -> Vec<f64> {
        let ang = 1.4 * t;
        vec![ang.cos(), ang.sin(), 0.3 * (2.0 * t).sin()]
    };
    let field = |t: f64| -> Vec<f64> {
        vec![0.4 * (2.1 * t).sin(), -0.3 * t * t, 0.2 * (1.7 * t).cos()]
    };
    let t_eval = 0.8;
    let deviation_at = |count: usize| -> f64 {
        let c = DiscreteCurve::sample(count, smooth).unwrap();
        let hf: Vec<Vec<f64>> = c.nodes().iter().map(|t| field(*t)).collect();
        let direct = curve_geodesic(&c, &hf, t_eval).unwrap();
        let alpha = curve_to_form(&c).unwrap();
        // d/dθ of the field, sampled through the same estimator the curve
        // pipeline uses internally, by differentiating the curve h-values.
        let hd: Vec<TangentMatrix> = {
            let tmp_curve_nodes = c.nodes().to_vec();
            let ders = {
                // second-order derivative samples of hf on the grid
                let n = tmp_curve_nodes.len();
                let mut out = vec![vec![0.0; 3]; n];
                for i in 0..n {
                    let (i0, i1, i2) = if i == 0 {
                        (0, 1, 2)
                    } else if i == n - 1 {
                        (n - 3, n - 2, n - 1)
                    } else {
                        (i - 1, i, i + 1)
                    };
                    let (x0, x1, x2) =
                        (tmp_curve_nodes[i0], tmp_curve_nodes[i1], tmp_curve_nodes[i2]);
                    let x = tmp_curve_nodes[i];
                    // derivative of the quadratic through the three samples
                    let l0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
                    let l1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
                    let l2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
                    for d in 0..3 {
                        out[i][d] =
                            l0 * hf[i0][d] + l1 * hf[i1][d] + l2 * hf[i2][d];
                    }
                }
                out
            };
            ders.iter()
                .map(|d| TangentMatrix::new(RealMatrix::new(3, 1, d.clone()).unwrap()))
                .collect()
        };
        let moved = form_geodesic(&alpha, &hd, t_eval).unwrap();
        let via_form = form_to_curve(&moved, &[0.0, 0.0, 0.0]).unwrap();
        let mut worst: f64 = 0.0;
        for (p, q) in direct.points().iter().zip(via_form.points()) {
            for d in 0..3 {
                worst = worst.max((p[d] - q[d]).abs());
            }
        }
        worst
    };
    let d1 = deviation_at(64);
    let d2 = deviation_at(128);
    let order = (d1 / d2).log2();
    assert!(
        order >= 1.9,
        "pipeline agreement order {order} (d1={d1:.3e}, d2={d2:.3e})"
    );
    println!(
        "acceptance 09 curve geodesics: PASS (scaling example deviation {worst:.3e} < 1e-10; \
         pipeline agreement order {order:.2} ≥ 1.9 with deviations {d1:.3e} → {d2:.3e})"
    );
}

#[test]
fn acceptance_10_invariance_suite() {
    // O(n) left invariance and |det c| right scaling of the metric.
    let mut worst_left: f64 = 0.0;
    let mut worst_right: f64 = 0.0;
    for trial in 0..100u64 {
        let n = 3 + (trial % 3) as usize;
        let m = 1 + (trial % 3) as usize;
        let seed = SCAN_SEED.derive(100_000 + trial);
        let a = random_frame(n, m, seed);
        let u = gauss_tangent(n, m, seed.derive(1));
        let v = gauss_tangent(n, m, seed.derive(2));
        let base = a.metric(&u, &v);
        let denom = 1.0 + base.abs();

        let raw = sample_gaussian(n, n, seed.derive(3));
        let z = (&raw - &raw.transpose()).expm();
        let za = FrameMatrix::new(&z * a.mat()).unwrap();
        let lhs = za.metric(
            &TangentMatrix::new(&z * u.mat()),
            &TangentMatrix::new(&z * v.mat()),
        );
        worst_left = worst_left.max((lhs - base).abs() / denom);

        let c = sample_gaussian(m, m, seed.derive(4));
        if c.det().abs() > 1e-2 {
            if let Ok(ac) = FrameMatrix::new(a.mat() * &c) {
                let rhs = ac.metric(
                    &TangentMatrix::new(u.mat() * &c),
                    &TangentMatrix::new(v.mat() * &c),
                );
                worst_right =
                    worst_right.max((rhs - base * c.det().abs()).abs() / denom.max(rhs.abs()));
            }
        }
    }
    assert!(worst_left < 1e-10, "left invariance error {worst_left}");
    assert!(worst_right < 1e-10, "right scaling error {worst_right}");

    // Reparametrization invariance of the Younes metric at second order.
    let curve = |t: f64| -> Vec<f64> {
        let ang = 1.2 * t;
        vec![ang.cos(), ang.sin()]
    };
    let hf = |t: f64| vec![(2.0 * t).sin(), 0.3 * t * t];
    let kf = |t: f64| vec![0.5 * t, (1.5 * t).cos()];
    let phi = |t: f64| (t + t * t) / 2.0;
    let err_at = |count: usize| -> f64 {
        let c = DiscreteCurve::sample(count, curve).unwrap();
        let h: Vec<Vec<f64>> = c.nodes().iter().map(|t| hf(*t)).collect();
        let k: Vec<Vec<f64>> = c.nodes().iter().map(|t| kf(*t)).collect();
        let base = frameform_core::forms::curve_metric(&c, &h, &k).unwrap();
        // Exact samples of the reparametrized data.
        let cp = DiscreteCurve::sample(count, |t| curve(phi(t))).unwrap();
        let hp: Vec<Vec<f64>> = cp.nodes().iter().map(|t| hf(phi(*t))).collect();
        let kp: Vec<Vec<f64>> = cp.nodes().iter().map(|t| kf(phi(*t))).collect();
        let pulled = frameform_core::forms::curve_metric(&cp, &hp, &kp).unwrap();
        (pulled - base).abs()
    };
    let e1 = err_at(64);
    let e2 = err_at(128);
    let order = (e1 / e2).log2();
    assert!(
        order >= 1.9,
        "reparametrization invariance order {order} (e1={e1:.3e}, e2={e2:.3e})"
    );
    println!(
        "acceptance 10 invariances: PASS (O(n) left {worst_left:.3e} < 1e-10, |det c| right \
         {worst_right:.3e} < 1e-10, Younes reparametrization order {order:.2} ≥ 1.9)"
    );
}

#[test]
fn acceptance_11_totally_geodesic_subspaces() {
    // Scaling rays stay rays.
    let mut worst_ray: f64 = 0.0;
    for trial in 0..20u64 {
        let (m, n) = [(2usize, 3usize), (2, 4), (3, 5), (1, 3)][trial as usize % 4];
        let a = random_frame(n, m, SCAN_SEED.derive(110_000 + trial));
        let c = if trial % 2 == 0 { 0.7 } else { -0.3 };
        let sol = solve_ivp(&a, &TangentMatrix::new(a.mat().scale(c))).unwrap();
        for &t in &[0.5, 1.0, 2.0] {
            if sol.blowup().map(|tb| t >= tb).unwrap_or(false) {
                continue;
            }
            let (af, _) = sol.eval(t).unwrap();
            let lam = af.mat().dot(a.mat()) / a.mat().dot(a.mat());
            let off = af.mat() - &a.mat().scale(lam);
            worst_ray = worst_ray.max(off.max_abs() / af.mat().max_abs());
        }
    }
    assert!(worst_ray < 1e-12, "off-ray component {worst_ray}");

    // Zero-padded GL(m) blocks keep their zero bottom block.
    let mut worst_block: f64 = 0.0;
    for trial in 0..20u64 {
        let (m, n) = [(2usize, 4usize), (3, 5)][trial as usize % 2];
        let seed = SCAN_SEED.derive(111_000 + trial);
        let top_a = sample_gaussian(m, m, seed);
        if top_a.det().abs() < 1e-2 {
            continue;
        }
        let top_u = sample_gaussian(m, m, seed.derive(1));
        let mut a_mat = RealMatrix::zeros(n, m);
        let mut u_mat = RealMatrix::zeros(n, m);
        for i in 0..m {
            for j in 0..m {
                a_mat[(i, j)] = top_a[(i, j)];
                u_mat[(i, j)] = top_u[(i, j)];
            }
        }
        let a = FrameMatrix::new(a_mat).unwrap();
        let sol = solve_ivp(&a, &TangentMatrix::new(u_mat)).unwrap();
        for &t in &[0.5, 1.0, 2.0] {
            if sol.blowup().map(|tb| t >= tb).unwrap_or(false) {
                continue;
            }
            let (af, _) = sol.eval(t).unwrap();
            let mut bottom: f64 = 0.0;
            for i in m..n {
                for j in 0..m {
                    bottom = bottom.max(af.mat()[(i, j)].abs());
                }
            }
            worst_block = worst_block.max(bottom / af.mat().max_abs());
        }
    }
    assert!(worst_block < 1e-12, "bottom block leakage {worst_block}");
    println!(
        "acceptance 11 totally geodesic subspaces: PASS (scaling-ray deviation {worst_ray:.3e} \
         < 1e-12, GL(m) block leakage {worst_block:.3e} < 1e-12)"
    );
}

#[test]
fn acceptance_extra_horizontal_projection_consistency() {
    // Horizontal geodesics stay horizontal and project onto Sym₊ geodesics;
    // exercises the same machinery end to end on fresh dimensions.
    let a = random_frame(5, 3, SCAN_SEED.derive(120_000));
    let (h, _) = split_horizontal_vertical(&a, &gauss_tangent(5, 3, SCAN_SEED.derive(120_001)));
    let unit = TangentMatrix::new(h.mat().scale(1.0 / a.norm(&h)));
    let sol = solve_ivp(&a, &unit).unwrap();
    let fd = 1e-4;
    let mut worst_ode: f64 = 0.0;
    let mut worst_skew: f64 = 0.0;
    for k in 1..=10 {
        let t = k as f64 / 10.0;
        let (at, vt) = sol.eval(t).unwrap();
        let l = vt.mat() * at.pinv();
        worst_skew = worst_skew.max(l.max_abs_diff(&l.transpose()) / (1.0 + l.max_abs()));
        let (ap, _) = sol.eval(t + fd).unwrap();
        let (am, _) = sol.eval(t - fd).unwrap();
        let second = &(&(ap.gram() + am.gram()) - &at.gram().scale(2.0)) * (1.0 / (fd * fd));
        let rhs = sym_geodesic_rhs(&project_pi(&at), &dpi(&at, &vt));
        worst_ode = worst_ode.max(second.max_abs_diff(rhs.h()) / (1.0 + rhs.h().max_abs()));
    }
    assert!(worst_skew < 1e-8, "horizontality drift {worst_skew}");
    assert!(worst_ode < 1e-5, "projected ODE residual {worst_ode}");

    // O'Neill data on the same geodesic's initial plane.
    let (k2, _) = split_horizontal_vertical(&a, &gauss_tangent(5, 3, SCAN_SEED.derive(120_002)));
    let oc = oneill_check(&a, &h, &k2).unwrap();
    let denom = oc.k_sym.abs().max(oc.k_mat.abs()).max(1e-12);
    assert!((oc.k_sym - oc.k_mat - oc.oneill_term).abs() < 1e-8 * denom);
    println!(
        "acceptance extra horizontal consistency: PASS (skew drift {worst_skew:.3e}, \
         projected ODE {worst_ode:.3e}, O'Neill residual {:.3e})",
        (oc.k_sym - oc.k_mat - oc.oneill_term).abs() / denom
    );
}

#[test]
fn acceptance_extra_first_variation_of_energy() {
    // The closed-form geodesics are critical points of the metric energy:
    // a transcription-free check that the geodesic equation is the
    // Euler–Lagrange equation of E = ∫⟨a_t,a_t⟩_a dt.
    let a = random_frame(4, 2, SCAN_SEED.derive(130_000));
    let u = TangentMatrix::new(sample_gaussian(4, 2, SCAN_SEED.derive(130_001)).scale(0.4));
    let sol = solve_ivp(&a, &u).unwrap();
    let nsteps = 4000usize;
    let bump = sample_gaussian(4, 2, SCAN_SEED.derive(130_002));
    let energy = |eps: f64| -> f64 {
        let mut total = 0.0;
        let dt = 1.0 / nsteps as f64;
        let path_at = |t: f64| -> RealMatrix {
            let (f, _) = sol.eval(t).unwrap();
            let shape = (std::f64::consts::PI * t).sin();
            f.mat() + &bump.scale(eps * shape)
        };
        for k in 0..nsteps {
            let t0 = k as f64 * dt;
            let t1 = (k + 1) as f64 * dt;
            let m0 = path_at(t0);
            let m1 = path_at(t1);
            let mid = FrameMatrix::new((&m0 + &m1).scale(0.5)).unwrap();
            let vel = TangentMatrix::new(&(&m1 - &m0) * (1.0 / dt));
            total += mid.metric(&vel, &vel) * dt;
        }
        total
    };
    let e0 = energy(0.0);
    let h = 1e-4;
    let de = (energy(h) - energy(-h)) / (2.0 * h);
    assert!(
        (de / e0).abs() < 1e-3,
        "first variation {de:.3e} relative {:.3e}",
        de / e0
    );
    println!(
        "acceptance extra energy criticality: PASS (relative first variation {:.3e})",
        (de / e0).abs()
    );
}

#[test]
fn acceptance_extra_quadrature_weights_partition() {
    // Trapezoid weights on [0,1] grids integrate constants exactly.
    for count in [2usize, 5, 33] {
        let nodes: Vec<f64> = (0..count).map(|i| i as f64 / (count - 1) as f64).collect();
        let w = trapezoid_weights(&nodes);
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
    println!("acceptance extra quadrature weights: PASS");
}
