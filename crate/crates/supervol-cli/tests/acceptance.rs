//! Acceptance gate: one test per criterion, so the harness prints one
//! pass/fail line for each. Every comparison is an exact rational equality
//! unless a floating tolerance is stated next to it.

use std::time::Instant;

use supervol::kappa::kappa_polynomials;
use supervol::kernels::{d_double_moment, r_moment};
use supervol::pipoly::PiPoly;
use supervol::quad::{quadrature_oracle, MomentKind};
use supervol::rat::{rat, rat_int};
use supervol::tau::{
    commutator_check, extend_disk_sector, omk_bridge_check, solve_constraints,
    tau_from_volumes, translate_partition, virconj_residual, volumes_from_tau, Family,
};
use supervol::tseries::{TCaps, TKey};
use supervol::verify::{run_suite, CheckStatus};
use supervol::volumes::{
    closed_form_v2, closed_form_v4, dilaton_check, disk_direct, disk_laplace,
    disk_top_degree, laplace_to_volume, recursion_rhs, solve_volumes, VolumeId,
};
use supervol::VolPoly;

const PI2: f64 = std::f64::consts::PI * std::f64::consts::PI;

fn poly1(terms: &[(u32, i64, i64, usize)]) -> VolPoly {
    // One-variable polynomial from (l-exponent, numer, denom, p-power) rows.
    let mut v = VolPoly::zero(1);
    for &(e, num, den, p) in terms {
        v.insert_add(vec![e], PiPoly::term(rat(num, den), p));
    }
    v
}

#[test]
fn criterion_01_disk_series() {
    let start = Instant::now();
    let direct = disk_direct(6).unwrap();
    assert_eq!(direct.get(2), Some(&VolPoly::one(1)), "s^2/2! must be 1/2 * 2!");
    assert_eq!(
        direct.get(4),
        Some(&poly1(&[(0, 6, 1, 1), (1, 1, 2, 0)])),
        "s^4/4! must be 6 pi^2 + L^2/2"
    );
    assert_eq!(
        direct.get(6),
        Some(&poly1(&[(0, 330, 1, 2), (1, 30, 1, 1), (2, 3, 8, 0)])),
        "s^6/6! must be 330 pi^4 + 30 pi^2 L^2 + 3 L^4/8"
    );
    assert!(start.elapsed().as_secs_f64() < 1.0, "disk series must solve in under 1 s");
}

#[test]
fn criterion_02_laplace_expansion() {
    let f = disk_laplace(10).unwrap();
    assert_eq!(f.coeff(2, -2), PiPoly::from_rat(rat(1, 2)));
    assert_eq!(f.coeff(4, -4), PiPoly::from_rat(rat(1, 8)));
    assert_eq!(f.coeff(4, -2), PiPoly::term(rat(1, 4), 1));
    assert_eq!(f.coeff(6, -6), PiPoly::from_rat(rat(1, 16)));
    assert_eq!(f.coeff(6, -4), PiPoly::term(rat(1, 4), 1));
    assert_eq!(f.coeff(6, -2), PiPoly::term(rat(11, 24), 2));

    let via_laplace = laplace_to_volume(&f).unwrap();
    let direct = disk_direct(10).unwrap();
    for m in (2..=10u32).step_by(2) {
        assert_eq!(via_laplace.get(m), direct.get(m), "routes disagree at s^{m}");
    }
}

#[test]
fn criterion_03_catalan_law() {
    let g = disk_top_degree(26).unwrap();
    let mut cat = vec![rat_int(1)];
    for m in 1..=12usize {
        let mut acc = rat_int(0);
        for k in 0..m {
            acc += &cat[k] * &cat[m - 1 - k];
        }
        cat.push(acc);
    }
    for m in 0..=12usize {
        let s = (2 * m + 2) as u32;
        let z = -((2 * m + 2) as i32);
        let denom = rat_int(1i64 << (2 * m + 1));
        assert_eq!(g.coeff(s, z), PiPoly::from_rat(&cat[m] / denom), "C_{m}/2^(2m+1)");
        assert_eq!(g.s_slice(s).len(), 1, "top-degree slice must be a single term");
    }
}

#[test]
fn criterion_04_kernel_moments() {
    assert_eq!(
        d_double_moment(0, 0).into_quotient(),
        poly1(&[(1, 1, 6, 0), (0, 2, 1, 1)]),
        "(0,0) must be L^3/6 + 2 pi^2 L over the odd prefactor"
    );
    assert_eq!(
        d_double_moment(1, 0).into_quotient(),
        poly1(&[(2, 1, 20, 0), (1, 2, 1, 1), (0, 20, 1, 2)]),
        "(1,0) must be L^5/20 + 2 pi^2 L^3 + 20 pi^4 L over the odd prefactor"
    );
    assert_eq!(r_moment(0).into_quotient(), VolPoly::one(2));
    let mut r1 = VolPoly::zero(2);
    r1.insert_add(vec![1, 0], PiPoly::one());
    r1.insert_add(vec![0, 1], PiPoly::from_rat(rat_int(3)));
    r1.insert_add(vec![0, 0], PiPoly::term(rat_int(12), 1));
    assert_eq!(r_moment(1).into_quotient(), r1);

    for i in 0..=6u32 {
        for j in i..=6u32 {
            let m = d_double_moment(i, j);
            for l in [0.5, 1.1, 1.8, 2.6, 3.4] {
                let numeric = quadrature_oracle(MomentKind::DDouble { i, j, l }).unwrap();
                let exact = m.eval_f64(&[l], PI2);
                let rel = (numeric - exact).abs() / exact.abs();
                assert!(rel <= 1e-8, "d moment ({i},{j}) at l={l}: rel err {rel:.2e}");
            }
        }
    }
    for k in 0..=6u32 {
        let m = r_moment(k);
        for (l1, lj) in [(0.5, 0.9), (1.0, 1.0), (2.0, 1.0), (1.0, 3.0), (2.5, 1.5)] {
            let numeric = quadrature_oracle(MomentKind::RSingle { k, l1, lj }).unwrap();
            let exact = m.eval_f64(&[l1, lj], PI2);
            let rel = (numeric - exact).abs() / exact.abs().max(1e-30);
            assert!(rel <= 1e-8, "r moment k={k} at ({l1},{lj}): rel err {rel:.2e}");
        }
    }

    let report = run_suite("kernels").unwrap();
    let flagged = report
        .checks
        .iter()
        .find(|c| c.id == "r moment k=2 reference display")
        .expect("the x^5 R discrepancy must be reported");
    assert_eq!(flagged.status, CheckStatus::Flagged, "discrepancy is flagged, not failed");
    assert!(report.ok(), "the flag must not fail the suite");
}

#[test]
fn criterion_05_closed_form_families() {
    let v2_table = solve_volumes(0, 8, 2, false).unwrap().table;
    for n in 1..=8u32 {
        let id = VolumeId { g: 0, n, m: 2 };
        assert_eq!(v2_table.require(&id).unwrap(), closed_form_v2(n), "v2 family at n={n}");
        // The recursion identity itself: the moment-weighted right side
        // reproduces the closed form entry by entry.
        assert_eq!(recursion_rhs(id, &v2_table).unwrap(), closed_form_v2(n));
    }
    let v4_table = solve_volumes(0, 6, 4, true).unwrap().table;
    for n in 1..=6u32 {
        let id = VolumeId { g: 0, n, m: 4 };
        assert_eq!(v4_table.require(&id).unwrap(), closed_form_v4(n), "v4 family at n={n}");
        assert_eq!(recursion_rhs(id, &v4_table).unwrap(), closed_form_v4(n));
    }
}

#[test]
fn criterion_06_base_values_and_dilaton() {
    let table = solve_volumes(2, 3, 2, false).unwrap().table;
    assert_eq!(
        table.require(&VolumeId { g: 1, n: 1, m: 0 }).unwrap(),
        VolPoly::constant(1, PiPoly::from_rat(rat(1, 8)))
    );
    for (g, max_n) in [(0u32, 6u32), (1, 3), (2, 1)] {
        for n in 1..=max_n {
            let id = VolumeId { g, n, m: 0 };
            if id.is_stable() {
                assert!(table.get(&id).is_some(), "{id} missing for 2g-2+n <= 4");
            }
        }
    }
    let mut pairs = 0usize;
    for (id, _) in table.iter() {
        let next = VolumeId { g: id.g, n: id.n + 1, m: 0 };
        if id.m == 0 && table.get(&next).is_some() {
            let report = dilaton_check(id.g, id.n, 2, &table).unwrap();
            assert!(report.ok(), "dilaton relation fails at {id}");
            pairs += 1;
        }
    }
    assert!(pairs >= 8, "expected at least 8 adjacent pairs, saw {pairs}");
}

#[test]
fn criterion_07_virasoro_commutators() {
    for n in -1..=4i32 {
        for m in (n + 1)..=4 {
            assert!(commutator_check(m, n, 3, 7), "[L_{m}, L_{n}] != 2({m}-{n}) L_{}", m + n);
        }
    }
}

#[test]
fn criterion_08_tau_cross_validation() {
    let caps = TCaps {
        t_max: 5,
        weight_max: 13,
        s_max: 2,
        h_min: -1,
        h_max: 1,
    };
    let zbar = solve_constraints(Family::ZBar, caps).unwrap();
    let z = translate_partition(&zbar.series);
    let table = solve_volumes(2, 3, 2, false).unwrap().table;
    let from_volumes = tau_from_volumes(&table, caps);

    let mut compared = 0usize;
    for mon in caps.all_monomials() {
        let n = mon.len() as u32;
        if n == 0 {
            continue;
        }
        for s in [0u32, 2] {
            for h in -1..=1i32 {
                let id = VolumeId { g: (h + 1) as u32, n, m: s };
                if !id.is_stable() || table.get(&id).is_none() {
                    continue;
                }
                let key = TKey::new(h, s, mon.clone());
                assert_eq!(z.coeff(&key), from_volumes.coeff(&key), "mismatch at {key:?}");
                compared += 1;
            }
        }
    }
    assert!(compared > 100, "shared window too small: {compared}");

    let small = TCaps {
        t_max: 3,
        weight_max: 9,
        s_max: 2,
        h_min: -1,
        h_max: 2,
    };
    let zbar_small = solve_constraints(Family::ZBar, small).unwrap();
    for m in [0u32, 1, 3] {
        assert!(
            virconj_residual(&zbar_small.series, m).unwrap().is_zero(),
            "constraint residual m={m} must vanish"
        );
    }

    let zk = solve_constraints(Family::ZK, small).unwrap();
    let bridge = omk_bridge_check(&zbar_small.series, &zk.series).unwrap();
    assert!(bridge.ok(), "bridge mismatches: {:?}", bridge.mismatches);
    assert!(bridge.coefficients_checked > 50 && bridge.zform_checked > 10);

    let mut s0 = 0usize;
    for (key, val) in zk.series.iter() {
        if key.s == 0 {
            assert_eq!(*val, zbar_small.series.coeff(key), "s=0 reduction at {key:?}");
            s0 += 1;
        }
    }
    assert!(s0 > 10, "s=0 window too small: {s0}");
}

#[test]
fn criterion_09_translation_rebuilds_disk() {
    let disk_caps = TCaps {
        t_max: 2,
        weight_max: 8,
        s_max: 2,
        h_min: -1,
        h_max: 0,
    };
    let zbar = solve_constraints(Family::ZBar, disk_caps).unwrap();
    let extended = extend_disk_sector(&zbar.series, 6).unwrap();
    let z = translate_partition(&extended);
    let direct = disk_direct(6).unwrap();
    for m in [2u32, 4, 6] {
        let rebuilt = volumes_from_tau(&z, 0, 1, m).unwrap();
        assert_eq!(Some(&rebuilt), direct.get(m), "translated disk at s^{m}");
    }
}

#[test]
fn criterion_10_kappa_polynomials() {
    let ks = kappa_polynomials(4);
    let displays = [
        "3\\kappa_1",
        "\\frac32(3\\kappa_1^2-7\\kappa_2)",
        "\\frac32(3\\kappa_1^3-21\\kappa_1\\kappa_2+46\\kappa_3)",
        "\\frac98(3\\kappa_1^4-42\\kappa_1^2\\kappa_2+49\\kappa_2^2+184\\kappa_1\\kappa_3-562\\kappa_4)",
    ];
    for (i, want) in displays.iter().enumerate() {
        assert_eq!(ks[i].to_latex(), *want, "K_{} display", i + 1);
    }
}

#[test]
fn criterion_11_verify_all_runtime() {
    let start = Instant::now();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_supervol"))
        .args(["verify", "--suite", "all"])
        .output()
        .expect("running the verifier");
    let elapsed = start.elapsed();
    assert!(
        out.status.success(),
        "verify all failed:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "verify all took {elapsed:?}, budget is 2 minutes"
    );
}
