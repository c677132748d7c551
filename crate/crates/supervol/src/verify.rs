//! Verification suites: every reference value is recomputed through an
//! independent route and reported as a pass/fail/flagged check. Flagged
//! checks record known discrepancies in reference displays and singular
//! orders that are skipped rather than fabricated; they never fail a run.

use crate::error::{Error, Result};
use crate::kappa::{insertion_weights, kappa_polynomials};
use crate::kernels::{d_double_moment, r_moment};
use crate::pipoly::PiPoly;
use crate::quad::{d_double_direct, quadrature_oracle, MomentKind};
use crate::rat::{rat, rat_int, Rat};
use crate::tau::{
    commutator_check, extend_disk_sector, omk_bridge_check, solve_constraints,
    tau_from_volumes, translate_partition, virconj_residual, volumes_from_tau,
    ConstraintSolver, Family,
};
use crate::tseries::{TCaps, TKey, TMon};
use crate::volpoly::VolPoly;
use crate::volumes::{
    closed_form_v2, closed_form_v4, dilaton_check, disk_direct, disk_laplace,
    disk_top_degree, free_energy, laplace_to_volume, solve_volumes, VolumeId,
};
use num_bigint::BigInt;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckStatus {
    Pass,
    Fail,
    Flagged,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Flagged => "flagged",
        })
    }
}

/// One verified statement: what was expected, what was computed, and where
/// the expectation comes from.
#[derive(Clone, Debug)]
pub struct Check {
    pub id: String,
    pub status: CheckStatus,
    pub expected: String,
    pub computed: String,
    pub basis: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .count()
    }

    pub fn exit_status(&self) -> i32 {
        if self.ok() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "ok": self.ok(),
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "id": c.id,
                "status": c.status.to_string(),
                "expected": c.expected,
                "computed": c.computed,
                "basis": c.basis,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("[{:>7}] {}: {}\n", c.status, c.id, c.computed));
            if c.status == CheckStatus::Fail {
                out.push_str(&format!("          expected {}\n", c.expected));
            }
        }
        out.push_str(&format!(
            "suite {}: {} checks, {} failures\n",
            self.suite,
            self.checks.len(),
            self.failures()
        ));
        out
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn new() -> Self {
        Checks(Vec::new())
    }

    fn eq<T: PartialEq + fmt::Display>(&mut self, id: &str, basis: &str, want: T, got: T) {
        let status = if want == got {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.0.push(Check {
            id: id.into(),
            status,
            expected: want.to_string(),
            computed: got.to_string(),
            basis: basis.into(),
        });
    }

    fn holds(&mut self, id: &str, basis: &str, ok: bool, expected: &str, computed: String) {
        self.0.push(Check {
            id: id.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            expected: expected.into(),
            computed,
            basis: basis.into(),
        });
    }

    fn flagged(&mut self, id: &str, basis: &str, expected: &str, computed: String) {
        self.0.push(Check {
            id: id.into(),
            status: CheckStatus::Flagged,
            expected: expected.into(),
            computed,
            basis: basis.into(),
        });
    }
}

pub const SUITES: [&str; 7] = [
    "kernels",
    "disk",
    "recursion",
    "dilaton",
    "virasoro",
    "translation",
    "bridge",
];

/// Runs one suite by name, or every suite for "all".
pub fn run_suite(name: &str) -> Result<VerifyReport> {
    let checks = match name {
        "kernels" => suite_kernels()?,
        "disk" => suite_disk()?,
        "recursion" => suite_recursion()?,
        "dilaton" => suite_dilaton()?,
        "virasoro" => suite_virasoro()?,
        "translation" => suite_translation()?,
        "bridge" => suite_bridge()?,
        "all" => {
            let mut all = Vec::new();
            for s in SUITES {
                all.extend(run_suite(s)?.checks);
            }
            all
        }
        other => {
            return Err(Error::InvalidRequest(format!(
                "unknown suite {other:?}: expected one of {SUITES:?} or all"
            )))
        }
    };
    Ok(VerifyReport {
        suite: name.into(),
        checks,
    })
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-30)
}

fn suite_kernels() -> Result<Vec<Check>> {
    let mut c = Checks::new();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;

    let mut d00 = VolPoly::zero(1);
    d00.insert_add(vec![1], PiPoly::from_rat(rat(1, 6)));
    d00.insert_add(vec![0], PiPoly::term(rat_int(2), 1));
    c.eq(
        "d moment (0,0)",
        "reference value L^3/6 + 2 pi^2 L",
        d00,
        d_double_moment(0, 0).into_quotient(),
    );

    let mut d10 = VolPoly::zero(1);
    d10.insert_add(vec![2], PiPoly::from_rat(rat(1, 20)));
    d10.insert_add(vec![1], PiPoly::term(rat_int(2), 1));
    d10.insert_add(vec![0], PiPoly::term(rat_int(20), 2));
    c.eq(
        "d moment (1,0)",
        "reference value L^5/20 + 2 pi^2 L^3 + 20 pi^4 L",
        d10,
        d_double_moment(1, 0).into_quotient(),
    );

    c.eq(
        "r moment k=0",
        "reference value L_1",
        VolPoly::one(2),
        r_moment(0).into_quotient(),
    );

    let mut r1 = VolPoly::zero(2);
    r1.insert_add(vec![1, 0], PiPoly::one());
    r1.insert_add(vec![0, 1], PiPoly::from_rat(rat_int(3)));
    r1.insert_add(vec![0, 0], PiPoly::term(rat_int(12), 1));
    c.eq(
        "r moment k=1",
        "reference value L_1(L_1^2 + 3 L_j^2 + 12 pi^2)",
        r1,
        r_moment(1).into_quotient(),
    );

    c.flagged(
        "r moment k=2 reference display",
        "reference display is dimensionally inhomogeneous; the derived \
         symmetrized value is used instead and both are reported",
        "L_1(L_1^4 + 3 L_j^4 + 12 pi^2)",
        format!("L_1({})", r_moment(2).quotient().to_plain()),
    );

    for i in 0..=6u32 {
        for j in i..=6u32 {
            let m = d_double_moment(i, j);
            let mut worst = 0.0f64;
            for l in [0.5, 1.1, 1.8, 2.6, 3.4] {
                let numeric = quadrature_oracle(MomentKind::DDouble { i, j, l })?;
                let exact = m.eval_f64(&[l], pi2);
                worst = worst.max(rel_err(numeric, exact));
            }
            c.holds(
                &format!("d moment ({i},{j}) vs quadrature"),
                "independent adaptive quadrature at 5 lengths",
                worst < 1e-8,
                "rel err < 1e-8",
                format!("max rel err {worst:.2e}"),
            );
        }
    }

    let mut worst_direct = 0.0f64;
    for (i, j, l) in [(0, 0, 1.0), (1, 0, 2.0), (0, 2, 0.7), (1, 1, 1.5)] {
        let direct = d_double_direct(i, j, l)?;
        let exact = d_double_moment(i, j).eval_f64(&[l], pi2);
        worst_direct = worst_direct.max(rel_err(direct, exact));
    }
    c.holds(
        "d moments vs direct 2-d quadrature",
        "nested adaptive quadrature without the convolution reduction",
        worst_direct < 1e-8,
        "rel err < 1e-8",
        format!("max rel err {worst_direct:.2e}"),
    );

    for k in 0..=6u32 {
        let m = r_moment(k);
        let mut worst = 0.0f64;
        for (l1, lj) in [(0.5, 0.9), (1.0, 1.0), (2.0, 1.0), (1.0, 3.0), (2.5, 1.5)] {
            let numeric = quadrature_oracle(MomentKind::RSingle { k, l1, lj })?;
            let exact = m.eval_f64(&[l1, lj], pi2);
            worst = worst.max(rel_err(numeric, exact));
        }
        c.holds(
            &format!("r moment k={k} vs quadrature"),
            "independent adaptive quadrature at 5 length pairs",
            worst < 1e-8,
            "rel err < 1e-8",
            format!("max rel err {worst:.2e}"),
        );
    }

    Ok(c.0)
}

fn suite_disk() -> Result<Vec<Check>> {
    let mut c = Checks::new();
    let direct = disk_direct(10)?;

    c.eq(
        "disk order s^2",
        "reference series coefficient 1/2 of s^2 (times 2!)",
        VolPoly::one(1),
        direct.get(2).cloned().unwrap_or_else(|| VolPoly::zero(1)),
    );
    let mut v4 = VolPoly::zero(1);
    v4.insert_add(vec![0], PiPoly::term(rat_int(6), 1));
    v4.insert_add(vec![1], PiPoly::from_rat(rat(1, 2)));
    c.eq(
        "disk order s^4",
        "reference series 6 pi^2 + L^2/2",
        v4,
        direct.get(4).cloned().unwrap_or_else(|| VolPoly::zero(1)),
    );
    let mut v6 = VolPoly::zero(1);
    v6.insert_add(vec![0], PiPoly::term(rat_int(330), 2));
    v6.insert_add(vec![1], PiPoly::term(rat_int(30), 1));
    v6.insert_add(vec![2], PiPoly::from_rat(rat(3, 8)));
    c.eq(
        "disk order s^6",
        "reference series 330 pi^4 + 30 pi^2 L^2 + 3 L^4/8",
        v6,
        direct.get(6).cloned().unwrap_or_else(|| VolPoly::zero(1)),
    );

    let f = disk_laplace(10)?;
    c.eq(
        "laplace s^2 slice",
        "reference expansion s^2/(2 z^2)",
        PiPoly::from_rat(rat(1, 2)),
        f.coeff(2, -2),
    );
    let ok4 = f.coeff(4, -4) == PiPoly::from_rat(rat(1, 8))
        && f.coeff(4, -2) == PiPoly::term(rat(1, 4), 1);
    c.holds(
        "laplace s^4 slice",
        "reference expansion (1/8)(z^-4 + 2 pi^2 z^-2)",
        ok4,
        "1/8, pi^2/4",
        format!("{}, {}", f.coeff(4, -4), f.coeff(4, -2)),
    );
    let ok6 = f.coeff(6, -6) == PiPoly::from_rat(rat(1, 16))
        && f.coeff(6, -4) == PiPoly::term(rat(1, 4), 1)
        && f.coeff(6, -2) == PiPoly::term(rat(11, 24), 2);
    c.holds(
        "laplace s^6 slice",
        "reference expansion (1/48)(3 z^-6 + 12 pi^2 z^-4 + 22 pi^4 z^-2)",
        ok6,
        "1/16, pi^2/4, 11 pi^4/24",
        format!("{}, {}, {}", f.coeff(6, -6), f.coeff(6, -4), f.coeff(6, -2)),
    );

    let via_laplace = laplace_to_volume(&f)?;
    for m in (2..=10u32).step_by(2) {
        c.holds(
            &format!("disk routes agree at s^{m}"),
            "two independent derivations: Laplace inversion vs direct moments",
            via_laplace.get(m) == direct.get(m),
            "equal polynomials",
            match direct.get(m) {
                Some(v) => v.to_plain(),
                None => "missing".into(),
            },
        );
    }

    let g = disk_top_degree(26)?;
    let mut cat = vec![rat_int(1)];
    for m in 1..=12usize {
        let mut acc = rat_int(0);
        for k in 0..m {
            acc += &cat[k] * &cat[m - 1 - k];
        }
        cat.push(acc);
    }
    let mut catalan_ok = true;
    for m in 0..=12usize {
        let s = (2 * m + 2) as u32;
        let z = -((2 * m + 2) as i32);
        let denom = Rat::from_integer(BigInt::from(2).pow(2 * m as u32 + 1));
        if g.coeff(s, z) != PiPoly::from_rat(&cat[m] / denom) || g.s_slice(s).len() != 1 {
            catalan_ok = false;
        }
    }
    c.holds(
        "top-degree Catalan law m<=12",
        "Catalan numbers from the convolution recurrence, independently",
        catalan_ok,
        "coefficient of (s/z)^(2m+2) equals C_m/2^(2m+1)",
        "13 coefficients checked".into(),
    );

    Ok(c.0)
}

fn suite_recursion() -> Result<Vec<Check>> {
    let mut c = Checks::new();
    let outcome = solve_volumes(2, 4, 2, false)?;
    let t = &outcome.table;
    let get = |g: u32, n: u32, m: u32| t.require(&VolumeId { g, n, m });

    c.eq(
        "torus base (1,1) order s^0",
        "reference value 1/8",
        VolPoly::constant(1, PiPoly::from_rat(rat(1, 8))),
        get(1, 1, 0)?,
    );

    let mut v2_ok = true;
    for n in 1..=8u32 {
        if get(0, n, 2)? != closed_form_v2(n) {
            v2_ok = false;
        }
    }
    c.holds(
        "sphere order-s^2 family n=1..8",
        "closed form (n-1)! against the recursion engine",
        v2_ok,
        "(n-1)!",
        "8 volumes".into(),
    );

    let extended = solve_volumes(0, 6, 4, true)?;
    let mut v4_ok = true;
    for n in 1..=6u32 {
        if extended.table.require(&VolumeId { g: 0, n, m: 4 })? != closed_form_v4(n) {
            v4_ok = false;
        }
    }
    c.holds(
        "sphere order-s^4 family n=1..6",
        "closed form (n+2)! pi^2 + (n+1)!/4 sum l_i against the recursion",
        v4_ok,
        "(n+2)! pi^2 + (n+1)!/4 sum l_i",
        "6 volumes".into(),
    );

    let mut v21 = VolPoly::zero(1);
    v21.insert_add(vec![1], PiPoly::from_rat(rat(3, 256)));
    v21.insert_add(vec![0], PiPoly::term(rat(9, 64), 1));
    c.eq(
        "genus two (2,1) order s^0",
        "reference value 3 l/256 + 9 pi^2/64",
        v21,
        get(2, 1, 0)?,
    );

    let mut v22 = VolPoly::zero(2);
    v22.insert_add(vec![0, 0], PiPoly::term(rat(9, 16), 1));
    v22.insert_add(vec![1, 0], PiPoly::from_rat(rat(9, 256)));
    v22.insert_add(vec![0, 1], PiPoly::from_rat(rat(9, 256)));
    c.eq(
        "genus two (2,2) order s^0",
        "reference value 9(16 pi^2 + l_1 + l_2)/256",
        v22,
        get(2, 2, 0)?,
    );

    let mut v112 = VolPoly::zero(1);
    v112.insert_add(vec![0], PiPoly::term(rat(5, 4), 1));
    v112.insert_add(vec![1], PiPoly::from_rat(rat(5, 48)));
    c.eq(
        "torus (1,1) order s^2",
        "reference value 5(12 pi^2 + l)/48",
        v112,
        get(1, 1, 2)?,
    );

    let mut v212 = VolPoly::zero(1);
    v212.insert_add(vec![2], PiPoly::from_rat(rat(259, 15360)));
    v212.insert_add(vec![1], PiPoly::term(rat(73, 64), 1));
    v212.insert_add(vec![0], PiPoly::term(rat(11845, 960), 2));
    c.eq(
        "genus two (2,1) order s^2",
        "reference value (259 l^2 + 17520 pi^2 l + 189520 pi^4)/15360",
        v212,
        get(2, 1, 2)?,
    );

    c.holds(
        "table structural guards",
        "symmetry, degree bound, and stability validated on every insert",
        true,
        "all entries symmetric within degree bound",
        format!("{} entries", t.len()),
    );

    Ok(c.0)
}

fn suite_dilaton() -> Result<Vec<Check>> {
    let mut c = Checks::new();
    let t = solve_volumes(2, 3, 2, false)?.table;

    for (g, n) in [(0u32, 3u32), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2)] {
        let report = dilaton_check(g, n, 2, &t)?;
        c.holds(
            &format!("dilaton relation ({g},{n})"),
            "boundary removal at l = -4 pi^2 scales by 2g-2+n+m",
            report.ok(),
            "exact at every computed order",
            format!("orders {:?}", report.orders_checked),
        );
    }

    let f2 = free_energy(2, 2, &t)?;
    c.eq(
        "free energy genus 2 order s^0",
        "volume with the boundary closed, divided by 2g-2",
        PiPoly::term(rat(3, 64), 1),
        f2.terms.get(&0).cloned().unwrap_or_else(PiPoly::zero),
    );
    let f1 = free_energy(1, 2, &t)?;
    c.holds(
        "free energy genus 1 singular order flagged",
        "order m=0 has 2g-2+m = 0: skipped, never fabricated",
        f1.flagged_orders == vec![0],
        "[0]",
        format!("{:?}", f1.flagged_orders),
    );
    c.eq(
        "free energy genus 1 order s^2",
        "volume with the boundary closed, divided by 2g-2+m",
        PiPoly::term(rat(5, 12), 1),
        f1.terms.get(&2).cloned().unwrap_or_else(PiPoly::zero),
    );
    let f0 = free_energy(0, 2, &t)?;
    c.holds(
        "free energy genus 0 singular order flagged",
        "order m=2 has 2g-2+m = 0: skipped, never fabricated",
        f0.flagged_orders == vec![2],
        "[2]",
        format!("{:?}", f0.flagged_orders),
    );

    Ok(c.0)
}

fn suite_virasoro() -> Result<Vec<Check>> {
    let mut c = Checks::new();

    for n in -1..=3i32 {
        for m in (n + 1)..=4i32 {
            if m + n < -1 {
                continue;
            }
            c.holds(
                &format!("commutator [L_{m}, L_{n}] = 2({m}-({n})) L_{}", m + n),
                "applied to every basis monomial with t-index <= 3, weight <= 7",
                commutator_check(m, n, 3, 7),
                "operator identity on the basis",
                "verified".into(),
            );
        }
    }

    let mut s = ConstraintSolver::new(Family::ZBar);
    let frozen: [(&str, i32, u32, &[u8], Rat); 7] = [
        ("genus 1 <tau_0>", 0, 0, &[0], rat(1, 8)),
        ("disk s^2 <tau_0>", -1, 2, &[0], rat(1, 2)),
        ("disk s^2 <tau_0^2>", -1, 2, &[0, 0], rat(1, 4)),
        ("genus 2 <tau_1>", 1, 0, &[1], rat(3, 128)),
        ("genus 3 <tau_2>", 2, 0, &[2], rat(15, 1024)),
        ("genus 1 s^2 <tau_1>", 0, 2, &[1], rat(5, 48)),
        ("genus 2 s^2 <tau_2>", 1, 2, &[2], rat(259, 3840)),
    ];
    for (name, h, ss, mon, want) in frozen {
        c.eq(
            &format!("solved coefficient {name}"),
            "order-by-order constraint solution",
            want,
            s.coeff(h, ss, &TMon::new(mon.to_vec()))?,
        );
    }
    let torus_constant = s.coeff(0, 0, &TMon::empty())?;
    c.holds(
        "free constants flagged",
        "coefficients with 2g-2+m = 0 are set to zero and reported",
        torus_constant == rat_int(0) && s.flagged().count() >= 1,
        "zero, >= 1 flagged key",
        format!("{torus_constant}, {} flagged", s.flagged().count()),
    );

    let mut k = ConstraintSolver::new(Family::ZK);
    c.eq(
        "kappa-side genus 1 s^2 <tau_1>",
        "order-by-order constraint solution",
        rat(1, 24),
        k.coeff(0, 2, &TMon::new(vec![1]))?,
    );
    c.eq(
        "kappa-side genus 2 s^2 <tau_2>",
        "order-by-order constraint solution",
        rat(107, 1920),
        k.coeff(1, 2, &TMon::new(vec![2]))?,
    );

    let caps = TCaps {
        t_max: 3,
        weight_max: 9,
        s_max: 2,
        h_min: -1,
        h_max: 2,
    };
    let zbar = solve_constraints(Family::ZBar, caps)?;
    for m in [0u32, 1, 3] {
        let res = virconj_residual(&zbar.series, m)?;
        c.holds(
            &format!("constraint residual m={m}"),
            "re-applying the solved-for operator to the exponentiated series",
            res.is_zero(),
            "identically zero through s^2",
            format!("{} nonzero keys", res.len()),
        );
    }

    let weights = insertion_weights(4);
    c.holds(
        "kappa insertion weights",
        "log-inverse of the double-factorial generating series",
        weights == vec![rat_int(3), rat(-21, 2), rat_int(69), rat(-2529, 4)],
        "[3, -21/2, 69, -2529/4]",
        format!("{weights:?}"),
    );
    let ks = kappa_polynomials(4);
    let printed = [
        "3\\kappa_1",
        "\\frac32(3\\kappa_1^2-7\\kappa_2)",
        "\\frac32(3\\kappa_1^3-21\\kappa_1\\kappa_2+46\\kappa_3)",
        "\\frac98(3\\kappa_1^4-42\\kappa_1^2\\kappa_2+49\\kappa_2^2+184\\kappa_1\\kappa_3-562\\kappa_4)",
    ];
    for (i, want) in printed.iter().enumerate() {
        c.eq(
            &format!("kappa polynomial K_{} display", i + 1),
            "reference display, content-factored",
            want.to_string(),
            ks[i].to_latex(),
        );
    }
    c.holds(
        "kappa polynomial homogeneity",
        "grade-m part of the exponential of weighted kappa classes",
        (0..4).all(|i| ks[i].is_homogeneous_of_grade(i as u32 + 1)),
        "K_m homogeneous of grade m",
        "m = 1..4".into(),
    );

    Ok(c.0)
}

fn suite_translation() -> Result<Vec<Check>> {
    let mut c = Checks::new();
    let caps = TCaps {
        t_max: 5,
        weight_max: 13,
        s_max: 2,
        h_min: -1,
        h_max: 1,
    };
    let zbar = solve_constraints(Family::ZBar, caps)?;
    let z = translate_partition(&zbar.series);
    let table = solve_volumes(2, 3, 2, false)?.table;
    let from_volumes = tau_from_volumes(&table, caps);

    let mut compared = 0usize;
    let mut equal = true;
    for mon in caps.all_monomials() {
        let n = mon.len() as u32;
        if n == 0 {
            continue;
        }
        for ss in [0u32, 2] {
            for h in -1..=1i32 {
                let id = VolumeId {
                    g: (h + 1) as u32,
                    n,
                    m: ss,
                };
                if !id.is_stable() || table.get(&id).is_none() {
                    continue;
                }
                let key = TKey::new(h, ss, mon.clone());
                if z.coeff(&key) != from_volumes.coeff(&key) {
                    equal = false;
                }
                compared += 1;
            }
        }
    }
    c.holds(
        "translated constraints vs recursion table",
        "two unrelated computations of the same correlators (genus <= 2)",
        equal && compared > 100,
        "coefficient-by-coefficient equality",
        format!("{compared} coefficients compared"),
    );

    let mut p_free_ok = true;
    let mut p_free_count = 0usize;
    for (key, val) in zbar.series.iter() {
        let id = VolumeId {
            g: (key.h + 1) as u32,
            n: key.mon.len() as u32,
            m: key.s,
        };
        if id.n == 0 || !id.is_stable() || table.get(&id).is_none() {
            continue;
        }
        if from_volumes.coeff(key).coeff(0) != *val {
            p_free_ok = false;
        }
        p_free_count += 1;
    }
    c.holds(
        "bare series is the pi-free part",
        "translation shifts carry pi^2 powers, so the bare coefficients \
         must equal the constant parts of the volume dictionary",
        p_free_ok && p_free_count >= 20,
        "equality on the shared window",
        format!("{p_free_count} coefficients compared"),
    );

    let mut roundtrip_ok = true;
    for (g, n, m) in [(1u32, 2u32, 0u32), (2, 1, 2), (0, 3, 2), (2, 3, 0)] {
        let v = table.require(&VolumeId { g, n, m })?;
        if volumes_from_tau(&from_volumes, g, n, m)? != v {
            roundtrip_ok = false;
        }
    }
    c.holds(
        "dictionary round trip",
        "volumes to correlators and back",
        roundtrip_ok,
        "identical polynomials",
        "4 volumes".into(),
    );

    let disk_caps = TCaps {
        t_max: 2,
        weight_max: 8,
        s_max: 2,
        h_min: -1,
        h_max: 0,
    };
    let zbar_disk = solve_constraints(Family::ZBar, disk_caps)?;
    let extended = extend_disk_sector(&zbar_disk.series, 6)?;
    let zd = translate_partition(&extended);
    let direct = disk_direct(6)?;
    for m in [2u32, 4, 6] {
        let v = volumes_from_tau(&zd, 0, 1, m)?;
        c.holds(
            &format!("translated disk at s^{m}"),
            "pi-bearing disk coefficients rebuilt from pi-free data by translation",
            Some(&v) == direct.get(m),
            &direct.get(m).map(|p| p.to_plain()).unwrap_or_default(),
            v.to_plain(),
        );
    }

    Ok(c.0)
}

fn suite_bridge() -> Result<Vec<Check>> {
    let mut c = Checks::new();
    let caps = TCaps {
        t_max: 3,
        weight_max: 9,
        s_max: 2,
        h_min: -1,
        h_max: 2,
    };
    let zbar = solve_constraints(Family::ZBar, caps)?;
    let zk = solve_constraints(Family::ZK, caps)?;

    let mut s0_ok = true;
    let mut s0_count = 0usize;
    for (key, val) in zbar.series.iter() {
        if key.s == 0 {
            if zk.series.coeff(key) != *val {
                s0_ok = false;
            }
            s0_count += 1;
        }
    }
    c.holds(
        "s^0 reduction",
        "both families satisfy the same constraints at s = 0",
        s0_ok,
        "coefficient-wise equality",
        format!("{s0_count} coefficients compared"),
    );

    let report = omk_bridge_check(&zbar.series, &zk.series)?;
    c.holds(
        "bridge on log-form coefficients",
        "s^2 slice rebuilt from the kappa-side series plus the lowering operator",
        report.mismatches.is_empty(),
        "no mismatches",
        format!("{} coefficients checked", report.coefficients_checked),
    );
    c.holds(
        "bridge on exponentiated series",
        "operator identity applied to the full partition functions",
        report.zform_mismatches.is_empty(),
        "no mismatches",
        format!("{} keys checked", report.zform_checked),
    );

    Ok(c.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_is_green() {
        for suite in SUITES {
            let report = run_suite(suite).unwrap();
            assert!(
                report.ok(),
                "suite {suite} failed:\n{}",
                report.render()
            );
            assert!(!report.checks.is_empty());
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nonsense").is_err());
    }

    #[test]
    fn report_serializes() {
        let report = run_suite("disk").unwrap();
        let json = report.to_json();
        assert_eq!(json["suite"], "disk");
        assert_eq!(json["ok"], true);
        assert!(json["checks"].as_array().unwrap().len() >= 10);
        assert_eq!(report.exit_status(), 0);
    }

    #[test]
    fn flagged_never_fails() {
        let mut checks = Checks::new();
        checks.flagged("demo", "known discrepancy", "a", "b".into());
        let report = VerifyReport {
            suite: "demo".into(),
            checks: checks.0,
        };
        assert!(report.ok());
        assert_eq!(report.exit_status(), 0);
    }
}
