//! Virasoro operators, constraint solvers, translation, and the dictionary
//! between correlator series and volume polynomials.
//!
//! Log-form series store `F = log Z = sum c(h, s, T) hbar^h s^s t_T`; the
//! `hbar` exponent `h` equals genus minus one. Two constraint families are
//! solved order-by-order:
//!
//! * `zbar`: `(2m+1)!! d/dt_m = L_m + (s^2/2 hbar) delta_{m,0}`, valid
//!   through `s^2`;
//! * `zk`: `(2m+1)!! d/dt_m = L_m + s^2 L_{m-1}`, valid at every s-order.
//!
//! Each coefficient with letters is fixed by the constraint for its largest
//! letter; letter-free coefficients follow by removing a `t_0` and dividing
//! by `2g - 2 + s`, with the `2g - 2 + s = 0` cases flagged as free
//! constants (set to zero, never invented).

use crate::error::{Error, Result};
use crate::pipoly::PiPoly;
use crate::rat::{binomial, double_factorial_odd, factorial, rat, rat_int, Rat};
use crate::tseries::{Coeff, TCaps, TKey, TMon, TSeries};
use crate::volpoly::VolPoly;
use crate::volumes::VolumeTable;
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

fn dfac(k: i64) -> Rat {
    double_factorial_odd(k)
}

fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// One application of
/// `L_m = (hbar/2) sum_{i+j=m-1} (2i+1)!!(2j+1)!! d_i d_j
///      + sum_j ((2(j+m)+1)!!/(2j-1)!!) t_j d_{j+m}
///      + hbar^{-1} delta_{m,-1} t_0^2/2 + delta_{m,0}/8`
/// to a series in Z-form. Results outside the caps are dropped.
pub fn virasoro_apply<C: Coeff>(m: i32, z: &TSeries<C>) -> TSeries<C> {
    assert!(m >= -1, "operators are defined for m >= -1");
    let mut out = TSeries::new(z.caps());
    for (key, c) in z.iter() {
        if m >= 1 {
            for i in 0..=(m - 1) as u8 {
                let j = (m - 1) as u8 - i;
                let Some(m1) = key.mon.without(i) else { continue };
                let Some(m2) = m1.without(j) else { continue };
                let w = dfac(i as i64) * dfac(j as i64) / int(2)
                    * int(key.mon.mult(i) as i64)
                    * int(m1.mult(j) as i64);
                out.insert_add(TKey::new(key.h + 1, key.s, m2), c.scale_rat(&w));
            }
        }
        for (k, mult) in key.mon.letter_mults() {
            let j = k as i32 - m;
            if j < 0 {
                continue;
            }
            let w = dfac(k as i64) / dfac(j as i64 - 1) * int(mult as i64);
            let mon = key.mon.without(k).expect("letter present").with(j as u8);
            out.insert_add(TKey::new(key.h, key.s, mon), c.scale_rat(&w));
        }
        if m == -1 {
            let mon = key.mon.with(0).with(0);
            out.insert_add(TKey::new(key.h - 1, key.s, mon), c.scale_rat(&rat(1, 2)));
        }
        if m == 0 {
            out.insert_add(key.clone(), c.scale_rat(&rat(1, 8)));
        }
    }
    out
}

/// Plain `d/dt_k` on a Z-form series.
pub fn t_derivative<C: Coeff>(k: u8, z: &TSeries<C>) -> TSeries<C> {
    let mut out = TSeries::new(z.caps());
    for (key, c) in z.iter() {
        if let Some(mon) = key.mon.without(k) {
            let w = int(key.mon.mult(k) as i64);
            out.insert_add(TKey::new(key.h, key.s, mon), c.scale_rat(&w));
        }
    }
    out
}

/// Verifies `[L_m, L_n] = 2(m-n) L_{m+n}` on every basis monomial within
/// `(t_max, weight_max)`, using caps wide enough that no intermediate
/// truncation can occur, so the comparison is exact.
pub fn commutator_check(m: i32, n: i32, t_max: u8, weight_max: u32) -> bool {
    assert!(m >= -1 && n >= -1 && m + n >= -1);
    let wide = TCaps {
        t_max: t_max + 2,
        weight_max: weight_max + 6,
        s_max: 0,
        h_min: -3,
        h_max: 3,
    };
    let basis = TCaps {
        t_max,
        weight_max,
        s_max: 0,
        h_min: 0,
        h_max: 0,
    };
    for mon in basis.all_monomials() {
        let mut b: TSeries<Rat> = TSeries::new(wide);
        b.insert_add(TKey::new(0, 0, mon), rat_int(1));
        let lhs = virasoro_apply(m, &virasoro_apply(n, &b))
            .sub(&virasoro_apply(n, &virasoro_apply(m, &b)));
        let rhs = virasoro_apply(m + n, &b).scale(&int(2 * (m - n) as i64));
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Constraint family selector.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    ZBar,
    ZK,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::ZBar => "zbar",
            Family::ZK => "zk",
        })
    }
}

/// Memoizing solver for the log-form coefficients of one family.
pub struct ConstraintSolver {
    family: Family,
    memo: BTreeMap<TKey, Rat>,
    in_progress: BTreeSet<TKey>,
    flagged: BTreeSet<TKey>,
}

impl ConstraintSolver {
    pub fn new(family: Family) -> Self {
        ConstraintSolver {
            family,
            memo: BTreeMap::new(),
            in_progress: BTreeSet::new(),
            flagged: BTreeSet::new(),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Coefficients that were not fixed by any constraint (set to zero).
    pub fn flagged(&self) -> impl Iterator<Item = &TKey> {
        self.flagged.iter()
    }

    /// The log-form coefficient `c(h, s, T)`.
    pub fn coeff(&mut self, h: i32, s: u32, mon: &TMon) -> Result<Rat> {
        if h < -1 || s % 2 == 1 {
            return Ok(rat_int(0));
        }
        if self.family == Family::ZBar && s > 2 {
            return Err(Error::InvalidRequest(
                "the bare constraints determine zbar only through s^2".into(),
            ));
        }
        let key = TKey::new(h, s, mon.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        if !self.in_progress.insert(key.clone()) {
            return Err(Error::Inconsistent(format!(
                "cyclic dependency while solving hbar^{h} s^{s} {mon}"
            )));
        }
        let val = if mon.is_empty() {
            // Letter-free coefficients: remove a t_0 via the dilaton-type
            // multiplier 2g - 2 + s with g = h + 1.
            let denom = 2 * h + s as i32;
            if denom == 0 {
                self.flagged.insert(key.clone());
                rat_int(0)
            } else {
                self.coeff(h, s, &TMon::new(vec![0]))? / int(denom as i64)
            }
        } else {
            let m = mon.max_index().expect("nonempty");
            let r = mon.without(m).expect("max letter present");
            let rhs = self.constraint_rhs(m as i32, h, s, &r)?;
            rhs / (dfac(m as i64) * int(mon.mult(m) as i64))
        };
        self.in_progress.remove(&key);
        self.memo.insert(key, val.clone());
        Ok(val)
    }

    /// Right side of constraint `m` extracted at `(h, s, R)`: the log-form
    /// action of `L_m` plus the family term.
    fn constraint_rhs(&mut self, m: i32, h: i32, s: u32, r: &TMon) -> Result<Rat> {
        let mut acc = self.lm_fform(m, h, s, r)?;
        match self.family {
            Family::ZBar => {
                if m == 0 && h == -1 && s == 2 && r.is_empty() {
                    acc += rat(1, 2);
                }
            }
            Family::ZK => {
                if s >= 2 {
                    acc += self.lm_fform(m - 1, h, s - 2, r)?;
                }
            }
        }
        Ok(acc)
    }

    /// `[L_m F]`-form coefficient at `(h, s, R)`: second derivatives split
    /// into a connected piece and products over all ways of distributing
    /// `(hbar, s, letters)` between two factors.
    fn lm_fform(&mut self, m: i32, h: i32, s: u32, r: &TMon) -> Result<Rat> {
        let mut acc = rat_int(0);
        if m >= 1 {
            for i in 0..=(m - 1) as u8 {
                let j = (m - 1) as u8 - i;
                let w = dfac(i as i64) * dfac(j as i64) / int(2);
                let u1 = r.with(i);
                let u = u1.with(j);
                let count = int((r.mult(i) + 1) as i64) * int((u1.mult(j) + 1) as i64);
                acc += &w * count * self.coeff(h - 1, s, &u)?;
                for (r1, r2) in r.splits() {
                    for s1 in (0..=s).step_by(2) {
                        let s2 = s - s1;
                        for h1 in -1..=h {
                            let h2 = h - 1 - h1;
                            if h2 < -1 {
                                continue;
                            }
                            let a = int((r1.mult(i) + 1) as i64)
                                * self.coeff(h1, s1, &r1.with(i))?;
                            if a.is_zero() {
                                continue;
                            }
                            let b = int((r2.mult(j) + 1) as i64)
                                * self.coeff(h2, s2, &r2.with(j))?;
                            acc += &w * a * b;
                        }
                    }
                }
            }
        }
        for (jj, _) in r.letter_mults() {
            let k = jj as i32 + m;
            if k < 0 {
                continue;
            }
            let k = k as u8;
            let rr = r.without(jj).expect("letter present");
            let w = dfac(k as i64) / dfac(jj as i64 - 1);
            acc += w * int((rr.mult(k) + 1) as i64) * self.coeff(h, s, &rr.with(k))?;
        }
        if m == 0 && h == 0 && s == 0 && r.is_empty() {
            acc += rat(1, 8);
        }
        if m == -1 && h == -1 && s == 0 && r.indices() == [0, 0] {
            acc += rat(1, 2);
        }
        Ok(acc)
    }
}

/// A solved family: the log-form series plus any flagged free constants.
#[derive(Clone, Debug)]
pub struct Solved {
    pub family: Family,
    pub series: TSeries<Rat>,
    pub flagged: Vec<TKey>,
}

/// Solves every coefficient inside `caps` for the given family.
pub fn solve_constraints(family: Family, caps: TCaps) -> Result<Solved> {
    if family == Family::ZBar && caps.s_max > 2 {
        return Err(Error::InvalidRequest(
            "the bare constraints determine zbar only through s^2".into(),
        ));
    }
    let mut solver = ConstraintSolver::new(family);
    let mut series = TSeries::new(caps);
    for mon in caps.all_monomials() {
        for s in (0..=caps.s_max).step_by(2) {
            for h in caps.h_min.max(-1)..=caps.h_max {
                let v = solver.coeff(h, s, &mon)?;
                series.insert_add(TKey::new(h, s, mon.clone()), v);
            }
        }
    }
    Ok(Solved {
        family,
        series,
        flagged: solver.flagged.into_iter().collect(),
    })
}

/// The shift `sigma_k = (-1)^{k+1} (2p)^k / k!` (zero at `k = 0`).
fn sigma(k: u8) -> PiPoly {
    if k == 0 {
        return PiPoly::zero();
    }
    let sign = if k % 2 == 1 { 1 } else { -1 };
    let c = int(sign) * Rat::from_integer(BigInt::from(2).pow(k as u32))
        / Rat::from_integer(factorial(k as u64));
    PiPoly::term(c, k as usize)
}

/// Substitutes `t_k -> t_k + sigma_k` into a log-form series, landing in
/// coefficients over `Q[p]`. Sources only lose letters, so no truncation
/// overflow is possible.
pub fn translate_partition(f: &TSeries<Rat>) -> TSeries<PiPoly> {
    let mut out: TSeries<PiPoly> = TSeries::new(f.caps());
    for (key, c) in f.iter() {
        for (keep, removed) in key.mon.splits() {
            if removed.mult(0) > 0 {
                continue;
            }
            let mut w = PiPoly::from_rat(c.clone());
            for (k, mult_u) in key.mon.letter_mults() {
                let chosen = keep.mult(k);
                if chosen < mult_u {
                    w = w.scale(&Rat::from_integer(binomial(mult_u as u64, chosen as u64)));
                }
            }
            for &k in removed.indices() {
                w = &w * &sigma(k);
            }
            out.insert_add(TKey::new(key.h, key.s, keep), w);
        }
    }
    out
}

/// Extends a solved zbar series beyond `s^2` on the genus-zero row
/// `hbar^{-1}` using the recursion; the constraints alone do not reach
/// those orders. Only the p-free parts enter (the bare series carries no
/// `p`): translation is what restores the `p`-bearing terms.
pub fn extend_disk_sector(f: &TSeries<Rat>, s_max: u32) -> Result<TSeries<Rat>> {
    let mut caps = f.caps();
    caps.s_max = caps.s_max.max(s_max);
    if s_max >= 4 {
        caps.t_max = caps.t_max.max((s_max / 2 - 1) as u8);
        caps.weight_max = caps.weight_max.max(s_max - 2 + s_max / 2);
    }
    let mut out = f.truncated(caps);
    if s_max >= 4 {
        let table = crate::volumes::solve_volumes(0, s_max / 2, s_max, true)?.table;
        let genus_zero = tau_from_volumes(&table, caps);
        for (key, c) in genus_zero.iter() {
            if key.h == -1 && key.s >= 4 {
                out.insert_add(key.clone(), c.coeff(0));
            }
        }
    }
    Ok(out)
}

/// Packs a volume table into log-form coefficients: the `(g, n, m)` entry
/// contributes at `hbar^{g-1} s^m` with `c = substitute_t(V)(T)/(m! n!)`.
pub fn tau_from_volumes(table: &VolumeTable, caps: TCaps) -> TSeries<PiPoly> {
    let mut out = TSeries::new(caps);
    for (id, entry) in table.iter() {
        let scale = (Rat::from_integer(factorial(id.m as u64))
            * Rat::from_integer(factorial(id.n as u64)))
        .recip();
        for (mon, val) in entry.poly.substitute_t() {
            out.insert_add(
                TKey::new(id.g as i32 - 1, id.m, mon),
                val.scale(&scale),
            );
        }
    }
    out
}

/// Inverse direction: reassembles the volume for `(g, n, m)` from the
/// letter-count-`n` slice at `hbar^{g-1} s^m`.
pub fn volumes_from_tau(z: &TSeries<PiPoly>, g: u32, n: u32, m: u32) -> Result<VolPoly> {
    let scale =
        Rat::from_integer(factorial(m as u64)) * Rat::from_integer(factorial(n as u64));
    let mut map = BTreeMap::new();
    for (key, c) in z.iter() {
        if key.h == g as i32 - 1 && key.s == m && key.mon.len() == n as usize {
            map.insert(key.mon.clone(), c.scale(&scale));
        }
    }
    VolPoly::from_t_map(n as usize, &map)
}

/// Outcome of the order-`s^2` comparison
/// `Zbar = exp{(s^2/2)(L_{-1} + hbar^{-1} t_0)} ZK + O(s^4)`,
/// checked both coefficient-wise on log-form series and operationally on
/// exponentiated Z-forms.
#[derive(Clone, Debug)]
pub struct BridgeReport {
    pub coefficients_checked: usize,
    pub mismatches: Vec<String>,
    pub zform_checked: usize,
    pub zform_mismatches: Vec<String>,
}

impl BridgeReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.zform_mismatches.is_empty()
    }
}

// Exponentiation mixes factors whose hbar-exponents sum through values
// outside the final window: products of positive-h factors reach at most
// (weight_max - 1)/2 (no factor beats h = (weight - 1)/2), products of
// genus-zero factors reach down to -weight_max. Widening to that range
// makes every intermediate exact.
fn widened_for_exp(caps: TCaps) -> TCaps {
    TCaps {
        h_min: -(caps.weight_max as i32) - 1,
        h_max: caps.h_max.max(caps.weight_max as i32 / 2 + 1),
        ..caps
    }
}

/// Multiplies a Z-form series by `(s^2/2) hbar^{-1} t_0`.
fn half_s2_hinv_t0<C: Coeff>(z: &TSeries<C>) -> TSeries<C> {
    let mut out = TSeries::new(z.caps());
    for (key, c) in z.iter() {
        out.insert_add(
            TKey::new(key.h - 1, key.s + 2, key.mon.with(0)),
            c.scale_rat(&rat(1, 2)),
        );
    }
    out
}

/// Multiplies a Z-form series by `(s^2/2) hbar^{-1}`.
fn half_s2_hinv<C: Coeff>(z: &TSeries<C>) -> TSeries<C> {
    let mut out = TSeries::new(z.caps());
    for (key, c) in z.iter() {
        out.insert_add(
            TKey::new(key.h - 1, key.s + 2, key.mon.clone()),
            c.scale_rat(&rat(1, 2)),
        );
    }
    out
}

/// Shifts a Z-form series by `s^2`, scaling by one half.
fn half_s2<C: Coeff>(z: &TSeries<C>) -> TSeries<C> {
    let mut out = TSeries::new(z.caps());
    for (key, c) in z.iter() {
        out.insert_add(
            TKey::new(key.h, key.s + 2, key.mon.clone()),
            c.scale_rat(&rat(1, 2)),
        );
    }
    out
}

pub fn omk_bridge_check(zbar: &TSeries<Rat>, zk: &TSeries<Rat>) -> Result<BridgeReport> {
    let caps = zbar.caps();
    let mut report = BridgeReport {
        coefficients_checked: 0,
        mismatches: Vec::new(),
        zform_checked: 0,
        zform_mismatches: Vec::new(),
    };
    // Log-form comparison: s^0 slices agree; the s^2 slice of zbar equals
    // the s^2 slice of zk plus half the L_{-1}-action of the s^0 slice plus
    // the two unstable genus-zero terms.
    for mon in caps.all_monomials() {
        for h in caps.h_min.max(-1)..=caps.h_max {
            let k0 = TKey::new(h, 0, mon.clone());
            report.coefficients_checked += 1;
            if zbar.coeff(&k0) != zk.coeff(&k0) {
                report.mismatches.push(format!(
                    "s^0 hbar^{h} {mon}: {} vs {}",
                    zbar.coeff(&k0).render(),
                    zk.coeff(&k0).render()
                ));
            }
            if caps.s_max < 2 {
                continue;
            }
            let k2 = TKey::new(h, 2, mon.clone());
            let mut rhs = zk.coeff(&k2);
            for (j, _) in mon.letter_mults() {
                if j == 0 {
                    continue;
                }
                let src = mon.without(j).expect("letter present");
                rhs += rat(1, 2)
                    * int((src.mult(j - 1) + 1) as i64)
                    * zk.coeff(&TKey::new(h, 0, src.with(j - 1)));
            }
            if h == -1 && mon.indices() == [0] {
                rhs += rat(1, 2);
            }
            if h == -1 && mon.indices() == [0, 0] {
                rhs += rat(1, 4);
            }
            report.coefficients_checked += 1;
            if zbar.coeff(&k2) != rhs {
                report.mismatches.push(format!(
                    "s^2 hbar^{h} {mon}: {} vs {}",
                    zbar.coeff(&k2).render(),
                    rhs.render()
                ));
            }
        }
    }
    // Z-form comparison inside a window safe from truncation effects.
    let wide = widened_for_exp(caps);
    let zb = zbar.exp(wide)?;
    let zkz = zk.exp(wide)?;
    let rhs = zkz
        .add(&half_s2(&virasoro_apply(-1, &zkz)))
        .add(&half_s2_hinv_t0(&zkz));
    let diff = zb.sub(&rhs);
    for (key, c) in diff.iter() {
        if key.s > 2
            || key.h < caps.h_min
            || key.h > caps.h_max - 1
            || key.mon.weight() + 2 > caps.weight_max
            || key.mon.max_index().map_or(false, |k| k + 1 > caps.t_max)
        {
            continue;
        }
        if !c.is_zero() {
            report
                .zform_mismatches
                .push(format!("Z-form residual at s^{} hbar^{} {}", key.s, key.h, key.mon));
        }
    }
    report.zform_checked = zb
        .iter()
        .filter(|(k, _)| k.s <= 2 && k.h >= caps.h_min && k.h <= caps.h_max - 1)
        .count();
    Ok(report)
}

/// Applies the zbar constraint operator for index `m` to the exponentiated
/// series and returns the residual restricted to the window where every
/// contributing source is inside the caps; the result must vanish at
/// s-orders 0 and 2.
pub fn virconj_residual(zbar: &TSeries<Rat>, m: u32) -> Result<TSeries<Rat>> {
    let caps = zbar.caps();
    assert!(
        m as u8 <= caps.t_max,
        "derivative index must lie inside the t-caps"
    );
    let wide = widened_for_exp(caps);
    let z = zbar.exp(wide)?;
    let lhs = t_derivative(m as u8, &z).scale(&dfac(m as i64));
    let mut rhs = virasoro_apply(m as i32, &z);
    if m == 0 {
        rhs = rhs.add(&half_s2_hinv(&z));
    }
    let raw = lhs.sub(&rhs);
    let safe = TCaps {
        t_max: caps.t_max,
        weight_max: caps.weight_max.saturating_sub(2 * m + 1),
        s_max: caps.s_max.min(2),
        h_min: caps.h_min,
        h_max: caps.h_max - 1,
    };
    Ok(raw.truncated(safe))
}
