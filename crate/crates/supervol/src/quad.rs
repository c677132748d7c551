//! Numeric quadrature oracle for the kernel moments: adaptive Simpson
//! integration of the improper moment integrals, used to validate the exact
//! closed forms. The integrands decay like `sech(x/4)`, so truncating at
//! `T = u + margin` with a margin that also absorbs the polynomial growth
//! keeps the tail far below the requested accuracy.

use crate::error::{Error, Result};
use crate::kernels::{eval_d, eval_r};

/// Which moment integral to evaluate numerically.
#[derive(Clone, Copy, Debug)]
pub enum MomentKind {
    /// `int int x^{2i+1} y^{2j+1} D(l, x, y) dx dy`.
    DDouble { i: u32, j: u32, l: f64 },
    /// `int x^{2k+1} R(l1, lj, x) dx`.
    RSingle { k: u32, l1: f64, lj: f64 },
    /// `int x^{2k+1} D(u, x, 0) dx`.
    DSingle { k: u32, u: f64 },
}

/// Truncation point: beyond `u`, the kernels decay like `exp(-(x-u)/4)`;
/// the margin dominates the `x^power` growth with room to spare, keeping the
/// tail under 1e-16 relative to the integral for every in-scope power.
fn truncation(u: f64, power: u32) -> f64 {
    u.abs() + 160.0 + 12.0 * power as f64
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

struct Adaptive<'f> {
    f: &'f dyn Fn(f64) -> f64,
    eps: f64,
    max_depth: u32,
    stalled: bool,
}

impl Adaptive<'_> {
    fn run(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> Result<f64> {
        let mut ctx = Adaptive {
            f,
            eps,
            max_depth: 48,
            stalled: false,
        };
        // Seed with a fixed coarse grid so narrow features near the ends of
        // a long domain cannot be missed by the first bisections.
        let panels = 64usize;
        let h = (b - a) / panels as f64;
        let mut total = 0.0;
        for k in 0..panels {
            let x0 = a + k as f64 * h;
            let x1 = x0 + h;
            let xm = 0.5 * (x0 + x1);
            let (f0, fm, f1) = ((ctx.f)(x0), (ctx.f)(xm), (ctx.f)(x1));
            let whole = simpson(f0, fm, f1, x1 - x0);
            total += ctx.refine(x0, x1, f0, fm, f1, whole, ctx.eps / panels as f64, 0);
        }
        if ctx.stalled {
            Err(Error::Numeric(
                "adaptive quadrature refinement stalled before reaching tolerance".into(),
            ))
        } else {
            Ok(total)
        }
    }

    fn refine(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * eps || (b - a).abs() < 1e-13 {
            return left + right + delta / 15.0;
        }
        if depth >= self.max_depth {
            self.stalled = true;
            return left + right;
        }
        self.refine(a, m, fa, flm, fm, left, eps / 2.0, depth + 1)
            + self.refine(m, b, fm, frm, fb, right, eps / 2.0, depth + 1)
    }
}

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute
/// tolerance `eps`; errors out if refinement stalls.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> Result<f64> {
    Adaptive::run(f, a, b, eps)
}

fn scaled_eps(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    // Coarse magnitude estimate to convert the relative target into the
    // absolute tolerance the refinement works with. The tolerance must stay
    // strictly relative: inner slices of the double moments can be orders of
    // magnitude smaller than 1, yet their relative accuracy is what survives
    // the outer weighting.
    let panels = 128;
    let h = (b - a) / panels as f64;
    let mut acc = 0.0f64;
    for k in 0..=panels {
        let w = if k == 0 || k == panels { 0.5 } else { 1.0 };
        acc += w * f(a + k as f64 * h).abs();
    }
    1e-11 * (acc * h).max(1e-30)
}

/// Numeric value of the requested kernel moment integral, accurate to a
/// relative error around 1e-12 for all in-scope indices.
pub fn quadrature_oracle(kind: MomentKind) -> Result<f64> {
    match kind {
        MomentKind::DSingle { k, u } => {
            let power = 2 * k + 1;
            let t = truncation(u, power);
            let f = move |x: f64| x.powi(power as i32) * eval_d(u, x, 0.0);
            let eps = scaled_eps(&f, 0.0, t);
            integrate(&f, 0.0, t, eps)
        }
        MomentKind::RSingle { k, l1, lj } => {
            let power = 2 * k + 1;
            let t = truncation(l1.abs() + lj.abs(), power);
            let f = move |x: f64| x.powi(power as i32) * eval_r(l1, lj, x);
            let eps = scaled_eps(&f, 0.0, t);
            integrate(&f, 0.0, t, eps)
        }
        MomentKind::DDouble { i, j, l } => {
            // D(l, x, y) depends on x, y only through u = x + y, so the
            // double moment collapses exactly by the convolution identity
            // int_0^u x^a (u-x)^b dx = a! b! / (a+b+1)! * u^(a+b+1)
            // to a Beta multiple of a single moment in u.
            let a = 2 * i + 1;
            let b = 2 * j + 1;
            let power = a + b + 1;
            let mut binom = 1.0f64;
            for t in 1..=a {
                binom *= (b + t) as f64 / t as f64;
            }
            let beta = 1.0 / (binom * power as f64);
            let t = truncation(l, power);
            let f = move |u: f64| u.powi(power as i32) * eval_d(l, u, 0.0);
            let eps = scaled_eps(&f, 0.0, t);
            Ok(beta * integrate(&f, 0.0, t, eps)?)
        }
    }
}

/// Direct nested 2-d quadrature of `int int x^{2i+1} y^{2j+1} D(l, x, y)`,
/// kept alongside the convolved oracle to validate the reduction end to end.
/// Much slower than `quadrature_oracle`, so callers should restrict it to a
/// few index pairs.
pub fn d_double_direct(i: u32, j: u32, l: f64) -> Result<f64> {
    let px = 2 * i + 1;
    let py = 2 * j + 1;
    let ty = truncation(l, px + py + 1);
    let inner = move |y: f64| -> f64 {
        let tx = truncation(l + y, px);
        let fx = move |x: f64| x.powi(px as i32) * eval_d(l, x, y);
        let eps = scaled_eps(&fx, 0.0, tx);
        integrate(&fx, 0.0, tx, eps).unwrap_or(f64::NAN)
    };
    let f = move |y: f64| y.powi(py as i32) * inner(y);
    let eps = scaled_eps(&f, 0.0, ty);
    let v = integrate(&f, 0.0, ty, eps)?;
    if v.is_nan() {
        return Err(Error::Numeric("inner quadrature failed".into()));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{d_double_moment, r_moment, sech_moment_poly};

    const PI2: f64 = std::f64::consts::PI * std::f64::consts::PI;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-30)
    }

    #[test]
    fn single_moments_match_closed_form() {
        for k in 0..=3u32 {
            let s = sech_moment_poly(k);
            for u in [0.5, 1.0, 2.0] {
                let numeric = quadrature_oracle(MomentKind::DSingle { k, u }).unwrap();
                let exact = s.moment().eval_f64(&[u], PI2);
                assert!(
                    rel_err(numeric, exact) < 1e-8,
                    "single moment k={k} u={u}: {numeric} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn r_first_moment_is_first_length() {
        // int x R(L1, Lj, x) dx = L1 independently of Lj.
        let v = quadrature_oracle(MomentKind::RSingle {
            k: 0,
            l1: 2.0,
            lj: 1.0,
        })
        .unwrap();
        assert!(rel_err(v, 2.0) < 1e-9, "got {v}");
    }

    #[test]
    fn double_moment_spot_checks() {
        // (0,0) at L=1: 1/6 + 2 pi^2.
        let v = quadrature_oracle(MomentKind::DDouble {
            i: 0,
            j: 0,
            l: 1.0,
        })
        .unwrap();
        let exact = 1.0 / 6.0 + 2.0 * PI2;
        assert!(rel_err(v, exact) < 1e-8, "got {v} want {exact}");
        // Odd in L: the moment vanishes at L=0.
        let z = quadrature_oracle(MomentKind::DDouble {
            i: 0,
            j: 0,
            l: 0.0,
        })
        .unwrap();
        assert!(z.abs() < 1e-9, "got {z}");
        // (1,0) against the closed form at L=2.
        let v10 = quadrature_oracle(MomentKind::DDouble {
            i: 1,
            j: 0,
            l: 2.0,
        })
        .unwrap();
        let exact10 = d_double_moment(1, 0).eval_f64(&[2.0], PI2);
        assert!(rel_err(v10, exact10) < 1e-8, "got {v10} want {exact10}");
    }

    #[test]
    fn direct_double_quadrature_matches_convolved_form() {
        for (i, j, l) in [(0, 0, 1.0), (1, 0, 2.0), (0, 2, 0.7)] {
            let direct = d_double_direct(i, j, l).unwrap();
            let reduced = quadrature_oracle(MomentKind::DDouble { i, j, l }).unwrap();
            assert!(
                rel_err(direct, reduced) < 1e-9,
                "({i},{j}) l={l}: direct {direct} vs reduced {reduced}"
            );
        }
    }

    #[test]
    fn r_moment_matches_closed_form() {
        for k in [1u32, 2] {
            let m = r_moment(k);
            for (l1, lj) in [(1.0, 1.0), (2.0, 1.0), (1.0, 3.0)] {
                let numeric =
                    quadrature_oracle(MomentKind::RSingle { k, l1, lj }).unwrap();
                let exact = m.eval_f64(&[l1, lj], PI2);
                assert!(
                    rel_err(numeric, exact) < 1e-8,
                    "R moment k={k} at ({l1},{lj}): {numeric} vs {exact}"
                );
            }
        }
    }
}
