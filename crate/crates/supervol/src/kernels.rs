//! The recursion kernels `D` and `R`: numeric evaluation, the secant series
//! coefficients, and exact closed-form moment integrals against odd
//! monomials.
//!
//! `D(x,y,z) = (1/4pi)(sech((x-y-z)/4) - sech((x+y+z)/4))` drives
//! pair-of-pants splittings; `R(x,y,z) = (D(x+y,z,0)+D(x-y,z,0))/2` drives
//! boundary pairings. Every moment of either kernel against an odd monomial
//! is an odd polynomial in the first length, so moments are represented as
//! `L_1` times a polynomial in the squared lengths.

use crate::error::{Error, Result};
use crate::pipoly::PiPoly;
use crate::rat::{binomial, factorial, Rat};
use crate::volpoly::VolPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// Coefficients `a_0..a_N` of `1/cos(2 pi x) = sum_n a_n x^{2n}`,
/// with `a_n = |E_{2n}| (4p)^n / (2n)!` in terms of Euler numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct SecCoeffs {
    a: Vec<PiPoly>,
}

/// Computes the secant coefficients by exact series inversion of the
/// `cos(2 pi x)` Taylor series, so no Euler number is ever hard-coded.
pub fn sec_coeffs(n_max: u32) -> SecCoeffs {
    let n_max = n_max as usize;
    // cos(2 pi x) = sum_n (-1)^n (4p)^n x^{2n} / (2n)!.
    let cos: Vec<PiPoly> = (0..=n_max)
        .map(|n| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let c = Rat::from_integer(BigInt::from(sign) * BigInt::from(4).pow(n as u32))
                / Rat::from_integer(factorial(2 * n as u64));
            PiPoly::term(c, n)
        })
        .collect();
    let mut a: Vec<PiPoly> = Vec::with_capacity(n_max + 1);
    a.push(PiPoly::one());
    for n in 1..=n_max {
        let mut acc = PiPoly::zero();
        for k in 1..=n {
            acc += &(&cos[k] * &a[n - k]);
        }
        a.push(-&acc);
    }
    SecCoeffs { a }
}

impl SecCoeffs {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn coeff(&self, n: usize) -> &PiPoly {
        &self.a[n]
    }

    /// Verifies `(sum a_n x^{2n}) * cos(2 pi x) = 1` through the truncation.
    pub fn product_with_cos_is_one(&self) -> bool {
        let n_max = self.a.len() - 1;
        for n in 0..=n_max {
            let mut acc = PiPoly::zero();
            for k in 0..=n {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let c = Rat::from_integer(BigInt::from(sign) * BigInt::from(4).pow(k as u32))
                    / Rat::from_integer(factorial(2 * k as u64));
                acc += &self.a[n - k].scale(&c).mul_p_pow(k);
            }
            let want = if n == 0 { PiPoly::one() } else { PiPoly::zero() };
            if acc != want {
                return false;
            }
        }
        true
    }

    /// `|E_{2n}|` recovered from `a_n = |E_{2n}| (4p)^n/(2n)!`; panics if the
    /// inversion did not produce an integer (which would be a series bug).
    pub fn euler_abs(&self, n: usize) -> BigInt {
        let r = self.a[n].coeff(n) * Rat::from_integer(factorial(2 * n as u64))
            / Rat::from_integer(BigInt::from(4).pow(n as u32));
        assert!(r.denom().is_one(), "Euler number extraction must be integral");
        assert!(!r.is_negative(), "secant coefficients are nonnegative");
        r.numer().clone()
    }
}

/// `|E_{2n}|` (absolute Euler numbers 1, 1, 5, 61, 1385, ...).
pub fn euler_abs(n: u32) -> BigInt {
    sec_coeffs(n).euler_abs(n as usize)
}

fn sech(t: f64) -> f64 {
    1.0 / t.cosh()
}

/// Numeric kernel `D(x,y,z) = (1/4pi)(sech((x-y-z)/4) - sech((x+y+z)/4))`.
pub fn eval_d(x: f64, y: f64, z: f64) -> f64 {
    (sech((x - y - z) / 4.0) - sech((x + y + z) / 4.0)) / (4.0 * std::f64::consts::PI)
}

/// Numeric kernel `R(x,y,z) = (D(x+y,z,0) + D(x-y,z,0)) / 2`.
pub fn eval_r(x: f64, y: f64, z: f64) -> f64 {
    0.5 * (eval_d(x + y, z, 0.0) + eval_d(x - y, z, 0.0))
}

/// An odd moment polynomial: `L_1` times a polynomial in squared lengths.
/// The odd prefactor makes divisibility by `L_1` structural.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentPoly {
    quotient: VolPoly,
}

impl MomentPoly {
    pub fn new(quotient: VolPoly) -> Self {
        MomentPoly { quotient }
    }

    /// The polynomial `q` with moment `= L_1 * q(l_1, ..., l_n)`.
    pub fn quotient(&self) -> &VolPoly {
        &self.quotient
    }

    pub fn into_quotient(self) -> VolPoly {
        self.quotient
    }

    pub fn n(&self) -> usize {
        self.quotient.n()
    }

    /// Numeric value at lengths `big_l` (not squared) and numeric `p`.
    pub fn eval_f64(&self, big_l: &[f64], p: f64) -> f64 {
        let ells: Vec<f64> = big_l.iter().map(|x| x * x).collect();
        big_l[0] * self.quotient.eval_f64(&ells, p)
    }
}

/// The odd moment `int_0^infty x^{2k+1} D(u, x, 0) dx` as `u` times a
/// polynomial in `u^2`: `S_k(u) = sum_j C(2k+1, 2j) |E_{2j}| (4p)^j
/// u^{2(k-j)+1}`, e.g. `S_0 = u`, `S_1 = u^3 + 12 p u`.
#[derive(Clone, Debug, PartialEq)]
pub struct SechMomentPoly {
    k: u32,
    moment: MomentPoly,
}

pub fn sech_moment_poly(k: u32) -> SechMomentPoly {
    let sec = sec_coeffs(k);
    let mut q = VolPoly::zero(1);
    for j in 0..=k {
        let c = Rat::from_integer(binomial(2 * k as u64 + 1, 2 * j as u64))
            * Rat::from_integer(sec.euler_abs(j as usize))
            * Rat::from_integer(BigInt::from(4).pow(j));
        q.insert_add(vec![k - j], PiPoly::term(c, j as usize));
    }
    SechMomentPoly {
        k,
        moment: MomentPoly::new(q),
    }
}

impl SechMomentPoly {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn moment(&self) -> &MomentPoly {
        &self.moment
    }

    pub fn quotient(&self) -> &VolPoly {
        self.moment.quotient()
    }
}

/// Exact double moment `int int x^{2i+1} y^{2j+1} D(L, x, y) dx dy`
/// `= B * S_{i+j+1}(L)` with `B = (2i+1)!(2j+1)!/(2i+2j+3)!`;
/// symmetric in `(i, j)`. One variable `l_1 = L^2`.
pub fn d_double_moment(i: u32, j: u32) -> MomentPoly {
    let beta = Rat::from_integer(factorial(2 * i as u64 + 1))
        * Rat::from_integer(factorial(2 * j as u64 + 1))
        / Rat::from_integer(factorial(2 * (i + j) as u64 + 3));
    let s = sech_moment_poly(i + j + 1);
    MomentPoly::new(s.quotient().scale(&beta))
}

/// Exact single moment `int_0^infty x^{2k+1} R(L_1, L_j, x) dx`
/// `= (S_k(L_1+L_j) + S_k(L_1-L_j)) / 2`, expanded in two variables
/// `l_1 = L_1^2`, `l_2 = L_j^2`; odd in `L_1`, even in `L_j`.
pub fn r_moment(k: u32) -> MomentPoly {
    let s = sech_moment_poly(k);
    let mut q = VolPoly::zero(2);
    // S_k(u) = sum_t c_t u^{2t+1}; the symmetrized binomial expansion keeps
    // exactly the terms odd in L_1 and even in L_j:
    // (1/2)[(a+b)^{2t+1} + (a-b)^{2t+1}] = sum_{beta} C(2t+1, 2beta) a^{2(t-beta)+1} b^{2beta}.
    for (exps, c) in s.quotient().iter() {
        let t = exps[0];
        for beta in 0..=t {
            let w = Rat::from_integer(binomial(2 * t as u64 + 1, 2 * beta as u64));
            q.insert_add(vec![t - beta, beta], c.scale(&w));
        }
    }
    MomentPoly::new(q)
}

/// Emits a moment as canonical JSON: the quotient polynomial plus a marker
/// naming the odd prefactor variable.
pub fn moment_to_json(m: &MomentPoly) -> serde_json::Value {
    serde_json::json!({
        "odd_prefactor": "L_1",
        "quotient": m.quotient().to_json(),
    })
}

/// Requests the closed-form moment for the CLI: kernel "D" wants both
/// indices, kernel "R" wants one.
pub fn closed_form_moment(kernel: &str, i: u32, j: Option<u32>) -> Result<MomentPoly> {
    match (kernel, j) {
        ("D", Some(j)) => Ok(d_double_moment(i, j)),
        ("D", None) => Err(Error::InvalidRequest(
            "kernel D takes two moment indices: pass --j".into(),
        )),
        ("R", None) => Ok(r_moment(i)),
        ("R", Some(_)) => Err(Error::InvalidRequest(
            "kernel R takes a single moment index: drop --j".into(),
        )),
        (other, _) => Err(Error::InvalidRequest(format!(
            "unknown kernel {other:?}: expected D or R"
        ))),
    }
}
