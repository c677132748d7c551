//! Polynomials in the transcendental marker `p`, which stands for `pi^2`.
//!
//! Volume coefficients live in the ring `Q[p]`; keeping `p` symbolic is what
//! makes every computation exact. Numeric evaluation substitutes
//! `p = pi^2` in `f64` only at the edges (quadrature checks, displays).

use crate::rat::{rat_to_latex, rat_to_string, Rat};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Element of `Q[p]`, stored densely: `coeffs[k]` multiplies `p^k`.
/// Trailing zeros are trimmed, so `is_zero` means an empty vector.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PiPoly {
    coeffs: Vec<Rat>,
}

impl PiPoly {
    pub fn zero() -> Self {
        PiPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PiPoly::from_rat(Rat::one())
    }

    /// The constant polynomial `r`.
    pub fn from_rat(r: Rat) -> Self {
        let mut p = PiPoly { coeffs: vec![r] };
        p.trim();
        p
    }

    /// The monomial `c * p^k`.
    pub fn term(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return PiPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        PiPoly { coeffs }
    }

    /// `p^k`.
    pub fn p_pow(k: usize) -> Self {
        PiPoly::term(Rat::one(), k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `p`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `p^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// The `p^0` part, i.e. the value at `p = 0`.
    pub fn p0_part(&self) -> Rat {
        self.coeff(0)
    }

    /// True when every term has `p`-exponent at least one.
    pub fn vanishes_at_p0(&self) -> bool {
        self.p0_part().is_zero()
    }

    /// Iterates `(k, coeff)` over nonzero terms, ascending `k`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return PiPoly::zero();
        }
        PiPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `p^k`.
    pub fn mul_p_pow(&self, k: usize) -> Self {
        if self.is_zero() {
            return PiPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PiPoly { coeffs }
    }

    /// Exact division by a rational scalar.
    pub fn div_rat(&self, c: &Rat) -> Self {
        assert!(!c.is_zero(), "division of PiPoly by zero scalar");
        PiPoly {
            coeffs: self.coeffs.iter().map(|a| a / c).collect(),
        }
    }

    /// Evaluates at a numeric value of `p` (normally `pi^2`).
    pub fn eval_f64(&self, p: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            let cf = to_f64(c);
            acc = acc * p + cf;
        }
        acc
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Plain-text rendering with descending powers, e.g. `2*p^2 + 1/2`.
    pub fn to_plain(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.iter().collect::<Vec<_>>().into_iter().rev() {
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let coeff_str = rat_to_string(&mag);
            match k {
                0 => out.push_str(&coeff_str),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&coeff_str);
                        out.push('*');
                    }
                    out.push('p');
                    if k > 1 {
                        out.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        out
    }

    /// LaTeX rendering with `p^k` shown as `\pi^{2k}`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.iter().collect::<Vec<_>>().into_iter().rev() {
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push('-');
            } else {
                out.push('+');
            }
            let coeff_str = rat_to_latex(&mag);
            match k {
                0 => out.push_str(&coeff_str),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&coeff_str);
                    }
                    if 2 * k < 10 {
                        out.push_str(&format!("\\pi^{}", 2 * k));
                    } else {
                        out.push_str(&format!("\\pi^{{{}}}", 2 * k));
                    }
                }
            }
        }
        out
    }
}

/// Lossy conversion used only for numeric evaluation at the boundaries.
pub fn to_f64(r: &Rat) -> f64 {
    // Convert through i128 when possible to avoid f64 overflow on huge
    // intermediate integers; otherwise fall back on digit strings.
    let n = r.numer();
    let d = r.denom();
    let nf = i128::try_from(n).map(|v| v as f64).unwrap_or_else(|_| {
        n.to_string().parse::<f64>().unwrap_or(f64::INFINITY)
    });
    let df = i128::try_from(d).map(|v| v as f64).unwrap_or_else(|_| {
        d.to_string().parse::<f64>().unwrap_or(f64::INFINITY)
    });
    nf / df
}

impl Add for &PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: &PiPoly) -> PiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        let mut out = PiPoly { coeffs };
        out.trim();
        out
    }
}

impl Sub for &PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: &PiPoly) -> PiPoly {
        self + &(-rhs)
    }
}

impl Neg for &PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        PiPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: &PiPoly) -> PiPoly {
        if self.is_zero() || rhs.is_zero() {
            return PiPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        let mut out = PiPoly { coeffs };
        out.trim();
        out
    }
}

impl Add for PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: PiPoly) -> PiPoly {
        &self + &rhs
    }
}

impl Sub for PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: PiPoly) -> PiPoly {
        &self - &rhs
    }
}

impl Mul for PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: PiPoly) -> PiPoly {
        &self * &rhs
    }
}

impl Neg for PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        -&self
    }
}

impl AddAssign<&PiPoly> for PiPoly {
    fn add_assign(&mut self, rhs: &PiPoly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&PiPoly> for PiPoly {
    fn sub_assign(&mut self, rhs: &PiPoly) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&PiPoly> for PiPoly {
    fn mul_assign(&mut self, rhs: &PiPoly) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}
