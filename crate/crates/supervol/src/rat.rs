//! Arbitrary-precision rational scalars and the combinatorial integers
//! (factorials, double factorials, binomials) used throughout the crate.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar. Every coefficient in the crate bottoms out here.
pub type Rat = num_rational::BigRational;

/// `n/d` as a [`Rat`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Rat`].
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Odd double factorial `(2k+1)!! = 1*3*5*...*(2k+1)` with the standard
/// empty-product conventions `(-1)!! = 1` and `(-3)!! = -1`.
///
/// Arguments below `k = -2` are rejected: the analytic continuation is not
/// needed anywhere and silently extending it would hide index bugs.
pub fn double_factorial_odd(k: i64) -> Rat {
    match k {
        -2 => -Rat::one(),
        -1 => Rat::one(),
        k if k >= 0 => {
            let mut acc = BigInt::one();
            let mut j = 1i64;
            while j <= 2 * k + 1 {
                acc *= j;
                j += 2;
            }
            Rat::from_integer(acc)
        }
        _ => panic!("double_factorial_odd: index {k} below supported range"),
    }
}

/// Binomial coefficient `C(n, k)` as a big integer (`0` when `k > n`).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Catalan number `C_m = (2m)! / (m!(m+1)!)`.
pub fn catalan(m: u64) -> BigInt {
    binomial(2 * m, m) / BigInt::from(m + 1)
}

/// Renders a rational as `num/den` (or plain `num` when integral),
/// matching the canonical JSON coefficient encoding.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the `num/den` encoding produced by [`rat_to_string`].
pub fn rat_from_string(s: &str) -> Option<Rat> {
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next()?.trim().parse().ok()?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().ok()?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return None;
    }
    Some(Rat::new(numer, denom))
}

/// Renders a rational for LaTeX with the sign pulled out front.
/// Integers print plain; fractions use the compact `\frac32` form when both
/// parts are single digits (digits are single TeX tokens) and braces otherwise.
pub fn rat_to_latex(r: &Rat) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    if a.denom().is_one() {
        return format!("{}{}", sign, a.numer());
    }
    let (n, d) = (a.numer().to_string(), a.denom().to_string());
    if n.len() == 1 && d.len() == 1 {
        format!("{}\\frac{}{}", sign, n, d)
    } else {
        format!("{}\\frac{{{}}}{{{}}}", sign, n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(10), BigInt::from(3628800));
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd(-2), rat_int(-1));
        assert_eq!(double_factorial_odd(-1), rat_int(1));
        assert_eq!(double_factorial_odd(0), rat_int(1));
        assert_eq!(double_factorial_odd(1), rat_int(3));
        assert_eq!(double_factorial_odd(3), rat_int(105));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 2), BigInt::from(21));
        assert_eq!(binomial(7, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }

    #[test]
    fn catalan_numbers() {
        let want = [1u64, 1, 2, 5, 14, 42, 132, 429];
        for (m, w) in want.iter().enumerate() {
            assert_eq!(catalan(m as u64), BigInt::from(*w));
        }
    }

    #[test]
    fn string_roundtrip() {
        for r in [rat(3, 4), rat_int(-7), rat(-22, 7), Rat::zero()] {
            assert_eq!(rat_from_string(&rat_to_string(&r)).unwrap(), r);
        }
        assert!(rat_from_string("1/0").is_none());
    }

    #[test]
    fn latex_rendering() {
        assert_eq!(rat_to_latex(&rat(3, 2)), "\\frac32");
        assert_eq!(rat_to_latex(&rat(-1, 8)), "-\\frac18");
        assert_eq!(rat_to_latex(&rat(5, 16)), "\\frac{5}{16}");
        assert_eq!(rat_to_latex(&rat_int(6)), "6");
    }
}
