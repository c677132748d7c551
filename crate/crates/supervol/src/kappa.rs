//! Kappa-class polynomials.
//!
//! The weights `s_i` are defined by
//! `exp(-sum_{i>0} s_i t^i) = sum_k (-1)^k (2k+1)!! t^k`,
//! and `K_m` is the grade-`m` part of `exp(sum s_i kappa_i)` where
//! `kappa_i` has grade `i`. Both are computed exactly; nothing is
//! hard-coded beyond the defining series.

use crate::rat::{double_factorial_odd, factorial, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Monomial in the kappa classes: indices sorted descending, so the
/// natural lexicographic order on keys reproduces the conventional
/// display order `k_1^m < k_1^{m-2} k_2 < ... < k_m`.
type KappaMon = Vec<u32>;

fn mon_grade(mon: &[u32]) -> u32 {
    mon.iter().sum()
}

/// Sparse polynomial in `kappa_1, kappa_2, ...` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KappaPoly {
    terms: BTreeMap<KappaMon, Rat>,
}

impl KappaPoly {
    pub fn zero() -> Self {
        KappaPoly::default()
    }

    pub fn one() -> Self {
        let mut p = KappaPoly::zero();
        p.insert_add(Vec::new(), Rat::one());
        p
    }

    /// Single variable `kappa_i`.
    pub fn kappa(i: u32) -> Self {
        assert!(i >= 1);
        let mut p = KappaPoly::zero();
        p.insert_add(vec![i], Rat::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn insert_add(&mut self, mut mon: KappaMon, c: Rat) {
        if c.is_zero() {
            return;
        }
        mon.sort_unstable_by(|a, b| b.cmp(a));
        let slot = self.terms.entry(mon.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mon);
        }
    }

    pub fn coeff(&self, mon: &[u32]) -> Rat {
        let mut key = mon.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        self.terms.get(&key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&KappaMon, &Rat)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = KappaPoly::zero();
        for (m, v) in self.iter() {
            out.insert_add(m.clone(), v * c);
        }
        out
    }

    /// Product, dropping every monomial of grade above `grade_cap`.
    pub fn mul_capped(&self, other: &Self, grade_cap: u32) -> Self {
        let mut out = KappaPoly::zero();
        for (ma, ca) in self.iter() {
            for (mb, cb) in other.iter() {
                if mon_grade(ma) + mon_grade(mb) > grade_cap {
                    continue;
                }
                let mut mon = ma.clone();
                mon.extend_from_slice(mb);
                out.insert_add(mon, ca * cb);
            }
        }
        out
    }

    /// The grade-`m` homogeneous part.
    pub fn grade_part(&self, m: u32) -> Self {
        let mut out = KappaPoly::zero();
        for (mon, c) in self.iter() {
            if mon_grade(mon) == m {
                out.insert_add(mon.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_homogeneous_of_grade(&self, m: u32) -> bool {
        self.iter().all(|(mon, _)| mon_grade(mon) == m)
    }

    fn mon_latex(mon: &[u32]) -> String {
        // Keys are stored with indices descending; factors print ascending.
        let asc: Vec<u32> = mon.iter().rev().copied().collect();
        let mut out = String::new();
        let mut i = 0;
        while i < asc.len() {
            let idx = asc[i];
            let mut e = 0;
            while i < asc.len() && asc[i] == idx {
                e += 1;
                i += 1;
            }
            if idx < 10 {
                out.push_str(&format!("\\kappa_{idx}"));
            } else {
                out.push_str(&format!("\\kappa_{{{idx}}}"));
            }
            if e > 1 {
                if e < 10 {
                    out.push_str(&format!("^{e}"));
                } else {
                    out.push_str(&format!("^{{{e}}}"));
                }
            }
        }
        out
    }

    /// Renders with the overall rational content factored out, matching the
    /// conventional displays: `\frac32(3\kappa_1^2-7\kappa_2)`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        // Content: gcd of numerators over lcm of denominators, signed so
        // the first (display-order) term comes out positive.
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for (_, c) in self.iter() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        if self.terms.iter().next().map(|(_, c)| c.is_negative()) == Some(true) {
            content = -content;
        }
        let render_terms = |p: &KappaPoly| -> String {
            let mut out = String::new();
            for (mon, c) in p.iter() {
                let lead = crate::rat::rat_to_latex(&c.abs());
                if !out.is_empty() || c.is_negative() {
                    out.push(if c.is_negative() { '-' } else { '+' });
                }
                if mon.is_empty() {
                    out.push_str(&lead);
                } else {
                    if !c.abs().is_one() {
                        out.push_str(&lead);
                    }
                    out.push_str(&Self::mon_latex(mon));
                }
            }
            out
        };
        let inner = self.scale(&content.clone().recip());
        if content.is_one() {
            return render_terms(&inner);
        }
        let head = crate::rat::rat_to_latex(&content);
        if inner.num_terms() == 1 {
            format!("{head}{}", render_terms(&inner))
        } else {
            format!("{head}({})", render_terms(&inner))
        }
    }
}

impl fmt::Display for KappaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_latex())
    }
}

/// The weights `s_1..s_m_max`: minus the power-series logarithm of
/// `sum_k (-1)^k (2k+1)!! t^k`.
pub fn insertion_weights(m_max: u32) -> Vec<Rat> {
    let n = m_max as usize;
    // a[k] = (-1)^k (2k+1)!!.
    let mut a = Vec::with_capacity(n + 1);
    for k in 0..=n as i64 {
        let mut v = double_factorial_odd(k);
        if k % 2 == 1 {
            v = -v;
        }
        a.push(v);
    }
    // log(1 + x) = sum (-1)^{j+1} x^j / j with x = a - 1, truncated.
    let mut x = a.clone();
    x[0] = Rat::zero();
    let mut log = vec![Rat::zero(); n + 1];
    let mut xpow = x.clone();
    for j in 1..=n {
        let sign = if j % 2 == 1 { Rat::one() } else { -Rat::one() };
        let w = sign / Rat::from_integer(BigInt::from(j));
        for (d, c) in xpow.iter().enumerate().take(n + 1) {
            log[d] += c * &w;
        }
        if j < n {
            // xpow *= x, truncating at degree n.
            let mut next = vec![Rat::zero(); n + 1];
            for (d1, c1) in xpow.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (d2, c2) in x.iter().enumerate() {
                    if d1 + d2 > n {
                        break;
                    }
                    next[d1 + d2] += c1 * c2;
                }
            }
            xpow = next;
        }
    }
    (1..=n).map(|i| -log[i].clone()).collect()
}

/// `[K_1, ..., K_M]`: grade-graded pieces of `exp(sum s_i kappa_i)`
/// (`K_0 = 1` is omitted).
pub fn kappa_polynomials(m_max: u32) -> Vec<KappaPoly> {
    assert!(m_max >= 1);
    let s = insertion_weights(m_max);
    let mut total = KappaPoly::one();
    for (idx, si) in s.iter().enumerate() {
        let i = idx as u32 + 1;
        // exp(s_i kappa_i) truncated at grade m_max.
        let mut factor = KappaPoly::one();
        let mut e = 1u32;
        while e * i <= m_max {
            let c = si.clone().pow(e as i32) / Rat::from_integer(factorial(e as u64));
            factor.insert_add(vec![i; e as usize], c);
            e += 1;
        }
        total = total.mul_capped(&factor, m_max);
    }
    (1..=m_max).map(|m| total.grade_part(m)).collect()
}
