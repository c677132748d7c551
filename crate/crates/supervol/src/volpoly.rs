//! Multivariate volume polynomials.
//!
//! A [`VolPoly`] is a polynomial over `Q[p]` in the squared boundary lengths
//! `l_i = L_i^2` of an `n`-boundary surface. Storing squared lengths keeps
//! every volume a genuine polynomial; odd powers of `L_i` never appear in a
//! volume itself, only in the moment prefactors handled elsewhere.

use crate::pipoly::PiPoly;
use crate::rat::{factorial, rat_from_string, rat_to_latex, rat_to_string, Rat};
use crate::tseries::TMon;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Polynomial in `l_1, ..., l_n` with `Q[p]` coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VolPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, PiPoly>,
}

impl VolPoly {
    pub fn zero(n: usize) -> Self {
        VolPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: PiPoly) -> Self {
        let mut v = VolPoly::zero(n);
        v.insert_add(vec![0; n], c);
        v
    }

    pub fn one(n: usize) -> Self {
        VolPoly::constant(n, PiPoly::one())
    }

    pub fn monomial(n: usize, exps: Vec<u32>, c: PiPoly) -> Self {
        assert_eq!(exps.len(), n, "exponent vector length must equal n");
        let mut v = VolPoly::zero(n);
        v.insert_add(exps, c);
        v
    }

    /// Declared number of variables (kept even for the zero polynomial).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn insert_add(&mut self, exps: Vec<u32>, c: PiPoly) {
        assert_eq!(exps.len(), self.n, "exponent vector length must equal n");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> PiPoly {
        self.terms.get(exps).cloned().unwrap_or_else(PiPoly::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &PiPoly)> {
        self.terms.iter()
    }

    /// Total degree in the `l` variables, `None` for the zero polynomial.
    pub fn ell_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
    }

    pub fn add(&self, other: &VolPoly) -> VolPoly {
        assert_eq!(self.n, other.n, "cannot add polynomials in different variable counts");
        let mut out = self.clone();
        for (e, c) in other.iter() {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &VolPoly) -> VolPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> VolPoly {
        VolPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &VolPoly) -> VolPoly {
        assert_eq!(self.n, other.n, "cannot multiply polynomials in different variable counts");
        let mut out = VolPoly::zero(self.n);
        for (ea, ca) in self.iter() {
            for (eb, cb) in other.iter() {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> VolPoly {
        if r.is_zero() {
            return VolPoly::zero(self.n);
        }
        VolPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.scale(r)))
                .collect(),
        }
    }

    pub fn scale_poly(&self, f: &PiPoly) -> VolPoly {
        if f.is_zero() {
            return VolPoly::zero(self.n);
        }
        VolPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * f))
                .collect(),
        }
    }

    /// Renames variable `i` to `perm[i]`; `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> VolPoly {
        assert_eq!(perm.len(), self.n);
        let mut out = VolPoly::zero(self.n);
        for (e, c) in self.iter() {
            let mut exps = vec![0u32; self.n];
            for (i, &ei) in e.iter().enumerate() {
                exps[perm[i]] = ei;
            }
            out.insert_add(exps, c.clone());
        }
        out
    }

    /// Full symmetry check in all `n` variables, without enumerating `n!`
    /// permutations: groups terms by sorted exponent vector and verifies
    /// each orbit is complete with a constant coefficient.
    pub fn is_symmetric(&self) -> bool {
        let mut orbits: BTreeMap<Vec<u32>, (PiPoly, usize)> = BTreeMap::new();
        for (e, c) in self.iter() {
            let mut key = e.clone();
            key.sort_unstable();
            match orbits.entry(key) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert((c.clone(), 1));
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    if o.get().0 != *c {
                        return false;
                    }
                    o.get_mut().1 += 1;
                }
            }
        }
        for (key, (_, count)) in orbits {
            if count != distinct_permutation_count(&key) {
                return false;
            }
        }
        true
    }

    /// Embeds into `n_new` variables, sending variable `i` to `positions[i]`.
    /// Positions must be distinct and in range.
    pub fn embed(&self, n_new: usize, positions: &[usize]) -> VolPoly {
        assert_eq!(positions.len(), self.n);
        assert!(positions.iter().all(|&p| p < n_new));
        let mut out = VolPoly::zero(n_new);
        for (e, c) in self.iter() {
            let mut exps = vec![0u32; n_new];
            for (i, &ei) in e.iter().enumerate() {
                exps[positions[i]] += ei;
            }
            out.insert_add(exps, c.clone());
        }
        out
    }

    /// Decomposes along powers of variable `i`: returns `d -> q_d` with
    /// `self = sum_d l_i^d * q_d` and each `q_d` in the remaining `n-1`
    /// variables (original order preserved).
    pub fn coeffs_in_var(&self, i: usize) -> BTreeMap<u32, VolPoly> {
        assert!(i < self.n);
        let mut out: BTreeMap<u32, VolPoly> = BTreeMap::new();
        for (e, c) in self.iter() {
            let d = e[i];
            let mut rest = e.clone();
            rest.remove(i);
            out.entry(d)
                .or_insert_with(|| VolPoly::zero(self.n - 1))
                .insert_add(rest, c.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Substitutes `l_i = -4p` (boundary length `L_i = 2 pi sqrt(-1)`),
    /// returning a polynomial in the remaining `n-1` variables.
    pub fn eval_at_minus4p(&self, i: usize) -> VolPoly {
        assert!(i < self.n);
        let mut out = VolPoly::zero(self.n - 1);
        for (e, c) in self.iter() {
            let d = e[i] as usize;
            let mut rest = e.clone();
            rest.remove(i);
            let factor = Rat::from_integer((-4).into()).pow(d as i32);
            out.insert_add(rest, c.scale(&factor).mul_p_pow(d));
        }
        out
    }

    /// Numeric evaluation with `l` values and a numeric `p` (normally `pi^2`).
    pub fn eval_f64(&self, l: &[f64], p: f64) -> f64 {
        assert_eq!(l.len(), self.n);
        let mut acc = 0.0;
        for (e, c) in self.iter() {
            let mut term = c.eval_f64(p);
            for (x, &ei) in l.iter().zip(e) {
                term *= x.powi(ei as i32);
            }
            acc += term;
        }
        acc
    }

    /// Sends each variable with exponent `k` to one letter `t_k`, weighting
    /// by `2^k k!` per variable, and accumulates over all stored terms:
    /// `1 -> t0` (n = 1), `l1^2 -> 8 t2`, `l1 l2 -> 4 t1^2`.
    ///
    /// On a symmetric polynomial the accumulated value at a monomial `T` is
    /// `(n! / prod mult!) * prod(2^k k!) * c` where `c` is the coefficient of
    /// any single exponent ordering; [`VolPoly::from_t_map`] inverts that.
    pub fn substitute_t(&self) -> BTreeMap<TMon, PiPoly> {
        let mut out: BTreeMap<TMon, PiPoly> = BTreeMap::new();
        for (e, c) in self.iter() {
            let mut factor = Rat::one();
            let mut letters = Vec::with_capacity(self.n);
            for &ei in e {
                assert!(ei <= u8::MAX as u32, "l-exponent too large for a t-index");
                letters.push(ei as u8);
                factor *= Rat::from_integer(factorial(ei as u64)) * Rat::from_integer(num_bigint::BigInt::from(2).pow(ei));
            }
            let mon = TMon::new(letters);
            let entry = out.entry(mon).or_insert_with(PiPoly::zero);
            *entry = &*entry + &c.scale(&factor);
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Inverse of [`VolPoly::substitute_t`] for symmetric polynomials: spreads
    /// each t-monomial with `n` letters back over all distinct exponent
    /// orderings. Monomials with a letter count other than `n` are rejected.
    pub fn from_t_map(
        n: usize,
        map: &BTreeMap<TMon, PiPoly>,
    ) -> crate::error::Result<VolPoly> {
        let mut out = VolPoly::zero(n);
        for (mon, val) in map {
            if mon.len() != n {
                return Err(crate::error::Error::DimensionMismatch {
                    expected: n,
                    got: mon.len(),
                });
            }
            let mut norm = Rat::from_integer(factorial(n as u64));
            for &k in mon.indices() {
                norm *= Rat::from_integer(factorial(k as u64))
                    * Rat::from_integer(num_bigint::BigInt::from(2).pow(k as u32));
            }
            norm /= mon.sym_factor();
            let c = val.scale(&norm.recip());
            for exps in distinct_permutations(mon.indices()) {
                out.insert_add(exps, c.clone());
            }
        }
        Ok(out)
    }

    /// Canonical JSON form: terms sorted by exponent vector, one entry per
    /// `(l-exponents, p-power)` pair, coefficients as `num/den` strings.
    pub fn to_json(&self) -> VolPolyJson {
        let mut terms = Vec::new();
        for (e, c) in self.iter() {
            for (k, r) in c.iter() {
                terms.push(VolTermJson {
                    l: e.clone(),
                    p: k as u32,
                    c: rat_to_string(r),
                });
            }
        }
        VolPolyJson { n: self.n, terms }
    }

    pub fn from_json(json: &VolPolyJson) -> crate::error::Result<VolPoly> {
        let mut out = VolPoly::zero(json.n);
        for t in &json.terms {
            if t.l.len() != json.n {
                return Err(crate::error::Error::DimensionMismatch {
                    expected: json.n,
                    got: t.l.len(),
                });
            }
            let r = rat_from_string(&t.c)
                .ok_or_else(|| crate::error::Error::Parse(format!("bad coefficient {:?}", t.c)))?;
            out.insert_add(t.l.clone(), PiPoly::term(r, t.p as usize));
        }
        Ok(out)
    }

    /// LaTeX in the original length variables: `l_i^e` prints as `L_i^{2e}`,
    /// `p^k` as `pi^{2k}`. Terms are flattened and joined with explicit signs.
    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.iter() {
            for (k, r) in c.iter() {
                let mag = r.abs();
                if out.is_empty() {
                    if r.is_negative() {
                        out.push('-');
                    }
                } else if r.is_negative() {
                    out.push('-');
                } else {
                    out.push('+');
                }
                let has_symbol = k > 0 || e.iter().any(|&ei| ei > 0);
                if !mag.is_one() || !has_symbol {
                    out.push_str(&rat_to_latex(&mag));
                }
                if k > 0 && 2 * k < 10 {
                    out.push_str(&format!("\\pi^{}", 2 * k));
                } else if k > 0 {
                    out.push_str(&format!("\\pi^{{{}}}", 2 * k));
                }
                for (i, &ei) in e.iter().enumerate() {
                    if ei == 0 {
                        continue;
                    }
                    if 2 * ei < 10 {
                        out.push_str(&format!("L_{}^{}", i + 1, 2 * ei));
                    } else {
                        out.push_str(&format!("L_{}^{{{}}}", i + 1, 2 * ei));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Plain-text rendering in the `l` variables, e.g. `6*p + 1/2*l1`.
    pub fn to_plain(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut pieces = Vec::new();
        for (e, c) in self.iter() {
            let mono: String = e
                .iter()
                .enumerate()
                .filter(|(_, &ei)| ei > 0)
                .map(|(i, &ei)| {
                    if ei == 1 {
                        format!("l{}", i + 1)
                    } else {
                        format!("l{}^{}", i + 1, ei)
                    }
                })
                .collect::<Vec<_>>()
                .join("*");
            let coeff = c.to_plain();
            let coeff_wrapped = if c.iter().count() > 1 && !mono.is_empty() {
                format!("({coeff})")
            } else {
                coeff
            };
            if mono.is_empty() {
                pieces.push(coeff_wrapped);
            } else if coeff_wrapped == "1" {
                pieces.push(mono);
            } else {
                pieces.push(format!("{coeff_wrapped}*{mono}"));
            }
        }
        pieces.join(" + ")
    }
}

impl fmt::Display for VolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

/// Serialized form of a [`VolPoly`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VolPolyJson {
    pub n: usize,
    pub terms: Vec<VolTermJson>,
}

/// One `(l-exponents, p-power, coefficient)` entry.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VolTermJson {
    pub l: Vec<u32>,
    pub p: u32,
    pub c: String,
}

/// Number of distinct orderings of a multiset given as a sorted slice.
fn distinct_permutation_count(sorted: &[u32]) -> usize {
    let mut numer = factorial(sorted.len() as u64);
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            numer /= factorial(run);
            run = 1;
        }
    }
    numer /= factorial(run);
    let s = numer.to_string();
    s.parse().expect("permutation count fits usize")
}

/// All distinct orderings of the multiset of letters (as exponent vectors).
fn distinct_permutations(letters: &[u8]) -> Vec<Vec<u32>> {
    let mut cur: Vec<u32> = letters.iter().map(|&k| k as u32).collect();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // Lexicographic next-permutation walk over the multiset.
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Truncated even power series in `s` with [`VolPoly`] coefficients: the
/// container for a full volume series `sum_m s^m/m! * (order-m volume)`.
/// Stored entries are the order-`m` volumes themselves (no `1/m!`).
#[derive(Clone, PartialEq, Debug)]
pub struct VolumeSeries {
    n: usize,
    s_max: u32,
    terms: BTreeMap<u32, VolPoly>,
}

impl VolumeSeries {
    pub fn new(n: usize, s_max: u32) -> Self {
        VolumeSeries {
            n,
            s_max,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s_max(&self) -> u32 {
        self.s_max
    }

    pub fn set(&mut self, m: u32, v: VolPoly) {
        assert_eq!(m % 2, 0, "volume series holds even s-orders only");
        assert!(m <= self.s_max, "order beyond truncation");
        assert_eq!(v.n(), self.n);
        if v.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    pub fn get(&self, m: u32) -> Option<&VolPoly> {
        self.terms.get(&m)
    }

    pub fn orders(&self) -> impl Iterator<Item = (u32, &VolPoly)> {
        self.terms.iter().map(|(m, v)| (*m, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn example_v014() -> VolPoly {
        // 6p + l1/2, the 4-boundary-field disk coefficient in one variable.
        let mut v = VolPoly::zero(1);
        v.insert_add(vec![0], PiPoly::term(rat_int(6), 1));
        v.insert_add(vec![1], PiPoly::from_rat(rat(1, 2)));
        v
    }

    #[test]
    fn arithmetic_and_degree() {
        let v = example_v014();
        assert_eq!(v.ell_degree(), Some(1));
        let sq = v.mul(&v);
        assert_eq!(sq.coeff(&[2]), PiPoly::from_rat(rat(1, 4)));
        assert_eq!(sq.coeff(&[1]), PiPoly::term(rat_int(6), 1));
        assert_eq!(sq.coeff(&[0]), PiPoly::term(rat_int(36), 2));
        assert!(v.sub(&v).is_zero());
    }

    #[test]
    fn symmetry_detection() {
        let mut sym = VolPoly::zero(2);
        sym.insert_add(vec![1, 0], PiPoly::one());
        sym.insert_add(vec![0, 1], PiPoly::one());
        assert!(sym.is_symmetric());
        let mut asym = sym.clone();
        asym.insert_add(vec![2, 0], PiPoly::one());
        assert!(!asym.is_symmetric());
        let fixed = asym.add(&VolPoly::monomial(2, vec![0, 2], PiPoly::one()));
        assert!(fixed.is_symmetric());
    }

    #[test]
    fn embedding_and_permutation() {
        let v = example_v014();
        let e = v.embed(3, &[1]);
        assert_eq!(e.coeff(&[0, 1, 0]), PiPoly::from_rat(rat(1, 2)));
        let p = e.permuted(&[2, 0, 1]);
        assert_eq!(p.coeff(&[1, 0, 0]), PiPoly::from_rat(rat(1, 2)));
    }

    #[test]
    fn substitution_at_minus_4p() {
        // 24p + (3/2)(l1 + l2) with l2 = -4p leaves 18p + (3/2) l1.
        let mut v = VolPoly::zero(2);
        v.insert_add(vec![0, 0], PiPoly::term(rat_int(24), 1));
        v.insert_add(vec![1, 0], PiPoly::from_rat(rat(3, 2)));
        v.insert_add(vec![0, 1], PiPoly::from_rat(rat(3, 2)));
        let w = v.eval_at_minus4p(1);
        assert_eq!(w.coeff(&[0]), PiPoly::term(rat_int(18), 1));
        assert_eq!(w.coeff(&[1]), PiPoly::from_rat(rat(3, 2)));
    }

    #[test]
    fn t_substitution_examples() {
        // 1 -> t0 for n = 1.
        let one = VolPoly::one(1);
        let m = one.substitute_t();
        assert_eq!(m[&TMon::new(vec![0])], PiPoly::one());
        // l1^2 -> 8 t2.
        let sq = VolPoly::monomial(1, vec![2], PiPoly::one());
        let m = sq.substitute_t();
        assert_eq!(m[&TMon::new(vec![2])], PiPoly::from_rat(rat_int(8)));
        // l1 l2 -> 4 t1^2.
        let cross = VolPoly::monomial(2, vec![1, 1], PiPoly::one());
        let m = cross.substitute_t();
        assert_eq!(m[&TMon::new(vec![1, 1])], PiPoly::from_rat(rat_int(4)));
    }

    #[test]
    fn t_substitution_roundtrip_symmetric() {
        let mut v = VolPoly::zero(2);
        v.insert_add(vec![0, 0], PiPoly::term(rat_int(16), 1));
        v.insert_add(vec![1, 0], PiPoly::from_rat(rat(3, 2)));
        v.insert_add(vec![0, 1], PiPoly::from_rat(rat(3, 2)));
        v.insert_add(vec![2, 1], PiPoly::from_rat(rat(7, 5)));
        v.insert_add(vec![1, 2], PiPoly::from_rat(rat(7, 5)));
        let back = VolPoly::from_t_map(2, &v.substitute_t()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn json_roundtrip() {
        let v = example_v014();
        let json = v.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let parsed: VolPolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(VolPoly::from_json(&parsed).unwrap(), v);
    }

    #[test]
    fn latex_rendering() {
        assert_eq!(example_v014().to_latex(), "6\\pi^2+\\frac12L_1^2");
        let mut w = VolPoly::zero(2);
        w.insert_add(vec![1, 1], PiPoly::from_rat(rat_int(1)));
        w.insert_add(vec![0, 0], PiPoly::term(rat(-3, 4), 2));
        assert_eq!(w.to_latex(), "-\\frac34\\pi^4+L_1^2L_2^2");
    }

    #[test]
    fn coeffs_in_var_decomposition() {
        let mut v = VolPoly::zero(2);
        v.insert_add(vec![2, 1], PiPoly::one());
        v.insert_add(vec![0, 3], PiPoly::from_rat(rat(5, 2)));
        let d = v.coeffs_in_var(0);
        assert_eq!(d[&2].coeff(&[1]), PiPoly::one());
        assert_eq!(d[&0].coeff(&[3]), PiPoly::from_rat(rat(5, 2)));
    }

    #[test]
    fn distinct_permutations_of_multiset() {
        let p = distinct_permutations(&[0, 0, 1]);
        assert_eq!(p.len(), 3);
        assert!(p.contains(&vec![1, 0, 0]));
        assert_eq!(distinct_permutation_count(&[0, 0, 1]), 3);
        assert_eq!(distinct_permutation_count(&[1, 2, 3]), 6);
    }
}
