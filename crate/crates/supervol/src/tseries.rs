//! Truncated series in the coupling variables `t_0, t_1, ...` with an `hbar`
//! grading and an even `s` grading: the ambient space for free energies and
//! partition functions of the tau-function side of the theory.
//!
//! A term is `C * hbar^h * s^sigma * t_{k_1}...t_{k_n}` indexed by a
//! [`TKey`]. The weight of `t_k` is `2k+1`; truncation caps the total
//! weight, the `s` order, the largest t-index, and the `hbar` range.

use crate::pipoly::PiPoly;
use crate::rat::{factorial, Rat};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Multiset of t-indices, stored ascending. `t0^2 t2` is `[0, 0, 2]`.
#[derive(Clone, PartialEq, Eq, Debug, Default, PartialOrd, Ord)]
pub struct TMon(Vec<u8>);

impl TMon {
    pub fn empty() -> Self {
        TMon(Vec::new())
    }

    pub fn new(mut indices: Vec<u8>) -> Self {
        indices.sort_unstable();
        TMon(indices)
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    /// Number of letters (the `n` of an `n`-point correlator).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total weight, counting `2k+1` per letter `t_k`.
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&k| 2 * k as u32 + 1).sum()
    }

    /// Multiplicity of the letter `t_k`.
    pub fn mult(&self, k: u8) -> usize {
        self.0.iter().filter(|&&j| j == k).count()
    }

    /// Largest letter, if any.
    pub fn max_index(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// `(letter, multiplicity)` pairs, ascending letters.
    pub fn letter_mults(&self) -> Vec<(u8, usize)> {
        let mut out: Vec<(u8, usize)> = Vec::new();
        for &k in &self.0 {
            match out.last_mut() {
                Some((l, m)) if *l == k => *m += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    }

    /// Product of multiplicity factorials, the symmetry factor of the monomial.
    pub fn sym_factor(&self) -> Rat {
        let mut acc = Rat::one();
        for (_, m) in self.letter_mults() {
            acc *= Rat::from_integer(factorial(m as u64));
        }
        acc
    }

    /// This monomial with one extra letter `k`.
    pub fn with(&self, k: u8) -> TMon {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&j| j <= k);
        v.insert(pos, k);
        TMon(v)
    }

    /// Removes one copy of `k`, or `None` if absent.
    pub fn without(&self, k: u8) -> Option<TMon> {
        let pos = self.0.iter().position(|&j| j == k)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(TMon(v))
    }

    /// Multiset union.
    pub fn union(&self, other: &TMon) -> TMon {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        TMon(v)
    }

    /// All splittings of this multiset into an ordered pair of multisets,
    /// each split listed once per distinct (left, right) value.
    pub fn splits(&self) -> Vec<(TMon, TMon)> {
        let lm = self.letter_mults();
        let mut out = vec![(Vec::new(), Vec::new())];
        for &(k, m) in &lm {
            let mut next = Vec::with_capacity(out.len() * (m + 1));
            for (l, r) in &out {
                for take in 0..=m {
                    let mut l2 = l.clone();
                    let mut r2 = r.clone();
                    l2.extend(std::iter::repeat(k).take(take));
                    r2.extend(std::iter::repeat(k).take(m - take));
                    next.push((l2, r2));
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(l, r)| (TMon(l), TMon(r)))
            .collect()
    }
}

impl fmt::Display for TMon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (k, m) in self.letter_mults() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if m == 1 {
                write!(f, "t{k}")?;
            } else {
                write!(f, "t{k}^{m}")?;
            }
        }
        Ok(())
    }
}

/// Position of a term: `hbar` exponent, `s` exponent, t-monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TKey {
    pub h: i32,
    pub s: u32,
    pub mon: TMon,
}

impl TKey {
    pub fn new(h: i32, s: u32, mon: TMon) -> Self {
        TKey { h, s, mon }
    }
}

impl Ord for TKey {
    // Ordered for readable listings: by s-order, then monomial weight,
    // then the monomial itself, then the hbar exponent.
    fn cmp(&self, other: &Self) -> Ordering {
        self.s
            .cmp(&other.s)
            .then_with(|| self.mon.weight().cmp(&other.mon.weight()))
            .then_with(|| self.mon.cmp(&other.mon))
            .then_with(|| self.h.cmp(&other.h))
    }
}

impl PartialOrd for TKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Truncation box for a [`TSeries`]. Terms outside it are dropped silently.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TCaps {
    pub t_max: u8,
    pub weight_max: u32,
    pub s_max: u32,
    pub h_min: i32,
    pub h_max: i32,
}

impl TCaps {
    pub fn contains(&self, key: &TKey) -> bool {
        key.s <= self.s_max
            && key.mon.weight() <= self.weight_max
            && key.mon.max_index().map_or(true, |k| k <= self.t_max)
            && key.h >= self.h_min
            && key.h <= self.h_max
    }

    /// Every monomial inside the box (all weights up to the cap).
    pub fn all_monomials(&self) -> Vec<TMon> {
        let mut out = vec![TMon::empty()];
        let mut frontier = vec![Vec::<u8>::new()];
        while let Some(cur) = frontier.pop() {
            let start = cur.last().copied().unwrap_or(0);
            let used: u32 = cur.iter().map(|&k| 2 * k as u32 + 1).sum();
            for k in start..=self.t_max {
                if used + 2 * k as u32 + 1 > self.weight_max {
                    break;
                }
                let mut next = cur.clone();
                next.push(k);
                out.push(TMon(next.clone()));
                frontier.push(next);
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Coefficient ring abstraction: rationals for the bare constraint solutions,
/// `Q[p]` once the translation introduces `pi^2`.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn from_rat(r: Rat) -> Self;
    fn scale_rat(&self, r: &Rat) -> Self;
    fn render(&self) -> String;
}

impl Coeff for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        <Rat as Zero>::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rat(r: Rat) -> Self {
        r
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        self * r
    }
    fn render(&self) -> String {
        crate::rat::rat_to_string(self)
    }
}

impl Coeff for PiPoly {
    fn zero() -> Self {
        PiPoly::zero()
    }
    fn is_zero(&self) -> bool {
        PiPoly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_rat(r: Rat) -> Self {
        PiPoly::from_rat(r)
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn render(&self) -> String {
        self.to_plain()
    }
}

/// Truncated series over coefficient ring `C`, graded by [`TKey`].
#[derive(Clone, PartialEq, Debug)]
pub struct TSeries<C: Coeff> {
    caps: TCaps,
    terms: BTreeMap<TKey, C>,
}

impl<C: Coeff> TSeries<C> {
    pub fn new(caps: TCaps) -> Self {
        TSeries {
            caps,
            terms: BTreeMap::new(),
        }
    }

    /// The multiplicative unit: `1` at `(h, s, mon) = (0, 0, empty)`.
    pub fn one(caps: TCaps) -> Self {
        let mut z = TSeries::new(caps);
        z.insert_add(TKey::new(0, 0, TMon::empty()), C::from_rat(Rat::one()));
        z
    }

    pub fn caps(&self) -> TCaps {
        self.caps
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c` at `key`, dropping the result if zero or outside the caps.
    pub fn insert_add(&mut self, key: TKey, c: C) {
        if c.is_zero() || !self.caps.contains(&key) {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, key: &TKey) -> C {
        self.terms.get(key).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TKey, &C)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &TSeries<C>) -> TSeries<C> {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.insert_add(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TSeries<C>) -> TSeries<C> {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.insert_add(k.clone(), c.neg_ref());
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> TSeries<C> {
        let mut out = TSeries::new(self.caps);
        for (k, c) in self.iter() {
            out.insert_add(k.clone(), c.scale_rat(r));
        }
        out
    }

    /// Truncating product: `hbar` and `s` exponents add, monomials merge.
    pub fn mul(&self, other: &TSeries<C>) -> TSeries<C> {
        let mut out = TSeries::new(self.caps);
        for (ka, ca) in self.iter() {
            for (kb, cb) in other.iter() {
                let key = TKey::new(ka.h + kb.h, ka.s + kb.s, ka.mon.union(&kb.mon));
                if !self.caps.contains(&key) {
                    continue;
                }
                out.insert_add(key, ca.mul_ref(cb));
            }
        }
        out
    }

    /// Re-boxes into `caps`, dropping terms that fall outside.
    pub fn truncated(&self, caps: TCaps) -> TSeries<C> {
        let mut out = TSeries::new(caps);
        for (k, c) in self.iter() {
            out.insert_add(k.clone(), c.clone());
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TSeries<D> {
        let mut out = TSeries::new(self.caps);
        for (k, c) in self.iter() {
            out.insert_add(k.clone(), f(c));
        }
        out
    }

    /// True when the series has a term at `(any h, s = 0, empty monomial)`.
    /// Such terms break the nilpotence that makes `exp`/`log` finite sums.
    fn has_constant_slot_term(&self) -> bool {
        self.terms
            .keys()
            .any(|k| k.s == 0 && k.mon.is_empty())
    }

    /// `exp` of a series with no constant-slot terms, truncated into
    /// `target` caps (typically with a widened `hbar` range, since products
    /// push `hbar` exponents down through the genus-expansion slots).
    pub fn exp(&self, target: TCaps) -> Result<TSeries<C>, crate::error::Error> {
        if self.has_constant_slot_term() {
            return Err(crate::error::Error::NotNilpotent(
                "exp needs every term to carry s > 0 or at least one t-letter".into(),
            ));
        }
        let f = self.truncated(target);
        let mut out = TSeries::one(target);
        let mut power = TSeries::one(target);
        // Each factor raises s + weight by at least one, so the sum is finite.
        let kmax = (target.s_max + target.weight_max + 1) as u64;
        for k in 1..=kmax {
            power = power.mul(&f);
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&Rat::from_integer(factorial(k)).recip()));
        }
        Ok(out)
    }

    /// `log` of a series of the form `1 + w` where `w` has no constant-slot
    /// terms; inverse of [`TSeries::exp`] within the truncation box.
    pub fn log(&self, target: TCaps) -> Result<TSeries<C>, crate::error::Error> {
        let unit_key = TKey::new(0, 0, TMon::empty());
        let unit = self.coeff(&unit_key);
        if unit != C::from_rat(Rat::one()) {
            return Err(crate::error::Error::NotNilpotent(
                "log needs unit constant term 1".into(),
            ));
        }
        let mut w = self.clone();
        w.terms.remove(&unit_key);
        if w.has_constant_slot_term() {
            return Err(crate::error::Error::NotNilpotent(
                "log needs every non-unit term to carry s > 0 or a t-letter".into(),
            ));
        }
        let w = w.truncated(target);
        let mut out = TSeries::new(target);
        let mut power = TSeries::one(target);
        let kmax = (target.s_max + target.weight_max + 1) as u64;
        for k in 1..=kmax {
            power = power.mul(&w);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&crate::rat::rat(sign, k as i64)));
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for TSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, c) in self.iter() {
            writeln!(
                f,
                "  h^{} s^{} {}  :  {}",
                k.h,
                k.s,
                k.mon,
                c.render()
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn caps() -> TCaps {
        TCaps {
            t_max: 3,
            weight_max: 7,
            s_max: 4,
            h_min: -3,
            h_max: 3,
        }
    }

    #[test]
    fn monomial_basics() {
        let m = TMon::new(vec![2, 0, 0]);
        assert_eq!(m.indices(), &[0, 0, 2]);
        assert_eq!(m.weight(), 7);
        assert_eq!(m.mult(0), 2);
        assert_eq!(m.sym_factor(), rat_int(2));
        assert_eq!(m.to_string(), "t0^2 t2");
        assert_eq!(m.without(2).unwrap(), TMon::new(vec![0, 0]));
        assert!(m.without(1).is_none());
        assert_eq!(m.with(1).indices(), &[0, 0, 1, 2]);
    }

    #[test]
    fn split_count_is_product_of_mult_plus_one() {
        let m = TMon::new(vec![0, 0, 1]);
        // (2+1)*(1+1) ordered splits of t0^2 t1.
        assert_eq!(m.splits().len(), 6);
        for (l, r) in m.splits() {
            assert_eq!(l.union(&r), m);
        }
    }

    #[test]
    fn series_product_merges_grading() {
        let mut a = TSeries::<Rat>::new(caps());
        a.insert_add(TKey::new(1, 2, TMon::new(vec![0])), rat(1, 2));
        let mut b = TSeries::<Rat>::new(caps());
        b.insert_add(TKey::new(-1, 2, TMon::new(vec![1])), rat_int(3));
        let p = a.mul(&b);
        assert_eq!(
            p.coeff(&TKey::new(0, 4, TMon::new(vec![0, 1]))),
            rat(3, 2)
        );
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn insert_add_cancels_to_zero() {
        let mut a = TSeries::<Rat>::new(caps());
        let k = TKey::new(0, 0, TMon::new(vec![1]));
        a.insert_add(k.clone(), rat(2, 3));
        a.insert_add(k.clone(), rat(-2, 3));
        assert!(a.is_zero());
    }

    #[test]
    fn caps_drop_outside_terms() {
        let mut a = TSeries::<Rat>::new(caps());
        a.insert_add(TKey::new(0, 6, TMon::empty()), rat_int(1));
        a.insert_add(TKey::new(4, 0, TMon::new(vec![0])), rat_int(1));
        a.insert_add(TKey::new(0, 0, TMon::new(vec![0, 1, 2, 3])), rat_int(1));
        assert!(a.is_zero(), "all three violate a cap");
    }

    #[test]
    fn exp_log_roundtrip() {
        let mut f = TSeries::<Rat>::new(caps());
        f.insert_add(TKey::new(-1, 0, TMon::new(vec![0, 0, 0])), rat(1, 6));
        f.insert_add(TKey::new(0, 0, TMon::new(vec![0])), rat(1, 8));
        f.insert_add(TKey::new(-1, 2, TMon::new(vec![0])), rat(1, 2));
        let wide = TCaps {
            h_min: -6,
            ..caps()
        };
        let z = f.exp(wide).unwrap();
        // exp generates the product slot (h=-2, s=2, t0^4) with coefficient
        // (1/6)(1/2) from the two h=-1 terms.
        assert_eq!(
            z.coeff(&TKey::new(-2, 2, TMon::new(vec![0, 0, 0, 0]))),
            rat(1, 12)
        );
        let back = z.log(wide).unwrap();
        assert_eq!(back, f.truncated(wide));
    }

    #[test]
    fn exp_rejects_constant_slot() {
        let mut f = TSeries::<Rat>::new(caps());
        f.insert_add(TKey::new(1, 0, TMon::empty()), rat_int(1));
        assert!(f.exp(caps()).is_err());
    }

    #[test]
    fn monomial_enumeration_respects_caps() {
        let c = TCaps {
            t_max: 2,
            weight_max: 5,
            s_max: 0,
            h_min: 0,
            h_max: 0,
        };
        let mons = c.all_monomials();
        // 1, t0, t0^2, t0^3, t0^4, t0^5, t1, t0 t1, t0^2 t1, t1 squared?
        // t1^2 has weight 6 > 5; t2 weight 5 ok; t0 t2 weight 6 no.
        let want: Vec<TMon> = vec![
            TMon::empty(),
            TMon::new(vec![0]),
            TMon::new(vec![0, 0]),
            TMon::new(vec![0, 0, 0]),
            TMon::new(vec![0, 0, 0, 0]),
            TMon::new(vec![0, 0, 0, 0, 0]),
            TMon::new(vec![1]),
            TMon::new(vec![0, 1]),
            TMon::new(vec![0, 0, 1]),
            TMon::new(vec![2]),
        ];
        let mut want_sorted = want;
        want_sorted.sort();
        assert_eq!(mons, want_sorted);
    }
}
