//! Laurent series in `z` with even `s`-grading and `Q[p]` coefficients:
//! the Laplace-transform domain where the disk recursions for `F(z)` and
//! `G(z)` live. The principal part `[.]_{z=0}` is the strictly negative
//! `z`-power part.

use crate::pipoly::PiPoly;
use crate::rat::Rat;
use std::collections::BTreeMap;
use std::fmt;

/// Finite-support Laurent series: map `(s-power, z-power) -> PiPoly`,
/// truncated in `s` at `s_max` (higher s-orders drop silently).
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentSeries {
    s_max: u32,
    terms: BTreeMap<(u32, i32), PiPoly>,
}

impl LaurentSeries {
    pub fn new(s_max: u32) -> Self {
        LaurentSeries {
            s_max,
            terms: BTreeMap::new(),
        }
    }

    pub fn s_max(&self) -> u32 {
        self.s_max
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert_add(&mut self, s: u32, z: i32, c: PiPoly) {
        if c.is_zero() || s > self.s_max {
            return;
        }
        match self.terms.entry((s, z)) {
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

    pub fn coeff(&self, s: u32, z: i32) -> PiPoly {
        self.terms
            .get(&(s, z))
            .cloned()
            .unwrap_or_else(PiPoly::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i32, &PiPoly)> {
        self.terms.iter().map(|(&(s, z), c)| (s, z, c))
    }

    /// The `z -> coefficient` map at a fixed s-order.
    pub fn s_slice(&self, s: u32) -> BTreeMap<i32, PiPoly> {
        self.terms
            .range((s, i32::MIN)..=(s, i32::MAX))
            .map(|(&(_, z), c)| (z, c.clone()))
            .collect()
    }

    /// Even s-orders with at least one term, ascending.
    pub fn s_orders(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.terms.keys().map(|&(s, _)| s).collect();
        out.dedup();
        out
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let mut out = self.clone();
        for (s, z, c) in other.iter() {
            out.insert_add(s, z, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        let mut out = self.clone();
        for (s, z, c) in other.iter() {
            out.insert_add(s, z, -c);
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> LaurentSeries {
        let mut out = LaurentSeries::new(self.s_max);
        for (s, z, c) in self.iter() {
            out.insert_add(s, z, c.scale(r));
        }
        out
    }

    /// Exact product, truncated in `s` at the left factor's cap.
    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        let mut out = LaurentSeries::new(self.s_max);
        for (sa, za, ca) in self.iter() {
            for (sb, zb, cb) in other.iter() {
                if sa + sb > self.s_max {
                    continue;
                }
                out.insert_add(sa + sb, za + zb, ca * cb);
            }
        }
        out
    }

    /// Strictly-negative-z-power part; idempotent.
    pub fn principal_part(&self) -> LaurentSeries {
        let mut out = LaurentSeries::new(self.s_max);
        for (s, z, c) in self.iter() {
            if z < 0 {
                out.insert_add(s, z, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (s, z, c) in self.iter() {
            writeln!(f, "  s^{s} z^{z}  :  {}", c.to_plain())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn principal_part_examples() {
        // 1/z^2 + 3 + z keeps only 1/z^2.
        let mut f = LaurentSeries::new(0);
        f.insert_add(0, -2, PiPoly::one());
        f.insert_add(0, 0, PiPoly::from_rat(rat_int(3)));
        f.insert_add(0, 1, PiPoly::one());
        let pp = f.principal_part();
        assert_eq!(pp.coeff(0, -2), PiPoly::one());
        assert!(pp.coeff(0, 0).is_zero());
        assert!(pp.coeff(0, 1).is_zero());

        // z^3 has no principal part.
        let mut g = LaurentSeries::new(0);
        g.insert_add(0, 3, PiPoly::one());
        assert!(g.principal_part().is_zero());
    }

    #[test]
    fn principal_part_decomposition_and_idempotence() {
        let mut f = LaurentSeries::new(4);
        f.insert_add(2, -2, PiPoly::from_rat(rat(1, 2)));
        f.insert_add(2, 2, PiPoly::term(rat_int(5), 1));
        f.insert_add(4, 0, PiPoly::one());
        let pp = f.principal_part();
        assert_eq!(pp.principal_part(), pp);
        assert_eq!(pp.add(&f.sub(&pp)), f);
    }

    #[test]
    fn product_adds_gradings_and_truncates() {
        let mut a = LaurentSeries::new(4);
        a.insert_add(2, -2, PiPoly::from_rat(rat(1, 2)));
        let prod = a.mul(&a);
        assert_eq!(prod.coeff(4, -4), PiPoly::from_rat(rat(1, 4)));
        // s^2 * s^4 would exceed the cap and must vanish.
        let mut b = a.clone();
        b.insert_add(4, -4, PiPoly::one());
        let prod2 = a.mul(&b);
        assert_eq!(prod2.coeff(4, -4), PiPoly::from_rat(rat(1, 4)));
        assert!(prod2.coeff(6, -6).is_zero());
    }

    #[test]
    fn sec_multiplication_shifts_z_up() {
        // (1/z^2) * (1 + 2p z^2) = 1/z^2 + 2p.
        let mut f = LaurentSeries::new(0);
        f.insert_add(0, -2, PiPoly::one());
        let mut sec = LaurentSeries::new(0);
        sec.insert_add(0, 0, PiPoly::one());
        sec.insert_add(0, 2, PiPoly::term(rat_int(2), 1));
        let prod = f.mul(&sec);
        assert_eq!(prod.coeff(0, 0), PiPoly::term(rat_int(2), 1));
        assert_eq!(prod.principal_part().coeff(0, -2), PiPoly::one());
    }
}
