//! GF(2^m) arithmetic with log/antilog tables, 1 ≤ m ≤ 16.

use crate::error::{Error, Result};

/// Primitive reduction polynomials, bit i = coefficient of x^i, indexed by m.
const PRIMITIVE: [u32; 17] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

/// A field element, stored in the low `m` bits.
pub type Symbol = u16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfField {
    m: u32,
    poly: u32,
    exp: Vec<Symbol>,
    log: Vec<u32>,
}

impl GfField {
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=16).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "field degree m={m} outside 1..=16"
            )));
        }
        let poly = PRIMITIVE[m as usize];
        let order = (1u32 << m) - 1;
        let mut exp = vec![0; 2 * order as usize];
        let mut log = vec![0; 1 << m];
        let mut x: u32 = 1;
        for i in 0..order {
            if i > 0 && x == 1 {
                return Err(Error::InvalidParameter(format!(
                    "{poly:#x} is not primitive"
                )));
            }
            exp[i as usize] = x as Symbol;
            log[x as usize] = i;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }
        Ok(GfField { m, poly, exp, log })
    }

    /// Smallest field with at least `n` elements.
    pub fn with_at_least(n: usize) -> Result<Self> {
        let m = (1..=16u32).find(|&m| (1usize << m) >= n).ok_or_else(|| {
            Error::InvalidParameter(format!("no GF(2^m), m ≤ 16, has {n} elements"))
        })?;
        GfField::new(m)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    pub fn size(&self) -> usize {
        1 << self.m
    }

    fn order(&self) -> u32 {
        (1 << self.m) - 1
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Symbol) -> Option<Symbol> {
        if a == 0 {
            return None;
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.order() - l) % self.order()) as usize])
    }

    pub fn pow(&self, a: Symbol, e: u32) -> Symbol {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = (u64::from(self.log[a as usize]) * u64::from(e)) % u64::from(self.order());
        self.exp[l as usize]
    }

    /// Shift-and-add multiplication, independent of the tables.
    pub fn mul_slow(&self, a: Symbol, b: Symbol) -> Symbol {
        let (mut a, mut b, mut acc) = (u32::from(a), u32::from(b), 0u32);
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << self.m) != 0 {
                a ^= self.poly;
            }
        }
        acc as Symbol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_degree_is_primitive() {
        for m in 1..=16 {
            let f = GfField::new(m).unwrap();
            assert_eq!(f.size(), 1 << m);
        }
        assert!(GfField::new(0).is_err());
        assert!(GfField::new(17).is_err());
    }

    #[test]
    fn smallest_field() {
        assert_eq!(GfField::with_at_least(14).unwrap().m(), 4);
        assert_eq!(GfField::with_at_least(16).unwrap().m(), 4);
        assert_eq!(GfField::with_at_least(17).unwrap().m(), 5);
        assert_eq!(GfField::with_at_least(2).unwrap().m(), 1);
    }

    #[test]
    fn tables_agree_with_shift_and_add() {
        for m in 1..=8 {
            let f = GfField::new(m).unwrap();
            for a in 0..f.size() as Symbol {
                for b in 0..f.size() as Symbol {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
            }
        }
    }

    #[test]
    fn inverses() {
        for m in [1, 4, 8, 12] {
            let f = GfField::new(m).unwrap();
            assert_eq!(f.inv(0), None);
            for a in 1..f.size() as Symbol {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn powers() {
        let f = GfField::new(4).unwrap();
        let g = 2;
        let mut acc = 1;
        for e in 0..20 {
            assert_eq!(f.pow(g, e), acc);
            acc = f.mul(acc, g);
        }
        assert_eq!(f.pow(0, 0), 1);
        assert_eq!(f.pow(0, 3), 0);
    }
}
