//! Integer helpers on top of `dashu_int::IBig`.

use dashu_int::ops::{DivEuclid, ExtendedGcd, Gcd};
use dashu_int::{IBig, Sign};

pub type Int = IBig;

pub fn int(n: i64) -> Int {
    IBig::from(n)
}

pub fn is_negative(a: &Int) -> bool {
    a.sign() == Sign::Negative && !a.is_zero()
}

pub fn is_positive(a: &Int) -> bool {
    a.sign() == Sign::Positive && !a.is_zero()
}

pub fn abs(a: &Int) -> Int {
    if is_negative(a) {
        -a.clone()
    } else {
        a.clone()
    }
}

/// Non-negative gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &Int, b: &Int) -> Int {
    IBig::from(a.gcd(b))
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        return Int::ZERO;
    }
    abs(&(a * b / gcd(a, b)))
}

/// Returns `(g, s, t)` with `g = s·a + t·b`, `g >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (g, s, t) = a.gcd_ext(b);
    (IBig::from(g), s, t)
}

/// Floor division for a positive divisor.
pub fn floor_div(a: &Int, b: &Int) -> Int {
    debug_assert!(is_positive(b));
    a.div_euclid(b)
}

pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = Int::ONE;
    for i in 0..k {
        acc = acc * IBig::from(n - i) / IBig::from(i + 1);
    }
    acc
}

pub fn pow2(e: u32) -> Int {
    Int::ONE << e as usize
}
