//! Exact rational scalars and small helpers used everywhere else.
//!
//! `Rat` is an arbitrary-precision rational kept in lowest terms with a
//! positive denominator (the `num` crate maintains both invariants). All
//! arithmetic is exact; rounding only ever happens explicitly through
//! [`round_down`]/[`round_up`], which produce dyadic enclosures for interval
//! arithmetic.

use num::bigint::{BigInt, Sign};
use num::{BigRational, Integer, One, Signed, Zero};

pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient as a rational (exact).
pub fn binomial(n: usize, k: usize) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rat::new(num, den)
}

/// Sign as -1, 0, or 1.
pub fn sign(x: &Rat) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn bit_length(x: &BigInt) -> i64 {
    x.bits() as i64
}

/// Largest dyadic rational `m / 2^k` with `|m| < 2^bits` that is `<= x`.
///
/// Used for outward rounding of interval endpoints: the result is exactly
/// representable with a `bits`-bit mantissa and never exceeds `x`.
pub fn round_down(x: &Rat, bits: u32) -> Rat {
    round_dyadic(x, bits, false)
}

/// Smallest dyadic rational with a `bits`-bit mantissa that is `>= x`.
pub fn round_up(x: &Rat, bits: u32) -> Rat {
    round_dyadic(x, bits, true)
}

fn round_dyadic(x: &Rat, bits: u32, up: bool) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let e = bit_length(x.numer()) - bit_length(x.denom());
    // shift so the mantissa lands in [2^(bits-1), 2^(bits+1))
    let k = bits as i64 - e;
    let (num, den) = if k >= 0 {
        (x.numer() << k as usize, x.denom().clone())
    } else {
        (x.numer().clone(), x.denom() << (-k) as usize)
    };
    let m = if up {
        num.div_ceil(&den)
    } else {
        num.div_floor(&den)
    };
    if k >= 0 {
        Rat::new(m, BigInt::one() << k as usize)
    } else {
        Rat::from_integer(m << (-k) as usize)
    }
}

/// Parse a scalar written as `p/q`, an integer, or a decimal literal with an
/// optional exponent (`-0.5`, `1.25e-3`).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    // decimal literal: [sign] digits [. digits] [eE [sign] digits]
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    if frac_part.chars().any(|c| !c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return None;
    }
    let n: BigInt = digits.parse().ok()?;
    let scale = frac_part.len() as i64 - exp;
    Some(apply_pow10(Rat::from_integer(n), -scale))
}

fn apply_pow10(x: Rat, e: i64) -> Rat {
    let ten = BigInt::from(10u8);
    if e >= 0 {
        x * Rat::from_integer(ten.pow(e as u32))
    } else {
        x / Rat::from_integer(ten.pow((-e) as u32))
    }
}

/// Decimal approximation with `sig` significant digits (round to nearest).
///
/// Plain notation for moderate magnitudes, scientific otherwise.
pub fn to_decimal_string(x: &Rat, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let a = x.abs();
    // decimal exponent: largest e with 10^e <= a
    let mut e: i64 = 0;
    let ten = rat(10);
    let mut t = a.clone();
    if t >= Rat::one() {
        while t >= ten {
            t = t / ten.clone();
            e += 1;
        }
    } else {
        while t < Rat::one() {
            t = t * ten.clone();
            e -= 1;
        }
    }
    // digits = round(a * 10^(sig-1-e))
    let shift = sig as i64 - 1 - e;
    let scaled = apply_pow10(a, shift);
    let digits = round_to_integer(&scaled);
    let mut ds = digits.to_string();
    // rounding may push into sig+1 digits (e.g. 9.99 -> 10.0)
    let e = if ds.len() > sig {
        ds.truncate(sig);
        e + 1
    } else {
        e
    };
    let body = if (-4..16).contains(&e) {
        if e >= 0 {
            let e = e as usize;
            if e + 1 >= ds.len() {
                ds.clone() + &"0".repeat(e + 1 - ds.len())
            } else {
                let tail = trim_zeros(&ds[e + 1..]);
                if tail.is_empty() {
                    ds[..e + 1].to_string()
                } else {
                    format!("{}.{}", &ds[..e + 1], tail)
                }
            }
        } else {
            let tail = trim_zeros(&ds);
            let tail = if tail.is_empty() { "0" } else { &tail };
            format!("0.{}{}", "0".repeat((-e - 1) as usize), tail)
        }
    } else {
        let tail = trim_zeros(&ds[1..]);
        if tail.is_empty() {
            format!("{}e{}", &ds[..1], e)
        } else {
            format!("{}.{}e{}", &ds[..1], tail, e)
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_zeros(s: &str) -> String {
    s.trim_end_matches('0').to_string()
}

fn round_to_integer(x: &Rat) -> BigInt {
    let two = BigInt::from(2u8);
    let (n, d) = (x.numer(), x.denom());
    (n * two + d).div_floor(&(d * BigInt::from(2u8)))
}

/// Exact rational formatting as `p/q` (or `p` for integers).
pub fn to_rational_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// The simplest rational (minimal denominator, then minimal numerator) in the
/// closed interval `[lo, hi]`, via the Stern–Brocot walk.
///
/// Used both to collapse isolating intervals onto rational roots and to
/// reconstruct rational values from tight interval enclosures.
pub fn simplest_rational_between(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo <= hi);
    if sign(lo) <= 0 && sign(hi) >= 0 {
        return Rat::zero();
    }
    if sign(lo) < 0 {
        return -simplest_rational_between(&-hi.clone(), &-lo.clone());
    }
    simplest_positive(lo, hi)
}

fn simplest_positive(lo: &Rat, hi: &Rat) -> Rat {
    // Continued-fraction descent: both endpoints positive.
    let fl = lo.numer().div_floor(lo.denom());
    let fh = hi.numer().div_floor(hi.denom());
    if fl < fh {
        // an integer fl+1 <= hi lies inside (or hi itself is integral)
        return Rat::from_integer(if (Rat::from_integer(fl.clone() + 1i32)) <= *hi {
            fl + 1i32
        } else {
            fh
        });
    }
    let frac_lo = lo - Rat::from_integer(fl.clone());
    let frac_hi = hi - Rat::from_integer(fl.clone());
    if frac_lo.is_zero() {
        return lo.clone();
    }
    // recurse on reciprocals, swapped
    let inner = simplest_positive(&frac_hi.recip(), &frac_lo.recip());
    Rat::from_integer(fl) + inner.recip()
}
