//! Exact rational combinations of logarithms of positive rationals.
//!
//! An [`ExactLogValue`] stores `offset + sum_i w_i * log(r_i)` with rational
//! `offset`, rational weights `w_i` and positive rational `r_i`. The sign of
//! such a value is decidable exactly: the purely logarithmic part vanishes iff
//! the corresponding monomial product equals 1 (checked with a gcd-free basis,
//! no factoring), and a nonzero value is separated from 0 by interval
//! evaluation at escalating fixed-point precision.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use num::bigint::BigInt;
use num::bigint::BigUint;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use once_cell::sync::OnceCell;

use crate::error::{Error, Result};

/// Hard cap on mantissa bits for the escalating sign test.
pub const DEFAULT_PRECISION_CAP: u32 = 16384;

/// Precision cap in bits, overridable through `ARCHTROP_PRECISION_BITS`.
pub fn precision_cap() -> u32 {
    static CAP: OnceCell<u32> = OnceCell::new();
    *CAP.get_or_init(|| {
        std::env::var("ARCHTROP_PRECISION_BITS")
            .ok()
            .and_then(|s| s.parse::<u32>().ok())
            .map(|b| b.clamp(53, DEFAULT_PRECISION_CAP))
            .unwrap_or(DEFAULT_PRECISION_CAP)
    })
}

#[derive(Debug, Clone, Default)]
pub struct ExactLogValue {
    offset: BigRational,
    /// positive rational base (never 1) -> nonzero rational weight
    logs: BTreeMap<BigRational, BigRational>,
    cache: OnceCell<(f64, f64)>,
}

impl ExactLogValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: BigRational) -> Self {
        ExactLogValue {
            offset: q,
            ..Default::default()
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// `w * log(r)`, `r` a positive rational.
    pub fn from_log(r: BigRational, w: BigRational) -> Self {
        let mut v = Self::zero();
        v.add_log(r, w);
        v
    }

    /// `log(n)` for a positive integer.
    pub fn log_of_int(n: u64) -> Self {
        Self::from_log(BigRational::from(BigInt::from(n)), BigRational::one())
    }

    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    pub fn log_terms(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.logs.iter()
    }

    fn add_log(&mut self, r: BigRational, w: BigRational) {
        assert!(r.is_positive(), "log base must be positive");
        if w.is_zero() || r.is_one() {
            return;
        }
        let entry = self.logs.entry(r.clone()).or_insert_with(BigRational::zero);
        *entry += w;
        if entry.is_zero() {
            self.logs.remove(&r);
        }
        self.cache = OnceCell::new();
    }

    pub fn add_assign(&mut self, other: &ExactLogValue) {
        self.offset += &other.offset;
        for (r, w) in &other.logs {
            self.add_log(r.clone(), w.clone());
        }
        self.cache = OnceCell::new();
    }

    pub fn sub_assign(&mut self, other: &ExactLogValue) {
        self.offset -= &other.offset;
        for (r, w) in &other.logs {
            self.add_log(r.clone(), -w.clone());
        }
        self.cache = OnceCell::new();
    }

    pub fn add(&self, other: &ExactLogValue) -> ExactLogValue {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &ExactLogValue) -> ExactLogValue {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn neg(&self) -> ExactLogValue {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, q: &BigRational) -> ExactLogValue {
        if q.is_zero() {
            return ExactLogValue::zero();
        }
        let logs = self
            .logs
            .iter()
            .map(|(r, w)| (r.clone(), w * q))
            .collect();
        ExactLogValue {
            offset: &self.offset * q,
            logs,
            cache: OnceCell::new(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.logs.is_empty()
    }

    /// Cached float approximation with a certified absolute error radius.
    pub fn approx(&self) -> (f64, f64) {
        *self.cache.get_or_init(|| {
            let (mut v, mut e) = rat_to_f64(&self.offset);
            for (r, w) in &self.logs {
                let (lv, le) = ln_rat_f64(r);
                let (wv, we) = rat_to_f64(w);
                let t = wv * lv;
                v += t;
                e += wv.abs() * le + we * (lv.abs() + le) + t.abs() * 1e-15 + 1e-300;
            }
            // accumulated addition rounding
            e += (v.abs() + 1.0) * 1e-13 * (self.logs.len() as f64 + 1.0);
            (v, e)
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.approx().0
    }

    /// Exact test of whether the purely logarithmic part is zero,
    /// i.e. whether `prod r_i^{m_i} = 1` after clearing weight denominators.
    fn log_part_is_zero(&self) -> bool {
        if self.logs.is_empty() {
            return true;
        }
        let mut den = BigInt::one();
        for w in self.logs.values() {
            den = den.lcm(w.denom());
        }
        let pairs: Vec<(BigUint, BigUint, BigInt)> = self
            .logs
            .iter()
            .map(|(r, w)| {
                let m = (w * &den).to_integer();
                (
                    r.numer().magnitude().clone(),
                    r.denom().magnitude().clone(),
                    m,
                )
            })
            .collect();
        let mut vals: Vec<BigUint> = Vec::new();
        for (n, d, _) in &pairs {
            if !n.is_one() {
                vals.push(n.clone());
            }
            if !d.is_one() {
                vals.push(d.clone());
            }
        }
        let basis = coprime_basis(vals);
        let mut total: Vec<BigInt> = vec![BigInt::zero(); basis.len()];
        for (n, d, m) in &pairs {
            for (j, ej) in factor_over_basis(n, &basis).into_iter().enumerate() {
                total[j] += BigInt::from(ej) * m;
            }
            for (j, ej) in factor_over_basis(d, &basis).into_iter().enumerate() {
                total[j] -= BigInt::from(ej) * m;
            }
        }
        total.iter().all(|e| e.is_zero())
    }

    /// Sign of the value versus zero, decided exactly.
    pub fn try_sign(&self) -> Result<Ordering> {
        if self.logs.is_empty() {
            return Ok(self.offset.cmp(&BigRational::zero()));
        }
        let (v, e) = self.approx();
        if v - e > 0.0 {
            return Ok(Ordering::Greater);
        }
        if v + e < 0.0 {
            return Ok(Ordering::Less);
        }
        if self.log_part_is_zero() {
            return Ok(self.offset.cmp(&BigRational::zero()));
        }
        // Value is provably nonzero (a nonvanishing rational combination of
        // logs of rationals plus a rational is irrational), so interval
        // evaluation separates it from zero at some finite precision.
        let cap = precision_cap();
        let mut prec: u32 = 128;
        loop {
            let fx = self.eval_fixed(prec);
            if fx.v > fx.e {
                return Ok(Ordering::Greater);
            }
            if fx.v < -fx.e.clone() {
                return Ok(Ordering::Less);
            }
            if prec >= cap {
                return Err(Error::PrecisionExhausted);
            }
            prec = (prec * 2).min(cap);
        }
    }

    /// Panicking convenience wrapper; the cap is unreachable for the input
    /// scales this library targets.
    pub fn sign(&self) -> Ordering {
        self.try_sign().expect("sign test exhausted precision cap")
    }

    pub fn is_zero_value(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    pub fn try_cmp(&self, other: &ExactLogValue) -> Result<Ordering> {
        self.sub(other).try_sign()
    }

    fn eval_fixed(&self, prec: u32) -> Fx {
        let wp = prec + 64;
        let mut acc = fx_from_rational(&self.offset, wp);
        for (r, w) in &self.logs {
            let ln = ln_rat_fixed(r, wp);
            acc = acc.add(&ln.scale_rational(w));
        }
        acc.drop_bits(64)
    }
}

impl PartialEq for ExactLogValue {
    fn eq(&self, other: &Self) -> bool {
        self.try_cmp(other) == Ok(Ordering::Equal)
    }
}
impl Eq for ExactLogValue {}

impl PartialOrd for ExactLogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl fmt::Display for ExactLogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.offset.is_zero() || self.logs.is_empty() {
            write!(f, "{}", self.offset)?;
            first = false;
        }
        for (r, w) in &self.logs {
            if first {
                write!(f, "{}*log({})", w, r)?;
                first = false;
            } else if w.is_negative() {
                write!(f, " - {}*log({})", -w, r)?;
            } else {
                write!(f, " + {}*log({})", w, r)?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// fixed-point interval arithmetic on BigInt mantissas
// ---------------------------------------------------------------------------

/// Interval `[(v-e)*2^-prec, (v+e)*2^-prec]`; `prec` is carried by context.
struct Fx {
    v: BigInt,
    e: BigInt,
}

impl Fx {
    fn add(&self, other: &Fx) -> Fx {
        Fx {
            v: &self.v + &other.v,
            e: &self.e + &other.e,
        }
    }

    fn scale_rational(&self, w: &BigRational) -> Fx {
        let wn = w.numer();
        let wd = w.denom();
        let v = (&self.v * wn) / wd;
        // |w| * e, rounded up, plus 1 ulp of division truncation
        let e = (&self.e * wn.abs() + wd - BigInt::one()) / wd + BigInt::one();
        Fx { v, e }
    }

    fn drop_bits(&self, bits: u32) -> Fx {
        Fx {
            v: &self.v >> bits,
            e: (&self.e >> bits) + BigInt::from(2),
        }
    }
}

fn fx_from_rational(q: &BigRational, prec: u32) -> Fx {
    let v = (q.numer() << prec) / q.denom();
    Fx {
        v,
        e: BigInt::one(),
    }
}

/// `atanh(z)` via its odd power series, `z` a fixed-point value in `[0, 1/2]`.
fn atanh_series(z: BigInt, z_err_ulps: u64, prec: u32) -> Fx {
    let z2 = (&z * &z) >> prec;
    let mut term = z.clone();
    let mut sum = z;
    let mut steps: u64 = 1;
    loop {
        term = (&term * &z2) >> prec;
        if term.is_zero() {
            break;
        }
        let k = 2 * steps + 1;
        sum += &term / BigInt::from(k);
        steps += 1;
        if steps > 2 * prec as u64 {
            break;
        }
    }
    // each step loses at most a few ulps; input error is amplified by
    // |atanh'(z)| <= 4/3 on [0, 1/2]
    Fx {
        v: sum,
        e: BigInt::from(4 * steps + 8 + 2 * z_err_ulps),
    }
}

static LN2_CACHE: Lazy<Mutex<BTreeMap<u32, (BigInt, BigInt)>>> =
    Lazy::new(|| Mutex::new(BTreeMap::new()));

/// `ln 2 = 2*atanh(1/3)` in fixed point.
fn ln2_fixed(prec: u32) -> Fx {
    if let Some((v, e)) = LN2_CACHE.lock().unwrap().get(&prec) {
        return Fx {
            v: v.clone(),
            e: e.clone(),
        };
    }
    let z = (BigInt::one() << prec) / BigInt::from(3);
    let s = atanh_series(z, 1, prec);
    let out = Fx {
        v: &s.v * 2,
        e: &s.e * 2,
    };
    LN2_CACHE
        .lock()
        .unwrap()
        .insert(prec, (out.v.clone(), out.e.clone()));
    out
}

/// `ln n` for a positive big integer, in fixed point.
fn ln_biguint(n: &BigUint, prec: u32) -> Fx {
    assert!(!n.is_zero());
    let bits = n.bits() as i64;
    let e = bits - 1;
    let big = BigInt::from(n.clone());
    // y/2^prec in [1, 2)
    let y: BigInt = if prec as i64 >= e {
        big << (prec as i64 - e) as usize
    } else {
        big >> (e - prec as i64) as usize
    };
    let one = BigInt::one() << prec;
    let z = ((&y - &one) << prec) / (&y + &one);
    let s = atanh_series(z, 2, prec);
    if e == 0 {
        return Fx {
            v: &s.v * 2,
            e: &s.e * 2,
        };
    }
    let ln2 = ln2_fixed(prec);
    Fx {
        v: &s.v * 2 + &ln2.v * e,
        e: &s.e * 2 + &ln2.e * e.abs() + BigInt::one(),
    }
}

fn ln_rat_fixed(r: &BigRational, prec: u32) -> Fx {
    let n = ln_biguint(r.numer().magnitude(), prec);
    let d = ln_biguint(r.denom().magnitude(), prec);
    Fx {
        v: n.v - d.v,
        e: n.e + d.e,
    }
}

// ---------------------------------------------------------------------------
// float helpers with certified error radii
// ---------------------------------------------------------------------------

/// Rational -> (f64 approximation, absolute error bound).
pub fn rat_to_f64(q: &BigRational) -> (f64, f64) {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return (v, v.abs() * 4e-16 + 1e-300);
        }
    }
    // overflowed f64: evaluate through logs of the magnitudes
    let s = if q.is_negative() { -1.0 } else { 1.0 };
    (s * f64::MAX, f64::MAX)
}

/// `ln` of a positive rational -> (f64 approximation, absolute error bound),
/// safe against overflow for bases of any bit size.
pub fn ln_rat_f64(r: &BigRational) -> (f64, f64) {
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let (ln_n, bn) = ln_biguint_f64(n);
    let (ln_d, bd) = ln_biguint_f64(d);
    (ln_n - ln_d, 1e-14 * ((bn + bd) as f64 + 4.0))
}

fn ln_biguint_f64(n: &BigUint) -> (f64, u64) {
    let bits = n.bits();
    if bits <= 53 {
        return (n.to_f64().unwrap().ln(), bits);
    }
    let top = (n >> (bits - 53)).to_f64().unwrap();
    (
        top.ln() + (bits - 53) as f64 * std::f64::consts::LN_2,
        bits,
    )
}

// ---------------------------------------------------------------------------
// gcd-free (coprime) basis for exact monomial-product comparison
// ---------------------------------------------------------------------------

/// Pairwise-coprime set over which every input factors as a product of powers.
fn coprime_basis(vals: Vec<BigUint>) -> Vec<BigUint> {
    let one = BigUint::one();
    let mut basis: Vec<BigUint> = Vec::new();
    for v in vals {
        if v != one && !basis.contains(&v) {
            basis.push(v);
        }
    }
    'outer: loop {
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let g = basis[i].gcd(&basis[j]);
                if g != one {
                    let a = &basis[i] / &g;
                    let b = &basis[j] / &g;
                    let keep = g;
                    basis.swap_remove(j);
                    basis.swap_remove(i);
                    for x in [a, b, keep] {
                        if x != one && !basis.contains(&x) {
                            basis.push(x);
                        }
                    }
                    continue 'outer;
                }
            }
        }
        break;
    }
    basis.sort();
    basis
}

fn factor_over_basis(v: &BigUint, basis: &[BigUint]) -> Vec<u64> {
    let one = BigUint::one();
    let mut v = v.clone();
    let mut exps = vec![0u64; basis.len()];
    for (j, b) in basis.iter().enumerate() {
        while (&v % b).is_zero() {
            v /= b;
            exps[j] += 1;
        }
    }
    debug_assert!(v == one, "value does not factor over the coprime basis");
    exps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_only_sign() {
        assert_eq!(
            ExactLogValue::from_rational(rat(3, 7)).sign(),
            Ordering::Greater
        );
        assert_eq!(ExactLogValue::zero().sign(), Ordering::Equal);
        assert_eq!(
            ExactLogValue::from_rational(rat(-1, 9)).sign(),
            Ordering::Less
        );
    }

    #[test]
    fn log4_equals_two_log2() {
        let a = ExactLogValue::from_log(rat(4, 1), BigRational::one());
        let b = ExactLogValue::from_log(rat(2, 1), rat(2, 1));
        assert_eq!(a, b);
        assert_eq!(a.sub(&b).sign(), Ordering::Equal);
    }

    #[test]
    fn mixed_base_equality() {
        // log 6 = log 2 + log 3
        let a = ExactLogValue::from_log(rat(6, 1), BigRational::one());
        let mut b = ExactLogValue::from_log(rat(2, 1), BigRational::one());
        b.add_assign(&ExactLogValue::from_log(rat(3, 1), BigRational::one()));
        assert_eq!(a, b);
    }

    #[test]
    fn rational_offset_with_cancelling_logs() {
        // 1/2 + log 4 - 2 log 2 = 1/2
        let mut v = ExactLogValue::from_rational(rat(1, 2));
        v.add_assign(&ExactLogValue::from_log(rat(4, 1), BigRational::one()));
        v.sub_assign(&ExactLogValue::from_log(rat(2, 1), rat(2, 1)));
        assert_eq!(v.sign(), Ordering::Greater);
        assert!(v.is_rational() || v.sub(&ExactLogValue::from_rational(rat(1, 2))).is_zero_value());
    }

    #[test]
    fn close_but_unequal_logs() {
        // log(1024) vs 10*log(2) + log(1048577/1048576)
        let a = ExactLogValue::from_log(rat(1024, 1), BigRational::one());
        let mut b = ExactLogValue::from_log(rat(2, 1), rat(10, 1));
        b.add_assign(&ExactLogValue::from_log(
            rat(1048577, 1048576),
            BigRational::one(),
        ));
        assert_eq!(a.try_cmp(&b).unwrap(), Ordering::Less);
    }

    #[test]
    fn huge_weight_equality() {
        // 2^51 * (log 4 - 2 log 2) = 0 without overflow
        let w = BigRational::from(BigInt::from(1i64 << 51));
        let mut v = ExactLogValue::from_log(rat(4, 1), w.clone());
        v.sub_assign(&ExactLogValue::from_log(rat(2, 1), &w * rat(2, 1)));
        assert_eq!(v.sign(), Ordering::Equal);
    }

    #[test]
    fn fixed_point_ln_accuracy() {
        let fx = ln_biguint(&BigUint::from(3u32), 256);
        let approx = fx.v.to_f64().unwrap() / 2f64.powi(256);
        assert!((approx - 3f64.ln()).abs() < 1e-60);
        assert!(fx.e.to_f64().unwrap() / 2f64.powi(256) < 1e-70);
    }

    #[test]
    fn approx_within_radius() {
        let mut v = ExactLogValue::from_log(rat(10, 1), rat(3, 2));
        v.add_assign(&ExactLogValue::from_rational(rat(-7, 3)));
        let (a, e) = v.approx();
        let exact = 1.5 * 10f64.ln() - 7.0 / 3.0;
        assert!((a - exact).abs() <= e + 1e-12);
    }

    #[test]
    fn coprime_basis_powers() {
        let basis = coprime_basis(vec![
            BigUint::from(8u32),
            BigUint::from(12u32),
            BigUint::from(9u32),
        ]);
        assert_eq!(basis, vec![BigUint::from(2u32), BigUint::from(3u32)]);
        assert_eq!(factor_over_basis(&BigUint::from(72u32), &basis), vec![3, 2]);
    }

    #[test]
    fn comparison_agrees_with_floats_randomized() {
        // cross-check exact sign against high-confidence float evaluation
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let mut v = ExactLogValue::zero();
            let mut fl = 0.0f64;
            for _ in 0..3 {
                let r = rat(rng.gen_range(1..200), rng.gen_range(1..200));
                let w = rat(rng.gen_range(-9..10), rng.gen_range(1..5));
                fl += w.to_f64().unwrap() * (r.to_f64().unwrap()).ln();
                v.add_assign(&ExactLogValue::from_log(r, w));
            }
            if fl.abs() > 1e-9 {
                let expect = if fl > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
                assert_eq!(v.sign(), expect, "mismatch at float value {fl}");
            }
        }
    }
}
