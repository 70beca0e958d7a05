//! Sparse Laurent polynomials with exact coefficients.
//!
//! Two coefficient models are supported and never mix inside one polynomial:
//! Gaussian-rational values `re + im*i`, and exp-form values
//! `e^{log_mag} * e^{i*pi*phase}` with rational `log_mag` and `phase`.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlog::ExactLogValue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficient {
    Rational { re: BigRational, im: BigRational },
    LogPolar { log_mag: BigRational, phase: BigRational },
}

impl Coefficient {
    pub fn rational(re: BigRational, im: BigRational) -> Result<Self> {
        if re.is_zero() && im.is_zero() {
            return Err(Error::ZeroScale);
        }
        Ok(Coefficient::Rational { re, im })
    }

    pub fn real(re: BigRational) -> Result<Self> {
        Self::rational(re, BigRational::zero())
    }

    pub fn from_int(n: i64) -> Result<Self> {
        Self::real(BigRational::from(BigInt::from(n)))
    }

    pub fn one() -> Self {
        Coefficient::Rational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// `e^{log_mag} * e^{i*pi*phase}`; always nonzero. The phase is stored
    /// reduced modulo 2.
    pub fn log_polar(log_mag: BigRational, phase: BigRational) -> Self {
        Coefficient::LogPolar {
            log_mag,
            phase: reduce_phase(phase),
        }
    }

    pub fn is_log_polar(&self) -> bool {
        matches!(self, Coefficient::LogPolar { .. })
    }

    /// `|c|^2` as an exact rational; `None` under the exp-form model.
    pub fn magnitude_sq(&self) -> Option<BigRational> {
        match self {
            Coefficient::Rational { re, im } => Some(re * re + im * im),
            Coefficient::LogPolar { .. } => None,
        }
    }

    /// `log|c|` as an exact value.
    pub fn log_mag(&self) -> ExactLogValue {
        match self {
            Coefficient::Rational { .. } => {
                let m2 = self.magnitude_sq().unwrap();
                ExactLogValue::from_log(m2, BigRational::new(BigInt::one(), BigInt::from(2)))
            }
            Coefficient::LogPolar { log_mag, .. } => ExactLogValue::from_rational(log_mag.clone()),
        }
    }

    pub fn checked_add(&self, other: &Coefficient) -> Result<Option<Coefficient>> {
        match (self, other) {
            (
                Coefficient::Rational { re: a, im: b },
                Coefficient::Rational { re: c, im: d },
            ) => {
                let re = a + c;
                let im = b + d;
                if re.is_zero() && im.is_zero() {
                    Ok(None)
                } else {
                    Ok(Some(Coefficient::Rational { re, im }))
                }
            }
            (Coefficient::LogPolar { .. }, Coefficient::LogPolar { .. }) => {
                Err(Error::LogPolarMerge)
            }
            _ => Err(Error::MixedCoefficientModel),
        }
    }

    pub fn mul(&self, other: &Coefficient) -> Result<Coefficient> {
        match (self, other) {
            (
                Coefficient::Rational { re: a, im: b },
                Coefficient::Rational { re: c, im: d },
            ) => Ok(Coefficient::Rational {
                re: a * c - b * d,
                im: a * d + b * c,
            }),
            (
                Coefficient::LogPolar { log_mag: l1, phase: p1 },
                Coefficient::LogPolar { log_mag: l2, phase: p2 },
            ) => Ok(Coefficient::log_polar(l1 + l2, p1 + p2)),
            _ => Err(Error::MixedCoefficientModel),
        }
    }

    pub fn neg(&self) -> Coefficient {
        match self {
            Coefficient::Rational { re, im } => Coefficient::Rational {
                re: -re.clone(),
                im: -im.clone(),
            },
            Coefficient::LogPolar { log_mag, phase } => {
                Coefficient::log_polar(log_mag.clone(), phase + BigRational::one())
            }
        }
    }

    /// Integer power; negative exponents invert exactly.
    pub fn pow(&self, k: i64) -> Coefficient {
        match self {
            Coefficient::LogPolar { log_mag, phase } => {
                let kq = BigRational::from(BigInt::from(k));
                Coefficient::log_polar(log_mag * &kq, phase * &kq)
            }
            Coefficient::Rational { .. } => {
                let base = if k < 0 { self.invert() } else { self.clone() };
                let mut acc = Coefficient::one();
                let mut b = base;
                let mut e = k.unsigned_abs();
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc.mul(&b).unwrap();
                    }
                    e >>= 1;
                    if e > 0 {
                        b = b.mul(&b).unwrap();
                    }
                }
                acc
            }
        }
    }

    fn invert(&self) -> Coefficient {
        match self {
            Coefficient::Rational { re, im } => {
                let m2 = re * re + im * im;
                Coefficient::Rational {
                    re: re / &m2,
                    im: -(im / &m2),
                }
            }
            Coefficient::LogPolar { log_mag, phase } => {
                Coefficient::log_polar(-log_mag.clone(), -phase.clone())
            }
        }
    }

    /// Float value of the coefficient, for the numerical oracle.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        match self {
            Coefficient::Rational { re, im } => (
                crate::exactlog::rat_to_f64(re).0,
                crate::exactlog::rat_to_f64(im).0,
            ),
            Coefficient::LogPolar { log_mag, phase } => {
                let m = crate::exactlog::rat_to_f64(log_mag).0.exp();
                let a = crate::exactlog::rat_to_f64(phase).0 * std::f64::consts::PI;
                (m * a.cos(), m * a.sin())
            }
        }
    }
}

fn reduce_phase(p: BigRational) -> BigRational {
    // reduce modulo 2 into (-1, 1]
    let two = BigRational::from(BigInt::from(2));
    let mut p = &p - (&p / &two).floor() * &two; // now in [0, 2)
    if p > BigRational::one() {
        p -= two;
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub exponent: Vec<i64>,
    pub coeff: Coefficient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    n: usize,
    terms: Vec<Term>,
}

impl LaurentPoly {
    /// Build from raw terms: merges duplicate exponents, drops exact zeros,
    /// sorts lexicographically, and rejects model mixing.
    pub fn new(n: usize, raw: Vec<Term>) -> Result<Self> {
        let mut merged: Vec<Term> = Vec::new();
        for t in raw {
            if t.exponent.len() != n {
                return Err(Error::DimensionMismatch {
                    index: t.exponent.len(),
                    n,
                });
            }
            match merged.iter_mut().find(|m| m.exponent == t.exponent) {
                Some(m) => match m.coeff.checked_add(&t.coeff)? {
                    Some(c) => m.coeff = c,
                    None => {
                        let pos = merged
                            .iter()
                            .position(|x| x.exponent == t.exponent)
                            .unwrap();
                        merged.remove(pos);
                    }
                },
                None => merged.push(t),
            }
        }
        if merged.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        let polar = merged[0].coeff.is_log_polar();
        if merged.iter().any(|t| t.coeff.is_log_polar() != polar) {
            return Err(Error::MixedCoefficientModel);
        }
        merged.sort_by(|a, b| a.exponent.cmp(&b.exponent));
        Ok(LaurentPoly { n, terms: merged })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_log_polar(&self) -> bool {
        self.terms[0].coeff.is_log_polar()
    }

    /// Exponent range in variable `var`.
    pub fn exponent_range(&self, var: usize) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for t in &self.terms {
            lo = lo.min(t.exponent[var]);
            hi = hi.max(t.exponent[var]);
        }
        (lo, hi)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let mono: Vec<String> = t
                .exponent
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, e)
                    }
                })
                .collect();
            let mono = mono.join("*");
            let (sign, coeff_str) = coeff_display(&t.coeff, mono.is_empty());
            if i == 0 {
                if sign {
                    write!(f, "-")?;
                }
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (coeff_str, mono.is_empty()) {
                (Some(c), true) => write!(f, "{}", c)?,
                (Some(c), false) => write!(f, "{}*{}", c, mono)?,
                (None, true) => write!(f, "1")?,
                (None, false) => write!(f, "{}", mono)?,
            }
        }
        Ok(())
    }
}

/// Returns (leading-minus flag, coefficient text without that sign).
fn coeff_display(c: &Coefficient, standalone: bool) -> (bool, Option<String>) {
    match c {
        Coefficient::Rational { re, im } => {
            if im.is_zero() {
                let neg = re.is_negative();
                let a = if neg { -re.clone() } else { re.clone() };
                if a.is_one() && !standalone {
                    (neg, None)
                } else {
                    (neg, Some(format!("{}", a)))
                }
            } else if re.is_zero() && im.is_one() {
                (false, Some("(0+1i)".into()))
            } else {
                let im_s = if im.is_negative() {
                    format!("-{}i", -im.clone())
                } else {
                    format!("+{}i", im)
                };
                (false, Some(format!("({}{})", re, im_s)))
            }
        }
        Coefficient::LogPolar { log_mag, phase } => {
            if phase.is_zero() {
                (false, Some(format!("exp({})", log_mag)))
            } else {
                (false, Some(format!("exp({},{})", log_mag, phase)))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// elementary transforms
// ---------------------------------------------------------------------------

/// `g(x) = alpha * x^a * f(beta_1 x_1, ..., beta_n x_n)`.
///
/// The tropical set and amoeba of `g` are those of `f` shifted by `-Log|beta|`.
pub fn rescale_transform(
    f: &LaurentPoly,
    alpha: &Coefficient,
    a: &[i64],
    beta: &[Coefficient],
) -> Result<LaurentPoly> {
    if a.len() != f.n() || beta.len() != f.n() {
        return Err(Error::DimensionMismatch {
            index: a.len().max(beta.len()),
            n: f.n(),
        });
    }
    let mut out = Vec::with_capacity(f.term_count());
    for t in f.terms() {
        let mut c = alpha.mul(&t.coeff)?;
        for (j, b) in beta.iter().enumerate() {
            c = c.mul(&b.pow(t.exponent[j]))?;
        }
        let exponent = t
            .exponent
            .iter()
            .zip(a)
            .map(|(e, s)| e + s)
            .collect();
        out.push(Term { exponent, coeff: c });
    }
    LaurentPoly::new(f.n(), out)
}

/// Reciprocal of a univariate polynomial: `x^deg * f(1/x)` after shifting the
/// support to start at exponent 0. Coefficients are preserved, exponents
/// reversed.
pub fn reciprocal(f: &LaurentPoly) -> Result<LaurentPoly> {
    if f.n() != 1 {
        return Err(Error::NotUnivariate);
    }
    let (lo, hi) = f.exponent_range(0);
    let deg = hi - lo;
    let terms = f
        .terms()
        .iter()
        .map(|t| Term {
            exponent: vec![deg - (t.exponent[0] - lo)],
            coeff: t.coeff.clone(),
        })
        .collect();
    LaurentPoly::new(1, terms)
}

/// `a . w + log|c|` for one term at a rational query point `w = Log|x|`.
pub fn term_log_magnitude(term: &Term, w: &[BigRational]) -> ExactLogValue {
    let mut dot = BigRational::zero();
    for (e, wj) in term.exponent.iter().zip(w) {
        dot += wj * BigRational::from(BigInt::from(*e));
    }
    let mut v = ExactLogValue::from_rational(dot);
    v.add_assign(&term.coeff.log_mag());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_laurent;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rescale_binomial() {
        // f = x1 - 1, beta = (2) -> g = 2 x1 - 1
        let f = parse_laurent("x1 - 1", 1).unwrap();
        let g = rescale_transform(
            &f,
            &Coefficient::one(),
            &[0],
            &[Coefficient::from_int(2).unwrap()],
        )
        .unwrap();
        assert_eq!(g, parse_laurent("2*x1 - 1", 1).unwrap());
    }

    #[test]
    fn rescale_monomial_shift() {
        let f = parse_laurent("1 + x1", 1).unwrap();
        let g = rescale_transform(&f, &Coefficient::one(), &[1], &[Coefficient::one()]).unwrap();
        assert_eq!(g, parse_laurent("x1 + x1^2", 1).unwrap());
    }

    #[test]
    fn reciprocal_examples() {
        let f = parse_laurent("x1^2 - x1 - 1", 1).unwrap();
        let r = reciprocal(&f).unwrap();
        assert_eq!(r, parse_laurent("-x1^2 - x1 + 1", 1).unwrap());

        let f = parse_laurent("2 - x1", 1).unwrap();
        let r = reciprocal(&f).unwrap();
        assert_eq!(r, parse_laurent("-1 + 2*x1", 1).unwrap());
    }

    #[test]
    fn reciprocal_involution() {
        let f = parse_laurent("3 - 5*x1 + x1^4", 1).unwrap();
        assert_eq!(reciprocal(&reciprocal(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn term_log_magnitude_examples() {
        // 10*x1*x2 at w = (0,0) -> log 10
        let f = parse_laurent("10*x1*x2", 2).unwrap();
        let v = term_log_magnitude(&f.terms()[0], &[rat(0, 1), rat(0, 1)]);
        assert_eq!(v, ExactLogValue::log_of_int(10));

        // x1^3 at w = (2, 0) -> 6
        let f = parse_laurent("x1^3", 2).unwrap();
        let v = term_log_magnitude(&f.terms()[0], &[rat(2, 1), rat(0, 1)]);
        assert_eq!(v, ExactLogValue::from_int(6));

        // (1/16^6) * x1^0 at w = 0 -> -6 log 16
        let c = Coefficient::real(rat(1, 16i64.pow(6))).unwrap();
        let t = Term {
            exponent: vec![0],
            coeff: c,
        };
        let v = term_log_magnitude(&t, &[rat(0, 1)]);
        let expect = ExactLogValue::from_log(rat(16, 1), rat(-6, 1));
        assert_eq!(v, expect);
    }

    #[test]
    fn log_polar_log_mag_is_offset() {
        let c = Coefficient::log_polar(rat(3, 7), rat(1, 2));
        assert_eq!(c.log_mag(), ExactLogValue::from_rational(rat(3, 7)));
    }

    #[test]
    fn phase_reduction() {
        let c = Coefficient::log_polar(rat(0, 1), rat(7, 2));
        match c {
            Coefficient::LogPolar { phase, .. } => assert_eq!(phase, rat(-1, 2)),
            _ => unreachable!(),
        }
    }
}
