//! Midpoint-radius interval arithmetic over MPFR/MPC.
//!
//! Every operation returns a ball that rigorously encloses the exact result:
//! propagated input radii plus a bound on the rounding error of the midpoint
//! computation. Radii are carried at a fixed low precision and always rounded
//! up. Certified decisions (signs, disjointness, containment) are made only
//! through the `certainly_*` predicates, which use directed rounding.

use std::cmp::Ordering;

use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};

/// Precision used for radius bookkeeping.
pub const RAD_PREC: u32 = 64;

/// Complete an incomplete Float computation at radius precision, rounding up.
fn fup<S>(s: S) -> Float
where
    Float: AssignRound<S, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, s, Round::Up).0
}

/// Same, rounding down.
fn fdown<S>(s: S) -> Float
where
    Float: AssignRound<S, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, s, Round::Down).0
}

/// Upper bound for |z| at radius precision.
fn abs_up(z: &Complex) -> Float {
    fup(z.real().hypot_ref(z.imag()))
}

/// Lower bound for |z| at radius precision.
fn abs_down(z: &Complex) -> Float {
    fdown(z.real().hypot_ref(z.imag()))
}

/// Bound on the rounding error of a complex midpoint computed at its own
/// precision with round-to-nearest: one ulp per component, bounded by
/// 2^(e_max + 1 - p) with e_max the larger exponent.
fn round_err(z: &Complex) -> Float {
    let p = z.prec().0.min(z.prec().1);
    let e_re = z.real().get_exp();
    let e_im = z.imag().get_exp();
    let e = match (e_re, e_im) {
        (None, None) => return Float::with_val(RAD_PREC, 0),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (Some(a), Some(b)) => a.max(b),
    };
    Float::with_val(RAD_PREC, Float::i_exp(1, e + 1 - p as i32))
}

fn round_err_real(x: &Float) -> Float {
    match x.get_exp() {
        None => Float::with_val(RAD_PREC, 0),
        Some(e) => Float::with_val(RAD_PREC, Float::i_exp(1, e + 1 - x.prec() as i32)),
    }
}

fn f_nearest(prec: u32, val: Float) -> Float {
    let mut v = val;
    v.set_prec_round(prec, Round::Nearest);
    v
}

fn c_nearest(prec: u32, val: Complex) -> Complex {
    let mut v = val;
    v.set_prec_round(prec, (Round::Nearest, Round::Nearest));
    v
}

/// A real interval as midpoint and radius.
#[derive(Debug, Clone)]
pub struct RealBall {
    mid: Float,
    rad: Float,
}

impl RealBall {
    pub fn new(mid: Float, rad: Float) -> Self {
        debug_assert!(rad.is_sign_positive() || rad.is_zero());
        let rad = Float::with_val_round(RAD_PREC, &rad, Round::Up).0;
        Self { mid, rad }
    }

    pub fn exact(mid: Float) -> Self {
        Self {
            mid,
            rad: Float::with_val(RAD_PREC, 0),
        }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let mid = Float::with_val(prec, r);
        // the float midpoint is dyadic, so the conversion error is exact
        let err = (r - mid.to_rational().unwrap()).abs();
        let rad = Float::with_val_round(RAD_PREC, &err, Round::Up).0;
        Self::new(mid, rad)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::exact(Float::with_val(prec, v))
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn upper_bound(&self) -> Float {
        fup(&self.mid + &self.rad)
    }

    pub fn lower_bound(&self) -> Float {
        fdown(&self.mid - &self.rad)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let mid = f_nearest(p, Float::with_val(p, &self.mid + &o.mid));
        let rad = fup(&self.rad + &o.rad) + round_err_real(&mid);
        Self::new(mid, rad)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            mid: Float::with_val(self.prec(), -&self.mid),
            rad: self.rad.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let mid = Float::with_val(p, &self.mid * &o.mid);
        let a = fup(self.mid.abs_ref());
        let b = fup(o.mid.abs_ref());
        let mut rad = fup(&a * &o.rad);
        rad += fup(&b * &self.rad);
        rad += fup(&self.rad * &o.rad);
        let rad = fup(&rad + &round_err_real(&mid));
        Self::new(mid, rad)
    }

    /// 1/x; fails when the interval contains 0.
    pub fn recip(&self) -> Result<Self> {
        let m_abs = fdown(self.mid.abs_ref());
        let m_lo = fdown(&m_abs - &self.rad);
        if !(m_lo.is_sign_positive() && !m_lo.is_zero()) {
            return Err(Error::PrecisionExhausted(self.prec()));
        }
        let mid = Float::with_val(self.prec(), self.mid.recip_ref());
        let denom = fdown(&m_abs * &m_lo);
        let rad = fup(&self.rad / &denom) + round_err_real(&mid);
        Ok(Self::new(mid, rad))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    /// Square root; requires the interval to be certainly positive
    /// (or exactly [0,0]).
    pub fn sqrt(&self) -> Result<Self> {
        if self.mid.is_zero() && self.rad.is_zero() {
            return Ok(Self::exact(Float::with_val(self.prec(), 0)));
        }
        let m_lo = self.lower_bound();
        if !(m_lo.is_sign_positive() && !m_lo.is_zero()) {
            return Err(Error::PrecisionExhausted(self.prec()));
        }
        let mid = Float::with_val(self.prec(), self.mid.sqrt_ref());
        // |sqrt(x) - sqrt(m)| <= r / (2 sqrt(m_lo))
        let s_lo = fdown(m_lo.sqrt_ref());
        let denom = fdown(2u32 * &s_lo);
        let rad = fup(&self.rad / &denom) + round_err_real(&mid);
        Ok(Self::new(mid, rad))
    }

    pub fn abs(&self) -> Self {
        Self {
            mid: Float::with_val(self.prec(), self.mid.abs_ref()),
            rad: self.rad.clone(),
        }
    }

    pub fn contains_zero(&self) -> bool {
        fdown(self.mid.abs_ref()) <= self.rad
    }

    /// Exact containment test; midpoint and radius are dyadic rationals.
    pub fn contains_rational(&self, r: &Rational) -> bool {
        let d = (r - self.mid.to_rational().unwrap()).abs();
        d <= self.rad.to_rational().unwrap()
    }

    pub fn certainly_positive(&self) -> bool {
        let lo = self.lower_bound();
        lo.is_sign_positive() && !lo.is_zero()
    }

    pub fn certainly_negative(&self) -> bool {
        let hi = self.upper_bound();
        hi.is_sign_negative() && !hi.is_zero()
    }

    pub fn certainly_lt(&self, o: &Self) -> bool {
        self.upper_bound() < o.lower_bound()
    }

    pub fn certainly_gt(&self, o: &Self) -> bool {
        o.certainly_lt(self)
    }

    /// `self >= o` certified.
    pub fn certainly_ge(&self, o: &Self) -> bool {
        self.lower_bound() >= o.upper_bound()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }
}

/// A complex disk as midpoint and radius.
#[derive(Debug, Clone)]
pub struct ComplexBall {
    mid: Complex,
    rad: Float,
}

impl ComplexBall {
    pub fn new(mid: Complex, rad: Float) -> Self {
        debug_assert!(rad.is_sign_positive() || rad.is_zero());
        let rad = Float::with_val_round(RAD_PREC, &rad, Round::Up).0;
        Self { mid, rad }
    }

    pub fn exact(mid: Complex) -> Self {
        Self {
            mid,
            rad: Float::with_val(RAD_PREC, 0),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Complex::with_val(prec, (0, 0)))
    }

    pub fn one(prec: u32) -> Self {
        Self::exact(Complex::with_val(prec, (1, 0)))
    }

    pub fn i(prec: u32) -> Self {
        Self::exact(Complex::with_val(prec, (0, 1)))
    }

    pub fn from_rationals(re: &Rational, im: &Rational, prec: u32) -> Self {
        let r = RealBall::from_rational(re, prec);
        let i = RealBall::from_rational(im, prec);
        Self::from_parts(&r, &i)
    }

    pub fn from_real(x: &RealBall) -> Self {
        let p = x.prec();
        let mid = Complex::with_val(p, (x.mid().clone(), Float::with_val(p, 0)));
        Self::new(mid, x.rad().clone())
    }

    pub fn from_parts(re: &RealBall, im: &RealBall) -> Self {
        let p = re.prec().max(im.prec());
        let mid = Complex::with_val(p, (re.mid().clone(), im.mid().clone()));
        let rad = fup(re.rad().hypot_ref(im.rad()));
        Self::new(mid, rad)
    }

    pub fn mid(&self) -> &Complex {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec().0
    }

    pub fn re(&self) -> RealBall {
        RealBall::new(self.mid.real().clone(), self.rad.clone())
    }

    pub fn im(&self) -> RealBall {
        RealBall::new(self.mid.imag().clone(), self.rad.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let mid = Complex::with_val(p, &self.mid + &o.mid);
        let rad = fup(&self.rad + &o.rad) + round_err(&mid);
        Self::new(mid, rad)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            mid: Complex::with_val(self.prec(), -&self.mid),
            rad: self.rad.clone(),
        }
    }

    /// Multiplication by i, exact.
    pub fn mul_i(&self) -> Self {
        let p = self.prec();
        let re = Float::with_val(p, -self.mid.imag());
        let im = self.mid.real().clone();
        Self {
            mid: Complex::with_val(p, (re, im)),
            rad: self.rad.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            mid: self.mid.clone().conj(),
            rad: self.rad.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        let mid = Complex::with_val(p, &self.mid * &o.mid);
        let a = abs_up(&self.mid);
        let b = abs_up(&o.mid);
        let mut rad = fup(&a * &o.rad);
        rad += fup(&b * &self.rad);
        rad += fup(&self.rad * &o.rad);
        let rad = fup(&rad + &round_err(&mid));
        Self::new(mid, rad)
    }

    pub fn scale_rational(&self, c: &Rational, prec: u32) -> Self {
        self.mul(&Self::from_rationals(c, &Rational::new(), prec))
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn pow_u32(&self, n: u32) -> Self {
        let mut acc = Self::one(self.prec());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// 1/z; fails when the disk contains 0.
    pub fn recip(&self) -> Result<Self> {
        let m_abs = abs_down(&self.mid);
        let m_lo = fdown(&m_abs - &self.rad);
        if !(m_lo.is_sign_positive() && !m_lo.is_zero()) {
            return Err(Error::PrecisionExhausted(self.prec()));
        }
        let p = self.prec();
        let mid = c_nearest(p, self.mid.clone().recip());
        let denom = fdown(&m_abs * &m_lo);
        let rad = fup(&self.rad / &denom) + round_err(&mid);
        Ok(Self::new(mid, rad))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    /// Distance from the disk center to the closed negative real half-line.
    fn dist_to_neg_axis(&self) -> Float {
        if self.mid.real().is_sign_negative() && !self.mid.real().is_zero() {
            fdown(self.mid.imag().abs_ref())
        } else {
            abs_down(&self.mid)
        }
    }

    fn dist_to_pos_axis(&self) -> Float {
        if self.mid.real().is_sign_positive() && !self.mid.real().is_zero() {
            fdown(self.mid.imag().abs_ref())
        } else {
            abs_down(&self.mid)
        }
    }

    /// Square root on a fixed analytic branch.
    ///
    /// When the disk avoids the closed negative real axis the principal branch
    /// is used. When it instead avoids the closed positive real axis the cut
    /// is rotated there: sqrt(z) = i*sqrt(-z), which agrees with the principal
    /// branch on the upper half plane and on the negative reals. If the disk
    /// meets both half-axes no single analytic branch covers it and the
    /// operation fails; callers raise precision.
    pub fn sqrt(&self) -> Result<Self> {
        if self.dist_to_neg_axis() > self.rad {
            return self.sqrt_principal_unchecked();
        }
        if self.dist_to_pos_axis() > self.rad {
            let w = self.neg().sqrt_principal_unchecked()?;
            return Ok(w.mul_i());
        }
        Err(Error::PrecisionExhausted(self.prec()))
    }

    fn sqrt_principal_unchecked(&self) -> Result<Self> {
        let p = self.prec();
        let m_lo = fdown(&abs_down(&self.mid) - &self.rad);
        if !(m_lo.is_sign_positive() && !m_lo.is_zero()) {
            return Err(Error::PrecisionExhausted(p));
        }
        let mid = c_nearest(p, self.mid.clone().sqrt());
        let s_lo = fdown(m_lo.sqrt_ref());
        let denom = fdown(2u32 * &s_lo);
        let rad = fup(&self.rad / &denom) + round_err(&mid);
        Ok(Self::new(mid, rad))
    }

    /// Natural logarithm on a fixed analytic branch, with the same cut
    /// rotation as `sqrt`.
    pub fn ln(&self) -> Result<Self> {
        if self.dist_to_neg_axis() > self.rad {
            return self.ln_principal_unchecked();
        }
        if self.dist_to_pos_axis() > self.rad {
            // ln(z) = ln(-z) + i*pi, continuous with the upper half plane
            let w = self.neg().ln_principal_unchecked()?;
            let p = self.prec();
            let pi = Float::with_val(p, rug::float::Constant::Pi);
            let ipi = Self::new(
                Complex::with_val(p, (Float::with_val(p, 0), pi)),
                Float::with_val(RAD_PREC, Float::i_exp(1, 2 - p as i32)),
            );
            return Ok(w.add(&ipi));
        }
        Err(Error::PrecisionExhausted(self.prec()))
    }

    fn ln_principal_unchecked(&self) -> Result<Self> {
        let p = self.prec();
        let m_lo = fdown(&abs_down(&self.mid) - &self.rad);
        if !(m_lo.is_sign_positive() && !m_lo.is_zero()) {
            return Err(Error::PrecisionExhausted(p));
        }
        let mid = c_nearest(p, self.mid.clone().ln());
        let rad = fup(&self.rad / &m_lo) + round_err(&mid);
        Ok(Self::new(mid, rad))
    }

    pub fn abs(&self) -> RealBall {
        let p = self.prec();
        let mid = Float::with_val(p, self.mid.real().hypot_ref(self.mid.imag()));
        let rad = fup(&self.rad + &round_err_real(&mid));
        RealBall::new(mid, rad)
    }

    pub fn contains_zero(&self) -> bool {
        abs_down(&self.mid) <= self.rad
    }

    pub fn certainly_nonzero(&self) -> bool {
        let lo = fdown(&abs_down(&self.mid) - &self.rad);
        lo.is_sign_positive() && !lo.is_zero()
    }

    /// Whether the disk contains the exact rational point re + im*i.
    /// The test is exact: midpoint and radius are dyadic rationals.
    pub fn contains_rationals(&self, re: &Rational, im: &Rational) -> bool {
        let dr = (re - self.mid.real().to_rational().unwrap()).abs();
        let di = (im - self.mid.imag().to_rational().unwrap()).abs();
        let d2 = dr.clone() * &dr + di.clone() * &di;
        let r = self.rad.to_rational().unwrap();
        d2 <= r.clone() * &r
    }

    /// Every point of `o` lies within `self`.
    pub fn contains_ball(&self, o: &Self) -> bool {
        let d = abs_up(&Complex::with_val(RAD_PREC, &self.mid - &o.mid));
        fup(&d + &o.rad) <= self.rad
    }

    /// Whether the two disks overlap.
    pub fn overlaps(&self, o: &Self) -> bool {
        let d = abs_down(&Complex::with_val(RAD_PREC, &self.mid - &o.mid));
        d <= fup(&self.rad + &o.rad)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.mid.real().to_f64(), self.mid.imag().to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn add_mul_contain_exact() {
        let a = RealBall::from_rational(&rat(1, 3), 128);
        let b = RealBall::from_rational(&rat(2, 7), 128);
        let s = a.add(&b);
        assert!(s.contains_rational(&rat(13, 21)));
        let p = a.mul(&b);
        assert!(p.contains_rational(&rat(2, 21)));
    }

    #[test]
    fn recip_contains_exact() {
        let a = RealBall::from_rational(&rat(3, 7), 128);
        let r = a.recip().unwrap();
        assert!(r.contains_rational(&rat(7, 3)));
    }

    #[test]
    fn complex_mul_contains_exact() {
        // (1/3 + 2i) * (5 - i/7) = 41/21 + i*209/21
        let a = ComplexBall::from_rationals(&rat(1, 3), &rat(2, 1), 128);
        let b = ComplexBall::from_rationals(&rat(5, 1), &rat(-1, 7), 128);
        let p = a.mul(&b);
        assert!(p.contains_rationals(&rat(41, 21), &rat(209, 21)));
    }

    #[test]
    fn sqrt_principal() {
        let z = ComplexBall::from_rationals(&rat(2, 1), &rat(0, 1), 128);
        let s = z.sqrt().unwrap();
        let sq = s.sqr();
        assert!(sq.contains_rationals(&rat(2, 1), &rat(0, 1)));
    }

    #[test]
    fn sqrt_negative_real_uses_rotated_cut() {
        let z = ComplexBall::from_rationals(&rat(-5, 1), &rat(0, 1), 128);
        let s = z.sqrt().unwrap();
        // principal value i*sqrt(5)
        assert!(s.mid().imag().to_f64() > 2.2);
        assert!(s.mid().real().to_f64().abs() < 1e-30);
        assert!(s.sqr().contains_rationals(&rat(-5, 1), &rat(0, 1)));
    }

    #[test]
    fn sqrt_near_origin_fails() {
        let z = ComplexBall::new(
            Complex::with_val(64, (0, 0)),
            Float::with_val(RAD_PREC, 0.25),
        );
        assert!(z.sqrt().is_err());
    }

    #[test]
    fn ln_of_i() {
        let z = ComplexBall::i(128);
        let l = z.ln().unwrap();
        // ln(i) = i*pi/2
        assert!((l.mid().imag().to_f64() - std::f64::consts::FRAC_PI_2).abs() < 1e-20);
        assert!(l.mid().real().to_f64().abs() < 1e-20);
    }

    #[test]
    fn certified_comparisons() {
        let a = RealBall::from_rational(&rat(1, 3), 128);
        let b = RealBall::from_rational(&rat(1, 2), 128);
        assert!(a.certainly_lt(&b));
        assert!(!b.certainly_lt(&a));
        assert!(b.certainly_positive());
        assert!(a.neg().certainly_negative());
    }

    #[test]
    fn real_sqrt() {
        let a = RealBall::from_rational(&rat(2, 1), 128);
        let s = a.sqrt().unwrap();
        let sq = s.mul(&s);
        assert!(sq.contains_rational(&rat(2, 1)));
    }
}
