//! Certified isolation of the complex roots of an integer polynomial.
//!
//! Strategy: run Durand-Kerner at working precision to get floating
//! approximations, then certify each with the inclusion disk of radius
//! n*|f(z)/f'(z)| (every such disk contains at least one root, since
//! f'/f = sum 1/(z - r_j) gives |f'(z)/f(z)| <= n / min_j |z - r_j|).
//! When the n disks are pairwise disjoint, each holds exactly one root.
//! Failure at one precision escalates to the next.

use rug::float::Round;
use rug::{Complex, Float};

use crate::ball::{ComplexBall, RAD_PREC};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::Precision;

/// Isolate all complex roots of a squarefree polynomial. Each returned ball
/// contains exactly one root of `p`; together they cover all roots.
pub fn isolate_roots(p: &IntPolynomial, precision: &Precision) -> Result<Vec<ComplexBall>> {
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    if !p.is_squarefree() {
        return Err(Error::NonSquarefree);
    }
    precision.escalate(|bits| isolate_at(p, bits))
}

fn isolate_at(p: &IntPolynomial, bits: u32) -> Result<Vec<ComplexBall>> {
    let approx = durand_kerner(p, bits);
    let disks: Vec<ComplexBall> = approx
        .iter()
        .map(|z| inclusion_disk(p, z, bits))
        .collect::<Result<_>>()?;
    if pairwise_disjoint(&disks) {
        Ok(disks)
    } else {
        Err(Error::PrecisionExhausted(bits))
    }
}

/// Inclusion disk centered at the exact point `z` with certified radius
/// bounding the distance to the nearest root.
fn inclusion_disk(p: &IntPolynomial, z: &Complex, bits: u32) -> Result<ComplexBall> {
    let n = p.degree() as u32;
    let zb = ComplexBall::exact(z.clone());
    let fz = p.eval_complex_ball(&zb, bits);
    let fpz = p.derivative().eval_complex_ball(&zb, bits);
    if fpz.contains_zero() {
        return Err(Error::PrecisionExhausted(bits));
    }
    let ratio = fz.div(&fpz)?.abs();
    let rad = Float::with_val_round(RAD_PREC, ratio.upper_bound() * n, Round::Up).0;
    Ok(ComplexBall::new(z.clone(), rad))
}

fn pairwise_disjoint(disks: &[ComplexBall]) -> bool {
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            let d = ComplexBall::exact(disks[i].mid().clone())
                .sub(&ComplexBall::exact(disks[j].mid().clone()))
                .abs()
                .lower_bound();
            let rsum = Float::with_val_round(RAD_PREC, disks[i].rad() + disks[j].rad(), Round::Up).0;
            if !(d > rsum) {
                return false;
            }
        }
    }
    true
}

/// Durand-Kerner simultaneous iteration at the given precision.
fn durand_kerner(p: &IntPolynomial, bits: u32) -> Vec<Complex> {
    let n = p.degree();
    let lead = Complex::with_val(bits, p.leading().unwrap());
    let coeffs: Vec<Complex> = p
        .coeffs()
        .iter()
        .map(|c| Complex::with_val(bits, c))
        .collect();
    let eval = |z: &Complex| -> Complex {
        let mut acc = Complex::with_val(bits, 0);
        for c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // non-real seed spiral inside the Cauchy root bound
    let bound = Float::with_val(bits, p.root_bound());
    let seed = Complex::with_val(bits, (0.4, 0.9));
    let mut z: Vec<Complex> = Vec::with_capacity(n);
    let mut cur = Complex::with_val(bits, &seed * &bound);
    for _ in 0..n {
        z.push(cur.clone());
        cur *= &seed;
        cur += Complex::with_val(bits, (0.25, 0.35));
    }
    let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 8));
    let max_iters = 100 + 4 * bits as usize;
    for _ in 0..max_iters {
        let mut max_step = Float::with_val(bits, 0);
        for k in 0..n {
            let mut denom = lead.clone();
            for j in 0..n {
                if j != k {
                    denom *= Complex::with_val(bits, &z[k] - &z[j]);
                }
            }
            if denom.real().is_zero() && denom.imag().is_zero() {
                // coincident iterates; nudge and continue
                z[k] += Complex::with_val(bits, (1e-3, 2e-3));
                continue;
            }
            let step = eval(&z[k]) / denom;
            let mag = step.clone().abs().into_real_imag().0;
            if mag > max_step {
                max_step = mag;
            }
            z[k] -= step;
        }
        if max_step < tol {
            break;
        }
    }
    z
}

/// Re-certify a root at higher precision: polish the center with Newton
/// steps, rebuild the inclusion disk, and check it still lies inside the
/// original isolating disk (so it encloses the *same* root).
pub fn refine_root(p: &IntPolynomial, isolating: &ComplexBall, bits: u32) -> Result<ComplexBall> {
    let coeffs: Vec<Complex> = p
        .coeffs()
        .iter()
        .map(|c| Complex::with_val(bits, c))
        .collect();
    let dcoeffs: Vec<Complex> = p
        .derivative()
        .coeffs()
        .iter()
        .map(|c| Complex::with_val(bits, c))
        .collect();
    let horner = |cs: &[Complex], z: &Complex| -> Complex {
        let mut acc = Complex::with_val(bits, 0);
        for c in cs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let mut z = Complex::with_val(bits, isolating.mid());
    let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 8));
    for _ in 0..(bits as usize) {
        let fp = horner(&dcoeffs, &z);
        if fp.real().is_zero() && fp.imag().is_zero() {
            return Err(Error::PrecisionExhausted(bits));
        }
        let step = horner(&coeffs, &z) / fp;
        let mag = step.clone().abs().into_real_imag().0;
        z -= step;
        if mag < tol {
            break;
        }
    }
    let disk = inclusion_disk(p, &z, bits)?;
    if isolating.contains_ball(&disk) {
        Ok(disk)
    } else {
        Err(Error::PrecisionExhausted(bits))
    }
}

#[cfg(test)]
mod tests {
    use rug::Rational;

    use super::*;

    #[test]
    fn isolates_quadratic_roots() {
        // t^2 + 1: roots +-i
        let p = IntPolynomial::from_i64(&[1, 0, 1]);
        let disks = isolate_roots(&p, &Precision::default()).unwrap();
        assert_eq!(disks.len(), 2);
        let zero = Rational::new();
        let one = Rational::from(1);
        let found_i = disks
            .iter()
            .any(|d| d.contains_rationals(&zero, &one));
        let found_minus_i = disks
            .iter()
            .any(|d| d.contains_rationals(&zero, &Rational::from(-1)));
        assert!(found_i && found_minus_i);
    }

    #[test]
    fn isolates_mixed_real_complex() {
        // t^3 - 2: one real root, one conjugate pair
        let p = IntPolynomial::from_i64(&[-2, 0, 0, 1]);
        let disks = isolate_roots(&p, &Precision::default()).unwrap();
        assert_eq!(disks.len(), 3);
        let real_count = disks
            .iter()
            .filter(|d| d.im().contains_zero())
            .count();
        assert_eq!(real_count, 1);
    }

    #[test]
    fn rejects_nonsquarefree() {
        let p = IntPolynomial::from_i64(&[1, 2, 1]); // (t+1)^2
        assert!(matches!(
            isolate_roots(&p, &Precision::default()),
            Err(Error::NonSquarefree)
        ));
    }

    #[test]
    fn refine_shrinks_radius() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]); // t^2 - 2
        let disks = isolate_roots(&p, &Precision::new(64, 64)).unwrap();
        for d in &disks {
            let refined = refine_root(&p, d, 256).unwrap();
            assert!(refined.rad() < d.rad() || d.rad().is_zero());
            assert!(d.contains_ball(&refined));
        }
    }

    #[test]
    fn high_degree_cyclotomic() {
        // Phi_12 = t^4 - t^2 + 1, four roots on the unit circle
        let p = IntPolynomial::from_i64(&[1, 0, -1, 0, 1]);
        let disks = isolate_roots(&p, &Precision::default()).unwrap();
        assert_eq!(disks.len(), 4);
        for d in &disks {
            let m = d.abs();
            assert!(m.contains_rational(&Rational::from(1)));
        }
    }
}
