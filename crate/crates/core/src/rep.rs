//! The SL(2,C) representation of a group generated by three half-turns,
//! parametrized by rho_k = -2 cosh(mu_k) for the three pairwise complex
//! distances between the axes.
//!
//! With beta^2 a root of z + 1/z = -rho_0 chosen so |beta| >= 1:
//!   A = [[0, i/beta], [i beta, 0]]
//!   B = [[0, i beta], [i/beta, 0]]
//!   C = [[c11, c12], [c21, -c11]]
//! where c21 = (rho1/beta - rho2 beta) / (i/beta^2 - i beta^2),
//!       c12 = (-rho1 beta + rho2/beta) / (i/beta^2 - i beta^2),
//!       c11 = i sqrt(c12 c21 + 1),
//! which gives det C = -c11^2 - c12 c21 = 1 and trace round-trips
//! tr(AB) = rho0, tr(AC) = rho1, tr(BC) = rho2.

use rug::Rational;

use crate::ball::{ComplexBall, RealBall};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::Precision;

/// 2x2 matrix of complex balls.
#[derive(Debug, Clone)]
pub struct BallMatrix2 {
    pub e: [[ComplexBall; 2]; 2],
}

impl BallMatrix2 {
    pub fn new(m11: ComplexBall, m12: ComplexBall, m21: ComplexBall, m22: ComplexBall) -> Self {
        Self {
            e: [[m11, m12], [m21, m22]],
        }
    }

    pub fn identity(bits: u32) -> Self {
        Self::new(
            ComplexBall::one(bits),
            ComplexBall::zero(bits),
            ComplexBall::zero(bits),
            ComplexBall::one(bits),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = |i: usize, j: usize| {
            self.e[i][0]
                .mul(&o.e[0][j])
                .add(&self.e[i][1].mul(&o.e[1][j]))
        };
        Self::new(p(0, 0), p(0, 1), p(1, 0), p(1, 1))
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.e[0][0].neg(),
            self.e[0][1].neg(),
            self.e[1][0].neg(),
            self.e[1][1].neg(),
        )
    }

    pub fn trace(&self) -> ComplexBall {
        self.e[0][0].add(&self.e[1][1])
    }

    pub fn det(&self) -> ComplexBall {
        self.e[0][0]
            .mul(&self.e[1][1])
            .sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    /// Largest entry radius, as a quick quality measure.
    pub fn max_radius(&self) -> rug::Float {
        let mut r = self.e[0][0].rad().clone();
        for row in &self.e {
            for x in row {
                if *x.rad() > r {
                    r = x.rad().clone();
                }
            }
        }
        r
    }
}

/// A half-turn: trace contains 0, determinant contains 1, M^2 = -I.
/// The inverse of a line matrix is its exact negation.
#[derive(Debug, Clone)]
pub struct LineMatrix(pub BallMatrix2);

impl LineMatrix {
    pub fn matrix(&self) -> &BallMatrix2 {
        &self.0
    }

    pub fn inverse(&self) -> LineMatrix {
        LineMatrix(self.0.neg())
    }
}

/// Two boundary fixed points of a half-turn.
#[derive(Debug, Clone)]
pub enum FixedPoints {
    Finite(ComplexBall, ComplexBall),
    /// one fixed point at infinity, the other at -m12/(2 m11)
    WithInfinity(ComplexBall),
}

/// A Euclidean circle on the boundary plane.
#[derive(Debug, Clone)]
pub struct Circle {
    pub center: ComplexBall,
    pub radius: RealBall,
}

/// Parameters (rho0, rho1, rho2), exact over a number field or numeric.
#[derive(Debug, Clone)]
pub enum Params {
    Exact {
        rho0: FieldElement,
        rho1: FieldElement,
        rho2: FieldElement,
    },
    Numeric {
        rho0: ComplexBall,
        rho1: ComplexBall,
        rho2: ComplexBall,
    },
}

impl Params {
    pub fn exact(rho0: FieldElement, rho1: FieldElement, rho2: FieldElement) -> Result<Self> {
        if rho0.field() != rho1.field() || rho0.field() != rho2.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(Self::Exact { rho0, rho1, rho2 })
    }

    pub fn regular_exact(rho: FieldElement) -> Self {
        Self::Exact {
            rho0: rho.clone(),
            rho1: rho.clone(),
            rho2: rho,
        }
    }

    pub fn numeric(rho0: ComplexBall, rho1: ComplexBall, rho2: ComplexBall) -> Self {
        Self::Numeric { rho0, rho1, rho2 }
    }

    pub fn regular_numeric(rho: ComplexBall) -> Self {
        Self::Numeric {
            rho0: rho.clone(),
            rho1: rho.clone(),
            rho2: rho,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact { .. })
    }

    pub fn is_regular(&self) -> bool {
        match self {
            Self::Exact { rho0, rho1, rho2 } => rho0 == rho1 && rho0 == rho2,
            Self::Numeric { .. } => false,
        }
    }

    /// Embedded (or given) parameter balls at the requested precision.
    pub fn balls(&self, bits: u32) -> Result<[ComplexBall; 3]> {
        match self {
            Self::Exact { rho0, rho1, rho2 } => Ok([
                rho0.embed(bits)?,
                rho1.embed(bits)?,
                rho2.embed(bits)?,
            ]),
            Self::Numeric { rho0, rho1, rho2 } => {
                Ok([rho0.clone(), rho1.clone(), rho2.clone()])
            }
        }
    }

    /// Does rho0 equal +2 or -2? Exact in exact mode; in numeric mode a ball
    /// merely containing +-2 counts as degenerate (cannot be separated).
    fn rho0_degenerate(&self) -> bool {
        match self {
            Self::Exact { rho0, .. } => {
                let two = Rational::from(2);
                rho0.is_rational()
                    .map(|c| c.abs() == two)
                    .unwrap_or(false)
            }
            Self::Numeric { rho0, .. } => {
                let two = Rational::from(2);
                rho0.contains_rationals(&two, &Rational::new())
                    || rho0.contains_rationals(&-two, &Rational::new())
            }
        }
    }
}

/// The built triple together with the internals of the construction.
#[derive(Debug, Clone)]
pub struct HalfTurnTriple {
    pub a: LineMatrix,
    pub b: LineMatrix,
    pub c: LineMatrix,
    pub beta: ComplexBall,
    pub c11: ComplexBall,
    pub c12: ComplexBall,
    pub c21: ComplexBall,
    pub params: Params,
    pub bits: u32,
}

impl HalfTurnTriple {
    pub fn generator(&self, letter: char) -> Option<&LineMatrix> {
        match letter {
            'a' => Some(&self.a),
            'b' => Some(&self.b),
            'c' => Some(&self.c),
            _ => None,
        }
    }
}

/// Build the representation from the three parameters.
pub fn build_representation(p: &Params, precision: &Precision) -> Result<HalfTurnTriple> {
    if p.rho0_degenerate() {
        return Err(Error::DegenerateParams);
    }
    precision.escalate(|bits| build_at(p, bits))
}

fn build_at(p: &Params, bits: u32) -> Result<HalfTurnTriple> {
    let [rho0, rho1, rho2] = p.balls(bits)?;
    let four = ComplexBall::from_rationals(&Rational::from(4), &Rational::new(), bits);
    let disc = rho0.sqr().sub(&four);
    let s = disc.sqrt()?;
    let half = Rational::from((1, 2));
    let mut beta2 = rho0.neg().add(&s).scale_rational(&half, bits);
    // enforce |beta| >= 1: the two roots of z + 1/z = -rho0 are reciprocal
    let one = RealBall::from_i64(1, bits);
    if beta2.abs().certainly_lt(&one) {
        beta2 = rho0.neg().sub(&s).scale_rational(&half, bits);
    }
    let beta = beta2.sqrt()?;
    let inv_beta = beta.recip()?;
    let inv_beta2 = beta2.recip()?;

    let a = LineMatrix(BallMatrix2::new(
        ComplexBall::zero(bits),
        inv_beta.mul_i(),
        beta.mul_i(),
        ComplexBall::zero(bits),
    ));
    let b = LineMatrix(BallMatrix2::new(
        ComplexBall::zero(bits),
        beta.mul_i(),
        inv_beta.mul_i(),
        ComplexBall::zero(bits),
    ));

    // denominator i/beta^2 - i beta^2; nonzero since rho0 != +-2
    let denom = inv_beta2.sub(&beta2).mul_i();
    if !denom.certainly_nonzero() {
        return Err(Error::PrecisionExhausted(bits));
    }
    let c21 = rho1.mul(&inv_beta).sub(&rho2.mul(&beta)).div(&denom)?;
    let c12 = rho2.mul(&inv_beta).sub(&rho1.mul(&beta)).div(&denom)?;
    let c11 = c12
        .mul(&c21)
        .add(&ComplexBall::one(bits))
        .sqrt()?
        .mul_i();
    let c = LineMatrix(BallMatrix2::new(
        c11.clone(),
        c12.clone(),
        c21.clone(),
        c11.neg(),
    ));

    Ok(HalfTurnTriple {
        a,
        b,
        c,
        beta,
        c11,
        c12,
        c21,
        params: p.clone(),
        bits,
    })
}

/// The regular case rho0 = rho1 = rho2 = rho, via the simplified formulas
/// c12 = c21 = i (1/beta^2 + beta^2)/(1/beta + beta).
pub fn build_regular(p: &Params, precision: &Precision) -> Result<HalfTurnTriple> {
    if p.rho0_degenerate() {
        return Err(Error::DegenerateParams);
    }
    precision.escalate(|bits| build_regular_at(p, bits))
}

fn build_regular_at(p: &Params, bits: u32) -> Result<HalfTurnTriple> {
    let [rho, _, _] = p.balls(bits)?;
    let four = ComplexBall::from_rationals(&Rational::from(4), &Rational::new(), bits);
    let s = rho.sqr().sub(&four).sqrt()?;
    let half = Rational::from((1, 2));
    let mut beta2 = rho.neg().add(&s).scale_rational(&half, bits);
    let one = RealBall::from_i64(1, bits);
    if beta2.abs().certainly_lt(&one) {
        beta2 = rho.neg().sub(&s).scale_rational(&half, bits);
    }
    let beta = beta2.sqrt()?;
    let inv_beta = beta.recip()?;
    let inv_beta2 = beta2.recip()?;

    let a = LineMatrix(BallMatrix2::new(
        ComplexBall::zero(bits),
        inv_beta.mul_i(),
        beta.mul_i(),
        ComplexBall::zero(bits),
    ));
    let b = LineMatrix(BallMatrix2::new(
        ComplexBall::zero(bits),
        beta.mul_i(),
        inv_beta.mul_i(),
        ComplexBall::zero(bits),
    ));

    let sum = inv_beta.add(&beta);
    if !sum.certainly_nonzero() {
        return Err(Error::PrecisionExhausted(bits));
    }
    let c21 = inv_beta2.add(&beta2).div(&sum)?.mul_i();
    let c12 = c21.clone();
    let c11 = c12
        .mul(&c21)
        .add(&ComplexBall::one(bits))
        .sqrt()?
        .mul_i();
    let c = LineMatrix(BallMatrix2::new(
        c11.clone(),
        c12.clone(),
        c21.clone(),
        c11.neg(),
    ));

    Ok(HalfTurnTriple {
        a,
        b,
        c,
        beta,
        c11,
        c12,
        c21,
        params: p.clone(),
        bits,
    })
}

/// tr(M1 M2), the rho-parameter of the pair of axes.
pub fn rho_of(m1: &LineMatrix, m2: &LineMatrix) -> ComplexBall {
    m1.matrix().mul(m2.matrix()).trace()
}

/// Complex distance mu between the axes: cosh(mu) = -tr(M1 M2)/2, with
/// Re(mu) >= 0 and Im(mu) normalized into [0, 2*pi).
pub fn complex_distance(m1: &LineMatrix, m2: &LineMatrix, bits: u32) -> Result<ComplexBall> {
    let tr = rho_of(m1, m2);
    let two = Rational::from(2);
    if tr.contains_rationals(&two, &Rational::new())
        || tr.contains_rationals(&-two.clone(), &Rational::new())
    {
        return Err(Error::DegenerateLines);
    }
    let z = tr.scale_rational(&Rational::from((-1, 2)), bits);
    // acosh(z) = ln(z + sqrt(z^2 - 1))
    let one = ComplexBall::one(bits);
    let mut mu = z.sqr().sub(&one).sqrt()?.add(&z).ln()?;
    if mu.re().certainly_negative() {
        mu = mu.neg();
    }
    // shift the imaginary part into [0, 2*pi); the ball for 2*pi uses a
    // generous 8-ulp radius, which is sound (only containment matters)
    let two_pi = {
        let mut mid = rug::Float::with_val(bits, rug::float::Constant::Pi);
        mid *= 2u32;
        let rad = rug::Float::with_val(64, rug::Float::i_exp(1, -(bits as i32) + 5));
        RealBall::new(mid, rad)
    };
    let mut guard = 0;
    while mu.im().certainly_negative() && guard < 8 {
        mu = mu.add(&ComplexBall::from_parts(&RealBall::from_i64(0, bits), &two_pi));
        guard += 1;
    }
    while mu.im().certainly_ge(&two_pi) && guard < 16 {
        mu = mu.sub(&ComplexBall::from_parts(&RealBall::from_i64(0, bits), &two_pi));
        guard += 1;
    }
    Ok(mu)
}

/// The two boundary fixed points (m11 +- i)/m21 of a half-turn; with
/// det = 1 and trace 0 these are exactly the roots of
/// m21 z^2 - 2 m11 z - m12 = 0.
pub fn fixed_points(m: &LineMatrix, bits: u32) -> Result<FixedPoints> {
    let m11 = &m.matrix().e[0][0];
    let m12 = &m.matrix().e[0][1];
    let m21 = &m.matrix().e[1][0];
    if m21.mid().real().is_zero() && m21.mid().imag().is_zero() && m21.rad().is_zero() {
        // exactly upper triangular: one fixed point at infinity
        let two = Rational::from(2);
        let other = m12.neg().div(&m11.scale_rational(&two, bits))?;
        return Ok(FixedPoints::WithInfinity(other));
    }
    if !m21.certainly_nonzero() {
        return Err(Error::PrecisionExhausted(bits));
    }
    let i = ComplexBall::i(bits);
    let p1 = m11.add(&i).div(m21)?;
    let p2 = m11.sub(&i).div(m21)?;
    Ok(FixedPoints::Finite(p1, p2))
}

/// The invariant circle whose diameter joins the two fixed points:
/// center m11/m21, radius |1/m21|.
pub fn diameter_circle(m: &LineMatrix, bits: u32) -> Result<Circle> {
    let m11 = &m.matrix().e[0][0];
    let m21 = &m.matrix().e[1][0];
    if m21.mid().real().is_zero() && m21.mid().imag().is_zero() && m21.rad().is_zero() {
        return Err(Error::DegenerateCircle);
    }
    if !m21.certainly_nonzero() {
        return Err(Error::PrecisionExhausted(bits));
    }
    let center = m11.div(m21)?;
    let radius = m21.recip()?.abs();
    Ok(Circle { center, radius })
}

/// Recover parameters from two-generator trace data (t0, t1, t01) =
/// (tr g0, tr g1, tr(g0 g1^-1)) for g0 = ab, g1 = ac:
/// (rho0, rho1, rho2) = (t0, t1, -t01), using tr(g0 g1^-1) = -tr(BC).
/// The triple is well-defined only up to the sign changes induced by
/// re-lifting the generators (flipping one lift negates two of the rhos).
pub fn params_from_two_generator(
    t0: ComplexBall,
    t1: ComplexBall,
    t01: ComplexBall,
) -> Params {
    Params::Numeric {
        rho0: t0,
        rho1: t1,
        rho2: t01.neg(),
    }
}

pub fn params_from_two_generator_exact(
    t0: FieldElement,
    t1: FieldElement,
    t01: FieldElement,
) -> Result<Params> {
    let rho2 = t01.neg();
    Params::exact(t0, t1, rho2)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use crate::field::NumberField;

    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn fig5_rho() -> (Arc<NumberField>, FieldElement) {
        // rho = -1/2 + sqrt(-3)/2 in Q(sqrt(-3))
        let k = NumberField::imaginary_quadratic(3, &Precision::default()).unwrap();
        let rho = k
            .from_rational(q(-1, 2))
            .add(&k.generator().scale(&q(1, 2)))
            .unwrap();
        (k, rho)
    }

    fn check_line_matrix(m: &LineMatrix) {
        let tr = m.matrix().trace();
        assert!(tr.contains_rationals(&Rational::new(), &Rational::new()));
        let det = m.matrix().det();
        assert!(det.contains_rationals(&Rational::from(1), &Rational::new()));
        // M^2 = -I
        let sq = m.matrix().mul(m.matrix());
        assert!(sq.e[0][0].contains_rationals(&Rational::from(-1), &Rational::new()));
        assert!(sq.e[0][1].contains_rationals(&Rational::new(), &Rational::new()));
    }

    #[test]
    fn traces_round_trip_fig5() {
        let (_, rho) = fig5_rho();
        let p = Params::regular_exact(rho.clone());
        let t = build_representation(&p, &Precision::default()).unwrap();
        let rho_ball = rho.embed(128).unwrap();
        for pair in [
            rho_of(&t.a, &t.b),
            rho_of(&t.a, &t.c),
            rho_of(&t.b, &t.c),
        ] {
            assert!(pair.overlaps(&rho_ball));
            assert!(pair.sub(&rho_ball).contains_zero());
        }
        check_line_matrix(&t.a);
        check_line_matrix(&t.b);
        check_line_matrix(&t.c);
    }

    #[test]
    fn real_params_round_trip() {
        let k = NumberField::rationals();
        let p = Params::regular_exact(k.from_rational(q(-3, 1)));
        let t = build_representation(&p, &Precision::default()).unwrap();
        let m3 = Rational::from(-3);
        assert!(rho_of(&t.a, &t.b).contains_rationals(&m3, &Rational::new()));
        assert!(rho_of(&t.b, &t.c).contains_rationals(&m3, &Rational::new()));
        check_line_matrix(&t.c);
    }

    #[test]
    fn degenerate_rho0_rejected() {
        let k = NumberField::rationals();
        let p = Params::regular_exact(k.from_rational(q(2, 1)));
        assert!(matches!(
            build_representation(&p, &Precision::default()),
            Err(Error::DegenerateParams)
        ));
        let p = Params::regular_exact(k.from_rational(q(-2, 1)));
        assert!(matches!(
            build_representation(&p, &Precision::default()),
            Err(Error::DegenerateParams)
        ));
    }

    #[test]
    fn regular_agrees_with_general() {
        let (_, rho) = fig5_rho();
        let p = Params::regular_exact(rho);
        let prec = Precision::default();
        let g = build_representation(&p, &prec).unwrap();
        let r = build_regular(&p, &prec).unwrap();
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!(g.c.matrix().e[i][j].overlaps(&r.c.matrix().e[i][j]));
        }
        assert!(r.c12.overlaps(&r.c21));
    }

    #[test]
    fn fixed_points_of_a_are_reciprocal_beta() {
        let k = NumberField::rationals();
        let p = Params::regular_exact(k.from_rational(q(-7, 1)));
        let t = build_regular(&p, &Precision::default()).unwrap();
        match fixed_points(&t.a, t.bits).unwrap() {
            FixedPoints::Finite(p1, p2) => {
                let inv_beta = t.beta.recip().unwrap();
                // {1/beta, -1/beta}
                let hits = [&p1, &p2];
                assert!(hits.iter().any(|p| p.overlaps(&inv_beta)));
                assert!(hits.iter().any(|p| p.overlaps(&inv_beta.neg())));
            }
            _ => panic!("A has finite fixed points"),
        }
    }

    #[test]
    fn fixed_points_diagonal_matrix() {
        let bits = 64;
        let m = LineMatrix(BallMatrix2::new(
            ComplexBall::i(bits),
            ComplexBall::zero(bits),
            ComplexBall::zero(bits),
            ComplexBall::i(bits).neg(),
        ));
        match fixed_points(&m, bits).unwrap() {
            FixedPoints::WithInfinity(z) => {
                assert!(z.contains_rationals(&Rational::new(), &Rational::new()));
            }
            _ => panic!("expected a fixed point at infinity"),
        }
        assert!(matches!(
            diameter_circle(&m, bits),
            Err(Error::DegenerateCircle)
        ));
    }

    #[test]
    fn diameter_circles_of_regular_triple() {
        let k = NumberField::rationals();
        let p = Params::regular_exact(k.from_rational(q(-7, 1)));
        let t = build_regular(&p, &Precision::default()).unwrap();
        let c0 = diameter_circle(&t.a, t.bits).unwrap();
        let c1 = diameter_circle(&t.b, t.bits).unwrap();
        // A: center 0, radius 1/|beta|; B: center 0, radius |beta|
        assert!(c0.center.contains_rationals(&Rational::new(), &Rational::new()));
        assert!(c1.center.contains_rationals(&Rational::new(), &Rational::new()));
        assert!(c0.radius.certainly_lt(&c1.radius));
        // radius is half the distance between the two fixed points
        if let FixedPoints::Finite(p1, p2) = fixed_points(&t.c, t.bits).unwrap() {
            let half_dist = p1
                .sub(&p2)
                .abs()
                .mul(&RealBall::from_rational(&q(1, 2), t.bits));
            let c2 = diameter_circle(&t.c, t.bits).unwrap();
            let diff = c2.radius.sub(&half_dist);
            assert!(diff.contains_zero() || diff.abs().upper_bound() < 1e-20);
        } else {
            panic!("C has finite fixed points");
        }
    }

    #[test]
    fn complex_distance_orthogonal_lines() {
        let bits = 128;
        let m1 = LineMatrix(BallMatrix2::new(
            ComplexBall::i(bits),
            ComplexBall::zero(bits),
            ComplexBall::zero(bits),
            ComplexBall::i(bits).neg(),
        ));
        let m2 = LineMatrix(BallMatrix2::new(
            ComplexBall::zero(bits),
            ComplexBall::i(bits),
            ComplexBall::i(bits),
            ComplexBall::zero(bits),
        ));
        // tr(M1 M2) = 0 so cosh(mu) = 0: mu = i*pi/2
        let mu = complex_distance(&m1, &m2, bits).unwrap();
        assert!(mu.re().contains_zero());
        let half_pi = rug::Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
        let diff = mu.im().sub(&RealBall::exact(half_pi));
        assert!(diff.contains_zero());
    }

    #[test]
    fn identical_lines_are_degenerate() {
        let (_, rho) = fig5_rho();
        let p = Params::regular_exact(rho);
        let t = build_representation(&p, &Precision::default()).unwrap();
        assert!(matches!(
            complex_distance(&t.a, &t.a, t.bits),
            Err(Error::DegenerateLines)
        ));
    }

    #[test]
    fn two_generator_round_trip() {
        let (_, rho) = fig5_rho();
        let p = Params::regular_exact(rho.clone());
        let t = build_representation(&p, &Precision::default()).unwrap();
        let g0 = t.a.matrix().mul(t.b.matrix());
        let g1 = t.a.matrix().mul(t.c.matrix());
        let g1_inv = BallMatrix2::new(
            g1.e[1][1].clone(),
            g1.e[0][1].neg(),
            g1.e[1][0].neg(),
            g1.e[0][0].clone(),
        );
        let recovered = params_from_two_generator(
            g0.trace(),
            g1.trace(),
            g0.mul(&g1_inv).trace(),
        );
        let rho_ball = rho.embed(128).unwrap();
        let [r0, r1, r2] = recovered.balls(128).unwrap();
        assert!(r0.overlaps(&rho_ball));
        assert!(r1.overlaps(&rho_ball));
        assert!(r2.overlaps(&rho_ball));
    }
}
