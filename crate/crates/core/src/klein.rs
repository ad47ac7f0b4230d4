//! Free-product detection via invariant circles (Klein combination), the
//! annulus bounds R1, R2 with their critical constants beta*, rho*, and the
//! conjecture scanner over parameter boxes.
//!
//! For a regular group normalized as in the representation module, the
//! invariant circle of C has radius r = 1/|c21| <= phi(|beta|) with
//! phi(x) = (1 + 1/x^2)/(x (1 - 1/x^4)). The circle stays inside the
//! annulus [R1(|beta|), R2(|beta|)] where R1 = sqrt(|1 - phi^2|) - phi and
//! R2 = sqrt(|1 + phi^2|) + phi. The splitting constant beta* is where the
//! annulus first clears the concentric circles of A and B (radii 1/x and
//! x), i.e. the relevant root of R1(x) = 1/x or R2(x) = x on [2, 4];
//! rho* = 1/beta*^2 + beta*^2, which the source rounds to 6.4.

use rand::{Rng, SeedableRng};
use rug::{Complete, Rational};

use crate::ball::{ComplexBall, RealBall};
use crate::error::{Error, Result};
use crate::rep::{build_representation, diameter_circle, Circle, HalfTurnTriple, Params};
use crate::Precision;

/// The annulus data at a given x = |beta|.
#[derive(Debug, Clone)]
pub struct AnnulusBounds {
    pub phi: RealBall,
    pub r1: RealBall,
    pub r2: RealBall,
}

/// phi(x) as an exact rational, for rational x > 1.
pub fn phi_exact(x: &Rational) -> Rational {
    let x2 = Rational::from(x * x);
    let x4 = Rational::from(&x2 * &x2);
    let num = Rational::from(1) + Rational::from(1) / &x2;
    let den = Rational::from(x * &(Rational::from(1) - Rational::from(1) / &x4));
    num / den
}

pub fn annulus_bounds(x: &RealBall, bits: u32) -> Result<AnnulusBounds> {
    let one = RealBall::from_i64(1, bits);
    let x2 = x.mul(x);
    let inv_x2 = x2.recip()?;
    let inv_x4 = inv_x2.mul(&inv_x2);
    let phi = one.add(&inv_x2).div(&x.mul(&one.sub(&inv_x4)))?;
    let phi2 = phi.mul(&phi);
    let r1 = one.sub(&phi2).abs().sqrt()?.sub(&phi);
    let r2 = one.add(&phi2).abs().sqrt()?.add(&phi);
    Ok(AnnulusBounds { phi, r1, r2 })
}

/// The rounded splitting constant 6.4 as an exact rational.
pub fn rho_star_rounded() -> Rational {
    Rational::from((32, 5))
}

#[derive(Debug, Clone)]
pub struct SplitConstants {
    pub beta_star: RealBall,
    pub rho_star_computed: RealBall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoStarChoice {
    /// the traditional rounded constant 6.4
    Rounded,
    /// the certified value 1/beta*^2 + beta*^2
    Computed,
}

impl RhoStarChoice {
    pub fn value(self, precision: &Precision) -> Result<RealBall> {
        match self {
            Self::Rounded => Ok(RealBall::from_rational(&rho_star_rounded(), precision.bits)),
            Self::Computed => Ok(compute_split_constants(precision)?.rho_star_computed),
        }
    }
}

/// Sign of f at a rational point, certified by escalating precision.
fn certified_sign(
    f: &dyn Fn(&RealBall, u32) -> Result<RealBall>,
    x: &Rational,
    precision: &Precision,
) -> Result<i8> {
    precision.escalate(|bits| {
        let v = f(&RealBall::from_rational(x, bits), bits)?;
        if v.certainly_positive() {
            Ok(1)
        } else if v.certainly_negative() {
            Ok(-1)
        } else {
            Err(Error::PrecisionExhausted(bits))
        }
    })
}

/// Certified bisection for a sign change of f on [a, b]; returns the final
/// bracketing interval, or None when the endpoint signs agree.
fn bisect_root(
    f: &dyn Fn(&RealBall, u32) -> Result<RealBall>,
    a: &Rational,
    b: &Rational,
    iterations: u32,
    precision: &Precision,
) -> Result<Option<(Rational, Rational)>> {
    let sa = certified_sign(f, a, precision)?;
    let sb = certified_sign(f, b, precision)?;
    if sa == sb {
        return Ok(None);
    }
    let mut lo = a.clone();
    let mut hi = b.clone();
    for _ in 0..iterations {
        let mid = Rational::from(&lo + &hi) / 2u32;
        if certified_sign(f, &mid, precision)? == sa {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some((lo, hi)))
}

fn ball_over_interval(lo: &Rational, hi: &Rational, bits: u32) -> RealBall {
    let mid = rug::Float::with_val(bits, Rational::from((lo + hi).complete() / 2u32));
    // width as radius generously covers the rounding of the midpoint
    let rad = rug::Float::with_val_round(
        64,
        Rational::from((hi - lo).complete()),
        rug::float::Round::Up,
    )
    .0;
    RealBall::new(mid, rad)
}

/// Solve R1(x) = 1/x and R2(x) = x on [2, 4]; beta* is the largest root
/// found (in fact R2(x) - x has no sign change there, so beta* comes from
/// the R1 equation), and rho* = 1/beta*^2 + beta*^2.
pub fn compute_split_constants(precision: &Precision) -> Result<SplitConstants> {
    let f1 = |x: &RealBall, bits: u32| -> Result<RealBall> {
        Ok(annulus_bounds(x, bits)?.r1.sub(&x.recip()?))
    };
    let f2 = |x: &RealBall, bits: u32| -> Result<RealBall> {
        Ok(annulus_bounds(x, bits)?.r2.sub(x))
    };
    let a = Rational::from(2);
    let b = Rational::from(4);
    let mut roots = Vec::new();
    for f in [&f1 as &dyn Fn(&RealBall, u32) -> Result<RealBall>, &f2] {
        if let Some(iv) = bisect_root(f, &a, &b, 64, precision)? {
            roots.push(iv);
        }
    }
    let (lo, hi) = roots
        .into_iter()
        .max_by(|x, y| x.0.cmp(&y.0))
        .ok_or_else(|| Error::Invalid("no root of the annulus equations in [2, 4]".into()))?;
    let beta_star = ball_over_interval(&lo, &hi, precision.bits);
    let b2 = beta_star.mul(&beta_star);
    let rho_star_computed = b2.recip()?.add(&b2);
    Ok(SplitConstants {
        beta_star,
        rho_star_computed,
    })
}

/// Sufficient splitting test for regular groups: certified
/// |rho| >= rho*. Returns true only when the inequality is certain.
pub fn splits_by_annulus(rho: &ComplexBall, rho_star: &RealBall) -> bool {
    rho.abs().certainly_ge(rho_star)
}

/// Exact variant: |rho|^2 >= rho*^2 for exactly known parameters
/// (boundary inclusive, matching the ">=" of the statement).
pub fn splits_by_annulus_exact(norm_sq: &Rational, rho_star: &Rational) -> bool {
    *norm_sq >= Rational::from(rho_star * rho_star)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskSide {
    Inside,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    CertifiedDisjointDisks,
    CertifiedIntersecting,
    Undecided,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::CertifiedDisjointDisks => "certified_disjoint_disks",
            Self::CertifiedIntersecting => "certified_intersecting",
            Self::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DisjointnessResult {
    pub status: Status,
    /// disk side per circle when disjointness was certified
    pub disjoint_witness: Option<[DiskSide; 3]>,
    /// a provably crossing pair when intersection was certified
    pub intersecting_pairs: Vec<(usize, usize)>,
}

fn disks_disjoint(ci: &Circle, si: DiskSide, cj: &Circle, sj: DiskSide) -> bool {
    let d = ci.center.sub(&cj.center).abs();
    match (si, sj) {
        (DiskSide::Inside, DiskSide::Inside) => d.certainly_gt(&ci.radius.add(&cj.radius)),
        (DiskSide::Inside, DiskSide::Outside) => d.add(&ci.radius).certainly_lt(&cj.radius),
        (DiskSide::Outside, DiskSide::Inside) => d.add(&cj.radius).certainly_lt(&ci.radius),
        // both complements contain the point at infinity
        (DiskSide::Outside, DiskSide::Outside) => false,
    }
}

fn circles_cross(ci: &Circle, cj: &Circle) -> bool {
    let d = ci.center.sub(&cj.center).abs();
    d.certainly_lt(&ci.radius.add(&cj.radius))
        && d.certainly_gt(&ci.radius.sub(&cj.radius).abs())
}

/// The Klein-combination disk test on the three diameter circles.
pub fn circle_disjointness(t: &HalfTurnTriple) -> Result<DisjointnessResult> {
    let circles = [
        diameter_circle(&t.a, t.bits)?,
        diameter_circle(&t.b, t.bits)?,
        diameter_circle(&t.c, t.bits)?,
    ];
    // at most one disk may be the outside of its circle
    let assignments = [
        [DiskSide::Inside, DiskSide::Inside, DiskSide::Inside],
        [DiskSide::Outside, DiskSide::Inside, DiskSide::Inside],
        [DiskSide::Inside, DiskSide::Outside, DiskSide::Inside],
        [DiskSide::Inside, DiskSide::Inside, DiskSide::Outside],
    ];
    for sides in assignments {
        let ok = (0..3).all(|i| {
            ((i + 1)..3).all(|j| disks_disjoint(&circles[i], sides[i], &circles[j], sides[j]))
        });
        if ok {
            return Ok(DisjointnessResult {
                status: Status::CertifiedDisjointDisks,
                disjoint_witness: Some(sides),
                intersecting_pairs: Vec::new(),
            });
        }
    }
    let mut crossing = Vec::new();
    for i in 0..3 {
        for j in (i + 1)..3 {
            if circles_cross(&circles[i], &circles[j]) {
                crossing.push((i, j));
            }
        }
    }
    if crossing.is_empty() {
        Ok(DisjointnessResult {
            status: Status::Undecided,
            disjoint_witness: None,
            intersecting_pairs: Vec::new(),
        })
    } else {
        Ok(DisjointnessResult {
            status: Status::CertifiedIntersecting,
            disjoint_witness: None,
            intersecting_pairs: crossing,
        })
    }
}

/// A box in the complex plane, sampled identically for each parameter.
#[derive(Debug, Clone, Copy)]
pub struct ScanRegion {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

#[derive(Debug, Clone, Copy)]
pub enum Sampler {
    Grid { per_axis: usize },
    Random { count: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct ScanSample {
    pub rho: [(f64, f64); 3],
    pub status: Status,
}

/// Empirical test of the splitting conjecture: sample parameter triples in
/// the region, keep those with all |rho_i| >= threshold whose circle test
/// does NOT certify disjointness (potential counterexamples for human
/// inspection).
pub fn conjecture_scan(
    region: &ScanRegion,
    sampler: Sampler,
    threshold: f64,
    precision: &Precision,
) -> Vec<ScanSample> {
    let triples: Vec<[(f64, f64); 3]> = match sampler {
        Sampler::Grid { per_axis } => {
            let points = grid_points(region, per_axis);
            let mut out = Vec::new();
            for &p0 in &points {
                for &p1 in &points {
                    for &p2 in &points {
                        out.push([p0, p1, p2]);
                    }
                }
            }
            out
        }
        Sampler::Random { count, seed } => {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let mut sample = || {
                        let re = if region.re_max > region.re_min {
                            rng.gen_range(region.re_min..region.re_max)
                        } else {
                            region.re_min
                        };
                        let im = if region.im_max > region.im_min {
                            rng.gen_range(region.im_min..region.im_max)
                        } else {
                            region.im_min
                        };
                        (re, im)
                    };
                    [sample(), sample(), sample()]
                })
                .collect()
        }
    };

    let mut results = Vec::new();
    for rho in triples {
        if rho
            .iter()
            .any(|&(re, im)| (re * re + im * im).sqrt() < threshold)
        {
            continue;
        }
        let status = sample_status(&rho, precision);
        if status != Status::CertifiedDisjointDisks {
            results.push(ScanSample { rho, status });
        }
    }
    results
}

fn grid_points(region: &ScanRegion, per_axis: usize) -> Vec<(f64, f64)> {
    let axis = |lo: f64, hi: f64| -> Vec<f64> {
        if per_axis <= 1 || hi <= lo {
            vec![lo]
        } else {
            (0..per_axis)
                .map(|i| lo + (hi - lo) * i as f64 / (per_axis - 1) as f64)
                .collect()
        }
    };
    let mut pts = Vec::new();
    for &re in &axis(region.re_min, region.re_max) {
        for &im in &axis(region.im_min, region.im_max) {
            pts.push((re, im));
        }
    }
    pts
}

fn sample_status(rho: &[(f64, f64); 3], precision: &Precision) -> Status {
    let ball = |&(re, im): &(f64, f64)| {
        let re = Rational::from_f64(re).unwrap_or_default();
        let im = Rational::from_f64(im).unwrap_or_default();
        ComplexBall::from_rationals(&re, &im, precision.bits)
    };
    let p = Params::numeric(ball(&rho[0]), ball(&rho[1]), ball(&rho[2]));
    match build_representation(&p, precision).and_then(|t| circle_disjointness(&t)) {
        Ok(r) => r.status,
        Err(_) => Status::Undecided,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use crate::field::NumberField;

    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn phi_at_three_is_three_eighths() {
        assert_eq!(phi_exact(&Rational::from(3)), q(3, 8));
        let ball = annulus_bounds(&RealBall::from_i64(3, 128), 128).unwrap();
        assert!(ball.phi.contains_rational(&q(3, 8)));
    }

    #[test]
    fn split_constants_match_reference() {
        let c = compute_split_constants(&Precision::default()).unwrap();
        assert!(c.beta_star.lower_bound() > 2.4944);
        assert!(c.beta_star.upper_bound() < 2.4946);
        assert!(c.rho_star_computed.lower_bound() > 6.38);
        assert!(c.rho_star_computed.upper_bound() < 6.40);
    }

    #[test]
    fn annulus_limits_at_large_x() {
        let b = annulus_bounds(&RealBall::from_i64(1000, 128), 128).unwrap();
        assert!(b.phi.upper_bound() < 0.002);
        assert!((b.r1.mid().to_f64() - 1.0).abs() < 0.01);
        assert!((b.r2.mid().to_f64() - 1.0).abs() < 0.01);
    }

    #[test]
    fn r1_increasing_r2_decreasing() {
        let bits = 128;
        let mut prev: Option<AnnulusBounds> = None;
        for i in 0..=20 {
            let x = q(2, 1) + q(i, 10);
            let b = annulus_bounds(&RealBall::from_rational(&x, bits), bits).unwrap();
            if let Some(p) = prev {
                assert!(b.r1.certainly_gt(&p.r1));
                assert!(b.r2.certainly_lt(&p.r2));
            }
            prev = Some(b);
        }
    }

    #[test]
    fn annulus_split_tests() {
        let seven = ComplexBall::from_rationals(&q(-7, 1), &Rational::new(), 128);
        let rounded = RealBall::from_rational(&rho_star_rounded(), 128);
        assert!(splits_by_annulus(&seven, &rounded));
        let small = ComplexBall::from_rationals(&q(-1, 2), &q(1, 2), 128);
        assert!(!splits_by_annulus(&small, &rounded));
        // boundary inclusive in the exact test
        assert!(splits_by_annulus_exact(
            &Rational::from((1024, 25)),
            &rho_star_rounded()
        ));
        assert!(!splits_by_annulus_exact(&q(40, 1), &rho_star_rounded()));
    }

    fn regular_triple(rho: crate::field::FieldElement) -> HalfTurnTriple {
        let p = Params::regular_exact(rho);
        build_representation(&p, &Precision::default()).unwrap()
    }

    #[test]
    fn rho_minus_seven_certifies_disjoint() {
        let k = NumberField::rationals();
        let t = regular_triple(k.from_rational(q(-7, 1)));
        let r = circle_disjointness(&t).unwrap();
        assert_eq!(r.status, Status::CertifiedDisjointDisks);
        // the expected witness: inside C0, outside C1, inside C2
        assert_eq!(
            r.disjoint_witness,
            Some([DiskSide::Inside, DiskSide::Outside, DiskSide::Inside])
        );
    }

    fn eisenstein_rho(num: i64) -> crate::field::FieldElement {
        let k: Arc<NumberField> =
            NumberField::imaginary_quadratic(3, &Precision::default()).unwrap();
        k.from_rational(q(num, 2))
            .add(&k.generator().scale(&q(1, 2)))
            .unwrap()
    }

    #[test]
    fn fig5_circles_intersect() {
        let t = regular_triple(eisenstein_rho(-1));
        let r = circle_disjointness(&t).unwrap();
        assert_eq!(r.status, Status::CertifiedIntersecting);
        assert!(!r.intersecting_pairs.is_empty());
    }

    #[test]
    fn scan_empty_and_nonempty() {
        let prec = Precision::new(64, 256);
        let region = ScanRegion {
            re_min: 6.4,
            re_max: 10.0,
            im_min: 0.0,
            im_max: 0.0,
        };
        let hits = conjecture_scan(&region, Sampler::Grid { per_axis: 3 }, 6.4, &prec);
        assert!(hits.is_empty());
        // small parameters produce crossing circles
        let region = ScanRegion {
            re_min: 1.0,
            re_max: 1.0,
            im_min: 1.0,
            im_max: 1.0,
        };
        let hits = conjecture_scan(&region, Sampler::Grid { per_axis: 1 }, 0.0, &prec);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].status, Status::CertifiedIntersecting);
        // count = 0
        let hits = conjecture_scan(
            &region,
            Sampler::Random { count: 0, seed: 7 },
            0.0,
            &prec,
        );
        assert!(hits.is_empty());
    }
}
