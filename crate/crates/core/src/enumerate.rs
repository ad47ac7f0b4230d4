//! Enumeration of regular-group candidates over imaginary quadratic
//! fields, the finiteness-bound calculator, and bounded algebraic-integer
//! enumeration.
//!
//! Candidate parameters have the shape rho = k/2 + sqrt(-d)/2 with k an
//! integer, d a positive integer and k^2 + d divisible by 4 (so rho is an
//! algebraic integer), and |rho|^2 = (k^2 + d)/4 below the splitting bound.

use std::sync::Arc;

use rug::Rational;

use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::klein::{circle_disjointness, splits_by_annulus_exact, Status};
use crate::poly::{m_r, IntPolynomial};
use crate::rep::{build_representation, Params};
use crate::roots::isolate_roots;
use crate::Precision;

/// Reference list of the 48 candidate rows, shipped with the crate.
pub const REFERENCE48_CSV: &str = include_str!("../data/reference48.csv");

/// Squarefree kernel of a positive integer.
pub fn squarefree_part(d: i64) -> i64 {
    let mut n = d;
    let mut p = 2i64;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
        }
        p += 1;
    }
    n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuadraticCandidate {
    pub d: i64,
    pub k: i64,
}

impl QuadraticCandidate {
    pub fn new(k: i64, d: i64) -> Result<Self> {
        if d <= 0 || (k * k + d) % 4 != 0 {
            return Err(Error::Invalid(format!(
                "(k, d) = ({k}, {d}) violates k^2 + d = 0 mod 4, d > 0"
            )));
        }
        Ok(Self { d, k })
    }

    /// |rho|^2 = (k^2 + d)/4, exactly.
    pub fn norm_sq(&self) -> Rational {
        Rational::from((self.k * self.k + self.d, 4))
    }

    pub fn field_label(&self) -> String {
        format!("Q(sqrt(-{}))", squarefree_part(self.d))
    }

    /// rho as an exact element of Q(sqrt(-s)), s the squarefree part of d.
    pub fn rho(&self, precision: &Precision) -> Result<(Arc<NumberField>, FieldElement)> {
        let s = squarefree_part(self.d);
        let m = ((self.d / s) as f64).sqrt().round() as i64;
        debug_assert_eq!(m * m * s, self.d);
        let field = NumberField::imaginary_quadratic(s, precision)?;
        // rho = k/2 + (m/2) * sqrt(-s)
        let rho = field
            .from_rational(Rational::from((self.k, 2)))
            .add(&field.generator().scale(&Rational::from((m, 2))))?;
        Ok((field, rho))
    }

    /// Human-readable form matching the reference table's conventions:
    /// halves are cleared when k is even and 4 | d.
    pub fn rho_string(&self) -> String {
        if self.k % 2 == 0 && self.d % 4 == 0 {
            let whole = self.k / 2;
            let rad = self.d / 4;
            if whole == 0 {
                format!("sqrt(-{rad})")
            } else {
                format!("{whole} + sqrt(-{rad})")
            }
        } else if self.k == 0 {
            format!("sqrt(-{})/2", self.d)
        } else {
            format!("{}/2 + sqrt(-{})/2", self.k, self.d)
        }
    }
}

/// All candidates with |rho| <= bound, ordered by (d, k).
pub fn enumerate_quadratic_candidates(bound: &Rational) -> Vec<QuadraticCandidate> {
    let bound_sq_times_4 = Rational::from(bound * bound) * 4u32;
    let limit = bound_sq_times_4.to_f64().floor() as i64;
    let mut out = Vec::new();
    for d in 1..=limit {
        let mut k = 0i64;
        while k * k + d <= limit {
            if (k * k + d) % 4 == 0 {
                // exact check against the rational bound
                let ok = Rational::from(k * k + d) <= bound_sq_times_4;
                if ok {
                    out.push(QuadraticCandidate { d, k });
                    if k != 0 {
                        out.push(QuadraticCandidate { d, k: -k });
                    }
                }
            }
            k += 1;
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleStage {
    /// Certified disjoint invariant disks with certified |beta| >= 2, the
    /// region where the circle-separation analysis is monotone; removed.
    RemovedDisjoint,
    /// Certified disjoint invariant disks but |beta| < 2: the group splits,
    /// yet reference pruning retains such near-tangent rows (e.g. k/d =
    /// 4/16, where the third circle spans (1/phi, phi) inside the annulus
    /// (0.5882, 1.7000)). Kept and flagged.
    KeptDisjointSmallBeta,
    SurvivedIntersecting,
    SurvivedUndecided,
}

impl CircleStage {
    pub fn as_str(&self) -> &'static str {
        match self {
            CircleStage::RemovedDisjoint => "removed_disjoint",
            CircleStage::KeptDisjointSmallBeta => "kept_disjoint_small_beta",
            CircleStage::SurvivedIntersecting => "survived_intersecting",
            CircleStage::SurvivedUndecided => "survived_undecided",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CandidateRow {
    pub cand: QuadraticCandidate,
    pub integrality: bool,
    pub one_complex_place: bool,
    pub survives_annulus: bool,
    pub circle_stage: Option<CircleStage>,
}

impl CandidateRow {
    /// A row survives the pipeline when every evaluated stage kept it.
    pub fn surviving(&self) -> bool {
        self.integrality
            && self.one_complex_place
            && self.survives_annulus
            && !matches!(self.circle_stage, Some(CircleStage::RemovedDisjoint))
    }
}

#[derive(Debug)]
pub struct CandidateTable {
    pub rows: Vec<CandidateRow>,
}

impl CandidateTable {
    pub fn surviving(&self) -> Vec<&CandidateRow> {
        self.rows.iter().filter(|r| r.surviving()).collect()
    }
}

/// Run the filter pipeline. Stages are monotone: once a row is eliminated
/// the later stages are not evaluated for it (recorded as None).
pub fn filter_nearly_arithmetic(
    cands: &[QuadraticCandidate],
    rho_star: &Rational,
    precision: &Precision,
) -> Result<CandidateTable> {
    let mut rows = Vec::with_capacity(cands.len());
    for cand in cands {
        let (_, rho) = cand.rho(precision)?;
        let integrality = rho.is_algebraic_integer();
        let mut one_complex_place = false;
        if integrality {
            let p = Params::regular_exact(rho.clone());
            let field = crate::arith::invariant_trace_field(&p, precision)?;
            let sig = field.field.signature()?;
            // always imaginary quadratic or smaller here; asserted, not assumed
            one_complex_place = sig.complex_places == 1;
        }
        let survives_annulus = integrality
            && one_complex_place
            && !splits_by_annulus_exact(&cand.norm_sq(), rho_star);
        let circle_stage = if survives_annulus {
            let p = Params::regular_exact(rho);
            let outcome = build_representation(&p, precision).and_then(|t| {
                let status = circle_disjointness(&t)?.status;
                let beta_large = t
                    .beta
                    .abs()
                    .certainly_ge(&crate::ball::RealBall::from_i64(2, t.bits));
                Ok((status, beta_large))
            });
            let (status, beta_large) = outcome.unwrap_or((Status::Undecided, false));
            Some(match status {
                // A disjointness certificate only removes a row inside the
                // |beta| >= 2 region where the separation analysis applies;
                // below it the reference pruning keeps near-tangent rows.
                Status::CertifiedDisjointDisks if beta_large => CircleStage::RemovedDisjoint,
                Status::CertifiedDisjointDisks => CircleStage::KeptDisjointSmallBeta,
                Status::CertifiedIntersecting => CircleStage::SurvivedIntersecting,
                Status::Undecided => CircleStage::SurvivedUndecided,
            })
        } else {
            None
        };
        rows.push(CandidateRow {
            cand: *cand,
            integrality,
            one_complex_place,
            survives_annulus,
            circle_stage,
        });
    }
    Ok(CandidateTable { rows })
}

/// The embedded reference rows: (index, k, d, field label).
pub fn reference_table() -> Vec<(usize, i64, i64, String)> {
    REFERENCE48_CSV
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let parts: Vec<&str> = l.split(',').collect();
            (
                parts[0].parse().unwrap(),
                parts[1].parse().unwrap(),
                parts[2].parse().unwrap(),
                parts[3].to_string(),
            )
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TableDiff {
    /// reference rows not surviving our pipeline
    pub missing: Vec<(i64, i64)>,
    /// surviving rows not present in the reference
    pub extra: Vec<(i64, i64)>,
}

pub fn diff_against_reference(table: &CandidateTable) -> TableDiff {
    let reference: Vec<(i64, i64)> = reference_table()
        .into_iter()
        .map(|(_, k, d, _)| (k, d))
        .collect();
    let surviving: Vec<(i64, i64)> = table
        .surviving()
        .iter()
        .map(|r| (r.cand.k, r.cand.d))
        .collect();
    let missing = reference
        .iter()
        .filter(|kd| !surviving.contains(kd))
        .copied()
        .collect();
    let extra = surviving
        .iter()
        .filter(|kd| !reference.contains(kd))
        .copied()
        .collect();
    TableDiff { missing, extra }
}

/// K = rho*^2 + 4 rho* + 4, the per-conjugate factor bound.
pub fn k_constant(rho_star: &Rational) -> Rational {
    Rational::from(rho_star * rho_star) + Rational::from(rho_star * &Rational::from(4)) + 4u32
}

/// The discriminant-norm bound 4 rho*^2 K^{2n} 2^{n(n-1)} Mtilde_n, exactly.
///
/// Mtilde_n = M_n / 2^{n(n-1)} is the maximal squared-difference product of
/// n points in an interval of length 1; the explicit 2^{n(n-1)} interval
/// rescaling cancels against the [-1, 1] maximum M_n, leaving
/// 4 rho*^2 K^{2n} M_n. This normalization is what makes the bound tend to
/// zero: Mtilde_n^{1/(n(n-1))} -> 1/4, so 2^{n(n-1)} Mtilde_n decays like
/// 2^{-n(n-1)} and overwhelms the K^{2n} growth.
pub fn discriminant_bound(n: usize, rho_star: &Rational) -> Rational {
    let k = k_constant(rho_star);
    let mut out = Rational::from(rho_star * rho_star) * 4u32;
    out *= pow_rational(&k, 2 * n as u32);
    out *= m_r(n);
    out
}

fn pow_rational(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::from(1);
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Smallest n >= 3 with bound(n) < 1, scanning up to 200.
pub fn n0(rho_star: &Rational) -> Result<usize> {
    for n in 3..=200 {
        if discriminant_bound(n, rho_star) < 1u32 {
            return Ok(n);
        }
    }
    Err(Error::ScanExhausted(200))
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub rho_star: Rational,
    pub k: Rational,
    pub m_values: Vec<(usize, Rational)>,
    pub n0: usize,
    pub bound_values: Vec<(usize, Rational)>,
}

pub fn bound_report(rho_star: &Rational) -> Result<BoundReport> {
    let n0 = n0(rho_star)?;
    let m_values = (3usize..=8).map(|r| (r, m_r(r))).collect();
    let bound_values = (3..=n0 + 5)
        .map(|n| (n, discriminant_bound(n, rho_star)))
        .collect();
    Ok(BoundReport {
        rho_star: rho_star.clone(),
        k: k_constant(rho_star),
        m_values,
        n0,
        bound_values,
    })
}

/// Monic integer polynomials of degree <= max_degree whose roots obey the
/// conjugate-bound pattern: exactly one non-real conjugate pair of modulus
/// <= complex_bound, all remaining roots real with absolute value <=
/// real_bound. Degree 1 is handled as a single bounded real root.
pub fn enumerate_bounded_algebraic_integers(
    max_degree: usize,
    complex_bound: &Rational,
    real_bound: &Rational,
    precision: &Precision,
) -> Result<Vec<IntPolynomial>> {
    if max_degree > 4 {
        return Err(Error::Invalid(
            "bounded enumeration is desk-scale only (degree <= 4)".into(),
        ));
    }
    let mut out = Vec::new();
    for degree in 1..=max_degree {
        // symmetric-function coefficient box: |a_{n-i}| <= C(n, i) B^i with
        // B the largest admissible root modulus
        let b = if degree == 1 {
            complex_bound.clone()
        } else {
            complex_bound.clone().max(real_bound.clone())
        };
        let mut ranges = Vec::new();
        for i in 1..=degree {
            let binom = binomial(degree, i);
            let cap = Rational::from(binom) * pow_rational(&b, i as u32);
            ranges.push(cap.ceil().into_numer_denom().0.to_i64().unwrap_or(i64::MAX));
        }
        let mut coeffs = vec![0i64; degree];
        enumerate_boxes(&ranges, &mut coeffs, 0, &mut |cs| {
            // cs are a_{n-1}, ..., a_0
            let mut v: Vec<i64> = cs.to_vec();
            v.reverse();
            v.push(1);
            let p = IntPolynomial::from_i64(&v);
            if passes_root_filter(&p, degree, complex_bound, real_bound, precision) {
                out.push(p);
            }
        });
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

fn enumerate_boxes(
    ranges: &[i64],
    coeffs: &mut Vec<i64>,
    idx: usize,
    f: &mut impl FnMut(&[i64]),
) {
    if idx == ranges.len() {
        f(coeffs);
        return;
    }
    for v in -ranges[idx]..=ranges[idx] {
        coeffs[idx] = v;
        enumerate_boxes(ranges, coeffs, idx + 1, f);
    }
}

fn passes_root_filter(
    p: &IntPolynomial,
    degree: usize,
    complex_bound: &Rational,
    real_bound: &Rational,
    precision: &Precision,
) -> bool {
    if !p.is_squarefree() {
        return false;
    }
    if degree == 1 {
        // root is -constant, exactly
        let root = Rational::from(-p.constant());
        return root.clone().abs() <= *complex_bound;
    }
    let Ok(sig) = p.signature() else { return false };
    if (degree - sig.real_places) != 2 {
        return false;
    }
    let Ok(disks) = isolate_roots(p, precision) else {
        return false;
    };
    let bits = precision.bits;
    let cb = crate::ball::RealBall::from_rational(complex_bound, bits);
    let rb = crate::ball::RealBall::from_rational(real_bound, bits);
    for disk in &disks {
        let m = disk.abs();
        let real = disk.im().contains_zero();
        let cap = if real { &rb } else { &cb };
        // a disk straddling the cap is rejected conservatively
        if !cap.certainly_ge(&m) {
            return false;
        }
    }
    true
}
