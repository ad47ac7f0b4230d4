//! The intrinsic arithmeticity test for three-half-turn groups.
//!
//! A group with exact parameters (rho0, rho1, rho2) is nearly arithmetic
//! iff (1) the rho's are algebraic integers, (2) the invariant trace field
//! kG = Q(rho0^2, rho1^2, rho0 rho1 rho2) has exactly one complex place,
//! (3) the quaternion algebra with Hilbert symbol
//! (rho0^2 (rho0^2 - 4), rho0^2 rho1^2 (rho0^2 + rho1^2 + rho2^2 -
//! rho0 rho1 rho2 - 4)) over kG is ramified at every real place (both
//! entries strictly negative there), and (4) the group is not a free
//! product of cyclic groups. Condition (4) is only semidecidable here: the
//! Klein-combination circle test certifies splitting; its failure is
//! reported as a status, never as a theorem.

use rug::Rational;

use crate::error::{Error, Result};
use crate::field::{subfield_generated, FieldElement, Subfield};
use crate::klein::{circle_disjointness, splits_by_annulus, RhoStarChoice, Status};
use crate::poly::Signature;
use crate::rep::{build_representation, Params};
use crate::Precision;

/// The two entries of the quaternion-algebra symbol, in kG coordinates.
#[derive(Debug)]
pub struct HilbertSymbolData {
    pub a: FieldElement,
    pub b: FieldElement,
    pub field: Subfield,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeProductStatus {
    Splits,
    NotSplitCertified,
    Unknown,
}

impl FreeProductStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Splits => "splits",
            Self::NotSplitCertified => "not_split_certified",
            Self::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NearlyArithmeticCandidate,
    FailsCondition1,
    FailsCondition2,
    FailsCondition3,
    SplitsFreeProduct,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NearlyArithmeticCandidate => "nearly_arithmetic_candidate",
            Self::FailsCondition1 => "fails_condition_1",
            Self::FailsCondition2 => "fails_condition_2",
            Self::FailsCondition3 => "fails_condition_3",
            Self::SplitsFreeProduct => "splits_free_product",
        }
    }
}

/// Reminder attached to every report: the test decides NEAR arithmeticity;
/// full arithmeticity additionally needs finite covolume, which is out of
/// scope here.
pub const COVOLUME_NOTE: &str =
    "verdict decides near-arithmeticity; arithmeticity additionally requires finite covolume (not computed)";

#[derive(Debug)]
pub struct ArithmeticityReport {
    pub integers_ok: [bool; 3],
    pub trace_field: Subfield,
    pub invariant_field: Subfield,
    pub signature: Signature,
    /// (real place index, sign of a, sign of b); empty when kG has no real
    /// places (condition 3 vacuous) or when it was not evaluated
    pub real_place_signs: Vec<(usize, i8, i8)>,
    pub ramified_all_real: bool,
    pub free_product_status: FreeProductStatus,
    pub verdict: Verdict,
    pub covolume_note: &'static str,
}

fn exact_params(p: &Params) -> Result<[&FieldElement; 3]> {
    match p {
        Params::Exact { rho0, rho1, rho2 } => Ok([rho0, rho1, rho2]),
        Params::Numeric { .. } => Err(Error::Invalid(
            "arithmeticity test requires exact parameters".into(),
        )),
    }
}

/// tr G' = Q(rho0, rho1, rho2).
pub fn trace_field(p: &Params, precision: &Precision) -> Result<Subfield> {
    let [r0, r1, r2] = exact_params(p)?;
    subfield_generated(&[r0.clone(), r1.clone(), r2.clone()], precision)
}

/// kG = Q(rho0^2, rho1^2, rho0 rho1 rho2).
pub fn invariant_trace_field(p: &Params, precision: &Precision) -> Result<Subfield> {
    let [r0, r1, r2] = exact_params(p)?;
    let g3 = r0.mul(r1)?.mul(r2)?;
    subfield_generated(&[r0.sqr(), r1.sqr(), g3], precision)
}

/// The displayed symbol entries a = rho0^2(rho0^2 - 4) and
/// b = rho0^2 rho1^2 (rho0^2 + rho1^2 + rho2^2 - rho0 rho1 rho2 - 4),
/// expressed in kG.
pub fn hilbert_entries(p: &Params, precision: &Precision) -> Result<HilbertSymbolData> {
    let [r0, r1, r2] = exact_params(p)?;
    let field = invariant_trace_field(p, precision)?;
    let (a, b) = hilbert_entries_raw(&field, r0, r1, r2)?;
    Ok(HilbertSymbolData { a, b, field })
}

/// Run the full test. Free-product detection is evaluated first so that a
/// certified splitting short-circuits the verdict (a split group can also
/// fail the field conditions; the split is the more informative outcome).
pub fn arithmeticity_test(
    p: &Params,
    rho_star: RhoStarChoice,
    precision: &Precision,
) -> Result<ArithmeticityReport> {
    let [r0, r1, r2] = exact_params(p)?;

    // condition (4): sufficient splitting certificates
    let mut free_product_status = FreeProductStatus::Unknown;
    if p.is_regular() {
        let rho_ball = r0.embed(precision.bits)?;
        let star = rho_star.value(precision)?;
        if splits_by_annulus(&rho_ball, &star) {
            free_product_status = FreeProductStatus::Splits;
        }
    }
    if free_product_status == FreeProductStatus::Unknown {
        match build_representation(p, precision).and_then(|t| circle_disjointness(&t)) {
            Ok(r) => {
                free_product_status = match r.status {
                    Status::CertifiedDisjointDisks => FreeProductStatus::Splits,
                    Status::CertifiedIntersecting => FreeProductStatus::NotSplitCertified,
                    Status::Undecided => FreeProductStatus::Unknown,
                }
            }
            Err(Error::DegenerateParams | Error::DegenerateCircle) => {}
            Err(Error::PrecisionExhausted(_)) => {}
            Err(e) => return Err(e),
        }
    }

    // condition (1)
    let integers_ok = [
        r0.is_algebraic_integer(),
        r1.is_algebraic_integer(),
        r2.is_algebraic_integer(),
    ];
    let cond1 = integers_ok.iter().all(|&x| x);

    let trace_field = trace_field(p, precision)?;
    let invariant_field = invariant_trace_field(p, precision)?;

    // condition (2): exactly one complex place of kG
    let signature = invariant_field.field.signature()?;
    let cond2 = signature.complex_places == 1;

    // condition (3): both symbol entries negative at every real place
    let mut real_place_signs = Vec::new();
    let mut ramified_all_real = true;
    let symbol = hilbert_entries_raw(&invariant_field, r0, r1, r2);
    match symbol {
        Ok((a, b)) => {
            if signature.real_places > 0 {
                let sa = a.signs_at_real_places(precision)?;
                let sb = b.signs_at_real_places(precision)?;
                for (i, (x, y)) in sa.iter().zip(sb.iter()).enumerate() {
                    real_place_signs.push((i, *x, *y));
                    if *x >= 0 || *y >= 0 {
                        ramified_all_real = false;
                    }
                }
            }
        }
        Err(Error::DegenerateSymbol(which)) => {
            // tolerable only when the verdict is already decided earlier
            let decided_earlier = free_product_status == FreeProductStatus::Splits
                || !cond1
                || !cond2;
            if decided_earlier {
                ramified_all_real = false;
            } else {
                return Err(Error::DegenerateSymbol(which));
            }
        }
        Err(e) => return Err(e),
    }
    let cond3 = ramified_all_real;

    let verdict = if free_product_status == FreeProductStatus::Splits {
        Verdict::SplitsFreeProduct
    } else if !cond1 {
        Verdict::FailsCondition1
    } else if !cond2 {
        Verdict::FailsCondition2
    } else if !cond3 {
        Verdict::FailsCondition3
    } else {
        Verdict::NearlyArithmeticCandidate
    };

    Ok(ArithmeticityReport {
        integers_ok,
        trace_field,
        invariant_field,
        signature,
        real_place_signs,
        ramified_all_real,
        free_product_status,
        verdict,
        covolume_note: COVOLUME_NOTE,
    })
}

/// Symbol entries in kG without duplicating the Subfield.
fn hilbert_entries_raw(
    field: &Subfield,
    r0: &FieldElement,
    r1: &FieldElement,
    r2: &FieldElement,
) -> Result<(FieldElement, FieldElement)> {
    let ambient = r0.field();
    let four = ambient.from_rational(Rational::from(4));
    let s0 = r0.sqr();
    let s1 = r1.sqr();
    let s2 = r2.sqr();
    let a = s0.mul(&s0.sub(&four)?)?;
    let prod = r0.mul(r1)?.mul(r2)?;
    let inner = s0.add(&s1)?.add(&s2)?.sub(&prod)?.sub(&four)?;
    let b = s0.mul(&s1)?.mul(&inner)?;
    if a.is_zero() {
        return Err(Error::DegenerateSymbol(
            "first Hilbert entry rho0^2(rho0^2-4) is zero",
        ));
    }
    if b.is_zero() {
        return Err(Error::DegenerateSymbol("second Hilbert entry is zero"));
    }
    let a_sub = field
        .express(&a)
        .ok_or(Error::Invalid("Hilbert entry a not in kG".into()))?;
    let b_sub = field
        .express(&b)
        .ok_or(Error::Invalid("Hilbert entry b not in kG".into()))?;
    Ok((a_sub, b_sub))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use crate::field::NumberField;

    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn regular(rho: FieldElement) -> Params {
        Params::regular_exact(rho)
    }

    #[test]
    fn hilbert_entries_sqrt_minus_two() {
        let prec = Precision::default();
        let k = NumberField::imaginary_quadratic(2, &prec).unwrap();
        let p = regular(k.generator());
        let (a, b) = {
            let field = invariant_trace_field(&p, &prec).unwrap();
            let [r0, r1, r2] = match &p {
                Params::Exact { rho0, rho1, rho2 } => [rho0, rho1, rho2],
                _ => unreachable!(),
            };
            hilbert_entries_raw(&field, r0, r1, r2).unwrap()
        };
        // a = (-2)(-2-4) = 12
        assert_eq!(a.is_rational(), Some(q(12, 1)));
        // b = 4(-10 + 2 sqrt(-2)): check via embedding against the ambient value
        let ambient_b = {
            let t = k.generator();
            let forty = k.from_rational(q(-40, 1));
            forty.add(&t.scale(&q(8, 1))).unwrap()
        };
        let ball1 = b.embed(128).unwrap();
        let ball2 = ambient_b.embed(128).unwrap();
        assert!(ball1.overlaps(&ball2));
    }

    #[test]
    fn hilbert_entries_minus_three() {
        let prec = Precision::default();
        let k = NumberField::rationals();
        let p = regular(k.from_rational(q(-3, 1)));
        let field = invariant_trace_field(&p, &prec).unwrap();
        let [r0, r1, r2] = match &p {
            Params::Exact { rho0, rho1, rho2 } => [rho0, rho1, rho2],
            _ => unreachable!(),
        };
        let (a, b) = hilbert_entries_raw(&field, r0, r1, r2).unwrap();
        assert_eq!(a.is_rational(), Some(q(45, 1)));
        assert_eq!(b.is_rational(), Some(q(4050, 1)));
    }

    #[test]
    fn degenerate_symbol_rho0_zero() {
        let prec = Precision::default();
        let k = NumberField::rationals();
        let p = Params::exact(
            k.from_rational(q(0, 1)),
            k.from_rational(q(-3, 1)),
            k.from_rational(q(-3, 1)),
        )
        .unwrap();
        assert!(matches!(
            hilbert_entries(&p, &prec),
            Err(Error::DegenerateSymbol(_))
        ));
    }

    #[test]
    fn invariant_field_examples() {
        let prec = Precision::default();
        // regular rho = 2i: kG generated by {-4, -8i} is Q(i), degree 2
        let k = NumberField::imaginary_quadratic(1, &prec).unwrap();
        let p = regular(k.generator().scale(&q(2, 1)));
        let f = invariant_trace_field(&p, &prec).unwrap();
        assert_eq!(f.degree(), 2);
        // rational parameters give kG = Q
        let kq = NumberField::rationals();
        let p = regular(kq.from_rational(q(-3, 1)));
        assert_eq!(invariant_trace_field(&p, &prec).unwrap().degree(), 1);
        assert_eq!(trace_field(&p, &prec).unwrap().degree(), 1);
    }

    #[test]
    fn spot_check_sqrt_minus_two_candidate() {
        let prec = Precision::default();
        let k = NumberField::imaginary_quadratic(2, &prec).unwrap();
        let p = regular(k.generator());
        let report = arithmeticity_test(&p, RhoStarChoice::Rounded, &prec).unwrap();
        assert_eq!(report.verdict, Verdict::NearlyArithmeticCandidate);
        assert_eq!(report.invariant_field.degree(), 2);
        assert_eq!(report.signature.real_places, 0);
        assert_eq!(report.signature.complex_places, 1);
        assert!(report.real_place_signs.is_empty());
        assert!(report.integers_ok.iter().all(|&x| x));
    }

    #[test]
    fn spot_check_minus_three_fails_condition_two() {
        let prec = Precision::default();
        let k = NumberField::rationals();
        let p = regular(k.from_rational(q(-3, 1)));
        let report = arithmeticity_test(&p, RhoStarChoice::Rounded, &prec).unwrap();
        assert_eq!(report.verdict, Verdict::FailsCondition2);
        assert_eq!(report.signature.real_places, 1);
        assert_eq!(report.signature.complex_places, 0);
    }

    #[test]
    fn spot_check_minus_seven_splits() {
        let prec = Precision::default();
        let k = NumberField::rationals();
        let p = regular(k.from_rational(q(-7, 1)));
        let report = arithmeticity_test(&p, RhoStarChoice::Rounded, &prec).unwrap();
        assert_eq!(report.verdict, Verdict::SplitsFreeProduct);
        assert_eq!(report.free_product_status, FreeProductStatus::Splits);
    }

    #[test]
    fn fig5_candidate_with_intersecting_circles() {
        let prec = Precision::default();
        let k: Arc<NumberField> = NumberField::imaginary_quadratic(3, &prec).unwrap();
        let rho = k
            .from_rational(q(-1, 2))
            .add(&k.generator().scale(&q(1, 2)))
            .unwrap();
        let report = arithmeticity_test(&regular(rho), RhoStarChoice::Rounded, &prec).unwrap();
        assert_eq!(report.verdict, Verdict::NearlyArithmeticCandidate);
        assert_eq!(report.free_product_status, FreeProductStatus::NotSplitCertified);
        assert_eq!(report.signature.complex_places, 1);
    }

    #[test]
    fn conjugation_invariance_of_verdict() {
        let prec = Precision::default();
        let k = NumberField::imaginary_quadratic(2, &prec).unwrap();
        let t = k.generator();
        // rho and its conjugate -rho (conjugation sends sqrt(-2) to -sqrt(-2))
        let r1 = arithmeticity_test(&regular(t.clone()), RhoStarChoice::Rounded, &prec).unwrap();
        let r2 = arithmeticity_test(&regular(t.neg()), RhoStarChoice::Rounded, &prec).unwrap();
        assert_eq!(r1.verdict, r2.verdict);
    }
}
