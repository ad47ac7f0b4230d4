//! Number fields presented as Q[t]/(f) with a distinguished complex
//! embedding, and exact arithmetic on their elements.
//!
//! The defining polynomial is monic and irreducible over Q. The chosen
//! embedding sends t to a specific root of f: by default the root with the
//! largest imaginary part, breaking ties by the largest real part. All
//! inequalities used to pick that root are certified with ball arithmetic.

use std::sync::Arc;

use rug::{Integer, Rational};

use crate::ball::{ComplexBall, RealBall};
use crate::error::{Error, Result};
use crate::la::RowSpace;
use crate::poly::{IntPolynomial, RatPoly, Signature};
use crate::roots::{isolate_roots, refine_root};
use crate::Precision;

#[derive(Debug)]
pub struct NumberField {
    min_poly: IntPolynomial,
    degree: usize,
    /// isolating disk for the chosen root of `min_poly`
    root: ComplexBall,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly && self.root.overlaps(&other.root)
    }
}

impl NumberField {
    /// The rational field, presented as Q[t]/(t).
    pub fn rationals() -> Arc<Self> {
        let min_poly = IntPolynomial::from_i64(&[0, 1]);
        Arc::new(Self {
            min_poly,
            degree: 1,
            root: ComplexBall::zero(64),
        })
    }

    /// Q(sqrt(-d)) for a positive integer d, with t mapped to +i*sqrt(d).
    pub fn imaginary_quadratic(d: i64, precision: &Precision) -> Result<Arc<Self>> {
        if d <= 0 {
            return Err(Error::Invalid(format!(
                "imaginary quadratic field needs d > 0, got {d}"
            )));
        }
        Self::new(IntPolynomial::from_i64(&[d, 0, 1]), precision)
    }

    /// Build a field from a monic irreducible polynomial, choosing the root
    /// with the largest imaginary part (ties: largest real part).
    pub fn new(min_poly: IntPolynomial, precision: &Precision) -> Result<Arc<Self>> {
        Self::check_defining(&min_poly)?;
        let degree = min_poly.degree();
        if degree == 1 {
            // t + c: the root is -c, exactly representable
            let c = Rational::from(min_poly.constant());
            let root = ComplexBall::from_rationals(&-c, &Rational::new(), precision.bits);
            return Ok(Arc::new(Self {
                min_poly,
                degree,
                root,
            }));
        }
        let root = precision.escalate(|bits| {
            let disks = isolate_roots(&min_poly, &Precision::new(bits, bits))?;
            chosen_root(&disks).ok_or(Error::PrecisionExhausted(bits))
        })?;
        Ok(Arc::new(Self {
            min_poly,
            degree,
            root,
        }))
    }

    /// Build a field whose chosen root is the unique root of `min_poly`
    /// inside `hint` (used to give a subfield the embedding induced by its
    /// parent field).
    pub fn with_root_in(
        min_poly: IntPolynomial,
        hint: &ComplexBall,
        precision: &Precision,
    ) -> Result<Arc<Self>> {
        Self::check_defining(&min_poly)?;
        let degree = min_poly.degree();
        let root = precision.escalate(|bits| {
            let disks = isolate_roots(&min_poly, &Precision::new(bits, bits))?;
            let inside: Vec<&ComplexBall> =
                disks.iter().filter(|d| d.overlaps(hint)).collect();
            match inside.len() {
                1 => Ok(inside[0].clone()),
                _ => Err(Error::PrecisionExhausted(bits)),
            }
        })?;
        Ok(Arc::new(Self {
            min_poly,
            degree,
            root,
        }))
    }

    fn check_defining(min_poly: &IntPolynomial) -> Result<()> {
        if min_poly.degree() == 0 {
            return Err(Error::Invalid("defining polynomial is constant".into()));
        }
        if !min_poly.is_monic() {
            return Err(Error::Invalid("defining polynomial must be monic".into()));
        }
        if !min_poly.is_irreducible()? {
            return Err(Error::Reducible);
        }
        Ok(())
    }

    pub fn min_poly(&self) -> &IntPolynomial {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Signature (real places, complex places) of the field.
    pub fn signature(&self) -> Result<Signature> {
        self.min_poly.signature()
    }

    /// A disk around the chosen root, certified to contain it, with radius
    /// roughly at the requested precision.
    pub fn root_ball(&self, bits: u32) -> Result<ComplexBall> {
        if self.degree == 1 {
            return Ok(self.root.clone());
        }
        Precision::new(bits, bits.saturating_mul(8).max(8192))
            .escalate(|b| refine_root(&self.min_poly, &self.root, b))
    }

    pub fn element(self: &Arc<Self>, coords: Vec<Rational>) -> FieldElement {
        assert!(coords.len() <= self.degree);
        let mut coords = coords;
        coords.resize(self.degree, Rational::new());
        FieldElement {
            field: Arc::clone(self),
            coords,
        }
    }

    pub fn from_rational(self: &Arc<Self>, c: Rational) -> FieldElement {
        self.element(vec![c])
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.element(vec![])
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_rational(Rational::from(1))
    }

    /// The image of t, i.e. the chosen root as a field element.
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        if self.degree == 1 {
            let c = Rational::from(self.min_poly.constant());
            self.from_rational(-c)
        } else {
            self.element(vec![Rational::new(), Rational::from(1)])
        }
    }
}

/// Pick the root with the largest imaginary part, ties by real part.
/// Returns None when the ordering cannot be certified at this precision
/// (genuinely equal imaginary parts fall through to a certified real-part
/// comparison, so only near-ties fail).
fn chosen_root(disks: &[ComplexBall]) -> Option<ComplexBall> {
    let mut best = disks.first()?.clone();
    for d in &disks[1..] {
        let im_cmp_gt = d.im().certainly_gt(&best.im());
        let im_cmp_lt = d.im().certainly_lt(&best.im());
        if im_cmp_gt {
            best = d.clone();
        } else if !im_cmp_lt {
            // imaginary parts indistinguishable: require a decisive real part
            if d.re().certainly_gt(&best.re()) {
                best = d.clone();
            } else if !d.re().certainly_lt(&best.re()) {
                return None;
            }
        }
    }
    Some(best)
}

#[derive(Debug, Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    /// coordinates in the power basis 1, t, ..., t^(n-1)
    coords: Vec<Rational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl FieldElement {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Exact zero test: the power basis is a Q-basis, so an element is zero
    /// iff every coordinate is zero.
    pub fn is_zero(&self) -> bool {
        self.coords
            .iter()
            .all(|c| c.cmp0() == std::cmp::Ordering::Equal)
    }

    pub fn is_rational(&self) -> Option<Rational> {
        if self.coords[1..]
            .iter()
            .all(|c| c.cmp0() == std::cmp::Ordering::Equal)
        {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn same_field(&self, o: &Self) -> Result<()> {
        if self.field == o.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        let coords = self
            .coords
            .iter()
            .zip(&o.coords)
            .map(|(a, b)| Rational::from(a + b))
            .collect();
        Ok(Self {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        let coords = self
            .coords
            .iter()
            .zip(&o.coords)
            .map(|(a, b)| Rational::from(a - b))
            .collect();
        Ok(Self {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| -Rational::from(c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|x| Rational::from(x * c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        let prod = RatPoly::new(self.coords.clone()).mul(&RatPoly::new(o.coords.clone()));
        let (_, rem) = prod.divrem(&self.field.min_poly.to_rat());
        let mut coords: Vec<Rational> = rem.coeffs().to_vec();
        coords.resize(self.field.degree, Rational::new());
        Ok(Self {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    pub fn sqr(&self) -> Self {
        self.mul(self).expect("same field")
    }

    pub fn pow_u32(&self, n: u32) -> Self {
        let mut acc = self.field.one();
        for _ in 0..n {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Invalid("division by zero field element".into()));
        }
        let g = RatPoly::new(self.coords.clone());
        let f = self.field.min_poly.to_rat();
        // u*g + v*f = d with d a nonzero constant (f irreducible, g != 0)
        let (d, u, _v) = xgcd(&g, &f);
        debug_assert_eq!(d.degree(), 0);
        let dinv = Rational::from(1) / d.coeff(0);
        let (_, rem) = u.scale(&dinv).divrem(&f);
        let mut coords: Vec<Rational> = rem.coeffs().to_vec();
        coords.resize(self.field.degree, Rational::new());
        Ok(Self {
            field: Arc::clone(&self.field),
            coords,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    /// Image under the chosen embedding, as a certified ball.
    pub fn embed(&self, bits: u32) -> Result<ComplexBall> {
        let root = self.field.root_ball(bits)?;
        let mut acc = ComplexBall::zero(bits);
        for c in self.coords.iter().rev() {
            acc = acc
                .mul(&root)
                .add(&ComplexBall::from_rationals(c, &Rational::new(), bits));
        }
        Ok(acc)
    }

    /// Minimal polynomial over Q, monic, plus its primitive integer scaling.
    pub fn minimal_polynomial(&self) -> MinimalPolynomial {
        let n = self.field.degree;
        let mut space = RowSpace::new(n);
        let mut power = self.field.one();
        loop {
            match space.insert(&power.coords) {
                Ok(()) => power = power.mul(self).expect("same field"),
                Err(combo) => {
                    // x^k = sum combo_i x^i, so minpoly = x^k - sum combo_i x^i
                    let k = combo.len();
                    let mut coeffs: Vec<Rational> =
                        combo.into_iter().map(|c| -c).collect();
                    coeffs.push(Rational::from(1));
                    debug_assert_eq!(coeffs.len(), k + 1);
                    let monic = RatPoly::new(coeffs);
                    let (primitive, _) = monic.primitive_int();
                    return MinimalPolynomial { monic, primitive };
                }
            }
        }
    }

    /// An element is an algebraic integer iff its monic minimal polynomial
    /// has integer coefficients.
    pub fn is_algebraic_integer(&self) -> bool {
        self.minimal_polynomial()
            .monic
            .coeffs()
            .iter()
            .all(|c| c.is_integer())
    }

    /// Sign of the element at each real place of its field, in the order the
    /// real roots of the defining polynomial appear on the line. Zero never
    /// occurs for nonzero elements (field embeddings are injective).
    pub fn signs_at_real_places(&self, precision: &Precision) -> Result<Vec<i8>> {
        let f = &self.field.min_poly;
        if self.field.degree == 1 {
            let c = &self.coords[0];
            return Ok(vec![match c.cmp0() {
                std::cmp::Ordering::Less => -1,
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => 1,
            }]);
        }
        let intervals = f.isolate_real_roots()?;
        if self.is_zero() {
            return Ok(vec![0; intervals.len()]);
        }
        let g = RatPoly::new(self.coords.clone());
        intervals
            .iter()
            .map(|iv| {
                precision.escalate(|bits| {
                    let x = f.refine_real_root(iv, bits);
                    let v = eval_rat_poly_real(&g, &x, bits);
                    if v.certainly_positive() {
                        Ok(1)
                    } else if v.certainly_negative() {
                        Ok(-1)
                    } else {
                        Err(Error::PrecisionExhausted(bits))
                    }
                })
            })
            .collect()
    }
}

fn eval_rat_poly_real(g: &RatPoly, x: &RealBall, bits: u32) -> RealBall {
    let mut acc = RealBall::from_i64(0, bits);
    for c in g.coeffs().iter().rev() {
        acc = acc.mul(x).add(&RealBall::from_rational(c, bits));
    }
    acc
}

#[derive(Debug, Clone)]
pub struct MinimalPolynomial {
    /// monic minimal polynomial over Q
    pub monic: RatPoly,
    /// primitive integer polynomial with the same roots
    pub primitive: IntPolynomial,
}

/// Extended Euclid over Q[t]: returns (g, u, v) with u*a + v*b = g.
fn xgcd(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = RatPoly::one();
    let mut s1 = RatPoly::zero();
    let mut t0 = RatPoly::zero();
    let mut t1 = RatPoly::one();
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    (r0, s0, t0)
}

/// A subfield of an ambient number field, generated by a finite set of
/// elements, with its own abstract presentation. The chosen embedding of the
/// subfield is the restriction of the ambient one.
#[derive(Debug)]
pub struct Subfield {
    pub field: Arc<NumberField>,
    /// integral primitive element, as an element of the ambient field
    pub delta: FieldElement,
    /// powers of delta in ambient coordinates, for membership queries
    powers: RowSpace,
}

impl Subfield {
    /// Express an ambient element in the subfield, if it lies there.
    pub fn express(&self, e: &FieldElement) -> Option<FieldElement> {
        let coords = self.powers.express(e.coords())?;
        Some(self.field.element(coords))
    }

    pub fn contains(&self, e: &FieldElement) -> bool {
        self.powers.express(e.coords()).is_some()
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }
}

/// The subfield Q(gens...) of the common ambient field of the generators.
pub fn subfield_generated(
    gens: &[FieldElement],
    precision: &Precision,
) -> Result<Subfield> {
    let ambient = match gens.first() {
        Some(g) => Arc::clone(g.field()),
        None => return Err(Error::Invalid("no generators for subfield".into())),
    };
    for g in gens {
        if *g.field() != ambient {
            return Err(Error::FieldMismatch);
        }
    }
    let n = ambient.degree();

    // close the span of {1} under multiplication by the generators
    let mut space = RowSpace::new(n);
    let mut basis: Vec<FieldElement> = Vec::new();
    let one = ambient.one();
    space.insert(one.coords()).expect("1 is independent");
    basis.push(one);
    let mut frontier = basis.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for b in &frontier {
            for g in gens {
                let prod = b.mul(g)?;
                if space.insert(prod.coords()).is_ok() {
                    next.push(prod.clone());
                    basis.push(prod);
                }
            }
        }
        frontier = next;
    }
    let dim = space.rank();

    // primitive element: try gamma = sum m^(i-1) * basis_i over small m
    let mut gamma = None;
    for m in 1i64..=64 {
        let mut cand = ambient.zero();
        let mut weight = Rational::from(1);
        for b in &basis[1..] {
            cand = cand.add(&b.scale(&weight))?;
            weight *= Rational::from(m);
        }
        if dim == 1 {
            cand = ambient.one();
        }
        if cand.minimal_polynomial().monic.degree() == dim {
            gamma = Some(cand);
            break;
        }
    }
    let gamma = gamma.ok_or_else(|| {
        Error::Invalid("no primitive element found for subfield".into())
    })?;

    // scale to an algebraic integer: N = lcm of denominators of the monic
    // minimal polynomial; N*gamma then has a monic integer minimal polynomial
    let mp = gamma.minimal_polynomial();
    let mut ncm = Integer::from(1);
    for c in mp.monic.coeffs() {
        ncm.lcm_mut(c.denom());
    }
    let delta = gamma.scale(&Rational::from(&ncm));
    let delta_mp = delta.minimal_polynomial();
    debug_assert!(delta_mp.monic.coeffs().iter().all(|c| c.is_integer()));
    let defining = IntPolynomial::new(
        delta_mp
            .monic
            .coeffs()
            .iter()
            .map(|c| Integer::from(c.numer()))
            .collect(),
    );

    // the subfield inherits the ambient embedding: its root is where delta
    // actually lands
    let hint = delta.embed(precision.bits)?;
    let field = NumberField::with_root_in(defining, &hint, precision)?;

    let mut powers = RowSpace::new(n);
    let mut p = ambient.one();
    for _ in 0..dim {
        powers
            .insert(p.coords())
            .map_err(|_| Error::Invalid("delta powers dependent below degree".into()))?;
        p = p.mul(&delta)?;
    }

    Ok(Subfield {
        field,
        delta,
        powers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn quadratic_arithmetic() {
        // K = Q(i), t -> i (largest imaginary part)
        let k = NumberField::imaginary_quadratic(1, &Precision::default()).unwrap();
        let i = k.generator();
        assert!(i.sqr().add(&k.one()).unwrap().is_zero());
        // (1+i)(1-i) = 2
        let a = k.one().add(&i).unwrap();
        let b = k.one().sub(&i).unwrap();
        assert_eq!(a.mul(&b).unwrap().is_rational(), Some(q(2, 1)));
        // 1/(1+i) = (1-i)/2
        let inv = a.inv().unwrap();
        assert_eq!(inv.coords(), &[q(1, 2), q(-1, 2)]);
    }

    #[test]
    fn chosen_root_has_positive_imag() {
        let k = NumberField::imaginary_quadratic(3, &Precision::default()).unwrap();
        let t = k.generator();
        let ball = t.embed(128).unwrap();
        assert!(ball.im().certainly_positive());
        let sqrt3 = Rational::from(3);
        // t^2 = -3
        assert_eq!(t.sqr().is_rational(), Some(-sqrt3));
    }

    #[test]
    fn minimal_polynomial_example() {
        // -3 + i in Q(i): minpoly t^2 + 6t + 10
        let k = NumberField::imaginary_quadratic(1, &Precision::default()).unwrap();
        let e = k.from_rational(q(-3, 1)).add(&k.generator()).unwrap();
        let mp = e.minimal_polynomial();
        assert_eq!(mp.primitive, IntPolynomial::from_i64(&[10, 6, 1]));
        assert!(e.is_algebraic_integer());
        // half-integer is not an algebraic integer
        assert!(!k.from_rational(q(1, 2)).is_algebraic_integer());
        // (1+sqrt(-3))/2 is an algebraic integer (Eisenstein)
        let k3 = NumberField::imaginary_quadratic(3, &Precision::default()).unwrap();
        let omega = k3
            .from_rational(q(1, 2))
            .add(&k3.generator().scale(&q(1, 2)))
            .unwrap();
        assert!(omega.is_algebraic_integer());
        // but (1+sqrt(-1))/2 is not
        let half = k
            .from_rational(q(1, 2))
            .add(&k.generator().scale(&q(1, 2)))
            .unwrap();
        assert!(!half.is_algebraic_integer());
    }

    #[test]
    fn signs_at_real_places_of_real_quadratic() {
        // K = Q(sqrt 2) via t^2 - 2; two real places t -> -sqrt2, +sqrt2
        let k = NumberField::new(IntPolynomial::from_i64(&[-2, 0, 1]), &Precision::default())
            .unwrap();
        let t = k.generator();
        let signs = t.signs_at_real_places(&Precision::default()).unwrap();
        assert_eq!(signs, vec![-1, 1]);
        // 3 - t^2 = 1 > 0 everywhere... use 1 + t: negative at -sqrt2, positive at +sqrt2
        let e = k.one().add(&t).unwrap();
        assert_eq!(
            e.signs_at_real_places(&Precision::default()).unwrap(),
            vec![-1, 1]
        );
        let c = k.from_rational(q(-5, 1));
        assert_eq!(
            c.signs_at_real_places(&Precision::default()).unwrap(),
            vec![-1, -1]
        );
    }

    #[test]
    fn subfield_of_quartic() {
        // K = Q(zeta_12) ~ Q[t]/(t^4 - t^2 + 1); t^2 generates Q(sqrt(-3))...
        // actually t^2 is a primitive 6th root of unity, Q(t^2) = Q(sqrt(-3))
        let prec = Precision::default();
        let k = NumberField::new(IntPolynomial::from_i64(&[1, 0, -1, 0, 1]), &prec).unwrap();
        let t2 = k.generator().sqr();
        let sub = subfield_generated(&[t2.clone()], &prec).unwrap();
        assert_eq!(sub.degree(), 2);
        assert!(sub.contains(&t2));
        assert!(sub.contains(&k.from_rational(q(7, 3))));
        assert!(!sub.contains(&k.generator()));
        // expressing and re-embedding agree
        let inside = sub.express(&t2).unwrap();
        let a = inside.embed(128).unwrap();
        let b = t2.embed(128).unwrap();
        assert!(a.overlaps(&b));
    }

    #[test]
    fn subfield_trivial_is_q() {
        let prec = Precision::default();
        let k = NumberField::imaginary_quadratic(2, &prec).unwrap();
        let sub = subfield_generated(&[k.from_rational(q(5, 1))], &prec).unwrap();
        assert_eq!(sub.degree(), 1);
        assert!(sub.contains(&k.from_rational(q(-3, 7))));
        assert!(!sub.contains(&k.generator()));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let prec = Precision::default();
        let k1 = NumberField::imaginary_quadratic(1, &prec).unwrap();
        let k2 = NumberField::imaginary_quadratic(2, &prec).unwrap();
        assert!(matches!(
            k1.one().add(&k2.one()),
            Err(Error::FieldMismatch)
        ));
    }
}
