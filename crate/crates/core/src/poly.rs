//! Integer and rational univariate polynomials: evaluation, gcd, Sturm
//! sequences, real root isolation and refinement, and irreducibility
//! certification for the small degrees this crate works with.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::ball::{ComplexBall, RealBall};
use crate::error::{Error, Result};

/// Polynomial with arbitrary-size integer coefficients, lowest degree first.
/// The zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0() == std::cmp::Ordering::Equal) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == 1)
    }

    pub fn constant(&self) -> Integer {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| Rational::from(c)).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| Integer::from(c * (i as u32 + 1)))
                .collect(),
        )
    }

    /// Content (gcd of coefficients, positive) — zero polynomial gives 0.
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.cmp0() == std::cmp::Ordering::Equal {
            return Self::zero();
        }
        let mut out: Vec<Integer> = self.coeffs.iter().map(|c| Integer::from(c / &g)).collect();
        if out.last().is_some_and(|c| c.is_negative()) {
            for c in &mut out {
                *c = Integer::from(-&*c);
            }
        }
        Self::new(out)
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from(c);
        }
        acc
    }

    pub fn eval_complex_ball(&self, x: &ComplexBall, prec: u32) -> ComplexBall {
        let mut acc = ComplexBall::zero(prec);
        for c in self.coeffs.iter().rev() {
            let c = ComplexBall::from_rationals(&Rational::from(c), &Rational::new(), prec);
            acc = acc.mul(x).add(&c);
        }
        acc
    }

    pub fn eval_real_ball(&self, x: &RealBall, prec: u32) -> RealBall {
        let mut acc = RealBall::from_i64(0, prec);
        for c in self.coeffs.iter().rev() {
            let c = RealBall::from_rational(&Rational::from(c), prec);
            acc = acc.mul(x).add(&c);
        }
        acc
    }

    /// Cauchy root bound: all roots have |z| < 1 + max |a_i| / |a_n|.
    pub fn root_bound(&self) -> Rational {
        let lead = match self.leading() {
            Some(l) => l,
            None => return Rational::from(1),
        };
        let mut m = Rational::new();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let q = Rational::from((Integer::from(c.abs_ref()), Integer::from(lead.abs_ref())));
            if q > m {
                m = q;
            }
        }
        m + Rational::from(1)
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let g = self.to_rat().gcd(&self.derivative().to_rat());
        g.degree() == 0
    }

    /// Number of real and complex places of the field Q[t]/(p).
    pub fn signature(&self) -> Result<Signature> {
        if !self.is_squarefree() {
            return Err(Error::NonSquarefree);
        }
        let chain = SturmChain::new(&self.to_rat());
        let r1 = chain.count_all_real_roots();
        let degree = self.degree();
        Ok(Signature {
            real_places: r1,
            complex_places: (degree - r1) / 2,
        })
    }

    /// Isolating intervals (a, b] with rational endpoints, one real root each,
    /// sorted increasingly. Exact rational roots come back as point
    /// intervals [r, r].
    pub fn isolate_real_roots(&self) -> Result<Vec<(Rational, Rational)>> {
        if !self.is_squarefree() {
            return Err(Error::NonSquarefree);
        }
        let chain = SturmChain::new(&self.to_rat());
        let bound = self.root_bound();
        let mut out = Vec::new();
        let lo = -bound.clone();
        let hi = bound;
        // make sure the endpoints are not roots (the bound is strict)
        let mut stack = vec![(lo, hi)];
        while let Some((a, b)) = stack.pop() {
            let n = chain.count_roots_open_closed(&a, &b);
            if n == 0 {
                continue;
            }
            let fb_zero = self.eval_rational(&b).cmp0() == std::cmp::Ordering::Equal;
            if n == 1 {
                if fb_zero {
                    // the single root of (a, b] is b itself, already recorded
                    // when it appeared as a midpoint
                    continue;
                }
                out.push((a, b));
                continue;
            }
            let mid = (a.clone() + &b) / Rational::from(2);
            if self.eval_rational(&mid).cmp0() == std::cmp::Ordering::Equal {
                out.push((mid.clone(), mid.clone()));
            }
            stack.push((a, mid.clone()));
            stack.push((mid, b));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        Ok(out)
    }

    /// Shrink an isolating interval around a single simple real root and
    /// return a ball of radius about 2^-prec.
    pub fn refine_real_root(&self, interval: &(Rational, Rational), prec: u32) -> RealBall {
        let (mut a, mut b) = interval.clone();
        if a == b {
            return RealBall::from_rational(&a, prec);
        }
        // bisection on the sign change; an endpoint evaluating to zero cannot
        // happen for isolating intervals produced above
        // the open endpoint a may itself be a different root; move it inward
        // without skipping past the isolated root
        let chain = SturmChain::new(&self.to_rat());
        while self.eval_rational(&a).cmp0() == std::cmp::Ordering::Equal {
            let cand = (a.clone() * Rational::from(3) + &b) / Rational::from(4);
            if self.eval_rational(&cand).cmp0() == std::cmp::Ordering::Equal {
                return RealBall::from_rational(&cand, prec);
            }
            if chain.count_roots_open_closed(&cand, &b) == 1 {
                a = cand;
            } else {
                b = cand;
            }
        }
        let mut fa = self.eval_rational(&a);
        let target = Rational::from((Integer::from(1), Integer::from(1) << prec));
        while (b.clone() - &a).abs() > target {
            let mid = (a.clone() + &b) / Rational::from(2);
            let fm = self.eval_rational(&mid);
            if fm.cmp0() == std::cmp::Ordering::Equal {
                return RealBall::from_rational(&mid, prec);
            }
            if (fm < 0) == (fa < 0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        let mid = (a.clone() + &b) / Rational::from(2);
        let rad = (b - a) / Rational::from(2);
        let m = RealBall::from_rational(&mid, prec.max(crate::ball::RAD_PREC));
        let r = RealBall::from_rational(&rad, crate::ball::RAD_PREC);
        RealBall::new(m.mid().clone(), r.upper_bound().abs() + m.rad().clone())
    }

    /// Irreducibility over Q, certified. Handles the degrees used by this
    /// crate exactly; very high degrees may come back undecided.
    pub fn is_irreducible(&self) -> Result<bool> {
        let p = self.primitive_part();
        let n = p.degree();
        if p.is_zero() || n == 0 {
            return Ok(false);
        }
        if n == 1 {
            return Ok(true);
        }
        if !p.is_squarefree() {
            return Ok(false);
        }
        if p.has_rational_root() {
            return Ok(false);
        }
        if n <= 3 {
            // a reducible cubic or quadratic has a linear factor
            return Ok(true);
        }
        if crate::modp::certifies_irreducible(&p) {
            return Ok(true);
        }
        if n == 4 && p.is_monic() {
            return Ok(!p.has_monic_quadratic_factor());
        }
        Err(Error::IrreducibilityUndecided)
    }

    fn has_rational_root(&self) -> bool {
        // roots p/q with p | a_0, q | a_n
        let a0 = self.constant();
        let an = self.leading().cloned().unwrap_or_default();
        if a0.cmp0() == std::cmp::Ordering::Equal {
            return true;
        }
        let ps = divisors(&a0);
        let qs = divisors(&an);
        for q in &qs {
            for p in &ps {
                for sign in [1i32, -1] {
                    let cand = Rational::from((Integer::from(p * sign), q.clone()));
                    if self.eval_rational(&cand).cmp0() == std::cmp::Ordering::Equal {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Exhaustive search for a monic quadratic integer factor of a monic
    /// quartic. The constant term of a factor divides the constant term.
    fn has_monic_quadratic_factor(&self) -> bool {
        debug_assert!(self.degree() == 4 && self.is_monic());
        let a0 = self.constant();
        if a0.cmp0() == std::cmp::Ordering::Equal {
            return true;
        }
        // coefficient bound for factors of monic p: 2^n * max|a_i|
        let mut maxc = Integer::from(1);
        for c in &self.coeffs {
            if c.clone().abs() > maxc {
                maxc = c.clone().abs();
            }
        }
        let bound = maxc * Integer::from(16);
        let bnd_i = bound.to_i64().unwrap_or(i64::MAX / 2);
        for q in divisors(&a0) {
            for qs in [Integer::from(&q), Integer::from(-&q)] {
                for p in -bnd_i..=bnd_i {
                    let fac = IntPolynomial::new(vec![
                        qs.clone(),
                        Integer::from(p),
                        Integer::from(1),
                    ]);
                    if self.to_rat().divrem(&fac.to_rat()).1.is_zero() {
                        return true;
                    }
                }
            }
        }
        false
    }
}

fn divisors(n: &Integer) -> Vec<Integer> {
    let n = Integer::from(n.abs_ref());
    let mut out = Vec::new();
    let mut d = Integer::from(1);
    while Integer::from(&d * &d) <= n {
        if n.is_divisible(&d) {
            out.push(d.clone());
            let other = Integer::from(&n / &d);
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

/// Field signature: r1 real places, r2 conjugate pairs of complex places.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Signature {
    pub real_places: usize,
    pub complex_places: usize,
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0() == std::cmp::Ordering::Equal) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![Rational::from(1)],
        }
    }

    pub fn monomial(deg: usize) -> Self {
        let mut coeffs = vec![Rational::new(); deg + 1];
        coeffs[deg] = Rational::from(1);
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == 1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = vec![Rational::new(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Self::new(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(c * s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::new(out)
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot =
            vec![Rational::new(); (self.coeffs.len() + 1).saturating_sub(d.coeffs.len())];
        let dl = d.leading().unwrap().clone();
        while !rem.is_zero() && rem.coeffs.len() >= d.coeffs.len() {
            let shift = rem.degree() - d.degree();
            let factor = Rational::from(rem.leading().unwrap() / &dl);
            let mut term = vec![Rational::new(); shift + 1];
            term[shift] = factor.clone();
            quot[shift] = factor;
            let t = Self::new(term);
            rem = rem.sub(&t.mul(d));
        }
        (Self::new(quot), rem)
    }

    /// Monic gcd over Q.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if let Some(l) = a.leading().cloned() {
            a = a.scale(&(Rational::from(1) / l));
        }
        a
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| Rational::from(c * Rational::from(i as u32 + 1)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Clear denominators: returns (primitive integer polynomial, content)
    /// with self = content * primitive.
    pub fn primitive_int(&self) -> (IntPolynomial, Rational) {
        if self.is_zero() {
            return (IntPolynomial::zero(), Rational::new());
        }
        let mut lcm = Integer::from(1);
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| {
                let v = Rational::from(c * Rational::from(&lcm));
                debug_assert!(*v.denom() == 1);
                v.numer().clone()
            })
            .collect();
        let ip = IntPolynomial::new(ints);
        let prim = ip.primitive_part();
        // content = self / prim, determined from leading coefficients
        let content = Rational::from(self.leading().unwrap())
            / Rational::from(prim.leading().unwrap());
        (prim, content)
    }
}

/// Sturm chain of a squarefree rational polynomial.
pub struct SturmChain {
    chain: Vec<RatPoly>,
}

impl SturmChain {
    pub fn new(p: &RatPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].divrem(&chain[n - 1]);
            chain.push(r.neg());
        }
        chain.pop();
        Self { chain }
    }

    fn variations_at(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let v = p.eval(x);
            let s = match v.cmp0() {
                std::cmp::Ordering::Less => -1,
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => 1,
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            if p.is_zero() {
                continue;
            }
            let lead = p.leading().unwrap();
            let mut s = if lead.cmp0() == std::cmp::Ordering::Less {
                -1i8
            } else {
                1
            };
            if !positive && p.degree() % 2 == 1 {
                s = -s;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in (a, b].
    pub fn count_roots_open_closed(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    pub fn count_all_real_roots(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }
}

/// The classical squared-difference product bound for r points in [-1, 1]:
/// M_r = (2^2 3^3 ... r^r) * (2^2 3^3 ... (r-2)^(r-2)) / (3^3 5^5 ... (2r-3)^(2r-3)).
pub fn m_r(r: usize) -> Rational {
    assert!(r >= 3, "m_r needs r >= 3");
    let mut num = Integer::from(1);
    for j in 2..=r {
        num *= Integer::from(j).pow(j as u32);
    }
    for j in 2..=r.saturating_sub(2) {
        num *= Integer::from(j).pow(j as u32);
    }
    let mut den = Integer::from(1);
    let mut j = 3usize;
    while j <= 2 * r - 3 {
        den *= Integer::from(j).pow(j as u32);
        j += 2;
    }
    Rational::from((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(coeffs)
    }

    #[test]
    fn signature_examples() {
        // t^2 + 2 -> (0, 1); t^2 - 2 -> (2, 0); t^3 - 2 -> (1, 1)
        assert_eq!(
            p(&[2, 0, 1]).signature().unwrap(),
            Signature { real_places: 0, complex_places: 1 }
        );
        assert_eq!(
            p(&[-2, 0, 1]).signature().unwrap(),
            Signature { real_places: 2, complex_places: 0 }
        );
        assert_eq!(
            p(&[-2, 0, 0, 1]).signature().unwrap(),
            Signature { real_places: 1, complex_places: 1 }
        );
    }

    #[test]
    fn signature_rejects_nonsquarefree() {
        // (t-1)^2
        assert_eq!(p(&[1, -2, 1]).signature(), Err(Error::NonSquarefree));
    }

    #[test]
    fn isolate_and_refine() {
        // t^3 - 3t - 1 has three real roots; the largest is near 1.879
        let f = p(&[-1, -3, 0, 1]);
        let roots = f.isolate_real_roots().unwrap();
        assert_eq!(roots.len(), 3);
        let b = f.refine_real_root(&roots[2], 64);
        assert!((b.to_f64() - 1.8793852415718).abs() < 1e-10);
    }

    #[test]
    fn exact_rational_root_isolated_as_point() {
        // (t - 1/2) * (t^2 + 1) scaled: 2t^3 - t^2 + 2t - 1
        let f = p(&[-1, 2, -1, 2]);
        let roots = f.isolate_real_roots().unwrap();
        assert_eq!(roots.len(), 1);
        let b = f.refine_real_root(&roots[0], 64);
        assert!(b.contains_rational(&Rational::from((1, 2))));
    }

    #[test]
    fn irreducibility() {
        assert!(p(&[3, 0, 1]).is_irreducible().unwrap()); // t^2 + 3
        assert!(p(&[1, -1, 1]).is_irreducible().unwrap()); // t^2 - t + 1
        assert!(!p(&[-1, 0, 1]).is_irreducible().unwrap()); // t^2 - 1
        assert!(!p(&[1, 2, 1]).is_irreducible().unwrap()); // (t+1)^2
        assert!(p(&[-2, 0, 0, 1]).is_irreducible().unwrap()); // t^3 - 2
        assert!(p(&[1, 0, 0, 0, 1]).is_irreducible().unwrap()); // t^4 + 1
        assert!(!p(&[4, 0, 0, 0, 1]).is_irreducible().unwrap()); // t^4+4 = (t^2-2t+2)(t^2+2t+2)
        assert!(p(&[1, 1, 1, 1, 1]).is_irreducible().unwrap()); // cyclotomic Phi_5
    }

    #[test]
    fn m_r_values() {
        assert_eq!(m_r(3), Rational::from(4));
        assert_eq!(m_r(4), Rational::from((110592, 84375)));
    }

    #[test]
    fn gcd_and_divrem() {
        let a = p(&[-1, 0, 1]).to_rat(); // t^2 - 1
        let b = p(&[-1, 1]).to_rat(); // t - 1
        let g = a.gcd(&b);
        assert_eq!(g.degree(), 1);
        assert!(g.is_monic());
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q.degree(), 1);
    }

    #[test]
    fn primitive_int_roundtrip() {
        let q = RatPoly::new(vec![
            Rational::from((1, 2)),
            Rational::from((-3, 4)),
            Rational::from(1),
        ]);
        let (prim, content) = q.primitive_int();
        let back = prim.to_rat().scale(&content);
        assert_eq!(back, q);
    }
}
