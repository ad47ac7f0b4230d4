//! Irreducibility certification over Q via factor-degree patterns mod p.
//!
//! For a squarefree primitive integer polynomial, the multiset of factor
//! degrees mod a good prime constrains the degrees of any rational factor:
//! a factor of degree d over Q reduces to a product of mod-p factors whose
//! degrees sum to d. Intersecting the feasible proper-factor degree sets
//! across several primes often leaves nothing, which certifies
//! irreducibility. This is a one-sided test: `false` means inconclusive.

use rug::Integer;

use crate::poly::IntPolynomial;

const PRIMES: [u64; 25] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101,
];

pub fn certifies_irreducible(p: &IntPolynomial) -> bool {
    let n = p.degree();
    if n <= 1 {
        return n == 1;
    }
    // feasible degrees of a proper monic factor over Q
    let mut feasible: Vec<bool> = vec![true; n];
    feasible[0] = false; // degree-0 factors are units
    let mut used_primes = 0;
    for &q in PRIMES.iter() {
        let Some(degrees) = factor_degrees_mod_p(p, q) else {
            continue;
        };
        used_primes += 1;
        if degrees.len() == 1 {
            // irreducible mod q
            return true;
        }
        let sums = subset_sums(&degrees, n);
        for d in 1..n {
            if !sums[d] {
                feasible[d] = false;
            }
        }
        if feasible[1..].iter().all(|&f| !f) {
            return true;
        }
        if used_primes >= 12 {
            break;
        }
    }
    false
}

/// Degrees of the irreducible factors of p mod q, or None when q divides the
/// leading coefficient or the reduction is not squarefree.
fn factor_degrees_mod_p(p: &IntPolynomial, q: u64) -> Option<Vec<usize>> {
    let coeffs: Vec<u64> = p
        .coeffs()
        .iter()
        .map(|c| {
            let r = Integer::from(c % Integer::from(q));
            if r.is_negative() {
                (r + Integer::from(q)).to_u64().unwrap()
            } else {
                r.to_u64().unwrap()
            }
        })
        .collect();
    let f = ModPoly::new(coeffs, q);
    if f.coeffs.len() != p.coeffs().len() {
        return None; // leading coefficient vanished
    }
    let fp = f.derivative();
    if !f.gcd(&fp).is_one() {
        return None; // not squarefree mod q
    }
    // distinct-degree factorization: g_d = gcd(x^(q^d) - x, f)
    let mut rest = f.clone().monic();
    let mut degrees = Vec::new();
    let mut h = ModPoly::x(q); // x^(q^d) mod rest, starting at d = 0
    let mut d = 0usize;
    while rest.degree() > 0 {
        d += 1;
        if rest.degree() < 2 * d {
            // what is left is irreducible
            degrees.push(rest.degree());
            break;
        }
        h = h.pow_mod(q, &rest);
        let diff = h.sub(&ModPoly::x(q));
        let g = rest.gcd(&diff).monic();
        if g.degree() > 0 {
            for _ in 0..g.degree() / d {
                degrees.push(d);
            }
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
        }
    }
    Some(degrees)
}

fn subset_sums(degrees: &[usize], n: usize) -> Vec<bool> {
    let mut sums = vec![false; n + 1];
    sums[0] = true;
    for &d in degrees {
        for s in (0..=n.saturating_sub(d)).rev() {
            if sums[s] {
                sums[s + d] = true;
            }
        }
    }
    sums
}

/// Dense polynomial over Z/qZ for a small prime q.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ModPoly {
    coeffs: Vec<u64>,
    q: u64,
}

impl ModPoly {
    fn new(mut coeffs: Vec<u64>, q: u64) -> Self {
        for c in &mut coeffs {
            *c %= q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs, q }
    }

    fn x(q: u64) -> Self {
        Self::new(vec![0, 1], q)
    }

    fn derivative(&self) -> Self {
        let q = self.q;
        let out: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (c as u128 * (i as u128 % q as u128) % q as u128) as u64)
            .collect();
        Self::new(out, q)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn inv_mod(a: u64, q: u64) -> u64 {
        // q is prime
        let mut t = (0i128, 1i128);
        let mut r = (q as i128, (a % q) as i128);
        while r.1 != 0 {
            let quo = r.0 / r.1;
            t = (t.1, t.0 - quo * t.1);
            r = (r.1, r.0 - quo * r.1);
        }
        (t.0.rem_euclid(q as i128)) as u64
    }

    fn monic(self) -> Self {
        match self.coeffs.last() {
            None => self,
            Some(&l) if l == 1 => self,
            Some(&l) => {
                let inv = Self::inv_mod(l, self.q);
                let q = self.q;
                Self::new(
                    self.coeffs
                        .iter()
                        .map(|&c| (c as u128 * inv as u128 % q as u128) as u64)
                        .collect(),
                    q,
                )
            }
        }
    }

    fn sub(&self, o: &Self) -> Self {
        let q = self.q;
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = o.coeffs.get(i).copied().unwrap_or(0);
            out[i] = (a + q - b) % q;
        }
        Self::new(out, q)
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(vec![], self.q);
        }
        let q = self.q as u128;
        let mut out = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % q;
            }
        }
        Self::new(out.into_iter().map(|c| c as u64).collect(), self.q)
    }

    fn rem(&self, m: &Self) -> Self {
        assert!(!m.is_zero());
        let q = self.q;
        let mut r = self.coeffs.clone();
        let dm = m.degree();
        let linv = Self::inv_mod(*m.coeffs.last().unwrap(), q);
        while r.len() > dm {
            let lead = *r.last().unwrap();
            if lead != 0 {
                let factor = (lead as u128 * linv as u128 % q as u128) as u64;
                let shift = r.len() - 1 - dm;
                for (i, &mc) in m.coeffs.iter().enumerate() {
                    let sub = (factor as u128 * mc as u128 % q as u128) as u64;
                    r[shift + i] = (r[shift + i] + q - sub) % q;
                }
            }
            r.pop();
        }
        Self::new(r, q)
    }

    fn div_exact(&self, d: &Self) -> Self {
        // self = q*d exactly
        let q = self.q;
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let linv = Self::inv_mod(*d.coeffs.last().unwrap(), q);
        let mut quot = vec![0u64; self.coeffs.len() - d.coeffs.len() + 1];
        while r.len() >= d.coeffs.len() {
            let lead = *r.last().unwrap();
            let factor = (lead as u128 * linv as u128 % q as u128) as u64;
            let shift = r.len() - 1 - dd;
            quot[shift] = factor;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                let sub = (factor as u128 * dc as u128 % q as u128) as u64;
                r[shift + i] = (r[shift + i] + q - sub) % q;
            }
            while r.last() == Some(&0) {
                r.pop();
            }
            if r.len() <= dd {
                break;
            }
        }
        Self::new(quot, q)
    }

    fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// self^e mod m
    fn pow_mod(&self, e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::new(vec![1], self.q);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certifies_known_irreducibles() {
        assert!(certifies_irreducible(&IntPolynomial::from_i64(&[1, 1, 1, 1, 1]))); // Phi_5
        assert!(certifies_irreducible(&IntPolynomial::from_i64(&[2, 0, 1]))); // t^2+2
        assert!(certifies_irreducible(&IntPolynomial::from_i64(&[-2, 0, 0, 0, 0, 1]))); // t^5-2
    }

    #[test]
    fn does_not_certify_reducibles() {
        assert!(!certifies_irreducible(&IntPolynomial::from_i64(&[4, 0, 0, 0, 1]))); // t^4+4
        assert!(!certifies_irreducible(&IntPolynomial::from_i64(&[-1, 0, 1]))); // t^2-1
        // irreducible over Q but reducible mod every prime: the sieve must stay silent
        assert!(!certifies_irreducible(&IntPolynomial::from_i64(&[1, 0, 0, 0, 1]))); // t^4+1
    }

    #[test]
    fn degree_pattern_mod_p() {
        // t^2 + 1 mod 5 = (t-2)(t+2)
        let degs = factor_degrees_mod_p(&IntPolynomial::from_i64(&[1, 0, 1]), 5).unwrap();
        assert_eq!(degs, vec![1, 1]);
        // t^2 + 1 mod 3 irreducible
        let degs = factor_degrees_mod_p(&IntPolynomial::from_i64(&[1, 0, 1]), 3).unwrap();
        assert_eq!(degs, vec![2]);
    }
}
