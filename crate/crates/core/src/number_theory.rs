//! Exact scalar arithmetic: Kronecker symbols, real Dirichlet characters,
//! Bernoulli and generalized Bernoulli numbers, class numbers of imaginary
//! quadratic fields, and mod-p reduction of p-integral rationals.
//!
//! Conventions:
//! - `kronecker_symbol(a, n)` is the full Kronecker symbol (a|n), defined for
//!   all integers.
//! - `bernoulli` uses B_1 = -1/2.
//! - B_{n,chi} = f^{n-1} * sum_{a=1..f} chi(a) B_n(a/f) where f is the
//!   modulus of chi and B_n(x) the Bernoulli polynomial.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for n/d in lowest terms.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumberTheoryError {
    /// The integer is not a fundamental discriminant of an imaginary
    /// quadratic field.
    NotFundamental(i64),
    /// Requested q-factor for a prime not dividing the discriminant.
    NotARamifiedPrime { q: i64, disc: i64 },
    /// psi_m requires a coprime factorization m * (D/m) = D.
    NotACoprimeFactor { m: i64, disc: i64 },
    /// Mod-p reduction of a rational whose denominator is divisible by p.
    NotPIntegral { prime: u64 },
}

impl fmt::Display for NumberTheoryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberTheoryError::NotFundamental(d) => {
                write!(f, "{d} is not a fundamental discriminant < 0")
            }
            NumberTheoryError::NotARamifiedPrime { q, disc } => {
                write!(f, "{q} is not a prime dividing D_K = {}", -disc)
            }
            NumberTheoryError::NotACoprimeFactor { m, disc } => {
                write!(f, "{m} is not a coprime divisor of D_K = {}", -disc)
            }
            NumberTheoryError::NotPIntegral { prime } => {
                write!(f, "rational is not {prime}-integral")
            }
        }
    }
}

impl std::error::Error for NumberTheoryError {}

/// Kronecker symbol (a|n), extended to all integer pairs.
pub fn kronecker_symbol(a: i64, n: i64) -> i64 {
    let mut a = a;
    let mut n = n;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    // Strip the even part of n; (a|2) depends on a mod 8.
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    let mut k: i64 = if v % 2 == 0 {
        1
    } else {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => unreachable!("a odd because n was even"),
        }
    };
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // Jacobi loop with quadratic reciprocity; n odd positive from here.
    a = a.rem_euclid(n);
    while a != 0 {
        let mut v = 0;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 && matches!(n.rem_euclid(8), 3 | 5) {
            k = -k;
        }
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            k = -k;
        }
        let r = a;
        a = n.rem_euclid(r);
        n = r;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

/// True iff d is a (negative) fundamental discriminant.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    fn squarefree(mut n: i64) -> bool {
        let mut q = 2;
        while q * q <= n {
            if n % (q * q) == 0 {
                return false;
            }
            while n % q == 0 {
                n /= q;
            }
            q += 1;
        }
        true
    }
    if d.rem_euclid(4) == 1 {
        squarefree(-d)
    } else if d % 4 == 0 {
        let m = d / 4;
        matches!(m.rem_euclid(4), 2 | 3) && squarefree(-m)
    } else {
        false
    }
}

/// Class number of the imaginary quadratic field of fundamental discriminant
/// d, counted as the number of reduced primitive binary quadratic forms
/// (a,b,c) with b^2 - 4ac = d, |b| <= a <= c, and b >= 0 whenever |b| = a or
/// a = c.  Brute force; doubles as the independent oracle.
pub fn class_number(d: i64) -> Result<u32, NumberTheoryError> {
    if !is_fundamental_discriminant(d) {
        return Err(NumberTheoryError::NotFundamental(d));
    }
    let mut count = 0u32;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            if gcd3(a, b, c) != 1 {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    Ok(count)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    gcd(gcd(a, b), c)
}

/// Imaginary quadratic field data: fundamental discriminant d_K < 0,
/// D_K = -d_K, class number h_K and unit-group order w_K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: i64,
    h: u32,
    w: u32,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self, NumberTheoryError> {
        let h = class_number(d)?;
        let w = match d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        Ok(QuadField { d, h, w })
    }

    /// The Gaussian field Q(i), d_K = -4.
    pub fn gaussian() -> Self {
        QuadField::new(-4).expect("-4 is fundamental")
    }

    /// The Eisenstein field Q(sqrt(3) i), d_K = -3.
    pub fn eisenstein() -> Self {
        QuadField::new(-3).expect("-3 is fundamental")
    }

    pub fn disc(&self) -> i64 {
        self.d
    }

    /// D_K = -d_K > 0.
    pub fn disc_abs(&self) -> i64 {
        -self.d
    }

    pub fn class_number(&self) -> u32 {
        self.h
    }

    pub fn unit_count(&self) -> u32 {
        self.w
    }

    /// The Kronecker character chi_K(n) = (d_K | n).
    pub fn chi(&self, n: i64) -> i64 {
        kronecker_symbol(self.d, n)
    }

    /// Ramified primes, i.e. the primes dividing D_K.
    pub fn ramified_primes(&self) -> Vec<i64> {
        let mut out = Vec::new();
        let mut n = self.disc_abs();
        let mut q = 2;
        while q * q <= n {
            if n % q == 0 {
                out.push(q);
                while n % q == 0 {
                    n /= q;
                }
            }
            q += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Prime discriminant factorization d_K = prod d_q, with
    /// d_q in {-4, 8, -8} for q = 2 and d_q = (-1)^((q-1)/2) q for odd q.
    pub fn prime_discriminants(&self) -> Vec<i64> {
        let mut parts = Vec::new();
        let mut rem = self.d;
        for q in self.ramified_primes() {
            if q == 2 {
                continue;
            }
            let qs = if q.rem_euclid(4) == 1 { q } else { -q };
            parts.push(qs);
            rem /= qs;
        }
        if rem != 1 {
            debug_assert!(matches!(rem, -4 | 8 | -8));
            parts.push(rem);
        }
        parts
    }

    /// The q-factor chi_q of chi_K: the Kronecker character of the prime
    /// discriminant above q.  The product over all ramified q is chi_K.
    pub fn chi_q_factor(&self, q: i64) -> Result<DirichletChar, NumberTheoryError> {
        if !self.ramified_primes().contains(&q) {
            return Err(NumberTheoryError::NotARamifiedPrime { q, disc: self.d });
        }
        let disc = if q == 2 {
            *self
                .prime_discriminants()
                .iter()
                .find(|p| p.rem_euclid(2) == 0)
                .expect("2 ramified means an even prime discriminant exists")
        } else {
            if q.rem_euclid(4) == 1 {
                q
            } else {
                -q
            }
        };
        Ok(DirichletChar::kronecker_of(disc))
    }

    /// The character psi_m = prod_{q | m} chi_q for a coprime factorization
    /// D_K = m * (D_K/m); psi_1 is the constant character 1.
    pub fn psi_char(&self, m: i64) -> Result<DirichletChar, NumberTheoryError> {
        let dk = self.disc_abs();
        if m <= 0 || dk % m != 0 || gcd(m, dk / m) != 1 {
            return Err(NumberTheoryError::NotACoprimeFactor { m, disc: self.d });
        }
        let mut disc = 1i64;
        for p in self.prime_discriminants() {
            let q = if p.rem_euclid(2) == 0 { 2 } else { p.abs() };
            if m % q == 0 {
                disc *= p;
            }
        }
        Ok(DirichletChar::kronecker_of(disc))
    }

    /// psi_m evaluated at n.
    pub fn psi_m(&self, m: i64, n: i64) -> Result<i64, NumberTheoryError> {
        Ok(self.psi_char(m)?.eval(n))
    }

    /// Unitary divisors m of D_K (gcd(m, D_K/m) = 1), ascending; these index
    /// the coprime factorizations in divisor sums.
    pub fn coprime_divisor_pairs(&self) -> Vec<(i64, i64)> {
        let dk = self.disc_abs();
        let mut out = Vec::new();
        for m in 1..=dk {
            if dk % m == 0 && gcd(m, dk / m) == 1 {
                out.push((m, dk / m));
            }
        }
        out
    }
}

/// A real Dirichlet character, stored as the Kronecker character (disc | .)
/// of a (product of) prime discriminant(s).  Every character this crate
/// needs (chi_K, its q-factors, the psi_m) is of this shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirichletChar {
    disc: i64,
    modulus: i64,
}

impl DirichletChar {
    pub fn kronecker_of(disc: i64) -> Self {
        DirichletChar {
            disc,
            modulus: disc.abs().max(1),
        }
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn eval(&self, n: i64) -> i64 {
        kronecker_symbol(self.disc, n)
    }
}

/// Bernoulli numbers B_0..B_n by the defining recurrence
/// sum_k C(n+1,k) B_k = 0, with B_1 = -1/2.
fn bernoulli_upto(n: usize) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rat::one());
            continue;
        }
        // B_m = -1/(m+1) * sum_{k<m} C(m+1,k) B_k
        let mut acc = Rat::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (k, bk) in b.iter().enumerate() {
            acc += Rat::from_integer(binom.clone()) * bk;
            // C(m+1, k+1) = C(m+1,k) * (m+1-k)/(k+1)
            binom = binom * BigInt::from((m + 1 - k) as i64) / BigInt::from((k + 1) as i64);
        }
        b.push(-acc / Rat::from_integer(BigInt::from((m + 1) as i64)));
    }
    b
}

/// The Bernoulli number B_n (convention B_1 = -1/2).
pub fn bernoulli(n: usize) -> Rat {
    bernoulli_upto(n).pop().expect("nonempty")
}

/// Bernoulli polynomial B_n(x) = sum_k C(n,k) B_k x^(n-k).
pub fn bernoulli_poly(n: usize, x: &Rat) -> Rat {
    let b = bernoulli_upto(n);
    let mut acc = Rat::zero();
    let mut binom = BigInt::one(); // C(n, 0)
    let mut xpow = vec![Rat::one()];
    for _ in 1..=n {
        xpow.push(xpow.last().unwrap() * x);
    }
    for (k, bk) in b.iter().enumerate() {
        acc += Rat::from_integer(binom.clone()) * bk * &xpow[n - k];
        if k < n {
            binom = binom * BigInt::from((n - k) as i64) / BigInt::from((k + 1) as i64);
        }
    }
    acc
}

/// Generalized Bernoulli number B_{n,chi} for a character of modulus f:
/// f^(n-1) * sum_{a=1..f} chi(a) B_n(a/f).
pub fn gen_bernoulli(n: usize, chi: &DirichletChar) -> Rat {
    let f = chi.modulus();
    let mut acc = Rat::zero();
    for a in 1..=f {
        let c = chi.eval(a);
        if c == 0 {
            continue;
        }
        let x = ratio(a, f);
        acc += rat(c) * bernoulli_poly(n, &x);
    }
    let scale = if n >= 1 {
        Rat::from_integer(BigInt::from(f).pow((n - 1) as u32))
    } else {
        Rat::one() / rat(f)
    };
    acc * scale
}

/// Residue mod p of a p-integral rational (denominator coprime to p).
pub fn residue_mod_p(x: &Rat, p: u64) -> Result<u64, NumberTheoryError> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor_big(&pb);
    if den.is_zero() {
        return Err(NumberTheoryError::NotPIntegral { prime: p });
    }
    let num = x.numer().mod_floor_big(&pb);
    // den^(p-2) mod p inverts den for prime p.
    let inv = den.modpow(&BigInt::from(p - 2), &pb);
    let r = (num * inv) % &pb;
    Ok(u64::try_from(r).expect("reduced residue fits"))
}

/// p-adic valuation of a nonzero rational.
pub fn p_valuation(x: &Rat, p: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut v = 0i64;
    let mut n = x.numer().abs();
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    let mut d = x.denom().abs();
    while (&d % &pb).is_zero() {
        d /= &pb;
        v -= 1;
    }
    v
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

/// Primes up to n, by sieve.
pub fn primes_upto(n: i64) -> Vec<i64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= n {
        if sieve[p] {
            let mut k = p * p;
            while k <= n {
                sieve[k] = false;
                k += p;
            }
        }
        p += 1;
    }
    (2..=n).filter(|&i| sieve[i]).map(|i| i as i64).collect()
}

/// Prime factorization n = prod q^e, n > 0.
pub fn factorize(mut n: i64) -> Vec<(i64, u32)> {
    assert!(n > 0);
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Euler-criterion oracle for the Legendre symbol (a|p), p an odd prime.
    fn legendre_oracle(a: i64, p: i64) -> i64 {
        let am = a.rem_euclid(p);
        if am == 0 {
            return 0;
        }
        let mut r = 1i64;
        let mut base = am;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        if r == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion_on_odd_primes() {
        for &p in &[3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 61] {
            for a in -50..=50 {
                assert_eq!(
                    kronecker_symbol(a, p),
                    legendre_oracle(a, p),
                    "(a|p) mismatch at a={a}, p={p}"
                );
            }
        }
    }

    #[test]
    fn kronecker_chi_examples() {
        let qi = QuadField::gaussian();
        assert_eq!(qi.chi(3), -1);
        assert_eq!(qi.chi(2), 0);
        let e = QuadField::eisenstein();
        assert_eq!(e.chi(11), -1);
    }

    #[test]
    fn chi_is_multiplicative_and_periodic() {
        for &d in &[-3, -4, -7, -8, -11, -15, -20, -24] {
            let k = QuadField::new(d).unwrap();
            let dk = k.disc_abs();
            for m in 1..=60i64 {
                for n in 1..=60i64 {
                    assert_eq!(k.chi(m * n), k.chi(m) * k.chi(n));
                }
                assert_eq!(k.chi(m), k.chi(m + dk), "period D_K on positive n");
            }
        }
    }

    #[test]
    fn chi_q_product_recovers_chi_for_small_fundamental_discs() {
        for d in -100..0 {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let k = QuadField::new(d).unwrap();
            let factors: Vec<DirichletChar> = k
                .ramified_primes()
                .into_iter()
                .map(|q| k.chi_q_factor(q).unwrap())
                .collect();
            for n in 1..=1000 {
                let prod: i64 = factors.iter().map(|c| c.eval(n)).product();
                assert_eq!(prod, k.chi(n), "chi_q product at d={d}, n={n}");
            }
        }
    }

    #[test]
    fn chi_q_examples() {
        let qi = QuadField::gaussian();
        let c2 = qi.chi_q_factor(2).unwrap();
        assert_eq!(c2.discriminant(), -4);
        assert_eq!(c2.eval(1), 1);
        assert_eq!(c2.eval(3), -1);

        let k20 = QuadField::new(-20).unwrap();
        let c5 = k20.chi_q_factor(5).unwrap();
        let c2 = k20.chi_q_factor(2).unwrap();
        assert_eq!(c5.discriminant(), 5);
        assert_eq!(c2.discriminant(), -4);
        for n in 1..=100 {
            assert_eq!(c5.eval(n) * c2.eval(n), k20.chi(n));
        }
        assert!(k20.chi_q_factor(3).is_err());
    }

    #[test]
    fn characters_vanish_exactly_on_common_factors() {
        for &d in &[-3i64, -4, -8, -20, -24] {
            let chi = DirichletChar::kronecker_of(d);
            for n in -60..=60i64 {
                let shares = gcd(n, chi.modulus()) != 1;
                assert_eq!(chi.eval(n) == 0, shares, "d={d}, n={n}");
            }
        }
    }

    #[test]
    fn psi_m_examples_and_pairing() {
        let qi = QuadField::gaussian();
        assert_eq!(qi.psi_m(1, -2).unwrap(), 1);
        assert_eq!(qi.psi_m(4, -1).unwrap(), -1);
        let k20 = QuadField::new(-20).unwrap();
        assert_eq!(k20.psi_m(5, 2).unwrap(), -1);
        assert!(k20.psi_m(2, 1).is_err(), "2*10 is not coprime");

        // psi_m * psi_{D/m} = chi_K pointwise, and psi_m(-1) = -psi_{D/m}(-1).
        for d in -100..0 {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let k = QuadField::new(d).unwrap();
            for (m, n) in k.coprime_divisor_pairs() {
                let pm = k.psi_char(m).unwrap();
                let pn = k.psi_char(n).unwrap();
                for t in 1..=1000 {
                    assert_eq!(pm.eval(t) * pn.eval(t), k.chi(t));
                }
                assert_eq!(pm.eval(-1), -pn.eval(-1), "opposite parity at d={d}, m={m}");
            }
        }
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(4), ratio(-1, 30));
        assert_eq!(bernoulli(7), rat(0));
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(12), ratio(-691, 2730));
    }

    #[test]
    fn bernoulli_poly_values() {
        assert_eq!(bernoulli_poly(2, &rat(0)), ratio(1, 6));
        assert_eq!(bernoulli_poly(3, &ratio(1, 4)), ratio(3, 64));
        assert_eq!(bernoulli_poly(1, &ratio(1, 2)), rat(0));
    }

    #[test]
    fn gen_bernoulli_values() {
        let chi4 = DirichletChar::kronecker_of(-4);
        assert_eq!(gen_bernoulli(1, &chi4), ratio(-1, 2));
        assert_eq!(gen_bernoulli(3, &chi4), ratio(3, 2));
        assert_eq!(gen_bernoulli(5, &chi4), ratio(-25, 2));
        assert_eq!(gen_bernoulli(7, &chi4), ratio(427, 2));
        let chi3 = DirichletChar::kronecker_of(-3);
        assert_eq!(gen_bernoulli(2, &chi3), rat(0), "odd character, even index");
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(-4).unwrap(), 1);
        assert_eq!(class_number(-20).unwrap(), 2);
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(class_number(-47).unwrap(), 5);
        assert!(class_number(-12).is_err(), "-12 is not fundamental");
        assert!(class_number(-9).is_err());
    }

    #[test]
    fn b1_chi_equals_minus_2h_over_w() {
        for d in -100..0 {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let k = QuadField::new(d).unwrap();
            let chi = DirichletChar::kronecker_of(d);
            let expect = rat(-2) * rat(k.class_number() as i64) / rat(k.unit_count() as i64);
            assert_eq!(gen_bernoulli(1, &chi), expect, "B_(1,chi) at d={d}");
        }
    }

    #[test]
    fn kummer_congruence_pairs() {
        // B_{p+1}/(p+1) = B_2/2 mod p, as p-integral rationals.
        for &p in &[7u64, 11, 13, 19, 23] {
            let lhs = bernoulli(p as usize + 1) / rat(p as i64 + 1);
            let rhs = bernoulli(2) / rat(2);
            assert_eq!(
                residue_mod_p(&lhs, p).unwrap(),
                residue_mod_p(&rhs, p).unwrap(),
                "Kummer congruence at p={p}"
            );
        }
    }

    #[test]
    fn b_p_chi_over_p_congruence() {
        // B_{p,chi_K}/p = (1 - chi_K(p)) * (-2 h_K / w_K) mod p.
        for &p in &[7u64, 11] {
            for &d in &[-4i64, -3, -20] {
                let k = QuadField::new(d).unwrap();
                let chi = DirichletChar::kronecker_of(d);
                let lhs = gen_bernoulli(p as usize, &chi) / rat(p as i64);
                let rhs = rat(1 - k.chi(p as i64))
                    * (rat(-2) * rat(k.class_number() as i64) / rat(k.unit_count() as i64));
                assert_eq!(
                    residue_mod_p(&lhs, p).unwrap(),
                    residue_mod_p(&rhs, p).unwrap(),
                    "p={p}, d={d}"
                );
            }
        }
    }

    #[test]
    fn staudt_clausen_style_facts_for_sqrt_p_fields() {
        // For p = 3 mod 4 and K = Q(sqrt(p) i): B_{(p+1)/2} is a p-unit and
        // p * B_{(p-1)/2, chi_K} = -1 mod p.
        for &p in &[7u64, 11, 19, 23] {
            let b = bernoulli((p as usize + 1) / 2);
            assert_eq!(p_valuation(&b, p), 0, "B_((p+1)/2) not a p-unit at p={p}");
            let chi = DirichletChar::kronecker_of(-(p as i64));
            let scaled = rat(p as i64) * gen_bernoulli((p as usize - 1) / 2, &chi);
            assert_eq!(
                residue_mod_p(&scaled, p).unwrap(),
                p - 1,
                "p*B_((p-1)/2,chi) = -1 mod p at p={p}"
            );
        }
    }

    #[test]
    fn residue_mod_p_rejects_non_integral() {
        assert!(residue_mod_p(&ratio(1, 7), 7).is_err());
        assert_eq!(residue_mod_p(&ratio(1, 3), 7).unwrap(), 5); // 3*5=15=1 mod 7
    }
}
