//! Explicit Fourier coefficients of the degree-2 Hermitian Eisenstein-type
//! series F_{k,K}.
//!
//! For positive definite H the coefficient is
//!
//!   a(F_{k,K}; H) = 4k(k-1) / (B_k * B_{k-1,chi_K})
//!                   * sum_{d | eps(H)} d^(k-1) G_K(k-2; ndet(H)/d^2),
//!
//! for rank-1 H it is -(2k/B_k) * sum_{d | eps(H)} d^(k-1), and a(F;0) = 1,
//! where
//!
//!   G_K(s; N) = 1/a_D(N) * sum_{d | N} sum_{mn = D_K, (m,n)=1}
//!               psi_m(-N/d) psi_n(d) d^s,
//!   a_D(N)    = prod_{q | D_K} (1 + chi_q(-N)).
//!
//! `gk_product` evaluates the same sum in the factored (ramified/unramified)
//! form; the two routes are verified against each other exhaustively.
//!
//! When a_D(N) = 0 the division is taken as 0/0 = 0 and the numerator is
//! asserted to vanish; a nonzero numerator aborts (this never fires for the
//! arguments produced by `krieg_coeff`, and the assertion keeps it honest).
//!
//! The coefficient law is stated for k > 4 with w_K | k.  F_{k,K} coincides
//! with the Eisenstein series E_k when h_K = 1.  Weights outside that range
//! (notably k = 4 and k = 6 over Q(i)) evaluate the same formula and mark
//! the expansion `in_theorem_range = false`; every identity downstream that
//! uses them doubles as their validation.

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::lambda2::HermIndex;
use crate::number_theory::{self, DirichletChar, QuadField, Rat};
use crate::qseries::FourierExpansion;

/// Weight/field pair for an Eisenstein-type expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KriegParams {
    pub field: QuadField,
    pub weight: i64,
}

impl KriegParams {
    pub fn new(field: QuadField, weight: i64) -> Self {
        assert!(
            weight >= 4 && weight % 2 == 0,
            "weight must be even and >= 4"
        );
        KriegParams { field, weight }
    }

    /// Hypotheses of the explicit coefficient theorem: k > 4 and w_K | k.
    pub fn in_theorem_range(&self) -> bool {
        self.weight > 4 && self.weight % (self.field.unit_count() as i64) == 0
    }
}

/// a_D(N) = prod over ramified q of (1 + chi_q(-N)).
pub fn a_d(field: &QuadField, n: i64) -> i64 {
    field
        .ramified_primes()
        .into_iter()
        .map(|q| 1 + field.chi_q_factor(q).expect("ramified").eval(-n))
        .product()
}

fn chi_k_of(field: &QuadField) -> DirichletChar {
    DirichletChar::kronecker_of(field.disc())
}

/// Direct evaluation of G_K(s; N) from the double divisor/character sum.
pub fn gk_direct(field: &QuadField, s: u32, n: i64) -> Rat {
    assert!(n > 0, "G_K needs a positive argument");
    let mut acc = BigInt::zero();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let dpow = BigInt::from(d).pow(s);
        for (m, nn) in field.coprime_divisor_pairs() {
            let pm = field.psi_m(m, -(n / d)).expect("coprime divisor");
            let pn = field.psi_m(nn, d).expect("coprime divisor");
            acc += BigInt::from(pm * pn) * &dpow;
        }
    }
    normalize_gk(field, n, acc)
}

/// Factored evaluation of G_K(s; N): split N = N1 * N2 into its ramified and
/// unramified parts; the unramified primes contribute geometric factors
/// sum_t chi_K(q)^t q^(st) and the ramified primes fold into the psi sum.
pub fn gk_product(field: &QuadField, s: u32, n: i64) -> Rat {
    assert!(n > 0, "G_K needs a positive argument");
    let ramified = field.ramified_primes();
    let factors = number_theory::factorize(n);
    let mut unram_factor = BigInt::one();
    let mut n2 = 1i64;
    for &(q, e) in &factors {
        if ramified.contains(&q) {
            continue;
        }
        n2 *= q.pow(e);
        let mut geo = BigInt::zero();
        let qs = BigInt::from(q).pow(s);
        let chi_q = field.chi(q); // unramified: +1 or -1
        let mut term = BigInt::one();
        for _t in 0..=e {
            geo += &term;
            term = term * BigInt::from(chi_q) * &qs;
        }
        unram_factor *= geo;
    }
    let mut psi_sum = BigInt::zero();
    for (m, nn) in field.coprime_divisor_pairs() {
        let psi_m = field.psi_char(m).expect("coprime divisor");
        let psi_n = field.psi_char(nn).expect("coprime divisor");
        let mut term = BigInt::from(psi_m.eval(-1) * psi_m.eval(n2));
        for &(q, e) in &factors {
            if !ramified.contains(&q) {
                continue;
            }
            if m % q == 0 {
                // q divides the m-part: psi_n(q)^e * q^(s e)
                term *= BigInt::from(psi_n.eval(q)).pow(e) * BigInt::from(q).pow(s * e);
            } else {
                // q divides the n-part: psi_m(q)^e
                term *= BigInt::from(psi_m.eval(q)).pow(e);
            }
        }
        psi_sum += term;
    }
    normalize_gk(field, n, unram_factor * psi_sum)
}

fn normalize_gk(field: &QuadField, n: i64, numerator: BigInt) -> Rat {
    let ad = a_d(field, n);
    if ad == 0 {
        assert!(
            numerator.is_zero(),
            "a_D({n}) = 0 with nonzero numerator {numerator} over d_K = {}",
            field.disc()
        );
        return Rat::zero();
    }
    Rat::new(numerator, BigInt::from(ad))
}

/// The two scalar prefactors of the coefficient law.
pub fn prefactors(params: &KriegParams) -> (Rat, Rat) {
    let k = params.weight;
    let bk = number_theory::bernoulli(k as usize);
    let bk1 = number_theory::gen_bernoulli(k as usize - 1, &chi_k_of(&params.field));
    let rank2 = number_theory::rat(4 * k * (k - 1)) / (bk.clone() * bk1);
    let rank1 = -number_theory::rat(2 * k) / bk;
    (rank2, rank1)
}

/// One Fourier coefficient of F_{k,K}.
pub fn krieg_coeff(params: &KriegParams, h: &HermIndex) -> Rat {
    let (rank2, rank1) = prefactors(params);
    krieg_coeff_with(params, h, &rank2, &rank1)
}

fn krieg_coeff_with(params: &KriegParams, h: &HermIndex, rank2: &Rat, rank1: &Rat) -> Rat {
    let field = &params.field;
    debug_assert!(field.is_psd(h));
    let k = params.weight;
    if h.is_zero() {
        return Rat::one();
    }
    let eps = h.epsilon().expect("nonzero");
    let ndet = field.ndet(h);
    if ndet == 0 {
        // rank 1: -(2k/B_k) * sigma_{k-1}(eps)
        let mut acc = BigInt::zero();
        for d in 1..=eps {
            if eps % d == 0 {
                acc += BigInt::from(d).pow(k as u32 - 1);
            }
        }
        return rank1.clone() * Rat::from_integer(acc);
    }
    let mut acc = Rat::zero();
    for d in 1..=eps {
        if eps % d != 0 {
            continue;
        }
        debug_assert!(ndet % (d * d) == 0, "ndet/d^2 integral for d | eps");
        let g = gk_direct(field, k as u32 - 2, ndet / (d * d));
        acc += Rat::from_integer(BigInt::from(d).pow(k as u32 - 1)) * g;
    }
    rank2.clone() * acc
}

/// The truncated expansion of F_{k,K} up to the given trace bound.
pub fn krieg_expansion(params: &KriegParams, trace_bound: i64) -> FourierExpansion {
    let field = params.field;
    let w = field.unit_count() as i64;
    let mut out = FourierExpansion::zero(
        field,
        params.weight,
        Some((params.weight / 2).rem_euclid(w)),
        trace_bound,
    );
    out.in_theorem_range = Some(params.in_theorem_range());
    let (rank2, rank1) = prefactors(params);
    for h in field.enumerate_psd(trace_bound) {
        let v = krieg_coeff_with(params, &h, &rank2, &rank1);
        out.set(h, v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_theory::{p_valuation, rat, ratio, residue_mod_p};
    use crate::qseries::EllipticQExp;

    fn qi() -> QuadField {
        QuadField::gaussian()
    }

    #[test]
    fn a_d_examples() {
        let k = qi();
        assert_eq!(a_d(&k, 2), 1);
        assert_eq!(a_d(&k, 3), 2);
        assert_eq!(a_d(&k, 1), 0);
        let k20 = QuadField::new(-20).unwrap();
        assert_eq!(a_d(&k20, 3), 0);
    }

    #[test]
    fn gk_direct_frozen_values() {
        let k = qi();
        assert_eq!(gk_direct(&k, 2, 2), rat(-3));
        assert_eq!(gk_direct(&k, 2, 4), rat(-15));
        assert_eq!(gk_direct(&k, 2, 3), rat(-8));
        assert_eq!(gk_direct(&k, 4, 4), rat(-255));
        assert_eq!(gk_direct(&k, 6, 2), rat(-63));
        // a_D(1) = 0 and the numerator cancels, so the normalized value is 0.
        assert_eq!(gk_direct(&k, 0, 1), rat(0));
    }

    #[test]
    fn gk_product_equals_gk_direct() {
        for &d in &[-4i64, -3, -20, -7] {
            let k = QuadField::new(d).unwrap();
            for s in 0..=6u32 {
                for n in 1..=200 {
                    assert_eq!(
                        gk_product(&k, s, n),
                        gk_direct(&k, s, n),
                        "product form at d={d}, s={s}, N={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn gk_congruence_for_inert_primes() {
        // G_K(p-1, N) = 0 mod p when chi_K(p) = -1, p not dividing h_K or N,
        // and chi_K(N) in {0, -1}.
        for (p, d) in [(7u64, -4i64), (11, -3)] {
            let k = QuadField::new(d).unwrap();
            assert_eq!(k.chi(p as i64), -1);
            for n in 1..=300i64 {
                if n % (p as i64) == 0 || k.chi(n) == 1 {
                    continue;
                }
                let g = gk_direct(&k, p as u32 - 1, n);
                assert_eq!(
                    residue_mod_p(&g, p).unwrap(),
                    0,
                    "G_K(p-1, {n}) mod {p} over d={d}"
                );
            }
        }
        // N = 7 falls outside the hypothesis (p | N): there the value is
        // G(6; 7) = 1 - 7^6, which is 1 mod 7, not 0.
        assert_eq!(gk_direct(&qi(), 6, 7), rat(1) - rat(7).pow(6));
        assert_eq!(residue_mod_p(&gk_direct(&qi(), 6, 7), 7).unwrap(), 1);
        // an in-hypothesis neighbor: chi_{-4}(3) = -1, so G(6; 3) = 0 mod 7
        assert_eq!(residue_mod_p(&gk_direct(&qi(), 6, 3), 7).unwrap(), 0);
    }

    #[test]
    fn krieg_coeff_hand_values() {
        let p4 = KriegParams::new(qi(), 4);
        assert_eq!(krieg_coeff(&p4, &HermIndex::ZERO), rat(1));
        assert_eq!(krieg_coeff(&p4, &HermIndex::from_ab(1, 0, 0, 0)), rat(240));
        assert_eq!(
            krieg_coeff(&p4, &HermIndex::from_ab(1, 0, 0, 1)),
            rat(14400)
        );
        assert_eq!(krieg_coeff(&p4, &HermIndex::from_ab(1, 1, 1, 1)), rat(2880));
        assert_eq!(krieg_coeff(&p4, &HermIndex::from_ab(1, 1, 0, 1)), rat(7680));
        assert!(!p4.in_theorem_range(), "k = 4 is outside the stated range");
    }

    #[test]
    fn krieg_coeff_depends_only_on_content_and_ndet() {
        let k = qi();
        let p4 = KriegParams::new(k, 4);
        assert_eq!(
            krieg_coeff(&p4, &HermIndex::from_ab(1, 0, 0, 1)),
            krieg_coeff(&p4, &HermIndex::from_ab(2, 2, 0, 1)),
            "both have eps = 1, ndet = 4"
        );
        for h in k.enumerate_psd(4) {
            if h.is_zero() {
                continue;
            }
            let rep = k.canonical_rep(&h);
            assert_eq!(krieg_coeff(&p4, &h), krieg_coeff(&p4, &rep));
        }
    }

    #[test]
    fn krieg_rank2_values_with_61_denominators() {
        let p8 = KriegParams::new(qi(), 8);
        assert!(p8.in_theorem_range());
        assert_eq!(
            krieg_coeff(&p8, &HermIndex::from_ab(1, 1, 1, 1)),
            ratio(120960, 61)
        );
        assert_eq!(
            krieg_coeff(&p8, &HermIndex::from_ab(1, 0, 0, 1)),
            ratio(7862400, 61)
        );
    }

    #[test]
    fn siegel_image_is_elliptic_eisenstein() {
        for k in [4i64, 6, 8, 12] {
            let params = KriegParams::new(qi(), k);
            let f = krieg_expansion(&params, 6);
            let phi = f.siegel_phi();
            let ell = EllipticQExp::eisenstein(k, 6);
            assert!(phi.agrees_with(&ell, 6), "Phi(F_{k}) = E_{k}");
        }
        // same over other fields
        let e = QuadField::eisenstein();
        let f = krieg_expansion(&KriegParams::new(e, 12), 4);
        assert!(f
            .siegel_phi()
            .agrees_with(&EllipticQExp::eisenstein(12, 4), 4));
        assert_eq!(f.coeff(&HermIndex::ZERO), rat(1));
    }

    #[test]
    fn restriction_of_e4_gives_the_classical_siegel_values() {
        use crate::lambda2::SiegelIndex;
        // Summing over b recovers the degree-2 Siegel Eisenstein series:
        // its coefficients at diag(1,1) and [1,1,1] are 30240 and 13440.
        let f = krieg_expansion(&KriegParams::new(qi(), 4), 4);
        assert!(f.is_conj_symmetric());
        let restricted = f.restrict_siegel().unwrap();
        assert_eq!(restricted[&SiegelIndex { m: 1, r: 0, n: 1 }], rat(30240));
        assert_eq!(restricted[&SiegelIndex { m: 1, r: 1, n: 1 }], rat(13440));
        for v in restricted.values() {
            assert!(v.is_integer());
        }
    }

    #[test]
    fn prop1_star_vanishing_for_weight_p_plus_one() {
        // a(F_{p+1,K}; H) = 0 mod p whenever p does not divide ndet(H).
        for (p, d) in [(7u64, -4i64), (11, -3)] {
            let field = QuadField::new(d).unwrap();
            let params = KriegParams::new(field, p as i64 + 1);
            let f = krieg_expansion(&params, 6);
            for h in field.enumerate_psd(6) {
                if field.ndet(&h) % (p as i64) == 0 {
                    continue;
                }
                let r = residue_mod_p(&f.coeff(&h), p).unwrap();
                assert_eq!(r, 0, "a(F_(p+1); {h}) mod {p} over d={d}");
            }
        }
    }

    #[test]
    fn weight_p_plus_one_prefactor_is_p_unit() {
        for (p, d) in [(7u64, -4i64), (11, -3)] {
            let field = QuadField::new(d).unwrap();
            let (rank2, _) = prefactors(&KriegParams::new(field, p as i64 + 1));
            assert_eq!(p_valuation(&rank2, p), 0, "A is a {p}-adic unit");
        }
    }

    #[test]
    fn half_weight_prefactor_vanishes_mod_p_for_sqrt_p_fields() {
        for p in [11u64, 19] {
            let field = QuadField::new(-(p as i64)).unwrap();
            let (rank2, _) = prefactors(&KriegParams::new(field, (p as i64 + 1) / 2));
            assert!(p_valuation(&rank2, p) >= 1, "prefactor = 0 mod {p}");
        }
    }
}
