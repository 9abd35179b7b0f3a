//! Generators of the graded ring of symmetric modular forms over Q(i) and
//! exact linear algebra on expansions.
//!
//! The five generators are E_4, E_6 (Eisenstein expansions), chi_8 (the
//! weight-8 cusp form, normalized to 1 at [1,1+i,1]), F_10 (the product of
//! the ten theta constants over 2^12) and F_12.  chi_8 is cut out of the
//! two-dimensional weight-8 space as (E_4^2 - E_8)/c; F_12 is defined by the
//! closed form
//!
//!   theta_Leech = (7/12) E_4^3 + (5/12) E_6^2 - 10080 E_4 chi_8 - 60480 F_12,
//!
//! where theta_Leech itself comes from the theta-constant relation
//! a_1 psi_12 + a_2 E_4^3 + a_3 E_4 E_8 + a_4 E_12 with fixed rationals
//! a_1..a_4.  Every identity used in the construction is re-checked after
//! the build (cusp conditions, integrality, the psi_4 / psi_8 relations);
//! any failure aborts rather than degrade.

use std::fmt;

use num::traits::{One, Zero};

use crate::krieg::{krieg_expansion, KriegParams};
use crate::lambda2::HermIndex;
use crate::number_theory::{rat, ratio, QuadField, Rat};
use crate::qseries::FourierExpansion;
use crate::theta::{self, Kappa, ThetaError};

#[derive(Debug)]
pub enum BuildError {
    Theta(ThetaError),
    /// A validation identity failed; the payload names it.
    Identity(&'static str),
    /// chi_8 normalization impossible: a(E_4^2 - E_8; [1,1+i,1]) = 0.
    DegenerateChi8,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::Theta(e) => write!(f, "theta constant failure: {e}"),
            BuildError::Identity(s) => write!(f, "validation identity failed: {s}"),
            BuildError::DegenerateChi8 => write!(f, "chi_8 normalization coefficient is zero"),
        }
    }
}

impl std::error::Error for BuildError {}

impl From<ThetaError> for BuildError {
    fn from(e: ThetaError) -> Self {
        BuildError::Theta(e)
    }
}

/// The five ring generators over Q(i), at a common trace bound.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub e4: FourierExpansion,
    pub e6: FourierExpansion,
    pub chi8: FourierExpansion,
    pub f10: FourierExpansion,
    pub f12: FourierExpansion,
}

/// Everything the congruence registry needs: the generators plus the
/// auxiliary expansions produced along the way.
#[derive(Debug, Clone)]
pub struct RingData {
    pub gens: GeneratorSet,
    pub e8: FourierExpansion,
    pub e12: FourierExpansion,
    pub psi8: FourierExpansion,
    pub psi12: FourierExpansion,
    pub theta_leech: FourierExpansion,
    /// a(E_4^2 - E_8; [1,1+i,1]), the chi_8 normalization constant.
    pub chi8_scale: Rat,
    pub kappa: Kappa,
    pub trace_bound: i64,
}

/// The four rationals of the Leech/psi_12 relation.
pub fn leech_relation_coeffs() -> [Rat; 4] {
    [
        ratio(1470105, 8511808),
        ratio(167218051, 638385600),
        ratio(-147340193, 212795200),
        ratio(802930253, 638385600),
    ]
}

fn index_1_1i_1() -> HermIndex {
    HermIndex::from_ab(1, 1, 1, 1)
}

/// Build the generators and auxiliary data at the given trace bound.
pub fn build_generators(trace_bound: i64) -> Result<RingData, BuildError> {
    let field = QuadField::gaussian();
    let e = |k: i64| krieg_expansion(&KriegParams::new(field, k), trace_bound);
    let e4 = e(4);
    let e6 = e(6);
    let e8 = e(8);
    let e12 = e(12);

    // chi_8 spans the cusp line in the two-dimensional weight-8 space.
    let e4sq = e4.mul(&e4).expect("same field");
    let diff = e4sq.sub(&e8).expect("same weight");
    let scale = diff.coeff(&index_1_1i_1());
    if scale.is_zero() {
        return Err(BuildError::DegenerateChi8);
    }
    let chi8 = diff.scaled(&scale.clone().recip());
    if !chi8.siegel_phi().is_zero() {
        return Err(BuildError::Identity("chi_8 is cuspidal"));
    }
    if chi8.coeff(&HermIndex::from_ab(1, 0, 0, 1)) != rat(4) {
        return Err(BuildError::Identity("a(chi_8; [1,0,1]) = 4"));
    }

    // theta constants: psi_4 must reproduce E_4 at full depth.
    let ([psi4, psi8, psi12], kappa) = theta::psi_all(trace_bound)?;
    if !psi4.agrees_with(&e4, trace_bound) {
        return Err(BuildError::Identity("psi_4 = E_4"));
    }
    let psi8_combo =
        FourierExpansion::linear_combine(&[(ratio(14, 75), &e4sq), (ratio(61, 75), &e8)])
            .expect("weight 8 both");
    if !psi8.agrees_with(&psi8_combo, trace_bound) {
        return Err(BuildError::Identity("psi_8 = (14/75) E_4^2 + (61/75) E_8"));
    }

    let f10 = theta::f10_series(trace_bound)?;
    if !f10.siegel_phi().is_zero() || f10.is_zero() {
        return Err(BuildError::Identity("F_10 is a nonzero cusp form"));
    }

    // theta_Leech from the psi_12 relation.
    let [a1, a2, a3, a4] = leech_relation_coeffs();
    let e4cube = e4sq.mul(&e4).expect("same field");
    let e4e8 = e4.mul(&e8).expect("same field");
    let theta_leech =
        FourierExpansion::linear_combine(&[(a1, &psi12), (a2, &e4cube), (a3, &e4e8), (a4, &e12)])
            .expect("weight 12 all");
    if theta_leech.coeff(&HermIndex::ZERO) != Rat::one() {
        return Err(BuildError::Identity("a(theta_Leech; 0) = 1"));
    }
    if !theta_leech.coeff(&HermIndex::from_ab(1, 0, 0, 0)).is_zero() {
        return Err(BuildError::Identity(
            "theta_Leech has no length-one vectors",
        ));
    }

    // F_12 from the closed form.
    let e6sq = e6.mul(&e6).expect("same field");
    let e4chi8 = e4.mul(&chi8).expect("same field");
    let f12 = FourierExpansion::linear_combine(&[
        (ratio(7, 12), &e4cube),
        (ratio(5, 12), &e6sq),
        (rat(-10080), &e4chi8),
        (-Rat::one(), &theta_leech),
    ])
    .expect("weight 12 all")
    .scaled(&ratio(1, 60480));
    if !f12.siegel_phi().is_zero() {
        return Err(BuildError::Identity("F_12 is cuspidal"));
    }
    if f12.iter().any(|(_, v)| !v.is_integer()) {
        return Err(BuildError::Identity("F_12 has integral coefficients"));
    }

    Ok(RingData {
        gens: GeneratorSet {
            e4,
            e6,
            chi8,
            f10,
            f12,
        },
        e8,
        e12,
        psi8,
        psi12,
        theta_leech,
        chi8_scale: scale,
        kappa,
        trace_bound,
    })
}

/// All monomials E_4^a E_6^b chi_8^c F_10^d F_12^e of the given weight, as
/// expansions at the generators' bound, in lexicographic exponent order.
pub fn monomial_basis(gens: &GeneratorSet, weight: i64) -> Vec<FourierExpansion> {
    assert!(
        weight >= 0 && weight % 2 == 0 && weight <= 24,
        "weights up to 24"
    );
    let mut out = Vec::new();
    for a in 0..=(weight / 4) {
        for b in 0..=((weight - 4 * a) / 6) {
            for c in 0..=((weight - 4 * a - 6 * b) / 8) {
                for d in 0..=((weight - 4 * a - 6 * b - 8 * c) / 10) {
                    let rem = weight - 4 * a - 6 * b - 8 * c - 10 * d;
                    if rem % 12 != 0 {
                        continue;
                    }
                    let e = rem / 12;
                    let factors: [(&FourierExpansion, i64); 5] = [
                        (&gens.e4, a),
                        (&gens.e6, b),
                        (&gens.chi8, c),
                        (&gens.f10, d),
                        (&gens.f12, e),
                    ];
                    let mut acc = FourierExpansion::one(gens.e4.field, gens.e4.trace_bound);
                    for (g, e) in factors {
                        for _ in 0..e {
                            acc = acc.mul(g).expect("same field");
                        }
                    }
                    out.push(acc);
                }
            }
        }
    }
    out
}

/// Exact rational solution of F = sum_i x_i B_i on every index up to the
/// common bound, or None when the overdetermined system is inconsistent.
pub fn express(f: &FourierExpansion, basis: &[&FourierExpansion]) -> Option<Vec<Rat>> {
    assert!(!basis.is_empty());
    let field = f.field;
    let bound = basis
        .iter()
        .map(|b| b.trace_bound)
        .chain([f.trace_bound])
        .min()
        .unwrap();
    for b in basis {
        assert!(b.field == field, "mixed fields in express");
    }
    let indices = field.enumerate_psd(bound);
    let cols = basis.len();
    // rows of (basis coefficients | target)
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(indices.len());
    for h in &indices {
        let mut row: Vec<Rat> = basis.iter().map(|b| b.coeff(h)).collect();
        row.push(f.coeff(h));
        if row.iter().any(|v| !v.is_zero()) {
            rows.push(row);
        }
    }
    // Gaussian elimination with full verification of the leftover rows.
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone().recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..=cols {
                    let delta = factor.clone() * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    // any nonzero residual row means inconsistency
    for row in rows.iter().skip(r) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    // under-determined systems (free columns) are resolved by zeroing the
    // free coordinates; with full column rank this is the unique solution
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][cols].clone();
    }
    Some(x)
}
