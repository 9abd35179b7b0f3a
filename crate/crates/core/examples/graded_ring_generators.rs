//! Build the five generators of the graded ring over Q(i) and express
//! other forms in monomial bases by exact linear algebra: the rank-8 theta
//! span identities, the psi_8 relation, and the Leech theta relation.
//!
//! Run with: cargo run --release --example graded_ring_generators

use hmf2::graded_ring::{build_generators, express, leech_relation_coeffs, monomial_basis};
use hmf2::lambda2::HermIndex;
use hmf2::qseries::FourierExpansion;

fn main() {
    let trace = 4;
    let ring = build_generators(trace).expect("generator build");
    let g = &ring.gens;
    println!("generators at trace bound {trace}:");
    for (name, f) in [
        ("E_4", &g.e4),
        ("E_6", &g.e6),
        ("chi_8", &g.chi8),
        ("F_10", &g.f10),
        ("F_12", &g.f12),
    ] {
        println!(
            "  {name:6} weight {:2}, char exponent {:?}, {} coefficients",
            f.weight,
            f.char_tag,
            f.support_len()
        );
    }
    println!(
        "chi_8 normalization: a(E_4^2 - E_8; [1,1+i,1]) = {} and a(chi_8; [1,1+i,1]) = {}",
        ring.chi8_scale,
        g.chi8.coeff(&HermIndex::from_ab(1, 1, 1, 1))
    );

    // weight-8 span: the two rank-8 theta series
    let e4sq = g.e4.mul(&g.e4).unwrap();
    let basis8 = [&e4sq, &g.chi8];
    for c in [5760i64, 3072] {
        let th = FourierExpansion::linear_combine(&[
            (hmf2::number_theory::rat(1), &e4sq),
            (hmf2::number_theory::rat(-c), &g.chi8),
        ])
        .unwrap();
        let coeffs = express(&th, &basis8).expect("in span");
        println!("theta combination with c = {c}: coordinates {coeffs:?}");
    }
    let e8_coords = express(&ring.e8, &basis8).expect("E_8 in span");
    println!("E_8 = {} * E_4^2 + {} * chi_8", e8_coords[0], e8_coords[1]);

    // weight-12 monomials and the Leech relation
    let b12 = monomial_basis(&ring.gens, 12);
    println!("\nweight-12 monomial basis has {} elements", b12.len());
    let refs: Vec<&FourierExpansion> = b12.iter().collect();
    let leech_coords = express(&ring.theta_leech, &refs).expect("in span");
    println!("theta_Leech in the monomial basis: {leech_coords:?}");

    let e4cube = g.e4.pow(3).unwrap();
    let e4e8 = g.e4.mul(&ring.e8).unwrap();
    let rel_basis = [&ring.psi12, &e4cube, &e4e8, &ring.e12];
    let rel = express(&ring.theta_leech, &rel_basis).expect("relation");
    assert_eq!(rel, leech_relation_coeffs().to_vec());
    println!("\nrecovered the theta-constant relation for theta_Leech:");
    for (name, c) in ["psi_12", "E_4^3", "E_4 E_8", "E_12"].iter().zip(&rel) {
        println!("  coefficient of {name:7}: {c}");
    }

    // a deliberate failure: E_4 E_6 has the odd character, so it cannot lie
    // in the weight-10 span of... the even-character monomials of weight 8
    let e4e6 = g.e4.mul(&g.e6).unwrap();
    assert!(express(&e4e6, &basis8).is_none());
    println!("\nE_4 E_6 is (correctly) not expressible in the weight-8 basis");
}
