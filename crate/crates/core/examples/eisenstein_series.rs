//! Compute the Eisenstein-type series F_{k,K} for a chosen field and
//! weight, print a few coefficients, and check its image under the Siegel
//! operator against the classical one-variable Eisenstein series.
//!
//! Run with: cargo run --release --example eisenstein_series [disc] [weight]

use hmf2::krieg::{krieg_expansion, KriegParams};
use hmf2::lambda2::HermIndex;
use hmf2::qseries::EllipticQExp;
use hmf2::QuadField;

fn main() {
    let mut args = std::env::args().skip(1);
    let disc: i64 = args.next().map(|s| s.parse().expect("disc")).unwrap_or(-4);
    let weight: i64 = args.next().map(|s| s.parse().expect("weight")).unwrap_or(8);

    let field = QuadField::new(disc).expect("fundamental discriminant");
    let params = KriegParams::new(field, weight);
    println!(
        "F_{{{weight},K}} over d_K = {disc} (h_K = {}, w_K = {}), in theorem range: {}",
        field.class_number(),
        field.unit_count(),
        params.in_theorem_range()
    );

    let trace = 4;
    let f = krieg_expansion(&params, trace);
    println!(
        "\ncoefficients up to trace {trace} ({} stored):",
        f.support_len()
    );
    for h in f.support_lex().into_iter().take(12) {
        let v = f.coeff(&h);
        if disc == -4 {
            println!("  a({:<12}) = {v}", h.render_qi());
        } else {
            println!("  a({h}) = {v}");
        }
    }

    // The rank-1 column is the elliptic Eisenstein series.
    let phi = f.siegel_phi();
    let elliptic = EllipticQExp::eisenstein(weight, trace);
    println!("\nSiegel operator image vs elliptic E_{weight}:");
    for t in 0..=trace {
        println!("  q^{t}: {} vs {}", phi.coeff(t), elliptic.coeff(t));
    }
    assert!(phi.agrees_with(&elliptic, trace));
    println!("rank-1 column matches the elliptic Eisenstein series");

    // Coefficients only depend on the content and the scaled determinant.
    if disc == -4 && weight == 8 {
        let a = f.coeff(&HermIndex::from_ab(1, 0, 0, 1));
        let b = f.coeff(&HermIndex::from_ab(2, 2, 0, 1));
        assert_eq!(a, b);
        println!("\nclass function check: a([1,0,1]) = a([2,2,1]) = {a}");
    }
}
