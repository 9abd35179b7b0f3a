//! The mod-p toolkit on expansions: reduction, the order of a form (the
//! first nonvanishing index in the lexicographic order), its additivity on
//! products, and the theta operator.
//!
//! Run with: cargo run --release --example mod_p_toolkit

use hmf2::graded_ring::build_generators;
use hmf2::lambda2::HermIndex;

fn main() {
    let ring = build_generators(4).expect("generator build");
    let chi8 = &ring.gens.chi8;
    let e4 = &ring.gens.e4;

    for p in [5u64, 7, 11] {
        let ord = chi8.ord_p(p).unwrap();
        println!(
            "ord_{p}(chi_8) = {} (carried bound {})",
            ord.index
                .map(|h| h.render_qi())
                .unwrap_or_else(|| "infinity".into()),
            ord.bound
        );
    }

    // additivity: ord_p(F G) = ord_p(F) + ord_p(G)
    let p = 7;
    let prod = chi8.mul(chi8).unwrap();
    let a = chi8.ord_p(p).unwrap().index.unwrap();
    let ab = prod.ord_p(p).unwrap().index.unwrap();
    assert_eq!(ab, a.add(&a));
    println!("\nord_{p}(chi_8^2) = ord + ord = {}", ab.render_qi());

    // scaling by p pushes the order to infinity (up to the bound)
    let scaled = e4.scaled(&hmf2::number_theory::rat(7));
    assert!(scaled.ord_p(7).unwrap().is_infinite());
    println!("ord_7(7 E_4) = infinity up to trace {}", scaled.trace_bound);

    // the theta operator kills rank <= 1 indices and scales the rest by det
    let image = e4.theta_op();
    println!("\nTheta(E_4) low coefficients:");
    for h in [
        HermIndex::from_ab(1, 0, 0, 0),
        HermIndex::from_ab(1, 1, 1, 1),
        HermIndex::from_ab(1, 0, 0, 1),
    ] {
        println!("  at {:<10}: {}", h.render_qi(), image.coeff(&h));
    }
    let residues = image.reduce_mod(5).unwrap();
    assert!(residues.values().all(|r| *r == 0));
    println!("Theta(E_4) = 0 mod 5 at every stored index (weight-4 prefactor is divisible by 5)");

    // serialization round-trip of an expansion
    let mut buf = Vec::new();
    chi8.write_to(&mut buf).unwrap();
    let back = hmf2::FourierExpansion::read_from(&mut buf.as_slice()).unwrap();
    assert!(back.agrees_with(chi8, chi8.trace_bound));
    println!(
        "\nchi_8 expansion round-trips through the text format ({} bytes)",
        buf.len()
    );
}
