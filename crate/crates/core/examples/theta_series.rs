//! Exact theta series of an even positive definite Hermitian lattice:
//! enumerate short vectors with the Fincke-Pohst search, assemble the
//! degree-2 expansion, and cross-check against a brute-force double loop.
//!
//! Run with: cargo run --release --example theta_series [gram-file]

use hmf2::theta::{short_vectors, theta_series, theta_series_brute, GramMatrix};
use hmf2::QuadField;

fn main() {
    let gram = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).expect("readable Gram file");
            GramMatrix::parse(None, &text).expect("valid Gram file")
        }
        None => GramMatrix::new(
            QuadField::gaussian(),
            vec![vec![(2, 0), (1, 1)], vec![(1, -1), (2, 0)]],
            "demo rank-2",
        )
        .expect("even positive definite"),
    };
    println!(
        "lattice '{}': rank {}, unimodular = {}",
        gram.label,
        gram.rank,
        gram.is_unimodular()
    );

    let bound = 3;
    let buckets = short_vectors(&gram, bound).expect("positive definite");
    println!("\nshort vectors by half-norm:");
    for (t, vs) in &buckets {
        println!("  t = {t}: {} vectors", vs.len());
    }

    let th = theta_series(&gram, bound).expect("supported field");
    println!("\ndegree-2 theta coefficients up to trace {bound}:");
    for h in th.support_lex() {
        println!("  a({:<12}) = {}", h.render_qi(), th.coeff(&h));
    }

    // Independent oracle: enumerate a coordinate box directly.
    let brute = theta_series_brute(&gram, bound, 6).expect("supported field");
    assert!(th.agrees_with(&brute, bound));
    println!("\nbrute-force double loop agrees");

    // Round-trip the Gram file format.
    let rendered = gram.render();
    let reparsed = GramMatrix::parse(None, &rendered).expect("round trip");
    assert_eq!(reparsed, gram);
    println!("Gram file round-trip (with checksum) is exact:\n\n{rendered}");
}
