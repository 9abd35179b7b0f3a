//! Reproduce the published rank-2 coefficient table of the Hermitian Leech
//! theta series: build theta_Leech from the theta-constant relation, print
//! every listed class, and verify that unlisted classes vanish.
//!
//! Run with: cargo run --release --example leech_table

use hmf2::graded_ring::build_generators;
use hmf2::tables;
use hmf2::QuadField;

fn main() {
    let ring = build_generators(6).expect("generator build at trace 6");
    let leech = &ring.theta_leech;
    let field = QuadField::gaussian();

    println!("theta_Leech built from a_1 psi_12 + a_2 E_4^3 + a_3 E_4 E_8 + a_4 E_12\n");
    println!(
        "{:<14} {:>5}  {:>16} {:>16}",
        "class", "4det", "computed", "reference"
    );
    let mut mismatches = 0;
    for row in tables::table2_rows() {
        let got = leech.coeff(&row.index);
        let ok = got == hmf2::number_theory::rat(row.value);
        if !ok {
            mismatches += 1;
        }
        println!(
            "{:<14} {:>5}  {:>16} {:>16}{}",
            row.index.render_qi(),
            row.ndet4,
            got,
            row.value,
            if ok { "" } else { "   <-- MISMATCH" }
        );
    }

    let diffs = tables::check_table2(leech);
    println!(
        "\nfull check (all rank-2 indices of trace <= 6, incl. vanishing): {} mismatches",
        diffs.len()
    );
    assert_eq!(mismatches, 0);
    assert!(diffs.is_empty());

    // every rank-2 index is accounted for by a listed class or vanishes
    let mut zero_classes = 0;
    let mut listed = 0;
    for h in field.enumerate_psd(6) {
        if field.ndet(&h) <= 0 {
            continue;
        }
        if leech.coeff(&h) == hmf2::number_theory::rat(0) {
            zero_classes += 1;
        } else {
            listed += 1;
        }
    }
    println!("rank-2 indices up to trace 6: {listed} nonzero, {zero_classes} vanishing");
}
