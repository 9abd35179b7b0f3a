//! Theta constants over the Gaussian field: the ten even characteristics,
//! the calibrated exponent normalization, and the identities
//! psi_4 = E_4, psi_8 = (14/75) E_4^2 + (61/75) E_8, F_10 = 2^-12 * product.
//!
//! Run with: cargo run --release --example theta_constants

use hmf2::krieg::{krieg_expansion, KriegParams};
use hmf2::number_theory::ratio;
use hmf2::qseries::FourierExpansion;
use hmf2::theta::{calibrate_kappa, f10_series, psi_series, theta_constant, ThetaCharacteristic};
use hmf2::QuadField;

fn main() {
    let chars = ThetaCharacteristic::even_set();
    println!("the {} even characteristics:", chars.len());
    for c in &chars {
        println!(
            "  a = ({}, {}), b = ({}, {})",
            c.a[0], c.a[1], c.b[0], c.b[1]
        );
    }

    let kappa = calibrate_kappa().expect("calibration");
    println!("\ncalibrated exponent normalization: kappa = {kappa}");

    // Individual theta constants live on a refined index lattice (indices
    // scaled by kappa's divisor); their assembled powers land back on the
    // integral lattice.
    let th = theta_constant(&chars[0], 8);
    println!(
        "theta with zero characteristic: {} refined-lattice terms up to scaled trace 8",
        th.support_len()
    );

    let trace = 4;
    let qi = QuadField::gaussian();
    let psi4 = psi_series(4, trace).expect("psi_4");
    let e4 = krieg_expansion(&KriegParams::new(qi, 4), trace);
    assert!(psi4.agrees_with(&e4, trace));
    println!("\npsi_4 = E_4 exactly up to trace {trace}");

    let psi8 = psi_series(8, trace).expect("psi_8");
    let e8 = krieg_expansion(&KriegParams::new(qi, 8), trace);
    let e4sq = e4.mul(&e4).unwrap();
    let combo =
        FourierExpansion::linear_combine(&[(ratio(14, 75), &e4sq), (ratio(61, 75), &e8)]).unwrap();
    assert!(psi8.agrees_with(&combo, trace));
    println!("psi_8 = (14/75) E_4^2 + (61/75) E_8 exactly up to trace {trace}");

    let f10 = f10_series(trace).expect("F_10");
    assert!(f10.siegel_phi().is_zero());
    println!("\nF_10 (the normalized product of all ten theta constants) is cuspidal;");
    println!("its first coefficients:");
    for h in f10.support_lex().into_iter().take(6) {
        println!("  a({:<12}) = {}", h.render_qi(), f10.coeff(&h));
    }
}
