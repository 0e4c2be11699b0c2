//! Big images and big preimages: finite symbol families through which every
//! transition can be routed. The shipped certificates verify on FS2, GM, and
//! P2 — and fail on the band shift, whose upward drift outruns any finite
//! family.
//!
//! Run with: cargo run --example bip_certificates

use rtmc::config::fixture;
use rtmc::shift::verify_bip;

fn main() -> rtmc::error::Result<()> {
    for name in ["FS2", "GM", "P2", "NOBIP"] {
        let config = fixture(name)?;
        let shift = config.build_shift()?;
        let cert = config.build_certificate(&shift)?.expect("fixture ships a certificate");
        let report = verify_bip(&shift, &cert)?;

        println!("{name}:");
        println!(
            "  images_ok = {:5}  preimages_ok = {:5}  (Ω_bi weight {:.2}, Ω_bp weight {:.2})",
            report.images_ok, report.preimages_ok, report.omega_bi_weight, report.omega_bp_weight
        );
        if !report.holds() {
            for (s, a) in report.image_witnesses.iter().take(3) {
                println!("  image witness: state {} symbol {a} has no successor in the family", s.0);
            }
            for (s, a) in report.preimage_witnesses.iter().take(3) {
                println!("  preimage witness: state {} symbol {a} has no predecessor in the family", s.0);
            }
        }
    }
    println!("\nThe band rule j ∈ {{i, i+1}} only moves upward, so symbols past the");
    println!("family's reach can never route through it — no truncation level fixes that.");
    Ok(())
}
