//! Print the resonance-separation ladder and its fitted mass exponent.

use kg_lab::resonance::verify_separation;

fn main() {
    let report = verify_separation(&[4.0, 8.0, 16.0, 32.0], 1).expect("separation scan");
    for s in &report.samples {
        println!(
            "M = {:>5}  |rho| = {:>10.3}  distance = {:.6e}",
            s.mass, s.rho, s.distance
        );
    }
    println!(
        "fitted distance ~ M^{:.3}  (per-mass minima: {:?})",
        report.fit.slope,
        report
            .per_mass_min
            .iter()
            .map(|(m, d)| format!("{m}:{d:.3}"))
            .collect::<Vec<_>>()
    );
}
