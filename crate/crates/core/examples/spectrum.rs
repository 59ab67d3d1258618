//! Spectrum estimates for periodic and non-periodic numbers.

use second_best::cf::AlphaSpec;
use second_best::spectra::{report_human, spectrum_estimates, Options};

fn main() -> second_best::Result<()> {
    for spec in ["golden", "sqrt:2", "quad:1,1,17,2", "e"] {
        let alpha: AlphaSpec = spec.parse()?;
        let report = spectrum_estimates(&alpha, 400, &Options::default())?;
        println!("{}", report_human(&report));
    }
    Ok(())
}
