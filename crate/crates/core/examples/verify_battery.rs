//! The full verification battery on the reference setup, as run by
//! `al-lattice verify`.

use al_lattice::cli::{battery, VerifySettings};

fn main() {
    let settings = VerifySettings { points: 20, ..VerifySettings::reference() };
    let checks = battery(&settings);
    for ch in &checks {
        let cmp = if ch.control { ">" } else { "<" };
        println!("{:<4} {:<60} {:>10.2e} {cmp} {:.0e}", if ch.passed { "ok" } else { "FAIL" }, ch.name, ch.residual, ch.tol);
    }
    println!("{} of {} passed", checks.iter().filter(|c| c.passed).count(), checks.len());
}
