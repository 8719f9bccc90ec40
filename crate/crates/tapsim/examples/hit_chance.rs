//! Probability that a noisy tap lands inside a target rect: the Gaussian
//! closed form against brute-force sampling, and what tap noise does to a
//! multi-step flow.
//!
//!     cargo run --example hit_chance

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use tapsim::analysis::{analytic_success, hit_probability};
use tapsim::document::load_script;
use tapsim::geometry::{DpPoint, DpRect};
use tapsim::scenario::run_trials;

fn main() {
    // A 48x48 dp button, aim dead center.
    let target = DpRect::new(150.0, 300.0, 48.0, 48.0);
    let aim = target.center();

    println!("sigma_dp  closed form  1e5 samples");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for sigma in [4.0, 8.0, 16.0, 24.0, 48.0] {
        let exact = hit_probability(&target, aim, sigma);
        let normal = Normal::new(0.0, sigma).unwrap();
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| {
                let p = DpPoint::new(
                    aim.x + normal.sample(&mut rng),
                    aim.y + normal.sample(&mut rng),
                );
                target.contains(p)
            })
            .count();
        println!(
            "{sigma:>8}  {exact:.6}     {:.6}",
            hits as f64 / n as f64
        );
    }

    // The same machinery drives the closed-form success estimate: per step,
    // a tap either advances, diverts, or misses and is retried.
    let fixtures = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut script = load_script(&fixtures.join("canonical-install.json")).expect("fixture loads");
    script.user.sigma_dp = 20.0;

    let analytic = analytic_success(&script).expect("default policy");
    println!();
    println!("canonical-install at sigma=20:");
    println!("  per-step: {:?}", analytic.per_step);
    println!("  overall:  {:.6}", analytic.overall);

    let estimate = run_trials(&script, 100_000, 9).expect("script is valid");
    println!("  trials:   {:.6} (n=100000, seed=9)", estimate.p_hat);
}
