//! The smooth cutoff V(x) of the approximate functional equation.
//!
//! V(x) = (1/2πi) ∫_(σ) Γ(s + k/2)/Γ(k/2) · (2πx)^{−s} ds/s interpolates
//! between V(0) = 1 and super-exponential decay; the central-value sums are
//! truncated exactly where V drops below the cutoff tolerance.  The library
//! evaluates V by a closed incomplete-gamma form; the contour integral
//! serves as the independent oracle.  At weight k = 2 the closed form
//! degenerates to a bare exponential, V(x) = e^{−2πx}.
//!
//! Run with: cargo run --example afe_weight

use twisted_moments::special::{weight_v, weight_v_oracle, WeightFunctionV};
use twisted_moments::tolerances::AFE_WEIGHT_CUTOFF;
use twisted_moments::Result;

fn main() -> Result<()> {
    println!("{:>10} {:>16} {:>16} {:>16} {:>12}", "x", "V₂(x) closed", "V₂ contour", "e^{−2πx}", "worst dev");
    for &x in &[1e-3f64, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0] {
        let closed = weight_v(2, x)?;
        let contour = weight_v_oracle(2, x, 2.0, 40.0)?;
        let exponential = (-2.0 * std::f64::consts::PI * x).exp();
        let dev = (closed - contour).abs().max((closed - exponential).abs());
        println!("{x:>10.3} {closed:>16.9e} {contour:>16.9e} {exponential:>16.9e} {dev:>12.3e}");
    }

    println!("\nhigher weights decay at the same scale but start flatter:");
    println!("{:>10} {:>16} {:>16} {:>16}", "x", "V₂(x)", "V₄(x)", "V₁₂(x)");
    for &x in &[0.01f64, 0.1, 0.5, 1.0, 2.0] {
        println!(
            "{x:>10.3} {:>16.9e} {:>16.9e} {:>16.9e}",
            weight_v(2, x)?,
            weight_v(4, x)?,
            weight_v(12, x)?
        );
    }

    // The truncation point x*(ε) with V(x) < ε for x > x* fixes how many
    // Hecke eigenvalues every central value needs: n ≤ x*·√q·p.
    println!("\ntruncation points x* at cutoff ε = {AFE_WEIGHT_CUTOFF:.0e}:");
    for &k in &[2u32, 4, 12] {
        let v = WeightFunctionV::new(k)?;
        let x_star = v.truncation_point(AFE_WEIGHT_CUTOFF);
        println!(
            "  k = {k:>2}: x* = {x_star:.4}, V(x*) = {:.3e}; AFE length at (q, p) = (11, 3): {:.0} terms",
            v.eval(x_star)?,
            (x_star * 11f64.sqrt() * 3.0).ceil()
        );
    }
    Ok(())
}
