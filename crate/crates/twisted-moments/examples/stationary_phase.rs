//! Oscillatory integrals with a square-root phase, vs stationary phase.
//!
//! After Poisson summation the moment computation meets integrals
//!
//!   𝒱₂^±(m₁) = ∫ W(x, y) e(±2√(xy)·N/(cq) − x·m₁N/(cpq)) dx
//!
//! over a fixed smooth bump W.  When the branch sign matches the sign of
//! m₁ the phase has a unique critical point x₀ = p²y/m₁², and the leading
//! stationary-phase term predicts the integral to O((N/cq)^{−1}); with no
//! critical point in the support, repeated integration by parts makes the
//! integral collapse.  This example runs adaptive quadrature against both
//! predictions as the oscillation depth N/(cq) grows.
//!
//! Run with: cargo run --example stationary_phase

use twisted_moments::special::oscillatory::frequency_zero_numeric;
use twisted_moments::special::{
    oscillatory_v_integral, stationary_phase_compare, BivariateCutoff, OscillatoryKind,
    OscillatorySpec,
};
use twisted_moments::Result;

fn main() -> Result<()> {
    let cutoff = BivariateCutoff::standard();
    let base = OscillatorySpec {
        n_scale: 0.0, // set per row below
        c: 1,
        q: 7,
        p: 5,
        m1: 5,
        y: 1.0,
        sign: 1,
    };

    println!("stationary point: x₀ = p²y/m₁² = 1 inside the bump support [0.5, 2.5]");
    println!(
        "{:>10} {:>16} {:>16} {:>10} {:>12}",
        "N/(cq)", "|quadrature|", "|prediction|", "rel err", "x₀ numeric"
    );
    for &depth in &[10.0f64, 100.0, 1000.0, 5000.0] {
        let spec = OscillatorySpec { n_scale: depth * 7.0, ..base };
        let cmp = stationary_phase_compare(&spec, &cutoff)?;
        let x0 = frequency_zero_numeric(&spec, &cutoff).expect("critical point in support");
        println!(
            "{depth:>10.0} {:>16.9e} {:>16.9e} {:>10.3e} {x0:>12.8}",
            cmp.quadrature.norm(),
            cmp.prediction.norm(),
            cmp.relative_error
        );
    }
    println!("(the leading-order relative error shrinks like (N/cq)^{{−1}})");

    // Push the critical point out of the support: the same integral at the
    // same depth drops by many orders of magnitude.
    println!("\nno critical point in support (m₁ = 25 moves x₀ to 0.04):");
    for &depth in &[100.0f64, 1000.0] {
        let inside = OscillatorySpec { n_scale: depth * 7.0, ..base };
        let outside = OscillatorySpec { m1: 25, ..inside };
        let v_in = oscillatory_v_integral(OscillatoryKind::V2, &inside, &cutoff)?.norm();
        let v_out = oscillatory_v_integral(OscillatoryKind::V2, &outside, &cutoff)?.norm();
        println!(
            "  N/(cq) = {depth:>5.0}: in-window {v_in:.3e}, out-of-window {v_out:.3e}, ratio {:.1e}",
            v_out / v_in
        );
    }

    // The linear-phase family 𝒱₁ has no critical point at all for m₁ ≠ 0
    // and decays with the frequency.
    println!("\nlinear-phase family 𝒱₁ (pure non-stationary decay):");
    for &m1 in &[1i64, 2, 4, 8] {
        let spec = OscillatorySpec { n_scale: 1000.0 * 7.0, m1, ..base };
        let v1 = oscillatory_v_integral(OscillatoryKind::V1, &spec, &cutoff)?.norm();
        println!("  m₁ = {m1}: |𝒱₁| = {v1:.3e}");
    }
    Ok(())
}
