//! Dirichlet characters mod a prime and their Gauss sums.
//!
//! Builds the full character group mod p, evaluates Gauss sums
//! τ(χ) = Σ_a χ(a) e(a/p) by direct summation, and shows the two exact
//! identities the library leans on everywhere: |τ(χ)|² = p for primitive χ,
//! and the shift relation Σ_a χ(a) e(ab/p) = χ̄(b) τ(χ).
//!
//! Run with: cargo run --example gauss_sums

use twisted_moments::characters::{
    all_characters, gauss_sum, primitive_characters, twisted_gauss_relation, DirichletCharacter,
};
use twisted_moments::Result;

fn main() -> Result<()> {
    let p = 13u64;
    println!("character group mod {p} (generator g = {}):", all_characters(p)?[1].generator());
    println!("{:>6} {:>6} {:>10} {:>24} {:>14}", "label", "order", "primitive", "τ(χ)", "| |τ|²−p |");
    for chi in all_characters(p)? {
        let g = gauss_sum(&chi);
        println!(
            "{:>6} {:>6} {:>10} {:>11.6} {:+.6}i {:>14.3e}",
            chi.label(),
            chi.order(),
            chi.is_primitive(),
            g.value.re,
            g.value.im,
            (g.value.norm_sqr() - p as f64).abs()
        );
    }
    println!("(the trivial character is imprimitive: Σ_a χ₀(a)e(a/p) = −1, so | |τ|² − p | = p − 1)");

    // |τ(χ)|² = p across many moduli at once.
    println!("\nmax | |τ(χ)|² − p | over all primitive χ:");
    for p in [5u64, 31, 61, 101] {
        let worst = primitive_characters(p)?
            .iter()
            .map(|chi| (gauss_sum(chi).value.norm_sqr() - p as f64).abs())
            .fold(0.0f64, f64::max);
        println!("  p = {p:>4}: {worst:.3e}");
    }

    // The shift relation, which converts twisted exponential sums into
    // Gauss-sum multiples: Σ_a χ(a) e(ab/p) = χ̄(b) τ(χ).
    let chi = DirichletCharacter::new(13, 2)?;
    println!("\nshift relation for χ = {} and a few shifts b:", chi.label());
    for b in [1u64, 2, 7, 12] {
        let (lhs, rhs) = twisted_gauss_relation(&chi, b);
        println!(
            "  b = {b:>2}: lhs = {:+.6}{:+.6}i, rhs = {:+.6}{:+.6}i, |lhs − rhs| = {:.3e}",
            lhs.re,
            lhs.im,
            rhs.re,
            rhs.im,
            (lhs - rhs).norm()
        );
    }
    Ok(())
}
