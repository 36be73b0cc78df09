//! Weight-2 Hecke eigendata from modular symbols, cross-checked twice.
//!
//! The space of weight-2 cusp forms for Γ₀(q) is computed via Manin
//! symbols; Hecke operators act by Heilbronn matrices and the rational
//! eigenvector gives exact integer eigenvalues a(n).  At q = 11 the same
//! numbers come from two independent constructions:
//!
//!   * the eta product η(z)²η(11z)² expanded as a q-series, and
//!   * counting points on the elliptic curve  y² + y = x³ − x² − 10x − 20
//!     over F_ℓ  (a(ℓ) = ℓ + 1 − #E(F_ℓ)).
//!
//! Run with: cargo run --example eigendata_level11

use twisted_moments::eigendata::{eta_product_coefficients, newform_eigendata};
use twisted_moments::modsym::{build_space, genus_x0_prime};
use twisted_moments::Result;

/// Brute-force count of points on E: y² + y = x³ − x² − 10x − 20 over F_ℓ,
/// returning a(ℓ) = ℓ + 1 − #E(F_ℓ).
fn elliptic_ap(ell: u64) -> i64 {
    let l = ell as i64;
    let md = |x: i64| x.rem_euclid(l);
    let mut count = 1i64; // point at infinity
    for x in 0..l {
        for y in 0..l {
            if md(y * y + y) == md(md(x * x * x) - md(x * x) - md(10 * x) - 20) {
                count += 1;
            }
        }
    }
    l + 1 - count
}

fn main() -> Result<()> {
    println!("genus of X₀(q) (the number of weight-2 newforms at prime q):");
    for q in [2u64, 11, 13, 23, 37, 59] {
        println!("  q = {q:>3}: genus {}", genus_x0_prime(q)?);
    }

    let space = build_space(11)?;
    let forms = newform_eigendata(&space, 50)?;
    let f = &forms[0];
    println!(
        "\nlevel 11: dim {} newform {} with fricke sign {:+}",
        forms.len(),
        f.label(),
        f.fricke_sign()
    );

    let eta = eta_product_coefficients(2, 11, 50)?;
    println!("{:>4} {:>16} {:>12}", "n", "modular symbols", "eta product");
    for n in 1..=20u64 {
        println!("{n:>4} {:>16} {:>12}", f.coefficient(n)?, eta[(n - 1) as usize]);
    }

    // Third construction, at primes: Eichler–Shimura says a(ℓ) counts
    // points on the curve y² + y = x³ − x² − 10x − 20 over F_ℓ.
    println!("\n{:>4} {:>16} {:>16}", "ℓ", "modular symbols", "ℓ+1−#E(F_ℓ)");
    for ell in [2u64, 3, 5, 7, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        println!("{ell:>4} {:>16} {:>16}", f.coefficient(ell)?, elliptic_ap(ell));
    }

    // Hecke multiplicativity and the Deligne bound, the invariants every
    // ingested eigendata file must satisfy.
    println!("\nstructural battery: validate() checks λ(1)=1, multiplicativity,");
    println!("prime-power recursion, |λ(n)| ≤ τ(n), and the λ(q) = ±q^(−1/2) normalization.");
    f.validate()?;
    println!("level 11 passes; λ(11) = {:+.6} (±1/√11 = ±{:.6})", f.lambda(11)?, 1.0 / 11f64.sqrt());

    // A two-dimensional space: level 23's newforms have eigenvalues in
    // ℤ[(1+√5)/2], so only the λ(n) (floats) are exposed, not integers.
    let space23 = build_space(23)?;
    let forms23 = newform_eigendata(&space23, 30)?;
    println!("\nlevel 23: dim {}; λ(2) of the two conjugate forms:", forms23.len());
    for g in &forms23 {
        println!("  form {}: λ(2) = {:+.9}", g.label(), g.lambda(2)?);
    }
    let trace = (forms23[0].lambda(2)? + forms23[1].lambda(2)?) * 2f64.sqrt();
    println!("(λ-sum × √2 = trace of T₂ = {trace:+.6}, an integer)");
    Ok(())
}
