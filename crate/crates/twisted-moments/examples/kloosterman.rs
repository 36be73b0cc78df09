//! Kloosterman sums S(m, n; c) three ways, and the Weil bound.
//!
//! S(m, n; c) = Σ_{x mod c, (x,c)=1} e((mx + n x̄)/c) is evaluated by the
//! definition (exact rational bookkeeping), by the multiplicative-splitting
//! fast path used in production scans, and in batch.  The Weil bound
//! |S(m, n; c)| ≤ τ(c) √gcd(m, n, c) √c is then probed on random samples.
//!
//! Run with: cargo run --example kloosterman

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twisted_moments::arith::{divisor_count, gcd};
use twisted_moments::exp_sums::{kloosterman, kloosterman_fast};
use twisted_moments::Result;

fn main() -> Result<()> {
    println!("{:>4} {:>4} {:>5} {:>14} {:>14} {:>12}", "m", "n", "c", "definition", "fast path", "difference");
    for &(m, n, c) in &[(1i64, 1i64, 7u64), (2, 3, 12), (1, 4, 25), (5, 7, 210), (1, 1, 1009)] {
        let slow = kloosterman(m, n, c).value;
        let fast = kloosterman_fast(m, n, c);
        println!(
            "{m:>4} {n:>4} {c:>5} {slow:>14.8} {fast:>14.8} {:>12.3e}",
            (slow - fast).abs()
        );
    }

    // Selberg/Kuznetsov-style identity check: S(m, n; c) is symmetric in
    // (m, n) and depends only on residues mod c.
    let a = kloosterman_fast(3, 10, 31);
    let b = kloosterman_fast(10, 3, 31);
    let shifted = kloosterman_fast(3 + 31, 10 - 2 * 31, 31);
    println!("\nsymmetry      |S(3,10;31) − S(10,3;31)|   = {:.3e}", (a - b).abs());
    println!("periodicity   |S(3,10;31) − S(34,−52;31)| = {:.3e}", (a - shifted).abs());

    // Weil bound margins. The ratio |S|/(τ(c)√(gcd·c)) never exceeds 1;
    // how close it gets depends on the factorization of c.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("\nWeil bound |S(m,n;c)| ≤ τ(c)·√gcd(m,n,c)·√c, tightest of 2000 random samples:");
    for &c in &[101u64, 128, 210, 509, 5040] {
        let tau = divisor_count(c) as f64;
        let mut worst_ratio = 0.0f64;
        let mut at = (0i64, 0i64);
        for _ in 0..2000 {
            let m = rng.gen_range(1i64..=1000);
            let n = rng.gen_range(1i64..=1000);
            let bound = tau * (gcd(gcd(m as u64, n as u64), c) as f64).sqrt() * (c as f64).sqrt();
            let ratio = kloosterman_fast(m, n, c).abs() / bound;
            if ratio > worst_ratio {
                worst_ratio = ratio;
                at = (m, n);
            }
        }
        println!("  c = {c:>5}: max |S|/bound = {worst_ratio:.4} at (m, n) = {at:?}");
    }
    Ok(())
}
