//! Dirichlet characters of prime modulus and their Gauss sums.
//!
//! A character mod a prime p is pinned down by the least primitive root g
//! and an exponent a ∈ {0, …, p−2}: χ(n) = e(a·ind_g(n)/(p−1)) for n coprime
//! to p, and χ(n) = 0 otherwise. The (p, a) pair is the canonical label used
//! everywhere (CLI, CSV, file output), so runs are reproducible: the same
//! label always denotes the same function.

use num_complex::Complex64;

use crate::arith::{e, is_prime, mulmod, primitive_root};
use crate::error::Error;
use crate::Result;

/// A Dirichlet character mod a prime p, χ(n) = e(a·ind_g(n)/(p−1)).
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    p: u64,
    exponent: u64,
    generator: u64,
    /// log_table[n] = ind_g(n) for 1 ≤ n < p; log_table[0] unused.
    log_table: Vec<u32>,
}

impl DirichletCharacter {
    /// Character mod p with exponent a (reduced mod p−1).
    ///
    /// # Errors
    /// [`Error::DomainError`] when p is not an odd prime.
    pub fn new(p: u64, exponent: u64) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::DomainError(format!(
                "character modulus must be an odd prime, got {p}"
            )));
        }
        let generator = primitive_root(p)?;
        let mut log_table = vec![0u32; p as usize];
        let mut acc = 1u64;
        for ind in 0..(p - 1) {
            log_table[acc as usize] = ind as u32;
            acc = mulmod(acc, generator, p);
        }
        Ok(Self {
            p,
            exponent: exponent % (p - 1),
            generator,
            log_table,
        })
    }

    /// The modulus p.
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The exponent a in χ(g) = e(a/(p−1)).
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The least primitive root used as the index base.
    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// χ(n), with χ(n) = 0 when p | n. Accepts any integer (negative included).
    pub fn evaluate(&self, n: i64) -> Complex64 {
        let r = n.rem_euclid(self.p as i64) as u64;
        if r == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let ind = self.log_table[r as usize] as u64;
        // Exact rational phase a·ind/(p−1); reduce mod p−1 before the float
        // division so the argument of e(·) stays in [0, 1).
        let num = mulmod(self.exponent, ind, self.p - 1);
        e(num as f64 / (self.p - 1) as f64)
    }

    /// The conjugate character χ̄ (exponent p−1−a).
    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        out.exponent = (self.p - 1 - self.exponent) % (self.p - 1);
        out
    }

    /// Trivial character (exponent 0)?
    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    /// Primitive? For prime modulus, exactly the nontrivial characters.
    pub fn is_primitive(&self) -> bool {
        !self.is_trivial()
    }

    /// Real-valued? (χ = χ̄.)
    pub fn is_real(&self) -> bool {
        self.exponent == 0 || 2 * self.exponent == self.p - 1
    }

    /// χ(−1) as ±1: +1 for even characters, −1 for odd.
    pub fn parity(&self) -> i32 {
        // ind_g(−1) = (p−1)/2, so χ(−1) = e(a/2) = (−1)^a.
        if self.exponent.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Multiplicative order of χ in the character group.
    pub fn order(&self) -> u64 {
        let n = self.p - 1;
        n / crate::arith::gcd(self.exponent, n)
    }

    /// Canonical "p:a" label.
    pub fn label(&self) -> String {
        format!("{}:{}", self.p, self.exponent)
    }

    /// Parse a "p:a" label back into a character.
    ///
    /// # Errors
    /// [`Error::Config`] on malformed labels, [`Error::DomainError`] when p
    /// is not an odd prime.
    pub fn from_label(label: &str) -> Result<Self> {
        let (p_str, a_str) = label
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("character label must be \"p:a\", got {label:?}")))?;
        let p: u64 = p_str
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad modulus in character label {label:?}")))?;
        let a: u64 = a_str
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad exponent in character label {label:?}")))?;
        Self::new(p, a)
    }
}

/// All p−1 characters mod p, in exponent order 0, 1, …, p−2.
pub fn all_characters(p: u64) -> Result<Vec<DirichletCharacter>> {
    let base = DirichletCharacter::new(p, 0)?;
    Ok((0..p - 1)
        .map(|a| {
            let mut chi = base.clone();
            chi.exponent = a;
            chi
        })
        .collect())
}

/// The p−2 primitive (= nontrivial) characters mod p, exponents 1, …, p−2.
pub fn primitive_characters(p: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(all_characters(p)?
        .into_iter()
        .filter(DirichletCharacter::is_primitive)
        .collect())
}

/// The quadratic (Legendre-symbol) character mod an odd prime p.
pub fn legendre_character(p: u64) -> Result<DirichletCharacter> {
    DirichletCharacter::new(p, (p - 1) / 2)
}

/// A Gauss sum τ(χ) = Σ_{a mod p} χ(a) e(a/p), tagged with its character.
#[derive(Debug, Clone)]
pub struct GaussSumValue {
    pub value: Complex64,
    pub character: DirichletCharacter,
}

impl GaussSumValue {
    /// |τ(χ)| − √p, which must vanish (within rounding) for primitive χ.
    pub fn modulus_deviation(&self) -> f64 {
        (self.value.norm() - (self.character.modulus() as f64).sqrt()).abs()
    }
}

/// τ(χ) by direct p-term summation.
pub fn gauss_sum(chi: &DirichletCharacter) -> GaussSumValue {
    let p = chi.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 1..p {
        acc += chi.evaluate(a as i64) * e(a as f64 / p as f64);
    }
    GaussSumValue {
        value: acc,
        character: chi.clone(),
    }
}

/// Both sides of the twisted Gauss relation
/// Σ_{a mod p} χ(a) e(ab/p) = χ̄(b)·τ(χ), for gcd(b, p) = 1.
/// Returns (brute-force LHS, closed-form RHS).
pub fn twisted_gauss_relation(chi: &DirichletCharacter, b: u64) -> (Complex64, Complex64) {
    let p = chi.modulus();
    let mut lhs = Complex64::new(0.0, 0.0);
    for a in 1..p {
        lhs += chi.evaluate(a as i64) * e(mulmod(a, b, p) as f64 / p as f64);
    }
    let rhs = chi.conjugate().evaluate(b as i64) * gauss_sum(chi).value;
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gcd;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn legendre_mod_5_at_2_is_minus_one() {
        // Euler's criterion: 2^2 = 4 ≡ −1 (mod 5), so 2 is a non-residue.
        let chi = legendre_character(5).unwrap();
        let v = chi.evaluate(2);
        assert_abs_diff_eq!(v.re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn evaluate_small_table() {
        let chi = legendre_character(5).unwrap();
        // Quadratic residues mod 5 are {1, 4}.
        for (n, want) in [(1, 1.0), (2, -1.0), (3, -1.0), (4, 1.0)] {
            assert_abs_diff_eq!(chi.evaluate(n).re, want, epsilon = 1e-14);
        }
        assert_eq!(chi.evaluate(5).norm(), 0.0);
        assert_eq!(chi.evaluate(0).norm(), 0.0);
        assert_abs_diff_eq!(chi.evaluate(-1).re, 1.0, epsilon = 1e-14); // −1 ≡ 4
    }

    #[test]
    fn gauss_sum_legendre_mod_5_is_sqrt_5() {
        // Direct 5-term summation: Σ (n|5) e(n/5) = √5 for the 1 mod 4 prime 5.
        let tau = gauss_sum(&legendre_character(5).unwrap());
        assert_abs_diff_eq!(tau.value.re, 5.0f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(tau.value.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gauss_sum_legendre_mod_3_is_i_sqrt_3() {
        // 3 ≡ 3 (mod 4): the quadratic Gauss sum is i√3.
        let tau = gauss_sum(&legendre_character(3).unwrap());
        assert_abs_diff_eq!(tau.value.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tau.value.im, 3.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn gauss_sum_modulus_is_sqrt_p_for_all_primitive() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for chi in primitive_characters(p).unwrap() {
                let tau = gauss_sum(&chi);
                assert!(
                    tau.modulus_deviation() < 1e-9,
                    "|τ| ≠ √p for {}: deviation {}",
                    chi.label(),
                    tau.modulus_deviation()
                );
            }
        }
    }

    #[test]
    fn gauss_sum_trivial_character_is_minus_one() {
        // Σ_{a=1}^{p−1} e(a/p) = −1 (full geometric sum minus the a=0 term).
        for p in [3u64, 7, 11] {
            let tau = gauss_sum(&DirichletCharacter::new(p, 0).unwrap());
            assert_abs_diff_eq!(tau.value.re, -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(tau.value.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn twisted_gauss_relation_brute_force() {
        // Σ_a χ(a) e(ab/p) = χ̄(b) τ(χ), all primitive χ and units b, p ≤ 31.
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for chi in primitive_characters(p).unwrap() {
                for b in 1..p {
                    let (lhs, rhs) = twisted_gauss_relation(&chi, b);
                    assert!(
                        (lhs - rhs).norm() < 1e-9,
                        "twisted Gauss relation fails for {} b={}",
                        chi.label(),
                        b
                    );
                }
            }
        }
    }

    #[test]
    fn orthogonality_sum_over_n_vanishes() {
        for p in [7u64, 11, 13] {
            for chi in primitive_characters(p).unwrap() {
                let total: Complex64 = (0..p).map(|n| chi.evaluate(n as i64)).sum();
                assert!(total.norm() < 1e-11, "Σχ(n) ≠ 0 for {}", chi.label());
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        let chi = DirichletCharacter::new(13, 5).unwrap();
        assert_eq!(chi.label(), "13:5");
        let back = DirichletCharacter::from_label("13:5").unwrap();
        assert_eq!(back.modulus(), 13);
        assert_eq!(back.exponent(), 5);
        assert!(DirichletCharacter::from_label("13").is_err());
        assert!(DirichletCharacter::from_label("4:1").is_err());
    }

    #[test]
    fn character_counts() {
        assert_eq!(all_characters(11).unwrap().len(), 10);
        assert_eq!(primitive_characters(11).unwrap().len(), 9);
        assert_eq!(primitive_characters(3).unwrap().len(), 1);
    }

    proptest! {
        #[test]
        fn prop_completely_multiplicative(
            p in prop::sample::select(vec![5u64, 7, 11, 13, 17]),
            a in 0u64..16,
            m in 1i64..500,
            n in 1i64..500,
        ) {
            let chi = DirichletCharacter::new(p, a).unwrap();
            let lhs = chi.evaluate(m * n);
            let rhs = chi.evaluate(m) * chi.evaluate(n);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn prop_conjugate_is_pointwise_conjugate(
            p in prop::sample::select(vec![5u64, 7, 11, 13]),
            a in 0u64..12,
            n in -300i64..300,
        ) {
            let chi = DirichletCharacter::new(p, a).unwrap();
            let lhs = chi.conjugate().evaluate(n);
            let rhs = chi.evaluate(n).conj();
            prop_assert!((lhs - rhs).norm() < 1e-13);
        }

        #[test]
        fn prop_unit_modulus_on_units(
            p in prop::sample::select(vec![5u64, 7, 11, 13]),
            a in 0u64..12,
            n in 1i64..1000,
        ) {
            prop_assume!(gcd(n as u64, p) == 1);
            let chi = DirichletCharacter::new(p, a).unwrap();
            prop_assert!((chi.evaluate(n).norm() - 1.0).abs() < 1e-13);
        }

        #[test]
        fn prop_parity_matches_evaluate(
            p in prop::sample::select(vec![5u64, 7, 11, 13, 17]),
            a in 0u64..16,
        ) {
            let chi = DirichletCharacter::new(p, a).unwrap();
            let at_minus_one = chi.evaluate(-1);
            prop_assert!((at_minus_one.re - chi.parity() as f64).abs() < 1e-13);
            prop_assert!(at_minus_one.im.abs() < 1e-13);
        }
    }
}
