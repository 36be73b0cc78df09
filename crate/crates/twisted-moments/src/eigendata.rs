//! Newform Hecke eigendata: computation from modular symbols, an
//! independent eta-product generator, exact-integer file export/ingest,
//! and the structural invariant battery that every data set must pass
//! before use.
//!
//! Normalization: `lambda(n)` stores λ(n) = a(n)/n^{(k−1)/2}, so that
//! λ(1) = 1, |λ(n)| ≤ τ(n) (Deligne), and |λ(q)| = q^{−1/2} at prime
//! level q. Files store the unnormalized integers a(n).

use std::fmt::Write as _;
use std::path::Path;

use crate::arith::{factorize, gcd, is_prime, primes_in_range};
use crate::error::Error;
use crate::modsym::ModularSymbolSpace;
use crate::Result;

/// Where a data set came from; ingested data has already survived the
/// invariant battery on load.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Ingested,
}

/// One newform's eigendata at prime level.
#[derive(Debug, Clone)]
pub struct NewformEigendata {
    level: u64,
    weight: u32,
    /// λ(n) for n = 1..=n_max, stored at index n−1.
    lambda: Vec<f64>,
    /// Exact integers a(n) when the coefficient field is rational.
    coefficients: Option<Vec<i64>>,
    fricke_sign: i8,
    form_index: usize,
    provenance: Provenance,
}

impl NewformEigendata {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn n_max(&self) -> u64 {
        self.lambda.len() as u64
    }

    pub fn fricke_sign(&self) -> i8 {
        self.fricke_sign
    }

    pub fn form_index(&self) -> usize {
        self.form_index
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Stable display label, e.g. `11.2.0` for level 11, weight 2, form 0.
    pub fn label(&self) -> String {
        format!("{}.{}.{}", self.level, self.weight, self.form_index)
    }

    /// Normalized eigenvalue λ(n); 1 ≤ n ≤ n_max.
    pub fn lambda(&self, n: u64) -> Result<f64> {
        if n == 0 || n > self.n_max() {
            return Err(Error::EigendataTooShort {
                required: n,
                available: self.n_max(),
            });
        }
        Ok(self.lambda[(n - 1) as usize])
    }

    /// Unnormalized integer coefficient a(n) = λ(n)·n^{(k−1)/2}.
    ///
    /// # Errors
    /// [`Error::NonIntegralEigendata`] when the coefficient field is not
    /// rational (e.g. both forms at level 23).
    pub fn coefficient(&self, n: u64) -> Result<i64> {
        if n == 0 || n > self.n_max() {
            return Err(Error::EigendataTooShort {
                required: n,
                available: self.n_max(),
            });
        }
        if let Some(c) = &self.coefficients {
            return Ok(c[(n - 1) as usize]);
        }
        let value = self.lambda[(n - 1) as usize]
            * (n as f64).powf((self.weight as f64 - 1.0) / 2.0);
        let rounded = value.round();
        if (value - rounded).abs() > 1e-6 * value.abs().max(1.0) {
            return Err(Error::NonIntegralEigendata {
                q: self.level,
                form: self.form_index,
                n,
                value,
            });
        }
        Ok(rounded as i64)
    }

    /// Run the full structural battery; every constructor and the ingest
    /// path call this before handing data out.
    ///
    /// # Errors
    /// [`Error::InvariantViolation`] naming the violated invariant and
    /// the first offending index.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-8;
        let n_max = self.n_max();
        if n_max < 1 || (self.lambda[0] - 1.0).abs() > tol {
            return Err(Error::InvariantViolation {
                invariant: "normalization λ(1) = 1",
                n: 1,
                detail: format!("λ(1) = {:?}", self.lambda.first()),
            });
        }
        // Deligne bound |λ(n)| ≤ τ(n).
        for n in 1..=n_max {
            let bound = crate::arith::divisor_count(n) as f64;
            let v = self.lambda[(n - 1) as usize];
            if v.abs() > bound + tol {
                return Err(Error::InvariantViolation {
                    invariant: "Deligne bound |λ(n)| ≤ τ(n)",
                    n,
                    detail: format!("|λ| = {} > {}", v.abs(), bound),
                });
            }
        }
        // Multiplicativity over coprime pairs.
        for m in 2..=n_max {
            for n in m..=n_max {
                if m * n > n_max {
                    break;
                }
                if gcd(m, n) != 1 {
                    continue;
                }
                let lhs = self.lambda[(m * n - 1) as usize];
                let rhs =
                    self.lambda[(m - 1) as usize] * self.lambda[(n - 1) as usize];
                if (lhs - rhs).abs() > tol {
                    return Err(Error::InvariantViolation {
                        invariant: "multiplicativity λ(mn) = λ(m)λ(n)",
                        n: m * n,
                        detail: format!("λ({m}·{n}) = {lhs} vs λ({m})λ({n}) = {rhs}"),
                    });
                }
            }
        }
        // Hecke recursion at prime powers.
        for ell in primes_in_range(2, n_max) {
            let l = (ell - 1) as usize;
            let mut pw = ell * ell;
            let mut prev2 = 1.0; // λ(ℓ⁰)
            let mut prev1 = self.lambda[l];
            while pw <= n_max {
                let expected = if ell == self.level {
                    self.lambda[l] * prev1
                } else {
                    self.lambda[l] * prev1 - prev2
                };
                let got = self.lambda[(pw - 1) as usize];
                if (got - expected).abs() > tol {
                    return Err(Error::InvariantViolation {
                        invariant: "Hecke recursion at prime powers",
                        n: pw,
                        detail: format!("λ({pw}) = {got}, recursion gives {expected}"),
                    });
                }
                prev2 = prev1;
                prev1 = got;
                pw *= ell;
            }
        }
        // Level eigenvalue and Fricke sign.
        if self.fricke_sign != 1 && self.fricke_sign != -1 {
            return Err(Error::InvariantViolation {
                invariant: "Fricke sign ∈ {±1}",
                n: self.level,
                detail: format!("sign = {}", self.fricke_sign),
            });
        }
        if self.level <= n_max {
            let lam_q = self.lambda[(self.level - 1) as usize];
            let want = -(self.fricke_sign as f64) / (self.level as f64).sqrt();
            if (lam_q - want).abs() > tol {
                return Err(Error::InvariantViolation {
                    invariant: "level eigenvalue λ(q) = −w·q^{−1/2}",
                    n: self.level,
                    detail: format!("λ(q) = {lam_q}, Fricke sign {} requires {want}", self.fricke_sign),
                });
            }
        }
        Ok(())
    }
}

/// Fill λ(n) for n = 1..=n_max from prime eigenvalues via multiplicativity
/// and the prime-power recursion (λ(ℓ)λ(ℓ^j) = λ(ℓ^{j+1}) + λ(ℓ^{j−1}) away
/// from the level; λ(q^{j+1}) = λ(q)λ(q^j) at it).
fn lambda_table(
    level: u64,
    n_max: u64,
    lambda_at_prime: impl Fn(u64) -> Result<f64>,
) -> Result<Vec<f64>> {
    let mut lam = vec![0.0f64; n_max as usize];
    lam[0] = 1.0;
    // Prime powers first.
    let mut power_table: std::collections::HashMap<u64, f64> =
        std::collections::HashMap::new();
    for ell in primes_in_range(2, n_max) {
        let l1 = lambda_at_prime(ell)?;
        power_table.insert(ell, l1);
        let (mut prev2, mut prev1, mut pw) = (1.0f64, l1, ell);
        while pw <= n_max / ell {
            pw *= ell;
            let next = if ell == level {
                l1 * prev1
            } else {
                l1 * prev1 - prev2
            };
            power_table.insert(pw, next);
            prev2 = prev1;
            prev1 = next;
        }
    }
    for n in 2..=n_max {
        let mut v = 1.0f64;
        for (p, e) in factorize(n) {
            v *= power_table[&p.pow(e)];
        }
        lam[(n - 1) as usize] = v;
    }
    Ok(lam)
}

/// Compute the eigendata of every newform at the space's (prime) level,
/// weight 2, up to `n_max`. Rational forms are snapped to their exact
/// integer coefficients; irrational ones (e.g. level 23) keep floating
/// eigenvalues and refuse integer export.
///
/// # Errors
/// [`Error::DomainError`] if n_max < 30 (too short for the battery to
/// mean anything); propagated separation/extraction failures.
pub fn newform_eigendata(
    space: &ModularSymbolSpace,
    n_max: u64,
) -> Result<Vec<NewformEigendata>> {
    if n_max < 30 {
        return Err(Error::DomainError(format!(
            "eigendata needs n_max ≥ 30, got {n_max}"
        )));
    }
    let q = space.level();
    let vectors = space.newform_vectors()?;
    let mut out = Vec::with_capacity(vectors.len());
    for v in &vectors {
        let lambda = lambda_table(q, n_max, |ell| {
            let a = space.eigenvalue_at_prime(v, ell)?;
            Ok(a / (ell as f64).sqrt())
        })?;
        let a_q = space.eigenvalue_at_prime(v, q)?;
        if (a_q.abs() - 1.0).abs() > 1e-6 {
            return Err(Error::InvariantViolation {
                invariant: "U_q eigenvalue ±1 at prime level",
                n: q,
                detail: format!("a(q) = {a_q}"),
            });
        }
        let fricke_sign = if a_q > 0.0 { -1i8 } else { 1i8 };
        // Try to snap to integers: exact for rational forms, and it
        // denoises the whole table.
        let mut ints = Vec::with_capacity(n_max as usize);
        let mut integral = true;
        for n in 1..=n_max {
            let val = lambda[(n - 1) as usize] * (n as f64).sqrt();
            let rounded = val.round();
            if (val - rounded).abs() > 1e-6 * val.abs().max(1.0) {
                integral = false;
                break;
            }
            ints.push(rounded as i64);
        }
        let (lambda, coefficients) = if integral {
            let snapped: Vec<f64> = ints
                .iter()
                .enumerate()
                .map(|(i, &a)| a as f64 / ((i + 1) as f64).sqrt())
                .collect();
            (snapped, Some(ints))
        } else {
            (lambda, None)
        };
        let form = NewformEigendata {
            level: q,
            weight: 2,
            lambda,
            coefficients,
            fricke_sign,
            form_index: v.index,
            provenance: Provenance::Computed,
        };
        form.validate()?;
        out.push(form);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Eta products: an independent generator
// ---------------------------------------------------------------------------

/// Coefficients of Π_{n≥1}(1 − x^n) mod x^{len}, by the pentagonal-number
/// theorem (exact, sparse ±1).
pub fn euler_product_coefficients(len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    if len == 0 {
        return out;
    }
    out[0] = 1;
    let mut k = 1i64;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        if e1 as usize >= len && e2 as usize >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        if (e1 as usize) < len {
            out[e1 as usize] = sign;
        }
        if (e2 as usize) < len {
            out[e2 as usize] = sign;
        }
        k += 1;
    }
    out
}

fn series_mul(a: &[i64], b: &[i64], len: usize) -> Vec<i64> {
    let mut out = vec![0i128; len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            if bj != 0 {
                out[i + j] += ai as i128 * bj as i128;
            }
        }
    }
    out.iter()
        .map(|&v| i64::try_from(v).expect("series coefficient fits i64"))
        .collect()
}

/// Integer q-expansion a(1..=n_max) of η(z)^r η(qz)^r, a newform of weight
/// r and level q precisely when r(q + 1) = 24 (so (r, q) ∈ {(2,11), (4,5)}
/// among primes).
///
/// # Errors
/// [`Error::DomainError`] unless r(q+1) = 24 with q prime.
pub fn eta_product_coefficients(r: u32, q: u64, n_max: u64) -> Result<Vec<i64>> {
    if !is_prime(q) || r as u64 * (q + 1) != 24 {
        return Err(Error::DomainError(format!(
            "η(z)^r η(qz)^r is a level-q newform only when r(q+1) = 24; got r = {r}, q = {q}"
        )));
    }
    let len = n_max as usize; // coefficient of x^{n−1} in the eta quotient
    let p1 = euler_product_coefficients(len);
    let mut pq = vec![0i64; len];
    for (i, &v) in p1.iter().enumerate() {
        if v != 0 && i * (q as usize) < len {
            pq[i * q as usize] = v;
        }
    }
    let base = series_mul(&p1, &pq, len);
    let mut acc = base.clone();
    for _ in 1..r {
        acc = series_mul(&acc, &base, len);
    }
    Ok(acc)
}

/// Eta-product eigendata as a [`NewformEigendata`] (weight r, level q).
pub fn eta_product_eigendata(r: u32, q: u64, n_max: u64) -> Result<NewformEigendata> {
    let ints = eta_product_coefficients(r, q, n_max)?;
    let k = r;
    let lambda: Vec<f64> = ints
        .iter()
        .enumerate()
        .map(|(i, &a)| a as f64 / ((i + 1) as f64).powf((k as f64 - 1.0) / 2.0))
        .collect();
    let a_q = ints[(q - 1) as usize] as f64;
    let w = -a_q / (q as f64).powf((k as f64 - 2.0) / 2.0);
    if (w.abs() - 1.0).abs() > 1e-9 {
        return Err(Error::InvariantViolation {
            invariant: "Fricke sign ∈ {±1}",
            n: q,
            detail: format!("pseudo-eigenvalue {w}"),
        });
    }
    let form = NewformEigendata {
        level: q,
        weight: k,
        lambda,
        coefficients: Some(ints),
        fricke_sign: if w > 0.0 { 1 } else { -1 },
        form_index: 0,
        provenance: Provenance::Computed,
    };
    form.validate()?;
    Ok(form)
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// Serialize forms in the exact-integer eigendata format:
/// one block per form, header
/// `# level=<q> weight=<k> form=<index> fricke=<+1|-1>`, then lines
/// `n,a_n` for n = 1..=n_max.
///
/// # Errors
/// [`Error::NonIntegralEigendata`] if any form has an irrational
/// coefficient field.
pub fn render_eigendata(forms: &[NewformEigendata]) -> Result<String> {
    let mut out = String::new();
    for f in forms {
        let sign = if f.fricke_sign >= 0 { "+1" } else { "-1" };
        writeln!(
            out,
            "# level={} weight={} form={} fricke={}",
            f.level, f.weight, f.form_index, sign
        )
        .expect("string write");
        for n in 1..=f.n_max() {
            writeln!(out, "{n},{}", f.coefficient(n)?).expect("string write");
        }
    }
    Ok(out)
}

/// Write [`render_eigendata`] output to a file.
pub fn export_eigendata(forms: &[NewformEigendata], path: &Path) -> Result<()> {
    let body = render_eigendata(forms)?;
    std::fs::write(path, body)?;
    Ok(())
}

/// Parse eigendata text: inverse of [`render_eigendata`]. Every form is
/// run through the full invariant battery before being returned.
///
/// # Errors
/// [`Error::FormatError`] for malformed headers/rows or a body that does
/// not start at n = 1 and step by 1; [`Error::InvariantViolation`] if the
/// numbers fail the battery.
pub fn parse_eigendata(text: &str) -> Result<Vec<NewformEigendata>> {
    struct Block {
        level: u64,
        weight: u32,
        form: usize,
        fricke: i8,
        coeffs: Vec<i64>,
    }
    let mut blocks: Vec<Block> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut level = None;
            let mut weight = None;
            let mut form = None;
            let mut fricke = None;
            for field in rest.split_whitespace() {
                let (key, value) = field.split_once('=').ok_or_else(|| {
                    Error::FormatError(format!(
                        "line {}: header field `{field}` is not key=value",
                        lineno + 1
                    ))
                })?;
                match key {
                    "level" => level = value.parse::<u64>().ok(),
                    "weight" => weight = value.parse::<u32>().ok(),
                    "form" => form = value.parse::<usize>().ok(),
                    "fricke" => {
                        fricke = match value {
                            "+1" => Some(1i8),
                            "-1" => Some(-1i8),
                            _ => None,
                        }
                    }
                    other => {
                        return Err(Error::FormatError(format!(
                            "line {}: unknown header key `{other}`",
                            lineno + 1
                        )))
                    }
                }
            }
            let (Some(level), Some(weight), Some(form), Some(fricke)) =
                (level, weight, form, fricke)
            else {
                return Err(Error::FormatError(format!(
                    "line {}: header must carry level, weight, form, fricke",
                    lineno + 1
                )));
            };
            blocks.push(Block {
                level,
                weight,
                form,
                fricke,
                coeffs: Vec::new(),
            });
        } else {
            let block = blocks.last_mut().ok_or_else(|| {
                Error::FormatError(format!(
                    "line {}: coefficient row before any header",
                    lineno + 1
                ))
            })?;
            let (n_str, a_str) = line.split_once(',').ok_or_else(|| {
                Error::FormatError(format!(
                    "line {}: expected `n,a_n`, got `{line}`",
                    lineno + 1
                ))
            })?;
            let n: u64 = n_str.parse().map_err(|_| {
                Error::FormatError(format!("line {}: bad index `{n_str}`", lineno + 1))
            })?;
            let a: i64 = a_str.parse().map_err(|_| {
                Error::FormatError(format!(
                    "line {}: bad coefficient `{a_str}`",
                    lineno + 1
                ))
            })?;
            let expected = block.coeffs.len() as u64 + 1;
            if n != expected {
                return Err(Error::FormatError(format!(
                    "line {}: coefficient rows must run 1,2,… without gaps; expected n = {expected}, got {n}",
                    lineno + 1
                )));
            }
            block.coeffs.push(a);
        }
    }
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        if b.coeffs.is_empty() {
            return Err(Error::FormatError(format!(
                "form {} at level {}: no coefficient rows (n = 1 missing)",
                b.form, b.level
            )));
        }
        let lambda: Vec<f64> = b
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                a as f64 / ((i + 1) as f64).powf((b.weight as f64 - 1.0) / 2.0)
            })
            .collect();
        let form = NewformEigendata {
            level: b.level,
            weight: b.weight,
            lambda,
            coefficients: Some(b.coeffs),
            fricke_sign: b.fricke,
            form_index: b.form,
            provenance: Provenance::Ingested,
        };
        form.validate()?;
        out.push(form);
    }
    Ok(out)
}

/// Read and validate an eigendata file.
pub fn ingest_eigendata(path: &Path) -> Result<Vec<NewformEigendata>> {
    let text = std::fs::read_to_string(path)?;
    parse_eigendata(&text)
}
