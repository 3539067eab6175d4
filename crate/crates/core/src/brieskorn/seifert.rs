use serde::Serialize;

use crate::error::{Error, Result};

/// Seifert invariants of Σ(a₁,a₂,a₃).
///
/// The fundamental group is
/// `⟨x₁,x₂,x₃,h | h central, xᵢ^aᵢ = h^(−bᵢ), x₁x₂x₃ = h^b₀⟩`, and the
/// invariants satisfy `a·b₀ + Σ (a/aᵢ)·bᵢ = ±1` with `a = a₁a₂a₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SeifertPresentation {
    pub a: [i64; 3],
    pub b0: i64,
    pub b: [i64; 3],
}

impl SeifertPresentation {
    /// `a·b₀ + Σ (a/aᵢ)·bᵢ`; ±1 for a homology sphere.
    pub fn euler_numerator(&self) -> i64 {
        let prod: i64 = self.a.iter().product();
        prod * self.b0 + (0..3).map(|i| prod / self.a[i] * self.b[i]).sum::<i64>()
    }

    pub fn is_homology_sphere(&self) -> bool {
        self.euler_numerator().abs() == 1
            && (0..3).all(|i| self.b[i] > 0 && self.b[i] < self.a[i])
    }

    pub fn label(&self) -> String {
        format!("Σ({},{},{})", self.a[0], self.a[1], self.a[2])
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Inverse of `x` modulo `m` (extended Euclid); `None` unless coprime.
fn mod_inverse(x: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (x.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

/// Seifert invariants with Euler numerator +1: each bᵢ is the inverse of
/// a/aᵢ modulo aᵢ and b₀ is then forced.
pub fn seifert_presentation(a1: i64, a2: i64, a3: i64) -> Result<SeifertPresentation> {
    let a = [a1, a2, a3];
    let coprime = a.iter().all(|&x| x >= 2)
        && gcd(a1, a2) == 1
        && gcd(a1, a3) == 1
        && gcd(a2, a3) == 1;
    if !coprime {
        return Err(Error::NotCoprime(a));
    }
    let prod = a1 * a2 * a3;
    let mut b = [0i64; 3];
    for i in 0..3 {
        b[i] = mod_inverse(prod / a[i], a[i]).ok_or(Error::NotCoprime(a))?;
    }
    let rest: i64 = (0..3).map(|i| prod / a[i] * b[i]).sum();
    debug_assert_eq!((1 - rest).rem_euclid(prod), 0);
    let p = SeifertPresentation { a, b0: (1 - rest) / prod, b };
    debug_assert!(p.is_homology_sphere());
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poincare_sphere() {
        let p = seifert_presentation(2, 3, 5).unwrap();
        assert_eq!(p.b0, -1);
        assert_eq!(p.b, [1, 1, 1]);
        assert_eq!(p.euler_numerator(), 1);
    }

    #[test]
    fn non_coprime_rejected() {
        assert!(matches!(seifert_presentation(2, 4, 5), Err(Error::NotCoprime(_))));
        assert!(seifert_presentation(1, 3, 5).is_err());
    }

    #[test]
    fn mod_inverse_matches_definition() {
        for m in 2..30 {
            for x in 1..m {
                match mod_inverse(x, m) {
                    Some(y) => assert_eq!(x * y % m, 1),
                    None => assert_ne!(gcd(x, m), 1),
                }
            }
        }
    }
}
