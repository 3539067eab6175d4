use serde::Serialize;

use super::seifert::SeifertPresentation;
use crate::rational::Rational;

/// One conjugacy class of irreducible SU(2) representations.
///
/// Generator `i` has eigenvalues `exp(±iπℓᵢ/aᵢ)`; `central_sign` is the
/// image of `h` (±1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Su2Class {
    pub central_sign: i64,
    pub rotation: [i64; 3],
}

impl Su2Class {
    /// Rotation angles divided by π.
    pub fn angles(&self, p: &SeifertPresentation) -> [Rational; 3] {
        [0, 1, 2].map(|i| Rational::new(self.rotation[i], p.a[i]))
    }
}

/// Whether three SU(2) elements with angles `t1, t2, t3` (in units of π) can
/// multiply to the identity with the product non-abelian.
pub fn triangle_admissible(t1: Rational, t2: Rational, t3: Rational) -> bool {
    let two = Rational::from_integer(2);
    let lo = (t1 - t2).abs();
    let hi = if t1 + t2 < two - t1 - t2 { t1 + t2 } else { two - t1 - t2 };
    lo < t3 && t3 < hi
}

/// Irreducible SU(2) classes of π₁Σ(a₁,a₂,a₃), by rotation numbers.
pub fn enumerate_su2(p: &SeifertPresentation) -> Vec<Su2Class> {
    let mut out = Vec::new();
    for eps in [1i64, -1] {
        // xᵢ^aᵢ = h^(−bᵢ) forces (−1)^ℓᵢ = ε^bᵢ.
        let parity = |i: usize| if eps == -1 { p.b[i].rem_euclid(2) } else { 0 };
        let ranges: Vec<Vec<i64>> = (0..3)
            .map(|i| (1..p.a[i]).filter(|l| l.rem_euclid(2) == parity(i)).collect())
            .collect();
        let flip = eps == -1 && p.b0.rem_euclid(2) == 1;
        for &l1 in &ranges[0] {
            for &l2 in &ranges[1] {
                for &l3 in &ranges[2] {
                    let t1 = Rational::new(l1, p.a[0]);
                    let t2 = Rational::new(l2, p.a[1]);
                    let mut t3 = Rational::new(l3, p.a[2]);
                    // x₁x₂ = ±x₃⁻¹; multiplying by −1 sends angle t to 1 − t.
                    if flip {
                        t3 = Rational::ONE - t3;
                    }
                    if triangle_admissible(t1, t2, t3) {
                        out.push(Su2Class { central_sign: eps, rotation: [l1, l2, l3] });
                    }
                }
            }
        }
    }
    out.sort();
    out
}
