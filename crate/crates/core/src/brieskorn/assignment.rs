use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use super::seifert::SeifertPresentation;
use crate::rational::Rational;

/// Image of the central generator `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CentralImage {
    /// `exp(2πim/3)·I`.
    Scalar(u8),
    /// `diag(−1, −1, 1)`; generators then live in S(U(2)×U(1)).
    SplitSign,
}

/// Eigenvalues of the three generators, as turns in `[0, 1)`.
///
/// For [`CentralImage::Scalar`] each triple is sorted. For
/// [`CentralImage::SplitSign`] the first two entries (sorted) act on the
/// upper 2×2 block and the third on the last coordinate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RotationAssignment {
    pub central: CentralImage,
    pub turns: [[Rational; 3]; 3],
}

impl RotationAssignment {
    pub fn is_split(&self) -> bool {
        self.central == CentralImage::SplitSign
    }

    /// Turns of `h^b₀`, the required value of `x₁x₂x₃`.
    pub fn target_turns(&self, p: &SeifertPresentation) -> [Rational; 3] {
        match self.central {
            CentralImage::Scalar(m) => {
                let t = Rational::new(m as i64 * p.b0, 3).fract_mod1();
                [t; 3]
            }
            CentralImage::SplitSign => {
                let t = Rational::new(p.b0, 2).fract_mod1();
                [t, t, Rational::ZERO]
            }
        }
    }

    /// Every generator has a single eigenvalue.
    pub fn all_central(&self) -> bool {
        self.turns.iter().all(|t| t[0] == t[1] && t[1] == t[2])
    }
}

impl fmt::Display for RotationAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.central {
            CentralImage::Scalar(m) => write!(f, "h=w^{m}")?,
            CentralImage::SplitSign => write!(f, "h=diag(-1,-1,1)")?,
        }
        for (i, t) in self.turns.iter().enumerate() {
            let sep = if self.is_split() { "|" } else { "," };
            write!(f, " x{}=[{},{}{}{}]", i + 1, t[0], t[1], sep, t[2])?;
        }
        Ok(())
    }
}

impl Serialize for RotationAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The `a`-th roots of `exp(2πi·target)`, as turns.
fn roots(a: i64, target: Rational) -> Vec<Rational> {
    (0..a).map(|k| ((target + k) .div_int(a)).fract_mod1()).collect()
}

fn sum_is_integer(ts: &[Rational]) -> bool {
    ts.iter().copied().sum::<Rational>().is_integer()
}

fn scalar_classes(a: i64, target: Rational) -> Vec<[Rational; 3]> {
    let r = roots(a, target);
    let mut out = Vec::new();
    for i in 0..r.len() {
        for j in i..r.len() {
            for k in j..r.len() {
                let mut t = [r[i], r[j], r[k]];
                if sum_is_integer(&t) {
                    t.sort();
                    out.push(t);
                }
            }
        }
    }
    out
}

fn split_classes(a: i64, upper_target: Rational) -> Vec<[Rational; 3]> {
    let up = roots(a, upper_target);
    let low = roots(a, Rational::ZERO);
    let mut out = Vec::new();
    for i in 0..up.len() {
        for j in i..up.len() {
            for &l in &low {
                let mut pair = [up[i], up[j]];
                pair.sort();
                let t = [pair[0], pair[1], l];
                if sum_is_integer(&t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// All eigenvalue assignments compatible with `xᵢ^aᵢ = h^(−bᵢ)`,
/// `det xᵢ = 1` and, in the split case, `x₁x₂x₃ = h^b₀` on the last
/// coordinate.
pub fn su3_candidates(p: &SeifertPresentation) -> Vec<RotationAssignment> {
    let mut out = BTreeSet::new();
    for m in 0u8..3 {
        let per: Vec<Vec<[Rational; 3]>> = (0..3)
            .map(|i| scalar_classes(p.a[i], Rational::new(-(m as i64) * p.b[i], 3)))
            .collect();
        for t1 in &per[0] {
            for t2 in &per[1] {
                for t3 in &per[2] {
                    out.insert(RotationAssignment { central: CentralImage::Scalar(m), turns: [*t1, *t2, *t3] });
                }
            }
        }
    }
    let per: Vec<Vec<[Rational; 3]>> = (0..3)
        .map(|i| split_classes(p.a[i], Rational::new(-p.b[i], 2)))
        .collect();
    for t1 in &per[0] {
        for t2 in &per[1] {
            for t3 in &per[2] {
                if (t1[2] + t2[2] + t3[2]).is_integer() {
                    out.insert(RotationAssignment { central: CentralImage::SplitSign, turns: [*t1, *t2, *t3] });
                }
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::super::seifert::seifert_presentation;
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn order_two_generator_classes() {
        let cls = scalar_classes(2, Rational::ZERO);
        assert_eq!(cls, vec![[r(0, 1), r(0, 1), r(0, 1)], [r(0, 1), r(1, 2), r(1, 2)]]);
        // {−1,−1,−1} has determinant −1
        assert!(!cls.contains(&[r(1, 2); 3]));
    }

    #[test]
    fn eigen_constraints_hold_exactly() {
        let p = seifert_presentation(2, 3, 7).unwrap();
        let cands = su3_candidates(&p);
        assert!(!cands.is_empty());
        for ra in &cands {
            for i in 0..3 {
                assert!(sum_is_integer(&ra.turns[i]));
                let (want_up, want_low) = match ra.central {
                    CentralImage::Scalar(m) => (r(-(m as i64) * p.b[i], 3), r(-(m as i64) * p.b[i], 3)),
                    CentralImage::SplitSign => (r(-p.b[i], 2), Rational::ZERO),
                };
                for j in 0..3 {
                    let want = if j == 2 { want_low } else { want_up };
                    assert!(ra.turns[i][j].scale(p.a[i]).congruent_mod1(&want));
                }
            }
        }
    }

    #[test]
    fn seven_roots_of_unity_triples() {
        let cls = scalar_classes(7, Rational::ZERO);
        let sevenths: Vec<[i64; 3]> = cls.iter().map(|t| t.map(|x| x.numer() * 7 / x.denom())).collect();
        for want in [[0, 1, 6], [0, 2, 5], [0, 3, 4], [1, 2, 4], [3, 5, 6]] {
            assert!(sevenths.contains(&want));
        }
    }
}
