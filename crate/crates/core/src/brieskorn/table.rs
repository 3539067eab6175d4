use crate::error::{Error, Result};

/// `(p, r, A, B, C)`: τ(Σ(2,p,2pk ± r)) = A·k² ± B·k + C.
pub const FAMILIES: [(i64, i64, i64, i64, i64); 9] = [
    (3, 1, 3, 1, 0),
    (5, 1, 33, 9, 0),
    (5, 3, 33, 19, 2),
    (7, 1, 138, 26, 0),
    (7, 3, 138, 62, 4),
    (7, 5, 138, 102, 16),
    (9, 1, 390, 58, 0),
    (9, 5, 390, 210, 24),
    (9, 7, 390, 298, 52),
];

/// A member Σ(2,p,q) of a tabulated family, `q = 2pk + sign·r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub p: i64,
    pub q: i64,
    pub k: i64,
    pub r: i64,
    pub sign: i64,
}

pub fn locate(p: i64, q: i64) -> Result<FamilyMember> {
    for &(fp, r, ..) in &FAMILIES {
        if fp != p {
            continue;
        }
        for sign in [1, -1] {
            let rest = q - sign * r;
            if rest > 0 && rest % (2 * p) == 0 {
                return Ok(FamilyMember { p, q, k: rest / (2 * p), r, sign });
            }
        }
    }
    Err(Error::NotInTable { p, q })
}

/// Tabulated τ(Σ(2,p,q)).
pub fn tau_table(p: i64, q: i64) -> Result<i64> {
    let m = locate(p, q)?;
    let &(_, _, a, b, c) = FAMILIES.iter().find(|f| f.0 == p && f.1 == m.r).expect("located");
    Ok(a * m.k * m.k + m.sign * b * m.k + c)
}

/// Members of the families for `p` with `1 ≤ k ≤ k_max`, ordered by q.
pub fn family_members(p: i64, k_max: i64) -> Result<Vec<FamilyMember>> {
    let mut out = Vec::new();
    for &(fp, r, ..) in &FAMILIES {
        if fp != p {
            continue;
        }
        for k in 1..=k_max {
            for sign in [-1, 1] {
                out.push(FamilyMember { p, q: 2 * p * k + sign * r, k, r, sign });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NotInTable { p, q: 0 });
    }
    out.sort_by_key(|m| m.q);
    Ok(out)
}
