//! The numerical invariants of a moduli snapshot, all in exact arithmetic.
//!
//! * λ′: signed count of irreducible orbits.
//! * τ″: reducible correction, ¼ Σ (−1)^SF (SF_𝔥⊥(Â⁺,A) + SF_𝔥⊥(Â⁻,A) + h¹(Â⁻)).
//! * τ = λ′ + τ″, the integer-valued invariant.
//! * λ″: the Chern–Simons corrected term ½ Σ (−1)^SF (SF_𝔥⊥(θ,A) − 4cs(Â) + 2).
//! * λ_SU(3) = λ′ + λ″ and λ_SU(2) = Σ_reducible (−1)^SF.
//!
//! The trivial orbit is never part of any sum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moduli::{validate, ModuliData};
use crate::rational::Rational;

/// A sample of the flat reducible stratum: its rho invariant and h¹ with
/// 𝔥⊥ coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlatReducibleRecord {
    pub rho: Rational,
    pub h1: i64,
}

/// ϱ = SF_C²(θ,A) − 4cs(A) + 2 − ½h¹.
pub fn rho(sf_c2: i64, cs: Rational, h1: i64) -> Rational {
    Rational::from_integer(sf_c2 + 2) - cs.scale(4) - Rational::new(h1, 2)
}

/// Extremal weights of a component from samples of its flat orbits:
/// α⁺ = max(ϱ + ½h¹), α⁻ = min(ϱ − ½h¹).
pub fn alpha_pair(records: &[FlatReducibleRecord]) -> Result<(Rational, Rational)> {
    let plus = records.iter().map(|r| r.rho + Rational::new(r.h1, 2)).max();
    let minus = records.iter().map(|r| r.rho - Rational::new(r.h1, 2)).min();
    match (plus, minus) {
        (Some(p), Some(m)) => Ok((p, m)),
        _ => Err(Error::EmptyRecords),
    }
}

fn ensure_valid(m: &ModuliData) -> Result<()> {
    let report = validate(m);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidData(report))
    }
}

fn lambda_prime_unchecked(m: &ModuliData) -> i64 {
    m.irreducible_orbits.iter().map(|o| o.sign()).sum()
}

fn tau_correction_unchecked(m: &ModuliData) -> i64 {
    let mut total = 0i64;
    for o in &m.reducible_orbits {
        // validate() guarantees the component exists
        let h1 = m.component(o.component).map_or(0, |c| c.h1_minus);
        total += o.sign() * (o.sf_from_plus + o.sf_from_minus + h1);
    }
    // each summand is divisible by 4 on validated data
    debug_assert_eq!(total % 4, 0);
    total / 4
}

fn lambda_double_prime_unchecked(m: &ModuliData) -> Rational {
    m.reducible_orbits
        .iter()
        .map(|o| {
            let term = Rational::from_integer(o.sf_hperp_theta + 2) - o.cs_hat.scale(4);
            term.scale(o.sign())
        })
        .sum::<Rational>()
        .div_int(2)
}

fn lambda_su2_unchecked(m: &ModuliData) -> i64 {
    m.reducible_orbits.iter().map(|o| o.sign()).sum()
}

fn alpha_weighted_unchecked(m: &ModuliData) -> Rational {
    m.reducible_orbits
        .iter()
        .map(|o| {
            let c = m.component(o.component).expect("validated");
            (c.alpha_plus + c.alpha_minus).scale(o.sign())
        })
        .sum()
}

pub fn lambda_prime(m: &ModuliData) -> Result<i64> {
    ensure_valid(m)?;
    Ok(lambda_prime_unchecked(m))
}

pub fn tau_correction(m: &ModuliData) -> Result<i64> {
    ensure_valid(m)?;
    Ok(tau_correction_unchecked(m))
}

pub fn tau(m: &ModuliData) -> Result<i64> {
    ensure_valid(m)?;
    Ok(lambda_prime_unchecked(m) + tau_correction_unchecked(m))
}

pub fn lambda_double_prime(m: &ModuliData) -> Result<Rational> {
    ensure_valid(m)?;
    Ok(lambda_double_prime_unchecked(m))
}

pub fn lambda_su3(m: &ModuliData) -> Result<Rational> {
    ensure_valid(m)?;
    Ok(Rational::from_integer(lambda_prime_unchecked(m)) + lambda_double_prime_unchecked(m))
}

/// Signed reducible count. Genuine homology-sphere data gives an even
/// value; see [`summarize`] for the warning on odd results.
pub fn lambda_su2(m: &ModuliData) -> Result<i64> {
    ensure_valid(m)?;
    Ok(lambda_su2_unchecked(m))
}

/// Σ_reducible (−1)^SF (α⁺ + α⁻) over each orbit's component; unchanged by
/// generic perturbation changes and equal to 4(λ_SU(3) − τ).
pub fn alpha_weighted_count(m: &ModuliData) -> Result<Rational> {
    ensure_valid(m)?;
    Ok(alpha_weighted_unchecked(m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSummary {
    pub lambda_prime: i64,
    pub tau_correction: i64,
    pub tau: i64,
    pub lambda_double_prime: Rational,
    pub lambda_su3: Rational,
    pub lambda_su2: i64,
    pub alpha_weighted: Rational,
    pub warnings: Vec<String>,
}

impl InvariantSummary {
    /// Values that must agree between two snapshots of the same manifold.
    pub fn same_invariants(&self, other: &InvariantSummary) -> bool {
        self.tau == other.tau
            && self.lambda_su3 == other.lambda_su3
            && self.lambda_su2 == other.lambda_su2
            && self.alpha_weighted == other.alpha_weighted
    }
}

/// All invariants at once, validating a single time.
pub fn summarize(m: &ModuliData) -> Result<InvariantSummary> {
    let report = validate(m);
    if !report.is_valid() {
        return Err(Error::InvalidData(report));
    }
    let lambda_prime = lambda_prime_unchecked(m);
    let tau_correction = tau_correction_unchecked(m);
    let lambda_double_prime = lambda_double_prime_unchecked(m);
    let lambda_su2 = lambda_su2_unchecked(m);
    let mut warnings: Vec<String> = report.warnings.iter().map(|w| w.to_string()).collect();
    if lambda_su2 % 2 != 0 {
        warnings.push(format!("lambda_su2 = {lambda_su2} is odd; homology-sphere data gives even values"));
    }
    Ok(InvariantSummary {
        lambda_prime,
        tau_correction,
        tau: lambda_prime + tau_correction,
        lambda_double_prime,
        lambda_su3: Rational::from_integer(lambda_prime) + lambda_double_prime,
        lambda_su2,
        alpha_weighted: alpha_weighted_unchecked(m),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{IrreducibleOrbit, ReducibleComponent, ReducibleOrbit};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(2, q(1, 2), 0), q(2, 1));
        assert_eq!(rho(0, Rational::ZERO, 0), q(2, 1));
        assert_eq!(rho(-4, q(-1, 4), 4), q(-3, 1));
    }

    #[test]
    fn rho_absorbs_a_deck_step() {
        for (s, c, h) in [(0, q(1, 3), 0), (-7, q(5, 6), 8), (3, q(-2, 5), 4)] {
            assert_eq!(rho(s + 4, c + 1, h), rho(s, c, h));
        }
    }

    #[test]
    fn alpha_pair_examples() {
        let rec = |r: i64, h| FlatReducibleRecord { rho: q(r, 1), h1: h };
        assert_eq!(alpha_pair(&[rec(2, 0), rec(-3, 4)]).unwrap(), (q(2, 1), q(-5, 1)));
        assert_eq!(alpha_pair(&[rec(0, 4), rec(1, 0)]).unwrap(), (q(2, 1), q(-2, 1)));
        let r = q(7, 3);
        let single = FlatReducibleRecord { rho: r, h1: 0 };
        assert_eq!(alpha_pair(&[single]).unwrap(), (r, r));
        assert!(matches!(alpha_pair(&[]), Err(Error::EmptyRecords)));
    }

    fn irreducibles(sfs: &[i64]) -> ModuliData {
        ModuliData {
            irreducible_orbits: sfs.iter().map(|&s| IrreducibleOrbit { sf_theta: s }).collect(),
            ..ModuliData::empty("irr")
        }
    }

    #[test]
    fn lambda_prime_counts_signs() {
        assert_eq!(lambda_prime(&irreducibles(&[])).unwrap(), 0);
        assert_eq!(lambda_prime(&irreducibles(&[0, 1, 2])).unwrap(), 1);
    }

    #[test]
    fn tau_correction_examples() {
        let c2 = ReducibleComponent::from_lifts(1, Rational::ZERO, 2, -2, 4);
        let o2 = ReducibleOrbit::on_component(&c2, 0, -2);
        assert_eq!((o2.sf_from_plus, o2.sf_from_minus), (-2, 2));
        let m = ModuliData {
            components: vec![c2.clone()],
            reducible_orbits: vec![o2.clone()],
            ..ModuliData::empty("one")
        };
        assert_eq!(tau_correction(&m).unwrap(), 1);

        let mut o3 = o2.clone();
        o3.sf_theta = 1;
        let m2 = ModuliData {
            components: vec![c2],
            reducible_orbits: vec![o2, o3],
            ..ModuliData::empty("two")
        };
        assert_eq!(tau_correction(&m2).unwrap(), 0);
    }

    #[test]
    fn tau_correction_vanishes_without_hperp_data() {
        let c = ReducibleComponent::from_lifts(1, q(1, 3), 0, 0, 0);
        let m = ModuliData {
            components: vec![c.clone()],
            reducible_orbits: vec![ReducibleOrbit::on_component(&c, 0, 0), ReducibleOrbit::on_component(&c, 3, 0)],
            irreducible_orbits: vec![IrreducibleOrbit { sf_theta: 0 }],
            ..ModuliData::empty("l8")
        };
        assert_eq!(tau_correction(&m).unwrap(), 0);
        assert_eq!(tau(&m).unwrap(), lambda_prime(&m).unwrap());
    }

    #[test]
    fn tau_sums_parts() {
        let c2 = ReducibleComponent::from_lifts(1, Rational::ZERO, 2, -2, 4);
        let m = ModuliData {
            components: vec![c2.clone()],
            reducible_orbits: vec![ReducibleOrbit::on_component(&c2, 0, -2)],
            irreducible_orbits: vec![IrreducibleOrbit { sf_theta: 4 }],
            ..ModuliData::empty("t")
        };
        assert_eq!(lambda_prime(&m).unwrap(), 1);
        assert_eq!(tau_correction(&m).unwrap(), 1);
        assert_eq!(tau(&m).unwrap(), 2);
        assert_eq!(tau(&ModuliData::empty("e")).unwrap(), 0);
    }

    #[test]
    fn lambda_double_prime_example() {
        let c = ReducibleComponent::from_lifts(1, q(1, 2), 2, 2, 0);
        let m = ModuliData {
            components: vec![c.clone()],
            reducible_orbits: vec![ReducibleOrbit::on_component(&c, 0, 0)],
            ..ModuliData::empty("l2")
        };
        assert_eq!(lambda_double_prime(&m).unwrap(), q(1, 1));
        assert_eq!(lambda_double_prime(&ModuliData::empty("e")).unwrap(), Rational::ZERO);
    }

    #[test]
    fn lambda_su2_examples() {
        let c = ReducibleComponent::from_lifts(1, Rational::ZERO, 0, 0, 0);
        let mk = |a, b| ModuliData {
            components: vec![c.clone()],
            reducible_orbits: vec![ReducibleOrbit::on_component(&c, a, 0), ReducibleOrbit::on_component(&c, b, 0)],
            ..ModuliData::empty("su2")
        };
        assert_eq!(lambda_su2(&mk(0, 0)).unwrap(), 2);
        assert_eq!(lambda_su2(&mk(0, 1)).unwrap(), 0);
        let odd = ModuliData {
            components: vec![c.clone()],
            reducible_orbits: vec![ReducibleOrbit::on_component(&c, 0, 0)],
            ..ModuliData::empty("odd")
        };
        let s = summarize(&odd).unwrap();
        assert_eq!(s.lambda_su2, 1);
        assert!(s.warnings.iter().any(|w| w.contains("odd")));
    }

    #[test]
    fn invalid_data_is_rejected() {
        let mut c = ReducibleComponent::from_lifts(1, Rational::ZERO, 2, 2, 4);
        c.h1_minus = 2;
        let m = ModuliData { components: vec![c], ..ModuliData::empty("bad") };
        assert!(matches!(tau(&m), Err(Error::InvalidData(_))));
        assert!(matches!(lambda_su3(&m), Err(Error::InvalidData(_))));
    }

    #[test]
    fn lambda_su3_minus_tau_is_quarter_alpha_sum() {
        let c = ReducibleComponent::from_lifts(1, q(2, 3), 6, 2, 4);
        let m = ModuliData {
            components: vec![c.clone()],
            reducible_orbits: vec![ReducibleOrbit::on_component(&c, 1, -4), ReducibleOrbit::on_component(&c, 0, 0)],
            irreducible_orbits: vec![IrreducibleOrbit { sf_theta: 2 }],
            ..ModuliData::empty("l6")
        };
        let lhs = lambda_su3(&m).unwrap() - Rational::from_integer(tau(&m).unwrap());
        assert_eq!(lhs, alpha_weighted_count(&m).unwrap().div_int(4));
    }
}
