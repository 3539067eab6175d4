//! Connected sum of reducible strata and orientation reversal.

use crate::error::{Error, Result};
use crate::invariants::{lambda_su3, summarize, tau};
use crate::moduli::{validate, IrreducibleOrbit, ModuliData, ReducibleComponent, ReducibleOrbit};
use crate::rational::Rational;

/// Lift data assigned to the trivial component so that the component sums
/// below keep α± additive with α±(θ) = 0.
const TRIVIAL_SF_HPERP: i64 = -2;

fn ensure_valid(m: &ModuliData) -> Result<()> {
    let r = validate(m);
    if r.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidData(r))
    }
}

fn trivial_component() -> ReducibleComponent {
    ReducibleComponent::from_lifts(0, Rational::ZERO, TRIVIAL_SF_HPERP, TRIVIAL_SF_HPERP, 0)
}

fn sum_components(id: i64, a: &ReducibleComponent, b: &ReducibleComponent) -> ReducibleComponent {
    ReducibleComponent {
        id,
        cs_mod1: (a.cs_mod1 + b.cs_mod1).fract_mod1(),
        alpha_plus: a.alpha_plus + b.alpha_plus,
        alpha_minus: a.alpha_minus + b.alpha_minus,
        h1_minus: a.h1_minus + b.h1_minus,
        sf_hperp_theta_plus: a.sf_hperp_theta_plus + b.sf_hperp_theta_plus - TRIVIAL_SF_HPERP,
        sf_hperp_theta_minus: a.sf_hperp_theta_minus + b.sf_hperp_theta_minus - TRIVIAL_SF_HPERP,
        cs_plus: a.cs_plus + b.cs_plus,
        cs_minus: a.cs_minus + b.cs_minus,
    }
}

/// Reducible stratum of X₁ # X₂.
///
/// Components are C_{i,j} for every pair of components (the trivial one
/// included) other than (θ,θ), numbered 1.. in lexicographic order of
/// (index in m1, index in m2) with the trivial component first. Point
/// components θ₁ # A₂ and A₁ # θ₂ carry the orbits of the summands
/// unchanged; the SO(3) components C_{i,j} with i, j ≠ θ carry none.
/// Irreducible orbits of the sum are not produced.
pub fn connected_sum_reducible(m1: &ModuliData, m2: &ModuliData) -> Result<ModuliData> {
    ensure_valid(m1)?;
    ensure_valid(m2)?;

    let theta = trivial_component();
    let left: Vec<&ReducibleComponent> = std::iter::once(&theta).chain(m1.components.iter()).collect();
    let right: Vec<&ReducibleComponent> = std::iter::once(&theta).chain(m2.components.iter()).collect();

    let mut components = Vec::new();
    // (side, original id) -> new id for the point components
    let mut from_left = std::collections::BTreeMap::new();
    let mut from_right = std::collections::BTreeMap::new();
    let mut next_id = 1;
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            if i == 0 && j == 0 {
                continue;
            }
            components.push(sum_components(next_id, a, b));
            if j == 0 {
                from_left.insert(a.id, next_id);
            }
            if i == 0 {
                from_right.insert(b.id, next_id);
            }
            next_id += 1;
        }
    }

    let relabel = |o: &ReducibleOrbit, map: &std::collections::BTreeMap<i64, i64>| ReducibleOrbit {
        component: map[&o.component],
        ..o.clone()
    };
    let reducible_orbits = m1
        .reducible_orbits
        .iter()
        .map(|o| relabel(o, &from_left))
        .chain(m2.reducible_orbits.iter().map(|o| relabel(o, &from_right)))
        .collect();

    Ok(ModuliData {
        name: format!("{}#{}", m1.name, m2.name),
        perturbation_label: format!("{}+{}", m1.perturbation_label, m2.perturbation_label),
        components,
        reducible_orbits,
        irreducible_orbits: Vec::new(),
        regular: m1.regular && m2.regular,
    })
}

/// λ_SU(3) − τ of the composed reducible data equals the sum over the parts.
pub fn correction_additivity_check(m1: &ModuliData, m2: &ModuliData) -> Result<bool> {
    let diff = |m: &ModuliData| -> Result<Rational> { Ok(lambda_su3(m)? - Rational::from_integer(tau(m)?)) };
    let sum = connected_sum_reducible(m1, m2)?;
    Ok(diff(&sum)? == diff(m1)? + diff(m2)?)
}

/// τ(X₁ # X₂) = τ(X₁) + τ(X₂) + 4 λ_SU(2)(X₁) λ_SU(2)(X₂).
pub fn tau_connected_sum(tau1: i64, tau2: i64, l1: i64, l2: i64) -> i64 {
    tau1 + tau2 + 4 * l1 * l2
}

/// Orientation reversal of a regular snapshot.
///
/// Reversal reflects every spectrum through zero, so a spectral flow from θ
/// becomes −SF plus the kernel dimension at the end minus the one at θ:
/// 1 − 8 for reducible orbits, 0 − 8 for irreducible ones, and 0 − 4 on 𝔥⊥.
/// Chern–Simons values change sign and the extremal points Â± trade roles.
pub fn orientation_reverse(m: &ModuliData) -> Result<ModuliData> {
    ensure_valid(m)?;
    if !m.regular {
        return Err(Error::NonRegular);
    }
    let components: Vec<ReducibleComponent> = m
        .components
        .iter()
        .map(|c| ReducibleComponent {
            id: c.id,
            cs_mod1: (-c.cs_mod1).fract_mod1(),
            alpha_plus: -c.alpha_minus,
            alpha_minus: -c.alpha_plus,
            h1_minus: c.h1_minus,
            sf_hperp_theta_plus: -c.sf_hperp_theta_minus - 4 + c.h1_minus,
            sf_hperp_theta_minus: -c.sf_hperp_theta_plus - 4 + c.h1_minus,
            cs_plus: -c.cs_minus,
            cs_minus: -c.cs_plus,
        })
        .collect();
    let reducible_orbits = m
        .reducible_orbits
        .iter()
        .map(|o| {
            let h1 = m.component(o.component).map_or(0, |c| c.h1_minus);
            ReducibleOrbit {
                component: o.component,
                sf_theta: -o.sf_theta - 7,
                sf_from_plus: -o.sf_from_minus - h1,
                sf_from_minus: -o.sf_from_plus - h1,
                sf_hperp_theta: -o.sf_hperp_theta - 4,
                cs_hat: -o.cs_hat,
            }
        })
        .collect();
    let irreducible_orbits = m
        .irreducible_orbits
        .iter()
        .map(|o| IrreducibleOrbit { sf_theta: -o.sf_theta - 8 })
        .collect();
    Ok(ModuliData {
        name: format!("-{}", m.name),
        perturbation_label: format!("-({})", m.perturbation_label),
        components,
        reducible_orbits,
        irreducible_orbits,
        regular: true,
    })
}

/// τ and λ_SU(3) agree on a snapshot and its reversal.
pub fn reversal_check(m: &ModuliData) -> Result<bool> {
    let a = summarize(m)?;
    let b = summarize(&orientation_reverse(m)?)?;
    Ok(a.tau == b.tau && a.lambda_su3 == b.lambda_su3 && a.lambda_su2 == -b.lambda_su2)
}
