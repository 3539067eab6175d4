//! Discrete models of a generic change of perturbation.
//!
//! Along a generic path of small perturbations the moduli space changes by
//! births and deaths of orbit pairs of opposite sign, and by an irreducible
//! orbit splitting off (or merging into) a reducible orbit while a 𝔥⊥
//! eigenvalue pair crosses zero. Each move below maps valid data to valid
//! data and keeps τ, λ_SU(3), λ_SU(2) and Σ(−1)^SF(α⁺+α⁻) fixed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moduli::{
    parity_sign, validate, IrreducibleOrbit, ModuliData, OrbitKey, ReducibleComponent, ReducibleOrbit,
};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Move {
    /// Birth (or death) of irreducible orbits with SF(θ,·) = sf and sf + 1.
    IrreduciblePair { sf: i64, birth: bool },
    /// Birth (or death) of two reducible orbits on one component, equal 𝔥⊥
    /// data, SF(θ,·) differing by one.
    ReduciblePair { template: ReducibleOrbit, birth: bool },
    /// A 𝔥⊥ eigenvalue pair crossing at a reducible orbit; `direction = -1`
    /// releases an irreducible orbit, `+1` absorbs one.
    Bifurcation { orbit: usize, direction: i64 },
}

fn ensure_valid(m: &ModuliData) -> Result<()> {
    let r = validate(m);
    if r.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidData(r))
    }
}

pub fn apply_irreducible_pair(m: &ModuliData, sf: i64) -> Result<ModuliData> {
    ensure_valid(m)?;
    let mut out = m.clone();
    out.irreducible_orbits.push(IrreducibleOrbit { sf_theta: sf });
    out.irreducible_orbits.push(IrreducibleOrbit { sf_theta: sf + 1 });
    Ok(out)
}

/// Removes the last orbits with SF = sf and SF = sf + 1.
pub fn remove_irreducible_pair(m: &ModuliData, sf: i64) -> Result<ModuliData> {
    ensure_valid(m)?;
    let mut out = m.clone();
    for target in [sf + 1, sf] {
        let pos = out
            .irreducible_orbits
            .iter()
            .rposition(|o| o.sf_theta == target)
            .ok_or_else(|| Error::Template(format!("no irreducible orbit with sf_theta = {target}")))?;
        out.irreducible_orbits.remove(pos);
    }
    Ok(out)
}

fn check_template(comp: &ReducibleComponent, t: &ReducibleOrbit) -> Result<()> {
    let fail = |what: &str| Err(Error::Template(format!("{what} (component {})", comp.id)));
    if t.component != comp.id {
        return fail("template names a different component");
    }
    if t.sf_from_plus % 2 != 0 || t.sf_from_minus % 2 != 0 {
        return fail("odd relative spectral flow");
    }
    if (t.sf_from_plus + t.sf_from_minus + comp.h1_minus).rem_euclid(4) != 0 {
        return fail("relative flows plus h1 not divisible by 4");
    }
    if t.sf_hperp_theta != comp.sf_hperp_theta_plus + t.sf_from_plus
        || t.sf_hperp_theta != comp.sf_hperp_theta_minus + t.sf_from_minus
    {
        return fail("sf_hperp_theta inconsistent with the component lifts");
    }
    if t.cs_hat != comp.cs_plus || t.cs_hat != comp.cs_minus {
        return fail("cs_hat differs from the component lift");
    }
    Ok(())
}

pub fn apply_reducible_pair(m: &ModuliData, component: i64, template: &ReducibleOrbit) -> Result<ModuliData> {
    ensure_valid(m)?;
    let comp = m.component(component).ok_or(Error::UnknownComponent(component))?;
    check_template(comp, template)?;
    let mut out = m.clone();
    out.reducible_orbits.push(template.clone());
    out.reducible_orbits.push(ReducibleOrbit { sf_theta: template.sf_theta + 1, ..template.clone() });
    Ok(out)
}

/// Removes the last two orbits equal to `template` up to SF(θ,·) = s, s + 1.
pub fn remove_reducible_pair(m: &ModuliData, template: &ReducibleOrbit) -> Result<ModuliData> {
    ensure_valid(m)?;
    let mut out = m.clone();
    for shift in [1, 0] {
        let want = ReducibleOrbit { sf_theta: template.sf_theta + shift, ..template.clone() };
        let pos = out
            .reducible_orbits
            .iter()
            .rposition(|o| *o == want)
            .ok_or_else(|| Error::Template(format!("no reducible orbit matching {want:?}")))?;
        out.reducible_orbits.remove(pos);
    }
    Ok(out)
}

pub fn apply_bifurcation(m: &ModuliData, orbit: usize, direction: i64) -> Result<ModuliData> {
    ensure_valid(m)?;
    if direction != 1 && direction != -1 {
        return Err(Error::Template(format!("direction must be ±1, got {direction}")));
    }
    let key = OrbitKey::Reducible(orbit);
    let red = m.reducible_orbits.get(orbit).ok_or(Error::UnknownOrbit(key))?.clone();
    let sign = red.sign();
    let mut out = m.clone();
    {
        let o = &mut out.reducible_orbits[orbit];
        o.sf_from_plus += 2 * direction;
        o.sf_from_minus += 2 * direction;
        o.sf_hperp_theta += 2 * direction;
    }
    if direction < 0 {
        out.irreducible_orbits.push(IrreducibleOrbit { sf_theta: red.sf_theta });
    } else {
        let irr = &out.irreducible_orbits;
        let pos = irr
            .iter()
            .rposition(|o| o.sf_theta == red.sf_theta)
            .or_else(|| irr.iter().rposition(|o| parity_sign(o.sf_theta) == sign))
            .ok_or(Error::NoMatchingIrreducible { sign })?;
        out.irreducible_orbits.remove(pos);
    }
    Ok(out)
}

pub fn apply_move(m: &ModuliData, mv: &Move) -> Result<ModuliData> {
    match mv {
        Move::IrreduciblePair { sf, birth: true } => apply_irreducible_pair(m, *sf),
        Move::IrreduciblePair { sf, birth: false } => remove_irreducible_pair(m, *sf),
        Move::ReduciblePair { template, birth: true } => apply_reducible_pair(m, template.component, template),
        Move::ReduciblePair { template, birth: false } => remove_reducible_pair(m, template),
        Move::Bifurcation { orbit, direction } => apply_bifurcation(m, *orbit, *direction),
    }
}

fn draw_move<R: Rng>(m: &ModuliData, rng: &mut R) -> Option<Move> {
    match rng.gen_range(0..5) {
        0 => Some(Move::IrreduciblePair { sf: rng.gen_range(-20..=20), birth: true }),
        1 => {
            // any adjacent-SF pair present
            let sfs: Vec<i64> = m.irreducible_orbits.iter().map(|o| o.sf_theta).collect();
            let lows: Vec<i64> = sfs.iter().copied().filter(|s| sfs.contains(&(s + 1))).collect();
            lows.choose(rng).map(|&sf| Move::IrreduciblePair { sf, birth: false })
        }
        2 => {
            let eligible: Vec<&ReducibleComponent> =
                m.components.iter().filter(|c| c.cs_plus == c.cs_minus).collect();
            let comp = eligible.choose(rng)?;
            let f_plus = 2 * rng.gen_range(-4..=1);
            let template = ReducibleOrbit::on_component(comp, rng.gen_range(-20..=20), f_plus);
            Some(Move::ReduciblePair { template, birth: true })
        }
        3 => {
            let orbits = &m.reducible_orbits;
            let lows: Vec<&ReducibleOrbit> = orbits
                .iter()
                .filter(|o| orbits.contains(&ReducibleOrbit { sf_theta: o.sf_theta + 1, ..(*o).clone() }))
                .collect();
            lows.choose(rng).map(|o| Move::ReduciblePair { template: (*o).clone(), birth: false })
        }
        _ => {
            if m.reducible_orbits.is_empty() {
                return None;
            }
            let orbit = rng.gen_range(0..m.reducible_orbits.len());
            let direction = if rng.gen_bool(0.5) { 1 } else { -1 };
            Some(Move::Bifurcation { orbit, direction })
        }
    }
}

/// Applies `steps` moves drawn from `seed`. Draws that cannot apply to the
/// current snapshot are replaced by fresh draws.
pub fn random_walk(m: &ModuliData, seed: u64, steps: usize) -> Result<ModuliData> {
    ensure_valid(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = m.clone();
    for _ in 0..steps {
        loop {
            let Some(mv) = draw_move(&cur, &mut rng) else { continue };
            if let Ok(next) = apply_move(&cur, &mv) {
                cur = next;
                break;
            }
        }
    }
    Ok(cur)
}

/// A random valid snapshot: up to four components with random lifts, a
/// handful of reducible orbits on each and some irreducible orbits.
pub fn random_moduli<R: Rng>(rng: &mut R, name: &str) -> ModuliData {
    let n_comp = rng.gen_range(0..=4);
    let mut components = Vec::new();
    let mut reducible_orbits = Vec::new();
    for k in 0..n_comp {
        let q = rng.gen_range(1..=12);
        let cs_mod1 = Rational::new(rng.gen_range(0..q), q);
        let cs = cs_mod1 + rng.gen_range(-2..=2);
        let h1 = 4 * rng.gen_range(0..=3);
        let sf_plus = rng.gen_range(-12..=12);
        // S⁻ − S⁺ is a multiple of 4 no larger than h¹ (keeps α⁻ ≤ α⁺)
        let sf_minus = sf_plus + 4 * rng.gen_range(-3..=h1 / 4);
        let id = 1 + 3 * k as i64 + rng.gen_range(0..3);
        let comp = ReducibleComponent::from_lifts(id, cs, sf_plus, sf_minus, h1);
        for _ in 0..rng.gen_range(0..=4) {
            let f_plus = 2 * rng.gen_range(-4..=1);
            reducible_orbits.push(ReducibleOrbit::on_component(&comp, rng.gen_range(-30..=30), f_plus));
        }
        components.push(comp);
    }
    let irreducible_orbits =
        (0..rng.gen_range(0..=8)).map(|_| IrreducibleOrbit { sf_theta: rng.gen_range(-30..=30) }).collect();
    ModuliData {
        name: name.to_string(),
        perturbation_label: format!("h-{}", rng.gen::<u32>()),
        components,
        reducible_orbits,
        irreducible_orbits,
        regular: true,
    }
}
