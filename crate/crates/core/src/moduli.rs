//! Snapshots of a perturbed flat moduli space, reduced to the integers and
//! rationals the invariants consume.
//!
//! A snapshot holds the reducible components of the flat stratum (with the
//! data of their extremal points Â±), the perturbed reducible orbits near
//! them, and the perturbed irreducible orbits. Spectral flows and
//! Chern–Simons values are stored as *lifts* to the Z-cover; a deck
//! transformation of degree `d` moves SF(θ,·) by `12d`, the 𝔥⊥ part of it by
//! `4d`, and the Chern–Simons lift by `d`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Full su(3) spectral flow shift of one deck step.
pub const DECK_SF_SHIFT: i64 = 12;
/// 𝔥⊥ share of the deck step spectral flow.
pub const DECK_HPERP_SHIFT: i64 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducibleComponent {
    pub id: i64,
    pub cs_mod1: Rational,
    pub alpha_plus: Rational,
    pub alpha_minus: Rational,
    /// h¹ of 𝔥⊥-valued forms at Â⁻.
    pub h1_minus: i64,
    /// SF_𝔥⊥(θ, Â⁺) for the component's lift.
    pub sf_hperp_theta_plus: i64,
    /// SF_𝔥⊥(θ, Â⁻) for the component's lift.
    pub sf_hperp_theta_minus: i64,
    pub cs_plus: Rational,
    pub cs_minus: Rational,
}

impl ReducibleComponent {
    /// Builds a component whose α± and mod-1 class follow from the lifts.
    /// Both extremal points share the Chern–Simons lift `cs`.
    pub fn from_lifts(id: i64, cs: Rational, sf_plus: i64, sf_minus: i64, h1_minus: i64) -> Self {
        ReducibleComponent {
            id,
            cs_mod1: cs.fract_mod1(),
            alpha_plus: expected_alpha_plus(sf_plus, cs),
            alpha_minus: expected_alpha_minus(sf_minus, cs, h1_minus),
            h1_minus,
            sf_hperp_theta_plus: sf_plus,
            sf_hperp_theta_minus: sf_minus,
            cs_plus: cs,
            cs_minus: cs,
        }
    }
}

fn expected_alpha_plus(sf_plus: i64, cs: Rational) -> Rational {
    Rational::from_integer(sf_plus + 2) - cs.scale(4)
}

fn expected_alpha_minus(sf_minus: i64, cs: Rational, h1: i64) -> Rational {
    Rational::from_integer(sf_minus + 2 - h1) - cs.scale(4)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducibleOrbit {
    pub component: i64,
    /// SF(θ, A) with su(3) coefficients.
    pub sf_theta: i64,
    /// SF_𝔥⊥(Â⁺, A), compatible representatives.
    pub sf_from_plus: i64,
    /// SF_𝔥⊥(Â⁻, A), compatible representatives.
    pub sf_from_minus: i64,
    /// SF_𝔥⊥(θ, A), same lift as the component.
    pub sf_hperp_theta: i64,
    pub cs_hat: Rational,
}

impl ReducibleOrbit {
    /// An orbit on `comp` with the given SF(θ,·) and SF_𝔥⊥(Â⁺,·); the
    /// remaining fields are forced by the component's lifts.
    pub fn on_component(comp: &ReducibleComponent, sf_theta: i64, sf_from_plus: i64) -> Self {
        let sf_hperp_theta = comp.sf_hperp_theta_plus + sf_from_plus;
        ReducibleOrbit {
            component: comp.id,
            sf_theta,
            sf_from_plus,
            sf_from_minus: sf_hperp_theta - comp.sf_hperp_theta_minus,
            sf_hperp_theta,
            cs_hat: comp.cs_plus,
        }
    }

    pub fn sign(&self) -> i64 {
        parity_sign(self.sf_theta)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibleOrbit {
    pub sf_theta: i64,
}

impl IrreducibleOrbit {
    pub fn sign(&self) -> i64 {
        parity_sign(self.sf_theta)
    }
}

/// `(-1)^n`.
pub fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn is_true(b: &bool) -> bool {
    *b
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliData {
    pub name: String,
    pub perturbation_label: String,
    pub components: Vec<ReducibleComponent>,
    pub reducible_orbits: Vec<ReducibleOrbit>,
    pub irreducible_orbits: Vec<IrreducibleOrbit>,
    /// All perturbed orbits have zero kernel. Omitted from files when true.
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub regular: bool,
}

impl ModuliData {
    pub fn empty(name: impl Into<String>) -> Self {
        ModuliData {
            name: name.into(),
            perturbation_label: "h0".into(),
            components: Vec::new(),
            reducible_orbits: Vec::new(),
            irreducible_orbits: Vec::new(),
            regular: true,
        }
    }

    pub fn component(&self, id: i64) -> Option<&ReducibleComponent> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Canonical text form: pretty-printed JSON with a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("moduli data always serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrbitKey {
    Reducible(usize),
    Irreducible(usize),
}

impl fmt::Display for OrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitKey::Reducible(i) => write!(f, "reducible_orbits[{i}]"),
            OrbitKey::Irreducible(i) => write!(f, "irreducible_orbits[{i}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordKey {
    Component(i64),
    Orbit(OrbitKey),
}

impl fmt::Display for RecordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordKey::Component(id) => write!(f, "component {id}"),
            RecordKey::Orbit(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    DuplicateComponentId,
    UnknownComponent,
    H1Negative,
    H1Mod4,
    CsMod1Range,
    CsLiftClass,
    AlphaPlusConsistency,
    AlphaMinusConsistency,
    AlphaOrder,
    Evenness,
    Mod4Sum,
    HperpPlusConsistency,
    HperpMinusConsistency,
    CsConstancy,
    UpperBound,
    LowerBound,
}

impl ViolationKind {
    pub fn label(self) -> &'static str {
        match self {
            ViolationKind::DuplicateComponentId => "duplicate component id",
            ViolationKind::UnknownComponent => "unknown component",
            ViolationKind::H1Negative => "h1 negative",
            ViolationKind::H1Mod4 => "h1 mod 4",
            ViolationKind::CsMod1Range => "cs_mod1 range",
            ViolationKind::CsLiftClass => "cs lift class",
            ViolationKind::AlphaPlusConsistency => "alpha_plus consistency",
            ViolationKind::AlphaMinusConsistency => "alpha_minus consistency",
            ViolationKind::AlphaOrder => "alpha order",
            ViolationKind::Evenness => "evenness",
            ViolationKind::Mod4Sum => "mod 4 sum",
            ViolationKind::HperpPlusConsistency => "hperp plus consistency",
            ViolationKind::HperpMinusConsistency => "hperp minus consistency",
            ViolationKind::CsConstancy => "cs constancy",
            ViolationKind::UpperBound => "upper extremal bound",
            ViolationKind::LowerBound => "lower extremal bound",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub record: RecordKey,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.record, self.kind, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Extremal-bound failures on perturbed data; informational.
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  violation: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning: {w}")?;
        }
        Ok(())
    }
}

/// How the extremal bounds SF_𝔥⊥(θ,A) ≤ SF_𝔥⊥(θ,Â⁺) and
/// SF_𝔥⊥(θ,Â⁻) − h¹ ≤ SF_𝔥⊥(θ,A) are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BoundsPolicy {
    /// Perturbed orbits: report as warnings.
    #[default]
    Warn,
    /// Flat data (e.g. solver output): report as violations.
    Enforce,
}

pub fn validate(m: &ModuliData) -> ValidationReport {
    validate_with(m, BoundsPolicy::Warn)
}

pub fn validate_with(m: &ModuliData, policy: BoundsPolicy) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut push = |kind, record, detail: String| {
        report.violations.push(Violation { kind, record, detail });
    };

    let mut seen = BTreeSet::new();
    let mut by_id: BTreeMap<i64, &ReducibleComponent> = BTreeMap::new();
    for c in &m.components {
        let key = RecordKey::Component(c.id);
        if !seen.insert(c.id) {
            push(ViolationKind::DuplicateComponentId, key, format!("id {} repeated", c.id));
        } else {
            by_id.insert(c.id, c);
        }
        if c.h1_minus < 0 {
            push(ViolationKind::H1Negative, key, format!("h1_minus = {}", c.h1_minus));
        } else if c.h1_minus % 4 != 0 {
            push(ViolationKind::H1Mod4, key, format!("h1_minus = {} not divisible by 4", c.h1_minus));
        }
        if c.cs_mod1 < Rational::ZERO || c.cs_mod1 >= Rational::ONE {
            push(ViolationKind::CsMod1Range, key, format!("cs_mod1 = {} outside [0,1)", c.cs_mod1));
        }
        if !c.cs_plus.congruent_mod1(&c.cs_mod1) || !c.cs_minus.congruent_mod1(&c.cs_mod1) {
            push(
                ViolationKind::CsLiftClass,
                key,
                format!("cs_plus = {}, cs_minus = {}, cs_mod1 = {}", c.cs_plus, c.cs_minus, c.cs_mod1),
            );
        }
        let ap = expected_alpha_plus(c.sf_hperp_theta_plus, c.cs_plus);
        if ap != c.alpha_plus {
            push(
                ViolationKind::AlphaPlusConsistency,
                key,
                format!("alpha_plus = {}, lifts give {}", c.alpha_plus, ap),
            );
        }
        let am = expected_alpha_minus(c.sf_hperp_theta_minus, c.cs_minus, c.h1_minus);
        if am != c.alpha_minus {
            push(
                ViolationKind::AlphaMinusConsistency,
                key,
                format!("alpha_minus = {}, lifts give {}", c.alpha_minus, am),
            );
        }
        if c.alpha_minus > c.alpha_plus {
            push(
                ViolationKind::AlphaOrder,
                key,
                format!("alpha_minus = {} > alpha_plus = {}", c.alpha_minus, c.alpha_plus),
            );
        }
    }

    let mut bound_issues = Vec::new();
    for (i, o) in m.reducible_orbits.iter().enumerate() {
        let key = RecordKey::Orbit(OrbitKey::Reducible(i));
        if o.sf_from_plus % 2 != 0 || o.sf_from_minus % 2 != 0 {
            push(
                ViolationKind::Evenness,
                key,
                format!("sf_from_plus = {}, sf_from_minus = {}", o.sf_from_plus, o.sf_from_minus),
            );
        }
        let Some(c) = by_id.get(&o.component) else {
            push(ViolationKind::UnknownComponent, key, format!("component {} not defined", o.component));
            continue;
        };
        let sum = o.sf_from_plus + o.sf_from_minus + c.h1_minus;
        if sum.rem_euclid(4) != 0 {
            push(ViolationKind::Mod4Sum, key, format!("sf_from_plus + sf_from_minus + h1_minus = {sum}"));
        }
        if o.sf_hperp_theta != c.sf_hperp_theta_plus + o.sf_from_plus {
            push(
                ViolationKind::HperpPlusConsistency,
                key,
                format!(
                    "sf_hperp_theta = {} but {} + {}",
                    o.sf_hperp_theta, c.sf_hperp_theta_plus, o.sf_from_plus
                ),
            );
        }
        if o.sf_hperp_theta != c.sf_hperp_theta_minus + o.sf_from_minus {
            push(
                ViolationKind::HperpMinusConsistency,
                key,
                format!(
                    "sf_hperp_theta = {} but {} + {}",
                    o.sf_hperp_theta, c.sf_hperp_theta_minus, o.sf_from_minus
                ),
            );
        }
        if o.cs_hat != c.cs_plus || o.cs_hat != c.cs_minus {
            push(
                ViolationKind::CsConstancy,
                key,
                format!("cs_hat = {}, component lifts {} / {}", o.cs_hat, c.cs_plus, c.cs_minus),
            );
        }
        // Perturbed orbits are regular, so their own h¹ is zero.
        if o.sf_from_plus > 0 {
            bound_issues.push(Violation {
                kind: ViolationKind::UpperBound,
                record: key,
                detail: format!("SF_hperp(theta,A) exceeds the Â⁺ value by {}", o.sf_from_plus),
            });
        }
        if o.sf_from_minus < -c.h1_minus {
            bound_issues.push(Violation {
                kind: ViolationKind::LowerBound,
                record: key,
                detail: format!("sf_from_minus = {} < -h1_minus = {}", o.sf_from_minus, -c.h1_minus),
            });
        }
    }

    match policy {
        BoundsPolicy::Warn => report.warnings.extend(bound_issues),
        BoundsPolicy::Enforce => report.violations.extend(bound_issues),
    }
    report
}

/// Moves the named orbit `d` deck steps along the Z-cover.
///
/// A reducible orbit shares its lift with its component, so the whole
/// component (and every orbit on it) is re-lifted together.
pub fn deck_shift(m: &ModuliData, key: OrbitKey, d: i64) -> Result<ModuliData> {
    let mut out = m.clone();
    match key {
        OrbitKey::Irreducible(i) => {
            let o = out.irreducible_orbits.get_mut(i).ok_or(Error::UnknownOrbit(key))?;
            o.sf_theta += DECK_SF_SHIFT * d;
        }
        OrbitKey::Reducible(i) => {
            let comp_id = m.reducible_orbits.get(i).ok_or(Error::UnknownOrbit(key))?.component;
            let shift = Rational::from_integer(d);
            if let Some(c) = out.components.iter_mut().find(|c| c.id == comp_id) {
                c.sf_hperp_theta_plus += DECK_HPERP_SHIFT * d;
                c.sf_hperp_theta_minus += DECK_HPERP_SHIFT * d;
                c.cs_plus += shift;
                c.cs_minus += shift;
            }
            for o in out.reducible_orbits.iter_mut().filter(|o| o.component == comp_id) {
                o.sf_theta += DECK_SF_SHIFT * d;
                o.sf_hperp_theta += DECK_HPERP_SHIFT * d;
                o.cs_hat += shift;
            }
        }
    }
    Ok(out)
}
