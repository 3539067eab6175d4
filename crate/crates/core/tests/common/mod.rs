#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tau_core::moves::random_moduli;
use tau_core::{IrreducibleOrbit, ModuliData, Rational, ReducibleComponent, ReducibleOrbit, ViolationKind};

/// τ(Σ(2,p,q)) for the nine tabulated families at k = 1..5.
pub const TABLE_VALUES: [(i64, i64, i64); 90] = [
    (3, 5, 2), (3, 7, 4), (3, 11, 10), (3, 13, 14), (3, 17, 24), (3, 19, 30),
    (3, 23, 44), (3, 25, 52), (3, 29, 70), (3, 31, 80), (5, 9, 24), (5, 11, 42),
    (5, 19, 114), (5, 21, 150), (5, 29, 270), (5, 31, 324), (5, 39, 492), (5, 41, 564),
    (5, 49, 780), (5, 51, 870), (5, 7, 16), (5, 13, 54), (5, 17, 96), (5, 23, 172),
    (5, 27, 242), (5, 33, 356), (5, 37, 454), (5, 43, 606), (5, 47, 732), (5, 53, 922),
    (7, 13, 112), (7, 15, 164), (7, 27, 500), (7, 29, 604), (7, 41, 1164), (7, 43, 1320),
    (7, 55, 2104), (7, 57, 2312), (7, 69, 3320), (7, 71, 3580), (7, 11, 80), (7, 17, 204),
    (7, 25, 432), (7, 31, 680), (7, 39, 1060), (7, 45, 1432), (7, 53, 1964), (7, 59, 2460),
    (7, 67, 3144), (7, 73, 3764), (7, 9, 52), (7, 19, 256), (7, 23, 364), (7, 33, 772),
    (7, 37, 952), (7, 47, 1564), (7, 51, 1816), (7, 61, 2632), (7, 65, 2956), (7, 75, 3976),
    (9, 17, 332), (9, 19, 448), (9, 35, 1444), (9, 37, 1676), (9, 53, 3336), (9, 55, 3684),
    (9, 71, 6008), (9, 73, 6472), (9, 89, 9460), (9, 91, 10040), (9, 13, 204), (9, 23, 624),
    (9, 31, 1164), (9, 41, 2004), (9, 49, 2904), (9, 59, 4164), (9, 67, 5424), (9, 77, 7104),
    (9, 85, 8724), (9, 95, 10824), (9, 11, 144), (9, 25, 740), (9, 29, 1016), (9, 43, 2208),
    (9, 47, 2668), (9, 61, 4456), (9, 65, 5100), (9, 79, 7484), (9, 83, 8312), (9, 97, 11292),
];

pub fn snapshots(seed: u64, n: usize) -> Vec<ModuliData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|i| random_moduli(&mut rng, &format!("snap-{i}"))).collect()
}

/// Same shape as a random snapshot but with every 𝔥⊥ datum zero.
pub fn zero_hperp(m: &ModuliData) -> ModuliData {
    let components: Vec<ReducibleComponent> = m
        .components
        .iter()
        .map(|c| ReducibleComponent::from_lifts(c.id, c.cs_plus, 0, 0, 0))
        .collect();
    let reducible_orbits = m
        .reducible_orbits
        .iter()
        .map(|o| {
            let c = components.iter().find(|c| c.id == o.component).unwrap();
            ReducibleOrbit::on_component(c, o.sf_theta, 0)
        })
        .collect();
    ModuliData { components, reducible_orbits, ..m.clone() }
}

fn base() -> ModuliData {
    let c1 = ReducibleComponent::from_lifts(1, Rational::new(1, 3), 2, -2, 4);
    let c2 = ReducibleComponent::from_lifts(2, Rational::new(-5, 4), -6, -6, 0);
    ModuliData {
        reducible_orbits: vec![
            ReducibleOrbit::on_component(&c1, 0, -2),
            ReducibleOrbit::on_component(&c1, 3, 0),
            ReducibleOrbit::on_component(&c2, -1, -4),
        ],
        components: vec![c1, c2],
        irreducible_orbits: vec![IrreducibleOrbit { sf_theta: 4 }, IrreducibleOrbit { sf_theta: -3 }],
        ..ModuliData::empty("base")
    }
}

/// Hand-built snapshots each breaking one constraint, with the kind of
/// violation the validator must report.
pub fn crafted_violations() -> Vec<(&'static str, ModuliData, ViolationKind)> {
    type Edit = fn(&mut ModuliData);
    let edits: Vec<(&'static str, Edit, ViolationKind)> = vec![
        ("odd sf_from_plus", |m| {
            m.reducible_orbits[0].sf_from_plus += 1;
            m.reducible_orbits[0].sf_hperp_theta += 1;
        }, ViolationKind::Evenness),
        ("odd sf_from_minus", |m| m.reducible_orbits[1].sf_from_minus += 1, ViolationKind::Evenness),
        ("odd pair on second component", |m| {
            m.reducible_orbits[2].sf_from_plus -= 1;
            m.reducible_orbits[2].sf_from_minus -= 1;
        }, ViolationKind::Evenness),
        ("h1 of 2", |m| m.components[0].h1_minus = 2, ViolationKind::H1Mod4),
        ("h1 of 6", |m| m.components[1].h1_minus = 6, ViolationKind::H1Mod4),
        ("h1 of 1", |m| m.components[1].h1_minus = 1, ViolationKind::H1Mod4),
        ("negative h1", |m| m.components[0].h1_minus = -4, ViolationKind::H1Negative),
        ("mod 4 sum off by 2", |m| {
            m.reducible_orbits[0].sf_from_minus += 2;
        }, ViolationKind::Mod4Sum),
        ("mod 4 sum with both shifted", |m| {
            m.reducible_orbits[2].sf_from_plus += 2;
            m.reducible_orbits[2].sf_hperp_theta += 2;
        }, ViolationKind::Mod4Sum),
        ("alpha_plus drift", |m| m.components[0].alpha_plus += Rational::new(1, 3), ViolationKind::AlphaPlusConsistency),
        ("alpha_minus drift", |m| m.components[1].alpha_minus -= Rational::ONE, ViolationKind::AlphaMinusConsistency),
        ("alpha order", |m| {
            let c = &mut m.components[1];
            c.sf_hperp_theta_minus += 8;
            c.alpha_minus += Rational::from_integer(8);
        }, ViolationKind::AlphaOrder),
        ("cs_mod1 of 1", |m| m.components[0].cs_mod1 = Rational::ONE, ViolationKind::CsMod1Range),
        ("negative cs_mod1", |m| m.components[0].cs_mod1 = Rational::new(-1, 3), ViolationKind::CsMod1Range),
        ("cs lift class", |m| {
            let c = &mut m.components[1];
            c.cs_plus += Rational::new(1, 2);
        }, ViolationKind::CsLiftClass),
        ("cs_hat mismatch", |m| m.reducible_orbits[1].cs_hat += Rational::ONE, ViolationKind::CsConstancy),
        ("hperp plus mismatch", |m| m.reducible_orbits[0].sf_hperp_theta += 4, ViolationKind::HperpPlusConsistency),
        ("hperp minus mismatch", |m| {
            m.reducible_orbits[2].sf_from_minus += 4;
        }, ViolationKind::HperpMinusConsistency),
        ("unknown component", |m| m.reducible_orbits[1].component = 9, ViolationKind::UnknownComponent),
        ("duplicate id", |m| m.components[1].id = 1, ViolationKind::DuplicateComponentId),
        ("h1 of 3 with orbit", |m| m.components[0].h1_minus = 3, ViolationKind::H1Mod4),
        ("odd sf_from on both", |m| {
            m.reducible_orbits[1].sf_from_plus += 1;
            m.reducible_orbits[1].sf_from_minus += 1;
            m.reducible_orbits[1].sf_hperp_theta += 1;
        }, ViolationKind::Evenness),
    ];
    edits
        .into_iter()
        .map(|(name, edit, kind)| {
            let mut m = base();
            edit(&mut m);
            (name, m, kind)
        })
        .collect()
}

pub fn base_snapshot() -> ModuliData {
    base()
}

// ---------------------------------------------------------------------
// Binary icosahedral group and its character degrees.

type Quat = [f64; 4];

fn qmul(a: &Quat, b: &Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn qinv(a: &Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

fn qeq(a: &Quat, b: &Quat) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
}

/// Closure of ½(1+i+j+k) and ½(φ + φ⁻¹i + j) under multiplication.
pub fn binary_icosahedral() -> Vec<Quat> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let gens = [[0.5, 0.5, 0.5, 0.5], [phi / 2.0, 0.5 / phi, 0.5, 0.0]];
    let mut elems: Vec<Quat> = vec![[1.0, 0.0, 0.0, 0.0]];
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            for g in &gens {
                let p = qmul(e, g);
                if !elems.iter().any(|x| qeq(x, &p)) {
                    elems.push(p);
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    elems
}

fn index_of(elems: &[Quat], q: &Quat) -> usize {
    elems.iter().position(|x| qeq(x, q)).expect("closed under products")
}

pub struct CharacterTable {
    pub order: usize,
    pub class_sizes: Vec<usize>,
    /// Index of the class of −1.
    pub minus_one_class: usize,
    /// Per irreducible character: its values on the classes.
    pub characters: Vec<Vec<f64>>,
}

impl CharacterTable {
    pub fn degrees(&self) -> Vec<usize> {
        self.characters.iter().map(|c| c[0].round() as usize).collect()
    }
}

/// Character table of a finite group of unit quaternions, via the class
/// multiplication coefficients (Burnside–Dixon). All characters of the
/// binary icosahedral group are real, so real arithmetic suffices.
pub fn character_table(elems: &[Quat]) -> CharacterTable {
    let n = elems.len();
    let table: Vec<Vec<usize>> =
        (0..n).map(|a| (0..n).map(|b| index_of(elems, &qmul(&elems[a], &elems[b]))).collect()).collect();
    let inv: Vec<usize> = (0..n).map(|a| index_of(elems, &qinv(&elems[a]))).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if class_of[a] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for g in 0..n {
            let c = table[table[g][a]][inv[g]];
            if class_of[c] == usize::MAX {
                class_of[c] = id;
                members.push(c);
            }
        }
        classes.push(members);
    }
    let k = classes.len();
    // coefficient[j][l][m]: number of (x ∈ C_j, y ∈ C_l) with xy = fixed z ∈ C_m
    let mut coeff = vec![vec![vec![0f64; k]; k]; k];
    for (m, cm) in classes.iter().enumerate() {
        let z = cm[0];
        for x in 0..n {
            let y = table[inv[x]][z];
            coeff[class_of[x]][class_of[y]][m] += 1.0;
        }
    }
    // a generic combination of the class matrices has simple spectrum
    let weights: Vec<f64> = (0..k).map(|j| 1.0 + 0.37 * j as f64 + 0.011 * (j * j) as f64).collect();
    let mut a = DMatrix::<f64>::zeros(k, k);
    for j in 0..k {
        for l in 0..k {
            for m in 0..k {
                a[(l, m)] += weights[j] * coeff[j][l][m];
            }
        }
    }
    let id_class = class_of[index_of(elems, &[1.0, 0.0, 0.0, 0.0])];
    let minus = class_of[index_of(elems, &[-1.0, 0.0, 0.0, 0.0])];
    // identity class first
    let order: Vec<usize> = std::iter::once(id_class).chain((0..k).filter(|&c| c != id_class)).collect();
    let mut characters = Vec::new();
    for ev in a.clone().complex_eigenvalues().iter() {
        assert!(ev.im.abs() < 1e-6, "real characters expected");
        let mut shifted = a.clone();
        for d in 0..k {
            shifted[(d, d)] -= ev.re;
        }
        // ω with Σ_m coeff[j][l][m] ω_m = ω_j ω_l spans the kernel
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.unwrap();
        let row = (0..k)
            .min_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]))
            .unwrap();
        let scale = vt[(row, id_class)];
        let omega: Vec<f64> = (0..k).map(|c| vt[(row, c)] / scale).collect();
        let norm: f64 = (0..k).map(|c| omega[c] * omega[c] / classes[c].len() as f64).sum();
        let degree = (n as f64 / norm).sqrt();
        characters.push(order.iter().map(|&c| omega[c] * degree / classes[c].len() as f64).collect());
    }
    CharacterTable {
        order: n,
        class_sizes: order.iter().map(|&c| classes[c].len()).collect(),
        minus_one_class: order.iter().position(|&c| c == minus).unwrap(),
        characters,
    }
}
