//! Aggregation of solver runs into a census of conjugacy classes, and the
//! passage from a census to moduli data.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::assignment::{su3_candidates, RotationAssignment};
use super::seifert::SeifertPresentation;
use super::solver::{
    canonical_form, character, clustering_vector, commutant_dim, max_dist, tangent_dim, unitarity_defect, Mat3,
    Problem, SolverConfig, C64, WORDS,
};
use super::su2::enumerate_su2;
use crate::error::{Error, Result};
use crate::moduli::{validate_with, BoundsPolicy, IrreducibleOrbit, ModuliData, ReducibleComponent, ReducibleOrbit};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepKind {
    Irreducible,
    ReducibleNonabelian,
    Abelian,
}

impl RepKind {
    pub fn from_commutant(dim: usize) -> Self {
        match dim {
            0 | 1 => RepKind::Irreducible,
            2 => RepKind::ReducibleNonabelian,
            _ => RepKind::Abelian,
        }
    }
}

/// A conjugacy class found by the solver.
#[derive(Clone, Debug)]
pub struct RepCluster {
    pub assignment: RotationAssignment,
    /// Representative in canonical position.
    pub generators: [Mat3; 3],
    pub residual: f64,
    pub unitarity_defect: f64,
    pub character: [C64; 8],
    pub commutant_dim: usize,
    pub multiplicity: usize,
    /// Max distance of a member's clustering vector from the cluster mean.
    pub spread: f64,
    pub tangent_dim: usize,
    pub kind: RepKind,
}

fn round6(x: f64) -> f64 {
    let v = (x * 1e6).round() / 1e6;
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

fn fmt_c(z: &C64) -> String {
    format!("{:.6}{:+.6}i", round6(z.re), round6(z.im))
}

impl RepCluster {
    /// Rounded character, used to key sign data.
    pub fn key(&self) -> String {
        self.character.iter().map(fmt_c).collect::<Vec<_>>().join(",")
    }

    pub fn isolated(&self, cluster_tol: f64) -> bool {
        self.tangent_dim == 0 && self.spread <= cluster_tol
    }
}

fn pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

impl Serialize for RepCluster {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let words: BTreeMap<&str, [f64; 2]> = WORDS.iter().zip(&self.character).map(|(w, z)| (*w, pair(z))).collect();
        let gens: Vec<Vec<Vec<[f64; 2]>>> = self
            .generators
            .iter()
            .map(|m| (0..3).map(|r| (0..3).map(|c| pair(&m[(r, c)])).collect()).collect())
            .collect();
        let mut st = s.serialize_struct("RepCluster", 11)?;
        st.serialize_field("key", &self.key())?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("assignment", &self.assignment)?;
        st.serialize_field("character", &words)?;
        st.serialize_field("residual", &self.residual)?;
        st.serialize_field("unitarity_defect", &self.unitarity_defect)?;
        st.serialize_field("commutant_dim", &self.commutant_dim)?;
        st.serialize_field("tangent_dim", &self.tangent_dim)?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("spread", &self.spread)?;
        st.serialize_field("generators", &gens)?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AssignmentReport {
    pub assignment: RotationAssignment,
    pub accepted: usize,
    pub best_residual: f64,
    pub clusters: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub manifold: String,
    pub presentation: SeifertPresentation,
    pub config: SolverConfig,
    pub su2_classes: usize,
    pub irreducible_count: usize,
    pub reducible_count: usize,
    pub abelian_discarded: usize,
    pub irreducible: Vec<RepCluster>,
    pub reducible: Vec<RepCluster>,
    pub assignments: Vec<AssignmentReport>,
}

impl Census {
    pub fn empty(p: SeifertPresentation, config: SolverConfig) -> Self {
        Census {
            manifold: p.label(),
            presentation: p,
            config,
            su2_classes: 0,
            irreducible_count: 0,
            reducible_count: 0,
            abelian_discarded: 0,
            irreducible: Vec::new(),
            reducible: Vec::new(),
            assignments: Vec::new(),
        }
    }

    pub fn clusters(&self) -> impl Iterator<Item = &RepCluster> {
        self.irreducible.iter().chain(&self.reducible)
    }

    pub fn non_isolated(&self) -> Vec<&RepCluster> {
        self.clusters().filter(|c| !c.isolated(self.config.cluster_tol)).collect()
    }

    /// Errors if some cluster lies on a positive-dimensional family.
    pub fn check_isolated(&self) -> Result<()> {
        let bad = self.non_isolated();
        if bad.is_empty() {
            return Ok(());
        }
        let keys: Vec<String> = bad.iter().map(|c| format!("{} ({})", c.key(), c.assignment)).collect();
        Err(Error::Solver(format!("non-isolated clusters on {}: {}", self.manifold, keys.join("; "))))
    }

    /// (irreducible, reducible nonabelian) counts.
    pub fn counts(&self) -> (usize, usize) {
        (self.irreducible_count, self.reducible_count)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("census serializes");
        s.push('\n');
        s
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one restart task.
pub fn task_seed(master: u64, assignment: usize, restart: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ assignment as u64) ^ restart as u64)
}

struct Accepted {
    restart: usize,
    frames: [Mat3; 3],
    residual: f64,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[i] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn cluster_accepted(
    p: &SeifertPresentation,
    ra: &RotationAssignment,
    mut acc: Vec<Accepted>,
    cfg: &SolverConfig,
) -> Vec<RepCluster> {
    acc.sort_by_key(|a| a.restart);
    let problem = Problem::new(p, ra);
    let xs: Vec<[Mat3; 3]> = acc.iter().map(|a| problem.generators(&a.frames)).collect();
    let vecs: Vec<[C64; 9]> = xs.iter().map(clustering_vector).collect();
    let mut uf = UnionFind((0..acc.len()).collect());
    for i in 0..acc.len() {
        for j in i + 1..acc.len() {
            if max_dist(&vecs[i], &vecs[j]) < cfg.cluster_tol {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..acc.len() {
        let root = uf.find(i);
        groups.entry(root).or_default().push(i);
    }
    groups
        .into_values()
        .map(|members| {
            let rep = members[0];
            let n = members.len() as f64;
            let mut mean = [C64::new(0.0, 0.0); 9];
            for &m in &members {
                for k in 0..9 {
                    mean[k] += vecs[m][k] / n;
                }
            }
            let spread = members.iter().map(|&m| max_dist(&vecs[m], &mean)).fold(0.0, f64::max);
            let x = canonical_form(&acc[rep].frames, &xs[rep]);
            let cd = commutant_dim(&x);
            RepCluster {
                assignment: ra.clone(),
                generators: x,
                residual: acc[rep].residual,
                unitarity_defect: x.iter().map(unitarity_defect).fold(0.0, f64::max),
                character: character(&x),
                commutant_dim: cd,
                multiplicity: members.len(),
                spread,
                tangent_dim: tangent_dim(&problem, &xs[rep]),
                kind: RepKind::from_commutant(cd),
            }
        })
        .collect()
}

/// Random-restart search on one assignment; `index` keys the seeds.
pub fn solve_triple(
    p: &SeifertPresentation,
    ra: &RotationAssignment,
    index: usize,
    cfg: &SolverConfig,
) -> (Vec<RepCluster>, AssignmentReport) {
    let problem = Problem::new(p, ra);
    let outcomes: Vec<(usize, _)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| (r, problem.run(task_seed(cfg.seed, index, r), cfg)))
        .collect();
    finish_assignment(p, ra, outcomes, cfg)
}

fn finish_assignment(
    p: &SeifertPresentation,
    ra: &RotationAssignment,
    outcomes: Vec<(usize, super::solver::RestartOutcome)>,
    cfg: &SolverConfig,
) -> (Vec<RepCluster>, AssignmentReport) {
    let best_residual = outcomes.iter().map(|(_, o)| o.residual).fold(f64::INFINITY, f64::min);
    let acc: Vec<Accepted> = outcomes
        .into_iter()
        .filter(|(_, o)| o.residual < cfg.residual_tol)
        .map(|(restart, o)| Accepted { restart, frames: o.frames, residual: o.residual })
        .collect();
    let accepted = acc.len();
    let clusters = cluster_accepted(p, ra, acc, cfg);
    let report = AssignmentReport { assignment: ra.clone(), accepted, best_residual, clusters: clusters.len() };
    (clusters, report)
}

/// Solves every candidate assignment and classifies the clusters.
pub fn enumerate_su3(p: &SeifertPresentation, cfg: &SolverConfig) -> Census {
    let cands = su3_candidates(p);
    let tasks: Vec<(usize, usize)> =
        (0..cands.len()).flat_map(|a| (0..cfg.restarts).map(move |r| (a, r))).collect();
    let outcomes: Vec<(usize, usize, super::solver::RestartOutcome)> = tasks
        .into_par_iter()
        .map(|(a, r)| {
            let problem = Problem::new(p, &cands[a]);
            (a, r, problem.run(task_seed(cfg.seed, a, r), cfg))
        })
        .collect();
    let mut per: Vec<Vec<(usize, super::solver::RestartOutcome)>> = (0..cands.len()).map(|_| Vec::new()).collect();
    for (a, r, o) in outcomes {
        per[a].push((r, o));
    }
    let mut census = Census::empty(*p, cfg.clone());
    census.su2_classes = enumerate_su2(p).len();
    for (a, outs) in per.into_iter().enumerate() {
        let (clusters, report) = finish_assignment(p, &cands[a], outs, cfg);
        census.assignments.push(report);
        for c in clusters {
            match c.kind {
                RepKind::Irreducible => census.irreducible.push(c),
                RepKind::ReducibleNonabelian => census.reducible.push(c),
                RepKind::Abelian => census.abelian_discarded += 1,
            }
        }
    }
    census.irreducible.sort_by_key(|c| c.key());
    census.reducible.sort_by_key(|c| c.key());
    census.irreducible_count = census.irreducible.len();
    census.reducible_count = census.reducible.len();
    census
}

/// 𝔥⊥ data attached to a reducible cluster.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HperpData {
    pub cs: Rational,
    pub sf_plus: i64,
    pub sf_minus: i64,
    pub h1_minus: i64,
    pub sf_from_plus: i64,
}

/// Supplies the spectral-flow data the enumeration cannot compute.
pub trait SignOracle {
    fn sf_theta(&self, cluster: &RepCluster) -> i64;

    fn hperp(&self, _cluster: &RepCluster) -> HperpData {
        HperpData::default()
    }
}

/// Every SF(θ,·) zero and every 𝔥⊥ datum zero.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformPositive;

impl SignOracle for UniformPositive {
    fn sf_theta(&self, _cluster: &RepCluster) -> i64 {
        0
    }
}

/// SF(θ,·) looked up by [`RepCluster::key`]; missing keys give 0.
#[derive(Clone, Debug, Default)]
pub struct KeyedOracle {
    pub sf_theta: BTreeMap<String, i64>,
}

impl KeyedOracle {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(KeyedOracle { sf_theta: serde_json::from_str(s)? })
    }

    /// Keys that name no cluster of `census`.
    pub fn unmatched(&self, census: &Census) -> Vec<String> {
        let known: Vec<String> = census.clusters().map(|c| c.key()).collect();
        self.sf_theta.keys().filter(|k| !known.contains(k)).cloned().collect()
    }
}

impl SignOracle for KeyedOracle {
    fn sf_theta(&self, cluster: &RepCluster) -> i64 {
        self.sf_theta.get(&cluster.key()).copied().unwrap_or(0)
    }
}

/// One irreducible orbit per irreducible cluster, one component with a
/// single orbit per reducible cluster.
pub fn moduli_from_enumeration(census: &Census, oracle: &dyn SignOracle) -> Result<ModuliData> {
    let mut m = ModuliData::empty(census.manifold.clone());
    m.perturbation_label = "unperturbed; signs from oracle".to_string();
    for (i, c) in census.reducible.iter().enumerate() {
        let h = oracle.hperp(c);
        let comp = ReducibleComponent::from_lifts(i as i64 + 1, h.cs, h.sf_plus, h.sf_minus, h.h1_minus);
        m.reducible_orbits.push(ReducibleOrbit::on_component(&comp, oracle.sf_theta(c), h.sf_from_plus));
        m.components.push(comp);
    }
    for c in &census.irreducible {
        m.irreducible_orbits.push(IrreducibleOrbit { sf_theta: oracle.sf_theta(c) });
    }
    let report = validate_with(&m, BoundsPolicy::Enforce);
    if !report.is_valid() {
        return Err(Error::Oracle(report.to_string()));
    }
    Ok(m)
}
