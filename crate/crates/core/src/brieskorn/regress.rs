use serde::Serialize;

use super::census::{enumerate_su3, moduli_from_enumeration, Census, UniformPositive};
use super::seifert::seifert_presentation;
use super::solver::SolverConfig;
use super::table::{family_members, tau_table};
use crate::error::Result;
use crate::invariants::summarize;

#[derive(Clone, Debug, Serialize)]
pub struct RegressionRow {
    pub manifold: String,
    pub k: i64,
    pub expected: i64,
    pub computed: i64,
    pub irreducible: usize,
    pub reducible: usize,
    pub su2_classes: usize,
    pub pass: bool,
}

/// Enumerates one Σ(2,p,q) and evaluates τ under uniform positive signs.
pub fn enumerate_tau(p: i64, q: i64, cfg: &SolverConfig) -> Result<(i64, Census)> {
    let pres = seifert_presentation(2, p, q)?;
    let census = enumerate_su3(&pres, cfg);
    census.check_isolated()?;
    let m = moduli_from_enumeration(&census, &UniformPositive)?;
    Ok((summarize(&m)?.tau, census))
}

/// Compares enumerated τ with the table over a family; returns the rows and
/// the censuses behind them.
pub fn regress(p: i64, k_max: i64, cfg: &SolverConfig) -> Result<Vec<(RegressionRow, Census)>> {
    let mut out = Vec::new();
    for member in family_members(p, k_max)? {
        let expected = tau_table(p, member.q)?;
        let (computed, census) = enumerate_tau(p, member.q, cfg)?;
        let row = RegressionRow {
            manifold: census.manifold.clone(),
            k: member.k,
            expected,
            computed,
            irreducible: census.irreducible_count,
            reducible: census.reducible_count,
            su2_classes: census.su2_classes,
            pass: computed == expected,
        };
        out.push((row, census));
    }
    Ok(out)
}
