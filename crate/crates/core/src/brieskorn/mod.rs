//! Flat SU(2) and SU(3) representations of Brieskorn spheres and the moduli
//! data they give.

pub mod assignment;
pub mod census;
pub mod regress;
pub mod seifert;
pub mod solver;
pub mod su2;
pub mod table;

pub use assignment::{su3_candidates, CentralImage, RotationAssignment};
pub use census::{
    enumerate_su3, moduli_from_enumeration, solve_triple, Census, HperpData, KeyedOracle, RepCluster, RepKind,
    SignOracle, UniformPositive,
};
pub use regress::{enumerate_tau, regress, RegressionRow};
pub use seifert::{seifert_presentation, SeifertPresentation};
pub use solver::SolverConfig;
pub use su2::{enumerate_su2, Su2Class};
pub use table::{family_members, tau_table};
