//! Decay-exponent fitting, exponent transfer, and verification harnesses.

pub mod demo;
pub mod fit;
pub mod profile;
pub mod transfer;
pub mod verify;

pub use demo::{demo_d1_counterexample, demo_gamma2_failure};
pub use fit::{fit_exponent, ExponentFit, FitModel, FitOutcome, ModelChoice, ZeroTail};
pub use profile::{ArgumentRole, DecayProfile, DyadicGrid};
pub use transfer::{transfer_predict, Direction, PredictedLaw};
pub use verify::{
    verify_cor12, verify_cor15, verify_sandwich, verify_thm11, verify_thm13, verify_thm14,
    VerificationReport,
};
