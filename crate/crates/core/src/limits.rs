//! Size caps for the exponential parts of the library.
//!
//! Defaults can be overridden with `ARGQ_LIMITS`, a comma-separated list of
//! `key=value` pairs, e.g. `ARGQ_LIMITS=dnf_atoms=14,monadic_preds=5`.

use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of distinct atoms a formula may have before DNF conversion.
    pub dnf_atoms: usize,
    /// Maximum number of monadic predicates.
    pub monadic_preds: usize,
    /// Maximum number of disjunctive attacks in NP enumeration.
    pub np_disjunctive: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { dnf_atoms: 12, monadic_preds: 4, np_disjunctive: 10 }
    }
}

impl Limits {
    /// Applies `key=value` overrides; unknown keys and malformed values are ignored.
    pub fn with_overrides(mut self, overrides: &str) -> Self {
        for part in overrides.split(',') {
            let Some((k, v)) = part.split_once('=') else { continue };
            let Ok(v) = v.trim().parse::<usize>() else { continue };
            match k.trim() {
                "dnf_atoms" => self.dnf_atoms = v,
                "monadic_preds" => self.monadic_preds = v,
                "np_disjunctive" => self.np_disjunctive = v,
                _ => {}
            }
        }
        self
    }
}

/// Process-wide limits, read once from the environment.
pub fn limits() -> &'static Limits {
    static LIMITS: OnceLock<Limits> = OnceLock::new();
    LIMITS.get_or_init(|| {
        let base = Limits::default();
        match std::env::var("ARGQ_LIMITS") {
            Ok(s) => base.with_overrides(&s),
            Err(_) => base,
        }
    })
}
