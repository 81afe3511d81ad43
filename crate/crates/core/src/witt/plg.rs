//! The smallest n with 2ⁿ × h hyperbolic.

use super::decide::{is_hyperbolic, Verdict};
use crate::error::{Error, Result};
use crate::forms::{diagonalize, multiple, Diagonalization, HermForm, ProductForm};
use crate::signature::product_signature_table;

pub const DEFAULT_N_MAX: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlgOutcome {
    N(u32),
    NotTorsion,
    Undecided,
}

fn component_n(h: &HermForm, n_max: u32) -> Result<Option<u32>> {
    let rep = match diagonalize(h)? {
        Diagonalization::Diagonal(dg) => dg.form(h.algebra()),
        Diagonalization::Alternating => h.clone(),
    };
    for n in 0..=n_max {
        match is_hyperbolic(&multiple(&rep, 1 << n))?.verdict {
            Verdict::Hyperbolic => return Ok(Some(n)),
            Verdict::Undecided => return Ok(None),
            Verdict::NotHyperbolic => {}
        }
    }
    Err(Error::Internal(format!(
        "signatures vanish but 2^{n_max} × h is not hyperbolic"
    )))
}

/// NotTorsion when some signature is nonzero; otherwise the smallest n ≤
/// n_max with 2ⁿ × h hyperbolic, the maximum over the components of a
/// product.
pub fn plg_minimal_n(h: &ProductForm, n_max: u32) -> Result<PlgOutcome> {
    if !product_signature_table(h)?.is_zero() {
        return Ok(PlgOutcome::NotTorsion);
    }
    let mut best = 0;
    for part in &h.parts {
        match component_n(part, n_max)? {
            Some(n) => best = best.max(n),
            None => return Ok(PlgOutcome::Undecided),
        }
    }
    Ok(PlgOutcome::N(best))
}
