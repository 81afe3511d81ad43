//! Base rings, algebras with involution and their structure maps.

mod base;
mod component;
mod goldman;

use std::sync::Arc;

pub use base::{BaseRing, Ordering};
pub use component::{AElem, Coefficients, ComponentAlgebra, InvolutionType};
pub use goldman::{goldman_element, TensorElement};

use crate::error::{Error, Result};

/// An algebra with involution over a base ring that may be a product of
/// fields; one connected component per factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    pub base: BaseRing,
    pub components: Vec<Arc<ComponentAlgebra>>,
}

impl Algebra {
    pub fn single(c: ComponentAlgebra) -> Algebra {
        Algebra { base: c.base_ring(), components: vec![Arc::new(c)] }
    }

    pub fn is_product(&self) -> bool {
        self.components.len() > 1
    }

    pub fn component(&self, i: usize) -> Result<&Arc<ComponentAlgebra>> {
        self.components
            .get(i)
            .ok_or_else(|| Error::OrderingMismatch(format!("no component {i}")))
    }

    /// The connected algebra when there is exactly one component.
    pub fn connected(&self) -> Result<&Arc<ComponentAlgebra>> {
        match self.components.as_slice() {
            [c] => Ok(c),
            _ => Err(Error::UnsupportedBase("operation needs a connected base".into())),
        }
    }

    pub fn orderings(&self) -> Vec<Ordering> {
        self.base.orderings()
    }

    pub fn nil_orderings(&self) -> Vec<Ordering> {
        self.components.iter().flat_map(|c| c.nil_orderings()).collect()
    }
}
