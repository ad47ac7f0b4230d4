//! Matrix representations, arithmeticity testing, and free-product detection
//! for Kleinian groups generated by three half-turns.

pub mod arith;
pub mod ball;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod klein;
pub mod la;
pub mod modp;
pub mod parse;
pub mod poly;
pub mod relators;
pub mod rep;
pub mod roots;

pub use error::{Error, Result};

/// Working precision with an escalation cap for certified decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub bits: u32,
    pub cap: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            bits: 128,
            cap: 8192,
        }
    }
}

impl Precision {
    pub fn new(bits: u32, cap: u32) -> Self {
        Self { bits, cap }
    }

    /// Iterate `f` at doubling precision until it succeeds or the cap is hit.
    pub fn escalate<T>(
        &self,
        mut f: impl FnMut(u32) -> Result<T>,
    ) -> Result<T> {
        let mut bits = self.bits;
        loop {
            match f(bits) {
                Err(Error::PrecisionExhausted(_)) if bits < self.cap => {
                    bits = (bits * 2).min(self.cap);
                }
                other => return other,
            }
        }
    }
}
