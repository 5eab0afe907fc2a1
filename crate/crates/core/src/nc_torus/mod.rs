//! Fibers of `C*(G)` over the dual torus of the center: characters, the
//! twisting forms `χ ∘ ω`, the exterior-algebra model of their K-theory with
//! the low-degree trace, and finite clock-shift models of rational fibers.

mod character;
mod clock_shift;
mod exterior;
mod fiber;

pub use character::{frac, parse_rational, Character};
pub use clock_shift::{canonical_trace_check, clock_shift_rep, max_trace_residual, CMatrix, UnitaryRep};
pub use exterior::{k_ranks, trace_low_degree, wedge, ExteriorElement};
pub use fiber::{fiber_form, is_fiber_untwisted, trace_pairing, FiberForm};
