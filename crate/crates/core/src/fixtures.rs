//! The flying-emu rule base, used by tests, examples and documentation.

use crate::graph::{rule, Literal, PrimoGraph};
use crate::scalar::Scalar;
use crate::tnorm::TNormFamily;

/// Rule text of the flying-emu example in `.primo` syntax.
pub const TWEETY: &str = "\
# Tweety, the flying emu
input BIRD = 1.0;
input EMU = 1.0;
input FLEMU = 0.0;

rule r1: BIRD & not[0.2] HOPS -> (0.8) FLIES;
rule r2: EMU & not[0.2] FLIES -> (0.9) HOPS;
rule r3: FLEMU -> (1.0) EMU;
rule r4: EMU -> (1.0) BIRD;
rule r5: FLEMU -> (1.0) FLIES;
";

/// The flying-emu graph with BIRD = 1, FLEMU = 0 and the given EMU input.
pub fn tweety<S: Scalar>(family: TNormFamily, emu: f64) -> PrimoGraph<S> {
    PrimoGraph::builder(family)
        .input(Literal::positive("BIRD"), S::one())
        .input(Literal::positive("EMU"), S::of(emu))
        .input(Literal::positive("FLEMU"), S::zero())
        .rule(rule("r1", &["BIRD"], &[("HOPS", 0.2)], 0.8, "FLIES"))
        .rule(rule("r2", &["EMU"], &[("FLIES", 0.2)], 0.9, "HOPS"))
        .rule(rule("r3", &["FLEMU"], &[], 1.0, "EMU"))
        .rule(rule("r4", &["EMU"], &[], 1.0, "BIRD"))
        .rule(rule("r5", &["FLEMU"], &[], 1.0, "FLIES"))
        .build()
        .expect("fixture is well formed")
}
