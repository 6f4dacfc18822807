use std::fmt::Write;

use super::{WcnfInstance, Weight};
use crate::scalar::{fixed6, Scalar};

/// Weighted CNF text: `h` before hard clauses, the weight with six decimals
/// before soft ones, signed 1-based literals, `0` after each clause.
pub fn write_wcnf<S: Scalar>(inst: &WcnfInstance<S>) -> String {
    let mut out = String::new();
    let hard = inst.hard().count();
    let _ = writeln!(
        out,
        "c primo weighted cnf: {} variables, {} hard, {} soft",
        inst.vars.len(),
        hard,
        inst.clauses.len() - hard
    );
    for (i, v) in inst.vars.iter().enumerate() {
        let _ = writeln!(out, "c var {} = {}", i + 1, v.name);
    }
    for c in &inst.clauses {
        match c.weight {
            Weight::Hard => out.push('h'),
            Weight::Soft(w) => out.push_str(&fixed6(w)),
        }
        for l in &c.literals {
            let _ = write!(out, " {}", l.to_dimacs());
        }
        out.push_str(" 0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::tweety;
    use crate::optimize::encode;
    use crate::propagate::BoundsState;
    use crate::tnorm::TNormFamily;

    #[test]
    fn tweety_file() {
        let g = tweety::<f64>(TNormFamily::ProductProbSum, 1.0);
        let mut s = BoundsState::initialize(&g);
        s.propagate().unwrap();
        let text = write_wcnf(&encode(&s).unwrap());
        let expected = "\
c primo weighted cnf: 2 variables, 2 hard, 4 soft
c var 1 = FLIES
c var 2 = HOPS
h 1 2 0
h -1 -2 0
1.400000 1 0
0.600000 -1 0
1.450000 2 0
0.550000 -2 0
";
        assert_eq!(text, expected);
    }
}
