use std::fmt::Write;

use super::{PrimoSpec, MAX_FRACTION_DIGITS};
use crate::scalar::Scalar;

/// Shortest decimal that reads back to the same value, always with a
/// fractional part and never in exponent form.
pub fn render_number<S: Scalar>(value: S) -> String {
    let mut text = format!("{value}");
    let fraction = text.split_once('.').map_or(0, |(_, f)| f.len());
    if fraction > MAX_FRACTION_DIGITS {
        text = format!("{value:.9}");
        while text.ends_with('0') {
            text.pop();
        }
    }
    if !text.contains('.') {
        text.push_str(".0");
    } else if text.ends_with('.') {
        text.push('0');
    }
    text
}

/// Canonical text: inputs sorted by literal, then rules sorted by id, with
/// monotonic antecedents before nonmonotonic ones.
pub fn render<S: Scalar>(spec: &PrimoSpec<S>) -> String {
    let mut out = String::new();
    let mut inputs: Vec<_> = spec.inputs.iter().collect();
    inputs.sort_by(|a, b| a.literal.cmp(&b.literal));
    for d in &inputs {
        let _ = writeln!(out, "input {} = {};", d.literal, render_number(d.confidence));
    }
    if !inputs.is_empty() && !spec.rules.is_empty() {
        out.push('\n');
    }
    let mut rules: Vec<_> = spec.rules.iter().map(|d| &d.rule).collect();
    rules.sort_by(|a, b| a.id.cmp(&b.id));
    for r in rules {
        let antecedents: Vec<String> = r
            .monotonic
            .iter()
            .map(ToString::to_string)
            .chain(
                r.nonmonotonic
                    .iter()
                    .map(|nm| format!("not[{}] {}", render_number(nm.alpha), nm.target)),
            )
            .collect();
        let lhs = if antecedents.is_empty() {
            String::new()
        } else {
            format!("{} ", antecedents.join(" & "))
        };
        let _ = writeln!(
            out,
            "rule {}: {lhs}-> ({}) {};",
            r.id,
            render_number(r.sufficiency),
            r.conclusion
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::TWEETY;
    use crate::graph::{Justification, Literal, NonmonAntecedent};
    use crate::parser::{parse, InputDecl, RuleDecl, Span};
    use proptest::prelude::*;

    #[test]
    fn numbers() {
        assert_eq!(render_number(1.0_f64), "1.0");
        assert_eq!(render_number(0.0_f64), "0.0");
        assert_eq!(render_number(0.2_f64), "0.2");
        assert_eq!(render_number(0.123456789_f64), "0.123456789");
        assert_eq!(render_number(1.0_f64 / 3.0), "0.333333333");
        assert_eq!(render_number(0.3_f32), "0.3");
    }

    #[test]
    fn tweety_canonical_form() {
        let spec = parse::<f64>(TWEETY).unwrap();
        let text = render(&spec);
        let expected = "\
input BIRD = 1.0;
input EMU = 1.0;
input FLEMU = 0.0;

rule r1: BIRD & not[0.2] HOPS -> (0.8) FLIES;
rule r2: EMU & not[0.2] FLIES -> (0.9) HOPS;
rule r3: FLEMU -> (1.0) EMU;
rule r4: EMU -> (1.0) BIRD;
rule r5: FLEMU -> (1.0) FLIES;
";
        assert_eq!(text, expected);
        assert!(parse::<f64>(&text).unwrap().same_content(&spec));
    }

    #[test]
    fn empty_spec_renders_empty() {
        assert_eq!(render(&PrimoSpec::<f64>::default()), "");
    }

    #[test]
    fn fact_rule() {
        let spec = parse::<f64>("rule f: -> (0.7) ~P;").unwrap();
        assert_eq!(render(&spec), "rule f: -> (0.7) ~P;\n");
    }

    fn name() -> impl Strategy<Value = String> {
        prop_oneof![Just("A"), Just("B"), Just("C_1"), Just("long_name"), Just("Z9")].prop_map(String::from)
    }

    fn literal() -> impl Strategy<Value = Literal> {
        (name(), any::<bool>()).prop_map(|(n, neg)| Literal::new(n, neg))
    }

    // Values with at most nine fractional digits, as the grammar allows.
    fn unit(open: bool) -> impl Strategy<Value = f64> {
        let low = u64::from(open);
        (low..=1_000_000_000u64)
            .prop_map(|n| format!("0.{n:09}").parse::<f64>().unwrap().min(1.0))
            .prop_map(move |v| if v == 0.0 && open { 1.0 } else { v })
    }

    fn spec() -> impl Strategy<Value = PrimoSpec<f64>> {
        let input = (literal(), unit(false));
        let rule = (
            proptest::collection::vec(literal(), 0..3),
            proptest::collection::vec((literal(), unit(true)), 0..3),
            unit(true),
            literal(),
        );
        (
            proptest::collection::vec(input, 0..4),
            proptest::collection::vec(rule, 0..5),
        )
            .prop_map(|(inputs, rules)| {
                let mut seen = std::collections::HashSet::new();
                PrimoSpec {
                    inputs: inputs
                        .into_iter()
                        .filter(|(l, _)| seen.insert(l.clone()))
                        .map(|(literal, confidence)| InputDecl {
                            literal,
                            confidence,
                            span: Span::default(),
                        })
                        .collect(),
                    rules: rules
                        .into_iter()
                        .enumerate()
                        .map(|(i, (monotonic, nm, sufficiency, conclusion))| RuleDecl {
                            rule: Justification {
                                id: format!("r{i}"),
                                monotonic,
                                nonmonotonic: nm
                                    .into_iter()
                                    .map(|(target, alpha)| NonmonAntecedent { target, alpha })
                                    .collect(),
                                sufficiency,
                                conclusion,
                            },
                            span: Span::default(),
                        })
                        .collect(),
                }
            })
    }

    proptest! {
        #[test]
        fn parse_render_round_trip(s in spec()) {
            let text = render(&s);
            let back = parse::<f64>(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
            prop_assert!(back.same_content(&s), "{}", text);
            prop_assert_eq!(render(&back), text);
        }
    }
}
