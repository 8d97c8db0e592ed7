use scfcheck::axioms::{check, Axiom, Verdict, Witness};
use scfcheck::enumeration::DomainSpec;
use scfcheck::rules::{self, lookup};

fn verdict(rule: &str, axiom: Axiom, spec: DomainSpec) -> Verdict {
    check(&lookup(rule).unwrap(), axiom, spec).unwrap().verdict
}

/// The Borda score counts only alternatives ranked strictly above, so a
/// tie at the bottom scores differently from a tie at the top with the same
/// margins. On strict orders the score is a function of the margins.
#[test]
fn borda_is_pairwise_only_on_strict_orders() {
    assert_eq!(verdict("borda", Axiom::Pairwise, DomainSpec::strict(3, 3)), Verdict::Pass);
    assert_eq!(verdict("borda", Axiom::Pairwise, DomainSpec::strict(4, 3)), Verdict::Pass);
    let spec = DomainSpec::weak(3, 3);
    let rule = lookup("borda").unwrap();
    let result = check(&rule, Axiom::Pairwise, spec).unwrap();
    match result.witness {
        Some(w @ Witness::SignaturePair { .. }) => {
            assert!(w.revalidate(&rule, &spec).unwrap());
            if let Witness::SignaturePair { first, second, .. } = &w {
                assert_eq!(first.margin_matrix(), second.margin_matrix());
                assert_ne!(first.support_matrix(), second.support_matrix());
            }
        }
        other => panic!("expected a signature pair, got {other:?}"),
    }
}

#[test]
fn basedness_hierarchy_on_strict_orders() {
    let spec = DomainSpec::strict(3, 3);
    for rule in rules::registry().into_iter().filter(|r| r.check_spec(&spec).is_ok()) {
        let pairwise = check(&rule, Axiom::Pairwise, spec).unwrap().passed();
        let support = check(&rule, Axiom::SupportBased, spec).unwrap().passed();
        let majority = check(&rule, Axiom::MajorityBased, spec).unwrap().passed();
        assert!(!pairwise || support, "{}", rule.name());
        assert!(!majority || pairwise, "{}", rule.name());
    }
}

#[test]
fn independence_examples() {
    let w33 = DomainSpec::weak(3, 3);
    // Each rule drops exactly the property it is meant to drop.
    assert_eq!(verdict("trivial", Axiom::ParetoOptimal, w33), Verdict::Fail);
    assert_eq!(verdict("trivial", Axiom::Strategyproof, w33), Verdict::Pass);
    assert_eq!(verdict("borda", Axiom::ParetoOptimal, w33), Verdict::Pass);
    assert_eq!(verdict("borda", Axiom::RankBased, w33), Verdict::Pass);
    assert_eq!(verdict("all-but-condorcet-loser", Axiom::CondorcetLoser, w33), Verdict::Pass);
    assert_eq!(verdict("all-but-condorcet-loser", Axiom::NonImposing, w33), Verdict::Fail);
    assert_eq!(verdict("lex-pareto", Axiom::Anonymous, w33), Verdict::Pass);
    assert_eq!(verdict("lex-pareto", Axiom::ParetoOptimal, w33), Verdict::Pass);
    assert_eq!(verdict("majority", Axiom::Strategyproof, DomainSpec::weak(2, 3)), Verdict::Pass);
}
