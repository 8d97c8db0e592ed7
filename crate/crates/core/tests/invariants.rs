use proptest::prelude::*;

use scfcheck::enumeration::{inverse_permutation, Domain, DomainSpec, ProfileId};
use scfcheck::prefcore::{kelly_strictly_prefers, ChoiceSet, Profile, WeakOrder};
use scfcheck::proofreplay::{self, CandidateSet, Deduction, Model, ScenarioBuilder};
use scfcheck::rules::{self, pareto_rule};

fn order(m: usize) -> impl Strategy<Value = WeakOrder> {
    prop::collection::vec(0..m, m).prop_map(|levels| WeakOrder::from_levels(&levels).unwrap())
}

fn profile(m: usize, n: usize) -> impl Strategy<Value = Profile> {
    prop::collection::vec(order(m), n).prop_map(|voters| Profile::new(voters).unwrap())
}

fn set(m: usize) -> impl Strategy<Value = ChoiceSet> {
    (1u16..1 << m).prop_map(|b| ChoiceSet::from_bits(b).unwrap())
}

fn permutation(k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..k).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn profile_ids_round_trip(id in 0u64..13u64.pow(4)) {
        let domain = Domain::new(DomainSpec::weak(3, 4)).unwrap();
        let p = domain.decode(ProfileId(id)).unwrap();
        prop_assert_eq!(domain.encode(&p).unwrap(), ProfileId(id));
    }

    #[test]
    fn orders_render_and_parse(o in order(6)) {
        prop_assert_eq!(o.to_string().parse::<WeakOrder>().unwrap(), o);
    }

    #[test]
    fn kelly_is_asymmetric_and_irreflexive(o in order(5), x in set(5), y in set(5)) {
        let xy = kelly_strictly_prefers(&o, x, y).unwrap();
        let yx = kelly_strictly_prefers(&o, y, x).unwrap();
        prop_assert!(!(xy && yx));
        prop_assert!(!kelly_strictly_prefers(&o, x, x).unwrap());
    }

    #[test]
    fn support_complement(p in profile(5, 4)) {
        let s = p.support_matrix();
        for x in p.alternatives() {
            for y in p.alternatives().filter(|&y| y != x) {
                let ties = p.voters().iter().filter(|v| v.indifferent_between(x, y)).count();
                prop_assert_eq!(s.get(x, y) + s.get(y, x) + ties, p.n());
                prop_assert_eq!(s.margin(x, y), -s.margin(y, x));
            }
        }
    }

    #[test]
    fn permutations_invert(p in profile(4, 3), alts in permutation(4), voters in permutation(3)) {
        let there = p.permute_alternatives(&alts).unwrap().permute_voters(&voters).unwrap();
        let back = there
            .permute_voters(&inverse_permutation(&voters))
            .unwrap()
            .permute_alternatives(&inverse_permutation(&alts))
            .unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn pareto_rule_is_neutral_and_anonymous(p in profile(4, 3), alts in permutation(4), voters in permutation(3)) {
        let f = pareto_rule(&p);
        prop_assert_eq!(pareto_rule(&p.permute_alternatives(&alts).unwrap()), f.permute(&alts));
        prop_assert_eq!(pareto_rule(&p.permute_voters(&voters).unwrap()), f);
    }

    #[test]
    fn anonymous_rules_ignore_voter_order(p in profile(3, 4), voters in permutation(4)) {
        let q = p.permute_voters(&voters).unwrap();
        for name in ["pareto", "omninomination", "borda", "plurality", "copeland", "fstar"] {
            let rule = rules::lookup(name).unwrap();
            prop_assert_eq!(rule.evaluate(&p).unwrap(), rule.evaluate(&q).unwrap(), "{}", name);
        }
    }

    /// The Pareto rule satisfies every enabled axiom, so propagation must
    /// never remove its outputs.
    #[test]
    fn propagation_keeps_a_real_model(ps in prop::collection::vec(profile(3, 3), 2..12)) {
        let mut b = ScenarioBuilder::new("random", 3, 3);
        b.axioms(&[
            Deduction::Strategyproof,
            Deduction::Pareto,
            Deduction::WeakPareto,
            Deduction::Support,
            Deduction::Anonymity,
        ]);
        for (k, p) in ps.iter().enumerate() {
            b.add(&format!("P{k}"), p.clone()).unwrap();
        }
        let model = Model::compile(&b.build().unwrap()).unwrap();
        let out = model.propagate();
        prop_assert!(out.contradiction.is_none());
        prop_assert!(model.audit(&out).sound());
        let truth: Vec<ChoiceSet> = model.profiles().iter().map(pareto_rule).collect();
        for (k, &f) in truth.iter().enumerate() {
            prop_assert!(out.map.get(model.var_of(k)).contains(f), "{} lost {}", model.describe(k), f);
        }
    }
}

#[test]
fn traces_are_deterministic() {
    for entry in proofreplay::library() {
        let s = (entry.build)().unwrap();
        let a = proofreplay::verify(&s, None).unwrap();
        let b = proofreplay::verify(&s, None).unwrap();
        assert_eq!(a.propagation, b.propagation, "{}", entry.name);
    }
}

#[test]
fn pareto_assignment_satisfies_pareto_scenarios() {
    let mut b = ScenarioBuilder::new("sat", 3, 2);
    b.axioms(&[Deduction::Strategyproof, Deduction::Pareto]).full_domain();
    let model = Model::compile(&b.build().unwrap()).unwrap();
    let truth: Vec<ChoiceSet> = (0..model.var_count())
        .map(|v| {
            let k = (0..model.profiles().len()).find(|&k| model.var_of(k) == v).unwrap();
            pareto_rule(model.profile(k))
        })
        .collect();
    assert!(model.satisfies(&truth));
    // Adding a dominated alternative anywhere breaks Pareto-optimality.
    let full = ChoiceSet::full(3).unwrap();
    let v = truth.iter().position(|&f| f != full).unwrap();
    let mut broken = truth.clone();
    broken[v] = full;
    assert!(!model.satisfies(&broken));
    assert_eq!(CandidateSet::all(3).unwrap().len(), 7);
}
