use std::collections::{HashMap, VecDeque};

use super::candidates::{CandidateMap, CandidateSet};
use super::scenario::{Deduction, License, Scenario};
use crate::axioms::{same_signature, Axiom};
use crate::enumeration::Domain;
use crate::error::{Error, Result};
use crate::prefcore::{
    kelly_strictly_prefers, Alternative, ChoiceSet, MajorityRelation, MarginMatrix, Profile, RankMatrix,
    SupportMatrix, WeakOrder,
};

/// Largest number of profiles a model is compiled for.
pub const MAX_MODEL_PROFILES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Deduce(Deduction),
    /// The near-unanimity seed was switched on.
    License,
}

/// One entry of a deduction trace. Profiles are model profile indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub profile: usize,
    /// The partner profile of an arc or link.
    pub other: Option<usize>,
    pub voter: Option<usize>,
    /// The alternative a seed forced or a prune excluded.
    pub alternative: Option<Alternative>,
    pub removed: CandidateSet,
    pub remaining: CandidateSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagation {
    pub map: CandidateMap,
    pub trace: Vec<Step>,
    /// The first variable left without candidates.
    pub contradiction: Option<usize>,
    /// Seed index that conflicted with an earlier restriction at init.
    pub seed_conflict: Option<usize>,
    /// Profile and voter that licensed the near-unanimity seed.
    pub license: Option<(usize, usize)>,
    pub rounds: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Audit {
    pub steps: usize,
    pub removals: usize,
    pub failures: Vec<String>,
}

impl Audit {
    pub fn sound(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// One choice set per variable.
    Satisfiable(Vec<ChoiceSet>),
    Unsatisfiable,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
struct Arc {
    p: usize,
    q: usize,
    voter: usize,
    u: usize,
    v: usize,
    table: usize,
}

/// `forward[X]` holds the outcomes of `q` compatible with `f(p) = X`;
/// `backward[Y]` the outcomes of `p` compatible with `f(q) = Y`.
#[derive(Clone, Debug)]
struct Table {
    forward: Vec<u64>,
    backward: Vec<u64>,
}

#[derive(Clone, Debug)]
struct Unary {
    deduction: Deduction,
    profile: usize,
    alternative: Option<Alternative>,
    keep: CandidateSet,
}

#[derive(Clone, Debug)]
struct Group {
    deduction: Deduction,
    profiles: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum SigKey {
    Rank(RankMatrix),
    Support(SupportMatrix),
    Margin(MarginMatrix),
    Majority(MajorityRelation),
    Voters(Vec<WeakOrder>),
}

fn signature(d: Deduction, p: &Profile) -> SigKey {
    match d {
        Deduction::Rank => SigKey::Rank(p.rank_matrix()),
        Deduction::Support => SigKey::Support(p.support_matrix()),
        Deduction::Pairwise => SigKey::Margin(p.margin_matrix()),
        Deduction::Majority => SigKey::Majority(p.majority_relation()),
        _ => {
            let mut v = p.voters().to_vec();
            v.sort();
            SigKey::Voters(v)
        }
    }
}

fn link_axiom(d: Deduction) -> Axiom {
    match d {
        Deduction::Rank => Axiom::RankBased,
        Deduction::Support => Axiom::SupportBased,
        Deduction::Pairwise => Axiom::Pairwise,
        Deduction::Majority => Axiom::MajorityBased,
        _ => Axiom::Anonymous,
    }
}

/// A scenario compiled into variables and constraints.
#[derive(Clone, Debug)]
pub struct Model {
    m: usize,
    n: usize,
    axioms: Vec<Deduction>,
    license_mode: License,
    collapse: Option<Deduction>,
    profiles: Vec<Profile>,
    labels: Vec<(String, usize)>,
    first_label: Vec<Option<usize>>,
    var_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    tables: Vec<Table>,
    neighbors: Vec<Vec<(usize, bool)>>,
    unary: Vec<Unary>,
    groups: Vec<Group>,
    initial: CandidateMap,
    seed_conflict: Option<usize>,
}

impl Model {
    pub fn compile(scenario: &Scenario) -> Result<Model> {
        scenario.validate()?;
        let (m, n) = (scenario.m(), scenario.n());

        let mut profiles: Vec<Profile> = Vec::new();
        let mut index: HashMap<Profile, usize> = HashMap::new();
        let mut labels = Vec::new();
        for (label, p) in &scenario.profiles {
            let k = *index.entry(p.clone()).or_insert_with(|| {
                profiles.push(p.clone());
                profiles.len() - 1
            });
            labels.push((label.clone(), k));
        }
        if scenario.full_domain {
            let domain = Domain::new(scenario.spec)?;
            if domain.len() > MAX_MODEL_PROFILES as u64 {
                return Err(Error::Capacity(format!(
                    "full domain has {} profiles, the engine handles at most {MAX_MODEL_PROFILES}",
                    domain.len()
                )));
            }
            for (_, p) in domain.profiles() {
                if !index.contains_key(&p) {
                    index.insert(p.clone(), profiles.len());
                    profiles.push(p);
                }
            }
        }
        if profiles.len() > MAX_MODEL_PROFILES {
            return Err(Error::Capacity(format!(
                "{} profiles exceed the engine limit of {MAX_MODEL_PROFILES}",
                profiles.len()
            )));
        }
        let mut first_label = vec![None; profiles.len()];
        for (k, (_, p)) in labels.iter().enumerate() {
            first_label[*p].get_or_insert(k);
        }

        // Variables.
        let mut var_of = Vec::with_capacity(profiles.len());
        let mut members: Vec<Vec<usize>> = Vec::new();
        match scenario.collapse {
            Some(d) => {
                let mut classes: HashMap<SigKey, usize> = HashMap::new();
                for (k, p) in profiles.iter().enumerate() {
                    let var = *classes.entry(signature(d, p)).or_insert_with(|| {
                        members.push(Vec::new());
                        members.len() - 1
                    });
                    members[var].push(k);
                    var_of.push(var);
                }
            }
            None => {
                for k in 0..profiles.len() {
                    var_of.push(k);
                    members.push(vec![k]);
                }
            }
        }

        let full = CandidateSet::all(m)?;
        let mut model = Model {
            m,
            n,
            axioms: scenario.axioms.clone(),
            license_mode: scenario.license,
            collapse: scenario.collapse,
            profiles,
            labels,
            first_label,
            var_of,
            members,
            arcs: Vec::new(),
            tables: Vec::new(),
            neighbors: Vec::new(),
            unary: Vec::new(),
            groups: Vec::new(),
            initial: CandidateMap { sets: Vec::new() },
            seed_conflict: None,
        };
        if model.has(Deduction::Strategyproof) {
            model.build_arcs();
        }
        model.neighbors = vec![Vec::new(); model.members.len()];
        for (a, arc) in model.arcs.iter().enumerate() {
            model.neighbors[arc.u].push((a, true));
            model.neighbors[arc.v].push((a, false));
        }
        model.build_unary(full);
        model.build_groups();

        let mut sets = vec![full; model.members.len()];
        for (k, seed) in scenario.seeds.iter().enumerate() {
            let p = model.label_index(&seed.label).expect("validated label");
            let var = model.var_of[p];
            sets[var] = sets[var].intersect(seed.sets);
            if sets[var].is_empty() && model.seed_conflict.is_none() {
                model.seed_conflict = Some(k);
            }
        }
        model.initial = CandidateMap { sets };
        Ok(model)
    }

    fn build_arcs(&mut self) {
        let mut by_rest: HashMap<(usize, Vec<WeakOrder>), Vec<usize>> = HashMap::new();
        let rest = |p: &Profile, i: usize| -> Vec<WeakOrder> {
            p.voters().iter().enumerate().filter(|&(j, _)| j != i).map(|(_, o)| *o).collect()
        };
        for (k, p) in self.profiles.iter().enumerate() {
            for i in 0..self.n {
                by_rest.entry((i, rest(p, i))).or_default().push(k);
            }
        }
        let mut table_ids: HashMap<(WeakOrder, WeakOrder), usize> = HashMap::new();
        let mut seen: HashMap<(usize, usize, usize), ()> = HashMap::new();
        for p in 0..self.profiles.len() {
            for i in 0..self.n {
                let group = &by_rest[&(i, rest(&self.profiles[p], i))];
                for &q in group.iter().filter(|&&q| q > p) {
                    let (mut p, mut q) = (p, q);
                    let (mut u, mut v) = (self.var_of[p], self.var_of[q]);
                    if u == v {
                        continue;
                    }
                    if u > v {
                        std::mem::swap(&mut p, &mut q);
                        std::mem::swap(&mut u, &mut v);
                    }
                    let key = (self.profiles[p].voters()[i], self.profiles[q].voters()[i]);
                    let next = self.tables.len();
                    let table = *table_ids.entry(key).or_insert(next);
                    if table == next {
                        self.tables.push(compat_table(self.m, &key.0, &key.1));
                    }
                    if seen.insert((u, v, table), ()).is_none() {
                        self.arcs.push(Arc { p, q, voter: i, u, v, table });
                    }
                }
            }
        }
    }

    fn build_unary(&mut self, full: CandidateSet) {
        for (k, p) in self.profiles.iter().enumerate() {
            let mut push = |deduction, alternative, keep: CandidateSet| {
                if keep != full {
                    self.unary.push(Unary { deduction, profile: k, alternative, keep });
                }
            };
            for &d in &self.axioms {
                match d {
                    Deduction::Pareto => push(d, None, CandidateSet::subsets_of(p.pareto_optimal_set())),
                    Deduction::WeakPareto => {
                        push(d, None, CandidateSet::subsets_of(p.weak_pareto_optimal_set()))
                    }
                    Deduction::CondorcetLoser => {
                        if let Some(x) = p.condorcet_loser() {
                            push(d, Some(x), full.filter(|s| !s.contains(x)));
                        }
                    }
                    Deduction::NearUnanimity => {
                        for x in p.near_unanimous_alternatives() {
                            push(d, Some(x), CandidateSet::only(ChoiceSet::singleton(x)));
                        }
                    }
                    Deduction::NonImposition => {
                        if let Some(x) = p.voters()[0].unique_top() {
                            if p.unique_top_count(x) == p.n() {
                                push(d, Some(x), CandidateSet::only(ChoiceSet::singleton(x)));
                            }
                        }
                    }
                    Deduction::AbsoluteMajority => {
                        if let Some(x) = p.absolute_majority_top() {
                            push(d, Some(x), CandidateSet::only(ChoiceSet::singleton(x)));
                        }
                    }
                    Deduction::CondorcetWinner => {
                        if let Some(x) = p.condorcet_winner() {
                            push(d, Some(x), CandidateSet::only(ChoiceSet::singleton(x)));
                        }
                    }
                    _ => {}
                }
            }
        }
    }

    fn build_groups(&mut self) {
        for &d in &self.axioms {
            if !d.is_link() || Some(d) == self.collapse {
                continue;
            }
            let mut by_sig: HashMap<SigKey, usize> = HashMap::new();
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for (k, p) in self.profiles.iter().enumerate() {
                let g = *by_sig.entry(signature(d, p)).or_insert_with(|| {
                    groups.push(Vec::new());
                    groups.len() - 1
                });
                if groups[g].iter().all(|&o| self.var_of[o] != self.var_of[k]) {
                    groups[g].push(k);
                }
            }
            self.groups.extend(
                groups.into_iter().filter(|g| g.len() > 1).map(|profiles| Group { deduction: d, profiles }),
            );
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has(&self, d: Deduction) -> bool {
        self.axioms.contains(&d)
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn profile(&self, k: usize) -> &Profile {
        &self.profiles[k]
    }

    pub fn var_count(&self) -> usize {
        self.members.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn var_of(&self, profile: usize) -> usize {
        self.var_of[profile]
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().find(|(l, _)| l == label).map(|&(_, k)| k)
    }

    /// The first scenario label naming profile `k`, if any.
    pub fn label(&self, k: usize) -> Option<&str> {
        self.first_label[k].map(|i| self.labels[i].0.as_str())
    }

    /// The label of `k`, or its rendering when it has none.
    pub fn describe(&self, k: usize) -> String {
        match self.label(k) {
            Some(l) => l.to_string(),
            None => self.profiles[k].to_string(),
        }
    }

    /// Candidates of the labelled profile in `map`.
    pub fn candidates(&self, map: &CandidateMap, label: &str) -> Option<CandidateSet> {
        self.label_index(label).map(|k| map.get(self.var_of[k]))
    }

    /// The initial map: every choice set, intersected with the seeds.
    pub fn initial(&self) -> &CandidateMap {
        &self.initial
    }

    /// Runs one pass of a single rule over `map`, without trace. For
    /// `Strategyproof` every arc is revised once in each direction.
    pub fn apply(&self, map: &CandidateMap, rule: Deduction) -> CandidateMap {
        let mut run = Run::new(self, map.sets.clone(), true, false);
        match rule {
            Deduction::Strategyproof => {
                for a in 0..self.arcs.len() {
                    run.revise(a, true);
                    run.revise(a, false);
                }
            }
            d if d.is_link() => {
                for g in self.groups.iter().filter(|g| g.deduction == d) {
                    run.link(g);
                }
            }
            d => {
                for u in self.unary.iter().filter(|u| u.deduction == d) {
                    run.unary(u);
                }
            }
        }
        CandidateMap { sets: run.sets }
    }

    /// Propagates from the initial map to a fixpoint, recording every
    /// removal.
    pub fn propagate(&self) -> Propagation {
        let licensed = self.license_mode == License::Assumed;
        let mut run = Run::new(self, self.initial.sets.clone(), licensed, true);
        if self.seed_conflict.is_none() {
            run.enqueue_all();
            run.fixpoint();
        } else {
            run.contradiction = self.initial.contradiction();
        }
        Propagation {
            map: CandidateMap { sets: run.sets },
            trace: run.trace,
            contradiction: run.contradiction,
            seed_conflict: self.seed_conflict,
            license: run.license,
            rounds: run.rounds,
        }
    }

    /// Replays `result.trace` from the initial map, re-checking every
    /// removal against the axiom definitions on the concrete profiles.
    pub fn audit(&self, result: &Propagation) -> Audit {
        let mut audit = Audit::default();
        let mut sets = self.initial.sets.clone();
        let mut licensed = self.license_mode == License::Assumed;
        if let Some(c) = self.collapse {
            for (var, members) in self.members.iter().enumerate() {
                let first = &self.profiles[members[0]];
                for &k in &members[1..] {
                    if !same_signature(link_axiom(c), first, &self.profiles[k]) {
                        audit.failures.push(format!("variable {var} mixes signatures"));
                    }
                }
            }
        }
        for (s, step) in result.trace.iter().enumerate() {
            audit.steps += 1;
            let var = self.var_of[step.profile];
            let current = sets[var];
            if !step.removed.is_subset_of(current) || current.minus(step.removed) != step.remaining {
                audit.failures.push(format!("step {s}: removal does not match the replayed state"));
            }
            let why = match step.kind {
                StepKind::License => {
                    let ok = self.license_check(step, current);
                    if ok.is_ok() {
                        licensed = true;
                    }
                    ok
                }
                StepKind::Deduce(d) => {
                    if !self.has(d) {
                        Err(format!("`{d}` is not enabled"))
                    } else {
                        step.removed.iter().try_for_each(|x| self.justify(d, step, x, &sets, licensed))
                    }
                }
            };
            if let Err(e) = why {
                audit.failures.push(format!("step {s} ({}): {e}", self.describe(step.profile)));
            }
            audit.removals += step.removed.len();
            sets[var] = current.minus(step.removed);
        }
        if sets != result.map.sets {
            audit.failures.push("replayed map differs from the reported map".to_string());
        }
        audit
    }

    fn license_check(&self, step: &Step, current: CandidateSet) -> std::result::Result<(), String> {
        let voter = step.voter.ok_or("license step without a voter")?;
        let top = self.profiles[step.profile].voter(voter).map_err(|e| e.to_string())?.top_class();
        if !step.removed.is_empty() {
            return Err("license step removes candidates".into());
        }
        if current.is_empty() || current.iter().any(|x| !x.is_disjoint(top)) {
            return Err(format!("voter {} is not shown to be a non-nominator", voter + 1));
        }
        Ok(())
    }

    fn justify(
        &self,
        d: Deduction,
        step: &Step,
        x: ChoiceSet,
        sets: &[CandidateSet],
        licensed: bool,
    ) -> std::result::Result<(), String> {
        let p = &self.profiles[step.profile];
        let alt = || step.alternative.ok_or_else(|| "missing alternative".to_string());
        let forced = |y: Alternative| -> std::result::Result<(), String> {
            if x == ChoiceSet::singleton(y) {
                Err(format!("removed the forced set {x}"))
            } else {
                Ok(())
            }
        };
        match d {
            Deduction::Pareto => {
                let dominated = x
                    .iter()
                    .any(|a| p.alternatives().any(|b| b != a && p.pareto_dominates(b, a).unwrap_or(false)));
                if !dominated {
                    return Err(format!("{x} has no Pareto-dominated member"));
                }
            }
            Deduction::WeakPareto => {
                let beaten = x
                    .iter()
                    .any(|a| p.alternatives().any(|b| b != a && p.voters().iter().all(|v| v.prefers(b, a))));
                if !beaten {
                    return Err(format!("{x} has no weakly dominated member"));
                }
            }
            Deduction::CondorcetLoser => {
                let a = alt()?;
                if p.condorcet_loser() != Some(a) || !x.contains(a) {
                    return Err(format!("{x} does not contain the Condorcet loser"));
                }
            }
            Deduction::NearUnanimity => {
                let a = alt()?;
                if !licensed {
                    return Err("near unanimity used before it was licensed".into());
                }
                if !p.near_unanimous_alternatives().contains(&a) {
                    return Err(format!("{a} is not near-unanimous"));
                }
                forced(a)?;
            }
            Deduction::NonImposition => {
                let a = alt()?;
                if p.voters().iter().any(|v| v.unique_top() != Some(a)) {
                    return Err(format!("{a} is not unanimously first"));
                }
                forced(a)?;
            }
            Deduction::AbsoluteMajority => {
                let a = alt()?;
                if 2 * p.unique_top_count(a) <= p.n() {
                    return Err(format!("{a} is not first for a majority"));
                }
                forced(a)?;
            }
            Deduction::CondorcetWinner => {
                let a = alt()?;
                if p.condorcet_winner() != Some(a) {
                    return Err(format!("{a} is not the Condorcet winner"));
                }
                forced(a)?;
            }
            Deduction::Strategyproof => {
                let (q, i) = match (step.other, step.voter) {
                    (Some(q), Some(i)) => (&self.profiles[q], i),
                    _ => return Err("arc step without partner".into()),
                };
                let differs_only_in_i =
                    p.voters().iter().zip(q.voters()).enumerate().all(|(j, (a, b))| (j == i) != (a == b));
                if !differs_only_in_i {
                    return Err(format!("profiles do not differ in exactly voter {}", i + 1));
                }
                let (own, dev) = (p.voters()[i], q.voters()[i]);
                let target = sets[self.var_of[step.other.unwrap()]];
                for y in target.iter() {
                    let gain_here = kelly_strictly_prefers(&own, y, x).map_err(|e| e.to_string())?;
                    let gain_there = kelly_strictly_prefers(&dev, x, y).map_err(|e| e.to_string())?;
                    if !gain_here && !gain_there {
                        return Err(format!("{x} is compatible with {y} at the partner"));
                    }
                }
            }
            link => {
                let q = step.other.ok_or("link step without partner")?;
                if !same_signature(link_axiom(link), p, &self.profiles[q]) {
                    return Err(format!("signatures differ under `{link}`"));
                }
                if sets[self.var_of[q]].contains(x) {
                    return Err(format!("{x} is still admissible at the partner"));
                }
            }
        }
        Ok(())
    }

    /// Depth-first search for an assignment consistent with every rule,
    /// propagating after each decision. Branches on the variable with the
    /// fewest candidates, singletons first.
    pub fn solve(&self, budget: u64) -> SolveReport {
        let licensed = self.license_mode == License::Assumed;
        let mut run = Run::new(self, self.initial.sets.clone(), licensed, false);
        let mut nodes = 1;
        if self.seed_conflict.is_some() {
            return SolveReport { outcome: SolveOutcome::Unsatisfiable, nodes };
        }
        run.enqueue_all();
        run.fixpoint();
        if run.contradiction.is_some() {
            return SolveReport { outcome: SolveOutcome::Unsatisfiable, nodes };
        }
        let root = (run.sets, run.licensed);
        let outcome = self.search(root, budget, &mut nodes);
        SolveReport { outcome, nodes }
    }

    fn search(&self, state: (Vec<CandidateSet>, bool), budget: u64, nodes: &mut u64) -> SolveOutcome {
        let (sets, licensed) = state;
        let pick = sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.len() > 1)
            .min_by_key(|&(k, s)| (s.len(), k))
            .map(|(k, _)| k);
        let Some(var) = pick else {
            let assignment: Vec<ChoiceSet> = sets.iter().map(|s| s.single().expect("decided")).collect();
            debug_assert!(self.satisfies(&assignment));
            return SolveOutcome::Satisfiable(assignment);
        };
        let mut values: Vec<ChoiceSet> = sets[var].iter().collect();
        values.sort_by_key(|x| (x.len(), x.bits()));
        for x in values {
            if *nodes >= budget {
                return SolveOutcome::BudgetExceeded;
            }
            *nodes += 1;
            let mut run = Run::new(self, sets.clone(), licensed, false);
            run.restrict(var, CandidateSet::only(x), None);
            run.fixpoint();
            if run.contradiction.is_some() {
                continue;
            }
            match self.search((run.sets, run.licensed), budget, nodes) {
                SolveOutcome::Unsatisfiable => continue,
                other => return other,
            }
        }
        SolveOutcome::Unsatisfiable
    }

    /// Whether a complete assignment (one set per variable) satisfies every
    /// enabled rule. Hypothesis-bearing seeds are checked as stated.
    pub fn satisfies(&self, assignment: &[ChoiceSet]) -> bool {
        if assignment.len() != self.members.len() {
            return false;
        }
        let licensed = self.license_mode == License::Assumed
            || self.profiles.iter().enumerate().any(|(k, p)| {
                let x = assignment[self.var_of[k]];
                p.voters().iter().any(|v| x.is_disjoint(v.top_class()))
            });
        let unary_ok = self.unary.iter().all(|u| {
            (u.deduction == Deduction::NearUnanimity && !licensed)
                || u.keep.contains(assignment[self.var_of[u.profile]])
        });
        let seeds_ok = self.initial.sets.iter().zip(assignment).all(|(s, &x)| s.contains(x));
        let arcs_ok = self.arcs.iter().all(|a| {
            let t = &self.tables[a.table];
            t.forward[assignment[a.u].bits() as usize] >> assignment[a.v].bits() & 1 == 1
        });
        let links_ok = self.groups.iter().all(|g| {
            g.profiles.windows(2).all(|w| assignment[self.var_of[w[0]]] == assignment[self.var_of[w[1]]])
        });
        unary_ok && seeds_ok && arcs_ok && links_ok
    }
}

#[allow(clippy::needless_range_loop)]
fn compat_table(m: usize, own: &WeakOrder, dev: &WeakOrder) -> Table {
    let size = 1usize << m;
    let mut forward = vec![0u64; size];
    let mut backward = vec![0u64; size];
    for xb in 1..size {
        let x = ChoiceSet::from_bits_unchecked(xb as u16);
        for yb in 1..size {
            let y = ChoiceSet::from_bits_unchecked(yb as u16);
            // f(p) = x with voter order `own`, f(q) = y with `dev`.
            if !own.kelly_unchecked(y, x) && !dev.kelly_unchecked(x, y) {
                forward[xb] |= 1 << yb;
                backward[yb] |= 1 << xb;
            }
        }
    }
    Table { forward, backward }
}

/// Mutable propagation state.
struct Run<'a> {
    model: &'a Model,
    sets: Vec<CandidateSet>,
    licensed: bool,
    license: Option<(usize, usize)>,
    record: bool,
    trace: Vec<Step>,
    queue: VecDeque<(usize, bool)>,
    queued: Vec<[bool; 2]>,
    contradiction: Option<usize>,
    rounds: usize,
}

impl<'a> Run<'a> {
    fn new(model: &'a Model, sets: Vec<CandidateSet>, licensed: bool, record: bool) -> Self {
        Run {
            model,
            sets,
            licensed,
            license: None,
            record,
            trace: Vec::new(),
            queue: VecDeque::new(),
            queued: vec![[false; 2]; model.arcs.len()],
            contradiction: None,
            rounds: 0,
        }
    }

    fn enqueue_all(&mut self) {
        for a in 0..self.model.arcs.len() {
            self.push(a, true);
            self.push(a, false);
        }
    }

    /// Queues revising one side of arc `a`: the `u` side when `u_side`.
    fn push(&mut self, a: usize, u_side: bool) {
        let slot = &mut self.queued[a][u_side as usize];
        if !*slot {
            *slot = true;
            self.queue.push_back((a, u_side));
        }
    }

    /// Intersects `var` with `keep`, recording the removal.
    fn restrict(&mut self, var: usize, keep: CandidateSet, step: Option<Step>) -> bool {
        let before = self.sets[var];
        let after = before.intersect(keep);
        if after == before {
            return false;
        }
        self.sets[var] = after;
        if self.record {
            if let Some(mut s) = step {
                s.removed = before.minus(after);
                s.remaining = after;
                self.trace.push(s);
            }
        }
        for &(a, var_is_u) in &self.model.neighbors[var] {
            // Revise the opposite endpoint.
            self.push(a, !var_is_u);
        }
        if after.is_empty() && self.contradiction.is_none() {
            self.contradiction = Some(var);
        }
        true
    }

    fn step(kind: StepKind, profile: usize) -> Step {
        Step {
            kind,
            profile,
            other: None,
            voter: None,
            alternative: None,
            removed: CandidateSet::EMPTY,
            remaining: CandidateSet::EMPTY,
        }
    }

    fn unary(&mut self, u: &Unary) -> bool {
        if u.deduction == Deduction::NearUnanimity && !self.licensed {
            return false;
        }
        let var = self.model.var_of[u.profile];
        let mut s = Self::step(StepKind::Deduce(u.deduction), u.profile);
        s.alternative = u.alternative;
        self.restrict(var, u.keep, Some(s))
    }

    fn link(&mut self, g: &Group) -> bool {
        let mut changed = false;
        for &p in &g.profiles {
            for &q in &g.profiles {
                if p == q || self.contradiction.is_some() {
                    continue;
                }
                let (u, v) = (self.model.var_of[p], self.model.var_of[q]);
                let mut s = Self::step(StepKind::Deduce(g.deduction), p);
                s.other = Some(q);
                changed |= self.restrict(u, self.sets[v], Some(s));
            }
        }
        changed
    }

    /// Drops from one endpoint of arc `a` every candidate with no compatible
    /// partner at the other endpoint.
    fn revise(&mut self, a: usize, u_side: bool) -> bool {
        let arc = &self.model.arcs[a];
        let table = &self.model.tables[arc.table];
        let (var, other, rows, here, there) = if u_side {
            (arc.u, arc.v, &table.forward, arc.p, arc.q)
        } else {
            (arc.v, arc.u, &table.backward, arc.q, arc.p)
        };
        let target = self.sets[other].bits();
        let keep = self.sets[var].filter(|x| rows[x.bits() as usize] & target != 0);
        let mut s = Self::step(StepKind::Deduce(Deduction::Strategyproof), here);
        s.other = Some(there);
        s.voter = Some(arc.voter);
        self.restrict(var, keep, Some(s))
    }

    fn arcs(&mut self) -> bool {
        let mut changed = false;
        while let Some((a, u_side)) = self.queue.pop_front() {
            self.queued[a][u_side as usize] = false;
            changed |= self.revise(a, u_side);
            if self.contradiction.is_some() {
                return changed;
            }
        }
        changed
    }

    fn try_license(&mut self) -> bool {
        if self.licensed || !self.model.has(Deduction::NearUnanimity) {
            return false;
        }
        for (k, p) in self.model.profiles.iter().enumerate() {
            let current = self.sets[self.model.var_of[k]];
            for (i, v) in p.voters().iter().enumerate() {
                if current.iter().all(|x| x.is_disjoint(v.top_class())) {
                    self.licensed = true;
                    self.license = Some((k, i));
                    if self.record {
                        let mut s = Self::step(StepKind::License, k);
                        s.voter = Some(i);
                        s.remaining = current;
                        self.trace.push(s);
                    }
                    return true;
                }
            }
        }
        false
    }

    fn fixpoint(&mut self) {
        let model = self.model;
        loop {
            self.rounds += 1;
            let mut changed = false;
            for u in &model.unary {
                changed |= self.unary(u);
                if self.contradiction.is_some() {
                    return;
                }
            }
            for g in &model.groups {
                changed |= self.link(g);
                if self.contradiction.is_some() {
                    return;
                }
            }
            changed |= self.arcs();
            if self.contradiction.is_some() {
                return;
            }
            changed |= self.try_license();
            if !changed {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::scenario::ScenarioBuilder;
    use super::*;

    fn set(s: &str) -> ChoiceSet {
        s.parse().unwrap()
    }

    #[test]
    fn fresh_map_has_every_set() {
        let mut b = ScenarioBuilder::new("t", 3, 2);
        b.profile("R", &["a>b>c", "c>b>a"]).unwrap();
        let model = Model::compile(&b.build().unwrap()).unwrap();
        assert_eq!(model.initial().get(0).len(), 7);
        let out = model.propagate();
        assert!(out.trace.is_empty());
        assert_eq!(out.map, *model.initial());
    }

    #[test]
    fn seeds_restrict_and_conflict() {
        let mut b = ScenarioBuilder::new("t", 4, 3);
        b.profile("R0", &["b>a~d>c", "d>a>b~c", "a~c>b~d"]).unwrap();
        b.seed("R0", CandidateSet::only(set("{a,d}")));
        let model = Model::compile(&b.build().unwrap()).unwrap();
        assert_eq!(model.initial().get(0), CandidateSet::only(set("{a,d}")));
        b.seed("R0", CandidateSet::only(set("{a}")));
        let model = Model::compile(&b.build().unwrap()).unwrap();
        let out = model.propagate();
        assert_eq!(out.seed_conflict, Some(1));
        assert_eq!(out.contradiction, Some(0));
    }

    #[test]
    fn pareto_prune_drops_dominated_members() {
        let mut b = ScenarioBuilder::new("t", 4, 3);
        b.axioms(&[Deduction::Pareto]);
        b.profile("R1", &["a~b>c~d", "c~d>a~b", "a>b~c~d"]).unwrap();
        b.uniform("U", "a>b>c>d", &[]).unwrap();
        b.profile("Q", &["a>b>c>d", "b>a>c>d", "c>d>a>b"]).unwrap();
        let model = Model::compile(&b.build().unwrap()).unwrap();
        let map = model.apply(model.initial(), Deduction::Pareto);
        assert!(map.get(0).iter().all(|x| !x.contains(Alternative::nth(1))));
        assert_eq!(map.get(0).len(), 7);
        assert_eq!(map.get(1), CandidateSet::only(set("{a}")));
        // Every voter in Q puts c above d.
        assert_eq!(map.get(2), CandidateSet::subsets_of(set("{a,b,c}")));
    }

    #[test]
    fn condorcet_loser_prune() {
        let mut b = ScenarioBuilder::new("t", 3, 3);
        b.axioms(&[Deduction::CondorcetLoser]);
        b.profile("cycle", &["a>b>c", "b>c>a", "c>a>b"]).unwrap();
        b.profile("loser", &["a>b>c", "b>a>c", "a>c>b"]).unwrap();
        let model = Model::compile(&b.build().unwrap()).unwrap();
        let map = model.apply(model.initial(), Deduction::CondorcetLoser);
        assert_eq!(map.get(0).len(), 7);
        assert_eq!(map.get(1), CandidateSet::subsets_of(set("{a,b}")));
    }

    #[test]
    fn arc_with_forced_endpoint() {
        // Voter 3 deviates from a>b~c~d to a~c>b>d; f = {a} on the left.
        let mut b = ScenarioBuilder::new("t", 4, 3);
        b.axioms(&[Deduction::Strategyproof]);
        b.profile("L", &["b~d>c>a", "a>b>c>d", "a>b>c>d"]).unwrap();
        b.profile("R", &["b~d>c>a", "a>b>c>d", "a~c>b>d"]).unwrap();
        b.seed("L", CandidateSet::only(set("{a}")));
        let model = Model::compile(&b.build().unwrap()).unwrap();
        assert_eq!(model.arc_count(), 1);
        let map = model.apply(model.initial(), Deduction::Strategyproof);
        assert_eq!(map.get(1), CandidateSet::subsets_of(set("{a,c}")));
    }

    #[test]
    fn vacuous_arc_removes_nothing() {
        let mut b = ScenarioBuilder::new("t", 3, 2);
        b.axioms(&[Deduction::Strategyproof]);
        b.profile("L", &["a>b>c", "c>b>a"]).unwrap();
        b.profile("R", &["b>a>c", "c>b>a"]).unwrap();
        let model = Model::compile(&b.build().unwrap()).unwrap();
        assert_eq!(model.apply(model.initial(), Deduction::Strategyproof), *model.initial());
    }

    #[test]
    fn identical_links_are_idempotent() {
        let mut b = ScenarioBuilder::new("t", 3, 2);
        b.axioms(&[Deduction::Anonymity]);
        b.profile("L", &["a>b>c", "c>b>a"]).unwrap();
        b.profile("R", &["c>b>a", "a>b>c"]).unwrap();
        b.seed("L", CandidateSet::subsets_of(set("{a,b}")));
        let model = Model::compile(&b.build().unwrap()).unwrap();
        let once = model.apply(model.initial(), Deduction::Anonymity);
        assert_eq!(once.get(1), CandidateSet::subsets_of(set("{a,b}")));
        assert_eq!(model.apply(&once, Deduction::Anonymity), once);
    }

    #[test]
    fn solve_trivial_cases() {
        let mut b = ScenarioBuilder::new("t", 3, 2);
        b.axioms(&[Deduction::Pareto]);
        b.uniform("U", "a>b>c", &[]).unwrap();
        let model = Model::compile(&b.build().unwrap()).unwrap();
        let report = model.solve(10);
        assert_eq!(report.outcome, SolveOutcome::Satisfiable(vec![set("{a}")]));

        let mut b = ScenarioBuilder::new("t", 3, 2);
        b.profile("P", &["a>b>c", "c>b>a"]).unwrap();
        let model = Model::compile(&b.build().unwrap()).unwrap();
        assert!(matches!(model.solve(10).outcome, SolveOutcome::Satisfiable(_)));
    }

    #[test]
    fn audit_catches_a_forged_step() {
        let mut b = ScenarioBuilder::new("t", 3, 3);
        b.axioms(&[Deduction::Pareto]);
        b.profile("P", &["a>b>c", "b>a>c", "a>c>b"]).unwrap();
        let model = Model::compile(&b.build().unwrap()).unwrap();
        let mut out = model.propagate();
        assert!(model.audit(&out).sound());
        out.trace[0].removed = out.trace[0].removed.union(CandidateSet::only(set("{a}")));
        assert!(!model.audit(&out).sound());
    }
}
