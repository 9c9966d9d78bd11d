//! Generators and brute-force oracles shared by the property suite and the
//! acceptance harness. The oracles re-state each rule directly over the
//! proposition tree and never call the engine's own helpers.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use emphase_core::emphasis::parse_case_table;
use emphase_core::roles::RoleRuleTable;
use emphase_core::scheme::{parse_binding, Argument, Coref, Proposition};
use emphase_core::spl::Filler;
use emphase_core::{
    Binding, BlockingSet, Case, CaseTable, EmphasisAssignment, FieldDefinition, NodePath,
    ObliqueTable, Polarity, Realized, Role, Scheme, SplTerm, Variable,
};

pub const LABELS: [&str; 7] = ["agens", "source", "goal", "to-obj", "from-obj", "locat", "obj"];
pub const BASIC: [&str; 2] = ["have", "at"];
pub const MODIFYING: [&str; 2] = ["cause", "bec"];
pub const MAX_NODES: usize = 8;
pub const MAX_DEPTH: usize = 4;

/// Deterministic choices drawn from a proptest-generated vector.
pub struct Draw {
    seq: Vec<u32>,
    i: usize,
}

impl Draw {
    pub fn new(seq: Vec<u32>) -> Self {
        assert!(!seq.is_empty());
        Draw { seq, i: 0 }
    }

    pub fn pick(&mut self, n: usize) -> usize {
        let v = self.seq[self.i % self.seq.len()].rotate_left((self.i / self.seq.len()) as u32);
        self.i += 1;
        v as usize % n
    }

    pub fn coin(&mut self) -> bool {
        self.pick(2) == 0
    }
}

/// Rule data in plain maps so the oracle can read it without the engine.
#[derive(Debug, Clone)]
pub struct RuleSpec {
    pub initial: HashMap<(String, usize), Role>,
    pub modifiers: HashMap<(String, Polarity, Role), Role>,
    pub flips: BTreeSet<String>,
    pub transparent: BTreeSet<String>,
}

impl RuleSpec {
    pub fn table(&self) -> RoleRuleTable {
        let mut t = RoleRuleTable::new();
        for ((p, i), r) in &self.initial {
            t = t.with_initial(p, *i, r.clone());
        }
        for ((p, pol, from), to) in &self.modifiers {
            t = t.with_modifier(p, *pol, from.clone(), to.clone());
        }
        for p in &self.flips {
            t = t.with_flip(p);
        }
        for p in &self.transparent {
            t = t.with_transparent(p);
        }
        t
    }

    pub fn universe() -> Vec<Role> {
        BASIC
            .iter()
            .flat_map(|a| LABELS.iter().map(move |l| Role::new(*l, *a)))
            .collect()
    }
}

/// One generated case: a field with a total rule table, an oblique table and
/// a binding over a small referent pool.
#[derive(Debug, Clone)]
pub struct Case8 {
    pub field: FieldDefinition,
    pub rules: RuleSpec,
    pub oblique: ObliqueTable,
    pub oblique_map: HashMap<Role, (String, Case)>,
    pub binding: Binding,
    pub spl: SplTerm,
    pub wrap_at: NodePath,
}

pub fn default_cases() -> CaseTable {
    parse_case_table(emphase_core::shipped::CASES).unwrap()
}

fn gen_prop(d: &mut Draw, levels: usize, budget: &mut usize, next_var: &mut usize) -> Proposition {
    *budget -= 1;
    if levels == 1 || *budget == 0 || d.pick(5) == 0 {
        let pred = BASIC[d.pick(BASIC.len())];
        let arity = 1 + d.pick(2);
        let names: Vec<String> = (0..arity)
            .map(|_| {
                *next_var += 1;
                format!("v{next_var}")
            })
            .collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        return Proposition::basic(pred, &refs);
    }
    let (pred, max) = [("cause", 2), ("bec", 1), ("et", 2), ("not", 1)][d.pick(4)];
    let n = (1 + d.pick(max)).min(*budget);
    let mut kids = Vec::new();
    for i in 0..n {
        let reserve = n - i - 1;
        let mut sub = *budget - reserve;
        let before = sub;
        kids.push(gen_prop(d, levels - 1, &mut sub, next_var));
        *budget -= before - sub;
    }
    Proposition::compound(pred, kids)
}

/// Every proposition path, found by walking the argument lists directly.
pub fn all_paths(p: &Proposition) -> Vec<NodePath> {
    fn walk(p: &Proposition, steps: Vec<usize>, out: &mut Vec<NodePath>) {
        out.push(NodePath::new(steps.clone()));
        for (i, a) in p.args.iter().enumerate() {
            if let Argument::Prop(c) = a {
                let mut s = steps.clone();
                s.push(i + 1);
                walk(c, s, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(p, Vec::new(), &mut out);
    out
}

pub fn related(a: &NodePath, b: &NodePath) -> bool {
    let (x, y) = (a.steps(), b.steps());
    x.starts_with(y) || y.starts_with(x)
}

pub fn generate(seq: Vec<u32>) -> Case8 {
    let mut d = Draw::new(seq);
    let mut budget = MAX_NODES;
    let mut next_var = 0;
    let root = gen_prop(&mut d, MAX_DEPTH, &mut budget, &mut next_var);
    let scheme = Scheme::new(root).expect("generated scheme is valid");
    assert!(scheme.depth() <= MAX_DEPTH && scheme.nodes().len() <= MAX_NODES);

    let paths = all_paths(scheme.root());
    let start = paths[d.pick(paths.len())].clone();
    let optional_branches = if d.pick(3) == 0 {
        let mut chosen: Vec<NodePath> = Vec::new();
        for p in &paths {
            if !related(p, &start) && chosen.iter().all(|c| !related(c, p)) && d.coin() {
                chosen.push(p.clone());
            }
        }
        Some(chosen)
    } else {
        None
    };

    let vars = scheme.variables();
    let mut coref = Vec::new();
    for _ in 0..d.pick(4) {
        let kind = d.pick(3);
        let mut v = || vars[d.pick(vars.len())].clone();
        let c = match kind {
            0 => Coref::Equal(v(), v()),
            1 => Coref::Distinct(v(), v()),
            _ => Coref::OneOf(vec![(v(), v()), (v(), v())]),
        };
        coref.push(c);
    }

    let field = FieldDefinition {
        name: format!("field-{}", d.pick(100)),
        scheme,
        emphasis_start: start,
        optional_branches,
        coref,
    };

    let mut rules = RuleSpec {
        initial: HashMap::new(),
        modifiers: HashMap::new(),
        flips: ["not".to_string()].into(),
        transparent: ["et".to_string()].into(),
    };
    for p in BASIC {
        for i in 1..=2 {
            rules
                .initial
                .insert((p.into(), i), Role::new(LABELS[d.pick(LABELS.len())], p));
        }
    }
    for m in MODIFYING {
        for pol in [Polarity::Pos, Polarity::Neg] {
            for r in RuleSpec::universe() {
                let to = Role::new(LABELS[d.pick(LABELS.len())], r.anchor.clone());
                rules.modifiers.insert((m.into(), pol, r), to);
            }
        }
    }

    let mut oblique = ObliqueTable::new();
    let mut oblique_map = HashMap::new();
    for r in RuleSpec::universe() {
        if d.coin() {
            let prep = ["an", "von", "zu"][d.pick(3)];
            let case = [Case::Dative, Case::Accusative][d.pick(2)];
            oblique = oblique.with(r.clone(), prep, case);
            oblique_map.insert(r, (prep.to_string(), case));
        }
    }

    let mut binding = Binding::new();
    for v in &vars {
        binding = binding.with(v.name(), ["r1", "r2", "r3"][d.pick(3)], "thing");
    }

    let spl = gen_spl(&mut d, 2);
    let wrap_at = paths[d.pick(paths.len())].clone();
    Case8 {
        field,
        rules,
        oblique,
        oblique_map,
        binding,
        spl,
        wrap_at,
    }
}

fn gen_spl(d: &mut Draw, depth: usize) -> SplTerm {
    let ids = ["send", "he", "him", "x1", "invitation"];
    let types = ["directed-action", "person", "object", "process"];
    let keys = ["actor", "recipient", "actee", "emphasis-q", "tense"];
    let mut t = SplTerm::new(ids[d.pick(ids.len())], types[d.pick(types.len())]);
    for _ in 0..d.pick(4) {
        let filler = if depth > 0 && d.coin() {
            Filler::Term(gen_spl(d, depth - 1))
        } else {
            Filler::Value(["emphatic", "nonemphatic", "present", "x-2"][d.pick(4)].into())
        };
        t.slots.push((keys[d.pick(keys.len())].into(), filler));
    }
    t
}

/// Replaces the node at `path` with `f(node)`.
pub fn rewrite_at(p: &Proposition, steps: &[usize], f: &dyn Fn(Proposition) -> Proposition) -> Proposition {
    match steps.split_first() {
        None => f(p.clone()),
        Some((&i, rest)) => {
            let mut out = p.clone();
            match &mut out.args[i - 1] {
                Argument::Prop(c) => *c = rewrite_at(c, rest, f),
                Argument::Var(_) => panic!("path runs into a variable"),
            }
            out
        }
    }
}

// ---------------------------------------------------------------- oracles

/// Variables with their argument position and the predicates enclosing them,
/// innermost first.
fn variable_contexts(root: &Proposition) -> Vec<(Variable, String, usize, Vec<String>)> {
    fn walk(p: &Proposition, above: &[String], out: &mut Vec<(Variable, String, usize, Vec<String>)>) {
        for (i, a) in p.args.iter().enumerate() {
            match a {
                Argument::Var(v) => {
                    let mut chain: Vec<String> = above.to_vec();
                    chain.reverse();
                    out.push((v.clone(), p.predicate.clone(), i + 1, chain));
                }
                Argument::Prop(c) => {
                    let mut next = above.to_vec();
                    next.push(p.predicate.clone());
                    walk(c, &next, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(root, &[], &mut out);
    out
}

/// Case frame by folding each variable's enclosing predicates bottom-up.
pub fn frame_oracle(root: &Proposition, rules: &RuleSpec) -> Option<Vec<(Variable, Role)>> {
    variable_contexts(root)
        .into_iter()
        .map(|(v, owner, pos, chain)| {
            let mut role = rules.initial.get(&(owner, pos))?.clone();
            let mut pol = Polarity::Pos;
            for pred in chain {
                if rules.transparent.contains(&pred) {
                    continue;
                }
                if rules.flips.contains(&pred) {
                    pol = pol.flipped();
                    continue;
                }
                role = rules.modifiers.get(&(pred, pol, role))?.clone();
            }
            Some((v, role))
        })
        .collect()
}

fn node<'a>(root: &'a Proposition, path: &NodePath) -> &'a Proposition {
    let mut cur = root;
    for &s in path.steps() {
        match &cur.args[s - 1] {
            Argument::Prop(p) => cur = p,
            Argument::Var(_) => panic!("bad path"),
        }
    }
    cur
}

fn child_paths(root: &Proposition, path: &NodePath) -> Vec<NodePath> {
    node(root, path)
        .args
        .iter()
        .enumerate()
        .filter(|(_, a)| matches!(a, Argument::Prop(_)))
        .map(|(i, _)| {
            let mut s = path.steps().to_vec();
            s.push(i + 1);
            NodePath::new(s)
        })
        .collect()
}

pub fn optional_oracle(field: &FieldDefinition) -> Vec<NodePath> {
    if let Some(explicit) = &field.optional_branches {
        return explicit.clone();
    }
    let steps = field.emphasis_start.steps();
    if steps.is_empty() {
        return Vec::new();
    }
    let parent = NodePath::new(steps[..steps.len() - 1].to_vec());
    child_paths(field.scheme.root(), &parent)
        .into_iter()
        .filter(|p| *p != field.emphasis_start)
        .collect()
}

/// Every subset of propositions satisfying the distribution invariants.
pub fn emphasis_oracle(field: &FieldDefinition) -> Vec<EmphasisAssignment> {
    let root = field.scheme.root();
    let paths = all_paths(root);
    let optional = optional_oracle(field);
    assert!(paths.len() <= 16);
    let mut out = Vec::new();
    for mask in 0u32..(1 << paths.len()) {
        let set: BTreeSet<NodePath> = paths
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .collect();
        if !set.contains(&field.emphasis_start) {
            continue;
        }
        let ok = set.iter().all(|p| {
            let anchored = *p == field.emphasis_start
                || optional.contains(p)
                || (!p.steps().is_empty()
                    && set.contains(&NodePath::new(p.steps()[..p.steps().len() - 1].to_vec())));
            let kids = child_paths(root, p);
            let distributed = kids.is_empty() || kids.iter().filter(|k| set.contains(k)).count() == 1;
            anchored && distributed
        });
        if ok {
            out.push(EmphasisAssignment::new(set));
        }
    }
    out.sort();
    out
}

pub type FormKey = (EmphasisAssignment, BlockingSet, Vec<(Variable, Realized)>);

/// All forms over the powerset of emphasis assignments and blocking sets,
/// plus the number of pairs that pass blocking but have no case assignment.
pub fn forms_oracle(
    field: &FieldDefinition,
    rules: &RuleSpec,
    cases: &CaseTable,
    oblique: &HashMap<Role, (String, Case)>,
) -> (Vec<FormKey>, usize) {
    let root = field.scheme.root();
    let frame = frame_oracle(root, rules).expect("total rules");
    let owners: HashMap<Variable, NodePath> = all_paths(root)
        .into_iter()
        .flat_map(|p| {
            node(root, &p)
                .args
                .iter()
                .filter_map(|a| match a {
                    Argument::Var(v) => Some((v.clone(), p.clone())),
                    Argument::Prop(_) => None,
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let vars: Vec<Variable> = frame.iter().map(|(v, _)| v.clone()).collect();

    let mut forms = Vec::new();
    let mut skipped = 0;
    for e in emphasis_oracle(field) {
        for mask in 0u32..(1 << vars.len()) {
            let blocked: BTreeSet<Variable> = vars
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| v.clone())
                .collect();
            let emphatic = |v: &Variable| e.contains(&owners[v]);
            let rule_ok = e.paths().all(|p| {
                let n = node(root, p);
                let basic_vars: Vec<&Variable> = n
                    .args
                    .iter()
                    .filter_map(|a| match a {
                        Argument::Var(v) => Some(v),
                        Argument::Prop(_) => None,
                    })
                    .collect();
                basic_vars.is_empty() || basic_vars.iter().any(|v| !blocked.contains(*v))
            });
            if !rule_ok {
                continue;
            }
            let subject = cases.nominative_order.iter().find_map(|label| {
                frame
                    .iter()
                    .find(|(v, r)| &r.label == label && emphatic(v) && !blocked.contains(v))
                    .map(|(v, _)| v.clone())
            });
            let Some(subject) = subject else {
                skipped += 1;
                continue;
            };
            let realization: Option<Vec<(Variable, Realized)>> = frame
                .iter()
                .map(|(v, r)| {
                    let x = if blocked.contains(v) {
                        Realized::Blocked
                    } else if *v == subject {
                        Realized::Direct(Case::Nominative)
                    } else if emphatic(v) {
                        let has = |l: &Vec<String>| l.contains(&r.label);
                        Realized::Direct(if has(&cases.dative) {
                            Case::Dative
                        } else if has(&cases.accusative) {
                            Case::Accusative
                        } else if has(&cases.genitive) {
                            Case::Genitive
                        } else {
                            return None;
                        })
                    } else {
                        let (preposition, case) = oblique.get(r)?.clone();
                        Realized::Oblique { preposition, case }
                    };
                    Some((v.clone(), x))
                })
                .collect();
            match realization {
                Some(r) => forms.push((e.clone(), BlockingSet::new(blocked), r)),
                None => skipped += 1,
            }
        }
    }
    forms.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    (forms, skipped)
}

/// Direct reading of coverage and coreference constraints.
pub fn binding_oracle(field: &FieldDefinition, binding: &Binding) -> bool {
    let vars = field.scheme.variables();
    let name = |v: &Variable| binding.get(v).map(|r| r.name.clone());
    if vars.iter().any(|v| name(v).is_none()) || binding.iter().any(|(v, _)| !vars.contains(v)) {
        return false;
    }
    field.coref.iter().all(|c| match c {
        Coref::Equal(v, w) => name(v) == name(w),
        Coref::Distinct(v, w) => name(v) != name(w),
        Coref::OneOf(alts) => alts.iter().any(|(v, w)| name(v) == name(w)),
    })
}

// ---------------------------------------------------------------- checks

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn frame_of(scheme: &Scheme, rules: &RuleSpec) -> Result<Vec<(Variable, Role)>, String> {
    emphase_core::derive_case_frame(scheme, &rules.table())
        .map(|f| f.iter().map(|(v, r)| (v.clone(), r.clone())).collect())
        .map_err(|e| e.to_string())
}

/// Engine frame equals the path-fold oracle, and a total table has no gaps.
pub fn check_frame(c: &Case8) -> Result<(), String> {
    let scheme = &c.field.scheme;
    let got = frame_of(scheme, &c.rules)?;
    let want = frame_oracle(scheme.root(), &c.rules).ok_or("oracle found a gap")?;
    ensure!(got == want, "frame {got:?} != oracle {want:?} for {scheme}");
    let gaps = emphase_core::roles::coverage_gaps(scheme, &c.rules.table());
    ensure!(gaps.is_empty(), "total table reported gaps {gaps:?}");
    Ok(())
}

/// `et` is the identity on roles and wrapping any node in it changes nothing.
pub fn check_et_identity(c: &Case8) -> Result<(), String> {
    let table = c.rules.table();
    for r in RuleSpec::universe() {
        for pol in [Polarity::Pos, Polarity::Neg] {
            let out = emphase_core::apply_rule(&table, "et", &r, pol).map_err(|e| e.to_string())?;
            ensure!(out == r, "et maps {r} to {out}");
        }
    }
    let root = c.field.scheme.root();
    let wrapped = rewrite_at(root, c.wrap_at.steps(), &|p| Proposition::compound("et", vec![p]));
    let wrapped = Scheme::new(wrapped).map_err(|e| e.to_string())?;
    ensure!(
        frame_of(&wrapped, &c.rules)? == frame_of(&c.field.scheme, &c.rules)?,
        "et wrapper at {} changed the frame",
        c.wrap_at
    );
    Ok(())
}

/// Double negation is invisible to role derivation; single negation agrees
/// with the oracle.
pub fn check_not_involution(c: &Case8) -> Result<(), String> {
    for pol in [Polarity::Pos, Polarity::Neg] {
        ensure!(pol.flipped().flipped() == pol, "flip is not an involution");
    }
    let root = c.field.scheme.root();
    let twice = rewrite_at(root, c.wrap_at.steps(), &|p| {
        Proposition::compound("not", vec![Proposition::compound("not", vec![p])])
    });
    let twice = Scheme::new(twice).map_err(|e| e.to_string())?;
    ensure!(
        frame_of(&twice, &c.rules)? == frame_of(&c.field.scheme, &c.rules)?,
        "not(not(.)) at {} changed the frame",
        c.wrap_at
    );
    let once = rewrite_at(root, c.wrap_at.steps(), &|p| Proposition::compound("not", vec![p]));
    let once = Scheme::new(once).map_err(|e| e.to_string())?;
    let want = frame_oracle(once.root(), &c.rules).ok_or("oracle found a gap")?;
    ensure!(frame_of(&once, &c.rules)? == want, "single not disagrees with oracle");
    Ok(())
}

/// Enumeration equals the powerset filter and each assignment is a chain
/// from the start (or an optional branch) down to a basic proposition.
pub fn check_emphasis(c: &Case8) -> Result<(), String> {
    let field = &c.field;
    let got = emphase_core::enumerate_emphasis(field);
    let want = emphasis_oracle(field);
    ensure!(got == want, "emphasis {got:?} != oracle {want:?}");
    ensure!(!got.is_empty(), "no emphasis assignment for {}", field.scheme);
    let paths = all_paths(field.scheme.root());
    for mask in 0u32..(1 << paths.len()) {
        let e = EmphasisAssignment::new(
            paths.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| p.clone()),
        );
        let accepted = emphase_core::emphasis::validate_emphasis(field, &e).is_ok();
        ensure!(accepted == want.contains(&e), "validate_emphasis({e}) = {accepted}");
    }
    let root = field.scheme.root();
    let optional = optional_oracle(field);
    for e in &got {
        emphase_core::emphasis::validate_emphasis(field, e).map_err(|v| v.to_string())?;
        ensure!(e.contains(&field.emphasis_start), "start missing in {e}");
        let heads: Vec<&NodePath> = e
            .paths()
            .filter(|p| {
                let s = p.steps();
                s.is_empty() || !e.contains(&NodePath::new(s[..s.len() - 1].to_vec()))
            })
            .collect();
        for h in &heads {
            ensure!(
                **h == field.emphasis_start || optional.contains(h),
                "{h} starts a chain in {e}"
            );
        }
        let leaves = e.paths().filter(|p| node(root, p).args.iter().all(|a| matches!(a, Argument::Var(_))));
        ensure!(leaves.count() == heads.len(), "{e} has a chain not ending in a basic proposition");
    }
    Ok(())
}

/// The atlas equals its brute-force oracle; every form has one nominative
/// and keeps a verbalized role on each emphatic basic proposition.
pub fn check_forms(c: &Case8) -> Result<(), String> {
    let cases = default_cases();
    let atlas = emphase_core::enumerate_semantic_forms(&c.field, &c.rules.table(), &cases, &c.oblique)
        .map_err(|e| e.to_string())?;
    let got: Vec<FormKey> = atlas
        .forms
        .iter()
        .map(|f| {
            (
                f.emphasis.clone(),
                f.blocking.clone(),
                f.realization.iter().map(|(v, r)| (v.clone(), r.clone())).collect(),
            )
        })
        .collect();
    let (want, skipped) = forms_oracle(&c.field, &c.rules, &cases, &c.oblique_map);
    ensure!(got == want, "atlas differs from oracle ({} vs {} forms)", got.len(), want.len());
    ensure!(atlas.skipped == skipped, "skipped {} != oracle {skipped}", atlas.skipped);

    let root = c.field.scheme.root();
    for f in &atlas.forms {
        let nominatives = f.realization.with_case(Case::Nominative).count();
        ensure!(nominatives == 1, "{} nominatives in {}", nominatives, f.to_sexp());
        for p in f.emphasis.paths() {
            let n = node(root, p);
            let vars: Vec<&Variable> = n
                .args
                .iter()
                .filter_map(|a| match a {
                    Argument::Var(v) => Some(v),
                    Argument::Prop(_) => None,
                })
                .collect();
            ensure!(
                vars.is_empty() || vars.iter().any(|v| !f.is_blocked(v)),
                "emphatic {p} fully blocked in {}",
                f.to_sexp()
            );
        }
        for (v, r) in f.realization.iter() {
            let direct = matches!(r, Realized::Direct(_));
            ensure!(
                (*r == Realized::Blocked) == f.is_blocked(v),
                "blocking mismatch for {v}"
            );
            ensure!(!direct || f.is_emphatic(v), "non-emphatic {v} has direct case");
        }
    }
    Ok(())
}

/// Field, path, binding and SPL texts read back to equal values.
pub fn check_roundtrips(c: &Case8) -> Result<(), String> {
    let printed = emphase_core::print_field(&c.field);
    let back = emphase_core::parse_field(&printed).map_err(|e| format!("{e} in {printed}"))?;
    ensure!(back == c.field, "field round trip changed {printed}");
    ensure!(emphase_core::print_field(&back) == printed, "printing is not stable");

    let scheme = &c.field.scheme;
    for (path, n) in scheme.nodes() {
        ensure!(scheme.node(&path) == Some(n), "{path} does not resolve");
        let text = path.to_sexp().to_string();
        let re = NodePath::from_sexp(&emphase_core::sexpr::read_one(&text).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure!(re == path, "path {text} read back as {re}");
        ensure!(
            scheme.node(&path.child(n.args.len() + 1)).is_none(),
            "out-of-range child of {path} resolved"
        );
    }
    for (p, _) in all_paths(scheme.root()).iter().zip(scheme.nodes()) {
        ensure!(scheme.node(p).is_some(), "oracle path {p} does not resolve");
    }

    let btext = c.binding.to_sexp().to_string();
    let b = parse_binding(&btext).map_err(|e| e.to_string())?;
    ensure!(b == c.binding, "binding round trip changed {btext}");

    let text = emphase_core::serialize_spl(&c.spl);
    let spl = emphase_core::read_spl(&text).map_err(|e| format!("{e} in {text}"))?;
    ensure!(spl == c.spl, "SPL round trip changed {text}");
    ensure!(!text.contains('\n'), "SPL spans lines");
    Ok(())
}

/// Validation agrees with the direct reading, and dropping constraints never
/// adds violations.
pub fn check_binding(c: &Case8) -> Result<(), String> {
    let field = &c.field;
    let verdict = emphase_core::validate_binding(field, &c.binding);
    ensure!(
        verdict.is_ok() == binding_oracle(field, &c.binding),
        "validate_binding disagrees with oracle: {verdict:?}"
    );
    let full = verdict.err().unwrap_or_default();
    for k in 0..field.coref.len() {
        let mut fewer = field.clone();
        fewer.coref.truncate(k);
        let part = emphase_core::validate_binding(&fewer, &c.binding).err().unwrap_or_default();
        ensure!(part.iter().all(|v| full.contains(v)), "fewer constraints, new violation");
    }
    if let Some(v) = field.scheme.variables().first() {
        let mut partial = Binding::new();
        for (w, r) in c.binding.iter().filter(|(w, _)| *w != v) {
            partial.insert(w.clone(), r.clone());
        }
        ensure!(
            emphase_core::validate_binding(field, &partial).is_err(),
            "binding without {v} accepted"
        );
    }
    Ok(())
}

pub type Check = fn(&Case8) -> Result<(), String>;

pub const CHECKS: [(&str, Check); 8] = [
    ("case frame", check_frame),
    ("et identity", check_et_identity),
    ("not involution", check_not_involution),
    ("emphasis chains", check_emphasis),
    ("semantic forms", check_forms),
    ("round trips", check_roundtrips),
    ("binding constraints", check_binding),
    ("generator bounds", check_bounds),
];

pub fn check_bounds(c: &Case8) -> Result<(), String> {
    let s = &c.field.scheme;
    ensure!(s.depth() <= MAX_DEPTH, "depth {}", s.depth());
    ensure!(s.nodes().len() <= MAX_NODES, "{} nodes", s.nodes().len());
    Ok(())
}
