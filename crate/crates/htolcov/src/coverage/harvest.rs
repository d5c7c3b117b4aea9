//! Occurrence harvesting: match every atom of the normalized objectives
//! against every run, collecting the metavariable environments the
//! matches produce. Runs are executed, harvested and dropped one test at
//! a time, in parallel across tests.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::dnf::{Dnf, DnfAtom};
use crate::htl::{print_hyperlabel, Hyperlabel, Label, Sequence};
use crate::minilang::ast::*;
use crate::trace::{eval_expr, execute, holds, Env, EvalCtx, InputError, Run, TestDatum};

/// One match of an atom: which test produced it, the bindings it
/// captured, and the matched step indices (one per label of the atom).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub test_id: String,
    pub env: Env,
    pub steps: Vec<usize>,
}

/// Interns atoms structurally so that the same label or sequence,
/// appearing in any number of objectives, is matched against each run
/// once.
#[derive(Debug, Default)]
pub struct AtomIndex {
    pub atoms: Vec<DnfAtom>,
    keys: HashMap<String, usize>,
}

fn atom_key(a: &DnfAtom) -> String {
    match a {
        DnfAtom::Label(l) => print_hyperlabel(&Hyperlabel::Atom(l.clone())),
        DnfAtom::Seq(s) => print_hyperlabel(&Hyperlabel::Seq(s.clone())),
    }
}

impl AtomIndex {
    pub fn new() -> AtomIndex {
        AtomIndex::default()
    }

    pub fn intern(&mut self, atom: &DnfAtom) -> usize {
        let key = atom_key(atom);
        if let Some(&id) = self.keys.get(&key) {
            return id;
        }
        let id = self.atoms.len();
        self.atoms.push(atom.clone());
        self.keys.insert(key, id);
        id
    }

    /// Interns every atom of a normal form; returns per-disjunct atom ids.
    pub fn intern_dnf(&mut self, dnf: &Dnf) -> Vec<Vec<usize>> {
        dnf.disjuncts
            .iter()
            .map(|d| d.atoms.iter().map(|a| self.intern(a)).collect())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Occurrences per atom. With deduplication on, only the first occurrence
/// of each distinct environment is kept per atom; later ones cannot
/// change any verdict because consolidation looks at environments only.
#[derive(Debug)]
pub struct OccurrenceLog {
    per_atom: Vec<Vec<Occurrence>>,
    seen: Vec<HashSet<Env>>,
    dedup: bool,
}

impl OccurrenceLog {
    pub fn new(num_atoms: usize, dedup: bool) -> OccurrenceLog {
        OccurrenceLog {
            per_atom: vec![Vec::new(); num_atoms],
            seen: vec![HashSet::new(); num_atoms],
            dedup,
        }
    }

    pub fn record(&mut self, atom: usize, occ: Occurrence) {
        if self.dedup {
            if self.seen[atom].contains(&occ.env) {
                return;
            }
            self.seen[atom].insert(occ.env.clone());
        }
        self.per_atom[atom].push(occ);
    }

    /// True if recording this environment would be dropped as a duplicate.
    fn is_duplicate(&self, atom: usize, env: &Env) -> bool {
        self.dedup && self.seen[atom].contains(env)
    }

    /// Appends `other`'s occurrences; call in test order to keep results
    /// independent of harvesting parallelism.
    pub fn merge(&mut self, other: OccurrenceLog) {
        for (atom, occs) in other.per_atom.into_iter().enumerate() {
            for occ in occs {
                self.record(atom, occ);
            }
        }
    }

    pub fn occurrences(&self, atom: usize) -> &[Occurrence] {
        &self.per_atom[atom]
    }

    pub fn total(&self) -> usize {
        self.per_atom.iter().map(Vec::len).sum()
    }
}

/// Matches a label against one state: the predicate must hold and every
/// binding must evaluate. Any evaluation failure means no match.
pub fn match_label(p: &Program, label: &Label, state: &crate::trace::State) -> Option<Env> {
    let ctx = EvalCtx {
        state: Some(state),
        env: None,
        pc: Some(label.loc),
    };
    if !holds(p, &label.pred, &ctx) {
        return None;
    }
    let mut env = Env::new();
    for b in &label.bindings {
        env.insert(b.name.clone(), eval_expr(p, &b.expr, &ctx).ok()?);
    }
    Some(env)
}

/// A path predicate, precompiled where possible. Predicates that only
/// mention `pc`, location literals and constants are turned into a truth
/// table over locations, so intermediate steps cost one lookup.
enum PathPred {
    ByLoc(Vec<bool>),
    General,
}

fn compile_path_pred(p: &Program, e: &Expr) -> PathPred {
    fn pc_only(e: &Expr) -> bool {
        match e {
            Expr::IntLit(_) | Expr::BoolLit(_) | Expr::Pc | Expr::LocLit(_) => true,
            Expr::Un(_, inner) => pc_only(inner),
            Expr::Bin(_, l, r) => pc_only(l) && pc_only(r),
            Expr::Var(_) | Expr::Index(_, _) | Expr::Meta(_) => false,
        }
    }
    if !pc_only(e) {
        return PathPred::General;
    }
    let table = (1..=p.num_locations() as LocationId)
        .map(|loc| {
            holds(
                p,
                e,
                &EvalCtx {
                    state: None,
                    env: None,
                    pc: Some(loc),
                },
            )
        })
        .collect();
    PathPred::ByLoc(table)
}

struct Partial {
    next: usize,
    env: Env,
    steps: Vec<usize>,
}

fn sentinel() -> Vec<Partial> {
    vec![Partial {
        next: 0,
        env: Env::new(),
        steps: Vec::new(),
    }]
}

/// Feeds one step to a sequence's partial matches. Extending at a step
/// happens before the step is treated as intermediate, so a match step is
/// never subjected to the path predicate. Partial matches agreeing on
/// progress and environment are collapsed to the most recently extended
/// one; its intermediate constraint is a subset of the older one's, so no
/// match is lost.
fn advance_sequence(
    p: &Program,
    s: &Sequence,
    preds: &[PathPred],
    partials: &mut Vec<Partial>,
    k: usize,
    step: &crate::trace::Step,
    emit: &mut impl FnMut(Env, Vec<usize>),
) {
    // only the never-extended sentinel is alive: nothing to kill, and
    // nothing to extend unless the first label's location comes up
    if partials.len() == 1 && step.loc != s.labels[0].loc {
        return;
    }
    let n = s.labels.len();
    let mut spawned: Vec<Partial> = Vec::new();
    for pt in partials.iter() {
        let label = &s.labels[pt.next];
        if step.loc != label.loc {
            continue;
        }
        if let Some(bound) = match_label(p, label, &step.state) {
            let mut env = pt.env.clone();
            env.extend(bound);
            let mut steps = pt.steps.clone();
            steps.push(k);
            if pt.next + 1 == n {
                emit(env, steps);
            } else {
                spawned.push(Partial {
                    next: pt.next + 1,
                    env,
                    steps,
                });
            }
        }
    }
    // the step is intermediate for every partial still waiting
    partials.retain(|pt| {
        if pt.next == 0 {
            return true;
        }
        match &preds[pt.next - 1] {
            PathPred::ByLoc(table) => table[step.loc as usize - 1],
            PathPred::General => {
                let ctx = EvalCtx {
                    state: Some(&step.state),
                    env: Some(&pt.env),
                    pc: Some(step.loc),
                };
                holds(p, &s.path_preds[pt.next - 1], &ctx)
            }
        }
    });
    for sp in spawned {
        match partials
            .iter_mut()
            .find(|pt| pt.next == sp.next && pt.env == sp.env)
        {
            Some(existing) => *existing = sp,
            None => partials.push(sp),
        }
    }
}

/// Reports every distinct-environment match of a sequence in one run by
/// sweeping the steps once while growing partial matches.
pub fn match_sequence(
    p: &Program,
    s: &Sequence,
    run: &Run,
    mut emit: impl FnMut(Env, Vec<usize>),
) {
    let preds: Vec<PathPred> = s.path_preds.iter().map(|e| compile_path_pred(p, e)).collect();
    let mut partials = sentinel();
    for (k, step) in run.steps.iter().enumerate() {
        advance_sequence(p, s, &preds, &mut partials, k, step, &mut emit);
    }
}

struct SeqPlan {
    atom: usize,
    preds: Vec<PathPred>,
    /// Location of the first label; an idle sequence reacts to nothing
    /// else, so the dispatch loop skips it without a call.
    first_loc: LocationId,
    /// Whether any label binds a metavariable. A bindingless atom only
    /// ever produces the empty environment, so with deduplication on it
    /// can stop matching after its first occurrence in a run.
    has_bindings: bool,
}

/// Per-suite matching state shared across runs: labels grouped by
/// location, sequence predicates compiled once. A sequence only needs to
/// see a step when its location can extend some stage or falsify some
/// fully-tabled path predicate, so each sequence registers the locations
/// that can affect it; sequences with a stateful path predicate watch
/// every step.
pub struct HarvestPlan<'a> {
    atoms: &'a AtomIndex,
    /// Per location (1-based, minus one): (atom id, has bindings) of the
    /// plain labels there.
    labels_by_loc: Vec<Vec<(usize, bool)>>,
    seqs: Vec<SeqPlan>,
    /// Per location (1-based, minus one): indices into `seqs`.
    seq_dispatch: Vec<Vec<usize>>,
    /// Indices of sequences that must see every step.
    seq_always: Vec<usize>,
}

impl<'a> HarvestPlan<'a> {
    pub fn new(p: &Program, atoms: &'a AtomIndex) -> HarvestPlan<'a> {
        let mut labels_by_loc: Vec<Vec<(usize, bool)>> = vec![Vec::new(); p.num_locations()];
        let mut seqs: Vec<SeqPlan> = Vec::new();
        let mut seq_dispatch: Vec<Vec<usize>> = vec![Vec::new(); p.num_locations()];
        let mut seq_always: Vec<usize> = Vec::new();
        for (i, atom) in atoms.atoms.iter().enumerate() {
            match atom {
                DnfAtom::Label(l) => {
                    labels_by_loc[l.loc as usize - 1].push((i, !l.bindings.is_empty()))
                }
                DnfAtom::Seq(s) => {
                    let preds: Vec<PathPred> =
                        s.path_preds.iter().map(|e| compile_path_pred(p, e)).collect();
                    let si = seqs.len();
                    if preds.iter().any(|pp| matches!(pp, PathPred::General)) {
                        seq_always.push(si);
                    } else {
                        let mut watched: Vec<bool> = vec![false; p.num_locations()];
                        for l in &s.labels {
                            watched[l.loc as usize - 1] = true;
                        }
                        for pp in &preds {
                            let PathPred::ByLoc(table) = pp else { unreachable!() };
                            for (j, ok) in table.iter().enumerate() {
                                if !ok {
                                    watched[j] = true;
                                }
                            }
                        }
                        for (j, w) in watched.into_iter().enumerate() {
                            if w {
                                seq_dispatch[j].push(si);
                            }
                        }
                    }
                    seqs.push(SeqPlan {
                        atom: i,
                        preds,
                        first_loc: s.labels[0].loc,
                        has_bindings: s.labels.iter().any(|l| !l.bindings.is_empty()),
                    });
                }
            }
        }
        HarvestPlan {
            atoms,
            labels_by_loc,
            seqs,
            seq_dispatch,
            seq_always,
        }
    }
}

/// Reusable per-worker matching state, so harvesting a run allocates
/// nothing up front.
pub struct HarvestScratch {
    states: Vec<Vec<Partial>>,
    label_done: Vec<bool>,
    seq_done: Vec<bool>,
}

impl HarvestScratch {
    pub fn new(plan: &HarvestPlan<'_>) -> HarvestScratch {
        HarvestScratch {
            states: plan.seqs.iter().map(|_| sentinel()).collect(),
            label_done: vec![false; plan.atoms.len()],
            seq_done: vec![false; plan.seqs.len()],
        }
    }

    /// Resets for the next run. Sequences never span runs; a bindingless
    /// atom that already has an occurrence in `log` stays retired, since
    /// any new occurrence would be dropped as a duplicate.
    fn reset(&mut self, plan: &HarvestPlan<'_>, log: &OccurrenceLog) {
        for st in &mut self.states {
            st.clear();
            st.push(Partial {
                next: 0,
                env: Env::new(),
                steps: Vec::new(),
            });
        }
        for ids in &plan.labels_by_loc {
            for &(i, has_bindings) in ids {
                self.label_done[i] =
                    log.dedup && !has_bindings && !log.per_atom[i].is_empty();
            }
        }
        for (done, sp) in self.seq_done.iter_mut().zip(&plan.seqs) {
            *done = log.dedup && !sp.has_bindings && !log.per_atom[sp.atom].is_empty();
        }
    }
}

/// Harvests one run into `log` in a single pass over its steps. With
/// deduplication on, a bindingless atom is retired after its first
/// occurrence: every later match would produce the same empty
/// environment and be dropped anyway.
pub fn harvest_run(p: &Program, plan: &HarvestPlan<'_>, run: &Run, log: &mut OccurrenceLog) {
    let mut scratch = HarvestScratch::new(plan);
    harvest_run_reusing(p, plan, run, log, &mut scratch);
}

/// [`harvest_run`] with caller-owned scratch state.
pub fn harvest_run_reusing(
    p: &Program,
    plan: &HarvestPlan<'_>,
    run: &Run,
    log: &mut OccurrenceLog,
    scratch: &mut HarvestScratch,
) {
    scratch.reset(plan, log);
    let HarvestScratch {
        states,
        label_done,
        seq_done,
    } = scratch;
    for (k, step) in run.steps.iter().enumerate() {
        {
            let ids = &plan.labels_by_loc[step.loc as usize - 1];
            for &(i, has_bindings) in ids {
                if label_done[i] {
                    continue;
                }
                let DnfAtom::Label(label) = &plan.atoms.atoms[i] else {
                    unreachable!()
                };
                if let Some(env) = match_label(p, label, &step.state) {
                    if !has_bindings && log.dedup {
                        label_done[i] = true;
                    }
                    if !log.is_duplicate(i, &env) {
                        log.record(
                            i,
                            Occurrence {
                                test_id: run.test_id.clone(),
                                env,
                                steps: vec![k],
                            },
                        );
                    }
                }
            }
        }
        let relevant = plan.seq_dispatch[step.loc as usize - 1]
            .iter()
            .chain(&plan.seq_always);
        for &si in relevant {
            if seq_done[si] {
                continue;
            }
            let sp = &plan.seqs[si];
            if states[si].len() == 1 && step.loc != sp.first_loc {
                continue;
            }
            let DnfAtom::Seq(s) = &plan.atoms.atoms[sp.atom] else {
                unreachable!()
            };
            let mut emitted = false;
            advance_sequence(p, s, &sp.preds, &mut states[si], k, step, &mut |env, steps| {
                emitted = true;
                if !log.is_duplicate(sp.atom, &env) {
                    log.record(
                        sp.atom,
                        Occurrence {
                            test_id: run.test_id.clone(),
                            env,
                            steps,
                        },
                    );
                }
            });
            if emitted && !sp.has_bindings && log.dedup {
                seq_done[si] = true;
            }
        }
    }
}

/// Executes and harvests the whole suite, one run in memory per worker.
/// Merging in test order makes the result deterministic.
pub fn harvest_suite(
    p: &Program,
    atoms: &AtomIndex,
    tests: &[TestDatum],
    step_limit: usize,
    dedup: bool,
) -> Result<OccurrenceLog, InputError> {
    let plan = HarvestPlan::new(p, atoms);
    // chunking amortizes log and scratch allocations over many runs and
    // lets retired atoms stay retired across the runs of a chunk
    let chunk = (tests.len() / (4 * rayon::current_num_threads())).clamp(1, 64);
    let logs: Result<Vec<OccurrenceLog>, InputError> = tests
        .par_chunks(chunk)
        .map(|ts| {
            let mut log = OccurrenceLog::new(atoms.len(), dedup);
            let mut scratch = HarvestScratch::new(&plan);
            for t in ts {
                let run = execute(p, t, step_limit)?;
                harvest_run_reusing(p, &plan, &run, &mut log, &mut scratch);
            }
            Ok(log)
        })
        .collect();
    let mut merged = OccurrenceLog::new(atoms.len(), dedup);
    for log in logs? {
        merged.merge(log);
    }
    Ok(merged)
}
