//! Small models from large ones: court, fresh copies E/F/G, witness live
//! parts by four cases, and completion by copying tables.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::normal_form::NormalForm;
use crate::solver::{court_bound_for_size, paper_bound};
use crate::structures::{for_each_tuple, onto_shapes, Compiled, OneType, Shape, Structure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompressError {
    #[error("vocabulary mismatch: {0}")]
    Vocabulary(String),
    #[error("not a model: element {element} has no witness for existential conjunct {conjunct}")]
    MissingWitness { conjunct: usize, element: usize },
    #[error("not a model: universal conjunct {conjunct} fails on {tuple:?}")]
    UniversalFails { conjunct: usize, tuple: Vec<usize> },
    #[error("table of {set:?} written twice with different contents ({first}, then {second})")]
    Conflict {
        set: Vec<usize>,
        first: String,
        second: String,
    },
    #[error("internal: {0}")]
    Internal(String),
}

/// The substructure on `center` and `tuple` for an existential conjunct,
/// with the elements at live positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessStructure {
    pub conjunct: usize,
    pub center: usize,
    pub tuple: Vec<usize>,
    /// Sorted, without repetitions.
    pub live_part: Vec<usize>,
    pub free: bool,
}

impl WitnessStructure {
    pub fn elements(&self) -> BTreeSet<usize> {
        std::iter::once(self.center).chain(self.tuple.iter().copied()).collect()
    }
}

/// Compiled existential matrices of a normal form, with live positions.
struct Demands {
    matrices: Vec<Compiled>,
    live_positions: Vec<Vec<usize>>,
    widths: Vec<usize>,
}

impl Demands {
    fn new(nf: &NormalForm) -> Demands {
        let mut matrices = Vec::new();
        let mut live_positions = Vec::new();
        let mut widths = Vec::new();
        for c in &nf.exist {
            let vars = c.all_vars();
            matrices.push(Compiled::new(&c.matrix, &nf.vocab, &vars).expect("compiles"));
            live_positions.push(
                vars.iter()
                    .enumerate()
                    .filter(|(_, v)| c.live.contains(v))
                    .map(|(i, _)| i)
                    .collect(),
            );
            widths.push(c.ys.len());
        }
        Demands {
            matrices,
            live_positions,
            widths,
        }
    }

    fn make(&self, i: usize, full: &[usize]) -> WitnessStructure {
        let live: BTreeSet<usize> = self.live_positions[i].iter().map(|&p| full[p]).collect();
        WitnessStructure {
            conjunct: i,
            center: full[0],
            tuple: full[1..].to_vec(),
            free: !live.contains(&full[0]),
            live_part: live.into_iter().collect(),
        }
    }

    /// Lexicographically first witness for `a`, optionally only free ones.
    fn first(&self, a: &Structure, i: usize, center: usize, free_only: bool) -> Option<WitnessStructure> {
        let m = &self.matrices[i];
        let mut env = m.env(&vec![center; self.widths[i] + 1]);
        let mut found = None;
        for_each_tuple(a.size(), self.widths[i], |t| {
            if found.is_some() {
                return;
            }
            env[1..t.len() + 1].copy_from_slice(t);
            if m.eval_in(a, &mut env) == crate::structures::Tv::True {
                let mut full = vec![center];
                full.extend_from_slice(t);
                let w = self.make(i, &full);
                if !free_only || w.free {
                    found = Some(w);
                }
            }
        });
        found
    }
}

/// Elements whose 1-type is realized at most `n − 1` times, and those types.
pub fn find_kings(a: &Structure, n: usize) -> (BTreeSet<usize>, BTreeSet<OneType>) {
    let mut realizations: BTreeMap<OneType, Vec<usize>> = BTreeMap::new();
    for e in 0..a.size() {
        realizations.entry(a.one_type(e)).or_default().push(e);
    }
    let mut kings = BTreeSet::new();
    let mut royal = BTreeSet::new();
    for (t, es) in realizations {
        if es.len() < n {
            kings.extend(es);
            royal.insert(t);
        }
    }
    (kings, royal)
}

#[derive(Clone, Debug)]
pub struct Court {
    pub width: usize,
    pub kings: BTreeSet<usize>,
    pub royal_types: BTreeSet<OneType>,
    /// Elements of the chosen free live parts.
    pub d: BTreeSet<usize>,
    /// The free witness structure chosen for (type, conjunct).
    pub donors: BTreeMap<(OneType, usize), WitnessStructure>,
    /// `C_{a,i}` for every `a ∈ K ∪ D`.
    pub witnesses: BTreeMap<(usize, usize), WitnessStructure>,
    /// `C`, sorted.
    pub members: BTreeSet<usize>,
    pub realized_types: usize,
    pub exist_conjuncts: usize,
}

impl Court {
    /// `(1 + m∃(n−1))·|K ∪ D|`: each `C_{a,i}` adds at most `n − 1`
    /// elements besides `a`.
    pub fn size_bound(&self) -> usize {
        let kd = self.kings.union(&self.d).count();
        (1 + self.exist_conjuncts * (self.width - 1)) * kd
    }

    /// `n((n−1) + (n−1)m∃)·|types|`, the printed estimate.
    pub fn printed_bound(&self) -> usize {
        let n = self.width;
        n * ((n - 1) + (n - 1) * self.exist_conjuncts) * self.realized_types
    }

    pub fn is_king_or_donor(&self, e: usize) -> bool {
        self.kings.contains(&e) || self.d.contains(&e)
    }
}

fn check_vocab(a: &Structure, nf: &NormalForm) -> Result<Structure, CompressError> {
    for (name, k) in nf.vocab.iter() {
        match a.vocab().arity(name) {
            Some(j) if j == k => {}
            Some(j) => {
                return Err(CompressError::Vocabulary(format!(
                    "{name} has arity {j} in the model, {k} in the formula"
                )))
            }
            None => return Err(CompressError::Vocabulary(format!("model does not interpret {name}"))),
        }
    }
    Ok(a.over(&nf.vocab).expect("checked above"))
}

/// Fails with the first unmet conjunct.
pub fn check_model(a: &Structure, nf: &NormalForm) -> Result<(), CompressError> {
    let a = check_vocab(a, nf)?;
    let demands = Demands::new(nf);
    for i in 0..nf.exist.len() {
        for e in 0..a.size() {
            if demands.first(&a, i, e, false).is_none() {
                return Err(CompressError::MissingWitness {
                    conjunct: i,
                    element: e,
                });
            }
        }
    }
    for (i, c) in nf.univ.iter().enumerate() {
        let m = Compiled::new(&c.matrix, &nf.vocab, &c.vars).expect("compiles");
        let mut bad = None;
        for_each_tuple(a.size(), c.vars.len(), |t| {
            if bad.is_none() && !m.holds(&a, t) {
                bad = Some(t.to_vec());
            }
        });
        if let Some(tuple) = bad {
            return Err(CompressError::UniversalFails { conjunct: i, tuple });
        }
    }
    Ok(())
}

/// Kings, free-live-part donors and their witness structures.
pub fn build_court(a: &Structure, nf: &NormalForm) -> Result<Court, CompressError> {
    check_model(a, nf)?;
    let a = check_vocab(a, nf)?;
    Ok(court_of(&a, nf, &Demands::new(nf)))
}

fn court_of(a: &Structure, nf: &NormalForm, demands: &Demands) -> Court {
    let n = nf.width();
    let (kings, royal_types) = find_kings(a, n);
    let mut by_type: BTreeMap<OneType, Vec<usize>> = BTreeMap::new();
    for e in 0..a.size() {
        by_type.entry(a.one_type(e)).or_default().push(e);
    }
    let mut donors = BTreeMap::new();
    let mut d = BTreeSet::new();
    for (t, es) in &by_type {
        for i in 0..nf.exist.len() {
            if let Some(w) = es.iter().find_map(|&e| demands.first(a, i, e, true)) {
                d.extend(w.live_part.iter().copied());
                donors.insert((t.clone(), i), w);
            }
        }
    }
    let mut witnesses = BTreeMap::new();
    let mut members: BTreeSet<usize> = kings.union(&d).copied().collect();
    for &e in kings.union(&d) {
        for i in 0..nf.exist.len() {
            let w = demands.first(a, i, e, false).expect("model has witnesses");
            members.extend(w.elements());
            witnesses.insert((e, i), w);
        }
    }
    Court {
        width: n,
        kings,
        royal_types,
        d,
        donors,
        witnesses,
        members,
        realized_types: by_type.len(),
        exist_conjuncts: nf.exist.len(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    E,
    F,
    G,
}

/// Where an element of the compressed model comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Element of the source model.
    Court(usize),
    /// Copy number `slot` (1-based) of a non-royal type.
    Copy { part: Part, ty: OneType, slot: usize },
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Court(e) => write!(f, "court:{e}"),
            Origin::Copy { part, ty, slot } => {
                let bits: String = ty.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                write!(f, "{part:?}:{bits}:{slot}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessCase {
    /// Provided inside the court.
    Court,
    /// A free live part in D.
    Free,
    One,
    Two,
    Three,
    Four,
}

impl fmt::Display for WitnessCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessCase::Court => "court",
            WitnessCase::Free => "free",
            WitnessCase::One => "1",
            WitnessCase::Two => "2",
            WitnessCase::Three => "3",
            WitnessCase::Four => "4",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Court {
        kings: Vec<usize>,
        d: Vec<usize>,
        members: Vec<usize>,
    },
    Witness {
        element: usize,
        conjunct: usize,
        case: WitnessCase,
        /// Centre followed by the witness tuple, in the compressed model.
        tuple: Vec<usize>,
    },
    Completion {
        set: Vec<usize>,
        source: Vec<usize>,
    },
}

fn join(v: &[usize]) -> String {
    v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Court { kings, d, members } => {
                write!(f, "court kings={} d={} members={}", join(kings), join(d), join(members))
            }
            TraceEvent::Witness {
                element,
                conjunct,
                case,
                tuple,
            } => write!(
                f,
                "witness element={element} conjunct={conjunct} case={case} tuple={}",
                join(tuple)
            ),
            TraceEvent::Completion { set, source } => {
                write!(f, "complete set={} from={}", join(set), join(source))
            }
        }
    }
}

/// Counters of the write-once table ledger.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WriteStats {
    pub witness_writes: usize,
    /// Writes that found the table already defined with equal contents.
    pub repeated_writes: usize,
    pub completions: usize,
}

#[derive(Clone, Debug)]
pub struct Compressed {
    pub structure: Structure,
    pub origins: Vec<Origin>,
    pub court: Court,
    pub stats: WriteStats,
    pub trace: Vec<TraceEvent>,
}

impl Compressed {
    pub fn royal_types(&self) -> BTreeSet<OneType> {
        find_kings(&self.structure, self.court.width).1
    }
}

struct Ledger {
    shapes: Vec<Vec<Shape>>,
    tables: HashMap<Vec<usize>, (Vec<bool>, String)>,
}

struct Builder<'a> {
    a: &'a Structure,
    nf: &'a NormalForm,
    out: Structure,
    origins: Vec<Origin>,
    court_index: BTreeMap<usize, usize>,
    slots: BTreeMap<(Part, OneType), Vec<usize>>,
    types_in_a: BTreeMap<OneType, Vec<usize>>,
    ledger: Ledger,
    stats: WriteStats,
    trace: Option<Vec<TraceEvent>>,
}

impl Builder<'_> {
    fn in_court(&self, e: usize) -> bool {
        matches!(self.origins[e], Origin::Court(_))
    }

    fn type_of(&self, e: usize) -> OneType {
        self.out.one_type(e)
    }

    // tb(target) := tb_A(source); positions correspond.
    fn write(&mut self, target: &[usize], source: &[usize], why: &str) -> Result<(), CompressError> {
        let mut set = target.to_vec();
        set.sort_unstable();
        let k = set.len();
        if k < 2 || k > self.ledger.shapes.len() - 1 {
            return Ok(());
        }
        let pos: HashMap<usize, usize> = target.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut values = Vec::with_capacity(self.ledger.shapes[k].len());
        for (r, p) in &self.ledger.shapes[k] {
            let src: Vec<usize> = p.iter().map(|&j| source[pos[&set[j]]]).collect();
            values.push(self.a.holds_at(*r, &src));
        }
        let existing = if set.iter().all(|&e| self.in_court(e)) {
            // court tables are the source tables themselves
            let vals = self.ledger.shapes[k]
                .iter()
                .map(|(r, p)| {
                    let t: Vec<usize> = p.iter().map(|&j| set[j]).collect();
                    self.out.holds_at(*r, &t)
                })
                .collect();
            Some((vals, "court".to_string()))
        } else {
            self.ledger.tables.get(&set).cloned()
        };
        match existing {
            Some((old, first)) => {
                if old != values {
                    return Err(CompressError::Conflict {
                        set,
                        first,
                        second: why.to_string(),
                    });
                }
                self.stats.repeated_writes += 1;
            }
            None => {
                for ((r, p), &v) in self.ledger.shapes[k].iter().zip(&values) {
                    let t: Vec<usize> = p.iter().map(|&j| set[j]).collect();
                    self.out.set_at(*r, &t, v);
                }
                self.ledger.tables.insert(set, (values, why.to_string()));
                self.stats.witness_writes += 1;
            }
        }
        Ok(())
    }

    fn slot(&self, part: Part, ty: &OneType, slot: usize) -> usize {
        self.slots[&(part, ty.clone())][slot - 1]
    }

    // Places the source witness `w` in the compressed model. `fixed` maps
    // source elements that already have a target.
    fn place(&self, w: &WitnessStructure, fixed: &BTreeMap<usize, usize>) -> Vec<usize> {
        let mut used: BTreeSet<usize> = fixed.values().copied().collect();
        let mut map = fixed.clone();
        let mut out = Vec::new();
        for &e in std::iter::once(&w.center).chain(&w.tuple) {
            if let Some(&t) = map.get(&e) {
                out.push(t);
                continue;
            }
            let t = if let Some(&c) = self.court_index.get(&e).filter(|_| self.royal(e)) {
                c
            } else {
                let ty = self.a.one_type(e);
                *self.slots[&(Part::E, ty)]
                    .iter()
                    .find(|s| !used.contains(s))
                    .expect("enough copies of every non-royal type")
            };
            used.insert(t);
            map.insert(e, t);
            out.push(t);
        }
        out
    }

    fn royal(&self, e: usize) -> bool {
        self.types_in_a[&self.a.one_type(e)].len() < self.nf.width()
    }
}

/// Builds a model of `nf` from the model `a` whose size is bounded in
/// |nf| alone. Fails if `a` is not a model or a table gets two
/// different definitions.
pub fn compress_model(a: &Structure, nf: &NormalForm) -> Result<Compressed, CompressError> {
    compress_model_with(a, nf, false)
}

/// As [`compress_model`]; with `trace` the result records court
/// membership, the witness case of every element and conjunct, and every
/// completion copy.
pub fn compress_model_with(a: &Structure, nf: &NormalForm, trace: bool) -> Result<Compressed, CompressError> {
    check_model(a, nf)?;
    let a = check_vocab(a, nf)?;
    let demands = Demands::new(nf);
    let court = court_of(&a, nf, &demands);
    let n = court.width;
    let m = nf.exist.len();
    let max_k = nf.vocab.max_arity().min(n);

    let mut types_in_a: BTreeMap<OneType, Vec<usize>> = BTreeMap::new();
    for e in 0..a.size() {
        types_in_a.entry(a.one_type(e)).or_default().push(e);
    }
    let non_royal: Vec<OneType> = types_in_a
        .keys()
        .filter(|t| !court.royal_types.contains(*t))
        .cloned()
        .collect();

    // Universe
    let mut origins: Vec<Origin> = court.members.iter().map(|&e| Origin::Court(e)).collect();
    let court_index: BTreeMap<usize, usize> = court.members.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut slots = BTreeMap::new();
    for part in [Part::E, Part::F, Part::G] {
        for t in &non_royal {
            let mut v = Vec::new();
            for slot in 1..=m + n {
                v.push(origins.len());
                origins.push(Origin::Copy {
                    part,
                    ty: t.clone(),
                    slot,
                });
            }
            slots.insert((part, t.clone()), v);
        }
    }
    let mut out = Structure::new(a.vocab().clone(), origins.len()).expect("non-empty");
    let members: Vec<usize> = court.members.iter().copied().collect();
    let court_part = a.induced(&members);
    for (name, k) in a.vocab().iter() {
        for t in court_part.tuples(name) {
            debug_assert_eq!(t.len(), k);
            out.set(name, &t, true);
        }
    }
    for (i, o) in origins.iter().enumerate() {
        if let Origin::Copy { ty, .. } = o {
            out.set_one_type(i, ty);
        }
    }

    let mut b = Builder {
        a: &a,
        nf,
        out,
        origins,
        court_index,
        slots,
        types_in_a,
        ledger: Ledger {
            shapes: (0..=max_k).map(|k| onto_shapes(&nf.vocab, k)).collect(),
            tables: HashMap::new(),
        },
        stats: WriteStats::default(),
        trace: trace.then(Vec::new),
    };
    if let Some(t) = b.trace.as_mut() {
        t.push(TraceEvent::Court {
            kings: court.kings.iter().copied().collect(),
            d: court.d.iter().copied().collect(),
            members: members.clone(),
        });
    }

    // Witnesses
    let mut plans: Vec<(usize, usize, WitnessCase, Vec<usize>)> = Vec::new();
    for target in 0..b.origins.len() {
        let pattern = match &b.origins[target] {
            Origin::Court(e) => *e,
            Origin::Copy { ty, .. } => b.types_in_a[ty][0],
        };
        let court_element = b.in_court(target);
        let alpha = a.one_type(pattern);
        for j in 0..m {
            if court_element && court.is_king_or_donor(pattern) {
                let w = &court.witnesses[&(pattern, j)];
                let tuple: Vec<usize> = std::iter::once(&w.center)
                    .chain(&w.tuple)
                    .map(|e| b.court_index[e])
                    .collect();
                plans.push((target, j, WitnessCase::Court, tuple));
                continue;
            }
            if let Some(w) = court.donors.get(&(alpha.clone(), j)) {
                let mut fixed = BTreeMap::new();
                fixed.insert(w.center, target);
                for &e in &w.live_part {
                    fixed.insert(e, b.court_index[&e]);
                }
                let tuple = b.place(w, &fixed);
                plans.push((target, j, WitnessCase::Free, tuple));
                continue;
            }
            let w = demands
                .first(&a, j, pattern, false)
                .ok_or_else(|| CompressError::Internal(format!("pattern {pattern} lost its witness")))?;
            if w.free {
                return Err(CompressError::Internal(format!(
                    "free witness for type of {pattern} missing from D"
                )));
            }
            let kings: Vec<usize> = w
                .live_part
                .iter()
                .copied()
                .filter(|e| court.kings.contains(e))
                .collect();
            let others: Vec<usize> = w
                .live_part
                .iter()
                .copied()
                .filter(|&e| e != pattern && !court.kings.contains(&e))
                .collect();
            let mut fixed = BTreeMap::new();
            fixed.insert(pattern, target);
            for &r in &kings {
                fixed.insert(r, b.court_index[&r]);
            }
            let case = if others.is_empty() {
                if court_element {
                    WitnessCase::One
                } else {
                    let mut tgt = vec![target];
                    let mut src = vec![pattern];
                    for &r in &kings {
                        tgt.push(b.court_index[&r]);
                        src.push(r);
                    }
                    b.write(&tgt, &src, &format!("case 2 for {target}/{j}"))?;
                    WitnessCase::Two
                }
            } else {
                let (part, case) = match &b.origins[target] {
                    Origin::Copy { part: Part::E, .. } => (Part::F, WitnessCase::Three),
                    Origin::Copy { part: Part::F, .. } => (Part::G, WitnessCase::Four),
                    _ => (Part::E, WitnessCase::Four),
                };
                let mut tgt = vec![target];
                let mut src = vec![pattern];
                for &r in &kings {
                    tgt.push(b.court_index[&r]);
                    src.push(r);
                }
                for (i, &e) in others.iter().enumerate() {
                    let ty = a.one_type(e);
                    let slot = if i == 0 { j + 1 } else { m + i };
                    let t = b.slot(part, &ty, slot);
                    fixed.insert(e, t);
                    tgt.push(t);
                    src.push(e);
                }
                b.write(&tgt, &src, &format!("case {case} for {target}/{j}"))?;
                case
            };
            let tuple = b.place(&w, &fixed);
            plans.push((target, j, case, tuple));
        }
    }

    // Completion
    let size = b.origins.len();
    let mut cache: HashMap<Vec<OneType>, Vec<usize>> = HashMap::new();
    for k in 2..=max_k {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let all_court = combo.iter().all(|&e| b.in_court(e));
            if !all_court && !b.ledger.tables.contains_key(&combo) {
                let types: Vec<OneType> = combo.iter().map(|&e| b.type_of(e)).collect();
                let source = match cache.get(&types) {
                    Some(s) => s.clone(),
                    None => {
                        let s = distinct_realizations(&b.types_in_a, &types).ok_or_else(|| {
                            CompressError::Internal(format!("no distinct source tuple for {combo:?}"))
                        })?;
                        cache.insert(types, s.clone());
                        s
                    }
                };
                for (r, p) in &b.ledger.shapes[k] {
                    let t: Vec<usize> = p.iter().map(|&j| combo[j]).collect();
                    let s: Vec<usize> = p.iter().map(|&j| source[j]).collect();
                    b.out.set_at(*r, &t, a.holds_at(*r, &s));
                }
                b.stats.completions += 1;
                if let Some(t) = b.trace.as_mut() {
                    t.push(TraceEvent::Completion {
                        set: combo.clone(),
                        source,
                    });
                }
            }
            if !next_combination(&mut combo, size) {
                break;
            }
        }
    }

    // every planned witness must hold in the finished structure
    for (target, j, case, tuple) in &plans {
        if !demands.matrices[*j].holds(&b.out, tuple) {
            return Err(CompressError::Internal(format!(
                "case {case} witness for element {target} and conjunct {j} fails"
            )));
        }
        if let Some(t) = b.trace.as_mut() {
            t.push(TraceEvent::Witness {
                element: *target,
                conjunct: *j,
                case: *case,
                tuple: tuple.clone(),
            });
        }
    }
    let result = Compressed {
        structure: b.out,
        origins: b.origins,
        court,
        stats: b.stats,
        trace: b.trace.unwrap_or_default(),
    };
    check_model(&result.structure, nf).map_err(|e| CompressError::Internal(format!("result is not a model: {e}")))?;
    let bound = paper_bound(nf);
    if result.structure.size() as u128 > bound {
        return Err(CompressError::Internal("size bound exceeded".into()));
    }
    if result.court.members.len() as u128 > court_bound_for_size(nf.size())
        || result.court.members.len() > result.court.size_bound()
    {
        return Err(CompressError::Internal("court bound exceeded".into()));
    }
    Ok(result)
}

// Lexicographically least tuple of distinct elements with the given types.
fn distinct_realizations(by_type: &BTreeMap<OneType, Vec<usize>>, types: &[OneType]) -> Option<Vec<usize>> {
    let mut used = BTreeSet::new();
    let mut out = Vec::new();
    for t in types {
        let e = *by_type.get(t)?.iter().find(|e| !used.contains(*e))?;
        used.insert(e);
        out.push(e);
    }
    Some(out)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_form::{to_normal_form, ExistConjunct, UnivConjunct};
    use crate::structures::{evaluate_sentence, parse_structure};
    use crate::syntax::{parse_formula, parse_formula_infer, var, Vocabulary};

    fn structure(text: &str) -> Structure {
        parse_structure(text).unwrap()
    }

    #[test]
    fn kings_by_realization_count() {
        let a = structure("domain = 4\nrel P/1 = { (0) }");
        let (k, r) = find_kings(&a, 2);
        assert_eq!(k, [0].into());
        assert_eq!(r.len(), 1);
        let b = structure("domain = 5\nrel P/1 = { }");
        assert!(find_kings(&b, 2).0.is_empty());
        assert_eq!(find_kings(&b, 6).0.len(), 5);
    }

    fn path(n: usize) -> Structure {
        let mut s = Structure::new(Vocabulary::from_pairs([("R", 2)]).unwrap(), n).unwrap();
        for i in 0..n {
            s.set("R", &[i, (i + 1) % n], true);
        }
        s
    }

    #[test]
    fn cycle_successor() {
        let (f, _) = parse_formula_infer("(A x. E y. (R(x,y) & ~x = y)) & A x y. (R(x,y) -> ~R(y,x))").unwrap();
        let nf = to_normal_form(&f).unwrap();
        let a = path(30);
        let c = compress_model_with(&a, &nf, true).unwrap();
        assert!(evaluate_sentence(&c.structure, &nf.to_formula()).unwrap());
        assert!(c.royal_types().is_subset(&c.court.royal_types));
        assert!(c.trace.iter().any(|t| matches!(t, TraceEvent::Court { .. })));
    }

    #[test]
    fn all_royal_model_is_its_own_court() {
        let (f, _) = parse_formula_infer("A x. E y. (R(x,y) & ~x = y)").unwrap();
        let nf = to_normal_form(&f).unwrap();
        let mut a = Structure::new(Vocabulary::from_pairs([("R", 2), ("P", 1)]).unwrap(), 2).unwrap();
        a.set("R", &[0, 1], true);
        a.set("R", &[1, 0], true);
        a.set("P", &[0], true);
        let nf = NormalForm {
            vocab: a.vocab().clone(),
            ..nf
        };
        let c = compress_model(&a, &nf).unwrap();
        assert_eq!(c.structure, a);
        assert_eq!(c.stats.completions, 0);
    }

    #[test]
    fn free_live_parts_go_to_d() {
        // x is not live: the witness only needs an R-edge elsewhere
        let v = Vocabulary::from_pairs([("R", 2), ("P", 1)]).unwrap();
        let m = parse_formula("R(y1,y2) & P(x)", &v).unwrap();
        let nf = NormalForm::new(
            vec![ExistConjunct::new(var("x"), vec![var("y1"), var("y2")], m)],
            vec![UnivConjunct::new(vec![var("x")], parse_formula("P(x)", &v).unwrap())],
            v,
        );
        let a = structure("domain = 3\nrel R/2 = { (1 2) }\nrel P/1 = { (0) (1) (2) }");
        let court = build_court(&a, &nf).unwrap();
        assert_eq!(court.d, [1, 2].into());
        assert!(court.kings.is_empty());
        let c = compress_model(&a, &nf).unwrap();
        assert!(evaluate_sentence(&c.structure, &nf.to_formula()).unwrap());
    }

    #[test]
    fn live_centre_means_no_donors() {
        let (f, _) = parse_formula_infer("A x. E y. R(x,y)").unwrap();
        let nf = to_normal_form(&f).unwrap();
        let court = build_court(&path(5), &nf).unwrap();
        assert!(court.d.is_empty());
    }

    #[test]
    fn non_models_are_rejected() {
        let (f, _) = parse_formula_infer("A x. E y. (R(x,y) & R(y,x))").unwrap();
        let nf = to_normal_form(&f).unwrap();
        assert!(matches!(
            compress_model(&path(4), &nf),
            Err(CompressError::MissingWitness {
                conjunct: 0,
                element: 0
            })
        ));
    }
}
