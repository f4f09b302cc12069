//! Fillings of labeled 2-complexes by relators.
//!
//! A filling of an abstract labeling with `k` abstract relators is a tuple of
//! `k` pairwise distinct words `(r_1, …, r_k)` such that reading edge labels
//! around every face labeled `±i` gives `r_i^{±1}`. Edge labels are stored
//! per geometric edge in its forward direction.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;
use std::time::Instant;

use num_rational::Rational64;
use num_traits::One;
use thiserror::Error;

use crate::complex::{oriented_boundary, reduction_degree, AbstractLabeling, Complex2, ComplexError, OrientedEdge};
use crate::forms::{FormError, GeometricForm, SubdivisionMode};
use crate::words::{invert, Letter, Word};

/// Default node budget for the backtracking searches.
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// Largest complex [`fillable_by_universe`] accepts, in edges.
pub const UNIVERSE_EDGE_LIMIT: usize = 512;

/// Upper bound on the census search space `2m·(2m−1)^{E−1}`.
pub const CENSUS_LIMIT: f64 = 1e9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FillingError {
    #[error("{found} relators given for {expected} abstract relators")]
    RelatorCount { expected: usize, found: usize },
    #[error("relator {relator} has length {found}, faces need {expected}")]
    LengthMismatch { relator: usize, expected: usize, found: usize },
    #[error("relator {relator} is not cyclically reduced")]
    NotCyclicallyReduced { relator: usize },
    #[error("relators {first} and {second} are equal")]
    DuplicateRelator { first: usize, second: usize },
    #[error("the complex has no faces")]
    NoFaces,
    #[error("inconsistent labels: {0:?}")]
    Conflict(Conflict),
    #[error("{what} is {value}, above the limit {limit}")]
    ScaleGuard { what: &'static str, value: f64, limit: f64 },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Edge `edge` would need two different letters.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Conflict {
    pub edge: usize,
    pub face: usize,
    pub position: usize,
    pub existing: Letter,
    pub proposed: Letter,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Induced {
    /// Forward letter of every geometric edge.
    Consistent(Vec<Letter>),
    Conflict(Conflict),
}

/// `(edge, forward, position)` for every boundary slot of every face
/// labeled `i`, read along the orientation carrying `+i`.
fn slots(c: &Complex2, lab: &AbstractLabeling) -> Vec<Vec<(usize, bool, usize, usize)>> {
    let mut out = vec![Vec::new(); lab.k()];
    for face in 0..c.face_count() {
        let i = lab.label(face).relator;
        for (j, o) in lab.positive_boundary(c, face).into_iter().enumerate() {
            out[i].push((o.edge, o.forward, j, face));
        }
    }
    out
}

fn read(letter: Letter, forward: bool) -> Letter {
    if forward {
        letter
    } else {
        letter.inverse()
    }
}

fn check_relators(lab: &AbstractLabeling, relators: &[Word], distinct: bool) -> Result<(), FillingError> {
    if lab.k() == 0 {
        return Err(FillingError::NoFaces);
    }
    if relators.len() != lab.k() {
        return Err(FillingError::RelatorCount { expected: lab.k(), found: relators.len() });
    }
    for (i, (r, &len)) in relators.iter().zip(lab.lengths()).enumerate() {
        if r.len() != len {
            return Err(FillingError::LengthMismatch { relator: i, expected: len, found: r.len() });
        }
        if !r.is_cyclically_reduced() {
            return Err(FillingError::NotCyclicallyReduced { relator: i });
        }
    }
    if distinct {
        let mut seen: HashMap<&Word, usize> = HashMap::new();
        for (i, r) in relators.iter().enumerate() {
            if let Some(&first) = seen.get(r) {
                return Err(FillingError::DuplicateRelator { first, second: i });
            }
            seen.insert(r, i);
        }
    }
    Ok(())
}

/// Propagates relator letters onto edges, reporting the first conflict.
pub fn induce_labels(
    c: &Complex2,
    lab: &AbstractLabeling,
    relators: &[Word],
    require_distinct: bool,
) -> Result<Induced, FillingError> {
    check_relators(lab, relators, require_distinct)?;
    let mut labels: Vec<Option<Letter>> = vec![None; c.edge_count()];
    for face in 0..c.face_count() {
        let r = &relators[lab.label(face).relator];
        for (j, o) in lab.positive_boundary(c, face).into_iter().enumerate() {
            let proposed = read(r.letters()[j], o.forward);
            match labels[o.edge] {
                Some(existing) if existing != proposed => {
                    return Ok(Induced::Conflict(Conflict { edge: o.edge, face, position: j, existing, proposed }));
                }
                _ => labels[o.edge] = Some(proposed),
            }
        }
    }
    match labels.into_iter().collect::<Option<Vec<_>>>() {
        Some(l) => Ok(Induced::Consistent(l)),
        // Only isolated edges stay unlabeled; valid complexes have none.
        None => Err(ComplexError::Invalid(c.validate()).into()),
    }
}

/// Reduction degree of a filled complex, counted over the oriented faces
/// whose label is one of the filling's relators.
///
/// A face labeled `r_i` also appears with label `r_i⁻¹` through its inverse
/// face; that orientation counts as well when `r_i⁻¹` is itself one of the
/// relators. Otherwise this equals the abstract reduction degree.
pub fn filled_reduction_degree(c: &Complex2, lab: &AbstractLabeling, relators: &[Word]) -> usize {
    let ids: HashMap<&Word, usize> = relators.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let inverse_ids: Vec<Option<usize>> = relators.iter().map(|r| ids.get(&invert(r)).copied()).collect();
    let mut counts: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for face in 0..c.face_count() {
        let l = lab.label(face);
        for (j, o) in oriented_boundary(c, face, l.inverted).into_iter().enumerate() {
            *counts.entry((l.relator, j, o.edge)).or_default() += 1;
        }
        if let Some(inv) = inverse_ids[l.relator] {
            for (j, o) in oriented_boundary(c, face, !l.inverted).into_iter().enumerate() {
                *counts.entry((inv, j, o.edge)).or_default() += 1;
            }
        }
    }
    counts.values().map(|&n| n - 1).sum()
}

/// A labeled complex together with a consistent filling.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VanKampenComplex {
    complex: Complex2,
    labeling: AbstractLabeling,
    relators: Vec<Word>,
    edge_labels: Vec<Letter>,
}

impl VanKampenComplex {
    /// Requires pairwise distinct relators and consistent induced labels.
    pub fn new(complex: Complex2, labeling: AbstractLabeling, relators: Vec<Word>) -> Result<VanKampenComplex, FillingError> {
        match induce_labels(&complex, &labeling, &relators, true)? {
            Induced::Consistent(edge_labels) => Ok(VanKampenComplex { complex, labeling, relators, edge_labels }),
            Induced::Conflict(c) => Err(FillingError::Conflict(c)),
        }
    }

    pub fn complex(&self) -> &Complex2 {
        &self.complex
    }

    pub fn labeling(&self) -> &AbstractLabeling {
        &self.labeling
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn edge_label(&self, e: OrientedEdge) -> Letter {
        read(self.edge_labels[e.edge], e.forward)
    }

    /// The word read along `∂f` from its base vertex.
    pub fn boundary_word(&self, face: usize) -> Word {
        self.complex.boundary(face).iter().map(|&o| self.edge_label(o)).collect()
    }

    pub fn reduction_degree(&self) -> usize {
        filled_reduction_degree(&self.complex, &self.labeling, &self.relators)
    }

    pub fn is_reduced(&self) -> bool {
        self.reduction_degree() == 0
    }

    /// Audit with `ℓ` the longest relator.
    pub fn audit(&self, d: Rational64, eps: Rational64, planar: bool) -> AuditReport {
        let ell = self.relators.iter().map(Word::len).max().unwrap_or(0);
        audit_with_red(&self.complex, self.reduction_degree(), d, eps, ell, planar)
    }
}

/// No two faces carrying the same relator share an edge at the same position.
pub fn is_reduced_vk(v: &VanKampenComplex) -> bool {
    v.is_reduced()
}

/// Node budget and optional wall-clock deadline for a search.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub node_budget: u64,
    pub deadline: Option<Instant>,
}

impl Default for SearchLimits {
    fn default() -> SearchLimits {
        SearchLimits { node_budget: DEFAULT_NODE_BUDGET, deadline: None }
    }
}

impl SearchLimits {
    pub fn unlimited() -> SearchLimits {
        SearchLimits { node_budget: u64::MAX, deadline: None }
    }

    fn exceeded(&self, nodes: u64) -> bool {
        nodes > self.node_budget
            || (nodes % 1024 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FillingReport {
    pub found: bool,
    /// Indices into the searched relator list, one per abstract relator.
    pub assignment: Option<Vec<usize>>,
    pub relators: Option<Vec<Word>>,
    pub nodes_explored: u64,
    pub reduced: bool,
    /// The search stopped on its limits before finishing.
    pub timed_out: bool,
}

/// Searches `relators` for a filling.
///
/// Abstract relators are filled most-constrained first; candidates are
/// tried in list order with conflicts pruned on the partial edge labeling.
/// Absence of a filling is a result, not an error.
pub fn find_filling(
    c: &Complex2,
    lab: &AbstractLabeling,
    relators: &[Word],
    require_reduced: bool,
    limits: &SearchLimits,
) -> Result<FillingReport, FillingError> {
    if lab.k() == 0 {
        return Err(FillingError::NoFaces);
    }
    let mut seen = HashMap::new();
    for (i, r) in relators.iter().enumerate() {
        if !r.is_cyclically_reduced() {
            return Err(FillingError::NotCyclicallyReduced { relator: i });
        }
        if let Some(first) = seen.insert(r, i) {
            return Err(FillingError::DuplicateRelator { first, second: i });
        }
    }
    if require_reduced && reduction_degree(c, lab) > 0 {
        // Every filling has Red(Y) ≥ Red(Ỹ) > 0.
        return Ok(FillingReport::default());
    }
    let slots = slots(c, lab);
    let order = constraint_order(&slots, c.edge_count());
    let candidates = lab
        .lengths()
        .iter()
        .map(|&len| (0..relators.len()).filter(|&r| relators[r].len() == len).collect())
        .collect();
    let mut search = RelatorSearch {
        c,
        lab,
        relators,
        slots,
        order,
        candidates,
        labels: vec![None; c.edge_count()],
        trail: Vec::new(),
        used: vec![false; relators.len()],
        chosen: vec![usize::MAX; lab.k()],
        require_reduced,
        limits: *limits,
        nodes: 0,
        timed_out: false,
    };
    let found = search.dfs(0);
    let assignment = found.then(|| search.chosen.clone());
    let relators_out = assignment.as_ref().map(|a| a.iter().map(|&r| relators[r].clone()).collect::<Vec<_>>());
    let reduced = relators_out.as_ref().is_some_and(|r| filled_reduction_degree(c, lab, r) == 0);
    Ok(FillingReport {
        found,
        assignment,
        relators: relators_out,
        nodes_explored: search.nodes,
        reduced,
        timed_out: search.timed_out,
    })
}

/// Most shared slots first, then greatest overlap with relators already
/// placed; ties to the lower index.
fn constraint_order(slots: &[Vec<(usize, bool, usize, usize)>], edges: usize) -> Vec<usize> {
    let mut multiplicity = vec![0usize; edges];
    for s in slots.iter().flatten() {
        multiplicity[s.0] += 1;
    }
    let shared: Vec<usize> = slots.iter().map(|s| s.iter().filter(|x| multiplicity[x.0] > 1).count()).collect();
    let mut covered = vec![false; edges];
    let mut order = Vec::with_capacity(slots.len());
    let mut remaining: Vec<usize> = (0..slots.len()).collect();
    while !remaining.is_empty() {
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .max_by_key(|(_, &i)| {
                let overlap = slots[i].iter().filter(|x| covered[x.0]).count();
                (overlap, shared[i], std::cmp::Reverse(i))
            })
            .expect("nonempty");
        let i = remaining.remove(pos);
        for s in &slots[i] {
            covered[s.0] = true;
        }
        order.push(i);
    }
    order
}

struct RelatorSearch<'a> {
    c: &'a Complex2,
    lab: &'a AbstractLabeling,
    relators: &'a [Word],
    slots: Vec<Vec<(usize, bool, usize, usize)>>,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    labels: Vec<Option<Letter>>,
    trail: Vec<usize>,
    used: Vec<bool>,
    chosen: Vec<usize>,
    require_reduced: bool,
    limits: SearchLimits,
    nodes: u64,
    timed_out: bool,
}

impl RelatorSearch<'_> {
    fn assign(&mut self, i: usize, word: &Word) -> bool {
        for &(edge, forward, j, _) in &self.slots[i] {
            let letter = read(word.letters()[j], forward);
            match self.labels[edge] {
                Some(existing) if existing != letter => return false,
                Some(_) => {}
                None => {
                    self.labels[edge] = Some(letter);
                    self.trail.push(edge);
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for e in self.trail.drain(mark..) {
            self.labels[e] = None;
        }
    }

    fn dfs(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            if !self.require_reduced {
                return true;
            }
            let chosen: Vec<Word> = self.chosen.iter().map(|&r| self.relators[r].clone()).collect();
            return filled_reduction_degree(self.c, self.lab, &chosen) == 0;
        }
        let i = self.order[depth];
        for n in 0..self.candidates[i].len() {
            let cand = self.candidates[i][n];
            if self.used[cand] {
                continue;
            }
            self.nodes += 1;
            if self.limits.exceeded(self.nodes) {
                self.timed_out = true;
                return false;
            }
            let mark = self.trail.len();
            if self.assign(i, &self.relators[cand]) {
                self.used[cand] = true;
                self.chosen[i] = cand;
                if self.dfs(depth + 1) {
                    return true;
                }
                self.used[cand] = false;
            }
            self.undo(mark);
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

/// Result of a search over all edge labelings.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UniverseReport {
    pub found: bool,
    pub relators: Option<Vec<Word>>,
    pub edge_labels: Option<Vec<Letter>>,
    pub nodes_explored: u64,
    pub timed_out: bool,
}

/// Is the labeled complex reduced-fillable by the full universe `B_ℓ` over
/// `m` generators?
pub fn fillable_by_universe(
    c: &Complex2,
    lab: &AbstractLabeling,
    m: u8,
    limits: &SearchLimits,
) -> Result<UniverseReport, FillingError> {
    if c.edge_count() > UNIVERSE_EDGE_LIMIT {
        return Err(FillingError::ScaleGuard {
            what: "edge count",
            value: c.edge_count() as f64,
            limit: UNIVERSE_EDGE_LIMIT as f64,
        });
    }
    if reduction_degree(c, lab) > 0 {
        return Ok(UniverseReport::default());
    }
    let mut search = EdgeSearch::new(c, lab, m, *limits)?;
    let mut report = UniverseReport::default();
    search.run(&mut |relators, labels, reduced| {
        if reduced {
            report.found = true;
            report.relators = Some(relators.to_vec());
            report.edge_labels = Some(labels.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    report.nodes_explored = search.nodes;
    report.timed_out = search.timed_out;
    Ok(report)
}

/// Backtracking over letters on geometric edges, in the order edges first
/// appear along the face boundaries.
struct EdgeSearch<'a> {
    c: &'a Complex2,
    lab: &'a AbstractLabeling,
    m: u8,
    order: Vec<usize>,
    /// Per edge: `(face, position in ∂f, forward)`.
    occurrences: Vec<Vec<(usize, usize, bool)>>,
    /// Per edge: `(relator, position, forward)` in the positive reading.
    decorations: Vec<Vec<(usize, usize, bool)>>,
    face_letters: Vec<Vec<Option<Letter>>>,
    abstract_letters: Vec<Vec<(Option<Letter>, u32)>>,
    labels: Vec<Letter>,
    abstract_reduced: bool,
    limits: SearchLimits,
    nodes: u64,
    timed_out: bool,
}

impl<'a> EdgeSearch<'a> {
    fn new(c: &'a Complex2, lab: &'a AbstractLabeling, m: u8, limits: SearchLimits) -> Result<EdgeSearch<'a>, FillingError> {
        if lab.k() == 0 {
            return Err(FillingError::NoFaces);
        }
        let mut order = Vec::with_capacity(c.edge_count());
        let mut seen = vec![false; c.edge_count()];
        let mut occurrences = vec![Vec::new(); c.edge_count()];
        for face in 0..c.face_count() {
            for (p, o) in c.boundary(face).iter().enumerate() {
                occurrences[o.edge].push((face, p, o.forward));
                if !seen[o.edge] {
                    seen[o.edge] = true;
                    order.push(o.edge);
                }
            }
        }
        let mut decorations = vec![Vec::new(); c.edge_count()];
        for (i, s) in slots(c, lab).into_iter().enumerate() {
            for (edge, forward, j, _) in s {
                decorations[edge].push((i, j, forward));
            }
        }
        Ok(EdgeSearch {
            c,
            lab,
            m,
            order,
            occurrences,
            decorations,
            face_letters: c.faces().iter().map(|f| vec![None; f.len()]).collect(),
            abstract_letters: lab.lengths().iter().map(|&l| vec![(None, 0); l]).collect(),
            labels: vec![Letter::new(1, false); c.edge_count()],
            abstract_reduced: reduction_degree(c, lab) == 0,
            limits,
            nodes: 0,
            timed_out: false,
        })
    }

    fn place(&mut self, edge: usize, x: Letter) -> bool {
        let mut ok = true;
        for &(i, j, forward) in &self.decorations[edge] {
            let y = read(x, forward);
            let slot = &mut self.abstract_letters[i][j];
            match slot.0 {
                Some(z) if z != y => ok = false,
                _ => slot.0 = Some(y),
            }
            slot.1 += 1;
        }
        for &(face, p, forward) in &self.occurrences[edge] {
            self.face_letters[face][p] = Some(read(x, forward));
        }
        if !ok {
            return false;
        }
        for &(face, p, _) in &self.occurrences[edge] {
            let letters = &self.face_letters[face];
            let n = letters.len();
            let here = letters[p].expect("just placed");
            let next = letters[(p + 1) % n];
            let prev = letters[(p + n - 1) % n];
            if next == Some(here.inverse()) || prev == Some(here.inverse()) {
                return false;
            }
        }
        true
    }

    fn unplace(&mut self, edge: usize) {
        for &(i, j, _) in &self.decorations[edge] {
            let slot = &mut self.abstract_letters[i][j];
            slot.1 -= 1;
            if slot.1 == 0 {
                slot.0 = None;
            }
        }
        for &(face, p, _) in &self.occurrences[edge] {
            self.face_letters[face][p] = None;
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[Word], &[Letter], bool) -> ControlFlow<()>) {
        let _ = self.dfs(0, visit);
    }

    fn dfs(&mut self, depth: usize, visit: &mut dyn FnMut(&[Word], &[Letter], bool) -> ControlFlow<()>) -> ControlFlow<()> {
        if depth == self.order.len() {
            return self.leaf(visit);
        }
        let edge = self.order[depth];
        for x in Letter::all(self.m) {
            self.nodes += 1;
            if self.limits.exceeded(self.nodes) {
                self.timed_out = true;
                return ControlFlow::Break(());
            }
            self.labels[edge] = x;
            let ok = self.place(edge, x);
            let flow = if ok { self.dfs(depth + 1, visit) } else { ControlFlow::Continue(()) };
            self.unplace(edge);
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn leaf(&mut self, visit: &mut dyn FnMut(&[Word], &[Letter], bool) -> ControlFlow<()>) -> ControlFlow<()> {
        let relators: Vec<Word> = self
            .abstract_letters
            .iter()
            .map(|w| w.iter().map(|s| s.0.expect("every abstract letter is decorated")).collect())
            .collect();
        let distinct: HashSet<&Word> = relators.iter().collect();
        if distinct.len() != relators.len() {
            return ControlFlow::Continue(());
        }
        let reduced = self.abstract_reduced
            && (!relators.iter().any(|r| distinct.contains(&invert(r)))
                || filled_reduction_degree(self.c, self.lab, &relators) == 0);
        visit(&relators, &self.labels, reduced)
    }
}

/// Fillings of a complex by the whole universe, with self-intersection sizes.
#[derive(Clone, PartialEq, Debug)]
pub struct Census {
    pub k: usize,
    pub ell: usize,
    pub m: u8,
    /// `|𝒴_ℓ|`: tuples of pairwise distinct relators filling the complex.
    pub fillings: u64,
    /// Fillings that are also reduced.
    pub reduced: u64,
    /// `log|𝒴_ℓ| / (k·ℓ·log(2m−1))`.
    pub exponent: f64,
    /// `|S_i|` for `0 ≤ i ≤ k`: ordered pairs sharing exactly `i` relators.
    pub self_intersections: Vec<u128>,
    pub tuples: Vec<Vec<Word>>,
}

/// Enumerates every filling of `lab` by `B_ℓ` over `m` generators.
pub fn filling_census(c: &Complex2, lab: &AbstractLabeling, m: u8) -> Result<Census, FillingError> {
    let base = f64::from(2 * m as u32 - 1);
    let space = f64::from(2 * m as u32) * base.powi(c.edge_count() as i32 - 1);
    if space > CENSUS_LIMIT {
        return Err(FillingError::ScaleGuard { what: "census search space", value: space, limit: CENSUS_LIMIT });
    }
    let mut search = EdgeSearch::new(c, lab, m, SearchLimits::unlimited())?;
    let mut tuples = Vec::new();
    let mut reduced = 0;
    search.run(&mut |relators, _, is_reduced| {
        tuples.push(relators.to_vec());
        reduced += u64::from(is_reduced);
        ControlFlow::Continue(())
    });
    tuples.sort();
    let k = lab.k();
    let ell = lab.lengths().iter().copied().max().unwrap_or(0);
    let fillings = tuples.len() as u64;
    let exponent = (fillings as f64).ln() / (k as f64 * ell as f64 * base.ln());
    let self_intersections = self_intersections(&tuples, k);
    Ok(Census { k, ell, m, fillings, reduced, exponent, self_intersections, tuples })
}

/// Census of `Y_ℓ` with one abstract relator per face.
pub fn form_census(form: &GeometricForm, ell: usize, m: u8, mode: SubdivisionMode) -> Result<Census, FillingError> {
    let sub = form.subdivide(ell, mode)?;
    let lab = AbstractLabeling::distinct(&sub.complex);
    let mut census = filling_census(&sub.complex, &lab, m)?;
    census.ell = ell;
    census.exponent = (census.fillings as f64).ln() / (census.k as f64 * ell as f64 * f64::from(2 * m as u32 - 1).ln());
    Ok(census)
}

fn binomial(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// `|S_i|` by inclusion–exclusion over shared relator subsets.
///
/// With `A_t = Σ_{|T|=t} N(T)²`, where `N(T)` counts tuples containing the
/// relator set `T`, one has `A_t = Σ_i C(i,t)·|S_i|`, which inverts to
/// `|S_i| = Σ_{t≥i} (−1)^{t−i} C(t,i) A_t`.
pub fn self_intersections(tuples: &[Vec<Word>], k: usize) -> Vec<u128> {
    let mut ids: HashMap<&Word, u32> = HashMap::new();
    let mut freq: HashMap<Vec<u32>, u128> = HashMap::new();
    for t in tuples {
        let mut set: Vec<u32> = t
            .iter()
            .map(|w| {
                let next = ids.len() as u32;
                *ids.entry(w).or_insert(next)
            })
            .collect();
        set.sort_unstable();
        for mask in 0u32..1 << set.len() {
            let subset: Vec<u32> = (0..set.len()).filter(|b| mask >> b & 1 == 1).map(|b| set[b]).collect();
            *freq.entry(subset).or_default() += 1;
        }
    }
    let mut a = vec![0i128; k + 1];
    for (subset, n) in &freq {
        a[subset.len()] += (n * n) as i128;
    }
    (0..=k)
        .map(|i| {
            let s: i128 = (i..=k)
                .map(|t| {
                    let term = binomial(t, i) * a[t];
                    if (t - i) % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum();
            s as u128
        })
        .collect()
}

/// `|S_i|` by comparing every ordered pair; quadratic, for checking.
pub fn self_intersections_pairwise(tuples: &[Vec<Word>], k: usize) -> Vec<u128> {
    let mut out = vec![0u128; k + 1];
    for x in tuples {
        for y in tuples {
            let shared = x.iter().filter(|r| y.contains(r)).count();
            out[shared] += 1;
        }
    }
    out
}

/// Both sides of `|Y^{(1)}| + Red(Y) ≥ (1−d−ε)|Y|ℓ` and, for planar
/// simply connected inputs, of `|∂D| ≥ (1−2d−ε)|D|ℓ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AuditReport {
    pub faces: usize,
    pub edges: usize,
    pub red: usize,
    pub ell: usize,
    pub lhs: i64,
    pub rhs: Rational64,
    pub passes: bool,
    pub boundary: Option<BoundaryAudit>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BoundaryAudit {
    pub length: usize,
    pub rhs: Rational64,
    pub passes: bool,
}

/// Audits a labeled complex, taking `Red` from the abstract labeling (equal
/// to `Red(Y)` for any filling without mutually inverse relators).
pub fn isoperimetric_audit(
    c: &Complex2,
    lab: &AbstractLabeling,
    d: Rational64,
    eps: Rational64,
    ell: usize,
    planar: bool,
) -> AuditReport {
    audit_with_red(c, reduction_degree(c, lab), d, eps, ell, planar)
}

fn audit_with_red(c: &Complex2, red: usize, d: Rational64, eps: Rational64, ell: usize, planar: bool) -> AuditReport {
    let faces = c.face_count();
    let edges = c.edge_count();
    let scale = Rational64::from_integer((faces * ell) as i64);
    let rhs = (Rational64::one() - d - eps) * scale;
    let lhs = (edges + red) as i64;
    let boundary = planar.then(|| {
        let length = c.diagram_boundary_length();
        let rhs = (Rational64::one() - d * 2 - eps) * scale;
        BoundaryAudit { length, rhs, passes: Rational64::from_integer(length as i64) >= rhs }
    });
    AuditReport { faces, edges, red, ell, lhs, rhs, passes: Rational64::from_integer(lhs) >= rhs, boundary }
}
