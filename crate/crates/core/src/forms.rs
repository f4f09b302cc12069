//! Geometric forms `(Y, λ)`: a 2-complex with exact rational edge lengths.
//!
//! The density of a form is `Σ λ_e / |Y|`; its critical density is the
//! minimum density over all face-generated sub-2-complexes. Random groups at
//! density `d` fill the subdivided complexes `Y_ℓ` asymptotically almost
//! surely when `d > 1 − dens_c(Y)` and almost never when `d < 1 − dens_c(Y)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::complex::{AbstractLabeling, Complex2, ComplexError, Edge, Face, OrientedEdge};

/// Default cap on `|Y|` for critical-density enumeration (`2^|Y| − 1` subsets).
pub const DEFAULT_FACE_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("form complex is not connected")]
    Disconnected,
    #[error("edge {edge}: length {lambda} is outside (0, 1]")]
    LambdaOutOfRange { edge: usize, lambda: Rational64 },
    #[error("{lambdas} edge lengths given for {edges} edges")]
    LambdaCount { lambdas: usize, edges: usize },
    #[error("face {face}: boundary length {length} exceeds 1")]
    FaceTooLong { face: usize, length: Rational64 },
    #[error("{faces} faces exceed the enumeration limit of {limit}")]
    TooManyFaces { faces: usize, limit: usize },
    #[error("edge {edge} is divided into {pieces} edges at ell={ell}, below the minimum {required}; use ell >= {min_ell}")]
    Subdivision { edge: usize, pieces: i64, ell: usize, required: i64, min_ell: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unknown built-in form {0:?} (expected cprime(λ), wheel(p), halfwheel(p), counterexample, counterexample-inner or disk)")]
    UnknownBuiltin(String),
}

/// A connected 2-complex without isolated edges plus an edge length
/// `λ_e ∈ (0, 1]` per geometric edge, every face boundary of total length ≤ 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeometricForm {
    complex: Complex2,
    lambda: Vec<Rational64>,
}

impl GeometricForm {
    pub fn new(complex: Complex2, lambda: Vec<Rational64>) -> Result<GeometricForm, FormError> {
        let diagnostics = complex.validate();
        if !diagnostics.is_empty() {
            return Err(ComplexError::Invalid(diagnostics).into());
        }
        if lambda.len() != complex.edge_count() {
            return Err(FormError::LambdaCount { lambdas: lambda.len(), edges: complex.edge_count() });
        }
        if let Some((edge, &l)) = lambda
            .iter()
            .enumerate()
            .find(|(_, l)| **l <= Rational64::zero() || **l > Rational64::one())
        {
            return Err(FormError::LambdaOutOfRange { edge, lambda: l });
        }
        if !complex.is_connected() {
            return Err(FormError::Disconnected);
        }
        for face in 0..complex.face_count() {
            let length: Rational64 = complex.boundary(face).iter().map(|o| lambda[o.edge]).sum();
            if length > Rational64::one() {
                return Err(FormError::FaceTooLong { face, length });
            }
        }
        Ok(GeometricForm { complex, lambda })
    }

    pub fn complex(&self) -> &Complex2 {
        &self.complex
    }

    pub fn lambda(&self) -> &[Rational64] {
        &self.lambda
    }

    pub fn face_count(&self) -> usize {
        self.complex.face_count()
    }

    /// `dens(Y) = Σ λ_e / |Y|`
    pub fn density(&self) -> Rational64 {
        let total: Rational64 = self.lambda.iter().sum();
        total / self.face_count() as i64
    }

    /// The form restricted to a face-generated subcomplex.
    pub fn restrict(&self, faces: &[usize]) -> Result<GeometricForm, FormError> {
        let sub = self.complex.face_subcomplex(faces)?;
        let lambda = sub.edges.iter().map(|&e| self.lambda[e]).collect();
        // Face subcomplexes need not be connected; skip that check here.
        Ok(GeometricForm { complex: sub.complex, lambda })
    }

    /// Density of the subcomplex generated by `faces`.
    pub fn subset_density(&self, faces: &[usize]) -> Result<Rational64, FormError> {
        Ok(self.restrict(faces)?.density())
    }

    /// Critical density with the default face limit.
    pub fn critical_density(&self) -> Result<CriticalDensity, FormError> {
        self.critical_density_with_limit(DEFAULT_FACE_LIMIT)
    }

    /// `dens_c(Y) = min_{Z ≤ Y} dens(Z)` over all nonempty face subsets.
    ///
    /// Ties are broken by fewer faces, then by the lexicographically
    /// smallest sorted face-id list, so the witness is schedule-independent.
    pub fn critical_density_with_limit(&self, limit: usize) -> Result<CriticalDensity, FormError> {
        let n = self.face_count();
        if n > limit || n > 62 {
            return Err(FormError::TooManyFaces { faces: n, limit: limit.min(62) });
        }
        let table = SubsetTable::new(self);
        let best = (1u64..1u64 << n)
            .into_par_iter()
            .map(|mask| table.candidate(mask))
            .reduce_with(|a, b| if a.cmp_key(&b) == Ordering::Greater { b } else { a })
            .expect("a form has at least one face");
        Ok(CriticalDensity {
            value: Rational64::new(best.weight, table.scale * best.faces as i64),
            witness: mask_faces(best.mask),
        })
    }

    /// `1 − dens_c(Y)`, the density at which fillability of `Y_ℓ` switches.
    pub fn transition_density(&self) -> Result<Rational64, FormError> {
        Ok(Rational64::one() - self.critical_density()?.value)
    }

    /// Divides every edge `e` into `⌊λ_e ℓ⌋` unit edges.
    pub fn subdivide(&self, ell: usize, mode: SubdivisionMode) -> Result<SubdividedComplex, FormError> {
        let required = mode.min_pieces();
        let pieces: Vec<i64> = self.lambda.iter().map(|l| pieces_at(*l, ell)).collect();
        if let Some((edge, &p)) = pieces.iter().enumerate().find(|(_, &p)| p < required) {
            let l = self.lambda[edge];
            // Smallest ℓ with ⌊λℓ⌋ ≥ required is ⌈required·q/p⌉.
            let min_ell = Integer::div_ceil(&(required * l.denom()), l.numer()) as usize;
            return Err(FormError::Subdivision { edge, pieces: p, ell, required, min_ell });
        }
        let base = &self.complex;
        let mut vertex_count = base.vertex_count();
        let mut edges = Vec::new();
        let mut arc_map = Vec::with_capacity(base.edge_count());
        for (e, &count) in base.edges().iter().zip(&pieces) {
            let mut path = Vec::with_capacity(count as usize);
            let mut prev = e.from;
            for step in 0..count {
                let next = if step + 1 == count {
                    e.to
                } else {
                    vertex_count += 1;
                    vertex_count - 1
                };
                path.push(edges.len());
                edges.push(Edge { from: prev, to: next });
                prev = next;
            }
            arc_map.push(path);
        }
        let faces = base
            .faces()
            .iter()
            .map(|f| {
                let mut boundary = Vec::new();
                for o in &f.boundary {
                    let path = &arc_map[o.edge];
                    if o.forward {
                        boundary.extend(path.iter().map(|&e| OrientedEdge::fwd(e)));
                    } else {
                        boundary.extend(path.iter().rev().map(|&e| OrientedEdge::rev(e)));
                    }
                }
                Face::new(boundary)
            })
            .collect();
        let complex = Complex2::from_parts(vertex_count, edges, faces);
        debug_assert!(complex.validate().is_empty());
        Ok(SubdividedComplex { complex, ell, arc_map })
    }
}

fn pieces_at(lambda: Rational64, ell: usize) -> i64 {
    Integer::div_floor(&(lambda.numer() * ell as i64), lambda.denom())
}

fn mask_faces(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Face-subset densities over a common denominator: `λ_e = weight_e / scale`.
struct SubsetTable {
    scale: i64,
    weights: Vec<i64>,
    face_edges: Vec<Vec<u64>>,
}

#[derive(Clone, Copy)]
struct Candidate {
    weight: i64,
    faces: u32,
    mask: u64,
}

impl Candidate {
    fn cmp_key(&self, other: &Candidate) -> Ordering {
        let lhs = i128::from(self.weight) * i128::from(other.faces);
        let rhs = i128::from(other.weight) * i128::from(self.faces);
        lhs.cmp(&rhs)
            .then(self.faces.cmp(&other.faces))
            // Lexicographic order on sorted id lists: the mask whose lowest
            // differing bit is set comes first.
            .then_with(|| {
                let diff = self.mask ^ other.mask;
                if diff == 0 {
                    Ordering::Equal
                } else if self.mask & (diff & diff.wrapping_neg()) != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            })
    }
}

impl SubsetTable {
    fn new(form: &GeometricForm) -> SubsetTable {
        let scale = form.lambda.iter().fold(1i64, |acc, l| acc.lcm(l.denom()));
        let weights = form.lambda.iter().map(|l| l.numer() * (scale / l.denom())).collect();
        let words = form.complex.edge_count().div_ceil(64);
        let face_edges = form
            .complex
            .faces()
            .iter()
            .map(|f| {
                let mut bits = vec![0u64; words];
                for o in &f.boundary {
                    bits[o.edge / 64] |= 1 << (o.edge % 64);
                }
                bits
            })
            .collect();
        SubsetTable { scale, weights, face_edges }
    }

    fn candidate(&self, mask: u64) -> Candidate {
        let words = self.face_edges.first().map_or(0, Vec::len);
        let mut union = vec![0u64; words];
        let mut m = mask;
        while m != 0 {
            let f = m.trailing_zeros() as usize;
            for (u, b) in union.iter_mut().zip(&self.face_edges[f]) {
                *u |= b;
            }
            m &= m - 1;
        }
        let mut weight = 0;
        for (w, bits) in union.iter().enumerate() {
            let mut b = *bits;
            while b != 0 {
                weight += self.weights[w * 64 + b.trailing_zeros() as usize];
                b &= b - 1;
            }
        }
        Candidate { weight, faces: mask.count_ones(), mask }
    }
}

/// Minimum subset density and one minimizing face subset (0-based ids).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CriticalDensity {
    pub value: Rational64,
    pub witness: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SubdivisionMode {
    /// Every edge divided into at least 3 pieces.
    #[default]
    Strict,
    /// At least one piece per edge; for toy instances.
    Relaxed,
}

impl SubdivisionMode {
    fn min_pieces(self) -> i64 {
        match self {
            SubdivisionMode::Strict => 3,
            SubdivisionMode::Relaxed => 1,
        }
    }
}

/// `Y_ℓ` together with the path of unit edges replacing each edge of `Y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubdividedComplex {
    pub complex: Complex2,
    pub ell: usize,
    /// Edge `e` of the form becomes `arc_map[e]`, traversed from `α(e)`.
    pub arc_map: Vec<Vec<usize>>,
}

impl SubdividedComplex {
    /// Face labels carry over unchanged; only the lengths `ℓ_i` change.
    pub fn transfer(&self, lab: &AbstractLabeling) -> Result<AbstractLabeling, ComplexError> {
        AbstractLabeling::new(&self.complex, lab.labels().to_vec())
    }
}

/// A named form with its parameters, parseable from `cprime(1/3)`,
/// `wheel(4)` and so on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Builtin {
    /// Two faces sharing one edge of length `λ`, each with a private edge `1 − λ`.
    CPrime(Rational64),
    /// A center face of `p` edges `1/p`, each shared with a petal.
    Wheel(u32),
    /// A center face with half its boundary shared by `p` petals.
    HalfWheel(u32),
    /// Three faces with total edge length `1.9` whose inner pair has `1.1`.
    Counterexample,
    /// The inner two faces of [`Builtin::Counterexample`].
    CounterexampleInner,
    /// One face bounded by one loop of length 1.
    Disk,
}

impl Builtin {
    pub fn build(self) -> Result<GeometricForm, FormError> {
        match self {
            Builtin::CPrime(l) => cprime_form(l),
            Builtin::Wheel(p) => wheel_form(p),
            Builtin::HalfWheel(p) => halfwheel_form(p),
            Builtin::Counterexample => Ok(counterexample_form()),
            Builtin::CounterexampleInner => counterexample_form().restrict(&[1, 2]),
            Builtin::Disk => Ok(disk_form()),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::CPrime(l) => write!(f, "cprime({l})"),
            Builtin::Wheel(p) => write!(f, "wheel({p})"),
            Builtin::HalfWheel(p) => write!(f, "halfwheel({p})"),
            Builtin::Counterexample => write!(f, "counterexample"),
            Builtin::CounterexampleInner => write!(f, "counterexample-inner"),
            Builtin::Disk => write!(f, "disk"),
        }
    }
}

impl FromStr for Builtin {
    type Err = FormError;

    fn from_str(s: &str) -> Result<Builtin, FormError> {
        let s = s.trim();
        let s = s.strip_prefix("builtin:").unwrap_or(s);
        let (name, arg) = match s.split_once('(') {
            Some((name, rest)) => {
                let arg = rest
                    .strip_suffix(')')
                    .ok_or_else(|| FormError::Parameter(format!("missing ')' in {s:?}")))?;
                (name.trim(), Some(arg.trim()))
            }
            None => (s, None),
        };
        let int_arg = |arg: Option<&str>| -> Result<u32, FormError> {
            let a = arg.ok_or_else(|| FormError::Parameter(format!("{name} needs an integer parameter")))?;
            a.parse().map_err(|_| FormError::Parameter(format!("{a:?} is not an integer")))
        };
        match (name, arg) {
            ("cprime", Some(a)) => Ok(Builtin::CPrime(parse_rational(a)?)),
            ("wheel", a) => Ok(Builtin::Wheel(int_arg(a)?)),
            ("halfwheel", a) => Ok(Builtin::HalfWheel(int_arg(a)?)),
            ("counterexample", None) => Ok(Builtin::Counterexample),
            ("counterexample-inner", None) => Ok(Builtin::CounterexampleInner),
            ("disk", None) => Ok(Builtin::Disk),
            _ => Err(FormError::UnknownBuiltin(s.to_string())),
        }
    }
}

/// Parses `p/q`, a plain integer, or a terminating decimal such as `0.35`.
pub fn parse_rational(s: &str) -> Result<Rational64, FormError> {
    let s = s.trim();
    let bad = || FormError::Parameter(format!("{s:?} is not a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let num = int.abs() * den + f;
        return Ok(Rational64::new(if negative { -num } else { num }, den));
    }
    s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad())
}

fn r(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

/// Two faces sharing an edge of length `λ`; the private edges have `1 − λ`.
/// Edge 0 is the shared edge.
pub fn cprime_form(lambda: Rational64) -> Result<GeometricForm, FormError> {
    if lambda <= Rational64::zero() || lambda >= Rational64::one() {
        return Err(FormError::Parameter(format!("cprime needs 0 < λ < 1, got {lambda}")));
    }
    let complex = Complex2::build(
        2,
        vec![Edge { from: 0, to: 1 }; 3],
        vec![Face::from_signed(&[2, -1]), Face::from_signed(&[1, -3])],
    )?;
    let rest = Rational64::one() - lambda;
    GeometricForm::new(complex, vec![lambda, rest, rest])
}

/// Center face (face 0) with `p` edges of length `1/p`; petal `t` shares
/// edge `t` and closes it with a private edge of length `1 − 1/p`.
pub fn wheel_form(p: u32) -> Result<GeometricForm, FormError> {
    if p < 2 {
        return Err(FormError::Parameter(format!("wheel needs p >= 2, got {p}")));
    }
    let p = p as usize;
    let mut edges: Vec<Edge> = (0..p).map(|t| Edge { from: t, to: (t + 1) % p }).collect();
    edges.extend((0..p).map(|t| Edge { from: (t + 1) % p, to: t }));
    let mut faces = vec![Face::new((0..p).map(OrientedEdge::fwd).collect())];
    faces.extend((0..p).map(|t| Face::new(vec![OrientedEdge::fwd(p + t), OrientedEdge::fwd(t)])));
    let complex = Complex2::build(p, edges, faces)?;
    let mut lambda = vec![r(1, p as i64); p];
    lambda.extend(vec![r(p as i64 - 1, p as i64); p]);
    GeometricForm::new(complex, lambda)
}

/// Center face (face 0) whose boundary is `p` shared edges of length
/// `1/(2p)` followed by one private edge of length `1/2`; petal `t` closes
/// shared edge `t` with a private edge of length `1 − 1/(2p)`.
pub fn halfwheel_form(p: u32) -> Result<GeometricForm, FormError> {
    if p < 1 {
        return Err(FormError::Parameter(format!("halfwheel needs p >= 1, got {p}")));
    }
    let p = p as usize;
    // Vertices 0..=p along the shared half.
    let mut edges: Vec<Edge> = (0..p).map(|t| Edge { from: t, to: t + 1 }).collect();
    edges.push(Edge { from: p, to: 0 });
    edges.extend((0..p).map(|t| Edge { from: t + 1, to: t }));
    let mut faces = vec![Face::new((0..=p).map(OrientedEdge::fwd).collect())];
    faces.extend((0..p).map(|t| Face::new(vec![OrientedEdge::fwd(p + 1 + t), OrientedEdge::fwd(t)])));
    let complex = Complex2::build(p + 1, edges, faces)?;
    let two_p = 2 * p as i64;
    let mut lambda = vec![r(1, two_p); p];
    lambda.push(r(1, 2));
    lambda.extend(vec![r(two_p - 1, two_p); p]);
    GeometricForm::new(complex, lambda)
}

/// Outer annular face around a disk that a chord splits in two.
///
/// Edges: 0 the outer loop (`8/10`), 1 the chord (`9/10`), 2 and 3 the
/// upper and lower inner arcs (`1/10` each). Face 0 is the outer face,
/// faces 1 and 2 the inner pair.
pub fn counterexample_form() -> GeometricForm {
    let complex = Complex2::build(
        2,
        vec![
            Edge { from: 0, to: 0 },
            Edge { from: 0, to: 1 },
            Edge { from: 0, to: 1 },
            Edge { from: 0, to: 1 },
        ],
        vec![
            Face::from_signed(&[1, 3, -4]),
            Face::from_signed(&[2, -3]),
            Face::from_signed(&[4, -2]),
        ],
    )
    .expect("counterexample complex is valid");
    GeometricForm::new(complex, vec![r(8, 10), r(9, 10), r(1, 10), r(1, 10)])
        .expect("counterexample lengths are valid")
}

/// One face bounded by a single loop of length 1.
pub fn disk_form() -> GeometricForm {
    let complex = Complex2::build(1, vec![Edge { from: 0, to: 0 }], vec![Face::from_signed(&[1])])
        .expect("disk complex is valid");
    GeometricForm::new(complex, vec![Rational64::one()]).expect("disk lengths are valid")
}
