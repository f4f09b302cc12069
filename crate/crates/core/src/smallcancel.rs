//! Pieces and the small-cancellation conditions `C′(λ)`, `C(p)` and `B(2p)`.
//!
//! A piece is a cyclic subword occurring at two distinct sites of the
//! relator set, where a site is a relator, a start position and an
//! orientation (the relator or its inverse). Occurrences at different
//! positions of one relator count, so `{aa}` has the piece `a`. An
//! occurrence never wraps past one full period, and reading a relator in
//! full from two starts is one occurrence, not two.

use std::fmt;

use num_rational::Rational64;

use crate::words::{invert, Word};

/// Where a cyclic subword starts: `relator` read forward, or its inverse
/// read forward, from position `start`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Site {
    pub relator: usize,
    pub start: usize,
    pub inverse: bool,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.inverse { '-' } else { '+' };
        write!(f, "r{}@{}{}", self.relator + 1, self.start, sign)
    }
}

/// Longest piece starting at every site.
#[derive(Clone, Debug)]
pub struct PieceTable {
    /// The relators and their inverses: `readings[2i]` is `r_i`,
    /// `readings[2i + 1]` is `r_i⁻¹`.
    readings: Vec<Word>,
    maxpiece: Vec<Vec<usize>>,
}

impl PieceTable {
    pub fn new(relators: &[Word]) -> PieceTable {
        let readings: Vec<Word> = relators.iter().flat_map(|r| [r.clone(), invert(r)]).collect();
        let sites: Vec<(usize, usize)> =
            readings.iter().enumerate().flat_map(|(w, r)| (0..r.len()).map(move |s| (w, s))).collect();
        let rotation = |&(w, s): &(usize, usize)| {
            let r = readings[w].letters();
            r[s..].iter().chain(&r[..s])
        };
        let mut sorted: Vec<usize> = (0..sites.len()).collect();
        sorted.sort_by(|&a, &b| rotation(&sites[a]).cmp(rotation(&sites[b])).then(a.cmp(&b)));
        // lcp[i] = common prefix of the rotations at sorted[i−1] and sorted[i].
        let lcp: Vec<usize> = (0..sorted.len())
            .map(|i| {
                if i == 0 {
                    0
                } else {
                    rotation(&sites[sorted[i - 1]]).zip(rotation(&sites[sorted[i]])).take_while(|(x, y)| x == y).count()
                }
            })
            .collect();
        let cap = |a: usize, b: usize, common: usize| {
            let (wa, sa) = sites[a];
            let (wb, _) = sites[b];
            let full = readings[wa].len();
            if wa == wb && common >= full {
                debug_assert_ne!(sa, sites[b].1);
                full - 1
            } else {
                common
            }
        };
        let mut maxpiece: Vec<Vec<usize>> = readings.iter().map(|r| vec![0; r.len()]).collect();
        for i in 0..sorted.len() {
            let a = sorted[i];
            let mut best = 0;
            // The common prefix with a farther entry is at most the running
            // minimum of adjacent prefixes, so stop once that cannot win.
            let mut bound = usize::MAX;
            for j in i + 1..sorted.len() {
                bound = bound.min(lcp[j]);
                if bound <= best {
                    break;
                }
                best = best.max(cap(a, sorted[j], bound));
            }
            bound = usize::MAX;
            for j in (0..i).rev() {
                bound = bound.min(lcp[j + 1]);
                if bound <= best {
                    break;
                }
                best = best.max(cap(a, sorted[j], bound));
            }
            let (w, s) = sites[a];
            maxpiece[w][s] = best;
        }
        PieceTable { readings, maxpiece }
    }

    pub fn relator_count(&self) -> usize {
        self.readings.len() / 2
    }

    pub fn relator(&self, i: usize) -> &Word {
        &self.readings[2 * i]
    }

    fn reading(&self, site: Site) -> &Word {
        &self.readings[2 * site.relator + usize::from(site.inverse)]
    }

    /// Length of the longest piece starting at `site`.
    pub fn maxpiece(&self, site: Site) -> usize {
        self.maxpiece[2 * site.relator + usize::from(site.inverse)][site.start]
    }

    /// The cyclic subword of length `len` read from `site`.
    pub fn subword(&self, site: Site, len: usize) -> Word {
        let r = self.reading(site);
        (0..len).map(|k| r.cyclic(site.start + k)).collect()
    }

    /// Every site of every relator, in `(relator, orientation, start)` order.
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.relator_count()).flat_map(move |relator| {
            let n = self.relator(relator).len();
            [false, true]
                .into_iter()
                .flat_map(move |inverse| (0..n).map(move |start| Site { relator, start, inverse }))
        })
    }

    /// A second site where the piece of length `len` at `site` occurs.
    pub fn other_occurrence(&self, site: Site, len: usize) -> Option<Site> {
        let u = self.subword(site, len);
        self.sites().find(|&t| {
            t != site
                && self.relator(t.relator).len() >= len
                && !(t.relator == site.relator && t.inverse == site.inverse && len == self.relator(t.relator).len())
                && self.subword(t, len) == u
        })
    }

    /// Fewest pieces whose product is a rotation of `r_i` or of `r_i⁻¹`, or
    /// `None` when no such factorization exists.
    pub fn min_piece_factorization(&self, i: usize) -> Option<usize> {
        self.best_factorization(i).map(|(_, cuts)| cuts.len())
    }

    /// Greedy furthest-jump factorization from every rotation start; pieces
    /// are prefix-closed, so greedy is optimal for each start.
    fn best_factorization(&self, relator: usize) -> Option<(Site, Vec<usize>)> {
        let n = self.relator(relator).len();
        let mut best: Option<(Site, Vec<usize>)> = None;
        for inverse in [false, true] {
            for start in 0..n {
                let origin = Site { relator, start, inverse };
                let Some(lengths) = self.greedy(origin, n) else { continue };
                if best.as_ref().is_none_or(|(_, b)| lengths.len() < b.len()) {
                    best = Some((origin, lengths));
                }
            }
        }
        best
    }

    /// Greedy factorization of the linear subword of length `len` read
    /// from `origin`; returns the piece lengths.
    fn greedy(&self, origin: Site, len: usize) -> Option<Vec<usize>> {
        let n = self.relator(origin.relator).len();
        let mut pos = 0;
        let mut lengths = Vec::new();
        while pos < len {
            let site = Site { start: (origin.start + pos) % n, ..origin };
            let jump = self.maxpiece(site).min(len - pos);
            if jump == 0 {
                return None;
            }
            lengths.push(jump);
            pos += jump;
        }
        Some(lengths)
    }

    fn pieces(&self, origin: Site, lengths: &[usize]) -> Vec<Word> {
        let n = self.relator(origin.relator).len();
        let mut pos = 0;
        lengths
            .iter()
            .map(|&l| {
                let w = self.subword(Site { start: (origin.start + pos) % n, ..origin }, l);
                pos += l;
                w
            })
            .collect()
    }
}

/// A piece that is too long, with two sites where it occurs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PieceWitness {
    pub piece: Word,
    pub relator: usize,
    pub site: Site,
    pub other: Site,
}

impl fmt::Display for PieceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {} and {}", self.piece, self.site, self.other)
    }
}

/// A relator, or half of one, written as a product of too few pieces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactorWitness {
    pub relator: usize,
    pub origin: Site,
    pub pieces: Vec<Word>,
}

impl fmt::Display for FactorWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pieces: Vec<String> = self.pieces.iter().map(ToString::to_string).collect();
        write!(f, "{} from {} = {}", self.pieces.len(), self.origin, pieces.join("."))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Check<W> {
    fn from_witness(witness: Option<W>) -> Check<W> {
        Check { holds: witness.is_none(), witness }
    }
}

pub fn piece_table(relators: &[Word]) -> PieceTable {
    PieceTable::new(relators)
}

/// `C′(λ)`: every piece `u` of a relator `r` has `|u| < λ|r|`.
pub fn check_cprime(relators: &[Word], lambda: Rational64) -> Check<PieceWitness> {
    check_cprime_table(&PieceTable::new(relators), lambda)
}

pub fn check_cprime_table(table: &PieceTable, lambda: Rational64) -> Check<PieceWitness> {
    let (p, q) = (*lambda.numer(), *lambda.denom());
    let mut worst: Option<(usize, Site)> = None;
    for site in table.sites() {
        let len = table.maxpiece(site);
        let n = table.relator(site.relator).len() as i64;
        if len > 0 && len as i64 * q >= p * n && worst.is_none_or(|(l, _)| len > l) {
            worst = Some((len, site));
        }
    }
    Check::from_witness(worst.map(|(len, site)| PieceWitness {
        piece: table.subword(site, len),
        relator: site.relator,
        site,
        other: table.other_occurrence(site, len).expect("a piece occurs twice"),
    }))
}

/// `C(p)`: no relator is a product of fewer than `p` pieces.
pub fn check_cp(relators: &[Word], p: usize) -> Check<FactorWitness> {
    check_cp_table(&PieceTable::new(relators), p)
}

pub fn check_cp_table(table: &PieceTable, p: usize) -> Check<FactorWitness> {
    let witness = (0..table.relator_count()).find_map(|i| {
        let (origin, lengths) = table.best_factorization(i)?;
        (lengths.len() < p).then(|| FactorWitness { relator: i, origin, pieces: table.pieces(origin, &lengths) })
    });
    Check::from_witness(witness)
}

/// `B(2p)`: no cyclic subword of length `⌈|r|/2⌉` is a product of fewer
/// than `p` pieces.
pub fn check_b2p(relators: &[Word], p: usize) -> Check<FactorWitness> {
    check_b2p_table(&PieceTable::new(relators), p)
}

pub fn check_b2p_table(table: &PieceTable, p: usize) -> Check<FactorWitness> {
    for relator in 0..table.relator_count() {
        let n = table.relator(relator).len();
        let half = n.div_ceil(2);
        for start in 0..n {
            let origin = Site { relator, start, inverse: false };
            if let Some(lengths) = table.greedy(origin, half) {
                if lengths.len() < p {
                    let pieces = table.pieces(origin, &lengths);
                    return Check::from_witness(Some(FactorWitness { relator, origin, pieces }));
                }
            }
        }
    }
    Check::from_witness(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    /// Direct definition: the prefix of length `len` at `s` occurs at another site.
    fn is_piece(t: &PieceTable, s: Site, len: usize) -> bool {
        t.other_occurrence(s, len).is_some()
    }

    fn brute_maxpiece(t: &PieceTable, s: Site) -> usize {
        let n = t.relator(s.relator).len();
        (1..=n).filter(|&l| is_piece(t, s, l)).max().unwrap_or(0)
    }

    #[test]
    fn no_pieces_in_ab() {
        let t = piece_table(&words(&["ab"]));
        assert!(t.sites().all(|s| t.maxpiece(s) == 0));
        assert!(check_cprime(&words(&["ab"]), Rational64::new(1, 6)).holds);
        assert_eq!(t.min_piece_factorization(0), None);
        assert!(check_cp(&words(&["ab"]), 7).holds);
        assert!(check_b2p(&words(&["ab"]), 7).holds);
    }

    #[test]
    fn aa_has_the_piece_a() {
        let r = words(&["aa"]);
        let t = piece_table(&r);
        assert_eq!(t.maxpiece(Site { relator: 0, start: 0, inverse: false }), 1);
        assert_eq!(t.maxpiece(Site { relator: 0, start: 1, inverse: false }), 1);
        let c = check_cprime(&r, Rational64::new(1, 2));
        assert!(!c.holds);
        assert_eq!(c.witness.unwrap().piece.to_string(), "a");
        assert_eq!(t.min_piece_factorization(0), Some(2));
        assert!(!check_cp(&r, 3).holds);
        assert!(check_cp(&r, 2).holds);
        assert!(!check_b2p(&r, 2).holds);
    }

    #[test]
    fn table_matches_definition() {
        for r in [
            words(&["aabb", "abab"]),
            words(&["abAB", "aabAB"]),
            words(&["aaab", "bbba", "abaB"]),
            words(&["abab"]),
        ] {
            let t = piece_table(&r);
            for s in t.sites() {
                assert_eq!(t.maxpiece(s), brute_maxpiece(&t, s), "{r:?} {s}");
            }
        }
    }

    #[test]
    fn periodic_relator_caps_below_full_length() {
        let t = piece_table(&words(&["abab"]));
        assert_eq!(t.maxpiece(Site { relator: 0, start: 0, inverse: false }), 3);
    }

    #[test]
    fn rotations_are_full_pieces() {
        let r = words(&["aab", "aba"]);
        let t = piece_table(&r);
        assert_eq!(t.maxpiece(Site { relator: 0, start: 0, inverse: false }), 3);
        assert_eq!(t.min_piece_factorization(0), Some(1));
    }

    #[test]
    fn witness_names_two_sites() {
        let r = words(&["aabb", "abab"]);
        let c = check_cprime(&r, Rational64::new(1, 4));
        let w = c.witness.unwrap();
        let t = piece_table(&r);
        assert_ne!(w.site, w.other);
        assert_eq!(t.subword(w.site, w.piece.len()), w.piece);
        assert_eq!(t.subword(w.other, w.piece.len()), w.piece);
    }
}
