//! Brute-force oracles shared by the integration tests. Everything here is
//! written from the definitions, without calling the search or piece code
//! it checks.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::IndexedRandom;
use rand::Rng;
use randgroups::complex::{oriented_boundary, AbstractLabeling, Complex2, Edge, Face, FaceLabel, OrientedEdge};
use randgroups::words::{invert, Letter, Word};

/// Visits every word of length `n` over `m` generators that satisfies the
/// definition of cyclically reduced; letters are given as indices into
/// `Letter::all(m)`.
pub fn visit_brute_cyclically_reduced(m: u8, n: usize, mut visit: impl FnMut(&[usize])) {
    let letters: Vec<Letter> = Letter::all(m).collect();
    let inverse: Vec<usize> = letters.iter().map(|l| letters.iter().position(|x| *x == l.inverse()).unwrap()).collect();
    let mut idx = vec![0usize; n];
    loop {
        let freely = idx.windows(2).all(|p| p[1] != inverse[p[0]]);
        let wrap = n < 2 || idx[n - 1] != inverse[idx[0]];
        if freely && wrap {
            visit(&idx);
        }
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            idx[k] += 1;
            if idx[k] < letters.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn brute_cyclically_reduced(m: u8, n: usize) -> Vec<Word> {
    let letters: Vec<Letter> = Letter::all(m).collect();
    let mut out = Vec::new();
    visit_brute_cyclically_reduced(m, n, |idx| out.push(idx.iter().map(|&i| letters[i]).collect()));
    out
}

/// Word read along `boundary` given one letter per geometric edge, read
/// forward along the edge.
pub fn read_boundary(boundary: &[OrientedEdge], edge_letters: &[Letter]) -> Word {
    boundary
        .iter()
        .map(|o| if o.forward { edge_letters[o.edge] } else { edge_letters[o.edge].inverse() })
        .collect()
}

/// Edge letters forced by giving face `f` the word `words[f]` (read along its
/// boundary), or `None` on a clash.
pub fn consistent_letters(c: &Complex2, words: &[Word]) -> Option<Vec<Letter>> {
    let mut letters: Vec<Option<Letter>> = vec![None; c.edge_count()];
    for (f, w) in words.iter().enumerate() {
        let b = c.boundary(f);
        if b.len() != w.len() {
            return None;
        }
        for (o, &x) in b.iter().zip(w.letters()) {
            let along = if o.forward { x } else { x.inverse() };
            match letters[o.edge] {
                Some(y) if y != along => return None,
                _ => letters[o.edge] = Some(along),
            }
        }
    }
    letters.into_iter().collect()
}

/// Reduction degree of a van Kampen complex whose face `f` reads
/// `words[f]`: oriented faces carrying the same relator of `relators`, at the
/// same position, on the same geometric edge, counted beyond the first.
pub fn brute_filled_red(c: &Complex2, words: &[Word], relators: &[Word]) -> usize {
    let mut groups: HashMap<(Word, usize, usize), usize> = HashMap::new();
    for (f, w) in words.iter().enumerate() {
        for (inverted, word) in [(false, w.clone()), (true, invert(w))] {
            if !relators.contains(&word) {
                continue;
            }
            for (j, o) in oriented_boundary(c, f, inverted).iter().enumerate() {
                *groups.entry((word.clone(), j, o.edge)).or_default() += 1;
            }
        }
    }
    groups.values().map(|n| n - 1).sum()
}

/// Existence of a filling with the distinct labeling: an injective choice
/// of relators for the faces inducing consistent edge letters, optionally
/// with reduction degree 0.
pub fn brute_fillable(c: &Complex2, relators: &[Word], require_reduced: bool) -> bool {
    fn go(c: &Complex2, relators: &[Word], chosen: &mut Vec<usize>, require_reduced: bool) -> bool {
        let f = chosen.len();
        if f == c.face_count() {
            let words: Vec<Word> = chosen.iter().map(|&i| relators[i].clone()).collect();
            if consistent_letters(c, &words).is_none() {
                return false;
            }
            return !require_reduced || brute_filled_red(c, &words, &words) == 0;
        }
        for i in 0..relators.len() {
            if chosen.contains(&i) || relators[i].len() != c.boundary(f).len() {
                continue;
            }
            chosen.push(i);
            if go(c, relators, chosen, require_reduced) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(c, relators, &mut Vec::new(), require_reduced)
}

/// Readings of a relator set: `r_i` then `r_i⁻¹` for each `i`.
fn readings(relators: &[Word]) -> Vec<Vec<Letter>> {
    relators.iter().flat_map(|r| [r.letters().to_vec(), invert(r).letters().to_vec()]).collect()
}

fn cyclic_sub(r: &[Letter], start: usize, len: usize) -> Vec<Letter> {
    (0..len).map(|k| r[(start + k) % r.len()]).collect()
}

/// Whether the cyclic subword of `len` letters from `start` in reading `w`
/// occurs at a second site: another reading or another start, where a full
/// reading from a second start of the same reading is the same occurrence.
pub fn brute_is_piece(relators: &[Word], w: usize, start: usize, len: usize) -> bool {
    let rs = readings(relators);
    let u = cyclic_sub(&rs[w], start, len);
    for (w2, r2) in rs.iter().enumerate() {
        if r2.len() < len {
            continue;
        }
        for s2 in 0..r2.len() {
            if (w2, s2) == (w, start) || (w2 == w && len == r2.len()) {
                continue;
            }
            if cyclic_sub(r2, s2, len) == u {
                return true;
            }
        }
    }
    false
}

/// Longest piece starting at each site: `out[2i + inverse][start]`.
pub fn brute_maxpiece(relators: &[Word]) -> Vec<Vec<usize>> {
    let rs = readings(relators);
    rs.iter()
        .enumerate()
        .map(|(w, r)| {
            (0..r.len())
                .map(|s| (1..=r.len()).rev().find(|&l| brute_is_piece(relators, w, s, l)).unwrap_or(0))
                .collect()
        })
        .collect()
}

/// `C′(λ)` with `λ = p/q`: every piece of `r` shorter than `λ|r|`.
pub fn brute_cprime(relators: &[Word], p: i64, q: i64) -> bool {
    let rs = readings(relators);
    for (w, r) in rs.iter().enumerate() {
        let n = r.len();
        for s in 0..n {
            for l in 1..=n {
                if brute_is_piece(relators, w, s, l) && l as i64 * q >= p * n as i64 {
                    return false;
                }
            }
        }
    }
    true
}

/// Fewest pieces covering the linear word of `len` letters from `start` in
/// reading `w`, by dynamic programming over every cut.
fn brute_cover(relators: &[Word], w: usize, start: usize, len: usize) -> Option<usize> {
    let n = readings(relators)[w].len();
    let mut best: Vec<Option<usize>> = vec![None; len + 1];
    best[0] = Some(0);
    for end in 1..=len {
        for cut in 0..end {
            let Some(b) = best[cut] else { continue };
            if brute_is_piece(relators, w, (start + cut) % n, end - cut) {
                best[end] = Some(best[end].map_or(b + 1, |x: usize| x.min(b + 1)));
            }
        }
    }
    best[len]
}

/// Fewest pieces whose product is a rotation of `r_i` or `r_i⁻¹`.
pub fn brute_min_factorization(relators: &[Word], i: usize) -> Option<usize> {
    let n = relators[i].len();
    let mut best = None;
    for w in [2 * i, 2 * i + 1] {
        for s in 0..n {
            if let Some(k) = brute_cover(relators, w, s, n) {
                best = Some(best.map_or(k, |b: usize| b.min(k)));
            }
        }
    }
    best
}

pub fn brute_cp(relators: &[Word], p: usize) -> bool {
    (0..relators.len()).all(|i| brute_min_factorization(relators, i).is_none_or(|k| k >= p))
}

pub fn brute_b2p(relators: &[Word], p: usize) -> bool {
    (0..relators.len()).all(|i| {
        let n = relators[i].len();
        (0..n).all(|s| brute_cover(relators, 2 * i, s, n.div_ceil(2)).is_none_or(|k| k >= p))
    })
}

/// A random cyclically reduced word of length `n`, by rejection.
pub fn random_word<R: Rng>(m: u8, n: usize, rng: &mut R) -> Word {
    let letters: Vec<Letter> = Letter::all(m).collect();
    loop {
        let w: Vec<Letter> = (0..n).map(|_| letters[rng.random_range(0..letters.len())]).collect();
        let w = Word::new(w);
        if w.is_cyclically_reduced() {
            return w;
        }
    }
}

/// Up to `count` distinct random cyclically reduced words with lengths in
/// `lengths`.
pub fn random_relators<R: Rng>(m: u8, lengths: std::ops::RangeInclusive<usize>, count: usize, rng: &mut R) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for _ in 0..count * 4 {
        if out.len() == count {
            break;
        }
        let w = random_word(m, rng.random_range(lengths.clone()), rng);
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// A random connected 2-complex with at most `max_faces` faces of boundary
/// length at most `max_len`, built from closed, cyclically reduced walks in
/// a random multigraph. Edges no face uses are dropped.
pub fn random_complex<R: Rng>(max_faces: usize, max_len: usize, rng: &mut R) -> Option<Complex2> {
    let v = rng.random_range(1..=4);
    let e = rng.random_range(1..=7);
    let edges: Vec<Edge> = (0..e).map(|_| Edge { from: rng.random_range(0..v), to: rng.random_range(0..v) }).collect();
    let faces_wanted = rng.random_range(1..=max_faces);
    let mut faces = Vec::new();
    let mut attempts = 0;
    while faces.len() < faces_wanted && attempts < 200 {
        attempts += 1;
        if let Some(walk) = random_closed_walk(&edges, v, max_len, rng) {
            faces.push(walk);
        }
    }
    if faces.is_empty() {
        return None;
    }
    // Keep used edges and vertices, renumbered.
    let mut edge_map = vec![usize::MAX; e];
    let mut vert_map = vec![usize::MAX; v];
    let mut new_edges = Vec::new();
    let mut vcount = 0;
    for face in &faces {
        for o in face {
            let o: &OrientedEdge = o;
            if edge_map[o.edge] == usize::MAX {
                edge_map[o.edge] = new_edges.len();
                let Edge { from, to } = edges[o.edge];
                for x in [from, to] {
                    if vert_map[x] == usize::MAX {
                        vert_map[x] = vcount;
                        vcount += 1;
                    }
                }
                new_edges.push(Edge { from: vert_map[from], to: vert_map[to] });
            }
        }
    }
    let faces = faces
        .into_iter()
        .map(|f| Face::new(f.into_iter().map(|o| OrientedEdge { edge: edge_map[o.edge], ..o }).collect()))
        .collect();
    let c = Complex2::build(vcount, new_edges, faces).ok()?;
    c.is_connected().then_some(c)
}

fn random_closed_walk<R: Rng>(edges: &[Edge], v: usize, max_len: usize, rng: &mut R) -> Option<Vec<OrientedEdge>> {
    let start = rng.random_range(0..v);
    let len = rng.random_range(1..=max_len);
    let mut walk: Vec<OrientedEdge> = Vec::new();
    let mut at = start;
    for step in 0..len {
        let mut options: Vec<OrientedEdge> = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            if e.from == at {
                options.push(OrientedEdge::fwd(i));
            }
            if e.to == at {
                options.push(OrientedEdge::rev(i));
            }
        }
        if let Some(&last) = walk.last() {
            options.retain(|&o| o != last.inverse());
        }
        if step + 1 == len {
            options.retain(|&o| {
                let end = if o.forward { edges[o.edge].to } else { edges[o.edge].from };
                end == start && walk.first().is_none_or(|&first| first != o.inverse())
            });
        }
        let &o = options.choose(rng)?;
        at = if o.forward { edges[o.edge].to } else { edges[o.edge].from };
        walk.push(o);
    }
    Some(walk)
}

/// A random abstract labeling: faces of equal length may share a relator,
/// in either orientation.
pub fn random_labeling<R: Rng>(c: &Complex2, rng: &mut R) -> AbstractLabeling {
    let mut relator_len: Vec<usize> = Vec::new();
    let mut labels = Vec::new();
    for f in 0..c.face_count() {
        let len = c.boundary(f).len();
        let same: Vec<usize> = (0..relator_len.len()).filter(|&i| relator_len[i] == len).collect();
        let relator = if !same.is_empty() && rng.random_bool(0.6) {
            *same.choose(rng).unwrap()
        } else {
            relator_len.push(len);
            relator_len.len() - 1
        };
        labels.push(FaceLabel { relator, inverted: rng.random_bool(0.3) });
    }
    AbstractLabeling::new(c, labels).expect("labels are consecutive and length-consistent")
}

/// `(Σ α_i η_i, |Y^{(1)}| + Red(Y))` straight from the definitions.
pub fn brute_free_to_fill(c: &Complex2, lab: &AbstractLabeling) -> (usize, usize) {
    // Abstract letters on each geometric edge.
    let mut on_edge: Vec<Vec<(usize, usize)>> = vec![Vec::new(); c.edge_count()];
    let mut red: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for f in 0..c.face_count() {
        let l = lab.label(f);
        for (j, o) in oriented_boundary(c, f, l.inverted).iter().enumerate() {
            on_edge[o.edge].push((l.relator, j));
            *red.entry((o.edge, l.relator, j)).or_default() += 1;
        }
    }
    let red: usize = red.values().map(|n| n - 1).sum();
    let mut lhs = 0;
    for i in 0..lab.k() {
        let alpha = (0..c.face_count()).filter(|&f| lab.label(f).relator == i).count();
        let eta = (0..lab.lengths()[i])
            .filter(|&j| {
                on_edge.iter().all(|letters| !letters.contains(&(i, j)) || letters.iter().min() == Some(&(i, j)))
            })
            .count();
        lhs += alpha * eta;
    }
    (lhs, c.edge_count() + red)
}
