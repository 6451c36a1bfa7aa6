//! Finite point-line incidence structures with 3-point lines.
//!
//! This is the carrier for everything downstream: projective models,
//! the nested configurations, combinatorial Grassmannians and Veldkamp
//! spaces are all values of [`IncidenceStructure`]. Point identifiers are
//! opaque labels; operations work on dense internal ids.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IncidenceError {
    #[error("duplicate point label {0:?}")]
    DuplicatePoint(String),
    #[error("line {0:?} must have three distinct known points")]
    MalformedLine([String; 3]),
    #[error("duplicate line {0:?}")]
    DuplicateLine([String; 3]),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("structure has no points")]
    Empty,
    #[error("point {a:?} lies on {a_degree} lines but {b:?} on {b_degree}")]
    NotRegular {
        a: String,
        a_degree: usize,
        b: String,
        b_degree: usize,
    },
    #[error("lines {0:?} and {1:?} share two or more points")]
    NotLinear([String; 3], [String; 3]),
    #[error("ground set of size {0} is too small")]
    GroundSetTooSmall(u32),
}

/// Binomial coefficient, saturating at u64 range we never approach here.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result = 1u64;
    for i in 0..k {
        result = result * (n - i) / (i + 1);
    }
    result
}

/// A finite set of labelled points and a set of 3-point lines over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    labels: Vec<String>,
    ids: BTreeMap<String, usize>,
    /// Sorted triples of point ids, lexicographically ordered, no duplicates.
    lines: Vec<[usize; 3]>,
    /// Per point, the ids of incident lines.
    point_lines: Vec<Vec<usize>>,
    /// Flat `v × v` matrix of common-line counts per point pair.
    pair_counts: Vec<u8>,
}

impl IncidenceStructure {
    pub fn new(labels: Vec<String>, lines: Vec<[String; 3]>) -> Result<Self, IncidenceError> {
        let mut ids = BTreeMap::new();
        for (i, label) in labels.iter().enumerate() {
            if ids.insert(label.clone(), i).is_some() {
                return Err(IncidenceError::DuplicatePoint(label.clone()));
            }
        }
        let mut id_lines = Vec::with_capacity(lines.len());
        for line in &lines {
            let mut triple = [0usize; 3];
            for (slot, label) in triple.iter_mut().zip(line.iter()) {
                *slot = *ids
                    .get(label)
                    .ok_or_else(|| IncidenceError::MalformedLine(line.clone()))?;
            }
            triple.sort_unstable();
            if triple[0] == triple[1] || triple[1] == triple[2] {
                return Err(IncidenceError::MalformedLine(line.clone()));
            }
            id_lines.push(triple);
        }
        id_lines.sort_unstable();
        if let Some(w) = id_lines.windows(2).find(|w| w[0] == w[1]) {
            let dup = w[0].map(|id| labels[id].clone());
            return Err(IncidenceError::DuplicateLine(dup));
        }

        let mut point_lines = vec![Vec::new(); labels.len()];
        let v = labels.len();
        let mut pair_counts = vec![0u8; v * v];
        for (li, line) in id_lines.iter().enumerate() {
            for &p in line {
                point_lines[p].push(li);
            }
            for (i, &p) in line.iter().enumerate() {
                for &q in &line[i + 1..] {
                    pair_counts[p * v + q] = pair_counts[p * v + q].saturating_add(1);
                    pair_counts[q * v + p] = pair_counts[q * v + p].saturating_add(1);
                }
            }
        }
        Ok(IncidenceStructure {
            labels,
            ids,
            lines: id_lines,
            point_lines,
            pair_counts,
        })
    }

    pub fn from_numeric(points: Vec<u32>, lines: Vec<[u32; 3]>) -> Result<Self, IncidenceError> {
        Self::new(
            points.iter().map(u32::to_string).collect(),
            lines
                .into_iter()
                .map(|l| l.map(|p| p.to_string()))
                .collect(),
        )
    }

    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.ids.get(label).copied()
    }

    pub fn lines(&self) -> &[[usize; 3]] {
        &self.lines
    }

    pub fn lines_through(&self, id: usize) -> &[usize] {
        &self.point_lines[id]
    }

    /// Number of lines containing both points.
    pub fn common_lines(&self, p: usize, q: usize) -> usize {
        self.pair_counts[p * self.point_count() + q] as usize
    }

    pub fn collinear(&self, p: usize, q: usize) -> bool {
        p != q && self.common_lines(p, q) > 0
    }

    /// Graph distance in the collinearity graph; `None` when unreachable.
    pub fn distance_by_id(&self, from: usize, to: usize) -> Option<usize> {
        if from == to {
            return Some(0);
        }
        let mut dist = vec![usize::MAX; self.point_count()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(p) = queue.pop_front() {
            for &li in &self.point_lines[p] {
                for &q in &self.lines[li] {
                    if dist[q] == usize::MAX {
                        dist[q] = dist[p] + 1;
                        if q == to {
                            return Some(dist[q]);
                        }
                        queue.push_back(q);
                    }
                }
            }
        }
        None
    }

    /// Label-facing variant of [`IncidenceStructure::distance_by_id`].
    pub fn distance(&self, from: &str, to: &str) -> Result<Option<usize>, IncidenceError> {
        let f = self
            .id_of(from)
            .ok_or_else(|| IncidenceError::UnknownPoint(from.to_string()))?;
        let t = self
            .id_of(to)
            .ok_or_else(|| IncidenceError::UnknownPoint(to.to_string()))?;
        Ok(self.distance_by_id(f, t))
    }

    /// Connected components of the collinearity graph, isolated points included.
    /// Components and their members come out sorted by id.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.point_count()];
        let mut components = Vec::new();
        for start in 0..self.point_count() {
            if seen[start] {
                continue;
            }
            let mut component = vec![start];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                for &li in &self.point_lines[p] {
                    for &q in &self.lines[li] {
                        if !seen[q] {
                            seen[q] = true;
                            component.push(q);
                            queue.push_back(q);
                        }
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// Sub-structure on a point subset: keeps the subset's labels and every
    /// line lying entirely inside it.
    pub fn induced(&self, subset: &[usize]) -> IncidenceStructure {
        let subset: BTreeSet<usize> = subset.iter().copied().collect();
        let labels: Vec<String> = subset.iter().map(|&id| self.labels[id].clone()).collect();
        let lines = self
            .lines
            .iter()
            .filter(|line| line.iter().all(|p| subset.contains(p)))
            .map(|line| line.map(|p| self.labels[p].clone()))
            .collect();
        IncidenceStructure::new(labels, lines).expect("induced substructure is well formed")
    }

    /// Validates the configuration axioms and returns the parameters.
    pub fn configuration_params(&self) -> Result<ConfigParams, IncidenceError> {
        if self.labels.is_empty() {
            return Err(IncidenceError::Empty);
        }
        let r = self.point_lines[0].len();
        for (id, incident) in self.point_lines.iter().enumerate() {
            if incident.len() != r {
                return Err(IncidenceError::NotRegular {
                    a: self.labels[0].clone(),
                    a_degree: r,
                    b: self.labels[id].clone(),
                    b_degree: incident.len(),
                });
            }
        }
        let v = self.point_count();
        for p in 0..v {
            for q in p + 1..v {
                if self.common_lines(p, q) > 1 {
                    let shared: Vec<usize> = self.point_lines[p]
                        .iter()
                        .filter(|li| self.lines[**li].contains(&q))
                        .copied()
                        .collect();
                    return Err(IncidenceError::NotLinear(
                        self.lines[shared[0]].map(|id| self.labels[id].clone()),
                        self.lines[shared[1]].map(|id| self.labels[id].clone()),
                    ));
                }
            }
        }
        Ok(ConfigParams {
            v,
            r,
            b: self.line_count(),
            k: 3,
        })
    }

    /// True iff the structure is a configuration with the binomial parameters
    /// of nesting step `n`: `C(n+1, 2)` points on `n-1` lines each and
    /// `C(n+1, 3)` three-point lines.
    pub fn is_binomial(&self, n: u32) -> bool {
        match self.configuration_params() {
            Ok(params) => {
                params.v as u64 == binomial(u64::from(n) + 1, 2)
                    && params.b as u64 == binomial(u64::from(n) + 1, 3)
                    && params.r as u64 == u64::from(n) - 1
                    && params.k == 3
            }
            Err(_) => false,
        }
    }
}

/// Parameters `(v_r, b_k)` of a validated configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ConfigParams {
    /// Point count.
    pub v: usize,
    /// Lines per point.
    pub r: usize,
    /// Line count.
    pub b: usize,
    /// Points per line (always 3 here).
    pub k: usize,
}

/// Combinatorial Grassmannian `G_2(m)`: points are 2-subsets of `{1..m}`,
/// lines are the pair-triples of each 3-subset, incidence by inclusion.
pub fn grassmannian(m: u32) -> Result<IncidenceStructure, IncidenceError> {
    if m < 2 {
        return Err(IncidenceError::GroundSetTooSmall(m));
    }
    let pair = |i: u32, j: u32| format!("{{{i},{j}}}");
    let mut labels = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            labels.push(pair(i, j));
        }
    }
    let mut lines = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            for k in j + 1..=m {
                lines.push([pair(i, j), pair(i, k), pair(j, k)]);
            }
        }
    }
    IncidenceStructure::new(labels, lines)
}

/// Pasch sub-configurations: 4-subsets of lines whose six pairwise
/// intersections are six distinct points. Returns the sorted 6-point sets.
pub fn pasch_sets(s: &IncidenceStructure) -> Vec<[usize; 6]> {
    let b = s.line_count();
    // single common point of two lines, if the intersection is exactly one
    let meet = |i: usize, j: usize| -> Option<usize> {
        let mut found = None;
        for &p in &s.lines()[i] {
            if s.lines()[j].contains(&p) {
                if found.is_some() {
                    return None;
                }
                found = Some(p);
            }
        }
        found
    };
    let mut meets = vec![None; b * b];
    for i in 0..b {
        for j in i + 1..b {
            let m = meet(i, j);
            meets[i * b + j] = m;
            meets[j * b + i] = m;
        }
    }
    let mut result = Vec::new();
    for i in 0..b {
        for j in i + 1..b {
            let Some(pij) = meets[i * b + j] else { continue };
            for k in j + 1..b {
                let (Some(pik), Some(pjk)) = (meets[i * b + k], meets[j * b + k]) else {
                    continue;
                };
                if pik == pij || pjk == pij || pik == pjk {
                    continue;
                }
                for l in k + 1..b {
                    let (Some(pil), Some(pjl), Some(pkl)) =
                        (meets[i * b + l], meets[j * b + l], meets[k * b + l])
                    else {
                        continue;
                    };
                    let mut points = [pij, pik, pjk, pil, pjl, pkl];
                    points.sort_unstable();
                    if points.windows(2).all(|w| w[0] != w[1]) {
                        result.push(points);
                    }
                }
            }
        }
    }
    result
}

pub fn count_pasch(s: &IncidenceStructure) -> usize {
    pasch_sets(s).len()
}

/// A line-preserving point bijection from one structure onto another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismWitness {
    map: Vec<usize>,
}

impl IsomorphismWitness {
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image_of(&self, id: usize) -> usize {
        self.map[id]
    }

    pub fn inverse(&self) -> IsomorphismWitness {
        let mut map = vec![0; self.map.len()];
        for (from, &to) in self.map.iter().enumerate() {
            map[to] = from;
        }
        IsomorphismWitness { map }
    }

    /// The mapping as label pairs, in source id order.
    pub fn pairs(&self, a: &IncidenceStructure, b: &IncidenceStructure) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(from, &to)| (a.label(from).to_string(), b.label(to).to_string()))
            .collect()
    }

    /// Post-hoc check: the map is a bijection carrying lines onto lines.
    pub fn verify(&self, a: &IncidenceStructure, b: &IncidenceStructure) -> bool {
        if self.map.len() != a.point_count() || a.point_count() != b.point_count() {
            return false;
        }
        let mut seen = vec![false; self.map.len()];
        for &to in &self.map {
            if to >= seen.len() || seen[to] {
                return false;
            }
            seen[to] = true;
        }
        if a.line_count() != b.line_count() {
            return false;
        }
        let b_lines: BTreeSet<[usize; 3]> = b.lines().iter().copied().collect();
        let mut images = BTreeSet::new();
        for line in a.lines() {
            let mut image = line.map(|p| self.map[p]);
            image.sort_unstable();
            if !b_lines.contains(&image) || !images.insert(image) {
                return false;
            }
        }
        true
    }
}

/// Backtracking search state shared by the isomorphism entry points.
struct IsoSearch<'a> {
    a: &'a IncidenceStructure,
    b: &'a IncidenceStructure,
    color_a: Vec<usize>,
    color_b: Vec<usize>,
    b_lines: BTreeSet<[usize; 3]>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    mapped: usize,
}

impl<'a> IsoSearch<'a> {
    fn search(&mut self) -> bool {
        let v = self.a.point_count();
        if self.mapped == v {
            return true;
        }
        // Forced step: an a-line with two mapped points pins down the third's
        // image whenever the image pair lies on a unique b-line.
        for line in self.a.lines() {
            let mapped: Vec<usize> = line.iter().copied().filter(|&p| self.map[p].is_some()).collect();
            if mapped.len() != 2 {
                continue;
            }
            let free = *line.iter().find(|&&p| self.map[p].is_none()).unwrap();
            let (q1, q2) = (self.map[mapped[0]].unwrap(), self.map[mapped[1]].unwrap());
            if self.b.common_lines(q1, q2) == 0 {
                return false;
            }
            if self.b.common_lines(q1, q2) == 1 {
                let bline = self.b.lines_through(q1).iter().copied().find(|&li| {
                    self.b.lines()[li].contains(&q2)
                });
                let bline = &self.b.lines()[bline.unwrap()];
                let target = *bline.iter().find(|&&q| q != q1 && q != q2).unwrap();
                return self.try_assign(free, target);
            }
        }
        // Branch on the unmapped point with the fewest same-color candidates.
        let mut best: Option<(usize, usize)> = None;
        for p in 0..v {
            if self.map[p].is_some() {
                continue;
            }
            let candidates = (0..v)
                .filter(|&q| !self.used[q] && self.color_b[q] == self.color_a[p])
                .count();
            if best.map_or(true, |(_, n)| candidates < n) {
                best = Some((p, candidates));
            }
        }
        let (p, _) = best.expect("an unmapped point exists");
        for q in 0..v {
            if !self.used[q] && self.color_b[q] == self.color_a[p] && self.try_assign(p, q) {
                return true;
            }
        }
        false
    }

    fn try_assign(&mut self, p: usize, q: usize) -> bool {
        if self.used[q] || self.color_a[p] != self.color_b[q] || !self.consistent(p, q) {
            return false;
        }
        self.map[p] = Some(q);
        self.used[q] = true;
        self.mapped += 1;
        if self.search() {
            return true;
        }
        self.map[p] = None;
        self.used[q] = false;
        self.mapped -= 1;
        false
    }

    fn consistent(&self, p: usize, q: usize) -> bool {
        for (r, image) in self.map.iter().enumerate() {
            let Some(&s) = image.as_ref() else { continue };
            if self.a.common_lines(p, r) != self.b.common_lines(q, s) {
                return false;
            }
        }
        // lines through p that become fully mapped must land on b-lines
        for &li in self.a.lines_through(p) {
            let line = &self.a.lines()[li];
            if line.iter().all(|&r| r == p || self.map[r].is_some()) {
                let mut image = line.map(|r| if r == p { q } else { self.map[r].unwrap() });
                image.sort_unstable();
                if !self.b_lines.contains(&image) {
                    return false;
                }
            }
        }
        true
    }
}

/// Pasch membership enters the point invariants only while the 4-subset
/// enumeration stays cheap.
const PASCH_INVARIANT_MAX_LINES: usize = 64;

/// Invariant key of a point: external class, degree, distance profile and
/// Pasch membership count. Comparable across the two structures.
type PointKey = (usize, usize, Vec<usize>, usize);

fn point_keys(s: &IncidenceStructure, external: &[usize], use_pasch: bool) -> Vec<PointKey> {
    let v = s.point_count();
    let mut pasch_count = vec![0usize; v];
    if use_pasch {
        for set in pasch_sets(s) {
            for p in set {
                pasch_count[p] += 1;
            }
        }
    }
    (0..v)
        .map(|p| {
            let mut distances: Vec<usize> = (0..v)
                .filter(|&q| q != p)
                .map(|q| s.distance_by_id(p, q).unwrap_or(usize::MAX))
                .collect();
            distances.sort_unstable();
            (
                external[p],
                s.lines_through(p).len(),
                distances,
                pasch_count[p],
            )
        })
        .collect()
}

/// Ranks arbitrary keys over both structures into small color ids; returns
/// `None` when the color histograms differ (no isomorphism can exist).
fn canonical_colors<K: Ord + Clone>(keys_a: &[K], keys_b: &[K]) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut all: Vec<&K> = keys_a.iter().chain(keys_b.iter()).collect();
    all.sort_unstable();
    all.dedup();
    let rank = |k: &K| all.binary_search(&k).unwrap();
    let colors_a: Vec<usize> = keys_a.iter().map(&rank).collect();
    let colors_b: Vec<usize> = keys_b.iter().map(&rank).collect();
    let histogram = |colors: &[usize]| {
        let mut h = BTreeMap::new();
        for &c in colors {
            *h.entry(c).or_insert(0usize) += 1;
        }
        h
    };
    if histogram(&colors_a) != histogram(&colors_b) {
        return None;
    }
    Some((colors_a, colors_b))
}

/// One refinement round: a point's new key is its color plus the multiset of
/// color pairs it sees across its lines.
fn refine_once(s: &IncidenceStructure, colors: &[usize]) -> Vec<(usize, Vec<(usize, usize)>)> {
    (0..s.point_count())
        .map(|p| {
            let mut seen: Vec<(usize, usize)> = s
                .lines_through(p)
                .iter()
                .map(|&li| {
                    let others: Vec<usize> = s.lines()[li]
                        .iter()
                        .copied()
                        .filter(|&q| q != p)
                        .map(|q| colors[q])
                        .collect();
                    (others[0].min(others[1]), others[0].max(others[1]))
                })
                .collect();
            seen.sort_unstable();
            (colors[p], seen)
        })
        .collect()
}

fn isomorphic_inner(
    a: &IncidenceStructure,
    b: &IncidenceStructure,
    external_a: &[usize],
    external_b: &[usize],
) -> Option<IsomorphismWitness> {
    if a.point_count() != b.point_count() || a.line_count() != b.line_count() {
        return None;
    }
    if a.point_count() == 0 {
        return Some(IsomorphismWitness { map: Vec::new() });
    }
    let use_pasch = a.line_count() <= PASCH_INVARIANT_MAX_LINES;
    let (mut color_a, mut color_b) = canonical_colors(
        &point_keys(a, external_a, use_pasch),
        &point_keys(b, external_b, use_pasch),
    )?;
    loop {
        let classes = color_a.iter().collect::<BTreeSet<_>>().len();
        let (next_a, next_b) =
            canonical_colors(&refine_once(a, &color_a), &refine_once(b, &color_b))?;
        let next_classes = next_a.iter().collect::<BTreeSet<_>>().len();
        color_a = next_a;
        color_b = next_b;
        if next_classes == classes {
            break;
        }
    }
    let mut search = IsoSearch {
        a,
        b,
        color_a,
        color_b,
        b_lines: b.lines().iter().copied().collect(),
        map: vec![None; a.point_count()],
        used: vec![false; b.point_count()],
        mapped: 0,
    };
    if !search.search() {
        return None;
    }
    let witness = IsomorphismWitness {
        map: search.map.into_iter().map(Option::unwrap).collect(),
    };
    debug_assert!(witness.verify(a, b));
    Some(witness)
}

/// Searches for a line-preserving point bijection; `None` means none exists.
pub fn isomorphic(a: &IncidenceStructure, b: &IncidenceStructure) -> Option<IsomorphismWitness> {
    isomorphic_inner(a, b, &vec![0; a.point_count()], &vec![0; b.point_count()])
}

/// Like [`isomorphic`] but only considers bijections matching the given
/// point classes (`class_a[p] == class_b[image(p)]`).
pub fn isomorphic_respecting(
    a: &IncidenceStructure,
    b: &IncidenceStructure,
    class_a: &[usize],
    class_b: &[usize],
) -> Option<IsomorphismWitness> {
    assert_eq!(class_a.len(), a.point_count());
    assert_eq!(class_b.len(), b.point_count());
    isomorphic_inner(a, b, class_a, class_b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pasch() -> IncidenceStructure {
        IncidenceStructure::from_numeric(
            (1..=6).collect(),
            vec![[1, 2, 3], [1, 4, 5], [2, 4, 6], [3, 5, 6]],
        )
        .unwrap()
    }

    fn fano() -> IncidenceStructure {
        IncidenceStructure::from_numeric(
            (1..=7).collect(),
            vec![
                [1, 2, 3],
                [1, 4, 5],
                [1, 6, 7],
                [2, 4, 6],
                [2, 5, 7],
                [3, 4, 7],
                [3, 5, 6],
            ],
        )
        .unwrap()
    }

    fn desargues() -> IncidenceStructure {
        // the ten defective sedenion triples
        IncidenceStructure::from_numeric(
            vec![3, 5, 6, 7, 9, 10, 11, 12, 13, 14],
            vec![
                [3, 5, 6],
                [3, 9, 10],
                [3, 13, 14],
                [5, 9, 12],
                [5, 11, 14],
                [6, 10, 12],
                [6, 11, 13],
                [7, 9, 14],
                [7, 10, 13],
                [7, 11, 12],
            ],
        )
        .unwrap()
    }

    #[test]
    fn construction_rejects_malformed_input() {
        assert!(matches!(
            IncidenceStructure::from_numeric(vec![1, 1], vec![]),
            Err(IncidenceError::DuplicatePoint(_))
        ));
        assert!(matches!(
            IncidenceStructure::from_numeric(vec![1, 2, 3], vec![[1, 2, 2]]),
            Err(IncidenceError::MalformedLine(_))
        ));
        assert!(matches!(
            IncidenceStructure::from_numeric(vec![1, 2, 3], vec![[1, 2, 4]]),
            Err(IncidenceError::MalformedLine(_))
        ));
        assert!(matches!(
            IncidenceStructure::from_numeric(vec![1, 2, 3], vec![[1, 2, 3], [3, 2, 1]]),
            Err(IncidenceError::DuplicateLine(_))
        ));
    }

    #[test]
    fn configuration_parameters() {
        assert_eq!(
            pasch().configuration_params().unwrap(),
            ConfigParams { v: 6, r: 2, b: 4, k: 3 }
        );
        assert_eq!(
            desargues().configuration_params().unwrap(),
            ConfigParams { v: 10, r: 3, b: 10, k: 3 }
        );
        assert_eq!(
            fano().configuration_params().unwrap(),
            ConfigParams { v: 7, r: 3, b: 7, k: 3 }
        );
    }

    #[test]
    fn irregular_and_nonlinear_structures_are_rejected() {
        let lopsided =
            IncidenceStructure::from_numeric(vec![1, 2, 3, 4], vec![[1, 2, 3]]).unwrap();
        assert!(matches!(
            lopsided.configuration_params(),
            Err(IncidenceError::NotRegular { .. })
        ));
        let doubled = IncidenceStructure::from_numeric(
            vec![1, 2, 3, 4],
            vec![[1, 2, 3], [1, 2, 4], [3, 4, 1], [4, 3, 2]],
        )
        .unwrap();
        assert!(matches!(
            doubled.configuration_params(),
            Err(IncidenceError::NotLinear(_, _))
        ));
        assert!(matches!(
            IncidenceStructure::new(vec![], vec![]).unwrap().configuration_params(),
            Err(IncidenceError::Empty)
        ));
    }

    #[test]
    fn binomial_parameters_of_grassmannians() {
        for n in 1..=11u32 {
            assert!(grassmannian(n + 1).unwrap().is_binomial(n), "G_2({})", n + 1);
        }
        assert!(!fano().is_binomial(3));
    }

    #[test]
    fn grassmannian_shapes() {
        let g3 = grassmannian(3).unwrap();
        assert_eq!(g3.point_count(), 3);
        assert_eq!(g3.line_count(), 1);
        let g4 = grassmannian(4).unwrap();
        assert_eq!((g4.point_count(), g4.line_count()), (6, 4));
        assert!(matches!(
            grassmannian(1),
            Err(IncidenceError::GroundSetTooSmall(1))
        ));
        // validate_configuration across the documented range
        for m in 3..=12 {
            let g = grassmannian(m).unwrap();
            let params = g.configuration_params().unwrap();
            assert_eq!(params.r as u32, m - 2);
            assert_eq!(params.k, 3);
        }
    }

    #[test]
    fn pasch_counts() {
        assert_eq!(count_pasch(&pasch()), 1);
        assert_eq!(count_pasch(&desargues()), 5);
        assert_eq!(count_pasch(&grassmannian(7).unwrap()), 35);
        for n in 3..=8u64 {
            assert_eq!(
                count_pasch(&grassmannian(n as u32 + 1).unwrap()) as u64,
                binomial(n + 1, 4),
                "G_2({})",
                n + 1
            );
        }
    }

    #[test]
    fn distances_in_pasch() {
        let p = pasch();
        assert_eq!(p.distance("1", "1").unwrap(), Some(0));
        assert_eq!(p.distance("1", "2").unwrap(), Some(1));
        // the three anti-polar pairs sit at distance two
        for (x, y) in [("1", "6"), ("2", "5"), ("3", "4")] {
            assert_eq!(p.distance(x, y).unwrap(), Some(2));
        }
        assert!(matches!(
            p.distance("1", "9"),
            Err(IncidenceError::UnknownPoint(_))
        ));
    }

    #[test]
    fn disconnected_components_and_distance() {
        let s = IncidenceStructure::from_numeric(
            vec![1, 2, 3, 4, 5, 6, 9],
            vec![[1, 2, 3], [4, 5, 6]],
        )
        .unwrap();
        assert_eq!(s.distance("1", "4").unwrap(), None);
        let components = s.components();
        assert_eq!(components.len(), 3);
        assert_eq!(components[2], vec![s.id_of("9").unwrap()]);
    }

    #[test]
    fn grassmannian_four_is_pasch() {
        let witness = isomorphic(&pasch(), &grassmannian(4).unwrap()).expect("isomorphic");
        assert!(witness.verify(&pasch(), &grassmannian(4).unwrap()));
    }

    #[test]
    fn identity_and_relabeling_witnesses() {
        let d = desargues();
        let identity = isomorphic(&d, &d).expect("self isomorphism");
        assert!(identity.verify(&d, &d));

        // relabel points by reversing the label list
        let mut labels: Vec<String> = d.labels().to_vec();
        labels.reverse();
        let relabel = |id: usize| labels[id].clone();
        let relabeled = IncidenceStructure::new(
            {
                let mut sorted = labels.clone();
                sorted.sort();
                sorted
            },
            d.lines().iter().map(|l| l.map(relabel)).collect(),
        )
        .unwrap();
        let witness = isomorphic(&d, &relabeled).expect("relabeling is an isomorphism");
        assert!(witness.verify(&d, &relabeled));
        assert!(witness.inverse().verify(&relabeled, &d));
    }

    #[test]
    fn non_isomorphic_pairs() {
        assert!(isomorphic(&pasch(), &fano()).is_none());
        let g5 = grassmannian(5).unwrap();
        assert!(isomorphic(&desargues(), &g5).is_some());
    }

    #[test]
    fn colored_search_respects_classes() {
        let p = pasch();
        // force the three antipodal pairs into distinct classes: impossible
        let bad = vec![0, 0, 0, 1, 1, 1];
        let good = vec![0; 6];
        assert!(isomorphic_respecting(&p, &p, &good, &good).is_some());
        let witness = isomorphic_respecting(&p, &p, &bad, &bad);
        if let Some(w) = witness {
            // classes must be preserved when a witness is returned
            for (from, &to) in w.map().iter().enumerate() {
                assert_eq!(bad[from], bad[to]);
            }
        }
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(7, 2), 21);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(3, 5), 0);
    }
}
