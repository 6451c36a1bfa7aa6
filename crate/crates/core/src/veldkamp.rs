//! Geometric hyperplanes and Veldkamp spaces.
//!
//! A geometric hyperplane is a proper point subset met by every line in
//! exactly one point or containing it entirely. The Veldkamp space of a
//! structure has the hyperplanes as points and the triples
//! `{H', H'', complement of H' Δ H''}` as lines. For the nested
//! configurations this space reproduces the projective model together with
//! its full point- and line-type stratification, which is what
//! [`verify_fine_structure`] certifies.

use crate::algebra::{AlgebraError, MultTable};
use crate::geometry::{
    configuration, configuration_from_stratification, distinguished_lines, stratify,
    GeometryError, Line, Stratification,
};
use crate::incidence::{
    isomorphic, isomorphic_respecting, IncidenceError, IncidenceStructure, IsomorphismWitness,
};
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use thiserror::Error;

/// Default cap on the host's point count for hyperplane enumeration.
pub const DEFAULT_MAX_HYPERPLANE_POINTS: usize = 36;

/// Point sets are bitmasks, so enumeration is limited to 63 points outright.
const HARD_MAX_POINTS: usize = 63;

#[derive(Debug, Error)]
pub enum VeldkampError {
    #[error("structure has {points} points; the enumeration bound is {bound}")]
    TooManyPoints { points: usize, bound: usize },
    #[error("level {level} outside the supported range {min}..={max}")]
    LevelOutOfRange { level: u32, min: u32, max: u32 },
    #[error("point set is not a subset of the host structure")]
    ForeignHyperplane,
    #[error("subset breaks the hyperplane axiom on line {{{0}}}")]
    NotAHyperplane(String),
    #[error("component with {points} points and {lines} lines matches no nested configuration")]
    UnknownComposition { points: usize, lines: usize },
    #[error("complement of the symmetric difference of {left} and {right} is not a hyperplane")]
    ThirdPointNotHyperplane { left: String, right: String },
    #[error("members of a Veldkamp line do not share a common pairwise core")]
    CoreMismatch,
    #[error("census mismatch: {0}")]
    CensusMismatch(String),
    #[error("no class-respecting isomorphism onto the projective model at level {level}")]
    NoProjectiveIsomorphism { level: u32 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

/// A geometric hyperplane of a host structure, stored as a point-id bitmask.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Hyperplane {
    mask: u64,
    points: Vec<usize>,
}

impl Hyperplane {
    fn from_mask(mask: u64) -> Self {
        let points = (0..64).filter(|&p| mask >> p & 1 == 1).collect();
        Hyperplane { mask, points }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: usize) -> bool {
        self.mask >> point & 1 == 1
    }

    /// The point set written with host labels, e.g. `{3,5,6}`.
    pub fn label_set(&self, host: &IncidenceStructure) -> String {
        let labels: Vec<&str> = self.points.iter().map(|&p| host.label(p)).collect();
        format!("{{{}}}", labels.join(","))
    }
}

/// Direct re-scan of the axiom: proper subset, every line meets it in one
/// point or lies inside. Independent of the enumeration's pruning.
pub fn is_hyperplane_mask(s: &IncidenceStructure, mask: u64) -> bool {
    let v = s.point_count();
    let full = full_mask(v);
    if mask & !full != 0 || mask == full {
        return false;
    }
    s.lines().iter().all(|line| {
        let inside = line.iter().filter(|&&p| mask >> p & 1 == 1).count();
        inside == 1 || inside == 3
    })
}

pub fn is_hyperplane(s: &IncidenceStructure, points: &[usize]) -> bool {
    let mut mask = 0u64;
    for &p in points {
        if p >= s.point_count() {
            return false;
        }
        mask |= 1 << p;
    }
    is_hyperplane_mask(s, mask)
}

fn full_mask(v: usize) -> u64 {
    if v == 0 {
        0
    } else {
        u64::MAX >> (64 - v)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Decision {
    Undecided,
    In,
    Out,
}

/// Depth-first in/out assignment with per-line propagation: a line with two
/// members and one undecided point forces it in, as does a line with two
/// exclusions; two members plus one exclusion, or three exclusions, is a
/// contradiction.
struct Enumerator<'a> {
    host: &'a IncidenceStructure,
    state: Vec<Decision>,
    line_in: Vec<u8>,
    line_out: Vec<u8>,
    trail: Vec<usize>,
    results: Vec<u64>,
}

impl<'a> Enumerator<'a> {
    fn new(host: &'a IncidenceStructure) -> Self {
        Enumerator {
            host,
            state: vec![Decision::Undecided; host.point_count()],
            line_in: vec![0; host.line_count()],
            line_out: vec![0; host.line_count()],
            trail: Vec::new(),
            results: Vec::new(),
        }
    }

    /// Assigns a point and propagates forced memberships. Returns the number
    /// of assignments actually made and whether the state is consistent; the
    /// caller must undo that many in either case.
    fn assign(&mut self, point: usize, decision: Decision) -> (usize, bool) {
        let mut made = 0;
        let mut queue = VecDeque::from([(point, decision)]);
        while let Some((p, d)) = queue.pop_front() {
            match self.state[p] {
                current if current == d => continue,
                Decision::Undecided => {}
                _ => return (made, false),
            }
            self.state[p] = d;
            self.trail.push(p);
            made += 1;
            for &li in self.host.lines_through(p) {
                match d {
                    Decision::In => self.line_in[li] += 1,
                    Decision::Out => self.line_out[li] += 1,
                    Decision::Undecided => unreachable!(),
                }
                let (inside, outside) = (self.line_in[li], self.line_out[li]);
                if (inside == 2 && outside == 1) || outside == 3 {
                    return (made, false);
                }
                let undecided = 3 - inside - outside;
                if undecided == 1 && (inside == 2 || outside == 2) {
                    let forced = self.host.lines()[li]
                        .iter()
                        .copied()
                        .find(|&q| self.state[q] == Decision::Undecided)
                        .expect("exactly one undecided point on the line");
                    queue.push_back((forced, Decision::In));
                }
            }
        }
        (made, true)
    }

    fn undo(&mut self, made: usize) {
        for _ in 0..made {
            let p = self.trail.pop().expect("trail entry to undo");
            for &li in self.host.lines_through(p) {
                match self.state[p] {
                    Decision::In => self.line_in[li] -= 1,
                    Decision::Out => self.line_out[li] -= 1,
                    Decision::Undecided => unreachable!(),
                }
            }
            self.state[p] = Decision::Undecided;
        }
    }

    fn dfs(&mut self) {
        let Some(p) = self.state.iter().position(|&d| d == Decision::Undecided) else {
            let mask = self
                .state
                .iter()
                .enumerate()
                .filter(|(_, &d)| d == Decision::In)
                .fold(0u64, |m, (i, _)| m | 1 << i);
            if mask != full_mask(self.host.point_count()) {
                self.results.push(mask);
            }
            return;
        };
        for decision in [Decision::Out, Decision::In] {
            let (made, ok) = self.assign(p, decision);
            if ok {
                self.dfs();
            }
            self.undo(made);
        }
    }
}

/// Worker-parallelism cap: the `CDGEOM_MAX_THREADS` environment variable,
/// defaulting to the machine's available parallelism.
fn max_threads() -> usize {
    std::env::var("CDGEOM_MAX_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .min(64)
}

pub fn enumerate_hyperplanes(s: &IncidenceStructure) -> Result<Vec<Hyperplane>, VeldkampError> {
    enumerate_hyperplanes_bounded(s, DEFAULT_MAX_HYPERPLANE_POINTS)
}

/// Enumerates every geometric hyperplane, sorted by point-set bitmask. The
/// search splits over fixed in/out prefixes across worker threads; results
/// are merged and sorted, so the output does not depend on scheduling.
pub fn enumerate_hyperplanes_bounded(
    s: &IncidenceStructure,
    bound: usize,
) -> Result<Vec<Hyperplane>, VeldkampError> {
    let v = s.point_count();
    let bound = bound.min(HARD_MAX_POINTS);
    if v > bound {
        return Err(VeldkampError::TooManyPoints { points: v, bound });
    }
    let threads = max_threads();
    let mut masks = if threads > 1 && v >= 18 {
        let depth = (threads * 4).next_power_of_two().trailing_zeros().min(v as u32 / 2) as usize;
        let tasks = 1usize << depth;
        let worker = |start: usize| {
            let mut local = Vec::new();
            for task in (start..tasks).step_by(threads) {
                let mut e = Enumerator::new(s);
                let mut ok = true;
                let mut made_total = 0;
                for p in 0..depth {
                    let decision = if task >> p & 1 == 1 { Decision::In } else { Decision::Out };
                    let (made, good) = e.assign(p, decision);
                    made_total += made;
                    if !good {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    e.dfs();
                    local.extend(e.results);
                }
                let _ = made_total; // fresh enumerator per task; no undo needed
            }
            local
        };
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads).map(|t| scope.spawn(move || worker(t))).collect();
            let mut all = Vec::new();
            for handle in handles {
                all.extend(handle.join().expect("enumeration worker panicked"));
            }
            all
        })
    } else {
        let mut e = Enumerator::new(s);
        e.dfs();
        e.results
    };
    masks.sort_unstable();
    debug_assert!(masks.iter().all(|&m| is_hyperplane_mask(s, m)));
    Ok(masks.into_iter().map(Hyperplane::from_mask).collect())
}

/// Decomposition of a hyperplane's induced sub-geometry into nested
/// configurations, e.g. `C_3 ⊔ C_2`; the empty hyperplane decomposes to `∅`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    /// Component orders, descending.
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Composition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// True iff the hyperplane is a single copy of the order-`k` configuration.
    pub fn is_single(&self, k: u32) -> bool {
        self.parts == [k]
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        let joined: Vec<String> = self.parts.iter().map(|k| format!("C_{k}")).collect();
        f.write_str(&joined.join(" ⊔ "))
    }
}

fn triangular_root(v: usize) -> Option<u32> {
    let mut k = 0u32;
    loop {
        let t = (k as usize) * (k as usize + 1) / 2;
        if t == v {
            return Some(k);
        }
        if t > v {
            return None;
        }
        k += 1;
    }
}

/// Classifies hyperplanes by the connected components of their induced
/// sub-geometries, certifying each component against the reference
/// configuration of its size by isomorphism search.
pub fn classify_all(
    s: &IncidenceStructure,
    hyperplanes: &[Hyperplane],
) -> Result<Vec<Composition>, VeldkampError> {
    let mut references: BTreeMap<u32, IncidenceStructure> = BTreeMap::new();
    let mut out = Vec::with_capacity(hyperplanes.len());
    for h in hyperplanes {
        if h.points().iter().any(|&p| p >= s.point_count()) {
            return Err(VeldkampError::ForeignHyperplane);
        }
        if !is_hyperplane_mask(s, h.mask()) {
            let violated = s
                .lines()
                .iter()
                .find(|line| {
                    let inside = line.iter().filter(|&&p| h.contains(p)).count();
                    inside != 1 && inside != 3
                })
                .expect("some line witnesses the violation");
            let labels: Vec<&str> = violated.iter().map(|&p| s.label(p)).collect();
            return Err(VeldkampError::NotAHyperplane(labels.join(",")));
        }
        let induced = s.induced(h.points());
        let mut parts = Vec::new();
        for component in induced.components() {
            let sub = induced.induced(&component);
            let unknown = || VeldkampError::UnknownComposition {
                points: sub.point_count(),
                lines: sub.line_count(),
            };
            let k = triangular_root(sub.point_count()).ok_or_else(unknown)?;
            let expected_lines =
                crate::incidence::binomial(u64::from(k) + 1, 3) as usize;
            if sub.line_count() != expected_lines {
                return Err(unknown());
            }
            if !references.contains_key(&k) {
                references.insert(k, configuration(k)?);
            }
            if isomorphic(&sub, &references[&k]).is_none() {
                return Err(unknown());
            }
            parts.push(k);
        }
        out.push(Composition::new(parts));
    }
    Ok(out)
}

/// Classifies a single hyperplane; see [`classify_all`].
pub fn classify_hyperplane(
    s: &IncidenceStructure,
    h: &Hyperplane,
) -> Result<Composition, VeldkampError> {
    Ok(classify_all(s, std::slice::from_ref(h))?.pop().expect("one composition"))
}

/// A Veldkamp line: three hyperplane indices plus their common core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VeldkampLine {
    pub members: [usize; 3],
    /// Host point ids common to all three members.
    pub core: Vec<usize>,
}

/// The Veldkamp space of a structure: hyperplanes as points, third-point
/// triples as lines, plus the same data packaged as an incidence structure
/// with labels `H0`, `H1`, …
#[derive(Debug, Clone)]
pub struct VeldkampSpace {
    hyperplanes: Vec<Hyperplane>,
    lines: Vec<VeldkampLine>,
    structure: IncidenceStructure,
}

impl VeldkampSpace {
    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn lines(&self) -> &[VeldkampLine] {
        &self.lines
    }

    pub fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }
}

pub fn veldkamp_space(s: &IncidenceStructure) -> Result<VeldkampSpace, VeldkampError> {
    veldkamp_space_bounded(s, DEFAULT_MAX_HYPERPLANE_POINTS)
}

/// Builds the Veldkamp space by the constructive third-point rule: for each
/// hyperplane pair the third member is the complement of their symmetric
/// difference. That the three pairwise intersections coincide is checked,
/// not assumed.
pub fn veldkamp_space_bounded(
    s: &IncidenceStructure,
    bound: usize,
) -> Result<VeldkampSpace, VeldkampError> {
    let hyperplanes = enumerate_hyperplanes_bounded(s, bound)?;
    let full = full_mask(s.point_count());
    let index: BTreeMap<u64, usize> = hyperplanes
        .iter()
        .enumerate()
        .map(|(i, h)| (h.mask(), i))
        .collect();
    let mut line_set: BTreeMap<[usize; 3], u64> = BTreeMap::new();
    for i in 0..hyperplanes.len() {
        for j in i + 1..hyperplanes.len() {
            let (hi, hj) = (hyperplanes[i].mask(), hyperplanes[j].mask());
            let third = !(hi ^ hj) & full;
            let Some(&k) = index.get(&third) else {
                return Err(VeldkampError::ThirdPointNotHyperplane {
                    left: hyperplanes[i].label_set(s),
                    right: hyperplanes[j].label_set(s),
                });
            };
            let core = hi & hj;
            if core != hi & third || core != hj & third {
                return Err(VeldkampError::CoreMismatch);
            }
            let mut members = [i, j, k];
            members.sort_unstable();
            line_set.insert(members, core);
        }
    }
    let lines: Vec<VeldkampLine> = line_set
        .into_iter()
        .map(|(members, core)| VeldkampLine {
            members,
            core: (0..s.point_count()).filter(|&p| core >> p & 1 == 1).collect(),
        })
        .collect();
    let structure = IncidenceStructure::new(
        (0..hyperplanes.len()).map(|i| format!("H{i}")).collect(),
        lines
            .iter()
            .map(|l| l.members.map(|i| format!("H{i}")))
            .collect(),
    )?;
    Ok(VeldkampSpace { hyperplanes, lines, structure })
}

/// One hyperplane-class ↔ point-class correspondence entry.
#[derive(Debug, Clone, Serialize)]
pub struct ClassCorrespondence {
    pub composition: String,
    pub point_class: String,
    pub count: usize,
}

/// One Veldkamp-line-type ↔ projective-line-type correspondence entry.
#[derive(Debug, Clone, Serialize)]
pub struct LineTypeCorrespondence {
    /// Compositions of the three member hyperplanes, sorted.
    pub members: [String; 3],
    pub core_points: usize,
    pub core_lines: usize,
    /// `ordinary` or `defective`.
    pub line_class: String,
    /// Point-type triple of the image line, e.g. `{alpha,alpha,beta}`.
    pub point_types: String,
    pub count: usize,
}

/// The certified correspondence between the Veldkamp space of the level-`N`
/// configuration and the level-`N` projective model.
#[derive(Debug, Clone, Serialize)]
pub struct FineStructure {
    pub level: u32,
    pub hyperplane_count: usize,
    pub veldkamp_line_count: usize,
    pub classes: Vec<ClassCorrespondence>,
    pub line_types: Vec<LineTypeCorrespondence>,
    /// Hyperplane point set ↔ imaginary unit, in hyperplane order.
    pub witness: Vec<(String, String)>,
}

/// Runs the whole correspondence for one level: extracts the configuration,
/// builds its Veldkamp space, finds a class-respecting isomorphism onto the
/// projective model and checks that the Veldkamp line types reproduce the
/// ordinary/defective line-type census exactly.
pub fn verify_fine_structure(level: u32) -> Result<FineStructure, VeldkampError> {
    if !(2..=7).contains(&level) {
        return Err(VeldkampError::LevelOutOfRange { level, min: 2, max: 7 });
    }
    let table = MultTable::build(level)?;
    let lines = distinguished_lines(&table)?;
    let strat = stratify(&lines, level)?;
    let pg = crate::geometry::lines_structure(level, &lines)?;
    let host = configuration_from_stratification(&lines, &strat)?;
    let space = veldkamp_space(&host)?;
    let compositions = classify_all(&host, space.hyperplanes())?;

    // Pair hyperplane classes with point classes by size; sizes must be
    // unique on both sides for the pairing to be meaningful.
    let mut comp_classes: BTreeMap<&Composition, Vec<usize>> = BTreeMap::new();
    for (i, comp) in compositions.iter().enumerate() {
        comp_classes.entry(comp).or_default().push(i);
    }
    let mut by_size: BTreeMap<usize, &Composition> = BTreeMap::new();
    for (comp, members) in &comp_classes {
        if by_size.insert(members.len(), comp).is_some() {
            return Err(VeldkampError::CensusMismatch(format!(
                "two hyperplane classes share size {}",
                members.len()
            )));
        }
    }
    let mut point_by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for (ci, class) in strat.classes().iter().enumerate() {
        if point_by_size.insert(class.points.len(), ci).is_some() {
            return Err(VeldkampError::CensusMismatch(format!(
                "two point classes share size {}",
                class.points.len()
            )));
        }
    }
    if by_size.keys().ne(point_by_size.keys()) {
        return Err(VeldkampError::CensusMismatch(format!(
            "hyperplane class sizes {:?} do not match point class sizes {:?}",
            by_size.keys().collect::<Vec<_>>(),
            point_by_size.keys().collect::<Vec<_>>()
        )));
    }
    // rank classes by size; colors feed the constrained isomorphism search
    let rank_of_size: BTreeMap<usize, usize> =
        by_size.keys().enumerate().map(|(rank, &size)| (size, rank)).collect();
    let comp_rank: BTreeMap<&Composition, usize> = comp_classes
        .iter()
        .map(|(comp, members)| (*comp, rank_of_size[&members.len()]))
        .collect();
    let v_colors: Vec<usize> = compositions.iter().map(|c| comp_rank[c]).collect();
    let unit_of = |id: usize, s: &IncidenceStructure| -> u32 {
        s.label(id).parse().expect("projective points are numbered")
    };
    let pg_colors: Vec<usize> = (0..pg.point_count())
        .map(|id| {
            let class = strat
                .class_index_of(unit_of(id, &pg))
                .expect("every unit is stratified");
            rank_of_size[&strat.classes()[class].points.len()]
        })
        .collect();

    let witness = isomorphic_respecting(space.structure(), &pg, &v_colors, &pg_colors)
        .ok_or(VeldkampError::NoProjectiveIsomorphism { level })?;

    let classes = comp_classes
        .iter()
        .map(|(comp, members)| {
            let class_index = point_by_size[&members.len()];
            ClassCorrespondence {
                composition: comp.to_string(),
                point_class: strat.classes()[class_index].label.clone(),
                count: members.len(),
            }
        })
        .collect();

    // Group Veldkamp lines by intrinsic type and record the projective image
    // type of each group; a group mapping onto two different image types is a
    // correspondence failure.
    type VKey = ([String; 3], usize, usize);
    let mut groups: BTreeMap<VKey, (Option<(String, String)>, usize)> = BTreeMap::new();
    for vline in space.lines() {
        let mut members = vline.members.map(|i| compositions[i].to_string());
        members.sort_unstable();
        let core_lines = host
            .lines()
            .iter()
            .filter(|l| l.iter().all(|p| vline.core.contains(p)))
            .count();
        let image: Vec<u32> = vline
            .members
            .iter()
            .map(|&i| unit_of(witness.image_of(i), &pg))
            .collect();
        let image_line = Line::new(image[0], image[1], image[2])
            .expect("image of a Veldkamp line is a projective line");
        let line_class = image_line.class().to_string();
        let point_types = strat.type_label(
            strat.line_type(&image_line).expect("image points are stratified"),
        );
        let entry = groups
            .entry((members, vline.core.len(), core_lines))
            .or_insert((None, 0));
        match &entry.0 {
            None => entry.0 = Some((line_class, point_types)),
            Some(existing) => {
                if existing.0 != line_class || existing.1 != point_types {
                    return Err(VeldkampError::CensusMismatch(format!(
                        "Veldkamp line type maps to both ({}, {}) and ({}, {})",
                        existing.0, existing.1, line_class, point_types
                    )));
                }
            }
        }
        entry.1 += 1;
    }
    let line_types: Vec<LineTypeCorrespondence> = groups
        .into_iter()
        .map(|((members, core_points, core_lines), (image, count))| {
            let (line_class, point_types) = image.expect("every group saw a line");
            LineTypeCorrespondence {
                members,
                core_points,
                core_lines,
                line_class,
                point_types,
                count,
            }
        })
        .collect();

    // The grouped counts must reproduce the direct line-type census.
    let mut from_veldkamp: BTreeMap<(String, String), usize> = BTreeMap::new();
    for t in &line_types {
        *from_veldkamp
            .entry((t.line_class.clone(), t.point_types.clone()))
            .or_insert(0) += t.count;
    }
    let mut direct: BTreeMap<(String, String), usize> = BTreeMap::new();
    for ((class, types), count) in strat.line_type_census(&lines) {
        *direct
            .entry((class.to_string(), strat.type_label(types)))
            .or_insert(0) += count;
    }
    if from_veldkamp != direct {
        return Err(VeldkampError::CensusMismatch(format!(
            "Veldkamp line census {from_veldkamp:?} differs from the projective census {direct:?}"
        )));
    }

    let witness_pairs = space
        .hyperplanes()
        .iter()
        .enumerate()
        .map(|(i, h)| {
            (
                h.label_set(&host),
                pg.label(witness.image_of(i)).to_string(),
            )
        })
        .collect();

    Ok(FineStructure {
        level,
        hyperplane_count: space.hyperplanes().len(),
        veldkamp_line_count: space.lines().len(),
        classes,
        line_types,
        witness: witness_pairs,
    })
}

/// Whether (and how often) the previous configuration occurs among a level's
/// hyperplanes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NestingReport {
    pub level: u32,
    pub nested: bool,
    pub count: usize,
}

/// Counts the hyperplanes of the level-`N` configuration whose composition
/// is a single copy of the level-`N-1` configuration.
pub fn check_nesting(level: u32) -> Result<NestingReport, VeldkampError> {
    if !(2..=7).contains(&level) {
        return Err(VeldkampError::LevelOutOfRange { level, min: 2, max: 7 });
    }
    let host = configuration(level)?;
    let hyperplanes = enumerate_hyperplanes(&host)?;
    let compositions = classify_all(&host, &hyperplanes)?;
    let count = compositions.iter().filter(|c| c.is_single(level - 1)).count();
    Ok(NestingReport { level, nested: count > 0, count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::configuration;

    fn census(compositions: &[Composition]) -> BTreeMap<String, usize> {
        let mut census = BTreeMap::new();
        for c in compositions {
            *census.entry(c.to_string()).or_insert(0) += 1;
        }
        census
    }

    #[test]
    fn pasch_hyperplanes() {
        let pasch = configuration(3).unwrap();
        let hs = enumerate_hyperplanes(&pasch).unwrap();
        assert_eq!(hs.len(), 7);
        let sizes: Vec<usize> = hs.iter().map(Hyperplane::len).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 3);
        assert_eq!(sizes.iter().filter(|&&s| s == 3).count(), 4);
        // the size-2 hyperplanes are exactly the distance-2 pairs
        for h in hs.iter().filter(|h| h.len() == 2) {
            let p = pasch.label(h.points()[0]).to_string();
            let q = pasch.label(h.points()[1]).to_string();
            assert_eq!(pasch.distance(&p, &q).unwrap(), Some(2));
        }
        let comps = classify_all(&pasch, &hs).unwrap();
        assert_eq!(
            census(&comps),
            BTreeMap::from([("C_1 ⊔ C_1".into(), 3), ("C_2".into(), 4)])
        );
    }

    #[test]
    fn desargues_hyperplanes() {
        let desargues = configuration(4).unwrap();
        let hs = enumerate_hyperplanes(&desargues).unwrap();
        assert_eq!(hs.len(), 15);
        let comps = classify_all(&desargues, &hs).unwrap();
        assert_eq!(
            census(&comps),
            BTreeMap::from([("C_2 ⊔ C_1".into(), 10), ("C_3".into(), 5)])
        );
    }

    #[test]
    fn cayley_salmon_hyperplanes() {
        let c5 = configuration(5).unwrap();
        let hs = enumerate_hyperplanes(&c5).unwrap();
        assert_eq!(hs.len(), 31);
        let comps = classify_all(&c5, &hs).unwrap();
        assert_eq!(
            census(&comps),
            BTreeMap::from([
                ("C_2 ⊔ C_2".into(), 10),
                ("C_3 ⊔ C_1".into(), 15),
                ("C_4".into(), 6),
            ])
        );
    }

    #[test]
    fn single_line_hyperplanes() {
        let c2 = configuration(2).unwrap();
        let hs = enumerate_hyperplanes(&c2).unwrap();
        assert_eq!(hs.len(), 3);
        assert!(hs.iter().all(|h| h.len() == 1));
        let comps = classify_all(&c2, &hs).unwrap();
        assert!(comps.iter().all(|c| c.is_single(1)));
    }

    #[test]
    fn lonely_point_has_the_empty_hyperplane() {
        let c1 = configuration(1).unwrap();
        let hs = enumerate_hyperplanes(&c1).unwrap();
        assert_eq!(hs.len(), 1);
        assert!(hs[0].is_empty());
        let comps = classify_all(&c1, &hs).unwrap();
        assert_eq!(comps[0].to_string(), "∅");
    }

    #[test]
    fn axiom_rescan_agrees() {
        let pasch = configuration(3).unwrap();
        for h in enumerate_hyperplanes(&pasch).unwrap() {
            assert!(is_hyperplane(&pasch, h.points()));
        }
        assert!(!is_hyperplane(&pasch, &[0, 1])); // two collinear points
    }

    #[test]
    fn enumeration_bound() {
        let c6 = configuration(6).unwrap();
        assert!(matches!(
            enumerate_hyperplanes_bounded(&c6, 20),
            Err(VeldkampError::TooManyPoints { points: 21, bound: 20 })
        ));
    }

    #[test]
    fn veldkamp_space_of_pasch_is_the_plane() {
        let pasch = configuration(3).unwrap();
        let space = veldkamp_space(&pasch).unwrap();
        assert_eq!(space.hyperplanes().len(), 7);
        assert_eq!(space.lines().len(), 7);
        let fano = crate::geometry::pg_model(3).unwrap();
        let witness = isomorphic(space.structure(), &fano).expect("V(Pasch) is the plane");
        assert!(witness.verify(space.structure(), &fano));
    }

    #[test]
    fn veldkamp_space_of_desargues() {
        let desargues = configuration(4).unwrap();
        let space = veldkamp_space(&desargues).unwrap();
        assert_eq!(space.hyperplanes().len(), 15);
        assert_eq!(space.lines().len(), 35);
    }

    #[test]
    fn fine_structure_small_levels() {
        for level in 3..=4 {
            let fs = verify_fine_structure(level).unwrap();
            assert_eq!(fs.hyperplane_count, (1 << level) - 1);
            let total: usize = fs.line_types.iter().map(|t| t.count).sum();
            assert_eq!(total, fs.veldkamp_line_count);
        }
        let fs = verify_fine_structure(3).unwrap();
        let mut counts: Vec<(String, String, usize)> = fs
            .classes
            .iter()
            .map(|c| (c.composition.clone(), c.point_class.clone(), c.count))
            .collect();
        counts.sort();
        assert_eq!(
            counts,
            vec![
                ("C_1 ⊔ C_1".to_string(), "alpha".to_string(), 3),
                ("C_2".to_string(), "beta".to_string(), 4),
            ]
        );
    }

    #[test]
    fn nesting_counts() {
        assert_eq!(check_nesting(2).unwrap().count, 3);
        assert_eq!(check_nesting(3).unwrap().count, 4);
        assert_eq!(check_nesting(4).unwrap().count, 5);
        assert_eq!(check_nesting(5).unwrap().count, 6);
        assert!(matches!(
            check_nesting(9),
            Err(VeldkampError::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn composition_labels() {
        assert_eq!(Composition::new(vec![2, 3]).to_string(), "C_3 ⊔ C_2");
        assert_eq!(Composition::new(vec![]).to_string(), "∅");
        assert!(Composition::new(vec![4]).is_single(4));
        assert!(!Composition::new(vec![4, 1]).is_single(4));
    }
}
