//! The line/point geometry of the imaginary units.
//!
//! For a level-`N` table the `2^N - 1` imaginary units are points and the
//! triples `{a, b, c}` with `e_a e_b = ±e_c` are lines; the result is the
//! binary projective space of rank `N - 1`. Sorting each triple `a < b < c`
//! splits the lines into ordinary (`a + b = c`) and defective (`a + b ≠ c`)
//! ones, which in turn stratifies the points by how many lines of each kind
//! pass through them.

use crate::algebra::{AlgebraError, MultTable};
use crate::incidence::{binomial, IncidenceError, IncidenceStructure};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("level {level} is too small: {what} needs level {min} or higher")]
    LevelTooSmall { level: u32, min: u32, what: &'static str },
    #[error("triple ({a}, {b}, {c}) is not a distinguished line")]
    InvalidTriple { a: u32, b: u32, c: u32 },
    #[error("table breaks the xor rule at ({a}, {b}): got index {got}, expected {want}")]
    XorRuleViolation { a: u32, b: u32, got: u32, want: u32 },
    #[error("point types cannot be ordered: profiles {first:?} and {second:?} tie on defective count")]
    AmbiguousPointTypes { first: (u32, u32), second: (u32, u32) },
    #[error("level {level}: expected exactly one point class of size {want}, found {found} candidates")]
    NoUniqueClassOfSize { level: u32, want: usize, found: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

/// A distinguished triple of imaginary units, sorted ascending. The third
/// index is always the xor of the other two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line {
    points: [u32; 3],
}

impl Line {
    pub fn new(a: u32, b: u32, c: u32) -> Result<Line, GeometryError> {
        let mut points = [a, b, c];
        points.sort_unstable();
        let [x, y, z] = points;
        if x == 0 || x == y || y == z || x ^ y != z {
            return Err(GeometryError::InvalidTriple { a, b, c });
        }
        Ok(Line { points })
    }

    pub fn points(&self) -> [u32; 3] {
        self.points
    }

    pub fn contains(&self, unit: u32) -> bool {
        self.points.contains(&unit)
    }

    /// Ordinary iff the two smaller indices add up to the largest.
    pub fn class(&self) -> LineClass {
        if self.points[0] + self.points[1] == self.points[2] {
            LineClass::Ordinary
        } else {
            LineClass::Defective
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.points[0], self.points[1], self.points[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineClass {
    Ordinary,
    Defective,
}

impl fmt::Display for LineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineClass::Ordinary => "ordinary",
            LineClass::Defective => "defective",
        })
    }
}

/// Reads the distinguished triples off a multiplication table, sorted
/// lexicographically. Every product index is re-checked against the xor rule
/// so a corrupted table fails loudly instead of yielding a wrong geometry.
pub fn distinguished_lines(table: &MultTable) -> Result<Vec<Line>, GeometryError> {
    if table.level() < 2 {
        return Err(GeometryError::LevelTooSmall {
            level: table.level(),
            min: 2,
            what: "distinguished triples",
        });
    }
    let size = table.size() as u32;
    let mut lines = Vec::new();
    for a in 1..size {
        for b in a + 1..size {
            let product = table.entry(a, b);
            if product.index != (a ^ b) {
                return Err(GeometryError::XorRuleViolation {
                    a,
                    b,
                    got: product.index,
                    want: a ^ b,
                });
            }
            if product.index > b {
                lines.push(Line { points: [a, b, product.index] });
            }
        }
    }
    debug_assert_eq!(
        lines.len() as u64,
        (u64::from(size) - 1) * (u64::from(size) / 2 - 1) / 3
    );
    Ok(lines)
}

/// Per-point count of ordinary and defective lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LineProfile {
    pub ordinary: u32,
    pub defective: u32,
}

/// One point-type class: all points sharing a line profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointClass {
    pub label: String,
    pub profile: LineProfile,
    pub points: Vec<u32>,
}

const CLASS_LABELS: [&str; 8] = [
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
];

/// Partition of the imaginary units into point-type classes, ordered by
/// strictly decreasing defective-line count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    level: u32,
    profiles: BTreeMap<u32, LineProfile>,
    classes: Vec<PointClass>,
}

impl Stratification {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn classes(&self) -> &[PointClass] {
        &self.classes
    }

    pub fn profile(&self, point: u32) -> Option<LineProfile> {
        self.profiles.get(&point).copied()
    }

    pub fn class_by_label(&self, label: &str) -> Option<&PointClass> {
        self.classes.iter().find(|c| c.label == label)
    }

    /// Index into `classes` of the class containing the point.
    pub fn class_index_of(&self, point: u32) -> Option<usize> {
        self.classes.iter().position(|c| c.points.contains(&point))
    }

    /// The class-label triple of a line, sorted by class order.
    pub fn line_type(&self, line: &Line) -> Option<[usize; 3]> {
        let mut indices = [0usize; 3];
        for (slot, &p) in indices.iter_mut().zip(line.points().iter()) {
            *slot = self.class_index_of(p)?;
        }
        indices.sort_unstable();
        Some(indices)
    }

    /// Census of lines by (class, point-type triple), keyed deterministically.
    pub fn line_type_census(&self, lines: &[Line]) -> BTreeMap<(LineClass, [usize; 3]), usize> {
        let mut census = BTreeMap::new();
        for line in lines {
            let key = (
                line.class(),
                self.line_type(line).expect("line points are stratified"),
            );
            *census.entry(key).or_insert(0) += 1;
        }
        census
    }

    /// Formats a point-type triple as e.g. `{alpha,alpha,beta}`.
    pub fn type_label(&self, indices: [usize; 3]) -> String {
        let names: Vec<&str> = indices.iter().map(|&i| self.classes[i].label.as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Computes line profiles for every imaginary unit and groups them into
/// labelled classes. Fails if two distinct profiles tie on defective count,
/// which would make the labelling order ambiguous.
pub fn stratify(lines: &[Line], level: u32) -> Result<Stratification, GeometryError> {
    if level < 1 {
        return Err(GeometryError::LevelTooSmall { level, min: 1, what: "stratification" });
    }
    let size = 1u32 << level;
    let mut profiles: BTreeMap<u32, LineProfile> = (1..size)
        .map(|p| (p, LineProfile { ordinary: 0, defective: 0 }))
        .collect();
    for line in lines {
        for p in line.points() {
            let profile = profiles.get_mut(&p).expect("line point within level range");
            match line.class() {
                LineClass::Ordinary => profile.ordinary += 1,
                LineClass::Defective => profile.defective += 1,
            }
        }
    }

    let mut groups: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
    for (&point, profile) in &profiles {
        groups
            .entry((profile.defective, profile.ordinary))
            .or_default()
            .push(point);
    }
    // descending defective count; ties across distinct profiles are an anomaly
    let mut ordered: Vec<((u32, u32), Vec<u32>)> = groups.into_iter().rev().collect();
    for pair in ordered.windows(2) {
        if pair[0].0 .0 == pair[1].0 .0 {
            return Err(GeometryError::AmbiguousPointTypes {
                first: (pair[0].0 .1, pair[0].0 .0),
                second: (pair[1].0 .1, pair[1].0 .0),
            });
        }
    }
    let classes = ordered
        .into_iter()
        .enumerate()
        .map(|(i, ((defective, ordinary), points))| PointClass {
            label: CLASS_LABELS
                .get(i)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("type{}", i + 1)),
            profile: LineProfile { ordinary, defective },
            points,
        })
        .collect();
    Ok(Stratification { level, profiles, classes })
}

/// The binary projective model: points `1..2^N`, lines all xor-closed triples.
pub fn pg_model(level: u32) -> Result<IncidenceStructure, GeometryError> {
    if level < 2 {
        return Err(GeometryError::LevelTooSmall { level, min: 2, what: "projective model" });
    }
    let size = 1u32 << level;
    let mut lines = Vec::new();
    for a in 1..size {
        for b in a + 1..size {
            let c = a ^ b;
            if c > b {
                lines.push([a, b, c]);
            }
        }
    }
    Ok(IncidenceStructure::from_numeric((1..size).collect(), lines)?)
}

/// The nested configuration carved out of an already-computed stratification.
///
/// Levels 1-3 are the special shapes (point, line, and the projective plane
/// with one all-ordinary point deleted); from level 4 on the rule is generic:
/// the unique point class of triangular size `C(N+1, 2)` together with every
/// defective line lying inside it.
pub fn configuration_from_stratification(
    lines: &[Line],
    strat: &Stratification,
) -> Result<IncidenceStructure, GeometryError> {
    let level = strat.level();
    match level {
        0 => Err(GeometryError::LevelTooSmall { level, min: 1, what: "configuration" }),
        1 => Ok(IncidenceStructure::from_numeric(vec![1], vec![])?),
        2 => Ok(IncidenceStructure::from_numeric(vec![1, 2, 3], vec![[1, 2, 3]])?),
        3 => {
            // drop the largest all-ordinary point and the three lines on it
            let beta = strat
                .classes()
                .iter()
                .find(|c| c.profile.defective == 0)
                .expect("octonion geometry has an all-ordinary class");
            let removed = *beta.points.iter().max().expect("class is nonempty");
            let points = (1u32..8).filter(|&p| p != removed).collect();
            let kept = lines
                .iter()
                .filter(|l| !l.contains(removed))
                .map(|l| l.points())
                .collect();
            Ok(IncidenceStructure::from_numeric(points, kept)?)
        }
        n => {
            let want = binomial(u64::from(n) + 1, 2) as usize;
            let candidates: Vec<&PointClass> = strat
                .classes()
                .iter()
                .filter(|c| c.points.len() == want)
                .collect();
            let [class] = candidates[..] else {
                return Err(GeometryError::NoUniqueClassOfSize {
                    level: n,
                    want,
                    found: candidates.len(),
                });
            };
            let inside = |l: &&Line| l.points().iter().all(|p| class.points.contains(p));
            let kept = lines
                .iter()
                .filter(|l| l.class() == LineClass::Defective)
                .filter(inside)
                .map(|l| l.points())
                .collect();
            Ok(IncidenceStructure::from_numeric(class.points.clone(), kept)?)
        }
    }
}

/// Builds the level-`N` configuration from scratch (table, triples,
/// stratification, extraction).
pub fn configuration(level: u32) -> Result<IncidenceStructure, GeometryError> {
    match level {
        0 => Err(GeometryError::LevelTooSmall { level, min: 1, what: "configuration" }),
        1 => Ok(IncidenceStructure::from_numeric(vec![1], vec![])?),
        2 => Ok(IncidenceStructure::from_numeric(vec![1, 2, 3], vec![[1, 2, 3]])?),
        n => {
            let table = MultTable::build(n)?;
            let lines = distinguished_lines(&table)?;
            let strat = stratify(&lines, n)?;
            configuration_from_stratification(&lines, &strat)
        }
    }
}

/// The unit geometry as an incidence structure (equal to the projective
/// model whenever the table is sound).
pub fn lines_structure(level: u32, lines: &[Line]) -> Result<IncidenceStructure, GeometryError> {
    let size = 1u32 << level;
    Ok(IncidenceStructure::from_numeric(
        (1..size).collect(),
        lines.iter().map(|l| l.points()).collect(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SignedUnit;

    fn lines_at(level: u32) -> Vec<Line> {
        distinguished_lines(&MultTable::build(level).unwrap()).unwrap()
    }

    #[test]
    fn octonion_triples_match_the_printed_seven() {
        let lines = lines_at(3);
        let expected = [
            [1, 2, 3],
            [1, 4, 5],
            [1, 6, 7],
            [2, 4, 6],
            [2, 5, 7],
            [3, 4, 7],
            [3, 5, 6],
        ];
        assert_eq!(
            lines.iter().map(Line::points).collect::<Vec<_>>(),
            expected
        );
    }

    #[test]
    fn quaternions_have_a_single_line() {
        assert_eq!(lines_at(2), vec![Line::new(1, 2, 3).unwrap()]);
    }

    #[test]
    fn line_counts_follow_the_closed_form() {
        for level in 2..=10u32 {
            let size = 1u64 << level;
            let expected = (size - 1) * (size / 2 - 1) / 3;
            assert_eq!(lines_at(level).len() as u64, expected, "level {level}");
        }
    }

    #[test]
    fn every_point_lies_on_the_expected_number_of_lines() {
        for level in 2..=8u32 {
            let lines = lines_at(level);
            let per_point = (1u32 << (level - 1)) - 1;
            let mut counts = vec![0u32; 1 << level];
            for line in &lines {
                for p in line.points() {
                    counts[p as usize] += 1;
                }
            }
            assert!(counts[1..].iter().all(|&c| c == per_point), "level {level}");
        }
    }

    #[test]
    fn corrupted_table_is_detected() {
        let t = MultTable::build(3).unwrap();
        let mut entries = t.entries().to_vec();
        entries[1 * 8 + 2] = SignedUnit::positive(5); // e_1 e_2 must be ±e_3
        let corrupt = MultTable::from_entries(3, entries).unwrap();
        assert!(matches!(
            distinguished_lines(&corrupt),
            Err(GeometryError::XorRuleViolation { a: 1, b: 2, got: 5, want: 3 })
        ));
    }

    #[test]
    fn line_classification() {
        assert_eq!(Line::new(1, 2, 3).unwrap().class(), LineClass::Ordinary);
        assert_eq!(Line::new(3, 5, 6).unwrap().class(), LineClass::Defective);
        assert_eq!(Line::new(7, 11, 12).unwrap().class(), LineClass::Defective);
        assert!(Line::new(1, 2, 4).is_err());
        assert!(Line::new(0, 1, 1).is_err());
    }

    #[test]
    fn octonion_stratification() {
        let lines = lines_at(3);
        let strat = stratify(&lines, 3).unwrap();
        assert_eq!(strat.classes().len(), 2);
        assert_eq!(strat.classes()[0].label, "alpha");
        assert_eq!(strat.classes()[0].points, vec![3, 5, 6]);
        assert_eq!(strat.classes()[1].points, vec![1, 2, 4, 7]);
        assert_eq!(
            strat.profile(3).unwrap(),
            LineProfile { ordinary: 2, defective: 1 }
        );
    }

    #[test]
    fn thirtytwo_nion_stratification() {
        let lines = lines_at(5);
        let strat = stratify(&lines, 5).unwrap();
        let sizes: Vec<usize> = strat.classes().iter().map(|c| c.points.len()).collect();
        assert_eq!(sizes, vec![10, 15, 6]);
        assert_eq!(
            strat.class_by_label("gamma").unwrap().points,
            vec![1, 2, 4, 8, 16, 31]
        );
    }

    #[test]
    fn sixtyfour_nion_stratification() {
        let lines = lines_at(6);
        let strat = stratify(&lines, 6).unwrap();
        let summary: Vec<(usize, (u32, u32))> = strat
            .classes()
            .iter()
            .map(|c| (c.points.len(), (c.profile.ordinary, c.profile.defective)))
            .collect();
        assert_eq!(summary, vec![(35, (10, 21)), (21, (16, 15)), (7, (31, 0))]);
    }

    #[test]
    fn ambiguous_profiles_are_reported() {
        // hand-built line set (not from a table): defective counts tie at 1
        let lines = vec![
            Line::new(3, 5, 6).unwrap(),
            Line::new(1, 2, 3).unwrap(),
            Line::new(1, 4, 5).unwrap(),
        ];
        assert!(matches!(
            stratify(&lines, 3),
            Err(GeometryError::AmbiguousPointTypes { .. })
        ));
    }

    #[test]
    fn projective_models() {
        let fano = pg_model(3).unwrap();
        assert_eq!((fano.point_count(), fano.line_count()), (7, 7));
        let pg32 = pg_model(4).unwrap();
        assert_eq!((pg32.point_count(), pg32.line_count()), (15, 35));
        let single = pg_model(2).unwrap();
        assert_eq!((single.point_count(), single.line_count()), (3, 1));
        assert!(pg_model(1).is_err());

        // the model coincides with the extracted triples
        let lines = lines_at(4);
        assert_eq!(lines_structure(4, &lines).unwrap(), pg32);
    }

    #[test]
    fn configurations_have_binomial_parameters() {
        for n in 1..=6u32 {
            let c = configuration(n).unwrap();
            assert!(c.is_binomial(n), "level {n}");
        }
    }

    #[test]
    fn pasch_extraction_at_level_three() {
        let c = configuration(3).unwrap();
        assert_eq!(c.point_count(), 6);
        assert_eq!(c.line_count(), 4);
        // point 7 is the largest all-ordinary point; it must be gone
        assert!(c.id_of("7").is_none());
        let params = c.configuration_params().unwrap();
        assert_eq!((params.v, params.r, params.b, params.k), (6, 2, 4, 3));
    }

    #[test]
    fn desargues_points_are_the_alpha_class() {
        let c = configuration(4).unwrap();
        let mut labels: Vec<u32> = c.labels().iter().map(|l| l.parse().unwrap()).collect();
        labels.sort_unstable();
        assert_eq!(labels, vec![3, 5, 6, 7, 9, 10, 11, 12, 13, 14]);
        assert_eq!(c.line_count(), 10);
    }

    #[test]
    fn sixtyfour_nion_configuration_shape() {
        let c = configuration(6).unwrap();
        let params = c.configuration_params().unwrap();
        assert_eq!((params.v, params.r, params.b, params.k), (21, 5, 35, 3));
    }
}
