//! Marked curves, the base objects that bundles and coverings refer to.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a marked point. Ordering is lexicographic on the name and is
/// used as the canonical point order everywhere in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointId(String);

impl PointId {
    pub fn new(name: impl Into<String>) -> Self {
        PointId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for PointId {
    fn from(s: &str) -> Self {
        PointId(s.to_string())
    }
}

impl From<String> for PointId {
    fn from(s: String) -> Self {
        PointId(s)
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A smooth projective curve of known genus with a finite set of marked
/// points. Curves compare by value: name, genus and marked set all count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkedCurve {
    name: String,
    genus: u32,
    points: BTreeSet<PointId>,
}

impl MarkedCurve {
    pub fn new(
        name: impl Into<String>,
        genus: u32,
        points: impl IntoIterator<Item = PointId>,
    ) -> Result<Self> {
        let name = name.into();
        let mut set = BTreeSet::new();
        for p in points {
            if !set.insert(p.clone()) {
                return Err(Error::DuplicatePoint {
                    curve: name,
                    point: p.to_string(),
                });
            }
        }
        Ok(MarkedCurve {
            name,
            genus,
            points: set,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Marked points in canonical (lexicographic) order.
    pub fn points(&self) -> impl Iterator<Item = &PointId> {
        self.points.iter()
    }

    pub fn point_set(&self) -> &BTreeSet<PointId> {
        &self.points
    }

    pub fn has_point(&self, p: &PointId) -> bool {
        self.points.contains(p)
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_points() {
        let err = MarkedCurve::new("X", 0, [PointId::from("p"), PointId::from("p")]);
        assert!(matches!(err, Err(Error::DuplicatePoint { .. })));
    }

    #[test]
    fn points_come_back_sorted() {
        let c = MarkedCurve::new("X", 1, [PointId::from("b"), PointId::from("a")]).unwrap();
        let names: Vec<_> = c.points().map(|p| p.as_str()).collect();
        assert_eq!(names, ["a", "b"]);
    }

    #[test]
    fn curves_compare_by_value() {
        let a = MarkedCurve::new("X", 0, [PointId::from("p")]).unwrap();
        let b = MarkedCurve::new("X", 0, [PointId::from("p")]).unwrap();
        let c = MarkedCurve::new("X", 0, []).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
