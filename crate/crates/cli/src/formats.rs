//! JSON file formats for spaces, points, measures and plans.
//!
//! Points carry no tag of their own; they are read against the space they
//! belong to:
//!
//! | space | point |
//! |-------|-------|
//! | `ray`, `interval` | `1.5` |
//! | `euclidean` | `[0.0, 1.0]` |
//! | `finite` | `3` |
//! | `qproduct` | `[left, right]` |
//! | `suspension` | `"zero"`, `"pi"` or `{"base": .., "angle": t}` |

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use wasserlab_core::{AtomicMeasure, FiniteMetric, Point, Space, TransportPlan};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceJson {
    Ray,
    Interval {
        a: f64,
        b: f64,
    },
    Euclidean {
        dim: usize,
    },
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        /// Row-major distance matrix.
        dist: Vec<f64>,
    },
    Qproduct {
        left: Box<SpaceJson>,
        right: Box<SpaceJson>,
        q: f64,
    },
    Suspension {
        base: Box<SpaceJson>,
        #[serde(default)]
        strict: bool,
    },
}

impl SpaceJson {
    pub fn to_space(&self) -> Result<Space> {
        Ok(match self {
            SpaceJson::Ray => Space::Ray,
            SpaceJson::Interval { a, b } => Space::interval(*a, *b)?,
            SpaceJson::Euclidean { dim } => Space::euclidean(*dim)?,
            SpaceJson::Finite { n, dist } => {
                let side = (dist.len() as f64).sqrt().round() as usize;
                let n = n.unwrap_or(side);
                ensure!(n * n == dist.len(), "finite space: {} distances do not form a {n}x{n} matrix", dist.len());
                Space::finite(FiniteMetric::new(n, dist.clone())?)
            }
            SpaceJson::Qproduct { left, right, q } => Space::qproduct(left.to_space()?, right.to_space()?, *q)?,
            SpaceJson::Suspension { base, strict } => Space::suspension(base.to_space()?, *strict)?,
        })
    }

    pub fn from_space(space: &Space) -> SpaceJson {
        match space {
            Space::Ray => SpaceJson::Ray,
            Space::Interval { a, b } => SpaceJson::Interval { a: *a, b: *b },
            Space::Euclidean { dim } => SpaceJson::Euclidean { dim: *dim },
            Space::Finite(m) => SpaceJson::Finite { n: Some(m.len()), dist: m.matrix().to_vec() },
            Space::QProduct { left, right, q } => SpaceJson::Qproduct {
                left: Box::new(SpaceJson::from_space(left)),
                right: Box::new(SpaceJson::from_space(right)),
                q: *q,
            },
            Space::Suspension(s) => SpaceJson::Suspension { base: Box::new(SpaceJson::from_space(s.base())), strict: s.is_strict() },
        }
    }
}

fn number(v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| anyhow!("expected a number, found {v}"))
}

pub fn point_from_json(space: &Space, v: &Value) -> Result<Point> {
    let point = match space {
        Space::Ray | Space::Interval { .. } => Point::Scalar(number(v)?),
        Space::Euclidean { .. } => {
            let coords = v.as_array().ok_or_else(|| anyhow!("expected a coordinate array, found {v}"))?;
            Point::Vector(coords.iter().map(number).collect::<Result<_>>()?)
        }
        Space::Finite(_) => {
            let i = v.as_u64().ok_or_else(|| anyhow!("expected a point index, found {v}"))?;
            Point::Index(i as usize)
        }
        Space::QProduct { left, right, .. } => match v.as_array().map(Vec::as_slice) {
            Some([l, r]) => Point::pair(point_from_json(left, l)?, point_from_json(right, r)?),
            _ => bail!("expected a [left, right] pair, found {v}"),
        },
        Space::Suspension(s) => match v {
            Value::String(tag) if tag == "zero" => Point::pole_zero(),
            Value::String(tag) if tag == "pi" => Point::pole_pi(),
            Value::Object(fields) => {
                let angle = number(fields.get("angle").ok_or_else(|| anyhow!("suspension point without an angle"))?)?;
                let base = match fields.get("base") {
                    Some(b) => point_from_json(s.base(), b)?,
                    None if angle == 0.0 || angle == std::f64::consts::PI => s.base().first_point(),
                    None => bail!("suspension point without a base"),
                };
                Point::susp(base, angle)?
            }
            _ => bail!("expected \"zero\", \"pi\" or {{\"base\", \"angle\"}}, found {v}"),
        },
    };
    space.contains(&point)?;
    Ok(point)
}

pub fn point_to_json(point: &Point) -> Value {
    use wasserlab_core::SuspPoint;
    match point {
        Point::Scalar(x) => json!(x),
        Point::Vector(v) => json!(v),
        Point::Index(i) => json!(i),
        Point::Pair(l, r) => json!([point_to_json(l), point_to_json(r)]),
        Point::Susp(SuspPoint::Zero) => json!("zero"),
        Point::Susp(SuspPoint::Pi) => json!("pi"),
        Point::Susp(SuspPoint::At { base, angle }) => json!({ "base": point_to_json(base), "angle": angle }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub point: Value,
    pub weight: f64,
}

/// `{"space": .., "atoms": [{"point": .., "weight": w}]}`. The space may be
/// left out when it is supplied separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceJson>,
    pub atoms: Vec<AtomJson>,
}

impl MeasureJson {
    pub fn from_measure(mu: &AtomicMeasure) -> MeasureJson {
        MeasureJson {
            space: Some(SpaceJson::from_space(mu.space())),
            atoms: mu.atoms().iter().map(|(p, w)| AtomJson { point: point_to_json(p), weight: *w }).collect(),
        }
    }

    /// Weights must sum to 1 within `1e-9`.
    pub fn to_measure(&self, space: Option<&Arc<Space>>) -> Result<AtomicMeasure> {
        let space = match (&self.space, space) {
            (Some(own), Some(given)) => {
                let own = own.to_space()?;
                ensure!(&own == given.as_ref(), "measure space does not match the given space");
                given.clone()
            }
            (Some(own), None) => Arc::new(own.to_space()?),
            (None, Some(given)) => given.clone(),
            (None, None) => bail!("measure has no space and none was given"),
        };
        let atoms = self
            .atoms
            .iter()
            .enumerate()
            .map(|(k, a)| Ok((point_from_json(&space, &a.point).with_context(|| format!("atom {k}"))?, a.weight)))
            .collect::<Result<_>>()?;
        Ok(AtomicMeasure::new(space, atoms)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub source: usize,
    pub target: usize,
    pub mass: f64,
}

/// A transport plan with both marginals; entries index their atom lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanJson {
    pub p: f64,
    pub cost: f64,
    pub wp: f64,
    pub source: MeasureJson,
    pub target: MeasureJson,
    pub entries: Vec<EntryJson>,
}

impl PlanJson {
    pub fn from_plan(plan: &TransportPlan) -> PlanJson {
        PlanJson {
            p: plan.p(),
            cost: plan.cost(),
            wp: plan.wp(),
            source: MeasureJson::from_measure(plan.source()),
            target: MeasureJson::from_measure(plan.target()),
            entries: plan.entries().iter().map(|&(i, j, m)| EntryJson { source: i, target: j, mass: m }).collect(),
        }
    }

    /// Rebuilds and revalidates the plan; the stored cost is recomputed.
    pub fn to_plan(&self) -> Result<TransportPlan> {
        let source = self.source.to_measure(None).context("plan source")?;
        let space = source.space_arc().clone();
        let target = self.target.to_measure(Some(&space)).context("plan target")?;
        // Measures are stored merged, so atom order survives the round trip.
        ensure!(source.len() == self.source.atoms.len(), "plan source lists duplicate atoms");
        ensure!(target.len() == self.target.atoms.len(), "plan target lists duplicate atoms");
        let entries = self.entries.iter().map(|e| (e.source, e.target, e.mass)).collect();
        Ok(TransportPlan::from_entries(source, target, entries, self.p)?)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_space(path: &Path) -> Result<Arc<Space>> {
    Ok(Arc::new(read_json::<SpaceJson>(path)?.to_space().with_context(|| format!("space in {}", path.display()))?))
}

pub fn read_measure(path: &Path, space: Option<&Arc<Space>>) -> Result<AtomicMeasure> {
    read_json::<MeasureJson>(path)?.to_measure(space).with_context(|| format!("measure in {}", path.display()))
}

/// An orthogonal matrix as a list of rows.
pub fn read_matrix(path: &Path) -> Result<(usize, Vec<f64>)> {
    let rows: Vec<Vec<f64>> = read_json(path)?;
    let n = rows.len();
    ensure!(n > 0 && rows.iter().all(|r| r.len() == n), "{}: expected a square matrix", path.display());
    Ok((n, rows.concat()))
}
