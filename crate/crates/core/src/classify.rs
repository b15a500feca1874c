//! Kernel discriminant analysis: a Bayes classifier built from per-class
//! density estimates.

use rayon::prelude::*;

use crate::bandwidth::h_plugin;
use crate::density::kde_at;
use crate::error::{KsError, Result};
use crate::geometry::{convex_hull, distance_to, Geometry};
use crate::types::{BandwidthMatrix, DensityField, FieldKind, Grid2D, Point, PointSet};

/// Smallest class size accepted by [`kda_fit`].
pub const MIN_CLASS_SIZE: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassModel {
    pub label: String,
    pub points: PointSet,
    pub h: BandwidthMatrix,
    pub prior: f64,
}

/// Fitted classifier. Class `k` (1-based in predictions) is `classes[k − 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Classifier {
    pub classes: Vec<ClassModel>,
}

impl Classifier {
    /// Builds a classifier from explicit parts, normalising the priors.
    pub fn from_parts(classes: Vec<ClassModel>) -> Result<Self> {
        if classes.len() < 2 {
            return Err(KsError::TooFewClasses(classes.len()));
        }
        if classes
            .iter()
            .any(|c| !c.prior.is_finite() || c.prior <= 0.0)
        {
            return Err(KsError::InvalidArgument(
                "class priors must be positive".into(),
            ));
        }
        let total: f64 = classes.iter().map(|c| c.prior).sum();
        let classes = classes
            .into_iter()
            .map(|c| ClassModel {
                prior: c.prior / total,
                ..c
            })
            .collect();
        Ok(Self { classes })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.classes.iter().map(|c| c.label.clone()).collect()
    }

    pub fn priors(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.prior).collect()
    }

    /// `π̂_j f̂_j(x)` for every class, one vector per class.
    pub fn weighted_densities(&self, eval: &[Point]) -> Vec<Vec<f64>> {
        self.classes
            .iter()
            .map(|c| {
                kde_at(&c.points, &c.h, eval)
                    .into_iter()
                    .map(|f| c.prior * f)
                    .collect()
            })
            .collect()
    }

    /// All training points pooled.
    pub fn training_points(&self) -> Vec<Point> {
        self.classes.iter().flat_map(|c| c.points.iter()).collect()
    }
}

/// Distinct labels, numerically ordered when every label parses as a number
/// and lexicographically otherwise.
pub fn sorted_labels(labels: &[String]) -> Vec<String> {
    let mut uniq: Vec<String> = labels.to_vec();
    uniq.sort();
    uniq.dedup();
    let numeric: Option<Vec<f64>> = uniq.iter().map(|l| l.trim().parse::<f64>().ok()).collect();
    if let Some(nums) = numeric {
        let mut paired: Vec<(f64, String)> = nums.into_iter().zip(uniq).collect();
        paired.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        paired.into_iter().map(|(_, l)| l).collect()
    } else {
        uniq
    }
}

/// Per-class plug-in bandwidths and sample-proportion priors.
pub fn kda_fit(points: &PointSet) -> Result<Classifier> {
    let labels = points
        .labels()
        .ok_or_else(|| KsError::InvalidArgument("training points carry no labels".into()))?;
    let classes = sorted_labels(labels);
    if classes.len() < 2 {
        return Err(KsError::TooFewClasses(classes.len()));
    }
    let n = points.len() as f64;
    let mut models = Vec::with_capacity(classes.len());
    for label in classes {
        let idx: Vec<usize> = (0..points.len()).filter(|&i| labels[i] == label).collect();
        if idx.len() < MIN_CLASS_SIZE {
            return Err(KsError::TooFewPointsInClass {
                label,
                needed: MIN_CLASS_SIZE,
                got: idx.len(),
            });
        }
        let sub = points.subset(&idx)?;
        let h = h_plugin(&sub, 0)?;
        models.push(ClassModel {
            prior: idx.len() as f64 / n,
            label,
            points: sub,
            h,
        });
    }
    Ok(Classifier { classes: models })
}

/// Index (1-based) of the largest entry; the first wins on ties.
fn argmax(scores: impl Iterator<Item = f64>) -> u32 {
    let mut best = (0u32, f64::NEG_INFINITY);
    for (k, s) in scores.enumerate() {
        if s > best.1 {
            best = (k as u32 + 1, s);
        }
    }
    best.0.max(1)
}

/// `argmax_j π̂_j f̂_j(x)` as a 1-based class index.
pub fn kda_predict(c: &Classifier, eval: &[Point]) -> Vec<u32> {
    let w = c.weighted_densities(eval);
    (0..eval.len())
        .into_par_iter()
        .with_min_len(256)
        .map(|i| argmax(w.iter().map(|col| col[i])))
        .collect()
}

/// Region outside of which grid labels are suppressed.
#[derive(Debug, Clone, PartialEq)]
pub struct HullMask {
    pub hull: Geometry,
    pub dilation: f64,
}

impl HullMask {
    /// Convex hull of the training data grown by one grid cell,
    /// `max(dx, dy)`.
    pub fn for_grid(c: &Classifier, grid: &Grid2D) -> Self {
        Self {
            hull: convex_hull(&c.training_points()),
            dilation: grid.dx.max(grid.dy),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        distance_to(&self.hull, p) <= self.dilation
    }
}

/// Class index (1..=m, 0 = unlabelled) at each grid vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelField {
    pub grid: Grid2D,
    pub labels: Vec<u32>,
    pub classes: Vec<String>,
    /// `π̂_j f̂_j` on the grid, one field per class.
    pub weighted_densities: Option<Vec<DensityField>>,
}

impl LabelField {
    pub fn label(&self, i: usize, j: usize) -> u32 {
        self.labels[self.grid.index(i, j)]
    }

    /// Label values as a field, for plotting.
    pub fn to_field(&self) -> Result<DensityField> {
        DensityField::new(
            self.grid,
            self.labels.iter().map(|&l| l as f64).collect(),
            FieldKind::Label,
        )
    }
}

pub fn kda_grid_labels(
    c: &Classifier,
    grid: &Grid2D,
    mask: Option<&HullMask>,
) -> Result<LabelField> {
    let vertices = grid.vertices();
    let w = c.weighted_densities(&vertices);
    let labels: Vec<u32> = vertices
        .par_iter()
        .enumerate()
        .with_min_len(256)
        .map(|(i, &p)| match mask {
            Some(m) if !m.contains(p) => 0,
            _ => argmax(w.iter().map(|col| col[i])),
        })
        .collect();
    let fields = w
        .into_iter()
        .map(|v| DensityField::new(*grid, v, FieldKind::Density))
        .collect::<Result<Vec<_>>>()?;
    Ok(LabelField {
        grid: *grid,
        labels,
        classes: c.labels(),
        weighted_densities: Some(fields),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blob(cx: f64, cy: f64, n: usize, seed: f64) -> (Vec<f64>, Vec<f64>) {
        let xs = (0..n)
            .map(|i| cx + ((i as f64 + seed) * 0.754).sin())
            .collect();
        let ys = (0..n)
            .map(|i| cy + ((i as f64 + seed) * 1.291).cos())
            .collect();
        (xs, ys)
    }

    fn two_class(n1: usize, n2: usize, gap: f64) -> PointSet {
        let (mut xs, mut ys) = blob(0.0, 0.0, n1, 0.0);
        let (x2, y2) = blob(gap, 0.0, n2, 0.5);
        xs.extend(x2);
        ys.extend(y2);
        let labels = (0..n1 + n2)
            .map(|i| if i < n1 { "a" } else { "b" }.to_string())
            .collect();
        PointSet::new(xs, ys).unwrap().with_labels(labels).unwrap()
    }

    #[test]
    fn priors_are_sample_proportions() {
        let c = kda_fit(&two_class(207, 358, 20.0)).unwrap();
        assert_eq!(c.priors(), vec![207.0 / 565.0, 358.0 / 565.0]);
        assert!((c.priors().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn label_ordering() {
        let l: Vec<String> = ["10", "9", "2.5", "9"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(sorted_labels(&l), vec!["2.5", "9", "10"]);
        let l: Vec<String> = ["b", "10", "a"].iter().map(|s| s.to_string()).collect();
        assert_eq!(sorted_labels(&l), vec!["10", "a", "b"]);
    }

    #[test]
    fn separated_classes() {
        let pts = two_class(40, 40, 100.0);
        let c = kda_fit(&pts).unwrap();
        assert_eq!(kda_predict(&c, &[[0.0, 0.0], [100.0, 0.0]]), vec![1, 2]);
        let pred = kda_predict(&c, &pts.to_points());
        assert!(pred.iter().take(40).all(|&l| l == 1));
        assert!(pred.iter().skip(40).all(|&l| l == 2));
    }

    #[test]
    fn prior_dominance_and_ties() {
        let pts = two_class(30, 30, 5.0);
        let base = kda_fit(&pts).unwrap();
        let same = ClassModel {
            label: "x".into(),
            ..base.classes[0].clone()
        };
        let dup = Classifier::from_parts(vec![
            ClassModel {
                prior: 0.999,
                ..same.clone()
            },
            ClassModel {
                prior: 0.001,
                label: "y".into(),
                ..same.clone()
            },
        ])
        .unwrap();
        assert_eq!(kda_predict(&dup, &[[0.3, 0.1]]), vec![1]);
        let tie = Classifier::from_parts(vec![
            same.clone(),
            ClassModel {
                label: "y".into(),
                ..same
            },
        ])
        .unwrap();
        let grid = Grid2D::from_bounds(-3.0, 3.0, -3.0, 3.0, 15, 15).unwrap();
        let lf = kda_grid_labels(&tie, &grid, None).unwrap();
        assert!(lf.labels.iter().all(|&l| l == 1));
    }

    #[test]
    fn too_few() {
        let pts = two_class(30, 5, 10.0);
        assert!(matches!(
            kda_fit(&pts),
            Err(KsError::TooFewPointsInClass { got: 5, .. })
        ));
        let one = PointSet::new(vec![0.0; 3], vec![1.0, 2.0, 3.0])
            .unwrap()
            .with_labels(vec!["a".into(); 3])
            .unwrap();
        assert_eq!(kda_fit(&one), Err(KsError::TooFewClasses(1)));
    }

    #[test]
    fn hull_mask_suppresses_far_vertices() {
        let c = kda_fit(&two_class(30, 30, 8.0)).unwrap();
        let grid = Grid2D::from_bounds(-10.0, 20.0, -10.0, 10.0, 31, 21).unwrap();
        let mask = HullMask::for_grid(&c, &grid);
        let lf = kda_grid_labels(&c, &grid, Some(&mask)).unwrap();
        assert_eq!(lf.label(0, 0), 0);
        assert_ne!(lf.label(10, 10), 0);
        assert!(lf.labels.iter().all(|&l| l <= 2));
    }
}
