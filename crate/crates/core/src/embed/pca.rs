use super::space::EmbeddingSpace;
use super::EmbedError;

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in descending order with the matching unit
/// eigenvectors; each vector's largest-magnitude component is positive.
pub fn symmetric_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let mut col: Vec<f64> = v.iter().map(|row| row[i]).collect();
            let lead = col.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            if lead < 0.0 {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            col
        })
        .collect();
    (values, vectors)
}

/// Mean-centered points projected onto the top-2 principal components.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarProjection {
    pub mean: Vec<f64>,
    /// Unit principal axes, first axis first.
    pub axes: [Vec<f64>; 2],
    /// Sample variance along each axis.
    pub variance: [f64; 2],
    pub coordinates: Vec<[f64; 2]>,
}

/// PCA of the rows of `points` (all of one length) down to two dimensions.
pub fn project_points(points: &[Vec<f64>]) -> Result<PlanarProjection, EmbedError> {
    if points.len() < 2 {
        return Err(EmbedError::TooFewEntities(points.len()));
    }
    let d = points[0].len();
    let n = points.len() as f64;
    let mean: Vec<f64> = (0..d).map(|k| points.iter().map(|p| p[k]).sum::<f64>() / n).collect();
    let centered: Vec<Vec<f64>> = points.iter().map(|p| p.iter().zip(&mean).map(|(x, m)| x - m).collect()).collect();
    let mut cov = vec![vec![0.0; d]; d];
    for row in &centered {
        for i in 0..d {
            for j in i..d {
                cov[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            cov[i][j] /= n - 1.0;
            cov[j][i] = cov[i][j];
        }
    }
    let (values, mut vectors) = symmetric_eigen(&cov);
    vectors.resize(2, vec![0.0; d]);
    let axes = [vectors[0].clone(), vectors[1].clone()];
    let variance = [values.first().copied().unwrap_or(0.0).max(0.0), values.get(1).copied().unwrap_or(0.0).max(0.0)];
    let coordinates = centered
        .iter()
        .map(|row| {
            let along = |axis: &[f64]| row.iter().zip(axis).map(|(x, a)| x * a).sum::<f64>();
            [along(&axes[0]), along(&axes[1])]
        })
        .collect();
    Ok(PlanarProjection { mean, axes, variance, coordinates })
}

/// `(entity, x, y)` rows in input order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateTable {
    pub rows: Vec<(String, f64, f64)>,
    pub variance: [f64; 2],
}

impl CoordinateTable {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("entity\tx\ty\n");
        for (e, x, y) in &self.rows {
            out.push_str(&format!("{e}\t{x}\t{y}\n"));
        }
        out
    }
}

pub fn project_2d(space: &EmbeddingSpace, entities: &[String]) -> Result<CoordinateTable, EmbedError> {
    let points = entities
        .iter()
        .map(|e| {
            space
                .vector(e)
                .map(|v| v.iter().map(|&x| x as f64).collect::<Vec<f64>>())
                .ok_or_else(|| EmbedError::UnknownEntity(e.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let p = project_points(&points)?;
    let rows = entities.iter().zip(&p.coordinates).map(|(e, c)| (e.clone(), c[0], c[1])).collect();
    Ok(CoordinateTable { rows, variance: p.variance })
}
