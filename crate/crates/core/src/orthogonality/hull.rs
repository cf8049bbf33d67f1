//! Minimum-norm point of the convex hull of finitely many points in `ℝ^m`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Wolfe gap tolerance, relative to `1 + max ||p_i||`.
pub const GAP_TOL: f64 = 1e-12;
const WEIGHT_FLOOR: f64 = 1e-15;
const RANK_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullProblem {
    points: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl HullProblem {
    /// `labels[i]` names the source of `points[i]` (typically a maximizer index).
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        let m = points.first().ok_or(Error::EmptyPointSet)?.len();
        if m == 0 {
            return Err(Error::PointDimension { expected: 1, found: 0 });
        }
        if labels.len() != points.len() {
            return Err(Error::PointDimension {
                expected: points.len(),
                found: labels.len(),
            });
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != m {
                return Err(Error::PointDimension {
                    expected: m,
                    found: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinitePoint { index });
            }
        }
        Ok(Self { points, labels })
    }

    /// Points labelled by their own index.
    pub fn unlabeled(points: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..points.len()).collect();
        Self::new(points, labels)
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullResult {
    pub min_norm: f64,
    /// `(point index, t_i)` with `t_i > 0` and `Σ t_i = 1`, sorted by index.
    pub weights: Vec<(usize, f64)>,
    pub point: Vec<f64>,
}

impl HullResult {
    pub fn support(&self) -> usize {
        self.weights.len()
    }
}

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn combine(points: &[Vec<f64>], set: &[usize], w: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[0].len()];
    for (&i, &t) in set.iter().zip(w) {
        for (xi, pi) in x.iter_mut().zip(&points[i]) {
            *xi += t * pi;
        }
    }
    x
}

/// Minimizer of `||Σ α_i p_i||` subject to `Σ α_i = 1` over the points in
/// `set`, or `None` when they are affinely dependent to working precision.
fn affine_minimizer(points: &[Vec<f64>], set: &[usize]) -> Option<Vec<f64>> {
    let k = set.len() - 1;
    if k == 0 {
        return Some(vec![1.0]);
    }
    let base = &points[set[0]];
    // least squares min ||base + D β|| by modified Gram-Schmidt on D's columns
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut r = vec![vec![0.0; k]; k];
    let scale = set
        .iter()
        .map(|&i| dot(&points[i], &points[i]).sqrt())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    for j in 0..k {
        let mut col: Vec<f64> = points[set[j + 1]].iter().zip(base).map(|(p, b)| p - b).collect();
        for _ in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let proj = dot(qi, &col);
                r[i][j] += proj;
                for (c, qv) in col.iter_mut().zip(qi) {
                    *c -= proj * qv;
                }
            }
        }
        let norm = dot(&col, &col).sqrt();
        if norm <= RANK_TOL * scale {
            return None;
        }
        r[j][j] = norm;
        col.iter_mut().for_each(|c| *c /= norm);
        q.push(col);
    }
    let rhs: Vec<f64> = q.iter().map(|qi| -dot(qi, base)).collect();
    let mut beta = vec![0.0; k];
    for i in (0..k).rev() {
        let tail: f64 = ((i + 1)..k).map(|j| r[i][j] * beta[j]).sum();
        beta[i] = (rhs[i] - tail) / r[i][i];
    }
    let mut alpha = Vec::with_capacity(k + 1);
    alpha.push(1.0 - beta.iter().sum::<f64>());
    alpha.extend(beta);
    Some(alpha)
}

/// Wolfe's algorithm, started at the point of smallest norm.
///
/// Terminates when `||x||^2 - min_i ⟨x, p_i⟩ ≤ GAP_TOL (1 + max ||p_i||)`. The
/// support is affinely independent and so has at most `m + 1` points; a
/// Carathéodory reduction enforces this bound should rounding break it.
pub fn min_norm_point(problem: &HullProblem) -> Result<HullResult> {
    let points = problem.points();
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let norms: Vec<f64> = points.iter().map(|p| dot(p, p).sqrt()).collect();
    let max_norm = norms.iter().copied().fold(0.0, f64::max);
    let gap_tol = GAP_TOL * (1.0 + max_norm);

    let start = (0..points.len())
        .min_by(|&i, &j| norms[i].total_cmp(&norms[j]).then(i.cmp(&j)))
        .expect("non-empty");
    let mut set = vec![start];
    let mut w = vec![1.0];
    let mut x = points[start].clone();
    let max_major = 100 * (points.len() + problem.dim() + 1);

    for _ in 0..max_major {
        let xx = dot(&x, &x);
        if xx == 0.0 {
            break;
        }
        let (j, xj) = (0..points.len())
            .map(|i| (i, dot(&x, &points[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("non-empty");
        if xx - xj <= gap_tol || set.contains(&j) {
            break;
        }
        let snapshot = (set.clone(), w.clone());
        set.push(j);
        w.push(0.0);
        if !minor_cycles(points, &mut set, &mut w) {
            (set, w) = snapshot;
            break;
        }
        if !set.contains(&j) {
            // rounding rejected the entering point; no further progress
            break;
        }
        x = combine(points, &set, &w);
    }

    caratheodory_reduce(points, &mut set, &mut w);
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|t| *t /= total);
    let mut weights: Vec<(usize, f64)> = set.into_iter().zip(w).collect();
    weights.sort_by_key(|&(i, _)| i);
    let (idx, ts): (Vec<usize>, Vec<f64>) = weights.iter().copied().unzip();
    let point = combine(points, &idx, &ts);
    Ok(HullResult {
        min_norm: dot(&point, &point).sqrt(),
        weights,
        point,
    })
}

/// Moves `w` to the affine minimizer of `set`, dropping points whose weight
/// would turn negative. Returns `false` if the enlarged set is degenerate.
fn minor_cycles(points: &[Vec<f64>], set: &mut Vec<usize>, w: &mut Vec<f64>) -> bool {
    loop {
        let Some(alpha) = affine_minimizer(points, set) else {
            return false;
        };
        if alpha.iter().all(|&a| a > WEIGHT_FLOOR) {
            *w = alpha;
            return true;
        }
        let mut theta = 1.0;
        let mut leaving = None;
        for (i, (&wi, &ai)) in w.iter().zip(&alpha).enumerate() {
            if ai <= WEIGHT_FLOOR && wi - ai > 0.0 {
                let ratio = wi / (wi - ai);
                if ratio < theta {
                    theta = ratio;
                    leaving = Some(i);
                }
            }
        }
        for (wi, ai) in w.iter_mut().zip(&alpha) {
            *wi = (1.0 - theta) * *wi + theta * ai;
        }
        if let Some(i) = leaving {
            w[i] = 0.0;
        }
        let mut k = 0;
        while k < set.len() {
            if w[k] <= WEIGHT_FLOOR {
                set.remove(k);
                w.remove(k);
            } else {
                k += 1;
            }
        }
        if set.is_empty() {
            return false;
        }
    }
}

/// Removes points from a convex combination without changing its value until
/// at most `m + 1` remain.
pub(crate) fn caratheodory_reduce(points: &[Vec<f64>], set: &mut Vec<usize>, w: &mut Vec<f64>) {
    let m = points[0].len();
    while set.len() > m + 1 {
        let beta = affine_dependence(points, set);
        let mut theta = f64::INFINITY;
        let mut leaving = 0;
        for (i, (&wi, &bi)) in w.iter().zip(&beta).enumerate() {
            if bi > 0.0 && wi / bi < theta {
                theta = wi / bi;
                leaving = i;
            }
        }
        for (wi, bi) in w.iter_mut().zip(&beta) {
            *wi = (*wi - theta * bi).max(0.0);
        }
        w[leaving] = 0.0;
        let mut k = 0;
        while k < set.len() {
            if w[k] <= WEIGHT_FLOOR {
                set.remove(k);
                w.remove(k);
            } else {
                k += 1;
            }
        }
    }
}

/// A nonzero `β` with `Σ β_i p_i = 0` and `Σ β_i = 0`, which exists whenever
/// more than `m + 1` points are given. Gaussian elimination on the
/// `(m + 1) x s` matrix with columns `(p_i, 1)`.
fn affine_dependence(points: &[Vec<f64>], set: &[usize]) -> Vec<f64> {
    let m = points[0].len();
    let s = set.len();
    let mut a: Vec<Vec<f64>> = (0..=m)
        .map(|r| {
            set.iter()
                .map(|&i| if r < m { points[i][r] } else { 1.0 })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..s {
        if row > m {
            break;
        }
        let (best, val) = (row..=m)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("rows remain");
        if val <= 1e-14 {
            continue;
        }
        a.swap(row, best);
        let p = a[row][col];
        a[row].iter_mut().for_each(|v| *v /= p);
        for r in 0..=m {
            if r != row {
                let f = a[r][col];
                if f != 0.0 {
                    for c in 0..s {
                        a[r][c] -= f * a[row][c];
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free = (0..s).find(|c| !pivots.contains(c)).expect("more columns than rows");
    let mut beta = vec![0.0; s];
    beta[free] = 1.0;
    for (r, &pc) in pivots.iter().enumerate() {
        beta[pc] = -a[r][free];
    }
    beta
}
