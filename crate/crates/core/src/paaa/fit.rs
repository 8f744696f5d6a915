use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::linalg::{self, C64};

use super::BarycentricModel2D;

/// Settings of [`paaa_fit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Target max grid error relative to `max |D|`.
    pub tol: f64,
    /// Defaults to half the number of sample points.
    pub max_z_nodes: Option<usize>,
    /// Defaults to all but one parameter point, which keeps a column of
    /// least-squares rows.
    pub max_p_nodes: Option<usize>,
    /// Iterations continue until at least this many `z` nodes are in use.
    pub min_z_nodes: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_z_nodes: None, max_p_nodes: None, min_z_nodes: 1 }
    }
}

/// Outcome of a fit: the model, whether the tolerance was reached, and the
/// relative max grid error after every iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: BarycentricModel2D,
    pub converged: bool,
    /// Relative max grid error of the returned model.
    pub max_error: f64,
    pub history: Vec<f64>,
    /// Grid indices of the `z` and `p` nodes.
    pub z_node_indices: Vec<usize>,
    pub p_node_indices: Vec<usize>,
}

fn all_distinct(points: &[C64]) -> bool {
    points.iter().enumerate().all(|(a, x)| points[..a].iter().all(|y| y != x))
}

struct State {
    zi: Vec<usize>,
    pj: Vec<usize>,
    model: BarycentricModel2D,
}

fn build(
    d: &ArrayView2<'_, C64>,
    s: &[C64],
    p: &[C64],
    zi: &[usize],
    pj: &[usize],
    alpha: Array2<C64>,
) -> Result<State> {
    let values = Array2::from_shape_fn((zi.len(), pj.len()), |(a, b)| d[[zi[a], pj[b]]]);
    let model =
        BarycentricModel2D::new(zi.iter().map(|&i| s[i]).collect(), pj.iter().map(|&j| p[j]).collect(), alpha, values)?;
    Ok(State { zi: zi.to_vec(), pj: pj.to_vec(), model })
}

/// `|f - D|` on the whole grid; pole hits count as infinite error.
fn grid_errors(model: &BarycentricModel2D, d: &ArrayView2<'_, C64>, s: &[C64], p: &[C64]) -> Array2<f64> {
    Array2::from_shape_fn(d.dim(), |(i, j)| match model.eval(s[i], p[j]) {
        Ok(v) => {
            let e = (v - d[[i, j]]).norm();
            if e.is_finite() {
                e
            } else {
                f64::INFINITY
            }
        }
        Err(_) => f64::INFINITY,
    })
}

/// Unit-norm coefficients minimizing the linearized residual over every grid
/// point that is not a node pair.
///
/// A point sharing its `s` with node `xi_u` enters through the limit of
/// `(s - xi_u)` times its row, i.e. the linearized residual of the 1-D
/// barycentric form in `p` on that node row; likewise for node columns.
fn solve_coefficients(
    d: &ArrayView2<'_, C64>,
    s: &[C64],
    p: &[C64],
    zi: &[usize],
    pj: &[usize],
) -> Result<Array2<C64>> {
    let (kz, kp) = (zi.len(), pj.len());
    let z_node = |i: usize| zi.iter().position(|&x| x == i);
    let p_node = |j: usize| pj.iter().position(|&x| x == j);
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for i in 0..s.len() {
        for j in 0..p.len() {
            let mut row = vec![C64::new(0.0, 0.0); kz * kp];
            match (z_node(i), p_node(j)) {
                (Some(_), Some(_)) => continue,
                (None, None) => {
                    for (u, &iz) in zi.iter().enumerate() {
                        let dz = (s[i] - s[iz]).inv();
                        for (w, &jp) in pj.iter().enumerate() {
                            row[u * kp + w] = (d[[i, j]] - d[[iz, jp]]) * dz / (p[j] - p[jp]);
                        }
                    }
                }
                (Some(u), None) => {
                    for (w, &jp) in pj.iter().enumerate() {
                        row[u * kp + w] = (d[[i, j]] - d[[i, jp]]) / (p[j] - p[jp]);
                    }
                }
                (None, Some(w)) => {
                    for (u, &iz) in zi.iter().enumerate() {
                        row[u * kp + w] = (d[[i, j]] - d[[iz, j]]) / (s[i] - s[iz]);
                    }
                }
            }
            rows.push(row);
        }
    }
    let mut a = Array2::zeros((rows.len(), kz * kp));
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            a[[r, c]] = *v;
        }
    }
    let vt = linalg::svd(&a, false, true)?.vt.expect("right factor requested");
    let last = vt.row(vt.nrows() - 1);
    Ok(Array2::from_shape_fn((kz, kp), |(u, w)| last[u * kp + w].conj()))
}

/// Greedy bivariate barycentric fit of `values[i][j] = D(s_i, p_j)`.
///
/// Starts from the grid point of largest magnitude. Each step adds the
/// coordinates of the worst-approximated grid point that are not nodes yet
/// (subject to the node budgets) and re-solves for the coefficients.
pub fn paaa_fit(values: ArrayView2<'_, C64>, s: &[C64], p: &[C64], opts: FitOptions) -> Result<FitReport> {
    if values.dim() != (s.len(), p.len()) {
        return Err(Error::arg(format!("grid values are {:?}, expected {}x{}", values.dim(), s.len(), p.len())));
    }
    if s.is_empty() || p.is_empty() || !all_distinct(s) || !all_distinct(p) {
        return Err(Error::arg("grid points must be nonempty and distinct along each axis"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::arg("grid values must be finite"));
    }
    let max_z = opts.max_z_nodes.unwrap_or((s.len() / 2).max(1));
    let max_p = opts.max_p_nodes.unwrap_or((p.len().saturating_sub(1)).max(1));
    if max_z == 0 || max_p == 0 || opts.min_z_nodes > max_z {
        return Err(Error::arg(format!(
            "node budgets must be positive with min_z_nodes <= max_z_nodes (got {}/{max_z}/{max_p})",
            opts.min_z_nodes
        )));
    }
    if (max_z > 1 && 2 * max_z > s.len()) || (max_p > 1 && max_p >= p.len()) {
        return Err(Error::arg(format!(
            "grid of {}x{} points is too small for {max_z}x{max_p} nodes",
            s.len(),
            p.len()
        )));
    }

    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let start = values
        .indexed_iter()
        .fold(((0, 0), -1.0), |best, ((i, j), v)| if v.norm() > best.1 { ((i, j), v.norm()) } else { best })
        .0;
    let mut state = build(&values, s, p, &[start.0], &[start.1], Array2::from_elem((1, 1), C64::new(1.0, 0.0)))?;
    let mut history = Vec::new();
    let mut best: Option<(f64, State)> = None;

    loop {
        let err = grid_errors(&state.model, &values, s, p);
        let max_err = err.iter().cloned().fold(0.0, f64::max);
        let rel = if scale > 0.0 { max_err / scale } else { max_err };
        history.push(rel);

        let eligible = state.zi.len() >= opts.min_z_nodes;
        let met = rel <= opts.tol;
        if eligible && met {
            return Ok(FitReport {
                model: state.model,
                converged: true,
                max_error: rel,
                history,
                z_node_indices: state.zi,
                p_node_indices: state.pj,
            });
        }
        if eligible && best.as_ref().map_or(true, |(b, _)| rel < *b) {
            best = Some((rel, State { zi: state.zi.clone(), pj: state.pj.clone(), model: state.model.clone() }));
        }

        let mut order: Vec<(usize, usize)> = (0..s.len()).flat_map(|i| (0..p.len()).map(move |j| (i, j))).collect();
        order.sort_by(|a, b| err[[b.0, b.1]].total_cmp(&err[[a.0, a.1]]));
        let z_room = state.zi.len() < max_z;
        let p_room = state.pj.len() < max_p;
        let pick = if met {
            // accurate enough but short of z nodes: only z nodes are added
            order.iter().find(|(i, _)| !state.zi.contains(i)).map(|&(i, _)| (Some(i), None))
        } else {
            order.iter().find_map(|&(i, j)| {
                let add_z = (z_room && !state.zi.contains(&i)).then_some(i);
                let add_p = (p_room && !state.pj.contains(&j)).then_some(j);
                (add_z.is_some() || add_p.is_some()).then_some((add_z, add_p))
            })
        };
        let Some((add_z, add_p)) = pick else { break };
        let mut zi = state.zi.clone();
        let mut pj = state.pj.clone();
        zi.extend(add_z);
        pj.extend(add_p);
        let alpha = solve_coefficients(&values, s, p, &zi, &pj)?;
        state = build(&values, s, p, &zi, &pj, alpha)?;
    }

    let (rel, state) = match best {
        Some(b) => b,
        None => {
            let last = *history.last().expect("at least one iteration");
            (last, state)
        }
    };
    Ok(FitReport {
        model: state.model,
        converged: false,
        max_error: rel,
        history,
        z_node_indices: state.zi,
        p_node_indices: state.pj,
    })
}
