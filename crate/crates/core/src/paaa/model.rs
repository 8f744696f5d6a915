use ndarray::{Array1, Array2, Array3};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Relative distance at which an evaluation point is treated as a node.
const NODE_TOL: f64 = 1e-14;

/// Denominator magnitude below which an evaluation is a pole hit.
const DENOMINATOR_FLOOR: f64 = 1e-300;

/// `f(z, p) = sum_ij a_ij D_ij / ((z - xi_i)(p - pi_j)) / sum_ij a_ij / ((z - xi_i)(p - pi_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricModel2D {
    z_nodes: Vec<C64>,
    p_nodes: Vec<C64>,
    alpha: Array2<C64>,
    values: Array2<C64>,
}

/// Same nodes and coefficients as a scalar model, with vector node values.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorBarycentricModel {
    z_nodes: Vec<C64>,
    p_nodes: Vec<C64>,
    alpha: Array2<C64>,
    /// `[i][j][.]`
    vectors: Array3<C64>,
}

/// Which terms of the barycentric sums survive at an evaluation point.
enum Terms {
    Node(usize, usize),
    /// `(i, j, c_ij)` with the denominator `sum c_ij`.
    Sum(Vec<(usize, usize, C64)>, C64),
}

fn matching_node(nodes: &[C64], x: C64) -> Option<usize> {
    nodes.iter().position(|&v| (x - v).norm() <= NODE_TOL * v.norm().max(1.0))
}

fn distinct(nodes: &[C64]) -> bool {
    nodes.iter().enumerate().all(|(a, x)| nodes[..a].iter().all(|y| y != x))
}

fn terms(z_nodes: &[C64], p_nodes: &[C64], alpha: &Array2<C64>, z: C64, p: C64) -> Result<Terms> {
    let zi = matching_node(z_nodes, z);
    let pj = matching_node(p_nodes, p);
    let mut out = Vec::new();
    match (zi, pj) {
        (Some(i), Some(j)) => return Ok(Terms::Node(i, j)),
        // the common factor 1/(z - xi_i) cancels
        (Some(i), None) => {
            for (j, &pn) in p_nodes.iter().enumerate() {
                out.push((i, j, alpha[[i, j]] / (p - pn)));
            }
        }
        (None, Some(j)) => {
            for (i, &zn) in z_nodes.iter().enumerate() {
                out.push((i, j, alpha[[i, j]] / (z - zn)));
            }
        }
        (None, None) => {
            for (i, &zn) in z_nodes.iter().enumerate() {
                let dz = (z - zn).inv();
                for (j, &pn) in p_nodes.iter().enumerate() {
                    out.push((i, j, alpha[[i, j]] * dz / (p - pn)));
                }
            }
        }
    }
    let den: C64 = out.iter().map(|t| t.2).sum();
    if !(den.norm() >= DENOMINATOR_FLOOR) {
        return Err(Error::Evaluation(format!("barycentric denominator vanishes at z = {z}, p = {p}")));
    }
    Ok(Terms::Sum(out, den))
}

fn check_shapes(z_nodes: &[C64], p_nodes: &[C64], alpha: &Array2<C64>, lead: (usize, usize)) -> Result<()> {
    if z_nodes.is_empty() || p_nodes.is_empty() {
        return Err(Error::arg("a barycentric model needs at least one node per axis"));
    }
    if !distinct(z_nodes) || !distinct(p_nodes) {
        return Err(Error::arg("barycentric nodes must be distinct within each axis"));
    }
    let shape = (z_nodes.len(), p_nodes.len());
    if alpha.dim() != shape || lead != shape {
        return Err(Error::arg(format!(
            "coefficients {:?} and node values {:?} must both be {shape:?}",
            alpha.dim(),
            lead
        )));
    }
    Ok(())
}

impl BarycentricModel2D {
    pub fn new(z_nodes: Vec<C64>, p_nodes: Vec<C64>, alpha: Array2<C64>, values: Array2<C64>) -> Result<Self> {
        check_shapes(&z_nodes, &p_nodes, &alpha, values.dim())?;
        Ok(Self { z_nodes, p_nodes, alpha, values })
    }

    pub fn z_nodes(&self) -> &[C64] {
        &self.z_nodes
    }

    pub fn p_nodes(&self) -> &[C64] {
        &self.p_nodes
    }

    pub fn alpha(&self) -> &Array2<C64> {
        &self.alpha
    }

    /// `D(xi_i, pi_j)`.
    pub fn values(&self) -> &Array2<C64> {
        &self.values
    }

    /// `(degree in z, degree in p)`: node counts minus one.
    pub fn degrees(&self) -> (usize, usize) {
        (self.z_nodes.len() - 1, self.p_nodes.len() - 1)
    }

    pub fn eval(&self, z: C64, p: C64) -> Result<C64> {
        match terms(&self.z_nodes, &self.p_nodes, &self.alpha, z, p)? {
            Terms::Node(i, j) => Ok(self.values[[i, j]]),
            Terms::Sum(t, den) => {
                let num: C64 = t.iter().map(|&(i, j, c)| c * self.values[[i, j]]).sum();
                Ok(num / den)
            }
        }
    }

    /// Poles in `z` of the model with `p` fixed: the finite eigenvalues of
    /// the arrowhead pencil of the one-dimensional barycentric denominator.
    pub fn poles_at(&self, p: C64) -> Result<Vec<C64>> {
        let k = self.z_nodes.len();
        let beta: Vec<C64> = match matching_node(&self.p_nodes, p) {
            Some(j) => self.alpha.column(j).to_vec(),
            None => (0..k)
                .map(|i| self.p_nodes.iter().enumerate().map(|(j, &pn)| self.alpha[[i, j]] / (p - pn)).sum())
                .collect(),
        };
        if beta.iter().all(|b| *b == C64::new(0.0, 0.0)) {
            return Err(Error::Evaluation(format!("all effective barycentric weights vanish at p = {p}")));
        }
        let one = C64::new(1.0, 0.0);
        let mut a = Array2::zeros((k + 1, k + 1));
        let mut b = Array2::zeros((k + 1, k + 1));
        for i in 0..k {
            a[[0, i + 1]] = beta[i];
            a[[i + 1, 0]] = one;
            a[[i + 1, i + 1]] = self.z_nodes[i];
            b[[i + 1, i + 1]] = one;
        }
        let mut pairs = crate::linalg::eig_generalized(&a, &b)?;
        // the pencil always has two infinite eigenvalues
        pairs.sort_by(|x, y| x.finiteness().total_cmp(&y.finiteness()));
        let mut poles: Vec<C64> = pairs.iter().skip(2).map(|e| e.value()).collect();
        poles.sort_by(crate::linalg::eigenvalue_order);
        Ok(poles)
    }
}

/// Replaces the node values of `model` by vectors `[i][j][.]`.
pub fn lift_vector(model: &BarycentricModel2D, vectors: Array3<C64>) -> Result<VectorBarycentricModel> {
    let (a, b, _) = vectors.dim();
    if (a, b) != model.alpha.dim() {
        return Err(Error::arg(format!(
            "need a vector for each of the {:?} node pairs, got {:?}",
            model.alpha.dim(),
            (a, b)
        )));
    }
    Ok(VectorBarycentricModel {
        z_nodes: model.z_nodes.clone(),
        p_nodes: model.p_nodes.clone(),
        alpha: model.alpha.clone(),
        vectors,
    })
}

impl VectorBarycentricModel {
    pub fn new(z_nodes: Vec<C64>, p_nodes: Vec<C64>, alpha: Array2<C64>, vectors: Array3<C64>) -> Result<Self> {
        let (a, b, _) = vectors.dim();
        check_shapes(&z_nodes, &p_nodes, &alpha, (a, b))?;
        Ok(Self { z_nodes, p_nodes, alpha, vectors })
    }

    pub fn z_nodes(&self) -> &[C64] {
        &self.z_nodes
    }

    pub fn p_nodes(&self) -> &[C64] {
        &self.p_nodes
    }

    pub fn alpha(&self) -> &Array2<C64> {
        &self.alpha
    }

    pub fn vectors(&self) -> &Array3<C64> {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.dim().2
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.z_nodes.len() - 1, self.p_nodes.len() - 1)
    }

    pub fn eval(&self, z: C64, p: C64) -> Result<Array1<C64>> {
        match terms(&self.z_nodes, &self.p_nodes, &self.alpha, z, p)? {
            Terms::Node(i, j) => Ok(self.vectors.slice(ndarray::s![i, j, ..]).to_owned()),
            Terms::Sum(t, den) => {
                let mut num = Array1::zeros(self.dim());
                for (i, j, c) in t {
                    num.scaled_add(c, &self.vectors.slice(ndarray::s![i, j, ..]));
                }
                Ok(num / den)
            }
        }
    }
}
