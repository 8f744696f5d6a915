use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

use super::ContourDomain;

/// Default ratio between the sampling contour and the target boundary.
pub const DEFAULT_INFLATION: f64 = 4.0 / 3.0;

/// Minimal distance between a sample point and the target boundary.
const OUTSIDE_MARGIN: f64 = 1e-10;

/// Sample points `s_1..s_2r`, parameter points `p_1..p_q` and the probing
/// directions. Left points are `theta_i = s[2i]`, right points
/// `sigma_i = s[2i + 1]` (zero based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SamplingRecord", into = "SamplingRecord")]
pub struct SamplingConfig {
    sample_points: Vec<C64>,
    parameter_points: Vec<C64>,
    left_dirs: Array2<C64>,
    right_dirs: Array2<C64>,
    seed: u64,
}

/// File layout: one array of `n` entries per direction.
#[derive(Serialize, Deserialize)]
struct SamplingRecord {
    sample_points: Vec<C64>,
    parameter_points: Vec<C64>,
    left_dirs: Vec<Vec<C64>>,
    right_dirs: Vec<Vec<C64>>,
    seed: u64,
}

fn columns(m: &Array2<C64>) -> Vec<Vec<C64>> {
    m.columns().into_iter().map(|c| c.to_vec()).collect()
}

fn from_columns(cols: &[Vec<C64>], what: &str) -> Result<Array2<C64>> {
    let n = cols.first().map_or(0, Vec::len);
    if cols.iter().any(|c| c.len() != n) {
        return Err(Error::Malformed(format!("{what} have unequal lengths")));
    }
    Ok(Array2::from_shape_fn((n, cols.len()), |(i, k)| cols[k][i]))
}

impl From<SamplingConfig> for SamplingRecord {
    fn from(c: SamplingConfig) -> Self {
        SamplingRecord {
            left_dirs: columns(&c.left_dirs),
            right_dirs: columns(&c.right_dirs),
            sample_points: c.sample_points,
            parameter_points: c.parameter_points,
            seed: c.seed,
        }
    }
}

impl TryFrom<SamplingRecord> for SamplingConfig {
    type Error = Error;

    fn try_from(r: SamplingRecord) -> Result<Self> {
        let left = from_columns(&r.left_dirs, "left directions")?;
        let right = from_columns(&r.right_dirs, "right directions")?;
        SamplingConfig::new(r.sample_points, r.parameter_points, left, right, r.seed)
    }
}

impl SamplingConfig {
    /// Checks shapes and that no left point coincides with a right point.
    pub fn new(
        sample_points: Vec<C64>,
        parameter_points: Vec<C64>,
        left_dirs: Array2<C64>,
        right_dirs: Array2<C64>,
        seed: u64,
    ) -> Result<Self> {
        let two_r = sample_points.len();
        if two_r == 0 || two_r % 2 != 0 {
            return Err(Error::arg(format!("need an even, nonzero number of sample points, got {two_r}")));
        }
        if parameter_points.is_empty() {
            return Err(Error::arg("need at least one parameter point"));
        }
        let r = two_r / 2;
        let n = left_dirs.nrows();
        if n == 0 || left_dirs.ncols() != r || right_dirs.dim() != (n, r) {
            return Err(Error::arg(format!(
                "directions must be {n}x{r}, got {:?} and {:?}",
                left_dirs.dim(),
                right_dirs.dim()
            )));
        }
        let all_finite = sample_points.iter().chain(&parameter_points).all(|z| z.is_finite())
            && left_dirs.iter().chain(right_dirs.iter()).all(|z| z.is_finite());
        if !all_finite {
            return Err(Error::arg("sampling data must be finite"));
        }
        let cfg = Self { sample_points, parameter_points, left_dirs, right_dirs, seed };
        let (theta, sigma) = (cfg.theta(), cfg.sigma());
        for t in &theta {
            if sigma.iter().any(|s| s == t) {
                return Err(Error::arg(format!("left and right sample points coincide at {t}")));
            }
        }
        Ok(cfg)
    }

    /// Errors unless every sample point lies outside the closed domain with margin.
    pub fn check_outside(&self, domain: &ContourDomain) -> Result<()> {
        match self.sample_points.iter().find(|s| !domain.is_outside_with_margin(**s, OUTSIDE_MARGIN)) {
            Some(s) => Err(Error::arg(format!("sample point {s} is not outside the target domain"))),
            None => Ok(()),
        }
    }

    pub fn sample_points(&self) -> &[C64] {
        &self.sample_points
    }

    pub fn parameter_points(&self) -> &[C64] {
        &self.parameter_points
    }

    pub fn theta(&self) -> Vec<C64> {
        self.sample_points.iter().step_by(2).copied().collect()
    }

    pub fn sigma(&self) -> Vec<C64> {
        self.sample_points.iter().skip(1).step_by(2).copied().collect()
    }

    /// `n x r`, column `k` is `l_k`.
    pub fn left_dirs(&self) -> &Array2<C64> {
        &self.left_dirs
    }

    /// `n x r`, column `k` is `r_k`.
    pub fn right_dirs(&self) -> &Array2<C64> {
        &self.right_dirs
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn r(&self) -> usize {
        self.sample_points.len() / 2
    }

    pub fn q(&self) -> usize {
        self.parameter_points.len()
    }

    pub fn dim(&self) -> usize {
        self.left_dirs.nrows()
    }

    /// Same points, different directions.
    pub fn with_directions(&self, left_dirs: Array2<C64>, right_dirs: Array2<C64>) -> Result<Self> {
        Self::new(self.sample_points.clone(), self.parameter_points.clone(), left_dirs, right_dirs, self.seed)
    }
}

fn uniform_parameters(q: usize, (p0, p1): (f64, f64)) -> Vec<C64> {
    if q == 1 {
        return vec![C64::new(p0, 0.0)];
    }
    (0..q).map(|j| C64::new(p0 + (p1 - p0) * j as f64 / (q - 1) as f64, 0.0)).collect()
}

/// `2r` points uniformly spaced on `contour`, `q` uniformly spaced real
/// parameters, and standard complex Gaussian directions drawn from `seed`
/// (left directions first, one column at a time).
pub fn sampling_on_contour(
    contour: &ContourDomain,
    dim: usize,
    r: usize,
    q: usize,
    p_range: (f64, f64),
    seed: u64,
) -> Result<SamplingConfig> {
    if r == 0 || q == 0 || dim == 0 {
        return Err(Error::arg(format!("r, q and dim must be positive (r={r}, q={q}, dim={dim})")));
    }
    if !(p_range.0.is_finite() && p_range.1.is_finite()) || p_range.0 > p_range.1 {
        return Err(Error::arg(format!("invalid parameter range {p_range:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let mut m = Array2::zeros((dim, r));
        for k in 0..r {
            for i in 0..dim {
                m[[i, k]] = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            }
        }
        m
    };
    let left = draw(&mut rng);
    let right = draw(&mut rng);
    SamplingConfig::new(contour.boundary_points(2 * r), uniform_parameters(q, p_range), left, right, seed)
}

/// Sampling on the boundary of `domain` scaled by `inflation`.
pub fn default_sampling(
    domain: &ContourDomain,
    dim: usize,
    r: usize,
    q: usize,
    p_range: (f64, f64),
    seed: u64,
    inflation: f64,
) -> Result<SamplingConfig> {
    if !(inflation.is_finite() && inflation > 1.0) {
        return Err(Error::arg(format!("inflation must exceed 1, got {inflation}")));
    }
    sampling_on_contour(&domain.scaled(inflation)?, dim, r, q, p_range, seed)
}
