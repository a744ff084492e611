//! Synthetic problem generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::problem::{GridShape, Problem};
use crate::energy::{EnergyFunction, Labeling};
use crate::oracle::{random_instance, TermPolicy};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("invalid generator parameter: {0}")]
    Param(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridParams {
    pub width: usize,
    pub height: usize,
    /// Probability of flipping each pixel of the clean image.
    pub noise: f64,
    /// Cost of neighbouring pixels taking different labels.
    pub smoothness: f64,
    /// Cost per unit of disagreement between a label and the observation.
    pub data_weight: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams {
            width: 8,
            height: 8,
            noise: 0.1,
            smoothness: 0.35,
            data_weight: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridInstance {
    pub problem: Problem,
    pub clean: Labeling,
    pub observed: Labeling,
}

/// Clean test image: label 1 inside the centred box covering the middle half
/// of each axis.
pub fn clean_image(width: usize, height: usize) -> Labeling {
    let inside = |k: usize, len: usize| 4 * k >= len && 4 * k < 3 * len;
    let labels = (0..height)
        .flat_map(|y| (0..width).map(move |x| u8::from(inside(x, width) && inside(y, height))))
        .collect();
    Labeling::new(labels).expect("binary image")
}

/// Binary denoising on a 4-connected grid.
///
/// Pixel `(x, y)` is vertex `y * width + x`. Each pixel of the clean image is
/// flipped with probability `noise` (one `gen_bool` per pixel in row-major
/// order from `ChaCha8Rng::seed_from_u64(seed)`). Labeling pixel `v` with `l`
/// costs `|observed(v) - l| * data_weight`; edges, emitted right-neighbour
/// then down-neighbour in row-major order, carry `(0, s, s, 0)`.
pub fn grid_denoise(params: &GridParams, seed: u64) -> Result<GridInstance, GenerateError> {
    let GridParams {
        width,
        height,
        noise,
        smoothness,
        data_weight,
    } = *params;
    if width == 0 || height == 0 {
        return Err(GenerateError::Param(
            "grid width and height must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&noise) {
        return Err(GenerateError::Param(format!(
            "noise rate {noise} is not in [0, 1]"
        )));
    }
    for (name, v) in [("smoothness", smoothness), ("data weight", data_weight)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(GenerateError::Param(format!(
                "{name} {v} must be finite and non-negative"
            )));
        }
    }

    let clean = clean_image(width, height);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let observed = Labeling::new(
        clean
            .labels()
            .iter()
            .map(|&l| if rng.gen_bool(noise) { 1 - l } else { l })
            .collect(),
    )
    .expect("binary image");

    let unaries: Vec<(f64, f64)> = observed
        .labels()
        .iter()
        .map(|&o| {
            let o = f64::from(o);
            (o * data_weight, (1.0 - o) * data_weight)
        })
        .collect();
    let table = [0.0, smoothness, smoothness, 0.0];
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let v = y * width + x;
            if x + 1 < width {
                edges.push((v, v + 1, table));
            }
            if y + 1 < height {
                edges.push((v, v + width, table));
            }
        }
    }
    let energy = EnergyFunction::from_parts(&unaries, &edges)
        .map_err(|e| GenerateError::Param(e.to_string()))?;
    Ok(GridInstance {
        problem: Problem {
            energy,
            grid: Some(GridShape { width, height }),
        },
        clean,
        observed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomParams {
    pub n: usize,
    pub edge_factor: f64,
    pub terms: TermPolicy,
}

pub fn random(params: &RandomParams, seed: u64) -> Result<Problem, GenerateError> {
    if params.n == 0 {
        return Err(GenerateError::Param("n must be at least 1".into()));
    }
    if !(params.edge_factor.is_finite() && params.edge_factor >= 0.0) {
        return Err(GenerateError::Param(format!(
            "edge factor {} must be finite and non-negative",
            params.edge_factor
        )));
    }
    Ok(Problem::new(random_instance(
        params.n,
        params.edge_factor,
        params.terms,
        seed,
    )))
}
