use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::realize::realize_xn;
use crate::boundary_measures::{BoundaryDensitySpec, DirectionalIntensity};
use crate::error::{Error, Result};
use crate::geometry::{
    contains_set_unchecked, polytope_volume, AxisBox, Ball, ConvexBody, HPolytope, SetModel,
    VCompact, Vector,
};
use crate::samplers::{default_radius, HyperplaneSampler, MuSampler, RngStream};
use crate::stats::Estimate;

/// A union of axis boxes with disjoint interiors, in the scaled frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<AxisBox>", into = "Vec<AxisBox>")]
pub struct Window {
    boxes: Vec<AxisBox>,
}

impl TryFrom<Vec<AxisBox>> for Window {
    type Error = Error;
    fn try_from(boxes: Vec<AxisBox>) -> Result<Self> {
        Self::new(boxes)
    }
}

impl From<Window> for Vec<AxisBox> {
    fn from(w: Window) -> Self {
        w.boxes
    }
}

impl Window {
    pub fn new(boxes: Vec<AxisBox>) -> Result<Self> {
        let Some(first) = boxes.first() else {
            return Err(Error::InvalidInput("window needs at least one box".into()));
        };
        let d = first.dim();
        for (i, b) in boxes.iter().enumerate() {
            if b.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: b.dim(),
                });
            }
            if !(b.volume() > 0.0) || !b.volume().is_finite() {
                return Err(Error::InvalidInput(format!("window box {i} has no interior")));
            }
            if boxes[..i].iter().any(|o| o.overlaps_interior(b)) {
                return Err(Error::InvalidInput(format!("window box {i} overlaps another box")));
            }
        }
        Ok(Self { boxes })
    }

    pub fn single(b: AxisBox) -> Result<Self> {
        Self::new(vec![b])
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    pub fn dim(&self) -> usize {
        self.boxes[0].dim()
    }

    pub fn volume(&self) -> f64 {
        self.boxes.iter().map(AxisBox::volume).sum()
    }

    pub fn max_norm(&self) -> f64 {
        self.boxes.iter().map(AxisBox::max_norm).fold(0.0, f64::max)
    }
}

/// Which random set a moment refers to.
#[derive(Clone, Debug)]
pub enum MomentModel {
    /// `n^γ Xₙ`. Polytopes are realized exactly; other models are measured
    /// with `probes` uniform points per window box.
    Xn {
        k: SetModel,
        spec: BoundaryDensitySpec,
        n: u64,
        probes: u64,
    },
    Z {
        nu: DirectionalIntensity,
        alpha: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MomentEstimate {
    pub m: u32,
    pub value: f64,
    pub standard_error: f64,
    pub window: Window,
    pub n: Option<u64>,
    pub trials: u64,
}

#[derive(Clone, Debug)]
enum Prepared {
    XnPolytope {
        k: HPolytope,
        sampler: MuSampler,
        n: u64,
        scale: f64,
    },
    XnProbes {
        k: SetModel,
        sampler: MuSampler,
        n: u64,
        scale: f64,
        probes: u64,
    },
    Z {
        sampler: HyperplaneSampler,
    },
}

/// Per-trial volumes of a random set inside each box of a window.
#[derive(Clone, Debug)]
pub struct VolumeSampler {
    prepared: Prepared,
    window: Window,
}

impl VolumeSampler {
    pub fn new(model: &MomentModel, window: &Window) -> Result<Self> {
        let prepared = match model {
            MomentModel::Xn { k, spec, n, probes } => {
                if k.dim() != window.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: k.dim(),
                        found: window.dim(),
                    });
                }
                if *n == 0 {
                    return Err(Error::InvalidInput("n must be at least 1".into()));
                }
                let sampler = MuSampler::new(k, spec)?;
                let scale = (*n as f64).powf(spec.gamma());
                match k.as_single_body() {
                    Some(ConvexBody::Polytope(p)) => Prepared::XnPolytope {
                        k: p.clone(),
                        sampler,
                        n: *n,
                        scale,
                    },
                    _ => {
                        if *probes == 0 {
                            return Err(Error::InvalidInput(
                                "probe-based volumes need at least one probe".into(),
                            ));
                        }
                        Prepared::XnProbes {
                            k: k.clone(),
                            sampler,
                            n: *n,
                            scale,
                            probes: *probes,
                        }
                    }
                }
            }
            MomentModel::Z { nu, alpha } => {
                if nu.dim() != window.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: nu.dim(),
                        found: window.dim(),
                    });
                }
                let radius = default_radius(nu.total_mass(), *alpha).max(window.max_norm());
                Prepared::Z {
                    sampler: HyperplaneSampler::new(nu, *alpha, radius)?,
                }
            }
        };
        Ok(Self {
            prepared,
            window: window.clone(),
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Volume of the realization inside each window box, in box order.
    pub fn trial_volumes<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        let boxes = self.window.boxes();
        match &self.prepared {
            Prepared::XnPolytope {
                k,
                sampler,
                n,
                scale,
            } => {
                let pts = (0..*n)
                    .map(|_| sampler.sample(rng))
                    .collect::<Result<Vec<_>>>()?;
                let x = realize_xn(k, &pts)?;
                if x.empty {
                    return Ok(vec![0.0; boxes.len()]);
                }
                let cell = x.cell.scale(*scale);
                boxes
                    .iter()
                    .map(|b| polytope_volume(&cell.intersect(&b.to_polytope()?)?))
                    .collect()
            }
            Prepared::XnProbes {
                k,
                sampler,
                n,
                scale,
                probes,
            } => {
                let pts = (0..*n)
                    .map(|_| sampler.sample(rng))
                    .collect::<Result<Vec<_>>>()?;
                let inv = 1.0 / scale;
                let mut out = Vec::with_capacity(boxes.len());
                for b in boxes {
                    // ξ with ξ + B(c, r)/s ⊆ K cannot exclude any probe of the box
                    let cover = VCompact::Ball(Ball {
                        center: b.center(),
                        radius: b.half_diagonal(),
                    });
                    let active: Vec<Vector> = pts
                        .iter()
                        .filter(|p| !contains_set_unchecked(k, &cover, p, inv))
                        .copied()
                        .collect();
                    let mut hits = 0u64;
                    for _ in 0..*probes {
                        let y = b.sample(rng).scale(inv);
                        if active.iter().all(|p| k.contains_point(&(*p + y))) {
                            hits += 1;
                        }
                    }
                    out.push(b.volume() * hits as f64 / *probes as f64);
                }
                Ok(out)
            }
            Prepared::Z { sampler } => {
                let batch = sampler.sample(rng)?;
                boxes
                    .iter()
                    .map(|b| polytope_volume(&batch.cell_in_box(b)?))
                    .collect()
            }
        }
    }

    /// Per-trial volumes for trials `0..trials` of `root_seed`, in trial
    /// order.
    pub fn run(&self, trials: u64, root_seed: u64) -> Result<Vec<Vec<f64>>> {
        (0..trials)
            .into_par_iter()
            .map(|t| self.trial_volumes(&mut RngStream::new(root_seed, t)))
            .collect()
    }
}

/// `E V_d(· ∩ W)^m` for each order in `orders`, from the same trials.
pub fn volume_moments(
    model: &MomentModel,
    orders: &[u32],
    window: &Window,
    trials: u64,
    root_seed: u64,
) -> Result<Vec<MomentEstimate>> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    if orders.iter().any(|m| *m == 0) {
        return Err(Error::InvalidInput("moment order must be at least 1".into()));
    }
    let sampler = VolumeSampler::new(model, window)?;
    let totals: Vec<f64> = sampler
        .run(trials, root_seed)?
        .into_iter()
        .map(|v| v.iter().sum())
        .collect();
    let n = match model {
        MomentModel::Xn { n, .. } => Some(*n),
        MomentModel::Z { .. } => None,
    };
    Ok(orders
        .iter()
        .map(|&m| {
            let powers: Vec<f64> = totals.iter().map(|v| v.powi(m as i32)).collect();
            let e = Estimate::from_samples(&powers);
            MomentEstimate {
                m,
                value: e.value,
                standard_error: e.stderr,
                window: window.clone(),
                n,
                trials,
            }
        })
        .collect())
}

pub fn volume_moment(
    model: &MomentModel,
    m: u32,
    window: &Window,
    trials: u64,
    root_seed: u64,
) -> Result<MomentEstimate> {
    Ok(volume_moments(model, &[m], window, trials, root_seed)?.remove(0))
}
