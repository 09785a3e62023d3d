//! Name → object resolution for kernels, families, and measures.
//!
//! The CLI works in one concrete representation: indices, domain points,
//! and family images are all real vectors. Scalar problems use
//! one-dimensional vectors; the 1-d kernel aliases make configs read
//! naturally.

use crate::config::{FamilySpec, KernelSpec, MeasureSpec};
use crate::error::{usage, Result};
use metric_forge_core::{FunctionFamily, IndexMeasure, Kernel, MKernel, SamplerSpec};

pub type Point = Vec<f64>;

pub fn build_kernel(spec: &KernelSpec) -> Result<Kernel<Point>> {
    if spec.base.is_some() {
        return Err(usage(format!(
            "kernel '{}' does not take a 'base' (only composite m-kernels do)",
            spec.name
        )));
    }
    kernel_by_name(&spec.name)
}

fn kernel_by_name(name: &str) -> Result<Kernel<Point>> {
    match name {
        "squared-euclidean" | "squared-difference" => Ok(Kernel::squared_euclidean()),
        "euclidean" | "absolute-difference" => Ok(Kernel::euclidean()),
        "dot-product" | "product" => Ok(Kernel::dot_product()),
        other => Err(usage(format!(
            "unknown kernel '{other}' (available: squared-euclidean, euclidean, \
             dot-product, and the 1-d aliases squared-difference, absolute-difference, product)"
        ))),
    }
}

pub fn build_m_kernel(spec: &KernelSpec, m: usize) -> Result<MKernel<Point>> {
    match (spec.name.as_str(), m) {
        (_, 2) => Ok(MKernel::from_kernel(&build_kernel(spec)?)),
        ("pairing", 4) => {
            let base = kernel_by_name(spec.base.as_deref().unwrap_or("squared-euclidean"))?;
            Ok(MKernel::symmetrized_pairing(&base))
        }
        ("negated-pairing", 4) => {
            let base = kernel_by_name(spec.base.as_deref().unwrap_or("squared-euclidean"))?;
            Ok(MKernel::symmetrized_pairing(&base).negated())
        }
        (other, m) => Err(usage(format!(
            "no m-kernel '{other}' of arity {m} (arity 2 takes any two-argument kernel; \
             arity 4 offers: pairing, negated-pairing)"
        ))),
    }
}

pub fn build_family(spec: &FamilySpec) -> Result<FunctionFamily<Point, Point, Point>> {
    let reject_value = || {
        Err(usage(format!("family '{}' does not take 'value'", spec.name)))
    };
    match spec.name.as_str() {
        "linear-functionals" => {
            if spec.value.is_some() {
                return reject_value();
            }
            let dim = spec
                .dim
                .ok_or_else(|| usage("family 'linear-functionals' needs 'dim'"))?;
            if dim == 0 {
                return Err(usage("family 'linear-functionals' needs dim >= 1"));
            }
            Ok(FunctionFamily::linear_functionals(dim))
        }
        "scaling" => {
            if spec.value.is_some() {
                return reject_value();
            }
            let dim = spec.dim.unwrap_or(1);
            if dim == 0 {
                return Err(usage("family 'scaling' needs dim >= 1"));
            }
            Ok(FunctionFamily::new("scaling", |y: &Point, x: &Point| {
                x.iter().map(|v| y[0] * v).collect()
            })
            .declare_linear(vec![0.0; dim]))
        }
        "identity" => {
            if spec.value.is_some() {
                return reject_value();
            }
            let dim = spec.dim.ok_or_else(|| usage("family 'identity' needs 'dim'"))?;
            if dim == 0 {
                return Err(usage("family 'identity' needs dim >= 1"));
            }
            Ok(FunctionFamily::new("identity", |_y: &Point, x: &Point| x.clone())
                .declare_linear(vec![0.0; dim]))
        }
        "constant" => {
            if spec.dim.is_some() {
                return Err(usage("family 'constant' does not take 'dim'"));
            }
            let value = spec
                .value
                .clone()
                .ok_or_else(|| usage("family 'constant' needs 'value'"))?;
            if value.is_empty() || value.iter().any(|v| !v.is_finite()) {
                return Err(usage("family 'constant' needs a nonempty finite 'value'"));
            }
            Ok(FunctionFamily::new("constant", move |_y: &Point, _x: &Point| {
                value.clone()
            }))
        }
        other => Err(usage(format!(
            "unknown family '{other}' (available: linear-functionals, scaling, identity, constant)"
        ))),
    }
}

/// Build the index measure. `sampler_seed` is the stage-derived seed for
/// sampler kinds; its absence makes sampler configs a usage error, which
/// is how "no seed, no stochastic stage" is enforced.
pub fn build_measure(spec: &MeasureSpec, sampler_seed: Option<u64>) -> Result<IndexMeasure<Point>> {
    let forbid = |field: &str, present: bool| -> Result<()> {
        if present {
            Err(usage(format!(
                "measure kind '{}' does not take '{field}'",
                spec.kind
            )))
        } else {
            Ok(())
        }
    };
    match spec.kind.as_str() {
        "discrete" => {
            forbid("lo", spec.lo.is_some())?;
            forbid("hi", spec.hi.is_some())?;
            forbid("nodes", spec.nodes.is_some())?;
            forbid("distribution", spec.distribution.is_some())?;
            forbid("mean", spec.mean.is_some())?;
            forbid("std_dev", spec.std_dev.is_some())?;
            let atoms = spec
                .atoms
                .as_ref()
                .ok_or_else(|| usage("measure kind 'discrete' needs 'atoms'"))?;
            let pairs: Vec<(Point, f64)> =
                atoms.iter().map(|a| (a.point.clone(), a.weight)).collect();
            Ok(IndexMeasure::discrete(pairs)?)
        }
        "grid" => {
            forbid("atoms", spec.atoms.is_some())?;
            forbid("distribution", spec.distribution.is_some())?;
            forbid("mean", spec.mean.is_some())?;
            forbid("std_dev", spec.std_dev.is_some())?;
            let lo = spec.lo.ok_or_else(|| usage("measure kind 'grid' needs 'lo'"))?;
            let hi = spec.hi.ok_or_else(|| usage("measure kind 'grid' needs 'hi'"))?;
            let nodes =
                spec.nodes.ok_or_else(|| usage("measure kind 'grid' needs 'nodes'"))?;
            Ok(IndexMeasure::grid_mapped(lo, hi, nodes, |y| vec![y])?)
        }
        "sampler" => {
            forbid("atoms", spec.atoms.is_some())?;
            forbid("nodes", spec.nodes.is_some())?;
            let seed = sampler_seed.ok_or_else(|| {
                usage("sampler measures are stochastic: provide --seed or config.seed")
            })?;
            let dist = spec
                .distribution
                .as_deref()
                .ok_or_else(|| usage("measure kind 'sampler' needs 'distribution'"))?;
            let sampler = match dist {
                "uniform" => {
                    forbid("mean", spec.mean.is_some())?;
                    forbid("std_dev", spec.std_dev.is_some())?;
                    let lo = spec
                        .lo
                        .ok_or_else(|| usage("uniform sampler needs 'lo'"))?;
                    let hi = spec
                        .hi
                        .ok_or_else(|| usage("uniform sampler needs 'hi'"))?;
                    SamplerSpec::Uniform { lo, hi }
                }
                "normal" => {
                    forbid("lo", spec.lo.is_some())?;
                    forbid("hi", spec.hi.is_some())?;
                    let mean = spec
                        .mean
                        .ok_or_else(|| usage("normal sampler needs 'mean'"))?;
                    let std_dev = spec
                        .std_dev
                        .ok_or_else(|| usage("normal sampler needs 'std_dev'"))?;
                    SamplerSpec::Normal { mean, std_dev }
                }
                other => {
                    return Err(usage(format!(
                        "unknown sampler distribution '{other}' (available: uniform, normal)"
                    )))
                }
            };
            Ok(IndexMeasure::sampler_mapped(sampler, seed, |y| vec![y])?)
        }
        other => Err(usage(format!(
            "unknown measure kind '{other}' (available: discrete, grid, sampler)"
        ))),
    }
}
