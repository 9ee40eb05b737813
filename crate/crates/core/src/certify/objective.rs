use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{dot, FractionalPoint, Labeling, PottsInstance};
use crate::num::{int, to_f64, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    Hamming,
    Gap,
    Custom,
}

/// An affine quality measure `f(x) = scale · (⟨c, x⟩ + offset)` over polytope coordinates.
///
/// Keeping the positive `scale` outside lets the LPs optimize `⟨c, x⟩` with integral data;
/// it is applied only when values are reported.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityObjective {
    pub name: String,
    pub kind: ObjectiveKind,
    pub coeffs: Vec<Rational>,
    pub offset: Rational,
    pub scale: Rational,
}

impl QualityObjective {
    pub fn new(name: impl Into<String>, coeffs: Vec<Rational>, offset: Rational, scale: Rational) -> Result<Self> {
        if !Signed::is_positive(&scale) {
            return Err(Error::Parameter("objective scale must be positive".into()));
        }
        Ok(Self { name: name.into(), kind: ObjectiveKind::Custom, coeffs, offset, scale })
    }

    /// `⟨c, x⟩ + offset`, before scaling.
    pub fn raw<T: Scalar>(&self, point: &[T]) -> T {
        let c: Vec<T> = self.coeffs.iter().map(T::from_rational).collect();
        dot(&c, point).add(&T::from_rational(&self.offset))
    }

    pub fn evaluate<T: Scalar>(&self, point: &FractionalPoint<T>) -> T {
        self.raw(point.values()).mul(&T::from_rational(&self.scale))
    }

    /// Exact value on an integral labeling, reading only the coordinates it sets.
    pub fn evaluate_labeling(&self, instance: &PottsInstance, x: &Labeling) -> Rational {
        self.raw_labeling(instance, x.labels()) * &self.scale
    }

    pub(crate) fn raw_labeling(&self, instance: &PottsInstance, x: &[usize]) -> Rational {
        let mut total = self.offset.clone();
        for (u, &l) in x.iter().enumerate() {
            total += &self.coeffs[instance.node_col(u, l)];
        }
        for (e, &(u, v)) in instance.edges().iter().enumerate() {
            let c = &self.coeffs[instance.edge_col(e, x[u], x[v])];
            if !Zero::is_zero(c) {
                total += c;
            }
        }
        total
    }

    /// Maps a raw value to the reported scale.
    pub fn scaled(&self, raw: f64) -> f64 {
        raw * to_f64(&self.scale)
    }

    /// Inverse of [`scaled`](Self::scaled).
    pub fn unscaled(&self, value: f64) -> f64 {
        value / to_f64(&self.scale)
    }
}

/// Fraction of vertices labeled differently from `x_star`, as an affine function of the
/// node marginals.
pub fn make_hamming_objective(instance: &PottsInstance, x_star: &Labeling) -> Result<QualityObjective> {
    instance.check_labeling(x_star)?;
    let n = instance.vertex_count();
    let mut coeffs = vec![<Rational as Zero>::zero(); instance.dimension()];
    for u in 0..n {
        for i in 0..instance.label_count() {
            coeffs[instance.node_col(u, i)] = if i == x_star[u] { int(-1) } else { int(1) };
        }
    }
    Ok(QualityObjective {
        name: "hamming".into(),
        kind: ObjectiveKind::Hamming,
        coeffs,
        offset: int(n as i64),
        scale: Rational::new(1.into(), (2 * n).into()),
    })
}

/// `⟨θ, x⟩ / ⟨θ, x*⟩`.
pub fn make_gap_objective(instance: &PottsInstance, x_star: &Labeling) -> Result<QualityObjective> {
    let e_star = instance.energy_exact(x_star)?;
    if !Signed::is_positive(&e_star) {
        return Err(Error::DegenerateObjective(format!(
            "reference energy {} is not positive, so the ratio is undefined",
            crate::num::format_rational(&e_star)
        )));
    }
    Ok(QualityObjective {
        name: "gap".into(),
        kind: ObjectiveKind::Gap,
        coeffs: instance.objective_vector::<Rational>(),
        offset: <Rational as Zero>::zero(),
        scale: e_star.recip(),
    })
}
