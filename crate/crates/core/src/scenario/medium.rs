use crate::error::Fault;
use crate::vec2::Vec2;

/// Whether a medium describes a refractive index (optical engine) or a
/// potential energy (particle engines).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Index,
    Potential,
}

impl Quantity {
    pub fn vacuum_value(self) -> f64 {
        match self {
            Quantity::Index => 1.0,
            Quantity::Potential => 0.0,
        }
    }
}

/// Analytic shape of the medium field.
#[derive(Debug, Clone, PartialEq)]
pub enum MediumForm {
    Vacuum,
    Uniform { value: f64 },
    /// `value + gradient · r`, so `value` is the field at the origin.
    Linear { value: f64, gradient: Vec2 },
    /// `½·m·Ω²·x²`.
    Harmonic { mass: f64, omega: f64 },
}

/// Axis-aligned box outside which the medium is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl Domain {
    pub fn contains(&self, p: Vec2) -> bool {
        (self.x_min..=self.x_max).contains(&p.x) && (self.z_min..=self.z_max).contains(&p.z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Medium {
    pub quantity: Quantity,
    pub form: MediumForm,
    pub domain: Option<Domain>,
}

impl Medium {
    pub fn vacuum(quantity: Quantity) -> Self {
        Medium {
            quantity,
            form: MediumForm::Vacuum,
            domain: None,
        }
    }

    pub fn is_vacuum(&self) -> bool {
        match self.form {
            MediumForm::Vacuum => true,
            MediumForm::Uniform { value } => value == self.quantity.vacuum_value(),
            _ => false,
        }
    }

    /// Field value and gradient at `point`.
    pub fn evaluate(&self, point: Vec2) -> Result<(f64, Vec2), Fault> {
        if let Some(domain) = &self.domain {
            if !domain.contains(point) {
                return Err(Fault::DomainEscape {
                    x: point.x,
                    z: point.z,
                });
            }
        }
        Ok(match self.form {
            MediumForm::Vacuum => (self.quantity.vacuum_value(), Vec2::ZERO),
            MediumForm::Uniform { value } => (value, Vec2::ZERO),
            MediumForm::Linear { value, gradient } => (value + gradient.dot(point), gradient),
            MediumForm::Harmonic { mass, omega } => {
                let stiffness = mass * omega * omega;
                (
                    0.5 * stiffness * point.x * point.x,
                    Vec2::new(stiffness * point.x, 0.0),
                )
            }
        })
    }
}

/// `n` and `∇n` (optical) or `V` and `∇V` (particle engines) at `point`.
pub fn evaluate_medium(medium: &Medium, point: Vec2) -> Result<(f64, Vec2), Fault> {
    medium.evaluate(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vacuum_index_is_one_with_no_gradient() {
        let m = Medium::vacuum(Quantity::Index);
        assert_eq!(m.evaluate(Vec2::new(3.0, -7.0)).unwrap(), (1.0, Vec2::ZERO));
        let m = Medium::vacuum(Quantity::Potential);
        assert_eq!(m.evaluate(Vec2::new(3.0, -7.0)).unwrap(), (0.0, Vec2::ZERO));
    }

    #[test]
    fn harmonic_potential_at_two() {
        let m = Medium {
            quantity: Quantity::Potential,
            form: MediumForm::Harmonic {
                mass: 1.0,
                omega: 1.0,
            },
            domain: None,
        };
        assert_eq!(
            m.evaluate(Vec2::new(2.0, 0.0)).unwrap(),
            (2.0, Vec2::new(2.0, 0.0))
        );
    }

    #[test]
    fn linear_index() {
        let g = Vec2::new(1e-3, 0.0);
        let m = Medium {
            quantity: Quantity::Index,
            form: MediumForm::Linear {
                value: 1.0,
                gradient: g,
            },
            domain: None,
        };
        let (n, grad) = m.evaluate(Vec2::new(5.0, 0.0)).unwrap();
        assert!((n - 1.005).abs() < 1e-15);
        assert_eq!(grad, g);
    }

    #[test]
    fn outside_domain_is_an_escape() {
        let mut m = Medium::vacuum(Quantity::Index);
        m.domain = Some(Domain {
            x_min: -1.0,
            x_max: 1.0,
            z_min: 0.0,
            z_max: 10.0,
        });
        assert!(m.evaluate(Vec2::new(0.5, 5.0)).is_ok());
        assert!(matches!(
            m.evaluate(Vec2::new(1.5, 5.0)),
            Err(Fault::DomainEscape { .. })
        ));
    }

    fn media() -> impl Strategy<Value = Medium> {
        let linear = (-2.0..2.0f64, -1e-2..1e-2f64, -1e-2..1e-2f64).prop_map(|(v, gx, gz)| {
            MediumForm::Linear {
                value: v,
                gradient: Vec2::new(gx, gz),
            }
        });
        let harmonic = (0.1..3.0f64, 0.1..3.0f64)
            .prop_map(|(mass, omega)| MediumForm::Harmonic { mass, omega });
        prop_oneof![linear, harmonic].prop_map(|form| Medium {
            quantity: Quantity::Potential,
            form,
            domain: None,
        })
    }

    proptest! {
        #[test]
        fn gradient_matches_central_differences(
            medium in media(),
            x in -5.0..5.0f64,
            z in -5.0..5.0f64,
        ) {
            // Domain size 10, so the step is 1e-5.
            let h = 1e-6 * 10.0;
            let p = Vec2::new(x, z);
            let (_, grad) = medium.evaluate(p).unwrap();
            let f = |q: Vec2| medium.evaluate(q).unwrap().0;
            let fd = Vec2::new(
                (f(p + Vec2::new(h, 0.0)) - f(p - Vec2::new(h, 0.0))) / (2.0 * h),
                (f(p + Vec2::new(0.0, h)) - f(p - Vec2::new(0.0, h))) / (2.0 * h),
            );
            let scale = grad.norm().max(1e-3);
            prop_assert!((fd - grad).norm() / scale < 1e-6);
        }
    }
}
