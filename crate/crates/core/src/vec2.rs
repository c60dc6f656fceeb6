use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A vector in the (x, z) plane; z is the launch axis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub z: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, z: 0.0 };

    pub const fn new(x: f64, z: f64) -> Self {
        Vec2 { x, z }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.z)
    }

    /// Unit vector a quarter turn clockwise from `self`, i.e. `(z, −x)/|self|`.
    ///
    /// For a ray moving along +z this points along +x, so it orders rays
    /// launched with increasing x.
    pub fn tangent(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.z / n, -self.x / n)
    }

    /// Component of `self` along the tangent of `direction`, without forming
    /// the unit vector first.
    pub fn across(self, direction: Vec2) -> f64 {
        (self.x * direction.z - self.z * direction.x) / direction.norm()
    }

    /// Rotates by `angle` clockwise, the sense that turns +z towards +x.
    pub fn rotate(self, angle: f64) -> Vec2 {
        // sin from |angle| keeps mirrored rays bitwise mirrored.
        let (s, c) = angle.abs().sin_cos();
        let s = s.copysign(angle);
        Vec2::new(self.x * c + self.z * s, self.z * c - self.x * s)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.z + o.z)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.z - o.z)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.z)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.z * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_of_forward_ray_points_along_x() {
        assert_eq!(Vec2::new(0.0, 3.0).tangent(), Vec2::new(1.0, 0.0));
    }

    #[test]
    fn rotation_preserves_length_and_turns_towards_x() {
        let p = Vec2::new(0.0, 2.0).rotate(0.1);
        assert!((p.norm() - 2.0).abs() < 1e-15);
        assert!(p.x > 0.0);
    }

    #[test]
    fn mirrored_rotation_is_bitwise_mirrored() {
        let p = Vec2::new(0.3, 1.7);
        let a = p.rotate(0.0123);
        let b = Vec2::new(-p.x, p.z).rotate(-0.0123);
        assert_eq!(a.x, -b.x);
        assert_eq!(a.z, b.z);
    }
}
