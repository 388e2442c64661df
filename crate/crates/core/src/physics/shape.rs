//! Collision shapes and narrowphase tests.
//!
//! All tests treat shapes as closed sets: touching counts as overlap.

use crate::math::{Transform, Vec3};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape<T> {
    Sphere { radius: T },
    /// Oriented by the owning node's transform.
    Box { half_extents: Vec3<T> },
}

impl<T: Scalar> Shape<T> {
    pub fn sphere(radius: T) -> Self {
        Shape::Sphere { radius }
    }

    pub fn cuboid(hx: T, hy: T, hz: T) -> Self {
        Shape::Box { half_extents: Vec3::new(hx, hy, hz) }
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            Shape::Sphere { radius } => radius > T::zero() && radius.is_finite(),
            Shape::Box { half_extents: h } => {
                h.is_finite() && h.x > T::zero() && h.y > T::zero() && h.z > T::zero()
            }
        }
    }

    /// The shape grown by `skin` on every side.
    pub fn inflated(&self, skin: T) -> Self {
        match *self {
            Shape::Sphere { radius } => Shape::Sphere { radius: radius + skin },
            Shape::Box { half_extents } => Shape::Box { half_extents: half_extents + Vec3::splat(skin) },
        }
    }

    pub fn aabb(&self, pose: &Transform<T>) -> Aabb<T> {
        let ext = match *self {
            Shape::Sphere { radius } => Vec3::splat(radius),
            Shape::Box { half_extents: h } => {
                let [ax, ay, az] = pose.rotation.axes();
                ax.abs() * h.x + ay.abs() * h.y + az.abs() * h.z
            }
        };
        Aabb { min: pose.position - ext, max: pose.position + ext }
    }

    /// Point containment, closed.
    pub fn contains(&self, pose: &Transform<T>, p: Vec3<T>) -> bool {
        match *self {
            Shape::Sphere { radius } => (p - pose.position).norm_squared() <= radius * radius,
            Shape::Box { half_extents: h } => {
                let l = pose.inverse_transform_point(p).abs();
                l.x <= h.x && l.y <= h.y && l.z <= h.z
            }
        }
    }
    /// First entry of the ray `from + s·dir` (s ≥ 0) into the shape: `(s, outward normal)`.
    /// Rays starting inside report no hit.
    pub fn ray_hit(&self, pose: &Transform<T>, from: Vec3<T>, dir: Vec3<T>) -> Option<(T, Vec3<T>)> {
        let zero = T::zero();
        match *self {
            Shape::Sphere { radius } => {
                let m = from - pose.position;
                let a = dir.dot(dir);
                let b = m.dot(dir);
                let c = m.dot(m) - radius * radius;
                if a <= zero || c <= zero {
                    return None;
                }
                let disc = b * b - a * c;
                if disc < zero || b > zero {
                    return None;
                }
                let s = (-b - disc.sqrt()) / a;
                let n = (m + dir * s).try_normalize(T::epsilon())?;
                Some((s, n))
            }
            Shape::Box { half_extents: h } => {
                let o = pose.inverse_transform_point(from);
                let d = pose.rotation.conjugate().rotate(dir);
                if o.abs().x <= h.x && o.abs().y <= h.y && o.abs().z <= h.z {
                    return None;
                }
                let mut enter = T::neg_infinity();
                let mut exit = T::infinity();
                let mut axis = 0;
                for i in 0..3 {
                    let (oi, di, hi) = (o[i], d[i], h[i]);
                    if di == zero {
                        if oi.abs() > hi {
                            return None;
                        }
                        continue;
                    }
                    let (mut t0, mut t1) = ((-hi - oi) / di, (hi - oi) / di);
                    if t0 > t1 {
                        std::mem::swap(&mut t0, &mut t1);
                    }
                    if t0 > enter {
                        enter = t0;
                        axis = i;
                    }
                    exit = exit.min(t1);
                }
                if enter > exit || enter < zero {
                    return None;
                }
                let mut local = [zero; 3];
                local[axis] = if d[axis] > zero { -T::one() } else { T::one() };
                Some((enter, pose.rotation.rotate(Vec3::new(local[0], local[1], local[2]))))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb<T> {
    pub min: Vec3<T>,
    pub max: Vec3<T>,
}

impl<T: Scalar> Aabb<T> {
    pub fn inflate(&self, by: T) -> Self {
        Self { min: self.min - Vec3::splat(by), max: self.max + Vec3::splat(by) }
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.min.x <= o.max.x
            && o.min.x <= self.max.x
            && self.min.y <= o.max.y
            && o.min.y <= self.max.y
            && self.min.z <= o.max.z
            && o.min.z <= self.max.z
    }
}

/// Penetration between two shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact<T> {
    /// Unit direction from the first shape toward the second.
    pub normal: Vec3<T>,
    /// Overlap depth along `normal`; zero when just touching.
    pub depth: T,
}

impl<T: Scalar> Contact<T> {
    fn flipped(self) -> Self {
        Self { normal: -self.normal, depth: self.depth }
    }
}

/// True iff the two solids intersect (closed sets).
pub fn overlap<T: Scalar>(a: &Shape<T>, ta: &Transform<T>, b: &Shape<T>, tb: &Transform<T>) -> bool {
    contact(a, ta, b, tb).is_some()
}

/// Contact normal and depth, or `None` when the shapes are separated.
pub fn contact<T: Scalar>(
    a: &Shape<T>,
    ta: &Transform<T>,
    b: &Shape<T>,
    tb: &Transform<T>,
) -> Option<Contact<T>> {
    match (*a, *b) {
        (Shape::Sphere { radius: ra }, Shape::Sphere { radius: rb }) => {
            sphere_sphere(ta.position, ra, tb.position, rb)
        }
        (Shape::Sphere { radius }, Shape::Box { half_extents }) => {
            sphere_box(ta.position, radius, tb, half_extents)
        }
        (Shape::Box { half_extents }, Shape::Sphere { radius }) => {
            sphere_box(tb.position, radius, ta, half_extents).map(Contact::flipped)
        }
        (Shape::Box { half_extents: ha }, Shape::Box { half_extents: hb }) => box_box(ta, ha, tb, hb),
    }
}

fn sphere_sphere<T: Scalar>(ca: Vec3<T>, ra: T, cb: Vec3<T>, rb: T) -> Option<Contact<T>> {
    let d = cb - ca;
    let sum = ra + rb;
    let dist2 = d.norm_squared();
    if dist2 > sum * sum {
        return None;
    }
    let dist = dist2.sqrt();
    let normal = d.try_normalize(T::zero()).unwrap_or_else(Vec3::unit_y);
    Some(Contact { normal, depth: sum - dist })
}

fn sphere_box<T: Scalar>(
    center: Vec3<T>,
    radius: T,
    box_pose: &Transform<T>,
    h: Vec3<T>,
) -> Option<Contact<T>> {
    let local = box_pose.inverse_transform_point(center);
    let closest = local.clamp(-h, h);
    let diff = local - closest;
    let dist2 = diff.norm_squared();
    if dist2 > radius * radius {
        return None;
    }
    if dist2 > T::zero() {
        let dist = dist2.sqrt();
        let normal = box_pose.rotation.rotate(-diff / dist);
        return Some(Contact { normal, depth: radius - dist });
    }
    // centre inside the box: push out through the nearest face
    let gaps = [h.x - local.x.abs(), h.y - local.y.abs(), h.z - local.z.abs()];
    let mut axis = 0;
    for i in 1..3 {
        if gaps[i] < gaps[axis] {
            axis = i;
        }
    }
    let mut outward = Vec3::zero();
    let sign = if local[axis] < T::zero() { -T::one() } else { T::one() };
    match axis {
        0 => outward.x = sign,
        1 => outward.y = sign,
        _ => outward.z = sign,
    }
    Some(Contact {
        normal: box_pose.rotation.rotate(-outward),
        depth: radius + gaps[axis],
    })
}

fn box_box<T: Scalar>(ta: &Transform<T>, ha: Vec3<T>, tb: &Transform<T>, hb: Vec3<T>) -> Option<Contact<T>> {
    let a_axes = ta.rotation.axes();
    let b_axes = tb.rotation.axes();
    let d = tb.position - ta.position;
    let eps = T::of(1e-9);

    let mut best: Option<(T, Vec3<T>)> = None;
    let mut test = |axis: Vec3<T>| -> bool {
        let ra = a_axes[0].dot(axis).abs() * ha.x + a_axes[1].dot(axis).abs() * ha.y + a_axes[2].dot(axis).abs() * ha.z;
        let rb = b_axes[0].dot(axis).abs() * hb.x + b_axes[1].dot(axis).abs() * hb.y + b_axes[2].dot(axis).abs() * hb.z;
        let dist = d.dot(axis);
        let overlap = ra + rb - dist.abs();
        if overlap < T::zero() {
            return false;
        }
        let oriented = if dist < T::zero() { -axis } else { axis };
        if best.is_none_or(|(o, _)| overlap < o) {
            best = Some((overlap, oriented));
        }
        true
    };

    for axis in a_axes.iter().chain(b_axes.iter()) {
        if !test(*axis) {
            return None;
        }
    }
    for a in &a_axes {
        for b in &b_axes {
            if let Some(axis) = a.cross(*b).try_normalize(eps) {
                if !test(axis) {
                    return None;
                }
            }
        }
    }
    best.map(|(depth, normal)| Contact { normal, depth })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ray_hits_box_top() {
        let floor: Shape<f64> = Shape::cuboid(5.0, 0.1, 5.0);
        let pose = Transform::from_position(Vec3::new(0.0, -0.1, 0.0));
        let (s, n) = floor.ray_hit(&pose, Vec3::new(2.0, 1.0, 1.0), Vec3::new(0.0, -1.0, 0.0)).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(n, Vec3::new(0.0, 1.0, 0.0));
        assert!(floor.ray_hit(&pose, Vec3::new(2.0, 1.0, 1.0), Vec3::new(0.0, 1.0, 0.0)).is_none());
        assert!(floor.ray_hit(&pose, Vec3::new(9.0, 1.0, 1.0), Vec3::new(0.0, -1.0, 0.0)).is_none());
    }

    #[test]
    fn ray_hits_sphere() {
        let ball: Shape<f64> = Shape::sphere(1.0);
        let pose = Transform::from_position(Vec3::new(0.0, 0.0, -5.0));
        let (s, n) = ball.ray_hit(&pose, Vec3::zero(), Vec3::new(0.0, 0.0, -1.0)).unwrap();
        assert!((s - 4.0).abs() < 1e-12);
        assert!((n - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
        assert!(ball.ray_hit(&pose, Vec3::zero(), Vec3::new(0.0, 0.0, 1.0)).is_none());
    }
    use crate::math::Quat;

    fn at(x: f64, y: f64, z: f64) -> Transform<f64> {
        Transform::from_position(Vec3::new(x, y, z))
    }

    #[test]
    fn sphere_pairs_by_radius_sum() {
        let s = Shape::sphere(1.0);
        assert!(overlap(&s, &at(0.0, 0.0, 0.0), &s, &at(1.5, 0.0, 0.0)));
        assert!(!overlap(&s, &at(0.0, 0.0, 0.0), &s, &at(2.5, 0.0, 0.0)));
        // touching is overlap
        assert!(overlap(&s, &at(0.0, 0.0, 0.0), &s, &at(2.0, 0.0, 0.0)));
    }

    #[test]
    fn unit_box_vs_small_sphere() {
        let b = Shape::cuboid(1.0, 1.0, 1.0);
        let s = Shape::sphere(0.1);
        let c = contact(&b, &at(0.0, 0.0, 0.0), &s, &at(1.05, 0.0, 0.0)).unwrap();
        assert!((c.depth - 0.05).abs() < 1e-12);
        assert!(c.normal.max_abs_diff(Vec3::unit_x()) < 1e-12);
        assert!(!overlap(&b, &at(0.0, 0.0, 0.0), &s, &at(1.2, 0.0, 0.0)));
    }

    #[test]
    fn sphere_centre_inside_box_uses_nearest_face() {
        let b = Shape::cuboid(5.0, 0.1, 5.0);
        let s = Shape::sphere(0.3);
        let c = contact(&s, &at(1.0, 0.05, 0.0), &b, &at(0.0, 0.0, 0.0)).unwrap();
        // sphere -> box direction is downward, depth = r + distance to the top face
        assert!(c.normal.max_abs_diff(Vec3::new(0.0, -1.0, 0.0)) < 1e-12);
        assert!((c.depth - 0.35).abs() < 1e-12);
    }

    #[test]
    fn box_box_axis_aligned() {
        let b = Shape::cuboid(1.0, 1.0, 1.0);
        let c = contact(&b, &at(0.0, 0.0, 0.0), &b, &at(0.0, 1.9, 0.3)).unwrap();
        assert!(c.normal.max_abs_diff(Vec3::unit_y()) < 1e-12);
        assert!((c.depth - 0.1).abs() < 1e-12);
        assert!(overlap(&b, &at(0.0, 0.0, 0.0), &b, &at(2.0, 0.0, 0.0)));
        assert!(!overlap(&b, &at(0.0, 0.0, 0.0), &b, &at(2.0001, 0.0, 0.0)));
    }

    #[test]
    fn rotated_box_separated_by_edge_axis() {
        // two unit cubes rotated 45 deg about different axes, corner to corner gap
        let b = Shape::cuboid(0.5, 0.5, 0.5);
        let r1 = Transform::new(Vec3::zero(), Quat::from_axis_angle(Vec3::unit_z(), std::f64::consts::FRAC_PI_4));
        let r2 = Transform::new(
            Vec3::new(1.0, 0.0, 0.0),
            Quat::from_axis_angle(Vec3::unit_y(), std::f64::consts::FRAC_PI_4),
        );
        // sqrt(2)/2 + sqrt(2)/2 > 1 along x, so these overlap
        assert!(overlap(&b, &r1, &b, &r2));
        let far = Transform::new(Vec3::new(1.5, 0.0, 0.0), r2.rotation);
        assert!(!overlap(&b, &r1, &b, &far));
    }

    #[test]
    fn rotated_box_aabb_contains_corners() {
        let b = Shape::cuboid(1.0, 0.5, 0.25);
        let pose = Transform::new(Vec3::new(1.0, 2.0, 3.0), Quat::from_axis_angle(Vec3::new(1.0, 1.0, 0.0), 0.7));
        let aabb = b.aabb(&pose);
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    let p = pose.transform_point(Vec3::new(sx * 1.0, sy * 0.5, sz * 0.25));
                    assert!(p.x >= aabb.min.x - 1e-12 && p.x <= aabb.max.x + 1e-12);
                    assert!(p.y >= aabb.min.y - 1e-12 && p.y <= aabb.max.y + 1e-12);
                    assert!(p.z >= aabb.min.z - 1e-12 && p.z <= aabb.max.z + 1e-12);
                }
            }
        }
    }

    #[test]
    fn validity() {
        assert!(Shape::sphere(0.1f64).is_valid());
        assert!(!Shape::sphere(0.0f64).is_valid());
        assert!(!Shape::cuboid(1.0f64, -1.0, 1.0).is_valid());
        assert!(!Shape::sphere(f64::NAN).is_valid());
    }
}
