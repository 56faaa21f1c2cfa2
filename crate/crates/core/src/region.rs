//! Planar region descriptors shared by every module.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Region {
    Empty,
    Point(Complex64),
    Disk {
        center: Complex64,
        radius: f64,
    },
    Annulus {
        center: Complex64,
        r_min: f64,
        r_max: f64,
    },
    /// `re_min <= Re z <= re_max`, `|Im z| <= height`.
    Strip {
        re_min: f64,
        re_max: f64,
        height: f64,
    },
    /// Real interval `[a, b]`; endpoints may be infinite.
    Segment {
        a: f64,
        b: f64,
    },
    /// Polar box `r_min <= |z| <= r_max`, `theta0 <= arg z <= theta1` (centred at 0).
    Sector {
        r_min: f64,
        r_max: f64,
        theta0: f64,
        theta1: f64,
    },
    Plane,
}

fn angle_in(th: f64, t0: f64, t1: f64) -> bool {
    let span = t1 - t0;
    if span >= 2.0 * PI {
        return true;
    }
    let d = (th - t0).rem_euclid(2.0 * PI);
    d <= span
}

impl Region {
    pub fn disk(center: Complex64, radius: f64) -> Self {
        Region::Disk { center, radius }
    }

    pub fn segment(a: f64, b: f64) -> Self {
        Region::Segment { a, b }
    }

    pub fn is_bounded(&self) -> bool {
        self.max_modulus().is_finite()
    }

    pub fn is_empty(&self) -> bool {
        match *self {
            Region::Empty => true,
            Region::Disk { radius, .. } => !(radius >= 0.0),
            Region::Annulus { r_min, r_max, .. } => !(r_max >= r_min && r_min >= 0.0),
            Region::Strip { re_min, re_max, height } => !(re_max >= re_min && height >= 0.0),
            Region::Segment { a, b } => !(b >= a),
            Region::Sector { r_min, r_max, theta0, theta1 } => !(r_max >= r_min && r_min >= 0.0 && theta1 >= theta0),
            Region::Point(_) | Region::Plane => false,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.interior_distance(z) >= 0.0
    }

    /// Distance from `z` to the boundary when `z` is inside, negative outside.
    ///
    /// Segments and points are treated as sets on the real line or as single
    /// points: off-axis points are outside, and the distance is measured
    /// along the segment.
    pub fn interior_distance(&self, z: Complex64) -> f64 {
        match *self {
            Region::Empty => f64::NEG_INFINITY,
            Region::Plane => f64::INFINITY,
            Region::Point(p) => {
                if z == p {
                    0.0
                } else {
                    -(z - p).norm()
                }
            }
            Region::Disk { center, radius } => radius - (z - center).norm(),
            Region::Annulus { center, r_min, r_max } => {
                let d = (z - center).norm();
                (r_max - d).min(d - r_min)
            }
            Region::Strip { re_min, re_max, height } => (z.re - re_min).min(re_max - z.re).min(height - z.im.abs()),
            Region::Segment { a, b } => {
                if z.im != 0.0 {
                    return -z.im.abs();
                }
                (z.re - a).min(b - z.re)
            }
            Region::Sector { r_min, r_max, theta0, theta1 } => {
                let r = z.norm();
                let radial = (r_max - r).min(r - r_min);
                let th = z.im.atan2(z.re);
                if !angle_in(th, theta0, theta1) {
                    let a0 = (theta0 - th).rem_euclid(2.0 * PI);
                    let a1 = (th - theta1).rem_euclid(2.0 * PI);
                    let out = r * a0.min(a1).min(PI / 2.0).sin();
                    return -out.max(radial.min(0.0).abs()).max(f64::MIN_POSITIVE);
                }
                if theta1 - theta0 >= 2.0 * PI {
                    return radial;
                }
                let d0 = (th - theta0).rem_euclid(2.0 * PI);
                let d1 = theta1 - theta0 - d0;
                let angular = r * d0.min(d1).min(PI / 2.0).sin();
                radial.min(angular)
            }
        }
    }

    pub fn area(&self) -> Result<f64> {
        match *self {
            Region::Empty | Region::Point(_) | Region::Segment { .. } => Ok(0.0),
            Region::Disk { radius, .. } => Ok(PI * radius * radius),
            Region::Annulus { r_min, r_max, .. } => Ok(PI * (r_max * r_max - r_min * r_min)),
            Region::Strip { re_min, re_max, height } => {
                let a = (re_max - re_min) * 2.0 * height;
                if a.is_finite() {
                    Ok(a)
                } else {
                    Err(Error::UnsupportedRegion)
                }
            }
            Region::Sector { r_min, r_max, theta0, theta1 } => {
                Ok(0.5 * (theta1 - theta0).min(2.0 * PI) * (r_max * r_max - r_min * r_min))
            }
            Region::Plane => Err(Error::UnsupportedRegion),
        }
    }

    pub fn max_modulus(&self) -> f64 {
        match *self {
            Region::Empty => 0.0,
            Region::Point(p) => p.norm(),
            Region::Disk { center, radius } => center.norm() + radius,
            Region::Annulus { center, r_max, .. } => center.norm() + r_max,
            Region::Strip { re_min, re_max, height } => Complex64::new(re_min.abs().max(re_max.abs()), height).norm(),
            Region::Segment { a, b } => a.abs().max(b.abs()),
            Region::Sector { r_max, .. } => r_max,
            Region::Plane => f64::INFINITY,
        }
    }

    /// A representative point: the centre of disks and annuli, the midpoint
    /// of segments and strips.
    pub fn anchor(&self) -> Complex64 {
        match *self {
            Region::Point(p) => p,
            Region::Disk { center, .. } | Region::Annulus { center, .. } => center,
            Region::Strip { re_min, re_max, .. } => Complex64::new(0.5 * (re_min + re_max), 0.0),
            Region::Segment { a, b } if a.is_finite() && b.is_finite() => Complex64::new(0.5 * (a + b), 0.0),
            Region::Sector { r_min, r_max, theta0, theta1 } => {
                Complex64::from_polar(0.5 * (r_min + r_max), 0.5 * (theta0 + theta1))
            }
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Axis-aligned bounding box `(re_min, re_max, im_min, im_max)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match *self {
            Region::Empty => (0.0, 0.0, 0.0, 0.0),
            Region::Point(p) => (p.re, p.re, p.im, p.im),
            Region::Disk { center: c, radius: r } | Region::Annulus { center: c, r_max: r, .. } => {
                (c.re - r, c.re + r, c.im - r, c.im + r)
            }
            Region::Strip { re_min, re_max, height } => (re_min, re_max, -height, height),
            Region::Segment { a, b } => (a, b, 0.0, 0.0),
            Region::Sector { r_max, .. } => (-r_max, r_max, -r_max, r_max),
            Region::Plane => (f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Points on the boundary (plus the centre for disks), used for
    /// certificate checks and coverage tests.
    pub fn boundary_points(&self, m: usize) -> Vec<Complex64> {
        let m = m.max(4);
        let ring = |c: Complex64, r: f64| -> Vec<Complex64> {
            (0..m).map(|k| c + r * crate::special::circle_point(k, m)).collect()
        };
        match *self {
            Region::Empty | Region::Plane => vec![],
            Region::Point(p) => vec![p],
            Region::Disk { center, radius } => {
                let mut v = ring(center, radius);
                v.push(center);
                v
            }
            Region::Annulus { center, r_min, r_max } => {
                let mut v = ring(center, r_max);
                v.extend(ring(center, r_min));
                v
            }
            Region::Strip { re_min, re_max, height } => {
                let mut v = Vec::new();
                for k in 0..=m {
                    let x = re_min + (re_max - re_min) * k as f64 / m as f64;
                    v.push(Complex64::new(x, height));
                    v.push(Complex64::new(x, -height));
                }
                for k in 0..=m {
                    let y = -height + 2.0 * height * k as f64 / m as f64;
                    v.push(Complex64::new(re_min, y));
                    v.push(Complex64::new(re_max, y));
                }
                v
            }
            Region::Segment { a, b } => {
                (0..=m).map(|k| Complex64::new(a + (b - a) * k as f64 / m as f64, 0.0)).collect()
            }
            Region::Sector { r_min, r_max, theta0, theta1 } => {
                let mut v = Vec::new();
                for k in 0..=m {
                    let th = theta0 + (theta1 - theta0) * k as f64 / m as f64;
                    v.push(Complex64::from_polar(r_max, th));
                    v.push(Complex64::from_polar(r_min, th));
                }
                for k in 0..=m {
                    let r = r_min + (r_max - r_min) * k as f64 / m as f64;
                    v.push(Complex64::from_polar(r, theta0));
                    v.push(Complex64::from_polar(r, theta1));
                }
                v
            }
        }
    }

    /// Whether `other` lies inside `self`, up to a relative slack of 1e-12.
    pub fn covers(&self, other: &Region) -> bool {
        if other.is_empty() {
            return true;
        }
        let slack = 1e-12 * (1.0 + self.max_modulus().min(1e6));
        match (self, other) {
            (Region::Plane, _) => true,
            (_, Region::Plane) => false,
            (Region::Empty, _) => false,
            (Region::Segment { a, b }, Region::Segment { a: c, b: d }) => *c >= *a - slack && *d <= *b + slack,
            (Region::Segment { .. }, _) => false,
            (Region::Strip { re_min, re_max, height }, Region::Segment { a, b }) => {
                *a >= *re_min - slack && *b <= *re_max + slack && *height >= 0.0
            }
            (Region::Disk { center: c1, radius: r1 }, Region::Disk { center: c2, radius: r2 }) => {
                (c1 - c2).norm() + r2 <= r1 + slack
            }
            _ => {
                if !other.is_bounded() {
                    return false;
                }
                let pts = other.boundary_points(256);
                if !pts.iter().all(|&z| self.interior_distance(z) >= -slack) {
                    return false;
                }
                if let Region::Annulus { center, r_min, .. } = self {
                    // the hole must stay outside the (convex) covered region
                    if other.contains(*center) && *r_min > 0.0 {
                        return false;
                    }
                }
                true
            }
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Region::Empty => write!(f, "empty"),
            Region::Plane => write!(f, "plane"),
            Region::Point(p) => write!(f, "point:{},{}", p.re, p.im),
            Region::Disk { center, radius } => write!(f, "disk:{},{},{}", center.re, center.im, radius),
            Region::Annulus { center, r_min, r_max } => {
                write!(f, "annulus:{},{},{},{}", center.re, center.im, r_min, r_max)
            }
            Region::Strip { re_min, re_max, height } => write!(f, "strip:{},{},{}", re_min, re_max, height),
            Region::Segment { a, b } => write!(f, "segment:{},{}", a, b),
            Region::Sector { r_min, r_max, theta0, theta1 } => {
                write!(f, "sector:{},{},{},{}", r_min, r_max, theta0, theta1)
            }
        }
    }
}

fn parse_numbers(s: &str, want: usize, what: &str) -> Result<Vec<f64>> {
    let v: std::result::Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let v = v.map_err(|e| Error::InvalidArgument(format!("{what}: {e}")))?;
    if v.len() != want {
        return Err(Error::InvalidArgument(format!("{what}: expected {want} numbers, got {}", v.len())));
    }
    if v.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument(format!("{what}: NaN")));
    }
    Ok(v)
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = s.split_once(':').unwrap_or((s, ""));
        let c = |x: f64, y: f64| Complex64::new(x, y);
        let r = match head {
            "empty" => Region::Empty,
            "plane" => Region::Plane,
            "point" => {
                let v = parse_numbers(tail, 2, "point")?;
                Region::Point(c(v[0], v[1]))
            }
            "disk" => {
                let v = parse_numbers(tail, 3, "disk")?;
                Region::Disk { center: c(v[0], v[1]), radius: v[2] }
            }
            "annulus" => {
                let v = parse_numbers(tail, 4, "annulus")?;
                Region::Annulus { center: c(v[0], v[1]), r_min: v[2], r_max: v[3] }
            }
            "strip" => {
                let v = parse_numbers(tail, 3, "strip")?;
                Region::Strip { re_min: v[0], re_max: v[1], height: v[2] }
            }
            "segment" => {
                let v = parse_numbers(tail, 2, "segment")?;
                Region::Segment { a: v[0], b: v[1] }
            }
            "sector" => {
                let v = parse_numbers(tail, 4, "sector")?;
                Region::Sector { r_min: v[0], r_max: v[1], theta0: v[2], theta1: v[3] }
            }
            _ => return Err(Error::InvalidArgument(format!("unknown region `{s}`"))),
        };
        if r.is_empty() && r != Region::Empty {
            return Err(Error::InvalidArgument(format!("degenerate region `{s}`")));
        }
        Ok(r)
    }
}

impl TryFrom<String> for Region {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Region> for String {
    fn from(r: Region) -> String {
        r.to_string()
    }
}

/// Parses `"a,b"` into a real interval.
pub fn parse_window(s: &str) -> Result<(f64, f64)> {
    let v = parse_numbers(s, 2, "window")?;
    if !(v[1] > v[0]) {
        return Err(Error::InvalidArgument(format!("window `{s}` must have a < b")));
    }
    Ok((v[0], v[1]))
}
