//! Reflection families and their enumeration.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Scene, SurfaceId};

/// The five sphere–plate families kept in the reflection expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SphereFamily {
    OneS,
    ThreeS,
    Two,
    ThreeP,
    FiveP,
}

impl SphereFamily {
    pub const ALL: [SphereFamily; 5] =
        [SphereFamily::OneS, SphereFamily::ThreeS, SphereFamily::Two, SphereFamily::ThreeP, SphereFamily::FiveP];

    pub fn label(self) -> &'static str {
        match self {
            SphereFamily::OneS => "1s",
            SphereFamily::ThreeS => "3s",
            SphereFamily::Two => "2",
            SphereFamily::ThreeP => "3p",
            SphereFamily::FiveP => "5p",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        SphereFamily::ALL.into_iter().find(|f| f.label() == label)
    }

    pub fn reflections(self) -> u32 {
        match self {
            SphereFamily::OneS => 1,
            SphereFamily::Two => 2,
            SphereFamily::ThreeS | SphereFamily::ThreeP => 3,
            SphereFamily::FiveP => 5,
        }
    }

    /// 3s and 5p are 1s and 3p evaluated at the mirror image of the start point.
    pub fn mirrored(self) -> bool {
        matches!(self, SphereFamily::ThreeS | SphereFamily::FiveP)
    }

    fn bounces(self) -> Vec<SurfaceId> {
        use SurfaceId::{LowerPlate as P, Sphere as S};
        match self {
            SphereFamily::OneS => vec![S],
            SphereFamily::ThreeS => vec![P, S, P],
            SphereFamily::Two => vec![S, P],
            SphereFamily::ThreeP => vec![S, P, S],
            SphereFamily::FiveP => vec![P, S, P, S, P],
        }
    }

    fn group(self) -> u32 {
        match self {
            SphereFamily::OneS | SphereFamily::ThreeS => 1,
            SphereFamily::Two => 2,
            SphereFamily::ThreeP | SphereFamily::FiveP => 3,
        }
    }
}

/// How the closed-path length depends on the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// Parallel plates: ℓ = 2·pair·a + 2·z_sign·z.
    Plate { pair: u32, z_sign: i8 },
    /// Pendulum odd family: ℓ = 2(x sin kθ + z_sign·z cos kθ).
    WedgeOdd { k: u32, z_sign: i8 },
    /// Pendulum even family: ℓ = 2√(x² + z²) sin kθ.
    WedgeEven { k: u32 },
    Sphere(SphereFamily),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathFamily {
    pub label: String,
    pub reflections: u32,
    pub bounces: Vec<SurfaceId>,
    pub kind: FamilyKind,
    /// Number of distinct orientations folded into this label.
    pub multiplicity: u32,
    /// Families with equal group belong to the same pair for truncation bookkeeping.
    pub group: u32,
}

impl PathFamily {
    /// (−1)^{n_r}
    pub fn sign(&self) -> f64 {
        if self.reflections.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// True when every bounce is on a plane.
    pub fn is_flat(&self) -> bool {
        !matches!(self.kind, FamilyKind::Sphere(_))
    }

    pub fn sphere(f: SphereFamily) -> Self {
        PathFamily {
            label: f.label().to_string(),
            reflections: f.reflections(),
            bounces: f.bounces(),
            kind: FamilyKind::Sphere(f),
            multiplicity: if f == SphereFamily::Two { 2 } else { 1 },
            group: f.group(),
        }
    }

    fn alternating(order: u32, start_up: bool) -> Vec<SurfaceId> {
        (0..order)
            .map(|i| if (i % 2 == 0) == start_up { SurfaceId::UpperPlate } else { SurfaceId::LowerPlate })
            .collect()
    }

    fn odd(k: u32, z_sign: i8, wedge: bool) -> Self {
        let letter = if k % 2 == 1 { 'u' } else { 'd' };
        let order = if z_sign < 0 { 2 * k - 1 } else { 2 * k + 1 };
        PathFamily {
            label: format!("{order}{letter}"),
            reflections: order,
            bounces: Self::alternating(order, z_sign < 0),
            kind: if wedge { FamilyKind::WedgeOdd { k, z_sign } } else { FamilyKind::Plate { pair: k, z_sign } },
            multiplicity: 1,
            group: k,
        }
    }

    fn even(k: u32, start_up: bool, wedge: bool) -> Self {
        let order = 2 * k;
        PathFamily {
            label: format!("{order}{}", if start_up { 'u' } else { 'd' }),
            reflections: order,
            bounces: Self::alternating(order, start_up),
            kind: if wedge { FamilyKind::WedgeEven { k } } else { FamilyKind::Plate { pair: k, z_sign: 0 } },
            multiplicity: 1,
            group: k,
        }
    }

    /// Looks a family up by label within `scene`.
    pub fn from_label(scene: &Scene, label: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("unknown family label {label:?} for this scene"));
        if let Scene::SpherePlate { .. } = scene {
            return SphereFamily::from_label(label).map(PathFamily::sphere).ok_or_else(bad);
        }
        let split = label.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
        let order: u32 = label[..split].parse().map_err(|_| bad())?;
        let letter = &label[split..];
        let wedge = matches!(scene, Scene::Pendulum { .. });
        if order == 0 || !(letter == "u" || letter == "d") {
            return Err(bad());
        }
        let fam = if order.is_multiple_of(2) {
            Self::even(order / 2, letter == "u", wedge)
        } else {
            // order 2k−1 with z_sign −1 or order 2k+1 with z_sign +1; the letter fixes k's parity
            let k_low = order.div_ceil(2);
            let k_high = (order - 1) / 2;
            let parity_ok = |k: u32| (k % 2 == 1) == (letter == "u");
            if parity_ok(k_low) {
                Self::odd(k_low, -1, wedge)
            } else if k_high >= 1 && parity_ok(k_high) {
                Self::odd(k_high, 1, wedge)
            } else {
                return Err(bad());
            }
        };
        Ok(fam)
    }
}

/// Reflection families up to `max_order`, largest expected contribution first.
///
/// Plates list only odd families (even ones have z-independent length);
/// see [`plate_even_families`] for those.
pub fn path_families(scene: &Scene, max_order: u32) -> Vec<PathFamily> {
    let max_order = max_order.max(1);
    let mut out = Vec::new();
    match *scene {
        Scene::ParallelPlates { .. } => {
            for k in 1..=max_order.div_ceil(2) {
                for z_sign in [-1i8, 1] {
                    let f = PathFamily::odd(k, z_sign, false);
                    if f.reflections <= max_order {
                        out.push(f);
                    }
                }
            }
        }
        Scene::Pendulum { theta, .. } => {
            for k in 1..=max_order.div_ceil(2) {
                if k as f64 * theta >= FRAC_PI_2 {
                    break;
                }
                for z_sign in [-1i8, 1] {
                    let f = PathFamily::odd(k, z_sign, true);
                    if f.reflections <= max_order {
                        out.push(f);
                    }
                }
                if 2 * k <= max_order {
                    out.push(PathFamily::even(k, true, true));
                    out.push(PathFamily::even(k, false, true));
                }
            }
        }
        Scene::SpherePlate { .. } => {
            out.extend(
                SphereFamily::ALL.into_iter().filter(|f| f.reflections() <= max_order).map(PathFamily::sphere),
            );
        }
    }
    out
}

/// Even plate families (2u, 2d, 4u, …) up to `max_order`.
pub fn plate_even_families(max_order: u32) -> Vec<PathFamily> {
    (1..=max_order / 2).flat_map(|k| [PathFamily::even(k, true, false), PathFamily::even(k, false, false)]).collect()
}
