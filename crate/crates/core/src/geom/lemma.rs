//! Geometric facts about single tiles and the rejection of the
//! alternating-pole chart.

use std::f64::consts::PI;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::sphere::{arc, dot, tangent, turn, walk, V3};
use super::tile::SphericalQuadrangle;
use crate::chart::build_q;
use crate::error::{ChartError, GeomError};
use crate::linear::{q, qi, sample_region, solve_in_box, Equation, Q};

/// Unsigned angle at `v` between the arcs toward `p` and `q`, in radians.
fn corner(p: V3, v: V3, q: V3) -> f64 {
    dot(tangent(v, p), tangent(v, q)).clamp(-1.0, 1.0).acos()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    /// `∠BCD + ∠DBC` in π-radian units.
    pub angle_sum: f64,
    pub convex: bool,
    /// `∠DBA < ∠CBA`, checked for convex quadrangles only.
    pub dba_below_cba: Option<bool>,
}

impl LemmaVerdict {
    pub fn holds(&self, tol: f64) -> bool {
        (self.angle_sum - 1.0).abs() < tol && self.dba_below_cba != Some(false)
    }
}

/// Checks the pole lemma on `q`, whose `B` is taken as a pole: if `D` lies
/// at distance `|BC| = |CD|` from the antipode of `B`, then
/// `∠BCD + ∠DBC = π`, and for a convex quadrangle `∠DBA < ∠CBA`.
pub fn convex_lemma_check(quad: &SphericalQuadrangle, tol: f64) -> Result<LemmaVerdict, GeomError> {
    let [a, b, c, d] = quad.vertices;
    let anti = [-b[0], -b[1], -b[2]];
    let (bc, cd, d_anti) = (arc(b, c), arc(c, d), arc(d, anti));
    if (bc - cd).abs() > tol || (d_anti - bc).abs() > tol {
        return Err(GeomError::HypothesisNotMet(format!(
            "|BC| = {bc:.6}, |CD| = {cd:.6}, |D to antipode of B| = {d_anti:.6}"
        )));
    }
    let angle_sum = (corner(b, c, d) + corner(d, b, c)) / PI;
    let convex = quad.is_convex();
    let dba_below_cba = convex.then(|| corner(d, b, a) < corner(c, b, a));
    Ok(LemmaVerdict { angle_sum, convex, dba_below_cba })
}

/// A quadrangle meeting the pole lemma's hypothesis: `|AB| = |BC| = |CD| = s`,
/// `D` at distance `s` from the antipode of `B`, and angle `β` at `B` (π units).
/// Needs `s ≥ π/3`; `β` must exceed the direction of `D` for a simple outline.
pub fn pole_lemma_instance(s: f64, beta: f64) -> Option<SphericalQuadrangle> {
    let cos_theta = s.cos() / (1.0 - s.cos());
    if !(-1.0..=1.0).contains(&cos_theta) {
        return None;
    }
    let theta = cos_theta.acos();
    if beta * PI <= theta {
        return None;
    }
    let b: V3 = [0.0, 0.0, 1.0];
    let x: V3 = [1.0, 0.0, 0.0];
    let c = walk(b, x, s);
    let d = walk(b, turn(b, x, theta), PI - s);
    let a = walk(b, turn(b, x, beta * PI), s);
    let quad = SphericalQuadrangle::from_points([a, b, c, d]);
    (quad.gauss_bonnet_error() < 1e-9).then_some(quad)
}

/// Side length `s` of the pole-lemma configuration whose angle at `C` is
/// `γ` (π units). Defined for `1/3 < γ ≤ 1`.
pub fn pole_lemma_side(gamma: f64) -> Option<f64> {
    // cos ∠C = -cos s / (1 - cos s)  ⇔  cos s = -k / (1 - k) with k = cos ∠C
    let k = (gamma * PI).cos();
    let cs = -k / (1.0 - k);
    (-1.0..=0.5).contains(&cs).then(|| cs.acos())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LuneVerdict {
    /// `α = β` and `γ = δ` within tolerance.
    pub ab_gd: bool,
    /// `|DA| = |BC|`.
    pub ad_eq_bc: bool,
    /// `α = δ` and `β = γ` within tolerance.
    pub ad_bg: bool,
    /// `|AB| = |CD|`.
    pub ab_eq_cd: bool,
}

impl LuneVerdict {
    /// The lune argument: equal angle pairs force the matching sides equal.
    pub fn consistent(&self) -> bool {
        (!self.ab_gd || self.ad_eq_bc) && (!self.ad_bg || self.ab_eq_cd)
    }

    /// True when the angle pattern already rules out a type-2 or type-4
    /// tile (`b = a` would follow).
    pub fn excludes_type2_and_4(&self) -> bool {
        self.ab_gd && self.ad_eq_bc
    }

    /// True when the angle pattern rules out a type-4 tile (`a = c`).
    pub fn excludes_type4(&self) -> bool {
        self.excludes_type2_and_4() || (self.ad_bg && self.ab_eq_cd)
    }
}

/// Evaluates the lune lemma on a quadrangle.
pub fn lune_disequality_check(quad: &SphericalQuadrangle, tol: f64) -> LuneVerdict {
    let [al, be, ga, de] = quad.angles;
    let [ab, bc, cd, da] = quad.edges;
    LuneVerdict {
        ab_gd: (al - be).abs() < tol && (ga - de).abs() < tol,
        ad_eq_bc: (da - bc).abs() < tol,
        ad_bg: (al - de).abs() < tol && (be - ga).abs() < tol,
        ab_eq_cd: (ab - cd).abs() < tol,
    }
}

/// Which argument rejected a sample of the alternating-pole chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum QBranch {
    /// Convex tile: the pole lemma forces `β + γ > 1`, while the pole
    /// equation gives `β + γ = 8/F ≤ 1`.
    Convex {
        beta_plus_gamma: String,
        /// `∠DBC` of the lemma instance in π units, when `γ > 1/3`.
        lemma_angle: Option<f64>,
    },
    /// Concave tile: impossible since every angle is forced below 1.
    Concave,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QSample {
    pub angles: [String; 4],
    pub branches: Vec<QBranch>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QRejection {
    pub faces: usize,
    pub dimension: usize,
    /// The linear system admits no point with an angle `≥ 1`, so the
    /// concave hypothesis fails everywhere on the region.
    pub concave_fired: bool,
    /// Every convex sample contradicts the pole lemma.
    pub convex_fired: bool,
    pub samples: Vec<QSample>,
}

impl QRejection {
    pub fn rejected(&self) -> bool {
        self.concave_fired && self.convex_fired && self.samples.iter().all(|s| !s.branches.is_empty())
    }
}

/// Radical inverse of `i` in base `b`, an exact point of `(0, 1)`.
fn halton(mut i: u64, b: u64) -> Q {
    let (mut num, mut f) = (Q::zero(), Q::one());
    while i > 0 {
        f /= qi(b as i128);
        num += f * qi((i % b) as i128);
        i /= b;
    }
    num
}

/// Rejects the alternating-pole chart for `faces ≡ 0 mod 4` over `n`
/// deterministic samples of its feasible region.
pub fn reject_q(faces: usize, n: usize) -> Result<QRejection, ChartError> {
    let chart = build_q(faces)?;
    let sys = chart.constraints();
    let base = solve_in_box(&sys, &[qi(0); 4], &[qi(2); 4]);
    let dimension = base.dimension();
    let mut concave_fired = true;
    for i in 0..4 {
        let mut lo = [qi(0); 4];
        lo[i] = qi(1);
        if solve_in_box(&sys, &lo, &[qi(2); 4]).feasible {
            concave_fired = false;
        }
        let mut on = sys.clone();
        let mut coeffs = vec![qi(0); 4];
        coeffs[i] = qi(1);
        on.push_equation(Equation::new(coeffs, qi(1)));
        if solve_in_box(&on, &[qi(0); 4], &[qi(2); 4]).feasible {
            concave_fired = false;
        }
    }
    let bound = q(8, faces as i128);
    let mut samples = Vec::with_capacity(n);
    let mut convex_fired = base.feasible;
    for j in 0..n as u64 {
        let w = [halton(j + 1, 2), halton(j + 1, 3), halton(j + 1, 5), halton(j + 1, 7)];
        let Some(x) = sample_region(&sys, qi(0), qi(2), &w) else {
            convex_fired = false;
            break;
        };
        let mut branches = Vec::new();
        let convex = x.iter().all(|v| *v < qi(1));
        let bg = x[1] + x[2];
        if convex && bg <= bound && bound <= qi(1) {
            let gamma = x[2].to_f64().expect("finite");
            let lemma_angle = pole_lemma_side(gamma)
                .and_then(|s| pole_lemma_instance(s, 1.0))
                .and_then(|quad| convex_lemma_check(&quad, 1e-9).ok())
                .map(|v| v.angle_sum - gamma);
            branches.push(QBranch::Convex { beta_plus_gamma: bg.to_string(), lemma_angle });
        } else if convex {
            convex_fired = false;
        }
        if concave_fired {
            branches.push(QBranch::Concave);
        }
        samples.push(QSample { angles: [0, 1, 2, 3].map(|i| x[i].to_string()), branches });
    }
    Ok(QRejection { faces, dimension, concave_fired, convex_fired, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::tile::tile_from_sides;

    #[test]
    fn pole_lemma_instance_holds() {
        let quad = pole_lemma_instance(1.2, 0.8).unwrap();
        let v = convex_lemma_check(&quad, 1e-9).unwrap();
        assert!((v.angle_sum - 1.0).abs() < 1e-9);
        if v.convex {
            assert_eq!(v.dba_below_cba, Some(true));
        }
    }

    #[test]
    fn perturbed_instance_fails_hypothesis() {
        let mut quad = pole_lemma_instance(1.2, 0.8).unwrap();
        quad.vertices[3] = walk(quad.vertices[3], tangent(quad.vertices[3], quad.vertices[0]), 0.01);
        assert!(matches!(convex_lemma_check(&quad, 1e-9), Err(GeomError::HypothesisNotMet(_))));
    }

    #[test]
    fn side_matches_angle() {
        for g in [0.4, 0.6, 0.9] {
            let s = pole_lemma_side(g).unwrap();
            let quad = pole_lemma_instance(s, 0.95).unwrap();
            assert!((quad.angles[2] - g).abs() < 1e-9, "{g}: {:?}", quad.angles);
        }
    }

    #[test]
    fn symmetric_quadrangle_has_equal_lune_sides() {
        // mirror-symmetric across x = 0, swapping A with B and C with D
        let n = |v: V3| super::super::sphere::normalize(v);
        let quad = SphericalQuadrangle::from_points([
            n([-0.3, -0.2, 1.0]),
            n([0.3, -0.2, 1.0]),
            n([0.5, 0.4, 1.0]),
            n([-0.5, 0.4, 1.0]),
        ]);
        let v = lune_disequality_check(&quad, 1e-9);
        assert!(v.ab_gd && v.ad_eq_bc && v.consistent());
        assert!(v.excludes_type2_and_4());
    }

    #[test]
    fn generic_type2_tile_has_unequal_pairs() {
        let quad = tile_from_sides(0.9, 0.9, 0.45, 0.7).unwrap();
        let v = lune_disequality_check(&quad, 1e-9);
        assert!(!v.ab_gd);
        assert!(v.consistent());
    }

    #[test]
    fn q_is_rejected() {
        for f in [8, 12] {
            let r = reject_q(f, 20).unwrap();
            assert!(r.rejected(), "F={f}: {r:?}");
            assert_eq!(r.dimension, 1);
        }
    }
}
