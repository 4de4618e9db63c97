//! Admissibility checks on the control geometry: the boundary
//! multiplier condition m . nu <= 0 on the clamped part and
//! m . nu >= m0 > 0 on the damped part, with m(x) = x - x0, and the
//! smallness bound on the coupling constant that the stability
//! statements assume.

use crate::error::{Error, Result};

/// Which part of the boundary an edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLabel {
    /// clamped (homogeneous Dirichlet for u)
    Gamma0,
    /// damped (fractional flux condition)
    Gamma1,
}

/// Simple closed polygon with labeled edges and an observation point.
/// Edge i joins vertex i to vertex i+1 (mod n).
#[derive(Debug, Clone)]
pub struct PolygonGeometry {
    pub vertices: Vec<(f64, f64)>,
    pub labels: Vec<EdgeLabel>,
    pub x0: (f64, f64),
}

/// Result of the multiplier-condition check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgcReport {
    /// min over damped edges of m . nu (meaningful when satisfied)
    pub m0: f64,
    pub satisfied: bool,
    /// whether the closures of the two boundary parts share no vertex
    pub closures_disjoint: bool,
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn segments_properly_intersect(
    p1: (f64, f64),
    p2: (f64, f64),
    q1: (f64, f64),
    q2: (f64, f64),
) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

impl PolygonGeometry {
    fn validate(&self) -> Result<f64> {
        let n = self.vertices.len();
        if n < 3 {
            return Err(Error::Geometry(format!("need at least 3 vertices, got {n}")));
        }
        if self.labels.len() != n {
            return Err(Error::Geometry(format!(
                "{n} edges but {} labels",
                self.labels.len()
            )));
        }
        let mut area2 = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let len2 = (b.0 - a.0).powi(2) + (b.1 - a.1).powi(2);
            if len2 == 0.0 {
                return Err(Error::Geometry(format!("edge {i} has zero length")));
            }
            area2 += a.0 * b.1 - b.0 * a.1;
        }
        if area2 == 0.0 {
            return Err(Error::Geometry("polygon has zero area".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                // adjacent edges share a vertex; skip them
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if segments_properly_intersect(
                    self.vertices[i],
                    self.vertices[(i + 1) % n],
                    self.vertices[j],
                    self.vertices[(j + 1) % n],
                ) {
                    return Err(Error::Geometry(format!("edges {i} and {j} intersect")));
                }
            }
        }
        Ok(area2)
    }
}

/// Evaluates the multiplier condition on a labeled polygon. On a
/// straight edge m . nu = (x - x0) . nu is constant, so one value per
/// edge decides the sign.
pub fn check_mgc(geom: &PolygonGeometry) -> Result<MgcReport> {
    let area2 = geom.validate()?;
    let n = geom.vertices.len();
    // outward normal of edge (a, b): rotate the tangent by -90 degrees
    // for counterclockwise orientation, +90 for clockwise
    let sign = if area2 > 0.0 { 1.0 } else { -1.0 };
    let mut m0 = f64::INFINITY;
    let mut satisfied = true;
    for i in 0..n {
        let a = geom.vertices[i];
        let b = geom.vertices[(i + 1) % n];
        let t = (b.0 - a.0, b.1 - a.1);
        let len = (t.0 * t.0 + t.1 * t.1).sqrt();
        let nu = (sign * t.1 / len, -sign * t.0 / len);
        let m = (a.0 - geom.x0.0, a.1 - geom.x0.1);
        let mdotnu = m.0 * nu.0 + m.1 * nu.1;
        match geom.labels[i] {
            EdgeLabel::Gamma0 => {
                if mdotnu > 0.0 {
                    satisfied = false;
                }
            }
            EdgeLabel::Gamma1 => {
                m0 = m0.min(mdotnu);
            }
        }
    }
    if !m0.is_finite() {
        return Err(Error::Geometry("no damped edge labeled".into()));
    }
    if m0 <= 0.0 {
        satisfied = false;
    }
    // do the closures of the two parts share a vertex?
    let mut disjoint = true;
    for i in 0..n {
        let prev = if i == 0 { n - 1 } else { i - 1 };
        if geom.labels[i] != geom.labels[prev] {
            disjoint = false;
        }
    }
    Ok(MgcReport { m0, satisfied, closures_disjoint: disjoint })
}

/// One-dimensional analogue on the interval (0, length): the clamped
/// end is x = 0 with nu = -1, the damped end x = length with nu = +1.
pub fn check_mgc_interval(length: f64, x0: f64) -> Result<MgcReport> {
    if !(length > 0.0) {
        return Err(Error::Geometry(format!("length must be > 0, got {length}")));
    }
    // m . nu at the ends: (0 - x0)(-1) and (length - x0)(+1)
    let left = x0;
    let right = length - x0;
    Ok(MgcReport {
        m0: right,
        satisfied: left <= 0.0 && right > 0.0,
        closures_disjoint: true,
    })
}

/// Largest admissible coupling magnitude
///
///   min( [ (1 + C) ((d-1)^2/4 + |m|_inf^2) ]^(-1/2), 1 / |m|_inf ),
///
/// with C = 1/Lambda1 and Lambda1 the smallest Dirichlet eigenvalue of
/// the Laplacian on the domain. Couplings below this bound satisfy both
/// smallness conditions used by the stability analysis.
pub fn coupling_bound(m_norm_inf: f64, lambda1: f64, d: u32) -> Result<f64> {
    if !(m_norm_inf > 0.0) {
        return Err(Error::Domain(format!(
            "|m|_inf must be > 0, got {m_norm_inf}"
        )));
    }
    if !(lambda1 > 0.0) {
        return Err(Error::Domain(format!("Lambda1 must be > 0, got {lambda1}")));
    }
    if d < 1 {
        return Err(Error::Domain(format!("d must be >= 1, got {d}")));
    }
    let c = 1.0 / lambda1;
    let df = d as f64;
    let quad = (1.0 + c) * ((df - 1.0) * (df - 1.0) / 4.0 + m_norm_inf * m_norm_inf);
    Ok((1.0 / quad.sqrt()).min(1.0 / m_norm_inf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn unit_square(labels: [EdgeLabel; 4], x0: (f64, f64)) -> PolygonGeometry {
        PolygonGeometry {
            vertices: vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
            labels: labels.to_vec(),
            x0,
        }
    }

    #[test]
    fn interval_analogue() {
        let r = check_mgc_interval(1.0, 0.0).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.m0, 1.0);
        assert!(r.closures_disjoint);
    }

    #[test]
    fn square_left_clamped_rest_damped() {
        use EdgeLabel::*;
        // edges: bottom, right, top, left
        let g = unit_square([Gamma1, Gamma1, Gamma1, Gamma0], (-0.1, 0.5));
        let r = check_mgc(&g).unwrap();
        assert!(r.satisfied);
        assert_relative_eq!(r.m0, 0.5, max_relative = 1e-14);
        assert!(!r.closures_disjoint);
    }

    #[test]
    fn square_left_and_top_clamped_fails() {
        use EdgeLabel::*;
        let g = unit_square([Gamma1, Gamma1, Gamma0, Gamma0], (-0.1, 0.5));
        let r = check_mgc(&g).unwrap();
        // the top edge has m . nu = 0.5 > 0 but is clamped
        assert!(!r.satisfied);
    }

    #[test]
    fn clockwise_orientation_gives_same_answer() {
        use EdgeLabel::*;
        let g = PolygonGeometry {
            vertices: vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)],
            // edges: left, top, right, bottom
            labels: vec![Gamma0, Gamma1, Gamma1, Gamma1],
            x0: (-0.1, 0.5),
        };
        let r = check_mgc(&g).unwrap();
        assert!(r.satisfied);
        assert_relative_eq!(r.m0, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn degenerate_polygons_rejected() {
        use EdgeLabel::*;
        let two = PolygonGeometry {
            vertices: vec![(0.0, 0.0), (1.0, 0.0)],
            labels: vec![Gamma0, Gamma1],
            x0: (0.0, 0.0),
        };
        assert!(check_mgc(&two).is_err());
        let bowtie = PolygonGeometry {
            vertices: vec![(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)],
            labels: vec![Gamma0, Gamma1, Gamma1, Gamma1],
            x0: (0.0, 0.0),
        };
        assert!(check_mgc(&bowtie).is_err());
    }

    #[test]
    fn coupling_bound_reference_value() {
        // 1D, |m|_inf = 1, Lambda1 = pi^2
        let b = coupling_bound(1.0, std::f64::consts::PI * std::f64::consts::PI, 1).unwrap();
        let exact = (1.0 + 1.0 / (std::f64::consts::PI * std::f64::consts::PI)).powf(-0.5);
        assert_relative_eq!(b, exact, epsilon = 1e-15);
        assert!((b - 0.952_890_513_988_687_4).abs() < 1e-12);
    }

    #[test]
    fn coupling_bound_limits() {
        // large |m|_inf drives the bound to zero
        let b = coupling_bound(1e8, 1.0, 2).unwrap();
        assert!(b < 1e-7);
        // d = 1 removes the (d-1)^2/4 term
        let b1 = coupling_bound(2.0, 1.0, 1).unwrap();
        assert_relative_eq!(b1, (2.0f64 * 4.0).powf(-0.5), max_relative = 1e-14);
    }

    #[test]
    fn coupling_bound_rejects_nonpositive() {
        assert!(coupling_bound(0.0, 1.0, 1).is_err());
        assert!(coupling_bound(1.0, 0.0, 1).is_err());
    }

    proptest! {
        // uniform scaling of vertices and x0 scales m0 and preserves the verdict
        #[test]
        fn scaling_invariance(
            s in 0.05..20.0f64,
            r1 in 0.5..1.5f64,
            r2 in 0.5..1.5f64,
            r3 in 0.5..1.5f64,
            r4 in 0.5..1.5f64,
            r5 in 0.5..1.5f64,
            x0x in -0.4..0.4f64,
            x0y in -0.4..0.4f64,
        ) {
            use EdgeLabel::*;
            // star polygon around the origin: simple by construction
            let radii = [r1, r2, r3, r4, r5];
            let verts: Vec<(f64, f64)> = radii
                .iter()
                .enumerate()
                .map(|(k, &r)| {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                    (r * th.cos(), r * th.sin())
                })
                .collect();
            let labels = vec![Gamma1, Gamma1, Gamma0, Gamma1, Gamma0];
            let g = PolygonGeometry { vertices: verts.clone(), labels: labels.clone(), x0: (x0x, x0y) };
            let gs = PolygonGeometry {
                vertices: verts.iter().map(|&(x, y)| (s * x, s * y)).collect(),
                labels,
                x0: (s * x0x, s * x0y),
            };
            let a = check_mgc(&g).unwrap();
            let b = check_mgc(&gs).unwrap();
            prop_assert_eq!(a.satisfied, b.satisfied);
            prop_assert!((b.m0 - s * a.m0).abs() <= 1e-9 * (1.0 + b.m0.abs()));
        }
    }
}
