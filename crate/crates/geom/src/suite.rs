//! The full geometric pipeline with every structural check recorded.

use symexpr::{GaussRat, Scalar};

use crate::{
    base_connection, build_frame_geometry, curvature, reductive_complement, symplectize, Complement,
    CurvatureTensor, FrameConnection, FrameGeometry, GeomError,
};
use dynr::DynamicalR;

#[derive(Clone, Debug)]
pub struct GeometryReport {
    pub geometry: FrameGeometry,
    pub complement: Complement,
    pub base: FrameConnection,
    pub connection: FrameConnection,
    pub curvature: CurvatureTensor,
    /// `(name, passed)` in a fixed order.
    pub checks: Vec<(String, bool)>,
}

impl GeometryReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Builds ω, 𝔪 at `lambda0`, ∇⁰, ∇ and R, then runs the checks.
pub fn geometry_suite(rm: &DynamicalR, lambda0: &[GaussRat]) -> Result<GeometryReport, GeomError> {
    let geometry = build_frame_geometry(rm)?;
    let complement = reductive_complement(rm, lambda0)?;
    let base = base_connection(&rm.alg, &complement)?;
    let connection = symplectize(&base, &geometry)?;
    let curv = curvature(&connection, &geometry);
    let n = geometry.size();
    let l = geometry.l();
    let mut checks = Vec::new();

    checks.push(("d omega = 0".to_string(), geometry.omega_form().d(&geometry).is_zero()));
    let mut nabla_omega = true;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                nabla_omega &= connection.nabla_omega(&geometry, a, b, c).is_zero();
            }
        }
    }
    checks.push(("nabla omega = 0".to_string(), nabla_omega));
    checks.push(("torsion-free".to_string(), connection.torsion_violations(&geometry).is_empty()));
    let parallel_h = (0..l).all(|i| (0..n).all(|a| connection.nabla(a, geometry.h_index(i)).iter().all(Scalar::is_zero)));
    checks.push(("nabla e_h = 0".to_string(), parallel_h));
    // ∇_X dλʲ = −Γ_{X·}^j vanishes.
    let dlambda = (0..n).all(|a| (0..n).all(|c| (0..l).all(|j| connection.get(a, c, j).is_zero())));
    checks.push(("nabla d lambda = 0".to_string(), dlambda));
    checks.push(("R antisymmetric in last pair".to_string(), curv.antisymmetry_violations() == 0));
    checks.push(("R symmetric in first pair".to_string(), curv.symmetry_violations() == 0));
    checks.push(("Bianchi identity".to_string(), curv.bianchi_violations() == 0));
    checks.push(("R vanishes along H-orbits".to_string(), curv.h_direction_violations(&geometry) == 0));
    checks.push(("nabla_{e_h} R = 0".to_string(), curv.h_derivative_violations(&connection, &geometry) == 0));

    Ok(GeometryReport { geometry, complement, base, connection, curvature: curv, checks })
}
