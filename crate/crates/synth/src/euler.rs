use ddfloat::C64;

/// ZXZ Euler angles: U = R_z(theta1) R_x(phi) R_z(theta2) up to global phase,
/// with phi in [0, pi].
#[derive(Copy, Clone, Debug)]
pub struct EulerZXZ {
    pub theta1: f64,
    pub phi: f64,
    pub theta2: f64,
}

const GIMBAL_TOL: f64 = 1e-12;

/// Extracts ZXZ angles from a 2x2 unitary. The input is det-normalized
/// internally, so any global phase is ignored. Gimbal cases (phi near 0 or
/// pi) put the whole z-rotation into theta1 with theta2 = 0.
pub fn euler_zxz(u: [[C64; 2]; 2]) -> EulerZXZ {
    // Divide out sqrt(det) so the matrix is special-unitary:
    // [[cos(phi/2) e^{-i(t1+t2)/2}, -i sin(phi/2) e^{-i(t1-t2)/2}], ...].
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let det_arg = det.im.atan2(det.re);
    let inv_phase = C64::new((det_arg / 2.0).cos(), -(det_arg / 2.0).sin());
    let scale = 1.0 / det.abs().sqrt();
    let a = u[0][0] * inv_phase.scale(scale);
    let b = u[0][1] * inv_phase.scale(scale);

    let phi = 2.0 * b.abs().atan2(a.abs());
    if b.abs() < GIMBAL_TOL {
        EulerZXZ { theta1: -2.0 * a.im.atan2(a.re), phi: 0.0, theta2: 0.0 }
    } else if a.abs() < GIMBAL_TOL {
        let theta1 = -2.0 * (b.im.atan2(b.re) + std::f64::consts::FRAC_PI_2);
        EulerZXZ { theta1, phi: std::f64::consts::PI, theta2: 0.0 }
    } else {
        // b = sin(phi/2) e^{-i((t1-t2)/2 + pi/2)}.
        let sum = -2.0 * a.im.atan2(a.re);
        let diff = -2.0 * (b.im.atan2(b.re) + std::f64::consts::FRAC_PI_2);
        EulerZXZ {
            theta1: (sum + diff) / 2.0,
            phi,
            theta2: (sum - diff) / 2.0,
        }
    }
}

/// Rebuilds the matrix from the angles (det = 1 convention).
pub fn euler_matrix(e: &EulerZXZ) -> [[C64; 2]; 2] {
    let rz = |t: f64| {
        [
            [C64::new((t / 2.0).cos(), -(t / 2.0).sin()), C64::zero()],
            [C64::zero(), C64::new((t / 2.0).cos(), (t / 2.0).sin())],
        ]
    };
    let rx = |t: f64| {
        [
            [C64::new((t / 2.0).cos(), 0.0), C64::new(0.0, -(t / 2.0).sin())],
            [C64::new(0.0, -(t / 2.0).sin()), C64::new((t / 2.0).cos(), 0.0)],
        ]
    };
    mat_mul(&mat_mul(&rz(e.theta1), &rx(e.phi)), &rz(e.theta2))
}

pub fn mat_mul(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut out = [[C64::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}
