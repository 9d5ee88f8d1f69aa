//! Curvature of a frame connection and its symplectic lowering
//! `R(X,Y,Z,W) = ω(X, R(Z,W)Y)`.

use symexpr::Scalar;

use crate::{FrameConnection, FrameGeometry};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    size: usize,
    /// `R^C_{D,AB}` at `((C·N + D)·N + A)·N + B`.
    upper: Vec<Scalar>,
    /// `R_{CD,AB} = ω_{CE} R^E_{D,AB}`.
    lower: Vec<Scalar>,
}

impl CurvatureTensor {
    fn at(&self, c: usize, d: usize, a: usize, b: usize) -> usize {
        ((c * self.size + d) * self.size + a) * self.size + b
    }
    pub fn size(&self) -> usize {
        self.size
    }
    /// Component `C` of `R(X_A, X_B) X_D`.
    pub fn upper(&self, c: usize, d: usize, a: usize, b: usize) -> &Scalar {
        &self.upper[self.at(c, d, a, b)]
    }
    /// `R(X_C, X_D, X_A, X_B) = ω(X_C, R(X_A, X_B) X_D)`.
    pub fn lowered(&self, c: usize, d: usize, a: usize, b: usize) -> &Scalar {
        &self.lower[self.at(c, d, a, b)]
    }
    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Scalar::is_zero)
    }

    fn quads(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        let n = self.size;
        (0..n * n * n * n).map(move |k| (k / (n * n * n), (k / (n * n)) % n, (k / n) % n, k % n))
    }

    pub fn antisymmetry_violations(&self) -> usize {
        self.quads().filter(|&(c, d, a, b)| !self.lowered(c, d, a, b).add(self.lowered(c, d, b, a)).is_zero()).count()
    }

    pub fn symmetry_violations(&self) -> usize {
        self.quads().filter(|&(c, d, a, b)| self.lowered(c, d, a, b) != self.lowered(d, c, a, b)).count()
    }

    /// `R(X,Y,Z,W) + R(X,Z,W,Y) + R(X,W,Y,Z)`.
    pub fn bianchi_violations(&self) -> usize {
        self.quads()
            .filter(|&(x, y, z, w)| {
                !self.lowered(x, y, z, w).add(self.lowered(x, z, w, y)).add(self.lowered(x, w, y, z)).is_zero()
            })
            .count()
    }

    /// Components with some argument equal to an `ē_h` that fail to vanish.
    pub fn h_direction_violations(&self, geom: &FrameGeometry) -> usize {
        self.quads()
            .filter(|&(c, d, a, b)| {
                [c, d, a, b].iter().any(|&i| geom.is_h_index(i)) && !self.lowered(c, d, a, b).is_zero()
            })
            .count()
    }

    /// Number of nonzero components of `∇_{ē_h} R` over all `h`.
    pub fn h_derivative_violations(&self, conn: &FrameConnection, geom: &FrameGeometry) -> usize {
        let n = self.size;
        let mut bad = 0;
        for i in 0..geom.l() {
            let h = geom.h_index(i);
            for (c, d, a, b) in self.quads() {
                let mut v = geom.frame_deriv(self.lowered(c, d, a, b), h);
                for g in 0..n {
                    v = v.sub(&conn.get(h, c, g).mul(self.lowered(g, d, a, b)));
                    v = v.sub(&conn.get(h, d, g).mul(self.lowered(c, g, a, b)));
                    v = v.sub(&conn.get(h, a, g).mul(self.lowered(c, d, g, b)));
                    v = v.sub(&conn.get(h, b, g).mul(self.lowered(c, d, a, g)));
                }
                if !v.is_zero() {
                    bad += 1;
                }
            }
        }
        bad
    }
}

/// `R(X_A,X_B)X_D = ∇_A∇_B X_D − ∇_B∇_A X_D − ∇_{[X_A,X_B]} X_D`.
pub fn curvature(conn: &FrameConnection, geom: &FrameGeometry) -> CurvatureTensor {
    let n = geom.size();
    assert_eq!(conn.size(), n, "connection and geometry disagree on frame size");
    let mut upper = vec![Scalar::zero(); n * n * n * n];
    for c in 0..n {
        for d in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut v = geom.frame_deriv(conn.get(b, d, c), a).sub(&geom.frame_deriv(conn.get(a, d, c), b));
                    for e in 0..n {
                        v = v.add(&conn.get(b, d, e).mul(conn.get(a, e, c)));
                        v = v.sub(&conn.get(a, d, e).mul(conn.get(b, e, c)));
                    }
                    for (e, s) in geom.bracket(a, b) {
                        v = v.sub(&s.mul(conn.get(*e, d, c)));
                    }
                    upper[((c * n + d) * n + a) * n + b] = v;
                }
            }
        }
    }
    let w = &geom.symplectic;
    let mut lower = vec![Scalar::zero(); n * n * n * n];
    for c in 0..n {
        for d in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut v = Scalar::zero();
                    for e in 0..n {
                        v = v.add(&w.get(c, e).mul(&upper[((e * n + d) * n + a) * n + b]));
                    }
                    lower[((c * n + d) * n + a) * n + b] = v;
                }
            }
        }
    }
    CurvatureTensor { size: n, upper, lower }
}
